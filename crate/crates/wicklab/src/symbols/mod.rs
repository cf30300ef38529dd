//! Bi-holomorphic polynomial symbols in (z, z̄) and the Wick calculus on
//! them: the transforms exp(±∂_z∂_z̄), the anti-Wick composition series,
//! Bergman projection and Gaussian-measure inner products.
//!
//! Polynomials are generic over the coefficient ring so the transform
//! identities can be checked in exact rational arithmetic: the two
//! instantiations are `Complex64` (everything numerical) and
//! `Complex<BigRational>` (exactness tests). The transforms are exact on
//! polynomials in either ring; only the scalar type decides whether
//! "exact" means "to rounding" or "on the nose".
//!
//! Composition convention for `compose_antiwick(b, a)` (the symbol of B∘A):
//!
//!   c(z, z̄) = Σ_θ ((-1)^{|θ|}/θ!) (∂_z^θ b)(z, z̄) · (∂_z̄^θ a)(z, z̄),
//!
//! i.e. the trace over ordered derivative slots collapses to a sum over
//! multi-indices with multinomial weights, and `b` carries the holomorphic
//! derivatives. The matrix oracle at n = 1 pins this convention:
//! b = z̄, a = z composes to z z̄ (annihilation after creation), while
//! b = z, a = z̄ composes to z z̄ - 1.

mod expand;
mod hermite;
mod parse;
mod radial;

pub use expand::{hermite_expand, HermiteExpansion};
pub use hermite::{hermite_poly, hermite_poly_normalized, hermite_tensor, HermiteIndex};
pub use parse::{format_complex, parse_complex_list, parse_poly, parse_poly_with_dim};
pub use radial::{mollifier, RadialKind, RadialSymbol};

use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::fock::{gaussian_moment, MultiIndex};

/// Coefficient ring for symbol polynomials.
pub trait Coefficient:
    Clone
    + PartialEq
    + std::fmt::Debug
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn conj(&self) -> Self;
    /// Exact embedding of a nonnegative integer.
    fn from_nat(n: u128) -> Self;
    /// Multiply by the rational num/den (den > 0); exact in the rational ring.
    fn mul_nat_ratio(self, num: u128, den: u128) -> Self;
    /// Embedding of α!, exact in the rational ring and f64-rounded otherwise.
    fn from_multi_factorial(idx: &MultiIndex) -> Self;
}

impl Coefficient for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }

    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }

    fn is_zero(&self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }

    fn conj(&self) -> Self {
        Complex64::conj(self)
    }

    fn from_nat(n: u128) -> Self {
        Complex64::new(n as f64, 0.0)
    }

    fn mul_nat_ratio(self, num: u128, den: u128) -> Self {
        self * (num as f64 / den as f64)
    }

    fn from_multi_factorial(idx: &MultiIndex) -> Self {
        Complex64::new(idx.factorial(), 0.0)
    }
}

/// Exact coefficient ring: Gaussian rationals.
pub type ExactScalar = num_complex::Complex<BigRational>;

impl Coefficient for ExactScalar {
    fn zero() -> Self {
        num_complex::Complex::new(BigRational::zero(), BigRational::zero())
    }

    fn one() -> Self {
        num_complex::Complex::new(BigRational::one(), BigRational::zero())
    }

    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    fn conj(&self) -> Self {
        num_complex::Complex::new(self.re.clone(), -self.im.clone())
    }

    fn from_nat(n: u128) -> Self {
        num_complex::Complex::new(BigRational::from_integer(BigInt::from(n)), BigRational::zero())
    }

    fn mul_nat_ratio(self, num: u128, den: u128) -> Self {
        let ratio = BigRational::new(BigInt::from(num), BigInt::from(den));
        num_complex::Complex::new(self.re * ratio.clone(), self.im * ratio)
    }

    fn from_multi_factorial(idx: &MultiIndex) -> Self {
        let mut acc = BigInt::one();
        for &e in idx.exponents() {
            for j in 2..=e as u64 {
                acc *= BigInt::from(j);
            }
        }
        num_complex::Complex::new(BigRational::from_integer(acc), BigRational::zero())
    }
}

/// Finite sum Σ c_{αβ} z^α z̄^β; the map is keyed on (α, β) in graded-lex
/// order so iteration is deterministic.
#[derive(Clone, PartialEq, Debug)]
pub struct Poly<T: Coefficient> {
    n: usize,
    terms: BTreeMap<(MultiIndex, MultiIndex), T>,
}

/// The numeric instantiation used everywhere outside the exactness tests.
pub type PolySymbol = Poly<Complex64>;

impl<T: Coefficient> Poly<T> {
    pub fn zero(n: usize) -> Self {
        Self {
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(n: usize, c: T) -> Self {
        let mut p = Self::zero(n);
        p.add_term(MultiIndex::zero(n), MultiIndex::zero(n), c);
        p
    }

    pub fn monomial(alpha: MultiIndex, beta: MultiIndex, c: T) -> Self {
        assert_eq!(alpha.dim(), beta.dim(), "monomial index dimensions differ");
        let mut p = Self::zero(alpha.dim());
        p.add_term(alpha, beta, c);
        p
    }

    /// |z|² = Σ_j z_j z̄_j.
    pub fn abs_squared(n: usize) -> Self {
        let mut p = Self::zero(n);
        for j in 0..n {
            p.add_term(MultiIndex::unit(n, j), MultiIndex::unit(n, j), T::one());
        }
        p
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &MultiIndex, &T)> {
        self.terms.iter().map(|((a, b), c)| (a, b, c))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coefficient(&self, alpha: &MultiIndex, beta: &MultiIndex) -> T {
        self.terms
            .get(&(alpha.clone(), beta.clone()))
            .cloned()
            .unwrap_or_else(T::zero)
    }

    pub fn add_term(&mut self, alpha: MultiIndex, beta: MultiIndex, c: T) {
        assert_eq!(alpha.dim(), self.n, "term dimension mismatch");
        assert_eq!(beta.dim(), self.n, "term dimension mismatch");
        if c.is_zero() {
            return;
        }
        let key = (alpha, beta);
        let entry = self.terms.remove(&key);
        let merged = match entry {
            Some(old) => old + c,
            None => c,
        };
        if merged.is_zero() {
            // dropped: exact cancellation
        } else {
            self.terms.insert(key, merged);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n, "polynomial dimensions differ");
        let mut out = self.clone();
        for ((a, b), c) in &other.terms {
            out.add_term(a.clone(), b.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        let mut out = Self::zero(self.n);
        for ((a, b), c) in &self.terms {
            out.terms.insert((a.clone(), b.clone()), -c.clone());
        }
        out
    }

    pub fn scale(&self, c: &T) -> Self {
        let mut out = Self::zero(self.n);
        for ((a, b), coeff) in &self.terms {
            let scaled = coeff.clone() * c.clone();
            if !scaled.is_zero() {
                out.terms.insert((a.clone(), b.clone()), scaled);
            }
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n, "polynomial dimensions differ");
        let mut out = Self::zero(self.n);
        for ((a1, b1), c1) in &self.terms {
            for ((a2, b2), c2) in &other.terms {
                out.add_term(a1.add(a2), b1.add(b2), c1.clone() * c2.clone());
            }
        }
        out
    }

    /// Complex conjugate symbol: c_{αβ} z^α z̄^β → conj(c_{αβ}) z^β z̄^α.
    pub fn conj(&self) -> Self {
        let mut out = Self::zero(self.n);
        for ((a, b), c) in &self.terms {
            out.add_term(b.clone(), a.clone(), c.conj());
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Holomorphic iff every antiholomorphic exponent vanishes.
    pub fn is_holomorphic(&self) -> bool {
        self.terms.keys().all(|(_, b)| b.degree() == 0)
    }

    /// Real-valued on C^n iff the coefficient table is Hermitian.
    pub fn is_real_valued(&self) -> bool {
        self.sub(&self.conj()).is_zero()
    }

    /// Largest |α| over terms.
    pub fn holo_degree(&self) -> u32 {
        self.terms.keys().map(|(a, _)| a.degree()).max().unwrap_or(0)
    }

    /// Largest |β| over terms.
    pub fn antiholo_degree(&self) -> u32 {
        self.terms.keys().map(|(_, b)| b.degree()).max().unwrap_or(0)
    }

    /// Largest |α| + |β| over terms.
    pub fn total_degree(&self) -> u32 {
        self.terms
            .keys()
            .map(|(a, b)| a.degree() + b.degree())
            .max()
            .unwrap_or(0)
    }

    /// ∂_z^p ∂_z̄^q applied termwise; exact.
    pub fn differentiate(&self, p: &MultiIndex, q: &MultiIndex) -> Self {
        let mut out = Self::zero(self.n);
        for ((a, b), c) in &self.terms {
            let (Some(a_new), Some(b_new)) = (a.checked_sub(p), b.checked_sub(q)) else {
                continue;
            };
            let scale = falling_factorial(a, p) * falling_factorial(b, q);
            out.add_term(a_new, b_new, c.clone() * T::from_nat(scale));
        }
        out
    }

    /// All derivatives ∂_z^p ∂_z̄^q with |p| = holo_order, |q| = antiholo_order,
    /// arranged by multi-index pair.
    pub fn differentiate_tensor(
        &self,
        holo_order: u32,
        antiholo_order: u32,
    ) -> BTreeMap<(MultiIndex, MultiIndex), Self> {
        let mut out = BTreeMap::new();
        for p in compositions(self.n, holo_order) {
            for q in compositions(self.n, antiholo_order) {
                out.insert((p.clone(), q.clone()), self.differentiate(&p, &q));
            }
        }
        out
    }

    /// tr (∂_z ∂_z̄)^j: contract j holomorphic against j antiholomorphic
    /// derivative slots, Σ_{|θ|=j} (j!/θ!) ∂_z^θ ∂_z̄^θ.
    pub fn laplacian_power(&self, j: u32) -> Self {
        let mut out = Self::zero(self.n);
        for theta in compositions(self.n, j) {
            let weight = multinomial(j, &theta);
            let d = self.differentiate(&theta, &theta);
            out = out.add(&d.scale(&T::from_nat(weight)));
        }
        out
    }
}

/// Exact componentwise falling factorial Π_j a_j!/(a_j - p_j)! as u128.
/// Panics on overflow, which cannot occur at the symbol degrees this crate
/// works with (the product stays below 2^127 up to total degree ~30).
fn falling_factorial(a: &MultiIndex, p: &MultiIndex) -> u128 {
    let mut acc: u128 = 1;
    for (&aj, &pj) in a.exponents().iter().zip(p.exponents()) {
        for i in 0..pj {
            acc = acc
                .checked_mul((aj - i) as u128)
                .expect("falling factorial overflow: symbol degree too large");
        }
    }
    acc
}

/// j!/θ! for |θ| = j (the number of ordered arrangements of θ).
fn multinomial(j: u32, theta: &MultiIndex) -> u128 {
    debug_assert_eq!(theta.degree(), j);
    let mut num: u128 = 1;
    for i in 2..=j as u128 {
        num = num.checked_mul(i).expect("multinomial overflow");
    }
    let mut den: u128 = 1;
    for &t in theta.exponents() {
        for i in 2..=t as u128 {
            den *= i;
        }
    }
    num / den
}

/// θ! as u128.
fn multi_factorial_u128(theta: &MultiIndex) -> u128 {
    let mut acc: u128 = 1;
    for &t in theta.exponents() {
        for i in 2..=t as u128 {
            acc = acc.checked_mul(i).expect("factorial overflow");
        }
    }
    acc
}

/// All θ ∈ N^n with |θ| = degree, in graded-lex block order.
pub fn compositions(n: usize, degree: u32) -> Vec<MultiIndex> {
    let mut out = Vec::new();
    let mut current = vec![0u32; n];
    fn rec(current: &mut Vec<u32>, pos: usize, remaining: u32, out: &mut Vec<MultiIndex>) {
        if pos + 1 == current.len() {
            current[pos] = remaining;
            out.push(MultiIndex::new(current.clone()));
            current[pos] = 0;
            return;
        }
        for e in (0..=remaining).rev() {
            current[pos] = e;
            rec(current, pos + 1, remaining - e, out);
        }
        current[pos] = 0;
    }
    rec(&mut current, 0, degree, &mut out);
    out
}

/// All θ with θ ≤ bound componentwise (odometer order).
fn sub_indices(bound: &MultiIndex) -> Vec<MultiIndex> {
    let n = bound.dim();
    let mut out = Vec::new();
    let mut current = vec![0u32; n];
    loop {
        out.push(MultiIndex::new(current.clone()));
        let mut pos = 0;
        loop {
            if pos == n {
                return out;
            }
            if current[pos] < bound.exponents()[pos] {
                current[pos] += 1;
                break;
            }
            current[pos] = 0;
            pos += 1;
        }
    }
}

fn min_index(a: &MultiIndex, b: &MultiIndex) -> MultiIndex {
    MultiIndex::new(
        a.exponents()
            .iter()
            .zip(b.exponents())
            .map(|(&x, &y)| x.min(y))
            .collect(),
    )
}

/// exp(∂_z̄ ∂_z) f = Σ_θ (1/θ!) ∂_z^θ ∂_z̄^θ f; exact and finite on
/// polynomials. Maps an anti-Wick symbol to the Wick symbol of the same
/// operator.
pub fn wick_transform<T: Coefficient>(f: &Poly<T>) -> Poly<T> {
    exp_contraction(f, false)
}

/// exp(-∂_z̄ ∂_z) f; the exact inverse of `wick_transform` on polynomials.
pub fn antiwick_transform<T: Coefficient>(f: &Poly<T>) -> Poly<T> {
    exp_contraction(f, true)
}

fn exp_contraction<T: Coefficient>(f: &Poly<T>, alternate: bool) -> Poly<T> {
    let mut out = Poly::zero(f.dim());
    for ((a, b), c) in &f.terms {
        let bound = min_index(a, b);
        for theta in sub_indices(&bound) {
            let num = falling_factorial(a, &theta) * falling_factorial(b, &theta);
            let den = multi_factorial_u128(&theta);
            let mut coeff = c.clone().mul_nat_ratio(num, den);
            if alternate && theta.degree() % 2 == 1 {
                coeff = -coeff;
            }
            out.add_term(
                a.checked_sub(&theta).unwrap(),
                b.checked_sub(&theta).unwrap(),
                coeff,
            );
        }
    }
    out
}

/// Anti-Wick symbol of the composition B∘A from the anti-Wick symbols of
/// B and A; exact when either operand is a polynomial (always, here).
pub fn compose_antiwick<T: Coefficient>(b: &Poly<T>, a: &Poly<T>) -> Poly<T> {
    assert_eq!(b.dim(), a.dim(), "composition dimension mismatch");
    let n = b.dim();
    let max_j = b.holo_degree().min(a.antiholo_degree());
    let mut out = Poly::zero(n);
    for j in 0..=max_j {
        for theta in compositions(n, j) {
            // (-1)^j / j! times the j!/θ! ordered-slot multiplicity: (-1)^j/θ!
            let db = b.differentiate(&theta, &MultiIndex::zero(n));
            if db.is_zero() {
                continue;
            }
            let da = a.differentiate(&MultiIndex::zero(n), &theta);
            if da.is_zero() {
                continue;
            }
            let mut term = db.mul(&da);
            term = term.scale(&T::one().mul_nat_ratio(1, multi_factorial_u128(&theta)));
            if j % 2 == 1 {
                term = term.neg();
            }
            out = out.add(&term);
        }
    }
    out
}

/// Bergman projection of z^α z̄^β onto the holomorphic subspace:
/// π(z^α z̄^β) = [α ≥ β] (α!/(α-β)!) z^{α-β}, extended linearly; exact.
pub fn bergman_project<T: Coefficient>(f: &Poly<T>) -> Poly<T> {
    let mut out = Poly::zero(f.dim());
    let zero = MultiIndex::zero(f.dim());
    for ((a, b), c) in &f.terms {
        if let Some(rest) = a.checked_sub(b) {
            let scale = falling_factorial(a, b);
            out.add_term(rest, zero.clone(), c.clone() * T::from_nat(scale));
        }
    }
    out
}

/// Bergman projection evaluated the slow way, coefficient by coefficient via
/// Gaussian moments: π f(z) = Σ_γ (z^γ/γ!) ∫ f(w) w̄^γ dν'. Serves as the
/// independent oracle for `bergman_project`.
pub fn bergman_project_by_moments(f: &PolySymbol) -> PolySymbol {
    let n = f.dim();
    let mut out = Poly::zero(n);
    let zero = MultiIndex::zero(n);
    for ((a, b), c) in &f.terms {
        // ∫ w^a w̄^{b+γ} dν' is nonzero only for γ = a - b
        if let Some(gamma) = a.checked_sub(b) {
            let coeff = c * gaussian_moment(a, &b.add(&gamma)) / gamma.factorial();
            out.add_term(gamma, zero.clone(), coeff);
        }
    }
    out
}

/// L²(ν') pairing (f, g) = ∫ f conj(g) dν' via exact Gaussian moments.
pub fn l2_inner_product(f: &PolySymbol, g: &PolySymbol) -> Complex64 {
    assert_eq!(f.dim(), g.dim(), "inner product dimension mismatch");
    let mut acc = Complex64::new(0.0, 0.0);
    for ((a1, b1), c1) in &f.terms {
        for ((a2, b2), c2) in &g.terms {
            // conj(z^{a2} z̄^{b2}) = z^{b2} z̄^{a2}
            let alpha = a1.add(b2);
            let beta = b1.add(a2);
            if alpha == beta {
                acc += c1 * c2.conj() * alpha.factorial();
            }
        }
    }
    acc
}

/// ∫ |f|² dν'.
pub fn l2_norm_squared(f: &PolySymbol) -> f64 {
    l2_inner_product(f, f).re
}

/// ∬ |g(z, w̄)|² dν'(z) dν'(w) for the bi-holomorphic extension of a Wick
/// symbol g(z, z̄) = Σ c_{αβ} z^α z̄^β (replace z̄ by w̄): the double integral
/// collapses to Σ |c_{αβ}|² α! β!.
pub fn biholomorphic_l2_norm_squared(g: &PolySymbol) -> f64 {
    g.terms()
        .map(|(a, b, c)| c.norm_sqr() * a.factorial() * b.factorial())
        .sum()
}

/// Evaluation at a point of C^n (numeric coefficients only).
impl PolySymbol {
    pub fn eval(&self, z: &[Complex64]) -> Complex64 {
        assert_eq!(z.len(), self.n, "evaluation point dimension mismatch");
        let mut acc = Complex64::new(0.0, 0.0);
        for ((a, b), c) in &self.terms {
            let mut term = *c;
            for (zj, (&aj, &bj)) in z
                .iter()
                .zip(a.exponents().iter().zip(b.exponents()))
            {
                term *= zj.powu(aj) * zj.conj().powu(bj);
            }
            acc += term;
        }
        acc
    }

    /// Exact-rational copy of a float polynomial (coefficients are taken as
    /// the dyadic rationals they already are).
    pub fn to_exact(&self) -> Poly<ExactScalar> {
        let mut out = Poly::zero(self.n);
        for ((a, b), c) in &self.terms {
            let re = BigRational::from_float(c.re).expect("non-finite coefficient");
            let im = BigRational::from_float(c.im).expect("non-finite coefficient");
            out.add_term(a.clone(), b.clone(), num_complex::Complex::new(re, im));
        }
        out
    }
}

impl Poly<ExactScalar> {
    /// Round an exact polynomial to f64 coefficients.
    pub fn to_f64(&self) -> PolySymbol {
        use num_traits::ToPrimitive;
        let mut out = Poly::zero(self.n);
        for ((a, b), c) in &self.terms {
            let re = c.re.to_f64().expect("rational out of f64 range");
            let im = c.im.to_f64().expect("rational out of f64 range");
            out.add_term(a.clone(), b.clone(), Complex64::new(re, im));
        }
        out
    }
}
