//! Truncated Fock space over C^n.
//!
//! The space is spanned by the orthonormal monomials z^α/√α! with total
//! degree |α| ≤ N, ordered graded-lexicographically so each degree block is
//! contiguous. Everything downstream (symbols, quantization, translations)
//! works in this fixed ordered basis.
//!
//! Conventions fixed here, once, globally:
//! * inner product ⟨z, w⟩ = Σ z_j conj(w_j), reproducing kernel e^{z·w̄};
//! * the Gaussian reference measure is ν' = exp(-|z|²) L(dz)/π^n;
//! * the coherent state at z is the truncation of the kernel w ↦ e^{w·z̄},
//!   whose coefficient on z^α/√α! is conj(z)^α/√α!.

use std::collections::HashMap;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Result, WickError};

/// Default cap on the basis size for dense constructions; override with the
/// `WICKLAB_MAX_BASIS` environment variable.
pub const DEFAULT_MAX_BASIS: usize = 200_000;

/// Exponent vector α ∈ N^n with its total degree cached.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct MultiIndex {
    exponents: Vec<u32>,
    degree: u32,
}

impl MultiIndex {
    pub fn new(exponents: Vec<u32>) -> Self {
        let degree = exponents.iter().sum();
        Self { exponents, degree }
    }

    pub fn zero(n: usize) -> Self {
        Self {
            exponents: vec![0; n],
            degree: 0,
        }
    }

    /// α = e_j, the unit index in direction j.
    pub fn unit(n: usize, j: usize) -> Self {
        let mut e = vec![0; n];
        e[j] = 1;
        Self::new(e)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exponents
    }

    pub fn dim(&self) -> usize {
        self.exponents.len()
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn add(&self, other: &MultiIndex) -> MultiIndex {
        let exps = self
            .exponents
            .iter()
            .zip(&other.exponents)
            .map(|(a, b)| a + b)
            .collect();
        MultiIndex::new(exps)
    }

    /// Componentwise difference, `None` if any component would go negative.
    pub fn checked_sub(&self, other: &MultiIndex) -> Option<MultiIndex> {
        let mut exps = Vec::with_capacity(self.exponents.len());
        for (a, b) in self.exponents.iter().zip(&other.exponents) {
            if a < b {
                return None;
            }
            exps.push(a - b);
        }
        Some(MultiIndex::new(exps))
    }

    /// Componentwise `self ≥ other`.
    pub fn dominates(&self, other: &MultiIndex) -> bool {
        self.exponents
            .iter()
            .zip(&other.exponents)
            .all(|(a, b)| a >= b)
    }

    /// α! as f64 (exact below 171!, log-gamma above).
    pub fn factorial(&self) -> f64 {
        self.exponents.iter().map(|&a| factorial(a as u64)).product()
    }

    /// ln(α!).
    pub fn ln_factorial(&self) -> f64 {
        self.exponents
            .iter()
            .map(|&a| ln_factorial(a as u64))
            .sum()
    }
}

impl std::fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[")?;
        for (i, e) in self.exponents.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, "]")
    }
}

/// Graded-lexicographic order: total degree first, then lexicographic with
/// the higher leading exponent first, so (1,0) precedes (0,1).
impl Ord for MultiIndex {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.degree
            .cmp(&other.degree)
            .then_with(|| other.exponents.cmp(&self.exponents))
    }
}

impl PartialOrd for MultiIndex {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Complex dimension n and hard total-degree cutoff N.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct TruncationParams {
    pub n: usize,
    pub degree_max: u32,
}

impl TruncationParams {
    pub fn new(n: usize, degree_max: u32) -> Self {
        assert!(n >= 1, "dimension must be at least 1");
        Self { n, degree_max }
    }

    /// Number of monomials of total degree ≤ N: C(n+N, n).
    pub fn basis_size(&self) -> usize {
        binomial((self.n as u64) + (self.degree_max as u64), self.n as u64) as usize
    }

    /// Dimension of the homogeneous degree-k block: C(n+k-1, k).
    ///
    /// The companion count `cumulative_size(k)` = C(n+k, k) is the dimension
    /// of all degrees ≤ k; both are exposed because the two counts are easy
    /// to conflate.
    pub fn block_size(&self, k: u32) -> usize {
        binomial((self.n as u64) + (k as u64) - 1, k as u64) as usize
    }

    /// Dimension of the span of all degrees ≤ k: C(n+k, k).
    pub fn cumulative_size(&self, k: u32) -> usize {
        binomial((self.n as u64) + (k as u64), k as u64) as usize
    }

    /// Enforce the dense-construction guard.
    pub fn check_dense_guard(&self) -> Result<()> {
        let limit = std::env::var("WICKLAB_MAX_BASIS")
            .ok()
            .and_then(|v| v.parse::<usize>().ok())
            .unwrap_or(DEFAULT_MAX_BASIS);
        let size = self.basis_size();
        if size > limit {
            return Err(WickError::ResourceLimit { size, limit });
        }
        Ok(())
    }

    pub(crate) fn ensure_same(&self, other: &TruncationParams) -> Result<()> {
        if self != other {
            return Err(WickError::ParamsMismatch {
                n_left: self.n,
                deg_left: self.degree_max,
                n_right: other.n,
                deg_right: other.degree_max,
            });
        }
        Ok(())
    }
}

/// Enumerate the ordered graded-lex basis for `params`.
pub fn enumerate_basis(params: TruncationParams) -> Vec<MultiIndex> {
    let mut out = Vec::with_capacity(params.basis_size());
    let mut current = vec![0u32; params.n];
    for degree in 0..=params.degree_max {
        emit_block(&mut current, 0, degree, &mut out);
    }
    out
}

fn emit_block(current: &mut Vec<u32>, pos: usize, remaining: u32, out: &mut Vec<MultiIndex>) {
    if pos + 1 == current.len() {
        current[pos] = remaining;
        out.push(MultiIndex::new(current.clone()));
        current[pos] = 0;
        return;
    }
    // Descending leading exponent keeps (1,0,...) ahead of (0,1,...).
    for e in (0..=remaining).rev() {
        current[pos] = e;
        emit_block(current, pos + 1, remaining - e, out);
    }
    current[pos] = 0;
}

/// The enumerated basis with index lookup and degree-block offsets.
#[derive(Clone, Debug)]
pub struct FockBasis {
    params: TruncationParams,
    indices: Vec<MultiIndex>,
    position: HashMap<MultiIndex, usize>,
    block_starts: Vec<usize>,
}

impl FockBasis {
    pub fn new(params: TruncationParams) -> Self {
        let indices = enumerate_basis(params);
        let position = indices
            .iter()
            .enumerate()
            .map(|(i, a)| (a.clone(), i))
            .collect();
        let mut block_starts = Vec::with_capacity(params.degree_max as usize + 2);
        let mut offset = 0usize;
        for k in 0..=params.degree_max {
            block_starts.push(offset);
            offset += params.block_size(k);
        }
        block_starts.push(offset);
        Self {
            params,
            indices,
            position,
            block_starts,
        }
    }

    pub fn params(&self) -> TruncationParams {
        self.params
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn indices(&self) -> &[MultiIndex] {
        &self.indices
    }

    pub fn index_of(&self, alpha: &MultiIndex) -> Option<usize> {
        self.position.get(alpha).copied()
    }

    pub fn at(&self, i: usize) -> &MultiIndex {
        &self.indices[i]
    }

    /// Half-open index range of the degree-k block.
    pub fn block_range(&self, k: u32) -> std::ops::Range<usize> {
        let k = k as usize;
        self.block_starts[k]..self.block_starts[k + 1]
    }

    /// Degree of the basis element at flat position `i`.
    pub fn degree_at(&self, i: usize) -> u32 {
        self.indices[i].degree()
    }
}

/// Element Φ = Σ_α Φ_α z^α/√α! of the truncated space, stored in basis order.
#[derive(Clone, Debug, PartialEq)]
pub struct FockVector {
    params: TruncationParams,
    coeffs: DVector<Complex64>,
}

impl FockVector {
    pub fn zero(params: TruncationParams) -> Self {
        Self {
            params,
            coeffs: DVector::zeros(params.basis_size()),
        }
    }

    pub fn from_coeffs(params: TruncationParams, coeffs: DVector<Complex64>) -> Result<Self> {
        if coeffs.len() != params.basis_size() {
            return Err(WickError::DimensionMismatch {
                expected: params.basis_size(),
                got: coeffs.len(),
                context: "FockVector coefficients".into(),
            });
        }
        Ok(Self { params, coeffs })
    }

    /// Unit basis vector e_α.
    pub fn basis_vector(basis: &FockBasis, alpha: &MultiIndex) -> Self {
        let mut v = Self::zero(basis.params());
        let i = basis
            .index_of(alpha)
            .expect("multi-index outside truncation");
        v.coeffs[i] = Complex64::new(1.0, 0.0);
        v
    }

    pub fn params(&self) -> TruncationParams {
        self.params
    }

    pub fn coeffs(&self) -> &DVector<Complex64> {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut DVector<Complex64> {
        &mut self.coeffs
    }

    /// Parseval norm ‖Φ‖ = (Σ_α |Φ_α|²)^{1/2}.
    pub fn norm(&self) -> f64 {
        self.coeffs.norm()
    }

    /// Projection onto the homogeneous degree-k block.
    pub fn degree_component(&self, basis: &FockBasis, k: u32) -> FockVector {
        let mut v = Self::zero(self.params);
        for i in basis.block_range(k) {
            v.coeffs[i] = self.coeffs[i];
        }
        v
    }
}

/// ⟨Φ, Ψ⟩ = Σ_α Φ_α conj(Ψ_α); conjugate-linear in the second argument.
pub fn inner_product(phi: &FockVector, psi: &FockVector) -> Result<Complex64> {
    phi.params.ensure_same(&psi.params)?;
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 0..phi.coeffs.len() {
        acc += phi.coeffs[i] * psi.coeffs[i].conj();
    }
    Ok(acc)
}

/// Sobolev norm ‖Φ‖_s = (Σ_k |Φ_k|² (1+k)^s)^{1/2} over degree blocks.
pub fn sobolev_norm(phi: &FockVector, basis: &FockBasis, s: f64) -> f64 {
    let mut total = 0.0;
    for k in 0..=phi.params.degree_max {
        let mut block = 0.0;
        for i in basis.block_range(k) {
            block += phi.coeffs[i].norm_sqr();
        }
        total += block * (1.0 + k as f64).powf(s);
    }
    total.sqrt()
}

/// Truncation of the coherent state e_z(w) = e^{w·z̄}: coefficient on
/// z^α/√α! is conj(z)^α/√α!, so that ⟨Φ, e_z⟩ = Φ(z) and a_j e_z = z̄_j e_z
/// (up to the truncation edge).
pub fn coherent_state(z: &[Complex64], basis: &FockBasis) -> FockVector {
    assert_eq!(z.len(), basis.params().n, "coherent point has wrong dimension");
    let mut v = FockVector::zero(basis.params());
    for (i, alpha) in basis.indices().iter().enumerate() {
        let mut c = Complex64::new(1.0, 0.0);
        for (zj, &aj) in z.iter().zip(alpha.exponents()) {
            c *= zj.conj().powu(aj);
        }
        v.coeffs[i] = c / alpha.factorial().sqrt();
    }
    v
}

/// Gaussian moment ∫ w^α conj(w)^β dν'(w) = δ_{αβ} α!.
pub fn gaussian_moment(alpha: &MultiIndex, beta: &MultiIndex) -> f64 {
    assert_eq!(alpha.dim(), beta.dim(), "moment indices must share n");
    if alpha == beta {
        alpha.factorial()
    } else {
        0.0
    }
}

/// Dense operator over the ordered graded basis.
///
/// The stored matrix M satisfies (AΦ)_β = Σ_α M[β, α] Φ_α, i.e. column α is
/// the image of the basis vector e_α; the matrix adjoint then represents A*.
/// `degree_shift_range` records the (min, max) degree change the operator can
/// effect, used by callers that need to know the truncation-safe block.
#[derive(Clone, Debug)]
pub struct FockOperator {
    params: TruncationParams,
    matrix: DMatrix<Complex64>,
    degree_shift_range: (i32, i32),
}

impl FockOperator {
    pub fn new(
        params: TruncationParams,
        matrix: DMatrix<Complex64>,
        degree_shift_range: (i32, i32),
    ) -> Result<Self> {
        let dim = params.basis_size();
        if matrix.nrows() != dim || matrix.ncols() != dim {
            return Err(WickError::DimensionMismatch {
                expected: dim,
                got: matrix.nrows().max(matrix.ncols()),
                context: "FockOperator matrix".into(),
            });
        }
        Ok(Self {
            params,
            matrix,
            degree_shift_range,
        })
    }

    pub fn identity(params: TruncationParams) -> Self {
        Self {
            params,
            matrix: DMatrix::identity(params.basis_size(), params.basis_size()),
            degree_shift_range: (0, 0),
        }
    }

    pub fn params(&self) -> TruncationParams {
        self.params
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn matrix_mut(&mut self) -> &mut DMatrix<Complex64> {
        &mut self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn degree_shift_range(&self) -> (i32, i32) {
        self.degree_shift_range
    }

    pub fn adjoint(&self) -> FockOperator {
        FockOperator {
            params: self.params,
            matrix: self.matrix.adjoint(),
            degree_shift_range: (-self.degree_shift_range.1, -self.degree_shift_range.0),
        }
    }

    pub fn apply(&self, phi: &FockVector) -> Result<FockVector> {
        self.params.ensure_same(&phi.params)?;
        Ok(FockVector {
            params: self.params,
            coeffs: &self.matrix * phi.coeffs(),
        })
    }

    /// Operator composition self ∘ other (apply `other` first).
    pub fn compose(&self, other: &FockOperator) -> Result<FockOperator> {
        self.params.ensure_same(&other.params)?;
        let (lo_a, hi_a) = self.degree_shift_range;
        let (lo_b, hi_b) = other.degree_shift_range;
        Ok(FockOperator {
            params: self.params,
            matrix: &self.matrix * &other.matrix,
            degree_shift_range: (lo_a + lo_b, hi_a + hi_b),
        })
    }

    pub fn add(&self, other: &FockOperator) -> Result<FockOperator> {
        self.params.ensure_same(&other.params)?;
        Ok(FockOperator {
            params: self.params,
            matrix: &self.matrix + &other.matrix,
            degree_shift_range: (
                self.degree_shift_range.0.min(other.degree_shift_range.0),
                self.degree_shift_range.1.max(other.degree_shift_range.1),
            ),
        })
    }

    pub fn scale(&self, c: Complex64) -> FockOperator {
        FockOperator {
            params: self.params,
            matrix: self.matrix.clone() * c,
            degree_shift_range: self.degree_shift_range,
        }
    }

    pub fn sub(&self, other: &FockOperator) -> Result<FockOperator> {
        self.add(&other.scale(Complex64::new(-1.0, 0.0)))
    }

    pub fn max_hermitian_defect(&self) -> f64 {
        let adj = self.matrix.adjoint();
        max_entry_norm(&(&self.matrix - adj))
    }

    /// Largest entrywise deviation against another operator.
    pub fn max_entry_difference(&self, other: &FockOperator) -> f64 {
        max_entry_norm(&(&self.matrix - &other.matrix))
    }
}

/// Largest |entry| of a complex matrix.
pub fn max_entry_norm(m: &DMatrix<Complex64>) -> f64 {
    m.iter().map(|x| x.norm()).fold(0.0, f64::max)
}

/// k! exact below 171, log-gamma evaluation above.
pub fn factorial(k: u64) -> f64 {
    if k < 171 {
        let mut acc = 1.0f64;
        for j in 2..=k {
            acc *= j as f64;
        }
        acc
    } else {
        ln_factorial(k).exp()
    }
}

/// ln(k!) via log-gamma.
pub fn ln_factorial(k: u64) -> f64 {
    if k < 2 {
        0.0
    } else {
        statrs::function::gamma::ln_gamma(k as f64 + 1.0)
    }
}

/// Binomial coefficient C(n, k) as f64; exact u128 arithmetic for small
/// arguments, log-gamma with rounding above.
pub fn binomial(n: u64, k: u64) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    if n < 63 {
        let mut num: u128 = 1;
        let mut den: u128 = 1;
        for j in 0..k {
            num *= (n - j) as u128;
            den *= (j + 1) as u128;
        }
        (num / den) as f64
    } else {
        (ln_factorial(n) - ln_factorial(k) - ln_factorial(n - k)).exp().round()
    }
}
