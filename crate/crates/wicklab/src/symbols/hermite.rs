//! Complex Hermite polynomials.
//!
//! The one-dimensional family comes out of the generating function
//! exp(-|z+w|²) e^{|w|²} = Σ_{k,l} (-1)^{k+l} 𝓗_{k,l}(w, w̄) z̄^k z^l/(k! l!),
//! which expands to
//!
//!   𝓗_{k,l}(w, w̄) = k! l! Σ_m (-1)^m w^{k-m} w̄^{l-m} / (m! (k-m)! (l-m)!).
//!
//! The normalized H_{k,l} = 𝓗_{k,l}/√(k!l!) are the orthonormalization of
//! the monomials z^k z̄^l in L²(ν'); tensor products over coordinates give
//! the basis for n > 1.

use num_complex::Complex64;

use super::{Coefficient, Poly, PolySymbol};
use crate::fock::{factorial, MultiIndex};

/// 1D index pair (k, l), or multi-index pairs via `hermite_tensor`.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct HermiteIndex {
    pub k: u32,
    pub l: u32,
}

impl HermiteIndex {
    pub fn new(k: u32, l: u32) -> Self {
        Self { k, l }
    }
}

/// The unnormalized 𝓗_{k,l} in one variable.
pub fn hermite_poly<T: Coefficient>(idx: HermiteIndex) -> Poly<T> {
    hermite_poly_in_coordinate(idx, 1, 0)
}

/// 𝓗_{k,l} in coordinate `j` of an n-variable polynomial ring.
fn hermite_poly_in_coordinate<T: Coefficient>(
    idx: HermiteIndex,
    n: usize,
    j: usize,
) -> Poly<T> {
    let HermiteIndex { k, l } = idx;
    let mut out = Poly::zero(n);
    for m in 0..=k.min(l) {
        // k! l! / (m! (k-m)! (l-m)!) = C(k,m) * l!/(l-m)! ... built exactly
        let num = binom_u128(k, m) * falling_u128(l, m);
        let mut coeff = T::from_nat(num);
        if m % 2 == 1 {
            coeff = -coeff;
        }
        let mut alpha = vec![0u32; n];
        let mut beta = vec![0u32; n];
        alpha[j] = k - m;
        beta[j] = l - m;
        out.add_term(MultiIndex::new(alpha), MultiIndex::new(beta), coeff);
    }
    out
}

/// The orthonormal H_{k,l} = 𝓗_{k,l} (k! l!)^{-1/2} (numeric coefficients).
pub fn hermite_poly_normalized(idx: HermiteIndex) -> PolySymbol {
    let raw: PolySymbol = hermite_poly(idx);
    let norm = (factorial(idx.k as u64) * factorial(idx.l as u64)).sqrt();
    raw.scale(&Complex64::new(1.0 / norm, 0.0))
}

/// Tensor-product Hermite polynomial Π_j 𝓗_{K_j, L_j}(z_j, z̄_j).
pub fn hermite_tensor<T: Coefficient>(upper: &MultiIndex, lower: &MultiIndex) -> Poly<T> {
    assert_eq!(upper.dim(), lower.dim(), "hermite tensor index mismatch");
    let n = upper.dim();
    let mut out = Poly::constant(n, T::one());
    for j in 0..n {
        let factor = hermite_poly_in_coordinate(
            HermiteIndex::new(upper.exponents()[j], lower.exponents()[j]),
            n,
            j,
        );
        out = out.mul(&factor);
    }
    out
}

fn binom_u128(n: u32, k: u32) -> u128 {
    let mut num: u128 = 1;
    let mut den: u128 = 1;
    for i in 0..k.min(n - k) {
        num *= (n - i) as u128;
        den *= (i + 1) as u128;
    }
    num / den
}

fn falling_u128(n: u32, k: u32) -> u128 {
    let mut acc: u128 = 1;
    for i in 0..k {
        acc *= (n - i) as u128;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbols::l2_inner_product;
    use approx::assert_abs_diff_eq;

    fn mi(v: &[u32]) -> MultiIndex {
        MultiIndex::new(v.to_vec())
    }

    #[test]
    fn lowest_cases() {
        let h00: PolySymbol = hermite_poly(HermiteIndex::new(0, 0));
        assert_eq!(h00, Poly::constant(1, Complex64::new(1.0, 0.0)));

        // 𝓗_{1,1} = w w̄ - 1
        let h11: PolySymbol = hermite_poly(HermiteIndex::new(1, 1));
        assert_eq!(
            h11.coefficient(&mi(&[1]), &mi(&[1])),
            Complex64::new(1.0, 0.0)
        );
        assert_eq!(
            h11.coefficient(&mi(&[0]), &mi(&[0])),
            Complex64::new(-1.0, 0.0)
        );
        assert_eq!(h11.num_terms(), 2);

        // 𝓗_{2,1} = w²w̄ - 2w
        let h21: PolySymbol = hermite_poly(HermiteIndex::new(2, 1));
        assert_eq!(
            h21.coefficient(&mi(&[2]), &mi(&[1])),
            Complex64::new(1.0, 0.0)
        );
        assert_eq!(
            h21.coefficient(&mi(&[1]), &mi(&[0])),
            Complex64::new(-2.0, 0.0)
        );
    }

    #[test]
    fn generating_function_oracle() {
        // Expand exp(-|z|² - z w̄ - z̄ w) symbolically in z, z̄ up to order 3
        // and compare the coefficient of z̄^k z^l against
        // (-1)^{k+l} 𝓗_{k,l}/(k! l!).
        // coefficient of z̄^k z^l: Σ_m (-1)^{k+l-m} w^{k-m} w̄^{l-m} / (m!(k-m)!(l-m)!)
        for k in 0..=3u32 {
            for l in 0..=3u32 {
                let h: PolySymbol = hermite_poly(HermiteIndex::new(k, l));
                let kl = crate::fock::factorial(k as u64) * crate::fock::factorial(l as u64);
                for m in 0..=k.min(l) {
                    let sign = if (k + l - m) % 2 == 1 { -1.0 } else { 1.0 };
                    let expected = sign
                        / (crate::fock::factorial(m as u64)
                            * crate::fock::factorial((k - m) as u64)
                            * crate::fock::factorial((l - m) as u64));
                    // (-1)^{k+l} h / (k! l!) at the (k-m, l-m) monomial
                    let got = h.coefficient(&mi(&[k - m]), &mi(&[l - m])).re
                        * if (k + l) % 2 == 1 { -1.0 } else { 1.0 }
                        / kl;
                    assert_abs_diff_eq!(got, expected, epsilon = 1e-12);
                }
            }
        }
    }

    #[test]
    fn orthonormality_small_gram() {
        // ⟨H_{1,1}, H_{2,2}⟩ = 0 and ⟨H_{1,1}, H_{1,1}⟩ = 1
        let h11 = hermite_poly_normalized(HermiteIndex::new(1, 1));
        let h22 = hermite_poly_normalized(HermiteIndex::new(2, 2));
        assert_abs_diff_eq!(l2_inner_product(&h11, &h22).norm(), 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(l2_inner_product(&h11, &h11).re, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn tensor_product_orthonormality() {
        // n = 2: a couple of tensor pairs
        let a: PolySymbol = hermite_tensor(&mi(&[1, 0]), &mi(&[0, 1]));
        let b: PolySymbol = hermite_tensor(&mi(&[0, 1]), &mi(&[1, 0]));
        let norm_a = (1.0f64).sqrt(); // 1!0!0!1! = 1
        let na = a.scale(&Complex64::new(1.0 / norm_a, 0.0));
        assert_abs_diff_eq!(l2_inner_product(&na, &na).re, 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(l2_inner_product(&a, &b).norm(), 0.0, epsilon = 1e-12);
    }
}
