//! Hermite-coefficient extraction for sampled (non-polynomial) symbols.
//!
//! f_{K,L} = (f, H_{K,L})_{ν'} is computed by tensorized radial-angular
//! quadrature: Gauss-Laguerre in t_j = |w_j|² against e^{-t}, uniform
//! angular grids (exact for trigonometric polynomials up to the grid
//! order). A refinement doubling decides the convergence flag.

use std::collections::BTreeMap;

use num_complex::Complex64;

use super::{compositions, hermite_tensor, Poly, PolySymbol};
use crate::error::{Result, WickError};
use crate::fock::MultiIndex;
use crate::quad::gauss_laguerre;

/// Coefficients f_{K,L} for |K| + |L| ≤ cutoff with quadrature diagnostics.
#[derive(Clone, Debug)]
pub struct HermiteExpansion {
    pub coeffs: BTreeMap<(MultiIndex, MultiIndex), Complex64>,
    pub converged: bool,
    pub disagreement: f64,
    pub tolerance: f64,
}

impl HermiteExpansion {
    pub fn coefficient(&self, upper: &MultiIndex, lower: &MultiIndex) -> Complex64 {
        self.coeffs
            .get(&(upper.clone(), lower.clone()))
            .copied()
            .unwrap_or_else(|| Complex64::new(0.0, 0.0))
    }

    /// Reassemble the Wick-transform image Σ f_{K,L} z^K z̄^L/√(K! L!) of the
    /// expanded symbol, dropping coefficients below `floor`.
    pub fn reconstruct_wick(&self, n: usize, floor: f64) -> PolySymbol {
        let mut out = Poly::zero(n);
        for ((upper, lower), c) in &self.coeffs {
            if c.norm() <= floor {
                continue;
            }
            let norm = (upper.factorial() * lower.factorial()).sqrt();
            out.add_term(upper.clone(), lower.clone(), c / norm);
        }
        out
    }
}

/// Expand a sampled symbol over C^n (n ≤ 2) against the orthonormal Hermite
/// basis, truncated at total degree `cutoff`.
pub fn hermite_expand(
    f: &dyn Fn(&[Complex64]) -> Complex64,
    n: usize,
    cutoff: u32,
    tol: f64,
) -> Result<HermiteExpansion> {
    if n == 0 || n > 2 {
        return Err(WickError::InvalidConfig(format!(
            "hermite_expand supports n = 1 or 2, got {n}"
        )));
    }
    let radial = 24usize.max(2 * cutoff as usize + 8);
    let angular = 32usize.max(4 * cutoff as usize + 8);
    let coarse = expand_on_grid(f, n, cutoff, radial, angular);
    let fine = expand_on_grid(f, n, cutoff, 2 * radial, 2 * angular);
    let mut disagreement = 0.0f64;
    for (key, fine_val) in &fine {
        let coarse_val = coarse
            .get(key)
            .copied()
            .unwrap_or_else(|| Complex64::new(0.0, 0.0));
        disagreement = disagreement.max((fine_val - coarse_val).norm());
    }
    Ok(HermiteExpansion {
        coeffs: fine,
        converged: disagreement <= tol,
        disagreement,
        tolerance: tol,
    })
}

fn expand_on_grid(
    f: &dyn Fn(&[Complex64]) -> Complex64,
    n: usize,
    cutoff: u32,
    radial: usize,
    angular: usize,
) -> BTreeMap<(MultiIndex, MultiIndex), Complex64> {
    // basis polynomials H_{K,L}, |K|+|L| ≤ cutoff
    let mut basis: Vec<(MultiIndex, MultiIndex, PolySymbol)> = Vec::new();
    for total in 0..=cutoff {
        for ku in 0..=total {
            for upper in compositions(n, ku) {
                for lower in compositions(n, total - ku) {
                    let raw: PolySymbol = hermite_tensor(&upper, &lower);
                    let norm = (upper.factorial() * lower.factorial()).sqrt();
                    let h = raw.scale(&Complex64::new(1.0 / norm, 0.0));
                    basis.push((upper.clone(), lower, h));
                }
            }
        }
    }

    let rule = gauss_laguerre(radial);
    let mut acc: Vec<Complex64> = vec![Complex64::new(0.0, 0.0); basis.len()];
    let mut point = vec![Complex64::new(0.0, 0.0); n];
    // odometer over (radial, angular) per coordinate
    let cells_per_coord = radial * angular;
    let total_cells = cells_per_coord.pow(n as u32);
    for flat in 0..total_cells {
        let mut rest = flat;
        let mut weight = 1.0f64;
        for slot in point.iter_mut() {
            let cell = rest % cells_per_coord;
            rest /= cells_per_coord;
            let ti = cell % radial;
            let ai = cell / radial;
            let t = rule.0[ti];
            let phi = 2.0 * std::f64::consts::PI * (ai as f64) / (angular as f64);
            *slot = Complex64::from_polar(t.sqrt(), phi);
            weight *= rule.1[ti] / angular as f64;
        }
        let fw = f(&point) * weight;
        if fw.norm_sqr() == 0.0 {
            continue;
        }
        for (slot, (_, _, h)) in acc.iter_mut().zip(&basis) {
            *slot += fw * h.eval(&point).conj();
        }
    }

    basis
        .into_iter()
        .zip(acc)
        .map(|((upper, lower, _), value)| ((upper, lower), value))
        .collect()
}
