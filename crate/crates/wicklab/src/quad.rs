//! Gaussian quadrature rules (Hermite, Laguerre, Legendre) via Golub-Welsch.
//!
//! Nodes and weights are obtained as eigenvalues/first eigenvector components
//! of the Jacobi matrix of the orthogonal-polynomial recurrence, then cached
//! per (rule, node count) since refinement loops reuse the same rules.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use once_cell::sync::Lazy;

use crate::linalg::tridiagonal_eigen_first_components;

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
enum Rule {
    /// Weight exp(-x^2) on (-inf, inf).
    Hermite,
    /// Weight exp(-x) on (0, inf).
    Laguerre,
    /// Weight 1 on (-1, 1).
    Legendre,
}

static CACHE: Lazy<Mutex<HashMap<(Rule, usize), Arc<(Vec<f64>, Vec<f64>)>>>> =
    Lazy::new(|| Mutex::new(HashMap::new()));

/// Solve the symmetric tridiagonal Jacobi eigenproblem and convert to a rule.
/// `mu0` is the total mass of the weight function.
fn golub_welsch(diag: &[f64], offdiag: &[f64], mu0: f64) -> (Vec<f64>, Vec<f64>) {
    let (nodes, first) = tridiagonal_eigen_first_components(diag, offdiag);
    let weights = first.iter().map(|v0| mu0 * v0 * v0).collect();
    (nodes, weights)
}

fn rule_nodes(rule: Rule, count: usize) -> Arc<(Vec<f64>, Vec<f64>)> {
    assert!(count >= 2, "quadrature rule needs at least 2 nodes");
    let key = (rule, count);
    if let Some(hit) = CACHE.lock().unwrap().get(&key) {
        return hit.clone();
    }
    let computed = match rule {
        Rule::Hermite => {
            let diag = vec![0.0; count];
            let offdiag: Vec<f64> = (1..count).map(|j| (j as f64 / 2.0).sqrt()).collect();
            golub_welsch(&diag, &offdiag, std::f64::consts::PI.sqrt())
        }
        Rule::Laguerre => {
            let diag: Vec<f64> = (0..count).map(|j| 2.0 * j as f64 + 1.0).collect();
            let offdiag: Vec<f64> = (1..count).map(|j| j as f64).collect();
            golub_welsch(&diag, &offdiag, 1.0)
        }
        Rule::Legendre => {
            let diag = vec![0.0; count];
            let offdiag: Vec<f64> = (1..count)
                .map(|j| {
                    let j = j as f64;
                    j / (4.0 * j * j - 1.0).sqrt()
                })
                .collect();
            golub_welsch(&diag, &offdiag, 2.0)
        }
    };
    let arc = Arc::new(computed);
    CACHE.lock().unwrap().insert(key, arc.clone());
    arc
}

/// Nodes and weights for ∫ f(x) e^{-x^2} dx over the real line.
pub fn gauss_hermite(count: usize) -> Arc<(Vec<f64>, Vec<f64>)> {
    rule_nodes(Rule::Hermite, count)
}

/// Nodes and weights for ∫_0^∞ f(t) e^{-t} dt.
pub fn gauss_laguerre(count: usize) -> Arc<(Vec<f64>, Vec<f64>)> {
    rule_nodes(Rule::Laguerre, count)
}

/// Nodes and weights for ∫_a^b f(x) dx (affinely mapped Legendre rule).
pub fn gauss_legendre(count: usize, a: f64, b: f64) -> (Vec<f64>, Vec<f64>) {
    let base = rule_nodes(Rule::Legendre, count);
    let half = 0.5 * (b - a);
    let mid = 0.5 * (b + a);
    let nodes = base.0.iter().map(|x| mid + half * x).collect();
    let weights = base.1.iter().map(|w| w * half).collect();
    (nodes, weights)
}

/// Compensated (Kahan) summation; keeps superposition quadratures
/// deterministic regardless of accumulation chunking.
#[derive(Clone, Copy, Default)]
pub struct Kahan {
    sum: f64,
    carry: f64,
}

impl Kahan {
    pub fn add(&mut self, value: f64) {
        let y = value - self.carry;
        let t = self.sum + y;
        self.carry = (t - self.sum) - y;
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn hermite_integrates_gaussian_moments() {
        let rule = gauss_hermite(24);
        let (nodes, weights) = (&rule.0, &rule.1);
        // ∫ x^2 e^{-x^2} = sqrt(pi)/2, ∫ x^4 e^{-x^2} = 3 sqrt(pi)/4
        let m2: f64 = nodes.iter().zip(weights).map(|(x, w)| w * x * x).sum();
        let m4: f64 = nodes.iter().zip(weights).map(|(x, w)| w * x.powi(4)).sum();
        let sqrt_pi = std::f64::consts::PI.sqrt();
        assert_relative_eq!(m2, sqrt_pi / 2.0, max_relative = 1e-12);
        assert_relative_eq!(m4, 3.0 * sqrt_pi / 4.0, max_relative = 1e-12);
    }

    #[test]
    fn laguerre_integrates_factorials() {
        let rule = gauss_laguerre(32);
        for k in 0..8u32 {
            let val: f64 = rule
                .0
                .iter()
                .zip(&rule.1)
                .map(|(t, w)| w * t.powi(k as i32))
                .sum();
            let expect: f64 = (1..=k).map(|j| j as f64).product();
            assert_relative_eq!(val, expect.max(1.0), max_relative = 1e-11);
        }
    }

    #[test]
    fn legendre_integrates_polynomials_on_interval() {
        let (nodes, weights) = gauss_legendre(16, 0.0, 2.0);
        let val: f64 = nodes.iter().zip(&weights).map(|(x, w)| w * x * x * x).sum();
        assert_relative_eq!(val, 4.0, max_relative = 1e-13); // ∫_0^2 x^3 = 4
    }

    #[test]
    fn kahan_sums_many_small_terms() {
        let mut acc = Kahan::default();
        for _ in 0..1_000_000 {
            acc.add(1e-10);
        }
        assert_relative_eq!(acc.value(), 1e-4, max_relative = 1e-12);
    }
}
