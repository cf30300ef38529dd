//! Radial symbols: functions of t = |z|².
//!
//! A radial symbol quantizes to a diagonal operator, so the profile is kept
//! as a callable with declared support and sup metadata instead of sampled
//! arrays; the quantizer integrates it against the degree weights directly.

use std::sync::Arc;

/// Tag describing where a profile came from; `Power` profiles get closed
/// Gamma-integral treatment in tests.
#[derive(Clone, Debug, PartialEq)]
pub enum RadialKind {
    /// (t + n)^(theta/2), the polynomial-oscillator weight family.
    Power { theta: f64 },
    /// Smooth compactly supported bump.
    Bump,
    Custom,
}

/// Symbol b(|z|²) with declared metadata.
#[derive(Clone)]
pub struct RadialSymbol {
    n: usize,
    profile: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
    /// Support radius in t = |z|²; `None` means unbounded support.
    support_t: Option<f64>,
    /// Declared bound on |b| over the support; `None` for unbounded profiles.
    sup_bound: Option<f64>,
    kind: RadialKind,
}

impl RadialSymbol {
    pub fn new(
        n: usize,
        profile: impl Fn(f64) -> f64 + Send + Sync + 'static,
        support_t: Option<f64>,
        sup_bound: Option<f64>,
        kind: RadialKind,
    ) -> Self {
        Self {
            n,
            profile: Arc::new(profile),
            support_t,
            sup_bound,
            kind,
        }
    }

    /// n_theta = (|z|² + n)^(theta/2).
    pub fn power(n: usize, theta: f64) -> Self {
        let nf = n as f64;
        Self::new(
            n,
            move |t| (t + nf).powf(theta / 2.0),
            None,
            if theta <= 0.0 {
                Some(nf.powf(theta / 2.0))
            } else {
                None
            },
            RadialKind::Power { theta },
        )
    }

    /// The constant symbol 1.
    pub fn one(n: usize) -> Self {
        Self::new(n, |_| 1.0, None, Some(1.0), RadialKind::Custom)
    }

    /// Sup-1 mollifier filling the ball |z| < ρ√n: b(t) = η(t/R²), R² = nρ².
    pub fn hs_reference_bump(n: usize, rho: f64) -> Self {
        let r2 = n as f64 * rho * rho;
        Self::new(
            n,
            move |t| mollifier(t / r2),
            Some(r2),
            Some(1.0),
            RadialKind::Bump,
        )
    }

    /// Sup-1 bump supported in the annulus 0.05 R² ≤ t ≤ 0.45 R², R² = nρ²;
    /// the shape is fixed in rescaled coordinates across all n so the
    /// cutoff-norm decay comparison sweeps a single family.
    pub fn cutoff_reference_bump(n: usize, rho: f64) -> Self {
        let r2 = n as f64 * rho * rho;
        let center = 0.25 * r2;
        let halfwidth = 0.2 * r2;
        Self::new(
            n,
            move |t| mollifier((t - center) / halfwidth),
            Some(r2),
            Some(1.0),
            RadialKind::Bump,
        )
    }

    /// Gaussian profile e^{-t/(2s²)} (the radial form of exp(-|z|²/(2s²))).
    pub fn gaussian(n: usize, s: f64) -> Self {
        let inv = 1.0 / (2.0 * s * s);
        Self::new(
            n,
            move |t| (-t * inv).exp(),
            None,
            Some(1.0),
            RadialKind::Custom,
        )
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn eval(&self, t: f64) -> f64 {
        (self.profile)(t)
    }

    pub fn support_t(&self) -> Option<f64> {
        self.support_t
    }

    pub fn sup_bound(&self) -> Option<f64> {
        self.sup_bound
    }

    pub fn kind(&self) -> &RadialKind {
        &self.kind
    }

    /// Spot-check the declared sup bound on a sample grid; returns the
    /// largest observed |b(t)|.
    pub fn observed_sup(&self, samples: usize) -> f64 {
        let t_max = self.support_t.unwrap_or(16.0 * self.n as f64);
        (0..=samples)
            .map(|i| {
                let t = t_max * i as f64 / samples as f64;
                self.eval(t).abs()
            })
            .fold(0.0, f64::max)
    }
}

impl std::fmt::Debug for RadialSymbol {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("RadialSymbol")
            .field("n", &self.n)
            .field("support_t", &self.support_t)
            .field("sup_bound", &self.sup_bound)
            .field("kind", &self.kind)
            .finish()
    }
}

/// Standard bump: exp(1 - 1/(1-u²)) for |u| < 1, zero outside; sup = 1 at 0.
pub fn mollifier(u: f64) -> f64 {
    if u.abs() >= 1.0 {
        0.0
    } else {
        (1.0 - 1.0 / (1.0 - u * u)).exp()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mollifier_shape() {
        assert_eq!(mollifier(0.0), 1.0);
        assert_eq!(mollifier(1.0), 0.0);
        assert_eq!(mollifier(-1.2), 0.0);
        assert!(mollifier(0.5) > 0.0 && mollifier(0.5) < 1.0);
    }

    #[test]
    fn declared_sup_dominates_samples() {
        for n in 1..=4 {
            for &rho in &[0.3, 0.4, 0.5] {
                for sym in [
                    RadialSymbol::hs_reference_bump(n, rho),
                    RadialSymbol::cutoff_reference_bump(n, rho),
                    RadialSymbol::gaussian(n, 0.8),
                    RadialSymbol::power(n, -2.0),
                ] {
                    let observed = sym.observed_sup(2000);
                    let declared = sym.sup_bound().expect("bounded families declare sup");
                    assert!(
                        observed <= declared + 1e-12,
                        "declared sup violated: {observed} > {declared} ({:?})",
                        sym.kind()
                    );
                }
            }
        }
    }

    #[test]
    fn cutoff_bump_support_sits_inside_ball() {
        let sym = RadialSymbol::cutoff_reference_bump(2, 0.4);
        let r2 = 2.0 * 0.4 * 0.4;
        assert_eq!(sym.eval(0.04 * r2), 0.0);
        assert_eq!(sym.eval(0.46 * r2), 0.0);
        assert!(sym.eval(0.25 * r2) == 1.0);
        assert!(sym.support_t().unwrap() <= r2);
    }

    #[test]
    fn power_profile_values() {
        let sym = RadialSymbol::power(2, 1.0);
        assert!((sym.eval(0.0) - 2f64.sqrt()).abs() < 1e-15);
        assert!((sym.eval(2.0) - 2.0).abs() < 1e-15);
    }
}
