//! Experiment drivers: desk-scale measurements of the operator-norm,
//! Hilbert-Schmidt and lower-bound estimates as the dimension n grows.
//!
//! Every experiment is deterministic given (config, seed), returns a report
//! with one measured/bound pair per row, and never weakens a comparison to
//! force a pass: fitted constants follow the protocol "fit at the smallest
//! configuration, freeze, then sweep".

use std::collections::BTreeMap;
use std::time::Instant;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::error::{Result, WickError};
use crate::fock::{factorial, MultiIndex, TruncationParams};
use crate::heisenberg::{
    cutoff_norm_bound, measured_cutoff_norm, symplectic_form, weighted_superposition, zone_planner,
    TranslationWeight, ZoneConfig,
};
use crate::quantize::{
    annihilation_family_norm, antiwick_from_wick_traces, antiwick_quantize_poly,
    creation_family_norm, hs_norm_radial, ladder_norm_bound, l2_operator_norm, min_eigenvalue,
    radial_eigenvalues,
};
use crate::symbols::{
    compositions, hermite_tensor, l2_inner_product, l2_norm_squared, parse_poly_with_dim, Poly,
    PolySymbol, RadialSymbol,
};

/// Which experiment to run (CLI names in kebab-case).
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentKind {
    HsBound,
    Variance,
    Sobolev,
    NAlpha,
    Garding,
    Cutoff,
    Zones,
}

impl std::str::FromStr for ExperimentKind {
    type Err = WickError;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "hs-bound" => Self::HsBound,
            "variance" => Self::Variance,
            "sobolev" => Self::Sobolev,
            "n-alpha" => Self::NAlpha,
            "garding" => Self::Garding,
            "cutoff" => Self::Cutoff,
            "zones" => Self::Zones,
            other => {
                return Err(WickError::InvalidConfig(format!(
                    "unknown experiment `{other}` (expected hs-bound|variance|sobolev|n-alpha|garding|cutoff|zones)"
                )))
            }
        })
    }
}

impl std::fmt::Display for ExperimentKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let name = match self {
            Self::HsBound => "hs-bound",
            Self::Variance => "variance",
            Self::Sobolev => "sobolev",
            Self::NAlpha => "n-alpha",
            Self::Garding => "garding",
            Self::Cutoff => "cutoff",
            Self::Zones => "zones",
        };
        write!(f, "{name}")
    }
}

/// Resolved experiment parameters (file values with CLI overrides applied).
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub experiment: ExperimentKind,
    pub n_min: usize,
    pub n_max: usize,
    /// truncation degree; each experiment picks its own default when unset
    pub degree_max: Option<u32>,
    pub rho: f64,
    /// vanishing order k of the lower-bound model family
    pub k: u32,
    /// shift strength c of the (|z|² - c·n)^k model family
    pub shift: f64,
    /// symbol text for symbol-driven runs
    pub symbol: Option<String>,
    /// eigenvalue list for the variance identity
    pub eigenvalues: Option<Vec<f64>>,
    pub tol: f64,
    pub seed: u64,
}

impl ExperimentConfig {
    pub fn new(experiment: ExperimentKind) -> Self {
        Self {
            experiment,
            n_min: 1,
            n_max: 6,
            degree_max: None,
            rho: 0.5,
            k: 1,
            shift: 1.0,
            symbol: None,
            eigenvalues: None,
            tol: 1e-9,
            seed: 0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.tol <= 0.0 {
            return Err(WickError::InvalidConfig("tol must be positive".into()));
        }
        if self.n_min < 1 || self.n_min > self.n_max {
            return Err(WickError::InvalidConfig(format!(
                "bad n range {}..{}",
                self.n_min, self.n_max
            )));
        }
        if let Some(degree) = self.degree_max {
            let params = TruncationParams::new(self.n_max, degree);
            params.check_dense_guard()?;
        }
        Ok(())
    }
}

/// One measured-vs-bound comparison.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ReportRow {
    pub n: usize,
    pub measured: f64,
    pub bound: f64,
    pub pass: bool,
    #[serde(flatten)]
    pub extra: BTreeMap<String, serde_json::Value>,
}

impl ReportRow {
    fn new(n: usize, measured: f64, bound: f64, pass: bool) -> Self {
        Self {
            n,
            measured,
            bound,
            pass,
            extra: BTreeMap::new(),
        }
    }

    fn with(mut self, key: &str, value: serde_json::Value) -> Self {
        self.extra.insert(key.to_string(), value);
        self
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ReportMeta {
    pub seed: u64,
    pub runtime_s: f64,
    pub version: String,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub notes: BTreeMap<String, String>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub experiment: String,
    pub config: ExperimentConfig,
    pub rows: Vec<ReportRow>,
    pub meta: ReportMeta,
}

impl ExperimentReport {
    pub fn all_pass(&self) -> bool {
        self.rows.iter().all(|r| r.pass)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// CSV with the pinned header `n,measured,bound,pass`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,measured,bound,pass\n");
        for row in &self.rows {
            out.push_str(&format!(
                "{},{},{},{}\n",
                row.n, row.measured, row.bound, row.pass
            ));
        }
        out
    }
}

fn finish_report(
    cfg: &ExperimentConfig,
    rows: Vec<ReportRow>,
    notes: BTreeMap<String, String>,
    started: Instant,
) -> ExperimentReport {
    ExperimentReport {
        experiment: cfg.experiment.to_string(),
        config: cfg.clone(),
        rows,
        meta: ReportMeta {
            seed: cfg.seed,
            runtime_s: started.elapsed().as_secs_f64(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            notes,
        },
    }
}

/// Dispatch a resolved configuration to its driver.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    cfg.validate()?;
    match cfg.experiment {
        ExperimentKind::HsBound => exp_hs_bound(cfg),
        ExperimentKind::Variance => exp_variance(cfg),
        ExperimentKind::Sobolev => exp_sobolev_bounds(cfg),
        ExperimentKind::NAlpha => exp_corollary_nalpha(cfg),
        ExperimentKind::Garding => exp_garding(cfg),
        ExperimentKind::Cutoff => exp_cutoff(cfg),
        ExperimentKind::Zones => exp_zones(cfg),
    }
}

/// HS-norm decay of sup-1 bumps supported in |z| < ρ√n: measured ‖B‖_HS
/// against the bound √(nⁿρ^{2n}/(2Γ(n+1))) and its Stirling envelope
/// C (√e ρ)ⁿ n^{-1/4} with C fitted at the smallest n.
pub fn exp_hs_bound(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    let started = Instant::now();
    let degree = cfg.degree_max.unwrap_or(28);
    let mut notes = BTreeMap::new();
    let rho = cfg.rho;
    let critical = 1.0 / std::f64::consts::E.sqrt();
    let decay_regime = rho < critical;
    if !decay_regime {
        notes.insert(
            "decay".into(),
            format!("rho = {rho} is not below 1/sqrt(e) = {critical:.6}; decay assertions skipped"),
        );
    }
    notes.insert(
        "envelope".into(),
        "bound column follows the volume estimate; the envelope column is its Stirling form, \
         which decays like o(1) while the displayed proposition claims only o(n); both reported"
            .into(),
    );

    let mut measured_list = Vec::new();
    let mut bound_list = Vec::new();
    for n in cfg.n_min..=cfg.n_max {
        let params = TruncationParams::new(n, degree);
        let bump = RadialSymbol::hs_reference_bump(n, rho);
        let measured = hs_norm_radial(&bump, params)?;
        let bound = hs_bound_value(n, rho);
        measured_list.push(measured);
        bound_list.push(bound);
    }
    // envelope constant fitted once at the smallest configuration
    let envelope_c = bound_list[0]
        / ((critical.recip().recip() * 0.0 + std::f64::consts::E.sqrt() * rho).powi(cfg.n_min as i32)
            * (cfg.n_min as f64).powf(-0.25));
    let mut rows = Vec::new();
    for (offset, n) in (cfg.n_min..=cfg.n_max).enumerate() {
        let measured = measured_list[offset];
        let bound = bound_list[offset];
        let envelope =
            envelope_c * (std::f64::consts::E.sqrt() * rho).powi(n as i32) * (n as f64).powf(-0.25);
        let mut pass = measured <= bound * (1.0 + cfg.tol);
        let mut decreasing = true;
        if decay_regime && offset > 0 {
            decreasing = measured < measured_list[offset - 1];
            pass = pass && decreasing;
        }
        rows.push(
            ReportRow::new(n, measured, bound, pass)
                .with("envelope", json!(envelope))
                .with("strictly_decreasing", json!(decreasing)),
        );
    }
    if decay_regime && measured_list.len() >= 2 {
        let first = measured_list[0];
        let last = *measured_list.last().unwrap();
        notes.insert(
            "decay_ratio".into(),
            format!("measured(n={})/measured(n={}) = {:.6e}", cfg.n_max, cfg.n_min, last / first),
        );
    }
    Ok(finish_report(cfg, rows, notes, started))
}

/// The displayed HS bound value √(nⁿ ρ^{2n} / (2 Γ(n+1))).
pub fn hs_bound_value(n: usize, rho: f64) -> f64 {
    let nf = n as f64;
    (nf.powi(n as i32) * rho.powi(2 * n as i32) / (2.0 * factorial(n as u64))).sqrt()
}

/// Variance identity: ∫ |(az, z̄) - tr a|² dν' computed through the Hermite
/// expansion and through direct Gaussian moments, both equal to Σ λ_j².
pub fn exp_variance(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    let started = Instant::now();
    let mut lambda_sets: Vec<Vec<f64>> = Vec::new();
    if let Some(eigenvalues) = &cfg.eigenvalues {
        lambda_sets.push(eigenvalues.clone());
    } else {
        lambda_sets.push(vec![1.0, 2.0, 3.0]);
        for n in cfg.n_min..=cfg.n_max {
            lambda_sets.push(vec![1.0; n]);
        }
    }
    let mut rows = Vec::new();
    for lambda in &lambda_sets {
        let n = lambda.len();
        // f = Σ λ_j (z_j z̄_j - 1)
        let mut f: PolySymbol = Poly::zero(n);
        for (j, &lj) in lambda.iter().enumerate() {
            let e = MultiIndex::unit(n, j);
            f.add_term(e.clone(), e, Complex64::new(lj, 0.0));
            f.add_term(
                MultiIndex::zero(n),
                MultiIndex::zero(n),
                Complex64::new(-lj, 0.0),
            );
        }
        // path 1: Parseval over the orthonormal Hermite tensor basis ≤ deg 2
        let mut hermite_path = 0.0f64;
        for upper_deg in 0..=2u32 {
            for lower_deg in 0..=2u32 {
                for upper in compositions(n, upper_deg) {
                    for lower in compositions(n, lower_deg) {
                        let raw: PolySymbol = hermite_tensor(&upper, &lower);
                        let norm = (upper.factorial() * lower.factorial()).sqrt();
                        let h = raw.scale(&Complex64::new(1.0 / norm, 0.0));
                        hermite_path += l2_inner_product(&f, &h).norm_sqr();
                    }
                }
            }
        }
        // path 2: direct Gaussian-moment expansion of ∫|f|²
        let direct_path = l2_norm_squared(&f);
        let target: f64 = lambda.iter().map(|l| l * l).sum();
        let tol = cfg.tol.max(1e-8);
        let pass = (hermite_path - target).abs() <= tol * target.max(1.0)
            && (direct_path - target).abs() <= tol * target.max(1.0)
            && (hermite_path - direct_path).abs() <= tol * target.max(1.0);
        rows.push(
            ReportRow::new(n, hermite_path, target, pass)
                .with("direct_path", json!(direct_path))
                .with("lambda", json!(lambda)),
        );
    }
    Ok(finish_report(cfg, rows, BTreeMap::new(), started))
}

/// Measured ladder-family norms against the displayed sup-formula bound,
/// k ∈ {1,2}, s ∈ {-2..2}, annihilation and creation (dual scales).
pub fn exp_sobolev_bounds(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    let started = Instant::now();
    let degree = cfg.degree_max.unwrap_or(30);
    let mut rows = Vec::new();
    for n in cfg.n_min..=cfg.n_max.min(2) {
        let params = TruncationParams::new(n, degree);
        for k in 1..=2u32 {
            for s_int in -2..=2i32 {
                let s = s_int as f64;
                let bound = ladder_norm_bound(k, s);
                let ann = annihilation_family_norm(k, s, params)?;
                let cre = creation_family_norm(k, s, params)?;
                let mut pass_ann = ann <= bound * (1.0 + cfg.tol);
                if k == 1 && s_int == 0 {
                    pass_ann = pass_ann && (ann - 1.0).abs() <= 1e-10;
                }
                let pass_cre = cre <= bound * (1.0 + cfg.tol)
                    && (cre - ann).abs() <= 1e-8 * ann.max(1.0);
                rows.push(
                    ReportRow::new(n, ann, bound, pass_ann)
                        .with("k", json!(k))
                        .with("s", json!(s))
                        .with("op", json!("annihilation")),
                );
                rows.push(
                    ReportRow::new(n, cre, bound, pass_cre)
                        .with("k", json!(k))
                        .with("s", json!(s))
                        .with("op", json!("creation")),
                );
            }
        }
    }
    let mut notes = BTreeMap::new();
    notes.insert(
        "convention".into(),
        "family norm, ℓ² over ordered derivative tuples with the 1/k! Taylor normalization; \
         creation measured between the dual scales F^{k-s}⊗V_k → F^{-s}"
            .into(),
    );
    Ok(finish_report(cfg, rows, notes, started))
}

/// The Corollary-1 pairs: the diagonal defect of N_α N_β against N_{α+β},
/// bounded by a fitted multiple of the one-order-smoother weight N_{α+β-2}.
pub fn exp_corollary_nalpha(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    let started = Instant::now();
    let degree = cfg.degree_max.unwrap_or(30);
    // the fitted constant is 4x the k=0 ratio: the ratio grows from k=0
    // toward an asymptote; the protocol factor is frozen here, not tuned
    const FIT_FACTOR: f64 = 4.0;
    let pairs = [(1.0f64, 1.0f64), (2.0, -2.0), (1.0, -1.0)];
    let mut rows = Vec::new();
    for n in cfg.n_min..=cfg.n_max.min(2) {
        let params = TruncationParams::new(n, degree);
        for (alpha, beta) in pairs {
            let la = radial_eigenvalues(&RadialSymbol::power(n, alpha), params)?.0;
            let lb = radial_eigenvalues(&RadialSymbol::power(n, beta), params)?.0;
            let lab = radial_eigenvalues(&RadialSymbol::power(n, alpha + beta), params)?.0;
            let comparator =
                radial_eigenvalues(&RadialSymbol::power(n, alpha + beta - 2.0), params)?.0;
            let delta: Vec<f64> = (0..=degree as usize)
                .map(|k| la[k] * lb[k] - lab[k])
                .collect();
            let c_fit = FIT_FACTOR * delta[0].abs() / comparator[0];
            let mut max_ratio = 0.0f64;
            let mut worst_k = 0usize;
            let mut pass = true;
            for k in 0..=degree as usize {
                let ratio = delta[k].abs() / comparator[k];
                if ratio > max_ratio {
                    max_ratio = ratio;
                    worst_k = k;
                }
                if delta[k].abs() > c_fit * comparator[k] * (1.0 + cfg.tol) {
                    pass = false;
                }
            }
            rows.push(
                ReportRow::new(n, max_ratio, c_fit, pass)
                    .with("alpha", json!(alpha))
                    .with("beta", json!(beta))
                    .with("worst_k", json!(worst_k))
                    .with("delta_0", json!(delta[0])),
            );
        }
    }
    // α = β = 0 degenerates to the identity: δ_k = 0 exactly
    let params = TruncationParams::new(cfg.n_min, degree);
    let l0 = radial_eigenvalues(&RadialSymbol::power(cfg.n_min, 0.0), params)?.0;
    let zero_defect = l0
        .iter()
        .map(|l| (l * l - l).abs())
        .fold(0.0f64, f64::max);
    let mut rows_final = vec![ReportRow::new(
        cfg.n_min,
        zero_defect,
        cfg.tol,
        zero_defect <= cfg.tol,
    )
    .with("alpha", json!(0.0))
    .with("beta", json!(0.0))];
    rows_final.extend(rows);
    Ok(finish_report(cfg, rows_final, BTreeMap::new(), started))
}

/// The Wick symbol (|z|² - c·n)^k as a polynomial.
pub fn garding_wick_symbol(n: usize, k: u32, c: f64) -> PolySymbol {
    let mut base: PolySymbol = Poly::abs_squared(n);
    base.add_term(
        MultiIndex::zero(n),
        MultiIndex::zero(n),
        Complex64::new(-c * n as f64, 0.0),
    );
    let mut power = Poly::constant(n, Complex64::new(1.0, 0.0));
    for _ in 0..k {
        power = power.mul(&base);
    }
    power
}

/// Garding-type lower bound on the model oscillators: exact minimal
/// eigenvalues against -C·n^{k-1} with C fitted at the smallest swept n,
/// plus the transverse-ellipticity zoning of the anti-Wick symbol.
pub fn exp_garding(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    let started = Instant::now();
    let k = cfg.k;
    let mut notes = BTreeMap::new();
    // zone constants frozen for the whole family
    const C0_INNER: f64 = 0.7;
    const C0_OUTER: f64 = 3.0;
    const C1_ELLIPTIC: f64 = 0.1;
    notes.insert(
        "zones".into(),
        format!("E2 = [{C0_INNER}√n, {C0_OUTER}√n] in |z|; ellipticity constant c1 = {C1_ELLIPTIC}"),
    );

    let mut rows = Vec::new();
    match k {
        1 => {
            // shift family P_c = anti-Wick(|z|² - n - c) = N̂ - c: min eig -c
            for n in cfg.n_min..=cfg.n_max {
                let params = TruncationParams::new(n, cfg.degree_max.unwrap_or(4));
                for c in [0.0, cfg.shift] {
                    let mut symbol: PolySymbol = Poly::abs_squared(n);
                    symbol.add_term(
                        MultiIndex::zero(n),
                        MultiIndex::zero(n),
                        Complex64::new(-(n as f64) - c, 0.0),
                    );
                    let q = antiwick_quantize_poly(&symbol, params)?;
                    let min_eig = min_eigenvalue(&q.operator)?;
                    let closed_form = -c;
                    // C₀ = 1 suffices: (Pu, u) ≥ -1·n^0 ‖u‖²
                    let bound = -1.0;
                    let pass = (min_eig - closed_form).abs() <= 1e-10
                        && min_eig >= bound - cfg.tol;
                    rows.push(
                        ReportRow::new(n, min_eig, bound, pass)
                            .with("shift", json!(c))
                            .with("closed_form", json!(closed_form)),
                    );
                }
            }
        }
        2 => {
            let c = cfg.shift;
            let mut fitted: Option<f64> = None;
            for n in cfg.n_min..=cfg.n_max {
                let degree = cfg.degree_max.unwrap_or((n as u32 + 3).max(8));
                let params = TruncationParams::new(n, degree);
                let wick = garding_wick_symbol(n, k, c);
                let (antiwick, _) = antiwick_from_wick_traces(&wick);
                let q = antiwick_quantize_poly(&antiwick, params)?;
                let min_eig = min_eigenvalue(&q.operator)?;
                let c_n = -min_eig / (n as f64).powi(k as i32 - 1);
                // fit at the first n ≥ 2 in the sweep, then freeze
                if fitted.is_none() && n >= 2 {
                    fitted = Some(c_n.max(1e-12));
                }
                let c_fit = fitted.unwrap_or(c_n.max(1e-12));
                let bound = -c_fit * (n as f64).powi(k as i32 - 1);
                // zoning of the anti-Wick symbol in t = |z|²
                let radial_eval = |t: f64| -> f64 {
                    let r = t.sqrt();
                    let z: Vec<Complex64> = (0..n)
                        .map(|j| {
                            if j == 0 {
                                Complex64::new(r, 0.0)
                            } else {
                                Complex64::new(0.0, 0.0)
                            }
                        })
                        .collect();
                    antiwick.eval(&z).re
                };
                let nf = n as f64;
                let mut symbol_min_e2 = f64::INFINITY;
                for i in 0..=200 {
                    let t = (C0_INNER * C0_INNER * nf)
                        + (C0_OUTER * C0_OUTER - C0_INNER * C0_INNER) * nf * i as f64 / 200.0;
                    symbol_min_e2 = symbol_min_e2.min(radial_eval(t));
                }
                let mut elliptic_margin = f64::INFINITY;
                for i in 0..=200 {
                    let t = C0_OUTER * C0_OUTER * nf * (1.0 + 3.0 * i as f64 / 200.0);
                    let lower = C1_ELLIPTIC * (nf.sqrt() + t.sqrt()).powi(2 * k as i32);
                    elliptic_margin = elliptic_margin.min(radial_eval(t) - lower);
                }
                let stability_ok = if n >= 2 {
                    (c_n - c_fit).abs() <= 0.2 * c_fit
                } else {
                    true
                };
                let pass = min_eig >= bound - cfg.tol * bound.abs().max(1.0)
                    && symbol_min_e2 < 0.0
                    && elliptic_margin >= 0.0
                    && stability_ok;
                rows.push(
                    ReportRow::new(n, min_eig, bound, pass)
                        .with("c_n", json!(c_n))
                        .with("c_fit", json!(c_fit))
                        .with("symbol_min_e2", json!(symbol_min_e2))
                        .with("elliptic_margin", json!(elliptic_margin)),
                );
            }
        }
        other => {
            return Err(WickError::InvalidConfig(format!(
                "garding model order k = {other} not in {{1, 2}}"
            )))
        }
    }
    Ok(finish_report(cfg, rows, notes, started))
}

/// Superposition norm budget on seeded Gaussian weights plus the cutoff-norm
/// decay against the displayed dimension-dependent bound.
pub fn exp_cutoff(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    let started = Instant::now();
    let rho = if cfg.rho == 0.5 { 0.4 } else { cfg.rho };
    let mut rows = Vec::new();
    let mut bound_list = Vec::new();
    for n in cfg.n_min..=cfg.n_max {
        let params = TruncationParams::new(n, cfg.degree_max.unwrap_or(24));
        let chi = RadialSymbol::cutoff_reference_bump(n, rho);
        let measured = measured_cutoff_norm(&chi, params)?;
        let bound = cutoff_norm_bound(rho, n, 1.0);
        bound_list.push(bound);
        let pass = measured <= bound * (1.0 + cfg.tol);
        rows.push(
            ReportRow::new(n, measured, bound, pass)
                .with("kind", json!("cutoff"))
                .with("rho", json!(rho)),
        );
    }
    // the bound sequence itself decays geometrically
    for (i, pair) in bound_list.windows(2).enumerate() {
        let ratio = pair[1] / pair[0];
        let n = cfg.n_min + i + 1;
        rows.push(
            ReportRow::new(n, ratio, 1.0, ratio < 1.0)
                .with("kind", json!("bound_ratio")),
        );
    }
    // ten seeded Gaussian weights: ‖F‖ ≤ ∫|m| + quadrature tolerance
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let quad_tol = 1e-6;
    let params = TruncationParams::new(1, 20);
    for _ in 0..10 {
        let weight = TranslationWeight::Gaussian {
            n: 1,
            center: vec![Complex64::new(
                rng.gen_range(-0.4..0.4),
                rng.gen_range(-0.4..0.4),
            )],
            width: rng.gen_range(0.15..0.6),
            mass: rng.gen_range(0.2..1.0) * if rng.gen_bool(0.5) { 1.0 } else { -1.0 },
        };
        let q = weighted_superposition(&weight, params, quad_tol)?;
        let measured = l2_operator_norm(&q.operator);
        let bound = weight.l1_norm();
        let pass = measured <= bound + quad_tol * 10.0;
        rows.push(
            ReportRow::new(1, measured, bound, pass)
                .with("kind", json!("superposition")),
        );
    }
    let mut notes = BTreeMap::new();
    notes.insert(
        "bump".into(),
        "cutoff family: sup-1 mollifier supported in [0.05, 0.45]·nρ² in t = |z|²".into(),
    );
    Ok(finish_report(cfg, rows, notes, started))
}

/// Zone arithmetic: the witness truth table and the monotonicity of the
/// disjointness flag under 1000 random (Λ, d).
pub fn exp_zones(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    let started = Instant::now();
    let witnesses = [
        (10.0, 1e4, true),
        (100.0, 25.0, false),
        (1.0, 4.0, false), // boundary CΛ^{1/2} = ½c₀d^{1/2}
    ];
    let mut rows = Vec::new();
    for (lambda, d, expected) in witnesses {
        let report = zone_planner(&ZoneConfig {
            lambda,
            d,
            c_micro: 1.0,
            c0: 1.0,
            c_big: 2.0,
        });
        let lhs = 1.0 * lambda.sqrt();
        let rhs = 0.5 * d.sqrt();
        rows.push(
            ReportRow::new(1, lhs, rhs, report.disjoint == expected)
                .with("lambda", json!(lambda))
                .with("d", json!(d))
                .with("disjoint", json!(report.disjoint))
                .with("regime_ok", json!(report.regime_ok)),
        );
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut violations = 0usize;
    for _ in 0..1000 {
        let lambda = rng.gen_range(1.0..1e4);
        let d = rng.gen_range(1.0..1e6);
        let base = ZoneConfig {
            lambda,
            d,
            c_micro: 1.0,
            c0: 1.0,
            c_big: 2.0,
        };
        let flag = zone_planner(&base).disjoint;
        let grow_d = zone_planner(&ZoneConfig { d: d * 2.0, ..base }).disjoint;
        let grow_lambda = zone_planner(&ZoneConfig {
            lambda: lambda * 2.0,
            ..base
        })
        .disjoint;
        if flag && !grow_d {
            violations += 1;
        }
        if grow_lambda && !flag {
            violations += 1;
        }
    }
    rows.push(
        ReportRow::new(1, violations as f64, 0.0, violations == 0)
            .with("kind", json!("monotonicity_violations")),
    );
    Ok(finish_report(cfg, rows, BTreeMap::new(), started))
}

/// Translation group-law defect on the degree-≤10 block at N = 40 plus the
/// sign-flip negative control; used by the CLI `translate` path and the
/// acceptance suite.
pub struct GroupLawCheck {
    pub defect: f64,
    pub flipped_defect: f64,
}

pub fn group_law_check(
    y1: &[Complex64],
    y2: &[Complex64],
    params: TruncationParams,
    block: u32,
) -> Result<GroupLawCheck> {
    use crate::heisenberg::{compose_translations, restrict_columns, translation_op};
    let (product, phase) = compose_translations(y1, y2, params)?;
    let sum: Vec<Complex64> = y1.iter().zip(y2).map(|(a, b)| a + b).collect();
    let direct = translation_op(&sum, params)?;
    let defect_op = restrict_columns(
        &product.sub(&direct.operator.scale(phase))?,
        block,
    );
    let defect = defect_op
        .matrix()
        .iter()
        .map(|x| x.norm())
        .fold(0.0, f64::max);
    let flipped_phase = Complex64::from_polar(1.0, symplectic_form(y1, y2));
    let flipped_op = restrict_columns(
        &product.sub(&direct.operator.scale(flipped_phase))?,
        block,
    );
    let flipped_defect = flipped_op
        .matrix()
        .iter()
        .map(|x| x.norm())
        .fold(0.0, f64::max);
    Ok(GroupLawCheck {
        defect,
        flipped_defect,
    })
}

/// Parse a symbol argument for the CLI paths (accepts a pinned dimension).
pub fn parse_symbol_arg(text: &str, n: Option<usize>) -> Result<PolySymbol> {
    parse_poly_with_dim(text, n)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quick(kind: ExperimentKind) -> ExperimentConfig {
        let mut cfg = ExperimentConfig::new(kind);
        cfg.n_max = 3;
        cfg
    }

    #[test]
    fn hs_bound_runs_and_passes() {
        let mut cfg = quick(ExperimentKind::HsBound);
        cfg.n_max = 4;
        let report = exp_hs_bound(&cfg).unwrap();
        assert_eq!(report.rows.len(), 4);
        assert!(report.all_pass(), "{}", report.to_json());
        // measured strictly decreasing
        let measured: Vec<f64> = report.rows.iter().map(|r| r.measured).collect();
        assert!(measured.windows(2).all(|w| w[1] < w[0]));
    }

    #[test]
    fn hs_bound_supercritical_rho_flags_decay() {
        let mut cfg = quick(ExperimentKind::HsBound);
        cfg.rho = 0.75; // above 1/sqrt(e)
        let report = exp_hs_bound(&cfg).unwrap();
        assert!(report.meta.notes.contains_key("decay"));
        // rows still compare measured against the bound
        assert!(report.rows.iter().all(|r| r.measured <= r.bound * (1.0 + 1e-9)));
    }

    #[test]
    fn variance_identity_examples() {
        let mut cfg = quick(ExperimentKind::Variance);
        cfg.eigenvalues = Some(vec![1.0, 2.0, 3.0]);
        let report = exp_variance(&cfg).unwrap();
        assert_eq!(report.rows.len(), 1);
        let row = &report.rows[0];
        assert!(row.pass);
        assert!((row.measured - 14.0).abs() < 1e-8);
        assert!((row.bound - 14.0).abs() < 1e-12);

        // zero eigenvalues → 0
        cfg.eigenvalues = Some(vec![0.0, 0.0]);
        let report = exp_variance(&cfg).unwrap();
        assert!(report.rows[0].pass);
        assert!(report.rows[0].measured.abs() < 1e-12);
    }

    #[test]
    fn variance_default_set_covers_ones() {
        let mut cfg = quick(ExperimentKind::Variance);
        cfg.n_max = 4;
        let report = exp_variance(&cfg).unwrap();
        assert!(report.all_pass());
        // ones(n) rows: measured = n
        for row in report.rows.iter().skip(1) {
            assert!((row.measured - row.n as f64).abs() < 1e-8);
        }
    }

    #[test]
    fn sobolev_rows_pass_and_pin_identity_case() {
        let mut cfg = quick(ExperimentKind::Sobolev);
        cfg.n_max = 2;
        cfg.degree_max = Some(16);
        let report = exp_sobolev_bounds(&cfg).unwrap();
        assert_eq!(report.rows.len(), 2 * 2 * 5 * 2);
        assert!(report.all_pass(), "{}", report.to_json());
        let identity_row = report
            .rows
            .iter()
            .find(|r| {
                r.extra["k"] == json!(1)
                    && r.extra["s"] == json!(0.0)
                    && r.extra["op"] == json!("annihilation")
            })
            .unwrap();
        assert!((identity_row.measured - 1.0).abs() < 1e-10);
    }

    #[test]
    fn corollary_pairs_bounded() {
        let mut cfg = quick(ExperimentKind::NAlpha);
        cfg.n_max = 2;
        cfg.degree_max = Some(30);
        let report = exp_corollary_nalpha(&cfg).unwrap();
        assert!(report.all_pass(), "{}", report.to_json());
        // the α = β = 0 degenerate row is exactly zero
        assert!(report.rows[0].measured <= 1e-12);
    }

    #[test]
    fn garding_k1_exact() {
        let mut cfg = quick(ExperimentKind::Garding);
        cfg.k = 1;
        cfg.n_max = 6;
        let report = exp_garding(&cfg).unwrap();
        assert!(report.all_pass(), "{}", report.to_json());
        for row in &report.rows {
            let shift = row.extra["shift"].as_f64().unwrap();
            assert!((row.measured + shift).abs() <= 1e-10);
        }
    }

    #[test]
    fn garding_k2_lower_bound_and_zones() {
        let mut cfg = quick(ExperimentKind::Garding);
        cfg.k = 2;
        cfg.n_min = 1;
        cfg.n_max = 4;
        let report = exp_garding(&cfg).unwrap();
        assert!(report.all_pass(), "{}", report.to_json());
        for row in &report.rows {
            assert!(row.extra["symbol_min_e2"].as_f64().unwrap() < 0.0);
            assert!(row.extra["elliptic_margin"].as_f64().unwrap() >= 0.0);
        }
        // min eig = -c·n for the shift-1 family
        for row in &report.rows {
            assert!((row.measured + row.n as f64).abs() < 1e-8, "row {:?}", row);
        }
    }

    #[test]
    fn cutoff_rows() {
        let mut cfg = quick(ExperimentKind::Cutoff);
        cfg.rho = 0.4;
        cfg.n_max = 3;
        let report = exp_cutoff(&cfg).unwrap();
        assert!(report.all_pass(), "{}", report.to_json());
    }

    #[test]
    fn zones_witness_table() {
        let cfg = quick(ExperimentKind::Zones);
        let report = exp_zones(&cfg).unwrap();
        assert!(report.all_pass());
        assert_eq!(report.rows.len(), 4);
    }

    #[test]
    fn reports_are_deterministic_modulo_runtime() {
        let cfg = quick(ExperimentKind::Zones);
        let mut a = exp_zones(&cfg).unwrap();
        let mut b = exp_zones(&cfg).unwrap();
        a.meta.runtime_s = 0.0;
        b.meta.runtime_s = 0.0;
        assert_eq!(a.to_json(), b.to_json());
    }

    #[test]
    fn csv_schema() {
        let cfg = quick(ExperimentKind::Zones);
        let report = exp_zones(&cfg).unwrap();
        let csv = report.to_csv();
        assert!(csv.starts_with("n,measured,bound,pass\n"));
        assert_eq!(csv.lines().count(), report.rows.len() + 1);
    }
}
