//! Experiment configuration files and the claim-to-command index.
//!
//! Config files are strict JSON: unknown keys are rejected (naming the
//! offender), `"schema": 1` is required, tolerances must be positive, and
//! CLI flags override file values.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Result, WickError};
use crate::lab::{ExperimentConfig, ExperimentKind};

/// On-disk experiment configuration.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub schema: u32,
    pub experiment: String,
    /// "3" or "1..6"
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degree: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rho: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub shift: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub symbol: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eigenvalues: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

impl ConfigFile {
    pub fn minimal(experiment: &str) -> Self {
        Self {
            schema: 1,
            experiment: experiment.to_string(),
            n: None,
            degree: None,
            rho: None,
            k: None,
            shift: None,
            symbol: None,
            eigenvalues: None,
            tol: None,
            seed: None,
        }
    }
}

/// Parse "a..b" or a single integer into an inclusive range.
pub fn parse_n_range(text: &str) -> Result<(usize, usize)> {
    let text = text.trim();
    if let Some((lo, hi)) = text.split_once("..") {
        let lo: usize = lo
            .trim()
            .parse()
            .map_err(|_| WickError::InvalidConfig(format!("bad range start in `{text}`")))?;
        let hi: usize = hi
            .trim()
            .parse()
            .map_err(|_| WickError::InvalidConfig(format!("bad range end in `{text}`")))?;
        if lo < 1 || lo > hi {
            return Err(WickError::InvalidConfig(format!("empty range `{text}`")));
        }
        Ok((lo, hi))
    } else {
        let single: usize = text
            .parse()
            .map_err(|_| WickError::InvalidConfig(format!("bad dimension `{text}`")))?;
        if single < 1 {
            return Err(WickError::InvalidConfig("dimension must be ≥ 1".into()));
        }
        Ok((single, single))
    }
}

/// CLI-flag overrides; every field beats the file value when present.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub n: Option<String>,
    pub degree: Option<u32>,
    pub rho: Option<f64>,
    pub k: Option<u32>,
    pub shift: Option<f64>,
    pub symbol: Option<String>,
    pub tol: Option<f64>,
    pub seed: Option<u64>,
}

/// Load and validate a config file.
pub fn load_config(path: &Path) -> Result<ConfigFile> {
    let text = std::fs::read_to_string(path)?;
    let file: ConfigFile = serde_json::from_str(&text)
        .map_err(|e| WickError::InvalidConfig(format!("{}: {e}", path.display())))?;
    if file.schema != 1 {
        return Err(WickError::InvalidConfig(format!(
            "unsupported schema version {} (expected 1)",
            file.schema
        )));
    }
    if let Some(tol) = file.tol {
        if tol <= 0.0 {
            return Err(WickError::InvalidConfig("tol must be positive".into()));
        }
    }
    Ok(file)
}

/// Merge file values and flag overrides into a resolved configuration with
/// defaults applied (ρ = 0.5, n = 1..6, tol = 1e-9, seed = 0).
pub fn resolve_config(file: Option<ConfigFile>, overrides: &Overrides) -> Result<ExperimentConfig> {
    let experiment_name = file
        .as_ref()
        .map(|f| f.experiment.clone())
        .ok_or_else(|| WickError::InvalidConfig("no experiment named".into()));
    let kind: ExperimentKind = experiment_name?.parse()?;
    let mut cfg = ExperimentConfig::new(kind);
    if let Some(file) = &file {
        if let Some(n) = &file.n {
            let (lo, hi) = parse_n_range(n)?;
            cfg.n_min = lo;
            cfg.n_max = hi;
        }
        if let Some(v) = file.degree {
            cfg.degree_max = Some(v);
        }
        if let Some(v) = file.rho {
            cfg.rho = v;
        }
        if let Some(v) = file.k {
            cfg.k = v;
        }
        if let Some(v) = file.shift {
            cfg.shift = v;
        }
        if let Some(v) = &file.symbol {
            cfg.symbol = Some(v.clone());
        }
        if let Some(v) = &file.eigenvalues {
            cfg.eigenvalues = Some(v.clone());
        }
        if let Some(v) = file.tol {
            cfg.tol = v;
        }
        if let Some(v) = file.seed {
            cfg.seed = v;
        }
    }
    apply_overrides(&mut cfg, overrides)?;
    cfg.validate()?;
    Ok(cfg)
}

/// Resolve from a bare experiment name plus flags (no file).
pub fn resolve_config_named(name: &str, overrides: &Overrides) -> Result<ExperimentConfig> {
    resolve_config(Some(ConfigFile::minimal(name)), overrides)
}

fn apply_overrides(cfg: &mut ExperimentConfig, overrides: &Overrides) -> Result<()> {
    if let Some(n) = &overrides.n {
        let (lo, hi) = parse_n_range(n)?;
        cfg.n_min = lo;
        cfg.n_max = hi;
    }
    if let Some(v) = overrides.degree {
        cfg.degree_max = Some(v);
    }
    if let Some(v) = overrides.rho {
        cfg.rho = v;
    }
    if let Some(v) = overrides.k {
        cfg.k = v;
    }
    if let Some(v) = overrides.shift {
        cfg.shift = v;
    }
    if let Some(v) = &overrides.symbol {
        cfg.symbol = Some(v.clone());
    }
    if let Some(v) = overrides.tol {
        cfg.tol = v;
    }
    if let Some(v) = overrides.seed {
        cfg.seed = v;
    }
    Ok(())
}

/// One row of the reproduction index: which command checks which claim.
pub struct ReproRow {
    pub criterion: u32,
    pub claim: &'static str,
    pub command: &'static str,
}

/// The claim-to-command table: one row per acceptance criterion of the
/// test suite (`cargo test -p wicklab --test acceptance`).
pub fn repro_rows() -> Vec<ReproRow> {
    vec![
        ReproRow { criterion: 1, claim: "Bergman projector laws (closed form, idempotency, symmetry)", command: "cargo test -p wicklab --test acceptance criterion_01" },
        ReproRow { criterion: 2, claim: "complex Hermite orthonormality (Gram identity, k,l <= 5)", command: "cargo test -p wicklab --test acceptance criterion_02" },
        ReproRow { criterion: 3, claim: "transform inversion exp(-dd̄)∘exp(dd̄) = id (exact rational)", command: "wicklab transform antiwick --symbol <wick output>  /  cargo test -p wicklab --test acceptance criterion_03" },
        ReproRow { criterion: 4, claim: "Wick/anti-Wick isometry (bi-holomorphic L2 equality)", command: "cargo test -p wicklab --test acceptance criterion_04" },
        ReproRow { criterion: 5, claim: "composition series equals matrix product on the safe block", command: "wicklab compose --b <b> --a <a>  /  cargo test -p wicklab --test acceptance criterion_05" },
        ReproRow { criterion: 6, claim: "anti-Wick positivity and sup-norm domination", command: "cargo test -p wicklab --test acceptance criterion_06" },
        ReproRow { criterion: 7, claim: "anti-Wick(|z|^2) = N̂ + n·I exactly", command: "wicklab quantize --symbol \"1*z^[1]*zbar^[1]\" --degree 6  /  cargo test -p wicklab --test acceptance criterion_07" },
        ReproRow { criterion: 8, claim: "HS-norm bound and decay in n", command: "wicklab experiment hs-bound --rho 0.5 --n 1..8" },
        ReproRow { criterion: 9, claim: "variance identity (two evaluation paths = sum of squares)", command: "wicklab experiment variance" },
        ReproRow { criterion: 10, claim: "ladder Sobolev norm bounds (k in {1,2}, s in {-2..2})", command: "wicklab experiment sobolev --n 1..2 --degree 30" },
        ReproRow { criterion: 11, claim: "translation group law with phase + sign-flip control", command: "wicklab translate --y 0.3 --y2 0.2i --degree 40" },
        ReproRow { criterion: 12, claim: "superposition norm budget and cutoff-norm decay", command: "wicklab experiment cutoff --rho 0.4 --n 1..6" },
        ReproRow { criterion: 13, claim: "radial weight composition defect (one order smoother)", command: "wicklab experiment n-alpha --n 1..2 --degree 30" },
        ReproRow { criterion: 14, claim: "Garding desk model: exact min eigenvalues vs -C n^{k-1}, symbol zoning", command: "wicklab experiment garding --k 2 --n 1..5" },
        ReproRow { criterion: 15, claim: "zone arithmetic truth table and monotonicity", command: "wicklab experiment zones" },
    ]
}

/// Render the reproduction index as text.
pub fn repro_index() -> String {
    let mut out = String::from("criterion  claim -> command\n");
    for row in repro_rows() {
        out.push_str(&format!("{:>9}  {}\n           {}\n", row.criterion, row.claim, row.command));
    }
    out
}
