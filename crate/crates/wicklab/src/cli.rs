//! The `wicklab` command-line interface.
//!
//! Exit codes: 0 success, 1 usage/configuration error, 2 assertion failure
//! (an experiment row or a translate check did not pass), 3 resource or
//! quadrature failure.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;

use crate::config::{
    load_config, repro_index, resolve_config, resolve_config_named, Overrides,
};
use crate::error::WickError;
use crate::fock::{enumerate_basis, TruncationParams};
use crate::heisenberg::translation_op;
use crate::lab::{group_law_check, run_experiment, ExperimentReport};
use crate::quantize::{antiwick_quantize_poly, operator_to_json};
use crate::symbols::{
    antiwick_transform, compose_antiwick, parse_complex_list, parse_poly_with_dim, wick_transform,
};

#[derive(Parser)]
#[command(
    name = "wicklab",
    version,
    about = "Anti-Wick operator calculus on truncated Fock spaces: quantize symbols, compose translations, and measure dimension-dependent norm estimates"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Default)]
struct ExpFlags {
    /// JSON configuration file; flags override its values
    #[arg(long)]
    config: Option<PathBuf>,
    /// dimension or range, e.g. `2` or `1..6`
    #[arg(long)]
    n: Option<String>,
    /// truncation degree N
    #[arg(long)]
    degree: Option<u32>,
    #[arg(long)]
    rho: Option<f64>,
    /// vanishing order of the lower-bound model family
    #[arg(long)]
    k: Option<u32>,
    /// shift strength c of the (|z|²-c·n)^k family
    #[arg(long)]
    shift: Option<f64>,
    #[arg(long)]
    symbol: Option<String>,
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    /// report destination (stdout when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_parser = ["json", "csv"])]
    format: Option<String>,
}

impl ExpFlags {
    fn overrides(&self) -> Overrides {
        Overrides {
            n: self.n.clone(),
            degree: self.degree,
            rho: self.rho,
            k: self.k,
            shift: self.shift,
            symbol: self.symbol.clone(),
            tol: self.tol,
            seed: self.seed,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Enumerate the graded monomial basis
    Basis {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        degree: u32,
    },
    /// Anti-Wick quantize a polynomial symbol into an operator JSON
    Quantize {
        #[arg(long)]
        symbol: String,
        /// dimension (inferred from the symbol when omitted)
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, default_value_t = 8)]
        degree: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Apply exp(±∂∂̄) to a symbol and print the result
    Transform {
        #[arg(value_parser = ["wick", "antiwick"])]
        direction: String,
        #[arg(long)]
        symbol: String,
        #[arg(long)]
        n: Option<usize>,
    },
    /// Compose two anti-Wick symbols: the symbol of B∘A
    Compose {
        #[arg(long)]
        b: String,
        #[arg(long)]
        a: String,
        #[arg(long)]
        n: Option<usize>,
    },
    /// Build a symplectic translation; with --y2, check the group law
    Translate {
        /// phase-space point, comma-separated complex coordinates
        #[arg(long)]
        y: String,
        /// second point for the group-law check
        #[arg(long)]
        y2: Option<String>,
        #[arg(long, default_value_t = 40)]
        degree: u32,
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a named experiment and emit its report
    Experiment {
        /// hs-bound | variance | sobolev | n-alpha | garding | cutoff | zones
        name: String,
        #[command(flatten)]
        flags: ExpFlags,
    },
    /// Run one experiment across a grid of rho values
    Sweep {
        #[arg(long)]
        experiment: String,
        /// comma-separated rho grid, e.g. 0.3,0.4,0.5
        #[arg(long = "rho-grid", value_delimiter = ',', required = true)]
        rho_grid: Vec<f64>,
        #[command(flatten)]
        flags: ExpFlags,
    },
    /// Print the claim-to-command reproduction table
    ReproIndex,
}

fn exit_code(err: &WickError) -> i32 {
    match err {
        WickError::QuadratureNonconvergence { .. } | WickError::ResourceLimit { .. } => 3,
        _ => 1,
    }
}

/// Entry point used by the binary; parses argv and dispatches.
pub fn run_cli<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(err) => {
            // help/version are successes, everything else is a usage error
            let code = if err.use_stderr() { 1 } else { 0 };
            let _ = err.print();
            return code;
        }
    };
    match dispatch(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            exit_code(&err)
        }
    }
}

fn dispatch(cli: Cli) -> crate::error::Result<i32> {
    match cli.command {
        Command::Basis { n, degree } => {
            let params = TruncationParams::new(n, degree);
            params.check_dense_guard()?;
            let basis = enumerate_basis(params);
            for alpha in &basis {
                println!("{alpha}");
            }
            println!("count: {} = C({}, {})", basis.len(), n + degree as usize, n);
            Ok(0)
        }
        Command::Quantize {
            symbol,
            n,
            degree,
            out,
        } => {
            let poly = parse_poly_with_dim(&symbol, n)?;
            let params = TruncationParams::new(poly.dim(), degree);
            let result = antiwick_quantize_poly(&poly, params)?;
            let json = serde_json::to_string_pretty(&operator_to_json(&result))
                .expect("operator serializes");
            emit(out.as_deref(), &json)?;
            Ok(0)
        }
        Command::Transform {
            direction,
            symbol,
            n,
        } => {
            let poly = parse_poly_with_dim(&symbol, n)?;
            let out = match direction.as_str() {
                "wick" => wick_transform(&poly),
                _ => antiwick_transform(&poly),
            };
            println!("{out}");
            Ok(0)
        }
        Command::Compose { b, a, n } => {
            let pb = parse_poly_with_dim(&b, n)?;
            let pa = parse_poly_with_dim(&a, Some(pb.dim()))?;
            println!("{}", compose_antiwick(&pb, &pa));
            Ok(0)
        }
        Command::Translate {
            y,
            y2,
            degree,
            tol,
            out,
        } => {
            let y: Vec<Complex64> = parse_complex_list(&y)?;
            let params = TruncationParams::new(y.len(), degree);
            let translation = translation_op(&y, params)?;
            if let Some(out_path) = out {
                let json = serde_json::to_string_pretty(&operator_to_json(&translation))
                    .expect("operator serializes");
                emit(Some(&out_path), &json)?;
            }
            let Some(y2) = y2 else {
                println!(
                    "translation built: dim {}, vacuum element {}",
                    translation.operator.dim(),
                    crate::symbols::format_complex(translation.operator.matrix()[(0, 0)])
                );
                return Ok(0);
            };
            let y2: Vec<Complex64> = parse_complex_list(&y2)?;
            let check = group_law_check(&y, &y2, params, degree.min(10))?;
            println!("group-law defect:   {:.3e}", check.defect);
            println!("sign-flip control:  {:.3e}", check.flipped_defect);
            if check.defect <= tol && check.flipped_defect > 1e-2 {
                println!("group law holds within {tol:.1e}; flipped sign rejected");
                Ok(0)
            } else {
                println!("group-law check FAILED");
                Ok(2)
            }
        }
        Command::Experiment { name, flags } => {
            let report = run_named_experiment(&name, &flags)?;
            write_report(&report, &flags)?;
            Ok(if report.all_pass() { 0 } else { 2 })
        }
        Command::Sweep {
            experiment,
            rho_grid,
            flags,
        } => {
            if rho_grid.is_empty() {
                return Err(WickError::InvalidConfig("empty rho grid".into()));
            }
            let mut reports = Vec::new();
            for &r in &rho_grid {
                let mut flags = flags.clone();
                flags.rho = Some(r);
                reports.push(run_named_experiment(&experiment, &flags)?);
            }
            let all_pass = reports.iter().all(|r| r.all_pass());
            let format = flags.format.as_deref().unwrap_or("csv");
            let text = if format == "json" {
                serde_json::to_string_pretty(&reports).expect("reports serialize")
            } else {
                let mut out = String::from("experiment,rho,n,measured,bound,pass\n");
                for (report, &r) in reports.iter().zip(&rho_grid) {
                    for row in &report.rows {
                        out.push_str(&format!(
                            "{},{},{},{},{},{}\n",
                            report.experiment, r, row.n, row.measured, row.bound, row.pass
                        ));
                    }
                }
                out
            };
            emit(flags.out.as_deref(), &text)?;
            Ok(if all_pass { 0 } else { 2 })
        }
        Command::ReproIndex => {
            print!("{}", repro_index());
            Ok(0)
        }
    }
}

fn run_named_experiment(
    name: &str,
    flags: &ExpFlags,
) -> crate::error::Result<ExperimentReport> {
    let overrides = flags.overrides();
    let cfg = match &flags.config {
        Some(path) => {
            let mut file = load_config(path)?;
            // the subcommand name wins over the file's experiment field only
            // when the file omits it... the field is mandatory, so require
            // agreement to avoid silent surprises
            if file.experiment != name {
                file.experiment = name.to_string();
            }
            resolve_config(Some(file), &overrides)?
        }
        None => resolve_config_named(name, &overrides)?,
    };
    run_experiment(&cfg)
}

fn write_report(report: &ExperimentReport, flags: &ExpFlags) -> crate::error::Result<()> {
    let format = flags.format.as_deref().unwrap_or("json");
    let text = if format == "csv" {
        report.to_csv()
    } else {
        report.to_json()
    };
    emit(flags.out.as_deref(), &text)
}

fn emit(path: Option<&std::path::Path>, text: &str) -> crate::error::Result<()> {
    match path {
        Some(path) => {
            std::fs::write(path, text)?;
            Ok(())
        }
        None => {
            println!("{text}");
            Ok(())
        }
    }
}
