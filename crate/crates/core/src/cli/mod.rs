//! Command-line front end.
//!
//! Exit codes: `0` success, `1` usage, I/O or format error, `2` verification
//! failure.

mod basis_file;
mod demo;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use thiserror::Error;

pub use basis_file::{load_basis, BasisFile, TermFile, TermsFile};
pub use demo::cmd_demo;

use crate::constructions::{by_name, EXPORT_NAMES};
use crate::entanglement::EntanglementPredicate;
use crate::verify::{full_report, mub_overlap, unextendibility_search, SearchConfig, SearchVerdict};

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_FAILED: i32 = 2;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}: {1}")]
    Io(String, String),
    #[error("{0}: {1}")]
    Format(String, String),
    #[error(transparent)]
    Lib(#[from] crate::Error),
    #[error("{0}")]
    Usage(String),
}

#[derive(Debug, Parser)]
#[command(name = "umeb", version, about = "Construct and verify multipartite maximally entangled bases")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct SearchArgs {
    /// Number of descent restarts
    #[arg(long, default_value_t = 32)]
    pub restarts: usize,
    /// Seed for restart initialization
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Iteration cap per restart
    #[arg(long = "max-iters", default_value_t = 2000)]
    pub max_iters: usize,
}

impl SearchArgs {
    pub fn config(&self) -> SearchConfig {
        SearchConfig { restarts: self.restarts, seed: self.seed, max_iters: self.max_iters, ..SearchConfig::default() }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Reproduce the built-in constructions and check their stated properties
    Demo {
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Verify a basis file and print the full report as JSON
    Verify {
        path: PathBuf,
        /// Additionally require every vector to be maximally entangled under
        /// this predicate (strict | ghz2 | cut1)
        #[arg(long)]
        predicate: Option<String>,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Overlap magnitudes between two basis files
    Overlap {
        a: PathBuf,
        b: PathBuf,
        /// Write the magnitude matrix as CSV
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Write a built-in construction as a basis file
    Export {
        /// meb8 | umeb-2x3-1 | umeb-2x3-2 | umeb-2x3x3-1 | umeb-2x3x3-2 | ghz3
        name: String,
        path: PathBuf,
    },
    /// Search the orthogonal complement for maximally entangled states
    Search {
        path: PathBuf,
        /// strict | ghz2 | cut1
        #[arg(long, default_value = "ghz2")]
        predicate: String,
        #[command(flatten)]
        search: SearchArgs,
    },
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(err, "{e}");
            return if e.use_stderr() { EXIT_ERROR } else { EXIT_OK };
        }
    };
    let result = match cli.command {
        Command::Demo { search } => cmd_demo(&search.config(), out),
        Command::Verify { path, predicate, search } => cmd_verify(&path, predicate.as_deref(), &search.config(), out, err),
        Command::Overlap { a, b, csv } => cmd_overlap(&a, &b, csv.as_deref(), out),
        Command::Export { name, path } => cmd_export(&name, &path),
        Command::Search { path, predicate, search } => cmd_search(&path, &predicate, &search.config(), out, err),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_ERROR
        }
    }
}

fn io(e: std::io::Error) -> CliError {
    CliError::Io("output".into(), e.to_string())
}

/// Formats `x` rounded to 15 significant digits in shortest form.
pub fn sig15(x: f64) -> String {
    let rounded: f64 = format!("{x:.14e}").parse().expect("formatted float parses");
    format!("{rounded:?}")
}

fn parse_predicate(name: &str, basis: &crate::constructions::LabeledBasis) -> Result<EntanglementPredicate, CliError> {
    EntanglementPredicate::parse(name, basis.shape()).map_err(|e| CliError::Usage(e.to_string()))
}

pub fn cmd_verify(
    path: &Path,
    predicate: Option<&str>,
    cfg: &SearchConfig,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<i32, CliError> {
    let basis = load_basis(path)?;
    let required = predicate.map(|p| parse_predicate(p, &basis)).transpose()?;
    let preds: Vec<EntanglementPredicate> = match &required {
        Some(p) => vec![p.clone()],
        None if basis.claims().is_empty() => ["strict", "ghz2", "cut1"]
            .iter()
            .filter_map(|n| EntanglementPredicate::parse(n, basis.shape()).ok())
            .collect(),
        None => Vec::new(),
    };
    let report = full_report(&basis, &preds, cfg)?;
    writeln!(out, "{}", serde_json::to_string_pretty(&report).expect("report serializes")).map_err(io)?;

    let mut failures = Vec::new();
    if !report.orthonormality.holds {
        failures.push(format!("orthonormality residual {:e} exceeds tolerance", report.orthonormality.max_residual));
    }
    for c in report.claims.iter().filter(|c| !c.verified) {
        failures.push(format!("claim {} not verified: {}", c.claim, c.detail));
    }
    if let Some(p) = &required {
        let summary = report.entanglement_for(p).expect("required predicate evaluated");
        for v in summary.vectors.iter().filter(|v| !v.holds) {
            let cuts: Vec<String> = v
                .residuals
                .iter()
                .filter(|r| r.residual >= crate::verify::REPORT_ENTANGLEMENT_TOL)
                .map(|r| format!("cut {} residual {}", r.cut, sig15(r.residual)))
                .collect();
            let why = v.note.clone().unwrap_or_else(|| cuts.join(", "));
            failures.push(format!("{} is not maximally entangled under {p}: {why}", v.label));
        }
    }
    for f in &failures {
        writeln!(err, "FAIL: {f}").map_err(io)?;
    }
    Ok(if failures.is_empty() { EXIT_OK } else { EXIT_FAILED })
}

pub fn cmd_overlap(a: &Path, b: &Path, csv_path: Option<&Path>, out: &mut dyn Write) -> Result<i32, CliError> {
    let ba = load_basis(a)?;
    let bb = load_basis(b)?;
    let report = mub_overlap(&ba, &bb)?;
    if let Some(p) = csv_path {
        let mut w = csv::Writer::from_path(p).map_err(|e| CliError::Io(p.display().to_string(), e.to_string()))?;
        for row in &report.magnitudes {
            w.write_record(row.iter().map(|&m| sig15(m))).map_err(|e| CliError::Io(p.display().to_string(), e.to_string()))?;
        }
        w.flush().map_err(|e| CliError::Io(p.display().to_string(), e.to_string()))?;
    }
    let verdict = if report.unbiased { "unbiased" } else { "not unbiased" };
    writeln!(out, "{} vs {}: {verdict} ({})", report.set_a, report.set_b, report.scope.describe()).map_err(io)?;
    writeln!(out, "target 1/sqrt({}) = {}", ba.shape().total(), sig15(report.target)).map_err(io)?;
    writeln!(out, "max deviation {}", sig15(report.max_deviation)).map_err(io)?;
    if let Some(v) = &report.first_violation {
        writeln!(out, "first violation: |<{}|{}>| = {} at ({}, {})", v.label_a, v.label_b, sig15(v.magnitude), v.row, v.col)
            .map_err(io)?;
    }
    Ok(EXIT_OK)
}

pub fn cmd_export(name: &str, path: &Path) -> Result<i32, CliError> {
    let basis = by_name(name).map_err(|_| {
        CliError::Usage(format!("unknown construction {name:?}; expected one of {}", EXPORT_NAMES.join(", ")))
    })?;
    BasisFile::from_basis(&basis).write(path)?;
    Ok(EXIT_OK)
}

pub fn cmd_search(
    path: &Path,
    predicate: &str,
    cfg: &SearchConfig,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<i32, CliError> {
    let basis = load_basis(path)?;
    let pred = parse_predicate(predicate, &basis)?;
    let result = match unextendibility_search(&basis, &pred, cfg) {
        Ok(r) => r,
        Err(e @ crate::Error::NotOrthonormal { .. }) => {
            writeln!(err, "FAIL: {e}").map_err(io)?;
            return Ok(EXIT_FAILED);
        }
        Err(e) => return Err(e.into()),
    };
    writeln!(out, "{}", serde_json::to_string_pretty(&result).expect("result serializes")).map_err(io)?;
    let summary = match &result.verdict {
        SearchVerdict::ComplementEmpty => "complement empty".to_string(),
        SearchVerdict::NoMeStateFound { min_defect } => {
            format!("no maximally entangled complement state found; min defect {min_defect:.6}")
        }
        SearchVerdict::MeStateFound { .. } => {
            format!("witness found; defect {:e}", result.min_defect.unwrap_or(0.0))
        }
    };
    writeln!(err, "{} [{pred}]: {summary}", basis.name()).map_err(io)?;
    Ok(EXIT_OK)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn significant_digit_formatting() {
        assert_eq!(sig15(1.0 / 6f64.sqrt()), "0.408248290463863");
        assert_eq!(sig15(std::f64::consts::FRAC_1_SQRT_2), "0.707106781186548");
        assert_eq!(sig15(1.0), "1.0");
        assert_eq!(sig15(0.0), "0.0");
    }

    #[test]
    fn usage_errors_exit_one() {
        let (mut o, mut e) = (Vec::new(), Vec::new());
        assert_eq!(run(["umeb", "frobnicate"], &mut o, &mut e), EXIT_ERROR);
        assert_eq!(run(["umeb", "--help"], &mut o, &mut e), EXIT_OK);
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("x.json");
        assert_eq!(run(["umeb", "export", "nope", p.to_str().unwrap()], &mut o, &mut e), EXIT_ERROR);
        assert_eq!(run(["umeb", "verify", "/nonexistent/file.json"], &mut o, &mut e), EXIT_ERROR);
    }
}
