//! The `cp2mub` command line: build a system of mutually unbiased bases,
//! verify a system file, run the trigonometric law suite, or print the Gram
//! data of one pair of bases.
//!
//! Commands return their report as a string together with an exit code
//! (0 pass, 1 verification failure). Input and usage problems surface as
//! [`CliError`], which always maps to exit code 2.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use cp2mub::trig::{holonomy_sign, run_law_suite, tetra_identity_residual, LawReport, Transported};
use cp2mub::verification::{cross_distance_matrix, transition_matrix};
use cp2mub::{build_system, check_system, inner, GaugeConfig, EXACT_TOL};
use serde::Serialize;

pub mod format;

use format::{to_csv, to_json, Metadata, SystemFile};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Read { path: PathBuf, source: std::io::Error },
    #[error("cannot write {path}: {source}")]
    Write { path: PathBuf, source: std::io::Error },
    #[error("invalid input at `{field}`: {message}")]
    Field { field: String, message: String },
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        2
    }
}

#[derive(Debug, Parser)]
#[command(name = "cp2mub", version, about = "Mutually unbiased bases in C³ from projective trigonometry")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build the four bases and write them as a system file.
    Construct {
        /// Longitude offset of the three lifted bases (radians).
        #[arg(long, allow_hyphen_values = true)]
        azimuth: Option<f64>,
        /// JSON gauge: {"a", "e_dir", "f_dir", "azimuth"?, "labels"?}.
        #[arg(long)]
        gauge_file: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
        format: OutputFormat,
        /// Destination; standard output when absent.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Check orthonormality and unbiasedness of a system file.
    Verify {
        #[arg(long)]
        input: PathBuf,
        /// Defaults to the file's own tolerance, or 1e-12 for CSV.
        #[arg(long, value_parser = positive_float)]
        tol: Option<f64>,
    },
    /// Run the randomized law suite, the tetrahedral identity and holonomy.
    Laws {
        #[arg(long, default_value_t = 10_000, value_parser = clap::value_parser!(u64).range(1..))]
        trials: u64,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        #[arg(long, default_value_t = 1e-9, value_parser = positive_float)]
        tol: f64,
    },
    /// Moduli table and cross-distance cosines of two bases.
    Gram {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, num_args = 2, value_names = ["L1", "L2"], required = true)]
        pair: Vec<String>,
    },
}

fn positive_float(s: &str) -> Result<f64, String> {
    let x: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if x.is_finite() && x > 0.0 {
        Ok(x)
    } else {
        Err(format!("expected a positive number, got {s}"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: u8,
    pub stdout: String,
}

pub fn run(cli: &Cli) -> Result<Outcome, CliError> {
    match &cli.command {
        Command::Construct { azimuth, gauge_file, format, output } => {
            construct(*azimuth, gauge_file.as_deref(), *format, output.as_deref())
        }
        Command::Verify { input, tol } => verify(input, *tol),
        Command::Laws { trials, seed, tol } => Ok(laws(*trials as usize, *seed, *tol)),
        Command::Gram { input, pair } => gram(input, &pair[0], &pair[1]),
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Read { path: path.to_path_buf(), source })
}

pub fn load(path: &Path) -> Result<format::Loaded, CliError> {
    format::parse(&read(path)?)
}

pub fn read_gauge(path: &Path) -> Result<GaugeConfig, CliError> {
    let text = read(path)?;
    let de = &mut serde_json::Deserializer::from_str(&text);
    serde_path_to_error::deserialize(de).map_err(|e| CliError::Field {
        field: format!("gauge.{}", e.path()),
        message: e.inner().to_string(),
    })
}

/// The system file text for a gauge.
pub fn render_system(gauge: &GaugeConfig, format: OutputFormat) -> Result<String, CliError> {
    let sys = build_system(gauge).map_err(|e| CliError::Field { field: "gauge".into(), message: e.to_string() })?;
    Ok(match format {
        OutputFormat::Json => to_json(&SystemFile::new(Metadata::current(EXACT_TOL, Some(sys.gauge)), &sys.bases)),
        OutputFormat::Csv => to_csv(&sys.bases),
    })
}

pub fn construct(
    azimuth: Option<f64>,
    gauge_file: Option<&Path>,
    format: OutputFormat,
    output: Option<&Path>,
) -> Result<Outcome, CliError> {
    let mut gauge = match gauge_file {
        Some(p) => read_gauge(p)?,
        None => GaugeConfig::default(),
    };
    if let Some(az) = azimuth {
        gauge.azimuth = az;
    }
    let text = render_system(&gauge, format)?;
    match output {
        Some(path) => {
            std::fs::write(path, text).map_err(|source| CliError::Write { path: path.to_path_buf(), source })?;
            Ok(Outcome { code: 0, stdout: String::new() })
        }
        None => Ok(Outcome { code: 0, stdout: text }),
    }
}

fn verdict(pass: bool) -> &'static str {
    if pass {
        "ok"
    } else {
        "FAIL"
    }
}

pub fn verify(input: &Path, tol: Option<f64>) -> Result<Outcome, CliError> {
    let loaded = load(input)?;
    let tol = tol.or(loaded.metadata.as_ref().map(|m| m.tolerance)).unwrap_or(EXACT_TOL);
    let report = check_system(&loaded.bases, tol).map_err(|e| CliError::Field { field: "bases".into(), message: e.to_string() })?;
    let mut out = String::new();
    let _ = writeln!(out, "verify {} (tolerance {:.3e})", input.display(), tol);
    let _ = writeln!(out, "orthonormality  max |<e_i,e_j> - δ_ij|");
    for b in &report.orthonormality {
        let _ = writeln!(out, "  {:<8} {:.3e}  {}", b.label, b.deviation, verdict(b.deviation < tol));
    }
    let _ = writeln!(out, "unbiasedness    max ||<e_i,f_j>| - 1/√3|");
    for p in &report.unbiasedness {
        let pair = format!("{}-{}", p.first, p.second);
        let _ = writeln!(out, "  {:<8} {:.3e}  {}", pair, p.deviation, verdict(p.deviation < tol));
    }
    let _ = writeln!(
        out,
        "result: {} ({} of 10 checks failed, max deviation {:.3e})",
        if report.pass { "PASS" } else { "FAIL" },
        report.failures(),
        report.max_deviation()
    );
    out.push_str(&to_json(&report));
    Ok(Outcome { code: if report.pass { 0 } else { 1 }, stdout: out })
}

#[derive(Debug, Serialize)]
struct HolonomyRow {
    lambda: f64,
    normal: i8,
    tangent: i8,
    pass: bool,
}

pub fn laws(trials: usize, seed: u64, tol: f64) -> Outcome {
    let suite = run_law_suite(trials, seed, tol);
    let tetra = tetra_identity_residual();
    let sys = build_system(&GaugeConfig::default()).expect("default gauge");
    let lm = &sys.landmarks;
    let holonomy: Vec<HolonomyRow> = lm
        .planes
        .iter()
        .zip(lm.longitudes)
        .map(|(plane, lambda)| {
            let normal = holonomy_sign(plane, &lm.equator, Transported::Normal).unwrap_or(0);
            let tangent = holonomy_sign(plane, &lm.equator, Transported::Tangent).unwrap_or(0);
            HolonomyRow { lambda, normal, tangent, pass: normal == -1 && tangent == 1 }
        })
        .collect();

    let mut out = String::new();
    let row = |out: &mut String, r: &LawReport| {
        let _ = writeln!(
            out,
            "{:<4} trials {:>7}  max {:.6e}  mean {:.6e}  failures {}  {}",
            r.law,
            r.trials,
            r.max_residual,
            r.mean_residual,
            r.failures,
            verdict(r.passed())
        );
    };
    let _ = writeln!(out, "laws seed {seed} tolerance {tol:.3e}");
    row(&mut out, &suite.e21);
    row(&mut out, &suite.e22);
    let tetra_pass = tetra < tol;
    let _ = writeln!(out, "e23  residual at arccos(-1/3)  {:.6e}  {}", tetra, verdict(tetra_pass));
    for h in &holonomy {
        let _ = writeln!(
            out,
            "holonomy λ={:.6}  normal {:+}  tangent {:+}  {}",
            h.lambda,
            h.normal,
            h.tangent,
            verdict(h.pass)
        );
    }
    let pass = suite.e21.passed() && suite.e22.passed() && tetra_pass && holonomy.iter().all(|h| h.pass);
    let _ = writeln!(out, "result: {}", if pass { "PASS" } else { "FAIL" });
    let block = serde_json::json!({
        "seed": seed,
        "tolerance": tol,
        "e21": suite.e21,
        "e22": suite.e22,
        "e23": { "residual": tetra, "pass": tetra_pass },
        "holonomy": holonomy,
        "pass": pass,
    });
    out.push_str(&to_json(&block));
    Outcome { code: if pass { 0 } else { 1 }, stdout: out }
}

pub fn gram(input: &Path, l1: &str, l2: &str) -> Result<Outcome, CliError> {
    let loaded = load(input)?;
    let known = || loaded.bases.iter().map(|b| b.label.as_str()).collect::<Vec<_>>().join(", ");
    let find = |l: &str| {
        loaded
            .basis(l)
            .ok_or_else(|| CliError::Usage(format!("unknown basis label `{l}` (file has {})", known())))
    };
    let (b1, b2) = (find(l1)?, find(l2)?);
    let moduli = [0, 1, 2].map(|i| [0, 1, 2].map(|j| inner(&b1.vectors[i], &b2.vectors[j]).norm()));
    let cosines = cross_distance_matrix(b1, b2)
        .map_err(|e| CliError::Field { field: "bases".into(), message: e.to_string() })?
        .map(|row| row.map(f64::cos));

    let mut out = String::new();
    let table = |out: &mut String, title: &str, m: &[[f64; 3]; 3]| {
        let _ = writeln!(out, "{title}");
        for row in m {
            let _ = writeln!(out, "  {:>20.16} {:>20.16} {:>20.16}", row[0], row[1], row[2]);
        }
    };
    table(&mut out, &format!("|<{l1}_i, {l2}_j>|"), &moduli);
    table(&mut out, &format!("cos d({l1}_i, {l2}_j)"), &cosines);
    let hadamard = transition_matrix(b1, b2).ok().map(|t| t.hadamard_deviation());
    match hadamard {
        Some(h) => {
            let _ = writeln!(out, "hadamard deviation of √3·M: {h:.3e}");
        }
        None => {
            let _ = writeln!(out, "hadamard deviation of √3·M: n/a (a basis is not orthonormal)");
        }
    }
    let block = serde_json::json!({
        "pair": [l1, l2],
        "moduli": moduli,
        "cosines": cosines,
        "hadamard_deviation": hadamard,
    });
    out.push_str(&to_json(&block));
    Ok(Outcome { code: 0, stdout: out })
}

