//! Command-line front end: reads point sets, weights and tensors as JSON,
//! runs the certification pipeline, and writes one JSON document per run.

pub mod error;
pub mod generators;
pub mod harness;
pub mod suites;

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use num_bigint::BigInt;
use num_traits::One;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use waring_core::json::{rationals_to_json, JsonRational};
use waring_core::{
    cb_check, certify, certify_weighted, hilbert_profile, is_minimal, kruskal_rank, membership, synthesize,
    PointSet, PointSetDocument, Rational, TensorDocument, WeightedDecomposition,
};

pub use error::CliError;
use generators::Generator;
use harness::{HarnessConfig, DEFAULT_SEED};

/// Environment variable naming the directory that receives output documents
/// when `--out` is not given.
pub const OUT_DIR_ENV: &str = "WARING_OUT_DIR";

#[derive(Debug, Parser)]
#[command(
    name = "waring",
    version,
    about = "Exact identifiability certificates for Waring decompositions"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Write the JSON document to this file instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Directory for `<command>.json` when --out is not given.
    #[arg(long, global = true, env = OUT_DIR_ENV)]
    pub out_dir: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Hilbert function h, first difference Dh and h¹ of a point set.
    Hilbert {
        input: PathBuf,
        /// Last degree of the profile (default ℓ − 1).
        #[arg(long)]
        dmax: Option<u32>,
    },
    /// Kruskal rank of the degree-d Veronese image.
    KruskalRank {
        input: PathBuf,
        #[arg(short, long)]
        degree: u32,
    },
    /// Cayley-Bacharach check in one degree.
    CbCheck {
        input: PathBuf,
        #[arg(short, long)]
        degree: u32,
    },
    /// Identifiability certificate for a decomposition of degree d.
    Certify {
        input: PathBuf,
        #[arg(short, long)]
        degree: u32,
        /// `{"weights": [...]}`; verifies minimality instead of assuming it.
        #[arg(long)]
        weights: Option<PathBuf>,
    },
    /// Σ aᵢ Lᵢᵈ for the linear forms listed in a point file.
    Synthesize {
        input: PathBuf,
        #[arg(short, long)]
        degree: u32,
        /// `{"weights": [...]}`; all ones when omitted.
        #[arg(long)]
        weights: Option<PathBuf>,
    },
    /// Recovers the weights of a tensor on given points and checks minimality.
    Verify {
        #[arg(long)]
        tensor: PathBuf,
        #[arg(long)]
        points: PathBuf,
    },
    /// Certifies random point sets and re-checks invariants on each one.
    Harness {
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        trials: u64,
        #[arg(long, default_value = "uniform-box")]
        generator: Generator,
        /// Points per set.
        #[arg(long, short = 'l', default_value_t = 11)]
        size: usize,
        #[arg(short, long, default_value_t = 7)]
        degree: u32,
        /// Coordinates or curve parameters range over [−box, box].
        #[arg(long = "box", default_value_t = 20)]
        bound: i64,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Hilbert { .. } => "hilbert",
            Command::KruskalRank { .. } => "kruskal-rank",
            Command::CbCheck { .. } => "cb-check",
            Command::Certify { .. } => "certify",
            Command::Synthesize { .. } => "synthesize",
            Command::Verify { .. } => "verify",
            Command::Harness { .. } => "harness",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Destination {
    Stdout,
    File(PathBuf),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunConfig {
    pub command: Command,
    pub destination: Destination,
}

impl RunConfig {
    pub fn from_cli(cli: Cli) -> Self {
        let destination = match (cli.out, cli.out_dir) {
            (Some(path), _) => Destination::File(path),
            (None, Some(dir)) => Destination::File(dir.join(format!("{}.json", cli.command.name()))),
            (None, None) => Destination::Stdout,
        };
        Self {
            command: cli.command,
            destination,
        }
    }
}

/// A finished run: the JSON document, a one-line summary for humans, and
/// the exit status (nonzero only when the harness found a violation).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Report {
    pub json: String,
    pub summary: String,
    pub exit_code: i32,
}

#[derive(Debug, Deserialize)]
struct WeightsDocument {
    weights: Vec<JsonRational>,
}

#[derive(Debug, Serialize)]
struct VerifyReport {
    in_span: bool,
    /// Weights on the forms as written in the point file.
    weights: Option<Vec<JsonRational>>,
    minimal: bool,
}

fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })?;
    serde_json::from_str(&text).map_err(|e| CliError::MalformedJson {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

fn read_points(path: &Path) -> Result<(Vec<Vec<BigInt>>, PointSet), CliError> {
    let document: PointSetDocument = read_json(path)?;
    let raw = document.raw_rows();
    let n = document.n;
    let set = document.into_point_set()?;
    if set.is_empty() {
        return Err(CliError::Usage(format!(
            "{}: the point set is empty",
            path.display()
        )));
    }
    debug_assert_eq!(set.ambient_dim(), n);
    Ok((raw, set))
}

fn read_weights(path: &Path) -> Result<Vec<Rational>, CliError> {
    let document: WeightsDocument = read_json(path)?;
    Ok(document.weights.into_iter().map(Rational::from).collect())
}

fn to_json<T: Serialize>(value: &T) -> Result<String, CliError> {
    serde_json::to_string_pretty(value).map_err(|e| CliError::Internal(e.to_string()))
}

fn require_degree(degree: u32) -> Result<(), CliError> {
    if degree == 0 {
        Err(CliError::Usage("--degree must be at least 1".into()))
    } else {
        Ok(())
    }
}

fn ok(json: String, summary: String) -> Result<Report, CliError> {
    Ok(Report {
        json,
        summary,
        exit_code: 0,
    })
}

/// Executes one command and returns its document without writing it.
pub fn run(config: &RunConfig) -> Result<Report, CliError> {
    match &config.command {
        Command::Hilbert { input, dmax } => {
            let (_, z) = read_points(input)?;
            let profile = hilbert_profile(&z, *dmax)?;
            let summary = format!("hilbert: l = {}, Dh = {:?}", profile.set_size, profile.dh);
            ok(to_json(&profile)?, summary)
        }
        Command::KruskalRank { input, degree } => {
            let (_, z) = read_points(input)?;
            require_degree(*degree)?;
            let report = kruskal_rank(&z, *degree)?;
            let summary = format!("kruskal-rank: k_{} = {}", report.degree, report.rank);
            ok(to_json(&report)?, summary)
        }
        Command::CbCheck { input, degree } => {
            let (_, z) = read_points(input)?;
            let report = cb_check(&z, *degree)?;
            let summary = match report.separating_point {
                None => format!("cb-check: CB({degree}) holds"),
                Some(p) => format!("cb-check: CB({degree}) fails at point {p}"),
            };
            ok(to_json(&report)?, summary)
        }
        Command::Certify {
            input,
            degree,
            weights,
        } => {
            let (_, z) = read_points(input)?;
            require_degree(*degree)?;
            let certificate = match weights {
                Some(path) => certify_weighted(&z, &read_weights(path)?, *degree)?,
                None => certify(&z, *degree)?,
            };
            let rule = certificate.rule.map_or("no rule", |r| r.name());
            let summary = match &certificate.conclusion {
                Some(conclusion) => format!("certify: {rule}: {conclusion}"),
                None => format!(
                    "certify: inconclusive ({})",
                    certificate.evidence.diagnostics.join("; ")
                ),
            };
            ok(to_json(&certificate)?, summary)
        }
        Command::Synthesize {
            input,
            degree,
            weights,
        } => {
            let (raw, z) = read_points(input)?;
            let weights = match weights {
                Some(path) => read_weights(path)?,
                None => vec![Rational::one(); z.len()],
            };
            let decomposition = WeightedDecomposition::from_linear_forms(z.ambient_dim(), &raw, weights)?;
            let tensor = synthesize(&decomposition, *degree);
            let summary = format!(
                "synthesize: {} powers of degree {degree}, {} coefficients",
                z.len(),
                tensor.coeffs().len()
            );
            ok(to_json(&tensor.to_document())?, summary)
        }
        Command::Verify { tensor, points } => {
            let document: TensorDocument = read_json(tensor)?;
            let t = document.into_tensor()?;
            let (raw, z) = read_points(points)?;
            let forms = WeightedDecomposition::from_linear_forms(
                z.ambient_dim(),
                &raw,
                vec![Rational::one(); z.len()],
            )?;
            let report = match membership(&t, &z)? {
                None => VerifyReport {
                    in_span: false,
                    weights: None,
                    minimal: false,
                },
                Some(canonical) => {
                    // T = Σ cᵢ Pᵢᵈ = Σ (cᵢ / sᵢᵈ) Lᵢᵈ
                    let written: Vec<Rational> = canonical
                        .iter()
                        .zip(forms.scales())
                        .map(|(c, s)| c / num_traits::pow(s.clone(), t.degree() as usize))
                        .collect();
                    VerifyReport {
                        in_span: true,
                        weights: Some(rationals_to_json(&written)),
                        minimal: is_minimal(&t, &z)?,
                    }
                }
            };
            let summary = match (report.in_span, report.minimal) {
                (false, _) => "verify: the tensor is not in the span of the points".to_string(),
                (true, true) => "verify: minimal decomposition".to_string(),
                (true, false) => "verify: in the span, but not a minimal decomposition".to_string(),
            };
            ok(to_json(&report)?, summary)
        }
        Command::Harness {
            seed,
            trials,
            generator,
            size,
            degree,
            bound,
        } => {
            let report = harness::harness(&HarnessConfig {
                seed: *seed,
                trials: *trials,
                generator: *generator,
                size: *size,
                degree: *degree,
                bound: *bound,
            })?;
            let exit_code = if report.passed() {
                0
            } else {
                CliError::InvariantViolation(String::new()).exit_code()
            };
            Ok(Report {
                json: to_json(&report)?,
                summary: report.summary(),
                exit_code,
            })
        }
    }
}

fn write_document(destination: &Destination, json: &str) -> Result<(), CliError> {
    match destination {
        Destination::Stdout => {
            let mut out = io::stdout().lock();
            match writeln!(out, "{json}").and_then(|_| out.flush()) {
                // a closed pipe (e.g. `| head`) is the reader's choice
                Err(e) if e.kind() != io::ErrorKind::BrokenPipe => Err(CliError::Io {
                    path: "standard output".to_string(),
                    source: e,
                }),
                _ => Ok(()),
            }
        }
        Destination::File(path) => {
            if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
                fs::create_dir_all(dir).map_err(|source| CliError::Io {
                    path: dir.display().to_string(),
                    source,
                })?;
            }
            fs::write(path, format!("{json}\n")).map_err(|source| CliError::Io {
                path: path.display().to_string(),
                source,
            })
        }
    }
}

/// Runs and writes the document (or an error document), prints the summary
/// to standard error, and returns the process exit status.
pub fn execute(config: &RunConfig) -> i32 {
    let outcome = run(config).and_then(|report| {
        write_document(&config.destination, &report.json)?;
        Ok(report)
    });
    match outcome {
        Ok(report) => {
            eprintln!("{}", report.summary);
            if report.exit_code != 0 {
                eprintln!("error: invariant violations found, see the violations list");
            }
            report.exit_code
        }
        Err(e) => {
            let json = serde_json::to_string_pretty(&e.report()).expect("error reports serialize");
            // the error document always goes to standard output so a failed
            // write cannot hide it
            println!("{json}");
            eprintln!("error [{}]: {e}", e.code());
            e.exit_code()
        }
    }
}
