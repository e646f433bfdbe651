//! Command-line front end: `build`, `embed`, `eval`, `verify`, `table`.
//!
//! Exit statuses: 0 success, 1 a certificate failed, 2 usage error, 3 the
//! computation or I/O failed.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::embedding::{continuity_table, embed, eval_at, table_to_csv, EmbeddedImage};
use crate::error::Error;
use crate::scalar::{parse_rational, serde_rational, to_decimal, ComplexRational, Rational};
use crate::sparse::SparseVector;
use crate::suite::{build_from_config, run_suite_with, OutputFormat, RunConfig, SystemDocument};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CERTIFICATE_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_FAILURE: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "frechet-holo",
    version,
    about = "Certified finite-stage embeddings of Köthe spaces into holomorphic functions"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Build the normalized biorthogonal system described by a run config.
    Build {
        #[arg(long)]
        config: PathBuf,
        /// Overrides the family seed.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        stage: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Embed a vector (sparse JSON map) using a system written by `build`.
    Embed {
        /// Run config supplying weights and domain.
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        system: PathBuf,
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Evaluate an embedded image at z with a certified tail on |z|₁ ≤ k.
    Eval {
        #[arg(long)]
        image: PathBuf,
        /// `re,im`, a single rational, or `{"re": .., "im": ..}`.
        #[arg(long, allow_hyphen_values = true)]
        z: String,
        #[arg(long)]
        k: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the full certificate suite; non-zero exit if any certificate fails.
    Verify {
        #[arg(long)]
        config: PathBuf,
        /// Overrides the verification seed.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        stage: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Include wall-clock timings (makes the report non-reproducible).
        #[arg(long)]
        timings: bool,
    },
    /// Continuity-constant table for the configured weights.
    Table {
        #[arg(long)]
        config: PathBuf,
        /// Inclusive range `a..b` or comma list; defaults to the config stage.
        #[arg(long)]
        stages: Option<String>,
        /// Comma list of radii; defaults to the config k_list.
        #[arg(long)]
        k_list: Option<String>,
        #[arg(long)]
        stage: Option<usize>,
        #[arg(long, value_enum)]
        format: Option<Format>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

enum Failure {
    Usage(String),
    Run(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Run(e.to_string())
    }
}

/// Entry point used by the binary. Returns the process exit status.
pub fn cli_main<I, S>(argv: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run(argv, &mut stdout.lock(), &mut stderr.lock())
}

/// Like [`cli_main`] with explicit output streams.
pub fn run<I, S>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{text}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{text}");
                    EXIT_USAGE
                }
            };
        }
    };
    match dispatch(cli.command, out) {
        Ok(status) => status,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "usage error: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Run(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_FAILURE
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Run(format!("{}: {e}", path.display())))
}

fn load_config(path: &Path) -> Result<RunConfig, Failure> {
    RunConfig::from_json(&read(path)?).map_err(|e| Failure::Run(format!("{}: {e}", path.display())))
}

fn load_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, Failure> {
    serde_json::from_str(&read(path)?).map_err(|e| Failure::Run(format!("{}: {e}", path.display())))
}

fn emit(out: &mut dyn Write, path: Option<&Path>, text: &str) -> Result<(), Failure> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| Failure::Run(format!("{}: {e}", p.display()))),
        None => out
            .write_all(text.as_bytes())
            .map_err(|e| Failure::Run(format!("stdout: {e}"))),
    }
}

fn pretty<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

fn dispatch(cmd: Command, out: &mut dyn Write) -> Result<i32, Failure> {
    match cmd {
        Command::Build {
            config,
            seed,
            stage,
            out: path,
        } => {
            let mut cfg = load_config(&config)?;
            if let Some(s) = seed {
                cfg.family.seed = s;
            }
            if let Some(n) = stage {
                cfg.stage = n;
            }
            let doc = build_from_config(&cfg)?;
            emit(out, path.as_deref(), &pretty(&doc))?;
            Ok(EXIT_OK)
        }
        Command::Embed {
            config,
            system,
            input,
            out: path,
        } => {
            let cfg = load_config(&config)?;
            let doc: SystemDocument = load_json(&system)?;
            let (space, sys) = doc.resolve()?;
            let weights = cfg
                .weights
                .build(sys.stage())
                .map_err(|e| e.context("weights"))?;
            let x: SparseVector = load_json(&input)?;
            let img = embed(&x, sys, &weights, &space, cfg.domain.clone())?;
            emit(out, path.as_deref(), &pretty(&img))?;
            Ok(EXIT_OK)
        }
        Command::Eval {
            image,
            z,
            k,
            out: path,
        } => {
            let img: EmbeddedImage = load_json(&image)?;
            let z = parse_point(&z).map_err(|m| Failure::Usage(format!("--z: {m}")))?;
            let k = parse_rational(&k).map_err(|e| Failure::Usage(format!("--k: {e}")))?;
            let ev = eval_at(&img, &z, &k)?;
            let (re, im) = (to_decimal(&ev.value.re, 17), to_decimal(&ev.value.im, 17));
            let body = EvalOutput {
                value: ev.value,
                value_decimal: [re, im],
                tail: ev.tail.clone(),
                tail_decimal: to_decimal(&ev.tail, 17),
            };
            emit(out, path.as_deref(), &pretty(&body))?;
            Ok(EXIT_OK)
        }
        Command::Verify {
            config,
            seed,
            stage,
            out: path,
            timings,
        } => {
            let mut cfg = load_config(&config)?;
            if let Some(s) = seed {
                cfg.verification.seed = s;
            }
            if let Some(n) = stage {
                cfg.stage = n;
            }
            let report = run_suite_with(&cfg, timings)?;
            let path = path.or_else(|| cfg.output.path.clone().map(PathBuf::from));
            emit(out, path.as_deref(), &report.to_json())?;
            Ok(if report.passed {
                EXIT_OK
            } else {
                EXIT_CERTIFICATE_FAILED
            })
        }
        Command::Table {
            config,
            stages,
            k_list,
            stage,
            format,
            out: path,
        } => {
            let mut cfg = load_config(&config)?;
            if let Some(n) = stage {
                cfg.stage = n;
            }
            let stages = match stages {
                Some(s) => {
                    parse_stages(&s).map_err(|m| Failure::Usage(format!("--stages: {m}")))?
                }
                None => vec![cfg.stage],
            };
            let ks = match k_list {
                Some(s) => s
                    .split(',')
                    .map(parse_rational)
                    .collect::<Result<Vec<_>, _>>()
                    .map_err(|e| Failure::Usage(format!("--k-list: {e}")))?,
                None => cfg.verification.k_list.clone(),
            };
            let max_stage = stages.iter().copied().max().unwrap_or(1);
            let weights = cfg
                .weights
                .build(max_stage)
                .map_err(|e| e.context("weights"))?;
            let rows = continuity_table(&weights, &ks, &stages)?;
            let format = match format {
                Some(Format::Csv) => OutputFormat::Csv,
                Some(Format::Json) => OutputFormat::Json,
                None => cfg.output.format,
            };
            let text = match format {
                OutputFormat::Csv => table_to_csv(&rows),
                OutputFormat::Json => pretty(&rows),
            };
            emit(out, path.as_deref(), &text)?;
            Ok(EXIT_OK)
        }
    }
}

#[derive(Serialize)]
struct EvalOutput {
    value: ComplexRational,
    value_decimal: [String; 2],
    #[serde(with = "serde_rational")]
    tail: Rational,
    tail_decimal: String,
}

fn parse_point(s: &str) -> Result<ComplexRational, String> {
    let s = s.trim();
    if s.starts_with('{') {
        return serde_json::from_str(s).map_err(|e| e.to_string());
    }
    let parts: Vec<&str> = s.split(',').collect();
    let parse = |t: &str| parse_rational(t).map_err(|e| e.to_string());
    match parts.as_slice() {
        [re] => Ok(ComplexRational::real(parse(re)?)),
        [re, im] => Ok(ComplexRational::new(parse(re)?, parse(im)?)),
        _ => Err(format!("expected `re,im`, got {s:?}")),
    }
}

/// `a..b` (inclusive) or `a,b,c`.
fn parse_stages(s: &str) -> Result<Vec<usize>, String> {
    let num = |t: &str| {
        t.trim()
            .parse::<usize>()
            .map_err(|_| format!("not a stage: {t:?}"))
    };
    let stages = if let Some((a, b)) = s.split_once("..") {
        let (a, b) = (num(a)?, num(b.trim_start_matches('='))?);
        if a > b {
            return Err(format!("empty range {s:?}"));
        }
        (a..=b).collect()
    } else {
        s.split(',').map(num).collect::<Result<Vec<_>, _>>()?
    };
    if stages.contains(&0) {
        return Err("stages start at 1".into());
    }
    Ok(stages)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, rat};

    #[test]
    fn stage_lists() {
        assert_eq!(parse_stages("4..6").unwrap(), vec![4, 5, 6]);
        assert_eq!(parse_stages("4..=6").unwrap(), vec![4, 5, 6]);
        assert_eq!(parse_stages("3,9").unwrap(), vec![3, 9]);
        assert!(parse_stages("6..4").is_err());
        assert!(parse_stages("0..2").is_err());
        assert!(parse_stages("x").is_err());
    }

    #[test]
    fn points() {
        assert_eq!(
            parse_point("1/2").unwrap(),
            ComplexRational::real(rat(1, 2))
        );
        assert_eq!(
            parse_point("-1, 3/4").unwrap(),
            ComplexRational::new(int(-1), rat(3, 4))
        );
        assert_eq!(
            parse_point(r#"{"re":"0","im":"1"}"#).unwrap(),
            ComplexRational::i()
        );
        assert!(parse_point("1,2,3").is_err());
    }

    #[test]
    fn missing_flag_is_usage_error() {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let status = run(["frechet-holo", "verify"], &mut out, &mut err);
        assert_eq!(status, EXIT_USAGE);
        assert!(String::from_utf8(err).unwrap().contains("--config"));
    }
}
