mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use secant_core::expr::parse_ratfunc;
use secant_core::ledger::{builtin_config, LedgerConfig, BUILTIN_NAME};
use secant_core::scalar::{Rat, RatFuncD};

use commands::Section;

#[derive(Debug)]
pub enum CliError {
    /// Bad flags, malformed config or expression, d out of range: exit 2.
    Usage(String),
}

#[derive(Parser, Debug)]
#[command(name = "secant", version, about = "Exact invariants of secant varieties of rational normal curves")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Degree: a single integer, a range `lo..hi` (inclusive), or `symbolic`.
    #[arg(long, global = true, default_value = "symbolic", value_parser = parse_d_mode)]
    d: DMode,

    /// Output format; `csv` lists only exact scalar values.
    #[arg(long, global = true, value_enum, default_value_t = Output::Table)]
    output: Output,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Degree, volume, anticanonical coefficients, lct, alpha and S.
    Invariants,
    /// Log canonical threshold of a boundary from the resolution ledger.
    Lct {
        #[arg(long, default_value = "T")]
        boundary: String,
    },
    /// Equivariant K-polystability criterion with exact margins.
    ZhuangCheck {
        /// Override the lct floor in the curve-centered case, e.g. `1/2`.
        #[arg(long)]
        t: Option<String>,
    },
    /// Polynomial certificates for the polar cylinder.
    CylinderVerify,
    /// Evaluate an expression in the Chow ring, e.g. `H*H*H`.
    ChowEval {
        #[arg(long)]
        expr: String,
    },
    /// Closed-form invariants of the k-th secant variety.
    HigherSecant {
        #[arg(long)]
        k: u32,
    },
    /// Replay a blow-up chain (the built-in one by default).
    LedgerReplay {
        /// TOML chain file, or the built-in name `enp-secant-resolution`.
        #[arg(long)]
        config: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum DMode {
    Single(i64),
    Range(i64, i64),
    Symbolic,
}

impl std::fmt::Display for DMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            DMode::Single(n) => write!(f, "{n}"),
            DMode::Range(lo, hi) => write!(f, "{lo}..{hi}"),
            DMode::Symbolic => write!(f, "symbolic"),
        }
    }
}

fn parse_d_mode(s: &str) -> Result<DMode, String> {
    if s == "symbolic" {
        return Ok(DMode::Symbolic);
    }
    if let Some((lo, hi)) = s.split_once("..") {
        let lo: i64 = lo.trim().parse().map_err(|_| format!("bad range start {lo:?}"))?;
        let hi: i64 = hi.trim().parse().map_err(|_| format!("bad range end {hi:?}"))?;
        if lo > hi {
            return Err(format!("empty range {lo}..{hi}"));
        }
        return Ok(DMode::Range(lo, hi));
    }
    s.parse().map(DMode::Single).map_err(|_| format!("expected an integer, lo..hi or symbolic, got {s:?}"))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Output {
    Table,
    Json,
    Csv,
}

fn check_domain(mode: &DMode, min: i64, why: &str) -> Result<(), CliError> {
    let lo = match mode {
        DMode::Single(n) => *n,
        DMode::Range(lo, _) => *lo,
        DMode::Symbolic => return Ok(()),
    };
    if lo < min {
        return Err(CliError::Usage(format!("d = {lo} is out of range: {why}")));
    }
    Ok(())
}

/// Run `f` at every requested `d`, concretely or symbolically.
fn over_d(
    mode: &DMode,
    f_rat: impl Fn(&Rat) -> Result<Section, CliError> + Sync,
    f_sym: impl Fn(&RatFuncD) -> Result<Section, CliError>,
) -> Result<Vec<Section>, CliError> {
    match *mode {
        DMode::Single(n) => Ok(vec![f_rat(&Rat::from(n))?]),
        DMode::Range(lo, hi) => (lo..=hi).into_par_iter().map(|n| f_rat(&Rat::from(n))).collect(),
        DMode::Symbolic => Ok(vec![f_sym(&RatFuncD::d())?]),
    }
}

macro_rules! generic {
    ($mode:expr, |$d:ident| $body:expr) => {
        over_d($mode, |$d: &Rat| $body, |$d: &RatFuncD| $body)
    };
}

fn run(cli: &Cli) -> Result<(String, Vec<Section>), CliError> {
    const SECANT: &str = "the secant-variety formulas need d >= 4";
    let mode = &cli.d;
    let sections = match &cli.command {
        Command::Invariants => {
            check_domain(mode, 4, SECANT)?;
            generic!(mode, |d| commands::invariants(d))?
        }
        Command::Lct { boundary } => {
            check_domain(mode, 4, SECANT)?;
            generic!(mode, |d| commands::lct(d, boundary))?
        }
        Command::ZhuangCheck { t } => {
            check_domain(mode, 4, SECANT)?;
            let t = t
                .as_deref()
                .map(parse_ratfunc)
                .transpose()
                .map_err(|e| CliError::Usage(format!("--t: {e}")))?;
            generic!(mode, |d| commands::zhuang(d, t.as_ref()))?
        }
        Command::CylinderVerify => {
            check_domain(mode, 4, SECANT)?;
            generic!(mode, |d| commands::cylinder(d))?
        }
        Command::ChowEval { expr } => {
            check_domain(mode, 4, SECANT)?;
            generic!(mode, |d| commands::chow_eval(d, expr))?
        }
        Command::HigherSecant { k } => {
            if *k == 0 {
                return Err(CliError::Usage("--k must be at least 1".into()));
            }
            let min = 2 * i64::from(*k) + 1;
            check_domain(mode, min, &format!("the k = {k} formulas need d >= 2k+1 = {min}"))?;
            generic!(mode, |d| commands::higher_secant(*k, d))?
        }
        Command::LedgerReplay { config } => {
            let cfg = match config {
                Some(path) if path.as_os_str() == BUILTIN_NAME && !path.exists() => builtin_config(),
                Some(path) => {
                    let src = std::fs::read_to_string(path)
                        .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
                    LedgerConfig::from_toml_str(&src).map_err(|e| CliError::Usage(e.to_string()))?
                }
                None => builtin_config(),
            };
            let min = cfg.domain_min.to_i64().unwrap_or(i64::MAX);
            check_domain(mode, min, &format!("config {} needs d >= {}", cfg.name, cfg.domain_min))?;
            generic!(mode, |d| commands::ledger_replay(&cfg, d))?
        }
    };
    Ok((command_name(&cli.command).to_string(), sections))
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Invariants => "invariants",
        Command::Lct { .. } => "lct",
        Command::ZhuangCheck { .. } => "zhuang-check",
        Command::CylinderVerify => "cylinder-verify",
        Command::ChowEval { .. } => "chow-eval",
        Command::HigherSecant { .. } => "higher-secant",
        Command::LedgerReplay { .. } => "ledger-replay",
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok((name, sections)) => {
            let text = match cli.output {
                Output::Table => output::table(&sections),
                Output::Json => output::json(&name, &cli.d.to_string(), &sections),
                Output::Csv => output::csv(&sections),
            };
            print!("{text}");
            if sections.iter().all(|s| s.passed) {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
