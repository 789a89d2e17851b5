//! `mbfun`: exact Bernstein-Sato polynomials of meromorphic functions.
//!
//! Exit codes: 0 on success, 1 when the computation fails (capability
//! bounds, oracle disagreement), 2 on usage errors. Nothing is written to
//! standard output on failure.

mod commands;
mod report;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use mbfun::mero::OracleBounds;
use mbfun::{EngineConfig, Rational};

use commands::{Ctx, Failure, NcWhat};

#[derive(Parser)]
#[command(name = "mbfun", version, about = "Exact b-functions of meromorphic functions F/G")]
struct Cli {
    /// Print the report as JSON.
    #[arg(long, global = true)]
    json: bool,
    /// Add wall-clock time to the report (breaks byte-identical reruns).
    #[arg(long, global = true)]
    timing: bool,
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Subcommand)]
enum Command {
    /// b-functions.
    #[command(subcommand)]
    Bf(Bf),
    /// Root bounds from normal-crossing chart data.
    #[command(subcommand)]
    Nc(Nc),
    /// Jumping numbers of multiplier ideals.
    #[command(subcommand)]
    Jump(Jump),
    /// Consistency checks between engine output and closed forms.
    #[command(subcommand)]
    Check(Check),
}

#[derive(Args)]
struct Pair {
    /// Numerator F.
    f: String,
    /// Denominator G.
    g: String,
}

#[derive(Subcommand)]
enum Bf {
    /// Classical Bernstein-Sato polynomial of F.
    Classic {
        f: String,
        /// Oracle bounds `N,DEG`.
        #[arg(long, value_parser = parse_bounds)]
        certify: Option<OracleBounds>,
    },
    /// Meromorphic b-function of order m.
    Mero {
        #[command(flatten)]
        pair: Pair,
        #[arg(long, default_value_t = 0)]
        m: u32,
        /// Oracle bounds `N,DEG`.
        #[arg(long, value_parser = parse_bounds)]
        certify: Option<OracleBounds>,
    },
    /// b-function of the single-shift equation.
    Simple {
        #[command(flatten)]
        pair: Pair,
        #[arg(long, default_value_t = 0)]
        m: u32,
        /// Oracle bounds `N,DEG` (N is forced to 1).
        #[arg(long, value_parser = parse_bounds)]
        certify: Option<OracleBounds>,
    },
    /// Reduced b-function of a quasi-homogeneous F/G.
    Reduced {
        #[command(flatten)]
        pair: Pair,
        /// Euler weights, comma separated.
        #[arg(long, value_delimiter = ',', required = true)]
        weights: Vec<i64>,
        /// Weighted degree of F (default: computed).
        #[arg(long)]
        d1: Option<i64>,
        /// Weighted degree of G (default: computed).
        #[arg(long)]
        d2: Option<i64>,
    },
    /// Multiple of the meromorphic b-function from the two-variable ideal.
    SabbahLine {
        #[command(flatten)]
        pair: Pair,
        #[arg(long, default_value_t = 0)]
        m: u32,
    },
}

#[derive(Args)]
struct ChartArgs {
    /// Chart file `{"charts": [...]}`.
    #[arg(long)]
    charts: PathBuf,
    #[arg(long, default_value_t = 0)]
    m: u32,
}

#[derive(Subcommand)]
enum Nc {
    /// Root set of each chart.
    Roots(ChartArgs),
    /// Residues of the bound set.
    Bound(ChartArgs),
    /// Eigenvalue classes of the residues.
    Eigen(ChartArgs),
}

#[derive(Subcommand)]
enum Jump {
    /// Jumping numbers on a single chart.
    Nc {
        #[arg(long)]
        charts: PathBuf,
        /// Window end (default: dimension plus the largest a_i - b_i).
        #[arg(long)]
        upper: Option<Rational>,
    },
}

#[derive(Subcommand)]
enum Check {
    /// Root inclusion between orders m-small <= m-big.
    Lemma4 {
        #[command(flatten)]
        pair: Pair,
        #[arg(long)]
        m_small: u32,
        #[arg(long)]
        m_big: u32,
        /// Largest integer shift allowed.
        #[arg(long, default_value_t = 5)]
        cap: u32,
    },
    /// Roots of the meromorphic b-function lie in the chart bound set.
    Thm41 {
        #[command(flatten)]
        pair: Pair,
        #[arg(long, default_value_t = 0)]
        m: u32,
        #[arg(long)]
        charts: PathBuf,
    },
    /// Jumping numbers against the roots of the order-0 b-function.
    Corjump {
        #[command(flatten)]
        pair: Pair,
        #[arg(long)]
        charts: PathBuf,
        #[arg(long)]
        upper: Option<Rational>,
    },
}

fn parse_bounds(s: &str) -> Result<OracleBounds, String> {
    let (n, d) = s.split_once(',').ok_or_else(|| format!("expected `N,DEG`, got `{s}`"))?;
    let n_max = n.trim().parse().map_err(|e| format!("N: {e}"))?;
    let deg = d.trim().parse().map_err(|e| format!("DEG: {e}"))?;
    if n_max == 0 {
        return Err("N must be at least 1".into());
    }
    Ok(OracleBounds { n_max, deg })
}

fn run(cli: &Cli, ctx: &Ctx) -> commands::Outcome {
    match &cli.cmd {
        Command::Bf(Bf::Classic { f, certify }) => commands::bf_classic(ctx, f, *certify),
        Command::Bf(Bf::Mero { pair, m, certify }) => commands::bf_mero(ctx, &pair.f, &pair.g, *m, *certify),
        Command::Bf(Bf::Simple { pair, m, certify }) => commands::bf_simple(ctx, &pair.f, &pair.g, *m, *certify),
        Command::Bf(Bf::Reduced { pair, weights, d1, d2 }) => {
            commands::bf_reduced(ctx, &pair.f, &pair.g, weights, *d1, *d2)
        }
        Command::Bf(Bf::SabbahLine { pair, m }) => commands::bf_sabbah_line(ctx, &pair.f, &pair.g, *m),
        Command::Nc(Nc::Roots(a)) => commands::nc(ctx, NcWhat::Roots, &a.charts, a.m),
        Command::Nc(Nc::Bound(a)) => commands::nc(ctx, NcWhat::Bound, &a.charts, a.m),
        Command::Nc(Nc::Eigen(a)) => commands::nc(ctx, NcWhat::Eigen, &a.charts, a.m),
        Command::Jump(Jump::Nc { charts, upper }) => commands::jump_nc(ctx, charts, upper.clone()),
        Command::Check(Check::Lemma4 { pair, m_small, m_big, cap }) => {
            commands::check_lemma4_cmd(ctx, &pair.f, &pair.g, *m_small, *m_big, *cap)
        }
        Command::Check(Check::Thm41 { pair, m, charts }) => commands::check_thm41_cmd(ctx, &pair.f, &pair.g, *m, charts),
        Command::Check(Check::Corjump { pair, charts, upper }) => {
            commands::check_corjump_cmd(ctx, &pair.f, &pair.g, charts, upper.clone())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cfg = match EngineConfig::from_env() {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let argv: Vec<String> = std::env::args().skip(1).filter(|a| a != "--timing").collect();
    let ctx = Ctx { argv: &argv, cfg };
    let start = Instant::now();
    match run(&cli, &ctx) {
        Ok(mut report) => {
            if cli.timing {
                report.timing_ms = Some(start.elapsed().as_millis() as u64);
            }
            let text = if cli.json { report.to_json() + "\n" } else { report.to_table() };
            // a closed pipe downstream is not our failure
            let _ = std::io::stdout().lock().write_all(text.as_bytes());
            ExitCode::SUCCESS
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Math(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
