//! `ballgap`: build inscribed polytopes of the unit ball, audit the volume
//! bounds and tabulate sweeps as CSV or JSON.

mod commands;
mod output;
mod range;

use std::path::PathBuf;
use std::process::ExitCode;

use ballgap::EffectiveCount;
use clap::{Args, Parser, Subcommand, ValueEnum};

pub const MIN_SAMPLES: u64 = 10_000;
pub const MAX_SAMPLES: u64 = 100_000_000;
pub const MAX_DIM: usize = 8;

#[derive(Parser, Debug)]
#[command(name = "ballgap", version, about = "Inscribed polytopes of the Euclidean ball and their volume gaps")]
#[command(after_help = "Set BALLGAP_THREADS to cap the number of worker threads.\n\
Exit status: 0 success, 1 a checked inequality failed, 2 usage or I/O error.")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Ball volumes, sphere surfaces and the Stirling-type volume bound.
    #[command(after_help = "CSV columns: d,ball_volume,sphere_surface,volume_upper_bound,bound_holds")]
    Volumes {
        /// Dimension or inclusive range such as 2..5.
        #[arg(long = "dim", default_value = "2..8")]
        dim: String,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Gaussian orthant moments: closed forms against Monte Carlo.
    #[command(after_help = "CSV columns: d,moment,closed_form,mc_value,stderr,z_score\n\
For k = 2 the squares and cross moments are added, plus an identity_residual row\n\
holding the relative residual of power = square + (d² − d)·cross.")]
    Moments {
        #[arg(long = "dim")]
        dim: usize,
        /// Power of the coordinate sum.
        #[arg(long, default_value_t = 0)]
        k: u32,
        #[command(flatten)]
        mc: McArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Build a net polytope and check its Hausdorff distance bound.
    #[command(after_help = "CSV columns: d,n_actual,facets,theta,covering_radius,hausdorff,hausdorff_bound,half_theta_sq,pass\n\
--out receives the polytope JSON; the summary row goes to stdout.")]
    Net {
        #[command(flatten)]
        build: BuildArgs,
        /// Separation target instead of a vertex count.
        #[arg(long, conflicts_with = "n")]
        theta: Option<f64>,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        /// Where to write the polytope JSON.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Audit the lower-bound chain and the net upper bounds on a polytope.
    #[command(after_help = "CSV columns: report,name,lhs,rhs,relation,margin,tolerance,holds,applicable,pass\n\
An audit below the lower-bound regime still runs; its failures are reported as warnings.")]
    Audit {
        /// Polytope JSON to audit; otherwise one is built from --dim and --n.
        #[arg(long)]
        polytope: Option<PathBuf>,
        #[command(flatten)]
        build: BuildArgs,
        /// Rounds of local volume improvement before auditing; the audited
        /// polytope is then the hull of the improved and the original vertices.
        #[arg(long, default_value_t = 0)]
        improve: usize,
        #[arg(long = "effective-n", default_value = "2n", value_parser = parse_effective)]
        effective_n: EffectiveCount,
        #[command(flatten)]
        mc: McArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Normalized volume gap over a list of vertex counts.
    #[command(after_help = "CSV columns: d,n,vertices,facets,facets_per_vertex,gap,stderr,c_hat,lower,upper,in_sandwich,monotone,pass")]
    Sweep {
        #[arg(long = "dim")]
        dim: usize,
        /// Comma-separated vertex counts, e.g. 700,1000,2000.
        #[arg(long = "n-list", value_delimiter = ',', required = true)]
        n_list: Vec<usize>,
        #[arg(long = "pool-size")]
        pool_size: Option<usize>,
        #[command(flatten)]
        mc: McArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
}

#[derive(Args, Debug, Clone)]
pub struct BuildArgs {
    #[arg(long = "dim")]
    pub dim: Option<usize>,
    /// Vertex count of the net, also used in the audit thresholds.
    #[arg(long)]
    pub n: Option<usize>,
    /// Candidate pool size for the net (default 200·n).
    #[arg(long = "pool-size")]
    pub pool_size: Option<usize>,
}

#[derive(Args, Debug, Clone)]
pub struct McArgs {
    /// Monte Carlo budget, between 1e4 and 1e8.
    #[arg(long, default_value_t = 1_000_000, value_parser = parse_samples)]
    pub samples: u64,
    /// Seed for the Monte Carlo streams and for any net that gets built.
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
}

#[derive(Args, Debug, Clone)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Output file; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

fn parse_samples(s: &str) -> Result<u64, String> {
    let v: f64 = s.parse().map_err(|_| format!("not a number: {s}"))?;
    if v.fract() != 0.0 || !(MIN_SAMPLES as f64..=MAX_SAMPLES as f64).contains(&v) {
        return Err(format!("samples must be an integer in [{MIN_SAMPLES}, {MAX_SAMPLES}]"));
    }
    Ok(v as u64)
}

fn parse_effective(s: &str) -> Result<EffectiveCount, String> {
    s.parse()
}

/// What a command concluded, mapped to the exit status.
#[derive(Debug, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
}

fn init_threads() -> anyhow::Result<()> {
    if let Ok(v) = std::env::var("BALLGAP_THREADS") {
        let n: usize = v.parse().map_err(|_| anyhow::anyhow!("BALLGAP_THREADS must be a positive integer"))?;
        anyhow::ensure!(n > 0, "BALLGAP_THREADS must be a positive integer");
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = init_threads().and_then(|()| commands::run(cli.command));
    match result {
        Ok(Verdict::Pass) => ExitCode::SUCCESS,
        Ok(Verdict::Fail) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
