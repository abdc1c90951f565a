//! `rwslab` — command-line laboratory for random weighted shift experiments.
//!
//! Every subcommand prints a JSON run manifest whose `results` block is
//! byte-identical for identical arguments (timestamps live outside it), and
//! all randomness flows from one `--seed` through labeled per-command
//! streams, so any almost-sure-statement experiment here replays exactly.

mod commands;
mod jsonfmt;

use std::collections::HashMap;
use std::path::PathBuf;

use clap::{Parser, Subcommand};

use rwslab_core::Error;

#[derive(Parser)]
#[command(name = "rwslab", version, about = "Numerical laboratory for random weighted shifts")]
pub struct Cli {
    #[command(subcommand)]
    pub cmd: Cmd,

    /// Master seed; all per-trial streams derive from it by labeled hashing.
    #[arg(long, global = true)]
    pub seed: Option<u64>,

    /// Cap on worker threads (default: RWSLAB_THREADS or all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    /// Plain-text config with `key = value` lines; flags override it.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    /// Output path: the run manifest for JSON commands, the CSV for grid
    /// commands (whose manifest still goes to stdout).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Subcommand)]
pub enum Cmd {
    /// Closed-form law statistics (radii, essential range, sigma^2).
    Stats {
        #[arg(long)]
        law: Option<String>,
    },
    /// The four-radii chain r <= r0 <= r_p <= R at chosen exponents.
    Radii {
        #[arg(long)]
        law: Option<String>,
        /// Comma-separated moment exponents.
        #[arg(long)]
        p: Option<String>,
    },
    /// Draw a reproducible i.i.d. weight sample.
    Sample {
        #[arg(long)]
        law: Option<String>,
        #[arg(long)]
        length: Option<usize>,
        /// Stream index (independent sequences per index).
        #[arg(long)]
        stream: Option<u64>,
    },
    /// Smallest singular values of the shifted truncation over a grid.
    Pseudospectrum {
        #[arg(long)]
        law: Option<String>,
        #[arg(long)]
        n: Option<usize>,
        /// Grid side length (side x side points).
        #[arg(long)]
        grid: Option<usize>,
        #[arg(long)]
        stream: Option<u64>,
    },
    /// Adjoint point-spectrum series test and kernel vector at lambda.
    Pointspec {
        #[arg(long)]
        law: Option<String>,
        /// Complex point "re,im".
        #[arg(long)]
        lambda: Option<String>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        eta: Option<f64>,
        #[arg(long)]
        stream: Option<u64>,
    },
    /// Numerical range support points and radius of a truncation.
    Numrange {
        #[arg(long)]
        law: Option<String>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        angles: Option<usize>,
        #[arg(long)]
        stream: Option<u64>,
    },
    /// Hardy-space membership classification with optional Monte Carlo.
    Hardy {
        #[arg(long)]
        law: Option<String>,
        /// Coefficient sequence grammar.
        #[arg(long)]
        seq: Option<String>,
        /// Size-class exponent p.
        #[arg(long)]
        p: Option<f64>,
        /// Run the norm Monte Carlo with this many trials.
        #[arg(long)]
        mc_trials: Option<u64>,
        #[arg(long)]
        mc_n: Option<usize>,
        /// Run the expectation sandwich at this exponent.
        #[arg(long)]
        sandwich_p: Option<f64>,
        #[arg(long)]
        sandwich_trials: Option<u64>,
        #[arg(long)]
        sandwich_n: Option<usize>,
    },
    /// Running extremes of the LIL coefficient statistic.
    Lil {
        #[arg(long)]
        law: Option<String>,
        #[arg(long)]
        seq: Option<String>,
        #[arg(long)]
        nmin: Option<u64>,
        #[arg(long)]
        nmax: Option<u64>,
    },
    /// Domination verdicts and numeric von Neumann checks.
    Vn {
        #[arg(long)]
        law: Option<String>,
        /// verdict | normal | numeric | disk-algebra | hereditary | universal
        #[arg(long)]
        op: Option<String>,
        /// Deterministic shift grammar or fixture name.
        #[arg(long)]
        shift: Option<String>,
        /// a-under-t | t-under-a
        #[arg(long)]
        direction: Option<String>,
        #[arg(long)]
        smax: Option<usize>,
        #[arg(long)]
        eps: Option<f64>,
        /// Normal spectrum moduli, e.g. "circle:1.5;band:0,1".
        #[arg(long)]
        normal: Option<String>,
        /// Free polynomial (repeatable) for numeric / disk-algebra /
        /// hereditary ops.
        #[arg(long)]
        poly: Vec<String>,
        /// Number of random polynomials for the numeric check.
        #[arg(long)]
        random_polys: Option<usize>,
        #[arg(long)]
        max_deg: Option<usize>,
        #[arg(long)]
        m: Option<usize>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        tol: Option<f64>,
        /// Universal-shift parameters "maxlen=2,step=0.25".
        #[arg(long)]
        universal: Option<String>,
        #[arg(long)]
        stream: Option<u64>,
    },
    /// Exact or empirical n-spectra.
    Nspectrum {
        #[arg(long)]
        law: Option<String>,
        #[arg(long)]
        shift: Option<String>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        eps: Option<f64>,
        #[arg(long)]
        length: Option<usize>,
        /// Targets: "1,2;2,1" or "product:1|2" (all n-tuples over atoms).
        #[arg(long)]
        targets: Option<String>,
        #[arg(long)]
        stream: Option<u64>,
    },
    /// Linear-dynamics verdicts for the backward shift.
    Dynamics {
        #[arg(long)]
        law: Option<String>,
    },
    /// Orbit statistics behind the dynamics criteria.
    Orbit {
        #[arg(long)]
        law: Option<String>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        stream: Option<u64>,
    },
    /// Aluthge-iteration convergence report.
    Aluthge {
        #[arg(long)]
        law: Option<String>,
        #[arg(long)]
        length: Option<usize>,
        /// Comma-separated depths, e.g. "16,1024".
        #[arg(long)]
        depths: Option<String>,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        stream: Option<u64>,
        /// Optional CSV path `n,medianDev,supWeight`.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Recurrence / window-distance / similarity / structure diagnostics.
    Classify {
        #[arg(long)]
        law: Option<String>,
        /// recurrence | window-distance | similarity | structure
        #[arg(long)]
        op: Option<String>,
        /// Tuple syntax "0,1,2".
        #[arg(long)]
        pattern: Option<String>,
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long)]
        length: Option<usize>,
        #[arg(long)]
        stream: Option<u64>,
        /// Second stream for the similarity walk.
        #[arg(long)]
        stream_b: Option<u64>,
        #[arg(long)]
        prefix_len: Option<usize>,
        #[arg(long)]
        trials: Option<u64>,
    },
    /// Monte Carlo check of the m-convexity moment identity.
    Mconvex {
        #[arg(long)]
        law: Option<String>,
        #[arg(long)]
        m: Option<usize>,
        #[arg(long)]
        trials: Option<u64>,
    },
    /// Moment-sequence LIL running extremes.
    Momentlil {
        #[arg(long)]
        law: Option<String>,
        /// Basis index (1-based).
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        nmax: Option<usize>,
        /// Optional coefficient vector "1,0.5,0.25" (exploratory).
        #[arg(long)]
        coeffs: Option<String>,
        #[arg(long)]
        stream: Option<u64>,
    },
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::InvalidArgument(_) | Error::Parse(_) => 2,
        Error::NonConvergence(_) => 3,
        Error::Hypothesis(_) => 4,
    }
}

/// Read a `key = value` config file (# starts a comment).
pub fn read_config(path: &PathBuf) -> Result<HashMap<String, String>, Error> {
    let body = std::fs::read_to_string(path)
        .map_err(|e| Error::invalid(format!("cannot read config '{}': {e}", path.display())))?;
    let mut map = HashMap::new();
    for line in body.lines() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| Error::parse(format!("config line is not key = value: '{line}'")))?;
        map.insert(k.trim().to_string(), v.trim().to_string());
    }
    Ok(map)
}

fn main() {
    let cli = Cli::parse();
    let config = match &cli.config {
        Some(path) => match read_config(path) {
            Ok(c) => c,
            Err(e) => {
                eprintln!("rwslab: {e}");
                std::process::exit(exit_code(&e));
            }
        },
        None => HashMap::new(),
    };
    let threads = cli
        .threads
        .or_else(|| config.get("threads").and_then(|t| t.parse().ok()))
        .or_else(|| std::env::var("RWSLAB_THREADS").ok().and_then(|t| t.parse().ok()));
    if let Some(t) = threads {
        // Ignore the error if a pool already exists (tests call run() twice).
        let _ = rayon::ThreadPoolBuilder::new().num_threads(t.max(1)).build_global();
    }
    match commands::run(cli, config) {
        Ok(()) => {}
        Err(e) => {
            eprintln!("rwslab: {e}");
            std::process::exit(exit_code(&e));
        }
    }
}
