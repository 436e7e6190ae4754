//! `gapscope`: batch driver for the gapscope-core engines.
//!
//! Exit codes: 0 success, 1 usage or invalid parameters, 2 capacity, 3 verification failure.

mod commands;
mod params;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use gapscope_core::{Error, Result};

use commands::Outcome;
use params::Params;

#[derive(Parser, Debug)]
#[command(name = "gapscope", version, about = "Prime gap, Dirichlet polynomial and exponent tools")]
struct Cli {
    /// Output directory for reports and the manifest.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads; GAPSCOPE_THREADS takes precedence.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// key=value config file; explicit flags override it.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Maximal gap table and gap moment sums.
    Gaps {
        /// Comma-separated limits, e.g. 1e3,1e6.
        #[arg(long)]
        limits: Option<String>,
        /// Lift the default sieve ceiling of 1e10.
        #[arg(long)]
        allow_large: bool,
    },
    /// Check the decomposition of Λ(n) over (x, 3x].
    Identity {
        #[arg(long)]
        x: Option<String>,
        #[arg(long)]
        k: Option<String>,
    },
    /// Classify large values and compare counts with the mean-value bounds.
    Largevalues {
        /// Factors such as unit:4,log:3,mobius:5@20,singleton.
        #[arg(long)]
        factors: Option<String>,
        #[arg(long)]
        c: Option<String>,
        /// Comma-separated heights T.
        #[arg(long)]
        t: Option<String>,
        #[arg(long)]
        slack: Option<String>,
    },
    /// Truncated Perron estimate of a short window sum.
    Perron {
        #[arg(long)]
        y: Option<String>,
        #[arg(long)]
        tau: Option<String>,
        #[arg(long)]
        factors: Option<String>,
        /// Truncation height, or `auto` for τ (log y)³.
        #[arg(long)]
        t0: Option<String>,
        #[arg(long)]
        doublings: Option<String>,
    },
    /// Verify a claim ledger; exits 3 if any claim fails.
    Verify {
        /// Ledger file, or `builtin`.
        #[arg(long)]
        ledger: Option<String>,
    },
    /// Grid search for the critical exponent.
    OptimizeNu {
        /// Grid step, at most 1/64.
        #[arg(long)]
        res: Option<String>,
        /// Also write the full grid as CSV.
        #[arg(long)]
        grid: bool,
    },
    /// Bundle the JSON outputs of the output directory into report.json.
    Report,
}

impl Cmd {
    fn name(&self) -> &'static str {
        match self {
            Cmd::Gaps { .. } => "gaps",
            Cmd::Identity { .. } => "identity",
            Cmd::Largevalues { .. } => "largevalues",
            Cmd::Perron { .. } => "perron",
            Cmd::Verify { .. } => "verify",
            Cmd::OptimizeNu { .. } => "optimize-nu",
            Cmd::Report => "report",
        }
    }

    fn apply(&self, p: &mut Params) {
        match self {
            Cmd::Gaps { limits, allow_large } => {
                p.set("limits", limits.as_ref());
                p.set("allow-large", allow_large.then_some("true"));
            }
            Cmd::Identity { x, k } => {
                p.set("x", x.as_ref());
                p.set("k", k.as_ref());
            }
            Cmd::Largevalues { factors, c, t, slack } => {
                p.set("factors", factors.as_ref());
                p.set("c", c.as_ref());
                p.set("t", t.as_ref());
                p.set("slack", slack.as_ref());
            }
            Cmd::Perron { y, tau, factors, t0, doublings } => {
                p.set("y", y.as_ref());
                p.set("tau", tau.as_ref());
                p.set("factors", factors.as_ref());
                p.set("t0", t0.as_ref());
                p.set("doublings", doublings.as_ref());
            }
            Cmd::Verify { ledger } => p.set("ledger", ledger.as_ref()),
            Cmd::OptimizeNu { res, grid } => {
                p.set("res", res.as_ref());
                p.set("grid", grid.then_some("true"));
            }
            Cmd::Report => {}
        }
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Capacity(_) => 2,
        Error::IllPosed { .. } => 3,
        _ => 1,
    }
}

fn resolve_threads(p: &Params) -> Result<usize> {
    if let Ok(v) = std::env::var("GAPSCOPE_THREADS") {
        return v
            .trim()
            .parse::<usize>()
            .ok()
            .filter(|&n| n > 0)
            .ok_or_else(|| Error::InvalidArgument(format!("GAPSCOPE_THREADS={v:?} is not a positive integer")));
    }
    let n = p.u64("threads")? as usize;
    if n == 0 {
        return Err(Error::InvalidArgument("threads must be positive".into()));
    }
    Ok(n)
}

fn run(cli: Cli) -> Result<Outcome> {
    let name = cli.cmd.name();
    let mut p = Params::new(name, commands::defaults(name));
    let default_threads = std::thread::available_parallelism().map_or(1, |n| n.get());
    p.set("out", Some("gapscope-out"));
    p.set("threads", Some(default_threads));
    if let Some(path) = &cli.config {
        p.merge_file(path)?;
    }
    p.set("out", cli.out.as_ref().map(|o| o.display().to_string()));
    p.set("threads", cli.threads);
    cli.cmd.apply(&mut p);
    let threads = resolve_threads(&p)?;
    p.set("threads", Some(threads));
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| Error::InvalidArgument(format!("thread pool: {e}")))?;

    let out = PathBuf::from(p.get("out")?);
    let outcome = match &cli.cmd {
        Cmd::Gaps { .. } => commands::cmd_gaps(&p),
        Cmd::Identity { .. } => commands::cmd_identity(&p),
        Cmd::Largevalues { .. } => commands::cmd_largevalues(&p),
        Cmd::Perron { .. } => commands::cmd_perron(&p),
        Cmd::Verify { .. } => commands::cmd_verify(&p),
        Cmd::OptimizeNu { .. } => commands::cmd_optimize_nu(&p),
        Cmd::Report => commands::cmd_report(&out),
    }?;

    let io = |e: std::io::Error| Error::InvalidArgument(format!("cannot write to {}: {e}", out.display()));
    std::fs::create_dir_all(&out).map_err(io)?;
    let mut names = Vec::new();
    for (file, body) in &outcome.files {
        std::fs::write(out.join(file), body).map_err(io)?;
        names.push(file.clone());
    }
    std::fs::write(out.join(format!("{name}.manifest")), p.manifest(&names)).map_err(io)?;
    Ok(outcome)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(o) => {
            print!("{}", o.stdout);
            ExitCode::from(if o.failed { 3 } else { 0 })
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
