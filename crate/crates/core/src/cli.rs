//! Command-line front end.
//!
//! Exit codes: 0 success, 1 runtime or I/O failure, 2 unknown experiment or
//! malformed command line, 3 unreadable or invalid config, 4 invalid
//! override. Failures print a single `error: <kind>: <message>` line on
//! stderr.

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::config::{parse_config, parse_overrides, ConfigError, Experiment, SweepConfig};
use crate::harness::{run_sweep, summarize, summary_csv, trace_csv, trace_summary_csv, trials_csv};

pub const EXIT_RUNTIME: i32 = 1;
pub const EXIT_UNKNOWN_EXPERIMENT: i32 = 2;
pub const EXIT_CONFIG: i32 = 3;
pub const EXIT_OVERRIDE: i32 = 4;

/// Output directory fallback when `--out` is absent.
pub const OUT_ENV: &str = "IDLE_SPACE_OUT";

#[derive(Debug, Parser)]
#[command(name = "idle-space", about = "Null-space aligned secondary beamforming simulator", disable_version_flag = true)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run the sweep described by a config file.
    Run {
        config: PathBuf,
        #[command(flatten)]
        opts: RunOptions,
    },
    /// Run one of the named experiments with default settings.
    Experiment {
        name: String,
        #[command(flatten)]
        opts: RunOptions,
    },
    /// Parse and validate a config file, then print it fully resolved.
    ValidateConfig {
        config: PathBuf,
        #[arg(long = "set", value_name = "KEY=VALUE")]
        set: Vec<String>,
    },
    /// Print the version.
    Version,
}

#[derive(Debug, Args)]
struct RunOptions {
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    trials: Option<usize>,
    /// Worker threads (default: available parallelism).
    #[arg(long)]
    workers: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Override a config key; repeatable.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
    /// guarded | literal
    #[arg(long = "qos-mode")]
    qos_mode: Option<String>,
    /// cross | literal
    #[arg(long = "sinr-formula")]
    sinr_formula: Option<String>,
}

impl RunOptions {
    fn overrides(&self) -> Vec<String> {
        let mut out = self.set.clone();
        if let Some(s) = self.seed {
            out.push(format!("master_seed={s}"));
        }
        if let Some(t) = self.trials {
            out.push(format!("trials={t}"));
        }
        if let Some(q) = &self.qos_mode {
            out.push(format!("qos_mode={q}"));
        }
        if let Some(f) = &self.sinr_formula {
            out.push(format!("sinr_formula={f}"));
        }
        out
    }
}

#[derive(Debug)]
struct Failure {
    code: i32,
    kind: &'static str,
    message: String,
}

impl Failure {
    fn new(code: i32, kind: &'static str, message: impl Into<String>) -> Self {
        Self {
            code,
            kind,
            message: message.into(),
        }
    }
}

fn load_config(path: &Path) -> Result<SweepConfig, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::new(EXIT_CONFIG, "config", format!("{}: {e}", path.display())))?;
    parse_config(&text).map_err(|e| Failure::new(EXIT_CONFIG, "config", format!("{}: {e}", path.display())))
}

fn apply_overrides(cfg: &mut SweepConfig, items: &[String]) -> Result<(), Failure> {
    let to_failure = |e: ConfigError| Failure::new(EXIT_OVERRIDE, "override", e.to_string());
    for (k, v) in parse_overrides(items).map_err(to_failure)? {
        cfg.set(&k, &v).map_err(to_failure)?;
    }
    Ok(())
}

fn output_dir(opt: Option<&PathBuf>) -> PathBuf {
    opt.cloned()
        .or_else(|| std::env::var_os(OUT_ENV).map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("."))
}

fn default_workers() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

fn write(path: &Path, body: &str) -> Result<(), Failure> {
    fs::write(path, body).map_err(|e| Failure::new(EXIT_RUNTIME, "io", format!("{}: {e}", path.display())))
}

fn execute(mut cfg: SweepConfig, opts: &RunOptions) -> Result<(), Failure> {
    apply_overrides(&mut cfg, &opts.overrides())?;
    cfg.validate()
        .map_err(|e| Failure::new(EXIT_CONFIG, "config", e.to_string()))?;
    let workers = opts.workers.unwrap_or_else(default_workers);
    let result = run_sweep(&cfg, workers).map_err(|e| Failure::new(EXIT_RUNTIME, "runtime", e.to_string()))?;
    let summary = summarize(&result.rows).map_err(|e| Failure::new(EXIT_RUNTIME, "runtime", e.to_string()))?;

    let dir = output_dir(opts.out.as_ref());
    fs::create_dir_all(&dir)
        .map_err(|e| Failure::new(EXIT_RUNTIME, "io", format!("{}: {e}", dir.display())))?;
    let name = cfg.experiment.name();
    let mut written = vec![dir.join(format!("{name}.csv")), dir.join(format!("{name}_summary.csv"))];
    write(&written[0], &trials_csv(&cfg, &result.rows))?;
    write(&written[1], &summary_csv(&cfg, &summary))?;
    if cfg.experiment == Experiment::Convergence {
        let trace = dir.join(format!("{name}_trace.csv"));
        let trace_summary = dir.join(format!("{name}_trace_summary.csv"));
        write(&trace, &trace_csv(&cfg, &result))?;
        write(&trace_summary, &trace_summary_csv(&cfg, &result))?;
        written.extend([trace, trace_summary]);
    }

    println!(
        "{:<20} {:>14} {:>8} {:>18} {:>14} {:>10}",
        "method",
        cfg.swept_variable().key(),
        "trials",
        "throughput (b/s/Hz)",
        "I_PR / p_max",
        "sinr_pu dB"
    );
    for s in &summary {
        println!(
            "{:<20} {:>14} {:>8} {:>18.4} {:>14.3e} {:>10.2}",
            s.method.name(),
            s.swept_value,
            s.trials,
            s.stats[0].mean,
            s.stats[4].mean,
            s.stats[3].mean
        );
    }
    for p in written {
        println!("wrote {}", p.display());
    }
    Ok(())
}

fn dispatch(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Version => {
            println!("idle-space {}", env!("CARGO_PKG_VERSION"));
            Ok(())
        }
        Command::ValidateConfig { config, set } => {
            let mut cfg = load_config(&config)?;
            apply_overrides(&mut cfg, &set)?;
            cfg.validate()
                .map_err(|e| Failure::new(EXIT_CONFIG, "config", e.to_string()))?;
            print!("{}", cfg.to_text());
            Ok(())
        }
        Command::Experiment { name, opts } => {
            let experiment: Experiment = name
                .parse()
                .map_err(|e: ConfigError| Failure::new(EXIT_UNKNOWN_EXPERIMENT, "unknown_experiment", e.to_string()))?;
            execute(SweepConfig::for_experiment(experiment), &opts)
        }
        Command::Run { config, opts } => execute(load_config(&config)?, &opts),
    }
}

/// Parses `args` (including the program name) and runs the command.
/// Returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return 0;
        }
        Err(e) => {
            let rendered = e.to_string();
            let first = rendered
                .lines()
                .next()
                .unwrap_or("invalid arguments")
                .trim_start_matches("error: ");
            eprintln!("error: usage: {first}");
            return EXIT_UNKNOWN_EXPERIMENT;
        }
    };
    match dispatch(cli) {
        Ok(()) => 0,
        Err(f) => {
            eprintln!("error: {}: {}", f.kind, f.message);
            f.code
        }
    }
}
