use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use qwalk_cli::commands::{self, Start, Varied};
use qwalk_cli::config::{InstanceConfig, Settings};
use qwalk_cli::dataset::Dataset;
use qwalk_core::WalkKind;

/// Spatial search by continuous-time quantum walk on the complete bipartite graph.
#[derive(Parser)]
#[command(name = "qwalk", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Debug)]
struct InstanceArgs {
    /// Configuration file, key = value lines or JSON.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    n1: Option<usize>,
    #[arg(long)]
    n2: Option<usize>,
    #[arg(long)]
    k1: Option<usize>,
    #[arg(long)]
    k2: Option<usize>,
    /// laplacian or adjacency
    #[arg(long)]
    walk: Option<WalkKind>,
    /// Jumping rate; defaults to the critical rate of the walk.
    #[arg(long)]
    gamma: Option<f64>,
    #[arg(long)]
    tmax: Option<f64>,
    /// Number of grid points.
    #[arg(long)]
    points: Option<usize>,
    /// Output file; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

impl InstanceArgs {
    fn resolve(&self) -> Result<InstanceConfig> {
        let file = match &self.config {
            Some(path) => Settings::from_file(path)?,
            None => Settings::default(),
        };
        let flags = Settings {
            n1: self.n1,
            n2: self.n2,
            k1: self.k1,
            k2: self.k2,
            gamma: self.gamma,
            walk: self.walk,
            t_max: self.tmax,
            points: self.points,
        };
        file.overlay(flags).resolve()
    }
}

#[derive(Subcommand)]
enum Command {
    /// Eigenstate overlaps of the initial and marked states across jumping rates.
    Overlap {
        #[command(flatten)]
        instance: InstanceArgs,
        #[arg(long)]
        gamma_min: Option<f64>,
        #[arg(long)]
        gamma_max: Option<f64>,
    },
    /// Success probability over time.
    Evolve {
        #[command(flatten)]
        instance: InstanceArgs,
        #[arg(long, value_enum)]
        start: Option<Start>,
    },
    /// Runtimes and faster-walk verdicts while one marked count varies.
    Compare {
        #[command(flatten)]
        instance: InstanceArgs,
        #[arg(long, value_enum)]
        vary: Option<Varied>,
        #[arg(long, default_value_t = 1)]
        from: usize,
        #[arg(long)]
        to: Option<usize>,
    },
    /// Numerical search for the critical jumping rates.
    CriticalGamma {
        #[command(flatten)]
        instance: InstanceArgs,
    },
    /// Peak success probability when the rate is offset from its critical value.
    Detune {
        #[command(flatten)]
        instance: InstanceArgs,
        /// Comma-separated offsets; 0 is always included.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        eps: Option<Vec<f64>>,
    },
    /// Expected repetitions needed to find every marked vertex.
    Coupon {
        #[command(flatten)]
        instance: InstanceArgs,
    },
    /// Closed-form rates, runtimes and final states.
    Predict {
        #[command(flatten)]
        instance: InstanceArgs,
    },
    /// Write every figure and table dataset plus a summary of all checks.
    ReproduceAll {
        #[command(flatten)]
        instance: InstanceArgs,
    },
}

/// Write through a temporary file in the destination directory, then rename.
fn write_atomically(path: &Path, contents: impl FnOnce(&mut dyn Write) -> Result<()>) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).with_context(|| format!("creating a file in {}", dir.display()))?;
    contents(tmp.as_file_mut())?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}

fn emit(data: &Dataset, out: Option<&Path>) -> Result<()> {
    match out {
        Some(path) => write_atomically(path, |w| data.write_to(w)),
        None => data.write_to(std::io::stdout().lock()),
    }
}

fn configure_threads() -> Result<()> {
    let Ok(raw) = std::env::var("QWALK_THREADS") else {
        return Ok(());
    };
    let threads: usize = raw.trim().parse().with_context(|| format!("QWALK_THREADS = `{raw}` is not a count"))?;
    if threads == 0 {
        bail!("QWALK_THREADS must be at least 1");
    }
    rayon::ThreadPoolBuilder::new().num_threads(threads).build_global()?;
    Ok(())
}

/// Returns whether every requested check passed.
fn run(command: Command) -> Result<bool> {
    let (data, args) = match command {
        Command::Overlap { instance, gamma_min, gamma_max } => {
            (commands::cmd_overlap(&instance.resolve()?, gamma_min, gamma_max)?, instance)
        }
        Command::Evolve { instance, start } => (commands::cmd_evolve(&instance.resolve()?, start)?, instance),
        Command::Compare { instance, vary, from, to } => {
            (commands::cmd_compare(&instance.resolve()?, vary, from, to)?, instance)
        }
        Command::CriticalGamma { instance } => (commands::cmd_critical_gamma(&instance.resolve()?)?, instance),
        Command::Detune { instance, eps } => (commands::cmd_detune(&instance.resolve()?, eps)?, instance),
        Command::Coupon { instance } => (commands::cmd_coupon(&instance.resolve()?)?, instance),
        Command::Predict { instance } => (commands::cmd_predict(&instance.resolve()?)?, instance),
        Command::ReproduceAll { instance } => return reproduce_all(&instance),
    };
    emit(&data, args.out.as_deref())?;
    Ok(true)
}

fn reproduce_all(args: &InstanceArgs) -> Result<bool> {
    let config = args.resolve()?;
    let dir = args.out.clone().unwrap_or_else(|| PathBuf::from("reproduction"));
    let datasets = commands::reproduction_datasets(&config)?;
    let reports = commands::reproduction_reports();
    let summary = commands::summary(&reports);

    std::fs::create_dir_all(&dir).with_context(|| format!("creating {}", dir.display()))?;
    for (name, data) in &datasets {
        write_atomically(&dir.join(name), |w| data.write_to(w))?;
    }
    write_atomically(&dir.join("summary.json"), |w| {
        serde_json::to_writer_pretty(&mut *w, &summary)?;
        writeln!(w)?;
        Ok(())
    })?;

    for report in &reports {
        println!("{}", report.summary_line());
        for check in report.checks.iter().filter(|c| !c.pass) {
            println!("    {}", check.line());
        }
    }
    println!("wrote {} datasets and summary.json to {}", datasets.len(), dir.display());
    Ok(summary.pass)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = configure_threads() {
        eprintln!("error: {e:#}");
        return ExitCode::from(2);
    }
    match run(cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
