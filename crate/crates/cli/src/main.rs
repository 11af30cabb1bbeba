use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use symgate::sweep::{self, CrossReport, Engine, SweepConfig};
use symgate::CircuitKind;

#[derive(Parser)]
#[command(name = "symgate", version, about = "Dissipation-resistant geometric gate experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Fidelity sweep over kappa/alpha0, decoupling order and beta.
    Sweep(SweepArgs),
    /// Run both engines on the grid and fail on any disagreement.
    Validate(SweepArgs),
    /// Write phase-space paths of a circuit and its time reverse.
    Paths(PathArgs),
    /// Print the effective configuration.
    ShowConfig(ConfigArgs),
}

#[derive(Args)]
struct ConfigArgs {
    /// TOML sweep configuration; defaults apply to missing keys.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Engine override.
    #[arg(long)]
    engine: Option<Engine>,
    /// Extra Fock levels above the truncation rule.
    #[arg(long)]
    fock_margin: Option<usize>,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    config: ConfigArgs,
    /// Output directory.
    #[arg(long, default_value = ".")]
    out: PathBuf,
}

#[derive(Args)]
struct PathArgs {
    #[arg(long, default_value = "step")]
    kind: CircuitKind,
    #[arg(long, default_value_t = 1.0)]
    alpha0: f64,
    /// Pulse length; defaults to the value giving the pi/8 gate.
    #[arg(long)]
    tau: Option<f64>,
    #[arg(long, default_value_t = 0.0)]
    kappa: f64,
    #[arg(long, default_value_t = 401)]
    samples: usize,
    #[arg(long, default_value = ".")]
    out: PathBuf,
}

impl ConfigArgs {
    fn resolve(&self) -> Result<SweepConfig> {
        let mut cfg = match &self.config {
            Some(p) => SweepConfig::load(p)?,
            None => SweepConfig::default(),
        };
        if let Some(e) = self.engine {
            cfg.engine = e;
        }
        if let Some(m) = self.fock_margin {
            cfg.fock_margin = m;
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

fn write(dir: &Path, name: &str, text: &str) -> Result<PathBuf> {
    std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let path = dir.join(name);
    std::fs::write(&path, text).with_context(|| format!("writing {}", path.display()))?;
    println!("wrote {}", path.display());
    Ok(path)
}

fn report_cross(report: &CrossReport, out: &Path) -> Result<bool> {
    write(out, "cross_validation.csv", &report.to_csv())?;
    println!(
        "max |dF| = {:.3e}, max element diff = {:.3e} (tolerance {:.1e})",
        report.max_fidelity_delta(),
        report.max_element_diff(),
        report.tolerance
    );
    match report.check() {
        Ok(()) => Ok(true),
        Err(e) => {
            eprintln!("cross-validation failed: {e}");
            Ok(false)
        }
    }
}

fn run_sweep(args: &SweepArgs) -> Result<bool> {
    let cfg = args.config.resolve()?;
    let result = sweep::run_sweep(&cfg)?;
    write(&args.out, "fidelity.csv", &result.to_csv())?;
    for f in result.failed_points() {
        eprintln!("point failed: {f}");
    }
    for v in result.shape_violations() {
        eprintln!("shape check: {v}");
    }
    let total: std::time::Duration = result
        .rows
        .iter()
        .flat_map(|r| [&r.analytic, &r.oracle])
        .filter_map(|c| c.as_ref().and_then(|c| c.as_ref().ok()))
        .map(|p| p.wall_time)
        .sum();
    log::info!("{} points, {:.2?} engine time", result.rows.len(), total);
    if cfg.engine == Engine::Both {
        let report = CrossReport { tolerance: cfg.cross_tolerance, sweep: result };
        return report_cross(&report, &args.out);
    }
    Ok(true)
}

fn run_validate(args: &SweepArgs) -> Result<bool> {
    let mut cfg = args.config.resolve()?;
    cfg.engine = Engine::Both;
    let report = sweep::cross_report(&cfg)?;
    report_cross(&report, &args.out)
}

fn run_paths(args: &PathArgs) -> Result<bool> {
    let tau = match args.tau {
        Some(t) => t,
        None => (symgate::ENTANGLING_PHASE / args.kind.phase_coefficient()).sqrt() / args.alpha0,
    };
    let dump = sweep::emit_paths(args.kind, args.alpha0, tau, args.kappa, args.samples, &args.out)?;
    for (file, gap) in dump.files.iter().zip(dump.closure_gaps) {
        println!("wrote {} (closure gap {gap:.3e})", file.display());
    }
    Ok(true)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Sweep(a) => run_sweep(a),
        Command::Validate(a) => run_validate(a),
        Command::Paths(a) => run_paths(a),
        Command::ShowConfig(a) => a.resolve().map(|cfg| {
            print!("{}", cfg.to_toml());
            true
        }),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
