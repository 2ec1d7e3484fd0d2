//! Batch front end: every analysis of the `regimes` crate as a subcommand
//! producing CSV.
//!
//! Configuration layers, later ones winning: built-in defaults, `--preset`,
//! `--config`, `--set key=value`, the shorthand flags `--beta`, `--omega`,
//! `--b`, and `--seed`.

pub mod commands;
pub mod config;
pub mod error;
pub mod presets;

use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde_json::Value;

pub use commands::{execute, Output};
pub use config::Config;
pub use error::CliError;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Parser)]
#[command(name = "regimes", version, about = "Steady states, stability, bifurcations, basins and stylized facts of the regimes model")]
pub struct Cli {
    /// JSON configuration, or an earlier output whose header records one.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,
    /// Output file (standard output when absent).
    #[arg(long, global = true, value_name = "FILE")]
    pub out: Option<PathBuf>,
    /// Worker threads for grid computations.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Seed of the shock generator.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Named parameter table, e.g. fig3a or fig4b-red.
    #[arg(long, global = true)]
    pub preset: Option<String>,
    /// Override one configuration key.
    #[arg(long = "set", global = true, value_name = "KEY=VALUE")]
    pub set: Vec<String>,
    /// Shorthand for --set model.beta=X.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub beta: Option<f64>,
    /// Shorthand for --set model.omega=X.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub omega: Option<f64>,
    /// Shorthand for --set model.b=X.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub b: Option<f64>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, Subcommand)]
pub enum Command {
    /// Steady states, or a sweep of them along one parameter.
    Steady,
    /// Jacobian and Farebrother report, or a scenario scan along one parameter.
    Stability,
    /// Stability verdicts over a (beta, omega) grid.
    Region,
    /// One- or two-dimensional bifurcation diagram.
    Bifurcate,
    /// Basins of attraction on the plane Z = Y.
    Basin,
    /// A single orbit with its classification.
    Orbit,
    /// Noisy paths, kurtosis grids and return autocorrelations.
    Stochastic,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Steady => "steady",
            Command::Stability => "stability",
            Command::Region => "region",
            Command::Bifurcate => "bifurcate",
            Command::Basin => "basin",
            Command::Orbit => "orbit",
            Command::Stochastic => "stochastic",
        }
    }
}

/// Layers every configuration source for the parsed arguments.
pub fn resolve(cli: &Cli) -> Result<Config, CliError> {
    let mut cfg = Config::defaults(cli.command.name());
    if let Some(name) = &cli.preset {
        let entries = presets::preset(name).ok_or_else(|| {
            CliError::Config(format!("unknown preset `{name}`; known presets: {}", presets::NAMES.join(", ")))
        })?;
        for (key, value) in entries {
            cfg.set_lenient(key, &value)?;
        }
    }
    if let Some(path) = &cli.config {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        cfg.merge_json(&config::read_config_source(&text)?)?;
    }
    for pair in &cli.set {
        let (key, value) = config::parse_assignment(pair)?;
        cfg.set(&key, &value)?;
    }
    for (key, value) in [("model.beta", cli.beta), ("model.omega", cli.omega), ("model.b", cli.b)] {
        if let Some(v) = value {
            cfg.set(key, &Value::from(v))?;
        }
    }
    if let (Some(seed), true) = (cli.seed, cfg.contains("stochastic.seed")) {
        cfg.set("stochastic.seed", &Value::from(seed))?;
    }
    Ok(cfg)
}

fn header(cfg: &Config, notes: &[String]) -> String {
    let mut h = format!("# regimes {VERSION}\n# config: {}\n", cfg.to_json());
    for n in notes {
        h.push_str(&format!("# {n}\n"));
    }
    h
}

/// Full text of the main output file.
pub fn render(cfg: &Config, output: &Output) -> String {
    format!("{}{}", header(cfg, &output.notes), output.body)
}

/// Path of the sidecar next to `out`: `basin.csv` becomes `basin.catalog.csv`.
pub fn sidecar_path(out: &Path) -> PathBuf {
    let stem = out.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    let ext = out.extension().map(|e| e.to_string_lossy().into_owned()).unwrap_or_else(|| "csv".into());
    out.with_file_name(format!("{stem}.catalog.{ext}"))
}

pub fn run(cli: &Cli) -> Result<(), CliError> {
    let threads = cli.threads.unwrap_or(0);
    // a pool may already exist when called repeatedly from one process
    let _ = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global();
    let cfg = resolve(cli)?;
    let output = execute(&cfg)?;
    let main = render(&cfg, &output);
    match &cli.out {
        Some(path) => {
            std::fs::write(path, main).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
            if let Some(side) = &output.sidecar {
                let sp = sidecar_path(path);
                std::fs::write(&sp, format!("{}{side}", header(&cfg, &[])))
                    .map_err(|e| CliError::Io(format!("{}: {e}", sp.display())))?;
            }
        }
        None => {
            use std::io::Write;
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(main.as_bytes())?;
            if let Some(side) = &output.sidecar {
                for line in side.lines() {
                    writeln!(stdout, "# catalog: {line}")?;
                }
            }
        }
    }
    Ok(())
}

/// Parses `args`, runs the command and returns the process exit code.
pub fn main_with<I, S>(args: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match run(&cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("regimes: {e}");
            e.exit_code()
        }
    }
}
