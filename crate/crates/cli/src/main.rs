//! `eigenband <experiment> [options]`: runs one experiment and writes
//! `<out>/<experiment>-<timestamp>.csv` plus a JSON report.
//!
//! Exit codes: 0 success, 1 numerical failure, 2 configuration error,
//! 3 failed check under `verify`, 4 I/O error.

mod config;
mod experiments;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, ValueEnum};
use eigenband::manifold::ManifoldKind;

use config::ExperimentConfig;

#[derive(Debug)]
pub enum CliError {
    Config(String),
    Io(String),
    Numerical(String),
    Verify,
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Numerical(_) => 1,
            CliError::Config(_) => 2,
            CliError::Verify => 3,
            CliError::Io(_) => 4,
        }
    }
}

impl From<eigenband::Error> for CliError {
    fn from(e: eigenband::Error) -> Self {
        match e {
            eigenband::Error::Numerical(m) => CliError::Numerical(m),
            other => CliError::Config(other.to_string()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Experiment {
    /// Eigenvalue count and kernel diagonal against the Weyl law.
    Weyl,
    /// Band dimensions m_λ and normalizers k_λ.
    Band,
    /// Scan of d_λ / (λ d_g).
    Lipschitz,
    /// d_λ against the Bessel reference at small separations.
    Profile,
    /// Pullback metric against a multiple of the identity.
    Isometry,
    /// Monte Carlo sup-norms against the sup-norm bound.
    Supnorm,
    /// Net curve, entropy integral and Monte Carlo supremum.
    Dudley,
    /// d_λ diameter estimate.
    Diameter,
    /// Net sizes under the geodesic distance and under d_λ.
    Covering,
    /// The claim integral against 1 ± a/2.
    Claim,
    /// The acceptance suite.
    Verify,
}

#[derive(Debug, Parser)]
#[command(name = "eigenband", version, about = "Eigenfunction band embeddings and random waves")]
struct Cli {
    experiment: Experiment,
    /// JSON file with an ExperimentConfig object; flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Manifold: sphere2 or flat_torus.
    #[arg(long, value_parser = parse_kind)]
    manifold: Option<ManifoldKind>,
    /// Torus side lengths, comma separated.
    #[arg(long, value_delimiter = ',')]
    sides: Option<Vec<f64>>,
    /// Spectral parameter(s), comma separated.
    #[arg(long, value_delimiter = ',')]
    lambda: Option<Vec<f64>>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long)]
    grid_density: Option<usize>,
    #[arg(long)]
    substrate: Option<usize>,
    #[arg(long)]
    eps_min: Option<f64>,
    #[arg(long)]
    eps_max: Option<f64>,
    #[arg(long)]
    eps_count: Option<usize>,
    /// Claim parameters, comma separated.
    #[arg(long = "a", value_delimiter = ',')]
    a_values: Option<Vec<f64>>,
    /// Acceptance criteria to run under `verify`, comma separated.
    #[arg(long, value_delimiter = ',')]
    criteria: Option<Vec<usize>>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads (default: logical CPU count).
    #[arg(long)]
    workers: Option<usize>,
}

fn parse_kind(s: &str) -> Result<ManifoldKind, String> {
    match s {
        "sphere2" => Ok(ManifoldKind::Sphere2),
        "flat_torus" => Ok(ManifoldKind::FlatTorus),
        _ => Err(format!("unknown manifold {s:?}, expected sphere2 or flat_torus")),
    }
}

impl Cli {
    fn resolve(&self) -> Result<ExperimentConfig, CliError> {
        let mut c = ExperimentConfig::load(self.config.as_deref())?;
        if let Some(k) = self.manifold {
            if k != c.manifold.kind {
                c.manifold.side_lengths.clear();
                c.manifold.dim = None;
            }
            c.manifold.kind = k;
        }
        if let Some(s) = &self.sides {
            c.manifold.side_lengths = s.clone();
            c.manifold.dim = None;
        }
        macro_rules! set {
            ($($f:ident),*) => { $( if let Some(v) = &self.$f { c.$f = v.clone(); } )* };
        }
        set!(seed, samples, grid_density, substrate, eps_min, eps_max, eps_count, a_values, criteria, out);
        if let Some(l) = &self.lambda {
            c.lambdas = l.clone();
        }
        Ok(c)
    }
}

fn run(cli: &Cli) -> Result<(), CliError> {
    let config = cli.resolve()?;
    let model = config.validate()?;
    if let Some(w) = cli.workers {
        if w == 0 {
            return Err(CliError::Config("workers must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(w)
            .build_global()
            .map_err(|e| CliError::Config(e.to_string()))?;
    }
    let timestamp = chrono::Utc::now().format("%Y%m%dT%H%M%S%.3fZ").to_string();
    let t0 = Instant::now();
    let outcome = match cli.experiment {
        Experiment::Weyl => experiments::weyl(&config, &model)?,
        Experiment::Band => experiments::band(&config, &model)?,
        Experiment::Lipschitz => experiments::lipschitz(&config, &model)?,
        Experiment::Profile => experiments::profile(&config, &model)?,
        Experiment::Isometry => experiments::isometry(&config, &model)?,
        Experiment::Supnorm => experiments::supnorm(&config, &model)?,
        Experiment::Dudley => experiments::dudley(&config, &model)?,
        Experiment::Diameter => experiments::diameter(&config, &model)?,
        Experiment::Covering => experiments::covering(&config, &model)?,
        Experiment::Claim => experiments::claim(&config)?,
        Experiment::Verify => experiments::verify(&config)?,
    };
    let name = cli.experiment.to_possible_value().map(|v| v.get_name().to_string()).unwrap_or_default();
    let json = report::emit(&name, &config, &outcome, &timestamp, t0.elapsed().as_secs_f64())?;
    println!("{}", json.display());
    for (flag, pass) in &outcome.flags {
        println!("{} {flag}", if *pass { "PASS" } else { "FAIL" });
    }
    if cli.experiment == Experiment::Verify && outcome.flags.values().any(|p| !p) {
        return Err(CliError::Verify);
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            match &e {
                CliError::Config(m) => eprintln!("configuration error: {m}"),
                CliError::Io(m) => eprintln!("i/o error: {m}"),
                CliError::Numerical(m) => eprintln!("numerical failure: {m}"),
                CliError::Verify => eprintln!("verification failed"),
            }
            ExitCode::from(e.code())
        }
    }
}
