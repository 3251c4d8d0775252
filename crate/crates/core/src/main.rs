use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;

use nhqm::report::{run, Command, ModelKind, OutputFormat, ReportError, RunConfig};

#[derive(Parser)]
#[command(name = "nhqm", version, about = "Spectra, metrics and probabilities of non-Hermitian Hamiltonians with real spectra")]
struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(Subcommand)]
enum Sub {
    /// Low eigenvalues against the exact spectrum.
    Spectrum(Common),
    /// Involution, metric, residuals, η signature and Hermitian counterpart.
    Metric(Common),
    /// Errors and observed order along a ladder of truncations.
    Converge(Common),
    /// Transition probabilities of a state.
    Probability(ProbabilityArgs),
}

#[derive(Args)]
struct Common {
    /// JSON or TOML file with the same keys as the flags; flags win.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, value_enum)]
    model: Option<ModelKind>,
    #[arg(long, allow_hyphen_values = true)]
    beta: Option<f64>,
    /// Swanson angle, or the complex-scaling angle for pt.
    #[arg(long, allow_hyphen_values = true)]
    theta: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    gamma: Option<f64>,
    /// Complex shift for pt.
    #[arg(long, allow_hyphen_values = true)]
    alpha: Option<f64>,
    /// Fock truncation.
    #[arg(long)]
    dim: Option<usize>,
    /// Grid half width L.
    #[arg(long)]
    grid_l: Option<f64>,
    /// Interior grid points M, spacing 2L/(M+1).
    #[arg(long)]
    grid_m: Option<usize>,
    /// Number of eigenvalues.
    #[arg(long)]
    k: Option<usize>,
    /// Comma-separated dimensions, or grid spacings for pt.
    #[arg(long, value_delimiter = ',')]
    ladder: Option<Vec<f64>>,
    /// Verification window (default: a quarter of the dimension).
    #[arg(long)]
    window: Option<usize>,
    #[arg(long, value_enum)]
    format: Option<OutputFormat>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// KEY=VALUE, repeatable.
    #[arg(long = "tol-override")]
    tol_override: Vec<String>,
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args)]
struct ProbabilityArgs {
    #[command(flatten)]
    common: Common,
    /// Index of a real eigenpair.
    #[arg(long)]
    eigenstate: Option<usize>,
    /// Comma-separated Fock coefficients such as 1,0.5-0.2i.
    #[arg(long, value_delimiter = ',', value_parser = parse_complex, allow_hyphen_values = true)]
    state_coeffs: Option<Vec<Complex64>>,
    /// Random coefficients on this many lowest levels, seeded by --seed.
    #[arg(long)]
    random_state: Option<usize>,
}

fn parse_complex(s: &str) -> Result<Complex64, String> {
    s.trim().parse::<Complex64>().map_err(|e| format!("`{s}`: {e}"))
}

impl Common {
    fn into_config(self) -> (Option<PathBuf>, RunConfig) {
        let cfg = RunConfig {
            model: self.model,
            beta: self.beta,
            theta: self.theta,
            gamma: self.gamma,
            alpha: self.alpha,
            dim: self.dim,
            grid_l: self.grid_l,
            grid_m: self.grid_m,
            k: self.k,
            ladder: self.ladder,
            window: self.window,
            format: self.format,
            out: self.out,
            tol_override: self.tol_override,
            seed: self.seed,
            ..Default::default()
        };
        (self.config, cfg)
    }
}

fn execute(cli: Cli) -> Result<(), ReportError> {
    let (command, (file, flags)) = match cli.command {
        Sub::Spectrum(c) => (Command::Spectrum, c.into_config()),
        Sub::Metric(c) => (Command::Metric, c.into_config()),
        Sub::Converge(c) => (Command::Converge, c.into_config()),
        Sub::Probability(p) => {
            let (file, mut cfg) = p.common.into_config();
            cfg.eigenstate = p.eigenstate;
            cfg.state_coeffs = p.state_coeffs;
            cfg.random_state = p.random_state;
            (Command::Probability, (file, cfg))
        }
    };
    let base = match file {
        Some(path) => RunConfig::from_file(&path)?,
        None => RunConfig::default(),
    };
    let resolved = base.merge(flags).resolve(command)?;
    let report = run(command, &resolved)?;
    for w in &report.warnings {
        eprintln!("nhqm: warning: {w}");
    }
    report.emit()
}

fn main() -> ExitCode {
    match execute(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("nhqm: error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
