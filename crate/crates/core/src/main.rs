use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use mzi_parity::detection;
use mzi_parity::states::StateFamily;
use mzi_parity::sweep::{self, ConfigFile, FigureId, OutputFormat};
use mzi_parity::Error;

/// Parity-detection phase estimation for a Mach-Zehnder interferometer.
#[derive(Debug, Parser)]
#[command(name = "mzi-parity", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Sweep the photon number and report the phase uncertainty.
    Sweep(SweepArgs),
    /// Reproduce the summary table of all eight state families.
    Table {
        /// Output file (standard output if omitted).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write the data behind a figure (fig2, fig3 or fig4) into a directory.
    Figure {
        /// Figure identifier.
        id: String,
        /// Output directory.
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
    /// Detection statistics of one state at one operating point.
    Expectation(SweepArgs),
}

#[derive(Debug, Args)]
struct SweepArgs {
    /// State family label.
    #[arg(long)]
    state: Option<String>,
    /// Smallest (or only) total photon number.
    #[arg(long = "n-min", visible_alias = "n")]
    n_min: Option<u32>,
    /// Largest total photon number.
    #[arg(long = "n-max")]
    n_max: Option<u32>,
    /// Evaluate at this phase instead of the phi -> 0 limit.
    #[arg(long, allow_negative_numbers = true, conflicts_with = "limit")]
    phi: Option<f64>,
    /// Extrapolate to phi -> 0 (the default when --phi is absent).
    #[arg(long)]
    limit: bool,
    /// |alpha| of the combined state.
    #[arg(long)]
    alpha: Option<f64>,
    /// |beta| of the combined state.
    #[arg(long)]
    beta: Option<f64>,
    /// Relative phase of the combined state.
    #[arg(long, allow_negative_numbers = true)]
    theta: Option<f64>,
    /// Output file (standard output if omitted).
    #[arg(long)]
    out: Option<PathBuf>,
    /// csv or json.
    #[arg(long)]
    format: Option<String>,
    /// Key-value configuration file; flags override its values.
    #[arg(long)]
    config: Option<PathBuf>,
}

impl SweepArgs {
    fn resolve(&self) -> Result<ConfigFile, Error> {
        let base = match &self.config {
            Some(path) => ConfigFile::load(path)?,
            None => ConfigFile::default(),
        };
        let flags = ConfigFile {
            state_label: self.state.clone(),
            n_min: self.n_min,
            n_max: self.n_max,
            limit: self.limit.then_some(true),
            phi: self.phi,
            alpha_mag: self.alpha,
            beta_mag: self.beta,
            theta: self.theta,
            output_path: self.out.clone(),
            format: self.format.as_deref().map(str::parse::<OutputFormat>).transpose()?,
        };
        let mut merged = base.merged(flags);
        // an explicit phase on the command line wins over `phi_mode = limit`
        if self.phi.is_some() && !self.limit {
            merged.limit = Some(false);
        }
        Ok(merged)
    }
}

fn run(cli: Cli) -> Result<(), Error> {
    match cli.command {
        Command::Sweep(args) => {
            let config = args.resolve()?.into_sweep_config()?;
            let records = sweep::run_sweep(&config)?;
            sweep::write_records(&records, config.output_path.as_deref(), config.format)
        }
        Command::Table { out } => sweep::reproduce_table(out.as_deref()).map(|_| ()),
        Command::Figure { id, out } => {
            let figure: FigureId = id.parse()?;
            for path in sweep::emit_figure_data(figure, &out)? {
                eprintln!("wrote {}", path.display());
            }
            Ok(())
        }
        Command::Expectation(args) => {
            let mut resolved = args.resolve()?;
            if resolved.n_max.is_some_and(|m| Some(m) != resolved.n_min) {
                return Err(Error::Config("`expectation` evaluates a single N; drop --n-max".into()));
            }
            if resolved.limit.is_none() && resolved.phi.is_none() {
                resolved.limit = Some(false);
            }
            let config = resolved.into_sweep_config()?;
            let family: StateFamily = config.family()?;
            let state = family.build(config.n_min)?;
            let value = match config.phi_mode {
                sweep::PhiMode::Fixed(phi) => serde_json::to_value(detection::phase_uncertainty(&state, phi)?)?,
                sweep::PhiMode::Limit => serde_json::json!({
                    "phi": 0.0,
                    "delta_phi": detection::phase_uncertainty_limit(&state)?,
                }),
            };
            let body = serde_json::json!({
                "state": family.label(),
                "N": config.n_min,
                "frame": format!("{:?}", state.frame()),
                "fock_notation": state.fock_notation(),
                "result": value,
            });
            let text = serde_json::to_string_pretty(&body)? + "\n";
            match &config.output_path {
                Some(path) => std::fs::write(path, text).map_err(|source| Error::Output { path: path.clone(), source }),
                None => io::stdout().lock().write_all(text.as_bytes()).map_err(Error::from),
            }
        }
    }
}

fn exit_code(err: &Error) -> u8 {
    match err {
        Error::NumericalLimit(_) => 3,
        Error::Domain(_)
        | Error::InvalidIndex { .. }
        | Error::Frame { .. }
        | Error::UnknownState(_)
        | Error::Config(_) => 2,
        Error::Internal(_) | Error::Output { .. } | Error::Io(_) | Error::Csv(_) | Error::Json(_) => 1,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_code(&err))
        }
    }
}
