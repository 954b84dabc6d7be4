use std::collections::BTreeSet;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use log::info;

use wardowski_cli::{output, run_config, CliError, ConfigFile, Format, RawExperiment, Stage};

#[derive(Parser)]
#[command(name = "wardowski", version, about = "Fixed-point experiments for (a, F)-contractions")]
struct Cli {
    /// Experiment file with [experiment.NAME] tables
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Directory for summary.json, metadata.json and CSV files
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,
    /// Seed for sampled checks that do not fix their own
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = FormatArg::Json)]
    format: FormatArg,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Picard iteration from every start, with certificates
    Solve(ExperimentArgs),
    /// Contraction conditions over pairs
    Verify(ExperimentArgs),
    /// Comparison function derived from F and a
    DerivePhi(ExperimentArgs),
    /// Picard classification from several starts
    Classify(ExperimentArgs),
    /// Semi-Cauchy witness extraction from a trace
    Witness(ExperimentArgs),
    /// Every stage each experiment lists
    Report(ExperimentArgs),
}

/// Flags fill in or override the same keys in every experiment of the config.
#[derive(Args, Default)]
struct ExperimentArgs {
    /// real, euclidean:dim=N or matrix:path=FILE
    #[arg(long)]
    space: Option<String>,
    /// scale, affine, translate, toward, identity, table or constant descriptor
    #[arg(long)]
    map: Option<String>,
    /// A TOML value: 1.5, [0.5, 2] or 3
    #[arg(long = "start", allow_hyphen_values = true)]
    starts: Vec<String>,
    /// log, log_poly:alpha=,beta=,gamma=, neg_power:delta= or step_log:jump=,at=
    #[arg(long = "F")]
    f: Option<String>,
    /// Contraction constant a > 0
    #[arg(long, allow_hyphen_values = true)]
    a: Option<f64>,
    /// Exponent in (0, 1) for the tail bound
    #[arg(long)]
    k: Option<f64>,
    /// Convergence tolerance for Picard runs
    #[arg(long)]
    eps: Option<f64>,
    /// Iteration budget per start
    #[arg(long)]
    max_iter: Option<i64>,
    /// linear:alpha=A or derived
    #[arg(long)]
    phi: Option<String>,
    /// aF, phi, strict or nonexpansive
    #[arg(long = "condition")]
    conditions: Vec<String>,
    /// exhaustive or sampled:N[:SEED]
    #[arg(long)]
    mode: Option<String>,
    /// interval:lo=,hi= or box:lo=,hi=
    #[arg(long)]
    domain: Option<String>,
    /// CSV of sequence points for the witness stage
    #[arg(long)]
    trace_file: Option<PathBuf>,
    /// Witness level; proposed from the data when absent
    #[arg(long)]
    eta: Option<f64>,
    /// Comma-separated levels eta must avoid
    #[arg(long, value_delimiter = ',')]
    delta: Vec<f64>,
}

impl ExperimentArgs {
    fn into_raw(self) -> Result<RawExperiment, CliError> {
        let starts = if self.starts.is_empty() {
            None
        } else {
            let parsed = self
                .starts
                .iter()
                .map(|s| {
                    toml::from_str::<toml::Table>(&format!("v = {s}"))
                        .ok()
                        .and_then(|mut t| t.remove("v"))
                        .ok_or_else(|| CliError::ConfigSemantic {
                            experiment: "cli".into(),
                            field: "start".into(),
                            message: format!("`{s}` is not a number or array"),
                        })
                })
                .collect::<Result<Vec<_>, _>>()?;
            Some(parsed)
        };
        let nonempty = |v: Vec<String>| (!v.is_empty()).then_some(v);
        Ok(RawExperiment {
            space: self.space,
            map: self.map,
            f: self.f,
            a: self.a,
            k: self.k,
            eps: self.eps,
            max_iter: self.max_iter,
            starts,
            phi: self.phi,
            conditions: nonempty(self.conditions),
            mode: self.mode,
            domain: self.domain,
            phi_grid: None,
            stages: None,
            trace_file: self.trace_file,
            eta: self.eta,
            delta: (!self.delta.is_empty()).then_some(self.delta),
        })
    }
}

fn execute(cli: Cli) -> Result<(), CliError> {
    let (name, stage, args) = match cli.command {
        Command::Solve(a) => ("solve", Some(Stage::Solve), a),
        Command::Verify(a) => ("verify", Some(Stage::Verify), a),
        Command::DerivePhi(a) => ("derive-phi", Some(Stage::DerivePhi), a),
        Command::Classify(a) => ("classify", Some(Stage::Classify), a),
        Command::Witness(a) => ("witness", Some(Stage::Witness), a),
        Command::Report(a) => ("report", None, a),
    };
    let overrides = args.into_raw()?;
    let file = cli.config.as_deref().map(ConfigFile::load).transpose()?;
    let base = cli.config.as_deref().and_then(|p| p.parent()).map(PathBuf::from).unwrap_or_default();
    let stages = stage.map(|s| BTreeSet::from([s]));
    let outputs = run_config(file.as_ref().map(|f| (f, base.as_path())), &overrides, stages.as_ref(), cli.seed)?;
    let format = match cli.format {
        FormatArg::Json => Format::Json,
        FormatArg::Csv => Format::Csv,
    };
    let written = output::write_reports(&cli.out, &outputs, cli.seed, format, name, cli.config.as_deref())?;
    for path in written {
        info!("wrote {}", path.display());
    }
    print!("{}", output::summary_json(&outputs, cli.seed));
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("WARDOWSKI_LOG", "warn")).init();
    match execute(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
