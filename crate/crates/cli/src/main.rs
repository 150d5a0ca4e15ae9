//! `discrim`: scenario presets for the coherent-state discriminator.
//!
//! Exit codes: 0 success, 2 usage error, 3 I/O error, 4 runtime invariant
//! violation.

mod config;

use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use discrim_core::scenarios::{
    nstate_report, render, stack, symmetric_programs, Format, Settings, StateSpec, SweepRange, SweepSpec,
    SweepVariable, Table, PHASE_SWEEP_INTENSITIES, RATIO_SWEEP_ALPHA1_INTENSITY,
};
use discrim_core::{run_experiment_with, DetectorModel, Error, Execution};

use config::{Common, StateArg};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error(transparent)]
    Core(#[from] Error),
}

impl CliError {
    fn io(path: &Path, source: io::Error) -> Self {
        Self::Io {
            path: path.to_path_buf(),
            source,
        }
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            Self::Usage(_) | Self::Core(Error::Domain(_) | Error::Config(_)) => 2,
            Self::Io { .. } => 3,
            Self::Core(Error::Invariant(_)) => 4,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "discrim", version, about = "Unambiguous discrimination of coherent states by comparison")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Fractions against the phase difference, one curve per intensity
    Phase(PhaseArgs),
    /// Phase sweep with unequal intensities; --alpha1 and --alpha2 are required
    Unequal(PlainArgs),
    /// Conclusive probability against the common intensity
    Intensity(PlainArgs),
    /// Conclusive probability against |α₂|²/|α₁|²
    Ratio(PlainArgs),
    /// Per-hypothesis success for n program states
    Nstate(NstateArgs),
    /// One experiment, per-block counts
    Run(PlainArgs),
}

#[derive(Debug, Args)]
struct PlainArgs {
    #[command(flatten)]
    common: Common,
}

#[derive(Debug, Args)]
struct PhaseArgs {
    #[command(flatten)]
    common: Common,
    /// Common mean photon numbers, one curve each
    #[arg(long, value_delimiter = ',', default_values_t = PHASE_SWEEP_INTENSITIES)]
    intensities: Vec<f64>,
}

#[derive(Debug, Args)]
struct NstateArgs {
    #[command(flatten)]
    common: Common,
    /// Number of program states, spread evenly in phase
    #[arg(long, default_value_t = 3)]
    n: usize,
    /// Intensity of the evenly spread states
    #[arg(long, default_value_t = 1.0)]
    intensity: f64,
    /// Explicit program states, n:deg,... (overrides --n and --intensity)
    #[arg(long, value_delimiter = ',', value_name = "N:DEG,...")]
    programs: Vec<StateArg>,
}

struct Job {
    settings: Settings,
    execution: Execution,
    format: Format,
    out: Option<PathBuf>,
}

impl Job {
    fn new(common: &mut Common) -> Result<Self, CliError> {
        common.merge_file()?;
        let d = Settings::default();
        let settings = Settings {
            t0: common.t0.unwrap_or(d.t0),
            eta1: common.eta1.unwrap_or(d.eta1),
            eta2: common.eta2.unwrap_or(d.eta2),
            dark: common.dark.unwrap_or(d.dark),
            vis1: common.vis1.unwrap_or(d.vis1),
            vis2: common.vis2.unwrap_or(d.vis2),
            alpha1: common.alpha1.map_or(d.alpha1, |s| s.0),
            alpha2: common.alpha2.map_or(d.alpha2, |s| s.0),
            trials_per_block: common.trials.unwrap_or(d.trials_per_block),
            blocks: common.blocks.unwrap_or(d.blocks),
            seed: common.seed.unwrap_or(d.seed),
            drift_sigma: common.drift_sigma.unwrap_or(d.drift_sigma),
            stabilize: common.stabilize(),
        };
        let execution = match common.workers {
            Some(0) => return Err(CliError::Usage("--workers must be at least 1".into())),
            Some(n) => Execution::Workers(n),
            None => Execution::Parallel,
        };
        Ok(Self {
            settings,
            execution,
            format: common.format.map_or(Format::Csv, Format::from),
            out: common.out.clone(),
        })
    }

    fn range(common: &Common, start: f64, stop: f64, points: usize) -> Result<SweepRange, CliError> {
        Ok(SweepRange::new(
            common.start.unwrap_or(start),
            common.stop.unwrap_or(stop),
            common.points.unwrap_or(points),
        )?)
    }

    fn write(&self, table: &Table, title: &str) -> Result<(), CliError> {
        let text = render(table, self.format, title);
        match &self.out {
            Some(path) => std::fs::write(path, text).map_err(|e| CliError::io(path, e)),
            None => {
                let mut stdout = io::stdout().lock();
                stdout
                    .write_all(text.as_bytes())
                    .and_then(|()| stdout.flush())
                    .map_err(|e| CliError::io(Path::new("<stdout>"), e))
            }
        }
    }
}

fn phase(mut args: PhaseArgs) -> Result<(), CliError> {
    let job = Job::new(&mut args.common)?;
    let range = Job::range(&args.common, 0.0, 360.0, 37)?;
    if args.intensities.is_empty() {
        return Err(CliError::Usage("--intensities needs at least one value".into()));
    }
    let tables = args
        .intensities
        .iter()
        .map(|&n| {
            let mut s = job.settings.clone();
            s.alpha1.intensity = n;
            s.alpha2.intensity = n;
            SweepSpec::new(SweepVariable::PhaseDifference, range, s).run(job.execution)
        })
        .collect::<Result<Vec<_>, _>>()?;
    job.write(&stack(tables)?, "Fractions vs phase difference (deg)")
}

fn unequal(mut args: PlainArgs) -> Result<(), CliError> {
    let job = Job::new(&mut args.common)?;
    if args.common.alpha1.is_none() || args.common.alpha2.is_none() {
        return Err(CliError::Usage("unequal needs both --alpha1 and --alpha2".into()));
    }
    let range = Job::range(&args.common, 0.0, 360.0, 37)?;
    let table = SweepSpec::new(SweepVariable::PhaseDifference, range, job.settings.clone()).run(job.execution)?;
    job.write(&table, "Fractions vs phase difference (deg), unequal intensities")
}

fn intensity(mut args: PlainArgs) -> Result<(), CliError> {
    let job = Job::new(&mut args.common)?;
    let range = Job::range(&args.common, 0.0, 3.0, 31)?;
    let table = SweepSpec::new(SweepVariable::Intensity, range, job.settings.clone()).run(job.execution)?;
    job.write(&table, "Conclusive probability vs intensity (photons/pulse)")
}

fn ratio(mut args: PlainArgs) -> Result<(), CliError> {
    if args.common.alpha1.is_none() {
        args.common.alpha1 = Some(StateArg(StateSpec::new(RATIO_SWEEP_ALPHA1_INTENSITY, 0.0)));
    }
    let job = Job::new(&mut args.common)?;
    let range = Job::range(&args.common, 0.0, 4.0, 41)?;
    let table = SweepSpec::new(SweepVariable::IntensityRatio, range, job.settings.clone()).run(job.execution)?;
    job.write(&table, "Conclusive probability vs intensity ratio")
}

fn nstate(mut args: NstateArgs) -> Result<(), CliError> {
    let job = Job::new(&mut args.common)?;
    let programs = if args.programs.is_empty() {
        symmetric_programs(args.n, args.intensity)?
    } else {
        args.programs
            .iter()
            .map(|s| s.0.amplitude())
            .collect::<Result<Vec<_>, _>>()?
    };
    let det = DetectorModel::new(job.settings.eta1, job.settings.dark)?;
    let table = nstate_report(&programs, &det, &job.settings, job.execution)?;
    job.write(&table, "Per-hypothesis success")
}

const RUN_COLUMNS: [&str; 10] = [
    "block",
    "phase_1",
    "phase_2",
    "c_plus_1",
    "c_minus_1",
    "c_plus_2",
    "c_minus_2",
    "double_clicks",
    "no_clicks",
    "c_tot",
];

fn run(mut args: PlainArgs) -> Result<(), CliError> {
    let job = Job::new(&mut args.common)?;
    let s = &job.settings;
    let cfg = s.experiment(s.alpha1.amplitude()?, s.alpha2.amplitude()?)?;
    let result = run_experiment_with(&cfg, job.execution)?;
    let mut table = Table::new(RUN_COLUMNS.iter().map(|c| c.to_string()).collect());
    for (i, (b, phases)) in result.blocks.iter().zip(&result.phase_trace).enumerate() {
        table.push(vec![
            i as f64,
            phases[0],
            phases[1],
            b.c_plus[0] as f64,
            b.c_minus[0] as f64,
            b.c_plus[1] as f64,
            b.c_minus[1] as f64,
            b.double_clicks as f64,
            b.no_clicks as f64,
            b.c_tot as f64,
        ])?;
    }
    job.write(&table, "Counts per block")
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => e.exit(),
    };
    let outcome = match cli.command {
        Command::Phase(a) => phase(a),
        Command::Unequal(a) => unequal(a),
        Command::Intensity(a) => intensity(a),
        Command::Ratio(a) => ratio(a),
        Command::Nstate(a) => nstate(a),
        Command::Run(a) => run(a),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("discrim: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
