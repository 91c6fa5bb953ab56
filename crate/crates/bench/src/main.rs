use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use polyretract::{PolarMethod, Projector};
use retractbench::{
    emit_report, run_convergence_study, BenchError, ExperimentConfig, OutputFormat, Study, TangentMode,
};

#[derive(Debug, Clone, Copy, ValueEnum)]
enum StudyArg {
    Unitary,
    Grassmann,
    Stiefel,
    Means,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ProjectorArg {
    Polar,
    Qr,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum PolarArg {
    Svd,
    Newton,
    NewtonRect,
    NewtonSchulz,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum TangentArg {
    Generic,
    GrassmannOnly,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
    Table,
}

/// Convergence orders of projected polynomial retractions against the exact
/// exponential map, over a dyadic sequence of step sizes.
#[derive(Debug, Parser)]
#[command(name = "retractbench", version)]
struct Cli {
    study: StudyArg,
    /// Ambient dimension [default: 50 unitary, 200 grassmann/stiefel, 20 means]
    #[arg(long)]
    m: Option<usize>,
    /// Number of columns [default: 20; equals m for unitary]
    #[arg(long)]
    p: Option<usize>,
    /// Orders to test, comma separated [default: 1,2,3; means: number of weights]
    #[arg(long, value_delimiter = ',')]
    n: Option<Vec<usize>>,
    #[arg(long, default_value_t = 0.01)]
    t0: f64,
    #[arg(long, default_value_t = 6)]
    levels: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value = "polar")]
    projector: ProjectorArg,
    #[arg(long, value_enum, default_value = "svd")]
    polar_method: PolarArg,
    /// Stiefel only: include a Y*H component or not
    #[arg(long, value_enum, default_value = "generic")]
    tangent: TangentArg,
    /// Norm of the random tangent direction [default: 100; means: 10]
    #[arg(long)]
    scale: Option<f64>,
    /// Means only: weights summing to 1, comma separated
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    weights: Option<Vec<f64>>,
    #[arg(long, value_enum, default_value = "csv")]
    format: FormatArg,
    /// Output file [default: standard output]
    #[arg(long)]
    out: Option<PathBuf>,
}

impl Cli {
    fn config(&self) -> ExperimentConfig {
        let study = match self.study {
            StudyArg::Unitary => Study::Unitary,
            StudyArg::Grassmann => Study::Grassmann,
            StudyArg::Stiefel => Study::Stiefel,
            StudyArg::Means => Study::Means,
        };
        let mut cfg = ExperimentConfig::defaults(study);
        if let Some(m) = self.m {
            cfg.m = m;
        }
        cfg.p = match (study, self.p) {
            (_, Some(p)) => p,
            (Study::Unitary | Study::Means, None) => cfg.m,
            (_, None) => cfg.p,
        };
        if let Some(w) = &self.weights {
            cfg.weights = w.clone();
        }
        cfg.n_list = match (&self.n, study) {
            (Some(n), _) => n.clone(),
            (None, Study::Means) => vec![cfg.weights.len()],
            (None, _) => cfg.n_list,
        };
        cfg.t0 = self.t0;
        cfg.levels = self.levels;
        cfg.seed = self.seed;
        cfg.projector = match self.projector {
            ProjectorArg::Polar => Projector::Polar,
            ProjectorArg::Qr => Projector::Qr,
        };
        cfg.polar_method = match self.polar_method {
            PolarArg::Svd => PolarMethod::Svd,
            PolarArg::Newton => PolarMethod::Newton,
            PolarArg::NewtonRect => PolarMethod::NewtonRect,
            PolarArg::NewtonSchulz => PolarMethod::NewtonSchulz,
        };
        cfg.tangent_mode = match self.tangent {
            TangentArg::Generic => TangentMode::Generic,
            TangentArg::GrassmannOnly => TangentMode::GrassmannOnly,
        };
        if let Some(s) = self.scale {
            cfg.scale = s;
        }
        cfg
    }

    fn format(&self) -> OutputFormat {
        match self.format {
            FormatArg::Csv => OutputFormat::Csv,
            FormatArg::Json => OutputFormat::Json,
            FormatArg::Table => OutputFormat::Table,
        }
    }
}

fn run(cli: &Cli) -> Result<(), BenchError> {
    let report = run_convergence_study(&cli.config())?;
    emit_report(&report, cli.format(), cli.out.as_deref())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("retractbench: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
