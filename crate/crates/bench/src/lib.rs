//! Seeded convergence studies for the projected polynomial retractions.
//!
//! A study draws one random problem, evaluates the retraction and the exact
//! exponential at `t = t₀ 2^{−k}` for every requested order `n`, and
//! records errors and observed orders. Reports serialize to CSV, JSON or a
//! plain-text table.

use std::fmt;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use polyretract::convergence::{dyadic_steps, ConvergenceSeries, Level};
use polyretract::{
    dist_grassmann, random_grassmann_tangent, random_skew_hermitian, random_stiefel_point, random_stiefel_tangent,
    retract, supercloseness_experiment, GrassmannGeodesic, IterationConfig, Manifold, Matrix, PolarMethod, Projector,
    RetractionSpec, SkewExponential, StiefelGeodesic, SuperclosenessSetup, TangentVector,
};
use serde::{Deserialize, Serialize};

/// What a study measures.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Study {
    Unitary,
    Grassmann,
    Stiefel,
    /// `‖A − G‖_F` between arithmetic and geometric means.
    Means,
}

impl Study {
    pub fn as_str(&self) -> &'static str {
        match self {
            Self::Unitary => "unitary",
            Self::Grassmann => "grassmann",
            Self::Stiefel => "stiefel",
            Self::Means => "means",
        }
    }

    fn manifold(&self) -> Option<Manifold> {
        match self {
            Self::Unitary => Some(Manifold::Unitary),
            Self::Grassmann => Some(Manifold::Grassmann),
            Self::Stiefel => Some(Manifold::Stiefel),
            Self::Means => None,
        }
    }
}

impl fmt::Display for Study {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Study {
    type Err = BenchError;

    fn from_str(s: &str) -> Result<Self, BenchError> {
        [Self::Unitary, Self::Grassmann, Self::Stiefel, Self::Means]
            .into_iter()
            .find(|x| x.as_str() == s)
            .ok_or_else(|| BenchError::Config(format!("unknown study '{s}'")))
    }
}

/// Stiefel tangent directions: `H = YΩ + Y⊥K` or `H = Y⊥K`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TangentMode {
    #[default]
    Generic,
    GrassmannOnly,
}

impl TangentMode {
    pub fn as_str(&self) -> &'static str {
        match self {
            Self::Generic => "generic",
            Self::GrassmannOnly => "grassmann-only",
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum BenchError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("numerical failure: {0}")]
    Numerical(#[from] polyretract::Error),
    #[error("cannot write {path}: {source}")]
    Io { path: PathBuf, source: io::Error },
}

impl BenchError {
    /// Process exit code for the CLI.
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Config(_) => 2,
            Self::Numerical(_) => 3,
            Self::Io { .. } => 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub study: Study,
    pub m: usize,
    pub p: usize,
    pub n_list: Vec<usize>,
    pub t0: f64,
    pub levels: usize,
    pub seed: u64,
    pub projector: Projector,
    pub polar_method: PolarMethod,
    pub tangent_mode: TangentMode,
    /// Norm of the random direction (`Ω`, `H` or each `Ω_i`).
    pub scale: f64,
    /// Means study only.
    pub weights: Vec<f64>,
}

impl ExperimentConfig {
    /// Desk-scale defaults for each study.
    pub fn defaults(study: Study) -> Self {
        let (m, p, scale) = match study {
            Study::Unitary => (50, 50, 100.0),
            Study::Grassmann | Study::Stiefel => (200, 20, 100.0),
            Study::Means => (20, 20, 10.0),
        };
        Self {
            study,
            m,
            p,
            n_list: if study == Study::Means { vec![3] } else { vec![1, 2, 3] },
            t0: 0.01,
            levels: 6,
            seed: 0,
            projector: Projector::Polar,
            polar_method: PolarMethod::Svd,
            tangent_mode: TangentMode::Generic,
            scale,
            weights: vec![0.5, 0.3, 0.2],
        }
    }

    pub fn validate(&self) -> Result<(), BenchError> {
        let bad = |msg: String| Err(BenchError::Config(msg));
        if self.levels < 2 {
            return bad(format!("levels must be >= 2, got {}", self.levels));
        }
        if !(self.t0 > 0.0 && self.t0.is_finite()) {
            return bad(format!("t0 must be positive, got {}", self.t0));
        }
        if !(self.scale > 0.0 && self.scale.is_finite()) {
            return bad(format!("scale must be positive, got {}", self.scale));
        }
        if self.p == 0 || self.m < self.p {
            return bad(format!("need m >= p >= 1, got m = {}, p = {}", self.m, self.p));
        }
        if self.n_list.is_empty() {
            return bad("at least one order n is required".into());
        }
        match self.study.manifold() {
            Some(manifold) => {
                if manifold == Manifold::Grassmann && self.m == self.p {
                    return bad("the Grassmann study needs m > p".into());
                }
                if manifold == Manifold::Unitary && self.p != self.m {
                    return bad("the unitary study is square: p must equal m".into());
                }
                if self.polar_method == PolarMethod::Newton && self.m != self.p {
                    return bad("the newton polar method needs square input (m = p)".into());
                }
                for &n in &self.n_list {
                    self.spec(manifold, n).validate().map_err(|e| BenchError::Config(e.to_string()))?;
                }
            }
            None => {
                polyretract::Weights::new(self.weights.clone()).map_err(|e| BenchError::Config(e.to_string()))?;
                if self.n_list != [self.weights.len()] {
                    return bad(format!(
                        "the means study uses n = number of weights ({}), got {:?}",
                        self.weights.len(),
                        self.n_list
                    ));
                }
            }
        }
        Ok(())
    }

    fn spec(&self, manifold: Manifold, n: usize) -> RetractionSpec<f64> {
        RetractionSpec::new(manifold, n).with_projector(self.projector).with_polar_method(self.polar_method)
    }
}

/// Errors for one order `n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NResult {
    pub n: usize,
    pub levels: Vec<Level>,
}

impl NResult {
    pub fn series(&self) -> ConvergenceSeries {
        ConvergenceSeries { levels: self.levels.clone() }
    }

    /// Mean observed order over the valid levels.
    pub fn mean_order(&self) -> Option<f64> {
        self.series().mean_order()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceReport {
    pub config: ExperimentConfig,
    pub results: Vec<NResult>,
}

impl ConvergenceReport {
    pub fn result(&self, n: usize) -> Option<&NResult> {
        self.results.iter().find(|r| r.n == n)
    }
}

/// `Ok(None)` marks a level skipped because the step was too large.
fn skip_large(r: polyretract::Result<f64>) -> Result<Option<f64>, BenchError> {
    match r {
        Ok(e) => Ok(Some(e)),
        Err(polyretract::Error::StepTooLarge) => Ok(None),
        Err(e) => Err(e.into()),
    }
}

fn sweep(
    cfg: &ExperimentConfig,
    mut error_at: impl FnMut(usize, f64) -> polyretract::Result<f64>,
) -> Result<Vec<NResult>, BenchError> {
    let ts = dyadic_steps(cfg.t0, cfg.levels);
    cfg.n_list
        .iter()
        .map(|&n| {
            let errors = ts.iter().map(|&t| skip_large(error_at(n, t))).collect::<Result<Vec<_>, _>>()?;
            Ok(NResult { n, levels: ConvergenceSeries::from_errors(cfg.t0, &errors).levels })
        })
        .collect()
}

/// Runs the configured study. Identical configs give identical reports.
pub fn run_convergence_study(cfg: &ExperimentConfig) -> Result<ConvergenceReport, BenchError> {
    cfg.validate()?;
    let results = match cfg.study {
        Study::Unitary => {
            let omega: Matrix = random_skew_hermitian::<f64>(cfg.m, cfg.seed)?.scale(cfg.scale);
            let tv = TangentVector::unitary(omega.clone())?;
            let exact = SkewExponential::new(&omega)?;
            sweep(cfg, |n, t| Ok(retract(&tv, t, &cfg.spec(Manifold::Unitary, n))?.distance(&exact.at(t))))?
        }
        Study::Grassmann => {
            let y: Matrix = random_stiefel_point(cfg.m, cfg.p, cfg.seed)?;
            let h = random_grassmann_tangent(&y, cfg.seed.wrapping_add(1))?.scale(cfg.scale);
            let tv = TangentVector::grassmann(y, h)?;
            let geo = GrassmannGeodesic::new(&tv)?;
            sweep(cfg, |n, t| {
                let r = retract(&tv, t, &cfg.spec(Manifold::Grassmann, n))?;
                let e = geo.at(t);
                match cfg.projector {
                    Projector::Polar => Ok(r.distance(&e)),
                    Projector::Qr => dist_grassmann(&r, &e),
                }
            })?
        }
        Study::Stiefel => {
            let y: Matrix = random_stiefel_point(cfg.m, cfg.p, cfg.seed)?;
            let only = cfg.tangent_mode == TangentMode::GrassmannOnly;
            let h = random_stiefel_tangent(&y, cfg.seed.wrapping_add(1), only)?.scale(cfg.scale);
            let tv = TangentVector::stiefel(y, h)?;
            let geo = StiefelGeodesic::new(&tv)?;
            sweep(cfg, |n, t| Ok(retract(&tv, t, &cfg.spec(Manifold::Stiefel, n))?.distance(&geo.at(t))))?
        }
        Study::Means => {
            let setup = SuperclosenessSetup {
                m: cfg.m,
                weights: cfg.weights.clone(),
                scale: cfg.scale,
                seed: cfg.seed,
                t0: cfg.t0,
                levels: cfg.levels,
            };
            let r = supercloseness_experiment(&setup, &IterationConfig::default())?;
            vec![NResult { n: cfg.weights.len(), levels: r.series.levels }]
        }
    };
    Ok(ConvergenceReport { config: cfg.clone(), results })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
    Table,
}

impl FromStr for OutputFormat {
    type Err = BenchError;

    fn from_str(s: &str) -> Result<Self, BenchError> {
        match s {
            "csv" => Ok(Self::Csv),
            "json" => Ok(Self::Json),
            "table" => Ok(Self::Table),
            _ => Err(BenchError::Config(format!("unknown format '{s}'"))),
        }
    }
}

pub const CSV_HEADER: &str = "level,t,n,error,order,floored";

/// 17 significant digits.
fn sci(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn render_csv(report: &ConvergenceReport) -> String {
    let mut out = String::new();
    out.push_str(CSV_HEADER);
    out.push('\n');
    for r in &report.results {
        for l in &r.levels {
            let field = |x: Option<f64>| x.map(sci).unwrap_or_default();
            out.push_str(&format!(
                "{},{},{},{},{},{}\n",
                l.level,
                sci(l.t),
                r.n,
                field(l.error),
                field(l.order),
                l.floored
            ));
        }
    }
    out
}

pub fn render_json(report: &ConvergenceReport) -> String {
    let mut s = serde_json::to_string_pretty(report).expect("reports contain only finite or null numbers");
    s.push('\n');
    s
}

pub fn parse_json(s: &str) -> Result<ConvergenceReport, serde_json::Error> {
    serde_json::from_str(s)
}

/// `t₀/t`, error and order per `n`, one row per level.
pub fn render_table(report: &ConvergenceReport) -> String {
    let c = &report.config;
    let mut out = format!(
        "{} m={} p={} t0={} scale={} seed={} projector={} polar={}\n",
        c.study, c.m, c.p, c.t0, c.scale, c.seed, c.projector, c.polar_method
    );
    let levels = report.results.first().map_or(0, |r| r.levels.len());
    out.push_str(&format!("{:>6}", "t0/t"));
    for r in &report.results {
        out.push_str(&format!(" | {:>12} {:>6}", format!("n={} error", r.n), "order"));
    }
    out.push('\n');
    for k in 0..levels {
        out.push_str(&format!("{:>6}", 1u64 << k));
        for r in &report.results {
            let l = &r.levels[k];
            let err = l.error.map_or_else(|| "skipped".to_string(), |e| format!("{e:.3e}"));
            let mark = if l.floored && l.error.is_some() { "*" } else { " " };
            let ord = l.order.map_or_else(|| "-".to_string(), |o| format!("{o:.2}"));
            out.push_str(&format!(" | {err:>11}{mark} {ord:>6}"));
        }
        out.push('\n');
    }
    out.push_str(&format!("{:>6}", "mean"));
    for r in &report.results {
        let m = r.mean_order().map_or_else(|| "-".to_string(), |o| format!("{o:.2}"));
        out.push_str(&format!(" | {:>12} {m:>6}", ""));
    }
    out.push('\n');
    if report.results.iter().flat_map(|r| &r.levels).any(|l| l.floored && l.error.is_some()) {
        out.push_str("* below the 1e-12 roundoff floor\n");
    }
    out
}

pub fn render(report: &ConvergenceReport, format: OutputFormat) -> String {
    match format {
        OutputFormat::Csv => render_csv(report),
        OutputFormat::Json => render_json(report),
        OutputFormat::Table => render_table(report),
    }
}

/// Writes to `path`, or standard output when `path` is `None`.
pub fn emit_report(report: &ConvergenceReport, format: OutputFormat, path: Option<&Path>) -> Result<(), BenchError> {
    let text = render(report, format);
    match path {
        None => io::stdout()
            .lock()
            .write_all(text.as_bytes())
            .map_err(|source| BenchError::Io { path: PathBuf::from("<stdout>"), source }),
        Some(p) => {
            let io_err = |source| BenchError::Io { path: p.to_path_buf(), source };
            let mut w = BufWriter::new(File::create(p).map_err(io_err)?);
            w.write_all(text.as_bytes()).map_err(io_err)?;
            w.flush().map_err(io_err)
        }
    }
}
