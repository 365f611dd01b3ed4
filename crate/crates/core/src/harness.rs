//! Experiment presets, deterministic parallel trial execution, aggregation
//! and CSV/SVG output.

use std::fmt;
use std::io::Write;
use std::str::FromStr;
use std::sync::Arc;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::CMat;
use crate::model::{
    build_overcomplete_dft, gaussian_measurement, snr_db, Dictionary, ProblemInstance, SeededRng,
    PERFECT_RECOVERY_DB,
};
use crate::projections::ProjectionKind;
use crate::signals::{draw_coefficients, generate_support, CoefficientDistribution, StructureSpec};
use crate::solvers::{self, RecoveryResult, SolverConfig};
use crate::sscosamp::{self, SscosampConfig, UsscosampVariant};

/// Mean SNR is computed over values clamped to `±SNR_CLAMP_DB` so that exact
/// recoveries and solver failures do not swamp the average.
pub const SNR_CLAMP_DB: f64 = 400.0;

const STREAM_MEASUREMENT: u64 = 0;
const STREAM_SUPPORT: u64 = 1;
const STREAM_COEFFICIENTS: u64 = 2;

/// A recovery algorithm with its optional inline parameter.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum Algorithm {
    Omp,
    Cosamp,
    L1,
    /// `window: None` uses the experiment's `nomp_window`.
    Nomp {
        window: Option<usize>,
    },
    /// `eps: None` uses the sweep value or the experiment's `epsilon`.
    EpsOmp {
        eps: Option<f64>,
    },
    Sscosamp {
        identify: ProjectionKind,
        prune: ProjectionKind,
    },
    Usscosamp(UsscosampVariant),
}

impl Algorithm {
    pub const fn sscosamp(kind: ProjectionKind) -> Self {
        Algorithm::Sscosamp {
            identify: kind,
            prune: kind,
        }
    }

    /// Stable identifier used on the command line and in CSV output.
    pub fn id(&self) -> String {
        match *self {
            Algorithm::Omp => "omp".into(),
            Algorithm::Cosamp => "cosamp".into(),
            Algorithm::L1 => "l1".into(),
            Algorithm::Nomp { window: None } => "nomp".into(),
            Algorithm::Nomp { window: Some(w) } => format!("nomp:{w}"),
            Algorithm::EpsOmp { eps: None } => "eps_omp".into(),
            Algorithm::EpsOmp { eps: Some(e) } => format!("eps_omp:{e}"),
            Algorithm::Sscosamp { identify, prune } if identify == prune => {
                format!("sscosamp_{identify}")
            }
            Algorithm::Sscosamp { identify, prune } => {
                format!("sscosamp_{identify}_id_{prune}_prune")
            }
            Algorithm::Usscosamp(v) => format!("usscosamp_{v}"),
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.id())
    }
}

const ALGORITHM_NAMES: &str =
    "omp, cosamp, l1, nomp[:w], eps_omp[:eps], sscosamp_{omp,cosamp,l1}, \
     sscosamp_<id>_id_<prune>_prune, usscosamp_alt, usscosamp_union";

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let unknown = || Error::UnknownName {
            kind: "algorithm",
            name: s.to_string(),
            valid: ALGORITHM_NAMES.into(),
        };
        let (name, param) = match s.split_once(':') {
            Some((n, p)) => (n, Some(p)),
            None => (s, None),
        };
        let bad_param = || Error::Config(format!("bad parameter in algorithm '{s}'"));
        let plain = |alg: Algorithm| match param {
            None => Ok(alg),
            Some(_) => Err(bad_param()),
        };
        match name {
            "omp" => plain(Algorithm::Omp),
            "cosamp" => plain(Algorithm::Cosamp),
            "l1" => plain(Algorithm::L1),
            "nomp" => Ok(Algorithm::Nomp {
                window: param
                    .map(|p| p.parse().map_err(|_| bad_param()))
                    .transpose()?,
            }),
            "eps_omp" => Ok(Algorithm::EpsOmp {
                eps: param
                    .map(|p| p.parse().map_err(|_| bad_param()))
                    .transpose()?,
            }),
            _ => {
                if let Some(v) = name.strip_prefix("usscosamp_") {
                    return plain(Algorithm::Usscosamp(v.parse().map_err(|_| unknown())?));
                }
                let rest = name.strip_prefix("sscosamp_").ok_or_else(unknown)?;
                let alg = match rest
                    .strip_suffix("_prune")
                    .and_then(|r| r.split_once("_id_"))
                {
                    Some((id, pr)) => Algorithm::Sscosamp {
                        identify: id.parse().map_err(|_| unknown())?,
                        prune: pr.parse().map_err(|_| unknown())?,
                    },
                    None => Algorithm::sscosamp(rest.parse().map_err(|_| unknown())?),
                };
                plain(alg)
            }
        }
    }
}

impl TryFrom<String> for Algorithm {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<Algorithm> for String {
    fn from(a: Algorithm) -> String {
        a.id()
    }
}

/// The single swept parameter of an experiment.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Sweep {
    Measurements {
        values: Vec<usize>,
    },
    /// Replaces the signal class by uniform or two-cluster separation.
    Separation {
        values: Vec<usize>,
        #[serde(default)]
        two_cluster: bool,
    },
    Sparsity {
        values: Vec<usize>,
    },
    Epsilon {
        values: Vec<f64>,
    },
    /// Replaces the signal class by `c_clusters:<value>`.
    ClusterCount {
        values: Vec<usize>,
    },
}

impl Sweep {
    pub fn param_name(&self) -> &'static str {
        match self {
            Sweep::Measurements { .. } => "m",
            Sweep::Separation { .. } => "separation",
            Sweep::Sparsity { .. } => "k",
            Sweep::Epsilon { .. } => "epsilon",
            Sweep::ClusterCount { .. } => "clusters",
        }
    }

    pub fn values(&self) -> Vec<f64> {
        match self {
            Sweep::Measurements { values }
            | Sweep::Separation { values, .. }
            | Sweep::Sparsity { values }
            | Sweep::ClusterCount { values } => values.iter().map(|&v| v as f64).collect(),
            Sweep::Epsilon { values } => values.clone(),
        }
    }

    fn overrides_signal(&self) -> bool {
        matches!(self, Sweep::Separation { .. } | Sweep::ClusterCount { .. })
    }
}

/// Full description of one experiment.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    /// Written to the `preset` CSV column.
    pub name: String,
    pub algorithms: Vec<Algorithm>,
    pub signals: Vec<StructureSpec>,
    pub n: usize,
    pub d: usize,
    pub k: usize,
    /// Measurements when the sweep is not over `m`.
    pub m: usize,
    pub sweep: Sweep,
    pub trials: usize,
    pub master_seed: u64,
    pub nomp_window: usize,
    /// Shrinks the NOMP window to `⌊m/k⌋` where the configured one would not fit.
    pub nomp_window_adaptive: bool,
    pub epsilon: f64,
    pub coefficients: CoefficientDistribution,
    pub solver: SolverConfig,
    pub sscosamp: SscosampConfig,
    /// When false every runtime is reported as 0, making output byte-stable.
    pub record_timing: bool,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            name: "custom".into(),
            algorithms: vec![Algorithm::Omp],
            signals: vec![StructureSpec::Clustered],
            n: 256,
            d: 1024,
            k: 8,
            m: 100,
            sweep: Sweep::Measurements { values: vec![100] },
            trials: 40,
            master_seed: 42,
            nomp_window: 6,
            nomp_window_adaptive: false,
            epsilon: 0.9539,
            coefficients: CoefficientDistribution::ComplexGaussian,
            solver: SolverConfig::default(),
            sscosamp: SscosampConfig::default(),
            record_timing: true,
        }
    }
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: ExperimentConfig =
            toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Config(msg));
        if self.trials == 0 {
            return bad("trials must be at least 1".into());
        }
        if self.algorithms.is_empty() || self.signals.is_empty() {
            return bad("algorithms and signals must be nonempty".into());
        }
        if self.sweep.overrides_signal() && self.signals.len() != 1 {
            return bad(format!(
                "a {} sweep sets the signal class itself; give exactly one signal",
                self.sweep.param_name()
            ));
        }
        if self.n == 0 || self.d % self.n != 0 || self.d < self.n {
            return bad(format!(
                "d = {} must be a positive multiple of n = {}",
                self.d, self.n
            ));
        }
        if self.k == 0 || self.m == 0 || self.nomp_window == 0 {
            return bad("k, m and nomp_window must be at least 1".into());
        }
        let values = self.sweep.values();
        if values.is_empty() {
            return bad("sweep values must be nonempty".into());
        }
        if values.windows(2).any(|w| !(w[0] < w[1])) {
            return bad("sweep values must be strictly ascending".into());
        }
        match &self.sweep {
            Sweep::Measurements { values } | Sweep::Sparsity { values } if values[0] == 0 => {
                return bad("sweep values must be at least 1".into());
            }
            Sweep::Epsilon { values } if values.iter().any(|e| !(*e > 0.0 && *e < 1.0)) => {
                return bad("epsilon values must lie in (0, 1)".into());
            }
            _ => {}
        }
        self.solver.validate()?;
        self.sscosamp.inner_cfg.validate()?;
        if self.sscosamp.max_outer_iterations == 0 {
            return bad("max_outer_iterations must be at least 1".into());
        }
        Ok(())
    }

    fn grid_point(&self, slot: usize, value: f64) -> GridPoint {
        let mut p = GridPoint {
            signal: self.signals[slot],
            m: self.m,
            k: self.k,
            eps: self.epsilon,
        };
        match self.sweep {
            Sweep::Measurements { .. } => p.m = value as usize,
            Sweep::Sparsity { .. } => p.k = value as usize,
            Sweep::Epsilon { .. } => p.eps = value,
            Sweep::Separation { two_cluster, .. } => {
                let s = value as usize;
                p.signal = if two_cluster {
                    StructureSpec::TwoClusterSeparation { s }
                } else {
                    StructureSpec::UniformSeparation { s }
                };
            }
            Sweep::ClusterCount { .. } => p.signal = StructureSpec::CClusters { c: value as usize },
        }
        p
    }

    fn signal_label(&self, slot: usize) -> String {
        if self.sweep.overrides_signal() {
            self.grid_point(slot, self.sweep.values()[0])
                .signal
                .class_name()
                .to_string()
        } else {
            self.signals[slot].to_string()
        }
    }
}

#[derive(Clone, Copy, Debug)]
struct GridPoint {
    signal: StructureSpec,
    m: usize,
    k: usize,
    eps: f64,
}

/// Outcome of one algorithm on one problem instance.
#[derive(Clone, Debug, PartialEq)]
pub struct TrialRecord {
    pub algorithm: String,
    pub signal_class: String,
    pub grid_value: f64,
    pub trial_index: usize,
    /// `−∞` when the solver returned an error.
    pub snr_db: f64,
    pub perfect: bool,
    pub runtime_ms: f64,
}

/// Aggregate over the trials of one (signal, algorithm, grid value) cell.
#[derive(Clone, Debug, PartialEq)]
pub struct ResultRow {
    pub algorithm: String,
    pub signal_class: String,
    pub n: usize,
    pub d: usize,
    pub k: usize,
    pub grid_param: String,
    pub grid_value: f64,
    pub trials: usize,
    pub perfect_pct: f64,
    pub mean_snr_db: f64,
    pub mean_runtime_ms: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ResultTable {
    pub config: ExperimentConfig,
    pub rows: Vec<ResultRow>,
}

impl ResultTable {
    pub fn row(&self, algorithm: &str, signal_class: &str, grid_value: f64) -> Option<&ResultRow> {
        self.rows.iter().find(|r| {
            r.algorithm == algorithm && r.signal_class == signal_class && r.grid_value == grid_value
        })
    }

    /// Perfect-recovery percentage of one cell.
    pub fn rate(&self, algorithm: &str, signal_class: &str, grid_value: f64) -> Option<f64> {
        self.row(algorithm, signal_class, grid_value)
            .map(|r| r.perfect_pct)
    }
}

/// Owns the shared dictionary and runs cells of an experiment.
pub struct Runner {
    cfg: ExperimentConfig,
    dict: Arc<Dictionary>,
}

impl Runner {
    pub fn new(cfg: ExperimentConfig) -> Result<Self> {
        cfg.validate()?;
        let dict = Arc::new(build_overcomplete_dft(cfg.n, cfg.d / cfg.n)?);
        Ok(Runner { cfg, dict })
    }

    pub fn config(&self) -> &ExperimentConfig {
        &self.cfg
    }

    fn instance(
        &self,
        slot: usize,
        grid_index: usize,
        trial: usize,
        p: &GridPoint,
    ) -> Result<ProblemInstance> {
        let rng = SeededRng::new(
            self.cfg.master_seed,
            &[slot as u64, grid_index as u64, trial as u64],
        );
        let a = gaussian_measurement(p.m, self.cfg.n, &mut rng.substream(STREAM_MEASUREMENT))?;
        let support = generate_support(
            &p.signal,
            p.k,
            self.cfg.d,
            &mut rng.substream(STREAM_SUPPORT),
        )?;
        let alpha = draw_coefficients(
            &support,
            self.cfg.coefficients,
            self.cfg.d,
            &mut rng.substream(STREAM_COEFFICIENTS),
        )?;
        ProblemInstance::new(a, Arc::clone(&self.dict), alpha, None)
    }

    fn recover(
        &self,
        alg: Algorithm,
        inst: &ProblemInstance,
        phi: &CMat,
        p: &GridPoint,
    ) -> Result<RecoveryResult> {
        let (a, dict, y, k) = (&inst.a, self.dict.as_ref(), inst.y.as_slice(), p.k);
        let solver = &self.cfg.solver;
        match alg {
            Algorithm::Omp => solvers::omp(phi, y, k, solver)?.into_recovery(dict),
            Algorithm::Cosamp => solvers::cosamp(phi, y, k, solver)?.into_recovery(dict),
            Algorithm::L1 => solvers::l1_recover(a, dict, y, k, solver),
            Algorithm::Nomp { window } => {
                let mut w = window.unwrap_or(self.cfg.nomp_window);
                if self.cfg.nomp_window_adaptive {
                    w = w.min(p.m / k);
                }
                solvers::nomp_on(phi, dict, y, k, w)
            }
            Algorithm::EpsOmp { eps } => {
                solvers::eps_omp_on(phi, dict, y, k, eps.unwrap_or(p.eps), solver)
            }
            Algorithm::Sscosamp { identify, prune } => {
                let cfg = SscosampConfig {
                    identify_kind: identify,
                    prune_kind: prune,
                    ..self.cfg.sscosamp.clone()
                };
                sscosamp::sscosamp(a, dict, y, k, &cfg)
            }
            Algorithm::Usscosamp(variant) => {
                sscosamp::usscosamp(a, dict, y, k, variant, &self.cfg.sscosamp)
            }
        }
    }

    /// Runs every algorithm on the instance for `(slot, grid_index, trial)`.
    pub fn run_cell(&self, slot: usize, grid_index: usize, trial: usize) -> Vec<TrialRecord> {
        let value = self.cfg.sweep.values()[grid_index];
        let p = self.cfg.grid_point(slot, value);
        let label = self.cfg.signal_label(slot);
        let prepared = self
            .instance(slot, grid_index, trial, &p)
            .and_then(|inst| Ok((inst.phi()?, inst)));
        self.cfg
            .algorithms
            .iter()
            .map(|&alg| {
                let start = Instant::now();
                let snr = match &prepared {
                    Ok((phi, inst)) => self
                        .recover(alg, inst, phi, &p)
                        .and_then(|r| snr_db(&inst.x, &r.x_hat))
                        .unwrap_or(f64::NEG_INFINITY),
                    Err(_) => f64::NEG_INFINITY,
                };
                let runtime_ms = if self.cfg.record_timing {
                    start.elapsed().as_secs_f64() * 1e3
                } else {
                    0.0
                };
                TrialRecord {
                    algorithm: alg.id(),
                    signal_class: label.clone(),
                    grid_value: value,
                    trial_index: trial,
                    snr_db: snr,
                    perfect: snr > PERFECT_RECOVERY_DB,
                    runtime_ms,
                }
            })
            .collect()
    }

    /// All cells on a pool of `parallelism` workers; results do not depend
    /// on the worker count.
    pub fn run(&self, parallelism: usize) -> Result<ResultTable> {
        if parallelism == 0 {
            return Err(Error::InvalidParameter(
                "parallelism must be at least 1".into(),
            ));
        }
        let grid = self.cfg.sweep.values();
        let cells: Vec<(usize, usize, usize)> = (0..self.cfg.signals.len())
            .flat_map(|s| {
                (0..grid.len()).flat_map(move |g| (0..self.cfg.trials).map(move |t| (s, g, t)))
            })
            .collect();
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(parallelism)
            .build()
            .map_err(|e| Error::InvalidParameter(e.to_string()))?;
        let records: Vec<Vec<TrialRecord>> = pool.install(|| {
            cells
                .par_iter()
                .map(|&(s, g, t)| self.run_cell(s, g, t))
                .collect()
        });
        Ok(self.aggregate(&cells, &records))
    }

    fn aggregate(
        &self,
        cells: &[(usize, usize, usize)],
        records: &[Vec<TrialRecord>],
    ) -> ResultTable {
        let cfg = &self.cfg;
        let grid = cfg.sweep.values();
        let mut order: Vec<usize> = (0..cfg.algorithms.len()).collect();
        order.sort_by_key(|&i| cfg.algorithms[i].id());
        order.dedup_by_key(|i| cfg.algorithms[*i].id());

        let mut rows = Vec::new();
        for slot in 0..cfg.signals.len() {
            for &ai in &order {
                for (gi, &value) in grid.iter().enumerate() {
                    let cell: Vec<&TrialRecord> = cells
                        .iter()
                        .zip(records)
                        .filter(|((s, g, _), _)| *s == slot && *g == gi)
                        .map(|(_, recs)| &recs[ai])
                        .collect();
                    let trials = cell.len();
                    let perfect = cell.iter().filter(|r| r.perfect).count();
                    let mean = |f: &dyn Fn(&TrialRecord) -> f64| {
                        cell.iter().map(|r| f(r)).sum::<f64>() / trials as f64
                    };
                    let p = cfg.grid_point(slot, value);
                    rows.push(ResultRow {
                        algorithm: cfg.algorithms[ai].id(),
                        signal_class: cfg.signal_label(slot),
                        n: cfg.n,
                        d: cfg.d,
                        k: p.k,
                        grid_param: cfg.sweep.param_name().into(),
                        grid_value: value,
                        trials,
                        perfect_pct: 100.0 * perfect as f64 / trials as f64,
                        mean_snr_db: mean(&|r| r.snr_db.clamp(-SNR_CLAMP_DB, SNR_CLAMP_DB)),
                        mean_runtime_ms: mean(&|r| r.runtime_ms),
                    });
                }
            }
        }
        ResultTable {
            config: cfg.clone(),
            rows,
        }
    }
}

/// One trial of `algorithm` at a sweep value, on the first signal class.
pub fn run_trial(
    cfg: &ExperimentConfig,
    algorithm: Algorithm,
    grid_value: f64,
    trial_index: usize,
) -> Result<TrialRecord> {
    let grid_index = cfg
        .sweep
        .values()
        .iter()
        .position(|&v| v == grid_value)
        .ok_or_else(|| Error::InvalidParameter(format!("{grid_value} is not on the sweep grid")))?;
    let single = ExperimentConfig {
        algorithms: vec![algorithm],
        ..cfg.clone()
    };
    let mut recs = Runner::new(single)?.run_cell(0, grid_index, trial_index);
    Ok(recs.remove(0))
}

pub fn run_experiment(cfg: &ExperimentConfig, parallelism: usize) -> Result<ResultTable> {
    Runner::new(cfg.clone())?.run(parallelism)
}

/// `%.6g`-style formatting: six significant digits, trailing zeros removed.
pub fn format_number(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{x:.5e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    let trim = |s: String| {
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s
        }
    };
    if (-4..6).contains(&exp) {
        let decimals = (5 - exp).max(0) as usize;
        trim(format!("{x:.decimals$}"))
    } else {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{sign}{:02}", trim(mantissa.to_string()), exp.abs())
    }
}

pub const CSV_HEADER: &str = "preset,algorithm,signal_class,n,d,k,grid_param,grid_value,trials,perfect_pct,mean_snr_db,mean_runtime_ms,seed";

pub fn emit_csv<W: Write>(table: &ResultTable, mut out: W) -> Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for r in &table.rows {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{},{},{}",
            table.config.name,
            r.algorithm,
            r.signal_class,
            r.n,
            r.d,
            r.k,
            r.grid_param,
            format_number(r.grid_value),
            r.trials,
            format_number(r.perfect_pct),
            format_number(r.mean_snr_db),
            format_number(r.mean_runtime_ms),
            table.config.master_seed
        )?;
    }
    out.flush()?;
    Ok(())
}

/// Plot geometry shared by the SVG writer and its tests.
pub mod plot {
    pub const WIDTH: f64 = 760.0;
    pub const HEIGHT: f64 = 480.0;
    pub const LEFT: f64 = 70.0;
    pub const RIGHT: f64 = 540.0;
    pub const TOP: f64 = 40.0;
    pub const BOTTOM: f64 = 420.0;

    /// Vertical position of a recovery percentage.
    pub fn y_of(pct: f64) -> f64 {
        BOTTOM - pct / 100.0 * (BOTTOM - TOP)
    }

    pub fn x_of(v: f64, lo: f64, hi: f64) -> f64 {
        if hi > lo {
            LEFT + (v - lo) / (hi - lo) * (RIGHT - LEFT)
        } else {
            (LEFT + RIGHT) / 2.0
        }
    }
}

const PALETTE: [&str; 10] = [
    "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
    "#bcbd22", "#17becf",
];

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

/// Recovery percentage against the grid value, one polyline per
/// (signal class, algorithm) series.
pub fn emit_svg<W: Write>(table: &ResultTable, mut out: W) -> Result<()> {
    use plot::*;
    if table.rows.is_empty() {
        return Err(Error::Empty("emit_svg"));
    }
    let lo = table
        .rows
        .iter()
        .map(|r| r.grid_value)
        .fold(f64::INFINITY, f64::min);
    let hi = table
        .rows
        .iter()
        .map(|r| r.grid_value)
        .fold(f64::NEG_INFINITY, f64::max);
    let multi_signal = table
        .rows
        .iter()
        .any(|r| r.signal_class != table.rows[0].signal_class);

    let mut series: Vec<(String, Vec<(f64, f64)>)> = Vec::new();
    for r in &table.rows {
        let label = if multi_signal {
            format!("{} ({})", r.algorithm, r.signal_class)
        } else {
            r.algorithm.clone()
        };
        let point = (x_of(r.grid_value, lo, hi), y_of(r.perfect_pct));
        match series.iter_mut().find(|(l, _)| *l == label) {
            Some((_, pts)) => pts.push(point),
            None => series.push((label, vec![point])),
        }
    }

    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    )?;
    writeln!(
        out,
        r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#
    )?;
    writeln!(
        out,
        r#"<text x="{}" y="24" text-anchor="middle" font-size="14">{}</text>"#,
        (LEFT + RIGHT) / 2.0,
        xml_escape(&table.config.name)
    )?;
    for pct in (0..=100).step_by(20) {
        let y = y_of(pct as f64);
        writeln!(
            out,
            r##"<line x1="{LEFT}" y1="{y}" x2="{RIGHT}" y2="{y}" stroke="#dddddd"/><text x="{}" y="{}" text-anchor="end">{pct}</text>"##,
            LEFT - 6.0,
            y + 4.0
        )?;
    }
    let grid: Vec<f64> = {
        let mut g: Vec<f64> = table.rows.iter().map(|r| r.grid_value).collect();
        g.sort_by(|a, b| a.partial_cmp(b).expect("finite grid"));
        g.dedup();
        g
    };
    let stride = grid.len().div_ceil(10).max(1);
    for v in grid.iter().step_by(stride) {
        let x = x_of(*v, lo, hi);
        writeln!(
            out,
            r#"<line x1="{x}" y1="{BOTTOM}" x2="{x}" y2="{}" stroke="black"/><text x="{x}" y="{}" text-anchor="middle">{}</text>"#,
            BOTTOM + 5.0,
            BOTTOM + 18.0,
            format_number(*v)
        )?;
    }
    writeln!(
        out,
        r#"<path class="axes" d="M{LEFT},{TOP} V{BOTTOM} H{RIGHT}" fill="none" stroke="black"/>"#
    )?;
    let grid_param = table.rows[0].grid_param.as_str();
    writeln!(
        out,
        r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#,
        (LEFT + RIGHT) / 2.0,
        BOTTOM + 40.0,
        xml_escape(grid_param)
    )?;
    writeln!(
        out,
        r#"<text x="18" y="{}" text-anchor="middle" transform="rotate(-90 18 {})">perfect recovery (%)</text>"#,
        (TOP + BOTTOM) / 2.0,
        (TOP + BOTTOM) / 2.0
    )?;
    for (i, (label, pts)) in series.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let coords: Vec<String> = pts.iter().map(|(x, y)| format!("{x:.2},{y:.2}")).collect();
        writeln!(
            out,
            r#"<polyline class="series" fill="none" stroke="{color}" stroke-width="2" points="{}"/>"#,
            coords.join(" ")
        )?;
        let ly = TOP + 10.0 + 18.0 * i as f64;
        writeln!(
            out,
            r#"<line x1="{}" y1="{ly}" x2="{}" y2="{ly}" stroke="{color}" stroke-width="2"/><text class="legend" x="{}" y="{}">{}</text>"#,
            RIGHT + 15.0,
            RIGHT + 35.0,
            RIGHT + 40.0,
            ly + 4.0,
            xml_escape(label)
        )?;
    }
    writeln!(out, "</svg>")?;
    out.flush()?;
    Ok(())
}

pub const PRESET_NAMES: [&str; 14] = [
    "fig1_clustered",
    "fig1_spread",
    "fig_hybrid",
    "fig3_uniform_sep",
    "fig3_two_cluster",
    "fig4_prune_vs_id",
    "fig5_nomp",
    "fig6_eps_sweep",
    "fig_numclus",
    "fig_nomp_sparsity",
    "fig_uss_clustered",
    "fig_uss_spread",
    "fig_uss_hybrid",
    "table1",
];

fn step_grid(lo: usize, hi: usize, step: usize) -> Vec<usize> {
    (lo..=hi).step_by(step).collect()
}

fn algorithms(ids: &[&str]) -> Vec<Algorithm> {
    ids.iter()
        .map(|s| s.parse().expect("preset algorithm ids are valid"))
        .collect()
}

const SSCOSAMP_TRIO: [&str; 3] = ["sscosamp_cosamp", "sscosamp_omp", "sscosamp_l1"];
const CLASSICAL: [&str; 3] = ["cosamp", "omp", "l1"];

/// Algorithm rows of the `table1` preset.
pub const TABLE1_ALGORITHMS: [&str; 8] = [
    "sscosamp_cosamp",
    "sscosamp_l1",
    "sscosamp_omp",
    "cosamp",
    "omp",
    "l1",
    "usscosamp_alt",
    "nomp",
];

/// Signal columns of the `table1` preset.
pub const TABLE1_SIGNALS: [&str; 7] = [
    "clustered",
    "spread",
    "hybrid",
    "c_clusters:2",
    "c_clusters:4",
    "alternating",
    "pair_spread",
];

/// Parameters of a named experiment.
pub fn preset(name: &str) -> Result<ExperimentConfig> {
    let base = ExperimentConfig {
        name: name.to_string(),
        ..Default::default()
    };
    let m_fine = Sweep::Measurements {
        values: step_grid(20, 100, 5),
    };
    let m_coarse = Sweep::Measurements {
        values: step_grid(20, 100, 8),
    };
    let signal = |s: &str| -> StructureSpec { s.parse().expect("preset signals are valid") };
    let cfg = match name {
        "fig1_clustered" | "fig1_spread" => ExperimentConfig {
            algorithms: algorithms(&SSCOSAMP_TRIO),
            signals: vec![signal(if name == "fig1_clustered" {
                "clustered"
            } else {
                "spread"
            })],
            sweep: m_fine,
            trials: 100,
            ..base
        },
        "fig_hybrid" => ExperimentConfig {
            algorithms: algorithms(&[SSCOSAMP_TRIO.as_slice(), &CLASSICAL].concat()),
            signals: vec![StructureSpec::Hybrid],
            sweep: m_fine,
            trials: 100,
            ..base
        },
        "fig3_uniform_sep" | "fig3_two_cluster" => ExperimentConfig {
            algorithms: algorithms(
                &[SSCOSAMP_TRIO.as_slice(), &CLASSICAL, &["nomp", "eps_omp"]].concat(),
            ),
            signals: vec![StructureSpec::Clustered],
            sweep: Sweep::Separation {
                values: (0..=10).collect(),
                two_cluster: name == "fig3_two_cluster",
            },
            ..base
        },
        "fig4_prune_vs_id" => ExperimentConfig {
            algorithms: algorithms(&[
                "sscosamp_cosamp",
                "sscosamp_omp",
                "sscosamp_omp_id_cosamp_prune",
                "sscosamp_cosamp_id_omp_prune",
            ]),
            signals: vec![StructureSpec::Clustered, StructureSpec::spread()],
            sweep: m_fine,
            trials: 100,
            ..base
        },
        "fig5_nomp" => ExperimentConfig {
            algorithms: algorithms(
                &[&["nomp", "eps_omp"][..], &CLASSICAL, &SSCOSAMP_TRIO].concat(),
            ),
            signals: vec![
                StructureSpec::Clustered,
                StructureSpec::spread(),
                StructureSpec::Hybrid,
            ],
            sweep: m_coarse,
            nomp_window_adaptive: true,
            ..base
        },
        "fig6_eps_sweep" => ExperimentConfig {
            algorithms: algorithms(&[
                "nomp",
                "eps_omp:0.8",
                "eps_omp:0.85",
                "eps_omp:0.9",
                "eps_omp:0.9539",
                "eps_omp:0.98",
            ]),
            signals: vec![StructureSpec::Hybrid],
            sweep: m_coarse,
            nomp_window_adaptive: true,
            ..base
        },
        "fig_numclus" => ExperimentConfig {
            algorithms: algorithms(&[&["nomp", "eps_omp"][..], &CLASSICAL].concat()),
            signals: vec![StructureSpec::CClusters { c: 1 }],
            sweep: Sweep::ClusterCount {
                values: vec![1, 2, 4],
            },
            ..base
        },
        "fig_nomp_sparsity" => ExperimentConfig {
            algorithms: algorithms(&["nomp"]),
            signals: vec![StructureSpec::Clustered],
            sweep: Sweep::Sparsity {
                values: vec![8, 16, 24, 32],
            },
            nomp_window_adaptive: true,
            ..base
        },
        "fig_uss_clustered" | "fig_uss_spread" | "fig_uss_hybrid" => ExperimentConfig {
            algorithms: algorithms(&[
                "usscosamp_alt",
                "usscosamp_union",
                "sscosamp_cosamp",
                "sscosamp_omp",
            ]),
            signals: vec![match name {
                "fig_uss_clustered" => StructureSpec::Clustered,
                "fig_uss_spread" => StructureSpec::spread(),
                _ => StructureSpec::Hybrid,
            }],
            sweep: m_fine,
            trials: if name == "fig_uss_hybrid" { 500 } else { 100 },
            ..base
        },
        "table1" => ExperimentConfig {
            algorithms: algorithms(&TABLE1_ALGORITHMS),
            signals: TABLE1_SIGNALS.iter().map(|s| signal(s)).collect(),
            sweep: Sweep::Measurements { values: vec![100] },
            ..base
        },
        _ => {
            return Err(Error::UnknownName {
                kind: "preset",
                name: name.to_string(),
                valid: PRESET_NAMES.join(", "),
            })
        }
    };
    cfg.validate()?;
    Ok(cfg)
}
