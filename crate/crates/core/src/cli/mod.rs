//! Command-line front end: spec-driven sweeps, method comparison and the
//! shadowing table.

mod render;
pub mod spec;

pub use render::{Cell, Format, Table};
pub use spec::{ExperimentSpec, MetricName, Scenario};

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use sha2::{Digest, Sha256};

use crate::channels::{loo_to_sr, LooParams, TABLE1};
use crate::error::Error;
use crate::mc::{simulate, SimEstimate, SimPlan};
use crate::metrics::{esmc, pnsmc, sopm, Method, MetricControl, MetricResult, Path, SecrecyConfig};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CliError {
    #[error("spec error: {0}")]
    Parse(String),
    #[error("numerical failure: {0}")]
    Numeric(Error),
    #[error("resource limit: {0}")]
    Resource(Error),
    #[error("i/o error: {0}")]
    Io(String),
    #[error("{0}")]
    GateFailed(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Resource { .. } => CliError::Resource(e),
            Error::InvalidParameter(msg) => CliError::Parse(msg),
            other => CliError::Numeric(other),
        }
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::GateFailed(_) | CliError::Io(_) => 1,
            CliError::Parse(_) => 2,
            CliError::Numeric(_) => 3,
            CliError::Resource(_) => 4,
        }
    }
}

/// Command-line overrides of spec values.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RunOptions {
    pub seed: Option<u64>,
    pub workers: Option<usize>,
    pub terms: Option<usize>,
}

/// A finished run: the table plus the metadata emitted with it.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub table: Table,
    pub spec_sha256: String,
    pub seed: u64,
    pub all_passed: bool,
}

impl Report {
    pub fn metadata(&self) -> Vec<(String, String)> {
        vec![
            ("tool".into(), format!("hstrn {}", env!("CARGO_PKG_VERSION"))),
            ("spec_sha256".into(), self.spec_sha256.clone()),
            ("seed".into(), self.seed.to_string()),
        ]
    }

    pub fn render(&self, format: Format) -> Result<String, CliError> {
        render::render(&self.table, &self.metadata(), format)
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

fn default_workers() -> usize {
    std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1)
}

/// Everything evaluated at one grid point of one curve.
#[derive(Debug, Clone, Default)]
struct PointResult {
    analytic: Vec<(MetricName, Method, MetricResult)>,
    mc: Option<SimEstimate>,
}

fn metric_value(metric: MetricName, cfg: &SecrecyConfig, control: &MetricControl, path: Path) -> crate::Result<MetricResult> {
    match metric {
        MetricName::Sopm => sopm(cfg, control, path),
        MetricName::Esmc => esmc(cfg, control, path),
        MetricName::Pnsmc => pnsmc(cfg, control, path),
    }
}

fn mc_value(metric: MetricName, e: &SimEstimate) -> (f64, f64) {
    match metric {
        MetricName::Sopm => (e.sopm, e.se_sopm),
        MetricName::Esmc => (e.esmc, e.se_esmc),
        MetricName::Pnsmc => (e.pnsmc, e.se_pnsmc),
    }
}

struct Job {
    curve: usize,
    point: Option<f64>,
    cfg: SecrecyConfig,
    control: MetricControl,
}

struct Prepared {
    spec: ExperimentSpec,
    jobs: Vec<Job>,
    seed: u64,
    workers: usize,
}

fn prepare(text: &str, opts: &RunOptions) -> Result<Prepared, CliError> {
    let spec = ExperimentSpec::parse(text)?;
    let mut jobs = Vec::new();
    for (ci, curve) in spec.curves.iter().enumerate() {
        let control = curve.control(opts.terms)?;
        for point in curve.grid()? {
            jobs.push(Job { curve: ci, point, cfg: curve.config(point)?, control });
        }
    }
    let seed = opts.seed.or(spec.base.mc.seed).unwrap_or(spec::DEFAULT_SEED);
    let workers = opts.workers.or(spec.base.mc.workers).unwrap_or_else(default_workers).max(1);
    Ok(Prepared { spec, jobs, seed, workers })
}

/// Analytic values in a worker pool, then Monte-Carlo point by point (each
/// simulation is itself parallel). Results are kept in job order.
fn evaluate(p: &Prepared) -> Result<Vec<PointResult>, CliError> {
    let analytic: Vec<(MetricName, Method, Path)> = p
        .spec
        .metrics
        .iter()
        .flat_map(|&m| {
            p.spec.methods.iter().filter_map(move |&meth| match meth {
                Method::ClosedForm => Some((m, meth, Path::ClosedForm)),
                Method::Quadrature => Some((m, meth, Path::Quadrature)),
                Method::MonteCarlo => None,
            })
        })
        .collect();
    let slots: Mutex<Vec<Option<Result<PointResult, CliError>>>> = Mutex::new(vec![None; p.jobs.len()]);
    let next = AtomicUsize::new(0);
    std::thread::scope(|scope| {
        for _ in 0..p.workers.min(p.jobs.len()) {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                if i >= p.jobs.len() {
                    break;
                }
                let job = &p.jobs[i];
                let res = analytic
                    .iter()
                    .map(|&(m, meth, path)| Ok((m, meth, metric_value(m, &job.cfg, &job.control, path)?)))
                    .collect::<Result<Vec<_>, CliError>>()
                    .map(|analytic| PointResult { analytic, mc: None });
                slots.lock().expect("no worker panics while holding the lock")[i] = Some(res);
            });
        }
    });
    let mut out = slots
        .into_inner()
        .expect("workers joined")
        .into_iter()
        .map(|r| r.expect("every job ran"))
        .collect::<Result<Vec<_>, _>>()?;
    if p.spec.methods.contains(&Method::MonteCarlo) {
        for (job, res) in p.jobs.iter().zip(out.iter_mut()) {
            let curve = &p.spec.curves[job.curve];
            let plan = SimPlan {
                cfg: job.cfg,
                n_trials: curve.mc.trials.unwrap_or(spec::DEFAULT_TRIALS),
                seed: p.seed,
                mode: curve.sim_mode()?,
                workers: p.workers,
            };
            res.mc = Some(simulate(&plan)?);
        }
    }
    Ok(out)
}

fn leading_columns(p: &Prepared) -> Vec<String> {
    let mut cols = vec!["curve".to_string()];
    if let Some(sw) = &p.spec.base.sweep {
        cols.push(sw.column());
    }
    cols
}

fn leading_cells(p: &Prepared, job: &Job) -> Vec<Cell> {
    let mut cells = vec![Cell::Text(p.spec.curves[job.curve].label().to_string())];
    if p.spec.base.sweep.is_some() {
        cells.push(job.point.map(Cell::Num).unwrap_or(Cell::Empty));
    }
    cells
}

/// Evaluates every curve of a spec over its grid.
pub fn analyze(text: &str, opts: &RunOptions) -> Result<Report, CliError> {
    let p = prepare(text, opts)?;
    let results = evaluate(&p)?;
    let mut columns = leading_columns(&p);
    for m in &p.spec.metrics {
        for meth in &p.spec.methods {
            columns.push(format!("{}_{}", m.as_str(), meth));
            match meth {
                Method::MonteCarlo => columns.push(format!("{}_{}_se", m.as_str(), meth)),
                _ => {
                    columns.push(format!("{}_{}_terms_used", m.as_str(), meth));
                    columns.push(format!("{}_{}_tail_estimate", m.as_str(), meth));
                }
            }
        }
    }
    let mut rows = Vec::new();
    for (job, res) in p.jobs.iter().zip(&results) {
        let mut row = leading_cells(&p, job);
        for &m in &p.spec.metrics {
            for &meth in &p.spec.methods {
                if meth == Method::MonteCarlo {
                    let (v, se) = mc_value(m, res.mc.as_ref().expect("simulated"));
                    row.push(Cell::Num(v));
                    row.push(Cell::Num(se));
                } else {
                    let r = res.analytic.iter().find(|(mm, me, _)| *mm == m && *me == meth).expect("evaluated").2;
                    row.push(Cell::Num(r.value));
                    row.push(Cell::Int(r.terms_used as u64));
                    row.push(Cell::Num(r.tail_estimate));
                }
            }
        }
        rows.push(row);
    }
    Ok(Report { table: Table { columns, rows }, spec_sha256: sha256_hex(text.as_bytes()), seed: p.seed, all_passed: true })
}

/// Tolerance of a cross-method gate.
fn gate_tolerance(metric: MetricName, a: Method, b: Method, reference: f64, se: Option<f64>) -> f64 {
    match (a, b) {
        (Method::MonteCarlo, _) | (_, Method::MonteCarlo) => {
            let three_se = 3.0 * se.unwrap_or(0.0);
            match metric {
                MetricName::Esmc => three_se,
                _ => three_se.max(0.01),
            }
        }
        _ => 1e-3 * reference.abs() + 1e-12,
    }
}

/// Evaluates all requested methods and checks every pair against its gate.
pub fn compare(text: &str, opts: &RunOptions) -> Result<Report, CliError> {
    let p = prepare(text, opts)?;
    if p.spec.methods.len() < 2 {
        return Err(CliError::Parse("compare needs at least two methods".into()));
    }
    let results = evaluate(&p)?;
    let mut columns = leading_columns(&p);
    columns.extend(["metric", "method_a", "method_b", "value_a", "value_b", "abs_diff", "tolerance", "pass"].map(String::from));
    let mut rows = Vec::new();
    let mut all_passed = true;
    for (job, res) in p.jobs.iter().zip(&results) {
        for &m in &p.spec.metrics {
            let mut values: Vec<(Method, f64, Option<f64>)> = res
                .analytic
                .iter()
                .filter(|(mm, _, _)| *mm == m)
                .map(|(_, meth, r)| (*meth, r.value, None))
                .collect();
            if let Some(e) = &res.mc {
                let (v, se) = mc_value(m, e);
                values.push((Method::MonteCarlo, v, Some(se)));
            }
            values.sort_by_key(|v| v.0);
            for i in 0..values.len() {
                for j in i + 1..values.len() {
                    let (a, va, sa) = values[i];
                    let (b, vb, sb) = values[j];
                    let reference = if a == Method::MonteCarlo { vb } else { va };
                    let tol = gate_tolerance(m, a, b, reference, sa.or(sb));
                    let diff = (va - vb).abs();
                    let pass = diff <= tol;
                    all_passed &= pass;
                    let mut row = leading_cells(&p, job);
                    row.extend([
                        Cell::Text(m.as_str().into()),
                        Cell::Text(a.to_string()),
                        Cell::Text(b.to_string()),
                        Cell::Num(va),
                        Cell::Num(vb),
                        Cell::Num(diff),
                        Cell::Num(tol),
                        Cell::Text(if pass { "PASS" } else { "FAIL" }.into()),
                    ]);
                    rows.push(row);
                }
            }
        }
    }
    Ok(Report { table: Table { columns, rows }, spec_sha256: sha256_hex(text.as_bytes()), seed: p.seed, all_passed })
}

/// The shadowing table as a [`Table`].
pub fn presets() -> Table {
    Table {
        columns: ["case", "p_s", "m_s", "xi_s", "mu_loo", "sqrt_d0"].map(String::from).to_vec(),
        rows: TABLE1
            .iter()
            .map(|r| {
                vec![
                    Cell::Int(r.case as u64),
                    Cell::Exact(r.shadowing.p_s),
                    Cell::Exact(r.shadowing.m_s),
                    Cell::Exact(r.shadowing.xi_s),
                    Cell::Exact(r.mu_loo),
                    Cell::Exact(r.sqrt_d0),
                ]
            })
            .collect(),
    }
}

/// Loo → Shadowed-Rician conversion as a one-row [`Table`].
pub fn loo(mu: f64, d0: f64, p_s: f64) -> Result<Table, CliError> {
    let sh = loo_to_sr(LooParams { mu_loo: mu, d0 }, p_s)?;
    Ok(Table {
        columns: ["p_s", "m_s", "xi_s"].map(String::from).to_vec(),
        rows: vec![vec![Cell::Num(sh.p_s), Cell::Num(sh.m_s), Cell::Num(sh.xi_s)]],
    })
}
