//! Experiment spec files.
//!
//! A spec is TOML. Top-level keys pick the metrics and methods; sections
//! set the channel, topology and simulation parameters; an optional
//! `[sweep]` names one swept variable; each `[[curves]]` entry is a labelled
//! partial spec deep-merged over the base. The grammar is documented in the
//! README.

use serde::Deserialize;

use super::CliError;
use crate::channels::{db_to_linear, shadowing_preset, AlphaMuParams, Shadowing, SrParams};
use crate::mc::SimMode;
use crate::metrics::{IntegralMode, Method, MetricControl, SecrecyConfig};
use crate::orderstats::{LinkPair, Topology};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MetricName {
    Sopm,
    Esmc,
    Pnsmc,
}

impl MetricName {
    pub fn as_str(&self) -> &'static str {
        match self {
            MetricName::Sopm => "sopm",
            MetricName::Esmc => "esmc",
            MetricName::Pnsmc => "pnsmc",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepVar {
    RhoB,
    RhoS,
    RhoE,
    PhiC,
}

impl SweepVar {
    pub fn as_str(&self) -> &'static str {
        match self {
            SweepVar::RhoB => "rho_b",
            SweepVar::RhoS => "rho_s",
            SweepVar::RhoE => "rho_e",
            SweepVar::PhiC => "phi_c",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Unit {
    #[default]
    Db,
    Linear,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    pub variable: SweepVar,
    pub start: Option<f64>,
    pub stop: Option<f64>,
    pub step: Option<f64>,
    pub values: Option<Vec<f64>>,
    #[serde(default)]
    pub unit: Unit,
}

impl SweepSpec {
    pub fn grid(&self) -> Result<Vec<f64>, CliError> {
        let grid = match (&self.values, self.start, self.stop, self.step) {
            (Some(v), None, None, None) => v.clone(),
            (None, Some(a), Some(b), _) if a == b => vec![a],
            (None, Some(a), Some(b), Some(s)) => {
                if !(s > 0.0) || !(b > a) {
                    return Err(CliError::Parse("sweep needs step > 0 and stop > start".into()));
                }
                let n = ((b - a) / s + 1e-9).floor() as usize;
                if n > 100_000 {
                    return Err(CliError::Parse(format!("sweep of {} points is too long", n + 1)));
                }
                (0..=n).map(|i| a + i as f64 * s).collect()
            }
            _ => return Err(CliError::Parse("sweep needs either `values` or `start`/`stop`/`step`".into())),
        };
        if grid.is_empty() {
            return Err(CliError::Parse("sweep grid is empty".into()));
        }
        if grid.iter().any(|v| !v.is_finite()) || grid.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(CliError::Parse("sweep grid must be finite and strictly increasing".into()));
        }
        Ok(grid)
    }

    /// Column header of the swept value.
    pub fn column(&self) -> String {
        match (self.variable, self.unit) {
            (SweepVar::PhiC, _) | (_, Unit::Linear) => self.variable.as_str().to_string(),
            (_, Unit::Db) => format!("{}_db", self.variable.as_str()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SatelliteSpec {
    pub case: Option<u8>,
    pub p_s: Option<f64>,
    pub m_s: Option<f64>,
    pub xi_s: Option<f64>,
    #[serde(default = "default_rho_db")]
    pub rho_s_db: f64,
}

impl Default for SatelliteSpec {
    fn default() -> Self {
        Self { case: None, p_s: None, m_s: None, xi_s: None, rho_s_db: default_rho_db() }
    }
}

impl SatelliteSpec {
    fn shadowing(&self) -> Result<Shadowing, CliError> {
        match (self.case, self.p_s, self.m_s, self.xi_s) {
            (Some(c), None, None, None) => Ok(shadowing_preset(c)?),
            (None, None, None, None) => Ok(shadowing_preset(DEFAULT_CASE)?),
            (None, Some(p_s), Some(m_s), Some(xi_s)) => Ok(Shadowing { p_s, m_s, xi_s }),
            _ => Err(CliError::Parse("[satellite] takes either `case` or all of `p_s`, `m_s`, `xi_s`".into())),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HopSpec {
    #[serde(default = "default_alpha")]
    pub alpha: f64,
    #[serde(default = "default_mu")]
    pub mu: f64,
    pub rho_db: Option<f64>,
}

impl Default for HopSpec {
    fn default() -> Self {
        Self { alpha: default_alpha(), mu: default_mu(), rho_db: None }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TopologySpec {
    #[serde(default = "default_count")]
    pub n: u32,
    #[serde(default = "default_count")]
    pub p: u32,
    #[serde(default = "default_count")]
    pub q: u32,
}

impl Default for TopologySpec {
    fn default() -> Self {
        Self { n: default_count(), p: default_count(), q: default_count() }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SecrecySpec {
    #[serde(default = "default_phi_c")]
    pub phi_c: f64,
}

impl Default for SecrecySpec {
    fn default() -> Self {
        Self { phi_c: default_phi_c() }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct McSpec {
    pub trials: Option<u64>,
    pub seed: Option<u64>,
    pub workers: Option<usize>,
    pub mode: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct SeriesSpec {
    pub terms: Option<usize>,
    pub cap: Option<usize>,
    pub tol: Option<f64>,
    pub comp_cap: Option<usize>,
    /// `quadrature` or `meijer_g`.
    pub integrals: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct OutputSpec {
    pub path: Option<String>,
    pub format: Option<String>,
}

/// One fully merged curve of a spec.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub label: Option<String>,
    pub metric: Option<MetricName>,
    pub metrics: Option<Vec<MetricName>>,
    pub methods: Vec<String>,
    pub sweep: Option<SweepSpec>,
    #[serde(default)]
    pub satellite: SatelliteSpec,
    #[serde(default)]
    pub user: HopSpec,
    #[serde(default)]
    pub eavesdropper: HopSpec,
    #[serde(default)]
    pub topology: TopologySpec,
    #[serde(default)]
    pub secrecy: SecrecySpec,
    #[serde(default)]
    pub mc: McSpec,
    #[serde(default)]
    pub series: SeriesSpec,
    #[serde(default)]
    pub output: OutputSpec,
}

pub const DEFAULT_CASE: u8 = 2;
pub const DEFAULT_TRIALS: u64 = 100_000;
pub const DEFAULT_SEED: u64 = 1;

fn default_rho_db() -> f64 {
    10.0
}
fn default_alpha() -> f64 {
    2.0
}
fn default_mu() -> f64 {
    1.0
}
fn default_count() -> u32 {
    5
}
fn default_phi_c() -> f64 {
    0.5
}
const DEFAULT_RHO_B_DB: f64 = 10.0;
const DEFAULT_RHO_E_DB: f64 = -10.0;

/// A parsed spec: merged curves sharing the base's metrics and methods.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentSpec {
    pub metrics: Vec<MetricName>,
    pub methods: Vec<Method>,
    pub curves: Vec<Scenario>,
    pub base: Scenario,
}

fn merge(base: &mut toml::Table, over: &toml::Table) {
    for (k, v) in over {
        match (base.get_mut(k), v) {
            (Some(toml::Value::Table(b)), toml::Value::Table(o)) => merge(b, o),
            _ => {
                base.insert(k.clone(), v.clone());
            }
        }
    }
}

fn parse_scenario(t: toml::Table) -> Result<Scenario, CliError> {
    toml::Value::Table(t).try_into().map_err(|e: toml::de::Error| CliError::Parse(e.to_string()))
}

impl ExperimentSpec {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut table: toml::Table = text.parse().map_err(|e: toml::de::Error| CliError::Parse(e.to_string()))?;
        let curves = match table.remove("curves") {
            None => Vec::new(),
            Some(toml::Value::Array(items)) => items
                .into_iter()
                .map(|v| match v {
                    toml::Value::Table(t) => Ok(t),
                    _ => Err(CliError::Parse("each [[curves]] entry must be a table".into())),
                })
                .collect::<Result<Vec<_>, _>>()?,
            Some(_) => return Err(CliError::Parse("`curves` must be an array of tables".into())),
        };
        let base = parse_scenario(table.clone())?;
        let metrics = match (&base.metric, &base.metrics) {
            (Some(m), None) => vec![*m],
            (None, Some(ms)) if !ms.is_empty() => ms.clone(),
            _ => return Err(CliError::Parse("give exactly one of `metric` or a non-empty `metrics`".into())),
        };
        let methods = base
            .methods
            .iter()
            .map(|m| m.parse::<Method>().map_err(|e| CliError::Parse(e.to_string())))
            .collect::<Result<Vec<_>, _>>()?;
        if methods.is_empty() {
            return Err(CliError::Parse("`methods` must name at least one method".into()));
        }
        let mut merged = Vec::new();
        for (i, over) in curves.iter().enumerate() {
            for key in ["metric", "metrics", "methods", "output", "curves"] {
                if over.contains_key(key) {
                    return Err(CliError::Parse(format!("curve {} may not override `{key}`", i + 1)));
                }
            }
            let mut t = table.clone();
            merge(&mut t, over);
            let mut s = parse_scenario(t)?;
            if s.label.is_none() || s.label == base.label {
                s.label = Some(format!("curve{}", i + 1));
            }
            merged.push(s);
        }
        if merged.is_empty() {
            let mut s = base.clone();
            s.label.get_or_insert_with(|| "base".into());
            merged.push(s);
        }
        for s in &merged {
            if let Some(sw) = &s.sweep {
                sw.grid()?;
            }
            s.config(None)?;
        }
        Ok(Self { metrics, methods, curves: merged, base })
    }
}

impl Scenario {
    pub fn label(&self) -> &str {
        self.label.as_deref().unwrap_or("base")
    }

    /// Grid of this curve; a spec without `[sweep]` is a single point.
    pub fn grid(&self) -> Result<Vec<Option<f64>>, CliError> {
        match &self.sweep {
            Some(s) => Ok(s.grid()?.into_iter().map(Some).collect()),
            None => Ok(vec![None]),
        }
    }

    /// Network configuration with the sweep variable set to `point`.
    pub fn config(&self, point: Option<f64>) -> Result<SecrecyConfig, CliError> {
        let mut rho_s_db = self.satellite.rho_s_db;
        let mut rho_b_db = self.user.rho_db.unwrap_or(DEFAULT_RHO_B_DB);
        let mut rho_e_db = self.eavesdropper.rho_db.unwrap_or(DEFAULT_RHO_E_DB);
        let mut phi_c = self.secrecy.phi_c;
        if let (Some(sw), Some(v)) = (&self.sweep, point) {
            let db = match sw.unit {
                Unit::Db => v,
                Unit::Linear if sw.variable != SweepVar::PhiC => {
                    if !(v > 0.0) {
                        return Err(CliError::Parse(format!("linear SNR sweep values must be > 0, got {v}")));
                    }
                    10.0 * v.log10()
                }
                Unit::Linear => v,
            };
            match sw.variable {
                SweepVar::RhoB => rho_b_db = db,
                SweepVar::RhoS => rho_s_db = db,
                SweepVar::RhoE => rho_e_db = db,
                SweepVar::PhiC => phi_c = v,
            }
        }
        let sr = SrParams::from_shadowing(self.satellite.shadowing()?, db_to_linear(rho_s_db))?;
        let cfg = SecrecyConfig {
            user_link: LinkPair::user(sr, AlphaMuParams::new(self.user.alpha, self.user.mu, db_to_linear(rho_b_db))?),
            eve_link: LinkPair::eavesdropper(
                sr,
                AlphaMuParams::new(self.eavesdropper.alpha, self.eavesdropper.mu, db_to_linear(rho_e_db))?,
            ),
            topo: Topology::new(self.topology.n, self.topology.p, self.topology.q)?,
            phi_c,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn control(&self, terms_override: Option<usize>) -> Result<MetricControl, CliError> {
        let mut c = MetricControl::default();
        if let Some(t) = terms_override.or(self.series.terms) {
            c.series = c.series.with_terms(t);
        }
        if let Some(cap) = self.series.cap {
            c.series.t_cap = cap.max(c.series.t1_max);
        }
        if let Some(tol) = self.series.tol {
            c.series.tol = tol;
        }
        if let Some(cc) = self.series.comp_cap {
            c.series.comp_cap = cc;
        }
        c.integrals = match self.series.integrals.as_deref() {
            None | Some("quadrature") => IntegralMode::Quadrature,
            Some("meijer_g") => IntegralMode::MeijerG,
            Some(other) => return Err(CliError::Parse(format!("unknown integral mode {other:?}"))),
        };
        c.series.validate()?;
        Ok(c)
    }

    pub fn sim_mode(&self) -> Result<SimMode, CliError> {
        match &self.mc.mode {
            None => Ok(SimMode::PaperIndependent),
            Some(m) => m.parse().map_err(|e: crate::Error| CliError::Parse(e.to_string())),
        }
    }
}
