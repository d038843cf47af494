//! Secrecy metrics of the multicast network: secrecy outage probability
//! (SOPM), ergodic secrecy multicast capacity (ESMC) and probability of
//! non-zero secrecy multicast capacity (PNSMC).

mod closed_form;
pub mod integrals;
mod quadrature_path;

pub use closed_form::{esmc_closed_form, sopm_closed_form};
pub use integrals::IntegralMode;
pub use quadrature_path::{esmc_quadrature, pnsmc_direct, sopm_nested_quadrature, sopm_quadrature};

use crate::channels::SeriesControl;
use crate::error::{invalid, Error, Result};
use crate::orderstats::{LinkPair, OrderStat, Role, Topology};
use crate::quadrature::Tolerance;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Method {
    ClosedForm,
    Quadrature,
    MonteCarlo,
}

impl Method {
    pub fn as_str(&self) -> &'static str {
        match self {
            Method::ClosedForm => "closed_form",
            Method::Quadrature => "quadrature",
            Method::MonteCarlo => "monte_carlo",
        }
    }
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Method {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "closed_form" => Ok(Method::ClosedForm),
            "quadrature" => Ok(Method::Quadrature),
            "monte_carlo" => Ok(Method::MonteCarlo),
            _ => Err(invalid(format!("unknown method {s:?}"))),
        }
    }
}

/// Analytical evaluation path of a metric.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Path {
    ClosedForm,
    Quadrature,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricResult {
    /// Reported value; probabilities are clamped to [0, 1].
    pub value: f64,
    /// Value before clamping.
    pub raw_value: f64,
    pub method: Method,
    pub terms_used: usize,
    pub tail_estimate: f64,
    pub std_error: Option<f64>,
    /// Closed-form term integrals answered by quadrature instead of Meijer-G.
    pub fallbacks: usize,
}

impl MetricResult {
    pub(crate) fn analytic(raw: f64, method: Method, terms_used: usize, tail: f64, fallbacks: usize) -> Self {
        Self { value: raw, raw_value: raw, method, terms_used, tail_estimate: tail, std_error: None, fallbacks }
    }

    /// Checks a probability against `[-tol, 1 + tol]` and clamps it.
    pub(crate) fn into_probability(mut self, what: &str) -> Result<Self> {
        const TOL: f64 = 1e-6;
        if !(self.raw_value >= -TOL && self.raw_value <= 1.0 + TOL) {
            return Err(Error::OutOfBounds { what: what.into(), value: self.raw_value, lo: -TOL, hi: 1.0 + TOL });
        }
        self.value = self.raw_value.clamp(0.0, 1.0);
        Ok(self)
    }

    /// ESMC with negative values floored at zero.
    pub fn clamped_at_zero(mut self) -> Self {
        self.value = self.value.max(0.0);
        self
    }
}

/// Everything the metrics need: both link types, the counts and the
/// target secrecy rate `φ_c` in bits/s/Hz.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SecrecyConfig {
    pub user_link: LinkPair,
    pub eve_link: LinkPair,
    pub topo: Topology,
    pub phi_c: f64,
}

impl SecrecyConfig {
    pub fn validate(&self) -> Result<()> {
        self.user_link.validate()?;
        self.eve_link.validate()?;
        self.topo.validate()?;
        if self.user_link.role != Role::User || self.eve_link.role != Role::Eavesdropper {
            return Err(invalid("user_link and eve_link must carry the user and eavesdropper roles"));
        }
        if !(self.phi_c >= 0.0) || !self.phi_c.is_finite() {
            return Err(invalid(format!("target secrecy rate must be >= 0, got {}", self.phi_c)));
        }
        Ok(())
    }

    /// `φ2 = 2^{φ_c}`.
    pub fn phi2(&self) -> f64 {
        self.phi_c.exp2()
    }

    /// `φ1 = 2^{φ_c} - 1`.
    pub fn phi1(&self) -> f64 {
        (self.phi_c * std::f64::consts::LN_2).exp_m1()
    }

    pub fn with_phi_c(mut self, phi_c: f64) -> Self {
        self.phi_c = phi_c;
        self
    }

    pub(crate) fn order_stats(&self, control: &SeriesControl) -> Result<(OrderStat, OrderStat)> {
        self.validate()?;
        Ok((
            OrderStat::multicast_min(&self.user_link, &self.topo, control)?,
            OrderStat::eaves_max(&self.eve_link, &self.topo, control)?,
        ))
    }
}

/// Series truncation, quadrature tolerance and closed-form integral mode.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct MetricControl {
    pub series: SeriesControl,
    pub tol: Tolerance,
    pub integrals: IntegralMode,
}

pub fn sopm(cfg: &SecrecyConfig, control: &MetricControl, path: Path) -> Result<MetricResult> {
    match path {
        Path::ClosedForm => sopm_closed_form(cfg, control),
        Path::Quadrature => sopm_quadrature(cfg, control),
    }
}

pub fn esmc(cfg: &SecrecyConfig, control: &MetricControl, path: Path) -> Result<MetricResult> {
    match path {
        Path::ClosedForm => esmc_closed_form(cfg, control),
        Path::Quadrature => esmc_quadrature(cfg, control),
    }
}

/// `1 - SOPM` at zero target rate, through the same evaluation.
pub fn pnsmc(cfg: &SecrecyConfig, control: &MetricControl, path: Path) -> Result<MetricResult> {
    let s = sopm(&cfg.with_phi_c(0.0), control, path)?;
    let raw = 1.0 - s.raw_value;
    Ok(MetricResult { value: 1.0 - s.value, raw_value: raw, ..s })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channels::{db_to_linear, shadowing_preset, AlphaMuParams, SrParams};

    pub(crate) fn config(case: u8, rho_s_db: f64, rho_b_db: f64, rho_e_db: f64, n: u32, p: u32, q: u32, phi_c: f64) -> SecrecyConfig {
        let sr = SrParams::from_shadowing(shadowing_preset(case).unwrap(), db_to_linear(rho_s_db)).unwrap();
        SecrecyConfig {
            user_link: LinkPair::user(sr, AlphaMuParams::new(2.0, 1.0, db_to_linear(rho_b_db)).unwrap()),
            eve_link: LinkPair::eavesdropper(sr, AlphaMuParams::new(2.0, 1.0, db_to_linear(rho_e_db)).unwrap()),
            topo: Topology::new(n, p, q).unwrap(),
            phi_c,
        }
    }

    #[test]
    fn closed_form_and_quadrature_agree() {
        let cfg = config(2, 10.0, 5.0, -10.0, 2, 2, 2, 0.5);
        let c = MetricControl::default();
        let q = sopm(&cfg, &c, Path::Quadrature).unwrap();
        let f = sopm(&cfg, &c, Path::ClosedForm).unwrap();
        let nested = sopm_nested_quadrature(&cfg, &c).unwrap();
        assert!((q.value - f.value).abs() <= 1e-3 * q.value, "sopm quad {} closed {}", q.value, f.value);
        assert!((q.value - nested.value).abs() <= 1e-7, "nested {}", nested.value);
        let eq = esmc(&cfg, &c, Path::Quadrature).unwrap();
        let ef = esmc(&cfg, &c, Path::ClosedForm).unwrap();
        assert!((eq.value - ef.value).abs() <= 1e-3 * eq.value.abs(), "esmc quad {} closed {}", eq.value, ef.value);
    }

    #[test]
    fn pnsmc_identity_and_direct_form() {
        let cfg = config(2, 10.0, 10.0, -10.0, 2, 2, 2, 0.5);
        let c = MetricControl::default();
        let p = pnsmc(&cfg, &c, Path::Quadrature).unwrap();
        let s0 = sopm(&cfg.with_phi_c(0.0), &c, Path::Quadrature).unwrap();
        assert!((p.value + s0.value - 1.0).abs() <= 1e-12);
        let d = pnsmc_direct(&cfg, &c).unwrap();
        assert!((p.value - d.value).abs() < 1e-7, "{} vs {}", p.value, d.value);
    }

    #[test]
    fn symmetric_links() {
        let mut cfg = config(2, 10.0, 5.0, 5.0, 1, 1, 1, 0.0);
        cfg.eve_link.hop2 = cfg.user_link.hop2;
        let c = MetricControl::default();
        assert!((pnsmc(&cfg, &c, Path::Quadrature).unwrap().value - 0.5).abs() < 1e-6);
        assert!(esmc(&cfg, &c, Path::Quadrature).unwrap().value.abs() < 1e-9);
        let s = sopm(&cfg.with_phi_c(1e-9), &c, Path::Quadrature).unwrap();
        assert!((s.value - 0.5).abs() < 0.01);
    }

    #[test]
    fn unattainable_rate() {
        let cfg = config(2, 10.0, 10.0, -10.0, 2, 2, 2, 30.0);
        let s = sopm(&cfg, &MetricControl::default(), Path::Quadrature).unwrap();
        assert!(s.value >= 1.0 - 1e-6);
    }

    #[test]
    fn meijer_mode_closed_form() {
        let mut cfg = config(2, 10.0, 5.0, -10.0, 1, 2, 2, 0.5);
        cfg.eve_link.hop2 = AlphaMuParams::new(3.0, 1.0, db_to_linear(-10.0)).unwrap();
        let mut c = MetricControl::default();
        let q = sopm(&cfg, &c, Path::Quadrature).unwrap();
        c.integrals = IntegralMode::MeijerG;
        let f = sopm(&cfg, &c, Path::ClosedForm).unwrap();
        assert!((q.value - f.value).abs() <= 1e-3 * q.value, "quad {} meijer {} fallbacks {}", q.value, f.value, f.fallbacks);
    }
}
