//! Dual-hop links and their order statistics: best relay of `N`, weakest of
//! `P` users, strongest of `Q` eavesdroppers.
//!
//! Every distribution has a numeric form, which raises the dual-hop CDF to
//! the required powers directly, and a series form built from the
//! multinomial expansion in [`TermTables`]. The series form needs integer
//! `α` and `μ` on the second hop.

mod dualhop;
mod series;

pub use crate::channels::SeriesControl;
pub use dualhop::{DualHop, OrderKind, OrderStat};
pub use series::{GenGammaSum, GenGammaTerm, SeriesPdf, TermTables};

use crate::channels::{AlphaMuParams, SrParams};
use crate::error::{invalid, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Topology {
    pub n: u32,
    pub p: u32,
    pub q: u32,
}

impl Topology {
    pub fn new(n: u32, p: u32, q: u32) -> Result<Self> {
        let t = Self { n, p, q };
        t.validate()?;
        Ok(t)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 || self.p == 0 || self.q == 0 {
            return Err(invalid(format!("topology counts must be >= 1, got N={} P={} Q={}", self.n, self.p, self.q)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Role {
    User,
    Eavesdropper,
}

/// Satellite→relay hop plus relay→terminal hop.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkPair {
    pub sr: SrParams,
    pub hop2: AlphaMuParams,
    pub role: Role,
}

impl LinkPair {
    pub fn user(sr: SrParams, hop2: AlphaMuParams) -> Self {
        Self { sr, hop2, role: Role::User }
    }

    pub fn eavesdropper(sr: SrParams, hop2: AlphaMuParams) -> Self {
        Self { sr, hop2, role: Role::Eavesdropper }
    }

    pub fn validate(&self) -> Result<()> {
        self.sr.validate()?;
        self.hop2.validate()
    }

    /// Starting SR term count for this link's role.
    pub(crate) fn start_terms(&self, control: &SeriesControl) -> usize {
        match self.role {
            Role::User => control.t1_max,
            Role::Eavesdropper => control.t2_max,
        }
    }
}

/// Evaluation route for the distribution functions below.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EvalPath {
    Numeric,
    Series,
}

fn eval_pdf(stat: OrderStat, xi: f64, control: &SeriesControl, path: EvalPath) -> Result<f64> {
    match path {
        EvalPath::Numeric => Ok(stat.pdf(xi)),
        EvalPath::Series => Ok(stat.series_pdf(control)?.pdf.eval(xi)),
    }
}

fn eval_cdf(stat: OrderStat, xi: f64, control: &SeriesControl, path: EvalPath) -> Result<f64> {
    match path {
        EvalPath::Numeric => Ok(stat.cdf(xi)),
        EvalPath::Series => Ok(stat.series_cdf(control)?.eval(xi)),
    }
}

/// `F_sb(ξ) = 1 - P(ξ_sr > ξ) P(ξ_r > ξ)`.
pub fn dualhop_cdf(xi: f64, link: &LinkPair, control: &SeriesControl, path: EvalPath) -> Result<f64> {
    eval_cdf(OrderStat::new(link, OrderKind::DualHop, control)?, xi, control, path)
}

pub fn dualhop_pdf(xi: f64, link: &LinkPair, control: &SeriesControl, path: EvalPath) -> Result<f64> {
    eval_pdf(OrderStat::new(link, OrderKind::DualHop, control)?, xi, control, path)
}

/// `F_db = F_sb^N`.
pub fn bestrelay_cdf(xi: f64, link: &LinkPair, n: u32, control: &SeriesControl, path: EvalPath) -> Result<f64> {
    eval_cdf(OrderStat::new(link, OrderKind::BestRelay { n }, control)?, xi, control, path)
}

pub fn bestrelay_pdf(xi: f64, link: &LinkPair, n: u32, control: &SeriesControl, path: EvalPath) -> Result<f64> {
    eval_pdf(OrderStat::new(link, OrderKind::BestRelay { n }, control)?, xi, control, path)
}

/// `P f_db (1 - F_db)^{P-1}`: density of the weakest user's best-relay SNR.
pub fn multicast_min_pdf(xi: f64, link: &LinkPair, topo: &Topology, control: &SeriesControl, path: EvalPath) -> Result<f64> {
    eval_pdf(OrderStat::multicast_min(link, topo, control)?, xi, control, path)
}

pub fn multicast_min_cdf(xi: f64, link: &LinkPair, topo: &Topology, control: &SeriesControl, path: EvalPath) -> Result<f64> {
    eval_cdf(OrderStat::multicast_min(link, topo, control)?, xi, control, path)
}

/// `Q f_de F_de^{Q-1}`: density of the strongest eavesdropper's SNR.
pub fn eaves_max_pdf(xi: f64, link: &LinkPair, topo: &Topology, control: &SeriesControl, path: EvalPath) -> Result<f64> {
    eval_pdf(OrderStat::eaves_max(link, topo, control)?, xi, control, path)
}

pub fn eaves_max_cdf(xi: f64, link: &LinkPair, topo: &Topology, control: &SeriesControl, path: EvalPath) -> Result<f64> {
    eval_cdf(OrderStat::eaves_max(link, topo, control)?, xi, control, path)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channels::{db_to_linear, shadowing_preset};
    use crate::quadrature::{integrate_semi_infinite, Tolerance};

    fn link(case: u8, rho_s_db: f64, alpha: f64, mu: f64, rho_db: f64) -> LinkPair {
        let sr = SrParams::from_shadowing(shadowing_preset(case).unwrap(), db_to_linear(rho_s_db)).unwrap();
        LinkPair::user(sr, AlphaMuParams::new(alpha, mu, db_to_linear(rho_db)).unwrap())
    }

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs().max(1e-300)
    }

    #[test]
    fn dualhop_cdf_series_matches_product() {
        let l = link(2, 10.0, 2.0, 1.0, 10.0);
        let c = SeriesControl::default();
        let a = dualhop_cdf(1.5, &l, &c, EvalPath::Numeric).unwrap();
        let b = dualhop_cdf(1.5, &l, &c, EvalPath::Series).unwrap();
        assert!((a - b).abs() < 1e-12, "{a} {b}");
        assert!(dualhop_cdf(0.0, &l, &c, EvalPath::Numeric).unwrap().abs() < 1e-6);
    }

    #[test]
    fn multicast_min_series_matches_numeric() {
        let l = link(2, 10.0, 2.0, 1.0, 10.0);
        let topo = Topology::new(2, 2, 1).unwrap();
        let c = SeriesControl::default();
        for &x in &[0.05, 0.3, 0.8, 2.0, 5.0] {
            let a = multicast_min_pdf(x, &l, &topo, &c, EvalPath::Numeric).unwrap();
            let b = multicast_min_pdf(x, &l, &topo, &c, EvalPath::Series).unwrap();
            assert!(rel(b, a) < 1e-8, "x={x} numeric {a} series {b}");
        }
    }

    #[test]
    fn eaves_max_series_matches_numeric_fractional_powers() {
        let mut l = link(3, 10.0, 3.0, 2.0, -10.0);
        l.role = Role::Eavesdropper;
        let topo = Topology::new(2, 1, 2).unwrap();
        let c = SeriesControl::default();
        // the alternating expansion loses digits where F_se^{NQ} is tiny
        for &x in &[0.01, 0.05, 0.1, 0.3] {
            let a = eaves_max_pdf(x, &l, &topo, &c, EvalPath::Numeric).unwrap();
            let b = eaves_max_pdf(x, &l, &topo, &c, EvalPath::Series).unwrap();
            assert!(rel(b, a) < 1e-6, "x={x} numeric {a} series {b}");
        }
    }

    #[test]
    fn densities_normalize_and_match_cdf_slope() {
        let tol = Tolerance::new(1e-9, 1e-14);
        let c = SeriesControl::default();
        for kind in [
            OrderKind::DualHop,
            OrderKind::BestRelay { n: 3 },
            OrderKind::MulticastMin { n: 2, p: 3 },
            OrderKind::EavesMax { n: 2, q: 2 },
        ] {
            for l in [link(1, 0.0, 1.0, 1.0, 10.0), link(4, 10.0, 3.0, 2.0, 0.0)] {
                let s = OrderStat::new(&l, kind, &c).unwrap();
                let total = integrate_semi_infinite(|x| s.pdf(x), s.scale(), tol).unwrap().value;
                assert!((total - 1.0).abs() < 1e-6, "{kind:?} integrates to {total}");
                for &x in &[0.2 * s.scale(), s.scale(), 3.0 * s.scale()] {
                    let h = 1e-5 * x;
                    let fd = (s.cdf(x + h) - s.cdf(x - h)) / (2.0 * h);
                    assert!(rel(fd, s.pdf(x)) < 1e-5, "{kind:?} at {x}: fd {fd} pdf {}", s.pdf(x));
                }
            }
        }
    }

    #[test]
    fn unit_counts_reduce() {
        let l = link(2, 10.0, 2.0, 1.0, 10.0);
        let c = SeriesControl::default();
        let one = Topology::new(1, 1, 1).unwrap();
        for &x in &[0.3, 1.0] {
            let d = dualhop_pdf(x, &l, &c, EvalPath::Numeric).unwrap();
            assert_eq!(bestrelay_pdf(x, &l, 1, &c, EvalPath::Numeric).unwrap(), d);
            assert_eq!(multicast_min_pdf(x, &l, &one, &c, EvalPath::Numeric).unwrap(), d);
            assert_eq!(eaves_max_pdf(x, &l, &one, &c, EvalPath::Numeric).unwrap(), d);
        }
    }

    #[test]
    fn resource_cap_and_unsupported() {
        let l = link(2, 10.0, 2.0, 1.0, 10.0);
        let topo = Topology::new(5, 5, 5).unwrap();
        let c = SeriesControl::default();
        assert!(matches!(multicast_min_pdf(1.0, &l, &topo, &c, EvalPath::Series), Err(crate::Error::Resource { .. })));
        let l = link(2, 10.0, 2.5, 1.0, 10.0);
        assert!(matches!(dualhop_pdf(1.0, &l, &c, EvalPath::Series), Err(crate::Error::Unsupported(_))));
    }
}
