use super::series::{GenGammaSum, SeriesPdf, TermTables};
use super::{LinkPair, SeriesControl, Topology};
use crate::channels::{alphamu_ccdf, alphamu_pdf, AlphaMuParams, SrSeries};
use crate::error::{invalid, Result};
use crate::quadrature::{integrate_semi_infinite, Estimate, Tolerance};
use crate::specfun::ln_gamma;

/// One decode-and-forward relay path: `ξ_sb = min(ξ_sr, ξ_r)`.
#[derive(Debug, Clone, PartialEq)]
pub struct DualHop {
    link: LinkPair,
    sr: SrSeries,
}

impl DualHop {
    pub fn new(link: &LinkPair, control: &SeriesControl) -> Result<Self> {
        control.validate()?;
        link.validate()?;
        let sr = SrSeries::with_start(&link.sr, link.start_terms(control), control)?;
        Ok(Self { link: *link, sr })
    }

    pub fn link(&self) -> &LinkPair {
        &self.link
    }

    pub fn sr_series(&self) -> &SrSeries {
        &self.sr
    }

    pub fn hop2(&self) -> &AlphaMuParams {
        &self.link.hop2
    }

    pub fn ccdf(&self, xi: f64) -> f64 {
        if xi <= 0.0 {
            return self.sr.ccdf(0.0);
        }
        self.sr.ccdf(xi) * alphamu_ccdf(xi, &self.link.hop2)
    }

    pub fn cdf(&self, xi: f64) -> f64 {
        1.0 - self.ccdf(xi)
    }

    pub fn pdf(&self, xi: f64) -> f64 {
        if xi < 0.0 {
            return 0.0;
        }
        let h = &self.link.hop2;
        self.sr.pdf(xi) * alphamu_ccdf(xi, h) + self.sr.ccdf(xi) * alphamu_pdf(xi, h)
    }

    /// A length scale of the distribution, used to place quadrature cuts.
    pub fn scale(&self) -> f64 {
        let h = &self.link.hop2;
        let am_mean = h.rho * (ln_gamma(h.mu + 2.0 / h.alpha).unwrap() - ln_gamma(h.mu).unwrap()).exp()
            / h.mu.powf(2.0 / h.alpha);
        1.0 / (1.0 / self.link.sr.mean() + 1.0 / am_mean)
    }
}

/// Which order statistic of the dual-hop SNR is described.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OrderKind {
    DualHop,
    /// Largest of `n` independent relay paths.
    BestRelay { n: u32 },
    /// Smallest over `p` users of each user's best of `n` relays.
    MulticastMin { n: u32, p: u32 },
    /// Largest over `q` eavesdroppers of each one's best of `n` relays.
    EavesMax { n: u32, q: u32 },
}

impl OrderKind {
    fn validate(&self) -> Result<()> {
        let bad = match *self {
            OrderKind::DualHop => false,
            OrderKind::BestRelay { n } => n == 0,
            OrderKind::MulticastMin { n, p } => n == 0 || p == 0,
            OrderKind::EavesMax { n, q } => n == 0 || q == 0,
        };
        if bad {
            return Err(invalid(format!("order statistic counts must be >= 1: {self:?}")));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OrderStat {
    hop: DualHop,
    kind: OrderKind,
}

/// `exp(k · ln_f)` with `0 · ln 0` read as 1.
#[inline]
fn pow_ln(ln_f: f64, k: f64) -> f64 {
    if k == 0.0 { 1.0 } else { (k * ln_f).exp() }
}

impl OrderStat {
    pub fn new(link: &LinkPair, kind: OrderKind, control: &SeriesControl) -> Result<Self> {
        kind.validate()?;
        Ok(Self { hop: DualHop::new(link, control)?, kind })
    }

    pub fn from_dualhop(hop: DualHop, kind: OrderKind) -> Result<Self> {
        kind.validate()?;
        Ok(Self { hop, kind })
    }

    pub fn multicast_min(link: &LinkPair, topo: &Topology, control: &SeriesControl) -> Result<Self> {
        topo.validate()?;
        Self::new(link, OrderKind::MulticastMin { n: topo.n, p: topo.p }, control)
    }

    pub fn eaves_max(link: &LinkPair, topo: &Topology, control: &SeriesControl) -> Result<Self> {
        topo.validate()?;
        Self::new(link, OrderKind::EavesMax { n: topo.n, q: topo.q }, control)
    }

    pub fn kind(&self) -> OrderKind {
        self.kind
    }

    pub fn dualhop(&self) -> &DualHop {
        &self.hop
    }

    /// `(F, 1 - F, f)` each computed without cancellation.
    pub fn eval_all(&self, xi: f64) -> (f64, f64, f64) {
        let s = self.hop.ccdf(xi);
        let f_sb = self.hop.pdf(xi);
        let ln_f = (-s).ln_1p();
        match self.kind {
            OrderKind::DualHop => (1.0 - s, s, f_sb),
            OrderKind::BestRelay { n } => {
                let n = n as f64;
                (pow_ln(ln_f, n), -(n * ln_f).exp_m1(), n * pow_ln(ln_f, n - 1.0) * f_sb)
            }
            OrderKind::MulticastMin { n, p } => {
                let (n, p) = (n as f64, p as f64);
                let ccdf_db = -(n * ln_f).exp_m1();
                let f_db = n * pow_ln(ln_f, n - 1.0) * f_sb;
                let ccdf = ccdf_db.powf(p);
                (1.0 - ccdf, ccdf, p * f_db * pow_ln(ccdf_db.ln(), p - 1.0))
            }
            OrderKind::EavesMax { n, q } => {
                let k = (n * q) as f64;
                (pow_ln(ln_f, k), -(k * ln_f).exp_m1(), k * pow_ln(ln_f, k - 1.0) * f_sb)
            }
        }
    }

    pub fn cdf(&self, xi: f64) -> f64 {
        if xi <= 0.0 {
            return 0.0;
        }
        self.eval_all(xi).0
    }

    pub fn ccdf(&self, xi: f64) -> f64 {
        if xi <= 0.0 {
            return 1.0;
        }
        self.eval_all(xi).1
    }

    pub fn pdf(&self, xi: f64) -> f64 {
        if xi < 0.0 {
            return 0.0;
        }
        self.eval_all(xi).2
    }

    /// Length scale for quadrature cuts.
    pub fn scale(&self) -> f64 {
        self.hop.scale()
    }

    /// Outer coefficients `(c_i, K_i)` such that the density equals
    /// `Σ_i c_i F_sb^{K_i} f_sb`.
    fn pdf_outer(&self) -> Vec<(f64, u32)> {
        use crate::specfun::binomial;
        match self.kind {
            OrderKind::DualHop => vec![(1.0, 0)],
            OrderKind::BestRelay { n } => vec![(n as f64, n - 1)],
            OrderKind::MulticastMin { n, p } => (0..p)
                .map(|t3| {
                    let sign = if t3 % 2 == 0 { 1.0 } else { -1.0 };
                    ((p * n) as f64 * binomial(p - 1, t3) * sign, n * (t3 + 1) - 1)
                })
                .collect(),
            OrderKind::EavesMax { n, q } => vec![((n * q) as f64, n * q - 1)],
        }
    }

    /// Outer coefficients of the CDF as `Σ_i c_i F_sb^{K_i}`.
    fn cdf_outer(&self) -> Vec<(f64, u32)> {
        use crate::specfun::binomial;
        match self.kind {
            OrderKind::DualHop => vec![(1.0, 1)],
            OrderKind::BestRelay { n } => vec![(1.0, n)],
            // 1 - (1 - F_sb^N)^P
            OrderKind::MulticastMin { n, p } => (1..=p)
                .map(|t| {
                    let sign = if t % 2 == 1 { 1.0 } else { -1.0 };
                    (binomial(p, t) * sign, n * t)
                })
                .collect(),
            OrderKind::EavesMax { n, q } => vec![(1.0, n * q)],
        }
    }

    /// Tables for the expanded series; the largest power of `F_sb` needed by
    /// either the CDF or the PDF decides the composition depth.
    pub fn term_tables(&self, control: &SeriesControl) -> Result<TermTables> {
        let k_pdf = self.pdf_outer().iter().map(|o| o.1).max().unwrap_or(0);
        let k_cdf = self.cdf_outer().iter().map(|o| o.1).max().unwrap_or(0);
        TermTables::build(&self.hop, k_pdf.max(k_cdf), control)
    }

    /// Paper-style expanded density.
    pub fn series_pdf(&self, control: &SeriesControl) -> Result<SeriesPdf> {
        let k = self.pdf_outer().iter().map(|o| o.1).max().unwrap_or(0);
        let tables = TermTables::build(&self.hop, k, control)?;
        Ok(SeriesPdf { pdf: tables.density(&self.pdf_outer()), terms_used: tables.terms_used(), tail: tables.tail() })
    }

    /// Expanded CDF.
    pub fn series_cdf(&self, control: &SeriesControl) -> Result<GenGammaSum> {
        let k = self.cdf_outer().iter().map(|o| o.1).max().unwrap_or(0);
        let tables = TermTables::build(&self.hop, k, control)?;
        Ok(tables.power_sum(&self.cdf_outer()))
    }

    /// `∫₀^∞ g(ξ) f(ξ) dξ` by adaptive quadrature.
    pub fn expect<G: Fn(f64) -> f64>(&self, g: G, tol: Tolerance) -> Result<Estimate> {
        integrate_semi_infinite(|x| g(x) * self.pdf(x), self.scale(), tol)
    }
}
