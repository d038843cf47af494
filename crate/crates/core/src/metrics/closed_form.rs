use std::collections::{BTreeMap, HashMap};

use super::integrals::{ln_gen_gamma_integral, ln_log_gen_gamma_integral, TermValue};
use super::{MetricControl, MetricResult, Method, SecrecyConfig};
use crate::error::{Error, Result};
use crate::orderstats::SeriesPdf;
use crate::specfun::{binomial, ln_factorial};

type Key = (u64, u64, u64);

/// Memoized term integrals; many terms share `(r, c, g)`.
struct TermCache<F> {
    eval: F,
    seen: HashMap<Key, f64>,
    fallbacks: usize,
}

impl<F: FnMut(f64, f64, f64) -> Result<TermValue>> TermCache<F> {
    fn new(eval: F) -> Self {
        Self { eval, seen: HashMap::new(), fallbacks: 0 }
    }

    fn ln_value(&mut self, r: f64, c: f64, g: f64) -> Result<f64> {
        let key = (r.to_bits(), c.to_bits(), g.to_bits());
        if let Some(&v) = self.seen.get(&key) {
            return Ok(v);
        }
        let t = (self.eval)(r, c, g)?;
        self.fallbacks += t.fallback as usize;
        self.seen.insert(key, t.ln_value);
        Ok(t.ln_value)
    }
}

/// Closed-form SOPM.
///
/// The user-side density is a sum of `c x^r e^{-A x}` terms once `α_b = 2`
/// folds both exponentials, so its tail past `w = φ1 + φ2 y` is
/// `c Γ(r+1, A w) / A^{r+1}`, an exponential times a polynomial in `y`. The
/// outer integral against each eavesdropper term `c_e y^{r_e} e^{-a_e y - b_e y^{α_e/2}}`
/// is then one generalized-gamma integral.
pub fn sopm_closed_form(cfg: &SecrecyConfig, control: &MetricControl) -> Result<MetricResult> {
    let (min, max) = cfg.order_stats(&control.series)?;
    if cfg.user_link.hop2.alpha != 2.0 {
        return Err(Error::Unsupported(format!(
            "closed-form SOPM needs alpha_b = 2, got {}",
            cfg.user_link.hop2.alpha
        )));
    }
    let user: SeriesPdf = min.series_pdf(&control.series)?;
    let eve: SeriesPdf = max.series_pdf(&control.series)?;
    let (phi1, phi2) = (cfg.phi1(), cfg.phi2());

    // y-polynomials per decay rate A, in ascending power of y
    let mut polys: BTreeMap<u64, Vec<f64>> = BTreeMap::new();
    for t in &user.pdf.terms {
        let a = t.a + t.b;
        let r = t.r.round() as u32;
        let poly = polys.entry(a.to_bits()).or_default();
        if poly.len() < r as usize + 1 {
            poly.resize(r as usize + 1, 0.0);
        }
        let ln_a = a.ln();
        let base = t.c.abs().ln() + ln_factorial(r) - a * phi1;
        let sign = t.c.signum();
        for k in 0..=r {
            let ln_k = base - ln_factorial(k) - (r + 1 - k) as f64 * ln_a;
            if phi1 == 0.0 {
                poly[k as usize] += sign * (ln_k + k as f64 * phi2.ln()).exp();
                continue;
            }
            for j in 0..=k {
                let ln = ln_k + binomial(k, j).ln() + (k - j) as f64 * phi1.ln() + j as f64 * phi2.ln();
                poly[j as usize] += sign * ln.exp();
            }
        }
    }

    let alpha_e = eve.pdf.alpha;
    let tol = control.tol;
    let mode = control.integrals;
    let mut cache = TermCache::new(|r, c, g| ln_gen_gamma_integral(r, c, g, alpha_e, mode, tol));
    let mut survive = 0.0;
    for (a_bits, poly) in &polys {
        let a = f64::from_bits(*a_bits);
        for (j, &pj) in poly.iter().enumerate() {
            if pj == 0.0 {
                continue;
            }
            for e in &eve.pdf.terms {
                let ln_i = cache.ln_value(j as f64 + e.r, a * phi2 + e.a, e.b)?;
                survive += pj * e.c * ln_i.exp();
            }
        }
    }
    MetricResult::analytic(
        1.0 - survive,
        Method::ClosedForm,
        user.terms_used + eve.terms_used,
        user.tail + eve.tail,
        cache.fallbacks,
    )
    .into_probability("SOPM")
}

/// `Σ c ∫ ln(1+x) x^r e^{-a x - b x^{α/2}} dx / ln 2` over the terms of a series density.
fn capacity(series: &SeriesPdf, control: &MetricControl) -> Result<(f64, usize)> {
    let alpha = series.pdf.alpha;
    let (mode, tol) = (control.integrals, control.tol);
    let mut cache = TermCache::new(|r, c, g| ln_log_gen_gamma_integral(r, c, g, alpha, mode, tol));
    let mut sum = 0.0;
    for t in &series.pdf.terms {
        sum += t.c * cache.ln_value(t.r, t.a, t.b)?.exp();
    }
    Ok((sum / std::f64::consts::LN_2, cache.fallbacks))
}

/// Closed-form ESMC `Υ1 - Υ2`, returned raw.
pub fn esmc_closed_form(cfg: &SecrecyConfig, control: &MetricControl) -> Result<MetricResult> {
    let (min, max) = cfg.order_stats(&control.series)?;
    let user = min.series_pdf(&control.series)?;
    let eve = max.series_pdf(&control.series)?;
    let (u1, f1) = capacity(&user, control)?;
    let (u2, f2) = capacity(&eve, control)?;
    Ok(MetricResult::analytic(
        u1 - u2,
        Method::ClosedForm,
        user.terms_used + eve.terms_used,
        user.tail + eve.tail,
        f1 + f2,
    ))
}
