use super::{MetricControl, MetricResult, Method, SecrecyConfig};
use crate::error::Result;
use crate::orderstats::OrderStat;
use crate::quadrature::{integrate_from, integrate_semi_infinite};

fn diagnostics(min: &OrderStat, max: &OrderStat) -> f64 {
    min.dualhop().sr_series().tail() + max.dualhop().sr_series().tail()
}

/// `1 - ∫₀^∞ P(ζ_min > φ2 (1 + y) - 1) f_max(y) dy` with the order-statistic
/// CCDF in closed power form.
pub fn sopm_quadrature(cfg: &SecrecyConfig, control: &MetricControl) -> Result<MetricResult> {
    let (min, max) = cfg.order_stats(&control.series)?;
    let (phi1, phi2) = (cfg.phi1(), cfg.phi2());
    let scale = max.scale().min(min.scale() / phi2);
    let est = integrate_semi_infinite(|y| min.ccdf(phi1 + phi2 * y) * max.pdf(y), scale, control.tol)?;
    MetricResult::analytic(1.0 - est.value, Method::Quadrature, est.evaluations, diagnostics(&min, &max), 0)
        .into_probability("SOPM")
}

/// SOPM with the inner tail probability also integrated numerically, at a
/// tolerance ten times tighter than the outer one.
pub fn sopm_nested_quadrature(cfg: &SecrecyConfig, control: &MetricControl) -> Result<MetricResult> {
    let (min, max) = cfg.order_stats(&control.series)?;
    let (phi1, phi2) = (cfg.phi1(), cfg.phi2());
    let inner_tol = control.tol.tighter();
    let scale = max.scale().min(min.scale() / phi2);
    let inner = |w: f64| -> f64 {
        integrate_from(|x| min.pdf(x), w, min.scale(), inner_tol).map(|e| e.value).unwrap_or(f64::NAN)
    };
    let est = integrate_semi_infinite(|y| inner(phi1 + phi2 * y) * max.pdf(y), scale, control.tol)?;
    MetricResult::analytic(1.0 - est.value, Method::Quadrature, est.evaluations, diagnostics(&min, &max), 0)
        .into_probability("SOPM")
}

/// `∫ log2(1+x) f_min - ∫ log2(1+x) f_max`, returned raw.
pub fn esmc_quadrature(cfg: &SecrecyConfig, control: &MetricControl) -> Result<MetricResult> {
    let (min, max) = cfg.order_stats(&control.series)?;
    let u1 = min.expect(|x| x.ln_1p(), control.tol)?;
    let u2 = max.expect(|x| x.ln_1p(), control.tol)?;
    let raw = (u1.value - u2.value) / std::f64::consts::LN_2;
    Ok(MetricResult::analytic(raw, Method::Quadrature, u1.evaluations + u2.evaluations, diagnostics(&min, &max), 0))
}

/// `P(ζ_min > ζ_max) = ∫₀^∞ F_max(x) f_min(x) dx`.
pub fn pnsmc_direct(cfg: &SecrecyConfig, control: &MetricControl) -> Result<MetricResult> {
    let (min, max) = cfg.order_stats(&control.series)?;
    let est = min.expect(|x| max.cdf(x), control.tol)?;
    MetricResult::analytic(est.value, Method::Quadrature, est.evaluations, diagnostics(&min, &max), 0)
        .into_probability("PNSMC")
}
