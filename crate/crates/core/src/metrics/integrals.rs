//! The two elementary integral families the closed forms reduce to:
//! `∫₀^∞ x^r e^{-c x - g x^{α/2}} dx` and the same with an extra `ln(1+x)`.

use crate::error::{Error, Result};
use crate::quadrature::{integrate_semi_infinite, Tolerance};
use crate::specfun::{gen_gamma_integral_meijer, ln_gamma, log_gen_gamma_integral_meijer};

/// How each closed-form term integral is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum IntegralMode {
    /// Elementary gamma when the exponentials fold, adaptive quadrature otherwise.
    #[default]
    Quadrature,
    /// Meijer-G contour evaluation, falling back to quadrature per term when
    /// the contour cannot be placed or does not converge.
    MeijerG,
}

/// Result of one term integral; `fallback` marks a Meijer-G request that
/// was answered by quadrature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TermValue {
    pub ln_value: f64,
    pub fallback: bool,
}

/// Location of the maximum of `r ln x - c x - g x^{α/2}` and a decay length
/// around it, for placing quadrature cuts.
fn peak_and_scale(r: f64, c: f64, g: f64, alpha: f64) -> (f64, f64) {
    let h = alpha / 2.0;
    // x where c x + g x^{α/2} = target, by bisection on a monotone function
    let solve = |target: f64, slope: bool| {
        let f = |x: f64| if slope { c * x + h * g * x.powf(h) } else { c * x + g * x.powf(h) } - target;
        let (mut lo, mut hi) = (0.0, 1.0);
        while f(hi) < 0.0 {
            hi *= 2.0;
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if f(mid) < 0.0 { lo = mid } else { hi = mid }
        }
        0.5 * (lo + hi)
    };
    let decay = solve(1.0, false);
    if r <= 0.0 {
        return (0.0, decay);
    }
    let peak = solve(r, true);
    (peak, peak.max(decay))
}

fn ln_integral_quadrature(r: f64, c: f64, g: f64, alpha: f64, with_log: bool, tol: Tolerance) -> Result<f64> {
    let (peak, scale) = peak_and_scale(r, c, g, alpha);
    let h = alpha / 2.0;
    let ln_kernel = |x: f64| r * x.ln() - c * x - g * x.powf(h);
    let shift = if peak > 0.0 { ln_kernel(peak) + if with_log { peak.ln_1p().ln() } else { 0.0 } } else { 0.0 };
    let est = integrate_semi_infinite(
        |x: f64| {
            if x <= 0.0 {
                return 0.0;
            }
            let v = (ln_kernel(x) - shift).exp();
            if with_log { v * x.ln_1p() } else { v }
        },
        scale,
        Tolerance { rel: tol.rel, abs: 1e-300 },
    )?;
    if !(est.value > 0.0) {
        return Err(Error::NonConvergence(format!("term integral r={r}, c={c}, g={g} came out {:e}", est.value)));
    }
    Ok(shift + est.value.ln())
}

fn integer_alpha(alpha: f64) -> Option<u32> {
    (alpha.fract() == 0.0 && (1.0..=16.0).contains(&alpha)).then_some(alpha as u32)
}

/// `ln ∫₀^∞ x^r e^{-c x - g x^{α/2}} dx`, `r > -1`, `c + g > 0`.
pub fn ln_gen_gamma_integral(r: f64, c: f64, g: f64, alpha: f64, mode: IntegralMode, tol: Tolerance) -> Result<TermValue> {
    if alpha == 2.0 || g == 0.0 {
        let rate = c + g;
        return Ok(TermValue { ln_value: ln_gamma(r + 1.0)? - (r + 1.0) * rate.ln(), fallback: false });
    }
    if mode == IntegralMode::MeijerG && c > 0.0 {
        if let Some(a) = integer_alpha(alpha) {
            match gen_gamma_integral_meijer(r, c, g, a) {
                Ok(v) if v > 0.0 && v.is_finite() => return Ok(TermValue { ln_value: v.ln(), fallback: false }),
                Ok(_) | Err(Error::PoleCollision(_)) | Err(Error::NonConvergence(_)) => {
                    let ln_value = ln_integral_quadrature(r, c, g, alpha, false, tol)?;
                    return Ok(TermValue { ln_value, fallback: true });
                }
                Err(e) => return Err(e),
            }
        }
    }
    let ln_value = ln_integral_quadrature(r, c, g, alpha, false, tol)?;
    Ok(TermValue { ln_value, fallback: mode == IntegralMode::MeijerG })
}

const SERIES_CAP: usize = 80;
const SERIES_RATIO: f64 = 1e-12;
// largest term over the sum; beyond this the alternating sum has lost too many digits
const SERIES_CANCELLATION: f64 = 1e6;

/// Alternating sum `Σ_s (-1)^s e^{ln_weight(s)} term(s)`, stopped at relative
/// size `SERIES_RATIO`.
///
/// `ln_guess(s)` approximates the log of each summand without the `ln(1+x)`
/// factor; it is checked first so that series which would need too many
/// terms or cancel too badly are rejected before any contour integral runs.
fn alternating_series(
    ln_weight: impl Fn(usize) -> f64,
    ln_guess: impl Fn(usize) -> f64,
    mut term: impl FnMut(usize) -> Result<f64>,
) -> Result<f64> {
    let first = ln_guess(0);
    let mut peak = first;
    let mut needed = None;
    for s in 1..SERIES_CAP {
        let g = ln_guess(s);
        peak = peak.max(g);
        if s > 2 && g < peak + SERIES_RATIO.ln() - 2.0 {
            needed = Some(s);
            break;
        }
    }
    if needed.is_none() || peak - first > SERIES_CANCELLATION.ln() {
        return Err(Error::NonConvergence("log-integral series predicted to diverge or cancel".into()));
    }
    let mut sum = 0.0;
    let mut largest: f64 = 0.0;
    for s in 0..SERIES_CAP {
        let mag = ln_weight(s).exp() * term(s)?;
        largest = largest.max(mag.abs());
        sum += if s % 2 == 0 { mag } else { -mag };
        if s > 2 && mag.abs() < SERIES_RATIO * sum.abs() {
            if largest > SERIES_CANCELLATION * sum.abs() {
                return Err(Error::NonConvergence(format!("log-integral series cancelled (peak {largest:e}, sum {sum:e})")));
            }
            return Ok(sum);
        }
    }
    Err(Error::NonConvergence(format!("log-integral series did not settle within {SERIES_CAP} terms")))
}

fn ln_fact(s: usize) -> f64 {
    libm::lgamma(s as f64 + 1.0)
}

/// `e^{-c x}` expanded under the log-Meijer form of `e^{-g x^{α/2}}`;
/// converges for `α > 2`.
fn log_integral_expand_c(r: f64, c: f64, g: f64, alpha: u32) -> Result<f64> {
    let k = 2.0 / alpha as f64;
    let weight = |s: usize| s as f64 * c.ln() - ln_fact(s);
    // ∫ x^{r+s} e^{-g x^{α/2}} dx = k Γ(k(r+s+1)) / g^{k(r+s+1)}
    let guess = |s: usize| {
        let e = k * (r + s as f64 + 1.0);
        weight(s) + k.ln() + libm::lgamma(e) - e * g.ln()
    };
    alternating_series(weight, guess, |s| log_gen_gamma_integral_meijer(r + s as f64, g, alpha))
}

/// `e^{-g x^{α/2}}` expanded under the log-Meijer form of `e^{-c x}`;
/// converges for `α < 2`.
fn log_integral_expand_g(r: f64, c: f64, g: f64, alpha: u32) -> Result<f64> {
    let h = alpha as f64 / 2.0;
    let weight = |s: usize| s as f64 * g.ln() - ln_fact(s);
    let guess = |s: usize| {
        let e = r + s as f64 * h + 1.0;
        weight(s) + libm::lgamma(e) - e * c.ln()
    };
    alternating_series(weight, guess, |s| log_gen_gamma_integral_meijer(r + s as f64 * h, c, 2))
}

/// `ln ∫₀^∞ ln(1+x) x^r e^{-c x - g x^{α/2}} dx`.
pub fn ln_log_gen_gamma_integral(r: f64, c: f64, g: f64, alpha: f64, mode: IntegralMode, tol: Tolerance) -> Result<TermValue> {
    if mode == IntegralMode::MeijerG {
        let attempt = match integer_alpha(alpha) {
            Some(2) => Some(log_gen_gamma_integral_meijer(r, c + g, 2)),
            Some(_) if g == 0.0 => Some(log_gen_gamma_integral_meijer(r, c, 2)),
            Some(a) if a > 2 && c == 0.0 => Some(log_gen_gamma_integral_meijer(r, g, a)),
            Some(a) if a > 2 => Some(log_integral_expand_c(r, c, g, a)),
            Some(a) if c > 0.0 => Some(log_integral_expand_g(r, c, g, a)),
            _ => None,
        };
        match attempt {
            Some(Ok(v)) if v > 0.0 && v.is_finite() => return Ok(TermValue { ln_value: v.ln(), fallback: false }),
            Some(Err(e @ (Error::InvalidParameter(_) | Error::Domain(_)))) => return Err(e),
            _ => {}
        }
    }
    let ln_value = ln_integral_quadrature(r, c, g, alpha, true, tol)?;
    Ok(TermValue { ln_value, fallback: mode == IntegralMode::MeijerG })
}
