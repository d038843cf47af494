use rand::Rng;
use rand_distr::{Distribution, Gamma, Normal};

use super::loo::Shadowing;
use super::SeriesControl;
use crate::error::{invalid, Error, Result};
use crate::specfun::{ln_factorial, ln_gamma, ln_kummer_1f1_positive, pochhammer};

/// Shadowed-Rician satellite→relay link. `p_s` is half the average multipath
/// power, `m_s` the Nakagami shadowing severity, `xi_s` the average LOS power
/// and `rho_s` the average SNR, all linear.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SrParams {
    pub p_s: f64,
    pub m_s: f64,
    pub xi_s: f64,
    pub rho_s: f64,
}

impl SrParams {
    pub fn new(p_s: f64, m_s: f64, xi_s: f64, rho_s: f64) -> Result<Self> {
        let p = Self { p_s, m_s, xi_s, rho_s };
        p.validate()?;
        Ok(p)
    }

    pub fn from_shadowing(sh: Shadowing, rho_s: f64) -> Result<Self> {
        Self::new(sh.p_s, sh.m_s, sh.xi_s, rho_s)
    }

    pub fn validate(&self) -> Result<()> {
        let ok = |v: f64| v > 0.0 && v.is_finite();
        if !ok(self.p_s) || !ok(self.m_s) || !ok(self.rho_s) {
            return Err(invalid(format!(
                "SR parameters need P_s, m_s, rho_s > 0 (got {}, {}, {})",
                self.p_s, self.m_s, self.rho_s
            )));
        }
        if !(self.xi_s >= 0.0) || !self.xi_s.is_finite() {
            return Err(invalid(format!("SR LOS power xi_s must be >= 0, got {}", self.xi_s)));
        }
        Ok(())
    }

    pub fn coefficients(&self) -> SrCoefficients {
        SrCoefficients::new(self)
    }

    /// `E[ξ] = ϱ_s (2 P_s + ξ_s)`.
    pub fn mean(&self) -> f64 {
        self.rho_s * (2.0 * self.p_s + self.xi_s)
    }
}

/// Derived constants of `f(ξ) = λ_s e^{-χ_s ξ} ₁F₁(m_s; 1; γ_s ξ / ϱ_s)`.
///
/// `q = ξ_s / (2 P_s m_s + ξ_s)` is the ratio of consecutive negative-binomial
/// mass weights; it does not depend on `ϱ_s`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SrCoefficients {
    pub chi_s: f64,
    pub lambda_s: f64,
    pub gamma_s: f64,
    pub q: f64,
    m_s: f64,
    rho_s: f64,
}

impl SrCoefficients {
    pub fn new(p: &SrParams) -> Self {
        let two_b_m = 2.0 * p.p_s * p.m_s;
        let chi_s = 1.0 / (2.0 * p.p_s * p.rho_s);
        Self {
            chi_s,
            lambda_s: (two_b_m / (two_b_m + p.xi_s)).powf(p.m_s) * chi_s,
            gamma_s: p.xi_s / (2.0 * p.p_s * (two_b_m + p.xi_s)),
            q: p.xi_s / (two_b_m + p.xi_s),
            m_s: p.m_s,
            rho_s: p.rho_s,
        }
    }

    /// `ψ_s(θ) = λ_s γ_s^θ (m_s)_θ / ((θ!)² ϱ_s^θ)`, the coefficient of
    /// `ξ^θ e^{-χ_s ξ}` in the series PDF.
    pub fn psi_s(&self, theta: u32) -> f64 {
        if theta == 0 {
            return self.lambda_s;
        }
        if self.gamma_s == 0.0 {
            return 0.0;
        }
        let t = theta as f64;
        let ln = self.lambda_s.ln() + t * (self.gamma_s / self.rho_s).ln() + pochhammer(self.m_s, theta).ln()
            - 2.0 * ln_factorial(theta);
        ln.exp()
    }
}

/// Evaluation route for [`sr_pdf`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PdfForm {
    Exact,
    Series,
}

/// Truncated first-hop series with its diagnostics.
///
/// The series PDF is `χ_s Σ_θ w_θ Pois(θ; χ_s ξ)`, where
/// `w_θ = (1-q)^{m_s} (m_s)_θ q^θ / θ!` is the probability mass that term θ
/// carries. The CCDF follows as `Σ_k Pois(k; χ_s ξ) W_k` with `W_k` the
/// suffix sums of the kept weights.
#[derive(Debug, Clone, PartialEq)]
pub struct SrSeries {
    params: SrParams,
    coeffs: SrCoefficients,
    weights: Vec<f64>,
    suffix: Vec<f64>,
    tail: f64,
}

fn mass_weights(m: f64, q: f64, count: usize) -> Vec<f64> {
    let mut w = Vec::with_capacity(count);
    let mut cur = (1.0 - q).powf(m);
    for theta in 0..count {
        w.push(cur);
        cur *= q * (m + theta as f64) / (theta as f64 + 1.0);
    }
    w
}

/// Mass of the terms from `start` on.
fn weight_tail(m: f64, q: f64, start: usize) -> f64 {
    if q == 0.0 {
        return 0.0;
    }
    // w_start in logs: the prefix weights can underflow while the tail cannot
    let s = start as f64;
    let ln_w = m * (1.0 - q).ln() + s * q.ln() + ln_gamma(m + s).unwrap_or(f64::INFINITY)
        - ln_gamma(m).expect("m_s validated positive")
        - ln_factorial(start as u32);
    let mut term = ln_w.exp();
    let mut sum = 0.0;
    let mut k = s;
    for _ in 0..100_000 {
        sum += term;
        let ratio = q * (m + k) / (k + 1.0);
        term *= ratio;
        k += 1.0;
        if ratio < 1.0 && term <= 1e-17 * sum {
            // the ratios shrink towards q, so this geometric bound is safe
            return sum + term / (1.0 - ratio);
        }
    }
    f64::INFINITY
}

impl SrSeries {
    /// Builds the series with `start` terms, growing up to `control.t_cap`
    /// until the omitted mass is at most `control.tol`.
    pub fn with_start(params: &SrParams, start: usize, control: &SeriesControl) -> Result<Self> {
        params.validate()?;
        if start < 1 {
            return Err(invalid("series needs at least one term"));
        }
        let coeffs = params.coefficients();
        let (m, q) = (params.m_s, coeffs.q);
        let cap = control.t_cap.max(start);
        let mut terms = start;
        let mut tail = weight_tail(m, q, terms);
        while tail > control.tol && terms < cap {
            terms += 1;
            tail = weight_tail(m, q, terms);
        }
        if tail > control.tol {
            return Err(Error::Truncation { terms, tail, tol: control.tol });
        }
        let weights = mass_weights(m, q, terms);
        let mut suffix = vec![0.0; terms];
        let mut acc = 0.0;
        for k in (0..terms).rev() {
            acc += weights[k];
            suffix[k] = acc;
        }
        Ok(Self { params: *params, coeffs, weights, suffix, tail })
    }

    /// User-link series: starts at `control.t1_max` terms.
    pub fn new(params: &SrParams, control: &SeriesControl) -> Result<Self> {
        Self::with_start(params, control.t1_max, control)
    }

    pub fn params(&self) -> &SrParams {
        &self.params
    }

    pub fn coefficients(&self) -> &SrCoefficients {
        &self.coeffs
    }

    pub fn terms(&self) -> usize {
        self.weights.len()
    }

    /// Probability mass dropped by the truncation.
    pub fn tail(&self) -> f64 {
        self.tail
    }

    /// Mass weights `w_θ` of the kept terms.
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn pdf(&self, xi: f64) -> f64 {
        if xi < 0.0 {
            return 0.0;
        }
        let y = self.coeffs.chi_s * xi;
        self.coeffs.chi_s * poisson_dot(y, &self.weights)
    }

    pub fn ccdf(&self, xi: f64) -> f64 {
        if xi <= 0.0 {
            return self.suffix[0];
        }
        poisson_dot(self.coeffs.chi_s * xi, &self.suffix).min(1.0)
    }

    /// Exact PDF through ₁F₁, evaluated in logs.
    pub fn pdf_exact(&self, xi: f64) -> f64 {
        exact_pdf(xi, &self.params, &self.coeffs)
    }
}

/// `Σ_k c_k e^{-y} y^k / k!`.
fn poisson_dot(y: f64, c: &[f64]) -> f64 {
    if y == 0.0 {
        return c[0];
    }
    let ln_y = y.ln();
    c.iter()
        .enumerate()
        .map(|(k, &ck)| {
            if ck == 0.0 {
                0.0
            } else {
                ck * (-y + k as f64 * ln_y - ln_factorial(k as u32)).exp()
            }
        })
        .sum()
}

fn exact_pdf(xi: f64, p: &SrParams, c: &SrCoefficients) -> f64 {
    if xi < 0.0 {
        return 0.0;
    }
    let y = c.chi_s * xi;
    let ln_f = ln_kummer_1f1_positive(p.m_s, 1.0, c.q * y).expect("positive 1F1 arguments");
    (c.lambda_s.ln() - y + ln_f).exp()
}

pub fn sr_pdf(xi: f64, p: &SrParams, form: PdfForm, control: &SeriesControl) -> Result<f64> {
    p.validate()?;
    match form {
        PdfForm::Exact => Ok(exact_pdf(xi, p, &p.coefficients())),
        PdfForm::Series => Ok(SrSeries::new(p, control)?.pdf(xi)),
    }
}

pub fn sr_ccdf(xi: f64, p: &SrParams, control: &SeriesControl) -> Result<f64> {
    Ok(SrSeries::new(p, control)?.ccdf(xi))
}

/// One SNR draw `ϱ_s |z + a e^{iφ}|²` with `z` circular Gaussian of
/// per-component variance `P_s` and `a²` Gamma with shape `m_s`, mean `ξ_s`.
pub fn sr_sample<R: Rng + ?Sized>(p: &SrParams, rng: &mut R) -> f64 {
    SrSampler::new(p).sample(rng)
}

pub(crate) struct SrSampler {
    normal: Normal<f64>,
    los: Option<Gamma<f64>>,
    rho: f64,
}

impl SrSampler {
    pub(crate) fn new(p: &SrParams) -> Self {
        Self {
            normal: Normal::new(0.0, p.p_s.sqrt()).expect("validated P_s"),
            los: (p.xi_s > 0.0).then(|| Gamma::new(p.m_s, p.xi_s / p.m_s).expect("validated m_s")),
            rho: p.rho_s,
        }
    }

    #[inline]
    pub(crate) fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let mut re = self.normal.sample(rng);
        let mut im = self.normal.sample(rng);
        if let Some(g) = &self.los {
            let a = g.sample(rng).sqrt();
            let phi = std::f64::consts::TAU * rng.random::<f64>();
            re += a * phi.cos();
            im += a * phi.sin();
        }
        self.rho * (re * re + im * im)
    }
}
