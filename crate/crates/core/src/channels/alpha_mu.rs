use rand::Rng;
use rand_distr::{Distribution, Gamma};

use crate::error::{invalid, Result};
use crate::specfun::{gamma_q, ln_gamma};

/// α-μ fading of a relay→user or relay→eavesdropper link, in terms of the
/// average SNR `rho` (linear).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlphaMuParams {
    pub alpha: f64,
    pub mu: f64,
    pub rho: f64,
}

impl AlphaMuParams {
    pub fn new(alpha: f64, mu: f64, rho: f64) -> Result<Self> {
        let p = Self { alpha, mu, rho };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("alpha", self.alpha), ("mu", self.mu), ("rho", self.rho)] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(invalid(format!("alpha-mu {name} must be positive and finite, got {v}")));
            }
        }
        Ok(())
    }

    pub fn coefficients(&self) -> AlphaMuCoefficients {
        AlphaMuCoefficients::new(self)
    }

    /// Integer `(α, μ)` if both are integral, which the series path needs.
    pub fn integer_orders(&self) -> Option<(u32, u32)> {
        let int = |v: f64| (v.fract() == 0.0 && v <= 64.0).then_some(v as u32);
        Some((int(self.alpha)?, int(self.mu)?))
    }
}

/// Constants of `f(ξ) = z1 e^{-ψ1 ξ^{α/2}} ξ^{z2}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlphaMuCoefficients {
    pub z1: f64,
    pub psi1: f64,
    pub z2: f64,
    ln_z1: f64,
}

impl AlphaMuCoefficients {
    pub fn new(p: &AlphaMuParams) -> Self {
        let ln_z1 = p.alpha.ln() + p.mu * p.mu.ln() - 0.5 * p.alpha * p.mu * p.rho.ln()
            - std::f64::consts::LN_2
            - ln_gamma(p.mu).expect("mu validated positive");
        Self {
            z1: ln_z1.exp(),
            psi1: p.mu * p.rho.powf(-0.5 * p.alpha),
            z2: 0.5 * p.alpha * p.mu - 1.0,
            ln_z1,
        }
    }

    pub fn ln_z1(&self) -> f64 {
        self.ln_z1
    }
}

pub fn alphamu_pdf(xi: f64, p: &AlphaMuParams) -> f64 {
    if xi < 0.0 {
        return 0.0;
    }
    let c = p.coefficients();
    if xi == 0.0 {
        return match c.z2.partial_cmp(&0.0) {
            Some(std::cmp::Ordering::Less) => f64::INFINITY,
            Some(std::cmp::Ordering::Equal) => c.z1,
            _ => 0.0,
        };
    }
    (c.ln_z1 - c.psi1 * xi.powf(0.5 * p.alpha) + c.z2 * xi.ln()).exp()
}

/// `P(ξ > x) = Γ(μ, ψ1 x^{α/2}) / Γ(μ)`.
pub fn alphamu_ccdf(xi: f64, p: &AlphaMuParams) -> f64 {
    if xi <= 0.0 {
        return 1.0;
    }
    let c = p.coefficients();
    gamma_q(p.mu, c.psi1 * xi.powf(0.5 * p.alpha)).expect("validated alpha-mu arguments")
}

/// Exact draw: `ξ^{α/2}` is Gamma(μ, ϱ^{α/2}/μ).
pub fn alphamu_sample<R: Rng + ?Sized>(p: &AlphaMuParams, rng: &mut R) -> f64 {
    let g = Gamma::new(p.mu, p.rho.powf(0.5 * p.alpha) / p.mu).expect("validated alpha-mu parameters");
    g.sample(rng).powf(2.0 / p.alpha)
}

/// Draws from a prebuilt Gamma law; used by hot simulation loops.
pub(crate) struct AlphaMuSampler {
    gamma: Gamma<f64>,
    inv_half_alpha: f64,
}

impl AlphaMuSampler {
    pub(crate) fn new(p: &AlphaMuParams) -> Self {
        Self {
            gamma: Gamma::new(p.mu, p.rho.powf(0.5 * p.alpha) / p.mu).expect("validated alpha-mu parameters"),
            inv_half_alpha: 2.0 / p.alpha,
        }
    }

    #[inline]
    pub(crate) fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let g = self.gamma.sample(rng);
        if self.inv_half_alpha == 1.0 { g } else { g.powf(self.inv_half_alpha) }
    }
}
