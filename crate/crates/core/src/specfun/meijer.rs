//! Meijer-G evaluation by numerical Mellin–Barnes integration along a
//! vertical line.
//!
//! ```text
//! G^{m,n}_{p,q}(z) = 1/(2πi) ∫ Π_{j≤m} Γ(b_j - s) Π_{j≤n} Γ(1 - a_j + s)
//!                      / [Π_{j>m} Γ(1 - b_j + s) Π_{j>n} Γ(a_j - s)] z^s ds
//! ```
//!
//! The line `Re s = c` must leave every pole of `Γ(b_j - s)` (j ≤ m) to its
//! right and every pole of `Γ(1 - a_j + s)` (j ≤ n) to its left. Only real
//! parameters are supported, so the integrand at `c - it` is the conjugate of
//! the one at `c + it` and the integral folds onto `t ≥ 0`. The integrand must
//! decay along the line, which needs `m + n > (p + q) / 2`.

use num_complex::Complex64;

use crate::error::{invalid, Error, Result};

/// Parameters of `G^{m,n}_{p,q}(z | a; b)`.
#[derive(Debug, Clone, PartialEq)]
pub struct MeijerGSpec {
    pub m: usize,
    pub n: usize,
    pub a: Vec<f64>,
    pub b: Vec<f64>,
    pub z: f64,
}

impl MeijerGSpec {
    pub fn new(m: usize, n: usize, a: Vec<f64>, b: Vec<f64>, z: f64) -> Result<Self> {
        let spec = Self { m, n, a, b, z };
        spec.validate()?;
        Ok(spec)
    }

    pub fn p(&self) -> usize {
        self.a.len()
    }

    pub fn q(&self) -> usize {
        self.b.len()
    }

    pub fn validate(&self) -> Result<()> {
        if self.m > self.q() || self.n > self.p() {
            return Err(invalid(format!(
                "Meijer-G orders need m <= q and n <= p (m={}, n={}, p={}, q={})",
                self.m,
                self.n,
                self.p(),
                self.q()
            )));
        }
        if self.a.iter().chain(self.b.iter()).any(|v| !v.is_finite()) {
            return Err(invalid("Meijer-G parameters must be finite"));
        }
        if !(self.z > 0.0) || !self.z.is_finite() {
            return Err(invalid(format!("Meijer-G argument must be positive, got {}", self.z)));
        }
        Ok(())
    }

    /// Exponential decay rate of the integrand along the line, in units of π|t|.
    fn decay(&self) -> f64 {
        (self.m + self.n) as f64 - 0.5 * (self.p() + self.q()) as f64
    }

    /// Open interval of admissible contour abscissae.
    fn separation(&self) -> (f64, f64) {
        let lower = self.a[..self.n]
            .iter()
            .map(|a| a - 1.0)
            .fold(f64::NEG_INFINITY, f64::max);
        let upper = self.b[..self.m].iter().copied().fold(f64::INFINITY, f64::min);
        (lower, upper)
    }

    fn ln_integrand(&self, s: Complex64) -> Complex64 {
        let one = Complex64::new(1.0, 0.0);
        let mut acc = Complex64::new(0.0, 0.0);
        for (j, &b) in self.b.iter().enumerate() {
            if j < self.m {
                acc += ln_gamma_complex(Complex64::new(b, 0.0) - s);
            } else {
                acc -= ln_gamma_complex(one - b + s);
            }
        }
        for (j, &a) in self.a.iter().enumerate() {
            if j < self.n {
                acc += ln_gamma_complex(one - a + s);
            } else {
                acc -= ln_gamma_complex(Complex64::new(a, 0.0) - s);
            }
        }
        acc + s * self.z.ln()
    }
}

/// `Δ(k, v) = v/k, (v+1)/k, …, (v+k-1)/k`.
pub fn delta_list(k: usize, v: f64) -> Vec<f64> {
    (0..k).map(|j| (v + j as f64) / k as f64).collect()
}

// Bernoulli coefficients B_2k / (2k (2k-1)) of the Stirling series
const STIRLING: [f64; 8] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360360.0,
    1.0 / 156.0,
    -3617.0 / 122400.0,
];

/// Complex log-gamma (any branch; only `exp` of sums is ever used).
///
/// Shifts the argument up to `|z| ≥ 12` with the recurrence, then applies the
/// Stirling series.
pub fn ln_gamma_complex(z: Complex64) -> Complex64 {
    let mut z = z;
    let mut shift = Complex64::new(0.0, 0.0);
    while z.norm() < 12.0 || z.re < 0.5 {
        shift -= z.ln();
        z += 1.0;
    }
    let inv = z.inv();
    let inv2 = inv * inv;
    let mut pow = inv;
    let mut series = Complex64::new(0.0, 0.0);
    for c in STIRLING.iter() {
        series += pow * *c;
        pow *= inv2;
    }
    shift + (z - 0.5) * z.ln() - z + 0.5 * (2.0 * std::f64::consts::PI).ln() + series
}

/// Knobs for the contour quadrature.
#[derive(Debug, Clone, Copy)]
pub struct ContourControl {
    /// Relative tolerance between successive step halvings.
    pub rel_tol: f64,
    /// Integrand magnitude, relative to its peak, below which the tail is dropped.
    pub tail_cut: f64,
    pub max_halvings: usize,
    pub max_points: usize,
}

impl Default for ContourControl {
    fn default() -> Self {
        Self { rel_tol: 1e-12, tail_cut: 1e-18, max_halvings: 14, max_points: 4_000_000 }
    }
}

pub fn meijer_g(spec: &MeijerGSpec) -> Result<f64> {
    meijer_g_with(spec, &ContourControl::default())
}

pub fn meijer_g_with(spec: &MeijerGSpec, control: &ContourControl) -> Result<f64> {
    spec.validate()?;
    let kappa = spec.decay();
    if kappa <= 0.0 {
        return Err(Error::NonConvergence(format!(
            "integrand does not decay on a vertical line (m+n-(p+q)/2 = {kappa})"
        )));
    }
    let (lower, upper) = spec.separation();
    if lower >= upper {
        return Err(Error::PoleCollision(format!(
            "left poles reach {lower}, right poles start at {upper}"
        )));
    }
    let c = choose_abscissa(spec, lower, upper);
    let dist = (c - lower).min(upper - c);

    let f = |t: f64| -> f64 {
        let s = Complex64::new(c, t);
        let v = spec.ln_integrand(s).exp();
        if v.re.is_finite() { v.re } else { 0.0 }
    };

    // the integrand is analytic in |Im t| < dist; z^s adds oscillation ln z
    let osc = spec.z.ln().abs();
    let mut h = (dist * 2.0 * std::f64::consts::PI / (20.0 + dist * osc)).min(0.5);
    let peak = f(0.0).abs().max(f64::MIN_POSITIVE);
    let t_floor = 1.0 + osc;

    let sweep = |h: f64, start: usize, stride: usize| -> Result<(f64, f64, usize)> {
        let mut sum = 0.0;
        let mut abs_sum = 0.0;
        let mut quiet = 0;
        let mut k = start;
        let mut evaluated = 0;
        loop {
            let t = k as f64 * h;
            let v = f(t);
            sum += v;
            abs_sum += v.abs();
            evaluated += 1;
            if v.abs() < control.tail_cut * peak && t > t_floor {
                quiet += 1;
                if quiet > 8 {
                    break;
                }
            } else {
                quiet = 0;
            }
            k += stride;
            if evaluated > control.max_points {
                return Err(Error::NonConvergence("Meijer-G contour sum exceeded point budget".into()));
            }
        }
        Ok((sum, abs_sum, evaluated))
    };

    let (body, abs_body, _) = sweep(h, 1, 1)?;
    let f0 = f(0.0);
    let mut total = 0.5 * f0 + body;
    let mut abs_total = 0.5 * f0.abs() + abs_body;
    let mut estimate = h * total / std::f64::consts::PI;
    for _ in 0..control.max_halvings {
        let half = 0.5 * h;
        let (odd, abs_odd, _) = sweep(half, 1, 2)?;
        total += odd;
        abs_total += abs_odd;
        h = half;
        let next = h * total / std::f64::consts::PI;
        let scale = next.abs().max(1e-3 * h * abs_total / std::f64::consts::PI);
        if (next - estimate).abs() <= control.rel_tol * scale {
            return Ok(next);
        }
        estimate = next;
    }
    Err(Error::NonConvergence(format!(
        "Meijer-G contour sum did not settle (last estimate {estimate:e})"
    )))
}

/// Abscissa inside `(lower, upper)` that keeps distance from both pole
/// families while minimizing the integrand size on the real axis, which limits
/// cancellation along the line.
fn choose_abscissa(spec: &MeijerGSpec, lower: f64, upper: f64) -> f64 {
    let (lo, hi) = match (lower.is_finite(), upper.is_finite()) {
        (true, true) => {
            let margin = (0.25 * (upper - lower)).min(0.5);
            (lower + margin, upper - margin)
        }
        (true, false) => (lower + 0.5, lower + 40.0),
        (false, true) => (upper - 40.0, upper - 0.5),
        (false, false) => (-20.0, 20.0),
    };
    if hi <= lo {
        return 0.5 * (lower + upper);
    }
    let size = |c: f64| spec.ln_integrand(Complex64::new(c, 0.0)).re;
    // golden-section search on the (log-convex in practice) magnitude
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let (mut a, mut b) = (lo, hi);
    let mut x1 = b - g * (b - a);
    let mut x2 = a + g * (b - a);
    let (mut f1, mut f2) = (size(x1), size(x2));
    for _ in 0..60 {
        if f1 < f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - g * (b - a);
            f1 = size(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + g * (b - a);
            f2 = size(x2);
        }
        if b - a < 1e-3 {
            break;
        }
    }
    let c = 0.5 * (a + b);
    // a near-pole minimizer would force a tiny step; keep at least 0.1 away
    let keep = (0.1f64).min(0.25 * (upper - lower));
    c.clamp(lower + keep, upper - keep)
}

/// `∫₀^∞ x^r e^{-c x} e^{-g x^{α/2}} dx` through `G^{2,α}_{α,2}` for integer α.
pub fn gen_gamma_integral_meijer(r: f64, c: f64, g: f64, alpha: u32) -> Result<f64> {
    if alpha == 0 || !(c > 0.0) || !(g > 0.0) || !(r > -1.0) {
        return Err(invalid(format!("need alpha >= 1, c > 0, g > 0, r > -1 (r={r}, c={c}, g={g})")));
    }
    let af = alpha as f64;
    let z = g * g / 4.0 * af.powf(af) / c.powf(af);
    let spec = MeijerGSpec::new(2, alpha as usize, delta_list(alpha as usize, -r), delta_list(2, 0.0), z)?;
    let pre = std::f64::consts::SQRT_2 * af.powf(0.5 + r)
        / (c.powf(r + 1.0) * (2.0 * std::f64::consts::PI).powf(af / 2.0));
    Ok(pre * meijer_g(&spec)?)
}

/// `∫₀^∞ ln(1+x) x^c e^{-g x^{α/2}} dx` through `G^{2(1+α),α}_{2α,2(1+α)}`
/// for integer α.
pub fn log_gen_gamma_integral_meijer(c: f64, g: f64, alpha: u32) -> Result<f64> {
    if alpha == 0 || !(g > 0.0) || !(c > -1.0) {
        return Err(invalid(format!("need alpha >= 1, g > 0, c > -1 (c={c}, g={g})")));
    }
    let k = alpha as usize;
    let af = alpha as f64;
    let mut a = delta_list(k, -c - 1.0);
    a.extend(delta_list(k, -c));
    let mut b = delta_list(2, 0.0);
    b.extend(delta_list(k, -c - 1.0));
    b.extend(delta_list(k, -c - 1.0));
    let spec = MeijerGSpec::new(2 * (1 + k), k, a, b, (g / 2.0).powi(2))?;
    let pre = std::f64::consts::SQRT_2 / (af * (2.0 * std::f64::consts::PI).powf(af - 0.5));
    Ok(pre * meijer_g(&spec)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn complex_ln_gamma_matches_real() {
        for &x in &[0.1, 0.5, 1.0, 2.5, 7.3, 30.0] {
            let v = ln_gamma_complex(Complex64::new(x, 0.0));
            assert_relative_eq!(v.re, libm::lgamma(x), max_relative = 1e-13, epsilon = 1e-14);
        }
        // |Γ(1/2 + it)|² = π / cosh(π t)
        for &t in &[0.3, 4.0, 40.0] {
            let v = ln_gamma_complex(Complex64::new(0.5, t));
            let expect = 0.5 * (std::f64::consts::PI / (std::f64::consts::PI * t).cosh()).ln();
            assert_relative_eq!(v.re, expect, max_relative = 1e-12);
        }
    }

    #[test]
    fn exponential_identity() {
        for &z in &[0.1, 1.0, 5.0] {
            let spec = MeijerGSpec::new(1, 0, vec![], vec![0.0], z).unwrap();
            assert_relative_eq!(meijer_g(&spec).unwrap(), (-z as f64).exp(), max_relative = 1e-10);
        }
    }

    #[test]
    fn logarithm_identity() {
        for &z in &[0.1, 1.0, 5.0] {
            let spec = MeijerGSpec::new(1, 2, vec![1.0, 1.0], vec![1.0, 0.0], z).unwrap();
            assert_relative_eq!(meijer_g(&spec).unwrap(), (1.0 + z as f64).ln(), max_relative = 1e-10);
        }
    }

    #[test]
    fn collision_and_validation() {
        // a_1 - 1 = 2 sits right of b_1 = 0: no separating line
        let spec = MeijerGSpec::new(1, 1, vec![3.0], vec![0.0], 1.0).unwrap();
        assert!(matches!(meijer_g(&spec), Err(Error::PoleCollision(_))));
        assert!(MeijerGSpec::new(2, 0, vec![], vec![0.0], 1.0).is_err());
        assert!(MeijerGSpec::new(1, 0, vec![], vec![0.0], -1.0).is_err());
        // G^{0,0}_{0,1} grows along the line
        let spec = MeijerGSpec::new(0, 0, vec![], vec![0.0], 1.0).unwrap();
        assert!(matches!(meijer_g(&spec), Err(Error::NonConvergence(_))));
    }

    #[test]
    fn quarter_instance() {
        // ∫ ξ e^{-ξ} e^{-ξ} dξ = 1/4
        assert_relative_eq!(gen_gamma_integral_meijer(1.0, 1.0, 1.0, 2).unwrap(), 0.25, max_relative = 1e-10);
    }

    #[test]
    fn delta_lists() {
        assert_eq!(delta_list(2, 0.0), vec![0.0, 0.5]);
        assert_eq!(delta_list(3, -1.0), vec![-1.0 / 3.0, 0.0, 1.0 / 3.0]);
    }
}
