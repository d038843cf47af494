//! Digamma and trigamma by upward recurrence plus asymptotic expansion.

use crate::error::{domain, Error, Result};

const ASYMPTOTIC_FROM: f64 = 10.0;

// B_2k for k = 1..8
const BERNOULLI: [f64; 8] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
];

pub fn digamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(domain(format!("digamma requires x > 0, got {x}")));
    }
    let mut x = x;
    let mut shift = 0.0;
    while x < ASYMPTOTIC_FROM {
        shift -= 1.0 / x;
        x += 1.0;
    }
    let inv2 = 1.0 / (x * x);
    let mut pow = inv2;
    let mut series = 0.0;
    for (k, b) in BERNOULLI.iter().enumerate() {
        series += b / (2.0 * (k + 1) as f64) * pow;
        pow *= inv2;
    }
    Ok(shift + x.ln() - 0.5 / x - series)
}

pub fn trigamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(domain(format!("trigamma requires x > 0, got {x}")));
    }
    let mut x = x;
    let mut shift = 0.0;
    while x < ASYMPTOTIC_FROM {
        shift += 1.0 / (x * x);
        x += 1.0;
    }
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    let mut pow = inv2 * inv;
    let mut series = 0.0;
    for b in BERNOULLI.iter() {
        series += b * pow;
        pow *= inv2;
    }
    Ok(shift + inv + 0.5 * inv2 + series)
}

/// Solves `trigamma(x) = y` for `x` in `[lo, hi]`.
///
/// Bisection narrows the bracket, Newton polishes using the tetragamma
/// from a central difference of the trigamma.
pub fn inverse_trigamma_in(y: f64, lo: f64, hi: f64, tol: f64) -> Result<f64> {
    if !(y > 0.0) || !y.is_finite() {
        return Err(domain(format!("inverse trigamma requires y > 0, got {y}")));
    }
    let (f_lo, f_hi) = (trigamma(lo)?, trigamma(hi)?);
    // trigamma is strictly decreasing
    if y > f_lo || y < f_hi {
        return Err(Error::NoRoot(format!(
            "trigamma value {y} outside [{f_hi:e}, {f_lo:e}] on bracket [{lo}, {hi}]"
        )));
    }
    let (mut a, mut b) = (lo, hi);
    // bisect in log-space until the bracket is tight enough for Newton
    for _ in 0..200 {
        let mid = (a * b).sqrt();
        if trigamma(mid)? > y {
            a = mid;
        } else {
            b = mid;
        }
        if b / a < 1.0 + 1e-3 {
            break;
        }
    }
    let mut x = 0.5 * (a + b);
    for _ in 0..100 {
        let f = trigamma(x)? - y;
        let h = 1e-5 * x;
        let df = (trigamma(x + h)? - trigamma(x - h)?) / (2.0 * h);
        if f > 0.0 {
            a = x;
        } else {
            b = x;
        }
        let mut next = x - f / df;
        if !(next > a && next < b) {
            next = 0.5 * (a + b);
        }
        if (next - x).abs() <= tol * x.max(1.0) {
            return Ok(next);
        }
        x = next;
    }
    Err(Error::NonConvergence(format!("inverse trigamma for y = {y}")))
}

/// Inverse of the trigamma on the default bracket `[1e-3, 1e4]`.
pub fn inverse_trigamma(y: f64) -> Result<f64> {
    inverse_trigamma_in(y, 1e-3, 1e4, 1e-12)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

    #[test]
    fn classical_values() {
        assert_abs_diff_eq!(digamma(1.0).unwrap(), -EULER_GAMMA, epsilon = 1e-13);
        assert_abs_diff_eq!(trigamma(1.0).unwrap(), std::f64::consts::PI.powi(2) / 6.0, epsilon = 1e-13);
        // ψ(1/2) = -γ - 2 ln 2, ψ'(1/2) = π²/2
        assert_abs_diff_eq!(digamma(0.5).unwrap(), -EULER_GAMMA - 2.0 * 2f64.ln(), epsilon = 1e-13);
        assert_abs_diff_eq!(trigamma(0.5).unwrap(), std::f64::consts::PI.powi(2) / 2.0, epsilon = 1e-12);
    }

    #[test]
    fn recurrences_hold() {
        for &x in &[0.01, 0.3, 2.7, 9.99, 10.0, 55.0] {
            assert_abs_diff_eq!(digamma(x + 1.0).unwrap() - digamma(x).unwrap(), 1.0 / x, epsilon = 1e-12 * (1.0 / x).max(1.0));
            assert_abs_diff_eq!(trigamma(x).unwrap() - trigamma(x + 1.0).unwrap(), 1.0 / (x * x), epsilon = 1e-12 * (1.0 / (x * x)).max(1.0));
        }
    }

    #[test]
    fn loo_variance_rows() {
        // √(ψ'(m)/4) reproduces the √d0 column for the tabulated m_s
        assert_abs_diff_eq!((trigamma(5.21).unwrap() / 4.0).sqrt(), 0.230, epsilon = 5e-4);
        assert_abs_diff_eq!((trigamma(19.4).unwrap() / 4.0).sqrt(), 0.115, epsilon = 5e-4);
    }

    #[test]
    fn inverse_round_trip() {
        for i in 0..=30 {
            let y = 0.01 + (1.5 - 0.01) * i as f64 / 30.0;
            let x = inverse_trigamma(y).unwrap();
            assert_abs_diff_eq!(trigamma(x).unwrap(), y, epsilon = 1e-9);
        }
        assert!(matches!(inverse_trigamma(1e-9), Err(Error::NoRoot(_))));
        assert!(digamma(0.0).is_err() && trigamma(-1.0).is_err());
    }
}
