use crate::error::{domain, Error, Result};

/// Default term cap for [`kummer_1f1`].
pub const KUMMER_MAX_TERMS: usize = 20_000;

/// Confluent hypergeometric ₁F₁(a; b; x) by its ascending series.
///
/// Stops once a term falls below `1e-17` of the running sum; fails with
/// [`Error::NonConvergence`] if that does not happen within `max_terms`.
pub fn kummer_1f1_with_cap(a: f64, b: f64, x: f64, max_terms: usize) -> Result<f64> {
    if b <= 0.0 && b.fract() == 0.0 {
        return Err(domain(format!("1F1 undefined for non-positive integer b = {b}")));
    }
    if x == 0.0 || a == 0.0 {
        return Ok(1.0);
    }
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 0..max_terms {
        let kf = k as f64;
        term *= (a + kf) / (b + kf) * x / (kf + 1.0);
        sum += term;
        if term == 0.0 {
            return Ok(sum);
        }
        // past the peak of the terms and negligible
        if term.abs() <= 1e-17 * sum.abs() && kf + 1.0 > x.abs() - a.abs() {
            return Ok(sum);
        }
    }
    Err(Error::NonConvergence(format!(
        "1F1({a}; {b}; {x}) did not converge in {max_terms} terms"
    )))
}

pub fn kummer_1f1(a: f64, b: f64, x: f64) -> Result<f64> {
    kummer_1f1_with_cap(a, b, x, KUMMER_MAX_TERMS)
}

/// `ln ₁F₁(a; b; x)` for `a, b > 0` and `x ≥ 0`, where every series term is
/// positive. The partial sum is rescaled as it grows so large `x` does not
/// overflow.
pub fn ln_kummer_1f1_positive(a: f64, b: f64, x: f64) -> Result<f64> {
    if !(a > 0.0 && b > 0.0 && x >= 0.0) {
        return Err(domain(format!("ln 1F1 needs a, b > 0 and x >= 0 (a={a}, b={b}, x={x})")));
    }
    if x == 0.0 {
        return Ok(0.0);
    }
    const RESCALE: f64 = 1e200;
    let mut offset = 0.0;
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 0..KUMMER_MAX_TERMS.max(4 * x as usize) {
        let kf = k as f64;
        term *= (a + kf) / (b + kf) * x / (kf + 1.0);
        sum += term;
        if sum > RESCALE {
            sum /= RESCALE;
            term /= RESCALE;
            offset += RESCALE.ln();
        }
        if term <= 1e-17 * sum && kf + 1.0 > x - a {
            return Ok(offset + sum.ln());
        }
    }
    Err(Error::NonConvergence(format!("ln 1F1({a}; {b}; {x}) did not converge")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn identities() {
        assert_eq!(kummer_1f1(5.21, 1.0, 0.0).unwrap(), 1.0);
        for &x in &[0.3, 2.0, 17.5] {
            assert_relative_eq!(kummer_1f1(2.5, 2.5, x).unwrap(), f64::exp(x), max_relative = 1e-13);
        }
        // ₁F₁(1; 2; x) = (e^x - 1)/x
        assert_relative_eq!(kummer_1f1(1.0, 2.0, 3.0).unwrap(), (3f64.exp() - 1.0) / 3.0, max_relative = 1e-14);
    }

    #[test]
    fn log_form_matches_and_survives_large_arguments() {
        let direct = kummer_1f1(5.21, 1.0, 12.0).unwrap().ln();
        assert_relative_eq!(ln_kummer_1f1_positive(5.21, 1.0, 12.0).unwrap(), direct, max_relative = 1e-13);
        // ₁F₁(b; b; x) = e^x well past overflow of the plain sum
        assert_relative_eq!(ln_kummer_1f1_positive(3.0, 3.0, 2000.0).unwrap(), 2000.0, max_relative = 1e-12);
    }

    #[test]
    fn pole_and_cap_errors() {
        assert!(matches!(kummer_1f1(1.0, -2.0, 1.0), Err(Error::Domain(_))));
        assert!(matches!(kummer_1f1_with_cap(5.0, 1.0, 50.0, 10), Err(Error::NonConvergence(_))));
    }
}
