use crate::error::{invalid, Result};
use crate::specfun::{digamma, inverse_trigamma_in, trigamma};

/// Loo shadowing parameters: log-domain mean `mu_loo` and variance `d0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LooParams {
    pub mu_loo: f64,
    pub d0: f64,
}

/// `(P_s, m_s, ξ_s)` without an SNR; one row of the shadowing table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Shadowing {
    pub p_s: f64,
    pub m_s: f64,
    pub xi_s: f64,
}

/// Table row: shadowing triple plus the Loo pair it was derived from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PresetRow {
    pub case: u8,
    pub shadowing: Shadowing,
    pub mu_loo: f64,
    pub sqrt_d0: f64,
}

pub const TABLE1: [PresetRow; 4] = [
    PresetRow { case: 1, shadowing: Shadowing { p_s: 0.063, m_s: 0.739, xi_s: 0.0009 }, mu_loo: -3.914, sqrt_d0: 0.806 },
    PresetRow { case: 2, shadowing: Shadowing { p_s: 0.251, m_s: 5.21, xi_s: 0.278 }, mu_loo: -0.690, sqrt_d0: 0.230 },
    PresetRow { case: 3, shadowing: Shadowing { p_s: 0.126, m_s: 10.1, xi_s: 0.835 }, mu_loo: -0.115, sqrt_d0: 0.161 },
    PresetRow { case: 4, shadowing: Shadowing { p_s: 0.158, m_s: 19.4, xi_s: 1.29 }, mu_loo: 0.115, sqrt_d0: 0.115 },
];

/// Shadowing case 1 (heaviest) through 4 (lightest).
pub fn shadowing_preset(case: u8) -> Result<Shadowing> {
    TABLE1
        .iter()
        .find(|r| r.case == case)
        .map(|r| r.shadowing)
        .ok_or_else(|| invalid(format!("shadowing case must be 1..=4, got {case}")))
}

/// Converts Loo's `(μ, d0)` to `(m_s, ξ_s)`: `ψ'(m_s) = 4 d0` and
/// `ξ_s = m_s exp(2μ - ψ(m_s))`. `P_s` is not determined by the Loo pair and
/// is passed through unchanged.
pub fn loo_to_sr(loo: LooParams, p_s: f64) -> Result<Shadowing> {
    if !(loo.d0 > 0.0) || !loo.d0.is_finite() {
        return Err(invalid(format!("Loo d0 must be positive, got {}", loo.d0)));
    }
    if !(p_s > 0.0) || !loo.mu_loo.is_finite() {
        return Err(invalid("loo_to_sr needs P_s > 0 and a finite mean"));
    }
    let m_s = inverse_trigamma_in(4.0 * loo.d0, 1e-3, 1e4, 1e-10)?;
    let xi_s = m_s * (2.0 * loo.mu_loo - digamma(m_s)?).exp();
    Ok(Shadowing { p_s, m_s, xi_s })
}

/// Inverse of [`loo_to_sr`] on `(m_s, ξ_s)`.
pub fn sr_to_loo(m_s: f64, xi_s: f64) -> Result<LooParams> {
    if !(xi_s > 0.0) {
        return Err(invalid("Loo mean is undefined for xi_s = 0"));
    }
    Ok(LooParams { mu_loo: 0.5 * (digamma(m_s)? + (xi_s / m_s).ln()), d0: 0.25 * trigamma(m_s)? })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn presets_verbatim() {
        assert_eq!(shadowing_preset(1).unwrap(), Shadowing { p_s: 0.063, m_s: 0.739, xi_s: 0.0009 });
        assert_eq!(shadowing_preset(3).unwrap(), Shadowing { p_s: 0.126, m_s: 10.1, xi_s: 0.835 });
        assert!(shadowing_preset(0).is_err() && shadowing_preset(5).is_err());
    }

    #[test]
    fn table_rows_reproduced() {
        for row in TABLE1 {
            let loo = LooParams { mu_loo: row.mu_loo, d0: row.sqrt_d0 * row.sqrt_d0 };
            let sh = loo_to_sr(loo, row.shadowing.p_s).unwrap();
            assert!((sh.m_s / row.shadowing.m_s - 1.0).abs() < 0.01, "case {} m_s {}", row.case, sh.m_s);
            assert!((sh.xi_s / row.shadowing.xi_s - 1.0).abs() < 0.02, "case {} xi_s {}", row.case, sh.xi_s);
        }
    }

    #[test]
    fn round_trip() {
        let loo = LooParams { mu_loo: -0.69, d0: 0.0529 };
        let sh = loo_to_sr(loo, 0.251).unwrap();
        let back = sr_to_loo(sh.m_s, sh.xi_s).unwrap();
        assert!((back.mu_loo - loo.mu_loo).abs() < 1e-8 && (back.d0 - loo.d0).abs() < 1e-8);
    }
}
