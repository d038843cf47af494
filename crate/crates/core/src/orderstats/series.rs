use std::collections::BTreeMap;

use super::dualhop::DualHop;
use super::SeriesControl;
use crate::error::{Error, Result};
use crate::specfun::{binomial, composition_count, enumerate_compositions, ln_factorial};

/// `c ξ^r e^{-a ξ - b ξ^{α/2}}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GenGammaTerm {
    pub c: f64,
    pub r: f64,
    pub a: f64,
    pub b: f64,
}

/// A finite sum of [`GenGammaTerm`]s sharing one `α`.
#[derive(Debug, Clone, PartialEq)]
pub struct GenGammaSum {
    pub alpha: f64,
    pub terms: Vec<GenGammaTerm>,
}

impl GenGammaSum {
    pub fn eval(&self, xi: f64) -> f64 {
        if xi < 0.0 {
            return 0.0;
        }
        if xi == 0.0 {
            return self
                .terms
                .iter()
                .map(|t| match t.r.partial_cmp(&0.0) {
                    Some(std::cmp::Ordering::Equal) => t.c,
                    Some(std::cmp::Ordering::Less) => t.c * f64::INFINITY,
                    _ => 0.0,
                })
                .sum();
        }
        let ln_x = xi.ln();
        let x_half_alpha = xi.powf(0.5 * self.alpha);
        self.terms
            .iter()
            .map(|t| t.c * (t.r * ln_x - t.a * xi - t.b * x_half_alpha).exp())
            .sum()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }
}

/// Expanded density with its truncation diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub struct SeriesPdf {
    pub pdf: GenGammaSum,
    /// Compositions enumerated while expanding the powers of the CCDF.
    pub terms_used: usize,
    /// First-hop probability mass dropped by truncation.
    pub tail: f64,
}

/// One factor of the dual-hop CCDF after expanding both incomplete gammas:
/// `coef · ξ^{two_r / 2}` for the index pair `(θ5, θ6)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Delta {
    pub theta5: u32,
    pub theta6: u32,
    pub coef: f64,
    pub two_r: i64,
}

/// Coefficient tables of the series forms.
///
/// With integer `μ` both factors of the dual-hop CCDF are finite sums:
/// `S(ξ) = e^{-χ ξ - ψ1 ξ^{α/2}} Σ_{θ5, θ6} δ_{θ5,θ6} ξ^{θ5 + α θ6 / 2}`,
/// where the first-hop index `θ1` has been summed into the suffix weight
/// `W_{θ5} = Σ_{θ1 ≥ θ5} w_{θ1}`. Powers `S^{θ4}` are expanded over the
/// compositions of `θ4` into one part per `δ` and merged by exponent.
#[derive(Debug, Clone, PartialEq)]
pub struct TermTables {
    alpha: u32,
    chi: f64,
    psi1: f64,
    deltas: Vec<Delta>,
    /// `powers[θ4]`: exponent `2r` → coefficient of the polynomial part of `S^{θ4}`.
    powers: Vec<BTreeMap<i64, f64>>,
    /// Polynomial part of the dual-hop density, by `2r`.
    fsb: BTreeMap<i64, f64>,
    terms_used: usize,
    tail: f64,
}

impl TermTables {
    /// Tables for powers `S^0 … S^{k_max}`.
    pub fn build(hop: &DualHop, k_max: u32, control: &SeriesControl) -> Result<Self> {
        let h = hop.hop2();
        let (alpha, mu) = h.integer_orders().ok_or_else(|| {
            Error::Unsupported(format!("series path needs integer alpha and mu, got ({}, {})", h.alpha, h.mu))
        })?;
        let sr = hop.sr_series();
        let c = sr.coefficients();
        let amc = h.coefficients();
        let (chi, psi1) = (c.chi_s, amc.psi1);
        let w = sr.weights();
        let t = w.len();
        let mut suffix = vec![0.0; t];
        let mut acc = 0.0;
        for k in (0..t).rev() {
            acc += w[k];
            suffix[k] = acc;
        }
        // χ^k / k! in logs; ln ψ1 may be large negative at high SNR
        let chi_pow = |k: u32| (k as f64 * chi.ln() - ln_factorial(k)).exp();
        let psi_pow = |k: u32| (k as f64 * psi1.ln() - ln_factorial(k)).exp();

        let mut deltas = Vec::with_capacity(t * mu as usize);
        for t5 in 0..t as u32 {
            for t6 in 0..mu {
                deltas.push(Delta {
                    theta5: t5,
                    theta6: t6,
                    coef: suffix[t5 as usize] * chi_pow(t5) * psi_pow(t6),
                    two_r: 2 * t5 as i64 + (alpha * t6) as i64,
                });
            }
        }

        let parts = deltas.len();
        let total: f64 = (0..=k_max).map(|k| composition_count(parts, k)).sum();
        if total > control.comp_cap as f64 {
            return Err(Error::Resource { requested: total, cap: control.comp_cap });
        }
        let mut powers = Vec::with_capacity(k_max as usize + 1);
        let mut terms_used = 0usize;
        for k in 0..=k_max {
            let mut poly = BTreeMap::new();
            for comp in enumerate_compositions(parts, k, control.comp_cap)? {
                terms_used += 1;
                let mut coef = comp.multinomial();
                let mut two_r = 0i64;
                for (j, &e) in comp.parts.iter().enumerate() {
                    if e > 0 {
                        coef *= deltas[j].coef.powi(e as i32);
                        two_r += deltas[j].two_r * e as i64;
                    }
                }
                *poly.entry(two_r).or_insert(0.0) += coef;
            }
            powers.push(poly);
        }

        // f_sb = f_sr · S_am + S_sr · f_am, exponentials factored out
        let mut fsb = BTreeMap::new();
        for t1 in 0..t as u32 {
            for t6 in 0..mu {
                let coef = chi * w[t1 as usize] * chi_pow(t1) * psi_pow(t6);
                *fsb.entry(2 * t1 as i64 + (alpha * t6) as i64).or_insert(0.0) += coef;
            }
        }
        let two_z2 = (alpha * mu) as i64 - 2;
        for t5 in 0..t as u32 {
            let coef = suffix[t5 as usize] * chi_pow(t5) * amc.z1;
            *fsb.entry(2 * t5 as i64 + two_z2).or_insert(0.0) += coef;
        }

        Ok(Self { alpha, chi, psi1, deltas, powers, fsb, terms_used, tail: sr.tail() })
    }

    pub fn deltas(&self) -> &[Delta] {
        &self.deltas
    }

    pub fn max_power(&self) -> u32 {
        self.powers.len() as u32 - 1
    }

    pub fn terms_used(&self) -> usize {
        self.terms_used
    }

    pub fn tail(&self) -> f64 {
        self.tail
    }

    /// Per-power factor `Σ_i c_i C(K_i, θ4) (-1)^{θ4}`.
    fn power_factors(&self, outer: &[(f64, u32)]) -> Vec<f64> {
        let kmax = outer.iter().map(|o| o.1).max().unwrap_or(0);
        assert!(kmax <= self.max_power(), "tables built for a lower power");
        (0..=kmax)
            .map(|k4| {
                let sign = if k4 % 2 == 0 { 1.0 } else { -1.0 };
                outer.iter().filter(|o| o.1 >= k4).map(|&(c, k)| c * binomial(k, k4) * sign).sum()
            })
            .collect()
    }

    fn collect(&self, merged: BTreeMap<(u32, i64), f64>, shift: u32) -> GenGammaSum {
        let terms = merged
            .into_iter()
            .filter(|(_, c)| *c != 0.0)
            .map(|((k4, two_r), c)| {
                let m = (k4 + shift) as f64;
                GenGammaTerm { c, r: two_r as f64 / 2.0, a: self.chi * m, b: self.psi1 * m }
            })
            .collect();
        GenGammaSum { alpha: self.alpha as f64, terms }
    }

    /// `Σ_i c_i F_sb^{K_i} f_sb`, expanded.
    pub fn density(&self, outer: &[(f64, u32)]) -> GenGammaSum {
        let mut merged = BTreeMap::new();
        for (k4, &factor) in self.power_factors(outer).iter().enumerate() {
            if factor == 0.0 {
                continue;
            }
            for (&e1, &p1) in &self.powers[k4] {
                for (&e2, &p2) in &self.fsb {
                    *merged.entry((k4 as u32, e1 + e2)).or_insert(0.0) += factor * p1 * p2;
                }
            }
        }
        self.collect(merged, 1)
    }

    /// `Σ_i c_i F_sb^{K_i}`, expanded.
    pub fn power_sum(&self, outer: &[(f64, u32)]) -> GenGammaSum {
        let mut merged = BTreeMap::new();
        for (k4, &factor) in self.power_factors(outer).iter().enumerate() {
            if factor == 0.0 {
                continue;
            }
            for (&e, &p) in &self.powers[k4] {
                *merged.entry((k4 as u32, e)).or_insert(0.0) += factor * p;
            }
        }
        self.collect(merged, 0)
    }
}
