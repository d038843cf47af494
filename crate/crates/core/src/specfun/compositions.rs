//! Weak compositions: ordered lists of non-negative parts with a fixed sum.
//! These index the terms of a multinomial expansion.

use crate::error::{invalid, Error, Result};
use crate::specfun::gamma::ln_factorial;

/// Default cap on the number of enumerated compositions.
pub const DEFAULT_COMPOSITION_CAP: usize = 2_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Composition {
    pub parts: Vec<u32>,
    pub total: u32,
}

impl Composition {
    /// Multinomial coefficient `total! / Π parts!`.
    pub fn multinomial(&self) -> f64 {
        let ln = ln_factorial(self.total)
            - self.parts.iter().map(|&t| ln_factorial(t)).sum::<f64>();
        ln.exp().round_if_integral()
    }
}

trait RoundIfIntegral {
    fn round_if_integral(self) -> Self;
}

impl RoundIfIntegral for f64 {
    fn round_if_integral(self) -> f64 {
        // multinomials below 2^53 are integers; strip the ln/exp noise
        if self < 9.0e15 {
            self.round()
        } else {
            self
        }
    }
}

/// Number of weak compositions of `total` into `num_parts` parts,
/// `C(total + num_parts - 1, num_parts - 1)`, as a float.
pub fn composition_count(num_parts: usize, total: u32) -> f64 {
    if num_parts == 0 {
        return if total == 0 { 1.0 } else { 0.0 };
    }
    let k = (num_parts - 1) as f64;
    let t = total as f64;
    let ln = libm::lgamma(t + k + 1.0) - libm::lgamma(k + 1.0) - libm::lgamma(t + 1.0);
    ln.exp().round_if_integral()
}

/// Lexicographic iterator over weak compositions.
#[derive(Debug, Clone)]
pub struct Compositions {
    current: Option<Vec<u32>>,
    total: u32,
}

impl Iterator for Compositions {
    type Item = Composition;

    fn next(&mut self) -> Option<Composition> {
        let parts = self.current.take()?;
        let out = Composition { parts: parts.clone(), total: self.total };
        let k = parts.len();
        let mut next = parts;
        // rightmost i < k-1 whose suffix still holds mass
        let mut suffix = next[k - 1];
        let mut i = k - 1;
        while i > 0 {
            i -= 1;
            if suffix > 0 {
                next[i] += 1;
                for p in next.iter_mut().skip(i + 1) {
                    *p = 0;
                }
                next[k - 1] = suffix - 1;
                self.current = Some(next);
                return Some(out);
            }
            suffix += next[i];
        }
        Some(out)
    }
}

/// Enumerates every weak composition of `total` into `num_parts` parts in
/// lexicographic order, refusing when the count exceeds `cap`.
pub fn enumerate_compositions(num_parts: usize, total: u32, cap: usize) -> Result<Compositions> {
    if num_parts == 0 {
        return Err(invalid("compositions need at least one part"));
    }
    let count = composition_count(num_parts, total);
    if count > cap as f64 {
        return Err(Error::Resource { requested: count, cap });
    }
    let mut first = vec![0; num_parts];
    first[num_parts - 1] = total;
    Ok(Compositions { current: Some(first), total })
}
