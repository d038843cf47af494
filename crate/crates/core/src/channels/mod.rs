//! Single-link channel models: Shadowed-Rician for the satellite hop and
//! α-μ for the terrestrial hops.

pub mod alpha_mu;
pub mod loo;
pub mod shadowed_rician;
pub mod units;

pub use alpha_mu::{alphamu_ccdf, alphamu_pdf, alphamu_sample, AlphaMuCoefficients, AlphaMuParams};
pub use loo::{loo_to_sr, shadowing_preset, sr_to_loo, LooParams, Shadowing, TABLE1};
pub use shadowed_rician::{sr_ccdf, sr_pdf, sr_sample, PdfForm, SrCoefficients, SrParams, SrSeries};
pub use units::{db_to_linear, linear_to_db};

use crate::error::{invalid, Result};
use crate::specfun::DEFAULT_COMPOSITION_CAP;

/// Truncation limits for every infinite series in the crate.
///
/// `t1_max`/`t2_max` are the starting term counts for the first-hop series
/// of the user and eavesdropper links; they are extended one term at a time
/// up to `t_cap` until the omitted probability mass is below `tol`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesControl {
    pub t1_max: usize,
    pub t2_max: usize,
    pub t_cap: usize,
    pub comp_cap: usize,
    pub tol: f64,
}

impl Default for SeriesControl {
    fn default() -> Self {
        Self { t1_max: 20, t2_max: 20, t_cap: 60, comp_cap: DEFAULT_COMPOSITION_CAP, tol: 1e-10 }
    }
}

impl SeriesControl {
    /// Fixed truncation: exactly `terms` terms, tail reported but never extended.
    pub fn fixed(terms: usize) -> Self {
        Self { t1_max: terms, t2_max: terms, t_cap: terms, tol: f64::INFINITY, ..Self::default() }
    }

    pub fn with_terms(mut self, terms: usize) -> Self {
        self.t1_max = terms;
        self.t2_max = terms;
        self.t_cap = self.t_cap.max(terms);
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.t1_max < 1 || self.t2_max < 1 {
            return Err(invalid("series needs at least one term"));
        }
        if self.t_cap < self.t1_max.max(self.t2_max) {
            return Err(invalid("t_cap below the starting term count"));
        }
        if !(self.tol > 0.0) {
            return Err(invalid("series tolerance must be positive"));
        }
        Ok(())
    }
}
