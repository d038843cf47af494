//! Special-function kernel shared by the analytical paths.
//!
//! Everything here is a pure function of its arguments.

pub mod compositions;
pub mod gamma;
pub mod hypergeometric;
pub mod meijer;
pub mod polygamma;

pub use compositions::{composition_count, enumerate_compositions, Composition, Compositions, DEFAULT_COMPOSITION_CAP};
pub use gamma::{
    binomial, factorial, gamma, gamma_p, gamma_q, ln_factorial, ln_gamma, pochhammer, upper_incomplete_gamma,
    upper_incomplete_gamma_cf,
};
pub use hypergeometric::{kummer_1f1, kummer_1f1_with_cap, ln_kummer_1f1_positive};
pub use meijer::{
    delta_list, gen_gamma_integral_meijer, ln_gamma_complex, log_gen_gamma_integral_meijer, meijer_g, meijer_g_with,
    ContourControl, MeijerGSpec,
};
pub use polygamma::{digamma, inverse_trigamma, inverse_trigamma_in, trigamma};
