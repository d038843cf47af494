//! Secrecy performance of a dual-hop satellite-terrestrial multicast relay
//! network: shadowed-Rician uplink, α-μ terrestrial links, best-relay
//! selection, worst-user multicast and strongest-eavesdropper wiretap.
//!
//! Every metric is available through three independent routes: a truncated
//! closed-form series, direct numerical quadrature and Monte-Carlo simulation.

pub mod channels;
pub mod cli;
pub mod error;
pub mod mc;
pub mod metrics;
pub mod orderstats;
pub mod quadrature;
pub mod specfun;

pub use error::{Error, Result};
