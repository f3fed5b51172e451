//! Baseband link-level simulator for time-domain synchronous OFDM (TDS-OFDM).
//!
//! The crate models the upsample / square-root-raised-cosine / channel /
//! matched-filter / downsample chain of a DTMB-style transceiver, with an
//! explicit receiver sampling phase `epsilon` (in symbol periods). On top of
//! that it provides:
//!
//! - the closed-form equivalent channel response seen by each subcarrier,
//!   including the spectral aliasing in the roll-off band ([`channel`]),
//! - theoretical SER/BER, an exponential surrogate, and the roll-off band
//!   power criterion for choosing the sampling phase ([`analysis`]),
//! - the conventional PN-correlation timing recovery loop ([`timing`]),
//! - a deterministic, parallel Monte-Carlo BER engine driven by TOML
//!   scenario files ([`harness`]).

pub mod analysis;
pub mod channel;
pub mod dsp;
mod error;
pub mod frame;
pub mod harness;
pub mod timing;

pub use error::{Error, Result};
pub use num_complex::Complex64;
