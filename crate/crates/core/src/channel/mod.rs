//! Multipath channel, noise injection, and the equivalent symbol-rate
//! response seen by each subcarrier for a given receiver sampling phase.

mod estimate;
pub(crate) mod impair;
mod phase;
mod profile;
mod response;

pub use estimate::estimate_response_from_pn;
pub use impair::{add_awgn, add_awgn_with_power, apply_channel, noise_variance_per_dim};
pub use phase::SamplingPhase;
pub use profile::{ChannelProfile, Tap};
pub use response::{equiv_response, equiv_response_awgn, equiv_response_awgn_bins, EquivResponse};
