//! Simulators for mistrustful two-party quantum protocols that act on many
//! bits at once: bit-wise string commitment, codebook string commitment and
//! cut-and-choose coin tossing from Bell singlets.
//!
//! Every security bound these protocols rely on is checked numerically. The
//! linear algebra is exact and dense ([`qmath`]), adversaries are optimized
//! spectrally where that is possible, and everything stochastic runs on
//! labelled, seeded ChaCha streams ([`rng`]) so that whole sessions replay
//! byte-for-byte through the [`harness`].

// `!(x < y)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bitstring;
pub mod bitwise;
pub mod codebook;
pub mod cointoss;
mod error;
pub mod fmt;
pub mod harness;
pub mod qmath;
pub mod rng;

pub use bitstring::BitString;
pub use error::{Error, Result};
