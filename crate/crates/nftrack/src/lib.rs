//! Near-field beam focusing analysis and sensing-aided beam tracking for
//! base stations built from dynamic metasurface antennas.
//!
//! The crate is organized bottom-up: array [`geometry`], [`special`]
//! functions, closed-form [`analysis`] of depth of focus and beamwidth,
//! [`channel`] synthesis, [`beamformer`] weights and gains, the polar
//! search [`grid`], the [`tracker`] protocol and the simulation harness in
//! [`sim`].

// `!(x > 0.0)` style checks are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod beamformer;
pub mod channel;
pub mod error;
pub mod geometry;
pub mod grid;
pub mod sim;
pub mod special;
pub mod tracker;

pub use error::{Error, Result};
