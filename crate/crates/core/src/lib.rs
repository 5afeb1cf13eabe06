//! Polar coding laboratory.

pub mod channels;
pub mod construction;
pub mod decoders;
pub mod error;
pub mod harness;
pub mod polar;
pub mod quantum;
pub mod scalar;
pub mod seed;
pub mod stats;

pub use channels::{ChannelModel, LlrVec};
pub use construction::{Metric, ReliabilityProfile};
pub use error::{PolarError, Result};
pub use polar::{BitVector, CodeSpec, CrcPoly};
pub use scalar::Llr;

/// Double-precision LLR vector.
pub type LlrVector = LlrVec<f64>;
/// Single-precision LLR vector.
pub type LlrVectorF32 = LlrVec<f32>;
