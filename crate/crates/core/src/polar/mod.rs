//! Polar transform, frozen-set bookkeeping, encoding and CRC.
//!
//! Indices are 0-based inside the crate. Text formats and the command line
//! use 1-based indices; conversion happens in [`spec`] and the sequence I/O
//! of the construction module only.

mod bits;
pub mod crc;
pub mod spec;
pub mod transform;

pub use bits::BitVector;
pub use crc::{crc_attach, crc_check, CrcPoly};
pub use spec::CodeSpec;
pub use transform::{
    bit_reversal_permutation, generator_matrix, log2_exact, polar_transform,
    polar_transform_in_place, transposed_transform_in_place,
};
