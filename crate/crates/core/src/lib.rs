//! Maximum-likelihood and matching decoders for the planar surface code.

pub mod decoder;
pub mod error;
pub mod gaussian;
pub mod harness;
pub mod lattice;
pub mod logmath;
pub mod mps;
pub mod mwm;
pub mod noise;
pub mod pauli;

pub use decoder::{Decision, Decoder};
pub use error::{Error, Result};
pub use gaussian::GaussianDecoder;
pub use lattice::{LogicalClass, SurfaceCode, Syndrome};
pub use mps::MpsDecoder;
pub use mwm::MwmDecoder;
pub use noise::NoiseModel;
pub use pauli::{Pauli, PauliOperator};
