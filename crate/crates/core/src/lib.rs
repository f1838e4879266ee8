//! Quantum kicked top.
//!
//! Classical stroboscopic map, Floquet dynamics of a spin `j`, single-qubit
//! (1:k) entanglement diagnostics, Floquet spectral analysis and Lindblad
//! decoherence between kicks. Everything is dense and sized for small `j`.

pub mod classical;
pub mod entanglement;
pub mod error;
pub mod linalg;
pub mod open_system;
pub mod quantum;
pub mod spin;
pub mod state;
pub mod stats;

pub use classical::{ClassicalPoint, TopParams};
pub use error::{Error, Result};
pub use quantum::{FloquetOperator, FloquetSpectrum, HusimiGrid};
pub use spin::{AngularMomentumOps, SphericalCoord, SpinQuantum};
pub use state::{DensityMatrix, Expectation, SpinState};
