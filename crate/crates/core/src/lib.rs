//! Parity detection for a Mach-Zehnder interferometer in the Schwinger
//! (SU(2)) picture: Wigner rotation kernels, the input states studied in the
//! literature, the interferometer transformations, parity expectation values
//! and phase uncertainties, and a dense Fock-space oracle for cross-checks.

pub mod detection;
pub mod error;
pub mod halfint;
pub mod interferometer;
pub mod oracle;
pub mod states;
pub mod sweep;
pub mod wigner;

pub use detection::{BenchmarkLimits, DetectionResult};
pub use error::{Error, Result};
pub use halfint::HalfInt;
pub use states::{CombinedStateParams, Frame, StateFamily, TwoModeState};
pub use wigner::WignerBlock;
