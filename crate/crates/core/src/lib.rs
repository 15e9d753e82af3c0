//! Mixed Fourier analysis on the cylinder `T^1 x R`.
//!
//! * [`transforms`]: partial transforms in `t` and `x`, the mixed transform and multipliers.
//! * [`diagnostics`]: seminorms, decay certificates and growth checks on grids.
//! * [`symbol`]: exact decision of Schwartz global hypoellipticity (SGH) with witnesses and gaps.
//! * [`solver`] and [`conjugation`]: symbol-division solves and the reduction of
//!   variable real-coefficient first-order operators to normal form.

pub mod builtins;
pub mod conjugation;
pub mod diagnostics;
pub mod error;
pub mod field;
pub mod grid;
pub mod io;
pub mod operator;
pub mod poly;
pub mod scalar;
pub mod solver;
pub mod symbol;
pub mod transforms;
pub mod trig;

pub use error::{Error, Result};
pub use field::{DataKind, GridData, LineSpectrum, MixedSpectrum, SampledField, TorusSpectrum};
pub use grid::CylinderGrid;
pub use operator::DifferentialOperator;
pub use scalar::{ComplexRational, Rational};
pub use symbol::{SghReport, Verdict, Witness};

/// Caps the rayon pool at `CYL_NUM_THREADS` when set. Call once before heavy work;
/// later calls are ignored.
pub fn init_thread_pool_from_env() {
    if let Some(n) = std::env::var("CYL_NUM_THREADS").ok().and_then(|v| v.parse::<usize>().ok()).filter(|&n| n > 0) {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
}
