//! Bloch-oscillating discrete-time quantum walks.
//!
//! * [`walk`]: position-space states and the stepping engine.
//! * [`spectral`]: Bloch unitaries, bands, chiral axis and winding number.
//! * [`phases`]: dynamical and geometric phases, refocusing, Landau-Zener
//!   leakage and the single-step revival check.
//! * [`cqed`]: a qutrit coupled to a truncated cavity that realizes the walk
//!   on a ring of coherent states, plus Wigner tomography.

pub mod angle;
pub mod cqed;
pub mod phases;
pub mod spectral;
pub mod spin;
pub mod walk;

pub type C64 = num_complex::Complex64;

pub use spin::{coin_rotation, Axis, SpinMatrix, SpinState};
pub use walk::{Coins, Frame, Protocol, SpinorField, WalkParams};
