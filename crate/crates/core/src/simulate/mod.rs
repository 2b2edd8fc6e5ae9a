//! Sampled and exact experiments over β.
//!
//! * [`lyapunov_mc`] estimates `γ = lim (1/n) log|x_n|` from independent
//!   trajectories, each on its own counter-based random stream.
//! * [`mean_growth_sweep`] evaluates `E|x_n|` for a fixed level across a β grid,
//!   exactly through the tree enumerator or by sampling.
//! * [`growth_sign_crossing`] bisects on the sign of the estimated `γ`.
//! * [`breakpoints`] lists the β values where the exact fixed-level mean can
//!   fail to be smooth.

mod breakpoints;
mod mc;
mod sweep;

pub use breakpoints::{breakpoints, Breakpoint, DEFAULT_BREAKPOINT_LEVEL_CAP};
pub use mc::{growth_sign_crossing, lyapunov_mc, Crossing, LyapunovEstimate, McConfig};
pub use sweep::{mean_growth_sweep, SweepMode, SweepPoint, SweepValue};
