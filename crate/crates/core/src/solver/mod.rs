//! Recovery solvers: the DCT-norm objective with truncated nuclear norm
//! (grayscale and color), and the SVT, linear-TV and DCT-only baselines.

mod baselines;
mod color;
mod config;
mod dnm;
mod engine;
mod observation;
mod trace;

pub use baselines::{recover_dct_only, recover_ltvnn, recover_svt, DctMode, TauSchedule};
pub use color::recover_color;
pub use config::{
    default_scales, three_eighths, RecoveryConfig, DEFAULT_ALPHA, DEFAULT_DELTA, DEFAULT_GAMMA,
    DEFAULT_INNER_MAX_ITERS, DEFAULT_INNER_TOL, DEFAULT_LAMBDA, DEFAULT_OUTER_EPS, DEFAULT_OUTER_MAX_ITERS,
};
pub use dnm::{default_step_size, objective_value, recover, solve_inner};
pub use observation::{ObservationMask, ObservedImage};
pub use trace::SolveTrace;
