use super::config::RecoveryConfig;
use super::engine::{refine, Prior, Problem};
use super::observation::ObservedImage;
use super::trace::SolveTrace;
use crate::error::{Error, Result};
use crate::Image;

/// `1 / L` for `L = gamma + 2 sum_i lambda_i * overlap_i`, where `overlap_i`
/// is the largest number of `p_i x p_i` windows covering any pixel of an
/// image of size `dims` (at most `p_i^2`).
pub fn default_step_size(cfg: &RecoveryConfig, dims: (usize, usize)) -> f64 {
    let prior = Prior::Dct(cfg.scales.clone());
    1.0 / (cfg.gamma + prior.lipschitz(dims))
}

fn step_for(cfg: &RecoveryConfig, lipschitz: f64) -> f64 {
    cfg.step_size.unwrap_or(1.0 / lipschitz)
}

/// `w ||X||_r + sum_i lambda_i ||X||_DCT^{p_i,q_i} + gamma/2 ||P_Omega(X - M)||_F^2`.
pub fn objective_value(x: &Image, obs: &ObservedImage, cfg: &RecoveryConfig) -> Result<f64> {
    if x.shape() != obs.dims() {
        return Err(Error::InvalidDimension(format!(
            "estimate is {:?} but observation is {:?}",
            x.shape(),
            obs.dims()
        )));
    }
    cfg.validate(obs.dims())?;
    let prior = Prior::Dct(cfg.scales.clone());
    let targets = std::slice::from_ref(obs);
    let problem = Problem {
        targets,
        prior: &prior,
        rank_r: cfg.rank_r,
        nuclear_weight: cfg.nuclear_weight,
        gamma: cfg.gamma,
        alpha: 0.0,
    };
    problem.objective(std::slice::from_ref(x))
}

/// Proximal gradient iterations on the grayscale objective from `x0`.
pub fn solve_inner(obs: &ObservedImage, x0: &Image, cfg: &RecoveryConfig) -> Result<(Image, SolveTrace)> {
    if x0.shape() != obs.dims() {
        return Err(Error::InvalidDimension(format!(
            "initial estimate is {:?} but observation is {:?}",
            x0.shape(),
            obs.dims()
        )));
    }
    cfg.validate(obs.dims())?;
    let prior = Prior::Dct(cfg.scales.clone());
    let targets = std::slice::from_ref(obs);
    let problem = Problem {
        targets,
        prior: &prior,
        rank_r: cfg.rank_r,
        nuclear_weight: cfg.nuclear_weight,
        gamma: cfg.gamma,
        alpha: 0.0,
    };
    let step = step_for(cfg, problem.lipschitz());
    let mut trace = SolveTrace::default();
    let mut out = problem.solve(vec![x0.clone()], step, cfg.inner_tol, cfg.inner_max_iters, targets, &mut trace)?;
    Ok((out.remove(0), trace))
}

pub(crate) fn require_observations(obs: &ObservedImage) -> Result<()> {
    if obs.mask().observed_count() == 0 {
        return Err(Error::InsufficientData("no observed pixels".into()));
    }
    Ok(())
}

pub(crate) fn clamp_pixels(x: &mut Image) {
    x.apply(|v| *v = v.clamp(0.0, 255.0));
}

/// Full DCT-norm recovery: inner proximal gradient solves wrapped in the outer
/// observation refinement. The result is clamped to `[0, 255]`.
pub fn recover(obs: &ObservedImage, cfg: &RecoveryConfig) -> Result<(Image, SolveTrace)> {
    require_observations(obs)?;
    cfg.validate(obs.dims())?;
    let prior = Prior::Dct(cfg.scales.clone());
    let step = step_for(cfg, cfg.gamma + prior.lipschitz(obs.dims()));
    let (mut xs, trace) = refine(std::slice::from_ref(obs), &prior, cfg.rank_r, step, cfg)?;
    let mut x = xs.remove(0);
    clamp_pixels(&mut x);
    Ok((x, trace))
}
