//! Comparison solvers: singular value thresholding, linear TV plus nuclear
//! norm, and DCT-norm-only recovery under hard observation constraints.

use nalgebra::DMatrix;

use super::config::RecoveryConfig;
use super::dnm::{clamp_pixels, require_observations};
use super::engine::{refine, Prior};
use super::observation::{ObservationMask, ObservedImage};
use super::trace::SolveTrace;
use crate::error::{Error, Result};
use crate::lowrank::{svd, svt_shrink};
use crate::regularizers::{dct_norm_gradient, ScaleSpec};
use crate::Image;

/// Geometric threshold continuation `tau_k = max(start * decay^k, floor)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TauSchedule {
    pub start: f64,
    pub decay: f64,
    pub floor: f64,
}

impl TauSchedule {
    pub fn constant(tau: f64) -> Self {
        Self { start: tau, decay: 1.0, floor: tau }
    }

    pub fn tau(&self, k: usize) -> f64 {
        (self.start * self.decay.powi(k as i32)).max(self.floor)
    }

    /// Starts at half the spectral norm of the zero-filled observation and
    /// decays to `1e-4` of it.
    pub fn for_observation(obs: &ObservedImage) -> Result<Self> {
        let top = svd(obs.data())?.sigma.iter().copied().fold(0.0, f64::max);
        Ok(Self { start: 0.5 * top, decay: 0.95, floor: 1e-4 * top })
    }
}

/// Nuclear-norm completion by iterated singular value thresholding with the
/// observed entries re-imposed before every shrink and once more at the end.
pub fn recover_svt(obs: &ObservedImage, schedule: &TauSchedule, iters: usize) -> Result<Image> {
    let mask = obs.mask();
    let mut x = obs.data().clone();
    for k in 0..iters {
        mask.impose(&mut x, obs.data());
        x = svt_shrink(&x, schedule.tau(k))?;
        if x.iter().any(|v| !v.is_finite()) {
            return Err(Error::Divergence { iteration: k });
        }
    }
    mask.impose(&mut x, obs.data());
    Ok(x)
}

/// Nuclear norm plus `ltv_lambda` times linear TV, solved with the same
/// proximal gradient and outer refinement as [`super::recover`] but with every
/// singular value penalized.
pub fn recover_ltvnn(obs: &ObservedImage, cfg: &RecoveryConfig) -> Result<(Image, SolveTrace)> {
    require_observations(obs)?;
    let mut cfg = cfg.clone();
    cfg.scales.clear();
    cfg.validate(obs.dims())?;
    let prior = Prior::LinearTv(cfg.ltv_lambda);
    let step = cfg.step_size.unwrap_or(1.0 / (cfg.gamma + prior.lipschitz(obs.dims())));
    let (mut xs, trace) = refine(std::slice::from_ref(obs), &prior, 0, step, &cfg)?;
    let mut x = xs.remove(0);
    clamp_pixels(&mut x);
    Ok((x, trace))
}

/// Which DCT-norm scales a DCT-only recovery uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DctMode {
    /// Only the largest-patch scale of the configuration.
    Global,
    /// Only the smallest-patch scale of the configuration.
    Local,
    /// Every configured scale.
    Multiscale,
}

impl DctMode {
    pub fn select(&self, scales: &[ScaleSpec]) -> Result<Vec<ScaleSpec>> {
        let pick = |best: Option<&ScaleSpec>| {
            best.map(|s| vec![*s]).ok_or_else(|| Error::Config("DCT-only recovery needs at least one scale".into()))
        };
        match self {
            DctMode::Global => pick(scales.iter().max_by_key(|s| s.p)),
            DctMode::Local => pick(scales.iter().min_by_key(|s| s.p)),
            DctMode::Multiscale if scales.is_empty() => pick(None),
            DctMode::Multiscale => Ok(scales.to_vec()),
        }
    }
}

const CG_RELATIVE_TOL: f64 = 1e-12;
/// Residuals below this fraction of `||H|| ||x0||` are roundoff.
const CG_ROUNDOFF: f64 = 1e-13;

/// Minimize the selected DCT norms subject to `X_Omega = M_Omega`.
///
/// The objective is a quadratic in the unobserved pixels, so the projected
/// gradient iteration is run as conjugate gradients restricted to those
/// pixels, with `inner_max_iters * outer_max_iters` as the iteration cap.
/// Iterations start from the observed mean in every missing pixel; when the
/// selected norms leave more freedom than the observations pin down, this
/// picks the minimizer closest to that flat fill. Observed pixels are copied
/// from the observation and never modified.
pub fn recover_dct_only(obs: &ObservedImage, mode: DctMode, cfg: &RecoveryConfig) -> Result<(Image, SolveTrace)> {
    require_observations(obs)?;
    let scales = mode.select(&cfg.scales)?;
    for s in &scales {
        s.check_dims(obs.dims())?;
    }
    let mask = obs.mask();
    let max_iters = cfg.inner_max_iters.saturating_mul(cfg.outer_max_iters);
    let bound = Prior::Dct(scales.clone()).lipschitz(obs.dims());
    let (x, trace) = constrained_quadratic_cg(obs, |v| Ok(dct_norm_gradient(v, &scales)? * 2.0), bound, max_iters)?;
    debug_assert!(mask.flags().iter().zip(x.iter().zip(obs.data().iter())).all(|(o, (a, b))| !o || a == b));
    Ok((x, trace))
}

/// Solve `min_x 1/2 x^T H x` subject to the observed entries of `obs`, where
/// `hessian(v) = H v` and `H` is symmetric positive semidefinite, starting
/// from the mean-filled observation. `bound` is an upper bound on `||H||`.
pub(crate) fn constrained_quadratic_cg(
    obs: &ObservedImage,
    hessian: impl Fn(&Image) -> Result<Image>,
    bound: f64,
    max_iters: usize,
) -> Result<(Image, SolveTrace)> {
    let mask = obs.mask();
    let restrict = |v: &mut Image| restrict_free(mask, v);

    let mut x = mean_filled(obs);
    let mut hx = hessian(&x)?;
    let mut residual = -hx.clone();
    restrict(&mut residual);
    let b_norm = residual.norm();
    let stop = (CG_RELATIVE_TOL * b_norm).max(CG_ROUNDOFF * bound * x.norm());

    let mut trace = SolveTrace::default();
    let objective = |x: &Image, hx: &Image| 0.5 * x.dot(hx);
    trace.objective.push(objective(&x, &hx));
    trace.fidelity.push(0.0);

    let mut direction = residual.clone();
    let mut rr = residual.norm_squared();
    let mut iterations = 0;
    while iterations < max_iters && rr.sqrt() > stop {
        let hp = hessian(&direction)?;
        let curvature = direction.dot(&hp);
        if curvature <= 0.0 {
            break;
        }
        let step = rr / curvature;
        crate::add_scaled(&mut x, step, &direction);
        crate::add_scaled(&mut hx, step, &hp);
        let mut hp_free = hp;
        restrict(&mut hp_free);
        crate::add_scaled(&mut residual, -step, &hp_free);
        if x.iter().any(|v| !v.is_finite()) {
            return Err(Error::Divergence { iteration: iterations });
        }
        let rr_next = residual.norm_squared();
        direction = &residual + &direction * (rr_next / rr);
        rr = rr_next;
        iterations += 1;
        trace.objective.push(objective(&x, &hx));
        trace.fidelity.push(0.0);
    }
    trace.inner_iterations.push(iterations);
    mask.impose(&mut x, obs.data());
    Ok((x, trace))
}

/// The observation with every missing pixel set to the mean observed value.
fn mean_filled(obs: &ObservedImage) -> Image {
    let mask = obs.mask();
    let count = mask.observed_count().max(1) as f64;
    let mean = obs.data().iter().zip(mask.flags()).filter(|(_, &o)| o).map(|(v, _)| v).sum::<f64>() / count;
    let mut x = obs.data().clone();
    for (v, &observed) in x.iter_mut().zip(mask.flags()) {
        if !observed {
            *v = mean;
        }
    }
    x
}

fn restrict_free(mask: &ObservationMask, v: &mut DMatrix<f64>) {
    for (value, &observed) in v.iter_mut().zip(mask.flags()) {
        if observed {
            *value = 0.0;
        }
    }
}
