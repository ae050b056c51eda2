//! Proximal gradient machinery shared by the DCT-norm, color and linear-TV
//! recoveries.
//!
//! Each inner solve minimizes
//! `w ||X||_r + prior(X) + alpha * coupling(X) + gamma/2 ||P_Omega(X - M^(k))||^2`
//! over one or more channels by a forward step on the smooth terms followed
//! by the truncated-nuclear proximal step, with monotone Nesterov momentum.

use nalgebra::DVector;

use super::config::RecoveryConfig;
use super::observation::ObservedImage;
use super::trace::SolveTrace;
use crate::error::{Error, Result};
use crate::lowrank::{prox_with_spectrum, svd};
use crate::regularizers::{
    dct_norm_multiscale, dct_norm_value_and_gradient, freq_coupling_gradient, freq_coupling_norm, tv_linear_gradient,
    tv_norm_linear, ScaleSpec,
};
use crate::Image;

const MAX_HALVINGS: usize = 20;

#[derive(Debug, Clone)]
pub(crate) enum Prior {
    Dct(Vec<ScaleSpec>),
    LinearTv(f64),
}

impl Prior {
    /// Value and full gradient of the prior.
    pub(crate) fn value_and_gradient(&self, x: &Image) -> Result<(f64, Image)> {
        match self {
            Prior::Dct(scales) => {
                let (value, half) = dct_norm_value_and_gradient(x, scales)?;
                Ok((value, half * 2.0))
            }
            Prior::LinearTv(lambda) => Ok((lambda * tv_norm_linear(x), tv_linear_gradient(x) * *lambda)),
        }
    }

    pub(crate) fn value(&self, x: &Image) -> Result<f64> {
        match self {
            Prior::Dct(scales) => dct_norm_multiscale(x, scales),
            Prior::LinearTv(lambda) => Ok(lambda * tv_norm_linear(x)),
        }
    }

    /// Upper bound on the Lipschitz constant of the prior's gradient.
    pub(crate) fn lipschitz(&self, dims: (usize, usize)) -> f64 {
        match self {
            // Each masked patch transform is an orthogonal projection, so a
            // scale contributes at most twice its weight times the largest
            // number of windows covering one pixel.
            Prior::Dct(scales) => scales.iter().map(|s| 2.0 * s.lambda * s.max_overlap(dims) as f64).sum(),
            // The Hessian is twice the grid Laplacian, whose norm is below 8.
            Prior::LinearTv(lambda) => 16.0 * lambda,
        }
    }
}

/// One inner problem over `targets.len()` channels.
pub(crate) struct Problem<'a> {
    pub targets: &'a [ObservedImage],
    pub prior: &'a Prior,
    pub rank_r: usize,
    pub nuclear_weight: f64,
    pub gamma: f64,
    pub alpha: f64,
}

struct Smooth {
    value: f64,
    grads: Vec<Image>,
}

impl Problem<'_> {
    pub(crate) fn lipschitz(&self) -> f64 {
        let dims = self.targets[0].dims();
        let coupling = if self.targets.len() > 1 { self.alpha * self.targets.len() as f64 } else { 0.0 };
        self.gamma + self.prior.lipschitz(dims) + coupling
    }

    fn smooth(&self, xs: &[Image]) -> Result<Smooth> {
        let mut value = 0.0;
        let mut grads = Vec::with_capacity(xs.len());
        for (x, obs) in xs.iter().zip(self.targets) {
            let (prior_value, mut grad) = self.prior.value_and_gradient(x)?;
            let residual = obs.mask().project(&(x - obs.data()));
            value += prior_value + 0.5 * self.gamma * residual.norm_squared();
            crate::add_scaled(&mut grad, self.gamma, &residual);
            grads.push(grad);
        }
        if self.alpha > 0.0 && xs.len() > 1 {
            value += self.alpha * freq_coupling_norm(xs)?;
            for (c, grad) in grads.iter_mut().enumerate() {
                crate::add_scaled(grad, self.alpha, &freq_coupling_gradient(xs, c)?);
            }
        }
        Ok(Smooth { value, grads })
    }

    fn nuclear(&self, spectrum: &DVector<f64>) -> f64 {
        self.nuclear_weight * spectrum.iter().skip(self.rank_r).sum::<f64>()
    }

    pub(crate) fn objective(&self, xs: &[Image]) -> Result<f64> {
        let mut total = self.smooth(xs)?.value;
        if self.nuclear_weight > 0.0 {
            for x in xs {
                total += self.nuclear(&svd(x)?.sigma);
            }
        }
        Ok(total)
    }

    fn smooth_value(&self, xs: &[Image]) -> Result<f64> {
        let mut value = 0.0;
        for (x, obs) in xs.iter().zip(self.targets) {
            let residual = obs.mask().project(&(x - obs.data()));
            value += self.prior.value(x)? + 0.5 * self.gamma * residual.norm_squared();
        }
        if self.alpha > 0.0 && xs.len() > 1 {
            value += self.alpha * freq_coupling_norm(xs)?;
        }
        Ok(value)
    }

    /// Forward step from `ys` along `grads` followed by the nuclear prox.
    /// Returns the candidate and its nuclear term.
    fn forward_backward(&self, ys: &[Image], grads: &[Image], t: f64, iteration: usize) -> Result<(Vec<Image>, f64)> {
        let mut candidate = Vec::with_capacity(ys.len());
        let mut nuclear = 0.0;
        for (y, g) in ys.iter().zip(grads) {
            let forward = y - g * t;
            if forward.iter().any(|v| !v.is_finite()) {
                return Err(Error::Divergence { iteration });
            }
            if self.nuclear_weight > 0.0 {
                let (next, sigma) = prox_with_spectrum(&forward, self.rank_r, t * self.nuclear_weight)?;
                candidate.push(next);
                nuclear += self.nuclear(&sigma);
            } else {
                candidate.push(forward);
            }
        }
        Ok((candidate, nuclear))
    }

    /// Accelerated proximal gradient from `start` until the relative change
    /// of the iterate drops below `tol` or `max_iters` steps are taken.
    ///
    /// Extrapolated points are only used to propose candidates: a candidate
    /// replaces the current iterate when it does not raise the objective, and
    /// otherwise the momentum is reset and a plain step is taken from the
    /// current iterate. The step halves whenever the quadratic upper bound at
    /// the extrapolated point fails.
    pub(crate) fn solve(
        &self,
        start: Vec<Image>,
        step: f64,
        tol: f64,
        max_iters: usize,
        reference: &[ObservedImage],
        trace: &mut SolveTrace,
    ) -> Result<Vec<Image>> {
        let mut xs = start;
        let mut value = self.objective(&xs)?;
        if !value.is_finite() {
            return Err(Error::Divergence { iteration: 0 });
        }
        trace.objective.push(value);
        trace.fidelity.push(fidelity(&xs, reference));

        let mut ys = xs.clone();
        let mut momentum = 1.0_f64;
        let mut t = step;
        let mut iterations = 0;
        while iterations < max_iters {
            let at_y = self.smooth(&ys)?;
            let mut halvings = 0;
            let (candidate, cand_value) = loop {
                let (candidate, nuclear) = self.forward_backward(&ys, &at_y.grads, t, iterations)?;
                let smooth = self.smooth_value(&candidate)?;
                if !smooth.is_finite() || !nuclear.is_finite() {
                    return Err(Error::Divergence { iteration: iterations });
                }
                let mut bound = at_y.value;
                let mut magnitude = at_y.value.abs();
                for ((z, y), g) in candidate.iter().zip(&ys).zip(&at_y.grads) {
                    let d = z - y;
                    let (linear, quadratic) = (g.dot(&d), d.norm_squared() / (2.0 * t));
                    bound += linear + quadratic;
                    magnitude += linear.abs() + quadratic;
                }
                // The bound cancels to near zero when exact, so roundoff is
                // measured against its terms.
                if smooth <= bound + 1e-12 * magnitude.max(1.0) || halvings == MAX_HALVINGS {
                    break (candidate, smooth + nuclear);
                }
                halvings += 1;
                t *= 0.5;
            };
            iterations += 1;

            if cand_value <= value {
                let change: f64 = xs.iter().zip(&candidate).map(|(a, b)| (a - b).norm_squared()).sum::<f64>().sqrt();
                let scale: f64 = xs.iter().map(|x| x.norm_squared()).sum::<f64>().sqrt().max(1.0);
                let next_momentum = 0.5 * (1.0 + (1.0 + 4.0 * momentum * momentum).sqrt());
                let beta = (momentum - 1.0) / next_momentum;
                ys = candidate.iter().zip(&xs).map(|(z, x)| z + (z - x) * beta).collect();
                momentum = next_momentum;
                xs = candidate;
                value = cand_value;
                trace.objective.push(value);
                trace.fidelity.push(fidelity(&xs, reference));
                if change / scale < tol {
                    break;
                }
            } else {
                trace.objective.push(value);
                trace.fidelity.push(fidelity(&xs, reference));
                if momentum == 1.0 {
                    // A plain step from the iterate itself made no progress.
                    break;
                }
                momentum = 1.0;
                ys = xs.clone();
            }
        }
        trace.inner_iterations.push(iterations);
        Ok(xs)
    }
}

fn fidelity(xs: &[Image], reference: &[ObservedImage]) -> f64 {
    xs.iter().zip(reference).map(|(x, obs)| obs.mask().project(&(x - obs.data())).norm_squared()).sum::<f64>().sqrt()
}

/// Outer refinement: alternately solve the inner problem against `M^(k)` and
/// update `M^(k+1) = M^(k) + delta P_Omega(M - X^(k))`.
///
/// The inner solve is warm-started from the previous estimate. The loop stops
/// once either `||M^(k+1) - X^(k)||_F` or `||M^(k+1) - M^(k)||_F` falls to
/// `outer_eps`, or after `outer_max_iters` updates.
pub(crate) fn refine(
    observations: &[ObservedImage],
    prior: &Prior,
    rank_r: usize,
    step: f64,
    cfg: &RecoveryConfig,
) -> Result<(Vec<Image>, SolveTrace)> {
    let mut trace = SolveTrace::default();
    let mut targets: Vec<ObservedImage> = observations.to_vec();
    let mut xs: Vec<Image> = observations.iter().map(|o| o.data().clone()).collect();

    for _ in 0..cfg.outer_max_iters {
        let problem = Problem {
            targets: &targets,
            prior,
            rank_r,
            nuclear_weight: cfg.nuclear_weight,
            gamma: cfg.gamma,
            alpha: cfg.alpha,
        };
        xs = problem.solve(xs, step, cfg.inner_tol, cfg.inner_max_iters, observations, &mut trace)?;

        let mut residual_sq = 0.0;
        let mut change_sq = 0.0;
        let mut next_targets = Vec::with_capacity(targets.len());
        for ((target, obs), x) in targets.iter().zip(observations).zip(&xs) {
            let update = obs.mask().project(&(obs.data() - x)) * cfg.delta;
            let next = target.data() + &update;
            residual_sq += (&next - x).norm_squared();
            change_sq += update.norm_squared();
            next_targets.push(target.with_data(next));
        }
        let (residual, change) = (residual_sq.sqrt(), change_sq.sqrt());
        trace.outer_residual.push(residual);
        trace.outer_change.push(change);
        targets = next_targets;
        if residual <= cfg.outer_eps || change <= cfg.outer_eps {
            break;
        }
    }
    Ok((xs, trace))
}
