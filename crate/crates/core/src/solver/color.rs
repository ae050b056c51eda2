use super::config::RecoveryConfig;
use super::dnm::{clamp_pixels, recover, require_observations};
use super::engine::{refine, Prior};
use super::observation::ObservedImage;
use super::trace::SolveTrace;
use crate::error::{Error, Result};
use crate::Image;

/// Joint recovery of a multi-channel image.
///
/// Channels share the per-channel nuclear and DCT terms and are tied together
/// by the frequency coupling term weighted by `cfg.alpha`. With `alpha = 0`
/// the objective separates, and each channel is recovered on its own.
pub fn recover_color(channels: &[ObservedImage], cfg: &RecoveryConfig) -> Result<(Vec<Image>, SolveTrace)> {
    let first = channels.first().ok_or_else(|| Error::InvalidDimension("no channels given".into()))?;
    let dims = first.dims();
    if let Some(bad) = channels.iter().find(|c| c.dims() != dims) {
        return Err(Error::InvalidDimension(format!("channel sizes differ: {:?} vs {:?}", dims, bad.dims())));
    }
    for c in channels {
        require_observations(c)?;
    }
    cfg.validate(dims)?;

    if cfg.alpha == 0.0 || channels.len() == 1 {
        let mut out = Vec::with_capacity(channels.len());
        let mut trace = SolveTrace::default();
        for c in channels {
            let (x, t) = recover(c, cfg)?;
            out.push(x);
            trace.append(t);
        }
        return Ok((out, trace));
    }

    let prior = Prior::Dct(cfg.scales.clone());
    let lipschitz = cfg.gamma + prior.lipschitz(dims) + cfg.alpha * channels.len() as f64;
    let step = cfg.step_size.unwrap_or(1.0 / lipschitz);
    let (mut xs, trace) = refine(channels, &prior, cfg.rank_r, step, cfg)?;
    xs.iter_mut().for_each(clamp_pixels);
    Ok((xs, trace))
}
