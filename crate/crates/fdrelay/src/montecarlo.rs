//! Trial-parallel Monte Carlo outage estimation for every scheme.
//!
//! Each trial draws its channel realization from a counter-based substream
//! of the plan's base seed, so the estimate is bit-identical regardless of
//! execution order, chunking or thread count, and all grid points and
//! schemes of a sweep share the same realizations (common random numbers).

use rayon::prelude::*;
use thiserror::Error;

use crate::channel::{
    sample_channels, trial_rng, ChannelRealization, ConfigError, RelayPower, SystemConfig,
};
use crate::outage::{Method, OutagePoint};
use crate::precoding::{receive_zf, transmit_zf, PrecodingError};
use crate::selection::{link_gains, select};
use crate::{Scheme, ZfDesign};

/// Everything needed to reproduce one outage estimate.
#[derive(Debug, Clone)]
pub struct TrialPlan {
    pub scheme: Scheme,
    pub config: SystemConfig,
    /// SINR outage threshold (`2^R_0 - 1` for rate `R_0`).
    pub gamma_t: f64,
    pub trials: u64,
    pub base_seed: u64,
}

/// Estimated outage probability with its binomial standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OutageEstimate {
    pub p_hat: f64,
    pub stderr: f64,
    pub trials: u64,
}

#[derive(Debug, Clone, Error)]
pub enum McError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("scheme {scheme} is not applicable here: {reason}")]
    Unsupported { scheme: Scheme, reason: String },
    #[error(transparent)]
    Precoding(#[from] PrecodingError),
}

/// Scenario as seen by one scheme at one sweep point. ZF sweeps tie the
/// relay power to the source power (symmetric per-hop convention) unless the
/// scenario pinned an explicit relay power; selection schemes use the
/// configured power rule as-is.
pub fn point_config(scheme: Scheme, base: &SystemConfig, p_s: f64) -> SystemConfig {
    let mut cfg = base.with_source_power(p_s);
    if let (Scheme::Zf(_), RelayPower::Exponent(_)) = (scheme, base.relay_power) {
        cfg.relay_power = RelayPower::Explicit(p_s);
    }
    cfg
}

fn check_applicable(scheme: Scheme, config: &SystemConfig) -> Result<(), McError> {
    let fail = |reason: &str| {
        Err(McError::Unsupported {
            scheme,
            reason: reason.into(),
        })
    };
    match scheme {
        Scheme::Zf(ZfDesign::Receive) if config.m_r < 2 => {
            fail("receive ZF needs more than one relay receive antenna")
        }
        Scheme::Zf(ZfDesign::Transmit) if config.m_t < 2 => {
            fail("transmit ZF needs more than one relay transmit antenna")
        }
        Scheme::Zf(_) if config.c_sr <= 0.0 || config.c_rd <= 0.0 => {
            fail("ZF designs need nonzero hop channel variances")
        }
        _ => Ok(()),
    }
}

/// End-to-end SNR/SINR of one scheme on one realization.
pub fn scheme_snr(
    scheme: Scheme,
    config: &SystemConfig,
    ch: &ChannelRealization,
) -> Result<f64, McError> {
    match scheme {
        Scheme::Zf(ZfDesign::Receive) => {
            Ok(receive_zf(ch, config.p_s, config.relay_power_linear())?.snr)
        }
        Scheme::Zf(ZfDesign::Transmit) => {
            Ok(transmit_zf(ch, config.p_s, config.relay_power_linear())?.snr)
        }
        Scheme::As(s) => Ok(select(s, &link_gains(ch, config)).sinr),
    }
}

/// Runs the plan and counts rate-outage events `{SINR < gamma_t}`.
pub fn estimate_outage(plan: &TrialPlan) -> Result<OutageEstimate, McError> {
    plan.config.validate()?;
    check_applicable(plan.scheme, &plan.config)?;
    let outages = (0..plan.trials)
        .into_par_iter()
        .try_fold(
            || 0u64,
            |acc, trial| -> Result<u64, McError> {
                let mut rng = trial_rng(plan.base_seed, trial);
                let ch = sample_channels(&plan.config, &mut rng);
                let snr = scheme_snr(plan.scheme, &plan.config, &ch)?;
                Ok(acc + u64::from(snr < plan.gamma_t))
            },
        )
        .try_reduce(|| 0u64, |a, b| Ok(a + b))?;
    let p_hat = outages as f64 / plan.trials as f64;
    Ok(OutageEstimate {
        p_hat,
        stderr: (p_hat * (1.0 - p_hat) / plan.trials as f64).sqrt(),
        trials: plan.trials,
    })
}

/// Monte Carlo outage curves over a dB grid of source powers, one point per
/// `(scheme, grid)` pair, deterministic given the base seed.
pub fn sweep_outage(
    schemes: &[Scheme],
    base: &SystemConfig,
    grid_db: &[f64],
    trials: u64,
    base_seed: u64,
) -> Result<Vec<OutagePoint>, McError> {
    let mut points = Vec::with_capacity(schemes.len() * grid_db.len());
    for &scheme in schemes {
        for &db in grid_db {
            let config = point_config(scheme, base, 10f64.powf(db / 10.0));
            let gamma_t = config.gamma_threshold();
            let estimate = estimate_outage(&TrialPlan {
                scheme,
                config,
                gamma_t,
                trials,
                base_seed,
            })?;
            points.push(OutagePoint {
                scheme,
                method: Method::MonteCarlo,
                p_s_db: db,
                p_out: estimate.p_hat,
                stderr: Some(estimate.stderr),
            });
        }
    }
    Ok(points)
}
