//! Scenario configuration and reproducible Rayleigh block-fading sampling.
//!
//! One [`ChannelRealization`] holds a joint draw of the source-relay,
//! relay-destination and relay-relay (loopback) channel matrices. Entries are
//! independent circularly-symmetric complex Gaussians; each link has its own
//! per-entry variance. Sampling is driven by caller-supplied random streams;
//! [`trial_rng`] derives independent counter-based substreams so Monte Carlo
//! trials are order-independent and safely parallelisable.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::numerics::{Complex64, ComplexMatrix};

/// How the relay's transmit power is set.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RelayPower {
    /// Fixed relay power in linear units.
    Explicit(f64),
    /// Power-control exponent `alpha` in `(0, 1]`: relay power is `P_S^alpha`.
    Exponent(f64),
}

/// Full scenario description: antenna counts, per-entry channel variances,
/// powers and the target rate. The single source of truth for a run.
#[derive(Debug, Clone, PartialEq)]
pub struct SystemConfig {
    /// Source transmit antennas (N_T).
    pub n_t: usize,
    /// Relay receive antennas (M_R).
    pub m_r: usize,
    /// Relay transmit antennas (M_T).
    pub m_t: usize,
    /// Destination receive antennas (N_R).
    pub n_r: usize,
    /// Per-entry variance of the source-relay channel.
    pub c_sr: f64,
    /// Per-entry variance of the relay-destination channel.
    pub c_rd: f64,
    /// Per-entry variance of the residual loopback channel.
    pub c_rr: f64,
    /// Source transmit power, linear.
    pub p_s: f64,
    /// Relay power rule.
    pub relay_power: RelayPower,
    /// Target rate R_0 in bits per channel use.
    pub target_rate: f64,
}

#[derive(Debug, Clone, Error, PartialEq)]
pub enum ConfigError {
    #[error("antenna count {name} must be >= 1")]
    AntennaCount { name: &'static str },
    #[error("channel variance {name} must be >= 0 and finite")]
    Variance { name: &'static str },
    #[error("source power must be > 0 and finite")]
    SourcePower,
    #[error("relay power must be > 0 and finite")]
    RelayPowerValue,
    #[error("power exponent alpha must lie in (0, 1], got {0}")]
    AlphaRange(f64),
    #[error("target rate must be > 0 and finite")]
    TargetRate,
}

impl SystemConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        for (count, name) in [
            (self.n_t, "N_T"),
            (self.m_r, "M_R"),
            (self.m_t, "M_T"),
            (self.n_r, "N_R"),
        ] {
            if count < 1 {
                return Err(ConfigError::AntennaCount { name });
            }
        }
        for (c, name) in [(self.c_sr, "c_SR"), (self.c_rd, "c_RD"), (self.c_rr, "c_RR")] {
            if !c.is_finite() || c < 0.0 {
                return Err(ConfigError::Variance { name });
            }
        }
        if !self.p_s.is_finite() || self.p_s <= 0.0 {
            return Err(ConfigError::SourcePower);
        }
        match self.relay_power {
            RelayPower::Explicit(p) => {
                if !p.is_finite() || p <= 0.0 {
                    return Err(ConfigError::RelayPowerValue);
                }
            }
            RelayPower::Exponent(a) => {
                if !(a > 0.0 && a <= 1.0) {
                    return Err(ConfigError::AlphaRange(a));
                }
            }
        }
        if !self.target_rate.is_finite() || self.target_rate <= 0.0 {
            return Err(ConfigError::TargetRate);
        }
        Ok(())
    }

    /// Relay transmit power in linear units (`P_R` or `P_S^alpha`).
    pub fn relay_power_linear(&self) -> f64 {
        match self.relay_power {
            RelayPower::Explicit(p) => p,
            RelayPower::Exponent(a) => self.p_s.powf(a),
        }
    }

    /// Outage threshold `2^R_0 - 1` on the SINR axis.
    pub fn gamma_threshold(&self) -> f64 {
        (2f64).powf(self.target_rate) - 1.0
    }

    /// Same scenario at a different source power.
    pub fn with_source_power(&self, p_s: f64) -> Self {
        Self { p_s, ..self.clone() }
    }
}

/// One joint draw of the three channel matrices.
///
/// Dimension convention (fixed crate-wide): `H_SR` is `M_R x N_T`, `H_RD` is
/// `N_R x M_T`, and `H_RR` maps relay-transmit to relay-receive, `M_R x M_T`.
#[derive(Debug, Clone)]
pub struct ChannelRealization {
    pub h_sr: ComplexMatrix,
    pub h_rd: ComplexMatrix,
    pub h_rr: ComplexMatrix,
}

/// Which power convention the derived averages follow.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PowerContext {
    /// Joint precoding: the relay-destination hop uses the configured relay
    /// power directly.
    Precoding,
    /// Antenna selection: the relay transmits with `P_S^alpha` (or the
    /// explicit relay power when one is configured).
    AntennaSelection,
}

/// Average link SNRs/INR implied by a configuration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivedAverages {
    /// Average source-relay SNR, `P_S * c_SR`.
    pub snr_sr: f64,
    /// Average relay-destination SNR.
    pub snr_rd: f64,
    /// Average loopback interference-to-noise ratio.
    pub inr_rr: f64,
}

/// Average link gains per the context convention. The two contexts coincide
/// once the relay-power rule is resolved to a linear value: precoding uses
/// the configured relay power directly while antenna selection uses
/// `P_S^alpha`, and `relay_power_linear` encodes exactly that rule.
pub fn derived_averages(config: &SystemConfig, _context: PowerContext) -> DerivedAverages {
    let p_r = config.relay_power_linear();
    DerivedAverages {
        snr_sr: config.p_s * config.c_sr,
        snr_rd: p_r * config.c_rd,
        inr_rr: p_r * config.c_rr,
    }
}

/// One standard-normal pair via Box-Muller. Consumes exactly two uniforms,
/// which keeps the draw count per realization fixed and reproducible.
fn standard_normal_pair(rng: &mut impl Rng) -> (f64, f64) {
    let u1: f64 = rng.gen();
    let u1 = (1.0 - u1).max(f64::MIN_POSITIVE); // keep ln argument in (0, 1]
    let u2: f64 = rng.gen();
    let radius = (-2.0 * u1.ln()).sqrt();
    let angle = std::f64::consts::TAU * u2;
    (radius * angle.cos(), radius * angle.sin())
}

fn sample_matrix(rng: &mut impl Rng, rows: usize, cols: usize, variance: f64) -> ComplexMatrix {
    let sigma = (variance / 2.0).sqrt();
    ComplexMatrix::from_fn(rows, cols, |_, _| {
        let (re, im) = standard_normal_pair(rng);
        Complex64::new(sigma * re, sigma * im)
    })
}

/// Draws one block-fading realization. Entries of each matrix are i.i.d.
/// circularly-symmetric complex Gaussians with mean zero and the per-link
/// variance from the configuration. Matrices are filled row-major in the
/// order `H_SR`, `H_RD`, `H_RR`, so an identical stream state yields an
/// identical realization.
pub fn sample_channels(config: &SystemConfig, rng: &mut impl Rng) -> ChannelRealization {
    ChannelRealization {
        h_sr: sample_matrix(rng, config.m_r, config.n_t, config.c_sr),
        h_rd: sample_matrix(rng, config.n_r, config.m_t, config.c_rd),
        h_rr: sample_matrix(rng, config.m_r, config.m_t, config.c_rr),
    }
}

/// Counter-based substream for one Monte Carlo trial: all trials share one
/// ChaCha key derived from `base_seed` and differ only in the stream nonce,
/// so any subset of trials can be generated in any order on any thread.
pub fn trial_rng(base_seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(base_seed);
    rng.set_stream(trial);
    rng
}
