//! Closed-form joint precoding/decoding for the full-duplex relay link.
//!
//! Both designs factor the relay amplification matrix as a rank-1 product
//! `W = w_t w_r^H` and enforce the zero-forcing condition
//! `w_r^H H_RR w_t = 0`, which breaks the loopback path entirely (then
//! `W H_RR W = 0`). The receive design points the relay transmit beam at the
//! destination (MRT) and shapes the receive beam inside the loopback null
//! space; the transmit design combines with MRC at the relay input and
//! shapes the transmit beam instead. Source and destination vectors come
//! from principal eigenvectors of the corresponding Gram matrices.
//!
//! All functions are pure; the relay output power constraint is met with
//! equality by construction.

use thiserror::Error;

use crate::channel::ChannelRealization;
use crate::numerics::{
    hermitian_max_eig, Complex64, ComplexMatrix, ComplexVector, NumericsError,
};

/// Relative threshold below which a loopback direction counts as already
/// nulled and the projection degenerates to the identity.
const DEGENERACY_TOL: f64 = 1e-12;

/// Which side of the relay carries the zero-forcing constraint.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ZfDesign {
    /// Receive-side ZF; requires more than one relay receive antenna.
    Receive,
    /// Transmit-side ZF; requires more than one relay transmit antenna.
    Transmit,
}

/// A complete beamforming solution for one channel realization.
#[derive(Debug, Clone)]
pub struct PrecodingSolution {
    /// Unit-norm source precoding vector.
    pub source_beam: ComplexVector,
    /// Unit-norm destination combining vector.
    pub dest_combiner: ComplexVector,
    /// Relay receive beamforming vector.
    pub relay_rx_beam: ComplexVector,
    /// Relay transmit beamforming vector.
    pub relay_tx_beam: ComplexVector,
    /// Rank-1 relay amplification matrix `relay_tx_beam * relay_rx_beam^H`.
    pub relay_matrix: ComplexMatrix,
    /// End-to-end SNR achieved by this solution (linear).
    pub snr: f64,
    pub design: ZfDesign,
}

impl PrecodingSolution {
    /// Effective source-relay vector channel seen through the source beam.
    pub fn effective_sr(&self, ch: &ChannelRealization) -> ComplexVector {
        ch.h_sr.mul_vec(&self.source_beam)
    }

    /// Effective relay-destination vector channel seen through the combiner.
    pub fn effective_rd(&self, ch: &ChannelRealization) -> ComplexVector {
        ch.h_rd.hermitian().mul_vec(&self.dest_combiner)
    }
}

#[derive(Debug, Clone, Error)]
pub enum PrecodingError {
    #[error("{design:?} ZF needs {requirement}, got {actual}")]
    UnsupportedConfig {
        design: ZfDesign,
        requirement: &'static str,
        actual: usize,
    },
    #[error("transmit powers must be positive")]
    NonPositivePower,
    #[error("the {link} channel is identically zero")]
    ZeroChannel { link: &'static str },
    #[error(transparent)]
    Numerics(#[from] NumericsError),
}

/// `I - v v^H / ||v||^2`, or the identity when `v` is negligibly small
/// relative to `scale` (nothing left to null).
fn complement_projector(v: &ComplexVector, scale: f64) -> ComplexMatrix {
    let n = v.dim();
    let norm_sq = v.norm_sq();
    if norm_sq.sqrt() <= DEGENERACY_TOL * scale {
        return ComplexMatrix::identity(n);
    }
    let outer = v.outer(v).scale(Complex64::new(-1.0 / norm_sq, 0.0));
    ComplexMatrix::identity(n).add(&outer)
}

/// Inverse square root of `E = I + p_s h h^H`, in closed form via the rank-1
/// eigenstructure: `E^{-1/2} = I + ((1 + p_s ||h||^2)^{-1/2} - 1) h h^H / ||h||^2`.
fn inv_sqrt_identity_rank1(h: &ComplexVector, p_s: f64) -> ComplexMatrix {
    let norm_sq = h.norm_sq();
    if norm_sq <= 0.0 {
        return ComplexMatrix::identity(h.dim());
    }
    let factor = ((1.0 + p_s * norm_sq).powf(-0.5) - 1.0) / norm_sq;
    ComplexMatrix::identity(h.dim()).add(&h.outer(h).scale(Complex64::new(factor, 0.0)))
}

fn check_powers(p_s: f64, p_r: f64) -> Result<(), PrecodingError> {
    if p_s > 0.0 && p_s.is_finite() && p_r > 0.0 && p_r.is_finite() {
        Ok(())
    } else {
        Err(PrecodingError::NonPositivePower)
    }
}

/// Dual-hop SNR combiner `x y / (x + y + 1)`.
fn cascade_snr(x: f64, y: f64) -> f64 {
    x * y / (x + y + 1.0)
}

/// Receive-side ZF design.
///
/// The destination combiner maximises the effective relay-destination gain,
/// the relay transmit beam is matched to that effective channel, and the
/// relay receive beam solves the constrained gain maximisation inside the
/// null space of the loopback direction, with the output power constraint
/// active.
pub fn receive_zf(
    ch: &ChannelRealization,
    p_s: f64,
    p_r: f64,
) -> Result<PrecodingSolution, PrecodingError> {
    if ch.h_sr.rows() < 2 {
        return Err(PrecodingError::UnsupportedConfig {
            design: ZfDesign::Receive,
            requirement: "more than one relay receive antenna",
            actual: ch.h_sr.rows(),
        });
    }
    check_powers(p_s, p_r)?;
    if ch.h_rd.is_zero() {
        return Err(PrecodingError::ZeroChannel {
            link: "relay-destination",
        });
    }

    // Destination combiner: principal eigenvector of H_RD H_RD^H.
    let rd_gram = ch.h_rd.mul(&ch.h_rd.hermitian());
    let rd_eig = hermitian_max_eig(&rd_gram)?;
    let dest_combiner = rd_eig.vector;
    let h_rd = ch.h_rd.hermitian().mul_vec(&dest_combiner);
    let rd_gain = rd_eig.value; // = ||h_rd||^2

    // Loopback direction induced by the transmit beam, and its complement.
    let loop_dir = ch.h_rr.mul_vec(&h_rd);
    let d_hat = complement_projector(&loop_dir, ch.h_rr.frobenius_norm() * h_rd.norm());

    // Source beam: principal eigenvector of H_SR^H D_hat H_SR.
    let projected_gram = ch.h_sr.hermitian().mul(&d_hat).mul(&ch.h_sr);
    let sr_eig = hermitian_max_eig(&projected_gram)?;
    let source_beam = sr_eig.vector;
    let h_sr = ch.h_sr.mul_vec(&source_beam);
    let sr_gain = sr_eig.value; // = ||D_hat h_sr||^2

    // Relay receive beam through the noise-whitened null-space projection.
    let e_inv_sqrt = inv_sqrt_identity_rank1(&h_sr, p_s);
    let whitened_loop = e_inv_sqrt.mul_vec(&loop_dir);
    let d_proj = complement_projector(&whitened_loop, ch.h_rr.frobenius_norm() * h_rd.norm());
    let direction = d_proj.mul_vec(&e_inv_sqrt.mul_vec(&h_sr));

    let relay_tx_beam = h_rd.clone();
    let (relay_rx_beam, snr) = match direction.normalized() {
        Some(unit) => {
            let w_r = e_inv_sqrt
                .mul_vec(&unit)
                .scale(Complex64::new((p_r / rd_gain).sqrt(), 0.0));
            (w_r, cascade_snr(p_s * sr_gain, p_r * rd_gain))
        }
        // The useful signal lies entirely inside the loopback direction:
        // the relay can only stay silent.
        None => (ComplexVector::zeros(ch.h_sr.rows()), 0.0),
    };
    let relay_matrix = relay_tx_beam.outer(&relay_rx_beam);

    Ok(PrecodingSolution {
        source_beam,
        dest_combiner,
        relay_rx_beam,
        relay_tx_beam,
        relay_matrix,
        snr,
        design: ZfDesign::Receive,
    })
}

/// Transmit-side ZF design.
///
/// The source beam maximises the source-relay gain, the relay combines with
/// MRC, and the relay transmit beam is the projection of the effective
/// relay-destination channel onto the null space of the loopback direction,
/// scaled so the relay output power is exactly `p_r`.
pub fn transmit_zf(
    ch: &ChannelRealization,
    p_s: f64,
    p_r: f64,
) -> Result<PrecodingSolution, PrecodingError> {
    if ch.h_rd.cols() < 2 {
        return Err(PrecodingError::UnsupportedConfig {
            design: ZfDesign::Transmit,
            requirement: "more than one relay transmit antenna",
            actual: ch.h_rd.cols(),
        });
    }
    check_powers(p_s, p_r)?;
    if ch.h_sr.is_zero() {
        return Err(PrecodingError::ZeroChannel {
            link: "source-relay",
        });
    }

    // Source beam: principal eigenvector of H_SR^H H_SR.
    let sr_gram = ch.h_sr.hermitian().mul(&ch.h_sr);
    let sr_eig = hermitian_max_eig(&sr_gram)?;
    let source_beam = sr_eig.vector;
    let h_sr = ch.h_sr.mul_vec(&source_beam);
    let sr_gain = sr_eig.value; // = ||h_sr||^2

    let relay_rx_beam = h_sr.clone();

    // Loopback direction seen from the relay output side.
    let loop_dir = ch.h_rr.hermitian().mul_vec(&h_sr);
    let b_proj = complement_projector(&loop_dir, ch.h_rr.frobenius_norm() * h_sr.norm());

    // Destination combiner: principal eigenvector of H_RD B H_RD^H.
    let rd_gram = ch.h_rd.mul(&b_proj).mul(&ch.h_rd.hermitian());
    let rd_eig = hermitian_max_eig(&rd_gram)?;
    let dest_combiner = rd_eig.vector;
    let h_rd = ch.h_rd.hermitian().mul_vec(&dest_combiner);
    let projected_rd = b_proj.mul_vec(&h_rd);
    let rd_gain = rd_eig.value; // = ||B h_rd||^2

    let (relay_tx_beam, snr) = match projected_rd.normalized() {
        Some(unit) => {
            let scale = (p_r / (p_s * sr_gain * sr_gain + sr_gain)).sqrt();
            let w_t = unit.scale(Complex64::new(scale, 0.0));
            (w_t, cascade_snr(p_s * sr_gain, p_r * rd_gain))
        }
        None => (ComplexVector::zeros(ch.h_rd.cols()), 0.0),
    };
    let relay_matrix = relay_tx_beam.outer(&relay_rx_beam);

    Ok(PrecodingSolution {
        source_beam,
        dest_combiner,
        relay_rx_beam,
        relay_tx_beam,
        relay_matrix,
        snr,
        design: ZfDesign::Transmit,
    })
}

/// End-to-end SINR of an arbitrary relay matrix under the zero-forcing
/// condition, from the effective vector channels:
/// `p_s |h_rd^H W h_sr|^2 / (||h_rd^H W||^2 + 1)`.
///
/// Only meaningful when `(W, H_RR)` satisfies the loop-breaking condition;
/// see [`zf_loop_check`].
pub fn generic_e2e_sinr(
    relay_matrix: &ComplexMatrix,
    h_sr: &ComplexVector,
    h_rd: &ComplexVector,
    p_s: f64,
) -> f64 {
    assert_eq!(
        relay_matrix.rows(),
        h_rd.dim(),
        "relay matrix rows must match the relay transmit dimension"
    );
    assert_eq!(
        relay_matrix.cols(),
        h_sr.dim(),
        "relay matrix columns must match the relay receive dimension"
    );
    // h_rd^H W as a column vector: (W^H h_rd).
    let combined = relay_matrix.hermitian().mul_vec(h_rd);
    let signal = combined.dot(h_sr).norm_sqr();
    p_s * signal / (combined.norm_sq() + 1.0)
}

/// Frobenius norm of `W H_RR W`, the residual of the loop-breaking condition.
pub fn zf_loop_check(relay_matrix: &ComplexMatrix, h_rr: &ComplexMatrix) -> f64 {
    relay_matrix.mul(h_rr).mul(relay_matrix).frobenius_norm()
}
