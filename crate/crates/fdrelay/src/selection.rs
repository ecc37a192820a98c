//! Antenna selection for the full-duplex relay link: per-quadruple SINR
//! evaluation and the four selection rules.
//!
//! One transmit antenna is activated at the source and the relay, and one
//! receive antenna at the relay and the destination. The optimal rule (OP)
//! searches all quadruples; max-max (MM) picks the strongest hop channels
//! and ignores loopback; partial (PR) maximises the first-hop
//! signal-to-loopback ratio and decouples the second hop; loop-interference
//! (LI) minimises the loopback gain first. Ties are broken towards the
//! lexicographically smallest index tuple, which only matters for crafted
//! integer gains; continuous fading has no ties.

use thiserror::Error;

use crate::channel::{ChannelRealization, SystemConfig};

/// The four selection rules.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AsScheme {
    /// Exhaustive e2e SINR maximisation over all antenna quadruples.
    Optimal,
    /// Strongest source-relay and relay-destination links, loopback ignored.
    MaxMax,
    /// First-hop ratio maximisation, destination antenna chosen after.
    Partial,
    /// Weakest loopback pair first, then per-hop maximisation.
    LoopInterference,
}

impl AsScheme {
    pub const ALL: [AsScheme; 4] = [
        AsScheme::Optimal,
        AsScheme::MaxMax,
        AsScheme::Partial,
        AsScheme::LoopInterference,
    ];
}

/// Instantaneous link gains, already scaled by the node powers:
/// `sr[i][j] = P_S |h_SR^{i,j}|^2`, `rd[k][l] = P_R |h_RD^{k,l}|^2`,
/// `rr[i][l] = P_R |h_RR^{i,l}|^2` with `P_R = P_S^alpha` under power
/// control. Indices: `i` relay-rx, `j` source-tx, `k` dest-rx, `l` relay-tx.
#[derive(Debug, Clone)]
pub struct LinkGains {
    pub sr: Vec<Vec<f64>>,
    pub rd: Vec<Vec<f64>>,
    pub rr: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, Error)]
pub enum SelectionError {
    #[error("antenna index {index} out of range (limit {limit})")]
    IndexOutOfRange { index: usize, limit: usize },
}

/// Antenna choice of one scheme on one realization, with the achieved SINR.
/// All indices are zero-based.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SelectionResult {
    pub scheme: AsScheme,
    /// Relay receive antenna (I).
    pub relay_rx: usize,
    /// Source transmit antenna (J).
    pub source_tx: usize,
    /// Destination receive antenna (K).
    pub dest_rx: usize,
    /// Relay transmit antenna (L).
    pub relay_tx: usize,
    pub sinr: f64,
}

/// Power-scaled squared channel magnitudes for one realization.
pub fn link_gains(ch: &ChannelRealization, config: &SystemConfig) -> LinkGains {
    let p_s = config.p_s;
    let p_r = config.relay_power_linear();
    let scaled = |m: &crate::numerics::ComplexMatrix, p: f64| -> Vec<Vec<f64>> {
        (0..m.rows())
            .map(|i| (0..m.cols()).map(|j| p * m.get(i, j).norm_sqr()).collect())
            .collect()
    };
    LinkGains {
        sr: scaled(&ch.h_sr, p_s),
        rd: scaled(&ch.h_rd, p_r),
        rr: scaled(&ch.h_rr, p_r),
    }
}

/// End-to-end SINR of the quadruple `(i, j, k, l)`:
/// `X Y / (X + Y + 1)` with `X = sr[i][j] / (rr[i][l] + 1)` and `Y = rd[k][l]`.
pub fn sinr_quadruple(
    gains: &LinkGains,
    relay_rx: usize,
    source_tx: usize,
    dest_rx: usize,
    relay_tx: usize,
) -> Result<f64, SelectionError> {
    let check = |index: usize, limit: usize| {
        if index < limit {
            Ok(())
        } else {
            Err(SelectionError::IndexOutOfRange { index, limit })
        }
    };
    check(relay_rx, gains.sr.len())?;
    check(source_tx, gains.sr.first().map_or(0, Vec::len))?;
    check(dest_rx, gains.rd.len())?;
    check(relay_tx, gains.rd.first().map_or(0, Vec::len))?;

    let x = gains.sr[relay_rx][source_tx] / (gains.rr[relay_rx][relay_tx] + 1.0);
    let y = gains.rd[dest_rx][relay_tx];
    Ok(x * y / (x + y + 1.0))
}

/// Lexicographically-first argmax over a matrix.
fn argmax(m: &[Vec<f64>]) -> (usize, usize) {
    let mut best = (0, 0);
    let mut best_val = f64::NEG_INFINITY;
    for (i, row) in m.iter().enumerate() {
        for (j, &v) in row.iter().enumerate() {
            if v > best_val {
                best_val = v;
                best = (i, j);
            }
        }
    }
    best
}

/// Lexicographically-first argmin over a matrix.
fn argmin(m: &[Vec<f64>]) -> (usize, usize) {
    let mut best = (0, 0);
    let mut best_val = f64::INFINITY;
    for (i, row) in m.iter().enumerate() {
        for (j, &v) in row.iter().enumerate() {
            if v < best_val {
                best_val = v;
                best = (i, j);
            }
        }
    }
    best
}

fn argmax_col(m: &[Vec<f64>], col: usize) -> usize {
    let mut best = 0;
    let mut best_val = f64::NEG_INFINITY;
    for (k, row) in m.iter().enumerate() {
        if row[col] > best_val {
            best_val = row[col];
            best = k;
        }
    }
    best
}

fn argmax_row(m: &[Vec<f64>], row: usize) -> usize {
    let mut best = 0;
    let mut best_val = f64::NEG_INFINITY;
    for (j, &v) in m[row].iter().enumerate() {
        if v > best_val {
            best_val = v;
            best = j;
        }
    }
    best
}

fn result(
    gains: &LinkGains,
    scheme: AsScheme,
    relay_rx: usize,
    source_tx: usize,
    dest_rx: usize,
    relay_tx: usize,
) -> SelectionResult {
    let sinr = sinr_quadruple(gains, relay_rx, source_tx, dest_rx, relay_tx)
        .expect("selection rules only produce in-range indices");
    SelectionResult {
        scheme,
        relay_rx,
        source_tx,
        dest_rx,
        relay_tx,
        sinr,
    }
}

/// Optimal selection: exhaustive argmax of the e2e SINR over all quadruples.
pub fn select_op(gains: &LinkGains) -> SelectionResult {
    let (m_r, n_t) = (gains.sr.len(), gains.sr[0].len());
    let (n_r, m_t) = (gains.rd.len(), gains.rd[0].len());
    let mut best = (0, 0, 0, 0);
    let mut best_sinr = f64::NEG_INFINITY;
    for i in 0..m_r {
        for j in 0..n_t {
            for k in 0..n_r {
                for l in 0..m_t {
                    let sinr = sinr_quadruple(gains, i, j, k, l).expect("in range");
                    if sinr > best_sinr {
                        best_sinr = sinr;
                        best = (i, j, k, l);
                    }
                }
            }
        }
    }
    result(gains, AsScheme::Optimal, best.0, best.1, best.2, best.3)
}

/// Max-max selection: strongest links per hop, loopback ignored by the rule
/// (the realized SINR still includes the induced loopback term).
pub fn select_mm(gains: &LinkGains) -> SelectionResult {
    let (i, j) = argmax(&gains.sr);
    let (k, l) = argmax(&gains.rd);
    result(gains, AsScheme::MaxMax, i, j, k, l)
}

/// Partial selection: maximise the first-hop signal-to-loopback ratio over
/// `(i, j, l)`, then the best destination antenna for the chosen `l`.
pub fn select_pr(gains: &LinkGains) -> SelectionResult {
    let (m_r, n_t) = (gains.sr.len(), gains.sr[0].len());
    let m_t = gains.rd[0].len();
    let mut best = (0, 0, 0);
    let mut best_ratio = f64::NEG_INFINITY;
    for i in 0..m_r {
        for j in 0..n_t {
            for l in 0..m_t {
                let ratio = gains.sr[i][j] / (gains.rr[i][l] + 1.0);
                if ratio > best_ratio {
                    best_ratio = ratio;
                    best = (i, j, l);
                }
            }
        }
    }
    let (i, j, l) = best;
    let k = argmax_col(&gains.rd, l);
    result(gains, AsScheme::Partial, i, j, k, l)
}

/// Loop-interference selection: weakest loopback pair `(i, l)` first, then
/// the best source antenna for `i` and destination antenna for `l`.
pub fn select_li(gains: &LinkGains) -> SelectionResult {
    let (i, l) = argmin(&gains.rr);
    let j = argmax_row(&gains.sr, i);
    let k = argmax_col(&gains.rd, l);
    result(gains, AsScheme::LoopInterference, i, j, k, l)
}

/// Runs one scheme on one gain table.
pub fn select(scheme: AsScheme, gains: &LinkGains) -> SelectionResult {
    match scheme {
        AsScheme::Optimal => select_op(gains),
        AsScheme::MaxMax => select_mm(gains),
        AsScheme::Partial => select_pr(gains),
        AsScheme::LoopInterference => select_li(gains),
    }
}
