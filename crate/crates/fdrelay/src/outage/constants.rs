//! Closed-form per-scheme constants: the outage-minimising relay power
//! exponent, the achievable diversity order, and the channel-count
//! complexity of each selection rule. All values are exact rationals in the
//! antenna counts.

use num::rational::Ratio;

use crate::channel::SystemConfig;
use crate::selection::AsScheme;
use crate::{Scheme, ZfDesign};

/// Relay power exponent that balances the decay rates of the two outage
/// terms of a selection scheme, maximising the diversity order:
/// `alpha = e1 / (e1 + e2)` where `e1`, `e2` are the hop exponents.
pub fn optimal_alpha(scheme: AsScheme, config: &SystemConfig) -> Ratio<u64> {
    let n_t = config.n_t as u64;
    let m_r = config.m_r as u64;
    let m_t = config.m_t as u64;
    let n_r = config.n_r as u64;
    let (e1, e2) = match scheme {
        AsScheme::Optimal | AsScheme::MaxMax => (n_t * m_r, m_t * n_r),
        AsScheme::Partial => (n_t * m_r, n_r),
        AsScheme::LoopInterference => (n_t, n_r),
    };
    Ratio::new(e1, e1 + e2)
}

/// Diversity order of a scheme. The ZF designs give up one relay dimension
/// to the nulling constraint; the selection schemes at their optimal power
/// exponent achieve the harmonic combination of their hop exponents.
pub fn diversity_order(scheme: Scheme, config: &SystemConfig) -> Ratio<u64> {
    let n_t = config.n_t as u64;
    let m_r = config.m_r as u64;
    let m_t = config.m_t as u64;
    let n_r = config.n_r as u64;
    match scheme {
        Scheme::Zf(ZfDesign::Receive) => {
            Ratio::from_integer((n_t * (m_r - 1)).min(m_t * n_r))
        }
        Scheme::Zf(ZfDesign::Transmit) => {
            Ratio::from_integer((n_t * m_r).min((m_t - 1) * n_r))
        }
        Scheme::As(s) => {
            let (e1, e2) = match s {
                AsScheme::Optimal | AsScheme::MaxMax => (n_t * m_r, m_t * n_r),
                AsScheme::Partial => (n_t * m_r, n_r),
                AsScheme::LoopInterference => (n_t, n_r),
            };
            // 1 / (1/e1 + 1/e2)
            Ratio::new(e1 * e2, e1 + e2)
        }
    }
}

/// Number of channels a selection rule must examine.
pub fn selection_complexity(scheme: AsScheme, config: &SystemConfig) -> u64 {
    let n_t = config.n_t as u64;
    let m_r = config.m_r as u64;
    let m_t = config.m_t as u64;
    let n_r = config.n_r as u64;
    match scheme {
        AsScheme::Optimal => n_t * m_r * m_t * n_r,
        AsScheme::MaxMax => n_t * m_r + m_t * n_r,
        AsScheme::Partial => n_t * m_r * m_t + n_r,
        AsScheme::LoopInterference => n_t + m_r * m_t + n_r,
    }
}
