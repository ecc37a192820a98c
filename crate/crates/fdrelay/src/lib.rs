//! Link-level toolkit for full-duplex MIMO amplify-and-forward relays.
//!
//! The crate builds rank-1 zero-forcing precoding/decoding solutions that
//! null the relay's loopback self-interference, implements four
//! antenna-selection rules with relay power control, and evaluates the outage
//! probability of every scheme three ways: exact expressions built on the
//! largest-eigenvalue distribution of complex Wishart matrices, high-power
//! asymptotics with closed-form diversity orders, and trial-parallel Monte
//! Carlo simulation with reproducible counter-based random streams.
//!
//! The `fdrelay` binary drives parameter sweeps from TOML scenario files and
//! emits CSV curves; see the crate README for the file formats.

pub mod channel;
pub mod cli;
pub mod montecarlo;
pub mod numerics;
pub mod outage;
pub mod precoding;
pub mod selection;

use std::fmt;
use std::str::FromStr;

pub use precoding::ZfDesign;
pub use selection::AsScheme;

/// Every transmission scheme the toolkit can simulate or analyse.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Scheme {
    Zf(ZfDesign),
    As(AsScheme),
}

impl Scheme {
    pub const ALL: [Scheme; 6] = [
        Scheme::Zf(ZfDesign::Receive),
        Scheme::Zf(ZfDesign::Transmit),
        Scheme::As(AsScheme::Optimal),
        Scheme::As(AsScheme::MaxMax),
        Scheme::As(AsScheme::Partial),
        Scheme::As(AsScheme::LoopInterference),
    ];

    /// Stable identifier used in CSV output and scenario files.
    pub fn name(&self) -> &'static str {
        match self {
            Scheme::Zf(ZfDesign::Receive) => "receive_zf",
            Scheme::Zf(ZfDesign::Transmit) => "transmit_zf",
            Scheme::As(AsScheme::Optimal) => "OP",
            Scheme::As(AsScheme::MaxMax) => "MM",
            Scheme::As(AsScheme::Partial) => "PR",
            Scheme::As(AsScheme::LoopInterference) => "LI",
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Scheme {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Scheme::ALL
            .iter()
            .copied()
            .find(|scheme| scheme.name() == s)
            .ok_or_else(|| {
                format!(
                    "unknown scheme `{s}` (expected one of receive_zf, transmit_zf, OP, MM, PR, LI)"
                )
            })
    }
}
