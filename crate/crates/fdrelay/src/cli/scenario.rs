//! TOML scenario files: the on-disk description of a sweep.
//!
//! Three sections: `[system]` holds antenna counts, channel variances and the
//! target rate; `[power]` the source-power grid in dB plus the relay power
//! rule (a fixed exponent `alpha`, the string `"auto"` to resolve the
//! outage-optimal exponent per scheme, or an explicit `p_r_db`); `[run]`
//! the schemes, methods, trial count, seed and output path. Unknown keys are
//! rejected with a line-numbered error.

use std::path::PathBuf;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::channel::{RelayPower, SystemConfig};
use crate::outage::{optimal_alpha, Method};

use crate::Scheme;

use super::CliError;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub system: SystemSection,
    pub power: PowerSection,
    pub run: RunSection,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemSection {
    pub n_t: usize,
    pub m_r: usize,
    pub m_t: usize,
    pub n_r: usize,
    pub c_sr: f64,
    pub c_rd: f64,
    pub c_rr: f64,
    pub r0: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PowerSection {
    pub p_s_db: DbGrid,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<AlphaSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p_r_db: Option<f64>,
}

/// Inclusive dB grid `start, start + step, ..., stop`.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DbGrid {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl DbGrid {
    pub fn points(&self) -> Vec<f64> {
        let mut points = Vec::new();
        let mut i = 0u32;
        loop {
            let v = self.start + f64::from(i) * self.step;
            if v > self.stop + 1e-9 {
                break;
            }
            points.push(v);
            i += 1;
        }
        points
    }
}

/// Relay power exponent: a number, or `"auto"` for the per-scheme optimum.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum AlphaSpec {
    Fixed(f64),
    Keyword(String),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunSection {
    pub schemes: Vec<String>,
    pub methods: Vec<String>,
    #[serde(default = "default_trials")]
    pub trials: u64,
    #[serde(default)]
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
}

fn default_trials() -> u64 {
    1_000_000
}

/// Resolved relay power rule.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PowerRule {
    FixedAlpha(f64),
    AutoAlpha,
    ExplicitDb(f64),
}

/// A parsed and validated scenario.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub system: SystemSection,
    pub grid_db: Vec<f64>,
    pub power_rule: PowerRule,
    pub schemes: Vec<Scheme>,
    pub methods: Vec<Method>,
    pub trials: u64,
    pub seed: u64,
    pub out: Option<PathBuf>,
}

impl Scenario {
    pub fn from_toml(text: &str) -> Result<Self, CliError> {
        let file: ScenarioFile =
            toml::from_str(text).map_err(|e| CliError::Scenario(e.to_string()))?;
        Scenario::from_file(file)
    }

    pub fn from_file(file: ScenarioFile) -> Result<Self, CliError> {
        let bad = |msg: String| Err(CliError::Scenario(msg));

        if file.run.schemes.is_empty() {
            return bad("run.schemes must name at least one scheme".into());
        }
        if file.run.methods.is_empty() {
            return bad("run.methods must name at least one method".into());
        }
        let schemes = file
            .run
            .schemes
            .iter()
            .map(|s| Scheme::from_str(s))
            .collect::<Result<Vec<_>, _>>()
            .map_err(CliError::Scenario)?;
        let methods = file
            .run
            .methods
            .iter()
            .map(|s| Method::from_str(s))
            .collect::<Result<Vec<_>, _>>()
            .map_err(CliError::Scenario)?;

        let grid = file.power.p_s_db;
        if !grid.step.is_finite() || grid.step <= 0.0 {
            return bad("power.p_s_db.step must be positive".into());
        }
        if grid.stop < grid.start {
            return bad("power.p_s_db.stop must not be below start".into());
        }
        let power_rule = match (&file.power.alpha, file.power.p_r_db) {
            (Some(_), Some(_)) => {
                return bad("power.alpha and power.p_r_db are mutually exclusive".into())
            }
            (None, Some(db)) => PowerRule::ExplicitDb(db),
            (Some(AlphaSpec::Fixed(a)), None) => {
                if !(*a > 0.0 && *a <= 1.0) {
                    return bad(format!("power.alpha must lie in (0, 1], got {a}"));
                }
                PowerRule::FixedAlpha(*a)
            }
            (Some(AlphaSpec::Keyword(word)), None) => {
                if word == "auto" {
                    PowerRule::AutoAlpha
                } else {
                    return bad(format!(
                        "power.alpha must be a number in (0, 1] or \"auto\", got \"{word}\""
                    ));
                }
            }
            // No rule: full relay power (alpha = 1).
            (None, None) => PowerRule::FixedAlpha(1.0),
        };

        if file.run.trials == 0 {
            return bad("run.trials must be at least 1".into());
        }

        let scenario = Scenario {
            system: file.system,
            grid_db: grid.points(),
            power_rule,
            schemes,
            methods,
            trials: file.run.trials,
            seed: file.run.seed,
            out: file.run.out,
        };
        // Surface invalid system values now, via the config validator.
        scenario
            .config_for(scenario.schemes[0])
            .validate()
            .map_err(|e| CliError::Scenario(e.to_string()))?;
        Ok(scenario)
    }

    /// Base configuration (source power 1) for one scheme, with the relay
    /// power rule resolved. `auto` resolves the outage-optimal exponent for
    /// selection schemes; ZF sweeps tie relay power to source power anyway.
    pub fn config_for(&self, scheme: Scheme) -> SystemConfig {
        let relay_power = match (self.power_rule, scheme) {
            (PowerRule::ExplicitDb(db), _) => RelayPower::Explicit(10f64.powf(db / 10.0)),
            (PowerRule::FixedAlpha(a), _) => RelayPower::Exponent(a),
            (PowerRule::AutoAlpha, Scheme::As(s)) => {
                let cfg = self.raw_config(RelayPower::Exponent(1.0));
                let alpha = optimal_alpha(s, &cfg);
                RelayPower::Exponent(*alpha.numer() as f64 / *alpha.denom() as f64)
            }
            (PowerRule::AutoAlpha, Scheme::Zf(_)) => RelayPower::Exponent(1.0),
        };
        self.raw_config(relay_power)
    }

    fn raw_config(&self, relay_power: RelayPower) -> SystemConfig {
        SystemConfig {
            n_t: self.system.n_t,
            m_r: self.system.m_r,
            m_t: self.system.m_t,
            n_r: self.system.n_r,
            c_sr: self.system.c_sr,
            c_rd: self.system.c_rd,
            c_rr: self.system.c_rr,
            p_s: 1.0,
            relay_power,
            target_rate: self.system.r0,
        }
    }
}

/// A ready-to-run example scenario (the no-power-control selection setup).
pub fn example_scenario() -> ScenarioFile {
    ScenarioFile {
        system: SystemSection {
            n_t: 2,
            m_r: 2,
            m_t: 2,
            n_r: 2,
            c_sr: 1.0,
            c_rd: 1.0,
            c_rr: 0.05,
            r0: 2.0,
        },
        power: PowerSection {
            p_s_db: DbGrid {
                start: 0.0,
                stop: 50.0,
                step: 10.0,
            },
            alpha: Some(AlphaSpec::Fixed(1.0)),
            p_r_db: None,
        },
        run: RunSection {
            schemes: vec!["OP".into(), "MM".into(), "PR".into(), "LI".into()],
            methods: vec!["montecarlo".into(), "exact".into()],
            trials: 1_000_000,
            seed: 1,
            out: Some(PathBuf::from("curves.csv")),
        },
    }
}
