use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Environment variable overriding the Groebner degree cap.
pub const MAX_DEGREE_ENV: &str = "MBFUN_MAX_DEGREE";

pub const DEFAULT_MAX_DEGREE: u32 = 24;

/// Bounds shared by the Groebner engine, the annihilator completion and
/// the oracle.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EngineConfig {
    /// Largest total degree of an S-polynomial before giving up.
    pub max_degree: u32,
    /// Largest operator degree tried by annihilator completion.
    pub max_ann_degree: u32,
    /// Oracle searches N = 1..=oracle_max_n.
    pub oracle_max_n: u32,
    /// Operator and s-degree bound for oracle unknowns.
    pub oracle_degree: u32,
    /// Largest k tried when clearing G^k in the reduced b-function.
    pub max_g_power: u32,
}

impl Default for EngineConfig {
    fn default() -> Self {
        EngineConfig {
            max_degree: DEFAULT_MAX_DEGREE,
            max_ann_degree: 8,
            oracle_max_n: 4,
            oracle_degree: 3,
            max_g_power: 6,
        }
    }
}

impl EngineConfig {
    /// Defaults with `max_degree` taken from the environment if set.
    pub fn from_env() -> Result<Self> {
        let mut cfg = EngineConfig::default();
        if let Ok(v) = std::env::var(MAX_DEGREE_ENV) {
            cfg.max_degree = v.trim().parse().map_err(|_| {
                Error::Capability(format!("{MAX_DEGREE_ENV}={v} is not a nonnegative integer"))
            })?;
        }
        Ok(cfg)
    }

    pub fn with_max_degree(mut self, d: u32) -> Self {
        self.max_degree = d;
        self
    }
}
