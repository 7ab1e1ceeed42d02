//! Plain `key=value` environment configuration.
//!
//! ```text
//! # 3GPP small cells
//! model = 3gpp_case1
//! d1_km = 0.3
//! alpha_los = 2.09
//! alpha_nlos = 3.75
//! a_los_db = -41.1
//! a_nlos_db = -32.9
//! a_ref_distance_km = 0.001
//! tx_power_dbm = 24
//! noise_dbm = -95
//! ```
//!
//! Blank lines and `#` comments are ignored. Missing keys take the values
//! above. `a_*_db` are gains quoted at `a_ref_distance_km`; the single-slope
//! model uses only the NLoS pair.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::model::{
    case1_model, dbm_to_mw, preset_single_slope, NetworkEnvironment, PowerLaw,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelKind {
    Case1,
    SingleSlope,
}

impl ModelKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            ModelKind::Case1 => "3gpp_case1",
            ModelKind::SingleSlope => "single_slope",
        }
    }
}

impl FromStr for ModelKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "3gpp_case1" => Ok(ModelKind::Case1),
            "single_slope" => Ok(ModelKind::SingleSlope),
            other => Err(format!(
                "unknown model `{other}` (expected 3gpp_case1 or single_slope)"
            )),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EnvConfig {
    pub model: ModelKind,
    pub d1_km: f64,
    pub alpha_los: f64,
    pub alpha_nlos: f64,
    pub a_los_db: f64,
    pub a_nlos_db: f64,
    pub a_ref_distance_km: f64,
    pub tx_power_dbm: f64,
    pub noise_dbm: f64,
}

impl Default for EnvConfig {
    fn default() -> Self {
        EnvConfig {
            model: ModelKind::Case1,
            d1_km: 0.3,
            alpha_los: 2.09,
            alpha_nlos: 3.75,
            a_los_db: -41.1,
            a_nlos_db: -32.9,
            a_ref_distance_km: 0.001,
            tx_power_dbm: 24.0,
            noise_dbm: -95.0,
        }
    }
}

impl EnvConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = EnvConfig::default();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |message: String| Error::Config {
                line: line_no,
                message,
            };
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| err(format!("expected key=value, got `{line}`")))?;
            let key = key.trim();
            let value = value.trim();
            if key == "model" {
                cfg.model = value.parse().map_err(err)?;
                continue;
            }
            let number: f64 = value
                .parse()
                .map_err(|_| err(format!("`{value}` is not a number for key `{key}`")))?;
            if !number.is_finite() {
                return Err(err(format!("`{key}` must be finite")));
            }
            let slot = match key {
                "d1_km" => &mut cfg.d1_km,
                "alpha_los" => &mut cfg.alpha_los,
                "alpha_nlos" => &mut cfg.alpha_nlos,
                "a_los_db" => &mut cfg.a_los_db,
                "a_nlos_db" => &mut cfg.a_nlos_db,
                "a_ref_distance_km" => &mut cfg.a_ref_distance_km,
                "tx_power_dbm" => &mut cfg.tx_power_dbm,
                "noise_dbm" => &mut cfg.noise_dbm,
                other => return Err(err(format!("unknown key `{other}`"))),
            };
            *slot = number;
        }
        Ok(cfg)
    }

    pub fn build(&self) -> Result<NetworkEnvironment> {
        if !(self.a_ref_distance_km > 0.0) {
            return Err(Error::Parameter(
                "a_ref_distance_km must be positive".to_string(),
            ));
        }
        let tx = dbm_to_mw(self.tx_power_dbm);
        let noise = dbm_to_mw(self.noise_dbm);
        let nlos = PowerLaw::from_db_at(self.a_nlos_db, self.alpha_nlos, self.a_ref_distance_km);
        match self.model {
            ModelKind::Case1 => {
                let los =
                    PowerLaw::from_db_at(self.a_los_db, self.alpha_los, self.a_ref_distance_km);
                let env = NetworkEnvironment::new(tx, noise, case1_model(self.d1_km, los, nlos)?)?;
                env.model.check_interference_convergence()?;
                Ok(env)
            }
            ModelKind::SingleSlope => preset_single_slope(nlos.exponent, nlos.gain, tx, noise),
        }
    }
}

impl fmt::Display for EnvConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "model={}", self.model.as_str())?;
        writeln!(f, "d1_km={}", self.d1_km)?;
        writeln!(f, "alpha_los={}", self.alpha_los)?;
        writeln!(f, "alpha_nlos={}", self.alpha_nlos)?;
        writeln!(f, "a_los_db={}", self.a_los_db)?;
        writeln!(f, "a_nlos_db={}", self.a_nlos_db)?;
        writeln!(f, "a_ref_distance_km={}", self.a_ref_distance_km)?;
        writeln!(f, "tx_power_dbm={}", self.tx_power_dbm)?;
        writeln!(f, "noise_dbm={}", self.noise_dbm)
    }
}
