use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::SurfaceCode;
use crate::mps::DEFAULT_CHI;
use crate::noise::{NoiseKind, NoiseSpec};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DecoderKind {
    MldExact,
    MldMps,
    Mwm,
}

impl DecoderKind {
    pub fn as_str(self) -> &'static str {
        match self {
            DecoderKind::MldExact => "mld_exact",
            DecoderKind::MldMps => "mld_mps",
            DecoderKind::Mwm => "mwm",
        }
    }
}

impl fmt::Display for DecoderKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for DecoderKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "mld_exact" | "exact" => Ok(DecoderKind::MldExact),
            "mld_mps" | "mps" => Ok(DecoderKind::MldMps),
            "mwm" => Ok(DecoderKind::Mwm),
            _ => Err(Error::Parse(format!(
                "unknown decoder {s:?}; expected mld_exact, mld_mps or mwm"
            ))),
        }
    }
}

/// One benchmark: a decoder and noise model swept over distances and error
/// rates.
///
/// ```json
/// {
///   "decoder": "mld_mps",
///   "noise": {"model": "depolarizing"},
///   "d": [5, 7],
///   "eps": [0.15, 0.16],
///   "chi": 6,
///   "trials": 100000,
///   "target_failures": 1000,
///   "master_seed": 7,
///   "output": "results.csv"
/// }
/// ```
///
/// A point stops at whichever of `trials` and `target_failures` is reached
/// first; at least one must be given.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub decoder: DecoderKind,
    pub noise: NoiseSpec,
    #[serde(rename = "d")]
    pub distances: Vec<usize>,
    pub eps: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub chi: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trials: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target_failures: Option<u64>,
    #[serde(default)]
    pub master_seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
    /// Trials handed to the thread pool at once.
    #[serde(default = "default_batch")]
    pub batch_size: u64,
}

fn default_batch() -> u64 {
    1024
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let config: Self = serde_json::from_str(text)?;
        config.validate()?;
        Ok(config)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    /// Bond dimension used by the MPS decoder.
    pub fn effective_chi(&self) -> Option<usize> {
        match self.decoder {
            DecoderKind::MldMps => Some(self.chi.unwrap_or(DEFAULT_CHI)),
            _ => None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Config(msg));
        if self.distances.is_empty() || self.eps.is_empty() {
            return bad("need at least one distance and one error rate".into());
        }
        for &d in &self.distances {
            SurfaceCode::new(d)?;
        }
        for &eps in &self.eps {
            self.noise.at(Some(eps))?;
        }
        if self.decoder == DecoderKind::MldExact {
            let x_only = match self.noise.model {
                NoiseKind::X => true,
                NoiseKind::Depolarizing => false,
                NoiseKind::Custom => self.noise.at(None)?.is_x_only(),
            };
            if !x_only {
                return bad("mld_exact only handles bit-flip noise".into());
            }
        }
        if self.decoder == DecoderKind::MldMps && self.chi.is_some_and(|c| c < 2) {
            return bad("chi must be at least 2".into());
        }
        if self.decoder != DecoderKind::MldMps && self.chi.is_some() {
            return bad(format!("chi has no meaning for {}", self.decoder));
        }
        match (self.trials, self.target_failures) {
            (None, None) => return bad("set trials, target_failures or both".into()),
            (Some(0), _) | (_, Some(0)) => return bad("trial and failure targets must be positive".into()),
            (None, Some(_)) if self.eps.contains(&0.0) && self.noise.model != NoiseKind::Custom => {
                return bad("a failure target without a trial budget never ends at eps = 0".into())
            }
            _ => {}
        }
        if self.batch_size == 0 {
            return bad("batch_size must be positive".into());
        }
        Ok(())
    }
}
