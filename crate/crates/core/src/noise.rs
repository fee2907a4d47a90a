//! Independent single-qubit Pauli channels and brute-force coset sums.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::SurfaceCode;
use crate::logmath::log_sum_exp;
use crate::pauli::{Pauli, PauliOperator};

/// i.i.d. Pauli noise: each qubit independently suffers X, Y or Z with the
/// given probabilities and is left alone otherwise.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NoiseModel {
    pub eps_x: f64,
    pub eps_y: f64,
    pub eps_z: f64,
}

impl NoiseModel {
    pub fn custom(eps_x: f64, eps_y: f64, eps_z: f64) -> Result<Self> {
        let m = Self { eps_x, eps_y, eps_z };
        let ok = [eps_x, eps_y, eps_z]
            .iter()
            .all(|p| p.is_finite() && *p >= 0.0)
            && m.eps() <= 1.0 + 1e-12;
        if !ok {
            return Err(Error::InvalidParameter(format!(
                "noise probabilities must be non-negative with total at most 1: {m:?}"
            )));
        }
        Ok(m)
    }

    /// Bit-flip noise: all errors are X.
    pub fn x_noise(eps: f64) -> Result<Self> {
        Self::custom(eps, 0.0, 0.0)
    }

    pub fn depolarizing(eps: f64) -> Result<Self> {
        Self::custom(eps / 3.0, eps / 3.0, eps / 3.0)
    }

    /// Total error rate.
    pub fn eps(&self) -> f64 {
        self.eps_x + self.eps_y + self.eps_z
    }

    pub fn is_x_only(&self) -> bool {
        self.eps_y == 0.0 && self.eps_z == 0.0
    }

    pub fn single_qubit_prob(&self, p: Pauli) -> f64 {
        match p {
            Pauli::I => 1.0 - self.eps(),
            Pauli::X => self.eps_x,
            Pauli::Y => self.eps_y,
            Pauli::Z => self.eps_z,
        }
    }

    /// Natural logs of the single-qubit probabilities, indexed like
    /// [`Pauli::ALL`].
    pub fn log_table(&self) -> [f64; 4] {
        Pauli::ALL.map(|p| self.single_qubit_prob(p).ln())
    }

    /// `ln pi(f)`; `-inf` when some factor vanishes.
    pub fn error_probability(&self, f: &PauliOperator) -> f64 {
        let table = self.log_table();
        f.iter().map(|p| table[p as usize]).sum()
    }

    pub fn sample_error<R: Rng + ?Sized>(&self, n: usize, rng: &mut R) -> PauliOperator {
        let mut f = PauliOperator::identity(n);
        let (cx, cy, cz) = (self.eps_x, self.eps_x + self.eps_y, self.eps());
        for q in 0..n {
            let u: f64 = rng.random();
            if u < cx {
                f.set(q, Pauli::X);
            } else if u < cy {
                f.set(q, Pauli::Y);
            } else if u < cz {
                f.set(q, Pauli::Z);
            }
        }
        f
    }
}

impl fmt::Display for NoiseModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_x_only() {
            write!(f, "x:{}", self.eps_x)
        } else if self.eps_x == self.eps_y && self.eps_y == self.eps_z {
            write!(f, "dep:{}", self.eps())
        } else {
            write!(f, "custom:{},{},{}", self.eps_x, self.eps_y, self.eps_z)
        }
    }
}

/// Compact textual form used on the command line: `x:0.05`,
/// `dep:0.1` (or `depolarizing:0.1`), `custom:ex,ey,ez`.
impl FromStr for NoiseModel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (kind, args) = s
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("noise spec {s:?} should look like x:0.1")))?;
        let nums = args
            .split(',')
            .map(|a| {
                a.trim()
                    .parse::<f64>()
                    .map_err(|e| Error::Parse(format!("bad probability {a:?}: {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        match (kind.trim().to_ascii_lowercase().as_str(), nums.as_slice()) {
            ("x", [eps]) => Self::x_noise(*eps),
            ("dep" | "depolarizing", [eps]) => Self::depolarizing(*eps),
            ("custom", [ex, ey, ez]) => Self::custom(*ex, *ey, *ez),
            _ => Err(Error::Parse(format!("unrecognised noise spec {s:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NoiseKind {
    X,
    Depolarizing,
    Custom,
}

/// Noise description as it appears in configuration files.
///
/// ```json
/// {"model": "depolarizing", "eps": 0.1}
/// {"model": "custom", "eps_x": 0.01, "eps_y": 0.0001, "eps_z": 0.01}
/// ```
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NoiseSpec {
    pub model: NoiseKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eps: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eps_x: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eps_y: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eps_z: Option<f64>,
}

impl NoiseSpec {
    /// Resolve the spec at error rate `eps` (overriding the spec's own
    /// `eps`). Custom models carry their own rates and ignore `eps`.
    pub fn at(&self, eps: Option<f64>) -> Result<NoiseModel> {
        let rate = || {
            eps.or(self.eps)
                .ok_or_else(|| Error::Config(format!("{:?} noise needs an error rate", self.model)))
        };
        match self.model {
            NoiseKind::X => NoiseModel::x_noise(rate()?),
            NoiseKind::Depolarizing => NoiseModel::depolarizing(rate()?),
            NoiseKind::Custom => NoiseModel::custom(
                self.eps_x.unwrap_or(0.0),
                self.eps_y.unwrap_or(0.0),
                self.eps_z.unwrap_or(0.0),
            ),
        }
    }

    pub fn label(&self) -> &'static str {
        match self.model {
            NoiseKind::X => "x",
            NoiseKind::Depolarizing => "depolarizing",
            NoiseKind::Custom => "custom",
        }
    }
}

/// Which stabilizer group to sum over in [`coset_probability_oracle`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CosetGroup {
    /// The full group generated by sites and plaquettes.
    Full,
    /// Only the plaquette (X-type) subgroup.
    PlaquettesOnly,
}

/// Largest number of generators the brute-force sum accepts.
pub const ORACLE_MAX_GENERATORS: usize = 20;

/// `ln sum_g pi(f g)` by explicit enumeration of the group.
pub fn coset_probability_oracle(
    lat: &SurfaceCode,
    noise: &NoiseModel,
    f: &PauliOperator,
    group: CosetGroup,
) -> Result<f64> {
    if f.num_qubits() != lat.num_qubits() {
        return Err(Error::DimensionMismatch {
            expected: lat.num_qubits(),
            found: f.num_qubits(),
        });
    }
    let mut gens = lat.generators();
    if group == CosetGroup::PlaquettesOnly {
        gens.drain(..lat.num_checks());
    }
    if gens.len() > ORACLE_MAX_GENERATORS {
        return Err(Error::SizeLimit {
            generators: gens.len(),
        });
    }
    let table = noise.log_table();
    let mut current = f.clone();
    let mut terms = Vec::with_capacity(1 << gens.len());
    terms.push(noise.error_probability(&current));
    for k in 1u64..(1 << gens.len()) {
        current.mul_assign(&gens[k.trailing_zeros() as usize])?;
        terms.push(current.iter().map(|p| table[p as usize]).sum());
    }
    Ok(log_sum_exp(&terms))
}
