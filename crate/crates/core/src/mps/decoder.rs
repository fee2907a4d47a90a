use super::network::{build_column, column_operator, Column};
use super::{apply_mpo, truncate, Mps, SignedLog};
use crate::decoder::{coset_representative, most_likely, Decision, Decoder};
use crate::error::{Error, Result};
use crate::lattice::{LogicalClass, SurfaceCode, Syndrome};
use crate::noise::NoiseModel;
use crate::pauli::PauliOperator;

pub const DEFAULT_CHI: usize = 6;

fn check_chi(chi: usize) -> Result<()> {
    if chi < 2 {
        return Err(Error::InvalidParameter(format!("bond dimension {chi} below 2")));
    }
    Ok(())
}

/// Boundary state after absorbing every column except the last.
fn sweep(lat: &SurfaceCode, noise: &NoiseModel, f: &PauliOperator, chi: usize) -> Result<Mps> {
    let n = 2 * lat.distance() - 1;
    let Column::First(mut psi) = column_operator(&build_column(lat, noise, f, 0)?) else {
        unreachable!("leftmost column is a state");
    };
    for c in 1..n - 1 {
        let Column::Middle(op) = column_operator(&build_column(lat, noise, f, c)?) else {
            unreachable!("interior column is an operator");
        };
        psi = truncate(&apply_mpo(&op, &psi)?, chi)?;
    }
    Ok(psi)
}

fn last_column(lat: &SurfaceCode, noise: &NoiseModel, f: &PauliOperator) -> Result<Mps> {
    let n = 2 * lat.distance() - 1;
    let Column::Last(m) = column_operator(&build_column(lat, noise, f, n - 1)?) else {
        unreachable!("rightmost column is a state");
    };
    Ok(m)
}

/// Contract the network for each closing column against a shared sweep.
/// A state that truncates to zero yields zero for every closing column.
fn close(
    lat: &SurfaceCode,
    noise: &NoiseModel,
    f: &PauliOperator,
    chi: usize,
    closings: &[&PauliOperator],
) -> Result<Vec<SignedLog>> {
    check_chi(chi)?;
    let psi = match sweep(lat, noise, f, chi) {
        Ok(psi) => psi,
        Err(Error::DegenerateState) => return Ok(vec![SignedLog::ZERO; closings.len()]),
        Err(e) => return Err(e),
    };
    closings
        .iter()
        .map(|g| last_column(lat, noise, g)?.overlap(&psi))
        .collect()
}

/// Approximate `pi(fG)` with its sign; truncation can produce tiny negative
/// values for very unlikely cosets.
pub fn contract_signed(
    lat: &SurfaceCode,
    noise: &NoiseModel,
    f: &PauliOperator,
    chi: usize,
) -> Result<SignedLog> {
    Ok(close(lat, noise, f, chi, &[f])?[0])
}

/// `ln pi(fG)` with bond dimension `chi`; `-inf` when the estimate is not
/// positive.
pub fn contract(lat: &SurfaceCode, noise: &NoiseModel, f: &PauliOperator, chi: usize) -> Result<f64> {
    contract_signed(lat, noise, f, chi).map(SignedLog::ln_positive)
}

/// Approximate maximum-likelihood decoder for arbitrary i.i.d. Pauli noise.
#[derive(Clone, Debug)]
pub struct MpsDecoder {
    lattice: SurfaceCode,
    noise: NoiseModel,
    chi: usize,
}

impl MpsDecoder {
    pub fn new(lattice: SurfaceCode, noise: NoiseModel, chi: usize) -> Result<Self> {
        check_chi(chi)?;
        Ok(Self { lattice, noise, chi })
    }

    pub fn chi(&self) -> usize {
        self.chi
    }

    pub fn noise(&self) -> &NoiseModel {
        &self.noise
    }

    /// Signed estimates for the cosets of `f`, `f X`, `f Y`, `f Z` in the
    /// order I, X, Y, Z. `Z` lives in the rightmost column, so `f` and `f Z`
    /// share one sweep and `f X`, `f Y` share another.
    pub fn cosets_of(&self, f: &PauliOperator) -> Result<[(LogicalClass, SignedLog); 4]> {
        let lat = &self.lattice;
        let rep = |c| coset_representative(lat, f, c);
        let (fx, fy, fz) = (rep(LogicalClass::X), rep(LogicalClass::Y), rep(LogicalClass::Z));
        let even = close(lat, &self.noise, f, self.chi, &[f, &fz])?;
        let odd = close(lat, &self.noise, &fx, self.chi, &[&fx, &fy])?;
        Ok([
            (LogicalClass::I, even[0]),
            (LogicalClass::X, odd[0]),
            (LogicalClass::Y, odd[1]),
            (LogicalClass::Z, even[1]),
        ])
    }

    pub fn cosets(&self, s: &Syndrome) -> Result<[(LogicalClass, SignedLog); 4]> {
        self.cosets_of(&self.lattice.canonical_error(s)?)
    }
}

impl Decoder for MpsDecoder {
    fn name(&self) -> &'static str {
        "mld_mps"
    }

    fn lattice(&self) -> &SurfaceCode {
        &self.lattice
    }

    fn decode(&self, syndrome: &Syndrome) -> Result<Decision> {
        let f = self.lattice.canonical_error(syndrome)?;
        let cosets = self.cosets_of(&f)?.map(|(c, v)| (c, v.ln_positive()));
        let (class, _) = most_likely(&cosets).ok_or_else(|| {
            Error::DecoderFailure(format!("no coset with positive estimate for syndrome {syndrome}"))
        })?;
        Ok(Decision {
            class,
            correction: coset_representative(&self.lattice, &f, class),
        })
    }
}
