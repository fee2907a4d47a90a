//! Brute-force checks of both maximum-likelihood decoders on small codes.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::Result;
use crate::gaussian::coset_probability_x;
use crate::lattice::{LogicalClass, SurfaceCode, Syndrome};
use crate::logmath::relative_error;
use crate::mps::MpsDecoder;
use crate::noise::{coset_probability_oracle, CosetGroup, NoiseModel};

/// Largest deviation seen over one batch of comparisons.
#[derive(Clone, Debug, Serialize)]
pub struct OracleCheck {
    pub method: &'static str,
    pub noise: String,
    pub cases: usize,
    pub max_error: f64,
}

/// Error of an estimate against an exact coset value. Cosets of zero
/// probability are measured against the largest coset of the syndrome,
/// since a relative error is meaningless there.
pub fn coset_error(estimate: f64, exact: f64, largest: f64) -> f64 {
    if exact == f64::NEG_INFINITY {
        if estimate == f64::NEG_INFINITY || largest == f64::NEG_INFINITY {
            0.0
        } else {
            (estimate - largest).exp()
        }
    } else {
        relative_error(estimate, exact)
    }
}

/// Exact bit-flip decoder against the plaquette-group sum, over every
/// syndrome without plaquette defects and both cosets.
pub fn check_exact(d: usize, eps: &[f64]) -> Result<Vec<OracleCheck>> {
    let lat = SurfaceCode::new(d)?;
    let m = d * (d - 1);
    let mut out = Vec::new();
    for &e in eps {
        let noise = NoiseModel::x_noise(e)?;
        let mut check = OracleCheck {
            method: "exact",
            noise: noise.to_string(),
            cases: 0,
            max_error: 0.0,
        };
        for k in 0..1u64 << m {
            let f = lat.canonical_error(&Syndrome::from_index(d, k))?;
            for class in [LogicalClass::I, LogicalClass::X] {
                let rep = f.multiply(&lat.logical(class))?;
                let want = coset_probability_oracle(&lat, &noise, &rep, CosetGroup::PlaquettesOnly)?;
                let got = coset_probability_x(&lat, &rep, e)?;
                check.max_error = check.max_error.max(relative_error(got, want));
                check.cases += 1;
            }
        }
        out.push(check);
    }
    Ok(out)
}

/// MPS decoder against the full-group sum on `samples` random syndromes
/// per noise model, all four cosets each. Bit-flip noise only produces site
/// defects, so its syndromes leave the plaquette bits clear.
pub fn check_mps(d: usize, noises: &[NoiseModel], chi: usize, samples: usize, seed: u64) -> Result<Vec<OracleCheck>> {
    let lat = SurfaceCode::new(d)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    for noise in noises {
        let dec = MpsDecoder::new(lat.clone(), *noise, chi)?;
        let mut check = OracleCheck {
            method: "mps",
            noise: noise.to_string(),
            cases: 0,
            max_error: 0.0,
        };
        for _ in 0..samples {
            let mut s = Syndrome::zeros(d);
            s.site_bits.iter_mut().for_each(|b| *b = rng.random());
            if !noise.is_x_only() {
                s.plaquette_bits.iter_mut().for_each(|b| *b = rng.random());
            }
            let f = lat.canonical_error(&s)?;
            let mut exact = [0.0; 4];
            for (k, class) in LogicalClass::ALL.into_iter().enumerate() {
                exact[k] = coset_probability_oracle(&lat, noise, &f.multiply(&lat.logical(class))?, CosetGroup::Full)?;
            }
            let largest = exact.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            for (class, estimate) in dec.cosets_of(&f)? {
                let k = LogicalClass::ALL.iter().position(|&c| c == class).expect("listed");
                let err = coset_error(estimate.ln_positive(), exact[k], largest);
                check.max_error = check.max_error.max(err);
                check.cases += 1;
            }
        }
        out.push(check);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn error_measure() {
        assert_eq!(coset_error(f64::NEG_INFINITY, f64::NEG_INFINITY, -1.0), 0.0);
        assert!((coset_error(-41.0, f64::NEG_INFINITY, -1.0) - (-40f64).exp()).abs() < 1e-30);
        assert!((coset_error(1.1f64.ln(), 0.0, 0.0) - 0.1).abs() < 1e-12);
    }

    #[test]
    fn small_suites_pass() {
        for c in check_exact(3, &[0.1, 0.3]).unwrap() {
            assert_eq!(c.cases, 128);
            assert!(c.max_error < 1e-8, "{c:?}");
        }
        let noises = [NoiseModel::x_noise(0.1).unwrap(), NoiseModel::depolarizing(0.1).unwrap()];
        for c in check_mps(3, &noises, 16, 10, 1).unwrap() {
            assert_eq!(c.cases, 40);
            assert!(c.max_error < 1e-8, "{c:?}");
        }
    }
}
