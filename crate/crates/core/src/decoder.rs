use crate::error::Result;
use crate::lattice::{LogicalClass, SurfaceCode, Syndrome};
use crate::pauli::PauliOperator;

/// Outcome of decoding one syndrome.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decision {
    /// Coset of the correction relative to the canonical error `f(s)`.
    pub class: LogicalClass,
    /// Recovery operator; its syndrome equals the input syndrome.
    pub correction: PauliOperator,
}

pub trait Decoder: Send + Sync {
    fn name(&self) -> &'static str;

    fn lattice(&self) -> &SurfaceCode;

    fn decode(&self, syndrome: &Syndrome) -> Result<Decision>;
}

/// Pick the most likely of a set of `(class, ln probability)` pairs; the
/// earliest entry wins ties within `1e-12`.
pub(crate) fn most_likely(candidates: &[(LogicalClass, f64)]) -> Option<(LogicalClass, f64)> {
    let mut best: Option<(LogicalClass, f64)> = None;
    for &(class, value) in candidates {
        if value == f64::NEG_INFINITY || value.is_nan() {
            continue;
        }
        match best {
            Some((_, b)) if value <= b + 1e-12 => {}
            _ => best = Some((class, value)),
        }
    }
    best
}

/// `f(s) * L` for the chosen logical class.
pub(crate) fn coset_representative(
    lat: &SurfaceCode,
    canonical: &PauliOperator,
    class: LogicalClass,
) -> PauliOperator {
    canonical
        .multiply(&lat.logical(class))
        .expect("operators built on the same lattice")
}
