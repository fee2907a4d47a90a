//! Exact coset probabilities for bit-flip noise via fermionic Gaussian states.
//!
//! For an X-type error `f` the plaquette-coset probability factorises as
//! `pi(f G^X) = pi(f) Z(w)`, where `Z(w)` sums `prod_{e in g} w_e` over the
//! plaquette group with edge weights `w_e = eps/(1-eps)` off `f` and the
//! inverse on `f`. `Z(w)` is the amplitude `<psi_e| H^d V^{d-1} ... V^1 H^1
//! |psi_e>` of a matchgate circuit on `d` qubits, and each column operator
//! maps Gaussian states to Gaussian states. We therefore only track the
//! `2d x 2d` covariance matrix `M` and the log of the norm.
//!
//! All scalar factors are accumulated in the log domain; determinants stay
//! in the linear domain where they are of moderate size.

use nalgebra::{DMatrix, DVector};

use crate::decoder::{coset_representative, most_likely, Decision, Decoder};
use crate::error::{Error, Result};
use crate::lattice::{LogicalClass, SurfaceCode, Syndrome};
use crate::pauli::PauliOperator;

/// Updates whose `(M + A)` exceeds this 1-norm condition number are refused.
pub const MAX_CONDITION: f64 = 1e12;

/// Pure Gaussian state as covariance matrix plus `ln` of its norm.
#[derive(Clone, Debug)]
pub struct GaussianState {
    pub covariance: DMatrix<f64>,
    pub log_norm: f64,
}

impl GaussianState {
    /// The even-parity superposition `psi_e` on `d` qubits.
    pub fn even_parity(d: usize) -> Self {
        Self {
            covariance: standard_covariance(d),
            log_norm: (d as f64 - 1.0) * std::f64::consts::LN_2,
        }
    }

    /// `max |M M^T - I|`.
    pub fn orthogonality_defect(&self) -> f64 {
        orthogonality_defect(&self.covariance)
    }
}

pub fn orthogonality_defect(m: &DMatrix<f64>) -> f64 {
    let mut prod = m * m.transpose();
    for i in 0..prod.nrows() {
        prod[(i, i)] -= 1.0;
    }
    prod.amax()
}

/// Per-edge weights `w_e`, indexed by lattice edge.
#[derive(Clone, Debug, PartialEq)]
pub struct EdgeWeights(Vec<f64>);

impl EdgeWeights {
    pub fn get(&self, e: usize) -> f64 {
        self.0[e]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }
}

pub fn edge_weights(lat: &SurfaceCode, f: &PauliOperator, eps: f64) -> Result<EdgeWeights> {
    check_x_type(lat, f)?;
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "edge weights need 0 < eps < 1, got {eps}"
        )));
    }
    let off = eps / (1.0 - eps);
    let on = (1.0 - eps) / eps;
    Ok(EdgeWeights(
        (0..lat.num_qubits())
            .map(|e| if f.x_bit(e) { on } else { off })
            .collect(),
    ))
}

/// Covariance matrix of `psi_e`: `d-1` diagonal blocks `[[0,1],[-1,0]]`
/// offset by one row, plus the corner pair `M[0][2d-1] = 1 = -M[2d-1][0]`.
pub fn standard_covariance(d: usize) -> DMatrix<f64> {
    assert!(d >= 1);
    let size = 2 * d;
    let mut m = DMatrix::zeros(size, size);
    for j in 0..d - 1 {
        m[(2 * j + 1, 2 * j + 2)] = 1.0;
        m[(2 * j + 2, 2 * j + 1)] = -1.0;
    }
    m[(0, size - 1)] += 1.0;
    m[(size - 1, 0)] -= 1.0;
    m
}

/// Project a nearly orthogonal antisymmetric matrix back towards the
/// orthogonal antisymmetric set: `M = QR`, replace `R` by the signs of its
/// diagonal, then antisymmetrize `Q R~`.
pub fn restabilize(m: &DMatrix<f64>) -> DMatrix<f64> {
    let qr = m.clone().qr();
    let r = qr.r();
    let mut q = qr.q();
    for (i, mut col) in q.column_iter_mut().enumerate() {
        if r[(i, i)] < 0.0 {
            col.neg_mut();
        }
    }
    antisymmetrize(&q)
}

fn antisymmetrize(m: &DMatrix<f64>) -> DMatrix<f64> {
    (m - m.transpose()) * 0.5
}

/// `A(lambda)`: antisymmetric, `lambda` on the first superdiagonal.
fn superdiagonal(lambda: &[f64]) -> DMatrix<f64> {
    let size = lambda.len() + 1;
    let mut a = DMatrix::zeros(size, size);
    for (k, &x) in lambda.iter().enumerate() {
        a[(k, k + 1)] = x;
        a[(k + 1, k)] = -x;
    }
    a
}

/// Diagnostics of a single column update.
#[derive(Clone, Copy, Debug, Default)]
pub struct UpdateReport {
    pub condition: f64,
    /// `max |M M^T - I|` straight after the update, before restabilization.
    pub raw_defect: f64,
}

/// How the covariance matrix is kept on the orthogonal manifold.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Stabilization {
    pub restabilize: bool,
    /// Measure the orthogonality defect after each update (costs a product).
    pub measure: bool,
}

impl Default for Stabilization {
    fn default() -> Self {
        Self {
            restabilize: true,
            measure: false,
        }
    }
}

/// `M <- A - B (M + A)^{-1} B`, `Gamma <- Gamma * factor * sqrt(det(M + A))`.
fn apply_update(
    state: &mut GaussianState,
    a: DMatrix<f64>,
    b: &DVector<f64>,
    log_factor: f64,
    column: usize,
    opts: Stabilization,
) -> Result<UpdateReport> {
    let sum = &state.covariance + &a;
    let norm_sum = one_norm(&sum);
    let lu = sum.lu();
    let u = lu.u();
    let mut sign = lu.p().determinant::<f64>();
    let mut log_det = 0.0;
    for i in 0..u.nrows() {
        let x = u[(i, i)];
        if x < 0.0 {
            sign = -sign;
        }
        log_det += x.abs().ln();
    }
    let inverse = lu.try_inverse().ok_or(Error::Singular {
        column,
        condition: f64::INFINITY,
    })?;
    let condition = norm_sum * one_norm(&inverse);
    if !(condition <= MAX_CONDITION) {
        return Err(Error::Singular { column, condition });
    }
    if sign < 0.0 {
        // det(M + A) is a squared Pfaffian; a negative value signals loss of
        // antisymmetry or a numerically vanishing determinant.
        return if log_det < (1e-12f64).ln() {
            Err(Error::Singular { column, condition })
        } else {
            Err(Error::Numerical(format!(
                "negative determinant {:.3e} in column {column}",
                -log_det.exp()
            )))
        };
    }

    let mut next = a;
    for j in 0..next.ncols() {
        for i in 0..next.nrows() {
            next[(i, j)] -= b[i] * inverse[(i, j)] * b[j];
        }
    }
    let next = antisymmetrize(&next);
    let raw_defect = if opts.measure {
        orthogonality_defect(&next)
    } else {
        0.0
    };
    state.covariance = if opts.restabilize {
        restabilize(&next)
    } else {
        next
    };
    state.log_norm += log_factor + 0.5 * log_det;
    Ok(UpdateReport {
        condition,
        raw_defect,
    })
}

fn one_norm(m: &DMatrix<f64>) -> f64 {
    m.column_iter()
        .map(|c| c.iter().map(|x| x.abs()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Apply the horizontal column operator `H^j` (`j` zero-based).
pub fn simulate_horizontal(
    lat: &SurfaceCode,
    j: usize,
    state: &mut GaussianState,
    w: &EdgeWeights,
    opts: Stabilization,
) -> Result<UpdateReport> {
    let d = lat.distance();
    let column = &lat.horizontal_columns()[j];
    let mut lambda = vec![0.0; 2 * d - 1];
    let mut b = DVector::zeros(2 * d);
    let mut log_factor = 0.0;
    for (i, &e) in column.iter().enumerate() {
        let w2 = w.get(e) * w.get(e);
        log_factor += ((1.0 + w2) / 2.0).ln();
        lambda[2 * i] = (1.0 - w2) / (1.0 + w2);
        let s = 2.0 * w.get(e) / (1.0 + w2);
        b[2 * i] = s;
        b[2 * i + 1] = s;
    }
    apply_update(state, superdiagonal(&lambda), &b, log_factor, 2 * j, opts)
}

/// Apply the vertical column operator `V^j` (`j` zero-based).
pub fn simulate_vertical(
    lat: &SurfaceCode,
    j: usize,
    state: &mut GaussianState,
    w: &EdgeWeights,
    opts: Stabilization,
) -> Result<UpdateReport> {
    let d = lat.distance();
    let column = &lat.vertical_columns()[j];
    let mut lambda = vec![0.0; 2 * d - 1];
    let mut b = DVector::from_element(2 * d, 1.0);
    let mut log_factor = 0.0;
    for (i, &e) in column.iter().enumerate() {
        let w2 = w.get(e) * w.get(e);
        log_factor += (1.0 + w2).ln();
        lambda[2 * i + 1] = 2.0 * w.get(e) / (1.0 + w2);
        let s = (1.0 - w2) / (1.0 + w2);
        b[2 * i + 1] = s;
        b[2 * i + 2] = s;
    }
    apply_update(state, superdiagonal(&lambda), &b, log_factor, 2 * j + 1, opts)
}

/// Running maxima collected over one coset evaluation.
#[derive(Clone, Copy, Debug, Default)]
pub struct CosetTrace {
    pub max_condition: f64,
    pub max_raw_defect: f64,
    /// Defect of the covariance matrix actually carried forward.
    pub max_defect: f64,
}

/// `ln pi(f G^X)` for an X-type `f`; see [`GaussianDecoder`] for options.
pub fn coset_probability_x(lat: &SurfaceCode, f: &PauliOperator, eps: f64) -> Result<f64> {
    coset_probability_traced(lat, f, eps, Stabilization::default()).map(|(v, _)| v)
}

pub fn coset_probability_traced(
    lat: &SurfaceCode,
    f: &PauliOperator,
    eps: f64,
    opts: Stabilization,
) -> Result<(f64, CosetTrace)> {
    check_x_type(lat, f)?;
    if !(0.0..=1.0).contains(&eps) {
        return Err(Error::InvalidParameter(format!("error rate {eps} outside [0, 1]")));
    }
    if eps == 0.0 || eps == 1.0 {
        // Only one error pattern has non-zero probability (no flips, or
        // flips everywhere); the coset either contains it or not.
        let mut g = f.clone();
        if eps == 1.0 {
            g.mul_assign(&PauliOperator::x_on(lat.num_qubits(), 0..lat.num_qubits()))?;
        }
        let in_group = lat.classify_residual(&g).ok() == Some(LogicalClass::I);
        let v = if in_group { 0.0 } else { f64::NEG_INFINITY };
        return Ok((v, CosetTrace::default()));
    }

    let d = lat.distance();
    let w = edge_weights(lat, f, eps)?;
    let weight = f.weight() as f64;
    let log_pi_f = (lat.num_qubits() as f64 - weight) * (1.0 - eps).ln() + weight * eps.ln();

    let mut trace = CosetTrace::default();
    let mut record = |report: UpdateReport, state: &GaussianState| {
        trace.max_condition = trace.max_condition.max(report.condition);
        trace.max_raw_defect = trace.max_raw_defect.max(report.raw_defect);
        if opts.measure {
            trace.max_defect = trace.max_defect.max(state.orthogonality_defect());
        }
    };
    let mut state = GaussianState::even_parity(d);
    for j in 0..d - 1 {
        let r = simulate_horizontal(lat, j, &mut state, &w, opts)?;
        record(r, &state);
        let r = simulate_vertical(lat, j, &mut state, &w, opts)?;
        record(r, &state);
    }
    let r = simulate_horizontal(lat, d - 1, &mut state, &w, opts)?;
    record(r, &state);

    // Overlap with psi_e: |<psi_e|psi>| = sqrt(Gamma Gamma_e) 2^{-d/2} det(M + M0)^{1/4}.
    let overlap = &state.covariance + standard_covariance(d);
    let det = overlap.determinant();
    if !(det > 0.0) {
        return Err(Error::Numerical(format!(
            "final overlap determinant {det:.3e} is not positive"
        )));
    }
    let log_z = 0.5 * (state.log_norm - std::f64::consts::LN_2) + 0.25 * det.ln();
    Ok((log_pi_f + log_z, trace))
}

fn check_x_type(lat: &SurfaceCode, f: &PauliOperator) -> Result<()> {
    if f.num_qubits() != lat.num_qubits() {
        return Err(Error::DimensionMismatch {
            expected: lat.num_qubits(),
            found: f.num_qubits(),
        });
    }
    if !f.is_x_type() {
        return Err(Error::Precondition("operator must be X-type".into()));
    }
    Ok(())
}

/// Exact maximum-likelihood decoder for bit-flip noise.
#[derive(Clone, Debug)]
pub struct GaussianDecoder {
    lattice: SurfaceCode,
    eps: f64,
    stabilization: Stabilization,
}

impl GaussianDecoder {
    pub fn new(lattice: SurfaceCode, eps: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&eps) {
            return Err(Error::InvalidParameter(format!("error rate {eps} outside [0, 1]")));
        }
        Ok(Self {
            lattice,
            eps,
            stabilization: Stabilization::default(),
        })
    }

    pub fn with_stabilization(mut self, stabilization: Stabilization) -> Self {
        self.stabilization = stabilization;
        self
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    pub fn coset_probability(&self, f: &PauliOperator) -> Result<f64> {
        self.coset_probability_traced(f).map(|(v, _)| v)
    }

    pub fn coset_probability_traced(&self, f: &PauliOperator) -> Result<(f64, CosetTrace)> {
        coset_probability_traced(&self.lattice, f, self.eps, self.stabilization)
    }

    /// `ln` of the class-I and class-X coset probabilities for syndrome `s`.
    pub fn coset_pair(&self, s: &Syndrome) -> Result<[(LogicalClass, f64); 2]> {
        let f = self.canonical_x_error(s)?;
        let fx = coset_representative(&self.lattice, &f, LogicalClass::X);
        Ok([
            (LogicalClass::I, self.coset_probability(&f)?),
            (LogicalClass::X, self.coset_probability(&fx)?),
        ])
    }

    pub fn decode_x(&self, s: &Syndrome) -> Result<Decision> {
        let f = self.canonical_x_error(s)?;
        let pair = self.coset_pair(s)?;
        let (class, _) = most_likely(&pair).ok_or_else(|| {
            Error::DecoderFailure("both cosets have zero probability".into())
        })?;
        Ok(Decision {
            class,
            correction: coset_representative(&self.lattice, &f, class),
        })
    }

    fn canonical_x_error(&self, s: &Syndrome) -> Result<PauliOperator> {
        if s.plaquette_bits.iter().any(|&b| b) {
            return Err(Error::Precondition(
                "bit-flip decoding needs all plaquette syndrome bits to be zero".into(),
            ));
        }
        self.lattice.canonical_error(s)
    }
}

impl Decoder for GaussianDecoder {
    fn name(&self) -> &'static str {
        "mld_exact"
    }

    fn lattice(&self) -> &SurfaceCode {
        &self.lattice
    }

    fn decode(&self, syndrome: &Syndrome) -> Result<Decision> {
        self.decode_x(syndrome)
    }
}
