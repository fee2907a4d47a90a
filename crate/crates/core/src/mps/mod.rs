//! Matrix product states over binary physical indices and the boundary
//! contraction of the planar coset network.

mod decoder;
mod network;

pub use decoder::{contract, contract_signed, MpsDecoder, DEFAULT_CHI};
pub use network::{
    build_column, build_network, column_operator, columns_to_mpo_mps, node_kind, Column,
    NodeKind, SiteTensor, TensorGrid,
};

use nalgebra::DMatrix;

use crate::error::{Error, Result};

/// A real number stored as sign and `ln` of its magnitude.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SignedLog {
    /// `-1`, `0` or `1`.
    pub sign: f64,
    pub ln_abs: f64,
}

impl SignedLog {
    pub const ZERO: SignedLog = SignedLog {
        sign: 0.0,
        ln_abs: f64::NEG_INFINITY,
    };

    pub fn from_value(v: f64) -> Self {
        if v == 0.0 {
            Self::ZERO
        } else {
            Self {
                sign: v.signum(),
                ln_abs: v.abs().ln(),
            }
        }
    }

    pub fn value(self) -> f64 {
        self.sign * self.ln_abs.exp()
    }

    /// `ln` of the value, or `-inf` when it is not positive.
    pub fn ln_positive(self) -> f64 {
        if self.sign > 0.0 {
            self.ln_abs
        } else {
            f64::NEG_INFINITY
        }
    }
}

/// `psi(x) = sign * exp(log_scale) * A_{x_1}(1) ... A_{x_L}(L)`.
#[derive(Clone, Debug)]
pub struct Mps {
    pub sites: Vec<[DMatrix<f64>; 2]>,
    pub log_scale: f64,
    pub sign: f64,
}

/// Operator with site matrices `A_{xy}` mapping input index `y` to output `x`.
#[derive(Clone, Debug)]
pub struct Mpo {
    pub sites: Vec<[[DMatrix<f64>; 2]; 2]>,
}

impl Mps {
    pub fn new(sites: Vec<[DMatrix<f64>; 2]>) -> Result<Self> {
        check_chain(sites.iter().map(|[a, b]| {
            if a.shape() != b.shape() {
                return Err(Error::Numerical("site matrices differ in shape".into()));
            }
            Ok(a.shape())
        }))?;
        Ok(Self {
            sites,
            log_scale: 0.0,
            sign: 1.0,
        })
    }

    /// `|0...0>`-like product state with the given amplitudes per site.
    pub fn product(amplitudes: &[[f64; 2]]) -> Self {
        let sites = amplitudes
            .iter()
            .map(|&[a, b]| [DMatrix::from_element(1, 1, a), DMatrix::from_element(1, 1, b)])
            .collect();
        Self {
            sites,
            log_scale: 0.0,
            sign: 1.0,
        }
    }

    pub fn len(&self) -> usize {
        self.sites.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sites.is_empty()
    }

    pub fn bond_dimension(&self) -> usize {
        self.sites
            .iter()
            .map(|s| s[0].nrows().max(s[0].ncols()))
            .max()
            .unwrap_or(0)
    }

    /// Amplitudes indexed with `x_1` as the most significant bit.
    pub fn to_dense(&self) -> Vec<f64> {
        let l = self.len();
        let scale = self.sign * self.log_scale.exp();
        (0..1usize << l)
            .map(|index| {
                let mut m = DMatrix::identity(1, 1);
                for (s, site) in self.sites.iter().enumerate() {
                    m *= &site[(index >> (l - 1 - s)) & 1];
                }
                scale * m[(0, 0)]
            })
            .collect()
    }

    /// `sum_x self(x) other(x)` without conjugation.
    pub fn overlap(&self, other: &Mps) -> Result<SignedLog> {
        if self.len() != other.len() {
            return Err(Error::DimensionMismatch {
                expected: self.len(),
                found: other.len(),
            });
        }
        let mut env = DMatrix::identity(1, 1);
        let mut log = self.log_scale + other.log_scale;
        for (a, b) in self.sites.iter().zip(&other.sites) {
            env = a[0].transpose() * &env * &b[0] + a[1].transpose() * &env * &b[1];
            let m = env.amax();
            if m == 0.0 {
                return Ok(SignedLog::ZERO);
            }
            env /= m;
            log += m.ln();
        }
        let v = env[(0, 0)];
        if v == 0.0 {
            return Ok(SignedLog::ZERO);
        }
        Ok(SignedLog {
            sign: self.sign * other.sign * v.signum(),
            ln_abs: log + v.abs().ln(),
        })
    }
}

impl Mpo {
    pub fn new(sites: Vec<[[DMatrix<f64>; 2]; 2]>) -> Result<Self> {
        check_chain(sites.iter().map(|s| {
            let shape = s[0][0].shape();
            if s.iter().flatten().any(|m| m.shape() != shape) {
                return Err(Error::Numerical("site matrices differ in shape".into()));
            }
            Ok(shape)
        }))?;
        Ok(Self { sites })
    }

    pub fn identity(len: usize) -> Self {
        let one = || DMatrix::from_element(1, 1, 1.0);
        let zero = || DMatrix::from_element(1, 1, 0.0);
        Self {
            sites: (0..len).map(|_| [[one(), zero()], [zero(), one()]]).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.sites.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sites.is_empty()
    }

    pub fn bond_dimension(&self) -> usize {
        self.sites
            .iter()
            .map(|s| s[0][0].nrows().max(s[0][0].ncols()))
            .max()
            .unwrap_or(0)
    }

    /// Dense matrix `O[x][y]`, bit order as in [`Mps::to_dense`].
    pub fn to_dense(&self) -> DMatrix<f64> {
        let l = self.len();
        let n = 1usize << l;
        DMatrix::from_fn(n, n, |x, y| {
            let mut m = DMatrix::identity(1, 1);
            for (s, site) in self.sites.iter().enumerate() {
                let shift = l - 1 - s;
                m *= &site[(x >> shift) & 1][(y >> shift) & 1];
            }
            m[(0, 0)]
        })
    }
}

fn check_chain(shapes: impl Iterator<Item = Result<(usize, usize)>>) -> Result<()> {
    let mut prev = 1;
    let mut last = 1;
    for shape in shapes {
        let (r, c) = shape?;
        if r != prev {
            return Err(Error::DimensionMismatch {
                expected: prev,
                found: r,
            });
        }
        prev = c;
        last = c;
    }
    if last != 1 {
        return Err(Error::DimensionMismatch {
            expected: 1,
            found: last,
        });
    }
    Ok(())
}

/// `O psi`; bond dimensions multiply.
pub fn apply_mpo(op: &Mpo, psi: &Mps) -> Result<Mps> {
    if op.len() != psi.len() {
        return Err(Error::DimensionMismatch {
            expected: psi.len(),
            found: op.len(),
        });
    }
    let sites = op
        .sites
        .iter()
        .zip(&psi.sites)
        .map(|(o, a)| {
            let out = |x: usize| o[x][0].kronecker(&a[0]) + o[x][1].kronecker(&a[1]);
            [out(0), out(1)]
        })
        .collect();
    Ok(Mps {
        sites,
        log_scale: psi.log_scale,
        sign: psi.sign,
    })
}

/// Bring every site into left canonical form, `sum_x A_x^T A_x = I`.
/// Returns the scalar pulled out of the chain together with the normalised
/// state, so that `psi = gamma * result`.
pub fn left_canonical(psi: &Mps) -> Result<(SignedLog, Mps)> {
    let mut carry = DMatrix::identity(1, 1);
    let mut log = psi.log_scale;
    let mut sites = Vec::with_capacity(psi.len());
    for [a0, a1] in &psi.sites {
        let r = carry.nrows();
        let c = a0.ncols();
        let mut stacked = DMatrix::zeros(2 * r, c);
        stacked.rows_mut(0, r).copy_from(&(&carry * a0));
        stacked.rows_mut(r, r).copy_from(&(&carry * a1));
        let qr = stacked.qr();
        let q = qr.q();
        let rr = qr.r();
        sites.push([q.rows(0, r).into_owned(), q.rows(r, r).into_owned()]);
        let m = rr.amax();
        if !(m > 0.0) || !m.is_finite() {
            return Err(Error::DegenerateState);
        }
        carry = rr / m;
        log += m.ln();
    }
    let v = carry[(0, 0)];
    if v == 0.0 {
        return Err(Error::DegenerateState);
    }
    let gamma = SignedLog {
        sign: psi.sign * v.signum(),
        ln_abs: log + v.abs().ln(),
    };
    Ok((
        gamma,
        Mps {
            sites,
            log_scale: 0.0,
            sign: 1.0,
        },
    ))
}

/// Thin SVD `m = u diag(s) vt` with `s` descending. nalgebra's bidiagonal
/// SVD loses relative accuracy on graded matrices, which the boundary states
/// of low-noise networks are, so this goes through faer.
fn thin_svd(m: &DMatrix<f64>) -> Result<(DMatrix<f64>, Vec<f64>, DMatrix<f64>)> {
    let (r, c) = m.shape();
    let k = r.min(c);
    let svd = faer::Mat::<f64>::from_fn(r, c, |i, j| m[(i, j)])
        .thin_svd()
        .map_err(|e| Error::Numerical(format!("svd did not converge: {e:?}")))?;
    let (fu, fs, fv) = (svd.U(), svd.S().column_vector(), svd.V());
    let u = DMatrix::from_fn(r, k, |i, j| fu[(i, j)]);
    let vt = DMatrix::from_fn(k, c, |i, j| fv[(j, i)]);
    Ok((u, (0..k).map(|i| fs[i]).collect(), vt))
}

/// Sequential Schmidt truncation to bond dimension `chi`: a left canonical
/// pass followed by a right-to-left sweep of SVDs. All sites of the result
/// except the first are right canonical; the first site is normalised too,
/// with the norm moved into `log_scale`.
pub fn truncate(psi: &Mps, chi: usize) -> Result<Mps> {
    if chi == 0 {
        return Err(Error::InvalidParameter("bond dimension must be positive".into()));
    }
    let (gamma, mut b) = left_canonical(psi)?;
    let mut log = gamma.ln_abs;
    let mut sign = gamma.sign;
    for m in (0..b.len()).rev() {
        let [a0, a1] = &b.sites[m];
        let (r, c) = a0.shape();
        let mut joined = DMatrix::zeros(r, 2 * c);
        joined.columns_mut(0, c).copy_from(a0);
        joined.columns_mut(c, c).copy_from(a1);
        let (u, s, vt) = thin_svd(&joined)?;
        let k = s.iter().take(chi).filter(|&&x| x > 0.0).count();
        if k == 0 {
            return Err(Error::DegenerateState);
        }
        let vk = vt.rows(0, k).into_owned();
        let mut us = u.columns(0, k).into_owned();
        for (col, &x) in s[..k].iter().enumerate() {
            us.column_mut(col).scale_mut(x);
        }
        b.sites[m] = [vk.columns(0, c).into_owned(), vk.columns(c, c).into_owned()];
        if m > 0 {
            let prev = &mut b.sites[m - 1];
            prev[0] = &prev[0] * &us;
            prev[1] = &prev[1] * &us;
        } else {
            let v = us[(0, 0)];
            sign *= v.signum();
            log += v.abs().ln();
        }
    }
    b.log_scale = log;
    b.sign = sign;
    Ok(b)
}
