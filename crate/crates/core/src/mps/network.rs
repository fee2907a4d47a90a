//! The planar tensor network whose contraction is `pi(fG)`.
//!
//! Every stabilizer generator carries a binary variable (`alpha_u` for sites,
//! `beta_p` for plaquettes) copied by an s-node to its neighbours; every
//! qubit carries a node evaluating `pi_1(f_e g_e)` for the Pauli `g_e`
//! selected by the adjacent variables. On the `(2d-1) x (2d-1)` grid even
//! columns hold horizontal edges and plaquettes, odd columns hold sites and
//! vertical edges.

use nalgebra::DMatrix;

use super::{Mpo, Mps};
use crate::error::{Error, Result};
use crate::lattice::SurfaceCode;
use crate::noise::NoiseModel;
use crate::pauli::{Pauli, PauliOperator};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NodeKind {
    Site(usize),
    Plaquette(usize),
    Horizontal(usize),
    Vertical(usize),
}

/// What sits at grid position `(r, c)`.
pub fn node_kind(lat: &SurfaceCode, r: usize, c: usize) -> NodeKind {
    match (r % 2, c % 2) {
        (0, 0) => NodeKind::Horizontal(lat.horizontal_edge(r / 2, c / 2)),
        (1, 0) => NodeKind::Plaquette(lat.plaquette_index(r / 2, c / 2)),
        (0, 1) => NodeKind::Site(lat.site_index(r / 2, c / 2)),
        _ => NodeKind::Vertical(lat.vertical_edge(r / 2, c / 2)),
    }
}

/// Four-index tensor `T[up][down][left][right]`; absent links have size 1.
#[derive(Clone, Debug, PartialEq)]
pub struct SiteTensor {
    pub kind: NodeKind,
    dims: [usize; 4],
    values: Vec<f64>,
}

impl SiteTensor {
    pub fn dims(&self) -> [usize; 4] {
        self.dims
    }

    pub fn get(&self, up: usize, down: usize, left: usize, right: usize) -> f64 {
        let [_, dd, dl, dr] = self.dims;
        self.values[((up * dd + down) * dl + left) * dr + right]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn nonzero_count(&self) -> usize {
        self.values.iter().filter(|&&v| v != 0.0).count()
    }
}

#[derive(Clone, Debug)]
pub struct TensorGrid {
    size: usize,
    columns: Vec<Vec<SiteTensor>>,
}

impl TensorGrid {
    /// Side length `2d - 1`.
    pub fn size(&self) -> usize {
        self.size
    }

    pub fn get(&self, r: usize, c: usize) -> &SiteTensor {
        &self.columns[c][r]
    }

    pub fn column(&self, c: usize) -> &[SiteTensor] {
        &self.columns[c]
    }
}

pub fn build_network(lat: &SurfaceCode, noise: &NoiseModel, f: &PauliOperator) -> Result<TensorGrid> {
    check_operator(lat, f)?;
    let size = 2 * lat.distance() - 1;
    Ok(TensorGrid {
        size,
        columns: (0..size).map(|c| column_tensors(lat, noise, f, c)).collect(),
    })
}

/// Tensors of grid column `c` only.
pub fn build_column(
    lat: &SurfaceCode,
    noise: &NoiseModel,
    f: &PauliOperator,
    c: usize,
) -> Result<Vec<SiteTensor>> {
    check_operator(lat, f)?;
    if c >= 2 * lat.distance() - 1 {
        return Err(Error::InvalidParameter(format!("column {c} outside the grid")));
    }
    Ok(column_tensors(lat, noise, f, c))
}

fn check_operator(lat: &SurfaceCode, f: &PauliOperator) -> Result<()> {
    if f.num_qubits() != lat.num_qubits() {
        return Err(Error::DimensionMismatch {
            expected: lat.num_qubits(),
            found: f.num_qubits(),
        });
    }
    Ok(())
}

fn column_tensors(lat: &SurfaceCode, noise: &NoiseModel, f: &PauliOperator, c: usize) -> Vec<SiteTensor> {
    let size = 2 * lat.distance() - 1;
    let probs = Pauli::ALL.map(|p| noise.single_qubit_prob(p));
    let prob = |p: Pauli| probs[p as usize];
    (0..size)
        .map(|r| {
            let kind = node_kind(lat, r, c);
            let link = |present: bool| if present { 2 } else { 1 };
            let dims = [
                link(r > 0),
                link(r + 1 < size),
                link(c > 0),
                link(c + 1 < size),
            ];
            let mut values = Vec::with_capacity(dims.iter().product());
            for up in 0..dims[0] {
                for down in 0..dims[1] {
                    for left in 0..dims[2] {
                        for right in 0..dims[3] {
                            let v = match kind {
                                NodeKind::Site(_) | NodeKind::Plaquette(_) => {
                                    let present = [up, down, left, right]
                                        .into_iter()
                                        .zip(dims)
                                        .filter(|&(_, n)| n == 2)
                                        .map(|(i, _)| i);
                                    let mut seen = present.clone();
                                    let first = seen.next().unwrap_or(0);
                                    if seen.all(|i| i == first) {
                                        1.0
                                    } else {
                                        0.0
                                    }
                                }
                                // Sites to the sides select Z, plaquettes above
                                // and below select X.
                                NodeKind::Horizontal(e) => {
                                    let g = Pauli::from_bits((up ^ down) == 1, (left ^ right) == 1);
                                    prob(f.get(e).mul(g))
                                }
                                // Sites above and below, plaquettes to the sides.
                                NodeKind::Vertical(e) => {
                                    let g = Pauli::from_bits((left ^ right) == 1, (up ^ down) == 1);
                                    prob(f.get(e).mul(g))
                                }
                            };
                            values.push(v);
                        }
                    }
                }
            }
            SiteTensor { kind, dims, values }
        })
        .collect()
}

/// A grid column read as an operator on the horizontal links.
#[derive(Clone, Debug)]
pub enum Column {
    /// Leftmost column: a state over its right links.
    First(Mps),
    Middle(Mpo),
    /// Rightmost column: a state over its left links.
    Last(Mps),
}

/// Vertical links become virtual bonds (up = row index, down = column index).
pub fn column_operator(tensors: &[SiteTensor]) -> Column {
    let block = |t: &SiteTensor, left: usize, right: usize| {
        let [du, dd, _, _] = t.dims;
        DMatrix::from_fn(du, dd, |u, dn| t.get(u, dn, left, right))
    };
    let first = tensors[0].dims;
    if first[2] == 1 && first[3] == 1 {
        // A single column grid never occurs for d >= 2.
        unreachable!("column without horizontal links");
    }
    if first[2] == 1 {
        let sites = tensors.iter().map(|t| [block(t, 0, 0), block(t, 0, 1)]).collect();
        Column::First(plain_mps(sites))
    } else if first[3] == 1 {
        let sites = tensors.iter().map(|t| [block(t, 0, 0), block(t, 1, 0)]).collect();
        Column::Last(plain_mps(sites))
    } else {
        let sites = tensors
            .iter()
            .map(|t| {
                [
                    [block(t, 0, 0), block(t, 1, 0)],
                    [block(t, 0, 1), block(t, 1, 1)],
                ]
            })
            .collect();
        Column::Middle(Mpo { sites })
    }
}

fn plain_mps(sites: Vec<[DMatrix<f64>; 2]>) -> Mps {
    Mps {
        sites,
        log_scale: 0.0,
        sign: 1.0,
    }
}

/// Split the grid into the first column state, the middle operators and the
/// last column state.
pub fn columns_to_mpo_mps(grid: &TensorGrid) -> (Mps, Vec<Mpo>, Mps) {
    let n = grid.size();
    let expect_state = |c: usize| match column_operator(grid.column(c)) {
        Column::First(m) | Column::Last(m) => m,
        Column::Middle(_) => unreachable!("boundary column read as operator"),
    };
    let middle = (1..n - 1)
        .map(|c| match column_operator(grid.column(c)) {
            Column::Middle(o) => o,
            _ => unreachable!("interior column read as state"),
        })
        .collect();
    (expect_state(0), middle, expect_state(n - 1))
}
