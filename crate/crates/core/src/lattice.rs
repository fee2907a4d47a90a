//! Geometry of the planar surface code.
//!
//! The code lives on a `d x d` square lattice with smooth top/bottom and
//! rough left/right boundaries. Qubits sit on edges:
//!
//! * `d` columns `H^1..H^d` of `d` horizontal edges each,
//! * `d-1` columns `V^1..V^{d-1}` of `d-1` vertical edges each.
//!
//! Edges are numbered column-major in sweep order `H^1, V^1, H^2, ..., H^d`,
//! each column top to bottom, so every column is a contiguous index range.
//!
//! Sites (Z-type stabilizers `A_u`) form a `d x (d-1)` grid: site `(i, j)`
//! sits between horizontal columns `j` and `j+1` in row `i`. Plaquettes
//! (X-type stabilizers `B_p`) form a `(d-1) x d` grid: plaquette `(i, j)`
//! is bounded above and below by rows `i` and `i+1` of horizontal column `j`.
//! All coordinates in this module are zero-based.

use std::fmt;

use crate::error::{Error, Result};
use crate::pauli::PauliOperator;

/// The four logical cosets of a single encoded qubit.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LogicalClass {
    I,
    X,
    Y,
    Z,
}

impl LogicalClass {
    pub const ALL: [LogicalClass; 4] = [
        LogicalClass::I,
        LogicalClass::X,
        LogicalClass::Y,
        LogicalClass::Z,
    ];

    pub fn from_components(has_x: bool, has_z: bool) -> Self {
        match (has_x, has_z) {
            (false, false) => LogicalClass::I,
            (true, false) => LogicalClass::X,
            (true, true) => LogicalClass::Y,
            (false, true) => LogicalClass::Z,
        }
    }

    pub fn has_x(self) -> bool {
        matches!(self, LogicalClass::X | LogicalClass::Y)
    }

    pub fn has_z(self) -> bool {
        matches!(self, LogicalClass::Z | LogicalClass::Y)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            LogicalClass::I => "I",
            LogicalClass::X => "X",
            LogicalClass::Y => "Y",
            LogicalClass::Z => "Z",
        }
    }
}

impl fmt::Display for LogicalClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for LogicalClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "I" | "i" => Ok(LogicalClass::I),
            "X" | "x" => Ok(LogicalClass::X),
            "Y" | "y" => Ok(LogicalClass::Y),
            "Z" | "z" => Ok(LogicalClass::Z),
            other => Err(Error::Parse(format!("unknown logical class {other:?}"))),
        }
    }
}

/// Position of an edge in the lattice.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Edge {
    /// Row `row` of horizontal column `col` (`col < d`, `row < d`).
    Horizontal { row: usize, col: usize },
    /// Row `row` of vertical column `col` (`col < d-1`, `row < d-1`).
    Vertical { row: usize, col: usize },
}

/// Measured stabilizer eigenvalues, one bit per generator.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Syndrome {
    /// One bit per site stabilizer, in site index order.
    pub site_bits: Vec<bool>,
    /// One bit per plaquette stabilizer, in plaquette index order.
    pub plaquette_bits: Vec<bool>,
}

impl Syndrome {
    pub fn zeros(d: usize) -> Self {
        let m = d * (d - 1);
        Self {
            site_bits: vec![false; m],
            plaquette_bits: vec![false; m],
        }
    }

    pub fn is_trivial(&self) -> bool {
        !self.site_bits.iter().chain(&self.plaquette_bits).any(|&b| b)
    }

    pub fn num_defects(&self) -> usize {
        self.site_bits
            .iter()
            .chain(&self.plaquette_bits)
            .filter(|&&b| b)
            .count()
    }

    /// Syndrome with the given integer's bits spread over sites then
    /// plaquettes, least significant bit first. Handy for exhaustive loops.
    pub fn from_index(d: usize, mut index: u64) -> Self {
        let mut s = Self::zeros(d);
        for b in s.site_bits.iter_mut().chain(s.plaquette_bits.iter_mut()) {
            *b = index & 1 == 1;
            index >>= 1;
        }
        s
    }

    /// Parse the textual form: site bits followed by plaquette bits.
    pub fn parse(d: usize, text: &str) -> Result<Self> {
        let bits: Vec<bool> = text
            .chars()
            .filter(|c| !c.is_whitespace() && *c != ',' && *c != '_')
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Error::Parse(format!("syndrome bit must be 0 or 1, got {other:?}"))),
            })
            .collect::<Result<_>>()?;
        let m = d * (d - 1);
        if bits.len() != 2 * m {
            return Err(Error::DimensionMismatch {
                expected: 2 * m,
                found: bits.len(),
            });
        }
        Ok(Self {
            site_bits: bits[..m].to_vec(),
            plaquette_bits: bits[m..].to_vec(),
        })
    }
}

impl fmt::Display for Syndrome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in self.site_bits.iter().chain(&self.plaquette_bits) {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub struct SurfaceCode {
    d: usize,
    n: usize,
    horizontal_columns: Vec<Vec<usize>>,
    vertical_columns: Vec<Vec<usize>>,
    site_stabilizers: Vec<Vec<usize>>,
    plaquette_stabilizers: Vec<Vec<usize>>,
    logical_x: PauliOperator,
    logical_z: PauliOperator,
}

impl SurfaceCode {
    pub fn new(d: usize) -> Result<Self> {
        if d < 3 || d.is_multiple_of(2) {
            return Err(Error::InvalidDistance(d));
        }
        let n = d * d + (d - 1) * (d - 1);
        let stride = 2 * d - 1;
        let h = |row: usize, col: usize| col * stride + row;
        let v = |row: usize, col: usize| col * stride + d + row;

        let horizontal_columns = (0..d)
            .map(|col| (0..d).map(|row| h(row, col)).collect())
            .collect();
        let vertical_columns = (0..d - 1)
            .map(|col| (0..d - 1).map(|row| v(row, col)).collect())
            .collect();

        let mut site_stabilizers = Vec::with_capacity(d * (d - 1));
        for col in 0..d - 1 {
            for row in 0..d {
                let mut support = vec![h(row, col), h(row, col + 1)];
                if row > 0 {
                    support.push(v(row - 1, col));
                }
                if row + 1 < d {
                    support.push(v(row, col));
                }
                support.sort_unstable();
                site_stabilizers.push(support);
            }
        }

        let mut plaquette_stabilizers = Vec::with_capacity(d * (d - 1));
        for col in 0..d {
            for row in 0..d - 1 {
                let mut support = vec![h(row, col), h(row + 1, col)];
                if col > 0 {
                    support.push(v(row, col - 1));
                }
                if col + 1 < d {
                    support.push(v(row, col));
                }
                support.sort_unstable();
                plaquette_stabilizers.push(support);
            }
        }

        // X-bar runs along the top row, Z-bar down the right-most column H^d.
        let logical_x = PauliOperator::x_on(n, (0..d).map(|col| h(0, col)));
        let logical_z = PauliOperator::z_on(n, (0..d).map(|row| h(row, d - 1)));

        Ok(Self {
            d,
            n,
            horizontal_columns,
            vertical_columns,
            site_stabilizers,
            plaquette_stabilizers,
            logical_x,
            logical_z,
        })
    }

    pub fn distance(&self) -> usize {
        self.d
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    /// Number of stabilizers of each type, `d(d-1)`.
    pub fn num_checks(&self) -> usize {
        self.d * (self.d - 1)
    }

    pub fn horizontal_columns(&self) -> &[Vec<usize>] {
        &self.horizontal_columns
    }

    pub fn vertical_columns(&self) -> &[Vec<usize>] {
        &self.vertical_columns
    }

    pub fn site_stabilizers(&self) -> &[Vec<usize>] {
        &self.site_stabilizers
    }

    pub fn plaquette_stabilizers(&self) -> &[Vec<usize>] {
        &self.plaquette_stabilizers
    }

    pub fn logical_x(&self) -> &PauliOperator {
        &self.logical_x
    }

    pub fn logical_z(&self) -> &PauliOperator {
        &self.logical_z
    }

    /// A representative of the logical operator for `class`.
    pub fn logical(&self, class: LogicalClass) -> PauliOperator {
        let mut op = PauliOperator::identity(self.n);
        if class.has_x() {
            op.mul_assign(&self.logical_x).expect("same lattice");
        }
        if class.has_z() {
            op.mul_assign(&self.logical_z).expect("same lattice");
        }
        op
    }

    pub fn horizontal_edge(&self, row: usize, col: usize) -> usize {
        debug_assert!(row < self.d && col < self.d);
        col * (2 * self.d - 1) + row
    }

    pub fn vertical_edge(&self, row: usize, col: usize) -> usize {
        debug_assert!(row + 1 < self.d && col + 1 < self.d);
        col * (2 * self.d - 1) + self.d + row
    }

    pub fn edge(&self, e: usize) -> Edge {
        let stride = 2 * self.d - 1;
        let (col, offset) = (e / stride, e % stride);
        if offset < self.d {
            Edge::Horizontal { row: offset, col }
        } else {
            Edge::Vertical {
                row: offset - self.d,
                col,
            }
        }
    }

    pub fn site_index(&self, row: usize, col: usize) -> usize {
        debug_assert!(row < self.d && col + 1 < self.d);
        col * self.d + row
    }

    pub fn site_coords(&self, index: usize) -> (usize, usize) {
        (index % self.d, index / self.d)
    }

    pub fn plaquette_index(&self, row: usize, col: usize) -> usize {
        debug_assert!(row + 1 < self.d && col < self.d);
        col * (self.d - 1) + row
    }

    pub fn plaquette_coords(&self, index: usize) -> (usize, usize) {
        (index % (self.d - 1), index / (self.d - 1))
    }

    /// All stabilizer generators as operators, sites first.
    pub fn generators(&self) -> Vec<PauliOperator> {
        let sites = self
            .site_stabilizers
            .iter()
            .map(|s| PauliOperator::z_on(self.n, s.iter().copied()));
        let plaquettes = self
            .plaquette_stabilizers
            .iter()
            .map(|s| PauliOperator::x_on(self.n, s.iter().copied()));
        sites.chain(plaquettes).collect()
    }

    pub fn syndrome_of(&self, f: &PauliOperator) -> Result<Syndrome> {
        self.check_size(f)?;
        let parity = |support: &Vec<usize>, bit: &dyn Fn(usize) -> bool| {
            support.iter().filter(|&&e| bit(e)).count() % 2 == 1
        };
        let x_bit = |e| f.x_bit(e);
        let z_bit = |e| f.z_bit(e);
        Ok(Syndrome {
            site_bits: self
                .site_stabilizers
                .iter()
                .map(|s| parity(s, &x_bit))
                .collect(),
            plaquette_bits: self
                .plaquette_stabilizers
                .iter()
                .map(|s| parity(s, &z_bit))
                .collect(),
        })
    }

    fn check_syndrome(&self, s: &Syndrome) -> Result<()> {
        let m = self.num_checks();
        for len in [s.site_bits.len(), s.plaquette_bits.len()] {
            if len != m {
                return Err(Error::DimensionMismatch {
                    expected: m,
                    found: len,
                });
            }
        }
        Ok(())
    }

    /// The canonical error `f(s)`: every flagged site is joined to the left
    /// boundary by a horizontal X-string and every flagged plaquette to the
    /// top boundary by a vertical Z-string, all strings summed mod 2.
    pub fn canonical_error(&self, s: &Syndrome) -> Result<PauliOperator> {
        self.check_syndrome(s)?;
        let mut f = PauliOperator::identity(self.n);
        for (index, _) in s.site_bits.iter().enumerate().filter(|(_, &b)| b) {
            let (row, col) = self.site_coords(index);
            for c in 0..=col {
                f.flip_x(self.horizontal_edge(row, c));
            }
        }
        for (index, _) in s.plaquette_bits.iter().enumerate().filter(|(_, &b)| b) {
            let (row, col) = self.plaquette_coords(index);
            for r in 0..=row {
                f.flip_z(self.horizontal_edge(r, col));
            }
        }
        Ok(f)
    }

    /// Which of the four stabilizer cosets of the centralizer contains `r`.
    pub fn classify_residual(&self, r: &PauliOperator) -> Result<LogicalClass> {
        if !self.syndrome_of(r)?.is_trivial() {
            return Err(Error::Precondition(
                "residual has a non-trivial syndrome".into(),
            ));
        }
        let has_x = !r.commutes(&self.logical_z)?;
        let has_z = !r.commutes(&self.logical_x)?;
        Ok(LogicalClass::from_components(has_x, has_z))
    }

    fn check_size(&self, f: &PauliOperator) -> Result<()> {
        if f.num_qubits() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: f.num_qubits(),
            });
        }
        Ok(())
    }
}

impl fmt::Display for SurfaceCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "surface code d={} n={} ({} site + {} plaquette stabilizers)",
            self.d,
            self.n,
            self.site_stabilizers.len(),
            self.plaquette_stabilizers.len()
        )?;
        for (j, col) in self.horizontal_columns.iter().enumerate() {
            writeln!(f, "  H{}: {:?}", j + 1, col)?;
            if let Some(v) = self.vertical_columns.get(j) {
                writeln!(f, "  V{}: {:?}", j + 1, v)?;
            }
        }
        writeln!(f, "  logical X: {}", self.logical_x)?;
        write!(f, "  logical Z: {}", self.logical_z)
    }
}
