//! Phase-free Pauli operators on `n` qubits.
//!
//! An operator is stored as a pair of bit vectors: the X-part marks qubits
//! acted on by X or Y, the Z-part marks qubits acted on by Z or Y. Overall
//! phases are never tracked, so the product of two operators is simply the
//! XOR of their parts.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Single-qubit Pauli, up to phase.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub const ALL: [Pauli; 4] = [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z];

    pub fn from_bits(x: bool, z: bool) -> Self {
        match (x, z) {
            (false, false) => Pauli::I,
            (true, false) => Pauli::X,
            (true, true) => Pauli::Y,
            (false, true) => Pauli::Z,
        }
    }

    pub fn x_bit(self) -> bool {
        matches!(self, Pauli::X | Pauli::Y)
    }

    pub fn z_bit(self) -> bool {
        matches!(self, Pauli::Z | Pauli::Y)
    }

    pub fn mul(self, other: Pauli) -> Pauli {
        Pauli::from_bits(self.x_bit() ^ other.x_bit(), self.z_bit() ^ other.z_bit())
    }

    pub fn as_char(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }
}

impl TryFrom<char> for Pauli {
    type Error = Error;

    fn try_from(c: char) -> Result<Self> {
        match c {
            'I' | 'i' | '_' => Ok(Pauli::I),
            'X' | 'x' => Ok(Pauli::X),
            'Y' | 'y' => Ok(Pauli::Y),
            'Z' | 'z' => Ok(Pauli::Z),
            other => Err(Error::Parse(format!("not a Pauli symbol: {other:?}"))),
        }
    }
}

const WORD: usize = 64;

fn words_for(n: usize) -> usize {
    n.div_ceil(WORD)
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PauliOperator {
    n: usize,
    x: Vec<u64>,
    z: Vec<u64>,
}

impl PauliOperator {
    pub fn identity(n: usize) -> Self {
        Self {
            n,
            x: vec![0; words_for(n)],
            z: vec![0; words_for(n)],
        }
    }

    /// X on every listed qubit.
    pub fn x_on(n: usize, qubits: impl IntoIterator<Item = usize>) -> Self {
        let mut op = Self::identity(n);
        for q in qubits {
            op.flip_x(q);
        }
        op
    }

    /// Z on every listed qubit.
    pub fn z_on(n: usize, qubits: impl IntoIterator<Item = usize>) -> Self {
        let mut op = Self::identity(n);
        for q in qubits {
            op.flip_z(q);
        }
        op
    }

    pub fn from_bits(x_part: &[bool], z_part: &[bool]) -> Result<Self> {
        if x_part.len() != z_part.len() {
            return Err(Error::DimensionMismatch {
                expected: x_part.len(),
                found: z_part.len(),
            });
        }
        let mut op = Self::identity(x_part.len());
        for (q, (&xb, &zb)) in x_part.iter().zip(z_part).enumerate() {
            op.set(q, Pauli::from_bits(xb, zb));
        }
        Ok(op)
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn get(&self, q: usize) -> Pauli {
        assert!(q < self.n, "qubit {q} out of range for {} qubits", self.n);
        let (w, b) = (q / WORD, q % WORD);
        Pauli::from_bits((self.x[w] >> b) & 1 == 1, (self.z[w] >> b) & 1 == 1)
    }

    pub fn set(&mut self, q: usize, p: Pauli) {
        assert!(q < self.n, "qubit {q} out of range for {} qubits", self.n);
        let (w, b) = (q / WORD, q % WORD);
        let mask = 1u64 << b;
        self.x[w] = (self.x[w] & !mask) | ((p.x_bit() as u64) << b);
        self.z[w] = (self.z[w] & !mask) | ((p.z_bit() as u64) << b);
    }

    pub fn flip_x(&mut self, q: usize) {
        assert!(q < self.n, "qubit {q} out of range for {} qubits", self.n);
        self.x[q / WORD] ^= 1 << (q % WORD);
    }

    pub fn flip_z(&mut self, q: usize) {
        assert!(q < self.n, "qubit {q} out of range for {} qubits", self.n);
        self.z[q / WORD] ^= 1 << (q % WORD);
    }

    pub fn x_bit(&self, q: usize) -> bool {
        self.get(q).x_bit()
    }

    pub fn z_bit(&self, q: usize) -> bool {
        self.get(q).z_bit()
    }

    pub fn x_part(&self) -> Vec<bool> {
        (0..self.n).map(|q| self.x_bit(q)).collect()
    }

    pub fn z_part(&self) -> Vec<bool> {
        (0..self.n).map(|q| self.z_bit(q)).collect()
    }

    pub fn is_identity(&self) -> bool {
        self.x.iter().chain(&self.z).all(|&w| w == 0)
    }

    /// True when the operator acts only by I or X.
    pub fn is_x_type(&self) -> bool {
        self.z.iter().all(|&w| w == 0)
    }

    pub fn is_z_type(&self) -> bool {
        self.x.iter().all(|&w| w == 0)
    }

    /// The X-part as an operator (Y becomes X, Z becomes I).
    pub fn x_component(&self) -> Self {
        Self {
            n: self.n,
            x: self.x.clone(),
            z: vec![0; self.z.len()],
        }
    }

    pub fn z_component(&self) -> Self {
        Self {
            n: self.n,
            x: vec![0; self.x.len()],
            z: self.z.clone(),
        }
    }

    /// Product up to phase.
    pub fn multiply(&self, other: &Self) -> Result<Self> {
        let mut out = self.clone();
        out.mul_assign(other)?;
        Ok(out)
    }

    pub fn mul_assign(&mut self, other: &Self) -> Result<()> {
        self.check_size(other)?;
        for (a, b) in self.x.iter_mut().zip(&other.x) {
            *a ^= b;
        }
        for (a, b) in self.z.iter_mut().zip(&other.z) {
            *a ^= b;
        }
        Ok(())
    }

    /// Number of qubits acted on non-trivially.
    pub fn weight(&self) -> usize {
        self.x
            .iter()
            .zip(&self.z)
            .map(|(a, b)| (a | b).count_ones() as usize)
            .sum()
    }

    pub fn commutes(&self, other: &Self) -> Result<bool> {
        self.check_size(other)?;
        let mut parity = 0u32;
        for i in 0..self.x.len() {
            parity ^= (self.x[i] & other.z[i]).count_ones() & 1;
            parity ^= (self.z[i] & other.x[i]).count_ones() & 1;
        }
        Ok(parity == 0)
    }

    pub fn iter(&self) -> impl Iterator<Item = Pauli> + '_ {
        (0..self.n).map(|q| self.get(q))
    }

    /// Qubits acted on non-trivially, in increasing order.
    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.n).filter(|&q| self.get(q) != Pauli::I)
    }

    fn check_size(&self, other: &Self) -> Result<()> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: other.n,
            });
        }
        Ok(())
    }
}

impl fmt::Display for PauliOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for p in self.iter() {
            write!(f, "{}", p.as_char())?;
        }
        Ok(())
    }
}

impl fmt::Debug for PauliOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PauliOperator({self})")
    }
}

impl FromStr for PauliOperator {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let symbols = s
            .trim()
            .chars()
            .map(Pauli::try_from)
            .collect::<Result<Vec<_>>>()?;
        let mut op = Self::identity(symbols.len());
        for (q, p) in symbols.into_iter().enumerate() {
            op.set(q, p);
        }
        Ok(op)
    }
}
