use std::fmt;

use rand::Rng;

use crate::error::{invalid, PolarError, Result};
use crate::polar::BitVector;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    /// Pauli operator with phase-flip component `z` and bit-flip component
    /// `x`.
    pub fn from_bits(z: u8, x: u8) -> Pauli {
        match (z & 1, x & 1) {
            (0, 0) => Pauli::I,
            (0, 1) => Pauli::X,
            (1, 0) => Pauli::Z,
            _ => Pauli::Y,
        }
    }

    /// `(z, x)` components.
    pub fn bits(self) -> (u8, u8) {
        match self {
            Pauli::I => (0, 0),
            Pauli::X => (0, 1),
            Pauli::Z => (1, 0),
            Pauli::Y => (1, 1),
        }
    }
}

impl fmt::Display for Pauli {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        };
        write!(f, "{c}")
    }
}

/// An `N`-qubit Pauli error in binary form. A qubit with both components
/// set carries a `Y`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PauliErrorVector {
    pub x_mask: BitVector,
    pub z_mask: BitVector,
}

impl PauliErrorVector {
    pub fn new(x_mask: BitVector, z_mask: BitVector) -> Result<Self> {
        if x_mask.len() != z_mask.len() {
            return Err(PolarError::LengthMismatch {
                expected: x_mask.len(),
                got: z_mask.len(),
            });
        }
        Ok(PauliErrorVector { x_mask, z_mask })
    }

    pub fn identity(n: usize) -> Self {
        PauliErrorVector {
            x_mask: BitVector::zeros(n),
            z_mask: BitVector::zeros(n),
        }
    }

    pub fn from_paulis(ops: &[Pauli]) -> Self {
        let (z, x): (Vec<u8>, Vec<u8>) = ops.iter().map(|p| p.bits()).unzip();
        PauliErrorVector {
            x_mask: BitVector::from_bools(x.into_iter().map(|b| b == 1)),
            z_mask: BitVector::from_bools(z.into_iter().map(|b| b == 1)),
        }
    }

    pub fn len(&self) -> usize {
        self.x_mask.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x_mask.is_empty()
    }

    pub fn pauli(&self, i: usize) -> Pauli {
        Pauli::from_bits(self.z_mask[i], self.x_mask[i])
    }

    pub fn paulis(&self) -> Vec<Pauli> {
        (0..self.len()).map(|i| self.pauli(i)).collect()
    }

    /// Number of qubits hit by a non-identity operator.
    pub fn weight(&self) -> usize {
        (0..self.len())
            .filter(|&i| self.x_mask[i] | self.z_mask[i] == 1)
            .count()
    }
}

impl fmt::Display for PauliErrorVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len() {
            write!(f, "{}", self.pauli(i))?;
        }
        Ok(())
    }
}

/// Independent depolarizing noise: each qubit suffers `X`, `Y` or `Z` with
/// probability `p / 3` each.
pub fn sample_pauli<R: Rng + ?Sized>(n: usize, p: f64, rng: &mut R) -> Result<PauliErrorVector> {
    check_depolarizing(p)?;
    let mut x = vec![0u8; n];
    let mut z = vec![0u8; n];
    let third = p / 3.0;
    for i in 0..n {
        let r: f64 = rng.gen();
        if r < third {
            x[i] = 1;
        } else if r < 2.0 * third {
            x[i] = 1;
            z[i] = 1;
        } else if r < p {
            z[i] = 1;
        }
    }
    Ok(PauliErrorVector {
        x_mask: BitVector::from_bools(x.into_iter().map(|b| b == 1)),
        z_mask: BitVector::from_bools(z.into_iter().map(|b| b == 1)),
    })
}

pub(crate) fn check_depolarizing(p: f64) -> Result<()> {
    if !(0.0..=0.75).contains(&p) {
        return invalid(format!("depolarizing probability {p} outside [0, 3/4]"));
    }
    Ok(())
}
