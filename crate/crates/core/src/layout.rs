use crate::error::{Error, Result};

/// Assignment of the 2n qubits of a composite state to the primary and
/// ancilla registers.
///
/// The standard layout puts the primary register on the high-order qubits and
/// the ancilla on the low-order qubits, so |x⟩|y⟩ lives at basis index
/// `x·2ⁿ + y`. That convention is used everywhere in this crate, including the
/// dense operator builders.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegisterLayout {
    n: usize,
    primary: Vec<usize>,
    ancilla: Vec<usize>,
}

impl RegisterLayout {
    pub fn standard(n: usize) -> Result<Self> {
        if n == 0 || 2 * n >= usize::BITS as usize {
            return Err(Error::InvalidParameter(format!("register size {n}")));
        }
        Ok(Self { n, primary: (n..2 * n).collect(), ancilla: (0..n).collect() })
    }

    /// Custom layout. `primary` and `ancilla` must partition `0..2n`.
    pub fn new(primary: Vec<usize>, ancilla: Vec<usize>) -> Result<Self> {
        let n = primary.len();
        if n == 0 || ancilla.len() != n {
            return Err(Error::InvalidQubits("registers must be nonempty and equal-sized".into()));
        }
        let mut all: Vec<usize> = primary.iter().chain(&ancilla).copied().collect();
        all.sort_unstable();
        if all != (0..2 * n).collect::<Vec<_>>() {
            return Err(Error::InvalidQubits("registers must partition 0..2n".into()));
        }
        Ok(Self { n, primary, ancilla })
    }

    /// Qubits per register.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn total_qubits(&self) -> usize {
        2 * self.n
    }

    pub fn primary(&self) -> &[usize] {
        &self.primary
    }

    pub fn ancilla(&self) -> &[usize] {
        &self.ancilla
    }

    /// Basis index of |x⟩|y⟩.
    pub fn composite_index(&self, x: usize, y: usize) -> usize {
        crate::state::register_offset(x, &self.primary) | crate::state::register_offset(y, &self.ancilla)
    }

    /// (x, y) register values of basis index `s`.
    pub fn split_index(&self, s: usize) -> (usize, usize) {
        (
            crate::state::register_value(s, &self.primary),
            crate::state::register_value(s, &self.ancilla),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn standard_convention() {
        let l = RegisterLayout::standard(3).unwrap();
        for x in 0..8 {
            for y in 0..8 {
                let s = l.composite_index(x, y);
                assert_eq!(s, x * 8 + y);
                assert_eq!(l.split_index(s), (x, y));
            }
        }
    }

    #[test]
    fn rejects_bad_partitions() {
        assert!(RegisterLayout::standard(0).is_err());
        assert!(RegisterLayout::new(vec![0, 1], vec![2]).is_err());
        assert!(RegisterLayout::new(vec![0, 1], vec![1, 2]).is_err());
        assert!(RegisterLayout::new(vec![1, 3], vec![0, 2]).is_ok());
    }
}
