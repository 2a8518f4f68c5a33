use std::fmt;

use super::{StateError, MAX_QUBITS};

/// Split `M | M-bar` of the qubit register.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Bipartition {
    n_qubits: usize,
    left: Vec<usize>,
}

impl Bipartition {
    /// `left` must be a non-empty proper subset of `0..n_qubits`.
    pub fn new(n_qubits: usize, left: &[usize]) -> Result<Self, StateError> {
        if n_qubits > MAX_QUBITS {
            return Err(StateError::TooManyQubits(n_qubits));
        }
        let mut left = left.to_vec();
        left.sort_unstable();
        left.dedup();
        if let Some(&q) = left.iter().find(|&&q| q >= n_qubits) {
            return Err(StateError::InvalidQubit {
                index: q,
                n_qubits,
            });
        }
        if left.is_empty() || left.len() == n_qubits {
            return Err(StateError::InvalidBipartition(format!(
                "left side {left:?} must be a non-empty proper subset of {n_qubits} qubits"
            )));
        }
        Ok(Self { n_qubits, left })
    }

    /// One representative per unordered split: for three qubits `A|BC`, `B|CA`, `C|AB`.
    pub fn all(n_qubits: usize) -> Vec<Self> {
        let mut out = Vec::new();
        if n_qubits < 2 || n_qubits > MAX_QUBITS {
            return out;
        }
        // Enumerate by size so that singletons come first, in qubit order.
        for size in 1..=n_qubits / 2 {
            for mask in 1usize..(1 << n_qubits) - 1 {
                if mask.count_ones() as usize != size {
                    continue;
                }
                let left: Vec<usize> = (0..n_qubits).filter(|q| mask & (1 << q) != 0).collect();
                if 2 * size == n_qubits && !left.contains(&0) {
                    continue;
                }
                out.push(Self {
                    n_qubits,
                    left,
                });
            }
        }
        out
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn left(&self) -> &[usize] {
        &self.left
    }

    pub fn right(&self) -> Vec<usize> {
        (0..self.n_qubits).filter(|q| !self.left.contains(q)).collect()
    }

    pub fn complement(&self) -> Self {
        Self {
            n_qubits: self.n_qubits,
            left: self.right(),
        }
    }

    /// Basis-index bit mask of the left side (qubit `q` is bit `n - 1 - q`).
    pub fn left_mask(&self) -> usize {
        qubit_mask(self.n_qubits, &self.left)
    }

    /// Label such as `A|BC`.
    pub fn label(&self) -> String {
        let name = |q: usize| (b'A' + q as u8) as char;
        let left: String = self.left.iter().map(|&q| name(q)).collect();
        // Cyclic order of the right side starting after the last left qubit.
        let last = *self.left.last().expect("non-empty");
        let right: String = (1..self.n_qubits)
            .map(|k| (last + k) % self.n_qubits)
            .filter(|q| !self.left.contains(q))
            .map(name)
            .collect();
        format!("{left}|{right}")
    }
}

impl fmt::Display for Bipartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

pub(crate) fn qubit_mask(n_qubits: usize, qubits: &[usize]) -> usize {
    qubits.iter().fold(0, |m, &q| m | (1 << (n_qubits - 1 - q)))
}
