//! Validated multi-qubit density matrices.
//!
//! Qubit 0 is the most significant bit of the computational-basis index, so
//! for three qubits labelled A, B, C the basis runs |000⟩, |001⟩, …, |111⟩
//! with A outermost.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigen, ComplexMatrix, HERMITIAN_TOL};

pub const TRACE_TOL: f64 = 1e-10;
pub const PSD_TOL: f64 = 1e-10;

/// Eigenvalues (and probabilities) below this are exact zeros in entropy sums.
pub const ENTROPY_ZERO: f64 = 1e-15;

#[derive(Debug, Clone)]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
    labels: Vec<char>,
    spectrum: Vec<f64>,
}

impl DensityMatrix {
    /// Validates `matrix` and labels its qubits A, B, C, … in order.
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        let qubits = qubit_count(&matrix)?;
        let labels = ('A'..).take(qubits).collect();
        Self::with_labels(matrix, labels)
    }

    pub fn with_labels(matrix: ComplexMatrix, labels: Vec<char>) -> Result<Self> {
        let qubits = qubit_count(&matrix)?;
        if labels.len() != qubits {
            return Err(Error::QubitCount {
                expected: qubits,
                actual: labels.len(),
            });
        }
        let deviation = matrix.hermitian_deviation().unwrap_or(f64::INFINITY);
        if deviation > HERMITIAN_TOL {
            return Err(Error::NotHermitian { deviation });
        }
        let trace = matrix.trace().re;
        if (trace - 1.0).abs() > TRACE_TOL {
            return Err(Error::TraceNotUnit { trace });
        }
        let spectrum = hermitian_eigen(&matrix)?.values;
        let min_eigenvalue = *spectrum.last().expect("nonempty spectrum");
        if min_eigenvalue < -PSD_TOL {
            return Err(Error::NotPositive { min_eigenvalue });
        }
        Ok(Self {
            matrix,
            labels,
            spectrum,
        })
    }

    /// `|ψ⟩⟨ψ|` for a normalized state vector of length `2^n`.
    pub fn from_pure(amplitudes: &[Complex64]) -> Result<Self> {
        Self::new(ComplexMatrix::outer(amplitudes))
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn qubits(&self) -> usize {
        self.labels.len()
    }

    /// Subsystem labels, e.g. `['A', 'C']` for a state reduced onto A and C.
    pub fn labels(&self) -> &[char] {
        &self.labels
    }

    /// Eigenvalues in descending order.
    pub fn spectrum(&self) -> &[f64] {
        &self.spectrum
    }

    /// `Tr(ρ²)`.
    pub fn purity(&self) -> f64 {
        self.spectrum.iter().map(|l| l * l).sum()
    }

    /// The diagonal of ρ in the computational basis, as real probabilities.
    pub fn populations(&self) -> Vec<f64> {
        self.matrix.diagonal().iter().map(|z| z.re).collect()
    }

    /// Reduced state on the qubits at positions `keep` (indices into
    /// [`labels`](Self::labels)). Kept qubits stay in their original order.
    pub fn partial_trace(&self, keep: &[usize]) -> Result<DensityMatrix> {
        let n = self.qubits();
        if keep.is_empty() {
            return Err(Error::EmptyKeep);
        }
        let mut kept = keep.to_vec();
        kept.sort_unstable();
        for w in kept.windows(2) {
            if w[0] == w[1] {
                return Err(Error::DuplicateQubit { index: w[0] });
            }
        }
        if let Some(&index) = kept.iter().find(|&&q| q >= n) {
            return Err(Error::QubitOutOfRange { index, qubits: n });
        }
        let traced: Vec<usize> = (0..n).filter(|q| !kept.contains(q)).collect();

        // Scatter a local index over a list of qubit positions.
        let spread = |local: usize, positions: &[usize]| -> usize {
            let m = positions.len();
            positions
                .iter()
                .enumerate()
                .filter(|&(k, _)| local >> (m - 1 - k) & 1 == 1)
                .map(|(_, &q)| 1 << (n - 1 - q))
                .sum()
        };

        let out_dim = 1 << kept.len();
        let env_dim = 1 << traced.len();
        let kept_offsets: Vec<usize> = (0..out_dim).map(|i| spread(i, &kept)).collect();
        let env_offsets: Vec<usize> = (0..env_dim).map(|t| spread(t, &traced)).collect();

        let mut out = ComplexMatrix::zeros(out_dim, out_dim);
        for (i, &ri) in kept_offsets.iter().enumerate() {
            for (j, &cj) in kept_offsets.iter().enumerate() {
                let sum: Complex64 = env_offsets
                    .iter()
                    .map(|&t| self.matrix[(ri | t, cj | t)])
                    .sum();
                out.set(i, j, sum)?;
            }
        }
        let labels = kept.iter().map(|&q| self.labels[q]).collect();
        DensityMatrix::with_labels(out, labels)
    }

    /// Keeps the qubits whose labels appear in `keep`.
    pub fn reduce_to(&self, keep: &[char]) -> Result<DensityMatrix> {
        let positions = keep
            .iter()
            .map(|l| {
                self.labels
                    .iter()
                    .position(|x| x == l)
                    .ok_or(Error::UnknownLabel { label: *l })
            })
            .collect::<Result<Vec<_>>>()?;
        self.partial_trace(&positions)
    }
}

fn qubit_count(m: &ComplexMatrix) -> Result<usize> {
    if !m.is_square() {
        return Err(Error::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    let dim = m.rows();
    if !dim.is_power_of_two() || dim < 2 {
        return Err(Error::NotPowerOfTwo { dim });
    }
    Ok(dim.trailing_zeros() as usize)
}

/// Shannon entropy in bits with `0·log 0 = 0`.
pub fn shannon_entropy(probs: &[f64]) -> f64 {
    let h: f64 = probs
        .iter()
        .filter(|&&p| p > ENTROPY_ZERO)
        .map(|&p| -p * p.log2())
        .sum();
    h.max(0.0)
}

/// `S(ρ) = -Σ λ log₂ λ` over the spectrum.
pub fn von_neumann_entropy(rho: &DensityMatrix) -> f64 {
    shannon_entropy(rho.spectrum())
}
