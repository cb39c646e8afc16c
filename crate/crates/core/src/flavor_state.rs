//! The occupation-number encoding of a single neutrino.
//!
//! Qubits A, B, C are the e, μ, τ modes in that order, so
//! `|ν_e⟩ = |100⟩`, `|ν_μ⟩ = |010⟩`, `|ν_τ⟩ = |001⟩` and the evolved state is
//! `a_e|100⟩ + a_μ|010⟩ + a_τ|001⟩`.

use std::fmt;

use num_complex::Complex64;

use crate::density::DensityMatrix;
use crate::error::{Error, Result};
use crate::oscillation::{Flavor, FlavorAmplitudes};

/// Normalization slack accepted when building the tripartite state.
pub const STATE_NORM_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Qubit {
    A,
    B,
    C,
}

impl Qubit {
    pub const ALL: [Qubit; 3] = [Qubit::A, Qubit::B, Qubit::C];

    pub fn index(self) -> usize {
        match self {
            Qubit::A => 0,
            Qubit::B => 1,
            Qubit::C => 2,
        }
    }

    /// The flavor mode this qubit counts.
    pub fn flavor(self) -> Flavor {
        match self {
            Qubit::A => Flavor::E,
            Qubit::B => Flavor::Mu,
            Qubit::C => Flavor::Tau,
        }
    }

    fn label(self) -> char {
        match self {
            Qubit::A => 'A',
            Qubit::B => 'B',
            Qubit::C => 'C',
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Pair {
    AB,
    AC,
    BC,
}

impl Pair {
    pub const ALL: [Pair; 3] = [Pair::AB, Pair::AC, Pair::BC];

    pub fn qubits(self) -> (Qubit, Qubit) {
        match self {
            Pair::AB => (Qubit::A, Qubit::B),
            Pair::AC => (Qubit::A, Qubit::C),
            Pair::BC => (Qubit::B, Qubit::C),
        }
    }

    /// The qubit traced out to obtain this pair.
    pub fn complement(self) -> Qubit {
        match self {
            Pair::AB => Qubit::C,
            Pair::AC => Qubit::B,
            Pair::BC => Qubit::A,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Pair::AB => "AB",
            Pair::AC => "AC",
            Pair::BC => "BC",
        }
    }
}

impl fmt::Display for Pair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Basis index of the single-excitation state with the given flavor occupied.
pub fn excitation_index(flavor: Flavor) -> usize {
    match flavor {
        Flavor::E => 0b100,
        Flavor::Mu => 0b010,
        Flavor::Tau => 0b001,
    }
}

/// `|ψ⟩⟨ψ|` for `|ψ⟩ = a_e|100⟩ + a_μ|010⟩ + a_τ|001⟩`.
pub fn tripartite_state(amps: &FlavorAmplitudes) -> Result<DensityMatrix> {
    let norm_sq = amps.norm_sqr();
    if (norm_sq - 1.0).abs() > STATE_NORM_TOL {
        return Err(Error::NotNormalized { norm_sq });
    }
    let mut psi = [Complex64::new(0.0, 0.0); 8];
    for flavor in Flavor::ALL {
        psi[excitation_index(flavor)] = amps.get(flavor);
    }
    DensityMatrix::from_pure(&psi)
}

fn check_tripartite(rho_abc: &DensityMatrix) -> Result<()> {
    if rho_abc.qubits() != 3 {
        return Err(Error::QubitCount {
            expected: 3,
            actual: rho_abc.qubits(),
        });
    }
    Ok(())
}

/// Two-qubit reduction, tracing out the complementary qubit.
pub fn pair_state(rho_abc: &DensityMatrix, pair: Pair) -> Result<DensityMatrix> {
    check_tripartite(rho_abc)?;
    let (p, q) = pair.qubits();
    rho_abc.reduce_to(&[p.label(), q.label()])
}

/// Single-qubit reduction.
pub fn single_state(rho_abc: &DensityMatrix, which: Qubit) -> Result<DensityMatrix> {
    check_tripartite(rho_abc)?;
    rho_abc.reduce_to(&[which.label()])
}
