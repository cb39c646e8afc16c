//! Quantum-resource measures evaluated directly on density matrices.
//!
//! Everything here goes through the generic linear-algebra path (partial
//! traces, spectra, Pauli expectations). The probability-only formulas for
//! flavor states live in [`crate::closed_form`].

use num_complex::Complex64;

use crate::density::{shannon_entropy, von_neumann_entropy, DensityMatrix};
use crate::error::{Error, Result};
use crate::flavor_state::{pair_state, single_state, Pair, Qubit};
use crate::linalg::{hermitian_eigen, hermitian_eigenvalues, ComplexMatrix, Pauli};

/// Negative radicands or eigenvalues within this window are clamped to zero;
/// anything more negative means the input was not a valid state.
pub const CLAMP_TOL: f64 = 1e-12;

/// Simplex tolerance for probability triples.
pub const SIMPLEX_TOL: f64 = 1e-8;

fn clamp_nonnegative(quantity: &'static str, value: f64) -> Result<f64> {
    if value >= 0.0 {
        Ok(value)
    } else if value >= -CLAMP_TOL {
        Ok(0.0)
    } else {
        Err(Error::NegativeRadicand { quantity, value })
    }
}

fn expect_qubits(rho: &DensityMatrix, n: usize) -> Result<()> {
    if rho.qubits() != n {
        return Err(Error::QubitCount {
            expected: n,
            actual: rho.qubits(),
        });
    }
    Ok(())
}

/// `m_ij = Tr(ρ σ_i ⊗ σ_j)` for i, j ∈ {x, y, z}.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorrelationMatrix {
    m: [[f64; 3]; 3],
}

impl CorrelationMatrix {
    pub fn new(m: [[f64; 3]; 3]) -> Self {
        Self { m }
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.m[i][j]
    }

    pub fn as_array(&self) -> [[f64; 3]; 3] {
        self.m
    }

    /// `Mᵀ M`.
    pub fn gram(&self) -> [[f64; 3]; 3] {
        let mut g = [[0.0; 3]; 3];
        for (i, row) in g.iter_mut().enumerate() {
            for (j, g_ij) in row.iter_mut().enumerate() {
                *g_ij = (0..3).map(|k| self.m[k][i] * self.m[k][j]).sum();
            }
        }
        g
    }

    /// Eigenvalues of `Mᵀ M`, descending.
    pub fn gram_eigenvalues(&self) -> [f64; 3] {
        let flat: Vec<f64> = self.gram().iter().flatten().copied().collect();
        let g = ComplexMatrix::from_real(3, 3, &flat).expect("3x3");
        let ev = hermitian_eigenvalues(&g).expect("MᵀM is symmetric");
        [ev[0], ev[1], ev[2]]
    }
}

pub fn correlation_matrix(rho_pair: &DensityMatrix) -> Result<CorrelationMatrix> {
    expect_qubits(rho_pair, 2)?;
    let mut m = [[0.0; 3]; 3];
    for (i, si) in Pauli::AXES.iter().enumerate() {
        for (j, sj) in Pauli::AXES.iter().enumerate() {
            let op = si.matrix().kron(&sj.matrix());
            m[i][j] = (rho_pair.matrix() * &op).trace().re;
        }
    }
    Ok(CorrelationMatrix { m })
}

/// Maximal CHSH expectation `2√(τ₁ + τ₂)`, τ₁ ≥ τ₂ the two largest
/// eigenvalues of `MᵀM`. Lies in `[0, 2√2]`.
pub fn chsh_max(rho_pair: &DensityMatrix) -> Result<f64> {
    let tau = correlation_matrix(rho_pair)?.gram_eigenvalues();
    let sum = clamp_nonnegative("tau1 + tau2", tau[0] + tau[1])?;
    Ok(2.0 * sum.sqrt())
}

/// Probabilities `(P_a, P_b, P_c)` for a pair: the two flavors carried by the
/// pair's qubits, then the flavor of the traced-out qubit.
pub fn pair_probabilities(probs: [f64; 3], pair: Pair) -> (f64, f64, f64) {
    let (p, q) = pair.qubits();
    (
        probs[p.flavor().index()],
        probs[q.flavor().index()],
        probs[pair.complement().flavor().index()],
    )
}

pub fn check_simplex(probs: [f64; 3]) -> Result<()> {
    let sum: f64 = probs.iter().sum();
    if probs.iter().any(|&p| p.is_nan() || p < -SIMPLEX_TOL) || (sum - 1.0).abs() > SIMPLEX_TOL {
        return Err(Error::OffSimplex { probs });
    }
    Ok(())
}

/// Squared CHSH value of a flavor pair in closed form,
/// `2{4P_aP_b + max[4P_aP_b, (2P_c − 1)²]}`.
///
/// This is `2(τ₁ + τ₂)`, i.e. half of `chsh_max²`; it is the quantity that
/// is summed against the bound 12 when reproducing the published curves.
/// `probs` is ordered (e, μ, τ).
pub fn chsh_sq_paper(probs: [f64; 3], pair: Pair) -> Result<f64> {
    check_simplex(probs)?;
    let (pa, pb, pc) = pair_probabilities(probs, pair);
    let entangled = 4.0 * pa * pb;
    let polar = (2.0 * pc - 1.0).powi(2);
    Ok(2.0 * (entangled + entangled.max(polar)))
}

/// `D(ρ) = √(2 Tr ρ² − 1)` for a single qubit.
pub fn first_order_coherence(rho_single: &DensityMatrix) -> Result<f64> {
    expect_qubits(rho_single, 1)?;
    let purity: f64 = rho_single
        .matrix()
        .entries()
        .iter()
        .map(|z| z.norm_sqr())
        .sum();
    clamp_nonnegative("first-order coherence", 2.0 * purity - 1.0).map(f64::sqrt)
}

/// `√((D_A² + D_B² + D_C²) / 3)`.
pub fn composite_first_order_coherence(rho_abc: &DensityMatrix) -> Result<f64> {
    let mut sum = 0.0;
    for q in Qubit::ALL {
        sum += first_order_coherence(&single_state(rho_abc, q)?)?.powi(2);
    }
    Ok((sum / 3.0).sqrt())
}

/// `ρ̃ = (σ_y ⊗ σ_y) ρ* (σ_y ⊗ σ_y)`.
pub fn spin_flip(rho_pair: &DensityMatrix) -> Result<ComplexMatrix> {
    expect_qubits(rho_pair, 2)?;
    let yy = Pauli::Y.matrix().kron(&Pauli::Y.matrix());
    Ok(&(&yy * &rho_pair.matrix().conj()) * &yy)
}

/// Eigenvalues of `ρ ρ̃` in descending order, each clamped at zero.
///
/// `ρ ρ̃` is not Hermitian, but it is similar to `√ρ ρ̃ √ρ`, which is, so the
/// spectrum comes from the latter.
pub fn spin_flip_spectrum(rho_pair: &DensityMatrix) -> Result<[f64; 4]> {
    let flipped = spin_flip(rho_pair)?;
    let sqrt_rho = hermitian_eigen(rho_pair.matrix())?.apply(|x| x.max(0.0).sqrt());
    let h = (&(&sqrt_rho * &flipped) * &sqrt_rho).hermitian_part();
    let ev = hermitian_eigenvalues(&h)?;
    let mut out = [0.0; 4];
    for (o, &l) in out.iter_mut().zip(&ev) {
        *o = clamp_nonnegative("spin-flip eigenvalue", l)?;
    }
    Ok(out)
}

/// Spin-flip eigenvalues at or below this are rounding noise. Taking the
/// square root would turn ~1e-16 into ~1e-8, so they are zeroed first; the
/// price is that a genuine `λᵢ < 1e-7` reads as zero.
pub const SPIN_FLIP_FLOOR: f64 = 1e-14;

/// Wootters concurrence `max{0, √λ₁ − √λ₂ − √λ₃ − √λ₄}`.
pub fn concurrence(rho_pair: &DensityMatrix) -> Result<f64> {
    let l = spin_flip_spectrum(rho_pair)?.map(|x| if x <= SPIN_FLIP_FLOOR { 0.0 } else { x.sqrt() });
    Ok((l[0] - l[1] - l[2] - l[3]).max(0.0))
}

/// Intrinsic concurrence `√Tr(ρ ρ̃)`.
pub fn intrinsic_concurrence(rho_pair: &DensityMatrix) -> Result<f64> {
    let flipped = spin_flip(rho_pair)?;
    let tr = (rho_pair.matrix() * &flipped).trace();
    clamp_nonnegative("Tr(rho rho~)", tr.re).map(f64::sqrt)
}

/// `√(C_I²(AB) + C_I²(BC) + C_I²(AC))`.
pub fn composite_intrinsic_concurrence(rho_abc: &DensityMatrix) -> Result<f64> {
    let mut sum = 0.0;
    for pair in Pair::ALL {
        sum += intrinsic_concurrence(&pair_state(rho_abc, pair)?)?.powi(2);
    }
    Ok(sum.sqrt())
}

/// `S(diag ρ) − S(ρ)` in the computational basis, in bits.
pub fn relative_entropy_of_coherence(rho: &DensityMatrix) -> f64 {
    let diag_entropy = shannon_entropy(&rho.populations());
    (diag_entropy - von_neumann_entropy(rho)).max(0.0)
}

/// `Tr(ρ (σ_i ⊗ I))`-style local Bloch vector of the first qubit of a pair.
pub fn local_bloch(rho_pair: &DensityMatrix, first: bool) -> Result<[f64; 3]> {
    expect_qubits(rho_pair, 2)?;
    let id = ComplexMatrix::identity(2);
    let mut out = [0.0; 3];
    for (k, axis) in Pauli::AXES.iter().enumerate() {
        let op = if first {
            axis.matrix().kron(&id)
        } else {
            id.kron(&axis.matrix())
        };
        out[k] = (rho_pair.matrix() * &op).trace().re;
    }
    Ok(out)
}

/// Rebuilds ρ from its Hilbert-Schmidt coefficients,
/// `¼[I⊗I + a·σ⊗I + I⊗b·σ + Σ m_ij σ_i⊗σ_j]`.
pub fn from_hilbert_schmidt(a: [f64; 3], b: [f64; 3], m: &CorrelationMatrix) -> ComplexMatrix {
    let id = ComplexMatrix::identity(2);
    let mut acc = id.kron(&id);
    let re = |x: f64| Complex64::new(x, 0.0);
    for (k, axis) in Pauli::AXES.iter().enumerate() {
        acc = &acc + &axis.matrix().kron(&id).scale(re(a[k]));
        acc = &acc + &id.kron(&axis.matrix()).scale(re(b[k]));
        for (l, other) in Pauli::AXES.iter().enumerate() {
            acc = &acc + &axis.matrix().kron(&other.matrix()).scale(re(m.get(k, l)));
        }
    }
    acc.scale(re(0.25))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn pure(v: &[Complex64]) -> DensityMatrix {
        DensityMatrix::from_pure(v).unwrap()
    }

    /// `√P_e |10⟩ + √P_μ e^{iφ} |01⟩ + √P_τ |00⟩` traced over the third mode.
    fn flavor_pair(pe: f64, pmu: f64, ptau: f64, phase: f64) -> DensityMatrix {
        let mut m = ComplexMatrix::zeros(4, 4);
        let a_e = c(pe.sqrt(), 0.0);
        let a_mu = Complex64::from_polar(pmu.sqrt(), phase);
        m.set(0, 0, c(ptau, 0.0)).unwrap();
        m.set(1, 1, c(pmu, 0.0)).unwrap();
        m.set(2, 2, c(pe, 0.0)).unwrap();
        m.set(1, 2, a_mu * a_e.conj()).unwrap();
        m.set(2, 1, a_e * a_mu.conj()).unwrap();
        DensityMatrix::new(m).unwrap()
    }

    #[test]
    fn product_state_correlations() {
        // |10⟩
        let rho = pure(&[c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)]);
        let m = correlation_matrix(&rho).unwrap();
        assert_eq!(m.as_array(), [[0.0, 0.0, 0.0], [0.0, 0.0, 0.0], [0.0, 0.0, -1.0]]);
        assert!((chsh_max(&rho).unwrap() - 2.0).abs() < 1e-12);
        assert_eq!(concurrence(&rho).unwrap(), 0.0);
        assert_eq!(intrinsic_concurrence(&rho).unwrap(), 0.0);
    }

    #[test]
    fn maximally_entangled_pair() {
        let rho = flavor_pair(0.5, 0.5, 0.0, 0.0);
        assert!((chsh_max(&rho).unwrap() - 2.0 * 2.0_f64.sqrt()).abs() < 1e-12);
        assert!((concurrence(&rho).unwrap() - 1.0).abs() < 1e-12);
        assert!((intrinsic_concurrence(&rho).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn chsh_closed_form_values() {
        assert_eq!(chsh_sq_paper([1.0, 0.0, 0.0], Pair::AB).unwrap(), 2.0);
        assert_eq!(chsh_sq_paper([0.5, 0.5, 0.0], Pair::AB).unwrap(), 4.0);
        assert!(matches!(
            chsh_sq_paper([0.5, 0.6, 0.0], Pair::AB),
            Err(Error::OffSimplex { .. })
        ));
        assert!(chsh_sq_paper([1.0 + 5e-9, -5e-9, 0.0], Pair::BC).is_ok());
    }

    #[test]
    fn phases_rotate_correlations_but_not_gram_spectrum() {
        let (pe, pmu, ptau) = (0.3, 0.5, 0.2);
        let plain = correlation_matrix(&flavor_pair(pe, pmu, ptau, 0.0)).unwrap();
        let twisted = correlation_matrix(&flavor_pair(pe, pmu, ptau, 1.1)).unwrap();
        assert!(twisted.get(0, 1).abs() > 0.1);
        let a = plain.gram_eigenvalues();
        let b = twisted.gram_eigenvalues();
        for k in 0..3 {
            assert!((a[k] - b[k]).abs() < 1e-12);
        }
        let mut want = [4.0 * pe * pmu, 4.0 * pe * pmu, (2.0 * ptau - 1.0).powi(2)];
        want.sort_by(|x, y| y.total_cmp(x));
        for k in 0..3 {
            assert!((a[k] - want[k]).abs() < 1e-12);
        }
    }

    #[test]
    fn first_order_coherence_limits() {
        let pure_qubit = pure(&[c(0.6, 0.0), c(0.0, 0.8)]);
        assert!((first_order_coherence(&pure_qubit).unwrap() - 1.0).abs() < 1e-12);
        let mixed = DensityMatrix::new(ComplexMatrix::from_diagonal(&[0.5, 0.5])).unwrap();
        assert_eq!(first_order_coherence(&mixed).unwrap(), 0.0);
        let two = DensityMatrix::new(ComplexMatrix::from_diagonal(&[1.0, 0.0, 0.0, 0.0])).unwrap();
        assert!(matches!(first_order_coherence(&two), Err(Error::QubitCount { .. })));
    }

    #[test]
    fn intrinsic_dominates_for_mixed_states() {
        // Werner-like mixture: C_I ≥ C, strictly here.
        let s = 0.5_f64.sqrt();
        let bell = ComplexMatrix::outer(&[c(0.0, 0.0), c(s, 0.0), c(s, 0.0), c(0.0, 0.0)]);
        let noise = ComplexMatrix::identity(4).scale(c(0.25, 0.0));
        let w = 0.6;
        let m = &bell.scale(c(w, 0.0)) + &noise.scale(c(1.0 - w, 0.0));
        let rho = DensityMatrix::new(m).unwrap();
        let conc = concurrence(&rho).unwrap();
        let ci = intrinsic_concurrence(&rho).unwrap();
        // Werner state: C = max(0, (3w − 1)/2).
        assert!((conc - 0.4).abs() < 1e-12);
        assert!(ci > conc + 1e-3);
    }

    #[test]
    fn coherence_of_diagonal_state_is_zero() {
        let rho = DensityMatrix::new(ComplexMatrix::from_diagonal(&[0.2, 0.3, 0.5, 0.0])).unwrap();
        assert_eq!(relative_entropy_of_coherence(&rho), 0.0);
        let plus = pure(&[c(0.5_f64.sqrt(), 0.0), c(0.5_f64.sqrt(), 0.0)]);
        assert!((relative_entropy_of_coherence(&plus) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn hilbert_schmidt_round_trip() {
        let rho = flavor_pair(0.25, 0.6, 0.15, 0.7);
        let a = local_bloch(&rho, true).unwrap();
        let b = local_bloch(&rho, false).unwrap();
        let m = correlation_matrix(&rho).unwrap();
        let back = from_hilbert_schmidt(a, b, &m);
        assert!(back.max_abs_diff(rho.matrix()).unwrap() < 1e-14);
    }
}
