//! Resource measures of the flavor state written directly in terms of the
//! transition probabilities `(P_e, P_μ, P_τ)`.
//!
//! These never touch a density matrix, which makes them an independent check
//! on the generic routines in [`crate::measures`]. The probability attached to
//! each qubit is the one of the flavor mode it counts (A ↔ e, B ↔ μ, C ↔ τ),
//! whatever the initial flavor.

use crate::density::ENTROPY_ZERO;
use crate::flavor_state::{Pair, Qubit};
use crate::measures::pair_probabilities;

fn xlog2x(x: f64) -> f64 {
    if x <= ENTROPY_ZERO {
        0.0
    } else {
        x * x.log2()
    }
}

fn sum_sq(p: [f64; 3]) -> f64 {
    p.iter().map(|x| x * x).sum()
}

fn sum_pairwise(p: [f64; 3]) -> f64 {
    p[0] * p[1] + p[0] * p[2] + p[1] * p[2]
}

/// Spectrum of `MᵀM` for a flavor pair, descending:
/// `{4P_aP_b, 4P_aP_b, (2P_c − 1)²}`.
pub fn gram_spectrum(probs: [f64; 3], pair: Pair) -> [f64; 3] {
    let (pa, pb, pc) = pair_probabilities(probs, pair);
    let mut s = [4.0 * pa * pb, 4.0 * pa * pb, (2.0 * pc - 1.0).powi(2)];
    s.sort_by(|x, y| y.total_cmp(x));
    s
}

/// Diagonal of the single-qubit state: `diag(1 − P_q, P_q)`.
pub fn single_populations(probs: [f64; 3], qubit: Qubit) -> [f64; 2] {
    let p = probs[qubit.flavor().index()];
    [1.0 - p, p]
}

/// `D(ρ_q) = √(2(ΣP² + 2P_xP_y) − 1)` with x, y the two other modes.
pub fn first_order_coherence(probs: [f64; 3], qubit: Qubit) -> f64 {
    let others: Vec<f64> = Qubit::ALL
        .iter()
        .filter(|&&q| q != qubit)
        .map(|q| probs[q.flavor().index()])
        .collect();
    (2.0 * (sum_sq(probs) + 2.0 * others[0] * others[1]) - 1.0)
        .max(0.0)
        .sqrt()
}

/// `D²(ρ_ABC) = 2ΣP² + (4/3)Σ_{i<j}P_iP_j − 1`.
pub fn composite_d_squared(probs: [f64; 3]) -> f64 {
    2.0 * sum_sq(probs) + 4.0 / 3.0 * sum_pairwise(probs) - 1.0
}

/// `C_I(ρ_ab) = √(4P_aP_b)`; also the concurrence of the pair.
pub fn intrinsic_concurrence(probs: [f64; 3], pair: Pair) -> f64 {
    let (pa, pb, _) = pair_probabilities(probs, pair);
    (4.0 * pa * pb).sqrt()
}

/// `C_I(ρ_ABC) = 2√(Σ_{i<j}P_iP_j)`.
pub fn composite_intrinsic_concurrence(probs: [f64; 3]) -> f64 {
    2.0 * sum_pairwise(probs).sqrt()
}

/// Relative entropy of coherence of a pair state,
/// `−P_a log₂(P_a/(P_a+P_b)) − P_b log₂(P_b/(P_a+P_b))`.
pub fn pair_coherence(probs: [f64; 3], pair: Pair) -> f64 {
    let (pa, pb, _) = pair_probabilities(probs, pair);
    -xlog2x(pa) - xlog2x(pb) + xlog2x(pa + pb)
}

/// Relative entropy of coherence of the tripartite pure state: `H(P_e, P_μ, P_τ)`.
pub fn tripartite_coherence(probs: [f64; 3]) -> f64 {
    -probs.iter().map(|&p| xlog2x(p)).sum::<f64>()
}

/// `Q = C(ρ_AC) + C(ρ_AB) − C(ρ_ABC)
///    = −P_e log₂P_e + (1−P_μ)log₂(1−P_μ) + (1−P_τ)log₂(1−P_τ)`.
pub fn coherence_q(probs: [f64; 3]) -> f64 {
    let [pe, pmu, ptau] = probs;
    -xlog2x(pe) + xlog2x(1.0 - pmu) + xlog2x(1.0 - ptau)
}

/// `Tr(ρ_ab²) = P_c² + (1 − P_c)²`, P_c the traced mode.
pub fn pair_purity(probs: [f64; 3], pair: Pair) -> f64 {
    let (_, _, pc) = pair_probabilities(probs, pair);
    pc * pc + (1.0 - pc) * (1.0 - pc)
}
