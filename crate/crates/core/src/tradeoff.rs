//! Per-point evaluation of the three trade-off relations:
//!
//! - CHSH monogamy: `Σ_pairs ⟨CHSH⟩² ≤ 12`
//! - coherence/entanglement identity: `D²(ρ_ABC) + (2/3) C_I²(ρ_ABC) = 1`
//! - coherence super-additivity: `C(ρ_AC) + C(ρ_AB) − C(ρ_ABC) ≤ 0`

use crate::closed_form;
use crate::density::DensityMatrix;
use crate::error::{Error, Result};
use crate::flavor_state::{excitation_index, pair_state, single_state, tripartite_state, Pair, Qubit};
use crate::linalg::ComplexMatrix;
use crate::measures::{
    chsh_max, chsh_sq_paper, first_order_coherence, intrinsic_concurrence,
    relative_entropy_of_coherence,
};
use crate::oscillation::{amplitudes_with, pmns_matrix, BaselinePoint, Flavor, OscillationParams};

/// Slack on every inequality and on the identity residual.
pub const BOUND_TOL: f64 = 1e-9;

/// Upper bound on the pairwise sum of squared CHSH values.
pub const CHSH_SUM_BOUND: f64 = 12.0;

/// The identity is only claimed for pure states.
pub const PURITY_TOL: f64 = 1e-8;

/// Probabilities `(P_e, P_μ, P_τ)` read off the single-excitation diagonal.
pub fn flavor_populations(rho_abc: &DensityMatrix) -> Result<[f64; 3]> {
    if rho_abc.qubits() != 3 {
        return Err(Error::QubitCount {
            expected: 3,
            actual: rho_abc.qubits(),
        });
    }
    let diag = rho_abc.populations();
    Ok(Flavor::ALL.map(|f| diag[excitation_index(f)]))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChshTradeoff {
    /// Closed-form `2(τ₁ + τ₂)` per pair, ordered AB, AC, BC.
    pub paper: [f64; 3],
    pub paper_sum: f64,
    /// `chsh_max²` per pair, ordered AB, AC, BC.
    pub horodecki_sq: [f64; 3],
    pub horodecki_sum: f64,
    pub bound_ok: bool,
}

fn chsh_from_pairs(probs: [f64; 3], pairs: &[DensityMatrix; 3]) -> Result<ChshTradeoff> {
    let mut paper = [0.0; 3];
    let mut horodecki_sq = [0.0; 3];
    for (k, pair) in Pair::ALL.iter().enumerate() {
        paper[k] = chsh_sq_paper(probs, *pair)?;
        horodecki_sq[k] = chsh_max(&pairs[k])?.powi(2);
    }
    let paper_sum = paper.iter().sum();
    let horodecki_sum = horodecki_sq.iter().sum();
    Ok(ChshTradeoff {
        paper,
        paper_sum,
        horodecki_sq,
        horodecki_sum,
        bound_ok: paper_sum <= CHSH_SUM_BOUND + BOUND_TOL
            && horodecki_sum <= CHSH_SUM_BOUND + BOUND_TOL,
    })
}

fn pairs_of(rho_abc: &DensityMatrix) -> Result<[DensityMatrix; 3]> {
    Ok([
        pair_state(rho_abc, Pair::AB)?,
        pair_state(rho_abc, Pair::AC)?,
        pair_state(rho_abc, Pair::BC)?,
    ])
}

pub fn chsh_tradeoff(rho_abc: &DensityMatrix) -> Result<ChshTradeoff> {
    let probs = flavor_populations(rho_abc)?;
    chsh_from_pairs(probs, &pairs_of(rho_abc)?)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IdentityCheck {
    pub d_squared: f64,
    pub two_thirds_ci_squared: f64,
    /// `d_squared + two_thirds_ci_squared − 1`.
    pub residual: f64,
}

fn identity_from_parts(
    rho_abc: &DensityMatrix,
    pairs: &[DensityMatrix; 3],
) -> Result<IdentityCheck> {
    let purity = rho_abc.purity();
    if purity < 1.0 - PURITY_TOL {
        return Err(Error::NotPure { purity });
    }
    let mut d_sum = 0.0;
    for q in Qubit::ALL {
        d_sum += first_order_coherence(&single_state(rho_abc, q)?)?.powi(2);
    }
    let d_squared = d_sum / 3.0;
    let mut ci_squared = 0.0;
    for pair in pairs {
        ci_squared += intrinsic_concurrence(pair)?.powi(2);
    }
    let two_thirds_ci_squared = 2.0 / 3.0 * ci_squared;
    Ok(IdentityCheck {
        d_squared,
        two_thirds_ci_squared,
        residual: d_squared + two_thirds_ci_squared - 1.0,
    })
}

/// Rejects mixed states (`Tr ρ² < 1 − 1e-8`).
pub fn coherence_concurrence_identity(rho_abc: &DensityMatrix) -> Result<IdentityCheck> {
    identity_from_parts(rho_abc, &pairs_of(rho_abc)?)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoherenceSplit {
    pub ab: f64,
    pub ac: f64,
    pub abc: f64,
    /// `ac + ab − abc`.
    pub q: f64,
}

fn additivity_from_parts(rho_abc: &DensityMatrix, pairs: &[DensityMatrix; 3]) -> CoherenceSplit {
    let ab = relative_entropy_of_coherence(&pairs[0]);
    let ac = relative_entropy_of_coherence(&pairs[1]);
    let abc = relative_entropy_of_coherence(rho_abc);
    CoherenceSplit {
        ab,
        ac,
        abc,
        q: ac + ab - abc,
    }
}

/// `Q = C(ρ_AC) + C(ρ_AB) − C(ρ_ABC)`.
pub fn coherence_additivity(rho_abc: &DensityMatrix) -> Result<f64> {
    Ok(additivity_from_parts(rho_abc, &pairs_of(rho_abc)?).q)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BoundsOk {
    pub chsh: bool,
    pub identity: bool,
    pub coherence: bool,
}

impl BoundsOk {
    pub fn all(&self) -> bool {
        self.chsh && self.identity && self.coherence
    }
}

/// Every measure and trade-off residual at one L/E point.
#[derive(Debug, Clone, PartialEq)]
pub struct TradeoffReport {
    pub point: BaselinePoint,
    pub flavor: Flavor,
    /// `(P_e, P_μ, P_τ)`.
    pub probabilities: [f64; 3],
    pub chsh: ChshTradeoff,
    pub d_squared: f64,
    pub two_thirds_ci_squared: f64,
    pub identity_residual: f64,
    pub coherence: CoherenceSplit,
    pub bounds_ok: BoundsOk,
}

impl TradeoffReport {
    pub fn coherence_q(&self) -> f64 {
        self.coherence.q
    }
}

/// Evaluates a point with a precomputed PMNS matrix; parameters must already
/// be validated.
pub(crate) fn evaluate_with(
    u: &ComplexMatrix,
    flavor: Flavor,
    point: BaselinePoint,
    params: &OscillationParams,
) -> Result<TradeoffReport> {
    let amps = amplitudes_with(u, flavor, point, params);
    let rho_abc = tripartite_state(&amps)?;
    let pairs = pairs_of(&rho_abc)?;
    let probabilities = amps.probabilities();

    let chsh = chsh_from_pairs(probabilities, &pairs)?;
    let identity = identity_from_parts(&rho_abc, &pairs)?;
    let coherence = additivity_from_parts(&rho_abc, &pairs);

    let bounds_ok = BoundsOk {
        chsh: chsh.bound_ok,
        identity: identity.residual.abs() <= BOUND_TOL,
        coherence: coherence.q <= BOUND_TOL,
    };
    Ok(TradeoffReport {
        point,
        flavor,
        probabilities,
        chsh,
        d_squared: identity.d_squared,
        two_thirds_ci_squared: identity.two_thirds_ci_squared,
        identity_residual: identity.residual,
        coherence,
        bounds_ok,
    })
}

pub fn evaluate_point(
    flavor: Flavor,
    point: BaselinePoint,
    params: &OscillationParams,
) -> Result<TradeoffReport> {
    params.validate()?;
    evaluate_with(&pmns_matrix(params), flavor, point, params)
}

/// Probability-only counterpart of [`TradeoffReport`]'s generic-path columns.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClosedFormReport {
    pub horodecki_sq: [f64; 3],
    pub d_squared: f64,
    pub two_thirds_ci_squared: f64,
    pub coherence_ab: f64,
    pub coherence_ac: f64,
    pub coherence_abc: f64,
    pub q: f64,
}

pub fn closed_form_report(probs: [f64; 3]) -> ClosedFormReport {
    let horodecki_sq = Pair::ALL.map(|pair| {
        let s = closed_form::gram_spectrum(probs, pair);
        4.0 * (s[0] + s[1])
    });
    let ci = closed_form::composite_intrinsic_concurrence(probs);
    ClosedFormReport {
        horodecki_sq,
        d_squared: closed_form::composite_d_squared(probs),
        two_thirds_ci_squared: 2.0 / 3.0 * ci * ci,
        coherence_ab: closed_form::pair_coherence(probs, Pair::AB),
        coherence_ac: closed_form::pair_coherence(probs, Pair::AC),
        coherence_abc: closed_form::tripartite_coherence(probs),
        q: closed_form::coherence_q(probs),
    }
}
