//! Vacuum three-flavor oscillations: PMNS matrix, amplitudes, probabilities.
//!
//! L/E is carried internally in km/GeV. The oscillation phase of mass state
//! `j` relative to state 1 is `2 · 1.27 · Δm²_j1[eV²] · L/E[km/GeV]`, so that
//! `sin²(1.27 Δm² L/E)` is the familiar two-flavor factor.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;

/// `Δm² L / (4E)` in units of eV²·km/GeV.
pub const PHASE_COEFF: f64 = 1.27;

/// Allowed mismatch between `dm32_sq` and `dm31_sq - dm21_sq`, in eV².
pub const SPLITTING_TOL: f64 = 1e-6;

pub const NORM_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Flavor {
    E,
    Mu,
    Tau,
}

impl Flavor {
    pub const ALL: [Flavor; 3] = [Flavor::E, Flavor::Mu, Flavor::Tau];

    /// Row of the PMNS matrix, and position in amplitude/probability triples.
    pub fn index(self) -> usize {
        match self {
            Flavor::E => 0,
            Flavor::Mu => 1,
            Flavor::Tau => 2,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Flavor::E => "e",
            Flavor::Mu => "mu",
            Flavor::Tau => "tau",
        }
    }
}

impl fmt::Display for Flavor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Flavor {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.trim().to_ascii_lowercase().as_str() {
            "e" | "electron" => Ok(Flavor::E),
            "mu" | "muon" => Ok(Flavor::Mu),
            "tau" => Ok(Flavor::Tau),
            other => Err(format!("unknown flavor {other:?} (expected e, mu or tau)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LoeUnit {
    KmPerGeV,
    KmPerMeV,
}

impl LoeUnit {
    /// Multiplier converting a value in this unit to km/GeV.
    pub fn to_km_per_gev(self) -> f64 {
        match self {
            LoeUnit::KmPerGeV => 1.0,
            LoeUnit::KmPerMeV => 1000.0,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            LoeUnit::KmPerGeV => "km_per_GeV",
            LoeUnit::KmPerMeV => "km_per_MeV",
        }
    }
}

impl fmt::Display for LoeUnit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for LoeUnit {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.trim().to_ascii_lowercase().replace('/', "_per_").as_str() {
            "km_per_gev" => Ok(LoeUnit::KmPerGeV),
            "km_per_mev" => Ok(LoeUnit::KmPerMeV),
            _ => Err(format!("unknown unit {s:?} (expected km_per_GeV or km_per_MeV)")),
        }
    }
}

/// A baseline-to-energy ratio with its unit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BaselinePoint {
    loe: f64,
    unit: LoeUnit,
}

impl BaselinePoint {
    pub fn new(loe: f64, unit: LoeUnit) -> Result<Self> {
        if !loe.is_finite() || loe < 0.0 {
            return Err(Error::InvalidParam {
                field: "loe",
                reason: format!("must be finite and nonnegative, got {loe}"),
            });
        }
        Ok(Self { loe, unit })
    }

    pub fn km_per_gev(loe: f64) -> Result<Self> {
        Self::new(loe, LoeUnit::KmPerGeV)
    }

    pub fn km_per_mev(loe: f64) -> Result<Self> {
        Self::new(loe, LoeUnit::KmPerMeV)
    }

    /// The value as given, in [`unit`](Self::unit).
    pub fn value(&self) -> f64 {
        self.loe
    }

    pub fn unit(&self) -> LoeUnit {
        self.unit
    }

    /// The canonical value in km/GeV.
    pub fn in_km_per_gev(&self) -> f64 {
        self.loe * self.unit.to_km_per_gev()
    }
}

/// Mixing angles and phases in degrees, mass-squared splittings in eV².
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OscillationParams {
    pub theta12: f64,
    pub theta23: f64,
    pub theta13: f64,
    pub delta_cp: f64,
    pub alpha1: f64,
    pub alpha2: f64,
    pub dm21_sq: f64,
    pub dm31_sq: f64,
    pub dm32_sq: f64,
}

/// Normal-ordering best fit with `δ_cp = 0` and vanishing Majorana phases.
pub fn default_params() -> OscillationParams {
    OscillationParams {
        theta12: 33.48,
        theta23: 42.3,
        theta13: 8.50,
        delta_cp: 0.0,
        alpha1: 0.0,
        alpha2: 0.0,
        dm21_sq: 7.50e-5,
        dm31_sq: 2.457e-3,
        dm32_sq: 2.382e-3,
    }
}

impl Default for OscillationParams {
    fn default() -> Self {
        default_params()
    }
}

impl OscillationParams {
    pub fn validate(&self) -> Result<()> {
        for (field, value) in [
            ("theta12", self.theta12),
            ("theta23", self.theta23),
            ("theta13", self.theta13),
        ] {
            if !(0.0..=90.0).contains(&value) {
                return Err(Error::InvalidParam {
                    field,
                    reason: format!("mixing angle must be in [0, 90] degrees, got {value}"),
                });
            }
        }
        if !(0.0..360.0).contains(&self.delta_cp) {
            return Err(Error::InvalidParam {
                field: "delta_cp",
                reason: format!("must be in [0, 360) degrees, got {}", self.delta_cp),
            });
        }
        for (field, value) in [
            ("alpha1", self.alpha1),
            ("alpha2", self.alpha2),
            ("dm21_sq", self.dm21_sq),
            ("dm31_sq", self.dm31_sq),
            ("dm32_sq", self.dm32_sq),
        ] {
            if !value.is_finite() {
                return Err(Error::InvalidParam {
                    field,
                    reason: format!("must be finite, got {value}"),
                });
            }
        }
        let implied = self.dm31_sq - self.dm21_sq;
        if (self.dm32_sq - implied).abs() > SPLITTING_TOL {
            return Err(Error::InvalidParam {
                field: "dm32_sq",
                reason: format!(
                    "{} eV² is inconsistent with dm31_sq - dm21_sq = {implied} eV²",
                    self.dm32_sq
                ),
            });
        }
        Ok(())
    }

    /// `Δm²_{j1}` for j = 1, 2, 3.
    fn splittings_from_first(&self) -> [f64; 3] {
        [0.0, self.dm21_sq, self.dm31_sq]
    }

    /// `Δm²_{jr}` for a mass-state pair with `j > r` (0-based).
    fn splitting(&self, j: usize, r: usize) -> f64 {
        match (j, r) {
            (1, 0) => self.dm21_sq,
            (2, 0) => self.dm31_sq,
            (2, 1) => self.dm32_sq,
            _ => unreachable!("splitting requires j > r"),
        }
    }
}

/// U = R₂₃ · R₁₃(δ) · R₁₂ · diag(e^{iα₁/2}, e^{iα₂/2}, 1).
pub fn pmns_matrix(params: &OscillationParams) -> ComplexMatrix {
    let (s12, c12) = params.theta12.to_radians().sin_cos();
    let (s23, c23) = params.theta23.to_radians().sin_cos();
    let (s13, c13) = params.theta13.to_radians().sin_cos();
    let delta = params.delta_cp.to_radians();
    let re = |x: f64| Complex64::new(x, 0.0);
    let zero = re(0.0);
    let one = re(1.0);

    let atmospheric = ComplexMatrix::new(
        3,
        3,
        vec![one, zero, zero, zero, re(c23), re(s23), zero, re(-s23), re(c23)],
    )
    .expect("3x3");
    let reactor = ComplexMatrix::new(
        3,
        3,
        vec![
            re(c13),
            zero,
            Complex64::from_polar(s13, -delta),
            zero,
            one,
            zero,
            -Complex64::from_polar(s13, delta),
            zero,
            re(c13),
        ],
    )
    .expect("3x3");
    let solar = ComplexMatrix::new(
        3,
        3,
        vec![re(c12), re(s12), zero, re(-s12), re(c12), zero, zero, zero, one],
    )
    .expect("3x3");
    let mut majorana = ComplexMatrix::identity(3);
    majorana
        .set(0, 0, Complex64::from_polar(1.0, params.alpha1.to_radians() / 2.0))
        .expect("in bounds");
    majorana
        .set(1, 1, Complex64::from_polar(1.0, params.alpha2.to_radians() / 2.0))
        .expect("in bounds");

    &(&(&atmospheric * &reactor) * &solar) * &majorana
}

/// Flavor amplitudes `a_{αβ}` at one L/E point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FlavorAmplitudes {
    initial: Flavor,
    amps: [Complex64; 3],
    point: BaselinePoint,
}

impl FlavorAmplitudes {
    /// Wraps externally computed amplitudes, checking normalization.
    pub fn new(initial: Flavor, amps: [Complex64; 3], point: BaselinePoint) -> Result<Self> {
        let norm_sq: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
        if (norm_sq - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized { norm_sq });
        }
        Ok(Self {
            initial,
            amps,
            point,
        })
    }

    /// Skips the normalization check; callers guarantee it to round-off.
    pub(crate) fn new_unchecked(initial: Flavor, amps: [Complex64; 3], point: BaselinePoint) -> Self {
        Self {
            initial,
            amps,
            point,
        }
    }

    pub fn initial_flavor(&self) -> Flavor {
        self.initial
    }

    pub fn point(&self) -> BaselinePoint {
        self.point
    }

    /// Amplitudes ordered (e, μ, τ).
    pub fn as_array(&self) -> [Complex64; 3] {
        self.amps
    }

    pub fn get(&self, flavor: Flavor) -> Complex64 {
        self.amps[flavor.index()]
    }

    pub fn a_e(&self) -> Complex64 {
        self.amps[0]
    }

    pub fn a_mu(&self) -> Complex64 {
        self.amps[1]
    }

    pub fn a_tau(&self) -> Complex64 {
        self.amps[2]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    /// `|a_β|²` ordered (e, μ, τ).
    pub fn probabilities(&self) -> [f64; 3] {
        self.amps.map(|a| a.norm_sqr())
    }
}

/// `a_β = Σ_j U*_{αj} exp(-i·2·1.27·Δm²_{j1}·L/E) U_{βj}`.
pub fn amplitudes(
    flavor: Flavor,
    point: BaselinePoint,
    params: &OscillationParams,
) -> Result<FlavorAmplitudes> {
    params.validate()?;
    let u = pmns_matrix(params);
    Ok(amplitudes_with(&u, flavor, point, params))
}

/// Same as [`amplitudes`] with a precomputed PMNS matrix and no validation.
pub(crate) fn amplitudes_with(
    u: &ComplexMatrix,
    flavor: Flavor,
    point: BaselinePoint,
    params: &OscillationParams,
) -> FlavorAmplitudes {
    let loe = point.in_km_per_gev();
    let alpha = flavor.index();
    let phases = params
        .splittings_from_first()
        .map(|dm| Complex64::from_polar(1.0, -2.0 * PHASE_COEFF * dm * loe));
    let mut amps = [Complex64::new(0.0, 0.0); 3];
    for (beta, amp) in amps.iter_mut().enumerate() {
        *amp = (0..3)
            .map(|j| u[(alpha, j)].conj() * phases[j] * u[(beta, j)])
            .sum();
    }
    FlavorAmplitudes::new_unchecked(flavor, amps, point)
}

/// `(P_e, P_μ, P_τ)` for a neutrino born as `flavor`.
pub fn probabilities(
    flavor: Flavor,
    point: BaselinePoint,
    params: &OscillationParams,
) -> Result<[f64; 3]> {
    amplitudes(flavor, point, params).map(|a| a.probabilities())
}

/// `P(α → β)` from the expanded sum over mass-state pairs, without going
/// through amplitudes:
///
/// `δ_αβ − 4 Σ_{j>r} Re(W) sin²(1.27 Δm²_jr L/E) + 2 Σ_{j>r} Im(W) sin(2.54 Δm²_jr L/E)`
/// with `W = U*_{αj} U_{βj} U_{αr} U*_{βr}`.
pub fn probability_direct(
    from: Flavor,
    to: Flavor,
    point: BaselinePoint,
    params: &OscillationParams,
) -> Result<f64> {
    params.validate()?;
    let u = pmns_matrix(params);
    let loe = point.in_km_per_gev();
    let (a, b) = (from.index(), to.index());
    let mut p = if a == b { 1.0 } else { 0.0 };
    for j in 0..3 {
        for r in 0..j {
            let w = u[(a, j)].conj() * u[(b, j)] * u[(a, r)] * u[(b, r)].conj();
            let x = PHASE_COEFF * params.splitting(j, r) * loe;
            p += -4.0 * w.re * x.sin().powi(2) + 2.0 * w.im * (2.0 * x).sin();
        }
    }
    Ok(p)
}
