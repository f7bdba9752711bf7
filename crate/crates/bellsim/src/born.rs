//! Closed-form quantum predictions for the two-spin experiment: transition
//! probabilities, singlet conditional and joint outcome laws, theoretical
//! correlations, and the CHSH combination.
//!
//! Sign convention: the singlet conditional law is
//! P(B=v | A=u) = (1 − u·v·cos(angle))/2, which yields E(AB) = −cos(angle) —
//! perfect anti-correlation at equal settings. All functions here follow it.

use crate::linalg::{hermitian_eigen, Complex64, ComplexMatrix, LinalgError, StateVector};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum BornError {
    #[error("not a density matrix: {detail}")]
    NotDensity { detail: String },
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

const TAU: f64 = 2.0 * std::f64::consts::PI;

/// The four coplanar measurement angles (radians, stored in [0, 2π)):
/// Alice chooses a or a′, Bob chooses b or b′.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AngleSettings {
    a: f64,
    a_prime: f64,
    b: f64,
    b_prime: f64,
}

impl AngleSettings {
    pub fn new(a: f64, a_prime: f64, b: f64, b_prime: f64) -> Self {
        for v in [a, a_prime, b, b_prime] {
            assert!(v.is_finite(), "angles must be finite");
        }
        AngleSettings {
            a: a.rem_euclid(TAU),
            a_prime: a_prime.rem_euclid(TAU),
            b: b.rem_euclid(TAU),
            b_prime: b_prime.rem_euclid(TAU),
        }
    }

    pub fn from_degrees(a: f64, a_prime: f64, b: f64, b_prime: f64) -> Self {
        let r = std::f64::consts::PI / 180.0;
        AngleSettings::new(a * r, a_prime * r, b * r, b_prime * r)
    }

    /// The settings attaining the quantum maximum 2√2:
    /// a = 0°, a′ = 90°, b = 225°, b′ = 135°.
    pub fn maximal_violation() -> Self {
        AngleSettings::from_degrees(0.0, 90.0, 225.0, 135.0)
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn a_prime(&self) -> f64 {
        self.a_prime
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn b_prime(&self) -> f64 {
        self.b_prime
    }

    pub fn as_degrees(&self) -> [f64; 4] {
        let r = 180.0 / std::f64::consts::PI;
        [self.a * r, self.a_prime * r, self.b * r, self.b_prime * r]
    }
}

/// Born rule between two question states: |⟨ψᵇ|ψᵃ⟩|².
pub fn transition_probability(
    psi_a: &StateVector,
    psi_b: &StateVector,
) -> Result<f64, LinalgError> {
    if psi_a.dim() != psi_b.dim() {
        return Err(LinalgError::DimensionMismatch { left: psi_a.dim(), right: psi_b.dim() });
    }
    Ok(psi_b.inner(psi_a).norm_sqr())
}

fn check_sign(u: i8) {
    assert!(u == 1 || u == -1, "outcomes are ±1, got {u}");
}

/// Singlet conditional outcome law: P(B=v | A=u) = (1 − u·v·cos(angle))/2.
pub fn conditional_outcome_probability(u: i8, v: i8, angle_ab: f64) -> f64 {
    check_sign(u);
    check_sign(v);
    (1.0 - f64::from(u) * f64::from(v) * angle_ab.cos()) / 2.0
}

/// Singlet joint outcome law with fair marginals:
/// P(A=u, B=v) = (1 − u·v·cos(angle))/4.
pub fn joint_outcome_probability(u: i8, v: i8, angle_ab: f64) -> f64 {
    check_sign(u);
    check_sign(v);
    (1.0 - f64::from(u) * f64::from(v) * angle_ab.cos()) / 4.0
}

/// Theoretical singlet correlation at a given setting-angle difference:
/// E(AB) = −cos(angle).
pub fn correlation_theory(angle_ab: f64) -> f64 {
    -angle_ab.cos()
}

/// Theoretical CHSH combination
/// E(a,b) + E(a′,b) + E(a,b′) − E(a′,b′) at the given settings.
pub fn chsh_theory(s: &AngleSettings) -> f64 {
    correlation_theory(s.a - s.b) + correlation_theory(s.a_prime - s.b)
        + correlation_theory(s.a - s.b_prime)
        - correlation_theory(s.a_prime - s.b_prime)
}

/// A pure state or a density matrix, for decision-probability queries.
#[derive(Debug, Clone)]
pub enum QuantumState {
    Pure(StateVector),
    Density(ComplexMatrix),
}

impl QuantumState {
    pub fn pure(state: StateVector) -> Self {
        QuantumState::Pure(state)
    }

    /// Validates positive semidefiniteness and unit trace within 1e-10.
    pub fn density(rho: ComplexMatrix) -> Result<Self, BornError> {
        let tr = rho.trace();
        if (tr.re - 1.0).abs() > 1e-10 || tr.im.abs() > 1e-10 {
            return Err(BornError::NotDensity { detail: format!("trace = {tr}") });
        }
        let sys = hermitian_eigen(&rho).map_err(|e| BornError::NotDensity {
            detail: format!("not Hermitian ({e})"),
        })?;
        if let Some(lam) = sys.eigenvalues.iter().find(|&&l| l < -1e-10) {
            return Err(BornError::NotDensity { detail: format!("negative eigenvalue {lam:.3e}") });
        }
        Ok(QuantumState::Density(rho))
    }

    pub fn dim(&self) -> usize {
        match self {
            QuantumState::Pure(s) => s.dim(),
            QuantumState::Density(r) => r.dim(),
        }
    }
}

/// Probability that the state selects the given prospect:
/// |⟨ψ|π⟩|² for a pure state, ⟨π|ρ|π⟩ for a density matrix.
pub fn prospect_probability(state: &QuantumState, prospect: &StateVector) -> Result<f64, BornError> {
    if state.dim() != prospect.dim() {
        return Err(LinalgError::DimensionMismatch { left: state.dim(), right: prospect.dim() }
            .into());
    }
    match state {
        QuantumState::Pure(psi) => Ok(psi.inner(prospect).norm_sqr()),
        QuantumState::Density(rho) => {
            let rp = rho.apply(prospect.amplitudes());
            let val: Complex64 =
                prospect.amplitudes().iter().zip(&rp).map(|(a, b)| a.conj() * b).sum();
            debug_assert!(val.im.abs() < 1e-12);
            Ok(val.re)
        }
    }
}
