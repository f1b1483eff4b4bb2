//! The dephased qubit probe prepared in `|+>`:
//! `rho(tau) = (I + e^(-Gamma) sigma_x) / 2`.

use serde::Serialize;

use crate::decoherence::{gamma, BathSpec};
use crate::error::{Error, Result};

/// Probe state after interaction time `tau`, stored through its decoherence exponent.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ProbeState {
    pub visibility: f64,
    pub gamma: f64,
}

/// Eigenbasis of `sigma_x` in the computational basis, `|+>` then `|->`.
pub const EIGENVECTORS: [[f64; 2]; 2] = [
    [
        std::f64::consts::FRAC_1_SQRT_2,
        std::f64::consts::FRAC_1_SQRT_2,
    ],
    [
        std::f64::consts::FRAC_1_SQRT_2,
        -std::f64::consts::FRAC_1_SQRT_2,
    ],
];

impl ProbeState {
    pub fn from_gamma(gamma: f64) -> Result<Self> {
        if gamma.is_nan() || gamma < 0.0 {
            return Err(Error::domain(
                "ProbeState::from_gamma",
                format!("gamma = {gamma} must be >= 0"),
            ));
        }
        Ok(ProbeState {
            visibility: (-gamma).exp(),
            gamma,
        })
    }

    /// Eigenvalues `(1 + v)/2` and `(1 - v)/2`. The smaller one is formed from
    /// `expm1` so it keeps full relative accuracy when `gamma` is tiny.
    pub fn eigenvalues(&self) -> [f64; 2] {
        [0.5 * (1.0 + self.visibility), -0.5 * (-self.gamma).exp_m1()]
    }

    pub fn purity(&self) -> f64 {
        0.5 * (1.0 + self.visibility * self.visibility)
    }

    /// The 2x2 density matrix in the computational basis.
    pub fn density_matrix(&self) -> [[f64; 2]; 2] {
        let c = 0.5 * self.visibility;
        [[0.5, c], [c, 0.5]]
    }
}

/// Reduced probe state after interaction time `tau` with the bath.
pub fn evolve(tau: f64, bath: &BathSpec) -> Result<ProbeState> {
    ProbeState::from_gamma(gamma(tau, bath)?.value)
}

/// Outcome probabilities `(p_plus, p_minus)` of a `sigma_x` measurement.
pub fn measurement_probabilities(state: &ProbeState) -> (f64, f64) {
    let [plus, minus] = state.eigenvalues();
    (plus, minus)
}
