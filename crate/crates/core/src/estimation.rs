//! Estimation of the cutoff frequency from the probe: quantum Fisher information,
//! the Fisher information of the `sigma_x` measurement, the quantum
//! signal-to-noise ratio and the Cramer-Rao variance bound.

use serde::Serialize;

use crate::decoherence::{dgamma_domegac, BathSpec};
use crate::error::{Error, Result};
use crate::probe::{evolve, measurement_probabilities, ProbeState, EIGENVECTORS};

/// `(dGamma)^2 / (e^(2 Gamma) - 1)`, the QFI written through the decoherence exponent.
///
/// Evaluated as `(dGamma)^2 e^(-2 Gamma) / (1 - e^(-2 Gamma))` with the denominator
/// from `expm1`: exact to rounding at small `Gamma` (so no separate series branch)
/// and free of overflow at large `Gamma`.
pub fn qfi_from_gamma(gamma: f64, dgamma: f64) -> f64 {
    if dgamma == 0.0 {
        return 0.0;
    }
    // e^(-2 Gamma) alone can be subnormal while the product is not.
    (2.0 * (dgamma.abs().ln() - gamma)).exp() / -(-2.0 * gamma).exp_m1()
}

/// Fisher information of a two-outcome distribution `{p, 1 - p}` with `dp` the
/// parameter derivative of `p`. `q = 1 - p` is passed separately so callers can
/// supply an accurate value when `p` is close to 1.
pub fn binary_fisher(p: f64, q: f64, dp: f64) -> f64 {
    if dp == 0.0 {
        return 0.0;
    }
    dp * dp / (p * q)
}

/// QFI of the probe for `omega_c`, from the closed expression in `Gamma` and its
/// cutoff derivative.
pub fn qfi_closed(tau: f64, bath: &BathSpec) -> Result<f64> {
    if tau == 0.0 {
        return Ok(0.0);
    }
    let state = evolve(tau, bath)?;
    Ok(qfi_from_gamma(state.gamma, dgamma_domegac(tau, bath)?))
}

/// QFI from the spectral decomposition of `rho`,
///
/// `sum_n (d lambda_n)^2 / lambda_n + 2 sum_{n != m} (lambda_n - lambda_m)^2 / (lambda_n + lambda_m) |<phi_m|d phi_n>|^2`,
///
/// with eigenvalue derivatives `<phi_n|d rho|phi_n>` and eigenvector derivatives
/// `<phi_m|d rho|phi_n> / (lambda_n - lambda_m)` taken from `d rho` in the
/// computational basis. The second sum vanishes here because the eigenbasis does
/// not depend on `omega_c`; it is still evaluated rather than assumed.
pub fn qfi_general(tau: f64, bath: &BathSpec) -> Result<f64> {
    if tau == 0.0 {
        return Ok(0.0);
    }
    let state = evolve(tau, bath)?;
    let dgamma = dgamma_domegac(tau, bath)?;
    Ok(qfi_spectral(&state, dgamma))
}

pub(crate) fn qfi_spectral(state: &ProbeState, dgamma: f64) -> f64 {
    let lambda = state.eigenvalues();
    // d rho = (dv / 2) sigma_x with dv = -v dGamma.
    let off = -0.5 * state.visibility * dgamma;
    let drho = [[0.0, off], [off, 0.0]];
    let sandwich = |m: usize, n: usize| {
        let (bra, ket) = (EIGENVECTORS[m], EIGENVECTORS[n]);
        let mut acc = 0.0;
        for i in 0..2 {
            for j in 0..2 {
                acc += bra[i] * drho[i][j] * ket[j];
            }
        }
        acc
    };

    let mut classical = 0.0;
    for (n, &l) in lambda.iter().enumerate() {
        let dl = sandwich(n, n);
        if dl != 0.0 {
            classical += dl * dl / l;
        }
    }
    // (lambda_n - lambda_m)^2 |<phi_m|d phi_n>|^2 with the eigenvector derivative
    // inserted is |<phi_m|d rho|phi_n>|^2, which also stays finite when the two
    // eigenvalues merge at full dephasing.
    let mut coherent = 0.0;
    for n in 0..2 {
        for m in 0..2 {
            if n != m {
                let coupling = sandwich(m, n);
                coherent += coupling * coupling / (lambda[n] + lambda[m]);
            }
        }
    }
    classical + 2.0 * coherent
}

/// Fisher information of the projective `sigma_x` measurement.
pub fn fi_sigma1(tau: f64, bath: &BathSpec) -> Result<f64> {
    if tau == 0.0 {
        return Ok(0.0);
    }
    let state = evolve(tau, bath)?;
    let dgamma = dgamma_domegac(tau, bath)?;
    Ok(sigma1_fisher(&state, dgamma))
}

pub(crate) fn sigma1_fisher(state: &ProbeState, dgamma: f64) -> f64 {
    let (p_plus, p_minus) = measurement_probabilities(state);
    // p_plus = (1 + e^-Gamma) / 2
    let dp = -0.5 * state.visibility * dgamma;
    binary_fisher(p_plus, p_minus, dp)
}

/// Quantum signal-to-noise ratio `omega_c^2 H`.
pub fn qsnr(tau: f64, bath: &BathSpec) -> Result<f64> {
    let wc = bath.omega_c();
    Ok(wc * wc * qfi_closed(tau, bath)?)
}

/// Cramer-Rao bound `1 / (m H)` on the variance of an unbiased estimator of
/// `omega_c` after `m` repetitions.
pub fn cr_bound(qfi: f64, m: u64) -> Result<f64> {
    if m == 0 {
        return Err(Error::domain(
            "cr_bound",
            "number of measurements must be >= 1",
        ));
    }
    if !(qfi.is_finite() && qfi >= 0.0) {
        return Err(Error::domain(
            "cr_bound",
            format!("qfi = {qfi} must be finite and >= 0"),
        ));
    }
    if qfi == 0.0 {
        return Err(Error::UnboundedVariance);
    }
    Ok(1.0 / (m as f64 * qfi))
}

/// All metrics at one interaction time. The signal-to-noise ratio of an actual
/// estimator is bounded above by `qsnr`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EstimationMetrics {
    pub qfi: f64,
    pub fi_optimal: f64,
    pub qsnr: f64,
    /// `None` when the QFI vanishes and no finite bound exists.
    pub cr_variance_bound: Option<f64>,
    pub n_measurements: u64,
}

pub fn metrics(tau: f64, bath: &BathSpec, n_measurements: u64) -> Result<EstimationMetrics> {
    if n_measurements == 0 {
        return Err(Error::domain(
            "metrics",
            "number of measurements must be >= 1",
        ));
    }
    let (qfi, fi_optimal) = if tau == 0.0 {
        (0.0, 0.0)
    } else {
        let state = evolve(tau, bath)?;
        let dgamma = dgamma_domegac(tau, bath)?;
        (
            qfi_from_gamma(state.gamma, dgamma),
            sigma1_fisher(&state, dgamma),
        )
    };
    let cr_variance_bound = match cr_bound(qfi, n_measurements) {
        Ok(v) => Some(v),
        Err(Error::UnboundedVariance) => None,
        Err(e) => return Err(e),
    };
    let wc = bath.omega_c();
    Ok(EstimationMetrics {
        qfi,
        fi_optimal,
        qsnr: wc * wc * qfi,
        cr_variance_bound,
        n_measurements,
    })
}
