use num_complex::Complex64;

use super::{check_tau, BathSpec, GammaResult, Method};
use crate::error::Result;
use crate::specfun::{euler_gamma, hurwitz_zeta, power_gap_over_q, thermal_zeta_sum};

/// `Gamma_s(tau, 0, omega) = Gamma(s) h(s - 1, omega tau)`, the zero-temperature
/// closed form rewritten so that `s = 1` needs no special case.
pub(crate) fn zero_temperature_value(gamma_of_s: f64, s: f64, omega: f64, tau: f64) -> f64 {
    gamma_of_s * power_gap_over_q(s - 1.0, omega * tau)
}

/// Decoherence function at `T = 0`:
/// `Gamma(s-1) {1 - cos[(s-1) atan(omega_c tau)] / (1 + omega_c^2 tau^2)^((s-1)/2)}`,
/// with the Ohmic limit `ln(1 + omega_c^2 tau^2) / 2` at `s = 1`.
///
/// The temperature stored in `bath` is ignored.
pub fn gamma_zero_temperature(tau: f64, bath: &BathSpec) -> Result<GammaResult> {
    check_tau("gamma_zero_temperature", tau)?;
    let gs = euler_gamma(bath.s())?;
    let value = zero_temperature_value(gs, bath.s(), bath.omega_c(), tau);
    Ok(GammaResult::new(
        value,
        Method::ZeroTemperature,
        4.0 * f64::EPSILON * value.abs(),
    ))
}

/// Finite-temperature closed form through the Hurwitz zeta function.
///
/// With `a = T / omega_c`, `b = T tau` and `p = s - 1`,
/// `Gamma_s = Gamma_s(tau, 0, omega_c) + Gamma(p) a^p [2 zeta(p, 1+a) - 2 Re zeta(p, 1+a+ib)]`.
/// The zeta difference is evaluated by [`thermal_zeta_sum`], which keeps full
/// relative accuracy at small `tau` and is regular at `s = 1` and `s = 2`.
/// Delegates to [`gamma_zero_temperature`] when `T = 0`.
pub fn gamma_closed_form(tau: f64, bath: &BathSpec) -> Result<GammaResult> {
    check_tau("gamma_closed_form", tau)?;
    if bath.is_zero_temperature() {
        return gamma_zero_temperature(tau, bath);
    }
    let s = bath.s();
    let p = s - 1.0;
    let a = bath.temperature() / bath.omega_c();
    let b = bath.temperature() * tau;

    let gs = euler_gamma(s)?;
    let zero_t = zero_temperature_value(gs, s, bath.omega_c(), tau);
    let sum = thermal_zeta_sum(p, a, b)?;
    let prefactor = 2.0 * gs * a.powf(p);
    let thermal = prefactor * sum.value;
    let value = zero_t + thermal;
    let err = prefactor.abs() * sum.err_estimate + 4.0 * f64::EPSILON * value.abs();
    Ok(GammaResult::new(value, Method::ClosedForm, err))
}

/// Coefficient `c2` of the short-time law `Gamma_s ~ c2 tau^2`,
///
/// `c2 = (1/2) omega_c^2 Gamma(s+1) [2 (T/omega_c)^(s+1) zeta(s+1, T/omega_c) - 1]`,
///
/// i.e. half the thermally weighted second moment `int J_s coth(w/2T) dw`. The
/// bracket is evaluated as `1 + 2 x^(s+1) zeta(s+1, 1+x)`, which is the same
/// quantity and stays finite as `T -> 0`.
pub fn gamma_short_time_coeff(bath: &BathSpec) -> Result<f64> {
    let s = bath.s();
    let wc = bath.omega_c();
    let x = bath.temperature() / wc;
    let thermal = if x == 0.0 {
        0.0
    } else {
        let z = hurwitz_zeta(s + 1.0, Complex64::new(1.0 + x, 0.0))?;
        2.0 * x.powf(s + 1.0) * z.re
    };
    Ok(0.5 * wc * wc * euler_gamma(s + 1.0)? * (1.0 + thermal))
}
