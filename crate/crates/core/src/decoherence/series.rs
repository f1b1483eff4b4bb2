use super::closed::zero_temperature_value;
use super::{check_tau, check_tol, BathSpec, GammaResult, Method};
use crate::error::{Error, Result};
use crate::quadrature::{integrate, QuadConfig};
use crate::specfun::euler_gamma;

/// Default cap on the number of explicitly summed image terms.
pub const SERIES_TERM_CAP: usize = 1_000_000;

const FIRST_BLOCK: usize = 32;

/// Image-series evaluation from the expansion `coth x = 1 + 2 sum_n e^(-2nx)`:
///
/// `Gamma_s(tau, T, omega_c) = Gamma_s(tau, 0, omega_c)
///     + 2 sum_{n>=1} (T / (T + n omega_c))^(s-1) Gamma_s(tau, 0, T omega_c / (T + n omega_c))`.
///
/// Terms are summed explicitly up to `N`; the remainder is the integral of the
/// term function from `N + 1/2` plus the midpoint correction `f'(N + 1/2) / 24`.
/// `N` doubles until that correction is below `tol` relative to the total.
pub fn gamma_series(tau: f64, bath: &BathSpec, tol: f64) -> Result<GammaResult> {
    gamma_series_capped(tau, bath, tol, SERIES_TERM_CAP)
}

/// [`gamma_series`] with an explicit cap on the number of summed terms.
pub fn gamma_series_capped(
    tau: f64,
    bath: &BathSpec,
    tol: f64,
    max_terms: usize,
) -> Result<GammaResult> {
    check_tau("gamma_series", tau)?;
    check_tol("gamma_series", tol)?;
    let s = bath.s();
    let gs = euler_gamma(s)?;
    let zero_t = zero_temperature_value(gs, s, bath.omega_c(), tau);
    if bath.is_zero_temperature() || tau == 0.0 {
        return Ok(GammaResult::new(
            zero_t,
            Method::Series,
            4.0 * f64::EPSILON * zero_t,
        ));
    }

    let t = bath.temperature();
    let a = t / bath.omega_c();
    let p = s - 1.0;
    // Term n as a smooth function of a continuous index x.
    let term = |x: f64| {
        let shifted = a + x;
        2.0 * (a / shifted).powf(p) * zero_temperature_value(gs, s, t / shifted, tau)
    };

    let mut partial = zero_t;
    let mut summed = 0usize;
    let mut block = FIRST_BLOCK;
    loop {
        let upto = block.min(max_terms);
        for n in summed + 1..=upto {
            partial += term(n as f64);
        }
        summed = upto;

        let x0 = summed as f64 + 0.5;
        let tail = tail_integral(&term, a, x0, tol)?;
        let step = 1e-3 * (a + x0);
        let slope = (term(x0 + step) - term(x0 - step)) / (2.0 * step);
        let correction = slope / 24.0;
        let total = partial + tail.value + correction;
        let err = correction.abs() + tail.abs_err;

        if err <= tol * total.abs() || total == 0.0 {
            return Ok(GammaResult::new(total, Method::Series, err));
        }
        if summed >= max_terms {
            return Err(Error::SeriesNonConvergence {
                terms: summed,
                tail_bound: err,
            });
        }
        block = block.saturating_mul(2);
    }
}

/// `int_{x0}^inf term(x) dx` through `a + x = (a + x0) / v^2`, which turns the
/// algebraic decay `(a + x)^(-(s+1))` into a bounded integrand on `v in (0, 1]`.
fn tail_integral<F: Fn(f64) -> f64>(
    term: &F,
    a: f64,
    x0: f64,
    tol: f64,
) -> Result<crate::quadrature::QuadResult> {
    let anchor = a + x0;
    let mapped = |v: f64| {
        if v <= 0.0 {
            return 0.0;
        }
        let x = anchor / (v * v) - a;
        let jac = 2.0 * anchor / (v * v * v);
        let value = term(x) * jac;
        if value.is_finite() {
            value
        } else {
            0.0
        }
    };
    let cfg = QuadConfig {
        abs_tol: 0.0,
        // Below ~1e-13 GK15 panels stall on rounding noise.
        rel_tol: (0.1 * tol).max(1e-13),
        max_intervals: 20_000,
    };
    integrate(mapped, &[0.0, 0.125, 0.25, 0.5, 1.0], cfg)
}
