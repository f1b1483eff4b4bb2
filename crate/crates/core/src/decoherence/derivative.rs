use super::quad::integrate_spectrum;
use super::{check_tau, check_tol, gamma, BathSpec};
use crate::error::{Error, Result};

/// Relative finite-difference step `h / omega_c`.
const REL_STEP: f64 = 1e-4;

/// `dGamma_s / d omega_c` at fixed `tau`, `T` and `s`.
///
/// Five-point central differences of the closed form at steps `h`, `h/2`, `h/4`
/// (`h = 1e-4 omega_c`) combined by two Richardson levels.
pub fn dgamma_domegac(tau: f64, bath: &BathSpec) -> Result<f64> {
    check_tau("dgamma_domegac", tau)?;
    if tau == 0.0 {
        return Ok(0.0);
    }
    let wc = bath.omega_c();
    let h = REL_STEP * wc;
    let eval =
        |offset: f64| -> Result<f64> { Ok(gamma(tau, &bath.with_omega_c(wc + offset)?)?.value) };

    let f_h = [eval(h)?, eval(-h)?];
    let f_2h = [eval(2.0 * h)?, eval(-2.0 * h)?];
    let f_half = [eval(0.5 * h)?, eval(-0.5 * h)?];
    let f_quarter = [eval(0.25 * h)?, eval(-0.25 * h)?];

    let stencil = |near: [f64; 2], far: [f64; 2], step: f64| {
        (8.0 * (near[0] - near[1]) - (far[0] - far[1])) / (12.0 * step)
    };
    let d1 = stencil(f_h, f_2h, h);
    let d2 = stencil(f_half, f_h, 0.5 * h);
    let d3 = stencil(f_quarter, f_half, 0.25 * h);

    if d1 == 0.0 && d2 == 0.0 && d3 == 0.0 {
        let centre = gamma(tau, bath)?.value;
        if centre != 0.0 {
            return Err(Error::StepCollapse { omega_c: wc });
        }
        return Ok(0.0);
    }

    let r1 = (16.0 * d2 - d1) / 15.0;
    let r2 = (16.0 * d3 - d2) / 15.0;
    Ok((64.0 * r2 - r1) / 63.0)
}

/// Reference route for [`dgamma_domegac`]: quadrature of the analytic cutoff
/// derivative of the integrand, `dJ_s/d omega_c = [(1 - s)/omega_c + w/omega_c^2] J_s`.
pub fn dgamma_domegac_quadrature(tau: f64, bath: &BathSpec, tol: f64) -> Result<f64> {
    check_tau("dgamma_domegac_quadrature", tau)?;
    check_tol("dgamma_domegac_quadrature", tol)?;
    if tau == 0.0 {
        return Ok(0.0);
    }
    let wc = bath.omega_c();
    let s = bath.s();
    let (value, _) = integrate_spectrum(tau, bath, tol, |w| (1.0 - s) / wc + w / (wc * wc))?;
    Ok(value)
}
