use super::{gamma, BathSpec};
use crate::error::{Error, Result};
use crate::fit::{geometric_grid, power_law};

/// Minimum width of the fitting window, in decades of `tau`.
pub const MIN_SLOPE_DECADES: f64 = 2.0;

const SLOPE_POINTS: usize = 41;

/// Least-squares slope of `ln Gamma` against `ln tau` over a geometric grid in
/// `tau_window`. The window should sit well past `max(1/omega_c, 1/T)`.
pub fn asymptotic_slope(bath: &BathSpec, tau_window: [f64; 2]) -> Result<f64> {
    let [lo, hi] = tau_window;
    let valid = lo.is_finite() && hi.is_finite() && lo > 0.0 && hi > lo;
    if !valid || (hi / lo).log10() < MIN_SLOPE_DECADES {
        return Err(Error::DegenerateWindow {
            lo,
            hi,
            required: MIN_SLOPE_DECADES,
        });
    }
    let samples = geometric_grid(lo, hi, SLOPE_POINTS)
        .into_iter()
        .map(|tau| Ok((tau, gamma(tau, bath)?.value)))
        .collect::<Result<Vec<_>>>()?;
    Ok(power_law(&samples)?.exponent)
}
