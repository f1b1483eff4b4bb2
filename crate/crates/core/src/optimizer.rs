//! Optimal interaction time: maximisation of the QSNR over `tau`, cutoff scans and
//! power-law fits of the resulting optimal times.

use rayon::prelude::*;
use serde::Serialize;

use crate::decoherence::BathSpec;
use crate::error::{Error, Result};
use crate::estimation::qsnr;
use crate::fit::{geometric_grid, power_law};

const COARSE_POINTS: usize = 200;
const VERIFY_POINTS: usize = 1000;
/// Golden-section stops when the bracket is this narrow relative to its centre.
pub const BRACKET_REL_WIDTH: f64 = 1e-6;
/// Minimum `r^2` for a scaling fit to count as conclusive.
pub const CONCLUSIVE_R2: f64 = 0.99;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OptimizationResult {
    pub tau_opt: f64,
    pub q_opt: f64,
    pub n_evals: usize,
    pub bracket: [f64; 2],
    pub converged: bool,
    /// The coarse maximum sat on an end of the search domain, so the true
    /// optimum may lie outside it.
    pub at_domain_edge: bool,
}

/// `[1e-3 / max(omega_c, T), 1e3 / min(omega_c, T)]`; at `T = 0` only `1/omega_c` counts.
pub fn search_domain(bath: &BathSpec) -> [f64; 2] {
    let wc = bath.omega_c();
    let t = bath.temperature();
    if t == 0.0 {
        [1e-3 / wc, 1e3 / wc]
    } else {
        [1e-3 / wc.max(t), 1e3 / wc.min(t)]
    }
}

/// QSNR with a collapsed finite-difference stencil read as zero signal: that only
/// happens once the derivative is far below rounding of `Gamma`.
fn objective(tau: f64, bath: &BathSpec) -> Result<f64> {
    match qsnr(tau, bath) {
        Err(Error::StepCollapse { .. }) => Ok(0.0),
        other => other,
    }
}

/// Global maximum of the QSNR over `tau` in [`search_domain`]: a 200-point
/// geometric scan, then golden-section search in `ln tau` around the best point.
pub fn maximize_qsnr(bath: &BathSpec) -> Result<OptimizationResult> {
    let [lo, hi] = search_domain(bath);
    let grid = geometric_grid(lo, hi, COARSE_POINTS);
    let mut n_evals = 0;
    let mut best = (0, f64::NEG_INFINITY);
    for (i, &tau) in grid.iter().enumerate() {
        let q = objective(tau, bath)?;
        n_evals += 1;
        if q > best.1 {
            best = (i, q);
        }
    }
    let (i, q_coarse) = best;
    let at_domain_edge = i == 0 || i == COARSE_POINTS - 1;

    let mut a = grid[i.saturating_sub(1)].ln();
    let mut b = grid[(i + 1).min(COARSE_POINTS - 1)].ln();
    let inv_phi = 0.5 * (5f64.sqrt() - 1.0);
    let mut x1 = b - inv_phi * (b - a);
    let mut x2 = a + inv_phi * (b - a);
    let mut f1 = objective(x1.exp(), bath)?;
    let mut f2 = objective(x2.exp(), bath)?;
    n_evals += 2;
    // ln-width below the target means relative width in tau below it too.
    while b - a > BRACKET_REL_WIDTH {
        if f1 < f2 {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = objective(x2.exp(), bath)?;
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = objective(x1.exp(), bath)?;
        }
        n_evals += 1;
    }

    let (mut tau_opt, mut q_opt) = if f1 >= f2 {
        (x1.exp(), f1)
    } else {
        (x2.exp(), f2)
    };
    if q_coarse > q_opt {
        // Flat or noisy top: keep the better coarse point.
        tau_opt = grid[i];
        q_opt = q_coarse;
    }
    let bracket = [a.exp(), b.exp()];
    Ok(OptimizationResult {
        tau_opt,
        q_opt,
        n_evals,
        bracket,
        converged: (bracket[1] - bracket[0]) / tau_opt < BRACKET_REL_WIDTH * 1.01
            && !at_domain_edge,
        at_domain_edge,
    })
}

/// Post-hoc global check: no point of a 1000-point geometric grid over the search
/// domain beats `result.q_opt` by more than `1e-9` relative.
pub fn verify_maximum(bath: &BathSpec, result: &OptimizationResult) -> Result<bool> {
    let [lo, hi] = search_domain(bath);
    let limit = result.q_opt * (1.0 + 1e-9);
    for tau in geometric_grid(lo, hi, VERIFY_POINTS) {
        if objective(tau, bath)? > limit {
            return Ok(false);
        }
    }
    Ok(true)
}

/// One [`maximize_qsnr`] per cutoff, evaluated in parallel. Output order follows
/// `omega_c_grid`; a failure at one point does not stop the others.
pub fn scan_cutoff(
    s: f64,
    temperature: f64,
    omega_c_grid: &[f64],
) -> Vec<(f64, Result<OptimizationResult>)> {
    omega_c_grid
        .par_iter()
        .map(|&wc| {
            let result = BathSpec::new(s, wc, temperature).and_then(|b| maximize_qsnr(&b));
            (wc, result)
        })
        .collect()
}

/// Fitted `tau_opt = prefactor * omega_c^exponent`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScalingFit {
    pub exponent: f64,
    pub prefactor: f64,
    pub r_squared: f64,
    pub window: [f64; 2],
}

impl ScalingFit {
    pub fn is_conclusive(&self) -> bool {
        self.r_squared >= CONCLUSIVE_R2
    }
}

const MIN_FIT_POINTS: usize = 10;

/// Log-log least squares of `tau_opt` against `omega_c` over the scan points with
/// `omega_c` inside `window`. Needs at least 10 points spanning a decade.
pub fn fit_scaling(scan: &[(f64, OptimizationResult)], window: [f64; 2]) -> Result<ScalingFit> {
    let slack = 1e-12;
    let inside: Vec<(f64, f64)> = scan
        .iter()
        .filter(|(wc, _)| *wc >= window[0] * (1.0 - slack) && *wc <= window[1] * (1.0 + slack))
        .map(|(wc, r)| (*wc, r.tau_opt))
        .collect();
    let span = match (
        inside.iter().map(|p| p.0).reduce(f64::min),
        inside.iter().map(|p| p.0).reduce(f64::max),
    ) {
        (Some(a), Some(b)) => b / a,
        _ => 0.0,
    };
    if inside.len() < MIN_FIT_POINTS || span < 10.0 * (1.0 - slack) {
        return Err(Error::InsufficientPoints {
            found: inside.len(),
            required: MIN_FIT_POINTS,
        });
    }
    let fit = power_law(&inside)?;
    Ok(ScalingFit {
        exponent: fit.exponent,
        prefactor: fit.prefactor,
        r_squared: fit.r_squared,
        window,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn bath(s: f64, wc: f64, t: f64) -> BathSpec {
        BathSpec::new(s, wc, t).unwrap()
    }

    #[test]
    fn zero_temperature_optimum_ohmic() {
        // Q = x^2 / (1 + x^2)^2 with x = omega_c tau, maximal at x = 1 with Q = 1/4.
        let r = maximize_qsnr(&bath(1.0, 1.0, 0.0)).unwrap();
        assert!(r.converged && !r.at_domain_edge);
        assert_relative_eq!(r.tau_opt, 1.0, max_relative = 1e-4);
        assert_relative_eq!(r.q_opt, 0.25, max_relative = 1e-9);
        assert!(r.bracket[0] <= r.tau_opt && r.tau_opt <= r.bracket[1]);
    }

    #[test]
    fn zero_temperature_reference_optima() {
        // mpmath optima of omega_c^2 H at T = 0, in units of 1/omega_c.
        for (s, x, q) in [
            (0.5, 1.248_875_402_875_013, 0.337_533_143_426_897_94),
            (3.0, 0.389_947_872_105_402_5, 0.302_954_713_347_320_05),
        ] {
            let r = maximize_qsnr(&bath(s, 10.0, 0.0)).unwrap();
            assert_relative_eq!(r.tau_opt * 10.0, x, max_relative = 1e-4);
            assert_relative_eq!(r.q_opt, q, max_relative = 1e-8);
        }
    }

    #[test]
    fn optimal_times_in_cold_regime() {
        for (s, k) in [(0.5, 1.25), (1.0, 1.0), (3.0, 0.4)] {
            let r = maximize_qsnr(&bath(s, 100.0, 0.1)).unwrap();
            assert!(
                (r.tau_opt * 100.0 / k - 1.0).abs() < 0.1,
                "s = {s}: {}",
                r.tau_opt
            );
        }
    }

    #[test]
    fn verification_sweep_agrees() {
        let b = bath(0.5, 1.0, 1.0);
        let r = maximize_qsnr(&b).unwrap();
        assert!(verify_maximum(&b, &r).unwrap());
        let worse = OptimizationResult {
            q_opt: 0.5 * r.q_opt,
            ..r
        };
        assert!(!verify_maximum(&b, &worse).unwrap());
    }

    #[test]
    fn scan_keeps_order_and_errors() {
        let grid = [1.0, -1.0, 0.1];
        let out = scan_cutoff(1.0, 1.0, &grid);
        assert_eq!(out.iter().map(|p| p.0).collect::<Vec<_>>(), grid.to_vec());
        assert!(out[0].1.is_ok() && out[1].1.is_err() && out[2].1.is_ok());
        assert_eq!(scan_cutoff(1.0, 1.0, &[2.0]).len(), 1);
    }

    #[test]
    fn thermal_degradation_band() {
        // Q(T) / Q(0) deep in the thermal regime for the Ohmic and super-Ohmic baths.
        for s in [1.0, 3.0] {
            let hot = maximize_qsnr(&bath(s, 0.1, 10.0)).unwrap().q_opt;
            let cold = maximize_qsnr(&bath(s, 0.1, 0.0)).unwrap().q_opt;
            let ratio = hot / cold;
            assert!((0.5..=0.85).contains(&ratio), "s = {s}: ratio {ratio}");
        }
    }

    fn synthetic(wcs: &[f64], f: impl Fn(f64) -> f64) -> Vec<(f64, OptimizationResult)> {
        wcs.iter()
            .map(|&wc| {
                let tau = f(wc);
                (
                    wc,
                    OptimizationResult {
                        tau_opt: tau,
                        q_opt: 1.0,
                        n_evals: 0,
                        bracket: [tau, tau],
                        converged: true,
                        at_domain_edge: false,
                    },
                )
            })
            .collect()
    }

    #[test]
    fn exact_power_law_fit() {
        let scan = synthetic(&geometric_grid(1.0, 1e3, 16), |wc| 3.0 / wc);
        let fit = fit_scaling(&scan, [1.0, 1e3]).unwrap();
        assert_relative_eq!(fit.exponent, -1.0, epsilon = 1e-12);
        assert_relative_eq!(fit.prefactor, 3.0, max_relative = 1e-12);
        assert!(fit.is_conclusive());
    }

    #[test]
    fn fit_needs_points_and_span() {
        let scan = synthetic(&geometric_grid(1.0, 1e3, 16), |wc| 3.0 / wc);
        assert!(matches!(
            fit_scaling(&scan, [1.0, 5.0]),
            Err(Error::InsufficientPoints { .. })
        ));
        let dense = synthetic(&geometric_grid(1.0, 5.0, 30), |wc| wc);
        assert!(matches!(
            fit_scaling(&dense, [1.0, 5.0]),
            Err(Error::InsufficientPoints { .. })
        ));
    }
}
