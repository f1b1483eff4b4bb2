use std::f64::consts::PI;

use super::{check_tau, check_tol, BathSpec, GammaResult, Method};
use crate::error::{Error, Result};
use crate::quadrature::{integrate, integrate_to_infinity, QuadConfig};

/// Beyond `omega_peak + CUTOFF_WIDTHS * omega_c` the exponential cutoff has
/// suppressed the integrand by more than e^-60.
const CUTOFF_WIDTHS: f64 = 60.0;

/// Upper bound on the number of seeded oscillation panels.
const MAX_SEED_PANELS: usize = 1_000_000;

/// Direct quadrature of the defining integral
/// `int_0^inf J_s(w) (1 - cos w tau) / w^2 coth(w / 2T) dw` (`coth -> 1` at `T = 0`).
///
/// This is the reference route the other evaluators are checked against.
pub fn gamma_quadrature(tau: f64, bath: &BathSpec, tol: f64) -> Result<GammaResult> {
    check_tau("gamma_quadrature", tau)?;
    check_tol("gamma_quadrature", tol)?;
    if tau == 0.0 {
        return Ok(GammaResult::new(0.0, Method::Quadrature, 0.0));
    }
    let (value, err) = integrate_spectrum(tau, bath, tol, |_| 1.0)?;
    Ok(GammaResult::new(value, Method::Quadrature, err))
}

/// `int_0^inf weight(w) J_s(w) 2 sin^2(w tau / 2) / w^2 coth(w / 2T) dw`.
pub(crate) fn integrate_spectrum<W: Fn(f64) -> f64>(
    tau: f64,
    bath: &BathSpec,
    tol: f64,
    weight: W,
) -> Result<(f64, f64)> {
    let s = bath.s();
    let wc = bath.omega_c();
    let t = bath.temperature();

    let integrand = |w: f64| {
        if w <= 0.0 {
            return 0.0;
        }
        let x = w / wc;
        let density = wc * (s * x.ln() - x).exp();
        let half = 0.5 * w * tau;
        let osc = 2.0 * half.sin() * half.sin() / (w * w);
        density * osc * thermal_factor(w, t) * weight(w)
    };

    let period = 2.0 * PI / tau;
    let peak = s * wc;
    let end = peak + CUTOFF_WIDTHS * wc;

    // Head [0, w1]: w = w1 v^2 removes the w^(s-1) behaviour at the origin.
    let mut w1 = peak.min(0.5 * period);
    if t > 0.0 {
        w1 = w1.min(2.0 * t);
    }
    let head_points: Vec<f64> = std::iter::once(0.0)
        .chain((0..=10).rev().map(|k| 0.5f64.powi(k)))
        .collect();
    let head = integrate(
        |v: f64| integrand(w1 * v * v) * 2.0 * w1 * v,
        &head_points,
        QuadConfig::relative(tol),
    )?;

    // Body [w1, end]: geometric panels until they reach one period, then periods.
    let mut points = vec![w1];
    let mut x = w1;
    while x < end {
        let width = x.min(period);
        x = (x + width).min(end);
        points.push(x);
        if points.len() > MAX_SEED_PANELS {
            return Err(Error::QuadratureNonConvergence {
                estimate: f64::NAN,
                abs_err: f64::INFINITY,
                intervals: points.len(),
            });
        }
    }
    for extra in [peak, 2.0 * t] {
        if extra > w1 && extra < end {
            points.push(extra);
        }
    }
    points.sort_by(f64::total_cmp);
    points.dedup();

    let body_cfg = QuadConfig {
        abs_tol: tol * head.value.abs(),
        rel_tol: tol,
        max_intervals: (4 * points.len()).max(400_000),
    };
    let body = integrate(integrand, &points, body_cfg)?;

    let so_far = head.value + body.value;
    let tail_cfg = QuadConfig {
        abs_tol: tol * so_far.abs(),
        rel_tol: tol,
        max_intervals: 100_000,
    };
    let tail = integrate_to_infinity(integrand, end, wc, tail_cfg)?;

    let value = so_far + tail.value;
    let err = head.abs_err + body.abs_err + tail.abs_err;
    Ok((value, err))
}

/// `coth(w / 2T)`, or 1 at zero temperature.
fn thermal_factor(w: f64, t: f64) -> f64 {
    if t == 0.0 {
        return 1.0;
    }
    let x = w / (2.0 * t);
    if x > 40.0 {
        1.0
    } else {
        1.0 / x.tanh()
    }
}
