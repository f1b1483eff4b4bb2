//! Power-law fits by least squares in log-log coordinates.

use crate::error::{Error, Result};

/// Result of fitting `y = prefactor * x^exponent`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerLaw {
    pub exponent: f64,
    pub prefactor: f64,
    pub r_squared: f64,
}

/// Ordinary least squares of `ln y` against `ln x`. All samples must be positive.
pub fn power_law(samples: &[(f64, f64)]) -> Result<PowerLaw> {
    if samples.len() < 2 {
        return Err(Error::InsufficientPoints {
            found: samples.len(),
            required: 2,
        });
    }
    if let Some(&(x, y)) = samples
        .iter()
        .find(|(x, y)| !(*x > 0.0 && *y > 0.0 && x.is_finite() && y.is_finite()))
    {
        return Err(Error::domain(
            "power_law",
            format!("sample ({x}, {y}) is not positive and finite"),
        ));
    }
    let n = samples.len() as f64;
    let (mx, my) = samples
        .iter()
        .fold((0.0, 0.0), |(sx, sy), (x, y)| (sx + x.ln(), sy + y.ln()));
    let (mx, my) = (mx / n, my / n);
    let (mut sxx, mut sxy, mut syy) = (0.0, 0.0, 0.0);
    for (x, y) in samples {
        let dx = x.ln() - mx;
        let dy = y.ln() - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if sxx == 0.0 {
        return Err(Error::domain(
            "power_law",
            "all abscissae coincide".to_string(),
        ));
    }
    let exponent = sxy / sxx;
    let intercept = my - exponent * mx;
    // A flat series is fitted exactly by a zero slope.
    let r_squared = if syy == 0.0 {
        1.0
    } else {
        (sxy * sxy / (sxx * syy)).clamp(0.0, 1.0)
    };
    Ok(PowerLaw {
        exponent,
        prefactor: intercept.exp(),
        r_squared,
    })
}

/// `n` points geometrically spaced over `[lo, hi]`, both ends included.
pub fn geometric_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![lo];
    }
    let (a, b) = (lo.ln(), hi.ln());
    (0..n)
        .map(|k| {
            if k == 0 {
                lo
            } else if k == n - 1 {
                hi
            } else {
                (a + (b - a) * k as f64 / (n - 1) as f64).exp()
            }
        })
        .collect()
}
