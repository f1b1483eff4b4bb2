use std::f64::consts::PI;

use crate::error::{Error, Result};

const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEFFS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// Euler Gamma function for real arguments.
///
/// Lanczos approximation (g = 7, nine terms) for `z >= 0.5`, reflection
/// formula below that. Poles at the non-positive integers are reported as
/// errors rather than returned as infinities.
pub fn euler_gamma(z: f64) -> Result<f64> {
    if !z.is_finite() {
        return Err(Error::domain(
            "euler_gamma",
            format!("non-finite argument {z}"),
        ));
    }
    if z <= 0.0 && z == z.floor() {
        return Err(Error::Pole {
            function: "euler_gamma",
            at: z,
        });
    }
    let value = if z < 0.5 {
        // sin(pi z) loses accuracy near integers when computed directly; shift first.
        PI / (sin_pi(z) * lanczos(1.0 - z))
    } else {
        lanczos(z)
    };
    if !value.is_finite() {
        return Err(Error::domain("euler_gamma", format!("overflow at {z}")));
    }
    Ok(value)
}

fn lanczos(z: f64) -> f64 {
    let z = z - 1.0;
    let mut series = LANCZOS_COEFFS[0];
    for (i, c) in LANCZOS_COEFFS.iter().enumerate().skip(1) {
        series += c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    // Split the power so t^(z+1/2) does not overflow before exp(-t) is applied.
    let half = t.powf(0.5 * (z + 0.5));
    (2.0 * PI).sqrt() * half * (half * (-t).exp()) * series
}

/// sin(pi x) with exact zeros at the integers.
fn sin_pi(x: f64) -> f64 {
    let n = x.round();
    let r = x - n;
    let s = (PI * r).sin();
    if (n as i64) % 2 == 0 {
        s
    } else {
        -s
    }
}
