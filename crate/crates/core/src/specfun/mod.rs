//! Special functions: real Gamma, Hurwitz zeta with complex shift, and the
//! dephasing kernels shared by the decoherence evaluators.

mod gamma;
mod zeta;

use num_complex::Complex64;

pub use gamma::euler_gamma;
pub use zeta::{hurwitz_zeta, hurwitz_zeta_with_error, thermal_zeta_sum, SeriesValue};

/// Complex number used for the Hurwitz shift argument.
pub type ComplexValue = Complex64;

/// `(e^x - 1) / x`, equal to 1 at `x = 0`.
pub fn exprel(x: f64) -> f64 {
    if x == 0.0 {
        1.0
    } else {
        x.exp_m1() / x
    }
}

/// Complex `(e^w - 1) / w`.
pub fn exprel_complex(w: Complex64) -> Complex64 {
    if w.norm() < 0.5 {
        let mut term = Complex64::new(1.0, 0.0);
        let mut sum = term;
        for k in 2..40 {
            term *= w / k as f64;
            sum += term;
            if term.norm() < 1e-18 * sum.norm() {
                break;
            }
        }
        sum
    } else {
        (w.exp() - 1.0) / w
    }
}

fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-4 {
        1.0 - x * x / 6.0
    } else {
        x.sin() / x
    }
}

/// `(L, theta)` with `1 + i beta = e^L e^{i theta}`.
fn polar_log(beta: f64) -> (f64, f64) {
    let l = if beta.abs() < 1e150 {
        0.5 * (beta * beta).ln_1p()
    } else {
        beta.abs().ln()
    };
    (l, beta.atan())
}

/// `g(q, beta) = 1 - Re (1 + i beta)^(-q)`, computed without cancellation at small beta.
pub fn power_gap(q: f64, beta: f64) -> f64 {
    let (l, theta) = polar_log(beta);
    let half = 0.5 * q * theta;
    -(-q * l).exp_m1() + (-q * l).exp() * 2.0 * half.sin() * half.sin()
}

/// `h(q, beta) = g(q, beta) / q`, continuous through `q = 0` where it equals
/// `ln |1 + i beta|`.
pub fn power_gap_over_q(q: f64, beta: f64) -> f64 {
    let (l, theta) = polar_log(beta);
    let s = sinc(0.5 * q * theta);
    l * exprel(-q * l) + (-q * l).exp() * 0.5 * q * theta * theta * s * s
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn kernel_matches_direct_power() {
        for &(q, beta) in &[(-0.5, 0.7), (2.0, 3.0), (0.3, 12.0), (5.0, 0.9)] {
            let direct = 1.0 - Complex64::new(1.0, beta).powf(-q).re;
            assert_relative_eq!(power_gap(q, beta), direct, max_relative = 1e-13);
            assert_relative_eq!(power_gap_over_q(q, beta), direct / q, max_relative = 1e-13);
        }
    }

    #[test]
    fn kernel_limits() {
        let beta = 1.7_f64;
        assert_relative_eq!(
            power_gap_over_q(0.0, beta),
            0.5 * (1.0 + beta * beta).ln(),
            max_relative = 1e-15
        );
        // small beta: g ~ q(q+1) beta^2 / 2
        let q = 2.0;
        let b = 1e-9;
        assert_relative_eq!(
            power_gap(q, b),
            0.5 * q * (q + 1.0) * b * b,
            max_relative = 1e-8
        );
        assert_eq!(power_gap(q, 0.0), 0.0);
    }

    #[test]
    fn exprel_complex_branches_agree() {
        let w = Complex64::new(0.49, 0.05);
        let series = exprel_complex(w);
        let direct = (w.exp() - 1.0) / w;
        assert!((series - direct).norm() < 1e-15);
    }
}
