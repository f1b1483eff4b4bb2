use std::sync::LazyLock;

use num_complex::Complex64;

use super::{exprel, exprel_complex, power_gap, power_gap_over_q, ComplexValue};
use crate::error::{Error, Result};

/// Bernoulli numbers B_2, B_4, ..., B_30.
const BERNOULLI_EVEN: [f64; 15] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174611.0 / 330.0,
    854513.0 / 138.0,
    -236364091.0 / 2730.0,
    8553103.0 / 6.0,
    -23749461029.0 / 870.0,
    8615841276005.0 / 14322.0,
];

/// `B_{2j} / (2j)!` for j = 1..=15.
static EM_COEFFS: LazyLock<[f64; 15]> = LazyLock::new(|| {
    let mut out = [0.0; 15];
    let mut factorial = 1.0;
    for (j, b) in BERNOULLI_EVEN.iter().enumerate() {
        let n = 2 * (j + 1);
        factorial *= ((n - 1) * n) as f64;
        out[j] = b / factorial;
    }
    out
});

/// Direct terms are summed until the Euler-Maclaurin anchor is at least this far from
/// the origin (plus `|p|`).
const EM_RADIUS: f64 = 10.0;

/// Relative size at which correction terms stop contributing.
const EM_CUTOFF: f64 = 1e-17;

/// A real series value with an estimate of its truncation error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesValue {
    pub value: f64,
    pub err_estimate: f64,
}

/// Hurwitz zeta `zeta(p, q) = sum_{k>=0} (k + q)^(-p)` for real `p` and complex `q`
/// with positive real part, continued analytically to `p < 1`.
pub fn hurwitz_zeta(p: f64, q: ComplexValue) -> Result<ComplexValue> {
    hurwitz_zeta_with_error(p, q).map(|(v, _)| v)
}

/// As [`hurwitz_zeta`], also returning the magnitude of the last Euler-Maclaurin
/// correction kept (an estimate of the absolute truncation error).
pub fn hurwitz_zeta_with_error(p: f64, q: ComplexValue) -> Result<(ComplexValue, f64)> {
    if !p.is_finite() || !q.re.is_finite() || !q.im.is_finite() {
        return Err(Error::domain("hurwitz_zeta", "non-finite argument"));
    }
    if p == 1.0 {
        return Err(Error::Pole {
            function: "hurwitz_zeta",
            at: p,
        });
    }
    if q.re <= 0.0 {
        return Err(Error::domain(
            "hurwitz_zeta",
            format!("Re(q) = {} must be positive", q.re),
        ));
    }

    let radius = EM_RADIUS.max(p.abs() + 1.0);
    let n = shift_for_radius(q, radius);

    let mut sum = Complex64::new(0.0, 0.0);
    for k in 0..n {
        sum += (q + k as f64).powf(-p);
    }

    let z = q + n as f64;
    let z_inv = z.inv();
    let z_inv2 = z_inv * z_inv;
    let z_neg_p = z.powf(-p);
    let mut tail = z * z_neg_p / (p - 1.0) + 0.5 * z_neg_p;

    // term_j = B_2j/(2j)! * (p)_{2j-1} * z^(-p-2j+1)
    let mut rising = p; // (p)_{2j-1}
    let mut power = z_neg_p * z_inv; // z^(-p-2j+1)
    let mut last = 0.0;
    for (j, coeff) in EM_COEFFS.iter().enumerate() {
        if j > 0 {
            let m = (2 * j) as f64;
            rising *= (p + m - 1.0) * (p + m);
            power *= z_inv2;
        }
        let term = power * (coeff * rising);
        tail += term;
        last = term.norm();
        if last <= EM_CUTOFF * (sum + tail).norm() {
            break;
        }
    }

    let value = sum + tail;
    if !value.re.is_finite() || !value.im.is_finite() {
        return Err(Error::domain("hurwitz_zeta", "result overflowed"));
    }
    Ok((value, last + f64::EPSILON * value.norm()))
}

/// Smallest shift `n >= 0` with `|q + n| >= radius`.
fn shift_for_radius(q: Complex64, radius: f64) -> usize {
    if q.norm() >= radius {
        return 0;
    }
    let need = (radius * radius - q.im * q.im).max(0.0).sqrt() - q.re;
    need.ceil().max(0.0) as usize
}

/// Regularised difference of Hurwitz zeta values along a vertical line,
///
/// `S(p, a, b) = [zeta(p, 1 + a) - Re zeta(p, 1 + a + i b)] / p`,
///
/// evaluated without forming the two zeta values. Every term of
/// `sum_{n>=1} (n + a)^(-p) h(p, b / (n + a))` is computed in cancellation-free
/// form, and the Euler-Maclaurin tail is expanded in the same kernel. The result
/// is analytic in `p` on `p > -1` including `p = 0` (where it reduces to
/// `ln Gamma(1 + a) - Re ln Gamma(1 + a + i b)`) and `p = 1` (where `zeta` itself
/// has its pole).
pub fn thermal_zeta_sum(p: f64, a: f64, b: f64) -> Result<SeriesValue> {
    if !(p.is_finite() && a.is_finite() && b.is_finite()) {
        return Err(Error::domain("thermal_zeta_sum", "non-finite argument"));
    }
    if p <= -1.0 {
        return Err(Error::domain(
            "thermal_zeta_sum",
            format!("p = {p} must exceed -1 for the sum to converge"),
        ));
    }
    if a < 0.0 {
        return Err(Error::domain(
            "thermal_zeta_sum",
            format!("a = {a} must be non-negative"),
        ));
    }
    let b = b.abs();
    if b == 0.0 {
        return Ok(SeriesValue {
            value: 0.0,
            err_estimate: 0.0,
        });
    }

    let radius = EM_RADIUS + p.abs();
    let n = (radius - a).ceil().max(0.0) as usize;

    let mut direct = 0.0;
    for k in 1..=n {
        let r = k as f64 + a;
        direct += r.powf(-p) * power_gap_over_q(p, b / r);
    }

    let r = n as f64 + a;
    let beta = b / r;
    let integral = tail_integral_over_p(p, r, b);
    let mut tail = integral - 0.5 * r.powf(-p) * power_gap_over_q(p, beta);

    // + B_2j/(2j)! (p+1)_{2j-2} r^(-p-2j+1) g(p+2j-1, beta)
    let mut rising = 1.0; // (p+1)_{2j-2}
    let r_inv2 = 1.0 / (r * r);
    let mut power = r.powf(-p) / r;
    let mut last = 0.0;
    for (j, coeff) in EM_COEFFS.iter().enumerate() {
        if j > 0 {
            let m = (2 * j) as f64;
            rising *= (p + m - 1.0) * (p + m);
            power *= r_inv2;
        }
        let order = p + (2 * j + 1) as f64;
        let term = coeff * rising * power * power_gap(order, beta);
        tail += term;
        last = term.abs();
        if last <= EM_CUTOFF * (direct + tail).abs() {
            break;
        }
    }

    let value = direct + tail;
    if !value.is_finite() {
        return Err(Error::domain("thermal_zeta_sum", "result overflowed"));
    }
    Ok(SeriesValue {
        value,
        err_estimate: last + 4.0 * f64::EPSILON * value.abs(),
    })
}

/// `(1/p) * int_N^inf [(x + a)^(-p) - Re (x + a + i b)^(-p)] dx` with `r = N + a`.
fn tail_integral_over_p(p: f64, r: f64, b: f64) -> f64 {
    let beta = b / r;
    if beta < 0.5 {
        // Power series of h(p, beta) integrated term by term:
        // r^(1-p) sum_k (-1)^(k+1) (p+1)_{2k-1} / ((2k)! (p+2k-1)) beta^(2k)
        let beta2 = beta * beta;
        let mut coeff = 0.5 * (p + 1.0); // (p+1)_{2k-1}/(2k)!
        let mut power = beta2;
        let mut sum = 0.0;
        for k in 1..200 {
            let kf = k as f64;
            let term = coeff * power / (p + 2.0 * kf - 1.0);
            sum += if k % 2 == 1 { term } else { -term };
            if term.abs() <= 1e-18 * sum.abs() {
                break;
            }
            coeff *= (p + 2.0 * kf) * (p + 2.0 * kf + 1.0) / ((2.0 * kf + 1.0) * (2.0 * kf + 2.0));
            power *= beta2;
        }
        r.powf(1.0 - p) * sum
    } else if p.abs() < 0.5 {
        // [r^(1-p) - Re z^(1-p)] / (p (p-1)) written through exprel so p = 0 is regular.
        let z = Complex64::new(r, b);
        let ln_r = r.ln();
        let ln_z = z.ln();
        let real_part = -r * ln_r * exprel(-p * ln_r);
        let complex_part = (z * ln_z * exprel_complex(-p * ln_z)).re;
        (real_part + complex_part) / (p - 1.0)
    } else {
        r.powf(1.0 - p) * power_gap_over_q(p - 1.0, beta) / p
    }
}
