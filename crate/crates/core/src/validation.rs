//! Self-consistency suites run by `ohmic-probe validate`.

use rayon::prelude::*;
use serde::Serialize;

use crate::decoherence::{gamma_closed_form, gamma_quadrature, gamma_series, BathSpec};
use crate::error::Result;
use crate::estimation::{fi_sigma1, qfi_closed, qfi_general};
use crate::fit::geometric_grid;

pub const GRID_S: [f64; 3] = [0.5, 1.0, 3.0];
pub const GRID_OMEGA_C: [f64; 3] = [1e-2, 1.0, 1e2];
pub const GRID_TEMPERATURE: [f64; 3] = [1e-2, 1.0, 1e2];
pub const GRID_TAU_POINTS: usize = 20;

/// Absolute floor and relative tolerance for pairwise evaluator agreement.
pub const AGREEMENT_ABS: f64 = 1e-8;
pub const AGREEMENT_REL: f64 = 1e-6;

/// The 3 x 3 x 3 bath grid crossed with 20 geometric times in `[1e-2, 1e2]`.
pub fn agreement_grid() -> Vec<(BathSpec, f64)> {
    let taus = geometric_grid(1e-2, 1e2, GRID_TAU_POINTS);
    let mut out = Vec::with_capacity(27 * GRID_TAU_POINTS);
    for s in GRID_S {
        for wc in GRID_OMEGA_C {
            for t in GRID_TEMPERATURE {
                let bath = BathSpec::new(s, wc, t).expect("grid baths are valid");
                out.extend(taus.iter().map(|&tau| (bath, tau)));
            }
        }
    }
    out
}

/// `|x - y| <= max(abs, rel * max(|x|, |y|))`.
pub fn agrees(x: f64, y: f64, abs: f64, rel: f64) -> bool {
    (x - y).abs() <= abs.max(rel * x.abs().max(y.abs()))
}

/// Deviation in units of the allowed band; at most 1 means agreement.
fn band_ratio(x: f64, y: f64, abs: f64, rel: f64) -> f64 {
    (x - y).abs() / abs.max(rel * x.abs().max(y.abs()))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub suite: &'static str,
    pub checks: usize,
    pub failed: usize,
    /// Largest deviation seen, as a fraction of the allowed band.
    pub worst_band_ratio: f64,
    pub first_failure: Option<String>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.failed == 0
    }

    fn collect(suite: &'static str, outcomes: Vec<(usize, f64, Option<String>)>) -> Self {
        let mut report = SuiteReport {
            suite,
            checks: 0,
            failed: 0,
            worst_band_ratio: 0.0,
            first_failure: None,
        };
        for (checks, worst, failure) in outcomes {
            report.checks += checks;
            report.worst_band_ratio = report.worst_band_ratio.max(worst);
            if let Some(f) = failure {
                report.failed += 1;
                report.first_failure.get_or_insert(f);
            }
        }
        report
    }
}

/// Closed form, image series and quadrature agree pairwise on [`agreement_grid`].
pub fn triple_agreement(tol: f64) -> SuiteReport {
    let outcomes = agreement_grid()
        .par_iter()
        .map(|(bath, tau)| {
            let values: Result<[f64; 3]> = (|| {
                Ok([
                    gamma_closed_form(*tau, bath)?.value,
                    gamma_series(*tau, bath, tol)?.value,
                    gamma_quadrature(*tau, bath, tol)?.value,
                ])
            })();
            compare_triplet(bath, *tau, values, AGREEMENT_ABS, AGREEMENT_REL)
        })
        .collect();
    SuiteReport::collect("triple_agreement", outcomes)
}

/// `fi_sigma1 = qfi_general = qfi_closed` on [`agreement_grid`], relative `1e-6`.
pub fn optimality_identity() -> SuiteReport {
    let outcomes = agreement_grid()
        .par_iter()
        .map(|(bath, tau)| {
            let values: Result<[f64; 3]> = (|| {
                Ok([
                    qfi_closed(*tau, bath)?,
                    qfi_general(*tau, bath)?,
                    fi_sigma1(*tau, bath)?,
                ])
            })();
            compare_triplet(bath, *tau, values, 0.0, AGREEMENT_REL)
        })
        .collect();
    SuiteReport::collect("optimality_identity", outcomes)
}

fn compare_triplet(
    bath: &BathSpec,
    tau: f64,
    values: Result<[f64; 3]>,
    abs: f64,
    rel: f64,
) -> (usize, f64, Option<String>) {
    let at = format!(
        "s={} omega_c={} T={} tau={}",
        bath.s(),
        bath.omega_c(),
        bath.temperature(),
        tau
    );
    match values {
        Err(e) => (1, f64::INFINITY, Some(format!("{at}: {e}"))),
        Ok(v) => {
            let mut worst: f64 = 0.0;
            let mut ok = true;
            for (i, j) in [(0, 1), (0, 2), (1, 2)] {
                worst = worst.max(band_ratio(v[i], v[j], abs, rel));
                ok &= agrees(v[i], v[j], abs, rel);
            }
            let failure = (!ok).then(|| format!("{at}: {v:?}"));
            (1, worst, failure)
        }
    }
}
