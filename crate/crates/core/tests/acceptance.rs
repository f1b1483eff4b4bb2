//! Acceptance gate. Runs every criterion at its stated tolerance, prints one
//! PASS/FAIL line each and exits non-zero if any criterion fails.
//!
//! Set `OHMIC_PROBE_BLESS=1` to rewrite the golden figure files.

use std::cell::Cell;
use std::path::PathBuf;
use std::process::Command;
use std::time::Instant;

use num_complex::Complex64;
use ohmic_probe::decoherence::{
    asymptotic_slope, gamma, gamma_closed_form, gamma_quadrature, gamma_series,
    gamma_short_time_coeff, gamma_zero_temperature, BathSpec,
};
use ohmic_probe::estimation::{fi_sigma1, qfi_closed, qfi_general};
use ohmic_probe::fit::geometric_grid;
use ohmic_probe::optimizer::{fit_scaling, maximize_qsnr, scan_cutoff, OptimizationResult};
use ohmic_probe::specfun::{euler_gamma, hurwitz_zeta};
use proptest::strategy::Strategy;
use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};

const S_VALUES: [f64; 3] = [0.5, 1.0, 3.0];
const GRID_OMEGA_C: [f64; 3] = [1e-2, 1.0, 1e2];
const GRID_TEMPERATURE: [f64; 3] = [1e-2, 1.0, 1e2];
const FIG2_TEMPERATURES: [f64; 5] = [0.1, 0.5, 1.0, 5.0, 10.0];
const TOL: f64 = 1e-10;

type Check = fn() -> Verdict;

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: impl Into<String>) -> Verdict {
    Verdict {
        pass,
        detail: detail.into(),
    }
}

fn grid_baths() -> Vec<BathSpec> {
    let mut out = Vec::new();
    for s in S_VALUES {
        for wc in GRID_OMEGA_C {
            for t in GRID_TEMPERATURE {
                out.push(BathSpec::new(s, wc, t).unwrap());
            }
        }
    }
    out
}

fn grid_taus() -> Vec<f64> {
    geometric_grid(1e-2, 1e2, 20)
}

fn within(x: f64, y: f64, abs: f64, rel: f64) -> bool {
    (x - y).abs() <= abs.max(rel * x.abs().max(y.abs()))
}

fn rel_dev(x: f64, y: f64) -> f64 {
    if x == y {
        0.0
    } else {
        (x - y).abs() / x.abs().max(y.abs())
    }
}

fn scan_ok(s: f64, t: f64, grid: &[f64]) -> Vec<(f64, OptimizationResult)> {
    scan_cutoff(s, t, grid)
        .into_iter()
        .map(|(wc, r)| {
            (
                wc,
                r.unwrap_or_else(|e| panic!("optimizer failed at s={s} T={t} omega_c={wc}: {e}")),
            )
        })
        .collect()
}

fn criterion_1() -> Verdict {
    let start = Instant::now();
    let (mut failed, mut checked, mut worst) = (0, 0, 0.0f64);
    for bath in grid_baths() {
        for tau in grid_taus() {
            let c = gamma_closed_form(tau, &bath).unwrap().value;
            let s = gamma_series(tau, &bath, TOL).unwrap().value;
            let q = gamma_quadrature(tau, &bath, TOL).unwrap().value;
            for (x, y) in [(c, s), (c, q), (s, q)] {
                checked += 1;
                worst = worst.max(rel_dev(x, y));
                if !within(x, y, 1e-8, 1e-6) {
                    failed += 1;
                }
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    verdict(
        failed == 0 && secs < 60.0,
        format!("{checked} pairs, {failed} outside max(1e-8, 1e-6 rel), worst rel {worst:.1e}, {secs:.1} s single-threaded"),
    )
}

fn criterion_2() -> Verdict {
    let (mut failed, mut worst) = (0, 0.0f64);
    for s in S_VALUES {
        for wc in GRID_OMEGA_C {
            let bath = BathSpec::new(s, wc, 0.0).unwrap();
            for tau in grid_taus() {
                let q = gamma_quadrature(tau, &bath, TOL).unwrap().value;
                let reference = if s == 1.0 {
                    0.5 * (wc * wc * tau * tau).ln_1p()
                } else {
                    gamma_zero_temperature(tau, &bath).unwrap().value
                };
                worst = worst.max(rel_dev(q, reference));
                if rel_dev(q, reference) > 1e-8 {
                    failed += 1;
                }
            }
        }
    }
    verdict(
        failed == 0,
        format!("T=0 quadrature vs closed forms: {failed} over 1e-8, worst rel {worst:.1e}"),
    )
}

fn criterion_3() -> Verdict {
    let (mut failed, mut worst) = (0, 0.0f64);
    for bath in grid_baths() {
        let tau = 1e-3 * (1.0 / bath.omega_c()).min(1.0 / bath.temperature());
        let c2 = gamma_short_time_coeff(&bath).unwrap();
        let dev = (gamma(tau, &bath).unwrap().value / (tau * tau) - c2).abs() / c2;
        worst = worst.max(dev);
        if dev > 1e-3 {
            failed += 1;
        }
    }
    verdict(
        failed == 0,
        format!("27 baths, {failed} over 1e-3, worst rel {worst:.1e}"),
    )
}

fn criterion_4() -> Verdict {
    let mut pass = true;
    let mut parts = Vec::new();
    for (s, want) in [(0.5, 1.5), (1.0, 1.0), (3.0, 0.0)] {
        let slope = asymptotic_slope(&BathSpec::new(s, 1.0, 1.0).unwrap(), [1e2, 1e4]).unwrap();
        pass &= (slope - want).abs() <= 0.05;
        parts.push(format!("s={s}: {slope:.4} (want {want} +- 0.05)"));
    }
    verdict(pass, parts.join(", "))
}

fn criterion_5() -> Verdict {
    let (mut failed, mut worst) = (0, 0.0f64);
    for bath in grid_baths() {
        for tau in grid_taus() {
            let a = qfi_closed(tau, &bath).unwrap();
            let b = qfi_general(tau, &bath).unwrap();
            let c = fi_sigma1(tau, &bath).unwrap();
            for (x, y) in [(a, b), (a, c), (b, c)] {
                worst = worst.max(rel_dev(x, y));
                if rel_dev(x, y) > 1e-6 {
                    failed += 1;
                }
            }
        }
    }
    verdict(
        failed == 0,
        format!("1620 pairs, {failed} over 1e-6 rel, worst rel {worst:.1e}"),
    )
}

fn criterion_6() -> Verdict {
    let grid = geometric_grid(10.0, 1e3, 13);
    let mut pass = true;
    let mut parts = Vec::new();
    for (s, k) in [(0.5, 1.25), (1.0, 1.0), (3.0, 0.4)] {
        let fit = fit_scaling(&scan_ok(s, 0.1, &grid), [10.0, 1e3]).unwrap();
        let ok = (fit.exponent + 1.0).abs() <= 0.03 && (fit.prefactor / k - 1.0).abs() <= 0.10;
        pass &= ok;
        parts.push(format!(
            "s={s}: exponent {:.4}, prefactor {:.4} (want {k})",
            fit.exponent, fit.prefactor
        ));
    }
    verdict(pass, parts.join(", "))
}

fn criterion_7() -> Verdict {
    let grid = geometric_grid(1e-3, 1e-1, 13);
    let mut pass = true;
    let mut parts = Vec::new();
    for s in S_VALUES {
        let fit = fit_scaling(&scan_ok(s, 10.0, &grid), [1e-3, 1e-1]).unwrap();
        pass &= (fit.exponent + 0.5).abs() <= 0.05;
        parts.push(format!("s={s}: {:.4}", fit.exponent));
    }
    verdict(
        pass,
        format!("exponents (want -0.5 +- 0.05) {}", parts.join(", ")),
    )
}

fn criterion_8() -> Verdict {
    let (mut failed, mut worst) = (0, 0.0f64);
    for s in S_VALUES {
        for t in FIG2_TEMPERATURES {
            let wc = 1e2 * t;
            let hot = maximize_qsnr(&BathSpec::new(s, wc, t).unwrap())
                .unwrap()
                .q_opt;
            let cold = maximize_qsnr(&BathSpec::new(s, wc, 0.0).unwrap())
                .unwrap()
                .q_opt;
            let dev = (hot - cold).abs() / cold;
            worst = worst.max(dev);
            if dev > 0.05 {
                failed += 1;
            }
        }
    }
    verdict(
        failed == 0,
        format!("15 (s, T) pairs at omega_c = 100 T, {failed} over 5%, worst {worst:.4}"),
    )
}

fn criterion_9() -> Verdict {
    let mut pass = true;
    let mut parts = Vec::new();
    for s in S_VALUES {
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        for t in [0.1, 1.0, 10.0] {
            for ratio in [1e-1, 1e-2, 1e-3] {
                let wc = ratio * t;
                let hot = maximize_qsnr(&BathSpec::new(s, wc, t).unwrap())
                    .unwrap()
                    .q_opt;
                let cold = maximize_qsnr(&BathSpec::new(s, wc, 0.0).unwrap())
                    .unwrap()
                    .q_opt;
                let r = hot / cold;
                lo = lo.min(r);
                hi = hi.max(r);
            }
        }
        let ok = lo >= 0.5 && hi <= 0.85;
        pass &= ok;
        parts.push(format!(
            "s={s}: [{lo:.4}, {hi:.4}]{}",
            if ok { "" } else { " out of band" }
        ));
    }
    verdict(
        pass,
        format!(
            "Q(T)/Q(0) for omega_c <= T/10 (band [0.5, 0.85]) {}",
            parts.join(", ")
        ),
    )
}

struct Csv {
    header: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl Csv {
    fn parse(text: &str) -> Csv {
        let mut lines = text.lines().filter(|l| !l.starts_with('#'));
        let header = lines
            .next()
            .unwrap()
            .split(',')
            .map(str::to_string)
            .collect();
        let rows = lines
            .map(|l| l.split(',').map(str::to_string).collect())
            .collect();
        Csv { header, rows }
    }

    fn col(&self, name: &str) -> usize {
        self.header.iter().position(|h| h == name).unwrap()
    }

    fn num(&self, row: usize, name: &str) -> f64 {
        self.rows[row][self.col(name)].parse().unwrap()
    }
}

fn run_figures(preset: &str) -> String {
    let out = Command::new(env!("CARGO_BIN_EXE_ohmic-probe"))
        .args(["figures", "--preset", preset])
        .output()
        .unwrap();
    assert!(
        out.status.success(),
        "figures --preset {preset} exited with {}",
        out.status
    );
    String::from_utf8(out.stdout).unwrap()
}

/// Numeric comparison against a stored golden file. `tau_opt` sits on a flat
/// maximum and is only resolved to about 1e-5; everything else to 1e-9.
fn matches_golden(name: &str, text: &str) -> Result<(), String> {
    let path: PathBuf = [env!("CARGO_MANIFEST_DIR"), "tests", "golden", name]
        .iter()
        .collect();
    if std::env::var_os("OHMIC_PROBE_BLESS").is_some() {
        std::fs::write(&path, text).map_err(|e| e.to_string())?;
    }
    let golden = std::fs::read_to_string(&path).map_err(|e| format!("{}: {e}", path.display()))?;
    if golden.lines().next() != text.lines().next() {
        return Err(format!("{name}: metadata line differs"));
    }
    let (g, t) = (Csv::parse(&golden), Csv::parse(text));
    if g.header != t.header || g.rows.len() != t.rows.len() {
        return Err(format!("{name}: layout differs"));
    }
    for (i, (gr, tr)) in g.rows.iter().zip(&t.rows).enumerate() {
        for (j, (a, b)) in gr.iter().zip(tr).enumerate() {
            let same = match (a.parse::<f64>(), b.parse::<f64>()) {
                (Ok(x), Ok(y)) => {
                    let rel = if g.header[j] == "tau_opt" { 1e-5 } else { 1e-9 };
                    within(x, y, 0.0, rel)
                }
                _ => a == b,
            };
            if !same {
                return Err(format!(
                    "{name}: row {i} column {} is {b}, golden {a}",
                    g.header[j]
                ));
            }
        }
    }
    Ok(())
}

fn criterion_10() -> Verdict {
    let left = run_figures("fig1-left");
    let right = run_figures("fig1-right");
    let fig2 = run_figures("fig2");
    let mut problems = Vec::new();

    // fig1 presets: at every (s, omega_c, tau) the hot curve lies on or above the cold one.
    let (l, r) = (Csv::parse(&left), Csv::parse(&right));
    let mut fig1_checked = 0;
    if l.rows.len() != 9 * 41 || r.rows.len() != l.rows.len() {
        problems.push(format!(
            "fig1 row counts {} / {}",
            l.rows.len(),
            r.rows.len()
        ));
    } else {
        for i in 0..l.rows.len() {
            let key = |c: &Csv| (c.num(i, "s"), c.num(i, "omega_c"), c.num(i, "tau"));
            assert_eq!(key(&l), key(&r));
            fig1_checked += 1;
            if l.num(i, "gamma") < r.num(i, "gamma") {
                problems.push(format!("fig1 ordering broken at row {i}"));
            }
        }
    }

    // fig2 preset: at fixed (s, omega_c) Q_c does not increase with T.
    let f = Csv::parse(&fig2);
    let (mut fig2_checked, mut fig2_broken, mut worst_excess) = (0, 0, 0.0f64);
    let mut largest_broken_ratio = 0.0f64;
    for s in S_VALUES {
        let rows: Vec<usize> = (0..f.rows.len()).filter(|&i| f.num(i, "s") == s).collect();
        let per_t = rows.len() / FIG2_TEMPERATURES.len();
        for k in 0..per_t {
            let at = |ti: usize| rows[ti * per_t + k];
            for ti in 1..FIG2_TEMPERATURES.len() {
                let (cold, hot) = (f.num(at(ti - 1), "q_opt"), f.num(at(ti), "q_opt"));
                fig2_checked += 1;
                if hot > cold * (1.0 + 1e-9) {
                    fig2_broken += 1;
                    worst_excess = worst_excess.max(hot / cold - 1.0);
                    let x = f.num(at(ti), "omega_c") / f.num(at(ti), "temp");
                    largest_broken_ratio = largest_broken_ratio.max(x);
                }
            }
        }
    }
    if fig2_broken > 0 {
        problems.push(format!(
            "fig2 Q_c rises with T at {fig2_broken} of {fig2_checked} neighbouring pairs \
             (by up to {:.2}%, all with omega_c/T <= {largest_broken_ratio:.2})",
            100.0 * worst_excess
        ));
    }

    for (name, text) in [
        ("fig1-left.csv", &left),
        ("fig1-right.csv", &right),
        ("fig2.csv", &fig2),
    ] {
        if let Err(e) = matches_golden(name, text) {
            problems.push(e);
        }
    }
    let detail = format!(
        "{fig1_checked} fig1 and {fig2_checked} fig2 ordered pairs, 3 golden files{}",
        if problems.is_empty() {
            String::new()
        } else {
            format!("; {}", problems.join("; "))
        }
    );
    verdict(problems.is_empty(), detail)
}

fn criterion_11() -> Verdict {
    let config = Config {
        cases: 1000,
        failure_persistence: None,
        ..Config::default()
    };
    let worst_zeta = Cell::new(0.0f64);
    let mut runner = TestRunner::new_with_rng(
        config.clone(),
        TestRng::deterministic_rng(RngAlgorithm::ChaCha),
    );
    let samples =
        (-1.0f64..3.0, 0.05f64..20.0).prop_filter("pole", |(p, _)| (p - 1.0).abs() > 1e-6);
    let zeta_ok = runner
        .run(&samples, |(p, q)| {
            let a = hurwitz_zeta(p, Complex64::new(q, 0.0)).unwrap().re;
            let b = hurwitz_zeta(p, Complex64::new(q + 1.0, 0.0)).unwrap().re;
            let t = q.powf(-p);
            let res = (a - b - t).abs() / a.abs().max(b.abs()).max(t);
            worst_zeta.set(worst_zeta.get().max(res));
            assert!(res < 1e-9);
            Ok(())
        })
        .is_ok();

    let worst_gamma = Cell::new(0.0f64);
    let mut runner =
        TestRunner::new_with_rng(config, TestRng::deterministic_rng(RngAlgorithm::ChaCha));
    let gamma_ok = runner
        .run(&(0.1f64..10.0), |z| {
            let lhs = euler_gamma(z + 1.0).unwrap();
            let res = (lhs - z * euler_gamma(z).unwrap()).abs() / lhs.abs();
            worst_gamma.set(worst_gamma.get().max(res));
            assert!(res < 1e-12);
            Ok(())
        })
        .is_ok();
    verdict(
        zeta_ok && gamma_ok,
        format!(
            "Hurwitz recurrence worst {:.1e} (< 1e-9), Gamma recurrence worst {:.1e} (< 1e-12), 1000 samples each",
            worst_zeta.get(),
            worst_gamma.get()
        ),
    )
}

fn main() {
    let criteria: [(u8, &str, Check); 11] = [
        (1, "evaluator triple agreement", criterion_1),
        (2, "zero-temperature closed form", criterion_2),
        (3, "short-time law", criterion_3),
        (4, "long-time exponents", criterion_4),
        (5, "QFI optimality identity", criterion_5),
        (6, "optimal-time constants, cold regime", criterion_6),
        (7, "optimal-time exponent, thermal regime", criterion_7),
        (8, "QSNR plateau", criterion_8),
        (9, "QSNR thermal degradation", criterion_9),
        (10, "figure regeneration", criterion_10),
        (11, "special-function identities", criterion_11),
    ];
    let mut failures = Vec::new();
    for (id, name, check) in criteria {
        let v = std::panic::catch_unwind(check).unwrap_or_else(|_| verdict(false, "panicked"));
        println!(
            "criterion {id:>2} {} {name}: {}",
            if v.pass { "PASS" } else { "FAIL" },
            v.detail
        );
        if !v.pass {
            failures.push(id);
        }
    }
    if failures.is_empty() {
        println!("acceptance: all 11 criteria pass");
    } else {
        println!("acceptance: {} of 11 failed: {failures:?}", failures.len());
        std::process::exit(1);
    }
}
