//! One line per acceptance criterion; exits non-zero if any criterion fails.

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::Instant;

use staircase_gaps::distribution::{Distribution, ExtremumKind};
use staircase_gaps::enumerate::empirical_vs_analytic;
use staircase_gaps::nondiff;
use staircase_gaps::verify::{geometry_residual, oracle_agreement, REFERENCE_KINK_COUNTS};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn covolume() -> Outcome {
    let mut worst: f64 = 0.0;
    let mut slowest: f64 = 0.0;
    for n in (3..=10).chain([50, 100]) {
        let start = Instant::now();
        let v = Distribution::new(n).unwrap().covolume(1e-11).unwrap();
        slowest = slowest.max(start.elapsed().as_secs_f64());
        let reference = (n as f64 - 1.0) * PI * PI / n as f64;
        worst = worst.max((v - reference).abs() / reference);
    }
    outcome(worst < 1e-5 && slowest < 5.0, format!("max relative error {worst:.2e}, slowest {slowest:.2}s"))
}

fn kink_counts() -> Outcome {
    let mut pass = true;
    let mut table = Vec::new();
    let mut out_of_bounds = Vec::new();
    let mut slowest: f64 = 0.0;
    for n in 4..=30 {
        let start = Instant::now();
        let count = nondiff::count_nondiff(n, 1e-4).unwrap();
        slowest = slowest.max(start.elapsed().as_secs_f64());
        let (lower, upper) = nondiff::bounds(n);
        if !(lower <= count as f64 && count <= upper) {
            pass = false;
            out_of_bounds.push(n);
        }
        if n <= 11 {
            let expected = REFERENCE_KINK_COUNTS[n - 4];
            pass &= count == expected;
            table.push(format!("n={n}: {count}/{expected}"));
        }
    }
    pass &= slowest < 10.0;
    outcome(pass, format!("computed/reference [{}], bounds violated at {out_of_bounds:?}", table.join(", ")))
}

fn multimodality() -> Outcome {
    // reference extrema (max, min, max) of the 14-gon density
    let ref_t = [0.715353, 0.781831, 0.870497];
    let ref_f = [0.691264, 0.681558, 0.700232];
    let dist = Distribution::new(7).unwrap();
    let ext = dist.find_local_extrema(1.0, 20.0, 4000);
    let first_max = ext.iter().position(|e| e.kind == ExtremumKind::Max);
    let Some(j) = first_max.filter(|&j| j + 2 < ext.len()) else {
        return outcome(false, format!("extrema {ext:?}"));
    };
    let (m1, lo, m2) = (ext[j], ext[j + 1], ext[j + 2]);
    let shape = lo.kind == ExtremumKind::Min && m2.kind == ExtremumKind::Max;
    let rel = |a: f64, b: f64| (a - b).abs() / b;
    let r1 = rel(m1.f / lo.f, ref_f[0] / ref_f[1]);
    let r2 = rel(m2.f / lo.f, ref_f[2] / ref_f[1]);
    let products = [m1.t * m1.f, lo.t * lo.f, m2.t * m2.f];
    let dp: Vec<f64> = (0..3).map(|i| rel(products[i], ref_t[i] * ref_f[i])).collect();
    let pass = shape && r1 < 0.01 && r2 < 0.01 && dp.iter().all(|&d| d < 0.01);
    outcome(
        pass,
        format!(
            "extrema at t = {:.6}, {:.6}, {:.6}; ratio errors {r1:.1e}, {r2:.1e}; t*f = {:.6}, {:.6}, {:.6} (errors {:.2}%, {:.2}%, {:.2}%)",
            m1.t,
            lo.t,
            m2.t,
            products[0],
            products[1],
            products[2],
            100.0 * dp[0],
            100.0 * dp[1],
            100.0 * dp[2]
        ),
    )
}

fn support_and_normalization() -> Outcome {
    let mut worst: f64 = 0.0;
    let mut support = true;
    for n in 3..=12 {
        let d = Distribution::new(n).unwrap();
        support &= [-1.0, 0.0, 0.5, 1.0 - 1e-12, 1.0].iter().all(|&t| d.pdf(t) == 0.0 && d.cdf(t) == 0.0);
        worst = worst.max((d.cdf(1e6) - 1.0).abs());
    }
    outcome(support && worst < 1e-6, format!("pdf = cdf = 0 on t <= 1: {support}; max |cdf(1e6) - 1| = {worst:.2e}"))
}

fn winner_oracle() -> Outcome {
    let (mut ok, mut total) = (0, 0);
    for n in 3..=12 {
        let (a, b) = oracle_agreement(n, 200, 1000 + n as u64).unwrap();
        ok += a;
        total += b;
    }
    outcome(ok == total, format!("{ok}/{total} samples agree"))
}

fn empirical_convergence() -> Outcome {
    const THRESHOLD: f64 = 0.05;
    let mut pass = true;
    let mut parts = Vec::new();
    for n in [3, 5, 7] {
        let ks = |k: f64| empirical_vs_analytic(n, k, usize::MAX).unwrap();
        let (a, b, c) = (ks(10.0), ks(40.0), ks(60.0));
        pass &= c.ks < THRESHOLD && a.ks > b.ks && a.stable && b.stable && c.stable;
        parts.push(format!("n={n}: {:.4} > {:.4}, k=60 {:.4}", a.ks, b.ks, c.ks));
    }
    outcome(pass, format!("{} (threshold {THRESHOLD})", parts.join("; ")))
}

fn geometry_identities() -> Outcome {
    let start = Instant::now();
    let worst = (3..=200).map(|n| geometry_residual(n).unwrap()).fold(0.0, f64::max);
    let secs = start.elapsed().as_secs_f64();
    outcome(worst < 1e-12 && secs < 1.0, format!("max residual {worst:.2e} in {secs:.3}s"))
}

fn kink_completeness() -> Outcome {
    let mut pass = true;
    let mut parts = Vec::new();
    for n in 4..=10 {
        let rep = nondiff::analyze(n, 1e-4).unwrap();
        let dist = Distribution::new(n).unwrap();
        let t_hi = rep.deduped.last().unwrap() * 1.2 + 1.0;
        let found = nondiff::blind_scan(&dist, 0.9, t_hi, 1e-3, 1e-4);
        let far = found.iter().filter(|t| rep.deduped.iter().all(|s| (*s - **t).abs() > 1e-6)).count();
        let off_formula = rep
            .tests
            .iter()
            .filter(|k| k.kink)
            .filter(|k| rep.stamps.iter().all(|s| (s.time - k.t).abs() > 1e-9))
            .count();
        pass &= far == 0 && off_formula == 0;
        parts.push(format!("n={n}: {}/{far}", found.len()));
    }
    outcome(pass, format!("blind kinks/away from stamps [{}]", parts.join(", ")))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 8] = [
        ("covolume", covolume),
        ("non-differentiability counts", kink_counts),
        ("multimodality", multimodality),
        ("support and normalization", support_and_normalization),
        ("winner oracle equivalence", winner_oracle),
        ("empirical convergence", empirical_convergence),
        ("geometry identities", geometry_identities),
        ("kink completeness", kink_completeness),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let o = f();
        if !o.pass {
            failed += 1;
        }
        println!("criterion {} {:<30} {}  {}", i + 1, name, if o.pass { "PASS" } else { "FAIL" }, o.detail);
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
