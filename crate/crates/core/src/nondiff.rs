//! Candidate non-differentiability times and kink counting.

use std::f64::consts::PI;

use serde::Serialize;

use crate::distribution::{Distribution, Event};
use crate::error::{check_n, Result};
use crate::polygon::Line;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum StampKind {
    /// Level curve enters through vertex B (increasing).
    EntryB,
    /// Tangent to lines AD and CD (decreasing).
    LinesAdCd,
    /// Passes corners A and C (decreasing).
    CornersAC,
    /// Passes corner D (increasing).
    CornerD,
    /// Tangent to line AC (decreasing).
    LineAC,
    /// Tangent to the single slanted edge of `P1` or `Pn`.
    Special,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CrossingStamp {
    pub region: usize,
    pub time: f64,
    pub kind: StampKind,
    pub valid: bool,
    pub duplicate: bool,
}

struct Formulas {
    n: f64,
}

impl Formulas {
    fn t(&self) -> f64 {
        PI / self.n
    }
    fn k(&self, i: usize) -> f64 {
        (PI * (i as f64 - 1.0) / self.n).sin() / self.t().sin()
    }
    fn l(&self, i: usize) -> f64 {
        4.0 * (i as f64 * self.t()).sin() / (PI * (i as f64 - 1.0) / self.n).sin()
    }
    fn m(&self, i: usize) -> f64 {
        let csc = 1.0 / self.t().sin();
        let cot = |x: f64| 1.0 / x.tan();
        csc * csc * (PI * (i as f64 - 1.0) / self.n).sin()
            / (cot(self.t()) - cot(i as f64 * PI / (2.0 * self.n)))
    }
    fn r(&self, i: usize) -> f64 {
        let s = |j: f64| (j * self.t()).sin();
        let i = i as f64;
        s(i - 1.0) * s(i + 1.0).powi(2) / (s(1.0) * (s(i) - s(1.0)).powi(2))
    }
}

/// Raw stamp times and kinds, before validity tests.
fn formula_stamps(n: usize) -> Vec<(usize, f64, StampKind)> {
    let f = Formulas { n: n as f64 };
    let c = (PI / n as f64).cos();
    let mut out = vec![
        (1, 1.0, StampKind::EntryB),
        (1, 4.0, StampKind::Special),
        (2, 1.0, StampKind::EntryB),
        (2, 8.0 * c, StampKind::LinesAdCd),
        (2, (1.0 + 2.0 * c).powi(2), StampKind::CornerD),
    ];
    for i in 3..n.saturating_sub(1) {
        out.push((i, f.k(i), StampKind::EntryB));
        out.push((i, f.l(i), StampKind::LinesAdCd));
        out.push((i, f.m(i), StampKind::CornersAC));
        out.push((i, f.r(i), StampKind::CornerD));
    }
    if n >= 4 {
        out.push((n - 1, f.k(3), StampKind::EntryB));
        out.push((n - 1, f.m(n - 1), StampKind::CornersAC));
        out.push((n - 1, 2.0 / c, StampKind::LineAC));
    }
    out.push((n, 1.0, StampKind::EntryB));
    out.push((n, 4.0, StampKind::Special));
    out
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-9 * a.abs().max(1.0)
}

fn stamps_from(n: usize, events: &[Event]) -> Vec<CrossingStamp> {
    formula_stamps(n)
        .into_iter()
        .map(|(region, time, kind)| CrossingStamp {
            region,
            time,
            kind,
            valid: time.is_finite()
                && events.iter().any(|e| e.region == region && close(e.t, time)),
            duplicate: kind == StampKind::EntryB && region > n / 2 + 1 && region < n - 1,
        })
        .collect()
}

/// Stamps with validity decided by comparing against the exact events of each region.
pub fn crossing_stamps(n: usize) -> Result<Vec<CrossingStamp>> {
    check_n(n)?;
    let dist = Distribution::new(n)?;
    Ok(stamps_from(n, &dist.events()))
}

/// Unique valid times, ascending.
pub fn dedupe_stamps(stamps: &[CrossingStamp], tol: f64) -> Vec<f64> {
    let mut ts: Vec<f64> = stamps.iter().filter(|s| s.valid).map(|s| s.time).collect();
    ts.sort_by(f64::total_cmp);
    let mut out: Vec<f64> = Vec::with_capacity(ts.len());
    for t in ts {
        if out.last().map_or(true, |&l| t - l > tol) {
            out.push(t);
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KinkTest {
    pub t: f64,
    pub left: f64,
    pub right: f64,
    pub kink: bool,
}

fn jump_is_kink(left: f64, right: f64, deriv_tol: f64) -> bool {
    (right - left).abs() > deriv_tol * 1f64.max(left.abs()).max(right.abs())
}

/// One-sided derivative test at each time in `times`.
pub fn kink_tests(dist: &Distribution, times: &[f64], deriv_tol: f64) -> Vec<KinkTest> {
    (0..times.len())
        .map(|j| {
            let t = times[j];
            let mut gap = f64::INFINITY;
            if j > 0 {
                gap = gap.min(t - times[j - 1]);
            }
            if j + 1 < times.len() {
                gap = gap.min(times[j + 1] - t);
            }
            let delta = 1e-8_f64.min(gap / 3.0);
            let (left, right) = dist.one_sided_derivatives(t, delta);
            KinkTest {
                t,
                left,
                right,
                kink: jump_is_kink(left, right, deriv_tol),
            }
        })
        .collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct NondiffReport {
    pub n: usize,
    pub stamps: Vec<CrossingStamp>,
    pub deduped: Vec<f64>,
    pub tests: Vec<KinkTest>,
    pub count: usize,
    pub lower: f64,
    pub upper: usize,
}

pub fn analyze(n: usize, deriv_tol: f64) -> Result<NondiffReport> {
    let dist = Distribution::new(n)?;
    let stamps = stamps_from(n, &dist.events());
    let deduped = dedupe_stamps(&stamps, 1e-9);
    let tests = kink_tests(&dist, &deduped, deriv_tol);
    let count = tests.iter().filter(|k| k.kink).count();
    let (lower, upper) = bounds(n);
    Ok(NondiffReport {
        n,
        stamps,
        deduped,
        tests,
        count,
        lower,
        upper,
    })
}

pub fn count_nondiff(n: usize, deriv_tol: f64) -> Result<usize> {
    Ok(analyze(n, deriv_tol)?.count)
}

/// `(n/5 - 11, 2n + floor(n/2) + 1)`.
pub fn bounds(n: usize) -> (f64, usize) {
    (n as f64 / 5.0 - 11.0, 2 * n + n / 2 + 1)
}

/// Kinks of the density located without reference to any stamp: a uniform grid of
/// analytic derivatives is screened with third differences, suspicious cells are
/// bisected down to `1e-9`, and survivors must show a one-sided derivative jump.
pub fn blind_scan(dist: &Distribution, t_lo: f64, t_hi: f64, step: f64, deriv_tol: f64) -> Vec<f64> {
    let fp = |t: f64| dist.pdf_derivative(t);
    let count = ((t_hi - t_lo) / step).ceil() as usize;
    let ts: Vec<f64> = (0..=count).map(|j| t_lo + step * j as f64).collect();
    let ds: Vec<f64> = ts.iter().map(|&t| fp(t)).collect();

    let mut found: Vec<f64> = Vec::new();
    for j in 3..ts.len().saturating_sub(1) {
        let predicted = 3.0 * ds[j] - 3.0 * ds[j - 1] + ds[j - 2];
        let scale = 1f64.max(ds[j].abs()).max(ds[j + 1].abs());
        if (ds[j + 1] - predicted).abs() <= 0.1 * deriv_tol * scale {
            continue;
        }
        let (mut a, mut b) = (ts[j], ts[j + 1]);
        while b - a > 1e-9 {
            let w = b - a;
            let m = 0.5 * (a + b);
            let (fa, fm, fb) = (fp(a), fp(m), fp(b));
            let sl = (fa - fp(a - w)) / w;
            let sr = (fp(b + w) - fb) / w;
            let dl = (fm - fa - sl * (m - a)).abs();
            let dr = (fb - fm - sr * (b - m)).abs();
            if dl >= dr {
                b = m;
            } else {
                a = m;
            }
        }
        let t = 0.5 * (a + b);
        if has_jump(&fp, t, 1e-8, deriv_tol) && found.last().map_or(true, |&l| t - l > 1e-6) {
            found.push(t);
        }
    }
    found
}

/// Derivative jump at `t` after removing the smooth change predicted from either side.
fn has_jump<F: Fn(f64) -> f64>(fp: &F, t: f64, delta: f64, deriv_tol: f64) -> bool {
    let (l1, l3) = (fp(t - delta), fp(t - 3.0 * delta));
    let (r1, r3) = (fp(t + delta), fp(t + 3.0 * delta));
    let sl = (l1 - l3) / (2.0 * delta);
    let sr = (r3 - r1) / (2.0 * delta);
    let jump = r1 - l1 - delta * (sl + sr);
    jump.abs() > deriv_tol * 1f64.max(l1.abs()).max(r1.abs())
}

/// Times at which the level curve is tangent to the full line carrying each edge of region `i`.
pub fn line_tangency_times(dist: &Distribution, i: usize) -> Vec<f64> {
    let reg = dist.section.region(i);
    let r = reg.winner.x / reg.winner.y;
    let m = reg.polygon.len();
    (0..m)
        .filter_map(|k| {
            let (p, q) = (reg.polygon[k], reg.polygon[(k + 1) % m]);
            if (p.x - q.x).abs() < 1e-12 {
                return None;
            }
            let line = Line::through(p, q);
            let s = r + line.s;
            (s < 0.0 && line.c != 0.0).then(|| -4.0 * s / (line.c * line.c))
        })
        .collect()
}
