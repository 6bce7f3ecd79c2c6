//! Convex polygon clipping and vertical slab decomposition.

use serde::Serialize;

use crate::geometry::PlaneVector;

const EPS: f64 = 1e-12;

/// The line `y = s x + c`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Line {
    pub s: f64,
    pub c: f64,
}

impl Line {
    pub fn through(p: PlaneVector, q: PlaneVector) -> Self {
        let s = (q.y - p.y) / (q.x - p.x);
        Self { s, c: p.y - s * p.x }
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.s * x + self.c
    }
}

/// Part of a convex polygon over `[x_lo, x_hi]`, bounded by two lines.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Slab {
    pub x_lo: f64,
    pub x_hi: f64,
    pub top: Line,
    pub bot: Line,
}

/// Keep the part of `poly` with `a x + b y <= c`.
pub fn clip(poly: &[PlaneVector], a: f64, b: f64, c: f64) -> Vec<PlaneVector> {
    let m = poly.len();
    let mut out = Vec::with_capacity(m + 1);
    for k in 0..m {
        let p = poly[k];
        let q = poly[(k + 1) % m];
        let fp = a * p.x + b * p.y - c;
        let fq = a * q.x + b * q.y - c;
        if fp <= 0.0 {
            out.push(p);
        }
        if (fp < 0.0 && fq > 0.0) || (fp > 0.0 && fq < 0.0) {
            let s = fp / (fp - fq);
            out.push(p + s * (q - p));
        }
    }
    cleanup(out)
}

/// Drop repeated and collinear vertices.
pub fn cleanup(mut poly: Vec<PlaneVector>) -> Vec<PlaneVector> {
    loop {
        let m = poly.len();
        if m < 3 {
            return poly;
        }
        let mut removed = false;
        for k in 0..m {
            let p = poly[(k + m - 1) % m];
            let q = poly[k];
            let r = poly[(k + 1) % m];
            let cross = (q.x - p.x) * (r.y - q.y) - (q.y - p.y) * (r.x - q.x);
            if (q - p).norm() < EPS || cross.abs() < EPS {
                poly.remove(k);
                removed = true;
                break;
            }
        }
        if !removed {
            return poly;
        }
    }
}

pub fn area(poly: &[PlaneVector]) -> f64 {
    let m = poly.len();
    let twice: f64 = (0..m)
        .map(|k| {
            let p = poly[k];
            let q = poly[(k + 1) % m];
            p.x * q.y - q.x * p.y
        })
        .sum();
    twice.abs() / 2.0
}

pub fn slabs(poly: &[PlaneVector]) -> Vec<Slab> {
    let m = poly.len();
    if m < 3 {
        return Vec::new();
    }
    let mut xs: Vec<f64> = poly.iter().map(|p| p.x).collect();
    xs.sort_by(f64::total_cmp);
    xs.dedup_by(|a, b| (*a - *b).abs() < EPS);
    let mut out = Vec::new();
    for w in xs.windows(2) {
        let (lo, hi) = (w[0], w[1]);
        let mid = 0.5 * (lo + hi);
        let mut lines: Vec<(f64, Line)> = Vec::new();
        for k in 0..m {
            let p = poly[k];
            let q = poly[(k + 1) % m];
            if (p.x - q.x).abs() < EPS {
                continue;
            }
            if p.x.min(q.x) <= mid && mid <= p.x.max(q.x) {
                let line = Line::through(p, q);
                lines.push((line.eval(mid), line));
            }
        }
        if lines.len() < 2 {
            continue;
        }
        lines.sort_by(|a, b| a.0.total_cmp(&b.0));
        out.push(Slab {
            x_lo: lo,
            x_hi: hi,
            top: lines[lines.len() - 1].1,
            bot: lines[0].1,
        });
    }
    out
}
