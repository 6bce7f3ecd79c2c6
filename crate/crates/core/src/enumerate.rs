//! Saddle connections as the orbits of `w1 = (1, 0)` and `w2 = (0, 1)` under the
//! Veech group, and the distribution of gaps between their slopes.
//!
//! The search runs over vectors. In the 2n-gon frame (apply `M^-1`) the
//! generators are a rotation and a horizontal shear, so the norm `|M^-1 v|`
//! is the natural pruning radius.

use std::collections::{HashMap, HashSet};

use serde::Serialize;

use crate::distribution::Distribution;
use crate::error::{check_n, Error, Result};
use crate::geometry::{edge_h, normalizing_matrix, veech_generators, Mat2x2, PlaneVector};

const KEY_SCALE: f64 = 1e9;

#[derive(Debug, Default)]
struct VectorSet {
    keys: HashSet<(i64, i64)>,
}

impl VectorSet {
    fn key(v: PlaneVector) -> (i64, i64) {
        ((v.x * KEY_SCALE).round() as i64, (v.y * KEY_SCALE).round() as i64)
    }

    /// Insert unless a vector within one grid cell is present.
    fn insert(&mut self, v: PlaneVector) -> bool {
        let (kx, ky) = Self::key(v);
        for dx in -1..=1 {
            for dy in -1..=1 {
                if self.keys.contains(&(kx + dx, ky + dy)) {
                    return false;
                }
            }
        }
        self.keys.insert((kx, ky))
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct OrbitSet {
    pub n: usize,
    pub x_max: f64,
    pub prune_norm: f64,
    /// Every orbit vector found inside the pruning radius.
    pub vectors: Vec<PlaneVector>,
    /// Depth after which no vector of the strip `0 < x <= x_max, y >= 0` appeared.
    pub stabilized_depth: usize,
    pub depth_reached: usize,
    pub exhausted: bool,
    pub stable: bool,
}

impl OrbitSet {
    pub fn in_strip(&self, v: &PlaneVector) -> bool {
        v.x > 1e-12 && v.x <= self.x_max * (1.0 + 1e-12) && v.y >= -1e-12
    }

    pub fn strip(&self) -> Vec<PlaneVector> {
        self.vectors.iter().copied().filter(|v| self.in_strip(v)).collect()
    }
}

/// Radius in the 2n-gon frame covering the box `|x|, |y| <= extent`.
pub fn covering_radius(n: usize, extent: f64) -> Result<f64> {
    let mi = normalizing_matrix(n)?.inverse().expect("invertible");
    Ok(mi.operator_norm() * extent * std::f64::consts::SQRT_2 * 1.01)
}

pub fn orbit_enumerate(n: usize, x_max: f64, max_depth: usize, prune_norm: f64) -> Result<OrbitSet> {
    orbit_enumerate_ordered(n, x_max, max_depth, prune_norm, [0, 1, 2, 3])
}

/// As [`orbit_enumerate`], applying `S', S'^-1, R', R'^-1` in the given order.
pub fn orbit_enumerate_ordered(
    n: usize,
    x_max: f64,
    max_depth: usize,
    prune_norm: f64,
    order: [usize; 4],
) -> Result<OrbitSet> {
    check_n(n)?;
    if !(x_max > 0.0) || max_depth == 0 {
        return Err(Error::Invalid("x_max must be positive and max_depth at least 1".into()));
    }
    let g = veech_generators(n)?;
    let base: [Mat2x2; 4] = [
        g.s_prime,
        g.s_prime.inverse().expect("unimodular"),
        g.r_prime,
        g.r_prime.inverse().expect("unimodular"),
    ];
    let gens = order.map(|i| base[i]);
    let mi = normalizing_matrix(n)?.inverse().expect("invertible");
    let inside = |v: PlaneVector| mi.apply(v).norm() <= prune_norm * (1.0 + 1e-12);
    let in_strip = |v: &PlaneVector| v.x > 1e-12 && v.x <= x_max * (1.0 + 1e-12) && v.y >= -1e-12;

    let mut seen = VectorSet::default();
    let mut vectors = Vec::new();
    let mut frontier = Vec::new();
    for w in [PlaneVector::new(1.0, 0.0), PlaneVector::new(0.0, 1.0)] {
        if seen.insert(w) {
            vectors.push(w);
            frontier.push(w);
        }
    }
    let mut stabilized_depth = 0;
    let mut depth = 0;
    while !frontier.is_empty() && depth < max_depth {
        depth += 1;
        let mut next = Vec::new();
        for v in &frontier {
            for m in &gens {
                let u = m.apply(*v);
                if inside(u) && seen.insert(u) {
                    if in_strip(&u) {
                        stabilized_depth = depth;
                    }
                    vectors.push(u);
                    next.push(u);
                }
            }
        }
        frontier = next;
    }
    let exhausted = frontier.is_empty();
    Ok(OrbitSet {
        n,
        x_max,
        prune_norm,
        vectors,
        stabilized_depth,
        depth_reached: depth,
        exhausted,
        stable: exhausted || stabilized_depth + 2 <= depth,
    })
}

/// Orbit vectors with `|x|, |y| <= 1 + h_1 + h_{ceil(n/2)}`, a candidate set for winner checks.
pub fn oracle_candidates(n: usize) -> Result<Vec<PlaneVector>> {
    let extent = 1.0 + edge_h(n, 1)? + edge_h(n, n.div_ceil(2) as i64)?;
    let set = orbit_enumerate(n, extent, usize::MAX, covering_radius(n, extent)?)?;
    Ok(set
        .vectors
        .into_iter()
        .filter(|v| v.x.abs() <= extent && v.y.abs() <= extent)
        .collect())
}

#[derive(Debug, Clone, Serialize)]
pub struct GapSample {
    pub n: usize,
    pub k: f64,
    pub vectors: Vec<PlaneVector>,
    pub slopes: Vec<f64>,
    pub gaps: Vec<f64>,
    pub stable: bool,
    pub stabilized_depth: usize,
}

impl GapSample {
    pub fn count(&self) -> usize {
        self.gaps.len()
    }
}

/// Slopes reduced mod 1, sorted, with values closer than `tol` merged.
pub fn reduced_slopes(vectors: &[PlaneVector], tol: f64) -> Vec<f64> {
    let mut s: Vec<f64> = vectors
        .iter()
        .map(|v| {
            let q = v.y / v.x;
            let r = q - q.floor();
            if r >= 1.0 { 0.0 } else { r }
        })
        .collect();
    s.sort_by(f64::total_cmp);
    let mut out: Vec<f64> = Vec::with_capacity(s.len());
    for x in s {
        if out.last().map_or(true, |&l| x - l > tol) {
            out.push(x);
        }
    }
    if out.len() > 1 && out[0] + 1.0 - out[out.len() - 1] <= tol {
        out.pop();
    }
    out
}

pub fn slope_gaps(n: usize, k: f64, max_depth: usize) -> Result<GapSample> {
    if !(k >= 1.0) {
        return Err(Error::Invalid("k must be at least 1".into()));
    }
    let set = orbit_enumerate(n, k, max_depth, covering_radius(n, k)?)?;
    let vectors = set.strip();
    let k2 = k * k;
    // distinct slopes are at least 1/k^2 apart; long words drift by more than 1e-9
    let slopes = reduced_slopes(&vectors, 1e-9_f64.max(1e-3 / k2));
    let mut gaps: Vec<f64> = slopes.windows(2).map(|w| (w[1] - w[0]) * k2).collect();
    if let (Some(first), Some(last)) = (slopes.first(), slopes.last()) {
        gaps.push((first + 1.0 - last) * k2);
    }
    Ok(GapSample {
        n,
        k,
        vectors,
        slopes,
        gaps,
        stable: set.stable,
        stabilized_depth: set.stabilized_depth,
    })
}

/// Two-sided Kolmogorov-Smirnov distance between `sample` and `cdf`.
pub fn ks_distance<F: Fn(f64) -> f64>(sample: &[f64], cdf: F) -> f64 {
    let mut xs = sample.to_vec();
    xs.sort_by(f64::total_cmp);
    let n = xs.len() as f64;
    xs.iter().enumerate().fold(0.0, |d, (i, &x)| {
        let f = cdf(x);
        d.max((i as f64 + 1.0) / n - f).max(f - i as f64 / n)
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct EmpiricalSummary {
    pub n: usize,
    pub k: f64,
    pub gap_count: usize,
    pub ks: f64,
    pub min_gap: f64,
    pub stable: bool,
    pub stabilized_depth: usize,
}

pub fn empirical_summary(sample: &GapSample, dist: &Distribution) -> EmpiricalSummary {
    EmpiricalSummary {
        n: sample.n,
        k: sample.k,
        gap_count: sample.count(),
        ks: ks_distance(&sample.gaps, |t| dist.cdf(t)),
        min_gap: sample.gaps.iter().copied().fold(f64::INFINITY, f64::min),
        stable: sample.stable,
        stabilized_depth: sample.stabilized_depth,
    }
}

pub fn empirical_vs_analytic(n: usize, k: f64, max_depth: usize) -> Result<EmpiricalSummary> {
    if !(k >= 4.0) {
        return Err(Error::Invalid("k must be at least 4".into()));
    }
    let sample = slope_gaps(n, k, max_depth)?;
    Ok(empirical_summary(&sample, &Distribution::new(n)?))
}

/// Count of distinct strip vectors by rounded key, for order-independence checks.
pub fn key_multiset(vectors: &[PlaneVector]) -> HashMap<(i64, i64), usize> {
    let mut m = HashMap::new();
    for v in vectors {
        *m.entry(VectorSet::key(*v)).or_insert(0) += 1;
    }
    m
}
