//! Exact CDF and PDF of the return time under normalized area on the section.
//!
//! For a cell with winner `(a, b)`, `R < t` exactly when `y > 1/(t x) - (a/b) x`.
//! Each cell is cut into vertical slabs; on a slab the top and bottom edges are
//! lines, so every area is an elementary integral.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{check_n, Result};
use crate::polygon::{Line, Slab};
use crate::quadrature;
use crate::section::{Cell, Region, Section};

/// How an interval endpoint moves with `t`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum Endpoint {
    /// Slab boundary (a vertex abscissa).
    Fixed,
    /// Intersection of the level curve with this edge line.
    OnLine(Line),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Interval {
    pub x_lo: f64,
    pub x_hi: f64,
    pub lo: Endpoint,
    pub hi: Endpoint,
}

#[derive(Debug, Clone, Serialize)]
pub struct LevelIntervals {
    pub t: f64,
    pub cell: Cell,
    pub intervals: Vec<Interval>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum EventKind {
    Vertex,
    Tangency,
}

/// A time at which the level curve passes a vertex of a cell or becomes tangent to one of its edges.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Event {
    pub region: usize,
    pub t: f64,
    pub kind: EventKind,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ExtremumKind {
    Max,
    Min,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Extremum {
    pub t: f64,
    pub f: f64,
    pub kind: ExtremumKind,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TableRow {
    pub t: f64,
    pub pdf: f64,
    pub cdf: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct DistributionTable {
    pub n: usize,
    pub z: f64,
    pub rows: Vec<TableRow>,
}

/// Total area of `Omega1` and `Omega2`.
pub fn normalization(n: usize) -> f64 {
    1.5 + (PI / n as f64).cos()
}

/// Roots of `(r + s) x^2 + c x - 1/t = 0` strictly inside `(lo, hi)`.
fn crossings(line: &Line, r: f64, t: f64, lo: f64, hi: f64) -> Vec<f64> {
    let a = r + line.s;
    let b = line.c;
    let c = -1.0 / t;
    let mut roots = Vec::with_capacity(2);
    if a.abs() < 1e-300 {
        if b != 0.0 {
            roots.push(-c / b);
        }
    } else {
        let mut disc = b * b - 4.0 * a * c;
        if disc < 0.0 && disc > -1e-12 {
            disc = 0.0;
        }
        if disc >= 0.0 {
            let q = -0.5 * (b + disc.sqrt().copysign(b));
            if q != 0.0 {
                roots.push(q / a);
                roots.push(c / q);
            }
        }
    }
    roots.retain(|&x| x > lo && x < hi);
    roots
}

struct SlabSweep {
    area: f64,
    inside: Vec<Interval>,
}

fn sweep_slab(slab: &Slab, r: f64, t: f64) -> SlabSweep {
    let mut cuts: Vec<(f64, Endpoint)> = vec![(slab.x_lo, Endpoint::Fixed), (slab.x_hi, Endpoint::Fixed)];
    for line in [slab.top, slab.bot] {
        for x in crossings(&line, r, t, slab.x_lo, slab.x_hi) {
            cuts.push((x, Endpoint::OnLine(line)));
        }
    }
    cuts.sort_by(|p, q| p.0.total_cmp(&q.0));

    let level = |x: f64| 1.0 / (t * x) - r * x;
    let line_integral = |l: &Line, p: f64, q: f64| 0.5 * l.s * (q * q - p * p) + l.c * (q - p);
    let level_integral = |p: f64, q: f64| (q / p).ln() / t - 0.5 * r * (q * q - p * p);

    let mut area = 0.0;
    let mut inside: Vec<Interval> = Vec::new();
    for w in cuts.windows(2) {
        let ((p, pk), (q, qk)) = (w[0], w[1]);
        if q <= p {
            continue;
        }
        let m = 0.5 * (p + q);
        let ys = level(m);
        if ys >= slab.top.eval(m) {
            continue;
        }
        if ys > slab.bot.eval(m) {
            area += line_integral(&slab.top, p, q) - level_integral(p, q);
            match inside.last_mut() {
                Some(last) if last.x_hi == p => {
                    last.x_hi = q;
                    last.hi = qk;
                }
                _ => inside.push(Interval {
                    x_lo: p,
                    x_hi: q,
                    lo: pk,
                    hi: qk,
                }),
            }
        } else {
            area += line_integral(&slab.top, p, q) - line_integral(&slab.bot, p, q);
        }
    }
    SlabSweep { area, inside }
}

/// Rate `dx/dt` of an endpoint riding on `line` at abscissa `x`.
fn endpoint_speed(kind: &Endpoint, x: f64, r: f64, t: f64) -> f64 {
    match kind {
        Endpoint::Fixed => 0.0,
        Endpoint::OnLine(l) => (1.0 / (t * t * x)) / (-1.0 / (t * x * x) - (r + l.s)),
    }
}

/// Distribution of the return time for one `n`.
#[derive(Debug, Clone)]
pub struct Distribution {
    pub section: Section,
    pub z: f64,
}

impl Distribution {
    pub fn new(n: usize) -> Result<Self> {
        check_n(n)?;
        Ok(Self {
            section: Section::new(n)?,
            z: normalization(n),
        })
    }

    pub fn n(&self) -> usize {
        self.section.n
    }

    fn cell_region(&self, cell: Cell) -> &Region {
        match cell {
            Cell::Omega2 => self.section.region(1),
            Cell::Region(i) => self.section.region(i),
        }
    }

    /// Cells of the section with their measure weight; `Omega2` coincides with `P1`.
    fn weighted_regions(&self) -> impl Iterator<Item = (&Region, f64)> {
        self.section
            .regions
            .iter()
            .map(|r| (r, if r.index == 1 { 2.0 } else { 1.0 }))
    }

    pub fn level_set_intervals(&self, cell: Cell, t: f64) -> LevelIntervals {
        let region = self.cell_region(cell);
        let r = region.winner.x / region.winner.y;
        let mut intervals: Vec<Interval> = Vec::new();
        for slab in &region.slabs {
            for iv in sweep_slab(slab, r, t).inside {
                match intervals.last_mut() {
                    Some(last) if last.x_hi == iv.x_lo => {
                        last.x_hi = iv.x_hi;
                        last.hi = iv.hi;
                    }
                    _ => intervals.push(iv),
                }
            }
        }
        LevelIntervals { t, cell, intervals }
    }

    /// Area of `{R < t}` in one cell.
    pub fn sublevel_area(&self, cell: Cell, t: f64) -> f64 {
        if t <= 1.0 {
            return 0.0;
        }
        let region = self.cell_region(cell);
        let r = region.winner.x / region.winner.y;
        region.slabs.iter().map(|s| sweep_slab(s, r, t).area).sum()
    }

    pub fn cdf(&self, t: f64) -> f64 {
        if t <= 1.0 {
            return 0.0;
        }
        let total: f64 = self
            .weighted_regions()
            .map(|(reg, w)| w * self.sublevel_area(Cell::Region(reg.index), t))
            .sum();
        total / self.z
    }

    fn log_sum(&self, t: f64) -> f64 {
        self.weighted_regions()
            .map(|(reg, w)| {
                w * self
                    .level_set_intervals(Cell::Region(reg.index), t)
                    .intervals
                    .iter()
                    .map(|iv| (iv.x_hi / iv.x_lo).ln())
                    .sum::<f64>()
            })
            .sum()
    }

    pub fn pdf(&self, t: f64) -> f64 {
        if t <= 1.0 {
            return 0.0;
        }
        self.log_sum(t) / (t * t * self.z)
    }

    /// Analytic derivative of the density away from event times.
    pub fn pdf_derivative(&self, t: f64) -> f64 {
        if t <= 1.0 {
            return 0.0;
        }
        let mut logs = 0.0;
        let mut rates = 0.0;
        for (reg, w) in self.weighted_regions() {
            let r = reg.winner.x / reg.winner.y;
            for iv in self.level_set_intervals(Cell::Region(reg.index), t).intervals {
                logs += w * (iv.x_hi / iv.x_lo).ln();
                rates += w
                    * (endpoint_speed(&iv.hi, iv.x_hi, r, t) / iv.x_hi
                        - endpoint_speed(&iv.lo, iv.x_lo, r, t) / iv.x_lo);
            }
        }
        (-2.0 * logs / t + rates) / (t * t * self.z)
    }

    /// Derivatives just left and right of `t`, at offset `delta`.
    pub fn one_sided_derivatives(&self, t: f64, delta: f64) -> (f64, f64) {
        (self.pdf_derivative(t - delta), self.pdf_derivative(t + delta))
    }

    /// Vertex passages and edge tangencies of the level curve, sorted by time.
    pub fn events(&self) -> Vec<Event> {
        let mut out = Vec::new();
        for reg in &self.section.regions {
            let (a, b) = (reg.winner.x, reg.winner.y);
            let r = a / b;
            let poly = &reg.polygon;
            let m = poly.len();
            for k in 0..m {
                let p = poly[k];
                if p.x > 1e-12 {
                    let d = p.x * (a * p.x + b * p.y);
                    if d > 1e-14 {
                        out.push(Event {
                            region: reg.index,
                            t: b / d,
                            kind: EventKind::Vertex,
                        });
                    }
                }
                let q = poly[(k + 1) % m];
                if (p.x - q.x).abs() < 1e-12 {
                    continue;
                }
                let line = Line::through(p, q);
                let s = r + line.s;
                if s < 0.0 && line.c != 0.0 {
                    let xt = -line.c / (2.0 * s);
                    if xt > p.x.min(q.x) + 1e-12 && xt < p.x.max(q.x) - 1e-12 {
                        out.push(Event {
                            region: reg.index,
                            t: -4.0 * s / (line.c * line.c),
                            kind: EventKind::Tangency,
                        });
                    }
                }
            }
        }
        out.sort_by(|p, q| p.t.total_cmp(&q.t));
        out
    }

    /// Event times merged within `tol`.
    pub fn event_times(&self, tol: f64) -> Vec<f64> {
        let mut ts: Vec<f64> = Vec::new();
        for e in self.events() {
            if ts.last().map_or(true, |&l| e.t - l > tol) {
                ts.push(e.t);
            }
        }
        ts
    }

    /// Integral of `R` over each cell, `Omega2` listed separately.
    pub fn covolume_parts(&self, tol: f64) -> Result<Vec<(Cell, f64)>> {
        let mut parts = Vec::new();
        for reg in &self.section.regions {
            let (a, b) = (reg.winner.x, reg.winner.y);
            let mut total = 0.0;
            for slab in &reg.slabs {
                let f = |x: f64| {
                    let lo = a * x + b * slab.bot.eval(x);
                    let gap = b * (slab.top.eval(x) - slab.bot.eval(x));
                    (gap / lo).ln_1p() / x
                };
                total += quadrature::integrate(f, slab.x_lo, slab.x_hi, tol)?.value;
            }
            parts.push((Cell::Region(reg.index), total));
            if reg.index == 1 {
                parts.push((Cell::Omega2, total));
            }
        }
        Ok(parts)
    }

    pub fn covolume(&self, tol: f64) -> Result<f64> {
        Ok(self.covolume_parts(tol)?.iter().map(|p| p.1).sum())
    }

    /// Extrema of the density on `[t_lo, t_hi]`, each located to `1e-9` in `t`.
    pub fn find_local_extrema(&self, t_lo: f64, t_hi: f64, grid_size: usize) -> Vec<Extremum> {
        let steps = grid_size.max(3) - 1;
        let mut grid: Vec<f64> = (0..=steps)
            .map(|k| t_lo + (t_hi - t_lo) * k as f64 / steps as f64)
            .collect();
        grid.extend(self.event_times(1e-12).into_iter().filter(|&t| t > t_lo && t < t_hi));
        grid.sort_by(f64::total_cmp);
        grid.dedup();
        let vals: Vec<f64> = grid.iter().map(|&t| self.pdf(t)).collect();

        let mut out = Vec::new();
        for j in 1..grid.len() - 1 {
            let (l, c, r) = (vals[j - 1], vals[j], vals[j + 1]);
            let kind = if c > l && c >= r {
                ExtremumKind::Max
            } else if c < l && c <= r {
                ExtremumKind::Min
            } else {
                continue;
            };
            let t = self.polish(grid[j - 1], grid[j + 1], kind);
            out.push(Extremum {
                t,
                f: self.pdf(t),
                kind,
            });
        }
        out
    }

    fn polish(&self, mut lo: f64, mut hi: f64, kind: ExtremumKind) -> f64 {
        let better = |p: f64, q: f64| match kind {
            ExtremumKind::Max => p > q,
            ExtremumKind::Min => p < q,
        };
        while hi - lo > 1e-9 {
            let m1 = lo + (hi - lo) / 3.0;
            let m2 = hi - (hi - lo) / 3.0;
            if better(self.pdf(m1), self.pdf(m2)) {
                hi = m2;
            } else {
                lo = m1;
            }
        }
        0.5 * (lo + hi)
    }

    /// Area of `{R >= t}` in one cell.
    pub fn superlevel_area(&self, cell: Cell, t: f64) -> f64 {
        let region = self.cell_region(cell);
        region.area() - self.sublevel_area(cell, t)
    }

    /// Mean of `t^2 (1 - F(t))` over `[big_t, 2 big_t]`. The survival
    /// function decays like `t^-2`, the density like `t^-3`.
    pub fn tail_estimate(&self, big_t: f64) -> Result<f64> {
        let survival = |t: f64| {
            self.weighted_regions()
                .map(|(reg, w)| w * self.superlevel_area(Cell::Region(reg.index), t))
                .sum::<f64>()
                / self.z
        };
        let est = quadrature::integrate(|t| t * t * survival(t), big_t, 2.0 * big_t, 1e-9 * big_t)?;
        Ok(est.value / big_t)
    }

    pub fn sample(&self, t_grid: &[f64], refine_stamps: bool) -> DistributionTable {
        let mut ts: Vec<f64> = t_grid.to_vec();
        if refine_stamps && !ts.is_empty() {
            let (lo, hi) = (ts[0], ts[ts.len() - 1]);
            for e in self.event_times(1e-12) {
                for t in [e - 1e-6, e, e + 1e-6] {
                    if t > lo && t < hi {
                        ts.push(t);
                    }
                }
            }
            ts.sort_by(f64::total_cmp);
            ts.dedup();
        }
        let rows = ts
            .iter()
            .map(|&t| TableRow {
                t,
                pdf: self.pdf(t),
                cdf: self.cdf(t),
            })
            .collect();
        DistributionTable {
            n: self.n(),
            z: self.z,
            rows,
        }
    }
}

pub fn cdf(n: usize, t: f64) -> Result<f64> {
    Ok(Distribution::new(n)?.cdf(t))
}

pub fn pdf(n: usize, t: f64) -> Result<f64> {
    Ok(Distribution::new(n)?.pdf(t))
}

pub fn covolume(n: usize) -> Result<f64> {
    Distribution::new(n)?.covolume(1e-11)
}

pub fn sample_distribution(n: usize, t_grid: &[f64], refine_stamps: bool) -> Result<DistributionTable> {
    Ok(Distribution::new(n)?.sample(t_grid, refine_stamps))
}
