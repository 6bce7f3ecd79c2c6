//! Invariant suite for one `n`, used by the `verify` command.

use std::f64::consts::PI;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::distribution::Distribution;
use crate::enumerate::{oracle_candidates, orbit_enumerate, covering_radius};
use crate::error::Result;
use crate::geometry::{build_staircase, normalizing_matrix, polygon_generators, veech_generators, Mat2x2, PlaneVector};
use crate::nondiff;
use crate::section::{omega1_slope, winner_oracle, Cell, Region, Section, SectionPoint};

/// Reference kink counts for n = 4..=11.
pub const REFERENCE_KINK_COUNTS: [usize; 8] = [7, 9, 13, 15, 18, 20, 23, 25];

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

fn check(name: &str, pass: bool, detail: String) -> Check {
    Check {
        name: name.to_string(),
        pass,
        detail,
    }
}

/// Largest deviation among the edge and generator identities.
pub fn geometry_residual(n: usize) -> Result<f64> {
    let g = build_staircase(n)?;
    let c = (PI / n as f64).cos();
    let mut worst: f64 = 0.0;
    for i in 1..g.h.len() as i64 {
        worst = worst.max((g.v_ext(i - 1) + g.v_ext(i) - g.h_ext(i)).abs());
    }
    for i in 0..g.v.len() as i64 {
        worst = worst.max(((g.h_ext(i) + g.h_ext(i + 1)) / g.v_ext(i) - (2.0 + 2.0 * c)).abs());
    }
    let ni = n as i64;
    for i in -2..=ni + 2 {
        worst = worst.max((g.h_ext(ni - i) - g.h_ext(i - 1)).abs());
        worst = worst.max((g.v_ext(ni - i) - g.v_ext(i - 2)).abs());
    }
    let m = normalizing_matrix(n)?;
    let mi = m.inverse().expect("invertible");
    let (s, r) = polygon_generators(n)?;
    let vg = veech_generators(n)?;
    worst = worst.max((m * s * mi).max_abs_diff(&vg.s_prime));
    worst = worst.max((m * r * mi).max_abs_diff(&vg.r_prime));
    worst = worst.max(vg.s2.max_abs_diff(&Mat2x2::new(1.0, 0.0, 1.0, 1.0)));
    worst = worst.max((vg.r_prime.trace() - 2.0 * c).abs());
    worst = worst.max((vg.r_prime.det() - 1.0).abs());
    let s2i = vg.s2.inverse().expect("unimodular");
    worst = worst.max(s2i.max_abs_diff(&Mat2x2::horocycle(1.0)));
    Ok(worst)
}

/// Uniform point of `Omega1`.
pub fn sample_omega1<R: Rng>(n: usize, rng: &mut R) -> SectionPoint {
    let c = omega1_slope(n);
    loop {
        let x: f64 = 1.0 - rng.gen::<f64>();
        let y = 1.0 - c + c * rng.gen::<f64>();
        let p = SectionPoint::omega1(x, y);
        if y > 1.0 - c * x {
            return p;
        }
    }
}

/// Uniform interior point of a region, by rejection from its bounding box.
pub fn sample_region<R: Rng>(region: &Region, rng: &mut R) -> SectionPoint {
    let (mut x0, mut x1, mut y0, mut y1) = (f64::MAX, f64::MIN, f64::MAX, f64::MIN);
    for v in &region.polygon {
        x0 = x0.min(v.x);
        x1 = x1.max(v.x);
        y0 = y0.min(v.y);
        y1 = y1.max(v.y);
    }
    loop {
        let x = rng.gen_range(x0..x1);
        let y = rng.gen_range(y0..y1);
        if x > 0.0 && region.slabs.iter().any(|s| x > s.x_lo && x < s.x_hi && y > s.bot.eval(x) && y < s.top.eval(x)) {
            return SectionPoint::omega1(x, y);
        }
    }
}

/// Point of a region on the line `x = 1`, strictly inside its slice.
pub fn sample_region_at_one<R: Rng>(region: &Region, rng: &mut R) -> Option<SectionPoint> {
    let slab = region.slabs.iter().find(|s| s.x_hi == 1.0)?;
    let (lo, hi) = (slab.bot.eval(1.0), slab.top.eval(1.0));
    if hi - lo < 1e-9 {
        return None;
    }
    loop {
        let y = rng.gen_range(lo..hi);
        if y > lo && y < hi {
            return Some(SectionPoint::omega1(1.0, y));
        }
    }
}

fn same_vector(a: PlaneVector, b: PlaneVector) -> bool {
    (a.x - b.x).abs() < 1e-9 && (a.y - b.y).abs() < 1e-9
}

/// Fraction of samples (on and off `x = 1`) where the brute-force winner is the region's winner.
pub fn oracle_agreement(n: usize, per_region: usize, seed: u64) -> Result<(usize, usize)> {
    let section = Section::new(n)?;
    let cands = oracle_candidates(n)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut ok, mut total) = (0, 0);
    for reg in &section.regions {
        let mut points: Vec<SectionPoint> = (0..per_region).map(|_| sample_region(reg, &mut rng)).collect();
        points.extend((0..per_region).filter_map(|_| sample_region_at_one(reg, &mut rng)));
        for p in points {
            total += 1;
            let agrees = section.classify(&p)? == Cell::Region(reg.index)
                && winner_oracle(n, &p, &cands).is_ok_and(|w| same_vector(w, reg.winner));
            if agrees {
                ok += 1;
            }
        }
    }
    Ok((ok, total))
}

pub fn run_checks(n: usize, seed: u64) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let res = geometry_residual(n)?;
    out.push(check("geometry identities", res < 1e-12, format!("max residual {res:.3e}")));

    let section = Section::new(n)?;
    let mut bad = 0;
    let mut min_rt = f64::INFINITY;
    for _ in 0..100_000 {
        let p = sample_omega1(n, &mut rng);
        let hits = section.regions.iter().filter(|r| r.accepts(p.x, p.y)).count();
        if hits != 1 {
            bad += 1;
        }
        min_rt = min_rt.min(section.return_time(&p)?);
    }
    out.push(check("partition tiles Omega1", bad == 0, format!("{bad} of 100000 points not in exactly one region")));
    out.push(check("return time >= 1", min_rt >= 1.0 - 1e-12, format!("min {min_rt:.15}")));

    let w: Vec<PlaneVector> = section.regions.iter().map(|r| r.winner).collect();
    let slopes_ok = w[1..].windows(2).all(|p| p[0].slope() > p[1].slope());
    // (1 - a)/b is the upper end of each region's slice of x = 1, so it decreases with i
    let f = |v: PlaneVector| (1.0 - v.x) / v.y;
    let f_ok = w.windows(2).all(|p| f(p[0]) > f(p[1]));
    let cond4 = w.iter().all(|v| v.x / v.y < omega1_slope(n));
    out.push(check("winner orderings", slopes_ok && f_ok && cond4, format!("slopes {slopes_ok}, f {f_ok}, a/b bound {cond4}")));

    if n <= 12 {
        let (ok, total) = oracle_agreement(n, 200, seed)?;
        out.push(check("winner oracle agreement", ok == total, format!("{ok}/{total}")));
        let k = 16.0;
        let radius = covering_radius(n, k)?;
        let a = orbit_enumerate(n, k, usize::MAX, radius)?;
        out.push(check("orbit enumeration stable", a.stable, format!("depth {} of {}", a.stabilized_depth, a.depth_reached)));
    }

    let dist = Distribution::new(n)?;
    let norm = dist.cdf(1e6);
    let support = [0.5, 0.9, 1.0].iter().all(|&t| dist.pdf(t) == 0.0 && dist.cdf(t) == 0.0);
    out.push(check("normalization and support", (norm - 1.0).abs() < 1e-6 && support, format!("cdf(1e6) = {norm:.12}")));

    let events = dist.event_times(1e-12);
    let mut worst: f64 = 0.0;
    let mut dup: f64 = 0.0;
    let mut tested = 0;
    while tested < 100 {
        let t = rng.gen_range(1.0..15.0);
        if events.iter().any(|e| (e - t).abs() < 1e-3) {
            continue;
        }
        tested += 1;
        let h = 1e-5;
        worst = worst.max((dist.pdf(t) - (dist.cdf(t + h) - dist.cdf(t - h)) / (2.0 * h)).abs());
        dup = dup.max((dist.sublevel_area(Cell::Omega2, t) - dist.sublevel_area(Cell::Region(1), t)).abs());
    }
    out.push(check("pdf matches cdf difference", worst < 1e-5, format!("max deviation {worst:.3e}")));
    out.push(check("Omega2 equals P1", dup == 0.0, format!("max difference {dup:.3e}")));

    let vol = dist.covolume(1e-11)?;
    let reference = (n as f64 - 1.0) * PI * PI / n as f64;
    let rel = (vol - reference).abs() / reference;
    out.push(check("covolume", rel < 1e-5, format!("{vol:.12} vs {reference:.12}, relative error {rel:.2e}")));

    if n >= 4 {
        let rep = nondiff::analyze(n, 1e-4)?;
        let (lower, upper) = nondiff::bounds(n);
        out.push(check(
            "kink count within bounds",
            lower <= rep.count as f64 && rep.count <= upper,
            format!("{lower} <= {} <= {upper}", rep.count),
        ));
        if (4..=11).contains(&n) {
            let expected = REFERENCE_KINK_COUNTS[n - 4];
            out.push(check("kink count matches table", rep.count == expected, format!("{} vs {expected}", rep.count)));
        }
        let t_hi = rep.deduped.last().copied().unwrap_or(1.0) * 1.2 + 1.0;
        let found = nondiff::blind_scan(&dist, 0.9, t_hi, 1e-3, 1e-4);
        let far = found
            .iter()
            .filter(|t| rep.deduped.iter().all(|s| (*s - **t).abs() > 1e-6))
            .count();
        out.push(check("blind scan finds only stamps", far == 0, format!("{} kinks found, {far} away from stamps", found.len())));
    }
    Ok(out)
}
