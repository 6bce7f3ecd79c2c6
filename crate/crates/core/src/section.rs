//! Poincare section `Omega1 u Omega2`, its partition into regions and the return time.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{check_n, Error, Result};
use crate::geometry::{edge_h, edge_v, Mat2x2, PlaneVector};
use crate::polygon::{self, Slab};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum SectionComponent {
    Omega1,
    Omega2,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SectionPoint {
    pub component: SectionComponent,
    pub x: f64,
    pub y: f64,
}

impl SectionPoint {
    pub fn omega1(x: f64, y: f64) -> Self {
        Self {
            component: SectionComponent::Omega1,
            x,
            y,
        }
    }

    pub fn omega2(x: f64, y: f64) -> Self {
        Self {
            component: SectionComponent::Omega2,
            x,
            y,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Relation {
    AtMost,
    Greater,
}

/// `a x + b y <= 1` or `a x + b y > 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Constraint {
    pub a: f64,
    pub b: f64,
    pub relation: Relation,
}

impl Constraint {
    fn at_most(a: f64, b: f64) -> Self {
        Self {
            a,
            b,
            relation: Relation::AtMost,
        }
    }

    fn greater(a: f64, b: f64) -> Self {
        Self {
            a,
            b,
            relation: Relation::Greater,
        }
    }

    pub fn holds(&self, x: f64, y: f64) -> bool {
        let v = self.a * x + self.b * y;
        match self.relation {
            Relation::AtMost => v <= 1.0,
            Relation::Greater => v > 1.0,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Region {
    pub index: usize,
    pub constraints: Vec<Constraint>,
    pub winner: PlaneVector,
    /// Closure of the cell, counter-clockwise.
    pub polygon: Vec<PlaneVector>,
    #[serde(skip)]
    pub slabs: Vec<Slab>,
}

impl Region {
    pub fn accepts(&self, x: f64, y: f64) -> bool {
        self.constraints.iter().all(|c| c.holds(x, y))
    }

    pub fn area(&self) -> f64 {
        polygon::area(&self.polygon)
    }
}

/// Which cell a point falls in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Cell {
    Region(usize),
    Omega2,
}

/// Slope of the lower edge of `Omega1`, `2(1 + cos(pi/n))`.
pub fn omega1_slope(n: usize) -> f64 {
    2.0 * (1.0 + (PI / n as f64).cos())
}

pub fn lambda_vectors(n: usize) -> Result<Vec<PlaneVector>> {
    check_n(n)?;
    let mut out = vec![PlaneVector::new(0.0, 1.0)];
    for i in 2..n {
        let k = i as i64 - 2;
        out.push(PlaneVector::new(edge_h(n, k)?, edge_v(n, k)?));
    }
    out.push(PlaneVector::new(edge_h(n, 1)?, 1.0));
    // exact values where the closed forms are known
    out[1] = PlaneVector::new(1.0, 1.0);
    Ok(out)
}

pub fn section_contains(n: usize, p: &SectionPoint) -> bool {
    if !(p.x > 0.0 && p.x <= 1.0 && p.y <= 1.0) {
        return false;
    }
    match p.component {
        SectionComponent::Omega1 => p.y > 1.0 - omega1_slope(n) * p.x,
        SectionComponent::Omega2 => p.y > 1.0 - p.x,
    }
}

fn omega1_triangle(n: usize) -> Vec<PlaneVector> {
    vec![
        PlaneVector::new(0.0, 1.0),
        PlaneVector::new(1.0, 1.0 - omega1_slope(n)),
        PlaneVector::new(1.0, 1.0),
    ]
}

fn region_polygon(n: usize, constraints: &[Constraint]) -> Vec<PlaneVector> {
    constraints
        .iter()
        .fold(omega1_triangle(n), |poly, c| match c.relation {
            Relation::AtMost => polygon::clip(&poly, c.a, c.b, 1.0),
            Relation::Greater => polygon::clip(&poly, -c.a, -c.b, -1.0),
        })
}

pub fn build_partition(n: usize) -> Result<Vec<Region>> {
    let lambdas = lambda_vectors(n)?;
    let h1 = edge_h(n, 1)?;
    let mut out = Vec::with_capacity(n);
    for i in 1..=n {
        let constraints = if i == 1 {
            vec![Constraint::greater(1.0, 1.0)]
        } else if i == n {
            vec![Constraint::at_most(h1, 1.0)]
        } else {
            let k = i as i64 - 2;
            let w = lambdas[i - 1];
            vec![
                Constraint::at_most(w.x, w.y),
                Constraint::greater(edge_h(n, k + 1)?, edge_v(n, k + 1)?),
                Constraint::greater(h1, 1.0),
            ]
        };
        let poly = region_polygon(n, &constraints);
        let slabs = polygon::slabs(&poly);
        out.push(Region {
            index: i,
            constraints,
            winner: lambdas[i - 1],
            polygon: poly,
            slabs,
        });
    }
    Ok(out)
}

/// Cached partition for one `n`.
#[derive(Debug, Clone)]
pub struct Section {
    pub n: usize,
    pub regions: Vec<Region>,
}

impl Section {
    pub fn new(n: usize) -> Result<Self> {
        Ok(Self {
            n,
            regions: build_partition(n)?,
        })
    }

    pub fn region(&self, i: usize) -> &Region {
        &self.regions[i - 1]
    }

    pub fn classify(&self, p: &SectionPoint) -> Result<Cell> {
        if !section_contains(self.n, p) {
            return Err(Error::OutsideSection { x: p.x, y: p.y });
        }
        if p.component == SectionComponent::Omega2 {
            return Ok(Cell::Omega2);
        }
        self.regions
            .iter()
            .rev()
            .find(|r| r.accepts(p.x, p.y))
            .map(|r| Cell::Region(r.index))
            .ok_or(Error::OutsideSection { x: p.x, y: p.y })
    }

    pub fn winner(&self, p: &SectionPoint) -> Result<PlaneVector> {
        Ok(match self.classify(p)? {
            Cell::Omega2 => PlaneVector::new(0.0, 1.0),
            Cell::Region(i) => self.region(i).winner,
        })
    }

    pub fn return_time(&self, p: &SectionPoint) -> Result<f64> {
        let w = self.winner(p)?;
        Ok(w.y / (p.x * (w.x * p.x + w.y * p.y)))
    }
}

pub fn classify(n: usize, p: &SectionPoint) -> Result<Cell> {
    Section::new(n)?.classify(p)
}

pub fn return_time(n: usize, p: &SectionPoint) -> Result<f64> {
    Section::new(n)?.return_time(p)
}

/// Candidate with the smallest positive slope after applying `M_{x,y}`,
/// among those with `0 < a x + b y <= 1`. Parallel ties go to the shorter vector.
pub fn winner_oracle(n: usize, p: &SectionPoint, candidates: &[PlaneVector]) -> Result<PlaneVector> {
    check_n(n)?;
    if !section_contains(n, p) {
        return Err(Error::OutsideSection { x: p.x, y: p.y });
    }
    let m = Mat2x2::section(p.x, p.y);
    let mut best: Option<(f64, PlaneVector)> = None;
    for &c in candidates {
        let img = m.apply(c);
        if !(img.x > 0.0 && img.x <= 1.0) {
            continue;
        }
        let slope = img.y / img.x;
        if slope <= 0.0 {
            continue;
        }
        best = match best {
            None => Some((slope, c)),
            Some((s, b)) => {
                let tie = (slope - s).abs() <= 1e-12 * s;
                if (tie && c.norm() < b.norm()) || (!tie && slope < s) {
                    Some((slope, c))
                } else {
                    Some((s, b))
                }
            }
        };
    }
    best.map(|(_, c)| c).ok_or(Error::NoCandidate)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lambda_examples() {
        let l = lambda_vectors(7).unwrap();
        assert_eq!(l.len(), 7);
        assert_eq!(l[0], PlaneVector::new(0.0, 1.0));
        assert_eq!(l[1], PlaneVector::new(1.0, 1.0));
        assert!((l[6].x - 2.801937735804838).abs() < 1e-12);
        assert_eq!(l[6].y, 1.0);
        assert!(l[1].slope() > l[2].slope());
    }

    #[test]
    fn containment_examples() {
        assert!(section_contains(7, &SectionPoint::omega2(1.0, 1.0)));
        assert!(!section_contains(7, &SectionPoint::omega2(0.5, 0.5)));
        assert!(!section_contains(7, &SectionPoint::omega1(0.2, -0.4)));
    }

    #[test]
    fn partition_areas_n7() {
        let s = Section::new(7).unwrap();
        assert_eq!(s.regions.len(), 7);
        let total: f64 = s.regions.iter().map(Region::area).sum();
        assert!((total - (1.0 + (PI / 7.0).cos())).abs() < 1e-12);
        assert_eq!(Section::new(3).unwrap().regions.len(), 3);
    }

    #[test]
    fn classify_examples() {
        let s = Section::new(7).unwrap();
        let h1 = edge_h(7, 1).unwrap();
        assert_eq!(s.classify(&SectionPoint::omega1(1.0, 0.5)).unwrap(), Cell::Region(1));
        assert_eq!(s.classify(&SectionPoint::omega2(0.7, 0.9)).unwrap(), Cell::Omega2);
        assert_eq!(
            s.classify(&SectionPoint::omega1(1.0, -h1 + 0.5)).unwrap(),
            Cell::Region(7)
        );
        assert_eq!(s.classify(&SectionPoint::omega1(1.0, -1.0)).unwrap(), Cell::Region(3));
        assert!(s.classify(&SectionPoint::omega1(0.2, -0.4)).is_err());
    }

    #[test]
    fn return_time_examples() {
        let s = Section::new(7).unwrap();
        assert_eq!(s.return_time(&SectionPoint::omega2(1.0, 1.0)).unwrap(), 1.0);
        assert!((s.return_time(&SectionPoint::omega2(0.5, 0.8)).unwrap() - 2.5).abs() < 1e-15);
        assert_eq!(s.return_time(&SectionPoint::omega1(1.0, 0.5)).unwrap(), 2.0);
    }

    #[test]
    fn oracle_on_lambda_list() {
        let l = lambda_vectors(7).unwrap();
        let w = winner_oracle(7, &SectionPoint::omega1(1.0, 0.5), &l).unwrap();
        assert_eq!(w, PlaneVector::new(0.0, 1.0));
        let w = winner_oracle(7, &SectionPoint::omega1(1.0, -2.0), &l).unwrap();
        assert_eq!(w, l[6]);
        assert_eq!(
            winner_oracle(7, &SectionPoint::omega1(1.0, 0.5), &[PlaneVector::new(1.0, -1.0)]),
            Err(Error::NoCandidate)
        );
    }
}
