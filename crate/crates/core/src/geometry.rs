//! Staircase model of the regular 2n-gon.
//!
//! Edge lengths use the closed trigonometric forms
//! `h_i = csc(pi/2n) sin(pi(1+2i)/2n)` and `v_j = csc(pi/n) sin(pi(1+j)/n)`,
//! which are valid for every integer index.

use std::f64::consts::PI;
use std::ops::{Add, Mul, Neg, Sub};

use serde::Serialize;

use crate::error::{check_n, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PlaneVector {
    pub x: f64,
    pub y: f64,
}

impl PlaneVector {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn slope(self) -> f64 {
        self.y / self.x
    }

    pub fn dot(self, other: Self) -> f64 {
        self.x * other.x + self.y * other.y
    }
}

impl Add for PlaneVector {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for PlaneVector {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::new(self.x - o.x, self.y - o.y)
    }
}

impl Neg for PlaneVector {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.x, -self.y)
    }
}

impl Mul<PlaneVector> for f64 {
    type Output = PlaneVector;
    fn mul(self, v: PlaneVector) -> PlaneVector {
        PlaneVector::new(self * v.x, self * v.y)
    }
}

/// Row-major 2x2 matrix `[[a, b], [c, d]]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Mat2x2 {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

impl Mat2x2 {
    pub const IDENTITY: Self = Self::new(1.0, 0.0, 0.0, 1.0);

    pub const fn new(a: f64, b: f64, c: f64, d: f64) -> Self {
        Self { a, b, c, d }
    }

    pub fn det(&self) -> f64 {
        self.a * self.d - self.b * self.c
    }

    pub fn trace(&self) -> f64 {
        self.a + self.d
    }

    /// Inverse; `None` when the determinant is zero.
    pub fn inverse(&self) -> Option<Self> {
        let det = self.det();
        if det == 0.0 || !det.is_finite() {
            return None;
        }
        Some(Self::new(self.d / det, -self.b / det, -self.c / det, self.a / det))
    }

    pub fn apply(&self, v: PlaneVector) -> PlaneVector {
        PlaneVector::new(self.a * v.x + self.b * v.y, self.c * v.x + self.d * v.y)
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(Self::IDENTITY, |acc, _| acc * *self)
    }

    /// `A^k` for `A` in SL(2,R) with trace `2 cos(theta)`, `sin(theta) != 0`:
    /// `A^k = (sin(k theta) A - sin((k-1) theta) I) / sin(theta)`.
    pub fn elliptic_pow(&self, theta: f64, k: i64) -> Self {
        let s = theta.sin();
        let p = (k as f64 * theta).sin() / s;
        let q = ((k - 1) as f64 * theta).sin() / s;
        Self::new(p * self.a - q, p * self.b, p * self.c, p * self.d - q)
    }

    /// Largest absolute entrywise difference.
    pub fn max_abs_diff(&self, o: &Self) -> f64 {
        [self.a - o.a, self.b - o.b, self.c - o.c, self.d - o.d]
            .iter()
            .fold(0.0_f64, |m, e| m.max(e.abs()))
    }

    /// Spectral norm.
    pub fn operator_norm(&self) -> f64 {
        let s = self.a * self.a + self.b * self.b + self.c * self.c + self.d * self.d;
        let det = self.det();
        let disc = (s * s - 4.0 * det * det).max(0.0).sqrt();
        ((s + disc) / 2.0).sqrt()
    }

    /// Horocycle element `[[1, 0], [-s, 1]]`.
    pub fn horocycle(s: f64) -> Self {
        Self::new(1.0, 0.0, -s, 1.0)
    }

    /// Section parametrization `[[x, y], [0, 1/x]]`.
    pub fn section(x: f64, y: f64) -> Self {
        Self::new(x, y, 0.0, 1.0 / x)
    }
}

impl Mul for Mat2x2 {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        Self::new(
            self.a * o.a + self.b * o.c,
            self.a * o.b + self.b * o.d,
            self.c * o.a + self.d * o.c,
            self.c * o.b + self.d * o.d,
        )
    }
}

/// `h_i` for any integer `i`.
pub fn edge_h(n: usize, i: i64) -> Result<f64> {
    check_n(n)?;
    let nf = n as f64;
    Ok((PI * (1 + 2 * i) as f64 / (2.0 * nf)).sin() / (PI / (2.0 * nf)).sin())
}

/// `v_j` for any integer `j`.
pub fn edge_v(n: usize, j: i64) -> Result<f64> {
    check_n(n)?;
    let nf = n as f64;
    Ok((PI * (1 + j) as f64 / nf).sin() / (PI / nf).sin())
}

#[derive(Debug, Clone, Serialize)]
pub struct StaircaseGeometry {
    pub n: usize,
    pub h: Vec<f64>,
    pub v: Vec<f64>,
    pub left_vertices: Vec<PlaneVector>,
    pub right_vertices: Vec<PlaneVector>,
}

impl StaircaseGeometry {
    pub fn h_ext(&self, i: i64) -> f64 {
        edge_h(self.n, i).expect("n validated at construction")
    }

    pub fn v_ext(&self, j: i64) -> f64 {
        edge_v(self.n, j).expect("n validated at construction")
    }
}

pub fn build_staircase(n: usize) -> Result<StaircaseGeometry> {
    check_n(n)?;
    let nh = n.div_ceil(2);
    let nv = n / 2;
    let mut h: Vec<f64> = (0..nh as i64).map(|i| edge_h(n, i)).collect::<Result<_>>()?;
    let mut v: Vec<f64> = (0..nv as i64).map(|j| edge_v(n, j)).collect::<Result<_>>()?;
    h[0] = 1.0;
    v[0] = 1.0;

    // L_k = (sum_{j<k} h_j, sum_{j<k} v_j), R_k = (sum_{j<=k} h_j, sum_{j<k} v_j)
    let mut left = vec![PlaneVector::new(0.0, 0.0)];
    let mut right = Vec::new();
    let (mut sx, mut sy) = (0.0, 0.0);
    for k in 0..nh {
        right.push(PlaneVector::new(sx + h[k], sy));
        if k < nv {
            sx += h[k];
            sy += v[k];
            left.push(PlaneVector::new(sx, sy));
        }
    }
    Ok(StaircaseGeometry {
        n,
        h,
        v,
        left_vertices: left,
        right_vertices: right,
    })
}

/// `M = [[1, -cot(pi/2n)], [0, sec((n-2)pi/2n)]]`, sending the 2n-gon to the staircase.
pub fn normalizing_matrix(n: usize) -> Result<Mat2x2> {
    check_n(n)?;
    let nf = n as f64;
    let cot = 1.0 / (PI / (2.0 * nf)).tan();
    let sec = 1.0 / ((nf - 2.0) * PI / (2.0 * nf)).cos();
    Ok(Mat2x2::new(1.0, -cot, 0.0, sec))
}

/// Shear `S` and rotation `R` generating the Veech group of the 2n-gon.
pub fn polygon_generators(n: usize) -> Result<(Mat2x2, Mat2x2)> {
    check_n(n)?;
    let t = PI / n as f64;
    let s = Mat2x2::new(1.0, -2.0 / (t / 2.0).tan(), 0.0, 1.0);
    let r = Mat2x2::new(t.cos(), t.sin(), -t.sin(), t.cos());
    Ok((s, r))
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct VeechGenerators {
    pub s_prime: Mat2x2,
    pub r_prime: Mat2x2,
    pub s2: Mat2x2,
}

pub fn veech_generators(n: usize) -> Result<VeechGenerators> {
    check_n(n)?;
    let c = (PI / n as f64).cos();
    let s_prime = Mat2x2::new(1.0, -2.0 * (1.0 + c), 0.0, 1.0);
    let r_prime = Mat2x2::new(1.0 + 2.0 * c, 2.0 * (1.0 + c), -1.0, -1.0);
    // repeated multiplication amplifies the rounding of R' entries ~n^3-fold
    let s2 = (r_prime.elliptic_pow(PI / n as f64, n as i64 - 1) * s_prime)
        .inverse()
        .expect("unimodular");
    Ok(VeechGenerators {
        s_prime,
        r_prime,
        s2,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const TOL: f64 = 1e-12;

    #[test]
    fn edge_values_n7() {
        assert_eq!(edge_h(7, 0).unwrap(), 1.0);
        assert!((edge_h(7, 1).unwrap() - 2.801937735804838).abs() < TOL);
        assert!((edge_h(7, 2).unwrap() - 4.048917339522306).abs() < TOL);
        assert_eq!(edge_v(7, 0).unwrap(), 1.0);
        assert!((edge_v(7, 1).unwrap() - 1.801937735804838).abs() < TOL);
        assert!((edge_v(7, 2).unwrap() - 2.246979603717467).abs() < TOL);
        assert!((edge_h(9, 7).unwrap() - edge_h(9, 1).unwrap()).abs() < TOL);
    }

    #[test]
    fn rejects_small_n() {
        assert!(edge_h(2, 0).is_err());
        assert!(edge_v(1, 0).is_err());
        assert!(build_staircase(2).is_err());
        assert!(normalizing_matrix(2).is_err());
    }

    #[test]
    fn staircase_layout() {
        let g = build_staircase(7).unwrap();
        assert_eq!(g.left_vertices[0], PlaneVector::new(0.0, 0.0));
        let r2 = g.right_vertices[2];
        assert!((r2.x - 7.850855075327144).abs() < TOL);
        assert!((r2.y - 2.801937735804838).abs() < TOL);
        let g3 = build_staircase(3).unwrap();
        assert_eq!(g3.v, vec![1.0]);
        assert_eq!(g3.h.len(), 2);
        assert!((g3.h[1] - 2.0).abs() < TOL);
    }

    #[test]
    fn normalizing_matrix_examples() {
        let m = normalizing_matrix(4).unwrap();
        let cot = 1.0 / (PI / 8.0).tan();
        assert!((m.b + cot).abs() < TOL);
        assert!((m.d - 1.0 / (PI / 4.0).cos()).abs() < TOL);
        let m7 = normalizing_matrix(7).unwrap();
        let dir = PlaneVector::new((PI / 14.0).cos(), (PI / 14.0).sin());
        assert!(m7.apply(dir).x.abs() < TOL);
        assert!(m7.det() > 0.0);
    }

    #[test]
    fn generator_identities_n5() {
        let g = veech_generators(5).unwrap();
        assert!(g.s2.max_abs_diff(&Mat2x2::new(1.0, 0.0, 1.0, 1.0)) < TOL);
        assert!((g.r_prime.det() - 1.0).abs() < TOL);
        assert!((g.r_prime.trace() - 2.0 * (PI / 5.0).cos()).abs() < TOL);
        let m = normalizing_matrix(5).unwrap();
        let mi = m.inverse().unwrap();
        let (s, r) = polygon_generators(5).unwrap();
        assert!((m * s * mi).max_abs_diff(&g.s_prime) < TOL);
        assert!((m * r * mi).max_abs_diff(&g.r_prime) < TOL);
        let slow = (g.r_prime.pow(4) * g.s_prime).inverse().unwrap();
        assert!(slow.max_abs_diff(&g.s2) < TOL);
        let s2i = g.s2.inverse().unwrap();
        assert!(s2i.max_abs_diff(&Mat2x2::horocycle(1.0)) < TOL);
    }
}
