//! The two-parameter family of BCV spaces: metric, orthonormal frame,
//! Levi-Civita connection, curvature and Ricci tensor.
//!
//! Frame indices are 0-based throughout: `E1 ↔ 0`, `E2 ↔ 1`, `E3 ↔ 2`.

use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fd::Linear;

/// A point of the model, in coordinates.
#[derive(Clone, Copy, Debug, PartialEq, Default, Serialize, Deserialize)]
pub struct Point3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Point3 {
    pub fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }

    pub fn offset(self, v: CoordVec, t: f64) -> Self {
        Self::new(self.x + t * v.0[0], self.y + t * v.0[1], self.z + t * v.0[2])
    }
}

impl Linear for Point3 {
    fn lin(self, a: f64, other: Self, b: f64) -> Self {
        let r = self.to_array().lin(a, other.to_array(), b);
        Self::new(r[0], r[1], r[2])
    }
}

macro_rules! vec3 {
    ($name:ident) => {
        #[derive(Clone, Copy, Debug, PartialEq, Default, Serialize, Deserialize)]
        pub struct $name(pub [f64; 3]);

        impl $name {
            pub const ZERO: Self = Self([0.0; 3]);

            pub fn new(a: f64, b: f64, c: f64) -> Self {
                Self([a, b, c])
            }

            pub fn dot(self, o: Self) -> f64 {
                self.0[0] * o.0[0] + self.0[1] * o.0[1] + self.0[2] * o.0[2]
            }

            pub fn norm(self) -> f64 {
                self.dot(self).sqrt()
            }

            pub fn max_abs(self) -> f64 {
                self.0.iter().fold(0.0f64, |m, c| m.max(c.abs()))
            }
        }

        impl Add for $name {
            type Output = Self;
            fn add(self, o: Self) -> Self {
                Self([self.0[0] + o.0[0], self.0[1] + o.0[1], self.0[2] + o.0[2]])
            }
        }

        impl AddAssign for $name {
            fn add_assign(&mut self, o: Self) {
                *self = *self + o;
            }
        }

        impl Sub for $name {
            type Output = Self;
            fn sub(self, o: Self) -> Self {
                Self([self.0[0] - o.0[0], self.0[1] - o.0[1], self.0[2] - o.0[2]])
            }
        }

        impl Neg for $name {
            type Output = Self;
            fn neg(self) -> Self {
                Self([-self.0[0], -self.0[1], -self.0[2]])
            }
        }

        impl Mul<$name> for f64 {
            type Output = $name;
            fn mul(self, v: $name) -> $name {
                $name([self * v.0[0], self * v.0[1], self * v.0[2]])
            }
        }

        impl Linear for $name {
            fn lin(self, a: f64, other: Self, b: f64) -> Self {
                Self(self.0.lin(a, other.0, b))
            }
        }
    };
}

vec3!(FrameVec);
vec3!(CoordVec);

impl FrameVec {
    /// The `i`-th frame field as a vector of components.
    pub fn basis(i: usize) -> Self {
        let mut v = [0.0; 3];
        v[i] = 1.0;
        Self(v)
    }

    pub fn cross(self, o: Self) -> Self {
        cross(self, o)
    }
}

/// Parameters `(m, ℓ)` of the metric.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BcvParams {
    pub m: f64,
    pub l: f64,
}

impl BcvParams {
    pub fn new(m: f64, l: f64) -> Self {
        Self { m, l }
    }

    /// `4m - ℓ²`, the coefficient measuring the gap to a space form.
    pub fn gap(&self) -> f64 {
        4.0 * self.m - self.l * self.l
    }

    /// Sectional curvature of horizontal planes, `4m - 3ℓ²/4`.
    pub fn horizontal_curvature(&self) -> f64 {
        4.0 * self.m - 0.75 * self.l * self.l
    }

    /// Sectional curvature of vertical planes, `ℓ²/4`.
    pub fn vertical_curvature(&self) -> f64 {
        0.25 * self.l * self.l
    }
}

/// `F = 1 + m(x² + y²)`; fails where `F <= 0`.
pub fn conformal_factor(params: &BcvParams, x: f64, y: f64) -> Result<f64> {
    let f = 1.0 + params.m * (x * x + y * y);
    if f > 0.0 && f.is_finite() {
        Ok(f)
    } else {
        Err(Error::OutOfDomain { point: [x, y, f64::NAN], factor: f })
    }
}

fn guarded_factor(params: &BcvParams, p: Point3) -> Result<f64> {
    conformal_factor(params, p.x, p.y).map_err(|_| Error::OutOfDomain {
        point: p.to_array(),
        factor: 1.0 + params.m * (p.x * p.x + p.y * p.y),
    })
}

/// Coordinate components of `E1, E2, E3` at `p`.
pub fn frame_at(params: &BcvParams, p: Point3) -> Result<[CoordVec; 3]> {
    let f = guarded_factor(params, p)?;
    let hl = 0.5 * params.l;
    Ok([
        CoordVec::new(f, 0.0, -hl * p.y),
        CoordVec::new(0.0, f, hl * p.x),
        CoordVec::new(0.0, 0.0, 1.0),
    ])
}

/// The metric applied to two coordinate vectors at `p`.
pub fn metric_at(params: &BcvParams, p: Point3, v: CoordVec, w: CoordVec) -> Result<f64> {
    let c = coord_to_frame(params, p, v)?;
    let d = coord_to_frame(params, p, w)?;
    Ok(c.dot(d))
}

/// Frame components of a coordinate vector: `(vx/F, vy/F, θ(v))`.
pub fn coord_to_frame(params: &BcvParams, p: Point3, v: CoordVec) -> Result<FrameVec> {
    let f = guarded_factor(params, p)?;
    let [vx, vy, vz] = v.0;
    let theta = vz + params.l / (2.0 * f) * (p.y * vx - p.x * vy);
    Ok(FrameVec::new(vx / f, vy / f, theta))
}

/// Coordinate components of a vector given in the frame.
pub fn frame_to_coord(params: &BcvParams, p: Point3, c: FrameVec) -> Result<CoordVec> {
    let e = frame_at(params, p)?;
    Ok(c.0[0] * e[0] + c.0[1] * e[1] + c.0[2] * e[2])
}

/// `[E_i, E_j]` in frame components.
pub fn lie_bracket_frame(params: &BcvParams, p: Point3, i: usize, j: usize) -> FrameVec {
    let v = FrameVec::new(-2.0 * params.m * p.y, 2.0 * params.m * p.x, params.l);
    match (i, j) {
        (0, 1) => v,
        (1, 0) => -v,
        _ => FrameVec::ZERO,
    }
}

/// `∇_{E_i} E_j` in frame components.
pub fn connection_frame(params: &BcvParams, p: Point3, i: usize, j: usize) -> FrameVec {
    let (m, hl) = (params.m, 0.5 * params.l);
    let (x, y) = (p.x, p.y);
    match (i, j) {
        (0, 0) => FrameVec::new(0.0, 2.0 * m * y, 0.0),
        (0, 1) => FrameVec::new(-2.0 * m * y, 0.0, hl),
        (0, 2) => FrameVec::new(0.0, -hl, 0.0),
        (1, 0) => FrameVec::new(0.0, -2.0 * m * x, -hl),
        (1, 1) => FrameVec::new(2.0 * m * x, 0.0, 0.0),
        (1, 2) => FrameVec::new(hl, 0.0, 0.0),
        (2, 0) => FrameVec::new(0.0, -hl, 0.0),
        (2, 1) => FrameVec::new(hl, 0.0, 0.0),
        _ => FrameVec::ZERO,
    }
}

/// Cross product on frame components; `E1 × E2 = E3`.
pub fn cross(v: FrameVec, w: FrameVec) -> FrameVec {
    let (a, b) = (v.0, w.0);
    FrameVec::new(
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    )
}

/// `R(X, Y)Z` with `R(X,Y) = ∇_X∇_Y - ∇_Y∇_X - ∇_[X,Y]`.
pub fn curvature_op(params: &BcvParams, x: FrameVec, y: FrameVec, z: FrameVec) -> FrameVec {
    let c = params.horizontal_curvature();
    let d = params.gap();
    let (xe, ye, ze) = (x.0[2], y.0[2], z.0[2]);
    let (yz, xz) = (y.dot(z), x.dot(z));
    let e3 = FrameVec::basis(2);
    c * (yz * x - xz * y) - d * (ye * ze * x + yz * xe * e3 - xe * ze * y - xz * ye * e3)
}

/// `R(X, Y, Z, W) = ⟨R(X, Y)W, Z⟩`.
pub fn curvature_form(params: &BcvParams, x: FrameVec, y: FrameVec, z: FrameVec, w: FrameVec) -> f64 {
    curvature_op(params, x, y, w).dot(z)
}

/// Ricci tensor as a bilinear form, `Σ ⟨R(X, E_i)E_i, Y⟩`.
pub fn ricci(params: &BcvParams, v: FrameVec, w: FrameVec) -> f64 {
    (0..3)
        .map(|i| {
            let e = FrameVec::basis(i);
            curvature_op(params, v, e, e).dot(w)
        })
        .sum()
}

/// The vector metrically dual to `Ric(v, ·)`.
pub fn ricci_vector(params: &BcvParams, v: FrameVec) -> FrameVec {
    FrameVec::new(
        ricci(params, v, FrameVec::basis(0)),
        ricci(params, v, FrameVec::basis(1)),
        ricci(params, v, FrameVec::basis(2)),
    )
}

/// A coordinate model of a BCV space carrying a global orthonormal frame
/// whose third field is the unit Killing field.
pub trait Ambient: Send + Sync {
    fn params(&self) -> BcvParams;

    /// Coordinate components of the frame at `p`.
    fn frame(&self, p: Point3) -> Result<[CoordVec; 3]>;

    /// Frame components of a coordinate vector at `p`.
    fn to_frame(&self, p: Point3, v: CoordVec) -> Result<FrameVec>;

    /// `[E_i, E_j]` in frame components.
    fn bracket(&self, p: Point3, i: usize, j: usize) -> FrameVec;

    /// `∇_{E_i} E_j` in frame components.
    fn connection(&self, p: Point3, i: usize, j: usize) -> FrameVec;

    fn metric(&self, p: Point3, v: CoordVec, w: CoordVec) -> Result<f64> {
        Ok(self.to_frame(p, v)?.dot(self.to_frame(p, w)?))
    }

    fn to_coord(&self, p: Point3, c: FrameVec) -> Result<CoordVec> {
        let e = self.frame(p)?;
        Ok(c.0[0] * e[0] + c.0[1] * e[1] + c.0[2] * e[2])
    }

    /// `∇_X Y` at `p` for a field `Y` whose frame components are frozen at `y`.
    fn frozen_covariant(&self, p: Point3, x: FrameVec, y: FrameVec) -> FrameVec {
        let mut out = FrameVec::ZERO;
        for i in 0..3 {
            for j in 0..3 {
                let w = x.0[i] * y.0[j];
                if w != 0.0 {
                    out += w * self.connection(p, i, j);
                }
            }
        }
        out
    }
}

/// The rotationally symmetric model on `{F > 0} × R`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BcvSpace {
    pub params: BcvParams,
}

impl BcvSpace {
    pub fn new(m: f64, l: f64) -> Self {
        Self { params: BcvParams::new(m, l) }
    }
}

impl Ambient for BcvSpace {
    fn params(&self) -> BcvParams {
        self.params
    }

    fn frame(&self, p: Point3) -> Result<[CoordVec; 3]> {
        frame_at(&self.params, p)
    }

    fn to_frame(&self, p: Point3, v: CoordVec) -> Result<FrameVec> {
        coord_to_frame(&self.params, p, v)
    }

    fn bracket(&self, p: Point3, i: usize, j: usize) -> FrameVec {
        lie_bracket_frame(&self.params, p, i, j)
    }

    fn connection(&self, p: Point3, i: usize, j: usize) -> FrameVec {
        connection_frame(&self.params, p, i, j)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn frame_is_orthonormal() {
        let pr = BcvParams::new(-0.4, 1.3);
        let p = Point3::new(0.5, -0.7, 2.0);
        let e = frame_at(&pr, p).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let g = metric_at(&pr, p, e[i], e[j]).unwrap();
                assert!((g - if i == j { 1.0 } else { 0.0 }).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn domain_guard() {
        let pr = BcvParams::new(-1.0, 1.0);
        assert!(conformal_factor(&pr, 1.0, 0.1).is_err());
        assert!(frame_at(&pr, Point3::new(2.0, 0.0, 0.0)).is_err());
    }

    #[test]
    fn sectional_and_ricci_values() {
        let pr = BcvParams::new(0.7, 1.1);
        let e = |i| FrameVec::basis(i);
        assert!((curvature_form(&pr, e(0), e(1), e(0), e(1)) - pr.horizontal_curvature()).abs() < 1e-14);
        assert!((curvature_form(&pr, e(0), e(2), e(0), e(2)) - pr.vertical_curvature()).abs() < 1e-14);
        assert!((curvature_form(&pr, e(1), e(2), e(1), e(2)) - pr.vertical_curvature()).abs() < 1e-14);
        assert!((ricci(&pr, e(2), e(2)) - 0.5 * pr.l * pr.l).abs() < 1e-14);
        assert!((ricci(&pr, e(0), e(0)) - (4.0 * pr.m - 0.5 * pr.l * pr.l)).abs() < 1e-14);
        assert!(ricci(&pr, e(0), e(2)).abs() < 1e-14);
    }

    #[test]
    fn e3_covariant_is_rotation() {
        let pr = BcvParams::new(0.3, -1.7);
        let s = BcvSpace { params: pr };
        let p = Point3::new(0.2, 0.4, 0.0);
        let x = FrameVec::new(0.3, -1.2, 0.8);
        let lhs = s.frozen_covariant(p, x, FrameVec::basis(2));
        let rhs = 0.5 * pr.l * x.cross(FrameVec::basis(2));
        assert!((lhs - rhs).max_abs() < 1e-14);
    }
}
