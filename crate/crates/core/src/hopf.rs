//! Hopf cylinders: preimages of curves in the base surface under the
//! Riemannian submersion `(x, y, z) ↦ (x, y)`.
//!
//! Along a cylinder over a unit-speed horizontal curve, `{X, E3, η}` is an
//! orthonormal frame with `X` the horizontal lift of the velocity. A section
//! is stored as three jets `(a, b, c)` meaning `aX + bE3 + cη`, functions of
//! the arc length only. With `X = E1`, `E3 = E3`, `η = -E2` at a reference
//! point the frame is positively oriented, which is how curvature terms are
//! evaluated.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fd;
use crate::jet::Jet;
use crate::space::{conformal_factor, curvature_op, BcvParams, BcvSpace, FrameVec, Point3};
use crate::surface::{ParamRect, ShapeData, SurfacePatch};

/// Geodesic curvature of the base curve and its first four derivatives.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct KgJet {
    pub k: f64,
    pub k1: f64,
    pub k2: f64,
    pub k3: f64,
    pub k4: f64,
    /// Every derivative, including those past the fourth, vanishes.
    pub constant: bool,
}

impl KgJet {
    pub fn new(k: f64, k1: f64, k2: f64, k3: f64, k4: f64) -> Self {
        Self { k, k1, k2, k3, k4, constant: false }
    }

    pub fn constant(k: f64) -> Self {
        Self { k, k1: 0.0, k2: 0.0, k3: 0.0, k4: 0.0, constant: true }
    }

    pub fn from_jet(j: &Jet) -> Result<Self> {
        if j.is_exact() && (1..=4).all(|k| j.get(k) == Ok(0.0)) {
            return Ok(Self::constant(j.value()?));
        }
        Ok(Self::new(j.get(0)?, j.get(1)?, j.get(2)?, j.get(3)?, j.get(4)?))
    }

    pub fn to_jet(&self) -> Jet {
        if self.constant {
            Jet::constant(self.k)
        } else {
            Jet::truncated(vec![self.k, self.k1, self.k2, self.k3, self.k4])
        }
    }
}

/// Components of a vector along `(X, E3, η)`.
#[derive(Clone, Copy, Debug, PartialEq, Default, Serialize, Deserialize)]
pub struct CylVector {
    pub x: f64,
    pub e3: f64,
    pub eta: f64,
}

impl CylVector {
    pub fn new(x: f64, e3: f64, eta: f64) -> Self {
        Self { x, e3, eta }
    }

    pub fn to_frame(self) -> FrameVec {
        FrameVec::new(self.x, -self.eta, self.e3)
    }

    pub fn from_frame(v: FrameVec) -> Self {
        Self::new(v.0[0], v.0[2], -v.0[1])
    }

    pub fn max_abs(self) -> f64 {
        self.x.abs().max(self.e3.abs()).max(self.eta.abs())
    }
}

/// A section `aX + bE3 + cη` along a Hopf cylinder, by jets in arc length.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CylSection {
    pub x: Jet,
    pub e3: Jet,
    pub eta: Jet,
}

impl CylSection {
    pub fn new(x: Jet, e3: Jet, eta: Jet) -> Self {
        Self { x, e3, eta }
    }

    pub fn value(&self) -> Result<CylVector> {
        Ok(CylVector::new(self.x.value()?, self.e3.value()?, self.eta.value()?))
    }

    fn add(&self, o: &CylSection) -> CylSection {
        CylSection::new(&self.x + &o.x, &self.e3 + &o.e3, &self.eta + &o.eta)
    }

    fn scale(&self, a: f64) -> CylSection {
        CylSection::new(self.x.scale(a), self.e3.scale(a), self.eta.scale(a))
    }
}

/// `∇_X` of a section; `κ` is the geodesic-curvature jet.
pub fn covariant_x(params: &BcvParams, kappa: &Jet, s: &CylSection) -> CylSection {
    let hl = 0.5 * params.l;
    CylSection::new(
        &s.x.deriv() + &(&s.eta * kappa),
        &s.e3.deriv() - &s.eta.scale(hl),
        &(&s.eta.deriv() - &(&s.x * kappa)) + &s.e3.scale(hl),
    )
}

/// `∇_{E3}` of a section; components do not depend on the fibre coordinate.
pub fn covariant_e3(params: &BcvParams, s: &CylSection) -> CylSection {
    let hl = 0.5 * params.l;
    CylSection::new(s.eta.scale(-hl), Jet::zero(), s.x.scale(hl))
}

/// `Δ̄ = -(∇_X∇_X + ∇_{E3}∇_{E3})`; both frame fields have vanishing
/// covariant derivative along themselves on the cylinder.
pub fn rough_laplacian_cyl(params: &BcvParams, kappa: &Jet, s: &CylSection) -> CylSection {
    let xx = covariant_x(params, kappa, &covariant_x(params, kappa, s));
    let ee = covariant_e3(params, &covariant_e3(params, s));
    xx.add(&ee).scale(-1.0)
}

/// Tension field `τ = -κ η`.
pub fn tension_cyl(kappa: &Jet) -> CylSection {
    CylSection::new(Jet::zero(), Jet::zero(), -kappa)
}

/// `R(U, W)Z` for vectors in cylinder components.
pub fn curvature_cyl(params: &BcvParams, u: CylVector, w: CylVector, z: CylVector) -> CylVector {
    CylVector::from_frame(curvature_op(params, u.to_frame(), w.to_frame(), z.to_frame()))
}

fn add(a: CylVector, b: CylVector, s: f64) -> CylVector {
    CylVector::new(a.x + s * b.x, a.e3 + s * b.e3, a.eta + s * b.eta)
}

const TANGENTS: [CylVector; 2] = [CylVector { x: 1.0, e3: 0.0, eta: 0.0 }, CylVector { x: 0.0, e3: 1.0, eta: 0.0 }];

/// `A, B, C` of `Δ̄τ = A X + B E3 + C η` and their first two derivatives,
/// as `[[A, Ȧ, Ä], [B, Ḃ, B̈], [C, Ċ, C̈]]`.
fn abc(params: &BcvParams, kg: &KgJet) -> [[f64; 3]; 3] {
    let l2 = params.l * params.l;
    let (k, k1, k2, k3, k4) = (kg.k, kg.k1, kg.k2, kg.k3, kg.k4);
    [
        [3.0 * k * k1, 3.0 * (k1 * k1 + k * k2), 3.0 * (3.0 * k1 * k2 + k * k3)],
        [-params.l * k1, -params.l * k2, -params.l * k3],
        [
            k2 - 0.5 * l2 * k - k.powi(3),
            k3 - 0.5 * l2 * k1 - 3.0 * k * k * k1,
            k4 - 0.5 * l2 * k2 - 6.0 * k * k1 * k1 - 3.0 * k * k * k2,
        ],
    ]
}

/// `Δ̄τ` of a Hopf cylinder in closed form.
pub fn delta_tau_display(params: &BcvParams, kg: &KgJet) -> CylVector {
    let [a, b, c] = abc(params, kg);
    CylVector::new(a[0], b[0], c[0])
}

/// `Δ̄²τ` of a Hopf cylinder written through `A, B, C`.
pub fn delta2_tau_display(params: &BcvParams, kg: &KgJet) -> CylVector {
    let l = params.l;
    let l2 = l * l;
    let (k, k1) = (kg.k, kg.k1);
    let [a, b, c] = abc(params, kg);
    CylVector::new(
        0.25 * l2 * a[0] + a[0] * k * k - a[2] - 0.5 * l * b[0] * k - 2.0 * c[1] * k - c[0] * k1,
        -0.5 * l * a[0] * k + 0.25 * l2 * b[0] - b[2] + l * c[1],
        2.0 * a[1] * k + a[0] * k1 - l * b[1] - c[2] + c[0] * k * k + 0.5 * l2 * c[0],
    )
}

/// The two curvature terms of the 3-tension of a Hopf cylinder:
/// `-Σ R(Δ̄τ, X_i)X_i` and `-Σ R(∇_{X_i}τ, τ)X_i`.
pub fn curvature_terms_display(params: &BcvParams, kg: &KgJet) -> (CylVector, CylVector) {
    let l2 = params.l * params.l;
    let [a, b, c] = abc(params, kg);
    (
        CylVector::new(-0.25 * l2 * a[0], -0.25 * l2 * b[0], (-4.0 * params.m + 0.5 * l2) * c[0]),
        CylVector::new(0.0, 0.0, params.horizontal_curvature() * kg.k.powi(3)),
    )
}

/// Closed-form 3-tension of a Hopf cylinder in terms of `κ` and its
/// derivatives up to order four.
pub fn tau3_hopf(params: &BcvParams, kg: &KgJet) -> CylVector {
    let (m, l) = (params.m, params.l);
    let (k, k1, k2, k3, k4) = (kg.k, kg.k1, kg.k2, kg.k3, kg.k4);
    let l2 = l * l;
    CylVector::new(
        2.0 * k1 * (l2 * k + 5.0 * k.powi(3) - 5.0 * k2) - 5.0 * k * k3,
        0.5 * l * (-(l2 + 9.0 * k * k) * k1 + 4.0 * k3),
        0.25 * (k * (60.0 * k1 * k1 - (l2 + 4.0 * k * k) * (2.0 * l2 - 8.0 * m + k * k))
            + 2.0 * (5.0 * l2 - 8.0 * m + 20.0 * k * k) * k2
            - 4.0 * k4),
    )
}

/// The three scalar equations `K1 = K2 = K3 = 0` of triharmonicity.
pub fn triharmonic_residuals(params: &BcvParams, kg: &KgJet) -> [f64; 3] {
    let t = tau3_hopf(params, kg);
    [t.x, 2.0 * t.e3, 4.0 * t.eta]
}

/// Coefficient of `η` in the `r`-tension of a cylinder with constant
/// geodesic curvature `κ`.
pub fn r_tension_cmc(params: &BcvParams, kappa: f64, r: u32) -> Result<f64> {
    if r < 2 {
        return Err(Error::InvalidArgument(format!("r must be at least 2, got {r}")));
    }
    let (m, l) = (params.m, params.l);
    let c = kappa * kappa + 0.5 * l * l;
    let bracket = c * c - (4.0 * m - 0.5 * l * l) * c - (r as f64 - 2.0) * params.horizontal_curvature() * kappa * kappa;
    if kappa == 0.0 {
        // τ vanishes identically, and c = 0 is only possible here.
        return Ok(0.0);
    }
    Ok(-kappa * c.powi(r as i32 - 3) * bracket)
}

/// `r`-tension assembled from the general formula: iterated rough
/// Laplacians of `τ` corrected by the curvature sums. Works for any
/// geodesic-curvature jet deep enough for `r`.
pub fn r_tension_assembled(params: &BcvParams, kappa: &Jet, r: u32) -> Result<CylVector> {
    if r < 2 {
        return Err(Error::InvalidArgument(format!("r must be at least 2, got {r}")));
    }
    let tau = tension_cyl(kappa);
    let mut powers = vec![tau];
    for _ in 1..r {
        let next = rough_laplacian_cyl(params, kappa, powers.last().expect("non-empty"));
        powers.push(next);
    }
    let lap = |k: i64| -> Option<&CylSection> { if k < 0 { None } else { Some(&powers[k as usize]) } };
    let val = |k: i64| -> Result<CylVector> { lap(k).map(|s| s.value()).unwrap_or(Ok(CylVector::default())) };
    let grad = |k: i64, i: usize| -> Result<CylVector> {
        match lap(k) {
            None => Ok(CylVector::default()),
            Some(s) if i == 0 => covariant_x(params, kappa, s).value(),
            Some(s) => covariant_e3(params, s).value(),
        }
    };
    let curv = |a: CylVector, b: CylVector, c: CylVector| curvature_cyl(params, a, b, c);
    let s = (r / 2) as i64;
    let r = r as i64;
    let mut out = val(r - 1)?;
    for (i, &e) in TANGENTS.iter().enumerate() {
        out = add(out, curv(val(r - 2)?, e, e), -1.0);
        let shift = if r % 2 == 0 { 2 } else { 1 };
        for l in 1..s {
            let (p, q) = (s + l - shift, s - l - 1);
            out = add(out, curv(grad(p, i)?, val(q)?, e), -1.0);
            out = add(out, curv(val(p)?, grad(q, i)?, e), 1.0);
        }
        if r % 2 == 1 {
            out = add(out, curv(grad(s - 1, i)?, val(s - 1)?, e), -1.0);
        }
    }
    Ok(out)
}

/// Extrinsic data of a Hopf cylinder with constant geodesic curvature
/// `kappa`, in the basis `x1 = X`, `x2 = E3` at the reference point.
pub fn cylinder_shape_data(params: &BcvParams, kappa: f64) -> ShapeData {
    let hl = 0.5 * params.l;
    ShapeData::from_basis(FrameVec::basis(0), FrameVec::basis(2), [[-kappa, hl], [hl, 0.0]])
}

/// Euclidean radius in the round base sphere of a circle of geodesic
/// curvature `kappa` (requires `m > 0`).
pub fn circle_radius(params: &BcvParams, kappa: f64) -> Result<f64> {
    if params.m <= 0.0 {
        return Err(Error::InvalidBase { m: params.m });
    }
    let rho = 0.5 / params.m.sqrt();
    Ok(rho / (kappa * kappa * rho * rho + 1.0).sqrt())
}

/// A curve in the base plane, in the coordinates `(x, y)`.
pub trait BaseCurve: Send + Sync {
    fn at(&self, s: f64) -> (f64, f64);
}

impl<F: Fn(f64) -> (f64, f64) + Send + Sync> BaseCurve for F {
    fn at(&self, s: f64) -> (f64, f64) {
        self(s)
    }
}

/// Coordinate circle `x² + y² = r0²` traversed at unit speed.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChartCircle {
    pub r0: f64,
    pub omega: f64,
}

impl ChartCircle {
    pub fn new(params: &BcvParams, r0: f64) -> Result<Self> {
        let f = conformal_factor(params, r0, 0.0)?;
        Ok(Self { r0, omega: f / r0 })
    }

    /// The counterclockwise circle about the origin whose geodesic curvature
    /// is `kappa`; solves `m r0² + κ r0 - 1 = 0`.
    pub fn with_curvature(params: &BcvParams, kappa: f64) -> Result<Self> {
        let m = params.m;
        let disc = kappa * kappa + 4.0 * m;
        let r0 = if disc < 0.0 {
            f64::NAN
        } else {
            2.0 / (kappa + disc.sqrt())
        };
        if !(r0.is_finite() && r0 > 0.0) {
            return Err(Error::InvalidArgument(format!("no coordinate circle has geodesic curvature {kappa} for m = {m}")));
        }
        Self::new(params, r0)
    }

    /// Geodesic curvature `(1 - m r0²)/r0`.
    pub fn curvature(&self, params: &BcvParams) -> f64 {
        (1.0 - params.m * self.r0 * self.r0) / self.r0
    }
}

impl BaseCurve for ChartCircle {
    fn at(&self, s: f64) -> (f64, f64) {
        let t = self.omega * s;
        (self.r0 * t.cos(), self.r0 * t.sin())
    }
}

/// Unit-speed ray from the origin in direction `angle`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RadialLine {
    pub angle: f64,
    pub m: f64,
}

impl BaseCurve for RadialLine {
    fn at(&self, s: f64) -> (f64, f64) {
        let g = if self.m > 0.0 {
            let k = self.m.sqrt();
            (k * s).tan() / k
        } else if self.m < 0.0 {
            let k = (-self.m).sqrt();
            (k * s).tanh() / k
        } else {
            s
        };
        (g * self.angle.cos(), g * self.angle.sin())
    }
}

/// Speed tolerance accepted as unit speed.
pub const ARC_LENGTH_TOL: f64 = 1e-6;

/// Geodesic curvature of a base curve at `s`, by finite differences.
pub fn geodesic_curvature(params: &BcvParams, curve: &dyn BaseCurve, s: f64, h: f64) -> Result<f64> {
    let pt = |t: f64| -> Result<[f64; 2]> {
        let (x, y) = curve.at(t);
        conformal_factor(params, x, y)?;
        Ok([x, y])
    };
    let [x, y] = pt(s)?;
    let f = conformal_factor(params, x, y)?;
    let d1 = fd::first(pt, s, h)?;
    let d2 = fd::second(pt, s, h)?;
    let speed = (d1[0] * d1[0] + d1[1] * d1[1]).sqrt() / f;
    if (speed - 1.0).abs() > ARC_LENGTH_TOL {
        return Err(Error::NotArcLength { s, speed });
    }
    let m = params.m;
    Ok(2.0 * m / f * (d1[0] * y - d1[1] * x) + (d2[1] * d1[0] - d2[0] * d1[1]) / (f * f))
}

/// The cylinder `(s, t) ↦ (γ(s), t)` as a surface patch.
pub fn cylinder_patch(space: BcvSpace, curve: impl BaseCurve + 'static, domain: ParamRect) -> SurfacePatch<BcvSpace> {
    SurfacePatch::new(space, domain, move |s, t| {
        let (x, y) = curve.at(s);
        Point3::new(x, y, t)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chart_circle_curvature() {
        let p = BcvParams::new(0.5, 1.0);
        let c = ChartCircle::with_curvature(&p, 1.3).unwrap();
        assert!((c.curvature(&p) - 1.3).abs() < 1e-12);
        let k = geodesic_curvature(&p, &c, 0.4, 1e-3).unwrap();
        assert!((k - 1.3).abs() < 1e-8);
    }

    #[test]
    fn radial_line_is_geodesic() {
        for m in [-0.5, 0.0, 0.8] {
            let p = BcvParams::new(m, 0.3);
            let c = RadialLine { angle: 0.7, m };
            assert!(geodesic_curvature(&p, &c, 0.3, 1e-3).unwrap().abs() < 1e-8);
        }
    }

    #[test]
    fn laplacian_of_tension() {
        let p = BcvParams::new(0.4, 1.2);
        let k = Jet::polynomial(&[0.3, 0.2, -0.1, 0.05], 0.4);
        let d = rough_laplacian_cyl(&p, &k, &tension_cyl(&k)).value().unwrap();
        let (k0, k1, k2) = (k.get(0).unwrap(), k.get(1).unwrap(), k.get(2).unwrap());
        assert!((d.x - 3.0 * k0 * k1).abs() < 1e-14);
        assert!((d.e3 + p.l * k1).abs() < 1e-14);
        assert!((d.eta - (k2 - 0.5 * p.l * p.l * k0 - k0.powi(3))).abs() < 1e-14);
    }
}
