//! Surfaces in a BCV space: shape operator, pullback rough Laplacian,
//! tension fields and the closed-form expressions for CMC surfaces.
//!
//! All differentiation along the surface is numerical. A section or scalar
//! field records its *depth*, the number of nested stencils already needed to
//! evaluate it once. Differentiating a depth-`d` quantity uses the step
//! `h · growth^d`, so roundoff does not blow up as stencils are nested.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fd::{self, FdConfig};
use crate::space::{curvature_op, ricci, ricci_vector, Ambient, BcvParams, FrameVec, Point3};

/// Ratio between the steps of consecutive nesting depths.
pub const DEFAULT_GROWTH: f64 = 4.0;

/// Rectangle of admissible parameters.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ParamRect {
    pub u: (f64, f64),
    pub v: (f64, f64),
}

impl ParamRect {
    pub fn new(u: (f64, f64), v: (f64, f64)) -> Self {
        Self { u, v }
    }

    pub fn center(&self) -> (f64, f64) {
        (0.5 * (self.u.0 + self.u.1), 0.5 * (self.v.0 + self.v.1))
    }
}

type VecFn<'a> = dyn Fn(f64, f64) -> Result<FrameVec> + Send + Sync + 'a;
type ScalarFn<'a> = dyn Fn(f64, f64) -> Result<f64> + Send + Sync + 'a;

/// A section of the pullback bundle, in frame components.
pub struct PullbackSection<'a> {
    f: Box<VecFn<'a>>,
    pub depth: u32,
}

impl<'a> PullbackSection<'a> {
    pub fn new(depth: u32, f: impl Fn(f64, f64) -> Result<FrameVec> + Send + Sync + 'a) -> Self {
        Self { f: Box::new(f), depth }
    }

    pub fn eval(&self, u: f64, v: f64) -> Result<FrameVec> {
        (self.f)(u, v)
    }
}

/// A function on the surface.
pub struct ScalarField<'a> {
    f: Box<ScalarFn<'a>>,
    pub depth: u32,
}

impl<'a> ScalarField<'a> {
    pub fn new(depth: u32, f: impl Fn(f64, f64) -> Result<f64> + Send + Sync + 'a) -> Self {
        Self { f: Box::new(f), depth }
    }

    pub fn eval(&self, u: f64, v: f64) -> Result<f64> {
        (self.f)(u, v)
    }
}

/// Pointwise extrinsic data of an oriented surface. `A` is stored in the
/// orthonormal tangent basis `(x1, x2)` with `x2 = J x1`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ShapeData {
    pub x1: FrameVec,
    pub x2: FrameVec,
    pub eta: FrameVec,
    pub nu: f64,
    pub e3top: FrameVec,
    pub a: [[f64; 2]; 2],
    pub f: f64,
    pub norm_a2: f64,
    /// `|A12 - A21|` before symmetrization.
    pub asymmetry: f64,
}

impl ShapeData {
    /// Builds the data from a tangent basis and the (possibly slightly
    /// asymmetric) matrix `a_ij = ⟨A x_i, x_j⟩`.
    pub fn from_basis(x1: FrameVec, x2: FrameVec, a: [[f64; 2]; 2]) -> Self {
        let eta = x1.cross(x2);
        let off = 0.5 * (a[0][1] + a[1][0]);
        let a_sym = [[a[0][0], off], [off, a[1][1]]];
        let nu = eta.0[2];
        let e3top = FrameVec::basis(2) - nu * eta;
        let f = 0.5 * (a_sym[0][0] + a_sym[1][1]);
        let norm_a2 = a_sym[0][0].powi(2) + 2.0 * off * off + a_sym[1][1].powi(2);
        Self { x1, x2, eta, nu, e3top, a: a_sym, f, norm_a2, asymmetry: (a[0][1] - a[1][0]).abs() }
    }

    /// Builds the data from a unit normal and the shape operator as a map on
    /// tangent vectors.
    pub fn from_normal(eta: FrameVec, x1: FrameVec, shape: impl Fn(FrameVec) -> FrameVec) -> Self {
        let x2 = eta.cross(x1);
        let (a1, a2) = (shape(x1), shape(x2));
        Self::from_basis(x1, x2, [[a1.dot(x1), a1.dot(x2)], [a2.dot(x1), a2.dot(x2)]])
    }

    /// Tangential projection.
    pub fn tangential(&self, v: FrameVec) -> FrameVec {
        v - v.dot(self.eta) * self.eta
    }

    /// `A` applied to the tangential part of `v`.
    pub fn shape(&self, v: FrameVec) -> FrameVec {
        let (c1, c2) = (v.dot(self.x1), v.dot(self.x2));
        (c1 * self.a[0][0] + c2 * self.a[1][0]) * self.x1 + (c1 * self.a[0][1] + c2 * self.a[1][1]) * self.x2
    }

    /// Rotation by a right angle in the tangent plane, `J v = η × v`.
    pub fn rotate(&self, v: FrameVec) -> FrameVec {
        self.eta.cross(v)
    }

    /// `V = ν E3ᵀ`.
    pub fn v_field(&self) -> FrameVec {
        self.nu * self.e3top
    }
}

struct Basis {
    x1: FrameVec,
    x2: FrameVec,
    /// `x_i = coef[i][0] φ_u + coef[i][1] φ_v`.
    coef: [[f64; 2]; 2],
}

/// An immersed patch given by an embedding map in model coordinates.
#[derive(Clone)]
pub struct SurfacePatch<S: Ambient> {
    pub space: S,
    pub domain: ParamRect,
    pub fd: FdConfig,
    pub growth: f64,
    embedding: Arc<dyn Fn(f64, f64) -> Point3 + Send + Sync>,
}

impl<S: Ambient> SurfacePatch<S> {
    pub fn new(space: S, domain: ParamRect, embedding: impl Fn(f64, f64) -> Point3 + Send + Sync + 'static) -> Self {
        Self { space, domain, fd: FdConfig::default(), growth: DEFAULT_GROWTH, embedding: Arc::new(embedding) }
    }

    pub fn with_fd(mut self, fd: FdConfig) -> Self {
        self.fd = fd;
        self
    }

    /// Step used to differentiate a quantity of the given depth.
    pub fn step(&self, depth: u32) -> f64 {
        self.fd.step * self.growth.powi(depth as i32)
    }

    /// Sum of the steps of depths `0..depth`, the reach of a nested stencil.
    pub fn reach(&self, depth: u32) -> f64 {
        (0..depth).map(|d| self.step(d)).sum()
    }

    pub fn point(&self, u: f64, v: f64) -> Point3 {
        (self.embedding)(u, v)
    }

    fn check_interior(&self, u: f64, v: f64, depth: u32) -> Result<()> {
        let margin = self.reach(depth);
        let d = &self.domain;
        if u - margin < d.u.0 || u + margin > d.u.1 || v - margin < d.v.0 || v + margin > d.v.1 {
            return Err(Error::NearBoundary { u, v, margin });
        }
        Ok(())
    }

    /// `φ_u, φ_v` in frame components.
    pub fn partials(&self, u: f64, v: f64) -> Result<[FrameVec; 2]> {
        let h = self.step(0);
        let p = self.point(u, v);
        let du = fd::first(|t| Ok(self.point(u + t, v)), 0.0, h)?;
        let dv = fd::first(|t| Ok(self.point(u, v + t)), 0.0, h)?;
        Ok([
            self.space.to_frame(p, crate::space::CoordVec(du.to_array()))?,
            self.space.to_frame(p, crate::space::CoordVec(dv.to_array()))?,
        ])
    }

    fn basis(&self, u: f64, v: f64) -> Result<Basis> {
        let [pu, pv] = self.partials(u, v)?;
        let nu = pu.norm();
        let x1 = (1.0 / nu) * pu;
        let w = pv - pv.dot(x1) * x1;
        let nw = w.norm();
        if !(nu > 1e-12 && nw > 1e-12 * pv.norm().max(1.0)) {
            return Err(Error::DegenerateImmersion { u, v });
        }
        let x2 = (1.0 / nw) * w;
        let coef = [[1.0 / nu, 0.0], [-pv.dot(x1) / (nu * nw), 1.0 / nw]];
        Ok(Basis { x1, x2, coef })
    }

    /// Unit normal `η = x1 × x2`, oriented by `φ_u × φ_v`.
    pub fn normal(&self, u: f64, v: f64) -> Result<FrameVec> {
        let b = self.basis(u, v)?;
        Ok(b.x1.cross(b.x2))
    }

    /// First fundamental form `g_ab`.
    pub fn metric(&self, u: f64, v: f64) -> Result<[[f64; 2]; 2]> {
        let [pu, pv] = self.partials(u, v)?;
        Ok([[pu.dot(pu), pu.dot(pv)], [pu.dot(pv), pv.dot(pv)]])
    }

    fn inverse_metric(&self, u: f64, v: f64) -> Result<[[f64; 2]; 2]> {
        let g = self.metric(u, v)?;
        let det = g[0][0] * g[1][1] - g[0][1] * g[1][0];
        if det.abs() < 1e-24 {
            return Err(Error::DegenerateImmersion { u, v });
        }
        Ok([[g[1][1] / det, -g[0][1] / det], [-g[1][0] / det, g[0][0] / det]])
    }

    /// Christoffel symbols of the induced metric, `Γ^c_ab` as `[c][a][b]`.
    pub fn christoffel(&self, u: f64, v: f64) -> Result<[[[f64; 2]; 2]; 2]> {
        let h = self.step(1);
        let flat = |uu: f64, vv: f64| -> Result<[f64; 3]> {
            let g = self.metric(uu, vv)?;
            Ok([g[0][0], g[0][1], g[1][1]])
        };
        let du = fd::first(|t| flat(u + t, v), 0.0, h)?;
        let dv = fd::first(|t| flat(u, v + t), 0.0, h)?;
        let dg = |c: usize, a: usize, b: usize| -> f64 {
            let d = if c == 0 { du } else { dv };
            match (a, b) {
                (0, 0) => d[0],
                (1, 1) => d[2],
                _ => d[1],
            }
        };
        let gi = self.inverse_metric(u, v)?;
        let mut gamma = [[[0.0; 2]; 2]; 2];
        for c in 0..2 {
            for a in 0..2 {
                for b in 0..2 {
                    gamma[c][a][b] = (0..2)
                        .map(|d| 0.5 * gi[c][d] * (dg(a, b, d) + dg(b, a, d) - dg(d, a, b)))
                        .sum();
                }
            }
        }
        Ok(gamma)
    }

    fn covariant_partial(&self, w: &VecFn<'_>, depth: u32, u: f64, v: f64, dir: usize) -> Result<FrameVec> {
        let h = self.step(depth);
        let dw = if dir == 0 {
            fd::first(|t| w(u + t, v), 0.0, h)?
        } else {
            fd::first(|t| w(u, v + t), 0.0, h)?
        };
        let partials = self.partials(u, v)?;
        let conn = self.space.frozen_covariant(self.point(u, v), partials[dir], w(u, v)?);
        Ok(dw + conn)
    }

    /// `∇^φ_{∂_u} W` and `∇^φ_{∂_v} W`.
    pub fn covariant_partials(&self, w: &PullbackSection<'_>, u: f64, v: f64) -> Result<[FrameVec; 2]> {
        Ok([
            self.covariant_partial(&*w.f, w.depth, u, v, 0)?,
            self.covariant_partial(&*w.f, w.depth, u, v, 1)?,
        ])
    }

    /// `∇^φ_X W` for a tangent vector `X` given in frame components.
    pub fn covariant_along(&self, w: &PullbackSection<'_>, u: f64, v: f64, x: FrameVec) -> Result<FrameVec> {
        let c = self.tangent_coords(u, v, x)?;
        let d = self.covariant_partials(w, u, v)?;
        Ok(c[0] * d[0] + c[1] * d[1])
    }

    fn tangent_coords(&self, u: f64, v: f64, x: FrameVec) -> Result<[f64; 2]> {
        let [pu, pv] = self.partials(u, v)?;
        let gi = self.inverse_metric(u, v)?;
        let (a, b) = (x.dot(pu), x.dot(pv));
        Ok([gi[0][0] * a + gi[0][1] * b, gi[1][0] * a + gi[1][1] * b])
    }

    /// Rough Laplacian `Δ̄W = -g^{ab}(∇_a∇_b W - Γ^c_ab ∇_c W)`.
    pub fn rough_laplacian_fd(&self, w: &PullbackSection<'_>, u: f64, v: f64) -> Result<FrameVec> {
        let d = w.depth;
        self.check_interior(u, v, d + 2)?;
        let first = |dir: usize| move |uu: f64, vv: f64| self.covariant_partial(&*w.f, d, uu, vv, dir);
        let (fu, fv) = (first(0), first(1));
        let firsts: [&VecFn<'_>; 2] = [&fu, &fv];
        let gi = self.inverse_metric(u, v)?;
        let gamma = self.christoffel(u, v)?;
        let grad = [firsts[0](u, v)?, firsts[1](u, v)?];
        let mut out = FrameVec::ZERO;
        for a in 0..2 {
            for b in 0..2 {
                let second = self.covariant_partial(firsts[b], d + 1, u, v, a)?;
                let corr = gamma[0][a][b] * grad[0] + gamma[1][a][b] * grad[1];
                out += -gi[a][b] * (second - corr);
            }
        }
        Ok(out)
    }

    fn scalar_partials(&self, f: &ScalarFn<'_>, depth: u32, u: f64, v: f64) -> Result<[f64; 2]> {
        let h = self.step(depth);
        Ok([fd::first(|t| f(u + t, v), 0.0, h)?, fd::first(|t| f(u, v + t), 0.0, h)?])
    }

    /// Surface gradient of a function, in frame components.
    pub fn gradient(&self, f: &ScalarField<'_>, u: f64, v: f64) -> Result<FrameVec> {
        self.check_interior(u, v, f.depth + 1)?;
        let d = self.scalar_partials(&*f.f, f.depth, u, v)?;
        let gi = self.inverse_metric(u, v)?;
        let [pu, pv] = self.partials(u, v)?;
        let cu = gi[0][0] * d[0] + gi[0][1] * d[1];
        let cv = gi[1][0] * d[0] + gi[1][1] * d[1];
        Ok(cu * pu + cv * pv)
    }

    /// Laplace–Beltrami operator with the sign making it nonnegative.
    pub fn laplacian(&self, f: &ScalarField<'_>, u: f64, v: f64) -> Result<f64> {
        let d = f.depth;
        self.check_interior(u, v, d + 2)?;
        let gi = self.inverse_metric(u, v)?;
        let gamma = self.christoffel(u, v)?;
        let grad = self.scalar_partials(&*f.f, d, u, v)?;
        let hu = |uu: f64, vv: f64| Ok(self.scalar_partials(&*f.f, d, uu, vv)?[0]);
        let hv = |uu: f64, vv: f64| Ok(self.scalar_partials(&*f.f, d, uu, vv)?[1]);
        let du = self.scalar_partials(&hu, d + 1, u, v)?;
        let dv = self.scalar_partials(&hv, d + 1, u, v)?;
        let hess = [[du[0], dv[0]], [du[1], dv[1]]];
        let mut out = 0.0;
        for a in 0..2 {
            for b in 0..2 {
                out -= gi[a][b] * (hess[a][b] - gamma[0][a][b] * grad[0] - gamma[1][a][b] * grad[1]);
            }
        }
        Ok(out)
    }

    /// Shape operator and derived quantities, with `A(X) = -∇̄_X η`.
    pub fn shape_data(&self, u: f64, v: f64) -> Result<ShapeData> {
        self.check_interior(u, v, 2)?;
        let b = self.basis(u, v)?;
        let normal = |uu: f64, vv: f64| self.normal(uu, vv);
        let au = -self.covariant_partial(&normal, 1, u, v, 0)?;
        let av = -self.covariant_partial(&normal, 1, u, v, 1)?;
        let a1 = b.coef[0][0] * au + b.coef[0][1] * av;
        let a2 = b.coef[1][0] * au + b.coef[1][1] * av;
        Ok(ShapeData::from_basis(b.x1, b.x2, [[a1.dot(b.x1), a1.dot(b.x2)], [a2.dot(b.x1), a2.dot(b.x2)]]))
    }

    /// Unit normal as a section.
    pub fn normal_section(&self) -> PullbackSection<'_> {
        PullbackSection::new(1, move |u, v| self.normal(u, v))
    }

    /// `V = ν E3ᵀ` as a section.
    pub fn v_section(&self) -> PullbackSection<'_> {
        PullbackSection::new(1, move |u, v| {
            let n = self.normal(u, v)?;
            let nu = n.0[2];
            Ok(nu * (FrameVec::basis(2) - nu * n))
        })
    }

    /// `E3ᵀ` as a section.
    pub fn e3top_section(&self) -> PullbackSection<'_> {
        PullbackSection::new(1, move |u, v| {
            let n = self.normal(u, v)?;
            Ok(FrameVec::basis(2) - n.0[2] * n)
        })
    }

    /// Mean curvature vector `H = f η`.
    pub fn mean_curvature_section(&self) -> PullbackSection<'_> {
        PullbackSection::new(2, move |u, v| {
            let s = self.shape_data(u, v)?;
            Ok(s.f * s.eta)
        })
    }

    /// `H = α η` for a patch known to have constant mean curvature `α`.
    pub fn cmc_mean_curvature_section(&self, alpha: f64) -> PullbackSection<'_> {
        PullbackSection::new(1, move |u, v| Ok(alpha * self.normal(u, v)?))
    }

    pub fn nu_field(&self) -> ScalarField<'_> {
        ScalarField::new(1, move |u, v| Ok(self.normal(u, v)?.0[2]))
    }

    pub fn mean_curvature_field(&self) -> ScalarField<'_> {
        ScalarField::new(2, move |u, v| Ok(self.shape_data(u, v)?.f))
    }

    pub fn norm_a2_field(&self) -> ScalarField<'_> {
        ScalarField::new(2, move |u, v| Ok(self.shape_data(u, v)?.norm_a2))
    }

    /// Mean curvature at `(u, v)` after checking it is constant on a small
    /// cross around the point.
    pub fn cmc_value(&self, u: f64, v: f64, tol: f64) -> Result<f64> {
        let r = 10.0 * self.step(1);
        let samples = [(u, v), (u + r, v), (u - r, v), (u, v + r), (u, v - r)];
        let fs: Vec<f64> = samples
            .iter()
            .map(|&(a, b)| self.shape_data(a, b).map(|s| s.f))
            .collect::<Result<_>>()?;
        let lo = fs.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = fs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        if hi - lo > tol {
            return Err(Error::NotCmc { spread: hi - lo, tol });
        }
        Ok(fs[0])
    }

    /// Tension field `τ = 2 f η`.
    pub fn tension(&self, u: f64, v: f64) -> Result<FrameVec> {
        let s = self.shape_data(u, v)?;
        Ok(2.0 * s.f * s.eta)
    }

    /// Left-hand sides of the biharmonic system: the normal equation
    /// `Δf + f|A|² - f Ric(η,η)` and the tangential equation
    /// `2A(grad f) + 2f grad f - 2f Ric(η)ᵀ`.
    pub fn biharmonic_residual(&self, u: f64, v: f64) -> Result<(f64, FrameVec)> {
        let params = self.space.params();
        let s = self.shape_data(u, v)?;
        let field = self.mean_curvature_field();
        let grad = self.gradient(&field, u, v)?;
        let lap = self.laplacian(&field, u, v)?;
        let scalar = lap + s.f * s.norm_a2 - s.f * ricci(&params, s.eta, s.eta);
        let tangent = 2.0 * s.shape(grad) + 2.0 * s.f * grad - 2.0 * s.f * s.tangential(ricci_vector(&params, s.eta));
        Ok((scalar, tangent))
    }

    /// Residuals of the two first-order identities for `E3`:
    /// the largest of `|∇_X E3ᵀ - ν(AX - (ℓ/2)JX) - ⟨AX, E3ᵀ⟩η|` and
    /// `|X(ν) + ⟨AX - (ℓ/2)JX, E3⟩|` over the basis vectors.
    pub fn verify_e3_identities(&self, u: f64, v: f64) -> Result<(f64, f64)> {
        let l = self.space.params().l;
        let s = self.shape_data(u, v)?;
        let e3t = self.e3top_section();
        let nu = self.nu_field();
        let grad_nu = self.gradient(&nu, u, v)?;
        let mut res = (0.0f64, 0.0f64);
        for x in [s.x1, s.x2] {
            let lhs = self.covariant_along(&e3t, u, v, x)?;
            let ax = s.shape(x);
            let w = ax - 0.5 * l * s.rotate(x);
            let rhs = s.nu * w + ax.dot(s.e3top) * s.eta;
            res.0 = res.0.max((lhs - rhs).norm());
            res.1 = res.1.max((grad_nu.dot(x) + w.0[2]).abs());
        }
        Ok(res)
    }

    /// `(Δ̄η)ᵀ - 2 grad f - (4m-ℓ²) ν E3ᵀ`; the tangential part of `Δ̄η`
    /// is the trace of `∇A`.
    pub fn trace_identity_residual(&self, u: f64, v: f64) -> Result<FrameVec> {
        let params = self.space.params();
        let s = self.shape_data(u, v)?;
        let lap = self.rough_laplacian_fd(&self.normal_section(), u, v)?;
        let grad = self.gradient(&self.mean_curvature_field(), u, v)?;
        Ok(s.tangential(lap) - 2.0 * grad - params.gap() * s.v_field())
    }
}

/// Closed form of `Δ̄H` for `H = f η`.
pub fn delta_h_closed(params: &BcvParams, s: &ShapeData, grad_f: FrameVec, lap_f: f64) -> FrameVec {
    (lap_f + s.f * s.norm_a2) * s.eta + 2.0 * s.shape(grad_f) + 2.0 * s.f * grad_f + params.gap() * s.f * s.v_field()
}

/// Closed form of `Δ̄V` for `V = ν E3ᵀ` on a CMC surface.
pub fn delta_v_closed(params: &BcvParams, s: &ShapeData) -> FrameVec {
    let (l, d, nu) = (params.l, params.gap(), s.nu);
    let et = s.e3top;
    let aet = s.shape(et);
    let a2et = s.shape(aet);
    let jet = s.rotate(et);
    let et2 = et.dot(et);
    let t1 = 2.0 * nu * (2.0 * a2et + 0.75 * l * (s.shape(jet) - s.rotate(aet)));
    let t2 = (d * (et2 - nu * nu) + s.norm_a2 + 1.25 * l * l) * nu * et;
    let t3 = (2.0 * aet.dot(aet) + l * jet.dot(aet) - 2.0 * nu * nu * s.norm_a2 - d * nu * nu * et2) * s.eta;
    t1 + t2 + t3
}

/// `Δ̄V` on an arbitrary surface: the CMC form plus the terms carried by
/// `grad f` through the trace of `∇A`.
pub fn delta_v_general(params: &BcvParams, s: &ShapeData, grad_f: FrameVec) -> FrameVec {
    let g = grad_f.dot(s.e3top);
    delta_v_closed(params, s) - 2.0 * s.nu * s.nu * grad_f + 2.0 * g * s.e3top - 2.0 * s.nu * g * s.eta
}

/// Closed-form 3-tension of a CMC surface with mean curvature `alpha`,
/// as printed in the source: exact on Hopf cylinders, and off by
/// `-16α³(4m-ℓ²)ν²η` whenever `ν ≠ 0` (see [`tau3_cmc_assembled`]).
pub fn tau3_cmc_closed(params: &BcvParams, s: &ShapeData, alpha: f64, grad_norm_a2: FrameVec, lap_norm_a2: f64) -> FrameVec {
    let (m, l, d, nu) = (params.m, params.l, params.gap(), s.nu);
    let (a2, nu2, al2) = (s.norm_a2, s.nu * s.nu, alpha * alpha);
    let et = s.e3top;
    let aet = s.shape(et);
    let jet = s.rotate(et);
    let eta_coef = alpha
        * (2.0 * lap_norm_a2
            + 2.0 * a2 * a2
            + a2 * (l * l * (1.0 + 2.0 * nu2) - 8.0 * m * (1.0 + nu2))
            + 4.0 * d * aet.dot(aet)
            + 2.0 * l * d * jet.dot(aet)
            - 4.0 * alpha * d * aet.dot(et)
            + 2.0 * al2 * l * l * (3.0 + 4.0 * nu2)
            - 32.0 * m * al2 * (1.0 + nu2));
    let et_coef = 2.0 * alpha * d * nu * (3.0 * a2 + 4.0 * al2 + 3.0 * l * l * nu2 + m * (4.0 - 12.0 * nu2));
    let bracket = 2.0 * s.shape(aet) - 0.75 * l * s.rotate(aet) + 0.75 * l * s.shape(jet);
    eta_coef * s.eta + et_coef * et + 4.0 * alpha * d * nu * bracket - 4.0 * al2 * d * nu * aet
        + 4.0 * alpha * s.shape(grad_norm_a2)
}

/// 3-tension of a CMC surface assembled from its definition
/// `Δ̄²τ - Σ R(Δ̄τ, X_i)X_i - Σ R(∇_{X_i}τ, τ)X_i`, with `Δ̄τ`, `Δ̄²τ` and
/// `Δ̄V` in closed form and the curvature terms from the curvature operator.
pub fn tau3_cmc_assembled(params: &BcvParams, s: &ShapeData, alpha: f64, grad_norm_a2: FrameVec, lap_norm_a2: f64) -> FrameVec {
    let d = params.gap();
    let a2 = s.norm_a2;
    let v = s.v_field();
    let lap_tau = 2.0 * alpha * a2 * s.eta + 2.0 * alpha * d * v;
    let lap2_tau = 2.0 * alpha * (a2 * a2 + lap_norm_a2) * s.eta
        + 4.0 * alpha * s.shape(grad_norm_a2)
        + 2.0 * alpha * a2 * d * v
        + 2.0 * alpha * d * delta_v_closed(params, s);
    let tau = 2.0 * alpha * s.eta;
    let mut out = lap2_tau;
    for x in [s.x1, s.x2] {
        out = out - curvature_op(params, lap_tau, x, x);
        out = out - curvature_op(params, -2.0 * alpha * s.shape(x), tau, x);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shape_roundtrip() {
        let x1 = FrameVec::new(1.0, 0.0, 0.0);
        let x2 = FrameVec::new(0.0, 0.0, 1.0);
        let s = ShapeData::from_basis(x1, x2, [[-2.0, 0.5], [0.5, 0.0]]);
        assert_eq!(s.eta, FrameVec::new(0.0, -1.0, 0.0));
        assert_eq!(s.shape(x1), FrameVec::new(-2.0, 0.0, 0.5));
        assert_eq!(s.rotate(x1), x2);
        assert!((s.norm_a2 - 4.5).abs() < 1e-15);
        assert_eq!(s.nu, 0.0);
    }
}
