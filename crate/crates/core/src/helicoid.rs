//! Half-space model for `m < 0`, the isometry onto it, and parabolic
//! helicoids `(u, v) ↦ (u, v, a log v)`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::space::{Ambient, BcvParams, CoordVec, FrameVec, Point3};
use crate::surface::{tau3_cmc_assembled, tau3_cmc_closed, ParamRect, ShapeData, SurfacePatch};

/// `{ỹ > 0}` with the metric `(dx̃² + dỹ²)/(-4mỹ²) + (dz̃ + ℓ/(4mỹ) dx̃)²`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HalfSpace {
    pub params: BcvParams,
}

fn require_negative_m(params: &BcvParams) -> Result<f64> {
    if params.m < 0.0 {
        Ok((-params.m).sqrt())
    } else {
        Err(Error::InvalidParams(format!("the half-space model needs m < 0, got m = {}", params.m)))
    }
}

impl HalfSpace {
    pub fn new(m: f64, l: f64) -> Result<Self> {
        let params = BcvParams::new(m, l);
        require_negative_m(&params)?;
        Ok(Self { params })
    }

    fn k(&self) -> f64 {
        (-self.params.m).sqrt()
    }

    fn check(&self, p: Point3) -> Result<()> {
        if p.y > 0.0 && p.y.is_finite() {
            Ok(())
        } else {
            Err(Error::OutOfDomain { point: p.to_array(), factor: p.y })
        }
    }
}

/// `∇̃_{Ẽ_i} Ẽ_j` in the half-space frame.
pub fn halfspace_connection(params: &BcvParams, i: usize, j: usize) -> Result<FrameVec> {
    let k = require_negative_m(params)?;
    let hl = 0.5 * params.l;
    Ok(match (i, j) {
        (0, 0) => FrameVec::new(0.0, 2.0 * k, 0.0),
        (0, 1) => FrameVec::new(-2.0 * k, 0.0, hl),
        (0, 2) => FrameVec::new(0.0, -hl, 0.0),
        (1, 0) => FrameVec::new(0.0, 0.0, -hl),
        (1, 2) => FrameVec::new(hl, 0.0, 0.0),
        (2, 0) => FrameVec::new(0.0, -hl, 0.0),
        (2, 1) => FrameVec::new(hl, 0.0, 0.0),
        _ => FrameVec::ZERO,
    })
}

impl Ambient for HalfSpace {
    fn params(&self) -> BcvParams {
        self.params
    }

    fn frame(&self, p: Point3) -> Result<[CoordVec; 3]> {
        self.check(p)?;
        let k = self.k();
        Ok([
            CoordVec::new(2.0 * k * p.y, 0.0, self.params.l / (2.0 * k)),
            CoordVec::new(0.0, 2.0 * k * p.y, 0.0),
            CoordVec::new(0.0, 0.0, 1.0),
        ])
    }

    fn to_frame(&self, p: Point3, v: CoordVec) -> Result<FrameVec> {
        self.check(p)?;
        let k = self.k();
        let c1 = v.0[0] / (2.0 * k * p.y);
        let c2 = v.0[1] / (2.0 * k * p.y);
        Ok(FrameVec::new(c1, c2, v.0[2] - c1 * self.params.l / (2.0 * k)))
    }

    fn bracket(&self, _p: Point3, i: usize, j: usize) -> FrameVec {
        let v = FrameVec::new(-2.0 * self.k(), 0.0, self.params.l);
        match (i, j) {
            (0, 1) => v,
            (1, 0) => -v,
            _ => FrameVec::ZERO,
        }
    }

    fn connection(&self, _p: Point3, i: usize, j: usize) -> FrameVec {
        halfspace_connection(&self.params, i, j).expect("constructed with m < 0")
    }
}

/// The isometry from the rotational model (restricted to `F > 0`) onto the
/// half-space model.
pub fn theta_isometry(params: &BcvParams, p: Point3) -> Result<Point3> {
    let k = require_negative_m(params)?;
    let m = params.m;
    let f = 1.0 + m * (p.x * p.x + p.y * p.y);
    if !(f > 0.0) {
        return Err(Error::OutOfDomain { point: p.to_array(), factor: f });
    }
    let g2 = (1.0 / k + p.x).powi(2) + p.y * p.y;
    if !(g2 > 0.0) {
        return Err(Error::OutOfRegion(format!("G vanishes at {:?}", p.to_array())));
    }
    let g = g2.sqrt();
    Ok(Point3::new(
        2.0 * p.y / (k * g2),
        f / (-m * g2),
        p.z + params.l / (2.0 * m) * (p.y / g).clamp(-1.0, 1.0).acos(),
    ))
}

/// Closed-form geometry of the parabolic helicoid with mean curvature `α`.
/// All vectors are in the half-space frame; `x_u`, `x_v` are taken at `v = 1`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HelicoidData {
    pub alpha: f64,
    pub m: f64,
    pub l: f64,
    /// Slope, signed like `α/m`.
    pub a: f64,
    #[serde(rename = "L")]
    pub big_l: f64,
    pub nu: f64,
    pub norm_a2: f64,
    /// Mean curvature computed from the shape operator; equals `alpha`.
    pub mean_curvature: f64,
    pub x_u: FrameVec,
    pub x_v: FrameVec,
    pub eta: FrameVec,
    pub e3top: FrameVec,
    pub j_e3top: FrameVec,
    pub a_e3top: FrameVec,
    pub a_j_e3top: FrameVec,
    pub a2_e3top: FrameVec,
    pub j_a_e3top: FrameVec,
    pub t1: f64,
    pub t2: f64,
    pub t3: f64,
}

impl HelicoidData {
    pub fn params(&self) -> BcvParams {
        BcvParams::new(self.m, self.l)
    }

    /// Pointwise extrinsic data; constant along the surface.
    pub fn shape_data(&self) -> ShapeData {
        let space = HalfSpace { params: self.params() };
        let eta = self.eta;
        let shape = move |x: FrameVec| -> FrameVec { -space.frozen_covariant(Point3::new(0.0, 1.0, 0.0), x, eta) };
        let x1 = (1.0 / self.e3top.norm()) * self.e3top;
        ShapeData::from_normal(eta, x1, shape)
    }

    /// The surface as a patch of the half-space model.
    pub fn patch(&self, domain: ParamRect) -> Result<SurfacePatch<HalfSpace>> {
        if domain.v.0 <= 0.0 {
            return Err(Error::InvalidArgument("helicoid patches need v > 0".into()));
        }
        let a = self.a;
        Ok(SurfacePatch::new(HalfSpace { params: self.params() }, domain, move |u, v| Point3::new(u, v, a * v.ln())))
    }
}

/// Checks `m < 0`, `α ≠ 0` and `α² + m < 0`.
pub fn check_admissible(alpha: f64, m: f64) -> Result<()> {
    if !(m < 0.0) {
        return Err(Error::Inadmissible(format!("parabolic helicoids need m < 0, got m = {m}")));
    }
    if alpha == 0.0 || !alpha.is_finite() {
        return Err(Error::Inadmissible(format!("mean curvature must be a non-zero number, got {alpha}")));
    }
    if !(alpha * alpha + m < 0.0) {
        return Err(Error::Inadmissible(format!("need alpha^2 + m < 0, got {}", alpha * alpha + m)));
    }
    Ok(())
}

/// The triharmonicity polynomials `T1, T2, T3` as printed in the source.
pub fn t_polynomials(alpha: f64, m: f64, l: f64) -> [f64; 3] {
    let (a2, l2) = (alpha * alpha, l * l);
    let t2 = l2 * l2 + l2 * (-16.0 * m + 6.0 * a2) + 32.0 * (2.0 * m * m - 3.0 * m * a2 - 2.0 * a2 * a2);
    let t3 = l2 * l2 + l2 * (-8.0 * m + 2.0 * a2) + 64.0 * a2 * (m + a2);
    [l * t2, t2, t3]
}

/// The same polynomials for the 3-tension assembled from its definition:
/// the printed ones shifted by `64α²(m+α²)` in `T2`, `T3` (and `ℓ` times
/// that in `T1`).
pub fn corrected_t_polynomials(alpha: f64, m: f64, l: f64) -> [f64; 3] {
    let [_, t2, t3] = t_polynomials(alpha, m, l);
    let shift = 64.0 * alpha * alpha * (m + alpha * alpha);
    [l * (t2 + shift), t2 + shift, t3 - shift]
}

/// `α [s T1/k, α T2/k, -2 s T3]` with `k = √(-m)`, `s = √((α²+m)/(4m-ℓ²))`.
pub fn t_display(alpha: f64, m: f64, l: f64, t: [f64; 3]) -> FrameVec {
    let k = (-m).sqrt();
    let s = ((alpha * alpha + m) / (4.0 * m - l * l)).sqrt();
    alpha * FrameVec::new(s * t[0] / k, alpha * t[1] / k, -2.0 * s * t[2])
}

pub fn helicoid_geometry(alpha: f64, m: f64, l: f64) -> Result<HelicoidData> {
    check_admissible(alpha, m)?;
    let k = (-m).sqrt();
    let a = alpha / (4.0 * m) * ((4.0 * m - l * l) / (m + alpha * alpha)).sqrt();
    let big_l2 = l * l + 4.0 * m * (4.0 * a * a * m - 1.0);
    if !(big_l2 > 0.0) {
        return Err(Error::Inadmissible(format!("L^2 = {big_l2} is not positive")));
    }
    let big_l = big_l2.sqrt();
    let eta = (1.0 / big_l) * FrameVec::new(l, 4.0 * a * m, 2.0 * k);
    let nu = 2.0 * k / big_l;
    let e3top = FrameVec::basis(2) - nu * eta;
    let space = HalfSpace { params: BcvParams::new(m, l) };
    let p = Point3::new(0.0, 1.0, 0.0);
    let shape = |x: FrameVec| -space.frozen_covariant(p, x, eta);
    let j = |x: FrameVec| eta.cross(x);
    let a_e3top = shape(e3top);
    let mut data = HelicoidData {
        alpha,
        m,
        l,
        a,
        big_l,
        nu,
        norm_a2: 0.0,
        mean_curvature: 0.0,
        x_u: FrameVec::new(1.0 / (2.0 * k), 0.0, l / (4.0 * m)),
        x_v: FrameVec::new(0.0, 1.0 / (2.0 * k), a),
        eta,
        e3top,
        j_e3top: j(e3top),
        a_e3top,
        a_j_e3top: shape(j(e3top)),
        a2_e3top: shape(a_e3top),
        j_a_e3top: j(a_e3top),
        t1: 0.0,
        t2: 0.0,
        t3: 0.0,
    };
    let sd = data.shape_data();
    data.norm_a2 = sd.norm_a2;
    data.mean_curvature = sd.f;
    [data.t1, data.t2, data.t3] = t_polynomials(alpha, m, l);
    Ok(data)
}

/// The 3-tension of a parabolic helicoid four ways: from the printed
/// polynomials, from the printed general CMC formula, from the definition,
/// and from the corrected polynomials.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HelicoidTension {
    pub t: [f64; 3],
    pub display: FrameVec,
    pub closed: FrameVec,
    pub assembled: FrameVec,
    pub corrected_t: [f64; 3],
    pub corrected_display: FrameVec,
}

pub fn tau3_helicoid(alpha: f64, m: f64, l: f64) -> Result<HelicoidTension> {
    let data = helicoid_geometry(alpha, m, l)?;
    let sd = data.shape_data();
    let params = data.params();
    let t = t_polynomials(alpha, m, l);
    let corrected_t = corrected_t_polynomials(alpha, m, l);
    Ok(HelicoidTension {
        t,
        display: t_display(alpha, m, l, t),
        closed: tau3_cmc_closed(&params, &sd, alpha, FrameVec::ZERO, 0.0),
        assembled: tau3_cmc_assembled(&params, &sd, alpha, FrameVec::ZERO, 0.0),
        corrected_t,
        corrected_display: t_display(alpha, m, l, corrected_t),
    })
}

/// Search window and sample sizes for the non-existence certificate.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CertifyConfig {
    pub alpha_range: (f64, f64),
    pub m_min: f64,
    /// `m` ranges up to `-α² - m_gap`.
    pub m_gap: f64,
    pub l_range: (f64, f64),
    pub resolution: usize,
    pub identity_samples: usize,
    pub seed: u64,
}

impl Default for CertifyConfig {
    fn default() -> Self {
        Self {
            alpha_range: (0.1, 2.0),
            m_min: -5.0,
            m_gap: 0.01,
            l_range: (0.0, 3.0),
            resolution: 50,
            identity_samples: 100,
            seed: 7,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NonexistenceReport {
    /// Minimum over the grid of `max(|T1|, |T2|, |T3|)`.
    pub grid_min_residual: f64,
    /// `(α, m, ℓ)` attaining it.
    pub grid_argmin: [f64; 3],
    /// Same scan for the corrected polynomials.
    pub corrected_grid_min_residual: f64,
    pub corrected_grid_argmin: [f64; 3],
    /// Largest relative residual of the substitution identity.
    pub identity_max_residual: f64,
    /// `ℓ²/α²` forced at `m = -3α²/2`.
    pub witness_l2_over_alpha2: f64,
    /// `(m + α²)/α²` at `m = α²(9 - √145)/4`.
    pub witness_m_plus_alpha2_over_alpha2: f64,
    pub certified: bool,
}

/// `ℓ²` forced by `T2 = T3`.
pub fn forced_l2(alpha: f64, m: f64) -> f64 {
    let a2 = alpha * alpha;
    -8.0 * (-2.0 * m * m + 5.0 * m * a2 + 4.0 * a2 * a2) / (2.0 * m - a2)
}

/// Relative residual of `T2(ℓ²*)(2m-α²)² = 48α²(2m+3α²)(-2m²+9mα²+8α⁴)`.
pub fn substitution_identity_residual(alpha: f64, m: f64) -> f64 {
    let a2 = alpha * alpha;
    let l2 = forced_l2(alpha, m);
    let t2 = l2 * l2 + l2 * (-16.0 * m + 6.0 * a2) + 32.0 * (2.0 * m * m - 3.0 * m * a2 - 2.0 * a2 * a2);
    let lhs = t2 * (2.0 * m - a2).powi(2);
    let rhs = 48.0 * a2 * (2.0 * m + 3.0 * a2) * (-2.0 * m * m + 9.0 * m * a2 + 8.0 * a2 * a2);
    (lhs - rhs).abs() / rhs.abs().max(lhs.abs()).max(1.0)
}

fn linspace(lo: f64, hi: f64, n: usize) -> impl Iterator<Item = f64> + Clone {
    (0..n).map(move |i| if n == 1 { lo } else { lo + (hi - lo) * i as f64 / (n - 1) as f64 })
}

fn grid_min(cfg: &CertifyConfig, poly: fn(f64, f64, f64) -> [f64; 3]) -> (f64, [f64; 3]) {
    let n = cfg.resolution;
    let alphas: Vec<f64> = linspace(cfg.alpha_range.0, cfg.alpha_range.1, n).collect();
    alphas
        .par_iter()
        .map(|&alpha| {
            let mut best = (f64::INFINITY, [alpha, 0.0, 0.0]);
            for m in linspace(cfg.m_min, -alpha * alpha - cfg.m_gap, n) {
                for l in linspace(cfg.l_range.0, cfg.l_range.1, n) {
                    let r = poly(alpha, m, l).iter().fold(0.0f64, |acc, t| acc.max(t.abs()));
                    if r < best.0 {
                        best = (r, [alpha, m, l]);
                    }
                }
            }
            best
        })
        .reduce(|| (f64::INFINITY, [0.0; 3]), |a, b| if b.0 < a.0 { b } else { a })
}

pub fn nonexistence_certify(cfg: &CertifyConfig) -> Result<NonexistenceReport> {
    if cfg.resolution < 2 || cfg.alpha_range.0 <= 0.0 || cfg.alpha_range.1 < cfg.alpha_range.0 {
        return Err(Error::InvalidArgument("certification grid needs resolution >= 2 and 0 < alpha_min <= alpha_max".into()));
    }
    let (grid_min_residual, grid_argmin) = grid_min(cfg, t_polynomials);
    let (corrected_grid_min_residual, corrected_grid_argmin) = grid_min(cfg, corrected_t_polynomials);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut identity_max_residual = 0.0f64;
    for _ in 0..cfg.identity_samples {
        let alpha: f64 = rng.gen_range(cfg.alpha_range.0..=cfg.alpha_range.1);
        let m: f64 = rng.gen_range(cfg.m_min..(-alpha * alpha - cfg.m_gap).max(cfg.m_min + 1e-9));
        identity_max_residual = identity_max_residual.max(substitution_identity_residual(alpha, m));
    }
    let witness_l2_over_alpha2 = forced_l2(1.0, -1.5);
    let witness_m_plus_alpha2_over_alpha2 = (9.0 - 145f64.sqrt()) / 4.0 + 1.0;
    let certified = grid_min_residual > 0.0
        && identity_max_residual <= 1e-9
        && witness_l2_over_alpha2 < 0.0
        && witness_m_plus_alpha2_over_alpha2 > 0.0;
    Ok(NonexistenceReport {
        grid_min_residual,
        grid_argmin,
        corrected_grid_min_residual,
        corrected_grid_argmin,
        identity_max_residual,
        witness_l2_over_alpha2,
        witness_m_plus_alpha2_over_alpha2,
        certified,
    })
}
