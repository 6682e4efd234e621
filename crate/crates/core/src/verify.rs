//! Verification suites: every closed form checked against an independent
//! evaluation, reported as named residuals against tolerances.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::classify::{classify, quadratic_condition, CaseTag};
use crate::config::RunConfig;
use crate::error::Result;
use crate::helicoid::{
    helicoid_geometry, nonexistence_certify, tau3_helicoid, theta_isometry, HalfSpace,
};
use crate::hopf::{
    curvature_cyl, curvature_terms_display, cylinder_patch, cylinder_shape_data, delta2_tau_display,
    delta_tau_display, geodesic_curvature, r_tension_assembled, r_tension_cmc, rough_laplacian_cyl, tau3_hopf,
    tension_cyl, triharmonic_residuals, ChartCircle, CylVector, KgJet,
};
use crate::jet::Jet;
use crate::oracle::{bracket_fd_oracle, connection_fd_oracle, curvature_fd_oracle, metric_compatibility_residual};
use crate::space::{
    curvature_form, curvature_op, frame_at, metric_at, ricci, Ambient, BcvParams, BcvSpace, CoordVec, FrameVec,
    Point3,
};
use crate::surface::{
    delta_h_closed, delta_v_closed, delta_v_general, tau3_cmc_assembled, tau3_cmc_closed, ParamRect, SurfacePatch,
};

/// Tolerance for identities evaluated in exact arithmetic paths.
pub const EXACT_TOL: f64 = 1e-10;
/// Tolerance for the biharmonic residual on cylinder patches.
pub const BIHARMONIC_TOL: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Core,
    Surface,
    Hopf,
    Helicoid,
    All,
}

impl Suite {
    fn parts(self) -> Vec<Suite> {
        match self {
            Suite::All => vec![Suite::Core, Suite::Surface, Suite::Hopf, Suite::Helicoid],
            s => vec![s],
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub residual: f64,
    pub tolerance: f64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub error: Option<String>,
}

impl Check {
    fn new(name: impl Into<String>, residual: Result<f64>, tolerance: f64) -> Self {
        let name = name.into();
        match residual {
            Ok(r) => Check { name, passed: r <= tolerance, residual: r, tolerance, error: None },
            Err(e) => Check { name, passed: false, residual: f64::INFINITY, tolerance, error: Some(e.to_string()) },
        }
    }

    fn flag(name: impl Into<String>, ok: Result<bool>) -> Self {
        Check::new(name, ok.map(|b| if b { 0.0 } else { 1.0 }), 0.5)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub passed: bool,
    pub checks: Vec<Check>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub passed: bool,
    pub suites: Vec<SuiteReport>,
}

/// Runs the requested suite(s); `All` runs the four suites in parallel.
pub fn run(suite: Suite, cfg: &RunConfig) -> VerifyReport {
    let suites: Vec<SuiteReport> = suite
        .parts()
        .into_par_iter()
        .map(|s| {
            let checks = match s {
                Suite::Core => core_checks(cfg),
                Suite::Surface => surface_checks(cfg),
                Suite::Hopf => hopf_checks(cfg),
                Suite::Helicoid => helicoid_checks(cfg),
                Suite::All => unreachable!(),
            };
            SuiteReport { suite: s, passed: checks.iter().all(|c| c.passed), checks }
        })
        .collect();
    VerifyReport { passed: suites.iter().all(|s| s.passed), suites }
}

fn max_of(it: impl IntoIterator<Item = Result<f64>>) -> Result<f64> {
    it.into_iter().try_fold(0.0f64, |acc, r| r.map(|x| acc.max(x)))
}

/// Reference parameter pairs: Berger-type, hyperbolic product-like, Nil, round.
pub const CORE_PARAMS: [(f64, f64); 4] = [(1.0, 2.0), (-1.0, 1.0), (0.0, 1.0), (1.0, 0.0)];

/// A random point with `F ≥ 1/2`.
pub fn sample_point(rng: &mut impl Rng, params: &BcvParams) -> Point3 {
    let half = if params.m < 0.0 { 0.5 / (-params.m).sqrt() } else { 1.0 };
    Point3::new(rng.gen_range(-half..half), rng.gen_range(-half..half), rng.gen_range(-2.0..2.0))
}

fn random_frame_vec(rng: &mut impl Rng) -> FrameVec {
    FrameVec::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
}

fn core_checks(cfg: &RunConfig) -> Vec<Check> {
    let h = cfg.fd.step;
    let mut out = Vec::new();
    for (m, l) in CORE_PARAMS {
        let params = BcvParams::new(m, l);
        let space = BcvSpace { params };
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        let points: Vec<Point3> = (0..cfg.samples).map(|_| sample_point(&mut rng, &params)).collect();
        let pairs = || (0..3).flat_map(|i| (0..3).map(move |j| (i, j)));
        let tag = format!("(m={m}, l={l})");

        out.push(Check::new(
            format!("connection_vs_koszul_oracle {tag}"),
            max_of(points.iter().flat_map(|&p| {
                pairs().map(move |(i, j)| {
                    let exact = space.connection(p, i, j);
                    let fd = connection_fd_oracle(&space, p, i, j, h)?;
                    Ok((exact - fd).norm() / exact.norm().max(1.0))
                })
            })),
            cfg.fd.tol_first,
        ));
        out.push(Check::new(
            format!("bracket_vs_fd {tag}"),
            max_of(points.iter().flat_map(|&p| {
                pairs().map(move |(i, j)| {
                    let exact = space.bracket(p, i, j);
                    Ok((exact - bracket_fd_oracle(&space, p, i, j, h)?).norm() / exact.norm().max(1.0))
                })
            })),
            cfg.fd.tol_first,
        ));
        out.push(Check::new(
            format!("torsion_free {tag}"),
            max_of(points.iter().flat_map(|&p| {
                pairs().map(move |(i, j)| {
                    Ok((space.connection(p, i, j) - space.connection(p, j, i) - space.bracket(p, i, j)).norm())
                })
            })),
            EXACT_TOL,
        ));
        out.push(Check::new(
            format!("metric_compatibility {tag}"),
            max_of(points.iter().flat_map(|&p| {
                pairs().flat_map(move |(i, j)| {
                    (0..3).map(move |k| metric_compatibility_residual(&space, p, i, j, k, h).map(f64::abs))
                })
            })),
            cfg.fd.tol_first,
        ));
        out.push(Check::new(
            format!("frame_orthonormal {tag}"),
            max_of(points.iter().map(|&p| {
                let e = frame_at(&params, p)?;
                max_of(pairs().map(|(i, j)| {
                    let g = metric_at(&params, p, e[i], e[j])?;
                    Ok((g - if i == j { 1.0 } else { 0.0 }).abs())
                }))
            })),
            1e-12,
        ));
        out.push(Check::new(
            format!("curvature_vs_fd {tag}"),
            max_of(points.iter().flat_map(|&p| {
                pairs().flat_map(move |(i, j)| {
                    (0..3).map(move |k| {
                        let e = FrameVec::basis;
                        let exact = curvature_op(&params, e(i), e(j), e(k));
                        Ok((exact - curvature_fd_oracle(&space, p, i, j, k, h)?).norm())
                    })
                })
            })),
            cfg.fd.tol_second,
        ));
        let e = FrameVec::basis;
        out.push(Check::new(
            format!("sectional_curvatures {tag}"),
            Ok([
                curvature_form(&params, e(0), e(1), e(0), e(1)) - (4.0 * m - 0.75 * l * l),
                curvature_form(&params, e(0), e(2), e(0), e(2)) - 0.25 * l * l,
                curvature_form(&params, e(1), e(2), e(1), e(2)) - 0.25 * l * l,
            ]
            .iter()
            .fold(0.0f64, |a, x| a.max(x.abs()))),
            EXACT_TOL,
        ));
        out.push(Check::new(
            format!("ricci_values {tag}"),
            Ok([
                ricci(&params, e(0), e(0)) - (4.0 * m - 0.5 * l * l),
                ricci(&params, e(1), e(1)) - (4.0 * m - 0.5 * l * l),
                ricci(&params, e(2), e(2)) - 0.5 * l * l,
                ricci(&params, e(0), e(1)),
                ricci(&params, e(0), e(2)),
            ]
            .iter()
            .fold(0.0f64, |a, x| a.max(x.abs()))),
            EXACT_TOL,
        ));
        out.push(Check::new(
            format!("curvature_symmetries {tag}"),
            max_of((0..cfg.samples).map(|_| {
                let [x, y, z, w] = [0; 4].map(|_| random_frame_vec(&mut rng));
                let r = curvature_form(&params, x, y, z, w);
                Ok((r + curvature_form(&params, y, x, z, w))
                    .abs()
                    .max((r - curvature_form(&params, z, w, x, y)).abs()))
            })),
            EXACT_TOL,
        ));
        out.push(Check::new(
            format!("e3_covariant_is_rotation {tag}"),
            max_of(points.iter().map(|&p| {
                let x = random_frame_vec(&mut ChaCha8Rng::seed_from_u64((p.x * 1e6).to_bits()));
                Ok((space.frozen_covariant(p, x, e(2)) - 0.5 * l * x.cross(e(2))).norm())
            })),
            EXACT_TOL,
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x5f);
    out.push(Check::new(
        "space_form_degeneration",
        max_of((0..cfg.samples).map(|_| {
            let l: f64 = rng.gen_range(-2.0..2.0);
            let m = 0.25 * l * l;
            let params = BcvParams::new(m, l);
            let [x, y, z] = [0; 3].map(|_| random_frame_vec(&mut rng));
            let model = m * (y.dot(z) * x - x.dot(z) * y);
            Ok((curvature_op(&params, x, y, z) - model).norm())
        })),
        1e-12,
    ));
    out
}

fn cylinder(params: BcvParams, kappa: f64, fd: crate::fd::FdConfig) -> Result<SurfacePatch<BcvSpace>> {
    let c = ChartCircle::with_curvature(&params, kappa)?;
    Ok(cylinder_patch(BcvSpace { params }, c, ParamRect::new((-1.0, 1.0), (-1.0, 1.0))).with_fd(fd))
}

/// Residuals of the Laplacian lemmas on a CMC patch at `(u, v)`:
/// `(Δ̄H, Δ̄V, trace, E3 identities)`.
fn cmc_lemma_residuals<S: Ambient>(patch: &SurfacePatch<S>, u: f64, v: f64, tol: f64) -> Result<[f64; 4]> {
    let params = patch.space.params();
    let sd = patch.shape_data(u, v)?;
    let alpha = patch.cmc_value(u, v, tol)?;
    let h = patch.rough_laplacian_fd(&patch.cmc_mean_curvature_section(alpha), u, v)?;
    let vv = patch.rough_laplacian_fd(&patch.v_section(), u, v)?;
    let t = patch.trace_identity_residual(u, v)?;
    let (e1, e2) = patch.verify_e3_identities(u, v)?;
    Ok([
        (h - delta_h_closed(&params, &sd, FrameVec::ZERO, 0.0)).norm(),
        (vv - delta_v_closed(&params, &sd)).norm(),
        t.norm(),
        e1.max(e2),
    ])
}

fn push_lemmas(out: &mut Vec<Check>, tag: &str, r: Result<[f64; 4]>, tol: f64) {
    let names = ["delta_h", "delta_v", "trace_nabla_a", "e3_identities"];
    for (i, name) in names.iter().enumerate() {
        out.push(Check::new(format!("{name} {tag}"), r.clone().map(|a| a[i]), tol));
    }
}

fn surface_checks(cfg: &RunConfig) -> Vec<Check> {
    let tol = cfg.fd.tol_second;
    let mut out = Vec::new();
    for (m, l, k) in [(0.6, 0.9, 1.1), (1.0, 0.0, -0.7), (0.3, 1.5, 2.0)] {
        let params = BcvParams::new(m, l);
        let tag = format!("cylinder (m={m}, l={l}, kappa={k})");
        let patch = cylinder(params, k, cfg.fd);
        let lemmas = patch.as_ref().map_err(Clone::clone).and_then(|p| cmc_lemma_residuals(p, 0.2, 0.1, tol));
        push_lemmas(&mut out, &tag, lemmas, tol);
        out.push(Check::new(
            format!("shape_data {tag}"),
            patch.as_ref().map_err(Clone::clone).and_then(|p| {
                let sd = p.shape_data(0.2, 0.1)?;
                let ex = cylinder_shape_data(&params, k);
                Ok((sd.f - ex.f).abs().max((sd.norm_a2 - ex.norm_a2).abs()).max(sd.nu.abs()))
            }),
            tol,
        ));
        let sd = cylinder_shape_data(&params, k);
        let closed = tau3_cmc_closed(&params, &sd, -0.5 * k, FrameVec::ZERO, 0.0);
        let hopf = tau3_hopf(&params, &KgJet::constant(k)).to_frame();
        out.push(Check::new(format!("tau3_cmc_closed_vs_hopf {tag}"), Ok((closed - hopf).norm()), EXACT_TOL));
    }
    for (alpha, m, l) in [(0.5, -1.0, 1.0), (0.3, -2.0, 0.4), (1.1, -1.5, 0.0)] {
        let tag = format!("helicoid (alpha={alpha}, m={m}, l={l})");
        let patch = helicoid_geometry(alpha, m, l)
            .and_then(|d| d.patch(ParamRect::new((-0.5, 0.5), (0.5, 1.5))))
            .map(|p| p.with_fd(cfg.fd));
        let lemmas = patch.as_ref().map_err(Clone::clone).and_then(|p| cmc_lemma_residuals(p, 0.05, 0.95, tol));
        push_lemmas(&mut out, &tag, lemmas, tol);
        out.push(Check::new(
            format!("mean_curvature {tag}"),
            patch.as_ref().map_err(Clone::clone).and_then(|p| Ok((p.shape_data(0.05, 0.95)?.f - alpha).abs())),
            tol,
        ));
        out.push(Check::new(
            format!("tau3_definition_vs_assembled {tag}"),
            patch.as_ref().map_err(Clone::clone).and_then(|p| tau3_definition_residual(p, alpha, 0.05, 0.95)),
            tol,
        ));
    }
    let graph = SurfacePatch::new(BcvSpace::new(0.4, 1.3), ParamRect::new((-0.6, 0.6), (-0.6, 0.6)), |u, v| {
        Point3::new(u, v, 0.3 * u * u - 0.2 * u * v + 0.4 * v.sin())
    })
    .with_fd(cfg.fd);
    let general = (|| -> Result<[f64; 3]> {
        let params = graph.space.params;
        let (u, v) = (0.1, -0.05);
        let sd = graph.shape_data(u, v)?;
        let field = graph.mean_curvature_field();
        let grad = graph.gradient(&field, u, v)?;
        let lap = graph.laplacian(&field, u, v)?;
        let h = graph.rough_laplacian_fd(&graph.mean_curvature_section(), u, v)?;
        let vv = graph.rough_laplacian_fd(&graph.v_section(), u, v)?;
        Ok([
            (h - delta_h_closed(&params, &sd, grad, lap)).norm(),
            (vv - delta_v_general(&params, &sd, grad)).norm(),
            graph.trace_identity_residual(u, v)?.norm(),
        ])
    })();
    for (i, name) in ["delta_h", "delta_v_general", "trace_nabla_a"].iter().enumerate() {
        out.push(Check::new(format!("{name} graph (m=0.4, l=1.3)"), general.clone().map(|a| a[i]), tol));
    }
    out
}

/// `|τ₃ - tau3_cmc_assembled|` with `τ₃` evaluated from its definition using
/// numerical rough Laplacians of `η` and `V` on the patch.
pub fn tau3_definition_residual<S: Ambient>(patch: &SurfacePatch<S>, alpha: f64, u: f64, v: f64) -> Result<f64> {
    let params = patch.space.params();
    let sd = patch.shape_data(u, v)?;
    let lap_eta = patch.rough_laplacian_fd(&patch.normal_section(), u, v)?;
    let lap_v = patch.rough_laplacian_fd(&patch.v_section(), u, v)?;
    let (a2, d) = (sd.norm_a2, params.gap());
    let lap1 = 2.0 * alpha * a2 * sd.eta + 2.0 * alpha * d * sd.v_field();
    let tau = 2.0 * alpha * sd.eta;
    let mut fd = 2.0 * alpha * a2 * lap_eta + 2.0 * alpha * d * lap_v;
    for x in [sd.x1, sd.x2] {
        fd = fd - curvature_op(&params, lap1, x, x) - curvature_op(&params, -2.0 * alpha * sd.shape(x), tau, x);
    }
    Ok((fd - tau3_cmc_assembled(&params, &sd, alpha, FrameVec::ZERO, 0.0)).norm())
}

/// A random polynomial profile `κ(s)` of degree 5, as an exact jet at a random `s`.
pub fn random_profile(rng: &mut impl Rng) -> Jet {
    let coeffs: Vec<f64> = (0..6).map(|_| rng.gen_range(-1.0..1.0)).collect();
    Jet::polynomial(&coeffs, rng.gen_range(-1.0..1.0))
}

fn cyl_diff(a: CylVector, b: CylVector) -> f64 {
    (a.to_frame() - b.to_frame()).norm()
}

fn cyl_sum(a: CylVector, b: CylVector) -> CylVector {
    CylVector::new(a.x + b.x, a.e3 + b.e3, a.eta + b.eta)
}

/// `(Δ̄τ, Δ̄²τ, both curvature terms)` through the iterated Laplacian and the
/// curvature operator.
fn iterated_parts(params: &BcvParams, kappa: &Jet) -> Result<[CylVector; 4]> {
    let tau = tension_cyl(kappa);
    let l1 = rough_laplacian_cyl(params, kappa, &tau);
    let l2 = rough_laplacian_cyl(params, kappa, &l1);
    let l1v = l1.value()?;
    let tv = tau.value()?;
    let grads = [
        crate::hopf::covariant_x(params, kappa, &tau).value()?,
        crate::hopf::covariant_e3(params, &tau).value()?,
    ];
    let basis = [CylVector::new(1.0, 0.0, 0.0), CylVector::new(0.0, 1.0, 0.0)];
    let mut r1 = CylVector::default();
    let mut r2 = CylVector::default();
    for (g, e) in grads.iter().zip(basis) {
        let a = curvature_cyl(params, l1v, e, e);
        let b = curvature_cyl(params, *g, tv, e);
        r1 = CylVector::new(r1.x - a.x, r1.e3 - a.e3, r1.eta - a.eta);
        r2 = CylVector::new(r2.x - b.x, r2.e3 - b.e3, r2.eta - b.eta);
    }
    Ok([l1v, l2.value()?, r1, r2])
}

fn random_params(rng: &mut impl Rng) -> BcvParams {
    BcvParams::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0))
}

fn hopf_checks(cfg: &RunConfig) -> Vec<Check> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x40);
    let n = cfg.samples;
    let mut out = Vec::new();
    let cases: Vec<(BcvParams, Jet)> = (0..n).map(|_| (random_params(&mut rng), random_profile(&mut rng))).collect();

    let lemma = max_of(cases.iter().map(|(p, k)| {
        let kg = KgJet::from_jet(k)?;
        let [l1, l2, r1, r2] = iterated_parts(p, k)?;
        let (d1, d2) = curvature_terms_display(p, &kg);
        let scale = l2.max_abs().max(1.0);
        Ok(cyl_diff(l1, delta_tau_display(p, &kg))
            .max(cyl_diff(l2, delta2_tau_display(p, &kg)) / scale)
            .max(cyl_diff(r1, d1))
            .max(cyl_diff(r2, d2)))
    }));
    out.push(Check::new("cylinder_laplacian_and_curvature_displays", lemma, 1e-12));

    out.push(Check::new(
        "tau3_hopf_vs_assembly",
        max_of(cases.iter().map(|(p, k)| {
            let kg = KgJet::from_jet(k)?;
            let [_, l2, r1, r2] = iterated_parts(p, k)?;
            let assembled = cyl_sum(cyl_sum(l2, r1), r2);
            let general = r_tension_assembled(p, k, 3)?;
            let t = tau3_hopf(p, &kg);
            Ok(cyl_diff(t, assembled).max(cyl_diff(t, general)) / assembled.max_abs().max(1.0))
        })),
        1e-9,
    ));

    out.push(Check::new(
        "triharmonic_first_steps",
        max_of(cases.iter().map(|(p, k)| {
            // 4ℓK1 + 5κK2 = ℓκ̇(3ℓ²κ - 5κ³ - 40κ̈)
            let kg = KgJet::from_jet(k)?;
            let [k1, k2, _] = triharmonic_residuals(p, &kg);
            let l = p.l;
            let lhs = 4.0 * l * k1 + 5.0 * kg.k * k2;
            let rhs = l * kg.k1 * (3.0 * l * l * kg.k - 5.0 * kg.k.powi(3) - 40.0 * kg.k2);
            // ℓ = 0: K1 = -(5/2) d/ds(2κκ̈ - κ⁴ + κ̇²)
            let flat = BcvParams::new(p.m, 0.0);
            let [f1, _, _] = triharmonic_residuals(&flat, &kg);
            let first_integral = 4.0 * kg.k1 * kg.k2 + 2.0 * kg.k * kg.k3 - 4.0 * kg.k.powi(3) * kg.k1;
            Ok((lhs - rhs).abs().max((f1 + 2.5 * first_integral).abs()) / lhs.abs().max(f1.abs()).max(1.0))
        })),
        EXACT_TOL,
    ));

    out.push(Check::new(
        "triharmonic_cmc_cylinders",
        max_of((0..n).map(|_| {
            let l: f64 = rng.gen_range(-2.0..2.0);
            let m = 0.25 * l * l + rng.gen_range(0.05..2.0);
            let p = BcvParams::new(m, l);
            let k = (2.0 * p.gap()).sqrt();
            let zero = triharmonic_residuals(&p, &KgJet::constant(k)).iter().fold(0.0f64, |a, x| a.max(x.abs()));
            // a constant κ off the root must not be triharmonic
            let off = triharmonic_residuals(&p, &KgJet::constant(1.1 * k))[2].abs();
            Ok(if off > 1e-6 { zero } else { f64::INFINITY })
        })),
        EXACT_TOL,
    ));

    let rt = max_of((0..n).flat_map(|_| {
        let p = random_params(&mut rng);
        let k: f64 = rng.gen_range(-2.0..2.0);
        (2..=8u32).map(move |r| {
            let closed = r_tension_cmc(&p, k, r)?;
            let assembled = r_tension_assembled(&p, &Jet::constant(k), r)?;
            Ok((closed - assembled.eta).abs().max(assembled.x.abs()).max(assembled.e3.abs()) / closed.abs().max(1.0))
        })
    }));
    out.push(Check::new("r_tension_cmc_vs_assembly", rt, EXACT_TOL));

    out.push(Check::new(
        "r_tension_roots_match_quadratic",
        max_of((0..n).flat_map(|_| {
            let p = BcvParams::new(rng.gen_range(0.05..2.0), rng.gen_range(-2.0..2.0));
            (2..=8u32).map(move |r| {
                let q = quadratic_condition(p.m, p.l, r)?;
                max_of(q.positive_roots.iter().map(|&x| {
                    let t = r_tension_cmc(&p, x.sqrt(), r)?;
                    let c = x + 0.5 * p.l * p.l;
                    Ok(t.abs() / (x.sqrt() * c.powi(r as i32 - 1)).max(1.0))
                }))
            })
        })),
        EXACT_TOL,
    ));

    out.push(Check::new(
        "chart_circle_geodesic_curvature",
        max_of([(0.5, 1.0, 1.3), (0.0, 0.4, 2.0), (-0.3, 1.0, 2.5)].iter().map(|&(m, l, k)| {
            let p = BcvParams::new(m, l);
            let c = ChartCircle::with_curvature(&p, k)?;
            Ok((geodesic_curvature(&p, &c, 0.4, cfg.fd.step)? - k).abs())
        })),
        cfg.fd.tol_first,
    ));

    out.push(Check::new(
        "classification_table",
        (|| -> Result<f64> {
            let close = |a: &[f64], b: &[f64]| a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() < 1e-9);
            let ok = close(&classify(1.0, 1.0, 2)?.roots, &[3.0])
                && close(&classify(1.0, 0.0, 3)?.roots, &[8.0])
                && close(&classify(1.0, 0.0, 3)?.radius, &[1.0 / 12f64.sqrt()])
                && classify(1.0, 2.0, 4)?.case == CaseTag::NoSolution
                && close(&classify(1.0, 2.0, 5)?.roots, &[1.0])
                && classify(0.9, 2.0, 8)?.case == CaseTag::NoSolution
                && close(&classify(0.9, 2.0, 10)?.roots, &[0.4, 2.0])
                && classify(-1.0, 1.0, 7)?.case == CaseTag::NoSolution;
            Ok(if ok { 0.0 } else { 1.0 })
        })(),
        0.5,
    ));

    out.push(Check::new(
        "biharmonic_cylinders",
        max_of([(1.0, 1.0), (0.5, 0.3), (0.8, 1.6), (0.6, 0.0)].iter().map(|&(m, l)| {
            let p = BcvParams::new(m, l);
            let patch = cylinder(p, p.gap().sqrt(), cfg.fd)?;
            let (s, t) = patch.biharmonic_residual(0.1, 0.2)?;
            Ok(s.abs().max(t.norm()))
        })),
        BIHARMONIC_TOL,
    ));
    out
}

fn helicoid_checks(cfg: &RunConfig) -> Vec<Check> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x4e);
    let mut out = Vec::new();
    let triples: Vec<(f64, f64, f64)> = (0..cfg.samples)
        .map(|_| {
            let alpha: f64 = rng.gen_range(0.05..2.0) * if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
            let m = -alpha * alpha - rng.gen_range(0.01..3.0);
            (alpha, m, rng.gen_range(-3.0..3.0))
        })
        .collect();
    out.push(Check::new(
        "norm_a2_identity",
        max_of(triples.iter().map(|&(a, m, l)| {
            let d = helicoid_geometry(a, m, l)?;
            Ok((d.norm_a2 - 0.5 * (8.0 * a * a + l * l)).abs().max((d.mean_curvature - a).abs()))
        })),
        1e-12,
    ));
    out.push(Check::new(
        "printed_display_vs_printed_formula",
        max_of(triples.iter().map(|&(a, m, l)| {
            let t = tau3_helicoid(a, m, l)?;
            Ok((t.display - t.closed).norm() / t.closed.norm().max(1.0))
        })),
        EXACT_TOL,
    ));
    out.push(Check::new(
        "corrected_display_vs_definition",
        max_of(triples.iter().map(|&(a, m, l)| {
            let t = tau3_helicoid(a, m, l)?;
            Ok((t.corrected_display - t.assembled).norm() / t.assembled.norm().max(1.0))
        })),
        EXACT_TOL,
    ));
    out.push(Check::new(
        "reference_t_values",
        helicoid_geometry(0.5, -1.0, 1.0).map(|d| {
            (d.t1 - 102.5).abs().max((d.t2 - 102.5).abs()).max((d.t3 + 2.5).abs())
        }),
        1e-9,
    ));
    let h = cfg.fd.step;
    for (m, l) in [(-1.0, 1.0), (-0.5, 2.0)] {
        let space = match HalfSpace::new(m, l) {
            Ok(s) => s,
            Err(e) => {
                out.push(Check::new("halfspace", Err(e), 0.0));
                continue;
            }
        };
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        let pts: Vec<Point3> = (0..cfg.samples)
            .map(|_| Point3::new(rng.gen_range(-2.0..2.0), rng.gen_range(0.3..3.0), rng.gen_range(-2.0..2.0)))
            .collect();
        out.push(Check::new(
            format!("halfspace_connection_vs_koszul (m={m}, l={l})"),
            max_of(pts.iter().flat_map(|&p| {
                (0..9).map(move |ij| {
                    let (i, j) = (ij / 3, ij % 3);
                    let exact = space.connection(p, i, j);
                    Ok((exact - connection_fd_oracle(&space, p, i, j, h)?).norm() / exact.norm().max(1.0))
                })
            })),
            cfg.fd.tol_first,
        ));
        let params = space.params;
        let rot = BcvSpace { params };
        let half = 0.5 / (-m).sqrt();
        out.push(Check::new(
            format!("theta_isometry (m={m}, l={l})"),
            max_of((0..cfg.samples).map(|_| {
                let p = Point3::new(rng.gen_range(-half..half), rng.gen_range(-half..half), rng.gen_range(-1.0..1.0));
                theta_pullback_residual(&rot, &space, p, h)
            })),
            cfg.fd.tol_first,
        ));
    }
    let cert = nonexistence_certify(&cfg.certify);
    out.push(Check::flag("certification_printed_system", cert.as_ref().map(|r| r.certified).map_err(Clone::clone)));
    out.push(Check::flag(
        "certification_corrected_system",
        cert.as_ref().map(|r| r.corrected_grid_min_residual > 0.0).map_err(Clone::clone),
    ));
    out.push(Check::new(
        "substitution_identity",
        cert.as_ref().map(|r| r.identity_max_residual).map_err(Clone::clone),
        1e-9,
    ));
    out
}

/// Largest deviation of `Θ*g̃` from `g` on coordinate axis pairs at `p`.
pub fn theta_pullback_residual(rot: &BcvSpace, half: &HalfSpace, p: Point3, h: f64) -> Result<f64> {
    let params = rot.params;
    let q = theta_isometry(&params, p)?;
    let axis = |a: usize| {
        let mut c = [0.0; 3];
        c[a] = 1.0;
        CoordVec(c)
    };
    let mut jac = [CoordVec::ZERO; 3];
    for (a, col) in jac.iter_mut().enumerate() {
        let d = crate::fd::first(|t| Ok(theta_isometry(&params, p.offset(axis(a), t))?.to_array()), 0.0, h)?;
        *col = CoordVec(d);
    }
    let mut worst = 0.0f64;
    for a in 0..3 {
        for b in 0..3 {
            let pulled = half.metric(q, jac[a], jac[b])?;
            let orig = rot.metric(p, axis(a), axis(b))?;
            worst = worst.max((pulled - orig).abs() / orig.abs().max(1.0));
        }
    }
    Ok(worst)
}
