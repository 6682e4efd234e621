use bcv_harmonic::helicoid::{helicoid_geometry, tau3_helicoid, HalfSpace};
use bcv_harmonic::hopf::{cylinder_patch, cylinder_shape_data, ChartCircle};
use bcv_harmonic::space::{curvature_op, BcvParams, BcvSpace, FrameVec, Point3};
use bcv_harmonic::surface::{
    delta_h_closed, delta_v_closed, delta_v_general, tau3_cmc_assembled, ParamRect, SurfacePatch,
};
use bcv_harmonic::Error;

const TOL: f64 = 1e-4;

fn circle_cylinder(m: f64, l: f64, kappa: f64) -> SurfacePatch<BcvSpace> {
    let space = BcvSpace::new(m, l);
    let c = ChartCircle::with_curvature(&space.params, kappa).unwrap();
    cylinder_patch(space, c, ParamRect::new((-1.0, 1.0), (-1.0, 1.0)))
}

fn helicoid_patch(alpha: f64, m: f64, l: f64) -> SurfacePatch<HalfSpace> {
    helicoid_geometry(alpha, m, l).unwrap().patch(ParamRect::new((-0.5, 0.5), (0.5, 1.5))).unwrap()
}

fn graph_patch(m: f64, l: f64) -> SurfacePatch<BcvSpace> {
    SurfacePatch::new(BcvSpace::new(m, l), ParamRect::new((-0.6, 0.6), (-0.6, 0.6)), |u, v| {
        Point3::new(u, v, 0.3 * u * u - 0.2 * u * v + 0.4 * v.sin())
    })
}

#[test]
fn cylinder_shape_data_matches_closed_form() {
    let (m, l, k) = (0.6, 0.9, 1.1);
    let patch = circle_cylinder(m, l, k);
    let fd = patch.shape_data(0.2, 0.1).unwrap();
    let exact = cylinder_shape_data(&BcvParams::new(m, l), k);
    assert!((fd.f - exact.f).abs() < 1e-8, "{} {}", fd.f, exact.f);
    assert!((fd.f + 0.5 * k).abs() < 1e-8);
    assert!((fd.norm_a2 - exact.norm_a2).abs() < 1e-8);
    assert!(fd.nu.abs() < 1e-10);
    assert!(fd.asymmetry < 1e-8);
}

#[test]
fn cylinder_laplacians_match_closed_forms() {
    for (m, l, k) in [(0.6, 0.9, 1.1), (1.0, 0.0, -0.7), (0.3, 1.5, 2.0)] {
        let patch = circle_cylinder(m, l, k);
        let params = BcvParams::new(m, l);
        let (u, v) = (0.2, 0.1);
        let sd = patch.shape_data(u, v).unwrap();
        let alpha = patch.cmc_value(u, v, 1e-7).unwrap();
        let h = patch.rough_laplacian_fd(&patch.cmc_mean_curvature_section(alpha), u, v).unwrap();
        assert!((h - delta_h_closed(&params, &sd, FrameVec::ZERO, 0.0)).norm() < TOL);
        let vv = patch.rough_laplacian_fd(&patch.v_section(), u, v).unwrap();
        assert!((vv - delta_v_closed(&params, &sd)).norm() < TOL);
        assert!(patch.trace_identity_residual(u, v).unwrap().norm() < TOL);
        let (e1, e2) = patch.verify_e3_identities(u, v).unwrap();
        assert!(e1 < TOL && e2 < TOL);
    }
}

#[test]
fn helicoid_laplacians_match_closed_forms() {
    for (alpha, m, l) in [(0.5, -1.0, 1.0), (0.3, -2.0, 0.4), (1.1, -1.5, 0.0)] {
        let patch = helicoid_patch(alpha, m, l);
        let params = BcvParams::new(m, l);
        let (u, v) = (0.05, 0.95);
        let sd = patch.shape_data(u, v).unwrap();
        let f = patch.cmc_value(u, v, 1e-7).unwrap();
        assert!((f - alpha).abs() < 1e-6, "{f} vs {alpha}");
        let h = patch.rough_laplacian_fd(&patch.cmc_mean_curvature_section(f), u, v).unwrap();
        assert!((h - delta_h_closed(&params, &sd, FrameVec::ZERO, 0.0)).norm() < TOL);
        let vv = patch.rough_laplacian_fd(&patch.v_section(), u, v).unwrap();
        assert!((vv - delta_v_closed(&params, &sd)).norm() < TOL);
        assert!(patch.trace_identity_residual(u, v).unwrap().norm() < TOL);
        let (e1, e2) = patch.verify_e3_identities(u, v).unwrap();
        assert!(e1 < TOL && e2 < TOL);
    }
}

#[test]
fn graph_surface_needs_general_delta_v() {
    let patch = graph_patch(0.4, 1.3);
    let params = BcvParams::new(0.4, 1.3);
    let (u, v) = (0.1, -0.05);
    let sd = patch.shape_data(u, v).unwrap();
    let field = patch.mean_curvature_field();
    let grad = patch.gradient(&field, u, v).unwrap();
    let lap = patch.laplacian(&field, u, v).unwrap();
    assert!(grad.norm() > 0.1, "test surface should not be CMC");
    assert!(matches!(patch.cmc_value(u, v, 1e-6), Err(Error::NotCmc { .. })));

    let h = patch.rough_laplacian_fd(&patch.mean_curvature_section(), u, v).unwrap();
    assert!((h - delta_h_closed(&params, &sd, grad, lap)).norm() < TOL);

    let vv = patch.rough_laplacian_fd(&patch.v_section(), u, v).unwrap();
    assert!((vv - delta_v_general(&params, &sd, grad)).norm() < TOL);
    assert!((vv - delta_v_closed(&params, &sd)).norm() > 1e-2);

    assert!(patch.trace_identity_residual(u, v).unwrap().norm() < TOL);
    let (e1, e2) = patch.verify_e3_identities(u, v).unwrap();
    assert!(e1 < TOL && e2 < TOL);
}

#[test]
fn helicoid_tension_definition_on_patch() {
    let (alpha, m, l) = (0.5, -1.0, 1.0);
    let t = tau3_helicoid(alpha, m, l).unwrap();
    let d = helicoid_geometry(alpha, m, l).unwrap();
    let params = BcvParams::new(m, l);

    // printed formula minus definition is a pure η term
    let shift = (t.closed - t.assembled) + 16.0 * alpha.powi(3) * params.gap() * d.nu * d.nu * d.eta;
    assert!(shift.norm() < 1e-12, "{shift:?}");
    assert!((t.display - t.closed).norm() < 1e-10);
    assert!((t.corrected_display - t.assembled).norm() < 1e-10);

    // the definition with both Laplacians taken numerically
    let patch = helicoid_patch(alpha, m, l);
    let (u, v) = (0.0, 1.0);
    let sd = patch.shape_data(u, v).unwrap();
    let lap_eta = patch.rough_laplacian_fd(&patch.normal_section(), u, v).unwrap();
    let lap_v = patch.rough_laplacian_fd(&patch.v_section(), u, v).unwrap();
    let a2 = sd.norm_a2;
    let lap2 = 2.0 * alpha * a2 * lap_eta + 2.0 * alpha * params.gap() * lap_v;
    let lap1 = 2.0 * alpha * a2 * sd.eta + 2.0 * alpha * params.gap() * sd.v_field();
    let tau = 2.0 * alpha * sd.eta;
    let mut fd = lap2;
    for x in [sd.x1, sd.x2] {
        fd = fd - curvature_op(&params, lap1, x, x) - curvature_op(&params, -2.0 * alpha * sd.shape(x), tau, x);
    }
    let assembled = tau3_cmc_assembled(&params, &sd, alpha, FrameVec::ZERO, 0.0);
    assert!((fd - assembled).norm() < TOL, "{fd:?} vs {assembled:?}");
    assert!((fd.norm() - t.assembled.norm()).abs() < TOL);
}
