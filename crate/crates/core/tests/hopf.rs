use bcv_harmonic::hopf::{
    circle_radius, covariant_e3, covariant_x, curvature_terms_display, cylinder_patch, delta2_tau_display,
    delta_tau_display, geodesic_curvature, r_tension_assembled, r_tension_cmc, rough_laplacian_cyl, tau3_hopf,
    tension_cyl, triharmonic_residuals, BaseCurve, ChartCircle, CylSection, CylVector, KgJet, RadialLine,
};
use bcv_harmonic::space::cross;
use bcv_harmonic::surface::{ParamRect, PullbackSection};
use bcv_harmonic::{BcvParams, BcvSpace, Error, FrameVec, Jet};
use proptest::prelude::*;

fn cv_close(a: CylVector, b: CylVector, tol: f64) -> bool {
    (a.to_frame() - b.to_frame()).max_abs() <= tol
}

fn unit(i: usize) -> CylSection {
    let j = |k| Jet::constant(if i == k { 1.0 } else { 0.0 });
    CylSection::new(j(0), j(1), j(2))
}

#[test]
fn covariant_derivative_examples() {
    let p = BcvParams::new(0.7, 1.4);
    let k = Jet::polynomial(&[0.3, -0.5, 0.2], 0.6);
    let (k0, k1) = (k.get(0).unwrap(), k.get(1).unwrap());
    let hl = 0.7;
    let val = |s: CylSection| s.value().unwrap();

    assert!(cv_close(val(covariant_x(&p, &k, &unit(0))), CylVector::new(0.0, 0.0, -k0), 1e-15));
    assert!(cv_close(val(covariant_x(&p, &k, &unit(1))), CylVector::new(0.0, 0.0, hl), 1e-15));
    let keta = CylSection::new(Jet::zero(), Jet::zero(), k.clone());
    let expect = CylVector::new(k0 * k0, -k0 * hl, k1);
    assert!(cv_close(val(covariant_x(&p, &k, &keta)), expect, 1e-15));

    assert!(cv_close(val(covariant_e3(&p, &unit(0))), CylVector::new(0.0, 0.0, hl), 0.0));
    assert!(cv_close(val(covariant_e3(&p, &unit(2))), CylVector::new(-hl, 0.0, 0.0), 0.0));
    assert!(cv_close(val(covariant_e3(&p, &unit(1))), CylVector::default(), 0.0));
}

#[test]
fn iterated_laplacian_of_constant_curvature() {
    let p = BcvParams::new(0.4, 1.1);
    let k = 0.9;
    let c = k * k + 0.5 * p.l * p.l;
    let kappa = Jet::constant(k);
    let mut s = tension_cyl(&kappa);
    for r in 1..=10 {
        s = rough_laplacian_cyl(&p, &kappa, &s);
        let v = s.value().unwrap();
        let expect = -k * c.powi(r);
        assert!((v.eta - expect).abs() <= 1e-12 * expect.abs(), "r = {r}");
        assert!(v.x == 0.0 && v.e3 == 0.0);
    }
}

#[test]
fn tau3_hopf_examples() {
    let p = BcvParams::new(1.0, 0.0);
    let t = tau3_hopf(&p, &KgJet::constant(8f64.sqrt()));
    assert!(t.max_abs() < 1e-12);

    let p = BcvParams::new(0.3, 1.7);
    let k = -0.8;
    let t = tau3_hopf(&p, &KgJet::constant(k));
    let l2 = p.l * p.l;
    let expect = -(k / 4.0) * (l2 + 4.0 * k * k) * (2.0 * l2 - 8.0 * p.m + k * k);
    assert!(t.x == 0.0 && t.e3 == 0.0);
    assert!((t.eta - expect).abs() < 1e-13);
}

#[test]
fn r_tension_examples() {
    assert!(r_tension_cmc(&BcvParams::new(1.0, 1.0), 3f64.sqrt(), 2).unwrap().abs() < 1e-14);
    assert!(r_tension_cmc(&BcvParams::new(1.0, 2.0), 1.0, 5).unwrap().abs() < 1e-14);
    for r in 2..9 {
        assert_eq!(r_tension_cmc(&BcvParams::new(0.3, 0.0), 0.0, r).unwrap(), 0.0);
    }
    assert!(matches!(r_tension_cmc(&BcvParams::new(1.0, 1.0), 1.0, 1), Err(Error::InvalidArgument(_))));
    let p = BcvParams::new(0.55, -0.9);
    for k in [-1.3, 0.2, 2.5] {
        assert!((r_tension_cmc(&p, k, 3).unwrap() - tau3_hopf(&p, &KgJet::constant(k)).eta).abs() < 1e-13);
    }
}

#[test]
fn truncated_jets_report_missing_order() {
    let p = BcvParams::new(0.5, 0.5);
    let k = Jet::truncated(vec![0.4, 0.1, 0.0, 0.2]);
    assert!(matches!(r_tension_assembled(&p, &k, 3), Err(Error::JetOrder { .. })));
}

#[test]
fn circle_radius_examples() {
    let (m, l) = (1.3, 0.8);
    let p = BcvParams::new(m, l);
    let r = circle_radius(&p, (4.0 * m - l * l).sqrt()).unwrap();
    assert!((r - 1.0 / (8.0 * m - l * l).sqrt()).abs() < 1e-14);
    let r = circle_radius(&p, (2.0 * (4.0 * m - l * l)).sqrt()).unwrap();
    assert!((r - 1.0 / (12.0 * m - 2.0 * l * l).sqrt()).abs() < 1e-14);
    assert!((circle_radius(&p, 0.0).unwrap() - 0.5 / m.sqrt()).abs() < 1e-15);
    assert!(matches!(circle_radius(&BcvParams::new(0.0, 1.0), 1.0), Err(Error::InvalidBase { .. })));
}

#[test]
fn geodesic_curvature_examples() {
    let flat = BcvParams::new(0.0, 0.3);
    let unit_circle = |s: f64| (s.cos(), s.sin());
    assert!((geodesic_curvature(&flat, &unit_circle, 0.7, 1e-3).unwrap() - 1.0).abs() < 1e-8);
    for m in [-0.6, 0.0, 1.2] {
        let p = BcvParams::new(m, 1.0);
        assert!(geodesic_curvature(&p, &RadialLine { angle: -0.4, m }, 0.25, 1e-3).unwrap().abs() < 1e-9);
    }
    let slow = |s: f64| (0.5 * s, 0.0);
    assert!(matches!(geodesic_curvature(&flat, &slow, 0.1, 1e-3), Err(Error::NotArcLength { .. })));
}

#[test]
fn chart_circle_matches_sphere_radius() {
    let m = 0.8;
    let p = BcvParams::new(m, 0.0);
    for k in [0.3, 1.0, 2.4] {
        let c = ChartCircle::with_curvature(&p, k).unwrap();
        assert!((geodesic_curvature(&p, &c, 0.2, 1e-3).unwrap() - k).abs() < 1e-8);
        assert!((c.curvature(&p) - k).abs() < 1e-13);
        // distance to the axis of the stereographic image of the chart circle
        let r0 = c.r0;
        let sphere_r = r0 / (1.0 + m * r0 * r0);
        assert!((sphere_r - circle_radius(&p, k).unwrap()).abs() < 1e-12, "k = {k}");
    }
}

/// Euclidean logarithmic spiral `r = e^{bθ}` by arc length from its pole,
/// so `κ(s) = 1/(b s)`.
#[derive(Clone, Copy)]
struct LogSpiral {
    b: f64,
}

impl LogSpiral {
    fn kappa(&self, s: f64) -> [f64; 3] {
        let b = self.b;
        [1.0 / (b * s), -1.0 / (b * s * s), 2.0 / (b * s.powi(3))]
    }
}

impl BaseCurve for LogSpiral {
    fn at(&self, s: f64) -> (f64, f64) {
        let r = self.b * s / (1.0 + self.b * self.b).sqrt();
        let th = r.ln() / self.b;
        (r * th.cos(), r * th.sin())
    }
}

#[test]
fn laplacian_of_tension_on_a_real_cylinder() {
    // m = 0 keeps arc length Euclidean; ℓ ≠ 0 keeps the bundle twisted.
    let params = BcvParams::new(0.0, 1.3);
    let curve = LogSpiral { b: 0.6 };
    let patch = cylinder_patch(BcvSpace { params }, curve, ParamRect::new((1.0, 2.0), (-0.5, 0.5)));
    let (s, t) = (1.5, 0.0);
    let [k, k1, k2] = curve.kappa(s);

    let kg = geodesic_curvature(&params, &curve, s, 1e-3).unwrap();
    assert!((kg - k).abs() < 1e-7);

    let sd = patch.shape_data(s, t).unwrap();
    assert!((sd.f + 0.5 * k).abs() < 1e-7);
    assert!((patch.tension(s, t).unwrap() + k * sd.eta).norm() < 1e-7);

    let tau = PullbackSection::new(2, |u, v| patch.tension(u, v));
    let lap = patch.rough_laplacian_fd(&tau, s, t).unwrap();
    let expect = delta_tau_display(&params, &KgJet::new(k, k1, k2, 0.0, 0.0));
    // ∂s is not horizontal once xẏ - yẋ varies; the horizontal unit is E3 × η
    let e3 = FrameVec::basis(2);
    let x = cross(e3, sd.eta);
    let closed = expect.x * x + expect.e3 * e3 + expect.eta * sd.eta;
    assert!((lap - closed).norm() < 1e-4, "{lap:?} vs {closed:?}");
}

fn jet_strategy() -> impl Strategy<Value = Jet> {
    (prop::collection::vec(-1.0..1.0f64, 6), -1.0..1.0f64).prop_map(|(c, s)| Jet::polynomial(&c, s))
}

fn params() -> impl Strategy<Value = BcvParams> {
    (-2.0..2.0f64, -2.0..2.0f64).prop_map(|(m, l)| BcvParams::new(m, l))
}

/// Independent oracle for `Δ̄τ`, `Δ̄²τ` and the curvature terms by hand
/// expansion of the covariant derivative table on polynomial coefficients.
fn lemma_oracle(p: &BcvParams, k: &Jet) -> [CylVector; 4] {
    let d = |n| k.get(n).unwrap();
    let (k0, k1, k2, k3, k4) = (d(0), d(1), d(2), d(3), d(4));
    let (l, m) = (p.l, p.m);
    let l2 = l * l;
    let a = [3.0 * k0 * k1, 3.0 * (k1 * k1 + k0 * k2), 3.0 * (3.0 * k1 * k2 + k0 * k3)];
    let b = [-l * k1, -l * k2, -l * k3];
    let c = [
        k2 - 0.5 * l2 * k0 - k0.powi(3),
        k3 - 0.5 * l2 * k1 - 3.0 * k0 * k0 * k1,
        k4 - 0.5 * l2 * k2 - 6.0 * k0 * k1 * k1 - 3.0 * k0 * k0 * k2,
    ];
    // Δ̄(aX + bE3 + cη) with Δ̄ = -(∇_X∇_X + ∇_E3∇_E3), term by term
    let lap_x = CylVector::new(0.25 * l2 * a[0] + a[0] * k0 * k0 - a[2], -0.5 * l * a[0] * k0, 2.0 * a[1] * k0 + a[0] * k1);
    let lap_e3 = CylVector::new(-0.5 * l * b[0] * k0, 0.25 * l2 * b[0] - b[2], -l * b[1]);
    let lap_eta =
        CylVector::new(-(2.0 * c[1] * k0 + c[0] * k1), l * c[1], 0.5 * l2 * c[0] + c[0] * k0 * k0 - c[2]);
    let sum = |u: CylVector, v: CylVector| CylVector::new(u.x + v.x, u.e3 + v.e3, u.eta + v.eta);
    [
        CylVector::new(a[0], b[0], c[0]),
        sum(sum(lap_x, lap_e3), lap_eta),
        CylVector::new(-0.25 * l2 * a[0], -0.25 * l2 * b[0], (-4.0 * m + 0.5 * l2) * c[0]),
        CylVector::new(0.0, 0.0, (4.0 * m - 0.75 * l2) * k0.powi(3)),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn cylinder_lemmas_match_iterated_laplacian(p in params(), k in jet_strategy()) {
        let kg = KgJet::from_jet(&k).unwrap();
        let [o1, o2, r1, r2] = lemma_oracle(&p, &k);
        let tau = tension_cyl(&k);
        let l1 = rough_laplacian_cyl(&p, &k, &tau);
        let l2 = rough_laplacian_cyl(&p, &k, &l1);
        prop_assert!(cv_close(l1.value().unwrap(), o1, 1e-12));
        prop_assert!(cv_close(l2.value().unwrap(), o2, 1e-12 * o2.max_abs().max(1.0)));
        prop_assert!(cv_close(delta_tau_display(&p, &kg), o1, 1e-12));
        prop_assert!(cv_close(delta2_tau_display(&p, &kg), o2, 1e-12 * o2.max_abs().max(1.0)));
        let (d1, d2) = curvature_terms_display(&p, &kg);
        prop_assert!(cv_close(d1, r1, 1e-12) && cv_close(d2, r2, 1e-12));
    }

    #[test]
    fn tau3_is_laplacian_minus_curvature(p in params(), k in jet_strategy()) {
        let kg = KgJet::from_jet(&k).unwrap();
        let [_, o2, r1, r2] = lemma_oracle(&p, &k);
        let assembled = CylVector::new(o2.x + r1.x + r2.x, o2.e3 + r1.e3 + r2.e3, o2.eta + r1.eta + r2.eta);
        let t = tau3_hopf(&p, &kg);
        prop_assert!(cv_close(t, assembled, 1e-9 * assembled.max_abs().max(1.0)));
        let general = r_tension_assembled(&p, &k, 3).unwrap();
        prop_assert!(cv_close(t, general, 1e-9 * assembled.max_abs().max(1.0)));
    }

    #[test]
    fn triharmonic_first_integral_steps(p in params(), k in jet_strategy()) {
        let kg = KgJet::from_jet(&k).unwrap();
        let [k1r, k2r, _] = triharmonic_residuals(&p, &kg);
        let l = p.l;
        let lhs = 4.0 * l * k1r + 5.0 * kg.k * k2r;
        let rhs = l * kg.k1 * (3.0 * l * l * kg.k - 5.0 * kg.k.powi(3) - 40.0 * kg.k2);
        prop_assert!((lhs - rhs).abs() < 1e-10 * lhs.abs().max(1.0));

        let flat = BcvParams::new(p.m, 0.0);
        let [f1, f2, _] = triharmonic_residuals(&flat, &kg);
        let d_first_integral = 4.0 * kg.k1 * kg.k2 + 2.0 * kg.k * kg.k3 - 4.0 * kg.k.powi(3) * kg.k1;
        prop_assert!((f1 + 2.5 * d_first_integral).abs() < 1e-10 * f1.abs().max(1.0));
        prop_assert_eq!(f2, 0.0);
    }

    #[test]
    fn constant_triharmonic_cylinders(l in -2.0..2.0f64, gap in 0.01..3.0f64) {
        let p = BcvParams::new(0.25 * l * l + 0.25 * gap, l);
        let k = (2.0 * p.gap()).sqrt();
        for r in triharmonic_residuals(&p, &KgJet::constant(k)) {
            prop_assert!(r.abs() < 1e-10);
        }
    }

    #[test]
    fn r_tension_consistency(p in params(), k in -2.0..2.0f64, r in 2..=8u32) {
        let closed = r_tension_cmc(&p, k, r).unwrap();
        let a = r_tension_assembled(&p, &Jet::constant(k), r).unwrap();
        prop_assert!((closed - a.eta).abs() <= 1e-10 * closed.abs().max(1.0));
        prop_assert!(a.x.abs() < 1e-12 && a.e3.abs() < 1e-12);
    }

    #[test]
    fn quadratic_forms_agree(m in -2.0..2.0f64, l in -2.0..2.0f64, k in -2.0..2.0f64, r in 2..=12u32) {
        let (x, rf, l2) = (k * k, r as f64, l * l);
        let q = x * x + (-4.0 * m * (rf - 1.0) + 0.75 * l2 * rf) * x - 0.5 * l2 * (4.0 * m - l2);
        let a2 = x + 0.5 * l2;
        let s = a2 * a2 - (4.0 * m - 0.5 * l2) * a2 - (rf - 2.0) * (4.0 * m - 0.75 * l2) * x;
        prop_assert!((q - s).abs() < 1e-12 * q.abs().max(1.0));
    }
}
