use std::sync::OnceLock;

use g2t_core::lie::three_form_phi;
use g2t_core::tensor::*;
use g2t_core::tractor::*;
use g2t_exact::{parse_expr, AlgScalar, Mono, Poly, Rat, RatFn};
use proptest::prelude::*;

fn f(s: &str) -> RatFn {
    parse_expr(s).unwrap()
}

fn flat() -> &'static (Geometry, Curvature) {
    static F: OnceLock<(Geometry, Curvature)> = OnceLock::new();
    F.get_or_init(|| {
        let g = Geometry::flat();
        let c = g.curvature();
        (g, c)
    })
}

/// A curved metric with constant determinant, so P ≠ 0 enters every formula.
fn curved() -> &'static (Geometry, Curvature) {
    static C: OnceLock<(Geometry, Curvature)> = OnceLock::new();
    C.get_or_init(|| {
        let p = |s: &str| parse_expr(s).unwrap().as_poly().unwrap().clone();
        let n = [[p("x1 + 2*x3"), p("1/2*x2 - x4"), p("x5 + 1")], [p("x3 - x1"), p("2*x5"), p("x2 + x4/3")]];
        let g = Geometry::new(unimodular_perturbation(&n).unwrap());
        let c = g.curvature();
        (g, c)
    })
}

fn scalar(s: &str, w: i32) -> TensorField {
    TensorField::scalar(f(s), w)
}

fn two_form(entries: &[((usize, usize), &str)], w: i32) -> TensorField {
    let mut t = TensorField::covariant(2, w, |_| RatFn::zero());
    for &((a, b), e) in entries {
        t.set(&[a, b], f(e));
        t.set(&[b, a], f(e).neg());
    }
    t
}

#[test]
fn constant_scale_splits_to_bottom_slot() {
    let (geo, curv) = flat();
    let s = split_l0(0, &scalar("1", 1), geo, curv).unwrap();
    assert!(s.rho.is_zero() && s.phi.is_zero());
    assert_eq!(s.sigma.scalar_value(), &RatFn::one());
    assert!(bgg_theta0(0, &scalar("1", 1), geo, curv).unwrap().is_zero());
}

#[test]
fn quadratic_form_scale_has_rho_minus_two() {
    let (geo, curv) = flat();
    // x·x = g_{ab}x^a x^b on the flat metric.
    let g = &geo.metric;
    let mut xx = RatFn::zero();
    for a in 0..5 {
        for b in 0..5 {
            xx = xx.add(&g.entry(a, b).mul(&RatFn::var(a)).mul(&RatFn::var(b)));
        }
    }
    let s = split_l0(0, &TensorField::scalar(xx, 1), geo, curv).unwrap();
    assert_eq!(s.rho.scalar_value(), &RatFn::from_int(-2));
}

#[test]
fn constant_vector_field_splits_trivially() {
    let (geo, curv) = flat();
    let xi = TensorField::covariant(1, 2, |i| RatFn::from_int(i[0] as i64 + 1));
    let s = split_l0(1, &xi, geo, curv).unwrap();
    assert!(s.phi.is_zero() && s.mu.as_ref().unwrap().is_zero() && s.rho.is_zero());
}

#[test]
fn killing_operator_on_rotations_and_shears() {
    let (geo, curv) = flat();
    let g = &geo.metric;
    // ξ = A x with gA skew is an isometry: here ξ = x4 ∂1 − x2 ∂5 style rotation.
    let rot = TensorField::contravariant(1, 0, |i| f(["-x5", "x4", "0", "0", "0"][i[0]]));
    let low = rot.lower(0, g).unwrap();
    assert!(bgg_theta0(1, &low, geo, curv).unwrap().is_zero());
    let shear = TensorField::contravariant(1, 0, |i| if i[0] == 0 { f("x1") } else { RatFn::zero() });
    assert!(!bgg_theta0(1, &shear.lower(0, g).unwrap(), geo, curv).unwrap().is_zero());
}

#[test]
fn standard_connection_bottom_slot() {
    let (geo, curv) = curved();
    let phi = TensorField::covariant(1, 1, |i| RatFn::var(i[0]).mul(&RatFn::var(4 - i[0])));
    let s = TractorSection::new(0, scalar("x2", -1), phi.clone(), None, scalar("x1*x3 + 1", 1)).unwrap();
    let d = tractor_connection(&s, geo, curv);
    let expected = geo.cov_deriv(&s.sigma).sub(&phi).unwrap();
    assert_eq!(d.sigma.comps(), expected.comps());
}

#[test]
fn flat_parallel_spaces_and_reproduction() {
    let (geo, curv) = flat();
    for (k, dim) in [(0, 7), (1, 21), (2, 35)] {
        let sp = FlatParallelSpace::solve(k, 4).unwrap();
        assert_eq!(sp.dim(), dim, "k = {k}");
        assert_eq!(sp.origin_rank(), dim, "k = {k}");
        for b in &sp.basis {
            assert!(tractor_connection(b, geo, curv).is_zero());
            assert!(b.slots_antisymmetric());
            assert_eq!(&split_l0(k, &b.sigma, geo, curv).unwrap(), b, "k = {k}");
        }
    }
}

#[test]
fn standard_parallel_section_through_bottom_unit() {
    // Through (ρ, φ, σ) = (0, 0, 1) the parallel section is constant; through
    // ρ = −1 it is (−1, x_a, ½x·x).
    let mut init = TractorSection::zero(0);
    init.sigma = scalar("1", 1);
    let s = flat_parallel_solve(&init, 4).unwrap();
    assert_eq!(s, init);
    let mut init = TractorSection::zero(0);
    init.rho = scalar("-1", -1);
    let s = flat_parallel_solve(&init, 4).unwrap();
    let g = &flat().0.metric;
    for a in 0..5 {
        let mut xa = RatFn::zero();
        for b in 0..5 {
            xa = xa.add(&g.entry(a, b).mul(&RatFn::var(b)));
        }
        assert_eq!(s.phi.get(&[a]), &xa);
    }
    assert_eq!(s.sigma.scalar_value(), &f("x1*x4 + x2*x5 - 1/2*x3^2"));
}

#[test]
fn parallel_three_form_is_normal() {
    let (geo, curv) = flat();
    let s = flat_parallel_solve(&slots_from_threeform(&three_form_phi()), 4).unwrap();
    for r in normality_residuals(&s, geo, curv).unwrap() {
        assert!(r.is_zero());
    }
    assert!(bgg_theta0(2, &s.sigma, geo, curv).unwrap().is_zero());
    let origin = s.eval(&[Rat::ZERO; 5]).unwrap();
    assert_eq!(origin, slots_from_threeform(&three_form_phi()));
    for r in normality_residuals(&TractorSection::zero(2), geo, curv).unwrap() {
        assert!(r.is_zero());
    }
}

#[test]
fn non_killing_two_form_is_not_normal() {
    let (geo, curv) = flat();
    let phi = two_form(&[((1, 2), "x1"), ((0, 3), "x2*x5")], 3);
    let l0 = split_l0(2, &phi, geo, curv).unwrap();
    assert!(normality_residuals(&l0, geo, curv).unwrap().iter().any(|r| !r.is_zero()));
}

#[test]
fn wedge_identities_basic_cases() {
    let phi = two_form(&[((0, 1), "1"), ((0, 2), "x3")], 3).wedge(&TensorField::covariant(0, 0, |_| RatFn::one()));
    let mu = TensorField::covariant(1, 1, |i| RatFn::var(i[0]));
    let rho = two_form(&[((3, 4), "1"), ((2, 4), "x1")], 1);
    // φ = dx¹∧(dx² + x3 dx³) is decomposable.
    let w = wedge_identities(&phi, &mu, &rho);
    assert!(w.a2.is_zero());
    let zero_mu = TensorField::covariant(1, 1, |_| RatFn::zero());
    assert!(wedge_identities(&phi, &zero_mu, &rho).a1.is_zero());
    let o = slots_from_threeform(&three_form_phi());
    let wo = wedge_identities(&o.sigma, o.mu.as_ref().unwrap(), &o.rho);
    assert!(!wo.a1.is_zero());
}

#[test]
fn tractor_metric_is_parallel() {
    let (geo, curv) = curved();
    let s1 = TractorSection::new(0, scalar("x2 - 1", -1), TensorField::covariant(1, 1, |i| RatFn::var(i[0]).mul(&RatFn::var(2))), None, scalar("x1*x4", 1)).unwrap();
    let s2 = TractorSection::new(0, scalar("x5", -1), TensorField::covariant(1, 1, |i| RatFn::from_int(i[0] as i64 - 2)), None, scalar("x3^2 + x2", 1)).unwrap();
    let h = tractor_metric(&s1, &s2, &geo.metric);
    let d1 = tractor_connection(&s1, geo, curv);
    let d2 = tractor_connection(&s2, geo, curv);
    for c in 0..5 {
        let rhs = tractor_metric(&d1.direction(c, 0), &s2, &geo.metric).add(&tractor_metric(&s1, &d2.direction(c, 0), &geo.metric));
        assert_eq!(h.diff(c), rhs, "direction {c}");
    }
}

/// The part of ∇L₀(σ) that the splitting leaves over is Θ₀(σ).
#[test]
fn theta0_is_the_leftover_of_the_split_derivative() {
    let (geo, curv) = curved();
    let g = &geo.metric;
    let sigma0 = scalar("x1*x2 + x3", 1);
    let d0 = tractor_connection(&split_l0(0, &sigma0, geo, curv).unwrap(), geo, curv);
    assert!(d0.sigma.is_zero());
    let mid = d0.phi;
    let tr = mid.trace_metric(0, 1, g).unwrap();
    let tf = mid.sub(&g.g.mul_fn(tr.scalar_value()).scale_rat(1, 5).with_weight(mid.weight())).unwrap();
    assert_eq!(tf.comps(), bgg_theta0(0, &sigma0, geo, curv).unwrap().comps());
    for k in 1..=2 {
        let sigma = if k == 1 {
            TensorField::covariant(1, 2, |i| RatFn::var(i[0]).mul(&RatFn::var((i[0] + 1) % 5)))
        } else {
            two_form(&[((0, 1), "x3"), ((2, 4), "x1*x2"), ((1, 3), "1")], 3)
        };
        let s = split_l0(k, &sigma, geo, curv).unwrap();
        assert_eq!(s.sigma.comps(), sigma.comps());
        let d = tractor_connection(&s, geo, curv);
        assert_eq!(d.sigma.comps(), bgg_theta0(k, &sigma, geo, curv).unwrap().comps(), "k = {k}");
    }
}

#[test]
fn einstein_operator_is_conformally_natural() {
    let (geo, curv) = flat();
    let omega = f("1 + x1^2/10");
    let (gh, _) = geo.metric.conformal_rescale(&omega).unwrap();
    let geo_h = Geometry::new(gh);
    let curv_h = geo_h.curvature();
    let sigma = f("x2 + x3^2");
    let r = bgg_theta0(0, &TensorField::scalar(sigma.clone(), 1), geo, curv).unwrap();
    let rh = bgg_theta0(0, &TensorField::scalar(omega.mul(&sigma), 1), &geo_h, &curv_h).unwrap();
    assert_eq!(rh.comps(), r.mul_fn(&omega).comps());
    // Einstein scales stay Einstein.
    let e = f("x1*x4 + x2*x5 - 1/2*x3^2");
    assert!(bgg_theta0(0, &TensorField::scalar(omega.mul(&e), 1), &geo_h, &curv_h).unwrap().is_zero());
}

#[test]
fn killing_operator_is_conformally_natural() {
    let (geo, curv) = flat();
    let omega = f("1 + x1^2/10");
    let (gh, _) = geo.metric.conformal_rescale(&omega).unwrap();
    let geo_h = Geometry::new(gh);
    let curv_h = geo_h.curvature();
    let o2 = omega.mul(&omega);
    let fields = [["x1", "0", "0", "0", "0"], ["2*x1", "2*x2", "x3", "0", "0"], ["x1*x3", "x2*x3", "x1*x4 + x2*x5 + 1/2*x3^2", "x3*x4", "x3*x5"]];
    for fld in fields {
        let xi = TensorField::contravariant(1, 0, |i| f(fld[i[0]]));
        let r = bgg_theta0(1, &xi.lower(0, &geo.metric).unwrap(), geo, curv).unwrap();
        let rh = bgg_theta0(1, &xi.lower(0, &geo_h.metric).unwrap(), &geo_h, &curv_h).unwrap();
        assert_eq!(rh.comps(), r.mul_fn(&o2).comps(), "{fld:?}");
    }
}

fn small_poly() -> impl Strategy<Value = RatFn> {
    prop::collection::vec((prop::array::uniform5(0u32..3), -3i64..=3), 0..4).prop_map(|ts| {
        RatFn::from_poly(Poly::from_terms(
            ts.into_iter().map(|(e, c)| (Mono::from_exps(e), AlgScalar::from_int(c))).collect(),
        ))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn splitting_preserves_sigma_and_antisymmetry(c in prop::collection::vec(small_poly(), 10)) {
        let (geo, curv) = flat();
        let sigma = g2t_core::tractor::form_from_components(2, 3, &c);
        let s = split_l0(2, &sigma, geo, curv).unwrap();
        prop_assert_eq!(s.sigma.comps(), sigma.comps());
        prop_assert!(s.slots_antisymmetric());
        let back = TractorSection::from_vector(2, &s.to_vector()).unwrap();
        prop_assert_eq!(back, s);
    }

    #[test]
    fn vector_round_trip(c in prop::collection::vec(small_poly(), 7)) {
        let s = TractorSection::from_vector(0, &c).unwrap();
        prop_assert_eq!(s.to_vector(), c);
    }
}
