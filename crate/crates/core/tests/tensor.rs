use g2t_core::tensor::*;
use g2t_exact::{parse_expr, AlgScalar, Mono, Poly, Rat, RatFn};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn f(s: &str) -> RatFn {
    parse_expr(s).unwrap()
}

fn random_linear(rng: &mut ChaCha8Rng) -> Poly {
    let mut terms = Vec::new();
    for v in 0..5 {
        let c = rng.gen_range(-2i64..=2);
        if c != 0 {
            let mut e = [0u32; 5];
            e[v] = 1;
            terms.push((Mono::from_exps(e), AlgScalar::from_rat(Rat::new(c, rng.gen_range(1i64..=3)))));
        }
    }
    terms.push((Mono::from_exps([0; 5]), AlgScalar::from_int(rng.gen_range(-1i64..=1))));
    Poly::from_terms(terms)
}

/// Degree ≤ 2 perturbation of the flat metric, with constant determinant.
fn random_metric(seed: u64) -> MetricField {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n: [[Poly; 3]; 2] = std::array::from_fn(|_| std::array::from_fn(|_| random_linear(&mut rng)));
    unimodular_perturbation(&n).unwrap()
}

#[test]
fn flat_metric_has_no_curvature() {
    let geo = Geometry::flat();
    let c = geo.curvature();
    assert!(c.riemann.is_zero() && c.schouten.is_zero() && c.weyl.is_zero() && c.cotton.is_zero());
    assert!(c.j.is_zero());
    assert_eq!(geo.metric.signature_at(&[Rat::ZERO; 5]).unwrap(), (2, 3));
}

#[test]
fn curvature_identities_on_random_metrics() {
    for seed in [1, 2, 3] {
        let geo = Geometry::new(random_metric(seed));
        assert!(!geo.metric.is_constant());
        assert!(geo.metric_compatibility().is_zero(), "seed {seed}: Dg");
        let curv = geo.curvature();
        assert!(!curv.cotton.is_zero(), "seed {seed}: sample metric should have A ≠ 0");
        let ids = CurvatureIdentities::compute(&geo, &curv);
        assert!(ids.bianchi && ids.riemann_skew && ids.weyl_trace_free, "seed {seed}: {ids:?}");
        // The divergence of the Weyl tensor is (n−3)A = 2A; the (n−2)A form fails.
        assert!(ids.div_weyl_2a, "seed {seed}");
        assert!(!ids.div_weyl_3a, "seed {seed}");
    }
}

#[test]
fn schouten_uses_one_third_and_one_eighth() {
    let geo = Geometry::new(random_metric(7));
    let c = geo.curvature();
    let g = &geo.metric;
    let sc = c.ricci.trace_metric(0, 1, g).unwrap().scalar_value().clone();
    for a in 0..5 {
        for b in 0..5 {
            let expected = c.ricci.get(&[a, b]).sub(&g.entry(a, b).mul(&sc).scale(&AlgScalar::frac(1, 8))).scale(&AlgScalar::frac(1, 3));
            assert_eq!(c.schouten.get(&[a, b]), &expected);
        }
    }
    assert_eq!(c.j, c.schouten.trace_metric(0, 1, g).unwrap().scalar_value().clone());
}

#[test]
fn christoffel_is_symmetric() {
    let geo = Geometry::new(random_metric(4));
    for a in 0..5 {
        for b in 0..5 {
            for c in 0..5 {
                assert_eq!(geo.gamma(a, b, c), geo.gamma(a, c, b));
            }
        }
    }
}

#[test]
fn ricci_identity_on_a_vector_field() {
    let geo = Geometry::new(random_metric(5));
    let curv = geo.curvature();
    let xi = TensorField::contravariant(1, 0, |i| f(["x2", "x1*x3", "1", "x5^2", "x4 - x1"][i[0]]));
    let dd = geo.cov_deriv(&geo.cov_deriv(&xi));
    let comm = dd.sub(&dd.permute(&[1, 0, 2])).unwrap();
    let rhs = curv.riemann.tensor(&xi).contract(3, 4).unwrap();
    assert_eq!(comm.comps(), rhs.comps());
}

#[test]
fn derivative_of_constant_scalar_vanishes() {
    let geo = Geometry::new(random_metric(6));
    assert!(geo.cov_deriv(&TensorField::scalar(f("7/3"), 1)).is_zero());
}

#[test]
fn trace_of_identity_is_five() {
    let id = TensorField::from_fn(vec![Variance::Contra, Variance::Co], 0, |i| if i[0] == i[1] { RatFn::one() } else { RatFn::zero() });
    assert_eq!(id.contract(0, 1).unwrap().scalar_value(), &RatFn::from_int(5));
}

#[test]
fn weights_follow_index_moves() {
    let g = MetricField::flat();
    let v = TensorField::covariant(1, 1, |i| RatFn::var(i[0]));
    let up = v.raise(0, &g).unwrap();
    assert_eq!(up.weight(), -1);
    let back = up.lower(0, &g).unwrap();
    assert_eq!(back, v);
}

#[test]
fn singular_metric_is_rejected() {
    let mut m = vec![vec![RatFn::zero(); 5]; 5];
    m[0][0] = RatFn::one();
    assert!(matches!(MetricField::new(m), Err(g2t_core::CoreError::DegenerateMetric(_))));
}

#[test]
fn trivial_rescale_is_identity() {
    let g = MetricField::flat();
    let (gh, ups) = g.conformal_rescale(&RatFn::one()).unwrap();
    assert_eq!(gh.g, g.g);
    assert!(ups.is_zero());
    let phi = TensorField::covariant(1, 1, |i| RatFn::var(i[0]));
    let (r, p, s) = rescale_standard_slots(&f("x1"), &phi, &f("x2 + 1"), &ups, &g).unwrap();
    assert_eq!((r, p, s), (f("x1"), phi, f("x2 + 1")));
}

#[test]
fn standard_slots_transform_with_upsilon() {
    let g = MetricField::flat();
    let (_, ups) = g.conformal_rescale(&f("1 + x1^2/10")).unwrap();
    let phi = TensorField::covariant(1, 1, |i| RatFn::var(4 - i[0]));
    let sigma = f("x3 - 2");
    let (rho_h, phi_h, sigma_h) = rescale_standard_slots(&f("x2"), &phi, &sigma, &ups, &g).unwrap();
    assert_eq!(sigma_h, sigma);
    // Υ = 2x1/(10 + x1²) dx¹ and g^{14} = 1, so Υ^a pairs with φ_4 = x2.
    let u = f("2*x1/(10 + x1^2)");
    assert_eq!(phi_h.get(&[0]), &f("x5").add(&u.mul(&sigma)));
    assert_eq!(rho_h, f("x2").sub(&u.mul(&f("x2"))));
}

fn small_poly() -> impl Strategy<Value = RatFn> {
    prop::collection::vec((prop::array::uniform5(0u32..2), -3i64..=3), 0..4).prop_map(|ts| {
        RatFn::from_poly(Poly::from_terms(
            ts.into_iter().map(|(e, c)| (Mono::from_exps(e), AlgScalar::from_int(c))).collect(),
        ))
    })
}

fn covector() -> impl Strategy<Value = TensorField> {
    prop::collection::vec(small_poly(), 5)
        .prop_map(|c| TensorField::new(vec![Variance::Co], 1, c).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn alt_is_idempotent(c in prop::collection::vec(small_poly(), 125)) {
        let t = TensorField::new(vec![Variance::Co; 3], 0, c).unwrap();
        let a = t.alt();
        prop_assert_eq!(a.alt(), a.clone());
        prop_assert!(a.is_antisymmetric());
    }

    #[test]
    fn decomposable_two_forms_square_to_zero(a in covector(), b in covector()) {
        let phi = a.wedge(&b);
        prop_assert!(phi.wedge(&phi).is_zero());
        prop_assert!(phi.wedge(&a).is_zero());
    }

    #[test]
    fn sym_and_alt_split_rank_two(c in prop::collection::vec(small_poly(), 25)) {
        let t = TensorField::new(vec![Variance::Co; 2], 0, c).unwrap();
        prop_assert_eq!(t.sym().add(&t.alt()).unwrap(), t);
    }
}
