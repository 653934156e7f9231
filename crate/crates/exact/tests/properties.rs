use g2t_exact::{parse_expr, AlgScalar, Mono, Poly, Rat, RatFn};
use proptest::prelude::*;

fn rat() -> impl Strategy<Value = Rat> {
    (-6i64..=6, 1i64..=4).prop_map(|(n, d)| Rat::new(n, d))
}

fn alg() -> impl Strategy<Value = AlgScalar> {
    (rat(), rat(), rat(), rat()).prop_map(|(a, b, c, d)| AlgScalar::new(a, b, c, d))
}

fn alg_sparse() -> impl Strategy<Value = AlgScalar> {
    prop_oneof![
        3 => rat().prop_map(AlgScalar::from_rat),
        1 => alg(),
    ]
}

fn poly() -> impl Strategy<Value = Poly> {
    prop::collection::vec((prop::array::uniform5(0u32..3), alg_sparse()), 0..5)
        .prop_map(|ts| Poly::from_terms(ts.into_iter().map(|(e, c)| (Mono::from_exps(e), c)).collect()))
}

fn ratfn() -> impl Strategy<Value = RatFn> {
    (poly(), poly()).prop_map(|(n, d)| {
        let d = if d.is_zero() { Poly::one() } else { d };
        RatFn::new(n, d).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn alg_field_axioms(x in alg(), y in alg(), z in alg()) {
        prop_assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
        prop_assert_eq!(&x * &(&y + &z), &(&x * &y) + &(&x * &z));
        prop_assert_eq!(&x * &y, &y * &x);
        if !x.is_zero() {
            prop_assert_eq!(&x * &x.inv().unwrap(), AlgScalar::one());
        }
    }

    #[test]
    fn rational_embedding_is_ring_hom(p in rat(), q in rat()) {
        let (ep, eq) = (AlgScalar::from_rat(p.clone()), AlgScalar::from_rat(q.clone()));
        prop_assert_eq!(&ep + &eq, AlgScalar::from_rat(&p + &q));
        prop_assert_eq!(&ep * &eq, AlgScalar::from_rat(&p * &q));
    }

    #[test]
    fn leibniz_rule(p in poly(), q in poly(), v in 0usize..5) {
        let lhs = p.mul(&q).diff(v);
        let rhs = p.diff(v).mul(&q).add(&p.mul(&q.diff(v)));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn partials_commute(p in poly(), i in 0usize..5, j in 0usize..5) {
        prop_assert_eq!(p.diff(i).diff(j), p.diff(j).diff(i));
    }

    #[test]
    fn render_parse_round_trip(f in ratfn()) {
        let text = f.render();
        let back = parse_expr(&text).unwrap();
        prop_assert_eq!(back, f);
    }

    #[test]
    fn equality_is_a_congruence(f in ratfn(), g in ratfn(), h in ratfn()) {
        // f·h/h is a different representative of f whenever h ≠ 0.
        prop_assume!(!h.is_zero());
        let f2 = f.mul(&h).div(&h).unwrap();
        prop_assert_eq!(&f2, &f);
        prop_assert_eq!(f2.add(&g), f.add(&g));
        prop_assert_eq!(f2.sub(&g), f.sub(&g));
        prop_assert_eq!(f2.mul(&g), f.mul(&g));
        if !g.is_zero() {
            prop_assert_eq!(f2.div(&g).unwrap(), f.div(&g).unwrap());
        }
    }

    #[test]
    fn quotient_rule_against_expansion(f in ratfn(), v in 0usize..5) {
        // d(f)·den = d(num) − f·d(den)
        let num = RatFn::from_poly(f.num().clone());
        let den = RatFn::from_poly(f.den().clone());
        let lhs = f.diff(v).mul(&den);
        let rhs = num.diff(v).sub(&f.mul(&den.diff(v)));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn sparse_and_dense_kernels_agree(rows in prop::collection::vec(prop::collection::vec(-3i64..=3, 6), 1..6)) {
        let m: Vec<Vec<Rat>> = rows.iter().map(|r| r.iter().map(|&x| Rat::from_int(x)).collect()).collect();
        let k = g2t_exact::linalg::nullspace(&m, 6);
        prop_assert_eq!(k.len() + g2t_exact::linalg::rank(&m), 6);
        for v in &k {
            for r in &m {
                let dot = r.iter().zip(v).fold(Rat::ZERO, |a, (x, y)| &a + &(x * y));
                prop_assert!(dot.is_zero());
            }
        }
    }
}

#[test]
fn spec_examples() {
    assert_eq!(&AlgScalar::sqrt2() * &AlgScalar::sqrt3(), AlgScalar::sqrt6());
    let x1 = Poly::var(0);
    let p = x1.mul(&x1).mul(&Poly::var(1));
    assert_eq!(p.diff(0), x1.mul(&Poly::var(1)).scale(&AlgScalar::from_int(2)));
    assert!(Poly::from_int(4).diff(2).is_zero());
    assert!(parse_expr("(x1+x2)/(x1-x2)").unwrap().den().leading().is_some());
}
