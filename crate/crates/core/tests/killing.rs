use std::sync::OnceLock;

use g2t_core::flat_model::{build_flat_model, FlatModelBundle};
use g2t_core::killing::*;
use g2t_core::tensor::*;
use g2t_exact::{linalg, parse_expr, AlgScalar, RatFn};
use proptest::prelude::*;

fn bundle() -> &'static FlatModelBundle {
    static B: OnceLock<FlatModelBundle> = OnceLock::new();
    B.get_or_init(|| build_flat_model().unwrap())
}

fn ckf() -> &'static SolutionSpaceBasis {
    static C: OnceLock<SolutionSpaceBasis> = OnceLock::new();
    C.get_or_init(|| solve_polynomial_solutions(SolutionKind::ConformalKilling, &Geometry::flat(), 2).unwrap())
}

fn combine(basis: &[TensorField], c: &[i64]) -> TensorField {
    basis
        .iter()
        .zip(c)
        .fold(TensorField::contravariant(1, 0, |_| RatFn::zero()), |acc, (b, &x)| {
            acc.add(&b.scale(&AlgScalar::from_int(x))).unwrap()
        })
}

/// Rank of a list of polynomial vector fields, read off their coefficients.
fn coefficient_rank(fields: &[Vec<RatFn>]) -> usize {
    let mut keys = std::collections::BTreeMap::new();
    let mut rows = Vec::new();
    for fld in fields {
        let mut entries = Vec::new();
        for (i, comp) in fld.iter().enumerate() {
            for (m, c) in comp.as_poly().unwrap().terms() {
                let n = keys.len();
                entries.push((*keys.entry((i, *m)).or_insert(n), c.clone()));
            }
        }
        rows.push(entries);
    }
    let dense: Vec<Vec<AlgScalar>> = rows
        .into_iter()
        .map(|es| {
            let mut r = vec![AlgScalar::zero(); keys.len()];
            for (k, c) in es {
                r[k] = c;
            }
            r
        })
        .collect();
    linalg::rank(&dense)
}

#[test]
fn solution_space_dimensions() {
    let geo = Geometry::flat();
    assert_eq!(ckf().dim(), 21);
    assert_eq!(solve_polynomial_solutions(SolutionKind::ConformalKilling, &geo, 1).unwrap().dim(), 16);
    assert_eq!(solve_polynomial_solutions(SolutionKind::AlmostEinstein, &geo, 2).unwrap().dim(), 7);
    assert_eq!(solve_polynomial_solutions(SolutionKind::AlmostEinstein, &geo, 3).unwrap().dim(), 7);
    let curv = geo.curvature();
    for xi in &ckf().basis {
        assert!(killing_residual(xi, &geo, &curv).unwrap().is_zero());
    }
}

#[test]
fn curved_metric_is_rejected_by_polynomial_solver() {
    let p = |s: &str| parse_expr(s).unwrap().as_poly().unwrap().clone();
    let n = [[p("x1"), p("0"), p("0")], [p("0"), p("0"), p("0")]];
    let geo = Geometry::new(unimodular_perturbation(&n).unwrap());
    assert!(solve_polynomial_solutions(SolutionKind::ConformalKilling, &geo, 1).is_err());
}

#[test]
fn kernel_of_einstein_part_is_fourteen_symmetries() {
    let b = bundle();
    let vals: Vec<Vec<RatFn>> = ckf().basis.iter().map(|x| vec![einstein_part(x, &b.phi0, &b.geometry).unwrap()]).collect();
    let kernel_dim = ckf().dim() - coefficient_rank(&vals);
    assert_eq!(kernel_dim, 14);
    // Build kernel elements and check they preserve the recovered distribution.
    let rows: Vec<Vec<AlgScalar>> = {
        let mut keys = std::collections::BTreeMap::new();
        for v in &vals {
            for (m, _) in v[0].as_poly().unwrap().terms() {
                let n = keys.len();
                keys.entry(*m).or_insert(n);
            }
        }
        let mut m = vec![vec![AlgScalar::zero(); vals.len()]; keys.len()];
        for (j, v) in vals.iter().enumerate() {
            for (mono, c) in v[0].as_poly().unwrap().terms() {
                m[keys[mono]][j] = c.clone();
            }
        }
        m
    };
    let ker = linalg::nullspace(&rows, vals.len());
    assert_eq!(ker.len(), 14);
    for k in ker {
        let xi = ckf()
            .basis
            .iter()
            .zip(&k)
            .fold(TensorField::contravariant(1, 0, |_| RatFn::zero()), |acc, (b, c)| acc.add(&b.scale(c)).unwrap());
        let rep = symmetry_residual(&xi, &b.distribution.frame, &b.samples).unwrap();
        assert!(rep.is_symmetry(), "{rep:?}");
    }
}

#[test]
fn kernel_helper_agrees() {
    let b = bundle();
    let ker = einstein_part_kernel(&ckf().basis, &b.phi0, &b.geometry).unwrap();
    assert_eq!(ker.len(), 14);
    for x in &ker {
        assert!(einstein_part(x, &b.phi0, &b.geometry).unwrap().is_zero());
    }
    let comps: Vec<Vec<RatFn>> = ker.iter().map(|x| x.comps().to_vec()).collect();
    assert_eq!(coefficient_rank(&comps), 14);
}

#[test]
fn scales_give_killing_fields_and_calibrate_to_one() {
    let b = bundle();
    assert_eq!(b.c, AlgScalar::one());
    for s in &b.scales {
        let xi = killing_from_scale(s, &b.phi0, &b.geometry).unwrap();
        assert!(killing_residual(&xi, &b.geometry, &b.curvature).unwrap().is_zero());
        assert_eq!(einstein_part(&xi, &b.phi0, &b.geometry).unwrap(), s.scale(&b.c));
    }
    // Image of the seven scales is seven-dimensional and meets the symmetries trivially.
    let images: Vec<Vec<RatFn>> = b
        .scales
        .iter()
        .map(|s| killing_from_scale(s, &b.phi0, &b.geometry).unwrap().comps().to_vec())
        .collect();
    assert_eq!(coefficient_rank(&images), 7);
}

#[test]
fn constant_scale_does_not_give_a_symmetry() {
    let b = bundle();
    let xi = killing_from_scale(&RatFn::one(), &b.phi0, &b.geometry).unwrap();
    assert!(!xi.is_zero());
    assert!(!symmetry_residual(&xi, &b.distribution.frame, &b.samples).unwrap().is_symmetry());
}

#[test]
fn doubling_phi_quadruples_c() {
    let b = bundle();
    let two = b.phi0.scale_rat(2, 1);
    assert_eq!(calibrate_constant(&b.geometry, &two, &b.scales).unwrap(), b.c.scale(&g2t_exact::Rat::from_int(4)));
}

#[test]
fn calibration_rejects_empty_input() {
    let b = bundle();
    assert!(calibrate_constant(&b.geometry, &b.phi0, &[RatFn::zero()]).is_err());
}

#[test]
fn non_killing_input_is_rejected() {
    let b = bundle();
    let xi = TensorField::contravariant(1, 0, |i| if i[0] == 0 { parse_expr("x1^2").unwrap() } else { RatFn::zero() });
    assert!(decompose_killing(&xi, &b.phi0, &b.geometry, &b.curvature, &b.c).is_err());
    assert!(decompose_killing(&ckf().basis[0], &b.phi0, &b.geometry, &b.curvature, &AlgScalar::zero()).is_err());
}

#[test]
fn non_vector_input_is_rejected() {
    let b = bundle();
    let w = TensorField::covariant(1, 0, |_| RatFn::one());
    assert!(einstein_part(&w, &b.phi0, &b.geometry).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10))]

    #[test]
    fn decomposition_round_trips(c in prop::collection::vec(-2i64..=2, 21)) {
        let b = bundle();
        let xi = combine(&ckf().basis, &c);
        let d = decompose_killing(&xi, &b.phi0, &b.geometry, &b.curvature, &b.c).unwrap();
        let back = d.symmetry.add(&killing_from_scale(&d.scale, &b.phi0, &b.geometry).unwrap()).unwrap();
        prop_assert_eq!(back, xi);
        prop_assert!(einstein_part(&d.symmetry, &b.phi0, &b.geometry).unwrap().is_zero());
        prop_assert!(symmetry_residual(&d.symmetry, &b.distribution.frame, &b.samples).unwrap().is_symmetry());
        prop_assert!(einstein_residual(&d.scale, &b.geometry, &b.curvature).unwrap().is_zero());
    }

    #[test]
    fn einstein_part_is_linear(c1 in prop::collection::vec(-2i64..=2, 21), c2 in prop::collection::vec(-2i64..=2, 21)) {
        let b = bundle();
        let (x, y) = (combine(&ckf().basis, &c1), combine(&ckf().basis, &c2));
        let sum = einstein_part(&x.add(&y).unwrap(), &b.phi0, &b.geometry).unwrap();
        let parts = einstein_part(&x, &b.phi0, &b.geometry).unwrap().add(&einstein_part(&y, &b.phi0, &b.geometry).unwrap());
        prop_assert_eq!(sum, parts);
    }
}
