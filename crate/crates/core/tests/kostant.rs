use std::sync::OnceLock;

use g2t_core::kostant::*;
use g2t_core::lie::{CoordSolver, LieElt};
use g2t_exact::linalg;
use g2t_exact::{AlgScalar, Rat};
use proptest::prelude::*;

fn g2() -> &'static GradedAlgebra {
    static G: OnceLock<GradedAlgebra> = OnceLock::new();
    G.get_or_init(|| GradedAlgebra::g2().unwrap())
}

fn so() -> &'static GradedAlgebra {
    static S: OnceLock<GradedAlgebra> = OnceLock::new();
    S.get_or_init(|| GradedAlgebra::so34().unwrap())
}

fn unit(n: usize, i: usize) -> Vec<AlgScalar> {
    let mut e = vec![AlgScalar::zero(); n];
    e[i] = AlgScalar::one();
    e
}

fn column(m: &[Vec<AlgScalar>], c: usize) -> Vec<AlgScalar> {
    m.iter().map(|r| r[c].clone()).collect()
}

/// The Chevalley–Eilenberg matrix rebuilt from matrix brackets: a basis
/// cochain X*_T ⊗ b_a is evaluated on arguments by a minor of their g₋ coordinates.
fn ce_oracle(alg: &GradedAlgebra, k: usize) -> Vec<Vec<AlgScalar>> {
    let xs: Vec<LieElt> = alg.neg.iter().map(|&i| alg.basis[i].clone()).collect();
    let neg_solver = CoordSolver::new(&xs).unwrap();
    let full = CoordSolver::new(&alg.basis).unwrap();
    let src = alg.cochains(k);
    let dst = alg.cochains(k + 1);
    let nneg = xs.len();
    let mut m = vec![vec![AlgScalar::zero(); src.dim()]; dst.dim()];
    // ω(y_1..y_k) for ω = X*_T ⊗ b_a and y_s in g₋ coordinates: det(y_s[T_r]) b_a.
    let eval = |t: &[usize], args: &[Vec<AlgScalar>]| -> AlgScalar {
        if t.is_empty() {
            return AlgScalar::one();
        }
        let minor: Vec<Vec<AlgScalar>> = args.iter().map(|y| t.iter().map(|&r| y[r].clone()).collect()).collect();
        linalg::determinant(&minor)
    };
    for (si, t) in src.tuples.iter().enumerate() {
        for a in 0..alg.dim() {
            let v = &alg.basis[a];
            for (di, u) in dst.tuples.iter().enumerate() {
                let args: Vec<Vec<AlgScalar>> = u.iter().map(|&i| unit(nneg, i)).collect();
                let mut acc = LieElt::zero();
                for j in 0..=k {
                    let rest: Vec<Vec<AlgScalar>> = args.iter().enumerate().filter(|&(s, _)| s != j).map(|(_, y)| y.clone()).collect();
                    let c = eval(t, &rest);
                    if !c.is_zero() {
                        let sign = AlgScalar::from_int(if j % 2 == 0 { 1 } else { -1 });
                        acc = acc.add(&xs[u[j]].bracket(v).scale(&(&sign * &c)));
                    }
                }
                for j in 0..=k {
                    for l in j + 1..=k {
                        let br = neg_solver.coords(&xs[u[j]].bracket(&xs[u[l]])).unwrap();
                        let mut rest = vec![br];
                        rest.extend(args.iter().enumerate().filter(|&(s, _)| s != j && s != l).map(|(_, y)| y.clone()));
                        let c = eval(t, &rest);
                        if !c.is_zero() {
                            let sign = AlgScalar::from_int(if (j + l) % 2 == 0 { 1 } else { -1 });
                            acc = acc.add(&v.scale(&(&sign * &c)));
                        }
                    }
                }
                for (b, x) in full.coords(&acc).unwrap().into_iter().enumerate() {
                    m[dst.index(di, b)][src.index(si, a)] = x;
                }
            }
        }
    }
    m
}

#[test]
fn ce_differential_matches_bracket_oracle() {
    for alg in [g2(), so()] {
        for k in 0..2 {
            assert_eq!(alg.ce_differential(k), ce_oracle(alg, k), "{} degree {k}", alg.name);
        }
    }
}

#[test]
fn differentials_square_to_zero() {
    for alg in [g2(), so()] {
        for k in 0..2 {
            assert!(is_zero_matrix(&mat_mul(&alg.ce_differential(k + 1), &alg.ce_differential(k))), "{} ∂∂ in {k}", alg.name);
        }
        for k in 2..4 {
            assert!(is_zero_matrix(&mat_mul(&alg.kostant_codiff(k - 1), &alg.kostant_codiff(k))), "{} ∂*∂* in {k}", alg.name);
        }
    }
}

#[test]
fn codifferential_on_degree_one_is_minus_bracket() {
    let g = g2();
    let ds = g.kostant_codiff(1);
    let sp = g.cochains(1);
    for j in 0..g.neg.len() {
        for a in 0..g.dim() {
            let col = column(&ds, sp.index(j, a));
            let z = g.element(&g.dual[j]);
            let expected = g.coords(&z.bracket(&g.basis[a]).scale(&AlgScalar::from_int(-1))).unwrap();
            assert_eq!(col, expected);
        }
    }
}

#[test]
fn conformal_codifferential_on_decomposables() {
    // ∂*(U∧V⊗A) = U⊗[V,A] − V⊗[U,A] on p̃₊, which is abelian.
    let s = so();
    let ds = s.kostant_codiff(2);
    let src = s.cochains(2);
    let dst = s.cochains(1);
    for (ti, t) in src.tuples.iter().enumerate() {
        let (u, v) = (s.element(&s.dual[t[0]]), s.element(&s.dual[t[1]]));
        for a in 0..s.dim() {
            let col = column(&ds, src.index(ti, a));
            let mut expected = vec![AlgScalar::zero(); dst.dim()];
            let va = s.coords(&v.bracket(&s.basis[a])).unwrap();
            let ua = s.coords(&u.bracket(&s.basis[a])).unwrap();
            for b in 0..s.dim() {
                expected[dst.index(t[0], b)] = va[b].clone();
                expected[dst.index(t[1], b)] = -&ua[b];
            }
            assert_eq!(col, expected);
        }
    }
}

#[test]
fn hodge_counts() {
    let table = [
        (g2(), [(14, 0, 2, 12), (70, 12, 3, 55), (140, 55, 5, 80)]),
        (so(), [(21, 0, 5, 16), (105, 16, 14, 75), (210, 75, 35, 100)]),
    ];
    for (alg, rows) in table {
        for (k, row) in rows.iter().enumerate() {
            let h = hodge_count(alg, k);
            assert!(h.holds(), "{} degree {k}: {h:?}", alg.name);
            assert_eq!((h.dim_c, h.im_d, h.ker_box, h.im_dstar), *row, "{} degree {k}", alg.name);
        }
    }
}

#[test]
fn degree_zero_harmonics_are_lowest_homogeneity() {
    // dim ker□ on C_0 = dim g₂ − dim [p₊, g₂].
    let g = g2();
    let images: Vec<Vec<AlgScalar>> = g
        .pos
        .iter()
        .flat_map(|&p| (0..g.dim()).map(move |a| g.coords(&g.basis[p].bracket(&g.basis[a])).unwrap()))
        .collect();
    let expected = g.dim() - linalg::rank(&images);
    assert_eq!(g.laplacian_kernel(0).len(), expected);
}

#[test]
fn harmonic_curvature_module() {
    let g = g2();
    let ker = g.laplacian_kernel(2);
    assert_eq!(ker.len(), 5);
    let sp = g.cochains(2);
    for v in &ker {
        for (i, x) in v.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            let (t, a) = sp.split(i);
            let mut gr: Vec<i32> = t.iter().map(|&j| g.grades[g.neg[j]]).collect();
            gr.sort();
            assert_eq!(gr, vec![-3, -1], "cochain arguments outside g₋₃∧g₋₁");
            assert_eq!(g.grades[a], 0, "value outside g₀");
        }
    }
    for a in (0..g.dim()).filter(|&a| g.grades[a] == 0) {
        assert_eq!(invariance_defect(&g.g0_action(a, 2), &ker), 0);
    }
}

#[test]
fn laplacian_preserves_homogeneity() {
    for alg in [g2(), so()] {
        for k in 0..3 {
            let l = alg.laplacian(k);
            let sp = alg.cochains(k);
            for (r, row) in l.iter().enumerate() {
                for (c, x) in row.iter().enumerate() {
                    if x.is_zero() {
                        continue;
                    }
                    let (tr, ar) = sp.split(r);
                    let (tc, ac) = sp.split(c);
                    assert_eq!(alg.homogeneity(tr, ar), alg.homogeneity(tc, ac));
                }
            }
        }
    }
}

#[test]
fn normality_containment() {
    let rep = normality_containment_check(g2(), so()).unwrap();
    assert!(rep.containment);
    assert_eq!(rep.harmonic_dim, 5);
    assert_eq!(rep.rank_on_harmonic, 0);
    assert!(rep.zero_maps_to_zero);
}

/// Killing form over the trace form of the defining representation.
fn killing_over_trace(alg: &GradedAlgebra) -> AlgScalar {
    for i in 0..alg.dim() {
        for j in 0..alg.dim() {
            let t = alg.basis[i].matmul(&alg.basis[j]).trace();
            if !t.is_zero() {
                return alg.killing[i][j].checked_div(&t).unwrap();
            }
        }
    }
    unreachable!()
}

#[test]
fn codifferential_is_adjoint_up_to_scale() {
    // With Frobenius Gram matrices the scale is −tr/B in every degree.
    for alg in [g2(), so()] {
        let expected = -&killing_over_trace(alg).inv().unwrap();
        for k in 0..3 {
            assert_eq!(alg.adjointness_scale(k), Some(expected.clone()), "{} degree {k}", alg.name);
        }
    }
    assert_eq!(killing_over_trace(g2()), AlgScalar::from_int(4));
    assert_eq!(killing_over_trace(so()), AlgScalar::from_int(5));
}

fn cochain(n: usize) -> impl Strategy<Value = Vec<AlgScalar>> {
    prop::collection::vec(
        prop_oneof![3 => Just(AlgScalar::zero()), 1 => (-3i64..=3).prop_map(AlgScalar::from_int)],
        n,
    )
}

fn dot(a: &[AlgScalar], b: &[AlgScalar]) -> AlgScalar {
    a.iter().zip(b).fold(AlgScalar::zero(), |acc, (x, y)| &acc + &(x * y))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn codiff_chain_property(c in cochain(140)) {
        let g = g2();
        let once = mat_vec(&g.kostant_codiff(2), &c);
        prop_assert!(mat_vec(&g.kostant_codiff(1), &once).iter().all(|x| x.is_zero()));
    }

    #[test]
    fn adjointness_on_random_cochains(a in cochain(70), b in cochain(140)) {
        let g = g2();
        let s = g.adjointness_scale(1).unwrap();
        let lhs = dot(&mat_vec(&g.ce_differential(1), &a), &mat_vec(&g.gram(2), &b));
        let rhs = dot(&a, &mat_vec(&g.gram(1), &mat_vec(&g.kostant_codiff(2), &b)));
        prop_assert_eq!(lhs, &s * &rhs);
    }
}

#[test]
fn rational_scale_values() {
    assert_eq!(g2().adjointness_scale(0), Some(AlgScalar::from_rat(Rat::new(-1, 4))));
    assert_eq!(so().adjointness_scale(0), Some(AlgScalar::from_rat(Rat::new(-1, 5))));
}
