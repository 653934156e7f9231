//! Named pass/fail checks shared by the command-line front end and the
//! acceptance target.

use g2t_exact::{linalg, AlgScalar, Rat};

use crate::error::CoreError;
use crate::kostant::{hodge_count, is_zero_matrix, mat_mul, normality_containment_check, GradedAlgebra};
use crate::lie::{bilinear_from_threeform, entry_grade, g2_basis, h_matrix, has_pure_grade, LieElt, ThreeForm7};
use crate::tensor::{Curvature, CurvatureIdentities, Geometry};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

impl Check {
    pub fn new(name: &str, pass: bool, detail: impl Into<String>) -> Self {
        Check { name: name.to_string(), pass, detail: detail.into() }
    }
}

pub fn all_pass(checks: &[Check]) -> bool {
    checks.iter().all(|c| c.pass)
}

fn rank_of(ms: &[LieElt]) -> usize {
    let rows: Vec<Vec<AlgScalar>> = ms.iter().map(|m| m.entries().to_vec()).collect();
    linalg::rank(&rows)
}

/// Checks on the g2 basis and the 3-form `phi` it is meant to annihilate.
pub fn lie_checks(phi: &ThreeForm7) -> Vec<Check> {
    let basis = g2_basis();
    let elts: Vec<LieElt> = basis.iter().map(|b| b.elt.clone()).collect();
    let mut out = Vec::new();
    let dim = rank_of(&elts);
    out.push(Check::new("g2 dimension", dim == 14, format!("{dim}")));

    let mut all = elts.clone();
    for a in &elts {
        for b in &elts {
            all.push(a.bracket(b));
        }
    }
    let closed = rank_of(&all) == dim;
    out.push(Check::new("bracket closure", closed, if closed { "closed" } else { "not closed" }));

    let failing: Vec<&str> = basis.iter().filter(|b| !phi.annihilated_by(&b.elt)).map(|b| b.label.as_str()).collect();
    out.push(Check::new(
        "generators annihilate phi",
        failing.is_empty(),
        if failing.is_empty() { "35 triples, 14 generators".to_string() } else { format!("fails for {}", failing.join(" ")) },
    ));

    let in_so = elts.iter().all(|m| m.preserves_h());
    out.push(Check::new("generators preserve h", in_so, ""));

    let dims: Vec<usize> = (-3..=3)
        .map(|g| {
            let proj: Vec<LieElt> = elts
                .iter()
                .map(|m| LieElt::from_fn(|i, j| if entry_grade(i, j) == g { m.get(i, j).clone() } else { AlgScalar::zero() }))
                .collect();
            rank_of(&proj)
        })
        .collect();
    out.push(Check::new("grading dimensions", dims == [2, 1, 2, 4, 2, 1, 2], format!("{dims:?}")));

    let graded = basis.iter().all(|a| {
        basis.iter().all(|b| {
            let c = a.elt.bracket(&b.elt);
            let g = a.grade + b.grade;
            if g.abs() > 3 {
                c.is_zero()
            } else {
                has_pure_grade(&c, g)
            }
        })
    });
    out.push(Check::new("bracket respects grading", graded, ""));

    let p = bilinear_from_threeform(phi);
    let h = h_matrix();
    let inv6 = AlgScalar::sqrt6().scale(&Rat::new(1, 6));
    let matches = !p.degenerate && (0..7).all(|i| (0..7).all(|j| p.pairing[i][j] == h.get(i, j) * &inv6));
    out.push(Check::new("H(phi) = h/sqrt6", matches, if p.degenerate { "degenerate" } else { "" }));
    out
}

/// Kostant codifferential, Laplacian kernel and normality containment.
pub fn homology_checks() -> Result<Vec<Check>, CoreError> {
    let g = GradedAlgebra::g2()?;
    let so = GradedAlgebra::so34()?;
    let mut out = Vec::new();
    for alg in [&g, &so] {
        let dd = (0..2).all(|k| is_zero_matrix(&mat_mul(&alg.ce_differential(k + 1), &alg.ce_differential(k))));
        out.push(Check::new(&format!("{} d∘d = 0", alg.name), dd, "degrees 0..1"));
        let ss = (2..4).all(|k| is_zero_matrix(&mat_mul(&alg.kostant_codiff(k - 1), &alg.kostant_codiff(k))));
        out.push(Check::new(&format!("{} d*∘d* = 0", alg.name), ss, "degrees 2..3"));
        let hodge: Vec<_> = (0..3).map(|k| hodge_count(alg, k)).collect();
        let detail: Vec<String> =
            hodge.iter().map(|h| format!("{}={}+{}+{}", h.dim_c, h.im_d, h.ker_box, h.im_dstar)).collect();
        out.push(Check::new(&format!("{} Hodge decomposition", alg.name), hodge.iter().all(|h| h.holds()), detail.join(" ")));
    }
    let ker = g.laplacian_kernel(2);
    let sp = g.cochains(2);
    let located = ker.iter().all(|v| {
        v.iter().enumerate().filter(|(_, x)| !x.is_zero()).all(|(i, _)| {
            let (t, a) = sp.split(i);
            let mut gr: Vec<i32> = t.iter().map(|&j| g.grades[g.neg[j]]).collect();
            gr.sort();
            gr == [-3, -1] && g.grades[a] == 0
        })
    });
    out.push(Check::new("harmonic curvature dimension", ker.len() == 5, format!("{}", ker.len())));
    out.push(Check::new("harmonic curvature in homogeneity 1 with g0 values", located, ""));
    let rep = normality_containment_check(&g, &so)?;
    out.push(Check::new("normality containment", rep.containment && rep.zero_maps_to_zero, ""));
    out.push(Check::new("rank on harmonic part", rep.rank_on_harmonic == 0, format!("{}", rep.rank_on_harmonic)));
    Ok(out)
}

/// Curvature identities. The divergence of the Weyl tensor is checked against
/// 2A; the 3A variant is reported alongside but never decides the outcome.
pub fn curvature_checks(geo: &Geometry, curv: &Curvature) -> (Vec<Check>, CurvatureIdentities) {
    let ids = CurvatureIdentities::compute(geo, curv);
    let out = vec![
        Check::new("metric compatibility", geo.metric_compatibility().is_zero(), ""),
        Check::new("first Bianchi identity", ids.bianchi, ""),
        Check::new("Riemann skew symmetries", ids.riemann_skew, ""),
        Check::new("Weyl trace-free", ids.weyl_trace_free, ""),
        Check::new("div C = 2A", ids.div_weyl_2a, ""),
    ];
    (out, ids)
}
