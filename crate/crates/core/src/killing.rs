//! Conformal Killing fields versus almost Einstein scales for a normal
//! conformal Killing 2-form φ: the two linking maps, polynomial solution
//! spaces on the flat model and the resulting decomposition.

use std::collections::BTreeMap;

use g2t_exact::linalg::{self, Echelon, SparseRow};
use g2t_exact::{AlgScalar, Mono, Poly, Rat, RatFn};

use crate::characterize::lie_bracket;
use crate::error::CoreError;
use crate::tensor::{Curvature, Geometry, TensorField, Variance, DIM};
use crate::tractor::bgg_theta0;

fn check_vector(xi: &TensorField) -> Result<(), CoreError> {
    if xi.variance() != [Variance::Contra] {
        return Err(CoreError::Index("expected a vector field".into()));
    }
    Ok(())
}

/// φ_{pq} D^pξ^q + ½ ξ^p D^qφ_{pq}. The divergence term enters with the sign
/// of the μ-slot convention used in `tractor_connection`.
pub fn einstein_part(xi: &TensorField, phi: &TensorField, geo: &Geometry) -> Result<RatFn, CoreError> {
    check_vector(xi)?;
    let g = &geo.metric;
    let dxi = geo.cov_deriv(xi).raise(0, g)?;
    let first = phi.tensor(&dxi).contract(0, 2)?.contract(0, 1)?;
    let div = geo.cov_deriv(phi).trace_metric(0, 2, g)?;
    let second = xi.tensor(&div).contract(0, 1)?;
    Ok(first.scalar_value().add(&second.scalar_value().scale(&AlgScalar::frac(1, 2))))
}

/// ξ^a obtained by raising φ_{ap}D^pσ + ¼σD^pφ_{pa}.
pub fn killing_from_scale(sigma: &RatFn, phi: &TensorField, geo: &Geometry) -> Result<TensorField, CoreError> {
    let g = &geo.metric;
    let ds = geo.cov_deriv(&TensorField::scalar(sigma.clone(), 1)).raise(0, g)?;
    let first = phi.tensor(&ds).contract(1, 2)?;
    let div = geo.cov_deriv(phi).trace_metric(0, 1, g)?;
    let low = first.add(&div.mul_fn(sigma).scale_rat(1, 4).with_weight(first.weight()))?;
    Ok(low.raise(0, g)?.with_weight(0))
}

/// Conformal Killing residual of a vector field.
pub fn killing_residual(xi: &TensorField, geo: &Geometry, curv: &Curvature) -> Result<TensorField, CoreError> {
    check_vector(xi)?;
    let low = xi.lower(0, &geo.metric)?;
    bgg_theta0(1, &low, geo, curv)
}

/// Almost Einstein residual of a scale.
pub fn einstein_residual(sigma: &RatFn, geo: &Geometry, curv: &Curvature) -> Result<TensorField, CoreError> {
    bgg_theta0(0, &TensorField::scalar(sigma.clone(), 1), geo, curv)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SolutionKind {
    ConformalKilling,
    AlmostEinstein,
}

/// A basis of polynomial solutions of bounded degree.
#[derive(Clone, Debug)]
pub struct SolutionSpaceBasis {
    pub kind: SolutionKind,
    pub degree: u32,
    /// Vector fields (conformal Killing) or scalars of weight 1 (almost Einstein).
    pub basis: Vec<TensorField>,
}

impl SolutionSpaceBasis {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }
}

/// Kernel of a linear operator on `nfields` polynomial components of degree ≤ d,
/// computed by applying the operator to each monomial unknown.
pub fn polynomial_kernel(nfields: usize, degree: u32, op: impl Fn(&[RatFn]) -> Vec<RatFn>) -> Vec<Vec<Poly>> {
    let monos = Mono::all_up_to(degree);
    let nm = monos.len();
    let ncols = nfields * nm;
    let mut rows: BTreeMap<(usize, Mono), Vec<(usize, AlgScalar)>> = BTreeMap::new();
    for f in 0..nfields {
        for (mi, &m) in monos.iter().enumerate() {
            let col = f * nm + mi;
            let mut input = vec![RatFn::zero(); nfields];
            input[f] = RatFn::from_poly(Poly::monomial(m, AlgScalar::one()));
            for (oi, out) in op(&input).iter().enumerate() {
                let p = out.as_poly().expect("polynomial operator output");
                for (om, c) in p.terms() {
                    rows.entry((oi, *om)).or_default().push((col, c.clone()));
                }
            }
        }
    }
    let sparse: Vec<SparseRow<AlgScalar>> = rows.into_values().collect();
    linalg::sparse_nullspace(sparse, ncols)
        .into_iter()
        .map(|v| {
            (0..nfields)
                .map(|f| {
                    Poly::from_terms(
                        monos
                            .iter()
                            .enumerate()
                            .filter(|(mi, _)| !v[f * nm + mi].is_zero())
                            .map(|(mi, &m)| (m, v[f * nm + mi].clone()))
                            .collect(),
                    )
                })
                .collect()
        })
        .collect()
}

pub fn solve_polynomial_solutions(kind: SolutionKind, geo: &Geometry, degree: u32) -> Result<SolutionSpaceBasis, CoreError> {
    if !geo.metric.is_constant() {
        return Err(CoreError::Input("polynomial solution spaces need a constant-coefficient metric".into()));
    }
    let curv = geo.curvature();
    let basis = match kind {
        SolutionKind::ConformalKilling => polynomial_kernel(DIM, degree, |v| {
            let xi = TensorField::new(vec![Variance::Contra], 0, v.to_vec()).expect("vector");
            killing_residual(&xi, geo, &curv).expect("residual").comps().to_vec()
        })
        .into_iter()
        .map(|ps| TensorField::new(vec![Variance::Contra], 0, ps.into_iter().map(RatFn::from_poly).collect()).expect("vector"))
        .collect(),
        SolutionKind::AlmostEinstein => polynomial_kernel(1, degree, |v| {
            einstein_residual(&v[0], geo, &curv).expect("residual").comps().to_vec()
        })
        .into_iter()
        .map(|ps| TensorField::scalar(RatFn::from_poly(ps[0].clone()), 1))
        .collect(),
    };
    Ok(SolutionSpaceBasis { kind, degree, basis })
}

/// c = einstein_part(killing_from_scale(σ))/σ, required to be one constant for all σ.
pub fn calibrate_constant(geo: &Geometry, phi: &TensorField, scales: &[RatFn]) -> Result<AlgScalar, CoreError> {
    let mut c: Option<AlgScalar> = None;
    for s in scales {
        if s.is_zero() {
            continue;
        }
        let xi = killing_from_scale(s, phi, geo)?;
        let back = einstein_part(&xi, phi, geo)?;
        let ratio = back.div(s)?;
        let r = ratio
            .constant_value()
            .or_else(|| ratio.is_zero().then(AlgScalar::zero))
            .ok_or_else(|| CoreError::Check(format!("ratio is not constant for σ = {s}")))?;
        match &c {
            None => c = Some(r),
            Some(prev) if *prev != r => {
                return Err(CoreError::Check(format!("ratio {r} differs from {prev} for σ = {s}")));
            }
            _ => {}
        }
    }
    let c = c.ok_or_else(|| CoreError::Check("no nonzero scales supplied".into()))?;
    if c.is_zero() {
        return Err(CoreError::Check("calibration constant vanishes".into()));
    }
    Ok(c)
}

#[derive(Clone, Debug)]
pub struct Decomposition {
    pub symmetry: TensorField,
    pub scale: RatFn,
}

/// ξ = ξ_sym + killing_from_scale(σ) with σ = einstein_part(ξ)/c.
pub fn decompose_killing(
    xi: &TensorField,
    phi: &TensorField,
    geo: &Geometry,
    curv: &Curvature,
    c: &AlgScalar,
) -> Result<Decomposition, CoreError> {
    if c.is_zero() {
        return Err(CoreError::Input("calibration constant must be nonzero".into()));
    }
    if !killing_residual(xi, geo, curv)?.is_zero() {
        return Err(CoreError::Check("input field is not conformal Killing".into()));
    }
    let scale = einstein_part(xi, phi, geo)?.scale(&c.inv()?);
    let symmetry = xi.sub(&killing_from_scale(&scale, phi, geo)?)?;
    Ok(Decomposition { symmetry, scale })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymmetryReport {
    /// For each sample point, whether every [ξ, η] lies in the frame span there.
    pub pointwise: Vec<bool>,
    /// Whether every [ξ, η] lies in the frame span over the function field.
    pub exact: bool,
}

impl SymmetryReport {
    pub fn is_symmetry(&self) -> bool {
        self.exact && self.pointwise.iter().all(|&b| b)
    }
}

/// Tests whether [ξ, η] ∈ span(frame) for each frame field η.
pub fn symmetry_residual(xi: &TensorField, frame: &[TensorField], samples: &[Vec<Rat>]) -> Result<SymmetryReport, CoreError> {
    check_vector(xi)?;
    let brackets: Vec<TensorField> = frame.iter().map(|eta| lie_bracket(xi, eta)).collect();
    let mut pointwise = Vec::with_capacity(samples.len());
    for pt in samples {
        let ev = |t: &TensorField| t.eval(pt).ok_or_else(|| CoreError::Check("denominator vanishes at a sample".into()));
        let base: Vec<Vec<AlgScalar>> = frame.iter().map(ev).collect::<Result<_, _>>()?;
        let r = linalg::rank(&base);
        let mut ok = true;
        for b in &brackets {
            let mut rows = base.clone();
            rows.push(ev(b)?);
            if linalg::rank(&rows) != r {
                ok = false;
            }
        }
        pointwise.push(ok);
    }
    let mut e: Echelon<RatFn> = Echelon::new(DIM);
    for f in frame {
        e.insert_dense(f.comps());
    }
    let exact = brackets.iter().all(|b| e.contains(linalg::to_sparse(b.comps())));
    Ok(SymmetryReport { pointwise, exact })
}

/// Linear combinations of `fields` on which `einstein_part` vanishes
/// identically, for polynomial inputs.
pub fn einstein_part_kernel(fields: &[TensorField], phi: &TensorField, geo: &Geometry) -> Result<Vec<TensorField>, CoreError> {
    let mut rows: BTreeMap<Mono, Vec<(usize, AlgScalar)>> = BTreeMap::new();
    for (j, xi) in fields.iter().enumerate() {
        let v = einstein_part(xi, phi, geo)?;
        let p = v.as_poly().ok_or_else(|| CoreError::Input("einstein part is not polynomial".into()))?;
        for (m, c) in p.terms() {
            rows.entry(*m).or_default().push((j, c.clone()));
        }
    }
    let ker = linalg::sparse_nullspace(rows.into_values().collect::<Vec<SparseRow<AlgScalar>>>(), fields.len());
    ker.into_iter()
        .map(|k| {
            let zero = TensorField::contravariant(1, 0, |_| RatFn::zero());
            fields.iter().zip(&k).try_fold(zero, |acc, (f, c)| acc.add(&f.scale(c)))
        })
        .collect()
}
