//! Characterization of conformal structures induced by generic rank-2
//! distributions through a 2-form φ, and distributions from ODEs z′ = F.

use g2t_exact::linalg;
use g2t_exact::{AlgScalar, Rat, RatFn};

use crate::error::CoreError;
use crate::tensor::{Curvature, Geometry, TensorField, Variance, DIM};
use crate::tractor::{bgg_theta0, laplacian, normality_residuals, split_l0, wedge_identities};

/// μ = D^pφ_{pa} and
/// ρ = 2Δφ + 4 alt(D^pD_aφ_{pb}) + 3 alt(D_aD^pφ_{pb}) + 24 alt(P^p_aφ_{pb}) − 6Jφ.
pub fn mu_rho_of(phi: &TensorField, geo: &Geometry, curv: &Curvature) -> Result<(TensorField, TensorField), CoreError> {
    if phi.rank() != 2 || phi.variance() != [Variance::Co, Variance::Co] {
        return Err(CoreError::Index("φ must be a 2-form".into()));
    }
    let g = &geo.metric;
    let dphi = geo.cov_deriv(phi);
    let mu = dphi.trace_metric(0, 1, g)?.with_weight(1);
    let ddphi = geo.cov_deriv(&dphi);
    let t13 = ddphi.trace_metric(0, 2, g)?.alt();
    let t23 = ddphi.trace_metric(1, 2, g)?.alt();
    let p13 = curv.schouten.tensor(phi).trace_metric(0, 2, g)?.alt();
    let w = 1;
    let rho = laplacian(phi, geo)
        .scale_rat(2, 1)
        .with_weight(w)
        .add(&t13.scale_rat(4, 1).with_weight(w))?
        .add(&t23.scale_rat(3, 1).with_weight(w))?
        .add(&p13.scale_rat(24, 1).with_weight(w))?
        .sub(&phi.mul_fn(&curv.j).scale_rat(6, 1).with_weight(w))?;
    Ok((mu, rho))
}

/// The constant λ with a = λ·b, if one exists (None when b = 0 or no constant works).
pub fn proportionality(a: &TensorField, b: &TensorField) -> Option<AlgScalar> {
    let (x, y) = a.comps().iter().zip(b.comps()).find(|(_, y)| !y.is_zero())?;
    let ratio = x.div(y).ok()?;
    let lambda = ratio.constant_value().or_else(|| ratio.is_zero().then(AlgScalar::zero))?;
    let scaled = b.scale(&lambda);
    (scaled.comps() == a.comps()).then_some(lambda)
}

#[derive(Clone, Debug)]
pub struct CharacterizationReport {
    pub decomposable: bool,
    /// φ∧φ.
    pub witness: TensorField,
    pub normal: bool,
    pub theta0_zero: bool,
    /// Residuals of the three normality equations for L₀(φ).
    pub residuals: [TensorField; 3],
    /// φ∧μ∧ρ (the coefficient of dx¹∧…∧dx⁵).
    pub generic_form: RatFn,
    pub generic: bool,
    pub samples: Vec<(Vec<Rat>, Option<AlgScalar>)>,
    /// True when φ∧μ∧ρ is nonzero at every sample point or zero at every one.
    pub samples_consistent: bool,
    pub mu: TensorField,
    pub rho: TensorField,
    /// μ / μ-slot of L₀(φ) and ρ / ρ-slot of L₀(φ), where constant.
    pub mu_factor: Option<AlgScalar>,
    pub rho_factor: Option<AlgScalar>,
    pub verdict: bool,
}

pub fn characterize_two_form(geo: &Geometry, phi: &TensorField, samples: &[Vec<Rat>]) -> Result<CharacterizationReport, CoreError> {
    let curv = geo.curvature();
    let phi = phi.clone().with_weight(3);
    let witness = phi.wedge(&phi);
    let decomposable = witness.is_zero();
    let theta = bgg_theta0(2, &phi, geo, &curv)?;
    let l0 = split_l0(2, &phi, geo, &curv)?;
    let residuals = normality_residuals(&l0, geo, &curv)?;
    let theta0_zero = theta.is_zero();
    let normal = theta0_zero && residuals.iter().all(|r| r.is_zero());
    let (mu, rho) = mu_rho_of(&phi, geo, &curv)?;
    let wi = wedge_identities(&phi, &mu, &rho);
    let generic_form = wi.a1.get(&[0, 1, 2, 3, 4]).clone();
    let generic = !generic_form.is_zero();
    let samples: Vec<(Vec<Rat>, Option<AlgScalar>)> = samples.iter().map(|p| (p.clone(), generic_form.eval(p))).collect();
    let nonzero: Vec<bool> = samples.iter().filter_map(|(_, v)| v.as_ref().map(|x| !x.is_zero())).collect();
    let samples_consistent = nonzero.iter().all(|&b| b) || nonzero.iter().all(|&b| !b);
    let mu_factor = proportionality(&mu, l0.mu.as_ref().expect("μ slot"));
    let rho_factor = proportionality(&rho, &l0.rho);
    Ok(CharacterizationReport {
        decomposable,
        witness,
        normal,
        theta0_zero,
        residuals,
        generic_form,
        generic,
        samples,
        samples_consistent,
        mu,
        rho,
        mu_factor,
        rho_factor,
        verdict: decomposable && normal && generic,
    })
}

/// A rank-2 distribution given by two vector fields, with the rank-3 bracket
/// distribution when known.
#[derive(Clone, Debug)]
pub struct DistributionFrame {
    pub frame: Vec<TensorField>,
    pub derived: Vec<TensorField>,
    pub samples: Vec<Vec<Rat>>,
}

fn vector(comps: Vec<RatFn>) -> TensorField {
    TensorField::new(vec![Variance::Contra], 0, comps).expect("vector")
}

fn eval_vectors(vs: &[TensorField], pt: &[Rat]) -> Result<Vec<Vec<AlgScalar>>, CoreError> {
    vs.iter()
        .map(|v| v.eval(pt).ok_or_else(|| CoreError::Check(format!("denominator vanishes at {}", fmt_point(pt)))))
        .collect()
}

pub fn fmt_point(pt: &[Rat]) -> String {
    let s: Vec<String> = pt.iter().map(|x| x.to_string()).collect();
    format!("({})", s.join(", "))
}

/// Recovers D as the isotropic part of ker φ, with [D, D] = ker φ.
pub fn recover_distribution(geo: &Geometry, phi: &TensorField, samples: &[Vec<Rat>]) -> Result<DistributionFrame, CoreError> {
    let g = &geo.metric;
    for pt in samples {
        let m: Vec<Vec<AlgScalar>> = (0..DIM)
            .map(|a| (0..DIM).map(|b| phi.get(&[a, b]).eval(pt).ok_or_else(|| CoreError::Check("pole".into()))).collect())
            .collect::<Result<_, _>>()?;
        let ker = linalg::nullspace(&m, DIM);
        if ker.len() != 3 {
            return Err(CoreError::Check(format!("kernel of φ has rank {} ≠ 3 at {}", ker.len(), fmt_point(pt))));
        }
        let gm: Vec<Vec<AlgScalar>> = (0..DIM)
            .map(|a| (0..DIM).map(|b| g.entry(a, b).eval(pt).expect("metric")).collect())
            .collect();
        let gram: Vec<Vec<AlgScalar>> = ker
            .iter()
            .map(|u| {
                ker.iter()
                    .map(|v| {
                        let mut acc = AlgScalar::zero();
                        for a in 0..DIM {
                            for b in 0..DIM {
                                acc += &(&(&u[a] * &gm[a][b]) * &v[b]);
                            }
                        }
                        acc
                    })
                    .collect()
            })
            .collect();
        let iso = linalg::nullspace(&gram, 3);
        if iso.len() != 2 {
            return Err(CoreError::Check(format!("isotropic kernel has rank {} ≠ 2 at {}", iso.len(), fmt_point(pt))));
        }
    }
    // Exact frame over the function field.
    let m: Vec<Vec<RatFn>> = (0..DIM).map(|a| (0..DIM).map(|b| phi.get(&[a, b]).clone()).collect()).collect();
    let ker = linalg::nullspace(&m, DIM);
    if ker.len() != 3 {
        return Err(CoreError::Check(format!("kernel of φ has generic rank {} ≠ 3", ker.len())));
    }
    let gram: Vec<Vec<RatFn>> = ker
        .iter()
        .map(|u| {
            ker.iter()
                .map(|v| {
                    let mut acc = RatFn::zero();
                    for a in 0..DIM {
                        for b in 0..DIM {
                            let e = g.entry(a, b);
                            if !e.is_zero() && !u[a].is_zero() && !v[b].is_zero() {
                                acc = acc.add(&u[a].mul(e).mul(&v[b]));
                            }
                        }
                    }
                    acc
                })
                .collect()
        })
        .collect();
    let iso = linalg::nullspace(&gram, 3);
    if iso.len() != 2 {
        return Err(CoreError::Check(format!("isotropic kernel has generic rank {} ≠ 2", iso.len())));
    }
    let frame = iso
        .iter()
        .map(|c| {
            vector(
                (0..DIM)
                    .map(|a| (0..3).fold(RatFn::zero(), |acc, i| acc.add(&c[i].mul(&ker[i][a]))))
                    .collect(),
            )
        })
        .collect();
    let derived = ker.into_iter().map(vector).collect();
    Ok(DistributionFrame { frame, derived, samples: samples.to_vec() })
}

/// [X, Y]^a = X^b ∂_b Y^a − Y^b ∂_b X^a.
pub fn lie_bracket(x: &TensorField, y: &TensorField) -> TensorField {
    vector(
        (0..DIM)
            .map(|a| {
                let mut acc = RatFn::zero();
                for b in 0..DIM {
                    let xb = x.get(&[b]);
                    if !xb.is_zero() {
                        acc = acc.add(&xb.mul(&y.get(&[a]).diff(b)));
                    }
                    let yb = y.get(&[b]);
                    if !yb.is_zero() {
                        acc = acc.sub(&yb.mul(&x.get(&[a]).diff(b)));
                    }
                }
                acc
            })
            .collect(),
    )
}

/// The fields spanning D, [D,D] and [D,[D,D]] for a two-field frame.
fn bracket_levels(frame: &[TensorField]) -> [Vec<TensorField>; 3] {
    let x1 = frame[0].clone();
    let x2 = frame[1].clone();
    let x3 = lie_bracket(&x1, &x2);
    let x4 = lie_bracket(&x1, &x3);
    let x5 = lie_bracket(&x2, &x3);
    let l1 = vec![x1, x2];
    let mut l2 = l1.clone();
    l2.push(x3);
    let mut l3 = l2.clone();
    l3.push(x4);
    l3.push(x5);
    [l1, l2, l3]
}

pub fn growth_vector(frame: &[TensorField], pt: &[Rat]) -> Result<(usize, usize, usize), CoreError> {
    if frame.len() != 2 {
        return Err(CoreError::Input("growth vector needs a two-field frame".into()));
    }
    let [l1, l2, l3] = bracket_levels(frame);
    Ok((
        linalg::rank(&eval_vectors(&l1, pt)?),
        linalg::rank(&eval_vectors(&l2, pt)?),
        linalg::rank(&eval_vectors(&l3, pt)?),
    ))
}

/// Monge frame {∂_q, ∂_x + p∂_y + q∂_p + F∂_z} in coordinates (x, y, p, q, z) = (x1, …, x5).
pub fn distribution_from_ode(f: &RatFn) -> DistributionFrame {
    let mut dq = vec![RatFn::zero(); DIM];
    dq[3] = RatFn::one();
    let xf = vec![RatFn::one(), RatFn::var(2), RatFn::var(3), RatFn::zero(), f.clone()];
    let frame = vec![vector(dq), vector(xf)];
    let derived = {
        let [_, l2, _] = bracket_levels(&frame);
        l2
    };
    DistributionFrame { frame, derived, samples: Vec::new() }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymbolAlgebraReport {
    /// Λ²gr₋₁ → gr₋₂ is an isomorphism.
    pub first_iso: bool,
    /// gr₋₁ ⊗ gr₋₂ → gr₋₃ is an isomorphism.
    pub second_iso: bool,
    /// Rank of the first map.
    pub first_rank: usize,
    pub second_rank: usize,
}

/// Ranks of the bracket-induced maps on the associated graded at a point.
pub fn symbol_algebra_check(frame: &[TensorField], pt: &[Rat]) -> Result<SymbolAlgebraReport, CoreError> {
    let [l1, l2, l3] = bracket_levels(frame);
    let r1 = linalg::rank(&eval_vectors(&l1, pt)?);
    let r2 = linalg::rank(&eval_vectors(&l2, pt)?);
    let r3 = linalg::rank(&eval_vectors(&l3, pt)?);
    if r1 != 2 {
        return Err(CoreError::Check(format!("frame has rank {r1} at {}", fmt_point(pt))));
    }
    let first_rank = r2 - r1;
    let second_rank = r3 - r2;
    // dim gr₋₂ = r2 − r1 and dim gr₋₃ = r3 − r2; the sources have dimensions 1 and 2·(r2 − r1).
    Ok(SymbolAlgebraReport {
        first_iso: first_rank == 1,
        second_iso: first_rank == 1 && second_rank == 2,
        first_rank,
        second_rank,
    })
}
