//! Tractor sections of Λ^{k+1}T in a fixed scale, the tractor connection, the
//! first splitting operators, first BGG operators and the flat-model solver.

use g2t_exact::linalg::{self, SparseRow};
use g2t_exact::{AlgScalar, Mono, Poly, Rat, RatFn};

use crate::error::CoreError;
use crate::kostant::increasing_tuples;
use crate::tensor::{Curvature, Geometry, MetricField, TensorField, Variance, DIM};

const N: i64 = DIM as i64;

/// Slots (ρ | φ, μ | σ) of a section of Λ^{k+1}T in a chosen scale.
#[derive(Clone, Debug, PartialEq)]
pub struct TractorSection {
    pub k: usize,
    /// k-form of weight k−1.
    pub rho: TensorField,
    /// (k+1)-form of weight k+1.
    pub phi: TensorField,
    /// (k−1)-form of weight k−1, absent for k = 0.
    pub mu: Option<TensorField>,
    /// k-form of weight k+1.
    pub sigma: TensorField,
}

fn form(rank: usize, weight: i32) -> TensorField {
    TensorField::zeros(vec![Variance::Co; rank], weight)
}

impl TractorSection {
    pub fn zero(k: usize) -> Self {
        assert!(k <= 2);
        TractorSection {
            k,
            rho: form(k, k as i32 - 1),
            phi: form(k + 1, k as i32 + 1),
            mu: (k > 0).then(|| form(k - 1, k as i32 - 1)),
            sigma: form(k, k as i32 + 1),
        }
    }

    pub fn new(
        k: usize,
        rho: TensorField,
        phi: TensorField,
        mu: Option<TensorField>,
        sigma: TensorField,
    ) -> Result<Self, CoreError> {
        let ok = k <= 2
            && rho.rank() == k
            && phi.rank() == k + 1
            && sigma.rank() == k
            && mu.as_ref().map(|m| m.rank() + 1) == (k > 0).then_some(k);
        if !ok {
            return Err(CoreError::Index(format!("slot arity mismatch for k = {k}")));
        }
        Ok(TractorSection {
            k,
            rho: rho.with_weight(k as i32 - 1),
            phi: phi.with_weight(k as i32 + 1),
            mu: mu.map(|m| m.with_weight(k as i32 - 1)),
            sigma: sigma.with_weight(k as i32 + 1),
        })
    }

    pub fn is_zero(&self) -> bool {
        self.rho.is_zero() && self.phi.is_zero() && self.mu.as_ref().is_none_or(|m| m.is_zero()) && self.sigma.is_zero()
    }

    pub fn slots_antisymmetric(&self) -> bool {
        self.rho.is_antisymmetric()
            && self.phi.is_antisymmetric()
            && self.mu.as_ref().is_none_or(|m| m.is_antisymmetric())
            && self.sigma.is_antisymmetric()
    }

    /// Slot values at a point.
    pub fn eval(&self, pt: &[Rat]) -> Option<TractorSection> {
        let ev = |t: &TensorField| -> Option<TensorField> {
            let v = t.eval(pt)?;
            Some(TensorField::new(t.variance().to_vec(), t.weight(), v.into_iter().map(RatFn::constant).collect()).ok()?)
        };
        Some(TractorSection {
            k: self.k,
            rho: ev(&self.rho)?,
            phi: ev(&self.phi)?,
            mu: match &self.mu {
                Some(m) => Some(ev(m)?),
                None => None,
            },
            sigma: ev(&self.sigma)?,
        })
    }

    /// Independent components on increasing index tuples, slot order ρ, φ, μ, σ.
    pub fn to_vector(&self) -> Vec<RatFn> {
        let mut out = form_components(&self.rho);
        out.extend(form_components(&self.phi));
        if let Some(m) = &self.mu {
            out.extend(form_components(m));
        }
        out.extend(form_components(&self.sigma));
        out
    }

    pub fn from_vector(k: usize, v: &[RatFn]) -> Result<Self, CoreError> {
        let sizes = slot_sizes(k);
        if v.len() != sizes.iter().sum::<usize>() {
            return Err(CoreError::Index("wrong number of tractor components".into()));
        }
        let mut off = 0;
        let mut take = |rank: usize, weight: i32| {
            let n = binom(DIM, rank);
            let t = form_from_components(rank, weight, &v[off..off + n]);
            off += n;
            t
        };
        let rho = take(k, k as i32 - 1);
        let phi = take(k + 1, k as i32 + 1);
        let mu = (k > 0).then(|| take(k - 1, k as i32 - 1));
        let sigma = take(k, k as i32 + 1);
        Ok(TractorSection { k, rho, phi, mu, sigma })
    }
}

pub fn binom(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// Numbers of independent components of the slots ρ, φ, (μ,) σ.
pub fn slot_sizes(k: usize) -> Vec<usize> {
    let mut v = vec![binom(DIM, k), binom(DIM, k + 1)];
    if k > 0 {
        v.push(binom(DIM, k - 1));
    }
    v.push(binom(DIM, k));
    v
}

/// Components of an antisymmetric covariant tensor on increasing index tuples.
pub fn form_components(t: &TensorField) -> Vec<RatFn> {
    increasing_tuples(DIM, t.rank()).iter().map(|i| t.get(i).clone()).collect()
}

/// The antisymmetric covariant tensor with the given components on increasing tuples.
pub fn form_from_components(rank: usize, weight: i32, comps: &[RatFn]) -> TensorField {
    let tuples = increasing_tuples(DIM, rank);
    TensorField::covariant(rank, weight, |idx| {
        let mut s = idx.to_vec();
        let mut sign = 1;
        for i in 0..s.len() {
            for j in 0..s.len() - 1 - i {
                if s[j] > s[j + 1] {
                    s.swap(j, j + 1);
                    sign = -sign;
                }
            }
        }
        if s.windows(2).any(|w| w[0] == w[1]) {
            return RatFn::zero();
        }
        let p = tuples.binary_search(&s).expect("tuple");
        if sign > 0 {
            comps[p].clone()
        } else {
            comps[p].neg()
        }
    })
}

/// (rank T + 1) · X_{c[a_0} T_{a_1 … a_r]} for a symmetric 2-tensor X; slot 0 is c.
fn insert_sym(x: &TensorField, t: &TensorField) -> TensorField {
    let r = t.rank();
    let slots: Vec<usize> = (1..=r + 1).collect();
    x.tensor(t).alt_slots(&slots).scale_rat(r as i64 + 1, 1)
}

/// X_c{}^p T_{p a …} for a covariant 2-tensor X, raising its second slot.
fn contract_first(x: &TensorField, t: &TensorField, g: &MetricField) -> TensorField {
    let up = x.raise(1, g).expect("raise");
    up.tensor(t).contract(1, 2).expect("contract")
}

/// ∇_c applied to a tractor section. Each output slot has the direction c as
/// its first index.
#[derive(Clone, Debug, PartialEq)]
pub struct TractorDerivative {
    pub rho: TensorField,
    pub phi: TensorField,
    pub mu: Option<TensorField>,
    pub sigma: TensorField,
}

impl TractorDerivative {
    pub fn is_zero(&self) -> bool {
        self.rho.is_zero() && self.phi.is_zero() && self.mu.as_ref().is_none_or(|m| m.is_zero()) && self.sigma.is_zero()
    }

    /// The section obtained by fixing the direction index c.
    pub fn direction(&self, c: usize, k: usize) -> TractorSection {
        let fix = |t: &TensorField| {
            let r = t.rank() - 1;
            TensorField::covariant(r, t.weight(), |i| {
                let mut full = vec![c];
                full.extend_from_slice(i);
                t.get(&full).clone()
            })
        };
        TractorSection { k, rho: fix(&self.rho), phi: fix(&self.phi), mu: self.mu.as_ref().map(fix), sigma: fix(&self.sigma) }
    }
}

pub fn tractor_connection(s: &TractorSection, geo: &Geometry, curv: &Curvature) -> TractorDerivative {
    let k = s.k as i64;
    let g = &geo.metric;
    let p = &curv.schouten;
    let mut rho = geo.cov_deriv(&s.rho).sub(&contract_first(p, &s.phi, g).with_weight(s.rho.weight())).expect("shape");
    if let Some(mu) = &s.mu {
        rho = rho.sub(&insert_sym(p, mu).with_weight(s.rho.weight())).expect("shape");
    }
    let phi = geo
        .cov_deriv(&s.phi)
        .add(&insert_sym(&g.g, &s.rho).with_weight(s.phi.weight()))
        .expect("shape")
        .add(&insert_sym(p, &s.sigma).with_weight(s.phi.weight()))
        .expect("shape");
    let mu = s.mu.as_ref().map(|mu| {
        geo.cov_deriv(mu)
            .sub(&contract_first(p, &s.sigma, g).with_weight(mu.weight()))
            .expect("shape")
            .add(&s.rho.clone().with_weight(mu.weight()))
            .expect("shape")
    });
    let mut sigma = geo.cov_deriv(&s.sigma).sub(&s.phi.clone().with_weight(s.sigma.weight())).expect("shape");
    if let Some(m) = &s.mu {
        debug_assert!(k > 0);
        sigma = sigma.add(&insert_sym(&g.g, m).with_weight(s.sigma.weight())).expect("shape");
    }
    TractorDerivative { rho, phi, mu, sigma }
}

/// Tractor metric pairing for standard tractors (k = 0): ρ₁σ₂ + σ₁ρ₂ + g^{ab}φ₁_aφ₂_b.
pub fn tractor_metric(s1: &TractorSection, s2: &TractorSection, g: &MetricField) -> RatFn {
    assert!(s1.k == 0 && s2.k == 0);
    let pp = s1.phi.raise(0, g).expect("raise").tensor(&s2.phi).contract(0, 1).expect("contract");
    s1.rho
        .scalar_value()
        .mul(s2.sigma.scalar_value())
        .add(&s1.sigma.scalar_value().mul(s2.rho.scalar_value()))
        .add(pp.scalar_value())
}

/// Δ = −g^{pq} D_p D_q.
pub fn laplacian(t: &TensorField, geo: &Geometry) -> TensorField {
    let dd = geo.cov_deriv(&geo.cov_deriv(t));
    dd.trace_metric(0, 1, &geo.metric).expect("trace").neg()
}

/// The first splitting operator L₀ on a k-form σ of weight k+1.
pub fn split_l0(k: usize, sigma: &TensorField, geo: &Geometry, curv: &Curvature) -> Result<TractorSection, CoreError> {
    if k > 2 || sigma.rank() != k {
        return Err(CoreError::Index(format!("σ must be a {k}-form")));
    }
    let g = &geo.metric;
    let kk = k as i64;
    let sigma = sigma.clone().with_weight(k as i32 + 1);
    let ds = geo.cov_deriv(&sigma);
    let dds = geo.cov_deriv(&ds);
    let w = k as i32 - 1;
    // −1/(n(k+1)) D^pD_pσ
    let mut rho = dds.trace_metric(0, 1, g)?.scale_rat(-1, N * (kk + 1)).with_weight(w);
    if k > 0 {
        let rest: Vec<usize> = (0..k).collect();
        // k/(n(k+1)) D^pD_{[a1}σ_{|p|…]}
        let t1 = dds.trace_metric(0, 2, g)?.alt_slots(&rest).scale_rat(kk, N * (kk + 1)).with_weight(w);
        // k/(n(n−k+1)) D_{[a1}D^pσ_{|p|…]}
        let t2 = dds.trace_metric(1, 2, g)?.alt_slots(&rest).scale_rat(kk, N * (N - kk + 1)).with_weight(w);
        // 2k/n P^p_{[a1}σ_{|p|…]}
        let t3 = curv.schouten.tensor(&sigma).trace_metric(0, 2, g)?.alt_slots(&rest).scale_rat(2 * kk, N).with_weight(w);
        rho = rho.add(&t1)?.add(&t2)?.add(&t3)?;
    }
    rho = rho.sub(&sigma.mul_fn(&curv.j).scale_rat(1, N).with_weight(w))?;
    let phi = ds.alt().with_weight(k as i32 + 1);
    let mu = if k > 0 {
        Some(ds.trace_metric(0, 1, g)?.scale_rat(-1, N - kk + 1).with_weight(w))
    } else {
        None
    };
    TractorSection::new(k, rho, phi, mu, sigma)
}

/// Trace-free part of a symmetric covariant 2-tensor.
fn trace_free(t: &TensorField, g: &MetricField) -> TensorField {
    let tr = t.trace_metric(0, 1, g).expect("trace");
    let corr = g.g.mul_fn(tr.scalar_value()).scale_rat(1, N).with_weight(t.weight());
    t.sub(&corr).expect("shape")
}

/// The first BGG operator Θ₀ on k-forms of weight k+1 (k ≤ 2).
pub fn bgg_theta0(k: usize, sigma: &TensorField, geo: &Geometry, curv: &Curvature) -> Result<TensorField, CoreError> {
    if k > 2 || sigma.rank() != k {
        return Err(CoreError::Index(format!("σ must be a {k}-form")));
    }
    let g = &geo.metric;
    let ds = geo.cov_deriv(sigma);
    Ok(match k {
        0 => {
            let t = geo.cov_deriv(&ds).add(&curv.schouten.mul_fn(sigma.scalar_value()).with_weight(sigma.weight()))?;
            trace_free(&t, g)
        }
        1 => trace_free(&ds.sym(), g),
        _ => {
            let kk = k as i64;
            let v = ds.trace_metric(0, 1, g)?;
            let corr = insert_sym(&g.g, &v).scale_rat(kk, (N - kk + 1) * kk).with_weight(ds.weight());
            ds.sub(&ds.alt())?.sub(&corr)?
        }
    })
}

/// The three normality equations for a section of Λ³T: the ρ-, φ- and μ-slots of ∇s.
pub fn normality_residuals(s: &TractorSection, geo: &Geometry, curv: &Curvature) -> Result<[TensorField; 3], CoreError> {
    if s.k != 2 {
        return Err(CoreError::Index("normality residuals are defined for tractor 3-forms".into()));
    }
    let d = tractor_connection(s, geo, curv);
    Ok([d.rho, d.phi, d.mu.expect("μ slot")])
}

/// φ∧φ∧μ and φ∧μ∧ρ for the slots of a tractor 3-form.
#[derive(Clone, Debug, PartialEq)]
pub struct WedgeIdentities {
    pub a2: TensorField,
    pub a1: TensorField,
}

/// Evaluates the two 5-forms controlling the values of H(Φ) on τ₊, with φ the
/// σ-slot 2-form, μ the μ-slot and ρ the ρ-slot.
pub fn wedge_identities(phi: &TensorField, mu: &TensorField, rho: &TensorField) -> WedgeIdentities {
    let a2 = phi.wedge(phi).wedge(mu);
    let a1 = phi.wedge(mu).wedge(rho);
    WedgeIdentities { a2, a1 }
}

/// Constant matrices A_c with ∇_c s = ∂_c s + A_c s on the flat chart, acting on
/// the component vectors of `TractorSection::to_vector`.
fn flat_connection_matrices(k: usize) -> Vec<Vec<Vec<AlgScalar>>> {
    let geo = Geometry::flat();
    let curv = geo.curvature();
    let n: usize = slot_sizes(k).iter().sum();
    let mut a = vec![vec![vec![AlgScalar::zero(); n]; n]; DIM];
    for col in 0..n {
        let mut v = vec![RatFn::zero(); n];
        v[col] = RatFn::one();
        let s = TractorSection::from_vector(k, &v).expect("shape");
        let d = tractor_connection(&s, &geo, &curv);
        for (c, ac) in a.iter_mut().enumerate() {
            let out = d.direction(c, k).to_vector();
            for (row, x) in out.iter().enumerate() {
                ac[row][col] = x.constant_value().unwrap_or_default();
            }
        }
    }
    a
}

/// Space of polynomial parallel sections of Λ^{k+1}T on the flat model.
#[derive(Clone, Debug)]
pub struct FlatParallelSpace {
    pub k: usize,
    pub degree: u32,
    pub basis: Vec<TractorSection>,
    /// Values of the basis sections at the origin (component vectors).
    origin_values: Vec<Vec<AlgScalar>>,
}

impl FlatParallelSpace {
    /// Solves ∇s = 0 with a polynomial ansatz of the given degree.
    pub fn solve(k: usize, degree: u32) -> Result<Self, CoreError> {
        if k > 2 {
            return Err(CoreError::Index("k must be 0, 1 or 2".into()));
        }
        let a = flat_connection_matrices(k);
        let n = a[0].len();
        let monos = Mono::all_up_to(degree);
        let nm = monos.len();
        let positions: std::collections::HashMap<Mono, usize> = monos.iter().enumerate().map(|(i, &m)| (m, i)).collect();
        let mono_index = |m: Mono| positions.get(&m).copied();
        // Unknown (j, m) ↦ j·nm + position of m.
        let mut rows: Vec<SparseRow<AlgScalar>> = Vec::new();
        for (c, ac) in a.iter().enumerate() {
            for j in 0..n {
                for (mi, &m) in monos.iter().enumerate() {
                    let mut row: Vec<(usize, AlgScalar)> = Vec::new();
                    let up = m.mul(Mono::var(c));
                    if let Some(ui) = mono_index(up) {
                        row.push((j * nm + ui, AlgScalar::from_int(m.exp(c) as i64 + 1)));
                    }
                    for (i, x) in ac[j].iter().enumerate() {
                        if !x.is_zero() {
                            row.push((i * nm + mi, x.clone()));
                        }
                    }
                    if !row.is_empty() {
                        row.sort_by_key(|t| t.0);
                        rows.push(row);
                    }
                }
            }
        }
        let null = linalg::sparse_nullspace(rows, n * nm);
        let origin = mono_index(Mono::ONE).expect("constant monomial");
        let mut basis = Vec::with_capacity(null.len());
        let mut origin_values = Vec::with_capacity(null.len());
        for v in &null {
            let comps: Vec<RatFn> = (0..n)
                .map(|j| {
                    let terms = monos
                        .iter()
                        .enumerate()
                        .filter(|(mi, _)| !v[j * nm + mi].is_zero())
                        .map(|(mi, &m)| (m, v[j * nm + mi].clone()))
                        .collect();
                    RatFn::from_poly(Poly::from_terms(terms))
                })
                .collect();
            basis.push(TractorSection::from_vector(k, &comps)?);
            origin_values.push((0..n).map(|j| v[j * nm + origin].clone()).collect());
        }
        Ok(FlatParallelSpace { k, degree, basis, origin_values })
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Rank of the evaluation-at-origin map; equal to `dim` when a parallel
    /// section is determined by its origin value.
    pub fn origin_rank(&self) -> usize {
        linalg::rank(&self.origin_values)
    }

    /// The parallel section with the given slot values at the origin.
    pub fn through(&self, initial: &TractorSection) -> Result<TractorSection, CoreError> {
        if initial.k != self.k {
            return Err(CoreError::Index("initial value has the wrong exterior degree".into()));
        }
        let target: Vec<AlgScalar> = initial
            .to_vector()
            .iter()
            .map(|c| c.eval(&[Rat::ZERO; DIM]).ok_or_else(|| CoreError::Input("initial slot has a pole at the origin".into())))
            .collect::<Result<_, _>>()?;
        let coeffs = linalg::coordinates(&self.origin_values, &target)
            .ok_or_else(|| CoreError::Check("inconsistent system for the initial value".into()))?;
        let n: usize = slot_sizes(self.k).iter().sum();
        let mut comps = vec![RatFn::zero(); n];
        for (b, c) in self.basis.iter().zip(&coeffs) {
            if c.is_zero() {
                continue;
            }
            for (slot, x) in comps.iter_mut().zip(b.to_vector()) {
                *slot = slot.add(&x.scale(c));
            }
        }
        TractorSection::from_vector(self.k, &comps)
    }
}

/// Convenience wrapper: the flat parallel section through the given origin slots.
pub fn flat_parallel_solve(initial: &TractorSection, degree: u32) -> Result<TractorSection, CoreError> {
    FlatParallelSpace::solve(initial.k, degree)?.through(initial)
}

/// Reads the slots of a constant tractor 3-form from a 3-form on R^7, with
/// e₁ ↦ τ₊, e₇ ↦ τ₋ and e_{1+a} ↦ dx^a. The slot formulas of
/// `tractor_connection` are the Leibniz rule for τ₋∧σ + φ + τ₋∧τ₊∧μ + τ₊∧ρ,
/// so μ is read from the (e₇, e₁) components.
pub fn slots_from_threeform(psi: &crate::lie::ThreeForm7) -> TractorSection {
    let c = |i: usize, j: usize, l: usize| RatFn::constant(psi.get(i, j, l).clone());
    let rho = TensorField::covariant(2, 1, |i| c(0, i[0] + 1, i[1] + 1));
    let phi = TensorField::covariant(3, 3, |i| c(i[0] + 1, i[1] + 1, i[2] + 1));
    let mu = TensorField::covariant(1, 1, |i| c(6, 0, i[0] + 1));
    let sigma = TensorField::covariant(2, 3, |i| c(6, i[0] + 1, i[1] + 1));
    TractorSection { k: 2, rho, phi, mu: Some(mu), sigma }
}
