//! Coordinate tensor calculus over rational functions on a 5-dimensional chart.

use std::fmt;

use g2t_exact::linalg;
use g2t_exact::{AlgScalar, Poly, Rat, RatFn};

use crate::error::CoreError;

pub const DIM: usize = 5;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Variance {
    Co,
    Contra,
}

/// Dense tensor field with index variances and a conformal weight tag.
#[derive(Clone, PartialEq)]
pub struct TensorField {
    variance: Vec<Variance>,
    weight: i32,
    comps: Vec<RatFn>,
}

/// Iterator over all multi-indices of a given rank, last slot fastest.
pub fn multi_indices(rank: usize) -> impl Iterator<Item = Vec<usize>> {
    (0..DIM.pow(rank as u32)).map(move |f| unflatten(f, rank))
}

pub fn flatten(idx: &[usize]) -> usize {
    idx.iter().fold(0, |acc, &i| acc * DIM + i)
}

pub fn unflatten(mut f: usize, rank: usize) -> Vec<usize> {
    let mut idx = vec![0; rank];
    for k in (0..rank).rev() {
        idx[k] = f % DIM;
        f /= DIM;
    }
    idx
}

/// All permutations of `0..n` with their signs.
pub fn permutations(n: usize) -> Vec<(Vec<usize>, i64)> {
    fn rec(cur: &mut Vec<usize>, used: &mut Vec<bool>, n: usize, out: &mut Vec<Vec<usize>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for i in 0..n {
            if !used[i] {
                used[i] = true;
                cur.push(i);
                rec(cur, used, n, out);
                cur.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; n], n, &mut out);
    out.into_iter()
        .map(|p| {
            let mut inv = 0;
            for i in 0..n {
                for j in i + 1..n {
                    if p[i] > p[j] {
                        inv += 1;
                    }
                }
            }
            (p, if inv % 2 == 0 { 1 } else { -1 })
        })
        .collect()
}

fn factorial(n: usize) -> i64 {
    (1..=n as i64).product()
}

impl TensorField {
    pub fn new(variance: Vec<Variance>, weight: i32, comps: Vec<RatFn>) -> Result<Self, CoreError> {
        if comps.len() != DIM.pow(variance.len() as u32) {
            return Err(CoreError::Index(format!(
                "expected {} components for rank {}, got {}",
                DIM.pow(variance.len() as u32),
                variance.len(),
                comps.len()
            )));
        }
        Ok(TensorField { variance, weight, comps })
    }

    pub fn zeros(variance: Vec<Variance>, weight: i32) -> Self {
        let n = DIM.pow(variance.len() as u32);
        TensorField { variance, weight, comps: vec![RatFn::zero(); n] }
    }

    pub fn from_fn(variance: Vec<Variance>, weight: i32, f: impl Fn(&[usize]) -> RatFn) -> Self {
        let rank = variance.len();
        let comps = multi_indices(rank).map(|i| f(&i)).collect();
        TensorField { variance, weight, comps }
    }

    pub fn scalar(f: RatFn, weight: i32) -> Self {
        TensorField { variance: vec![], weight, comps: vec![f] }
    }

    /// A covariant tensor of the given rank.
    pub fn covariant(rank: usize, weight: i32, f: impl Fn(&[usize]) -> RatFn) -> Self {
        Self::from_fn(vec![Variance::Co; rank], weight, f)
    }

    pub fn contravariant(rank: usize, weight: i32, f: impl Fn(&[usize]) -> RatFn) -> Self {
        Self::from_fn(vec![Variance::Contra; rank], weight, f)
    }

    pub fn rank(&self) -> usize {
        self.variance.len()
    }

    pub fn variance(&self) -> &[Variance] {
        &self.variance
    }

    pub fn weight(&self) -> i32 {
        self.weight
    }

    pub fn with_weight(mut self, w: i32) -> Self {
        self.weight = w;
        self
    }

    pub fn comps(&self) -> &[RatFn] {
        &self.comps
    }

    pub fn get(&self, idx: &[usize]) -> &RatFn {
        &self.comps[flatten(idx)]
    }

    pub fn set(&mut self, idx: &[usize], v: RatFn) {
        let f = flatten(idx);
        self.comps[f] = v;
    }

    pub fn scalar_value(&self) -> &RatFn {
        assert_eq!(self.rank(), 0);
        &self.comps[0]
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(|c| c.is_zero())
    }

    fn same_shape(&self, o: &Self) -> Result<(), CoreError> {
        if self.variance != o.variance {
            return Err(CoreError::Index("variance mismatch".into()));
        }
        Ok(())
    }

    pub fn add(&self, o: &Self) -> Result<Self, CoreError> {
        self.same_shape(o)?;
        let comps = self.comps.iter().zip(&o.comps).map(|(a, b)| a.add(b)).collect();
        Ok(TensorField { variance: self.variance.clone(), weight: self.weight, comps })
    }

    pub fn sub(&self, o: &Self) -> Result<Self, CoreError> {
        self.same_shape(o)?;
        let comps = self.comps.iter().zip(&o.comps).map(|(a, b)| a.sub(b)).collect();
        Ok(TensorField { variance: self.variance.clone(), weight: self.weight, comps })
    }

    pub fn neg(&self) -> Self {
        self.map(|c| c.neg())
    }

    pub fn scale(&self, s: &AlgScalar) -> Self {
        self.map(|c| c.scale(s))
    }

    pub fn scale_rat(&self, n: i64, d: i64) -> Self {
        self.scale(&AlgScalar::frac(n, d))
    }

    pub fn mul_fn(&self, f: &RatFn) -> Self {
        self.map(|c| c.mul(f))
    }

    pub fn map(&self, f: impl Fn(&RatFn) -> RatFn) -> Self {
        TensorField { variance: self.variance.clone(), weight: self.weight, comps: self.comps.iter().map(f).collect() }
    }

    /// Tensor product; slots of `self` come first.
    pub fn tensor(&self, o: &Self) -> Self {
        let mut variance = self.variance.clone();
        variance.extend(&o.variance);
        let n = o.comps.len();
        let mut comps = Vec::with_capacity(self.comps.len() * n);
        for a in &self.comps {
            for b in &o.comps {
                comps.push(a.mul(b));
            }
        }
        TensorField { variance, weight: self.weight + o.weight, comps }
    }

    /// New slot k is old slot `perm[k]`.
    pub fn permute(&self, perm: &[usize]) -> Self {
        assert_eq!(perm.len(), self.rank());
        let variance = perm.iter().map(|&p| self.variance[p]).collect();
        let rank = self.rank();
        let mut old = vec![0; rank];
        let comps = multi_indices(rank)
            .map(|idx| {
                for (k, &p) in perm.iter().enumerate() {
                    old[p] = idx[k];
                }
                self.get(&old).clone()
            })
            .collect();
        TensorField { variance, weight: self.weight, comps }
    }

    /// Contraction of a covariant slot with a contravariant slot.
    pub fn contract(&self, i: usize, j: usize) -> Result<Self, CoreError> {
        if i == j || i >= self.rank() || j >= self.rank() {
            return Err(CoreError::Index(format!("invalid trace pair ({i}, {j})")));
        }
        if self.variance[i] == self.variance[j] {
            return Err(CoreError::Index("trace needs one upper and one lower slot".into()));
        }
        let keep: Vec<usize> = (0..self.rank()).filter(|&k| k != i && k != j).collect();
        let variance = keep.iter().map(|&k| self.variance[k]).collect();
        let mut full = vec![0; self.rank()];
        let comps = multi_indices(keep.len())
            .map(|idx| {
                for (s, &k) in keep.iter().enumerate() {
                    full[k] = idx[s];
                }
                let mut acc = RatFn::zero();
                for e in 0..DIM {
                    full[i] = e;
                    full[j] = e;
                    let c = self.get(&full);
                    if !c.is_zero() {
                        acc = acc.add(c);
                    }
                }
                acc
            })
            .collect();
        Ok(TensorField { variance, weight: self.weight, comps })
    }

    /// Metric trace over two slots of equal variance (weight shifts by ∓2).
    pub fn trace_metric(&self, i: usize, j: usize, g: &MetricField) -> Result<Self, CoreError> {
        if i == j || i >= self.rank() || j >= self.rank() || self.variance[i] != self.variance[j] {
            return Err(CoreError::Index(format!("invalid metric trace pair ({i}, {j})")));
        }
        let raised = match self.variance[i] {
            Variance::Co => self.raise(i, g)?,
            Variance::Contra => self.lower(i, g)?,
        };
        raised.contract(i, j)
    }

    /// Raise a covariant slot with g⁻¹; the weight drops by 2.
    pub fn raise(&self, i: usize, g: &MetricField) -> Result<Self, CoreError> {
        self.move_index(i, Variance::Co, &g.inv, -2)
    }

    /// Lower a contravariant slot with g; the weight rises by 2.
    pub fn lower(&self, i: usize, g: &MetricField) -> Result<Self, CoreError> {
        self.move_index(i, Variance::Contra, &g.g, 2)
    }

    fn move_index(&self, i: usize, from: Variance, m: &TensorField, dw: i32) -> Result<Self, CoreError> {
        if i >= self.rank() || self.variance[i] != from {
            return Err(CoreError::Index(format!("slot {i} has the wrong variance")));
        }
        let mut variance = self.variance.clone();
        variance[i] = match from {
            Variance::Co => Variance::Contra,
            Variance::Contra => Variance::Co,
        };
        let mut src = vec![0; self.rank()];
        let comps = multi_indices(self.rank())
            .map(|idx| {
                src.copy_from_slice(&idx);
                let mut acc = RatFn::zero();
                for e in 0..DIM {
                    let me = m.get(&[idx[i], e]);
                    if me.is_zero() {
                        continue;
                    }
                    src[i] = e;
                    let c = self.get(&src);
                    if !c.is_zero() {
                        acc = acc.add(&me.mul(c));
                    }
                }
                acc
            })
            .collect();
        Ok(TensorField { variance, weight: self.weight + dw, comps })
    }

    /// Normalized alternation over the listed slots (which must share variance).
    pub fn alt_slots(&self, slots: &[usize]) -> Self {
        self.symmetrize(slots, true)
    }

    pub fn sym_slots(&self, slots: &[usize]) -> Self {
        self.symmetrize(slots, false)
    }

    fn symmetrize(&self, slots: &[usize], alternate: bool) -> Self {
        let perms = permutations(slots.len());
        let norm = AlgScalar::frac(1, factorial(slots.len()));
        let mut src = vec![0; self.rank()];
        let comps = multi_indices(self.rank())
            .map(|idx| {
                let mut acc = RatFn::zero();
                for (p, s) in &perms {
                    src.copy_from_slice(&idx);
                    for (k, &slot) in slots.iter().enumerate() {
                        src[slot] = idx[slots[p[k]]];
                    }
                    let c = self.get(&src);
                    if c.is_zero() {
                        continue;
                    }
                    if alternate && *s < 0 {
                        acc = acc.sub(c);
                    } else {
                        acc = acc.add(c);
                    }
                }
                acc.scale(&norm)
            })
            .collect();
        TensorField { variance: self.variance.clone(), weight: self.weight, comps }
    }

    /// Full alternation.
    pub fn alt(&self) -> Self {
        let all: Vec<usize> = (0..self.rank()).collect();
        self.alt_slots(&all)
    }

    pub fn sym(&self) -> Self {
        let all: Vec<usize> = (0..self.rank()).collect();
        self.sym_slots(&all)
    }

    /// Wedge product of covariant forms: ((k+l)!/(k! l!)) Alt(a ⊗ b).
    pub fn wedge(&self, o: &Self) -> Self {
        let (k, l) = (self.rank(), o.rank());
        let c = AlgScalar::frac(factorial(k + l), factorial(k) * factorial(l));
        self.tensor(o).alt().scale(&c)
    }

    pub fn is_antisymmetric(&self) -> bool {
        self.alt() == *self
    }

    pub fn diff(&self, var: usize) -> Self {
        self.map(|c| c.diff(var))
    }

    /// Values at a point, `None` if a denominator vanishes.
    pub fn eval(&self, pt: &[Rat]) -> Option<Vec<AlgScalar>> {
        self.comps.iter().map(|c| c.eval(pt)).collect()
    }

    /// Contraction of slot 0 with a vector field: X^a T_{a…}.
    pub fn insert_vector(&self, x: &TensorField) -> Result<Self, CoreError> {
        x.tensor(self).contract(0, 1)
    }
}

impl fmt::Debug for TensorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "TensorField {:?} weight {}", self.variance, self.weight)?;
        for (i, c) in self.comps.iter().enumerate() {
            if !c.is_zero() {
                writeln!(f, "  {:?}: {}", unflatten(i, self.rank()), c)?;
            }
        }
        Ok(())
    }
}

/// A pseudo-Riemannian metric on the chart with its inverse and determinant.
#[derive(Clone, Debug)]
pub struct MetricField {
    pub g: TensorField,
    pub inv: TensorField,
    pub det: RatFn,
}

impl MetricField {
    pub fn new(entries: Vec<Vec<RatFn>>) -> Result<Self, CoreError> {
        if entries.len() != DIM || entries.iter().any(|r| r.len() != DIM) {
            return Err(CoreError::Index("metric must be 5×5".into()));
        }
        for i in 0..DIM {
            for j in 0..i {
                if entries[i][j] != entries[j][i] {
                    return Err(CoreError::Input(format!("metric is not symmetric at ({}, {})", i + 1, j + 1)));
                }
            }
        }
        let det = linalg::determinant(&entries);
        if det.is_zero() {
            return Err(CoreError::DegenerateMetric("determinant vanishes identically".into()));
        }
        let inv_m = linalg::inverse(&entries).ok_or_else(|| CoreError::DegenerateMetric("not invertible".into()))?;
        let g = TensorField::covariant(2, 2, |i| entries[i[0]][i[1]].clone());
        let inv = TensorField::contravariant(2, -2, |i| inv_m[i[0]][i[1]].clone());
        Ok(MetricField { g, inv, det })
    }

    /// The flat signature (2,3) metric of the model.
    pub fn flat() -> Self {
        let m = crate::lie::m23();
        Self::new(m.iter().map(|r| r.iter().map(|x| RatFn::from_rat(x.clone())).collect()).collect())
            .expect("flat metric")
    }

    pub fn entry(&self, i: usize, j: usize) -> &RatFn {
        self.g.get(&[i, j])
    }

    pub fn inv_entry(&self, i: usize, j: usize) -> &RatFn {
        self.inv.get(&[i, j])
    }

    pub fn is_constant(&self) -> bool {
        self.g.comps().iter().all(|c| c.constant_value().is_some() || c.is_zero())
    }

    /// Numbers of positive and negative eigenvalues at a point, by symmetric
    /// Gaussian elimination.
    pub fn signature_at(&self, pt: &[Rat]) -> Result<(usize, usize), CoreError> {
        let mut a: Vec<Vec<AlgScalar>> = (0..DIM)
            .map(|i| {
                (0..DIM)
                    .map(|j| self.entry(i, j).eval(pt).ok_or_else(|| CoreError::DegenerateMetric("pole at base point".into())))
                    .collect::<Result<_, _>>()
            })
            .collect::<Result<_, _>>()?;
        let (mut pos, mut neg) = (0, 0);
        let mut n = DIM;
        while n > 0 {
            // Find a nonzero diagonal pivot, or create one from an off-diagonal entry.
            let piv = (0..n).find(|&i| !a[i][i].is_zero());
            let p = match piv {
                Some(p) => p,
                None => {
                    let Some((i, j)) = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).find(|&(i, j)| !a[i][j].is_zero()) else {
                        return Err(CoreError::DegenerateMetric("metric degenerate at base point".into()));
                    };
                    // Replace row/col i by row/col i + j.
                    for k in 0..n {
                        let v = &a[i][k] + &a[j][k];
                        a[i][k] = v;
                    }
                    for k in 0..n {
                        let v = &a[k][i] + &a[k][j];
                        a[k][i] = v;
                    }
                    i
                }
            };
            let d = a[p][p].clone();
            if d.signum() > 0 {
                pos += 1;
            } else {
                neg += 1;
            }
            let dinv = d.inv().map_err(CoreError::Exact)?;
            let mut b = Vec::with_capacity(n - 1);
            for i in (0..n).filter(|&i| i != p) {
                let mut row = Vec::with_capacity(n - 1);
                for j in (0..n).filter(|&j| j != p) {
                    row.push(&a[i][j] - &(&(&a[i][p] * &a[p][j]) * &dinv));
                }
                b.push(row);
            }
            a = b;
            n -= 1;
        }
        Ok((pos, neg))
    }

    /// ĝ = Ω² g and Υ_a = ∂_aΩ / Ω.
    pub fn conformal_rescale(&self, omega: &RatFn) -> Result<(MetricField, TensorField), CoreError> {
        if omega.is_zero() {
            return Err(CoreError::Input("conformal factor vanishes identically".into()));
        }
        let o2 = omega.mul(omega);
        let entries = (0..DIM).map(|i| (0..DIM).map(|j| self.entry(i, j).mul(&o2)).collect()).collect();
        let ghat = MetricField::new(entries)?;
        let oinv = omega.inv()?;
        let ups = TensorField::covariant(1, 0, |i| omega.diff(i[0]).mul(&oinv));
        Ok((ghat, ups))
    }
}

/// Standard tractor slots transformed under ĝ = Ω²g:
/// (ρ − Υ^aφ_a − ½σΥ^bΥ_b, φ_a + σΥ_a, σ).
pub fn rescale_standard_slots(
    rho: &RatFn,
    phi: &TensorField,
    sigma: &RatFn,
    ups: &TensorField,
    g: &MetricField,
) -> Result<(RatFn, TensorField, RatFn), CoreError> {
    let ups_up = ups.raise(0, g)?;
    let up_phi = ups_up.tensor(phi).contract(0, 1)?;
    let up_up = ups_up.tensor(ups).contract(0, 1)?;
    let rho_hat = rho.sub(up_phi.scalar_value()).sub(&sigma.mul(up_up.scalar_value()).scale(&AlgScalar::frac(1, 2)));
    let phi_hat = phi.add(&ups.mul_fn(sigma).with_weight(phi.weight()))?;
    Ok((rho_hat, phi_hat, sigma.clone()))
}

/// Levi-Civita connection and the curvature quantities of a metric.
#[derive(Clone, Debug)]
pub struct Geometry {
    pub metric: MetricField,
    /// Γ^a_{bc} stored at index (a, b, c).
    pub christoffel: TensorField,
    flat: bool,
}

/// Curvature pipeline output.
#[derive(Clone, Debug)]
pub struct Curvature {
    /// R_{ab}{}^c{}_d.
    pub riemann: TensorField,
    /// Ric_{bd} = R_{ab}{}^a{}_d.
    pub ricci: TensorField,
    pub scalar: RatFn,
    pub schouten: TensorField,
    pub j: RatFn,
    /// C_{abcd} with all indices down.
    pub weyl: TensorField,
    /// A_{abc} = D_b P_{ca} − D_c P_{ba}.
    pub cotton: TensorField,
}

impl Geometry {
    pub fn new(metric: MetricField) -> Self {
        let flat = metric.is_constant();
        let christoffel = if flat {
            TensorField::zeros(vec![Variance::Contra, Variance::Co, Variance::Co], 0)
        } else {
            christoffel(&metric)
        };
        Geometry { metric, christoffel, flat }
    }

    pub fn flat() -> Self {
        Self::new(MetricField::flat())
    }

    pub fn is_flat_chart(&self) -> bool {
        self.flat
    }

    pub fn gamma(&self, a: usize, b: usize, c: usize) -> &RatFn {
        self.christoffel.get(&[a, b, c])
    }

    /// Levi-Civita derivative; the new derivative slot comes first.
    pub fn cov_deriv(&self, t: &TensorField) -> TensorField {
        let rank = t.rank();
        let mut variance = vec![Variance::Co];
        variance.extend(t.variance());
        let mut comps = Vec::with_capacity(DIM * t.comps().len());
        let mut src = vec![0; rank];
        for c in 0..DIM {
            for idx in multi_indices(rank) {
                let mut acc = t.get(&idx).diff(c);
                if !self.flat {
                    for s in 0..rank {
                        src.copy_from_slice(&idx);
                        for e in 0..DIM {
                            let (gam, sign) = match t.variance()[s] {
                                Variance::Contra => (self.gamma(idx[s], c, e), 1),
                                Variance::Co => (self.gamma(e, c, idx[s]), -1),
                            };
                            if gam.is_zero() {
                                continue;
                            }
                            src[s] = e;
                            let v = t.get(&src);
                            if v.is_zero() {
                                continue;
                            }
                            let term = gam.mul(v);
                            acc = if sign > 0 { acc.add(&term) } else { acc.sub(&term) };
                        }
                    }
                }
                comps.push(acc);
            }
        }
        TensorField::new(variance, t.weight(), comps).expect("shape")
    }

    pub fn curvature(&self) -> Curvature {
        let g = &self.metric;
        let ghat = |ch: &TensorField, a: usize, b: usize, c: usize| ch.get(&[a, b, c]).clone();
        let riemann = if self.flat {
            TensorField::zeros(vec![Variance::Co, Variance::Co, Variance::Contra, Variance::Co], 0)
        } else {
            let ch = &self.christoffel;
            let d: Vec<TensorField> = (0..DIM).map(|v| ch.diff(v)).collect();
            TensorField::from_fn(vec![Variance::Co, Variance::Co, Variance::Contra, Variance::Co], 0, |i| {
                let (a, b, c, dd) = (i[0], i[1], i[2], i[3]);
                let mut acc = d[a].get(&[c, b, dd]).sub(d[b].get(&[c, a, dd]));
                for e in 0..DIM {
                    let t1 = ghat(ch, c, a, e).mul(&ghat(ch, e, b, dd));
                    let t2 = ghat(ch, c, b, e).mul(&ghat(ch, e, a, dd));
                    acc = acc.add(&t1).sub(&t2);
                }
                acc
            })
        };
        let ricci = riemann.contract(0, 2).expect("trace");
        let scalar = ricci.trace_metric(0, 1, g).expect("trace").scalar_value().clone();
        // P = (Ric − Sc/(2(n−1)) g)/(n−2) with n = 5.
        let schouten = ricci
            .sub(&g.g.mul_fn(&scalar.scale(&AlgScalar::frac(1, 8))).with_weight(0))
            .expect("shape")
            .scale_rat(1, 3);
        let j = schouten.trace_metric(0, 1, g).expect("trace").scalar_value().clone();
        let r_low = riemann.lower(2, g).expect("lower").with_weight(0);
        let gg = &g.g;
        let weyl = TensorField::covariant(4, 0, |i| {
            let (a, b, c, d) = (i[0], i[1], i[2], i[3]);
            let kul = gg
                .get(&[a, c])
                .mul(schouten.get(&[b, d]))
                .sub(&gg.get(&[b, c]).mul(schouten.get(&[a, d])))
                .add(&gg.get(&[b, d]).mul(schouten.get(&[a, c])))
                .sub(&gg.get(&[a, d]).mul(schouten.get(&[b, c])));
            r_low.get(i).sub(&kul)
        });
        let dp = self.cov_deriv(&schouten);
        let cotton = TensorField::covariant(3, 0, |i| {
            let (a, b, c) = (i[0], i[1], i[2]);
            dp.get(&[b, c, a]).sub(dp.get(&[c, b, a]))
        });
        Curvature { riemann, ricci, scalar, schouten, j, weyl, cotton }
    }

    /// Metric-compatibility residual Dg.
    pub fn metric_compatibility(&self) -> TensorField {
        self.cov_deriv(&self.metric.g)
    }
}

/// Γ^a_{bc} = ½ g^{ad}(∂_b g_{dc} + ∂_c g_{db} − ∂_d g_{bc}).
pub fn christoffel(g: &MetricField) -> TensorField {
    let dg: Vec<TensorField> = (0..DIM).map(|v| g.g.diff(v)).collect();
    let half = AlgScalar::frac(1, 2);
    // Γ_{dbc} first.
    let low = TensorField::covariant(3, 0, |i| {
        let (d, b, c) = (i[0], i[1], i[2]);
        dg[b].get(&[d, c]).add(dg[c].get(&[d, b])).sub(dg[d].get(&[b, c])).scale(&half)
    });
    TensorField::from_fn(vec![Variance::Contra, Variance::Co, Variance::Co], 0, |i| {
        let (a, b, c) = (i[0], i[1], i[2]);
        let mut acc = RatFn::zero();
        for d in 0..DIM {
            let gi = g.inv_entry(a, d);
            if gi.is_zero() {
                continue;
            }
            let l = low.get(&[d, b, c]);
            if !l.is_zero() {
                acc = acc.add(&gi.mul(l));
            }
        }
        acc
    })
}

/// Checks performed on the curvature of a metric.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurvatureIdentities {
    pub bianchi: bool,
    pub riemann_skew: bool,
    pub weyl_trace_free: bool,
    /// D^p C_{pabc} = (n−3) A_{abc} = 2 A_{abc}.
    pub div_weyl_2a: bool,
    /// D^p C_{pabc} = (n−2) A_{abc} = 3 A_{abc}.
    pub div_weyl_3a: bool,
    pub cotton_zero: bool,
}

impl CurvatureIdentities {
    pub fn compute(geo: &Geometry, curv: &Curvature) -> Self {
        let g = &geo.metric;
        let r_low = curv.riemann.lower(2, g).expect("lower");
        // R_{[abc]d} with R_{abcd} = R_{ab}{}^e{}_d g_{ec} reordered as (a,b,c,d).
        let bianchi = TensorField::covariant(4, 0, |i| {
            let (a, b, c, d) = (i[0], i[1], i[2], i[3]);
            // First Bianchi: R_{ab}{}^c{}_d + R_{bd}{}^c{}_a + R_{da}{}^c{}_b = 0.
            r_low.get(&[a, b, c, d]).add(r_low.get(&[b, d, c, a])).add(r_low.get(&[d, a, c, b]))
        })
        .is_zero();
        let riemann_skew = TensorField::covariant(4, 0, |i| {
            let (a, b, c, d) = (i[0], i[1], i[2], i[3]);
            r_low.get(&[a, b, c, d]).add(r_low.get(&[b, a, c, d]))
        })
        .is_zero()
            && TensorField::covariant(4, 0, |i| {
                let (a, b, c, d) = (i[0], i[1], i[2], i[3]);
                r_low.get(&[a, b, c, d]).add(r_low.get(&[a, b, d, c]))
            })
            .is_zero();
        let w = &curv.weyl;
        let weyl_trace_free = (0..4).all(|i| (i + 1..4).all(|j| w.trace_metric(i, j, g).expect("trace").is_zero()));
        let dc = geo.cov_deriv(w);
        let div = dc.trace_metric(0, 1, g).expect("trace");
        let a2 = curv.cotton.scale_rat(2, 1);
        let a3 = curv.cotton.scale_rat(3, 1);
        let div_weyl_2a = div.comps() == a2.comps();
        let div_weyl_3a = div.comps() == a3.comps();
        CurvatureIdentities { bianchi, riemann_skew, weyl_trace_free, div_weyl_2a, div_weyl_3a, cotton_zero: curv.cotton.is_zero() }
    }
}

/// g = (I + N)ᵀ M₂,₃ (I + N) for N supported on rows x4, x5 and columns x1, x2, x3.
/// Such metrics have constant determinant −1 and polynomial inverse.
pub fn unimodular_perturbation(n: &[[Poly; 3]; 2]) -> Result<MetricField, CoreError> {
    let m = crate::lie::m23();
    let mut t: Vec<Vec<RatFn>> = (0..DIM)
        .map(|i| (0..DIM).map(|j| if i == j { RatFn::one() } else { RatFn::zero() }).collect())
        .collect();
    for r in 0..2 {
        for c in 0..3 {
            t[3 + r][c] = RatFn::from_poly(n[r][c].clone());
        }
    }
    let entries = (0..DIM)
        .map(|i| {
            (0..DIM)
                .map(|j| {
                    let mut acc = RatFn::zero();
                    for a in 0..DIM {
                        for b in 0..DIM {
                            if m[a][b].is_zero() || t[a][i].is_zero() || t[b][j].is_zero() {
                                continue;
                            }
                            acc = acc.add(&t[a][i].mul(&t[b][j]).scale(&AlgScalar::from_rat(m[a][b].clone())));
                        }
                    }
                    acc
                })
                .collect()
        })
        .collect();
    MetricField::new(entries)
}
