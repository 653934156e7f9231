//! so(3,4) realized as so(h), the split g2 subalgebra, the 3-form Φ that
//! cuts it out, the bilinear form H(Φ), the |3|-grading of g2 and the
//! equivariant splitting so(h) = g2 ⊕ R^7.

use std::fmt;

use g2t_exact::linalg::{self, Echelon};
use g2t_exact::{AlgScalar, Rat};

use crate::error::CoreError;

pub const N7: usize = 7;

fn q(n: i64, d: i64) -> AlgScalar {
    AlgScalar::frac(n, d)
}

/// A 7×7 matrix over Q(√2, √3).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LieElt {
    m: Vec<AlgScalar>,
}

impl LieElt {
    pub fn zero() -> Self {
        LieElt { m: vec![AlgScalar::zero(); N7 * N7] }
    }

    pub fn identity() -> Self {
        Self::from_fn(|i, j| if i == j { AlgScalar::one() } else { AlgScalar::zero() })
    }

    pub fn from_fn(f: impl Fn(usize, usize) -> AlgScalar) -> Self {
        let mut m = Vec::with_capacity(N7 * N7);
        for i in 0..N7 {
            for j in 0..N7 {
                m.push(f(i, j));
            }
        }
        LieElt { m }
    }

    pub fn from_entries(m: Vec<AlgScalar>) -> Self {
        assert_eq!(m.len(), N7 * N7);
        LieElt { m }
    }

    pub fn unit(i: usize, j: usize) -> Self {
        let mut e = Self::zero();
        e.set(i, j, AlgScalar::one());
        e
    }

    pub fn get(&self, i: usize, j: usize) -> &AlgScalar {
        &self.m[i * N7 + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: AlgScalar) {
        self.m[i * N7 + j] = v;
    }

    pub fn entries(&self) -> &[AlgScalar] {
        &self.m
    }

    pub fn is_zero(&self) -> bool {
        self.m.iter().all(|x| x.is_zero())
    }

    pub fn add(&self, o: &Self) -> Self {
        LieElt { m: self.m.iter().zip(&o.m).map(|(a, b)| a + b).collect() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        LieElt { m: self.m.iter().zip(&o.m).map(|(a, b)| a - b).collect() }
    }

    pub fn scale(&self, s: &AlgScalar) -> Self {
        LieElt { m: self.m.iter().map(|a| a * s).collect() }
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(|i, j| self.get(j, i).clone())
    }

    pub fn matmul(&self, o: &Self) -> Self {
        let mut out = Self::zero();
        for i in 0..N7 {
            for k in 0..N7 {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..N7 {
                    let b = o.get(k, j);
                    if !b.is_zero() {
                        out.m[i * N7 + j] += &(a * b);
                    }
                }
            }
        }
        out
    }

    pub fn bracket(&self, o: &Self) -> Self {
        self.matmul(o).sub(&o.matmul(self))
    }

    pub fn apply(&self, v: &[AlgScalar]) -> Vec<AlgScalar> {
        (0..N7)
            .map(|i| (0..N7).fold(AlgScalar::zero(), |acc, k| &acc + &(self.get(i, k) * &v[k])))
            .collect()
    }

    pub fn trace(&self) -> AlgScalar {
        (0..N7).fold(AlgScalar::zero(), |acc, i| &acc + self.get(i, i))
    }

    /// Frobenius pairing tr(x yᵀ).
    pub fn frobenius(&self, o: &Self) -> AlgScalar {
        self.m.iter().zip(&o.m).fold(AlgScalar::zero(), |acc, (a, b)| &acc + &(a * b))
    }

    /// Mᵀh + hM = 0.
    pub fn preserves_h(&self) -> bool {
        let h = h_matrix();
        self.transpose().matmul(&h).add(&h.matmul(self)).is_zero()
    }
}

impl fmt::Debug for LieElt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..N7 {
            let row: Vec<String> = (0..N7).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// The signature (2,3) form of the flat model: swaps x1↔x4, x2↔x5 and has −1 at x3.
pub fn m23() -> Vec<Vec<Rat>> {
    let mut m = vec![vec![Rat::ZERO; 5]; 5];
    m[0][3] = Rat::ONE;
    m[3][0] = Rat::ONE;
    m[1][4] = Rat::ONE;
    m[4][1] = Rat::ONE;
    m[2][2] = Rat::from_int(-1);
    m
}

/// The signature (3,4) form h with off-diagonal corner ones and M23 in the middle.
pub fn h_matrix() -> LieElt {
    let m = m23();
    LieElt::from_fn(|i, j| match (i, j) {
        (0, 6) | (6, 0) => AlgScalar::one(),
        (1..=5, 1..=5) => AlgScalar::from_rat(m[i - 1][j - 1].clone()),
        _ => AlgScalar::zero(),
    })
}

/// Standard basis of so(h): the grading element, the ten rotations of M23,
/// and the two five-dimensional abelian pieces.
pub fn so34_basis() -> Vec<LieElt> {
    let m = m23();
    let mut out = Vec::with_capacity(21);
    // X ∈ R^5: column 0 and last row −XᵗM.
    for a in 0..5 {
        let mut e = LieElt::zero();
        e.set(a + 1, 0, AlgScalar::one());
        for b in 0..5 {
            if !m[a][b].is_zero() {
                e.set(6, b + 1, AlgScalar::from_rat(-&m[a][b]));
            }
        }
        out.push(e);
    }
    // α: diag(−1, 0, …, 0, 1).
    let mut e = LieElt::zero();
    e.set(0, 0, q(-1, 1));
    e.set(6, 6, q(1, 1));
    out.push(e);
    // A = M23·(E_ab − E_ba).
    for a in 0..5 {
        for b in a + 1..5 {
            let mut e = LieElt::zero();
            for i in 0..5 {
                // (M S)_{ij} = M_{ia} δ_{bj} − M_{ib} δ_{aj}
                if !m[i][a].is_zero() {
                    e.set(i + 1, b + 1, AlgScalar::from_rat(m[i][a].clone()));
                }
                if !m[i][b].is_zero() {
                    e.set(i + 1, a + 1, AlgScalar::from_rat(-&m[i][b]));
                }
            }
            out.push(e);
        }
    }
    // Z ∈ R^5: last column and first row −ZᵗM.
    for a in 0..5 {
        let mut e = LieElt::zero();
        e.set(a + 1, 6, AlgScalar::one());
        for b in 0..5 {
            if !m[a][b].is_zero() {
                e.set(0, b + 1, AlgScalar::from_rat(-&m[a][b]));
            }
        }
        out.push(e);
    }
    out
}

/// Grade of a basis element of `so34_basis` under the conformal |1|-grading.
pub fn so34_grades() -> Vec<i32> {
    let mut g = vec![-1; 5];
    g.extend(std::iter::repeat(0).take(11));
    g.extend(std::iter::repeat(1).take(5));
    g
}

/// Parameters of the g2 matrix family.
#[derive(Clone, Debug, Default)]
pub struct G2Params {
    pub a: [[AlgScalar; 2]; 2],
    pub x: [AlgScalar; 2],
    pub y: [AlgScalar; 2],
    pub z: [AlgScalar; 2],
    pub w: [AlgScalar; 2],
    pub r: AlgScalar,
    pub s: AlgScalar,
}

/// Row/column ranges of the five blocks (sizes 1, 2, 1, 2, 1).
const BLOCKS: [(usize, usize); 5] = [(0, 1), (1, 3), (3, 4), (4, 6), (6, 7)];

fn block_of(i: usize) -> usize {
    BLOCKS.iter().position(|&(lo, hi)| i >= lo && i < hi).unwrap()
}

/// Grade of the matrix entry (i, j) in the |3|-grading of g2.
pub fn entry_grade(i: usize, j: usize) -> i32 {
    block_of(j) as i32 - block_of(i) as i32
}

pub fn g2_matrix(p: &G2Params) -> LieElt {
    let s2 = AlgScalar::sqrt2();
    let inv_s2 = AlgScalar::sqrt2().scale(&Rat::new(1, 2));
    // J = [[0, −1], [1, 0]]
    let j = |r: usize, c: usize| -> AlgScalar {
        match (r, c) {
            (0, 1) => q(-1, 1),
            (1, 0) => q(1, 1),
            _ => AlgScalar::zero(),
        }
    };
    let tr_a = &p.a[0][0] + &p.a[1][1];
    let mut m = LieElt::zero();
    // Row 0.
    m.set(0, 0, tr_a.clone());
    m.set(0, 1, p.z[0].clone());
    m.set(0, 2, p.z[1].clone());
    m.set(0, 3, p.s.clone());
    m.set(0, 4, p.w[0].clone());
    m.set(0, 5, p.w[1].clone());
    // Rows 1–2.
    for r in 0..2 {
        m.set(1 + r, 0, p.x[r].clone());
        for c in 0..2 {
            m.set(1 + r, 1 + c, p.a[r][c].clone());
            m.set(1 + r, 4 + c, &(&p.s * &inv_s2) * &j(r, c));
        }
        // √2 J Zᵗ
        let jz = (0..2).fold(AlgScalar::zero(), |acc, c| &acc + &(&j(r, c) * &p.z[c]));
        m.set(1 + r, 3, &s2 * &jz);
        m.set(1 + r, 6, -&p.w[r]);
    }
    // Row 3.
    m.set(3, 0, p.r.clone());
    for c in 0..2 {
        // −√2 Xᵗ J and −√2 Z J
        let xj = (0..2).fold(AlgScalar::zero(), |acc, k| &acc + &(&p.x[k] * &j(k, c)));
        let zj = (0..2).fold(AlgScalar::zero(), |acc, k| &acc + &(&p.z[k] * &j(k, c)));
        m.set(3, 1 + c, -&(&s2 * &xj));
        m.set(3, 4 + c, -&(&s2 * &zj));
    }
    m.set(3, 6, p.s.clone());
    // Rows 4–5.
    for r in 0..2 {
        m.set(4 + r, 0, p.y[r].clone());
        for c in 0..2 {
            m.set(4 + r, 1 + c, -&(&(&p.r * &inv_s2) * &j(r, c)));
            m.set(4 + r, 4 + c, -&p.a[c][r]);
        }
        let jx = (0..2).fold(AlgScalar::zero(), |acc, c| &acc + &(&j(r, c) * &p.x[c]));
        m.set(4 + r, 3, &s2 * &jx);
        m.set(4 + r, 6, -&p.z[r]);
    }
    // Row 6.
    m.set(6, 1, -&p.y[0]);
    m.set(6, 2, -&p.y[1]);
    m.set(6, 3, p.r.clone());
    m.set(6, 4, -&p.x[0]);
    m.set(6, 5, -&p.x[1]);
    m.set(6, 6, -&tr_a);
    m
}

/// A basis element together with its grade and a short label.
#[derive(Clone, Debug)]
pub struct GradedElt {
    pub elt: LieElt,
    pub grade: i32,
    pub label: String,
}

/// The 14 generators of g2, ordered by grade from −3 to 3.
pub fn g2_basis() -> Vec<GradedElt> {
    let one = AlgScalar::one();
    let mut out = Vec::with_capacity(14);
    let mut push = |p: G2Params, grade: i32, label: &str| {
        out.push(GradedElt { elt: g2_matrix(&p), grade, label: label.to_string() });
    };
    for k in 0..2 {
        let mut p = G2Params::default();
        p.y[k] = one.clone();
        push(p, -3, &format!("Y{}", k + 1));
    }
    push(G2Params { r: one.clone(), ..Default::default() }, -2, "r");
    for k in 0..2 {
        let mut p = G2Params::default();
        p.x[k] = one.clone();
        push(p, -1, &format!("X{}", k + 1));
    }
    for r in 0..2 {
        for c in 0..2 {
            let mut p = G2Params::default();
            p.a[r][c] = one.clone();
            push(p, 0, &format!("A{}{}", r + 1, c + 1));
        }
    }
    for k in 0..2 {
        let mut p = G2Params::default();
        p.z[k] = one.clone();
        push(p, 1, &format!("Z{}", k + 1));
    }
    push(G2Params { s: one.clone(), ..Default::default() }, 2, "s");
    for k in 0..2 {
        let mut p = G2Params::default();
        p.w[k] = one.clone();
        push(p, 3, &format!("W{}", k + 1));
    }
    out
}

/// A 3-form on R^7 stored as a dense antisymmetric array.
#[derive(Clone, PartialEq, Eq)]
pub struct ThreeForm7 {
    c: Vec<AlgScalar>,
}

fn perm_sign3(i: usize, j: usize, k: usize) -> (i32, [usize; 3]) {
    let mut v = [i, j, k];
    let mut sign = 1;
    for a in 0..3 {
        for b in 0..2 - a {
            if v[b] > v[b + 1] {
                v.swap(b, b + 1);
                sign = -sign;
            }
        }
    }
    if v[0] == v[1] || v[1] == v[2] {
        (0, v)
    } else {
        (sign, v)
    }
}

impl ThreeForm7 {
    pub fn zero() -> Self {
        ThreeForm7 { c: vec![AlgScalar::zero(); N7 * N7 * N7] }
    }

    /// Adds `coef · e_i ∧ e_j ∧ e_k` (zero-based indices).
    pub fn add_term(&mut self, i: usize, j: usize, k: usize, coef: &AlgScalar) {
        let (sign, _) = perm_sign3(i, j, k);
        if sign == 0 {
            return;
        }
        let idx = [i, j, k];
        for (a, b, c) in [(0, 1, 2), (1, 2, 0), (2, 0, 1), (1, 0, 2), (0, 2, 1), (2, 1, 0)] {
            let (s2, _) = perm_sign3(idx[a], idx[b], idx[c]);
            let v = coef.scale(&Rat::from_int((s2 * sign) as i64));
            let pos = (idx[a] * N7 + idx[b]) * N7 + idx[c];
            self.c[pos] += &v;
        }
    }

    pub fn get(&self, i: usize, j: usize, k: usize) -> &AlgScalar {
        &self.c[(i * N7 + j) * N7 + k]
    }

    pub fn scale(&self, s: &AlgScalar) -> Self {
        ThreeForm7 { c: self.c.iter().map(|x| x * s).collect() }
    }

    pub fn is_antisymmetric(&self) -> bool {
        (0..N7).all(|i| {
            (0..N7).all(|j| {
                (0..N7).all(|k| {
                    let v = self.get(i, j, k);
                    *self.get(j, i, k) == -v && *self.get(i, k, j) == -v
                })
            })
        })
    }

    /// Nonzero components on strictly increasing triples.
    pub fn support(&self) -> Vec<([usize; 3], AlgScalar)> {
        let mut out = Vec::new();
        for i in 0..N7 {
            for j in i + 1..N7 {
                for k in j + 1..N7 {
                    let v = self.get(i, j, k);
                    if !v.is_zero() {
                        out.push(([i, j, k], v.clone()));
                    }
                }
            }
        }
        out
    }

    /// The infinitesimal action of M: Φ(Mu,v,w) + Φ(u,Mv,w) + Φ(u,v,Mw).
    pub fn derivation(&self, m: &LieElt) -> ThreeForm7 {
        let mut out = ThreeForm7::zero();
        for i in 0..N7 {
            for j in 0..N7 {
                for k in 0..N7 {
                    let mut acc = AlgScalar::zero();
                    for l in 0..N7 {
                        let a = m.get(l, i);
                        if !a.is_zero() {
                            acc += &(a * self.get(l, j, k));
                        }
                        let b = m.get(l, j);
                        if !b.is_zero() {
                            acc += &(b * self.get(i, l, k));
                        }
                        let c = m.get(l, k);
                        if !c.is_zero() {
                            acc += &(c * self.get(i, j, l));
                        }
                    }
                    out.c[(i * N7 + j) * N7 + k] = acc;
                }
            }
        }
        out
    }

    /// True when M annihilates the form on all 35 increasing basis triples.
    pub fn annihilated_by(&self, m: &LieElt) -> bool {
        let d = self.derivation(m);
        (0..N7).all(|i| (i + 1..N7).all(|j| (j + 1..N7).all(|k| d.get(i, j, k).is_zero())))
    }

    fn to_ext(&self) -> ExtForm {
        let mut f = ExtForm::default();
        for ([i, j, k], v) in self.support() {
            f.terms.push(((1 << i) | (1 << j) | (1 << k), v));
        }
        f
    }
}

impl fmt::Debug for ThreeForm7 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for ([i, j, k], v) in self.support() {
            writeln!(f, "e{}^e{}^e{}: {}", i + 1, j + 1, k + 1, v)?;
        }
        Ok(())
    }
}

/// The defining 3-form Φ of split g2.
pub fn three_form_phi() -> ThreeForm7 {
    let inv3 = AlgScalar::sqrt3().scale(&Rat::new(1, 3));
    let inv6 = AlgScalar::sqrt6().scale(&Rat::new(1, 6));
    let mut phi = ThreeForm7::zero();
    phi.add_term(6, 1, 2, &-&inv3);
    phi.add_term(4, 3, 1, &inv6);
    phi.add_term(5, 3, 2, &inv6);
    phi.add_term(6, 3, 0, &-&inv6);
    phi.add_term(0, 4, 5, &-&inv3);
    phi
}

/// Sparse exterior form on R^7 with basis monomials encoded as bit masks.
#[derive(Clone, Debug, Default)]
struct ExtForm {
    terms: Vec<(u8, AlgScalar)>,
}

fn wedge_sign(a: u8, b: u8) -> i32 {
    // Number of pairs (i in a, j in b) with i > j.
    let mut inv = 0;
    for j in 0..8 {
        if b & (1 << j) != 0 {
            inv += (a >> (j + 1)).count_ones();
        }
    }
    if inv % 2 == 0 {
        1
    } else {
        -1
    }
}

impl ExtForm {
    fn wedge(&self, o: &ExtForm) -> ExtForm {
        let mut acc: std::collections::BTreeMap<u8, AlgScalar> = Default::default();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &o.terms {
                if ma & mb != 0 {
                    continue;
                }
                let v = (ca * cb).scale(&Rat::from_int(wedge_sign(*ma, *mb) as i64));
                *acc.entry(ma | mb).or_default() += &v;
            }
        }
        ExtForm { terms: acc.into_iter().filter(|(_, v)| !v.is_zero()).collect() }
    }

    fn interior(&self, j: usize) -> ExtForm {
        let mut out = Vec::new();
        for (m, c) in &self.terms {
            if m & (1 << j) == 0 {
                continue;
            }
            let below = (m & ((1u8 << j) - 1)).count_ones();
            let sign = if below % 2 == 0 { 1 } else { -1 };
            out.push((m & !(1 << j), c.scale(&Rat::from_int(sign))));
        }
        ExtForm { terms: out }
    }

    fn top_coefficient(&self) -> AlgScalar {
        self.terms
            .iter()
            .find(|(m, _)| *m == 0x7f)
            .map(|(_, c)| c.clone())
            .unwrap_or_default()
    }
}

/// The pairing (X, Y) ↦ i_XΨ ∧ i_YΨ ∧ Ψ, expressed against e^1 ∧ … ∧ e^7.
#[derive(Clone, Debug)]
pub struct ThreeFormPairing {
    /// Matrix of the Λ^7-valued pairing in units of e^1 ∧ … ∧ e^7.
    pub pairing: Vec<Vec<AlgScalar>>,
    /// Its determinant.
    pub det: AlgScalar,
    /// True when the pairing is degenerate (no invariant volume exists).
    pub degenerate: bool,
}

impl ThreeFormPairing {
    /// For a second pairing proportional to this one, returns the ninth power
    /// of the ratio between the root-normalized bilinear forms. With
    /// `other = t · self` this equals `t^9 · det(self) / det(other)`.
    pub fn normalized_ratio_ninth_power(&self, other: &ThreeFormPairing) -> Option<AlgScalar> {
        if self.degenerate || other.degenerate {
            return None;
        }
        let (i, j) = (0..N7)
            .flat_map(|i| (0..N7).map(move |j| (i, j)))
            .find(|&(i, j)| !self.pairing[i][j].is_zero())?;
        let t = other.pairing[i][j].checked_div(&self.pairing[i][j]).ok()?;
        let proportional = (0..N7).all(|a| (0..N7).all(|b| other.pairing[a][b] == &t * &self.pairing[a][b]));
        if !proportional {
            return None;
        }
        let det_ratio = self.det.checked_div(&other.det).ok()?;
        Some(&t.pow(9) * &det_ratio)
    }
}

/// The bilinear form determined by a 3-form. The returned matrix is the
/// pairing measured against the reference volume e^1 ∧ … ∧ e^7, which is the
/// unit volume of h; it is flagged degenerate when its determinant vanishes.
pub fn bilinear_from_threeform(psi: &ThreeForm7) -> ThreeFormPairing {
    let f = psi.to_ext();
    let ins: Vec<ExtForm> = (0..N7).map(|i| f.interior(i)).collect();
    let mut pairing = vec![vec![AlgScalar::zero(); N7]; N7];
    for i in 0..N7 {
        for j in i..N7 {
            let v = ins[i].wedge(&ins[j]).wedge(&f).top_coefficient();
            pairing[i][j] = v.clone();
            pairing[j][i] = v;
        }
    }
    let det = linalg::determinant(&pairing);
    let degenerate = det.is_zero();
    ThreeFormPairing { pairing, det, degenerate }
}

/// Coordinates with respect to a fixed list of 7×7 matrices.
#[derive(Clone, Debug)]
pub struct CoordSolver {
    positions: Vec<usize>,
    inverse: Vec<Vec<AlgScalar>>,
    basis: Vec<LieElt>,
}

impl CoordSolver {
    pub fn new(basis: &[LieElt]) -> Result<Self, CoreError> {
        let n = basis.len();
        // Pick n entry positions on which the basis is independent.
        let mut e: Echelon<AlgScalar> = Echelon::new(n);
        let mut positions = Vec::new();
        for p in 0..N7 * N7 {
            let row: Vec<AlgScalar> = basis.iter().map(|b| b.m[p].clone()).collect();
            if e.insert_dense(&row) {
                positions.push(p);
            }
            if positions.len() == n {
                break;
            }
        }
        if positions.len() < n {
            return Err(CoreError::Algebra("basis is linearly dependent".into()));
        }
        let square: Vec<Vec<AlgScalar>> = positions
            .iter()
            .map(|&p| basis.iter().map(|b| b.m[p].clone()).collect())
            .collect();
        let inverse = linalg::inverse(&square).ok_or_else(|| CoreError::Algebra("singular coordinate system".into()))?;
        Ok(CoordSolver { positions, inverse, basis: basis.to_vec() })
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[LieElt] {
        &self.basis
    }

    /// Coordinates of `m` assuming it lies in the span.
    pub fn coords_unchecked(&self, m: &LieElt) -> Vec<AlgScalar> {
        let rhs: Vec<&AlgScalar> = self.positions.iter().map(|&p| &m.m[p]).collect();
        self.inverse
            .iter()
            .map(|row| row.iter().zip(&rhs).fold(AlgScalar::zero(), |acc, (a, b)| &acc + &(a * *b)))
            .collect()
    }

    pub fn combine(&self, c: &[AlgScalar]) -> LieElt {
        let mut out = LieElt::zero();
        for (b, x) in self.basis.iter().zip(c) {
            if !x.is_zero() {
                out = out.add(&b.scale(x));
            }
        }
        out
    }

    /// Coordinates of `m`, or `None` when it is outside the span.
    pub fn coords(&self, m: &LieElt) -> Option<Vec<AlgScalar>> {
        let c = self.coords_unchecked(m);
        (self.combine(&c) == *m).then_some(c)
    }
}

/// Splits an element of g2 into its graded components (index 0 ↔ grade −3).
pub fn grading_decompose(m: &LieElt, g2: &CoordSolver) -> Result<[LieElt; 7], CoreError> {
    if g2.coords(m).is_none() {
        return Err(CoreError::Algebra("element is not in g2".into()));
    }
    let mut out: [LieElt; 7] = std::array::from_fn(|_| LieElt::zero());
    for i in 0..N7 {
        for j in 0..N7 {
            let v = m.get(i, j);
            if v.is_zero() {
                continue;
            }
            let g = entry_grade(i, j);
            out[(g + 3) as usize].set(i, j, v.clone());
        }
    }
    Ok(out)
}

/// True when every nonzero entry of `m` sits at an entry of grade `g`.
pub fn has_pure_grade(m: &LieElt, g: i32) -> bool {
    (0..N7).all(|i| (0..N7).all(|j| m.get(i, j).is_zero() || entry_grade(i, j) == g))
}

/// The insertions relating so(h) = Λ²R^7 and R^7 through Φ.
#[derive(Clone, Debug)]
pub struct PhiSplitting {
    phi: ThreeForm7,
    h: LieElt,
    /// ι(ι'(v)) = kappa · v.
    pub kappa: AlgScalar,
}

/// Result of splitting M ∈ so(h): M = g2_part + ι'(vector)/κ.
#[derive(Clone, Debug, PartialEq)]
pub struct SplitParts {
    pub g2_part: LieElt,
    pub vector: Vec<AlgScalar>,
}

impl PhiSplitting {
    pub fn new() -> Result<Self, CoreError> {
        let mut s = PhiSplitting { phi: three_form_phi(), h: h_matrix(), kappa: AlgScalar::zero() };
        let mut e0 = vec![AlgScalar::zero(); N7];
        e0[0] = AlgScalar::one();
        let back = s.insert_bivector(&s.vector_to_algebra(&e0));
        s.kappa = back[0].clone();
        let expected: Vec<AlgScalar> = e0.iter().map(|x| x * &s.kappa).collect();
        if s.kappa.is_zero() || back != expected {
            return Err(CoreError::Algebra("double insertion is not a multiple of the identity on e1".into()));
        }
        Ok(s)
    }

    /// ι: so(h) → R^7, v^a = h^{ab} Φ_{bij} (M h)^{ij}.
    pub fn insert_bivector(&self, m: &LieElt) -> Vec<AlgScalar> {
        let biv = m.matmul(&self.h);
        let mut cov = vec![AlgScalar::zero(); N7];
        for (b, slot) in cov.iter_mut().enumerate() {
            let mut acc = AlgScalar::zero();
            for i in 0..N7 {
                for j in 0..N7 {
                    let x = biv.get(i, j);
                    if !x.is_zero() {
                        acc += &(self.phi.get(b, i, j) * x);
                    }
                }
            }
            *slot = acc;
        }
        self.h.apply(&cov)
    }

    /// ι': R^7 → so(h), m^{ij} = h^{ia} h^{jb} Φ_{abc} v^c, M = m h.
    pub fn vector_to_algebra(&self, v: &[AlgScalar]) -> LieElt {
        let mut low = LieElt::zero();
        for a in 0..N7 {
            for b in 0..N7 {
                let mut acc = AlgScalar::zero();
                for (c, vc) in v.iter().enumerate() {
                    if !vc.is_zero() {
                        acc += &(self.phi.get(a, b, c) * vc);
                    }
                }
                low.set(a, b, acc);
            }
        }
        let biv = self.h.matmul(&low).matmul(&self.h);
        biv.matmul(&self.h)
    }

    pub fn split(&self, m: &LieElt) -> SplitParts {
        let vector = self.insert_bivector(m);
        let inv = self.kappa.inv().expect("nonzero kappa");
        let scaled: Vec<AlgScalar> = vector.iter().map(|x| x * &inv).collect();
        let g2_part = m.sub(&self.vector_to_algebra(&scaled));
        SplitParts { g2_part, vector }
    }
}
