//! Lie algebra cohomology of g₋ and homology of p₊ with values in the adjoint
//! representation, for a graded matrix Lie algebra given by a basis.

use g2t_exact::linalg::{self, Echelon};
use g2t_exact::AlgScalar;

use crate::error::CoreError;
use crate::lie::{self, CoordSolver, LieElt};

pub type Mat = Vec<Vec<AlgScalar>>;

pub fn mat_mul(a: &Mat, b: &Mat) -> Mat {
    let n = b.first().map_or(0, |r| r.len());
    a.iter()
        .map(|row| {
            let mut out = vec![AlgScalar::zero(); n];
            for (k, x) in row.iter().enumerate() {
                if x.is_zero() {
                    continue;
                }
                for (j, y) in b[k].iter().enumerate() {
                    if !y.is_zero() {
                        out[j] += &(x * y);
                    }
                }
            }
            out
        })
        .collect()
}

pub fn mat_add(a: &Mat, b: &Mat) -> Mat {
    a.iter().zip(b).map(|(r, s)| r.iter().zip(s).map(|(x, y)| x + y).collect()).collect()
}

pub fn transpose(a: &Mat) -> Mat {
    let n = a.first().map_or(0, |r| r.len());
    (0..n).map(|j| a.iter().map(|r| r[j].clone()).collect()).collect()
}

pub fn mat_vec(a: &Mat, v: &[AlgScalar]) -> Vec<AlgScalar> {
    a.iter()
        .map(|r| r.iter().zip(v).fold(AlgScalar::zero(), |acc, (x, y)| if x.is_zero() || y.is_zero() { acc } else { &acc + &(x * y) }))
        .collect()
}

fn is_zero_mat(a: &Mat) -> bool {
    a.iter().all(|r| r.iter().all(|x| x.is_zero()))
}

fn zeros(r: usize, c: usize) -> Mat {
    vec![vec![AlgScalar::zero(); c]; r]
}

/// Strictly increasing tuples of length `k` from `0..n`, in lexicographic order.
pub fn increasing_tuples(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Sorts `v`, returning the permutation sign, or `None` on a repeated entry.
fn sort_sign(v: &mut [usize]) -> Option<i64> {
    let mut sign = 1;
    for i in 0..v.len() {
        for j in 0..v.len() - 1 - i {
            if v[j] > v[j + 1] {
                v.swap(j, j + 1);
                sign = -sign;
            }
        }
    }
    if v.windows(2).any(|w| w[0] == w[1]) {
        None
    } else {
        Some(sign)
    }
}

fn sgn(k: usize) -> AlgScalar {
    if k % 2 == 0 {
        AlgScalar::one()
    } else {
        AlgScalar::from_int(-1)
    }
}

/// A graded matrix Lie algebra with structure constants, Killing form and the
/// Killing-dual basis of p₊ against the basis of g₋.
#[derive(Clone, Debug)]
pub struct GradedAlgebra {
    pub name: String,
    pub basis: Vec<LieElt>,
    pub grades: Vec<i32>,
    solver: CoordSolver,
    /// structure[i][j] = coordinates of [b_i, b_j].
    structure: Vec<Vec<Vec<AlgScalar>>>,
    pub killing: Mat,
    /// Indices of basis elements of negative grade (the X_j).
    pub neg: Vec<usize>,
    /// Indices of basis elements of positive grade.
    pub pos: Vec<usize>,
    /// dual[j] = coordinates of Z_j with B(Z_j, X_k) = δ_jk.
    pub dual: Vec<Vec<AlgScalar>>,
    /// Inverse of the change of basis from the positive basis elements to the Z_j.
    dual_inv: Mat,
}

impl GradedAlgebra {
    pub fn new(name: &str, basis: Vec<LieElt>, grades: Vec<i32>) -> Result<Self, CoreError> {
        let solver = CoordSolver::new(&basis)?;
        let n = basis.len();
        let mut structure = vec![vec![Vec::new(); n]; n];
        for i in 0..n {
            for j in 0..n {
                let c = solver
                    .coords(&basis[i].bracket(&basis[j]))
                    .ok_or_else(|| CoreError::Algebra(format!("{name} is not closed under brackets")))?;
                structure[i][j] = c;
            }
        }
        let mut killing = zeros(n, n);
        for i in 0..n {
            for j in i..n {
                let mut acc = AlgScalar::zero();
                for k in 0..n {
                    for l in 0..n {
                        let a = &structure[i][l][k];
                        let b = &structure[j][k][l];
                        if !a.is_zero() && !b.is_zero() {
                            acc += &(a * b);
                        }
                    }
                }
                killing[i][j] = acc.clone();
                killing[j][i] = acc;
            }
        }
        let neg: Vec<usize> = (0..n).filter(|&i| grades[i] < 0).collect();
        let pos: Vec<usize> = (0..n).filter(|&i| grades[i] > 0).collect();
        if neg.len() != pos.len() {
            return Err(CoreError::Algebra("p₊ and g₋ differ in dimension".into()));
        }
        let pairing: Mat = pos.iter().map(|&p| neg.iter().map(|&q| killing[p][q].clone()).collect()).collect();
        let inv = linalg::inverse(&pairing).ok_or_else(|| CoreError::Algebra("Killing pairing of p₊ and g₋ is degenerate".into()))?;
        // Z_j = Σ_p inv[j][p] b_{pos[p]} satisfies B(Z_j, X_k) = (inv · pairing)_{jk} = δ.
        let dual: Vec<Vec<AlgScalar>> = inv
            .iter()
            .map(|row| {
                let mut c = vec![AlgScalar::zero(); n];
                for (p, x) in row.iter().enumerate() {
                    c[pos[p]] = x.clone();
                }
                c
            })
            .collect();
        let dual_inv = linalg::inverse(&inv).expect("inverse of an invertible matrix");
        Ok(GradedAlgebra { name: name.into(), basis, grades, solver, structure, killing, neg, pos, dual, dual_inv })
    }

    /// g₂ with its |3|-grading.
    pub fn g2() -> Result<Self, CoreError> {
        let b = lie::g2_basis();
        GradedAlgebra::new("g2", b.iter().map(|x| x.elt.clone()).collect(), b.iter().map(|x| x.grade).collect())
    }

    /// so(h) with its conformal |1|-grading.
    pub fn so34() -> Result<Self, CoreError> {
        GradedAlgebra::new("so(h)", lie::so34_basis(), lie::so34_grades())
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn coords(&self, m: &LieElt) -> Option<Vec<AlgScalar>> {
        self.solver.coords(m)
    }

    pub fn element(&self, c: &[AlgScalar]) -> LieElt {
        self.solver.combine(c)
    }

    /// Coordinates of [b_i, v] for v given in coordinates.
    pub fn ad_basis(&self, i: usize, v: &[AlgScalar]) -> Vec<AlgScalar> {
        let mut out = vec![AlgScalar::zero(); self.dim()];
        for (j, x) in v.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (k, c) in self.structure[i][j].iter().enumerate() {
                if !c.is_zero() {
                    out[k] += &(x * c);
                }
            }
        }
        out
    }

    /// Coordinates of [u, v].
    pub fn bracket_coords(&self, u: &[AlgScalar], v: &[AlgScalar]) -> Vec<AlgScalar> {
        let mut out = vec![AlgScalar::zero(); self.dim()];
        for (i, x) in u.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (k, c) in self.ad_basis(i, v).into_iter().enumerate() {
                if !c.is_zero() {
                    out[k] += &(x * &c);
                }
            }
        }
        out
    }

    /// Expresses an element of p₊ (given in full coordinates) in the Z basis.
    fn in_dual_basis(&self, v: &[AlgScalar]) -> Vec<AlgScalar> {
        let on_pos: Vec<AlgScalar> = self.pos.iter().map(|&p| v[p].clone()).collect();
        // v = Σ_p w_p b_pos[p] = Σ_j y_j Z_j with Z = inv · b_pos, so w = invᵀ y.
        let t = transpose(&self.dual_inv);
        mat_vec(&t, &on_pos)
    }

    /// Cochain space Λ^k g₋* ⊗ g of degree `k`.
    pub fn cochains(&self, k: usize) -> CochainSpace {
        CochainSpace { tuples: increasing_tuples(self.neg.len(), k), dim_v: self.dim(), degree: k }
    }

    /// Homogeneity of the basis cochain X*_J ⊗ b_a.
    pub fn homogeneity(&self, tuple: &[usize], a: usize) -> i32 {
        self.grades[a] - tuple.iter().map(|&j| self.grades[self.neg[j]]).sum::<i32>()
    }

    /// Chevalley–Eilenberg differential C_k → C_{k+1}, as a matrix.
    pub fn ce_differential(&self, k: usize) -> Mat {
        let src = self.cochains(k);
        let dst = self.cochains(k + 1);
        let mut m = zeros(dst.dim(), src.dim());
        let nneg = self.neg.len();
        // Brackets [X_p, X_q] expanded on g₋.
        let mut neg_brackets = vec![vec![Vec::new(); nneg]; nneg];
        for p in 0..nneg {
            for q in 0..nneg {
                let c = &self.structure[self.neg[p]][self.neg[q]];
                neg_brackets[p][q] = self.neg.iter().map(|&i| c[i].clone()).collect::<Vec<_>>();
            }
        }
        for (ti, kt) in dst.tuples.iter().enumerate() {
            // First sum: x_j · ω(..x̂_j..).
            for j in 0..kt.len() {
                let rest: Vec<usize> = kt.iter().enumerate().filter(|&(s, _)| s != j).map(|(_, &x)| x).collect();
                let Some(si) = src.tuple_index(&rest) else { continue };
                for a in 0..self.dim() {
                    let mut e = vec![AlgScalar::zero(); self.dim()];
                    e[a] = AlgScalar::one();
                    let img = self.ad_basis(self.neg[kt[j]], &e);
                    for (b, c) in img.iter().enumerate() {
                        if !c.is_zero() {
                            m[dst.index(ti, b)][src.index(si, a)] += &(&sgn(j) * c);
                        }
                    }
                }
            }
            // Second sum: ω([x_j, x_l], ..).
            for j in 0..kt.len() {
                for l in j + 1..kt.len() {
                    let rest: Vec<usize> =
                        kt.iter().enumerate().filter(|&(s, _)| s != j && s != l).map(|(_, &x)| x).collect();
                    for (r, c) in neg_brackets[kt[j]][kt[l]].iter().enumerate() {
                        if c.is_zero() {
                            continue;
                        }
                        let mut t = vec![r];
                        t.extend(&rest);
                        let Some(s) = sort_sign(&mut t) else { continue };
                        let Some(si) = src.tuple_index(&t) else { continue };
                        let coef = &(&sgn(j + l) * c) * &AlgScalar::from_int(s);
                        for a in 0..self.dim() {
                            m[dst.index(ti, a)][src.index(si, a)] += &coef;
                        }
                    }
                }
            }
        }
        m
    }

    /// Kostant codifferential C_k → C_{k−1} (k ≥ 1), as a matrix, acting on
    /// chains Z_J ⊗ v identified with cochains X*_J ⊗ v.
    pub fn kostant_codiff(&self, k: usize) -> Mat {
        assert!(k >= 1);
        let src = self.cochains(k);
        let dst = self.cochains(k - 1);
        let mut m = zeros(dst.dim(), src.dim());
        let nneg = self.neg.len();
        let mut pos_brackets = vec![vec![Vec::new(); nneg]; nneg];
        for p in 0..nneg {
            for q in 0..nneg {
                let c = self.bracket_coords(&self.dual[p], &self.dual[q]);
                pos_brackets[p][q] = self.in_dual_basis(&c);
            }
        }
        for (si, jt) in src.tuples.iter().enumerate() {
            // Σ_j (−1)^j Z_1..Ẑ_j..Z_i ⊗ [Z_j, v], with j counted from 1.
            for j in 0..jt.len() {
                let rest: Vec<usize> = jt.iter().enumerate().filter(|&(s, _)| s != j).map(|(_, &x)| x).collect();
                let di = dst.tuple_index(&rest).expect("sub-tuple");
                for a in 0..self.dim() {
                    let mut e = vec![AlgScalar::zero(); self.dim()];
                    e[a] = AlgScalar::one();
                    let img = self.bracket_coords(&self.dual[jt[j]], &e);
                    for (b, c) in img.iter().enumerate() {
                        if !c.is_zero() {
                            m[dst.index(di, b)][src.index(si, a)] += &(&sgn(j + 1) * c);
                        }
                    }
                }
            }
            // Σ_{j<l} (−1)^{j+l} [Z_j, Z_l] ∧ … ⊗ v.
            for j in 0..jt.len() {
                for l in j + 1..jt.len() {
                    let rest: Vec<usize> =
                        jt.iter().enumerate().filter(|&(s, _)| s != j && s != l).map(|(_, &x)| x).collect();
                    for (r, c) in pos_brackets[jt[j]][jt[l]].iter().enumerate() {
                        if c.is_zero() {
                            continue;
                        }
                        let mut t = vec![r];
                        t.extend(&rest);
                        let Some(s) = sort_sign(&mut t) else { continue };
                        let di = dst.tuple_index(&t).expect("tuple");
                        let coef = &(&sgn(j + l) * c) * &AlgScalar::from_int(s);
                        for a in 0..self.dim() {
                            m[dst.index(di, a)][src.index(si, a)] += &coef;
                        }
                    }
                }
            }
        }
        m
    }

    /// Kostant Laplacian □ = ∂*∂ + ∂∂* on C_k.
    pub fn laplacian(&self, k: usize) -> Mat {
        let up = mat_mul(&self.kostant_codiff(k + 1), &self.ce_differential(k));
        if k == 0 {
            return up;
        }
        let down = mat_mul(&self.ce_differential(k - 1), &self.kostant_codiff(k));
        mat_add(&up, &down)
    }

    pub fn laplacian_kernel(&self, k: usize) -> Vec<Vec<AlgScalar>> {
        let l = self.laplacian(k);
        let n = self.cochains(k).dim();
        linalg::nullspace(&l, n)
    }

    /// The action of a basis element of grade 0 on C_k (chain picture).
    pub fn g0_action(&self, a: usize, k: usize) -> Mat {
        assert_eq!(self.grades[a], 0);
        let sp = self.cochains(k);
        let mut m = zeros(sp.dim(), sp.dim());
        let nneg = self.neg.len();
        let mut ad_z = Vec::with_capacity(nneg);
        for j in 0..nneg {
            let mut e = vec![AlgScalar::zero(); self.dim()];
            e[a] = AlgScalar::one();
            ad_z.push(self.in_dual_basis(&self.bracket_coords(&e, &self.dual[j])));
        }
        for (si, jt) in sp.tuples.iter().enumerate() {
            for b in 0..self.dim() {
                let mut e = vec![AlgScalar::zero(); self.dim()];
                e[b] = AlgScalar::one();
                for (c, x) in self.ad_basis(a, &e).iter().enumerate() {
                    if !x.is_zero() {
                        m[sp.index(si, c)][sp.index(si, b)] += x;
                    }
                }
                for s in 0..jt.len() {
                    for (r, x) in ad_z[jt[s]].iter().enumerate() {
                        if x.is_zero() {
                            continue;
                        }
                        let mut t = jt.clone();
                        t[s] = r;
                        let Some(sg) = sort_sign(&mut t) else { continue };
                        let ti = sp.tuple_index(&t).unwrap();
                        m[sp.index(ti, b)][sp.index(si, b)] += &(x * &AlgScalar::from_int(sg));
                    }
                }
            }
        }
        m
    }

    /// Gram matrix on C_k induced by the Frobenius product on the Z_j and on g.
    pub fn gram(&self, k: usize) -> Mat {
        let sp = self.cochains(k);
        let nneg = self.neg.len();
        let zs: Vec<LieElt> = self.dual.iter().map(|c| self.element(c)).collect();
        let zg: Mat = (0..nneg).map(|i| (0..nneg).map(|j| zs[i].frobenius(&zs[j])).collect()).collect();
        let vg: Mat = (0..self.dim()).map(|i| (0..self.dim()).map(|j| self.basis[i].frobenius(&self.basis[j])).collect()).collect();
        let mut g = zeros(sp.dim(), sp.dim());
        for (i, ti) in sp.tuples.iter().enumerate() {
            for (j, tj) in sp.tuples.iter().enumerate() {
                let minor: Mat = ti.iter().map(|&p| tj.iter().map(|&q| zg[p][q].clone()).collect()).collect();
                let d = if k == 0 { AlgScalar::one() } else { linalg::determinant(&minor) };
                if d.is_zero() {
                    continue;
                }
                for a in 0..self.dim() {
                    for b in 0..self.dim() {
                        if !vg[a][b].is_zero() {
                            g[sp.index(i, a)][sp.index(j, b)] = &d * &vg[a][b];
                        }
                    }
                }
            }
        }
        g
    }

    /// If ∂*_{k+1} = s · (∂_k)^† for the Gram inner products, returns s.
    pub fn adjointness_scale(&self, k: usize) -> Option<AlgScalar> {
        let d = self.ce_differential(k);
        let ds = self.kostant_codiff(k + 1);
        // ⟨∂a, b⟩ = s ⟨a, ∂*b⟩  ⇔  dᵀ G_{k+1} = s · G_k ∂*.
        let lhs = mat_mul(&transpose(&d), &self.gram(k + 1));
        let rhs = mat_mul(&self.gram(k), &ds);
        let mut scale: Option<AlgScalar> = None;
        for (r1, r2) in lhs.iter().zip(&rhs) {
            for (x, y) in r1.iter().zip(r2) {
                match (x.is_zero(), y.is_zero()) {
                    (true, true) => {}
                    (false, false) => {
                        let s = x.checked_div(y).ok()?;
                        if let Some(prev) = &scale {
                            if *prev != s {
                                return None;
                            }
                        } else {
                            scale = Some(s);
                        }
                    }
                    _ => return None,
                }
            }
        }
        scale
    }
}

/// Index bookkeeping for Λ^k g₋* ⊗ V.
#[derive(Clone, Debug)]
pub struct CochainSpace {
    pub tuples: Vec<Vec<usize>>,
    pub dim_v: usize,
    pub degree: usize,
}

impl CochainSpace {
    pub fn dim(&self) -> usize {
        self.tuples.len() * self.dim_v
    }

    pub fn index(&self, tuple_idx: usize, v: usize) -> usize {
        tuple_idx * self.dim_v + v
    }

    pub fn tuple_index(&self, t: &[usize]) -> Option<usize> {
        self.tuples.binary_search_by(|x| x.as_slice().cmp(t)).ok()
    }

    /// Splits a flat index into (tuple, value index).
    pub fn split(&self, i: usize) -> (&[usize], usize) {
        (&self.tuples[i / self.dim_v], i % self.dim_v)
    }
}

/// Dimension data of a Hodge decomposition C_k = im ∂ ⊕ ker □ ⊕ im ∂*.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HodgeCount {
    pub dim_c: usize,
    pub im_d: usize,
    pub ker_box: usize,
    pub im_dstar: usize,
}

impl HodgeCount {
    pub fn holds(&self) -> bool {
        self.im_d + self.ker_box + self.im_dstar == self.dim_c
    }
}

pub fn hodge_count(alg: &GradedAlgebra, k: usize) -> HodgeCount {
    let dim_c = alg.cochains(k).dim();
    let im_d = if k == 0 { 0 } else { linalg::rank(&alg.ce_differential(k - 1)) };
    let im_dstar = linalg::rank(&alg.kostant_codiff(k + 1));
    let ker_box = alg.laplacian_kernel(k).len();
    HodgeCount { dim_c, im_d, ker_box, im_dstar }
}

pub fn is_zero_matrix(a: &Mat) -> bool {
    is_zero_mat(a)
}

/// Rank of the span of `vs` together with the images `m·v`, minus rank of `vs`:
/// zero iff the span is invariant under `m`.
pub fn invariance_defect(m: &Mat, vs: &[Vec<AlgScalar>]) -> usize {
    let Some(first) = vs.first() else { return 0 };
    let mut e: Echelon<AlgScalar> = Echelon::new(first.len());
    for v in vs {
        e.insert_dense(v);
    }
    let base = e.rank();
    for v in vs {
        e.insert_dense(&mat_vec(m, v));
    }
    e.rank() - base
}

/// Outcome of the algebraic step in the normality argument for the induced
/// conformal structure.
#[derive(Clone, Debug)]
pub struct NormalityReport {
    /// Image of Λ²p₊ ⊗ g₀ under ∂̃*∘I has values only in p̃₊ ⊗ p̃₊.
    pub containment: bool,
    /// Rank of ∂̃*∘I restricted to ker □ in degree 2.
    pub rank_on_harmonic: usize,
    /// Dimension of ker □ in degree 2.
    pub harmonic_dim: usize,
    /// ∂̃*∘I is zero on the zero cochain.
    pub zero_maps_to_zero: bool,
}

/// The map I: Λ²(g/p)* ⊗ g → Λ²(so/p̃)* ⊗ so(h) in cochain coordinates.
pub fn inclusion_map(g: &GradedAlgebra, so: &GradedAlgebra) -> Result<Mat, CoreError> {
    let n = g.neg.len();
    // T: g₋ → so(h)₋ by projecting each X_j onto the grade −1 part of so(h).
    let mut t = zeros(n, n);
    for (j, &xj) in g.neg.iter().enumerate() {
        let c = so
            .coords(&g.basis[xj])
            .ok_or_else(|| CoreError::Algebra("g is not contained in so(h)".into()))?;
        for (r, &yr) in so.neg.iter().enumerate() {
            t[r][j] = c[yr].clone();
        }
    }
    let tinv = linalg::inverse(&t).ok_or_else(|| CoreError::Algebra("g/p → so/p̃ is not an isomorphism".into()))?;
    let src = g.cochains(2);
    let dst = so.cochains(2);
    let incl: Vec<Vec<AlgScalar>> = g.basis.iter().map(|b| so.coords(b).expect("inclusion")).collect();
    let mut m = zeros(dst.dim(), src.dim());
    for (ki, kt) in dst.tuples.iter().enumerate() {
        // ω(T⁻¹ X̃_{k0}, T⁻¹ X̃_{k1}) for ω = X*_{j0} ∧ X*_{j1}.
        let u = &kt.iter().map(|&k| (0..n).map(|p| tinv[p][k].clone()).collect::<Vec<_>>()).collect::<Vec<_>>();
        for (ji, jt) in src.tuples.iter().enumerate() {
            let val = &(&u[0][jt[0]] * &u[1][jt[1]]) - &(&u[0][jt[1]] * &u[1][jt[0]]);
            if val.is_zero() {
                continue;
            }
            for a in 0..g.dim() {
                for (b, x) in incl[a].iter().enumerate() {
                    if !x.is_zero() {
                        m[dst.index(ki, b)][src.index(ji, a)] = &val * x;
                    }
                }
            }
        }
    }
    Ok(m)
}

pub fn normality_containment_check(g: &GradedAlgebra, so: &GradedAlgebra) -> Result<NormalityReport, CoreError> {
    let i_map = inclusion_map(g, so)?;
    let comp = mat_mul(&so.kostant_codiff(2), &i_map);
    let src = g.cochains(2);
    let dst1 = so.cochains(1);
    // Columns with g₀ values must land on grade +1 values of so(h).
    let mut containment = true;
    for col in 0..src.dim() {
        let (_, a) = src.split(col);
        if g.grades[a] != 0 {
            continue;
        }
        for (row, r) in comp.iter().enumerate() {
            if !r[col].is_zero() {
                let (_, b) = dst1.split(row);
                if so.grades[b] != 1 {
                    containment = false;
                }
            }
        }
    }
    let harmonic = g.laplacian_kernel(2);
    let images: Vec<Vec<AlgScalar>> = harmonic.iter().map(|v| mat_vec(&comp, v)).collect();
    let rank_on_harmonic = linalg::rank(&images);
    let zero = vec![AlgScalar::zero(); src.dim()];
    let zero_maps_to_zero = mat_vec(&comp, &zero).iter().all(|x| x.is_zero());
    Ok(NormalityReport { containment, rank_on_harmonic, harmonic_dim: harmonic.len(), zero_maps_to_zero })
}
