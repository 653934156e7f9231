//! Exact Gaussian elimination over any [`Field`], with sparse rows.

use std::collections::BTreeMap;

use crate::field::Field;

/// A sparse row: strictly increasing column indices, nonzero values.
pub type SparseRow<F> = Vec<(usize, F)>;

pub fn to_sparse<F: Field>(row: &[F]) -> SparseRow<F> {
    row.iter()
        .enumerate()
        .filter(|(_, v)| !v.is_zero())
        .map(|(i, v)| (i, v.clone()))
        .collect()
}

pub fn to_dense<F: Field>(row: &SparseRow<F>, ncols: usize) -> Vec<F> {
    let mut out = vec![F::zero(); ncols];
    for (i, v) in row {
        out[*i] = v.clone();
    }
    out
}

/// `a - s·b` for sparse rows.
fn axpy<F: Field>(a: &SparseRow<F>, s: &F, b: &SparseRow<F>) -> SparseRow<F> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let ca = a.get(i).map(|t| t.0);
        let cb = b.get(j).map(|t| t.0);
        match (ca, cb) {
            (Some(x), Some(y)) if x == y => {
                let v = a[i].1.sub(&s.mul(&b[j].1));
                if !v.is_zero() {
                    out.push((x, v));
                }
                i += 1;
                j += 1;
            }
            (Some(x), Some(y)) if x < y => {
                out.push(a[i].clone());
                i += 1;
            }
            (Some(_), None) => {
                out.push(a[i].clone());
                i += 1;
            }
            (_, Some(y)) => {
                out.push((y, s.mul(&b[j].1).neg()));
                j += 1;
            }
            (None, None) => unreachable!(),
        }
    }
    out
}

/// Incrementally built row-echelon form. Pivot rows are normalized to a
/// leading one.
#[derive(Clone, Debug)]
pub struct Echelon<F: Field> {
    ncols: usize,
    pivots: BTreeMap<usize, SparseRow<F>>,
}

impl<F: Field> Echelon<F> {
    pub fn new(ncols: usize) -> Self {
        Echelon { ncols, pivots: BTreeMap::new() }
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn pivot_columns(&self) -> Vec<usize> {
        self.pivots.keys().copied().collect()
    }

    /// Reduces `row` against the current pivots; the result has no entries
    /// in pivot columns.
    pub fn reduce(&self, mut row: SparseRow<F>) -> SparseRow<F> {
        let mut i = 0;
        while i < row.len() {
            let (c, v) = (row[i].0, row[i].1.clone());
            if let Some(p) = self.pivots.get(&c) {
                row = axpy(&row, &v, p);
            } else {
                i += 1;
            }
        }
        row
    }

    /// Adds a row; returns true when it increased the rank.
    pub fn insert(&mut self, row: SparseRow<F>) -> bool {
        let r = self.reduce(row);
        let Some((lead, lv)) = r.first().cloned() else {
            return false;
        };
        let inv = lv.inv().expect("nonzero pivot");
        let r: SparseRow<F> = r.into_iter().map(|(c, v)| (c, v.mul(&inv))).collect();
        self.pivots.insert(lead, r);
        true
    }

    pub fn insert_dense(&mut self, row: &[F]) -> bool {
        self.insert(to_sparse(row))
    }

    pub fn contains(&self, row: SparseRow<F>) -> bool {
        self.reduce(row).is_empty()
    }

    /// Back-substitutes so that every pivot column is zero outside its pivot row.
    pub fn into_reduced(mut self) -> Self {
        let cols: Vec<usize> = self.pivots.keys().rev().copied().collect();
        for &c in &cols {
            let row = self.pivots.remove(&c).unwrap();
            let head = vec![row[0].clone()];
            // Higher pivots are already fully reduced.
            let mut tail: SparseRow<F> = row[1..].to_vec();
            let mut i = 0;
            while i < tail.len() {
                let (tc, tv) = (tail[i].0, tail[i].1.clone());
                if let Some(p) = self.pivots.get(&tc) {
                    tail = axpy(&tail, &tv, p);
                } else {
                    i += 1;
                }
            }
            let mut full = head;
            full.extend(tail);
            self.pivots.insert(c, full);
        }
        self
    }

    /// Basis of the null space of the inserted rows.
    pub fn nullspace(&self) -> Vec<Vec<F>> {
        let red = self.clone().into_reduced();
        let mut out = Vec::new();
        for f in 0..self.ncols {
            if red.pivots.contains_key(&f) {
                continue;
            }
            let mut v = vec![F::zero(); self.ncols];
            v[f] = F::one();
            for (c, row) in &red.pivots {
                if let Ok(k) = row.binary_search_by(|t| t.0.cmp(&f)) {
                    v[*c] = row[k].1.neg();
                }
            }
            out.push(v);
        }
        out
    }
}

pub fn rank<F: Field>(rows: &[Vec<F>]) -> usize {
    let Some(first) = rows.first() else {
        return 0;
    };
    let mut e = Echelon::new(first.len());
    for r in rows {
        e.insert_dense(r);
    }
    e.rank()
}

pub fn nullspace<F: Field>(rows: &[Vec<F>], ncols: usize) -> Vec<Vec<F>> {
    let mut e = Echelon::new(ncols);
    for r in rows {
        e.insert_dense(r);
    }
    e.nullspace()
}

pub fn sparse_nullspace<F: Field>(rows: impl IntoIterator<Item = SparseRow<F>>, ncols: usize) -> Vec<Vec<F>> {
    let mut e = Echelon::new(ncols);
    for r in rows {
        e.insert(r);
    }
    e.nullspace()
}

/// One solution of `A x = b`, with free variables set to zero.
pub fn solve<F: Field>(rows: &[Vec<F>], rhs: &[F]) -> Option<Vec<F>> {
    let n = rows.first().map_or(0, |r| r.len());
    let mut e = Echelon::new(n + 1);
    for (r, b) in rows.iter().zip(rhs) {
        let mut s = to_sparse(r);
        if !b.is_zero() {
            s.push((n, b.clone()));
        }
        e.insert(s);
    }
    if e.pivots.contains_key(&n) {
        return None;
    }
    let red = e.into_reduced();
    let mut x = vec![F::zero(); n];
    for (c, row) in &red.pivots {
        if let Some((last, v)) = row.last() {
            if *last == n {
                x[*c] = v.clone();
            }
        }
    }
    Some(x)
}

/// Coordinates of `v` in the span of `basis` (vectors as dense rows).
pub fn coordinates<F: Field>(basis: &[Vec<F>], v: &[F]) -> Option<Vec<F>> {
    let n = v.len();
    let rows: Vec<Vec<F>> = (0..n).map(|i| basis.iter().map(|b| b[i].clone()).collect()).collect();
    solve(&rows, v)
}

/// Determinant by Gaussian elimination.
pub fn determinant<F: Field>(m: &[Vec<F>]) -> F {
    let n = m.len();
    let mut a: Vec<Vec<F>> = m.to_vec();
    let mut det = F::one();
    for col in 0..n {
        let Some(p) = (col..n).find(|&r| !a[r][col].is_zero()) else {
            return F::zero();
        };
        if p != col {
            a.swap(p, col);
            det = det.neg();
        }
        let pv = a[col][col].clone();
        det = det.mul(&pv);
        let inv = pv.inv().unwrap();
        for r in col + 1..n {
            if a[r][col].is_zero() {
                continue;
            }
            let f = a[r][col].mul(&inv);
            for k in col..n {
                let t = a[r][k].sub(&f.mul(&a[col][k]));
                a[r][k] = t;
            }
        }
    }
    det
}

/// Matrix inverse, `None` if singular.
pub fn inverse<F: Field>(m: &[Vec<F>]) -> Option<Vec<Vec<F>>> {
    let n = m.len();
    if rank(m) < n {
        return None;
    }
    let mut out = vec![vec![F::zero(); n]; n];
    for j in 0..n {
        let e: Vec<F> = (0..n).map(|i| if i == j { F::one() } else { F::zero() }).collect();
        let x = solve(m, &e)?;
        for i in 0..n {
            out[i][j] = x[i].clone();
        }
    }
    Some(out)
}
