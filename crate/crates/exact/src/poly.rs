//! Sparse polynomials in the five coordinates x1..x5 over Q(√2, √3).
//!
//! Monomials are packed into a `u64` so that integer comparison is the
//! graded-lexicographic order with x1 > x2 > … > x5.

use std::fmt;

use crate::alg::AlgScalar;
use crate::rat::Rat;

pub const NVARS: usize = 5;
const EXP_BITS: u32 = 8;
const EXP_MASK: u64 = (1 << EXP_BITS) - 1;
const DEG_SHIFT: u32 = 40;

/// A monomial x1^e1 ⋯ x5^e5. Each exponent must stay below 256.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Mono(u64);

impl Mono {
    pub const ONE: Mono = Mono(0);

    fn shift(var: usize) -> u32 {
        EXP_BITS * (NVARS - 1 - var) as u32
    }

    pub fn from_exps(e: [u32; NVARS]) -> Mono {
        let mut bits = 0u64;
        let mut deg = 0u64;
        for (i, &x) in e.iter().enumerate() {
            assert!((x as u64) <= EXP_MASK, "exponent overflow");
            bits |= (x as u64) << Self::shift(i);
            deg += x as u64;
        }
        Mono(bits | (deg << DEG_SHIFT))
    }

    /// The variable `x_{var+1}` (zero-based `var`).
    pub fn var(var: usize) -> Mono {
        let mut e = [0; NVARS];
        e[var] = 1;
        Mono::from_exps(e)
    }

    pub fn exp(self, var: usize) -> u32 {
        ((self.0 >> Self::shift(var)) & EXP_MASK) as u32
    }

    pub fn exps(self) -> [u32; NVARS] {
        std::array::from_fn(|i| self.exp(i))
    }

    pub fn degree(self) -> u32 {
        (self.0 >> DEG_SHIFT) as u32
    }

    pub fn mul(self, other: Mono) -> Mono {
        // Exponent fields cannot carry as long as every exponent stays below 256.
        Mono(self.0 + other.0)
    }

    pub fn divides(self, other: Mono) -> bool {
        (0..NVARS).all(|i| self.exp(i) <= other.exp(i))
    }

    /// `other / self`, assuming `self.divides(other)`.
    pub fn quotient_of(self, other: Mono) -> Mono {
        Mono(other.0 - self.0)
    }

    pub fn gcd(self, other: Mono) -> Mono {
        let a = self.exps();
        let b = other.exps();
        Mono::from_exps(std::array::from_fn(|i| a[i].min(b[i])))
    }

    /// Derivative with respect to `var`: returns the multiplier and the
    /// reduced monomial, or `None` if the variable is absent.
    pub fn diff(self, var: usize) -> Option<(u32, Mono)> {
        let e = self.exp(var);
        if e == 0 {
            return None;
        }
        Some((e, Mono(self.0 - (1u64 << Self::shift(var)) - (1u64 << DEG_SHIFT))))
    }

    /// Value at a rational point.
    pub fn eval(self, pt: &[Rat]) -> Rat {
        let mut acc = Rat::ONE;
        for (i, x) in pt.iter().enumerate().take(NVARS) {
            let e = self.exp(i);
            if e > 0 {
                acc = &acc * &x.pow(e);
            }
        }
        acc
    }

    pub fn render_with(self, names: &[&str]) -> String {
        let mut parts = Vec::new();
        for (i, name) in names.iter().enumerate().take(NVARS) {
            match self.exp(i) {
                0 => {}
                1 => parts.push(name.to_string()),
                e => parts.push(format!("{name}^{e}")),
            }
        }
        parts.join("*")
    }

    /// All monomials of total degree at most `d`, in increasing order.
    pub fn all_up_to(d: u32) -> Vec<Mono> {
        let mut out = Vec::new();
        let mut e = [0u32; NVARS];
        fn rec(i: usize, left: u32, e: &mut [u32; NVARS], out: &mut Vec<Mono>) {
            if i == NVARS {
                out.push(Mono::from_exps(*e));
                return;
            }
            for k in 0..=left {
                e[i] = k;
                rec(i + 1, left - k, e, out);
            }
            e[i] = 0;
        }
        rec(0, d, &mut e, &mut out);
        out.sort();
        out
    }
}

impl fmt::Debug for Mono {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.exps())
    }
}

pub const DEFAULT_NAMES: [&str; NVARS] = ["x1", "x2", "x3", "x4", "x5"];

/// Sparse polynomial; terms sorted by decreasing monomial, no zero coefficients.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    terms: Vec<(Mono, AlgScalar)>,
}

impl Poly {
    pub fn zero() -> Poly {
        Poly { terms: Vec::new() }
    }

    pub fn one() -> Poly {
        Poly::constant(AlgScalar::one())
    }

    pub fn constant(c: AlgScalar) -> Poly {
        if c.is_zero() {
            Poly::zero()
        } else {
            Poly { terms: vec![(Mono::ONE, c)] }
        }
    }

    pub fn from_int(n: i64) -> Poly {
        Poly::constant(AlgScalar::from_int(n))
    }

    pub fn var(i: usize) -> Poly {
        Poly { terms: vec![(Mono::var(i), AlgScalar::one())] }
    }

    pub fn monomial(m: Mono, c: AlgScalar) -> Poly {
        if c.is_zero() {
            Poly::zero()
        } else {
            Poly { terms: vec![(m, c)] }
        }
    }

    /// Builds a polynomial from arbitrary (possibly repeated, possibly zero) terms.
    pub fn from_terms(mut terms: Vec<(Mono, AlgScalar)>) -> Poly {
        terms.sort_unstable_by(|x, y| y.0.cmp(&x.0));
        let mut out: Vec<(Mono, AlgScalar)> = Vec::with_capacity(terms.len());
        for (m, c) in terms {
            match out.last_mut() {
                Some((lm, lc)) if *lm == m => *lc += &c,
                _ => out.push((m, c)),
            }
        }
        out.retain(|(_, c)| !c.is_zero());
        Poly { terms: out }
    }

    pub fn terms(&self) -> &[(Mono, AlgScalar)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.terms[0].0 == Mono::ONE)
    }

    pub fn constant_value(&self) -> Option<AlgScalar> {
        match self.terms.as_slice() {
            [] => Some(AlgScalar::zero()),
            [(m, c)] if *m == Mono::ONE => Some(c.clone()),
            _ => None,
        }
    }

    pub fn is_one(&self) -> bool {
        matches!(self.terms.as_slice(), [(m, c)] if *m == Mono::ONE && c.is_rational() && c.a.is_one())
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn leading(&self) -> Option<&(Mono, AlgScalar)> {
        self.terms.first()
    }

    pub fn degree(&self) -> Option<u32> {
        self.terms.iter().map(|(m, _)| m.degree()).max()
    }

    /// True when all coefficients are rational.
    pub fn is_rational(&self) -> bool {
        self.terms.iter().all(|(_, c)| c.is_rational())
    }

    pub fn coeff(&self, m: Mono) -> AlgScalar {
        match self.terms.binary_search_by(|probe| m.cmp(&probe.0)) {
            Ok(i) => self.terms[i].1.clone(),
            Err(_) => AlgScalar::zero(),
        }
    }

    pub fn neg(&self) -> Poly {
        Poly {
            terms: self.terms.iter().map(|(m, c)| (*m, -c)).collect(),
        }
    }

    pub fn scale(&self, s: &AlgScalar) -> Poly {
        if s.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self.terms.iter().map(|(m, c)| (*m, c * s)).collect(),
        }
    }

    pub fn mul_mono(&self, mono: Mono) -> Poly {
        Poly {
            terms: self.terms.iter().map(|(m, c)| (m.mul(mono), c.clone())).collect(),
        }
    }

    fn merge(&self, other: &Poly, negate: bool) -> Poly {
        let (a, b) = (&self.terms, &other.terms);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                std::cmp::Ordering::Greater => {
                    out.push(a[i].clone());
                    i += 1;
                }
                std::cmp::Ordering::Less => {
                    let c = if negate { -&b[j].1 } else { b[j].1.clone() };
                    out.push((b[j].0, c));
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    let c = if negate { &a[i].1 - &b[j].1 } else { &a[i].1 + &b[j].1 };
                    if !c.is_zero() {
                        out.push((a[i].0, c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        for t in &b[j..] {
            let c = if negate { -&t.1 } else { t.1.clone() };
            out.push((t.0, c));
        }
        Poly { terms: out }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        self.merge(other, false)
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        if other.is_zero() {
            return self.clone();
        }
        self.merge(other, true)
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        if let Some(c) = other.constant_value() {
            return self.scale(&c);
        }
        if let Some(c) = self.constant_value() {
            return other.scale(&c);
        }
        let mut terms = Vec::with_capacity(self.terms.len() * other.terms.len());
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                terms.push((m1.mul(*m2), c1 * c2));
            }
        }
        Poly::from_terms(terms)
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut acc = Poly::one();
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Formal partial derivative with respect to the zero-based variable `var`.
    pub fn diff(&self, var: usize) -> Poly {
        let mut out = Vec::new();
        for (m, c) in &self.terms {
            if let Some((e, dm)) = m.diff(var) {
                out.push((dm, c.scale(&Rat::from_int(e as i64))));
            }
        }
        // Differentiation preserves the relative order of the surviving terms
        // only up to collisions, which cannot occur: distinct monomials with
        // positive exponent in `var` have distinct derivatives.
        out.sort_unstable_by(|x, y| y.0.cmp(&x.0));
        Poly { terms: out }
    }

    pub fn eval(&self, pt: &[Rat]) -> AlgScalar {
        let mut acc = AlgScalar::zero();
        for (m, c) in &self.terms {
            acc += &c.scale(&m.eval(pt));
        }
        acc
    }

    /// Greatest monomial dividing every term.
    pub fn monomial_content(&self) -> Mono {
        let mut it = self.terms.iter();
        let Some((first, _)) = it.next() else {
            return Mono::ONE;
        };
        it.fold(*first, |g, (m, _)| g.gcd(*m))
    }

    /// Divides every term by `m`, which must divide each of them.
    pub fn div_mono(&self, m: Mono) -> Poly {
        let mut terms: Vec<_> = self.terms.iter().map(|(t, c)| (m.quotient_of(*t), c.clone())).collect();
        terms.sort_unstable_by(|x, y| y.0.cmp(&x.0));
        Poly { terms }
    }

    /// Exact quotient `self / d` if `d` divides `self`.
    pub fn div_exact(&self, d: &Poly) -> Option<Poly> {
        let (lm, lc) = d.leading()?.clone();
        if self.is_zero() {
            return Some(Poly::zero());
        }
        if let Some(c) = d.constant_value() {
            return Some(self.scale(&c.inv().ok()?));
        }
        let lc_inv = lc.inv().ok()?;
        let mut rem = self.clone();
        let mut quot = Vec::new();
        while let Some((rm, rc)) = rem.leading().cloned() {
            if !lm.divides(rm) {
                return None;
            }
            // Every term of d·q has degree ≥ deg(lm); the remainder must too.
            let qm = lm.quotient_of(rm);
            let qc = &rc * &lc_inv;
            rem = rem.sub(&d.mul_mono(qm).scale(&qc));
            quot.push((qm, qc));
        }
        Some(Poly::from_terms(quot))
    }

    /// Multiplies through so that the leading coefficient is one.
    pub fn monic(&self) -> (Poly, AlgScalar) {
        match self.leading() {
            None => (Poly::zero(), AlgScalar::one()),
            Some((_, c)) => {
                let inv = c.inv().expect("nonzero leading coefficient");
                (self.scale(&inv), c.clone())
            }
        }
    }

    pub fn render_with(&self, names: &[&str]) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut s = String::new();
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let negative = if c.is_rational() { c.signum() < 0 } else { leading_part_negative(c) };
            let (neg, mag) = if negative {
                (true, -c)
            } else {
                (false, c.clone())
            };
            if k == 0 {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            let mono = m.render_with(names);
            let coef = if mag.is_rational() || single_part(&mag) {
                mag.to_string()
            } else {
                format!("({mag})")
            };
            if mono.is_empty() {
                s.push_str(&coef);
            } else if mag.is_rational() && mag.a.is_one() {
                s.push_str(&mono);
            } else {
                s.push_str(&coef);
                s.push('*');
                s.push_str(&mono);
            }
        }
        s
    }
}

fn single_part(c: &AlgScalar) -> bool {
    [&c.a, &c.b, &c.c, &c.d].iter().filter(|r| !r.is_zero()).count() == 1
}

fn leading_part_negative(c: &AlgScalar) -> bool {
    [&c.a, &c.b, &c.c, &c.d]
        .iter()
        .find(|r| !r.is_zero())
        .is_some_and(|r| r.is_negative())
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render_with(&DEFAULT_NAMES))
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
