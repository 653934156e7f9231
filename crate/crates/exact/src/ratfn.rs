//! Rational functions num/den with a canonical monic denominator.

use std::fmt;

use crate::alg::AlgScalar;
use crate::error::ExactError;
use crate::field::Field;
use crate::poly::{Mono, Poly, DEFAULT_NAMES};
use crate::rat::Rat;

/// A quotient of polynomials. The denominator is nonzero with leading
/// coefficient one, and common monomial factors are removed.
#[derive(Clone)]
pub struct RatFn {
    num: Poly,
    den: Poly,
}

impl RatFn {
    pub fn zero() -> RatFn {
        RatFn { num: Poly::zero(), den: Poly::one() }
    }

    pub fn one() -> RatFn {
        RatFn::from_poly(Poly::one())
    }

    pub fn from_poly(p: Poly) -> RatFn {
        RatFn { num: p, den: Poly::one() }
    }

    pub fn constant(c: AlgScalar) -> RatFn {
        RatFn::from_poly(Poly::constant(c))
    }

    pub fn from_int(n: i64) -> RatFn {
        RatFn::constant(AlgScalar::from_int(n))
    }

    pub fn from_rat(r: Rat) -> RatFn {
        RatFn::constant(AlgScalar::from_rat(r))
    }

    pub fn var(i: usize) -> RatFn {
        RatFn::from_poly(Poly::var(i))
    }

    pub fn new(num: Poly, den: Poly) -> Result<RatFn, ExactError> {
        if den.is_zero() {
            return Err(ExactError::ZeroDenominator);
        }
        Ok(Self::normalize(num, den))
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    fn normalize(num: Poly, den: Poly) -> RatFn {
        if num.is_zero() {
            return RatFn::zero();
        }
        if den.is_one() {
            return RatFn { num, den };
        }
        if let Some(c) = den.constant_value() {
            let inv = c.inv().expect("nonzero denominator");
            return RatFn { num: num.scale(&inv), den: Poly::one() };
        }
        let g = num.monomial_content().gcd(den.monomial_content());
        let (mut num, mut den) = if g != Mono::ONE {
            (num.div_mono(g), den.div_mono(g))
        } else {
            (num, den)
        };
        if let Some(q) = num.div_exact(&den) {
            return RatFn { num: q, den: Poly::one() };
        }
        if !num.is_constant() {
            if let Some(q) = den.div_exact(&num) {
                num = Poly::one();
                den = q;
            }
        }
        let (den, lc) = den.monic();
        let num = num.scale(&lc.inv().expect("nonzero leading coefficient"));
        RatFn { num, den }
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_poly(&self) -> bool {
        self.den.is_one()
    }

    pub fn as_poly(&self) -> Option<&Poly> {
        self.is_poly().then_some(&self.num)
    }

    pub fn constant_value(&self) -> Option<AlgScalar> {
        if self.is_poly() {
            self.num.constant_value()
        } else {
            None
        }
    }

    pub fn add(&self, o: &RatFn) -> RatFn {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        if self.den == o.den {
            return Self::normalize(self.num.add(&o.num), self.den.clone());
        }
        if let Some(k) = o.den.div_exact(&self.den) {
            return Self::normalize(self.num.mul(&k).add(&o.num), o.den.clone());
        }
        if let Some(k) = self.den.div_exact(&o.den) {
            return Self::normalize(self.num.add(&o.num.mul(&k)), self.den.clone());
        }
        Self::normalize(
            self.num.mul(&o.den).add(&o.num.mul(&self.den)),
            self.den.mul(&o.den),
        )
    }

    pub fn neg(&self) -> RatFn {
        RatFn { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn sub(&self, o: &RatFn) -> RatFn {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &RatFn) -> RatFn {
        if self.is_zero() || o.is_zero() {
            return RatFn::zero();
        }
        if self.is_poly() && o.is_poly() {
            return RatFn { num: self.num.mul(&o.num), den: Poly::one() };
        }
        // Cross-cancel before multiplying out.
        let (mut n1, mut d2) = (self.num.clone(), o.den.clone());
        if !d2.is_one() {
            if let Some(q) = n1.div_exact(&d2) {
                n1 = q;
                d2 = Poly::one();
            }
        }
        let (mut n2, mut d1) = (o.num.clone(), self.den.clone());
        if !d1.is_one() {
            if let Some(q) = n2.div_exact(&d1) {
                n2 = q;
                d1 = Poly::one();
            }
        }
        Self::normalize(n1.mul(&n2), d1.mul(&d2))
    }

    pub fn scale(&self, s: &AlgScalar) -> RatFn {
        if s.is_zero() {
            return RatFn::zero();
        }
        RatFn { num: self.num.scale(s), den: self.den.clone() }
    }

    pub fn inv(&self) -> Result<RatFn, ExactError> {
        if self.is_zero() {
            return Err(ExactError::DivisionByZero);
        }
        Ok(Self::normalize(self.den.clone(), self.num.clone()))
    }

    pub fn div(&self, o: &RatFn) -> Result<RatFn, ExactError> {
        Ok(self.mul(&o.inv()?))
    }

    pub fn pow(&self, e: u32) -> RatFn {
        RatFn { num: self.num.pow(e), den: self.den.pow(e) }
    }

    /// Partial derivative with respect to the zero-based variable `var`.
    pub fn diff(&self, var: usize) -> RatFn {
        if self.is_poly() {
            return RatFn { num: self.num.diff(var), den: Poly::one() };
        }
        let dn = self.num.diff(var);
        let dd = self.den.diff(var);
        if dd.is_zero() {
            return Self::normalize(dn, self.den.clone());
        }
        Self::normalize(
            dn.mul(&self.den).sub(&self.num.mul(&dd)),
            self.den.mul(&self.den),
        )
    }

    /// Value at a rational point, `None` if the denominator vanishes there.
    pub fn eval(&self, pt: &[Rat]) -> Option<AlgScalar> {
        let d = self.den.eval(pt);
        if d.is_zero() {
            return None;
        }
        let n = self.num.eval(pt);
        Some(&n * &d.inv().ok()?)
    }

    pub fn render_with(&self, names: &[&str]) -> String {
        let n = self.num.render_with(names);
        if self.is_poly() {
            return n;
        }
        let d = self.den.render_with(names);
        let n = if self.num.len() > 1 || n.starts_with('-') { format!("({n})") } else { n };
        format!("{n}/({d})")
    }

    pub fn render(&self) -> String {
        self.render_with(&DEFAULT_NAMES)
    }
}

impl PartialEq for RatFn {
    fn eq(&self, o: &RatFn) -> bool {
        if self.den == o.den {
            return self.num == o.num;
        }
        self.num.mul(&o.den) == o.num.mul(&self.den)
    }
}

impl Eq for RatFn {}

impl Default for RatFn {
    fn default() -> Self {
        RatFn::zero()
    }
}

impl From<Poly> for RatFn {
    fn from(p: Poly) -> Self {
        RatFn::from_poly(p)
    }
}

impl From<AlgScalar> for RatFn {
    fn from(c: AlgScalar) -> Self {
        RatFn::constant(c)
    }
}

impl fmt::Display for RatFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl fmt::Debug for RatFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl Field for RatFn {
    fn zero() -> Self {
        RatFn::zero()
    }
    fn one() -> Self {
        RatFn::one()
    }
    fn is_zero(&self) -> bool {
        RatFn::is_zero(self)
    }
    fn add(&self, rhs: &Self) -> Self {
        RatFn::add(self, rhs)
    }
    fn sub(&self, rhs: &Self) -> Self {
        RatFn::sub(self, rhs)
    }
    fn mul(&self, rhs: &Self) -> Self {
        RatFn::mul(self, rhs)
    }
    fn neg(&self) -> Self {
        RatFn::neg(self)
    }
    fn inv(&self) -> Option<Self> {
        RatFn::inv(self).ok()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cancels_exact_quotients() {
        let a = Poly::var(0).add(&Poly::var(1));
        let b = Poly::var(0).sub(&Poly::var(1));
        let f = RatFn::new(a.mul(&b), b.clone()).unwrap();
        assert!(f.is_poly());
        assert_eq!(f, RatFn::from_poly(a));
    }

    #[test]
    fn denominator_is_monic() {
        let d = Poly::var(1).scale(&AlgScalar::from_int(3)).add(&Poly::one());
        let f = RatFn::new(Poly::one(), d).unwrap();
        assert!(f.den().leading().unwrap().1 == AlgScalar::one());
    }

    #[test]
    fn quotient_rule() {
        let x = RatFn::var(0);
        let f = RatFn::one().div(&x.add(&RatFn::one())).unwrap();
        let df = f.diff(0);
        let expected = RatFn::from_int(-1).div(&x.add(&RatFn::one()).pow(2)).unwrap();
        assert_eq!(df, expected);
    }

    #[test]
    fn zero_denominator_rejected() {
        assert_eq!(RatFn::new(Poly::one(), Poly::zero()).unwrap_err(), ExactError::ZeroDenominator);
    }
}
