//! The number field Q(√2, √3), stored as a + b√2 + c√3 + d√6.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use crate::error::ExactError;
use crate::field::Field;
use crate::rat::Rat;

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct AlgScalar {
    pub a: Rat,
    pub b: Rat,
    pub c: Rat,
    pub d: Rat,
}

impl AlgScalar {
    pub fn new(a: Rat, b: Rat, c: Rat, d: Rat) -> Self {
        AlgScalar { a, b, c, d }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::from_rat(Rat::ONE)
    }

    pub fn from_rat(a: Rat) -> Self {
        AlgScalar { a, b: Rat::ZERO, c: Rat::ZERO, d: Rat::ZERO }
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rat(Rat::from_int(n))
    }

    pub fn frac(n: i64, d: i64) -> Self {
        Self::from_rat(Rat::new(n, d))
    }

    pub fn sqrt2() -> Self {
        AlgScalar { b: Rat::ONE, ..Self::default() }
    }

    pub fn sqrt3() -> Self {
        AlgScalar { c: Rat::ONE, ..Self::default() }
    }

    pub fn sqrt6() -> Self {
        AlgScalar { d: Rat::ONE, ..Self::default() }
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero() && self.c.is_zero() && self.d.is_zero()
    }

    /// True when the value lies in Q.
    pub fn is_rational(&self) -> bool {
        self.b.is_zero() && self.c.is_zero() && self.d.is_zero()
    }

    pub fn as_rational(&self) -> Option<&Rat> {
        self.is_rational().then_some(&self.a)
    }

    pub fn scale(&self, r: &Rat) -> Self {
        if r.is_one() {
            return self.clone();
        }
        AlgScalar {
            a: &self.a * r,
            b: &self.b * r,
            c: &self.c * r,
            d: &self.d * r,
        }
    }

    /// Conjugate under √2 ↦ −√2.
    fn conj2(&self) -> Self {
        AlgScalar {
            a: self.a.clone(),
            b: -&self.b,
            c: self.c.clone(),
            d: -&self.d,
        }
    }

    /// Conjugate under √3 ↦ −√3.
    fn conj3(&self) -> Self {
        AlgScalar {
            a: self.a.clone(),
            b: self.b.clone(),
            c: -&self.c,
            d: -&self.d,
        }
    }

    pub fn inv(&self) -> Result<Self, ExactError> {
        if self.is_zero() {
            return Err(ExactError::DivisionByZero);
        }
        if self.is_rational() {
            return Ok(Self::from_rat(self.a.recip().unwrap()));
        }
        // x·conj3(x) lies in Q(√2); times its √2-conjugate lies in Q.
        let c3 = self.conj3();
        let n1 = self * &c3;
        let c2 = n1.conj2();
        let n2 = &n1 * &c2;
        debug_assert!(n2.is_rational());
        let r = n2.a.recip().ok_or(ExactError::DivisionByZero)?;
        Ok((&c3 * &c2).scale(&r))
    }

    pub fn checked_div(&self, rhs: &Self) -> Result<Self, ExactError> {
        Ok(self * &rhs.inv()?)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Floating-point approximation, for display of pointwise samples only.
    pub fn to_f64(&self) -> f64 {
        self.a.to_f64()
            + self.b.to_f64() * std::f64::consts::SQRT_2
            + self.c.to_f64() * 3f64.sqrt()
            + self.d.to_f64() * 6f64.sqrt()
    }

    /// Sign of the real number, decided exactly by repeated squaring of
    /// separated parts.
    pub fn signum(&self) -> i32 {
        // Write x = p + q√3 with p, q ∈ Q(√2).
        let p = AlgScalar { a: self.a.clone(), b: self.b.clone(), ..Default::default() };
        let q = AlgScalar { a: self.c.clone(), b: self.d.clone(), ..Default::default() };
        let sp = sign_q2(&p.a, &p.b);
        let sq = sign_q2(&q.a, &q.b);
        if sq == 0 {
            return sp;
        }
        if sp == 0 {
            return sq;
        }
        if sp == sq {
            return sp;
        }
        // Opposite signs: compare p² with 3q².
        let p2 = &p * &p;
        let q2 = (&q * &q).scale(&Rat::from_int(3));
        let diff = &p2 - &q2;
        let sd = sign_q2(&diff.a, &diff.b);
        if sd == 0 {
            0
        } else if sd > 0 {
            sp
        } else {
            sq
        }
    }

    /// Renders with the constants `sqrt2`, `sqrt3`, `sqrt6` in the input grammar.
    pub fn render(&self) -> String {
        self.to_string()
    }
}

/// Sign of a + b√2.
fn sign_q2(a: &Rat, b: &Rat) -> i32 {
    let sa = a.signum();
    let sb = b.signum();
    if sb == 0 {
        return sa;
    }
    if sa == 0 || sa == sb {
        return if sa == 0 { sb } else { sa };
    }
    let lhs = a * a;
    let rhs = &(b * b) * &Rat::from_int(2);
    match lhs.cmp(&rhs) {
        std::cmp::Ordering::Greater => sa,
        std::cmp::Ordering::Less => sb,
        std::cmp::Ordering::Equal => 0,
    }
}

impl From<Rat> for AlgScalar {
    fn from(r: Rat) -> Self {
        Self::from_rat(r)
    }
}

impl From<i64> for AlgScalar {
    fn from(n: i64) -> Self {
        Self::from_int(n)
    }
}

impl<'a> Add<&'a AlgScalar> for &'a AlgScalar {
    type Output = AlgScalar;
    fn add(self, r: &'a AlgScalar) -> AlgScalar {
        if self.is_rational() && r.is_rational() {
            return AlgScalar::from_rat(&self.a + &r.a);
        }
        AlgScalar {
            a: &self.a + &r.a,
            b: &self.b + &r.b,
            c: &self.c + &r.c,
            d: &self.d + &r.d,
        }
    }
}

impl<'a> Sub<&'a AlgScalar> for &'a AlgScalar {
    type Output = AlgScalar;
    fn sub(self, r: &'a AlgScalar) -> AlgScalar {
        if self.is_rational() && r.is_rational() {
            return AlgScalar::from_rat(&self.a - &r.a);
        }
        AlgScalar {
            a: &self.a - &r.a,
            b: &self.b - &r.b,
            c: &self.c - &r.c,
            d: &self.d - &r.d,
        }
    }
}

impl<'a> Mul<&'a AlgScalar> for &'a AlgScalar {
    type Output = AlgScalar;
    fn mul(self, r: &'a AlgScalar) -> AlgScalar {
        if r.is_rational() {
            return self.scale(&r.a);
        }
        if self.is_rational() {
            return r.scale(&self.a);
        }
        let two = Rat::from_int(2);
        let three = Rat::from_int(3);
        let six = Rat::from_int(6);
        let (a1, b1, c1, d1) = (&self.a, &self.b, &self.c, &self.d);
        let (a2, b2, c2, d2) = (&r.a, &r.b, &r.c, &r.d);
        let a = &(&(a1 * a2) + &(&(b1 * b2) * &two)) + &(&(&(c1 * c2) * &three) + &(&(d1 * d2) * &six));
        let b = &(&(a1 * b2) + &(b1 * a2)) + &(&(&(c1 * d2) + &(d1 * c2)) * &three);
        let c = &(&(a1 * c2) + &(c1 * a2)) + &(&(&(b1 * d2) + &(d1 * b2)) * &two);
        let d = &(&(a1 * d2) + &(d1 * a2)) + &(&(b1 * c2) + &(c1 * b2));
        AlgScalar { a, b, c, d }
    }
}

impl Neg for &AlgScalar {
    type Output = AlgScalar;
    fn neg(self) -> AlgScalar {
        AlgScalar {
            a: -&self.a,
            b: -&self.b,
            c: -&self.c,
            d: -&self.d,
        }
    }
}

impl Neg for AlgScalar {
    type Output = AlgScalar;
    fn neg(self) -> AlgScalar {
        -&self
    }
}

impl Add for AlgScalar {
    type Output = AlgScalar;
    fn add(self, r: AlgScalar) -> AlgScalar {
        &self + &r
    }
}

impl Sub for AlgScalar {
    type Output = AlgScalar;
    fn sub(self, r: AlgScalar) -> AlgScalar {
        &self - &r
    }
}

impl Mul for AlgScalar {
    type Output = AlgScalar;
    fn mul(self, r: AlgScalar) -> AlgScalar {
        &self * &r
    }
}

impl AddAssign<&AlgScalar> for AlgScalar {
    fn add_assign(&mut self, r: &AlgScalar) {
        if self.is_rational() && r.is_rational() {
            self.a += &r.a;
        } else {
            self.a += &r.a;
            self.b += &r.b;
            self.c += &r.c;
            self.d += &r.d;
        }
    }
}

impl SubAssign<&AlgScalar> for AlgScalar {
    fn sub_assign(&mut self, r: &AlgScalar) {
        self.a -= &r.a;
        self.b -= &r.b;
        self.c -= &r.c;
        self.d -= &r.d;
    }
}

impl Field for AlgScalar {
    fn zero() -> Self {
        AlgScalar::zero()
    }
    fn one() -> Self {
        AlgScalar::one()
    }
    fn is_zero(&self) -> bool {
        AlgScalar::is_zero(self)
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn neg(&self) -> Self {
        -self
    }
    fn inv(&self) -> Option<Self> {
        AlgScalar::inv(self).ok()
    }
}

impl fmt::Display for AlgScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        let parts = [(&self.a, ""), (&self.b, "sqrt2"), (&self.c, "sqrt3"), (&self.d, "sqrt6")];
        for (r, name) in parts {
            if r.is_zero() {
                continue;
            }
            let neg = r.is_negative();
            let mag = r.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            first = false;
            if name.is_empty() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{name}")?;
            } else if mag.is_integer() {
                write!(f, "{mag}*{name}")?;
            } else {
                let n = mag.numer();
                let d = mag.denom();
                if n == num_bigint::BigInt::from(1) {
                    write!(f, "{name}/{d}")?;
                } else {
                    write!(f, "{n}*{name}/{d}")?;
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for AlgScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn multiplication_table() {
        let s2 = AlgScalar::sqrt2();
        let s3 = AlgScalar::sqrt3();
        let s6 = AlgScalar::sqrt6();
        assert_eq!(&s2 * &s3, s6);
        assert_eq!(&s2 * &s6, s3.scale(&Rat::from_int(2)));
        assert_eq!(&s3 * &s6, s2.scale(&Rat::from_int(3)));
        assert_eq!(&s6 * &s6, AlgScalar::from_int(6));
    }

    #[test]
    fn inverse_of_sqrt6() {
        let inv = AlgScalar::sqrt6().inv().unwrap();
        assert_eq!(inv, AlgScalar::new(Rat::ZERO, Rat::ZERO, Rat::ZERO, Rat::new(1, 6)));
        assert_eq!(&inv * &AlgScalar::sqrt6(), AlgScalar::one());
    }

    #[test]
    fn square_of_one_plus_sqrt2() {
        let x = &AlgScalar::one() + &AlgScalar::sqrt2();
        assert_eq!(&x * &x, AlgScalar::new(Rat::from_int(3), Rat::from_int(2), Rat::ZERO, Rat::ZERO));
    }

    #[test]
    fn zero_has_no_inverse() {
        assert_eq!(AlgScalar::zero().inv(), Err(ExactError::DivisionByZero));
    }

    #[test]
    fn signs() {
        // 1 + √2 − √3 − √6/2 ≈ −0.537
        let x = AlgScalar::new(Rat::ONE, Rat::ONE, Rat::from_int(-1), Rat::new(-1, 2));
        assert_eq!(x.signum(), -1);
        let y = &AlgScalar::sqrt3() - &AlgScalar::sqrt2();
        assert_eq!(y.signum(), 1);
    }
}
