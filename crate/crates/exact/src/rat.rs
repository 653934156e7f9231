//! Exact rationals with an inline `i64` representation and a big-integer
//! fallback. Almost every coefficient that shows up in tensor computations
//! fits in a machine word, so the fast path avoids heap traffic.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// An exact rational number in lowest terms with positive denominator.
#[derive(Clone)]
pub enum Rat {
    Small { num: i64, den: i64 },
    Big(BigRational),
}

fn gcd_u128(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

impl Rat {
    pub const ZERO: Rat = Rat::Small { num: 0, den: 1 };
    pub const ONE: Rat = Rat::Small { num: 1, den: 1 };

    pub fn from_int(n: i64) -> Rat {
        Rat::Small { num: n, den: 1 }
    }

    /// Builds `num/den`, normalizing sign and common factors.
    ///
    /// Panics if `den == 0`.
    pub fn new(num: i64, den: i64) -> Rat {
        assert!(den != 0, "zero denominator");
        Self::from_i128(num as i128, den as i128)
    }

    fn from_i128(num: i128, den: i128) -> Rat {
        debug_assert!(den != 0);
        if num == 0 {
            return Rat::ZERO;
        }
        let neg = (num < 0) != (den < 0);
        let (un, ud) = (num.unsigned_abs(), den.unsigned_abs());
        let g = gcd_u128(un, ud);
        let (un, ud) = (un / g, ud / g);
        if un <= i64::MAX as u128 && ud <= i64::MAX as u128 {
            let n = un as i64;
            Rat::Small {
                num: if neg { -n } else { n },
                den: ud as i64,
            }
        } else {
            let n = BigInt::from(un);
            let n = if neg { -n } else { n };
            Rat::Big(BigRational::new_raw(n, BigInt::from(ud)))
        }
    }

    fn from_big(r: BigRational) -> Rat {
        // BigRational arithmetic keeps values reduced; demote when possible.
        if let (Some(n), Some(d)) = (r.numer().to_i64(), r.denom().to_i64()) {
            if n != i64::MIN && d != i64::MIN {
                return Rat::Small { num: n, den: d };
            }
        }
        Rat::Big(r)
    }

    pub fn to_big(&self) -> BigRational {
        match self {
            Rat::Small { num, den } => BigRational::new_raw(BigInt::from(*num), BigInt::from(*den)),
            Rat::Big(b) => b.clone(),
        }
    }

    pub fn numer(&self) -> BigInt {
        match self {
            Rat::Small { num, .. } => BigInt::from(*num),
            Rat::Big(b) => b.numer().clone(),
        }
    }

    pub fn denom(&self) -> BigInt {
        match self {
            Rat::Small { den, .. } => BigInt::from(*den),
            Rat::Big(b) => b.denom().clone(),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Rat::Small { num, .. } => *num == 0,
            Rat::Big(b) => b.is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        matches!(self, Rat::Small { num: 1, den: 1 })
    }

    pub fn is_integer(&self) -> bool {
        match self {
            Rat::Small { den, .. } => *den == 1,
            Rat::Big(b) => b.is_integer(),
        }
    }

    pub fn is_negative(&self) -> bool {
        match self {
            Rat::Small { num, .. } => *num < 0,
            Rat::Big(b) => b.is_negative(),
        }
    }

    pub fn signum(&self) -> i32 {
        match self {
            Rat::Small { num, .. } => num.signum() as i32,
            Rat::Big(b) => {
                if b.is_zero() {
                    0
                } else if b.is_negative() {
                    -1
                } else {
                    1
                }
            }
        }
    }

    pub fn abs(&self) -> Rat {
        if self.is_negative() {
            -self.clone()
        } else {
            self.clone()
        }
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn recip(&self) -> Option<Rat> {
        if self.is_zero() {
            return None;
        }
        Some(match self {
            Rat::Small { num, den } => Self::from_i128(*den as i128, *num as i128),
            Rat::Big(b) => Self::from_big(b.recip()),
        })
    }

    pub fn pow(&self, e: u32) -> Rat {
        let mut acc = Rat::ONE;
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Rat::Small { num, den } => *num as f64 / *den as f64,
            Rat::Big(b) => b.to_f64().unwrap_or(f64::NAN),
        }
    }

    /// Exact `k`-th root when `self` is the `k`-th power of a rational.
    pub fn exact_root(&self, k: u32) -> Option<Rat> {
        if k == 0 {
            return None;
        }
        if self.is_negative() && k % 2 == 0 {
            return None;
        }
        let n = self.numer();
        let d = self.denom();
        let rn = int_root(&n.abs(), k)?;
        let rd = int_root(&d, k)?;
        let rn = if n.is_negative() { -rn } else { rn };
        Some(Self::from_big(BigRational::new(rn, rd)))
    }
}

fn int_root(n: &BigInt, k: u32) -> Option<BigInt> {
    let r = n.nth_root(k);
    if num_traits::pow(r.clone(), k as usize) == *n {
        Some(r)
    } else {
        None
    }
}

impl Default for Rat {
    fn default() -> Self {
        Rat::ZERO
    }
}

impl From<i64> for Rat {
    fn from(n: i64) -> Self {
        Rat::from_int(n)
    }
}

impl From<i32> for Rat {
    fn from(n: i32) -> Self {
        Rat::from_int(n as i64)
    }
}

impl From<BigRational> for Rat {
    fn from(r: BigRational) -> Self {
        Rat::from_big(r)
    }
}

impl From<BigInt> for Rat {
    fn from(n: BigInt) -> Self {
        Rat::from_big(BigRational::from_integer(n))
    }
}

impl PartialEq for Rat {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Rat::Small { num: a, den: b }, Rat::Small { num: c, den: d }) => a == c && b == d,
            _ => self.to_big() == other.to_big(),
        }
    }
}

impl Eq for Rat {}

impl Hash for Rat {
    fn hash<H: Hasher>(&self, state: &mut H) {
        // Small and Big never represent the same value (Big is only used when
        // the reduced value does not fit), so hashing the variant data is consistent.
        match self {
            Rat::Small { num, den } => {
                num.hash(state);
                den.hash(state);
            }
            Rat::Big(b) => b.hash(state),
        }
    }
}

impl PartialOrd for Rat {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Rat {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Rat::Small { num: a, den: b }, Rat::Small { num: c, den: d }) => {
                ((*a as i128) * (*d as i128)).cmp(&((*c as i128) * (*b as i128)))
            }
            _ => self.to_big().cmp(&other.to_big()),
        }
    }
}

impl<'a> Add<&'a Rat> for &'a Rat {
    type Output = Rat;
    fn add(self, rhs: &'a Rat) -> Rat {
        match (self, rhs) {
            (Rat::Small { num: 0, .. }, _) => rhs.clone(),
            (_, Rat::Small { num: 0, .. }) => self.clone(),
            (Rat::Small { num: a, den: b }, Rat::Small { num: c, den: d }) => {
                if b == d {
                    Rat::from_i128(*a as i128 + *c as i128, *b as i128)
                } else {
                    let n = (*a as i128) * (*d as i128) + (*c as i128) * (*b as i128);
                    let dd = (*b as i128) * (*d as i128);
                    Rat::from_i128(n, dd)
                }
            }
            _ => Rat::from_big(self.to_big() + rhs.to_big()),
        }
    }
}

impl<'a> Sub<&'a Rat> for &'a Rat {
    type Output = Rat;
    fn sub(self, rhs: &'a Rat) -> Rat {
        self + &(-rhs.clone())
    }
}

impl<'a> Mul<&'a Rat> for &'a Rat {
    type Output = Rat;
    fn mul(self, rhs: &'a Rat) -> Rat {
        match (self, rhs) {
            (Rat::Small { num: 0, .. }, _) | (_, Rat::Small { num: 0, .. }) => Rat::ZERO,
            (Rat::Small { num: 1, den: 1 }, _) => rhs.clone(),
            (_, Rat::Small { num: 1, den: 1 }) => self.clone(),
            (Rat::Small { num: a, den: b }, Rat::Small { num: c, den: d }) => {
                Rat::from_i128((*a as i128) * (*c as i128), (*b as i128) * (*d as i128))
            }
            _ => Rat::from_big(self.to_big() * rhs.to_big()),
        }
    }
}

impl<'a> Div<&'a Rat> for &'a Rat {
    type Output = Rat;
    fn div(self, rhs: &'a Rat) -> Rat {
        let inv = rhs.recip().expect("division by zero rational");
        self * &inv
    }
}

impl Neg for Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        match self {
            Rat::Small { num, den } if num != i64::MIN => Rat::Small { num: -num, den },
            other => Rat::from_big(-other.to_big()),
        }
    }
}

impl Neg for &Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        -self.clone()
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<Rat> for Rat {
            type Output = Rat;
            fn $m(self, rhs: Rat) -> Rat {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a Rat> for Rat {
            type Output = Rat;
            fn $m(self, rhs: &'a Rat) -> Rat {
                (&self).$m(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl AddAssign<&Rat> for Rat {
    fn add_assign(&mut self, rhs: &Rat) {
        *self = &*self + rhs;
    }
}

impl SubAssign<&Rat> for Rat {
    fn sub_assign(&mut self, rhs: &Rat) {
        *self = &*self - rhs;
    }
}

impl MulAssign<&Rat> for Rat {
    fn mul_assign(&mut self, rhs: &Rat) {
        *self = &*self * rhs;
    }
}

impl fmt::Display for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rat::Small { num, den: 1 } => write!(f, "{num}"),
            Rat::Small { num, den } => write!(f, "{num}/{den}"),
            Rat::Big(b) => {
                if b.is_integer() {
                    write!(f, "{}", b.numer())
                } else {
                    write!(f, "{}/{}", b.numer(), b.denom())
                }
            }
        }
    }
}

impl fmt::Debug for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Rat {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let (n, d) = match s.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (s, "1"),
        };
        let n: BigInt = n.parse().map_err(|_| format!("bad rational numerator `{n}`"))?;
        let d: BigInt = d.parse().map_err(|_| format!("bad rational denominator `{d}`"))?;
        if d.is_zero() {
            return Err("zero denominator".into());
        }
        Ok(Rat::from_big(BigRational::new(n, d)))
    }
}

impl Zero for Rat {
    fn zero() -> Self {
        Rat::ZERO
    }
    fn is_zero(&self) -> bool {
        Rat::is_zero(self)
    }
}

impl One for Rat {
    fn one() -> Self {
        Rat::ONE
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_arithmetic_reduces() {
        let a = Rat::new(2, 4);
        assert_eq!(a, Rat::new(1, 2));
        assert_eq!(&a + &Rat::new(1, 3), Rat::new(5, 6));
        assert_eq!(&a * &Rat::new(-4, 3), Rat::new(-2, 3));
        assert_eq!(Rat::new(3, -6), Rat::new(-1, 2));
    }

    #[test]
    fn overflow_promotes_to_big() {
        let big = Rat::from_int(i64::MAX);
        let sq = &big * &big;
        assert!(matches!(sq, Rat::Big(_)));
        let back = &sq / &big;
        assert_eq!(back, big);
        assert!(matches!(back, Rat::Small { .. }));
    }

    #[test]
    fn exact_roots() {
        assert_eq!(Rat::new(8, 27).exact_root(3), Some(Rat::new(2, 3)));
        assert_eq!(Rat::new(-8, 27).exact_root(3), Some(Rat::new(-2, 3)));
        assert_eq!(Rat::new(2, 1).exact_root(2), None);
    }

    #[test]
    fn parse_and_display() {
        let r: Rat = "-6/4".parse().unwrap();
        assert_eq!(r.to_string(), "-3/2");
        assert!("1/0".parse::<Rat>().is_err());
    }
}
