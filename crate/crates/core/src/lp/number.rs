//! Exact rationals with an `i64` fast path for the simplex inner loops.

use std::cmp::Ordering;
use std::iter::Sum;
use std::ops::{Add, Div, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::rational::Rational;

/// A rational that stays as a reduced `i64` fraction (denominator positive)
/// until an operation overflows, then falls back to [`Rational`].
#[derive(Debug, Clone)]
pub(crate) enum Num {
    Small(i64, i64),
    Big(Box<Rational>),
}

impl Num {
    fn from_i128(num: i128, den: i128) -> Num {
        if num == 0 {
            return Num::Small(0, 1);
        }
        let g = num.gcd(&den);
        let (mut num, mut den) = if g > 1 { (num / g, den / g) } else { (num, den) };
        if den < 0 {
            num = -num;
            den = -den;
        }
        match (i64::try_from(num), i64::try_from(den)) {
            (Ok(n), Ok(d)) => Num::Small(n, d),
            _ => Num::Big(Box::new(Rational::new(BigInt::from(num), BigInt::from(den)))),
        }
    }

    fn from_big(r: Rational) -> Num {
        match (r.numer().to_i64(), r.denom().to_i64()) {
            (Some(n), Some(d)) => Num::Small(n, d),
            _ => Num::Big(Box::new(r)),
        }
    }

    pub(crate) fn to_rational(&self) -> Rational {
        match self {
            Num::Small(n, d) => Rational::new_raw(BigInt::from(*n), BigInt::from(*d)),
            Num::Big(r) => (**r).clone(),
        }
    }

    pub(crate) fn is_positive(&self) -> bool {
        match self {
            Num::Small(n, _) => *n > 0,
            Num::Big(r) => r.is_positive(),
        }
    }

    pub(crate) fn is_negative(&self) -> bool {
        match self {
            Num::Small(n, _) => *n < 0,
            Num::Big(r) => r.is_negative(),
        }
    }
}

impl From<&Rational> for Num {
    fn from(r: &Rational) -> Num {
        Num::from_big(r.clone())
    }
}

impl Default for Num {
    fn default() -> Num {
        Num::Small(0, 1)
    }
}

impl Zero for Num {
    fn zero() -> Num {
        Num::Small(0, 1)
    }

    fn is_zero(&self) -> bool {
        match self {
            Num::Small(n, _) => *n == 0,
            Num::Big(r) => r.is_zero(),
        }
    }
}

impl Num {
    pub(crate) fn one() -> Num {
        Num::Small(1, 1)
    }

    pub(crate) fn is_one(&self) -> bool {
        match self {
            Num::Small(n, d) => *n == 1 && *d == 1,
            Num::Big(r) => r.is_one(),
        }
    }
}

impl Add<&Num> for &Num {
    type Output = Num;

    fn add(self, rhs: &Num) -> Num {
        match (self, rhs) {
            (Num::Small(a, b), Num::Small(c, d)) => {
                if b == d {
                    if let Some(n) = a.checked_add(*c) {
                        return reduced(n, *b);
                    }
                } else {
                    let g = b.gcd(d);
                    let (b1, d1) = (b / g, d / g);
                    let num = a.checked_mul(d1).zip(c.checked_mul(b1)).and_then(|(x, y)| x.checked_add(y));
                    if let (Some(num), Some(den)) = (num, b.checked_mul(d1)) {
                        return reduced(num, den);
                    }
                }
                let (a, b, c, d) = (*a as i128, *b as i128, *c as i128, *d as i128);
                Num::from_i128(a * d + c * b, b * d)
            }
            _ => Num::from_big(self.to_rational() + rhs.to_rational()),
        }
    }
}

/// `num / den` in lowest terms, `den > 0`.
fn reduced(num: i64, den: i64) -> Num {
    if num == 0 {
        return Num::Small(0, 1);
    }
    if den == 1 {
        return Num::Small(num, 1);
    }
    let g = num.gcd(&den);
    Num::Small(num / g, den / g)
}

/// `(a/b) * (c/d)` for reduced fractions, cross-cancelling first.
fn small_product(a: i64, b: i64, c: i64, d: i64) -> Num {
    if a == 0 || c == 0 {
        return Num::Small(0, 1);
    }
    let g1 = a.gcd(&d);
    let g2 = c.gcd(&b);
    let num = (a / g1).checked_mul(c / g2);
    let den = (b / g2).checked_mul(d / g1);
    match (num, den) {
        (Some(n), Some(d)) => Num::Small(n, d),
        _ => Num::from_i128(a as i128 * c as i128, b as i128 * d as i128),
    }
}

impl Add for Num {
    type Output = Num;

    fn add(self, rhs: Num) -> Num {
        &self + &rhs
    }
}

impl Neg for &Num {
    type Output = Num;

    fn neg(self) -> Num {
        match self {
            Num::Small(n, d) if *n != i64::MIN => Num::Small(-n, *d),
            _ => Num::from_big(-self.to_rational()),
        }
    }
}

impl Sub<&Num> for &Num {
    type Output = Num;

    fn sub(self, rhs: &Num) -> Num {
        self + &(-rhs)
    }
}

impl Sub<Num> for &Num {
    type Output = Num;

    fn sub(self, rhs: Num) -> Num {
        self - &rhs
    }
}

impl SubAssign<Num> for Num {
    fn sub_assign(&mut self, rhs: Num) {
        *self = &*self - &rhs;
    }
}

impl Mul<&Num> for &Num {
    type Output = Num;

    fn mul(self, rhs: &Num) -> Num {
        match (self, rhs) {
            (Num::Small(a, b), Num::Small(c, d)) => small_product(*a, *b, *c, *d),
            _ => Num::from_big(self.to_rational() * rhs.to_rational()),
        }
    }
}

impl Div<&Num> for &Num {
    type Output = Num;

    fn div(self, rhs: &Num) -> Num {
        assert!(!rhs.is_zero(), "division by zero");
        match (self, rhs) {
            (Num::Small(a, b), Num::Small(c, d)) if *c != i64::MIN => {
                let (c, d) = if *c < 0 { (-c, -d) } else { (*c, *d) };
                small_product(*a, *b, d, c)
            }
            _ => Num::from_big(self.to_rational() / rhs.to_rational()),
        }
    }
}

impl Div<&Num> for Num {
    type Output = Num;

    fn div(self, rhs: &Num) -> Num {
        &self / rhs
    }
}

impl Sum for Num {
    fn sum<I: Iterator<Item = Num>>(iter: I) -> Num {
        iter.fold(Num::zero(), |acc, x| &acc + &x)
    }
}

impl Ord for Num {
    fn cmp(&self, other: &Num) -> Ordering {
        match (self, other) {
            (Num::Small(a, b), Num::Small(c, d)) => (*a as i128 * *d as i128).cmp(&(*c as i128 * *b as i128)),
            _ => self.to_rational().cmp(&other.to_rational()),
        }
    }
}

impl PartialOrd for Num {
    fn partial_cmp(&self, other: &Num) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl PartialEq for Num {
    fn eq(&self, other: &Num) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Num {}
