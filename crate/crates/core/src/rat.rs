//! Exact rational arithmetic.
//!
//! Every numeric comparison in the engine is performed on `Rat` values.
//! Decimal constants are parsed once into exact fractions and never
//! approximated; floating point appears only in display output.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use crate::EngineError;

/// Arbitrary-precision rational, always reduced with positive denominator.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Rat(BigRational);

impl Rat {
    pub fn zero() -> Self {
        Rat(BigRational::zero())
    }

    pub fn one() -> Self {
        Rat(BigRational::one())
    }

    pub fn from_int<T: Into<i64>>(n: T) -> Self {
        Rat(BigRational::from_integer(BigInt::from(n.into())))
    }

    pub fn from_big(n: BigInt) -> Self {
        Rat(BigRational::from_integer(n))
    }

    pub fn new<T: Into<i64>, U: Into<i64>>(num: T, den: U) -> Self {
        let d = den.into();
        assert!(d != 0, "zero denominator");
        Rat(BigRational::new(BigInt::from(num.into()), BigInt::from(d)))
    }

    pub fn from_big_ratio(num: BigInt, den: BigInt) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        Rat(BigRational::new(num, den))
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn abs(&self) -> Self {
        Rat(self.0.abs())
    }

    pub fn recip(&self) -> Self {
        assert!(!self.is_zero(), "reciprocal of zero");
        Rat(self.0.recip())
    }

    pub fn floor_int(&self) -> BigInt {
        self.0.floor().to_integer()
    }

    pub fn ceil_int(&self) -> BigInt {
        self.0.ceil().to_integer()
    }

    /// `b^e` for integer base and exponent; negative exponents give exact
    /// reciprocals.
    pub fn int_pow(base: u64, exp: i64) -> Self {
        let b = BigInt::from(base);
        let p = b.pow(exp.unsigned_abs() as u32);
        if exp >= 0 {
            Rat::from_big(p)
        } else {
            Rat::from_big_ratio(BigInt::one(), p)
        }
    }

    pub fn pow(&self, exp: i32) -> Self {
        Rat(self.0.pow(exp))
    }

    /// Parses `"85/42"`, `".9795"`, `"2.0002"`, `"-3"` into an exact value.
    pub fn parse(s: &str) -> Result<Self, EngineError> {
        let s = s.trim();
        if let Some((n, d)) = s.split_once('/') {
            let num = BigInt::from_str(n.trim())
                .map_err(|_| EngineError::Parse(format!("bad numerator in `{s}`")))?;
            let den = BigInt::from_str(d.trim())
                .map_err(|_| EngineError::Parse(format!("bad denominator in `{s}`")))?;
            if den.is_zero() {
                return Err(EngineError::Parse(format!("zero denominator in `{s}`")));
            }
            return Ok(Rat::from_big_ratio(num, den));
        }
        let (sign, body) = match s.strip_prefix('-') {
            Some(rest) => (-1i32, rest),
            None => (1, s.strip_prefix('+').unwrap_or(s)),
        };
        let (int_part, frac_part) = match body.split_once('.') {
            Some((i, f)) => (i, f),
            None => (body, ""),
        };
        if int_part.is_empty() && frac_part.is_empty() {
            return Err(EngineError::Parse(format!("empty number `{s}`")));
        }
        if !int_part.chars().all(|c| c.is_ascii_digit())
            || !frac_part.chars().all(|c| c.is_ascii_digit())
        {
            return Err(EngineError::Parse(format!("bad decimal `{s}`")));
        }
        let digits = format!("{int_part}{frac_part}");
        let num = if digits.is_empty() {
            BigInt::zero()
        } else {
            BigInt::from_str(&digits).unwrap()
        };
        let den = BigInt::from(10u32).pow(frac_part.len() as u32);
        let mut r = Rat::from_big_ratio(num, den);
        if sign < 0 {
            r = -r;
        }
        Ok(r)
    }

    /// Decimal rendering used for report annotation only.
    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }
}

impl fmt::Display for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident, $op:tt) => {
        impl $trait for Rat {
            type Output = Rat;
            fn $method(self, rhs: Rat) -> Rat {
                Rat(self.0 $op rhs.0)
            }
        }
        impl<'a> $trait<&'a Rat> for Rat {
            type Output = Rat;
            fn $method(self, rhs: &'a Rat) -> Rat {
                Rat(self.0 $op &rhs.0)
            }
        }
        impl<'a, 'b> $trait<&'b Rat> for &'a Rat {
            type Output = Rat;
            fn $method(self, rhs: &'b Rat) -> Rat {
                Rat(&self.0 $op &rhs.0)
            }
        }
    };
}

binop!(Add, add, +);
binop!(Sub, sub, -);
binop!(Mul, mul, *);

impl Div for Rat {
    type Output = Rat;
    fn div(self, rhs: Rat) -> Rat {
        assert!(!rhs.is_zero(), "division by zero");
        Rat(self.0 / rhs.0)
    }
}

impl<'a, 'b> Div<&'b Rat> for &'a Rat {
    type Output = Rat;
    fn div(self, rhs: &'b Rat) -> Rat {
        assert!(!rhs.is_zero(), "division by zero");
        Rat(&self.0 / &rhs.0)
    }
}

impl Neg for Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        Rat(-self.0)
    }
}

impl AddAssign<&Rat> for Rat {
    fn add_assign(&mut self, rhs: &Rat) {
        self.0 += &rhs.0;
    }
}

impl SubAssign<&Rat> for Rat {
    fn sub_assign(&mut self, rhs: &Rat) {
        self.0 -= &rhs.0;
    }
}

impl MulAssign<&Rat> for Rat {
    fn mul_assign(&mut self, rhs: &Rat) {
        self.0 *= &rhs.0;
    }
}

impl PartialEq<i64> for Rat {
    fn eq(&self, other: &i64) -> bool {
        *self == Rat::from_int(*other)
    }
}

impl PartialOrd<i64> for Rat {
    fn partial_cmp(&self, other: &i64) -> Option<Ordering> {
        self.partial_cmp(&Rat::from_int(*other))
    }
}

/// Global comparison constants of the verification run.
///
/// The defaults encode: Grassmann slack 1/100, genus defect 2(g-1)/N bounded
/// by 2/10^4, minimum degree 10^4 and maximum admissible genus 2.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Thresholds {
    pub eps: Rat,
    pub eps0: Rat,
    pub degree_min: u64,
    pub genus_max: u64,
}

impl Default for Thresholds {
    fn default() -> Self {
        Thresholds {
            eps: Rat::new(1, 100),
            eps0: Rat::new(2, 10_000),
            degree_min: 10_000,
            genus_max: 2,
        }
    }
}

impl Thresholds {
    pub fn with_degree_min(degree_min: u64) -> Self {
        let genus_max = 2u64;
        Thresholds {
            eps: Rat::new(1, 100),
            eps0: Rat::from_int(2 * (genus_max as i64 - 1)) / Rat::from_int(degree_min as i64),
            degree_min,
            genus_max,
        }
    }

    pub fn validate(&self) -> Result<(), EngineError> {
        if !self.eps.is_positive() || !self.eps0.is_positive() || self.degree_min == 0 {
            return Err(EngineError::Domain(
                "thresholds must be strictly positive".into(),
            ));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decimal_parsing_is_exact() {
        assert_eq!(Rat::parse(".9795").unwrap(), Rat::new(9795, 10_000));
        assert_eq!(Rat::parse("2.0002").unwrap(), Rat::new(20_002, 10_000));
        assert_eq!(Rat::parse(".04").unwrap(), Rat::new(1, 25));
        assert_eq!(Rat::parse("1/100").unwrap(), Rat::new(1, 100));
        assert_eq!(Rat::parse("-0.5").unwrap(), Rat::new(-1, 2));
        assert_eq!(Rat::parse("4.0004").unwrap(), Rat::new(40_004, 10_000));
        assert!(Rat::parse("1/0").is_err());
        assert!(Rat::parse("abc").is_err());
    }

    #[test]
    fn comparison_agrees_with_cross_multiplication() {
        let a = Rat::new(85, 42);
        let b = Rat::parse("2.0239").unwrap();
        // 85 * 10000 vs 42 * 20239
        assert!(a < b);
        assert!(a > Rat::parse("2.0238").unwrap());
    }

    #[test]
    fn int_pow_negative_exponent() {
        assert_eq!(Rat::int_pow(23, -2), Rat::new(1, 529));
        assert_eq!(Rat::int_pow(2, 14), Rat::from_int(16_384));
    }

    #[test]
    fn default_thresholds_consistent() {
        let th = Thresholds::default();
        let derived = Rat::from_int(2 * (th.genus_max as i64 - 1))
            / Rat::from_int(th.degree_min as i64);
        assert_eq!(th.eps0, derived);
        th.validate().unwrap();
    }
}
