//! Coefficient fields for formal sums: exact Gaussian rationals and complex
//! doubles. A sum is built over one of them; the type parameter keeps the two
//! regimes apart.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::{Complex, Complex64};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Scalars usable as coefficients and as generator arguments.
pub trait Coefficient:
    Clone
    + fmt::Debug
    + fmt::Display
    + PartialEq
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn zero() -> Self;
    fn one() -> Self;
    fn from_ratio(num: i64, den: i64) -> Self;
    fn is_zero(&self) -> bool;
    fn to_complex(&self) -> Complex64;
    /// A total order used to key generators.
    fn key_cmp(&self, other: &Self) -> Ordering;
    /// Canonical representative, used before keying (clears `-0.0`).
    fn normalized(self) -> Self {
        self
    }
    const EXACT: bool;

    fn from_i64(n: i64) -> Self {
        Self::from_ratio(n, 1)
    }

    fn is_one(&self) -> bool {
        *self == Self::one()
    }
}

impl Coefficient for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }
    fn from_ratio(num: i64, den: i64) -> Self {
        Complex64::new(num as f64 / den as f64, 0.0)
    }
    fn is_zero(&self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }
    fn to_complex(&self) -> Complex64 {
        *self
    }
    fn key_cmp(&self, other: &Self) -> Ordering {
        self.re
            .total_cmp(&other.re)
            .then(self.im.total_cmp(&other.im))
    }
    fn normalized(self) -> Self {
        Complex64::new(self.re + 0.0, self.im + 0.0)
    }
    const EXACT: bool = false;
}

/// An exact complex number with rational real and imaginary parts.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GaussRat(Complex<BigRational>);

fn rat(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

fn rat_to_string(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl GaussRat {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        GaussRat(Complex::new(re, im))
    }

    /// `re_num/re_den + (im_num/im_den) i`.
    pub fn from_parts(re_num: i64, re_den: i64, im_num: i64, im_den: i64) -> Self {
        GaussRat::new(rat(re_num, re_den), rat(im_num, im_den))
    }

    pub fn real(num: i64, den: i64) -> Self {
        GaussRat::from_parts(num, den, 0, 1)
    }

    pub fn re(&self) -> &BigRational {
        &self.0.re
    }

    pub fn im(&self) -> &BigRational {
        &self.0.im
    }

    pub fn is_real(&self) -> bool {
        self.0.im.is_zero()
    }

    /// Real and imaginary parts as strings `"num/den"` (or `"num"`).
    pub fn to_strings(&self) -> [String; 2] {
        [rat_to_string(&self.0.re), rat_to_string(&self.0.im)]
    }

    pub fn parse_parts(re: &str, im: &str) -> Result<Self, String> {
        let p = |s: &str| {
            BigRational::from_str(s.trim()).map_err(|e| format!("bad rational {s:?}: {e}"))
        };
        Ok(GaussRat::new(p(re)?, p(im)?))
    }
}

impl FromStr for GaussRat {
    type Err = String;

    /// Accepts `"a/b"` for a real value or `"a/b,c/d"` for real and imaginary
    /// parts.
    fn from_str(s: &str) -> Result<Self, String> {
        match s.split_once(',') {
            Some((re, im)) => GaussRat::parse_parts(re, im),
            None => GaussRat::parse_parts(s, "0"),
        }
    }
}

impl fmt::Debug for GaussRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for GaussRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [re, im] = self.to_strings();
        if self.0.im.is_zero() {
            write!(f, "{re}")
        } else if self.0.re.is_zero() {
            write!(f, "({im})i")
        } else if self.0.im.is_negative() {
            write!(f, "{re}-({})i", rat_to_string(&-self.0.im.clone()))
        } else {
            write!(f, "{re}+({im})i")
        }
    }
}

impl Serialize for GaussRat {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_strings().serialize(s)
    }
}

impl<'de> Deserialize<'de> for GaussRat {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let [re, im] = <[String; 2]>::deserialize(d)?;
        GaussRat::parse_parts(&re, &im).map_err(serde::de::Error::custom)
    }
}

impl Add for GaussRat {
    type Output = GaussRat;
    fn add(self, rhs: GaussRat) -> GaussRat {
        GaussRat(self.0 + rhs.0)
    }
}

impl Sub for GaussRat {
    type Output = GaussRat;
    fn sub(self, rhs: GaussRat) -> GaussRat {
        GaussRat(self.0 - rhs.0)
    }
}

impl Mul for GaussRat {
    type Output = GaussRat;
    fn mul(self, rhs: GaussRat) -> GaussRat {
        GaussRat(self.0 * rhs.0)
    }
}

impl Div for GaussRat {
    type Output = GaussRat;
    fn div(self, rhs: GaussRat) -> GaussRat {
        assert!(
            !Coefficient::is_zero(&rhs),
            "division by zero Gaussian rational"
        );
        GaussRat(self.0 / rhs.0)
    }
}

impl Neg for GaussRat {
    type Output = GaussRat;
    fn neg(self) -> GaussRat {
        GaussRat(-self.0)
    }
}

impl Coefficient for GaussRat {
    fn zero() -> Self {
        GaussRat(Complex::new(BigRational::zero(), BigRational::zero()))
    }
    fn one() -> Self {
        GaussRat::real(1, 1)
    }
    fn from_ratio(num: i64, den: i64) -> Self {
        GaussRat::real(num, den)
    }
    fn is_zero(&self) -> bool {
        self.0.re.is_zero() && self.0.im.is_zero()
    }
    fn to_complex(&self) -> Complex64 {
        let f = |r: &BigRational| r.to_f64().unwrap_or(f64::NAN);
        Complex64::new(f(&self.0.re), f(&self.0.im))
    }
    /// Lexicographic on (re numerator, re denominator, im numerator, im
    /// denominator) of the reduced fractions.
    fn key_cmp(&self, other: &Self) -> Ordering {
        self.0
            .re
            .numer()
            .cmp(other.0.re.numer())
            .then_with(|| self.0.re.denom().cmp(other.0.re.denom()))
            .then_with(|| self.0.im.numer().cmp(other.0.im.numer()))
            .then_with(|| self.0.im.denom().cmp(other.0.im.denom()))
    }
    const EXACT: bool = true;
}
