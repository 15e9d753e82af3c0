//! Exact complex scalars with arbitrary-precision rational parts.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

/// `n/d` as a [`Rational`]. Panics on `d == 0`.
pub fn rat(n: i64, d: i64) -> Rational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn rat_to_f64(q: &Rational) -> f64 {
    q.to_f64().unwrap_or_else(|| {
        // ratio of huge integers: scale down before converting
        let shift = q.numer().bits().max(q.denom().bits()).saturating_sub(900);
        let n = (q.numer() >> shift).to_f64().unwrap_or(f64::NAN);
        let d = (q.denom() >> shift).to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

/// Integer value of `q` if it is an integer that fits an `i64`.
pub fn rat_to_i64(q: &Rational) -> Option<i64> {
    if q.is_integer() {
        q.numer().to_i64()
    } else {
        None
    }
}

/// Best rational approximation of `x` with `|x - p/q| <= tol`, via continued fractions.
pub fn rationalize(x: f64, tol: f64) -> Result<Rational> {
    if !x.is_finite() {
        return Err(Error::BadParameter(format!("cannot rationalize {x}")));
    }
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::BadParameter(format!("rationalize tolerance must be positive, got {tol}")));
    }
    let target = BigRational::from_float(x)
        .ok_or_else(|| Error::BadParameter(format!("cannot rationalize {x}")))?;
    let (mut h0, mut h1) = (BigInt::zero(), BigInt::one());
    let (mut k0, mut k1) = (BigInt::one(), BigInt::zero());
    let mut rest = target.clone();
    for _ in 0..128 {
        let a = rest.floor().to_integer();
        let h2 = &a * &h1 + &h0;
        let k2 = &a * &k1 + &k0;
        h0 = std::mem::replace(&mut h1, h2);
        k0 = std::mem::replace(&mut k1, k2);
        let approx = BigRational::new(h1.clone(), k1.clone());
        if rat_to_f64(&(&approx - &target).abs()) <= tol {
            return Ok(approx);
        }
        let frac = &rest - BigRational::from_integer(a);
        if frac.is_zero() {
            return Ok(approx);
        }
        rest = frac.recip();
    }
    Ok(target)
}

/// Largest rational with at most `bits` fractional bits that is `<= sqrt(q)`.
/// Exact when `q` is the square of a rational. `q` must be nonnegative.
pub fn sqrt_lower(q: &Rational, bits: u32) -> Rational {
    assert!(!q.is_negative(), "sqrt_lower of a negative rational");
    let (n, d) = (q.numer(), q.denom());
    let (rn, rd) = (n.sqrt(), d.sqrt());
    if &rn * &rn == *n && &rd * &rd == *d {
        return BigRational::new(rn, rd);
    }
    // sqrt(n/d) = sqrt(n*d)/d
    let scale = BigInt::one() << bits;
    let root = (n * d * &scale * &scale).sqrt();
    BigRational::new(root, d * scale)
}

/// Complex number with exact rational real and imaginary parts.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct ComplexRational {
    pub re: Rational,
    pub im: Rational,
}

impl ComplexRational {
    pub fn new(re: Rational, im: Rational) -> Self {
        Self { re, im }
    }

    pub fn real(re: Rational) -> Self {
        Self { re, im: Rational::zero() }
    }

    pub fn from_ints(re: i64, im: i64) -> Self {
        Self::new(int(re), int(im))
    }

    pub fn i() -> Self {
        Self::new(Rational::zero(), Rational::one())
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::real(Rational::one())
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        Self::new(self.re.clone(), -&self.im)
    }

    pub fn norm_sqr(&self) -> Rational {
        &self.re * &self.re + &self.im * &self.im
    }

    /// Multiplication by the imaginary unit.
    pub fn mul_i(&self) -> Self {
        Self::new(-&self.im, self.re.clone())
    }

    pub fn scale(&self, s: &Rational) -> Self {
        Self::new(&self.re * s, &self.im * s)
    }

    pub fn recip(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let n = self.norm_sqr();
        Some(Self::new(&self.re / &n, -&self.im / &n))
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    pub fn to_c64(&self) -> Complex64 {
        Complex64::new(rat_to_f64(&self.re), rat_to_f64(&self.im))
    }

    pub fn from_c64(z: Complex64, tol: f64) -> Result<Self> {
        Ok(Self::new(rationalize(z.re, tol)?, rationalize(z.im, tol)?))
    }
}

impl From<Rational> for ComplexRational {
    fn from(re: Rational) -> Self {
        Self::real(re)
    }
}

impl From<i64> for ComplexRational {
    fn from(n: i64) -> Self {
        Self::real(int(n))
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $body:expr) => {
        impl $trait<&ComplexRational> for &ComplexRational {
            type Output = ComplexRational;
            fn $method(self, rhs: &ComplexRational) -> ComplexRational {
                let f: fn(&ComplexRational, &ComplexRational) -> ComplexRational = $body;
                f(self, rhs)
            }
        }
        impl $trait<ComplexRational> for ComplexRational {
            type Output = ComplexRational;
            fn $method(self, rhs: ComplexRational) -> ComplexRational {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&ComplexRational> for ComplexRational {
            type Output = ComplexRational;
            fn $method(self, rhs: &ComplexRational) -> ComplexRational {
                (&self).$method(rhs)
            }
        }
    };
}

forward_binop!(Add, add, |a, b| ComplexRational::new(&a.re + &b.re, &a.im + &b.im));
forward_binop!(Sub, sub, |a, b| ComplexRational::new(&a.re - &b.re, &a.im - &b.im));
forward_binop!(Mul, mul, |a, b| ComplexRational::new(
    &a.re * &b.re - &a.im * &b.im,
    &a.re * &b.im + &a.im * &b.re
));
forward_binop!(Div, div, |a, b| {
    let inv = b.recip().expect("division by zero ComplexRational");
    a * &inv
});

impl Neg for ComplexRational {
    type Output = ComplexRational;
    fn neg(self) -> ComplexRational {
        ComplexRational::new(-self.re, -self.im)
    }
}

impl Neg for &ComplexRational {
    type Output = ComplexRational;
    fn neg(self) -> ComplexRational {
        ComplexRational::new(-&self.re, -&self.im)
    }
}

fn fmt_rat(q: &Rational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Formats as `a`, `bi` or `(a+bi)`; the output is accepted by the operator parser.
impl serde::Serialize for ComplexRational {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl fmt::Display for ComplexRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.re.is_zero(), self.im.is_zero()) {
            (_, true) => write!(f, "{}", fmt_rat(&self.re)),
            (true, false) => write!(f, "{}i", fmt_rat(&self.im)),
            (false, false) => {
                let sign = if self.im.is_negative() { '-' } else { '+' };
                write!(f, "({}{}{}i)", fmt_rat(&self.re), sign, fmt_rat(&self.im.abs()))
            }
        }
    }
}

/// Parses a plain rational literal: `n`, `-n`, `n/d`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::BadParameter(format!("not a rational literal: `{s}`"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n = BigInt::from_str(n.trim()).map_err(|_| bad())?;
            let d = BigInt::from_str(d.trim()).map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(n, d))
        }
        None => Ok(BigRational::from_integer(BigInt::from_str(s).map_err(|_| bad())?)),
    }
}

/// `true` iff `q` is an integer.
pub fn is_integer(q: &Rational) -> bool {
    q.denom().is_one()
}

/// Distance from `q` to the nearest integer together with that integer.
pub fn nearest_integer(q: &Rational) -> (BigInt, Rational) {
    let fl = q.floor().to_integer();
    let lo = q - BigRational::from_integer(fl.clone());
    let hi = Rational::one() - &lo;
    if lo <= hi {
        (fl, lo)
    } else {
        (fl + 1, hi)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_is_exact() {
        let a = ComplexRational::new(rat(1, 2), rat(1, 3));
        let b = ComplexRational::new(rat(-2, 5), rat(3, 7));
        let q = &(&a * &b) / &b;
        assert_eq!(q, a);
        assert_eq!(ComplexRational::i().pow(2), ComplexRational::from(-1));
        assert_eq!(a.mul_i(), &a * &ComplexRational::i());
    }

    #[test]
    fn display_forms() {
        assert_eq!(ComplexRational::from_ints(3, 0).to_string(), "3");
        assert_eq!(ComplexRational::new(int(0), rat(3, 2)).to_string(), "3/2i");
        assert_eq!(ComplexRational::new(int(1), rat(-1, 2)).to_string(), "(1-1/2i)");
    }

    #[test]
    fn rationalize_recovers_simple_fractions() {
        assert_eq!(rationalize(0.5, 1e-12).unwrap(), rat(1, 2));
        assert_eq!(rationalize(-1.0 / 3.0, 1e-12).unwrap(), rat(-1, 3));
        assert_eq!(rationalize(2.857, 1e-3).unwrap(), rat(20, 7));
        assert!(rationalize(f64::NAN, 1e-3).is_err());
    }

    #[test]
    fn sqrt_lower_bounds() {
        assert_eq!(sqrt_lower(&rat(1, 4), 30), rat(1, 2));
        let r = sqrt_lower(&int(2), 30);
        assert!(&r * &r <= int(2));
        assert!((rat_to_f64(&r) - 2f64.sqrt()).abs() < 1e-8);
    }

    #[test]
    fn nearest_integer_ties_down() {
        assert_eq!(nearest_integer(&rat(1, 2)), (BigInt::from(0), rat(1, 2)));
        assert_eq!(nearest_integer(&rat(-7, 4)), (BigInt::from(-2), rat(1, 4)));
    }

    #[test]
    fn parse_rational_literals() {
        assert_eq!(parse_rational("-3/6").unwrap(), rat(-1, 2));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }
}
