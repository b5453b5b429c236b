//! Exact rational arithmetic used throughout the crate.
//!
//! Every polytope, inequality and LP computation in this crate runs on
//! arbitrary-precision rationals; floating point only enters through the
//! quantum generator and is converted to an exact value immediately.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::str::FromStr;

pub use num_traits::Signed;

/// Arbitrary-precision rational, always reduced, denominator always positive.
pub type Rational = BigRational;

/// Shorthand for a small rational `n/d`.
///
/// Panics if `d == 0`.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Shorthand for an integer rational.
pub fn rat_int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Errors from parsing the `"n/d"` wire format.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RationalParseError {
    #[error("empty rational literal")]
    Empty,
    #[error("invalid integer part in rational literal: {0:?}")]
    BadNumerator(String),
    #[error("invalid denominator in rational literal: {0:?}")]
    BadDenominator(String),
    #[error("zero denominator in rational literal")]
    ZeroDenominator,
    #[error("rational literal has more than one '/': {0:?}")]
    ExtraSlash(String),
}

/// Parses the wire format used in all JSON interfaces: a decimal string
/// `"n/d"` (with `d > 0` after sign normalisation) or a plain integer `"n"`.
///
/// No whitespace or exponent notation is accepted; that keeps serialised
/// output canonical and round-trips bit-exact.
pub fn parse_rational(s: &str) -> Result<Rational, RationalParseError> {
    if s.is_empty() {
        return Err(RationalParseError::Empty);
    }
    let mut parts = s.split('/');
    let num_str = parts.next().unwrap_or("");
    let den_str = parts.next();
    if parts.next().is_some() {
        return Err(RationalParseError::ExtraSlash(s.to_owned()));
    }
    let numer = parse_decimal_int(num_str)
        .ok_or_else(|| RationalParseError::BadNumerator(num_str.to_owned()))?;
    let denom = match den_str {
        None => BigInt::one(),
        Some(d) => {
            parse_decimal_int(d).ok_or_else(|| RationalParseError::BadDenominator(d.to_owned()))?
        }
    };
    if denom.is_zero() {
        return Err(RationalParseError::ZeroDenominator);
    }
    Ok(Rational::new(numer, denom))
}

/// Strict decimal integer: optional leading `-`, then ASCII digits only.
///
/// `BigInt::from_str` accepts a leading `+`, which would break canonical
/// round-trips, so it is rejected here.
fn parse_decimal_int(s: &str) -> Option<BigInt> {
    let digits = s.strip_prefix('-').unwrap_or(s);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    BigInt::from_str(s).ok()
}

/// Formats a rational in the canonical wire format `"n/d"`.
///
/// The denominator is always printed (`1` becomes `"1/1"`), so output is
/// unambiguous and byte-stable.
pub fn format_rational(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Exact rational value of a finite `f64` (its binary expansion, no rounding).
pub fn rational_from_f64(x: f64) -> Option<Rational> {
    Rational::from_float(x)
}

/// Exact running sum of rationals over a single shared denominator.
///
/// `Ratio` addition multiplies denominators and re-reduces on every step;
/// for the long dot products in the evaluators that costs a wide gcd per
/// term. This accumulator rescales to the least common denominator instead
/// and reduces once at the end. The result is identical to naive summation.
#[derive(Debug, Clone)]
pub struct RationalSum {
    num: BigInt,
    den: BigInt,
}

impl Default for RationalSum {
    fn default() -> Self {
        Self::new()
    }
}

impl RationalSum {
    pub fn new() -> Self {
        RationalSum { num: BigInt::zero(), den: BigInt::one() }
    }

    /// Adds the raw fraction `num/den` (not necessarily reduced, `den > 0`).
    fn add_raw(&mut self, num: &BigInt, den: &BigInt) {
        if num.is_zero() {
            return;
        }
        if self.den == *den {
            self.num += num;
            return;
        }
        use num_integer::Integer;
        let g = self.den.gcd(den);
        let self_scale = den / &g;
        let other_scale = &self.den / &g;
        self.num *= &self_scale;
        self.den *= &self_scale;
        self.num += num * &other_scale;
    }

    pub fn add(&mut self, value: &Rational) {
        self.add_raw(value.numer(), value.denom());
    }

    pub fn sub(&mut self, value: &Rational) {
        let negated = -value.numer();
        self.add_raw(&negated, value.denom());
    }

    /// Adds `coeff * value` without materialising the product as a reduced
    /// rational.
    pub fn add_mul(&mut self, coeff: &Rational, value: &Rational) {
        if coeff.is_zero() || value.is_zero() {
            return;
        }
        let num = coeff.numer() * value.numer();
        let den = coeff.denom() * value.denom();
        self.add_raw(&num, &den);
    }

    /// Adds `sign * value` for an integer sign/coefficient.
    pub fn add_signed(&mut self, coeff: i64, value: &Rational) {
        match coeff {
            0 => {}
            1 => self.add(value),
            -1 => self.sub(value),
            c => {
                let num = value.numer() * BigInt::from(c);
                self.add_raw(&num, value.denom());
            }
        }
    }

    /// The reduced value of the sum.
    pub fn finish(self) -> Rational {
        Rational::new(self.num, self.den)
    }
}

/// Best rational approximation to `value` with denominator at most
/// `max_denominator`, via the continued-fraction convergent/semiconvergent
/// construction. The result is the closest such rational; ties resolve to
/// the one reached first along the Stern–Brocot path.
pub fn limit_denominator(value: &Rational, max_denominator: &BigInt) -> Rational {
    assert!(max_denominator > &BigInt::zero(), "max_denominator must be positive");
    if value.denom() <= max_denominator {
        return value.clone();
    }
    // Continued fraction expansion of |value|; track the last two convergents.
    let negative = value.is_negative();
    let target = value.abs();
    let mut num = value.numer().abs();
    let mut den = value.denom().clone();

    let (mut p0, mut q0) = (BigInt::zero(), BigInt::one());
    let (mut p1, mut q1) = (BigInt::one(), BigInt::zero());
    loop {
        let a = &num / &den;
        let q2 = &q0 + &a * &q1;
        if &q2 > max_denominator {
            // Semiconvergent with the largest usable partial quotient.
            let k = (max_denominator - &q0) / &q1;
            let semi_p = &p0 + &k * &p1;
            let semi_q = &q0 + &k * &q1;
            let best = Rational::new(p1.clone(), q1.clone());
            let semi = Rational::new(semi_p, semi_q);
            let chosen = if (&semi - &target).abs() <= (&best - &target).abs() {
                semi
            } else {
                best
            };
            return if negative { -chosen } else { chosen };
        }
        let p2 = &p0 + &a * &p1;
        let rem = &num - &a * &den;
        p0 = std::mem::replace(&mut p1, p2);
        q0 = std::mem::replace(&mut q1, q2);
        if rem.is_zero() {
            let exact = Rational::new(p1.clone(), q1.clone());
            return if negative { -exact } else { exact };
        }
        num = std::mem::replace(&mut den, rem);
    }
}
