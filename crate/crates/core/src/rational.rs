//! Exact rational scalars and small vector helpers.
//!
//! Every scalar in this crate is a [`Rational`]: an arbitrary-precision
//! fraction kept in lowest terms with a positive denominator. Both invariants
//! are maintained by `num_rational::BigRational` on every operation.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::Error;

/// Arbitrary-precision rational, lowest terms, positive denominator.
pub type Rational = num_rational::BigRational;

/// `n/d` as a [`Rational`]. Panics if `d == 0`; intended for literals.
pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// `n/1` as a [`Rational`].
pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// A zero vector of the given length.
pub fn zeros(len: usize) -> Vec<Rational> {
    vec![Rational::zero(); len]
}

/// Exact inner product. Lengths must already agree.
pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Parses the instance-file rational grammar: an optional sign, an integer,
/// and either nothing, `/` followed by a positive integer, or a finite
/// decimal fraction part (converted exactly).
pub fn parse_rational(s: &str) -> Result<Rational, Error> {
    let err = || Error::InvalidRational(s.to_string());
    let (sign, digits) = match s.strip_prefix('-') {
        Some(rest) => (-1, rest),
        None => (1, s.strip_prefix('+').unwrap_or(s)),
    };
    let all_digits = |t: &str| !t.is_empty() && t.bytes().all(|b| b.is_ascii_digit());

    let magnitude = if let Some((num, den)) = digits.split_once('/') {
        if !all_digits(num) || !all_digits(den) {
            return Err(err());
        }
        let den: BigInt = den.parse().map_err(|_| err())?;
        if den.is_zero() {
            return Err(err());
        }
        Rational::new(num.parse().map_err(|_| err())?, den)
    } else if let Some((whole, frac)) = digits.split_once('.') {
        if !all_digits(whole) || !all_digits(frac) {
            return Err(err());
        }
        let scale = BigInt::from(10u8).pow(frac.len() as u32);
        let units: BigInt = whole.parse().map_err(|_| err())?;
        let frac: BigInt = frac.parse().map_err(|_| err())?;
        Rational::new(units * &scale + frac, scale)
    } else {
        if !all_digits(digits) {
            return Err(err());
        }
        Rational::from_integer(digits.parse().map_err(|_| err())?)
    };
    Ok(if sign < 0 { -magnitude } else { magnitude })
}

/// Renders as a finite decimal when the denominator divides a power of ten,
/// falling back to `p/q`. Integers print without a decimal point.
pub fn format_decimal(r: &Rational) -> String {
    let den = r.denom().magnitude().clone();
    if den.is_one() {
        return r.numer().to_string();
    }
    let strip = |mut n: BigUint, p: u32| -> (BigUint, u32) {
        let p = BigUint::from(p);
        let mut count = 0;
        while (&n % &p).is_zero() {
            n /= &p;
            count += 1;
        }
        (n, count)
    };
    let (rest, twos) = strip(den, 2);
    let (rest, fives) = strip(rest, 5);
    if !rest.is_one() {
        return r.to_string();
    }
    let digits = twos.max(fives);
    let scaled = (r * Rational::from_integer(BigInt::from(10u8).pow(digits))).to_integer();
    let mag = scaled.magnitude().to_string();
    let mag = format!("{:0>width$}", mag, width = digits as usize + 1);
    let split = mag.len() - digits as usize;
    let sign = if r.is_negative() { "-" } else { "" };
    format!("{sign}{}.{}", &mag[..split], &mag[split..])
}

/// Scales a vector by the least common multiple of its denominators,
/// yielding the smallest positive multiple with integer entries.
pub fn clear_denominators(v: &[Rational]) -> Vec<Rational> {
    let lcm = v
        .iter()
        .fold(BigInt::one(), |acc, r| acc.lcm(r.denom()));
    let lcm = Rational::from_integer(lcm);
    v.iter().map(|r| r * &lcm).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_integers_fractions_decimals() {
        assert_eq!(parse_rational("-4").unwrap(), int(-4));
        assert_eq!(parse_rational("3/2").unwrap(), ratio(3, 2));
        assert_eq!(parse_rational("-3/2").unwrap(), ratio(-3, 2));
        assert_eq!(parse_rational("0.25").unwrap(), ratio(1, 4));
        assert_eq!(parse_rational("-0.5").unwrap(), ratio(-1, 2));
        assert_eq!(parse_rational("+7").unwrap(), int(7));
        assert_eq!(parse_rational("10.10").unwrap(), ratio(101, 10));
    }

    #[test]
    fn parse_rejects_garbage() {
        for bad in ["", "1/0", "1/-2", "--3", "1.2.3", "a", "1/", "/2", ".5", "1.", "1 /2"] {
            assert!(parse_rational(bad).is_err(), "accepted {bad:?}");
        }
    }

    #[test]
    fn decimal_rendering() {
        assert_eq!(format_decimal(&ratio(1, 4)), "0.25");
        assert_eq!(format_decimal(&ratio(-1, 2)), "-0.5");
        assert_eq!(format_decimal(&int(3)), "3");
        assert_eq!(format_decimal(&int(-17)), "-17");
        assert_eq!(format_decimal(&ratio(1, 3)), "1/3");
        assert_eq!(format_decimal(&ratio(7, 20)), "0.35");
        assert_eq!(format_decimal(&ratio(-101, 10)), "-10.1");
    }

    #[test]
    fn clear_denominators_gives_integer_vector() {
        let v = vec![ratio(1, 2), ratio(-2, 3), int(1)];
        let cleared = clear_denominators(&v);
        assert_eq!(cleared, vec![int(3), int(-4), int(6)]);
    }

    #[test]
    fn parse_roundtrips_display() {
        for s in ["-4", "3/2", "0", "17", "-9/8"] {
            let r = parse_rational(s).unwrap();
            assert_eq!(r.to_string(), s);
        }
    }
}
