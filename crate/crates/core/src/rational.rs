//! Exact rational numbers used by costs and bounds.

use num::{BigInt, BigRational, One, Signed, Zero};

pub type Rational = BigRational;

pub fn ratio(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn int(value: i64) -> Rational {
    Rational::from_integer(BigInt::from(value))
}

/// `"5/2"`, `"3"`, `"-1/4"`.
pub fn format(value: &Rational) -> String {
    if value.denom().is_one() {
        value.numer().to_string()
    } else {
        format!("{}/{}", value.numer(), value.denom())
    }
}

/// Parses `"a"` or `"a/b"`.
pub fn parse(text: &str) -> Option<Rational> {
    let text = text.trim();
    match text.split_once('/') {
        Some((a, b)) => {
            let a: BigInt = a.trim().parse().ok()?;
            let b: BigInt = b.trim().parse().ok()?;
            if b.is_zero() {
                return None;
            }
            Some(Rational::new(a, b))
        }
        None => text.parse::<BigInt>().ok().map(Rational::from_integer),
    }
}

/// Decimal rendering for human-readable tables.
pub fn approx(value: &Rational) -> f64 {
    let n: f64 = value.numer().to_string().parse().unwrap_or(f64::NAN);
    let d: f64 = value.denom().to_string().parse().unwrap_or(f64::NAN);
    n / d
}

pub fn is_nonnegative(value: &Rational) -> bool {
    !value.is_negative()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn format_and_parse_agree() {
        for (a, b) in [(5, 2), (6, 2), (-1, 4), (0, 7)] {
            let r = ratio(a, b);
            assert_eq!(parse(&format(&r)), Some(r));
        }
        assert_eq!(format(&ratio(6, 2)), "3");
        assert_eq!(parse("1/0"), None);
    }
}
