//! Exact rational scalars and their text form (`p/q` or `p`).

use std::str::FromStr;

use num::{BigInt, BigRational, One, Signed, Zero};

pub type Rational = BigRational;

pub fn rat(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn int(value: i64) -> Rational {
    Rational::from_integer(BigInt::from(value))
}

/// Parses `p/q` or `p`. The denominator must be nonzero.
pub fn parse_rational(text: &str) -> Option<Rational> {
    let text = text.trim();
    match text.split_once('/') {
        Some((p, q)) => {
            let p = BigInt::from_str(p.trim()).ok()?;
            let q = BigInt::from_str(q.trim()).ok()?;
            if q.is_zero() {
                None
            } else {
                Some(Rational::new(p, q))
            }
        }
        None => BigInt::from_str(text).ok().map(Rational::from_integer),
    }
}

/// `p/q` in lowest terms, or `p` when the denominator is one.
pub fn format_rational(value: &Rational) -> String {
    if value.denom().is_one() {
        value.numer().to_string()
    } else {
        format!("{}/{}", value.numer(), value.denom())
    }
}

pub fn format_vector(values: &[Rational]) -> String {
    values.iter().map(format_rational).collect::<Vec<_>>().join(" ")
}

pub fn sum(values: &[Rational]) -> Rational {
    values.iter().fold(Rational::zero(), |acc, v| acc + v)
}

pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).fold(Rational::zero(), |acc, (x, y)| acc + x * y)
}

pub fn is_nonnegative(values: &[Rational]) -> bool {
    values.iter().all(|v| !v.is_negative())
}

/// Least common multiple of the denominators.
pub fn common_denominator<'a>(values: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    use num::Integer;
    values
        .into_iter()
        .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fractions_and_integers() {
        assert_eq!(parse_rational("2/4"), Some(rat(1, 2)));
        assert_eq!(parse_rational("-3"), Some(int(-3)));
        assert_eq!(parse_rational(" 6/-4 "), Some(rat(-3, 2)));
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(parse_rational("x"), None);
        assert_eq!(parse_rational("1.5"), None);
    }

    #[test]
    fn formats_lowest_terms() {
        assert_eq!(format_rational(&rat(4, 6)), "2/3");
        assert_eq!(format_rational(&rat(-4, 2)), "-2");
        assert_eq!(format_vector(&[rat(1, 3), rat(2, 3), int(0)]), "1/3 2/3 0");
    }

    #[test]
    fn lcm_of_denominators() {
        let v = [rat(1, 4), rat(5, 6), int(3)];
        assert_eq!(common_denominator(&v), BigInt::from(12));
    }
}
