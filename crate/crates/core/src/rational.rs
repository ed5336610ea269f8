//! Arbitrary-precision rationals and the helpers the rest of the crate needs
//! on top of [`num_rational::BigRational`].

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Exact rational number, always reduced with a positive denominator.
pub type Rational = num_rational::BigRational;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

pub fn to_f64(q: &Rational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

/// Renders as `"p/q"`, including integers (`"3/1"`).
pub fn format(q: &Rational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

/// Accepts `"p/q"`, `"p"`, and finite decimals such as `"-0.125"`.
pub fn parse(s: &str) -> Result<Rational, String> {
    let s = s.trim();
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| format!("bad numerator in {s:?}"))?;
        let q: BigInt = q.trim().parse().map_err(|_| format!("bad denominator in {s:?}"))?;
        if q.is_zero() {
            return Err(format!("zero denominator in {s:?}"));
        }
        return Ok(Rational::new(p, q));
    }
    if let Some((whole, frac)) = s.split_once('.') {
        let negative = whole.starts_with('-');
        let digits = format!("{}{}", whole.trim_start_matches(['-', '+']), frac);
        let n: BigInt = digits.parse().map_err(|_| format!("bad decimal {s:?}"))?;
        let d = num_traits::pow(BigInt::from(10), frac.len());
        let q = Rational::new(n, d);
        return Ok(if negative { -q } else { q });
    }
    s.parse::<BigInt>()
        .map(Rational::from_integer)
        .map_err(|_| format!("bad rational {s:?}"))
}

/// Rational brackets `lo <= sqrt(q) <= hi` with `hi - lo <= 2^-bits`.
pub fn sqrt_bounds(q: &Rational, bits: u32) -> (Rational, Rational) {
    assert!(!q.is_negative(), "sqrt of negative rational");
    if q.is_zero() {
        return (Rational::zero(), Rational::zero());
    }
    let scale = BigUint::one() << bits;
    let p = q.numer().magnitude();
    let d = q.denom().magnitude();
    // sqrt(p/d) = sqrt(p*d) / d; scale by 2^bits before taking the integer root.
    let radicand = p * d * &scale * &scale;
    let root = radicand.sqrt();
    let denom = BigInt::from_biguint(Sign::Plus, d * &scale);
    let lo_num = BigInt::from_biguint(Sign::Plus, root.clone());
    let exact = &root * &root == radicand;
    let lo = Rational::new(lo_num.clone(), denom.clone());
    let hi = if exact { lo.clone() } else { Rational::new(lo_num + 1, denom) };
    (lo, hi)
}

/// Smallest power-of-two-denominator upper bound on `sqrt(q)` within `2^-bits`.
pub fn sqrt_upper(q: &Rational, bits: u32) -> Rational {
    sqrt_bounds(q, bits).1
}

pub fn sqrt_lower(q: &Rational, bits: u32) -> Rational {
    sqrt_bounds(q, bits).0
}

/// Least common multiple of the denominators.
pub fn denominator_lcm<'a>(values: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    values
        .into_iter()
        .fold(BigInt::one(), |acc, q| acc.lcm(q.denom()))
}

/// Greatest common divisor of the numerators (zero if all are zero).
pub fn numerator_gcd<'a>(values: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    values
        .into_iter()
        .fold(BigInt::zero(), |acc, q| acc.gcd(q.numer()))
}

/// Serde adapter for a single rational as a `"p/q"` string.
pub mod serde_rational {
    use super::Rational;
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(q: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&super::format(q))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let raw = RawRational::deserialize(d)?;
        raw.into_rational().map_err(D::Error::custom)
    }

    /// Integers are tolerated on input so hand-written scenarios can say `1`.
    #[derive(Deserialize)]
    #[serde(untagged)]
    pub(crate) enum RawRational {
        Text(String),
        Int(i64),
    }

    impl RawRational {
        pub(crate) fn into_rational(self) -> Result<Rational, String> {
            match self {
                RawRational::Text(s) => super::parse(&s),
                RawRational::Int(n) => Ok(super::int(n)),
            }
        }
    }
}

/// Serde adapter for `Option<Rational>`.
pub mod serde_rational_opt {
    use super::Rational;
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(q: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
        match q {
            Some(q) => s.serialize_some(&super::format(q)),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Rational>, D::Error> {
        let raw = Option::<super::serde_rational::RawRational>::deserialize(d)?;
        raw.map(|r| r.into_rational().map_err(D::Error::custom))
            .transpose()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_forms() {
        assert_eq!(parse("3/6").unwrap(), ratio(1, 2));
        assert_eq!(parse("-4").unwrap(), int(-4));
        assert_eq!(parse("-0.125").unwrap(), ratio(-1, 8));
        assert_eq!(parse("2/-4").unwrap(), ratio(-1, 2));
        assert!(parse("1/0").is_err());
        assert!(parse("x").is_err());
    }

    #[test]
    fn format_always_has_denominator() {
        assert_eq!(format(&int(3)), "3/1");
        assert_eq!(format(&ratio(-2, 4)), "-1/2");
    }

    #[test]
    fn sqrt_brackets() {
        let two = int(2);
        let (lo, hi) = sqrt_bounds(&two, 30);
        assert!(&lo * &lo <= two && two <= &hi * &hi);
        assert!(&hi - &lo <= ratio(1, 1 << 30));
        let (lo, hi) = sqrt_bounds(&ratio(9, 4), 10);
        assert_eq!(lo, ratio(3, 2));
        assert_eq!(hi, ratio(3, 2));
    }
}
