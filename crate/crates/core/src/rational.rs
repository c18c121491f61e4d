//! Helpers for exact rationals: `p/q` string serialization and reduction mod 2.

use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Deserializer, Serializer};

use crate::Rational;

pub fn to_string(x: &Rational) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn parse(s: &str) -> Option<Rational> {
    let s = s.trim().replace('−', "-");
    match s.split_once('/') {
        Some((p, q)) => {
            let p: i64 = p.trim().parse().ok()?;
            let q: i64 = q.trim().parse().ok()?;
            (q != 0).then(|| Rational::new(p, q))
        }
        None => s.parse::<i64>().ok().map(Rational::from_integer),
    }
}

/// Representative of `x mod 2` in `[0, 2)`.
pub fn mod2(x: &Rational) -> Rational {
    let two = Rational::from_integer(2);
    let r = x - (x / two).floor() * two;
    debug_assert!(!r.is_negative() && r < two);
    r
}

/// Representative of `x mod 1` in `[0, 1)`.
pub fn mod1(x: &Rational) -> Rational {
    x - x.floor()
}

pub fn congruent_mod2(a: &Rational, b: &Rational) -> bool {
    mod2(&(a - b)).is_zero()
}

pub fn lcm_denominators<'a>(xs: impl IntoIterator<Item = &'a Rational>) -> i64 {
    xs.into_iter().fold(1, |l, x| l.lcm(x.denom()))
}

pub fn serialize<S: Serializer>(x: &Rational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&to_string(x))
}

pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
    let s = String::deserialize(d)?;
    parse(&s).ok_or_else(|| serde::de::Error::custom(format!("bad rational {s:?}")))
}

/// Serde adapter for `Vec<Rational>`.
pub mod vec {
    use super::*;
    use serde::ser::SerializeSeq;

    pub fn serialize<S: Serializer>(xs: &[Rational], s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(xs.len()))?;
        for x in xs {
            seq.serialize_element(&to_string(x))?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rational>, D::Error> {
        let v = Vec::<String>::deserialize(d)?;
        v.iter()
            .map(|s| parse(s).ok_or_else(|| serde::de::Error::custom(format!("bad rational {s:?}"))))
            .collect()
    }
}

/// Serde adapter for `Option<Rational>`.
pub mod opt {
    use super::*;

    pub fn serialize<S: Serializer>(x: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
        match x {
            Some(x) => s.serialize_some(&to_string(x)),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Rational>, D::Error> {
        let v = Option::<String>::deserialize(d)?;
        v.map(|s| parse(&s).ok_or_else(|| serde::de::Error::custom(format!("bad rational {s:?}"))))
            .transpose()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roundtrip() {
        for x in [Rational::new(-9, 4), Rational::from_integer(3), Rational::new(1, 12)] {
            assert_eq!(parse(&to_string(&x)), Some(x));
        }
        assert_eq!(parse("−11/12"), Some(Rational::new(-11, 12)));
    }

    #[test]
    fn reductions() {
        assert_eq!(mod2(&Rational::new(-9, 4)), Rational::new(7, 4));
        assert_eq!(mod1(&Rational::new(-1, 4)), Rational::new(3, 4));
        assert!(congruent_mod2(&Rational::new(-35, 12), &Rational::new(-11, 12)));
    }
}
