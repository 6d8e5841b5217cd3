//! Exact arithmetic in one variable: integer polynomials, Laurent
//! polynomials, reduced rational functions and their expansions at 0 and ∞.

mod laurent;
mod poly;
mod ratfunc;
mod series;

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

pub use laurent::LaurentPoly;
pub use poly::Poly;
pub use ratfunc::{rf_arith, RationalFunction, RfOp};
pub use series::{converges_to, expand, BoundarySeries, CertStatus, Certificate};

pub(crate) use series::laurent_partials_certificate;

/// Arbitrary-precision rational number.
pub type Rational = num_rational::BigRational;

/// Boundary point of the compactified torus `ℙ¹ = 𝔾ₘ ∪ {0} ∪ {∞}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Point {
    Zero,
    Infinity,
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Point::Zero => "zero",
            Point::Infinity => "infinity",
        })
    }
}

/// Order of vanishing of `x` at `point`.
pub fn valuation(x: &RationalFunction, point: Point) -> crate::Result<i64> {
    x.valuation(point)
}

/// Canonical reduced form of `num / den`.
pub fn rf_normalize(num: &LaurentPoly, den: &LaurentPoly) -> crate::Result<RationalFunction> {
    RationalFunction::new(num, den)
}

// JSON: a polynomial is a list of `[coefficient-string, exponent]` pairs in
// ascending exponent order.

type Term = (String, i64);

fn terms_of(p: &LaurentPoly) -> Vec<Term> {
    p.terms().map(|(k, c)| (c.to_string(), k)).collect()
}

fn parse_terms<E: serde::de::Error>(terms: Vec<Term>) -> Result<LaurentPoly, E> {
    let parsed = terms
        .into_iter()
        .map(|(c, k)| BigInt::from_str(c.trim()).map(|c| (k, c)).map_err(|_| E::custom(format!("bad coefficient {c:?}"))))
        .collect::<Result<Vec<_>, E>>()?;
    Ok(LaurentPoly::from_terms(parsed))
}

impl Serialize for LaurentPoly {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        terms_of(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for LaurentPoly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        parse_terms(Vec::<Term>::deserialize(d)?)
    }
}

#[derive(Serialize, Deserialize)]
struct RfWire {
    num: Vec<Term>,
    den: Vec<Term>,
}

impl Serialize for RationalFunction {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        RfWire {
            num: terms_of(&LaurentPoly::from_poly(self.numer())),
            den: terms_of(&LaurentPoly::from_poly(self.denom())),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for RationalFunction {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let wire = RfWire::deserialize(d)?;
        let num = parse_terms(wire.num)?;
        let den = parse_terms(wire.den)?;
        RationalFunction::new(&num, &den).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lp(terms: &[(i64, i64)]) -> LaurentPoly {
        LaurentPoly::from_terms(terms.iter().copied())
    }

    fn rf(num: &[(i64, i64)], den: &[(i64, i64)]) -> RationalFunction {
        RationalFunction::new(&lp(num), &lp(den)).unwrap()
    }

    #[test]
    fn projective_line_local_traces_sum_to_one() {
        let at_zero = rf(&[(0, 1)], &[(0, 1), (1, -1)]);
        let at_inf = rf(&[(0, 1)], &[(0, 1), (-1, -1)]);
        assert_eq!(rf_arith(RfOp::Add, &at_zero, Some(&at_inf)).unwrap(), RationalFunction::one());
    }

    #[test]
    fn inverse_round_trip() {
        let x = rf(&[(0, 1), (2, 3)], &[(0, -2), (1, 1)]);
        let inv = rf_arith(RfOp::Invert, &x, None).unwrap();
        assert_eq!(&x * &inv, RationalFunction::one());
        assert!(rf_arith(RfOp::Div, &x, Some(&RationalFunction::zero())).is_err());
    }

    #[test]
    fn twisted_local_traces_give_sections_of_o1() {
        // λ⁻¹/(1 − λ) + 1/(1 − λ⁻¹) = λ⁻¹ + 1
        let a = rf(&[(-1, 1)], &[(0, 1), (1, -1)]);
        let b = rf(&[(0, 1)], &[(0, 1), (-1, -1)]);
        assert_eq!(&a + &b, rf(&[(-1, 1), (0, 1)], &[(0, 1)]));
    }

    #[test]
    fn json_shape_and_round_trip() {
        let x = rf(&[(0, 1), (1, -2)], &[(0, 1), (1, -2), (2, 1)]);
        let json = serde_json::to_string(&x).unwrap();
        assert_eq!(json, r#"{"num":[["1",0],["-2",1]],"den":[["1",0],["-2",1],["1",2]]}"#);
        let back: RationalFunction = serde_json::from_str(&json).unwrap();
        assert_eq!(back, x);
        // non-canonical input is reduced on the way in
        let raw: RationalFunction = serde_json::from_str(r#"{"num":[["-1",0],["1",2]],"den":[["-1",0],["1",1]]}"#).unwrap();
        assert_eq!(raw, rf(&[(0, 1), (1, 1)], &[(0, 1)]));
        assert!(serde_json::from_str::<RationalFunction>(r#"{"num":[["1",0]],"den":[]}"#).is_err());
    }

    #[test]
    fn huge_coefficients_survive_json() {
        let big = "123456789012345678901234567890";
        let json = format!(r#"{{"num":[["{big}",3]],"den":[["1",0]]}}"#);
        let x: RationalFunction = serde_json::from_str(&json).unwrap();
        assert_eq!(serde_json::to_string(&x).unwrap(), json);
    }
}
