//! Rational functions in λ over ℚ, kept in a canonical reduced form.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::laurent::LaurentPoly;
use super::poly::Poly;
use super::Point;
use crate::error::{Error, Result};

/// `num / den` with integer polynomials such that
///
/// * `gcd(num, den) = 1` in `ℚ[λ]`,
/// * the integer contents of `num` and `den` are coprime,
/// * the lowest-degree coefficient of `den` is positive.
///
/// Equal functions therefore have equal representations, and `==` is
/// value equality.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RationalFunction {
    num: Poly,
    den: Poly,
}

impl RationalFunction {
    pub fn zero() -> Self {
        RationalFunction {
            num: Poly::zero(),
            den: Poly::one(),
        }
    }

    pub fn one() -> Self {
        RationalFunction::from_int(1)
    }

    pub fn from_int(c: impl Into<BigInt>) -> Self {
        RationalFunction::from_laurent(&LaurentPoly::constant(c))
    }

    /// `λ^w`.
    pub fn character(w: i64) -> Self {
        RationalFunction::from_laurent(&LaurentPoly::character(w))
    }

    pub fn from_laurent(p: &LaurentPoly) -> Self {
        let (body, shift) = p.to_poly_parts();
        if body.is_zero() {
            return RationalFunction::zero();
        }
        if shift >= 0 {
            RationalFunction {
                num: body.shift_up(shift as usize),
                den: Poly::one(),
            }
        } else {
            RationalFunction {
                num: body,
                den: Poly::monomial(BigInt::one(), (-shift) as usize),
            }
        }
    }

    /// Canonical form of `num / den` for Laurent inputs; both are first
    /// cleared to ordinary polynomials by a common power of λ.
    pub fn new(num: &LaurentPoly, den: &LaurentPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::invalid("zero denominator"));
        }
        let (n, sn) = num.to_poly_parts();
        let (d, sd) = den.to_poly_parts();
        Ok(normalize_parts(n, d, sn - sd))
    }

    /// Canonical form of a quotient of ordinary polynomials.
    pub fn from_polys(num: &Poly, den: &Poly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::invalid("zero denominator"));
        }
        if num.is_zero() {
            return Ok(RationalFunction::zero());
        }
        let vn = num.low_degree().unwrap();
        let vd = den.low_degree().unwrap();
        Ok(normalize_parts(
            num.shift_down(vn),
            den.shift_down(vd),
            vn as i64 - vd as i64,
        ))
    }

    pub fn numer(&self) -> &Poly {
        &self.num
    }

    pub fn denom(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.den == Poly::one() && self.num == Poly::one()
    }

    /// The function as a Laurent polynomial, if it is one.
    pub fn as_laurent(&self) -> Option<LaurentPoly> {
        let vd = self.den.low_degree()?;
        let rest = self.den.shift_down(vd);
        (rest == Poly::one()).then(|| LaurentPoly::from_poly(&self.num).shift(-(vd as i64)))
    }

    pub fn inverse(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::invalid("division by the zero function"));
        }
        Ok(RationalFunction::from_polys(&self.den, &self.num).expect("nonzero numerator"))
    }

    pub fn checked_div(&self, rhs: &Self) -> Result<Self> {
        Ok(self * &rhs.inverse()?)
    }

    /// Multiplies by `λ^k` without a gcd.
    pub fn mul_character(&self, k: i64) -> Self {
        if self.is_zero() || k == 0 {
            return self.clone();
        }
        let vn = self.num.low_degree().unwrap();
        let vd = self.den.low_degree().unwrap();
        let n = self.num.shift_down(vn);
        let d = self.den.shift_down(vd);
        let shift = vn as i64 - vd as i64 + k;
        place(n, d, shift)
    }

    /// Multiplies by an integer without a polynomial gcd.
    pub fn scale(&self, k: &BigInt) -> Self {
        if k.is_zero() {
            return RationalFunction::zero();
        }
        let dc = self.den.content();
        let g = k.gcd(&dc);
        RationalFunction {
            num: self.num.scale(&(k / &g)),
            den: self.den.div_scalar_exact(&g),
        }
    }

    pub fn mul_laurent(&self, p: &LaurentPoly) -> Self {
        if let (Some(lo), Some(hi)) = (p.min_exp(), p.max_exp()) {
            if lo == hi {
                return self.mul_character(lo).scale(&p.coeff(lo));
            }
        }
        self * &RationalFunction::from_laurent(p)
    }

    /// Order of vanishing at the point (negative for poles).
    pub fn valuation(&self, point: Point) -> Result<i64> {
        if self.is_zero() {
            return Err(Error::UndefinedValuation);
        }
        Ok(match point {
            Point::Zero => {
                self.num.low_degree().unwrap() as i64 - self.den.low_degree().unwrap() as i64
            }
            Point::Infinity => {
                self.den.degree().unwrap() as i64 - self.num.degree().unwrap() as i64
            }
        })
    }

    /// `f(1/λ)`, with `f(1/λ) = λ^(deg den − deg num) · rev(num) / rev(den)`.
    pub fn invert_variable(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let shift = self.den.degree().unwrap() as i64 - self.num.degree().unwrap() as i64;
        let n = self.num.reversed();
        let d = self.den.reversed();
        let vn = n.low_degree().unwrap();
        let vd = d.low_degree().unwrap();
        normalize_parts(n.shift_down(vn), d.shift_down(vd), shift + vn as i64 - vd as i64)
    }

    pub(crate) fn to_fraction(&self) -> Fraction {
        Fraction {
            num: LaurentPoly::from_poly(&self.num),
            den: LaurentPoly::from_poly(&self.den),
        }
    }
}

/// `λ^shift · n / d` where `n(0), d(0) ≠ 0`.
fn normalize_parts(n: Poly, d: Poly, shift: i64) -> RationalFunction {
    if n.is_zero() {
        return RationalFunction::zero();
    }
    let (n, d) = if n.degree() == Some(0) || d.degree() == Some(0) {
        (n, d)
    } else {
        let g = n.gcd(&d);
        if g == Poly::one() {
            (n, d)
        } else {
            (
                n.div_exact(&g).expect("gcd divides numerator"),
                d.div_exact(&g).expect("gcd divides denominator"),
            )
        }
    };
    place(n, d, shift)
}

/// Fixes content and sign, then distributes `λ^shift`. Assumes `n/d` reduced.
fn place(n: Poly, d: Poly, shift: i64) -> RationalFunction {
    let c = n.content().gcd(&d.content());
    let mut c = if c.is_zero() { BigInt::one() } else { c };
    if d.coeff(0).is_negative() {
        c = -c;
    }
    let n = n.div_scalar_exact(&c);
    let d = d.div_scalar_exact(&c);
    if shift >= 0 {
        RationalFunction {
            num: n.shift_up(shift as usize),
            den: d,
        }
    } else {
        RationalFunction {
            num: n,
            den: d.shift_up((-shift) as usize),
        }
    }
}

/// Unreduced quotient of Laurent polynomials.
#[derive(Clone, Debug)]
pub(crate) struct Fraction {
    pub num: LaurentPoly,
    pub den: LaurentPoly,
}

/// Valuation of `a/b − c/d` at `point` from unreduced parts; `None` is +∞.
pub(crate) fn valuation_of_difference(
    a: &LaurentPoly,
    b: &LaurentPoly,
    c: &LaurentPoly,
    d: &LaurentPoly,
    point: Point,
) -> Option<i64> {
    let e = &(a * d) - &(c * b);
    let val = |p: &LaurentPoly| match point {
        Point::Zero => p.min_exp().unwrap(),
        Point::Infinity => -p.max_exp().unwrap(),
    };
    if e.is_zero() {
        return None;
    }
    Some(val(&e) - val(b) - val(d))
}

/// Arithmetic operations exposed through [`rf_arith`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RfOp {
    Add,
    Sub,
    Mul,
    Div,
    Invert,
}

/// Field operations on rational functions; `y` is ignored for `Invert`.
pub fn rf_arith(op: RfOp, x: &RationalFunction, y: Option<&RationalFunction>) -> Result<RationalFunction> {
    let rhs = || y.ok_or_else(|| Error::invalid("binary operation needs a second operand"));
    match op {
        RfOp::Add => Ok(x + rhs()?),
        RfOp::Sub => Ok(x - rhs()?),
        RfOp::Mul => Ok(x * rhs()?),
        RfOp::Div => x.checked_div(rhs()?),
        RfOp::Invert => x.inverse(),
    }
}

impl Add for &RationalFunction {
    type Output = RationalFunction;
    fn add(self, rhs: &RationalFunction) -> RationalFunction {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        if self.den == rhs.den {
            return RationalFunction::from_polys(&(&self.num + &rhs.num), &self.den).unwrap();
        }
        let num = &(&self.num * &rhs.den) + &(&rhs.num * &self.den);
        RationalFunction::from_polys(&num, &(&self.den * &rhs.den)).unwrap()
    }
}

impl Neg for &RationalFunction {
    type Output = RationalFunction;
    fn neg(self) -> RationalFunction {
        RationalFunction {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl Sub for &RationalFunction {
    type Output = RationalFunction;
    fn sub(self, rhs: &RationalFunction) -> RationalFunction {
        self + &(-rhs)
    }
}

impl Mul for &RationalFunction {
    type Output = RationalFunction;
    fn mul(self, rhs: &RationalFunction) -> RationalFunction {
        if self.is_zero() || rhs.is_zero() {
            return RationalFunction::zero();
        }
        if rhs.den == Poly::one() && rhs.num.degree() == Some(0) {
            return self.scale(&rhs.num.coeff(0));
        }
        if self.den == Poly::one() && self.num.degree() == Some(0) {
            return rhs.scale(&self.num.coeff(0));
        }
        RationalFunction::from_polys(&(&self.num * &rhs.num), &(&self.den * &rhs.den)).unwrap()
    }
}

impl Div for &RationalFunction {
    type Output = RationalFunction;
    /// Panics on division by zero; see [`RationalFunction::checked_div`].
    fn div(self, rhs: &RationalFunction) -> RationalFunction {
        self.checked_div(rhs).expect("division by the zero function")
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for RationalFunction {
            type Output = RationalFunction;
            fn $m(self, rhs: RationalFunction) -> RationalFunction {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&RationalFunction> for RationalFunction {
            type Output = RationalFunction;
            fn $m(self, rhs: &RationalFunction) -> RationalFunction {
                (&self).$m(rhs)
            }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul, Div div);

impl Neg for RationalFunction {
    type Output = RationalFunction;
    fn neg(self) -> RationalFunction {
        -&self
    }
}

impl From<LaurentPoly> for RationalFunction {
    fn from(p: LaurentPoly) -> Self {
        RationalFunction::from_laurent(&p)
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(p) = self.as_laurent() {
            return write!(f, "{p}");
        }
        write!(f, "({})/({})", self.num, self.den)
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
    fn normalize_cancels_common_factor() {
        // (λ² − 1)/(λ − 1) = λ + 1
        assert_eq!(rf(&[(2, 1), (0, -1)], &[(1, 1), (0, -1)]), rf(&[(0, 1), (1, 1)], &[(0, 1)]));
        assert!(rf(&[(0, 1), (1, -1)], &[(0, 1), (1, -1)]).is_one());
    }

    #[test]
    fn normalize_clears_laurent_powers() {
        // 1/(1 − λ⁻¹) = λ/(λ − 1) = −λ/(1 − λ)
        let x = rf(&[(0, 1)], &[(0, 1), (-1, -1)]);
        assert_eq!(x.numer(), &Poly::from_i64s(&[0, -1]));
        assert_eq!(x.denom(), &Poly::from_i64s(&[1, -1]));
        assert_eq!(x, rf(&[(1, 1)], &[(1, 1), (0, -1)]));
    }

    #[test]
    fn zero_denominator_is_rejected() {
        assert!(matches!(
            RationalFunction::new(&lp(&[(0, 1)]), &LaurentPoly::zero()),
            Err(Error::InvalidInput(_))
        ));
        assert!(RationalFunction::zero().inverse().is_err());
    }

    #[test]
    fn canonical_form_fixes_content_and_sign() {
        let x = rf(&[(0, 4)], &[(0, -6), (1, 2)]);
        assert_eq!(x.numer(), &Poly::from_i64s(&[-2]));
        assert_eq!(x.denom(), &Poly::from_i64s(&[3, -1]));
        let half = rf(&[(0, 1)], &[(0, 2)]);
        assert_eq!(&half + &half, RationalFunction::one());
        assert_eq!(half.as_laurent(), None);
    }

    #[test]
    fn mul_character_matches_generic_product() {
        let x = rf(&[(0, 3), (2, 1)], &[(1, 1), (0, -2)]);
        for k in -3..=3 {
            assert_eq!(x.mul_character(k), &x * &RationalFunction::character(k));
        }
        let y = rf(&[(0, 1)], &[(2, 1), (3, 1)]);
        assert_eq!(y.mul_character(2), rf(&[(0, 1)], &[(0, 1), (1, 1)]));
    }

    #[test]
    fn valuations_at_both_points() {
        let x = rf(&[(2, 1)], &[(0, 1), (1, -1)]);
        assert_eq!(x.valuation(Point::Zero).unwrap(), 2);
        assert_eq!(x.valuation(Point::Infinity).unwrap(), -1);
        assert_eq!(RationalFunction::one().valuation(Point::Zero).unwrap(), 0);
        assert_eq!(RationalFunction::zero().valuation(Point::Zero), Err(Error::UndefinedValuation));
    }

    #[test]
    fn invert_variable_is_an_involution() {
        let x = rf(&[(0, 3), (2, 1)], &[(1, 1), (0, -2), (4, 5)]);
        assert_eq!(x.invert_variable().invert_variable(), x);
        assert_eq!(
            RationalFunction::character(3).invert_variable(),
            RationalFunction::character(-3)
        );
    }

    #[test]
    fn difference_valuation_matches_reduced_route() {
        let a = rf(&[(0, 1)], &[(0, 1), (1, -1)]);
        let partial = lp(&[(0, 1), (1, 1), (2, 1)]);
        let fa = a.to_fraction();
        let v = valuation_of_difference(&partial, &LaurentPoly::one(), &fa.num, &fa.den, Point::Zero);
        let direct = (&RationalFunction::from_laurent(&partial) - &a).valuation(Point::Zero).unwrap();
        assert_eq!(v, Some(direct));
        assert_eq!(direct, 3);
    }
}
