//! Truncated expansions at the two boundary points of the compactified torus
//! and finite-prefix convergence certificates.

use std::collections::BTreeMap;
use std::fmt;

use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::laurent::LaurentPoly;
use super::ratfunc::{valuation_of_difference, RationalFunction};
use super::{Point, Rational};

/// Laurent expansion of a rational function at [`Point::Zero`] (in λ) or at
/// [`Point::Infinity`] (in λ⁻¹), with every exponent up to `order` retained.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundarySeries {
    pub point: Point,
    pub order: i64,
    coeffs: BTreeMap<i64, Rational>,
}

impl BoundarySeries {
    pub fn coeffs(&self) -> &BTreeMap<i64, Rational> {
        &self.coeffs
    }

    pub fn coeff(&self, k: i64) -> Rational {
        self.coeffs.get(&k).cloned().unwrap_or_else(Rational::zero)
    }

    /// Truncated product; the result is reliable up to the smaller order
    /// shifted by the other factor's leading exponent, and is cut there.
    pub fn mul_truncated(&self, other: &BoundarySeries) -> BoundarySeries {
        assert_eq!(self.point, other.point, "series at different points");
        // an empty series is O(λ^{order+1}), so its lead is at least order + 1
        let lead = |s: &BoundarySeries| s.coeffs.keys().next().copied().unwrap_or(s.order + 1);
        let order = (self.order + lead(other)).min(other.order + lead(self));
        let mut coeffs: BTreeMap<i64, Rational> = BTreeMap::new();
        for (i, a) in &self.coeffs {
            for (j, b) in &other.coeffs {
                if i + j <= order {
                    *coeffs.entry(i + j).or_insert_with(Rational::zero) += a * b;
                }
            }
        }
        coeffs.retain(|_, v| !v.is_zero());
        BoundarySeries {
            point: self.point,
            order,
            coeffs,
        }
    }

    /// Keeps exponents `≤ order`.
    pub fn truncate(&self, order: i64) -> BoundarySeries {
        BoundarySeries {
            point: self.point,
            order: order.min(self.order),
            coeffs: self.coeffs.range(..=order).map(|(k, v)| (*k, v.clone())).collect(),
        }
    }
}

impl fmt::Display for BoundarySeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let var = match self.point {
            Point::Zero => "λ",
            Point::Infinity => "λ⁻¹",
        };
        let mut first = true;
        for (k, c) in &self.coeffs {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "({c})")?,
                _ => write!(f, "({c})·{var}^{k}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O({var}^{})", self.order + 1)
    }
}

/// Truncated Laurent expansion of `x` at `point`, exponents `≤ order`.
pub fn expand(x: &RationalFunction, point: Point, order: i64) -> BoundarySeries {
    let local = match point {
        Point::Zero => x.clone(),
        Point::Infinity => x.invert_variable(),
    };
    let mut coeffs = BTreeMap::new();
    if !local.is_zero() {
        let num = local.numer();
        let den = local.denom();
        let vn = num.low_degree().unwrap();
        let vd = den.low_degree().unwrap();
        let shift = vn as i64 - vd as i64;
        let n: Vec<Rational> = num.coeffs()[vn..].iter().map(|c| BigRational::from_integer(c.clone())).collect();
        let d: Vec<Rational> = den.coeffs()[vd..].iter().map(|c| BigRational::from_integer(c.clone())).collect();
        // s = n / d as a power series: s_k = (n_k − Σ_{i≥1} d_i s_{k−i}) / d_0
        let terms = order - shift + 1;
        let mut s: Vec<Rational> = Vec::new();
        for k in 0..terms.max(0) as usize {
            let mut acc = n.get(k).cloned().unwrap_or_else(Rational::zero);
            for i in 1..=k.min(d.len() - 1) {
                acc -= &d[i] * &s[k - i];
            }
            s.push(acc / &d[0]);
        }
        for (k, c) in s.into_iter().enumerate() {
            if !c.is_zero() {
                coeffs.insert(k as i64 + shift, c);
            }
        }
    }
    BoundarySeries { point, order, coeffs }
}

/// Outcome of a finite-prefix convergence check.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CertStatus {
    Pass,
    Fail,
}

/// Valuations `v_n = ord(partial_n − limit)` at a boundary point, `None`
/// standing for +∞ (exact agreement).
///
/// Steps whose added term is zero leave the partial sum unchanged and are
/// skipped. Over the remaining valuations `u₀, …, u_r` the certificate
/// passes when `u_r = +∞`, or when `u_r` exceeds both `min(u₀, u₁)` and
/// `min(u_{r−2}, u_{r−1})` (just `u₀` when `r = 1`). The windows of two let
/// one accidental cancellation, which can make a single partial sum
/// unusually close to the limit, sit at either end of the prefix, while a
/// sequence that settles at a constant valuation (the signature of a wrong
/// limit) still fails. [`Certificate::strictly_increasing`] reports
/// index-by-index growth separately.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Certificate {
    pub point: Point,
    pub valuations: Vec<Option<i64>>,
    pub status: CertStatus,
    /// First index at which the check failed.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failed_at: Option<usize>,
    /// Indices whose added term was zero.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub stalled: Vec<usize>,
}

fn gt(a: Option<i64>, b: Option<i64>) -> bool {
    match (a, b) {
        (None, Some(_)) => true,
        (Some(x), Some(y)) => x > y,
        _ => false,
    }
}

impl Certificate {
    /// Builds a certificate from valuations and per-index "term was zero" flags
    /// (`unchanged[0]` is ignored).
    pub(crate) fn from_valuations(point: Point, valuations: Vec<Option<i64>>, unchanged: &[bool]) -> Self {
        let k = valuations.len();
        let stalled: Vec<usize> = (1..k).filter(|&n| unchanged[n]).collect();
        let moving: Vec<Option<i64>> = (0..k).filter(|&n| n == 0 || !unchanged[n]).map(|n| valuations[n]).collect();
        let r = moving.len() - 1;
        let last = moving[r];
        let ok = last.is_none()
            || match r {
                0 => false,
                1 => gt(last, moving[0]),
                _ => {
                    (gt(last, moving[0]) || gt(last, moving[1]))
                        && (gt(last, moving[r - 1]) || gt(last, moving[r - 2]))
                }
            };
        let failed_at = (!ok).then(|| (1..k).find(|&n| !gt(valuations[n], valuations[n - 1])).unwrap_or(k - 1));
        Certificate {
            point,
            valuations,
            status: if ok { CertStatus::Pass } else { CertStatus::Fail },
            failed_at,
            stalled,
        }
    }

    pub fn passed(&self) -> bool {
        self.status == CertStatus::Pass
    }

    /// Index-by-index strict growth with no allowance for zero terms; only a
    /// run of exact agreements (+∞, +∞) may repeat.
    pub fn strictly_increasing(&self) -> bool {
        self.valuations
            .windows(2)
            .all(|w| gt(w[1], w[0]) || (w[0].is_none() && w[1].is_none()))
    }

    /// Growth at the final index, `v_K − v_{K−1}`; `None` when either side is
    /// +∞ or the prefix has a single entry.
    pub fn final_margin(&self) -> Option<i64> {
        let k = self.valuations.len();
        if k < 2 {
            return None;
        }
        Some(self.valuations[k - 1]? - self.valuations[k - 2]?)
    }
}

/// Checks that `partials` approach `limit` in the valuation at `point`.
///
/// `valuations[n] = ord(partials[n] − limit)`; see [`Certificate`] for the
/// pass rule. This certifies a finite prefix only.
pub fn converges_to(partials: &[RationalFunction], limit: &RationalFunction, point: Point) -> Certificate {
    let lim = limit.to_fraction();
    let mut valuations = Vec::with_capacity(partials.len());
    let mut unchanged = Vec::with_capacity(partials.len());
    for (n, p) in partials.iter().enumerate() {
        let f = p.to_fraction();
        valuations.push(valuation_of_difference(&f.num, &f.den, &lim.num, &lim.den, point));
        unchanged.push(n > 0 && partials[n - 1] == *p);
    }
    Certificate::from_valuations(point, valuations, &unchanged)
}

/// Valuation of a Laurent partial sum against `num/den` in place of
/// [`converges_to`]'s reduced inputs.
pub(crate) fn laurent_partials_certificate(
    terms: &[LaurentPoly],
    num: &LaurentPoly,
    den: &LaurentPoly,
    point: Point,
) -> Certificate {
    // error_n = (Σ_{k≤n} t_k)·den − num, accumulated term by term
    let mut err = -num;
    let mut valuations = Vec::with_capacity(terms.len());
    let mut unchanged = Vec::with_capacity(terms.len());
    let den_val = match point {
        Point::Zero => den.min_exp().unwrap(),
        Point::Infinity => -den.max_exp().unwrap(),
    };
    for (n, t) in terms.iter().enumerate() {
        if !t.is_zero() {
            err = &err + &(t * den);
        }
        unchanged.push(n > 0 && t.is_zero());
        valuations.push(match point {
            _ if err.is_zero() => None,
            Point::Zero => Some(err.min_exp().unwrap() - den_val),
            Point::Infinity => Some(-err.max_exp().unwrap() - den_val),
        });
    }
    Certificate::from_valuations(point, valuations, &unchanged)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn lp(terms: &[(i64, i64)]) -> LaurentPoly {
        LaurentPoly::from_terms(terms.iter().copied())
    }

    fn geometric() -> RationalFunction {
        RationalFunction::new(&lp(&[(0, 1)]), &lp(&[(0, 1), (1, -1)])).unwrap()
    }

    fn q(n: i64) -> Rational {
        Rational::from_integer(BigInt::from(n))
    }

    #[test]
    fn geometric_series_at_zero() {
        let s = expand(&geometric(), Point::Zero, 3);
        let want: BTreeMap<i64, Rational> = (0..=3).map(|k| (k, q(1))).collect();
        assert_eq!(s.coeffs(), &want);
    }

    #[test]
    fn geometric_series_at_infinity() {
        // 1/(1 − λ) = −λ⁻¹ − λ⁻² − …
        let s = expand(&geometric(), Point::Infinity, 2);
        let want: BTreeMap<i64, Rational> = [(1, q(-1)), (2, q(-1))].into_iter().collect();
        assert_eq!(s.coeffs(), &want);
    }

    #[test]
    fn constants_and_zero() {
        let s = expand(&RationalFunction::one(), Point::Zero, 5);
        assert_eq!(s.coeffs().len(), 1);
        assert_eq!(s.coeff(0), q(1));
        assert!(expand(&RationalFunction::zero(), Point::Infinity, 4).coeffs().is_empty());
    }

    #[test]
    fn expansion_with_non_unit_leading_denominator() {
        // 1/(2 − λ) = 1/2 + λ/4 + λ²/8
        let x = RationalFunction::new(&lp(&[(0, 1)]), &lp(&[(0, 2), (1, -1)])).unwrap();
        let s = expand(&x, Point::Zero, 2);
        assert_eq!(s.coeff(2), Rational::new(1.into(), 8.into()));
    }

    #[test]
    fn expansion_with_pole_keeps_negative_exponents() {
        // λ⁻² / (1 − λ)
        let x = geometric().mul_character(-2);
        let s = expand(&x, Point::Zero, 0);
        assert_eq!(s.coeffs().keys().copied().collect::<Vec<_>>(), vec![-2, -1, 0]);
    }

    fn geometric_partials(n: usize) -> Vec<RationalFunction> {
        (0..n)
            .map(|k| RationalFunction::from_laurent(&LaurentPoly::from_terms((0..=k as i64).map(|e| (e, 1)))))
            .collect()
    }

    #[test]
    fn geometric_partials_certify() {
        let cert = converges_to(&geometric_partials(6), &geometric(), Point::Zero);
        assert!(cert.passed());
        assert!(cert.strictly_increasing());
        assert_eq!(cert.valuations, (1..=6).map(Some).collect::<Vec<_>>());
        assert_eq!(cert.final_margin(), Some(1));
    }

    #[test]
    fn constant_sequence_is_exact() {
        let x = geometric();
        let cert = converges_to(&[x.clone(), x.clone()], &x, Point::Infinity);
        assert!(cert.passed());
        assert_eq!(cert.valuations, vec![None, None]);
    }

    #[test]
    fn wrong_limit_fails_at_first_disagreement() {
        let wrong = RationalFunction::new(&lp(&[(0, 1)]), &lp(&[(0, 1), (1, -2)])).unwrap();
        let cert = converges_to(&geometric_partials(5), &wrong, Point::Zero);
        assert!(!cert.passed());
        assert_eq!(cert.failed_at, Some(1));
    }

    #[test]
    fn stalled_prefix_without_growth_fails() {
        let one = RationalFunction::one();
        let cert = converges_to(&[one.clone(), one.clone(), one], &geometric(), Point::Zero);
        assert!(!cert.passed());
        assert_eq!(cert.failed_at, Some(1));
        assert_eq!(cert.stalled, vec![1, 2]);
    }

    #[test]
    fn zero_term_is_allowed_but_not_strict() {
        // partial sums of 1 + λ + 0·λ² + λ³ + … against 1 + λ + λ³/(1 − λ)
        let limit = &RationalFunction::from_laurent(&lp(&[(0, 1), (1, 1)])) + &geometric().mul_character(3);
        let partials: Vec<_> = [lp(&[(0, 1)]), lp(&[(0, 1), (1, 1)]), lp(&[(0, 1), (1, 1)]), lp(&[(0, 1), (1, 1), (3, 1)])]
            .iter()
            .map(RationalFunction::from_laurent)
            .collect();
        let cert = converges_to(&partials, &limit, Point::Zero);
        assert!(cert.passed());
        assert_eq!(cert.stalled, vec![2]);
        assert!(!cert.strictly_increasing());
    }

    #[test]
    fn isolated_cancellations_do_not_fail() {
        let cert = Certificate::from_valuations(Point::Zero, vec![Some(1), Some(6), Some(4), Some(7)], &[false; 4]);
        assert!(cert.passed());
        assert!(!cert.strictly_increasing());
        let spike_at_end = Certificate::from_valuations(Point::Zero, vec![Some(1), Some(3), Some(9), Some(5)], &[false; 4]);
        assert!(spike_at_end.passed());
        let settled = Certificate::from_valuations(Point::Zero, vec![Some(1), Some(6), Some(4), Some(4)], &[false; 4]);
        assert_eq!(settled.failed_at, Some(2));
        // a trailing zero term does not hide the last real step
        let cert = Certificate::from_valuations(Point::Zero, vec![Some(1), Some(2), Some(2)], &[false, false, true]);
        assert!(cert.passed());
        let spike_at_start = Certificate::from_valuations(Point::Zero, vec![Some(9), Some(2), Some(4), Some(9)], &[false; 4]);
        assert!(spike_at_start.passed());
        assert!(!spike_at_start.strictly_increasing());
        // an early spike does not excuse a prefix that never improves
        let flat_after_spike = Certificate::from_valuations(Point::Zero, vec![Some(9), Some(2), Some(2), Some(2)], &[false; 4]);
        assert_eq!(flat_after_spike.failed_at, Some(1));
        let single = Certificate::from_valuations(Point::Zero, vec![Some(3)], &[false]);
        assert!(!single.passed());
    }

    #[test]
    fn laurent_route_matches_reduced_route() {
        let terms: Vec<LaurentPoly> = (0..5).map(|k| LaurentPoly::character(-k)).collect();
        // Σ λ^(−k) = 1/(1 − λ⁻¹) = −λ/(1 − λ), converging at infinity
        let limit = RationalFunction::new(&lp(&[(0, 1)]), &lp(&[(0, 1), (-1, -1)])).unwrap();
        let f = limit.to_fraction();
        let fast = laurent_partials_certificate(&terms, &f.num, &f.den, Point::Infinity);
        let mut acc = LaurentPoly::zero();
        let partials: Vec<_> = terms
            .iter()
            .map(|t| {
                acc += t;
                RationalFunction::from_laurent(&acc)
            })
            .collect();
        assert_eq!(fast, converges_to(&partials, &limit, Point::Infinity));
        assert!(fast.passed());
    }
}
