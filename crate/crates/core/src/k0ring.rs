//! `K₀(ℙᵐ)` with coefficients in a ring of characters.
//!
//! Elements are written `Σ_j c_j·ηʲ` with `η = [O(−1)] − 1`, which satisfies
//! `η^{m+1} = 0`. The nilpotent part makes inversion a finite geometric
//! series: an element is a unit exactly when its rank part `c₀` is.

use std::fmt;
use std::ops::{Add, Mul, Sub};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactnum::{LaurentPoly, RationalFunction};
use crate::torusaction::ConormalLine;

/// Coefficient rings for [`K0Element`]: Laurent polynomials for finite
/// character sums, rational functions once inverses are involved.
pub trait Coefficient: Clone + PartialEq + fmt::Debug {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    /// `λ^w`.
    fn character(w: i64) -> Self;
    fn plus(&self, other: &Self) -> Self;
    fn minus(&self, other: &Self) -> Self;
    fn times(&self, other: &Self) -> Self;
    fn scale(&self, k: &BigInt) -> Self;
}

impl Coefficient for LaurentPoly {
    fn zero() -> Self {
        LaurentPoly::zero()
    }
    fn one() -> Self {
        LaurentPoly::one()
    }
    fn is_zero(&self) -> bool {
        LaurentPoly::is_zero(self)
    }
    fn character(w: i64) -> Self {
        LaurentPoly::character(w)
    }
    fn plus(&self, other: &Self) -> Self {
        self + other
    }
    fn minus(&self, other: &Self) -> Self {
        self - other
    }
    fn times(&self, other: &Self) -> Self {
        self * other
    }
    fn scale(&self, k: &BigInt) -> Self {
        LaurentPoly::scale(self, k)
    }
}

impl Coefficient for RationalFunction {
    fn zero() -> Self {
        RationalFunction::zero()
    }
    fn one() -> Self {
        RationalFunction::one()
    }
    fn is_zero(&self) -> bool {
        RationalFunction::is_zero(self)
    }
    fn character(w: i64) -> Self {
        RationalFunction::character(w)
    }
    fn plus(&self, other: &Self) -> Self {
        self + other
    }
    fn minus(&self, other: &Self) -> Self {
        self - other
    }
    fn times(&self, other: &Self) -> Self {
        self * other
    }
    fn scale(&self, k: &BigInt) -> Self {
        RationalFunction::scale(self, k)
    }
}

/// `Σ_j coeffs[j]·ηʲ` in `K₀(ℙᵐ) ⊗ C`, `m = base_dim`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct K0Element<C = RationalFunction> {
    base_dim: usize,
    coeffs: Vec<C>,
}

impl<C: Coefficient> K0Element<C> {
    pub fn zero(m: usize) -> Self {
        K0Element {
            base_dim: m,
            coeffs: vec![C::zero(); m + 1],
        }
    }

    pub fn one(m: usize) -> Self {
        K0Element::scalar(m, C::one())
    }

    pub fn scalar(m: usize, c: C) -> Self {
        let mut x = K0Element::zero(m);
        x.coeffs[0] = c;
        x
    }

    /// `η = [O(−1)] − 1`.
    pub fn eta(m: usize) -> Self {
        let mut x = K0Element::zero(m);
        if m >= 1 {
            x.coeffs[1] = C::one();
        }
        x
    }

    pub fn from_coeffs(m: usize, coeffs: Vec<C>) -> Result<Self> {
        if coeffs.len() != m + 1 {
            return Err(Error::invalid(format!(
                "K0 element on P^{m} needs {} coefficients (got {})",
                m + 1,
                coeffs.len()
            )));
        }
        Ok(K0Element { base_dim: m, coeffs })
    }

    /// `[O(e)] = (1 + η)^{−e}`, expanded with generalized binomials.
    pub fn twist(m: usize, e: i64) -> Self {
        K0Element {
            base_dim: m,
            coeffs: (0..=m).map(|j| C::one().scale(&binomial(-e, j))).collect(),
        }
    }

    /// `[O(degree)] ⊗ λ^character`.
    pub fn line(m: usize, degree: i64, character: i64) -> Self {
        K0Element::twist(m, degree).scale_by(&C::character(character))
    }

    pub fn base_dim(&self) -> usize {
        self.base_dim
    }

    pub fn coeffs(&self) -> &[C] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(C::is_zero)
    }

    pub fn scale_by(&self, c: &C) -> Self {
        K0Element {
            base_dim: self.base_dim,
            coeffs: self.coeffs.iter().map(|x| x.times(c)).collect(),
        }
    }

    pub fn map<D: Coefficient>(&self, f: impl Fn(&C) -> D) -> K0Element<D> {
        K0Element {
            base_dim: self.base_dim,
            coeffs: self.coeffs.iter().map(f).collect(),
        }
    }

    fn check_dims(&self, other: &Self) -> Result<()> {
        if self.base_dim != other.base_dim {
            return Err(Error::invalid(format!(
                "base dimensions differ: P^{} vs P^{}",
                self.base_dim, other.base_dim
            )));
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check_dims(other)?;
        Ok(K0Element {
            base_dim: self.base_dim,
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a.plus(b)).collect(),
        })
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.check_dims(other)?;
        Ok(K0Element {
            base_dim: self.base_dim,
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a.minus(b)).collect(),
        })
    }

    /// Product with `ηᵏ = 0` for `k > m`.
    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.check_dims(other)?;
        let m = self.base_dim;
        let mut coeffs = vec![C::zero(); m + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(m + 1 - i) {
                if !b.is_zero() {
                    coeffs[i + j] = coeffs[i + j].plus(&a.times(b));
                }
            }
        }
        Ok(K0Element { base_dim: m, coeffs })
    }

    /// Rank part `coeffs[0]`: the character of a fiber.
    pub fn rank_char(&self) -> &C {
        &self.coeffs[0]
    }

    /// Nilpotent part `x − coeffs[0]`.
    fn nilpotent(&self) -> Self {
        let mut n = self.clone();
        n.coeffs[0] = C::zero();
        n
    }
}

impl<C: Coefficient> Add for &K0Element<C> {
    type Output = K0Element<C>;
    /// Panics on mismatched base dimensions; see [`K0Element::checked_add`].
    fn add(self, rhs: &K0Element<C>) -> K0Element<C> {
        self.checked_add(rhs).expect("mismatched base dimensions")
    }
}

impl<C: Coefficient> Sub for &K0Element<C> {
    type Output = K0Element<C>;
    fn sub(self, rhs: &K0Element<C>) -> K0Element<C> {
        self.checked_sub(rhs).expect("mismatched base dimensions")
    }
}

impl<C: Coefficient> Mul for &K0Element<C> {
    type Output = K0Element<C>;
    fn mul(self, rhs: &K0Element<C>) -> K0Element<C> {
        self.checked_mul(rhs).expect("mismatched base dimensions")
    }
}

/// Ring operations exposed through [`k0_arith`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum K0Op {
    Add,
    Mul,
}

pub fn k0_arith<C: Coefficient>(op: K0Op, x: &K0Element<C>, y: &K0Element<C>) -> Result<K0Element<C>> {
    match op {
        K0Op::Add => x.checked_add(y),
        K0Op::Mul => x.checked_mul(y),
    }
}

pub fn k0_rank_char<C: Coefficient>(x: &K0Element<C>) -> C {
    x.rank_char().clone()
}

/// Inverse as `r⁻¹·Σ_{i≤m} (−ñ/r)ⁱ`, `r` the rank part and `ñ` the
/// nilpotent part. Fails exactly when `r = 0`.
pub fn k0_invert(x: &K0Element<RationalFunction>) -> Result<K0Element<RationalFunction>> {
    let r = x.rank_char();
    if r.is_zero() {
        return Err(Error::NotInvertible("rank character is zero".into()));
    }
    let r_inv = r.inverse()?;
    let m = x.base_dim;
    let step = x.nilpotent().scale_by(&(-&r_inv));
    let mut power = K0Element::one(m);
    let mut sum = K0Element::one(m);
    for _ in 0..m {
        power = &power * &step;
        sum = &sum + &power;
    }
    Ok(sum.scale_by(&r_inv))
}

/// Inverse of a Laurent-coefficient element over the common denominator
/// `r^{m+1}`: returns `(N, r^{m+1})` with `x·N = r^{m+1}`, where
/// `N = Σ_{i≤m} (−ñ)ⁱ r^{m−i}`.
pub(crate) fn invert_over_denominator(x: &K0Element<LaurentPoly>) -> Result<(K0Element<LaurentPoly>, LaurentPoly)> {
    let r = x.rank_char().clone();
    if r.is_zero() {
        return Err(Error::NotInvertible("rank character is zero".into()));
    }
    let m = x.base_dim;
    let minus_nil = x.nilpotent().scale_by(&LaurentPoly::constant(-1));
    let mut numer = K0Element::zero(m);
    let mut power = K0Element::one(m);
    for i in 0..=m {
        numer = &numer + &power.scale_by(&r.pow((m - i) as u32));
        power = &power * &minus_nil;
    }
    Ok((numer, r.pow(m as u32 + 1)))
}

/// `χ(ℙᵐ, O(d)) = Π_{k=1}^{m} (d + k)/k`.
pub fn euler_char(m: usize, d: i64) -> BigInt {
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for k in 1..=m as i64 {
        num *= d + k;
        den *= k;
    }
    num / den
}

/// Generalized binomial `e(e−1)…(e−j+1)/j!`.
fn binomial(e: i64, j: usize) -> BigInt {
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for k in 0..j as i64 {
        num *= e - k;
        den *= k + 1;
    }
    num / den
}

/// `χ(ℙᵐ, ηʲ) = Σ_i (−1)^{j−i} C(j,i) χ(O(−i))`.
fn chi_eta_powers(m: usize) -> Vec<BigInt> {
    (0..=m)
        .map(|j| {
            (0..=j)
                .map(|i| {
                    let term = binomial(j as i64, i) * euler_char(m, -(i as i64));
                    if (j - i) % 2 == 0 {
                        term
                    } else {
                        -term
                    }
                })
                .sum()
        })
        .collect()
}

/// `χ_L`: applies the Euler characteristic to the K-theory part and keeps
/// the character coefficients.
pub fn chi_l<C: Coefficient>(x: &K0Element<C>) -> C {
    let weights = chi_eta_powers(x.base_dim);
    x.coeffs
        .iter()
        .zip(&weights)
        .filter(|(c, w)| !c.is_zero() && !w.is_zero())
        .fold(C::zero(), |acc, (c, w)| acc.plus(&c.scale(w)))
}

/// `χ(ℙᵐ, ηʲ ⊗ O(l))` for `j = 0..=m`.
pub(crate) fn chi_twisted_eta_powers(m: usize, l: i64) -> Vec<BigInt> {
    (0..=m)
        .map(|j| {
            (0..=j)
                .map(|i| {
                    let term = binomial(j as i64, i) * euler_char(m, l - i as i64);
                    if (j - i) % 2 == 0 {
                        term
                    } else {
                        -term
                    }
                })
                .sum()
        })
        .collect()
}

/// `χ_L([O(l)] · x)` without forming the product.
pub(crate) fn chi_l_twisted<C: Coefficient>(x: &K0Element<C>, l: i64) -> C {
    let weights = chi_twisted_eta_powers(x.base_dim, l);
    x.coeffs
        .iter()
        .zip(&weights)
        .filter(|(c, w)| !c.is_zero() && !w.is_zero())
        .fold(C::zero(), |acc, (c, w)| acc.plus(&c.scale(w)))
}

/// `O(degree) ⊗ λ^character`, repeated `multiplicity` times.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct EquivLine {
    pub degree: i64,
    pub character: i64,
    #[serde(rename = "mult")]
    pub multiplicity: u32,
}

impl From<&ConormalLine> for EquivLine {
    fn from(l: &ConormalLine) -> Self {
        EquivLine {
            degree: l.degree,
            character: l.character,
            multiplicity: l.multiplicity,
        }
    }
}

impl EquivLine {
    pub fn class<C: Coefficient>(&self, m: usize) -> K0Element<C> {
        K0Element::line(m, self.degree, self.character)
    }
}

/// `Σᵢ (−1)ⁱ [∧ⁱ ⊕ lines] = Π (1 − [line])^mult`.
pub fn exterior_alternating_sum<C: Coefficient>(lines: &[EquivLine], m: usize) -> K0Element<C> {
    let one = K0Element::one(m);
    let mut acc = one.clone();
    for l in lines {
        let factor = &one - &l.class(m);
        for _ in 0..l.multiplicity {
            acc = &acc * &factor;
        }
    }
    acc
}

/// Classes of `∧ⁱ(⊕ lines)` for `i = 0..=rank`, from `Π (1 + [line]·t)^mult`.
pub fn exterior_powers<C: Coefficient>(lines: &[EquivLine], m: usize) -> Vec<K0Element<C>> {
    let mut series = vec![K0Element::one(m)];
    for l in lines {
        let class = l.class(m);
        for _ in 0..l.multiplicity {
            let mut next = series.clone();
            next.push(K0Element::zero(m));
            for (i, s) in series.iter().enumerate() {
                next[i + 1] = &next[i + 1] + &(s * &class);
            }
            series = next;
        }
    }
    series
}

/// Classes of `Symᵖ(⊕ lines)` for `p = 0..=max_p`, from
/// `Π (Σ_k [line]ᵏ tᵏ)^mult` truncated in `t`.
pub fn symmetric_powers<C: Coefficient>(lines: &[EquivLine], m: usize, max_p: usize) -> Vec<K0Element<C>> {
    let mut series = vec![K0Element::zero(m); max_p + 1];
    series[0] = K0Element::one(m);
    for l in lines {
        let class: K0Element<C> = l.class(m);
        for _ in 0..l.multiplicity {
            // multiplying by 1/(1 − [line]·t) is the running sum s_p += [line]·s_{p−1}
            for p in 1..=max_p {
                let carried = &series[p - 1] * &class;
                series[p] = &series[p] + &carried;
            }
        }
    }
    series
}

pub fn symmetric_power_sum<C: Coefficient>(lines: &[EquivLine], m: usize, p: i64) -> Result<K0Element<C>> {
    if p < 0 {
        return Err(Error::invalid(format!("symmetric power degree must be nonnegative (got {p})")));
    }
    Ok(symmetric_powers(lines, m, p as usize).pop().unwrap())
}

#[cfg(test)]
mod tests {
    use super::*;

    type K = K0Element<RationalFunction>;

    fn lam(w: i64) -> RationalFunction {
        RationalFunction::character(w)
    }

    fn rf(num: &[(i64, i64)], den: &[(i64, i64)]) -> RationalFunction {
        RationalFunction::new(
            &LaurentPoly::from_terms(num.iter().copied()),
            &LaurentPoly::from_terms(den.iter().copied()),
        )
        .unwrap()
    }

    #[test]
    fn eta_relation_truncates() {
        let eta = K::eta(1);
        let one = K::one(1);
        assert_eq!(&(&one + &eta) * &(&one - &eta), one);
        let e2 = K::eta(2);
        assert!((&(&e2 * &e2) * &e2).is_zero());
        let x = K::line(2, 3, -1);
        assert_eq!(&x * &K::one(2), x);
    }

    #[test]
    fn mismatched_dims_are_rejected() {
        assert!(k0_arith(K0Op::Mul, &K::one(1), &K::one(2)).is_err());
        assert!(k0_arith(K0Op::Add, &K::one(1), &K::one(2)).is_err());
    }

    #[test]
    fn rank_character_examples() {
        assert_eq!(k0_rank_char(&K::line(1, -1, 1)), lam(1));
        assert!(k0_rank_char(&K::zero(2)).is_zero());
        assert!(k0_rank_char(&(&K::one(1) - &K::line(1, 0, 0))).is_zero());
    }

    #[test]
    fn inversion_of_one_minus_lambda_twist() {
        // 1 − λ·[O(−1)] on ℙ¹ inverts to 1/(1−λ) + λ/(1−λ)²·η
        let x = &K::one(1) - &K::line(1, -1, 1);
        let y = k0_invert(&x).unwrap();
        assert_eq!(y.coeffs()[0], rf(&[(0, 1)], &[(0, 1), (1, -1)]));
        assert_eq!(y.coeffs()[1], rf(&[(1, 1)], &[(0, 1), (1, -2), (2, 1)]));
        assert_eq!(&x * &y, K::one(1));
        assert_eq!(chi_l(&y), rf(&[(0, 1), (1, -2)], &[(0, 1), (1, -2), (2, 1)]));
    }

    #[test]
    fn inversion_edge_cases() {
        assert_eq!(k0_invert(&K::one(3)).unwrap(), K::one(3));
        let x = &K::one(2) - &K::line(2, 0, 0);
        assert!(matches!(k0_invert(&x), Err(Error::NotInvertible(_))));
    }

    #[test]
    fn denominator_inverse_agrees_with_field_inverse() {
        let x: K0Element<LaurentPoly> = exterior_alternating_sum(
            &[
                EquivLine { degree: -1, character: 2, multiplicity: 2 },
                EquivLine { degree: -1, character: -1, multiplicity: 1 },
            ],
            2,
        );
        let (numer, den) = invert_over_denominator(&x).unwrap();
        let den_inv = RationalFunction::from_laurent(&den).inverse().unwrap();
        let via_fraction = numer.map(RationalFunction::from_laurent).scale_by(&den_inv);
        let via_field = k0_invert(&x.map(RationalFunction::from_laurent)).unwrap();
        assert_eq!(via_fraction, via_field);
    }

    #[test]
    fn euler_characteristics() {
        assert_eq!(euler_char(2, 1), 3.into());
        assert_eq!(euler_char(1, -1), 0.into());
        assert_eq!(euler_char(0, -17), 1.into());
        assert_eq!(euler_char(2, -3), 1.into());
        assert_eq!(euler_char(3, -5), (-4).into());
    }

    #[test]
    fn chi_of_twists_matches_euler_char() {
        for m in 0..=3 {
            for d in -5..=5 {
                assert_eq!(chi_l(&K::twist(m, d)), RationalFunction::from_int(euler_char(m, d)), "m={m} d={d}");
            }
        }
        assert_eq!(chi_l(&K::line(1, 0, 4)), lam(4));
        assert!(chi_l(&K::zero(2)).is_zero());
    }

    #[test]
    fn eta_powers_have_alternating_euler_characteristic() {
        for m in 0..=4 {
            let chis = chi_eta_powers(m);
            for (j, c) in chis.iter().enumerate() {
                assert_eq!(*c, BigInt::from(if j % 2 == 0 { 1 } else { -1 }));
            }
        }
    }

    #[test]
    fn twisted_chi_matches_the_product() {
        let x = &K::line(2, -1, 3) + &K::eta(2).scale_by(&lam(-1));
        for l in -4..=4 {
            assert_eq!(chi_l_twisted(&x, l), chi_l(&(&K::twist(2, l) * &x)), "l={l}");
        }
    }

    #[test]
    fn exterior_sum_examples() {
        let single: K = exterior_alternating_sum(&[EquivLine { degree: 0, character: 3, multiplicity: 1 }], 0);
        assert_eq!(single.coeffs()[0], rf(&[(0, 1), (3, -1)], &[(0, 1)]));
        let two: K = exterior_alternating_sum(
            &[
                EquivLine { degree: 0, character: 1, multiplicity: 1 },
                EquivLine { degree: 0, character: -2, multiplicity: 1 },
            ],
            0,
        );
        assert_eq!(two.coeffs()[0], &rf(&[(0, 1), (1, -1)], &[(0, 1)]) * &rf(&[(0, 1), (-2, -1)], &[(0, 1)]));
        assert_eq!(exterior_alternating_sum::<RationalFunction>(&[], 2), K::one(2));
    }

    #[test]
    fn symmetric_power_examples() {
        let l = [EquivLine { degree: 0, character: 3, multiplicity: 1 }];
        assert_eq!(symmetric_power_sum::<RationalFunction>(&l, 0, 0).unwrap(), K::one(0));
        assert_eq!(symmetric_power_sum::<RationalFunction>(&l, 0, 2).unwrap(), K::scalar(0, lam(6)));
        assert!(symmetric_power_sum::<RationalFunction>(&l, 0, -1).is_err());
        // Sym² of two copies of λ on a point: λ², λ², and λ·λ → 3λ²
        let l2 = [EquivLine { degree: 0, character: 1, multiplicity: 2 }];
        let s: K = symmetric_power_sum(&l2, 0, 2).unwrap();
        assert_eq!(s.coeffs()[0], lam(2).scale(&3.into()));
    }

    #[test]
    fn exterior_powers_of_rank_two() {
        let l = [EquivLine { degree: -1, character: 1, multiplicity: 2 }];
        let ext: Vec<K> = exterior_powers(&l, 1);
        assert_eq!(ext.len(), 3);
        let line: K = K::line(1, -1, 1);
        assert_eq!(ext[2], &line * &line);
        assert_eq!(ext[1], &line + &line);
    }

    #[test]
    fn json_shape() {
        let x = K::line(1, 0, 1);
        let json = serde_json::to_value(&x).unwrap();
        assert_eq!(json["base_dim"], 1);
        assert_eq!(json["coeffs"].as_array().unwrap().len(), 2);
    }
}
