//! Dense univariate polynomials with arbitrary-precision integer coefficients.
//!
//! `coeffs[k]` is the coefficient of `λ^k`; trailing zeros are never stored,
//! so the zero polynomial is the empty vector and structural equality is
//! value equality.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Poly {
    coeffs: Vec<BigInt>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Poly::constant(BigInt::one())
    }

    pub fn constant(c: BigInt) -> Self {
        Poly::from_coeffs(vec![c])
    }

    /// `c·λ^k`.
    pub fn monomial(c: BigInt, k: usize) -> Self {
        if c.is_zero() {
            return Poly::zero();
        }
        let mut coeffs = vec![BigInt::zero(); k + 1];
        coeffs[k] = c;
        Poly { coeffs }
    }

    pub fn from_coeffs(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn from_i64s(coeffs: &[i64]) -> Self {
        Poly::from_coeffs(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<BigInt> {
        self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Exponent of the lowest nonzero term.
    pub fn low_degree(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn coeff(&self, k: usize) -> BigInt {
        self.coeffs.get(k).cloned().unwrap_or_default()
    }

    pub fn leading(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    /// Nonnegative gcd of all coefficients (zero for the zero polynomial).
    pub fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for c in &self.coeffs {
            g = g.gcd(c);
            if g.is_one() {
                break;
            }
        }
        g
    }

    /// Divides out the content and makes the leading coefficient positive.
    pub fn primitive_part(&self) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let mut g = self.content();
        if self.coeffs.last().is_some_and(Signed::is_negative) {
            g = -g;
        }
        self.div_scalar_exact(&g)
    }

    pub fn scale(&self, k: &BigInt) -> Poly {
        if k.is_zero() {
            return Poly::zero();
        }
        Poly {
            coeffs: self.coeffs.iter().map(|c| c * k).collect(),
        }
    }

    /// Coefficientwise exact division; the caller guarantees divisibility.
    pub fn div_scalar_exact(&self, k: &BigInt) -> Poly {
        if k.is_one() {
            return self.clone();
        }
        Poly {
            coeffs: self.coeffs.iter().map(|c| c / k).collect(),
        }
    }

    /// Multiplies by `λ^k`.
    pub fn shift_up(&self, k: usize) -> Poly {
        if self.is_zero() || k == 0 {
            return self.clone();
        }
        let mut coeffs = vec![BigInt::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        Poly { coeffs }
    }

    /// Divides by `λ^k`; the low `k` coefficients must be zero.
    pub fn shift_down(&self, k: usize) -> Poly {
        debug_assert!(self.coeffs.iter().take(k).all(Zero::is_zero));
        Poly::from_coeffs(self.coeffs.iter().skip(k).cloned().collect())
    }

    /// `λ^deg · p(1/λ)`: the coefficient vector reversed.
    pub fn reversed(&self) -> Poly {
        let mut coeffs = self.coeffs.clone();
        coeffs.reverse();
        Poly::from_coeffs(coeffs)
    }

    pub fn eval_at_one(&self) -> BigInt {
        self.coeffs.iter().sum()
    }

    /// Exact quotient `self / d` over the integers, or `None` if `d` does not
    /// divide `self` in `ℤ[λ]`.
    pub fn div_exact(&self, d: &Poly) -> Option<Poly> {
        let dd = d.degree()?;
        if self.is_zero() {
            return Some(Poly::zero());
        }
        let nd = self.degree().unwrap();
        if nd < dd {
            return None;
        }
        let lead = d.leading().unwrap();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![BigInt::zero(); nd - dd + 1];
        for k in (0..=nd - dd).rev() {
            let top = &rem[k + dd];
            if top.is_zero() {
                continue;
            }
            let (q, r) = top.div_rem(lead);
            if !r.is_zero() {
                return None;
            }
            for (i, dc) in d.coeffs.iter().enumerate() {
                if !dc.is_zero() {
                    rem[k + i] -= &q * dc;
                }
            }
            quot[k] = q;
        }
        if rem.iter().all(Zero::is_zero) {
            Some(Poly::from_coeffs(quot))
        } else {
            None
        }
    }

    /// `lc(d)^(deg self − deg d + 1) · self mod d`.
    fn pseudo_rem(&self, d: &Poly) -> Poly {
        let dd = d.degree().expect("pseudo remainder by zero");
        let lead = d.leading().unwrap().clone();
        let mut rem = self.coeffs.clone();
        while rem.len() > dd && !rem.is_empty() {
            let n = rem.len() - 1;
            let top = rem[n].clone();
            for c in rem.iter_mut() {
                *c *= &lead;
            }
            for (i, dc) in d.coeffs.iter().enumerate() {
                rem[n - dd + i] -= &top * dc;
            }
            while rem.last().is_some_and(Zero::is_zero) {
                rem.pop();
            }
        }
        Poly::from_coeffs(rem)
    }

    /// Greatest common divisor over `ℚ[λ]`, returned primitive with positive
    /// leading coefficient. `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &Poly) -> Poly {
        if self.is_zero() {
            return other.primitive_part();
        }
        if other.is_zero() {
            return self.primitive_part();
        }
        let a = self.primitive_part();
        let b = other.primitive_part();
        if a.degree() == Some(0) || b.degree() == Some(0) {
            return Poly::one();
        }
        if let Some(g) = modular::gcd(&a, &b) {
            return g;
        }
        prs_gcd(a, b)
    }
}

/// Primitive polynomial remainder sequence. Slow but unconditional.
fn prs_gcd(a: Poly, b: Poly) -> Poly {
    let (mut a, mut b) = if a.degree() >= b.degree() { (a, b) } else { (b, a) };
    while !b.is_zero() {
        let r = a.pseudo_rem(&b);
        a = b;
        b = r.primitive_part();
    }
    a.primitive_part()
}

mod modular {
    //! Gcd modulo the Mersenne prime 2^61 − 1, lifted and verified by exact
    //! trial division. Any lift that fails verification returns `None`.

    use super::Poly;
    use num_bigint::BigInt;
    use num_integer::Integer;
    use num_traits::{Signed, ToPrimitive, Zero};

    const P: u64 = (1 << 61) - 1;

    fn reduce(c: &BigInt) -> u64 {
        if let Some(v) = c.to_i64() {
            return v.rem_euclid(P as i64) as u64;
        }
        let r = c.mod_floor(&BigInt::from(P));
        r.to_u64().unwrap()
    }

    fn mul(a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % P as u128) as u64
    }

    fn sub(a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + P - b
        }
    }

    fn inv(a: u64) -> u64 {
        let (mut base, mut exp, mut acc) = (a, P - 2, 1u64);
        while exp > 0 {
            if exp & 1 == 1 {
                acc = mul(acc, base);
            }
            base = mul(base, base);
            exp >>= 1;
        }
        acc
    }

    fn trim(v: &mut Vec<u64>) {
        while v.last() == Some(&0) {
            v.pop();
        }
    }

    fn rem(a: &mut Vec<u64>, b: &[u64]) {
        let db = b.len() - 1;
        let inv_lead = inv(b[db]);
        while a.len() > db && !a.is_empty() {
            let n = a.len() - 1;
            let q = mul(a[n], inv_lead);
            for (i, &bc) in b.iter().enumerate() {
                a[n - db + i] = sub(a[n - db + i], mul(q, bc));
            }
            trim(a);
        }
    }

    pub(super) fn gcd(a: &Poly, b: &Poly) -> Option<Poly> {
        let la = a.leading()?;
        let lb = b.leading()?;
        let mut x: Vec<u64> = a.coeffs().iter().map(reduce).collect();
        let mut y: Vec<u64> = b.coeffs().iter().map(reduce).collect();
        if x.last() == Some(&0) || y.last() == Some(&0) {
            return None;
        }
        trim(&mut x);
        trim(&mut y);
        while !y.is_empty() {
            rem(&mut x, &y);
            std::mem::swap(&mut x, &mut y);
        }
        // Degree of the modular gcd bounds the true degree from above.
        if x.len() == 1 {
            return Some(Poly::one());
        }
        let beta = la.gcd(lb);
        let scale = mul(reduce(&beta), inv(*x.last().unwrap()));
        let half = P / 2;
        let lifted: Vec<BigInt> = x
            .iter()
            .map(|&c| {
                let v = mul(c, scale);
                if v > half {
                    BigInt::from(v) - BigInt::from(P)
                } else {
                    BigInt::from(v)
                }
            })
            .collect();
        let cand = Poly::from_coeffs(lifted).primitive_part();
        if cand.is_zero() || cand.leading().is_some_and(|c| c.is_negative() || c.is_zero()) {
            return None;
        }
        if a.div_exact(&cand).is_some() && b.div_exact(&cand).is_some() {
            Some(cand)
        } else {
            None
        }
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let (long, short) = if self.coeffs.len() >= rhs.coeffs.len() {
            (self, rhs)
        } else {
            (rhs, self)
        };
        let mut coeffs = long.coeffs.clone();
        for (c, s) in coeffs.iter_mut().zip(&short.coeffs) {
            *c += s;
        }
        Poly::from_coeffs(coeffs)
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let mut coeffs = self.coeffs.clone();
        if coeffs.len() < rhs.coeffs.len() {
            coeffs.resize(rhs.coeffs.len(), BigInt::zero());
        }
        for (c, s) in coeffs.iter_mut().zip(&rhs.coeffs) {
            *c -= s;
        }
        Poly::from_coeffs(coeffs)
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        Poly::from_coeffs(convolve(&self.coeffs, &rhs.coeffs))
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

/// Schoolbook product with a machine-word fast path when every partial sum
/// provably fits in an `i128`.
pub(crate) fn convolve(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let small = |v: &[BigInt]| -> Option<Vec<i64>> {
        v.iter()
            .map(|c| c.to_i64().filter(|x| x.unsigned_abs() < (1 << 40)))
            .collect()
    };
    if a.len().min(b.len()) < (1 << 40) {
        if let (Some(x), Some(y)) = (small(a), small(b)) {
            let mut out = vec![0i128; x.len() + y.len() - 1];
            for (i, &xi) in x.iter().enumerate() {
                if xi == 0 {
                    continue;
                }
                for (j, &yj) in y.iter().enumerate() {
                    out[i + j] += xi as i128 * yj as i128;
                }
            }
            return out.into_iter().map(BigInt::from).collect();
        }
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, ai) in a.iter().enumerate() {
        if ai.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            if !bj.is_zero() {
                out[i + j] += ai * bj;
            }
        }
    }
    out
}

/// Writes `c·λ^k` terms in ascending order, e.g. `1 - 2λ + λ^2`.
pub(crate) fn fmt_terms<'a>(
    f: &mut fmt::Formatter<'_>,
    terms: impl Iterator<Item = (i64, &'a BigInt)>,
) -> fmt::Result {
    let mut first = true;
    for (k, c) in terms {
        if c.is_zero() {
            continue;
        }
        let mag = c.abs();
        if first {
            if c.is_negative() {
                write!(f, "-")?;
            }
        } else if c.is_negative() {
            write!(f, " - ")?;
        } else {
            write!(f, " + ")?;
        }
        first = false;
        match k {
            0 => write!(f, "{mag}")?,
            _ => {
                if !mag.is_one() {
                    write!(f, "{mag}")?;
                }
                if k == 1 {
                    write!(f, "λ")?;
                } else {
                    write!(f, "λ^{k}")?;
                }
            }
        }
    }
    if first {
        write!(f, "0")?;
    }
    Ok(())
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_terms(f, self.coeffs.iter().enumerate().map(|(k, c)| (k as i64, c)))
    }
}
