//! Torus characters of the cohomology of `O(l) ⊗ λᶜ` on ℙᴺ.
//!
//! The coordinate function `x_j` carries the character `λ^{−a_j}`, so a
//! (Laurent) monomial `x^m` spans a line of character `λ^{c − Σ m_j a_j}`.
//! `H⁰` has the monomials of degree `l`; `Hᴺ` has the Laurent monomials of
//! degree `l` with every exponent `≤ −1`; the middle degrees vanish.

mod cech;

use std::collections::BTreeMap;

use serde::ser::SerializeMap;
use serde::{Deserialize, Serialize, Serializer};

use crate::exactnum::{LaurentPoly, RationalFunction};
use crate::torusaction::LinearAction;

pub use cech::cech_oracle;

/// `O(l) ⊗ λᶜ` taken `mult` times (negative for virtual differences).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BundleTerm {
    pub l: i64,
    pub c: i64,
    pub mult: i64,
}

/// Formal integer combination of equivariant line bundles.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(from = "Vec<BundleTerm>", into = "Vec<BundleTerm>")]
pub struct VirtualBundle {
    terms: Vec<BundleTerm>,
}

impl VirtualBundle {
    /// Merges repeated `(l, c)` pairs (first occurrence fixes the order) and
    /// drops terms whose multiplicity cancels.
    pub fn new(terms: impl IntoIterator<Item = BundleTerm>) -> Self {
        let mut merged: Vec<BundleTerm> = Vec::new();
        for t in terms {
            match merged.iter_mut().find(|m| m.l == t.l && m.c == t.c) {
                Some(m) => m.mult += t.mult,
                None => merged.push(t),
            }
        }
        merged.retain(|t| t.mult != 0);
        VirtualBundle { terms: merged }
    }

    pub fn zero() -> Self {
        VirtualBundle::default()
    }

    /// `O(l) ⊗ λᶜ`.
    pub fn line(l: i64, c: i64) -> Self {
        VirtualBundle::new([BundleTerm { l, c, mult: 1 }])
    }

    pub fn terms(&self) -> &[BundleTerm] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn plus(&self, other: &VirtualBundle) -> VirtualBundle {
        VirtualBundle::new(self.terms.iter().chain(&other.terms).copied())
    }

    pub fn negated(&self) -> VirtualBundle {
        VirtualBundle::new(self.terms.iter().map(|t| BundleTerm { mult: -t.mult, ..*t }))
    }

    /// Tensor with `O(d) ⊗ λᵉ`.
    pub fn twisted(&self, d: i64, e: i64) -> VirtualBundle {
        VirtualBundle::new(self.terms.iter().map(|t| BundleTerm {
            l: t.l + d,
            c: t.c + e,
            mult: t.mult,
        }))
    }

    /// Determinant line `(twist, character)`: `⊗ (O(l) ⊗ λᶜ)^mult`.
    pub fn determinant(&self) -> (i64, i64) {
        self.terms
            .iter()
            .fold((0, 0), |(l, c), t| (l + t.mult * t.l, c + t.mult * t.c))
    }

    /// Virtual rank `Σ mult`.
    pub fn rank(&self) -> i64 {
        self.terms.iter().map(|t| t.mult).sum()
    }
}

impl From<Vec<BundleTerm>> for VirtualBundle {
    fn from(terms: Vec<BundleTerm>) -> Self {
        VirtualBundle::new(terms)
    }
}

impl From<VirtualBundle> for Vec<BundleTerm> {
    fn from(b: VirtualBundle) -> Self {
        b.terms
    }
}

/// Trace of λ on each `Hⁱ`, `i = 0..=N`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CohomologyCharacter {
    degrees: Vec<LaurentPoly>,
    /// Set by the Čech oracle: whether a larger truncation changes nothing.
    pub stabilized: Option<bool>,
}

impl CohomologyCharacter {
    pub(crate) fn new(degrees: Vec<LaurentPoly>) -> Self {
        CohomologyCharacter {
            degrees,
            stabilized: None,
        }
    }

    pub fn degree(&self, i: usize) -> LaurentPoly {
        self.degrees.get(i).cloned().unwrap_or_default()
    }

    pub fn degrees(&self) -> &[LaurentPoly] {
        &self.degrees
    }

    /// `Σᵢ (−1)ⁱ Tr(λ | Hⁱ)`.
    pub fn euler_trace(&self) -> LaurentPoly {
        self.degrees.iter().enumerate().fold(LaurentPoly::zero(), |acc, (i, h)| {
            if i % 2 == 0 {
                &acc + h
            } else {
                &acc - h
            }
        })
    }

    /// Same characters in every degree, ignoring the stabilization flag.
    pub fn same_characters(&self, other: &CohomologyCharacter) -> bool {
        self.degrees == other.degrees
    }
}

impl Serialize for CohomologyCharacter {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let h: BTreeMap<String, &LaurentPoly> =
            self.degrees.iter().enumerate().map(|(i, p)| (i.to_string(), p)).collect();
        let mut map = s.serialize_map(None)?;
        map.serialize_entry("h", &h)?;
        if let Some(st) = self.stabilized {
            map.serialize_entry("stabilized", &st)?;
        }
        map.end()
    }
}

/// Calls `f` on every vector of `parts` nonnegative integers summing to `total`.
pub(crate) fn for_each_composition(total: i64, parts: usize, f: &mut impl FnMut(&[i64])) {
    fn go(rest: i64, slot: usize, buf: &mut Vec<i64>, f: &mut impl FnMut(&[i64])) {
        if slot + 1 == buf.len() {
            buf[slot] = rest;
            f(buf);
            return;
        }
        for k in 0..=rest {
            buf[slot] = k;
            go(rest - k, slot + 1, buf, f);
        }
    }
    if total < 0 || parts == 0 {
        return;
    }
    let mut buf = vec![0; parts];
    go(total, 0, &mut buf, f);
}

/// Characters of `Hⁱ(ℙᴺ, O(l) ⊗ λᶜ)` from monomial bases.
pub fn h_character(action: &LinearAction, l: i64, c: i64) -> CohomologyCharacter {
    let n = action.n();
    let a = action.weights();
    let mut degrees = vec![LaurentPoly::zero(); n + 1];

    let mut h0: BTreeMap<i64, i64> = BTreeMap::new();
    for_each_composition(l, n + 1, &mut |m| {
        let w: i64 = m.iter().zip(a).map(|(mj, aj)| mj * aj).sum();
        *h0.entry(c - w).or_default() += 1;
    });

    // m_j = −1 − k_j with k ≥ 0 and Σk = −l − N − 1
    let mut top: BTreeMap<i64, i64> = BTreeMap::new();
    let shift: i64 = a.iter().sum();
    for_each_composition(-l - n as i64 - 1, n + 1, &mut |k| {
        let w: i64 = k.iter().zip(a).map(|(kj, aj)| kj * aj).sum();
        *top.entry(c + shift + w).or_default() += 1;
    });

    degrees[0] = LaurentPoly::from_terms(h0);
    degrees[n] = &degrees[n] + &LaurentPoly::from_terms(top);
    CohomologyCharacter::new(degrees)
}

/// `Lef(ℙᴺ, F, 𝔾ₘ) = Σ_terms mult·Σᵢ (−1)ⁱ Tr(λ | Hⁱ)`.
pub fn lefschetz_direct(action: &LinearAction, bundle: &VirtualBundle) -> RationalFunction {
    let total = bundle.terms().iter().fold(LaurentPoly::zero(), |acc, t| {
        let chi = h_character(action, t.l, t.c).euler_trace();
        &acc + &chi.scale(&t.mult.into())
    });
    RationalFunction::from_laurent(&total)
}

/// `[T_{ℙᴺ}] = Σ_j [O(1) ⊗ λ^{a_j}] − [O]`, from the equivariant Euler sequence.
pub fn tangent_virtual_bundle(action: &LinearAction) -> VirtualBundle {
    let sections = action.weights().iter().map(|&a| BundleTerm { l: 1, c: a, mult: 1 });
    VirtualBundle::new(sections.chain([BundleTerm { l: 0, c: 0, mult: -1 }]))
}

/// The Euler sequence `0 → O → ⊕_j O(1) ⊗ λ^{a_j} → T → 0` twisted by `O(d)`.
pub fn euler_sequence(action: &LinearAction, d: i64) -> Vec<VirtualBundle> {
    let middle = VirtualBundle::new(action.weights().iter().map(|&a| BundleTerm { l: 1, c: a, mult: 1 }));
    vec![
        VirtualBundle::line(0, 0).twisted(d, 0),
        middle.twisted(d, 0),
        tangent_virtual_bundle(action).twisted(d, 0),
    ]
}
