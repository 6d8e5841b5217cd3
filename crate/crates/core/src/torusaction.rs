//! Linear 𝔾ₘ-actions on ℙᴺ and their fixed loci.
//!
//! The action `λ·[x₀:…:x_N] = [λ^{a₀}x₀:…:λ^{a_N}x_N]` fixes one coordinate
//! subspace per distinct weight. On the component of weight `a` the conormal
//! direction towards the coordinates of weight `b` is a copy of
//! `O(−1)^{⊕ mult}` on which λ acts by `λ^{a−b}` (a trivial line when the
//! component is a point).

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Weights `(a₀, …, a_N)` of a diagonal action on `ℙᴺ`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct LinearAction {
    n: usize,
    weights: Vec<i64>,
}

impl LinearAction {
    pub fn new(n: usize, weights: Vec<i64>) -> Result<Self> {
        if weights.len() != n + 1 {
            return Err(Error::invalid(format!(
                "weights length must be n+1 = {} (got {})",
                n + 1,
                weights.len()
            )));
        }
        Ok(LinearAction { n, weights })
    }

    /// Dimension `N` of the projective space.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn weights(&self) -> &[i64] {
        &self.weights
    }

    pub fn has_distinct_weights(&self) -> bool {
        let mut w = self.weights.clone();
        w.sort_unstable();
        w.windows(2).all(|p| p[0] != p[1])
    }
}

/// One summand of the conormal bundle of a fixed component.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ConormalLine {
    /// Underlying line bundle `O(degree)`: 0 on points, −1 otherwise.
    pub degree: i64,
    /// λ acts by `λ^character`; never zero.
    pub character: i64,
    #[serde(rename = "mult")]
    pub multiplicity: u32,
}

/// A connected component of the fixed locus: the coordinate subspace spanned
/// by the coordinates sharing one weight.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FixedComponent {
    pub weight: i64,
    pub indices: Vec<usize>,
    pub conormal: Vec<ConormalLine>,
}

impl FixedComponent {
    /// Dimension `m` of the component `ℙᵐ`.
    pub fn dim(&self) -> usize {
        self.indices.len() - 1
    }

    /// Characters of the conormal space, repeated by multiplicity.
    pub fn conormal_characters(&self) -> Vec<i64> {
        self.conormal
            .iter()
            .flat_map(|l| std::iter::repeat_n(l.character, l.multiplicity as usize))
            .collect()
    }
}

/// Components of the fixed locus, one per distinct weight, sorted by
/// descending weight. Conormal lines are listed by descending target weight.
pub fn fixed_locus(action: &LinearAction) -> Vec<FixedComponent> {
    let mut by_weight: BTreeMap<i64, Vec<usize>> = BTreeMap::new();
    for (i, &a) in action.weights.iter().enumerate() {
        by_weight.entry(a).or_default().push(i);
    }
    by_weight
        .iter()
        .rev()
        .map(|(&a, indices)| {
            let degree = if indices.len() == 1 { 0 } else { -1 };
            let conormal = by_weight
                .iter()
                .rev()
                .filter(|(&b, _)| b != a)
                .map(|(&b, others)| ConormalLine {
                    degree,
                    character: a - b,
                    multiplicity: others.len() as u32,
                })
                .collect();
            FixedComponent {
                weight: a,
                indices: indices.clone(),
                conormal,
            }
        })
        .collect()
}

/// Splitting of the tangent space along a component into the part fixed by
/// the torus and the conormal lines with positive and negative characters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TangentSplit {
    pub zero_dim: usize,
    pub plus: Vec<ConormalLine>,
    pub minus: Vec<ConormalLine>,
}

impl TangentSplit {
    pub fn plus_rank(&self) -> usize {
        self.plus.iter().map(|l| l.multiplicity as usize).sum()
    }

    pub fn minus_rank(&self) -> usize {
        self.minus.iter().map(|l| l.multiplicity as usize).sum()
    }
}

pub fn tangent_split(action: &LinearAction, comp: &FixedComponent) -> Result<TangentSplit> {
    if !fixed_locus(action).contains(comp) {
        return Err(Error::invalid(format!(
            "component of weight {} is not a fixed component of this action",
            comp.weight
        )));
    }
    Ok(split_of(comp))
}

pub(crate) fn split_of(comp: &FixedComponent) -> TangentSplit {
    let (plus, minus) = comp.conormal.iter().cloned().partition(|l| l.character > 0);
    TangentSplit {
        zero_dim: comp.dim(),
        plus,
        minus,
    }
}

/// Whether every fixed component sees flow from one side only.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Hyperbolicity {
    PurelyNonHyperbolic,
    /// A component with conormal characters of both signs.
    Hyperbolic { witness: FixedComponent },
}

impl Hyperbolicity {
    pub fn is_purely_nonhyperbolic(&self) -> bool {
        matches!(self, Hyperbolicity::PurelyNonHyperbolic)
    }
}

pub fn is_purely_nonhyperbolic(action: &LinearAction) -> Hyperbolicity {
    fixed_locus(action)
        .into_iter()
        .find(|c| {
            let s = split_of(c);
            !s.plus.is_empty() && !s.minus.is_empty()
        })
        .map_or(Hyperbolicity::PurelyNonHyperbolic, |witness| Hyperbolicity::Hyperbolic { witness })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn act(w: &[i64]) -> LinearAction {
        LinearAction::new(w.len() - 1, w.to_vec()).unwrap()
    }

    fn line(degree: i64, character: i64, multiplicity: u32) -> ConormalLine {
        ConormalLine {
            degree,
            character,
            multiplicity,
        }
    }

    #[test]
    fn projective_line_has_two_fixed_points() {
        let z = fixed_locus(&act(&[1, 0]));
        assert_eq!(z.len(), 2);
        assert_eq!((z[0].weight, z[0].conormal.clone()), (1, vec![line(0, 1, 1)]));
        assert_eq!((z[1].weight, z[1].conormal.clone()), (0, vec![line(0, -1, 1)]));
    }

    #[test]
    fn repeated_weight_gives_a_line() {
        let z = fixed_locus(&act(&[1, 1, 0]));
        assert_eq!(z[0].indices, vec![0, 1]);
        assert_eq!(z[0].dim(), 1);
        assert_eq!(z[0].conormal, vec![line(-1, 1, 1)]);
        assert_eq!(z[1].indices, vec![2]);
        assert_eq!(z[1].conormal, vec![line(0, -1, 2)]);
    }

    #[test]
    fn trivial_action_fixes_everything() {
        let z = fixed_locus(&act(&[0, 0, 0]));
        assert_eq!(z.len(), 1);
        assert_eq!(z[0].indices, vec![0, 1, 2]);
        assert!(z[0].conormal.is_empty());
    }

    #[test]
    fn tangent_split_examples() {
        let a = act(&[1, 1, 0]);
        let z = fixed_locus(&a);
        let s = tangent_split(&a, &z[0]).unwrap();
        assert_eq!((s.zero_dim, s.plus.clone(), s.minus.clone()), (1, vec![line(-1, 1, 1)], vec![]));
        let s = tangent_split(&a, &z[1]).unwrap();
        assert_eq!((s.zero_dim, s.plus.clone(), s.minus.clone()), (0, vec![], vec![line(0, -1, 2)]));

        let t = act(&[4, 4, 4, 4]);
        let s = tangent_split(&t, &fixed_locus(&t)[0]).unwrap();
        assert_eq!((s.zero_dim, s.plus.len(), s.minus.len()), (3, 0, 0));
    }

    #[test]
    fn foreign_component_is_rejected() {
        let other = fixed_locus(&act(&[2, 0]));
        assert!(matches!(tangent_split(&act(&[1, 0]), &other[0]), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn hyperbolicity_examples() {
        assert!(is_purely_nonhyperbolic(&act(&[1, 0])).is_purely_nonhyperbolic());
        assert!(is_purely_nonhyperbolic(&act(&[5, 5, 5])).is_purely_nonhyperbolic());
        match is_purely_nonhyperbolic(&act(&[0, 1, 2])) {
            Hyperbolicity::Hyperbolic { witness } => {
                assert_eq!(witness.weight, 1);
                assert_eq!(witness.conormal_characters(), vec![-1, 1]);
            }
            other => panic!("expected hyperbolic, got {other:?}"),
        }
    }

    #[test]
    fn weight_length_is_validated() {
        assert!(LinearAction::new(1, vec![1]).is_err());
    }

    #[test]
    fn component_json_shape() {
        let z = fixed_locus(&act(&[1, 1, 0]));
        assert_eq!(
            serde_json::to_string(&z[1]).unwrap(),
            r#"{"weight":0,"indices":[2],"conormal":[{"degree":0,"character":-1,"mult":2}]}"#
        );
    }
}
