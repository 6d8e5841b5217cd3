//! Fixed-point side of the Lefschetz formula.
//!
//! A virtual bundle restricted to a fixed component `ℙᵐ` of weight `a` is
//! `Σ mult·[O(l)] ⊗ λ^{c − l·a}`. Each component contributes
//! `χ_L(F|_Z ⊗ NL)` with `NL = (Σᵢ (−1)ⁱ [∧ⁱ N*])⁻¹`, and the contributions
//! add up to the Lefschetz number.

use serde::Serialize;

use crate::cohomology::VirtualBundle;
use crate::error::{Error, Result};
use crate::exactnum::{LaurentPoly, RationalFunction};
use crate::k0ring::{chi_l_twisted, exterior_alternating_sum, k0_invert, EquivLine, K0Element};
use crate::torusaction::{fixed_locus, FixedComponent, LinearAction};

/// `[O_{ℙᵐ}(l)] ⊗ λ^{c − l·a}` on the component of weight `a`.
pub fn restrict_bundle(l: i64, c: i64, comp: &FixedComponent) -> K0Element {
    K0Element::line(comp.dim(), l, c - l * comp.weight)
}

pub(crate) fn conormal_lines(comp: &FixedComponent) -> Vec<EquivLine> {
    comp.conormal.iter().map(EquivLine::from).collect()
}

/// `(Σᵢ (−1)ⁱ [∧ⁱ N*])⁻¹`.
pub fn nl_factor(comp: &FixedComponent) -> Result<K0Element> {
    if let Some(bad) = comp.conormal.iter().find(|l| l.character == 0) {
        return Err(Error::NotInvertible(format!(
            "conormal line of degree {} has trivial character",
            bad.degree
        )));
    }
    k0_invert(&exterior_alternating_sum(&conormal_lines(comp), comp.dim()))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ComponentContribution {
    pub component: FixedComponent,
    pub value: RationalFunction,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LocalizationReport {
    pub total: RationalFunction,
    pub parts: Vec<ComponentContribution>,
}

/// Fixed locus and NL factors of one action, reusable across bundles.
#[derive(Clone, Debug)]
pub struct Localizer {
    components: Vec<FixedComponent>,
    nl: Vec<K0Element>,
}

impl Localizer {
    pub fn new(action: &LinearAction) -> Result<Self> {
        let components = fixed_locus(action);
        let nl = components.iter().map(nl_factor).collect::<Result<_>>()?;
        Ok(Localizer { components, nl })
    }

    pub fn components(&self) -> &[FixedComponent] {
        &self.components
    }

    /// `χ_L(F|_Z ⊗ NL)` for the `idx`-th component.
    pub fn contribution(&self, idx: usize, bundle: &VirtualBundle) -> RationalFunction {
        let comp = &self.components[idx];
        bundle.terms().iter().fold(RationalFunction::zero(), |acc, t| {
            let chi = chi_l_twisted(&self.nl[idx], t.l);
            let term = chi.mul_character(t.c - t.l * comp.weight).scale(&t.mult.into());
            &acc + &term
        })
    }

    pub fn report(&self, bundle: &VirtualBundle) -> LocalizationReport {
        let parts: Vec<ComponentContribution> = (0..self.components.len())
            .map(|i| ComponentContribution {
                component: self.components[i].clone(),
                value: self.contribution(i, bundle),
            })
            .collect();
        let total = parts.iter().fold(RationalFunction::zero(), |acc, p| &acc + &p.value);
        LocalizationReport { total, parts }
    }

    pub fn total(&self, bundle: &VirtualBundle) -> RationalFunction {
        (0..self.components.len()).fold(RationalFunction::zero(), |acc, i| &acc + &self.contribution(i, bundle))
    }
}

/// Localization over the components of the fixed locus, in descending
/// weight order.
pub fn localize(action: &LinearAction, bundle: &VirtualBundle) -> Result<LocalizationReport> {
    Ok(Localizer::new(action)?.report(bundle))
}

/// `Σ_j Σ_terms mult·λ^{c − l·a_j} / Π_{i≠j} (1 − λ^{a_j − a_i})`, valid when
/// the fixed locus is finite.
pub fn localize_points(action: &LinearAction, bundle: &VirtualBundle) -> Result<RationalFunction> {
    if !action.has_distinct_weights() {
        let witness = fixed_locus(action).into_iter().find(|c| c.dim() > 0);
        return Err(Error::not_applicable(
            "weights repeat, so the fixed locus is not finite; use localize",
            witness,
        ));
    }
    let a = action.weights();
    let mut total = RationalFunction::zero();
    for (j, &aj) in a.iter().enumerate() {
        let num = bundle.terms().iter().fold(LaurentPoly::zero(), |acc, t| {
            &acc + &LaurentPoly::monomial(t.mult.into(), t.c - t.l * aj)
        });
        let den = a
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != j)
            .fold(LaurentPoly::one(), |acc, (_, &ai)| {
                &acc * &(&LaurentPoly::one() - &LaurentPoly::character(aj - ai))
            });
        total = &total + &RationalFunction::new(&num, &den)?;
    }
    Ok(total)
}
