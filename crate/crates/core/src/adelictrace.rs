//! Fixed-part traces through filtrations of the completed local rings.
//!
//! Along a fixed component `Z` the conormal bundle splits into the lines with
//! positive characters (`N*₊`, whose symmetric powers converge at λ = 0) and
//! those with negative characters (`N*₋`, converging at λ = ∞). The graded
//! pieces of the resulting bifiltration have traces
//!
//! ```text
//! Tr_{p,q} = Σ_Z χ_L(F|_Z ⊗ Symᵖ N*₊ ⊗ Sym^q N*₋),
//! ```
//!
//! which are Laurent polynomials. Summing over `q` first (at ∞) and then over
//! `p` (at 0) recovers the localization total; [`biseries`] certifies both
//! stages on a finite prefix.

use num_bigint::BigInt;
use serde::Serialize;

use crate::cohomology::VirtualBundle;
use crate::error::{Error, Result};
use crate::exactnum::{laurent_partials_certificate, Certificate, LaurentPoly, Point, RationalFunction};
use crate::k0ring::{
    chi_l, chi_l_twisted, exterior_alternating_sum, invert_over_denominator, symmetric_powers, EquivLine, K0Element,
};
use crate::localization::Localizer;
use crate::torusaction::{fixed_locus, is_purely_nonhyperbolic, split_of, FixedComponent, Hyperbolicity, LinearAction};

type LK0 = K0Element<LaurentPoly>;

/// `λᶜ · Π_w 1/(1 − λʷ)`: the trace on a completed regular local ring with
/// the given cotangent characters.
pub fn local_ring_trace(cotangent_chars: &[i64], c: i64) -> Result<RationalFunction> {
    if cotangent_chars.contains(&0) {
        return Err(Error::invalid("cotangent characters must be nonzero"));
    }
    let den = cotangent_chars.iter().fold(LaurentPoly::one(), |acc, &w| {
        &acc * &(&LaurentPoly::one() - &LaurentPoly::character(w))
    });
    RationalFunction::new(&LaurentPoly::character(c), &den)
}

fn lines(conormal: &[crate::torusaction::ConormalLine]) -> Vec<EquivLine> {
    conormal.iter().map(EquivLine::from).collect()
}

fn restricted(bundle: &VirtualBundle, comp: &FixedComponent) -> LK0 {
    let m = comp.dim();
    bundle.terms().iter().fold(K0Element::zero(m), |acc, t| {
        let line: LK0 = K0Element::line(m, t.l, t.c - t.l * comp.weight);
        &acc + &line.scale_by(&LaurentPoly::constant(t.mult))
    })
}

/// `χ_L(F|_Z ⊗ x)` from the twist table, without forming the product.
fn chi_against(bundle: &VirtualBundle, comp: &FixedComponent, x: &LK0) -> LaurentPoly {
    bundle.terms().iter().fold(LaurentPoly::zero(), |acc, t| {
        let chi = chi_l_twisted(x, t.l).shift(t.c - t.l * comp.weight);
        &acc + &chi.scale(&BigInt::from(t.mult))
    })
}

/// `χ_L(F|_Z ⊗ Symᵖ N*₊ ⊗ Sym^q N*₋)` on one component.
pub fn trace_pq(
    action: &LinearAction,
    bundle: &VirtualBundle,
    comp: &FixedComponent,
    p: i64,
    q: i64,
) -> Result<LaurentPoly> {
    if p < 0 || q < 0 {
        return Err(Error::invalid(format!("filtration indices must be nonnegative (got p={p}, q={q})")));
    }
    if !fixed_locus(action).contains(comp) {
        return Err(Error::invalid(format!(
            "component of weight {} is not a fixed component of this action",
            comp.weight
        )));
    }
    let split = split_of(comp);
    let m = comp.dim();
    let sp: LK0 = symmetric_powers(&lines(&split.plus), m, p as usize).pop().unwrap();
    let sq: LK0 = symmetric_powers(&lines(&split.minus), m, q as usize).pop().unwrap();
    Ok(chi_l(&(&(&restricted(bundle, comp) * &sp) * &sq)))
}

/// A certificate tagged with its summation stage; stage-one certificates
/// carry the fixed `p`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StageCertificate {
    pub stage: u8,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub index: Option<usize>,
    #[serde(flatten)]
    pub certificate: Certificate,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BiseriesReport {
    /// `(p, q, Tr_{p,q})` in row-major order.
    pub tr_pq: Vec<(usize, usize, LaurentPoly)>,
    /// Closed forms of `Σ_q Tr_{p,q}`.
    pub tr_p: Vec<RationalFunction>,
    pub total: RationalFunction,
    pub certificates: Vec<StageCertificate>,
}

impl BiseriesReport {
    pub fn passed(&self) -> bool {
        self.certificates.iter().all(|c| c.certificate.passed())
    }

    pub fn tr(&self, p: usize, q: usize) -> Option<&LaurentPoly> {
        self.tr_pq.iter().find(|(i, j, _)| *i == p && *j == q).map(|(_, _, v)| v)
    }
}

#[derive(Clone, Debug)]
struct ComponentTables {
    comp: FixedComponent,
    /// `Symᵖ N*₊ ⊗ Sym^q N*₋`, indexed `[p][q]`.
    sym: Vec<Vec<LK0>>,
    /// Numerators of `Symᵖ N*₊ ⊗ NL₋` over the common stage-one denominator.
    tr_p: Vec<LK0>,
    /// Numerator of `NL₊ ⊗ NL₋` over the common total denominator.
    total: LK0,
}

/// Symmetric-power tables and NL numerators of one action, reusable across
/// bundles.
///
/// Every closed form is kept as a Laurent numerator over a denominator shared
/// by all components, so partial sums and their errors stay polynomial.
#[derive(Clone, Debug)]
pub struct BiseriesEngine {
    p_max: usize,
    q_max: usize,
    tables: Vec<ComponentTables>,
    /// `Π_Z r₋(Z)^{m+1}`: denominator of every `Tr_p`.
    den_p: LaurentPoly,
    /// `Π_Z (r₊(Z) r₋(Z))^{m+1}`: denominator of the total.
    den_total: LaurentPoly,
}

impl BiseriesEngine {
    pub fn new(action: &LinearAction, p_max: usize, q_max: usize) -> Result<Self> {
        if p_max < 1 || q_max < 1 {
            return Err(Error::invalid(format!("p_max and q_max must be at least 1 (got {p_max}, {q_max})")));
        }
        struct Local {
            comp: FixedComponent,
            sym_plus: Vec<LK0>,
            sym_minus: Vec<LK0>,
            inv_plus: (LK0, LaurentPoly),
            inv_minus: (LK0, LaurentPoly),
        }
        let locals = fixed_locus(action)
            .into_iter()
            .map(|comp| {
                let split = split_of(&comp);
                let m = comp.dim();
                let (plus, minus) = (lines(&split.plus), lines(&split.minus));
                Ok(Local {
                    sym_plus: symmetric_powers(&plus, m, p_max),
                    sym_minus: symmetric_powers(&minus, m, q_max),
                    inv_plus: invert_over_denominator(&exterior_alternating_sum(&plus, m))?,
                    inv_minus: invert_over_denominator(&exterior_alternating_sum(&minus, m))?,
                    comp,
                })
            })
            .collect::<Result<Vec<_>>>()?;

        let product = |f: &dyn Fn(&Local) -> LaurentPoly, skip: Option<usize>| {
            locals
                .iter()
                .enumerate()
                .filter(|(j, _)| Some(*j) != skip)
                .fold(LaurentPoly::one(), |acc, (_, loc)| &acc * &f(loc))
        };
        let minus_den = |loc: &Local| loc.inv_minus.1.clone();
        let both_den = |loc: &Local| &loc.inv_plus.1 * &loc.inv_minus.1;

        let tables = locals
            .iter()
            .enumerate()
            .map(|(i, loc)| {
                let cof_p = product(&minus_den, Some(i));
                let cof_total = product(&both_den, Some(i));
                let nl_minus = loc.inv_minus.0.scale_by(&cof_p);
                ComponentTables {
                    comp: loc.comp.clone(),
                    sym: loc
                        .sym_plus
                        .iter()
                        .map(|sp| loc.sym_minus.iter().map(|sq| sp * sq).collect())
                        .collect(),
                    tr_p: loc.sym_plus.iter().map(|sp| sp * &nl_minus).collect(),
                    total: (&loc.inv_plus.0 * &loc.inv_minus.0).scale_by(&cof_total),
                }
            })
            .collect();
        Ok(BiseriesEngine {
            p_max,
            q_max,
            tables,
            den_p: product(&minus_den, None),
            den_total: product(&both_den, None),
        })
    }

    /// All traces and certificates for one bundle, before reduction of the
    /// closed forms.
    pub fn evaluate(&self, bundle: &VirtualBundle) -> BiseriesOutcome {
        let mut tr_pq = vec![vec![LaurentPoly::zero(); self.q_max + 1]; self.p_max + 1];
        let mut tr_p = vec![LaurentPoly::zero(); self.p_max + 1];
        let mut total = LaurentPoly::zero();
        for t in &self.tables {
            for p in 0..=self.p_max {
                for q in 0..=self.q_max {
                    tr_pq[p][q] += &chi_against(bundle, &t.comp, &t.sym[p][q]);
                }
                tr_p[p] += &chi_against(bundle, &t.comp, &t.tr_p[p]);
            }
            total += &chi_against(bundle, &t.comp, &t.total);
        }

        let mut certificates: Vec<StageCertificate> = (0..=self.p_max)
            .map(|p| StageCertificate {
                stage: 1,
                index: Some(p),
                certificate: laurent_partials_certificate(&tr_pq[p], &tr_p[p], &self.den_p, Point::Infinity),
            })
            .collect();
        // Σ_p Tr_p = (Σ_p T_p)/D against total/D_tot: measure Σ T_p − total·D/D_tot
        // and shift by ord₀ D.
        let raw = laurent_partials_certificate(&tr_p, &(&total * &self.den_p), &self.den_total, Point::Zero);
        let shift = self.den_p.min_exp().unwrap();
        let valuations = raw.valuations.iter().map(|v| v.map(|v| v - shift)).collect();
        let unchanged: Vec<bool> = tr_p.iter().enumerate().map(|(n, t)| n > 0 && t.is_zero()).collect();
        certificates.push(StageCertificate {
            stage: 2,
            index: None,
            certificate: Certificate::from_valuations(Point::Zero, valuations, &unchanged),
        });

        BiseriesOutcome {
            tr_pq,
            tr_p,
            total,
            den_p: self.den_p.clone(),
            den_total: self.den_total.clone(),
            certificates,
        }
    }
}

/// Unreduced result of [`BiseriesEngine::evaluate`].
#[derive(Clone, Debug)]
pub struct BiseriesOutcome {
    tr_pq: Vec<Vec<LaurentPoly>>,
    tr_p: Vec<LaurentPoly>,
    total: LaurentPoly,
    den_p: LaurentPoly,
    den_total: LaurentPoly,
    pub certificates: Vec<StageCertificate>,
}

impl BiseriesOutcome {
    pub fn passed(&self) -> bool {
        self.certificates.iter().all(|c| c.certificate.passed())
    }

    pub fn total(&self) -> RationalFunction {
        RationalFunction::new(&self.total, &self.den_total).expect("denominator is a nonzero product")
    }

    /// Exact comparison of the total with a Laurent polynomial, by
    /// cross-multiplication.
    pub fn total_equals(&self, value: &LaurentPoly) -> bool {
        self.total == value * &self.den_total
    }

    pub fn into_report(self) -> BiseriesReport {
        let total = self.total();
        let tr_p = self
            .tr_p
            .iter()
            .map(|t| RationalFunction::new(t, &self.den_p).expect("denominator is a nonzero product"))
            .collect();
        let tr_pq = self
            .tr_pq
            .into_iter()
            .enumerate()
            .flat_map(|(p, row)| row.into_iter().enumerate().map(move |(q, v)| (p, q, v)))
            .collect();
        BiseriesReport {
            tr_pq,
            tr_p,
            total,
            certificates: self.certificates,
        }
    }
}

/// The two-stage resummation of `Tr_{p,q}`: over `q` at ∞ for each
/// `p ≤ p_max`, then over `p` at 0.
pub fn biseries(action: &LinearAction, bundle: &VirtualBundle, p_max: usize, q_max: usize) -> Result<BiseriesReport> {
    Ok(BiseriesEngine::new(action, p_max, q_max)?.evaluate(bundle).into_report())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FiltrationPart {
    pub component: FixedComponent,
    pub value: RationalFunction,
    pub point: Point,
    pub certificate: Certificate,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FiltrationTraceReport {
    pub per_component: Vec<FiltrationPart>,
    pub total: RationalFunction,
}

impl FiltrationTraceReport {
    pub fn passed(&self) -> bool {
        self.per_component.iter().all(|p| p.certificate.passed())
    }
}

/// One-sided filtration traces for actions whose components each see flow
/// from a single side. Components with positive conormal characters are
/// summed at 0, those with negative characters at ∞; a component with no
/// conormal directions contributes its single graded piece at 0.
pub fn single_filtration_trace(
    action: &LinearAction,
    bundle: &VirtualBundle,
    p_max: usize,
) -> Result<FiltrationTraceReport> {
    if p_max < 1 {
        return Err(Error::invalid(format!("p_max must be at least 1 (got {p_max})")));
    }
    if let Hyperbolicity::Hyperbolic { witness } = is_purely_nonhyperbolic(action) {
        return Err(Error::not_applicable(
            "the action is hyperbolic: a fixed component has conormal characters of both signs",
            Some(witness),
        ));
    }
    let per_component = fixed_locus(action)
        .into_iter()
        .map(|comp| {
            let split = split_of(&comp);
            let (side, point) = if split.minus.is_empty() {
                (lines(&split.plus), Point::Zero)
            } else {
                (lines(&split.minus), Point::Infinity)
            };
            let m = comp.dim();
            let terms: Vec<LaurentPoly> = symmetric_powers::<LaurentPoly>(&side, m, p_max)
                .iter()
                .map(|s| chi_against(bundle, &comp, s))
                .collect();
            let (inv, den) = invert_over_denominator(&exterior_alternating_sum(&side, m))?;
            let num = chi_against(bundle, &comp, &inv);
            let certificate = laurent_partials_certificate(&terms, &num, &den, point);
            Ok(FiltrationPart {
                value: RationalFunction::new(&num, &den)?,
                component: comp,
                point,
                certificate,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let total = per_component.iter().fold(RationalFunction::zero(), |acc, p| &acc + &p.value);
    Ok(FiltrationTraceReport { per_component, total })
}

/// `Σᵢ (−1)ⁱ Tr(𝔾ₘ, 𝔸^fix(Fᵢ))`, with the fixed-part trace evaluated by
/// localization. Vanishes on exact sequences.
pub fn exactness_defect(action: &LinearAction, sequence: &[VirtualBundle]) -> Result<RationalFunction> {
    let loc = Localizer::new(action)?;
    Ok(sequence.iter().enumerate().fold(RationalFunction::zero(), |acc, (i, f)| {
        let t = loc.total(f);
        if i % 2 == 0 {
            &acc + &t
        } else {
            &acc - &t
        }
    }))
}
