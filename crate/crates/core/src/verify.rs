//! Cross-route comparison for single problems and for the built-in grid.

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::adelictrace::{single_filtration_trace, BiseriesEngine};
use crate::cohomology::{cech_oracle, euler_sequence, h_character, lefschetz_direct, VirtualBundle};
use crate::error::{Error, Result};
use crate::exactnum::{LaurentPoly, RationalFunction};
use crate::localization::{localize_points, LocalizationReport, Localizer};
use crate::torusaction::{is_purely_nonhyperbolic, LinearAction};

/// Truncations and prefix lengths used by [`verify`] and [`run_grid`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Options {
    pub p_max: usize,
    pub q_max: usize,
    pub trunc: i64,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            p_max: 8,
            q_max: 8,
            trunc: 6,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SeriesCheck {
    pub total: RationalFunction,
    pub certificates_passed: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CechCheck {
    pub l: i64,
    pub c: i64,
    pub stabilized: bool,
    pub agrees: bool,
}

/// Every route evaluated on one problem. Routes that do not apply are
/// `None` and explained in `notes`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub direct: RationalFunction,
    pub localize: LocalizationReport,
    pub points: Option<RationalFunction>,
    pub biseries: SeriesCheck,
    pub filtration: Option<SeriesCheck>,
    pub cech: Vec<CechCheck>,
    /// Defect of the action's Euler sequence.
    pub defect: RationalFunction,
    pub failures: Vec<String>,
    pub notes: Vec<String>,
    pub ok: bool,
}

fn note_or_fail<T>(res: Result<T>, notes: &mut Vec<String>) -> Result<Option<T>> {
    match res {
        Ok(v) => Ok(Some(v)),
        Err(Error::NotApplicable { reason, .. }) => {
            notes.push(reason);
            Ok(None)
        }
        Err(e) => Err(e),
    }
}

/// Runs every route on `(action, bundle)` and lists the disagreements.
pub fn verify(action: &LinearAction, bundle: &VirtualBundle, opts: Options) -> Result<VerifyReport> {
    let mut failures = Vec::new();
    let mut notes = Vec::new();

    let direct = lefschetz_direct(action, bundle);
    let localize = Localizer::new(action)?.report(bundle);
    if localize.total != direct {
        failures.push(format!("localize total {} differs from direct {}", localize.total, direct));
    }

    let points = note_or_fail(localize_points(action, bundle), &mut notes)?;
    if let Some(p) = &points {
        if *p != direct {
            failures.push(format!("points formula {p} differs from direct {direct}"));
        }
    }

    let outcome = BiseriesEngine::new(action, opts.p_max, opts.q_max)?.evaluate(bundle);
    let biseries = SeriesCheck {
        total: outcome.total(),
        certificates_passed: outcome.passed(),
    };
    if biseries.total != direct {
        failures.push(format!("biseries total {} differs from direct {}", biseries.total, direct));
    }
    if !biseries.certificates_passed {
        failures.push("a biseries convergence certificate failed".into());
    }

    let filtration = note_or_fail(single_filtration_trace(action, bundle, opts.p_max), &mut notes)?.map(|r| {
        SeriesCheck {
            certificates_passed: r.passed(),
            total: r.total,
        }
    });
    if let Some(f) = &filtration {
        if f.total != direct {
            failures.push(format!("single-filtration total {} differs from direct {}", f.total, direct));
        }
        if !f.certificates_passed {
            failures.push("a single-filtration certificate failed".into());
        }
    }

    let cech = bundle
        .terms()
        .iter()
        .map(|t| {
            let h = cech_oracle(action, t.l, t.c, opts.trunc)?;
            Ok(CechCheck {
                l: t.l,
                c: t.c,
                stabilized: h.stabilized == Some(true),
                agrees: h.same_characters(&h_character(action, t.l, t.c)),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    for ch in &cech {
        if !ch.stabilized {
            failures.push(format!("Čech oracle for O({}) ⊗ λ^{} did not stabilize by truncation {}", ch.l, ch.c, opts.trunc));
        } else if !ch.agrees {
            failures.push(format!("Čech oracle disagrees with monomial characters for O({}) ⊗ λ^{}", ch.l, ch.c));
        }
    }

    let defect = crate::adelictrace::exactness_defect(action, &euler_sequence(action, 0))?;
    if !defect.is_zero() {
        failures.push(format!("Euler sequence defect is {defect}"));
    }

    Ok(VerifyReport {
        ok: failures.is_empty(),
        direct,
        localize,
        points,
        biseries,
        filtration,
        cech,
        defect,
        failures,
        notes,
    })
}

/// Seed of the sampled weight vectors in the grid.
pub const GRID_SEED: u64 = 0x5eed_1e75;
/// Weight entries range over `[−WEIGHT_BOUND, WEIGHT_BOUND]`.
pub const WEIGHT_BOUND: i64 = 3;
/// Number of sampled weight vectors on ℙ³.
pub const SAMPLED_P3: usize = 500;
pub const TWISTS: std::ops::RangeInclusive<i64> = -6..=6;
pub const SHIFTS: std::ops::RangeInclusive<i64> = -2..=2;
/// Twists `d` of the Euler sequence checked on each action.
pub const EULER_TWISTS: std::ops::RangeInclusive<i64> = -3..=3;

fn decode(mut index: usize, len: usize) -> Vec<i64> {
    let base = (2 * WEIGHT_BOUND + 1) as usize;
    let mut w = vec![0; len];
    for slot in w.iter_mut().rev() {
        *slot = (index % base) as i64 - WEIGHT_BOUND;
        index /= base;
    }
    w
}

/// Every weight vector on ℙ⁰, ℙ¹, ℙ² with entries in `[−3, 3]`, followed by
/// 500 distinct vectors on ℙ³ drawn with [`GRID_SEED`] (in lexicographic
/// order).
pub fn grid_actions() -> Vec<LinearAction> {
    let base = (2 * WEIGHT_BOUND + 1) as usize;
    let mut out = Vec::new();
    for n in 0..=2usize {
        for i in 0..base.pow(n as u32 + 1) {
            out.push(LinearAction::new(n, decode(i, n + 1)).expect("length n+1"));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(GRID_SEED);
    let mut picks = sample(&mut rng, base.pow(4), SAMPLED_P3).into_vec();
    picks.sort_unstable();
    out.extend(picks.into_iter().map(|i| LinearAction::new(3, decode(i, 4)).expect("length 4")));
    out
}

/// Outcome of every check on one `(action, l, c)` grid point, for
/// `F = O(l) ⊗ λᶜ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GridCase {
    pub weights: Vec<i64>,
    pub l: i64,
    pub c: i64,
    pub direct: LaurentPoly,
    pub localize_agrees: bool,
    pub biseries_agrees: bool,
    /// All stage-one and stage-two certificates pass.
    pub certificates_pass: bool,
    /// Every certificate's valuations increase at every index.
    pub strictly_increasing: bool,
    /// Every certificate gains at least one order at its final index.
    pub final_margins_ok: bool,
    /// Stabilized Čech characters equal the monomial ones (ℙᴺ with N ≤ 2).
    pub cech_agrees: Option<bool>,
    /// Single-filtration total equals localization (purely non-hyperbolic).
    pub filtration_agrees: Option<bool>,
    pub zero_on_all_routes: bool,
}

impl GridCase {
    pub fn n(&self) -> usize {
        self.weights.len() - 1
    }

    pub fn routes_agree(&self) -> bool {
        self.localize_agrees && self.biseries_agrees
    }
}

/// Checks on one action that do not depend on the bundle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GridAction {
    pub weights: Vec<i64>,
    pub purely_nonhyperbolic: bool,
    /// Twists `d` whose Euler sequence has nonzero defect.
    pub euler_defect_twists: Vec<i64>,
    pub cases: Vec<GridCase>,
}

fn check_action(action: &LinearAction, opts: Options) -> Result<GridAction> {
    let loc = Localizer::new(action)?;
    let engine = BiseriesEngine::new(action, opts.p_max, opts.q_max)?;
    let purely = is_purely_nonhyperbolic(action).is_purely_nonhyperbolic();
    let mut cases = Vec::new();
    for l in TWISTS {
        for c in SHIFTS {
            let bundle = VirtualBundle::line(l, c);
            let direct_rf = lefschetz_direct(action, &bundle);
            let direct = direct_rf.as_laurent().expect("direct route is a Laurent polynomial");
            let localized = loc.total(&bundle);
            let outcome = engine.evaluate(&bundle);
            let biseries_total = outcome.total();
            let certs = &outcome.certificates;
            let cech_agrees = if action.n() <= 2 {
                let h = cech_oracle(action, l, c, opts.trunc)?;
                Some(h.stabilized == Some(true) && h.same_characters(&h_character(action, l, c)))
            } else {
                None
            };
            let filtration_agrees = if purely {
                let f = single_filtration_trace(action, &bundle, opts.p_max)?;
                Some(f.total == localized && f.passed())
            } else {
                None
            };
            cases.push(GridCase {
                weights: action.weights().to_vec(),
                l,
                c,
                localize_agrees: localized == direct_rf,
                biseries_agrees: biseries_total == direct_rf,
                certificates_pass: outcome.passed(),
                strictly_increasing: certs.iter().all(|s| s.certificate.strictly_increasing()),
                final_margins_ok: certs.iter().all(|s| s.certificate.final_margin().is_none_or(|m| m >= 1)),
                cech_agrees,
                filtration_agrees,
                zero_on_all_routes: direct.is_zero() && localized.is_zero() && biseries_total.is_zero(),
                direct,
            });
        }
    }
    let euler_defect_twists = EULER_TWISTS
        .filter(|&d| {
            let seq = euler_sequence(action, d);
            let defect = seq.iter().enumerate().fold(RationalFunction::zero(), |acc, (i, f)| {
                let t = loc.total(f);
                if i % 2 == 0 {
                    &acc + &t
                } else {
                    &acc - &t
                }
            });
            !defect.is_zero()
        })
        .collect();
    Ok(GridAction {
        weights: action.weights().to_vec(),
        purely_nonhyperbolic: purely,
        euler_defect_twists,
        cases,
    })
}

/// Evaluates the whole grid in parallel; results follow [`grid_actions`]
/// order, then `l`, then `c`.
pub fn run_grid(opts: Options) -> Result<Vec<GridAction>> {
    grid_actions().par_iter().map(|a| check_action(a, opts)).collect()
}

/// Counts of grid points failing each check.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct GridSummary {
    pub actions: usize,
    pub cases: usize,
    pub route_disagreements: usize,
    pub certificate_failures: usize,
    pub cech_failures: usize,
    pub filtration_failures: usize,
    pub euler_defects: usize,
}

impl GridSummary {
    pub fn from_results(results: &[GridAction]) -> Self {
        let cases = || results.iter().flat_map(|a| &a.cases);
        GridSummary {
            actions: results.len(),
            cases: cases().count(),
            route_disagreements: cases().filter(|c| !c.routes_agree()).count(),
            certificate_failures: cases().filter(|c| !c.certificates_pass).count(),
            cech_failures: cases().filter(|c| c.cech_agrees == Some(false)).count(),
            filtration_failures: cases().filter(|c| c.filtration_agrees == Some(false)).count(),
            euler_defects: results.iter().map(|a| a.euler_defect_twists.len()).sum(),
        }
    }

    pub fn ok(&self) -> bool {
        self.route_disagreements == 0
            && self.certificate_failures == 0
            && self.cech_failures == 0
            && self.filtration_failures == 0
            && self.euler_defects == 0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_shape() {
        let acts = grid_actions();
        assert_eq!(acts.len(), 7 + 49 + 343 + 500);
        assert_eq!(acts[0].weights(), &[-3]);
        assert_eq!(acts[7].weights(), &[-3, -3]);
        let p3: Vec<_> = acts.iter().filter(|a| a.n() == 3).collect();
        assert!(p3.windows(2).all(|w| w[0].weights() < w[1].weights()));
        assert_eq!(grid_actions(), acts);
    }

    #[test]
    fn verify_projective_line() {
        let a = LinearAction::new(1, vec![1, 0]).unwrap();
        let r = verify(&a, &VirtualBundle::line(0, 0), Options::default()).unwrap();
        assert!(r.ok, "{:?}", r.failures);
        assert!(r.direct.is_one());
        assert_eq!(r.points, Some(RationalFunction::one()));
        assert!(r.filtration.is_some());
    }

    #[test]
    fn verify_notes_skipped_routes() {
        let a = LinearAction::new(2, vec![1, 1, 0]).unwrap();
        let r = verify(&a, &VirtualBundle::line(0, 0), Options::default()).unwrap();
        assert!(r.ok);
        assert!(r.points.is_none());
        assert_eq!(r.notes.len(), 1);
        let h = LinearAction::new(2, vec![0, 1, 2]).unwrap();
        let r = verify(&h, &VirtualBundle::line(2, 1), Options::default()).unwrap();
        assert!(r.ok);
        assert!(r.filtration.is_none());
    }

    #[test]
    fn single_action_check() {
        let a = LinearAction::new(2, vec![3, -3, 0]).unwrap();
        let r = check_action(&a, Options::default()).unwrap();
        assert_eq!(r.cases.len(), 65);
        assert!(r.cases.iter().all(|c| c.routes_agree() && c.certificates_pass && c.cech_agrees == Some(true)));
        assert!(r.euler_defect_twists.is_empty());
    }
}
