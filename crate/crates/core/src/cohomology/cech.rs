//! Brute-force Čech cohomology on the standard affine cover of ℙᴺ.
//!
//! Sections of `O(l)` over `U_I = {x_i ≠ 0, i ∈ I}` are spanned by Laurent
//! monomials `x^m` of degree `l` with `m_j ≥ 0` for `j ∉ I`; these spaces are
//! infinite, so exponents are boxed to `|m_j| ≤ M`. The Čech differential
//! maps a monomial to the same monomial on smaller opens, so the truncated
//! complex splits into one finite subcomplex per monomial, graded by the
//! monomial's character. Ranks are computed by exact elimination over ℚ.

use std::collections::{BTreeMap, HashMap};

use num_traits::{One, Zero};

use super::CohomologyCharacter;
use crate::error::{Error, Result};
use crate::exactnum::{LaurentPoly, Rational};
use crate::torusaction::LinearAction;

/// Čech characters at truncation `trunc`, flagged as stabilized when the
/// box `trunc + 1` yields the same characters.
pub fn cech_oracle(action: &LinearAction, l: i64, c: i64, trunc: i64) -> Result<CohomologyCharacter> {
    if trunc < 1 {
        return Err(Error::invalid(format!("truncation must be at least 1 (got {trunc})")));
    }
    let at = truncated_characters(action, l, c, trunc);
    let above = truncated_characters(action, l, c, trunc + 1);
    let mut out = CohomologyCharacter::new(at);
    out.stabilized = Some(out.degrees() == above.as_slice());
    Ok(out)
}

fn truncated_characters(action: &LinearAction, l: i64, c: i64, bound: i64) -> Vec<LaurentPoly> {
    let n = action.n();
    let weights = action.weights();
    let mut by_support: HashMap<u32, Vec<usize>> = HashMap::new();
    let mut counts: Vec<BTreeMap<i64, i64>> = vec![BTreeMap::new(); n + 1];

    for_each_boxed(l, n + 1, bound, &mut |m| {
        let negative = m
            .iter()
            .enumerate()
            .filter(|(_, &e)| e < 0)
            .fold(0u32, |acc, (j, _)| acc | (1 << j));
        let dims = by_support
            .entry(negative)
            .or_insert_with(|| subcomplex_cohomology(n + 1, negative));
        let w = c - m.iter().zip(weights).map(|(mj, aj)| mj * aj).sum::<i64>();
        for (p, &d) in dims.iter().enumerate() {
            if d > 0 {
                *counts[p].entry(w).or_default() += d as i64;
            }
        }
    });
    counts.into_iter().map(LaurentPoly::from_terms).collect()
}

/// Monomials `m ∈ [−bound, bound]^parts` with `Σ m = total`.
fn for_each_boxed(total: i64, parts: usize, bound: i64, f: &mut impl FnMut(&[i64])) {
    fn go(rest: i64, slot: usize, bound: i64, buf: &mut Vec<i64>, f: &mut impl FnMut(&[i64])) {
        let left = (buf.len() - slot - 1) as i64;
        if left == 0 {
            if rest.abs() <= bound {
                buf[slot] = rest;
                f(buf);
            }
            return;
        }
        let lo = (-bound).max(rest - left * bound);
        let hi = bound.min(rest + left * bound);
        for e in lo..=hi {
            buf[slot] = e;
            go(rest - e, slot + 1, bound, buf, f);
        }
    }
    let mut buf = vec![0; parts];
    go(total, 0, bound, &mut buf, f);
}

/// Cohomology dimensions of the Čech complex of one monomial whose negative
/// exponents are `support`: cochains live on the opens `U_I` with
/// `support ⊆ I`, in degree `|I| − 1`.
fn subcomplex_cohomology(charts: usize, support: u32) -> Vec<usize> {
    let mut cells: Vec<Vec<u32>> = vec![Vec::new(); charts];
    for set in 1u32..(1 << charts) {
        if set & support == support {
            cells[set.count_ones() as usize - 1].push(set);
        }
    }
    let ranks: Vec<usize> = (0..charts)
        .map(|p| {
            if p + 1 == charts {
                return 0;
            }
            let rows = &cells[p + 1];
            let cols = &cells[p];
            let mut mat = vec![vec![Rational::zero(); cols.len()]; rows.len()];
            for (ci, &src) in cols.iter().enumerate() {
                for j in 0..charts {
                    if src & (1 << j) != 0 {
                        continue;
                    }
                    let dst = src | (1 << j);
                    let ri = rows.iter().position(|&r| r == dst).unwrap();
                    // sign (−1)^(position of j in the sorted index set)
                    let pos = (src & ((1 << j) - 1)).count_ones();
                    mat[ri][ci] = if pos % 2 == 0 { Rational::one() } else { -Rational::one() };
                }
            }
            rank(mat)
        })
        .collect();
    (0..charts)
        .map(|p| {
            let incoming = if p == 0 { 0 } else { ranks[p - 1] };
            cells[p].len() - ranks[p] - incoming
        })
        .collect()
}

fn rank(mut mat: Vec<Vec<Rational>>) -> usize {
    let rows = mat.len();
    let cols = mat.first().map_or(0, Vec::len);
    let mut r = 0;
    for col in 0..cols {
        let Some(piv) = (r..rows).find(|&i| !mat[i][col].is_zero()) else {
            continue;
        };
        mat.swap(r, piv);
        let pivot = mat[r][col].clone();
        for i in r + 1..rows {
            if mat[i][col].is_zero() {
                continue;
            }
            let factor = &mat[i][col] / &pivot;
            for k in col..cols {
                let delta = &factor * &mat[r][k];
                mat[i][k] -= delta;
            }
        }
        r += 1;
        if r == rows {
            break;
        }
    }
    r
}
