//! The degree-0 twist pipeline: assemble the nested tails for an anchor
//! pair, twist the double-point bundle `O(2P - Q - Q')` by minus their sum,
//! and test the result for quasistability relative to component 1.
//!
//! Quasistability of the twisted bundle holds for every connected dual
//! graph and every anchor pair; the pipeline still runs the exhaustive
//! oracle and reports the verdict instead of assuming it.

use crate::graph::Scan;
use crate::stability::{
    base_multidegree, beta, deg_table, is_quasistable_at, quasistable_scan_with, twist_multidegree,
};
use crate::tails::{build_nested_tails, twist_coefficients, NestedTails};
use crate::{Deg, DualGraph, EnumGuard, Multidegree, Result, Subcurve};

/// Result of the twist pipeline for one anchor pair.
#[derive(Debug, Clone)]
pub struct AbelNeronResult {
    pub i: usize,
    pub j: usize,
    pub tails: NestedTails,
    /// Multiplicity of each component over the tail multiset.
    pub coefficients: Vec<Deg>,
    /// Multidegree of the twisted bundle; total degree 0.
    pub multidegree: Multidegree,
    pub quasistable: bool,
    pub witness: Option<Subcurve>,
}

/// Which chain members define the reduced quasistability check.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReducedFamily {
    /// All nested tails: the 1-tail chains plus the 2- and 3-tail chains.
    AllTails,
    /// The 3-tail chain alone.
    ThreeTails,
}

/// Outcome of the reduced check next to the exhaustive verdict it must
/// reproduce.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ReducedCheck {
    pub family: ReducedFamily,
    /// Quasistable at every tail normalized with respect to the family.
    pub reduced: bool,
    /// Exhaustive verdict over all subcurves.
    pub exhaustive: bool,
}

impl ReducedCheck {
    pub fn agrees(&self) -> bool {
        self.reduced == self.exhaustive
    }
}

/// Runs the pipeline for the anchor pair `(i, j)`.
pub fn abel_neron_multidegree(
    g: &DualGraph,
    i: usize,
    j: usize,
    guard: EnumGuard,
) -> Result<AbelNeronResult> {
    guard.admit(g)?;
    let scan = g.scan();
    pipeline(g, &scan, i, j)
}

/// Runs the pipeline for every anchor pair, row by row.
pub fn all_pairs(g: &DualGraph, guard: EnumGuard) -> Result<Vec<AbelNeronResult>> {
    guard.admit(g)?;
    let scan = g.scan();
    let p = g.components();
    let mut out = Vec::with_capacity(p * p);
    for i in 1..=p {
        for j in 1..=p {
            out.push(pipeline(g, &scan, i, j)?);
        }
    }
    Ok(out)
}

pub(crate) fn pipeline(g: &DualGraph, scan: &Scan, i: usize, j: usize) -> Result<AbelNeronResult> {
    let tails = build_nested_tails(g, scan, i, j)?;
    let multidegree = twisted_multidegree(g, i, j, &tails)?;
    debug_assert_eq!(multidegree.total(), 0);

    // The complement of every 3-tail chain member has β exactly one half;
    // this pins both the twist sign convention and the chain construction.
    for w in &tails.three.entries {
        debug_assert_eq!(beta(g, &multidegree, w.complement()).doubled(), 1);
    }

    let deg = deg_table(scan.full, multidegree.as_slice());
    let witness = quasistable_scan_with(scan, &deg, 1, false).map(|m| scan.subcurve(m));
    Ok(AbelNeronResult {
        i,
        j,
        coefficients: twist_coefficients(&tails),
        tails,
        multidegree,
        quasistable: witness.is_none(),
        witness,
    })
}

/// Base multidegree for `(i, j)` plus the twist of every multiset member.
pub fn twisted_multidegree(
    g: &DualGraph,
    i: usize,
    j: usize,
    tails: &NestedTails,
) -> Result<Multidegree> {
    let mut l = base_multidegree(g, i, j)?;
    for w in tails.members() {
        l += &twist_multidegree(g, w);
    }
    Ok(l)
}

/// Shared-cut tallies of `z` against the 2- and 3-tail chain members:
/// `t⁺` sums the shared cut sizes over members `W` with `W ⊆ Z` or
/// `Z ⊆ W`, and `t⁻` over members with `W ⊆ Z^c` or `Z^c ⊆ W`.
pub fn terminal_tallies(g: &DualGraph, z: Subcurve, tails: &NestedTails) -> (usize, usize) {
    let zc = z.complement();
    let cut = g.cut(z);
    let mut plus = 0;
    let mut minus = 0;
    for w in tails.members_23() {
        let shared = cut.intersection(g.cut(w)).len();
        if w.is_subset_of(z) || z.is_subset_of(w) {
            plus += shared;
        } else if w.is_subset_of(zc) || zc.is_subset_of(w) {
            minus += shared;
        }
    }
    (plus, minus)
}

/// Tests quasistability of the twisted bundle only at the tails that are
/// normalized with respect to the chosen chain family, next to the
/// exhaustive verdict over all subcurves. The two must agree for the
/// [`ReducedFamily::AllTails`] family.
///
/// With [`ReducedFamily::ThreeTails`] the bundle is twisted by the 3-tail
/// chain alone and the tails quantified over are the ones normalized with
/// respect to that chain.
pub fn reduced_quasistability(
    g: &DualGraph,
    i: usize,
    j: usize,
    family: ReducedFamily,
    guard: EnumGuard,
) -> Result<ReducedCheck> {
    guard.admit(g)?;
    let scan = g.scan();
    let tails = build_nested_tails(g, &scan, i, j)?;
    reduced_check(g, &scan, i, j, &tails, family)
}

pub(crate) fn reduced_check(
    g: &DualGraph,
    scan: &Scan,
    i: usize,
    j: usize,
    tails: &NestedTails,
    family: ReducedFamily,
) -> Result<ReducedCheck> {
    let (l, members): (Multidegree, Vec<Subcurve>) = match family {
        ReducedFamily::AllTails => (twisted_multidegree(g, i, j, tails)?, tails.members().collect()),
        ReducedFamily::ThreeTails => {
            let mut l = base_multidegree(g, i, j)?;
            for w in &tails.three.entries {
                l += &twist_multidegree(g, *w);
            }
            (l, tails.three.entries.clone())
        }
    };
    let member_masks: Vec<u32> = members.iter().map(|w| w.mask()).collect();

    let mut reduced = true;
    for mask in scan.masks() {
        if !scan.is_tail(mask) {
            continue;
        }
        let normalized = member_masks
            .iter()
            .all(|&w| scan.free(mask, w) || scan.perfect(mask, w));
        if normalized && !is_quasistable_at(g, &l, scan.subcurve(mask), 1) {
            reduced = false;
            break;
        }
    }

    let deg = deg_table(scan.full, l.as_slice());
    let exhaustive = quasistable_scan_with(scan, &deg, 1, false).is_none();
    Ok(ReducedCheck {
        family,
        reduced,
        exhaustive,
    })
}
