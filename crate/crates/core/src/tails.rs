//! Tail enumeration and the nested tail chains attached to an anchor pair.
//!
//! For components `i`, `j` and the marked component 1, three families of
//! tails separate `{C_i, C_j}` from `C_1`:
//!
//! * the 1-tails containing `C_i` (respectively `C_j`), which always form a
//!   chain under inclusion;
//! * the nested 2-tail chain, obtained by repeatedly taking the meet of all
//!   qualifying 2-tails strictly above the previous entry;
//! * the nested 3-tail chain, built the same way from the 3-tails that are
//!   free against every member of the 2-tail chain.
//!
//! The meet-closure of each candidate family is a theorem; the chain
//! construction re-checks it at runtime and fails loudly on violation.

use crate::graph::Scan;
use crate::{Deg, DualGraph, EnumGuard, Error, Result, Subcurve};

/// Chain of `arity`-tails separating the anchor components from component 1,
/// ordered so that consecutive entries are strictly nested with disjoint
/// cuts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TailChain {
    pub entries: Vec<Subcurve>,
    pub arity: u8,
    pub anchor: (usize, usize),
}

impl TailChain {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Checks the defining conditions on `g`: every entry is an
    /// `arity`-tail containing both anchor components with component 1 on
    /// the other side, and consecutive entries are strictly nested with
    /// disjoint cuts.
    pub fn validate(&self, g: &DualGraph) -> bool {
        let (i, j) = self.anchor;
        for w in &self.entries {
            if !g.is_tail(*w)
                || g.cut_size(*w) != self.arity as usize
                || !w.contains_component(i)
                || !w.contains_component(j)
                || w.contains_component(1)
            {
                return false;
            }
        }
        self.entries
            .windows(2)
            .all(|pair| g.nested_strict(pair[0], pair[1]))
    }
}

/// The multiset of nested tails for an anchor pair: both 1-tail chains, the
/// 2-tail chain and the 3-tail chain. When `i == j` the 1-tail chain is
/// counted twice.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NestedTails {
    pub components: usize,
    pub i: usize,
    pub j: usize,
    pub one_i: TailChain,
    pub one_j: TailChain,
    pub two: TailChain,
    pub three: TailChain,
}

impl NestedTails {
    /// Multiset members: 1-tail chains for both anchors (duplicated when
    /// `i == j`), then the 2-tail and 3-tail chains.
    pub fn members(&self) -> impl Iterator<Item = Subcurve> + '_ {
        self.one_i
            .entries
            .iter()
            .chain(&self.one_j.entries)
            .chain(&self.two.entries)
            .chain(&self.three.entries)
            .copied()
    }

    /// Members of the 2-tail and 3-tail chains only.
    pub fn members_23(&self) -> impl Iterator<Item = Subcurve> + '_ {
        self.two.entries.iter().chain(&self.three.entries).copied()
    }

    pub fn len(&self) -> usize {
        self.one_i.len() + self.one_j.len() + self.two.len() + self.three.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// All tails of `g`, optionally filtered by cut size, in ascending bitmask
/// order.
pub fn enumerate_tails(g: &DualGraph, k: Option<usize>, guard: EnumGuard) -> Result<Vec<Subcurve>> {
    guard.admit(g)?;
    let scan = g.scan();
    Ok(scan
        .masks()
        .filter(|&m| scan.is_tail(m) && k.is_none_or(|k| scan.k(m) == k))
        .map(|m| scan.subcurve(m))
        .collect())
}

/// The 1-tails containing `C_i` with `C_1` on the other side, sorted by
/// inclusion. These always form a chain; a [`Error::ChainViolation`]
/// signals a bug, not bad input.
pub fn one_tail_chain(g: &DualGraph, i: usize, guard: EnumGuard) -> Result<TailChain> {
    guard.admit(g)?;
    let scan = g.scan();
    let masks = one_tail_masks(&scan, i)?;
    Ok(TailChain {
        entries: masks.into_iter().map(|m| scan.subcurve(m)).collect(),
        arity: 1,
        anchor: (i, i),
    })
}

/// The 2-tails containing `C_i ∪ C_j` with `C_1` on the other side.
pub fn two_tail_candidates(
    g: &DualGraph,
    i: usize,
    j: usize,
    guard: EnumGuard,
) -> Result<Vec<Subcurve>> {
    guard.admit(g)?;
    let scan = g.scan();
    let masks = candidate_masks(&scan, i, j, 2)?;
    Ok(masks.into_iter().map(|m| scan.subcurve(m)).collect())
}

/// The 3-tails containing `C_i ∪ C_j` with `C_1` on the other side that
/// are free against every member of the nested 2-tail chain.
pub fn three_tail_candidates(
    g: &DualGraph,
    i: usize,
    j: usize,
    two_chain: &TailChain,
    guard: EnumGuard,
) -> Result<Vec<Subcurve>> {
    guard.admit(g)?;
    let scan = g.scan();
    let chain_masks: Vec<u32> = two_chain.entries.iter().map(|w| w.mask()).collect();
    let masks = three_candidate_masks(&scan, i, j, &chain_masks)?;
    Ok(masks.into_iter().map(|m| scan.subcurve(m)).collect())
}

/// Folds a candidate family into its nested chain: the first entry is the
/// meet of all candidates, and each next entry is the meet of the
/// candidates strictly above the previous one. Every computed meet must
/// itself be a candidate ([`Error::ClosureViolation`] otherwise); an empty
/// input yields an empty chain. The result does not depend on the input
/// order.
pub fn nested_chain(g: &DualGraph, candidates: &[Subcurve]) -> Result<Vec<Subcurve>> {
    let scan = g.scan();
    let masks: Vec<u32> = candidates.iter().map(|w| w.mask()).collect();
    let chain = chain_masks(&scan, &masks)?;
    Ok(chain.into_iter().map(|m| scan.subcurve(m)).collect())
}

/// Assembles the full nested tail multiset for the anchor pair `(i, j)`.
pub fn nested_tails(g: &DualGraph, i: usize, j: usize, guard: EnumGuard) -> Result<NestedTails> {
    guard.admit(g)?;
    let scan = g.scan();
    build_nested_tails(g, &scan, i, j)
}

pub(crate) fn build_nested_tails(
    g: &DualGraph,
    scan: &Scan,
    i: usize,
    j: usize,
) -> Result<NestedTails> {
    let families = pair_families(scan, i, j)?;
    let to_chain = |masks: &[u32], arity: u8| TailChain {
        entries: masks.iter().map(|&m| scan.subcurve(m)).collect(),
        arity,
        anchor: (i, j),
    };
    Ok(NestedTails {
        components: g.components(),
        i,
        j,
        one_i: TailChain {
            anchor: (i, i),
            ..to_chain(&families.one_i, 1)
        },
        one_j: TailChain {
            anchor: (j, j),
            ..to_chain(&families.one_j, 1)
        },
        two: to_chain(&families.two, 2),
        three: to_chain(&families.three, 3),
    })
}

/// Twist coefficient vector: entry `l` counts the multiset members
/// containing component `l + 1`. Component 1 never occurs.
pub fn twist_coefficients(t: &NestedTails) -> Vec<Deg> {
    let mut a = vec![0 as Deg; t.components];
    for w in t.members() {
        for l in w.component_indices() {
            a[l - 1] += 1;
        }
    }
    debug_assert_eq!(a[0], 0);
    a
}

/// Mask-level tail families for one anchor pair, shared by the public
/// constructors and the verification scans.
pub(crate) struct PairFamilies {
    pub one_i: Vec<u32>,
    pub one_j: Vec<u32>,
    /// Nested 2-tail chain.
    pub two: Vec<u32>,
    /// Qualifying free 3-tails (the chain's candidate family).
    pub s3: Vec<u32>,
    /// Nested 3-tail chain.
    pub three: Vec<u32>,
}

pub(crate) fn pair_families(scan: &Scan, i: usize, j: usize) -> Result<PairFamilies> {
    let one_i = one_tail_masks(scan, i)?;
    let one_j = one_tail_masks(scan, j)?;
    let s2 = candidate_masks(scan, i, j, 2)?;
    let two = chain_masks(scan, &s2)?;
    let s3 = three_candidate_masks(scan, i, j, &two)?;
    let three = chain_masks(scan, &s3)?;
    Ok(PairFamilies {
        one_i,
        one_j,
        two,
        s3,
        three,
    })
}

fn anchor_bits(scan: &Scan, i: usize, j: usize) -> Result<(u32, u32)> {
    for index in [i, j] {
        if index < 1 || index > scan.components as usize {
            return Err(Error::BadComponent {
                index,
                components: scan.components as usize,
            });
        }
    }
    Ok((1 << (i - 1) | 1 << (j - 1), 1))
}

fn candidate_masks(scan: &Scan, i: usize, j: usize, k: usize) -> Result<Vec<u32>> {
    let (inside, outside) = anchor_bits(scan, i, j)?;
    Ok(scan
        .masks()
        .filter(|&m| {
            m & inside == inside && m & outside == 0 && scan.k(m) == k && scan.is_tail(m)
        })
        .collect())
}

fn one_tail_masks(scan: &Scan, i: usize) -> Result<Vec<u32>> {
    let mut masks = candidate_masks(scan, i, i, 1)?;
    masks.sort_by_key(|m| (m.count_ones(), *m));
    for pair in masks.windows(2) {
        let nested = pair[0] & pair[1] == pair[0]
            && pair[0] != pair[1]
            && scan.term(pair[0]) & scan.term(pair[1]) == 0;
        if !nested {
            return Err(Error::ChainViolation {
                at: scan.subcurve(pair[1]),
            });
        }
    }
    Ok(masks)
}

fn three_candidate_masks(scan: &Scan, i: usize, j: usize, two_chain: &[u32]) -> Result<Vec<u32>> {
    let mut masks = candidate_masks(scan, i, j, 3)?;
    masks.retain(|&m| two_chain.iter().all(|&w| scan.free(m, w)));
    Ok(masks)
}

pub(crate) fn chain_masks(scan: &Scan, candidates: &[u32]) -> Result<Vec<u32>> {
    if candidates.is_empty() {
        return Ok(Vec::new());
    }
    let mut sorted: Vec<u32> = candidates.to_vec();
    sorted.sort_unstable();
    sorted.dedup();

    let meet_of = |pool: &[u32]| pool.iter().fold(u32::MAX, |acc, &m| acc & m);
    let check = |computed: u32| -> Result<u32> {
        if computed != 0 && sorted.binary_search(&computed).is_ok() {
            Ok(computed)
        } else {
            Err(Error::ClosureViolation {
                computed: if computed == 0 {
                    "{}".to_owned()
                } else {
                    scan.subcurve(computed).to_string()
                },
            })
        }
    };

    let mut chain = vec![check(meet_of(&sorted))?];
    loop {
        let last = *chain.last().unwrap();
        let above: Vec<u32> = sorted
            .iter()
            .copied()
            .filter(|&m| last != m && last & m == last && scan.term(last) & scan.term(m) == 0)
            .collect();
        if above.is_empty() {
            return Ok(chain);
        }
        chain.push(check(meet_of(&above))?);
    }
}
