//! Multidegree arithmetic and the canonical semistability and
//! quasistability tests.
//!
//! A degree-0 line bundle on the curve restricts to each component with
//! some degree; the vector of these degrees is the multidegree. Canonical
//! semistability bounds `|deg_Z|` by half the cut size of every subcurve
//! `Z`; quasistability additionally demands `β(Z) = deg_Z + k_Z/2 > 0`
//! whenever `Z` contains the marked component. All comparisons run on
//! doubled integers, so no division ever happens.

use std::fmt;
use std::ops::{AddAssign, Neg};

use crate::graph::Scan;
use crate::scalar::Degree;
use crate::{Deg, DualGraph, EnumGuard, Error, Result, Subcurve};

/// Integer degree vector of length `p`, bound to a dual graph by length.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Multidegree<T = Deg> {
    entries: Vec<T>,
}

impl<T: Degree> Multidegree<T> {
    pub fn new(entries: Vec<T>) -> Self {
        Multidegree { entries }
    }

    pub fn zero(components: usize) -> Self {
        Multidegree {
            entries: vec![T::zero(); components],
        }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Degree on component `l` (1-based).
    pub fn on_component(&self, l: usize) -> T {
        self.entries[l - 1]
    }

    pub fn as_slice(&self) -> &[T] {
        &self.entries
    }

    pub fn total(&self) -> T {
        self.entries.iter().copied().sum()
    }

    /// Total degree of the restriction to `z`: the sum over its components.
    pub fn deg_on(&self, z: Subcurve) -> T {
        self.check(z);
        z.component_indices().map(|l| self.entries[l - 1]).sum()
    }

    fn check(&self, z: Subcurve) {
        assert_eq!(
            z.complement().len() + z.len(),
            self.entries.len(),
            "multidegree bound to a graph with a different component count"
        );
    }
}

impl<T: Degree> From<Vec<T>> for Multidegree<T> {
    fn from(entries: Vec<T>) -> Self {
        Multidegree::new(entries)
    }
}

impl<T: Degree> AddAssign<&Multidegree<T>> for Multidegree<T> {
    fn add_assign(&mut self, rhs: &Multidegree<T>) {
        assert_eq!(self.entries.len(), rhs.entries.len());
        for (a, b) in self.entries.iter_mut().zip(&rhs.entries) {
            *a += *b;
        }
    }
}

impl<T: Degree> Neg for Multidegree<T> {
    type Output = Multidegree<T>;
    fn neg(self) -> Multidegree<T> {
        Multidegree {
            entries: self.entries.into_iter().map(|d| -d).collect(),
        }
    }
}

impl<T: Degree> fmt::Display for Multidegree<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (n, d) in self.entries.iter().enumerate() {
            if n > 0 {
                write!(f, ",")?;
            }
            write!(f, "{d}")?;
        }
        write!(f, ")")
    }
}

/// Exact half-integer, stored doubled so every comparison is an integer
/// comparison.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HalfInt<T = Deg> {
    doubled: T,
}

impl<T: Degree> HalfInt<T> {
    pub fn from_doubled(doubled: T) -> Self {
        HalfInt { doubled }
    }

    pub fn whole(value: T) -> Self {
        HalfInt {
            doubled: value + value,
        }
    }

    pub fn doubled(&self) -> T {
        self.doubled
    }

    pub fn is_integer(&self) -> bool {
        (self.doubled % (T::one() + T::one())).is_zero()
    }

    pub fn is_positive(&self) -> bool {
        self.doubled > T::zero()
    }
}

impl<T: Degree> fmt::Display for HalfInt<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let two = T::one() + T::one();
        if self.is_integer() {
            write!(f, "{}", self.doubled / two)
        } else {
            write!(f, "{}/2", self.doubled)
        }
    }
}

/// Outcome of an exhaustive quasistability test.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Quasistable,
    /// The least violating subcurve in bitmask order.
    Violated(Subcurve),
}

impl Verdict {
    pub fn is_quasistable(&self) -> bool {
        matches!(self, Verdict::Quasistable)
    }

    pub fn witness(&self) -> Option<Subcurve> {
        match self {
            Verdict::Quasistable => None,
            Verdict::Violated(z) => Some(*z),
        }
    }
}

/// Fiber multidegree of the twist by `-W`: each cut edge of `W` contributes
/// `+1` to its endpoint inside `W` and `-1` to the endpoint outside. The
/// total is always zero.
pub fn twist_multidegree<T: Degree>(g: &DualGraph, w: Subcurve) -> Multidegree<T> {
    let mut d = vec![T::zero(); g.components()];
    for e in g.cut(w).indices() {
        let (a, b) = g.endpoints(e);
        let (inside, outside) = if w.contains_component(a) { (a, b) } else { (b, a) };
        d[inside - 1] += T::one();
        d[outside - 1] -= T::one();
    }
    Multidegree::new(d)
}

/// Multidegree of the double-point bundle `O(2P - Q - Q')` with `P` on
/// component 1 and `Q`, `Q'` on components `i`, `j`: twice the first unit
/// vector minus the `i`-th and `j`-th.
pub fn base_multidegree<T: Degree>(g: &DualGraph, i: usize, j: usize) -> Result<Multidegree<T>> {
    for index in [i, j] {
        if index < 1 || index > g.components() {
            return Err(Error::BadComponent {
                index,
                components: g.components(),
            });
        }
    }
    let mut d = vec![T::zero(); g.components()];
    d[0] += T::one() + T::one();
    d[i - 1] -= T::one();
    d[j - 1] -= T::one();
    Ok(Multidegree::new(d))
}

/// `β(Z) = deg_Z + k_Z/2`, an exact half-integer.
pub fn beta<T: Degree>(g: &DualGraph, d: &Multidegree<T>, z: Subcurve) -> HalfInt<T> {
    let deg = d.deg_on(z);
    HalfInt::from_doubled(deg + deg + T::from_count(g.cut_size(z)))
}

/// Canonical semistability at `z`: `2|deg_Z| ≤ k_Z`.
pub fn is_semistable_at<T: Degree>(g: &DualGraph, d: &Multidegree<T>, z: Subcurve) -> bool {
    let deg = d.deg_on(z);
    (deg + deg).abs() <= T::from_count(g.cut_size(z))
}

/// Quasistability at `z` relative to the marked component `base`:
/// semistable, and `β(Z) > 0` whenever `z` contains `base`.
pub fn is_quasistable_at<T: Degree>(
    g: &DualGraph,
    d: &Multidegree<T>,
    z: Subcurve,
    base: usize,
) -> bool {
    is_semistable_at(g, d, z) && (!z.contains_component(base) || beta(g, d, z).is_positive())
}

/// Exhaustive quasistability over all nonempty proper subcurves. On
/// failure the witness is the least violating subcurve in bitmask order.
pub fn is_quasistable<T: Degree>(
    g: &DualGraph,
    d: &Multidegree<T>,
    base: usize,
    guard: EnumGuard,
) -> Result<Verdict> {
    guard.admit(g)?;
    let scan = g.scan();
    Ok(match quasistable_scan(&scan, d.as_slice(), base, false) {
        None => Verdict::Quasistable,
        Some(mask) => Verdict::Violated(scan.subcurve(mask)),
    })
}

/// Quasistability tested on connected subcurves only. For integer degree
/// vectors this agrees with [`is_quasistable`]: a violation at a
/// disconnected subcurve forces one at a connected piece.
pub fn is_quasistable_fast<T: Degree>(
    g: &DualGraph,
    d: &Multidegree<T>,
    base: usize,
    guard: EnumGuard,
) -> Result<bool> {
    guard.admit(g)?;
    let scan = g.scan();
    Ok(quasistable_scan(&scan, d.as_slice(), base, true).is_none())
}

/// Degree sums over every vertex mask, by sharing the sum of the mask with
/// its lowest bit removed.
pub(crate) fn deg_table<T: Degree>(full: u32, d: &[T]) -> Vec<T> {
    let mut table = vec![T::zero(); full as usize + 1];
    for mask in 1..=full {
        let low = mask.trailing_zeros() as usize;
        table[mask as usize] = table[(mask & (mask - 1)) as usize] + d[low];
    }
    table
}

/// First violating mask in ascending order, or `None`. With
/// `connected_only` the scan skips disconnected subcurves.
pub(crate) fn quasistable_scan<T: Degree>(
    scan: &Scan,
    d: &[T],
    base: usize,
    connected_only: bool,
) -> Option<u32> {
    let deg = deg_table(scan.full, d);
    let base_bit = 1u32 << (base - 1);
    quasistable_scan_with(scan, &deg, base_bit, connected_only)
}

pub(crate) fn quasistable_scan_with<T: Degree>(
    scan: &Scan,
    deg: &[T],
    base_bit: u32,
    connected_only: bool,
) -> Option<u32> {
    for mask in scan.masks() {
        if connected_only && !scan.connected(mask) {
            continue;
        }
        let twice = deg[mask as usize] + deg[mask as usize];
        let k = T::from_count(scan.k(mask));
        if twice.abs() > k || (mask & base_bit != 0 && twice + k <= T::zero()) {
            return Some(mask);
        }
    }
    None
}

/// All degree-0 quasistable multidegrees, in ascending lexicographic
/// order. The search window per component is forced by semistability at
/// the singleton: `2|d_l| ≤ k_l`.
pub fn enumerate_quasistable_degree_zero<T: Degree>(
    g: &DualGraph,
    base: usize,
    guard: EnumGuard,
) -> Result<Vec<Multidegree<T>>> {
    guard.admit(g)?;
    let scan = g.scan();
    let p = g.components();
    if p == 1 {
        return Ok(vec![Multidegree::zero(1)]);
    }
    let windows: Vec<i64> = (0..p)
        .map(|l| (scan.k(1 << l) / 2) as i64)
        .collect();
    let base_bit = 1u32 << (base - 1);

    let mut out = Vec::new();
    let mut current = vec![0i64; p];
    search(
        &scan,
        &windows,
        base_bit,
        &mut current,
        0,
        0,
        &mut |entries: &[i64]| {
            let d: Vec<T> = entries
                .iter()
                .map(|&v| T::from_i64(v).expect("degree out of scalar range"))
                .collect();
            out.push(Multidegree::new(d));
        },
    );
    return Ok(out);

    fn search<F: FnMut(&[i64])>(
        scan: &Scan,
        windows: &[i64],
        base_bit: u32,
        current: &mut Vec<i64>,
        level: usize,
        sum: i64,
        emit: &mut F,
    ) {
        let p = windows.len();
        if level == p - 1 {
            let last = -sum;
            if last.abs() > windows[p - 1] {
                return;
            }
            current[p - 1] = last;
            let deg = deg_table(scan.full, current.as_slice());
            if quasistable_scan_with(scan, &deg, base_bit, false).is_none() {
                emit(current);
            }
            return;
        }
        for v in -windows[level]..=windows[level] {
            current[level] = v;
            search(scan, windows, base_bit, current, level + 1, sum + v, emit);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    const GUARD: EnumGuard = EnumGuard::DEFAULT;

    fn sub(g: &DualGraph, c: &[usize]) -> Subcurve {
        g.subcurve(c.iter().copied()).unwrap()
    }

    fn md(entries: &[Deg]) -> Multidegree {
        Multidegree::new(entries.to_vec())
    }

    #[test]
    fn degree_sums() {
        let g1 = fixtures::doubled_cycle();
        let d = md(&[2, -1, -1, 0]);
        assert_eq!(d.deg_on(sub(&g1, &[2, 4])), -1);
        assert_eq!(d.deg_on(sub(&g1, &[1])), 2);
        let g0 = fixtures::bridge();
        assert_eq!(md(&[0, 0]).deg_on(sub(&g0, &[1])), 0);
    }

    #[test]
    fn twist_fiber_degrees() {
        let g1 = fixtures::doubled_cycle();
        let t: Multidegree = twist_multidegree(&g1, sub(&g1, &[4]));
        assert_eq!(t, md(&[0, -1, -1, 2]));

        let g0 = fixtures::bridge();
        let t: Multidegree = twist_multidegree(&g0, sub(&g0, &[2]));
        assert_eq!(t, md(&[-1, 1]));

        let gban = fixtures::banana();
        let t: Multidegree = twist_multidegree(&gban, sub(&gban, &[2]));
        assert_eq!(t, md(&[-2, 2]));
    }

    #[test]
    fn twist_total_zero_and_antisymmetric() {
        let g = fixtures::pendant_cycle();
        for z in g.subcurves(GUARD).unwrap() {
            let t: Multidegree = twist_multidegree(&g, z);
            assert_eq!(t.total(), 0);
            let tc: Multidegree = twist_multidegree(&g, z.complement());
            assert_eq!(-t, tc);
        }
    }

    #[test]
    fn base_multidegrees() {
        let g1 = fixtures::doubled_cycle();
        let b: Multidegree = base_multidegree(&g1, 4, 4).unwrap();
        assert_eq!(b, md(&[2, 0, 0, -2]));
        let b: Multidegree = base_multidegree(&g1, 1, 1).unwrap();
        assert_eq!(b, md(&[0, 0, 0, 0]));
        let g0 = fixtures::bridge();
        let b: Multidegree = base_multidegree(&g0, 2, 2).unwrap();
        assert_eq!(b, md(&[2, -2]));
        assert!(base_multidegree::<Deg>(&g1, 0, 5).is_err());
    }

    #[test]
    fn beta_values() {
        let g0 = fixtures::bridge();
        let b = beta(&g0, &md(&[0, 0]), sub(&g0, &[1]));
        assert_eq!(b.doubled(), 1);
        assert_eq!(b.to_string(), "1/2");
        assert!(!b.is_integer());

        let g1 = fixtures::doubled_cycle();
        let b = beta(&g1, &md(&[2, -1, -1, 0]), sub(&g1, &[1]));
        assert_eq!(b.doubled(), 8);
        assert_eq!(b.to_string(), "4");

        let z = sub(&g1, &[2, 4]);
        let b = beta(&g1, &Multidegree::<Deg>::zero(4), z);
        assert_eq!(b.doubled() as usize, g1.cut_size(z));
    }

    #[test]
    fn half_integers() {
        let h = HalfInt::from_doubled(-5);
        assert_eq!(h.to_string(), "-5/2");
        assert!(!h.is_positive());
        assert!(HalfInt::whole(3).is_integer());
        assert!(HalfInt::from_doubled(1) < HalfInt::whole(1));
    }

    #[test]
    fn semistability() {
        let g1 = fixtures::doubled_cycle();
        let d = md(&[2, -1, -1, 0]);
        assert!(is_semistable_at(&g1, &d, sub(&g1, &[1])));

        let g0 = fixtures::bridge();
        assert!(!is_semistable_at(&g0, &md(&[1, -1]), sub(&g0, &[2])));
        assert!(is_semistable_at(&g0, &md(&[0, 0]), sub(&g0, &[2])));
    }

    #[test]
    fn semistability_complement_symmetry() {
        let g = fixtures::pendant_cycle();
        let d = md(&[1, -2, 1, 0, 0, 0]);
        for z in g.subcurves(GUARD).unwrap() {
            assert_eq!(
                is_semistable_at(&g, &d, z),
                is_semistable_at(&g, &d, z.complement())
            );
        }
    }

    #[test]
    fn quasistability_at_subcurves() {
        let g0 = fixtures::bridge();
        assert!(is_quasistable_at(&g0, &md(&[0, 0]), sub(&g0, &[1]), 1));

        let gban = fixtures::banana();
        // Semistable but β = 0 on the side containing the base.
        assert!(!is_quasistable_at(&gban, &md(&[-1, 1]), sub(&gban, &[1]), 1));
        assert!(is_quasistable_at(&gban, &md(&[-1, 1]), sub(&gban, &[2]), 1));
    }

    #[test]
    fn exhaustive_quasistability() {
        let g1 = fixtures::doubled_cycle();
        let verdict = is_quasistable(&g1, &md(&[2, -1, -1, 0]), 1, GUARD).unwrap();
        assert!(verdict.is_quasistable());

        let g0 = fixtures::bridge();
        let verdict = is_quasistable(&g0, &md(&[1, -1]), 1, GUARD).unwrap();
        // Both {1} and {2} violate semistability; {1} comes first in
        // bitmask order.
        assert_eq!(verdict.witness(), Some(sub(&g0, &[1])));

        let verdict = is_quasistable(&g0, &md(&[0, 0]), 1, GUARD).unwrap();
        assert!(verdict.is_quasistable());
    }

    #[test]
    fn fast_agrees_with_exhaustive() {
        let g1 = fixtures::doubled_cycle();
        for d1 in -2..=2i64 {
            for d2 in -2..=2i64 {
                for d3 in -2..=2i64 {
                    let d = md(&[d1, d2, d3, -(d1 + d2 + d3)]);
                    let full = is_quasistable(&g1, &d, 1, GUARD).unwrap().is_quasistable();
                    let fast = is_quasistable_fast(&g1, &d, 1, GUARD).unwrap();
                    assert_eq!(full, fast, "disagreement at {d}");
                }
            }
        }
    }

    #[test]
    fn degree_zero_enumeration() {
        let gban = fixtures::banana();
        let all: Vec<Multidegree> = enumerate_quasistable_degree_zero(&gban, 1, GUARD).unwrap();
        assert_eq!(all, vec![md(&[0, 0]), md(&[1, -1])]);

        let g0 = fixtures::bridge();
        let all: Vec<Multidegree> = enumerate_quasistable_degree_zero(&g0, 1, GUARD).unwrap();
        assert_eq!(all, vec![md(&[0, 0])]);

        let g1 = fixtures::doubled_cycle();
        let all: Vec<Multidegree> = enumerate_quasistable_degree_zero(&g1, 1, GUARD).unwrap();
        assert_eq!(all.len(), 12);

        let single = DualGraph::new(1, &[]).unwrap();
        let all: Vec<Multidegree> = enumerate_quasistable_degree_zero(&single, 1, GUARD).unwrap();
        assert_eq!(all, vec![Multidegree::zero(1)]);
    }

    /// Window-pruned enumeration must match the unpruned search that scans
    /// the full box and filters by total and the exhaustive predicate.
    #[test]
    fn enumeration_prune_is_sound() {
        for g in [
            fixtures::bridge(),
            fixtures::banana(),
            fixtures::doubled_cycle(),
        ] {
            let pruned: Vec<Multidegree> =
                enumerate_quasistable_degree_zero(&g, 1, GUARD).unwrap();
            let p = g.components();
            let bound = (0..p)
                .map(|l| {
                    let z = g.subcurve([l + 1]).unwrap();
                    g.cut_size(z) as i64
                })
                .max()
                .unwrap();
            let mut unpruned = Vec::new();
            let mut stack = vec![Vec::<i64>::new()];
            while let Some(prefix) = stack.pop() {
                if prefix.len() == p {
                    if prefix.iter().sum::<i64>() == 0 {
                        let d = md(&prefix);
                        if is_quasistable(&g, &d, 1, GUARD).unwrap().is_quasistable() {
                            unpruned.push(d);
                        }
                    }
                    continue;
                }
                for v in (-bound..=bound).rev() {
                    let mut next = prefix.clone();
                    next.push(v);
                    stack.push(next);
                }
            }
            assert_eq!(pruned, unpruned);
        }
    }

    /// Contribution of the twist by `-W` to the degree on `Z`: plus the
    /// shared cut size when one of `W ⊆ Z`, `Z ⊆ W` holds, minus it when
    /// one of `W ⊆ Z^c`, `Z^c ⊆ W` holds, zero for free pairs.
    #[test]
    fn twist_contribution_rule() {
        let g = fixtures::doubled_cycle();
        for z in g.subcurves(GUARD).unwrap() {
            for w in g.subcurves(GUARD).unwrap() {
                let t: Multidegree = twist_multidegree(&g, w);
                let contribution = t.deg_on(z);
                let shared = g.cut(z).intersection(g.cut(w)).len() as Deg;
                let zc = z.complement();
                if w.is_subset_of(z) || z.is_subset_of(w) {
                    assert_eq!(contribution, shared);
                } else if w.is_subset_of(zc) || zc.is_subset_of(w) {
                    assert_eq!(contribution, -shared);
                } else if g.classify_pair(z, w).free {
                    assert_eq!(contribution, 0);
                }
            }
        }
    }

    #[test]
    fn generic_scalar_instantiation() {
        let g = fixtures::banana();
        let d: Multidegree<i32> = Multidegree::new(vec![1, -1]);
        assert!(is_quasistable(&g, &d, 1, GUARD).unwrap().is_quasistable());
        let t: Multidegree<i32> = twist_multidegree(&g, g.subcurve([2]).unwrap());
        assert_eq!(t.as_slice(), &[-2, 2]);
    }
}
