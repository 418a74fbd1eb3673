//! Dual graphs of nodal curves and the subcurve calculus.
//!
//! Components are numbered `1..=p` and map to bits `0..p` of a subcurve
//! mask. Edges (nodes of the curve) are numbered `0..E` in input order and
//! map to bits of an edge mask; two nodes joining the same pair of
//! components are distinct edges, and loops (a node on a single component)
//! are accepted but never appear in any cut.

use std::fmt;

use crate::{EnumGuard, Error, Result, MAX_COMPONENTS, MAX_EDGES};

/// Connected multigraph with one vertex per irreducible component and one
/// edge per node. Immutable after construction; all operations are
/// read-only.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DualGraph {
    components: usize,
    edges: Vec<(usize, usize)>,
    /// Neighbor mask per vertex (non-loop adjacency), 0-based bits.
    adj: Vec<u32>,
    /// Non-loop incident edge mask per vertex.
    incident: Vec<u128>,
    loops: u128,
}

impl DualGraph {
    /// Validates and builds a dual graph from a component count and a list
    /// of unordered endpoint pairs with 1-based endpoints.
    pub fn new(components: usize, edges: &[(usize, usize)]) -> Result<DualGraph> {
        if components < 1 {
            return Err(Error::Empty);
        }
        if components > MAX_COMPONENTS {
            return Err(Error::TooManyComponents(components));
        }
        if edges.len() > MAX_EDGES {
            return Err(Error::TooManyEdges(edges.len()));
        }
        let mut adj = vec![0u32; components];
        let mut incident = vec![0u128; components];
        let mut loops = 0u128;
        for (index, &(a, b)) in edges.iter().enumerate() {
            for endpoint in [a, b] {
                if endpoint < 1 || endpoint > components {
                    return Err(Error::OutOfRange {
                        edge: index,
                        endpoint,
                        components,
                    });
                }
            }
            if a == b {
                loops |= 1 << index;
            } else {
                adj[a - 1] |= 1 << (b - 1);
                adj[b - 1] |= 1 << (a - 1);
                incident[a - 1] |= 1 << index;
                incident[b - 1] |= 1 << index;
            }
        }
        let g = DualGraph {
            components,
            edges: edges.to_vec(),
            adj,
            incident,
            loops,
        };
        if !g.mask_connected(g.full_mask()) {
            return Err(Error::Disconnected);
        }
        Ok(g)
    }

    pub fn components(&self) -> usize {
        self.components
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// 1-based endpoints of edge `e`.
    pub fn endpoints(&self, e: usize) -> (usize, usize) {
        self.edges[e]
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn is_loop(&self, e: usize) -> bool {
        self.loops >> e & 1 == 1
    }

    pub(crate) fn full_mask(&self) -> u32 {
        if self.components == 32 {
            u32::MAX
        } else {
            (1u32 << self.components) - 1
        }
    }

    fn check_component(&self, index: usize) -> Result<()> {
        if index < 1 || index > self.components {
            Err(Error::BadComponent {
                index,
                components: self.components,
            })
        } else {
            Ok(())
        }
    }

    fn check_bound(&self, z: Subcurve) {
        assert_eq!(
            z.components as usize, self.components,
            "subcurve bound to a graph with a different component count"
        );
    }

    /// Cut edge mask of an arbitrary vertex mask; empty and full masks give
    /// the empty cut. Loops never appear.
    pub(crate) fn term_mask(&self, mask: u32) -> u128 {
        let mut term = 0u128;
        let mut rest = mask & self.full_mask();
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            term ^= self.incident[v];
            rest &= rest - 1;
        }
        term
    }

    /// Whether the induced sub-multigraph on a nonempty vertex mask is
    /// connected.
    pub(crate) fn mask_connected(&self, mask: u32) -> bool {
        debug_assert!(mask != 0);
        let mut reach = 1u32 << mask.trailing_zeros();
        loop {
            let mut grown = reach;
            let mut rest = reach;
            while rest != 0 {
                let v = rest.trailing_zeros() as usize;
                grown |= self.adj[v] & mask;
                rest &= rest - 1;
            }
            if grown == reach {
                return reach == mask;
            }
            reach = grown;
        }
    }

    /// Edges of the cut of `z`: exactly the edges with one endpoint in `z`
    /// and the other in its complement (the terminal nodes of the subcurve).
    pub fn cut(&self, z: Subcurve) -> EdgeSet {
        self.check_bound(z);
        EdgeSet {
            mask: self.term_mask(z.mask),
        }
    }

    /// Size of the cut of `z` (the count `k_Z` of terminal nodes).
    pub fn cut_size(&self, z: Subcurve) -> usize {
        self.cut(z).len()
    }

    /// Whether the sub-multigraph induced on `z` is connected.
    pub fn is_connected_subcurve(&self, z: Subcurve) -> bool {
        self.check_bound(z);
        self.mask_connected(z.mask)
    }

    /// A tail is a subcurve with both sides connected.
    pub fn is_tail(&self, z: Subcurve) -> bool {
        self.is_connected_subcurve(z) && self.is_connected_subcurve(z.complement())
    }

    /// Whether deleting the edges of `delta` disconnects the multigraph.
    /// Deleting loops never disconnects.
    pub fn is_disconnecting(&self, delta: &EdgeSet) -> bool {
        let keep = !delta.mask;
        let mut reach = 1u32;
        loop {
            let mut grown = reach;
            let mut rest = reach;
            while rest != 0 {
                let v = rest.trailing_zeros() as usize;
                let mut live = self.incident[v] & keep;
                while live != 0 {
                    let e = live.trailing_zeros() as usize;
                    let (a, b) = self.edges[e];
                    grown |= 1 << (a - 1) | 1 << (b - 1);
                    live &= live - 1;
                }
                rest &= rest - 1;
            }
            if grown == reach {
                return reach != self.full_mask();
            }
            reach = grown;
        }
    }

    /// Strictly nested with disjoint cuts: `z` is a proper subset of `w` and
    /// their cuts share no edge.
    pub fn nested_strict(&self, z: Subcurve, w: Subcurve) -> bool {
        z.mask != w.mask
            && z.mask & w.mask == z.mask
            && self.term_mask(z.mask) & self.term_mask(w.mask) == 0
    }

    /// Classifies a pair of subcurves: free (disjoint cuts) or terminal,
    /// perfect (one of the four containments), strictly nested.
    pub fn classify_pair(&self, z: Subcurve, w: Subcurve) -> PairClass {
        self.check_bound(z);
        self.check_bound(w);
        let free = self.term_mask(z.mask) & self.term_mask(w.mask) == 0;
        PairClass {
            free,
            nested_strict: free && z.mask != w.mask && z.mask & w.mask == z.mask,
            perfect: perfect_masks(z.mask, w.mask, self.full_mask()),
        }
    }

    /// Relation of `z` to a family of subcurves: free against every member,
    /// and normalized (every terminal member forms a perfect pair).
    pub fn family_relation(&self, z: Subcurve, family: &[Subcurve]) -> FamilyRelation {
        let mut free = true;
        let mut normalized = true;
        for &w in family {
            let class = self.classify_pair(z, w);
            if !class.free {
                free = false;
                if !class.perfect {
                    normalized = false;
                }
            }
        }
        FamilyRelation { free, normalized }
    }

    /// All nonempty proper subcurves in ascending bitmask order.
    pub fn subcurves(&self, guard: EnumGuard) -> Result<impl Iterator<Item = Subcurve> + '_> {
        guard.admit(self)?;
        let full = self.full_mask();
        let p = self.components as u8;
        Ok((1..full).map(move |mask| Subcurve {
            mask,
            components: p,
        }))
    }

    /// Cached cut and connectivity tables over all `2^p` vertex masks.
    pub(crate) fn scan(&self) -> Scan {
        let full = self.full_mask();
        let n = full as usize + 1;
        let mut term = vec![0u128; n];
        let mut conn = vec![false; n];
        for mask in 1..=full {
            let low = mask.trailing_zeros() as usize;
            term[mask as usize] = term[(mask & (mask - 1)) as usize] ^ self.incident[low];
            conn[mask as usize] = self.mask_connected(mask);
        }
        Scan {
            full,
            components: self.components as u8,
            term,
            conn,
        }
    }

    pub fn subcurve(&self, components: impl IntoIterator<Item = usize>) -> Result<Subcurve> {
        let mut mask = 0u32;
        for index in components {
            self.check_component(index)?;
            mask |= 1 << (index - 1);
        }
        self.subcurve_from_mask(mask)
    }

    pub fn subcurve_from_mask(&self, mask: u32) -> Result<Subcurve> {
        if mask == 0 || mask & !self.full_mask() != 0 || mask == self.full_mask() {
            return Err(Error::BadSubcurve);
        }
        Ok(Subcurve {
            mask,
            components: self.components as u8,
        })
    }
}

fn perfect_masks(z: u32, w: u32, full: u32) -> bool {
    let zc = full ^ z;
    z & w == z || w & z == w || zc & w == zc || w & zc == w
}

/// Nonempty proper set of components, bound to a fixed component count.
/// Ordering is by bitmask, the crate-wide deterministic order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Subcurve {
    mask: u32,
    components: u8,
}

impl Subcurve {
    pub fn mask(&self) -> u32 {
        self.mask
    }

    fn full(&self) -> u32 {
        if self.components == 32 {
            u32::MAX
        } else {
            (1u32 << self.components) - 1
        }
    }

    /// The complementary subcurve; an involution.
    pub fn complement(&self) -> Subcurve {
        Subcurve {
            mask: self.full() ^ self.mask,
            components: self.components,
        }
    }

    /// Components of the meet: the components lying in both subcurves.
    /// `None` when the intersection is empty.
    pub fn meet(&self, other: Subcurve) -> Option<Subcurve> {
        debug_assert_eq!(self.components, other.components);
        let mask = self.mask & other.mask;
        (mask != 0).then_some(Subcurve {
            mask,
            components: self.components,
        })
    }

    /// Union of the two subcurves; `None` when it is the whole curve.
    pub fn join(&self, other: Subcurve) -> Option<Subcurve> {
        debug_assert_eq!(self.components, other.components);
        let mask = self.mask | other.mask;
        (mask != self.full()).then_some(Subcurve {
            mask,
            components: self.components,
        })
    }

    pub fn contains_component(&self, index: usize) -> bool {
        index >= 1 && index <= self.components as usize && self.mask >> (index - 1) & 1 == 1
    }

    pub fn is_subset_of(&self, other: Subcurve) -> bool {
        self.mask & other.mask == self.mask
    }

    pub fn len(&self) -> usize {
        self.mask.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// 1-based component indices in ascending order.
    pub fn component_indices(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.components as usize)
            .filter(move |l| self.mask >> l & 1 == 1)
            .map(|l| l + 1)
    }
}

impl fmt::Display for Subcurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (n, l) in self.component_indices().enumerate() {
            if n > 0 {
                write!(f, ",")?;
            }
            write!(f, "{l}")?;
        }
        write!(f, "}}")
    }
}

/// Set of edge indices of a dual graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct EdgeSet {
    mask: u128,
}

impl EdgeSet {
    pub fn from_indices(indices: impl IntoIterator<Item = usize>) -> EdgeSet {
        let mut mask = 0u128;
        for e in indices {
            assert!(e < MAX_EDGES, "edge index out of range");
            mask |= 1 << e;
        }
        EdgeSet { mask }
    }

    pub fn mask(&self) -> u128 {
        self.mask
    }

    pub fn len(&self) -> usize {
        self.mask.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.mask == 0
    }

    pub fn contains(&self, e: usize) -> bool {
        e < MAX_EDGES && self.mask >> e & 1 == 1
    }

    /// Symmetric difference: `(A ∪ B) \ (A ∩ B)`.
    pub fn sym_diff(&self, other: EdgeSet) -> EdgeSet {
        EdgeSet {
            mask: self.mask ^ other.mask,
        }
    }

    pub fn intersection(&self, other: EdgeSet) -> EdgeSet {
        EdgeSet {
            mask: self.mask & other.mask,
        }
    }

    pub fn union(&self, other: EdgeSet) -> EdgeSet {
        EdgeSet {
            mask: self.mask | other.mask,
        }
    }

    pub fn is_subset_of(&self, other: EdgeSet) -> bool {
        self.mask & other.mask == self.mask
    }

    /// Ascending edge indices.
    pub fn indices(&self) -> impl Iterator<Item = usize> + '_ {
        (0..MAX_EDGES).filter(move |e| self.mask >> e & 1 == 1)
    }
}

impl fmt::Display for EdgeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (n, e) in self.indices().enumerate() {
            if n > 0 {
                write!(f, ",")?;
            }
            write!(f, "e{e}")?;
        }
        write!(f, "}}")
    }
}

/// Relation of a pair of subcurves. Exactly one of free/terminal holds;
/// strict nesting implies free.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PairClass {
    pub free: bool,
    pub nested_strict: bool,
    pub perfect: bool,
}

impl PairClass {
    pub fn terminal(&self) -> bool {
        !self.free
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FamilyRelation {
    /// Free against every member of the family.
    pub free: bool,
    /// Every terminal member of the family forms a perfect pair.
    pub normalized: bool,
}

/// Per-graph cache of cut masks and induced connectivity over all vertex
/// masks, for exhaustive scans.
pub(crate) struct Scan {
    pub full: u32,
    pub components: u8,
    term: Vec<u128>,
    conn: Vec<bool>,
}

impl Scan {
    pub fn term(&self, mask: u32) -> u128 {
        self.term[mask as usize]
    }

    pub fn k(&self, mask: u32) -> usize {
        self.term[mask as usize].count_ones() as usize
    }

    pub fn connected(&self, mask: u32) -> bool {
        self.conn[mask as usize]
    }

    pub fn is_tail(&self, mask: u32) -> bool {
        mask != 0 && mask != self.full && self.conn[mask as usize] && self.conn[(self.full ^ mask) as usize]
    }

    pub fn free(&self, a: u32, b: u32) -> bool {
        self.term(a) & self.term(b) == 0
    }

    pub fn perfect(&self, a: u32, b: u32) -> bool {
        perfect_masks(a, b, self.full)
    }

    /// Number of shared cut edges.
    pub fn contact(&self, a: u32, b: u32) -> usize {
        (self.term(a) & self.term(b)).count_ones() as usize
    }

    pub fn subcurve(&self, mask: u32) -> Subcurve {
        debug_assert!(mask != 0 && mask != self.full);
        Subcurve {
            mask,
            components: self.components,
        }
    }

    /// Proper nonempty masks in ascending order.
    pub fn masks(&self) -> impl Iterator<Item = u32> {
        1..self.full
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn rejects_invalid_graphs() {
        assert_eq!(DualGraph::new(0, &[]), Err(Error::Empty));
        assert_eq!(
            DualGraph::new(2, &[(1, 3)]),
            Err(Error::OutOfRange {
                edge: 0,
                endpoint: 3,
                components: 2
            })
        );
        assert_eq!(DualGraph::new(3, &[(1, 2)]), Err(Error::Disconnected));
        assert_eq!(DualGraph::new(31, &[]), Err(Error::TooManyComponents(31)));
    }

    #[test]
    fn accepts_single_component() {
        let g = DualGraph::new(1, &[]).unwrap();
        assert_eq!(g.components(), 1);
        assert_eq!(g.subcurves(EnumGuard::default()).unwrap().count(), 0);
        let with_loop = DualGraph::new(1, &[(1, 1)]).unwrap();
        assert!(with_loop.is_loop(0));
    }

    #[test]
    fn complement_is_involution() {
        let g = fixtures::doubled_cycle();
        let z = g.subcurve([2, 4]).unwrap();
        assert_eq!(z.complement(), g.subcurve([1, 3]).unwrap());
        assert_eq!(z.complement().complement(), z);
        let g0 = fixtures::bridge();
        assert_eq!(
            g0.subcurve([2]).unwrap().complement(),
            g0.subcurve([1]).unwrap()
        );
    }

    #[test]
    fn cuts_match_hand_counts() {
        let g0 = fixtures::bridge();
        let z = g0.subcurve([2]).unwrap();
        assert_eq!(g0.cut(z), EdgeSet::from_indices([0]));
        assert_eq!(g0.cut_size(z), 1);

        let g1 = fixtures::doubled_cycle();
        let z4 = g1.subcurve([4]).unwrap();
        assert_eq!(g1.cut(z4), EdgeSet::from_indices([4, 5]));
        assert_eq!(g1.cut_size(z4), 2);
        let z24 = g1.subcurve([2, 4]).unwrap();
        assert_eq!(g1.cut(z24), EdgeSet::from_indices([0, 1, 5]));
        assert_eq!(g1.cut_size(z24), 3);
    }

    #[test]
    fn cut_ignores_loops() {
        let g = DualGraph::new(2, &[(1, 2), (2, 2)]).unwrap();
        let z = g.subcurve([2]).unwrap();
        assert_eq!(g.cut(z), EdgeSet::from_indices([0]));
    }

    #[test]
    fn cut_symmetric_under_complement() {
        let g = fixtures::doubled_cycle();
        for z in g.subcurves(EnumGuard::default()).unwrap() {
            assert_eq!(g.cut(z), g.cut(z.complement()));
        }
    }

    #[test]
    fn subcurve_connectivity() {
        let g1 = fixtures::doubled_cycle();
        assert!(g1.is_connected_subcurve(g1.subcurve([2, 4]).unwrap()));
        assert!(!g1.is_connected_subcurve(g1.subcurve([2, 3]).unwrap()));
        let g0 = fixtures::bridge();
        assert!(g0.is_connected_subcurve(g0.subcurve([1]).unwrap()));
    }

    #[test]
    fn tails() {
        let g1 = fixtures::doubled_cycle();
        assert!(g1.is_tail(g1.subcurve([2, 4]).unwrap()));
        assert!(!g1.is_tail(g1.subcurve([2, 3]).unwrap()));
        let gban = fixtures::banana();
        assert!(gban.is_tail(gban.subcurve([2]).unwrap()));
    }

    #[test]
    fn meet_and_join() {
        let g1 = fixtures::doubled_cycle();
        let z = g1.subcurve([2, 4]).unwrap();
        let w = g1.subcurve([3, 4]).unwrap();
        assert_eq!(z.meet(w), Some(g1.subcurve([4]).unwrap()));
        assert_eq!(z.join(w), Some(g1.subcurve([2, 3, 4]).unwrap()));
        assert_eq!(g1.cut_size(z.join(w).unwrap()), 4);
        assert_eq!(g1.cut_size(z.meet(w).unwrap()), 2);
        // containment cases
        let big = g1.subcurve([2, 3, 4]).unwrap();
        assert_eq!(z.meet(big), Some(z));
        let z4 = g1.subcurve([4]).unwrap();
        assert_eq!(z4.join(z), Some(z));

        let g0 = fixtures::bridge();
        let a = g0.subcurve([1]).unwrap();
        let b = g0.subcurve([2]).unwrap();
        assert_eq!(a.meet(b), None);
        assert_eq!(a.join(b), None);
    }

    #[test]
    fn meet_complement_law() {
        let g = fixtures::doubled_cycle();
        let guard = EnumGuard::default();
        for z in g.subcurves(guard).unwrap() {
            for w in g.subcurves(guard).unwrap() {
                if let Some(m) = z.meet(w) {
                    let rhs = z.complement().join(w.complement());
                    assert_eq!(rhs.map(|s| s.complement()), Some(m));
                }
            }
        }
    }

    #[test]
    fn sym_diff() {
        let e1 = EdgeSet::from_indices([0]);
        assert!(e1.sym_diff(e1).is_empty());
        assert_eq!(
            EdgeSet::from_indices([0, 1]).sym_diff(EdgeSet::from_indices([1, 2])),
            EdgeSet::from_indices([0, 2])
        );
        // On the doubled cycle: Diff(cut {2,4}, cut {4}) equals cut {2}.
        let g = fixtures::doubled_cycle();
        let c24 = g.cut(g.subcurve([2, 4]).unwrap());
        let c4 = g.cut(g.subcurve([4]).unwrap());
        assert_eq!(c24.sym_diff(c4), g.cut(g.subcurve([2]).unwrap()));
    }

    #[test]
    fn disconnecting_edge_sets() {
        let g0 = fixtures::bridge();
        assert!(g0.is_disconnecting(&EdgeSet::from_indices([0])));
        let gban = fixtures::banana();
        assert!(!gban.is_disconnecting(&EdgeSet::from_indices([0])));
        let g1 = fixtures::doubled_cycle();
        assert!(g1.is_disconnecting(&EdgeSet::from_indices([4, 5])));
        assert!(!g1.is_disconnecting(&EdgeSet::from_indices([4])));
    }

    #[test]
    fn pair_classification() {
        let g1 = fixtures::doubled_cycle();
        let z = g1.subcurve([2, 4]).unwrap();
        let w = g1.subcurve([3, 4]).unwrap();
        let class = g1.classify_pair(z, w);
        assert!(class.free && !class.perfect && !class.nested_strict);

        let z4 = g1.subcurve([4]).unwrap();
        let class = g1.classify_pair(z4, z);
        assert!(class.terminal() && class.perfect && !class.nested_strict);

        let self_class = g1.classify_pair(z, z);
        assert!(self_class.terminal() && self_class.perfect);
    }

    #[test]
    fn family_relations() {
        let g1 = fixtures::doubled_cycle();
        let z = g1.subcurve([2, 4]).unwrap();
        let z4 = g1.subcurve([4]).unwrap();
        let w = g1.subcurve([3, 4]).unwrap();

        let rel = g1.family_relation(z, &[z4]);
        assert!(!rel.free && rel.normalized);

        let rel = g1.family_relation(z, &[]);
        assert!(rel.free && rel.normalized);

        let rel = g1.family_relation(z, &[w]);
        assert!(rel.free && rel.normalized);
    }

    #[test]
    fn subcurve_enumeration_order() {
        let g0 = fixtures::bridge();
        let all: Vec<_> = g0.subcurves(EnumGuard::default()).unwrap().collect();
        assert_eq!(
            all,
            vec![g0.subcurve([1]).unwrap(), g0.subcurve([2]).unwrap()]
        );
        let g1 = fixtures::doubled_cycle();
        assert_eq!(g1.subcurves(EnumGuard::default()).unwrap().count(), 14);
    }

    #[test]
    fn guard_refuses_large_graphs() {
        let edges: Vec<_> = (1..22).map(|v| (v, v + 1)).collect();
        let g = DualGraph::new(22, &edges).unwrap();
        assert!(matches!(
            g.subcurves(EnumGuard::default()),
            Err(Error::GuardExceeded { .. })
        ));
        assert!(g.subcurves(EnumGuard::new(25)).is_ok());
    }

    #[test]
    fn display_forms() {
        let g = fixtures::doubled_cycle();
        assert_eq!(g.subcurve([2, 4]).unwrap().to_string(), "{2,4}");
        assert_eq!(EdgeSet::from_indices([0, 5]).to_string(), "{e0,e5}");
    }
}
