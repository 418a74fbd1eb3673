//! Canonical dual graphs used across the test suite and documentation.

use crate::DualGraph;

/// Two components joined by a single node. The smallest nodal curve with a
/// reducible dual graph; its one edge is a bridge.
pub fn bridge() -> DualGraph {
    DualGraph::new(2, &[(1, 2)]).unwrap()
}

/// Two components joined by two nodes (a banana curve).
pub fn banana() -> DualGraph {
    DualGraph::new(2, &[(1, 2), (1, 2)]).unwrap()
}

/// Four components on the cycle 1-2-4-3-1 with the edges at component 1
/// doubled: `#C1∩C2 = #C1∩C3 = 2`, `#C2∩C4 = #C3∩C4 = 1`, `#C1∩C4 =
/// #C2∩C3 = 0`. Bridgeless; the richest small fixture, with 3-tails {2,4}
/// and {3,4} whose meet has cut size 2 and whose join has cut size 4.
pub fn doubled_cycle() -> DualGraph {
    DualGraph::new(4, &[(1, 2), (1, 2), (1, 3), (1, 3), (2, 4), (3, 4)]).unwrap()
}

/// Six components: a doubled edge 1=2, triangle chords 1-3 and 2-3, the
/// cycle 2-6-5-3, and a doubled pendant 4=5. Bridgeless with no 1-tails;
/// for the anchor pair (4,4) the nested 2-tail chain is [{4}, {4,5}] and
/// the nested 3-tail chain is [{3,4,5,6}], giving twist coefficients
/// (0,0,1,3,2,1).
pub fn pendant_cycle() -> DualGraph {
    DualGraph::new(
        6,
        &[
            (1, 2),
            (1, 2),
            (1, 3),
            (2, 3),
            (2, 6),
            (3, 5),
            (4, 5),
            (4, 5),
            (5, 6),
        ],
    )
    .unwrap()
}
