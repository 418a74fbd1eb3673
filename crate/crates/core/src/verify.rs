//! Randomized instance generation, the lemma falsification suite, and
//! independent cross-checks.
//!
//! Every structural fact used by the twist construction is re-checked here
//! by exhaustive quantification over the subcurves, tails and chain
//! families of a graph, exactly as stated: hypotheses first, conclusion
//! asserted. Nonexistence claims run as bounded searches over their full
//! hypothesis sets. Each check tallies the hypothesis-satisfying tuples it
//! saw, so a suite cannot pass by vacuity: a lemma with zero instances is
//! reported as untested, not as passed.
//!
//! The spanning-tree count doubles as an independent oracle: the number of
//! degree-0 quasistable multidegrees of a connected dual graph equals its
//! number of spanning trees.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::Signed;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::document::canonical_string;
use crate::graph::Scan;
use crate::stability::{deg_table, enumerate_quasistable_degree_zero, quasistable_scan_with};
use crate::tails::pair_families;
use crate::{Deg, DualGraph, EnumGuard, Error, Result, MAX_COMPONENTS};

/// Parameters of the seeded random-graph ensemble. Generation is a pure
/// function of `(params, trial)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenParams {
    /// Inclusive range for the component count.
    pub p_range: (usize, usize),
    /// Inclusive range for the number of edges beyond a spanning tree.
    pub extra_edges: (usize, usize),
    /// Exact probability `num/den` of attaching one loop to each component.
    pub loop_probability: (u32, u32),
    pub master_seed: u64,
}

impl GenParams {
    pub fn validate(&self) -> Result<()> {
        let (lo, hi) = self.p_range;
        if lo < 1 || lo > hi || hi > MAX_COMPONENTS {
            return Err(Error::InvalidParams(format!(
                "component range {lo}..={hi} out of bounds"
            )));
        }
        if self.extra_edges.0 > self.extra_edges.1 {
            return Err(Error::InvalidParams("empty extra-edge range".into()));
        }
        let (num, den) = self.loop_probability;
        if den == 0 || num > den {
            return Err(Error::InvalidParams(format!(
                "loop probability {num}/{den} is not in [0, 1]"
            )));
        }
        Ok(())
    }
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E3779B97F4A7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D049BB133111EB);
    x ^ (x >> 31)
}

/// Connected random multigraph, fully determined by `(params, trial)`:
/// a uniform labeled spanning tree (random Prüfer sequence), extra edges
/// sampled uniformly over unordered non-loop vertex pairs with repeats
/// allowed, and one loop per component with the configured probability.
/// The edge list is canonically sorted.
pub fn random_graph(params: &GenParams, trial: u64) -> DualGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(splitmix64(
        params.master_seed ^ trial.wrapping_mul(0xA076_1D64_78BD_642F),
    ));
    let p = rng.gen_range(params.p_range.0..=params.p_range.1);
    let mut edges: Vec<(usize, usize)> = Vec::new();
    match p {
        1 => {}
        2 => edges.push((1, 2)),
        _ => {
            let seq: Vec<usize> = (0..p - 2).map(|_| rng.gen_range(1..=p)).collect();
            edges.extend(prufer_decode(p, &seq));
        }
    }
    let extra = rng.gen_range(params.extra_edges.0..=params.extra_edges.1);
    if p >= 2 {
        for _ in 0..extra {
            let a = rng.gen_range(1..=p);
            let mut b = rng.gen_range(1..=p - 1);
            if b >= a {
                b += 1;
            }
            edges.push((a.min(b), a.max(b)));
        }
    }
    let (num, den) = params.loop_probability;
    for v in 1..=p {
        if rng.gen_range(0..den) < num {
            edges.push((v, v));
        }
    }
    edges.sort_unstable();
    DualGraph::new(p, &edges).expect("generated graph is connected by construction")
}

/// Decodes a Prüfer sequence into the edge list of a labeled tree on
/// `1..=p`. Every labeled tree arises from exactly one sequence.
fn prufer_decode(p: usize, seq: &[usize]) -> Vec<(usize, usize)> {
    debug_assert_eq!(seq.len(), p - 2);
    let mut degree = vec![1usize; p + 1];
    for &s in seq {
        degree[s] += 1;
    }
    let mut used = vec![false; p + 1];
    let mut edges = Vec::with_capacity(p - 1);
    for &s in seq {
        let leaf = (1..=p)
            .find(|&v| degree[v] == 1 && !used[v])
            .expect("a leaf always remains");
        edges.push((leaf.min(s), leaf.max(s)));
        used[leaf] = true;
        degree[s] -= 1;
    }
    let rest: Vec<usize> = (1..=p).filter(|&v| !used[v] && degree[v] == 1).collect();
    edges.push((rest[0], rest[1]));
    edges
}

/// Exact determinant by fraction-free (Bareiss) elimination. The interim
/// divisions are exact, so any signed integer type works.
fn determinant<T: Integer + Signed + Clone>(mut m: Vec<Vec<T>>) -> T {
    let n = m.len();
    if n == 0 {
        return T::one();
    }
    let mut negate = false;
    let mut prev = T::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&r| !m[r][k].is_zero()) {
                Some(r) => {
                    m.swap(k, r);
                    negate = !negate;
                }
                None => return T::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = m[i][j].clone() * m[k][k].clone() - m[i][k].clone() * m[k][j].clone();
                m[i][j] = num / prev.clone();
            }
            m[i][k] = T::zero();
        }
        prev = m[k][k].clone();
    }
    let det = m[n - 1][n - 1].clone();
    if negate {
        -det
    } else {
        det
    }
}

/// Number of spanning trees: the determinant of any `(p-1) x (p-1)` minor
/// of the graph Laplacian, in exact big-integer arithmetic. Loops are
/// ignored; multi-edges count with multiplicity.
pub fn spanning_tree_count(g: &DualGraph) -> BigUint {
    let p = g.components();
    let mut lap = vec![vec![BigInt::from(0); p]; p];
    for e in 0..g.edge_count() {
        if g.is_loop(e) {
            continue;
        }
        let (a, b) = g.endpoints(e);
        lap[a - 1][a - 1] += 1;
        lap[b - 1][b - 1] += 1;
        lap[a - 1][b - 1] -= 1;
        lap[b - 1][a - 1] -= 1;
    }
    let minor: Vec<Vec<BigInt>> = (1..p)
        .map(|r| (1..p).map(|c| lap[r][c].clone()).collect())
        .collect();
    let det = determinant(minor);
    det.to_biguint()
        .expect("Laplacian minors of connected graphs have positive determinant")
}

/// Cross-check derived from the Néron model description: the degree-0
/// quasistable multidegrees enumerate the component group of the special
/// fiber, so their number equals the spanning-tree count.
pub fn neron_component_check(g: &DualGraph, base: usize, guard: EnumGuard) -> Result<bool> {
    let count = enumerate_quasistable_degree_zero::<Deg>(g, base, guard)?.len();
    Ok(BigUint::from(count) == spanning_tree_count(g))
}

pub const CHECK_NAMES: [&str; 19] = [
    "meet_join_cut_containment",
    "cut_difference_identities",
    "small_cut_meet_join_tails",
    "cut_containment_forces_nesting",
    "two_tail_meet_join_closure",
    "two_tail_terminal_witness",
    "three_tail_meet_closure",
    "three_tail_terminal_witness",
    "no_terminal_pair_inside_tail",
    "no_double_contact_enclosure",
    "no_proper_enclosure_full_contact",
    "four_tail_contact_exclusions",
    "enclosing_contact_outside_witness",
    "outside_three_tail_forces_enclosing_two_tail",
    "single_contact_pair_outside_witness",
    "reduced_check_equivalence",
    "twisted_base_quasistable",
    "beta_half_on_three_tail_complements",
    "degree_identity_on_normalized_tails",
];

const MEET_JOIN_CUTS: usize = 0;
const CUT_DIFF: usize = 1;
const SMALL_CUT_TAILS: usize = 2;
const CUT_NESTING: usize = 3;
const TWO_CLOSURE: usize = 4;
const TWO_WITNESS: usize = 5;
const THREE_CLOSURE: usize = 6;
const THREE_WITNESS: usize = 7;
const NO_PAIR_INSIDE: usize = 8;
const NO_DOUBLE_CONTACT: usize = 9;
const NO_FULL_CONTACT: usize = 10;
const FOUR_TAIL_EXCL: usize = 11;
const OUTSIDE_WITNESS: usize = 12;
const ENCLOSING_TWO_TAIL: usize = 13;
const SINGLE_CONTACT_WITNESS: usize = 14;
const REDUCED_EQUIV: usize = 15;
const QUASISTABLE: usize = 16;
const BETA_HALF: usize = 17;
const DEGREE_IDENTITY: usize = 18;

/// One verified statement: how many hypothesis-satisfying tuples were
/// examined, how many violated the conclusion, and the first witness.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckStats {
    pub name: &'static str,
    pub instances: u64,
    pub violations: u64,
    pub first_counterexample: Option<Counterexample>,
}

/// Replayable witness: the graph in the canonical document format plus the
/// violating tuple.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub trial: Option<u64>,
    pub graph: String,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SuiteReport {
    pub trials: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub params: Option<GenParams>,
    pub checks: Vec<CheckStats>,
    /// Disagreements of the reduced check in its three-tails-only reading;
    /// reported, not counted as violations.
    pub literal_family_disagreements: u64,
}

impl SuiteReport {
    fn empty() -> SuiteReport {
        SuiteReport {
            trials: 0,
            params: None,
            checks: CHECK_NAMES
                .iter()
                .map(|name| CheckStats {
                    name,
                    instances: 0,
                    violations: 0,
                    first_counterexample: None,
                })
                .collect(),
            literal_family_disagreements: 0,
        }
    }

    pub fn all_clean(&self) -> bool {
        self.checks.iter().all(|s| s.violations == 0)
    }

    pub fn check(&self, name: &str) -> &CheckStats {
        self.checks
            .iter()
            .find(|s| s.name == name)
            .expect("unknown check name")
    }

    /// Checks whose hypotheses never fired; these are untested, not passed.
    pub fn untested(&self) -> Vec<&'static str> {
        self.checks
            .iter()
            .filter(|s| s.instances == 0)
            .map(|s| s.name)
            .collect()
    }

    pub fn merge(&mut self, other: SuiteReport) {
        self.trials += other.trials;
        self.literal_family_disagreements += other.literal_family_disagreements;
        for (a, b) in self.checks.iter_mut().zip(other.checks) {
            a.instances += b.instances;
            a.violations += b.violations;
            if a.first_counterexample.is_none() {
                a.first_counterexample = b.first_counterexample;
            }
        }
    }
}

/// Runs every check on one graph.
pub fn lemma_suite(g: &DualGraph, guard: EnumGuard) -> Result<SuiteReport> {
    guard.admit(g)?;
    let mut report = SuiteReport::empty();
    report.trials = 1;
    run_checks(g, None, &mut report)?;
    Ok(report)
}

/// Runs the suite over the seeded ensemble, merging per-trial reports in
/// trial order.
pub fn corpus_suite(params: &GenParams, trials: u64, guard: EnumGuard) -> Result<SuiteReport> {
    params.validate()?;
    let mut report = SuiteReport::empty();
    report.trials = trials;
    report.params = Some(params.clone());
    for trial in 0..trials {
        let g = random_graph(params, trial);
        guard.admit(&g)?;
        run_checks(&g, Some(trial), &mut report)?;
    }
    Ok(report)
}

struct Tally<'a> {
    report: &'a mut SuiteReport,
    graph_json: String,
    trial: Option<u64>,
}

impl Tally<'_> {
    fn hit(&mut self, idx: usize, ok: bool, detail: impl FnOnce() -> String) {
        let stats = &mut self.report.checks[idx];
        stats.instances += 1;
        if !ok {
            stats.violations += 1;
            if stats.first_counterexample.is_none() {
                stats.first_counterexample = Some(Counterexample {
                    trial: self.trial,
                    graph: self.graph_json.clone(),
                    detail: detail(),
                });
            }
        }
    }
}

/// Tail families, twisted multidegree and reduced verdicts for one anchor
/// pair, at the bitmask level.
struct PairData {
    i: usize,
    j: usize,
    two: Vec<u32>,
    s3: Vec<u32>,
    three: Vec<u32>,
    /// Chain members of arity 2 and 3.
    t23: Vec<u32>,
    /// Full multiset (1-tail chains doubled when `i == j`).
    members: Vec<u32>,
    /// Twisted multidegree and its subset-sum table.
    twisted: Vec<Deg>,
    deg: Vec<Deg>,
    quasistable: bool,
    reduced_all_agrees: bool,
    reduced_all_holds: bool,
    reduced_three_agrees: bool,
}

struct Ctx {
    scan: Scan,
    /// `bit(a-1) | bit(b-1)` per edge: the components an edge touches.
    edge_touch: Vec<u32>,
    tails: Vec<u32>,
    tails2: Vec<u32>,
    tails3: Vec<u32>,
    pairs: Vec<PairData>,
}

impl Ctx {
    fn display(&self, mask: u32) -> String {
        self.scan.subcurve(mask).to_string()
    }

    /// Whether every cut edge of `term` lies on the subcurve `mask`, i.e.
    /// has an endpoint among its components.
    fn cut_on(&self, term: u128, mask: u32) -> bool {
        let mut t = term;
        while t != 0 {
            let e = t.trailing_zeros() as usize;
            if self.edge_touch[e] & mask == 0 {
                return false;
            }
            t &= t - 1;
        }
        true
    }

    fn normalized(&self, mask: u32, family: &[u32]) -> bool {
        family
            .iter()
            .all(|&w| self.scan.free(mask, w) || self.scan.perfect(mask, w))
    }
}

fn add_twist(g: &DualGraph, scan: &Scan, w: u32, l: &mut [Deg]) {
    let mut t = scan.term(w);
    while t != 0 {
        let e = t.trailing_zeros() as usize;
        let (a, b) = g.endpoints(e);
        let (inside, outside) = if w >> (a - 1) & 1 == 1 { (a, b) } else { (b, a) };
        l[inside - 1] += 1;
        l[outside - 1] -= 1;
        t &= t - 1;
    }
}

fn build_ctx(g: &DualGraph) -> Result<Ctx> {
    let scan = g.scan();
    let edge_touch = g
        .edges()
        .iter()
        .map(|&(a, b)| 1u32 << (a - 1) | 1 << (b - 1))
        .collect();
    let tails: Vec<u32> = scan.masks().filter(|&m| scan.is_tail(m)).collect();
    let tails2: Vec<u32> = tails.iter().copied().filter(|&m| scan.k(m) == 2).collect();
    let tails3: Vec<u32> = tails.iter().copied().filter(|&m| scan.k(m) == 3).collect();

    let p = g.components();
    let mut pairs = Vec::with_capacity(p * p);
    for i in 1..=p {
        for j in 1..=p {
            let families = pair_families(&scan, i, j)?;
            let mut members: Vec<u32> = Vec::new();
            members.extend(&families.one_i);
            members.extend(&families.one_j);
            members.extend(&families.two);
            members.extend(&families.three);

            let mut twisted = vec![0 as Deg; p];
            twisted[0] += 2;
            twisted[i - 1] -= 1;
            twisted[j - 1] -= 1;
            for &w in &members {
                add_twist(g, &scan, w, &mut twisted);
            }
            let deg = deg_table(scan.full, &twisted);
            let quasistable = quasistable_scan_with(&scan, &deg, 1, false).is_none();

            let mut t23 = families.two.clone();
            t23.extend(&families.three);

            // Reduced check over the full member family.
            let member_set: Vec<u32> = members.clone();
            let mut reduced_all_holds = true;
            for &z in &tails {
                let normalized = member_set
                    .iter()
                    .all(|&w| scan.free(z, w) || scan.perfect(z, w));
                if normalized {
                    let twice = 2 * deg[z as usize];
                    let k = scan.k(z) as Deg;
                    if twice.abs() > k || (z & 1 == 1 && twice + k <= 0) {
                        reduced_all_holds = false;
                        break;
                    }
                }
            }
            let reduced_all_agrees = reduced_all_holds == quasistable;

            // Literal reading: twist by the 3-tail chain only, quantify
            // over tails normalized against it.
            let mut l3 = vec![0 as Deg; p];
            l3[0] += 2;
            l3[i - 1] -= 1;
            l3[j - 1] -= 1;
            for &w in &families.three {
                add_twist(g, &scan, w, &mut l3);
            }
            let deg3 = deg_table(scan.full, &l3);
            let exhaustive3 = quasistable_scan_with(&scan, &deg3, 1, false).is_none();
            let mut reduced3 = true;
            for &z in &tails {
                let normalized = families
                    .three
                    .iter()
                    .all(|&w| scan.free(z, w) || scan.perfect(z, w));
                if normalized {
                    let twice = 2 * deg3[z as usize];
                    let k = scan.k(z) as Deg;
                    if twice.abs() > k || (z & 1 == 1 && twice + k <= 0) {
                        reduced3 = false;
                        break;
                    }
                }
            }

            pairs.push(PairData {
                i,
                j,
                two: families.two,
                s3: families.s3,
                three: families.three,
                t23,
                members,
                twisted,
                deg,
                quasistable,
                reduced_all_agrees,
                reduced_all_holds,
                reduced_three_agrees: reduced3 == exhaustive3,
            });
        }
    }

    Ok(Ctx {
        scan,
        edge_touch,
        tails,
        tails2,
        tails3,
        pairs,
    })
}

fn run_checks(g: &DualGraph, trial: Option<u64>, report: &mut SuiteReport) -> Result<()> {
    let ctx = build_ctx(g)?;
    let mut tally = Tally {
        report,
        graph_json: canonical_string(g),
        trial,
    };
    check_meet_join_cuts(&ctx, &mut tally);
    check_cut_diff(&ctx, &mut tally);
    check_small_cut_tails(&ctx, &mut tally);
    check_cut_nesting(&ctx, &mut tally);
    check_two_closure(&ctx, &mut tally);
    check_pair_families(&ctx, &mut tally);
    Ok(())
}

/// Cuts of meet and join lie inside the union of the two cuts; for free
/// pairs the two sides partition it.
fn check_meet_join_cuts(ctx: &Ctx, t: &mut Tally) {
    let s = &ctx.scan;
    for a in s.masks() {
        for b in s.masks() {
            let meet = s.term(a & b);
            let join = s.term(a | b);
            let outer = s.term(a) | s.term(b);
            let mut ok = (meet | join) & !outer == 0;
            if s.free(a, b) {
                ok = ok && meet & join == 0 && (meet | join) == outer;
            }
            t.hit(MEET_JOIN_CUTS, ok, || {
                format!("Z={} Z'={}", ctx.display(a), ctx.display(b))
            });
        }
    }
}

/// The five symmetric-difference identities for cuts of meets and joins
/// under the stated containments.
fn check_cut_diff(ctx: &Ctx, t: &mut Tally) {
    let s = &ctx.scan;
    let full = s.full;
    // Containment variants: W^c inside W', and W' inside W^c.
    for w in s.masks() {
        let wc = full ^ w;
        let diff_against = |other: u32| s.term(w) ^ s.term(other);
        let mut sub = w;
        loop {
            // supersets of the complement: W' = W^c | sub for sub inside W
            let wsup = wc | sub;
            if wsup != full {
                let ok = s.term(w & wsup) == diff_against(wsup);
                t.hit(CUT_DIFF, ok, || {
                    format!("meet case W={} W'={}", ctx.display(w), ctx.display(wsup))
                });
            }
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & w;
        }
        let mut sub = wc;
        loop {
            if sub != 0 {
                let ok = s.term(w | sub) == diff_against(sub);
                t.hit(CUT_DIFF, ok, || {
                    format!("join case W={} W'={}", ctx.display(w), ctx.display(sub))
                });
            }
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & wc;
        }
    }
    // Tail-anchored variants.
    for &z in &ctx.tails {
        let zc = full ^ z;
        let tz = s.term(z);
        // Both sets containing the tail: cut edges of Z in either cut stay
        // in the cut of the meet.
        let mut s1 = zc;
        loop {
            let w = z | s1;
            if w != full {
                let mut s2 = zc;
                loop {
                    let w2 = z | s2;
                    if w2 != full {
                        let shared = tz & (s.term(w) | s.term(w2));
                        let ok = shared & !s.term(w & w2) == 0;
                        t.hit(CUT_DIFF, ok, || {
                            format!(
                                "enclosing case Z={} W={} W'={}",
                                ctx.display(z),
                                ctx.display(w),
                                ctx.display(w2)
                            )
                        });
                    }
                    if s2 == 0 {
                        break;
                    }
                    s2 = (s2 - 1) & zc;
                }
            }
            if s1 == 0 {
                break;
            }
            s1 = (s1 - 1) & zc;
        }
        // Both sets inside the tail: shared cut edges stay in the cut of
        // the join.
        let mut w = z;
        loop {
            if w != 0 {
                let mut w2 = z;
                loop {
                    if w2 != 0 {
                        let shared = tz & (s.term(w) | s.term(w2));
                        let ok = shared & !s.term(w | w2) == 0;
                        t.hit(CUT_DIFF, ok, || {
                            format!(
                                "enclosed case Z={} W={} W'={}",
                                ctx.display(z),
                                ctx.display(w),
                                ctx.display(w2)
                            )
                        });
                    }
                    if w2 == 0 {
                        break;
                    }
                    w2 = (w2 - 1) & z;
                }
            }
            if w == 0 {
                break;
            }
            w = (w - 1) & z;
        }
        // One set on each side of the tail.
        let mut w = z;
        loop {
            if w != 0 {
                let mut w2 = zc;
                loop {
                    if w2 != 0 {
                        let ok = s.term(w | w2) == (s.term(w) ^ s.term(w2));
                        t.hit(CUT_DIFF, ok, || {
                            format!(
                                "split case Z={} W={} W'={}",
                                ctx.display(z),
                                ctx.display(w),
                                ctx.display(w2)
                            )
                        });
                    }
                    if w2 == 0 {
                        break;
                    }
                    w2 = (w2 - 1) & zc;
                }
            }
            if w == 0 {
                break;
            }
            w = (w - 1) & z;
        }
    }
}

/// Meets and joins of tails with cut size in 1..=3 are tails with cut size
/// at least 2; for free (2,3)-pairs the two cut sizes split five.
fn check_small_cut_tails(ctx: &Ctx, t: &mut Tally) {
    let s = &ctx.scan;
    for &z in &ctx.tails {
        if s.k(z) <= 1 {
            continue;
        }
        for &z2 in &ctx.tails {
            if s.k(z2) <= 1 {
                continue;
            }
            let meet = z & z2;
            let join = z | z2;
            if meet != 0 && (1..=3).contains(&s.k(meet)) {
                let ok = s.k(meet) > 1 && s.is_tail(meet);
                t.hit(SMALL_CUT_TAILS, ok, || {
                    format!("meet of Z={} Z'={}", ctx.display(z), ctx.display(z2))
                });
            }
            if join != s.full && (1..=3).contains(&s.k(join)) {
                let ok = s.k(join) > 1 && s.is_tail(join);
                t.hit(SMALL_CUT_TAILS, ok, || {
                    format!("join of Z={} Z'={}", ctx.display(z), ctx.display(z2))
                });
            }
            if s.free(z, z2)
                && meet != 0
                && join != s.full
                && s.k(meet) >= 1
                && s.k(join) >= 1
                && s.k(z) == 2
                && s.k(z2) == 3
            {
                let ok = s.k(meet) > 1
                    && s.k(join) > 1
                    && s.k(meet) + s.k(join) == 5
                    && s.is_tail(meet)
                    && s.is_tail(join);
                t.hit(SMALL_CUT_TAILS, ok, || {
                    format!("free pair Z={} Z'={}", ctx.display(z), ctx.display(z2))
                });
            }
        }
    }
}

/// Rigidity of tails: a cut lying on another tail forces side containment;
/// overlap of all but one cut edge forces a perfect pair; tails with cut
/// size at least 2 are free against every 1-tail.
fn check_cut_nesting(ctx: &Ctx, t: &mut Tally) {
    let s = &ctx.scan;
    for &z in &ctx.tails {
        let zc = s.full ^ z;
        let tz = s.term(z);
        for &z2 in &ctx.tails {
            if ctx.cut_on(tz, z2) {
                let ok = z & z2 == z || zc & z2 == zc;
                t.hit(CUT_NESTING, ok, || {
                    format!("cut-on-tail Z={} Z'={}", ctx.display(z), ctx.display(z2))
                });
            }
            if s.contact(z, z2) == s.k(z) - 1 {
                let ok = s.perfect(z, z2);
                t.hit(CUT_NESTING, ok, || {
                    format!("near-overlap Z={} Z'={}", ctx.display(z), ctx.display(z2))
                });
            }
            if s.k(z) >= 2 && s.k(z2) == 1 {
                t.hit(CUT_NESTING, s.free(z, z2), || {
                    format!("one-tail partner Z={} Z'={}", ctx.display(z), ctx.display(z2))
                });
            }
        }
    }
}

/// Meets and joins of 2-tails with nonempty cuts are again 2-tails.
fn check_two_closure(ctx: &Ctx, t: &mut Tally) {
    let s = &ctx.scan;
    for &z in &ctx.tails2 {
        for &z2 in &ctx.tails2 {
            let meet = z & z2;
            let join = z | z2;
            if meet == 0 || join == s.full || s.k(meet) < 1 || s.k(join) < 1 {
                continue;
            }
            let ok = s.is_tail(meet) && s.k(meet) == 2 && s.is_tail(join) && s.k(join) == 2;
            t.hit(TWO_CLOSURE, ok, || {
                format!("Z={} Z'={}", ctx.display(z), ctx.display(z2))
            });
        }
    }
}

/// All per-anchor-pair checks: witness corollaries, the chain closure for
/// qualifying 3-tails, the nonexistence searches, the outside-witness
/// facts, the reduced-check equivalence, quasistability of the twisted
/// bundle, and its degree bookkeeping.
fn check_pair_families(ctx: &Ctx, t: &mut Tally) {
    let s = &ctx.scan;
    let full = s.full;
    for pair in &ctx.pairs {
        let (i, j) = (pair.i, pair.j);
        let inside: u32 = 1 << (i - 1) | 1 << (j - 1);
        let label = |what: &str, masks: &[u32]| {
            let list: Vec<String> = masks.iter().map(|&m| ctx.display(m)).collect();
            format!("i={i} j={j} {what} {}", list.join(" "))
        };

        // Every separating 2-tail contains a chain member terminal to it.
        for &z in &ctx.tails2 {
            if z & inside != inside || z & 1 != 0 {
                continue;
            }
            let ok = pair
                .two
                .iter()
                .any(|&w| s.contact(z, w) >= 1 && w & z == w);
            t.hit(TWO_WITNESS, ok, || label("Z=", &[z]));
        }

        // The qualifying free 3-tails are closed under meets.
        for &z in &pair.s3 {
            for &z2 in &pair.s3 {
                let meet = z & z2;
                let ok = pair.s3.binary_search(&meet).is_ok();
                t.hit(THREE_CLOSURE, ok, || label("Z,Z'=", &[z, z2]));
            }
        }

        // Every separating 3-tail meets a chain member terminally; a
        // 3-tail witness additionally lies inside.
        for &z in &ctx.tails3 {
            if z & inside != inside || z & 1 != 0 {
                continue;
            }
            let ok = pair
                .t23
                .iter()
                .any(|&w| s.contact(z, w) >= 1 && (s.k(w) == 2 || w & z == w));
            t.hit(THREE_WITNESS, ok, || label("Z=", &[z]));
        }

        // Nonexistence searches over the chain families.
        for &z in &ctx.tails {
            let kz = s.k(z);
            let zc = full ^ z;

            if kz >= 3 {
                for &w in &pair.two {
                    if s.contact(z, w) == 0 {
                        continue;
                    }
                    for &w2 in &pair.three {
                        if s.contact(z, w2) == 0 {
                            continue;
                        }
                        let ok = !(w & z == w && w2 & z == w2);
                        t.hit(NO_PAIR_INSIDE, ok, || label("Z,W,W'=", &[z, w, w2]));
                    }
                }
            }

            if kz >= 4 {
                for &w in &pair.two {
                    if s.contact(z, w) == 0 || z & w != z {
                        continue;
                    }
                    for &w2 in &pair.three {
                        if s.contact(z, w2) == 0 || z & w2 != z {
                            continue;
                        }
                        let ok = s.contact(z, w2) != 2;
                        t.hit(NO_DOUBLE_CONTACT, ok, || label("Z,W,W'=", &[z, w, w2]));
                    }
                }
            }

            // Four-tail exclusions around an inner double-contact 3-tail.
            if kz == 4 {
                for &w in &pair.three {
                    if w & z != w || s.contact(z, w) != 2 {
                        continue;
                    }
                    for &w2 in &pair.three {
                        if z & w2 != z {
                            continue;
                        }
                        t.hit(FOUR_TAIL_EXCL, s.contact(z, w2) != 2, || {
                            label("enclosing Z,W,W'=", &[z, w, w2])
                        });
                        for &w3 in &pair.two {
                            if z & w3 != z {
                                continue;
                            }
                            let ok = !(s.contact(z, w2) == 1 && s.contact(z, w3) == 1);
                            t.hit(FOUR_TAIL_EXCL, ok, || {
                                label("pair Z,W,W',W''=", &[z, w, w2, w3])
                            });
                        }
                    }
                }
            }

            // Outside-witness facts for normalized tails.
            let normalized2 = ctx.normalized(z, &pair.two);
            if normalized2 && (2..=4).contains(&kz) && inside & z == 0 {
                let want = if kz == 2 { 1 } else { 2 };
                for &w in &pair.t23 {
                    if z & w != z || s.contact(z, w) != want {
                        continue;
                    }
                    let ok = pair
                        .t23
                        .iter()
                        .any(|&w2| s.contact(z, w2) >= 1 && w2 & zc == w2);
                    t.hit(OUTSIDE_WITNESS, ok, || label("Z,W=", &[z, w]));
                }
            }
            if normalized2 && kz == 3 && (inside | 1) & z == 0 {
                for &w in &pair.three {
                    if s.contact(z, w) != 2 || w & zc != w {
                        continue;
                    }
                    let ok = pair
                        .two
                        .iter()
                        .any(|&w2| s.contact(z, w2) >= 1 && z & w2 == z);
                    t.hit(ENCLOSING_TWO_TAIL, ok, || label("Z,W=", &[z, w]));
                }
            }
            if normalized2 && (kz == 3 || kz == 4) && (inside | 1) & z == 0 {
                for &w in &pair.two {
                    if z & w != z || s.contact(z, w) != 1 {
                        continue;
                    }
                    for &w2 in &pair.three {
                        if z & w2 != z || s.contact(z, w2) != 1 {
                            continue;
                        }
                        let ok = pair
                            .t23
                            .iter()
                            .any(|&w3| s.contact(z, w3) >= 1 && w3 & zc == w3);
                        t.hit(SINGLE_CONTACT_WITNESS, ok, || label("Z,W,W'=", &[z, w, w2]));
                    }
                }
            }
        }

        // Reduced check equivalence and the theorem itself.
        t.hit(REDUCED_EQUIV, pair.reduced_all_agrees, || {
            format!("i={i} j={j}")
        });
        debug_assert!(pair.reduced_all_holds == pair.quasistable);
        if !pair.reduced_three_agrees {
            t.report.literal_family_disagreements += 1;
        }
        t.hit(QUASISTABLE, pair.quasistable, || {
            format!(
                "i={i} j={j} multidegree=({})",
                pair.twisted
                    .iter()
                    .map(|d| d.to_string())
                    .collect::<Vec<_>>()
                    .join(",")
            )
        });

        // Complements of 3-tail chain members have beta exactly one half.
        for &w in &pair.three {
            let wc = full ^ w;
            let doubled = 2 * pair.deg[wc as usize] + s.k(wc) as Deg;
            t.hit(BETA_HALF, doubled == 1, || label("W=", &[w]));
        }

        // Degree bookkeeping on normalized tails with cut size at least 2:
        // twisted degree = base degree + shared cuts of enclosing/enclosed
        // members minus shared cuts of members on the complement side.
        for &z in &ctx.tails {
            if s.k(z) < 2 || !ctx.normalized(z, &pair.members) {
                continue;
            }
            let zc = full ^ z;
            let mut plus = 0i64;
            let mut minus = 0i64;
            for &w in &pair.t23 {
                let shared = s.contact(z, w) as i64;
                if w & z == w || z & w == z {
                    plus += shared;
                } else if w & zc == w || zc & w == zc {
                    minus += shared;
                }
            }
            let base = 2 * (z & 1) as i64 - (z >> (i - 1) & 1) as i64 - (z >> (j - 1) & 1) as i64;
            let ok = pair.deg[z as usize] == base + plus - minus;
            t.hit(DEGREE_IDENTITY, ok, || label("Z=", &[z]));
        }
    }

    // Strict-enclosure exclusion over arbitrary free (2,3) tail pairs,
    // independent of the anchor pair.
    for &w in &ctx.tails2 {
        for &w2 in &ctx.tails3 {
            if !s.free(w, w2) {
                continue;
            }
            let meet = w & w2;
            for &z in &ctx.tails {
                if meet & z != z {
                    continue;
                }
                let covered = s.term(z) & !(s.term(w) | s.term(w2)) == 0;
                let ok = !(covered && z != meet && s.k(w | w2) >= 1 && (w | w2) != full);
                t.hit(NO_FULL_CONTACT, ok, || {
                    format!(
                        "Z={} W={} W'={}",
                        ctx.display(z),
                        ctx.display(w),
                        ctx.display(w2)
                    )
                });
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    const GUARD: EnumGuard = EnumGuard::DEFAULT;

    fn params(p: (usize, usize), extra: (usize, usize), seed: u64) -> GenParams {
        GenParams {
            p_range: p,
            extra_edges: extra,
            loop_probability: (1, 8),
            master_seed: seed,
        }
    }

    #[test]
    fn generation_is_deterministic() {
        let p = params((2, 6), (0, 4), 42);
        for trial in 0..50 {
            assert_eq!(random_graph(&p, trial), random_graph(&p, trial));
        }
        let graphs: Vec<_> = (0..20).map(|t| random_graph(&p, t)).collect();
        assert!(graphs.windows(2).any(|w| w[0] != w[1]));
    }

    #[test]
    fn generation_respects_ranges() {
        let p = params((2, 2), (0, 0), 7);
        let g = random_graph(&p, 0);
        assert_eq!(g.components(), 2);
        assert_eq!(
            g.edges().iter().filter(|&&(a, b)| a != b).count(),
            1,
            "a two-component tree is a single edge"
        );

        let p = params((4, 6), (0, 4), 11);
        for trial in 0..500 {
            let g = random_graph(&p, trial);
            assert!((4..=6).contains(&g.components()));
        }
    }

    #[test]
    fn rejects_bad_params() {
        assert!(params((0, 3), (0, 0), 1).validate().is_err());
        assert!(params((3, 2), (0, 0), 1).validate().is_err());
        let mut p = params((2, 3), (0, 0), 1);
        p.loop_probability = (3, 2);
        assert!(p.validate().is_err());
    }

    #[test]
    fn determinant_cases() {
        assert_eq!(determinant::<i64>(vec![]), 1);
        assert_eq!(determinant(vec![vec![5i64]]), 5);
        assert_eq!(
            determinant(vec![vec![3i64, 0, -1], vec![0, 3, -1], vec![-1, -1, 2]]),
            12
        );
        // singular
        assert_eq!(
            determinant(vec![vec![1i64, 2], vec![2, 4]]),
            0
        );
        // row swap needed
        assert_eq!(
            determinant(vec![vec![0i64, 1], vec![1, 0]]),
            -1
        );
    }

    /// Brute-force tree counter: choose `p - 1` non-loop edges and test
    /// that they connect everything.
    fn count_trees_by_enumeration(g: &DualGraph) -> u64 {
        let p = g.components();
        if p == 1 {
            return 1;
        }
        let edges: Vec<usize> = (0..g.edge_count()).filter(|&e| !g.is_loop(e)).collect();
        let mut count = 0;
        let mut pick = vec![0usize; p - 1];
        fn rec(
            g: &DualGraph,
            edges: &[usize],
            pick: &mut Vec<usize>,
            level: usize,
            start: usize,
            count: &mut u64,
        ) {
            if level == pick.len() {
                let mut parent: Vec<usize> = (0..g.components()).collect();
                fn find(parent: &mut Vec<usize>, v: usize) -> usize {
                    if parent[v] != v {
                        let root = find(parent, parent[v]);
                        parent[v] = root;
                    }
                    parent[v]
                }
                let mut joined = 0;
                for &e in pick.iter() {
                    let (a, b) = g.endpoints(edges[e]);
                    let (ra, rb) = (find(&mut parent, a - 1), find(&mut parent, b - 1));
                    if ra != rb {
                        parent[ra] = rb;
                        joined += 1;
                    }
                }
                if joined == g.components() - 1 {
                    *count += 1;
                }
                return;
            }
            for e in start..edges.len() {
                pick[level] = e;
                rec(g, edges, pick, level + 1, e + 1, count);
            }
        }
        rec(g, &edges, &mut pick, 0, 0, &mut count);
        count
    }

    #[test]
    fn tree_counts_on_fixtures() {
        assert_eq!(spanning_tree_count(&fixtures::bridge()), BigUint::from(1u32));
        assert_eq!(spanning_tree_count(&fixtures::banana()), BigUint::from(2u32));
        assert_eq!(
            spanning_tree_count(&fixtures::doubled_cycle()),
            BigUint::from(12u32)
        );
        let single = DualGraph::new(1, &[]).unwrap();
        assert_eq!(spanning_tree_count(&single), BigUint::from(1u32));
    }

    #[test]
    fn tree_count_matches_enumeration() {
        for g in [
            fixtures::bridge(),
            fixtures::banana(),
            fixtures::doubled_cycle(),
            fixtures::pendant_cycle(),
        ] {
            assert_eq!(
                spanning_tree_count(&g),
                BigUint::from(count_trees_by_enumeration(&g))
            );
        }
        let p = params((2, 5), (0, 3), 99);
        for trial in 0..200 {
            let g = random_graph(&p, trial);
            assert_eq!(
                spanning_tree_count(&g),
                BigUint::from(count_trees_by_enumeration(&g)),
                "trial {trial}"
            );
        }
    }

    #[test]
    fn neron_checks_on_fixtures() {
        for g in [
            fixtures::bridge(),
            fixtures::banana(),
            fixtures::doubled_cycle(),
            fixtures::pendant_cycle(),
        ] {
            assert!(neron_component_check(&g, 1, GUARD).unwrap());
        }
    }

    #[test]
    fn suite_clean_on_fixtures() {
        for g in [
            fixtures::bridge(),
            fixtures::banana(),
            fixtures::doubled_cycle(),
            fixtures::pendant_cycle(),
        ] {
            let report = lemma_suite(&g, GUARD).unwrap();
            assert!(report.all_clean(), "violations on {:?}", report);
        }
    }

    #[test]
    fn suite_exercises_core_checks_on_fixtures() {
        let report = lemma_suite(&fixtures::pendant_cycle(), GUARD).unwrap();
        for idx in [
            MEET_JOIN_CUTS,
            CUT_DIFF,
            SMALL_CUT_TAILS,
            CUT_NESTING,
            TWO_CLOSURE,
            TWO_WITNESS,
            THREE_CLOSURE,
            THREE_WITNESS,
            REDUCED_EQUIV,
            QUASISTABLE,
            BETA_HALF,
            DEGREE_IDENTITY,
        ] {
            assert!(
                report.checks[idx].instances > 0,
                "{} untested",
                CHECK_NAMES[idx]
            );
        }
    }

    #[test]
    fn corpus_run_is_deterministic_and_clean() {
        let p = params((2, 6), (0, 4), 0x5EED);
        let a = corpus_suite(&p, 60, GUARD).unwrap();
        let b = corpus_suite(&p, 60, GUARD).unwrap();
        assert_eq!(a, b);
        assert!(a.all_clean());
        assert_eq!(a.trials, 60);
    }
}
