//! Command-line reports over the dual-graph library: tail listings, nested
//! tail chains, twists, quasistability checks, degree-zero enumeration, the
//! spanning-tree cross-check and the lemma falsification suite.
//!
//! Exit codes: 0 on success, 1 on a mathematical failure (a quasistability
//! violation, a count mismatch, a suite counterexample), 2 on usage or
//! parse errors.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Parser, Subcommand};
use serde::Serialize;

use nodal::abel_neron::{all_pairs, AbelNeronResult};
use nodal::document::{parse_graph_document, GraphDocument};
use nodal::stability::{
    beta, enumerate_quasistable_degree_zero, is_quasistable, is_semistable_at, twist_multidegree,
    Multidegree,
};
use nodal::tails::enumerate_tails;
use nodal::verify::{
    corpus_suite, lemma_suite, random_graph, spanning_tree_count, GenParams, SuiteReport,
};
use nodal::{Deg, DualGraph, EnumGuard, Subcurve};

const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Environment variable overriding the exhaustive-scan component limit.
const GUARD_ENV: &str = "NODAL_ENUM_GUARD";

#[derive(Parser)]
#[command(
    name = "nodal",
    version,
    about = "Dual-graph combinatorics of nodal curves: tails, twists, quasistability"
)]
struct Cli {
    /// Emit the machine-readable JSON report instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List tails, optionally filtered by cut size and membership.
    Tails {
        /// Graph document (JSON).
        #[arg(long)]
        graph: PathBuf,
        /// Keep only tails with this cut size.
        #[arg(long)]
        k: Option<usize>,
        /// Keep only tails containing these components.
        #[arg(long, value_delimiter = ',')]
        contains: Vec<usize>,
        /// Keep only tails avoiding these components.
        #[arg(long, value_delimiter = ',')]
        avoids: Vec<usize>,
    },
    /// Nested tail chains and twist coefficients for one anchor pair.
    NestedTails {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        i: usize,
        #[arg(long)]
        j: usize,
        /// Marked component (internally relabeled to component 1).
        #[arg(long, default_value_t = 1)]
        base: usize,
    },
    /// Fiber multidegree of the twist by minus a subcurve.
    Twist {
        #[arg(long)]
        graph: PathBuf,
        /// Subcurve as comma-separated component indices, e.g. 2,4.
        #[arg(long, value_delimiter = ',')]
        subcurve: Vec<usize>,
    },
    /// Twisted double-point bundle and its quasistability verdict.
    AbelNeron {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        i: Option<usize>,
        #[arg(long)]
        j: Option<usize>,
        /// Run every anchor pair.
        #[arg(long)]
        all_pairs: bool,
        #[arg(long, default_value_t = 1)]
        base: usize,
    },
    /// Exhaustive quasistability check of a multidegree.
    Check {
        #[arg(long)]
        graph: PathBuf,
        /// Comma-separated integer degrees, e.g. 1,-1.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        multidegree: Vec<Deg>,
        #[arg(long, default_value_t = 1)]
        base: usize,
    },
    /// All degree-zero quasistable multidegrees.
    EnumerateQuasistable {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, default_value_t = 1)]
        base: usize,
    },
    /// Compare the quasistable count with the spanning-tree count.
    NeronCheck {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, default_value_t = 1)]
        base: usize,
    },
    /// Lemma falsification suite on one graph or a seeded random ensemble.
    Verify {
        /// Run the suite on this graph only.
        #[arg(long)]
        graph: Option<PathBuf>,
        #[arg(long, default_value_t = 1000)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 2)]
        p_min: usize,
        #[arg(long, default_value_t = 6)]
        p_max: usize,
        /// Extra edges beyond a spanning tree: inclusive range LO:HI or a
        /// single fixed count.
        #[arg(long, default_value = "0:4")]
        extra_edges: String,
        /// Loop probability per component, as NUM/DEN.
        #[arg(long, default_value = "1/8")]
        loops: String,
        /// Print the generated graph of one trial and exit.
        #[arg(long)]
        show_trial: Option<u64>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> anyhow::Result<ExitCode> {
    let guard = guard_from_env()?;
    match cli.command {
        Command::Tails {
            graph,
            k,
            contains,
            avoids,
        } => cmd_tails(cli.json, &graph, k, &contains, &avoids, guard),
        Command::NestedTails { graph, i, j, base } => {
            cmd_nested_tails(cli.json, &graph, i, j, base, guard)
        }
        Command::Twist { graph, subcurve } => cmd_twist(cli.json, &graph, &subcurve),
        Command::AbelNeron {
            graph,
            i,
            j,
            all_pairs,
            base,
        } => cmd_abel_neron(cli.json, &graph, i, j, all_pairs, base, guard),
        Command::Check {
            graph,
            multidegree,
            base,
        } => cmd_check(cli.json, &graph, multidegree, base, guard),
        Command::EnumerateQuasistable { graph, base } => {
            cmd_enumerate(cli.json, &graph, base, guard)
        }
        Command::NeronCheck { graph, base } => cmd_neron_check(cli.json, &graph, base, guard),
        Command::Verify {
            graph,
            trials,
            seed,
            p_min,
            p_max,
            extra_edges,
            loops,
            show_trial,
        } => cmd_verify(
            cli.json, graph, trials, seed, p_min, p_max, &extra_edges, &loops, show_trial, guard,
        ),
    }
}

fn guard_from_env() -> anyhow::Result<EnumGuard> {
    match std::env::var(GUARD_ENV) {
        Ok(raw) => {
            let limit: usize = raw
                .parse()
                .with_context(|| format!("{GUARD_ENV} must be an integer, got {raw:?}"))?;
            Ok(EnumGuard::new(limit))
        }
        Err(_) => Ok(EnumGuard::default()),
    }
}

fn load_graph(path: &PathBuf) -> anyhow::Result<(DualGraph, GraphDocument)> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let parsed =
        parse_graph_document(&text).with_context(|| format!("parsing {}", path.display()))?;
    Ok(parsed)
}

fn emit<T: Serialize>(json: bool, command: &str, body: &T, human: &str) {
    if json {
        #[derive(Serialize)]
        struct Envelope<'a, T: Serialize> {
            version: &'a str,
            command: &'a str,
            #[serde(flatten)]
            report: &'a T,
        }
        let envelope = Envelope {
            version: VERSION,
            command,
            report: body,
        };
        println!(
            "{}",
            serde_json::to_string(&envelope).expect("report serialization cannot fail")
        );
    } else {
        print!("{human}");
    }
}

fn format_set(components: &[usize]) -> String {
    let inner: Vec<String> = components.iter().map(|l| l.to_string()).collect();
    format!("{{{}}}", inner.join(","))
}

fn format_degrees(d: &[Deg]) -> String {
    let inner: Vec<String> = d.iter().map(|v| v.to_string()).collect();
    format!("({})", inner.join(","))
}

/// Involution swapping component 1 with the marked component, used to run
/// the component-1-anchored constructions for any base: inputs are mapped
/// in, outputs are mapped back, so reports stay in the caller's labels.
#[derive(Clone, Copy)]
struct Relabel {
    base: usize,
}

impl Relabel {
    fn new(base: usize, components: usize) -> anyhow::Result<Relabel> {
        if base < 1 || base > components {
            bail!("base component {base} out of range 1..={components}");
        }
        Ok(Relabel { base })
    }

    fn map(&self, l: usize) -> usize {
        if l == 1 {
            self.base
        } else if l == self.base {
            1
        } else {
            l
        }
    }

    /// Same graph with components 1 and `base` exchanged; edge order (and
    /// so edge indices) is preserved.
    fn graph(&self, g: &DualGraph) -> DualGraph {
        if self.base == 1 {
            return g.clone();
        }
        let edges: Vec<(usize, usize)> = g
            .edges()
            .iter()
            .map(|&(a, b)| (self.map(a), self.map(b)))
            .collect();
        DualGraph::new(g.components(), &edges).expect("relabeling preserves validity")
    }

    fn set_out(&self, z: &Subcurve) -> Vec<usize> {
        let mut out: Vec<usize> = z.component_indices().map(|l| self.map(l)).collect();
        out.sort_unstable();
        out
    }

    fn chain_out(&self, entries: &[Subcurve]) -> Vec<Vec<usize>> {
        entries.iter().map(|z| self.set_out(z)).collect()
    }

    fn degrees_out(&self, d: &[Deg]) -> Vec<Deg> {
        let mut out = d.to_vec();
        out.swap(0, self.base - 1);
        out
    }
}

#[derive(Serialize)]
struct TailEntry {
    components: Vec<usize>,
    k: usize,
}

fn cmd_tails(
    json: bool,
    path: &PathBuf,
    k: Option<usize>,
    contains: &[usize],
    avoids: &[usize],
    guard: EnumGuard,
) -> anyhow::Result<ExitCode> {
    let (g, doc) = load_graph(path)?;
    for &l in contains.iter().chain(avoids) {
        if l < 1 || l > g.components() {
            bail!("component {l} out of range 1..={}", g.components());
        }
    }
    let tails: Vec<TailEntry> = enumerate_tails(&g, k, guard)?
        .into_iter()
        .filter(|z| {
            contains.iter().all(|&l| z.contains_component(l))
                && avoids.iter().all(|&l| !z.contains_component(l))
        })
        .map(|z| TailEntry {
            components: z.component_indices().collect(),
            k: g.cut_size(z),
        })
        .collect();

    #[derive(Serialize)]
    struct Body<'a> {
        graph: &'a GraphDocument,
        k: Option<usize>,
        contains: &'a [usize],
        avoids: &'a [usize],
        count: usize,
        tails: &'a [TailEntry],
    }

    let mut human = format!(
        "graph: {} components, {} edges\n",
        g.components(),
        g.edge_count()
    );
    human.push_str(&format!("{} tails", tails.len()));
    if let Some(k) = k {
        human.push_str(&format!(" with k={k}"));
    }
    if !contains.is_empty() {
        human.push_str(&format!(" containing {}", format_set(contains)));
    }
    if !avoids.is_empty() {
        human.push_str(&format!(" avoiding {}", format_set(avoids)));
    }
    human.push_str(":\n");
    for t in &tails {
        human.push_str(&format!("  {}  k={}\n", format_set(&t.components), t.k));
    }

    emit(
        json,
        "tails",
        &Body {
            graph: &doc,
            k,
            contains,
            avoids,
            count: tails.len(),
            tails: &tails,
        },
        &human,
    );
    Ok(ExitCode::SUCCESS)
}

#[derive(Serialize)]
struct PairReport {
    i: usize,
    j: usize,
    one_i: Vec<Vec<usize>>,
    one_j: Vec<Vec<usize>>,
    two: Vec<Vec<usize>>,
    three: Vec<Vec<usize>>,
    coefficients: Vec<Deg>,
    multidegree: Vec<Deg>,
    quasistable: bool,
    witness: Option<Vec<usize>>,
}

impl PairReport {
    fn new(r: &AbelNeronResult, relabel: Relabel) -> PairReport {
        PairReport {
            i: relabel.map(r.i),
            j: relabel.map(r.j),
            one_i: relabel.chain_out(&r.tails.one_i.entries),
            one_j: relabel.chain_out(&r.tails.one_j.entries),
            two: relabel.chain_out(&r.tails.two.entries),
            three: relabel.chain_out(&r.tails.three.entries),
            coefficients: relabel.degrees_out(&r.coefficients),
            multidegree: relabel.degrees_out(r.multidegree.as_slice()),
            quasistable: r.quasistable,
            witness: r.witness.as_ref().map(|z| relabel.set_out(z)),
        }
    }

    fn human(&self, base: usize) -> String {
        let chains = |name: &str, chain: &[Vec<usize>]| {
            let list: Vec<String> = chain.iter().map(|c| format_set(c)).collect();
            format!("  {name}: [{}]\n", list.join(", "))
        };
        let mut out = format!("anchor pair ({}, {}), base component {base}\n", self.i, self.j);
        out.push_str(&chains(&format!("1-tails at {}", self.i), &self.one_i));
        out.push_str(&chains(&format!("1-tails at {}", self.j), &self.one_j));
        out.push_str(&chains("2-tail chain", &self.two));
        out.push_str(&chains("3-tail chain", &self.three));
        out.push_str(&format!(
            "  coefficients: {}\n  multidegree: {}\n  quasistable: {}\n",
            format_degrees(&self.coefficients),
            format_degrees(&self.multidegree),
            self.quasistable
        ));
        if let Some(w) = &self.witness {
            out.push_str(&format!("  witness: {}\n", format_set(w)));
        }
        out
    }
}

fn cmd_nested_tails(
    json: bool,
    path: &PathBuf,
    i: usize,
    j: usize,
    base: usize,
    guard: EnumGuard,
) -> anyhow::Result<ExitCode> {
    let (g, _) = load_graph(path)?;
    let relabel = Relabel::new(base, g.components())?;
    let internal = relabel.graph(&g);
    let result = nodal::abel_neron::abel_neron_multidegree(
        &internal,
        relabel.map(i),
        relabel.map(j),
        guard,
    )?;
    let report = PairReport::new(&result, relabel);

    #[derive(Serialize)]
    struct Body {
        base: usize,
        i: usize,
        j: usize,
        one_i: Vec<Vec<usize>>,
        one_j: Vec<Vec<usize>>,
        two: Vec<Vec<usize>>,
        three: Vec<Vec<usize>>,
        coefficients: Vec<Deg>,
    }

    let mut human = format!("nested tails for ({i}, {j}), base component {base}\n");
    let chains = |name: &str, chain: &[Vec<usize>]| {
        let list: Vec<String> = chain.iter().map(|c| format_set(c)).collect();
        format!("  {name}: [{}]\n", list.join(", "))
    };
    human.push_str(&chains(&format!("1-tails at {i}"), &report.one_i));
    human.push_str(&chains(&format!("1-tails at {j}"), &report.one_j));
    human.push_str(&chains("2-tail chain", &report.two));
    human.push_str(&chains("3-tail chain", &report.three));
    human.push_str(&format!(
        "  coefficients: {}\n",
        format_degrees(&report.coefficients)
    ));

    emit(
        json,
        "nested-tails",
        &Body {
            base,
            i: report.i,
            j: report.j,
            one_i: report.one_i,
            one_j: report.one_j,
            two: report.two,
            three: report.three,
            coefficients: report.coefficients,
        },
        &human,
    );
    Ok(ExitCode::SUCCESS)
}

fn cmd_twist(json: bool, path: &PathBuf, components: &[usize]) -> anyhow::Result<ExitCode> {
    let (g, _) = load_graph(path)?;
    let z = g
        .subcurve(components.iter().copied())
        .context("invalid subcurve")?;
    let cut = g.cut(z);
    let twist: Multidegree = twist_multidegree(&g, z);

    #[derive(Serialize)]
    struct Body {
        subcurve: Vec<usize>,
        cut: Vec<usize>,
        k: usize,
        multidegree: Vec<Deg>,
    }

    let human = format!(
        "subcurve {}: cut {} (k={}), twist multidegree {}\n",
        z,
        cut,
        cut.len(),
        twist
    );
    emit(
        json,
        "twist",
        &Body {
            subcurve: z.component_indices().collect(),
            cut: cut.indices().collect(),
            k: cut.len(),
            multidegree: twist.as_slice().to_vec(),
        },
        &human,
    );
    Ok(ExitCode::SUCCESS)
}

fn cmd_abel_neron(
    json: bool,
    path: &PathBuf,
    i: Option<usize>,
    j: Option<usize>,
    run_all: bool,
    base: usize,
    guard: EnumGuard,
) -> anyhow::Result<ExitCode> {
    let (g, _) = load_graph(path)?;
    let relabel = Relabel::new(base, g.components())?;
    let internal = relabel.graph(&g);

    let results: Vec<AbelNeronResult> = if run_all {
        if i.is_some() || j.is_some() {
            bail!("--all-pairs excludes --i/--j");
        }
        all_pairs(&internal, guard)?
    } else {
        let (i, j) = match (i, j) {
            (Some(i), Some(j)) => (i, j),
            _ => bail!("provide --i and --j, or --all-pairs"),
        };
        vec![nodal::abel_neron::abel_neron_multidegree(
            &internal,
            relabel.map(i),
            relabel.map(j),
            guard,
        )?]
    };

    let reports: Vec<PairReport> = results.iter().map(|r| PairReport::new(r, relabel)).collect();
    let all_quasistable = reports.iter().all(|r| r.quasistable);

    #[derive(Serialize)]
    struct Body<'a> {
        base: usize,
        all_quasistable: bool,
        results: &'a [PairReport],
    }

    let mut human = String::new();
    if reports.len() == 1 {
        human.push_str(&reports[0].human(base));
    } else {
        for r in &reports {
            human.push_str(&format!(
                "({}, {}): multidegree={} quasistable={}\n",
                r.i,
                r.j,
                format_degrees(&r.multidegree),
                r.quasistable
            ));
        }
        human.push_str(&format!("all pairs quasistable: {all_quasistable}\n"));
    }

    emit(
        json,
        "abel-neron",
        &Body {
            base,
            all_quasistable,
            results: &reports,
        },
        &human,
    );
    Ok(if all_quasistable {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn cmd_check(
    json: bool,
    path: &PathBuf,
    entries: Vec<Deg>,
    base: usize,
    guard: EnumGuard,
) -> anyhow::Result<ExitCode> {
    let (g, _) = load_graph(path)?;
    if entries.len() != g.components() {
        bail!(
            "multidegree has {} entries for {} components",
            entries.len(),
            g.components()
        );
    }
    if base < 1 || base > g.components() {
        bail!("base component {base} out of range 1..={}", g.components());
    }
    let d = Multidegree::new(entries);
    let verdict = is_quasistable(&g, &d, base, guard)?;

    #[derive(Serialize)]
    struct Body {
        base: usize,
        multidegree: Vec<Deg>,
        total: Deg,
        quasistable: bool,
        witness: Option<Vec<usize>>,
        witness_semistable: Option<bool>,
        witness_beta_doubled: Option<Deg>,
    }

    let witness = verdict.witness();
    let mut human = format!(
        "multidegree {} (total {}), base component {base}: ",
        d,
        d.total()
    );
    let (ws, wb) = match witness {
        Some(z) => {
            let semistable = is_semistable_at(&g, &d, z);
            let b = beta(&g, &d, z);
            human.push_str(&format!(
                "NOT quasistable\nwitness {}: deg={}, k={}, beta={}{}\n",
                z,
                d.deg_on(z),
                g.cut_size(z),
                b,
                if semistable {
                    " (beta must be positive on the base side)"
                } else {
                    " (semistability violated)"
                }
            ));
            (Some(semistable), Some(b.doubled()))
        }
        None => {
            human.push_str("quasistable\n");
            (None, None)
        }
    };

    emit(
        json,
        "check",
        &Body {
            base,
            multidegree: d.as_slice().to_vec(),
            total: d.total(),
            quasistable: verdict.is_quasistable(),
            witness: witness.map(|z| z.component_indices().collect()),
            witness_semistable: ws,
            witness_beta_doubled: wb,
        },
        &human,
    );
    Ok(if verdict.is_quasistable() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn cmd_enumerate(
    json: bool,
    path: &PathBuf,
    base: usize,
    guard: EnumGuard,
) -> anyhow::Result<ExitCode> {
    let (g, _) = load_graph(path)?;
    if base < 1 || base > g.components() {
        bail!("base component {base} out of range 1..={}", g.components());
    }
    let all: Vec<Multidegree> = enumerate_quasistable_degree_zero(&g, base, guard)?;

    #[derive(Serialize)]
    struct Body {
        base: usize,
        count: usize,
        multidegrees: Vec<Vec<Deg>>,
    }

    let mut human = format!(
        "{} degree-zero quasistable multidegrees (base component {base}):\n",
        all.len()
    );
    for d in &all {
        human.push_str(&format!("  {d}\n"));
    }
    emit(
        json,
        "enumerate-quasistable",
        &Body {
            base,
            count: all.len(),
            multidegrees: all.iter().map(|d| d.as_slice().to_vec()).collect(),
        },
        &human,
    );
    Ok(ExitCode::SUCCESS)
}

fn cmd_neron_check(
    json: bool,
    path: &PathBuf,
    base: usize,
    guard: EnumGuard,
) -> anyhow::Result<ExitCode> {
    let (g, _) = load_graph(path)?;
    if base < 1 || base > g.components() {
        bail!("base component {base} out of range 1..={}", g.components());
    }
    let count = enumerate_quasistable_degree_zero::<Deg>(&g, base, guard)?.len();
    let trees = spanning_tree_count(&g);
    let matches = nodal::verify::neron_component_check(&g, base, guard)?;

    #[derive(Serialize)]
    struct Body {
        base: usize,
        quasistable_degree_zero: usize,
        spanning_trees: String,
        #[serde(rename = "match")]
        matches: bool,
    }

    let human = format!(
        "degree-zero quasistable multidegrees: {count}\nspanning trees: {trees}\nmatch: {matches}\n"
    );
    emit(
        json,
        "neron-check",
        &Body {
            base,
            quasistable_degree_zero: count,
            spanning_trees: trees.to_string(),
            matches,
        },
        &human,
    );
    Ok(if matches {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn parse_range(raw: &str) -> anyhow::Result<(usize, usize)> {
    match raw.split_once(':') {
        Some((lo, hi)) => Ok((lo.trim().parse()?, hi.trim().parse()?)),
        None => {
            let n: usize = raw.trim().parse()?;
            Ok((n, n))
        }
    }
}

fn parse_ratio(raw: &str) -> anyhow::Result<(u32, u32)> {
    match raw.split_once('/') {
        Some((num, den)) => Ok((num.trim().parse()?, den.trim().parse()?)),
        None => {
            let n: u32 = raw.trim().parse()?;
            Ok((n, 1))
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_verify(
    json: bool,
    graph: Option<PathBuf>,
    trials: u64,
    seed: u64,
    p_min: usize,
    p_max: usize,
    extra_edges: &str,
    loops: &str,
    show_trial: Option<u64>,
    guard: EnumGuard,
) -> anyhow::Result<ExitCode> {
    let report: SuiteReport = match &graph {
        Some(path) => {
            let (g, _) = load_graph(path)?;
            lemma_suite(&g, guard)?
        }
        None => {
            let params = GenParams {
                p_range: (p_min, p_max),
                extra_edges: parse_range(extra_edges).context("parsing --extra-edges")?,
                loop_probability: parse_ratio(loops).context("parsing --loops")?,
                master_seed: seed,
            };
            params.validate()?;
            if let Some(trial) = show_trial {
                let g = random_graph(&params, trial);
                println!("{}", nodal::document::canonical_string(&g));
                return Ok(ExitCode::SUCCESS);
            }
            corpus_suite(&params, trials, guard)?
        }
    };

    let mut human = match (&graph, &report.params) {
        (Some(path), _) => format!("suite on {}\n", path.display()),
        (None, Some(p)) => format!(
            "suite on seeded ensemble: trials={} seed={} p=[{},{}] extra=[{},{}] loops={}/{}\n",
            report.trials,
            p.master_seed,
            p.p_range.0,
            p.p_range.1,
            p.extra_edges.0,
            p.extra_edges.1,
            p.loop_probability.0,
            p.loop_probability.1
        ),
        _ => String::new(),
    };
    for stats in &report.checks {
        let status = if stats.violations > 0 {
            "FAIL"
        } else if stats.instances == 0 {
            "UNTESTED"
        } else {
            "pass"
        };
        human.push_str(&format!(
            "  {:45} instances={:<10} violations={:<3} {status}\n",
            stats.name, stats.instances, stats.violations
        ));
    }
    human.push_str(&format!(
        "literal-family disagreements (reported only): {}\n",
        report.literal_family_disagreements
    ));
    let clean = report.all_clean();
    human.push_str(&format!(
        "result: {}\n",
        if clean { "CLEAN" } else { "COUNTEREXAMPLES FOUND" }
    ));
    for stats in &report.checks {
        if let Some(ce) = &stats.first_counterexample {
            human.push_str(&format!(
                "counterexample for {}: trial={:?} {} graph={}\n",
                stats.name, ce.trial, ce.detail, ce.graph
            ));
        }
    }

    emit(json, "verify", &report, &human);
    Ok(if clean {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}
