//! Exact `ex(n, C)` by isomorph-free generation.
//!
//! Graphs on a fixed vertex set `0..n` are grown one edge at a time by canonical augmentation:
//! from a parent, one candidate triple is tried per orbit of the parent's automorphism group,
//! and a child is kept only if the added edge lies in the orbit of the child's canonical last
//! edge (the edge mapped to the largest triple of its canonical form). Every isomorphism class
//! of linear 3-graphs on `n` vertices is then visited exactly once.
//!
//! Pruning:
//! * pair reuse: only triples with three uncovered pairs are candidates;
//! * crowns: a child containing a crown is dropped, checked only on bases the new edge touches;
//! * capacity: a vertex with `d` edges has `n − 1 − 2d` free pairs and can gain at most half of
//!   them as new edges, so at most `⌊Σ_v ⌊(n − 1 − 2d(v))/2⌋ / 3⌋` edges can still be added.
//!   A node is cut when its edge count plus this bound is below the incumbent. The cut is strict
//!   so that every extremal class is still reached.

use std::collections::BTreeSet;
use std::sync::atomic::{AtomicBool, AtomicU64, AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::canon::{Canonical, CanonicalForm, UnionFind};
use crate::crown::{crown_oracle, crown_through_edge};
use crate::generators::lower_bound_construction;
use crate::graph::{validate_linear, EdgeId, LinearThreeGraph, Triple};

/// Knobs for [`exact_ex`] and [`enumerate_linear_graphs`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchOptions {
    /// Worker threads; `None` uses the rayon default.
    pub threads: Option<usize>,
    pub max_nodes: Option<u64>,
    pub max_duration: Option<Duration>,
    /// Drop graphs that contain a crown.
    pub crown_filter: bool,
    /// Capacity-bound pruning against the incumbent.
    pub bound_pruning: bool,
    /// Start the incumbent at the hub construction's edge count.
    pub seed_incumbent: bool,
    /// Stop expanding once the incumbent reaches the largest `v` with `3v < 5n`. Assumes the
    /// upper bound under test, so results are not evidence for it; exploratory runs only.
    pub unsafe_5n3_prune: bool,
    pub witness_cap: usize,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            threads: None,
            max_nodes: None,
            max_duration: None,
            crown_filter: true,
            bound_pruning: true,
            seed_incumbent: true,
            unsafe_5n3_prune: false,
            witness_cap: 10,
        }
    }
}

/// Search settings recorded in a certificate. Budgets are included because they decide
/// whether the run could finish; thread count is not, since it does not affect results.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchParameters {
    pub crown_filter: bool,
    pub bound_pruning: bool,
    pub seed_incumbent: bool,
    pub unsafe_5n3_prune: bool,
    pub witness_cap: usize,
    pub max_nodes: Option<u64>,
    pub max_seconds: Option<f64>,
}

/// Result of an exact search.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExtremalCertificate {
    pub n: usize,
    /// `ex(n, C)` when `exhaustive`, otherwise the best edge count found.
    pub value: usize,
    /// Canonical forms of extremal graphs, ascending, at most `witness_cap`.
    pub witnesses: Vec<CanonicalForm>,
    pub nodes_explored: u64,
    pub exhaustive: bool,
    pub elapsed_ms: u128,
    pub parameters: SearchParameters,
}

impl ExtremalCertificate {
    /// Re-checks every witness independently of the search: linear, `n` vertices, `value`
    /// edges, and no crown according to the 4-subset oracle.
    pub fn revalidate(&self) -> Result<(), String> {
        for (i, w) in self.witnesses.iter().enumerate() {
            let h = validate_linear(&w.edges, w.n).map_err(|e| format!("witness {i}: {e}"))?;
            if h.n() != self.n || h.edge_count() != self.value {
                return Err(format!("witness {i}: wrong size"));
            }
            if self.parameters.crown_filter && crown_oracle(&h).is_some() {
                return Err(format!("witness {i}: contains a crown"));
            }
        }
        Ok(())
    }

    pub fn witness_graphs(&self) -> Vec<LinearThreeGraph> {
        self.witnesses
            .iter()
            .map(|w| validate_linear(&w.edges, w.n).expect("witnesses are linear"))
            .collect()
    }
}

/// Upper bound on the number of edges that can still be added to `g`:
/// `⌊ Σ_v ⌊(n − 1 − 2d(v)) / 2⌋ / 3 ⌋`. Vertex `v` has `n − 1 − 2d(v)` unused pairs and every new
/// edge through `v` uses two of them; every new edge is counted at its three vertices.
pub fn capacity_bound(g: &LinearThreeGraph) -> usize {
    let n = g.n();
    let half_free: usize = g.degrees().iter().map(|&d| (n - 1 - 2 * d) / 2).sum();
    half_free / 3
}

struct Node {
    graph: LinearThreeGraph,
    canon: Canonical,
}

struct WitnessPool {
    value: usize,
    forms: BTreeSet<Vec<Triple>>,
}

type Visitor<'a> = dyn Fn(&LinearThreeGraph, &Canonical) + Sync + 'a;

struct Engine<'a> {
    n: usize,
    opts: &'a SearchOptions,
    triples: Vec<Triple>,
    triple_index: Vec<u32>,
    incumbent: AtomicUsize,
    pool: Mutex<WitnessPool>,
    nodes: AtomicU64,
    aborted: AtomicBool,
    start: Instant,
    visitor: Option<&'a Visitor<'a>>,
}

impl<'a> Engine<'a> {
    fn new(n: usize, opts: &'a SearchOptions, visitor: Option<&'a Visitor<'a>>) -> Self {
        let mut triples = Vec::new();
        let mut triple_index = vec![u32::MAX; n * n * n];
        for a in 0..n {
            for b in a + 1..n {
                for c in b + 1..n {
                    triple_index[(a * n + b) * n + c] = triples.len() as u32;
                    triples.push([a, b, c]);
                }
            }
        }
        Engine {
            n,
            opts,
            triples,
            triple_index,
            incumbent: AtomicUsize::new(0),
            pool: Mutex::new(WitnessPool {
                value: 0,
                forms: BTreeSet::new(),
            }),
            nodes: AtomicU64::new(0),
            aborted: AtomicBool::new(false),
            start: Instant::now(),
            visitor,
        }
    }

    fn index_of(&self, t: &Triple) -> usize {
        let mut s = *t;
        s.sort_unstable();
        self.triple_index[(s[0] * self.n + s[1]) * self.n + s[2]] as usize
    }

    fn over_budget(&self, count: u64) -> bool {
        if let Some(max) = self.opts.max_nodes {
            if count > max {
                return true;
            }
        }
        if let Some(limit) = self.opts.max_duration {
            if count.is_multiple_of(64) && self.start.elapsed() > limit {
                return true;
            }
        }
        false
    }

    fn record(&self, node: &Node) {
        let m = node.graph.edge_count();
        if m < self.incumbent.load(Ordering::Relaxed) {
            return;
        }
        let mut pool = self.pool.lock().expect("witness pool poisoned");
        if m > pool.value {
            pool.value = m;
            pool.forms.clear();
        }
        if m == pool.value {
            pool.forms.insert(node.canon.edges.clone());
            while pool.forms.len() > self.opts.witness_cap {
                pool.forms.pop_last();
            }
        }
        self.incumbent.fetch_max(m, Ordering::Relaxed);
    }

    /// Largest `v` with `3v < 5n`.
    fn conjectured_cap(&self) -> usize {
        (5 * self.n - 1) / 3
    }

    /// One representative (least triple) per automorphism orbit of the addable triples.
    fn candidate_orbits(&self, node: &Node) -> Vec<Triple> {
        let g = &node.graph;
        let free: Vec<usize> = (0..self.triples.len())
            .filter(|&i| g.can_add(&self.triples[i]))
            .collect();
        if node.canon.generators.is_empty() {
            return free.iter().map(|&i| self.triples[i]).collect();
        }
        let mut uf = UnionFind::new(self.triples.len());
        for gen in &node.canon.generators {
            for &i in &free {
                let t = self.triples[i];
                let image = [gen[t[0]], gen[t[1]], gen[t[2]]];
                uf.union(i, self.index_of(&image));
            }
        }
        free.iter()
            .filter(|&&i| uf.find(i) == i)
            .map(|&i| self.triples[i])
            .collect()
    }

    /// Canonical-augmentation acceptance: `added` must share an orbit with the edge that the
    /// canonical labeling sends to the largest canonical triple.
    fn accepts(child: &LinearThreeGraph, canon: &Canonical, added: EdgeId) -> bool {
        let n = child.n();
        let mut inverse = vec![0; n];
        for (v, &l) in canon.labeling.iter().enumerate() {
            inverse[l] = v;
        }
        let last = canon.edges.last().expect("child has an edge");
        let mut t = [inverse[last[0]], inverse[last[1]], inverse[last[2]]];
        t.sort_unstable();
        let last_id = child.edge_index_of(&t).expect("canonical edge exists");
        if last_id == added {
            return true;
        }
        let mut uf = UnionFind::new(child.edge_count());
        for gen in &canon.generators {
            for (i, e) in child.edges().iter().enumerate() {
                let image = child
                    .edge_at_pair(gen[e[0]], gen[e[1]])
                    .expect("automorphisms map edges to edges");
                uf.union(i, image.0);
            }
        }
        uf.find(added.0) == uf.find(last_id.0)
    }

    fn children(&self, node: &Node) -> Vec<Node> {
        let mut out = Vec::new();
        for t in self.candidate_orbits(node) {
            let child = node.graph.with_edge_unchecked(t);
            let id = child.edge_index_of(&t).expect("just added");
            if self.opts.crown_filter && crown_through_edge(&child, id).is_some() {
                continue;
            }
            let canon = child.canonical();
            if Self::accepts(&child, &canon, id) {
                out.push(Node {
                    graph: child,
                    canon,
                });
            }
        }
        out
    }

    fn explore(&self, node: Node) {
        if self.aborted.load(Ordering::Relaxed) {
            return;
        }
        let count = self.nodes.fetch_add(1, Ordering::Relaxed) + 1;
        if self.over_budget(count) {
            self.aborted.store(true, Ordering::Relaxed);
            return;
        }
        if let Some(visit) = self.visitor {
            visit(&node.graph, &node.canon);
        }
        self.record(&node);
        let incumbent = self.incumbent.load(Ordering::Relaxed);
        if self.opts.bound_pruning
            && node.graph.edge_count() + capacity_bound(&node.graph) < incumbent
        {
            return;
        }
        if self.opts.unsafe_5n3_prune
            && self.opts.crown_filter
            && incumbent >= self.conjectured_cap()
        {
            return;
        }
        let kids = self.children(&node);
        drop(node);
        kids.into_par_iter().for_each(|k| self.explore(k));
    }

    fn run(&self) {
        let root = LinearThreeGraph::empty(self.n).expect("n >= 1");
        let canon = root.canonical();
        self.explore(Node { graph: root, canon });
    }
}

/// Runs `f` on a dedicated pool of `threads` workers, or on the global pool for `None`.
pub fn with_threads<R: Send>(threads: Option<usize>, f: impl FnOnce() -> R + Send) -> R {
    match threads {
        Some(t) => rayon::ThreadPoolBuilder::new()
            .num_threads(t.max(1))
            .build()
            .expect("thread pool")
            .install(f),
        None => f(),
    }
}

/// Computes `ex(n, C)` exactly unless a budget runs out.
pub fn exact_ex(n: usize, opts: &SearchOptions) -> ExtremalCertificate {
    assert!(n >= 3, "exact_ex needs n >= 3");
    let engine = Engine::new(n, opts, None);
    let seed = if opts.seed_incumbent && opts.crown_filter {
        lower_bound_construction(n).ok()
    } else {
        None
    };
    if let Some(h) = &seed {
        engine.incumbent.store(h.edge_count(), Ordering::Relaxed);
    }
    with_threads(opts.threads, || engine.run());

    let pool = engine.pool.into_inner().expect("witness pool poisoned");
    let mut value = pool.value;
    let mut forms: Vec<CanonicalForm> = pool
        .forms
        .into_iter()
        .map(|edges| CanonicalForm { n, edges })
        .collect();
    if let Some(h) = seed {
        if h.edge_count() > value {
            value = h.edge_count();
            forms = vec![h.canonical().form()];
        }
    }
    ExtremalCertificate {
        n,
        value,
        witnesses: forms,
        nodes_explored: engine.nodes.load(Ordering::Relaxed),
        exhaustive: !engine.aborted.load(Ordering::Relaxed),
        elapsed_ms: engine.start.elapsed().as_millis(),
        parameters: SearchParameters {
            crown_filter: opts.crown_filter,
            bound_pruning: opts.bound_pruning,
            seed_incumbent: opts.seed_incumbent,
            unsafe_5n3_prune: opts.unsafe_5n3_prune,
            witness_cap: opts.witness_cap,
            max_nodes: opts.max_nodes,
            max_seconds: opts.max_duration.map(|d| d.as_secs_f64()),
        },
    }
}

/// Every isomorphism class of linear 3-graphs on `n` vertices (crown-free ones only when
/// `crown_free_only`), as canonical forms in ascending order.
pub fn enumerate_linear_graphs(
    n: usize,
    crown_free_only: bool,
    threads: Option<usize>,
) -> Vec<CanonicalForm> {
    let opts = SearchOptions {
        threads,
        crown_filter: crown_free_only,
        bound_pruning: false,
        seed_incumbent: false,
        ..SearchOptions::default()
    };
    let found: Mutex<Vec<CanonicalForm>> = Mutex::new(Vec::new());
    let visit = |_: &LinearThreeGraph, c: &Canonical| {
        found.lock().expect("collector poisoned").push(c.form());
    };
    let engine = Engine::new(n, &opts, Some(&visit));
    with_threads(threads, || engine.run());
    let mut all = found.into_inner().expect("collector poisoned");
    all.sort();
    all
}
