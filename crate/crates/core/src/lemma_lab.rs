//! Replayable verification suites for the structural lemmas about crown-free graphs.
//!
//! Each suite returns a [`ReplayReport`]; a suite passes iff its failure list is empty. Seeded
//! suites derive one random stream per instance, so reports do not depend on thread count.

use std::collections::{BTreeMap, BTreeSet};
use std::time::Instant;

use num_rational::Ratio;
use rand::seq::SliceRandom;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::canon::{canonical_labeling, CanonicalForm};
use crate::crown::{
    crown_oracle, crown_oracle_with_base, find_crown, find_crown_with_base, find_rainbow_matching,
    greedy_crown_642, link_graph, Color, ColoredEdge, ColoredLinkGraph, CrownWitness,
};
use crate::discharging::{
    build_discharge_sequence, delta_v_bound_check, verify_discharge_trace, DegreeFunction,
    LARGE_DEGREE,
};
use crate::graph::{validate_linear, DegreeVector, EdgeId, LinearThreeGraph, Triple, Vertex};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Failure {
    pub instance: String,
    pub claim: String,
}

/// Outcome of one verification suite.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReplayReport {
    pub suite: String,
    pub seed: Option<u64>,
    pub instances: u64,
    pub failures: Vec<Failure>,
    /// Free-form numeric facts the suite established (counts, computed values).
    pub facts: BTreeMap<String, i64>,
    pub elapsed_ms: u128,
}

impl ReplayReport {
    fn new(suite: &str, seed: Option<u64>) -> Self {
        ReplayReport {
            suite: suite.to_string(),
            seed,
            instances: 0,
            failures: Vec::new(),
            facts: BTreeMap::new(),
            elapsed_ms: 0,
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    fn check(&mut self, instance: &str, claim: &str, ok: bool) {
        if !ok {
            self.failures.push(Failure {
                instance: instance.to_string(),
                claim: claim.to_string(),
            });
        }
    }

    /// Text summary; one line per suite plus one per failure.
    pub fn to_text(&self) -> String {
        let mut out = format!(
            "{}: {} ({} instances, {} failures, {} ms)\n",
            self.suite,
            if self.passed() { "PASS" } else { "FAIL" },
            self.instances,
            self.failures.len(),
            self.elapsed_ms
        );
        for (k, v) in &self.facts {
            out.push_str(&format!("  {k} = {v}\n"));
        }
        for f in &self.failures {
            out.push_str(&format!("  FAILED [{}] {}\n", f.instance, f.claim));
        }
        out
    }

    /// Report without the timing field, for reproducibility comparisons.
    pub fn without_timing(&self) -> ReplayReport {
        ReplayReport {
            elapsed_ms: 0,
            ..self.clone()
        }
    }
}

fn timed(mut report: ReplayReport, start: Instant) -> ReplayReport {
    report.elapsed_ms = start.elapsed().as_millis();
    report
}

// Labels used by the fixed link graph: base a, b, c = 0, 1, 2 and v1..v8 = 3..10.
const A: Vertex = 0;
const B: Vertex = 1;
const C: Vertex = 2;

/// `v_i` for `i` in `1..=8`.
pub const fn v(i: usize) -> Vertex {
    2 + i
}

/// The rainbow-matching-free link graph of a `(5,5,5)` edge.
///
/// Two components on `v1..v4` and `v5..v8`; in each, colors A and B form an alternating
/// 4-cycle and color C takes its two diagonals. Labels are fixed so that `{v1,v4}` and
/// `{v6,v7}` are A-edges and `{v2,v4}` is a C-edge.
pub fn canonical_link_graph() -> ColoredLinkGraph {
    let e = |i: usize, j: usize, c: Color| ColoredEdge::new(v(i), v(j), c);
    ColoredLinkGraph::from_parts(
        [A, B, C],
        vec![
            e(1, 4, Color::A),
            e(2, 3, Color::A),
            e(1, 2, Color::B),
            e(3, 4, Color::B),
            e(1, 3, Color::C),
            e(2, 4, Color::C),
            e(6, 7, Color::A),
            e(5, 8, Color::A),
            e(5, 6, Color::B),
            e(7, 8, Color::B),
            e(5, 7, Color::C),
            e(6, 8, Color::C),
        ],
    )
    .expect("fixed link graph is well formed")
}

/// Structure of the union of the A and B classes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum AbShape {
    EightCycle,
    TwoFourCycles,
    Other,
}

/// Output of [`enumerate_555_link_graphs`].
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Link555Enumeration {
    /// One representative per isomorphism class (colors may be permuted).
    pub classes: Vec<ColoredLinkGraph>,
    pub class_forms: Vec<CanonicalForm>,
    /// A/B configurations up to isomorphism, before any C edge.
    pub ab_classes: usize,
    pub ab_by_shape: BTreeMap<String, usize>,
    /// A/B classes of each shape that admit at least one rainbow-free completion.
    pub surviving_by_shape: BTreeMap<String, usize>,
    /// Complete rainbow-free colorings found (before isomorphism reduction).
    pub completions: u64,
}

type Matching = [(usize, usize); 4];

const A_MATCHING: Matching = [(0, 1), (2, 3), (4, 5), (6, 7)];
const MAX_LINK_VERTICES: usize = 24;

fn pairs_meet(p: (usize, usize), q: (usize, usize)) -> bool {
    p.0 == q.0 || p.0 == q.1 || p.1 == q.0 || p.1 == q.1
}

/// All 4-edge matchings on `0..pool` avoiding `forbidden`, whose vertices beyond `old` form a
/// prefix `old..old+f`. Pairs within a matching are ascending.
fn matchings_with_fresh_prefix(
    old: usize,
    pool: usize,
    forbidden: &BTreeSet<(usize, usize)>,
    allowed: &dyn Fn((usize, usize)) -> bool,
) -> Vec<[(usize, usize); 4]> {
    let mut pairs = Vec::new();
    for u in 0..pool {
        for w in u + 1..pool {
            if !forbidden.contains(&(u, w)) && allowed((u, w)) {
                pairs.push((u, w));
            }
        }
    }
    let mut out = Vec::new();
    let mut current: Vec<(usize, usize)> = Vec::new();
    fn rec(
        pairs: &[(usize, usize)],
        start: usize,
        current: &mut Vec<(usize, usize)>,
        old: usize,
        out: &mut Vec<[(usize, usize); 4]>,
    ) {
        if current.len() == 4 {
            let fresh: BTreeSet<usize> = current
                .iter()
                .flat_map(|&(u, w)| [u, w])
                .filter(|&x| x >= old)
                .collect();
            let prefix = fresh.iter().enumerate().all(|(i, &x)| x == old + i);
            if prefix {
                out.push([current[0], current[1], current[2], current[3]]);
            }
            return;
        }
        for i in start..pairs.len() {
            let p = pairs[i];
            if current.iter().all(|&q| !pairs_meet(p, q)) {
                current.push(p);
                rec(pairs, i + 1, current, old, out);
                current.pop();
            }
        }
    }
    rec(&pairs, 0, &mut current, old, &mut out);
    out
}

/// Canonical form of colored pairs on hubs `0..colors` plus vertices; hubs may be permuted.
fn colored_form(colors: usize, classes: &[&[(usize, usize)]]) -> (CanonicalForm, Vec<usize>) {
    let verts: BTreeSet<usize> = classes
        .iter()
        .flat_map(|c| c.iter().flat_map(|&(u, w)| [u, w]))
        .collect();
    let verts: Vec<usize> = verts.into_iter().collect();
    let idx = |x: usize| colors + verts.binary_search(&x).unwrap();
    let mut edges: Vec<Triple> = Vec::new();
    for (ci, class) in classes.iter().enumerate() {
        for &(u, w) in class.iter() {
            edges.push([ci, idx(u), idx(w)]);
        }
    }
    let n = colors + verts.len();
    let mut col = vec![1u32; n];
    col[..colors].fill(0);
    let c = canonical_labeling(n, &edges, Some(&col));
    (c.form(), verts)
}

fn ab_shape(b: &[(usize, usize); 4]) -> AbShape {
    if b.iter().any(|&(u, w)| u >= 8 || w >= 8) {
        return AbShape::Other;
    }
    // Union of two perfect matchings on 8 vertices: measure the cycle through vertex 0.
    let partner = |m: &[(usize, usize)], x: usize| {
        m.iter()
            .find_map(|&(u, w)| {
                if u == x {
                    Some(w)
                } else if w == x {
                    Some(u)
                } else {
                    None
                }
            })
            .unwrap()
    };
    let mut len = 0;
    let mut x = 0;
    loop {
        x = partner(&A_MATCHING, x);
        x = partner(b, x);
        len += 2;
        if x == 0 {
            break;
        }
    }
    match len {
        8 => AbShape::EightCycle,
        4 => AbShape::TwoFourCycles,
        _ => AbShape::Other,
    }
}

/// Exhaustively enumerates the link graphs a `(5,5,5)` edge can have in a crown-free linear
/// 3-graph: three color classes, each a matching of four pairs, all twelve pairs distinct, and
/// no rainbow matching. Returns the isomorphism classes with colors allowed to permute.
///
/// The A class is fixed to `{0,1},{2,3},{4,5},{6,7}` (every 4-matching looks alike). B ranges
/// over all 4-matchings on the A vertices plus fresh ones, reduced up to isomorphism. For each
/// A/B class, C is built from the pairs that complete no rainbow matching on their own, since a
/// rainbow matching uses exactly one C edge.
pub fn enumerate_555_link_graphs() -> Link555Enumeration {
    let a_set: BTreeSet<(usize, usize)> = A_MATCHING.iter().copied().collect();
    let b_all = matchings_with_fresh_prefix(8, 16, &a_set, &|_| true);

    let mut ab_reps: BTreeMap<CanonicalForm, [(usize, usize); 4]> = BTreeMap::new();
    for b in b_all {
        let (form, _) = colored_form(2, &[&A_MATCHING, &b]);
        ab_reps.entry(form).or_insert(b);
    }

    let mut ab_by_shape: BTreeMap<String, usize> = BTreeMap::new();
    let mut surviving_by_shape: BTreeMap<String, usize> = BTreeMap::new();
    let ab_list: Vec<[(usize, usize); 4]> = ab_reps.values().copied().collect();

    let per_ab: Vec<(AbShape, Vec<Matching>)> = ab_list
        .par_iter()
        .map(|b| {
            let shape = ab_shape(b);
            let used: BTreeSet<usize> = A_MATCHING
                .iter()
                .chain(b.iter())
                .flat_map(|&(u, w)| [u, w])
                .collect();
            let old = used.iter().max().map_or(0, |m| m + 1);
            let mut forbidden = a_set.clone();
            forbidden.extend(b.iter().copied());
            let a_b_disjoint: Vec<((usize, usize), (usize, usize))> = A_MATCHING
                .iter()
                .flat_map(|&p| b.iter().map(move |&q| (p, q)))
                .filter(|&(p, q)| !pairs_meet(p, q))
                .collect();
            let safe = |c: (usize, usize)| {
                a_b_disjoint
                    .iter()
                    .all(|&(p, q)| pairs_meet(c, p) || pairs_meet(c, q))
            };
            let pool = (old + 8).min(MAX_LINK_VERTICES);
            let cs = matchings_with_fresh_prefix(old, pool, &forbidden, &safe);
            (shape, cs)
        })
        .collect();

    let mut finals: BTreeMap<CanonicalForm, ColoredLinkGraph> = BTreeMap::new();
    let mut completions = 0u64;
    for (b, (shape, cs)) in ab_list.iter().zip(per_ab) {
        *ab_by_shape.entry(format!("{shape:?}")).or_default() += 1;
        let mut survived = false;
        for c in cs {
            let base = [100, 101, 102];
            let shift = |(u, w): (usize, usize), color| ColoredEdge::new(u + 3, w + 3, color);
            let edges: Vec<ColoredEdge> = A_MATCHING
                .iter()
                .map(|&p| shift(p, Color::A))
                .chain(b.iter().map(|&p| shift(p, Color::B)))
                .chain(c.iter().map(|&p| shift(p, Color::C)))
                .collect();
            let mut g = ColoredLinkGraph::from_parts(base, edges)
                .expect("enumerated classes are matchings with distinct pairs");
            if find_rainbow_matching(&g).is_some() {
                continue;
            }
            completions += 1;
            survived = true;
            g.base = [0, 1, 2];
            finals.entry(g.canonical_form()).or_insert(g);
        }
        if survived {
            *surviving_by_shape.entry(format!("{shape:?}")).or_default() += 1;
        }
    }
    Link555Enumeration {
        class_forms: finals.keys().cloned().collect(),
        classes: finals.into_values().collect(),
        ab_classes: ab_reps.len(),
        ab_by_shape,
        surviving_by_shape,
        completions,
    }
}

/// The 13-edge graph `H0`: the base `{a,b,c}` plus every lifted edge of the fixed link graph.
pub fn extension_base_graph() -> LinearThreeGraph {
    let g = canonical_link_graph();
    let mut edges = g.lifted_edges();
    edges.push([A, B, C]);
    validate_linear(&edges, 11).expect("H0 is linear")
}

/// Replays the crown-extension argument on `H0` and its two one-edge extensions.
pub fn replay_crown_extension() -> ReplayReport {
    let start = Instant::now();
    let mut r = ReplayReport::new("replay3", None);
    let h0 = extension_base_graph();
    r.instances += 1;
    let e = h0.edge_index_of(&[A, B, C]).expect("base present");
    r.check("H0", "13 edges", h0.edge_count() == 13);
    r.check(
        "H0",
        "D(e) = (5,5,5)",
        h0.degree_vector(e).ok() == Some(DegreeVector::new(5, 5, 5)),
    );
    r.check(
        "H0",
        "a, b, c have degree 5 and v1..v8 degree 3",
        (0..3).all(|x| h0.degree(x) == 5) && (1..=8).all(|i| h0.degree(v(i)) == 3),
    );
    r.check(
        "H0",
        "crown-free by the 4-subset oracle",
        crown_oracle(&h0).is_none(),
    );
    r.check("H0", "crown-free by link graphs", find_crown(&h0).is_none());
    let lg = link_graph(&h0, e).expect("valid edge");
    r.check(
        "H0",
        "G(e) is the fixed link graph",
        lg.canonical_form() == canonical_link_graph().canonical_form(),
    );
    let x: BTreeSet<Vertex> = (0..11).collect();
    let cover = h0.edges_covering(&x).expect("in range").len();
    r.facts.insert("E_X".into(), cover as i64);
    r.check("H0", "|E_X| = 13", cover == 13);
    r.check("H0", "|E_X| = |E_e|", cover == 1 + lg.edges.len());
    r.check("H0", "3 |E_X| < 5 |X|", 3 * cover < 5 * x.len());

    for (label, w1) in [("w1 = v5", Some(v(5))), ("w1 fresh", None)] {
        r.instances += 1;
        let (n, w1, w2) = match w1 {
            Some(w) => (12, w, 11),
            None => (13, 11, 12),
        };
        let f = [v(1), w1, w2];
        let mut edges = h0.edges().to_vec();
        edges.push(f);
        let h = match validate_linear(&edges, n) {
            Ok(h) => h,
            Err(err) => {
                r.check(label, &format!("extension is linear ({err})"), false);
                continue;
            }
        };
        r.check(label, "find_crown finds a crown", find_crown(&h).is_some());
        r.check(
            label,
            "the oracle finds a crown",
            crown_oracle(&h).is_some(),
        );
        let id = |t: Triple| h.edge_index_of(&t);
        let stated = match (
            id([v(1), v(4), A]),
            id(f),
            id([v(2), v(4), C]),
            id([v(6), v(7), A]),
        ) {
            (Some(base), Some(j1), Some(j2), Some(j3)) => {
                let mut w = CrownWitness {
                    base,
                    jewels: [j1, j2, j3],
                };
                // list jewels in base-vertex order
                let bt = h.edges()[base.0];
                w.jewels.sort_by_key(|j| {
                    bt.iter()
                        .position(|x| h.edges()[j.0].contains(x))
                        .unwrap_or(3)
                });
                w.validate(&h).is_ok()
            }
            _ => false,
        };
        r.check(
            label,
            "base {v1,v4,a} with jewels f, {v2,v4,c}, {v6,v7,a} is a crown",
            stated,
        );
    }
    timed(r, start)
}

/// Parameters of a seeded planted-(6,4,2) corpus.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorpusSpec {
    pub seed: u64,
    pub count: u64,
    pub min_n: usize,
    pub max_n: usize,
}

impl CorpusSpec {
    pub fn new(seed: u64, count: u64) -> Self {
        CorpusSpec {
            seed,
            count,
            min_n: 13,
            max_n: 30,
        }
    }
}

fn instance_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// A linear graph on `n >= 13` vertices with a planted edge whose degree vector dominates
/// `(6,4,2)`, plus random linear noise. Returns the graph and the planted edge.
pub fn planted_642_instance(
    seed: u64,
    index: u64,
    min_n: usize,
    max_n: usize,
) -> (LinearThreeGraph, EdgeId) {
    let mut rng = instance_rng(seed, index);
    let lo = min_n.max(13);
    let hi = max_n.max(lo);
    'attempt: loop {
        let n = rng.gen_range(lo..=hi);
        let mut verts: Vec<Vertex> = (0..n).collect();
        verts.shuffle(&mut rng);
        let base = [verts[0], verts[1], verts[2]];
        let dx = rng.gen_range(6..=8);
        let dy = rng.gen_range(4..=dx.min(7));
        let dz = rng.gen_range(2..=dy.min(5));
        let mut g = validate_linear(&[base], n).expect("single edge");
        for (x, target) in base.iter().zip([dx, dy, dz]) {
            let mut tries = 0;
            while g.degree(*x) < target {
                tries += 1;
                if tries > 500 {
                    continue 'attempt;
                }
                let p = verts[rng.gen_range(3..n)];
                let q = verts[rng.gen_range(3..n)];
                let t = [*x, p, q];
                if p != q && g.can_add(&sorted(t)) {
                    g = g.with_edge(t).expect("checked");
                }
            }
        }
        let noise = rng.gen_range(0..=n);
        for _ in 0..noise * 4 {
            if g.edge_count() >= noise + dx + dy + dz {
                break;
            }
            let picked = rand::seq::index::sample(&mut rng, n, 3);
            let t = sorted([picked.index(0), picked.index(1), picked.index(2)]);
            if g.can_add(&t) {
                g = g.with_edge(t).expect("checked");
            }
        }
        let g = validate_linear(g.edges(), n).expect("re-validation");
        let e = g.edge_index_of(&base).expect("planted edge");
        return (g, e);
    }
}

fn sorted(mut t: Triple) -> Triple {
    t.sort_unstable();
    t
}

/// Every planted `(6,4,2)`-dominating edge is the base of a crown, found by the link-graph
/// route, by the greedy construction, and by the per-base oracle.
pub fn verify_lemma1_on_corpus(spec: CorpusSpec) -> ReplayReport {
    let start = Instant::now();
    let mut r = ReplayReport::new("lemma1", Some(spec.seed));
    let failures: Vec<Vec<Failure>> = (0..spec.count)
        .into_par_iter()
        .map(|i| {
            let (h, e) = planted_642_instance(spec.seed, i, spec.min_n, spec.max_n);
            let name = format!("instance {i}");
            let mut local = ReplayReport::new("", None);
            let dv = h.degree_vector(e).expect("planted edge");
            local.check(
                &name,
                "planted edge dominates (6,4,2)",
                dv.dominates(&DegreeVector::new(6, 4, 2)),
            );
            let by_link = find_crown_with_base(&h, e);
            local.check(
                &name,
                "link graph has a rainbow matching",
                by_link.is_some_and(|w| w.validate(&h).is_ok()),
            );
            let greedy = greedy_crown_642(&h, e);
            local.check(
                &name,
                "greedy witness validates",
                greedy.is_ok_and(|w| w.validate(&h).is_ok()),
            );
            local.check(
                &name,
                "oracle finds a crown on this base",
                crown_oracle_with_base(&h, e).is_some(),
            );
            local.check(
                &name,
                "linearity edge bound",
                6 * h.edge_count() <= h.n() * (h.n() - 1),
            );
            local.failures
        })
        .collect();
    r.instances = spec.count;
    r.failures = failures.into_iter().flatten().collect();
    timed(r, start)
}

/// Seeded degree function with `n` in `3..=40`, sum `5n + l`, minimum 2, and often one or more
/// planted degrees in `9..=15`.
pub fn random_degree_function(seed: u64, index: u64) -> DegreeFunction {
    let mut rng = instance_rng(seed, index);
    loop {
        let n = rng.gen_range(3..=40);
        let mut d = vec![5usize; n];
        let planted = rng.gen_range(0..=3).min(n / 4);
        for p in 0..planted {
            let target = rng.gen_range(9..=15);
            let mut guard = 0;
            while d[p] < target && guard < 10_000 {
                guard += 1;
                let u = rng.gen_range(planted..n);
                if d[u] > 2 {
                    d[u] -= 1;
                    d[p] += 1;
                }
            }
        }
        for _ in 0..rng.gen_range(0..3 * n) {
            let u = rng.gen_range(0..n);
            let w = rng.gen_range(0..n);
            if u != w && d[u] > 2 && d[w] < 15 {
                d[u] -= 1;
                d[w] += 1;
            }
        }
        let l = rng.gen_range(0..=2);
        for _ in 0..l {
            let u = rng.gen_range(0..n);
            d[u] += 1;
        }
        d.shuffle(&mut rng);
        let df = DegreeFunction::new(d);
        if build_discharge_sequence(&df).is_ok() {
            return df;
        }
    }
}

/// Builds and verifies traces for seeded degree functions, including the `Δ_v` bound for
/// every vertex of final degree at least 9.
pub fn verify_discharging_on_corpus(seed: u64, count: u64) -> ReplayReport {
    let start = Instant::now();
    let mut r = ReplayReport::new("discharge", Some(seed));
    let results: Vec<(Vec<Failure>, usize)> = (0..count)
        .into_par_iter()
        .map(|i| {
            let d = random_degree_function(seed, i);
            let name = format!("instance {i} d={:?}", d.values());
            let mut local = ReplayReport::new("", None);
            let mut large = 0;
            match build_discharge_sequence(&d) {
                Err(e) => local.check(&name, &format!("trace builds ({e})"), false),
                Ok(t) => {
                    let ver = verify_discharge_trace(&t, &d);
                    local.check(
                        &name,
                        &format!("trace verifies {:?}", ver.violations),
                        ver.ok,
                    );
                    local.check(&name, "every Δ_i > 0", t.delta.iter().all(|&x| x > 0));
                    local.check(
                        &name,
                        "T_k = Σ d²",
                        t.t.last().copied() == Some(d.sum_of_squares()),
                    );
                    for (vtx, &m) in d.values().iter().enumerate() {
                        if m >= LARGE_DEGREE {
                            large += 1;
                            match delta_v_bound_check(&t, vtx, m) {
                                Ok(c) => {
                                    local.check(
                                        &name,
                                        &format!("Δ_v ≥ m²−9m+14 at {vtx}"),
                                        c.holds,
                                    );
                                    local.check(
                                        &name,
                                        &format!("h(i) ≤ 9 on I_v at {vtx}"),
                                        c.h_within_nine,
                                    );
                                }
                                Err(e) => local.check(&name, &e.to_string(), false),
                            }
                        }
                    }
                }
            }
            (local.failures, large)
        })
        .collect();
    r.instances = count;
    let mut large_total = 0;
    for (f, l) in results {
        r.failures.extend(f);
        large_total += l;
    }
    r.facts
        .insert("large_vertices_checked".into(), large_total as i64);
    timed(r, start)
}

/// Least `n` with `n(n−1)/6 ≥ 5n/3`, compared exactly in integers.
pub fn min_counterexample_order() -> u64 {
    (1u64..)
        .find(|&n| order_row(n).feasible)
        .expect("the inequality holds for large n")
}

/// The two sides of the order comparison at `n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrderRow {
    pub n: u64,
    /// Maximum edges of a linear 3-graph allowed by pair counting.
    pub max_edges: Ratio<u64>,
    /// Edges a counter-example must have.
    pub threshold: Ratio<u64>,
    pub feasible: bool,
}

pub fn order_row(n: u64) -> OrderRow {
    let max_edges = Ratio::new(n * n.saturating_sub(1), 6);
    let threshold = Ratio::new(5 * n, 3);
    OrderRow {
        n,
        max_edges,
        threshold,
        // n(n−1)/6 ≥ 5n/3  ⇔  3·n(n−1) ≥ 30·n
        feasible: 3 * n * n.saturating_sub(1) >= 30 * n,
    }
}

pub fn verify_order11() -> ReplayReport {
    let start = Instant::now();
    let mut r = ReplayReport::new("order11", None);
    let least = min_counterexample_order();
    r.instances = 1;
    r.facts
        .insert("min_counterexample_order".into(), least as i64);
    r.check("order", "least feasible n is 11", least == 11);
    let row10 = order_row(10);
    r.check(
        "n = 10",
        "15 < 50/3",
        row10.max_edges == Ratio::from_integer(15) && row10.max_edges < row10.threshold,
    );
    let row11 = order_row(11);
    r.check("n = 11", "110/6 = 55/3", row11.max_edges == row11.threshold);
    for n in 1..=200u64 {
        let row = order_row(n);
        let ratio_says = row.max_edges >= row.threshold;
        r.check(
            &format!("n = {n}"),
            "integer and rational comparisons agree",
            ratio_says == row.feasible,
        );
    }
    timed(r, start)
}

pub fn verify_links555() -> ReplayReport {
    let start = Instant::now();
    let mut r = ReplayReport::new("links555", None);
    let g = canonical_link_graph();
    r.check("G", "class sizes 4/4/4", g.class_sizes() == [4, 4, 4]);
    r.check(
        "G",
        "G has no rainbow matching",
        find_rainbow_matching(&g).is_none(),
    );
    let every_meets_two = Color::ALL.iter().all(|&ci| {
        Color::ALL.iter().filter(|&&cj| cj != ci).all(|&cj| {
            g.class(ci).all(|e| {
                g.class(cj)
                    .filter(|f| [f.u, f.v].iter().any(|x| *x == e.u || *x == e.v))
                    .count()
                    == 2
            })
        })
    });
    r.check(
        "G",
        "every edge of one color meets two edges of each other color",
        every_meets_two,
    );
    let en = enumerate_555_link_graphs();
    r.instances = en.completions;
    r.facts.insert("classes".into(), en.classes.len() as i64);
    r.facts.insert("ab_classes".into(), en.ab_classes as i64);
    for (k, v) in &en.ab_by_shape {
        r.facts.insert(format!("ab_shape_{k}"), *v as i64);
    }
    for (k, v) in &en.surviving_by_shape {
        r.facts.insert(format!("surviving_shape_{k}"), *v as i64);
    }
    r.check("enumeration", "exactly one class", en.classes.len() == 1);
    r.check(
        "enumeration",
        "the class is the fixed link graph",
        en.class_forms.first() == Some(&g.canonical_form()),
    );
    r.check(
        "enumeration",
        "no alternating 8-cycle configuration survives",
        !en.surviving_by_shape.contains_key("EightCycle"),
    );
    timed(r, start)
}

/// Suite names accepted by [`run_suite`].
pub const SUITES: [&str; 5] = ["lemma1", "links555", "replay3", "discharge", "order11"];

/// Runs one named suite (`all` runs every suite in [`SUITES`] order).
pub fn run_suite(name: &str, seed: u64, count: u64) -> Option<Vec<ReplayReport>> {
    let one = |s: &str| -> Option<ReplayReport> {
        Some(match s {
            "lemma1" => verify_lemma1_on_corpus(CorpusSpec::new(seed, count)),
            "links555" => verify_links555(),
            "replay3" => replay_crown_extension(),
            "discharge" => verify_discharging_on_corpus(seed, count),
            "order11" => verify_order11(),
            _ => return None,
        })
    };
    if name == "all" {
        SUITES.iter().map(|s| one(s)).collect()
    } else {
        one(name).map(|r| vec![r])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixed_link_graph_shape() {
        let g = canonical_link_graph();
        assert_eq!(g.class_sizes(), [4, 4, 4]);
        assert_eq!(g.vertices.len(), 8);
        assert!(find_rainbow_matching(&g).is_none());
        // the three edges used by the extension replay exist
        let has = |i, j, c| g.edges.contains(&ColoredEdge::new(v(i), v(j), c));
        assert!(has(1, 4, Color::A));
        assert!(has(2, 4, Color::C));
        assert!(has(6, 7, Color::A));
    }

    #[test]
    fn one_extra_color_edge_creates_rainbow() {
        let mut edges = canonical_link_graph().edges;
        edges.push(ColoredEdge::new(20, 21, Color::A));
        // A is no longer a 4-matching but still a matching
        let g = ColoredLinkGraph::from_parts([A, B, C], edges).unwrap();
        assert!(find_rainbow_matching(&g).is_some());
    }

    #[test]
    fn order_eleven() {
        assert_eq!(min_counterexample_order(), 11);
        assert!(!order_row(10).feasible);
        assert!(order_row(11).feasible);
        assert!(verify_order11().passed());
    }

    #[test]
    fn crown_extension_replay_passes() {
        let r = replay_crown_extension();
        assert!(r.passed(), "{}", r.to_text());
        assert_eq!(r.facts["E_X"], 13);
    }

    #[test]
    fn planted_instances_are_deterministic() {
        let a = planted_642_instance(9, 4, 13, 30);
        let b = planted_642_instance(9, 4, 13, 30);
        assert_eq!(a, b);
        let dv = a.0.degree_vector(a.1).unwrap();
        assert!(dv.dominates(&DegreeVector::new(6, 4, 2)));
    }

    #[test]
    fn small_corpora_pass() {
        assert!(verify_lemma1_on_corpus(CorpusSpec::new(1, 50)).passed());
        let r = verify_discharging_on_corpus(1, 50);
        assert!(r.passed(), "{}", r.to_text());
    }

    #[test]
    fn suite_dispatch() {
        assert!(run_suite("nope", 0, 1).is_none());
        assert_eq!(run_suite("order11", 0, 1).unwrap().len(), 1);
    }
}
