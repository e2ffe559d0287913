//! Crown detection.
//!
//! A crown is a base edge together with three pairwise disjoint jewels, each meeting the base in
//! a different vertex. For a base `e = {a, b, c}`, every other edge through a base vertex `x`
//! contributes its remaining pair to the link graph `G(e)`, colored by `x`. Crowns with base `e`
//! correspond exactly to rainbow matchings of `G(e)`: three disjoint pairs, one per color.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::canon::{canonical_labeling, CanonicalForm};
use crate::graph::{DegreeVector, EdgeId, GraphError, LinearThreeGraph, Triple, Vertex};

/// Which base vertex a link-graph edge came through: `A`, `B`, `C` for the base triple's
/// first, second and third (ascending) vertex.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Color {
    A,
    B,
    C,
}

impl Color {
    pub const ALL: [Color; 3] = [Color::A, Color::B, Color::C];

    pub fn index(self) -> usize {
        self as usize
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ColoredEdge {
    pub color: Color,
    pub u: Vertex,
    pub v: Vertex,
}

impl ColoredEdge {
    pub fn new(u: Vertex, v: Vertex, color: Color) -> Self {
        ColoredEdge {
            color,
            u: u.min(v),
            v: u.max(v),
        }
    }

    fn meets(&self, other: &ColoredEdge) -> bool {
        self.u == other.u || self.u == other.v || self.v == other.u || self.v == other.v
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CrownError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("edge {other} shares two vertices with base {base}; input is not linear")]
    CorruptedInput { base: EdgeId, other: EdgeId },
    #[error("degree vector {0} does not dominate (6,4,2)")]
    PreconditionViolated(DegreeVector),
    #[error("link graph invalid: {0}")]
    InvalidLinkGraph(String),
    #[error("greedy construction found no edge through vertex {0}")]
    GreedyStuck(Vertex),
}

/// The edge-colored link graph `G(e)` of a base edge.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColoredLinkGraph {
    pub base: Triple,
    /// Vertices covered by the colored edges, ascending.
    pub vertices: Vec<Vertex>,
    /// Sorted by color, then pair.
    pub edges: Vec<ColoredEdge>,
}

impl ColoredLinkGraph {
    /// Builds and checks a link graph from its colored edges.
    pub fn from_parts(base: Triple, edges: Vec<ColoredEdge>) -> Result<Self, CrownError> {
        let mut edges = edges;
        edges.sort_unstable();
        let vertices: BTreeSet<Vertex> = edges.iter().flat_map(|e| [e.u, e.v]).collect();
        let g = ColoredLinkGraph {
            base,
            vertices: vertices.into_iter().collect(),
            edges,
        };
        g.validate()?;
        Ok(g)
    }

    /// Each color class is a matching, pairs are distinct, no edge touches the base.
    pub fn validate(&self) -> Result<(), CrownError> {
        let bad = |msg: String| Err(CrownError::InvalidLinkGraph(msg));
        let mut pairs = BTreeSet::new();
        for e in &self.edges {
            if e.u == e.v {
                return bad(format!("loop at {}", e.u));
            }
            if self.base.contains(&e.u) || self.base.contains(&e.v) {
                return bad(format!("edge {{{}, {}}} touches the base", e.u, e.v));
            }
            if !pairs.insert((e.u, e.v)) {
                return bad(format!("pair {{{}, {}}} appears twice", e.u, e.v));
            }
        }
        for c in Color::ALL {
            let class: Vec<&ColoredEdge> = self.class(c).collect();
            for (i, e) in class.iter().enumerate() {
                if class[i + 1..].iter().any(|f| e.meets(f)) {
                    return bad(format!("color {c:?} is not a matching"));
                }
            }
        }
        Ok(())
    }

    pub fn class(&self, color: Color) -> impl Iterator<Item = &ColoredEdge> {
        self.edges.iter().filter(move |e| e.color == color)
    }

    pub fn class_sizes(&self) -> [usize; 3] {
        Color::ALL.map(|c| self.class(c).count())
    }

    /// The base vertex a color stands for.
    pub fn hub(&self, color: Color) -> Vertex {
        self.base[color.index()]
    }

    /// Recovers the 3-graph edges `{x, u, v}` the link graph was read from (excluding the base).
    pub fn lifted_edges(&self) -> Vec<Triple> {
        self.edges
            .iter()
            .map(|e| {
                let mut t = [self.hub(e.color), e.u, e.v];
                t.sort_unstable();
                t
            })
            .collect()
    }

    /// Canonical form up to vertex relabeling and permutation of the three colors.
    ///
    /// The link graph is encoded as the 3-graph of its lifted edges on hubs `0..3` plus the
    /// link vertices, with the hubs colored apart from the rest.
    pub fn canonical_form(&self) -> CanonicalForm {
        let n = 3 + self.vertices.len();
        let index = |v: Vertex| 3 + self.vertices.binary_search(&v).unwrap();
        let edges: Vec<Triple> = self
            .edges
            .iter()
            .map(|e| [e.color.index(), index(e.u), index(e.v)])
            .collect();
        let mut colors = vec![1u32; n];
        colors[..3].fill(0);
        canonical_labeling(n, &edges, Some(&colors)).form()
    }

    /// Graphviz rendering; colors appear as the `color` attribute and label.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("graph link {\n");
        let _ = writeln!(
            out,
            "  label=\"base {{{}, {}, {}}}\";",
            self.base[0], self.base[1], self.base[2]
        );
        for v in &self.vertices {
            let _ = writeln!(out, "  {v};");
        }
        for e in &self.edges {
            let dot_color = match e.color {
                Color::A => "red",
                Color::B => "blue",
                Color::C => "darkgreen",
            };
            let _ = writeln!(
                out,
                "  {} -- {} [label=\"{:?}\", color={dot_color}];",
                e.u, e.v, e.color
            );
        }
        out.push_str("}\n");
        out
    }
}

/// A base edge plus three jewels, listed in the order of the base vertex each one meets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CrownWitness {
    pub base: EdgeId,
    pub jewels: [EdgeId; 3],
}

/// JSON form: `{"base":[a,b,c],"jewels":[[..],[..],[..]]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessJson {
    pub base: Triple,
    pub jewels: [Triple; 3],
}

impl CrownWitness {
    /// Checks the crown pattern against `h` using only the edge triples.
    pub fn validate(&self, h: &LinearThreeGraph) -> Result<(), String> {
        let base = h.edge(self.base).map_err(|e| e.to_string())?;
        let mut jewels = [[0; 3]; 3];
        for (slot, id) in jewels.iter_mut().zip(self.jewels) {
            *slot = h.edge(id).map_err(|e| e.to_string())?;
        }
        let ids: BTreeSet<EdgeId> = std::iter::once(self.base).chain(self.jewels).collect();
        if ids.len() != 4 {
            return Err("witness edges are not distinct".into());
        }
        for i in 0..3 {
            for j in i + 1..3 {
                if shared(&jewels[i], &jewels[j]) != 0 {
                    return Err(format!("jewels {i} and {j} intersect"));
                }
            }
        }
        let mut hit = BTreeSet::<Vertex>::new();
        for (i, jewel) in jewels.iter().enumerate() {
            if shared(jewel, &base) != 1 {
                return Err(format!(
                    "jewel {i} does not meet the base in exactly one vertex"
                ));
            }
            hit.extend(jewel.iter().copied().filter(|v| base.contains(v)));
        }
        if hit.len() != 3 {
            return Err("jewels do not meet three distinct base vertices".into());
        }
        Ok(())
    }

    pub fn to_json(&self, h: &LinearThreeGraph) -> WitnessJson {
        WitnessJson {
            base: h.edges()[self.base.0],
            jewels: self.jewels.map(|j| h.edges()[j.0]),
        }
    }
}

fn shared(a: &Triple, b: &Triple) -> usize {
    a.iter().filter(|v| b.contains(v)).count()
}

/// `G(e)` for the edge `e` of `h`.
pub fn link_graph(h: &LinearThreeGraph, e: EdgeId) -> Result<ColoredLinkGraph, CrownError> {
    let base = h.edge(e)?;
    let mut edges = Vec::new();
    for (ci, &x) in base.iter().enumerate() {
        for &f in h.edges_at(x) {
            if f == e {
                continue;
            }
            let t = h.edges()[f.0];
            let rest: Vec<Vertex> = t.iter().copied().filter(|&v| v != x).collect();
            if rest.iter().any(|v| base.contains(v)) {
                return Err(CrownError::CorruptedInput { base: e, other: f });
            }
            edges.push(ColoredEdge::new(rest[0], rest[1], Color::ALL[ci]));
        }
    }
    edges.sort_unstable();
    let vertices: BTreeSet<Vertex> = edges.iter().flat_map(|c| [c.u, c.v]).collect();
    Ok(ColoredLinkGraph {
        base,
        vertices: vertices.into_iter().collect(),
        edges,
    })
}

/// The lexicographically least rainbow matching (A edge, then B, then C, each class in
/// sorted order), if one exists.
pub fn find_rainbow_matching(g: &ColoredLinkGraph) -> Option<[ColoredEdge; 3]> {
    let a: Vec<&ColoredEdge> = g.class(Color::A).collect();
    let b: Vec<&ColoredEdge> = g.class(Color::B).collect();
    let c: Vec<&ColoredEdge> = g.class(Color::C).collect();
    for ea in &a {
        for eb in b.iter().filter(|eb| !ea.meets(eb)) {
            if let Some(ec) = c.iter().find(|ec| !ea.meets(ec) && !eb.meets(ec)) {
                return Some([**ea, **eb, **ec]);
            }
        }
    }
    None
}

/// A crown with base `e`, if any.
///
/// # Panics
/// If `e` is not an edge of `h`.
pub fn find_crown_with_base(h: &LinearThreeGraph, e: EdgeId) -> Option<CrownWitness> {
    let link = link_graph(h, e).expect("valid edge of a linear graph");
    let m = find_rainbow_matching(&link)?;
    let jewel = |ce: &ColoredEdge| {
        h.edge_at_pair(ce.u, ce.v)
            .expect("every link edge comes from an edge of h")
    };
    Some(CrownWitness {
        base: e,
        jewels: [jewel(&m[0]), jewel(&m[1]), jewel(&m[2])],
    })
}

/// First crown found scanning bases in edge order; `None` iff `h` is crown-free.
pub fn find_crown(h: &LinearThreeGraph) -> Option<CrownWitness> {
    if h.edge_count() < 4 {
        return None;
    }
    h.edge_ids().find_map(|e| find_crown_with_base(h, e))
}

pub fn is_crown_free(h: &LinearThreeGraph) -> bool {
    find_crown(h).is_none()
}

/// A crown using edge `e`, assuming `h` without `e` is crown-free.
///
/// Such a crown has `e` as its base or as a jewel; in the second case the base meets `e`. Only
/// those bases are examined.
pub fn crown_through_edge(h: &LinearThreeGraph, e: EdgeId) -> Option<CrownWitness> {
    if h.edge_count() < 4 {
        return None;
    }
    if let Some(w) = find_crown_with_base(h, e) {
        return Some(w);
    }
    let t = h.edges()[e.0];
    let mut bases: Vec<EdgeId> = t
        .iter()
        .flat_map(|&v| h.edges_at(v).iter().copied())
        .filter(|&f| f != e)
        .collect();
    bases.sort_unstable();
    bases.dedup();
    bases.into_iter().find_map(|f| find_crown_with_base(h, f))
}

/// Builds a crown on base `e` greedily: `f` through the lowest-degree base vertex, `g` through
/// the middle one avoiding `f`, then `h` through the highest-degree one avoiding both. Each
/// choice takes the least edge id. Base vertices of equal degree are ordered by label.
pub fn greedy_crown_642(h: &LinearThreeGraph, e: EdgeId) -> Result<CrownWitness, CrownError> {
    let dv = h.degree_vector(e)?;
    if !dv.dominates(&DegreeVector::new(6, 4, 2)) {
        return Err(CrownError::PreconditionViolated(dv));
    }
    let base = h.edges()[e.0];
    let mut by_degree = base;
    by_degree.sort_by_key(|&v| (std::cmp::Reverse(h.degree(v)), v));
    let [high, mid, low] = by_degree;

    let mut chosen: Vec<EdgeId> = Vec::new();
    for x in [low, mid, high] {
        let pick = h
            .edges_at(x)
            .iter()
            .copied()
            .find(|&f| {
                f != e
                    && chosen
                        .iter()
                        .all(|&g| shared(&h.edges()[f.0], &h.edges()[g.0]) == 0)
            })
            .ok_or(CrownError::GreedyStuck(x))?;
        chosen.push(pick);
    }
    // jewels in base-vertex order
    let mut jewels = [EdgeId(0); 3];
    for (slot, &x) in jewels.iter_mut().zip(base.iter()) {
        *slot = *chosen
            .iter()
            .find(|&&f| h.edges()[f.0].contains(&x))
            .expect("each base vertex has a chosen jewel");
    }
    Ok(CrownWitness { base: e, jewels })
}

/// Exhaustive scan over all 4-edge subsets and all choices of base within each.
///
/// Independent of the link-graph route; intended as a test oracle and for self-certification.
pub fn crown_oracle(h: &LinearThreeGraph) -> Option<CrownWitness> {
    let edges = h.edges();
    let m = edges.len();
    let disjoint = |i: usize, j: usize| shared(&edges[i], &edges[j]) == 0;
    for i in 0..m {
        for j in i + 1..m {
            for k in j + 1..m {
                for l in k + 1..m {
                    let quad = [i, j, k, l];
                    for b in 0..4 {
                        let others: Vec<usize> =
                            quad.iter().copied().filter(|&x| x != quad[b]).collect();
                        let base = edges[quad[b]];
                        let ok = disjoint(others[0], others[1])
                            && disjoint(others[0], others[2])
                            && disjoint(others[1], others[2])
                            && others.iter().all(|&o| shared(&edges[o], &base) == 1);
                        if ok {
                            let mut jewels = [EdgeId(0); 3];
                            for &o in &others {
                                let pos = base.iter().position(|v| edges[o].contains(v)).unwrap();
                                jewels[pos] = EdgeId(o);
                            }
                            return Some(CrownWitness {
                                base: EdgeId(quad[b]),
                                jewels,
                            });
                        }
                    }
                }
            }
        }
    }
    None
}

/// Oracle restricted to a given base edge.
pub fn crown_oracle_with_base(h: &LinearThreeGraph, e: EdgeId) -> Option<CrownWitness> {
    let edges = h.edges();
    let base = edges[e.0];
    let touching: Vec<usize> = (0..edges.len())
        .filter(|&f| f != e.0 && shared(&edges[f], &base) == 1)
        .collect();
    for (x, &i) in touching.iter().enumerate() {
        for (y, &j) in touching.iter().enumerate().skip(x + 1) {
            for &k in touching.iter().skip(y + 1) {
                let trio = [i, j, k];
                let pairwise = shared(&edges[i], &edges[j]) == 0
                    && shared(&edges[i], &edges[k]) == 0
                    && shared(&edges[j], &edges[k]) == 0;
                if pairwise {
                    let mut jewels = [EdgeId(0); 3];
                    for &o in &trio {
                        let pos = base.iter().position(|v| edges[o].contains(v)).unwrap();
                        jewels[pos] = EdgeId(o);
                    }
                    return Some(CrownWitness { base: e, jewels });
                }
            }
        }
    }
    None
}
