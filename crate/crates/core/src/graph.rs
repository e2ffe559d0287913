//! Linear 3-graphs: validated construction, degrees, edge covers and vertex removal.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::canon::{self, Canonical, CanonicalForm};

/// A vertex is a dense index `0..n`.
pub type Vertex = usize;

/// An edge as an ascending vertex triple.
pub type Triple = [Vertex; 3];

const NO_EDGE: u32 = u32::MAX;

/// Index into the normalized (lexicographically sorted) edge list of a graph.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct EdgeId(pub usize);

impl fmt::Display for EdgeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("edge {edge} contains vertex {vertex}, but n = {n}")]
    VertexOutOfRange {
        edge: usize,
        vertex: Vertex,
        n: usize,
    },
    #[error("edge {edge} repeats vertex {vertex}")]
    RepeatedVertex { edge: usize, vertex: Vertex },
    #[error("edges {first} and {second} are identical")]
    DuplicateEdge { first: usize, second: usize },
    #[error("edges {first} and {second} share pair {{{}, {}}}", pair.0, pair.1)]
    SharedPair {
        first: usize,
        second: usize,
        pair: (Vertex, Vertex),
    },
    #[error("edge id {0} out of range ({1} edges)")]
    InvalidEdgeId(usize, usize),
    #[error("vertex {0} out of range (n = {1})")]
    InvalidVertex(Vertex, usize),
    #[error("removing every vertex would leave an empty vertex set")]
    EmptyVertexSet,
    #[error("a graph needs at least one vertex")]
    NoVertices,
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

/// Non-increasing degree triple of an edge.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DegreeVector {
    pub x: usize,
    pub y: usize,
    pub z: usize,
}

impl DegreeVector {
    /// Sorts the three degrees into non-increasing order.
    pub fn new(a: usize, b: usize, c: usize) -> Self {
        let mut d = [a, b, c];
        d.sort_unstable_by(|p, q| q.cmp(p));
        DegreeVector {
            x: d[0],
            y: d[1],
            z: d[2],
        }
    }

    /// Componentwise `self >= other`.
    pub fn dominates(&self, other: &DegreeVector) -> bool {
        self.x >= other.x && self.y >= other.y && self.z >= other.z
    }

    pub fn sum(&self) -> usize {
        self.x + self.y + self.z
    }

    pub fn as_array(&self) -> [usize; 3] {
        [self.x, self.y, self.z]
    }
}

impl fmt::Display for DegreeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.x, self.y, self.z)
    }
}

pub fn dominates(d1: &DegreeVector, d2: &DegreeVector) -> bool {
    d1.dominates(d2)
}

/// A 3-uniform hypergraph on vertices `0..n` in which two edges share at most one vertex.
///
/// Immutable once built. Edges are ascending triples kept in lexicographic order, so an
/// [`EdgeId`] is a position in that order. The pair index maps every covered vertex pair to
/// its unique edge and is filled at construction.
#[derive(Clone, Debug)]
pub struct LinearThreeGraph {
    n: usize,
    edges: Vec<Triple>,
    pair_index: Vec<u32>,
    degrees: Vec<usize>,
    incidence: Vec<Vec<EdgeId>>,
}

impl PartialEq for LinearThreeGraph {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.edges == other.edges
    }
}

impl Eq for LinearThreeGraph {}

impl std::hash::Hash for LinearThreeGraph {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.n.hash(state);
        self.edges.hash(state);
    }
}

/// Checks a raw triple list and returns the normalized graph.
///
/// Violations are reported against positions in `candidate`, scanning in input order and
/// stopping at the first offending triple.
pub fn validate_linear(candidate: &[Triple], n: usize) -> Result<LinearThreeGraph, GraphError> {
    if n == 0 {
        return Err(GraphError::NoVertices);
    }
    let mut seen: HashMap<(Vertex, Vertex), usize> = HashMap::new();
    let mut normalized = Vec::with_capacity(candidate.len());
    for (i, raw) in candidate.iter().enumerate() {
        for &v in raw {
            if v >= n {
                return Err(GraphError::VertexOutOfRange {
                    edge: i,
                    vertex: v,
                    n,
                });
            }
        }
        let mut t = *raw;
        t.sort_unstable();
        if t[0] == t[1] || t[1] == t[2] {
            return Err(GraphError::RepeatedVertex {
                edge: i,
                vertex: t[1],
            });
        }
        for pair in triple_pairs(&t) {
            if let Some(&j) = seen.get(&pair) {
                let mut other = candidate[j];
                other.sort_unstable();
                return Err(if other == t {
                    GraphError::DuplicateEdge {
                        first: j,
                        second: i,
                    }
                } else {
                    GraphError::SharedPair {
                        first: j,
                        second: i,
                        pair,
                    }
                });
            }
        }
        for pair in triple_pairs(&t) {
            seen.insert(pair, i);
        }
        normalized.push(t);
    }
    normalized.sort_unstable();
    Ok(LinearThreeGraph::from_normalized(n, normalized))
}

pub(crate) fn triple_pairs(t: &Triple) -> [(Vertex, Vertex); 3] {
    [(t[0], t[1]), (t[0], t[2]), (t[1], t[2])]
}

impl LinearThreeGraph {
    /// Graph with `n` vertices and no edges.
    pub fn empty(n: usize) -> Result<Self, GraphError> {
        validate_linear(&[], n)
    }

    pub fn from_edges(n: usize, edges: &[Triple]) -> Result<Self, GraphError> {
        validate_linear(edges, n)
    }

    // Caller guarantees sorted, linear, in-range triples.
    fn from_normalized(n: usize, edges: Vec<Triple>) -> Self {
        let mut pair_index = vec![NO_EDGE; n * n];
        let mut degrees = vec![0; n];
        let mut incidence = vec![Vec::new(); n];
        for (i, t) in edges.iter().enumerate() {
            for (u, v) in triple_pairs(t) {
                debug_assert_eq!(pair_index[u * n + v], NO_EDGE);
                pair_index[u * n + v] = i as u32;
                pair_index[v * n + u] = i as u32;
            }
            for &v in t {
                degrees[v] += 1;
                incidence[v].push(EdgeId(i));
            }
        }
        LinearThreeGraph {
            n,
            edges,
            pair_index,
            degrees,
            incidence,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Triple] {
        &self.edges
    }

    pub fn edge_ids(&self) -> impl Iterator<Item = EdgeId> {
        (0..self.edges.len()).map(EdgeId)
    }

    pub fn edge(&self, e: EdgeId) -> Result<Triple, GraphError> {
        self.edges
            .get(e.0)
            .copied()
            .ok_or(GraphError::InvalidEdgeId(e.0, self.edges.len()))
    }

    pub fn check_edge(&self, e: EdgeId) -> Result<(), GraphError> {
        self.edge(e).map(|_| ())
    }

    pub fn check_vertex(&self, v: Vertex) -> Result<(), GraphError> {
        if v < self.n {
            Ok(())
        } else {
            Err(GraphError::InvalidVertex(v, self.n))
        }
    }

    /// Number of edges containing `v`.
    pub fn degree(&self, v: Vertex) -> usize {
        self.degrees[v]
    }

    pub fn degrees(&self) -> &[usize] {
        &self.degrees
    }

    pub fn min_degree(&self) -> usize {
        self.degrees.iter().copied().min().unwrap_or(0)
    }

    pub fn max_degree(&self) -> usize {
        self.degrees.iter().copied().max().unwrap_or(0)
    }

    /// Edges through `v`, ascending.
    pub fn edges_at(&self, v: Vertex) -> &[EdgeId] {
        &self.incidence[v]
    }

    /// The edge containing both `u` and `v`, if any.
    pub fn edge_at_pair(&self, u: Vertex, v: Vertex) -> Option<EdgeId> {
        if u == v || u >= self.n || v >= self.n {
            return None;
        }
        match self.pair_index[u * self.n + v] {
            NO_EDGE => None,
            i => Some(EdgeId(i as usize)),
        }
    }

    pub fn pair_is_free(&self, u: Vertex, v: Vertex) -> bool {
        self.pair_index[u * self.n + v] == NO_EDGE
    }

    /// True when `t` is a proper triple whose three pairs are all uncovered.
    pub fn can_add(&self, t: &Triple) -> bool {
        t.iter().all(|&v| v < self.n)
            && t[0] != t[1]
            && t[1] != t[2]
            && t[0] != t[2]
            && triple_pairs(t)
                .iter()
                .all(|&(u, v)| self.pair_is_free(u, v))
    }

    /// A new graph with one more edge.
    pub fn with_edge(&self, t: Triple) -> Result<Self, GraphError> {
        let mut edges = self.edges.clone();
        edges.push(t);
        validate_linear(&edges, self.n)
    }

    /// Adds a triple already known to satisfy [`can_add`](Self::can_add).
    pub(crate) fn with_edge_unchecked(&self, mut t: Triple) -> Self {
        t.sort_unstable();
        debug_assert!(self.can_add(&t));
        let pos = self.edges.partition_point(|e| *e < t);
        let mut edges = Vec::with_capacity(self.edges.len() + 1);
        edges.extend_from_slice(&self.edges[..pos]);
        edges.push(t);
        edges.extend_from_slice(&self.edges[pos..]);
        Self::from_normalized(self.n, edges)
    }

    pub fn edge_index_of(&self, t: &Triple) -> Option<EdgeId> {
        let mut t = *t;
        t.sort_unstable();
        self.edges.binary_search(&t).ok().map(EdgeId)
    }

    pub fn degree_vector(&self, e: EdgeId) -> Result<DegreeVector, GraphError> {
        let t = self.edge(e)?;
        Ok(DegreeVector::new(
            self.degrees[t[0]],
            self.degrees[t[1]],
            self.degrees[t[2]],
        ))
    }

    /// `E_X(H)`: every edge meeting `x`.
    pub fn edges_covering(&self, x: &BTreeSet<Vertex>) -> Result<BTreeSet<EdgeId>, GraphError> {
        for &v in x {
            self.check_vertex(v)?;
        }
        Ok(x.iter()
            .flat_map(|&v| self.incidence[v].iter().copied())
            .collect())
    }

    /// Deletes `x` and every edge meeting it; survivors are renumbered in increasing order.
    ///
    /// The second component maps each old vertex to its new index.
    pub fn remove_vertices(
        &self,
        x: &BTreeSet<Vertex>,
    ) -> Result<(Self, Vec<Option<Vertex>>), GraphError> {
        for &v in x {
            self.check_vertex(v)?;
        }
        if x.len() == self.n {
            return Err(GraphError::EmptyVertexSet);
        }
        let mut mapping = vec![None; self.n];
        let mut next = 0;
        for (v, slot) in mapping.iter_mut().enumerate() {
            if !x.contains(&v) {
                *slot = Some(next);
                next += 1;
            }
        }
        let kept: Vec<Triple> = self
            .edges
            .iter()
            .filter_map(|t| Some([mapping[t[0]]?, mapping[t[1]]?, mapping[t[2]]?]))
            .collect();
        let g = validate_linear(&kept, next).expect("subgraph of a linear graph is linear");
        Ok((g, mapping))
    }

    /// Applies `perm` (old label -> new label) to every vertex.
    pub fn relabel(&self, perm: &[Vertex]) -> Result<Self, GraphError> {
        assert_eq!(perm.len(), self.n, "permutation length must equal n");
        let edges: Vec<Triple> = self
            .edges
            .iter()
            .map(|t| [perm[t[0]], perm[t[1]], perm[t[2]]])
            .collect();
        validate_linear(&edges, self.n)
    }

    /// Canonical edge list plus the input-to-canonical vertex permutation.
    pub fn canonical_form(&self) -> (CanonicalForm, Vec<Vertex>) {
        let c = self.canonical();
        (c.form(), c.labeling)
    }

    /// Full canonical labeling result including automorphism generators.
    pub fn canonical(&self) -> Canonical {
        canon::canonical_labeling(self.n, &self.edges, None)
    }

    pub fn sum_of_squared_degrees(&self) -> usize {
        self.degrees.iter().map(|d| d * d).sum()
    }
}

impl fmt::Display for LinearThreeGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::io::to_l3g(self))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn crown() -> LinearThreeGraph {
        validate_linear(&[[0, 1, 2], [0, 3, 4], [1, 5, 6], [2, 7, 8]], 9).unwrap()
    }

    fn fano() -> LinearThreeGraph {
        let lines = [
            [1, 2, 3],
            [1, 4, 5],
            [1, 6, 7],
            [2, 4, 6],
            [2, 5, 7],
            [3, 4, 7],
            [3, 5, 6],
        ];
        let shifted: Vec<Triple> = lines
            .iter()
            .map(|l| [l[0] - 1, l[1] - 1, l[2] - 1])
            .collect();
        validate_linear(&shifted, 7).unwrap()
    }

    #[test]
    fn crown_is_valid() {
        let c = crown();
        assert_eq!(c.edge_count(), 4);
        assert_eq!(c.n(), 9);
    }

    #[test]
    fn shared_pair_is_reported() {
        let err = validate_linear(&[[0, 1, 2], [0, 1, 3]], 4).unwrap_err();
        assert_eq!(
            err,
            GraphError::SharedPair {
                first: 0,
                second: 1,
                pair: (0, 1)
            }
        );
        assert!(err.to_string().contains("share pair {0, 1}"));
    }

    #[test]
    fn malformed_triples_are_reported() {
        assert_eq!(
            validate_linear(&[[0, 1, 9]], 9).unwrap_err(),
            GraphError::VertexOutOfRange {
                edge: 0,
                vertex: 9,
                n: 9
            }
        );
        assert!(matches!(
            validate_linear(&[[0, 1, 2], [2, 2, 3]], 5).unwrap_err(),
            GraphError::RepeatedVertex { edge: 1, .. }
        ));
        assert_eq!(
            validate_linear(&[[0, 1, 2], [3, 4, 5], [2, 1, 0]], 6).unwrap_err(),
            GraphError::DuplicateEdge {
                first: 0,
                second: 2
            }
        );
        assert_eq!(validate_linear(&[], 0).unwrap_err(), GraphError::NoVertices);
    }

    #[test]
    fn fano_covers_every_pair_once() {
        let f = fano();
        let mut count = vec![vec![0; 7]; 7];
        for t in f.edges() {
            for (u, v) in triple_pairs(t) {
                count[u][v] += 1;
            }
        }
        for u in 0..7 {
            for v in (u + 1)..7 {
                assert_eq!(count[u][v], 1, "pair {u},{v}");
            }
        }
    }

    #[test]
    fn degree_vectors() {
        let c = crown();
        let base = c.edge_index_of(&[0, 1, 2]).unwrap();
        let jewel = c.edge_index_of(&[0, 3, 4]).unwrap();
        assert_eq!(c.degree_vector(base).unwrap(), DegreeVector::new(2, 2, 2));
        assert_eq!(c.degree_vector(jewel).unwrap(), DegreeVector::new(2, 1, 1));
        let f = fano();
        for e in f.edge_ids() {
            assert_eq!(f.degree_vector(e).unwrap().as_array(), [3, 3, 3]);
        }
        assert!(c.degree_vector(EdgeId(4)).is_err());
    }

    #[test]
    fn domination_order() {
        let d642 = DegreeVector::new(6, 4, 2);
        assert!(dominates(&d642, &d642));
        assert!(!dominates(&DegreeVector::new(5, 5, 5), &d642));
        assert!(dominates(&DegreeVector::new(7, 4, 3), &d642));
        assert_eq!(DegreeVector::new(2, 6, 4), d642);
    }

    #[test]
    fn edge_covers() {
        let c = crown();
        let x: BTreeSet<_> = [0].into();
        let cover = c.edges_covering(&x).unwrap();
        assert_eq!(cover.len(), 2);
        assert!(cover.contains(&c.edge_index_of(&[0, 3, 4]).unwrap()));
        let all: BTreeSet<_> = (0..9).collect();
        assert_eq!(c.edges_covering(&all).unwrap().len(), 4);
        assert!(c.edges_covering(&BTreeSet::new()).unwrap().is_empty());
        assert!(c.edges_covering(&[9].into()).is_err());
    }

    #[test]
    fn vertex_removal() {
        let c = crown();
        let (g, map) = c.remove_vertices(&[3].into()).unwrap();
        assert_eq!(g.n(), 8);
        assert_eq!(g.edge_count(), 3);
        assert_eq!(map[3], None);
        assert_eq!(map[4], Some(3));

        let (same, _) = c.remove_vertices(&BTreeSet::new()).unwrap();
        assert_eq!(same, c);

        let (f, _) = fano().remove_vertices(&[0].into()).unwrap();
        assert_eq!((f.n(), f.edge_count()), (6, 4));

        let all: BTreeSet<_> = (0..9).collect();
        assert_eq!(
            c.remove_vertices(&all).unwrap_err(),
            GraphError::EmptyVertexSet
        );
    }

    #[test]
    fn zero_edges_is_a_graph() {
        let g = LinearThreeGraph::empty(1).unwrap();
        assert_eq!(g.edge_count(), 0);
        assert_eq!(g.degree(0), 0);
    }

    #[test]
    fn adding_edges() {
        let c = crown();
        assert!(!c.can_add(&[0, 1, 5]));
        assert!(c.can_add(&[3, 5, 7]));
        let g = c.with_edge([3, 5, 7]).unwrap();
        assert_eq!(g.edge_count(), 5);
        assert_eq!(g, c.with_edge_unchecked([7, 5, 3]));
        assert!(c.with_edge([0, 1, 5]).is_err());
    }
}
