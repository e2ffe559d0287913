//! Canonical labeling of small 3-uniform hypergraphs.
//!
//! Works on the bipartite vertex/edge incidence graph. Each search node refines its ordered
//! partition to an equitable one, then individualizes every vertex of the first non-singleton
//! vertex cell. A leaf (discrete partition) orders the vertices; its certificate is the sorted
//! relabeled edge list and the canonical form is the least certificate over all leaves.
//!
//! Leaves sharing a certificate yield automorphisms. Children of a node are skipped when they
//! lie in the same orbit as an explored sibling under the known automorphisms that fix the
//! node's individualized prefix pointwise. Twins (vertices with identical incident edge sets,
//! for instance degree-one vertices of a common edge) are seeded as transpositions. Every
//! automorphism used for pruning is kept, so the returned generators generate the full
//! automorphism group of the colored input.

use serde::{Deserialize, Serialize};

use crate::graph::{Triple, Vertex};

/// Canonical representative of an isomorphism class: vertex count and sorted edge list.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct CanonicalForm {
    pub n: usize,
    pub edges: Vec<Triple>,
}

/// Output of [`canonical_labeling`].
#[derive(Debug, Clone)]
pub struct Canonical {
    pub n: usize,
    /// Canonical edge list, sorted.
    pub edges: Vec<Triple>,
    /// `labeling[v]` is the canonical label of input vertex `v`.
    pub labeling: Vec<Vertex>,
    /// Vertex permutations generating the automorphism group of the input.
    pub generators: Vec<Vec<Vertex>>,
}

impl Canonical {
    pub fn form(&self) -> CanonicalForm {
        CanonicalForm {
            n: self.n,
            edges: self.edges.clone(),
        }
    }

    /// Orbit representative (least index) of each vertex under the automorphism group.
    pub fn vertex_orbits(&self) -> Vec<usize> {
        let mut uf = UnionFind::new(self.n);
        for g in &self.generators {
            for (v, &w) in g.iter().enumerate() {
                uf.union(v, w);
            }
        }
        (0..self.n).map(|v| uf.find(v)).collect()
    }
}

pub(crate) struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub(crate) fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    pub(crate) fn find(&mut self, x: usize) -> usize {
        let mut root = x;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        let mut cur = x;
        while self.parent[cur] != root {
            let next = self.parent[cur];
            self.parent[cur] = root;
            cur = next;
        }
        root
    }

    // Keeps the smaller index as root so representatives are label-minimal.
    pub(crate) fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra < rb {
            self.parent[rb] = ra;
        } else if rb < ra {
            self.parent[ra] = rb;
        }
    }
}

type Cells = Vec<Vec<usize>>;

struct Incidence<'a> {
    n: usize,
    edges: &'a [Triple],
    vertex_edges: Vec<Vec<usize>>,
}

impl Incidence<'_> {
    fn total(&self) -> usize {
        self.n + self.edges.len()
    }

    fn for_each_neighbor(&self, node: usize, mut f: impl FnMut(usize)) {
        if node < self.n {
            for &j in &self.vertex_edges[node] {
                f(self.n + j);
            }
        } else {
            for &v in &self.edges[node - self.n] {
                f(v);
            }
        }
    }

    /// Splits cells by the multiset of neighbor cells until the partition is equitable.
    fn refine(&self, cells: &mut Cells) {
        let mut cell_of = vec![0usize; self.total()];
        loop {
            for (ci, c) in cells.iter().enumerate() {
                for &x in c {
                    cell_of[x] = ci;
                }
            }
            let mut changed = false;
            let mut next: Cells = Vec::with_capacity(cells.len() + 4);
            for c in cells.iter() {
                if c.len() == 1 {
                    next.push(c.clone());
                    continue;
                }
                let mut keyed: Vec<(Vec<usize>, usize)> = c
                    .iter()
                    .map(|&x| {
                        let mut sig = Vec::new();
                        self.for_each_neighbor(x, |y| sig.push(cell_of[y]));
                        sig.sort_unstable();
                        (sig, x)
                    })
                    .collect();
                keyed.sort();
                let mut start = 0;
                for i in 1..=keyed.len() {
                    if i == keyed.len() || keyed[i].0 != keyed[start].0 {
                        next.push(keyed[start..i].iter().map(|(_, x)| *x).collect());
                        start = i;
                    }
                }
                changed |= keyed[0].0 != keyed[keyed.len() - 1].0;
            }
            *cells = next;
            if !changed {
                return;
            }
        }
    }
}

struct Leaf {
    cert: Vec<Triple>,
    order: Vec<Vertex>,
}

struct Searcher<'a> {
    inc: Incidence<'a>,
    first: Option<Leaf>,
    best: Option<Leaf>,
    generators: Vec<Vec<Vertex>>,
}

impl Searcher<'_> {
    fn certificate(&self, order: &[Vertex]) -> Vec<Triple> {
        let mut label = vec![0; self.inc.n];
        for (pos, &v) in order.iter().enumerate() {
            label[v] = pos;
        }
        let mut cert: Vec<Triple> = self
            .inc
            .edges
            .iter()
            .map(|t| {
                let mut r = [label[t[0]], label[t[1]], label[t[2]]];
                r.sort_unstable();
                r
            })
            .collect();
        cert.sort_unstable();
        cert
    }

    fn record_automorphism(&mut self, from: &[Vertex], to: &[Vertex]) {
        let mut perm = vec![0; self.inc.n];
        for (a, b) in from.iter().zip(to) {
            perm[*a] = *b;
        }
        if perm.iter().enumerate().any(|(i, &p)| i != p) && !self.generators.contains(&perm) {
            self.generators.push(perm);
        }
    }

    fn leaf(&mut self, cells: &Cells) {
        let order: Vec<Vertex> = cells
            .iter()
            .filter(|c| c[0] < self.inc.n)
            .map(|c| c[0])
            .collect();
        let cert = self.certificate(&order);
        let first_match = self
            .first
            .as_ref()
            .filter(|f| f.cert == cert)
            .map(|f| f.order.clone());
        if let Some(from) = first_match {
            self.record_automorphism(&from, &order);
        }
        match &self.best {
            Some(b) if b.cert < cert => {}
            Some(b) if b.cert == cert => {
                let from = b.order.clone();
                self.record_automorphism(&from, &order);
            }
            _ => {
                self.best = Some(Leaf {
                    cert: cert.clone(),
                    order: order.clone(),
                })
            }
        }
        if self.first.is_none() {
            self.first = Some(Leaf { cert, order });
        }
    }

    fn same_orbit_in_stabilizer(&self, prefix: &[Vertex], tried: &[Vertex], w: Vertex) -> bool {
        let mut uf = UnionFind::new(self.inc.n);
        for g in &self.generators {
            if prefix.iter().all(|&p| g[p] == p) {
                for (v, &gv) in g.iter().enumerate() {
                    uf.union(v, gv);
                }
            }
        }
        let root = uf.find(w);
        tried.iter().any(|&u| uf.find(u) == root)
    }

    fn visit(&mut self, cells: Cells, prefix: &mut Vec<Vertex>) {
        let n = self.inc.n;
        let Some(target) = cells.iter().position(|c| c.len() > 1 && c[0] < n) else {
            debug_assert!(
                cells.iter().all(|c| c.len() == 1),
                "distinct edges separate once vertices do"
            );
            self.leaf(&cells);
            return;
        };
        let mut tried: Vec<Vertex> = Vec::new();
        for &w in &cells[target] {
            if !tried.is_empty() && self.same_orbit_in_stabilizer(prefix, &tried, w) {
                continue;
            }
            tried.push(w);
            let mut child = Vec::with_capacity(cells.len() + 1);
            child.extend_from_slice(&cells[..target]);
            child.push(vec![w]);
            child.push(cells[target].iter().copied().filter(|&x| x != w).collect());
            child.extend_from_slice(&cells[target + 1..]);
            self.inc.refine(&mut child);
            prefix.push(w);
            self.visit(child, prefix);
            prefix.pop();
        }
    }
}

/// Computes the canonical form of the hypergraph `(n, edges)`.
///
/// `colors` optionally assigns each vertex a color; isomorphisms must then preserve colors, and
/// vertices are canonically ordered by ascending color first. Edges must be distinct triples of
/// distinct vertices.
pub fn canonical_labeling(n: usize, edges: &[Triple], colors: Option<&[u32]>) -> Canonical {
    let mut vertex_edges = vec![Vec::new(); n];
    for (j, t) in edges.iter().enumerate() {
        for &v in t {
            vertex_edges[v].push(j);
        }
    }
    let inc = Incidence {
        n,
        edges,
        vertex_edges,
    };
    let color = |v: usize| colors.map_or(0, |c| c[v]);

    let mut by_color: Vec<(u32, usize)> = (0..n).map(|v| (color(v), v)).collect();
    by_color.sort_unstable();
    let mut cells: Cells = Vec::new();
    for (c, v) in by_color {
        match cells.last_mut() {
            Some(cell) if color(cell[0]) == c => cell.push(v),
            _ => cells.push(vec![v]),
        }
    }
    if !edges.is_empty() {
        cells.push((n..n + edges.len()).collect());
    }

    let mut generators = Vec::new();
    let mut twins: Vec<(Vec<usize>, u32, usize)> = (0..n)
        .map(|v| (inc.vertex_edges[v].clone(), color(v), v))
        .collect();
    twins.sort();
    for w in twins.windows(2) {
        if w[0].0 == w[1].0 && w[0].1 == w[1].1 {
            let mut perm: Vec<usize> = (0..n).collect();
            perm.swap(w[0].2, w[1].2);
            generators.push(perm);
        }
    }

    inc.refine(&mut cells);
    let mut searcher = Searcher {
        inc,
        first: None,
        best: None,
        generators,
    };
    if n == 0 {
        return Canonical {
            n,
            edges: Vec::new(),
            labeling: Vec::new(),
            generators: Vec::new(),
        };
    }
    searcher.visit(cells, &mut Vec::new());
    let best = searcher.best.expect("search visits at least one leaf");
    let mut labeling = vec![0; n];
    for (pos, &v) in best.order.iter().enumerate() {
        labeling[v] = pos;
    }
    Canonical {
        n,
        edges: best.cert,
        labeling,
        generators: searcher.generators,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn relabel(edges: &[Triple], perm: &[usize]) -> Vec<Triple> {
        edges
            .iter()
            .map(|t| {
                let mut r = [perm[t[0]], perm[t[1]], perm[t[2]]];
                r.sort_unstable();
                r
            })
            .collect()
    }

    fn brute_force_form(n: usize, edges: &[Triple]) -> Vec<Triple> {
        let mut perm: Vec<usize> = (0..n).collect();
        let mut best: Option<Vec<Triple>> = None;
        loop {
            let mut r = relabel(edges, &perm);
            r.sort_unstable();
            if best.as_ref().is_none_or(|b| r < *b) {
                best = Some(r);
            }
            // next lexicographic permutation
            let Some(i) = (0..n.saturating_sub(1))
                .rev()
                .find(|&i| perm[i] < perm[i + 1])
            else {
                break;
            };
            let j = (i + 1..n).rev().find(|&j| perm[j] > perm[i]).unwrap();
            perm.swap(i, j);
            perm[i + 1..].reverse();
        }
        best.unwrap()
    }

    fn aut_order(n: usize, gens: &[Vec<usize>]) -> usize {
        // Closure of the generated group by breadth-first multiplication.
        let id: Vec<usize> = (0..n).collect();
        let mut seen = std::collections::HashSet::new();
        seen.insert(id.clone());
        let mut queue = vec![id];
        while let Some(p) = queue.pop() {
            for g in gens {
                let q: Vec<usize> = p.iter().map(|&x| g[x]).collect();
                if seen.insert(q.clone()) {
                    queue.push(q);
                }
            }
        }
        seen.len()
    }

    const FANO: [Triple; 7] = [
        [0, 1, 2],
        [0, 3, 4],
        [0, 5, 6],
        [1, 3, 5],
        [1, 4, 6],
        [2, 3, 6],
        [2, 4, 5],
    ];

    #[test]
    fn labeling_maps_input_to_form() {
        let c = canonical_labeling(7, &FANO, None);
        let mut r = relabel(&FANO, &c.labeling);
        r.sort_unstable();
        assert_eq!(r, c.edges);
    }

    #[test]
    fn automorphism_groups_are_complete() {
        assert_eq!(
            aut_order(7, &canonical_labeling(7, &FANO, None).generators),
            168
        );
        let crown = [[0, 1, 2], [0, 3, 4], [1, 5, 6], [2, 7, 8]];
        // S3 on the jewels times a swap inside each jewel
        assert_eq!(
            aut_order(9, &canonical_labeling(9, &crown, None).generators),
            48
        );
        let ag23 = [
            [0, 1, 2],
            [3, 4, 5],
            [6, 7, 8],
            [0, 3, 6],
            [1, 4, 7],
            [2, 5, 8],
            [0, 4, 8],
            [1, 5, 6],
            [2, 3, 7],
            [0, 5, 7],
            [1, 3, 8],
            [2, 4, 6],
        ];
        assert_eq!(
            aut_order(9, &canonical_labeling(9, &ag23, None).generators),
            432
        );
        assert_eq!(
            aut_order(5, &canonical_labeling(5, &[], None).generators),
            120
        );
    }

    #[test]
    fn generators_are_automorphisms() {
        let edges = [[0, 1, 2], [0, 3, 4], [1, 3, 5], [2, 4, 5], [0, 5, 6]];
        let c = canonical_labeling(7, &edges, None);
        let mut sorted = edges.to_vec();
        sorted.sort_unstable();
        for g in &c.generators {
            let mut r = relabel(&edges, g);
            r.sort_unstable();
            assert_eq!(r, sorted);
        }
    }

    #[test]
    fn matches_brute_force_minimum_up_to_isomorphism() {
        let graphs: Vec<(usize, Vec<Triple>)> = vec![
            (6, vec![[0, 1, 2], [0, 3, 4], [1, 3, 5], [2, 4, 5]]),
            (6, vec![[0, 1, 2], [2, 3, 4]]),
            (7, vec![[0, 1, 2], [3, 4, 5], [0, 3, 6]]),
        ];
        for (n, edges) in graphs {
            let c = canonical_labeling(n, &edges, None);
            let mut perm: Vec<usize> = (0..n).rev().collect();
            perm.rotate_left(2);
            let c2 = canonical_labeling(n, &relabel(&edges, &perm), None);
            assert_eq!(c.edges, c2.edges);
            // Equal forms and equal brute-force minima go together.
            let b1 = brute_force_form(n, &edges);
            let b2 = brute_force_form(n, &c.edges);
            assert_eq!(b1, b2);
        }
    }

    #[test]
    fn colors_are_respected() {
        let edges = [[0, 1, 2]];
        let a = canonical_labeling(4, &edges, Some(&[1, 0, 0, 0]));
        let b = canonical_labeling(4, &edges, Some(&[0, 0, 0, 1]));
        assert_ne!(a.edges, b.edges);
        let c = canonical_labeling(4, &edges, Some(&[0, 1, 0, 0]));
        assert_eq!(a.edges, c.edges);
    }
}
