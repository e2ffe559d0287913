//! The search engine against brute force: isomorphism class counts, extremal values, and the
//! soundness of bound pruning.

use std::collections::{BTreeMap, BTreeSet};

use itertools::Itertools;

use crown_core::crown::crown_oracle;
use crown_core::generators::{densify_crown_free, lower_bound_value};
use crown_core::search::{enumerate_linear_graphs, exact_ex, SearchOptions};
use crown_core::{validate_linear, Triple};

fn all_triples(n: usize) -> Vec<Triple> {
    (0..n).combinations(3).map(|c| [c[0], c[1], c[2]]).collect()
}

/// Every labeled linear 3-graph on `n` vertices, by backtracking over triples in order.
fn labeled_linear_graphs(n: usize) -> Vec<Vec<Triple>> {
    fn rec(
        triples: &[Triple],
        start: usize,
        used: &mut Vec<bool>,
        n: usize,
        cur: &mut Vec<Triple>,
        out: &mut Vec<Vec<Triple>>,
    ) {
        out.push(cur.clone());
        for i in start..triples.len() {
            let t = triples[i];
            let pairs = [t[0] * n + t[1], t[0] * n + t[2], t[1] * n + t[2]];
            if pairs.iter().any(|&p| used[p]) {
                continue;
            }
            for &p in &pairs {
                used[p] = true;
            }
            cur.push(t);
            rec(triples, i + 1, used, n, cur, out);
            cur.pop();
            for &p in &pairs {
                used[p] = false;
            }
        }
    }
    let triples = all_triples(n);
    let mut out = Vec::new();
    rec(
        &triples,
        0,
        &mut vec![false; n * n],
        n,
        &mut Vec::new(),
        &mut out,
    );
    out
}

/// Least relabeled edge list over all permutations.
fn brute_force_form(edges: &[Triple], perms: &[Vec<usize>]) -> Vec<Triple> {
    perms
        .iter()
        .map(|p| {
            let mut r: Vec<Triple> = edges
                .iter()
                .map(|t| {
                    let mut s = [p[t[0]], p[t[1]], p[t[2]]];
                    s.sort_unstable();
                    s
                })
                .collect();
            r.sort_unstable();
            r
        })
        .min()
        .expect("at least one permutation")
}

/// Class counts by edge count: independent brute force versus the engine.
#[test]
fn class_counts_match_brute_force() {
    for n in 3..=6 {
        let perms: Vec<Vec<usize>> = (0..n).permutations(n).collect();
        let mut brute: BTreeSet<Vec<Triple>> = BTreeSet::new();
        for g in labeled_linear_graphs(n) {
            brute.insert(brute_force_form(&g, &perms));
        }
        let engine = enumerate_linear_graphs(n, false, None);
        let by_size = |it: &mut dyn Iterator<Item = usize>| {
            let mut m = BTreeMap::new();
            for k in it {
                *m.entry(k).or_insert(0usize) += 1;
            }
            m
        };
        assert_eq!(
            by_size(&mut brute.iter().map(Vec::len)),
            by_size(&mut engine.iter().map(|f| f.edges.len())),
            "n = {n}"
        );
    }
}

/// At n = 7 the labeled space is still small enough to reduce with the canonical labeler.
#[test]
fn class_count_at_seven_matches_labeled_reduction() {
    let n = 7;
    let mut seen = BTreeSet::new();
    for g in labeled_linear_graphs(n) {
        let h = validate_linear(&g, n).unwrap();
        seen.insert(h.canonical_form().0);
    }
    let engine: BTreeSet<_> = enumerate_linear_graphs(n, false, None)
        .into_iter()
        .collect();
    assert_eq!(seen, engine);
}

#[test]
fn engine_output_has_no_duplicates_and_is_canonical() {
    for n in 3..=9 {
        let forms = enumerate_linear_graphs(n, true, None);
        let set: BTreeSet<_> = forms.iter().cloned().collect();
        assert_eq!(set.len(), forms.len());
        for f in forms.iter().step_by(7) {
            let h = validate_linear(&f.edges, n).unwrap();
            assert_eq!(&h.canonical_form().0, f);
        }
    }
}

#[test]
fn small_values_equal_maximum_packing() {
    // without a crown (it needs nine vertices) ex(n) is the largest linear packing
    for n in 3..=8 {
        let packing = labeled_linear_graphs(n).iter().map(Vec::len).max().unwrap();
        assert_eq!(
            exact_ex(n, &SearchOptions::default()).value,
            packing,
            "n = {n}"
        );
    }
}

#[test]
fn bound_pruning_is_sound() {
    for n in 3..=9 {
        let unpruned = exact_ex(
            n,
            &SearchOptions {
                bound_pruning: false,
                seed_incumbent: false,
                ..SearchOptions::default()
            },
        );
        let pruned = exact_ex(n, &SearchOptions::default());
        assert_eq!(pruned.value, unpruned.value, "n = {n}");
        assert_eq!(pruned.witnesses, unpruned.witnesses, "n = {n}");
        assert!(pruned.nodes_explored <= unpruned.nodes_explored);
        let all = enumerate_linear_graphs(n, true, None);
        let best = all.iter().map(|f| f.edges.len()).max().unwrap();
        assert_eq!(pruned.value, best);
    }
}

#[test]
fn nine_vertices_stay_below_the_affine_plane() {
    let cert = exact_ex(9, &SearchOptions::default());
    assert!(cert.exhaustive);
    assert!(cert.value < 12);
    let ag = validate_linear(
        &[
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
        ],
        9,
    )
    .unwrap();
    assert!(crown_oracle(&ag).is_some());
}

#[test]
fn values_are_monotone_and_bounded() {
    let mut prev = 0;
    for n in 3..=10 {
        let cert = exact_ex(n, &SearchOptions::default());
        assert!(cert.exhaustive);
        assert!(cert.revalidate().is_ok());
        assert!(cert.value >= prev);
        assert!(lower_bound_value(n) <= cert.value);
        assert!(3 * cert.value < 5 * n);
        assert!(6 * cert.value <= n * (n - 1));
        prev = cert.value;
    }
}

#[test]
fn densify_never_beats_exact() {
    let exact = exact_ex(9, &SearchOptions::default()).value;
    for seed in 0..5 {
        let h = densify_crown_free(9, seed, 100).unwrap();
        assert!(h.edge_count() <= exact);
        assert!(crown_oracle(&h).is_none());
    }
}
