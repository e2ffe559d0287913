use std::collections::BTreeSet;

use proptest::prelude::*;

use crown_core::crown::{crown_oracle, crown_oracle_with_base, crown_through_edge};
use crown_core::generators::random_linear_graph;
use crown_core::io::{parse_json, parse_l3g, to_json, to_l3g};
use crown_core::{find_crown, find_crown_with_base, validate_linear, LinearThreeGraph};

fn graph_strategy(max_n: usize) -> impl Strategy<Value = LinearThreeGraph> {
    (3..=max_n, any::<u64>()).prop_flat_map(|(n, seed)| {
        (0..=n * (n - 1) / 6).prop_map(move |m| random_linear_graph(n, m, seed).unwrap().graph)
    })
}

fn graph_and_permutation(max_n: usize) -> impl Strategy<Value = (LinearThreeGraph, Vec<usize>)> {
    graph_strategy(max_n).prop_flat_map(|h| {
        let n = h.n();
        (Just(h), Just((0..n).collect::<Vec<_>>()).prop_shuffle())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn canonical_form_is_relabeling_invariant((h, perm) in graph_and_permutation(14)) {
        let g = h.relabel(&perm).unwrap();
        prop_assert_eq!(h.canonical_form().0, g.canonical_form().0);
    }

    #[test]
    fn canonical_labeling_maps_onto_the_form(h in graph_strategy(14)) {
        let (form, labeling) = h.canonical_form();
        let relabeled = h.relabel(&labeling).unwrap();
        prop_assert_eq!(relabeled.edges(), &form.edges[..]);
    }

    #[test]
    fn degree_sum_is_three_times_edges(h in graph_strategy(20)) {
        prop_assert_eq!(h.degrees().iter().sum::<usize>(), 3 * h.edge_count());
        prop_assert_eq!(h.sum_of_squared_degrees(), h.edge_ids().map(|e| h.degree_vector(e).unwrap().sum()).sum::<usize>());
    }

    #[test]
    fn text_formats_round_trip(h in graph_strategy(20)) {
        let text = to_l3g(&h);
        let back = parse_l3g(&text).unwrap();
        prop_assert_eq!(&back, &h);
        prop_assert_eq!(to_l3g(&back), text);
        prop_assert_eq!(parse_json(&to_json(&h)).unwrap(), h);
    }

    #[test]
    fn removing_vertices_drops_exactly_the_covering_edges(
        h in graph_strategy(15),
        mask in prop::collection::vec(any::<bool>(), 15),
    ) {
        let x: BTreeSet<usize> = (0..h.n()).filter(|&v| mask[v]).collect();
        prop_assume!(x.len() < h.n());
        let covered = h.edges_covering(&x).unwrap();
        let (g, map) = h.remove_vertices(&x).unwrap();
        prop_assert_eq!(g.n(), h.n() - x.len());
        prop_assert_eq!(g.edge_count(), h.edge_count() - covered.len());
        let mut expected: Vec<[usize; 3]> = h
            .edge_ids()
            .filter(|e| !covered.contains(e))
            .map(|e| {
                let t = h.edges()[e.0];
                let mut r = [map[t[0]].unwrap(), map[t[1]].unwrap(), map[t[2]].unwrap()];
                r.sort_unstable();
                r
            })
            .collect();
        expected.sort_unstable();
        prop_assert_eq!(g.edges(), &expected[..]);
    }

    #[test]
    fn crown_detection_matches_oracle(h in graph_strategy(13)) {
        prop_assert_eq!(find_crown(&h).is_some(), crown_oracle(&h).is_some());
        for e in h.edge_ids() {
            prop_assert_eq!(find_crown_with_base(&h, e).is_some(), crown_oracle_with_base(&h, e).is_some());
        }
        if let Some(w) = find_crown(&h) {
            prop_assert!(w.validate(&h).is_ok());
        }
    }

    #[test]
    fn incremental_detection_matches_full(h in graph_strategy(13)) {
        // remove edges until crown-free, then add them back one at a time
        let mut edges = h.edges().to_vec();
        let mut removed = Vec::new();
        while find_crown(&validate_linear(&edges, h.n()).unwrap()).is_some() {
            removed.push(edges.pop().unwrap());
        }
        let mut current = validate_linear(&edges, h.n()).unwrap();
        while let Some(t) = removed.pop() {
            let next = current.with_edge(t).unwrap();
            let id = next.edge_index_of(&t).unwrap();
            let incremental = crown_through_edge(&next, id);
            prop_assert_eq!(incremental.is_some(), find_crown(&next).is_some());
            if let Some(w) = incremental {
                prop_assert!(w.validate(&next).is_ok());
                break;
            }
            current = next;
        }
    }
}
