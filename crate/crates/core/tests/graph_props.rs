mod common;

use common::*;
use proptest::prelude::*;
use wnnet::graph::{
    check_acyclicity, condense_sccs, in_component, supremacy_all, supremacy_all_with_threads,
    undirected_cycle_rank, weak_components,
};
use wnnet::model::{
    PartOfSpeech, RelationEdge, RelationFilter, RelationType, SupremacyConfig, Synset, WordnetGraph,
};

fn config(include_self: bool) -> SupremacyConfig {
    SupremacyConfig {
        include_self,
        ..SupremacyConfig::default()
    }
}

fn arb_graph() -> impl Strategy<Value = (usize, Vec<(usize, usize)>)> {
    (1usize..40).prop_flat_map(|n| (Just(n), prop::collection::vec((0..n, 0..n), 0..(3 * n))))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn supremacy_matches_reverse_bfs((n, edges) in arb_graph(), include_self in any::<bool>()) {
        let g = hypernym_graph("eng", n, &edges);
        let table = supremacy_all(&g, &config(include_self));
        let oracle = reverse_bfs_supremacy(n, &edges, include_self);
        prop_assert_eq!(table.values, oracle);
    }

    #[test]
    fn self_inclusion_adds_exactly_one((n, edges) in arb_graph()) {
        let g = hypernym_graph("eng", n, &edges);
        let with = supremacy_all(&g, &config(true));
        let without = supremacy_all(&g, &config(false));
        for (a, b) in with.values.iter().zip(&without.values) {
            prop_assert_eq!(*a, b + 1);
        }
    }

    #[test]
    fn adding_an_edge_never_lowers_supremacy((n, edges) in arb_graph(), extra in (0usize..40, 0usize..40)) {
        let (s, t) = (extra.0 % n, extra.1 % n);
        let before = supremacy_all(&hypernym_graph("eng", n, &edges), &config(true));
        let mut more = edges.clone();
        more.push((s, t));
        let after = supremacy_all(&hypernym_graph("eng", n, &more), &config(true));
        for (b, a) in before.values.iter().zip(&after.values) {
            prop_assert!(a >= b);
        }
    }

    #[test]
    fn relabeling_permutes_supremacy((n, edges) in arb_graph(), shift in 0usize..1000) {
        let perm = |i: usize| (i * 7 + shift) % n;
        // 7 is coprime to n unless n is a multiple of 7
        prop_assume!(n % 7 != 0);
        let g = hypernym_graph("eng", n, &edges);
        let relabeled: Vec<(usize, usize)> = edges.iter().map(|&(s, t)| (perm(s), perm(t))).collect();
        let h = hypernym_graph("eng", n, &relabeled);
        let a = supremacy_all(&g, &config(true));
        let b = supremacy_all(&h, &config(true));
        for i in 0..n {
            prop_assert_eq!(a.get(&node_id(i)), b.get(&node_id(perm(i))));
        }
    }

    #[test]
    fn components_partition_the_synsets((n, edges) in arb_graph()) {
        let g = hypernym_graph("eng", n, &edges);
        let report = weak_components(&g, &RelationFilter::hyperonymy());
        prop_assert_eq!(report.component_sizes.iter().sum::<usize>(), n);
        prop_assert_eq!(report.component_of.len(), n);
        for (i, &c) in report.component_of.iter().enumerate() {
            prop_assert!((c as usize) < report.count(), "node {} in component {}", i, c);
        }
        for &(s, t) in &edges {
            prop_assert_eq!(report.component_of[s], report.component_of[t]);
        }
        // cycle rank E - V + C over distinct undirected pairs
        let mut pairs: Vec<(usize, usize)> = edges.iter().filter(|(s, t)| s != t).map(|&(s, t)| (s.min(t), s.max(t))).collect();
        pairs.sort_unstable();
        pairs.dedup();
        prop_assert_eq!(
            undirected_cycle_rank(&g, &RelationFilter::hyperonymy()),
            pairs.len() + report.count() - n
        );
    }

    #[test]
    fn largest_share_grows_with_more_relation_types((n, hyper) in arb_graph(), mero in prop::collection::vec((0usize..40, 0usize..40), 0..30)) {
        let mut edges: Vec<RelationEdge> = hyper
            .iter()
            .map(|&(s, t)| RelationEdge::new(node_id(s), node_id(t), RelationType::Hypernym))
            .collect();
        edges.extend(mero.iter().map(|&(s, t)| {
            RelationEdge::new(node_id(s % n), node_id(t % n), RelationType::Meronym)
        }));
        let g = WordnetGraph::new(
            "eng",
            (0..n).map(|i| Synset::from_lemmas(node_id(i), PartOfSpeech::Noun, ["w"], None)).collect(),
            edges,
        );
        let hyper_only = weak_components(&g, &RelationFilter::hyperonymy());
        let all = weak_components(&g, &RelationFilter::All);
        prop_assert!(all.largest_share() >= hyper_only.largest_share());
        prop_assert!(all.count() <= hyper_only.count());
    }

    #[test]
    fn in_component_size_equals_supremacy((n, edges) in arb_graph(), pick in 0usize..40) {
        let g = hypernym_graph("eng", n, &edges);
        let id = node_id(pick % n);
        let table = supremacy_all(&g, &config(true));
        let sub = in_component(&g, &id, &config(true)).unwrap();
        prop_assert_eq!(sub.node_count() as u64, table.get(&id).unwrap());
        prop_assert!(sub.contains(&id));
        let without = in_component(&g, &id, &config(false)).unwrap();
        prop_assert_eq!(without.node_count() as u64 + 1, table.get(&id).unwrap());
    }

    #[test]
    fn condensation_is_a_dag((n, edges) in arb_graph()) {
        let g = hypernym_graph("eng", n, &edges);
        let c = condense_sccs(&g, &RelationFilter::hyperonymy());
        prop_assert_eq!(c.member_counts.iter().sum::<u32>() as usize, n);
        let order = c.topological_order();
        prop_assert!(order.is_some());
        let order = order.unwrap();
        let mut position = vec![0usize; c.scc_count()];
        for (i, &s) in order.iter().enumerate() {
            position[s as usize] = i;
        }
        for &(a, b) in &c.edges {
            prop_assert!(position[a as usize] < position[b as usize]);
        }
        let acyclic = check_acyclicity(&g, &RelationFilter::hyperonymy()).acyclic;
        prop_assert_eq!(acyclic, c.scc_count() == n);
    }
}

#[test]
fn thread_count_does_not_change_supremacy() {
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
    let edges = random_digraph(&mut rng, 3000, 6000, false);
    let g = hypernym_graph("eng", 3000, &edges);
    let one = supremacy_all_with_threads(&g, &config(true), 1).unwrap();
    for threads in [2, 3, 8] {
        assert_eq!(
            one,
            supremacy_all_with_threads(&g, &config(true), threads).unwrap()
        );
    }
}

#[test]
fn crossing_hierarchy_values() {
    let (g, expected) = crossing_hierarchy();
    let table = supremacy_all(&g, &SupremacyConfig::default());
    for (id, s) in expected {
        assert_eq!(table.get(id), Some(s), "{id}");
    }
    assert_eq!(g.incoming("A").len(), 1);
    assert_eq!(g.incoming("B").len(), 2);
}

#[test]
fn meronyms_point_from_part_to_whole() {
    // car has part wheel; spoke is part of wheel
    let g = WordnetGraph::new(
        "eng",
        vec![
            synset("car", &["car"]),
            synset("wheel", &["wheel"]),
            synset("spoke", &["spoke"]),
        ],
        vec![
            RelationEdge::new("car", "wheel", RelationType::Meronym),
            RelationEdge::new("spoke", "wheel", RelationType::Holonym),
        ],
    );
    let cfg = SupremacyConfig {
        relation_types: RelationFilter::only([RelationType::Meronym, RelationType::Holonym])
            .unwrap(),
        ..SupremacyConfig::default()
    };
    let t = supremacy_all(&g, &cfg);
    assert_eq!(t.get("car"), Some(3));
    assert_eq!(t.get("wheel"), Some(2));
    assert_eq!(t.get("spoke"), Some(1));
}
