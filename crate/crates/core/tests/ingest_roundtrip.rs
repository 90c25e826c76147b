mod common;

use std::collections::BTreeSet;
use std::fs;

use common::*;
use proptest::prelude::*;
use wnnet::bilayer::build_bilayer;
use wnnet::ingest::{
    export_generic_tsv, parse_generic_tsv, parse_ilinks_tsv, GenericTsvBundle, IngestError,
};
use wnnet::model::{
    validate_graph, InterlingualLink, LinkType, PartOfSpeech, RelationEdge, RelationType, Synset,
    WordnetGraph,
};

fn arb_relation() -> impl Strategy<Value = RelationType> {
    prop_oneof![
        Just(RelationType::Hypernym),
        Just(RelationType::Meronym),
        Just(RelationType::Holonym),
        Just(RelationType::Antonym),
        Just(RelationType::Other("similar".into())),
    ]
}

fn arb_pos() -> impl Strategy<Value = PartOfSpeech> {
    prop::sample::select(PartOfSpeech::ALL.to_vec())
}

fn arb_wordnet() -> impl Strategy<Value = WordnetGraph> {
    (1usize..30).prop_flat_map(|n| {
        let synsets = prop::collection::vec(
            (
                arb_pos(),
                prop::collection::vec("[a-z]{1,6}( [a-z]{1,4})?", 1..4),
                prop::option::of("[a-z]{1,8}( [a-z]{1,5}){0,2}"),
            ),
            n,
        );
        let edges = prop::collection::btree_set((0..n, 0..n, arb_relation()), 0..(2 * n));
        (synsets, edges).prop_map(move |(synsets, edges)| {
            let synsets = synsets
                .into_iter()
                .enumerate()
                .map(|(i, (pos, lemmas, gloss))| {
                    Synset::from_lemmas(node_id(i), pos, lemmas.iter().map(String::as_str), gloss)
                })
                .collect();
            let edges = edges
                .into_iter()
                .filter(|(s, t, _)| s != t)
                .map(|(s, t, r)| RelationEdge::new(node_id(s), node_id(t), r))
                .collect();
            WordnetGraph::new("xyz", synsets, edges)
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn export_then_parse_is_identity(g in arb_wordnet(), links in prop::collection::vec((0usize..30, 0usize..30), 0..10)) {
        let dir = tempfile::tempdir().unwrap();
        let links: Vec<InterlingualLink> = links
            .into_iter()
            .map(|(s, t)| InterlingualLink::new(node_id(s), format!("e{t}"), LinkType::ISynonymy))
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        export_generic_tsv(&g, Some(&links), dir.path()).unwrap();
        let loaded = parse_generic_tsv(&GenericTsvBundle::in_directory("xyz", dir.path())).unwrap();
        prop_assert!(validate_graph(&loaded.graph).is_valid());
        prop_assert_eq!(&loaded.graph, &g);
        prop_assert_eq!(loaded.links.unwrap(), links);

        // exporting again produces the same bytes
        let again = tempfile::tempdir().unwrap();
        export_generic_tsv(&loaded.graph, None, again.path()).unwrap();
        for name in ["synsets.tsv", "relations.tsv"] {
            prop_assert_eq!(
                fs::read(dir.path().join(name)).unwrap(),
                fs::read(again.path().join(name)).unwrap()
            );
        }
    }
}

#[test]
fn hyponym_rows_are_stored_as_hypernyms() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(
        dir.path().join("synsets.tsv"),
        "id\tpos\tlexemes\tgloss\na\tn\tanimal\t\nb\tn\tdog|domestic_dog\ta pet\n",
    )
    .unwrap();
    fs::write(
        dir.path().join("relations.tsv"),
        "source\ttarget\ttype\na\tb\thyponym\nb\ta\thypernym\nb\tb\tantonym\n",
    )
    .unwrap();
    let loaded = parse_generic_tsv(&GenericTsvBundle::in_directory("eng", dir.path())).unwrap();
    assert_eq!(
        loaded.graph.edges(),
        [RelationEdge::new("b", "a", RelationType::Hypernym)]
    );
    assert_eq!(loaded.report.duplicate_edges, 1);
    assert_eq!(loaded.report.self_loops, 1);
    let lemmas: Vec<&str> = loaded
        .graph
        .synset("b")
        .unwrap()
        .lexemes
        .iter()
        .map(|l| l.lemma.as_str())
        .collect();
    assert_eq!(lemmas, ["dog", "domestic dog"]);
}

#[test]
fn errors_name_file_and_line() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(
        dir.path().join("synsets.tsv"),
        "id\tpos\tlexemes\tgloss\na\tn\tanimal\t\nb\tn\tdog\t\n",
    )
    .unwrap();
    fs::write(
        dir.path().join("relations.tsv"),
        "source\ttarget\ttype\nb\ta\thypernym\nb\tzebra\thypernym\n",
    )
    .unwrap();
    let err = parse_generic_tsv(&GenericTsvBundle::in_directory("eng", dir.path())).unwrap_err();
    let IngestError::Parse(p) = &err else {
        panic!("{err}")
    };
    assert_eq!(p.line, 3);
    assert!(p.file.ends_with("relations.tsv"));
    assert!(p.message.contains("zebra"));

    fs::remove_file(dir.path().join("relations.tsv")).unwrap();
    let err = parse_generic_tsv(&GenericTsvBundle::in_directory("eng", dir.path())).unwrap_err();
    assert!(matches!(err, IngestError::NotFound { .. }));
}

#[test]
fn large_synthetic_layers_keep_every_link() {
    let (n_a, n_b, n_links) = (117_659usize, 116_319usize, 13_336usize);
    let pol = hypernym_graph("pol", n_a, &[]);
    let eng = hypernym_graph("eng", n_b, &[]);
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("ilinks.tsv");
    let mut body = String::from("source\ttarget\ttype\n");
    for i in 0..n_links {
        body.push_str(&format!(
            "{}\t{}\ti_synonymy\n",
            node_id(i * 8),
            node_id(i * 8 + 3)
        ));
    }
    fs::write(&path, body).unwrap();
    let links = parse_ilinks_tsv(&path).unwrap();
    assert_eq!(links.unknown_tags, 0);
    let built = build_bilayer(pol, eng, links.links).unwrap();
    assert_eq!(built.network.layer_a.node_count(), n_a);
    assert_eq!(built.network.layer_b.node_count(), n_b);
    assert_eq!(built.network.links.len(), n_links);
    assert_eq!(built.dropped_links, 0);
}
