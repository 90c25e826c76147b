#![allow(dead_code)]

use std::collections::{BTreeSet, VecDeque};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use wnnet::model::{
    InterlingualLink, LinkType, PartOfSpeech, RelationEdge, RelationType, Synset, WordnetGraph,
};

pub fn node_id(i: usize) -> String {
    format!("n{i:06}")
}

pub fn synset(id: &str, lemmas: &[&str]) -> Synset {
    Synset::from_lemmas(id, PartOfSpeech::Noun, lemmas.iter().copied(), None)
}

/// Nodes `n000000..` with one lemma each and hypernym edges `child -> parent`.
pub fn hypernym_graph(tag: &str, n: usize, edges: &[(usize, usize)]) -> WordnetGraph {
    WordnetGraph::new(
        tag,
        (0..n)
            .map(|i| synset(&node_id(i), &[&format!("w{i}")]))
            .collect(),
        edges
            .iter()
            .map(|&(s, t)| RelationEdge::new(node_id(s), node_id(t), RelationType::Hypernym))
            .collect(),
    )
}

/// Graph over named nodes with hypernym edges `child -> parent`.
pub fn named_graph(tag: &str, nodes: &[&str], edges: &[(&str, &str)]) -> WordnetGraph {
    WordnetGraph::new(
        tag,
        nodes.iter().map(|id| synset(id, &[id])).collect(),
        edges
            .iter()
            .map(|(s, t)| RelationEdge::new(*s, *t, RelationType::Hypernym))
            .collect(),
    )
}

/// Reference supremacy: breadth-first search backwards from every node over
/// the arcs `edges` (child -> parent), counting distinct reachers.
pub fn reverse_bfs_supremacy(n: usize, edges: &[(usize, usize)], include_self: bool) -> Vec<u64> {
    let mut parents_of: Vec<Vec<usize>> = vec![Vec::new(); n];
    for &(s, t) in edges {
        if s != t {
            parents_of[t].push(s);
        }
    }
    (0..n)
        .map(|v| {
            let mut seen = vec![false; n];
            seen[v] = true;
            let mut queue = VecDeque::from([v]);
            let mut count = 0u64;
            while let Some(x) = queue.pop_front() {
                for &u in &parents_of[x] {
                    if !seen[u] {
                        seen[u] = true;
                        count += 1;
                        queue.push_back(u);
                    }
                }
            }
            count + include_self as u64
        })
        .collect()
}

/// Random digraph with `m` arcs. With `acyclic`, arcs always point from a
/// higher to a lower index.
pub fn random_digraph(
    rng: &mut impl Rng,
    n: usize,
    m: usize,
    acyclic: bool,
) -> Vec<(usize, usize)> {
    let mut edges = BTreeSet::new();
    let mut attempts = 0;
    while edges.len() < m && attempts < m * 20 {
        attempts += 1;
        let a = rng.gen_range(0..n);
        let b = rng.gen_range(0..n);
        if a == b {
            continue;
        }
        let e = if acyclic {
            (a.max(b), a.min(b))
        } else {
            (a, b)
        };
        edges.insert(e);
    }
    edges.into_iter().collect()
}

/// Random forest: every node but the first few gets one parent of smaller index.
pub fn random_forest(rng: &mut impl Rng, n: usize, roots: usize) -> Vec<(usize, usize)> {
    (roots..n).map(|i| (i, rng.gen_range(0..i))).collect()
}

/// Toy two-layer network: random forests on both sides plus `links` random
/// i-synonymy links.
pub fn toy_bilayer(
    seed: u64,
    n_a: usize,
    n_b: usize,
    links: usize,
) -> (WordnetGraph, WordnetGraph, Vec<InterlingualLink>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let a = hypernym_graph("aaa", n_a, &random_forest(&mut rng, n_a, 3));
    let b = hypernym_graph("bbb", n_b, &random_forest(&mut rng, n_b, 3));
    let l = (0..links)
        .map(|_| {
            InterlingualLink::new(
                node_id(rng.gen_range(0..n_a)),
                node_id(rng.gen_range(0..n_b)),
                LinkType::ISynonymy,
            )
        })
        .collect();
    (a, b, l)
}

/// Hierarchy with named hand-computed supremacies:
///
/// ```text
///        T            X
///      /   \        /   \
///     A     B      H     Y
///     |    / \
///     C   G   H
///   / | \
///  D  E  F
/// ```
///
/// `A` has one direct child but supremacy 5; `B` has two but supremacy 3.
pub fn crossing_hierarchy() -> (WordnetGraph, Vec<(&'static str, u64)>) {
    let nodes = ["A", "B", "C", "D", "E", "F", "G", "H", "T", "X", "Y"];
    let edges = [
        ("C", "A"),
        ("D", "C"),
        ("E", "C"),
        ("F", "C"),
        ("A", "T"),
        ("G", "B"),
        ("H", "B"),
        ("B", "T"),
        ("H", "X"),
        ("Y", "X"),
    ];
    let expected = vec![
        ("A", 5),
        ("B", 3),
        ("C", 4),
        ("D", 1),
        ("E", 1),
        ("F", 1),
        ("G", 1),
        ("H", 1),
        ("T", 9),
        ("X", 3),
        ("Y", 1),
    ];
    (named_graph("eng", &nodes, &edges), expected)
}

/// A star: `leaves` children pointing at one root, so the root's supremacy
/// is `leaves + 1`.
pub fn star_edges(root: &str, prefix: &str, leaves: usize) -> (Vec<String>, Vec<(String, String)>) {
    let mut nodes = vec![root.to_string()];
    let mut edges = Vec::new();
    for i in 0..leaves {
        let leaf = format!("{prefix}{i:05}");
        edges.push((leaf.clone(), root.to_string()));
        nodes.push(leaf);
    }
    (nodes, edges)
}

/// Two layers where `wiedza` (supremacy 39) is linked to `cognition`
/// (supremacy 4380), and `publikacja` (141) to `publication` (140).
pub fn knowledge_mismatch_layers() -> (WordnetGraph, WordnetGraph, Vec<InterlingualLink>) {
    let build = |tag: &str, stars: &[(&str, &str, usize)]| {
        let mut synsets = Vec::new();
        let mut edges = Vec::new();
        for (root, prefix, leaves) in stars {
            let (n, e) = star_edges(root, prefix, *leaves);
            for id in &n {
                let lemma = if id == root {
                    root.to_string()
                } else {
                    format!("x{id}")
                };
                synsets.push(synset(id, &[&lemma]));
            }
            edges.extend(
                e.into_iter()
                    .map(|(s, t)| RelationEdge::new(s, t, RelationType::Hypernym)),
            );
        }
        WordnetGraph::new(tag, synsets, edges)
    };
    let pol = build("pol", &[("wiedza", "pw", 38), ("publikacja", "pp", 140)]);
    let mut eng = build(
        "eng",
        &[("cognition", "ec", 4379), ("publication", "ep", 139)],
    );
    // give the English root a second lemma
    let synsets: Vec<Synset> = eng
        .synsets()
        .iter()
        .map(|s| {
            if s.id == "cognition" {
                synset("cognition", &["cognition", "knowledge"])
            } else {
                s.clone()
            }
        })
        .collect();
    eng = WordnetGraph::new("eng", synsets, eng.edges().to_vec());
    let links = vec![
        InterlingualLink::new("wiedza", "cognition", LinkType::ISynonymy),
        InterlingualLink::new("publikacja", "publication", LinkType::ISynonymy),
        InterlingualLink::new("pw00000", "ec00000", LinkType::ISynonymy),
    ];
    (pol, eng, links)
}
