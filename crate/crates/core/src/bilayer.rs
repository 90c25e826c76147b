//! Two wordnet layers joined by inter-lingual links, and the null-model
//! comparison of linked synsets' supremacies.
//!
//! For a link type, `L(s_a, s_b)` counts links whose endpoints have
//! supremacies in the log bins of `s_a` and `s_b`. Under random placement of
//! the same number of links `L`, the expected count is
//! `L0(s_a, s_b) = p_a(s_a) * p_b(s_b) * L`, where `p` is the fraction of a
//! layer's synsets in that bin. The matrix reports `R = log10(L / L0)`.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::graph::{supremacy_all_with_threads, with_threads, GraphError, SupremacyTable};
use crate::model::{BilayerNetwork, InterlingualLink, LinkType, SupremacyConfig, WordnetGraph};
use crate::stats::{bin_index, from_bin_counts, log_bin_counts, BinnedDistribution, StatsError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BilayerError {
    #[error("both layers carry the language tag {0:?}")]
    IdenticalLayerTags(String),
    #[error("no links of the requested type")]
    EmptyPairSet,
    #[error("supremacy pairs need self-inclusive supremacy on both layers")]
    SelfExclusiveConfig,
    #[error("at least one trial is required")]
    NoTrials,
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Stats(#[from] StatsError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BuildOutcome {
    pub network: BilayerNetwork,
    /// Links dropped because an endpoint does not exist in its layer.
    pub dropped_links: usize,
}

pub fn build_bilayer(
    layer_a: WordnetGraph,
    layer_b: WordnetGraph,
    links: Vec<InterlingualLink>,
) -> Result<BuildOutcome, BilayerError> {
    if layer_a.language_tag() == layer_b.language_tag() {
        return Err(BilayerError::IdenticalLayerTags(
            layer_a.language_tag().to_string(),
        ));
    }
    let before = links.len();
    let links: Vec<InterlingualLink> = links
        .into_iter()
        .filter(|l| layer_a.contains(&l.source_id) && layer_b.contains(&l.target_id))
        .collect();
    Ok(BuildOutcome {
        dropped_links: before - links.len(),
        network: BilayerNetwork {
            layer_a,
            layer_b,
            links,
        },
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SupremacyPair {
    pub link: InterlingualLink,
    pub s_source: u64,
    pub s_target: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SupremacyPairSet {
    pub link_type: LinkType,
    /// Sorted by `(source id, target id)`.
    pub pairs: Vec<SupremacyPair>,
    pub table_a: SupremacyTable,
    pub table_b: SupremacyTable,
}

impl SupremacyPairSet {
    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// The same pairs with the two layers' roles exchanged.
    pub fn swapped(&self) -> SupremacyPairSet {
        let mut pairs: Vec<SupremacyPair> = self
            .pairs
            .iter()
            .map(|p| SupremacyPair {
                link: InterlingualLink::new(
                    p.link.target_id.clone(),
                    p.link.source_id.clone(),
                    p.link.link_type.clone(),
                ),
                s_source: p.s_target,
                s_target: p.s_source,
            })
            .collect();
        sort_pairs(&mut pairs);
        SupremacyPairSet {
            link_type: self.link_type.clone(),
            pairs,
            table_a: self.table_b.clone(),
            table_b: self.table_a.clone(),
        }
    }
}

fn sort_pairs(pairs: &mut [SupremacyPair]) {
    pairs.sort_by(|x, y| {
        (&x.link.source_id, &x.link.target_id).cmp(&(&y.link.source_id, &y.link.target_id))
    });
}

pub fn supremacy_pairs(
    network: &BilayerNetwork,
    link_type: &LinkType,
    config_a: &SupremacyConfig,
    config_b: &SupremacyConfig,
) -> Result<SupremacyPairSet, BilayerError> {
    supremacy_pairs_with_threads(network, link_type, config_a, config_b, 0)
}

pub fn supremacy_pairs_with_threads(
    network: &BilayerNetwork,
    link_type: &LinkType,
    config_a: &SupremacyConfig,
    config_b: &SupremacyConfig,
    threads: usize,
) -> Result<SupremacyPairSet, BilayerError> {
    if !config_a.include_self || !config_b.include_self {
        return Err(BilayerError::SelfExclusiveConfig);
    }
    let table_a = supremacy_all_with_threads(&network.layer_a, config_a, threads)?;
    let table_b = supremacy_all_with_threads(&network.layer_b, config_b, threads)?;
    let mut pairs: Vec<SupremacyPair> = network
        .links
        .iter()
        .filter(|l| &l.link_type == link_type)
        .filter_map(|l| {
            Some(SupremacyPair {
                s_source: table_a.get(&l.source_id)?,
                s_target: table_b.get(&l.target_id)?,
                link: l.clone(),
            })
        })
        .collect();
    sort_pairs(&mut pairs);
    Ok(SupremacyPairSet {
        link_type: link_type.clone(),
        pairs,
        table_a,
        table_b,
    })
}

/// Where the bin probabilities `p(s)` come from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Marginals {
    /// All synsets of each layer.
    #[default]
    AllSynsets,
    /// Only the link endpoints, one entry per link.
    LinkedOnly,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RCell {
    pub a_bin: i64,
    pub b_bin: i64,
    pub observed: u64,
    pub expected: f64,
    /// `log10(observed / expected)`; `None` when either is zero.
    pub ratio: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RMatrix {
    pub axis_a: BinnedDistribution,
    pub axis_b: BinnedDistribution,
    pub links: u64,
    pub marginals: Marginals,
    /// Row-major: all `b` bins for the first `a` bin, then the next.
    pub cells: Vec<RCell>,
}

impl RMatrix {
    pub fn cell(&self, a_bin: i64, b_bin: i64) -> Option<&RCell> {
        let ia = usize::try_from(a_bin - self.axis_a.bins.first()?.index).ok()?;
        let ib = usize::try_from(b_bin - self.axis_b.bins.first()?.index).ok()?;
        if ia >= self.axis_a.bins.len() || ib >= self.axis_b.bins.len() {
            return None;
        }
        self.cells.get(ia * self.axis_b.bins.len() + ib)
    }

    pub fn observed_total(&self) -> u64 {
        self.cells.iter().map(|c| c.observed).sum()
    }

    pub fn expected_total(&self) -> f64 {
        self.cells.iter().map(|c| c.expected).sum()
    }

    pub fn transposed(&self) -> RMatrix {
        let mut cells = Vec::with_capacity(self.cells.len());
        let (na, nb) = (self.axis_a.bins.len(), self.axis_b.bins.len());
        for ib in 0..nb {
            for ia in 0..na {
                let c = &self.cells[ia * nb + ib];
                cells.push(RCell {
                    a_bin: c.b_bin,
                    b_bin: c.a_bin,
                    ..c.clone()
                });
            }
        }
        RMatrix {
            axis_a: self.axis_b.clone(),
            axis_b: self.axis_a.clone(),
            links: self.links,
            marginals: self.marginals,
            cells,
        }
    }
}

pub const DEFAULT_BINS_PER_DECADE: u32 = 5;

pub fn null_model_matrix(
    pairs: &SupremacyPairSet,
    bins_per_decade: u32,
    marginals: Marginals,
) -> Result<RMatrix, BilayerError> {
    if pairs.is_empty() {
        return Err(BilayerError::EmptyPairSet);
    }
    let (axis_a, axis_b) = match marginals {
        Marginals::AllSynsets => (
            log_bin_counts(&pairs.table_a.values, bins_per_decade)?,
            log_bin_counts(&pairs.table_b.values, bins_per_decade)?,
        ),
        Marginals::LinkedOnly => {
            let a: Vec<u64> = pairs.pairs.iter().map(|p| p.s_source).collect();
            let b: Vec<u64> = pairs.pairs.iter().map(|p| p.s_target).collect();
            (
                log_bin_counts(&a, bins_per_decade)?,
                log_bin_counts(&b, bins_per_decade)?,
            )
        }
    };

    let mut observed: BTreeMap<(i64, i64), u64> = BTreeMap::new();
    for p in &pairs.pairs {
        let key = (
            bin_index(p.s_source as f64, bins_per_decade),
            bin_index(p.s_target as f64, bins_per_decade),
        );
        *observed.entry(key).or_insert(0) += 1;
    }

    let links = pairs.len() as u64;
    let total_a = axis_a.total as f64;
    let total_b = axis_b.total as f64;
    let mut cells = Vec::with_capacity(axis_a.bins.len() * axis_b.bins.len());
    for bin_a in &axis_a.bins {
        let p_a = bin_a.count as f64 / total_a;
        for bin_b in &axis_b.bins {
            let p_b = bin_b.count as f64 / total_b;
            let expected = p_a * p_b * links as f64;
            let count = observed
                .get(&(bin_a.index, bin_b.index))
                .copied()
                .unwrap_or(0);
            let ratio = (count > 0 && expected > 0.0).then(|| (count as f64 / expected).log10());
            cells.push(RCell {
                a_bin: bin_a.index,
                b_bin: bin_b.index,
                observed: count,
                expected,
                ratio,
            });
        }
    }
    Ok(RMatrix {
        axis_a,
        axis_b,
        links,
        marginals,
        cells,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct McCell {
    pub a_bin: i64,
    pub b_bin: i64,
    pub mean: f64,
    /// Sample standard deviation across trials (0 for a single trial).
    pub std_dev: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MonteCarloNull {
    pub trials: u64,
    pub links: u64,
    pub seed: u64,
    /// Same layout as an all-synsets [`RMatrix`] built from the same pairs.
    pub cells: Vec<McCell>,
}

impl MonteCarloNull {
    pub fn cell(&self, a_bin: i64, b_bin: i64) -> Option<&McCell> {
        self.cells
            .iter()
            .find(|c| c.a_bin == a_bin && c.b_bin == b_bin)
    }
}

/// Per-trial random stream: ChaCha8 keyed by the seed, stream = trial index.
fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// Randomized null model: every trial places the same number of links with
/// both endpoints drawn uniformly from each layer's synsets, then counts the
/// links per supremacy cell.
pub fn monte_carlo_null(
    pairs: &SupremacyPairSet,
    bins_per_decade: u32,
    trials: u64,
    seed: u64,
    threads: usize,
) -> Result<MonteCarloNull, BilayerError> {
    if trials == 0 {
        return Err(BilayerError::NoTrials);
    }
    let bins_of = |table: &SupremacyTable| -> Result<(Vec<u32>, BinnedDistribution), BilayerError> {
        let mut counts: BTreeMap<i64, u64> = BTreeMap::new();
        let raw: Vec<i64> = table
            .values
            .iter()
            .map(|&s| {
                if s == 0 {
                    return Err(BilayerError::SelfExclusiveConfig);
                }
                let k = bin_index(s as f64, bins_per_decade);
                *counts.entry(k).or_insert(0) += 1;
                Ok(k)
            })
            .collect::<Result<_, _>>()?;
        let axis = from_bin_counts(&counts, bins_per_decade);
        let first = axis.bins.first().map_or(0, |b| b.index);
        Ok((raw.into_iter().map(|k| (k - first) as u32).collect(), axis))
    };
    let (slot_a, axis_a) = bins_of(&pairs.table_a)?;
    let (slot_b, axis_b) = bins_of(&pairs.table_b)?;
    let (na, nb) = (axis_a.bins.len(), axis_b.bins.len());
    let links = pairs.len() as u64;

    let run = || {
        (0..trials)
            .into_par_iter()
            .fold(
                || {
                    (
                        vec![0u64; na * nb],
                        vec![0u128; na * nb],
                        vec![0u32; na * nb],
                    )
                },
                |(mut sum, mut sum_sq, mut grid), trial| {
                    grid.iter_mut().for_each(|g| *g = 0);
                    let mut rng = trial_rng(seed, trial);
                    for _ in 0..links {
                        let a = slot_a[rng.gen_range(0..slot_a.len())] as usize;
                        let b = slot_b[rng.gen_range(0..slot_b.len())] as usize;
                        grid[a * nb + b] += 1;
                    }
                    for (i, &g) in grid.iter().enumerate() {
                        sum[i] += g as u64;
                        sum_sq[i] += (g as u128) * (g as u128);
                    }
                    (sum, sum_sq, grid)
                },
            )
            .map(|(sum, sum_sq, _)| (sum, sum_sq))
            .reduce(
                || (vec![0u64; na * nb], vec![0u128; na * nb]),
                |(mut s1, mut q1), (s2, q2)| {
                    s1.iter_mut().zip(s2).for_each(|(x, y)| *x += y);
                    q1.iter_mut().zip(q2).for_each(|(x, y)| *x += y);
                    (s1, q1)
                },
            )
    };
    let (sum, sum_sq) = if links == 0 || slot_a.is_empty() || slot_b.is_empty() {
        (vec![0u64; na * nb], vec![0u128; na * nb])
    } else {
        with_threads(threads, run)?
    };

    let n = trials as u128;
    let mut cells = Vec::with_capacity(na * nb);
    for (ia, bin_a) in axis_a.bins.iter().enumerate() {
        for (ib, bin_b) in axis_b.bins.iter().enumerate() {
            let i = ia * nb + ib;
            let s = sum[i] as u128;
            // n * sum_sq - sum^2 is exact in integers
            let spread = n * sum_sq[i] - s * s;
            let std_dev = if trials > 1 {
                (spread as f64 / (n * (n - 1)) as f64).sqrt()
            } else {
                0.0
            };
            cells.push(McCell {
                a_bin: bin_a.index,
                b_bin: bin_b.index,
                mean: sum[i] as f64 / trials as f64,
                std_dev,
            });
        }
    }
    Ok(MonteCarloNull {
        trials,
        links,
        seed,
        cells,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct MismatchRecord {
    pub source_id: String,
    pub source_lexemes: Vec<String>,
    pub target_id: String,
    pub target_lexemes: Vec<String>,
    pub s_source: u64,
    pub s_target: u64,
    /// `|log10(s_source / s_target)|`.
    pub score: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MismatchReport {
    pub threshold: f64,
    /// Descending by score, ties by `(source id, target id)`.
    pub records: Vec<MismatchRecord>,
}

pub const DEFAULT_MISMATCH_THRESHOLD: f64 = 2.0;

pub fn mismatch_score(s_source: u64, s_target: u64) -> f64 {
    ((s_source as f64).log10() - (s_target as f64).log10()).abs()
}

/// Links whose endpoint supremacies differ by at least `threshold` orders of
/// magnitude.
pub fn mismatch_report(
    network: &BilayerNetwork,
    pairs: &SupremacyPairSet,
    threshold: f64,
) -> MismatchReport {
    let lexemes = |graph: &WordnetGraph, id: &str| -> Vec<String> {
        graph
            .synset(id)
            .map(|s| s.lexemes.iter().map(|l| l.lemma.clone()).collect())
            .unwrap_or_default()
    };
    let mut records: Vec<MismatchRecord> = pairs
        .pairs
        .iter()
        .map(|p| (p, mismatch_score(p.s_source, p.s_target)))
        .filter(|(_, score)| *score >= threshold)
        .map(|(p, score)| MismatchRecord {
            source_id: p.link.source_id.clone(),
            source_lexemes: lexemes(&network.layer_a, &p.link.source_id),
            target_id: p.link.target_id.clone(),
            target_lexemes: lexemes(&network.layer_b, &p.link.target_id),
            s_source: p.s_source,
            s_target: p.s_target,
            score,
        })
        .collect();
    records.sort_by(|x, y| {
        y.score
            .partial_cmp(&x.score)
            .unwrap_or(Ordering::Equal)
            .then_with(|| (&x.source_id, &x.target_id).cmp(&(&y.source_id, &y.target_id)))
    });
    MismatchReport { threshold, records }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{PartOfSpeech, RelationEdge, RelationType, Synset};

    fn layer(tag: &str, nodes: &[&str], edges: &[(&str, &str)]) -> WordnetGraph {
        WordnetGraph::new(
            tag,
            nodes
                .iter()
                .map(|id| Synset::from_lemmas(*id, PartOfSpeech::Noun, [*id], None))
                .collect(),
            edges
                .iter()
                .map(|(s, t)| RelationEdge::new(*s, *t, RelationType::Hypernym))
                .collect(),
        )
    }

    fn syn(s: &str, t: &str) -> InterlingualLink {
        InterlingualLink::new(s, t, LinkType::ISynonymy)
    }

    fn pairs_of(net: &BilayerNetwork) -> SupremacyPairSet {
        let c = SupremacyConfig::default();
        supremacy_pairs(net, &LinkType::ISynonymy, &c, &c).unwrap()
    }

    #[test]
    fn build_keeps_resolvable_links() {
        let out = build_bilayer(
            layer("pol", &["p1", "p2"], &[]),
            layer("eng", &["e1", "e2"], &[]),
            vec![syn("p1", "e1")],
        )
        .unwrap();
        assert_eq!(out.network.links.len(), 1);
        assert_eq!(out.dropped_links, 0);

        let out = build_bilayer(
            layer("pol", &["p1"], &[]),
            layer("eng", &["e1"], &[]),
            vec![syn("p1", "e9")],
        )
        .unwrap();
        assert_eq!((out.network.links.len(), out.dropped_links), (0, 1));
    }

    #[test]
    fn identical_tags_are_rejected() {
        let err = build_bilayer(layer("eng", &[], &[]), layer("eng", &[], &[]), vec![]);
        assert_eq!(err, Err(BilayerError::IdenticalLayerTags("eng".into())));
    }

    #[test]
    fn pairs_for_isolated_and_chained_nodes() {
        let net = build_bilayer(
            layer("pol", &["p"], &[]),
            layer("eng", &["e"], &[]),
            vec![syn("p", "e")],
        )
        .unwrap()
        .network;
        let pairs = pairs_of(&net);
        assert_eq!((pairs.pairs[0].s_source, pairs.pairs[0].s_target), (1, 1));

        let net = build_bilayer(
            layer("pol", &["a", "b"], &[("a", "b")]),
            layer("eng", &["x", "y"], &[("x", "y")]),
            vec![
                syn("b", "y"),
                InterlingualLink::new("a", "x", LinkType::IHyponymy),
            ],
        )
        .unwrap()
        .network;
        let pairs = pairs_of(&net);
        assert_eq!(pairs.len(), 1);
        assert_eq!((pairs.pairs[0].s_source, pairs.pairs[0].s_target), (2, 2));
    }

    #[test]
    fn self_exclusive_config_is_rejected() {
        let net = build_bilayer(
            layer("pol", &["p"], &[]),
            layer("eng", &["e"], &[]),
            vec![syn("p", "e")],
        )
        .unwrap()
        .network;
        let off = SupremacyConfig {
            include_self: false,
            ..SupremacyConfig::default()
        };
        assert_eq!(
            supremacy_pairs(
                &net,
                &LinkType::ISynonymy,
                &off,
                &SupremacyConfig::default()
            ),
            Err(BilayerError::SelfExclusiveConfig)
        );
    }

    #[test]
    fn single_bin_layers_give_zero_ratio() {
        let net = build_bilayer(
            layer("pol", &["p1", "p2", "p3"], &[]),
            layer("eng", &["e1", "e2"], &[]),
            vec![syn("p1", "e1"), syn("p2", "e1"), syn("p3", "e2")],
        )
        .unwrap()
        .network;
        let pairs = pairs_of(&net);
        let m = null_model_matrix(&pairs, 5, Marginals::AllSynsets).unwrap();
        assert_eq!(m.cells.len(), 1);
        assert_eq!(m.cells[0].observed, 3);
        assert_eq!(m.cells[0].expected, 3.0);
        assert_eq!(m.cells[0].ratio, Some(0.0));

        let mc = monte_carlo_null(&pairs, 5, 50, 7, 0).unwrap();
        assert_eq!(mc.cells.len(), 1);
        assert_eq!((mc.cells[0].mean, mc.cells[0].std_dev), (3.0, 0.0));
    }

    #[test]
    fn empty_cells_carry_no_ratio() {
        // pol: root r with 9 leaves (s = 10 for r); eng: two isolated nodes
        let leaves: Vec<String> = (0..9).map(|i| format!("l{i}")).collect();
        let mut nodes: Vec<&str> = leaves.iter().map(String::as_str).collect();
        nodes.push("r");
        let edges: Vec<(&str, &str)> = leaves.iter().map(|l| (l.as_str(), "r")).collect();
        let net = build_bilayer(
            layer("pol", &nodes, &edges),
            layer("eng", &["e1", "e2"], &[]),
            vec![syn("l0", "e1")],
        )
        .unwrap()
        .network;
        let m = null_model_matrix(&pairs_of(&net), 5, Marginals::AllSynsets).unwrap();
        assert_eq!(m.axis_a.bins.len(), 6);
        let top = m.cell(5, 0).unwrap();
        assert_eq!(top.observed, 0);
        assert_eq!(top.ratio, None);
        assert!((top.expected - 0.1).abs() < 1e-15);
        let gap = m.cell(3, 0).unwrap();
        assert_eq!((gap.observed, gap.expected, gap.ratio), (0, 0.0, None));
        let low = m.cell(0, 0).unwrap();
        assert!((low.ratio.unwrap() - (1.0f64 / 0.9).log10()).abs() < 1e-12);
        assert_eq!(m.observed_total(), 1);
        assert!((m.expected_total() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn empty_pair_set_is_an_error() {
        let net = build_bilayer(layer("pol", &["p"], &[]), layer("eng", &["e"], &[]), vec![])
            .unwrap()
            .network;
        assert_eq!(
            null_model_matrix(&pairs_of(&net), 5, Marginals::AllSynsets),
            Err(BilayerError::EmptyPairSet)
        );
    }

    #[test]
    fn monte_carlo_is_deterministic_per_seed() {
        let net = build_bilayer(
            layer("pol", &["a", "b", "c", "d"], &[("a", "b"), ("b", "c")]),
            layer(
                "eng",
                &["w", "x", "y", "z"],
                &[("w", "z"), ("x", "z"), ("y", "z")],
            ),
            vec![syn("a", "w"), syn("c", "z"), syn("d", "x")],
        )
        .unwrap()
        .network;
        let pairs = pairs_of(&net);
        let once = monte_carlo_null(&pairs, 5, 1, 11, 1).unwrap();
        assert_eq!(once, monte_carlo_null(&pairs, 5, 1, 11, 4).unwrap());
        let many = monte_carlo_null(&pairs, 5, 500, 11, 1).unwrap();
        assert_eq!(many, monte_carlo_null(&pairs, 5, 500, 11, 3).unwrap());
        assert_ne!(many, monte_carlo_null(&pairs, 5, 500, 12, 1).unwrap());
        let mass: f64 = many.cells.iter().map(|c| c.mean).sum();
        assert!((mass - 3.0).abs() < 1e-12);
        assert_eq!(
            monte_carlo_null(&pairs, 5, 0, 1, 1),
            Err(BilayerError::NoTrials)
        );
    }

    #[test]
    fn mismatch_ordering_and_threshold() {
        let net = build_bilayer(
            layer("pol", &["p1", "p2"], &[]),
            layer("eng", &["e1"], &[]),
            vec![],
        )
        .unwrap()
        .network;
        let table = |ids: &[&str]| SupremacyTable {
            ids: ids.iter().map(|s| s.to_string()).collect(),
            values: vec![1; ids.len()],
            config: SupremacyConfig::default(),
        };
        let pairs = SupremacyPairSet {
            link_type: LinkType::ISynonymy,
            pairs: vec![
                SupremacyPair {
                    link: syn("p1", "e1"),
                    s_source: 39,
                    s_target: 4380,
                },
                SupremacyPair {
                    link: syn("p2", "e1"),
                    s_source: 141,
                    s_target: 140,
                },
                SupremacyPair {
                    link: syn("p3", "e1"),
                    s_source: 100_000,
                    s_target: 1,
                },
            ],
            table_a: table(&["p1", "p2"]),
            table_b: table(&["e1"]),
        };
        let report = mismatch_report(&net, &pairs, DEFAULT_MISMATCH_THRESHOLD);
        assert_eq!(report.records.len(), 2);
        assert_eq!(report.records[0].source_id, "p3");
        assert_eq!(report.records[1].source_id, "p1");
        assert_eq!(report.records[1].source_lexemes, ["p1"]);
        assert!(report.records[0].score >= report.records[1].score);
        assert!(mismatch_report(&net, &pairs, 10.0).records.is_empty());
        assert_eq!(mismatch_score(39, 4380), mismatch_score(4380, 39));
    }
}
