//! Histograms, logarithmic binning, and the two regressions used on wordnet
//! data: a log-log power-law slope and an exponential scaling of geometric
//! mean supremacy with synset size.

use std::collections::{BTreeMap, HashMap};

use thiserror::Error;

use crate::graph::SupremacyTable;
use crate::model::{InterlingualLink, LinkType, PartOfSpeech, RelationType, WordnetGraph};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum StatsError {
    #[error("value {value} at index {index} is below 1 and cannot be log-binned")]
    NonPositiveValue { index: usize, value: f64 },
    #[error("bins per decade must be at least 1")]
    InvalidBinsPerDecade,
    #[error("need at least 3 nonempty bins at or above s_min, found {found}")]
    InsufficientBins { found: usize },
    #[error("need at least 3 size classes in the fit range, found {found}")]
    InsufficientClasses { found: usize },
    #[error("coverage must lie in (0, 1], got {0}")]
    InvalidCoverage(f64),
    #[error("synset {id} has supremacy 0; use self-inclusive supremacy")]
    ZeroSupremacy { id: String },
    #[error("supremacy table has no entry for synset {id}")]
    MissingSupremacy { id: String },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Histogram {
    /// Part-of-speech name, or `all`.
    pub key: String,
    pub counts: BTreeMap<u64, u64>,
    pub total: u64,
}

impl Histogram {
    fn from_values(key: impl Into<String>, values: impl IntoIterator<Item = u64>) -> Self {
        let mut counts = BTreeMap::new();
        let mut total = 0;
        for v in values {
            *counts.entry(v).or_insert(0) += 1;
            total += 1;
        }
        Histogram {
            key: key.into(),
            counts,
            total,
        }
    }

    pub fn max_value(&self) -> Option<u64> {
        self.counts.keys().next_back().copied()
    }
}

fn key_of(pos: Option<PartOfSpeech>) -> &'static str {
    pos.map_or("all", PartOfSpeech::name)
}

/// Number of synsets of each size `l`.
pub fn synset_size_histogram(graph: &WordnetGraph, pos: Option<PartOfSpeech>) -> Histogram {
    Histogram::from_values(
        key_of(pos),
        graph
            .synsets()
            .iter()
            .filter(|s| pos.is_none_or(|p| s.part_of_speech == p))
            .map(|s| s.size() as u64),
    )
}

/// Number of lexemes having each sense count. With a part of speech the
/// lexeme identity is `(lemma, pos)`; without one it is the lemma alone,
/// counted across all parts of speech.
pub fn polysemy_histogram(graph: &WordnetGraph, pos: Option<PartOfSpeech>) -> Histogram {
    let mut senses: HashMap<&str, u64> = HashMap::new();
    for synset in graph.synsets() {
        if pos.is_some_and(|p| synset.part_of_speech != p) {
            continue;
        }
        for lexeme in &synset.lexemes {
            *senses.entry(lexeme.lemma.as_str()).or_insert(0) += 1;
        }
    }
    Histogram::from_values(key_of(pos), senses.into_values())
}

pub fn relation_census(graph: &WordnetGraph) -> BTreeMap<RelationType, u64> {
    let mut census = BTreeMap::new();
    for edge in graph.edges() {
        *census.entry(edge.relation_type.clone()).or_insert(0) += 1;
    }
    census
}

pub fn ilink_census(links: &[InterlingualLink]) -> BTreeMap<LinkType, u64> {
    let mut census = BTreeMap::new();
    for link in links {
        *census.entry(link.link_type.clone()).or_insert(0) += 1;
    }
    census
}

#[derive(Debug, Clone, PartialEq)]
pub struct Bin {
    pub index: i64,
    pub lower: f64,
    pub upper: f64,
    pub count: u64,
}

impl Bin {
    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }

    /// `sqrt(lower * upper)`.
    pub fn midpoint(&self) -> f64 {
        (self.lower * self.upper).sqrt()
    }
}

/// Logarithmically binned distribution of values >= 1. Bin `k` covers
/// `[10^(k/b), 10^((k+1)/b))`. Bins between the first and last occupied ones
/// are present even when empty.
#[derive(Debug, Clone, PartialEq)]
pub struct BinnedDistribution {
    pub bins_per_decade: u32,
    pub bins: Vec<Bin>,
    pub total: u64,
}

impl BinnedDistribution {
    /// `count / (total * width)`; 0 for an empty distribution.
    pub fn density(&self, bin: &Bin) -> f64 {
        if self.total == 0 {
            0.0
        } else {
            bin.count as f64 / (self.total as f64 * bin.width())
        }
    }

    pub fn bin(&self, index: i64) -> Option<&Bin> {
        let first = self.bins.first()?.index;
        usize::try_from(index - first)
            .ok()
            .and_then(|i| self.bins.get(i))
    }

    pub fn nonempty(&self) -> impl Iterator<Item = &Bin> {
        self.bins.iter().filter(|b| b.count > 0)
    }
}

pub fn bin_edge(index: i64, bins_per_decade: u32) -> f64 {
    10f64.powf(index as f64 / bins_per_decade as f64)
}

/// `floor(b * log10(value))`, corrected so that the value lies inside the
/// bin's computed edges. An exact power of ten opens its bin.
pub fn bin_index(value: f64, bins_per_decade: u32) -> i64 {
    let mut k = (bins_per_decade as f64 * value.log10()).floor() as i64;
    while bin_edge(k, bins_per_decade) > value {
        k -= 1;
    }
    while bin_edge(k + 1, bins_per_decade) <= value {
        k += 1;
    }
    k
}

pub fn log_bin(values: &[f64], bins_per_decade: u32) -> Result<BinnedDistribution, StatsError> {
    if bins_per_decade == 0 {
        return Err(StatsError::InvalidBinsPerDecade);
    }
    let mut counts: BTreeMap<i64, u64> = BTreeMap::new();
    for (index, &value) in values.iter().enumerate() {
        // also rejects NaN
        if value.is_nan() || value < 1.0 || value.is_infinite() {
            return Err(StatsError::NonPositiveValue { index, value });
        }
        *counts.entry(bin_index(value, bins_per_decade)).or_insert(0) += 1;
    }
    Ok(from_bin_counts(&counts, bins_per_decade))
}

pub fn log_bin_counts(
    values: &[u64],
    bins_per_decade: u32,
) -> Result<BinnedDistribution, StatsError> {
    let floats: Vec<f64> = values.iter().map(|&v| v as f64).collect();
    log_bin(&floats, bins_per_decade)
}

pub(crate) fn from_bin_counts(
    counts: &BTreeMap<i64, u64>,
    bins_per_decade: u32,
) -> BinnedDistribution {
    let bins = match (counts.keys().next(), counts.keys().next_back()) {
        (Some(&first), Some(&last)) => (first..=last)
            .map(|k| Bin {
                index: k,
                lower: bin_edge(k, bins_per_decade),
                upper: bin_edge(k + 1, bins_per_decade),
                count: counts.get(&k).copied().unwrap_or(0),
            })
            .collect(),
        _ => Vec::new(),
    };
    BinnedDistribution {
        bins_per_decade,
        bins,
        total: counts.values().sum(),
    }
}

struct LineFit {
    slope: f64,
    intercept: f64,
    r_squared: f64,
}

fn least_squares(points: &[(f64, f64)]) -> LineFit {
    let n = points.len() as f64;
    let mean_x = points.iter().map(|p| p.0).sum::<f64>() / n;
    let mean_y = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|p| (p.0 - mean_x).powi(2)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mean_x) * (p.1 - mean_y)).sum();
    let syy: f64 = points.iter().map(|p| (p.1 - mean_y).powi(2)).sum();
    let slope = sxy / sxx;
    let intercept = mean_y - slope * mean_x;
    let r_squared = if syy == 0.0 {
        1.0
    } else {
        sxy * sxy / (sxx * syy)
    };
    LineFit {
        slope,
        intercept,
        r_squared,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PowerLawFit {
    /// `gamma` in `p(s) ~ s^-gamma`.
    pub exponent: f64,
    /// log10 of the density prefactor.
    pub intercept: f64,
    pub s_min: f64,
    pub s_max: f64,
    /// R^2 of the log-log regression.
    pub goodness: f64,
    pub bins_used: usize,
}

/// Least-squares slope of `log10(density)` against `log10(midpoint)` over the
/// nonempty bins whose midpoint is at least `s_min`.
pub fn fit_power_law(dist: &BinnedDistribution, s_min: f64) -> Result<PowerLawFit, StatsError> {
    let used: Vec<&Bin> = dist.nonempty().filter(|b| b.midpoint() >= s_min).collect();
    if used.len() < 3 {
        return Err(StatsError::InsufficientBins { found: used.len() });
    }
    let points: Vec<(f64, f64)> = used
        .iter()
        .map(|b| (b.midpoint().log10(), dist.density(b).log10()))
        .collect();
    let line = least_squares(&points);
    Ok(PowerLawFit {
        exponent: -line.slope,
        intercept: line.intercept,
        s_min,
        s_max: used.last().map(|b| b.upper).unwrap_or(s_min),
        goodness: line.r_squared,
        bins_used: used.len(),
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProfileRow {
    /// Synset size `l`.
    pub size: u64,
    pub geometric_mean: f64,
    pub count: u64,
}

/// Geometric mean supremacy `exp(mean(ln s))` per synset size, ascending in
/// size.
pub fn supremacy_size_profile(
    graph: &WordnetGraph,
    table: &SupremacyTable,
) -> Result<Vec<ProfileRow>, StatsError> {
    let aligned = table.ids.len() == graph.node_count()
        && table
            .ids
            .iter()
            .zip(graph.synsets())
            .all(|(id, s)| *id == s.id);
    let mut classes: BTreeMap<u64, (f64, u64)> = BTreeMap::new();
    for (i, synset) in graph.synsets().iter().enumerate() {
        let s = if aligned {
            table.values[i]
        } else {
            table
                .get(&synset.id)
                .ok_or_else(|| StatsError::MissingSupremacy {
                    id: synset.id.clone(),
                })?
        };
        if s == 0 {
            return Err(StatsError::ZeroSupremacy {
                id: synset.id.clone(),
            });
        }
        let class = classes.entry(synset.size() as u64).or_insert((0.0, 0));
        class.0 += (s as f64).ln();
        class.1 += 1;
    }
    Ok(classes
        .into_iter()
        .map(|(size, (log_sum, count))| ProfileRow {
            size,
            geometric_mean: (log_sum / count as f64).exp(),
            count,
        })
        .collect())
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExponentialScalingFit {
    /// `alpha` in `<s>(l) ~ exp(alpha * l)`.
    pub alpha: f64,
    /// Natural-log prefactor.
    pub intercept: f64,
    pub l_min: u64,
    pub l_max: u64,
    /// Fraction of synsets inside the fit range.
    pub coverage: f64,
    pub goodness: f64,
    pub classes: usize,
}

pub const DEFAULT_COVERAGE: f64 = 0.99;

/// Fits `ln <s>` against `l` over the shortest run of size classes, starting
/// from the smallest, that holds at least `coverage` of all synsets.
pub fn fit_exponential_scaling(
    profile: &[ProfileRow],
    coverage: f64,
) -> Result<ExponentialScalingFit, StatsError> {
    if !(coverage > 0.0 && coverage <= 1.0) {
        return Err(StatsError::InvalidCoverage(coverage));
    }
    let total: u64 = profile.iter().map(|r| r.count).sum();
    let mut covered = 0u64;
    let mut used = 0;
    for row in profile {
        covered += row.count;
        used += 1;
        if covered as f64 >= coverage * total as f64 {
            break;
        }
    }
    let range = &profile[..used];
    if range.len() < 3 {
        return Err(StatsError::InsufficientClasses { found: range.len() });
    }
    let points: Vec<(f64, f64)> = range
        .iter()
        .map(|r| (r.size as f64, r.geometric_mean.ln()))
        .collect();
    let line = least_squares(&points);
    Ok(ExponentialScalingFit {
        alpha: line.slope,
        intercept: line.intercept,
        l_min: range[0].size,
        l_max: range[range.len() - 1].size,
        coverage: covered as f64 / total as f64,
        goodness: line.r_squared,
        classes: range.len(),
    })
}
