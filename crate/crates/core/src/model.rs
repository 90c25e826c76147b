//! Shared domain types: synsets, typed relation edges, single-language graphs,
//! inter-lingual links, and the structural checks the rest of the crate
//! relies on.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModelError {
    #[error("relation filter must name at least one relation type")]
    EmptyRelationFilter,
    #[error("unknown part-of-speech code {0:?}")]
    UnknownPartOfSpeech(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PartOfSpeech {
    Noun,
    Verb,
    Adjective,
    Adverb,
    Other,
}

impl PartOfSpeech {
    pub const ALL: [PartOfSpeech; 5] = [
        PartOfSpeech::Noun,
        PartOfSpeech::Verb,
        PartOfSpeech::Adjective,
        PartOfSpeech::Adverb,
        PartOfSpeech::Other,
    ];

    /// One-letter code used in exchange files and PWN synset ids.
    pub fn code(self) -> char {
        match self {
            PartOfSpeech::Noun => 'n',
            PartOfSpeech::Verb => 'v',
            PartOfSpeech::Adjective => 'a',
            PartOfSpeech::Adverb => 'r',
            PartOfSpeech::Other => 'x',
        }
    }

    pub fn from_code(code: &str) -> Result<Self, ModelError> {
        match code {
            "n" => Ok(PartOfSpeech::Noun),
            "v" => Ok(PartOfSpeech::Verb),
            "a" => Ok(PartOfSpeech::Adjective),
            "r" => Ok(PartOfSpeech::Adverb),
            "x" => Ok(PartOfSpeech::Other),
            other => Err(ModelError::UnknownPartOfSpeech(other.to_string())),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            PartOfSpeech::Noun => "noun",
            PartOfSpeech::Verb => "verb",
            PartOfSpeech::Adjective => "adjective",
            PartOfSpeech::Adverb => "adverb",
            PartOfSpeech::Other => "other",
        }
    }
}

impl FromStr for PartOfSpeech {
    type Err = ModelError;

    /// Accepts either the one-letter code or the full name.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let lowered = s.trim().to_ascii_lowercase();
        PartOfSpeech::ALL
            .into_iter()
            .find(|pos| pos.name() == lowered)
            .map_or_else(|| PartOfSpeech::from_code(&lowered), Ok)
    }
}

impl fmt::Display for PartOfSpeech {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Canonical lemma form: lowercase, underscores become single spaces,
/// surrounding whitespace trimmed.
pub fn normalize_lemma(raw: &str) -> String {
    raw.replace('_', " ").trim().to_lowercase()
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Lexeme {
    pub lemma: String,
    pub part_of_speech: PartOfSpeech,
}

impl Lexeme {
    /// Normalizes `raw`; `None` when nothing is left.
    pub fn new(raw: &str, part_of_speech: PartOfSpeech) -> Option<Self> {
        let lemma = normalize_lemma(raw);
        if lemma.is_empty() {
            None
        } else {
            Some(Lexeme {
                lemma,
                part_of_speech,
            })
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Synset {
    pub id: String,
    pub part_of_speech: PartOfSpeech,
    pub lexemes: Vec<Lexeme>,
    pub gloss: Option<String>,
}

impl Synset {
    /// Builds a synset from raw lemmas, dropping empties and duplicates while
    /// keeping first-seen order.
    pub fn from_lemmas<'a>(
        id: impl Into<String>,
        part_of_speech: PartOfSpeech,
        lemmas: impl IntoIterator<Item = &'a str>,
        gloss: Option<String>,
    ) -> Self {
        let mut seen = HashSet::new();
        let lexemes = lemmas
            .into_iter()
            .filter_map(|raw| Lexeme::new(raw, part_of_speech))
            .filter(|lex| seen.insert(lex.lemma.clone()))
            .collect();
        Synset {
            id: id.into(),
            part_of_speech,
            lexemes,
            gloss,
        }
    }

    /// Synset size `l`: the number of lexemes.
    pub fn size(&self) -> usize {
        self.lexemes.len()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RelationType {
    Hypernym,
    Hyponym,
    Meronym,
    Holonym,
    Antonym,
    /// Unrecognized source label, kept verbatim.
    Other(String),
}

impl RelationType {
    pub fn parse(tag: &str) -> Self {
        match tag {
            "hypernym" => RelationType::Hypernym,
            "hyponym" => RelationType::Hyponym,
            "meronym" => RelationType::Meronym,
            "holonym" => RelationType::Holonym,
            "antonym" => RelationType::Antonym,
            other => RelationType::Other(other.to_string()),
        }
    }

    pub fn as_str(&self) -> &str {
        match self {
            RelationType::Hypernym => "hypernym",
            RelationType::Hyponym => "hyponym",
            RelationType::Meronym => "meronym",
            RelationType::Holonym => "holonym",
            RelationType::Antonym => "antonym",
            RelationType::Other(tag) => tag,
        }
    }

    pub fn inverse(&self) -> Option<RelationType> {
        match self {
            RelationType::Hypernym => Some(RelationType::Hyponym),
            RelationType::Hyponym => Some(RelationType::Hypernym),
            RelationType::Meronym => Some(RelationType::Holonym),
            RelationType::Holonym => Some(RelationType::Meronym),
            _ => None,
        }
    }

    /// True when an edge of this type points from the general (or whole)
    /// concept to the specific (or part) one, i.e. against the
    /// specific-to-general orientation used for supremacy.
    pub fn points_general_to_specific(&self) -> bool {
        matches!(self, RelationType::Hyponym | RelationType::Meronym)
    }
}

impl fmt::Display for RelationType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RelationEdge {
    pub source: String,
    pub target: String,
    pub relation_type: RelationType,
}

impl RelationEdge {
    pub fn new(
        source: impl Into<String>,
        target: impl Into<String>,
        relation_type: RelationType,
    ) -> Self {
        RelationEdge {
            source: source.into(),
            target: target.into(),
            relation_type,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum LinkType {
    ISynonymy,
    IHyponymy,
    IHypernymy,
    IMeronymy,
    IHolonymy,
    Other(String),
}

impl LinkType {
    pub fn parse(tag: &str) -> Self {
        match tag {
            "i_synonymy" => LinkType::ISynonymy,
            "i_hyponymy" => LinkType::IHyponymy,
            "i_hypernymy" => LinkType::IHypernymy,
            "i_meronymy" => LinkType::IMeronymy,
            "i_holonymy" => LinkType::IHolonymy,
            other => LinkType::Other(other.to_string()),
        }
    }

    pub fn as_str(&self) -> &str {
        match self {
            LinkType::ISynonymy => "i_synonymy",
            LinkType::IHyponymy => "i_hyponymy",
            LinkType::IHypernymy => "i_hypernymy",
            LinkType::IMeronymy => "i_meronymy",
            LinkType::IHolonymy => "i_holonymy",
            LinkType::Other(tag) => tag,
        }
    }
}

impl fmt::Display for LinkType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Directed edge from a synset of layer A to a synset of layer B.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct InterlingualLink {
    pub source_id: String,
    pub target_id: String,
    pub link_type: LinkType,
}

impl InterlingualLink {
    pub fn new(
        source_id: impl Into<String>,
        target_id: impl Into<String>,
        link_type: LinkType,
    ) -> Self {
        InterlingualLink {
            source_id: source_id.into(),
            target_id: target_id.into(),
            link_type,
        }
    }
}

/// Which relation types an algorithm looks at.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RelationFilter {
    All,
    Only(BTreeSet<RelationType>),
}

impl RelationFilter {
    pub fn only(types: impl IntoIterator<Item = RelationType>) -> Result<Self, ModelError> {
        let set: BTreeSet<_> = types.into_iter().collect();
        if set.is_empty() {
            return Err(ModelError::EmptyRelationFilter);
        }
        Ok(RelationFilter::Only(set))
    }

    /// Hypernym plus its inverse.
    pub fn hyperonymy() -> Self {
        RelationFilter::Only(BTreeSet::from([
            RelationType::Hypernym,
            RelationType::Hyponym,
        ]))
    }

    pub fn matches(&self, relation: &RelationType) -> bool {
        match self {
            RelationFilter::All => true,
            RelationFilter::Only(set) => set.contains(relation),
        }
    }
}

impl FromStr for RelationFilter {
    type Err = ModelError;

    /// `all`, or a comma-separated list of relation names / tags.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.trim() == "all" {
            return Ok(RelationFilter::All);
        }
        RelationFilter::only(
            s.split(',')
                .map(str::trim)
                .filter(|t| !t.is_empty())
                .map(RelationType::parse),
        )
    }
}

impl fmt::Display for RelationFilter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RelationFilter::All => f.write_str("all"),
            RelationFilter::Only(set) => {
                let names: Vec<_> = set.iter().map(RelationType::as_str).collect();
                f.write_str(&names.join(","))
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Orientation {
    /// Hyponym points to hypernym, part points to whole.
    #[default]
    SpecificToGeneral,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SupremacyConfig {
    pub relation_types: RelationFilter,
    pub orientation: Orientation,
    pub include_self: bool,
}

impl Default for SupremacyConfig {
    fn default() -> Self {
        SupremacyConfig {
            relation_types: RelationFilter::hyperonymy(),
            orientation: Orientation::SpecificToGeneral,
            include_self: true,
        }
    }
}

/// Compressed adjacency: for each node, `(neighbor, relation kind)` pairs.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub(crate) struct Adjacency {
    offsets: Vec<u32>,
    entries: Vec<(u32, u16)>,
}

impl Adjacency {
    fn build(node_count: usize, arcs: impl Iterator<Item = (u32, u32, u16)> + Clone) -> Self {
        let mut offsets = vec![0u32; node_count + 1];
        for (from, _, _) in arcs.clone() {
            offsets[from as usize + 1] += 1;
        }
        for i in 0..node_count {
            offsets[i + 1] += offsets[i];
        }
        let mut cursor = offsets.clone();
        let mut entries = vec![(0u32, 0u16); offsets[node_count] as usize];
        for (from, to, kind) in arcs {
            let slot = &mut cursor[from as usize];
            entries[*slot as usize] = (to, kind);
            *slot += 1;
        }
        Adjacency { offsets, entries }
    }

    pub(crate) fn neighbors(&self, node: u32) -> &[(u32, u16)] {
        let node = node as usize;
        &self.entries[self.offsets[node] as usize..self.offsets[node + 1] as usize]
    }

    fn len(&self) -> usize {
        self.entries.len()
    }
}

/// One language layer: synsets plus typed directed relation edges.
///
/// Synsets are kept sorted by id and edges by `(source, target, type)`, so
/// the internal node index order equals id order. Edges whose endpoints do
/// not resolve are stored (and reported by [`validate_graph`]) but never
/// enter the adjacency indexes.
#[derive(Debug, Clone)]
pub struct WordnetGraph {
    language_tag: String,
    synsets: Vec<Synset>,
    index: HashMap<String, u32>,
    edges: Vec<RelationEdge>,
    relation_kinds: Vec<RelationType>,
    edge_kind: Vec<u16>,
    resolved: Vec<Option<(u32, u32)>>,
    forward: Adjacency,
    reverse: Adjacency,
}

impl WordnetGraph {
    pub fn new(
        language_tag: impl Into<String>,
        mut synsets: Vec<Synset>,
        mut edges: Vec<RelationEdge>,
    ) -> Self {
        synsets.sort_by(|a, b| a.id.cmp(&b.id));
        edges.sort();

        let mut index = HashMap::with_capacity(synsets.len());
        for (i, synset) in synsets.iter().enumerate() {
            index.entry(synset.id.clone()).or_insert(i as u32);
        }

        let mut relation_kinds: Vec<RelationType> = edges
            .iter()
            .map(|e| e.relation_type.clone())
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        relation_kinds.shrink_to_fit();
        let kind_of: HashMap<&RelationType, u16> = relation_kinds
            .iter()
            .enumerate()
            .map(|(i, r)| (r, i as u16))
            .collect();
        let edge_kind: Vec<u16> = edges.iter().map(|e| kind_of[&e.relation_type]).collect();
        let resolved: Vec<Option<(u32, u32)>> = edges
            .iter()
            .map(|e| Some((*index.get(&e.source)?, *index.get(&e.target)?)))
            .collect();

        let (forward, reverse) = build_adjacency(synsets.len(), &resolved, &edge_kind);
        WordnetGraph {
            language_tag: language_tag.into(),
            synsets,
            index,
            edges,
            relation_kinds,
            edge_kind,
            resolved,
            forward,
            reverse,
        }
    }

    pub fn empty(language_tag: impl Into<String>) -> Self {
        WordnetGraph::new(language_tag, Vec::new(), Vec::new())
    }

    pub fn language_tag(&self) -> &str {
        &self.language_tag
    }

    pub fn synsets(&self) -> &[Synset] {
        &self.synsets
    }

    pub fn edges(&self) -> &[RelationEdge] {
        &self.edges
    }

    pub fn node_count(&self) -> usize {
        self.synsets.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn synset(&self, id: &str) -> Option<&Synset> {
        self.index.get(id).map(|&i| &self.synsets[i as usize])
    }

    pub fn contains(&self, id: &str) -> bool {
        self.index.contains_key(id)
    }

    pub(crate) fn node_index(&self, id: &str) -> Option<u32> {
        self.index.get(id).copied()
    }

    pub(crate) fn relation_kinds(&self) -> &[RelationType] {
        &self.relation_kinds
    }

    /// Resolved edges as `(source index, target index, relation kind)`.
    pub(crate) fn resolved_edges(&self) -> impl Iterator<Item = (u32, u32, u16)> + '_ {
        self.resolved
            .iter()
            .zip(&self.edge_kind)
            .filter_map(|(r, &k)| r.map(|(s, t)| (s, t, k)))
    }

    /// Resolved edges together with the edge record they came from.
    pub(crate) fn resolved_edge_records(
        &self,
    ) -> impl Iterator<Item = (u32, u32, &RelationEdge)> + '_ {
        self.resolved
            .iter()
            .zip(&self.edges)
            .filter_map(|(r, e)| r.map(|(s, t)| (s, t, e)))
    }

    fn labelled(&self, pairs: &[(u32, u16)]) -> Vec<(&str, &RelationType)> {
        pairs
            .iter()
            .map(|&(n, k)| {
                (
                    self.synsets[n as usize].id.as_str(),
                    &self.relation_kinds[k as usize],
                )
            })
            .collect()
    }

    /// Edges leaving a synset as `(target id, type)`, as stored (not oriented).
    pub fn outgoing(&self, id: &str) -> Vec<(&str, &RelationType)> {
        self.node_index(id)
            .map_or_else(Vec::new, |n| self.labelled(self.forward.neighbors(n)))
    }

    /// Edges entering a synset as `(source id, type)`.
    pub fn incoming(&self, id: &str) -> Vec<(&str, &RelationType)> {
        self.node_index(id)
            .map_or_else(Vec::new, |n| self.labelled(self.reverse.neighbors(n)))
    }
}

fn build_adjacency(
    node_count: usize,
    resolved: &[Option<(u32, u32)>],
    edge_kind: &[u16],
) -> (Adjacency, Adjacency) {
    let arcs = resolved
        .iter()
        .zip(edge_kind)
        .filter_map(|(r, &k)| r.map(|(s, t)| (s, t, k)));
    let forward = Adjacency::build(node_count, arcs.clone());
    let reverse = Adjacency::build(node_count, arcs.map(|(s, t, k)| (t, s, k)));
    (forward, reverse)
}

impl PartialEq for WordnetGraph {
    fn eq(&self, other: &Self) -> bool {
        self.language_tag == other.language_tag
            && self.synsets == other.synsets
            && self.edges == other.edges
    }
}

impl Eq for WordnetGraph {}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    DuplicateSynsetId {
        id: String,
    },
    EmptySynset {
        id: String,
    },
    DuplicateLexeme {
        id: String,
        lemma: String,
    },
    SelfLoop {
        id: String,
        relation_type: RelationType,
    },
    DanglingEndpoint {
        source: String,
        target: String,
        missing: String,
    },
    AdjacencyMismatch {
        detail: String,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::DuplicateSynsetId { id } => write!(f, "duplicate synset id {id}"),
            Violation::EmptySynset { id } => write!(f, "empty synset {id}"),
            Violation::DuplicateLexeme { id, lemma } => {
                write!(f, "synset {id} lists lexeme {lemma:?} more than once")
            }
            Violation::SelfLoop { id, relation_type } => {
                write!(f, "self-loop on {id} ({relation_type})")
            }
            Violation::DanglingEndpoint {
                source,
                target,
                missing,
            } => write!(
                f,
                "edge {source} -> {target} references missing synset {missing}"
            ),
            Violation::AdjacencyMismatch { detail } => write!(f, "adjacency mismatch: {detail}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Lists every violated structural invariant. Violations are data: the graph
/// is never modified and nothing fails.
pub fn validate_graph(graph: &WordnetGraph) -> ValidationReport {
    let mut violations = Vec::new();

    for pair in graph.synsets.windows(2) {
        if pair[0].id == pair[1].id {
            violations.push(Violation::DuplicateSynsetId {
                id: pair[1].id.clone(),
            });
        }
    }
    for synset in &graph.synsets {
        if synset.lexemes.is_empty() {
            violations.push(Violation::EmptySynset {
                id: synset.id.clone(),
            });
        }
        let mut seen = HashSet::new();
        for lexeme in &synset.lexemes {
            if !seen.insert((&lexeme.lemma, lexeme.part_of_speech)) {
                violations.push(Violation::DuplicateLexeme {
                    id: synset.id.clone(),
                    lemma: lexeme.lemma.clone(),
                });
            }
        }
    }
    for edge in &graph.edges {
        if edge.source == edge.target {
            violations.push(Violation::SelfLoop {
                id: edge.source.clone(),
                relation_type: edge.relation_type.clone(),
            });
        }
        for endpoint in [&edge.source, &edge.target] {
            if !graph.contains(endpoint) {
                violations.push(Violation::DanglingEndpoint {
                    source: edge.source.clone(),
                    target: edge.target.clone(),
                    missing: endpoint.clone(),
                });
            }
        }
    }

    let (forward, reverse) =
        build_adjacency(graph.synsets.len(), &graph.resolved, &graph.edge_kind);
    let resolvable = graph.resolved.iter().flatten().count();
    if forward != graph.forward || reverse != graph.reverse || graph.forward.len() != resolvable {
        violations.push(Violation::AdjacencyMismatch {
            detail: format!(
                "{} resolvable edges, {} forward entries, {} reverse entries",
                resolvable,
                graph.forward.len(),
                graph.reverse.len()
            ),
        });
    }
    let kinds_ok = graph.edge_kind.len() == graph.edges.len()
        && graph
            .edges
            .iter()
            .zip(&graph.edge_kind)
            .all(|(e, &k)| graph.relation_kinds.get(k as usize) == Some(&e.relation_type));
    if !kinds_ok {
        violations.push(Violation::AdjacencyMismatch {
            detail: "relation kind index disagrees with edge list".to_string(),
        });
    }

    ValidationReport { violations }
}

/// Two wordnet layers joined by inter-lingual links.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BilayerNetwork {
    pub layer_a: WordnetGraph,
    pub layer_b: WordnetGraph,
    pub links: Vec<InterlingualLink>,
}
