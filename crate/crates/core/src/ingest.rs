//! Loading wordnets from Princeton database files and from the tab-separated
//! exchange format, plus exporting the exchange format.
//!
//! Exchange files are UTF-8, LF-terminated, tab-separated, with a header:
//!
//! * `synsets.tsv`: `id pos lexemes gloss` (pos one of `n v a r x`, lexemes
//!   pipe-separated)
//! * `relations.tsv`: `source target type`
//! * `ilinks.tsv`: `source target type`

use std::collections::HashSet;
use std::fmt;
use std::fs;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::model::{
    InterlingualLink, LinkType, PartOfSpeech, RelationEdge, RelationType, Synset, WordnetGraph,
};

pub const SYNSETS_HEADER: [&str; 4] = ["id", "pos", "lexemes", "gloss"];
pub const RELATIONS_HEADER: [&str; 3] = ["source", "target", "type"];
pub const ILINKS_HEADER: [&str; 3] = ["source", "target", "type"];

/// Malformed input, located by file, 1-based line and 1-based byte column.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub struct ParseError {
    pub file: PathBuf,
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}:{}:{}: {}",
            self.file.display(),
            self.line,
            self.column,
            self.message
        )
    }
}

#[derive(Debug, Error)]
pub enum IngestError {
    #[error("{}: not found", path.display())]
    NotFound { path: PathBuf },
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
}

impl IngestError {
    fn io(path: &Path, source: io::Error) -> Self {
        if source.kind() == io::ErrorKind::NotFound {
            IngestError::NotFound {
                path: path.to_path_buf(),
            }
        } else {
            IngestError::Io {
                path: path.to_path_buf(),
                source,
            }
        }
    }
}

pub type Result<T, E = IngestError> = std::result::Result<T, E>;

/// Counts of input records that were dropped or reinterpreted during ingest.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct IngestReport {
    pub duplicate_edges: usize,
    pub self_loops: usize,
    pub unknown_link_tags: usize,
}

/// Applies the edge normalization rules: hyponym edges are flipped into
/// hypernym edges, self-relations are rejected and exact repeats dropped.
#[derive(Default)]
struct EdgeCollector {
    seen: HashSet<RelationEdge>,
    edges: Vec<RelationEdge>,
    report: IngestReport,
}

impl EdgeCollector {
    fn push(&mut self, mut edge: RelationEdge) {
        if edge.relation_type == RelationType::Hyponym {
            std::mem::swap(&mut edge.source, &mut edge.target);
            edge.relation_type = RelationType::Hypernym;
        }
        if edge.source == edge.target {
            self.report.self_loops += 1;
        } else if self.seen.insert(edge.clone()) {
            self.edges.push(edge);
        } else {
            self.report.duplicate_edges += 1;
        }
    }
}

// ---------------------------------------------------------------------------
// Princeton database files
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PwnOptions {
    pub language_tag: String,
    /// Treat instance pointers (`@i`, `~i`) as hypernym/hyponym. When false
    /// they are kept as `other("@i")` / `other("~i")`.
    pub fold_instance_hypernyms: bool,
}

impl Default for PwnOptions {
    fn default() -> Self {
        PwnOptions {
            language_tag: "eng".to_string(),
            fold_instance_hypernyms: false,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Loaded {
    pub graph: WordnetGraph,
    pub report: IngestReport,
}

const PWN_FILES: [(&str, char); 4] = [
    ("data.noun", 'n'),
    ("data.verb", 'v'),
    ("data.adj", 'a'),
    ("data.adv", 'r'),
];

fn pointer_relation(symbol: &str, options: &PwnOptions) -> RelationType {
    match symbol {
        "@" => RelationType::Hypernym,
        "~" => RelationType::Hyponym,
        "@i" if options.fold_instance_hypernyms => RelationType::Hypernym,
        "~i" if options.fold_instance_hypernyms => RelationType::Hyponym,
        "%m" | "%s" | "%p" => RelationType::Meronym,
        "#m" | "#s" | "#p" => RelationType::Holonym,
        "!" => RelationType::Antonym,
        other => RelationType::Other(other.to_string()),
    }
}

/// Synset id of a PWN record: the file's POS letter followed by the
/// eight-digit byte offset. Adjective satellites (`s`) live in `data.adj`.
fn pwn_id(pos_letter: &str, offset: &str) -> Option<String> {
    let letter = match pos_letter {
        "n" => 'n',
        "v" => 'v',
        "a" | "s" => 'a',
        "r" => 'r',
        _ => return None,
    };
    let value: u64 = offset.parse().ok()?;
    Some(format!("{letter}{value:08}"))
}

fn strip_adjective_marker(word: &str) -> &str {
    for marker in ["(a)", "(p)", "(ip)"] {
        if let Some(stripped) = word.strip_suffix(marker) {
            return stripped;
        }
    }
    word
}

struct Tokens<'a> {
    line: &'a str,
    inner: std::str::SplitAsciiWhitespace<'a>,
}

impl<'a> Tokens<'a> {
    fn new(line: &'a str) -> Self {
        Tokens {
            line,
            inner: line.split_ascii_whitespace(),
        }
    }

    fn column_of(&self, token: &str) -> usize {
        token.as_ptr() as usize - self.line.as_ptr() as usize + 1
    }

    fn next(&mut self, what: &str) -> std::result::Result<(&'a str, usize), (usize, String)> {
        match self.inner.next() {
            Some(tok) => Ok((tok, self.column_of(tok))),
            None => Err((
                self.line.len() + 1,
                format!("unexpected end of record, expected {what}"),
            )),
        }
    }

    fn number(&mut self, what: &str, radix: u32) -> std::result::Result<usize, (usize, String)> {
        let (tok, col) = self.next(what)?;
        usize::from_str_radix(tok, radix).map_err(|_| (col, format!("invalid {what} {tok:?}")))
    }

    fn remaining(&mut self) -> Option<(&'a str, usize)> {
        let tok = self.inner.next()?;
        Some((tok, self.column_of(tok)))
    }
}

struct PwnRecord {
    synset: Synset,
    pointers: Vec<RelationEdge>,
}

fn parse_pwn_line(
    line: &str,
    file_letter: char,
    options: &PwnOptions,
) -> std::result::Result<PwnRecord, (usize, String)> {
    let (data, gloss) = match line.find('|') {
        Some(bar) => (&line[..bar], line[bar + 1..].trim()),
        None => (line, ""),
    };
    let mut tokens = Tokens::new(data);

    let (offset, offset_col) = tokens.next("synset offset")?;
    if !offset.bytes().all(|b| b.is_ascii_digit()) {
        return Err((offset_col, format!("invalid synset offset {offset:?}")));
    }
    tokens.number("lexicographer file number", 10)?;
    let (ss_type, ss_col) = tokens.next("synset type")?;
    let part_of_speech = match ss_type {
        "n" => PartOfSpeech::Noun,
        "v" => PartOfSpeech::Verb,
        "a" | "s" => PartOfSpeech::Adjective,
        "r" => PartOfSpeech::Adverb,
        other => return Err((ss_col, format!("unknown synset type {other:?}"))),
    };
    let id = pwn_id(&file_letter.to_string(), offset)
        .ok_or_else(|| (offset_col, format!("invalid synset offset {offset:?}")))?;

    let word_count = tokens.number("word count", 16)?;
    let mut words = Vec::with_capacity(word_count);
    for _ in 0..word_count {
        let (word, _) = tokens.next("word")?;
        words.push(strip_adjective_marker(word));
        tokens.number("lex_id", 16)?;
    }

    let pointer_count = tokens.number("pointer count", 10)?;
    let mut pointers = Vec::with_capacity(pointer_count);
    for _ in 0..pointer_count {
        let (symbol, _) = tokens.next("pointer symbol")?;
        let (target_offset, target_col) = tokens.next("pointer offset")?;
        let (target_pos, _) = tokens.next("pointer part of speech")?;
        let (source_target, st_col) = tokens.next("pointer source/target")?;
        if source_target.len() != 4 || !source_target.bytes().all(|b| b.is_ascii_hexdigit()) {
            return Err((
                st_col,
                format!("invalid source/target field {source_target:?}"),
            ));
        }
        let target = pwn_id(target_pos, target_offset).ok_or_else(|| {
            (
                target_col,
                format!("invalid pointer target {target_offset:?} {target_pos:?}"),
            )
        })?;
        pointers.push(RelationEdge::new(
            id.clone(),
            target,
            pointer_relation(symbol, options),
        ));
    }

    if file_letter == 'v' {
        if let Some((frame_count, col)) = tokens.remaining() {
            let frames: usize = frame_count
                .parse()
                .map_err(|_| (col, format!("invalid frame count {frame_count:?}")))?;
            for _ in 0..frames {
                let (plus, col) = tokens.next("frame marker")?;
                if plus != "+" {
                    return Err((col, format!("expected '+', found {plus:?}")));
                }
                tokens.number("frame number", 10)?;
                tokens.number("frame word number", 16)?;
            }
        }
    }
    if let Some((extra, col)) = tokens.remaining() {
        return Err((col, format!("unexpected token {extra:?} before gloss")));
    }

    let gloss = (!gloss.is_empty()).then(|| gloss.to_string());
    Ok(PwnRecord {
        synset: Synset::from_lemmas(id, part_of_speech, words, gloss),
        pointers,
    })
}

fn parse_pwn_file(path: &Path, file_letter: char, options: &PwnOptions) -> Result<Vec<PwnRecord>> {
    let text = fs::read_to_string(path).map_err(|e| IngestError::io(path, e))?;
    let mut records = Vec::new();
    for (i, line) in text.lines().enumerate() {
        // license header lines start with two spaces
        if line.starts_with("  ") || line.trim().is_empty() {
            continue;
        }
        let record =
            parse_pwn_line(line, file_letter, options).map_err(|(column, message)| ParseError {
                file: path.to_path_buf(),
                line: i + 1,
                column,
                message,
            })?;
        if record.synset.lexemes.is_empty() {
            return Err(ParseError {
                file: path.to_path_buf(),
                line: i + 1,
                column: 1,
                message: "synset has no lexemes".to_string(),
            }
            .into());
        }
        records.push(record);
    }
    Ok(records)
}

/// Loads `data.noun`, `data.verb`, `data.adj` and `data.adv` (whichever
/// exist) from a Princeton WordNet database directory.
///
/// Pointers to synsets that are absent (for instance because their data file
/// is missing) are kept; [`crate::model::validate_graph`] reports them.
pub fn parse_pwn_database(directory: &Path) -> Result<Loaded> {
    parse_pwn_database_with(directory, &PwnOptions::default())
}

pub fn parse_pwn_database_with(directory: &Path, options: &PwnOptions) -> Result<Loaded> {
    if !directory.is_dir() {
        return Err(IngestError::NotFound {
            path: directory.to_path_buf(),
        });
    }
    let present: Vec<(PathBuf, char)> = PWN_FILES
        .iter()
        .map(|(name, letter)| (directory.join(name), *letter))
        .filter(|(path, _)| path.is_file())
        .collect();
    if present.is_empty() {
        return Err(IngestError::NotFound {
            path: directory.join("data.noun"),
        });
    }

    let parsed: Vec<Result<Vec<PwnRecord>>> = std::thread::scope(|scope| {
        let handles: Vec<_> = present
            .iter()
            .map(|(path, letter)| scope.spawn(move || parse_pwn_file(path, *letter, options)))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("PWN parser thread panicked"))
            .collect()
    });

    let mut synsets = Vec::new();
    let mut collector = EdgeCollector::default();
    for file in parsed {
        for record in file? {
            synsets.push(record.synset);
            for edge in record.pointers {
                collector.push(edge);
            }
        }
    }
    Ok(Loaded {
        graph: WordnetGraph::new(options.language_tag.clone(), synsets, collector.edges),
        report: collector.report,
    })
}

// ---------------------------------------------------------------------------
// Exchange format
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenericTsvBundle {
    pub language_tag: String,
    pub synsets_path: PathBuf,
    pub relations_path: PathBuf,
    pub ilinks_path: Option<PathBuf>,
}

impl GenericTsvBundle {
    pub fn new(
        language_tag: impl Into<String>,
        synsets_path: impl Into<PathBuf>,
        relations_path: impl Into<PathBuf>,
    ) -> Self {
        GenericTsvBundle {
            language_tag: language_tag.into(),
            synsets_path: synsets_path.into(),
            relations_path: relations_path.into(),
            ilinks_path: None,
        }
    }

    /// The standard file names inside one directory.
    pub fn in_directory(language_tag: impl Into<String>, directory: &Path) -> Self {
        let ilinks = directory.join("ilinks.tsv");
        GenericTsvBundle {
            language_tag: language_tag.into(),
            synsets_path: directory.join("synsets.tsv"),
            relations_path: directory.join("relations.tsv"),
            ilinks_path: ilinks.is_file().then_some(ilinks),
        }
    }
}

#[derive(Debug, Clone)]
pub struct TsvLoaded {
    pub graph: WordnetGraph,
    pub links: Option<Vec<InterlingualLink>>,
    pub report: IngestReport,
}

/// Tab-separated rows of one file, header already checked. Yields
/// `(line number, fields with their 1-based byte columns)`.
struct TsvRows {
    path: PathBuf,
    text: String,
}

impl TsvRows {
    fn open(path: &Path, header: &[&str]) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| IngestError::io(path, e))?;
        let rows = TsvRows {
            path: path.to_path_buf(),
            text,
        };
        let first = rows.text.lines().next().unwrap_or("");
        let first = first.strip_suffix('\r').unwrap_or(first);
        if first.split('\t').ne(header.iter().copied()) {
            return Err(rows.error(1, 1, format!("expected header {:?}", header.join("\t"))));
        }
        Ok(rows)
    }

    fn error(&self, line: usize, column: usize, message: String) -> IngestError {
        ParseError {
            file: self.path.clone(),
            line,
            column,
            message,
        }
        .into()
    }

    fn rows(
        &self,
        columns: usize,
    ) -> impl Iterator<Item = Result<(usize, Vec<(&str, usize)>)>> + '_ {
        self.text
            .lines()
            .enumerate()
            .skip(1)
            .filter(|(_, line)| !line.trim_end_matches('\r').is_empty())
            .map(move |(i, line)| {
                let line = line.strip_suffix('\r').unwrap_or(line);
                let fields: Vec<(&str, usize)> = line
                    .split('\t')
                    .map(|f| (f, f.as_ptr() as usize - line.as_ptr() as usize + 1))
                    .collect();
                if fields.len() != columns {
                    let column = fields.get(columns).map_or(line.len() + 1, |f| f.1);
                    return Err(self.error(
                        i + 1,
                        column,
                        format!(
                            "expected {columns} tab-separated columns, found {}",
                            fields.len()
                        ),
                    ));
                }
                Ok((i + 1, fields))
            })
    }
}

fn parse_synsets_tsv(path: &Path) -> Result<Vec<Synset>> {
    let rows = TsvRows::open(path, &SYNSETS_HEADER)?;
    let mut seen = HashSet::new();
    let mut synsets = Vec::new();
    for row in rows.rows(4) {
        let (line, fields) = row?;
        let (id, id_col) = fields[0];
        let (pos, pos_col) = fields[1];
        let (lexemes, lex_col) = fields[2];
        let gloss = fields[3].0;
        if id.is_empty() {
            return Err(rows.error(line, id_col, "empty synset id".to_string()));
        }
        let part_of_speech =
            PartOfSpeech::from_code(pos).map_err(|e| rows.error(line, pos_col, e.to_string()))?;
        if !seen.insert(id.to_string()) {
            return Err(rows.error(line, id_col, format!("duplicate synset id {id:?}")));
        }
        let synset = Synset::from_lemmas(
            id,
            part_of_speech,
            lexemes.split('|'),
            (!gloss.is_empty()).then(|| gloss.to_string()),
        );
        if synset.lexemes.is_empty() {
            return Err(rows.error(line, lex_col, format!("synset {id:?} has no lexemes")));
        }
        synsets.push(synset);
    }
    Ok(synsets)
}

fn parse_relations_tsv(
    path: &Path,
    known: &HashSet<&str>,
    collector: &mut EdgeCollector,
) -> Result<()> {
    let rows = TsvRows::open(path, &RELATIONS_HEADER)?;
    for row in rows.rows(3) {
        let (line, fields) = row?;
        for &(id, col) in &fields[..2] {
            if !known.contains(id) {
                return Err(rows.error(
                    line,
                    col,
                    format!("relation endpoint {id:?} is not a known synset"),
                ));
            }
        }
        let (tag, tag_col) = fields[2];
        if tag.is_empty() {
            return Err(rows.error(line, tag_col, "empty relation type".to_string()));
        }
        collector.push(RelationEdge::new(
            fields[0].0,
            fields[1].0,
            RelationType::parse(tag),
        ));
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IlinksLoaded {
    pub links: Vec<InterlingualLink>,
    /// Links whose type tag was not one of the recognized inter-lingual types.
    pub unknown_tags: usize,
}

/// Endpoint existence is not checked here; `build_bilayer` does that.
pub fn parse_ilinks_tsv(path: &Path) -> Result<IlinksLoaded> {
    let rows = TsvRows::open(path, &ILINKS_HEADER)?;
    let mut links = Vec::new();
    let mut unknown_tags = 0;
    for row in rows.rows(3) {
        let (line, fields) = row?;
        for &(id, col) in &fields[..2] {
            if id.is_empty() {
                return Err(rows.error(line, col, "empty synset id".to_string()));
            }
        }
        let (tag, tag_col) = fields[2];
        if tag.is_empty() {
            return Err(rows.error(line, tag_col, "empty link type".to_string()));
        }
        let link_type = LinkType::parse(tag);
        if matches!(link_type, LinkType::Other(_)) {
            unknown_tags += 1;
        }
        links.push(InterlingualLink::new(fields[0].0, fields[1].0, link_type));
    }
    Ok(IlinksLoaded {
        links,
        unknown_tags,
    })
}

pub fn parse_generic_tsv(bundle: &GenericTsvBundle) -> Result<TsvLoaded> {
    let synsets = parse_synsets_tsv(&bundle.synsets_path)?;
    let mut collector = EdgeCollector::default();
    {
        let known: HashSet<&str> = synsets.iter().map(|s| s.id.as_str()).collect();
        parse_relations_tsv(&bundle.relations_path, &known, &mut collector)?;
    }
    let (links, unknown_tags) = match &bundle.ilinks_path {
        Some(path) => {
            let loaded = parse_ilinks_tsv(path)?;
            (Some(loaded.links), loaded.unknown_tags)
        }
        None => (None, 0),
    };
    let mut report = collector.report;
    report.unknown_link_tags = unknown_tags;
    Ok(TsvLoaded {
        graph: WordnetGraph::new(bundle.language_tag.clone(), synsets, collector.edges),
        links,
        report,
    })
}

fn sanitize_field(text: &str) -> String {
    text.replace(['\t', '\n', '\r'], " ")
}

fn write_file(path: &Path, write: impl FnOnce(&mut dyn Write) -> io::Result<()>) -> Result<()> {
    let file = fs::File::create(path).map_err(|e| IngestError::Io {
        path: path.to_path_buf(),
        source: e,
    })?;
    let mut out = BufWriter::new(file);
    write(&mut out)
        .and_then(|_| out.flush())
        .map_err(|e| IngestError::Io {
            path: path.to_path_buf(),
            source: e,
        })
}

/// Writes `synsets.tsv`, `relations.tsv` and (when links are given)
/// `ilinks.tsv` into `directory`. Rows are sorted by id, and by
/// `(source, target, type)` for edges and links.
pub fn export_generic_tsv(
    graph: &WordnetGraph,
    links: Option<&[InterlingualLink]>,
    directory: &Path,
) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(directory).map_err(|e| IngestError::Io {
        path: directory.to_path_buf(),
        source: e,
    })?;
    let mut written = Vec::new();

    let synsets_path = directory.join("synsets.tsv");
    write_file(&synsets_path, |out| {
        writeln!(out, "{}", SYNSETS_HEADER.join("\t"))?;
        for synset in graph.synsets() {
            let lemmas: Vec<&str> = synset.lexemes.iter().map(|l| l.lemma.as_str()).collect();
            writeln!(
                out,
                "{}\t{}\t{}\t{}",
                synset.id,
                synset.part_of_speech.code(),
                lemmas.join("|"),
                synset
                    .gloss
                    .as_deref()
                    .map(sanitize_field)
                    .unwrap_or_default()
            )?;
        }
        Ok(())
    })?;
    written.push(synsets_path);

    let relations_path = directory.join("relations.tsv");
    write_file(&relations_path, |out| {
        writeln!(out, "{}", RELATIONS_HEADER.join("\t"))?;
        for edge in graph.edges() {
            writeln!(
                out,
                "{}\t{}\t{}",
                edge.source, edge.target, edge.relation_type
            )?;
        }
        Ok(())
    })?;
    written.push(relations_path);

    if let Some(links) = links {
        let mut sorted: Vec<&InterlingualLink> = links.iter().collect();
        sorted.sort();
        let ilinks_path = directory.join("ilinks.tsv");
        write_file(&ilinks_path, |out| {
            writeln!(out, "{}", ILINKS_HEADER.join("\t"))?;
            for link in sorted {
                writeln!(
                    out,
                    "{}\t{}\t{}",
                    link.source_id, link.target_id, link.link_type
                )?;
            }
            Ok(())
        })?;
        written.push(ilinks_path);
    }
    Ok(written)
}
