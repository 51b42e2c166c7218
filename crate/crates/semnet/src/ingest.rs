//! ConceptNet assertion-dump parsing and the node-cleaning rules applied
//! before any graph is built: language and relation filtering on both
//! endpoints, dropping phrases longer than five words, discarding direction,
//! and the Form-Of node-merging machinery.
//!
//! Rows are tab-separated: assertion URI, relation URI, start URI, end URI,
//! metadata. Term URIs look like `/c/<lang>/<term>[/<pos>[/...]]` with `_`
//! separating words inside the term. Malformed rows are counted, never fatal.

use std::collections::HashMap;
use std::io::BufRead;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Graph, NodeId};

/// The relations this toolkit reads, plus the derived Union network.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Relation {
    HasA,
    PartOf,
    IsA,
    RelatedTo,
    Antonym,
    Synonym,
    FormOf,
    /// Set union of HasA, PartOf, IsA, RelatedTo — never read from a dump.
    Union,
}

impl Relation {
    pub const ALL: [Relation; 8] = [
        Relation::HasA,
        Relation::PartOf,
        Relation::IsA,
        Relation::RelatedTo,
        Relation::Antonym,
        Relation::Synonym,
        Relation::FormOf,
        Relation::Union,
    ];

    /// The relations whose union forms the Union network.
    pub const UNION_PARTS: [Relation; 4] =
        [Relation::HasA, Relation::PartOf, Relation::IsA, Relation::RelatedTo];

    pub fn name(self) -> &'static str {
        match self {
            Relation::HasA => "HasA",
            Relation::PartOf => "PartOf",
            Relation::IsA => "IsA",
            Relation::RelatedTo => "RelatedTo",
            Relation::Antonym => "Antonym",
            Relation::Synonym => "Synonym",
            Relation::FormOf => "FormOf",
            Relation::Union => "Union",
        }
    }

    fn from_uri(uri: &str) -> Option<Relation> {
        match uri {
            "/r/HasA" => Some(Relation::HasA),
            "/r/PartOf" => Some(Relation::PartOf),
            "/r/IsA" => Some(Relation::IsA),
            "/r/RelatedTo" => Some(Relation::RelatedTo),
            "/r/Antonym" => Some(Relation::Antonym),
            "/r/Synonym" => Some(Relation::Synonym),
            "/r/FormOf" => Some(Relation::FormOf),
            _ => None,
        }
    }
}

impl std::fmt::Display for Relation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Relation {
    type Err = String;

    fn from_str(s: &str) -> Result<Relation, String> {
        Relation::ALL
            .into_iter()
            .find(|r| r.name().eq_ignore_ascii_case(s))
            .or_else(|| Relation::from_uri(s))
            .ok_or_else(|| format!("unknown relation `{s}`"))
    }
}

/// Part-of-speech tag carried by some term URIs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PosTag {
    Noun,
    Verb,
    Adjective,
    Adverb,
}

impl PosTag {
    fn from_segment(seg: &str) -> Option<PosTag> {
        match seg {
            "n" => Some(PosTag::Noun),
            "v" => Some(PosTag::Verb),
            "a" => Some(PosTag::Adjective),
            "r" => Some(PosTag::Adverb),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            PosTag::Noun => "noun",
            PosTag::Verb => "verb",
            PosTag::Adjective => "adjective",
            PosTag::Adverb => "adverb",
        }
    }

    pub fn from_name(name: &str) -> Option<PosTag> {
        match name {
            "noun" => Some(PosTag::Noun),
            "verb" => Some(PosTag::Verb),
            "adjective" => Some(PosTag::Adjective),
            "adverb" => Some(PosTag::Adverb),
            _ => None,
        }
    }

    pub const ALL: [PosTag; 4] = [PosTag::Noun, PosTag::Verb, PosTag::Adjective, PosTag::Adverb];
}

impl std::fmt::Display for PosTag {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Which (language, relation) slice of a dump to read.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelationSpec {
    pub language: String,
    pub relation: Relation,
}

impl RelationSpec {
    pub fn new(language: impl Into<String>, relation: Relation) -> RelationSpec {
        RelationSpec { language: language.into(), relation }
    }

    /// "en/HasA" — used for file names and derived seeds.
    pub fn key(&self) -> String {
        format!("{}/{}", self.language, self.relation)
    }
}

/// One endpoint of an assertion after cleaning.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConceptNode {
    pub label: String,
    pub language: String,
    pub pos: Option<PosTag>,
    pub word_count: u32,
}

/// Audit counts for one parse pass.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct IngestReport {
    pub rows_read: u64,
    pub rows_kept: u64,
    pub rows_malformed: u64,
    pub nodes_dropped_long_phrase: u64,
}

#[derive(Debug, Error)]
pub enum IngestError {
    #[error("dump read failed: {0}")]
    Io(#[from] std::io::Error),
}

/// Maximum phrase length kept, in words.
pub const MAX_PHRASE_WORDS: u32 = 5;

fn parse_term(uri: &str) -> Option<ConceptNode> {
    let mut seg = uri.split('/');
    if !seg.next()?.is_empty() {
        return None; // URIs start with '/'
    }
    if seg.next()? != "c" {
        return None;
    }
    let language = seg.next()?;
    let term = seg.next()?;
    if language.is_empty() || term.is_empty() {
        return None;
    }
    let pos = seg.next().and_then(PosTag::from_segment);
    Some(ConceptNode {
        label: term.to_string(),
        language: language.to_string(),
        pos,
        word_count: 1 + term.matches('_').count() as u32,
    })
}

/// Parsed slice of a dump: undirected endpoint pairs plus audit counts.
#[derive(Clone, Debug, Default)]
pub struct ParsedAssertions {
    pub pairs: Vec<(ConceptNode, ConceptNode)>,
    pub report: IngestReport,
}

enum RowOutcome {
    Pair(ConceptNode, ConceptNode),
    Filtered,
    Malformed,
    LongPhrase(u64),
}

fn parse_row(line: &str, language: &str, relation: Relation) -> RowOutcome {
    let mut fields = line.split('\t');
    let (_assertion, rel_uri, start, end) =
        match (fields.next(), fields.next(), fields.next(), fields.next()) {
            (Some(a), Some(r), Some(s), Some(e)) => (a, r, s, e),
            _ => return RowOutcome::Malformed,
        };
    let rel = match Relation::from_uri(rel_uri) {
        Some(r) => r,
        None if rel_uri.starts_with("/r/") => return RowOutcome::Filtered,
        None => return RowOutcome::Malformed,
    };
    if rel != relation {
        // Other relations are never inspected further, so a slice's
        // malformed count covers only its own relation plus relation-less
        // garbage — identical for single- and multi-relation passes.
        return RowOutcome::Filtered;
    }
    let (a, b) = match (parse_term(start), parse_term(end)) {
        (Some(a), Some(b)) => (a, b),
        _ => return RowOutcome::Malformed,
    };
    if a.language != language || b.language != language {
        return RowOutcome::Filtered;
    }
    let long = (a.word_count > MAX_PHRASE_WORDS) as u64 + (b.word_count > MAX_PHRASE_WORDS) as u64;
    if long > 0 {
        return RowOutcome::LongPhrase(long);
    }
    RowOutcome::Pair(a, b)
}

/// Stream a dump, keeping rows whose relation matches and whose endpoints are
/// both in the requested language. Direction is discarded by the undirected
/// graph builder downstream.
pub fn parse_assertions<R: BufRead>(
    reader: R,
    spec: &RelationSpec,
) -> Result<ParsedAssertions, IngestError> {
    let mut out = ParsedAssertions::default();
    for line in reader.lines() {
        let line = line?;
        out.report.rows_read += 1;
        if line.is_empty() {
            continue;
        }
        match parse_row(&line, &spec.language, spec.relation) {
            RowOutcome::Pair(a, b) => {
                out.report.rows_kept += 1;
                out.pairs.push((a, b));
            }
            RowOutcome::Filtered => {}
            RowOutcome::Malformed => out.report.rows_malformed += 1,
            RowOutcome::LongPhrase(n) => out.report.nodes_dropped_long_phrase += n,
        }
    }
    Ok(out)
}

/// One-pass variant for several relations of the same language; returns
/// outputs in the order of `relations`. Saves re-reading multi-gigabyte
/// dumps once per relation.
pub fn parse_assertions_multi<R: BufRead>(
    reader: R,
    language: &str,
    relations: &[Relation],
) -> Result<Vec<ParsedAssertions>, IngestError> {
    let mut outs: Vec<ParsedAssertions> = relations.iter().map(|_| Default::default()).collect();
    let index: HashMap<Relation, usize> =
        relations.iter().enumerate().map(|(i, &r)| (r, i)).collect();
    let mut rows_read = 0u64;
    for line in reader.lines() {
        let line = line?;
        rows_read += 1;
        if line.is_empty() {
            continue;
        }
        // Cheap pre-dispatch on the relation URI, then the shared row parser.
        // Structural garbage is malformed from every slice's point of view;
        // recognizable foreign relations are silent filters everywhere, so
        // each slot's report matches its single-relation pass exactly.
        let mut fields = line.split('\t');
        let rel_uri = fields.nth(1);
        let enough_fields = fields.next().is_some() && fields.next().is_some();
        let slot = match rel_uri {
            Some(uri) if enough_fields => match Relation::from_uri(uri) {
                Some(rel) => match index.get(&rel) {
                    Some(&slot) => Some(slot),
                    None => continue,
                },
                None if uri.starts_with("/r/") => continue,
                None => None,
            },
            _ => None,
        };
        let Some(slot) = slot else {
            for out in &mut outs {
                out.report.rows_malformed += 1;
            }
            continue;
        };
        let out = &mut outs[slot];
        match parse_row(&line, language, relations[slot]) {
            RowOutcome::Pair(a, b) => {
                out.report.rows_kept += 1;
                out.pairs.push((a, b));
            }
            RowOutcome::Filtered => {}
            RowOutcome::Malformed => out.report.rows_malformed += 1,
            RowOutcome::LongPhrase(n) => out.report.nodes_dropped_long_phrase += n,
        }
    }
    for out in &mut outs {
        out.report.rows_read = rows_read;
    }
    Ok(outs)
}

/// Build the labeled undirected graph of a parsed slice.
pub fn build_relation_graph(parsed: &ParsedAssertions) -> Graph {
    crate::graph::build_graph(parsed.pairs.iter().map(|(a, b)| (&a.label, &b.label)))
}

/// Label → first tagged part of speech seen in a parse pass.
#[derive(Clone, Debug, Default)]
pub struct PosTable {
    tags: HashMap<String, PosTag>,
}

impl PosTable {
    pub fn from_pairs(pairs: &[(ConceptNode, ConceptNode)]) -> PosTable {
        let mut tags = HashMap::new();
        for (a, b) in pairs {
            for node in [a, b] {
                if let Some(pos) = node.pos {
                    tags.entry(node.label.clone()).or_insert(pos);
                }
            }
        }
        PosTable { tags }
    }

    pub fn tag(&self, label: &str) -> Option<PosTag> {
        self.tags.get(label).copied()
    }

    pub fn len(&self) -> usize {
        self.tags.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tags.is_empty()
    }

    /// Merge another table in; existing tags win, matching first-seen order.
    pub fn absorb(&mut self, other: PosTable) {
        for (label, pos) in other.tags {
            self.tags.entry(label).or_insert(pos);
        }
    }

    /// Entries ordered by label, for deterministic serialization.
    pub fn sorted_entries(&self) -> Vec<(&str, PosTag)> {
        let mut entries: Vec<(&str, PosTag)> =
            self.tags.iter().map(|(l, &t)| (l.as_str(), t)).collect();
        entries.sort_unstable_by_key(|&(l, _)| l);
        entries
    }

    /// Rebuild from stored entries; on duplicate labels the first wins, the
    /// same rule [`PosTable::from_pairs`] applies to dump rows.
    pub fn from_entries(entries: impl IntoIterator<Item = (String, PosTag)>) -> PosTable {
        let mut tags = HashMap::new();
        for (label, tag) in entries {
            tags.entry(label).or_insert(tag);
        }
        PosTable { tags }
    }
}

/// Union of labeled graphs: node set and link set unions, deduplicated.
/// Node order is first appearance across the inputs in the given order.
pub fn build_union(graphs: &[&Graph]) -> Graph {
    let mut intern: HashMap<String, NodeId> = HashMap::new();
    let mut labels: Vec<String> = Vec::new();
    let mut edges: Vec<(NodeId, NodeId)> = Vec::new();
    for g in graphs {
        assert!(g.has_labels() || g.node_count() == 0, "union needs labeled graphs");
        let map: Vec<NodeId> = (0..g.node_count() as NodeId)
            .map(|i| {
                let label = g.label(i).unwrap();
                *intern.entry(label.to_string()).or_insert_with(|| {
                    labels.push(label.to_string());
                    (labels.len() - 1) as NodeId
                })
            })
            .collect();
        edges.extend(g.links().into_iter().map(|(u, v)| (map[u as usize], map[v as usize])));
    }
    Graph::from_parts(labels, edges)
}

/// Label → group representative, from the connected components of a Form-Of
/// graph; the representative is the lexicographically smallest label of the
/// group. Labels outside any group map to themselves.
#[derive(Clone, Debug, Default)]
pub struct MergeMap {
    rep: HashMap<String, String>,
}

impl MergeMap {
    pub fn representative<'a>(&'a self, label: &'a str) -> &'a str {
        self.rep.get(label).map_or(label, |s| s.as_str())
    }

    /// Number of labels mapped away from themselves.
    pub fn merged_count(&self) -> usize {
        self.rep.len()
    }

    pub fn is_identity(&self) -> bool {
        self.rep.is_empty()
    }
}

pub fn build_merge_map(form_of: &Graph) -> MergeMap {
    assert!(
        form_of.has_labels() || form_of.node_count() == 0,
        "merge maps are label-based"
    );
    let mut rep = HashMap::new();
    let comps = form_of.connected_components();
    let mut groups: HashMap<u32, Vec<NodeId>> = HashMap::new();
    for i in 0..form_of.node_count() as NodeId {
        groups.entry(comps.membership[i as usize]).or_default().push(i);
    }
    for members in groups.values() {
        if members.len() < 2 {
            continue;
        }
        let rep_label = members
            .iter()
            .map(|&i| form_of.label(i).unwrap())
            .min()
            .unwrap()
            .to_string();
        for &i in members {
            let label = form_of.label(i).unwrap();
            if label != rep_label {
                rep.insert(label.to_string(), rep_label.clone());
            }
        }
    }
    MergeMap { rep }
}

/// Replace every label by its representative, keeping one node per
/// representative (first occurrence order) and deduplicating links; links
/// internal to a group disappear with the self-loop rule.
pub fn apply_merge(g: &Graph, m: &MergeMap) -> Graph {
    assert!(g.has_labels() || g.node_count() == 0, "merge needs labels");
    let mut intern: HashMap<String, NodeId> = HashMap::new();
    let mut labels: Vec<String> = Vec::new();
    let map: Vec<NodeId> = (0..g.node_count() as NodeId)
        .map(|i| {
            let rep = m.representative(g.label(i).unwrap());
            match intern.get(rep) {
                Some(&id) => id,
                None => {
                    let id = labels.len() as NodeId;
                    labels.push(rep.to_string());
                    intern.insert(rep.to_string(), id);
                    id
                }
            }
        })
        .collect();
    let edges: Vec<(NodeId, NodeId)> =
        g.links().into_iter().map(|(u, v)| (map[u as usize], map[v as usize])).collect();
    Graph::from_parts(labels, edges)
}
