//! The JSON database format and one-shot query execution.
//!
//! A database file holds a `format` version, the four character relations
//! and the narratives:
//!
//! ```json
//! {
//!   "format": 1,
//!   "relations": {
//!     "specialization": [["black women", "women"]],
//!     "spatial": [], "temporal": [], "similarity": []
//!   },
//!   "narratives": [
//!     {"name": "n1", "messages": [
//!       {"characters": ["black women", "stroke"], "measures": ["stroke prevalence"], "predicate": "higher risk"}
//!     ]}
//!   ]
//! }
//! ```
//!
//! Query results use the same narrative schema, so a result document can be
//! loaded back as a database.

use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{evaluate_as, Environment};
use crate::error::Error;
use crate::model::{
    validate_instance, Character, DndbInstance, Measure, Message, ModelError, Narrative, Predicate,
    Violation,
};
use crate::query::{explain_plan, parse_query, rewrite};
use crate::relations::{RelationError, RelationKind, RelationStore};

pub const FORMAT_VERSION: u32 = 1;

/// Name the loaded database is bound to in queries.
pub const DEFAULT_SOURCE: &str = "db";

#[derive(Debug, Error)]
pub enum LoadError {
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}: {message}")]
    Malformed { path: String, message: String },
    #[error("{path}: unsupported format version {found}, expected {FORMAT_VERSION}")]
    UnsupportedFormat { path: String, found: u32 },
    #[error("{path}: {source}")]
    Cycle { path: String, source: RelationError },
    #[error("{path}: declared length {declared} but the narrative has {actual} messages")]
    LengthMismatch {
        path: String,
        declared: usize,
        actual: usize,
    },
    #[error("{path}: duplicate narrative name {name:?}")]
    DuplicateName { path: String, name: String },
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelationsSection {
    #[serde(default)]
    pub specialization: Vec<(String, String)>,
    #[serde(default)]
    pub spatial: Vec<(String, String)>,
    #[serde(default)]
    pub temporal: Vec<(String, String)>,
    #[serde(default)]
    pub similarity: Vec<(String, String)>,
}

impl RelationsSection {
    fn section(&self, kind: RelationKind) -> &[(String, String)] {
        match kind {
            RelationKind::Specialization => &self.specialization,
            RelationKind::Spatial => &self.spatial,
            RelationKind::Temporal => &self.temporal,
            RelationKind::Similarity => &self.similarity,
        }
    }

    fn section_mut(&mut self, kind: RelationKind) -> &mut Vec<(String, String)> {
        match kind {
            RelationKind::Specialization => &mut self.specialization,
            RelationKind::Spatial => &mut self.spatial,
            RelationKind::Temporal => &mut self.temporal,
            RelationKind::Similarity => &mut self.similarity,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MessageRecord {
    pub characters: Vec<String>,
    pub measures: Vec<String>,
    #[serde(default)]
    pub predicate: String,
}

impl From<&Message> for MessageRecord {
    fn from(m: &Message) -> Self {
        Self {
            characters: m
                .characters
                .iter()
                .map(|c| c.as_str().to_string())
                .collect(),
            measures: m.measures.iter().map(|v| v.as_str().to_string()).collect(),
            predicate: m.predicate.as_str().to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NarrativeRecord {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub length: Option<usize>,
    pub messages: Vec<MessageRecord>,
}

impl From<&Narrative> for NarrativeRecord {
    fn from(n: &Narrative) -> Self {
        Self {
            name: n.name().unwrap_or_default().to_string(),
            length: Some(n.len()),
            messages: n.messages().iter().map(MessageRecord::from).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DatabaseFile {
    pub format: u32,
    #[serde(default)]
    pub relations: RelationsSection,
    pub narratives: Vec<NarrativeRecord>,
}

impl DatabaseFile {
    pub fn from_model(instance: &DndbInstance, store: &RelationStore) -> Self {
        let mut relations = RelationsSection::default();
        for kind in RelationKind::ALL {
            *relations.section_mut(kind) = store
                .base_pairs(kind)
                .map(|(a, b)| (a.as_str().to_string(), b.as_str().to_string()))
                .collect();
        }
        Self {
            format: FORMAT_VERSION,
            relations,
            narratives: instance.iter().map(NarrativeRecord::from).collect(),
        }
    }

    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("database documents serialize");
        text.push('\n');
        text
    }
}

/// A query result: the query text, its plan and the output narratives in
/// canonical order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResultDocument {
    pub format: u32,
    pub query: String,
    pub plan: String,
    pub narratives: Vec<NarrativeRecord>,
}

impl ResultDocument {
    pub fn new(query: &str, plan: String, result: &DndbInstance) -> Self {
        Self {
            format: FORMAT_VERSION,
            query: query.to_string(),
            plan,
            narratives: result
                .canonical()
                .iter()
                .map(NarrativeRecord::from)
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("result documents serialize");
        text.push('\n');
        text
    }
}

#[derive(Debug, Clone)]
pub struct LoadedDatabase {
    pub instance: DndbInstance,
    pub store: RelationStore,
    /// Non-fatal findings, e.g. narratives collapsed onto an identical one.
    pub warnings: Vec<String>,
}

impl LoadedDatabase {
    /// An environment binding the instance as [`DEFAULT_SOURCE`].
    pub fn environment(&self) -> Environment {
        Environment::new(self.store.clone()).with_source(DEFAULT_SOURCE, self.instance.clone())
    }
}

pub fn load_database(path: impl AsRef<Path>) -> Result<LoadedDatabase, LoadError> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|source| LoadError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_database(&text)
}

fn doc_path(path: &serde_path_to_error::Path) -> String {
    let p = path.to_string();
    if p == "." || p.is_empty() {
        "<root>".to_string()
    } else {
        p
    }
}

pub fn parse_database(text: &str) -> Result<LoadedDatabase, LoadError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let file: DatabaseFile =
        serde_path_to_error::deserialize(de).map_err(|e| LoadError::Malformed {
            path: doc_path(e.path()),
            message: e.inner().to_string(),
        })?;
    database_from_file(&file)
}

fn label<T>(path: String, make: impl FnOnce() -> Result<T, ModelError>) -> Result<T, LoadError> {
    make().map_err(|e| LoadError::Malformed {
        path,
        message: e.to_string(),
    })
}

pub fn database_from_file(file: &DatabaseFile) -> Result<LoadedDatabase, LoadError> {
    if file.format != FORMAT_VERSION {
        return Err(LoadError::UnsupportedFormat {
            path: "format".into(),
            found: file.format,
        });
    }

    let mut pairs = Vec::new();
    for kind in RelationKind::ALL {
        for (i, (a, b)) in file.relations.section(kind).iter().enumerate() {
            let at = |j: usize| format!("relations.{}[{i}][{j}]", kind.file_key());
            let a = label(at(0), || Character::new(a))?;
            let b = label(at(1), || Character::new(b))?;
            pairs.push((kind, a, b));
        }
    }
    let store = RelationStore::new(pairs).map_err(|source| LoadError::Cycle {
        path: "relations.specialization".into(),
        source,
    })?;

    let mut narratives = Vec::with_capacity(file.narratives.len());
    for (i, record) in file.narratives.iter().enumerate() {
        if record.name.trim().is_empty() {
            return Err(LoadError::Malformed {
                path: format!("narratives[{i}].name"),
                message: "narrative name is empty".into(),
            });
        }
        let mut messages = Vec::with_capacity(record.messages.len());
        for (j, m) in record.messages.iter().enumerate() {
            let at = format!("narratives[{i}].messages[{j}]");
            let characters = m
                .characters
                .iter()
                .enumerate()
                .map(|(k, c)| label(format!("{at}.characters[{k}]"), || Character::new(c)))
                .collect::<Result<BTreeSet<_>, _>>()?;
            let measures = m
                .measures
                .iter()
                .enumerate()
                .map(|(k, v)| label(format!("{at}.measures[{k}]"), || Measure::new(v)))
                .collect::<Result<BTreeSet<_>, _>>()?;
            messages.push(Message {
                characters,
                measures,
                predicate: Predicate::new(&m.predicate),
            });
        }
        let length = record.length.unwrap_or(messages.len());
        narratives.push(Narrative::with_declared_length(
            Some(record.name.clone()),
            length,
            messages,
        ));
    }

    let report = validate_instance(&narratives);
    if let Some(violation) = report.violations.first() {
        return Err(match violation {
            Violation::LengthMismatch {
                index,
                declared,
                actual,
                ..
            } => LoadError::LengthMismatch {
                path: format!("narratives[{}].length", index - 1),
                declared: *declared,
                actual: *actual,
            },
            Violation::DuplicateName {
                narrative, index, ..
            } => LoadError::DuplicateName {
                path: format!("narratives[{}].name", index - 1),
                name: narrative.clone(),
            },
        });
    }

    Ok(LoadedDatabase {
        instance: DndbInstance::from_narratives(narratives),
        store,
        warnings: report.warnings.iter().map(|w| w.to_string()).collect(),
    })
}

/// Parses, rewrites and evaluates `query` against the database bound as
/// `db`, then builds the result document.
pub fn execute(
    db: &LoadedDatabase,
    query: &str,
    query_id: u64,
) -> Result<(DndbInstance, ResultDocument), Error> {
    let parsed = parse_query(query)?;
    let plan = explain_plan(&parsed);
    let result = evaluate_as(&rewrite(&parsed), &db.environment(), query_id)?;
    let doc = ResultDocument::new(query, plan, &result);
    Ok((result, doc))
}

/// Loads the database, runs one query and writes the result document to
/// `output` when given.
pub fn run_query(
    db_path: impl AsRef<Path>,
    query: &str,
    output: Option<&Path>,
) -> Result<ResultDocument, Error> {
    let db = load_database(db_path)?;
    let (_, doc) = execute(&db, query, 1)?;
    if let Some(path) = output {
        fs::write(path, doc.to_json()).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
    }
    Ok(doc)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn db(narratives: &str) -> String {
        format!(r#"{{"format": 1, "relations": {{}}, "narratives": {narratives}}}"#)
    }

    #[test]
    fn empty_narratives_give_the_empty_instance() {
        let loaded = parse_database(&db("[]")).unwrap();
        assert!(loaded.instance.is_empty());
    }

    #[test]
    fn malformed_fields_report_their_path() {
        let err = parse_database(&db(
            r#"[{"name": "n", "messages": [{"characters": [1], "measures": []}]}]"#,
        ))
        .unwrap_err();
        assert!(
            err.to_string()
                .starts_with("narratives[0].messages[0].characters[0]"),
            "{err}"
        );
        let err = parse_database(&db(
            r#"[{"name": "n", "messages": [{"characters": ["  "], "measures": []}]}]"#,
        ))
        .unwrap_err();
        assert!(
            err.to_string()
                .starts_with("narratives[0].messages[0].characters[0]"),
            "{err}"
        );
        let err = parse_database(r#"{"relations": {}, "narratives": []}"#).unwrap_err();
        assert!(matches!(err, LoadError::Malformed { .. }), "{err}");
    }

    #[test]
    fn unsupported_version() {
        let err = parse_database(r#"{"format": 2, "narratives": []}"#).unwrap_err();
        assert!(err.to_string().starts_with("format:"), "{err}");
    }

    #[test]
    fn cycles_are_rejected() {
        let text = r#"{"format": 1, "relations": {"specialization": [["a", "b"], ["b", "a"]]}, "narratives": []}"#;
        let err = parse_database(text).unwrap_err();
        let msg = err.to_string();
        assert!(msg.starts_with("relations.specialization"), "{msg}");
        assert!(msg.contains("a ≺ b") && msg.contains("b ≺ a"), "{msg}");
    }

    #[test]
    fn declared_length_must_match() {
        let m = r#"{"characters": ["a"], "measures": []}"#;
        let err = parse_database(&db(&format!(
            r#"[{{"name": "n", "length": 2, "messages": [{m}, {m}, {m}]}}]"#
        )))
        .unwrap_err();
        assert!(matches!(
            err,
            LoadError::LengthMismatch {
                declared: 2,
                actual: 3,
                ..
            }
        ));
        assert!(err.to_string().starts_with("narratives[0].length"));
    }

    #[test]
    fn names_must_be_unique() {
        let err = parse_database(&db(r#"[{"name": "n", "messages": []}, {"name": "n", "messages": [{"characters": ["a"], "measures": []}]}]"#))
            .unwrap_err();
        assert!(err.to_string().starts_with("narratives[1].name"), "{err}");
    }

    #[test]
    fn identical_tuples_collapse_with_a_warning() {
        let m = r#"{"characters": ["a"], "measures": [], "predicate": "p"}"#;
        let loaded = parse_database(&db(&format!(
            r#"[{{"name": "x", "messages": [{m}]}}, {{"name": "y", "messages": [{m}]}}]"#
        )))
        .unwrap();
        assert_eq!(loaded.instance.len(), 1);
        assert_eq!(loaded.warnings.len(), 1);
    }
}
