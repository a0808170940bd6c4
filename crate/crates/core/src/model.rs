//! Characters, measures, predicates, messages, narratives and instances.

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("{kind} label {raw:?} is empty after canonicalization")]
    EmptyLabel { kind: &'static str, raw: String },
}

/// Trims and collapses internal whitespace runs to single spaces.
pub fn canonicalize(raw: &str) -> String {
    raw.split_whitespace().collect::<Vec<_>>().join(" ")
}

macro_rules! label_type {
    ($(#[$meta:meta])* $name:ident, $kind:literal) => {
        $(#[$meta])*
        #[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
        pub struct $name(String);

        impl $name {
            pub fn new(raw: &str) -> Result<Self, ModelError> {
                let label = canonicalize(raw);
                if label.is_empty() {
                    return Err(ModelError::EmptyLabel { kind: $kind, raw: raw.to_string() });
                }
                Ok(Self(label))
            }

            pub fn as_str(&self) -> &str {
                &self.0
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(&self.0)
            }
        }
    };
}

label_type!(
    /// A narrative subject, e.g. `black women` or `stroke`.
    Character,
    "character"
);
label_type!(
    /// A named quantity a message reports on. Values and units are not modelled.
    Measure,
    "measure"
);

/// The connective of a message. The empty predicate is the one carried by
/// the empty message.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Predicate(String);

impl Predicate {
    pub fn new(raw: &str) -> Self {
        Self(canonicalize(raw))
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Predicate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// A message `<C, V, P>`.
///
/// Equality is structural. The derived ordering (characters, then measures,
/// then predicate, each compared as sorted sequences) is the canonical message
/// order used for deterministic output.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Message {
    pub characters: BTreeSet<Character>,
    pub measures: BTreeSet<Measure>,
    pub predicate: Predicate,
}

impl Message {
    pub fn new(
        characters: impl IntoIterator<Item = Character>,
        measures: impl IntoIterator<Item = Measure>,
        predicate: Predicate,
    ) -> Self {
        Self {
            characters: characters.into_iter().collect(),
            measures: measures.into_iter().collect(),
            predicate,
        }
    }

    /// `<∅, ∅, empty>`.
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn is_empty(&self) -> bool {
        self.characters.is_empty() && self.measures.is_empty() && self.predicate.is_empty()
    }

    pub fn has_character(&self, c: &Character) -> bool {
        self.characters.contains(c)
    }

    pub fn has_measure(&self, v: &Measure) -> bool {
        self.measures.contains(v)
    }
}

/// Builds a message from raw labels, canonicalizing each one.
pub fn mk_message<'a>(
    characters: impl IntoIterator<Item = &'a str>,
    measures: impl IntoIterator<Item = &'a str>,
    predicate: &str,
) -> Result<Message, ModelError> {
    let characters = characters
        .into_iter()
        .map(Character::new)
        .collect::<Result<BTreeSet<_>, _>>()?;
    let measures = measures
        .into_iter()
        .map(Measure::new)
        .collect::<Result<BTreeSet<_>, _>>()?;
    Ok(Message {
        characters,
        measures,
        predicate: Predicate::new(predicate),
    })
}

impl fmt::Display for Message {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn set<T: fmt::Display>(items: impl Iterator<Item = T>) -> String {
            let parts: Vec<String> = items.map(|i| i.to_string()).collect();
            if parts.is_empty() {
                "∅".to_string()
            } else {
                format!("{{{}}}", parts.join(", "))
            }
        }
        let predicate = if self.predicate.is_empty() {
            "∅"
        } else {
            self.predicate.as_str()
        };
        write!(
            f,
            "<{}, {}, {}>",
            set(self.characters.iter()),
            set(self.measures.iter()),
            predicate
        )
    }
}

/// Name and length of a narrative. Operator outputs are unnamed until a
/// query result assigns them generated names.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct NarrativeSchema {
    pub name: Option<String>,
    pub length: usize,
}

/// An ordered tuple of messages with its schema. Positions are 1-based.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Narrative {
    schema: NarrativeSchema,
    messages: Vec<Message>,
}

impl Narrative {
    pub fn named(name: impl Into<String>, messages: Vec<Message>) -> Self {
        Self {
            schema: NarrativeSchema {
                name: Some(name.into()),
                length: messages.len(),
            },
            messages,
        }
    }

    pub fn anonymous(messages: Vec<Message>) -> Self {
        Self {
            schema: NarrativeSchema {
                name: None,
                length: messages.len(),
            },
            messages,
        }
    }

    /// Keeps a declared length that may disagree with the tuple; used when
    /// reading external data so that [`validate_instance`] can report it.
    pub fn with_declared_length(
        name: Option<String>,
        length: usize,
        messages: Vec<Message>,
    ) -> Self {
        Self {
            schema: NarrativeSchema { name, length },
            messages,
        }
    }

    /// The narrative `⟨⟩`.
    pub fn empty() -> Self {
        Self::anonymous(Vec::new())
    }

    pub fn schema(&self) -> &NarrativeSchema {
        &self.schema
    }

    pub fn name(&self) -> Option<&str> {
        self.schema.name.as_deref()
    }

    pub fn messages(&self) -> &[Message] {
        &self.messages
    }

    pub fn into_messages(self) -> Vec<Message> {
        self.messages
    }

    pub fn len(&self) -> usize {
        self.messages.len()
    }

    pub fn is_empty(&self) -> bool {
        self.messages.is_empty()
    }

    pub fn contains(&self, m: &Message) -> bool {
        self.messages.contains(m)
    }

    /// Every 1-based position at which `m` occurs.
    pub fn positions(&self, m: &Message) -> BTreeSet<usize> {
        self.messages
            .iter()
            .enumerate()
            .filter(|(_, x)| *x == m)
            .map(|(i, _)| i + 1)
            .collect()
    }

    /// Distinct messages in order of first occurrence.
    pub fn distinct_messages(&self) -> Vec<&Message> {
        let mut seen = HashSet::new();
        self.messages.iter().filter(|m| seen.insert(*m)).collect()
    }

    fn label(&self) -> String {
        self.name().unwrap_or("<unnamed>").to_string()
    }

    pub(crate) fn with_name(mut self, name: String) -> Self {
        self.schema.name = Some(name);
        self
    }
}

/// Position set of `m` in `n`, the function view of a narrative.
pub fn narrative_positions(n: &Narrative, m: &Message) -> BTreeSet<usize> {
    n.positions(m)
}

impl fmt::Display for Narrative {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let inner: Vec<String> = self.messages.iter().map(|m| m.to_string()).collect();
        write!(f, "⟨{}⟩", inner.join(", "))
    }
}

/// Orders labels so that embedded digit runs compare numerically
/// (`q1#2` before `q1#10`).
pub fn natural_cmp(a: &str, b: &str) -> Ordering {
    let mut xs = a.chars().peekable();
    let mut ys = b.chars().peekable();
    loop {
        match (xs.peek().copied(), ys.peek().copied()) {
            (None, None) => return Ordering::Equal,
            (None, Some(_)) => return Ordering::Less,
            (Some(_), None) => return Ordering::Greater,
            (Some(x), Some(y)) if x.is_ascii_digit() && y.is_ascii_digit() => {
                let mut dx = String::new();
                while let Some(c) = xs.peek().copied().filter(char::is_ascii_digit) {
                    dx.push(c);
                    xs.next();
                }
                let mut dy = String::new();
                while let Some(c) = ys.peek().copied().filter(char::is_ascii_digit) {
                    dy.push(c);
                    ys.next();
                }
                let tx = dx.trim_start_matches('0');
                let ty = dy.trim_start_matches('0');
                let ord = tx.len().cmp(&ty.len()).then_with(|| tx.cmp(ty));
                if ord != Ordering::Equal {
                    return ord;
                }
            }
            (Some(x), Some(y)) => {
                if x != y {
                    return x.cmp(&y);
                }
                xs.next();
                ys.next();
            }
        }
    }
}

/// A set of narratives, identified by their message tuples.
///
/// Narratives are kept in an iteration order: instances built with
/// [`DndbInstance::from_narratives`] are ordered by ascending name; operator
/// outputs inherit the order of the narratives they were derived from. The
/// order drives concatenation and never affects equality.
#[derive(Debug, Clone, Default)]
pub struct DndbInstance {
    narratives: Vec<Narrative>,
}

impl DndbInstance {
    /// The empty instance `∅`.
    pub fn empty() -> Self {
        Self::default()
    }

    /// The instance `{⟨⟩}`.
    pub fn unit() -> Self {
        Self {
            narratives: vec![Narrative::empty()],
        }
    }

    /// Orders by ascending name (unnamed last), then by message tuple, and
    /// collapses narratives with identical tuples onto the first.
    pub fn from_narratives(narratives: impl IntoIterator<Item = Narrative>) -> Self {
        let mut all: Vec<Narrative> = narratives.into_iter().collect();
        all.sort_by(name_then_tuple);
        Self::from_ordered(all)
    }

    /// Keeps the given order; later duplicates of a tuple are dropped.
    pub fn from_ordered(narratives: impl IntoIterator<Item = Narrative>) -> Self {
        let mut seen: HashSet<Vec<Message>> = HashSet::new();
        let narratives = narratives
            .into_iter()
            .filter(|n| seen.insert(n.messages.clone()))
            .collect();
        Self { narratives }
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Narrative> {
        self.narratives.iter()
    }

    pub fn narratives(&self) -> &[Narrative] {
        &self.narratives
    }

    pub fn len(&self) -> usize {
        self.narratives.len()
    }

    pub fn is_empty(&self) -> bool {
        self.narratives.is_empty()
    }

    pub fn contains_tuple(&self, tuple: &[Message]) -> bool {
        self.narratives.iter().any(|n| n.messages == tuple)
    }

    pub fn tuples(&self) -> BTreeSet<&[Message]> {
        self.narratives.iter().map(|n| n.messages()).collect()
    }

    pub fn get(&self, name: &str) -> Option<&Narrative> {
        self.narratives.iter().find(|n| n.name() == Some(name))
    }

    /// The same set ordered by the canonical message-tuple order.
    pub fn canonical(&self) -> Self {
        let mut narratives = self.narratives.clone();
        narratives.sort_by(|a, b| a.messages.cmp(&b.messages));
        Self { narratives }
    }

    /// Sorts canonically and names every unnamed narrative `q<id>#<ordinal>`,
    /// ordinals following the canonical order.
    pub fn into_named(self, query_id: u64) -> Self {
        let mut ordinal = 0;
        let narratives = self
            .canonical()
            .narratives
            .into_iter()
            .map(|n| {
                if n.name().is_some() {
                    n
                } else {
                    ordinal += 1;
                    n.with_name(format!("q{query_id}#{ordinal}"))
                }
            })
            .collect();
        Self { narratives }
    }

    pub fn validate(&self) -> ValidationReport {
        validate_instance(&self.narratives)
    }
}

fn name_then_tuple(a: &Narrative, b: &Narrative) -> Ordering {
    match (a.name(), b.name()) {
        (Some(x), Some(y)) => natural_cmp(x, y).then_with(|| x.cmp(y)),
        (Some(_), None) => Ordering::Less,
        (None, Some(_)) => Ordering::Greater,
        (None, None) => Ordering::Equal,
    }
    .then_with(|| a.messages.cmp(&b.messages))
}

impl PartialEq for DndbInstance {
    fn eq(&self, other: &Self) -> bool {
        self.len() == other.len() && self.iter().all(|n| other.contains_tuple(n.messages()))
    }
}

impl Eq for DndbInstance {}

impl FromIterator<Narrative> for DndbInstance {
    fn from_iter<T: IntoIterator<Item = Narrative>>(iter: T) -> Self {
        Self::from_ordered(iter)
    }
}

impl<'a> IntoIterator for &'a DndbInstance {
    type Item = &'a Narrative;
    type IntoIter = std::slice::Iter<'a, Narrative>;

    fn into_iter(self) -> Self::IntoIter {
        self.narratives.iter()
    }
}

impl fmt::Display for DndbInstance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return f.write_str("∅");
        }
        let inner: Vec<String> = self.iter().map(|n| n.to_string()).collect();
        write!(f, "{{{}}}", inner.join(", "))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    /// `index` is the 1-based position of the narrative in the input.
    LengthMismatch {
        narrative: String,
        index: usize,
        declared: usize,
        actual: usize,
    },
    DuplicateName {
        narrative: String,
        index: usize,
        first_index: usize,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::LengthMismatch {
                narrative,
                index,
                declared,
                actual,
            } => write!(
                f,
                "narrative {narrative} (#{index}) declares length {declared} but has {actual} messages"
            ),
            Violation::DuplicateName {
                narrative,
                index,
                first_index,
            } => write!(
                f,
                "narrative name {narrative} (#{index}) already used by narrative #{first_index}"
            ),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ValidationWarning {
    /// The narrative has the same message tuple as an earlier one and
    /// collapses onto it.
    DuplicateTuple {
        narrative: String,
        index: usize,
        duplicate_of: String,
    },
}

impl fmt::Display for ValidationWarning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ValidationWarning::DuplicateTuple {
                narrative,
                index,
                duplicate_of,
            } => write!(
                f,
                "narrative {narrative} (#{index}) has the same messages as {duplicate_of}; collapsed"
            ),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
    pub warnings: Vec<ValidationWarning>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks declared lengths, name uniqueness and tuple uniqueness. Problems
/// are reported, never raised.
pub fn validate_instance(narratives: &[Narrative]) -> ValidationReport {
    let mut report = ValidationReport::default();
    let mut names: HashMap<&str, usize> = HashMap::new();
    let mut tuples: HashMap<&[Message], usize> = HashMap::new();
    for (i, n) in narratives.iter().enumerate() {
        let index = i + 1;
        if n.schema.length != n.messages.len() {
            report.violations.push(Violation::LengthMismatch {
                narrative: n.label(),
                index,
                declared: n.schema.length,
                actual: n.messages.len(),
            });
        }
        if let Some(name) = n.name() {
            if let Some(&first_index) = names.get(name) {
                report.violations.push(Violation::DuplicateName {
                    narrative: name.to_string(),
                    index,
                    first_index,
                });
            } else {
                names.insert(name, index);
            }
        }
        if let Some(&first) = tuples.get(n.messages()) {
            report.warnings.push(ValidationWarning::DuplicateTuple {
                narrative: n.label(),
                index,
                duplicate_of: narratives[first - 1].label(),
            });
        } else {
            tuples.insert(n.messages(), index);
        }
    }
    report
}
