use std::collections::BTreeSet;
use std::fmt;

use crate::model::{Message, Predicate};

/// Functions merging a set of messages into one message. Every aggregator
/// maps the empty set to the empty message.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AggregatorKind {
    /// Union of characters and measures.
    UnionMerge,
    /// `UnionMerge` when the set holds a contradictory pair, else empty.
    Check,
    /// Always the empty message.
    Drop,
    /// The message occurring first.
    First,
}

impl AggregatorKind {
    pub const ALL: [AggregatorKind; 4] = [
        AggregatorKind::UnionMerge,
        AggregatorKind::Check,
        AggregatorKind::Drop,
        AggregatorKind::First,
    ];

    pub fn keyword(self) -> &'static str {
        match self {
            AggregatorKind::UnionMerge => "unionMerge",
            AggregatorKind::Check => "check",
            AggregatorKind::Drop => "drop",
            AggregatorKind::First => "first",
        }
    }

    pub fn from_keyword(word: &str) -> Option<Self> {
        Self::ALL
            .into_iter()
            .find(|a| a.keyword().eq_ignore_ascii_case(word))
    }
}

impl fmt::Display for AggregatorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.keyword())
    }
}

/// Applies `kind` to a group of distinct messages listed in order of first
/// occurrence.
pub fn apply_aggregator(kind: AggregatorKind, group: &[&Message]) -> Message {
    match kind {
        AggregatorKind::UnionMerge => union_merge(group),
        AggregatorKind::Check => {
            if is_contradictory(group) {
                union_merge(group)
            } else {
                Message::empty()
            }
        }
        AggregatorKind::Drop => Message::empty(),
        AggregatorKind::First => group.first().map(|m| (*m).clone()).unwrap_or_default(),
    }
}

/// Unions characters and measures. The predicate is kept when the non-empty
/// input predicates agree, otherwise it becomes `merged(p1,...,pk)` over the
/// sorted distinct ones.
pub fn union_merge(group: &[&Message]) -> Message {
    let mut merged = Message::empty();
    let mut predicates = BTreeSet::new();
    for m in group {
        merged.characters.extend(m.characters.iter().cloned());
        merged.measures.extend(m.measures.iter().cloned());
        if !m.predicate.is_empty() {
            predicates.insert(m.predicate.as_str());
        }
    }
    merged.predicate = match predicates.len() {
        0 => Predicate::empty(),
        1 => Predicate::new(predicates.first().copied().unwrap_or_default()),
        _ => Predicate::new(&format!(
            "merged({})",
            predicates.into_iter().collect::<Vec<_>>().join(",")
        )),
    };
    merged
}

/// Two messages contradict each other when they share characters and
/// measures but carry different predicates.
pub fn contradicts(a: &Message, b: &Message) -> bool {
    a.characters == b.characters && a.measures == b.measures && a.predicate != b.predicate
}

pub fn is_contradictory(group: &[&Message]) -> bool {
    group
        .iter()
        .enumerate()
        .any(|(i, a)| group[i + 1..].iter().any(|b| contradicts(a, b)))
}
