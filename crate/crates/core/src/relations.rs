//! The four binary relations over characters and their lifting to messages.
//!
//! Each relation is stored as its base pairs plus a derived view:
//! specialization is transitively closed (and must stay acyclic), similarity
//! is symmetrically closed, spatial and temporal relations are taken as given.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::model::{Character, Message};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RelationKind {
    /// `c ≺ c'`: `c` is more specific than `c'`.
    Specialization,
    /// `c ⊢ c'`.
    Spatial,
    /// `c ⊣ c'`.
    Temporal,
    /// `c ≈ c'`.
    Similarity,
}

impl RelationKind {
    pub const ALL: [RelationKind; 4] = [
        RelationKind::Specialization,
        RelationKind::Spatial,
        RelationKind::Temporal,
        RelationKind::Similarity,
    ];

    pub fn symbol(self) -> &'static str {
        match self {
            RelationKind::Specialization => "≺",
            RelationKind::Spatial => "⊢",
            RelationKind::Temporal => "⊣",
            RelationKind::Similarity => "≈",
        }
    }

    /// Keyword used by the query language.
    pub fn keyword(self) -> &'static str {
        match self {
            RelationKind::Specialization => "spec",
            RelationKind::Spatial => "spatial",
            RelationKind::Temporal => "temporal",
            RelationKind::Similarity => "sim",
        }
    }

    /// Key used by the database file format.
    pub fn file_key(self) -> &'static str {
        match self {
            RelationKind::Specialization => "specialization",
            RelationKind::Spatial => "spatial",
            RelationKind::Temporal => "temporal",
            RelationKind::Similarity => "similarity",
        }
    }

    pub fn from_keyword(word: &str) -> Option<Self> {
        Self::ALL
            .into_iter()
            .find(|k| k.keyword().eq_ignore_ascii_case(word))
    }
}

impl fmt::Display for RelationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RelationError {
    /// The base pairs forming the cycle, in traversal order.
    #[error("specialization cycle: {}", format_pairs(.pairs))]
    SpecializationCycle { pairs: Vec<(Character, Character)> },
}

fn format_pairs(pairs: &[(Character, Character)]) -> String {
    pairs
        .iter()
        .map(|(a, b)| format!("{a} ≺ {b}"))
        .collect::<Vec<_>>()
        .join(", ")
}

type Adjacency = BTreeMap<Character, BTreeSet<Character>>;

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RelationStore {
    base: BTreeMap<RelationKind, BTreeSet<(Character, Character)>>,
    derived: BTreeMap<RelationKind, Adjacency>,
}

impl RelationStore {
    pub fn empty() -> Self {
        Self::default()
    }

    /// Builds the derived views, rejecting specialization cycles
    /// (including self-pairs `c ≺ c`).
    pub fn new(
        pairs: impl IntoIterator<Item = (RelationKind, Character, Character)>,
    ) -> Result<Self, RelationError> {
        let mut base: BTreeMap<RelationKind, BTreeSet<(Character, Character)>> = BTreeMap::new();
        for (kind, a, b) in pairs {
            base.entry(kind).or_default().insert((a, b));
        }

        let mut derived = BTreeMap::new();
        for kind in RelationKind::ALL {
            let pairs = base.get(&kind).cloned().unwrap_or_default();
            let mut adjacency = Adjacency::new();
            for (a, b) in &pairs {
                adjacency.entry(a.clone()).or_default().insert(b.clone());
            }
            let view = match kind {
                RelationKind::Specialization => {
                    if let Some(cycle) = find_cycle(&adjacency) {
                        return Err(RelationError::SpecializationCycle { pairs: cycle });
                    }
                    transitive_closure(&adjacency)
                }
                RelationKind::Similarity => {
                    for (a, b) in &pairs {
                        adjacency.entry(b.clone()).or_default().insert(a.clone());
                    }
                    adjacency
                }
                RelationKind::Spatial | RelationKind::Temporal => adjacency,
            };
            derived.insert(kind, view);
        }
        Ok(Self { base, derived })
    }

    pub fn base_pairs(&self, kind: RelationKind) -> impl Iterator<Item = &(Character, Character)> {
        self.base.get(&kind).into_iter().flatten()
    }

    pub fn derived_pairs(&self, kind: RelationKind) -> BTreeSet<(Character, Character)> {
        self.derived
            .get(&kind)
            .into_iter()
            .flatten()
            .flat_map(|(a, bs)| bs.iter().map(move |b| (a.clone(), b.clone())))
            .collect()
    }

    /// `a kind b` in the derived view.
    pub fn related(&self, kind: RelationKind, a: &Character, b: &Character) -> bool {
        self.derived
            .get(&kind)
            .and_then(|adj| adj.get(a))
            .is_some_and(|bs| bs.contains(b))
    }
}

/// Depth-first search returning the base pairs of the first cycle found.
fn find_cycle(adjacency: &Adjacency) -> Option<Vec<(Character, Character)>> {
    #[derive(Clone, Copy, PartialEq)]
    enum Mark {
        Active,
        Done,
    }

    fn visit<'a>(
        node: &'a Character,
        adjacency: &'a Adjacency,
        marks: &mut BTreeMap<&'a Character, Mark>,
        stack: &mut Vec<&'a Character>,
    ) -> Option<Vec<(Character, Character)>> {
        marks.insert(node, Mark::Active);
        stack.push(node);
        for next in adjacency.get(node).into_iter().flatten() {
            match marks.get(next) {
                Some(Mark::Active) => {
                    let start = stack.iter().position(|c| *c == next).unwrap_or(0);
                    let mut path: Vec<&Character> = stack[start..].to_vec();
                    path.push(next);
                    return Some(
                        path.windows(2)
                            .map(|w| (w[0].clone(), w[1].clone()))
                            .collect(),
                    );
                }
                Some(Mark::Done) => {}
                None => {
                    if let Some(cycle) = visit(next, adjacency, marks, stack) {
                        return Some(cycle);
                    }
                }
            }
        }
        stack.pop();
        marks.insert(node, Mark::Done);
        None
    }

    let mut marks = BTreeMap::new();
    for node in adjacency.keys() {
        if !marks.contains_key(node) {
            let mut stack = Vec::new();
            if let Some(cycle) = visit(node, adjacency, &mut marks, &mut stack) {
                return Some(cycle);
            }
        }
    }
    None
}

/// Reachability from every node; the graph is known to be acyclic.
fn transitive_closure(adjacency: &Adjacency) -> Adjacency {
    let mut closure = Adjacency::new();
    for start in adjacency.keys() {
        let mut reached = BTreeSet::new();
        let mut frontier: Vec<&Character> = adjacency[start].iter().collect();
        while let Some(c) = frontier.pop() {
            if reached.insert(c.clone()) {
                frontier.extend(adjacency.get(c).into_iter().flatten());
            }
        }
        closure.insert(start.clone(), reached);
    }
    closure
}

pub fn char_related(
    c: &Character,
    other: &Character,
    kind: RelationKind,
    store: &RelationStore,
) -> bool {
    store.related(kind, c, other)
}

/// `m R m'` iff some character of `m` is related to some character of `m'`.
pub fn msg_related(
    m: &Message,
    other: &Message,
    kind: RelationKind,
    store: &RelationStore,
) -> bool {
    m.characters
        .iter()
        .any(|c| other.characters.iter().any(|d| store.related(kind, c, d)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ch(s: &str) -> Character {
        Character::new(s).unwrap()
    }

    fn store(pairs: &[(RelationKind, &str, &str)]) -> Result<RelationStore, RelationError> {
        RelationStore::new(pairs.iter().map(|(k, a, b)| (*k, ch(a), ch(b))))
    }

    #[test]
    fn specialization_is_transitive() {
        use RelationKind::Specialization as S;
        let s = store(&[(S, "a", "b"), (S, "b", "c")]).unwrap();
        assert!(char_related(&ch("a"), &ch("c"), S, &s));
        assert!(!char_related(&ch("c"), &ch("a"), S, &s));
        assert!(!char_related(&ch("a"), &ch("a"), S, &s));
    }

    #[test]
    fn cycle_names_every_pair() {
        use RelationKind::Specialization as S;
        let err = store(&[(S, "a", "b"), (S, "b", "a")]).unwrap_err();
        let RelationError::SpecializationCycle { pairs } = &err;
        assert_eq!(pairs, &[(ch("a"), ch("b")), (ch("b"), ch("a"))]);
        let text = err.to_string();
        assert!(text.contains("a ≺ b") && text.contains("b ≺ a"), "{text}");
    }

    #[test]
    fn self_pair_is_a_cycle() {
        use RelationKind::Specialization as S;
        assert!(store(&[(S, "a", "a")]).is_err());
    }

    #[test]
    fn similarity_is_symmetric_not_reflexive() {
        use RelationKind::Similarity as Sim;
        let s = store(&[(Sim, "pill", "other pill")]).unwrap();
        assert!(s.related(Sim, &ch("other pill"), &ch("pill")));
        assert!(!s.related(Sim, &ch("pill"), &ch("pill")));
    }

    #[test]
    fn spatial_and_temporal_take_no_closure() {
        use RelationKind::{Spatial, Temporal};
        let s = store(&[
            (Spatial, "greece", "france"),
            (Spatial, "france", "spain"),
            (Temporal, "spring", "q2"),
        ])
        .unwrap();
        assert!(s.related(Spatial, &ch("greece"), &ch("france")));
        assert!(!s.related(Spatial, &ch("greece"), &ch("spain")));
        assert!(!s.related(Spatial, &ch("france"), &ch("greece")));
        assert!(!s.related(Temporal, &ch("q2"), &ch("spring")));
    }

    #[test]
    fn empty_message_relates_to_nothing() {
        use RelationKind::Specialization as S;
        let s = store(&[(S, "a", "b")]).unwrap();
        let m = Message::new([ch("a")], [], Default::default());
        let m2 = Message::new([ch("b")], [], Default::default());
        assert!(msg_related(&m, &m2, S, &s));
        assert!(!msg_related(&Message::empty(), &m2, S, &s));
        assert!(!msg_related(&m, &Message::empty(), S, &s));
    }

    #[test]
    fn keywords_round_trip() {
        for k in RelationKind::ALL {
            assert_eq!(RelationKind::from_keyword(k.keyword()), Some(k));
        }
        assert_eq!(
            RelationKind::from_keyword("SPEC"),
            Some(RelationKind::Specialization)
        );
    }
}
