//! Condition formulas over messages and narratives.
//!
//! The atom vocabulary is closed: message conditions test membership of a
//! character, measure or predicate, a relation to a fixed character, or
//! emptiness; narrative conditions quantify message conditions over the
//! narrative or test for a related message pair.

use crate::model::{Character, Measure, Message, Narrative, Predicate};
use crate::relations::{msg_related, RelationKind, RelationStore};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum MsgCondition {
    True,
    False,
    /// The message is `<∅, ∅, empty>`.
    IsEmpty,
    HasChar(Character),
    HasMeasure(Measure),
    HasPredicate(Predicate),
    /// Some character `c'` of the message satisfies `c' R c`.
    HasCharRel(RelationKind, Character),
    /// Some character `c'` of the message satisfies `c R c'`. With
    /// specialization this selects messages mentioning a generalization of `c`.
    HasCharRelInv(RelationKind, Character),
    And(Box<MsgCondition>, Box<MsgCondition>),
    Or(Box<MsgCondition>, Box<MsgCondition>),
    Not(Box<MsgCondition>),
}

impl MsgCondition {
    pub fn and(self, other: MsgCondition) -> MsgCondition {
        MsgCondition::And(Box::new(self), Box::new(other))
    }

    pub fn or(self, other: MsgCondition) -> MsgCondition {
        MsgCondition::Or(Box::new(self), Box::new(other))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(self) -> MsgCondition {
        MsgCondition::Not(Box::new(self))
    }

    /// Left-nested conjunction; `True` when empty.
    pub fn all(conditions: impl IntoIterator<Item = MsgCondition>) -> MsgCondition {
        conditions
            .into_iter()
            .reduce(MsgCondition::and)
            .unwrap_or(MsgCondition::True)
    }

    pub fn eval(&self, m: &Message, store: &RelationStore) -> bool {
        eval_msg_condition(self, m, store)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum DnCondition {
    True,
    False,
    Exists(MsgCondition),
    ForAll(MsgCondition),
    /// Two messages of the narrative (possibly the same one) are related.
    MsgPairRel(RelationKind),
    And(Box<DnCondition>, Box<DnCondition>),
    Or(Box<DnCondition>, Box<DnCondition>),
    Not(Box<DnCondition>),
}

impl DnCondition {
    pub fn and(self, other: DnCondition) -> DnCondition {
        DnCondition::And(Box::new(self), Box::new(other))
    }

    pub fn or(self, other: DnCondition) -> DnCondition {
        DnCondition::Or(Box::new(self), Box::new(other))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(self) -> DnCondition {
        DnCondition::Not(Box::new(self))
    }

    pub fn eval(&self, n: &Narrative, store: &RelationStore) -> bool {
        eval_dn_condition(self, n, store)
    }
}

pub fn eval_msg_condition(phi: &MsgCondition, m: &Message, store: &RelationStore) -> bool {
    match phi {
        MsgCondition::True => true,
        MsgCondition::False => false,
        MsgCondition::IsEmpty => m.is_empty(),
        MsgCondition::HasChar(c) => m.has_character(c),
        MsgCondition::HasMeasure(v) => m.has_measure(v),
        MsgCondition::HasPredicate(p) => &m.predicate == p,
        MsgCondition::HasCharRel(kind, c) => {
            m.characters.iter().any(|x| store.related(*kind, x, c))
        }
        MsgCondition::HasCharRelInv(kind, c) => {
            m.characters.iter().any(|x| store.related(*kind, c, x))
        }
        MsgCondition::And(a, b) => {
            eval_msg_condition(a, m, store) && eval_msg_condition(b, m, store)
        }
        MsgCondition::Or(a, b) => {
            eval_msg_condition(a, m, store) || eval_msg_condition(b, m, store)
        }
        MsgCondition::Not(a) => !eval_msg_condition(a, m, store),
    }
}

pub fn eval_dn_condition(phi: &DnCondition, n: &Narrative, store: &RelationStore) -> bool {
    match phi {
        DnCondition::True => true,
        DnCondition::False => false,
        DnCondition::Exists(psi) => n.messages().iter().any(|m| psi.eval(m, store)),
        DnCondition::ForAll(psi) => n.messages().iter().all(|m| psi.eval(m, store)),
        DnCondition::MsgPairRel(kind) => {
            let distinct = n.distinct_messages();
            distinct
                .iter()
                .any(|m| distinct.iter().any(|m2| msg_related(m, m2, *kind, store)))
        }
        DnCondition::And(a, b) => eval_dn_condition(a, n, store) && eval_dn_condition(b, n, store),
        DnCondition::Or(a, b) => eval_dn_condition(a, n, store) || eval_dn_condition(b, n, store),
        DnCondition::Not(a) => !eval_dn_condition(a, n, store),
    }
}
