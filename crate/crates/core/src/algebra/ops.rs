//! The operators. Each one maps instances to an instance; narratives an
//! operator creates are unnamed and inherit the iteration order of the
//! narratives they come from.

use std::collections::HashSet;

use super::aggregate::apply_aggregator;
use super::sort::apply_sorter;
use super::{EvalError, GroupSpec, SortSpec};
use crate::condition::{DnCondition, MsgCondition};
use crate::model::{DndbInstance, Message, Narrative};
use crate::relations::RelationStore;

/// `{⟨m⟩}`.
pub fn op_constant(m: Message) -> DndbInstance {
    DndbInstance::from_ordered([Narrative::anonymous(vec![m])])
}

/// Keeps the narratives satisfying `phi`, unchanged.
pub fn op_select(phi: &DnCondition, i: &DndbInstance, store: &RelationStore) -> DndbInstance {
    i.iter().filter(|n| phi.eval(n, store)).cloned().collect()
}

/// Restricts every narrative to the messages satisfying `phi`.
pub fn op_project(phi: &MsgCondition, i: &DndbInstance, store: &RelationStore) -> DndbInstance {
    i.iter()
        .map(|n| {
            Narrative::anonymous(
                n.messages()
                    .iter()
                    .filter(|m| phi.eval(m, store))
                    .cloned()
                    .collect(),
            )
        })
        .collect()
}

/// Keeps the first occurrence of every message.
pub fn op_dedup(i: &DndbInstance) -> DndbInstance {
    i.iter()
        .map(|n| Narrative::anonymous(n.distinct_messages().into_iter().cloned().collect()))
        .collect()
}

/// The group `{m ∈ messages | φ}` as distinct messages in first-occurrence order.
fn group<'a>(
    messages: &[&'a Message],
    phi: &MsgCondition,
    store: &RelationStore,
) -> Vec<&'a Message> {
    messages
        .iter()
        .copied()
        .filter(|m| phi.eval(m, store))
        .collect()
}

fn aggregate_row(specs: &[GroupSpec], pool: &[&Message], store: &RelationStore) -> Narrative {
    Narrative::anonymous(
        specs
            .iter()
            .map(|s| apply_aggregator(s.aggregator, &group(pool, &s.condition, store)))
            .collect(),
    )
}

/// Per narrative, the tuple `⟨agg₁(G₁), …, agg_j(G_j)⟩`. Groups may overlap
/// and need not cover the narrative.
pub fn op_group_aggregate(
    specs: &[GroupSpec],
    i: &DndbInstance,
    store: &RelationStore,
) -> Result<DndbInstance, EvalError> {
    if specs.is_empty() {
        return Err(EvalError::EmptySpecs {
            operator: "groupagg",
        });
    }
    Ok(i.iter()
        .map(|n| aggregate_row(specs, &n.distinct_messages(), store))
        .collect())
}

/// One narrative aggregating groups drawn from the distinct messages of the
/// whole instance, pooled in iteration order.
pub fn op_group_aggregate_across(
    specs: &[GroupSpec],
    i: &DndbInstance,
    store: &RelationStore,
) -> Result<DndbInstance, EvalError> {
    if specs.is_empty() {
        return Err(EvalError::EmptySpecs {
            operator: "groupaggacross",
        });
    }
    let mut seen = HashSet::new();
    let pool: Vec<&Message> = i
        .iter()
        .flat_map(|n| n.messages())
        .filter(|m| seen.insert(*m))
        .collect();
    Ok(DndbInstance::from_ordered([aggregate_row(
        specs, &pool, store,
    )]))
}

/// Per narrative, the concatenation `sort₁(S₁) ⧺ … ⧺ sort_J(S_J)` of the
/// sorted selections. A message selected by several conditions is repeated.
pub fn op_order_by(
    specs: &[SortSpec],
    i: &DndbInstance,
    store: &RelationStore,
) -> Result<DndbInstance, EvalError> {
    if specs.is_empty() {
        return Err(EvalError::EmptySpecs {
            operator: "orderby",
        });
    }
    Ok(i.iter()
        .map(|n| {
            let mut out = Vec::new();
            for spec in specs {
                let selected: Vec<(usize, &Message)> = n
                    .messages()
                    .iter()
                    .enumerate()
                    .filter(|(_, m)| spec.condition.eval(m, store))
                    .map(|(p, m)| (p + 1, m))
                    .collect();
                out.extend(apply_sorter(&spec.sorter, &selected));
            }
            Narrative::anonymous(out)
        })
        .collect())
}

/// All narratives flattened into one, in iteration order. `∅` gives `{⟨⟩}`.
pub fn op_concat(i: &DndbInstance) -> DndbInstance {
    let messages = i
        .iter()
        .flat_map(|n| n.messages().iter().cloned())
        .collect();
    DndbInstance::from_ordered([Narrative::anonymous(messages)])
}

/// `{n₁ ⧺ n₂ | n₁ ∈ i1, n₂ ∈ i2}`.
pub fn op_cross(i1: &DndbInstance, i2: &DndbInstance) -> DndbInstance {
    i1.iter()
        .flat_map(|a| {
            i2.iter().map(move |b| {
                let mut messages = a.messages().to_vec();
                messages.extend_from_slice(b.messages());
                Narrative::anonymous(messages)
            })
        })
        .collect()
}

/// Narratives of `i2` whose name is already used in `i1` by a different
/// tuple lose their name, keeping names unique.
pub fn op_union(i1: &DndbInstance, i2: &DndbInstance) -> DndbInstance {
    let taken: HashSet<&str> = i1.iter().filter_map(|n| n.name()).collect();
    let renamed = i2.iter().map(|n| match n.name() {
        Some(name) if taken.contains(name) && !i1.contains_tuple(n.messages()) => {
            Narrative::anonymous(n.messages().to_vec())
        }
        _ => n.clone(),
    });
    i1.iter().cloned().chain(renamed).collect()
}

pub fn op_intersect(i1: &DndbInstance, i2: &DndbInstance) -> DndbInstance {
    i1.iter()
        .filter(|n| i2.contains_tuple(n.messages()))
        .cloned()
        .collect()
}

pub fn op_difference(i1: &DndbInstance, i2: &DndbInstance) -> DndbInstance {
    i1.iter()
        .filter(|n| !i2.contains_tuple(n.messages()))
        .cloned()
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{AggregatorKind, SorterKind};
    use crate::model::{mk_message, Character};

    fn m(c: &str) -> Message {
        mk_message([c], [], "p").unwrap()
    }

    fn inst(ns: &[&[Message]]) -> DndbInstance {
        ns.iter()
            .map(|ms| Narrative::anonymous(ms.to_vec()))
            .collect()
    }

    #[test]
    fn constant_is_a_singleton_of_length_one() {
        let i = op_constant(Message::empty());
        assert_eq!(i, inst(&[&[Message::empty()]]));
        assert_eq!(i.narratives()[0].len(), 1);
    }

    #[test]
    fn project_false_collapses_to_the_empty_narrative() {
        let store = RelationStore::empty();
        let i = inst(&[&[m("a")], &[m("b"), m("c")]]);
        assert_eq!(
            op_project(&MsgCondition::False, &i, &store),
            DndbInstance::unit()
        );
        assert_eq!(op_project(&MsgCondition::True, &i, &store), i);
        assert!(op_project(&MsgCondition::True, &DndbInstance::empty(), &store).is_empty());
    }

    #[test]
    fn dedup_keeps_minimum_positions() {
        let i = inst(&[&[m("a"), m("a"), m("b"), m("a")]]);
        assert_eq!(op_dedup(&i), inst(&[&[m("a"), m("b")]]));
        assert_eq!(op_dedup(&DndbInstance::unit()), DndbInstance::unit());
    }

    #[test]
    fn group_aggregate_rejects_empty_specs() {
        let store = RelationStore::empty();
        assert!(op_group_aggregate(&[], &DndbInstance::unit(), &store).is_err());
        assert!(op_group_aggregate_across(&[], &DndbInstance::unit(), &store).is_err());
        assert!(op_order_by(&[], &DndbInstance::unit(), &store).is_err());
    }

    #[test]
    fn group_aggregate_first_on_full_group() {
        let store = RelationStore::empty();
        let specs = [GroupSpec::new(MsgCondition::True, AggregatorKind::First)];
        let i = inst(&[&[m("a"), m("b")]]);
        assert_eq!(
            op_group_aggregate(&specs, &i, &store).unwrap(),
            inst(&[&[m("a")]])
        );
        assert!(op_group_aggregate(&specs, &DndbInstance::empty(), &store)
            .unwrap()
            .is_empty());
    }

    #[test]
    fn across_on_empty_instance_gives_empty_messages() {
        let store = RelationStore::empty();
        let specs = [
            GroupSpec::new(MsgCondition::True, AggregatorKind::UnionMerge),
            GroupSpec::new(MsgCondition::False, AggregatorKind::First),
        ];
        assert_eq!(
            op_group_aggregate_across(&specs, &DndbInstance::empty(), &store).unwrap(),
            inst(&[&[Message::empty(), Message::empty()]])
        );
        let one = [GroupSpec::new(
            MsgCondition::True,
            AggregatorKind::UnionMerge,
        )];
        assert_eq!(
            op_group_aggregate_across(&one, &op_constant(m("a")), &store).unwrap(),
            op_constant(m("a"))
        );
    }

    #[test]
    fn order_by_reverses_and_duplicates_overlaps() {
        let store = RelationStore::empty();
        let i = inst(&[&[m("a"), m("b")]]);
        let rev = [SortSpec::new(
            MsgCondition::True,
            SorterKind::ByPosition.reversed(),
        )];
        assert_eq!(
            op_order_by(&rev, &i, &store).unwrap(),
            inst(&[&[m("b"), m("a")]])
        );
        let overlap = [
            SortSpec::new(
                MsgCondition::HasChar(Character::new("b").unwrap()),
                SorterKind::ByPosition,
            ),
            SortSpec::new(MsgCondition::True, SorterKind::ByPosition),
        ];
        assert_eq!(
            op_order_by(&overlap, &i, &store).unwrap(),
            inst(&[&[m("b"), m("a"), m("b")]])
        );
    }

    #[test]
    fn concat_of_nothing_is_the_empty_narrative() {
        assert_eq!(op_concat(&DndbInstance::empty()), DndbInstance::unit());
        let one = inst(&[&[m("a"), m("b")]]);
        assert_eq!(op_concat(&one), one);
    }

    #[test]
    fn cross_laws_on_small_cases() {
        let a = op_constant(m("a"));
        let b = op_constant(m("b"));
        assert_eq!(op_cross(&a, &DndbInstance::unit()), a);
        assert_eq!(op_cross(&DndbInstance::unit(), &a), a);
        assert!(op_cross(&a, &DndbInstance::empty()).is_empty());
        assert!(op_cross(&DndbInstance::empty(), &a).is_empty());
        assert_eq!(op_cross(&a, &b), inst(&[&[m("a"), m("b")]]));
        assert_ne!(op_cross(&a, &b), op_cross(&b, &a));
    }

    #[test]
    fn set_operations() {
        let n1 = [m("a")];
        let n2 = [m("b")];
        let n3 = [m("c")];
        assert_eq!(op_union(&inst(&[&n1]), &inst(&[&n1])), inst(&[&n1]));
        assert_eq!(
            op_intersect(&inst(&[&n1, &n2]), &inst(&[&n2, &n3])),
            inst(&[&n2])
        );
        assert_eq!(
            op_difference(&inst(&[&n1, &n2]), &inst(&[&n2])),
            inst(&[&n1])
        );
    }
}
