//! Join, roll-up, drill-down and compare as expansions into core operators.
//!
//! Expansion is purely syntactic: each function returns an [`AlgebraExpr`]
//! built only from selection, cross product, group-aggregates and projection.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::algebra::{AggregatorKind, AlgebraExpr, GroupSpec};
use crate::condition::{DnCondition, MsgCondition};
use crate::model::Character;
use crate::relations::RelationKind;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MacroError {
    #[error("`{0}` needs at least one character")]
    NoCharacters(&'static str),
}

/// A macro invocation with its parameters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MacroCall {
    Join {
        shared: BTreeSet<Character>,
        left: AlgebraExpr,
        right: AlgebraExpr,
    },
    RollUp {
        character: Character,
        input: AlgebraExpr,
    },
    DrillDown {
        character: Character,
        input: AlgebraExpr,
    },
    Compare {
        characters: BTreeSet<Character>,
        input: AlgebraExpr,
    },
}

impl MacroCall {
    pub fn name(&self) -> &'static str {
        match self {
            MacroCall::Join { .. } => "join",
            MacroCall::RollUp { .. } => "rollup",
            MacroCall::DrillDown { .. } => "drilldown",
            MacroCall::Compare { .. } => "compare",
        }
    }

    pub fn expand(self) -> Result<AlgebraExpr, MacroError> {
        match self {
            MacroCall::Join {
                shared,
                left,
                right,
            } => expand_join(&shared, left, right),
            MacroCall::RollUp { character, input } => Ok(expand_rollup(&character, input)),
            MacroCall::DrillDown { character, input } => Ok(expand_drilldown(&character, input)),
            MacroCall::Compare { characters, input } => expand_compare(&characters, input),
        }
    }
}

/// The message carries every character of `chars`.
fn has_all(chars: &BTreeSet<Character>) -> MsgCondition {
    MsgCondition::all(chars.iter().cloned().map(MsgCondition::HasChar))
}

/// `[(φ, keep), (¬φ, drop)]`.
fn keep_and_drop(phi: MsgCondition, keep: AggregatorKind) -> Vec<GroupSpec> {
    vec![
        GroupSpec::new(phi.clone(), keep),
        GroupSpec::new(phi.not(), AggregatorKind::Drop),
    ]
}

fn drop_empty_messages(input: AlgebraExpr) -> AlgebraExpr {
    AlgebraExpr::project(MsgCondition::IsEmpty.not(), input)
}

/// Contradictory messages about `chars`:
/// `π_{¬empty}(γ^across_{φ,¬φ,check,drop}(σ_{∃φ}(input)))` with `φ` the
/// message mentioning all of `chars`.
pub fn expand_compare(
    chars: &BTreeSet<Character>,
    input: AlgebraExpr,
) -> Result<AlgebraExpr, MacroError> {
    if chars.is_empty() {
        return Err(MacroError::NoCharacters("compare"));
    }
    let phi = has_all(chars);
    let selected = AlgebraExpr::select(DnCondition::Exists(phi.clone()), input);
    let grouped =
        AlgebraExpr::group_agg_across(keep_and_drop(phi, AggregatorKind::Check), selected);
    Ok(drop_empty_messages(grouped))
}

/// Narratives about `c` crossed with narratives mentioning a generalization
/// of `c`, merging the messages about `c` or its generalizations.
pub fn expand_rollup(c: &Character, input: AlgebraExpr) -> AlgebraExpr {
    hierarchy_walk(
        c,
        MsgCondition::HasCharRelInv(RelationKind::Specialization, c.clone()),
        input,
    )
}

/// Inverse of [`expand_rollup`]: merges with narratives mentioning a
/// specialization of `c`.
pub fn expand_drilldown(c: &Character, input: AlgebraExpr) -> AlgebraExpr {
    hierarchy_walk(
        c,
        MsgCondition::HasCharRel(RelationKind::Specialization, c.clone()),
        input,
    )
}

fn hierarchy_walk(c: &Character, related: MsgCondition, input: AlgebraExpr) -> AlgebraExpr {
    let about = MsgCondition::HasChar(c.clone());
    let first = AlgebraExpr::select(DnCondition::Exists(about.clone()), input.clone());
    let second = AlgebraExpr::select(DnCondition::Exists(related.clone()), input);
    let crossed = AlgebraExpr::cross(first, second);
    let grouped = AlgebraExpr::group_agg(
        keep_and_drop(about.or(related), AggregatorKind::UnionMerge),
        crossed,
    );
    drop_empty_messages(grouped)
}

/// Connects narratives of `left` and `right` that mention all `shared`
/// characters, merging the messages that mention them all.
pub fn expand_join(
    shared: &BTreeSet<Character>,
    left: AlgebraExpr,
    right: AlgebraExpr,
) -> Result<AlgebraExpr, MacroError> {
    if shared.is_empty() {
        return Err(MacroError::NoCharacters("join"));
    }
    let phi = has_all(shared);
    let about = DnCondition::Exists(phi.clone());
    let crossed = AlgebraExpr::cross(
        AlgebraExpr::select(about.clone(), left),
        AlgebraExpr::select(about, right),
    );
    let grouped = AlgebraExpr::group_agg(keep_and_drop(phi, AggregatorKind::UnionMerge), crossed);
    Ok(drop_empty_messages(grouped))
}
