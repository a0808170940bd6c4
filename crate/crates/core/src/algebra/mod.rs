//! The manipulation algebra: operators, aggregators, sorters, expressions and
//! their evaluation.

mod aggregate;
mod expr;
mod ops;
mod sort;

use std::collections::BTreeMap;

use thiserror::Error;

pub use aggregate::{apply_aggregator, contradicts, is_contradictory, union_merge, AggregatorKind};
pub use expr::{AlgebraExpr, GroupSpec, SortSpec};
pub use ops::{
    op_concat, op_constant, op_cross, op_dedup, op_difference, op_group_aggregate,
    op_group_aggregate_across, op_intersect, op_order_by, op_project, op_select, op_union,
};
pub use sort::{apply_sorter, SorterKind};

use crate::model::DndbInstance;
use crate::relations::RelationStore;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("unbound source `{0}`")]
    UnboundSource(String),
    #[error("`{operator}` needs at least one condition")]
    EmptySpecs { operator: &'static str },
}

/// Named instances plus the relation store conditions are evaluated against.
#[derive(Debug, Clone, Default)]
pub struct Environment {
    pub sources: BTreeMap<String, DndbInstance>,
    pub store: RelationStore,
}

impl Environment {
    pub fn new(store: RelationStore) -> Self {
        Self {
            sources: BTreeMap::new(),
            store,
        }
    }

    pub fn with_source(mut self, name: impl Into<String>, instance: DndbInstance) -> Self {
        self.sources.insert(name.into(), instance);
        self
    }

    pub fn bind(&mut self, name: impl Into<String>, instance: DndbInstance) {
        self.sources.insert(name.into(), instance);
    }
}

/// Evaluates `expr` as query 1; see [`evaluate_as`].
pub fn evaluate(expr: &AlgebraExpr, env: &Environment) -> Result<DndbInstance, EvalError> {
    evaluate_as(expr, env, 1)
}

/// Evaluates bottom-up. The result is in canonical tuple order; narratives
/// passed through from a source keep their names, all others are named
/// `q<query_id>#<ordinal>`.
pub fn evaluate_as(
    expr: &AlgebraExpr,
    env: &Environment,
    query_id: u64,
) -> Result<DndbInstance, EvalError> {
    Ok(evaluate_unnamed(expr, env)?.into_named(query_id))
}

/// Evaluates without naming, keeping the iteration order the operators
/// produce.
pub fn evaluate_unnamed(expr: &AlgebraExpr, env: &Environment) -> Result<DndbInstance, EvalError> {
    let store = &env.store;
    let eval = |e: &AlgebraExpr| evaluate_unnamed(e, env);
    Ok(match expr {
        AlgebraExpr::Constant(m) => op_constant(m.clone()),
        AlgebraExpr::EmptyInstance => DndbInstance::empty(),
        AlgebraExpr::EmptyNarrative => DndbInstance::unit(),
        AlgebraExpr::Source(name) => env
            .sources
            .get(name)
            .cloned()
            .ok_or_else(|| EvalError::UnboundSource(name.clone()))?,
        AlgebraExpr::Select(phi, e) => op_select(phi, &eval(e)?, store),
        AlgebraExpr::Project(phi, e) => op_project(phi, &eval(e)?, store),
        AlgebraExpr::Dedup(e) => op_dedup(&eval(e)?),
        AlgebraExpr::GroupAgg(specs, e) => op_group_aggregate(specs, &eval(e)?, store)?,
        AlgebraExpr::GroupAggAcross(specs, e) => {
            op_group_aggregate_across(specs, &eval(e)?, store)?
        }
        AlgebraExpr::OrderBy(specs, e) => op_order_by(specs, &eval(e)?, store)?,
        AlgebraExpr::Concat(e) => op_concat(&eval(e)?),
        AlgebraExpr::Cross(a, b) => op_cross(&eval(a)?, &eval(b)?),
        AlgebraExpr::Union(a, b) => op_union(&eval(a)?, &eval(b)?),
        AlgebraExpr::Intersect(a, b) => op_intersect(&eval(a)?, &eval(b)?),
        AlgebraExpr::Difference(a, b) => op_difference(&eval(a)?, &eval(b)?),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::condition::{DnCondition, MsgCondition};
    use crate::model::{mk_message, Narrative};

    fn env() -> Environment {
        let m = mk_message(["a"], [], "p").unwrap();
        let m2 = mk_message(["b"], [], "p").unwrap();
        let db = DndbInstance::from_narratives([
            Narrative::named("n1", vec![m.clone(), m.clone()]),
            Narrative::named("n2", vec![m2]),
        ]);
        Environment::new(RelationStore::empty()).with_source("db", db)
    }

    #[test]
    fn source_passes_through_with_names() {
        let out = evaluate(&AlgebraExpr::source("db"), &env()).unwrap();
        assert_eq!(out, env().sources["db"]);
        assert!(out.get("n1").is_some());
    }

    #[test]
    fn unbound_source_is_an_error() {
        assert_eq!(
            evaluate(&AlgebraExpr::source("nope"), &env()),
            Err(EvalError::UnboundSource("nope".into()))
        );
    }

    #[test]
    fn empty_group_specs_are_an_error() {
        let e = AlgebraExpr::group_agg(vec![], AlgebraExpr::source("db"));
        assert!(matches!(
            evaluate(&e, &env()),
            Err(EvalError::EmptySpecs { .. })
        ));
    }

    #[test]
    fn trivial_composition() {
        let e = AlgebraExpr::project(
            MsgCondition::False,
            AlgebraExpr::dedup(AlgebraExpr::source("db")),
        );
        assert_eq!(evaluate(&e, &env()).unwrap(), DndbInstance::unit());
    }

    #[test]
    fn derived_narratives_get_generated_names() {
        let e = AlgebraExpr::dedup(AlgebraExpr::select(
            DnCondition::True,
            AlgebraExpr::source("db"),
        ));
        let out = evaluate_as(&e, &env(), 4).unwrap();
        let names: Vec<_> = out.iter().map(|n| n.name().unwrap().to_string()).collect();
        assert_eq!(names, ["q4#1", "q4#2"]);
    }

    #[test]
    fn values_are_shareable_across_threads() {
        fn assert_send_sync<T: Send + Sync>() {}
        assert_send_sync::<Environment>();
        assert_send_sync::<AlgebraExpr>();
        assert_send_sync::<DndbInstance>();
    }
}
