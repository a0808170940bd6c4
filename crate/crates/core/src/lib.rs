//! Data narrative databases.
//!
//! A data narrative (DN) is an ordered tuple of messages, each message
//! associating a set of characters with a set of measures through a single
//! predicate. A DN database instance is a set of narratives, and every
//! operator of the manipulation algebra maps instances to instances.
//!
//! The crate is layered bottom-up:
//!
//! - [`model`] and [`relations`]: messages, narratives, instances and the
//!   four character relations.
//! - [`condition`]: message- and narrative-level condition formulas.
//! - [`algebra`]: the operators, aggregators, sorters and the expression
//!   evaluator.
//! - [`derived`]: join, roll-up, drill-down and compare expressed as
//!   compositions of core operators.
//! - [`query`]: textual syntax, parser, pretty-printer, rewriter and
//!   plan rendering.
//! - [`storage`] and [`repl`]: the JSON database format, query execution
//!   and the interactive shell.

pub mod algebra;
pub mod condition;
pub mod derived;
pub mod model;
pub mod query;
pub mod relations;
pub mod repl;
pub mod storage;

mod error;

pub use algebra::{
    evaluate, evaluate_as, AggregatorKind, AlgebraExpr, Environment, EvalError, GroupSpec,
    SortSpec, SorterKind,
};
pub use condition::{DnCondition, MsgCondition};
pub use error::Error;
pub use model::{Character, DndbInstance, Measure, Message, ModelError, Narrative, Predicate};
pub use query::{explain_plan, parse_query, rewrite, ParseError};
pub use relations::{RelationError, RelationKind, RelationStore};
pub use storage::{load_database, run_query, LoadError, LoadedDatabase, ResultDocument};
