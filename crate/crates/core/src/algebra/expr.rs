use super::{AggregatorKind, SorterKind};
use crate::condition::{DnCondition, MsgCondition};
use crate::model::Message;

/// A grouping condition paired with the aggregator applied to its group.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GroupSpec {
    pub condition: MsgCondition,
    pub aggregator: AggregatorKind,
}

impl GroupSpec {
    pub fn new(condition: MsgCondition, aggregator: AggregatorKind) -> Self {
        Self {
            condition,
            aggregator,
        }
    }
}

/// A selection condition paired with the sorter applied to its selection.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SortSpec {
    pub condition: MsgCondition,
    pub sorter: SorterKind,
}

impl SortSpec {
    pub fn new(condition: MsgCondition, sorter: SorterKind) -> Self {
        Self { condition, sorter }
    }
}

/// An algebra expression.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum AlgebraExpr {
    /// `{⟨m⟩}`.
    Constant(Message),
    /// The empty instance `∅`.
    EmptyInstance,
    /// The instance `{⟨⟩}` holding only the empty narrative.
    EmptyNarrative,
    /// A named instance from the environment.
    Source(String),
    Select(DnCondition, Box<AlgebraExpr>),
    Project(MsgCondition, Box<AlgebraExpr>),
    Dedup(Box<AlgebraExpr>),
    GroupAgg(Vec<GroupSpec>, Box<AlgebraExpr>),
    GroupAggAcross(Vec<GroupSpec>, Box<AlgebraExpr>),
    OrderBy(Vec<SortSpec>, Box<AlgebraExpr>),
    Concat(Box<AlgebraExpr>),
    Cross(Box<AlgebraExpr>, Box<AlgebraExpr>),
    Union(Box<AlgebraExpr>, Box<AlgebraExpr>),
    Intersect(Box<AlgebraExpr>, Box<AlgebraExpr>),
    Difference(Box<AlgebraExpr>, Box<AlgebraExpr>),
}

impl AlgebraExpr {
    pub fn source(name: impl Into<String>) -> Self {
        AlgebraExpr::Source(name.into())
    }

    pub fn select(phi: DnCondition, input: AlgebraExpr) -> Self {
        AlgebraExpr::Select(phi, Box::new(input))
    }

    pub fn project(phi: MsgCondition, input: AlgebraExpr) -> Self {
        AlgebraExpr::Project(phi, Box::new(input))
    }

    pub fn dedup(input: AlgebraExpr) -> Self {
        AlgebraExpr::Dedup(Box::new(input))
    }

    pub fn group_agg(specs: Vec<GroupSpec>, input: AlgebraExpr) -> Self {
        AlgebraExpr::GroupAgg(specs, Box::new(input))
    }

    pub fn group_agg_across(specs: Vec<GroupSpec>, input: AlgebraExpr) -> Self {
        AlgebraExpr::GroupAggAcross(specs, Box::new(input))
    }

    pub fn order_by(specs: Vec<SortSpec>, input: AlgebraExpr) -> Self {
        AlgebraExpr::OrderBy(specs, Box::new(input))
    }

    pub fn concat(input: AlgebraExpr) -> Self {
        AlgebraExpr::Concat(Box::new(input))
    }

    pub fn cross(left: AlgebraExpr, right: AlgebraExpr) -> Self {
        AlgebraExpr::Cross(Box::new(left), Box::new(right))
    }

    pub fn union(left: AlgebraExpr, right: AlgebraExpr) -> Self {
        AlgebraExpr::Union(Box::new(left), Box::new(right))
    }

    pub fn intersect(left: AlgebraExpr, right: AlgebraExpr) -> Self {
        AlgebraExpr::Intersect(Box::new(left), Box::new(right))
    }

    pub fn difference(left: AlgebraExpr, right: AlgebraExpr) -> Self {
        AlgebraExpr::Difference(Box::new(left), Box::new(right))
    }

    /// Short operator name, as used by the surface syntax.
    pub fn operator(&self) -> &'static str {
        match self {
            AlgebraExpr::Constant(_) => "message",
            AlgebraExpr::EmptyInstance => "empty",
            AlgebraExpr::EmptyNarrative => "emptydn",
            AlgebraExpr::Source(_) => "source",
            AlgebraExpr::Select(..) => "select",
            AlgebraExpr::Project(..) => "project",
            AlgebraExpr::Dedup(_) => "dedup",
            AlgebraExpr::GroupAgg(..) => "groupagg",
            AlgebraExpr::GroupAggAcross(..) => "groupaggacross",
            AlgebraExpr::OrderBy(..) => "orderby",
            AlgebraExpr::Concat(_) => "concat",
            AlgebraExpr::Cross(..) => "cross",
            AlgebraExpr::Union(..) => "union",
            AlgebraExpr::Intersect(..) => "intersect",
            AlgebraExpr::Difference(..) => "diff",
        }
    }

    pub fn children(&self) -> Vec<&AlgebraExpr> {
        match self {
            AlgebraExpr::Constant(_)
            | AlgebraExpr::EmptyInstance
            | AlgebraExpr::EmptyNarrative
            | AlgebraExpr::Source(_) => vec![],
            AlgebraExpr::Select(_, e)
            | AlgebraExpr::Project(_, e)
            | AlgebraExpr::Dedup(e)
            | AlgebraExpr::GroupAgg(_, e)
            | AlgebraExpr::GroupAggAcross(_, e)
            | AlgebraExpr::OrderBy(_, e)
            | AlgebraExpr::Concat(e) => vec![e],
            AlgebraExpr::Cross(a, b)
            | AlgebraExpr::Union(a, b)
            | AlgebraExpr::Intersect(a, b)
            | AlgebraExpr::Difference(a, b) => vec![a, b],
        }
    }

    /// Number of operator nodes.
    pub fn size(&self) -> usize {
        1 + self
            .children()
            .into_iter()
            .map(AlgebraExpr::size)
            .sum::<usize>()
    }

    /// Every operator name occurring in the tree, pre-order.
    pub fn operators(&self) -> Vec<&'static str> {
        let mut out = vec![self.operator()];
        for child in self.children() {
            out.extend(child.operators());
        }
        out
    }
}
