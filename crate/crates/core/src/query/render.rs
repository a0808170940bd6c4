//! Pretty-printing back to the surface syntax. `parse_query(&render(e))`
//! returns `e` for every core expression.

use std::fmt::{self, Display, Write};

use crate::algebra::{AlgebraExpr, GroupSpec, SortSpec};
use crate::condition::{DnCondition, MsgCondition};
use crate::model::Message;

/// Double-quotes `s`, escaping backslashes, quotes and control characters.
pub fn quote(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\t' => out.push_str("\\t"),
            '\r' => out.push_str("\\r"),
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

pub fn render(e: &AlgebraExpr) -> String {
    e.to_string()
}

fn list<T: Display>(items: impl IntoIterator<Item = T>) -> String {
    items
        .into_iter()
        .map(|i| i.to_string())
        .collect::<Vec<_>>()
        .join(", ")
}

impl Display for MsgCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MsgCondition::True => f.write_str("true"),
            MsgCondition::False => f.write_str("false"),
            MsgCondition::IsEmpty => f.write_str("isEmpty"),
            MsgCondition::HasChar(c) => write!(f, "hasChar({})", quote(c.as_str())),
            MsgCondition::HasMeasure(v) => write!(f, "hasMeasure({})", quote(v.as_str())),
            MsgCondition::HasPredicate(p) => write!(f, "hasPredicate({})", quote(p.as_str())),
            MsgCondition::HasCharRel(k, c) => {
                write!(f, "hasCharRel({}, {})", k.keyword(), quote(c.as_str()))
            }
            MsgCondition::HasCharRelInv(k, c) => {
                write!(f, "hasCharRelInv({}, {})", k.keyword(), quote(c.as_str()))
            }
            MsgCondition::And(a, b) => write!(f, "and({a}, {b})"),
            MsgCondition::Or(a, b) => write!(f, "or({a}, {b})"),
            MsgCondition::Not(a) => write!(f, "not({a})"),
        }
    }
}

impl Display for DnCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DnCondition::True => f.write_str("true"),
            DnCondition::False => f.write_str("false"),
            DnCondition::Exists(phi) => write!(f, "exists({phi})"),
            DnCondition::ForAll(phi) => write!(f, "forall({phi})"),
            DnCondition::MsgPairRel(k) => write!(f, "msgrel({})", k.keyword()),
            DnCondition::And(a, b) => write!(f, "and({a}, {b})"),
            DnCondition::Or(a, b) => write!(f, "or({a}, {b})"),
            DnCondition::Not(a) => write!(f, "not({a})"),
        }
    }
}

impl Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.condition, self.aggregator)
    }
}

impl Display for SortSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.condition, self.sorter)
    }
}

pub(crate) fn render_constant(m: &Message) -> String {
    let mut out = String::from("message([");
    out.push_str(&list(m.characters.iter().map(|c| quote(c.as_str()))));
    out.push_str("]; [");
    out.push_str(&list(m.measures.iter().map(|v| quote(v.as_str()))));
    let _ = write!(out, "]; {})", quote(m.predicate.as_str()));
    out
}

impl Display for AlgebraExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AlgebraExpr::Constant(m) => f.write_str(&render_constant(m)),
            AlgebraExpr::EmptyInstance => f.write_str("empty"),
            AlgebraExpr::EmptyNarrative => f.write_str("emptydn"),
            AlgebraExpr::Source(name) => f.write_str(name),
            AlgebraExpr::Select(phi, e) => write!(f, "select({phi}, {e})"),
            AlgebraExpr::Project(phi, e) => write!(f, "project({phi}, {e})"),
            AlgebraExpr::Dedup(e) => write!(f, "dedup({e})"),
            AlgebraExpr::GroupAgg(specs, e) => write!(f, "groupagg([{}], {e})", list(specs)),
            AlgebraExpr::GroupAggAcross(specs, e) => {
                write!(f, "groupaggacross([{}], {e})", list(specs))
            }
            AlgebraExpr::OrderBy(specs, e) => write!(f, "orderby([{}], {e})", list(specs)),
            AlgebraExpr::Concat(e) => write!(f, "concat({e})"),
            AlgebraExpr::Cross(a, b) => write!(f, "cross({a}, {b})"),
            AlgebraExpr::Union(a, b) => write!(f, "union({a}, {b})"),
            AlgebraExpr::Intersect(a, b) => write!(f, "intersect({a}, {b})"),
            AlgebraExpr::Difference(a, b) => write!(f, "diff({a}, {b})"),
        }
    }
}
