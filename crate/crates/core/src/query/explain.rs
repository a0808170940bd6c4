use std::fmt::Write;

use super::render::render_constant;
use super::rewrite::rewrite_traced;
use crate::algebra::AlgebraExpr;

fn node_label(e: &AlgebraExpr) -> String {
    let list = |items: Vec<String>| format!("[{}]", items.join(", "));
    match e {
        AlgebraExpr::Constant(m) => render_constant(m),
        AlgebraExpr::EmptyInstance | AlgebraExpr::EmptyNarrative => e.operator().to_string(),
        AlgebraExpr::Source(name) => format!("source {name}"),
        AlgebraExpr::Select(phi, _) => format!("select {phi}"),
        AlgebraExpr::Project(phi, _) => format!("project {phi}"),
        AlgebraExpr::GroupAgg(specs, _) | AlgebraExpr::GroupAggAcross(specs, _) => format!(
            "{} {}",
            e.operator(),
            list(specs.iter().map(|s| s.to_string()).collect())
        ),
        AlgebraExpr::OrderBy(specs, _) => format!(
            "orderby {}",
            list(specs.iter().map(|s| s.to_string()).collect())
        ),
        _ => e.operator().to_string(),
    }
}

/// One line per operator, children indented two spaces below their parent.
pub fn render_tree(e: &AlgebraExpr) -> String {
    fn walk(e: &AlgebraExpr, depth: usize, out: &mut String) {
        let _ = writeln!(out, "{}{}", "  ".repeat(depth), node_label(e));
        for child in e.children() {
            walk(child, depth + 1, out);
        }
    }
    let mut out = String::new();
    walk(e, 0, &mut out);
    out
}

/// The plan before and after rewriting, with the rules that fired.
pub fn explain_plan(e: &AlgebraExpr) -> String {
    let (rewritten, applied) = rewrite_traced(e);
    let mut out = String::from("plan:\n");
    for line in render_tree(e).lines() {
        let _ = writeln!(out, "  {line}");
    }
    out.push_str("rewritten:\n");
    for line in render_tree(&rewritten).lines() {
        let _ = writeln!(out, "  {line}");
    }
    if !applied.is_empty() {
        let _ = writeln!(out, "rules: {}", applied.join(", "));
    }
    out
}
