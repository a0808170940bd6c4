//! Equivalence-preserving rewrites. Every rule removes at least one operator
//! node, so rewriting reaches a fixpoint within `size(e)` passes.

use crate::algebra::AlgebraExpr;
use crate::condition::DnCondition;

pub struct RewriteRule {
    pub name: &'static str,
    pub pattern: &'static str,
    pub replacement: &'static str,
    apply: fn(&AlgebraExpr) -> Option<AlgebraExpr>,
}

impl RewriteRule {
    /// The rewritten node, if the rule matches at the root of `e`.
    pub fn apply(&self, e: &AlgebraExpr) -> Option<AlgebraExpr> {
        (self.apply)(e)
    }
}

static RULES: [RewriteRule; 7] = [
    RewriteRule {
        name: "select-true",
        pattern: "select(true, e)",
        replacement: "e",
        apply: |e| match e {
            AlgebraExpr::Select(DnCondition::True, inner) => Some(inner.as_ref().clone()),
            _ => None,
        },
    },
    RewriteRule {
        name: "select-cascade",
        pattern: "select(φ, select(ψ, e))",
        replacement: "select(and(φ, ψ), e)",
        apply: |e| match e {
            AlgebraExpr::Select(phi, inner) => match inner.as_ref() {
                AlgebraExpr::Select(psi, e) => {
                    Some(AlgebraExpr::Select(phi.clone().and(psi.clone()), e.clone()))
                }
                _ => None,
            },
            _ => None,
        },
    },
    RewriteRule {
        name: "cross-neutral-right",
        pattern: "cross(e, emptydn)",
        replacement: "e",
        apply: |e| match e {
            AlgebraExpr::Cross(a, b) if **b == AlgebraExpr::EmptyNarrative => {
                Some(a.as_ref().clone())
            }
            _ => None,
        },
    },
    RewriteRule {
        name: "cross-neutral-left",
        pattern: "cross(emptydn, e)",
        replacement: "e",
        apply: |e| match e {
            AlgebraExpr::Cross(a, b) if **a == AlgebraExpr::EmptyNarrative => {
                Some(b.as_ref().clone())
            }
            _ => None,
        },
    },
    RewriteRule {
        name: "cross-absorbing",
        pattern: "cross(e, empty) | cross(empty, e)",
        replacement: "empty",
        apply: |e| match e {
            AlgebraExpr::Cross(a, b)
                if **a == AlgebraExpr::EmptyInstance || **b == AlgebraExpr::EmptyInstance =>
            {
                Some(AlgebraExpr::EmptyInstance)
            }
            _ => None,
        },
    },
    RewriteRule {
        name: "dedup-idempotent",
        pattern: "dedup(dedup(e))",
        replacement: "dedup(e)",
        apply: |e| match e {
            AlgebraExpr::Dedup(inner) if matches!(inner.as_ref(), AlgebraExpr::Dedup(_)) => {
                Some(inner.as_ref().clone())
            }
            _ => None,
        },
    },
    RewriteRule {
        name: "union-idempotent",
        pattern: "union(e, e)",
        replacement: "e",
        apply: |e| match e {
            AlgebraExpr::Union(a, b) if a == b => Some(a.as_ref().clone()),
            _ => None,
        },
    },
];

pub fn rules() -> &'static [RewriteRule] {
    &RULES
}

/// Rewrites to a fixpoint.
pub fn rewrite(e: &AlgebraExpr) -> AlgebraExpr {
    rewrite_traced(e).0
}

/// Rewrites to a fixpoint, also returning the names of the rules applied in
/// application order.
pub fn rewrite_traced(e: &AlgebraExpr) -> (AlgebraExpr, Vec<&'static str>) {
    let mut applied = Vec::new();
    let mut current = e.clone();
    for _ in 0..=e.size() {
        let before = applied.len();
        current = pass(&current, &mut applied);
        if applied.len() == before {
            break;
        }
    }
    (current, applied)
}

/// One bottom-up pass: children first, then rules at the node until none
/// matches.
fn pass(e: &AlgebraExpr, applied: &mut Vec<&'static str>) -> AlgebraExpr {
    let mut node = map_children(e, |c| pass(c, applied));
    'outer: loop {
        for rule in rules() {
            if let Some(next) = rule.apply(&node) {
                applied.push(rule.name);
                node = next;
                continue 'outer;
            }
        }
        return node;
    }
}

fn map_children(e: &AlgebraExpr, mut f: impl FnMut(&AlgebraExpr) -> AlgebraExpr) -> AlgebraExpr {
    let mut b = |x: &AlgebraExpr| Box::new(f(x));
    match e {
        AlgebraExpr::Constant(_)
        | AlgebraExpr::EmptyInstance
        | AlgebraExpr::EmptyNarrative
        | AlgebraExpr::Source(_) => e.clone(),
        AlgebraExpr::Select(phi, x) => AlgebraExpr::Select(phi.clone(), b(x)),
        AlgebraExpr::Project(phi, x) => AlgebraExpr::Project(phi.clone(), b(x)),
        AlgebraExpr::Dedup(x) => AlgebraExpr::Dedup(b(x)),
        AlgebraExpr::GroupAgg(s, x) => AlgebraExpr::GroupAgg(s.clone(), b(x)),
        AlgebraExpr::GroupAggAcross(s, x) => AlgebraExpr::GroupAggAcross(s.clone(), b(x)),
        AlgebraExpr::OrderBy(s, x) => AlgebraExpr::OrderBy(s.clone(), b(x)),
        AlgebraExpr::Concat(x) => AlgebraExpr::Concat(b(x)),
        AlgebraExpr::Cross(x, y) => {
            let x = b(x);
            AlgebraExpr::Cross(x, b(y))
        }
        AlgebraExpr::Union(x, y) => {
            let x = b(x);
            AlgebraExpr::Union(x, b(y))
        }
        AlgebraExpr::Intersect(x, y) => {
            let x = b(x);
            AlgebraExpr::Intersect(x, b(y))
        }
        AlgebraExpr::Difference(x, y) => {
            let x = b(x);
            AlgebraExpr::Difference(x, b(y))
        }
    }
}
