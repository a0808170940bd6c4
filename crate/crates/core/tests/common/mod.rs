#![allow(dead_code)]

use std::collections::BTreeSet;
use std::path::PathBuf;

use dnml::algebra::{AggregatorKind, AlgebraExpr, GroupSpec, SortSpec, SorterKind};
use dnml::model::mk_message;
use dnml::storage::{load_database, LoadedDatabase, MessageRecord};
use dnml::{Character, DnCondition, DndbInstance, Measure, Message, MsgCondition, Narrative};
use dnml::{Predicate, RelationKind, RelationStore};
use proptest::prelude::*;
use proptest::sample::{select, subsequence};

pub fn fixture_path() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures/running_example.json")
}

pub fn fixture() -> LoadedDatabase {
    load_database(fixture_path()).expect("fixture loads")
}

pub fn msg(chars: &[&str], measures: &[&str], predicate: &str) -> Message {
    mk_message(chars.iter().copied(), measures.iter().copied(), predicate).unwrap()
}

pub fn ch(s: &str) -> Character {
    Character::new(s).unwrap()
}

/// Messages of the running example, `m(1)` through `m(9)`.
pub fn m(i: usize) -> Message {
    match i {
        1 => msg(&["stroke", "women"], &["lifetime stroke risk"], "at risk"),
        2 => msg(&["stroke", "women"], &["stroke deaths"], "leading cause"),
        3 => msg(
            &["black women", "stroke"],
            &["stroke prevalence"],
            "higher risk",
        ),
        4 => msg(
            &["pregnancy", "stroke"],
            &["risk factor rate"],
            "raises risk",
        ),
        5 => msg(
            &["birth control pills", "stroke"],
            &["risk factor rate"],
            "raises risk",
        ),
        6 => msg(
            &["black women", "white women", "stroke"],
            &["stroke deaths"],
            "compares",
        ),
        7 => msg(
            &["black women", "white women"],
            &["first-time stroke rate"],
            "compares",
        ),
        8 => msg(
            &["abortion pills", "stroke"],
            &["risk factor rate"],
            "raises risk",
        ),
        9 => msg(&["covid", "europe"], &["covid cases"], "peaks"),
        _ => panic!("no message m{i}"),
    }
}

pub fn tuples(i: &DndbInstance) -> BTreeSet<Vec<Message>> {
    i.iter().map(|n| n.messages().to_vec()).collect()
}

pub fn tuple_set<const N: usize>(items: [Vec<Message>; N]) -> BTreeSet<Vec<Message>> {
    items.into_iter().collect()
}

/// A golden instance: a JSON array of narratives, each an array of messages.
pub fn golden(name: &str) -> BTreeSet<Vec<Message>> {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/golden")
        .join(format!("{name}.json"));
    let text = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    let rows: Vec<Vec<MessageRecord>> = serde_json::from_str(&text).unwrap();
    rows.into_iter()
        .map(|row| {
            row.into_iter()
                .map(|r| {
                    mk_message(
                        r.characters.iter().map(String::as_str),
                        r.measures.iter().map(String::as_str),
                        &r.predicate,
                    )
                    .unwrap()
                })
                .collect()
        })
        .collect()
}

pub const CHARS: [&str; 5] = ["a", "b", "c", "d", "say \"hi\""];
pub const MEASURES: [&str; 3] = ["x", "y", "back\\slash"];
pub const PREDICATES: [&str; 3] = ["p", "q", ""];

pub fn character() -> impl Strategy<Value = Character> {
    select(&CHARS[..]).prop_map(ch)
}

pub fn message() -> impl Strategy<Value = Message> {
    (
        subsequence(&CHARS[..], 0..=2),
        subsequence(&MEASURES[..], 0..=2),
        select(&PREDICATES[..]),
    )
        .prop_map(|(c, v, p)| Message {
            characters: c.into_iter().map(ch).collect(),
            measures: v.into_iter().map(|v| Measure::new(v).unwrap()).collect(),
            predicate: Predicate::new(p),
        })
}

pub fn messages(max_len: usize) -> impl Strategy<Value = Vec<Message>> {
    prop::collection::vec(message(), 0..=max_len)
}

/// A source instance of up to `max_narratives` named narratives.
pub fn instance(max_narratives: usize, max_len: usize) -> impl Strategy<Value = DndbInstance> {
    prop::collection::vec(messages(max_len), 0..=max_narratives).prop_map(|rows| {
        DndbInstance::from_narratives(
            rows.into_iter()
                .enumerate()
                .map(|(i, ms)| Narrative::named(format!("n{}", i + 1), ms)),
        )
    })
}

pub fn relation_kind() -> impl Strategy<Value = RelationKind> {
    select(&RelationKind::ALL[..])
}

/// Specialization pairs only go from an earlier to a later label, so the
/// generated hierarchy is acyclic.
pub fn store() -> impl Strategy<Value = RelationStore> {
    let forward: Vec<(usize, usize)> = (0..CHARS.len())
        .flat_map(|i| (i + 1..CHARS.len()).map(move |j| (i, j)))
        .collect();
    let any: Vec<(usize, usize)> = (0..CHARS.len())
        .flat_map(|i| (0..CHARS.len()).map(move |j| (i, j)))
        .collect();
    (
        subsequence(forward, 0..=4),
        prop::collection::vec((relation_kind(), select(any)), 0..=4),
    )
        .prop_map(|(spec, others)| {
            let mut pairs: Vec<_> = spec
                .into_iter()
                .map(|(a, b)| (RelationKind::Specialization, ch(CHARS[a]), ch(CHARS[b])))
                .collect();
            pairs.extend(
                others
                    .into_iter()
                    .filter(|(k, _)| *k != RelationKind::Specialization)
                    .map(|(k, (a, b))| (k, ch(CHARS[a]), ch(CHARS[b]))),
            );
            RelationStore::new(pairs).expect("forward pairs are acyclic")
        })
}

pub fn msg_condition() -> impl Strategy<Value = MsgCondition> {
    let leaf = prop_oneof![
        Just(MsgCondition::True),
        Just(MsgCondition::False),
        Just(MsgCondition::IsEmpty),
        character().prop_map(MsgCondition::HasChar),
        select(&MEASURES[..]).prop_map(|v| MsgCondition::HasMeasure(Measure::new(v).unwrap())),
        select(&PREDICATES[..]).prop_map(|p| MsgCondition::HasPredicate(Predicate::new(p))),
        (relation_kind(), character()).prop_map(|(k, c)| MsgCondition::HasCharRel(k, c)),
        (relation_kind(), character()).prop_map(|(k, c)| MsgCondition::HasCharRelInv(k, c)),
    ];
    leaf.prop_recursive(3, 8, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a.and(b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a.or(b)),
            inner.prop_map(MsgCondition::not),
        ]
    })
}

pub fn dn_condition() -> impl Strategy<Value = DnCondition> {
    let leaf = prop_oneof![
        Just(DnCondition::True),
        Just(DnCondition::False),
        msg_condition().prop_map(DnCondition::Exists),
        msg_condition().prop_map(DnCondition::ForAll),
        relation_kind().prop_map(DnCondition::MsgPairRel),
    ];
    leaf.prop_recursive(2, 6, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a.and(b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a.or(b)),
            inner.prop_map(DnCondition::not),
        ]
    })
}

pub fn aggregator() -> impl Strategy<Value = AggregatorKind> {
    select(&AggregatorKind::ALL[..])
}

pub fn sorter() -> impl Strategy<Value = SorterKind> {
    prop_oneof![
        Just(SorterKind::ByCharLex),
        Just(SorterKind::ByMeasureLex),
        Just(SorterKind::ByPosition),
    ]
    .prop_recursive(2, 3, 1, |inner| inner.prop_map(SorterKind::reversed))
}

pub fn group_specs() -> impl Strategy<Value = Vec<GroupSpec>> {
    prop::collection::vec(
        (msg_condition(), aggregator()).prop_map(|(c, a)| GroupSpec::new(c, a)),
        1..=3,
    )
}

pub fn sort_specs() -> impl Strategy<Value = Vec<SortSpec>> {
    prop::collection::vec(
        (msg_condition(), sorter()).prop_map(|(c, s)| SortSpec::new(c, s)),
        1..=2,
    )
}

/// Core expressions over the sources `r` and `s`, including the shapes the
/// rewrite rules match.
pub fn expr() -> impl Strategy<Value = AlgebraExpr> {
    let leaf = prop_oneof![
        3 => Just(AlgebraExpr::source("r")),
        3 => Just(AlgebraExpr::source("s")),
        1 => message().prop_map(AlgebraExpr::Constant),
        1 => Just(AlgebraExpr::EmptyInstance),
        1 => Just(AlgebraExpr::EmptyNarrative),
    ];
    leaf.prop_recursive(4, 12, 2, |inner| {
        let e = || inner.clone();
        prop_oneof![
            (dn_condition(), e()).prop_map(|(c, x)| AlgebraExpr::select(c, x)),
            (msg_condition(), e()).prop_map(|(c, x)| AlgebraExpr::project(c, x)),
            e().prop_map(AlgebraExpr::dedup),
            (group_specs(), e()).prop_map(|(s, x)| AlgebraExpr::group_agg(s, x)),
            (group_specs(), e()).prop_map(|(s, x)| AlgebraExpr::group_agg_across(s, x)),
            (sort_specs(), e()).prop_map(|(s, x)| AlgebraExpr::order_by(s, x)),
            e().prop_map(AlgebraExpr::concat),
            (e(), e()).prop_map(|(a, b)| AlgebraExpr::cross(a, b)),
            (e(), e()).prop_map(|(a, b)| AlgebraExpr::union(a, b)),
            (e(), e()).prop_map(|(a, b)| AlgebraExpr::intersect(a, b)),
            (e(), e()).prop_map(|(a, b)| AlgebraExpr::difference(a, b)),
            e().prop_map(|x| AlgebraExpr::union(x.clone(), x)),
            e().prop_map(|x| AlgebraExpr::dedup(AlgebraExpr::dedup(x))),
            e().prop_map(|x| AlgebraExpr::select(DnCondition::True, x)),
            (dn_condition(), dn_condition(), e())
                .prop_map(|(a, b, x)| { AlgebraExpr::select(a, AlgebraExpr::select(b, x)) }),
            e().prop_map(|x| AlgebraExpr::cross(x, AlgebraExpr::EmptyNarrative)),
            e().prop_map(|x| AlgebraExpr::cross(AlgebraExpr::EmptyNarrative, x)),
            e().prop_map(|x| AlgebraExpr::cross(AlgebraExpr::EmptyInstance, x)),
        ]
    })
}
