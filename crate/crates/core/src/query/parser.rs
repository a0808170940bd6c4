//! Recursive-descent parser producing core algebra expressions.

use std::collections::BTreeSet;

use super::lexer::{tokenize, Token, TokenKind};
use super::{ParseError, ParseErrorKind};
use crate::algebra::{AggregatorKind, AlgebraExpr, GroupSpec, SortSpec, SorterKind};
use crate::condition::{DnCondition, MsgCondition};
use crate::derived::{expand_compare, expand_drilldown, expand_join, expand_rollup};
use crate::model::{Character, Measure, Message, Predicate};
use crate::relations::RelationKind;

const EXPR_OPERATORS: &[&str] = &[
    "select",
    "project",
    "dedup",
    "groupagg",
    "groupaggacross",
    "orderby",
    "concat",
    "cross",
    "union",
    "intersect",
    "diff",
    "message",
    "join",
    "rollup",
    "drilldown",
    "compare",
];

const MSG_CONDITIONS: &[&str] = &[
    "hasChar",
    "hasMeasure",
    "hasPredicate",
    "hasCharRel",
    "hasCharRelInv",
    "isEmpty",
    "and",
    "or",
    "not",
    "true",
    "false",
];

const DN_CONDITIONS: &[&str] = &[
    "exists", "forall", "msgrel", "and", "or", "not", "true", "false",
];

const SORTERS: &[&str] = &["byCharLex", "byMeasureLex", "byPosition", "reversed"];

/// Parses a query into a core expression, expanding macros.
pub fn parse_query(text: &str) -> Result<AlgebraExpr, ParseError> {
    let mut parser = Parser {
        tokens: tokenize(text)?,
        pos: 0,
    };
    let expr = parser.expr()?;
    parser.eat(&TokenKind::Semicolon);
    parser.expect(TokenKind::Eof)?;
    Ok(expr)
}

fn is(word: &str, keyword: &str) -> bool {
    word.eq_ignore_ascii_case(keyword)
}

fn quoted(words: &[&str]) -> Vec<String> {
    words.iter().map(|w| format!("`{w}`")).collect()
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.tokens[self.pos.min(self.tokens.len() - 1)]
    }

    fn peek_kind_at(&self, offset: usize) -> &TokenKind {
        &self.tokens[(self.pos + offset).min(self.tokens.len() - 1)].kind
    }

    fn next(&mut self) -> Token {
        let token = self.peek().clone();
        if self.pos < self.tokens.len() - 1 {
            self.pos += 1;
        }
        token
    }

    fn eat(&mut self, kind: &TokenKind) -> bool {
        if &self.peek().kind == kind {
            self.next();
            true
        } else {
            false
        }
    }

    fn error_at(&self, token: &Token, kind: ParseErrorKind, expected: Vec<String>) -> ParseError {
        ParseError {
            kind,
            line: token.line,
            column: token.column,
            expected,
        }
    }

    fn unexpected(&self, expected: Vec<String>) -> ParseError {
        let token = self.peek();
        self.error_at(
            token,
            ParseErrorKind::Syntax {
                found: token.kind.to_string(),
            },
            expected,
        )
    }

    fn expect(&mut self, kind: TokenKind) -> Result<Token, ParseError> {
        if self.peek().kind == kind {
            Ok(self.next())
        } else {
            Err(self.unexpected(vec![kind.to_string()]))
        }
    }

    /// Separator between argument `index` and the next one of `operator`.
    fn separator(
        &mut self,
        operator: &str,
        arity: usize,
        sep: TokenKind,
    ) -> Result<(), ParseError> {
        if self.eat(&sep) {
            return Ok(());
        }
        if self.peek().kind == TokenKind::RParen {
            let token = self.peek().clone();
            return Err(self.error_at(
                &token,
                ParseErrorKind::ArityMismatch {
                    operator: operator.to_string(),
                    expected: arity,
                },
                vec![sep.to_string()],
            ));
        }
        Err(self.unexpected(vec![sep.to_string()]))
    }

    fn close(&mut self, operator: &str, arity: usize) -> Result<(), ParseError> {
        if self.eat(&TokenKind::RParen) {
            return Ok(());
        }
        if matches!(self.peek().kind, TokenKind::Comma | TokenKind::Semicolon) {
            let token = self.peek().clone();
            return Err(self.error_at(
                &token,
                ParseErrorKind::ArityMismatch {
                    operator: operator.to_string(),
                    expected: arity,
                },
                vec![TokenKind::RParen.to_string()],
            ));
        }
        Err(self.unexpected(vec![TokenKind::RParen.to_string()]))
    }

    fn string(&mut self) -> Result<(Token, String), ParseError> {
        let token = self.peek().clone();
        match &token.kind {
            TokenKind::Str(s) => {
                let s = s.clone();
                self.next();
                Ok((token, s))
            }
            _ => Err(self.unexpected(vec!["string".into()])),
        }
    }

    fn label<T>(
        &mut self,
        make: impl FnOnce(&str) -> Result<T, crate::model::ModelError>,
    ) -> Result<T, ParseError> {
        let (token, text) = self.string()?;
        make(&text)
            .map_err(|e| self.error_at(&token, ParseErrorKind::InvalidLabel(e.to_string()), vec![]))
    }

    fn character(&mut self) -> Result<Character, ParseError> {
        self.label(Character::new)
    }

    fn string_list<T>(
        &mut self,
        make: impl Fn(&str) -> Result<T, crate::model::ModelError>,
    ) -> Result<Vec<T>, ParseError> {
        self.expect(TokenKind::LBracket)?;
        let mut items = Vec::new();
        if self.eat(&TokenKind::RBracket) {
            return Ok(items);
        }
        loop {
            items.push(self.label(&make)?);
            if self.eat(&TokenKind::RBracket) {
                return Ok(items);
            }
            if !self.eat(&TokenKind::Comma) {
                return Err(self.unexpected(vec![
                    TokenKind::Comma.to_string(),
                    TokenKind::RBracket.to_string(),
                ]));
            }
        }
    }

    fn character_set(&mut self, macro_name: &str) -> Result<BTreeSet<Character>, ParseError> {
        let token = self.peek().clone();
        let chars: BTreeSet<Character> = self.string_list(Character::new)?.into_iter().collect();
        if chars.is_empty() {
            return Err(self.error_at(
                &token,
                ParseErrorKind::Macro(format!("`{macro_name}` needs at least one character")),
                vec!["string".into()],
            ));
        }
        Ok(chars)
    }

    /// An identifier, or an error listing `expected`.
    fn word(&mut self, expected: &[&str]) -> Result<(Token, String), ParseError> {
        let token = self.peek().clone();
        match &token.kind {
            TokenKind::Ident(w) => {
                let w = w.clone();
                self.next();
                Ok((token, w))
            }
            _ => Err(self.unexpected(quoted(expected))),
        }
    }

    fn expr(&mut self) -> Result<AlgebraExpr, ParseError> {
        let (token, word) = self.word(&["expression"])?;
        let w = word.to_ascii_lowercase();
        if self.peek().kind != TokenKind::LParen {
            return match w.as_str() {
                "empty" => Ok(AlgebraExpr::EmptyInstance),
                "emptydn" => Ok(AlgebraExpr::EmptyNarrative),
                _ if EXPR_OPERATORS.contains(&w.as_str()) => {
                    Err(self.unexpected(vec![TokenKind::LParen.to_string()]))
                }
                _ => Ok(AlgebraExpr::Source(word)),
            };
        }
        if !EXPR_OPERATORS.contains(&w.as_str()) {
            return Err(self.error_at(
                &token,
                ParseErrorKind::UnknownOperator(word),
                quoted(EXPR_OPERATORS),
            ));
        }
        self.expect(TokenKind::LParen)?;
        let comma = || TokenKind::Comma;
        let expr = match w.as_str() {
            "select" => {
                let phi = self.dn_condition()?;
                self.separator(&w, 2, comma())?;
                AlgebraExpr::select(phi, self.expr()?)
            }
            "project" => {
                let phi = self.msg_condition()?;
                self.separator(&w, 2, comma())?;
                AlgebraExpr::project(phi, self.expr()?)
            }
            "dedup" => AlgebraExpr::dedup(self.expr()?),
            "concat" => AlgebraExpr::concat(self.expr()?),
            "groupagg" | "groupaggacross" => {
                let specs = self.group_specs()?;
                self.separator(&w, 2, comma())?;
                let input = self.expr()?;
                if w == "groupagg" {
                    AlgebraExpr::group_agg(specs, input)
                } else {
                    AlgebraExpr::group_agg_across(specs, input)
                }
            }
            "orderby" => {
                let specs = self.sort_specs()?;
                self.separator(&w, 2, comma())?;
                AlgebraExpr::order_by(specs, self.expr()?)
            }
            "cross" | "union" | "intersect" | "diff" => {
                let left = self.expr()?;
                self.separator(&w, 2, comma())?;
                let right = self.expr()?;
                match w.as_str() {
                    "cross" => AlgebraExpr::cross(left, right),
                    "union" => AlgebraExpr::union(left, right),
                    "intersect" => AlgebraExpr::intersect(left, right),
                    _ => AlgebraExpr::difference(left, right),
                }
            }
            "message" => {
                let characters = self.string_list(Character::new)?;
                self.separator(&w, 3, TokenKind::Semicolon)?;
                let measures = self.string_list(Measure::new)?;
                self.separator(&w, 3, TokenKind::Semicolon)?;
                let (_, predicate) = self.string()?;
                self.close(&w, 3)?;
                return Ok(AlgebraExpr::Constant(Message::new(
                    characters,
                    measures,
                    Predicate::new(&predicate),
                )));
            }
            "join" => {
                let shared = self.character_set(&w)?;
                self.separator(&w, 3, comma())?;
                let left = self.expr()?;
                self.separator(&w, 3, comma())?;
                let right = self.expr()?;
                self.close(&w, 3)?;
                return expand_join(&shared, left, right).map_err(|e| {
                    self.error_at(&token, ParseErrorKind::Macro(e.to_string()), vec![])
                });
            }
            "rollup" | "drilldown" => {
                let c = self.character()?;
                self.separator(&w, 2, comma())?;
                let input = self.expr()?;
                if w == "rollup" {
                    expand_rollup(&c, input)
                } else {
                    expand_drilldown(&c, input)
                }
            }
            "compare" => {
                let chars = self.character_set(&w)?;
                self.separator(&w, 2, comma())?;
                let input = self.expr()?;
                self.close(&w, 2)?;
                return expand_compare(&chars, input).map_err(|e| {
                    self.error_at(&token, ParseErrorKind::Macro(e.to_string()), vec![])
                });
            }
            _ => unreachable!("operator list and match arms agree"),
        };
        let arity = match w.as_str() {
            "dedup" | "concat" => 1,
            _ => 2,
        };
        self.close(&w, arity)?;
        Ok(expr)
    }

    fn relation(&mut self) -> Result<RelationKind, ParseError> {
        let keywords: Vec<&str> = RelationKind::ALL.iter().map(|k| k.keyword()).collect();
        let (token, word) = self.word(&keywords)?;
        RelationKind::from_keyword(&word).ok_or_else(|| {
            self.error_at(
                &token,
                ParseErrorKind::UnknownRelation(word),
                quoted(&keywords),
            )
        })
    }

    fn aggregator(&mut self) -> Result<AggregatorKind, ParseError> {
        let keywords: Vec<&str> = AggregatorKind::ALL.iter().map(|a| a.keyword()).collect();
        let (token, word) = self.word(&keywords)?;
        AggregatorKind::from_keyword(&word).ok_or_else(|| {
            self.error_at(
                &token,
                ParseErrorKind::UnknownAggregator(word),
                quoted(&keywords),
            )
        })
    }

    fn sorter(&mut self) -> Result<SorterKind, ParseError> {
        let (token, word) = self.word(SORTERS)?;
        if is(&word, "reversed") {
            self.expect(TokenKind::LParen)?;
            let inner = self.sorter()?;
            self.close("reversed", 1)?;
            return Ok(inner.reversed());
        }
        if is(&word, "byCharLex") {
            Ok(SorterKind::ByCharLex)
        } else if is(&word, "byMeasureLex") {
            Ok(SorterKind::ByMeasureLex)
        } else if is(&word, "byPosition") {
            Ok(SorterKind::ByPosition)
        } else {
            Err(self.error_at(&token, ParseErrorKind::UnknownSorter(word), quoted(SORTERS)))
        }
    }

    fn spec_list<T>(
        &mut self,
        mut item: impl FnMut(&mut Self, MsgCondition) -> Result<T, ParseError>,
    ) -> Result<Vec<T>, ParseError> {
        self.expect(TokenKind::LBracket)?;
        let mut specs = Vec::new();
        loop {
            let phi = self.msg_condition()?;
            self.expect(TokenKind::Colon)?;
            specs.push(item(self, phi)?);
            if self.eat(&TokenKind::RBracket) {
                return Ok(specs);
            }
            if !self.eat(&TokenKind::Comma) {
                return Err(self.unexpected(vec![
                    TokenKind::Comma.to_string(),
                    TokenKind::RBracket.to_string(),
                ]));
            }
        }
    }

    fn group_specs(&mut self) -> Result<Vec<GroupSpec>, ParseError> {
        self.spec_list(|p, phi| Ok(GroupSpec::new(phi, p.aggregator()?)))
    }

    fn sort_specs(&mut self) -> Result<Vec<SortSpec>, ParseError> {
        self.spec_list(|p, phi| Ok(SortSpec::new(phi, p.sorter()?)))
    }

    /// Arguments of `and`/`or`: two or more, folded to the left.
    fn connective_args<T>(
        &mut self,
        name: &str,
        mut operand: impl FnMut(&mut Self) -> Result<T, ParseError>,
        combine: impl Fn(T, T) -> T,
    ) -> Result<T, ParseError> {
        self.expect(TokenKind::LParen)?;
        let mut acc = operand(self)?;
        self.separator(name, 2, TokenKind::Comma)?;
        acc = combine(acc, operand(self)?);
        while self.eat(&TokenKind::Comma) {
            acc = combine(acc, operand(self)?);
        }
        self.expect(TokenKind::RParen)?;
        Ok(acc)
    }

    fn unary<T>(
        &mut self,
        name: &str,
        operand: impl FnOnce(&mut Self) -> Result<T, ParseError>,
    ) -> Result<T, ParseError> {
        self.expect(TokenKind::LParen)?;
        let value = operand(self)?;
        self.close(name, 1)?;
        Ok(value)
    }

    fn msg_condition(&mut self) -> Result<MsgCondition, ParseError> {
        let (token, word) = self.word(MSG_CONDITIONS)?;
        let w = word.to_ascii_lowercase();
        let call = self.peek().kind == TokenKind::LParen;
        match (w.as_str(), call) {
            ("true", false) => Ok(MsgCondition::True),
            ("false", false) => Ok(MsgCondition::False),
            ("isempty", false) => Ok(MsgCondition::IsEmpty),
            ("haschar", true) => {
                self.unary("hasChar", |p| p.character().map(MsgCondition::HasChar))
            }
            ("hasmeasure", true) => self.unary("hasMeasure", |p| {
                p.label(Measure::new).map(MsgCondition::HasMeasure)
            }),
            ("haspredicate", true) => self.unary("hasPredicate", |p| {
                p.string()
                    .map(|(_, s)| MsgCondition::HasPredicate(Predicate::new(&s)))
            }),
            ("hascharrel" | "hascharrelinv", true) => {
                self.expect(TokenKind::LParen)?;
                let kind = self.relation()?;
                self.separator(&word, 2, TokenKind::Comma)?;
                let c = self.character()?;
                self.close(&word, 2)?;
                Ok(if w == "hascharrel" {
                    MsgCondition::HasCharRel(kind, c)
                } else {
                    MsgCondition::HasCharRelInv(kind, c)
                })
            }
            ("and", true) => self.connective_args("and", Self::msg_condition, MsgCondition::and),
            ("or", true) => self.connective_args("or", Self::msg_condition, MsgCondition::or),
            ("not", true) => self.unary("not", |p| p.msg_condition().map(MsgCondition::not)),
            ("true" | "false" | "isempty", true) => Err(self.unexpected(vec![
                TokenKind::Comma.to_string(),
                TokenKind::RParen.to_string(),
                TokenKind::Colon.to_string(),
            ])),
            (name, false) if MSG_CONDITIONS.iter().any(|k| is(k, name)) => {
                Err(self.unexpected(vec![TokenKind::LParen.to_string()]))
            }
            _ => Err(self.error_at(
                &token,
                ParseErrorKind::UnknownCondition(word),
                quoted(MSG_CONDITIONS),
            )),
        }
    }

    fn dn_condition(&mut self) -> Result<DnCondition, ParseError> {
        let (token, word) = self.word(DN_CONDITIONS)?;
        let w = word.to_ascii_lowercase();
        let call = self.peek().kind == TokenKind::LParen;
        match (w.as_str(), call) {
            ("true", false) => Ok(DnCondition::True),
            ("false", false) => Ok(DnCondition::False),
            ("exists", true) => {
                self.unary("exists", |p| p.msg_condition().map(DnCondition::Exists))
            }
            ("forall", true) => {
                self.unary("forall", |p| p.msg_condition().map(DnCondition::ForAll))
            }
            ("msgrel", true) => self.unary("msgrel", |p| p.relation().map(DnCondition::MsgPairRel)),
            ("and", true) => self.connective_args("and", Self::dn_condition, DnCondition::and),
            ("or", true) => self.connective_args("or", Self::dn_condition, DnCondition::or),
            ("not", true) => self.unary("not", |p| p.dn_condition().map(DnCondition::not)),
            ("true" | "false", true) => Err(self.unexpected(vec![
                TokenKind::Comma.to_string(),
                TokenKind::RParen.to_string(),
            ])),
            (name, false) if DN_CONDITIONS.iter().any(|k| is(k, name)) => {
                Err(self.unexpected(vec![TokenKind::LParen.to_string()]))
            }
            _ => {
                // A message condition used where a narrative one is required.
                let hint = if MSG_CONDITIONS.iter().any(|k| is(k, &w))
                    && self.peek_kind_at(0) == &TokenKind::LParen
                {
                    format!("{word} (wrap it in exists(...) or forall(...))")
                } else {
                    word
                };
                Err(self.error_at(
                    &token,
                    ParseErrorKind::UnknownCondition(hint),
                    quoted(DN_CONDITIONS),
                ))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ch(s: &str) -> Character {
        Character::new(s).unwrap()
    }

    #[test]
    fn selection_example() {
        let e = parse_query(r#"select(exists(hasMeasure("stroke deaths")), db)"#).unwrap();
        assert_eq!(
            e,
            AlgebraExpr::select(
                DnCondition::Exists(MsgCondition::HasMeasure(
                    Measure::new("stroke deaths").unwrap()
                )),
                AlgebraExpr::source("db")
            )
        );
    }

    #[test]
    fn projection_example() {
        let e = parse_query(r#"project(hasChar("black women"), db);"#).unwrap();
        assert_eq!(
            e,
            AlgebraExpr::project(
                MsgCondition::HasChar(ch("black women")),
                AlgebraExpr::source("db")
            )
        );
    }

    #[test]
    fn macros_expand_while_parsing() {
        let e = parse_query(r#"rollup("black women", db)"#).unwrap();
        assert_eq!(
            e,
            expand_rollup(&ch("black women"), AlgebraExpr::source("db"))
        );
        let e = parse_query(r#"compare(["women", "stroke"], db)"#).unwrap();
        assert_eq!(
            e,
            expand_compare(
                &BTreeSet::from([ch("women"), ch("stroke")]),
                AlgebraExpr::source("db")
            )
            .unwrap()
        );
    }

    #[test]
    fn keywords_are_case_insensitive() {
        let a = parse_query(r#"SELECT(Exists(HASCHAR("x")), db)"#).unwrap();
        let b = parse_query(r#"select(exists(hasChar("x")), db)"#).unwrap();
        assert_eq!(a, b);
        assert_ne!(
            parse_query(r#"project(hasChar("X"), db)"#).unwrap(),
            parse_query(r#"project(hasChar("x"), db)"#).unwrap()
        );
    }

    #[test]
    fn constants_and_literals() {
        let e = parse_query(r#"cross(message(["a"]; []; ""), emptydn)"#).unwrap();
        assert_eq!(
            e,
            AlgebraExpr::cross(
                AlgebraExpr::Constant(Message::new([ch("a")], [], Predicate::empty())),
                AlgebraExpr::EmptyNarrative
            )
        );
        assert_eq!(parse_query("EMPTY").unwrap(), AlgebraExpr::EmptyInstance);
    }

    #[test]
    fn variadic_connectives_fold_left() {
        let e = parse_query(r#"project(and(hasChar("a"), hasChar("b"), isEmpty), db)"#).unwrap();
        let expected = MsgCondition::HasChar(ch("a"))
            .and(MsgCondition::HasChar(ch("b")))
            .and(MsgCondition::IsEmpty);
        assert_eq!(e, AlgebraExpr::project(expected, AlgebraExpr::source("db")));
    }

    #[test]
    fn missing_condition_reports_column() {
        let err = parse_query("select(, db)").unwrap_err();
        assert_eq!((err.line, err.column), (1, 8));
        assert!(matches!(err.kind, ParseErrorKind::Syntax { .. }));
        assert!(err.expected.contains(&"`exists`".to_string()));
    }

    #[test]
    fn unknown_names() {
        let err = parse_query("frobnicate(db)").unwrap_err();
        assert_eq!(
            err.kind,
            ParseErrorKind::UnknownOperator("frobnicate".into())
        );
        let err = parse_query(r#"groupagg([true: average], db)"#).unwrap_err();
        assert_eq!(
            err.kind,
            ParseErrorKind::UnknownAggregator("average".into())
        );
        assert_eq!(err.column, 17);
        let err = parse_query(r#"orderby([true: byColour], db)"#).unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::UnknownSorter("byColour".into()));
        let err = parse_query(r#"select(msgrel(near), db)"#).unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::UnknownRelation("near".into()));
    }

    #[test]
    fn arity_mismatches() {
        let err = parse_query("cross(db)").unwrap_err();
        assert_eq!(
            err.kind,
            ParseErrorKind::ArityMismatch {
                operator: "cross".into(),
                expected: 2
            }
        );
        let err = parse_query("dedup(db, db)").unwrap_err();
        assert!(matches!(
            err.kind,
            ParseErrorKind::ArityMismatch { expected: 1, .. }
        ));
    }

    #[test]
    fn macro_parameter_errors() {
        let err = parse_query("compare([], db)").unwrap_err();
        assert!(matches!(err.kind, ParseErrorKind::Macro(_)));
        let err = parse_query(r#"rollup("   ", db)"#).unwrap_err();
        assert!(matches!(err.kind, ParseErrorKind::InvalidLabel(_)));
    }

    #[test]
    fn trailing_input_is_rejected() {
        let err = parse_query("db db").unwrap_err();
        assert_eq!(err.column, 4);
        assert_eq!(err.expected, vec!["end of input".to_string()]);
    }

    #[test]
    fn message_condition_in_selection_hints_at_quantifier() {
        let err = parse_query(r#"select(hasChar("a"), db)"#).unwrap_err();
        let ParseErrorKind::UnknownCondition(msg) = &err.kind else {
            panic!("{err}")
        };
        assert!(msg.contains("exists"));
    }
}
