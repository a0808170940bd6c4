use std::fmt;

use super::{ParseError, ParseErrorKind};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TokenKind {
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    Colon,
    Semicolon,
    Str(String),
    Ident(String),
    Eof,
}

impl fmt::Display for TokenKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TokenKind::LParen => f.write_str("`(`"),
            TokenKind::RParen => f.write_str("`)`"),
            TokenKind::LBracket => f.write_str("`[`"),
            TokenKind::RBracket => f.write_str("`]`"),
            TokenKind::Comma => f.write_str("`,`"),
            TokenKind::Colon => f.write_str("`:`"),
            TokenKind::Semicolon => f.write_str("`;`"),
            TokenKind::Str(s) => write!(f, "string {s:?}"),
            TokenKind::Ident(s) => write!(f, "`{s}`"),
            TokenKind::Eof => f.write_str("end of input"),
        }
    }
}

/// A token with its 1-based line and column.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub kind: TokenKind,
    pub line: usize,
    pub column: usize,
}

struct Cursor<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    line: usize,
    column: usize,
}

impl Cursor<'_> {
    fn peek(&mut self) -> Option<char> {
        self.chars.peek().copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        if c == '\n' {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
        Some(c)
    }
}

fn lexical(line: usize, column: usize, msg: impl Into<String>) -> ParseError {
    ParseError {
        kind: ParseErrorKind::Lexical(msg.into()),
        line,
        column,
        expected: Vec::new(),
    }
}

pub fn tokenize(src: &str) -> Result<Vec<Token>, ParseError> {
    let mut tokens = Vec::new();
    let mut cur = Cursor {
        chars: src.chars().peekable(),
        line: 1,
        column: 1,
    };

    while let Some(c) = cur.peek() {
        let (line, column) = (cur.line, cur.column);
        let kind = match c {
            '(' => TokenKind::LParen,
            ')' => TokenKind::RParen,
            '[' => TokenKind::LBracket,
            ']' => TokenKind::RBracket,
            ',' => TokenKind::Comma,
            ':' => TokenKind::Colon,
            ';' => TokenKind::Semicolon,
            c if c.is_whitespace() => {
                cur.bump();
                continue;
            }
            '"' => {
                cur.bump();
                let mut text = String::new();
                loop {
                    let (esc_line, esc_column) = (cur.line, cur.column);
                    match cur.bump() {
                        None => return Err(lexical(line, column, "unterminated string")),
                        Some('"') => break,
                        Some('\\') => text.push(match cur.bump() {
                            None => return Err(lexical(line, column, "unterminated string")),
                            Some('"') => '"',
                            Some('\\') => '\\',
                            Some('n') => '\n',
                            Some('t') => '\t',
                            Some('r') => '\r',
                            Some(other) => {
                                return Err(lexical(
                                    esc_line,
                                    esc_column,
                                    format!("unknown escape `\\{other}`"),
                                ))
                            }
                        }),
                        Some(c) => text.push(c),
                    }
                }
                tokens.push(Token {
                    kind: TokenKind::Str(text),
                    line,
                    column,
                });
                continue;
            }
            c if c.is_alphabetic() || c == '_' => {
                let mut word = String::new();
                while let Some(c) = cur.peek().filter(|c| c.is_alphanumeric() || *c == '_') {
                    word.push(c);
                    cur.bump();
                }
                tokens.push(Token {
                    kind: TokenKind::Ident(word),
                    line,
                    column,
                });
                continue;
            }
            other => {
                return Err(lexical(
                    line,
                    column,
                    format!("unexpected character {other:?}"),
                ))
            }
        };
        cur.bump();
        tokens.push(Token { kind, line, column });
    }
    tokens.push(Token {
        kind: TokenKind::Eof,
        line: cur.line,
        column: cur.column,
    });
    Ok(tokens)
}
