//! Recursive-descent parser for the ASCII formula grammar.
//!
//! Grammar, loosest binding first:
//!
//! ```text
//! imp   ::= or ("->" imp)?                 right-associative
//! or    ::= and ("|" and)*                 left-associative
//! and   ::= neg ("&" neg)*                 left-associative
//! neg   ::= "~" neg | primary
//! primary ::= atom | "bot" | "(" imp ")"
//! atom  ::= [a-z][a-zA-Z0-9_]*
//! ```
//!
//! `⊥` is accepted as an alias for `bot`. Whitespace is insignificant.
//! `~f` parses to `f -> bot`; there is no negation node in the AST.

use thiserror::Error;

use crate::formula::{Atom, Formula, LABEL_MARKER};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseError {
    #[error("syntax error at byte {position}: {message}")]
    Syntax { position: usize, message: String },
    #[error("reserved atom {name:?} at byte {position}: names starting with '@' label worlds and may not appear in formulas")]
    ReservedAtom { position: usize, name: String },
}

impl ParseError {
    fn syntax(position: usize, message: impl Into<String>) -> Self {
        ParseError::Syntax {
            position,
            message: message.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Token {
    Ident(String),
    Bot,
    Tilde,
    Amp,
    Bar,
    Arrow,
    LParen,
    RParen,
}

struct Lexer<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn tokens(src: &'a str) -> Result<Vec<(usize, Token)>, ParseError> {
        let mut lexer = Lexer { src, pos: 0 };
        let mut out = Vec::new();
        while let Some(tok) = lexer.next_token()? {
            out.push(tok);
        }
        Ok(out)
    }

    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn next_token(&mut self) -> Result<Option<(usize, Token)>, ParseError> {
        while let Some(c) = self.rest().chars().next() {
            if c.is_whitespace() {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
        let start = self.pos;
        let Some(c) = self.rest().chars().next() else {
            return Ok(None);
        };
        let tok = match c {
            '~' => Token::Tilde,
            '&' => Token::Amp,
            '|' => Token::Bar,
            '(' => Token::LParen,
            ')' => Token::RParen,
            '⊥' => Token::Bot,
            '-' => {
                if self.rest().starts_with("->") {
                    self.pos += 2;
                    return Ok(Some((start, Token::Arrow)));
                }
                return Err(ParseError::syntax(start, "expected '->'"));
            }
            LABEL_MARKER => {
                let name: String = self
                    .rest()
                    .chars()
                    .take_while(|&c| c == LABEL_MARKER || c.is_ascii_alphanumeric() || c == '_')
                    .collect();
                return Err(ParseError::ReservedAtom {
                    position: start,
                    name,
                });
            }
            c if c.is_ascii_lowercase() => {
                let name: String = self
                    .rest()
                    .chars()
                    .take_while(|&c| c.is_ascii_alphanumeric() || c == '_')
                    .collect();
                self.pos += name.len();
                let tok = if name == "bot" {
                    Token::Bot
                } else {
                    Token::Ident(name)
                };
                return Ok(Some((start, tok)));
            }
            other => {
                return Err(ParseError::syntax(
                    start,
                    format!("unexpected character {other:?}"),
                ));
            }
        };
        self.pos += c.len_utf8();
        Ok(Some((start, tok)))
    }
}

struct Parser {
    tokens: Vec<(usize, Token)>,
    cursor: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.cursor).map(|(_, t)| t)
    }

    fn position(&self) -> usize {
        self.tokens
            .get(self.cursor)
            .map(|(p, _)| *p)
            .unwrap_or(self.end)
    }

    fn advance(&mut self) -> Option<Token> {
        let tok = self.tokens.get(self.cursor).map(|(_, t)| t.clone());
        if tok.is_some() {
            self.cursor += 1;
        }
        tok
    }

    fn eat(&mut self, expected: &Token) -> bool {
        if self.peek() == Some(expected) {
            self.cursor += 1;
            true
        } else {
            false
        }
    }

    fn imp(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.or()?;
        if self.eat(&Token::Arrow) {
            let rhs = self.imp()?;
            Ok(Formula::imp(lhs, rhs))
        } else {
            Ok(lhs)
        }
    }

    fn or(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.and()?;
        while self.eat(&Token::Bar) {
            let rhs = self.and()?;
            lhs = Formula::or(lhs, rhs);
        }
        Ok(lhs)
    }

    fn and(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.neg()?;
        while self.eat(&Token::Amp) {
            let rhs = self.neg()?;
            lhs = Formula::and(lhs, rhs);
        }
        Ok(lhs)
    }

    fn neg(&mut self) -> Result<Formula, ParseError> {
        if self.eat(&Token::Tilde) {
            Ok(Formula::not(self.neg()?))
        } else {
            self.primary()
        }
    }

    fn primary(&mut self) -> Result<Formula, ParseError> {
        let position = self.position();
        match self.advance() {
            Some(Token::Ident(name)) => {
                let atom = Atom::new(&name)
                    .map_err(|e| ParseError::syntax(position, e.to_string()))?;
                Ok(Formula::atom(atom))
            }
            Some(Token::Bot) => Ok(Formula::Bottom),
            Some(Token::LParen) => {
                let inner = self.imp()?;
                if self.eat(&Token::RParen) {
                    Ok(inner)
                } else {
                    Err(ParseError::syntax(self.position(), "expected ')'"))
                }
            }
            Some(tok) => Err(ParseError::syntax(
                position,
                format!("unexpected token {tok:?}"),
            )),
            None => Err(ParseError::syntax(position, "unexpected end of input")),
        }
    }
}

/// Parses a formula; the result is unique per the grammar above.
pub fn parse_formula(text: &str) -> Result<Formula, ParseError> {
    let tokens = Lexer::tokens(text)?;
    let mut parser = Parser {
        tokens,
        cursor: 0,
        end: text.len(),
    };
    let formula = parser.imp()?;
    if parser.peek().is_some() {
        return Err(ParseError::syntax(
            parser.position(),
            "trailing input after formula",
        ));
    }
    Ok(formula)
}
