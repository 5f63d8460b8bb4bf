//! The `.cfr` rulebase grammar.
//!
//! One statement per line:
//!
//! ```text
//! # comment
//! rule r1: IF alarm THEN burglary CF 0.7
//! rule r2: IF a AND (b OR c) THEN h CF 0.5
//! evidence alarm = 1
//! ```
//!
//! Keywords are case-insensitive; proposition and rule names are not.
//! AND binds tighter than OR, parentheses group. Errors carry line and
//! column.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::cf::CertaintyFactor;
use crate::network::{Antecedent, NetworkError, Rule};

#[derive(Debug, Error, PartialEq)]
#[error("line {line}, column {column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

/// A parsed rule file: the rules plus any `evidence` assertions it declares.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct RulebaseDocument {
    pub rules: Vec<Rule>,
    pub evidence: BTreeMap<String, CertaintyFactor>,
}

impl RulebaseDocument {
    pub fn parse(text: &str) -> Result<Self, ParseError> {
        let mut doc = RulebaseDocument::default();
        let mut seen_ids = BTreeMap::new();
        for (index, raw) in text.lines().enumerate() {
            let line_no = index + 1;
            let line = match raw.find('#') {
                Some(pos) => &raw[..pos],
                None => raw,
            };
            if line.trim().is_empty() {
                continue;
            }
            let mut lexer = Lexer::new(line, line_no);
            let first = lexer.expect_word()?;
            match first.text.to_ascii_lowercase().as_str() {
                "rule" => {
                    let rule = parse_rule(&mut lexer)?;
                    if let Some(&previous) = seen_ids.get(&rule.id) {
                        return Err(ParseError {
                            line: line_no,
                            column: first.column,
                            message: format!(
                                "duplicate rule id '{}' (first declared on line {previous})",
                                rule.id
                            ),
                        });
                    }
                    seen_ids.insert(rule.id.clone(), line_no);
                    doc.rules.push(rule);
                }
                "evidence" => {
                    let (prop, cf) = parse_evidence(&mut lexer)?;
                    doc.evidence.insert(prop, cf);
                }
                other => {
                    return Err(ParseError {
                        line: line_no,
                        column: first.column,
                        message: format!("expected 'rule' or 'evidence', found '{other}'"),
                    });
                }
            }
        }
        Ok(doc)
    }

    /// Canonical text form; [`RulebaseDocument::parse`] inverts it exactly.
    pub fn serialize(&self) -> String {
        let mut out = String::new();
        for rule in &self.rules {
            out.push_str(&format!(
                "rule {}: IF {} THEN {} CF {}\n",
                rule.id, rule.antecedent, rule.consequent, rule.cf
            ));
        }
        for (prop, cf) in &self.evidence {
            out.push_str(&format!("evidence {prop} = {cf}\n"));
        }
        out
    }
}

impl fmt::Display for RulebaseDocument {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.serialize())
    }
}

struct Token {
    text: String,
    column: usize,
}

struct Lexer<'a> {
    chars: Vec<char>,
    pos: usize,
    line: usize,
    source: std::marker::PhantomData<&'a str>,
}

impl<'a> Lexer<'a> {
    fn new(line: &'a str, line_no: usize) -> Self {
        Lexer {
            chars: line.chars().collect(),
            pos: 0,
            line: line_no,
            source: std::marker::PhantomData,
        }
    }

    fn error(&self, column: usize, message: impl Into<String>) -> ParseError {
        ParseError {
            line: self.line,
            column,
            message: message.into(),
        }
    }

    fn skip_whitespace(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_whitespace();
        self.chars.get(self.pos).copied()
    }

    fn column(&mut self) -> usize {
        self.skip_whitespace();
        self.pos + 1
    }

    /// A word: identifier, number, or a single punctuation character.
    fn next_token(&mut self) -> Option<Token> {
        self.skip_whitespace();
        let start = self.pos;
        let first = *self.chars.get(self.pos)?;
        if first == '(' || first == ')' || first == ':' || first == '=' {
            self.pos += 1;
            return Some(Token {
                text: first.to_string(),
                column: start + 1,
            });
        }
        while self.pos < self.chars.len() {
            let c = self.chars[self.pos];
            if c.is_whitespace() || c == '(' || c == ')' || c == ':' || c == '=' {
                break;
            }
            self.pos += 1;
        }
        Some(Token {
            text: self.chars[start..self.pos].iter().collect(),
            column: start + 1,
        })
    }

    fn expect_word(&mut self) -> Result<Token, ParseError> {
        let column = self.column();
        self.next_token()
            .ok_or_else(|| self.error(column, "unexpected end of line"))
    }

    fn expect_exact(&mut self, expected: &str) -> Result<(), ParseError> {
        let token = self.expect_word()?;
        if token.text.eq_ignore_ascii_case(expected) {
            Ok(())
        } else {
            Err(self.error(
                token.column,
                format!("expected '{expected}', found '{}'", token.text),
            ))
        }
    }

    fn expect_identifier(&mut self, what: &str) -> Result<Token, ParseError> {
        let token = self.expect_word()?;
        let ok = !token.text.is_empty()
            && token
                .text
                .chars()
                .all(|c| c.is_alphanumeric() || c == '_' || c == '-')
            && token.text.chars().next().unwrap().is_alphabetic();
        if !ok {
            return Err(self.error(
                token.column,
                format!("expected {what}, found '{}'", token.text),
            ));
        }
        if RESERVED
            .iter()
            .any(|kw| token.text.eq_ignore_ascii_case(kw))
        {
            return Err(self.error(
                token.column,
                format!("keyword '{}' cannot be used as {what}", token.text),
            ));
        }
        Ok(token)
    }

    fn expect_end(&mut self) -> Result<(), ParseError> {
        if let Some(token) = self.next_token() {
            return Err(self.error(
                token.column,
                format!("unexpected trailing input '{}'", token.text),
            ));
        }
        Ok(())
    }
}

const RESERVED: [&str; 7] = ["rule", "evidence", "if", "then", "cf", "and", "or"];

fn parse_rule(lexer: &mut Lexer) -> Result<Rule, ParseError> {
    let id = lexer.expect_identifier("a rule id")?;
    lexer.expect_exact(":")?;
    lexer.expect_exact("IF")?;
    let antecedent = parse_or_expr(lexer)?;
    lexer.expect_exact("THEN")?;
    let consequent = lexer.expect_identifier("a proposition")?;
    lexer.expect_exact("CF")?;
    let cf = parse_cf_literal(lexer)?;
    lexer.expect_end()?;
    Rule::new(id.text.clone(), antecedent, consequent.text, cf).map_err(|e| match e {
        NetworkError::SelfReference { .. } => ParseError {
            line: lexer.line,
            column: id.column,
            message: format!(
                "rule '{}' uses its consequent in its own antecedent",
                id.text
            ),
        },
        other => ParseError {
            line: lexer.line,
            column: id.column,
            message: other.to_string(),
        },
    })
}

fn parse_evidence(lexer: &mut Lexer) -> Result<(String, CertaintyFactor), ParseError> {
    let prop = lexer.expect_identifier("a proposition")?;
    lexer.expect_exact("=")?;
    let cf = parse_cf_literal(lexer)?;
    lexer.expect_end()?;
    Ok((prop.text, cf))
}

fn parse_cf_literal(lexer: &mut Lexer) -> Result<CertaintyFactor, ParseError> {
    let token = lexer.expect_word()?;
    let value: f64 = token.text.parse().map_err(|_| {
        lexer.error(
            token.column,
            format!("expected a number, found '{}'", token.text),
        )
    })?;
    CertaintyFactor::new(value).map_err(|_| {
        lexer.error(
            token.column,
            format!("certainty factor {value} outside [-1, 1]"),
        )
    })
}

fn parse_or_expr(lexer: &mut Lexer) -> Result<Antecedent, ParseError> {
    let mut parts = vec![parse_and_expr(lexer)?];
    loop {
        let before = lexer.pos;
        match lexer.next_token() {
            Some(token) if token.text.eq_ignore_ascii_case("or") => {
                parts.push(parse_and_expr(lexer)?);
            }
            Some(_) | None => {
                lexer.pos = before;
                break;
            }
        }
    }
    Ok(if parts.len() == 1 {
        parts.pop().unwrap()
    } else {
        Antecedent::or(parts)
    })
}

fn parse_and_expr(lexer: &mut Lexer) -> Result<Antecedent, ParseError> {
    let mut parts = vec![parse_primary(lexer)?];
    loop {
        let before = lexer.pos;
        match lexer.next_token() {
            Some(token) if token.text.eq_ignore_ascii_case("and") => {
                parts.push(parse_primary(lexer)?);
            }
            Some(_) | None => {
                lexer.pos = before;
                break;
            }
        }
    }
    Ok(if parts.len() == 1 {
        parts.pop().unwrap()
    } else {
        Antecedent::and(parts)
    })
}

fn parse_primary(lexer: &mut Lexer) -> Result<Antecedent, ParseError> {
    match lexer.peek() {
        Some('(') => {
            lexer.next_token();
            let inner = parse_or_expr(lexer)?;
            let column = lexer.column();
            match lexer.next_token() {
                Some(token) if token.text == ")" => Ok(inner),
                _ => Err(lexer.error(column, "expected ')'")),
            }
        }
        _ => {
            let prop = lexer.expect_identifier("a proposition")?;
            Ok(Antecedent::prop(prop.text))
        }
    }
}

/// The burglary-story rulebase in concrete syntax.
pub const HOLMES_CFR: &str = "\
# An alarm supports both a burglary and an earthquake; the radio report\n\
# independently supports the earthquake.\n\
rule r1: IF alarm THEN burglary CF 0.7\n\
rule r2: IF alarm THEN earthquake CF 0.3\n\
rule r3: IF phone_call THEN alarm CF 0.8\n\
rule r4: IF radio THEN earthquake CF 0.9\n";
