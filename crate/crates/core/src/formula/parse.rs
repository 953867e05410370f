//! Recursive-descent parser for the ASCII formula syntax.
//!
//! Precedence from tightest: `~ [] <>`, then `&`, then `|`, then `->`
//! (right-associative). `&` and `|` associate to the left.

use thiserror::Error;

use super::Formula;

/// A syntax error. `position` is the 0-based character offset.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("syntax error at position {position}: {message}")]
pub struct ParseError {
    pub position: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Token {
    Atom(u32),
    True,
    False,
    Not,
    Box,
    Diamond,
    And,
    Or,
    Implies,
    LParen,
    RParen,
}

fn describe(t: Option<&(usize, Token)>) -> String {
    match t {
        None => "end of input".to_string(),
        Some((_, tok)) => match tok {
            Token::Atom(i) => format!("atom p{i}"),
            Token::True => "'true'".into(),
            Token::False => "'false'".into(),
            Token::Not => "'~'".into(),
            Token::Box => "'[]'".into(),
            Token::Diamond => "'<>'".into(),
            Token::And => "'&'".into(),
            Token::Or => "'|'".into(),
            Token::Implies => "'->'".into(),
            Token::LParen => "'('".into(),
            Token::RParen => "')'".into(),
        },
    }
}

fn error(position: usize, message: impl Into<String>) -> ParseError {
    ParseError {
        position,
        message: message.into(),
    }
}

fn tokenize(text: &str) -> Result<Vec<(usize, Token)>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let start = i;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let pair = |next: char| chars.get(i + 1) == Some(&next);
        let tok = match c {
            '~' => Token::Not,
            '&' => Token::And,
            '|' => Token::Or,
            '(' => Token::LParen,
            ')' => Token::RParen,
            '[' if pair(']') => {
                i += 1;
                Token::Box
            }
            '<' if pair('>') => {
                i += 1;
                Token::Diamond
            }
            '-' if pair('>') => {
                i += 1;
                Token::Implies
            }
            'p' => {
                let digits: String = chars[i + 1..].iter().take_while(|d| d.is_ascii_digit()).collect();
                if digits.is_empty() {
                    return Err(error(start, "expected digits after 'p'"));
                }
                if digits.len() > 1 && digits.starts_with('0') {
                    return Err(error(start, "atom index has a leading zero"));
                }
                let index: u32 = digits.parse().map_err(|_| error(start, "atom index out of range"))?;
                if index == 0 {
                    return Err(error(start, "atom index 0 is not allowed"));
                }
                i += digits.len();
                Token::Atom(index)
            }
            c if c.is_ascii_alphabetic() => {
                let word: String = chars[i..].iter().take_while(|d| d.is_ascii_alphanumeric()).collect();
                let tok = match word.as_str() {
                    "true" => Token::True,
                    "false" => Token::False,
                    _ => return Err(error(start, format!("unknown word '{word}'"))),
                };
                i += word.len() - 1;
                tok
            }
            other => return Err(error(start, format!("unexpected character '{other}'"))),
        };
        out.push((start, tok));
        i += 1;
    }
    Ok(out)
}

struct Parser {
    tokens: Vec<(usize, Token)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos).map(|(_, t)| t)
    }

    fn here(&self) -> usize {
        self.tokens.get(self.pos).map(|(p, _)| *p).unwrap_or(self.end)
    }

    fn unexpected(&self, wanted: &str) -> ParseError {
        error(
            self.here(),
            format!("expected {wanted}, found {}", describe(self.tokens.get(self.pos))),
        )
    }

    fn implication(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.disjunction()?;
        if self.peek() == Some(&Token::Implies) {
            self.pos += 1;
            let rhs = self.implication()?;
            return Ok(Formula::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn disjunction(&mut self) -> Result<Formula, ParseError> {
        let mut acc = self.conjunction()?;
        while self.peek() == Some(&Token::Or) {
            self.pos += 1;
            acc = Formula::or(acc, self.conjunction()?);
        }
        Ok(acc)
    }

    fn conjunction(&mut self) -> Result<Formula, ParseError> {
        let mut acc = self.unary()?;
        while self.peek() == Some(&Token::And) {
            self.pos += 1;
            acc = Formula::and(acc, self.unary()?);
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        let tok = self.peek().cloned();
        match tok {
            Some(Token::Not) => {
                self.pos += 1;
                Ok(Formula::not(self.unary()?))
            }
            Some(Token::Box) => {
                self.pos += 1;
                Ok(Formula::boxed(self.unary()?))
            }
            Some(Token::Diamond) => {
                self.pos += 1;
                Ok(Formula::diamond(self.unary()?))
            }
            Some(Token::Atom(i)) => {
                self.pos += 1;
                Ok(Formula::Atom(i))
            }
            Some(Token::True) => {
                self.pos += 1;
                Ok(Formula::Top)
            }
            Some(Token::False) => {
                self.pos += 1;
                Ok(Formula::Bottom)
            }
            Some(Token::LParen) => {
                self.pos += 1;
                let inner = self.implication()?;
                if self.peek() != Some(&Token::RParen) {
                    return Err(self.unexpected("')'"));
                }
                self.pos += 1;
                Ok(inner)
            }
            _ => Err(self.unexpected("a formula")),
        }
    }
}

/// Parses one formula; trailing input is an error.
pub fn parse(text: &str) -> Result<Formula, ParseError> {
    let tokens = tokenize(text)?;
    let mut parser = Parser {
        tokens,
        pos: 0,
        end: text.chars().count(),
    };
    let f = parser.implication()?;
    if parser.pos != parser.tokens.len() {
        return Err(parser.unexpected("end of input"));
    }
    Ok(f)
}
