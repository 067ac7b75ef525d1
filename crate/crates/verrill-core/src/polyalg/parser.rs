//! Recursive-descent parser for the polynomial text grammar.
//!
//! ```text
//! expr   := ['-'] term { ('+'|'-') term }
//! term   := factor { '*' factor }
//! factor := atom [ '^' UINT ]
//! atom   := NUMBER | IDENT | '(' expr ')'
//! NUMBER := UINT [ '/' UINT ]      (rational literal, nonzero denominator)
//! ```
//!
//! Implicit multiplication is not allowed and exponents must be nonnegative
//! integers; `x^-1` is a syntax error. Identifiers must belong to the
//! declared variable set.

use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{MPoly, PolyError, VarSet};

pub(crate) fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Caret,
    Slash,
    LParen,
    RParen,
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    pos: usize,
}

fn lex(text: &str) -> Result<Vec<Token>, PolyError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        let pos = i;
        match c {
            ' ' | '\t' | '\n' | '\r' => {
                i += 1;
            }
            '+' => {
                out.push(Token {
                    tok: Tok::Plus,
                    pos,
                });
                i += 1;
            }
            '-' => {
                out.push(Token {
                    tok: Tok::Minus,
                    pos,
                });
                i += 1;
            }
            '*' => {
                out.push(Token {
                    tok: Tok::Star,
                    pos,
                });
                i += 1;
            }
            '^' => {
                out.push(Token {
                    tok: Tok::Caret,
                    pos,
                });
                i += 1;
            }
            '/' => {
                out.push(Token {
                    tok: Tok::Slash,
                    pos,
                });
                i += 1;
            }
            '(' => {
                out.push(Token {
                    tok: Tok::LParen,
                    pos,
                });
                i += 1;
            }
            ')' => {
                out.push(Token {
                    tok: Tok::RParen,
                    pos,
                });
                i += 1;
            }
            '0'..='9' => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let digits = &text[start..i];
                let value = digits.parse::<BigInt>().expect("digit run parses");
                out.push(Token {
                    tok: Tok::Int(value),
                    pos,
                });
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let start = i;
                while i < bytes.len()
                    && ((bytes[i] as char).is_ascii_alphanumeric() || bytes[i] == b'_')
                {
                    i += 1;
                }
                out.push(Token {
                    tok: Tok::Ident(text[start..i].to_string()),
                    pos,
                });
            }
            other => {
                return Err(PolyError::Syntax {
                    pos,
                    message: alloc::format!("unexpected character `{other}`"),
                });
            }
        }
    }
    Ok(out)
}

struct Parser<'a> {
    tokens: Vec<Token>,
    cursor: usize,
    end: usize,
    vars: &'a Arc<VarSet>,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.cursor)
    }

    fn bump(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.cursor).cloned();
        if t.is_some() {
            self.cursor += 1;
        }
        t
    }

    fn expr(&mut self) -> Result<MPoly, PolyError> {
        let mut negate = false;
        if matches!(self.peek().map(|t| &t.tok), Some(Tok::Minus)) {
            self.bump();
            negate = true;
        }
        let mut acc = self.term()?;
        if negate {
            acc = acc.neg();
        }
        loop {
            match self.peek().map(|t| t.tok.clone()) {
                Some(Tok::Plus) => {
                    self.bump();
                    let rhs = self.term()?;
                    acc = acc.add(&rhs);
                }
                Some(Tok::Minus) => {
                    self.bump();
                    let rhs = self.term()?;
                    acc = acc.sub(&rhs);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<MPoly, PolyError> {
        let mut acc = self.factor()?;
        while matches!(self.peek().map(|t| &t.tok), Some(Tok::Star)) {
            self.bump();
            let rhs = self.factor()?;
            acc = acc.mul(&rhs);
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<MPoly, PolyError> {
        let base = self.atom()?;
        if matches!(self.peek().map(|t| &t.tok), Some(Tok::Caret)) {
            self.bump();
            match self.bump() {
                Some(Token {
                    tok: Tok::Int(n), ..
                }) => {
                    let e: u32 = n.to_string().parse().map_err(|_| PolyError::Syntax {
                        pos: self.tokens[self.cursor - 1].pos,
                        message: "exponent too large".to_string(),
                    })?;
                    Ok(base.pow(e))
                }
                Some(t) => Err(PolyError::Syntax {
                    pos: t.pos,
                    message: "expected a nonnegative integer exponent".to_string(),
                }),
                None => Err(PolyError::Syntax {
                    pos: self.end,
                    message: "expected a nonnegative integer exponent".to_string(),
                }),
            }
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<MPoly, PolyError> {
        match self.bump() {
            Some(Token {
                tok: Tok::Int(n), ..
            }) => {
                // Optional `/ UINT` forms a rational literal.
                if matches!(self.peek().map(|t| &t.tok), Some(Tok::Slash)) {
                    self.bump();
                    match self.bump() {
                        Some(Token {
                            tok: Tok::Int(d),
                            pos,
                        }) => {
                            if d.is_zero() {
                                return Err(PolyError::Syntax {
                                    pos,
                                    message: "zero denominator".to_string(),
                                });
                            }
                            Ok(MPoly::constant(self.vars, BigRational::new(n, d)))
                        }
                        Some(t) => Err(PolyError::Syntax {
                            pos: t.pos,
                            message: "expected an integer denominator".to_string(),
                        }),
                        None => Err(PolyError::Syntax {
                            pos: self.end,
                            message: "expected an integer denominator".to_string(),
                        }),
                    }
                } else {
                    Ok(MPoly::constant(
                        self.vars,
                        BigRational::new(n, BigInt::one()),
                    ))
                }
            }
            Some(Token {
                tok: Tok::Ident(name),
                pos,
            }) => match self.vars.index_of(&name) {
                Some(i) => Ok(MPoly::var(self.vars, i)),
                None => Err(PolyError::UnknownVariable { pos, name }),
            },
            Some(Token {
                tok: Tok::LParen, ..
            }) => {
                let inner = self.expr()?;
                match self.bump() {
                    Some(Token {
                        tok: Tok::RParen, ..
                    }) => Ok(inner),
                    Some(t) => Err(PolyError::Syntax {
                        pos: t.pos,
                        message: "expected `)`".to_string(),
                    }),
                    None => Err(PolyError::Syntax {
                        pos: self.end,
                        message: "expected `)`".to_string(),
                    }),
                }
            }
            Some(t) => Err(PolyError::Syntax {
                pos: t.pos,
                message: "expected a number, variable, or parenthesized expression".to_string(),
            }),
            None => Err(PolyError::Syntax {
                pos: self.end,
                message: "unexpected end of input".to_string(),
            }),
        }
    }
}

/// Parses polynomial text over the declared variable set.
///
/// `parse(p.to_string())` recovers `p` exactly; see the grammar above for
/// what the text may contain.
pub fn parse(text: &str, vars: &Arc<VarSet>) -> Result<MPoly, PolyError> {
    let tokens = lex(text)?;
    let mut parser = Parser {
        tokens,
        cursor: 0,
        end: text.len(),
        vars,
    };
    let poly = parser.expr()?;
    if let Some(t) = parser.peek() {
        let hint = if matches!(t.tok, Tok::Ident(_) | Tok::Int(_) | Tok::LParen) {
            "unexpected token; implicit multiplication is not allowed"
        } else {
            "unexpected token"
        };
        return Err(PolyError::Syntax {
            pos: t.pos,
            message: hint.to_string(),
        });
    }
    Ok(poly)
}
