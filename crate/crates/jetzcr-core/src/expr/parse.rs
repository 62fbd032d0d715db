//! Parser for the expression grammar.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := factor (('*' | '/') factor)*
//! factor := '-' factor | power
//! power  := atom ('^' nat)?
//! atom   := nat | 'x' | 'y' | jet | '(' expr ')'
//! jet    := u<k> | u<k>'['a','b']' | u<k>'_'[xy]+      (k omitted when m = 1)
//! ```
//!
//! `*` is never implicit and exponents are nonnegative integer literals.
//! Rational literals are ordinary quotients: `3/4` parses as a division.

use alloc::boxed::Box;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use super::ast::Expr;
use super::poly::{JetCoordinate, Var};
use super::DiffFunction;

/// Parse failure, with a byte position into the input.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseError {
    /// Malformed input at `pos`.
    Syntax { pos: usize, message: String },
    /// An identifier that is neither `x`, `y` nor a jet coordinate.
    UnknownIdentifier { pos: usize, name: String },
    /// Jet coordinate `u<k>` with `k` outside `1..=dependents`.
    DependentOutOfRange { pos: usize, dep: u32, dependents: u32 },
    /// A denominator that canonicalizes to zero.
    ZeroDenominator { pos: usize },
}

impl core::fmt::Display for ParseError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            ParseError::Syntax { pos, message } => write!(f, "syntax error at {pos}: {message}"),
            ParseError::UnknownIdentifier { pos, name } => {
                write!(f, "unknown identifier `{name}` at {pos}")
            }
            ParseError::DependentOutOfRange { pos, dep, dependents } => write!(
                f,
                "dependent index {dep} at {pos} out of range 1..={dependents}"
            ),
            ParseError::ZeroDenominator { pos } => {
                write!(f, "division by an expression that is zero, at {pos}")
            }
        }
    }
}

impl core::error::Error for ParseError {}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
}

struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn tokens(src: &'a str) -> Result<Vec<(Tok, usize)>, ParseError> {
        let mut lx = Lexer {
            src: src.as_bytes(),
            pos: 0,
        };
        let mut out = Vec::new();
        loop {
            lx.skip_ws();
            if lx.pos >= lx.src.len() {
                return Ok(out);
            }
            let start = lx.pos;
            let c = lx.src[lx.pos];
            let tok = match c {
                b'+' => {
                    lx.pos += 1;
                    Tok::Plus
                }
                b'-' => {
                    lx.pos += 1;
                    Tok::Minus
                }
                b'*' => {
                    lx.pos += 1;
                    Tok::Star
                }
                b'/' => {
                    lx.pos += 1;
                    Tok::Slash
                }
                b'^' => {
                    lx.pos += 1;
                    Tok::Caret
                }
                b'(' => {
                    lx.pos += 1;
                    Tok::LParen
                }
                b')' => {
                    lx.pos += 1;
                    Tok::RParen
                }
                b'[' => {
                    lx.pos += 1;
                    Tok::LBracket
                }
                b']' => {
                    lx.pos += 1;
                    Tok::RBracket
                }
                b',' => {
                    lx.pos += 1;
                    Tok::Comma
                }
                b'0'..=b'9' => {
                    while lx.pos < lx.src.len() && lx.src[lx.pos].is_ascii_digit() {
                        lx.pos += 1;
                    }
                    let text = core::str::from_utf8(&lx.src[start..lx.pos]).expect("ascii digits");
                    Tok::Int(text.parse().expect("digits parse as integer"))
                }
                c if c.is_ascii_alphabetic() || c == b'_' => {
                    while lx.pos < lx.src.len()
                        && (lx.src[lx.pos].is_ascii_alphanumeric() || lx.src[lx.pos] == b'_')
                    {
                        lx.pos += 1;
                    }
                    let text = core::str::from_utf8(&lx.src[start..lx.pos]).expect("ascii ident");
                    Tok::Ident(text.to_string())
                }
                other => {
                    return Err(ParseError::Syntax {
                        pos: start,
                        message: format!("unexpected character `{}`", other as char),
                    })
                }
            };
            out.push((tok, start));
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    at: usize,
    len: usize,
    dependents: u32,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|(t, _)| t)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.at).map(|&(_, p)| p).unwrap_or(self.len)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.at).map(|(t, _)| t.clone());
        if t.is_some() {
            self.at += 1;
        }
        t
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<(), ParseError> {
        if self.peek() == Some(&tok) {
            self.at += 1;
            Ok(())
        } else {
            Err(self.err(what))
        }
    }

    fn err(&self, expected: &str) -> ParseError {
        ParseError::Syntax {
            pos: self.pos(),
            message: match self.peek() {
                Some(_) => format!("expected {expected}"),
                None => format!("expected {expected}, found end of input"),
            },
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.at += 1;
                    acc = Expr::Add(Box::new(acc), Box::new(self.term()?));
                }
                Some(Tok::Minus) => {
                    self.at += 1;
                    acc = Expr::Sub(Box::new(acc), Box::new(self.term()?));
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.at += 1;
                    acc = Expr::Mul(Box::new(acc), Box::new(self.factor()?));
                }
                Some(Tok::Slash) => {
                    self.at += 1;
                    acc = Expr::Div(Box::new(acc), Box::new(self.factor()?));
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<Expr, ParseError> {
        if self.peek() == Some(&Tok::Minus) {
            self.at += 1;
            return Ok(Expr::Neg(Box::new(self.factor()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let base = self.atom()?;
        if self.peek() == Some(&Tok::Caret) {
            self.at += 1;
            let pos = self.pos();
            match self.bump() {
                Some(Tok::Int(n)) => {
                    let e = n.to_u32().ok_or(ParseError::Syntax {
                        pos,
                        message: "exponent too large".to_string(),
                    })?;
                    Ok(Expr::Pow(Box::new(base), e))
                }
                _ => Err(ParseError::Syntax {
                    pos,
                    message: "expected a nonnegative integer exponent".to_string(),
                }),
            }
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        let pos = self.pos();
        match self.bump() {
            Some(Tok::Int(n)) => Ok(Expr::Integer(n)),
            Some(Tok::LParen) => {
                let inner = self.expr()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(inner)
            }
            Some(Tok::Ident(name)) => self.ident(pos, &name),
            _ => Err(ParseError::Syntax {
                pos,
                message: "expected a number, identifier or `(`".to_string(),
            }),
        }
    }

    fn ident(&mut self, pos: usize, name: &str) -> Result<Expr, ParseError> {
        if name == "x" {
            return Ok(Expr::X);
        }
        if name == "y" {
            return Ok(Expr::Y);
        }
        let Some(rest) = name.strip_prefix('u') else {
            return Err(ParseError::UnknownIdentifier {
                pos,
                name: name.to_string(),
            });
        };
        let digits_end = rest
            .bytes()
            .position(|b| !b.is_ascii_digit())
            .unwrap_or(rest.len());
        let (digits, suffix) = rest.split_at(digits_end);
        let dep: u32 = if digits.is_empty() {
            // Bare `u` stands for `u1` in the single-dependent case.
            if self.dependents == 1 {
                1
            } else {
                return Err(ParseError::UnknownIdentifier {
                    pos,
                    name: name.to_string(),
                });
            }
        } else {
            digits.parse().map_err(|_| ParseError::Syntax {
                pos,
                message: "dependent index too large".to_string(),
            })?
        };
        if dep == 0 || dep > self.dependents {
            return Err(ParseError::DependentOutOfRange {
                pos,
                dep,
                dependents: self.dependents,
            });
        }
        let idx = if suffix.is_empty() {
            if self.peek() == Some(&Tok::LBracket) {
                self.at += 1;
                let a = self.index_number()?;
                self.expect(Tok::Comma, "`,`")?;
                let b = self.index_number()?;
                self.expect(Tok::RBracket, "`]`")?;
                (a, b)
            } else {
                (0, 0)
            }
        } else {
            let Some(letters) = suffix.strip_prefix('_') else {
                return Err(ParseError::UnknownIdentifier {
                    pos,
                    name: name.to_string(),
                });
            };
            let mut a = 0;
            let mut b = 0;
            for ch in letters.chars() {
                match ch {
                    'x' => a += 1,
                    'y' => b += 1,
                    _ => {
                        return Err(ParseError::UnknownIdentifier {
                            pos,
                            name: name.to_string(),
                        })
                    }
                }
            }
            if letters.is_empty() {
                return Err(ParseError::UnknownIdentifier {
                    pos,
                    name: name.to_string(),
                });
            }
            (a, b)
        };
        Ok(Expr::Jet(JetCoordinate::new(dep, idx.0, idx.1)))
    }

    fn index_number(&mut self) -> Result<u32, ParseError> {
        let pos = self.pos();
        match self.bump() {
            Some(Tok::Int(n)) => n.to_u32().ok_or(ParseError::Syntax {
                pos,
                message: "derivative order too large".to_string(),
            }),
            _ => Err(ParseError::Syntax {
                pos,
                message: "expected a nonnegative integer".to_string(),
            }),
        }
    }
}

/// Parse an expression into its raw tree form.
pub fn parse_to_ast(text: &str, dependents: u32) -> Result<Expr, ParseError> {
    let toks = Lexer::tokens(text)?;
    let mut p = Parser {
        toks,
        at: 0,
        len: text.len(),
        dependents,
    };
    let e = p.expr()?;
    if p.at != p.toks.len() {
        return Err(ParseError::Syntax {
            pos: p.pos(),
            message: "trailing input".to_string(),
        });
    }
    Ok(e)
}

/// Parse an expression and canonicalize it.
pub fn parse_expr(text: &str, dependents: u32) -> Result<DiffFunction, ParseError> {
    let ast = parse_to_ast(text, dependents)?;
    lower(&ast, text.len())
}

fn lower(e: &Expr, end: usize) -> Result<DiffFunction, ParseError> {
    Ok(match e {
        Expr::Integer(n) => DiffFunction::from(n.clone()),
        Expr::X => DiffFunction::var(Var::X),
        Expr::Y => DiffFunction::var(Var::Y),
        Expr::Jet(c) => DiffFunction::coordinate(*c),
        Expr::Neg(a) => -lower(a, end)?,
        Expr::Add(a, b) => lower(a, end)? + lower(b, end)?,
        Expr::Sub(a, b) => lower(a, end)? - lower(b, end)?,
        Expr::Mul(a, b) => lower(a, end)? * lower(b, end)?,
        Expr::Div(a, b) => {
            let num = lower(a, end)?;
            let den = lower(b, end)?;
            num.checked_div(&den)
                .ok_or(ParseError::ZeroDenominator { pos: end })?
        }
        Expr::Pow(a, e) => lower(a, end)?.pow(*e),
    })
}

