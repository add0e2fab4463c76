//! Recursive-descent parser for the equation grammar.
//!
//! ```text
//! equation from text := expr ("=" expr)? ;
//! expr   := ("-")? term (("+"|"-") term)* ;
//! term   := factor (("*"|"/") factor)* ;
//! factor := base ("^" exponent)? ;
//! exponent := integer | "(" ("-")? integer ("/" integer)? ")" ;
//! base   := number | name | "(" expr ")" | "sqrt(" expr ")"
//!         | "root(" expr "," integer ")" | deriv ;
//! deriv  := unknown "'"* | "diff(" unknown ("," name ("$" integer)?)+ ")" ;
//! ```
//!
//! `sqrt`, `root` and `diff` are reserved words. Every other name must be a
//! declared variable, parameter or unknown.

use num_bigint::BigInt;

use super::ast::Expr;
use crate::error::ParseError;
use crate::kernel::Rat;

/// Declared symbol sets; order of `vars` fixes derivative multi-indices.
#[derive(Debug, Clone, Default)]
pub struct SymbolTable {
    pub vars: Vec<String>,
    pub unknowns: Vec<String>,
    pub params: Vec<String>,
}

impl SymbolTable {
    pub fn validate(&self) -> Result<(), String> {
        let mut seen = std::collections::BTreeSet::new();
        for name in self.vars.iter().chain(&self.unknowns).chain(&self.params) {
            if ["sqrt", "root", "diff"].contains(&name.as_str()) {
                return Err(format!("`{name}` is a reserved word"));
            }
            if !seen.insert(name.clone()) {
                return Err(format!("symbol `{name}` declared twice"));
            }
        }
        if self.vars.is_empty() {
            return Err("no independent variables declared".to_owned());
        }
        if self.unknowns.is_empty() {
            return Err("no unknowns declared".to_owned());
        }
        Ok(())
    }

    fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }
}

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
    Comma,
    Equals,
    Prime,
    Dollar,
}

struct Lexer {
    toks: Vec<(Tok, usize)>,
    end: usize,
}

fn lex(text: &str) -> Result<Lexer, ParseError> {
    let bytes = text.as_bytes();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        let start = i;
        match c {
            ' ' | '\t' | '\r' | '\n' => {
                i += 1;
            }
            '0'..='9' => {
                let mut j = i;
                while j < bytes.len() && bytes[j].is_ascii_digit() {
                    j += 1;
                }
                let lit: BigInt = text[i..j].parse().unwrap();
                toks.push((Tok::Int(lit), start));
                i = j;
            }
            'a'..='z' | 'A'..='Z' | '_' => {
                let mut j = i;
                while j < bytes.len()
                    && (bytes[j].is_ascii_alphanumeric() || bytes[j] == b'_')
                {
                    j += 1;
                }
                toks.push((Tok::Ident(text[i..j].to_owned()), start));
                i = j;
            }
            '+' => {
                toks.push((Tok::Plus, start));
                i += 1;
            }
            '-' => {
                toks.push((Tok::Minus, start));
                i += 1;
            }
            '*' => {
                toks.push((Tok::Star, start));
                i += 1;
            }
            '/' => {
                toks.push((Tok::Slash, start));
                i += 1;
            }
            '^' => {
                toks.push((Tok::Caret, start));
                i += 1;
            }
            '(' => {
                toks.push((Tok::LParen, start));
                i += 1;
            }
            ')' => {
                toks.push((Tok::RParen, start));
                i += 1;
            }
            ',' => {
                toks.push((Tok::Comma, start));
                i += 1;
            }
            '=' => {
                toks.push((Tok::Equals, start));
                i += 1;
            }
            '\'' => {
                toks.push((Tok::Prime, start));
                i += 1;
            }
            '$' => {
                toks.push((Tok::Dollar, start));
                i += 1;
            }
            other => {
                return Err(ParseError::SyntaxError {
                    pos: start,
                    msg: format!("unexpected character `{other}`"),
                })
            }
        }
    }
    Ok(Lexer {
        toks,
        end: text.len(),
    })
}

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    end: usize,
    symbols: &'a SymbolTable,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn here(&self) -> usize {
        self.toks
            .get(self.pos)
            .map(|(_, p)| *p)
            .unwrap_or(self.end)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(t, _)| t.clone());
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, t: Tok, what: &str) -> Result<(), ParseError> {
        if self.peek() == Some(&t) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(&format!("expected {what}")))
        }
    }

    fn err(&self, msg: &str) -> ParseError {
        ParseError::SyntaxError {
            pos: self.here(),
            msg: msg.to_owned(),
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut acc = if self.peek() == Some(&Tok::Minus) {
            self.pos += 1;
            Expr::Neg(Box::new(self.term()?))
        } else {
            self.term()?
        };
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    acc = Expr::add(acc, self.term()?);
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    acc = Expr::sub(acc, self.term()?);
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.pos += 1;
                    acc = Expr::mul(acc, self.factor()?);
                }
                Some(Tok::Slash) => {
                    self.pos += 1;
                    acc = Expr::div(acc, self.factor()?);
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Expr, ParseError> {
        let base = self.base()?;
        if self.peek() == Some(&Tok::Caret) {
            self.pos += 1;
            let e = self.exponent()?;
            return Ok(Expr::Pow(Box::new(base), e));
        }
        Ok(base)
    }

    fn exponent(&mut self) -> Result<Rat, ParseError> {
        match self.bump() {
            Some(Tok::Int(n)) => Ok(Rat::from_integer(n)),
            Some(Tok::LParen) => {
                let neg = if self.peek() == Some(&Tok::Minus) {
                    self.pos += 1;
                    true
                } else {
                    false
                };
                let num = match self.bump() {
                    Some(Tok::Int(n)) => n,
                    _ => return Err(self.err("expected integer in exponent")),
                };
                let den = if self.peek() == Some(&Tok::Slash) {
                    self.pos += 1;
                    match self.bump() {
                        Some(Tok::Int(d)) => d,
                        _ => return Err(self.err("expected integer denominator in exponent")),
                    }
                } else {
                    BigInt::from(1)
                };
                self.expect(Tok::RParen, "`)` closing exponent")?;
                let mut r = Rat::new(num, den);
                if neg {
                    r = -r;
                }
                Ok(r)
            }
            _ => Err(self.err("expected exponent")),
        }
    }

    fn base(&mut self) -> Result<Expr, ParseError> {
        let pos = self.here();
        match self.bump() {
            Some(Tok::Int(n)) => Ok(Expr::Num(Rat::from_integer(n))),
            Some(Tok::LParen) => {
                let e = self.expr()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(e)
            }
            Some(Tok::Ident(name)) => match name.as_str() {
                "sqrt" => {
                    self.expect(Tok::LParen, "`(` after sqrt")?;
                    let e = self.expr()?;
                    self.expect(Tok::RParen, "`)` closing sqrt")?;
                    Ok(Expr::Sqrt(Box::new(e)))
                }
                "root" => {
                    self.expect(Tok::LParen, "`(` after root")?;
                    let e = self.expr()?;
                    self.expect(Tok::Comma, "`,` in root")?;
                    let k = match self.bump() {
                        Some(Tok::Int(n)) => {
                            use num_traits::ToPrimitive;
                            n.to_u32().filter(|&k| k >= 2).ok_or_else(|| {
                                self.err("root index must be an integer >= 2")
                            })?
                        }
                        _ => return Err(self.err("expected integer root index")),
                    };
                    self.expect(Tok::RParen, "`)` closing root")?;
                    Ok(Expr::Root(Box::new(e), k))
                }
                "diff" => self.diff_form(),
                _ => {
                    if self.symbols.unknowns.contains(&name) {
                        // optional primes
                        let mut order = 0usize;
                        while self.peek() == Some(&Tok::Prime) {
                            self.pos += 1;
                            order += 1;
                        }
                        if order > 0 && self.symbols.vars.len() != 1 {
                            return Err(ParseError::SyntaxError {
                                pos,
                                msg: "prime notation needs a single independent variable"
                                    .to_owned(),
                            });
                        }
                        Ok(Expr::Deriv {
                            unknown: name,
                            multi_index: vec![0; order],
                        })
                    } else if self.symbols.vars.contains(&name)
                        || self.symbols.params.contains(&name)
                    {
                        Ok(Expr::Name(name))
                    } else {
                        Err(ParseError::UnknownSymbol { name, pos })
                    }
                }
            },
            _ => Err(ParseError::SyntaxError {
                pos,
                msg: "expected a value".to_owned(),
            }),
        }
    }

    fn diff_form(&mut self) -> Result<Expr, ParseError> {
        self.expect(Tok::LParen, "`(` after diff")?;
        let pos = self.here();
        let unknown = match self.bump() {
            Some(Tok::Ident(u)) if self.symbols.unknowns.contains(&u) => u,
            Some(Tok::Ident(u)) => {
                return Err(ParseError::UnknownSymbol { name: u, pos });
            }
            _ => return Err(self.err("expected unknown in diff")),
        };
        let mut multi: Vec<usize> = Vec::new();
        while self.peek() == Some(&Tok::Comma) {
            self.pos += 1;
            let vpos = self.here();
            let vname = match self.bump() {
                Some(Tok::Ident(v)) => v,
                _ => return Err(self.err("expected variable in diff")),
            };
            let vi = self.symbols.var_index(&vname).ok_or(ParseError::UnknownSymbol {
                name: vname.clone(),
                pos: vpos,
            })?;
            let reps = if self.peek() == Some(&Tok::Dollar) {
                self.pos += 1;
                match self.bump() {
                    Some(Tok::Int(n)) => {
                        use num_traits::ToPrimitive;
                        n.to_usize().filter(|&k| k >= 1).ok_or_else(|| {
                            self.err("expected positive repetition after `$`")
                        })?
                    }
                    _ => return Err(self.err("expected integer after `$`")),
                }
            } else {
                1
            };
            for _ in 0..reps {
                multi.push(vi);
            }
        }
        if multi.is_empty() {
            return Err(self.err("diff needs at least one differentiation variable"));
        }
        self.expect(Tok::RParen, "`)` closing diff")?;
        multi.sort_unstable();
        Ok(Expr::Deriv {
            unknown,
            multi_index: multi,
        })
    }
}

/// Parses one equation; `lhs = rhs` is normalized to `lhs - rhs`.
pub fn parse_equation(text: &str, symbols: &SymbolTable) -> Result<Expr, ParseError> {
    let lexer = lex(text)?;
    let mut p = Parser {
        toks: lexer.toks,
        pos: 0,
        end: lexer.end,
        symbols,
    };
    let lhs = p.expr()?;
    let out = if p.peek() == Some(&Tok::Equals) {
        p.pos += 1;
        let rhs = p.expr()?;
        if rhs == Expr::Num(Rat::from_integer(0.into())) {
            lhs
        } else {
            Expr::sub(lhs, rhs)
        }
    } else {
        lhs
    };
    if p.pos != p.toks.len() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(out)
}
