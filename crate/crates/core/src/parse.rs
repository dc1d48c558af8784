//! Recursive-descent parsers for the term grammar, polynomial expressions
//! and integer-linear forms. All errors carry line/column positions.

use std::collections::BTreeMap;

use num::{BigInt, BigRational, One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::hyper::{Atom, AtomKind, HyperTerm, LinearForm, Roles};
use crate::poly::{Polynomial, Vars};
use crate::ratfun::RationalFunction;

#[derive(Clone, PartialEq, Eq, Debug)]
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
    Eof,
}

#[derive(Clone, Debug)]
struct Spanned {
    tok: Tok,
    line: usize,
    col: usize,
}

fn lex(src: &str) -> Result<Vec<Spanned>> {
    let mut out = Vec::new();
    let mut line = 1usize;
    let mut col = 1usize;
    let mut chars = src.chars().peekable();
    while let Some(&c) = chars.peek() {
        let (tl, tc) = (line, col);
        let advance = |chars: &mut std::iter::Peekable<std::str::Chars>,
                           line: &mut usize,
                           col: &mut usize| {
            let c = chars.next().unwrap();
            if c == '\n' {
                *line += 1;
                *col = 1;
            } else {
                *col += 1;
            }
            c
        };
        if c.is_whitespace() {
            advance(&mut chars, &mut line, &mut col);
            continue;
        }
        let tok = match c {
            '+' => {
                advance(&mut chars, &mut line, &mut col);
                Tok::Plus
            }
            '-' => {
                advance(&mut chars, &mut line, &mut col);
                Tok::Minus
            }
            '*' => {
                advance(&mut chars, &mut line, &mut col);
                Tok::Star
            }
            '/' => {
                advance(&mut chars, &mut line, &mut col);
                Tok::Slash
            }
            '^' => {
                advance(&mut chars, &mut line, &mut col);
                Tok::Caret
            }
            '(' => {
                advance(&mut chars, &mut line, &mut col);
                Tok::LParen
            }
            ')' => {
                advance(&mut chars, &mut line, &mut col);
                Tok::RParen
            }
            ',' => {
                advance(&mut chars, &mut line, &mut col);
                Tok::Comma
            }
            _ if c.is_ascii_digit() => {
                let mut s = String::new();
                while let Some(&d) = chars.peek() {
                    if d.is_ascii_digit() {
                        s.push(advance(&mut chars, &mut line, &mut col));
                    } else {
                        break;
                    }
                }
                Tok::Int(s.parse().unwrap())
            }
            _ if c.is_alphabetic() || c == '_' => {
                let mut s = String::new();
                while let Some(&d) = chars.peek() {
                    if d.is_alphanumeric() || d == '_' {
                        s.push(advance(&mut chars, &mut line, &mut col));
                    } else {
                        break;
                    }
                }
                Tok::Ident(s)
            }
            _ => {
                return Err(Error::Parse {
                    line: tl,
                    col: tc,
                    msg: format!("unexpected character `{c}`"),
                })
            }
        };
        out.push(Spanned {
            tok,
            line: tl,
            col: tc,
        });
    }
    out.push(Spanned {
        tok: Tok::Eof,
        line,
        col,
    });
    Ok(out)
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
    vars: Vars,
}

impl Parser {
    fn new(src: &str, vars: &Vars) -> Result<Self> {
        Ok(Parser {
            toks: lex(src)?,
            pos: 0,
            vars: vars.clone(),
        })
    }

    fn peek(&self) -> &Spanned {
        &self.toks[self.pos]
    }

    fn peek2(&self) -> &Spanned {
        &self.toks[(self.pos + 1).min(self.toks.len() - 1)]
    }

    fn next(&mut self) -> Spanned {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        let s = self.peek();
        Err(Error::Parse {
            line: s.line,
            col: s.col,
            msg: msg.into(),
        })
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<()> {
        if self.peek().tok == tok {
            self.next();
            Ok(())
        } else {
            self.err(format!("expected {what}"))
        }
    }

    fn expect_eof(&self) -> Result<()> {
        if self.peek().tok == Tok::Eof {
            Ok(())
        } else {
            self.err("unexpected trailing input")
        }
    }

    // ---- rational-function expressions ----

    fn rf_expr(&mut self) -> Result<RationalFunction> {
        let mut acc = self.rf_term()?;
        loop {
            match self.peek().tok {
                Tok::Plus => {
                    self.next();
                    acc = acc.add(&self.rf_term()?)?;
                }
                Tok::Minus => {
                    self.next();
                    acc = acc.sub(&self.rf_term()?)?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn rf_term(&mut self) -> Result<RationalFunction> {
        let mut acc = self.rf_unary()?;
        loop {
            match self.peek().tok {
                Tok::Star => {
                    self.next();
                    acc = acc.mul(&self.rf_unary()?)?;
                }
                Tok::Slash => {
                    self.next();
                    let rhs = self.rf_unary()?;
                    if rhs.is_zero() {
                        return self.err("division by zero");
                    }
                    acc = acc.div(&rhs)?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn rf_unary(&mut self) -> Result<RationalFunction> {
        let mut neg = false;
        loop {
            match self.peek().tok {
                Tok::Minus => {
                    self.next();
                    neg = !neg;
                }
                Tok::Plus => {
                    self.next();
                }
                _ => break,
            }
        }
        let v = self.rf_power()?;
        Ok(if neg { v.neg() } else { v })
    }

    fn rf_power(&mut self) -> Result<RationalFunction> {
        let base = self.rf_primary()?;
        if self.peek().tok == Tok::Caret {
            self.next();
            let e = self.signed_int()?;
            if base.is_zero() && e < 0 {
                return self.err("zero raised to a negative power");
            }
            return base.pow(e).map_err(|e| self.err_from(e));
        }
        Ok(base)
    }

    fn err_from(&self, e: Error) -> Error {
        let s = self.peek();
        Error::Parse {
            line: s.line,
            col: s.col,
            msg: e.to_string(),
        }
    }

    fn rf_primary(&mut self) -> Result<RationalFunction> {
        match self.next().tok {
            Tok::Int(n) => Ok(RationalFunction::constant(
                &self.vars,
                BigRational::from_integer(n),
            )),
            Tok::Ident(name) => match Polynomial::variable(&self.vars, &name) {
                Ok(p) => Ok(RationalFunction::from_poly(p)),
                Err(_) => {
                    self.pos -= 1;
                    self.err(format!("undeclared symbol `{name}`"))
                }
            },
            Tok::LParen => {
                let v = self.rf_expr()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(v)
            }
            _ => {
                self.pos -= 1;
                self.err("expected a number, symbol or `(`")
            }
        }
    }

    /// A possibly parenthesized signed integer exponent.
    fn signed_int(&mut self) -> Result<i64> {
        let paren = self.peek().tok == Tok::LParen;
        if paren {
            self.next();
        }
        let mut neg = false;
        while matches!(self.peek().tok, Tok::Minus | Tok::Plus) {
            if self.next().tok == Tok::Minus {
                neg = !neg;
            }
        }
        let n = match self.next().tok {
            Tok::Int(n) => n,
            _ => {
                self.pos -= 1;
                return self.err("expected an integer exponent");
            }
        };
        if paren {
            self.expect(Tok::RParen, "`)`")?;
        }
        let v = n
            .to_i64()
            .ok_or_else(|| self.err_from(Error::Domain("exponent too large".into())))?;
        Ok(if neg { -v } else { v })
    }

    // ---- integer-linear forms ----

    fn linear_form(&mut self) -> Result<LinearForm> {
        let start = self.pos;
        let rf = self.rf_expr()?;
        let poly = match rf.as_poly() {
            Some(p) => p.clone(),
            None => {
                self.pos = start;
                return self.err("expected an integer-linear expression");
            }
        };
        poly_to_linear(&poly).ok_or_else(|| {
            let s = &self.toks[start];
            Error::Parse {
                line: s.line,
                col: s.col,
                msg: format!("`{poly}` is not integer-linear"),
            }
        })
    }

    // ---- hypergeometric term grammar ----

    fn term(&mut self, roles: &Roles) -> Result<HyperTerm> {
        let mut atoms: Vec<Atom> = Vec::new();
        let mut prefactor = RationalFunction::one(&self.vars);
        loop {
            let invert = if atoms.is_empty() && prefactor.is_one() && self.pos == 0 {
                false
            } else {
                match self.peek().tok {
                    Tok::Star => {
                        self.next();
                        false
                    }
                    Tok::Slash => {
                        self.next();
                        true
                    }
                    Tok::Eof => break,
                    _ => {
                        if self.pos == 0 {
                            false
                        } else {
                            return self.err("expected `*`, `/` or end of term");
                        }
                    }
                }
            };
            self.factor(&mut atoms, &mut prefactor, invert)?;
            if self.peek().tok == Tok::Eof {
                break;
            }
        }
        let prefactor = match prefactor.as_poly() {
            Some(p) => p.clone(),
            None => {
                return self.err(
                    "term prefactor must be polynomial (use fact/binom atoms for poles)",
                )
            }
        };
        HyperTerm::new(atoms, prefactor, roles.clone())
    }

    fn factor(
        &mut self,
        atoms: &mut Vec<Atom>,
        prefactor: &mut RationalFunction,
        invert: bool,
    ) -> Result<()> {
        match self.peek().tok.clone() {
            Tok::Ident(name) if name == "binom" || name == "fact" => {
                self.next();
                self.expect(Tok::LParen, "`(`")?;
                let kind = if name == "binom" {
                    let top = self.linear_form()?;
                    self.expect(Tok::Comma, "`,`")?;
                    let bot = self.linear_form()?;
                    AtomKind::Binomial(top, bot)
                } else {
                    AtomKind::Factorial(self.linear_form()?)
                };
                self.expect(Tok::RParen, "`)`")?;
                let mut exp = 1i64;
                if self.peek().tok == Tok::Caret {
                    self.next();
                    exp = self.signed_int()?;
                    if exp == 0 {
                        return self.err("atom exponent must be nonzero");
                    }
                }
                if invert {
                    exp = -exp;
                }
                atoms.push(Atom { kind, exp });
                Ok(())
            }
            Tok::LParen => {
                // either a geometric atom `(c)^(lin)` or a polynomial factor
                self.next();
                let inner = self.rf_expr()?;
                self.expect(Tok::RParen, "`)`")?;
                if self.peek().tok == Tok::Caret && self.peek2().tok == Tok::LParen {
                    // exponent in parens: geometric if base is constant and
                    // the exponent is a genuine linear form
                    let save = self.pos;
                    self.next(); // caret
                    if let Some(base) = constant_of(&inner) {
                        self.expect(Tok::LParen, "`(`")?;
                        let lf = self.linear_form()?;
                        self.expect(Tok::RParen, "`)`")?;
                        if lf.coeffs.is_empty() {
                            // plain constant power
                            let c = rational_int_pow(&base, lf.constant)
                                .ok_or_else(|| self.err_from(Error::Domain(
                                    "zero base with negative exponent".into(),
                                )))?;
                            *prefactor = apply_const(prefactor, c, invert)?;
                        } else {
                            if base.is_zero() {
                                return self.err("geometric base must be nonzero");
                            }
                            let exp = if invert { -1 } else { 1 };
                            atoms.push(Atom {
                                kind: AtomKind::Geometric(base, lf),
                                exp,
                            });
                        }
                        return Ok(());
                    }
                    self.pos = save;
                }
                let mut val = inner;
                if self.peek().tok == Tok::Caret {
                    self.next();
                    let e = self.signed_int()?;
                    val = val.pow(e).map_err(|e| self.err_from(e))?;
                }
                if invert {
                    val = val.recip().map_err(|e| self.err_from(e))?;
                }
                *prefactor = prefactor.mul(&val)?;
                Ok(())
            }
            Tok::Int(_) | Tok::Ident(_) | Tok::Minus => {
                let mut val = self.rf_power_or_unary()?;
                if invert {
                    val = val.recip().map_err(|e| self.err_from(e))?;
                }
                *prefactor = prefactor.mul(&val)?;
                Ok(())
            }
            _ => self.err("expected a factor"),
        }
    }

    fn rf_power_or_unary(&mut self) -> Result<RationalFunction> {
        let mut neg = false;
        while self.peek().tok == Tok::Minus {
            self.next();
            neg = !neg;
        }
        let v = self.rf_power()?;
        Ok(if neg { v.neg() } else { v })
    }
}

fn constant_of(rf: &RationalFunction) -> Option<BigRational> {
    rf.as_poly().and_then(|p| p.constant_value())
}

fn rational_int_pow(base: &BigRational, e: i64) -> Option<BigRational> {
    if base.is_zero() && e < 0 {
        return None;
    }
    let mut out = BigRational::one();
    for _ in 0..e.unsigned_abs() {
        out = out * base;
    }
    Some(if e < 0 { out.recip() } else { out })
}

fn apply_const(
    prefactor: &RationalFunction,
    c: BigRational,
    invert: bool,
) -> Result<RationalFunction> {
    let c = if invert { c.recip() } else { c };
    Ok(prefactor.scale(&c))
}

fn poly_to_linear(p: &Polynomial) -> Option<LinearForm> {
    let mut lf = LinearForm::constant(0);
    for (m, c) in p.terms() {
        if !c.denom().is_one() {
            return None;
        }
        let cv = c.numer().to_i64()?;
        match m.total_degree() {
            0 => lf.constant = cv,
            1 => {
                let idx = m.0.iter().position(|&e| e == 1).unwrap();
                lf.coeffs.insert(p.vars()[idx].clone(), cv);
            }
            _ => return None,
        }
    }
    Some(lf)
}

/// Parse a hypergeometric term from the grammar, with all symbols declared
/// through `roles`.
pub fn parse_term(src: &str, roles: &Roles) -> Result<HyperTerm> {
    let vars = roles.vars();
    let mut p = Parser::new(src, &vars)?;
    let t = p.term(roles)?;
    p.expect_eof()?;
    Ok(t)
}

/// Parse a general polynomial/rational expression over the given variables.
pub fn parse_ratfun(src: &str, vars: &Vars) -> Result<RationalFunction> {
    let mut p = Parser::new(src, vars)?;
    let v = p.rf_expr()?;
    p.expect_eof()?;
    Ok(v)
}

/// Parse an expression that must reduce to a polynomial.
pub fn parse_poly(src: &str, vars: &Vars) -> Result<Polynomial> {
    let rf = parse_ratfun(src, vars)?;
    match rf.as_poly() {
        Some(p) => Ok(p.clone()),
        None => Err(Error::Domain(format!(
            "`{src}` is not a polynomial (denominator {})",
            rf.den()
        ))),
    }
}

/// Parse an integer-linear form.
pub fn parse_linear(src: &str, vars: &Vars) -> Result<LinearForm> {
    let p = parse_poly(src, vars)?;
    poly_to_linear(&p)
        .ok_or_else(|| Error::Domain(format!("`{src}` is not integer-linear")))
}

/// Evaluate a polynomial-expression string at integer points (test helper).
pub fn eval_poly_str(
    src: &str,
    vars: &Vars,
    point: &BTreeMap<String, BigRational>,
) -> Result<BigRational> {
    parse_poly(src, vars)?.eval(point)
}
