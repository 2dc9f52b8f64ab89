//! Lexer and recursive-descent parsers for the expression, formula and
//! header grammars.

use std::fmt;

use super::alphabet::{Alphabet, Letter};
use super::expr::Expr;
use super::formula::Formula;
use crate::error::{Error, Result};

/// A syntax error with its position (1-based line and column).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub offset: usize,
    pub line: usize,
    pub col: usize,
    pub message: String,
}

impl ParseError {
    fn at(text: &str, offset: usize, message: impl Into<String>) -> ParseError {
        let before = &text[..offset.min(text.len())];
        let line = before.matches('\n').count() + 1;
        let col = before.chars().rev().take_while(|&c| c != '\n').count() + 1;
        ParseError { offset, line, col, message: message.into() }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.col, self.message)
    }
}

impl std::error::Error for ParseError {}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Zero,
    Dot,
    Plus,
    Amp,
    Pipe,
    Tilde,
    Arrow,
    LParen,
    RParen,
    LBrace,
    RBrace,
    Comma,
    Semi,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Tok::Ident(s) => return write!(f, "`{s}`"),
            Tok::Zero => "`0`",
            Tok::Dot => "`.`",
            Tok::Plus => "`+`",
            Tok::Amp => "`&`",
            Tok::Pipe => "`|`",
            Tok::Tilde => "`~`",
            Tok::Arrow => "`->`",
            Tok::LParen => "`(`",
            Tok::RParen => "`)`",
            Tok::LBrace => "`{`",
            Tok::RBrace => "`}`",
            Tok::Comma => "`,`",
            Tok::Semi => "`;`",
            Tok::Eof => "end of input",
        };
        f.write_str(s)
    }
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        if c == b'#' {
            while i < bytes.len() && bytes[i] != b'\n' {
                i += 1;
            }
            continue;
        }
        let start = i;
        let tok = match c {
            b'.' => Tok::Dot,
            b'+' => Tok::Plus,
            b'&' => Tok::Amp,
            b'|' => Tok::Pipe,
            b'~' => Tok::Tilde,
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b'{' => Tok::LBrace,
            b'}' => Tok::RBrace,
            b',' => Tok::Comma,
            b';' => Tok::Semi,
            b'0' => Tok::Zero,
            b'-' if bytes.get(i + 1) == Some(&b'>') => {
                i += 1;
                Tok::Arrow
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                while i + 1 < bytes.len()
                    && (bytes[i + 1].is_ascii_alphanumeric() || matches!(bytes[i + 1], b'_' | b'\''))
                {
                    i += 1;
                }
                Tok::Ident(text[start..=i].to_string())
            }
            _ => {
                let ch = text[i..].chars().next().unwrap_or('?');
                return Err(ParseError::at(text, i, format!("unexpected character `{ch}`")));
            }
        };
        i += 1;
        out.push((tok, start));
    }
    out.push((Tok::Eof, text.len()));
    Ok(out)
}

struct Parser<'t> {
    text: &'t str,
    toks: Vec<(Tok, usize)>,
    pos: usize,
    /// Variables bound by enclosing binders, innermost last.
    bound: Vec<String>,
    closed: bool,
}

impl<'t> Parser<'t> {
    fn new(text: &'t str, closed: bool) -> Result<Self, ParseError> {
        Ok(Parser { text, toks: lex(text)?, pos: 0, bound: Vec::new(), closed })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn peek_at(&self, k: usize) -> &Tok {
        &self.toks[(self.pos + k).min(self.toks.len() - 1)].0
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error(&self, message: impl Into<String>) -> ParseError {
        ParseError::at(self.text, self.offset(), message)
    }

    fn unexpected(&self, wanted: &str) -> ParseError {
        self.error(format!("expected {wanted}, found {}", self.peek()))
    }

    fn expect(&mut self, tok: Tok) -> Result<(), ParseError> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            Err(self.unexpected(&tok.to_string()))
        }
    }

    fn expect_eof(&self) -> Result<(), ParseError> {
        match self.peek() {
            Tok::Eof => Ok(()),
            _ => Err(self.unexpected("end of input")),
        }
    }

    fn binder_keyword(&self) -> Option<bool> {
        match self.peek() {
            Tok::Ident(s) if s == "mu" => Some(true),
            Tok::Ident(s) if s == "nu" => Some(false),
            _ => None,
        }
    }

    fn binder_name(&mut self) -> Result<String, ParseError> {
        match self.peek().clone() {
            Tok::Ident(x) if !is_keyword(&x) => {
                self.bump();
                self.expect(Tok::Dot)?;
                Ok(x)
            }
            _ => Err(self.unexpected("a variable name")),
        }
    }

    fn variable(&mut self, x: String) -> Result<String, ParseError> {
        if self.closed && !self.bound.contains(&x) {
            return Err(self.error(format!("unbound variable `{x}`")));
        }
        self.bump();
        Ok(x)
    }

    fn header(&mut self) -> Result<Option<Alphabet>, ParseError> {
        let powerset = match self.peek() {
            Tok::Ident(s) if s == "alphabet" => false,
            Tok::Ident(s) if s == "props" => true,
            _ => return Ok(None),
        };
        let start = self.offset();
        self.bump();
        let mut names = Vec::new();
        loop {
            match self.peek().clone() {
                Tok::Ident(s) => names.push(s),
                Tok::Semi => {
                    self.bump();
                    break;
                }
                _ => return Err(self.unexpected("a name or `;`")),
            }
            self.bump();
        }
        let alphabet = if powerset { Alphabet::powerset(names) } else { Alphabet::new(names) };
        alphabet.map(Some).map_err(|e| ParseError::at(self.text, start, e.to_string()))
    }

    /// `{P,Q}` in a powerset alphabet.
    fn prop_set(&mut self, alphabet: &Alphabet) -> Result<Letter, ParseError> {
        let start = self.offset();
        self.expect(Tok::LBrace)?;
        let mut props = Vec::new();
        if *self.peek() != Tok::RBrace {
            loop {
                match self.peek().clone() {
                    Tok::Ident(p) => props.push(p),
                    _ => return Err(self.unexpected("a proposition")),
                }
                self.bump();
                if *self.peek() == Tok::Comma {
                    self.bump();
                } else {
                    break;
                }
            }
        }
        self.expect(Tok::RBrace)?;
        alphabet
            .letter_of_props(props.iter().map(String::as_str))
            .map_err(|e| ParseError::at(self.text, start, e.to_string()))
    }

    // ---- expressions ----

    fn expr(&mut self, a: &Alphabet) -> Result<Expr, ParseError> {
        if let Some(is_mu) = self.binder_keyword() {
            self.bump();
            let x = self.binder_name()?;
            self.bound.push(x.clone());
            let body = self.expr(a);
            self.bound.pop();
            let body = body?;
            return Ok(if is_mu { Expr::mu(x, body) } else { Expr::nu(x, body) });
        }
        let l = self.meet(a)?;
        if *self.peek() == Tok::Plus {
            self.bump();
            let r = self.expr(a)?;
            return Ok(Expr::sum(l, r));
        }
        Ok(l)
    }

    fn meet(&mut self, a: &Alphabet) -> Result<Expr, ParseError> {
        let l = self.prefix(a)?;
        if *self.peek() == Tok::Amp {
            self.bump();
            let r = if self.binder_keyword().is_some() { self.expr(a)? } else { self.meet(a)? };
            return Ok(Expr::meet(l, r));
        }
        Ok(l)
    }

    fn prefix(&mut self, a: &Alphabet) -> Result<Expr, ParseError> {
        let letter = match self.peek().clone() {
            Tok::LBrace => {
                if !a.is_powerset() {
                    return Err(self.error("set letters need a `props` alphabet"));
                }
                Some(self.prop_set(a)?)
            }
            Tok::Ident(name) if *self.peek_at(1) == Tok::Dot && !is_keyword(&name) => {
                let l = a.letter(&name).ok_or_else(|| self.error(format!("undeclared letter `{name}`")))?;
                self.bump();
                Some(l)
            }
            _ => None,
        };
        let Some(letter) = letter else {
            return self.atom(a);
        };
        self.expect(Tok::Dot)?;
        let body = if self.binder_keyword().is_some() { self.expr(a)? } else { self.prefix(a)? };
        Ok(Expr::act(letter, body))
    }

    fn atom(&mut self, a: &Alphabet) -> Result<Expr, ParseError> {
        match self.peek().clone() {
            Tok::Zero => {
                self.bump();
                Ok(Expr::Zero)
            }
            Tok::LParen => {
                self.bump();
                let e = self.expr(a)?;
                self.expect(Tok::RParen)?;
                Ok(e)
            }
            Tok::Ident(s) if s == "top" => {
                self.bump();
                Ok(Expr::Top)
            }
            Tok::Ident(s) if !is_keyword(&s) => Ok(Expr::Var(self.variable(s)?)),
            _ => Err(self.unexpected("an expression")),
        }
    }

    // ---- formulas ----

    fn formula(&mut self, a: &Alphabet) -> Result<Formula, ParseError> {
        if let Some(is_mu) = self.binder_keyword() {
            self.bump();
            let x = self.binder_name()?;
            if a.prop_index(&x).is_some() {
                return Err(self.error(format!("`{x}` is a proposition, not a variable")));
            }
            self.bound.push(x.clone());
            let body = self.formula(a);
            self.bound.pop();
            let body = body?;
            return Ok(if is_mu { Formula::mu(x, body) } else { Formula::nu(x, body) });
        }
        let start = self.offset();
        let l = self.disjunction(a)?;
        if *self.peek() == Tok::Arrow {
            if !l.is_closed() {
                return Err(ParseError::at(self.text, start, "the left side of `->` must be closed"));
            }
            self.bump();
            let r = self.formula(a)?;
            return Ok(Formula::implies(&l, r));
        }
        Ok(l)
    }

    fn disjunction(&mut self, a: &Alphabet) -> Result<Formula, ParseError> {
        let l = self.conjunction(a)?;
        if *self.peek() == Tok::Pipe {
            self.bump();
            let r = if self.binder_keyword().is_some() { self.formula(a)? } else { self.disjunction(a)? };
            return Ok(Formula::or(l, r));
        }
        Ok(l)
    }

    fn conjunction(&mut self, a: &Alphabet) -> Result<Formula, ParseError> {
        let l = self.unary(a)?;
        if *self.peek() == Tok::Amp {
            self.bump();
            let r = if self.binder_keyword().is_some() { self.formula(a)? } else { self.conjunction(a)? };
            return Ok(Formula::and(l, r));
        }
        Ok(l)
    }

    fn unary(&mut self, a: &Alphabet) -> Result<Formula, ParseError> {
        match self.peek().clone() {
            Tok::Ident(s) if s == "O" => {
                self.bump();
                let body = if self.binder_keyword().is_some() { self.formula(a)? } else { self.unary(a)? };
                Ok(Formula::next(body))
            }
            Tok::Tilde => {
                self.bump();
                match self.peek().clone() {
                    Tok::Ident(p) if a.prop_index(&p).is_some() => {
                        self.bump();
                        Ok(Formula::NegProp(p))
                    }
                    _ => Err(self.unexpected("a proposition after `~`")),
                }
            }
            Tok::LParen => {
                self.bump();
                let f = self.formula(a)?;
                self.expect(Tok::RParen)?;
                Ok(f)
            }
            Tok::Ident(s) if s == "ff" => {
                self.bump();
                Ok(Formula::Bot)
            }
            Tok::Ident(s) if s == "tt" => {
                self.bump();
                Ok(Formula::Top)
            }
            Tok::Ident(s) if a.prop_index(&s).is_some() => {
                self.bump();
                Ok(Formula::Prop(s))
            }
            Tok::Ident(s) if !is_keyword(&s) => Ok(Formula::Var(self.variable(s)?)),
            _ => Err(self.unexpected("a formula")),
        }
    }
}

fn is_keyword(s: &str) -> bool {
    matches!(s, "mu" | "nu" | "top" | "ff" | "tt" | "O" | "alphabet" | "props")
}

/// Parses an expression, possibly with free variables.
pub fn parse_expr(text: &str, alphabet: &Alphabet) -> Result<Expr> {
    let mut p = Parser::new(text, false)?;
    let e = p.expr(alphabet)?;
    p.expect_eof()?;
    Ok(e)
}

/// Parses an expression and rejects unbound variables.
pub fn parse_closed_expr(text: &str, alphabet: &Alphabet) -> Result<Expr> {
    let mut p = Parser::new(text, true)?;
    let e = p.expr(alphabet)?;
    p.expect_eof()?;
    Ok(e)
}

/// Parses a formula; identifiers in the proposition basis are propositions,
/// all others variables.
pub fn parse_formula(text: &str, alphabet: &Alphabet) -> Result<Formula> {
    if !alphabet.is_powerset() {
        return Err(Error::NotPowerset);
    }
    let mut p = Parser::new(text, false)?;
    let f = p.formula(alphabet)?;
    p.expect_eof()?;
    Ok(f)
}

pub fn parse_closed_formula(text: &str, alphabet: &Alphabet) -> Result<Formula> {
    if !alphabet.is_powerset() {
        return Err(Error::NotPowerset);
    }
    let mut p = Parser::new(text, true)?;
    let f = p.formula(alphabet)?;
    p.expect_eof()?;
    Ok(f)
}

/// Parses a header line `alphabet a b ;` or `props P Q ;`.
pub fn parse_alphabet(text: &str) -> Result<Alphabet> {
    let mut p = Parser::new(text, false)?;
    let a = p.header()?.ok_or_else(|| p.unexpected("`alphabet` or `props`"))?;
    p.expect_eof()?;
    Ok(a)
}

/// An input file: an optional alphabet header followed by a body.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Document<T> {
    pub alphabet: Alphabet,
    pub body: T,
}

fn resolve_alphabet(p: &mut Parser<'_>, given: Option<&Alphabet>) -> Result<Alphabet> {
    let start = p.offset();
    let declared = p.header()?;
    match (declared, given) {
        (Some(d), Some(g)) if d != *g => Err(ParseError::at(
            p.text,
            start,
            format!("header `{}` does not match the requested `{}`", d.header(), g.header()),
        )
        .into()),
        (Some(d), _) => Ok(d),
        (None, Some(g)) => Ok(g.clone()),
        (None, None) => Err(p.unexpected("an alphabet header (`alphabet ... ;` or `props ... ;`)").into()),
    }
}

/// Parses a closed expression file. A header in the file must agree with
/// `given` when both are present.
pub fn parse_expr_document(text: &str, given: Option<&Alphabet>) -> Result<Document<Expr>> {
    let mut p = Parser::new(text, true)?;
    let alphabet = resolve_alphabet(&mut p, given)?;
    let body = p.expr(&alphabet)?;
    p.expect_eof()?;
    Ok(Document { alphabet, body })
}

/// Parses a closed formula file (proposition basis required).
pub fn parse_formula_document(text: &str, given: Option<&Alphabet>) -> Result<Document<Formula>> {
    let mut p = Parser::new(text, true)?;
    let alphabet = resolve_alphabet(&mut p, given)?;
    if !alphabet.is_powerset() {
        return Err(Error::NotPowerset);
    }
    let body = p.formula(&alphabet)?;
    p.expect_eof()?;
    Ok(Document { alphabet, body })
}
