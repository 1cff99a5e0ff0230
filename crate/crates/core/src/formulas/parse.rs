use super::{Cmp, Formula};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Cmp(Cmp, bool), // bool: operands swapped (`>`, `>=`)
    Not,
    And,
    Or,
    LParen,
    RParen,
    Comma,
    Dot,
    Exists,
    Forall,
}

fn tokenize(text: &str) -> Result<Vec<(usize, Tok)>> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    let err = |pos: usize, msg: &str| Error::Parse { pos, msg: msg.to_string() };
    while i < chars.len() {
        let c = chars[i];
        let next = chars.get(i + 1).copied();
        let start = i;
        let tok = match c {
            c if c.is_whitespace() => {
                i += 1;
                continue;
            }
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            ',' => Tok::Comma,
            '.' => Tok::Dot,
            '&' | '∧' => {
                if c == '&' && next == Some('&') {
                    i += 1;
                }
                Tok::And
            }
            '|' | '∨' => {
                if c == '|' && next == Some('|') {
                    i += 1;
                }
                Tok::Or
            }
            '¬' => Tok::Not,
            '∃' => Tok::Exists,
            '∀' => Tok::Forall,
            '≤' => Tok::Cmp(Cmp::Le, false),
            '≥' => Tok::Cmp(Cmp::Le, true),
            '≠' => Tok::Cmp(Cmp::Ne, false),
            '!' => {
                if next == Some('=') {
                    i += 1;
                    Tok::Cmp(Cmp::Ne, false)
                } else {
                    Tok::Not
                }
            }
            '<' => {
                if next == Some('=') {
                    i += 1;
                    Tok::Cmp(Cmp::Le, false)
                } else {
                    Tok::Cmp(Cmp::Lt, false)
                }
            }
            '>' => {
                if next == Some('=') {
                    i += 1;
                    Tok::Cmp(Cmp::Le, true)
                } else {
                    Tok::Cmp(Cmp::Lt, true)
                }
            }
            '=' => {
                if next == Some('=') {
                    i += 1;
                }
                Tok::Cmp(Cmp::Eq, false)
            }
            c if c.is_alphabetic() || c == '_' => {
                let mut j = i;
                while j < chars.len() && (chars[j].is_alphanumeric() || chars[j] == '_' || chars[j] == '\'') {
                    j += 1;
                }
                let word: String = chars[i..j].iter().collect();
                i = j;
                out.push((start, Tok::Ident(word)));
                continue;
            }
            other => return Err(err(i, &format!("unexpected character `{other}`"))),
        };
        i += 1;
        out.push((start, tok));
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn peek_at(&self, k: usize) -> Option<&Tok> {
        self.toks.get(self.pos + k).map(|(_, t)| t)
    }

    fn here(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |(p, _)| *p)
    }

    fn error<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse { pos: self.here(), msg: msg.into() })
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<()> {
        if self.peek() == Some(&tok) {
            self.pos += 1;
            Ok(())
        } else {
            self.error(format!("expected {what}"))
        }
    }

    fn ident(&mut self) -> Result<String> {
        match self.peek() {
            Some(Tok::Ident(s)) => {
                let s = s.clone();
                self.pos += 1;
                Ok(s)
            }
            _ => self.error("expected identifier"),
        }
    }

    /// `E x.` / `A x.`: the keyword letter only counts when followed by an
    /// identifier and a dot.
    fn at_quantifier(&self) -> Option<bool> {
        let exists = match self.peek()? {
            Tok::Exists => true,
            Tok::Forall => false,
            Tok::Ident(s)
                if (s == "E" || s == "A")
                    && matches!(self.peek_at(1), Some(Tok::Ident(_)))
                    && self.peek_at(2) == Some(&Tok::Dot) =>
            {
                s == "E"
            }
            _ => return None,
        };
        Some(exists)
    }

    fn formula(&mut self) -> Result<Formula> {
        if let Some(exists) = self.at_quantifier() {
            self.pos += 1;
            let var = self.ident()?;
            self.expect(Tok::Dot, "`.` after quantified variable")?;
            let body = self.formula()?;
            return Ok(if exists { Formula::exists(var, body) } else { Formula::forall(var, body) });
        }
        self.or()
    }

    fn or(&mut self) -> Result<Formula> {
        let mut items = vec![self.and()?];
        while self.peek() == Some(&Tok::Or) {
            self.pos += 1;
            items.push(self.and()?);
        }
        Ok(if items.len() == 1 { items.pop().unwrap() } else { Formula::or(items) })
    }

    fn and(&mut self) -> Result<Formula> {
        let mut items = vec![self.unary()?];
        while self.peek() == Some(&Tok::And) {
            self.pos += 1;
            items.push(self.unary()?);
        }
        Ok(if items.len() == 1 { items.pop().unwrap() } else { Formula::and(items) })
    }

    fn unary(&mut self) -> Result<Formula> {
        if self.peek() == Some(&Tok::Not) {
            self.pos += 1;
            return Ok(Formula::not(self.unary()?));
        }
        self.primary()
    }

    fn primary(&mut self) -> Result<Formula> {
        if self.at_quantifier().is_some() {
            return self.formula();
        }
        match self.peek() {
            Some(Tok::LParen) => {
                self.pos += 1;
                let f = self.formula()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(f)
            }
            Some(Tok::Ident(_)) => {
                let name = self.ident()?;
                match self.peek() {
                    Some(Tok::LParen) => {
                        self.pos += 1;
                        let mut args = vec![self.ident()?];
                        while self.peek() == Some(&Tok::Comma) {
                            self.pos += 1;
                            args.push(self.ident()?);
                        }
                        self.expect(Tok::RParen, "`)` closing argument list")?;
                        Ok(Formula::Rel { name, args })
                    }
                    Some(Tok::Cmp(cmp, swapped)) => {
                        let (cmp, swapped) = (*cmp, *swapped);
                        self.pos += 1;
                        let rhs = self.ident()?;
                        Ok(if swapped { Formula::atom(rhs, cmp, name) } else { Formula::atom(name, cmp, rhs) })
                    }
                    _ if name == "true" => Ok(Formula::truth()),
                    _ if name == "false" => Ok(Formula::falsity()),
                    _ => self.error(format!("expected comparator or `(` after `{name}`")),
                }
            }
            Some(_) => self.error("expected atom, `!`, `(` or quantifier"),
            None => self.error("unexpected end of input"),
        }
    }
}

/// Parses the text grammar. Rejects formulas in which a variable occurs both
/// free and bound.
pub fn parse(text: &str) -> Result<Formula> {
    let toks = tokenize(text)?;
    let mut p = Parser { toks, pos: 0, end: text.chars().count() };
    let f = p.formula()?;
    if p.pos != p.toks.len() {
        return p.error("trailing input");
    }
    let free = f.free_vars();
    if let Some(v) = f.bound_vars().into_iter().find(|v| free.contains(v)) {
        return Err(Error::Parse {
            pos: 0,
            msg: format!("variable `{v}` occurs both free and bound"),
        });
    }
    Ok(f)
}
