//! Text format for quivers with relations.
//!
//! ```text
//! file  := stmt+
//! stmt  := "vertices" ident+ ";"
//!        | "arrow" ident ":" ident "->" ident ";"
//!        | "rel" relexpr ";"
//!        | "special" ident+ ";"
//! relexpr := "-"? term (("+" | "-") term)*
//! term  := (coef "*")? ident ("*" ident)*
//! coef  := int | int "/" int
//! ```
//!
//! Identifiers are runs of ASCII letters, digits and `_`. `#` starts a
//! comment that runs to the end of the line. Names must be declared before
//! they are used. Arrow names may not be purely numeric, since a leading
//! integer in a term is read as a coefficient.

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::field::{parse_rational, render_rational};
use crate::quiver::{QuiverBuilder, QuiverSpec, RelationExpr, Term};

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Semi,
    Colon,
    Arrow,
    Star,
    Slash,
    Plus,
    Minus,
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    line: usize,
    column: usize,
}

fn is_ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_'
}

fn tokenize(text: &str) -> Result<Vec<Token>> {
    let mut out = Vec::new();
    for (li, raw) in text.lines().enumerate() {
        let line = li + 1;
        let content = raw.split('#').next().unwrap_or("");
        let chars: Vec<char> = content.chars().collect();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            let column = i + 1;
            let simple = match c {
                ';' => Some(Tok::Semi),
                ':' => Some(Tok::Colon),
                '*' => Some(Tok::Star),
                '/' => Some(Tok::Slash),
                '+' => Some(Tok::Plus),
                _ => None,
            };
            if let Some(tok) = simple {
                out.push(Token { tok, line, column });
                i += 1;
            } else if c == '-' {
                if chars.get(i + 1) == Some(&'>') {
                    out.push(Token {
                        tok: Tok::Arrow,
                        line,
                        column,
                    });
                    i += 2;
                } else {
                    out.push(Token {
                        tok: Tok::Minus,
                        line,
                        column,
                    });
                    i += 1;
                }
            } else if c.is_whitespace() {
                i += 1;
            } else if is_ident_char(c) {
                let start = i;
                while i < chars.len() && is_ident_char(chars[i]) {
                    i += 1;
                }
                out.push(Token {
                    tok: Tok::Ident(chars[start..i].iter().collect()),
                    line,
                    column,
                });
            } else {
                return Err(Error::Syntax {
                    line,
                    column,
                    message: format!("unexpected character `{c}`"),
                });
            }
        }
    }
    Ok(out)
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
    eof: (usize, usize),
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.tokens.get(self.pos).map(|t| &t.tok)
    }

    fn peek_at(&self, k: usize) -> Option<&Tok> {
        self.tokens.get(self.pos + k).map(|t| &t.tok)
    }

    fn here(&self) -> (usize, usize) {
        self.tokens.get(self.pos).map_or(self.eof, |t| (t.line, t.column))
    }

    fn error<T>(&self, message: impl Into<String>) -> Result<T> {
        let (line, column) = self.here();
        Err(Error::Syntax {
            line,
            column,
            message: message.into(),
        })
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<()> {
        if self.peek() == Some(&want) {
            self.pos += 1;
            Ok(())
        } else {
            self.error(format!("expected {what}"))
        }
    }

    fn ident(&mut self, what: &str) -> Result<String> {
        match self.peek() {
            Some(Tok::Ident(s)) => {
                let s = s.clone();
                self.pos += 1;
                Ok(s)
            }
            _ => self.error(format!("expected {what}")),
        }
    }

    fn ident_list(&mut self, what: &str) -> Result<Vec<String>> {
        let mut names = vec![self.ident(what)?];
        while let Some(Tok::Ident(_)) = self.peek() {
            names.push(self.ident(what)?);
        }
        self.expect(Tok::Semi, "`;`")?;
        Ok(names)
    }

    fn is_integer(s: &str) -> bool {
        !s.is_empty() && s.chars().all(|c| c.is_ascii_digit())
    }

    fn coefficient(&mut self) -> Result<Option<BigRational>> {
        let num = match self.peek() {
            Some(Tok::Ident(s)) if Self::is_integer(s) => s.clone(),
            _ => return Ok(None),
        };
        let literal = if self.peek_at(1) == Some(&Tok::Slash) {
            match self.peek_at(2) {
                Some(Tok::Ident(d)) if Self::is_integer(d) => {
                    let lit = format!("{num}/{d}");
                    self.pos += 3;
                    lit
                }
                _ => {
                    self.pos += 2;
                    return self.error("expected denominator");
                }
            }
        } else {
            self.pos += 1;
            num
        };
        let q = match parse_rational(&literal) {
            Some(q) => q,
            None => return self.error(format!("invalid coefficient `{literal}`")),
        };
        if q.is_zero() {
            return self.error("zero coefficient");
        }
        self.expect(Tok::Star, "`*` after coefficient")?;
        Ok(Some(q))
    }

    fn term(&mut self, b: &QuiverBuilder, sign: bool) -> Result<Term> {
        let mut coefficient = self.coefficient()?.unwrap_or_else(BigRational::one);
        if sign {
            coefficient = -coefficient;
        }
        let mut path = Vec::new();
        loop {
            let (line, column) = self.here();
            let name = self.ident("arrow name")?;
            let id = b.arrow_id(&name).map_err(|e| match e {
                Error::DanglingName { kind, name, .. } => Error::DanglingName { kind, name, line },
                other => other,
            });
            let _ = column;
            path.push(id?);
            if self.peek() == Some(&Tok::Star) {
                self.pos += 1;
            } else {
                break;
            }
        }
        Ok(Term { coefficient, path })
    }

    fn relation(&mut self, b: &QuiverBuilder) -> Result<RelationExpr> {
        let mut negative = false;
        if self.peek() == Some(&Tok::Minus) {
            self.pos += 1;
            negative = true;
        }
        let mut terms = vec![self.term(b, negative)?];
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    terms.push(self.term(b, false)?);
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    terms.push(self.term(b, true)?);
                }
                _ => break,
            }
        }
        self.expect(Tok::Semi, "`;`")?;
        Ok(RelationExpr { terms })
    }
}

/// Parses DSL source into a [`QuiverSpec`], keeping declaration order.
pub fn parse(text: &str) -> Result<QuiverSpec> {
    let tokens = tokenize(text)?;
    let last_line = text.lines().count().max(1);
    let mut p = Parser {
        tokens,
        pos: 0,
        eof: (last_line, text.lines().last().map_or(1, |l| l.len() + 1)),
    };
    let mut b = QuiverBuilder::new();
    if p.peek().is_none() {
        return p.error("expected at least one statement");
    }
    while p.peek().is_some() {
        let (line, _) = p.here();
        b.at_line(line);
        let keyword = p.ident("statement keyword")?;
        match keyword.as_str() {
            "vertices" => {
                for name in p.ident_list("vertex name")? {
                    b.vertex(&name)?;
                }
            }
            "arrow" => {
                let name = p.ident("arrow name")?;
                p.expect(Tok::Colon, "`:`")?;
                let s = p.ident("source vertex")?;
                p.expect(Tok::Arrow, "`->`")?;
                let t = p.ident("target vertex")?;
                p.expect(Tok::Semi, "`;`")?;
                b.arrow(&name, &s, &t)?;
            }
            "rel" => {
                let rel = p.relation(&b)?;
                b.relation(rel)?;
            }
            "special" => {
                for name in p.ident_list("vertex name")? {
                    b.special(&name)?;
                }
            }
            other => {
                p.pos -= 1;
                return p.error(format!("unknown statement `{other}`"));
            }
        }
    }
    b.finish()
}

fn render_term(spec: &QuiverSpec, t: &Term) -> String {
    let c = t.coefficient.abs();
    let path = spec.path_name(&t.path);
    if c.is_one() {
        path
    } else {
        format!("{}*{}", render_rational(&c), path)
    }
}

/// Renders one relation in DSL syntax (without the `rel` keyword).
pub fn render_relation(spec: &QuiverSpec, r: &RelationExpr) -> String {
    let mut out = String::new();
    for (i, t) in r.terms.iter().enumerate() {
        let neg = t.coefficient.is_negative();
        match (i, neg) {
            (0, true) => out.push('-'),
            (0, false) => {}
            (_, true) => out.push_str(" - "),
            (_, false) => out.push_str(" + "),
        }
        out.push_str(&render_term(spec, t));
    }
    out
}

/// Canonical DSL text for `spec`: one statement per line, vertices first,
/// then arrows, relations and special vertices.
pub fn serialize(spec: &QuiverSpec) -> String {
    let mut out = String::new();
    out.push_str("vertices ");
    out.push_str(&spec.vertices.join(" "));
    out.push_str(";\n");
    for a in &spec.arrows {
        out.push_str(&format!(
            "arrow {}: {}->{};\n",
            a.name, spec.vertices[a.source], spec.vertices[a.target]
        ));
    }
    for r in &spec.relations {
        out.push_str(&format!("rel {};\n", render_relation(spec, r)));
    }
    if !spec.special.is_empty() {
        let names: Vec<&str> = spec.special.iter().map(|&v| spec.vertices[v].as_str()).collect();
        out.push_str(&format!("special {};\n", names.join(" ")));
    }
    out
}
