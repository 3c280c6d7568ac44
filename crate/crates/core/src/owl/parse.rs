use std::collections::HashMap;

use thiserror::Error;

use super::{Axiom, ClassExpr, Ontology, OwlLiteral, DEFAULT_BASE_IRI};
use crate::model::Datatype;

const XSD: &str = "http://www.w3.org/2001/XMLSchema#";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OwlParseError {
    #[error("{line}:{col}: expected {expected}, found {found}")]
    Syntax {
        line: u32,
        col: u32,
        expected: String,
        found: String,
    },
    #[error("{line}:{col}: UNSUPPORTED_AXIOM: {construct} is outside the supported fragment")]
    Unsupported {
        line: u32,
        col: u32,
        construct: String,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Open,
    Close,
    Eq,
    Carets,
    Iri(String),
    Word(String),
    Str(String),
    Other(char),
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Open => "\"(\"".into(),
            Tok::Close => "\")\"".into(),
            Tok::Eq => "\"=\"".into(),
            Tok::Carets => "\"^^\"".into(),
            Tok::Iri(i) => format!("<{i}>"),
            Tok::Word(w) => format!("\"{w}\""),
            Tok::Str(_) => "literal".into(),
            Tok::Other(c) => format!("\"{c}\""),
            Tok::Eof => "end of input".into(),
        }
    }
}

fn lex(src: &str) -> Vec<(Tok, u32, u32)> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0, 1u32, 1u32);
    let bump = |i: &mut usize, line: &mut u32, col: &mut u32, c: char| {
        *i += 1;
        if c == '\n' {
            *line += 1;
            *col = 1;
        } else {
            *col += 1;
        }
    };
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            bump(&mut i, &mut line, &mut col, c);
            continue;
        }
        let (l, cl) = (line, col);
        let tok = match c {
            '(' | ')' | '=' => {
                bump(&mut i, &mut line, &mut col, c);
                match c {
                    '(' => Tok::Open,
                    ')' => Tok::Close,
                    _ => Tok::Eq,
                }
            }
            '^' if chars.get(i + 1) == Some(&'^') => {
                bump(&mut i, &mut line, &mut col, c);
                bump(&mut i, &mut line, &mut col, c);
                Tok::Carets
            }
            '<' => {
                bump(&mut i, &mut line, &mut col, c);
                let mut s = String::new();
                let mut closed = false;
                while i < chars.len() {
                    let d = chars[i];
                    bump(&mut i, &mut line, &mut col, d);
                    if d == '>' {
                        closed = true;
                        break;
                    }
                    s.push(d);
                }
                if closed {
                    Tok::Iri(s)
                } else {
                    Tok::Other('<')
                }
            }
            '"' => {
                bump(&mut i, &mut line, &mut col, c);
                let mut s = String::new();
                let mut closed = false;
                while i < chars.len() {
                    let d = chars[i];
                    bump(&mut i, &mut line, &mut col, d);
                    match d {
                        '"' => {
                            closed = true;
                            break;
                        }
                        '\\' if i < chars.len() => {
                            let e = chars[i];
                            bump(&mut i, &mut line, &mut col, e);
                            s.push(e);
                        }
                        d => s.push(d),
                    }
                }
                if closed {
                    Tok::Str(s)
                } else {
                    Tok::Other('"')
                }
            }
            c if c.is_alphanumeric() || c == ':' || c == '_' => {
                let mut s = String::new();
                while i < chars.len()
                    && (chars[i].is_alphanumeric() || matches!(chars[i], ':' | '_' | '-' | '.'))
                {
                    s.push(chars[i]);
                    {
                        let ch = chars[i];
                        bump(&mut i, &mut line, &mut col, ch);
                    }
                }
                Tok::Word(s)
            }
            c => {
                bump(&mut i, &mut line, &mut col, c);
                Tok::Other(c)
            }
        };
        out.push((tok, l, cl));
    }
    out.push((Tok::Eof, line, col));
    out
}

/// Parses functional syntax restricted to the translator's fragment.
pub fn parse_functional_syntax(input: &str) -> Result<Ontology, OwlParseError> {
    let mut p = Parser {
        toks: lex(input),
        pos: 0,
        prefixes: HashMap::new(),
        base: DEFAULT_BASE_IRI.to_string(),
    };
    p.document()
}

struct Parser {
    toks: Vec<(Tok, u32, u32)>,
    pos: usize,
    prefixes: HashMap<String, String>,
    base: String,
}

enum Entity {
    Local(String),
    Foreign(String),
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn next(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn err(&self, expected: &str) -> OwlParseError {
        let (t, line, col) = &self.toks[self.pos];
        OwlParseError::Syntax {
            line: *line,
            col: *col,
            expected: expected.to_string(),
            found: t.describe(),
        }
    }

    fn unsupported(&self, at: usize, construct: impl Into<String>) -> OwlParseError {
        let (_, line, col) = &self.toks[at];
        OwlParseError::Unsupported {
            line: *line,
            col: *col,
            construct: construct.into(),
        }
    }

    fn expect(&mut self, t: Tok, what: &str) -> Result<(), OwlParseError> {
        if *self.peek() == t {
            self.next();
            Ok(())
        } else {
            Err(self.err(what))
        }
    }

    fn is_word(&self, w: &str) -> bool {
        matches!(self.peek(), Tok::Word(x) if x == w)
    }

    fn document(&mut self) -> Result<Ontology, OwlParseError> {
        while self.is_word("Prefix") {
            self.next();
            self.expect(Tok::Open, "\"(\"")?;
            let name = match self.next() {
                Tok::Word(w) if w.ends_with(':') => w,
                _ => {
                    self.pos -= 1;
                    return Err(self.err("prefix name"));
                }
            };
            self.expect(Tok::Eq, "\"=\"")?;
            let iri = match self.next() {
                Tok::Iri(i) => i,
                _ => {
                    self.pos -= 1;
                    return Err(self.err("IRI"));
                }
            };
            self.expect(Tok::Close, "\")\"")?;
            if name == ":" {
                self.base = iri.clone();
            }
            self.prefixes.insert(name, iri);
        }
        if !self.is_word("Ontology") {
            return Err(self.err("\"Prefix\" or \"Ontology\""));
        }
        self.next();
        self.expect(Tok::Open, "\"(\"")?;
        // ontology IRI and optional version IRI
        for _ in 0..2 {
            if matches!(self.peek(), Tok::Iri(_)) {
                self.next();
            }
        }
        let mut o = Ontology::new(self.base.clone());
        while *self.peek() != Tok::Close {
            let a = self.axiom()?;
            o.push(a);
        }
        self.next();
        if *self.peek() != Tok::Eof {
            return Err(self.err("end of input"));
        }
        Ok(o)
    }

    /// Keyword followed by "(".
    fn head(&mut self, expected: &str) -> Result<(String, usize), OwlParseError> {
        let at = self.pos;
        match self.peek().clone() {
            Tok::Word(w) if !w.contains(':') => {
                self.next();
                self.expect(Tok::Open, "\"(\"")?;
                Ok((w, at))
            }
            _ => Err(self.err(expected)),
        }
    }

    fn close(&mut self) -> Result<(), OwlParseError> {
        self.expect(Tok::Close, "\")\"")
    }

    fn axiom(&mut self) -> Result<Axiom, OwlParseError> {
        let (head, at) = self.head("axiom")?;
        let a = match head.as_str() {
            "Declaration" => {
                let (kind, k_at) = self.head("entity declaration")?;
                let name = self.local_entity()?;
                self.close()?;
                match kind.as_str() {
                    "Class" => Axiom::DeclareClass(name),
                    "ObjectProperty" => Axiom::DeclareObjectProperty(name),
                    "DataProperty" => Axiom::DeclareDataProperty(name),
                    other => return Err(self.unsupported(k_at, format!("Declaration({other})"))),
                }
            }
            "SubClassOf" => {
                let sub = self.class_expr()?;
                let sup = self.class_expr()?;
                Axiom::SubClassOf(sub, sup)
            }
            "EquivalentClasses" => {
                let a = self.class_expr()?;
                let b = self.class_expr()?;
                Axiom::EquivalentClasses(a, b)
            }
            "DisjointClasses" => Axiom::DisjointClasses(self.class_list()?),
            "ObjectPropertyDomain" => {
                let p = self.local_entity()?;
                Axiom::ObjectPropertyDomain(p, self.class_expr()?)
            }
            "ObjectPropertyRange" => {
                let p = self.local_entity()?;
                Axiom::ObjectPropertyRange(p, self.class_expr()?)
            }
            "DataPropertyDomain" => {
                let p = self.local_entity()?;
                Axiom::DataPropertyDomain(p, self.class_expr()?)
            }
            "DataPropertyRange" => {
                let p = self.local_entity()?;
                Axiom::DataPropertyRange(p, self.datatype()?)
            }
            other => return Err(self.unsupported(at, other)),
        };
        self.close()?;
        Ok(a)
    }

    fn class_list(&mut self) -> Result<Vec<ClassExpr>, OwlParseError> {
        let mut ops = vec![self.class_expr()?];
        while *self.peek() != Tok::Close {
            ops.push(self.class_expr()?);
        }
        if ops.len() < 2 {
            return Err(self.err("at least two class expressions"));
        }
        Ok(ops)
    }

    fn class_expr(&mut self) -> Result<ClassExpr, OwlParseError> {
        if matches!(self.peek(), Tok::Iri(_))
            || matches!(self.peek(), Tok::Word(w) if w.contains(':'))
        {
            return Ok(ClassExpr::Named(self.local_entity()?));
        }
        let (head, at) = self.head("class expression")?;
        let c = match head.as_str() {
            "ObjectIntersectionOf" => ClassExpr::IntersectionOf(self.class_list()?),
            "ObjectUnionOf" => ClassExpr::UnionOf(self.class_list()?),
            "ObjectComplementOf" => ClassExpr::complement(self.class_expr()?),
            "ObjectSomeValuesFrom" => {
                let p = self.local_entity()?;
                ClassExpr::some(p, self.class_expr()?)
            }
            "ObjectMinCardinality"
            | "ObjectMaxCardinality"
            | "ObjectExactCardinality"
            | "DataExactCardinality" => {
                let n = self.nat()?;
                let p = self.local_entity()?;
                if *self.peek() != Tok::Close {
                    return Err(self.unsupported(at, format!("qualified {head}")));
                }
                match head.as_str() {
                    "ObjectMinCardinality" => ClassExpr::MinCardinality(n, p),
                    "ObjectMaxCardinality" => ClassExpr::MaxCardinality(n, p),
                    "ObjectExactCardinality" => ClassExpr::ExactCardinality(n, p),
                    _ => ClassExpr::DataExactCardinality(n, p),
                }
            }
            "DataHasValue" => {
                let p = self.local_entity()?;
                ClassExpr::DataHasValue(p, self.literal()?)
            }
            other => return Err(self.unsupported(at, other)),
        };
        self.close()?;
        Ok(c)
    }

    fn nat(&mut self) -> Result<u32, OwlParseError> {
        match self.peek().clone() {
            Tok::Word(w) if w.chars().all(|c| c.is_ascii_digit()) => match w.parse::<u32>() {
                Ok(n) if n <= i32::MAX as u32 => {
                    self.next();
                    Ok(n)
                }
                _ => Err(self.err("cardinality below 2^31")),
            },
            _ => Err(self.err("cardinality")),
        }
    }

    fn entity(&mut self) -> Result<Entity, OwlParseError> {
        let full = match self.peek().clone() {
            Tok::Iri(i) => i,
            Tok::Word(w) if w.contains(':') => {
                let split = w.find(':').unwrap() + 1;
                let (pfx, local) = w.split_at(split);
                match self.prefixes.get(pfx) {
                    Some(ns) => format!("{ns}{local}"),
                    None if pfx == ":" => format!("{}{local}", self.base),
                    None if pfx == "xsd:" => format!("{XSD}{local}"),
                    None => return Err(self.err("entity with a declared prefix")),
                }
            }
            _ => return Err(self.err("entity IRI")),
        };
        self.next();
        Ok(match full.strip_prefix(self.base.as_str()) {
            Some(local) if !local.is_empty() => Entity::Local(local.to_string()),
            _ => Entity::Foreign(full),
        })
    }

    /// An entity in the ontology's own namespace.
    fn local_entity(&mut self) -> Result<String, OwlParseError> {
        let at = self.pos;
        match self.entity()? {
            Entity::Local(l) => Ok(l),
            Entity::Foreign(f) => Err(self.unsupported(at, format!("<{f}>"))),
        }
    }

    fn datatype(&mut self) -> Result<Datatype, OwlParseError> {
        let at = self.pos;
        let full = match self.entity()? {
            Entity::Local(l) => format!("{}{l}", self.base),
            Entity::Foreign(f) => f,
        };
        full.strip_prefix(XSD)
            .and_then(Datatype::from_keyword)
            .ok_or_else(|| self.unsupported(at, format!("datatype <{full}>")))
    }

    fn literal(&mut self) -> Result<OwlLiteral, OwlParseError> {
        let lexical = match self.peek().clone() {
            Tok::Str(s) => s,
            _ => return Err(self.err("literal")),
        };
        self.next();
        if *self.peek() == Tok::Carets {
            self.next();
            let dt = self.datatype()?;
            Ok(OwlLiteral::new(lexical, dt))
        } else if matches!(self.peek(), Tok::Other('@')) {
            Err(self.unsupported(self.pos, "language-tagged literal"))
        } else {
            Ok(OwlLiteral::new(lexical, Datatype::String))
        }
    }
}
