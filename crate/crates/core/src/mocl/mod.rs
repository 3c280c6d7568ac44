//! µOCL: the state-invariant fragment of OCL.
//!
//! Invariants are boolean combinations (`and`, `or`) of attribute equalities
//! (`payment.waiting = True`) and size comparisons over associations
//! (`self.payment->size() = 1`). Paths may start with `self.`; the prefix is
//! dropped on parsing.

mod parser;
mod resolve;

use std::fmt;

pub(crate) use parser::parse_expr;
pub use parser::{parse_ocl, parse_ocl_at};
pub use resolve::{resolve_path, Hop, PathError, PathUse, ResolvedPath, Terminal};

use crate::model::Datatype;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum OclExpr {
    /// At least two operands, none of them an `Or`.
    Or(Vec<OclExpr>),
    /// At least two operands, none of them an `And`.
    And(Vec<OclExpr>),
    AttrEq {
        path: NavPath,
        value: Literal,
    },
    SizeCmp {
        path: NavPath,
        op: CmpOp,
        bound: u32,
    },
}

impl OclExpr {
    /// n-ary conjunction, flattening nested conjunctions. A single operand is
    /// returned unchanged.
    pub fn and(operands: Vec<OclExpr>) -> OclExpr {
        Self::junction(operands, true)
    }

    pub fn or(operands: Vec<OclExpr>) -> OclExpr {
        Self::junction(operands, false)
    }

    fn junction(operands: Vec<OclExpr>, conj: bool) -> OclExpr {
        let mut flat = Vec::with_capacity(operands.len());
        for op in operands {
            match op {
                OclExpr::And(inner) if conj => flat.extend(inner),
                OclExpr::Or(inner) if !conj => flat.extend(inner),
                other => flat.push(other),
            }
        }
        if flat.len() == 1 {
            flat.pop().unwrap()
        } else if conj {
            OclExpr::And(flat)
        } else {
            OclExpr::Or(flat)
        }
    }

    /// Atomic constraints in left-to-right order.
    pub fn leaves(&self) -> Vec<&OclExpr> {
        let mut out = Vec::new();
        self.collect_leaves(&mut out);
        out
    }

    fn collect_leaves<'a>(&'a self, out: &mut Vec<&'a OclExpr>) {
        match self {
            OclExpr::And(ops) | OclExpr::Or(ops) => ops.iter().for_each(|o| o.collect_leaves(out)),
            leaf => out.push(leaf),
        }
    }
}

impl fmt::Display for OclExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OclExpr::Or(ops) => {
                for (i, op) in ops.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" or ")?;
                    }
                    write!(f, "{op}")?;
                }
                Ok(())
            }
            OclExpr::And(ops) => {
                for (i, op) in ops.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" and ")?;
                    }
                    match op {
                        OclExpr::Or(_) => write!(f, "({op})")?,
                        _ => write!(f, "{op}")?,
                    }
                }
                Ok(())
            }
            OclExpr::AttrEq { path, value } => write!(f, "{path} = {value}"),
            OclExpr::SizeCmp { path, op, bound } => write!(f, "{path}->size() {op} {bound}"),
        }
    }
}

/// Navigation path with the leading `self` removed.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct NavPath {
    pub segments: Vec<String>,
}

impl NavPath {
    pub fn new<S: Into<String>>(segments: impl IntoIterator<Item = S>) -> Self {
        let segments: Vec<String> = segments.into_iter().map(Into::into).collect();
        assert!(!segments.is_empty(), "navigation path must not be empty");
        NavPath { segments }
    }
}

impl fmt::Display for NavPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "self.{}", self.segments.join("."))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CmpOp {
    Eq,
    Ge,
    Le,
    Gt,
    Lt,
}

impl CmpOp {
    pub fn symbol(self) -> &'static str {
        match self {
            CmpOp::Eq => "=",
            CmpOp::Ge => ">=",
            CmpOp::Le => "<=",
            CmpOp::Gt => ">",
            CmpOp::Lt => "<",
        }
    }
}

impl fmt::Display for CmpOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LiteralKind {
    Boolean,
    Integer,
    String,
    Decimal,
}

impl LiteralKind {
    /// Whether a literal of this kind can be compared with an attribute of
    /// type `dt`. Integers widen to decimals.
    pub fn fits(self, dt: Datatype) -> bool {
        matches!(
            (self, dt),
            (LiteralKind::Boolean, Datatype::Boolean)
                | (LiteralKind::Integer, Datatype::Integer)
                | (LiteralKind::Integer, Datatype::Decimal)
                | (LiteralKind::Decimal, Datatype::Decimal)
                | (LiteralKind::String, Datatype::String)
        )
    }
}

impl fmt::Display for LiteralKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LiteralKind::Boolean => "a boolean",
            LiteralKind::Integer => "an integer",
            LiteralKind::String => "a string",
            LiteralKind::Decimal => "a decimal",
        })
    }
}

/// Literal as written in the invariant. String literals hold the unescaped
/// content; booleans are `True`/`False`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Literal {
    pub kind: LiteralKind,
    pub lexical: String,
}

impl Literal {
    pub fn boolean(v: bool) -> Self {
        Literal {
            kind: LiteralKind::Boolean,
            lexical: if v { "True" } else { "False" }.to_string(),
        }
    }

    pub fn integer(v: i64) -> Self {
        Literal {
            kind: LiteralKind::Integer,
            lexical: v.to_string(),
        }
    }

    pub fn string(v: impl Into<String>) -> Self {
        Literal {
            kind: LiteralKind::String,
            lexical: v.into(),
        }
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            LiteralKind::String => write_quoted(f, &self.lexical),
            _ => f.write_str(&self.lexical),
        }
    }
}

pub(crate) fn write_quoted(f: &mut impl fmt::Write, s: &str) -> fmt::Result {
    f.write_char('"')?;
    for c in s.chars() {
        match c {
            '"' => f.write_str("\\\"")?,
            '\\' => f.write_str("\\\\")?,
            '\n' => f.write_str("\\n")?,
            '\t' => f.write_str("\\t")?,
            c => f.write_char(c)?,
        }
    }
    f.write_char('"')
}
