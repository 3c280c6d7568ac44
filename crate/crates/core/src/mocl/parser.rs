use super::{CmpOp, Literal, LiteralKind, NavPath, OclExpr};
use crate::dsl::ParseError;
use crate::lex::{tokenize, Tok, Tokens};

const RESERVED: [&str; 5] = ["self", "and", "or", "True", "False"];

/// Parses a complete invariant.
pub fn parse_ocl(input: &str) -> Result<OclExpr, ParseError> {
    parse_ocl_at(input, "<ocl>", (1, 1))
}

/// Like [`parse_ocl`], reporting positions relative to `start` in `file`.
pub fn parse_ocl_at(input: &str, file: &str, start: (u32, u32)) -> Result<OclExpr, ParseError> {
    let mut toks = Tokens::new(tokenize(input, file, start));
    let e = parse_expr(&mut toks)?;
    if toks.peek().tok != Tok::Eof {
        return Err(toks.error("\"and\", \"or\" or end of invariant"));
    }
    Ok(e)
}

pub(crate) fn parse_expr(toks: &mut Tokens) -> Result<OclExpr, ParseError> {
    let mut ops = vec![parse_and(toks)?];
    while toks.eat_word("or") {
        ops.push(parse_and(toks)?);
    }
    Ok(OclExpr::or(ops))
}

fn parse_and(toks: &mut Tokens) -> Result<OclExpr, ParseError> {
    let mut ops = vec![parse_prim(toks)?];
    while toks.eat_word("and") {
        ops.push(parse_prim(toks)?);
    }
    Ok(OclExpr::and(ops))
}

fn parse_prim(toks: &mut Tokens) -> Result<OclExpr, ParseError> {
    if toks.eat_punct("(") {
        let e = parse_expr(toks)?;
        toks.expect_punct(")")?;
        return Ok(e);
    }
    let path = parse_path(toks)?;
    if toks.eat_punct("->") {
        toks.expect_word("size")?;
        toks.expect_punct("(")?;
        toks.expect_punct(")")?;
        let op = match &toks.peek().tok {
            Tok::Punct("=") => CmpOp::Eq,
            Tok::Punct(">=") => CmpOp::Ge,
            Tok::Punct("<=") => CmpOp::Le,
            Tok::Punct(">") => CmpOp::Gt,
            Tok::Punct("<") => CmpOp::Lt,
            _ => return Err(toks.error("comparison operator (=, >=, <=, >, <)")),
        };
        toks.next();
        let (bound, _) = toks.expect_nat("natural number")?;
        Ok(OclExpr::SizeCmp { path, op, bound })
    } else if toks.eat_punct("=") {
        let value = parse_literal(toks)?;
        Ok(OclExpr::AttrEq { path, value })
    } else {
        Err(toks.error("\"->\" or \"=\""))
    }
}

fn parse_path(toks: &mut Tokens) -> Result<NavPath, ParseError> {
    if toks.is_word("self") {
        toks.next();
        toks.expect_punct(".")?;
    }
    let mut segments = vec![
        toks.expect_ident("attribute or association name", &RESERVED)?
            .0,
    ];
    while toks.eat_punct(".") {
        segments.push(
            toks.expect_ident("attribute or association name", &RESERVED)?
                .0,
        );
    }
    Ok(NavPath { segments })
}

fn parse_literal(toks: &mut Tokens) -> Result<Literal, ParseError> {
    let lit = match &toks.peek().tok {
        Tok::Ident(s) if s == "True" || s == "False" => Literal {
            kind: LiteralKind::Boolean,
            lexical: s.clone(),
        },
        Tok::Nat(s) => Literal {
            kind: LiteralKind::Integer,
            lexical: s.clone(),
        },
        Tok::Decimal(s) => Literal {
            kind: LiteralKind::Decimal,
            lexical: s.clone(),
        },
        Tok::Str(s) => Literal::string(s.clone()),
        Tok::Punct("-") => {
            toks.next();
            return match &toks.peek().tok {
                Tok::Nat(s) => {
                    let lit = Literal {
                        kind: LiteralKind::Integer,
                        lexical: format!("-{s}"),
                    };
                    toks.next();
                    Ok(lit)
                }
                _ => Err(toks.error("natural number after \"-\"")),
            };
        }
        _ => return Err(toks.error("literal (True, False, number or string)")),
    };
    toks.next();
    Ok(lit)
}
