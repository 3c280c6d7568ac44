use std::collections::HashSet;

use super::{ModelError, ParseError, ParsedModel, SourceMap, Unbound};
use crate::lex::{tokenize, Tok, Tokens};
use crate::mocl;
use crate::model::{
    Association, AttributeDef, BehavioralModel, Datatype, ElementRef, MaxCard, ResourceDef,
    ResourceKind, ResourceModel, State, StateKind, Transition, Trigger,
};
use crate::span::SourceSpan;

const KEYWORDS: [&str; 19] = [
    "resources",
    "resource",
    "collection",
    "root",
    "extends",
    "attr",
    "association",
    "behavior",
    "for",
    "state",
    "in",
    "region",
    "inv",
    "initial",
    "final",
    "transition",
    "on",
    "guard",
    "post",
];

/// Parses a model file read from `<input>`.
pub fn parse_model_file(input: &str) -> Result<ParsedModel, ModelError> {
    parse_model(input, "<input>")
}

/// Parses `input`, naming `file` in error positions.
pub fn parse_model(input: &str, file: &str) -> Result<ParsedModel, ModelError> {
    let mut p = Parser {
        toks: Tokens::new(tokenize(input, file, (1, 1))),
        spans: SourceMap::new(file),
        refs: Vec::new(),
    };
    let resources = p.resource_block()?;
    let behavior = if p.toks.is_word("behavior") {
        Some(p.behavior_block()?)
    } else {
        None
    };
    if p.toks.peek().tok != Tok::Eof {
        let expected = if behavior.is_some() {
            "end of input"
        } else {
            "\"behavior\" or end of input"
        };
        return Err(p.toks.error(expected).into());
    }
    let mut behavior = behavior;
    if let Some(bm) = behavior.as_mut() {
        let parents: HashSet<String> = bm.states.iter().filter_map(|s| s.parent.clone()).collect();
        for s in bm.states.iter_mut() {
            if s.kind == StateKind::Simple && parents.contains(&s.name) {
                s.kind = StateKind::Composite;
            }
        }
    }
    let unbound = resolve(&resources, behavior.as_ref(), &p.refs);
    if !unbound.is_empty() {
        return Err(ModelError::Resolve(unbound));
    }
    Ok(ParsedModel {
        resources,
        behavior,
        spans: p.spans,
    })
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum RefKind {
    Resource,
    State,
}

struct Parser {
    toks: Tokens,
    spans: SourceMap,
    /// Every name use, checked once both blocks are read.
    refs: Vec<(RefKind, String, SourceSpan)>,
}

impl Parser {
    fn ident(&mut self, what: &str) -> Result<(String, SourceSpan), ParseError> {
        self.toks.expect_ident(what, &KEYWORDS)
    }

    fn resource_block(&mut self) -> Result<ResourceModel, ParseError> {
        let start = self.toks.expect_word("resources")?;
        let (name, _) = self.ident("resource model name")?;
        self.toks.expect_punct("{")?;
        let mut rm = ResourceModel {
            name,
            ..Default::default()
        };
        while self.toks.is_word("root")
            || self.toks.is_word("resource")
            || self.toks.is_word("collection")
        {
            rm.resources.push(self.resource_decl()?);
        }
        while self.toks.is_word("association") {
            rm.associations.push(self.assoc_decl()?);
        }
        if !self.toks.is_punct("}") {
            let expected = if rm.associations.is_empty() {
                "\"root\", \"resource\", \"collection\", \"association\" or \"}\""
            } else {
                "\"association\" or \"}\""
            };
            return Err(self.toks.error(expected));
        }
        let end = self.toks.expect_punct("}")?;
        self.spans
            .insert(ElementRef::ResourceModel, start.join(&end));
        Ok(rm)
    }

    fn resource_decl(&mut self) -> Result<ResourceDef, ParseError> {
        let start = self.toks.peek().span.clone();
        let is_root = self.toks.eat_word("root");
        let kind = if self.toks.eat_word("resource") {
            ResourceKind::Normal
        } else if self.toks.eat_word("collection") {
            ResourceKind::Collection
        } else {
            return Err(self.toks.error("\"resource\" or \"collection\""));
        };
        let (name, _) = self.ident("resource name")?;
        let parent = if self.toks.eat_word("extends") {
            let (p, span) = self.ident("super-resource name")?;
            self.refs.push((RefKind::Resource, p.clone(), span));
            Some(p)
        } else {
            None
        };
        let mut attributes = Vec::new();
        if self.toks.eat_punct("{") {
            while self.toks.is_word("attr") {
                let a_start = self.toks.next().span;
                let (a_name, _) = self.ident("attribute name")?;
                self.toks.expect_punct(":")?;
                let datatype = match &self.toks.peek().tok {
                    Tok::Ident(s) => Datatype::from_keyword(s),
                    _ => None,
                }
                .ok_or_else(|| {
                    self.toks
                        .error("attribute type (string, boolean, integer or decimal)")
                })?;
                let a_end = self.toks.next().span;
                self.spans
                    .insert(ElementRef::attribute(&name, &a_name), a_start.join(&a_end));
                attributes.push(AttributeDef {
                    name: a_name,
                    datatype,
                });
            }
            if !self.toks.is_punct("}") {
                return Err(self.toks.error("\"attr\" or \"}\""));
            }
            self.toks.next();
        }
        self.spans.insert(
            ElementRef::Resource(name.clone()),
            start.join(&self.toks.prev_span()),
        );
        Ok(ResourceDef {
            name,
            kind,
            attributes,
            parent,
            is_root,
        })
    }

    fn assoc_decl(&mut self) -> Result<Association, ParseError> {
        let start = self.toks.expect_word("association")?;
        let (label, _) = self.ident("association label")?;
        self.toks.expect_punct(":")?;
        let (source, s_span) = self.ident("source resource")?;
        self.toks.expect_punct("->")?;
        let (target, t_span) = self.ident("target resource")?;
        self.refs.push((RefKind::Resource, source.clone(), s_span));
        self.refs.push((RefKind::Resource, target.clone(), t_span));
        self.toks.expect_punct("[")?;
        let (min, _) = self.toks.expect_nat("minimum cardinality")?;
        self.toks.expect_punct("..")?;
        let max = if self.toks.eat_punct("*") {
            MaxCard::Unbounded
        } else {
            MaxCard::Bounded(self.toks.expect_nat("maximum cardinality or \"*\"")?.0)
        };
        let end = self.toks.expect_punct("]")?;
        self.spans
            .insert(ElementRef::Association(label.clone()), start.join(&end));
        Ok(Association {
            label,
            source,
            target,
            min,
            max,
        })
    }

    fn behavior_block(&mut self) -> Result<BehavioralModel, ParseError> {
        let start = self.toks.expect_word("behavior")?;
        let (name, _) = self.ident("behavior name")?;
        self.toks.expect_word("for")?;
        let (for_resource, r_span) = self.ident("resource name")?;
        self.refs
            .push((RefKind::Resource, for_resource.clone(), r_span));
        self.toks.expect_punct("{")?;
        let mut bm = BehavioralModel {
            name,
            for_resource,
            ..Default::default()
        };
        while self.toks.is_word("state")
            || self.toks.is_word("initial")
            || self.toks.is_word("final")
        {
            bm.states.push(self.state_decl()?);
        }
        while self.toks.is_word("transition") {
            let i = bm.transitions.len();
            bm.transitions.push(self.trans_decl(i)?);
        }
        if !self.toks.is_punct("}") {
            let expected = if bm.transitions.is_empty() {
                "\"state\", \"initial\", \"final\", \"transition\" or \"}\""
            } else {
                "\"transition\" or \"}\""
            };
            return Err(self.toks.error(expected));
        }
        let end = self.toks.next().span;
        self.spans
            .insert(ElementRef::BehavioralModel, start.join(&end));
        Ok(bm)
    }

    fn state_decl(&mut self) -> Result<State, ParseError> {
        let start = self.toks.peek().span.clone();
        let pseudo = if self.toks.eat_word("initial") {
            Some(StateKind::Initial)
        } else if self.toks.eat_word("final") {
            Some(StateKind::Final)
        } else {
            None
        };
        if let Some(kind) = pseudo {
            let (name, end) = self.ident("state name")?;
            self.spans
                .insert(ElementRef::State(name.clone()), start.join(&end));
            return Ok(State {
                name,
                kind,
                parent: None,
                region: 0,
                invariant: None,
            });
        }
        self.toks.expect_word("state")?;
        let (name, _) = self.ident("state name")?;
        let mut parent = None;
        let mut region = 0;
        if self.toks.eat_word("in") {
            let (p, span) = self.ident("composite state name")?;
            self.refs.push((RefKind::State, p.clone(), span));
            parent = Some(p);
            if self.toks.eat_word("region") {
                region = self.toks.expect_nat("region number")?.0;
            }
        }
        let mut invariant = None;
        if self.toks.eat_punct("{") {
            if self.toks.eat_word("inv") {
                self.toks.expect_punct(":")?;
                invariant = Some(mocl_expr(&mut self.toks)?);
            }
            if !self.toks.is_punct("}") {
                let expected = if invariant.is_some() {
                    "\"and\", \"or\" or \"}\""
                } else {
                    "\"inv\" or \"}\""
                };
                return Err(self.toks.error(expected));
            }
            self.toks.next();
        }
        self.spans.insert(
            ElementRef::State(name.clone()),
            start.join(&self.toks.prev_span()),
        );
        Ok(State {
            name,
            kind: StateKind::Simple,
            parent,
            region,
            invariant,
        })
    }

    fn trans_decl(&mut self, index: usize) -> Result<Transition, ParseError> {
        let start = self.toks.expect_word("transition")?;
        let (source, s_span) = self.ident("source state")?;
        self.toks.expect_punct("->")?;
        let (target, t_span) = self.ident("target state")?;
        self.refs.push((RefKind::State, source.clone(), s_span));
        self.refs.push((RefKind::State, target.clone(), t_span));
        self.toks.expect_word("on")?;
        let trigger = match &self.toks.peek().tok {
            Tok::Ident(s) => match Trigger::parse(s) {
                Some(t) => t,
                None => {
                    let err = self.toks.error("trigger PUT, POST or DELETE");
                    return Err(match s.as_str() {
                        "GET" => err
                            .with_hint("GET has no side effects and cannot trigger a state change"),
                        _ => err.with_hint("only PUT, POST and DELETE may trigger transitions"),
                    });
                }
            },
            _ => return Err(self.toks.error("trigger PUT, POST or DELETE")),
        };
        self.toks.next();
        let target_resource = match &self.toks.peek().tok {
            Tok::Ident(s) if !KEYWORDS.contains(&s.as_str()) => {
                let (r, span) = self.ident("resource name")?;
                self.refs.push((RefKind::Resource, r.clone(), span));
                Some(r)
            }
            _ => None,
        };
        let guard = if self.toks.eat_word("guard") {
            Some(self.string("guard text")?)
        } else {
            None
        };
        let post = if self.toks.eat_word("post") {
            Some(self.string("postcondition text")?)
        } else {
            None
        };
        self.spans.insert(
            ElementRef::Transition(index),
            start.join(&self.toks.prev_span()),
        );
        Ok(Transition {
            source,
            target,
            trigger,
            target_resource,
            guard,
            post,
        })
    }

    fn string(&mut self, what: &str) -> Result<String, ParseError> {
        match &self.toks.peek().tok {
            Tok::Str(s) => {
                let s = s.clone();
                self.toks.next();
                Ok(s)
            }
            _ => Err(self.toks.error(format!("quoted {what}"))),
        }
    }
}

fn mocl_expr(toks: &mut Tokens) -> Result<crate::mocl::OclExpr, ParseError> {
    mocl::parse_expr(toks)
}

fn resolve(
    rm: &ResourceModel,
    bm: Option<&BehavioralModel>,
    refs: &[(RefKind, String, SourceSpan)],
) -> Vec<Unbound> {
    let resources: HashSet<&str> = rm.resources.iter().map(|r| r.name.as_str()).collect();
    let states: HashSet<&str> = bm
        .iter()
        .flat_map(|b| b.states.iter())
        .map(|s| s.name.as_str())
        .collect();
    refs.iter()
        .filter(|(kind, name, _)| match kind {
            RefKind::Resource => !resources.contains(name.as_str()),
            RefKind::State => !states.contains(name.as_str()),
        })
        .map(|(kind, name, span)| Unbound {
            name: name.clone(),
            what: if *kind == RefKind::Resource {
                "resource"
            } else {
                "state"
            },
            span: span.clone(),
        })
        .collect()
}
