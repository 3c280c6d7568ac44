use std::fmt::Write;

use crate::mocl::write_quoted;
use crate::model::{BehavioralModel, ResourceKind, ResourceModel, StateKind};

/// Canonical text of a model. Parsing the output yields the same models, and
/// formatting again yields the same text.
pub fn format_model(rm: &ResourceModel, bm: Option<&BehavioralModel>) -> String {
    let mut out = String::new();
    let _ = write_resources(&mut out, rm);
    if let Some(bm) = bm {
        out.push('\n');
        let _ = write_behavior(&mut out, bm);
    }
    out
}

fn write_resources(out: &mut String, rm: &ResourceModel) -> std::fmt::Result {
    writeln!(out, "resources {} {{", rm.name)?;
    for r in &rm.resources {
        out.push_str("  ");
        if r.is_root {
            out.push_str("root ");
        }
        let kw = match r.kind {
            ResourceKind::Normal => "resource",
            ResourceKind::Collection => "collection",
        };
        write!(out, "{kw} {}", r.name)?;
        if let Some(p) = &r.parent {
            write!(out, " extends {p}")?;
        }
        if r.attributes.is_empty() {
            out.push('\n');
        } else {
            out.push_str(" {\n");
            for a in &r.attributes {
                writeln!(out, "    attr {}: {}", a.name, a.datatype)?;
            }
            out.push_str("  }\n");
        }
    }
    for a in &rm.associations {
        writeln!(
            out,
            "  association {}: {} -> {} [{}..{}]",
            a.label, a.source, a.target, a.min, a.max
        )?;
    }
    out.push_str("}\n");
    Ok(())
}

fn write_behavior(out: &mut String, bm: &BehavioralModel) -> std::fmt::Result {
    writeln!(out, "behavior {} for {} {{", bm.name, bm.for_resource)?;
    for s in &bm.states {
        match s.kind {
            StateKind::Initial => writeln!(out, "  initial {}", s.name)?,
            StateKind::Final => writeln!(out, "  final {}", s.name)?,
            StateKind::Simple | StateKind::Composite => {
                write!(out, "  state {}", s.name)?;
                if let Some(p) = &s.parent {
                    write!(out, " in {p}")?;
                    if s.region > 0 {
                        write!(out, " region {}", s.region)?;
                    }
                }
                match &s.invariant {
                    Some(inv) => writeln!(out, " {{\n    inv: {inv}\n  }}")?,
                    None => out.push('\n'),
                }
            }
        }
    }
    for t in &bm.transitions {
        write!(
            out,
            "  transition {} -> {} on {}",
            t.source, t.target, t.trigger
        )?;
        if let Some(r) = &t.target_resource {
            write!(out, " {r}")?;
        }
        if let Some(g) = &t.guard {
            out.push_str(" guard ");
            write_quoted(out, g)?;
        }
        if let Some(p) = &t.post {
            out.push_str(" post ");
            write_quoted(out, p)?;
        }
        out.push('\n');
    }
    out.push_str("}\n");
    Ok(())
}
