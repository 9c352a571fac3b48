//! Code context extraction for a warning.
//!
//! A Java-subset source file is parsed, the warned method is located, class
//! fields are collected, and the method is lowered to a three-address IR
//! whose dependence graph yields a bidirectional slice around the warned
//! lines. Each of the three resulting texts falls back to a whole-class
//! rendering when the warning cannot be pinned to a method or to IR lines.

pub mod ast;
pub mod ir;
pub mod lexer;
pub mod lower;
pub mod parser;
pub mod pdg;
pub mod slice;

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::report::WarningRecord;
use ast::{MethodDecl, SourceUnit};

pub use ir::{IrFunction, IrInstruction};
pub use lower::lower_to_ir;
pub use parser::parse_java_subset;
pub use pdg::{build_pdg, Dpg};
pub use slice::{slice_indices, warning_aware_slice};

/// Token standing in for a channel with no content.
pub const EMPTY_MARKER: &str = "<empty>";

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("line {line}: {message}")]
pub struct ParseError {
    pub line: u32,
    pub message: String,
}

impl ParseError {
    pub fn new(line: u32, message: impl Into<String>) -> Self {
        ParseError {
            line,
            message: message.into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("line {line}: {message}")]
pub struct LowerError {
    pub line: u32,
    pub message: String,
}

impl LowerError {
    pub fn new(line: u32, message: impl Into<String>) -> Self {
        LowerError {
            line,
            message: message.into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ContextError {
    #[error("parse error at {0}")]
    Parse(#[from] ParseError),
    #[error("lowering error at {0}")]
    Lower(#[from] LowerError),
    #[error("slice criterion is empty")]
    EmptyCriterion,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Located<'a> {
    Methods(Vec<&'a MethodDecl>),
    WholeClass,
}

/// Picks the method(s) a warning refers to.
///
/// With line information the method whose span overlaps the warned lines is
/// chosen when it is unique. Without lines, every method sharing the
/// warning's method name is returned (`<init>` names constructors). All other
/// cases resolve to the whole class.
pub fn locate_function<'a>(unit: &'a SourceUnit, w: &WarningRecord) -> Located<'a> {
    if let Some((start, end)) = w.lines() {
        let hits: Vec<&MethodDecl> = unit
            .methods
            .iter()
            .filter(|m| m.lines.0 <= end && start <= m.lines.1)
            .collect();
        return if hits.len() == 1 {
            Located::Methods(hits)
        } else {
            Located::WholeClass
        };
    }
    if let Some(name) = &w.method_name {
        let hits: Vec<&MethodDecl> = unit
            .methods
            .iter()
            .filter(|m| {
                if name == "<init>" {
                    m.is_constructor()
                } else {
                    &m.name == name && !m.is_constructor()
                }
            })
            .collect();
        if !hits.is_empty() {
            return Located::Methods(hits);
        }
    }
    Located::WholeClass
}

/// Field declarations in source order, one per line. Declarators sharing a
/// statement contribute the statement once.
pub fn extract_fields(unit: &SourceUnit) -> String {
    let mut seen = BTreeSet::new();
    let mut parts = Vec::new();
    for f in &unit.fields {
        if seen.insert(f.span) {
            parts.push(unit.source[f.span.0..f.span.1].trim());
        }
    }
    if parts.is_empty() {
        EMPTY_MARKER.to_string()
    } else {
        parts.join("\n")
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CodeContext {
    pub function_text: String,
    pub field_text: String,
    pub slice_text: String,
    /// The function channel holds the whole class.
    pub function_fallback: bool,
    /// The slice channel holds whole-class IR.
    pub slice_fallback: bool,
}

impl CodeContext {
    /// Context used when no source is available for a warning.
    pub fn empty() -> Self {
        CodeContext {
            function_text: EMPTY_MARKER.to_string(),
            field_text: EMPTY_MARKER.to_string(),
            slice_text: EMPTY_MARKER.to_string(),
            function_fallback: true,
            slice_fallback: true,
        }
    }
}

fn render_method_ir(unit: &SourceUnit, m: &MethodDecl) -> Result<String, LowerError> {
    let f = lower_to_ir(unit, m)?;
    Ok(format!("{}:\n{}", m.name, f.render_all()))
}

/// IR of every method in the class, each preceded by a `name:` header.
pub fn whole_class_ir(unit: &SourceUnit) -> Result<String, LowerError> {
    let mut out = String::new();
    for m in &unit.methods {
        out.push_str(&render_method_ir(unit, m)?);
    }
    Ok(non_empty(out))
}

fn non_empty(s: String) -> String {
    if s.trim().is_empty() {
        EMPTY_MARKER.to_string()
    } else {
        s
    }
}

pub fn build_context(unit: &SourceUnit, w: &WarningRecord) -> Result<CodeContext, ContextError> {
    let field_text = extract_fields(unit);
    let methods = match locate_function(unit, w) {
        Located::Methods(ms) => ms,
        Located::WholeClass => {
            return Ok(CodeContext {
                function_text: non_empty(unit.class_text().to_string()),
                field_text,
                slice_text: whole_class_ir(unit)?,
                function_fallback: true,
                slice_fallback: true,
            });
        }
    };
    let function_text = non_empty(
        methods
            .iter()
            .map(|m| m.text(&unit.source))
            .collect::<Vec<_>>()
            .join("\n"),
    );
    let (slice_text, slice_fallback) = match (w.lines(), methods.as_slice()) {
        (Some((start, end)), [m]) => {
            let f = lower_to_ir(unit, m)?;
            let criterion: BTreeSet<u32> = (start..=end).collect();
            if f.instructions.iter().any(|i| criterion.contains(&i.source_line)) {
                let g = build_pdg(&f);
                (warning_aware_slice(&g, &f, &criterion)?, false)
            } else {
                (whole_class_ir(unit)?, true)
            }
        }
        // Name-located methods carry no criterion, so their full IR is used.
        _ => {
            let mut out = String::new();
            for m in &methods {
                out.push_str(&render_method_ir(unit, m)?);
            }
            (non_empty(out), false)
        }
    };
    Ok(CodeContext {
        function_text,
        field_text,
        slice_text,
        function_fallback: false,
        slice_fallback,
    })
}

/// Parses `source` and builds the context for `w`.
pub fn context_for_source(source: &str, w: &WarningRecord) -> Result<CodeContext, ContextError> {
    let unit = parse_java_subset(source)?;
    build_context(&unit, w)
}
