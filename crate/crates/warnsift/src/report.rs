//! Analyzer XML reports: reading `BugInstance` elements into warning
//! records and writing records back out in the same shape.

use std::fmt::Write as _;

use quick_xml::events::{BytesStart, Event};
use quick_xml::Reader;
use warnsift_core::report::{Diagnostic, RawWarning};
use warnsift_core::WarningRecord;

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
#[error("malformed report at byte {offset}: {message}")]
pub struct ReportError {
    pub offset: u64,
    pub message: String,
}

/// Records in document order plus per-entry diagnostics. Entries with an
/// unknown category are absent from `records` and present, rejected, in
/// `diagnostics`.
#[derive(Debug, Default, PartialEq, Eq)]
pub struct ParsedReport {
    pub records: Vec<WarningRecord>,
    pub diagnostics: Vec<Diagnostic>,
}

/// Which `BugInstance` child a nested element belongs to.
#[derive(Clone, Copy, PartialEq, Eq)]
enum Scope {
    Instance,
    Class,
    Method,
    LongMessage,
    Other,
}

#[derive(Default)]
struct Pending {
    raw: RawWarning,
    class_primary: Option<bool>,
    method_primary: Option<bool>,
    line_primary: Option<bool>,
    /// Line information nested in `Method` or `Class`, used when the
    /// instance has no direct `SourceLine`.
    nested_line: Option<(Option<String>, Option<String>, Option<String>)>,
}

fn attr(e: &BytesStart<'_>, name: &[u8], offset: u64) -> Result<Option<String>, ReportError> {
    for a in e.attributes() {
        let a = a.map_err(|err| ReportError {
            offset,
            message: err.to_string(),
        })?;
        if a.key.as_ref() == name {
            let v = a.unescape_value().map_err(|err| ReportError {
                offset,
                message: err.to_string(),
            })?;
            return Ok(Some(v.into_owned()));
        }
    }
    Ok(None)
}

fn is_primary(e: &BytesStart<'_>, offset: u64) -> Result<bool, ReportError> {
    Ok(attr(e, b"primary", offset)?.as_deref() == Some("true"))
}

/// A slot is replaced by a later element only when the earlier one was not
/// marked primary and the later one is.
fn takes_slot(current: Option<bool>, primary: bool) -> bool {
    match current {
        None => true,
        Some(was) => !was && primary,
    }
}

impl Pending {
    fn element(&mut self, e: &BytesStart<'_>, parent: Scope, offset: u64) -> Result<Scope, ReportError> {
        let primary = is_primary(e, offset)?;
        let scope = match (parent, e.name().as_ref()) {
            (Scope::Instance, b"Class") => {
                if takes_slot(self.class_primary, primary) {
                    self.raw.class_name = attr(e, b"classname", offset)?.unwrap_or_default();
                    self.class_primary = Some(primary);
                }
                Scope::Class
            }
            (Scope::Instance, b"Method") => {
                if takes_slot(self.method_primary, primary) {
                    self.raw.method_name = attr(e, b"name", offset)?;
                    self.method_primary = Some(primary);
                }
                Scope::Method
            }
            (Scope::Instance, b"SourceLine") => {
                if takes_slot(self.line_primary, primary) {
                    self.raw.source_path = attr(e, b"sourcepath", offset)?;
                    self.raw.line_start = attr(e, b"start", offset)?;
                    self.raw.line_end = attr(e, b"end", offset)?;
                    self.line_primary = Some(primary);
                }
                Scope::Other
            }
            (Scope::Method | Scope::Class, b"SourceLine") => {
                // Method lines take precedence over class lines.
                if self.nested_line.is_none() || parent == Scope::Method {
                    self.nested_line = Some((
                        attr(e, b"sourcepath", offset)?,
                        attr(e, b"start", offset)?,
                        attr(e, b"end", offset)?,
                    ));
                }
                Scope::Other
            }
            (Scope::Instance, b"LongMessage") => Scope::LongMessage,
            _ => Scope::Other,
        };
        Ok(scope)
    }

    fn finish(mut self) -> RawWarning {
        if self.line_primary.is_none() {
            if let Some((path, start, end)) = self.nested_line {
                self.raw.source_path = path;
                // Class-level lines span the whole class and would make a
                // meaningless slicing criterion.
                if self.method_primary.is_some() {
                    self.raw.line_start = start;
                    self.raw.line_end = end;
                }
            }
        }
        self.raw
    }
}

fn instance_start(e: &BytesStart<'_>, offset: u64) -> Result<Pending, ReportError> {
    Ok(Pending {
        raw: RawWarning {
            rule: attr(e, b"type", offset)?.unwrap_or_default(),
            category: attr(e, b"category", offset)?.unwrap_or_default(),
            rank: attr(e, b"rank", offset)?,
            priority: attr(e, b"priority", offset)?,
            ..RawWarning::default()
        },
        ..Pending::default()
    })
}

/// Parses an analyzer report. One record per `BugInstance`, in document
/// order; range problems are clamped and noted, unknown categories reject
/// only their own entry, and any XML error fails the whole document.
pub fn parse_report(bytes: &[u8]) -> Result<ParsedReport, ReportError> {
    let mut reader = Reader::from_reader(bytes);
    reader.config_mut().trim_text(true);
    let mut out = ParsedReport::default();
    let mut open: Vec<Vec<u8>> = Vec::new();
    let mut scopes: Vec<Scope> = Vec::new();
    let mut pending: Option<Pending> = None;
    let mut entry = 0usize;
    let mut seen_root = false;
    loop {
        let offset = reader.buffer_position();
        let event = reader.read_event().map_err(|err| ReportError {
            offset: reader.error_position(),
            message: err.to_string(),
        })?;
        match event {
            Event::Start(e) | Event::Empty(e) if open.is_empty() && seen_root => {
                return Err(ReportError {
                    offset,
                    message: format!(
                        "second root element <{}>",
                        String::from_utf8_lossy(e.name().as_ref())
                    ),
                });
            }
            Event::Start(ref e) | Event::Empty(ref e) => {
                seen_root = true;
                let empty = matches!(event, Event::Empty(_));
                let scope = match (&mut pending, scopes.last()) {
                    (None, _) if e.name().as_ref() == b"BugInstance" => {
                        pending = Some(instance_start(e, offset)?);
                        Scope::Instance
                    }
                    (Some(p), Some(&parent)) => p.element(e, parent, offset)?,
                    _ => Scope::Other,
                };
                if empty {
                    if scope == Scope::Instance {
                        close_instance(&mut pending, &mut entry, &mut out);
                    }
                } else {
                    open.push(e.name().as_ref().to_vec());
                    scopes.push(scope);
                }
            }
            Event::End(_) => {
                // The reader already checks that end names match.
                open.pop();
                if scopes.pop() == Some(Scope::Instance) {
                    close_instance(&mut pending, &mut entry, &mut out);
                }
            }
            Event::Text(t) => {
                if scopes.last() == Some(&Scope::LongMessage) {
                    let text = t.unescape().map_err(|err| ReportError {
                        offset,
                        message: err.to_string(),
                    })?;
                    if let Some(p) = &mut pending {
                        p.raw.message.push_str(&text);
                    }
                }
            }
            Event::CData(t) => {
                if scopes.last() == Some(&Scope::LongMessage) {
                    if let Some(p) = &mut pending {
                        p.raw.message.push_str(&String::from_utf8_lossy(&t));
                    }
                }
            }
            Event::Eof => {
                if let Some(name) = open.last() {
                    return Err(ReportError {
                        offset: bytes.len() as u64,
                        message: format!(
                            "document ends inside <{}>",
                            String::from_utf8_lossy(name)
                        ),
                    });
                }
                if !seen_root {
                    return Err(ReportError {
                        offset: bytes.len() as u64,
                        message: "no root element".to_string(),
                    });
                }
                return Ok(out);
            }
            _ => {}
        }
    }
}

fn close_instance(pending: &mut Option<Pending>, entry: &mut usize, out: &mut ParsedReport) {
    if let Some(p) = pending.take() {
        if let Some(w) = p.finish().normalize(*entry, &mut out.diagnostics) {
            out.records.push(w);
        }
        *entry += 1;
    }
}

fn escape(s: &str) -> String {
    quick_xml::escape::escape(s).into_owned()
}

/// Writes records as an analyzer report that [`parse_report`] reads back
/// to the same records.
pub fn write_report(records: &[WarningRecord]) -> String {
    let mut s = String::from("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<BugCollection version=\"4.8.0\">\n");
    for w in records {
        let _ = writeln!(
            s,
            "  <BugInstance type=\"{}\" priority=\"{}\" rank=\"{}\" category=\"{}\">",
            escape(&w.rule),
            w.confidence,
            w.rank,
            w.category.as_str()
        );
        let _ = writeln!(s, "    <LongMessage>{}</LongMessage>", escape(&w.message));
        let _ = writeln!(s, "    <Class classname=\"{}\" primary=\"true\"/>", escape(&w.class_name));
        if let Some(m) = &w.method_name {
            let _ = writeln!(s, "    <Method name=\"{}\" primary=\"true\"/>", escape(m));
        }
        let _ = write!(s, "    <SourceLine sourcepath=\"{}\"", escape(&w.source_path));
        if let Some(start) = w.line_start {
            let _ = write!(s, " start=\"{start}\"");
        }
        if let Some(end) = w.line_end {
            let _ = write!(s, " end=\"{end}\"");
        }
        s.push_str(" primary=\"true\"/>\n  </BugInstance>\n");
    }
    s.push_str("</BugCollection>\n");
    s
}
