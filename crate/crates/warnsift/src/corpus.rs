//! JSON-lines corpus files, one labeled warning per line.

use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};
use warnsift_core::dataset::Provenance;
use warnsift_core::{Category, Label, LabeledWarning, WarningRecord};

#[derive(Debug, thiserror::Error)]
pub enum CorpusError {
    #[error("line {line}: {message}")]
    Line { line: usize, message: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Field layout of one corpus line.
#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Row {
    rule: String,
    category: String,
    rank: u8,
    confidence: u8,
    message: String,
    class_name: String,
    method_name: Option<String>,
    source_path: String,
    line_start: Option<u32>,
    line_end: Option<u32>,
    label: String,
    repo_id: String,
    commit: String,
}

fn to_row(e: &LabeledWarning) -> Row {
    let w = &e.warning;
    Row {
        rule: w.rule.clone(),
        category: w.category.as_str().to_string(),
        rank: w.rank,
        confidence: w.confidence,
        message: w.message.clone(),
        class_name: w.class_name.clone(),
        method_name: w.method_name.clone(),
        source_path: w.source_path.clone(),
        line_start: w.line_start,
        line_end: w.line_end,
        label: e.label.as_str().to_string(),
        repo_id: e.provenance.repo_id.clone(),
        commit: e.provenance.commit.clone(),
    }
}

fn from_row(r: Row) -> Result<LabeledWarning, String> {
    let category: Category = r.category.parse().map_err(|e| format!("{e}"))?;
    let label = Label::parse(&r.label).ok_or_else(|| format!("unknown label `{}`", r.label))?;
    let warning = WarningRecord {
        rule: r.rule,
        category,
        rank: r.rank,
        confidence: r.confidence,
        message: r.message,
        class_name: r.class_name,
        method_name: r.method_name,
        source_path: r.source_path,
        line_start: r.line_start,
        line_end: r.line_end,
    };
    warning.validate()?;
    Ok(LabeledWarning {
        warning,
        label,
        provenance: Provenance {
            repo_id: r.repo_id,
            commit: r.commit,
        },
    })
}

/// One JSON object per entry, each terminated by `\n`.
pub fn write_corpus(mut out: impl Write, corpus: &[LabeledWarning]) -> std::io::Result<()> {
    for e in corpus {
        serde_json::to_writer(&mut out, &to_row(e))?;
        out.write_all(b"\n")?;
    }
    Ok(())
}

pub fn corpus_to_string(corpus: &[LabeledWarning]) -> String {
    let mut buf = Vec::new();
    write_corpus(&mut buf, corpus).expect("writing to memory");
    String::from_utf8(buf).expect("serde_json emits UTF-8")
}

/// Reads a corpus, skipping blank lines. Line numbers in errors are
/// one-based.
pub fn read_corpus(input: impl BufRead) -> Result<Vec<LabeledWarning>, CorpusError> {
    let mut out = Vec::new();
    for (i, line) in input.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let row: Row = serde_json::from_str(&line).map_err(|e| CorpusError::Line {
            line: i + 1,
            message: e.to_string(),
        })?;
        out.push(from_row(row).map_err(|message| CorpusError::Line { line: i + 1, message })?);
    }
    Ok(out)
}

pub fn read_corpus_file(path: &std::path::Path) -> anyhow::Result<Vec<LabeledWarning>> {
    use anyhow::Context;
    let f = std::fs::File::open(path).with_context(|| format!("opening {}", path.display()))?;
    read_corpus(std::io::BufReader::new(f)).with_context(|| format!("reading {}", path.display()))
}
