//! Normalized analyzer warnings and their cross-version fingerprints.

use alloc::format;
use alloc::string::{String, ToString};
use core::fmt;
use core::str::FromStr;

/// Lowest (most severe) analyzer rank.
pub const RANK_MIN: u8 = 1;
/// Highest (least severe) analyzer rank.
pub const RANK_MAX: u8 = 20;
/// Highest confidence value (the analyzer's "low" priority).
pub const CONFIDENCE_MAX: u8 = 3;

/// The closed set of analyzer bug categories.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Category {
    BadPractice,
    Correctness,
    Experimental,
    I18n,
    MaliciousCode,
    MtCorrectness,
    Noise,
    Performance,
    Security,
    Style,
}

impl Category {
    pub const ALL: [Category; 10] = [
        Category::BadPractice,
        Category::Correctness,
        Category::Experimental,
        Category::I18n,
        Category::MaliciousCode,
        Category::MtCorrectness,
        Category::Noise,
        Category::Performance,
        Category::Security,
        Category::Style,
    ];

    /// Analyzer spelling, e.g. `BAD_PRACTICE`.
    pub fn as_str(self) -> &'static str {
        match self {
            Category::BadPractice => "BAD_PRACTICE",
            Category::Correctness => "CORRECTNESS",
            Category::Experimental => "EXPERIMENTAL",
            Category::I18n => "I18N",
            Category::MaliciousCode => "MALICIOUS_CODE",
            Category::MtCorrectness => "MT_CORRECTNESS",
            Category::Noise => "NOISE",
            Category::Performance => "PERFORMANCE",
            Category::Security => "SECURITY",
            Category::Style => "STYLE",
        }
    }

    /// `NOISE` is a control category with no bug meaning; corpora drop it.
    pub fn is_excluded(self) -> bool {
        self == Category::Noise
    }
}

impl fmt::Display for Category {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("unknown warning category `{0}`")]
pub struct UnknownCategory(pub String);

impl FromStr for Category {
    type Err = UnknownCategory;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Category::ALL
            .iter()
            .copied()
            .find(|c| c.as_str() == s)
            .ok_or_else(|| UnknownCategory(s.to_string()))
    }
}

/// One analyzer warning.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WarningRecord {
    pub rule: String,
    pub category: Category,
    pub rank: u8,
    pub confidence: u8,
    pub message: String,
    pub class_name: String,
    pub method_name: Option<String>,
    pub source_path: String,
    pub line_start: Option<u32>,
    pub line_end: Option<u32>,
}

impl WarningRecord {
    /// Checks the range and line-span invariants.
    pub fn validate(&self) -> Result<(), String> {
        if !(RANK_MIN..=RANK_MAX).contains(&self.rank) {
            return Err(format!("rank {} outside [1,20]", self.rank));
        }
        if !(1..=CONFIDENCE_MAX).contains(&self.confidence) {
            return Err(format!("confidence {} outside [1,3]", self.confidence));
        }
        match (self.line_start, self.line_end) {
            (None, Some(_)) => Err("line_end without line_start".to_string()),
            (Some(0), _) | (_, Some(0)) => Err("line numbers are 1-based".to_string()),
            (Some(s), Some(e)) if e < s => Err(format!("line_end {e} < line_start {s}")),
            _ => Ok(()),
        }
    }

    /// Reported lines as an inclusive range, if any.
    pub fn lines(&self) -> Option<(u32, u32)> {
        self.line_start
            .map(|s| (s, self.line_end.unwrap_or(s).max(s)))
    }

    pub fn fingerprint(&self) -> WarningFingerprint {
        fingerprint(self)
    }
}

/// Line-insensitive identity of a warning across two program versions.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct WarningFingerprint {
    pub rule: String,
    pub source_path: String,
    pub method_name: Option<String>,
    pub normalized_message: String,
}

/// Placeholder substituted for every run of ASCII digits in a message.
pub const DIGIT_PLACEHOLDER: char = '#';

/// Replaces each maximal run of ASCII digits with [`DIGIT_PLACEHOLDER`].
pub fn normalize_digits(message: &str) -> String {
    let mut out = String::with_capacity(message.len());
    let mut in_run = false;
    for ch in message.chars() {
        if ch.is_ascii_digit() {
            if !in_run {
                out.push(DIGIT_PLACEHOLDER);
                in_run = true;
            }
        } else {
            in_run = false;
            out.push(ch);
        }
    }
    out
}

pub fn fingerprint(w: &WarningRecord) -> WarningFingerprint {
    WarningFingerprint {
        rule: w.rule.clone(),
        source_path: w.source_path.clone(),
        method_name: w.method_name.clone(),
        normalized_message: normalize_digits(&w.message),
    }
}

/// Attribute values as they appear in a report, before validation.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RawWarning {
    pub rule: String,
    pub category: String,
    pub rank: Option<String>,
    pub priority: Option<String>,
    pub message: String,
    pub class_name: String,
    pub method_name: Option<String>,
    pub source_path: Option<String>,
    pub line_start: Option<String>,
    pub line_end: Option<String>,
}

/// A non-fatal problem found while normalizing one report entry.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagnostic {
    /// Zero-based position of the entry within its report.
    pub entry: usize,
    pub rejected: bool,
    pub message: String,
}

fn parse_clamped(
    raw: Option<&str>,
    lo: u8,
    hi: u8,
    fallback: u8,
    what: &str,
    notes: &mut alloc::vec::Vec<String>,
) -> u8 {
    match raw.map(str::trim) {
        None => {
            notes.push(format!("missing {what}, using {fallback}"));
            fallback
        }
        Some(text) => match text.parse::<i64>() {
            Ok(v) if v < lo as i64 => {
                notes.push(format!("{what} {v} clamped to {lo}"));
                lo
            }
            Ok(v) if v > hi as i64 => {
                notes.push(format!("{what} {v} clamped to {hi}"));
                hi
            }
            Ok(v) => v as u8,
            Err(_) => {
                notes.push(format!("unreadable {what} `{text}`, using {fallback}"));
                fallback
            }
        },
    }
}

fn parse_line(raw: Option<&str>) -> Option<u32> {
    raw.and_then(|s| s.trim().parse::<u32>().ok()).filter(|&l| l > 0)
}

/// Derives `a/b/C.java` from `a.b.C` (or `a.b.C$Inner`).
pub fn source_path_from_class(class_name: &str) -> String {
    let outer = class_name.split('$').next().unwrap_or(class_name);
    let mut path = outer.replace('.', "/");
    path.push_str(".java");
    path
}

impl RawWarning {
    /// Validates and normalizes one entry. Range problems are clamped and
    /// reported; an unknown category rejects the entry.
    pub fn normalize(
        &self,
        entry: usize,
        diagnostics: &mut alloc::vec::Vec<Diagnostic>,
    ) -> Option<WarningRecord> {
        let category = match self.category.trim().parse::<Category>() {
            Ok(c) => c,
            Err(e) => {
                diagnostics.push(Diagnostic {
                    entry,
                    rejected: true,
                    message: format!("{} ({})", e, self.rule),
                });
                return None;
            }
        };
        let mut notes = alloc::vec::Vec::new();
        let rank = parse_clamped(self.rank.as_deref(), RANK_MIN, RANK_MAX, RANK_MAX, "rank", &mut notes);
        let confidence = parse_clamped(
            self.priority.as_deref(),
            1,
            CONFIDENCE_MAX,
            CONFIDENCE_MAX,
            "priority",
            &mut notes,
        );
        let mut line_start = parse_line(self.line_start.as_deref());
        let mut line_end = parse_line(self.line_end.as_deref());
        match (line_start, line_end) {
            (None, Some(_)) => {
                notes.push("end line without start line dropped".to_string());
                line_end = None;
            }
            (Some(s), Some(e)) if e < s => {
                notes.push(format!("end line {e} before start line {s}, swapped"));
                line_start = Some(e);
                line_end = Some(s);
            }
            _ => {}
        }
        let source_path = self
            .source_path
            .as_deref()
            .map(str::trim)
            .filter(|p| !p.is_empty())
            .map(ToString::to_string)
            .unwrap_or_else(|| source_path_from_class(&self.class_name));
        for message in notes {
            diagnostics.push(Diagnostic {
                entry,
                rejected: false,
                message,
            });
        }
        Some(WarningRecord {
            rule: self.rule.trim().to_string(),
            category,
            rank,
            confidence,
            message: self.message.trim().to_string(),
            class_name: self.class_name.trim().to_string(),
            method_name: self
                .method_name
                .as_deref()
                .map(str::trim)
                .filter(|m| !m.is_empty())
                .map(ToString::to_string),
            source_path,
            line_start,
            line_end,
        })
    }
}
