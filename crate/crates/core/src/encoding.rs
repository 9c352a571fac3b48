//! Tokenization, vocabularies and fixed-length channel encoding.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::context::{CodeContext, EMPTY_MARKER};
use crate::dataset::LabeledWarning;
use crate::report::WarningRecord;

pub const PAD: u32 = 0;
pub const UNK: u32 = 1;
pub const PAD_TOKEN: &str = "<pad>";
pub const UNK_TOKEN: &str = "<unk>";
pub const DEFAULT_VOCAB_CAP: usize = 100_000;

/// Largest analyzer rank; rank ids live in `1..=MAX_RANK`.
pub const MAX_RANK: u8 = 20;
/// Largest confidence value; confidence ids live in `1..=MAX_CONFIDENCE`.
pub const MAX_CONFIDENCE: u8 = 3;

const OPERATORS: &[&str] = &[
    ">>>=", "<<=", ">>=", ">>>", "...", "->", "::", "++", "--", "&&", "||", "==", "!=", "<=", ">=",
    "+=", "-=", "*=", "/=", "%=", "&=", "|=", "^=", "<<", ">>",
];

fn is_ident_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '$'
}

/// Splits code or IR text into identifiers, numbers, quoted literals and
/// operators. `$stackN`, `vN` and `<empty>` stay whole.
pub fn tokenize_code(text: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut rest = text;
    while let Some(c) = rest.chars().next() {
        if c.is_whitespace() {
            rest = &rest[c.len_utf8()..];
            continue;
        }
        let len = if rest.starts_with(EMPTY_MARKER) {
            EMPTY_MARKER.len()
        } else if is_ident_char(c) {
            rest.find(|ch: char| !(is_ident_char(ch) || (c.is_ascii_digit() && ch == '.')))
                .unwrap_or(rest.len())
        } else if c == '"' || c == '\'' {
            let mut end = rest.len();
            let mut escaped = false;
            for (i, ch) in rest.char_indices().skip(1) {
                if escaped {
                    escaped = false;
                } else if ch == '\\' {
                    escaped = true;
                } else if ch == c {
                    end = i + 1;
                    break;
                } else if ch == '\n' {
                    end = i;
                    break;
                }
            }
            end
        } else {
            OPERATORS
                .iter()
                .find(|op| rest.starts_with(**op))
                .map_or(c.len_utf8(), |op| op.len())
        };
        out.push(rest[..len].to_string());
        rest = &rest[len..];
    }
    out
}

/// Tokens of a free-text warning message: words and single punctuation.
pub fn tokenize_message(text: &str) -> Vec<String> {
    tokenize_code(text)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Vocabulary {
    tokens: Vec<String>,
    ids: BTreeMap<String, u32>,
}

impl Vocabulary {
    /// Keeps the `cap - 2` most frequent tokens (ties broken
    /// lexicographically) after `<pad>` and `<unk>`.
    pub fn build<'a, I, S>(streams: I, cap: usize) -> Self
    where
        I: IntoIterator<Item = S>,
        S: IntoIterator<Item = &'a String>,
    {
        let mut counts: BTreeMap<&str, u64> = BTreeMap::new();
        for stream in streams {
            for t in stream {
                *counts.entry(t.as_str()).or_default() += 1;
            }
        }
        let mut ranked: Vec<(&str, u64)> = counts
            .into_iter()
            .filter(|(t, _)| *t != PAD_TOKEN && *t != UNK_TOKEN)
            .collect();
        ranked.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(b.0)));
        let keep = cap.max(2) - 2;
        let tokens = [PAD_TOKEN, UNK_TOKEN]
            .into_iter()
            .chain(ranked.into_iter().take(keep).map(|(t, _)| t))
            .map(ToString::to_string)
            .collect();
        Self::from_tokens(tokens).expect("reserved tokens lead the list")
    }

    /// Rebuilds a vocabulary from its id-ordered token list. The first two
    /// entries must be `<pad>` and `<unk>` and tokens must be distinct.
    pub fn from_tokens(tokens: Vec<String>) -> Result<Self, String> {
        if tokens.len() < 2 || tokens[0] != PAD_TOKEN || tokens[1] != UNK_TOKEN {
            return Err("vocabulary must start with <pad> and <unk>".to_string());
        }
        let mut ids = BTreeMap::new();
        for (i, t) in tokens.iter().enumerate() {
            if ids.insert(t.clone(), i as u32).is_some() {
                return Err(alloc::format!("duplicate token `{t}`"));
            }
        }
        Ok(Vocabulary { tokens, ids })
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn id(&self, token: &str) -> u32 {
        self.ids.get(token).copied().unwrap_or(UNK)
    }

    pub fn token(&self, id: u32) -> Option<&str> {
        self.tokens.get(id as usize).map(String::as_str)
    }

    /// Tokens in id order.
    pub fn tokens(&self) -> &[String] {
        &self.tokens
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Truncation {
    /// Keep the earliest tokens.
    #[default]
    Head,
    /// Keep the latest tokens.
    Tail,
}

impl Truncation {
    pub fn as_str(self) -> &'static str {
        match self {
            Truncation::Head => "head",
            Truncation::Tail => "tail",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "head" => Some(Truncation::Head),
            "tail" => Some(Truncation::Tail),
            _ => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ChannelLengths {
    pub function: usize,
    pub field: usize,
    pub slice: usize,
    pub message: usize,
}

impl Default for ChannelLengths {
    fn default() -> Self {
        ChannelLengths {
            function: 256,
            field: 64,
            slice: 256,
            message: 32,
        }
    }
}

/// A padded id sequence; real tokens form a prefix marked by `mask`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Channel {
    pub ids: Vec<u32>,
    pub mask: Vec<bool>,
}

impl Channel {
    pub fn encode(tokens: &[String], vocab: &Vocabulary, len: usize, trunc: Truncation) -> Self {
        let kept = if tokens.len() <= len {
            tokens
        } else {
            match trunc {
                Truncation::Head => &tokens[..len],
                Truncation::Tail => &tokens[tokens.len() - len..],
            }
        };
        let mut ids: Vec<u32> = kept.iter().map(|t| vocab.id(t)).collect();
        let mut mask = alloc::vec![true; ids.len()];
        ids.resize(len, PAD);
        mask.resize(len, false);
        Channel { ids, mask }
    }

    /// Number of real (unmasked) positions.
    pub fn real_len(&self) -> usize {
        self.mask.iter().filter(|m| **m).count()
    }

    /// The unmasked ids.
    pub fn real_ids(&self) -> impl Iterator<Item = u32> + '_ {
        self.ids.iter().zip(&self.mask).filter(|(_, m)| **m).map(|(i, _)| *i)
    }
}

/// Categorical attribute ids of a warning.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AttrIds {
    pub rule: u32,
    pub category: u32,
    /// `1..=20`.
    pub rank: u32,
    /// `1..=3`.
    pub confidence: u32,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EncodedSample {
    pub function: Channel,
    pub field: Channel,
    pub slice: Channel,
    pub message: Channel,
    pub attrs: AttrIds,
    /// 1 for bug-sensitive, 0 otherwise.
    pub label: u8,
}

/// Token streams of the four text channels.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChannelTokens {
    pub function: Vec<String>,
    pub field: Vec<String>,
    pub slice: Vec<String>,
    pub message: Vec<String>,
}

impl ChannelTokens {
    pub fn new(ctx: &CodeContext, w: &WarningRecord) -> Self {
        let nonempty = |mut t: Vec<String>| {
            if t.is_empty() {
                t.push(EMPTY_MARKER.to_string());
            }
            t
        };
        ChannelTokens {
            function: nonempty(tokenize_code(&ctx.function_text)),
            field: nonempty(tokenize_code(&ctx.field_text)),
            slice: nonempty(tokenize_code(&ctx.slice_text)),
            message: nonempty(tokenize_message(&w.message)),
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = &String> {
        self.function
            .iter()
            .chain(&self.field)
            .chain(&self.slice)
            .chain(&self.message)
    }
}

/// Vocabularies shared by every sample of a model.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Vocabularies {
    pub tokens: Vocabulary,
    pub rules: Vocabulary,
    pub categories: Vocabulary,
}

impl Vocabularies {
    /// Builds all vocabularies from training samples only.
    pub fn build(train: &[(ChannelTokens, &WarningRecord)], cap: usize) -> Self {
        let tokens = Vocabulary::build(train.iter().map(|(t, _)| t.iter()), cap);
        let rules: Vec<Vec<String>> = train.iter().map(|(_, w)| alloc::vec![w.rule.clone()]).collect();
        let cats: Vec<Vec<String>> = train
            .iter()
            .map(|(_, w)| alloc::vec![w.category.as_str().to_string()])
            .collect();
        Vocabularies {
            tokens,
            rules: Vocabulary::build(rules.iter(), usize::MAX),
            categories: Vocabulary::build(cats.iter(), usize::MAX),
        }
    }

    pub fn attrs(&self, w: &WarningRecord) -> AttrIds {
        AttrIds {
            rule: self.rules.id(&w.rule),
            category: self.categories.id(w.category.as_str()),
            rank: u32::from(w.rank.clamp(1, MAX_RANK)),
            confidence: u32::from(w.confidence.clamp(1, MAX_CONFIDENCE)),
        }
    }

    pub fn encode(
        &self,
        tokens: &ChannelTokens,
        w: &WarningRecord,
        label: u8,
        lengths: ChannelLengths,
        trunc: Truncation,
    ) -> EncodedSample {
        let v = &self.tokens;
        EncodedSample {
            function: Channel::encode(&tokens.function, v, lengths.function, trunc),
            field: Channel::encode(&tokens.field, v, lengths.field, trunc),
            slice: Channel::encode(&tokens.slice, v, lengths.slice, trunc),
            message: Channel::encode(&tokens.message, v, lengths.message, trunc),
            attrs: self.attrs(w),
            label,
        }
    }

    /// Encodes a labeled warning with its context.
    pub fn encode_labeled(
        &self,
        lw: &LabeledWarning,
        ctx: &CodeContext,
        lengths: ChannelLengths,
        trunc: Truncation,
    ) -> EncodedSample {
        let tokens = ChannelTokens::new(ctx, &lw.warning);
        self.encode(&tokens, &lw.warning, u8::from(lw.label.is_sensitive()), lengths, trunc)
    }
}
