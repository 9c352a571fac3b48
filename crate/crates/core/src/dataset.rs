//! Labeled corpus construction from buggy/fixed commit pairs.
//!
//! A warning reported on the buggy side of a bug-fixing commit is
//! bug-sensitive when it no longer shows up on the fixed side. The passes
//! here mirror the collection pipeline: keyword filtering of commit
//! messages, per-pair labeling, corpus-wide label promotion, deduplication
//! of insensitive warnings, and a stratified 8:1:1 split.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::report::{WarningFingerprint, WarningRecord};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum DatasetError {
    #[error("commit pair has no changed files")]
    NoChangedFiles,
    #[error("buggy and fixed commit are both `{0}`")]
    SameCommit(String),
    #[error("corpus of {0} entries is too small to split (need at least 10)")]
    CorpusTooSmall(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Label {
    Sensitive,
    Insensitive,
}

impl Label {
    /// Wire spelling used in corpus files.
    pub fn as_str(self) -> &'static str {
        match self {
            Label::Sensitive => "sensitive",
            Label::Insensitive => "insensitive",
        }
    }

    pub fn parse(s: &str) -> Option<Label> {
        match s {
            "sensitive" => Some(Label::Sensitive),
            "insensitive" => Some(Label::Insensitive),
            _ => None,
        }
    }

    /// 1 for bug-sensitive, 0 otherwise.
    pub fn target(self) -> f64 {
        match self {
            Label::Sensitive => 1.0,
            Label::Insensitive => 0.0,
        }
    }

    pub fn is_sensitive(self) -> bool {
        self == Label::Sensitive
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A bug-fixing commit and its parent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CommitPair {
    pub repo_id: String,
    pub fixed_commit: String,
    pub buggy_commit: String,
    pub commit_message: String,
    pub changed_files: BTreeSet<String>,
}

impl CommitPair {
    pub fn new(
        repo_id: impl Into<String>,
        fixed_commit: impl Into<String>,
        buggy_commit: impl Into<String>,
        commit_message: impl Into<String>,
        changed_files: impl IntoIterator<Item = String>,
    ) -> Result<Self, DatasetError> {
        let pair = CommitPair {
            repo_id: repo_id.into(),
            fixed_commit: fixed_commit.into(),
            buggy_commit: buggy_commit.into(),
            commit_message: commit_message.into(),
            changed_files: changed_files.into_iter().collect(),
        };
        if pair.changed_files.is_empty() {
            return Err(DatasetError::NoChangedFiles);
        }
        if pair.fixed_commit == pair.buggy_commit {
            return Err(DatasetError::SameCommit(pair.fixed_commit));
        }
        Ok(pair)
    }

    pub fn provenance(&self) -> Provenance {
        Provenance {
            repo_id: self.repo_id.clone(),
            commit: self.fixed_commit.clone(),
        }
    }
}

/// Where a labeled warning came from: repository and fixing commit.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Provenance {
    pub repo_id: String,
    pub commit: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabeledWarning {
    pub warning: WarningRecord,
    pub label: Label,
    pub provenance: Provenance,
}

impl LabeledWarning {
    /// Identity used by promotion and deduplication. Scoped to the
    /// repository so that unrelated projects sharing a path cannot collide.
    pub fn key(&self) -> (String, WarningFingerprint) {
        (self.provenance.repo_id.clone(), self.warning.fingerprint())
    }
}

/// Keyword heuristic for bug-fixing commit messages.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BugFixFilter {
    pub fix_word: String,
    pub bug_words: Vec<String>,
    pub phrases: Vec<String>,
}

impl Default for BugFixFilter {
    fn default() -> Self {
        let owned = |xs: &[&str]| xs.iter().map(|s| s.to_string()).collect();
        BugFixFilter {
            fix_word: "fix".to_string(),
            bug_words: owned(&["bug", "defect", "error", "fault", "issue"]),
            phrases: owned(&[
                "null pointer dereference",
                "null pointer",
                "resource leak",
                "memory leak",
                "race condition",
                "deadlock",
                "infinite loop",
                "out of bounds",
                "overflow",
            ]),
        }
    }
}

impl BugFixFilter {
    /// Case-insensitive: the fix word plus any bug word or phrase.
    pub fn matches(&self, message: &str) -> bool {
        let lower = message.to_lowercase();
        lower.contains(&self.fix_word)
            && self
                .bug_words
                .iter()
                .chain(self.phrases.iter())
                .any(|w| lower.contains(w.as_str()))
    }
}

pub fn is_bugfix_commit(message: &str) -> bool {
    BugFixFilter::default().matches(message)
}

/// True when `source_path` (analyzer-relative, e.g. `com/x/A.java`) names the
/// repository-relative `changed` file, exactly or as a path suffix.
pub fn path_matches(changed: &str, source_path: &str) -> bool {
    fn suffix(long: &str, short: &str) -> bool {
        long.len() > short.len()
            && long.ends_with(short)
            && long.as_bytes()[long.len() - short.len() - 1] == b'/'
    }
    changed == source_path || suffix(changed, source_path) || suffix(source_path, changed)
}

/// Labels the buggy-side warnings of one commit pair. Only warnings in
/// changed files are considered; a considered warning is bug-sensitive iff
/// its fingerprint is missing from the fixed report.
pub fn label_warnings(
    buggy_report: &[WarningRecord],
    fixed_report: &[WarningRecord],
    changed_files: &BTreeSet<String>,
    provenance: &Provenance,
) -> Result<Vec<LabeledWarning>, DatasetError> {
    if changed_files.is_empty() {
        return Err(DatasetError::NoChangedFiles);
    }
    let relevant = |w: &WarningRecord| changed_files.iter().any(|c| path_matches(c, &w.source_path));
    let fixed: BTreeSet<WarningFingerprint> = fixed_report
        .iter()
        .filter(|w| relevant(w))
        .map(WarningRecord::fingerprint)
        .collect();
    Ok(buggy_report
        .iter()
        .filter(|w| relevant(w))
        .map(|w| LabeledWarning {
            label: if fixed.contains(&w.fingerprint()) {
                Label::Insensitive
            } else {
                Label::Sensitive
            },
            warning: w.clone(),
            provenance: provenance.clone(),
        })
        .collect())
}

/// Once a warning is bug-sensitive anywhere, every occurrence is.
pub fn promote_labels(mut corpus: Vec<LabeledWarning>) -> Vec<LabeledWarning> {
    let sensitive: BTreeSet<_> = corpus
        .iter()
        .filter(|e| e.label.is_sensitive())
        .map(LabeledWarning::key)
        .collect();
    for entry in &mut corpus {
        if !entry.label.is_sensitive() && sensitive.contains(&entry.key()) {
            entry.label = Label::Sensitive;
        }
    }
    corpus
}

/// Keeps the first insensitive entry per fingerprint; sensitive entries are
/// never dropped.
pub fn dedup(corpus: Vec<LabeledWarning>) -> Vec<LabeledWarning> {
    let mut seen = BTreeSet::new();
    corpus
        .into_iter()
        .filter(|e| e.label.is_sensitive() || seen.insert(e.key()))
        .collect()
}

/// Index sets of a three-way split, each in ascending order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplitIndices {
    pub train: Vec<usize>,
    pub validation: Vec<usize>,
    pub test: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Split<T> {
    pub train: Vec<T>,
    pub validation: Vec<T>,
    pub test: Vec<T>,
}

fn round_tenth(n: usize) -> usize {
    (n + 5) / 10
}

/// Distributes `total` slots over classes proportionally to `counts` by the
/// largest-remainder rule, then guarantees one slot to every class that has
/// at least three members.
fn allocate(counts: &[usize], total: usize) -> Vec<usize> {
    let n: usize = counts.iter().sum();
    let mut alloc: Vec<usize> = counts.iter().map(|&c| c * total / n).collect();
    let mut remainders: Vec<(usize, usize)> = counts
        .iter()
        .enumerate()
        .map(|(i, &c)| ((c * total) % n, i))
        .collect();
    // Largest remainder first, lower class index on ties.
    remainders.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
    let mut left = total - alloc.iter().sum::<usize>();
    for &(_, i) in &remainders {
        if left == 0 {
            break;
        }
        alloc[i] += 1;
        left -= 1;
    }
    for i in 0..counts.len() {
        if alloc[i] == 0 && counts[i] >= 3 {
            let donor = (0..counts.len())
                .filter(|&j| alloc[j] > 1)
                .max_by_key(|&j| (alloc[j], core::cmp::Reverse(j)));
            if let Some(j) = donor {
                alloc[j] -= 1;
                alloc[i] += 1;
            }
        }
    }
    alloc
}

/// Stratified, seeded 8:1:1 split over a label sequence.
pub fn split_indices(labels: &[Label], seed: u64) -> Result<SplitIndices, DatasetError> {
    let n = labels.len();
    if n < 10 {
        return Err(DatasetError::CorpusTooSmall(n));
    }
    let classes = [Label::Sensitive, Label::Insensitive];
    let mut members: Vec<Vec<usize>> = classes
        .iter()
        .map(|c| (0..n).filter(|&i| labels[i] == *c).collect())
        .collect();
    let counts: Vec<usize> = members.iter().map(Vec::len).collect();
    let test_alloc = allocate(&counts, round_tenth(n));
    let val_alloc = allocate(&counts, round_tenth(n));

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = SplitIndices {
        train: Vec::new(),
        validation: Vec::new(),
        test: Vec::new(),
    };
    for (k, group) in members.iter_mut().enumerate() {
        group.shuffle(&mut rng);
        let (t, v) = (test_alloc[k], val_alloc[k]);
        out.test.extend_from_slice(&group[..t]);
        out.validation.extend_from_slice(&group[t..t + v]);
        out.train.extend_from_slice(&group[t + v..]);
    }
    out.train.sort_unstable();
    out.validation.sort_unstable();
    out.test.sort_unstable();
    Ok(out)
}

pub fn split(corpus: &[LabeledWarning], seed: u64) -> Result<Split<LabeledWarning>, DatasetError> {
    let labels: Vec<Label> = corpus.iter().map(|e| e.label).collect();
    let idx = split_indices(&labels, seed)?;
    let pick = |ix: &[usize]| ix.iter().map(|&i| corpus[i].clone()).collect();
    Ok(Split {
        train: pick(&idx.train),
        validation: pick(&idx.validation),
        test: pick(&idx.test),
    })
}

/// Per-label counts of a corpus.
pub fn label_counts(corpus: &[LabeledWarning]) -> BTreeMap<Label, usize> {
    let mut counts = BTreeMap::new();
    for e in corpus {
        *counts.entry(e.label).or_insert(0) += 1;
    }
    counts
}
