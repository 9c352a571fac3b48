//! The four pipeline stages behind the command line: corpus building,
//! training, evaluation and report filtering.

use std::collections::BTreeMap;
use std::path::{Component, Path, PathBuf};

use anyhow::{bail, Context, Result};
use serde::Serialize;
use warnsift_core::context::{context_for_source, CodeContext, EMPTY_MARKER};
use warnsift_core::dataset::{self, path_matches, BugFixFilter, CommitPair};
use warnsift_core::encoding::{ChannelTokens, EncodedSample, Vocabularies};
use warnsift_core::metrics::{compute_metrics, MetricsReport};
use warnsift_core::nn::{self, Model, ModelConfig, ModelDims, TrainHistory};
use warnsift_core::{Label, LabeledWarning, WarningRecord};

use crate::checkpoint::Checkpoint;
use crate::corpus::{read_corpus_file, write_corpus};
use crate::manifest::Manifest;
use crate::report::parse_report;

/// How a warning's code context was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ContextOrigin {
    /// Parsed and lowered normally.
    Parsed,
    /// The file is present but outside the supported language subset; the
    /// raw file text stands in for the function channel.
    Unparsed,
    /// No source file was found; every channel is empty.
    MissingSource,
}

impl ContextOrigin {
    pub fn is_fallback(self) -> bool {
        self != ContextOrigin::Parsed
    }
}

/// Context for `w` from the text of its source file, if any.
pub fn context_from(source: Option<&str>, w: &WarningRecord) -> (CodeContext, ContextOrigin) {
    let Some(text) = source else {
        return (CodeContext::empty(), ContextOrigin::MissingSource);
    };
    match context_for_source(text, w) {
        Ok(ctx) => (ctx, ContextOrigin::Parsed),
        Err(e) => {
            log::debug!("{}: {e}; using the whole file", w.source_path);
            let text = if text.trim().is_empty() { EMPTY_MARKER } else { text };
            let ctx = CodeContext {
                function_text: text.to_string(),
                ..CodeContext::empty()
            };
            (ctx, ContextOrigin::Unparsed)
        }
    }
}

/// `rel` joined below `root`, or `None` if `rel` could escape it.
pub fn join_inside(root: &Path, rel: &str) -> Option<PathBuf> {
    let p = Path::new(rel);
    p.components()
        .all(|c| matches!(c, Component::Normal(_)))
        .then(|| root.join(p))
}

/// Where `build-dataset` stores the buggy-side source of a corpus entry,
/// relative to the sources root.
pub fn stored_source(root: &Path, e: &LabeledWarning) -> Option<PathBuf> {
    let base = join_inside(root, &e.provenance.repo_id)?;
    let base = join_inside(&base, &e.provenance.commit)?;
    join_inside(&base, &e.warning.source_path)
}

/// `<dir>/<stem>.<part>.jsonl` for a corpus path `<dir>/<stem>.jsonl`.
pub fn split_path(corpus: &Path, part: &str) -> PathBuf {
    let stem = corpus.file_stem().map_or_else(|| "corpus".into(), |s| s.to_string_lossy().into_owned());
    corpus.with_file_name(format!("{stem}.{part}.jsonl"))
}

/// Default sources root for a corpus file: `sources/` beside it.
pub fn default_sources(corpus: &Path) -> PathBuf {
    corpus.parent().unwrap_or(Path::new(".")).join("sources")
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct BuildSummary {
    pub pairs_total: usize,
    pub pairs_used: usize,
    pub skipped_not_bugfix: usize,
    pub skipped_merge: usize,
    pub rejected_records: usize,
    pub excluded_noise: usize,
    pub labeled_before_dedup: usize,
    pub sensitive: usize,
    pub insensitive: usize,
    pub train: usize,
    pub validation: usize,
    pub test: usize,
    pub missing_sources: usize,
}

/// Reads an analyzer report file, logging per-entry diagnostics.
pub fn load_report(path: &Path) -> Result<Vec<WarningRecord>> {
    let bytes = std::fs::read(path).with_context(|| format!("reading {}", path.display()))?;
    let parsed = parse_report(&bytes).with_context(|| format!("parsing {}", path.display()))?;
    for d in &parsed.diagnostics {
        log::warn!("{} entry {}: {}", path.display(), d.entry, d.message);
    }
    Ok(parsed.records)
}

fn write_corpus_path(path: &Path, corpus: &[LabeledWarning]) -> Result<()> {
    let f = std::fs::File::create(path).with_context(|| format!("creating {}", path.display()))?;
    let mut w = std::io::BufWriter::new(f);
    write_corpus(&mut w, corpus)?;
    std::io::Write::flush(&mut w)?;
    Ok(())
}

/// The promoted and deduplicated corpus of a manifest, before splitting.
#[derive(Clone, Debug, Default)]
pub struct Assembled {
    pub corpus: Vec<LabeledWarning>,
    pub summary: BuildSummary,
    /// (repo, commit, analyzer path) -> file in the buggy checkout.
    pub origins: BTreeMap<(String, String, String), PathBuf>,
}

/// Labels every usable commit pair of `manifest`, then promotes and
/// deduplicates across the whole corpus.
pub fn assemble_corpus(manifest: &Manifest, filter: &BugFixFilter) -> Result<Assembled> {
    let mut summary = BuildSummary {
        pairs_total: manifest.pairs.len(),
        ..BuildSummary::default()
    };
    let mut corpus = Vec::new();
    let mut origins = BTreeMap::new();
    for entry in &manifest.pairs {
        let pair = CommitPair::new(
            &entry.repo_id,
            &entry.fixed_commit,
            &entry.buggy_commit,
            &entry.commit_message,
            entry.changed_files.iter().cloned(),
        )
        .with_context(|| format!("pair {}@{}", entry.repo_id, entry.fixed_commit))?;
        if entry.parents != 1 {
            log::info!("skipping {}@{}: {} parents", pair.repo_id, pair.fixed_commit, entry.parents);
            summary.skipped_merge += 1;
            continue;
        }
        if !filter.matches(&pair.commit_message) {
            log::info!("skipping {}@{}: not a bug fix", pair.repo_id, pair.fixed_commit);
            summary.skipped_not_bugfix += 1;
            continue;
        }
        summary.pairs_used += 1;
        let mut sides = Vec::new();
        for path in [&entry.buggy_report, &entry.fixed_report] {
            let bytes = std::fs::read(path).with_context(|| format!("reading {}", path.display()))?;
            let parsed = parse_report(&bytes).with_context(|| format!("parsing {}", path.display()))?;
            for d in &parsed.diagnostics {
                log::warn!("{} entry {}: {}", path.display(), d.entry, d.message);
                summary.rejected_records += usize::from(d.rejected);
            }
            let (noise, kept): (Vec<_>, Vec<_>) =
                parsed.records.into_iter().partition(|w| w.category.is_excluded());
            sides.push((noise.len(), kept));
        }
        // Excluded categories are counted on the buggy side only.
        summary.excluded_noise += sides[0].0;
        let labeled = dataset::label_warnings(&sides[0].1, &sides[1].1, &pair.changed_files, &pair.provenance())?;
        for e in &labeled {
            if let Some(c) = pair.changed_files.iter().find(|c| path_matches(c, &e.warning.source_path)) {
                if let Some(file) = join_inside(&entry.buggy_sources, c) {
                    origins
                        .entry((pair.repo_id.clone(), pair.fixed_commit.clone(), e.warning.source_path.clone()))
                        .or_insert(file);
                }
            }
        }
        corpus.extend(labeled);
    }
    summary.labeled_before_dedup = corpus.len();
    let corpus = dataset::dedup(dataset::promote_labels(corpus));
    let counts = dataset::label_counts(&corpus);
    summary.sensitive = counts.get(&Label::Sensitive).copied().unwrap_or(0);
    summary.insensitive = counts.get(&Label::Insensitive).copied().unwrap_or(0);
    Ok(Assembled {
        corpus,
        summary,
        origins,
    })
}

/// Builds the labeled corpus described by a manifest.
///
/// Writes `out`, its `.train`/`.valid`/`.test` splits beside it, and the
/// buggy-side source of every entry under `sources/<repo>/<commit>/`.
pub fn build_dataset(manifest_path: &Path, out: &Path, seed: u64, filter: &BugFixFilter) -> Result<BuildSummary> {
    let manifest = Manifest::load(manifest_path)?;
    let Assembled {
        corpus,
        mut summary,
        origins,
    } = assemble_corpus(&manifest, filter)?;
    let parts = dataset::split(&corpus, seed)?;
    summary.train = parts.train.len();
    summary.validation = parts.validation.len();
    summary.test = parts.test.len();

    if let Some(dir) = out.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    }
    write_corpus_path(out, &corpus)?;
    write_corpus_path(&split_path(out, "train"), &parts.train)?;
    write_corpus_path(&split_path(out, "valid"), &parts.validation)?;
    write_corpus_path(&split_path(out, "test"), &parts.test)?;

    let root = default_sources(out);
    for e in &corpus {
        let key = (
            e.provenance.repo_id.clone(),
            e.provenance.commit.clone(),
            e.warning.source_path.clone(),
        );
        let (Some(from), Some(to)) = (origins.get(&key), stored_source(&root, e)) else {
            summary.missing_sources += 1;
            continue;
        };
        if to.exists() {
            continue;
        }
        if !from.is_file() {
            log::warn!("missing buggy source {}", from.display());
            summary.missing_sources += 1;
            continue;
        }
        std::fs::create_dir_all(to.parent().expect("joined below the root"))?;
        std::fs::copy(from, &to).with_context(|| format!("copying {}", from.display()))?;
    }
    Ok(summary)
}

/// Contexts for corpus entries whose sources live under `root`.
pub fn corpus_contexts(corpus: &[LabeledWarning], root: &Path) -> Vec<(CodeContext, ContextOrigin)> {
    let mut cache: BTreeMap<PathBuf, Option<String>> = BTreeMap::new();
    corpus
        .iter()
        .map(|e| {
            let text = stored_source(root, e).and_then(|p| {
                cache
                    .entry(p.clone())
                    .or_insert_with(|| std::fs::read_to_string(&p).ok())
                    .clone()
            });
            context_from(text.as_deref(), &e.warning)
        })
        .collect()
}

fn encode_all(
    vocabs: &Vocabularies,
    cfg: &ModelConfig,
    corpus: &[LabeledWarning],
    contexts: &[(CodeContext, ContextOrigin)],
) -> Vec<EncodedSample> {
    corpus
        .iter()
        .zip(contexts)
        .map(|(e, (ctx, _))| vocabs.encode_labeled(e, ctx, cfg.lengths, cfg.truncation))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TrainSummary {
    pub train: usize,
    pub validation: usize,
    pub vocab: usize,
    pub rules: usize,
    pub categories: usize,
    pub epochs: usize,
    pub best_epoch: usize,
    pub best_val_f1: f64,
    pub final_train_loss: f64,
}

pub struct TrainRequest<'a> {
    pub config: ModelConfig,
    pub data: &'a Path,
    /// Validation corpus; when absent `data` is split with the config seed
    /// and its training and validation parts are used.
    pub valid: Option<&'a Path>,
    /// Sources root; defaults to `sources/` beside `data`.
    pub sources: Option<&'a Path>,
    pub out: &'a Path,
}

/// Trains a model and writes its checkpoint.
pub fn train_model(req: TrainRequest<'_>) -> Result<(Checkpoint, TrainHistory, TrainSummary)> {
    let cfg = req.config;
    let data = read_corpus_file(req.data)?;
    let (train, val) = match req.valid {
        Some(v) => (data, read_corpus_file(v)?),
        None => {
            let s = dataset::split(&data, cfg.seed)?;
            (s.train, s.validation)
        }
    };
    if train.is_empty() || val.is_empty() {
        bail!("training needs nonempty training and validation sets");
    }
    let root = req.sources.map_or_else(|| default_sources(req.data), Path::to_path_buf);
    let train_ctx = corpus_contexts(&train, &root);
    let val_ctx = corpus_contexts(&val, &root);
    let fallbacks = train_ctx.iter().chain(&val_ctx).filter(|(_, o)| o.is_fallback()).count();
    if fallbacks > 0 {
        log::warn!("{fallbacks} warnings use fallback context");
    }
    let tokens: Vec<(ChannelTokens, &WarningRecord)> = train
        .iter()
        .zip(&train_ctx)
        .map(|(e, (ctx, _))| (ChannelTokens::new(ctx, &e.warning), &e.warning))
        .collect();
    let vocabs = Vocabularies::build(&tokens, cfg.vocab_size);
    let dims = ModelDims {
        vocab: vocabs.tokens.len(),
        rules: vocabs.rules.len(),
        categories: vocabs.categories.len(),
    };
    let train_enc = encode_all(&vocabs, &cfg, &train, &train_ctx);
    let val_enc = encode_all(&vocabs, &cfg, &val, &val_ctx);
    let mut model = Model::new(cfg, dims)?;
    let history = nn::train_with(&mut model, &train_enc, &val_enc, |r| {
        log::info!(
            "epoch {} loss {:.6} val-f1 {:.2} lr {:e}",
            r.epoch,
            r.train_loss,
            r.val_f1,
            r.learning_rate
        );
        false
    })?;
    let ckpt = Checkpoint { model, vocabs };
    ckpt.save(req.out)?;
    let summary = TrainSummary {
        train: train.len(),
        validation: val.len(),
        vocab: dims.vocab,
        rules: dims.rules,
        categories: dims.categories,
        epochs: history.epochs.len(),
        best_epoch: history.best_epoch,
        best_val_f1: history.best_val_f1,
        final_train_loss: history.epochs.last().map_or(0.0, |e| e.train_loss),
    };
    Ok((ckpt, history, summary))
}

/// Metrics of the model together with the two constant-prediction
/// references on the same data.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Evaluation {
    pub model: MetricsReport,
    pub all_sensitive: MetricsReport,
    pub all_insensitive: MetricsReport,
}

pub fn evaluate_corpus(ckpt: &Checkpoint, corpus: &[LabeledWarning], sources: &Path) -> Result<Evaluation> {
    if corpus.is_empty() {
        bail!("nothing to evaluate");
    }
    let ctx = corpus_contexts(corpus, sources);
    let enc = encode_all(&ckpt.vocabs, &ckpt.model.config, corpus, &ctx);
    let labels: Vec<Label> = corpus.iter().map(|e| e.label).collect();
    let constant = |l: Label| compute_metrics(&vec![l; labels.len()], &labels);
    Ok(Evaluation {
        model: nn::evaluate(&ckpt.model, &enc)?,
        all_sensitive: constant(Label::Sensitive),
        all_insensitive: constant(Label::Insensitive),
    })
}

/// One retained warning in `filter` output.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Scored {
    pub rule: String,
    pub category: String,
    pub rank: u8,
    pub confidence: u8,
    pub message: String,
    pub class_name: String,
    pub method_name: Option<String>,
    pub source_path: String,
    pub line_start: Option<u32>,
    pub line_end: Option<u32>,
    pub score: f64,
    pub context: ContextOrigin,
}

impl Scored {
    fn new(w: &WarningRecord, score: f64, context: ContextOrigin) -> Self {
        Scored {
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
            score,
            context,
        }
    }
}

/// Java files under a source tree, as `/`-separated relative paths in
/// sorted order.
fn list_sources(root: &Path) -> Vec<String> {
    fn walk(dir: &Path, prefix: &str, out: &mut Vec<String>) {
        let Ok(entries) = std::fs::read_dir(dir) else {
            return;
        };
        let mut entries: Vec<_> = entries.flatten().collect();
        entries.sort_by_key(|e| e.file_name());
        for e in entries {
            let name = e.file_name().to_string_lossy().into_owned();
            let rel = if prefix.is_empty() { name.clone() } else { format!("{prefix}/{name}") };
            match e.file_type() {
                Ok(t) if t.is_dir() => walk(&e.path(), &rel, out),
                Ok(t) if t.is_file() && name.ends_with(".java") => out.push(rel),
                _ => {}
            }
        }
    }
    let mut out = Vec::new();
    walk(root, "", &mut out);
    out
}

/// Scores every warning of `report` and returns those above `threshold`,
/// highest score first (report order on ties), plus the total count.
pub fn filter_report(
    ckpt: &Checkpoint,
    records: &[WarningRecord],
    src: &Path,
    threshold: f64,
) -> Result<(Vec<Scored>, usize)> {
    let files = list_sources(src);
    let mut scored = Vec::new();
    for w in records {
        let path = join_inside(src, &w.source_path).filter(|p| p.is_file()).or_else(|| {
            files
                .iter()
                .find(|f| path_matches(f, &w.source_path))
                .map(|f| src.join(f))
        });
        let text = path.and_then(|p| std::fs::read_to_string(p).ok());
        let (ctx, origin) = context_from(text.as_deref(), w);
        if origin.is_fallback() {
            log::warn!("{}: scored with {:?} context", w.source_path, origin);
        }
        let tokens = ChannelTokens::new(&ctx, w);
        let cfg = &ckpt.model.config;
        let sample = ckpt.vocabs.encode(&tokens, w, 0, cfg.lengths, cfg.truncation);
        let score = ckpt.model.probability(&sample)?;
        scored.push(Scored::new(w, score, origin));
    }
    let total = scored.len();
    scored.retain(|s| s.score > threshold);
    scored.sort_by(|a, b| b.score.total_cmp(&a.score));
    Ok((scored, total))
}
