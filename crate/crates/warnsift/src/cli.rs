//! Command-line surface: `build-dataset`, `train`, `eval` and `filter`.

use std::io::Write;
use std::path::PathBuf;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};
use serde_json::{json, Value};
use warnsift_core::dataset::BugFixFilter;
use warnsift_core::metrics::{ClassMetrics, MetricsReport};
use warnsift_core::nn::ModelConfig;

use crate::checkpoint::Checkpoint;
use crate::corpus::read_corpus_file;
use crate::pipeline::{self, Evaluation, TrainRequest};

#[derive(Debug, Parser)]
#[command(name = "warnsift", version, about = "Verify static-analysis warnings as bug-sensitive or bug-insensitive")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build a labeled corpus and its splits from buggy/fixed commit pairs.
    BuildDataset {
        /// JSON manifest of commit pairs.
        #[arg(long)]
        pairs: PathBuf,
        /// Corpus to write; splits and sources are written beside it.
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        json: bool,
    },
    /// Train a verifier and write its checkpoint.
    Train {
        /// Flat `key=value` model configuration.
        #[arg(long)]
        config: PathBuf,
        /// Corpus to train on.
        #[arg(long)]
        data: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Validation corpus; without it `--data` is split by the config seed.
        #[arg(long)]
        valid: Option<PathBuf>,
        /// Sources root; defaults to `sources/` beside the corpus.
        #[arg(long)]
        src: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
    /// Report precision, recall and F1 of a checkpoint on a corpus.
    Eval {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        data: PathBuf,
        /// Sources root; defaults to `sources/` beside the corpus.
        #[arg(long)]
        src: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
    /// Score an analyzer report and keep the warnings above the threshold.
    Filter {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        report: PathBuf,
        /// Source tree the report's paths refer to.
        #[arg(long)]
        src: PathBuf,
        /// Defaults to the checkpoint's configured threshold.
        #[arg(long)]
        threshold: Option<f64>,
    },
}

fn class_json(c: Option<ClassMetrics>) -> Value {
    c.map_or(Value::Null, |c| {
        json!({"precision": c.precision, "recall": c.recall, "f1": c.f1, "support": c.support})
    })
}

pub fn metrics_json(r: &MetricsReport) -> Value {
    json!({
        "sensitive": class_json(r.sensitive),
        "insensitive": class_json(r.insensitive),
        "overall": {"precision": r.overall.precision, "recall": r.overall.recall, "f1": r.overall.f1},
        "counts": {"tp": r.counts.tp, "fp": r.counts.fp, "tn": r.counts.tn, "fn": r.counts.fn_},
    })
}

pub fn evaluation_json(e: &Evaluation) -> Value {
    let mut v = metrics_json(&e.model);
    v["baselines"] = json!({
        "all_sensitive": metrics_json(&e.all_sensitive),
        "all_insensitive": metrics_json(&e.all_insensitive),
    });
    v
}

/// Two-decimal percentage table.
pub fn format_metrics(r: &MetricsReport) -> String {
    let row = |name: &str, c: Option<ClassMetrics>| match c {
        Some(c) => format!(
            "{name:<12}{:>10.2}{:>10.2}{:>10.2}{:>10}\n",
            c.precision, c.recall, c.f1, c.support
        ),
        None => format!("{name:<12}{:>10}{:>10}{:>10}{:>10}\n", "-", "-", "-", 0),
    };
    let mut s = format!("{:<12}{:>10}{:>10}{:>10}{:>10}\n", "class", "precision", "recall", "f1", "support");
    s.push_str(&row("sensitive", r.sensitive));
    s.push_str(&row("insensitive", r.insensitive));
    let o = &r.overall;
    s.push_str(&format!("{:<12}{:>10.2}{:>10.2}{:>10.2}\n", "overall", o.precision, o.recall, o.f1));
    s
}

fn emit(out: &mut dyn Write, json: bool, value: &Value, text: impl FnOnce() -> String) -> Result<()> {
    if json {
        serde_json::to_writer_pretty(&mut *out, value)?;
        writeln!(out)?;
    } else {
        write!(out, "{}", text())?;
    }
    Ok(())
}

pub fn run(cli: Cli, out: &mut dyn Write) -> Result<()> {
    match cli.command {
        Command::BuildDataset { pairs, out: corpus, seed, json } => {
            let s = pipeline::build_dataset(&pairs, &corpus, seed, &BugFixFilter::default())?;
            emit(out, json, &serde_json::to_value(&s)?, || {
                format!(
                    "pairs {} used {} (not bug fixes {}, merges {})\n\
                     entries {} sensitive {} insensitive {}\n\
                     train {} validation {} test {}\n",
                    s.pairs_total,
                    s.pairs_used,
                    s.skipped_not_bugfix,
                    s.skipped_merge,
                    s.sensitive + s.insensitive,
                    s.sensitive,
                    s.insensitive,
                    s.train,
                    s.validation,
                    s.test
                )
            })
        }
        Command::Train { config, data, out: ckpt, valid, src, json } => {
            let text = std::fs::read_to_string(&config).with_context(|| format!("reading {}", config.display()))?;
            let cfg = ModelConfig::parse_text(&text).with_context(|| format!("parsing {}", config.display()))?;
            let (_, _, s) = pipeline::train_model(TrainRequest {
                config: cfg,
                data: &data,
                valid: valid.as_deref(),
                sources: src.as_deref(),
                out: &ckpt,
            })?;
            emit(out, json, &serde_json::to_value(&s)?, || {
                format!(
                    "trained {} epochs on {} samples; best validation F1 {:.2} at epoch {}\n",
                    s.epochs, s.train, s.best_val_f1, s.best_epoch
                )
            })
        }
        Command::Eval { model, data, src, json } => {
            let ckpt = Checkpoint::load(&model)?;
            let corpus = read_corpus_file(&data)?;
            let root = src.unwrap_or_else(|| pipeline::default_sources(&data));
            let e = pipeline::evaluate_corpus(&ckpt, &corpus, &root)?;
            emit(out, json, &evaluation_json(&e), || format_metrics(&e.model))
        }
        Command::Filter { model, report, src, threshold } => {
            let ckpt = Checkpoint::load(&model)?;
            let records = pipeline::load_report(&report)?;
            let delta = threshold.unwrap_or(ckpt.model.config.threshold);
            let (kept, total) = pipeline::filter_report(&ckpt, &records, &src, delta)?;
            for s in &kept {
                serde_json::to_writer(&mut *out, s)?;
                writeln!(out)?;
            }
            log::info!("retained {} of {total} warnings", kept.len());
            Ok(())
        }
    }
}
