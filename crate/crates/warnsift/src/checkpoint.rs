//! Model checkpoints.
//!
//! A checkpoint is the magic line `WVRFCKPT`, a text header of `key=value`
//! lines closed by an empty line, then every tensor's values as
//! little-endian `f64` in header order. The vocabularies live beside it in
//! `<ckpt>.vocab`, `<ckpt>.rules` and `<ckpt>.categories`, one token per
//! line in id order. Equal models always serialize to equal bytes.

use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, ensure, Context, Result};
use warnsift_core::encoding::{Vocabularies, Vocabulary};
use warnsift_core::nn::{Model, ModelConfig, ModelDims, ParamStore, Tensor};

pub const MAGIC: &str = "WVRFCKPT";
pub const FORMAT_VERSION: u32 = 1;

/// A trained model together with the vocabularies its ids refer to.
#[derive(Clone, Debug)]
pub struct Checkpoint {
    pub model: Model,
    pub vocabs: Vocabularies,
}

pub fn sidecar(path: &Path, ext: &str) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(".");
    s.push(ext);
    PathBuf::from(s)
}

pub fn encode_model(model: &Model) -> Vec<u8> {
    let mut header = format!("{MAGIC}\nformat={FORMAT_VERSION}\n");
    header.push_str(&model.config.to_text());
    let d = model.dims;
    header.push_str(&format!(
        "dims.vocab={}\ndims.rules={}\ndims.categories={}\ntensors={}\n",
        d.vocab,
        d.rules,
        d.categories,
        model.params.len()
    ));
    for (_, name, t) in model.params.iter() {
        let shape: Vec<String> = t.shape.iter().map(ToString::to_string).collect();
        header.push_str(&format!("tensor={name}:{}\n", shape.join("x")));
    }
    header.push('\n');
    let mut out = header.into_bytes();
    for (_, _, t) in model.params.iter() {
        for x in &t.data {
            out.extend_from_slice(&x.to_le_bytes());
        }
    }
    out
}

fn parse_shape(s: &str) -> Result<Vec<usize>> {
    s.split('x')
        .map(|d| d.parse::<usize>().with_context(|| format!("bad dimension `{d}`")))
        .collect()
}

pub fn decode_model(bytes: &[u8]) -> Result<Model> {
    let end = bytes
        .windows(2)
        .position(|w| w == b"\n\n")
        .ok_or_else(|| anyhow!("checkpoint header is not terminated"))?;
    let header = std::str::from_utf8(&bytes[..end]).context("checkpoint header is not UTF-8")?;
    let mut lines = header.lines();
    ensure!(lines.next() == Some(MAGIC), "not a checkpoint (missing {MAGIC})");
    let mut config_text = String::new();
    let mut dims = [None; 3];
    let mut count = None;
    let mut tensors: Vec<(String, Vec<usize>)> = Vec::new();
    let mut version = None;
    for line in lines {
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| anyhow!("bad header line `{line}`"))?;
        match k {
            "format" => version = Some(v.parse::<u32>()?),
            "dims.vocab" => dims[0] = Some(v.parse::<usize>()?),
            "dims.rules" => dims[1] = Some(v.parse::<usize>()?),
            "dims.categories" => dims[2] = Some(v.parse::<usize>()?),
            "tensors" => count = Some(v.parse::<usize>()?),
            "tensor" => {
                let (name, shape) = v
                    .rsplit_once(':')
                    .ok_or_else(|| anyhow!("bad tensor line `{line}`"))?;
                tensors.push((name.to_string(), parse_shape(shape)?));
            }
            _ => {
                config_text.push_str(line);
                config_text.push('\n');
            }
        }
    }
    ensure!(
        version == Some(FORMAT_VERSION),
        "unsupported checkpoint format {version:?} (expected {FORMAT_VERSION})"
    );
    ensure!(count == Some(tensors.len()), "tensor count does not match the listed tensors");
    let config = ModelConfig::parse_text(&config_text)?;
    let [Some(vocab), Some(rules), Some(categories)] = dims else {
        bail!("checkpoint header lacks model dimensions");
    };
    let mut data = &bytes[end + 2..];
    let mut params = ParamStore::default();
    for (name, shape) in tensors {
        let n: usize = shape.iter().product();
        ensure!(data.len() >= 8 * n, "checkpoint data ends inside tensor `{name}`");
        let (head, rest) = data.split_at(8 * n);
        let values = head
            .chunks_exact(8)
            .map(|c| f64::from_le_bytes(c.try_into().expect("chunk of eight")))
            .collect();
        params.insert(name, Tensor::from_vec(&shape, values));
        data = rest;
    }
    ensure!(data.is_empty(), "{} trailing bytes after the last tensor", data.len());
    Ok(Model::from_params(
        config,
        ModelDims {
            vocab,
            rules,
            categories,
        },
        params,
    )?)
}

fn vocab_text(v: &Vocabulary) -> Result<String> {
    let mut s = String::new();
    for t in v.tokens() {
        ensure!(!t.contains(['\n', '\r']), "token {t:?} contains a line break");
        s.push_str(t);
        s.push('\n');
    }
    Ok(s)
}

fn read_vocab(path: &Path) -> Result<Vocabulary> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Vocabulary::from_tokens(text.lines().map(ToString::to_string).collect())
        .map_err(|e| anyhow!("{}: {e}", path.display()))
}

impl Checkpoint {
    pub fn save(&self, path: &Path) -> Result<()> {
        let write = |p: PathBuf, bytes: &[u8]| std::fs::write(&p, bytes).with_context(|| format!("writing {}", p.display()));
        write(path.to_path_buf(), &encode_model(&self.model))?;
        write(sidecar(path, "vocab"), vocab_text(&self.vocabs.tokens)?.as_bytes())?;
        write(sidecar(path, "rules"), vocab_text(&self.vocabs.rules)?.as_bytes())?;
        write(sidecar(path, "categories"), vocab_text(&self.vocabs.categories)?.as_bytes())
    }

    pub fn load(path: &Path) -> Result<Self> {
        let bytes = std::fs::read(path).with_context(|| format!("reading {}", path.display()))?;
        let model = decode_model(&bytes).with_context(|| format!("loading {}", path.display()))?;
        let vocabs = Vocabularies {
            tokens: read_vocab(&sidecar(path, "vocab"))?,
            rules: read_vocab(&sidecar(path, "rules"))?,
            categories: read_vocab(&sidecar(path, "categories"))?,
        };
        let d = model.dims;
        ensure!(
            (vocabs.tokens.len(), vocabs.rules.len(), vocabs.categories.len()) == (d.vocab, d.rules, d.categories),
            "vocabulary files do not match the checkpoint dimensions"
        );
        Ok(Checkpoint { model, vocabs })
    }
}
