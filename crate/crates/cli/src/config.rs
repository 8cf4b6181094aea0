//! Experiment configuration: line-oriented `key = value` text with `#`
//! comments.

use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use campanato_core::{fmt_f64, MaximalMode, PhiParameter};
use sha2::{Digest, Sha256};

/// Keys in their canonical order, with the default text of optional ones.
const KEYS: [(&str, Option<&str>); 8] = [
    ("n", Some("1")),
    ("levels", Some("6")),
    ("space", None),
    ("phi", Some("1")),
    ("corpus", Some("standard")),
    ("mode", Some("full")),
    ("alpha", Some("2")),
    ("output", Some("out")),
];

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub n: usize,
    pub levels: Vec<u32>,
    pub space: String,
    pub phi: String,
    /// Corpus member names, or `standard` for the whole suite.
    pub corpus: Vec<String>,
    pub mode: MaximalMode,
    pub alpha: f64,
    pub output: PathBuf,
}

/// Comment-free `(key, value)` pairs in file order.
fn entries(text: &str) -> Result<Vec<(String, String)>> {
    let mut out: Vec<(String, String)> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .with_context(|| format!("line {}: expected `key = value`, got {raw:?}", i + 1))?;
        let k = k.trim().to_string();
        if !KEYS.iter().any(|(name, _)| *name == k) {
            bail!("line {}: unknown key {k:?}", i + 1);
        }
        if out.iter().any(|(seen, _)| *seen == k) {
            bail!("line {}: duplicate key {k:?}", i + 1);
        }
        out.push((k, v.trim().to_string()));
    }
    Ok(out)
}

fn list(value: &str) -> Vec<String> {
    value
        .split(',')
        .map(|s| s.trim().to_string())
        .filter(|s| !s.is_empty())
        .collect()
}

fn lookup(pairs: &[(String, String)], key: &str) -> Result<String> {
    if let Some((_, v)) = pairs.iter().find(|(k, _)| k == key) {
        return Ok(v.clone());
    }
    let default = KEYS.iter().find(|(k, _)| *k == key).and_then(|(_, d)| *d);
    default
        .map(str::to_string)
        .with_context(|| format!("missing required key {key:?}"))
}

impl ExperimentConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let pairs = entries(text)?;
        let get = |k: &str| lookup(&pairs, k);
        let n: usize = get("n")?.parse().context("n must be 1 or 2")?;
        if n != 1 && n != 2 {
            bail!("n must be 1 or 2, got {n}");
        }
        let levels = list(&get("levels")?)
            .iter()
            .map(|s| s.parse::<u32>().with_context(|| format!("bad level {s:?}")))
            .collect::<Result<Vec<_>>>()?;
        if levels.is_empty() {
            bail!("levels must list at least one level");
        }
        let space = get("space")?;
        if space.is_empty() {
            bail!("space must not be empty");
        }
        let phi = get("phi")?;
        PhiParameter::parse(&phi)?;
        let corpus = list(&get("corpus")?);
        if corpus.is_empty() {
            bail!("corpus must name at least one member");
        }
        let mode: MaximalMode = get("mode")?.parse()?;
        let alpha: f64 = get("alpha")?.parse().context("alpha must be a number")?;
        if !(alpha >= 2.0 && alpha.is_finite()) {
            bail!("alpha must be at least 2, got {alpha}");
        }
        let output = PathBuf::from(get("output")?);
        Ok(Self {
            n,
            levels,
            space,
            phi,
            corpus,
            mode,
            alpha,
            output,
        })
    }

    /// Canonical text: every key, in canonical order, one per line.
    pub fn render(&self) -> String {
        let levels: Vec<String> = self.levels.iter().map(|l| l.to_string()).collect();
        format!(
            "n = {}\nlevels = {}\nspace = {}\nphi = {}\ncorpus = {}\nmode = {}\nalpha = {}\noutput = {}\n",
            self.n,
            levels.join(", "),
            self.space,
            self.phi,
            self.corpus.join(", "),
            self.mode,
            fmt_f64(self.alpha),
            self.output.display()
        )
    }

    /// SHA-256 of the canonical text, in hex.
    pub fn hash(&self) -> String {
        hex(&Sha256::digest(self.render().as_bytes()))
    }
}

pub fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

/// Text-level canonical form of a valid config: comments and blank lines
/// dropped, keys in canonical order with defaults filled in, list items
/// separated by `", "`, and numbers in shortest round-trip form.
#[cfg_attr(not(test), allow(dead_code))]
pub fn normalize(text: &str) -> Result<String> {
    let pairs = entries(text)?;
    let mut out = String::new();
    for (key, _) in KEYS {
        let v = lookup(&pairs, key)?;
        let v = match key {
            "levels" | "corpus" => list(&v).join(", "),
            "alpha" => fmt_f64(v.parse::<f64>()?),
            "n" => v.parse::<usize>()?.to_string(),
            _ => v,
        };
        out.push_str(&format!("{key} = {v}\n"));
    }
    Ok(out)
}
