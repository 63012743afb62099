//! Pipeline configuration: defaults, TOML config file, command-line overrides.

use std::path::{Path, PathBuf};

use serde::Deserialize;
use textnet_core::CorpusFilterSpec;

use crate::corpus_io::InputFormat;
use crate::error::{Error, Result};
use crate::export::ExportFormat;
use crate::fsutil::read_string;

pub const DEFAULT_MIN_FREQ: u64 = 5;
pub const DEFAULT_MAX_TERMS: usize = 150;
pub const DEFAULT_TOP_PAIRS: usize = 10;
pub const DEFAULT_SEED: u64 = 42;

/// Every setting of a pipeline run. Missing keys take the defaults below.
#[derive(Debug, Clone, PartialEq)]
pub struct PipelineConfig {
    pub input: Option<PathBuf>,
    pub format: Option<InputFormat>,
    pub include: Vec<String>,
    pub exclude: Vec<String>,
    pub min_tokens: usize,
    pub dedup: bool,
    /// `None` selects the bundled list.
    pub stopwords: Option<PathBuf>,
    pub phrases: Option<PathBuf>,
    pub min_freq: u64,
    pub max_terms: usize,
    pub min_edge_weight: u64,
    pub keep_isolated: bool,
    pub top_pairs: usize,
    pub resolution: f64,
    pub seed: u64,
    pub export: Vec<ExportFormat>,
    pub out: PathBuf,
    pub report: Option<PathBuf>,
    pub threads: Option<usize>,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            input: None,
            format: None,
            include: Vec::new(),
            exclude: Vec::new(),
            min_tokens: 0,
            dedup: false,
            stopwords: None,
            phrases: None,
            min_freq: DEFAULT_MIN_FREQ,
            max_terms: DEFAULT_MAX_TERMS,
            min_edge_weight: 1,
            keep_isolated: false,
            top_pairs: DEFAULT_TOP_PAIRS,
            resolution: 1.0,
            seed: DEFAULT_SEED,
            export: vec![ExportFormat::Gexf],
            out: PathBuf::from("out"),
            report: None,
            threads: None,
        }
    }
}

/// Partial settings, from a config file or from command-line flags.
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Settings {
    pub input: Option<PathBuf>,
    pub format: Option<String>,
    pub include: Option<Vec<String>>,
    pub exclude: Option<Vec<String>>,
    pub min_tokens: Option<usize>,
    pub dedup: Option<bool>,
    pub stopwords: Option<PathBuf>,
    pub phrases: Option<PathBuf>,
    pub min_freq: Option<u64>,
    pub max_terms: Option<usize>,
    pub min_edge_weight: Option<u64>,
    pub keep_isolated: Option<bool>,
    pub top_pairs: Option<usize>,
    pub resolution: Option<f64>,
    pub seed: Option<u64>,
    pub export: Option<Vec<String>>,
    pub out: Option<PathBuf>,
    pub report: Option<PathBuf>,
    pub threads: Option<usize>,
}

impl Settings {
    pub fn from_toml(text: &str) -> std::result::Result<Self, String> {
        toml::from_str(text).map_err(|e| e.to_string())
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_toml(&read_string(path)?)
            .map_err(|e| Error::Usage(format!("{}: {e}", path.display())))
    }

    /// Values in `over` win.
    pub fn overlay(self, over: Settings) -> Settings {
        Settings {
            input: over.input.or(self.input),
            format: over.format.or(self.format),
            include: over.include.or(self.include),
            exclude: over.exclude.or(self.exclude),
            min_tokens: over.min_tokens.or(self.min_tokens),
            dedup: over.dedup.or(self.dedup),
            stopwords: over.stopwords.or(self.stopwords),
            phrases: over.phrases.or(self.phrases),
            min_freq: over.min_freq.or(self.min_freq),
            max_terms: over.max_terms.or(self.max_terms),
            min_edge_weight: over.min_edge_weight.or(self.min_edge_weight),
            keep_isolated: over.keep_isolated.or(self.keep_isolated),
            top_pairs: over.top_pairs.or(self.top_pairs),
            resolution: over.resolution.or(self.resolution),
            seed: over.seed.or(self.seed),
            export: over.export.or(self.export),
            out: over.out.or(self.out),
            report: over.report.or(self.report),
            threads: over.threads.or(self.threads),
        }
    }
}

fn usage(msg: impl Into<String>) -> Error {
    Error::Usage(msg.into())
}

impl PipelineConfig {
    /// Applies `settings` over the defaults and validates the result.
    pub fn resolve(settings: Settings) -> Result<Self> {
        let d = PipelineConfig::default();
        let format = match settings.format {
            Some(f) => Some(f.parse::<InputFormat>().map_err(usage)?),
            None => settings.input.as_deref().and_then(InputFormat::from_path),
        };
        let export = match settings.export {
            Some(list) => {
                let mut formats = Vec::new();
                for f in list
                    .iter()
                    .flat_map(|s| s.split(','))
                    .filter(|s| !s.trim().is_empty())
                {
                    let f = f.parse::<ExportFormat>().map_err(usage)?;
                    if !formats.contains(&f) {
                        formats.push(f);
                    }
                }
                formats
            }
            None => d.export,
        };
        let config = PipelineConfig {
            input: settings.input,
            format,
            include: settings.include.unwrap_or_default(),
            exclude: settings.exclude.unwrap_or_default(),
            min_tokens: settings.min_tokens.unwrap_or(d.min_tokens),
            dedup: settings.dedup.unwrap_or(d.dedup),
            stopwords: settings.stopwords,
            phrases: settings.phrases,
            min_freq: settings.min_freq.unwrap_or(d.min_freq),
            max_terms: settings.max_terms.unwrap_or(d.max_terms),
            min_edge_weight: settings.min_edge_weight.unwrap_or(d.min_edge_weight),
            keep_isolated: settings.keep_isolated.unwrap_or(d.keep_isolated),
            top_pairs: settings.top_pairs.unwrap_or(d.top_pairs),
            resolution: settings.resolution.unwrap_or(d.resolution),
            seed: settings.seed.unwrap_or(d.seed),
            export,
            out: settings.out.unwrap_or(d.out),
            report: settings.report,
            threads: settings.threads,
        };
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        if self.min_freq < 1 {
            return Err(usage("min_freq must be at least 1"));
        }
        if self.max_terms < 1 {
            return Err(usage("max_terms must be at least 1"));
        }
        if self.min_edge_weight < 1 {
            return Err(usage("min_edge_weight must be at least 1"));
        }
        if self.top_pairs < 1 {
            return Err(usage("top_pairs must be at least 1"));
        }
        if !(self.resolution.is_finite() && self.resolution > 0.0) {
            return Err(usage("resolution must be a positive number"));
        }
        if self.threads == Some(0) {
            return Err(usage("threads must be at least 1"));
        }
        self.filter_spec()?;
        Ok(())
    }

    pub fn filter_spec(&self) -> Result<CorpusFilterSpec> {
        CorpusFilterSpec::new(&self.include, &self.exclude, self.min_tokens, self.dedup)
            .map_err(|e| usage(e.to_string()))
    }

    /// Input path and format, required by the ingest stage.
    pub fn input(&self) -> Result<(&Path, InputFormat)> {
        let input = self
            .input
            .as_deref()
            .ok_or_else(|| usage("no input file given (use --input)"))?;
        let format = self.format.ok_or_else(|| {
            usage(format!(
                "cannot infer the format of {}; pass --format jsonl|csv",
                input.display()
            ))
        })?;
        Ok((input, format))
    }

    pub fn out_path(&self, name: &str) -> PathBuf {
        self.out.join(name)
    }

    /// Settings that determine the results, as `key = value` pairs whose
    /// values are TOML literals. Output locations and the thread count are
    /// left out since they do not affect the results.
    pub fn parameters(&self) -> Vec<(String, String)> {
        fn s(v: &str) -> String {
            toml::Value::String(v.to_string()).to_string()
        }
        fn list<'a>(v: impl IntoIterator<Item = &'a str>) -> String {
            toml::Value::Array(
                v.into_iter()
                    .map(|x| toml::Value::String(x.to_string()))
                    .collect(),
            )
            .to_string()
        }
        let path = |p: &Path| s(&p.to_string_lossy());
        let mut out: Vec<(String, String)> = Vec::new();
        let mut push = |k: &str, v: String| out.push((k.to_string(), v));
        if let Some(p) = &self.input {
            push("input", path(p));
        }
        if let Some(f) = self.format {
            push("format", s(f.as_str()));
        }
        push("include", list(self.include.iter().map(String::as_str)));
        push("exclude", list(self.exclude.iter().map(String::as_str)));
        push("min_tokens", self.min_tokens.to_string());
        push("dedup", self.dedup.to_string());
        if let Some(p) = &self.stopwords {
            push("stopwords", path(p));
        }
        if let Some(p) = &self.phrases {
            push("phrases", path(p));
        }
        push("min_freq", self.min_freq.to_string());
        push("max_terms", self.max_terms.to_string());
        push("min_edge_weight", self.min_edge_weight.to_string());
        push("keep_isolated", self.keep_isolated.to_string());
        push("top_pairs", self.top_pairs.to_string());
        push(
            "resolution",
            toml::Value::Float(self.resolution).to_string(),
        );
        push("seed", self.seed.to_string());
        push("export", list(self.export.iter().map(|f| f.as_str())));
        out
    }

    /// The parameters as a config file accepted by `--config`.
    pub fn to_toml(&self) -> String {
        self.parameters()
            .into_iter()
            .map(|(k, v)| format!("{k} = {v}\n"))
            .collect()
    }
}
