use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use textnet::error::{InStage, Stage, StageError};
use textnet::pipeline::{self, workdir_settings};
use textnet::{PipelineConfig, Settings};

/// Network text analysis: turns a corpus of short documents into a weighted
/// word co-occurrence network, its word groups and a summary report.
#[derive(Debug, Parser)]
#[command(name = "textnet", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Read and filter the input corpus into the output directory.
    Ingest(Flags),
    /// Normalize and tokenize the ingested corpus.
    Tokenize(Flags),
    /// Count term and document frequencies.
    Stats(Flags),
    /// Build the co-occurrence network of the dominant terms.
    Graph(Flags),
    /// Detect word groups by modularity optimization.
    Detect(Flags),
    /// Render the report and the graph exports.
    Report(Flags),
    /// Run every stage end to end.
    Run(Flags),
}

#[derive(Debug, clap::Args)]
struct Flags {
    /// Corpus file, JSONL or CSV.
    #[arg(long, value_name = "PATH")]
    input: Option<PathBuf>,
    /// Input format; inferred from the file extension when omitted.
    #[arg(long, value_name = "jsonl|csv")]
    format: Option<String>,
    /// Keep only documents containing one of these keywords.
    #[arg(long, value_name = "WORD", value_delimiter = ',')]
    include: Vec<String>,
    /// Drop documents containing any of these keywords.
    #[arg(long, value_name = "WORD", value_delimiter = ',')]
    exclude: Vec<String>,
    /// Drop documents with fewer whitespace-separated words.
    #[arg(long, value_name = "N")]
    min_tokens: Option<usize>,
    /// Drop near-duplicate documents (same text up to case and spacing).
    #[arg(long, value_name = "BOOL", num_args = 0..=1, default_missing_value = "true")]
    dedup: Option<bool>,
    /// Stopword file, one word per line; defaults to the bundled list.
    #[arg(long, value_name = "PATH")]
    stopwords: Option<PathBuf>,
    /// Phrase dictionary, `surface form<TAB>canonical_token` per line.
    #[arg(long, value_name = "PATH")]
    phrases: Option<PathBuf>,
    /// Minimum term frequency of a network node.
    #[arg(long, value_name = "N")]
    min_freq: Option<u64>,
    /// Maximum number of network nodes.
    #[arg(long, value_name = "N")]
    max_terms: Option<usize>,
    /// Drop edges lighter than this.
    #[arg(long, value_name = "N")]
    min_edge_weight: Option<u64>,
    /// Keep dominant terms without any edge as isolated nodes.
    #[arg(long, value_name = "BOOL", num_args = 0..=1, default_missing_value = "true")]
    keep_isolated: Option<bool>,
    /// Number of word pairs in the report.
    #[arg(long, value_name = "K")]
    top_pairs: Option<usize>,
    /// Modularity resolution.
    #[arg(long, value_name = "GAMMA")]
    resolution: Option<f64>,
    /// Seed of the community detection node order.
    #[arg(long, value_name = "N")]
    seed: Option<u64>,
    /// Graph export formats: gexf, graphml, dot, json.
    #[arg(long, value_name = "FORMAT", value_delimiter = ',')]
    export: Vec<String>,
    /// Output directory for artifacts.
    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,
    /// Write the text report here instead of printing it.
    #[arg(long, value_name = "PATH")]
    report: Option<PathBuf>,
    /// Worker threads; defaults to the available cores.
    #[arg(long, value_name = "N")]
    threads: Option<usize>,
    /// Co-occurrence window. Only whole documents are supported.
    #[arg(long, value_name = "document", value_parser = ["document"])]
    window: Option<String>,
    /// TOML config file; flags override its keys.
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,
}

impl Flags {
    fn settings(&self) -> Settings {
        let list = |v: &Vec<String>| (!v.is_empty()).then(|| v.clone());
        Settings {
            input: self.input.clone(),
            format: self.format.clone(),
            include: list(&self.include),
            exclude: list(&self.exclude),
            min_tokens: self.min_tokens,
            dedup: self.dedup,
            stopwords: self.stopwords.clone(),
            phrases: self.phrases.clone(),
            min_freq: self.min_freq,
            max_terms: self.max_terms,
            min_edge_weight: self.min_edge_weight,
            keep_isolated: self.keep_isolated,
            top_pairs: self.top_pairs,
            resolution: self.resolution,
            seed: self.seed,
            export: list(&self.export),
            out: self.out.clone(),
            report: self.report.clone(),
            threads: self.threads,
        }
    }

    /// Settings recorded in the work directory, then the config file, then
    /// the flags; later sources win.
    fn resolve(&self, inherit_workdir: bool) -> Result<PipelineConfig, StageError> {
        let mut settings = match &self.config {
            Some(path) => Settings::load(path).in_stage(Stage::Config)?,
            None => Settings::default(),
        }
        .overlay(self.settings());
        if inherit_workdir {
            let out = settings
                .out
                .clone()
                .unwrap_or_else(|| PipelineConfig::default().out);
            if let Some(recorded) = workdir_settings(&out).in_stage(Stage::Config)? {
                settings = recorded.overlay(settings);
            }
        }
        PipelineConfig::resolve(settings).in_stage(Stage::Config)
    }
}

fn execute(command: Command) -> Result<(), StageError> {
    let print_files = |files: Vec<PathBuf>| {
        for f in files {
            println!("{}", f.display());
        }
    };
    match command {
        Command::Ingest(f) => print_files(pipeline::ingest(&f.resolve(false)?)?),
        Command::Tokenize(f) => print_files(pipeline::tokenize(&f.resolve(true)?)?),
        Command::Stats(f) => print_files(pipeline::stats(&f.resolve(true)?)?),
        Command::Graph(f) => print_files(pipeline::graph(&f.resolve(true)?)?),
        Command::Detect(f) => print_files(pipeline::detect_stage(&f.resolve(true)?)?),
        Command::Report(f) => {
            let config = f.resolve(true)?;
            let out = pipeline::report(&config)?;
            print_report(&config, &out.text);
        }
        Command::Run(f) => {
            let config = f.resolve(false)?;
            let out = pipeline::run_pipeline(&config)?;
            print_report(&config, &out.text);
        }
    }
    Ok(())
}

fn print_report(config: &PipelineConfig, text: &str) {
    if config.report.is_none() {
        let mut stdout = std::io::stdout().lock();
        let _ = stdout.write_all(text.as_bytes());
        let _ = stdout.flush();
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match execute(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("textnet: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
