//! The pipeline stages, individually over a work directory and end to end.
//!
//! Every stage reads the artifacts of the previous one from the output
//! directory and writes its own next to them, so `ingest`, `tokenize`,
//! `stats`, `graph`, `detect` and `report` run in sequence produce exactly
//! the files of a single `run`. A stage that fails removes whatever it had
//! already written.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::Serialize;
use textnet_core::{
    build_report, centrality, compute_association, detect_communities, emit_wordcloud_data,
    filter_corpus, render_tables, select_dominant, BuildOptions, CorpusProfile, Partition,
    SummaryReport, TermFrequencyTable, TextNetwork, TokenizedDocument, Tokenizer,
};

use crate::artifacts::{self, *};
use crate::config::{PipelineConfig, Settings};
use crate::corpus_io::{read_clean_corpus, read_corpus, write_corpus, write_rejects, Reject};
use crate::error::{Error, InStage, Result, Stage, StageError};
use crate::export::{export_graph, ExportInput};
use crate::fsutil::{write_string, Outputs};
use crate::lexicon::{default_stopwords, read_phrases, read_stopwords};
use crate::parallel;

pub const CONFIG: &str = "config.toml";
pub const REPORT_TEXT: &str = "report.txt";
pub const REPORT_JSON: &str = "report.json";

type StageResult<T> = std::result::Result<T, StageError>;

/// Settings recorded in a work directory by an earlier stage, if any.
pub fn workdir_settings(out: &Path) -> Result<Option<Settings>> {
    let path = out.join(CONFIG);
    if !path.exists() {
        return Ok(None);
    }
    Settings::load(&path).map(Some)
}

/// Result of the report stage or a full run.
#[derive(Debug)]
pub struct RunOutput {
    pub report: SummaryReport,
    /// The rendered tables, as written to `report.txt`.
    pub text: String,
    pub files: Vec<PathBuf>,
}

pub fn load_tokenizer(config: &PipelineConfig) -> Result<Tokenizer> {
    let stopwords = match &config.stopwords {
        Some(path) => read_stopwords(path)?,
        None => default_stopwords(),
    };
    let phrases = match &config.phrases {
        Some(path) => read_phrases(path)?,
        None => Default::default(),
    };
    Ok(Tokenizer::new(phrases, stopwords))
}

fn ingest_data(
    config: &PipelineConfig,
) -> Result<(Vec<textnet_core::RawDocument>, Vec<Reject>, CorpusProfile)> {
    let spec = config.filter_spec()?;
    let (input, format) = config.input()?;
    let ingested = read_corpus(input, format)?;
    let (docs, profile) = filter_corpus(ingested.documents, &spec);
    Ok((docs, ingested.rejects, profile))
}

fn network(
    config: &PipelineConfig,
    tokens: &[TokenizedDocument],
    counts: &TermFrequencyTable,
) -> Result<TextNetwork> {
    let dominant = select_dominant(counts, config.min_freq, config.max_terms)?;
    let options = BuildOptions {
        keep_isolated: config.keep_isolated,
    };
    let mut graph = parallel::build_graph(tokens, &dominant, options);
    graph.prune(config.min_edge_weight, config.keep_isolated);
    Ok(compute_association(graph, counts)?)
}

/// Louvain partition, or `None` when the graph has no edges and modularity
/// is undefined.
fn detect(config: &PipelineConfig, graph: &TextNetwork) -> Result<Option<Partition>> {
    if graph.edge_count() == 0 {
        return Ok(None);
    }
    Ok(Some(detect_communities(
        graph,
        config.resolution,
        config.seed,
    )?))
}

/// Community of every node; singletons when there is no partition.
fn assignment_of(graph: &TextNetwork, partition: Option<&Partition>) -> BTreeMap<String, usize> {
    match partition {
        Some(p) => p.assignment.clone(),
        None => graph
            .nodes()
            .enumerate()
            .map(|(i, n)| (n.to_string(), i))
            .collect(),
    }
}

#[derive(Serialize)]
struct ReportJson<'a> {
    profile: &'a CorpusProfile,
    top_pairs: Vec<PairJson<'a>>,
    communities: Vec<CommunityJson<'a>>,
    modularity: Option<f64>,
    parameters: BTreeMap<&'a str, &'a str>,
}

#[derive(Serialize)]
struct PairJson<'a> {
    source: &'a str,
    target: &'a str,
    weight: u64,
}

#[derive(Serialize)]
struct CommunityJson<'a> {
    id: usize,
    label: &'a str,
    members: &'a [String],
    internal_weight: u64,
}

pub fn report_json(report: &SummaryReport) -> String {
    let doc = ReportJson {
        profile: &report.profile,
        top_pairs: report
            .top_pairs
            .iter()
            .map(|(p, w)| PairJson {
                source: p.a(),
                target: p.b(),
                weight: *w,
            })
            .collect(),
        communities: report
            .communities
            .iter()
            .map(|c| CommunityJson {
                id: c.id,
                label: &c.label,
                members: &c.members,
                internal_weight: c.internal_weight,
            })
            .collect(),
        modularity: report.modularity,
        parameters: report
            .parameters
            .iter()
            .map(|(k, v)| (k.as_str(), v.as_str()))
            .collect(),
    };
    let mut text = serde_json::to_string_pretty(&doc).expect("report serializes");
    text.push('\n');
    text
}

/// Builds the report and writes it with the graph exports.
fn finish(
    config: &PipelineConfig,
    outputs: &mut Outputs,
    profile: &CorpusProfile,
    graph: &TextNetwork,
    partition: Option<&Partition>,
) -> StageResult<(SummaryReport, String)> {
    let parameters = config.parameters();
    let table = centrality(graph);
    let report = build_report(
        profile,
        graph,
        partition,
        &table,
        config.top_pairs,
        parameters.clone(),
    )
    .in_stage(Stage::Report)?;
    let text = render_tables(&report);
    write_string(&outputs.track(config.out_path(REPORT_TEXT)), &text).in_stage(Stage::Report)?;
    if let Some(path) = &config.report {
        write_string(&outputs.track(path.clone()), &text).in_stage(Stage::Report)?;
    }
    write_string(
        &outputs.track(config.out_path(REPORT_JSON)),
        &report_json(&report),
    )
    .in_stage(Stage::Report)?;
    write_string(&outputs.track(config.out_path(CONFIG)), &config.to_toml())
        .in_stage(Stage::Report)?;

    let assignment = assignment_of(graph, partition);
    let input = ExportInput {
        graph,
        assignment: &assignment,
        parameters: &parameters,
    };
    for &format in &config.export {
        let path = outputs.track(config.out_path(&format.file_name()));
        export_graph(&input, format, &path).in_stage(Stage::Export)?;
    }
    Ok((report, text))
}

fn threaded<R: Send>(
    config: &PipelineConfig,
    f: impl FnOnce() -> StageResult<R> + Send,
) -> StageResult<R> {
    parallel::with_threads(config.threads, f).in_stage(Stage::Config)?
}

/// Runs every stage in memory, writing all artifacts.
pub fn run_pipeline(config: &PipelineConfig) -> StageResult<RunOutput> {
    threaded(config, || {
        let mut outputs = Outputs::new();
        let path = |outputs: &mut Outputs, name: &str| outputs.track(config.out_path(name));

        let (docs, rejects, profile) = ingest_data(config).in_stage(Stage::Ingest)?;
        write_corpus(&path(&mut outputs, CORPUS), &docs).in_stage(Stage::Ingest)?;
        write_rejects(&path(&mut outputs, REJECTS), &rejects).in_stage(Stage::Ingest)?;
        write_profile(&path(&mut outputs, PROFILE), &profile).in_stage(Stage::Ingest)?;

        let tokenizer = load_tokenizer(config).in_stage(Stage::Tokenize)?;
        let tokens = parallel::tokenize_all(&docs, &tokenizer);
        drop(docs);
        write_tokens(&path(&mut outputs, TOKENS), &tokens).in_stage(Stage::Tokenize)?;

        let counts = parallel::count_terms(&tokens);
        write_counts(&path(&mut outputs, COUNTS), &counts).in_stage(Stage::Stats)?;
        let cloud = emit_wordcloud_data(&counts, config.max_terms);
        write_wordcloud(&path(&mut outputs, WORDCLOUD), &cloud).in_stage(Stage::Stats)?;

        let graph = network(config, &tokens, &counts).in_stage(Stage::Graph)?;
        drop(tokens);
        write_network(&path(&mut outputs, NETWORK), &graph).in_stage(Stage::Graph)?;
        write_edges(&path(&mut outputs, EDGES), &graph).in_stage(Stage::Graph)?;

        let partition = detect(config, &graph).in_stage(Stage::Detect)?;
        let assignment = assignment_of(&graph, partition.as_ref());
        write_partition(&path(&mut outputs, PARTITION), &assignment).in_stage(Stage::Detect)?;

        let (report, text) = finish(config, &mut outputs, &profile, &graph, partition.as_ref())?;
        Ok(RunOutput {
            report,
            text,
            files: outputs.commit(),
        })
    })
}

/// Writes the effective settings so later stages pick them up.
fn record_config(config: &PipelineConfig, outputs: &mut Outputs, stage: Stage) -> StageResult<()> {
    write_string(&outputs.track(config.out_path(CONFIG)), &config.to_toml()).in_stage(stage)
}

pub fn ingest(config: &PipelineConfig) -> StageResult<Vec<PathBuf>> {
    let mut outputs = Outputs::new();
    let stage = Stage::Ingest;
    let (docs, rejects, profile) = ingest_data(config).in_stage(stage)?;
    write_corpus(&outputs.track(config.out_path(CORPUS)), &docs).in_stage(stage)?;
    write_rejects(&outputs.track(config.out_path(REJECTS)), &rejects).in_stage(stage)?;
    write_profile(&outputs.track(config.out_path(PROFILE)), &profile).in_stage(stage)?;
    record_config(config, &mut outputs, stage)?;
    Ok(outputs.commit())
}

pub fn tokenize(config: &PipelineConfig) -> StageResult<Vec<PathBuf>> {
    let stage = Stage::Tokenize;
    threaded(config, || {
        let mut outputs = Outputs::new();
        let docs = read_clean_corpus(&config.out_path(CORPUS)).in_stage(stage)?;
        let tokenizer = load_tokenizer(config).in_stage(stage)?;
        let tokens = parallel::tokenize_all(&docs, &tokenizer);
        write_tokens(&outputs.track(config.out_path(TOKENS)), &tokens).in_stage(stage)?;
        record_config(config, &mut outputs, stage)?;
        Ok(outputs.commit())
    })
}

pub fn stats(config: &PipelineConfig) -> StageResult<Vec<PathBuf>> {
    let stage = Stage::Stats;
    threaded(config, || {
        let mut outputs = Outputs::new();
        let tokens = read_tokens(&config.out_path(TOKENS)).in_stage(stage)?;
        let counts = parallel::count_terms(&tokens);
        write_counts(&outputs.track(config.out_path(COUNTS)), &counts).in_stage(stage)?;
        let cloud = emit_wordcloud_data(&counts, config.max_terms);
        write_wordcloud(&outputs.track(config.out_path(WORDCLOUD)), &cloud).in_stage(stage)?;
        record_config(config, &mut outputs, stage)?;
        Ok(outputs.commit())
    })
}

pub fn graph(config: &PipelineConfig) -> StageResult<Vec<PathBuf>> {
    let stage = Stage::Graph;
    threaded(config, || {
        let mut outputs = Outputs::new();
        let tokens = read_tokens(&config.out_path(TOKENS)).in_stage(stage)?;
        let counts_path = config.out_path(COUNTS);
        let counts = read_counts(&counts_path, tokens.len() as u64).in_stage(stage)?;
        if counts != parallel::count_terms(&tokens) {
            return Err(Error::data(
                &counts_path,
                "counts do not match the token file",
            ))
            .in_stage(stage);
        }
        let graph = network(config, &tokens, &counts).in_stage(stage)?;
        write_network(&outputs.track(config.out_path(NETWORK)), &graph).in_stage(stage)?;
        write_edges(&outputs.track(config.out_path(EDGES)), &graph).in_stage(stage)?;
        record_config(config, &mut outputs, stage)?;
        Ok(outputs.commit())
    })
}

pub fn detect_stage(config: &PipelineConfig) -> StageResult<Vec<PathBuf>> {
    let stage = Stage::Detect;
    let mut outputs = Outputs::new();
    let graph = read_network(&config.out_path(NETWORK)).in_stage(stage)?;
    let partition = detect(config, &graph).in_stage(stage)?;
    let assignment = assignment_of(&graph, partition.as_ref());
    write_partition(&outputs.track(config.out_path(PARTITION)), &assignment).in_stage(stage)?;
    record_config(config, &mut outputs, stage)?;
    Ok(outputs.commit())
}

pub fn report(config: &PipelineConfig) -> StageResult<RunOutput> {
    let stage = Stage::Report;
    let mut outputs = Outputs::new();
    let profile = read_profile(&config.out_path(PROFILE)).in_stage(stage)?;
    let graph = read_network(&config.out_path(NETWORK)).in_stage(stage)?;
    let partition = if graph.edge_count() == 0 {
        None
    } else {
        let path = config.out_path(PARTITION);
        Some(
            artifacts::read_partition(&path, &graph, config.resolution, config.seed)
                .in_stage(stage)?,
        )
    };
    let (report, text) = finish(config, &mut outputs, &profile, &graph, partition.as_ref())?;
    Ok(RunOutput {
        report,
        text,
        files: outputs.commit(),
    })
}
