//! Intermediate artifacts passed between pipeline stages.
//!
//! | file             | contents                                                  |
//! |------------------|-----------------------------------------------------------|
//! | `corpus.jsonl`   | filtered documents, input JSONL schema                    |
//! | `rejects.jsonl`  | `{"line","reason"}` per rejected input record             |
//! | `profile.json`   | corpus profile                                            |
//! | `tokens.jsonl`   | `{"id","tokens"}` per document                            |
//! | `counts.csv`     | `term,tf,df`, ranked                                      |
//! | `wordcloud.csv`  | `term,tf`, ranked                                         |
//! | `network.json`   | `{"n_docs","nodes","edges":[{"source","target","weight"}]}` |
//! | `edges.csv`      | edge list with association metrics, ranked                |
//! | `partition.csv`  | `node,community`, nodes sorted                            |

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};
use textnet_core::graph::ranked_edges;
use textnet_core::{
    modularity, CorpusProfile, Partition, TermCounts, TermFrequencyTable, TextNetwork,
    TokenizedDocument,
};

use crate::corpus_io::{read_jsonl_strict, write_jsonl};
use crate::error::{Error, Result};
use crate::fsutil::{create_file, read_string, write_string};

pub const CORPUS: &str = "corpus.jsonl";
pub const REJECTS: &str = "rejects.jsonl";
pub const PROFILE: &str = "profile.json";
pub const TOKENS: &str = "tokens.jsonl";
pub const COUNTS: &str = "counts.csv";
pub const WORDCLOUD: &str = "wordcloud.csv";
pub const NETWORK: &str = "network.json";
pub const EDGES: &str = "edges.csv";
pub const PARTITION: &str = "partition.csv";

fn csv_writer(path: &Path) -> Result<csv::Writer<std::io::BufWriter<std::fs::File>>> {
    Ok(csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(create_file(path)?))
}

fn csv_err(path: &Path) -> impl Fn(csv::Error) -> Error + '_ {
    move |e| match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::io(path, io),
        other => Error::data(path, format!("{other:?}")),
    }
}

pub fn write_tokens(path: &Path, docs: &[TokenizedDocument]) -> Result<()> {
    write_jsonl(path, docs)
}

pub fn read_tokens(path: &Path) -> Result<Vec<TokenizedDocument>> {
    read_jsonl_strict(path)
}

pub fn write_profile(path: &Path, profile: &CorpusProfile) -> Result<()> {
    let mut text = serde_json::to_string_pretty(profile).map_err(|e| Error::data(path, e))?;
    text.push('\n');
    write_string(path, &text)
}

pub fn read_profile(path: &Path) -> Result<CorpusProfile> {
    let profile: CorpusProfile =
        serde_json::from_str(&read_string(path)?).map_err(|e| Error::data(path, e))?;
    if !profile.is_consistent() {
        return Err(Error::data(path, "profile counts do not add up"));
    }
    Ok(profile)
}

pub fn write_counts(path: &Path, table: &TermFrequencyTable) -> Result<()> {
    let mut w = csv_writer(path)?;
    let err = csv_err(path);
    w.write_record(["term", "tf", "df"]).map_err(&err)?;
    for (term, c) in table.ranked() {
        w.write_record([term, &c.tf.to_string(), &c.df.to_string()])
            .map_err(&err)?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

#[derive(Deserialize)]
struct CountRow {
    term: String,
    tf: u64,
    df: u64,
}

/// Reads `counts.csv`; `n_docs` comes from the token file it was computed from.
pub fn read_counts(path: &Path, n_docs: u64) -> Result<TermFrequencyTable> {
    let mut r = csv::Reader::from_path(path).map_err(csv_err(path))?;
    let mut rows = Vec::new();
    for row in r.deserialize::<CountRow>() {
        let row = row.map_err(csv_err(path))?;
        rows.push((
            row.term,
            TermCounts {
                tf: row.tf,
                df: row.df,
            },
        ));
    }
    Ok(TermFrequencyTable::from_entries(n_docs, rows)?)
}

pub fn write_wordcloud(path: &Path, rows: &[(String, u64)]) -> Result<()> {
    let mut w = csv_writer(path)?;
    let err = csv_err(path);
    w.write_record(["term", "tf"]).map_err(&err)?;
    for (term, tf) in rows {
        w.write_record([term.as_str(), &tf.to_string()])
            .map_err(&err)?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

/// Edge list with association metrics; metric columns are empty when the
/// metrics were not computed.
pub fn write_edges(path: &Path, graph: &TextNetwork) -> Result<()> {
    let mut w = csv_writer(path)?;
    let err = csv_err(path);
    w.write_record([
        "source",
        "target",
        "weight",
        "support",
        "confidence_st",
        "confidence_ts",
        "lift",
    ])
    .map_err(&err)?;
    for (pair, edge) in ranked_edges(graph) {
        let metrics = edge.metrics.map_or_else(
            || vec![String::new(); 4],
            |m| {
                [m.support, m.confidence_ab, m.confidence_ba, m.lift]
                    .iter()
                    .map(f64::to_string)
                    .collect()
            },
        );
        let mut row = vec![
            pair.a().to_string(),
            pair.b().to_string(),
            edge.weight.to_string(),
        ];
        row.extend(metrics);
        w.write_record(&row).map_err(&err)?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

#[derive(Debug, Serialize, Deserialize)]
struct NetworkFile {
    n_docs: u64,
    nodes: Vec<String>,
    edges: Vec<EdgeRecord>,
}

#[derive(Debug, Serialize, Deserialize)]
struct EdgeRecord {
    source: String,
    target: String,
    weight: u64,
}

pub fn write_network(path: &Path, graph: &TextNetwork) -> Result<()> {
    let file = NetworkFile {
        n_docs: graph.n_docs(),
        nodes: graph.nodes().map(String::from).collect(),
        edges: graph
            .edges()
            .map(|(p, e)| EdgeRecord {
                source: p.a().to_string(),
                target: p.b().to_string(),
                weight: e.weight,
            })
            .collect(),
    };
    let mut text = serde_json::to_string_pretty(&file).map_err(|e| Error::data(path, e))?;
    text.push('\n');
    write_string(path, &text)
}

pub fn read_network(path: &Path) -> Result<TextNetwork> {
    let file: NetworkFile =
        serde_json::from_str(&read_string(path)?).map_err(|e| Error::data(path, e))?;
    let isolated: Vec<&str> = file.nodes.iter().map(String::as_str).collect();
    let graph = TextNetwork::from_edges(
        file.n_docs,
        file.edges
            .into_iter()
            .map(|e| (e.source, e.target, e.weight)),
        &isolated,
    )?;
    if graph.node_count() != file.nodes.len() {
        return Err(Error::data(
            path,
            "edge endpoints missing from the node list",
        ));
    }
    Ok(graph)
}

pub fn write_partition(path: &Path, assignment: &BTreeMap<String, usize>) -> Result<()> {
    let mut w = csv_writer(path)?;
    let err = csv_err(path);
    w.write_record(["node", "community"]).map_err(&err)?;
    for (node, c) in assignment {
        w.write_record([node.as_str(), &c.to_string()])
            .map_err(&err)?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

#[derive(Deserialize)]
struct PartitionRow {
    node: String,
    community: usize,
}

/// Reads `partition.csv` and recomputes its modularity on `graph`.
pub fn read_partition(
    path: &Path,
    graph: &TextNetwork,
    resolution: f64,
    seed: u64,
) -> Result<Partition> {
    let mut r = csv::Reader::from_path(path).map_err(csv_err(path))?;
    let mut assignment = BTreeMap::new();
    for row in r.deserialize::<PartitionRow>() {
        let row = row.map_err(csv_err(path))?;
        if assignment.insert(row.node.clone(), row.community).is_some() {
            return Err(Error::data(
                path,
                format!("node `{}` listed twice", row.node),
            ));
        }
    }
    if !graph.nodes().eq(assignment.keys().map(String::as_str)) {
        return Err(Error::data(
            path,
            "partition nodes differ from the network nodes",
        ));
    }
    let q = modularity(graph, &assignment, resolution)?;
    Ok(Partition {
        assignment,
        q,
        resolution,
        seed,
    })
}
