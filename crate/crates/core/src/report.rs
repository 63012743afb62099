//! The summary report and its plain-text tables.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt::Write;

use crate::analytics::{CentralityTable, Partition};
use crate::corpus::CorpusProfile;
use crate::graph::{top_pairs, TextNetwork, WordPair};
use crate::{Error, Result};

/// One word group.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Community {
    pub id: usize,
    /// Member with the highest strength, ties lexicographic.
    pub label: String,
    pub members: Vec<String>,
    /// Summed weight of edges with both ends in the group.
    pub internal_weight: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SummaryReport {
    pub profile: CorpusProfile,
    pub top_pairs: Vec<(WordPair, u64)>,
    pub communities: Vec<Community>,
    /// Modularity of the partition, absent when the graph has no edges.
    pub modularity: Option<f64>,
    /// Effective configuration as ordered `key = value` entries.
    pub parameters: Vec<(String, String)>,
}

/// Assembles the report. Without a partition (graph without edges) every
/// node forms its own group.
pub fn build_report(
    profile: &CorpusProfile,
    graph: &TextNetwork,
    partition: Option<&Partition>,
    centrality: &CentralityTable,
    k: usize,
    parameters: Vec<(String, String)>,
) -> Result<SummaryReport> {
    if !graph
        .nodes()
        .eq(centrality.strength.keys().map(String::as_str))
    {
        return Err(Error::InconsistentNodes(
            "centrality table does not cover the graph nodes".to_string(),
        ));
    }
    let assignment: BTreeMap<String, usize> = match partition {
        Some(p) => {
            if !graph.nodes().eq(p.assignment.keys().map(String::as_str)) {
                return Err(Error::InconsistentNodes(
                    "partition does not cover the graph nodes".to_string(),
                ));
            }
            p.assignment.clone()
        }
        None if graph.edge_count() > 0 => {
            return Err(Error::InconsistentNodes(
                "graph has edges but no partition".to_string(),
            ))
        }
        None => graph
            .nodes()
            .enumerate()
            .map(|(i, n)| (n.to_string(), i))
            .collect(),
    };

    let n_groups = assignment.values().max().map_or(0, |c| c + 1);
    let mut communities: Vec<Community> = (0..n_groups)
        .map(|id| Community {
            id,
            label: String::new(),
            members: Vec::new(),
            internal_weight: 0,
        })
        .collect();
    for (node, &c) in &assignment {
        communities[c].members.push(node.clone());
    }
    for (pair, edge) in graph.edges() {
        let (ca, cb) = (assignment[pair.a()], assignment[pair.b()]);
        if ca == cb {
            communities[ca].internal_weight += edge.weight;
        }
    }
    for community in &mut communities {
        if community.members.is_empty() {
            return Err(Error::InconsistentNodes(format!(
                "community {} has no members",
                community.id
            )));
        }
        let mut best: Option<(&String, u64)> = None;
        for m in &community.members {
            let s = centrality.strength[m];
            if best.is_none_or(|(_, bs)| s > bs) {
                best = Some((m, s));
            }
        }
        community.label = best.map(|(m, _)| m.clone()).unwrap_or_default();
    }

    let mut profile = profile.clone();
    profile.n_groups = Some(n_groups);
    Ok(SummaryReport {
        profile,
        top_pairs: top_pairs(graph, k),
        communities,
        modularity: partition.map(|p| p.q),
        parameters,
    })
}

fn width<'a>(cells: impl IntoIterator<Item = &'a str>) -> usize {
    cells
        .into_iter()
        .map(|c| c.chars().count())
        .max()
        .unwrap_or(0)
}

fn write_row(out: &mut String, cells: &[&str], widths: &[usize]) {
    let mut line = String::new();
    for (i, cell) in cells.iter().enumerate() {
        line.push_str(cell);
        if i + 1 < cells.len() {
            let pad = widths[i] - cell.chars().count() + 2;
            line.extend(core::iter::repeat_n(' ', pad));
        }
    }
    out.push_str(line.trim_end());
    out.push('\n');
}

fn write_table(out: &mut String, title: &str, header: &[&str], rows: &[Vec<String>]) {
    let widths: Vec<usize> = (0..header.len())
        .map(|c| width(core::iter::once(header[c]).chain(rows.iter().map(|r| r[c].as_str()))))
        .collect();
    out.push_str(title);
    out.push('\n');
    write_row(out, header, &widths);
    for row in rows {
        let cells: Vec<&str> = row.iter().map(String::as_str).collect();
        write_row(out, &cells, &widths);
    }
}

/// Renders the corpus profile, the ranked word pairs and the word groups as
/// aligned plain-text tables, followed by the modularity and the parameters.
pub fn render_tables(report: &SummaryReport) -> String {
    let mut out = String::new();
    let p = &report.profile;
    let profile_rows = [
        ("Number of Documents", p.n_raw.to_string()),
        ("After Filtering Process", p.n_filtered.to_string()),
        (
            "Number of Word Groups",
            p.n_groups
                .map_or_else(|| "-".to_string(), |n| n.to_string()),
        ),
    ];
    let rows: Vec<Vec<String>> = profile_rows
        .iter()
        .map(|(k, v)| alloc::vec![k.to_string(), v.clone()])
        .collect();
    write_table(&mut out, "Corpus Profile", &["Metric", "Value"], &rows);

    out.push('\n');
    let rows: Vec<Vec<String>> = report
        .top_pairs
        .iter()
        .map(|(pair, w)| alloc::vec![pair.to_string(), w.to_string()])
        .collect();
    write_table(
        &mut out,
        "Top Word Pairs",
        &["Words Pair", "Weight Degree"],
        &rows,
    );

    out.push('\n');
    let rows: Vec<Vec<String>> = report
        .communities
        .iter()
        .map(|c| {
            alloc::vec![
                c.id.to_string(),
                c.label.clone(),
                c.members.len().to_string(),
                c.internal_weight.to_string(),
                c.members.join(" "),
            ]
        })
        .collect();
    write_table(
        &mut out,
        "Word Groups",
        &["Group", "Label", "Size", "Internal Weight", "Members"],
        &rows,
    );

    out.push('\n');
    match report.modularity {
        Some(q) => {
            let _ = writeln!(out, "Modularity: {q:.6}");
        }
        None => out.push_str("Modularity: -\n"),
    }
    if !report.parameters.is_empty() {
        out.push_str("\nParameters\n");
        for (k, v) in &report.parameters {
            let _ = writeln!(out, "{k} = {v}");
        }
    }
    out
}
