//! Graph files for external network tools: GEXF 1.3, GraphML, DOT and JSON.
//!
//! Nodes carry `strength` and `community` attributes and edges carry
//! `weight`. Nodes are written in lexicographic order and edges in ranked
//! order (weight descending, then pair), so output is byte-stable.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use textnet_core::graph::ranked_edges;
use textnet_core::TextNetwork;

use crate::error::{Error, Result};
use crate::fsutil::write_string;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ExportFormat {
    Gexf,
    Graphml,
    Dot,
    Json,
}

impl ExportFormat {
    pub const ALL: [ExportFormat; 4] = [
        ExportFormat::Gexf,
        ExportFormat::Graphml,
        ExportFormat::Dot,
        ExportFormat::Json,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ExportFormat::Gexf => "gexf",
            ExportFormat::Graphml => "graphml",
            ExportFormat::Dot => "dot",
            ExportFormat::Json => "json",
        }
    }

    pub fn file_name(self) -> String {
        format!("graph.{}", self.as_str())
    }
}

impl FromStr for ExportFormat {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        ExportFormat::ALL
            .into_iter()
            .find(|f| f.as_str() == s.trim().to_ascii_lowercase())
            .ok_or_else(|| {
                format!("unknown export format `{s}` (expected gexf, graphml, dot or json)")
            })
    }
}

/// Everything an exporter needs besides the graph.
pub struct ExportInput<'a> {
    pub graph: &'a TextNetwork,
    /// Community of every node.
    pub assignment: &'a BTreeMap<String, usize>,
    /// Effective configuration, recorded by the JSON export.
    pub parameters: &'a [(String, String)],
}

impl ExportInput<'_> {
    fn check(&self) -> Result<()> {
        if !self
            .graph
            .nodes()
            .eq(self.assignment.keys().map(String::as_str))
        {
            return Err(Error::Data(
                "community assignment does not cover the graph nodes".into(),
            ));
        }
        Ok(())
    }

    fn nodes(&self) -> impl Iterator<Item = (usize, &str, u64, usize)> + '_ {
        self.graph
            .nodes()
            .enumerate()
            .map(|(i, n)| (i, n, self.graph.strength(n), self.assignment[n]))
    }
}

pub fn render(input: &ExportInput<'_>, format: ExportFormat) -> Result<String> {
    input.check()?;
    Ok(match format {
        ExportFormat::Gexf => gexf(input),
        ExportFormat::Graphml => graphml(input),
        ExportFormat::Dot => dot(input),
        ExportFormat::Json => json(input)?,
    })
}

pub fn export_graph(input: &ExportInput<'_>, format: ExportFormat, path: &Path) -> Result<()> {
    write_string(path, &render(input, format)?)
}

fn xml_escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            c => out.push(c),
        }
    }
    out
}

fn gexf(input: &ExportInput<'_>) -> String {
    let mut s = String::new();
    s.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    s.push_str(concat!(
        "<gexf xmlns=\"http://gexf.net/1.3\" ",
        "xmlns:xsi=\"http://www.w3.org/2001/XMLSchema-instance\" ",
        "xsi:schemaLocation=\"http://gexf.net/1.3 http://gexf.net/1.3/gexf.xsd\" ",
        "version=\"1.3\">\n"
    ));
    s.push_str("  <meta>\n    <creator>textnet</creator>\n");
    s.push_str("    <description>word co-occurrence network</description>\n  </meta>\n");
    s.push_str("  <graph mode=\"static\" defaultedgetype=\"undirected\">\n");
    s.push_str("    <attributes class=\"node\" mode=\"static\">\n");
    s.push_str("      <attribute id=\"0\" title=\"strength\" type=\"long\"/>\n");
    s.push_str("      <attribute id=\"1\" title=\"community\" type=\"integer\"/>\n");
    s.push_str("    </attributes>\n");
    s.push_str("    <nodes>\n");
    for (_, name, strength, community) in input.nodes() {
        let name = xml_escape(name);
        let _ = writeln!(s, "      <node id=\"{name}\" label=\"{name}\">");
        s.push_str("        <attvalues>\n");
        let _ = writeln!(s, "          <attvalue for=\"0\" value=\"{strength}\"/>");
        let _ = writeln!(s, "          <attvalue for=\"1\" value=\"{community}\"/>");
        s.push_str("        </attvalues>\n      </node>\n");
    }
    s.push_str("    </nodes>\n    <edges>\n");
    for (i, (pair, edge)) in ranked_edges(input.graph).into_iter().enumerate() {
        let _ = writeln!(
            s,
            "      <edge id=\"{i}\" source=\"{}\" target=\"{}\" weight=\"{}\"/>",
            xml_escape(pair.a()),
            xml_escape(pair.b()),
            edge.weight
        );
    }
    s.push_str("    </edges>\n  </graph>\n</gexf>\n");
    s
}

fn graphml(input: &ExportInput<'_>) -> String {
    let ids: BTreeMap<&str, usize> = input
        .graph
        .nodes()
        .enumerate()
        .map(|(i, n)| (n, i))
        .collect();
    let mut s = String::new();
    s.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    s.push_str(concat!(
        "<graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\" ",
        "xmlns:xsi=\"http://www.w3.org/2001/XMLSchema-instance\" ",
        "xsi:schemaLocation=\"http://graphml.graphdrawing.org/xmlns ",
        "http://graphml.graphdrawing.org/xmlns/1.0/graphml.xsd\">\n"
    ));
    s.push_str("  <key id=\"label\" for=\"node\" attr.name=\"label\" attr.type=\"string\"/>\n");
    s.push_str("  <key id=\"strength\" for=\"node\" attr.name=\"strength\" attr.type=\"long\"/>\n");
    s.push_str(
        "  <key id=\"community\" for=\"node\" attr.name=\"community\" attr.type=\"int\"/>\n",
    );
    s.push_str("  <key id=\"weight\" for=\"edge\" attr.name=\"weight\" attr.type=\"long\"/>\n");
    s.push_str("  <graph id=\"G\" edgedefault=\"undirected\">\n");
    for (i, name, strength, community) in input.nodes() {
        let _ = writeln!(s, "    <node id=\"n{i}\">");
        let _ = writeln!(s, "      <data key=\"label\">{}</data>", xml_escape(name));
        let _ = writeln!(s, "      <data key=\"strength\">{strength}</data>");
        let _ = writeln!(s, "      <data key=\"community\">{community}</data>");
        s.push_str("    </node>\n");
    }
    for (pair, edge) in ranked_edges(input.graph) {
        let _ = writeln!(
            s,
            "    <edge source=\"n{}\" target=\"n{}\">",
            ids[pair.a()],
            ids[pair.b()]
        );
        let _ = writeln!(s, "      <data key=\"weight\">{}</data>", edge.weight);
        s.push_str("    </edge>\n");
    }
    s.push_str("  </graph>\n</graphml>\n");
    s
}

fn dot_id(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        if c == '"' || c == '\\' {
            out.push('\\');
        }
        out.push(c);
    }
    out.push('"');
    out
}

fn dot(input: &ExportInput<'_>) -> String {
    let mut s = String::from("graph {\n");
    for (_, name, strength, community) in input.nodes() {
        let _ = writeln!(
            s,
            "  {} [strength={strength}, community={community}];",
            dot_id(name)
        );
    }
    for (pair, edge) in ranked_edges(input.graph) {
        let _ = writeln!(
            s,
            "  {} -- {} [weight={}];",
            dot_id(pair.a()),
            dot_id(pair.b()),
            edge.weight
        );
    }
    s.push_str("}\n");
    s
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
struct JsonNode {
    id: String,
    strength: u64,
    community: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
struct JsonEdge {
    source: String,
    target: String,
    weight: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
struct JsonMeta {
    n_docs: u64,
    parameters: BTreeMap<String, String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct JsonGraph {
    nodes: Vec<JsonNode>,
    edges: Vec<JsonEdge>,
    meta: JsonMeta,
}

fn json(input: &ExportInput<'_>) -> Result<String> {
    let doc = JsonGraph {
        nodes: input
            .nodes()
            .map(|(_, id, strength, community)| JsonNode {
                id: id.to_string(),
                strength,
                community,
            })
            .collect(),
        edges: ranked_edges(input.graph)
            .into_iter()
            .map(|(p, e)| JsonEdge {
                source: p.a().to_string(),
                target: p.b().to_string(),
                weight: e.weight,
            })
            .collect(),
        meta: JsonMeta {
            n_docs: input.graph.n_docs(),
            parameters: input.parameters.iter().cloned().collect(),
        },
    };
    let mut text = serde_json::to_string_pretty(&doc).map_err(|e| Error::Data(e.to_string()))?;
    text.push('\n');
    Ok(text)
}

/// A graph read back from the JSON export.
#[derive(Debug, Clone, PartialEq)]
pub struct ImportedGraph {
    pub graph: TextNetwork,
    pub assignment: BTreeMap<String, usize>,
    pub parameters: BTreeMap<String, String>,
}

pub fn parse_json_export(text: &str) -> Result<ImportedGraph> {
    let doc: JsonGraph = serde_json::from_str(text).map_err(|e| Error::Data(e.to_string()))?;
    let isolated: Vec<&str> = doc.nodes.iter().map(|n| n.id.as_str()).collect();
    let graph = TextNetwork::from_edges(
        doc.meta.n_docs,
        doc.edges
            .iter()
            .map(|e| (e.source.clone(), e.target.clone(), e.weight)),
        &isolated,
    )?;
    if graph.node_count() != doc.nodes.len() {
        return Err(Error::Data(
            "JSON export lists edge endpoints that are not nodes, or duplicate nodes".into(),
        ));
    }
    for n in &doc.nodes {
        if graph.strength(&n.id) != n.strength {
            return Err(Error::Data(format!(
                "node `{}` strength does not match its edges",
                n.id
            )));
        }
    }
    Ok(ImportedGraph {
        assignment: doc.nodes.into_iter().map(|n| (n.id, n.community)).collect(),
        graph,
        parameters: doc.meta.parameters,
    })
}
