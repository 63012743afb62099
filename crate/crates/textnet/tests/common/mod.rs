//! Helpers shared by the integration tests and the acceptance suite.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use roxmltree::{Document, Node};
use textnet::config::{PipelineConfig, Settings};
use textnet::corpus_io::read_corpus;
use textnet::pipeline::load_tokenizer;
use textnet::textnet_core::{
    compute_association, filter_corpus, select_dominant, BuildOptions, DominantTermSet,
    TermFrequencyTable, TextNetwork, TokenizedDocument,
};

pub const GEXF_NS: &str = "http://gexf.net/1.3";
pub const GRAPHML_NS: &str = "http://graphml.graphdrawing.org/xmlns";

pub fn fixture_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures")
}

pub fn golden_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

/// The fixture configuration with paths made absolute.
pub fn fixture_config() -> PipelineConfig {
    let dir = fixture_dir();
    let mut config =
        PipelineConfig::resolve(Settings::load(&dir.join("fixture.toml")).unwrap()).unwrap();
    config.input = config.input.map(|p| dir.join(p));
    config.phrases = config.phrases.map(|p| dir.join(p));
    config
}

/// Intermediate results of the fixture pipeline, computed sequentially.
pub struct FixtureRun {
    pub tokens: Vec<TokenizedDocument>,
    pub counts: TermFrequencyTable,
    pub dominant: DominantTermSet,
    pub graph: TextNetwork,
}

pub fn fixture_run() -> FixtureRun {
    let config = fixture_config();
    let (input, format) = config.input().unwrap();
    let ingested = read_corpus(input, format).unwrap();
    let (docs, _) = filter_corpus(ingested.documents, &config.filter_spec().unwrap());
    let tokenizer = load_tokenizer(&config).unwrap();
    let tokens: Vec<TokenizedDocument> = docs
        .iter()
        .map(|d| tokenizer.tokenize_document(d))
        .collect();
    let counts = textnet::textnet_core::count_terms(&tokens);
    let dominant = select_dominant(&counts, config.min_freq, config.max_terms).unwrap();
    let graph = textnet::textnet_core::build_graph(&tokens, &dominant, BuildOptions::default());
    let graph = compute_association(graph, &counts).unwrap();
    FixtureRun {
        tokens,
        counts,
        dominant,
        graph,
    }
}

/// Runs the `textnet` binary inside `cwd`.
pub fn textnet(cwd: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_textnet"))
        .current_dir(cwd)
        .args(args)
        .output()
        .expect("textnet binary runs")
}

/// Runs the fixture configuration end to end into `out` with extra flags.
pub fn run_fixture(out: &Path, extra: &[&str]) -> Output {
    let out = out.to_str().expect("utf-8 temp path");
    let mut args = vec!["run", "--config", "fixture.toml", "--out", out];
    args.extend_from_slice(extra);
    textnet(&fixture_dir(), &args)
}

pub fn assert_success(output: &Output) {
    assert!(
        output.status.success(),
        "exit {:?}\nstderr: {}",
        output.status.code(),
        String::from_utf8_lossy(&output.stderr)
    );
}

/// All regular files of `dir` by name, with their contents.
pub fn dir_contents(dir: &Path) -> BTreeMap<String, Vec<u8>> {
    std::fs::read_dir(dir)
        .expect("readable directory")
        .map(|e| e.expect("directory entry").path())
        .filter(|p| p.is_file())
        .map(|p| {
            let name = p.file_name().unwrap().to_string_lossy().into_owned();
            (name, std::fs::read(&p).expect("readable file"))
        })
        .collect()
}

fn elements<'a, 'i>(node: Node<'a, 'i>) -> impl Iterator<Item = Node<'a, 'i>> {
    node.children().filter(|c| c.is_element())
}

fn check_ns(node: Node<'_, '_>, ns: &str) -> Result<(), String> {
    if node.tag_name().namespace() != Some(ns) {
        return Err(format!(
            "<{}> is not in namespace {ns}",
            node.tag_name().name()
        ));
    }
    Ok(())
}

fn check_attrs(node: Node<'_, '_>, allowed: &[&str], required: &[&str]) -> Result<(), String> {
    let name = node.tag_name().name();
    for a in node.attributes() {
        if a.namespace().is_none() && !allowed.contains(&a.name()) {
            return Err(format!("<{name}> has unexpected attribute `{}`", a.name()));
        }
    }
    for r in required {
        if node.attribute(*r).is_none() {
            return Err(format!("<{name}> lacks required attribute `{r}`"));
        }
    }
    Ok(())
}

fn check_enum(node: Node<'_, '_>, attr: &str, values: &[&str]) -> Result<(), String> {
    match node.attribute(attr) {
        Some(v) if !values.contains(&v) => Err(format!(
            "<{}> {attr}=\"{v}\" is not one of {values:?}",
            node.tag_name().name()
        )),
        _ => Ok(()),
    }
}

/// Children must appear in the order of `sequence`; each entry gives the
/// element name and its allowed occurrence range.
fn check_sequence(parent: Node<'_, '_>, sequence: &[(&str, usize, usize)]) -> Result<(), String> {
    let children: Vec<Node> = elements(parent).collect();
    let mut i = 0;
    for &(name, min, max) in sequence {
        let mut n = 0;
        while i < children.len() && children[i].tag_name().name() == name {
            i += 1;
            n += 1;
        }
        if n < min || n > max {
            return Err(format!(
                "<{}> has {n} <{name}> children, expected {min}..={max}",
                parent.tag_name().name()
            ));
        }
    }
    if let Some(extra) = children.get(i) {
        return Err(format!(
            "unexpected <{}> inside <{}>",
            extra.tag_name().name(),
            parent.tag_name().name()
        ));
    }
    Ok(())
}

fn check_value(kind: &str, value: &str) -> Result<(), String> {
    let ok = match kind {
        "integer" | "int" | "long" | "short" | "byte" => value.parse::<i64>().is_ok(),
        "biginteger" => value.parse::<i128>().is_ok(),
        "float" | "double" | "bigdecimal" => value.parse::<f64>().is_ok(),
        "boolean" => matches!(value, "true" | "false" | "1" | "0"),
        _ => true,
    };
    if ok {
        Ok(())
    } else {
        Err(format!("value `{value}` is not a valid {kind}"))
    }
}

const GEXF_TYPES: &[&str] = &[
    "integer",
    "long",
    "double",
    "float",
    "boolean",
    "liststring",
    "string",
    "anyURI",
    "short",
    "byte",
    "bigdecimal",
    "biginteger",
    "char",
    "listboolean",
    "listinteger",
    "listlong",
    "listdouble",
    "listfloat",
    "listshort",
    "listbyte",
    "listbigdecimal",
    "listbiginteger",
    "listchar",
];

/// Checks a document against the structural rules of the GEXF 1.3 schema:
/// element nesting and order, attribute names, enumerations, value types,
/// unique ids and resolvable references.
pub fn validate_gexf(text: &str) -> Result<(), String> {
    let doc = Document::parse(text).map_err(|e| format!("not well-formed XML: {e}"))?;
    let root = doc.root_element();
    if root.tag_name().name() != "gexf" {
        return Err("root element is not <gexf>".into());
    }
    check_ns(root, GEXF_NS)?;
    check_attrs(root, &["version", "variant"], &["version"])?;
    if root.attribute("version") != Some("1.3") {
        return Err("gexf version must be 1.3".into());
    }
    for node in root.descendants().filter(|n| n.is_element()) {
        check_ns(node, GEXF_NS)?;
    }
    check_sequence(root, &[("meta", 0, 1), ("graph", 1, 1)])?;
    if let Some(meta) = elements(root).find(|n| n.has_tag_name("meta")) {
        check_attrs(meta, &["lastmodifieddate"], &[])?;
        for c in elements(meta) {
            if !["creator", "keywords", "description"].contains(&c.tag_name().name()) {
                return Err(format!("unexpected <{}> in <meta>", c.tag_name().name()));
            }
        }
    }
    let graph = elements(root)
        .find(|n| n.has_tag_name("graph"))
        .expect("checked above");
    check_attrs(
        graph,
        &[
            "defaultedgetype",
            "mode",
            "idtype",
            "timeformat",
            "timerepresentation",
            "start",
            "end",
            "timezone",
            "startopen",
            "endopen",
        ],
        &[],
    )?;
    check_enum(
        graph,
        "defaultedgetype",
        &["directed", "undirected", "mutual"],
    )?;
    check_enum(graph, "mode", &["static", "dynamic"])?;
    check_enum(graph, "idtype", &["integer", "string"])?;
    check_sequence(
        graph,
        &[
            ("attributes", 0, usize::MAX),
            ("nodes", 0, 1),
            ("edges", 0, 1),
        ],
    )?;

    let mut declared: BTreeMap<(String, String), String> = BTreeMap::new();
    for attrs in elements(graph).filter(|n| n.has_tag_name("attributes")) {
        check_attrs(
            attrs,
            &["class", "mode", "start", "end", "startopen", "endopen"],
            &["class"],
        )?;
        check_enum(attrs, "class", &["node", "edge"])?;
        check_enum(attrs, "mode", &["static", "dynamic"])?;
        check_sequence(attrs, &[("attribute", 0, usize::MAX)])?;
        let class = attrs.attribute("class").unwrap().to_string();
        for a in elements(attrs) {
            check_attrs(a, &["id", "title", "type"], &["id", "title", "type"])?;
            check_enum(a, "type", GEXF_TYPES)?;
            let key = (class.clone(), a.attribute("id").unwrap().to_string());
            if declared
                .insert(key, a.attribute("type").unwrap().to_string())
                .is_some()
            {
                return Err(format!(
                    "attribute id `{}` declared twice",
                    a.attribute("id").unwrap()
                ));
            }
        }
    }

    let check_attvalues = |owner: Node, class: &str| -> Result<(), String> {
        for av in elements(owner).filter(|n| n.has_tag_name("attvalues")) {
            check_sequence(av, &[("attvalue", 0, usize::MAX)])?;
            for v in elements(av) {
                check_attrs(
                    v,
                    &["for", "value", "start", "end", "startopen", "endopen"],
                    &["for", "value"],
                )?;
                let key = (class.to_string(), v.attribute("for").unwrap().to_string());
                let kind = declared.get(&key).ok_or_else(|| {
                    format!(
                        "attvalue refers to undeclared {class} attribute `{}`",
                        key.1
                    )
                })?;
                check_value(kind, v.attribute("value").unwrap())?;
            }
        }
        Ok(())
    };

    let mut node_ids = BTreeSet::new();
    if let Some(nodes) = elements(graph).find(|n| n.has_tag_name("nodes")) {
        check_attrs(nodes, &["count"], &[])?;
        check_sequence(nodes, &[("node", 0, usize::MAX)])?;
        let mut n = 0usize;
        for node in elements(nodes) {
            n += 1;
            check_attrs(node, &["id", "label", "pid", "start", "end"], &["id"])?;
            for c in elements(node) {
                if ![
                    "attvalues",
                    "spells",
                    "nodes",
                    "edges",
                    "parents",
                    "color",
                    "position",
                    "size",
                    "shape",
                ]
                .contains(&c.tag_name().name())
                {
                    return Err(format!("unexpected <{}> in <node>", c.tag_name().name()));
                }
            }
            check_attvalues(node, "node")?;
            if !node_ids.insert(node.attribute("id").unwrap().to_string()) {
                return Err(format!(
                    "duplicate node id `{}`",
                    node.attribute("id").unwrap()
                ));
            }
        }
        if let Some(count) = nodes.attribute("count") {
            if count.parse::<usize>() != Ok(n) {
                return Err("nodes count attribute does not match".into());
            }
        }
    }
    if let Some(edges) = elements(graph).find(|n| n.has_tag_name("edges")) {
        check_attrs(edges, &["count"], &[])?;
        check_sequence(edges, &[("edge", 0, usize::MAX)])?;
        let mut edge_ids = BTreeSet::new();
        for edge in elements(edges) {
            check_attrs(
                edge,
                &[
                    "id", "source", "target", "weight", "type", "kind", "label", "start", "end",
                ],
                &["source", "target"],
            )?;
            check_enum(edge, "type", &["directed", "undirected", "mutual"])?;
            for end in ["source", "target"] {
                let id = edge.attribute(end).unwrap();
                if !node_ids.contains(id) {
                    return Err(format!("edge {end} `{id}` is not a node"));
                }
            }
            if let Some(w) = edge.attribute("weight") {
                check_value("float", w)?;
            }
            if let Some(id) = edge.attribute("id") {
                if !edge_ids.insert(id.to_string()) {
                    return Err(format!("duplicate edge id `{id}`"));
                }
            }
            check_attvalues(edge, "edge")?;
        }
    }
    Ok(())
}

const GRAPHML_FOR: &[&str] = &[
    "all",
    "graphml",
    "graph",
    "node",
    "edge",
    "hyperedge",
    "port",
    "endpoint",
];

fn is_nmtoken(s: &str) -> bool {
    !s.is_empty()
        && s.chars()
            .all(|c| c.is_alphanumeric() || matches!(c, '.' | '-' | '_' | ':' | '\u{B7}'))
}

/// Checks a document against the structural rules of the GraphML schema.
pub fn validate_graphml(text: &str) -> Result<(), String> {
    let doc = Document::parse(text).map_err(|e| format!("not well-formed XML: {e}"))?;
    let root = doc.root_element();
    if root.tag_name().name() != "graphml" {
        return Err("root element is not <graphml>".into());
    }
    for node in root.descendants().filter(|n| n.is_element()) {
        check_ns(node, GRAPHML_NS)?;
    }
    check_sequence(
        root,
        &[
            ("desc", 0, 1),
            ("key", 0, usize::MAX),
            ("graph", 0, usize::MAX),
            ("data", 0, usize::MAX),
        ],
    )?;

    let mut keys: BTreeMap<String, (String, String)> = BTreeMap::new();
    for key in elements(root).filter(|n| n.has_tag_name("key")) {
        check_attrs(key, &["id", "for", "attr.name", "attr.type"], &["id"])?;
        check_enum(key, "for", GRAPHML_FOR)?;
        check_enum(
            key,
            "attr.type",
            &["boolean", "int", "long", "float", "double", "string"],
        )?;
        check_sequence(key, &[("desc", 0, 1), ("default", 0, 1)])?;
        let id = key.attribute("id").unwrap();
        if !is_nmtoken(id) {
            return Err(format!("key id `{id}` is not an NMTOKEN"));
        }
        let entry = (
            key.attribute("for").unwrap_or("all").to_string(),
            key.attribute("attr.type").unwrap_or("string").to_string(),
        );
        if keys.insert(id.to_string(), entry).is_some() {
            return Err(format!("duplicate key id `{id}`"));
        }
    }

    let check_data = |owner: Node, domain: &str| -> Result<(), String> {
        for d in elements(owner).filter(|n| n.has_tag_name("data")) {
            check_attrs(d, &["key", "id"], &["key"])?;
            let k = d.attribute("key").unwrap();
            let (for_, kind) = keys
                .get(k)
                .ok_or_else(|| format!("data refers to undeclared key `{k}`"))?;
            if for_ != domain && for_ != "all" {
                return Err(format!("key `{k}` is for {for_}, used on {domain}"));
            }
            check_value(kind, d.text().unwrap_or("").trim())?;
        }
        Ok(())
    };

    for graph in elements(root).filter(|n| n.has_tag_name("graph")) {
        check_attrs(
            graph,
            &[
                "id",
                "edgedefault",
                "parse.nodeids",
                "parse.edgeids",
                "parse.order",
                "parse.nodes",
                "parse.edges",
                "parse.maxindegree",
                "parse.maxoutdegree",
            ],
            &["edgedefault"],
        )?;
        check_enum(graph, "edgedefault", &["directed", "undirected"])?;
        let children: Vec<Node> = elements(graph).collect();
        let mut seen_item = false;
        for c in &children {
            match c.tag_name().name() {
                "desc" | "data" if !seen_item => {}
                "node" | "edge" | "hyperedge" => seen_item = true,
                other => return Err(format!("unexpected <{other}> in <graph>")),
            }
        }
        check_data(graph, "graph")?;
        let mut node_ids = BTreeSet::new();
        for node in children.iter().filter(|n| n.has_tag_name("node")) {
            check_attrs(*node, &["id"], &["id"])?;
            let id = node.attribute("id").unwrap();
            if !is_nmtoken(id) {
                return Err(format!("node id `{id}` is not an NMTOKEN"));
            }
            if !node_ids.insert(id.to_string()) {
                return Err(format!("duplicate node id `{id}`"));
            }
            for c in elements(*node) {
                if !["desc", "data", "port", "graph", "locator"].contains(&c.tag_name().name()) {
                    return Err(format!("unexpected <{}> in <node>", c.tag_name().name()));
                }
            }
            check_data(*node, "node")?;
        }
        for edge in children.iter().filter(|n| n.has_tag_name("edge")) {
            check_attrs(
                *edge,
                &[
                    "id",
                    "source",
                    "target",
                    "directed",
                    "sourceport",
                    "targetport",
                ],
                &["source", "target"],
            )?;
            for end in ["source", "target"] {
                let id = edge.attribute(end).unwrap();
                if !node_ids.contains(id) {
                    return Err(format!("edge {end} `{id}` is not a node"));
                }
            }
            check_enum(*edge, "directed", &["true", "false"])?;
            for c in elements(*edge) {
                if !["desc", "data", "graph"].contains(&c.tag_name().name()) {
                    return Err(format!("unexpected <{}> in <edge>", c.tag_name().name()));
                }
            }
            check_data(*edge, "edge")?;
        }
    }
    Ok(())
}
