//! The weighted word co-occurrence network.
//!
//! Two dominant terms are linked when they appear in the same document. Each
//! document adds exactly 1 to the weight of every pair of distinct dominant
//! terms it contains, however often the terms repeat inside it.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::stats::{DominantTermSet, TermFrequencyTable};
use crate::tokenize::TokenizedDocument;
use crate::{Error, Result};

/// Per node, `(neighbor index, weight)` entries.
pub type AdjacencyLists = Vec<Vec<(usize, u64)>>;

/// Unordered term pair in canonical form (`a < b`).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct WordPair {
    a: String,
    b: String,
}

impl WordPair {
    /// Canonicalizes the pair; `None` for a self-pair.
    pub fn new(x: impl Into<String>, y: impl Into<String>) -> Option<Self> {
        let (x, y) = (x.into(), y.into());
        match x.cmp(&y) {
            Ordering::Less => Some(WordPair { a: x, b: y }),
            Ordering::Greater => Some(WordPair { a: y, b: x }),
            Ordering::Equal => None,
        }
    }

    pub fn a(&self) -> &str {
        &self.a
    }

    pub fn b(&self) -> &str {
        &self.b
    }

    pub fn contains(&self, term: &str) -> bool {
        self.a == term || self.b == term
    }
}

impl core::fmt::Display for WordPair {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(f, "{}-{}", self.a, self.b)
    }
}

/// Document-level association-rule measures of one edge.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AssociationMetrics {
    pub support: f64,
    /// P(b | a) = weight / df(a)
    pub confidence_ab: f64,
    /// P(a | b) = weight / df(b)
    pub confidence_ba: f64,
    pub lift: f64,
}

impl AssociationMetrics {
    pub fn compute(weight: u64, df_a: u64, df_b: u64, n_docs: u64) -> Self {
        let (w, da, db, n) = (weight as f64, df_a as f64, df_b as f64, n_docs as f64);
        AssociationMetrics {
            support: w / n,
            confidence_ab: w / da,
            confidence_ba: w / db,
            lift: (w * n) / (da * db),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge {
    pub weight: u64,
    pub metrics: Option<AssociationMetrics>,
}

impl Edge {
    fn new(weight: u64) -> Self {
        Edge {
            weight,
            metrics: None,
        }
    }
}

/// Undirected weighted co-occurrence graph over dominant terms.
///
/// Nodes iterate in lexicographic order and edges in canonical pair order.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct TextNetwork {
    nodes: BTreeSet<String>,
    edges: BTreeMap<WordPair, Edge>,
    n_docs: u64,
}

impl TextNetwork {
    pub fn empty(n_docs: u64) -> Self {
        TextNetwork {
            n_docs,
            ..Default::default()
        }
    }

    /// Builds a network from a prebuilt edge list. Endpoints become nodes;
    /// `isolated` adds nodes without edges.
    pub fn from_edges<I, S, T>(n_docs: u64, edges: I, isolated: &[&str]) -> Result<Self>
    where
        I: IntoIterator<Item = (S, T, u64)>,
        S: Into<String>,
        T: Into<String>,
    {
        let mut net = TextNetwork::empty(n_docs);
        for (x, y, weight) in edges {
            let (x, y) = (x.into(), y.into());
            let invalid = |reason| Error::InvalidEdge {
                a: x.clone(),
                b: y.clone(),
                reason,
            };
            if weight == 0 || weight > n_docs {
                return Err(invalid("weight must be in 1..=n_docs"));
            }
            let pair = WordPair::new(x.clone(), y.clone()).ok_or_else(|| invalid("self-loop"))?;
            if net.edges.contains_key(&pair) {
                return Err(invalid("duplicate edge"));
            }
            net.nodes.insert(pair.a.clone());
            net.nodes.insert(pair.b.clone());
            net.edges.insert(pair, Edge::new(weight));
        }
        for node in isolated {
            net.nodes.insert(String::from(*node));
        }
        Ok(net)
    }

    pub fn n_docs(&self) -> u64 {
        self.n_docs
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> impl ExactSizeIterator<Item = &str> + Clone {
        self.nodes.iter().map(String::as_str)
    }

    pub fn contains_node(&self, node: &str) -> bool {
        self.nodes.contains(node)
    }

    pub fn edges(&self) -> impl ExactSizeIterator<Item = (&WordPair, &Edge)> {
        self.edges.iter()
    }

    /// Edge weight, looked up in either argument order.
    pub fn weight(&self, x: &str, y: &str) -> Option<u64> {
        let pair = WordPair::new(x, y)?;
        self.edges.get(&pair).map(|e| e.weight)
    }

    pub fn edge(&self, x: &str, y: &str) -> Option<&Edge> {
        self.edges.get(&WordPair::new(x, y)?)
    }

    pub fn total_weight(&self) -> u64 {
        self.edges.values().map(|e| e.weight).sum()
    }

    /// Sum of the weights of edges incident to `node`.
    pub fn strength(&self, node: &str) -> u64 {
        self.edges
            .iter()
            .filter(|(p, _)| p.contains(node))
            .map(|(_, e)| e.weight)
            .sum()
    }

    /// Sums edge weights and document counts of two networks built over
    /// disjoint document chunks. Association metrics are dropped.
    pub fn merge(&mut self, other: TextNetwork) {
        self.n_docs += other.n_docs;
        self.nodes.extend(other.nodes);
        for (pair, edge) in other.edges {
            self.edges.entry(pair).or_insert(Edge::new(0)).weight += edge.weight;
        }
        for edge in self.edges.values_mut() {
            edge.metrics = None;
        }
    }

    /// Drops edges lighter than `min_weight`, and nodes left without edges
    /// unless `keep_isolated`.
    pub fn prune(&mut self, min_weight: u64, keep_isolated: bool) {
        if min_weight <= 1 {
            return;
        }
        self.edges.retain(|_, e| e.weight >= min_weight);
        if !keep_isolated {
            let mut linked = BTreeSet::new();
            for pair in self.edges.keys() {
                linked.insert(pair.a.as_str());
                linked.insert(pair.b.as_str());
            }
            let linked: BTreeSet<String> = linked.into_iter().map(String::from).collect();
            self.nodes = linked;
        }
    }

    /// Copy of the network without association metrics.
    pub fn without_metrics(&self) -> TextNetwork {
        let mut net = self.clone();
        for edge in net.edges.values_mut() {
            edge.metrics = None;
        }
        net
    }

    /// Dense node indices in lexicographic order, and adjacency lists
    /// `(neighbor, weight)` sorted by neighbor.
    pub fn adjacency(&self) -> (Vec<&str>, AdjacencyLists) {
        let names: Vec<&str> = self.nodes().collect();
        let index = |name: &str| {
            names
                .binary_search(&name)
                .expect("edge endpoints are nodes")
        };
        let mut adj = vec![Vec::new(); names.len()];
        for (pair, edge) in &self.edges {
            let (i, j) = (index(&pair.a), index(&pair.b));
            adj[i].push((j, edge.weight));
            adj[j].push((i, edge.weight));
        }
        for list in &mut adj {
            list.sort_unstable_by_key(|&(j, _)| j);
        }
        (names, adj)
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct BuildOptions {
    /// Keep dominant terms that co-occur with no other dominant term.
    pub keep_isolated: bool,
}

// dense upper-triangular storage up to this many pairs
const DENSE_PAIR_LIMIT: usize = 1 << 22;

// slot of (i, j), i < j, is triangular_row(n, i) + (j - i - 1)
fn triangular_row(n: usize, i: usize) -> usize {
    i * n - i * (i + 1) / 2
}

#[derive(Debug, Clone)]
enum PairCounts {
    Dense(Vec<u64>),
    Sparse(BTreeMap<(u32, u32), u64>),
}

/// Incremental pair counter over a fixed dominant-term set.
///
/// Counters fed with disjoint document chunks can be merged; the merged
/// counter finishes into the same network as a single pass.
#[derive(Debug, Clone)]
pub struct CooccurrenceCounter {
    terms: Vec<String>,
    counts: PairCounts,
    present: Vec<bool>,
    n_docs: u64,
    scratch: Vec<u32>,
}

impl CooccurrenceCounter {
    pub fn new(dominant: &DominantTermSet) -> Self {
        let mut terms = dominant.terms.clone();
        terms.sort_unstable();
        terms.dedup();
        let n = terms.len();
        let pairs = n * n.saturating_sub(1) / 2;
        let counts = if pairs <= DENSE_PAIR_LIMIT {
            PairCounts::Dense(vec![0; pairs])
        } else {
            PairCounts::Sparse(BTreeMap::new())
        };
        CooccurrenceCounter {
            present: vec![false; n],
            terms,
            counts,
            n_docs: 0,
            scratch: Vec::new(),
        }
    }

    pub fn add_document<S: AsRef<str>>(&mut self, tokens: &[S]) {
        self.n_docs += 1;
        let mut ids = core::mem::take(&mut self.scratch);
        ids.clear();
        ids.extend(tokens.iter().filter_map(|t| {
            self.terms
                .binary_search_by(|x| x.as_str().cmp(t.as_ref()))
                .ok()
                .map(|i| i as u32)
        }));
        ids.sort_unstable();
        ids.dedup();
        for &i in &ids {
            self.present[i as usize] = true;
        }
        let n = self.terms.len();
        match &mut self.counts {
            PairCounts::Dense(v) => {
                for (k, &i) in ids.iter().enumerate() {
                    let (i, row) = (i as usize, triangular_row(n, i as usize));
                    for &j in &ids[k + 1..] {
                        v[row + j as usize - i - 1] += 1;
                    }
                }
            }
            PairCounts::Sparse(m) => {
                for (k, &i) in ids.iter().enumerate() {
                    for &j in &ids[k + 1..] {
                        *m.entry((i, j)).or_insert(0) += 1;
                    }
                }
            }
        }
        self.scratch = ids;
    }

    /// Adds another counter's counts. Both must share the dominant set.
    pub fn merge(&mut self, other: CooccurrenceCounter) -> Result<()> {
        if self.terms != other.terms {
            return Err(Error::InconsistentNodes(String::from(
                "co-occurrence counters built over different dominant sets",
            )));
        }
        self.n_docs += other.n_docs;
        for (p, q) in self.present.iter_mut().zip(other.present) {
            *p |= q;
        }
        match (&mut self.counts, other.counts) {
            (PairCounts::Dense(a), PairCounts::Dense(b)) => {
                for (x, y) in a.iter_mut().zip(b) {
                    *x += y;
                }
            }
            (PairCounts::Sparse(a), PairCounts::Sparse(b)) => {
                for (k, v) in b {
                    *a.entry(k).or_insert(0) += v;
                }
            }
            _ => unreachable!("storage depends only on the dominant set"),
        }
        Ok(())
    }

    pub fn n_docs(&self) -> u64 {
        self.n_docs
    }

    pub fn finish(self, options: BuildOptions) -> TextNetwork {
        let mut net = TextNetwork::empty(self.n_docs);
        let mut add = |i: usize, j: usize, w: u64| {
            if w > 0 {
                let pair = WordPair {
                    a: self.terms[i].clone(),
                    b: self.terms[j].clone(),
                };
                net.nodes.insert(pair.a.clone());
                net.nodes.insert(pair.b.clone());
                net.edges.insert(pair, Edge::new(w));
            }
        };
        match &self.counts {
            PairCounts::Dense(v) => {
                let n = self.terms.len();
                let mut s = 0;
                for i in 0..n {
                    for j in i + 1..n {
                        add(i, j, v[s]);
                        s += 1;
                    }
                }
            }
            PairCounts::Sparse(m) => {
                for (&(i, j), &w) in m {
                    add(i as usize, j as usize, w);
                }
            }
        }
        if options.keep_isolated {
            net.nodes.extend(self.terms);
        }
        net
    }
}

/// Builds the co-occurrence network of `docs` restricted to the dominant set.
pub fn build_graph(
    docs: &[TokenizedDocument],
    dominant: &DominantTermSet,
    options: BuildOptions,
) -> TextNetwork {
    let mut counter = CooccurrenceCounter::new(dominant);
    for doc in docs {
        counter.add_document(&doc.tokens);
    }
    counter.finish(options)
}

/// Fills support, confidence and lift for every edge from document
/// frequencies in `table` and the network's document count.
pub fn compute_association(
    mut graph: TextNetwork,
    table: &TermFrequencyTable,
) -> Result<TextNetwork> {
    for node in &graph.nodes {
        if table.get(node).is_none() {
            return Err(Error::MissingTerm(node.clone()));
        }
    }
    let n_docs = graph.n_docs;
    for (pair, edge) in graph.edges.iter_mut() {
        let df_a = table.get(&pair.a).map_or(0, |c| c.df);
        let df_b = table.get(&pair.b).map_or(0, |c| c.df);
        edge.metrics = Some(AssociationMetrics::compute(edge.weight, df_a, df_b, n_docs));
    }
    Ok(graph)
}

/// Edge order used by every ranked listing: weight descending, then pair ascending.
pub fn edge_order(a: (&WordPair, u64), b: (&WordPair, u64)) -> Ordering {
    b.1.cmp(&a.1).then_with(|| a.0.cmp(b.0))
}

/// All edges in ranked order.
pub fn ranked_edges(graph: &TextNetwork) -> Vec<(&WordPair, &Edge)> {
    let mut v: Vec<_> = graph.edges().collect();
    v.sort_by(|x, y| edge_order((x.0, x.1.weight), (y.0, y.1.weight)));
    v
}

/// The `k` heaviest edges, ties broken by canonical pair order.
pub fn top_pairs(graph: &TextNetwork, k: usize) -> Vec<(WordPair, u64)> {
    ranked_edges(graph)
        .into_iter()
        .take(k)
        .map(|(p, e)| (p.clone(), e.weight))
        .collect()
}
