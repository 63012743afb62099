//! Centrality and modularity-based word groups.
//!
//! Modularity of a partition with resolution `γ` is
//!
//! ```text
//! Q = Σ_c [ in_c / 2m − γ (tot_c / 2m)² ]
//! ```
//!
//! where `in_c` is the sum of `A_ij` over ordered node pairs inside `c`
//! (self-loops counted once), `tot_c` the summed strength of `c`, and `m`
//! the total edge weight. Communities are found with the Louvain method.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::graph::TextNetwork;
use crate::{Error, Result};

/// Degree (distinct neighbours) and strength (summed incident weight) per node.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CentralityTable {
    pub degree: BTreeMap<String, usize>,
    pub strength: BTreeMap<String, u64>,
}

impl CentralityTable {
    /// Nodes by strength descending, ties lexicographic.
    pub fn ranked_by_strength(&self) -> Vec<(&str, u64)> {
        let mut v: Vec<_> = self
            .strength
            .iter()
            .map(|(n, s)| (n.as_str(), *s))
            .collect();
        v.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(b.0)));
        v
    }
}

pub fn centrality(graph: &TextNetwork) -> CentralityTable {
    let mut table = CentralityTable::default();
    for node in graph.nodes() {
        table.degree.insert(String::from(node), 0);
        table.strength.insert(String::from(node), 0);
    }
    for (pair, edge) in graph.edges() {
        for end in [pair.a(), pair.b()] {
            *table.degree.get_mut(end).expect("endpoint is a node") += 1;
            *table.strength.get_mut(end).expect("endpoint is a node") += edge.weight;
        }
    }
    table
}

/// Node to community assignment with its modularity.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Partition {
    /// Community ids are dense, `0..c`, numbered in order of each
    /// community's lexicographically smallest member.
    pub assignment: BTreeMap<String, usize>,
    pub q: f64,
    pub resolution: f64,
    pub seed: u64,
}

impl Partition {
    pub fn community_count(&self) -> usize {
        self.assignment.values().max().map_or(0, |&c| c + 1)
    }

    /// Members of each community, in lexicographic order.
    pub fn communities(&self) -> Vec<Vec<&str>> {
        let mut groups = vec![Vec::new(); self.community_count()];
        for (node, &c) in &self.assignment {
            groups[c].push(node.as_str());
        }
        groups
    }
}

fn check_resolution(resolution: f64) -> Result<()> {
    if resolution.is_finite() && resolution > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name: "resolution",
            reason: "must be a finite positive number",
        })
    }
}

/// Weighted modularity of `assignment` on `graph`.
pub fn modularity(
    graph: &TextNetwork,
    assignment: &BTreeMap<String, usize>,
    resolution: f64,
) -> Result<f64> {
    check_resolution(resolution)?;
    let level = LevelGraph::from_network(graph);
    if level.total_weight <= 0.0 {
        return Err(Error::UndefinedModularity);
    }
    let (names, _) = graph.adjacency();
    let mut communities = Vec::with_capacity(names.len());
    for name in &names {
        let c = assignment.get(*name).ok_or_else(|| {
            Error::InconsistentNodes(alloc::format!("node `{name}` has no community"))
        })?;
        communities.push(*c);
    }
    Ok(level.modularity(&communities, resolution))
}

/// One node of an aggregation level: neighbours and a self-loop.
#[derive(Debug, Clone)]
struct LevelGraph {
    adj: Vec<Vec<(usize, f64)>>,
    /// `A_ii`; an aggregated community's internal weight counted twice.
    self_loop: Vec<f64>,
    strength: Vec<f64>,
    /// m
    total_weight: f64,
}

impl LevelGraph {
    fn from_network(graph: &TextNetwork) -> Self {
        let (_, adj) = graph.adjacency();
        let adj: Vec<Vec<(usize, f64)>> = adj
            .into_iter()
            .map(|l| l.into_iter().map(|(j, w)| (j, w as f64)).collect())
            .collect();
        let n = adj.len();
        Self::with_loops(adj, vec![0.0; n])
    }

    fn with_loops(adj: Vec<Vec<(usize, f64)>>, self_loop: Vec<f64>) -> Self {
        let strength: Vec<f64> = adj
            .iter()
            .zip(&self_loop)
            .map(|(l, s)| s + l.iter().map(|(_, w)| w).sum::<f64>())
            .collect();
        let total_weight = strength.iter().sum::<f64>() / 2.0;
        LevelGraph {
            adj,
            self_loop,
            strength,
            total_weight,
        }
    }

    fn len(&self) -> usize {
        self.adj.len()
    }

    fn modularity(&self, community: &[usize], resolution: f64) -> f64 {
        let m2 = 2.0 * self.total_weight;
        let n_comm = community.iter().max().map_or(0, |&c| c + 1);
        let mut inside = vec![0.0; n_comm];
        let mut total = vec![0.0; n_comm];
        for i in 0..self.len() {
            let c = community[i];
            total[c] += self.strength[i];
            inside[c] += self.self_loop[i];
            for &(j, w) in &self.adj[i] {
                if community[j] == c {
                    inside[c] += w;
                }
            }
        }
        inside
            .iter()
            .zip(&total)
            .map(|(i, t)| i / m2 - resolution * (t / m2) * (t / m2))
            .sum()
    }

    /// Collapses each community into one node.
    fn aggregate(&self, community: &[usize], n_comm: usize) -> LevelGraph {
        let mut self_loop = vec![0.0; n_comm];
        let mut links: Vec<BTreeMap<usize, f64>> = vec![BTreeMap::new(); n_comm];
        for i in 0..self.len() {
            let ci = community[i];
            self_loop[ci] += self.self_loop[i];
            for &(j, w) in &self.adj[i] {
                let cj = community[j];
                if ci == cj {
                    self_loop[ci] += w;
                } else {
                    *links[ci].entry(cj).or_insert(0.0) += w;
                }
            }
        }
        let adj = links.into_iter().map(|m| m.into_iter().collect()).collect();
        LevelGraph::with_loops(adj, self_loop)
    }
}

/// Gains below this are treated as zero, and gains closer than this as ties.
const GAIN_EPSILON: f64 = 1e-12;

/// What happened at one recorded point of a Louvain run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TraceEvent {
    /// Start of a level, before any move.
    LevelStart,
    /// A node changed community.
    Move,
    /// Communities were collapsed into the next level's nodes.
    Aggregate,
}

/// Modularity recomputed from scratch on the current level graph.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceStep {
    pub level: usize,
    pub event: TraceEvent,
    pub q: f64,
}

/// Louvain community detection.
///
/// The seed shuffles the first level's node visit order once; aggregated
/// levels visit super-nodes in id order. A node moves to the neighbouring
/// community with the largest positive modularity gain, ties going to the
/// smallest community id. Local moves repeat until a full pass moves
/// nothing; communities are then aggregated and the process repeats until a
/// level makes no move.
pub fn detect_communities(graph: &TextNetwork, resolution: f64, seed: u64) -> Result<Partition> {
    louvain(graph, resolution, seed, None)
}

/// Like [`detect_communities`], additionally recording the modularity after
/// every move and aggregation.
pub fn detect_communities_traced(
    graph: &TextNetwork,
    resolution: f64,
    seed: u64,
) -> Result<(Partition, Vec<TraceStep>)> {
    let mut trace = Vec::new();
    let p = louvain(graph, resolution, seed, Some(&mut trace))?;
    Ok((p, trace))
}

fn louvain(
    graph: &TextNetwork,
    resolution: f64,
    seed: u64,
    mut trace: Option<&mut Vec<TraceStep>>,
) -> Result<Partition> {
    check_resolution(resolution)?;
    let mut level_graph = LevelGraph::from_network(graph);
    if level_graph.total_weight <= 0.0 {
        return Err(Error::UndefinedModularity);
    }
    let n = level_graph.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));

    // original node -> node of the current level
    let mut node_of: Vec<usize> = (0..n).collect();
    let mut level = 0;
    loop {
        let (community, moved) = local_moves(
            &level_graph,
            &order,
            resolution,
            level,
            trace.as_deref_mut(),
        );
        if !moved {
            break;
        }
        let (community, n_comm) = renumber(&community);
        for v in node_of.iter_mut() {
            *v = community[*v];
        }
        level_graph = level_graph.aggregate(&community, n_comm);
        level += 1;
        if let Some(t) = trace.as_deref_mut() {
            let singletons: Vec<usize> = (0..n_comm).collect();
            t.push(TraceStep {
                level,
                event: TraceEvent::Aggregate,
                q: level_graph.modularity(&singletons, resolution),
            });
        }
        order = (0..n_comm).collect();
    }

    let (final_ids, _) = renumber(&node_of);
    let (names, _) = graph.adjacency();
    let assignment: BTreeMap<String, usize> = names
        .iter()
        .zip(&final_ids)
        .map(|(name, &c)| (String::from(*name), c))
        .collect();
    let q = LevelGraph::from_network(graph).modularity(&final_ids, resolution);
    Ok(Partition {
        assignment,
        q,
        resolution,
        seed,
    })
}

/// Dense ids in order of first appearance.
fn renumber(community: &[usize]) -> (Vec<usize>, usize) {
    let mut map: BTreeMap<usize, usize> = BTreeMap::new();
    let ids = community
        .iter()
        .map(|c| {
            let next = map.len();
            *map.entry(*c).or_insert(next)
        })
        .collect();
    (ids, map.len())
}

/// One level of local moves, starting from singletons. Returns the
/// community of each node and whether anything moved.
fn local_moves(
    g: &LevelGraph,
    order: &[usize],
    resolution: f64,
    level: usize,
    mut trace: Option<&mut Vec<TraceStep>>,
) -> (Vec<usize>, bool) {
    let n = g.len();
    let m = g.total_weight;
    let mut community: Vec<usize> = (0..n).collect();
    let mut total: Vec<f64> = g.strength.clone();
    let mut link = vec![0.0; n];
    let mut touched: Vec<usize> = Vec::new();
    let mut moved_any = false;

    if let Some(t) = trace.as_deref_mut() {
        t.push(TraceStep {
            level,
            event: TraceEvent::LevelStart,
            q: g.modularity(&community, resolution),
        });
    }

    loop {
        let mut moved = false;
        for &i in order {
            let k = g.strength[i];
            if k == 0.0 {
                continue;
            }
            let own = community[i];
            for &(j, w) in &g.adj[i] {
                let c = community[j];
                if link[c] == 0.0 {
                    touched.push(c);
                }
                link[c] += w;
            }
            total[own] -= k;
            let remove_cost = -link[own] / m + resolution * total[own] * k / (2.0 * m * m);
            touched.sort_unstable();

            let mut best = own;
            let mut best_gain = 0.0;
            for &c in &touched {
                if c == own {
                    continue;
                }
                let gain = remove_cost + link[c] / m - resolution * total[c] * k / (2.0 * m * m);
                if gain > best_gain + GAIN_EPSILON {
                    best = c;
                    best_gain = gain;
                }
            }
            for &c in &touched {
                link[c] = 0.0;
            }
            touched.clear();

            total[best] += k;
            if best != own {
                community[i] = best;
                moved = true;
                if let Some(t) = trace.as_deref_mut() {
                    t.push(TraceStep {
                        level,
                        event: TraceEvent::Move,
                        q: g.modularity(&community, resolution),
                    });
                }
            }
        }
        if !moved {
            break;
        }
        moved_any = true;
    }
    (community, moved_any)
}
