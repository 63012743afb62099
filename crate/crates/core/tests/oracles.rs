//! Implementations checked against independent brute-force oracles.

use std::collections::{BTreeMap, HashMap, HashSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use textnet_core::{
    build_graph, centrality, compute_association, count_terms, detect_communities,
    emit_wordcloud_data, modularity, normalize, select_dominant, tokenize, top_pairs, BuildOptions,
    PhraseDictionary, StopwordList, TermCounts, TermFrequencyTable, TextNetwork, TokenizedDocument,
};

fn docs_from(raw: &[Vec<String>]) -> Vec<TokenizedDocument> {
    raw.iter()
        .enumerate()
        .map(|(i, t)| TokenizedDocument {
            doc_id: i.to_string(),
            tokens: t.clone(),
        })
        .collect()
}

fn random_corpus(
    rng: &mut ChaCha8Rng,
    n_docs: usize,
    vocab: usize,
    max_len: usize,
) -> Vec<Vec<String>> {
    (0..n_docs)
        .map(|_| {
            let len = rng.random_range(0..=max_len);
            (0..len)
                .map(|_| format!("w{:02}", rng.random_range(0..vocab)))
                .collect()
        })
        .collect()
}

/// Reference tokenizer working character by character, with a linear scan
/// over every dictionary entry at each position.
fn reference_tokenize(text: &str, entries: &[(&str, &str)], stops: &[&str]) -> Vec<String> {
    let mut words: Vec<String> = Vec::new();
    let mut cur = String::new();
    for ch in text.chars() {
        if ch == ' ' {
            if !cur.is_empty() {
                words.push(std::mem::take(&mut cur));
            }
        } else {
            cur.push(ch);
        }
    }
    if !cur.is_empty() {
        words.push(cur);
    }
    let phrases: Vec<(Vec<&str>, &str)> = entries
        .iter()
        .map(|(s, c)| (s.split(' ').collect(), *c))
        .collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < words.len() {
        let mut best: Option<(usize, &str)> = None;
        for (ws, canon) in &phrases {
            let fits = i + ws.len() <= words.len()
                && ws.iter().enumerate().all(|(k, w)| words[i + k] == *w);
            if fits && best.is_none_or(|(l, _)| ws.len() > l) {
                best = Some((ws.len(), canon));
            }
        }
        match best {
            Some((l, canon)) => {
                out.push(canon.to_string());
                i += l;
            }
            None => {
                out.push(words[i].clone());
                i += 1;
            }
        }
    }
    out.retain(|t| !stops.contains(&t.as_str()));
    out
}

#[test]
fn tokenizer_matches_reference_on_random_sentences() {
    let entries = [
        ("museum bank indonesia", "museum_bank_indonesia"),
        ("bank indonesia", "bank_indonesia"),
        ("museum angkut", "museum_angkut"),
        ("gunung bromo", "gunung_bromo"),
        ("candi borobudur", "candi_borobudur"),
        ("danau toba", "danau_toba"),
        ("toba", "danau_toba"),
    ];
    let stops = ["di", "yang", "dan", "ke", "the"];
    let vocab = [
        "Museum",
        "bank",
        "INDONESIA",
        "angkut",
        "di",
        "yang",
        "dan",
        "foto",
        "Gunung",
        "bromo",
        "candi",
        "borobudur",
        "danau",
        "toba",
        "kuliner",
        "#sunrise",
        "@budi",
        "http://t.co/a",
        "keren!",
        "the",
        "ke",
        "2017",
    ];
    let phrases = PhraseDictionary::from_entries(entries).unwrap();
    let stoplist = StopwordList::from_words(stops).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..500 {
        let len = rng.random_range(0..15);
        let sentence: Vec<&str> = (0..len)
            .map(|_| vocab[rng.random_range(0..vocab.len())])
            .collect();
        let text = normalize(&sentence.join(" "));
        assert_eq!(
            tokenize(&text, &phrases, &stoplist),
            reference_tokenize(&text, &entries, &stops),
            "{text}"
        );
    }
}

#[test]
fn term_counts_match_single_pass_counter() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let raw = random_corpus(&mut rng, 1000, 80, 12);
    let table = count_terms(&docs_from(&raw));
    let mut tf: HashMap<&str, u64> = HashMap::new();
    let mut df: HashMap<&str, u64> = HashMap::new();
    for d in &raw {
        let mut seen = HashSet::new();
        for t in d {
            *tf.entry(t).or_default() += 1;
            if seen.insert(t) {
                *df.entry(t).or_default() += 1;
            }
        }
    }
    assert_eq!(table.n_docs(), 1000);
    assert_eq!(table.len(), tf.len());
    for (term, c) in table.iter() {
        assert_eq!(
            c,
            TermCounts {
                tf: tf[term],
                df: df[term]
            }
        );
    }
}

fn random_table(rng: &mut ChaCha8Rng, n: usize) -> TermFrequencyTable {
    let entries: Vec<(String, TermCounts)> = (0..n)
        .map(|i| {
            let tf = rng.random_range(1..200);
            (format!("t{i:05}"), TermCounts { tf, df: 1 })
        })
        .collect();
    TermFrequencyTable::from_entries(1, entries).unwrap()
}

fn sorted_oracle(table: &TermFrequencyTable) -> Vec<(String, u64)> {
    let mut all: Vec<(String, u64)> = table.iter().map(|(t, c)| (t.to_string(), c.tf)).collect();
    all.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));
    all
}

#[test]
fn dominant_selection_matches_sort_then_filter() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let table = random_table(&mut rng, 10_000);
    let oracle = sorted_oracle(&table);
    for (min_freq, cap) in [(1, 10_000), (50, 150), (150, 100_000), (199, 3)] {
        let expected: Vec<String> = oracle
            .iter()
            .filter(|(_, tf)| *tf >= min_freq)
            .take(cap)
            .map(|(t, _)| t.clone())
            .collect();
        assert_eq!(
            select_dominant(&table, min_freq, cap).unwrap().terms,
            expected
        );
    }
}

#[test]
fn wordcloud_matches_full_sort() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let table = random_table(&mut rng, 10_000);
    let oracle = sorted_oracle(&table);
    assert_eq!(emit_wordcloud_data(&table, 100), oracle[..100]);
}

#[test]
fn graph_matches_pair_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let raw = random_corpus(&mut rng, 1000, 50, 10);
    let docs = docs_from(&raw);
    let dominant = select_dominant(&count_terms(&docs), 1, 1000).unwrap();
    let graph = build_graph(&docs, &dominant, BuildOptions::default());

    let mut oracle: BTreeMap<(String, String), u64> = BTreeMap::new();
    for d in &raw {
        let mut present: Vec<&String> = d.iter().collect();
        present.sort();
        present.dedup();
        for i in 0..present.len() {
            for j in i + 1..present.len() {
                *oracle
                    .entry((present[i].clone(), present[j].clone()))
                    .or_default() += 1;
            }
        }
    }
    let got: BTreeMap<(String, String), u64> = graph
        .edges()
        .map(|(p, e)| ((p.a().to_string(), p.b().to_string()), e.weight))
        .collect();
    assert_eq!(got, oracle);
}

#[test]
fn association_matches_recomputation_from_documents() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let raw = random_corpus(&mut rng, 60, 12, 5);
    let docs = docs_from(&raw);
    let table = count_terms(&docs);
    let dominant = select_dominant(&table, 1, 8).unwrap();
    let graph = compute_association(
        build_graph(&docs, &dominant, BuildOptions::default()),
        &table,
    )
    .unwrap();
    let n = raw.len() as f64;
    for (pair, edge) in graph.edges() {
        let has = |d: &Vec<String>, t: &str| d.iter().any(|x| x == t);
        let both = raw
            .iter()
            .filter(|d| has(d, pair.a()) && has(d, pair.b()))
            .count() as f64;
        let da = raw.iter().filter(|d| has(d, pair.a())).count() as f64;
        let db = raw.iter().filter(|d| has(d, pair.b())).count() as f64;
        let m = edge.metrics.unwrap();
        assert!((m.support - both / n).abs() < 1e-12);
        assert!((m.confidence_ab - both / da).abs() < 1e-12);
        assert!((m.confidence_ba - both / db).abs() < 1e-12);
        assert!((m.lift - (both / n) / ((da / n) * (db / n))).abs() < 1e-9);
        assert!(
            m.support > 0.0 && m.support <= 1.0 && m.confidence_ab <= 1.0 && m.confidence_ba <= 1.0
        );
    }
}

#[test]
fn top_pairs_match_full_sort_on_random_edges() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut edges: BTreeMap<(String, String), u64> = BTreeMap::new();
    while edges.len() < 200 {
        let (x, y) = (rng.random_range(0..40), rng.random_range(0..40));
        if x < y {
            edges.insert(
                (format!("n{x:02}"), format!("n{y:02}")),
                rng.random_range(1..20),
            );
        }
    }
    let graph = TextNetwork::from_edges(
        100,
        edges.iter().map(|((a, b), w)| (a.clone(), b.clone(), *w)),
        &[],
    )
    .unwrap();
    let mut oracle: Vec<((String, String), u64)> = edges.into_iter().collect();
    oracle.sort_by(|x, y| y.1.cmp(&x.1).then(x.0.cmp(&y.0)));
    let got: Vec<((String, String), u64)> = top_pairs(&graph, 10)
        .into_iter()
        .map(|(p, w)| ((p.a().to_string(), p.b().to_string()), w))
        .collect();
    assert_eq!(got, oracle[..10]);
}

#[test]
fn centrality_matches_adjacency_rescan() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut edges: BTreeMap<(usize, usize), u64> = BTreeMap::new();
    for _ in 0..2000 {
        let (x, y) = (rng.random_range(0..500), rng.random_range(0..500));
        if x != y {
            edges.insert((x.min(y), x.max(y)), rng.random_range(1..10));
        }
    }
    let name = |i: usize| format!("v{i:03}");
    let graph = TextNetwork::from_edges(
        1000,
        edges.iter().map(|(&(a, b), &w)| (name(a), name(b), w)),
        &[],
    )
    .unwrap();
    let table = centrality(&graph);
    for node in graph.nodes() {
        let mut degree = 0;
        let mut strength = 0;
        for (&(a, b), &w) in &edges {
            if name(a) == node || name(b) == node {
                degree += 1;
                strength += w;
            }
        }
        assert_eq!(table.degree[node], degree);
        assert_eq!(table.strength[node], strength);
        assert_eq!(graph.strength(node), strength);
    }
    assert_eq!(table.degree.values().sum::<usize>(), 2 * graph.edge_count());
    assert_eq!(
        table.strength.values().sum::<u64>(),
        2 * graph.total_weight()
    );
}

/// All set partitions of `n` items as restricted growth strings.
fn all_partitions(n: usize) -> Vec<Vec<usize>> {
    fn rec(cur: &mut Vec<usize>, n: usize, max: usize, out: &mut Vec<Vec<usize>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for c in 0..=max + 1 {
            if cur.is_empty() && c > 0 {
                break;
            }
            cur.push(c);
            rec(cur, n, if cur.len() == 1 { 0 } else { max.max(c) }, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if n > 0 {
        rec(&mut Vec::new(), n, 0, &mut out);
    }
    out
}

/// Modularity straight from the definition over all ordered node pairs.
fn oracle_modularity(graph: &TextNetwork, labels: &[usize]) -> f64 {
    let names: Vec<&str> = graph.nodes().collect();
    let m = graph.total_weight() as f64;
    let k: Vec<f64> = names.iter().map(|n| graph.strength(n) as f64).collect();
    let mut q = 0.0;
    for i in 0..names.len() {
        for j in 0..names.len() {
            if labels[i] == labels[j] {
                let a = graph.weight(names[i], names[j]).unwrap_or(0) as f64;
                q += a - k[i] * k[j] / (2.0 * m);
            }
        }
    }
    q / (2.0 * m)
}

fn exhaustive_optimum(graph: &TextNetwork) -> (f64, Vec<usize>) {
    all_partitions(graph.node_count())
        .into_iter()
        .map(|p| (oracle_modularity(graph, &p), p))
        .fold((f64::NEG_INFINITY, vec![]), |best, cur| {
            if cur.0 > best.0 + 1e-12 {
                cur
            } else {
                best
            }
        })
}

#[test]
fn bell_numbers() {
    assert_eq!(all_partitions(4).len(), 15);
    assert_eq!(all_partitions(6).len(), 203);
}

#[test]
fn louvain_finds_exhaustive_optimum_on_small_graphs() {
    let two_triangles = TextNetwork::from_edges(
        10,
        [
            ("a", "b", 1),
            ("b", "c", 1),
            ("a", "c", 1),
            ("d", "e", 1),
            ("e", "f", 1),
            ("d", "f", 1),
        ],
        &[],
    )
    .unwrap();
    let (best, labels) = exhaustive_optimum(&two_triangles);
    assert!((best - 0.5).abs() < 1e-12);
    assert_eq!(labels, [0, 0, 0, 1, 1, 1]);
    let p = detect_communities(&two_triangles, 1.0, 99).unwrap();
    assert!((p.q - best).abs() < 1e-12);
    assert_eq!(p.community_count(), 2);

    let edge = TextNetwork::from_edges(1, [("a", "b", 1)], &[]).unwrap();
    let (best, labels) = exhaustive_optimum(&edge);
    assert_eq!(labels, [0, 0]);
    assert!(best.abs() < 1e-12);
    let singleton: BTreeMap<String, usize> = [("a".to_string(), 0), ("b".to_string(), 1)].into();
    assert!((modularity(&edge, &singleton, 1.0).unwrap() + 0.5).abs() < 1e-12);

    let k4 = TextNetwork::from_edges(
        1,
        [
            ("a", "b", 1),
            ("a", "c", 1),
            ("a", "d", 1),
            ("b", "c", 1),
            ("b", "d", 1),
            ("c", "d", 1),
        ],
        &[],
    )
    .unwrap();
    let (best, labels) = exhaustive_optimum(&k4);
    assert_eq!(labels, [0, 0, 0, 0]);
    assert!(best.abs() < 1e-12);
    assert_eq!(
        detect_communities(&k4, 1.0, 5).unwrap().community_count(),
        1
    );
}

#[test]
fn modularity_matches_pairwise_definition() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for _ in 0..30 {
        let n = rng.random_range(3..9);
        let mut edges = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                if rng.random_bool(0.5) {
                    edges.push((format!("n{i}"), format!("n{j}"), rng.random_range(1..7)));
                }
            }
        }
        if edges.is_empty() {
            continue;
        }
        let graph = TextNetwork::from_edges(100, edges, &[]).unwrap();
        let labels: Vec<usize> = (0..graph.node_count())
            .map(|_| rng.random_range(0..3))
            .collect();
        let assignment: BTreeMap<String, usize> = graph
            .nodes()
            .map(String::from)
            .zip(labels.iter().copied())
            .collect();
        let q = modularity(&graph, &assignment, 1.0).unwrap();
        assert!((q - oracle_modularity(&graph, &labels)).abs() < 1e-12);
    }
}
