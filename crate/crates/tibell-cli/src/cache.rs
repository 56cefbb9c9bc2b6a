//! Error-set cache: one text file per graph, keyed by a hash of the sorted
//! edge list, so per-N vertex queries cost O(1) in N after the first build.
//! The directory comes from TIBELL_CACHE_DIR (default ".tibell-cache").

use std::collections::BTreeMap;
use std::path::PathBuf;

use sha2::Digest;
use tibell::graph::{DiGraph, IntMatrix, SimpleCycle};
use tibell::verts::{ErrorSet, GraphErrorSets};

pub fn cache_dir() -> PathBuf {
    std::env::var_os("TIBELL_CACHE_DIR")
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(".tibell-cache"))
}

/// Canonical graph key: hash of "n" plus the sorted edge list.
pub fn graph_key(g: &DiGraph) -> String {
    let mut h = sha2::Sha256::new();
    h.update(format!("{};", g.node_count()));
    for (i, j) in g.edges() {
        h.update(format!("{i},{j};"));
    }
    format!("{:x}", h.finalize())
}

fn serialize(es: &GraphErrorSets) -> String {
    let g = &es.graph;
    let n = g.node_count();
    let mut out = String::from("tibell-errorsets v1\n");
    out.push_str(&format!("n {} edges {}\n", n, g.edge_count()));
    for (i, j) in g.edges() {
        out.push_str(&format!("{i} {j}\n"));
    }
    out.push_str(&format!("min-valid-n {}\n", es.min_valid_n));
    out.push_str(&format!("cycles {}\n", es.cycles.len()));
    for c in &es.cycles {
        let nodes: Vec<String> = c.nodes().iter().map(|v| v.to_string()).collect();
        out.push_str(&format!("cycle {}\n", nodes.join(" ")));
    }
    for ((ci, r), set) in &es.sets {
        out.push_str(&format!("set {ci} {r} {}\n", set.members.len()));
        for m in &set.members {
            let entries: Vec<String> = m.entries().iter().map(|x| x.to_string()).collect();
            out.push_str(&format!("member {}\n", entries.join(" ")));
        }
    }
    out
}

fn deserialize(text: &str) -> Option<GraphErrorSets> {
    let mut lines = text.lines();
    if lines.next()? != "tibell-errorsets v1" {
        return None;
    }
    let header = lines.next()?;
    let mut it = header.split_whitespace();
    it.next()?; // "n"
    let n: usize = it.next()?.parse().ok()?;
    it.next()?; // "edges"
    let e: usize = it.next()?.parse().ok()?;
    let mut edges = Vec::with_capacity(e);
    for _ in 0..e {
        let line = lines.next()?;
        let mut it = line.split_whitespace();
        edges.push((it.next()?.parse().ok()?, it.next()?.parse().ok()?));
    }
    let graph = DiGraph::new(n, edges);
    let min_valid_n: usize = lines.next()?.strip_prefix("min-valid-n ")?.parse().ok()?;
    let ncycles: usize = lines.next()?.strip_prefix("cycles ")?.parse().ok()?;
    let mut cycles = Vec::with_capacity(ncycles);
    for _ in 0..ncycles {
        let nodes: Vec<usize> = lines
            .next()?
            .strip_prefix("cycle ")?
            .split_whitespace()
            .map(|t| t.parse().ok())
            .collect::<Option<_>>()?;
        cycles.push(SimpleCycle::new(nodes));
    }
    let mut sets = BTreeMap::new();
    loop {
        let Some(line) = lines.next() else { break };
        if line.trim().is_empty() {
            continue;
        }
        let rest = line.strip_prefix("set ")?;
        let mut it = rest.split_whitespace();
        let ci: usize = it.next()?.parse().ok()?;
        let r: usize = it.next()?.parse().ok()?;
        let count: usize = it.next()?.parse().ok()?;
        let mut members = Vec::with_capacity(count);
        for _ in 0..count {
            let entries: Vec<i64> = lines
                .next()?
                .strip_prefix("member ")?
                .split_whitespace()
                .map(|t| t.parse().ok())
                .collect::<Option<_>>()?;
            if entries.len() != n * n {
                return None;
            }
            members.push(IntMatrix::from_entries(n, entries));
        }
        sets.insert((ci, r), ErrorSet { cycle: cycles.get(ci)?.clone(), residue: r, members });
    }
    Some(GraphErrorSets { graph, cycles, sets, min_valid_n })
}

/// Loads cached error sets for the graph, or builds and persists them.
pub fn load_or_build(g: &DiGraph, rebuild: bool) -> GraphErrorSets {
    let dir = cache_dir();
    let path = dir.join(format!("{}.errorsets", graph_key(g)));
    if !rebuild {
        if let Ok(text) = std::fs::read_to_string(&path) {
            if let Some(es) = deserialize(&text) {
                if es.graph == *g {
                    return es;
                }
            }
        }
    }
    let es = tibell::verts::compute_error_sets(g);
    if std::fs::create_dir_all(&dir).is_ok() {
        let _ = std::fs::write(&path, serialize(&es));
    }
    es
}
