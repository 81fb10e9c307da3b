//! Labeled undirected graphs and breadth-first distances.

use std::collections::{HashMap, VecDeque};
use std::fmt::Write as _;

use crate::error::{Error, Result};

/// Lines dropped while canonicalizing an edge list.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct LoadReport {
    pub self_loops: usize,
    pub duplicate_edges: usize,
}

/// Immutable simple undirected graph in compressed adjacency form.
///
/// Nodes are `0..N`; the ids they carried in the input file are kept in a
/// side table so results can be written back with the caller's ids.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    offsets: Vec<usize>,
    neighbors: Vec<usize>,
    original_ids: Vec<u64>,
    edge_count: usize,
    report: LoadReport,
}

impl Graph {
    /// Builds a graph on nodes `0..node_count`, dropping self-loops and
    /// repeated edges. Original ids are the node indices themselves.
    pub fn from_edges<I>(node_count: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let ids = (0..node_count as u64).collect();
        Self::build(ids, edges)
    }

    fn build<I>(original_ids: Vec<u64>, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let n = original_ids.len();
        let mut adjacency: Vec<Vec<usize>> = vec![Vec::new(); n];
        let mut report = LoadReport::default();
        for (u, v) in edges {
            if u >= n {
                return Err(Error::NodeOutOfRange(u));
            }
            if v >= n {
                return Err(Error::NodeOutOfRange(v));
            }
            if u == v {
                report.self_loops += 1;
                continue;
            }
            adjacency[u].push(v);
            adjacency[v].push(u);
        }

        let mut offsets = Vec::with_capacity(n + 1);
        let mut neighbors = Vec::new();
        offsets.push(0);
        for list in &mut adjacency {
            list.sort_unstable();
            let before = list.len();
            list.dedup();
            // each duplicate edge shows up once in both endpoint lists
            report.duplicate_edges += before - list.len();
            neighbors.extend_from_slice(list);
            offsets.push(neighbors.len());
        }
        report.duplicate_edges /= 2;

        let edge_count = neighbors.len() / 2;
        Ok(Self {
            offsets,
            neighbors,
            original_ids,
            edge_count,
            report,
        })
    }

    pub fn node_count(&self) -> usize {
        self.original_ids.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    /// Sorted neighbor list of `node`.
    pub fn neighbors(&self, node: usize) -> &[usize] {
        &self.neighbors[self.offsets[node]..self.offsets[node + 1]]
    }

    pub fn degree(&self, node: usize) -> usize {
        self.offsets[node + 1] - self.offsets[node]
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.neighbors(a).binary_search(&b).is_ok()
    }

    /// Number of nodes with at least one neighbor.
    pub fn active_node_count(&self) -> usize {
        (0..self.node_count()).filter(|&i| self.degree(i) > 0).count()
    }

    pub fn original_id(&self, node: usize) -> u64 {
        self.original_ids[node]
    }

    pub fn original_ids(&self) -> &[u64] {
        &self.original_ids
    }

    pub fn index_of(&self, original: u64) -> Option<usize> {
        self.original_ids.iter().position(|&id| id == original)
    }

    pub fn load_report(&self) -> LoadReport {
        self.report
    }

    /// Writes every edge once using original ids.
    ///
    /// Edges are ordered so that each node first appears in index order, so
    /// reloading the output with [`load_edge_list`] gives back the same node
    /// numbering and adjacency. Nodes that cannot be introduced by an edge
    /// (isolated nodes, or nodes whose smaller neighbors all come later) are
    /// declared with a self-loop line.
    pub fn to_edge_list(&self) -> String {
        let n = self.node_count();
        let mut introduced = vec![false; n];
        let mut lead: Vec<(usize, usize)> = Vec::new();
        for k in 0..n {
            if introduced[k] {
                continue;
            }
            let neighbors = self.neighbors(k);
            match neighbors.iter().find(|&&j| introduced[j]) {
                Some(&j) => lead.push((j, k)),
                None if neighbors.first() == Some(&(k + 1)) => {
                    lead.push((k, k + 1));
                    introduced[k + 1] = true;
                }
                // a self-loop line declares the node and is dropped on load
                None => lead.push((k, k)),
            }
            introduced[k] = true;
        }
        let mut lead_keys: Vec<(usize, usize)> = lead
            .iter()
            .filter(|(a, b)| a != b)
            .map(|&(a, b)| (a.min(b), a.max(b)))
            .collect();
        lead_keys.sort_unstable();

        let mut out = String::new();
        let mut emit = |a: usize, b: usize| {
            let _ = writeln!(out, "{} {}", self.original_ids[a], self.original_ids[b]);
        };
        for &(a, b) in &lead {
            emit(a, b);
        }
        for u in 0..n {
            for &v in self.neighbors(u).iter().filter(|&&v| v > u) {
                if lead_keys.binary_search(&(u, v)).is_err() {
                    emit(u, v);
                }
            }
        }
        out
    }
}

fn parse_line(line: &str, number: usize) -> Result<Option<(u64, u64)>> {
    let trimmed = line.trim();
    if trimmed.is_empty() || trimmed.starts_with('#') {
        return Ok(None);
    }
    let mut tokens = trimmed.split_whitespace();
    let mut field = |what: &str| -> Result<u64> {
        let token = tokens.next().ok_or_else(|| Error::Parse {
            line: number,
            message: format!("missing {what}"),
        })?;
        token.parse().map_err(|_| Error::Parse {
            line: number,
            message: format!("invalid {what} {token:?}"),
        })
    };
    let a = field("first field")?;
    let b = field("second field")?;
    if let Some(extra) = tokens.next() {
        return Err(Error::Parse {
            line: number,
            message: format!("unexpected token {extra:?}"),
        });
    }
    Ok(Some((a, b)))
}

/// Parses a whitespace-separated edge list.
///
/// Node ids are remapped to `0..N` in order of first appearance. Self-loops
/// and repeated edges are dropped and counted in [`Graph::load_report`].
pub fn load_edge_list(text: &str) -> Result<Graph> {
    let mut index: HashMap<u64, usize> = HashMap::new();
    let mut original_ids = Vec::new();
    let mut edges = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let Some((a, b)) = parse_line(line, i + 1)? else {
            continue;
        };
        let mut intern = |id: u64| {
            *index.entry(id).or_insert_with(|| {
                original_ids.push(id);
                original_ids.len() - 1
            })
        };
        let u = intern(a);
        let v = intern(b);
        edges.push((u, v));
    }
    let graph = Graph::build(original_ids, edges)?;
    if graph.edge_count() == 0 {
        return Err(Error::EmptyGraph);
    }
    let report = graph.load_report();
    if report.self_loops > 0 || report.duplicate_edges > 0 {
        log::warn!(
            "edge list: dropped {} self-loop(s) and {} duplicate edge(s)",
            report.self_loops,
            report.duplicate_edges
        );
    }
    Ok(graph)
}

/// One class label per node, densified to `0..M`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabelMap {
    labels: Vec<usize>,
    label_count: usize,
}

impl LabelMap {
    pub fn new(labels: Vec<usize>) -> Result<Self> {
        let label_count = labels.iter().max().map_or(0, |&m| m + 1);
        if label_count < 2 {
            return Err(Error::Labels("at least two distinct labels required".into()));
        }
        let mut seen = vec![false; label_count];
        for &l in &labels {
            seen[l] = true;
        }
        if let Some(gap) = seen.iter().position(|&s| !s) {
            return Err(Error::Labels(format!("label {gap} is never used")));
        }
        Ok(Self {
            labels,
            label_count,
        })
    }

    /// Parses `node label` lines for the given node ids (in row order).
    /// Label values are densified in ascending numeric order.
    pub fn parse_for_nodes(text: &str, node_ids: &[u64]) -> Result<Self> {
        let index: HashMap<u64, usize> = node_ids.iter().enumerate().map(|(i, &id)| (id, i)).collect();
        let mut raw: Vec<Option<u64>> = vec![None; node_ids.len()];
        for (i, line) in text.lines().enumerate() {
            let Some((node, label)) = parse_line(line, i + 1)? else {
                continue;
            };
            let Some(&row) = index.get(&node) else {
                return Err(Error::Labels(format!("line {}: unknown node {node}", i + 1)));
            };
            if raw[row].replace(label).is_some() {
                return Err(Error::Labels(format!("line {}: node {node} labeled twice", i + 1)));
            }
        }
        if let Some(row) = raw.iter().position(Option::is_none) {
            return Err(Error::Labels(format!("node {} has no label", node_ids[row])));
        }
        let raw: Vec<u64> = raw.into_iter().flatten().collect();
        let mut values = raw.clone();
        values.sort_unstable();
        values.dedup();
        let labels = raw
            .iter()
            .map(|l| values.binary_search(l).expect("value collected above"))
            .collect();
        Self::new(labels)
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn label(&self, node: usize) -> usize {
        self.labels[node]
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn label_count(&self) -> usize {
        self.label_count
    }
}

/// Parses a label file against the graph's original node ids.
pub fn load_labels(text: &str, graph: &Graph) -> Result<LabelMap> {
    LabelMap::parse_for_nodes(text, graph.original_ids())
}

/// Breadth-first hop counts from one source; `None` marks unreachable nodes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistanceVector {
    source: usize,
    dist: Vec<Option<usize>>,
}

impl DistanceVector {
    pub fn source(&self) -> usize {
        self.source
    }

    pub fn get(&self, node: usize) -> Option<usize> {
        self.dist[node]
    }

    pub fn as_slice(&self) -> &[Option<usize>] {
        &self.dist
    }
}

pub fn bfs_distances(graph: &Graph, source: usize) -> Result<DistanceVector> {
    if source >= graph.node_count() {
        return Err(Error::NodeOutOfRange(source));
    }
    let mut dist = vec![None; graph.node_count()];
    dist[source] = Some(0);
    let mut queue = VecDeque::from([source]);
    while let Some(u) = queue.pop_front() {
        let next = dist[u].map(|d| d + 1);
        for &v in graph.neighbors(u) {
            if dist[v].is_none() {
                dist[v] = next;
                queue.push_back(v);
            }
        }
    }
    Ok(DistanceVector { source, dist })
}
