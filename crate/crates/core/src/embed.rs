//! Feature matrices and the all-sources quantum walk embedding.

use std::fmt::{self, Write as _};
use std::str::FromStr;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::qwalk::{evolve_collect, ArcSpace, WalkParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FeatureKind {
    /// Sum over all source nodes.
    Aggregated,
    /// Trajectory of a single source node (internal index).
    Source(usize),
    /// Dense embedding from a classical baseline.
    Baseline,
}

impl fmt::Display for FeatureKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Aggregated => f.write_str("aggregated"),
            Self::Source(v) => write!(f, "source:{v}"),
            Self::Baseline => f.write_str("baseline"),
        }
    }
}

impl FromStr for FeatureKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "aggregated" => Ok(Self::Aggregated),
            "baseline" => Ok(Self::Baseline),
            _ => s
                .strip_prefix("source:")
                .and_then(|v| v.parse().ok())
                .map(Self::Source)
                .ok_or_else(|| format!("unknown kind {s:?}")),
        }
    }
}

/// Dense row-major `N x t` matrix with one row per node.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureMatrix {
    node_ids: Vec<u64>,
    cols: usize,
    values: Vec<f64>,
    kind: FeatureKind,
    params: Option<WalkParams>,
}

impl FeatureMatrix {
    pub fn zeros(node_ids: Vec<u64>, cols: usize, kind: FeatureKind, params: Option<WalkParams>) -> Self {
        let values = vec![0.0; node_ids.len() * cols];
        Self {
            node_ids,
            cols,
            values,
            kind,
            params,
        }
    }

    pub fn from_rows(
        node_ids: Vec<u64>,
        cols: usize,
        values: Vec<f64>,
        kind: FeatureKind,
        params: Option<WalkParams>,
    ) -> Result<Self> {
        if values.len() != node_ids.len() * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} values for {} rows x {cols} columns",
                values.len(),
                node_ids.len()
            )));
        }
        Ok(Self {
            node_ids,
            cols,
            values,
            kind,
            params,
        })
    }

    pub fn rows(&self) -> usize {
        self.node_ids.len()
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn kind(&self) -> FeatureKind {
        self.kind
    }

    pub fn params(&self) -> Option<WalkParams> {
        self.params
    }

    pub fn node_ids(&self) -> &[u64] {
        &self.node_ids
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.values[row * self.cols + col]
    }

    pub fn set(&mut self, row: usize, col: usize, value: f64) {
        self.values[row * self.cols + col] = value;
    }

    pub fn row(&self, row: usize) -> &[f64] {
        &self.values[row * self.cols..(row + 1) * self.cols]
    }

    pub fn column_sums(&self) -> Vec<f64> {
        let mut sums = vec![0.0; self.cols];
        for row in self.values.chunks_exact(self.cols.max(1)) {
            for (s, v) in sums.iter_mut().zip(row) {
                *s += v;
            }
        }
        sums
    }

    fn accumulate(&mut self, other: &FeatureMatrix) {
        for (a, b) in self.values.iter_mut().zip(&other.values) {
            *a += b;
        }
    }

    pub fn write_csv<W: std::io::Write>(&self, mut sink: W) -> Result<()> {
        let fmt_param = |p: Option<f64>| p.map_or_else(|| "none".to_string(), |v| v.to_string());
        writeln!(
            sink,
            "# qwalkvec N={} t={} wp={} wq={} kind={}",
            self.rows(),
            self.cols,
            fmt_param(self.params.map(|p| p.wp())),
            fmt_param(self.params.map(|p| p.wq())),
            self.kind
        )?;
        let mut line = String::new();
        for (r, id) in self.node_ids.iter().enumerate() {
            line.clear();
            let _ = write!(line, "{id}");
            for v in self.row(r) {
                let _ = write!(line, ",{v:.16e}");
            }
            writeln!(sink, "{line}")?;
        }
        Ok(())
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("ascii output")
    }
}

fn header_error(message: impl Into<String>) -> Error {
    Error::Parse {
        line: 1,
        message: message.into(),
    }
}

/// Parses the CSV written by [`FeatureMatrix::write_csv`].
pub fn read_embedding(text: &str) -> Result<FeatureMatrix> {
    let mut lines = text.lines().enumerate();
    let (_, header) = lines.next().ok_or_else(|| header_error("empty embedding file"))?;
    let fields = header
        .strip_prefix("# qwalkvec ")
        .ok_or_else(|| header_error("missing '# qwalkvec' header"))?;
    let mut n = None;
    let mut t = None;
    let mut wp = None;
    let mut wq = None;
    let mut kind = None;
    for field in fields.split_whitespace() {
        let (key, value) = field
            .split_once('=')
            .ok_or_else(|| header_error(format!("malformed header field {field:?}")))?;
        let bad = || header_error(format!("bad value for {key}: {value:?}"));
        let param = |v: &str| -> Result<Option<f64>> {
            if v == "none" {
                Ok(None)
            } else {
                v.parse().map(Some).map_err(|_| bad())
            }
        };
        match key {
            "N" => n = Some(value.parse::<usize>().map_err(|_| bad())?),
            "t" => t = Some(value.parse::<usize>().map_err(|_| bad())?),
            "wp" => wp = param(value)?,
            "wq" => wq = param(value)?,
            "kind" => kind = Some(value.parse::<FeatureKind>().map_err(header_error)?),
            _ => return Err(header_error(format!("unknown header field {key:?}"))),
        }
    }
    let n = n.ok_or_else(|| header_error("header lacks N"))?;
    let t = t.ok_or_else(|| header_error("header lacks t"))?;
    let kind = kind.ok_or_else(|| header_error("header lacks kind"))?;
    let params = match (wp, wq) {
        (Some(wp), Some(wq)) => Some(WalkParams::new(wp, wq, t)?),
        _ => None,
    };

    let mut node_ids = Vec::with_capacity(n);
    let mut values = Vec::with_capacity(n * t);
    for (i, line) in lines {
        if line.trim().is_empty() {
            continue;
        }
        let number = i + 1;
        let mut cells = line.split(',');
        let id = cells
            .next()
            .and_then(|c| c.trim().parse::<u64>().ok())
            .ok_or_else(|| Error::Parse {
                line: number,
                message: "bad node id".into(),
            })?;
        let before = values.len();
        for cell in cells {
            let v: f64 = cell.trim().parse().map_err(|_| Error::Parse {
                line: number,
                message: format!("bad value {cell:?}"),
            })?;
            values.push(v);
        }
        if values.len() - before != t {
            return Err(Error::DimensionMismatch(format!(
                "line {number}: expected {t} values, found {}",
                values.len() - before
            )));
        }
        node_ids.push(id);
    }
    if node_ids.len() != n {
        return Err(Error::DimensionMismatch(format!(
            "header says N={n}, file has {} rows",
            node_ids.len()
        )));
    }
    FeatureMatrix::from_rows(node_ids, t, values, kind, params)
}

/// Sum of the per-source probability trajectories over every source node
/// with at least one neighbor.
///
/// Sources run in parallel; their matrices are added in ascending source
/// order so the result does not depend on scheduling.
pub fn qwalkvec(graph: &Graph, params: &WalkParams) -> Result<FeatureMatrix> {
    let arcs = ArcSpace::new(graph);
    if arcs.active_node_count() == 0 {
        return Err(Error::NoArcs);
    }
    let sources: Vec<usize> = (0..graph.node_count()).filter(|&v| graph.degree(v) > 0).collect();
    let mut total = FeatureMatrix::zeros(
        graph.original_ids().to_vec(),
        params.steps(),
        FeatureKind::Aggregated,
        Some(*params),
    );
    let chunk = (rayon::current_num_threads() * 2).max(1);
    for batch in sources.chunks(chunk) {
        let runs: Vec<FeatureMatrix> = batch
            .par_iter()
            .map(|&v| evolve_collect(graph, &arcs, v, params))
            .collect::<Result<_>>()?;
        for run in &runs {
            total.accumulate(run);
        }
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn k2_embedding_is_all_ones() {
        let g = Graph::from_edges(2, [(0, 1)]).unwrap();
        for (wp, wq) in [(1.0, 1.0), (0.25, 4.0), (2.0, 0.5)] {
            let phi = qwalkvec(&g, &WalkParams::new(wp, wq, 3).unwrap()).unwrap();
            assert_eq!((phi.rows(), phi.cols()), (2, 3));
            assert!(phi.values().iter().all(|&v| (v - 1.0).abs() < 1e-12));
        }
    }

    #[test]
    fn column_sums_equal_active_nodes() {
        let g = Graph::from_edges(7, [(0, 1), (1, 2), (2, 0), (2, 3), (3, 4), (5, 6)]).unwrap();
        let phi = qwalkvec(&g, &WalkParams::new(0.5, 2.0, 30).unwrap()).unwrap();
        for s in phi.column_sums() {
            assert!((s - 7.0).abs() < 1e-9);
        }
        assert!(phi.values().iter().all(|&v| v >= 0.0));
    }

    #[test]
    fn isolated_rows_are_zero() {
        let g = Graph::from_edges(4, [(0, 1), (1, 2)]).unwrap();
        let phi = qwalkvec(&g, &WalkParams::new(1.0, 2.0, 5).unwrap()).unwrap();
        assert!(phi.row(3).iter().all(|&v| v == 0.0));
        for s in phi.column_sums() {
            assert!((s - 3.0).abs() < 1e-9);
        }
    }

    #[test]
    fn csv_round_trip_is_exact() {
        let g = Graph::from_edges(5, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 0), (0, 2)]).unwrap();
        let phi = qwalkvec(&g, &WalkParams::new(0.25, 4.0, 12).unwrap()).unwrap();
        let text = phi.to_csv_string();
        assert!(text.starts_with("# qwalkvec N=5 t=12 wp=0.25 wq=4 kind=aggregated\n"));
        let back = read_embedding(&text).unwrap();
        assert_eq!(back, phi);
        assert!(back
            .values()
            .iter()
            .zip(phi.values())
            .all(|(a, b)| a.to_bits() == b.to_bits()));
    }

    #[test]
    fn baseline_header() {
        let m = FeatureMatrix::from_rows(vec![3, 9], 2, vec![0.5, -1.0, 2.0, 1e-300], FeatureKind::Baseline, None)
            .unwrap();
        let text = m.to_csv_string();
        assert!(text.starts_with("# qwalkvec N=2 t=2 wp=none wq=none kind=baseline\n"));
        assert_eq!(read_embedding(&text).unwrap(), m);
    }

    #[test]
    fn row_count_mismatch_rejected() {
        let text = "# qwalkvec N=3 t=2 wp=1 wq=1 kind=aggregated\n0,1,2\n1,3,4\n";
        assert!(matches!(read_embedding(text), Err(Error::DimensionMismatch(_))));
        let text = "# qwalkvec N=1 t=2 wp=1 wq=1 kind=source:4\n0,1\n";
        assert!(matches!(read_embedding(text), Err(Error::DimensionMismatch(_))));
        let text = "# qwalkvec N=1 t=1 wp=1 wq=1 kind=sideways\n0,1\n";
        assert!(matches!(read_embedding(text), Err(Error::Parse { .. })));
        assert!(read_embedding("0,1,2\n").is_err());
    }
}
