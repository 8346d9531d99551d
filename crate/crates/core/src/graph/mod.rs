//! Attributed-graph data model, preprocessing and graph linear algebra.

mod container;
mod tu;

pub use container::{read_container, write_container};
pub use tu::load_tu_dataset;

use crate::error::{Error, Result};
use crate::linalg::{Csr, Matrix};

/// Undirected weighted graph with one real feature row per node and an
/// optional class label. Edges are stored once per pair with `u < v`.
#[derive(Debug, Clone, PartialEq)]
pub struct AttributedGraph {
    n: usize,
    edges: Vec<(usize, usize, f64)>,
    features: Matrix,
    label: Option<usize>,
}

impl AttributedGraph {
    /// Validating constructor. Rejects self-loops, out-of-range endpoints,
    /// duplicate pairs, non-positive weights and non-finite features.
    pub fn new(
        n: usize,
        edges: Vec<(usize, usize, f64)>,
        features: Matrix,
        label: Option<usize>,
    ) -> Result<Self> {
        if n == 0 {
            return Err(Error::Argument("graph must have at least one node".into()));
        }
        if features.rows != n {
            return Err(Error::Shape(format!(
                "feature matrix has {} rows for {} nodes",
                features.rows, n
            )));
        }
        if features.cols == 0 {
            return Err(Error::Argument("feature dimension must be at least 1".into()));
        }
        if !features.is_finite() {
            return Err(Error::Numerical("non-finite node feature".into()));
        }
        let mut canon: Vec<(usize, usize, f64)> = Vec::with_capacity(edges.len());
        for (u, v, w) in edges {
            if u == v {
                return Err(Error::Argument(format!("self-loop at node {u}")));
            }
            if u >= n || v >= n {
                return Err(Error::Argument(format!(
                    "edge ({u},{v}) out of range for {n} nodes"
                )));
            }
            if !(w > 0.0) || !w.is_finite() {
                return Err(Error::Argument(format!("edge ({u},{v}) has weight {w}")));
            }
            canon.push((u.min(v), u.max(v), w));
        }
        canon.sort_by(|a, b| (a.0, a.1).cmp(&(b.0, b.1)));
        for pair in canon.windows(2) {
            if pair[0].0 == pair[1].0 && pair[0].1 == pair[1].1 {
                return Err(Error::Argument(format!(
                    "duplicate undirected edge ({}, {})",
                    pair[0].0, pair[0].1
                )));
            }
        }
        Ok(AttributedGraph { n, edges: canon, features, label })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(usize, usize, f64)] {
        &self.edges
    }

    pub fn features(&self) -> &Matrix {
        &self.features
    }

    pub fn label(&self) -> Option<usize> {
        self.label
    }

    pub fn set_label(&mut self, label: Option<usize>) {
        self.label = label;
    }

    /// Replace the feature matrix; the row count must stay `n`.
    pub fn set_features(&mut self, features: Matrix) -> Result<()> {
        if features.rows != self.n {
            return Err(Error::Shape(format!(
                "feature matrix has {} rows for {} nodes",
                features.rows, self.n
            )));
        }
        if !features.is_finite() {
            return Err(Error::Numerical("non-finite node feature".into()));
        }
        self.features = features;
        Ok(())
    }

    /// Weighted degree per node (sum of incident weights, no self-loop).
    pub fn degrees(&self) -> Vec<f64> {
        let mut d = vec![0.0; self.n];
        for &(u, v, w) in &self.edges {
            d[u] += w;
            d[v] += w;
        }
        d
    }

    /// Symmetric sparse adjacency with both (u,v) and (v,u) entries.
    pub fn adjacency(&self) -> Csr {
        let mut triplets = Vec::with_capacity(self.edges.len() * 2);
        for &(u, v, w) in &self.edges {
            triplets.push((u, v, w));
            triplets.push((v, u, w));
        }
        Csr::from_triplets(self.n, self.n, &triplets)
    }

    /// Normalized adjacency `D^{-1/2} (A + I) D^{-1/2}` where `D` is the
    /// degree matrix of `A + I`. Isolated nodes get degree 1 from the
    /// added self-loop.
    pub fn normalized_adjacency(&self) -> Csr {
        let mut deg = vec![1.0f64; self.n];
        for &(u, v, w) in &self.edges {
            deg[u] += w;
            deg[v] += w;
        }
        let inv_sqrt: Vec<f64> = deg.iter().map(|d| 1.0 / d.sqrt()).collect();
        let mut triplets = Vec::with_capacity(self.edges.len() * 2 + self.n);
        for i in 0..self.n {
            triplets.push((i, i, inv_sqrt[i] * inv_sqrt[i]));
        }
        for &(u, v, w) in &self.edges {
            let val = w * inv_sqrt[u] * inv_sqrt[v];
            triplets.push((u, v, val));
            triplets.push((v, u, val));
        }
        Csr::from_triplets(self.n, self.n, &triplets)
    }

    /// Combinatorial Laplacian `L = D - A`.
    pub fn laplacian(&self) -> Csr {
        let deg = self.degrees();
        let mut triplets = Vec::with_capacity(self.edges.len() * 2 + self.n);
        for (i, &d) in deg.iter().enumerate() {
            triplets.push((i, i, d));
        }
        for &(u, v, w) in &self.edges {
            triplets.push((u, v, -w));
            triplets.push((v, u, -w));
        }
        Csr::from_triplets(self.n, self.n, &triplets)
    }

    /// Apply a node permutation: node `u` of `self` becomes `perm[u]`.
    pub fn permute(&self, perm: &[usize]) -> Result<AttributedGraph> {
        if perm.len() != self.n {
            return Err(Error::Argument("permutation length mismatch".into()));
        }
        let edges = self
            .edges
            .iter()
            .map(|&(u, v, w)| (perm[u], perm[v], w))
            .collect();
        let mut features = Matrix::zeros(self.n, self.features.cols);
        for u in 0..self.n {
            features.row_mut(perm[u]).copy_from_slice(self.features.row(u));
        }
        AttributedGraph::new(self.n, edges, features, self.label)
    }
}

/// How node features were obtained during ingestion.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FeatureKind {
    Continuous,
    OneHotLabel,
    DegreeFallback,
}

#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct DatasetMeta {
    pub name: String,
    pub num_classes: usize,
    pub feature_dim: usize,
    pub feature_kind: FeatureKind,
    /// Width of the leading continuous-attribute block inside `features`
    /// (0 when features are one-hot labels or degrees). Standardization
    /// touches only these columns.
    pub continuous_dim: usize,
}

/// A loaded dataset: graphs plus shared metadata.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub graphs: Vec<AttributedGraph>,
    pub meta: DatasetMeta,
}

impl Dataset {
    pub fn len(&self) -> usize {
        self.graphs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.graphs.is_empty()
    }

    pub fn labels(&self) -> Vec<Option<usize>> {
        self.graphs.iter().map(|g| g.label()).collect()
    }
}

/// Standardize the continuous feature columns to dataset-wide mean 0 and
/// standard deviation 1. Zero-variance columns are left at 0. One-hot and
/// degree features are untouched.
pub fn normalize_features(dataset: &mut Dataset) {
    let cols = dataset.meta.continuous_dim;
    if cols == 0 {
        return;
    }
    let mut count = 0usize;
    let mut sum = vec![0.0f64; cols];
    for g in &dataset.graphs {
        let f = g.features();
        for r in 0..f.rows {
            let row = f.row(r);
            for c in 0..cols {
                sum[c] += row[c];
            }
        }
        count += f.rows;
    }
    let mean: Vec<f64> = sum.iter().map(|s| s / count as f64).collect();
    let mut var = vec![0.0f64; cols];
    for g in &dataset.graphs {
        let f = g.features();
        for r in 0..f.rows {
            let row = f.row(r);
            for c in 0..cols {
                let d = row[c] - mean[c];
                var[c] += d * d;
            }
        }
    }
    let std: Vec<f64> = var.iter().map(|v| (v / count as f64).sqrt()).collect();
    for g in dataset.graphs.iter_mut() {
        let mut f = g.features().clone();
        for r in 0..f.rows {
            let row = f.row_mut(r);
            for c in 0..cols {
                row[c] = if std[c] > 0.0 {
                    (row[c] - mean[c]) / std[c]
                } else {
                    0.0
                };
            }
        }
        g.set_features(f).expect("same shape");
    }
}
