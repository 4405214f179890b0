//! Simple connected graphs, integer weight vectors over the vertex set, and
//! the Cartan form a^T A b.

use std::fmt;

use serde::Deserialize;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GraphError {
    #[error("graph has no vertices")]
    Empty,
    #[error("duplicate vertex {0:?}")]
    DuplicateVertex(String),
    #[error("unknown vertex {0:?} in edge list")]
    UnknownVertex(String),
    #[error("loop at vertex {0:?}")]
    Loop(String),
    #[error("duplicate edge {0:?}-{1:?}")]
    DuplicateEdge(String, String),
    #[error("graph is not connected")]
    Disconnected,
    #[error("vertex index {0} out of range")]
    BadIndex(usize),
    #[error("malformed graph document: {0}")]
    Json(String),
}

/// Integer vector indexed by the vertices of a fixed graph. Orders
/// lexicographically, which fixes every word- and weight-ordering convention
/// in the crate.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct WeightVec(pub Vec<i64>);

impl WeightVec {
    pub fn zero(n: usize) -> Self {
        WeightVec(vec![0; n])
    }

    pub fn unit(n: usize, i: usize) -> Self {
        let mut v = vec![0; n];
        v[i] = 1;
        WeightVec(v)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn height(&self) -> i64 {
        self.0.iter().sum()
    }

    pub fn plus(&self, other: &WeightVec) -> WeightVec {
        WeightVec(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }

    pub fn minus(&self, other: &WeightVec) -> WeightVec {
        WeightVec(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| a - b)
                .collect(),
        )
    }

    pub fn neg(&self) -> WeightVec {
        WeightVec(self.0.iter().map(|a| -a).collect())
    }

    pub fn is_nonnegative(&self) -> bool {
        self.0.iter().all(|&a| a >= 0)
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&a| a == 0)
    }
}

impl fmt::Display for WeightVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// Connected finite simple graph with ordered, labelled vertices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimpleGraph {
    labels: Vec<String>,
    adj: Vec<Vec<bool>>,
    edges: Vec<(usize, usize)>,
}

#[derive(Deserialize)]
struct GraphDoc {
    vertices: Vec<String>,
    edges: Vec<(String, String)>,
}

impl SimpleGraph {
    pub fn new(labels: Vec<String>, edge_indices: &[(usize, usize)]) -> Result<Self, GraphError> {
        if labels.is_empty() {
            return Err(GraphError::Empty);
        }
        let n = labels.len();
        for (i, l) in labels.iter().enumerate() {
            if labels[..i].contains(l) {
                return Err(GraphError::DuplicateVertex(l.clone()));
            }
        }
        let mut adj = vec![vec![false; n]; n];
        let mut edges = Vec::with_capacity(edge_indices.len());
        for &(a, b) in edge_indices {
            if a >= n {
                return Err(GraphError::BadIndex(a));
            }
            if b >= n {
                return Err(GraphError::BadIndex(b));
            }
            if a == b {
                return Err(GraphError::Loop(labels[a].clone()));
            }
            if adj[a][b] {
                let (lo, hi) = (a.min(b), a.max(b));
                return Err(GraphError::DuplicateEdge(labels[lo].clone(), labels[hi].clone()));
            }
            adj[a][b] = true;
            adj[b][a] = true;
            edges.push((a.min(b), a.max(b)));
        }
        edges.sort_unstable();
        let g = SimpleGraph { labels, adj, edges };
        if !g.is_connected() {
            return Err(GraphError::Disconnected);
        }
        Ok(g)
    }

    pub fn from_labeled_edges(
        labels: Vec<String>,
        edges: &[(String, String)],
    ) -> Result<Self, GraphError> {
        let index = |l: &String| {
            labels
                .iter()
                .position(|x| x == l)
                .ok_or_else(|| GraphError::UnknownVertex(l.clone()))
        };
        let mut edge_indices = Vec::with_capacity(edges.len());
        for (a, b) in edges {
            edge_indices.push((index(a)?, index(b)?));
        }
        SimpleGraph::new(labels, &edge_indices)
    }

    /// Parses {"vertices": ["x", ...], "edges": [["x","y"], ...]}.
    pub fn from_json(text: &str) -> Result<Self, GraphError> {
        let doc: GraphDoc =
            serde_json::from_str(text).map_err(|e| GraphError::Json(e.to_string()))?;
        SimpleGraph::from_labeled_edges(doc.vertices, &doc.edges)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "vertices": self.labels,
            "edges": self
                .edges
                .iter()
                .map(|&(a, b)| vec![self.labels[a].clone(), self.labels[b].clone()])
                .collect::<Vec<_>>(),
        })
    }

    fn is_connected(&self) -> bool {
        let n = self.n();
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for w in 0..n {
                if self.adj[v][w] && !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    pub fn n(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn adjacent(&self, a: usize, b: usize) -> bool {
        self.adj[a][b]
    }

    /// Edges as index pairs (a, b) with a < b, sorted.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].iter().filter(|&&a| a).count()
    }

    pub fn neighbors(&self, v: usize) -> Vec<usize> {
        (0..self.n()).filter(|&w| self.adj[v][w]).collect()
    }

    /// Cartan entries: 2 on the diagonal, -1 on edges, 0 elsewhere.
    pub fn cartan(&self) -> Vec<Vec<i64>> {
        let n = self.n();
        let mut m = vec![vec![0i64; n]; n];
        for i in 0..n {
            m[i][i] = 2;
            for j in 0..n {
                if self.adj[i][j] {
                    m[i][j] = -1;
                }
            }
        }
        m
    }

    /// a^T A b with A the Cartan matrix.
    pub fn bilinear(&self, a: &WeightVec, b: &WeightVec) -> i64 {
        assert_eq!(a.len(), self.n());
        assert_eq!(b.len(), self.n());
        let mut acc = 0;
        for i in 0..self.n() {
            if a.0[i] == 0 {
                continue;
            }
            let mut row = 2 * b.0[i];
            for j in 0..self.n() {
                if self.adj[i][j] {
                    row -= b.0[j];
                }
            }
            acc += a.0[i] * row;
        }
        acc
    }

    /// The graph with one vertex removed, plus the map from new indices to
    /// old ones. Fails if the remainder is disconnected.
    pub fn without_vertex(&self, v: usize) -> Result<(SimpleGraph, Vec<usize>), GraphError> {
        if v >= self.n() {
            return Err(GraphError::BadIndex(v));
        }
        let keep: Vec<usize> = (0..self.n()).filter(|&w| w != v).collect();
        let labels = keep.iter().map(|&w| self.labels[w].clone()).collect();
        let mut edges = Vec::new();
        for (new_a, &old_a) in keep.iter().enumerate() {
            for (new_b, &old_b) in keep.iter().enumerate().skip(new_a + 1) {
                if self.adj[old_a][old_b] {
                    edges.push((new_a, new_b));
                }
            }
        }
        Ok((SimpleGraph::new(labels, &edges)?, keep))
    }

    /// Relabels vertex i as position perm[i]; used to test order-invariance.
    pub fn permuted(&self, perm: &[usize]) -> SimpleGraph {
        assert_eq!(perm.len(), self.n());
        let mut labels = vec![String::new(); self.n()];
        for (i, &p) in perm.iter().enumerate() {
            labels[p] = self.labels[i].clone();
        }
        let edges: Vec<(usize, usize)> = self
            .edges
            .iter()
            .map(|&(a, b)| (perm[a], perm[b]))
            .collect();
        SimpleGraph::new(labels, &edges).expect("permutation preserves validity")
    }
}

impl fmt::Display for SimpleGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "vertices [{}], edges [", self.labels.join(", "))?;
        for (i, &(a, b)) in self.edges.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}-{}", self.labels[a], self.labels[b])?;
        }
        write!(f, "]")
    }
}
