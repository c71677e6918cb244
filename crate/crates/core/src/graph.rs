//! Undirected simple graphs, the generator families, the middle-graph
//! transform and the join used by the domination gadget.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::ENGINE_VERSION;

/// Role of a vertex inside a constructed graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum VertexTag {
    /// Vertex `i` of the base graph of a middle graph.
    Original(usize),
    /// Inserted vertex for the base edge `{i, j}`, `i < j`.
    EdgeVertex(usize, usize),
    /// Center of a wheel or fan.
    Hub,
    Plain,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Label {
    pub tag: VertexTag,
    pub name: String,
}

impl Label {
    pub fn new(tag: VertexTag, name: impl Into<String>) -> Self {
        Label {
            tag,
            name: name.into(),
        }
    }

    fn plain(name: impl Into<String>) -> Self {
        Label::new(VertexTag::Plain, name)
    }
}

/// An undirected simple graph on the vertices `0..vertex_count`.
///
/// Adjacency lists are kept sorted and are symmetric with no self-loops.
/// Values are immutable once built.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    adjacency: Vec<Vec<usize>>,
    labels: Vec<Label>,
}

impl Graph {
    /// Builds a graph from an edge list. Duplicate edges collapse; self-loops
    /// and out-of-range endpoints are rejected, as are repeated label names.
    pub fn from_edges(
        vertex_count: usize,
        edges: impl IntoIterator<Item = (usize, usize)>,
        labels: Vec<Label>,
    ) -> Result<Self> {
        if labels.len() != vertex_count {
            return Err(Error::InvalidGraph(format!(
                "{} labels for {} vertices",
                labels.len(),
                vertex_count
            )));
        }
        let mut names = BTreeSet::new();
        for label in &labels {
            if !names.insert(label.name.as_str()) {
                return Err(Error::InvalidGraph(format!(
                    "duplicate vertex name {:?}",
                    label.name
                )));
            }
        }
        let mut adjacency = vec![Vec::new(); vertex_count];
        for (u, v) in edges {
            for w in [u, v] {
                if w >= vertex_count {
                    return Err(Error::VertexOutOfRange {
                        vertex: w,
                        vertex_count,
                    });
                }
            }
            if u == v {
                return Err(Error::InvalidGraph(format!("self-loop at vertex {u}")));
            }
            adjacency[u].push(v);
            adjacency[v].push(u);
        }
        for list in &mut adjacency {
            list.sort_unstable();
            list.dedup();
        }
        Ok(Graph { adjacency, labels })
    }

    /// Graph with default names `v0, v1, ...`.
    pub fn unlabeled(
        vertex_count: usize,
        edges: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self> {
        let labels = (0..vertex_count).map(|i| Label::plain(format!("v{i}"))).collect();
        Graph::from_edges(vertex_count, edges, labels)
    }

    pub fn empty() -> Self {
        Graph {
            adjacency: Vec::new(),
            labels: Vec::new(),
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.vertex_count() && self.adjacency[u].binary_search(&v).is_ok()
    }

    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    pub fn label(&self, v: usize) -> &Label {
        &self.labels[v]
    }

    pub fn name(&self, v: usize) -> &str {
        &self.labels[v].name
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adjacency
            .iter()
            .enumerate()
            .flat_map(|(u, list)| list.iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
    }

    /// Neighborhood bitmasks. Only meaningful for graphs on at most 64 vertices.
    pub(crate) fn neighbor_masks(&self) -> Vec<u64> {
        debug_assert!(self.vertex_count() <= 64);
        self.adjacency
            .iter()
            .map(|list| list.iter().fold(0u64, |m, &v| m | (1 << v)))
            .collect()
    }

    pub(crate) fn check_vertex(&self, v: usize) -> Result<()> {
        if v < self.vertex_count() {
            Ok(())
        } else {
            Err(Error::VertexOutOfRange {
                vertex: v,
                vertex_count: self.vertex_count(),
            })
        }
    }

    pub fn is_connected(&self) -> bool {
        let n = self.vertex_count();
        if n == 0 {
            return true;
        }
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        let mut reached = 1;
        while let Some(u) = stack.pop() {
            for &v in &self.adjacency[u] {
                if !seen[v] {
                    seen[v] = true;
                    reached += 1;
                    stack.push(v);
                }
            }
        }
        reached == n
    }

    /// Subgraph induced by `vertices`, renumbered in increasing index order.
    pub fn induced_subgraph(&self, vertices: &[usize]) -> Result<Graph> {
        let mut keep: Vec<usize> = vertices.to_vec();
        for &v in &keep {
            self.check_vertex(v)?;
        }
        keep.sort_unstable();
        keep.dedup();
        let mut index = vec![usize::MAX; self.vertex_count()];
        for (new, &old) in keep.iter().enumerate() {
            index[old] = new;
        }
        let edges = self
            .edges()
            .filter(|&(u, v)| index[u] != usize::MAX && index[v] != usize::MAX)
            .map(|(u, v)| (index[u], index[v]));
        let labels = keep.iter().map(|&v| self.labels[v].clone()).collect();
        Graph::from_edges(keep.len(), edges, labels)
    }

    pub fn distances(&self) -> DistanceTable {
        let n = self.vertex_count();
        let mut dist = vec![None; n * n];
        let mut queue = VecDeque::new();
        for s in 0..n {
            dist[s * n + s] = Some(0);
            queue.push_back(s);
            while let Some(u) = queue.pop_front() {
                let du = dist[s * n + u].unwrap_or(0);
                for &v in &self.adjacency[u] {
                    if dist[s * n + v].is_none() {
                        dist[s * n + v] = Some(du + 1);
                        queue.push_back(v);
                    }
                }
            }
        }
        DistanceTable { n, dist }
    }

    /// Hex digest of the vertex count and sorted edge list, salted with the
    /// engine version. Label-sensitive, not isomorphism-invariant.
    pub fn canonical_key(&self) -> String {
        let mut hasher = Sha256::new();
        hasher.update(format!("engine={ENGINE_VERSION};n={};e=", self.vertex_count()));
        for (u, v) in self.edges() {
            hasher.update(format!("{u}-{v},"));
        }
        let digest = hasher.finalize();
        digest.iter().take(16).map(|b| format!("{b:02x}")).collect()
    }
}

impl fmt::Display for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "graph on {} vertices, {} edges",
            self.vertex_count(),
            self.edge_count()
        )
    }
}

/// All-pairs hop distances; `None` marks a disconnected pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistanceTable {
    n: usize,
    dist: Vec<Option<u32>>,
}

impl DistanceTable {
    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn get(&self, u: usize, v: usize) -> Option<u32> {
        self.dist[u * self.n + v]
    }

    /// Largest finite distance from `v`.
    pub fn eccentricity(&self, v: usize) -> u32 {
        (0..self.n).filter_map(|u| self.get(v, u)).max().unwrap_or(0)
    }

    /// Largest finite distance in the table.
    pub fn max_finite(&self) -> u32 {
        self.dist.iter().flatten().copied().max().unwrap_or(0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Path,
    Cycle,
    Complete,
    Wheel,
    Fan,
}

impl Family {
    pub fn minimum(self) -> usize {
        match self {
            Family::Path | Family::Complete => 1,
            Family::Cycle | Family::Fan => 3,
            Family::Wheel => 4,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Family::Path => "path",
            Family::Cycle => "cycle",
            Family::Complete => "complete",
            Family::Wheel => "wheel",
            Family::Fan => "fan",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GeneratorSpec {
    pub family: Family,
    pub n: usize,
}

impl GeneratorSpec {
    pub fn new(family: Family, n: usize) -> Self {
        GeneratorSpec { family, n }
    }
}

fn numbered(range: std::ops::Range<usize>) -> Vec<Label> {
    range.map(|i| Label::plain(format!("x{i}"))).collect()
}

/// Builds a member of one of the standard families.
///
/// Wheels and fans put the hub `x0` at index 0: `wheel(n)` is the hub joined
/// to a cycle on `x1..x{n-1}`, `fan(n)` the hub joined to a path on the same
/// vertices. Paths, cycles and complete graphs use `x1..xn`.
pub fn build_generator(spec: GeneratorSpec) -> Result<Graph> {
    let GeneratorSpec { family, n } = spec;
    if n < family.minimum() {
        return Err(Error::ParameterBelowMinimum {
            family: family.name(),
            n,
            min: family.minimum(),
        });
    }
    match family {
        Family::Path => Graph::from_edges(n, (1..n).map(|i| (i - 1, i)), numbered(1..n + 1)),
        Family::Cycle => Graph::from_edges(
            n,
            (0..n).map(|i| (i, (i + 1) % n)),
            numbered(1..n + 1),
        ),
        Family::Complete => Graph::from_edges(
            n,
            (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))),
            numbered(1..n + 1),
        ),
        Family::Wheel | Family::Fan => {
            let rim = n - 1;
            let mut edges: Vec<(usize, usize)> = (1..n).map(|i| (0, i)).collect();
            edges.extend((1..rim).map(|i| (i, i + 1)));
            if family == Family::Wheel {
                edges.push((rim, 1));
            }
            let mut labels = numbered(0..n);
            labels[0].tag = VertexTag::Hub;
            Graph::from_edges(n, edges, labels)
        }
    }
}

/// Middle graph: the original vertices (indices `0..n`, no edges among them)
/// followed by one vertex per edge in lexicographic edge order. An edge
/// vertex is adjacent to its two endpoints and to every edge vertex sharing
/// an endpoint.
pub fn middle_graph(g: &Graph) -> Result<Graph> {
    if g.vertex_count() == 0 {
        return Err(Error::InvalidGraph("middle graph of an empty graph".into()));
    }
    let n = g.vertex_count();
    let base_edges: Vec<(usize, usize)> = g.edges().collect();
    let mut labels: Vec<Label> = (0..n)
        .map(|i| Label::new(VertexTag::Original(i), g.name(i)))
        .collect();
    // incident[v] lists the edge vertices on base vertex v
    let mut incident = vec![Vec::new(); n];
    let mut edges = Vec::new();
    for (k, &(i, j)) in base_edges.iter().enumerate() {
        let e = n + k;
        labels.push(Label::new(
            VertexTag::EdgeVertex(i, j),
            format!("e({},{})", g.name(i), g.name(j)),
        ));
        edges.push((i, e));
        edges.push((j, e));
        incident[i].push(e);
        incident[j].push(e);
    }
    for list in &incident {
        for (a, &e) in list.iter().enumerate() {
            for &f in &list[a + 1..] {
                edges.push((e, f));
            }
        }
    }
    Graph::from_edges(n + base_edges.len(), edges, labels)
}

/// Disjoint union of `g` and `h` plus every edge between them. Vertices of
/// `h` follow those of `g`; clashing names from `h` get primes appended.
pub fn join_all(g: &Graph, h: &Graph) -> Result<Graph> {
    if g.vertex_count() == 0 || h.vertex_count() == 0 {
        return Err(Error::InvalidGraph("join of an empty graph".into()));
    }
    let offset = g.vertex_count();
    let mut labels = g.labels.clone();
    let mut taken: BTreeSet<String> = labels.iter().map(|l| l.name.clone()).collect();
    for label in &h.labels {
        let mut name = label.name.clone();
        while taken.contains(&name) {
            name.push('\'');
        }
        taken.insert(name.clone());
        labels.push(Label::new(label.tag, name));
    }
    let mut edges: Vec<(usize, usize)> = g.edges().collect();
    edges.extend(h.edges().map(|(u, v)| (u + offset, v + offset)));
    for u in 0..offset {
        for v in 0..h.vertex_count() {
            edges.push((u, v + offset));
        }
    }
    Graph::from_edges(offset + h.vertex_count(), edges, labels)
}
