//! Binary relational systems, digraphs and simple graphs.
//!
//! A [`BinarySystem`] has a vertex set and one binary relation per label.
//! A [`Digraph`] is a system with a single label, and a [`SimpleGraph`] is a
//! digraph whose relation is symmetric and irreflexive.

mod search;

use std::collections::{BTreeSet, HashMap};
use std::fmt::Write as _;

use thiserror::Error;

use crate::error::ErrorKind;
use crate::group::Perm;

pub use search::{automorphisms, automorphisms_with_stats, SearchStats};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("unknown vertex {0:?}")]
    UnknownVertex(String),
    #[error("unknown label {0:?}")]
    UnknownLabel(String),
    #[error("duplicate vertex {0:?}")]
    DuplicateVertex(String),
    #[error("duplicate label {0:?}")]
    DuplicateLabel(String),
    #[error("duplicate pair ({0}, {1}) under label {2:?}")]
    DuplicatePair(String, String, String),
    #[error("self-loop at {0:?} is not allowed in a simple graph")]
    SelfLoop(String),
    #[error("expected exactly one label, found {0}")]
    NotADigraph(usize),
    #[error("relation is not symmetric at ({0}, {1})")]
    NotSymmetric(String, String),
    #[error("automorphism search exceeded {cap} nodes; refined cell sizes {cell_sizes:?}")]
    SearchCapExceeded { cap: u64, cell_sizes: Vec<usize> },
}

impl GraphError {
    pub fn kind(&self) -> ErrorKind {
        match self {
            GraphError::SearchCapExceeded { .. } => ErrorKind::CapExceeded,
            _ => ErrorKind::Input,
        }
    }
}

/// In-, out- and total degree of a vertex, counted with label multiplicity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Degrees {
    pub indegree: usize,
    pub outdegree: usize,
    pub degree: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinarySystem {
    vertices: Vec<String>,
    labels: Vec<String>,
    relations: Vec<BTreeSet<(usize, usize)>>,
}

fn index_names(
    names: &[String],
    dup: impl Fn(String) -> GraphError,
) -> Result<HashMap<&str, usize>, GraphError> {
    let mut map = HashMap::with_capacity(names.len());
    for (i, name) in names.iter().enumerate() {
        if map.insert(name.as_str(), i).is_some() {
            return Err(dup(name.clone()));
        }
    }
    Ok(map)
}

impl BinarySystem {
    pub fn new(vertices: Vec<String>, labels: Vec<String>) -> Result<Self, GraphError> {
        index_names(&vertices, GraphError::DuplicateVertex)?;
        index_names(&labels, GraphError::DuplicateLabel)?;
        let relations = vec![BTreeSet::new(); labels.len()];
        Ok(BinarySystem {
            vertices,
            labels,
            relations,
        })
    }

    /// Builds a system from named pairs, rejecting unknown names and duplicates.
    pub fn from_named(
        vertices: Vec<String>,
        labels: Vec<String>,
        pairs: &[(String, String, String)],
    ) -> Result<Self, GraphError> {
        let mut sys = BinarySystem::new(vertices, labels)?;
        let vmap: HashMap<String, usize> = sys.vertices.iter().cloned().zip(0..).collect();
        let lmap: HashMap<String, usize> = sys.labels.iter().cloned().zip(0..).collect();
        for (label, u, w) in pairs {
            let l = *lmap
                .get(label)
                .ok_or_else(|| GraphError::UnknownLabel(label.clone()))?;
            let a = *vmap
                .get(u)
                .ok_or_else(|| GraphError::UnknownVertex(u.clone()))?;
            let b = *vmap
                .get(w)
                .ok_or_else(|| GraphError::UnknownVertex(w.clone()))?;
            sys.add_pair(l, a, b)?;
        }
        Ok(sys)
    }

    pub fn add_pair(&mut self, label: usize, u: usize, w: usize) -> Result<(), GraphError> {
        if label >= self.labels.len() {
            return Err(GraphError::UnknownLabel(label.to_string()));
        }
        for x in [u, w] {
            if x >= self.vertices.len() {
                return Err(GraphError::UnknownVertex(x.to_string()));
            }
        }
        if !self.relations[label].insert((u, w)) {
            return Err(GraphError::DuplicatePair(
                self.vertices[u].clone(),
                self.vertices[w].clone(),
                self.labels[label].clone(),
            ));
        }
        Ok(())
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertex_names(&self) -> &[String] {
        &self.vertices
    }

    pub fn vertex_name(&self, v: usize) -> &str {
        &self.vertices[v]
    }

    pub fn vertex_index(&self, name: &str) -> Option<usize> {
        self.vertices.iter().position(|v| v == name)
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// Pairs of label `i`, sorted.
    pub fn relation(&self, label: usize) -> &BTreeSet<(usize, usize)> {
        &self.relations[label]
    }

    pub fn contains(&self, label: usize, u: usize, w: usize) -> bool {
        self.relations[label].contains(&(u, w))
    }

    /// All `(label, u, w)` triples, label-major.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize, usize)> + '_ {
        self.relations
            .iter()
            .enumerate()
            .flat_map(|(l, rel)| rel.iter().map(move |&(u, w)| (l, u, w)))
    }

    pub fn pair_count(&self) -> usize {
        self.relations.iter().map(BTreeSet::len).sum()
    }

    pub fn degrees(&self, v: usize) -> Result<Degrees, GraphError> {
        if v >= self.vertices.len() {
            return Err(GraphError::UnknownVertex(v.to_string()));
        }
        let (mut indegree, mut outdegree) = (0, 0);
        for (_, a, b) in self.pairs() {
            if a == v {
                outdegree += 1;
            }
            if b == v {
                indegree += 1;
            }
        }
        Ok(Degrees {
            indegree,
            outdegree,
            degree: indegree + outdegree,
        })
    }

    /// Degrees of every vertex in one pass.
    pub fn all_degrees(&self) -> Vec<Degrees> {
        let mut out = vec![
            Degrees {
                indegree: 0,
                outdegree: 0,
                degree: 0
            };
            self.vertices.len()
        ];
        for (_, a, b) in self.pairs() {
            out[a].outdegree += 1;
            out[a].degree += 1;
            out[b].indegree += 1;
            out[b].degree += 1;
        }
        out
    }

    pub fn max_degree(&self) -> usize {
        self.all_degrees()
            .iter()
            .map(|d| d.degree)
            .max()
            .unwrap_or(0)
    }

    /// Whether `psi` maps every relation onto itself.
    pub fn is_automorphism(&self, psi: &Perm) -> bool {
        psi.degree() == self.vertices.len()
            && self.relations.iter().all(|rel| {
                rel.iter()
                    .all(|&(u, w)| rel.contains(&(psi.apply(u), psi.apply(w))))
            })
    }

    /// Graphviz rendering; edges carry their label unless there is only one.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph system {\n");
        for v in &self.vertices {
            let _ = writeln!(out, "  {v:?};");
        }
        for (l, u, w) in self.pairs() {
            if self.labels.len() == 1 {
                let _ = writeln!(out, "  {:?} -> {:?};", self.vertices[u], self.vertices[w]);
            } else {
                let _ = writeln!(
                    out,
                    "  {:?} -> {:?} [label={:?}];",
                    self.vertices[u], self.vertices[w], self.labels[l]
                );
            }
        }
        out.push_str("}\n");
        out
    }
}

/// Whether every automorphism maps `subset` onto itself.
pub fn is_invariant(subset: &[usize], auts: &[Perm]) -> bool {
    let members: BTreeSet<usize> = subset.iter().copied().collect();
    auts.iter()
        .all(|psi| subset.iter().all(|&v| members.contains(&psi.apply(v))))
}

/// A binary system with exactly one label.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Digraph(BinarySystem);

pub const EDGE_LABEL: &str = "E";

impl Digraph {
    pub fn new(vertices: Vec<String>) -> Result<Self, GraphError> {
        Ok(Digraph(BinarySystem::new(
            vertices,
            vec![EDGE_LABEL.to_string()],
        )?))
    }

    /// Vertices named `0..n`.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        let mut g = Digraph::new((0..n).map(|i| i.to_string()).collect())?;
        for &(u, w) in edges {
            g.add_edge(u, w)?;
        }
        Ok(g)
    }

    pub fn from_named(
        vertices: Vec<String>,
        edges: &[(String, String)],
    ) -> Result<Self, GraphError> {
        let pairs: Vec<_> = edges
            .iter()
            .map(|(u, w)| (EDGE_LABEL.to_string(), u.clone(), w.clone()))
            .collect();
        Ok(Digraph(BinarySystem::from_named(
            vertices,
            vec![EDGE_LABEL.to_string()],
            &pairs,
        )?))
    }

    pub fn from_system(sys: BinarySystem) -> Result<Self, GraphError> {
        if sys.labels.len() != 1 {
            return Err(GraphError::NotADigraph(sys.labels.len()));
        }
        Ok(Digraph(sys))
    }

    pub fn add_edge(&mut self, u: usize, w: usize) -> Result<(), GraphError> {
        self.0.add_pair(0, u, w)
    }

    pub fn system(&self) -> &BinarySystem {
        &self.0
    }

    pub fn vertex_count(&self) -> usize {
        self.0.vertex_count()
    }

    pub fn edge_count(&self) -> usize {
        self.0.relations[0].len()
    }

    /// Edges in sorted order; this order fixes edge indices everywhere.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.0.relations[0].iter().copied()
    }

    pub fn has_edge(&self, u: usize, w: usize) -> bool {
        self.0.contains(0, u, w)
    }

    /// Name of an edge, `"u->v"`.
    pub fn edge_name(&self, u: usize, w: usize) -> String {
        format!("{}->{}", self.0.vertices[u], self.0.vertices[w])
    }
}

/// An undirected graph without loops, stored as a bidirected digraph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimpleGraph(Digraph);

impl SimpleGraph {
    pub fn new(vertices: Vec<String>) -> Result<Self, GraphError> {
        Ok(SimpleGraph(Digraph::new(vertices)?))
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        let mut g = SimpleGraph::new((0..n).map(|i| i.to_string()).collect())?;
        for &(u, w) in edges {
            g.add_edge(u, w)?;
        }
        Ok(g)
    }

    /// Checks symmetry and irreflexivity of a one-label system.
    pub fn from_digraph(g: Digraph) -> Result<Self, GraphError> {
        for (u, w) in g.edges() {
            if u == w {
                return Err(GraphError::SelfLoop(g.0.vertices[u].clone()));
            }
            if !g.has_edge(w, u) {
                return Err(GraphError::NotSymmetric(
                    g.0.vertices[u].clone(),
                    g.0.vertices[w].clone(),
                ));
            }
        }
        Ok(SimpleGraph(g))
    }

    pub fn add_edge(&mut self, u: usize, w: usize) -> Result<(), GraphError> {
        if u == w {
            return Err(GraphError::SelfLoop(
                self.0
                     .0
                    .vertices
                    .get(u)
                    .cloned()
                    .unwrap_or_else(|| u.to_string()),
            ));
        }
        self.0.add_edge(u, w)?;
        self.0.add_edge(w, u)
    }

    pub fn vertex_count(&self) -> usize {
        self.0.vertex_count()
    }

    /// Number of undirected edges.
    pub fn edge_count(&self) -> usize {
        self.0.edge_count() / 2
    }

    /// Undirected edges `(u, w)` with `u < w`.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.0.edges().filter(|&(u, w)| u < w)
    }

    pub fn degree(&self, v: usize) -> usize {
        self.0.system().all_degrees()[v].outdegree
    }

    /// The bidirected digraph: every undirected edge becomes two arcs.
    pub fn as_digraph(&self) -> &Digraph {
        &self.0
    }

    pub fn system(&self) -> &BinarySystem {
        self.0.system()
    }

    pub fn to_dot(&self) -> String {
        let names = self.system().vertex_names();
        let mut out = String::from("graph simple {\n");
        for v in names {
            let _ = writeln!(out, "  {v:?};");
        }
        for (u, w) in self.edges() {
            let _ = writeln!(out, "  {:?} -- {:?};", names[u], names[w]);
        }
        out.push_str("}\n");
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn names(k: usize) -> Vec<String> {
        (0..k).map(|i| format!("v{i}")).collect()
    }

    #[test]
    fn cayley_z3_degrees() {
        let g = Digraph::from_edges(3, &[(0, 1), (1, 2), (2, 0)]).unwrap();
        for v in 0..3 {
            let d = g.system().degrees(v).unwrap();
            assert_eq!((d.indegree, d.outdegree, d.degree), (1, 1, 2));
        }
        assert!(matches!(
            g.system().degrees(3),
            Err(GraphError::UnknownVertex(_))
        ));
    }

    #[test]
    fn degree_counts_label_multiplicity() {
        let mut s = BinarySystem::new(names(2), vec!["a".into(), "b".into()]).unwrap();
        s.add_pair(0, 0, 1).unwrap();
        s.add_pair(1, 0, 1).unwrap();
        let d = s.degrees(0).unwrap();
        assert_eq!(d.outdegree, 2);
        assert_eq!(s.degrees(1).unwrap().indegree, 2);
    }

    #[test]
    fn ingestion_errors() {
        assert!(matches!(
            Digraph::from_edges(2, &[(0, 1), (0, 1)]),
            Err(GraphError::DuplicatePair(..))
        ));
        assert!(matches!(
            Digraph::from_named(names(2), &[("v0".into(), "zz".into())]),
            Err(GraphError::UnknownVertex(v)) if v == "zz"
        ));
        assert!(matches!(
            BinarySystem::new(vec!["a".into(), "a".into()], vec![]),
            Err(GraphError::DuplicateVertex(_))
        ));
        assert!(matches!(
            SimpleGraph::from_edges(2, &[(1, 1)]),
            Err(GraphError::SelfLoop(_))
        ));
        let one_way = Digraph::from_edges(2, &[(0, 1)]).unwrap();
        assert!(matches!(
            SimpleGraph::from_digraph(one_way),
            Err(GraphError::NotSymmetric(..))
        ));
    }

    #[test]
    fn invariance() {
        let swap = Perm::from_images(vec![1, 0]).unwrap();
        let id = Perm::identity(2);
        assert!(!is_invariant(&[0], &[id.clone(), swap.clone()]));
        assert!(is_invariant(&[0], std::slice::from_ref(&id)));
        assert!(is_invariant(&[0, 1], &[id, swap]));
    }

    #[test]
    fn dot_output() {
        let g = SimpleGraph::from_edges(3, &[(0, 1), (1, 2)]).unwrap();
        let dot = g.to_dot();
        assert!(dot.starts_with("graph simple {"));
        assert_eq!(dot.matches("--").count(), 2);
        let d = Digraph::from_edges(2, &[(0, 1)]).unwrap();
        assert!(d.system().to_dot().contains("\"0\" -> \"1\";"));
    }
}
