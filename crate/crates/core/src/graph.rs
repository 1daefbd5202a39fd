//! Simple graphs in compressed sparse row form.
//!
//! Neighbor lists are sorted and free of duplicates and self-loops. An
//! undirected graph stores every edge in both endpoint lists; a directed
//! graph stores out-neighbors only.

use crate::error::{Error, Result};

pub type NodeId = u32;

#[derive(Debug, Clone, PartialEq)]
pub struct Graph {
    offsets: Vec<usize>,
    targets: Vec<NodeId>,
    directed: bool,
    labels: Option<Vec<String>>,
    coordinates: Option<Vec<Vec<f64>>>,
}

impl Graph {
    /// Builds a simple undirected graph. Duplicate edges and self-loops are
    /// dropped. When `n` is given every id must be below it and nodes
    /// without edges are kept; otherwise `n` is one past the largest id.
    pub fn from_edge_list(edges: &[(NodeId, NodeId)], n: Option<usize>) -> Result<Self> {
        Self::build(edges, n, false)
    }

    /// Directed counterpart of [`Graph::from_edge_list`]; `(u, v)` is the arc `u -> v`.
    pub fn from_arc_list(arcs: &[(NodeId, NodeId)], n: Option<usize>) -> Result<Self> {
        Self::build(arcs, n, true)
    }

    pub fn empty(n: usize) -> Self {
        Self { offsets: vec![0; n + 1], targets: Vec::new(), directed: false, labels: None, coordinates: None }
    }

    fn build(edges: &[(NodeId, NodeId)], n: Option<usize>, directed: bool) -> Result<Self> {
        let n = match n {
            Some(n) => {
                if let Some(&(u, v)) = edges.iter().find(|&&(u, v)| u.max(v) as usize >= n) {
                    return Err(Error::NodeOutOfRange { id: u.max(v) as usize, n });
                }
                n
            }
            None => edges.iter().map(|&(u, v)| u.max(v) as usize + 1).max().unwrap_or(0),
        };
        if n > NodeId::MAX as usize {
            return Err(Error::TooLarge { n, max: NodeId::MAX as usize });
        }

        let mut counts = vec![0usize; n + 1];
        for &(u, v) in edges {
            if u == v {
                continue;
            }
            counts[u as usize + 1] += 1;
            if !directed {
                counts[v as usize + 1] += 1;
            }
        }
        for i in 0..n {
            counts[i + 1] += counts[i];
        }
        let mut fill = counts.clone();
        let mut targets = vec![0 as NodeId; counts[n]];
        for &(u, v) in edges {
            if u == v {
                continue;
            }
            targets[fill[u as usize]] = v;
            fill[u as usize] += 1;
            if !directed {
                targets[fill[v as usize]] = u;
                fill[v as usize] += 1;
            }
        }

        // sort each list, then compact away duplicates
        let mut offsets = Vec::with_capacity(n + 1);
        offsets.push(0);
        let mut write = 0;
        for u in 0..n {
            let (lo, hi) = (counts[u], counts[u + 1]);
            targets[lo..hi].sort_unstable();
            let mut last = None;
            for i in lo..hi {
                let t = targets[i];
                if last != Some(t) {
                    targets[write] = t;
                    write += 1;
                    last = Some(t);
                }
            }
            offsets.push(write);
        }
        targets.truncate(write);
        targets.shrink_to_fit();

        Ok(Self { offsets, targets, directed, labels: None, coordinates: None })
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.node_count() {
            return Err(Error::MalformedInput {
                line: None,
                msg: format!("{} labels for {} nodes", labels.len(), self.node_count()),
            });
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn with_coordinates(mut self, coordinates: Vec<Vec<f64>>) -> Result<Self> {
        let dim = coordinates.first().map_or(0, Vec::len);
        if coordinates.len() != self.node_count()
            || dim == 0
            || coordinates.iter().any(|x| x.len() != dim || x.iter().any(|v| !v.is_finite()))
        {
            return Err(Error::MissingCoordinates);
        }
        self.coordinates = Some(coordinates);
        Ok(self)
    }

    #[inline]
    pub fn node_count(&self) -> usize {
        self.offsets.len() - 1
    }

    /// Number of edges (undirected) or arcs (directed).
    pub fn edge_count(&self) -> usize {
        if self.directed {
            self.targets.len()
        } else {
            self.targets.len() / 2
        }
    }

    #[inline]
    pub fn is_directed(&self) -> bool {
        self.directed
    }

    #[inline]
    pub fn neighbors(&self, u: NodeId) -> &[NodeId] {
        let u = u as usize;
        &self.targets[self.offsets[u]..self.offsets[u + 1]]
    }

    #[inline]
    pub fn degree(&self, u: NodeId) -> usize {
        let u = u as usize;
        self.offsets[u + 1] - self.offsets[u]
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.offsets.windows(2).map(|w| w[1] - w[0]).collect()
    }

    pub fn has_edge(&self, u: NodeId, v: NodeId) -> bool {
        self.neighbors(u).binary_search(&v).is_ok()
    }

    pub fn nodes(&self) -> impl Iterator<Item = NodeId> {
        0..self.node_count() as NodeId
    }

    /// Each undirected edge once as `(u, v)` with `u < v`; every arc for directed graphs.
    pub fn edges(&self) -> impl Iterator<Item = (NodeId, NodeId)> + '_ {
        self.nodes()
            .flat_map(move |u| self.neighbors(u).iter().filter(move |&&v| self.directed || u < v).map(move |&v| (u, v)))
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn label(&self, u: NodeId) -> String {
        match &self.labels {
            Some(l) => l[u as usize].clone(),
            None => u.to_string(),
        }
    }

    pub fn coordinates(&self) -> Option<&[Vec<f64>]> {
        self.coordinates.as_deref()
    }

    /// Forgets arc directions. Labels and coordinates carry over.
    pub fn to_undirected(&self) -> Graph {
        if !self.directed {
            return self.clone();
        }
        let edges: Vec<_> = self.edges().collect();
        let mut g = Graph::build(&edges, Some(self.node_count()), false).expect("ids in range");
        g.labels = self.labels.clone();
        g.coordinates = self.coordinates.clone();
        g
    }

    /// Subgraph induced by `keep` (in the given order, which becomes the new
    /// numbering). Returns the graph and the old -> new id map.
    pub fn induced_subgraph(&self, keep: &[NodeId]) -> (Graph, Vec<Option<NodeId>>) {
        let mut map = vec![None; self.node_count()];
        for (new, &old) in keep.iter().enumerate() {
            map[old as usize] = Some(new as NodeId);
        }
        let mut edges = Vec::new();
        for &old in keep {
            let nu = map[old as usize].unwrap();
            for &v in self.neighbors(old) {
                if let Some(nv) = map[v as usize] {
                    if self.directed || nu < nv {
                        edges.push((nu, nv));
                    }
                }
            }
        }
        let mut g = Graph::build(&edges, Some(keep.len()), self.directed).expect("ids in range");
        if let Some(labels) = &self.labels {
            g.labels = Some(keep.iter().map(|&u| labels[u as usize].clone()).collect());
        }
        if let Some(coords) = &self.coordinates {
            g.coordinates = Some(keep.iter().map(|&u| coords[u as usize].clone()).collect());
        }
        (g, map)
    }

    /// Applies a node permutation: old node `u` becomes `perm[u]`.
    pub fn relabel(&self, perm: &[NodeId]) -> Graph {
        assert_eq!(perm.len(), self.node_count());
        let edges: Vec<_> = self.edges().map(|(u, v)| (perm[u as usize], perm[v as usize])).collect();
        Graph::build(&edges, Some(self.node_count()), self.directed).expect("permutation in range")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn drops_duplicates_and_loops() {
        let g = Graph::from_edge_list(&[(0, 1), (1, 0), (1, 1)], Some(3)).unwrap();
        assert_eq!(g.node_count(), 3);
        assert_eq!(g.edge_count(), 1);
        assert_eq!(g.neighbors(0), &[1]);
        assert_eq!(g.neighbors(1), &[0]);
        assert_eq!(g.degree(2), 0);
    }

    #[test]
    fn single_isolated_node() {
        let g = Graph::from_edge_list(&[], Some(1)).unwrap();
        assert_eq!(g.node_count(), 1);
        assert_eq!(g.edge_count(), 0);
    }

    #[test]
    fn id_beyond_n_is_rejected() {
        let err = Graph::from_edge_list(&[(0, 3)], Some(3)).unwrap_err();
        assert!(matches!(err, Error::NodeOutOfRange { id: 3, n: 3 }));
    }

    #[test]
    fn directed_keeps_orientation() {
        let g = Graph::from_arc_list(&[(0, 1), (0, 1), (2, 0)], None).unwrap();
        assert!(g.is_directed());
        assert_eq!(g.edge_count(), 2);
        assert!(g.has_edge(0, 1));
        assert!(!g.has_edge(1, 0));
        assert_eq!(g.to_undirected().edge_count(), 2);
    }

    #[test]
    fn induced_subgraph_maps_ids() {
        let g = Graph::from_edge_list(&[(0, 1), (1, 2), (2, 3)], None).unwrap();
        let (h, map) = g.induced_subgraph(&[1, 2, 3]);
        assert_eq!(map, vec![None, Some(0), Some(1), Some(2)]);
        assert_eq!(h.edge_count(), 2);
        assert!(h.has_edge(0, 1) && h.has_edge(1, 2));
    }

    #[test]
    fn coordinates_must_be_consistent() {
        let g = Graph::from_edge_list(&[(0, 1)], None).unwrap();
        assert!(g.clone().with_coordinates(vec![vec![0.0, 1.0], vec![2.0]]).is_err());
        assert!(g.with_coordinates(vec![vec![0.0, 1.0], vec![2.0, 3.0]]).is_ok());
    }
}
