//! Structural metrics: components, diameter, triangle statistics and cut
//! conductance.

use std::collections::VecDeque;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId};

/// Component index of every node, components numbered in order of their
/// smallest member. Directed graphs are treated as undirected (weak components).
pub fn connected_components(g: &Graph) -> (Vec<usize>, usize) {
    let g = g.to_undirected();
    let n = g.node_count();
    let mut comp = vec![usize::MAX; n];
    let mut count = 0;
    let mut queue = VecDeque::new();
    for s in 0..n {
        if comp[s] != usize::MAX {
            continue;
        }
        comp[s] = count;
        queue.push_back(s as NodeId);
        while let Some(u) = queue.pop_front() {
            for &v in g.neighbors(u) {
                if comp[v as usize] == usize::MAX {
                    comp[v as usize] = count;
                    queue.push_back(v);
                }
            }
        }
        count += 1;
    }
    (comp, count)
}

/// Induced subgraph on the largest connected component, with the old -> new
/// id map. Among equally large components the one holding the smallest node
/// id wins.
pub fn giant_component(g: &Graph) -> (Graph, Vec<Option<NodeId>>) {
    let (comp, count) = connected_components(g);
    if count <= 1 {
        let map = (0..g.node_count() as NodeId).map(Some).collect();
        return (g.clone(), map);
    }
    let mut sizes = vec![0usize; count];
    for &c in &comp {
        sizes[c] += 1;
    }
    // components are numbered by smallest member, so the first maximum wins ties
    let best = (0..count).fold(0, |best, c| if sizes[c] > sizes[best] { c } else { best });
    let keep: Vec<NodeId> = (0..g.node_count()).filter(|&u| comp[u] == best).map(|u| u as NodeId).collect();
    g.induced_subgraph(&keep)
}

const LANES: usize = 4;
type Lanes = [u64; LANES];

/// Exact diameter by breadth-first search from every node.
///
/// Sources are processed 256 at a time with bit-parallel frontiers, so one
/// sweep over the edges advances 256 searches by one hop.
pub fn diameter(g: &Graph) -> Result<usize> {
    if g.is_directed() {
        return Err(Error::Unsupported("diameter of a directed graph"));
    }
    let n = g.node_count();
    if n <= 1 {
        return Ok(0);
    }
    if connected_components(g).1 > 1 {
        return Err(Error::Disconnected);
    }
    let chunk = 64 * LANES;
    let starts: Vec<usize> = (0..n).step_by(chunk).collect();
    let diam = starts
        .par_iter()
        .map(|&start| {
            let end = (start + chunk).min(n);
            let mut seen: Vec<Lanes> = vec![[0; LANES]; n];
            let mut frontier: Vec<Lanes> = vec![[0; LANES]; n];
            for (i, s) in (start..end).enumerate() {
                seen[s][i / 64] |= 1 << (i % 64);
                frontier[s][i / 64] |= 1 << (i % 64);
            }
            let mut next: Vec<Lanes> = vec![[0; LANES]; n];
            let mut depth = 0;
            loop {
                let mut any = false;
                for v in 0..n {
                    let mut acc = [0u64; LANES];
                    for &u in g.neighbors(v as NodeId) {
                        let f = &frontier[u as usize];
                        for l in 0..LANES {
                            acc[l] |= f[l];
                        }
                    }
                    for l in 0..LANES {
                        acc[l] &= !seen[v][l];
                        any |= acc[l] != 0;
                    }
                    next[v] = acc;
                }
                if !any {
                    break depth;
                }
                depth += 1;
                for v in 0..n {
                    for l in 0..LANES {
                        seen[v][l] |= next[v][l];
                    }
                }
                std::mem::swap(&mut frontier, &mut next);
            }
        })
        .max()
        .unwrap_or(0);
    Ok(diam)
}

/// Hop distances from `source`; `usize::MAX` marks unreachable nodes.
pub fn bfs_distances(g: &Graph, source: NodeId) -> Vec<usize> {
    let mut dist = vec![usize::MAX; g.node_count()];
    let mut queue = VecDeque::from([source]);
    dist[source as usize] = 0;
    while let Some(u) = queue.pop_front() {
        for &v in g.neighbors(u) {
            if dist[v as usize] == usize::MAX {
                dist[v as usize] = dist[u as usize] + 1;
                queue.push_back(v);
            }
        }
    }
    dist
}

fn require_undirected(g: &Graph) -> Result<()> {
    if g.is_directed() {
        Err(Error::Unsupported("triangle statistics of a directed graph"))
    } else {
        Ok(())
    }
}

/// Number of 3-cliques, by merging sorted neighbor lists along each edge.
pub fn count_triangles(g: &Graph) -> Result<u64> {
    require_undirected(g)?;
    let total = (0..g.node_count() as NodeId)
        .into_par_iter()
        .map(|u| {
            let nu = g.neighbors(u);
            let mut t = 0u64;
            for &v in nu.iter().filter(|&&v| v > u) {
                let nv = g.neighbors(v);
                let (mut i, mut j) = (0, 0);
                while i < nu.len() && j < nv.len() {
                    match nu[i].cmp(&nv[j]) {
                        std::cmp::Ordering::Less => i += 1,
                        std::cmp::Ordering::Greater => j += 1,
                        std::cmp::Ordering::Equal => {
                            if nu[i] > v {
                                t += 1;
                            }
                            i += 1;
                            j += 1;
                        }
                    }
                }
            }
            t
        })
        .sum();
    Ok(total)
}

/// Paths on three vertices, one per (center, unordered pair of its neighbors):
/// `sum_v C(deg v, 2)`.
pub fn count_two_paths(g: &Graph) -> Result<u64> {
    require_undirected(g)?;
    Ok(g.degrees().iter().map(|&d| (d as u64) * (d as u64).saturating_sub(1) / 2).sum())
}

/// Triangle and two-path counts with both normalizations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Clustering {
    pub triangles: u64,
    pub two_paths: u64,
}

impl Clustering {
    pub fn of(g: &Graph) -> Result<Self> {
        Ok(Self { triangles: count_triangles(g)?, two_paths: count_two_paths(g)? })
    }

    /// Global clustering coefficient `3T / P`, zero when there are no two-paths.
    pub fn gcc(&self) -> f64 {
        if self.two_paths == 0 {
            0.0
        } else {
            3.0 * self.triangles as f64 / self.two_paths as f64
        }
    }

    /// Closed-to-all triplet ratio `T / P` (the gcc without the factor 3).
    pub fn triangle_ratio(&self) -> f64 {
        if self.two_paths == 0 {
            0.0
        } else {
            self.triangles as f64 / self.two_paths as f64
        }
    }
}

pub fn gcc(g: &Graph) -> Result<f64> {
    Ok(Clustering::of(g)?.gcc())
}

/// A node subset `S` with `S` nonempty and different from `V`.
#[derive(Debug, Clone)]
pub struct CutSpec {
    member: Vec<bool>,
    size: usize,
}

impl CutSpec {
    pub fn new(n: usize, members: impl IntoIterator<Item = NodeId>) -> Result<Self> {
        let mut member = vec![false; n];
        for u in members {
            let slot = member.get_mut(u as usize).ok_or(Error::NodeOutOfRange { id: u as usize, n })?;
            *slot = true;
        }
        let size = member.iter().filter(|&&m| m).count();
        if size == 0 || size == n {
            return Err(Error::InvalidCut);
        }
        Ok(Self { member, size })
    }

    pub fn contains(&self, u: NodeId) -> bool {
        self.member[u as usize]
    }

    pub fn len(&self) -> usize {
        self.size
    }

    pub fn is_empty(&self) -> bool {
        self.size == 0
    }

    pub fn complement(&self) -> Self {
        Self { member: self.member.iter().map(|m| !m).collect(), size: self.member.len() - self.size }
    }
}

/// Edges with exactly one endpoint in `S`.
pub fn cut_edges(g: &Graph, cut: &CutSpec) -> Result<usize> {
    if cut.member.len() != g.node_count() {
        return Err(Error::InvalidCut);
    }
    Ok(g.edges().filter(|&(u, v)| cut.contains(u) != cut.contains(v)).count())
}

/// `e(S, S̄) / min(|S|, |S̄|)`: cut edges over the node count of the smaller
/// side (not its volume).
pub fn conductance(g: &Graph, cut: &CutSpec) -> Result<f64> {
    let e = cut_edges(g, cut)?;
    let smaller = cut.size.min(g.node_count() - cut.size);
    Ok(e as f64 / smaller as f64)
}
