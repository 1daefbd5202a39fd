//! Almost-dominating sets: greedy maximum coverage, prestige order, domination
//! curves and the exponent `p = log s / log n` of the smallest prefix
//! reaching a target coverage.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId};
use crate::models::HeightAssignment;

/// Which nodes a set `S` dominates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Semantics {
    /// Members of `S` and every node with a neighbor in `S`.
    #[default]
    Standard,
    /// Only nodes with a neighbor in `S`; members need a neighbor in `S` too.
    Total,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Strategy {
    Greedy,
    Prestige,
    LogisticCp,
    LogisticJb,
    LogisticTh,
}

impl Strategy {
    pub fn name(self) -> &'static str {
        match self {
            Strategy::Greedy => "greedy",
            Strategy::Prestige => "prestige",
            Strategy::LogisticCp => "logistic-cp",
            Strategy::LogisticJb => "logistic-jb",
            Strategy::LogisticTh => "logistic-th",
        }
    }
}

/// An ordering of nodes (a full permutation, or a prefix of one for greedy runs that stop early).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NodeRanking {
    pub order: Vec<NodeId>,
    pub strategy: Strategy,
}

impl NodeRanking {
    /// Checks that `order` lists distinct ids below `n`.
    pub fn new(order: Vec<NodeId>, strategy: Strategy, n: usize) -> Result<Self> {
        let mut seen = vec![false; n];
        for &u in &order {
            let slot = seen.get_mut(u as usize).ok_or(Error::NodeOutOfRange { id: u as usize, n })?;
            if std::mem::replace(slot, true) {
                return Err(Error::MalformedInput { line: None, msg: format!("node {u} ranked twice") });
            }
        }
        Ok(Self { order, strategy })
    }

    /// Descending score order, ties by ascending id.
    pub fn by_descending_score(scores: &[f64], strategy: Strategy) -> Self {
        let mut order: Vec<NodeId> = (0..scores.len() as NodeId).collect();
        order.sort_by(|&a, &b| scores[b as usize].total_cmp(&scores[a as usize]).then(a.cmp(&b)));
        Self { order, strategy }
    }

    pub fn is_permutation_of(&self, n: usize) -> bool {
        self.order.len() == n && Self::new(self.order.clone(), self.strategy, n).is_ok()
    }
}

/// Covered fraction after each prefix of a ranking.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DominationCurve {
    pub node_count: usize,
    pub prefix_sizes: Vec<usize>,
    pub covered: Vec<usize>,
}

impl DominationCurve {
    pub fn covered_fraction(&self) -> Vec<f64> {
        self.covered.iter().map(|&c| c as f64 / self.node_count as f64).collect()
    }

    pub fn max_coverage(&self) -> f64 {
        self.covered.last().map_or(0.0, |&c| c as f64 / self.node_count as f64)
    }

    /// Smallest prefix size whose coverage is at least `kappa`.
    pub fn prefix_reaching(&self, kappa: f64) -> Option<usize> {
        let need = kappa * self.node_count as f64 - 1e-9;
        self.covered.iter().position(|&c| c as f64 >= need).map(|i| self.prefix_sizes[i])
    }

    /// CSV with header `prefix_size,covered_fraction`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("prefix_size,covered_fraction\n");
        for (s, f) in self.prefix_sizes.iter().zip(self.covered_fraction()) {
            out.push_str(&format!("{s},{f}\n"));
        }
        out
    }
}

fn membership(n: usize, set: &[NodeId]) -> Result<Vec<bool>> {
    let mut member = vec![false; n];
    for &u in set {
        *member.get_mut(u as usize).ok_or(Error::NodeOutOfRange { id: u as usize, n })? = true;
    }
    Ok(member)
}

/// Number of nodes dominated by `set`. For directed graphs a node is
/// dominated through an arc pointing into `set`.
pub fn dominated_count_with(g: &Graph, set: &[NodeId], semantics: Semantics) -> Result<usize> {
    let member = membership(g.node_count(), set)?;
    Ok(g.nodes()
        .filter(|&v| {
            (semantics == Semantics::Standard && member[v as usize])
                || g.neighbors(v).iter().any(|&u| member[u as usize])
        })
        .count())
}

/// `|S ∪ N(S)|`.
pub fn dominated_count(g: &Graph, set: &[NodeId]) -> Result<usize> {
    dominated_count_with(g, set, Semantics::Standard)
}

/// Outcome of the greedy maximum-coverage run.
#[derive(Debug, Clone, PartialEq)]
pub struct GreedyCoverage {
    pub ranking: NodeRanking,
    pub curve: DominationCurve,
    /// Newly dominated nodes per step; nonincreasing.
    pub gains: Vec<usize>,
}

/// Greedy maximum coverage: repeatedly takes the node whose closed
/// neighborhood holds the most undominated nodes (smallest id on ties),
/// until everything is dominated or `k` nodes are chosen.
pub fn greedy_max_coverage(g: &Graph, k: Option<usize>) -> Result<GreedyCoverage> {
    if g.is_directed() {
        return Err(Error::Unsupported("greedy coverage on a directed graph"));
    }
    let n = g.node_count();
    let limit = k.unwrap_or(n);
    if limit > n {
        return Err(Error::InvalidParams(format!("step cap {limit} exceeds {n} nodes")));
    }
    let mut gain: Vec<usize> = g.degrees().iter().map(|d| d + 1).collect();
    let mut dominated = vec![false; n];
    let mut heap: BinaryHeap<(usize, Reverse<NodeId>)> = g.nodes().map(|u| (gain[u as usize], Reverse(u))).collect();

    let (mut order, mut gains, mut covered) = (Vec::new(), Vec::new(), Vec::new());
    let mut total = 0;
    while order.len() < limit && total < n {
        let Some((recorded, Reverse(u))) = heap.pop() else { break };
        if recorded != gain[u as usize] {
            continue;
        }
        let step = gain[u as usize];
        assert!(gains.last().is_none_or(|&last| step <= last), "greedy gains must not increase");
        for v in std::iter::once(u).chain(g.neighbors(u).iter().copied()) {
            if std::mem::replace(&mut dominated[v as usize], true) {
                continue;
            }
            total += 1;
            // v no longer counts toward anyone's closed neighborhood
            for w in std::iter::once(v).chain(g.neighbors(v).iter().copied()) {
                gain[w as usize] -= 1;
                if gain[w as usize] > 0 {
                    heap.push((gain[w as usize], Reverse(w)));
                }
            }
        }
        order.push(u);
        gains.push(step);
        covered.push(total);
    }
    let curve = DominationCurve { node_count: n, prefix_sizes: (1..=order.len()).collect(), covered };
    Ok(GreedyCoverage { ranking: NodeRanking { order, strategy: Strategy::Greedy }, curve, gains })
}

/// Ascending height, then descending degree, then ascending id.
pub fn prestige_ranking(heights: &HeightAssignment, degrees: &[usize]) -> Result<NodeRanking> {
    let n = degrees.len();
    if heights.node_count() < n {
        return Err(Error::MissingHeights(heights.node_count()));
    }
    let mut order: Vec<NodeId> = (0..n as NodeId).collect();
    order.sort_by_key(|&u| (heights.height(u), Reverse(degrees[u as usize]), u));
    Ok(NodeRanking { order, strategy: Strategy::Prestige })
}

/// Coverage after every prefix of `ranking`, computed incrementally in `O(n + m)`.
pub fn domination_curve(g: &Graph, ranking: &NodeRanking) -> Result<DominationCurve> {
    if g.is_directed() {
        return Err(Error::Unsupported("domination curve on a directed graph"));
    }
    let n = g.node_count();
    let mut dominated = vec![false; n];
    let mut total = 0;
    let mut covered = Vec::with_capacity(ranking.order.len());
    for &u in &ranking.order {
        if u as usize >= n {
            return Err(Error::NodeOutOfRange { id: u as usize, n });
        }
        for v in std::iter::once(u).chain(g.neighbors(u).iter().copied()) {
            if !std::mem::replace(&mut dominated[v as usize], true) {
                total += 1;
            }
        }
        covered.push(total);
    }
    Ok(DominationCurve { node_count: n, prefix_sizes: (1..=covered.len()).collect(), covered })
}

/// `log s / log n` for the smallest prefix `s` reaching coverage `kappa`.
pub fn ads_exponent(curve: &DominationCurve, kappa: f64) -> Result<f64> {
    let s =
        curve.prefix_reaching(kappa).ok_or(Error::CoverageNotReached { kappa, max_coverage: curve.max_coverage() })?;
    let n = curve.node_count as f64;
    Ok(if curve.node_count <= 1 { 0.0 } else { (s as f64).ln() / n.ln() })
}

/// Fits `log10(% covered by other) = gamma log10(% covered by reference) + k`
/// over the prefix sizes both curves share. Returns `(gamma, k, R^2)`.
pub fn curve_log_regression(reference: &DominationCurve, other: &DominationCurve) -> Option<(f64, f64, f64)> {
    let points: Vec<(f64, f64)> = reference
        .covered_fraction()
        .iter()
        .zip(other.covered_fraction())
        .map(|(x, y)| ((100.0 * x).log10(), (100.0 * y).log10()))
        .collect();
    crate::fitting::least_squares(&points)
}

pub const BRUTE_FORCE_LIMIT: usize = 20;

/// Minimum dominating set by enumerating subsets in increasing size; the
/// lexicographically smallest minimum set is returned.
pub fn brute_force_min_dominating_set(g: &Graph) -> Result<Vec<NodeId>> {
    let n = g.node_count();
    if n > BRUTE_FORCE_LIMIT {
        return Err(Error::TooLarge { n, max: BRUTE_FORCE_LIMIT });
    }
    if n == 0 {
        return Ok(Vec::new());
    }
    let closed: Vec<u32> = g.nodes().map(|u| g.neighbors(u).iter().fold(1u32 << u, |m, &v| m | 1 << v)).collect();
    let full = if n == 32 { u32::MAX } else { (1u32 << n) - 1 };
    for k in 1..=n {
        // combinations in lexicographic order
        let mut idx: Vec<usize> = (0..k).collect();
        loop {
            if idx.iter().fold(0u32, |m, &i| m | closed[i]) == full {
                return Ok(idx.iter().map(|&i| i as NodeId).collect());
            }
            let Some(pos) = (0..k).rev().find(|&i| idx[i] < n - k + i) else { break };
            idx[pos] += 1;
            for j in pos + 1..k {
                idx[j] = idx[j - 1] + 1;
            }
        }
    }
    unreachable!("the full node set dominates")
}

/// Whether every node lies in `set` or has a neighbor (out-neighbor, for
/// directed graphs) in it.
pub fn dominates_all(g: &Graph, set: &[NodeId]) -> Result<bool> {
    Ok(dominated_count(g, set)? == g.node_count())
}
