//! Study datasets: preprocessing, the registry of expected sizes and loading
//! from a data directory.
//!
//! A data directory holds one folder per dataset:
//!
//! ```text
//! <dir>/<name>/edges.txt     edge list
//! <dir>/<name>/labels.csv    node_id,label        (optional)
//! <dir>/<name>/coords.csv    node_id,x,y[,z]      (optional)
//! ```

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId};
use crate::io;
use crate::models::HeightAssignment;

/// Nodes of degree at most this are dropped by the filter.
pub const MIN_DEGREE_CUTOFF: usize = 4;

pub const DATA_DIR_ENV: &str = "IGAM_DATA_DIR";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DegreeFilter {
    /// One removal pass using the degrees of the symmetrized input.
    #[default]
    SinglePass,
    /// Repeat removal until every remaining degree exceeds the cutoff.
    Iterated,
    Skip,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Preprocessed {
    pub graph: Graph,
    pub old_to_new: Vec<Option<NodeId>>,
    pub new_to_old: Vec<NodeId>,
}

/// Symmetrizes, drops loops and duplicates, applies the degree filter and
/// renumbers the survivors densely in their original order.
pub fn preprocess(raw: &Graph, filter: DegreeFilter) -> Result<Preprocessed> {
    let g = raw.to_undirected();
    let mut current = g.clone();
    let mut kept: Vec<NodeId> = g.nodes().collect();
    if filter != DegreeFilter::Skip {
        loop {
            let survivors: Vec<NodeId> = current.nodes().filter(|&u| current.degree(u) > MIN_DEGREE_CUTOFF).collect();
            if survivors.len() == current.node_count() {
                break;
            }
            kept = survivors.iter().map(|&u| kept[u as usize]).collect();
            current = current.induced_subgraph(&survivors).0;
            if filter == DegreeFilter::SinglePass {
                break;
            }
        }
    }
    if kept.is_empty() {
        return Err(Error::EmptyGraph);
    }
    let mut old_to_new = vec![None; g.node_count()];
    for (new, &old) in kept.iter().enumerate() {
        old_to_new[old as usize] = Some(new as NodeId);
    }
    Ok(Preprocessed { graph: current, old_to_new, new_to_old: kept })
}

/// CSV with header `node_id,original_id`.
pub fn format_id_map(new_to_old: &[NodeId], tokens: &[String]) -> String {
    let mut out = String::from("node_id,original_id\n");
    for (new, &old) in new_to_old.iter().enumerate() {
        out.push_str(&format!("{new},{}\n", tokens[old as usize]));
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DatasetSpec {
    pub name: &'static str,
    pub expected_n: usize,
    pub expected_m: usize,
    /// Relative slack on the expected sizes when they are only known rounded.
    pub size_tolerance: f64,
    pub has_coordinates: bool,
    pub skip_degree_filter: bool,
}

impl DatasetSpec {
    const fn exact(name: &'static str, n: usize, m: usize) -> Self {
        Self {
            name,
            expected_n: n,
            expected_m: m,
            size_tolerance: 0.0,
            has_coordinates: false,
            skip_degree_filter: false,
        }
    }

    pub fn source_path(&self, root: &Path) -> PathBuf {
        root.join(self.name).join("edges.txt")
    }

    pub fn filter(&self) -> DegreeFilter {
        if self.skip_degree_filter {
            DegreeFilter::Skip
        } else {
            DegreeFilter::SinglePass
        }
    }

    pub fn check_size(&self, n: usize, m: usize) -> SizeCheck {
        let within = |got: usize, want: usize| (got as f64 - want as f64).abs() <= self.size_tolerance * want as f64;
        SizeCheck {
            expected_n: self.expected_n,
            expected_m: self.expected_m,
            n,
            m,
            matches: within(n, self.expected_n) && within(m, self.expected_m),
        }
    }
}

static REGISTRY: [DatasetSpec; 9] = [
    DatasetSpec::exact("world-trade", 76, 845),
    DatasetSpec::exact("cs-faculty", 205, 2861),
    DatasetSpec::exact("history-faculty", 145, 2334),
    DatasetSpec::exact("business-faculty", 113, 3027),
    DatasetSpec::exact("polblogs", 852, 15956),
    DatasetSpec::exact("airports", 210, 2429),
    DatasetSpec { size_tolerance: 0.03, has_coordinates: true, ..DatasetSpec::exact("c-elegans", 279, 1900) },
    DatasetSpec { size_tolerance: 0.01, has_coordinates: true, ..DatasetSpec::exact("open-airlines", 7200, 18600) },
    DatasetSpec {
        has_coordinates: true,
        skip_degree_filter: true,
        ..DatasetSpec::exact("london-underground", 315, 270)
    },
];

pub fn registry() -> &'static [DatasetSpec] {
    &REGISTRY
}

pub fn find_dataset(name: &str) -> Option<&'static DatasetSpec> {
    REGISTRY.iter().find(|d| d.name == name)
}

/// The directory named by `IGAM_DATA_DIR`, if set.
pub fn data_dir() -> Option<PathBuf> {
    std::env::var_os(DATA_DIR_ENV).map(PathBuf::from)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SizeCheck {
    pub expected_n: usize,
    pub expected_m: usize,
    pub n: usize,
    pub m: usize,
    pub matches: bool,
}

#[derive(Debug, Clone)]
pub struct Dataset {
    pub spec: DatasetSpec,
    /// Preprocessed graph with labels, and coordinates when available.
    pub graph: Graph,
    pub size: SizeCheck,
    /// Original token of each preprocessed node.
    pub original_ids: Vec<String>,
}

/// Loads raw files from `dir/<name>/` into a graph with labels and, if
/// present, coordinates.
pub fn load_raw(dir: &Path) -> Result<(Graph, io::EdgeList)> {
    let edges = io::read_edge_list(&dir.join("edges.txt"))?;
    let mut g = edges.to_graph()?;
    let labels_path = dir.join("labels.csv");
    if labels_path.exists() {
        g = g.with_labels(io::parse_labels(&std::fs::read_to_string(labels_path)?, &edges)?)?;
    } else if !edges.integer_ids {
        g = g.with_labels(edges.tokens.clone())?;
    }
    let coords_path = dir.join("coords.csv");
    if coords_path.exists() {
        g = g.with_coordinates(io::parse_coordinates(&std::fs::read_to_string(coords_path)?, &edges)?)?;
    }
    Ok((g, edges))
}

/// Loads and preprocesses a registered dataset. A size mismatch against
/// the registry is logged as a warning and reported in [`Dataset::size`].
pub fn load_dataset(spec: &DatasetSpec, root: &Path, filter: Option<DegreeFilter>) -> Result<Dataset> {
    let (raw, edges) = load_raw(&root.join(spec.name))?;
    let pre = preprocess(&raw, filter.unwrap_or(spec.filter()))?;
    let size = spec.check_size(pre.graph.node_count(), pre.graph.edge_count());
    if !size.matches {
        log::warn!(
            "{}: n = {} (expected {}, delta {:+}), m = {} (expected {}, delta {:+})",
            spec.name,
            size.n,
            size.expected_n,
            size.n as i64 - size.expected_n as i64,
            size.m,
            size.expected_m,
            size.m as i64 - size.expected_m as i64
        );
    }
    let original_ids = pre.new_to_old.iter().map(|&u| edges.tokens[u as usize].clone()).collect();
    Ok(Dataset { spec: *spec, graph: pre.graph, size, original_ids })
}

/// Labels of the first `depth` levels, each level listed by descending
/// degree then id. Unlabeled graphs report numeric ids.
pub fn core_labels_report(g: &Graph, heights: &HeightAssignment, depth: u32) -> Vec<Vec<String>> {
    let mut levels: Vec<Vec<NodeId>> = vec![Vec::new(); depth as usize];
    for u in g.nodes() {
        if let Some(level) = levels.get_mut(heights.height(u) as usize) {
            level.push(u);
        }
    }
    levels
        .into_iter()
        .map(|mut level| {
            level.sort_by_key(|&u| (std::cmp::Reverse(g.degree(u)), u));
            level.into_iter().map(|u| g.label(u)).collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn complete(n: u32, offset: u32) -> Vec<(NodeId, NodeId)> {
        let mut e = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                e.push((u + offset, v + offset));
            }
        }
        e
    }

    #[test]
    fn reciprocal_arcs_become_one_edge() {
        let g = Graph::from_arc_list(&[(0, 1), (1, 0)], None).unwrap();
        let p = preprocess(&g, DegreeFilter::Skip).unwrap();
        assert!(!p.graph.is_directed());
        assert_eq!(p.graph.edge_count(), 1);
    }

    #[test]
    fn star_with_four_leaves_empties() {
        let g = Graph::from_edge_list(&[(0, 1), (0, 2), (0, 3), (0, 4)], None).unwrap();
        assert!(matches!(preprocess(&g, DegreeFilter::SinglePass), Err(Error::EmptyGraph)));
    }

    #[test]
    fn filter_renumbers_in_order() {
        // K6 on 0..6 plus a pendant node 6 hanging off node 2
        let mut e = complete(6, 0);
        e.push((2, 6));
        let g = Graph::from_edge_list(&e, None).unwrap();
        let p = preprocess(&g, DegreeFilter::SinglePass).unwrap();
        assert_eq!(p.graph.node_count(), 6);
        assert_eq!(p.graph.edge_count(), 15);
        assert_eq!(p.old_to_new[6], None);
        assert_eq!(p.new_to_old, vec![0, 1, 2, 3, 4, 5]);
    }

    #[test]
    fn single_pass_can_expose_new_low_degrees() {
        // K6 plus node 6 adjacent to four K6 nodes and a chain of pendants
        let mut e = complete(6, 0);
        e.extend([(6, 0), (6, 1), (6, 2), (6, 3), (6, 7), (7, 8)]);
        let g = Graph::from_edge_list(&e, None).unwrap();
        let once = preprocess(&g, DegreeFilter::SinglePass).unwrap();
        assert_eq!(once.graph.node_count(), 7);
        let twice = preprocess(&once.graph, DegreeFilter::SinglePass).unwrap();
        assert_eq!(twice.graph.node_count(), 6);
        let iterated = preprocess(&g, DegreeFilter::Iterated).unwrap();
        assert_eq!(iterated.graph.node_count(), 6);
        assert_eq!(preprocess(&iterated.graph, DegreeFilter::Iterated).unwrap().graph, iterated.graph);
    }

    #[test]
    fn registry_sizes() {
        assert_eq!(registry().len(), 9);
        let wt = find_dataset("world-trade").unwrap();
        assert!(wt.check_size(76, 845).matches);
        assert!(!wt.check_size(76, 844).matches);
        let lu = find_dataset("london-underground").unwrap();
        assert_eq!(lu.filter(), DegreeFilter::Skip);
        assert!(find_dataset("open-airlines").unwrap().check_size(7250, 18500).matches);
    }

    #[test]
    fn core_report_falls_back_to_ids() {
        let g = Graph::from_edge_list(&[(0, 1), (0, 2), (1, 2), (2, 3)], None).unwrap();
        let h = HeightAssignment::from_order(&[2, 0, 1, 3], 2).unwrap();
        assert_eq!(core_labels_report(&g, &h, 3), vec![vec!["2"], vec!["0", "1"], vec!["3"]]);
        let g = g.with_labels(vec!["a".into(), "b".into(), "c".into(), "d".into()]).unwrap();
        assert_eq!(core_labels_report(&g, &h, 1), vec![vec!["c"]]);
    }
}
