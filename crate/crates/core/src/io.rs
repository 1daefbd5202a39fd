//! Text formats: edge lists, the heights sidecar, label and coordinate CSVs.
//!
//! Edge lists hold one edge per line as two ids separated by whitespace or
//! a comma. Lines starting with `#` or `%` are comments; anything after the
//! second id (weights, timestamps) is ignored. When every id is a
//! nonnegative integer the ids are kept as they are, otherwise tokens are
//! interned to dense ids in first-seen order.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId};
use crate::models::HeightAssignment;

fn is_comment(line: &str) -> bool {
    let t = line.trim_start();
    t.is_empty() || t.starts_with('#') || t.starts_with('%')
}

fn fields(line: &str) -> impl Iterator<Item = &str> {
    line.split(|c: char| c == ',' || c.is_whitespace()).filter(|s| !s.is_empty())
}

/// Dense ids for arbitrary string tokens, in first-seen order.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Interner {
    ids: HashMap<String, NodeId>,
    names: Vec<String>,
}

impl Interner {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn intern(&mut self, token: &str) -> Result<NodeId> {
        if let Some(&id) = self.ids.get(token) {
            return Ok(id);
        }
        let id = NodeId::try_from(self.names.len())
            .map_err(|_| Error::TooLarge { n: self.names.len() + 1, max: NodeId::MAX as usize })?;
        self.ids.insert(token.to_owned(), id);
        self.names.push(token.to_owned());
        Ok(id)
    }

    pub fn get(&self, token: &str) -> Option<NodeId> {
        self.ids.get(token).copied()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }
}

/// Parsed edge list with the token of every dense id.
#[derive(Debug, Clone, PartialEq)]
pub struct EdgeList {
    pub edges: Vec<(NodeId, NodeId)>,
    /// Token for each id. Integer files map id `i` to `"i"`.
    pub tokens: Vec<String>,
    /// Whether the file's ids were used as-is.
    pub integer_ids: bool,
}

impl EdgeList {
    pub fn node_count(&self) -> usize {
        self.tokens.len()
    }

    pub fn id_of(&self, token: &str) -> Option<NodeId> {
        self.resolver()(token)
    }

    /// Token lookup that indexes string files once.
    fn resolver(&self) -> impl Fn(&str) -> Option<NodeId> + '_ {
        let index: HashMap<&str, NodeId> = if self.integer_ids {
            HashMap::new()
        } else {
            self.tokens.iter().enumerate().map(|(i, t)| (t.as_str(), i as NodeId)).collect()
        };
        move |token| {
            if self.integer_ids {
                token.parse::<NodeId>().ok().filter(|&i| (i as usize) < self.tokens.len())
            } else {
                index.get(token).copied()
            }
        }
    }

    pub fn to_graph(&self) -> Result<Graph> {
        Graph::from_edge_list(&self.edges, Some(self.node_count()))
    }

    pub fn to_directed_graph(&self) -> Result<Graph> {
        Graph::from_arc_list(&self.edges, Some(self.node_count()))
    }
}

/// Reads a `# nodes N` header, which pins the node count of integer files.
fn declared_nodes(line: &str) -> Option<usize> {
    let mut parts = line.trim_start_matches(['#', '%']).split_whitespace();
    (parts.next() == Some("nodes")).then(|| parts.next()?.parse().ok()).flatten()
}

pub fn parse_edge_list(text: &str) -> Result<EdgeList> {
    let mut raw: Vec<(usize, &str, &str)> = Vec::new();
    let mut declared = None;
    for (i, line) in text.lines().enumerate() {
        if is_comment(line) {
            declared = declared.or_else(|| declared_nodes(line.trim()));
            continue;
        }
        let mut f = fields(line);
        match (f.next(), f.next()) {
            (Some(a), Some(b)) => raw.push((i + 1, a, b)),
            _ => {
                return Err(Error::MalformedInput {
                    line: Some(i + 1),
                    msg: format!("expected two node ids, got {line:?}"),
                })
            }
        }
    }
    let all_integer = raw.iter().all(|(_, a, b)| a.parse::<NodeId>().is_ok() && b.parse::<NodeId>().is_ok());
    if all_integer {
        let edges: Vec<(NodeId, NodeId)> =
            raw.iter().map(|(_, a, b)| (a.parse().unwrap(), b.parse().unwrap())).collect();
        let seen = edges.iter().map(|&(u, v)| u.max(v) as usize + 1).max().unwrap_or(0);
        let n = match declared {
            Some(n) if n < seen => {
                return Err(Error::MalformedInput {
                    line: None,
                    msg: format!("header declares {n} nodes but id {} appears", seen - 1),
                })
            }
            Some(n) => n,
            None => seen,
        };
        return Ok(EdgeList { edges, tokens: (0..n).map(|i| i.to_string()).collect(), integer_ids: true });
    }
    let mut interner = Interner::new();
    let mut edges = Vec::with_capacity(raw.len());
    for (_, a, b) in raw {
        edges.push((interner.intern(a)?, interner.intern(b)?));
    }
    Ok(EdgeList { edges, tokens: interner.names, integer_ids: false })
}

pub fn read_edge_list(path: &Path) -> Result<EdgeList> {
    parse_edge_list(&std::fs::read_to_string(path)?)
}

/// One `u v` line per edge, after a `# nodes N` header so isolated nodes survive a round trip.
pub fn format_edge_list(g: &Graph) -> String {
    let mut out = format!("# nodes {}\n", g.node_count());
    for (u, v) in g.edges() {
        let _ = writeln!(out, "{u} {v}");
    }
    out
}

/// `node_id height` per line.
pub fn format_heights(h: &HeightAssignment) -> String {
    let mut out = String::new();
    for (u, height) in h.heights().iter().enumerate() {
        let _ = writeln!(out, "{u} {height}");
    }
    out
}

pub fn format_real_heights(h: &[f64]) -> String {
    let mut out = String::new();
    for (u, height) in h.iter().enumerate() {
        let _ = writeln!(out, "{u} {height}");
    }
    out
}

pub fn parse_heights(text: &str, fanout: u32) -> Result<HeightAssignment> {
    let mut pairs = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if is_comment(line) {
            continue;
        }
        let bad =
            || Error::MalformedInput { line: Some(i + 1), msg: format!("expected `node_id height`, got {line:?}") };
        let mut f = fields(line);
        let u: usize = f.next().and_then(|s| s.parse().ok()).ok_or_else(bad)?;
        let h: u32 = f.next().and_then(|s| s.parse().ok()).ok_or_else(bad)?;
        pairs.push((u, h));
    }
    let n = pairs.iter().map(|p| p.0 + 1).max().unwrap_or(0);
    let mut heights = vec![None; n];
    for (u, h) in pairs {
        heights[u] = Some(h);
    }
    let heights =
        heights.into_iter().enumerate().map(|(u, h)| h.ok_or(Error::MissingHeights(u))).collect::<Result<Vec<_>>>()?;
    HeightAssignment::new(heights, fanout)
}

/// Parses `node_id,label` rows (an optional header row is skipped) and
/// returns one label per node; unlisted nodes keep their token.
pub fn parse_labels(text: &str, edges: &EdgeList) -> Result<Vec<String>> {
    let mut labels = edges.tokens.clone();
    let id_of = edges.resolver();
    for (i, line) in text.lines().enumerate() {
        if is_comment(line) {
            continue;
        }
        let Some((id, label)) = line.split_once(',') else {
            return Err(Error::MalformedInput { line: Some(i + 1), msg: "expected `node_id,label`".into() });
        };
        let (id, label) = (id.trim(), label.trim().trim_matches('"'));
        if i == 0 && id == "node_id" {
            continue;
        }
        if let Some(u) = id_of(id) {
            labels[u as usize] = label.to_owned();
        }
    }
    Ok(labels)
}

/// Parses `node_id,x,y[,z]` rows; every node of the edge list needs a row.
pub fn parse_coordinates(text: &str, edges: &EdgeList) -> Result<Vec<Vec<f64>>> {
    let mut coords: Vec<Option<Vec<f64>>> = vec![None; edges.node_count()];
    let id_of = edges.resolver();
    for (i, line) in text.lines().enumerate() {
        if is_comment(line) {
            continue;
        }
        let parts: Vec<&str> = line.split(',').map(str::trim).collect();
        let values: Option<Vec<f64>> = parts[1..].iter().map(|s| s.parse().ok()).collect();
        let values = match values {
            Some(v) if (2..=3).contains(&v.len()) => v,
            _ if i == 0 => continue,
            _ => return Err(Error::MalformedInput { line: Some(i + 1), msg: "expected `node_id,x,y[,z]`".into() }),
        };
        if let Some(u) = id_of(parts[0]) {
            coords[u as usize] = Some(values);
        }
    }
    coords.into_iter().map(|c| c.ok_or(Error::MissingCoordinates)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integer_ids_are_kept() {
        let e = parse_edge_list("# comment\n% another\n3 1\n1,2\n\n").unwrap();
        assert!(e.integer_ids);
        assert_eq!(e.edges, vec![(3, 1), (1, 2)]);
        assert_eq!(e.node_count(), 4);
    }

    #[test]
    fn string_ids_are_interned_in_order() {
        let e = parse_edge_list("AMS FRA\nCDG AMS 17\n").unwrap();
        assert!(!e.integer_ids);
        assert_eq!(e.tokens, vec!["AMS", "FRA", "CDG"]);
        assert_eq!(e.edges, vec![(0, 1), (2, 0)]);
        assert_eq!(e.id_of("CDG"), Some(2));
    }

    #[test]
    fn bad_line_reports_number() {
        let err = parse_edge_list("0 1\n2\n").unwrap_err();
        assert!(matches!(err, Error::MalformedInput { line: Some(2), .. }));
    }

    #[test]
    fn round_trip_keeps_isolated_nodes() {
        let g = Graph::from_edge_list(&[(0, 2)], Some(5)).unwrap();
        let text = format_edge_list(&g);
        assert_eq!(text, "# nodes 5\n0 2\n");
        assert_eq!(parse_edge_list(&text).unwrap().to_graph().unwrap(), g);
        assert!(parse_edge_list("# nodes 2\n0 4\n").is_err());
    }

    #[test]
    fn heights_round_trip() {
        let h = HeightAssignment::full_tree(3, 2).unwrap();
        assert_eq!(parse_heights(&format_heights(&h), 3).unwrap(), h);
        assert!(matches!(parse_heights("0 0\n2 1\n", 2), Err(Error::MissingHeights(1))));
    }

    #[test]
    fn labels_and_coordinates() {
        let e = parse_edge_list("a b\nb c\n").unwrap();
        let labels = parse_labels("node_id,label\nb,\"Bank\"\nzz,ignored\n", &e).unwrap();
        assert_eq!(labels, vec!["a", "Bank", "c"]);
        let c = parse_coordinates("node_id,x,y\na,0,0\nb,3,4\nc,1,1\n", &e).unwrap();
        assert_eq!(c[1], vec![3.0, 4.0]);
        assert!(matches!(parse_coordinates("a,0,0\n", &e), Err(Error::MissingCoordinates)));
        assert!(parse_coordinates("a,0,0\nb,x,1\n", &e).is_err());
    }
}
