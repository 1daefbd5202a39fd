//! The skeleton tree: level populations and node heights.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::NodeId;

/// Node count of a perfect `b`-ary tree of height `H`: `(b^(H+1) - 1) / (b - 1)`.
pub fn full_tree_node_count(b: u32, height: u32) -> Result<u64> {
    if b < 2 {
        return Err(Error::InvalidParams(format!("fanout b = {b} must be at least 2")));
    }
    let mut total: u64 = 0;
    let mut level: u64 = 1;
    for h in 0..=height {
        total =
            total.checked_add(level).ok_or_else(|| Error::Overflow(format!("b = {b}, H = {height} at level {h}")))?;
        if h < height {
            level = level.checked_mul(b as u64).ok_or_else(|| Error::Overflow(format!("b^{} for b = {b}", h + 1)))?;
        }
    }
    Ok(total)
}

/// Level populations of a full tree, `b^h` for `h = 0..=H`.
pub fn full_level_sizes(b: u32, height: u32) -> Result<Vec<u64>> {
    full_tree_node_count(b, height)?;
    Ok((0..=height).map(|h| (b as u64).pow(h)).collect())
}

/// Map from node to its height in the skeleton tree (0 = most prestigious).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HeightAssignment {
    heights: Vec<u32>,
    fanout: u32,
}

impl HeightAssignment {
    /// Wraps explicit heights. Level `h < max` must hold exactly `b^h` nodes;
    /// the deepest level may be incomplete.
    pub fn new(heights: Vec<u32>, fanout: u32) -> Result<Self> {
        let a = Self { heights, fanout };
        let sizes = a.level_sizes();
        let last = sizes.len().saturating_sub(1);
        for (h, &s) in sizes.iter().enumerate() {
            let full = (fanout as u64).checked_pow(h as u32).unwrap_or(u64::MAX);
            if (h < last && s != full) || s > full || s == 0 {
                return Err(Error::InvalidParams(format!(
                    "level {h} holds {s} nodes, expected {}{full}",
                    if h == last { "at most " } else { "" }
                )));
            }
        }
        Ok(a)
    }

    /// Level-order assignment of the full tree: ids `0` is the root, the
    /// next `b` ids form level 1, and so on.
    pub fn full_tree(b: u32, height: u32) -> Result<Self> {
        let sizes = full_level_sizes(b, height)?;
        let n: u64 = sizes.iter().sum();
        if n > NodeId::MAX as u64 {
            return Err(Error::TooLarge { n: n as usize, max: NodeId::MAX as usize });
        }
        let heights = sizes.iter().enumerate().flat_map(|(h, &s)| std::iter::repeat_n(h as u32, s as usize)).collect();
        Ok(Self { heights, fanout: b })
    }

    /// Fills levels top-down in the given node order: the first node gets
    /// height 0, the next `b` height 1, the next `b^2` height 2, and so on.
    pub fn from_order(order: &[NodeId], b: u32) -> Result<Self> {
        if b < 2 {
            return Err(Error::InvalidParams(format!("fanout b = {b} must be at least 2")));
        }
        let n = order.len();
        let mut heights = vec![u32::MAX; n];
        let (mut pos, mut level, mut width) = (0usize, 0u32, 1usize);
        while pos < n {
            let end = pos.saturating_add(width).min(n);
            for &u in &order[pos..end] {
                let slot = heights.get_mut(u as usize).ok_or(Error::NodeOutOfRange { id: u as usize, n })?;
                *slot = level;
            }
            pos = end;
            level += 1;
            width = width.saturating_mul(b as usize);
        }
        if let Some(u) = heights.iter().position(|&h| h == u32::MAX) {
            return Err(Error::MissingHeights(u));
        }
        Ok(Self { heights, fanout: b })
    }

    pub fn heights(&self) -> &[u32] {
        &self.heights
    }

    #[inline]
    pub fn height(&self, u: NodeId) -> u32 {
        self.heights[u as usize]
    }

    pub fn fanout(&self) -> u32 {
        self.fanout
    }

    pub fn node_count(&self) -> usize {
        self.heights.len()
    }

    /// Deepest populated level.
    pub fn max_height(&self) -> u32 {
        self.heights.iter().copied().max().unwrap_or(0)
    }

    pub fn level_sizes(&self) -> Vec<u64> {
        let mut sizes = vec![0u64; self.max_height() as usize + 1];
        for &h in &self.heights {
            sizes[h as usize] += 1;
        }
        sizes
    }

    /// Nodes with height at most `tau`.
    pub fn prefix(&self, tau: u32) -> Vec<NodeId> {
        (0..self.heights.len() as NodeId).filter(|&u| self.height(u) <= tau).collect()
    }

    pub(crate) fn swap(&mut self, u: NodeId, v: NodeId) {
        self.heights.swap(u as usize, v as usize);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn node_counts() {
        assert_eq!(full_tree_node_count(2, 0).unwrap(), 1);
        assert_eq!(full_tree_node_count(3, 6).unwrap(), 1093);
        assert_eq!(full_tree_node_count(3, 2).unwrap(), 13);
        assert!(matches!(full_tree_node_count(10, 25), Err(Error::Overflow(_))));
    }

    #[test]
    fn full_tree_is_level_ordered() {
        let a = HeightAssignment::full_tree(2, 2).unwrap();
        assert_eq!(a.heights(), &[0, 1, 1, 2, 2, 2, 2]);
        assert_eq!(a.level_sizes(), vec![1, 2, 4]);
    }

    #[test]
    fn order_fill_allows_incomplete_last_level() {
        let order: Vec<NodeId> = (0..5).collect();
        assert_eq!(HeightAssignment::from_order(&order, 2).unwrap().level_sizes(), vec![1, 2, 2]);
        let order: Vec<NodeId> = (0..7).collect();
        assert_eq!(HeightAssignment::from_order(&order, 2).unwrap().level_sizes(), vec![1, 2, 4]);
        let order: Vec<NodeId> = (0..205).collect();
        assert_eq!(HeightAssignment::from_order(&order, 3).unwrap().level_sizes(), vec![1, 3, 9, 27, 81, 84]);
    }

    #[test]
    fn order_fill_follows_order() {
        let a = HeightAssignment::from_order(&[2, 0, 1], 2).unwrap();
        assert_eq!(a.heights(), &[1, 1, 0]);
    }

    #[test]
    fn explicit_heights_are_checked() {
        assert!(HeightAssignment::new(vec![0, 1, 1, 2], 2).is_ok());
        assert!(HeightAssignment::new(vec![0, 1, 2], 2).is_err());
        assert!(HeightAssignment::new(vec![0, 0, 1], 2).is_err());
    }
}
