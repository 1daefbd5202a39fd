//! Samplers for the model family.
//!
//! Nodes are numbered in level order, so every pair of levels `(r, s)` is a
//! contiguous block of node pairs sharing one edge probability. Each block
//! is sampled by geometric skipping with its own ChaCha8 stream (stream id
//! `r * levels + s`, seeded by the caller's seed), which makes the output
//! independent of how blocks are scheduled across threads.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::laws::{igam2_law, scale_law};
use super::params::{Igam2Params, IgamParams};
use super::tree::HeightAssignment;
use crate::error::Result;
use crate::graph::{Graph, NodeId};

/// Calls `emit(row, col)` for each success among consecutive Bernoulli(`p`)
/// trials laid out as rows of the given lengths.
fn skip_sample<R: Rng>(rows: impl Iterator<Item = u64>, p: f64, rng: &mut R, mut emit: impl FnMut(u64, u64)) {
    if p <= 0.0 {
        return;
    }
    let log_q = (-p).ln_1p();
    let mut rows = rows.enumerate();
    let Some((mut row, mut len)) = rows.next() else { return };
    let mut pos: u64 = 0;
    loop {
        let skip = if p >= 1.0 { 0.0 } else { ((-rng.random::<f64>()).ln_1p() / log_q).floor() };
        pos = pos.saturating_add(skip.min(u64::MAX as f64 / 4.0) as u64);
        while pos >= len {
            pos -= len;
            match rows.next() {
                Some((r, l)) => (row, len) = (r, l),
                None => return,
            }
        }
        emit(row as u64, pos);
        pos += 1;
    }
}

fn block_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Samples every pair of a level-ordered node set independently with a
/// probability that depends only on the two levels.
fn sample_level_blocks(
    sizes: &[u64],
    seed: u64,
    directed: bool,
    prob: impl Fn(u32, u32) -> f64 + Sync,
) -> Vec<(NodeId, NodeId)> {
    let levels = sizes.len() as u32;
    let mut offsets = vec![0u64];
    for &s in sizes {
        offsets.push(offsets.last().unwrap() + s);
    }
    let blocks: Vec<(u32, u32)> =
        (0..levels).flat_map(|r| (if directed { 0 } else { r }..levels).map(move |s| (r, s))).collect();
    let per_block: Vec<Vec<(NodeId, NodeId)>> = blocks
        .par_iter()
        .map(|&(r, s)| {
            let (nr, ns) = (sizes[r as usize], sizes[s as usize]);
            let (or, os) = (offsets[r as usize], offsets[s as usize]);
            let p = prob(r, s);
            let mut rng = block_rng(seed, r as u64 * levels as u64 + s as u64);
            let mut out = Vec::new();
            if r != s {
                skip_sample(std::iter::repeat_n(ns, nr as usize), p, &mut rng, |i, j| {
                    out.push(((or + i) as NodeId, (os + j) as NodeId))
                });
            } else if directed {
                skip_sample(std::iter::repeat_n(nr.saturating_sub(1), nr as usize), p, &mut rng, |i, j| {
                    let j = if j < i { j } else { j + 1 };
                    out.push(((or + i) as NodeId, (or + j) as NodeId))
                });
            } else {
                skip_sample((0..nr).map(|i| nr - 1 - i), p, &mut rng, |i, j| {
                    out.push(((or + i) as NodeId, (or + i + 1 + j) as NodeId))
                });
            }
            out
        })
        .collect();
    per_block.concat()
}

/// Draws a graph from the base model. Node ids are level-ordered; the
/// skeleton tree's own edges are not part of the output.
pub fn sample_igam(p: &IgamParams, seed: u64) -> Result<(Graph, HeightAssignment)> {
    p.validate()?;
    let heights = HeightAssignment::full_tree(p.b, p.height)?;
    let edges = sample_level_blocks(&heights.level_sizes(), seed, false, |r, s| scale_law(p.c, r.min(s) as f64));
    let g = Graph::from_edge_list(&edges, Some(heights.node_count()))?;
    Ok((g, heights))
}

/// Draws a graph from the two-regime model.
pub fn sample_igam2(p: &Igam2Params, seed: u64) -> Result<(Graph, HeightAssignment)> {
    p.validate()?;
    let heights = HeightAssignment::full_tree(p.b, p.height)?;
    let edges = sample_level_blocks(&heights.level_sizes(), seed, false, |r, s| igam2_law(p, r, s));
    let g = Graph::from_edge_list(&edges, Some(heights.node_count()))?;
    Ok((g, heights))
}

/// Draws a directed graph: each ordered pair `(x, y)` carries the arc
/// `x -> y` independently with probability `c^(-1 - h(y))`.
pub fn sample_directed_igam(p: &IgamParams, seed: u64) -> Result<(Graph, HeightAssignment)> {
    p.validate()?;
    let heights = HeightAssignment::full_tree(p.b, p.height)?;
    let edges = sample_level_blocks(&heights.level_sizes(), seed, true, |_, s| scale_law(p.c, s as f64));
    let g = Graph::from_arc_list(&edges, Some(heights.node_count()))?;
    Ok((g, heights))
}

/// Inverse of the height CDF `(b^t - 1) / (b^H - 1)` on `[0, H]`.
pub fn continuous_height_quantile(b: u32, height: u32, u: f64) -> f64 {
    let span = (b as f64).powi(height as i32) - 1.0;
    (u * span).ln_1p() / (b as f64).ln()
}

/// Latent heights drawn i.i.d. by inverse transform.
pub fn sample_continuous_heights(p: &IgamParams, n: usize, seed: u64) -> Result<Vec<f64>> {
    p.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok((0..n).map(|_| continuous_height_quantile(p.b, p.height, rng.random::<f64>())).collect())
}

/// Continuous variant: latent real heights, then every pair joined with
/// probability `c^(-1 - min(h(u), h(v)))`.
pub fn sample_continuous_igam(p: &IgamParams, n: usize, seed: u64) -> Result<(Graph, Vec<f64>)> {
    let heights = sample_continuous_heights(p, n, seed)?;
    let mut order: Vec<NodeId> = (0..n as NodeId).collect();
    order.sort_by(|&a, &b| heights[a as usize].total_cmp(&heights[b as usize]).then(a.cmp(&b)));
    // after sorting, the pair (order[i], order[j]) with i < j has min height heights[order[i]]
    let mut rng = block_rng(seed, 1);
    let mut edges = Vec::new();
    for i in 0..n {
        let p_row = scale_law(p.c, heights[order[i] as usize]);
        let len = (n - 1 - i) as u64;
        skip_sample(std::iter::once(len), p_row, &mut rng, |_, j| edges.push((order[i], order[i + 1 + j as usize])));
    }
    Ok((Graph::from_edge_list(&edges, Some(n))?, heights))
}
