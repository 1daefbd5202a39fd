//! Fitting the base model to an observed graph.
//!
//! Nodes are sorted by sample degree and poured into the levels of a
//! `b`-ary tree. Per-level log degree totals are regressed on the level to
//! read off `c = b e^{-a}`, and the fanout with the highest likelihood wins.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Rejection, Result};
use crate::graph::{Graph, NodeId};
use crate::models::HeightAssignment;

/// Number of sample edges incident to each node, counting repeats.
pub fn sample_degrees(edges: &[(NodeId, NodeId)], n: usize) -> Result<Vec<usize>> {
    let mut deg = vec![0usize; n];
    for &(u, v) in edges {
        for x in [u, v] {
            *deg.get_mut(x as usize).ok_or(Error::NodeOutOfRange { id: x as usize, n })? += 1;
        }
    }
    Ok(deg)
}

/// Node ids by descending degree, ties by ascending id.
pub fn degree_order(degrees: &[usize]) -> Vec<NodeId> {
    let mut order: Vec<NodeId> = (0..degrees.len() as NodeId).collect();
    order.sort_by_key(|&u| (std::cmp::Reverse(degrees[u as usize]), u));
    order
}

/// Level `h` takes the next `b^h` nodes of `order`.
pub fn assign_heights(order: &[NodeId], b: u32) -> Result<HeightAssignment> {
    HeightAssignment::from_order(order, b)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LevelRegression {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
    /// `ln` of each level's total degree; `None` for levels with zero total.
    pub level_log_degrees: Vec<Option<f64>>,
}

/// Least squares of `z_h = ln(sum of degrees at level h)` on `h`.
pub fn level_regression(heights: &HeightAssignment, degrees: &[usize]) -> Result<LevelRegression, Rejection> {
    let mut totals = vec![0u64; heights.max_height() as usize + 1];
    for (u, &d) in degrees.iter().enumerate() {
        totals[heights.height(u as NodeId) as usize] += d as u64;
    }
    let z: Vec<Option<f64>> = totals.iter().map(|&t| (t > 0).then(|| (t as f64).ln())).collect();
    let points: Vec<(f64, f64)> = z.iter().enumerate().filter_map(|(h, z)| z.map(|z| (h as f64, z))).collect();
    if points.len() < 2 {
        return Err(Rejection::TooFewLevels(points.len()));
    }
    let (slope, intercept, r_squared) = least_squares(&points).expect("two distinct levels");
    Ok(LevelRegression { slope, intercept, r_squared, level_log_degrees: z })
}

/// Ordinary least squares `y = slope x + intercept`, returning
/// `(slope, intercept, R^2)`. `R^2` is 0 when `y` is constant; `None` when
/// fewer than two distinct `x` values are given.
pub fn least_squares(points: &[(f64, f64)]) -> Option<(f64, f64, f64)> {
    let k = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / k;
    let my = points.iter().map(|p| p.1).sum::<f64>() / k;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if !(sxx > 0.0) {
        return None;
    }
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let syy: f64 = points.iter().map(|p| (p.1 - my).powi(2)).sum();
    let slope = sxy / sxx;
    let r_squared = if syy == 0.0 { 0.0 } else { (sxy * sxy / (sxx * syy)).clamp(0.0, 1.0) };
    Some((slope, my - slope * mx, r_squared))
}

/// `c = b e^{-a}`, kept only inside `(1, b)`.
pub fn c_from_slope(b: u32, a: f64) -> Result<f64, Rejection> {
    let c = b as f64 * (-a).exp();
    if c > 1.0 && c < b as f64 {
        Ok(c)
    } else {
        Err(Rejection::ScaleOutOfRange(c))
    }
}

struct LevelTable {
    levels: usize,
    log_f: Vec<f64>,
    log_not_f: Vec<f64>,
}

impl LevelTable {
    fn new(levels: usize, c: f64) -> Result<Self> {
        if !(c > 1.0 && c.is_finite()) {
            return Err(Error::InvalidParams(format!("c = {c} gives edge probabilities of at least 1")));
        }
        let mut log_f = vec![0.0; levels * levels];
        let mut log_not_f = vec![0.0; levels * levels];
        for r in 0..levels {
            for s in 0..levels {
                let m = r.min(s) as f64;
                log_f[r * levels + s] = -(1.0 + m) * c.ln();
                log_not_f[r * levels + s] = (-c.powf(-1.0 - m)).ln_1p();
            }
        }
        Ok(Self { levels, log_f, log_not_f })
    }

    #[inline]
    fn at(&self, r: u32, s: u32) -> (f64, f64) {
        let i = r as usize * self.levels + s as usize;
        (self.log_f[i], self.log_not_f[i])
    }
}

fn check_inputs(g: &Graph, heights: &HeightAssignment) -> Result<()> {
    if g.is_directed() {
        return Err(Error::Unsupported("likelihood of a directed graph"));
    }
    if heights.node_count() != g.node_count() {
        return Err(Error::MissingHeights(heights.node_count().min(g.node_count())));
    }
    Ok(())
}

/// Log-likelihood over all unordered pairs of distinct nodes. Non-edges
/// are aggregated per pair of levels, so the cost is `O(H^2 + m)`.
pub fn log_likelihood_exact(g: &Graph, heights: &HeightAssignment, c: f64) -> Result<f64> {
    check_inputs(g, heights)?;
    let sizes = heights.level_sizes();
    let levels = sizes.len();
    let table = LevelTable::new(levels, c)?;
    let mut edges = vec![0u64; levels * levels];
    for (u, v) in g.edges() {
        let (a, b) = (heights.height(u), heights.height(v));
        edges[a.min(b) as usize * levels + a.max(b) as usize] += 1;
    }
    let mut total = 0.0;
    for r in 0..levels {
        for s in r..levels {
            let pairs = if r == s { sizes[r] * sizes[r].saturating_sub(1) / 2 } else { sizes[r] * sizes[s] };
            let e = edges[r * levels + s];
            let (lf, lnf) = table.at(r as u32, s as u32);
            if e > 0 {
                total += e as f64 * lf;
            }
            if pairs > e {
                total += (pairs - e) as f64 * lnf;
            }
        }
    }
    Ok(total)
}

/// Edge term only: `sum over edges of ln f(u, v)`.
pub fn log_likelihood_approx(g: &Graph, heights: &HeightAssignment, c: f64) -> Result<f64> {
    check_inputs(g, heights)?;
    let table = LevelTable::new(heights.max_height() as usize + 1, c)?;
    Ok(g.edges().map(|(u, v)| table.at(heights.height(u), heights.height(v)).0).sum())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scorer {
    #[default]
    Exact,
    Approx,
}

pub fn log_likelihood(g: &Graph, heights: &HeightAssignment, c: f64, scorer: Scorer) -> Result<f64> {
    match scorer {
        Scorer::Exact => log_likelihood_exact(g, heights, c),
        Scorer::Approx => log_likelihood_approx(g, heights, c),
    }
}

/// Largest fanout tried by default on graphs above [`LARGE_GRAPH`] nodes.
pub const DEFAULT_FANOUT_CAP: u32 = 64;
pub const LARGE_GRAPH: usize = 10_000;

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct FitOptions {
    pub scorer: Scorer,
    /// Inclusive fanout range; defaults to `2..=n-1`.
    pub b_range: Option<(u32, u32)>,
    pub swaps: bool,
    /// Sweep the full default range even on large graphs.
    pub uncapped: bool,
}

impl FitOptions {
    pub fn fanouts(&self, n: usize) -> Result<std::ops::RangeInclusive<u32>> {
        match self.b_range {
            Some((lo, _)) if lo < 2 => Err(Error::InvalidParams(format!("fanout {lo} below 2"))),
            Some((lo, hi)) => Ok(lo..=hi),
            None => {
                let mut hi = n.saturating_sub(1).min(u32::MAX as usize) as u32;
                if n > LARGE_GRAPH && !self.uncapped {
                    hi = hi.min(DEFAULT_FANOUT_CAP);
                }
                Ok(2..=hi)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FitResult {
    pub b_star: u32,
    pub c_star: f64,
    #[serde(skip)]
    pub heights: HeightAssignment,
    pub slope_a: f64,
    pub intercept: f64,
    pub r_squared: f64,
    pub loglik_exact: f64,
    pub loglik_approx: f64,
    pub level_log_degrees: Vec<Option<f64>>,
    pub level_degree_totals: Vec<u64>,
    pub scorer: Scorer,
    pub swaps: usize,
    pub rejections: Vec<(u32, Rejection)>,
}

fn level_totals(heights: &HeightAssignment, degrees: &[usize]) -> Vec<u64> {
    let mut totals = vec![0u64; heights.max_height() as usize + 1];
    for (u, &d) in degrees.iter().enumerate() {
        totals[heights.height(u as NodeId) as usize] += d as u64;
    }
    totals
}

struct Candidate {
    heights: HeightAssignment,
    regression: LevelRegression,
    c: f64,
    score: f64,
}

fn evaluate(
    g: &Graph,
    order: &[NodeId],
    degrees: &[usize],
    b: u32,
    scorer: Scorer,
) -> Result<Result<Candidate, Rejection>> {
    let heights = assign_heights(order, b)?;
    let regression = match level_regression(&heights, degrees) {
        Ok(r) => r,
        Err(r) => return Ok(Err(r)),
    };
    let c = match c_from_slope(b, regression.slope) {
        Ok(c) => c,
        Err(r) => return Ok(Err(r)),
    };
    let score = log_likelihood(g, &heights, c, scorer)?;
    Ok(Ok(Candidate { heights, regression, c, score }))
}

/// Sweeps the fanout, fits `c` per fanout from the level regression and
/// keeps the most likely accepted candidate (smaller `b` on ties).
pub fn fit(g: &Graph, options: &FitOptions) -> Result<FitResult> {
    if g.is_directed() {
        return Err(Error::Unsupported("fitting a directed graph"));
    }
    if g.edge_count() == 0 {
        return Err(Error::EmptyGraph);
    }
    let degrees = g.degrees();
    let order = degree_order(&degrees);
    let fanouts: Vec<u32> = options.fanouts(g.node_count())?.collect();
    let evaluated: Vec<Result<Candidate, Rejection>> =
        fanouts.par_iter().map(|&b| evaluate(g, &order, &degrees, b, options.scorer)).collect::<Result<_>>()?;

    let mut best: Option<(u32, Candidate)> = None;
    let mut rejections = Vec::new();
    for (&b, outcome) in fanouts.iter().zip(evaluated) {
        match outcome {
            Ok(cand) => {
                if best.as_ref().is_none_or(|(_, top)| cand.score > top.score) {
                    best = Some((b, cand));
                }
            }
            Err(r) => {
                log::debug!("fanout {b} rejected: {r}");
                rejections.push((b, r));
            }
        }
    }
    let Some((b, cand)) = best else {
        return Err(Error::FitFailed { rejections });
    };
    let mut result = FitResult {
        b_star: b,
        c_star: cand.c,
        slope_a: cand.regression.slope,
        intercept: cand.regression.intercept,
        r_squared: cand.regression.r_squared,
        loglik_exact: log_likelihood_exact(g, &cand.heights, cand.c)?,
        loglik_approx: log_likelihood_approx(g, &cand.heights, cand.c)?,
        level_log_degrees: cand.regression.level_log_degrees,
        level_degree_totals: level_totals(&cand.heights, &degrees),
        heights: cand.heights,
        scorer: options.scorer,
        swaps: 0,
        rejections,
    };
    if options.swaps {
        result = swap_refinement(result, g)?;
    }
    Ok(result)
}

/// Swaps the heights of edge endpoints whenever that strictly raises the
/// exact likelihood at fixed `c`, in full passes over the edges until a
/// pass changes nothing.
pub fn swap_refinement(mut fit: FitResult, g: &Graph) -> Result<FitResult> {
    check_inputs(g, &fit.heights)?;
    let levels = fit.heights.max_height() as usize + 1;
    let table = LevelTable::new(levels, fit.c_star)?;
    let mut counts: Vec<i64> = fit.heights.level_sizes().iter().map(|&s| s as i64).collect();
    let edges: Vec<(NodeId, NodeId)> = g.edges().collect();
    let max_passes = g.node_count().saturating_mul(edges.len()).max(1);
    let (mut ku, mut kv) = (vec![0i64; levels], vec![0i64; levels]);

    // contribution of x at height h against every node except u and v
    let score = |h: u32, k: &[i64], counts: &[i64]| -> f64 {
        (0..levels)
            .map(|r| {
                let (lf, lnf) = table.at(h, r as u32);
                let non = counts[r] - k[r];
                (if k[r] > 0 { k[r] as f64 * lf } else { 0.0 }) + (if non > 0 { non as f64 * lnf } else { 0.0 })
            })
            .sum()
    };

    let mut passes = 0;
    loop {
        let mut swapped = false;
        for &(u, v) in &edges {
            let (hu, hv) = (fit.heights.height(u), fit.heights.height(v));
            if hu == hv {
                continue;
            }
            for (x, other, k) in [(u, v, &mut ku), (v, u, &mut kv)] {
                k.iter_mut().for_each(|c| *c = 0);
                for &w in g.neighbors(x) {
                    if w != other {
                        k[fit.heights.height(w) as usize] += 1;
                    }
                }
            }
            counts[hu as usize] -= 1;
            counts[hv as usize] -= 1;
            let before = score(hu, &ku, &counts) + score(hv, &kv, &counts);
            let after = score(hv, &ku, &counts) + score(hu, &kv, &counts);
            counts[hu as usize] += 1;
            counts[hv as usize] += 1;
            if after - before > 1e-10 * (1.0 + before.abs()) {
                fit.heights.swap(u, v);
                fit.swaps += 1;
                swapped = true;
            }
        }
        passes += 1;
        if !swapped || passes >= max_passes {
            break;
        }
    }
    fit.loglik_exact = log_likelihood_exact(g, &fit.heights, fit.c_star)?;
    fit.loglik_approx = log_likelihood_approx(g, &fit.heights, fit.c_star)?;
    fit.level_degree_totals = level_totals(&fit.heights, &g.degrees());
    Ok(fit)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn heights(h: Vec<u32>, b: u32) -> HeightAssignment {
        HeightAssignment::new(h, b).unwrap()
    }

    #[test]
    fn degrees_from_samples() {
        assert_eq!(sample_degrees(&[(0, 1)], 3).unwrap(), vec![1, 1, 0]);
        assert_eq!(sample_degrees(&[(0, 1), (1, 2), (2, 0)], 3).unwrap(), vec![2, 2, 2]);
        assert!(sample_degrees(&[(0, 5)], 3).is_err());
    }

    #[test]
    fn degree_order_breaks_ties_by_id() {
        assert_eq!(degree_order(&[1, 3, 3, 0, 1]), vec![1, 2, 0, 4, 3]);
    }

    #[test]
    fn regression_on_exact_line() {
        // level totals e^2, e^1.5, e^1 on levels 0, 1, 2 of a b=2 tree
        let h = heights(vec![0, 1, 1, 2, 2, 2, 2], 2);
        let totals = [2.0f64, 1.5, 1.0].map(f64::exp);
        // spread each total over one node per level; the rest get 0
        let scale = 1e6;
        let deg = vec![
            (totals[0] * scale).round() as usize,
            (totals[1] * scale).round() as usize,
            0,
            (totals[2] * scale).round() as usize,
            0,
            0,
            0,
        ];
        let r = level_regression(&h, &deg).unwrap();
        assert!((r.slope + 0.5).abs() < 1e-6);
        assert!((r.r_squared - 1.0).abs() < 1e-9);
    }

    #[test]
    fn regression_constant_levels() {
        let h = heights(vec![0, 1, 1], 2);
        let r = level_regression(&h, &[4, 2, 2]).unwrap();
        assert_eq!(r.slope, 0.0);
        assert_eq!(r.r_squared, 0.0);
    }

    #[test]
    fn regression_skips_empty_levels() {
        let h = heights(vec![0, 1, 1, 2, 2, 2, 2], 2);
        assert_eq!(level_regression(&h, &[3, 0, 0, 1, 0, 0, 0]).unwrap().level_log_degrees[1], None);
        assert_eq!(level_regression(&h, &[3, 0, 0, 0, 0, 0, 0]), Err(Rejection::TooFewLevels(1)));
    }

    #[test]
    fn slope_inversion() {
        assert!(matches!(c_from_slope(3, 0.0), Err(Rejection::ScaleOutOfRange(c)) if c == 3.0));
        assert!((c_from_slope(3, 1.5f64.ln()).unwrap() - 2.0).abs() < 1e-12);
        assert!(matches!(c_from_slope(2, 4f64.ln()), Err(Rejection::ScaleOutOfRange(c)) if (c - 0.5).abs() < 1e-12));
    }

    #[test]
    fn two_node_likelihoods() {
        let h = heights(vec![0, 1], 2);
        let edge = Graph::from_edge_list(&[(0, 1)], None).unwrap();
        let none = Graph::empty(2);
        let half = 0.5f64.ln();
        assert!((log_likelihood_exact(&edge, &h, 2.0).unwrap() - half).abs() < 1e-15);
        assert!((log_likelihood_exact(&none, &h, 2.0).unwrap() - half).abs() < 1e-15);
        assert!((log_likelihood_approx(&edge, &h, 2.0).unwrap() - half).abs() < 1e-15);
        assert_eq!(log_likelihood_approx(&none, &h, 2.0).unwrap(), 0.0);
        assert!(log_likelihood_exact(&edge, &h, 1.0).is_err());
    }

    #[test]
    fn single_edge_fit_fails() {
        let g = Graph::from_edge_list(&[(0, 1)], None).unwrap();
        assert!(matches!(fit(&g, &FitOptions::default()), Err(Error::FitFailed { .. })));
    }

    #[test]
    fn default_fanouts() {
        let o = FitOptions::default();
        assert_eq!(o.fanouts(10).unwrap(), 2..=9);
        assert_eq!(o.fanouts(20_000).unwrap(), 2..=64);
        let wide = FitOptions { uncapped: true, ..FitOptions::default() };
        assert_eq!(wide.fanouts(20_000).unwrap(), 2..=19_999);
        assert!(FitOptions { b_range: Some((1, 4)), ..FitOptions::default() }.fanouts(9).is_err());
    }

    #[test]
    fn swap_keeps_symmetric_pair() {
        let g = Graph::from_edge_list(&[(0, 1)], None).unwrap();
        let h = heights(vec![1, 0], 2);
        let f = FitResult {
            b_star: 2,
            c_star: 1.5,
            heights: h.clone(),
            slope_a: 0.0,
            intercept: 0.0,
            r_squared: 0.0,
            loglik_exact: 0.0,
            loglik_approx: 0.0,
            level_log_degrees: vec![],
            level_degree_totals: vec![],
            scorer: Scorer::Exact,
            swaps: 0,
            rejections: vec![],
        };
        let out = swap_refinement(f, &g).unwrap();
        assert_eq!(out.heights, h);
        assert_eq!(out.swaps, 0);
    }
}
