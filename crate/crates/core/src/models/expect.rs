//! Exact expected quantities of the base model, summed level by level.

use super::laws::scale_law;
use super::params::IgamParams;
use crate::error::{Error, Result};

fn level_sizes(p: &IgamParams) -> Vec<f64> {
    (0..=p.height).map(|h| (p.b as f64).powi(h as i32)).collect()
}

fn choose2(n: f64) -> f64 {
    n * (n - 1.0) / 2.0
}

fn choose3(n: f64) -> f64 {
    n * (n - 1.0) * (n - 2.0) / 6.0
}

/// `sum_{r=0}^{H} b^r c^(-1 - min(h, r))`: the mean degree at level `h`,
/// counting the node's own level in full (the node itself included).
pub fn expected_degree(p: &IgamParams, h: u32) -> Result<f64> {
    p.check_level(h)?;
    Ok(level_sizes(p).iter().enumerate().map(|(r, &nr)| nr * scale_law(p.c, h.min(r as u32) as f64)).sum())
}

/// Mean degree at level `h` over distinct partners only.
pub fn expected_degree_exact(p: &IgamParams, h: u32) -> Result<f64> {
    Ok(expected_degree(p, h)? - scale_law(p.c, h as f64))
}

/// Expected edge count over unordered pairs of distinct nodes.
pub fn expected_edges(p: &IgamParams) -> f64 {
    let sizes = level_sizes(p);
    let mut total = 0.0;
    for (r, &nr) in sizes.iter().enumerate() {
        let f = scale_law(p.c, r as f64);
        total += choose2(nr) * f;
        for &ns in &sizes[r + 1..] {
            total += nr * ns * f;
        }
    }
    total
}

/// `½ sum_h b^h d̄_h` with [`expected_degree`], i.e. including the
/// self-pair term of every node.
pub fn expected_edges_with_self(p: &IgamParams) -> f64 {
    let sizes = level_sizes(p);
    0.5 * (0..=p.height).map(|h| sizes[h as usize] * expected_degree(p, h).expect("level in range")).sum::<f64>()
}

/// `ln q_τ = sum_{r=0}^{τ} b^r ln(1 - c^(-r-1))`, the log-probability that a
/// node below level `τ` has no neighbor in levels `0..=τ`.
pub fn log_undominated_probability(p: &IgamParams, tau: u32) -> f64 {
    (0..=tau).map(|r| (p.b as f64).powi(r as i32) * (-scale_law(p.c, r as f64)).ln_1p()).sum()
}

/// Natural log of the Markov bound `sum_{h=τ+1}^{H} b^h q_τ` on the chance
/// that some node below `τ` stays undominated. `-inf` when `τ = H`.
pub fn log_domination_failure_bound(p: &IgamParams, tau: u32) -> f64 {
    if tau >= p.height {
        return f64::NEG_INFINITY;
    }
    let b = p.b as f64;
    // sum_{h=τ+1}^{H} b^h = b^(τ+1) (b^(H-τ) - 1) / (b - 1), in logs
    let span = (p.height - tau) as f64;
    let log_sum = (tau + 1) as f64 * b.ln() + (span * b.ln()).exp_m1().ln() - (b - 1.0).ln();
    log_sum + log_undominated_probability(p, tau)
}

/// Smallest `τ` whose Markov bound is at most `b^(-H)`; capped at `H`.
pub fn domination_level(p: &IgamParams) -> u32 {
    let target = -(p.height as f64) * (p.b as f64).ln();
    (0..p.height).find(|&tau| log_domination_failure_bound(p, tau) <= target).unwrap_or(p.height)
}

/// `log(2 c H log b) / log(b / c)`, the asymptotic core height.
pub fn asymptotic_domination_level(p: &IgamParams) -> f64 {
    let b = p.b as f64;
    (2.0 * p.c * p.height as f64 * b.ln()).ln() / (b / p.c).ln()
}

/// Number of nodes in levels `0..=τ`.
pub fn core_size(p: &IgamParams, tau: u32) -> f64 {
    level_sizes(p).iter().take(tau as usize + 1).sum()
}

fn triple_sum(p: &IgamParams, weight: impl Fn(f64, f64, f64) -> f64) -> f64 {
    let sizes = level_sizes(p);
    let levels = sizes.len();
    let mut total = 0.0;
    for r in 0..levels {
        for s in r..levels {
            for t in s..levels {
                let count = match (r == s, s == t) {
                    (true, true) => choose3(sizes[r]),
                    (true, false) => choose2(sizes[r]) * sizes[t],
                    (false, true) => sizes[r] * choose2(sizes[s]),
                    (false, false) => sizes[r] * sizes[s] * sizes[t],
                };
                if count > 0.0 {
                    let f_rs = scale_law(p.c, r as f64);
                    let f_rt = scale_law(p.c, r as f64);
                    let f_st = scale_law(p.c, s as f64);
                    total += count * weight(f_rs, f_rt, f_st);
                }
            }
        }
    }
    total
}

/// Expected number of triangles: over level triples `r <= s <= t` of
/// distinct nodes, `c^(-3 - 2r - s)` each.
pub fn expected_triangles(p: &IgamParams) -> f64 {
    triple_sum(p, |a, b, c| a * b * c)
}

/// Expected number of two-paths (`sum_v C(deg v, 2)`): each node triple
/// contributes `f12 f13 + f12 f23 + f13 f23`.
pub fn expected_two_paths(p: &IgamParams) -> f64 {
    triple_sum(p, |a, b, c| a * b + a * c + b * c)
}

/// Expected edges between levels `0..=τ` and the rest.
pub fn expected_cut_edges(p: &IgamParams, tau: u32) -> f64 {
    let sizes = level_sizes(p);
    let mut total = 0.0;
    for (r, &nr) in sizes.iter().enumerate().take(tau as usize + 1) {
        for &ns in sizes.iter().skip(tau as usize + 1) {
            total += nr * ns * scale_law(p.c, r as f64);
        }
    }
    total
}

/// Expected cut edges of the level-`τ` core over the smaller side's size.
pub fn expected_conductance(p: &IgamParams, tau: u32) -> Result<f64> {
    if tau >= p.height {
        return Err(Error::InvalidCut);
    }
    let total: f64 = level_sizes(p).iter().sum();
    let core = core_size(p, tau);
    Ok(expected_cut_edges(p, tau) / core.min(total - core))
}

/// Same model with fanout `round(b^α)` and scale `c^α`, which steepens
/// (α > 1) or flattens (α < 1) the degree law.
pub fn rescale(p: &IgamParams, alpha: f64) -> Result<IgamParams> {
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(Error::InvalidParams(format!("alpha = {alpha} must be positive")));
    }
    let b = (p.b as f64).powf(alpha).round();
    if b < 2.0 || b > u32::MAX as f64 {
        return Err(Error::InvalidParams(format!("rescaled fanout {b} out of range")));
    }
    IgamParams::new(b as u32, p.c.powf(alpha), p.height)
}
