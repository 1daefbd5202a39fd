//! Logistic core-periphery baselines and their score rankings.
//!
//! * CP: `rho(u, v) = sigma(theta_u + theta_v)`.
//! * JB: `mu(u, v) = e^(theta_u + theta_v) / (K(u, v)^eps + e^(theta_u + theta_v))`
//!   with `K` the Euclidean distance between node coordinates.
//! * TH: `sigma_{s,t}(max(pi_u, pi_v) / n)` for a rank score `pi`.
//!
//! Coreness scores maximize the Bernoulli likelihood over all unordered
//! pairs. The objective is concave; it is climbed with truncated Newton
//! steps (conjugate gradients on Hessian-vector products) and step halving.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;

#[inline]
fn sigmoid(x: f64) -> f64 {
    if x >= 0.0 {
        1.0 / (1.0 + (-x).exp())
    } else {
        let e = x.exp();
        e / (1.0 + e)
    }
}

/// `ln(1 + e^x)` without overflow.
#[inline]
fn softplus(x: f64) -> f64 {
    x.max(0.0) + (-x.abs()).exp().ln_1p()
}

pub fn logistic_cp_prob(theta_u: f64, theta_v: f64) -> f64 {
    sigmoid(theta_u + theta_v)
}

/// `K = 0` with `eps > 0` gives 1; `eps = 0` reduces to [`logistic_cp_prob`].
pub fn logistic_jb_prob(theta_u: f64, theta_v: f64, kernel: f64, epsilon: f64) -> f64 {
    sigmoid(theta_u + theta_v + jb_offset(kernel, epsilon))
}

#[inline]
fn jb_offset(kernel: f64, epsilon: f64) -> f64 {
    if epsilon == 0.0 {
        0.0
    } else {
        -epsilon * kernel.ln()
    }
}

/// Logistic-TH edge law `1 / (1 + e^(-s (max(pi_u, pi_v) / n - t)))`.
pub fn logistic_th_prob(pi_u: f64, pi_v: f64, n: usize, s: f64, t: f64) -> f64 {
    sigmoid(s * (pi_u.max(pi_v) / n as f64 - t))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThModelParams {
    pub s: f64,
    pub t: f64,
    pub pi: Vec<f64>,
}

impl ThModelParams {
    pub fn new(pi: Vec<f64>) -> Result<Self> {
        Self { s: 10.0, t: 0.5, pi }.validated()
    }

    pub fn validated(self) -> Result<Self> {
        if !(self.s > 0.0) || !(self.t > 0.0 && self.t < 1.0) {
            return Err(Error::InvalidParams(format!(
                "need s > 0 and t in (0, 1), got s = {}, t = {}",
                self.s, self.t
            )));
        }
        if self.pi.iter().any(|&p| !(p >= 0.0)) {
            return Err(Error::InvalidParams("rank scores must be nonnegative".into()));
        }
        Ok(self)
    }

    pub fn prob(&self, u: usize, v: usize) -> f64 {
        logistic_th_prob(self.pi[u], self.pi[v], self.pi.len(), self.s, self.t)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JbKernelSpec {
    pub coordinates: Vec<Vec<f64>>,
    pub epsilon: f64,
}

impl JbKernelSpec {
    pub fn new(coordinates: Vec<Vec<f64>>, epsilon: f64) -> Result<Self> {
        let dim = coordinates.first().map_or(0, Vec::len);
        if dim == 0 || coordinates.iter().any(|x| x.len() != dim || x.iter().any(|c| !c.is_finite())) {
            return Err(Error::MissingCoordinates);
        }
        if !(epsilon >= 0.0 && epsilon.is_finite()) {
            return Err(Error::InvalidParams(format!("epsilon = {epsilon} must be nonnegative")));
        }
        Ok(Self { coordinates, epsilon })
    }

    pub fn kernel(&self, u: usize, v: usize) -> f64 {
        self.coordinates[u].iter().zip(&self.coordinates[v]).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt()
    }

    fn offset(&self, u: usize, v: usize) -> f64 {
        if self.epsilon == 0.0 {
            0.0
        } else {
            jb_offset(self.kernel(u, v), self.epsilon)
        }
    }
}

/// Pairwise additive offset to `theta_u + theta_v`.
trait Offset: Sync {
    fn at(&self, u: usize, v: usize) -> f64;
}

struct NoOffset;

impl Offset for NoOffset {
    #[inline]
    fn at(&self, _: usize, _: usize) -> f64 {
        0.0
    }
}

impl Offset for JbKernelSpec {
    #[inline]
    fn at(&self, u: usize, v: usize) -> f64 {
        self.offset(u, v)
    }
}

/// Calls `f(v, adjacent)` for every `v != u`, in increasing `v`, starting at `from`.
#[inline]
fn partners(g: &Graph, u: usize, from: usize, mut f: impl FnMut(usize, bool)) {
    let nb = g.neighbors(u as u32);
    let mut k = nb.partition_point(|&w| (w as usize) < from);
    for v in from..g.node_count() {
        if v == u {
            continue;
        }
        let adjacent = k < nb.len() && nb[k] as usize == v;
        if adjacent {
            k += 1;
        }
        f(v, adjacent);
    }
}

fn log_likelihood_with(g: &Graph, theta: &[f64], off: &impl Offset) -> f64 {
    let rows: Vec<f64> = (0..g.node_count())
        .into_par_iter()
        .map(|u| {
            let mut row = 0.0;
            partners(g, u, u + 1, |v, adjacent| {
                let x = theta[u] + theta[v] + off.at(u, v);
                row -= if adjacent { softplus(-x) } else { softplus(x) };
            });
            row
        })
        .collect();
    rows.iter().sum()
}

/// Gradient and the magnitude of the Hessian diagonal.
fn gradient_with(g: &Graph, theta: &[f64], off: &impl Offset) -> (Vec<f64>, Vec<f64>) {
    (0..g.node_count())
        .into_par_iter()
        .map(|u| {
            let (mut grad, mut curv) = (g.degree(u as u32) as f64, 0.0);
            partners(g, u, 0, |v, _| {
                let p = sigmoid(theta[u] + theta[v] + off.at(u, v));
                grad -= p;
                curv += p * (1.0 - p);
            });
            (grad, curv)
        })
        .unzip()
}

fn check_graph(g: &Graph, theta: &[f64]) -> Result<()> {
    if g.is_directed() {
        return Err(Error::Unsupported("logistic models on a directed graph"));
    }
    if theta.len() != g.node_count() {
        return Err(Error::InvalidParams(format!("{} scores for {} nodes", theta.len(), g.node_count())));
    }
    Ok(())
}

/// Logistic-CP log-likelihood over unordered pairs of distinct nodes.
pub fn cp_log_likelihood(g: &Graph, theta: &[f64]) -> Result<f64> {
    check_graph(g, theta)?;
    Ok(log_likelihood_with(g, theta, &NoOffset))
}

/// `d/d theta_u = deg(u) - sum_{v != u} rho(u, v)`.
pub fn cp_gradient(g: &Graph, theta: &[f64]) -> Result<Vec<f64>> {
    check_graph(g, theta)?;
    Ok(gradient_with(g, theta, &NoOffset).0)
}

pub fn jb_log_likelihood(g: &Graph, theta: &[f64], kernel: &JbKernelSpec) -> Result<f64> {
    check_graph(g, theta)?;
    check_kernel(g, kernel)?;
    Ok(log_likelihood_with(g, theta, kernel))
}

pub fn jb_gradient(g: &Graph, theta: &[f64], kernel: &JbKernelSpec) -> Result<Vec<f64>> {
    check_graph(g, theta)?;
    check_kernel(g, kernel)?;
    Ok(gradient_with(g, theta, kernel).0)
}

fn check_kernel(g: &Graph, kernel: &JbKernelSpec) -> Result<()> {
    if kernel.coordinates.len() != g.node_count() {
        return Err(Error::MissingCoordinates);
    }
    if kernel.epsilon > 0.0 {
        // a coincident non-adjacent pair would need probability 0 from a law that gives 1
        let singular = (0..g.node_count()).into_par_iter().any(|u| {
            let mut hit = false;
            partners(g, u, u + 1, |v, adjacent| hit |= !adjacent && kernel.kernel(u, v) == 0.0);
            hit
        });
        if singular {
            return Err(Error::SingularKernel);
        }
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LogisticFitOptions {
    /// Stop once the largest gradient entry is below this.
    pub tol: f64,
    pub max_iters: usize,
    /// Refuse graphs above this many nodes (every fit step costs `O(n^2)`).
    pub max_nodes: Option<usize>,
}

impl Default for LogisticFitOptions {
    fn default() -> Self {
        Self { tol: 1e-6, max_iters: 500, max_nodes: Some(20_000) }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorenessScores {
    pub theta: Vec<f64>,
    pub log_likelihood: f64,
    pub iterations: usize,
    pub gradient_norm: f64,
    /// Kernel exponent used (JB only).
    pub epsilon: Option<f64>,
}

/// Largest entry of a single Newton direction.
const MAX_STEP: f64 = 10.0;
const CG_ITERS: usize = 200;

/// `(D + W) x` where `W_uv = p_uv (1 - p_uv)` and `D` holds its row sums:
/// the negated Hessian of the log-likelihood applied to `x`.
fn curvature_product(g: &Graph, theta: &[f64], off: &impl Offset, x: &[f64]) -> Vec<f64> {
    (0..g.node_count())
        .into_par_iter()
        .map(|u| {
            let mut acc = 0.0;
            partners(g, u, 0, |v, _| {
                let p = sigmoid(theta[u] + theta[v] + off.at(u, v));
                acc += p * (1.0 - p) * (x[u] + x[v]);
            });
            acc
        })
        .collect()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Approximate Newton direction by Jacobi-preconditioned conjugate gradients.
fn newton_direction(g: &Graph, theta: &[f64], off: &impl Offset, grad: &[f64], diag: &[f64]) -> Vec<f64> {
    let precond = |r: &[f64]| -> Vec<f64> { r.iter().zip(diag).map(|(r, d)| r / d.max(1e-300)).collect() };
    let mut x = vec![0.0; grad.len()];
    let mut r = grad.to_vec();
    let mut z = precond(&r);
    let mut p = z.clone();
    let mut rz = dot(&r, &z);
    let target = 1e-6 * dot(grad, grad).sqrt();
    for _ in 0..CG_ITERS {
        let ap = curvature_product(g, theta, off, &p);
        let pap = dot(&p, &ap);
        if !(pap > 0.0) {
            break;
        }
        let alpha = rz / pap;
        x.iter_mut().zip(&p).for_each(|(x, p)| *x += alpha * p);
        r.iter_mut().zip(&ap).for_each(|(r, a)| *r -= alpha * a);
        if dot(&r, &r).sqrt() < target {
            break;
        }
        z = precond(&r);
        let rz_next = dot(&r, &z);
        let beta = rz_next / rz;
        rz = rz_next;
        p.iter_mut().zip(&z).for_each(|(p, z)| *p = z + beta * *p);
    }
    if x.iter().all(|v| v.is_finite()) && dot(&x, grad) > 0.0 {
        x
    } else {
        precond(grad)
    }
}

fn ascend(g: &Graph, off: &impl Offset, opts: &LogisticFitOptions) -> Result<CorenessScores> {
    let n = g.node_count();
    if let Some(max) = opts.max_nodes.filter(|&max| n > max) {
        return Err(Error::TooLarge { n, max });
    }
    let mut theta = vec![0.0; n];
    let mut ll = log_likelihood_with(g, &theta, off);
    let mut norm = f64::INFINITY;
    for iteration in 0..=opts.max_iters {
        let (grad, diag) = gradient_with(g, &theta, off);
        norm = grad.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        if norm < opts.tol {
            return Ok(CorenessScores {
                theta,
                log_likelihood: ll,
                iterations: iteration,
                gradient_norm: norm,
                epsilon: None,
            });
        }
        if iteration == opts.max_iters {
            break;
        }
        let mut dir = newton_direction(g, &theta, off, &grad, &diag);
        let longest = dir.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        if longest > MAX_STEP {
            dir.iter_mut().for_each(|d| *d *= MAX_STEP / longest);
        }
        let mut step = 1.0;
        loop {
            let trial: Vec<f64> = theta.iter().zip(&dir).map(|(t, d)| t + step * d).collect();
            let trial_ll = log_likelihood_with(g, &trial, off);
            if trial_ll >= ll {
                theta = trial;
                ll = trial_ll;
                break;
            }
            step *= 0.5;
            if step < 1e-14 {
                return Err(Error::NotConverged { iterations: iteration, residual: norm });
            }
        }
    }
    Err(Error::NotConverged { iterations: opts.max_iters, residual: norm })
}

pub fn fit_logistic_cp(g: &Graph, opts: &LogisticFitOptions) -> Result<CorenessScores> {
    check_graph(g, &vec![0.0; g.node_count()])?;
    ascend(g, &NoOffset, opts)
}

/// JB fit at the kernel's own `epsilon`.
pub fn fit_logistic_jb_fixed(g: &Graph, kernel: &JbKernelSpec, opts: &LogisticFitOptions) -> Result<CorenessScores> {
    check_graph(g, &vec![0.0; g.node_count()])?;
    check_kernel(g, kernel)?;
    let mut scores = ascend(g, kernel, opts)?;
    scores.epsilon = Some(kernel.epsilon);
    Ok(scores)
}

pub const DEFAULT_EPSILON_GRID: [f64; 3] = [0.5, 1.0, 2.0];

/// Fits JB at every `epsilon` in `grid` and keeps the most likely fit
/// (earliest grid entry on ties).
pub fn fit_logistic_jb(
    g: &Graph,
    coordinates: &[Vec<f64>],
    grid: &[f64],
    opts: &LogisticFitOptions,
) -> Result<CorenessScores> {
    if grid.is_empty() {
        return Err(Error::InvalidParams("empty epsilon grid".into()));
    }
    let mut best: Option<CorenessScores> = None;
    for &epsilon in grid {
        let kernel = JbKernelSpec::new(coordinates.to_vec(), epsilon)?;
        let scores = fit_logistic_jb_fixed(g, &kernel, opts)?;
        log::info!("logistic-jb eps = {epsilon}: log-likelihood {}", scores.log_likelihood);
        if best.as_ref().is_none_or(|b| scores.log_likelihood > b.log_likelihood) {
            best = Some(scores);
        }
    }
    Ok(best.expect("grid is nonempty"))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThOptions {
    pub alpha: f64,
    pub tol: f64,
    pub max_iters: usize,
}

impl Default for ThOptions {
    fn default() -> Self {
        Self { alpha: 10.0, tol: 1e-8, max_iters: 1000 }
    }
}

/// `(a^alpha + b^alpha)^(1/alpha)` for nonnegative inputs, factored by the larger one.
#[inline]
fn pair_norm(a: f64, b: f64, alpha: f64) -> f64 {
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    if hi == 0.0 {
        return 0.0;
    }
    hi * ((lo / hi).powf(alpha).ln_1p() / alpha).exp()
}

/// One step of `x_i <- sum_{j in N(i)} (x_i^alpha + x_j^alpha)^(1/alpha)`,
/// scaled to unit sup norm.
fn th_step(g: &Graph, x: &[f64], alpha: f64) -> Vec<f64> {
    let mut next: Vec<f64> = (0..g.node_count())
        .into_par_iter()
        .map(|i| g.neighbors(i as u32).iter().map(|&j| pair_norm(x[i], x[j as usize], alpha)).sum())
        .collect();
    let top = next.iter().fold(0.0f64, |m, &v| m.max(v));
    next.iter_mut().for_each(|v| *v /= top);
    next
}

/// Fixed point of the generalized-mean iteration from a given start
/// vector. Every step costs `O(m)`.
pub fn th_rank_scores_from(g: &Graph, start: &[f64], opts: &ThOptions) -> Result<Vec<f64>> {
    if g.is_directed() {
        return Err(Error::Unsupported("rank scores on a directed graph"));
    }
    if g.edge_count() == 0 {
        return Err(Error::InvalidParams("rank scores need at least one edge".into()));
    }
    if !(opts.alpha > 0.0) || start.len() != g.node_count() || start.iter().any(|&v| !(v > 0.0 && v.is_finite())) {
        return Err(Error::InvalidParams("alpha and start entries must be positive".into()));
    }
    let mut x = start.to_vec();
    let mut residual = f64::INFINITY;
    for _ in 0..opts.max_iters {
        let next = th_step(g, &x, opts.alpha);
        residual = next.iter().zip(&x).fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
        x = next;
        if residual < opts.tol {
            return Ok(x);
        }
    }
    Err(Error::NotConverged { iterations: opts.max_iters, residual })
}

/// [`th_rank_scores_from`] starting at the all-ones vector.
pub fn th_rank_scores(g: &Graph, opts: &ThOptions) -> Result<Vec<f64>> {
    th_rank_scores_from(g, &vec![1.0; g.node_count()], opts)
}

/// CSV with header `node_id,score`.
pub fn scores_to_csv(scores: &[f64]) -> String {
    let mut out = String::from("node_id,score\n");
    for (u, s) in scores.iter().enumerate() {
        out.push_str(&format!("{u},{s}\n"));
    }
    out
}
