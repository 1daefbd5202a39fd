use igam::domination::{ads_exponent, domination_curve, greedy_max_coverage, prestige_ranking, NodeRanking, Strategy};
use igam::fitting::{
    assign_heights, c_from_slope, degree_order, fit, level_regression, log_likelihood_exact, swap_refinement,
    FitOptions, FitResult, Scorer,
};
use igam::logistic::{
    cp_gradient, cp_log_likelihood, fit_logistic_cp, fit_logistic_jb, jb_gradient, jb_log_likelihood, th_rank_scores,
    JbKernelSpec, LogisticFitOptions, ThOptions,
};
use igam::models::{sample_igam, IgamParams};
use igam::{Graph, NodeId};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn gnp(n: usize, p: f64, seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut e = Vec::new();
    for u in 0..n as NodeId {
        for v in u + 1..n as NodeId {
            if rng.random::<f64>() < p {
                e.push((u, v));
            }
        }
    }
    Graph::from_edge_list(&e, Some(n)).unwrap()
}

fn sampled() -> Graph {
    sample_igam(&IgamParams::new(3, 2.0, 5).unwrap(), 4).unwrap().0
}

#[test]
fn fit_picks_best_accepted_fanout() {
    let g = sampled();
    let result = fit(&g, &FitOptions::default()).unwrap();
    assert!(result.c_star > 1.0 && result.c_star < result.b_star as f64);
    assert!(result.loglik_exact <= 0.0 && result.loglik_approx <= 0.0);
    let order = degree_order(&g.degrees());
    for b in FitOptions::default().fanouts(g.node_count()).unwrap() {
        let h = assign_heights(&order, b).unwrap();
        let Ok(reg) = level_regression(&h, &g.degrees()) else { continue };
        let Ok(c) = c_from_slope(b, reg.slope) else { continue };
        let ll = log_likelihood_exact(&g, &h, c).unwrap();
        assert!(ll <= result.loglik_exact, "b = {b} beats b* = {}", result.b_star);
    }
}

#[test]
fn fit_is_deterministic_and_thread_independent() {
    let g = sampled();
    let a = fit(&g, &FitOptions::default()).unwrap();
    let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    let b = pool.install(|| fit(&g, &FitOptions::default())).unwrap();
    assert_eq!(a, b);
}

#[test]
fn relabeling_keeps_level_regression() {
    let g = sampled();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut perm: Vec<NodeId> = g.nodes().collect();
    rand::seq::SliceRandom::shuffle(perm.as_mut_slice(), &mut rng);
    let h = g.relabel(&perm);
    for b in [2, 3, 5, 9] {
        let ra = level_regression(&assign_heights(&degree_order(&g.degrees()), b).unwrap(), &g.degrees()).unwrap();
        let rb = level_regression(&assign_heights(&degree_order(&h.degrees()), b).unwrap(), &h.degrees()).unwrap();
        assert_eq!(ra, rb);
    }
}

#[test]
fn approx_scorer_fit_is_valid() {
    let g = sampled();
    let r = fit(&g, &FitOptions { scorer: Scorer::Approx, ..FitOptions::default() }).unwrap();
    assert_eq!(r.scorer, Scorer::Approx);
    assert!(r.loglik_approx >= r.loglik_exact);
}

#[test]
fn swaps_never_lower_likelihood() {
    for seed in 0..100 {
        let g = gnp(20, 0.25, seed);
        if g.edge_count() == 0 {
            continue;
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xabc);
        let mut order: Vec<NodeId> = g.nodes().collect();
        rand::seq::SliceRandom::shuffle(order.as_mut_slice(), &mut rng);
        let b = rng.random_range(2..5);
        let c = 1.0 + rng.random::<f64>() * (b as f64 - 1.0) * 0.9 + 0.05;
        let heights = assign_heights(&order, b).unwrap();
        let before = log_likelihood_exact(&g, &heights, c).unwrap();
        let start = FitResult {
            b_star: b,
            c_star: c,
            heights,
            slope_a: 0.0,
            intercept: 0.0,
            r_squared: 0.0,
            loglik_exact: before,
            loglik_approx: 0.0,
            level_log_degrees: vec![],
            level_degree_totals: vec![],
            scorer: Scorer::Exact,
            swaps: 0,
            rejections: vec![],
        };
        let after = swap_refinement(start, &g).unwrap();
        assert!(after.loglik_exact >= before - 1e-9, "seed {seed}: {} < {before}", after.loglik_exact);
        assert_eq!(after.heights.level_sizes(), assign_heights(&order, b).unwrap().level_sizes());
    }
}

#[test]
fn swap_refinement_is_a_fixed_point_after_one_run() {
    let g = sampled();
    let once = fit(&g, &FitOptions { swaps: true, ..FitOptions::default() }).unwrap();
    let twice = swap_refinement(once.clone(), &g).unwrap();
    assert_eq!(twice.heights, once.heights);
}

fn relative_gradient_error(analytic: &[f64], f: impl Fn(&[f64]) -> f64, theta: &[f64]) -> f64 {
    let h = 1e-5;
    let mut numeric = Vec::new();
    for i in 0..theta.len() {
        let mut up = theta.to_vec();
        let mut down = theta.to_vec();
        up[i] += h;
        down[i] -= h;
        numeric.push((f(&up) - f(&down)) / (2.0 * h));
    }
    let diff: f64 = analytic.iter().zip(&numeric).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt();
    let scale: f64 = analytic.iter().map(|a| a * a).sum::<f64>().sqrt().max(1e-12);
    diff / scale
}

#[test]
fn cp_and_jb_gradients_match_finite_differences() {
    for seed in 0..20 {
        let g = gnp(8, 0.4, seed);
        let mut rng = ChaCha8Rng::seed_from_u64(seed + 100);
        let theta: Vec<f64> = (0..8).map(|_| rng.random_range(-1.5..1.5)).collect();
        let coords: Vec<Vec<f64>> =
            (0..8).map(|_| vec![rng.random_range(0.0..3.0), rng.random_range(0.0..3.0)]).collect();
        let cp = cp_gradient(&g, &theta).unwrap();
        assert!(relative_gradient_error(&cp, |t| cp_log_likelihood(&g, t).unwrap(), &theta) < 1e-6);
        let kernel = JbKernelSpec::new(coords, 1.0).unwrap();
        let jb = jb_gradient(&g, &theta, &kernel).unwrap();
        assert!(relative_gradient_error(&jb, |t| jb_log_likelihood(&g, t, &kernel).unwrap(), &theta) < 1e-6);
    }
}

#[test]
fn logistic_fits_converge_on_samples() {
    let g = sampled();
    let opts = LogisticFitOptions::default();
    let cp = fit_logistic_cp(&g, &opts).unwrap();
    assert!(cp.gradient_norm < opts.tol);
    let ranking = NodeRanking::by_descending_score(&cp.theta, Strategy::LogisticCp);
    assert!(ranking.is_permutation_of(g.node_count()));

    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let coords: Vec<Vec<f64>> = g.nodes().map(|_| vec![rng.random::<f64>(), rng.random::<f64>()]).collect();
    let jb = fit_logistic_jb(&g, &coords, &[0.5, 1.0, 2.0], &opts).unwrap();
    assert!(jb.epsilon.is_some());
    let th = th_rank_scores(&g, &ThOptions::default()).unwrap();
    assert!(th.iter().all(|&x| (0.0..=1.0).contains(&x)));
}

#[test]
fn greedy_curve_dominates_prestige_on_samples() {
    let p = IgamParams::new(3, 1.5, 6).unwrap();
    let (g, heights) = sample_igam(&p, 3).unwrap();
    let greedy = greedy_max_coverage(&g, None).unwrap();
    let prestige = domination_curve(&g, &prestige_ranking(&heights, &g.degrees()).unwrap()).unwrap();
    let k = greedy.curve.covered.len();
    let ahead = (0..k).filter(|&i| greedy.curve.covered[i] >= prestige.covered[i]).count();
    assert!(ahead as f64 >= 0.95 * k as f64, "{ahead}/{k}");
    assert!(ads_exponent(&greedy.curve, 0.8).unwrap() <= ads_exponent(&prestige, 0.8).unwrap());
}
