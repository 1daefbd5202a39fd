use std::fs;
use std::path::{Path, PathBuf};

use igam::data::{self, DegreeFilter};
use igam::domination::{
    ads_exponent, curve_log_regression, domination_curve, greedy_max_coverage, prestige_ranking, DominationCurve,
    NodeRanking, Strategy,
};
use igam::fitting::{fit, FitOptions, FitResult, Scorer};
use igam::io::{self, EdgeList};
use igam::logistic::{
    fit_logistic_cp, fit_logistic_jb, scores_to_csv, th_rank_scores, LogisticFitOptions, ThOptions,
    DEFAULT_EPSILON_GRID,
};
use igam::metrics::{diameter, gcc, giant_component};
use igam::models::{
    expected_edges, full_tree_node_count, sample_continuous_igam, sample_directed_igam, sample_igam, sample_igam2,
    HeightAssignment, Igam2Params, IgamParams,
};
use igam::Graph;
use log::{info, warn};
use serde::Serialize;

use crate::args::{
    Cli, Command, CompareArgs, DominateArgs, FitArgs, Format, GenerateArgs, ScorerArg, StrategyArg, Variant,
    VisualizeArgs, OUTPUT_DIR_ENV,
};
use crate::svg::{Chart, Series, Style, Svg, PALETTE};
use crate::Failure;

struct Ctx {
    out: PathBuf,
    seed: u64,
    format: Format,
    plot: bool,
}

impl Ctx {
    fn write(&self, file: &str, contents: &str) -> Result<PathBuf, Failure> {
        let path = self.out.join(file);
        fs::write(&path, contents).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
        info!("wrote {}", path.display());
        Ok(path)
    }

    fn write_svg(&self, file: &str, svg: Svg) -> Result<(), Failure> {
        if self.plot {
            self.write(file, &svg.finish())?;
        }
        Ok(())
    }
}

pub fn dispatch(cli: Cli) -> Result<(), Failure> {
    let out = cli
        .global
        .output_dir
        .clone()
        .or_else(|| std::env::var_os(OUTPUT_DIR_ENV).map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("."));
    fs::create_dir_all(&out).map_err(|e| Failure::Io(format!("{}: {e}", out.display())))?;
    let ctx = Ctx { out, seed: cli.global.seed, format: cli.global.format, plot: !cli.global.no_plot };
    match cli.command {
        Command::Generate(a) => generate(&ctx, &a),
        Command::Fit(a) => fit_cmd(&ctx, &a),
        Command::Dominate(a) => dominate(&ctx, &a),
        Command::Compare(a) => compare(&ctx, &a),
        Command::Visualize(a) => visualize(&ctx, &a),
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

fn load_edges(path: &Path) -> Result<(EdgeList, Graph), Failure> {
    let edges = io::parse_edge_list(&read(path)?).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
    let g = edges.to_graph()?;
    Ok((edges, g))
}

fn stem(name: &Option<String>, input: &Path) -> String {
    name.clone()
        .unwrap_or_else(|| input.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or("graph".into()))
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report types serialize");
    s.push('\n');
    s
}

fn require<T>(value: Option<T>, flag: &str, variant: &str) -> Result<T, Failure> {
    value.ok_or_else(|| Failure::Usage(format!("--{flag} is required for the {variant} variant")))
}

// ---------------------------------------------------------------- generate

#[derive(Serialize)]
struct GenerateStats {
    variant: Variant,
    seed: u64,
    n: usize,
    m: usize,
    expected_m: Option<f64>,
    level_sizes: Vec<usize>,
    level_mean_degree: Vec<f64>,
    gcc: f64,
    giant_nodes: usize,
    giant_diameter: usize,
}

fn generate(ctx: &Ctx, a: &GenerateArgs) -> Result<(), Failure> {
    let name = variant_name(a.variant);
    let b = require(a.b, "b", name)?;
    let height = require(a.h, "H", name)?;
    let (g, levels, heights_text, expected_m) = match a.variant {
        Variant::Igam | Variant::Directed => {
            let p = IgamParams::new(b, require(a.c, "c", name)?, height)?;
            let (g, h) = if a.variant == Variant::Igam {
                sample_igam(&p, ctx.seed)?
            } else {
                sample_directed_igam(&p, ctx.seed)?
            };
            let expected = (a.variant == Variant::Igam).then(|| expected_edges(&p));
            (g, h.heights().to_vec(), io::format_heights(&h), expected)
        }
        Variant::Igam2 => {
            let p = Igam2Params::new(
                b,
                require(a.c1, "c1", name)?,
                require(a.c2, "c2", name)?,
                require(a.h0, "H0", name)?,
                height,
            )?;
            let (g, h) = sample_igam2(&p, ctx.seed)?;
            (g, h.heights().to_vec(), io::format_heights(&h), None)
        }
        Variant::Continuous => {
            let p = IgamParams::new(b, require(a.c, "c", name)?, height)?;
            let n = match a.n {
                Some(n) => n,
                None => full_tree_node_count(b, height)? as usize,
            };
            let (g, h) = sample_continuous_igam(&p, n, ctx.seed)?;
            let levels = h.iter().map(|&x| x.floor().max(0.0) as u32).collect();
            (g, levels, io::format_real_heights(&h), None)
        }
    };

    let simple = if g.is_directed() { g.to_undirected() } else { g.clone() };
    let depth = levels.iter().copied().max().unwrap_or(0) as usize + 1;
    let mut sizes = vec![0usize; depth];
    let mut degree_sums = vec![0.0; depth];
    for (u, &l) in levels.iter().enumerate() {
        sizes[l as usize] += 1;
        degree_sums[l as usize] += simple.degree(u as igam::NodeId) as f64;
    }
    let (giant, _) = giant_component(&simple);
    let stats = GenerateStats {
        variant: a.variant,
        seed: ctx.seed,
        n: g.node_count(),
        m: g.edge_count(),
        expected_m,
        level_mean_degree: degree_sums
            .iter()
            .zip(&sizes)
            .map(|(&d, &s)| if s > 0 { d / s as f64 } else { 0.0 })
            .collect(),
        level_sizes: sizes,
        gcc: gcc(&simple)?,
        giant_nodes: giant.node_count(),
        giant_diameter: diameter(&giant)?,
    };

    let file = a.name.clone().unwrap_or_else(|| name.to_string());
    ctx.write(&format!("{file}.edges"), &io::format_edge_list(&g))?;
    ctx.write(&format!("{file}.heights"), &heights_text)?;
    ctx.write(&format!("{file}.stats.json"), &to_json(&stats))?;
    ctx.write_svg(&format!("{file}.adjacency.svg"), adjacency_svg(&g, &levels, &stats)?)?;
    println!("n = {}  m = {}  gcc = {:.4}  giant diameter = {}", stats.n, stats.m, stats.gcc, stats.giant_diameter);
    Ok(())
}

fn variant_name(v: Variant) -> &'static str {
    match v {
        Variant::Igam => "igam",
        Variant::Igam2 => "igam2",
        Variant::Directed => "directed",
        Variant::Continuous => "continuous",
    }
}

/// Adjacency matrix with rows and columns sorted by level.
fn adjacency_svg(g: &Graph, levels: &[u32], stats: &GenerateStats) -> Result<Svg, Failure> {
    const SIDE: f64 = 600.0;
    let n = g.node_count();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&u| (levels[u], u));
    let mut pos = vec![0usize; n];
    for (i, &u) in order.iter().enumerate() {
        pos[u] = i;
    }
    let cell = SIDE / n.max(1) as f64;
    let mut svg = Svg::new(SIDE, SIDE);
    svg.data(&serde_json::json!({ "n": stats.n, "m": stats.m, "level_sizes": stats.level_sizes }))
        .map_err(|e| Failure::Io(e.to_string()))?;
    let mut cells = String::new();
    for (u, v) in g.edges() {
        let (pu, pv) = (pos[u as usize] as f64 * cell, pos[v as usize] as f64 * cell);
        for (x, y) in [(pu, pv), (pv, pu)] {
            cells.push_str(&format!(r#"<rect x="{x:.3}" y="{y:.3}" width="{cell:.3}" height="{cell:.3}"/>"#));
        }
    }
    svg.raw(&format!(r#"<g fill="black">{cells}</g>"#));
    let mut boundary = 0;
    for &size in &stats.level_sizes[..stats.level_sizes.len().saturating_sub(1)] {
        boundary += size;
        let at = boundary as f64 * cell;
        svg.line((at, 0.0), (at, SIDE), PALETTE[1], 0.5);
        svg.line((0.0, at), (SIDE, at), PALETTE[1], 0.5);
    }
    Ok(svg)
}

// --------------------------------------------------------------------- fit

#[derive(Serialize)]
struct FitReport<'a> {
    input: String,
    n: usize,
    m: usize,
    #[serde(flatten)]
    fit: &'a FitResult,
}

fn fit_cmd(ctx: &Ctx, a: &FitArgs) -> Result<(), Failure> {
    let (_, g) = load_edges(&a.input)?;
    let n = g.node_count();
    let b_range = match (a.b_min, a.b_max) {
        (None, None) => None,
        (lo, hi) => Some((lo.unwrap_or(2), hi.unwrap_or(n.saturating_sub(1) as u32))),
    };
    let opts = FitOptions {
        scorer: match a.scorer {
            ScorerArg::Exact => Scorer::Exact,
            ScorerArg::Approx => Scorer::Approx,
        },
        b_range,
        swaps: a.swaps,
        uncapped: a.uncapped,
    };
    let r = fit(&g, &opts)?;
    let file = stem(&a.name, &a.input);
    let report = FitReport { input: a.input.display().to_string(), n, m: g.edge_count(), fit: &r };
    ctx.write(&format!("{file}.fit.json"), &to_json(&report))?;
    ctx.write(&format!("{file}.fit.heights"), &io::format_heights(&r.heights))?;
    ctx.write_svg(&format!("{file}.levels.svg"), levels_svg(&r)?)?;
    println!("b* = {}  c* = {:.4}  slope = {:.4}  R^2 = {:.4}", r.b_star, r.c_star, r.slope_a, r.r_squared);
    Ok(())
}

fn levels_svg(r: &FitResult) -> Result<Svg, Failure> {
    let points: Vec<(f64, f64)> =
        r.level_log_degrees.iter().enumerate().filter_map(|(h, z)| z.map(|z| (h as f64, z))).collect();
    let top = r.level_log_degrees.len().saturating_sub(1) as f64;
    let line = vec![(0.0, r.intercept), (top, r.intercept + r.slope_a * top)];
    let chart = Chart {
        title: format!("b* = {}, c* = {:.3}, R\u{b2} = {:.3}", r.b_star, r.c_star, r.r_squared),
        x_label: "level".into(),
        y_label: "log total degree".into(),
        series: vec![
            Series { name: "levels".into(), points: points.clone(), style: Style::Markers },
            Series { name: "regression".into(), points: line, style: Style::Line },
        ],
    };
    let mut svg = chart.render();
    svg.data(&serde_json::json!({
        "b_star": r.b_star,
        "c_star": r.c_star,
        "slope": r.slope_a,
        "intercept": r.intercept,
        "r_squared": r.r_squared,
        "levels": points,
    }))
    .map_err(|e| Failure::Io(e.to_string()))?;
    Ok(svg)
}

// ---------------------------------------------------------------- dominate

fn strategy_of(s: StrategyArg) -> Strategy {
    match s {
        StrategyArg::Greedy => Strategy::Greedy,
        StrategyArg::Prestige => Strategy::Prestige,
        StrategyArg::Cp => Strategy::LogisticCp,
        StrategyArg::Jb => Strategy::LogisticJb,
        StrategyArg::Th => Strategy::LogisticTh,
    }
}

struct Ranked {
    curve: DominationCurve,
    scores: Option<Vec<f64>>,
    epsilon: Option<f64>,
}

/// `heights` is only consulted by `prestige`; `coords` only by `jb`.
fn rank(
    g: &Graph,
    strategy: StrategyArg,
    heights: impl FnOnce() -> Result<HeightAssignment, Failure>,
    coords: Option<&[Vec<f64>]>,
) -> Result<Ranked, Failure> {
    let from_scores = |scores: Vec<f64>, epsilon| -> Result<Ranked, Failure> {
        let ranking = NodeRanking::by_descending_score(&scores, strategy_of(strategy));
        Ok(Ranked { curve: domination_curve(g, &ranking)?, scores: Some(scores), epsilon })
    };
    match strategy {
        StrategyArg::Greedy => Ok(Ranked { curve: greedy_max_coverage(g, None)?.curve, scores: None, epsilon: None }),
        StrategyArg::Prestige => {
            let ranking = prestige_ranking(&heights()?, &g.degrees())?;
            Ok(Ranked { curve: domination_curve(g, &ranking)?, scores: None, epsilon: None })
        }
        StrategyArg::Cp => from_scores(fit_logistic_cp(g, &LogisticFitOptions::default())?.theta, None),
        StrategyArg::Jb => {
            let coords = coords.ok_or_else(|| Failure::Usage("the jb strategy needs coordinates".into()))?;
            let s = fit_logistic_jb(g, coords, &DEFAULT_EPSILON_GRID, &LogisticFitOptions::default())?;
            from_scores(s.theta, s.epsilon)
        }
        StrategyArg::Th => from_scores(th_rank_scores(g, &ThOptions::default())?, None),
    }
}

#[derive(Serialize)]
struct GreedyComparison {
    greedy_exponent: f64,
    gamma: f64,
    intercept: f64,
    r_squared: f64,
}

#[derive(Serialize)]
struct DominateReport {
    input: String,
    strategy: &'static str,
    n: usize,
    kappa: f64,
    exponent: f64,
    prefix_size: usize,
    max_coverage: f64,
    epsilon: Option<f64>,
    against_greedy: Option<GreedyComparison>,
}

fn fitted_heights(g: &Graph) -> Result<HeightAssignment, Failure> {
    Ok(fit(g, &FitOptions::default())?.heights)
}

fn sidecar_heights(g: &Graph, path: &Option<PathBuf>, b: Option<u32>) -> Result<HeightAssignment, Failure> {
    match (path, b) {
        (Some(path), Some(b)) => {
            let h = io::parse_heights(&read(path)?, b).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
            if h.node_count() != g.node_count() {
                return Err(Failure::Io(format!(
                    "{}: {} heights for {} nodes",
                    path.display(),
                    h.node_count(),
                    g.node_count()
                )));
            }
            Ok(h)
        }
        _ => fitted_heights(g),
    }
}

fn dominate(ctx: &Ctx, a: &DominateArgs) -> Result<(), Failure> {
    if !(a.kappa > 0.0 && a.kappa <= 1.0) {
        return Err(Failure::Usage(format!("--kappa {} outside (0, 1]", a.kappa)));
    }
    let (edges, g) = load_edges(&a.input)?;
    let coords = match &a.coords {
        Some(p) => Some(io::parse_coordinates(&read(p)?, &edges)?),
        None => None,
    };
    let ranked = rank(&g, a.strategy, || sidecar_heights(&g, &a.heights, a.b), coords.as_deref())?;
    let exponent = ads_exponent(&ranked.curve, a.kappa)?;
    let greedy = match (a.against_greedy, a.strategy) {
        (true, s) if s != StrategyArg::Greedy => Some(greedy_max_coverage(&g, None)?.curve),
        _ => None,
    };
    let against_greedy = match &greedy {
        Some(gc) => {
            let (gamma, intercept, r_squared) = curve_log_regression(gc, &ranked.curve)
                .ok_or_else(|| Failure::Rejected("curves too short to regress".into()))?;
            Some(GreedyComparison { greedy_exponent: ads_exponent(gc, a.kappa)?, gamma, intercept, r_squared })
        }
        None => None,
    };

    let name = strategy_of(a.strategy).name();
    let report = DominateReport {
        input: a.input.display().to_string(),
        strategy: name,
        n: g.node_count(),
        kappa: a.kappa,
        exponent,
        prefix_size: ranked.curve.prefix_reaching(a.kappa).expect("exponent implies coverage"),
        max_coverage: ranked.curve.max_coverage(),
        epsilon: ranked.epsilon,
        against_greedy,
    };
    let file = format!("{}.{}", stem(&a.name, &a.input), cli_name(a.strategy));
    ctx.write(&format!("{file}.curve.csv"), &ranked.curve.to_csv())?;
    ctx.write(&format!("{file}.exponent.json"), &to_json(&report))?;
    if let Some(scores) = &ranked.scores {
        ctx.write(&format!("{file}.scores.csv"), &scores_to_csv(scores))?;
    }
    let mut curves = vec![(name, &ranked.curve)];
    if let Some(gc) = &greedy {
        curves.push((Strategy::Greedy.name(), gc));
    }
    ctx.write_svg(&format!("{file}.curve.svg"), curve_svg(&curves, exponent)?)?;
    println!("p = {exponent:.4} ({} of {} nodes reach kappa = {})", report.prefix_size, report.n, a.kappa);
    if let Some(c) = &report.against_greedy {
        println!("gamma = {:.4}  R^2 = {:.4}", c.gamma, c.r_squared);
    }
    Ok(())
}

fn cli_name(s: StrategyArg) -> &'static str {
    match s {
        StrategyArg::Greedy => "greedy",
        StrategyArg::Prestige => "prestige",
        StrategyArg::Cp => "cp",
        StrategyArg::Jb => "jb",
        StrategyArg::Th => "th",
    }
}

/// Log-log domination curves in percent of nodes.
fn curve_svg(curves: &[(&str, &DominationCurve)], exponent: f64) -> Result<Svg, Failure> {
    let series = curves
        .iter()
        .map(|(name, c)| {
            let n = c.node_count as f64;
            let points = c
                .prefix_sizes
                .iter()
                .zip(&c.covered)
                .filter(|(_, &d)| d > 0)
                .map(|(&k, &d)| ((100.0 * k as f64 / n).log10(), (100.0 * d as f64 / n).log10()))
                .collect();
            Series { name: name.to_string(), points, style: Style::Line }
        })
        .collect();
    let chart = Chart {
        title: format!("domination curve, p = {exponent:.3}"),
        x_label: "log10 % nodes in prefix".into(),
        y_label: "log10 % nodes dominated".into(),
        series,
    };
    let mut svg = chart.render();
    let data: Vec<_> = curves
        .iter()
        .map(|(name, c)| serde_json::json!({ "strategy": name, "n": c.node_count, "prefix_sizes": c.prefix_sizes, "covered": c.covered }))
        .collect();
    svg.data(&serde_json::json!({ "exponent": exponent, "curves": data })).map_err(|e| Failure::Io(e.to_string()))?;
    Ok(svg)
}

// ----------------------------------------------------------------- compare

#[derive(Serialize)]
struct CompareRow {
    dataset: &'static str,
    n: usize,
    m: usize,
    size_matches: bool,
    exponents: Vec<(&'static str, Option<f64>)>,
    /// Greedy against prestige curve slope, when both ran.
    gamma: Option<f64>,
}

#[derive(Serialize)]
struct TargetCheck {
    dataset: &'static str,
    strategy: &'static str,
    low: f64,
    high: f64,
    exponent: Option<f64>,
    pass: bool,
}

const ALL_STRATEGIES: [StrategyArg; 5] =
    [StrategyArg::Greedy, StrategyArg::Prestige, StrategyArg::Cp, StrategyArg::Jb, StrategyArg::Th];

/// Published exponents as `(dataset, strategy, low, high)` given a tolerance.
fn targets(tol: f64) -> Vec<(&'static str, StrategyArg, f64, f64)> {
    use StrategyArg::*;
    let mut t = vec![];
    for d in ["cs-faculty", "history-faculty", "business-faculty", "world-trade"] {
        t.push((d, Prestige, 0.0, 0.16 + tol));
    }
    for (d, s, p) in [
        ("polblogs", Prestige, 0.27),
        ("polblogs", Cp, 0.64),
        ("polblogs", Th, 0.81),
        ("business-faculty", Cp, 0.15),
        ("open-airlines", Prestige, 0.61),
    ] {
        t.push((d, s, p - tol, p + tol));
    }
    for s in [Prestige, Jb, Th] {
        t.push(("london-underground", s, 0.70, 0.90));
    }
    t
}

fn compare(ctx: &Ctx, a: &CompareArgs) -> Result<(), Failure> {
    let root = a
        .data_dir
        .clone()
        .or_else(data::data_dir)
        .ok_or_else(|| Failure::Io(format!("no dataset root: pass --data-dir or set {}", data::DATA_DIR_ENV)))?;
    let specs = if a.datasets.is_empty() {
        data::registry().iter().collect()
    } else {
        a.datasets
            .iter()
            .map(|name| data::find_dataset(name).ok_or_else(|| Failure::Usage(format!("unknown dataset `{name}`"))))
            .collect::<Result<Vec<_>, _>>()?
    };
    let strategies = if a.strategies.is_empty() { ALL_STRATEGIES.to_vec() } else { a.strategies.clone() };
    let filter = a.iterate_filter.then_some(DegreeFilter::Iterated);

    let mut rows = Vec::new();
    for spec in specs {
        let ds = data::load_dataset(spec, &root, filter)?;
        if !ds.size.matches {
            warn!("{}: sizes differ from the registry", spec.name);
        }
        let g = &ds.graph;
        let mut heights = None;
        let mut curves = Vec::new();
        let mut exponents = Vec::new();
        for &s in &strategies {
            if s == StrategyArg::Jb && g.coordinates().is_none() {
                exponents.push((cli_name(s), None));
                continue;
            }
            let ranked = rank(
                g,
                s,
                || {
                    let h = fitted_heights(g)?;
                    heights = Some(h.clone());
                    Ok(h)
                },
                g.coordinates(),
            )?;
            exponents.push((cli_name(s), Some(ads_exponent(&ranked.curve, a.kappa)?)));
            curves.push((s, ranked.curve));
        }
        let find = |s| curves.iter().find(|(t, _)| *t == s).map(|(_, c)| c);
        let gamma = match (find(StrategyArg::Greedy), find(StrategyArg::Prestige)) {
            (Some(gr), Some(pr)) => curve_log_regression(gr, pr).map(|r| r.0),
            _ => None,
        };
        rows.push(CompareRow {
            dataset: spec.name,
            n: g.node_count(),
            m: g.edge_count(),
            size_matches: ds.size.matches,
            exponents,
            gamma,
        });
    }

    let checks: Vec<TargetCheck> = targets(a.tolerance)
        .into_iter()
        .filter_map(|(d, s, low, high)| {
            let row = rows.iter().find(|r| r.dataset == d)?;
            let (_, p) = row.exponents.iter().find(|(name, _)| *name == cli_name(s))?;
            Some(TargetCheck {
                dataset: row.dataset,
                strategy: cli_name(s),
                low,
                high,
                exponent: *p,
                pass: p.is_some_and(|p| p >= low && p <= high),
            })
        })
        .collect();

    let table = match ctx.format {
        Format::Csv => compare_csv(&rows, &strategies),
        Format::Json => to_json(&rows),
    };
    let ext = if ctx.format == Format::Csv { "csv" } else { "json" };
    ctx.write(&format!("exponents.{ext}"), &table)?;
    ctx.write("targets.json", &to_json(&checks))?;
    print!("{}", compare_csv(&rows, &strategies));
    for c in &checks {
        let shown = c.exponent.map_or("n/a".into(), |p| format!("{p:.3}"));
        let verdict = if c.pass { "ok" } else { "MISS" };
        println!("{verdict:4} {} {} p = {shown} in [{:.2}, {:.2}]", c.dataset, c.strategy, c.low, c.high);
    }
    Ok(())
}

fn compare_csv(rows: &[CompareRow], strategies: &[StrategyArg]) -> String {
    let mut out = String::from("dataset,n,m");
    for &s in strategies {
        out.push(',');
        out.push_str(cli_name(s));
    }
    out.push_str(",gamma\n");
    let cell = |x: Option<f64>| x.map(|v| format!("{v:.4}")).unwrap_or_default();
    for r in rows {
        out.push_str(&format!("{},{},{}", r.dataset, r.n, r.m));
        for (_, p) in &r.exponents {
            out.push(',');
            out.push_str(&cell(*p));
        }
        out.push(',');
        out.push_str(&cell(r.gamma));
        out.push('\n');
    }
    out
}

// --------------------------------------------------------------- visualize

const LABELED_LEVELS: u32 = 2;

fn visualize(ctx: &Ctx, a: &VisualizeArgs) -> Result<(), Failure> {
    let (edges, g) = load_edges(&a.input)?;
    let heights = sidecar_heights(&g, &a.heights, a.b)?;
    let labels = match &a.labels {
        Some(p) => Some(io::parse_labels(&read(p)?, &edges)?),
        None => (!edges.integer_ids).then(|| edges.tokens.clone()),
    };
    let file = stem(&a.name, &a.input);
    ctx.write_svg(&format!("{file}.layers.svg"), layered_svg(&g, &heights, labels.as_deref())?)?;
    println!("{} levels, sizes {:?}", heights.max_height() + 1, heights.level_sizes());
    Ok(())
}

/// One row per level, nodes ordered by degree within a row.
fn layered_svg(g: &Graph, heights: &HeightAssignment, labels: Option<&[String]>) -> Result<Svg, Failure> {
    const WIDTH: f64 = 1000.0;
    const ROW: f64 = 90.0;
    let levels = heights.max_height() as usize + 1;
    let degrees = g.degrees();
    let mut rows: Vec<Vec<usize>> = vec![Vec::new(); levels];
    for u in 0..g.node_count() {
        rows[heights.height(u as igam::NodeId) as usize].push(u);
    }
    let mut pos = vec![(0.0, 0.0); g.node_count()];
    for (h, row) in rows.iter_mut().enumerate() {
        row.sort_by_key(|&u| (std::cmp::Reverse(degrees[u]), u));
        let step = (WIDTH - 40.0) / row.len().max(1) as f64;
        for (i, &u) in row.iter().enumerate() {
            pos[u] = (20.0 + step * (i as f64 + 0.5), 40.0 + ROW * h as f64);
        }
    }
    let mut svg = Svg::new(WIDTH, 40.0 + ROW * levels as f64);
    svg.data(&serde_json::json!({
        "n": g.node_count(),
        "m": g.edge_count(),
        "fanout": heights.fanout(),
        "level_sizes": heights.level_sizes(),
    }))
    .map_err(|e| Failure::Io(e.to_string()))?;
    let mut lines = String::new();
    for (u, v) in g.edges() {
        let ((x1, y1), (x2, y2)) = (pos[u as usize], pos[v as usize]);
        lines.push_str(&format!(r#"<line x1="{x1:.2}" y1="{y1:.2}" x2="{x2:.2}" y2="{y2:.2}"/>"#));
    }
    svg.raw(&format!(r##"<g stroke="#bbbbbb" stroke-width="0.3" stroke-opacity="0.6">{lines}</g>"##));
    for (h, row) in rows.iter().enumerate() {
        for &u in row {
            svg.circle(pos[u], 3.0, PALETTE[h % PALETTE.len()]);
        }
    }
    if let Some(labels) = labels {
        for row in rows.iter().take(LABELED_LEVELS as usize) {
            for &u in row.iter().take(30) {
                let (x, y) = pos[u];
                svg.text((x, y - 6.0), 9.0, "middle", &labels[u]);
            }
        }
    }
    Ok(svg)
}
