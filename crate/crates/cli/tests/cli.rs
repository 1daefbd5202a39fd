use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn igam(out: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_igam"))
        .arg("--output-dir")
        .arg(out)
        .args(args)
        .env_remove("IGAM_OUTPUT_DIR")
        .env_remove("IGAM_DATA_DIR")
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn json(path: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

/// Parses the document and returns its embedded data comment.
fn svg_data(path: &Path) -> Value {
    let text = fs::read_to_string(path).unwrap();
    let doc = roxmltree::Document::parse(&text).expect("well-formed svg");
    assert_eq!(doc.root_element().tag_name().name(), "svg");
    let comment = doc
        .root_element()
        .children()
        .find_map(|n| n.text().filter(|_| n.is_comment()).and_then(|t| t.trim().strip_prefix("igam-data ")))
        .expect("igam-data comment");
    serde_json::from_str(comment).unwrap()
}

#[test]
fn generate_is_byte_identical_across_runs() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let args = ["generate", "--variant", "igam", "--b", "3", "--c", "2", "--H", "4", "--seed", "1"];
    assert_eq!(code(&igam(a.path(), &args)), 0);
    assert_eq!(code(&igam(b.path(), &args)), 0);
    for file in ["igam.edges", "igam.heights", "igam.stats.json", "igam.adjacency.svg"] {
        assert_eq!(fs::read(a.path().join(file)).unwrap(), fs::read(b.path().join(file)).unwrap(), "{file}");
    }
}

#[test]
fn generated_edge_count_is_near_expectation() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(code(&igam(dir.path(), &["generate", "--b", "3", "--c", "1.5", "--H", "5", "--seed", "4"])), 0);
    let stats = json(&dir.path().join("igam.stats.json"));
    let (m, mean) = (stats["m"].as_f64().unwrap(), stats["expected_m"].as_f64().unwrap());
    assert!((m - mean).abs() < 5.0 * mean.sqrt(), "{m} vs {mean}");
    assert_eq!(stats["level_sizes"], serde_json::json!([1, 3, 9, 27, 81, 243]));
}

#[test]
fn igam2_writes_adjacency_plot() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["generate", "--variant", "igam2", "--b", "3", "--c1", "1.5", "--c2", "2.5", "--H0", "2", "--H", "6"];
    assert_eq!(code(&igam(dir.path(), &args)), 0);
    let data = svg_data(&dir.path().join("igam2.adjacency.svg"));
    assert_eq!(data["n"], 1093);
}

#[test]
fn config_file_overrides_flags() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("run.json");
    fs::write(&config, r#"{"c": 1.5, "seed": 7, "name": "tuned"}"#).unwrap();
    let out = igam(dir.path(), &["--config", config.to_str().unwrap(), "generate", "--b", "3", "--c", "2", "--H", "3"]);
    assert_eq!(code(&out), 0);
    let stats = json(&dir.path().join("tuned.stats.json"));
    assert_eq!(stats["seed"], 7);
    let direct = tempfile::tempdir().unwrap();
    igam(direct.path(), &["generate", "--b", "3", "--c", "1.5", "--H", "3", "--seed", "7"]);
    assert_eq!(fs::read(dir.path().join("tuned.edges")).unwrap(), fs::read(direct.path().join("igam.edges")).unwrap());
}

#[test]
fn output_dir_defaults_to_env() {
    let dir = tempfile::tempdir().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_igam"))
        .args(["generate", "--b", "2", "--c", "1.5", "--H", "2"])
        .env("IGAM_OUTPUT_DIR", dir.path())
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(dir.path().join("igam.edges").exists());
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let tiny = dir.path().join("tiny.txt");
    fs::write(&tiny, "0 1\n").unwrap();
    assert_eq!(code(&igam(dir.path(), &["fit", tiny.to_str().unwrap()])), 2);
    assert_eq!(code(&igam(dir.path(), &["fit", "no/such/file"])), 1);
    assert_eq!(code(&igam(dir.path(), &["generate", "--b", "3", "--c", "4", "--H", "3"])), 3);
    assert_eq!(code(&igam(dir.path(), &["generate", "--variant", "sideways"])), 3);
    assert_eq!(code(&igam(dir.path(), &["dominate", tiny.to_str().unwrap(), "--kappa", "1.5"])), 3);
    assert_eq!(code(&igam(dir.path(), &["compare"])), 1);
    let bad = dir.path().join("bad.txt");
    fs::write(&bad, "0 1\n2\n").unwrap();
    assert_eq!(code(&igam(dir.path(), &["fit", bad.to_str().unwrap()])), 1);
}

#[test]
fn fit_reports_and_plots_match() {
    let dir = tempfile::tempdir().unwrap();
    igam(dir.path(), &["generate", "--b", "3", "--c", "2", "--H", "5"]);
    let edges = dir.path().join("igam.edges");
    assert_eq!(code(&igam(dir.path(), &["fit", edges.to_str().unwrap()])), 0);
    let report = json(&dir.path().join("igam.fit.json"));
    let plot = svg_data(&dir.path().join("igam.levels.svg"));
    assert_eq!(report["r_squared"], plot["r_squared"]);
    assert_eq!(report["b_star"], plot["b_star"]);
    let c = report["c_star"].as_f64().unwrap();
    assert!(c > 1.0 && c < report["b_star"].as_f64().unwrap());
    let heights = fs::read_to_string(dir.path().join("igam.fit.heights")).unwrap();
    assert_eq!(heights.lines().count(), report["n"].as_u64().unwrap() as usize);
}

#[test]
fn edgeless_greedy_curve_is_linear() {
    let dir = tempfile::tempdir().unwrap();
    let empty = dir.path().join("empty.txt");
    fs::write(&empty, "# nodes 10\n").unwrap();
    assert_eq!(code(&igam(dir.path(), &["dominate", empty.to_str().unwrap(), "--strategy", "greedy"])), 0);
    let report = json(&dir.path().join("empty.greedy.exponent.json"));
    let expect = 8f64.ln() / 10f64.ln();
    assert!((report["exponent"].as_f64().unwrap() - expect).abs() < 1e-12);
    let csv = fs::read_to_string(dir.path().join("empty.greedy.curve.csv")).unwrap();
    assert_eq!(csv.lines().next(), Some("prefix_size,covered_fraction"));
    assert_eq!(csv.lines().nth(3), Some("3,0.3"));
}

#[test]
fn dominate_strategies_write_curves() {
    let dir = tempfile::tempdir().unwrap();
    igam(dir.path(), &["generate", "--b", "3", "--c", "1.5", "--H", "4"]);
    let edges = dir.path().join("igam.edges");
    let coords = dir.path().join("coords.csv");
    let text: String = (0..121).map(|u| format!("{u},{},{}\n", u % 11, u / 11)).collect();
    fs::write(&coords, text).unwrap();
    for s in ["greedy", "prestige", "cp", "jb", "th"] {
        let out = igam(
            dir.path(),
            &["dominate", edges.to_str().unwrap(), "--strategy", s, "--coords", coords.to_str().unwrap()],
        );
        assert_eq!(code(&out), 0, "{s}: {}", String::from_utf8_lossy(&out.stderr));
        let p = json(&dir.path().join(format!("igam.{s}.exponent.json")))["exponent"].as_f64().unwrap();
        assert!(p > 0.0 && p < 1.0);
        let data = svg_data(&dir.path().join(format!("igam.{s}.curve.svg")));
        assert_eq!(data["exponent"].as_f64().unwrap(), p);
    }
    let out = igam(dir.path(), &["dominate", edges.to_str().unwrap(), "--against-greedy"]);
    assert_eq!(code(&out), 0);
    let report = json(&dir.path().join("igam.prestige.exponent.json"));
    assert!(report["against_greedy"]["gamma"].as_f64().unwrap() > 0.0);
}

#[test]
fn visualize_draws_levels() {
    let dir = tempfile::tempdir().unwrap();
    igam(dir.path(), &["generate", "--b", "3", "--c", "2", "--H", "3"]);
    let (edges, heights) = (dir.path().join("igam.edges"), dir.path().join("igam.heights"));
    let out =
        igam(dir.path(), &["visualize", edges.to_str().unwrap(), "--heights", heights.to_str().unwrap(), "--b", "3"]);
    assert_eq!(code(&out), 0);
    let data = svg_data(&dir.path().join("igam.layers.svg"));
    assert_eq!(data["level_sizes"], serde_json::json!([1, 3, 9, 27]));
}

#[test]
fn compare_reads_registered_layout() {
    let root = tempfile::tempdir().unwrap();
    let dir = root.path().join("world-trade");
    fs::create_dir(&dir).unwrap();
    // two dense blocks joined through a hub; every node keeps degree above the cutoff
    let mut text = String::new();
    for u in 0..14 {
        for v in u + 1..14 {
            if (u < 7) == (v < 7) || u == 0 {
                text.push_str(&format!("{u} {v}\n"));
            }
        }
    }
    fs::write(dir.join("edges.txt"), text).unwrap();
    let out_dir = tempfile::tempdir().unwrap();
    let out = igam(
        out_dir.path(),
        &[
            "compare",
            "--data-dir",
            root.path().to_str().unwrap(),
            "--datasets",
            "world-trade",
            "--strategies",
            "greedy,prestige",
        ],
    );
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let table = fs::read_to_string(out_dir.path().join("exponents.csv")).unwrap();
    assert!(table.starts_with("dataset,n,m,greedy,prestige,gamma\nworld-trade,14,"));
    let targets = json(&out_dir.path().join("targets.json"));
    assert_eq!(targets[0]["dataset"], "world-trade");
}
