use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn resolv(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_resolv"))
        .args(args)
        .env_remove("RESOLV_THREADS")
        .output()
        .expect("binary runs")
}

fn ok(args: &[&str]) -> Output {
    let out = resolv(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    out
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

struct Workspace {
    dir: TempDir,
}

impl Workspace {
    fn new() -> Self {
        Workspace {
            dir: TempDir::new().unwrap(),
        }
    }

    fn path(&self, name: &str) -> PathBuf {
        self.dir.path().join(name)
    }

    fn file(&self, name: &str, contents: &str) -> PathBuf {
        let p = self.path(name);
        fs::write(&p, contents).unwrap();
        p
    }

    fn json(&self, name: &str) -> Value {
        serde_json::from_str(&fs::read_to_string(self.path(name)).unwrap()).unwrap()
    }

    /// Generates the plateau fixture as `plateau.*` and returns the prefix.
    fn plateau(&self, seed: u64) -> PathBuf {
        let config = self.file("plateau.json", r#"{"model": "plateau"}"#);
        let prefix = self.path(&format!("plateau{seed}"));
        ok(&[
            "generate",
            "--config",
            path_str(&config),
            "--seed",
            &seed.to_string(),
            "--out",
            path_str(&prefix),
        ]);
        prefix
    }
}

fn suffixed(prefix: &Path, suffix: &str) -> String {
    format!("{}{suffix}", prefix.display())
}

#[test]
fn generate_plateau_has_expected_size_and_is_reproducible() {
    let ws = Workspace::new();
    let a = ws.plateau(3);
    let edges = fs::read_to_string(suffixed(&a, ".edges")).unwrap();
    assert_eq!(edges.lines().count(), 989);
    let communities = fs::read_to_string(suffixed(&a, ".communities")).unwrap();
    assert_eq!(communities.lines().count(), 112);
    let provenance = ws.json("plateau3.provenance.json");
    assert_eq!(provenance["nodes"], 112);
    assert_eq!(provenance["edges"], 989);
    assert_eq!(provenance["seed"], 3);
    assert_eq!(provenance["config"]["model"], "plateau");

    let again = ws.path("again");
    let config = ws.path("plateau.json");
    ok(&[
        "generate",
        "--config",
        path_str(&config),
        "--seed",
        "3",
        "--out",
        path_str(&again),
    ]);
    for suffix in [".edges", ".communities", ".provenance.json"] {
        assert_eq!(
            fs::read(suffixed(&a, suffix)).unwrap(),
            fs::read(suffixed(&again, suffix)).unwrap(),
            "{suffix}"
        );
    }
}

#[test]
fn generate_rejects_invalid_configs() {
    let ws = Workspace::new();
    let out = ws.path("x");
    let equal = ws.file(
        "equal.json",
        r#"{"model": "extended_ppm", "community_sizes": [3, 3], "target_degrees": [1, 1, 1, 1, 1, 1],
            "omega_out": 0.5, "omega_diag": [2.0, 0.5]}"#,
    );
    let r = resolv(&[
        "generate",
        "--config",
        path_str(&equal),
        "--out",
        path_str(&out),
    ]);
    assert_eq!(code(&r), 4);
    assert!(String::from_utf8_lossy(&r.stderr).contains("omega_diag"));

    let unknown = ws.file(
        "unknown.json",
        r#"{"model": "er", "nodes": 5, "edges": 2, "prob": 1}"#,
    );
    let r = resolv(&[
        "generate",
        "--config",
        path_str(&unknown),
        "--out",
        path_str(&out),
    ]);
    assert_eq!(code(&r), 4);
    assert!(String::from_utf8_lossy(&r.stderr).contains("prob"));

    let broken = ws.file("broken.json", r#"{"model": "#);
    let r = resolv(&[
        "generate",
        "--config",
        path_str(&broken),
        "--out",
        path_str(&out),
    ]);
    assert_eq!(code(&r), 3);
}

#[test]
fn usage_parse_and_io_errors_have_distinct_codes() {
    let ws = Workspace::new();
    assert_eq!(code(&resolv(&["detect"])), 2);
    assert_eq!(code(&resolv(&["frobnicate"])), 2);
    let empty = ws.file("empty.edges", "# nothing here\n");
    assert_eq!(code(&resolv(&["detect", "--graph", path_str(&empty)])), 3);
    let bad = ws.file("bad.edges", "1 2\n3\n");
    let r = resolv(&["detect", "--graph", path_str(&bad)]);
    assert_eq!(code(&r), 3);
    assert!(String::from_utf8_lossy(&r.stderr).contains("line 2"));
    let missing = ws.path("missing.edges");
    assert_eq!(code(&resolv(&["detect", "--graph", path_str(&missing)])), 1);
    let tri = ws.file("tri.edges", "a b\nb c\na c\n");
    assert_eq!(
        code(&resolv(&[
            "detect",
            "--graph",
            path_str(&tri),
            "--gamma=-1"
        ])),
        4
    );
}

#[test]
fn help_documents_exit_codes() {
    let out = ok(&["--help"]);
    let text = String::from_utf8_lossy(&out.stdout);
    for needle in ["Exit codes", "parse error", "validation error"] {
        assert!(text.contains(needle), "{needle}");
    }
}

fn community_map(path: &str) -> std::collections::HashMap<String, String> {
    fs::read_to_string(path)
        .unwrap()
        .lines()
        .map(|l| {
            let mut it = l.split_whitespace();
            (
                it.next().unwrap().to_string(),
                it.next().unwrap().to_string(),
            )
        })
        .collect()
}

#[test]
fn detect_plateau_louvain_merges_cliques() {
    let ws = Workspace::new();
    let prefix = ws.plateau(0);
    let out = ws.path("louvain");
    ok(&[
        "detect",
        "--graph",
        &suffixed(&prefix, ".edges"),
        "--method",
        "louvain",
        "--gamma",
        "1.5",
        "--out",
        path_str(&out),
    ]);
    let report = ws.json("louvain.json");
    assert_eq!(report["method"], "louvain");
    assert_eq!(report["nodes"], 112);
    assert!(report["modularity"].as_f64().unwrap() > 0.0);
    assert!(report.get("tree").is_none());
    let labels = community_map(&suffixed(&out, ".communities"));
    let clique = &labels["100"];
    assert!((100..112).all(|i| &labels[&i.to_string()] == clique));
    assert!((0..100).all(|i| &labels[&i.to_string()] != clique));
}

#[test]
fn detect_plateau_multiscale_recovers_three_blocks() {
    let ws = Workspace::new();
    let prefix = ws.plateau(0);
    let out = ws.path("ms");
    ok(&[
        "detect",
        "--graph",
        &suffixed(&prefix, ".edges"),
        "--method",
        "multiscale",
        "--gamma0",
        "0.5",
        "--out",
        path_str(&out),
    ]);
    let report = ws.json("ms.json");
    assert_eq!(report["communities"], 3);
    let tree = &report["tree"];
    assert_eq!(tree["leaf_count"], 3);
    assert_eq!(tree["root"]["decision"], "recursed");
    assert!(tree["root"]["odds"]["log_odds"].as_f64().unwrap() > 0.0);

    let r = ok(&[
        "metrics",
        "--detected",
        &suffixed(&out, ".communities"),
        "--truth",
        &suffixed(&prefix, ".communities"),
    ]);
    let m: Value = serde_json::from_slice(&r.stdout).unwrap();
    assert_eq!(m["nmi"], 1.0);
    assert_eq!(m["ari"], 1.0);
    assert_eq!(m["f_measure"], 1.0);
    assert_eq!(m["dropped_nodes"], 0);
}

#[test]
fn bounds_on_plateau_reports_empty_interval() {
    let ws = Workspace::new();
    let prefix = ws.plateau(1);
    let r = ok(&[
        "bounds",
        "--graph",
        &suffixed(&prefix, ".edges"),
        "--truth",
        &suffixed(&prefix, ".communities"),
    ]);
    let b: Value = serde_json::from_slice(&r.stdout).unwrap();
    assert_eq!(b["interval"]["empty"], true);
    let d = &b["density_matrix"];
    assert!((d[1][2].as_f64().unwrap() - 1.93).abs() < 0.01);
    assert!((d[1][1].as_f64().unwrap() - 57.94).abs() < 0.01);
    let ppm = &b["ppm"];
    let (lo, mid, hi) = (
        ppm["omega_out"].as_f64().unwrap(),
        ppm["gamma_mle"].as_f64().unwrap(),
        ppm["omega_in"].as_f64().unwrap(),
    );
    assert!(lo <= mid && mid <= hi);
}

#[test]
fn sweep_writes_json_and_csv() {
    let ws = Workspace::new();
    let prefix = ws.plateau(2);
    let out = ws.path("sweep");
    ok(&[
        "sweep",
        "--graph",
        &suffixed(&prefix, ".edges"),
        "--truth",
        &suffixed(&prefix, ".communities"),
        "--grid",
        "0.2:60:100",
        "--seeds",
        "5",
        "--out",
        path_str(&out),
    ]);
    let report = ws.json("sweep.json");
    let rows = report["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 100);
    for row in rows {
        assert_eq!(row["runs"].as_array().unwrap().len(), 5);
        for run in row["runs"].as_array().unwrap() {
            assert!(run["nmi"].as_f64().unwrap() < 1.0, "{row}");
        }
    }
    let csv = fs::read_to_string(suffixed(&out, ".csv")).unwrap();
    assert_eq!(csv.lines().count(), 101);
    assert!(csv.starts_with("gamma,nmi,ari,communities,modularity,elapsed_seconds"));
}

#[test]
fn sweep_single_point_and_thread_cap() {
    let ws = Workspace::new();
    let prefix = ws.plateau(4);
    let args = |grid: &str| {
        vec![
            "sweep".to_string(),
            "--graph".into(),
            suffixed(&prefix, ".edges"),
            "--truth".into(),
            suffixed(&prefix, ".communities"),
            "--grid".into(),
            grid.into(),
            "--seeds".into(),
            "3".into(),
        ]
    };
    let single: Vec<String> = args("1.5:1.5:1");
    let single: Vec<&str> = single.iter().map(String::as_str).collect();
    let r: Value = serde_json::from_slice(&ok(&single).stdout).unwrap();
    assert_eq!(r["rows"].as_array().unwrap().len(), 1);

    let grid = args("0.5:4:8");
    let grid: Vec<&str> = grid.iter().map(String::as_str).collect();
    let strip = |v: &Value| -> Vec<(f64, f64)> {
        v["rows"]
            .as_array()
            .unwrap()
            .iter()
            .map(|r| {
                (
                    r["nmi"].as_f64().unwrap(),
                    r["communities"].as_f64().unwrap(),
                )
            })
            .collect()
    };
    let default: Value = serde_json::from_slice(&ok(&grid).stdout).unwrap();
    let capped = Command::new(env!("CARGO_BIN_EXE_resolv"))
        .args(&grid)
        .env("RESOLV_THREADS", "1")
        .output()
        .unwrap();
    assert!(capped.status.success());
    let capped: Value = serde_json::from_slice(&capped.stdout).unwrap();
    assert_eq!(strip(&default), strip(&capped));

    let mut csv = grid.clone();
    csv.extend(["--format", "csv"]);
    let text = String::from_utf8(ok(&csv).stdout).unwrap();
    assert_eq!(text.lines().count(), 9);

    let empty = args("1:2:0");
    let empty: Vec<&str> = empty.iter().map(String::as_str).collect();
    assert_eq!(code(&resolv(&empty)), 2);
}

#[test]
fn metrics_with_ranked_lines_and_top_k() {
    let ws = Workspace::new();
    let detected = ws.file("det.txt", "a 1\nb 1\nc 2\nd 2\n");
    let truth = ws.file("truth.txt", "a b\nc d\nb c\n");
    let r = ok(&[
        "metrics",
        "--detected",
        path_str(&detected),
        "--truth",
        path_str(&truth),
        "--truth-format",
        "lines",
        "--top-k",
        "2",
    ]);
    let m: Value = serde_json::from_slice(&r.stdout).unwrap();
    assert_eq!(m["f_measure"], 1.0);
    assert!(m["nmi"].is_null());
    assert_eq!(m["top_k"], 2);

    let pairs = ws.file("pairs.txt", "a x\nb x\nc y\nd y\n");
    let r = resolv(&[
        "metrics",
        "--detected",
        path_str(&detected),
        "--truth",
        path_str(&pairs),
        "--top-k",
        "1",
    ]);
    assert_eq!(code(&r), 4);
    let r = ok(&[
        "metrics",
        "--detected",
        path_str(&detected),
        "--truth",
        path_str(&pairs),
        "--format",
        "csv",
    ]);
    let text = String::from_utf8(r.stdout).unwrap();
    assert_eq!(text.lines().nth(1).unwrap(), "1,1,1,2,4,0");
}
