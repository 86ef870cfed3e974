mod common;

use std::path::{Path, PathBuf};
use std::process::Command;

use common::{random_graph, rng};
use didm::graph_model::{load_graph_json, load_tudataset, Dataset, GraphSignal};
use didm::harness::{
    canonical_order, dataset_correlation_experiment, knn_experiment, knn_from_distances, sbm_correlation_experiment,
    AttributeMode, DatasetSource, ExperimentConfig, ExperimentKind, SbmCorrelationConfig, SignalMode,
};
use didm::mpnn::init_gc_meanpool;
use ndarray::Array2;
use rand::seq::SliceRandom;
use rand::Rng;

fn data_root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data")
}

/// Writes `ds` in TU format (unlabeled nodes) under `dir/<name>_*.txt`.
fn write_tu(dir: &Path, name: &str, graphs: &[GraphSignal], labels: &[i64]) {
    let (mut a, mut ind, mut offset) = (String::new(), String::new(), 0);
    for (gi, g) in graphs.iter().enumerate() {
        for v in 0..g.node_count() {
            ind.push_str(&format!("{}\n", gi + 1));
            for (u, _) in g.neighbors(v) {
                a.push_str(&format!("{}, {}\n", offset + v + 1, offset + u + 1));
            }
        }
        offset += g.node_count();
    }
    let lab: String = labels.iter().map(|l| format!("{l}\n")).collect();
    std::fs::write(dir.join(format!("{name}_A.txt")), a).unwrap();
    std::fs::write(dir.join(format!("{name}_graph_indicator.txt")), ind).unwrap();
    std::fs::write(dir.join(format!("{name}_graph_labels.txt")), lab).unwrap();
}

fn toy_dataset(seed: u64, count: usize) -> Dataset {
    let mut r = rng(seed);
    let graphs: Vec<GraphSignal> = (0..count).map(|_| random_graph(&mut r, 7, 1, false)).collect();
    let labels = (0..count).map(|_| r.random_range(0..3)).collect();
    Dataset::new("toy", graphs, labels).unwrap()
}

#[test]
fn mutag_has_188_graphs_in_two_classes() {
    let ds = load_tudataset(data_root(), "MUTAG").unwrap();
    assert_eq!(ds.len(), 188);
    assert_eq!(ds.classes().len(), 2);
    for g in &ds.graphs {
        g.validate().unwrap();
    }
}

#[test]
fn knn_does_not_depend_on_file_order() {
    let ds = toy_dataset(11, 40);
    let base = knn_experiment(&ds, 2, 10, 0.9, 3).unwrap();
    let mut r = rng(12);
    for _ in 0..3 {
        let mut idx: Vec<usize> = (0..ds.len()).collect();
        idx.shuffle(&mut r);
        let shuffled = Dataset::new(
            "toy",
            idx.iter().map(|&i| ds.graphs[i].clone()).collect(),
            idx.iter().map(|&i| ds.labels[i]).collect(),
        )
        .unwrap();
        assert_eq!(knn_experiment(&shuffled, 2, 10, 0.9, 3).unwrap(), base);
    }
    let order = canonical_order(&ds);
    assert_eq!(order.len(), ds.len());
}

#[test]
fn knn_ties_go_to_the_lowest_training_index() {
    // graph 0 sits at distance 0 from everyone; whenever it is in training, every test
    // item is labeled 0, so accuracy equals the share of label-0 test items
    let n = 20;
    let labels: Vec<i64> = (0..n).map(|i| (i % 2) as i64).collect();
    let d = Array2::from_shape_fn((n, n), |(i, j)| if i == j || i == 0 || j == 0 { 0.0 } else { 1.0 });
    let report = knn_from_distances(&d, &labels, 20, 0.5, 0).unwrap();
    assert!(report.accuracies.iter().all(|a| (a * 10.0 - (a * 10.0).round()).abs() < 1e-9));
    let mean: f64 = report.accuracies.iter().sum::<f64>() / 20.0;
    assert!((report.mean - mean).abs() < 1e-15);
    let var: f64 = report.accuracies.iter().map(|a| (a - mean).powi(2)).sum::<f64>() / 20.0;
    assert!((report.std - var.sqrt()).abs() < 1e-15);
}

#[test]
fn knn_is_perfect_on_separated_clusters() {
    let n = 30;
    let labels: Vec<i64> = (0..n).map(|i| (i / 10) as i64).collect();
    let d = Array2::from_shape_fn((n, n), |(i, j)| if labels[i] == labels[j] { 0.1 } else { 5.0 });
    let report = knn_from_distances(&d, &labels, 10, 0.9, 8).unwrap();
    assert!(report.accuracies.iter().all(|&a| a == 1.0));
    assert_eq!(report.std, 0.0);
}

#[test]
fn sbm_runs_are_reproducible_to_the_byte() {
    let dir = tempfile::tempdir().unwrap();
    for signal in [SignalMode::Constant, SignalMode::Community, SignalMode::Gaussian] {
        let mut cfg = ExperimentConfig::new(ExperimentKind::SbmCorrelate);
        cfg.sbm = Some(SbmCorrelationConfig { signal, graphs: 8, block_sizes: vec![6, 6], ..Default::default() });
        cfg.output_dir = Some(dir.path().to_path_buf());
        let file = dir.path().join("sbm_correlation.csv");
        cfg.run().unwrap();
        let ta = std::fs::read_to_string(&file).unwrap();
        std::fs::remove_file(&file).unwrap();
        cfg.run().unwrap();
        let tb = std::fs::read_to_string(&file).unwrap();
        assert!(ta == tb, "{signal:?} runs differ");
        assert!(ta.starts_with("# config:"));
    }
}

#[test]
fn sbm_sweep_anchor_row_is_zero() {
    let cfg = SbmCorrelationConfig { graphs: 6, block_sizes: vec![5, 5], ..Default::default() };
    let report = sbm_correlation_experiment(&cfg).unwrap();
    let last = report.rows.last().unwrap();
    assert_eq!(last.delta, 0.0);
    assert_eq!(last.output_distance, 0.0);
}

#[test]
fn anchor_against_itself_is_origin() {
    let ds = toy_dataset(21, 12);
    let model = init_gc_meanpool(2, 4, 1, 4, 0).unwrap();
    let report = dataset_correlation_experiment(&ds, 5, &model, 2).unwrap();
    let own = report.rows.iter().find(|r| r.graph == 5).unwrap();
    assert_eq!((own.delta, own.output_distance), (0.0, 0.0));
    assert!(dataset_correlation_experiment(&ds, 12, &model, 2).is_err());
}

#[test]
fn config_run_writes_every_artifact() {
    let dir = tempfile::tempdir().unwrap();
    let ds = toy_dataset(31, 24);
    write_tu(dir.path(), "TOY", &ds.graphs, &ds.labels);
    let source = DatasetSource { root: dir.path().to_path_buf(), name: "TOY".into(), attributes: AttributeMode::Degrees };
    let out = dir.path().join("out");
    for (kind, file) in [
        (ExperimentKind::Knn, "knn.csv"),
        (ExperimentKind::DatasetCorrelate, "dataset_correlation.csv"),
        (ExperimentKind::LipschitzCheck, "lipschitz_check.csv"),
    ] {
        let mut cfg = ExperimentConfig::new(kind);
        cfg.dataset = Some(source.clone());
        cfg.models = 4;
        cfg.pairs = 10;
        cfg.output_dir = Some(out.clone());
        cfg.run().unwrap();
        let text = std::fs::read_to_string(out.join(file)).unwrap();
        let header = text.lines().next().unwrap();
        assert!(header.starts_with("# config:") && header.contains("seed"), "{file}: {header}");
    }
}

fn didm_bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_didm"))
}

#[test]
fn cli_gen_sbm_then_dist() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a.json"), dir.path().join("b.json"));
    for (path, q, seed) in [(&a, "0.1", "1"), (&b, "0.4", "2")] {
        let st = didm_bin()
            .args(["gen-sbm", "--blocks", "5,5", "--p", "0.6", "--q", q, "--seed", seed, "--out"])
            .arg(path)
            .status()
            .unwrap();
        assert!(st.success());
    }
    let g = load_graph_json(&a).unwrap();
    assert_eq!(g.node_count(), 10);

    let out = didm_bin().arg("dist").arg("--left").arg(&a).arg("--right").arg(&b).args(["--depth", "2"]).output().unwrap();
    assert!(out.status.success());
    let printed: f64 = String::from_utf8(out.stdout).unwrap().trim().parse().unwrap();
    let want = didm::metric::didm_distance(&g, &load_graph_json(&b).unwrap(), 2).unwrap();
    assert_eq!(printed, want);

    let same = didm_bin().arg("dist").arg("--left").arg(&a).arg("--right").arg(&a).output().unwrap();
    let zero: f64 = String::from_utf8(same.stdout).unwrap().trim().parse().unwrap();
    assert_eq!(zero, 0.0);
}

#[test]
fn cli_dataset_commands() {
    let dir = tempfile::tempdir().unwrap();
    let ds = toy_dataset(41, 16);
    write_tu(dir.path(), "TOY", &ds.graphs, &ds.labels);
    let m = dir.path().join("m.csv");
    let st = didm_bin()
        .arg("pairwise")
        .arg("--tudataset")
        .arg(dir.path())
        .args(["--name", "TOY", "--degrees", "--depth", "1", "--out"])
        .arg(&m)
        .env("DIDM_THREADS", "2")
        .status()
        .unwrap();
    assert!(st.success());
    let matrix = didm::metric::read_distance_csv(&m).unwrap();
    assert_eq!(matrix.dim(), (16, 16));

    let out = dir.path().join("runs");
    let st = didm_bin()
        .arg("lipschitz-check")
        .arg("--tudataset")
        .arg(dir.path())
        .args(["--name", "TOY", "--degrees", "--models", "6", "--pairs", "8", "--hidden", "4", "--out"])
        .arg(&out)
        .status()
        .unwrap();
    assert!(st.success());
    assert!(out.join("lipschitz_check.csv").exists());

    let st = didm_bin()
        .arg("knn")
        .arg("--tudataset")
        .arg(dir.path())
        .args(["--name", "TOY", "--degrees", "--depth", "1", "--splits", "3", "--out"])
        .arg(&out)
        .status()
        .unwrap();
    assert!(st.success());
    assert!(out.join("knn.csv").exists());

    let bad = didm_bin()
        .args(["knn", "--tudataset", "/nonexistent", "--name", "TOY"])
        .output()
        .unwrap();
    assert!(!bad.status.success());
    assert!(String::from_utf8_lossy(&bad.stderr).contains("error"));
}
