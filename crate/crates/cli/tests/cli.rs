// SPDX-License-Identifier: Apache-2.0
use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn mvbdag(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mvbdag"))
        .args(args)
        .env_remove("MVBDAG_OUT")
        .output()
        .expect("binary runs")
}

fn ok(args: &[&str]) -> Output {
    let out = mvbdag(args);
    assert!(out.status.success(), "{args:?} failed: {}", String::from_utf8_lossy(&out.stderr));
    out
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn data_rows(text: &str) -> Vec<&str> {
    text.lines().filter(|l| !l.starts_with('#') && !l.is_empty()).collect()
}

fn files_under(dir: &Path) -> Vec<String> {
    let mut out: Vec<String> = fs::read_dir(dir).unwrap().map(|e| e.unwrap().file_name().into_string().unwrap()).collect();
    out.sort();
    out
}

#[test]
fn simulate_writes_one_replication_deterministically() {
    let tmp = tempfile::tempdir().unwrap();
    let (a, b) = (tmp.path().join("a"), tmp.path().join("b"));
    for dir in [&a, &b] {
        ok(&["simulate", "--p", "4", "--k", "1", "--family", "er", "--n", "200", "--seed", "3", "--out", s(dir)]);
    }
    let rep = a.join("ER_k1_p4").join("rep0");
    assert_eq!(files_under(&rep), ["data.csv", "graph.txt", "params.csv", "weights.csv"]);
    for name in ["data.csv", "graph.txt", "params.csv", "weights.csv"] {
        let other = b.join("ER_k1_p4").join("rep0").join(name);
        assert_eq!(fs::read(rep.join(name)).unwrap(), fs::read(other).unwrap(), "{name}");
    }
    assert_eq!(data_rows(&fs::read_to_string(rep.join("data.csv")).unwrap()).len(), 200);
    assert_eq!(fs::read(a.join("manifest.csv")).unwrap().len(), fs::read(b.join("manifest.csv")).unwrap().len());
}

#[test]
fn out_directory_can_come_from_the_environment() {
    let tmp = tempfile::tempdir().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_mvbdag"))
        .args(["simulate", "--p", "3", "--n", "10"])
        .env("MVBDAG_OUT", tmp.path())
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(tmp.path().join("ER_k1_p3/rep0/data.csv").exists());
}

#[test]
fn infeasible_density_fails_with_a_message() {
    let tmp = tempfile::tempdir().unwrap();
    let out = mvbdag(&["simulate", "--p", "4", "--k", "4", "--n", "10", "--out", s(tmp.path())]);
    assert!(!out.status.success());
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("infeasible density"), "{err}");
}

#[test]
fn malformed_data_reports_the_line() {
    let tmp = tempfile::tempdir().unwrap();
    let data = tmp.path().join("bad.csv");
    fs::write(&data, "0,1\n1,1\n1,2\n").unwrap();
    let out = mvbdag(&["learn", "--data", s(&data), "--out", s(&tmp.path().join("o"))]);
    assert!(!out.status.success());
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("line 3"), "{err}");
}

#[test]
fn independent_data_gives_an_empty_edge_list() {
    let tmp = tempfile::tempdir().unwrap();
    let data = tmp.path().join("indep.csv");
    // Every configuration of three variables, equally often.
    let mut text = String::new();
    for _ in 0..50 {
        for c in 0..8 {
            text += &format!("{},{},{}\n", c & 1, (c >> 1) & 1, (c >> 2) & 1);
        }
    }
    fs::write(&data, text).unwrap();
    let out = tmp.path().join("est");
    ok(&["learn", "--method", "solve-first-order", "--data", s(&data), "--out", s(&out)]);
    let graph = fs::read_to_string(out.join("graph.txt")).unwrap();
    assert!(data_rows(&graph).is_empty(), "{graph}");
    let trace = fs::read_to_string(out.join("trace.csv")).unwrap();
    assert!(trace.starts_with("# mvbdag trace v1"));
}

#[test]
fn enumerate_on_a_three_variable_table_lists_six_orders() {
    let tmp = tempfile::tempdir().unwrap();
    let table = tmp.path().join("table.txt");
    let probs = [0.05, 0.1, 0.15, 0.2, 0.12, 0.08, 0.18, 0.12];
    let text: String = std::iter::once("# p=3\n".to_string()).chain(probs.iter().map(|v| format!("{v}\n"))).collect();
    fs::write(&table, text).unwrap();
    for cmd in [&["learn", "--method", "enumerate"][..], &["enumerate"][..]] {
        let out = tmp.path().join(cmd.len().to_string());
        let mut args = cmd.to_vec();
        args.extend(["--table", s(&table), "--out", s(&out)]);
        ok(&args);
        let manifest = fs::read_to_string(out.join("class/manifest.csv")).unwrap();
        assert!(manifest.starts_with("# mvbdag enumerate manifest v1"));
        assert_eq!(data_rows(&manifest).len(), 1 + 6, "{manifest}");
        assert!(out.join("graph.txt").exists());
    }
}

#[test]
fn evaluate_compares_cpdags() {
    let tmp = tempfile::tempdir().unwrap();
    let write = |name: &str, text: &str| {
        let path = tmp.path().join(name);
        fs::write(&path, text).unwrap();
        path
    };
    let chain = write("chain.txt", "# p=3\n1 2\n2 3\n");
    let collider = write("collider.txt", "# p=3\n1 2\n3 2\n");
    let empty = write("empty.txt", "# p=2\n");
    let one = write("one.txt", "# p=2\n1 2\n");
    let four = write("four.txt", "# p=4\n1 2\n");
    let shd = |est: &Path, truth: &Path| {
        let out = ok(&["evaluate", "--estimate", s(est), "--truth", s(truth)]);
        let text = String::from_utf8(out.stdout).unwrap();
        assert!(text.starts_with("# mvbdag metrics v1\nshd,estimated_edges,true_edges\n"));
        data_rows(&text)[1].to_string()
    };
    assert_eq!(shd(&chain, &chain), "0,2,2");
    assert_eq!(shd(&chain, &collider), "2,2,2");
    assert_eq!(shd(&empty, &one), "1,0,1");
    let out = mvbdag(&["evaluate", "--estimate", s(&four), "--truth", s(&one)]);
    assert!(!out.status.success());
}

#[test]
fn chain_data_learns_the_chain_cpdag() {
    let tmp = tempfile::tempdir().unwrap();
    let data = tmp.path().join("chain.csv");
    // X1 -> X2 -> X3, each copying its parent with probability 0.9.
    let mut text = String::new();
    for x1 in 0..2 {
        for x2 in 0..2 {
            for x3 in 0..2 {
                let w1 = 5;
                let w2 = if x2 == x1 { 9 } else { 1 };
                let w3 = if x3 == x2 { 9 } else { 1 };
                for _ in 0..w1 * w2 * w3 * 4 {
                    text += &format!("{x1},{x2},{x3}\n");
                }
            }
        }
    }
    fs::write(&data, text).unwrap();
    let truth = tmp.path().join("truth.txt");
    fs::write(&truth, "# p=3\n1 2\n2 3\n").unwrap();
    let out = tmp.path().join("est");
    ok(&["learn", "--method", "binotears", "--data", s(&data), "--out", s(&out)]);
    let m = ok(&["evaluate", "--estimate", s(&out.join("graph.txt")), "--truth", s(&truth)]);
    assert_eq!(data_rows(&String::from_utf8(m.stdout).unwrap())[1], "0,2,2");
}

fn bench(out: &Path, seeds: &str) -> Output {
    mvbdag(&[
        "bench", "--p", "4", "--k", "1", "--family", "sf", "--n", "500", "--method", "solve-first-order",
        "--rep-seeds", seeds, "--jobs", "2", "--out", s(out),
    ])
}

#[test]
fn bench_writes_detail_and_summary_rows() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("b");
    let run = bench(&out, "5,9");
    assert!(run.status.success(), "{}", String::from_utf8_lossy(&run.stderr));
    let detail = fs::read_to_string(out.join("detail.csv")).unwrap();
    assert!(detail.starts_with("# mvbdag bench detail v1"));
    assert_eq!(data_rows(&detail).len(), 1 + 2, "{detail}");
    let summary = fs::read_to_string(out.join("summary_SF_k1.csv")).unwrap();
    assert!(summary.starts_with("# mvbdag bench summary v1"));
    assert_eq!(data_rows(&summary).len(), 1 + 1, "{summary}");
    assert!(out.join("SF_k1_p4/rep0/solve-first-order_graph.txt").exists());

    let swapped = tmp.path().join("c");
    assert!(bench(&swapped, "9,5").status.success());
    assert_eq!(summary, fs::read_to_string(swapped.join("summary_SF_k1.csv")).unwrap());
}

#[test]
fn bench_failures_are_recorded_and_set_the_exit_code() {
    let tmp = tempfile::tempdir().unwrap();
    let out = mvbdag(&[
        "bench", "--p", "3,4", "--k", "4", "--n", "50", "--method", "solve-first-order", "--out", s(tmp.path()),
    ]);
    assert!(!out.status.success());
    let detail = fs::read_to_string(tmp.path().join("detail.csv")).unwrap();
    let rows = data_rows(&detail);
    assert_eq!(rows.len(), 1 + 2);
    assert!(rows[1..].iter().all(|r| r.contains(",failed,")), "{detail}");
    assert!(fs::read_to_string(tmp.path().join("summary_ER_k1.csv")).is_err());
    let summary = fs::read_to_string(tmp.path().join("summary_ER_k4.csv")).unwrap();
    assert!(data_rows(&summary)[1].contains(",0,1,,"), "{summary}");
}
