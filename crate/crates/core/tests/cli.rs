use std::path::Path;
use std::process::{Command, Output};

fn pricing(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pricing")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn without_wall_ns(path: &Path) -> Vec<String> {
    std::fs::read_to_string(path)
        .unwrap()
        .lines()
        .map(|l| l.rsplit_once(',').map_or(l, |(head, _)| head).to_string())
        .collect()
}

#[test]
fn validate_reports_and_sets_exit_status() {
    let o = pricing(&["validate", "--dist", "bump:0.5,0.01"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.lines().any(|l| l.starts_with("regular") && l.contains(" pass ")), "{text}");
    assert!(text.ends_with("verdict pass\n"));

    let o = pricing(&["validate", "--dist", "mhr-pair:D,0.001"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).lines().any(|l| l.starts_with("mhr ") && l.contains(" pass ")));

    let o = pricing(&["validate", "--dist", "uniform:1,0"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("at byte"));
}

#[test]
fn lowerbound_families() {
    let o = pricing(&["lowerbound", "general", "--eps", "0.01"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert_eq!(text.lines().filter(|l| l.starts_with("optimum ")).count(), 6);
    assert!(text.contains("optimum i=3 price=0.620000000000 revenue=0.260000000000"), "{text}");

    let o = pricing(&["lowerbound", "mhr", "--eps", "0.001"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let o = pricing(&["lowerbound", "regular-levy", "--eps", "0.01"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));

    assert_eq!(pricing(&["lowerbound", "mhr", "--eps", "0.5"]).status.code(), Some(2));
    assert_eq!(pricing(&["lowerbound", "cubic", "--eps", "0.01"]).status.code(), Some(2));
}

#[test]
fn bench_is_reproducible_and_config_file_is_overridden() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(
        &cfg,
        "estimator = median\ndist = uniform:0,1\neps_list = 0.2, 0.1, 0.05\ntrials = 50\nseed = 12\n",
    )
    .unwrap();
    let mut outputs = Vec::new();
    for name in ["a.csv", "b.csv"] {
        let out = dir.path().join(name);
        let o = pricing(&[
            "bench",
            "--config",
            cfg.to_str().unwrap(),
            "--trials",
            "4",
            "--out",
            out.to_str().unwrap(),
        ]);
        assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
        assert!(stdout(&o).contains("slope "));
        outputs.push(without_wall_ns(&out));
    }
    assert_eq!(outputs[0], outputs[1]);
    assert_eq!(outputs[0][0], "estimator,dist,eps,trial,seed,queries,loss,success");
    // 3 eps values x 4 trials, the flag beating the file's 50
    assert_eq!(outputs[0].len(), 13);
    assert!(dir.path().join("a.csv.meta.json").exists());
}

#[test]
fn bench_json_output_mirrors_csv() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("run.json");
    let o = pricing(&[
        "bench", "--estimator", "median", "--dist", "uniform:0,1", "--eps-list", "0.2,0.1", "--trials", "2",
        "--out", out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let lines: Vec<serde_json::Value> = std::fs::read_to_string(&out)
        .unwrap()
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    assert_eq!(lines.len(), 4);
    assert_eq!(lines[3]["trial"], 1);
    assert_eq!(lines[3]["eps"], 0.1);
}

#[test]
fn zero_budget_fails_acceptance() {
    let o = pricing(&[
        "bench", "--estimator", "monopoly-general", "--dist", "uniform:0,1", "--eps", "0.1", "--trials", "1",
        "--budget", "0",
    ]);
    assert_eq!(o.status.code(), Some(1));
    let text = stdout(&o);
    assert!(text.contains("0.1,1,0,0.0000,1,"), "{text}");
}

#[test]
fn config_errors_exit_with_two() {
    let bad = [
        vec!["bench", "--estimator", "median", "--dist", "uniform:0,1", "--eps-list", "0.01,0.02"],
        vec!["bench", "--estimator", "median", "--dist", "uniform:0,1", "--eps", "0.1", "--trials", "0"],
        vec!["bench", "--estimator", "guess", "--dist", "uniform:0,1", "--eps", "0.1"],
        vec!["bench", "--estimator", "monopoly-regular", "--dist", "grid-family:1,0.02", "--eps", "0.1"],
    ];
    for args in bad {
        assert_eq!(pricing(&args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn estimate_prints_one_record_and_transcript() {
    let dir = tempfile::tempdir().unwrap();
    let tr = dir.path().join("transcript.csv");
    let o = pricing(&[
        "estimate", "--estimator", "median", "--dist", "uniform:0,1", "--eps", "0.2", "--seed", "3",
        "--transcript", tr.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 2);
    let queries: usize = lines[1].split(',').nth(6).unwrap().parse().unwrap();
    let transcript = std::fs::read_to_string(&tr).unwrap();
    assert_eq!(transcript.lines().next(), Some("price,sold"));
    assert_eq!(transcript.lines().count(), queries + 1);
}

#[test]
fn flatness_sweep_reports_max_ratio() {
    let o = pricing(&["flatness", "--draws", "200", "--seed", "4"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("draws 200 max_excess_ratio "));
}
