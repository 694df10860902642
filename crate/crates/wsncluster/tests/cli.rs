use std::fs;
use std::process::{Command, Output};

fn wsncluster(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wsncluster"))
        .args(args)
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn radius_probe() {
    let o = wsncluster(&[
        "radius",
        "--distance",
        "1",
        "--energy",
        "1",
        "--r-max",
        "25",
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let r: f64 = stdout(&o).trim().parse().unwrap();
    assert!((r - 22.68).abs() < 0.005, "{r}");

    let o = wsncluster(&[
        "radius",
        "--distance",
        "0",
        "--energy",
        "0",
        "--r-max",
        "25",
    ]);
    let r: f64 = stdout(&o).trim().parse().unwrap();
    assert!((r - 2.32).abs() < 0.005, "{r}");

    // Out-of-range inputs are clamped.
    let o = wsncluster(&[
        "radius",
        "--distance",
        "-0.3",
        "--energy",
        "1.4",
        "--r-max",
        "10",
    ]);
    let clamped = wsncluster(&[
        "radius",
        "--distance",
        "0",
        "--energy",
        "1",
        "--r-max",
        "10",
    ]);
    assert_eq!(stdout(&o), stdout(&clamped));
}

#[test]
fn radius_probe_with_the_original_rules() {
    // Same answer where the tables agree...
    let args = [
        "radius",
        "--distance",
        "0.9",
        "--energy",
        "0.2",
        "--r-max",
        "25",
    ];
    let repaired = wsncluster(&args);
    let printed = wsncluster(&[&args[..], &["--rules", "printed"]].concat());
    assert_eq!(stdout(&repaired), stdout(&printed));
    // ...and no rule fires close to the base station on a full battery.
    let o = wsncluster(&[
        "radius",
        "--distance",
        "0",
        "--energy",
        "1",
        "--r-max",
        "25",
        "--rules",
        "printed",
    ]);
    assert!(!o.status.success());
    assert!(stderr(&o).contains("no rule fired"), "{}", stderr(&o));
}

#[test]
fn bad_input_exits_nonzero() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.toml");
    fs::write(&cfg, "[scenario]\naggregation_ratio = 0\n").unwrap();
    let o = wsncluster(&[
        "run",
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert!(!o.status.success());
    let err = stderr(&o);
    assert!(
        err.contains("scenario.aggregation_ratio") && err.contains("bad.toml:2"),
        "{err}"
    );

    let o = wsncluster(&[
        "run",
        "--config",
        "scenario1",
        "--trials",
        "0",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert!(!o.status.success());
    assert!(stderr(&o).contains("scenario.trials"));

    let o = wsncluster(&["run", "--protocol", "sep"]);
    assert!(!o.status.success());
    let o = wsncluster(&[
        "radius",
        "--distance",
        "0.5",
        "--energy",
        "0.5",
        "--r-max",
        "0",
    ]);
    assert!(!o.status.success());
}

#[test]
fn run_writes_the_result_set() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("res");
    let o = wsncluster(&[
        "run",
        "--config",
        "scenario1",
        "--out",
        out.to_str().unwrap(),
        "--trials",
        "2",
        "--seed",
        "9",
        "--protocol",
        "fca",
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let mut names: Vec<String> = fs::read_dir(&out)
        .unwrap()
        .map(|e| e.unwrap().file_name().to_string_lossy().into_owned())
        .collect();
    names.sort();
    assert_eq!(
        names,
        ["config.toml", "series_fca.csv", "summary.csv", "trials.csv"]
    );
    let trials = fs::read_to_string(out.join("trials.csv")).unwrap();
    let seeds: Vec<&str> = trials
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(2).unwrap())
        .collect();
    assert_eq!(seeds, ["9", "10"]);
    let config = fs::read_to_string(out.join("config.toml")).unwrap();
    assert!(
        config.contains("trials = 2") && config.contains("base_seed = 9"),
        "{config}"
    );
    assert!(stdout(&o).contains("fca"));
}
