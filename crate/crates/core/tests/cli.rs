//! End-to-end checks of the `lfasym` binary and its reports.

use std::process::{Command, Output};

use lfasym::harness::{preset_by_name, run_sweep, SweepConfig, SweepRow, CSV_HEADER};

fn lfasym(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lfasym"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn empty_grid_gives_header_only_csv() {
    let o = lfasym(&["sweep", "--preset", "gauss1d", "--k-count", "0"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), format!("{CSV_HEADER}\n"));
}

#[test]
fn fifty_rows_give_fifty_one_lines() {
    let o = lfasym(&["sweep", "--preset", "gauss1d", "--k-min", "2", "--k-max", "20", "--k-count", "50"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert_eq!(text.lines().count(), 51);
    assert_eq!(text.lines().next(), Some(CSV_HEADER));
}

#[test]
fn identical_command_lines_are_byte_identical() {
    let args = ["sweep", "--preset", "cubic-perturbed", "--s", "3", "--k-min", "3", "--k-max", "12", "--k-count", "6"];
    let a = lfasym(&args);
    let b = lfasym(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn json_report_round_trips_bit_exactly() {
    let o = lfasym(&["sweep", "--preset", "spd2d", "--k", "4,8", "--k-dir", "1,1", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let parsed: Vec<SweepRow> = serde_json::from_str(&stdout(&o)).unwrap();
    let direct = run_sweep(
        &preset_by_name("spd2d").unwrap(),
        &SweepConfig {
            k_grid: vec![4.0, 8.0],
            k_dir: Some(vec![1.0, 1.0]),
            ..SweepConfig::default()
        },
    )
    .unwrap();
    assert_eq!(parsed.len(), direct.len());
    for (p, d) in parsed.iter().zip(&direct) {
        for (x, y) in [
            (p.k, d.k),
            (p.p_asym.re, d.p_asym.re),
            (p.p_oracle.re, d.p_oracle.re),
            (p.p_oracle.im, d.p_oracle.im),
            (p.abs_err, d.abs_err),
            (p.rel_err, d.rel_err),
        ] {
            assert_eq!(x.to_bits(), y.to_bits());
        }
    }
}

#[test]
fn exit_codes() {
    assert_eq!(lfasym(&["sweep", "--preset", "no-such-preset"]).status.code(), Some(2));
    assert_eq!(lfasym(&["sweep"]).status.code(), Some(2));
    // a budget smaller than the initial panels cannot converge
    let o = lfasym(&["sweep", "--preset", "gauss1d", "--k", "8", "--tol", "1e-14", "--budget", "20"]);
    assert_eq!(o.status.code(), Some(3));
    assert_eq!(stdout(&o).lines().count(), 2);
    // asymptotic formula preconditions
    assert_eq!(lfasym(&["asym1d", "--preset", "spd2d"]).status.code(), Some(2));
    assert_eq!(lfasym(&["domain-ext", "--preset", "gauss1d"]).status.code(), Some(2));
}

#[test]
fn config_file_with_flag_override() {
    let dir = std::env::temp_dir().join(format!("lfasym-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let cfg = dir.join("cfg.json");
    std::fs::write(&cfg, r#"{"preset": "gauss1d", "k": [4.0, 8.0], "s": 3.0}"#).unwrap();
    let out = dir.join("out.csv");
    let o = lfasym(&[
        "sweep",
        "--config",
        cfg.to_str().unwrap(),
        "--s",
        "2",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let text = std::fs::read_to_string(&out).unwrap();
    let rows: Vec<&str> = text.lines().skip(1).collect();
    assert_eq!(rows.len(), 2);
    assert!(rows.iter().all(|r| r.split(',').nth(1) == Some("2.0000000000000000e0")));
    std::fs::write(&cfg, r#"{"preset": "gauss1d", "bogus": 1}"#).unwrap();
    assert_eq!(lfasym(&["sweep", "--config", cfg.to_str().unwrap()]).status.code(), Some(2));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn other_subcommands_run() {
    let o = lfasym(&["symbols", "--preset", "cubic-perturbed", "--lambda", "1000", "--k", "5", "--one-sided"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().count(), 4);

    let o = lfasym(&["decay-fit", "--preset", "cubic-perturbed", "--s", "3", "--k", "8,16,32,64,128", "--one-sided"]);
    assert_eq!(o.status.code(), Some(0));
    let slopes: Vec<f64> = stdout(&o)
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(1).unwrap().parse().unwrap())
        .collect();
    assert!((slopes[1] + 3.0).abs() < 0.15);

    let o = lfasym(&["asymnd", "--preset", "negative-gaussian-2d", "--k", "3"]);
    assert_eq!(o.status.code(), Some(0));

    let spec = r#"{"alpha":2,"beta":1,"a":[1.0,0.1],"f_crit":0,"domain":{"kind":"two_sided","b1":4,"b2":4}}"#;
    let a = lfasym(&["asym1d", "--spec", spec, "--k", "6", "--order", "1"]);
    let q = lfasym(&["oracle", "--spec", spec, "--k", "6"]);
    assert_eq!((a.status.code(), q.status.code()), (Some(0), Some(0)));

    let o = lfasym(&["domain-ext", "--preset", "negative-gaussian", "--k", "4,8", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["rows"].as_array().unwrap().len(), 2);

    let o = lfasym(&["sweep", "--list-presets"]);
    assert!(stdout(&o).lines().any(|l| l == "quartic1d"));
}
