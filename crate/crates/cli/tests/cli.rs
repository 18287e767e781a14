use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cyclo2rank"))
        .args(args)
        .env_remove("CYCLO2RANK_VERIFY_BUDGET")
        .output()
        .expect("run binary")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).expect("valid JSON")
}

#[test]
fn report_covered() {
    let o = run(&["report", "--d", "15", "--m", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["parity"], "even");
    assert_eq!(v["rank2"], 1);
    assert_eq!(v["cyclic_nontrivial"], true);
    assert_eq!(v["real_rank2"], 1);
    assert!(v["oracle_checks"]
        .as_array()
        .unwrap()
        .iter()
        .all(|c| c["passed"] == true));

    let v = json(&run(&["report", "--d", "5", "--m", "4"]));
    assert_eq!(v["parity"], "odd");
    assert_eq!(v["rank2"], 0);
}

#[test]
fn report_not_covered_exits_2_with_output() {
    let o = run(&["report", "--d", "21", "--m", "3"]);
    assert_eq!(o.status.code(), Some(2));
    let v = json(&o);
    assert_eq!(v["rank2"], "not_covered");
    assert_eq!(v["parity"], "even");
}

#[test]
fn report_invalid_input_exits_1() {
    for args in [
        &["report", "--d", "9"][..],
        &["report", "--d", "12"],
        &["report", "--d", "abc"],
        &["report", "--d", "1"],
        &["report", "--d", "15", "--m", "2"],
        &["report"],
        &["bogus"],
    ] {
        let o = run(args);
        assert_eq!(o.status.code(), Some(1), "{args:?}");
        assert!(o.stdout.is_empty(), "{args:?}");
    }
    let err = String::from_utf8(run(&["report", "--d", "9"]).stderr).unwrap();
    assert!(err.contains("divisible by 3^2"), "{err}");
}

#[test]
fn sweep_csv() {
    let o = run(&["sweep", "--max", "100", "--m", "3", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(
        lines.next(),
        Some("d,r,residues8,parity,rank2,e,t,real_rank2,cyclic")
    );
    assert!(text.contains("\n15,2,\"3,5\",even,1,2,4,1,true\n"));
    assert!(!text.contains("\n21,"));

    let text = stdout(&run(&["sweep", "--max", "100", "--filter", "same-coset"]));
    assert!(text.contains("\n33,2,\"3,3\",even,2,1,4,0,false\n"));
    assert!(!text.contains("\n15,"));
    assert!(!text.contains("\n3,"));
}

#[test]
fn sweep_filters_and_json() {
    let text = stdout(&run(&[
        "sweep", "--max", "200", "--filter", "mixed", "--format", "json",
    ]));
    let rows: Vec<serde_json::Value> = text
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    assert!(!rows.is_empty());
    assert!(rows.iter().all(|r| r["e"] == 2));
    assert_eq!(rows[0]["d"], 15);
    assert_eq!(rows[0]["residues8"], serde_json::json!([3, 5]));

    let text = stdout(&run(&["sweep", "--max", "50", "--filter", "prime"]));
    let ds: Vec<&str> = text
        .lines()
        .skip(1)
        .map(|l| l.split(',').next().unwrap())
        .collect();
    assert_eq!(ds, ["3", "5", "11", "13", "19", "29", "37", "43"]);
}

#[test]
fn sweep_empty_range_is_header_only() {
    let o = run(&["sweep", "--min", "50", "--max", "10"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(
        stdout(&o),
        "d,r,residues8,parity,rank2,e,t,real_rank2,cyclic\n"
    );
    assert_eq!(
        stdout(&run(&[
            "sweep", "--min", "50", "--max", "10", "--format", "json"
        ])),
        ""
    );
    assert_eq!(run(&["sweep", "--max", "1000000"]).status.code(), Some(1));
}

#[test]
fn output_is_deterministic() {
    for args in [
        &["sweep", "--max", "3000", "--format", "json"][..],
        &["sweep", "--max", "3000"],
        &["report", "--d", "1155", "--m", "6"],
    ] {
        assert_eq!(run(args).stdout, run(args).stdout, "{args:?}");
    }
}

#[test]
fn tables() {
    let o = run(&["tables", "splitting16"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(
        stdout(&o),
        "k,f,g\n1,1,8\n3,4,2\n5,4,2\n7,2,4\n9,2,4\n11,4,2\n13,4,2\n15,2,4\n"
    );
    let o = run(&["tables", "symbols"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("unit,p=3 mod 8,p=5 mod 8\nzeta,-1,-1\n"));
    assert_eq!(run(&["tables", "nosuch"]).status.code(), Some(1));
}

#[test]
fn verify_suites() {
    let o = run(&["verify", "splitting"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("suite splitting: budget 1000"));
    let o = run(&["verify", "quadratic"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let o = run(&["verify", "kummer", "--budget", "60"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert_eq!(run(&["verify", "nosuch"]).status.code(), Some(1));
}

#[test]
fn verify_budget_ceiling_from_env() {
    let o = Command::new(env!("CARGO_BIN_EXE_cyclo2rank"))
        .args(["verify", "ranks", "--budget", "100000"])
        .env("CYCLO2RANK_VERIFY_BUDGET", "500")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("suite ranks: budget 500"));
}
