use std::process::{Command, Output};

use heegner_lab::checks::VerifyReport;
use heegner_lab::disc_form::FiniteQuadraticForm;
use heegner_lab::report::{
    AnalyzeReport, ClassifyReport, EnumerateReport, Envelope, HperpReport, LatticeReport,
    NormalityReport,
};
use serde::de::DeserializeOwned;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_heegner-lab"))
        .args(args)
        .env_remove("HEEGNER_LAB_BUDGET")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

/// Parses the output into `T`, re-serializes it, and checks the bytes match.
fn round_trip<T>(args: &[&str]) -> Envelope<T>
where
    T: serde::Serialize + DeserializeOwned + PartialEq + std::fmt::Debug,
{
    let o = run(args);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{args:?}: {}",
        String::from_utf8_lossy(&o.stderr)
    );
    let text = stdout(&o);
    let env: Envelope<T> = serde_json::from_str(&text).unwrap();
    assert_eq!(env.schema, "heegner-lab/1");
    assert_eq!(format!("{}\n", env.to_json()), text);
    env
}

#[test]
fn analyze_d1_golden() {
    let env: Envelope<AnalyzeReport> = round_trip(&[
        "analyze", "--m", "2", "--d", "1", "--gamma", "1", "--format", "json",
    ]);
    let r = env.body;
    let divs = r.divisors.unwrap();
    assert_eq!(divs.len(), 1);
    let v = serde_json::to_value(&divs[0]).unwrap();
    assert_eq!(
        v,
        serde_json::json!({
            "cls": {"beta_sq": -4, "div": 2, "beta_star": [1, 1], "label": "nontrivial", "witness": [0, 0, 1, 1]},
            "disc_Kperp": 4,
            "image_status": "meets_image",
            "excluded_rule": null
        })
    );
    assert_eq!(r.galois_group.order, Some(2));
}

#[test]
fn enumerate_d5_golden() {
    let env: Envelope<EnumerateReport> =
        round_trip(&["enumerate", "--m", "2", "--d", "5", "--json"]);
    let classes = serde_json::to_value(&env.body.classes).unwrap();
    assert_eq!(
        classes,
        serde_json::json!([
            {"beta_sq": -4, "div": 2, "beta_star": [5, 1], "label": "nontrivial", "witness": [2, 2, 1, 1]}
        ])
    );
    assert!(env.body.unwitnessed.is_empty());
    assert!(env.body.metadata.distinct_divisor_assumption);
}

#[test]
fn every_verb_round_trips() {
    let _: Envelope<LatticeReport> = round_trip(&[
        "lattice",
        "--desc",
        r#"{"blocks": ["U","U","E8(-1)","Z(-4)"]}"#,
        "--format",
        "json",
    ]);
    let _: Envelope<FiniteQuadraticForm> = round_trip(&[
        "disc-form",
        "--lattice",
        "U ⊕ Z(-6) ⊕ Z(-4)",
        "--format",
        "json",
    ]);
    let h: Envelope<HperpReport> = round_trip(&[
        "disc-form",
        "--t",
        "9",
        "--d",
        "15",
        "--gamma",
        "2",
        "--format",
        "json",
    ]);
    assert_eq!(h.body.q_gen, vec!["-2/15", "-2/9"]);
    assert_eq!(h.body.block, [[-12, 9], [9, -18]]);
    let n: Envelope<NormalityReport> = round_trip(&[
        "normality",
        "--t",
        "9",
        "--d",
        "15",
        "--gamma",
        "2",
        "--format",
        "json",
    ]);
    assert_eq!(
        n.body.verdict.witness.unwrap().g.matrix,
        vec![vec![1, 10], vec![6, 2]]
    );
    let c: Envelope<ClassifyReport> = round_trip(&[
        "classify", "--t", "1", "--d", "1", "--beta", "0,0,1,0", "--format", "json",
    ]);
    assert_eq!(c.body.class.galois_label.as_str(), "id");
    let v: Envelope<VerifyReport> = round_trip(&["verify-paper", "--format", "json"]);
    assert!(v.body.pass);
}

#[test]
fn table_output() {
    let o = run(&["normality", "--t", "9", "--d", "15", "--gamma", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("not_normal"));
    assert!(text.contains("(1 10 / 6 2)"));
    assert!(text.contains("(1 5 / 3 2)"));
    let o = run(&["classify", "--t", "1", "--d", "1", "--beta", "0,0,1,0"]);
    assert!(stdout(&o).contains("label       id"));
    let o = run(&["verify-paper"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(
        stdout(&o)
            .lines()
            .filter(|l| l.starts_with("[PASS]"))
            .count()
            >= 8
    );
}

#[test]
fn exit_codes_and_tags() {
    let o = run(&["normality", "--t", "1", "--d", "1", "--gamma", "2"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("[unrealizable_polarization]"));

    let o = run(&["normality", "--t", "2", "--d", "2", "--gamma", "2"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("[omega_ne_1_unsupported]"));

    let o = run(&[
        "--budget",
        "10",
        "normality",
        "--t",
        "4",
        "--d",
        "6",
        "--gamma",
        "1",
    ]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("[budget_exceeded]"));

    let o = run(&["classify", "--t", "1", "--d", "2", "--beta", "0,0,1,2"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("[not_a_reflection]"));

    let o = run(&["enumerate", "--m", "2", "--d", "1", "--frobnicate"]);
    assert_eq!(o.status.code(), Some(2));

    let o = run(&[
        "analyze", "--m", "2", "--d", "600", "--gamma", "1", "--budget", "100",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("not enumerated"));
}

#[test]
fn budget_from_environment_and_config() {
    let o = Command::new(env!("CARGO_BIN_EXE_heegner-lab"))
        .args(["normality", "--t", "4", "--d", "6", "--gamma", "1"])
        .env("HEEGNER_LAB_BUDGET", "10")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(3));

    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    std::fs::write(&cfg, r#"{"budget": 10}"#).unwrap();
    let cfg = cfg.to_str().unwrap();
    let o = run(&[
        "--config",
        cfg,
        "normality",
        "--t",
        "4",
        "--d",
        "6",
        "--gamma",
        "1",
    ]);
    assert_eq!(o.status.code(), Some(3));
    let o = run(&[
        "--config",
        cfg,
        "--budget",
        "1000",
        "normality",
        "--t",
        "4",
        "--d",
        "6",
        "--gamma",
        "1",
    ]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn output_is_stable_across_thread_counts() {
    let args = [
        "analyze", "--m", "3", "--d", "3", "--gamma", "1", "--format", "json",
    ];
    let base = run(&args);
    assert_eq!(
        base.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&base.stderr)
    );
    for threads in ["1", "2", "5"] {
        let mut a = args.to_vec();
        a.extend(["--threads", threads]);
        assert_eq!(run(&a).stdout, base.stdout);
    }
}
