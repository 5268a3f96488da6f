use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

use adklab::domain_model::{builtin, example_r, DomainModel, Member};
use adklab::ideal_fn::IdealFunction;

fn adklab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_adklab"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

/// `2·Y0` on example-2.
fn y0_squared(m: &DomainModel) -> IdealFunction {
    let y0 = m
        .member_function(
            &Member {
                generator: 1,
                anchor: None,
                t_range: None,
            },
            0,
        )
        .unwrap();
    y0.scale(2)
}

#[test]
fn builtin_list_and_export() {
    let out = adklab(&["builtin", "list"]);
    assert!(out.status.success());
    let names = json(&out);
    assert!(names
        .as_array()
        .unwrap()
        .iter()
        .any(|n| n == "dedekind-finite-5"));

    let out = adklab(&["builtin", "export", "dedekind-finite-5"]);
    assert!(out.status.success());
    let m = DomainModel::from_json(std::str::from_utf8(&out.stdout).unwrap()).unwrap();
    assert_eq!(m.space.truncation(10).len(), 5);
    assert_eq!(m.to_json().as_bytes(), out.stdout.as_slice());

    assert_eq!(
        adklab(&["builtin", "export", "no-such-model"])
            .status
            .code(),
        Some(1)
    );
}

#[test]
fn export_load_export_is_identity() {
    let dir = tempfile::tempdir().unwrap();
    for name in [
        "example-2",
        "example-growing",
        "ladder-2",
        "dedekind-discrete",
    ] {
        let first = adklab(&["builtin", "export", name]).stdout;
        let path = write(dir.path(), "m.json", std::str::from_utf8(&first).unwrap());
        let reloaded = DomainModel::from_json(&std::fs::read_to_string(&path).unwrap()).unwrap();
        assert_eq!(reloaded.to_json().as_bytes(), first.as_slice(), "{name}");
        assert_eq!(reloaded.to_json(), builtin(name).unwrap().to_json());
    }
}

#[test]
fn analyze_example_2() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(dir.path(), "example-2.json", &example_r(2).to_json());
    let out = adklab(&["analyze", &path, "--quiet"]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stdout)
    );
    let env = json(&out);
    assert_eq!(env["command"], "analyze --max-n 16");
    assert_eq!(env["model"]["name"], "example-2");
    assert_eq!(env["scope"], "model-level result");
    let chain = &env["payload"]["chain"];
    assert_eq!(chain["sp_rank"], "2");
    assert_eq!(chain["emptiness"], "2");
    assert!(chain["contradiction"].is_null());
    assert_eq!(env["payload"]["noncritical_dense"], true);
    assert_eq!(env["payload"]["crit"]["stable_from"], 2);
}

#[test]
fn payload_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    for args in [
        vec!["analyze", "ladder-2"],
        vec!["verify", "example-3", "--truncation-depth", "12"],
    ] {
        let runs: Vec<Value> = (0..2)
            .map(|i| {
                let out_path = dir.path().join(format!("r{i}.json"));
                let mut a = args.clone();
                a.extend(["--quiet", "--json", out_path.to_str().unwrap()]);
                let out = adklab(&a);
                assert!(out.status.success());
                serde_json::from_str(&std::fs::read_to_string(out_path).unwrap()).unwrap()
            })
            .collect();
        assert_eq!(
            serde_json::to_string(&runs[0]["payload"]).unwrap(),
            serde_json::to_string(&runs[1]["payload"]).unwrap()
        );
        assert_eq!(runs[0]["model"], runs[1]["model"]);
    }
}

#[test]
fn factor_bounded_and_radical() {
    let dir = tempfile::tempdir().unwrap();
    let m = example_r(2);
    let model = write(dir.path(), "example-2.json", &m.to_json());
    let f = y0_squared(&m);
    let ideal = write(dir.path(), "y0sq.json", &serde_json::to_string(&f).unwrap());

    let out = adklab(&[
        "factor", &model, &ideal, "--mode", "bounded", "--n", "2", "--quiet",
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stdout)
    );
    let env = json(&out);
    let factors: Vec<IdealFunction> =
        serde_json::from_value(env["payload"]["factors"].clone()).unwrap();
    assert_eq!(factors.len(), 2);
    let sum = factors[0].add(&factors[1]).unwrap();
    assert!(sum.same_values(&f));

    // Y0 takes unbounded values on the isolated points, so it has no radical factorization.
    let out = adklab(&["factor", &model, &ideal, "--mode", "radical", "--quiet"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(json(&out)["error"], "analysis");

    let out = adklab(&[
        "factor", &model, &ideal, "--mode", "bounded", "--n", "1", "--quiet",
    ]);
    assert_eq!(out.status.code(), Some(2));
    let err = json(&out);
    assert_eq!(err["kind"], "critical_obstruction");
    assert!(err["message"].as_str().unwrap().contains('w'));
}

#[test]
fn validation_failures_exit_1() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(dir.path(), "bad.json", "{ not json");
    let out = adklab(&["analyze", &bad, "--quiet"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["kind"], "invalid_model");

    let mut raw: Value = serde_json::from_str(&example_r(2).to_json()).unwrap();
    raw["schema"] = Value::from(99);
    let wrong_schema = write(dir.path(), "schema.json", &raw.to_string());
    assert_eq!(
        adklab(&["verify", &wrong_schema, "--quiet"]).status.code(),
        Some(1)
    );

    let model = write(dir.path(), "m.json", &example_r(2).to_json());
    let other = builtin("ladder-2").unwrap();
    let foreign =
        IdealFunction::indicator(&adklab::ordinal_space::PointSet::full(&other.space)).unwrap();
    let ideal = write(
        dir.path(),
        "f.json",
        &serde_json::to_string(&foreign).unwrap(),
    );
    let out = adklab(&[
        "factor", &model, &ideal, "--mode", "bounded", "--n", "2", "--quiet",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["kind"], "invalid_ideal");

    let own = IdealFunction::indicator(&adklab::ordinal_space::PointSet::full(&example_r(2).space))
        .unwrap();
    let ideal = write(dir.path(), "g.json", &serde_json::to_string(&own).unwrap());
    let out = adklab(&["factor", &model, &ideal, "--mode", "bounded", "--quiet"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["kind"], "usage");
}

#[test]
fn verify_builtin_passes() {
    let out = adklab(&["verify", "example-growing", "--quiet"]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stdout)
    );
    let env = json(&out);
    let checks = env["payload"].as_array().unwrap();
    assert_eq!(checks.len(), 17);
    assert!(checks.iter().all(|c| c["status"] != "fail"));
    assert!(env["command"].as_str().unwrap().contains("--seed 0xad1"));
}

#[test]
fn seed_comes_from_the_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_adklab"))
        .args(["verify", "example-2", "--quiet", "--truncation-depth", "12"])
        .env("ADKLAB_SEED", "0x2a")
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(json(&out)["command"]
        .as_str()
        .unwrap()
        .contains("--seed 0x2a"));
}
