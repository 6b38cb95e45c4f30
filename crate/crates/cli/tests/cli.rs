use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use gsic_core::{HermitianOperator, OperatorSetFile, SetKind};
use serde_json::Value;
use tempfile::TempDir;

fn gsic(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gsic"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_str(stdout(out).trim()).unwrap()
}

fn path(dir: &TempDir, name: &str) -> PathBuf {
    dir.path().join(name)
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn load(p: &Path) -> OperatorSetFile {
    OperatorSetFile::from_json(&std::fs::read_to_string(p).unwrap()).unwrap()
}

fn generate(dir: &TempDir, construction: &str, d: usize) -> PathBuf {
    let p = path(dir, &format!("{construction}_{d}.json"));
    let out = gsic(&[
        "generate",
        "--construction",
        construction,
        "--dim",
        &d.to_string(),
        "--out",
        s(&p),
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    p
}

#[test]
fn generate_c2_d2_matches_display() {
    let dir = TempDir::new().unwrap();
    let p = path(&dir, "c2.json");
    let out = gsic(&[
        "generate",
        "--construction",
        "c2",
        "--dim",
        "2",
        "--out",
        s(&p),
    ]);
    assert_eq!(code(&out), 0);
    let record = json(&out);
    assert_eq!(record["is_sic_capable"], Value::Bool(true));

    let file = load(&p);
    assert_eq!(file.kind, SetKind::Cob);
    assert_eq!(file.metadata["construction"], "c2");
    let ops = file.hermitian_operators().unwrap();
    let (s2, s3, s6) = (2f64.sqrt(), 3f64.sqrt(), 6f64.sqrt());
    let a2 = ops[1].matrix();
    assert!((a2[(0, 1)].re - s3 / 4.0).abs() < 1e-15);
    let a1 = ops[0].matrix();
    assert!((a1[(0, 0)].re - (0.25 - 1.0 / (2.0 * s2))).abs() < 1e-15);
    assert!((a1[(0, 1)].re + 1.0 / (4.0 * s3)).abs() < 1e-15);
    assert!((a1[(0, 1)].im - 1.0 / (2.0 * s6)).abs() < 1e-15);
    let a3 = ops[2].matrix();
    assert!((a3[(0, 1)].im + 1.0 / s6).abs() < 1e-15);
}

#[test]
fn generate_preconditions() {
    assert_eq!(
        code(&gsic(&["generate", "--construction", "c3", "--dim", "4"])),
        2
    );
    assert_eq!(
        code(&gsic(&[
            "generate",
            "--construction",
            "covariant",
            "--dim",
            "4"
        ])),
        2
    );
    assert_eq!(
        code(&gsic(&["generate", "--construction", "c2", "--dim", "1"])),
        2
    );
    assert_eq!(
        code(&gsic(&["generate", "--construction", "c9", "--dim", "2"])),
        2
    );
    let dir = TempDir::new().unwrap();
    let missing = path(&dir, "no/such/dir/out.json");
    assert_eq!(
        code(&gsic(&[
            "generate",
            "--construction",
            "c2",
            "--dim",
            "2",
            "--out",
            s(&missing)
        ])),
        3
    );
}

#[test]
fn generate_c1_is_deterministic() {
    let dir = TempDir::new().unwrap();
    let a = path(&dir, "a.json");
    let b = path(&dir, "b.json");
    for p in [&a, &b] {
        let out = gsic(&[
            "generate",
            "--construction",
            "c1",
            "--dim",
            "3",
            "--seed",
            "7",
            "--out",
            s(p),
        ]);
        assert_eq!(code(&out), 0);
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    let c = path(&dir, "c.json");
    gsic(&[
        "generate",
        "--construction",
        "c1",
        "--dim",
        "3",
        "--seed",
        "8",
        "--out",
        s(&c),
    ]);
    assert_ne!(std::fs::read(&a).unwrap(), std::fs::read(&c).unwrap());
}

#[test]
fn canonical_gsic_is_the_sic() {
    let dir = TempDir::new().unwrap();
    let cob = generate(&dir, "c2", 2);
    let g = path(&dir, "g.json");
    assert_eq!(
        code(&gsic(&[
            "gsic",
            "--in",
            s(&cob),
            "--lambda",
            "canonical",
            "--out",
            s(&g)
        ])),
        0
    );
    let file = load(&g);
    assert_eq!(file.kind, SetKind::Gsic);
    assert!((file.lambda.unwrap() - 1.0 / 3f64.sqrt()).abs() < 1e-15);
    let ops = file.hermitian_operators().unwrap();
    let g1 =
        HermitianOperator::from_row_slice(2, &[0.25.into(), 0.25.into(), 0.25.into(), 0.25.into()])
            .unwrap();
    assert!(ops[1].max_abs_diff(&g1) < 1e-15);
    let s6 = 6f64.sqrt();
    assert!((ops[0].get(0, 0).re - (3.0 - s6) / 12.0).abs() < 1e-15);
}

#[test]
fn gsic_lambda_errors() {
    let dir = TempDir::new().unwrap();
    let cob = generate(&dir, "c2", 2);
    let out = gsic(&["gsic", "--in", s(&cob), "--lambda", "0"]);
    assert_eq!(code(&out), 2);
    let out = gsic(&["gsic", "--in", s(&cob), "--lambda", "0.6"]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("0.57735"));
    assert_eq!(
        code(&gsic(&["gsic", "--in", s(&cob), "--lambda", "half"])),
        2
    );
}

#[test]
fn gsic_round_trip_and_analysis() {
    let dir = TempDir::new().unwrap();
    let cob_path = generate(&dir, "c2", 3);
    let g = path(&dir, "g.json");
    let back = path(&dir, "back.json");
    assert_eq!(
        code(&gsic(&[
            "gsic",
            "--in",
            s(&cob_path),
            "--lambda",
            "0.2",
            "--out",
            s(&g)
        ])),
        0
    );
    assert_eq!(
        code(&gsic(&["cob-from-gsic", "--in", s(&g), "--out", s(&back)])),
        0
    );
    let a = load(&cob_path).hermitian_operators().unwrap();
    let b = load(&back).hermitian_operators().unwrap();
    let dev = a
        .iter()
        .zip(&b)
        .map(|(x, y)| x.max_abs_diff(y))
        .fold(0.0, f64::max);
    assert!(dev < 1e-10, "{dev}");
    let lambda = load(&back).metadata["recovered_lambda"].as_f64().unwrap();
    assert!((lambda - 0.2).abs() < 1e-10);

    let record = json(&gsic(&["analyze", "--in", s(&g)]));
    assert!((record["lambda"].as_f64().unwrap() - 0.2).abs() < 1e-10);
    let (ap, bp) = (
        record["a_prime"].as_f64().unwrap(),
        record["b_prime"].as_f64().unwrap(),
    );
    assert!((ap + 8.0 * bp - 1.0 / 3.0).abs() < 1e-10);
}

#[test]
fn analyze_cob_files() {
    let dir = TempDir::new().unwrap();
    let r2 = json(&gsic(&["analyze", "--in", s(&generate(&dir, "c2", 2))]));
    assert!((r2["lambda_star"].as_f64().unwrap() - 0.5773503).abs() < 1e-6);
    assert_eq!(r2["is_sic_capable"], Value::Bool(true));
    let r3 = json(&gsic(&["analyze", "--in", s(&generate(&dir, "c2", 3))]));
    assert!((r3["tau"].as_f64().unwrap() - 0.291347).abs() < 1e-5);
    assert_eq!(r3["is_sic_capable"], Value::Bool(false));
    assert_eq!(r3["trace_power_residuals"].as_array().unwrap().len(), 1);
}

#[test]
fn analyze_parse_errors() {
    let dir = TempDir::new().unwrap();
    let bad = path(&dir, "bad.json");
    std::fs::write(&bad, "{\n  \"schema_version\": \"1\",\n  \"kind\": cob\n}").unwrap();
    let out = gsic(&["analyze", "--in", s(&bad)]);
    assert_eq!(code(&out), 4);
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 3"));
    assert_eq!(
        code(&gsic(&["analyze", "--in", s(&path(&dir, "missing.json"))])),
        3
    );
}

#[test]
fn tomo_reports() {
    let dir = TempDir::new().unwrap();
    let cob = generate(&dir, "c2", 2);
    let g = path(&dir, "g.json");
    gsic(&[
        "gsic",
        "--in",
        s(&cob),
        "--lambda",
        "canonical",
        "--out",
        s(&g),
    ]);

    let args = [
        "tomo",
        "--in",
        s(&g),
        "--state",
        "pure-random",
        "--copies",
        "1000",
        "--trials",
        "1000",
        "--seed",
        "5",
    ];
    let out = gsic(&args);
    assert_eq!(code(&out), 0);
    let r = json(&out);
    let emp = r["empirical_mse"].as_f64().unwrap();
    let se = r["standard_error"].as_f64().unwrap();
    assert!((emp - 4.0).abs() < (3.0 * se).max(0.2), "{emp} +- {se}");
    assert!(r["closed_form_max"].as_f64().unwrap() >= r["zhu_bound"].as_f64().unwrap() - 1e-9);
    // same seed, same bytes
    assert_eq!(stdout(&gsic(&args)), stdout(&out));

    let mixed = json(&gsic(&[
        "tomo",
        "--in",
        s(&g),
        "--state",
        "maximally-mixed",
        "--trials",
        "10",
    ]));
    assert!((mixed["closed_form_max"].as_f64().unwrap() - 4.5).abs() < 1e-9);
    assert!((mixed["scaled_mse"].as_f64().unwrap() - 4.5).abs() < 1e-9);
}

#[test]
fn tomo_rejects_non_ic() {
    let dir = TempDir::new().unwrap();
    let p = path(&dir, "identity.json");
    let file =
        OperatorSetFile::from_operators(SetKind::Povm, &[HermitianOperator::identity(2)]).unwrap();
    std::fs::write(&p, file.to_json().unwrap()).unwrap();
    assert_eq!(code(&gsic(&["tomo", "--in", s(&p), "--trials", "10"])), 5);
    // the state file option needs a path
    assert_eq!(code(&gsic(&["tomo", "--in", s(&p), "--state", "file"])), 2);
}

#[test]
fn figure1_rows() {
    let out = gsic(&["figure1", "--d-min", "2", "--d-max", "6"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("d,lambda_star_c2,optimal"));
    let rows: Vec<Vec<f64>> = lines
        .map(|l| l.split(',').map(|x| x.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 5);
    assert!((rows[0][1] - rows[0][2]).abs() < 1e-9);
    assert!((rows[1][1] - 0.276081).abs() < 1e-6 && rows[1][2] == 0.5);
    for r in &rows[1..] {
        assert!(r[1] < r[2]);
    }
    assert_eq!(code(&gsic(&["figure1", "--d-min", "3", "--d-max", "2"])), 2);
    assert_eq!(
        code(&gsic(&["figure1", "--d-min", "2", "--d-max", "13"])),
        2
    );
    assert_eq!(code(&gsic(&["figure1", "--d-min", "1", "--d-max", "3"])), 2);
}

#[test]
fn validate_files() {
    let dir = TempDir::new().unwrap();
    let cob = generate(&dir, "c3", 3);
    let out = gsic(&["validate", "--in", s(&cob)]);
    assert_eq!(code(&out), 0);
    assert_eq!(json(&out)["valid"], Value::Bool(true));

    // a COB relabeled as a GSIC POVM is not positive
    let mut file = load(&cob);
    file.kind = SetKind::Gsic;
    let p = path(&dir, "fake.json");
    std::fs::write(&p, file.to_json().unwrap()).unwrap();
    let out = gsic(&["validate", "--in", s(&p)]);
    assert_eq!(code(&out), 5);
    assert_eq!(json(&out)["valid"], Value::Bool(false));

    // wrong matrix count for the kind is a malformed file
    let mut text: Value = serde_json::from_str(&std::fs::read_to_string(&cob).unwrap()).unwrap();
    text["operators"].as_array_mut().unwrap().pop();
    std::fs::write(&p, text.to_string()).unwrap();
    assert_eq!(code(&gsic(&["validate", "--in", s(&p)])), 4);
}
