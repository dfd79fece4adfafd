use std::path::{Path, PathBuf};

use qcentral::{StateFile, UnitarySpecFile};
use serde_json::Value;
use tempfile::TempDir;

struct Run {
    code: i32,
    out: String,
    err: String,
}

fn run(args: &[&str]) -> Run {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = qcentral::run(std::iter::once("qcentral").chain(args.iter().copied()), &mut out, &mut err);
    Run {
        code,
        out: String::from_utf8(out).unwrap(),
        err: String::from_utf8(err).unwrap(),
    }
}

fn json_lines(text: &str) -> Vec<Value> {
    text.lines().map(|l| serde_json::from_str(l).unwrap()).collect()
}

fn write(dir: &TempDir, name: &str, content: &str) -> String {
    let p = dir.path().join(name);
    std::fs::write(&p, content).unwrap();
    p.to_string_lossy().into_owned()
}

fn fixture(dir: &TempDir, name: &str, args: &[&str]) -> String {
    let p = dir.path().join(name).to_string_lossy().into_owned();
    let mut full = vec!["fixture"];
    full.extend_from_slice(args);
    full.extend_from_slice(&["--out", &p]);
    let r = run(&full);
    assert_eq!(r.code, 0, "{}", r.err);
    p
}

fn load(path: impl AsRef<Path>) -> qcentral_core::PauliState {
    StateFile::read(path.as_ref()).unwrap().to_state().unwrap()
}

#[test]
fn validate_accepts_ghz_and_rejects_bad_identity_coefficient() {
    let dir = tempfile::tempdir().unwrap();
    let ghz = fixture(&dir, "ghz.json", &["ghz", "3"]);
    let r = run(&["--json", "validate", &ghz]);
    assert_eq!(r.code, 0);
    let rec = &json_lines(&r.out)[0];
    assert_eq!(rec["valid"], true);
    assert!((rec["purity"].as_f64().unwrap() - 1.0).abs() < 1e-12);

    let bad = write(&dir, "bad.json", r#"{"version":1,"n":1,"pauli":{"I":0.6,"Z":0.2}}"#);
    let r = run(&["--json", "validate", &bad]);
    assert_eq!(r.code, 1);
    let rec = &json_lines(&r.out)[0];
    assert_eq!(rec["valid"], false);
    assert_eq!(rec["violations"][0]["code"], "b");

    let text = run(&["validate", &ghz]);
    assert!(text.out.contains("valid, purity 1.0000000000"), "{}", text.out);
}

#[test]
fn input_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(run(&["validate", "/nonexistent/state.json"]).code, 2);
    let garbage = write(&dir, "g.json", "{not json");
    assert_eq!(run(&["validate", &garbage]).code, 2);
    let wrong_len = write(&dir, "w.json", r#"{"version":1,"n":2,"pauli":{"I":0.5}}"#);
    assert_eq!(run(&["decompose", &wrong_len]).code, 2);
    assert_eq!(run(&["no-such-command"]).code, 2);
    assert_eq!(run(&["--help"]).code, 0);
}

#[test]
fn decompose_ghz3_reports_zero_bloch_and_delta() {
    let dir = tempfile::tempdir().unwrap();
    let ghz = fixture(&dir, "ghz.json", &["ghz", "3"]);
    let delta = dir.path().join("delta.json");
    let r = run(&["--json", "decompose", &ghz, "--delta-out", delta.to_str().unwrap()]);
    assert_eq!(r.code, 0, "{}", r.err);
    let rec = &json_lines(&r.out)[0];
    assert_eq!(rec["identity_coeff"].as_f64().unwrap(), 0.125);
    for q in rec["qubits"].as_array().unwrap() {
        for c in q["bloch"].as_array().unwrap() {
            assert!(c.as_f64().unwrap().abs() < 1e-12);
        }
        assert!(q["translated_norm"].as_f64().unwrap() < 1e-12);
    }
    assert_eq!(rec["delta"].as_object().unwrap().len(), 7);
    let d = load(&delta);
    assert!((d.get(&"ZZI".parse().unwrap()) - 0.125).abs() < 1e-12);
    assert!((d.get(&"XXX".parse().unwrap()) - 0.125).abs() < 1e-12);
}

#[test]
fn centralizer_dimensions() {
    let dir = tempfile::tempdir().unwrap();
    let ghz = fixture(&dir, "ghz.json", &["ghz", "3"]);
    let rec = &json_lines(&run(&["--json", "centralizer", &ghz]).out)[0];
    assert_eq!((rec["m"].as_u64(), rec["dim"].as_u64()), (Some(0), Some(9)));

    let prod = fixture(&dir, "p.json", &["product", "--bloch", "0,0,1", "--bloch", "0.6,0,0", "--bloch", "0,0.3,0"]);
    let rec = &json_lines(&run(&["--json", "centralizer", &prod]).out)[0];
    assert_eq!((rec["m"].as_u64(), rec["dim"].as_u64()), (Some(3), Some(3)));
    assert_eq!(rec["qubits"][1]["class"], "axis");
    assert_eq!(rec["qubits"][1]["axis"][0].as_f64(), Some(1.0));
}

#[test]
fn evolve_respects_centralizer_flag() {
    let dir = tempfile::tempdir().unwrap();
    let ket0 = fixture(&dir, "k.json", &["product", "--bloch", "0,0,1"]);
    let about_z = write(&dir, "z.json", r#"{"factors":[{"qubit":1,"axis":[0,0,1],"angle":0.7}]}"#);
    let about_x = write(&dir, "x.json", r#"{"factors":[{"qubit":1,"axis":[1,0,0],"angle":0.7}]}"#);

    let r = run(&["evolve", &ket0, &about_z, "--require-centralizer"]);
    assert_eq!(r.code, 0, "{}", r.err);
    let s = StateFile::parse(&r.out).unwrap().to_state().unwrap();
    assert!(s.max_abs_diff(&load(&ket0)) < 1e-12);

    let r = run(&["evolve", &ket0, &about_x, "--require-centralizer"]);
    assert_eq!(r.code, 1);
    assert!(r.err.contains("qubit"), "{}", r.err);

    // without the flag any local unitary is applied: |0⟩ rotated about x by 2ω
    let r = run(&["evolve", &ket0, &about_x]);
    assert_eq!(r.code, 0);
    let s = StateFile::parse(&r.out).unwrap().to_state().unwrap();
    let (y, z) = (2.0 * s.get(&"Y".parse().unwrap()), 2.0 * s.get(&"Z".parse().unwrap()));
    assert!((y - 1.4f64.sin()).abs() < 1e-12 && (z - 1.4f64.cos()).abs() < 1e-12, "{y} {z}");

    let bad_qubit = write(&dir, "bq.json", r#"{"factors":[{"qubit":2,"axis":[0,0,1],"angle":0.7}]}"#);
    assert_eq!(run(&["evolve", &ket0, &bad_qubit]).code, 2);
}

#[test]
fn evolve_then_inverse_restores_state() {
    let dir = tempfile::tempdir().unwrap();
    let rho = fixture(&dir, "r.json", &["random", "3", "--seed", "11"]);
    let spec = UnitarySpecFile::parse(
        r#"{"factors":[{"qubit":1,"axis":[1,2,3],"angle":0.4},{"qubit":3,"axis":[0,1,0],"angle":-1.1}]}"#,
    )
    .unwrap();
    let fwd = write(&dir, "u.json", &spec.to_json());
    let inv = write(&dir, "ui.json", &spec.inverse().to_json());
    let mid: PathBuf = dir.path().join("mid.json");
    assert_eq!(run(&["evolve", &rho, &fwd, "--out", mid.to_str().unwrap()]).code, 0);
    let back = run(&["evolve", mid.to_str().unwrap(), &inv]);
    let restored = StateFile::parse(&back.out).unwrap().to_state().unwrap();
    assert!(restored.max_abs_diff(&load(&rho)) < 1e-10);
    assert!(load(&mid).max_abs_diff(&load(&rho)) > 1e-3);
}

#[test]
fn sample_is_seeded_and_preserves_reductions() {
    let dir = tempfile::tempdir().unwrap();
    let rho = fixture(&dir, "r.json", &["random", "2", "--seed", "5"]);
    let a = run(&["sample", &rho, "--count", "4", "--seed", "9"]);
    let b = run(&["sample", &rho, "--count", "4", "--seed", "9"]);
    let c = run(&["sample", &rho, "--count", "4", "--seed", "10"]);
    assert_eq!(a.code, 0, "{}", a.err);
    assert_eq!(a.out, b.out);
    assert_ne!(a.out, c.out);
    let source = load(&rho);
    for line in a.out.lines() {
        let member = StateFile::parse(line).unwrap().to_state().unwrap();
        for code in ["XI", "YI", "ZI", "IX", "IY", "IZ", "II"] {
            let idx = code.parse().unwrap();
            assert!((member.get(&idx) - source.get(&idx)).abs() < 1e-10);
        }
    }

    let empty = run(&["sample", &rho, "--count", "0"]);
    assert_eq!((empty.code, empty.out.as_str()), (0, ""));

    let out_dir = dir.path().join("batch");
    std::fs::create_dir(&out_dir).unwrap();
    assert_eq!(run(&["sample", &rho, "--count", "3", "--out-dir", out_dir.to_str().unwrap()]).code, 0);
    for i in 0..3 {
        assert!(out_dir.join(format!("sample-{i:04}.json")).exists());
    }
}

#[test]
fn sampling_pure_product_returns_input() {
    let dir = tempfile::tempdir().unwrap();
    let prod = fixture(&dir, "p.json", &["product", "--bloch", "0,0,1", "--bloch", "0.6,0.8,0"]);
    let source = load(&prod);
    let r = run(&["sample", &prod, "--count", "5", "--seed", "3"]);
    for line in r.out.lines() {
        assert!(StateFile::parse(line).unwrap().to_state().unwrap().max_abs_diff(&source) < 1e-12);
    }
}

#[test]
fn compare_verdicts() {
    let dir = tempfile::tempdir().unwrap();
    let ghz = fixture(&dir, "ghz.json", &["ghz", "2"]);
    let mixed = fixture(&dir, "mixed.json", &["mixed", "2"]);
    let ket = fixture(&dir, "ket.json", &["product", "--bloch", "0,0,1", "--bloch", "0,0,1"]);

    let verdict = |a: &str, b: &str| {
        let r = run(&["--json", "compare", a, b]);
        assert_eq!(r.code, 0, "{}", r.err);
        json_lines(&r.out)[0]["verdict"].as_str().unwrap().to_string()
    };
    assert_eq!(verdict(&ghz, &mixed), "ExcludedByPurity");
    assert_eq!(verdict(&ghz, &ket), "ExcludedByReductions");

    let member = run(&["sample", &ghz, "--count", "1", "--seed", "1"]);
    let member_path = write(&dir, "m.json", &StateFile::parse(&member.out).unwrap().to_json());
    assert_eq!(verdict(&ghz, &member_path), "Inconclusive");
}

#[test]
fn state_files_round_trip_byte_for_byte() {
    let dir = tempfile::tempdir().unwrap();
    for fmt in ["pauli", "dense"] {
        let p = dir.path().join(format!("r-{fmt}.json")).to_string_lossy().into_owned();
        assert_eq!(run(&["--format", fmt, "fixture", "random", "2", "--seed", "4", "--out", &p]).code, 0);
        let text = std::fs::read_to_string(&p).unwrap();
        assert!(text.contains(&format!("\"{fmt}\"")));
        let again = StateFile::parse(&text).unwrap().to_json() + "\n";
        assert_eq!(text, again);
    }
    assert!(load(dir.path().join("r-pauli.json")).max_abs_diff(&load(dir.path().join("r-dense.json"))) < 1e-12);
}
