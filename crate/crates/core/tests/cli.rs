use lhc_kit::bipartite::FalsifyReport;
use lhc_kit::bsc_id::ErrorEstimate;
use lhc_kit::decompose::Derandomized;
use lhc_kit::{Alphabet, Channel, FunctionCode, FunctionTable, Hypergraph, LhcCertificate};
use serde::de::DeserializeOwned;
use serde::Serialize;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};
use tempfile::TempDir;

fn lhc_kit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lhc-kit"))
        .args(args)
        .env("LHC_KIT_WORKERS", "2")
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

fn write<T: Serialize>(dir: &Path, name: &str, value: &T) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, serde_json::to_string_pretty(value).unwrap()).unwrap();
    path
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

/// Reads an artifact and checks that writing it back gives the same text.
fn round_trip<T: Serialize + DeserializeOwned + PartialEq + std::fmt::Debug>(path: &Path) -> T {
    let text = std::fs::read_to_string(path).unwrap();
    let value: T = serde_json::from_str(&text).unwrap();
    let again = serde_json::to_string_pretty(&value).unwrap() + "\n";
    assert_eq!(text, again, "{}", path.display());
    value
}

/// `bsc(0.03)` between two singleton partitions of `{0, 1}`.
fn singleton_instance(dir: &Path) -> (PathBuf, PathBuf, PathBuf) {
    let singletons = Hypergraph::partition(Alphabet::binary(), vec![vec![0], vec![1]]).unwrap();
    (
        write(dir, "ch.json", &Channel::bsc(0.03).unwrap()),
        write(dir, "G.json", &singletons),
        write(dir, "H.json", &singletons),
    )
}

#[test]
fn verify_singleton_instance_passes() {
    let dir = TempDir::new().unwrap();
    let (ch, g, h) = singleton_instance(dir.path());
    let m = dir.path().join("m.json");
    std::fs::write(&m, r#"{"source_edge_count": 2, "target_edge_count": 2, "map": [0, 1]}"#).unwrap();
    let cert = dir.path().join("cert.json");
    let out = lhc_kit(&[
        "verify", "--channel", s(&ch), "--source", s(&g), "--target", s(&h), "--edge-map", s(&m),
        "--lambda", "0.05", "--out", s(&cert),
    ]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let cert: LhcCertificate = round_trip(&cert);
    assert!(cert.passed());
    for l in &cert.lambda_profile {
        assert!((l - 0.03).abs() < 1e-15);
    }
}

#[test]
fn verify_failure_names_the_vertex() {
    let dir = TempDir::new().unwrap();
    let (ch, g, h) = singleton_instance(dir.path());
    let out = lhc_kit(&["verify", "--channel", s(&ch), "--source", s(&g), "--target", s(&h), "--lambda", "0.01"]);
    assert_eq!(code(&out), 1);
    assert!(stderr(&out).contains("vertex 0 in edge 0"), "{}", stderr(&out));
    // the failing certificate still goes to stdout
    let cert: LhcCertificate = serde_json::from_str(&stdout(&out)).unwrap();
    assert!(!cert.passed());
}

#[test]
fn rates_golden_rows() {
    let out = lhc_kit(&["rates", "--gamma", "0.03", "--grid", "0:0.5:0.01"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(!text.contains('\r'));
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("delta,gv_rate,tx_rate"));
    let rows: Vec<Vec<f64>> = lines.map(|l| l.split(',').map(|v| v.parse().unwrap()).collect()).collect();
    assert_eq!(rows.len(), 51);
    assert_eq!(rows[0][0], 0.0);
    assert!((rows[0][2] - 0.8056).abs() < 1e-4);
    let last = rows.last().unwrap();
    assert!((last[0] - 0.5).abs() < 1e-12);
}

#[test]
fn id_sim_csv_has_bound_column() {
    let dir = TempDir::new().unwrap();
    let json = dir.path().join("est.json");
    let out = lhc_kit(&[
        "id-sim", "--n", "1000", "--gamma", "0.03", "--delta", "0.1", "--eps", "0.3", "--M", "16", "--trials", "2000",
        "--seed", "7", "--json", s(&json),
    ]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert!(stderr(&out).contains("seed: 7"));
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "trials,false_accept,false_reject,bound");
    let fields: Vec<f64> = lines[1].split(',').map(|v| v.parse().unwrap()).collect();
    assert_eq!(fields[0], 2000.0);
    assert!((fields[3] - 2.73e-3).abs() / 2.73e-3 < 0.02);
    let est: ErrorEstimate = round_trip(&json);
    assert_eq!(est.seed, 7);
    assert_eq!(est.false_accept_rate, fields[1]);
    assert_eq!(est.false_reject_rate, fields[2]);
}

#[test]
fn codebook_file_format() {
    let out = lhc_kit(&["codebook", "--n", "7", "--delta", "0.4", "--M", "4"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("# n=7 d=3"));
    let words: Vec<&str> = lines.collect();
    assert_eq!(words.len(), 4);
    assert!(words.iter().all(|w| w.len() == 7 && w.chars().all(|c| c == '0' || c == '1')));
}

fn validate(dir: &Path, config: &str) -> (i32, String) {
    let path = dir.join("config.json");
    std::fs::write(&path, config).unwrap();
    let out = lhc_kit(&["validate", "--config", s(&path)]);
    (code(&out), stdout(&out))
}

#[test]
fn validate_reports_epsilon_constraint() {
    let dir = TempDir::new().unwrap();
    let (status, text) = validate(
        dir.path(),
        r#"{"task": "id-sim", "n": 100, "gamma": 0.03, "delta": 0.1, "eps": 0.5, "M": 4}"#,
    );
    assert_eq!(status, 1);
    assert!(text.contains("eps: epsilon = 0.5 violates"), "{text}");
    assert!(text.contains("(theta_delta - theta_0) / (theta_delta + theta_0)"), "{text}");
}

#[test]
fn validate_reports_row_sum() {
    let dir = TempDir::new().unwrap();
    singleton_instance(dir.path());
    std::fs::write(
        dir.path().join("ch.json"),
        r#"{"input": ["0", "1"], "output": ["0", "1"], "rows": [[0.97, 0.030001], [0.03, 0.97]]}"#,
    )
    .unwrap();
    let (status, text) = validate(
        dir.path(),
        r#"{"task": "verify", "channel": "ch.json", "source": "G.json", "target": "H.json", "lambda": 0.05}"#,
    );
    assert_eq!(status, 1);
    assert!(text.contains("channel: not stochastic: row 0"), "{text}");
}

#[test]
fn validate_reports_missing_file() {
    let dir = TempDir::new().unwrap();
    let (status, text) = validate(
        dir.path(),
        r#"{"task": "verify", "channel": "nope.json", "source": "G.json", "target": "H.json", "lambda": 0.05}"#,
    );
    assert_eq!(status, 1);
    assert!(text.contains("channel: file not found"), "{text}");
    assert!(text.contains("nope.json"), "{text}");
}

#[test]
fn validate_accepts_good_config() {
    let dir = TempDir::new().unwrap();
    singleton_instance(dir.path());
    let (status, text) = validate(
        dir.path(),
        r#"{"task": "verify", "channel": "ch.json", "source": "G.json", "target": "H.json", "lambda": [0.05, 0.04]}"#,
    );
    assert_eq!(status, 0, "{text}");
    assert_eq!(text.trim(), "ok");
}

#[test]
fn run_executes_config_relative_to_its_directory() {
    let dir = TempDir::new().unwrap();
    singleton_instance(dir.path());
    let config = dir.path().join("verify.json");
    std::fs::write(
        &config,
        r#"{"task": "verify", "channel": "ch.json", "source": "G.json", "target": "H.json", "lambda": 0.05, "out": "cert.json"}"#,
    )
    .unwrap();
    let out = lhc_kit(&["run", "--config", s(&config)]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert!(round_trip::<LhcCertificate>(&dir.path().join("cert.json")).passed());

    std::fs::write(&config, r#"{"task": "rates", "gamma": 0.7}"#).unwrap();
    assert_eq!(code(&lhc_kit(&["run", "--config", s(&config)])), 2);
}

#[test]
fn exit_codes_for_bad_input() {
    let dir = TempDir::new().unwrap();
    let (ch, g, h) = singleton_instance(dir.path());
    let garbage = dir.path().join("garbage.json");
    std::fs::write(&garbage, "{not json").unwrap();
    let wrong_shape = write(dir.path(), "three.json", &Hypergraph::partition(Alphabet::range(3).unwrap(), vec![vec![0, 1, 2]]).unwrap());
    let cases: Vec<(Vec<&str>, i32)> = vec![
        (vec!["no-such-command"], 2),
        (vec!["verify"], 2),
        (vec!["verify", "--channel", s(&garbage), "--source", s(&g), "--target", s(&h), "--lambda", "0.1"], 2),
        (vec!["verify", "--channel", s(&ch), "--source", s(&g), "--target", s(&h), "--lambda", "x"], 2),
        (vec!["verify", "--channel", s(&ch), "--source", s(&g), "--target", s(&h), "--lambda", "0.1,0.1,0.1"], 2),
        (vec!["verify", "--channel", s(&ch), "--source", s(&wrong_shape), "--target", s(&h), "--lambda", "0.1"], 2),
        (vec!["verify", "--channel", "/nonexistent/ch.json", "--source", s(&g), "--target", s(&h), "--lambda", "0.1"], 2),
        (vec!["id-sim", "--n", "50", "--gamma", "0.03", "--delta", "0.1", "--eps", "0.9", "--M", "4", "--trials", "10"], 2),
        (vec!["rates", "--gamma", "0.03", "--grid", "0:1"], 2),
        (vec!["codebook", "--n", "4", "--delta", "1", "--M", "40"], 1),
        (vec!["derandomize", "--code", s(&garbage)], 2),
        (vec!["--help"], 0),
    ];
    for (args, want) in cases {
        let out = lhc_kit(&args);
        assert_eq!(code(&out), want, "{args:?}: {}", stderr(&out));
        assert!(!stderr(&out).contains("panicked"), "{args:?}");
    }
}

#[test]
fn decompose_reports_hypothesis_failure() {
    let dir = TempDir::new().unwrap();
    let (ch, g, h) = singleton_instance(dir.path());
    let out = lhc_kit(&[
        "decompose", "--phi", s(&ch), "--gamma", s(&ch), "--source", s(&g), "--target", s(&h), "--kappa", "0.6",
        "--mu", "0.5", "--lambda", "0.1",
    ]);
    assert_eq!(code(&out), 1, "{}", stderr(&out));
    let out = lhc_kit(&[
        "decompose", "--phi", s(&ch), "--gamma", s(&ch), "--source", s(&g), "--target", s(&h), "--kappa", "0.5",
        "--mu", "0.2", "--lambda", "0.1",
    ]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
}

fn noisy_code(dir: &Path) -> PathBuf {
    let f = FunctionTable::new(Alphabet::range(3).unwrap(), Alphabet::binary(), vec![0, 1, 1]).unwrap();
    let enc = Channel::new(
        Alphabet::range(3).unwrap(),
        Alphabet::binary(),
        vec![vec![0.99, 0.01], vec![0.02, 0.98], vec![0.0, 1.0]],
    )
    .unwrap();
    let phi = Channel::bsc(0.01).unwrap();
    let dec = Channel::new(Alphabet::binary(), Alphabet::binary(), vec![vec![0.995, 0.005], vec![0.0, 1.0]]).unwrap();
    let code = FunctionCode::new(f, enc, phi, dec).unwrap();
    let path = dir.join("code.bundle.json");
    code.save(&path, "code").unwrap();
    path
}

#[test]
fn derandomize_writes_loadable_bundle() {
    let dir = TempDir::new().unwrap();
    let bundle = noisy_code(dir.path());
    let (out_bundle, report) = (dir.path().join("det.bundle.json"), dir.path().join("det.report.json"));
    let out = lhc_kit(&["derandomize", "--code", s(&bundle), "--out", s(&out_bundle), "--report", s(&report)]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let det = FunctionCode::load(&out_bundle).unwrap();
    assert!(det.encoder().is_deterministic() && det.decoder().is_deterministic());
    let rep: Derandomized = round_trip(&report);
    for (o, i) in rep.lambda_out.iter().zip(&rep.lambda_in) {
        assert!(*o <= 4.0 * i + 1e-12);
    }
    round_trip::<Channel>(&dir.path().join("det.encoder.json"));
    round_trip::<FunctionTable>(&dir.path().join("det.function.json"));
    round_trip::<lhc_kit::code_bridge::CodeBundle>(&out_bundle);
}

#[test]
fn decompose_code_mode() {
    let dir = TempDir::new().unwrap();
    let bundle = noisy_code(dir.path());
    let out = lhc_kit(&["decompose", "--code", s(&bundle), "--kappa", "0.5"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["certificate"]["verdict"], "pass");
}

#[test]
fn assemble_id_repetition_example() {
    let dir = TempDir::new().unwrap();
    let report = dir.path().join("report.json");
    let bundle = dir.path().join("id.bundle.json");
    let out = lhc_kit(&[
        "assemble-id", "--n", "6", "--gamma", "0.03", "--delta", "1", "--eps", "0.5", "--M", "2", "--report", s(&report),
        "--out", s(&bundle),
    ]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    let bound: Vec<f64> = serde_json::from_value(v["bound"].clone()).unwrap();
    let exact: Vec<f64> = serde_json::from_value(v["exact_error"].clone()).unwrap();
    for (e, b) in exact.iter().zip(&bound) {
        assert!(*e <= b + 1e-12, "{e} > {b}");
    }
    for key in ["cert_enc1", "cert_enc2", "cert_swap", "cert_channel"] {
        let cert: LhcCertificate = serde_json::from_value(v[key].clone()).unwrap();
        assert!(cert.passed(), "{key}");
    }
    let code = FunctionCode::load(&bundle).unwrap();
    assert_eq!(code.function().domain().len(), 4);
}

#[test]
fn falsify_report_round_trips() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("falsify.json");
    let out = lhc_kit(&["falsify", "--instances", "40", "--seed", "5", "--out", s(&path)]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let report: FalsifyReport = round_trip(&path);
    assert_eq!(report.instances, 40);
    assert!(report.conclusion_held <= report.hypothesis_held);
}

#[test]
fn reruns_are_byte_identical() {
    let dir = TempDir::new().unwrap();
    let runs: Vec<Vec<Vec<u8>>> = (0..2)
        .map(|r| {
            let p = |name: &str| dir.path().join(format!("{r}.{name}"));
            let sim = p("sim.csv");
            let cb = p("cb.txt");
            let fz = p("falsify.json");
            let asm = p("asm.json");
            for args in [
                vec!["id-sim", "--n", "200", "--gamma", "0.03", "--delta", "0.1", "--eps", "0.3", "--M", "8", "--trials", "5000", "--out", s(&sim)],
                vec!["codebook", "--n", "30", "--delta", "0.2", "--M", "10", "--seed", "3", "--out", s(&cb)],
                vec!["falsify", "--instances", "30", "--out", s(&fz)],
                vec!["assemble-id", "--n", "4", "--gamma", "0.05", "--delta", "1", "--eps", "0.5", "--M", "2", "--report", s(&asm)],
            ] {
                let out = lhc_kit(&args);
                assert_eq!(code(&out), 0, "{args:?}: {}", stderr(&out));
            }
            [sim, cb, fz, asm].iter().map(|f| std::fs::read(f).unwrap()).collect()
        })
        .collect();
    assert_eq!(runs[0], runs[1]);
}
