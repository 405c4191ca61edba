use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use sha2::{Digest, Sha256};

fn bhlab(args: &[&str], out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bhlab"))
        .args(args)
        .arg("--out")
        .arg(out)
        .output()
        .expect("binary runs")
}

fn manifest(dir: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(dir.join("manifest.json")).unwrap()).unwrap()
}

#[test]
fn artifacts_match_manifest_hashes() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path().join("run");
    let r = bhlab(&["spectrum", "--M", "11", "--U", "3", "--V", "-2"], &dir);
    assert_eq!(
        r.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&r.stderr)
    );
    let m = manifest(&dir);
    assert_eq!(m["status"], "ok");
    assert_eq!(m["config"]["M"], 11);
    let arts = m["artifacts"].as_array().unwrap();
    assert_eq!(arts.len(), 2);
    for a in arts {
        let bytes = std::fs::read(dir.join(a["file"].as_str().unwrap())).unwrap();
        let hex: String = Sha256::digest(&bytes)
            .iter()
            .map(|b| format!("{b:02x}"))
            .collect();
        assert_eq!(a["sha256"].as_str().unwrap(), hex);
        assert_eq!(a["bytes"].as_u64().unwrap() as usize, bytes.len());
    }
    // odd sector of M = 11 has (M^2 - 1) / 4 = 30 levels
    let odd = std::fs::read_to_string(dir.join("spectrum_odd.csv")).unwrap();
    assert_eq!(odd.lines().count(), 31);
}

#[test]
fn validation_errors_exit_2() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path().join("run");
    assert_eq!(
        bhlab(&["spectrum", "--M", "10"], &dir).status.code(),
        Some(2)
    );
    assert_eq!(
        bhlab(&["spectrum", "--M", "5", "--digits", "3"], &dir)
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        bhlab(&["spectrum", "--M", "5"], &dir).status.code(),
        Some(0)
    );
    assert_eq!(
        bhlab(&["spectrum", "--M", "5"], &dir).status.code(),
        Some(2)
    );
    let again = bhlab(&["spectrum", "--M", "5", "--overwrite"], &dir);
    assert_eq!(again.status.code(), Some(0));
    let open = tmp.path().join("open");
    assert_eq!(
        bhlab(&["bands", "--M", "5", "--bc", "open"], &open)
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn flags_override_config_file() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = tmp.path().join("run.cfg");
    std::fs::write(&cfg, "M=7\nU=2\nV=-1\nsector=odd\n").unwrap();
    let dir = tmp.path().join("run");
    let r = bhlab(
        &["spectrum", "--config", cfg.to_str().unwrap(), "--U", "0.5"],
        &dir,
    );
    assert_eq!(r.status.code(), Some(0));
    let m = manifest(&dir);
    assert_eq!(m["config"]["M"], 7);
    assert_eq!(m["config"]["U"], 0.5);
    assert_eq!(m["config"]["V"], -1.0);
    assert!(dir.join("spectrum_odd.csv").exists());
    assert!(!dir.join("spectrum_even.csv").exists());
}

#[test]
fn tables_are_reproducible() {
    let tmp = tempfile::tempdir().unwrap();
    let args = ["spectrum", "--M", "9", "--U", "1", "--grid", "-2:0:11"];
    let (a, b) = (tmp.path().join("a"), tmp.path().join("b"));
    assert_eq!(bhlab(&args, &a).status.code(), Some(0));
    assert_eq!(bhlab(&args, &b).status.code(), Some(0));
    let (ma, mb) = (manifest(&a), manifest(&b));
    assert_eq!(ma["artifacts"], mb["artifacts"]);
    for f in ["levels_odd.csv", "gaps_even.csv", "summary.json"] {
        assert_eq!(
            std::fs::read(a.join(f)).unwrap(),
            std::fs::read(b.join(f)).unwrap()
        );
    }
}

#[test]
fn ybe_odd_sector_vanishes() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path().join("ybe");
    let r = bhlab(
        &[
            "ybe", "--M", "3", "--U", "1.3", "--V", "-0.7", "--grid", "0.1:3:7",
        ],
        &dir,
    );
    assert_eq!(r.status.code(), Some(0));
    let s: Value =
        serde_json::from_str(&std::fs::read_to_string(dir.join("summary.json")).unwrap()).unwrap();
    assert!(s["odd_max"].as_f64().unwrap() < 1e-13);
    assert!(s["even_max"].as_f64().unwrap() > 1e-3);
}

#[test]
fn completeness_exit_codes() {
    let tmp = tempfile::tempdir().unwrap();
    let ok = tmp.path().join("ok");
    let r = bhlab(&["completeness", "--M", "11", "--U", "3", "--V", "-2"], &ok);
    assert_eq!(r.status.code(), Some(0));
    assert_eq!(manifest(&ok)["status"], "ok");

    // U = V leaves one odd level without a root
    let short = tmp.path().join("short");
    let r = bhlab(
        &["completeness", "--M", "11", "--U", "2", "--V", "2"],
        &short,
    );
    assert_eq!(r.status.code(), Some(3));
    assert_eq!(manifest(&short)["status"], "acceptance-failed");
    let doc: Value =
        serde_json::from_str(&std::fs::read_to_string(short.join("completeness.json")).unwrap())
            .unwrap();
    assert_eq!(doc["total"], 29);
    assert_eq!(doc["expected"], 30);
}

#[test]
fn prony_reports_bethe_states() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path().join("p");
    let r = bhlab(
        &[
            "prony", "--M", "11", "--U", "3", "--V", "-2", "--sector", "odd", "--state", "0,5",
        ],
        &dir,
    );
    assert_eq!(r.status.code(), Some(0));
    let csv = std::fs::read_to_string(dir.join("prony_odd.csv")).unwrap();
    let rows: Vec<&str> = csv.lines().skip(1).collect();
    assert_eq!(rows.len(), 2);
    assert!(rows.iter().all(|l| l.split(',').nth(2) == Some("true")));
    let bad = tmp.path().join("bad");
    let r = bhlab(
        &["prony", "--M", "5", "--sector", "odd", "--state", "99"],
        &bad,
    );
    assert_eq!(r.status.code(), Some(2));
}
