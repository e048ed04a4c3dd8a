use std::path::Path;
use std::process::{Command, Output};

fn kronx(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kronx")).args(args).output().unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn write(dir: &Path, name: &str, body: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p.to_str().unwrap().to_owned()
}

#[test]
fn cg_table_has_four_rows() {
    let out = kronx(&["cg", "--twoj1", "1", "--twoj2", "1", "--table"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert_eq!(text.lines().count(), 4);
    assert!(text.contains("J=0 M=0"));
}

#[test]
fn cg_coefficient_lookup() {
    let out = kronx(&["cg", "--twoj1", "2", "--twoj2", "1", "--coef", "0", "1", "3", "1"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("√(2/3)"));
}

#[test]
fn verify_intertwining_passes() {
    let out = kronx(&["verify", "--suite", "intertwining", "--max-twoj", "5"]);
    assert_eq!(code(&out), 0, "{}", stdout(&out));
}

#[test]
fn verify_all_passes() {
    assert_eq!(code(&kronx(&["verify"])), 0);
}

#[test]
fn mismatched_schema_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let a = write(dir.path(), "a.json", r#"{"order": 2, "terms": [[1, 2, 1, 1]]}"#);
    let b = write(dir.path(), "b.json", r#"{"order": 2, "terms": [[1, 1, 0.5, 0.25]]}"#);
    let bad = write(dir.path(), "bad.json", r#"{"order": 2, "terms": [[3, 1, 1, 1]]}"#);
    assert_eq!(code(&kronx(&["kron", &a, &b])), 2);
    assert_eq!(code(&kronx(&["kron", &a, &bad])), 2);
    assert_eq!(code(&kronx(&["kron", &a, "/nonexistent.json"])), 2);
    assert_eq!(code(&kronx(&["kron", &a, &a])), 0);
}

#[test]
fn usage_errors() {
    assert_eq!(code(&kronx(&["kron", "--bogus"])), 64);
    assert_eq!(code(&kronx(&["frobnicate"])), 64);
    assert_eq!(code(&kronx(&[])), 64);
    assert_eq!(code(&kronx(&["cg", "--twoj1", "1", "--twoj2", "1"])), 64);
    assert_eq!(code(&kronx(&["--help"])), 0);
    assert_eq!(code(&kronx(&["--version"])), 0);
}

#[test]
fn domain_errors() {
    assert_eq!(code(&kronx(&["fft-factor", "--n", "6"])), 2);
    assert_eq!(code(&kronx(&["cg", "--twoj1", "1", "--twoj2", "1", "--coef", "1", "1", "4", "2"])), 2);
    assert_eq!(code(&kronx(&["hubbard", "--sites", "5"])), 2);
}

#[test]
fn every_subcommand_has_help() {
    let subs = [
        ("kron", vec!["--dense", "--output"]),
        ("perm", vec!["swap", "commute", "sym"]),
        ("fft-factor", vec!["--n", "--verify"]),
        ("su2", vec!["--twoj", "--generator"]),
        ("couple", vec!["--twoj1", "--twoj2", "--generator", "--blocks"]),
        ("cg", vec!["--twoj1", "--twoj2", "--matrix", "--coef", "--table"]),
        ("diag", vec!["--tol", "--max-sweeps", "--single-sweep"]),
        ("heisenberg", vec!["--sites", "--jx", "--jy", "--jz", "--periodic", "--diag"]),
        ("hubbard", vec!["--sites", "--eps", "--mu", "--u", "--t", "--diag"]),
        ("jc", vec!["--gamma", "--cutoff", "--time", "--two-cavity"]),
        ("verify", vec!["--suite", "--max-twoj"]),
    ];
    for (sub, flags) in subs {
        let out = kronx(&[sub, "--help"]);
        assert_eq!(code(&out), 0, "{sub}");
        let text = stdout(&out);
        for f in flags {
            assert!(text.contains(f), "{sub} --help lacks {f}");
        }
        assert!(text.contains("--threads"), "{sub}");
    }
}

#[test]
fn matrix_outputs_feed_kron_and_diag() {
    let dir = tempfile::tempdir().unwrap();
    let h = dir.path().join("h.json");
    let h = h.to_str().unwrap();
    assert_eq!(code(&kronx(&["heisenberg", "--sites", "2", "--jx", "2", "--jy", "2", "--jz", "1/2", "-o", h])), 0);
    let out = kronx(&["diag", h]);
    assert_eq!(code(&out), 0);
    let csv = stdout(&out);
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "eigenvalue,multiplicity");
    assert_eq!(&lines[1..], ["-1.750000000000,1", "-0.250000000000,2", "2.250000000000,1"]);
    assert_eq!(code(&kronx(&["kron", h, h])), 0);

    let emitters: Vec<Vec<&str>> = vec![
        vec!["su2", "--twoj", "3", "--generator", "jplus"],
        vec!["couple", "--twoj1", "2", "--twoj2", "1", "--generator", "j3", "--blocks"],
        vec!["cg", "--twoj1", "2", "--twoj2", "1", "--matrix"],
        vec!["perm", "commute", "--n", "3", "--m", "2"],
        vec!["perm", "sym", "--p", "2", "--n", "2"],
        vec!["hubbard", "--sites", "2"],
        vec!["jc", "--gamma", "1", "--cutoff", "4", "--time", "0.5"],
        vec!["jc", "--gamma", "1", "--cutoff", "2", "--time", "0.5", "--two-cavity"],
    ];
    for (i, args) in emitters.iter().enumerate() {
        let path = dir.path().join(format!("m{i}.json"));
        let path = path.to_str().unwrap();
        let mut full = args.clone();
        full.extend(["-o", path]);
        assert_eq!(code(&kronx(&full)), 0, "{args:?}");
        assert_eq!(code(&kronx(&["kron", path, path])), 0, "kron {args:?}");
    }
    // Hermitian outputs are accepted by diag as well
    let hub = dir.path().join("m5.json");
    assert_eq!(code(&kronx(&["diag", hub.to_str().unwrap()])), 0);
}

#[test]
fn exact_output_is_byte_stable() {
    let args = ["cg", "--twoj1", "3", "--twoj2", "2", "--matrix"];
    let first = kronx(&args).stdout;
    for threads in ["1", "4"] {
        let mut a = args.to_vec();
        a.extend(["--threads", threads]);
        assert_eq!(kronx(&a).stdout, first);
    }
    let p = ["perm", "sym", "--p", "3", "--n", "2", "--threads", "4"];
    assert_eq!(kronx(&p).stdout, kronx(&p).stdout);
}

#[test]
fn dimension_cap() {
    let out = Command::new(env!("CARGO_BIN_EXE_kronx"))
        .args(["heisenberg", "--sites", "6"])
        .env("KRONX_MAX_DIM", "32")
        .output()
        .unwrap();
    assert_eq!(code(&out), 2);
}

#[test]
fn fft_factor_reports_sparsity() {
    let out = kronx(&["fft-factor", "--n", "16", "--verify"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("32"));
}
