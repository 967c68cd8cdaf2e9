use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use mippc::Code;
use tempfile::TempDir;

const BIN: &str = env!("CARGO_BIN_EXE_mippc");

fn mippc(args: &[&str]) -> Output {
    Command::new(BIN)
        .args(args)
        .env_remove("MIPPC_JOBS")
        .output()
        .unwrap()
}

fn status(out: &Output) -> i32 {
    out.status.code().unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

fn built(dir: &TempDir, args: &[&str], name: &str) -> PathBuf {
    let path = dir.path().join(name);
    let mut full = args.to_vec();
    full.extend(["-o", p(&path)]);
    let out = mippc(&full);
    assert_eq!(status(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    path
}

#[test]
fn optimal_code_round_trip() {
    let dir = TempDir::new().unwrap();
    let file = built(
        &dir,
        &["construct", "gq", "--family", "w3", "--k", "2"],
        "w3.txt",
    );
    let text = std::fs::read_to_string(&file).unwrap();
    let code = Code::parse(&text).unwrap();
    assert_eq!((code.n(), code.len(), code.q()), (2, 45, 15));
    // Output is canonical: the body re-serializes identically.
    let body: String = text
        .lines()
        .filter(|l| !l.starts_with('#'))
        .map(|l| format!("{l}\n"))
        .collect();
    assert_eq!(body, code.to_string());

    let out = mippc(&["verify", "--t", "3", p(&file)]);
    assert_eq!(status(&out), 0);
    assert_eq!(stdout(&out), "3-MIPPC: true (method=fast)\n");
    for method in ["brute", "graph", "packing"] {
        let out = mippc(&["verify", "--t", "3", "--method", method, p(&file)]);
        assert_eq!(stdout(&out), format!("3-MIPPC: true (method={method})\n"));
    }
}

#[test]
fn bound_report() {
    let out = mippc(&["bound", "--q", "15"]);
    assert_eq!(status(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("max_m_cubic=45\n"));
    assert!(text.contains("ad2_witness=(5,3)\n"));
    let out = mippc(&["--json", "bound", "--q", "7"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["ad2_witness"], serde_json::Value::Null);
    assert_eq!(v["max_m_cubic"], 16);
}

#[test]
fn verify_failure_and_methods_agree() {
    let dir = TempDir::new().unwrap();
    let cycle = write(&dir, "cycle.txt", "2 2 4\n0 0\n0 1\n1 0\n1 1\n");
    for method in ["auto", "brute", "fast", "graph", "packing"] {
        let out = mippc(&["verify", "--t", "3", "--method", method, p(&cycle)]);
        assert_eq!(status(&out), 1, "method {method}");
        assert!(stdout(&out).starts_with("3-MIPPC: false"));
    }
    let out = mippc(&["verify", "--t", "3", p(&cycle)]);
    assert!(stdout(&out).contains("violation:"));
    let out = mippc(&["verify", "--t", "2", "--method", "brute", p(&cycle)]);
    assert_eq!(stdout(&out), "2-MIPPC: false (method=brute)\n");
}

#[test]
fn method_preconditions_are_usage_errors() {
    let dir = TempDir::new().unwrap();
    let code = write(&dir, "n3.txt", "3 2 2\n0 0 0\n1 1 1\n");
    assert_eq!(
        status(&mippc(&[
            "verify",
            "--t",
            "3",
            "--method",
            "fast",
            p(&code)
        ])),
        2
    );
    assert_eq!(
        status(&mippc(&[
            "verify",
            "--t",
            "3",
            "--method",
            "graph",
            p(&code)
        ])),
        2
    );
    let out = mippc(&["verify", "--t", "3", p(&code)]);
    assert_eq!(stdout(&out), "3-MIPPC: true (method=brute)\n");
}

#[test]
fn exit_codes() {
    let dir = TempDir::new().unwrap();
    let bad = write(&dir, "bad.txt", "2 2 3\n0 0\n0 x\n");
    assert_eq!(status(&mippc(&["verify", "--t", "3", p(&bad)])), 3);
    let short = write(&dir, "short.txt", "2 2 3\n0 0\n");
    assert_eq!(status(&mippc(&["verify", "--t", "3", p(&short)])), 3);
    assert_eq!(status(&mippc(&["verify", "--t", "3"])), 2);
    assert_eq!(
        status(&mippc(&["verify", "--t", "3", "--bogus", p(&bad)])),
        2
    );
    assert_eq!(status(&mippc(&["frobnicate"])), 2);
    assert_eq!(
        status(&mippc(&[
            "construct",
            "truncate",
            "--theorem",
            "a111",
            "--k",
            "2",
            "--s",
            "9"
        ])),
        2
    );
    assert_eq!(
        status(&mippc(&["construct", "gq", "--family", "w3", "--k", "6"])),
        2
    );
    assert_eq!(
        status(&mippc(&[
            "construct",
            "gq",
            "--family",
            "t2star",
            "--k",
            "3"
        ])),
        2
    );
    assert_eq!(
        status(&mippc(&[
            "construct",
            "gq",
            "--family",
            "dual-t2star",
            "--k",
            "2"
        ])),
        2
    );
    assert_eq!(status(&mippc(&["bound", "--q", "1"])), 2);
    assert_eq!(status(&mippc(&["--help"])), 0);
}

#[test]
fn brute_force_cap() {
    let dir = TempDir::new().unwrap();
    let file = built(
        &dir,
        &["construct", "gq", "--family", "w3", "--k", "2"],
        "w3.txt",
    );
    let out = mippc(&[
        "--cap",
        "100",
        "verify",
        "--t",
        "3",
        "--method",
        "brute",
        p(&file),
    ]);
    assert_eq!(status(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("budget"));
}

#[test]
fn tracing() {
    let dir = TempDir::new().unwrap();
    let file = built(
        &dir,
        &["construct", "gq", "--family", "w3", "--k", "2"],
        "w3.txt",
    );
    let out = mippc(&["trace", "--t", "3", "--code", p(&file), "--evidence", "0;0"]);
    assert_eq!(status(&out), 0);
    assert_eq!(stdout(&out), "identified:\n0: 0 0\n");
    let out = mippc(&[
        "--json",
        "trace",
        "--t",
        "3",
        "--code",
        p(&file),
        "--evidence",
        "0;0",
    ]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["identified"], serde_json::json!([0]));
    // (1, 1) is not a codeword, so no subcode produces {0,1} x {0,1}.
    let out = mippc(&[
        "trace",
        "--t",
        "3",
        "--code",
        p(&file),
        "--evidence",
        "0,1;0,1",
    ]);
    assert_eq!(status(&out), 3);
    let out = mippc(&[
        "trace",
        "--t",
        "3",
        "--code",
        p(&file),
        "--evidence",
        "0;0;0",
    ]);
    assert_eq!(status(&out), 3);
    let out = mippc(&[
        "trace",
        "--t",
        "3",
        "--code",
        p(&file),
        "--evidence",
        "0;;1",
    ]);
    assert_eq!(status(&out), 3);
}

#[test]
fn empty_identification_exits_one() {
    let dir = TempDir::new().unwrap();
    // {00, 11} and {01, 10} both produce the full product set.
    let grid = write(&dir, "grid.txt", "2 2 4\n0 0\n0 1\n1 0\n1 1\n");
    let out = mippc(&[
        "trace",
        "--t",
        "2",
        "--code",
        p(&grid),
        "--evidence",
        "0,1;0,1",
    ]);
    assert_eq!(status(&out), 1);
    assert_eq!(stdout(&out), "identified: none\n");
}

#[test]
fn attack_pipeline() {
    let dir = TempDir::new().unwrap();
    let code = built(
        &dir,
        &[
            "construct",
            "truncate",
            "--theorem",
            "a222",
            "--k",
            "2",
            "--s",
            "0",
        ],
        "c16.txt",
    );
    let binary = dir.path().join("b16.txt");
    assert_eq!(
        status(&mippc(&[
            "convert",
            "--to",
            "binary",
            p(&code),
            "-o",
            p(&binary)
        ])),
        0
    );
    let out = mippc(&["attack", "--code", p(&code), "--t", "3"]);
    assert_eq!(status(&out), 3, "non-binary codes are rejected");

    let out = mippc(&[
        "attack",
        "--code",
        p(&binary),
        "--t",
        "3",
        "--trials",
        "50",
        "--seed",
        "5",
    ]);
    assert_eq!(status(&out), 0);
    let text = stdout(&out);
    assert!(text.ends_with("success=50/50 approx=1.000000\n"));
    let again = mippc(&[
        "attack",
        "--code",
        p(&binary),
        "--t",
        "3",
        "--trials",
        "50",
        "--seed",
        "5",
        "--jobs",
        "1",
    ]);
    assert_eq!(stdout(&again), text);

    let out = mippc(&[
        "--json",
        "attack",
        "--code",
        p(&binary),
        "--t",
        "3",
        "--coalition",
        "2,7,11",
    ]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["success"], true);
    assert_eq!(v["coalition"], serde_json::json!([2, 7, 11]));
}

#[test]
fn conversions_round_trip() {
    let dir = TempDir::new().unwrap();
    let code = built(
        &dir,
        &[
            "construct",
            "truncate",
            "--theorem",
            "a111",
            "--k",
            "2",
            "--s",
            "3",
        ],
        "a111.txt",
    );
    let original = Code::parse(&std::fs::read_to_string(&code).unwrap()).unwrap();
    for format in ["graph", "packing"] {
        let converted = dir.path().join(format!("{format}.txt"));
        assert_eq!(
            status(&mippc(&[
                "convert",
                "--to",
                format,
                p(&code),
                "-o",
                p(&converted)
            ])),
            0
        );
        let back = mippc(&["convert", "--from", format, "--to", "code", p(&converted)]);
        assert_eq!(status(&back), 0);
        assert_eq!(Code::parse(&stdout(&back)).unwrap(), original, "{format}");
    }
    let cycle = write(&dir, "cycle.txt", "2 2 4\n0 0\n0 1\n1 0\n1 1\n");
    assert_eq!(
        status(&mippc(&["convert", "--to", "packing", p(&cycle)])),
        3
    );
}

#[test]
fn quadrangle_verification() {
    let dir = TempDir::new().unwrap();
    let gq = built(
        &dir,
        &[
            "construct",
            "gq",
            "--family",
            "dual-asq",
            "--k",
            "3",
            "--emit",
            "gq",
        ],
        "gq.txt",
    );
    let out = mippc(&["gq", "verify", p(&gq)]);
    assert_eq!(status(&out), 0);
    assert_eq!(stdout(&out), "GQ(4,2): valid (45 points, 27 lines)\n");

    // Drop one line: some point loses a line and the counts break.
    let text = std::fs::read_to_string(&gq).unwrap();
    let mut lines: Vec<&str> = text.lines().collect();
    lines.pop();
    let header = lines[0].replace(" 27 ", " 26 ");
    lines[0] = &header;
    let broken = write(&dir, "broken.txt", &(lines.join("\n") + "\n"));
    let out = mippc(&["gq", "verify", p(&broken)]);
    assert_eq!(status(&out), 1);
    assert!(stdout(&out).contains("invalid, axiom"));
}

#[test]
fn truncation_header_records_the_realized_size() {
    let out = mippc(&[
        "construct",
        "truncate",
        "--theorem",
        "a333",
        "--k",
        "2",
        "--s",
        "7",
    ]);
    assert_eq!(status(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("# realized M = 21"));
    assert!(text.contains("(n, M, q) = (2, 21, 9)"));
}

#[test]
fn jobs_from_environment() {
    let dir = TempDir::new().unwrap();
    let file = built(
        &dir,
        &["construct", "gq", "--family", "t2star", "--k", "2"],
        "t.txt",
    );
    let out = Command::new(BIN)
        .args(["verify", "--t", "3", "--method", "brute", p(&file)])
        .env("MIPPC_JOBS", "2")
        .output()
        .unwrap();
    assert_eq!(stdout(&out), "3-MIPPC: true (method=brute)\n");
    let out = Command::new(BIN)
        .args(["verify", "--t", "3", p(&file)])
        .env("MIPPC_JOBS", "0")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}
