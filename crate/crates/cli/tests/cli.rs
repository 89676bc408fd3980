use std::fs;
use std::path::Path;
use std::process::{Command, Output};

const ZERO_SEED: &str = "0000000000000000000000000000000000000000000000000000000000000000";

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sparsedil"))
        .args(args)
        .env_remove("SPARSEDIL_BACKEND")
        .output()
        .expect("binary runs")
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn keys(dir: &Path, level: &str) -> (std::path::PathBuf, std::path::PathBuf) {
    let (pk, sk) = (dir.join(format!("pk{level}")), dir.join(format!("sk{level}")));
    let o = run(&["keygen", "--level", level, "--seed", ZERO_SEED, "--pk", s(&pk), "--sk", s(&sk)]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    (pk, sk)
}

#[test]
fn keygen_is_deterministic_with_expected_lengths() {
    let dir = tempfile::tempdir().unwrap();
    for (level, pk_len, sk_len) in [("2", 1312, 2528), ("3", 1952, 4000), ("5", 2592, 4864)] {
        let (pk, sk) = keys(dir.path(), level);
        let (pk_bytes, sk_bytes) = (fs::read(&pk).unwrap(), fs::read(&sk).unwrap());
        assert_eq!((pk_bytes.len(), sk_bytes.len()), (pk_len, sk_len));
        let again = tempfile::tempdir().unwrap();
        let (pk2, sk2) = keys(again.path(), level);
        assert_eq!(fs::read(pk2).unwrap(), pk_bytes);
        assert_eq!(fs::read(sk2).unwrap(), sk_bytes);
    }
}

#[test]
fn keygen_into_missing_directory_leaves_nothing() {
    let dir = tempfile::tempdir().unwrap();
    let pk = dir.path().join("pk");
    let sk = dir.path().join("missing").join("sk");
    let o = run(&["keygen", "--seed", ZERO_SEED, "--pk", s(&pk), "--sk", s(&sk)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(!o.stderr.is_empty());
    assert!(!pk.exists() && !sk.exists());
}

#[test]
fn bad_seed_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let pk = dir.path().join("pk");
    let sk = dir.path().join("sk");
    for seed in ["abcd", "zz00000000000000000000000000000000000000000000000000000000000000"] {
        let o = run(&["keygen", "--seed", seed, "--pk", s(&pk), "--sk", s(&sk)]);
        assert_eq!(o.status.code(), Some(2));
    }
    assert!(!pk.exists());
}

#[test]
fn sign_verify_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let (pk, sk) = keys(dir.path(), "2");
    let msg = dir.path().join("msg");
    let sig = dir.path().join("sig");
    fs::write(&msg, b"attack at dawn").unwrap();
    let o = run(&["sign", "--sk", s(&sk), "--message", s(&msg), "--out", s(&sig)]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(fs::read(&sig).unwrap().len(), 2420);

    let o = run(&["verify", "--pk", s(&pk), "--message", s(&msg), "--sig", s(&sig)]);
    assert_eq!((o.status.code(), stdout(&o).trim()), (Some(0), "accept"));

    fs::write(&msg, b"attack at dusk").unwrap();
    let o = run(&["verify", "--pk", s(&pk), "--message", s(&msg), "--sig", s(&sig)]);
    assert_eq!((o.status.code(), stdout(&o).trim()), (Some(1), "reject"));
}

#[test]
fn truncated_signature_is_rejected_not_an_error() {
    let dir = tempfile::tempdir().unwrap();
    let (pk, sk) = keys(dir.path(), "2");
    let msg = dir.path().join("msg");
    let sig = dir.path().join("sig");
    fs::write(&msg, b"m").unwrap();
    run(&["sign", "--sk", s(&sk), "--message", s(&msg), "--out", s(&sig)]);
    let mut bytes = fs::read(&sig).unwrap();
    bytes.pop();
    fs::write(&sig, &bytes).unwrap();
    let o = run(&["verify", "--pk", s(&pk), "--message", s(&msg), "--sig", s(&sig)]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn backends_write_identical_signatures() {
    let dir = tempfile::tempdir().unwrap();
    for level in ["2", "3", "5"] {
        let (_, sk) = keys(dir.path(), level);
        let msg = dir.path().join("msg");
        fs::write(&msg, b"same bytes from every backend").unwrap();
        let sigs: Vec<Vec<u8>> = ["ntt", "sparse", "sparse-fused"]
            .iter()
            .map(|b| {
                let out = dir.path().join(format!("sig-{level}-{b}"));
                let o = run(&["sign", "--sk", s(&sk), "--message", s(&msg), "--out", s(&out), "--backend", b]);
                assert_eq!(o.status.code(), Some(0));
                fs::read(out).unwrap()
            })
            .collect();
        assert_eq!(sigs[0], sigs[1]);
        assert_eq!(sigs[0], sigs[2]);
    }
}

#[test]
fn hex_mode_roundtrips() {
    let dir = tempfile::tempdir().unwrap();
    let (pk, sk) = (dir.path().join("pk.hex"), dir.path().join("sk.hex"));
    let o = run(&["keygen", "--seed", ZERO_SEED, "--pk", s(&pk), "--sk", s(&sk), "--hex"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(fs::read_to_string(&pk).unwrap().trim().len(), 2 * 1312);
    let msg = dir.path().join("msg");
    let sig = dir.path().join("sig.hex");
    fs::write(&msg, b"hex").unwrap();
    let o = run(&["sign", "--sk", s(&sk), "--message", s(&msg), "--out", s(&sig), "--hex"]);
    assert_eq!(o.status.code(), Some(0));
    let o = run(&["verify", "--pk", s(&pk), "--message", s(&msg), "--sig", s(&sig), "--hex"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn selftest_passes_and_injected_faults_fail() {
    let o = run(&["selftest", "--trials", "50"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(!stdout(&o).contains("FAIL"));
    for (fault, oracle) in [
        ("branchless", "oracle-chain"),
        ("ntt", "oracle-chain"),
        ("swar", "swar-lanes"),
        ("codec", "codec"),
        ("hint", "rounding"),
    ] {
        let o = run(&["selftest", "--level", "2", "--trials", "20", "--inject-fault", fault]);
        assert_eq!(o.status.code(), Some(3), "{fault}");
        let out = stdout(&o);
        assert!(out.lines().any(|l| l.starts_with("FAIL") && l.contains(oracle)), "{fault}: {out}");
    }
}

#[test]
fn bench_csv_parses() {
    let o = run(&["bench", "--level", "2", "--iterations", "3", "--warmup", "0", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    let mut r = csv::Reader::from_reader(o.stdout.as_slice());
    let header = r.headers().unwrap().clone();
    assert_eq!(&header[1], "procedure");
    let rows: Vec<csv::StringRecord> = r.records().map(Result::unwrap).collect();
    let cs_modmul = |proc: &str, backend: &str| -> f64 {
        let row = rows.iter().find(|x| &x[1] == proc && &x[2] == backend).unwrap();
        row[8].parse().unwrap()
    };
    assert_eq!(rows.len(), 7);
    assert_eq!(cs_modmul("sign", "sparse-fused"), 0.0);
    assert!(cs_modmul("sign", "ntt") > 0.0);
}

#[test]
fn analyze_defaults_and_small_case() {
    let o = run(&["analyze"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("6.7063504115473"), "{out}");
    assert!(out.contains("1.716671249596"), "{out}");

    let o = run(&["analyze", "--eta", "1", "--tau", "2", "--bound", "2"]);
    let out = stdout(&o);
    // sums of two uniforms on {-1,0,1}: 1 2 3 2 1 out of 9
    assert!(out.contains("P(|u| > 2)                 0.0000000000000000e0"), "{out}");
    assert!(out.contains("P(|u| >= 2)                2.2222222222222221e-1"), "{out}");

    assert_eq!(run(&["analyze", "--eta", "0"]).status.code(), Some(2));
}
