use amdft::cli::run;

fn amdft(args: &[&str]) -> (i32, String, String) {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let argv = std::iter::once("amdft").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

#[test]
fn exit_codes() {
    let (code, _, err) = amdft(&["plan", "11"]);
    assert_eq!(code, 2);
    assert!(err.contains("13"), "{err}");
    assert_eq!(amdft(&["plan", "24", "--policy", "fastest"]).0, 2);
    assert_eq!(amdft(&["frobnicate"]).0, 2);
    assert_eq!(amdft(&["run", "--n", "24"]).0, 2);
    assert_eq!(amdft(&["run", "--n", "24", "--input", "/no/such/file"]).0, 4);
    assert_eq!(amdft(&["--help"]).0, 0);
}

#[test]
fn verify_reports_json() {
    let (code, out, _) = amdft(&["verify", "240", "--trials", "5"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["N"], 240);
    assert_eq!(v["pass"], true);
}

#[test]
fn bound_and_count() {
    assert_eq!(amdft(&["bound", "65520"]), (0, "217556\n".into(), String::new()));
    let (code, out, _) = amdft(&["count", "24", "48", "120", "--table1"]);
    assert_eq!(code, 0);
    let rows: Vec<&str> = out.lines().skip(1).collect();
    assert_eq!(rows.len(), 3);
    assert!(rows.iter().all(|r| r.ends_with(',')), "{out}");
    assert!(rows[0].starts_with("24,8x3,36,252,42,262,-5.26"));

    let (code, out, _) = amdft(&["count", "11", "24", "--format", "json"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 2);
    assert_eq!(amdft(&["count", "11"]).0, 2);
}

#[test]
fn fig1_frontier() {
    let (code, out, _) = amdft(&["primes", "--fig1", "--rank", "10"]);
    assert_eq!(code, 0);
    assert!(out.contains("frontier u=10: 4 primes: 472393 18433 1492993 120932353"), "{out}");
    assert_eq!(amdft(&["primes", "--rank", "65"]).0, 2);
}

#[test]
fn files_and_documents() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let doc = format!("{d}/p.json");
    let (code, out, _) = amdft(&["plan", "120", "--out", &doc]);
    assert_eq!(code, 0);
    assert!(out.starts_with("N=120 factors=8x3x5"));

    let sig = format!("{d}/y.txt");
    assert_eq!(amdft(&["run", "--plan", &doc, "--seed", "4", "--threads", "3", "--output", &sig]).0, 0);
    let (_, direct, _) = amdft(&["run", "--n", "120", "--seed", "4"]);
    assert_eq!(std::fs::read_to_string(&sig).unwrap(), direct);
    assert_eq!(amdft(&["verify", "--plan", &doc, "--input", &sig]).0, 0);
    assert_eq!(amdft(&["verify", "--plan", &doc, "--input", &sig, "--trials", "3"]).0, 2);
    assert_eq!(amdft(&["run", "--n", "24", "--input", &sig]).0, 2);
    assert_eq!(amdft(&["run", "--n", "120", "--seed", "1", "--output", &format!("{d}/missing/y.txt")]).0, 4);

    let text = std::fs::read_to_string(&doc).unwrap().replacen("\"moduli\"", "\"mod\"", 1);
    std::fs::write(&doc, text).unwrap();
    let (code, _, err) = amdft(&["run", "--plan", &doc, "--seed", "1"]);
    assert_eq!(code, 2);
    assert!(err.contains("blocks[0]"), "{err}");

    let (code, _, _) = amdft(&["nmax", "--rank", "8", "--no-cache", "--out-dir", d]);
    assert_eq!(code, 0);
    let csv = std::fs::read_to_string(format!("{d}/nmax_q23.csv")).unwrap();
    assert_eq!(csv.lines().count(), 10);
    assert_eq!(amdft(&["primes", "--rank", "3", "--no-cache", "--out-dir", d]).0, 0);
    assert!(std::path::Path::new(&format!("{d}/primes_q23.csv")).exists());
}
