use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn cgd(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cgd")).args(args).output().unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn gen_line(dir: &Path, name: &str, states: &str) -> String {
    let path = dir.join(name);
    let n = states.split(',').count().to_string();
    let out = cgd(&["gen", "--family", "line", "--n", &n, "--states", states, "--out", path.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    path.to_str().unwrap().to_string()
}

#[test]
fn gen_writes_canonical_documents() {
    let dir = tempfile::tempdir().unwrap();
    let path = gen_line(dir.path(), "line.cgd", "1,0,0,1,1");
    let text = fs::read_to_string(path).unwrap();
    assert!(text.starts_with("degree 2\n"));
    assert_eq!(text.lines().filter(|l| l.starts_with("vertex")).count(), 5);
    assert!(text.contains("edge v0:2 -> v1:1 e"));

    let cycle = dir.path().join("cycle.cgd");
    let out = cgd(&["gen", "--family", "cycle", "--n", "3", "--out", cycle.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    assert!(fs::read_to_string(cycle).unwrap().contains("edge v2:2 -> v0:1 e"));
}

#[test]
fn run_writes_each_step_and_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("seed.cgd");
    fs::write(&input, "degree 4\nvertex s 0\n").unwrap();
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    for out in [&a, &b] {
        let o = cgd(&[
            "run", "--rule", "grid", "--input", input.to_str().unwrap(), "--steps", "2", "--out",
            out.to_str().unwrap(), "--dot", "--seed", "9",
        ]);
        assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
        assert!(stdout(&o).contains("step 2: 16 vertices"));
    }
    for k in 0..=2 {
        for ext in ["cgd", "dot"] {
            let name = format!("step_{k}.{ext}");
            assert_eq!(fs::read(a.join(&name)).unwrap(), fs::read(b.join(&name)).unwrap(), "{name}");
        }
    }
    let dot = fs::read_to_string(a.join("step_2.dot")).unwrap();
    assert_eq!(dot.lines().filter(|l| l.contains("[label=")).filter(|l| !l.contains("->")).count(), 16);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let line = gen_line(dir.path(), "l.cgd", "0,1");
    let out_dir = dir.path().join("o");
    let out_dir = out_dir.to_str().unwrap();

    let bad_rule = cgd(&["run", "--rule", "nope", "--input", &line, "--steps", "1", "--out", out_dir]);
    assert_eq!(code(&bad_rule), 2);

    let bad_doc = dir.path().join("bad.cgd");
    fs::write(&bad_doc, "vertex a 0\nedge a:1 -> \n").unwrap();
    let parse = cgd(&["run", "--rule", "xor-ca", "--input", bad_doc.to_str().unwrap(), "--steps", "1", "--out", out_dir]);
    assert_eq!(code(&parse), 2);
    assert!(String::from_utf8_lossy(&parse.stderr).contains("line 2"));

    let missing_flag = cgd(&["run", "--rule", "xor-ca"]);
    assert_eq!(code(&missing_flag), 2);

    let engine = cgd(&["run", "--rule", "mutant-boundary-conflict", "--input", &line, "--steps", "1", "--out", out_dir]);
    assert_eq!(code(&engine), 3);
    assert!(String::from_utf8_lossy(&engine.stderr).contains("inconsistent"));

    let failing = cgd(&["verify", "--rule", "mutant-constant-name", "--properties", "dynamics", "--samples", "100", "--seed", "1"]);
    assert_eq!(code(&failing), 1);
    assert!(stdout(&failing).contains("witness disk 1"));

    let too_big = cgd(&["verify", "--rule", "grid", "--properties", "local", "--samples", "1", "--seed", "1", "--space", "n=4"]);
    assert_eq!(code(&too_big), 2);
}

#[test]
fn compose_and_lift_checks() {
    let dir = tempfile::tempdir().unwrap();
    let line = gen_line(dir.path(), "l.cgd", "1,1,0,1");
    let out = cgd(&["compose", "--rule1", "xor-ca", "--rule2", "identity", "--input", &line, "--check-extensional"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("extensional: PASS (composed radius 1)"));

    let plain = cgd(&["compose", "--rule1", "xor-ca", "--rule2", "xor-ca", "--input", &line]);
    assert_eq!(code(&plain), 0);
    assert!(stdout(&plain).contains("vertex v0.0.0 1"));

    let mismatch = cgd(&["compose", "--rule1", "xor-ca", "--rule2", "grid", "--input", &line]);
    assert_eq!(code(&mismatch), 2);

    let lift = cgd(&["lift", "--rule", "xor-ca", "--l", "1", "--input", &line, "--check"]);
    assert_eq!(code(&lift), 0);
    assert!(stdout(&lift).contains("lift: PASS (l=1 degree=6 steps=2)"));

    let l0 = cgd(&["lift", "--rule", "xor-ca", "--l", "0", "--input", &line]);
    assert_eq!(code(&l0), 0);
    assert!(stdout(&l0).contains("degree 2"));
}

#[test]
fn verify_reports_json() {
    let out = cgd(&[
        "verify", "--rule", "state-perm/map=0:1,1:0", "--properties", "invertibility", "--samples", "10", "--seed",
        "3", "--format", "json",
    ]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    let records: Vec<&str> = text.lines().collect();
    assert_eq!(records.len(), 2);
    assert!(records[0].contains("\"property\":\"invertibility\""));
    assert!(records[1].contains("\"radius\":0"));
}
