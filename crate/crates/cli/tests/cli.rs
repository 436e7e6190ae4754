use std::path::Path;
use std::process::{Command, Output};

use gapscope_core::exponent::{builtin_ledger, MUTATION_TARGETS};
use num_rational::BigRational;

fn gapscope(args: &[&str], out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gapscope"))
        .args(args)
        .arg("--out")
        .arg(out)
        .env_remove("GAPSCOPE_THREADS")
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn read(dir: &Path, name: &str) -> String {
    std::fs::read_to_string(dir.join(name)).unwrap()
}

#[test]
fn gaps_table() {
    let d = tempfile::tempdir().unwrap();
    let o = gapscope(&["gaps", "--limits", "10,100,1000"], d.path());
    assert_eq!(o.status.code(), Some(0));
    let csv = read(d.path(), "gaps.csv");
    assert_eq!(csv.lines().count(), 4);
    assert!(csv.contains("\n10,4,7,0.6,25,"));
    let o = gapscope(&["gaps", "--limits", "1e6"], d.path());
    assert_eq!(o.status.code(), Some(0));
    assert!(read(d.path(), "gaps.csv").contains("\n1000000,114,492113,0.34,"));
    let json: serde_json::Value = serde_json::from_str(&read(d.path(), "gaps.json")).unwrap();
    assert_eq!(json[0]["max_gap"], 114);
}

#[test]
fn exit_codes() {
    let d = tempfile::tempdir().unwrap();
    let o = gapscope(&["gaps", "--limits", "1e12"], d.path());
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("--allow-large"));
    assert_eq!(gapscope(&["gaps", "--limits", "abc"], d.path()).status.code(), Some(1));
    assert_eq!(gapscope(&["gaps", "--limits", "100,10"], d.path()).status.code(), Some(1));
    assert_eq!(gapscope(&["frobnicate"], d.path()).status.code(), Some(1));
    assert_eq!(gapscope(&["optimize-nu", "--res", "1/32"], d.path()).status.code(), Some(1));
    assert_eq!(gapscope(&["identity", "--x", "0"], d.path()).status.code(), Some(1));
    assert_eq!(gapscope(&["perron", "--y", "2"], d.path()).status.code(), Some(1));
    assert_eq!(gapscope(&["--help"], d.path()).status.code(), Some(0));
}

#[test]
fn verify_builtin_and_mutated() {
    let d = tempfile::tempdir().unwrap();
    let o = gapscope(&["verify"], d.path());
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("63 claims, 63 hold, 0 fail"));

    let delta = BigRational::new(1.into(), 100.into());
    let text: String = builtin_ledger()
        .iter()
        .map(|c| if MUTATION_TARGETS.contains(&c.id.as_str()) { c.mutated(&delta) } else { c.clone() })
        .map(|c| c.to_line() + "\n")
        .collect();
    let path = d.path().join("mutated.txt");
    std::fs::write(&path, text).unwrap();
    let o = gapscope(&["verify", "--ledger", path.to_str().unwrap()], d.path());
    assert_eq!(o.status.code(), Some(3));
    let s = stdout(&o);
    assert_eq!(s.lines().filter(|l| l.starts_with("FAIL ")).count(), 5);
    assert!(s.contains("FAIL low.hb~1/100: σ = "));
    let v: serde_json::Value = serde_json::from_str(&read(d.path(), "verify.json")).unwrap();
    let fails: Vec<_> = v.as_array().unwrap().iter().filter(|c| c["holds"] == false).collect();
    assert!(fails.iter().all(|c| c["certificate"]["kind"] == "counterexample"));
}

#[test]
fn optimize_nu_prints_quarter() {
    let d = tempfile::tempdir().unwrap();
    let o = gapscope(&["optimize-nu", "--res", "1/64", "--grid"], d.path());
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.contains("nu* = 1/4 (0.25)"), "{s}");
    assert!(s.contains("argmax sigma = 3/4, mu = 155/96"));
    assert_eq!(read(d.path(), "nu_grid.csv").lines().count(), 1 + 33 * 51);
}

#[test]
fn literal_forms() {
    let d = tempfile::tempdir().unwrap();
    let o = gapscope(&["perron", "--y", "201/2", "--tau", "9/4", "--factors", "unit:6", "--doublings", "0"], d.path());
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_str(&read(d.path(), "perron.json")).unwrap();
    assert_eq!(v["y"].to_string(), "100.5");
    assert_eq!(v["tau"].to_string(), "2.25");
}

#[test]
fn reruns_are_byte_identical() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let runs: [&[&str]; 4] = [
        &["gaps", "--limits", "1e3,1e5"],
        &["identity", "--x", "200", "--k", "3"],
        &["largevalues", "--t", "100,250"],
        &["perron", "--y", "300.5", "--tau", "6", "--factors", "log:8"],
    ];
    for args in runs {
        let mut one = args.to_vec();
        one.extend(["--threads", "1"]);
        let mut four = args.to_vec();
        four.extend(["--threads", "4"]);
        assert_eq!(gapscope(&one, a.path()).status.code(), Some(0));
        assert_eq!(gapscope(&four, b.path()).status.code(), Some(0));
    }
    let mut n = 0;
    for e in std::fs::read_dir(a.path()).unwrap() {
        let name = e.unwrap().file_name().into_string().unwrap();
        if name.ends_with(".manifest") {
            continue;
        }
        assert_eq!(read(a.path(), &name), read(b.path(), &name), "{name}");
        n += 1;
    }
    assert_eq!(n, 7);
}

#[test]
fn manifest_reproduces_run() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let o = gapscope(&["identity", "--x", "120", "--k", "2"], a.path());
    assert_eq!(o.status.code(), Some(0));
    let m = read(a.path(), "identity.manifest");
    assert!(m.contains("command=identity\n") && m.contains("x=120\n") && m.contains("k=2\n"));
    assert!(m.contains("# output: identity.json"));
    let cfg = a.path().join("identity.manifest");
    let o = gapscope(&["identity", "--config", cfg.to_str().unwrap()], b.path());
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(read(a.path(), "identity.json"), read(b.path(), "identity.json"));
    // flags override the file; a manifest for another command is refused
    let o = gapscope(&["identity", "--config", cfg.to_str().unwrap(), "--x", "60"], b.path());
    assert!(stdout(&o).starts_with("x=60 "));
    let o = gapscope(&["gaps", "--config", cfg.to_str().unwrap()], b.path());
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn config_file_keys() {
    let d = tempfile::tempdir().unwrap();
    let cfg = d.path().join("run.cfg");
    std::fs::write(&cfg, "# gap run\nlimits = 1e2, 1e4\n\n").unwrap();
    let o = gapscope(&["gaps", "--config", cfg.to_str().unwrap()], d.path());
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(read(d.path(), "gaps.csv").lines().count(), 3);
    std::fs::write(&cfg, "limit=100\n").unwrap();
    assert_eq!(gapscope(&["gaps", "--config", cfg.to_str().unwrap()], d.path()).status.code(), Some(1));
    std::fs::write(&cfg, "limits\n").unwrap();
    assert_eq!(gapscope(&["gaps", "--config", cfg.to_str().unwrap()], d.path()).status.code(), Some(1));
}

#[test]
fn thread_env_overrides_flag() {
    let d = tempfile::tempdir().unwrap();
    let run = |env: &str| {
        Command::new(env!("CARGO_BIN_EXE_gapscope"))
            .args(["gaps", "--limits", "100", "--threads", "1", "--out"])
            .arg(d.path())
            .env("GAPSCOPE_THREADS", env)
            .output()
            .unwrap()
    };
    assert_eq!(run("3").status.code(), Some(0));
    assert!(read(d.path(), "gaps.manifest").contains("threads=3\n"));
    assert_eq!(run("zero").status.code(), Some(1));
}

#[test]
fn report_bundles_outputs() {
    let d = tempfile::tempdir().unwrap();
    gapscope(&["gaps", "--limits", "100"], d.path());
    gapscope(&["identity"], d.path());
    let o = gapscope(&["report"], d.path());
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&read(d.path(), "report.json")).unwrap();
    assert_eq!(v["gaps"][0]["max_gap"], 8);
    assert_eq!(v["identity"]["pass"], true);
}
