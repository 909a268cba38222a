use std::process::{Command, Output};

fn khl(args: &[&str], cache: Option<&std::path::Path>) -> Output {
    let mut c = Command::new(env!("CARGO_BIN_EXE_khl"));
    c.args(args).env_remove("KHL_CACHE_DIR");
    if let Some(dir) = cache {
        c.env("KHL_CACHE_DIR", dir);
    }
    c.output().unwrap()
}

fn stdout(args: &[&str]) -> String {
    let out = khl(args, None);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn fixture_path(name: &str) -> String {
    format!("{}/../core/fixtures/{name}", env!("CARGO_MANIFEST_DIR"))
}

#[test]
fn kh_on_expressions_and_files() {
    // over F2 the 2-torsion of the integral theory shows up at q^7
    assert_eq!(stdout(&["kh", "torus(2,3)", "--field", "f2"]).trim(), "q + q^3 + q^5*t^2 + q^7*t^2 + q^7*t^3 + q^9*t^3");
    assert_eq!(stdout(&["kh", "torus(2,3)", "--field", "q"]).trim(), "q + q^3 + q^5*t^2 + q^9*t^3");
    assert_eq!(stdout(&["kh", "unknot"]).trim(), "q^-1 + q");
    let dir = std::env::temp_dir().join(format!("khl-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let file = dir.join("trefoil.pd");
    std::fs::write(&file, "PD[X(4,2,5,1),X(6,4,1,3),X(2,6,3,5)]\n").unwrap();
    assert_eq!(stdout(&["kh", file.to_str().unwrap()]).trim(), "q + q^3 + q^5*t^2 + q^9*t^3");
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn s_and_tau() {
    assert_eq!(stdout(&["s", "mirror(torus(2,5))"]).trim(), "s = -4");
    assert_eq!(stdout(&["tau", &fixture_path("t27.11")]).trim(), format!("tau = 3 (cfk:{})", fixture_path("t27.11")));
    assert_eq!(stdout(&["tau", "d6-cfk"]).trim(), "tau = 0 (cfk:d6-cfk)");
    assert_eq!(stdout(&["tau", "double(torus(2,5), t=3, clasp=+)"]).trim(), "tau = 1 (skein)");
    assert_eq!(stdout(&["tau", "double(torus(2,5), t=4, clasp=+)"]).trim(), "tau = 0 (skein)");
}

#[test]
fn hfk_tables() {
    let fig8 = stdout(&["hfk", &fixture_path("fig8.11")]);
    assert_eq!(fig8.trim(), "A=1: F^1_(1)\nA=0: F^3_(0)\nA=-1: F^1_(-1)");
    let d6 = stdout(&["hfk", &fixture_path("d6.cfk")]);
    assert_eq!(d6, stdout(&["hfk", "d6-cfk"]));
    assert!(stdout(&["hfk", "hopf-hfk"]).starts_with("# Maslov gradings doubled"));
    let json: serde_json::Value = serde_json::from_str(&stdout(&["hfk", "kstart-2", "--json"])).unwrap();
    assert_eq!(json["results"]["hfk"]["source"], "kstart-2");
}

#[test]
fn skein_json() {
    let v: serde_json::Value = serde_json::from_str(&stdout(&["skein", "--n", "3", "--json"])).unwrap();
    assert_eq!(v["t_tau"], 5);
    assert_eq!(v["input"]["t_start"], 14);
}

#[test]
fn report_uses_the_cache() {
    let dir = std::env::temp_dir().join(format!("khl-cli-cache-{}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    let args = ["report", "torus(2,5)", "--tasks", "kh,s,hfk,tau"];
    let a = khl(&args, Some(&dir));
    assert!(a.status.success());
    assert_eq!(std::fs::read_dir(&dir).unwrap().count(), 1);
    let b = khl(&args, Some(&dir));
    // the second run is served from the cache, timings included
    assert_eq!(a.stdout, b.stdout);
    let v: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["results"]["headline"], "s = 4, tau = 2 (cfk:t25-11): s = 2*tau");
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn errors_are_reported() {
    for args in [
        &["kh", "torus(2,"][..],
        &["hfk", "torus(2,9)"],
        &["report", "torus(2,3)", "--tasks", "skein"],
        &["report", "torus(2,3)", "--tasks", "bogus"],
        &["skein", "--n", "0"],
        &["kh", "unknot", "--field", "z5"],
        &["kh", "double(torus(2,5), t=5, clasp=+)", "--max-generators", "10"],
    ] {
        let out = khl(args, None);
        assert!(!out.status.success(), "{args:?} should fail");
        assert!(!out.stderr.is_empty());
    }
}
