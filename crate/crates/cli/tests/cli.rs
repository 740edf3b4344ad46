use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn uct(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_uct"))
        .args(args)
        .env_remove("UCTKIT_DEPTH_LIMIT")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn json(args: &[&str]) -> (Value, i32) {
    let mut all = vec!["--json"];
    all.extend_from_slice(args);
    let o = uct(&all);
    let v = serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", stdout(&o)));
    (v, o.status.code().unwrap())
}

fn write(name: &str, body: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("uctkit-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p
}

fn example(name: &str) -> PathBuf {
    let o = uct(&["examples", name]);
    assert!(o.status.success(), "{}", stderr(&o));
    write(&format!("{name}.json"), &stdout(&o))
}

#[test]
fn circle_homology_text() {
    let p = write("circle.json", r#"{"facets": [[0,1],[1,2],[0,2]]}"#);
    let p = p.to_str().unwrap();
    let o = uct(&["homology", "--complex", p, "--degree", "1"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "H_1 = Z");
    let o = uct(&["cohomology", "--complex", p, "--degree", "0", "--coeff", "Z/3"]);
    assert_eq!(stdout(&o).trim(), "H^0 = Z/3");
}

#[test]
fn cochain_complex_input() {
    // Z --2--> Z in degrees 0 → 1: H^1 = Z/2
    let p = write(
        "cochain.json",
        r#"{"orientation": "cochain", "degrees": {"0": 1, "1": 1}, "differentials": {"0": [[2]]}}"#,
    );
    let p = p.to_str().unwrap();
    let o = uct(&["cohomology", "--complex", p, "--degree", "1"]);
    assert_eq!(stdout(&o).trim(), "H^1 = Z/2", "{}", stderr(&o));
    let (v, code) = json(&["uct", "--complex", p, "--degree", "0", "--coeff", "Z/4"]);
    assert_eq!(code, 0);
    assert_eq!(v["ext_part"], "Z/2");
    assert_eq!(v["hom_part"], "0");
    assert_eq!(v["middle_is_sum"], true);
}

#[test]
fn named_surfaces() {
    let torus = example("torus");
    let (v, _) = json(&["homology", "--complex", torus.to_str().unwrap(), "--degree", "1", "--coeff", "Z/2"]);
    assert_eq!(v["homology"], "Z/2 + Z/2");
    let klein = example("klein");
    let (v, _) = json(&["cohomology", "--complex", klein.to_str().unwrap(), "--degree", "2"]);
    assert_eq!(v["cohomology"], "Z/2");
    let rp2 = example("rp2");
    let (v, code) = json(&["uct", "--complex", rp2.to_str().unwrap(), "--degree", "1", "--coeff", "Z/2"]);
    assert_eq!(code, 0);
    assert_eq!(v["middle"], "Z/2");
}

#[test]
fn solenoid_space_report() {
    let s = example("solenoid-2");
    let s = s.to_str().unwrap();
    let (v, code) = json(&["space-report", "--tower", s, "--degree", "0", "--depth", "6"]);
    assert_eq!(code, 0);
    assert_eq!(v["hom_part"]["lim"], "Z");
    assert_eq!(v["ext_part"]["lim1_hom"], "uncountable");
    assert_eq!(v["weak_part"]["lim"], "Z");
    assert_eq!(v["asymptotic_flag"], true);
    let (v, _) = json(&["space-report", "--tower", s, "--degree", "1"]);
    assert_eq!(v["hom_part"]["lim"], "0");
    assert_eq!(v["ext_part"]["lim_ext"], "0");
    assert_eq!(v["ext_part"]["lim1_hom"], "zero");
    assert_eq!(v["weak_part"]["lim"], "0");
}

#[test]
fn delta_pair_report() {
    let d = example("delta-pair");
    let (v, code) = json(&["space-report", "--tower", d.to_str().unwrap(), "--degree", "2"]);
    assert_eq!(code, 0);
    assert_eq!(v["pair"]["stages"][0]["relative"], "Z");
    assert_eq!(v["pair"]["stages"][0]["connecting_iso"], true);
}

#[test]
fn wedge_polyhedron_report() {
    let w = example("wedge-chain");
    let (v, code) = json(&["polyhedron-report", "--cofiltration", w.to_str().unwrap(), "--degree", "1"]);
    assert_eq!(code, 0);
    assert_eq!(v["colim"], "Z^4");
    assert_eq!(v["hom_part"], "Z^4");
}

#[test]
fn ext_verb() {
    let (v, code) = json(&["ext", "--group", "Z/4", "--coeff", "Z/6"]);
    assert_eq!(code, 0);
    assert_eq!(v["hom"], "Z/2");
    assert_eq!(v["ext"], "Z/2");
    assert_eq!(v["cocycles_match"], true);
    let (v, _) = json(&["ext", "--group", "Z+Z/3", "--coeff", "Z"]);
    assert_eq!(v["ext"], "Z/3");
    assert!(v.get("cocycles_match").is_none());
}

#[test]
fn verify_is_seeded_and_deterministic() {
    let (a, code) = json(&["verify", "--suite", "uct-random", "--count", "200"]);
    assert_eq!(code, 0);
    assert_eq!(a["seed"], 42);
    assert_eq!(a["passed"], 200);
    let (b, _) = json(&["verify", "--suite", "uct-random", "--count", "200", "--seed", "42"]);
    assert_eq!(a, b);
    for suite in ["simplicial-random", "naturality", "holim", "ext-cocycles"] {
        let (v, code) = json(&["verify", "--suite", suite, "--count", "40", "--seed", "7"]);
        assert_eq!(code, 0, "{suite}: {v}");
    }
    let o = uct(&["verify", "--count", "5"]);
    assert!(stdout(&o).contains("(seed 42)"));
}

#[test]
fn input_errors_exit_2_and_name_the_key() {
    let bad = write("bad-facets.json", r#"{"facets": [[0,1],"x"]}"#);
    let o = uct(&["homology", "--complex", bad.to_str().unwrap(), "--degree", "1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("facets"), "{}", stderr(&o));

    let circle = write("circle2.json", r#"{"facets": [[0,1],[1,2],[0,2]]}"#);
    let o = uct(&["homology", "--complex", circle.to_str().unwrap(), "--degree", "1", "--coeff", "Q"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("coeff"));

    let s = example("solenoid-2");
    let o = uct(&["space-report", "--tower", s.to_str().unwrap(), "--degree", "0", "--depth", "0"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("depth"));

    let o = uct(&["verify", "--suite", "nope"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("suite"));
}

#[test]
fn depth_limit_clamps() {
    let s = example("solenoid-2");
    let o = Command::new(env!("CARGO_BIN_EXE_uct"))
        .args(["--json", "space-report", "--tower", s.to_str().unwrap(), "--degree", "0", "--depth", "50"])
        .env("UCTKIT_DEPTH_LIMIT", "3")
        .output()
        .unwrap();
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["depth"], 3);
}

#[test]
fn examples_listing() {
    let (v, code) = json(&["examples"]);
    assert_eq!(code, 0);
    assert_eq!(v["examples"].as_array().unwrap().len(), 7);
    let o = uct(&["examples", "moebius"]);
    assert_eq!(o.status.code(), Some(2));
}
