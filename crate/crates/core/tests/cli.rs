use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use cubecvx::complex::{ComplexDescription, SubcomplexDescription};
use cubecvx::generators::{named, NamedExample};
use serde_json::Value;
use tempfile::TempDir;

fn cubecvx(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cubecvx")).args(args).env("CUBECVX_THREADS", "1").output().expect("binary runs")
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&o.stdout)))
}

fn write(dir: &TempDir, name: &str, v: &impl serde::Serialize) -> PathBuf {
    let p = dir.path().join(name);
    fs::write(&p, serde_json::to_string(v).unwrap()).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn sub_of(x: NamedExample, edges: &[[usize; 2]], parent: &str) -> SubcomplexDescription {
    let x = named(x);
    let cubes = edges.iter().map(|e| x.cube_by_vertices(e).expect("edge")).collect();
    SubcomplexDescription { parent: parent.into(), cubes }
}

#[test]
fn convexity_exit_codes() {
    let dir = TempDir::new().unwrap();
    let l = write(&dir, "lshape.json", &named(NamedExample::LShape).description());
    let reflex = write(&dir, "reflex_edges.json", &sub_of(NamedExample::LShape, &[[4, 5], [4, 7]], "lshape.json"));
    let o = cubecvx(&["check-convex", "--complex", s(&l), "--sub", s(&reflex)]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let v = json(&o);
    assert_eq!(v["result"]["claim"], "CONVEX");
    assert_eq!(v["config"]["command"], "check-convex");
    assert_eq!(v["config"]["inputs"].as_array().unwrap().len(), 2);

    let sq = write(&dir, "square.json", &named(NamedExample::Square).description());
    let two = write(&dir, "two_edges.json", &sub_of(NamedExample::Square, &[[0, 1], [0, 2]], "square.json"));
    let o = cubecvx(&["check-convex", "--complex", s(&sq), "--sub", s(&two)]);
    assert_eq!(o.status.code(), Some(1));
    let v = json(&o);
    assert_eq!(v["result"]["claim"], "NOT_CONVEX");
    let clc = &v["result"]["subreports"].as_array().unwrap().iter().find(|c| c["claim"] == "NOT_CLC").cloned();
    assert_eq!(clc.as_ref().unwrap()["witness"]["kind"], "NonFullSimplex");

    let o = cubecvx(&["check-clc", "--complex", s(&sq), "--sub", s(&two)]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(json(&o)["result"]["claim"], "NOT_CLC");
}

#[test]
fn broken_input_is_an_error() {
    let dir = TempDir::new().unwrap();
    // A square without its right edge.
    let broken = ComplexDescription {
        vertices: 4,
        cubes: vec![vec![0], vec![1], vec![2], vec![3], vec![0, 1], vec![2, 3], vec![0, 2], vec![0, 1, 2, 3]],
    };
    let p = write(&dir, "broken.json", &broken);
    let o = cubecvx(&["validate", s(&p)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("MissingFace"), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(o.stdout.is_empty());

    let o = cubecvx(&["validate", s(&dir.path().join("absent.json"))]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("Io"));

    let o = cubecvx(&["certify-npc"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn cat0_claims_and_preconditions() {
    let dir = TempDir::new().unwrap();
    let b = write(&dir, "boundary.json", &named(NamedExample::CubeBoundary).description());
    let o = cubecvx(&["certify-npc", "--complex", s(&b)]);
    assert_eq!(o.status.code(), Some(1));
    let v = json(&o);
    assert_eq!(v["result"]["witness"]["kind"], "EmptyClique");
    assert_eq!(v["result"]["witness"]["directions"].as_array().unwrap().len(), 3);

    let o = cubecvx(&["certify-cat0", "--complex", s(&b)]);
    assert_eq!(o.status.code(), Some(1));

    let w = write(&dir, "w.json", &sub_of(NamedExample::CubeBoundary, &[[0, 1]], "boundary.json"));
    let o = cubecvx(&["check-convex", "--complex", s(&b), "--sub", s(&w)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("PreconditionNotCAT0"));

    let ann = dir.path().join("annulus.json");
    let o = cubecvx(&["gen", "--kind", "annulus", "--squares", "4", "--out", s(&ann)]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(cubecvx(&["certify-npc", "--complex", s(&ann)]).status.code(), Some(0));
    let o = cubecvx(&["certify-cat0", "--complex", s(&ann)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(json(&o)["result"]["witness"]["kind"].as_str().is_some());
}

#[test]
fn output_is_reproducible() {
    let dir = TempDir::new().unwrap();
    let x = dir.path().join("x.json");
    let w = dir.path().join("w.json");
    let gen = |out: &Path, sub: &Path| {
        cubecvx(&[
            "gen", "--kind", "grid_region", "--dim", "3", "--cubes", "9", "--seed", "5", "--sub-fraction", "0.4",
            "--sub-out", s(sub), "--out", s(out),
        ])
    };
    assert_eq!(gen(&x, &w).status.code(), Some(0));
    let first = fs::read(&x).unwrap();
    let (x2, w2) = (dir.path().join("x2.json"), dir.path().join("w2.json"));
    gen(&x2, &w2);
    assert_eq!(first, fs::read(&x2).unwrap());
    let sub: SubcomplexDescription = serde_json::from_slice(&fs::read(&w).unwrap()).unwrap();
    assert_eq!(sub.parent, s(&x));

    let run = || cubecvx(&["check-convex", "--complex", s(&x), "--sub", s(&w)]).stdout;
    let a = run();
    assert!(!a.is_empty());
    assert_eq!(a, run());
    let v: Value = serde_json::from_slice(&a).unwrap();
    let sha = v["config"]["inputs"][0]["sha256"].as_str().unwrap();
    assert_eq!(sha.len(), 64);
    assert_eq!(v["result"]["input_sha"].as_str().unwrap().len(), 64);
}

#[test]
fn maximal_cube_subcomplex_is_closed_with_a_warning() {
    let dir = TempDir::new().unwrap();
    let l = named(NamedExample::LShape);
    let x = write(&dir, "lshape.json", &l.description());
    let top = l.cube_by_vertices(&[0, 1, 3, 4]).expect("square");
    let w = write(&dir, "w.json", &SubcomplexDescription { parent: "lshape.json".into(), cubes: vec![top] });
    let o = cubecvx(&["check-clc", "--complex", s(&x), "--sub", s(&w)]);
    assert_eq!(o.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&o.stderr).contains("closure"));
}

#[test]
fn geometry_commands() {
    let dir = TempDir::new().unwrap();
    let l = named(NamedExample::LShape);
    let x = write(&dir, "lshape.json", &l.description());
    let (a, b) = (l.vertex_cell(5), l.vertex_cell(7));
    let o = cubecvx(&["geodesic", "--complex", s(&x), "--from", &format!("{a}:"), "--to", &format!("{b}:"), "--h", "0.125"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let v = json(&o);
    assert!((v["result"]["length"].as_f64().unwrap() - 2.0).abs() < 1e-9);
    assert!(v["result"]["path"]["points"].as_array().unwrap().len() >= 3);

    let sq = named(NamedExample::Square);
    let sqf = write(&dir, "square.json", &sq.description());
    let top = sq.cube_by_vertices(&[0, 1, 2, 3]).unwrap();
    let o = cubecvx(&["geodesic", "--complex", s(&sqf), "--from", &format!("{top}:0,0"), "--to", &format!("{top}:1,0.5")]);
    let len = json(&o)["result"]["length"].as_f64().unwrap();
    assert!((len - 1.25f64.sqrt()).abs() < 1e-6, "{len}");
    let o = cubecvx(&["geodesic", "--complex", s(&sqf), "--from", &format!("{top}:0"), "--to", &format!("{top}:1,1")]);
    assert_eq!(o.status.code(), Some(2));

    let o = cubecvx(&["walls", "--complex", s(&x)]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    let walls = v["result"]["walls"].as_array().unwrap();
    assert_eq!(walls.len(), 4);
    assert!(walls.iter().all(|w| w["check"]["passed"] == true));

    let o = cubecvx(&["halfspaces", "--complex", s(&x), "--wall", "0"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["result"]["side_a"]["claim"], "CONVEX");
    assert_eq!(cubecvx(&["halfspaces", "--complex", s(&x), "--wall", "99"]).status.code(), Some(2));

    let o = cubecvx(&["link", "--complex", s(&x), "--vertex", "4"]);
    let v = json(&o);
    assert_eq!(v["result"]["link"]["vertices"].as_array().unwrap().len(), 4);
    assert_eq!(v["result"]["flag"], true);
}

#[test]
fn double_and_oracle_commands() {
    let dir = TempDir::new().unwrap();
    let x = write(&dir, "lshape.json", &named(NamedExample::LShape).description());
    let reflex = write(&dir, "reflex.json", &sub_of(NamedExample::LShape, &[[4, 5], [4, 7]], "lshape.json"));
    let out = dir.path().join("double.json");
    let o = cubecvx(&["double", "--complex", s(&x), "--sub", s(&reflex), "--complex-out", s(&out)]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let v = json(&o);
    assert_eq!(v["result"]["report"]["agrees"], true);
    assert_eq!(v["result"]["simple"], true);
    assert_eq!(cubecvx(&["certify-cat0", "--complex", s(&out)]).status.code(), Some(0));

    let sq = write(&dir, "square.json", &named(NamedExample::Square).description());
    let two = write(&dir, "two.json", &sub_of(NamedExample::Square, &[[0, 1], [0, 2]], "square.json"));
    let o = cubecvx(&["double", "--complex", s(&sq), "--sub", s(&two)]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(json(&o)["result"]["report"]["agrees"], true);

    let o = cubecvx(&["verify-oracle", "--complex", s(&x), "--sub", s(&reflex), "--samples", "30"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["result"]["violations"], 0);
}

#[test]
fn small_suite_run() {
    let o = cubecvx(&["suite", "--instances", "6"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stdout));
    let v = json(&o);
    assert_eq!(v["result"]["criteria"].as_array().unwrap().len(), 7);
    assert_eq!(v["config"]["parameters"]["instances"], 6);
}
