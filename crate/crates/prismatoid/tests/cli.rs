//! End-to-end tests of the command-line interface: exit codes, pinned output
//! lines, stderr warnings, and byte-stable reruns under a fixed seed.

use std::path::PathBuf;
use std::process::Command;

fn data(name: &str) -> String {
    format!("{}/../../data/{name}.prism", env!("CARGO_MANIFEST_DIR"))
}

fn tmp(name: &str) -> String {
    let mut p = PathBuf::from(std::env::temp_dir());
    p.push(format!("prismatoid-cli-{}-{name}", std::process::id()));
    p.to_string_lossy().into_owned()
}

/// Runs the binary and returns (exit code, stdout, stderr).
fn run(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_prismatoid"))
        .args(args)
        .output()
        .expect("binary runs");
    (
        out.status.code().expect("no signal"),
        String::from_utf8(out.stdout).expect("utf-8 stdout"),
        String::from_utf8(out.stderr).expect("utf-8 stderr"),
    )
}

#[test]
fn verify_accepts_the_corpus() {
    let (code, stdout, stderr) = run(&["verify", &data("p1039")]);
    assert_eq!(code, 0, "stderr: {stderr}");
    assert!(stdout.contains("valid prismatoid: d=5 dim=4 vertices=14 facets=92"));
    assert!(stdout.contains("valid=true"));
    assert!(stdout.contains("width=6"));
    assert!(stdout.contains("non_dstep=true"));
    assert!(stdout.contains("certificate=width-exceeds"));

    let (code, stdout, _) = run(&["verify", &data("ann6")]);
    assert_eq!(code, 0);
    assert!(stdout.contains("non_dstep=false"));
    assert!(stdout.contains("certificate=d-step"));
}

#[test]
fn verify_warns_about_duplicate_facets_on_stderr() {
    let path = tmp("dup.prism");
    let text = "PRISMATOID v1\ndim 2\nbase+ 1 2 3\nbase- a b c\n\
                facet 1 2 a\nfacet 2 3 b\nfacet 1 3 c\nfacet 2 a b\n\
                facet 3 b c\nfacet 1 a c\nfacet 1 2 a\n";
    std::fs::write(&path, text).unwrap();
    let (code, stdout, stderr) = run(&["verify", &path]);
    assert_eq!(code, 0, "duplicates are a warning, not an error");
    assert!(stdout.contains("valid=true"));
    assert!(stderr.contains("duplicate facet `1 2 a` ignored"));
    std::fs::remove_file(&path).ok();
}

#[test]
fn verify_failures_exit_two() {
    let (code, stdout, stderr) = run(&["verify", &data("does-not-exist")]);
    assert_eq!(code, 2);
    assert!(stdout.is_empty());
    assert!(stderr.starts_with("error:"));

    let path = tmp("bad.prism");
    std::fs::write(&path, "PRISMATOID v1\ndim 2\nbase+ 1 2 3\n").unwrap();
    let (code, _, stderr) = run(&["verify", &path]);
    assert_eq!(code, 2);
    assert!(stderr.starts_with("error:"));
    std::fs::remove_file(&path).ok();
}

#[test]
fn stats_prints_pinned_summary() {
    let (code, stdout, _) = run(&["stats", &data("p1039")]);
    assert_eq!(code, 0);
    assert!(stdout.contains("f-vector (14,85,220,241,92)"));
    assert!(stdout.contains("f_vector=14,85,220,241,92"));
    assert!(stdout.contains("layers=11,35,35,11"));
    assert!(stdout.contains("width=6"));
    assert!(stdout.contains("excess=1/9"));

    let (code, stdout, _) = run(&["stats", &data("p2669")]);
    assert_eq!(code, 0);
    assert!(stdout.contains("layers=11,34,36,11"));
}

#[test]
fn pattern_prints_reduced_graph() {
    let (code, stdout, _) = run(&["pattern", &data("p1963")]);
    assert_eq!(code, 0);
    assert!(stdout.contains("pattern on 7+7 vertices, 40 arcs"));
    assert!(stdout.contains("reduced: 4+4 nodes, 16 arcs, 0 two-cycles"));
    assert!(stdout.contains(
        "reduced_arcs=3>d 3>e 4>e 4>f 5>f 5>g 6>d 6>g d>4 d>5 e>5 e>6 f>3 f>6 g>3 g>4"
    ));
    assert!(stdout.contains("two_cycles=\n"));

    let (code, stdout, _) = run(&["pattern", &data("ann6")]);
    assert_eq!(code, 0);
    assert!(stdout.contains("two_cycles=1<>a 1<>c 2<>a 2<>b 3<>b 3<>c"));
}

#[test]
fn shell_check_reports_both_directions() {
    let (code, stdout, _) = run(&["shell-check", &data("p1963"), "--direction", "both"]);
    assert_eq!(code, 0);
    assert!(stdout.contains("from plus: shelling of all 92 facets"));
    assert!(stdout.contains("ok_plus=true"));
    assert!(stdout.contains("shellable=true"));

    let (code, stdout, _) = run(&["shell-check", &data("p1039"), "--direction", "both"]);
    assert_eq!(code, 1, "printed order of p1039 is not a shelling");
    assert!(stdout.contains("failing_step_plus=17"));
    assert!(stdout.contains("failing_step_minus=0"));
    assert!(stdout.contains("shellable=false"));
}

#[test]
fn iso_distinguishes_tables() {
    let (code, stdout, _) = run(&["iso", &data("p1963"), &data("p3513")]);
    assert_eq!(code, 1);
    assert!(stdout.contains("isomorphic=false"));

    let (code, stdout, _) = run(&["iso", &data("p1039"), &data("p1039")]);
    assert_eq!(code, 0);
    assert!(stdout.contains("isomorphic=true"));
    assert!(stdout.contains("map="));
}

#[test]
fn diameter_of_small_sphere() {
    let (code, stdout, _) = run(&["diameter", &data("ann6")]);
    assert_eq!(code, 0);
    assert!(stdout.contains("dual diameter 3 over 6 facets"));
    assert!(stdout.contains("connected=true"));
}

#[test]
fn dstep_distinguishes_hirsch_outcomes() {
    // The octahedron-like annulus stays within its bound: exit 1.
    let (code, stdout, _) = run(&["dstep", &data("ann6")]);
    assert_eq!(code, 1);
    assert!(stdout.contains("non_hirsch=false"));
    assert!(stdout.contains("distance=3"));

    // A table input produces the 18-vertex certificate: exit 0.
    let cert = tmp("cert.txt");
    let sphere = tmp("sphere.cplx");
    let (code, stdout, _) = run(&[
        "dstep",
        &data("p1039"),
        "--certificate",
        &cert,
        "--sphere",
        &sphere,
    ]);
    assert_eq!(code, 0);
    assert!(stdout.contains("N=18"));
    assert!(stdout.contains("dim=8"));
    assert!(stdout.contains("facets=474"));
    assert!(stdout.contains("distance=10"));
    assert!(stdout.contains("hirsch_bound=9"));
    assert!(stdout.contains("non_hirsch=true"));
    let cert_text = std::fs::read_to_string(&cert).unwrap();
    assert!(cert_text.contains("start vertices=14 width=6"));
    assert!(cert_text.contains("step 4:"));
    assert!(cert_text.contains("final N=18 dim=8 facets=474"));
    let sphere_text = std::fs::read_to_string(&sphere).unwrap();
    assert!(sphere_text.starts_with("COMPLEX v1\ndim 8\n"));
    std::fs::remove_file(&cert).ok();
    std::fs::remove_file(&sphere).ok();
}

#[test]
fn anneal_is_reproducible_under_a_fixed_seed() {
    let args = [
        "anneal",
        &data("ann6"),
        "--seed",
        "7",
        "--iters",
        "300",
        "--chains",
        "2",
        "--min-width",
        "3",
        "--max-vertices",
        "8",
    ];
    let (code_a, out_a, _) = run(&args);
    let (code_b, out_b, _) = run(&args);
    assert_eq!(code_a, 0);
    assert_eq!(code_b, 0);
    assert_eq!(out_a, out_b, "same seed must give byte-identical output");
    assert!(out_a.contains("accepted=300,300"), "chains did no work");
    assert!(out_a.contains("best_seed="));
}

#[test]
fn anneal_trace_replays_to_the_same_state() {
    let trace = tmp("run.trace");
    let out = tmp("annealed.prism");
    let replayed = tmp("replayed.prism");
    let (code, _, _) = run(&[
        "anneal",
        &data("ann6"),
        "--seed",
        "11",
        "--iters",
        "200",
        "--min-width",
        "3",
        "--max-vertices",
        "8",
        "--trace",
        &trace,
        "--out",
        &out,
    ]);
    assert_eq!(code, 0);
    let (code, stdout, _) = run(&["replay", &data("ann6"), &trace, "--out", &replayed]);
    assert_eq!(code, 0, "replay rejected its own trace: {stdout}");
    let direct = std::fs::read_to_string(&out).unwrap();
    let rerun = std::fs::read_to_string(&replayed).unwrap();
    assert_eq!(direct, rerun, "replayed state differs from the annealed state");
    for f in [&trace, &out, &replayed] {
        std::fs::remove_file(f).ok();
    }
}

#[test]
fn inflate_writes_a_larger_valid_prismatoid() {
    let out = tmp("inflated.prism");
    let (code, stdout, _) = run(&[
        "inflate",
        &data("ann6"),
        "--seed",
        "3",
        "--steps",
        "2",
        "--min-width",
        "3",
        "--out",
        &out,
    ]);
    assert_eq!(code, 0);
    assert!(stdout.contains("vertices=8"));
    assert!(stdout.contains("applied=2"));
    let (code, stdout, _) = run(&["verify", &out]);
    assert_eq!(code, 0, "inflated output fails verification");
    assert!(stdout.contains("valid=true"));
    std::fs::remove_file(&out).ok();
}
