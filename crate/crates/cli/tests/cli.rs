use std::fs;
use std::path::PathBuf;

use coalg::format::{parse_system, render_system};
use coalg_cli::{run_command, EXIT_HOLDS, EXIT_INVALID, EXIT_REFUTED, EXIT_USAGE};
use tempfile::TempDir;

const SX1: &str = "system sx1 mts\nstate x\nstate x1\ntrans x a x1\nend\n";
const SY1: &str = "system sy1 mts\nstate y\nstate y1\nstate y2\ntrans y a y1\ntrans y a y2\nend\n";
const PA: &str = "system pa pmts\nstate x\ntrans x a x p=1\nend\n";
const PB: &str = "system pb pmts\nstate y\ntrans y a y count=2 p=1/2\nend\n";
const R_XY: &str = "pair x y\npair x1 y1\npair x1 y2\n";

struct Dir(TempDir);

impl Dir {
    fn new() -> Dir {
        Dir(tempfile::tempdir().unwrap())
    }

    fn file(&self, name: &str, text: &str) -> String {
        let p: PathBuf = self.0.path().join(name);
        fs::write(&p, text).unwrap();
        p.to_string_lossy().into_owned()
    }
}

fn run(args: &[&str]) -> (i32, String) {
    run_command(std::iter::once("coalg").chain(args.iter().copied()))
}

#[test]
fn kernel_support_simulation_holds() {
    let d = Dir::new();
    let (a, b, r) = (d.file("sx1.mts", SX1), d.file("sy1.mts", SY1), d.file("r.rel", R_XY));
    let (code, out) = run(&["check", "sim", "--sys1", &a, "--sys2", &b, "--rel", &r, "--order", "kernel-support"]);
    assert_eq!(code, EXIT_HOLDS, "{out}");
    let (code, out) = run(&["check", "sim", "--sys1", &a, "--sys2", &b, "--rel", &r, "--order", "eq"]);
    assert_eq!(code, EXIT_REFUTED, "{out}");
    assert!(out.contains("(x, y)"), "{out}");
}

#[test]
fn weighted_bisimulation_is_refuted_at_x_y() {
    let d = Dir::new();
    let (a, b, r) = (d.file("pa.pmts", PA), d.file("pb.pmts", PB), d.file("r.rel", "pair x y\n"));
    let (code, out) = run(&["check", "bisim", "--sys1", &a, "--sys2", &b, "--rel", &r]);
    assert_eq!(code, EXIT_REFUTED);
    assert!(out.starts_with("refuted at (x, y)"), "{out}");
    let (code, _) = run(&["check", "sim", "--sys1", &a, "--sys2", &b, "--rel", &r, "--order", "kernel-dm"]);
    assert_eq!(code, EXIT_HOLDS);
}

#[test]
fn extensional_order_from_file() {
    let d = Dir::new();
    let (a, b, r) = (d.file("sx1.mts", SX1), d.file("sy1.mts", SY1), d.file("r.rel", R_XY));
    let ord = d.file("o.ord", "bundle u ms a:x1\nbundle v ms a:y1 a:y2\nbundle e ms\n");
    let (code, out) = run(&["check", "sim", "--sys1", &a, "--sys2", &b, "--rel", &r, "--order", &format!("file:{ord}")]);
    assert_eq!(code, EXIT_REFUTED, "{out}");
}

#[test]
fn prob_bisim_and_partition() {
    let d = Dir::new();
    let sys = d.file(
        "u.pmts",
        "system u pmts\nstate x\nstate y\nstate z\ntrans x a z p=1\ntrans y a z count=2 p=1/2\nend\n",
    );
    let good = d.file("good.part", "class x y\nclass z\n");
    let bad = d.file("bad.part", "class x z\nclass y\n");
    assert_eq!(run(&["check", "prob-bisim", "--sys", &sys, "--partition", &good]).0, EXIT_HOLDS);
    assert_eq!(run(&["check", "prob-bisim", "--sys", &sys, "--partition", &bad]).0, EXIT_REFUTED);
    let (code, out) = run(&["compute", "prob-partition", "--sys", &sys]);
    assert_eq!(code, EXIT_HOLDS);
    assert!(out.contains("class x y"), "{out}");
}

#[test]
fn compute_and_transform() {
    let d = Dir::new();
    let (a, b) = (d.file("sx1.mts", SX1), d.file("sy1.mts", SY1));
    let (code, out) = run(&["compute", "bisimilarity", "--sys1", &a, "--sys2", &b]);
    assert_eq!(code, EXIT_HOLDS);
    assert!(!out.contains("pair x y"), "{out}");
    let (_, out) = run(&["compute", "similarity", "--sys1", &a, "--sys2", &b, "--order", "kernel-support"]);
    assert!(out.contains("pair x y"), "{out}");
    let (code, out) = run(&["image", "--sys", &a, "--alpha", "support"]);
    assert_eq!(code, EXIT_HOLDS);
    assert!(out.starts_with("system sx1 lts"), "{out}");
    let lts = d.file("sx.lts", "system sx lts\nstate x\nstate x1\ntrans x a x1\nend\n");
    let (code, out) = run(&["represent", "--sys", &lts, "--bound", "3"]);
    assert_eq!(code, EXIT_HOLDS);
    assert_eq!(out.matches("system").count(), 3, "{out}");
    let (_, out) = run(&["represent", "--sys", &lts, "--canonical"]);
    assert_eq!(parse_system(&out).unwrap().kind, coalg::Kind::Mts);
}

#[test]
fn usage_errors_exit_2() {
    let d = Dir::new();
    let (a, b, r) = (d.file("sx1.mts", SX1), d.file("sy1.mts", SY1), d.file("r.rel", R_XY));
    assert_eq!(run(&[]).0, EXIT_USAGE);
    assert_eq!(run(&["check", "bisim", "--sys1", &a]).0, EXIT_USAGE);
    assert_eq!(run(&["check", "sim", "--sys1", &a, "--sys2", &b, "--rel", &r, "--order", "bogus"]).0, EXIT_USAGE);
    assert_eq!(run(&["verify", "--suite", "P11"]).0, EXIT_USAGE);
    assert_eq!(run(&["image", "--sys", &a, "--alpha", "nope"]).0, EXIT_USAGE);
    assert_eq!(run(&["--help"]).0, EXIT_HOLDS);
}

#[test]
fn invalid_inputs_exit_3() {
    let d = Dir::new();
    let bad = d.file("bad.pmts", "system p pmts\nstate y\ntrans y a y p=0.5\nend\n");
    let ok = d.file("pb.pmts", PB);
    let r = d.file("r.rel", "pair y y\n");
    let (code, out) = run(&["check", "bisim", "--sys1", &bad, "--sys2", &ok, "--rel", &r]);
    assert_eq!(code, EXIT_INVALID);
    assert!(out.contains("decimals not accepted; write 1/2"), "{out}");
    let missing = d.0.path().join("missing.lts").to_string_lossy().into_owned();
    assert_eq!(run(&["compute", "prob-partition", "--sys", &missing]).0, EXIT_INVALID);
    let lts = d.file("sx.lts", "system sx lts\nstate x\nend\n");
    let r2 = d.file("r2.rel", "pair x y\n");
    assert_eq!(run(&["check", "bisim", "--sys1", &lts, "--sys2", &ok, "--rel", &r2]).0, EXIT_INVALID);
    let unsummed = d.file("u.pmts", "system p pmts\nstate y\ntrans y a y p=1/3\nend\n");
    assert_eq!(run(&["compute", "prob-partition", "--sys", &unsummed]).0, EXIT_INVALID);
}

#[test]
fn verify_suites() {
    let (code, out) = run(&["verify", "--suite", "fixtures"]);
    assert_eq!(code, EXIT_HOLDS, "{out}");
    assert!(out.contains("26 instances"), "{out}");
    let (code, out) = run(&["verify", "--suite", "p2", "--seeds", "20", "--jobs", "2"]);
    assert_eq!(code, EXIT_HOLDS, "{out}");
    assert!(out.starts_with("fixtures") || out.starts_with("P2"), "{out}");
}

#[test]
fn verify_all_prints_a_row_per_property() {
    let (_, out) = run(&["verify", "--suite", "all", "--seeds", "10"]);
    for p in ["fixtures", "P1 ", "P10", "S5"] {
        assert!(out.lines().any(|l| l.starts_with(p)), "{p} missing in\n{out}");
    }
}

#[test]
fn enumeration_cap_from_environment() {
    let d = Dir::new();
    let lts = d.file("two.lts", "system t lts\nstate x\nstate y\ntrans x a y\ntrans x a x\ntrans y a x\nend\n");
    std::env::set_var("COALG_MAX_ENUM", "2");
    let (code, out) = run(&["represent", "--sys", &lts, "--bound", "3"]);
    std::env::remove_var("COALG_MAX_ENUM");
    assert_eq!(code, EXIT_INVALID, "{out}");
    assert!(out.contains("cap of 2"), "{out}");
}

#[test]
fn canonical_files_round_trip() {
    let corpus = [
        SX1,
        SY1,
        PA,
        PB,
        "system sx lts\nstate x\nstate x1\ntrans x a x1\nend\n",
        "system d dts\nstate x\nstate x1\nstate x2\ntrans x a x1 p=1/2\ntrans x b x2 p=1/2\nend\n",
        "system m alt-mts\nstate s nondet\nstate t prob\ntrans s a t count=3\ntrans t a s count=2 p=1/4\ntrans t b t p=1/2\nend\n",
        "system g alt-gts\nstate s nondet\nstate t prob\ntrans s a t\ntrans t a s p=1\nend\n",
    ];
    for text in corpus {
        assert_eq!(render_system(&parse_system(text).unwrap()), text);
    }
}
