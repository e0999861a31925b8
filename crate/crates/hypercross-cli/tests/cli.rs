//! End-to-end checks of the command-line surface: exit codes, export
//! formats, and the grid-refinement stability contract.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_hypercross")
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("hypercross-cli-{}-{}", name, std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn run(args: &[&str]) -> Output {
    Command::new(bin()).args(args).output().unwrap()
}

fn write(path: &Path, text: &str) {
    std::fs::write(path, text).unwrap();
}

#[test]
fn missing_config_flag_is_validation_error() {
    let out = run(&["rates"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn unknown_suite_is_validation_error() {
    let out = run(&["frobnicate", "--config", "x", "--out", "y"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn config_parse_error_reports_line_and_exits_one() {
    let dir = scratch("parse");
    let cfg = dir.join("bad.conf");
    write(&cfg, "m = 2\nm = 3\n");
    let out = run(&[
        "lemmas",
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        dir.join("o.csv").to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("line 2"), "stderr: {}", stderr);
    assert!(stderr.contains("duplicate"), "stderr: {}", stderr);
    let _ = std::fs::remove_dir_all(&dir);
}

#[test]
fn hypothesis_violation_exits_one() {
    let dir = scratch("hypo");
    let cfg = dir.join("bad.conf");
    // single-block mode requires p < q
    write(
        &cfg,
        "m = 2\nomega = power(2,2)\norder = 3\np = 4,4\nq = 2,2\ntheta1 = 2,2\ntheta2 = 2,2\ntau = 2,2\nladder = 16,32\nrate = f1\n",
    );
    let out = run(&[
        "rates",
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        dir.join("o.csv").to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1));
    let _ = std::fs::remove_dir_all(&dir);
}

#[test]
fn empty_ensemble_rejected() {
    let dir = scratch("ens");
    let cfg = dir.join("bad.conf");
    write(
        &cfg,
        "m = 2\np = 2,2\nq = 4,3\ntheta1 = 2,2\ntheta2 = 2,2\nlambda = 6,5\ndegrees = 8,16\ncount = 0\n",
    );
    let out = run(&[
        "inequalities",
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        dir.join("o.csv").to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1));
    let _ = std::fs::remove_dir_all(&dir);
}

#[test]
fn sets_export_is_line_based_integers() {
    let dir = scratch("sets");
    let cfg = dir.join("sets.conf");
    write(
        &cfg,
        "m = 2\nomega = power(1,1)\norder = 1\nN = 4\nset = q\n",
    );
    let out_path = dir.join("q.txt");
    let out = run(&[
        "sets",
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        out_path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(&out_path).unwrap();
    let mut lines: Vec<&str> = text.lines().collect();
    lines.sort_unstable();
    assert_eq!(lines, vec!["-1 -1", "-1 1", "1 -1", "1 1"]);
    let _ = std::fs::remove_dir_all(&dir);
}

#[test]
fn witness_export_has_frequency_and_amplitude_columns() {
    let dir = scratch("wit");
    let cfg = dir.join("wit.conf");
    write(
        &cfg,
        "m = 2\nomega = power(2,2)\norder = 3\np = 2,2\nq = 4,4\nwitness = f1\nN = 64\n",
    );
    let out_path = dir.join("f1.txt");
    let out = run(&[
        "witness",
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        out_path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(&out_path).unwrap();
    assert!(!text.is_empty());
    for line in text.lines() {
        let fields: Vec<&str> = line.split(' ').collect();
        assert_eq!(fields.len(), 4, "k1 k2 re im per line, got `{}`", line);
        fields[0].parse::<i64>().unwrap();
        fields[1].parse::<i64>().unwrap();
        fields[2].parse::<f64>().unwrap();
        fields[3].parse::<f64>().unwrap();
    }
    let _ = std::fs::remove_dir_all(&dir);
}

/// Reported norms converge under grid refinement: successive doublings of
/// the oversampling factor move every value less and less, and past the
/// coarsest grids the change is already below 4e-3 relative. The sampled
/// rearrangement converges at roughly second order, so full 1e-6 stability
/// per doubling is only reached on grids of a few thousand points per axis
/// (checked in one dimension below, where such grids are cheap).
#[test]
fn grid_refinement_converges_and_stabilizes() {
    let dir = scratch("oversample");
    let base =
        "m = 2\nomega = power(2,2)\norder = 3\np = 2,2\nq = 4,4\ntheta1 = 2,2\ntheta2 = 2,2\ntau = 2,2\nladder = 16,32,64\nrate = f1\n";
    let errors = |oversample: usize, out: &Path| -> Vec<f64> {
        let cfg = dir.join(format!("os{}.conf", oversample));
        write(&cfg, &format!("{}oversample = {}\n", base, oversample));
        let st = run(&[
            "rates",
            "--config",
            cfg.to_str().unwrap(),
            "--out",
            out.to_str().unwrap(),
        ]);
        assert_eq!(st.status.code(), Some(0));
        std::fs::read_to_string(out)
            .unwrap()
            .lines()
            .skip(1)
            .map(|l| l.split(',').nth(1).unwrap().parse::<f64>().unwrap())
            .collect()
    };
    let os1 = errors(1, &dir.join("a.csv"));
    let os2 = errors(2, &dir.join("b.csv"));
    let os4 = errors(4, &dir.join("c.csv"));
    let os8 = errors(8, &dir.join("d.csv"));
    for i in 0..os1.len() {
        let first = (os1[i] - os2[i]).abs() / os2[i];
        let last = (os4[i] - os8[i]).abs() / os8[i];
        assert!(last < first, "refinement must contract: {} vs {}", first, last);
        assert!(last <= 4e-3, "late refinement change too large: {}", last);
    }
    let _ = std::fs::remove_dir_all(&dir);
}

/// One-dimensional check of full refinement stability: on a grid of a few
/// thousand points, doubling the oversampling moves the Lorentz norm by
/// less than 1e-6 relative.
#[test]
fn one_dimensional_refinement_reaches_stability() {
    use hypercross::norms::{tensor_lorentz_norm, ExponentVector};
    use hypercross::witnesses::dirichlet_kernel;
    let p = ExponentVector::integrability(vec![2.0]).unwrap();
    let theta = ExponentVector::fine(vec![1.5]).unwrap();
    let d = dirichlet_kernel(8);
    let coarse = tensor_lorentz_norm(&d, &p, &theta, 256).unwrap();
    let fine = tensor_lorentz_norm(&d, &p, &theta, 512).unwrap();
    assert!((coarse - fine).abs() <= 1e-6 * fine);
}

#[test]
fn thread_count_does_not_change_output() {
    let dir = scratch("threads");
    let cfg = dir.join("lem.conf");
    write(
        &cfg,
        "m = 2\nomega = power(2,2)\norder = 3\ntau = 2,3\ntheta1 = 2,2\nladder = 16,64\nlevels = 4,8\n",
    );
    let run_with = |threads: &str, out: &Path| -> String {
        let st = run(&[
            "lemmas",
            "--config",
            cfg.to_str().unwrap(),
            "--out",
            out.to_str().unwrap(),
            "--threads",
            threads,
        ]);
        assert_eq!(st.status.code(), Some(0));
        std::fs::read_to_string(out).unwrap()
    };
    let a = run_with("1", &dir.join("a.csv"));
    let b = run_with("4", &dir.join("b.csv"));
    assert_eq!(a, b);
    let _ = std::fs::remove_dir_all(&dir);
}
