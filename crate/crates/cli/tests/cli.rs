use std::path::Path;
use std::process::{Command, Output};

use nearquad::geometry::{io, CurveDiscretization, Potato};
use nearquad::RuleKind;
use std::sync::Arc;

fn run(dir: &Path, config: &str, args: &[&str]) -> Output {
    let path = dir.join("exp.cfg");
    std::fs::write(&path, config).unwrap();
    Command::new(env!("CARGO_BIN_EXE_nearquad"))
        .args(args)
        .arg("--config")
        .arg(&path)
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn data_rows(text: &str) -> Vec<&str> {
    text.lines().filter(|l| !l.starts_with('#')).skip(1).collect()
}

const POTATO_GRID: &str = "\
geometry.name = potato
rule.kind = gauss-legendre
rule.n = 16
rule.panels = 20
targets.generator = plane_grid
targets.origin = -1.5,-1.5
targets.u = 3,0
targets.v = 0,3
targets.counts = 200,100
";

#[test]
fn estimate_emits_one_row_per_grid_target() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(dir.path(), POTATO_GRID, &["estimate"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let text = stdout(&out);
    assert!(text.contains("index,x,y,z,estimate,reliable"));
    assert_eq!(data_rows(&text).len(), 200 * 100);
}

#[test]
fn trapezoidal_run_matches_grid_size() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = "geometry.name = potato\nrule.n = 250\ntargets.generator = complexified_grid\n\
               targets.re = 0,6\ntargets.im = 0.01,0.2\ntargets.counts = 12,5\n";
    let out = run(dir.path(), cfg, &["estimate"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let rows = data_rows(&text);
    assert_eq!(rows.len(), 60);
    // Complexified targets carry their pre-image.
    assert!(rows.iter().all(|r| r.split(',').nth(10).is_some_and(|v| !v.is_empty())));
}

#[test]
fn empty_target_list_gives_header_only() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(dir.path(), "geometry.name = circle\nrule.n = 16\n", &["estimate"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(data_rows(&text).is_empty());
    assert!(text.lines().any(|l| l.starts_with("index,")));
}

const TORUS: &str = "\
geometry.name = fourier_torus
rule.s.n = 20
rule.t.n = 60
kernel.layer = double
density.name = cos_s_sin_t
targets.generator = random_normal_offset
targets.h = 1.5
targets.count = 40
seed = 11
";

#[test]
fn validate_is_deterministic_across_runs_and_thread_counts() {
    let dir = tempfile::tempdir().unwrap();
    let a = run(dir.path(), TORUS, &["validate", "--jobs", "1"]);
    let b = run(dir.path(), TORUS, &["validate", "--jobs", "4"]);
    let c = run(dir.path(), TORUS, &["validate"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.stdout, c.stdout);
    let d = run(dir.path(), TORUS, &["validate", "--seed", "12"]);
    assert_ne!(a.stdout, d.stdout);
}

fn summary_field<'a>(text: &'a str, name: &str) -> &'a str {
    let line = text.lines().find(|l| l.starts_with("# summary:")).unwrap();
    line.split_whitespace()
        .find_map(|kv| kv.strip_prefix(name).and_then(|r| r.strip_prefix('=')))
        .unwrap()
}

#[test]
fn validate_summary_is_recomputable_from_rows() {
    let dir = tempfile::tempdir().unwrap();
    let text = stdout(&run(dir.path(), TORUS, &["validate"]));
    let mut counted = 0;
    let mut within = 0;
    let mut max_under: f64 = 0.0;
    for row in data_rows(&text) {
        let f: Vec<&str> = row.split(',').collect();
        let (Ok(m), Ok(e)) = (f[4].parse::<f64>(), f[5].parse::<f64>()) else { continue };
        if m > 1e-12 {
            counted += 1;
            if (0.1..=10.0).contains(&(e / m)) {
                within += 1;
            }
            max_under = max_under.max(m / e);
        }
    }
    assert!(counted > 0);
    assert_eq!(summary_field(&text, "counted"), counted.to_string());
    assert_eq!(summary_field(&text, "within_10x"), within.to_string());
    assert_eq!(summary_field(&text, "max_underestimate").parse::<f64>().unwrap(), max_under);
}

#[test]
fn far_targets_flag_the_error_floor() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = "geometry.name = circle\nrule.n = 64\ntargets.points = 5,0; 0,6; -7,1\n";
    let text = stdout(&run(dir.path(), cfg, &["validate"]));
    assert_eq!(summary_field(&text, "error_floor"), "true");
}

#[test]
fn sweep_with_one_n_gives_one_row() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = "geometry.name = potato\nrule.n = 60\ntargets.generator = level_set\ntargets.level = 0.1\n\
               targets.count = 20\nsweep.n = 80\n";
    let out = run(dir.path(), cfg, &["sweep"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let rows = data_rows(&text);
    assert_eq!(rows.len(), 1);
    assert!(rows[0].starts_with("80,1,"));
}

#[test]
fn config_errors_exit_with_code_two_and_name_the_line() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(dir.path(), "geometry.name = circle\nrule.n = 16\nkernel.layer = triple\n", &["estimate"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("line 3") && err.contains("kernel.layer"), "{err}");

    let out = run(dir.path(), "geometry.name = torus\nrule.n = 8\ntargets.generator = level_set\ntargets.level = 0.1\ntargets.count = 3\n", &["estimate"]);
    assert_eq!(out.status.code(), Some(2));

    let missing = Command::new(env!("CARGO_BIN_EXE_nearquad"))
        .args(["estimate", "--config", "/nonexistent/exp.cfg"])
        .output()
        .unwrap();
    assert_eq!(missing.status.code(), Some(2));
}

#[test]
fn failed_rows_exit_with_code_three() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = "geometry.name = circle\nrule.n = 16\ntargets.points = nan,0; 0.5,0\n";
    let out = run(dir.path(), cfg, &["estimate"]);
    assert_eq!(out.status.code(), Some(3));
    let text = stdout(&out);
    let rows = data_rows(&text);
    assert_eq!(rows.len(), 2);
    assert!(rows[1].ends_with(",ok"));
}

#[test]
fn oracle_failures_are_recorded_per_row() {
    let dir = tempfile::tempdir().unwrap();
    // (1, 0) is a quadrature node.
    let cfg = "geometry.name = circle\nrule.n = 16\ntargets.points = 1,0; 0.5,0\n";
    let out = run(dir.path(), cfg, &["validate"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(data_rows(&text)[0].contains("oracle"));
    assert_eq!(summary_field(&text, "excluded"), "1");
}

#[test]
fn output_flag_and_rules_dump() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("rule.csv");
    let out = Command::new(env!("CARGO_BIN_EXE_nearquad"))
        .args(["rules-dump", "--kind", "trapezoidal", "--n", "8", "--output"])
        .arg(&path)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    let rows = data_rows(&text);
    assert_eq!(rows.len(), 8);
    let w: f64 = rows.iter().map(|r| r.split(',').nth(2).unwrap().parse::<f64>().unwrap()).sum();
    assert!((w - 2.0 * std::f64::consts::PI).abs() < 1e-14);
}

#[test]
fn discretization_files_are_accepted() {
    let dir = tempfile::tempdir().unwrap();
    let disc = CurveDiscretization::with_rule(Arc::new(Potato::default()), RuleKind::GaussLegendre, 16, 20).unwrap();
    let file = dir.path().join("potato.txt");
    std::fs::write(&file, io::write_curve(&disc)).unwrap();
    let cfg = format!("geometry.file = {}\ntargets.points = 1.1,0.2\n", file.display());
    let out = run(dir.path(), &cfg, &["estimate"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let from_file = stdout(&out);
    let cfg = "geometry.name = potato\nrule.kind = gl\nrule.n = 16\nrule.panels = 20\ntargets.points = 1.1,0.2\n";
    let builtin = stdout(&run(dir.path(), cfg, &["estimate"]));
    let est = |t: &str| data_rows(t)[0].split(',').nth(4).unwrap().parse::<f64>().unwrap();
    let (a, b) = (est(&from_file), est(&builtin));
    assert!((a - b).abs() <= 1e-6 * b, "{a} vs {b}");
}
