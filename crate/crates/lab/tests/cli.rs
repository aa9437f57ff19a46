//! End-to-end runs of the `spectra-lab` binary against temporary configs.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use spectra_lab::config::RunConfig;
use tempfile::TempDir;

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

fn write_config(dir: &TempDir, name: &str, body: &str) -> PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, body).unwrap();
    path
}

fn run(command: &str, config: &Path, out: Option<&Path>) -> Run {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_spectra-lab"));
    cmd.arg(command).arg("--config").arg(config);
    if let Some(out) = out {
        cmd.arg("--out").arg(out);
    }
    let Output {
        status,
        stdout,
        stderr,
    } = cmd.output().unwrap();
    Run {
        code: status.code().unwrap(),
        stdout: String::from_utf8(stdout).unwrap(),
        stderr: String::from_utf8(stderr).unwrap(),
    }
}

fn config(p: u32, q: u32, family: &str, limits: &str) -> String {
    format!("[measure]\np = {p}\nq = {q}\n\n[family]\n{family}\n\n[limits]\n{limits}\n")
}

fn check_line<'a>(stdout: &'a str, name: &str) -> &'a str {
    let prefix = format!("CHECK {name} ");
    stdout
        .lines()
        .find(|l| l.starts_with(&prefix))
        .unwrap_or_else(|| panic!("no {name} line in {stdout}"))
}

fn json_number(summary: &serde_json::Value, key: &str) -> f64 {
    summary[key]
        .as_f64()
        .unwrap_or_else(|| panic!("{key} missing from {summary}"))
}

#[test]
fn generate_lists_the_first_elements() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(
        &dir,
        "g.toml",
        &config(4, 2, "kind = \"canonical\"", "index_limit = 4"),
    );
    let r = run("generate", &cfg, None);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert_eq!(
        r.stdout,
        "index\tword\tlambda\n0\t0\t0\n1\t1\t1\n2\t01\t4\n3\t11\t5\n"
    );

    let cfg = write_config(
        &dir,
        "g1.toml",
        &config(4, 2, "kind = \"canonical\"", "index_limit = 1"),
    );
    let r = run("generate", &cfg, None);
    assert_eq!(r.code, 0);
    assert_eq!(r.stdout.lines().count(), 2);
}

#[test]
fn generate_writes_structured_output_to_the_out_path() {
    let dir = TempDir::new().unwrap();
    let body = config(6, 3, "kind = \"thp\"\nbits = \"a5\"", "index_limit = 9")
        + "\n[output]\nformat = \"structured\"\n";
    let cfg = write_config(&dir, "s.toml", &body);
    let out = dir.path().join("elements.json");
    let r = run("generate", &cfg, Some(&out));
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert!(r.stdout.is_empty());
    let doc: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(doc["elements"].as_array().unwrap().len(), 9);
    assert_eq!(doc["config"]["family"]["bits"], "a5");
}

#[test]
fn malformed_table_is_reported_before_any_computation() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(
        &dir,
        "bad.toml",
        &config(4, 2, "kind = \"representative\"\nrows = [[0, 2]]", ""),
    );
    let r = run("check", &cfg, None);
    assert_eq!(r.code, 2);
    let line = check_line(&r.stdout, "validation");
    assert!(
        line.starts_with("CHECK validation FAIL condition (ii)"),
        "{line}"
    );
    assert_eq!(r.stdout.lines().count(), 1);

    assert_eq!(run("generate", &cfg, None).code, 2);
    assert_eq!(run("density", &cfg, None).code, 2);
}

#[test]
fn canonical_check_passes() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(
        &dir,
        "c.toml",
        &config(4, 2, "kind = \"canonical\"", "index_limit = 256\nk_max = 5"),
    );
    let r = run("check", &cfg, None);
    assert_eq!(r.code, 0, "{}{}", r.stdout, r.stderr);
    for name in ["validation", "orthogonality", "counting", "maximality"] {
        assert!(check_line(&r.stdout, name).contains(" PASS "), "{name}");
    }
    assert!(!r.stdout.contains("lacunarity"));
}

#[test]
fn thp_check_reports_lacunarity() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(
        &dir,
        "t.toml",
        &config(
            4,
            2,
            "kind = \"thp\"",
            "index_limit = 128\nk_max = 4\ncandidate_radius = 8\nwitness_radius = 1099511627776",
        ),
    );
    let r = run("check", &cfg, None);
    assert_eq!(r.code, 0, "{}{}", r.stdout, r.stderr);
    let line = check_line(&r.stdout, "lacunarity");
    assert!(line.starts_with("CHECK lacunarity PASS"), "{line}");
    let worst: f64 = line
        .split("worst ratio ")
        .nth(1)
        .unwrap()
        .split(' ')
        .next()
        .unwrap()
        .parse()
        .unwrap();
    assert!(worst >= 8.0 / 3.0, "{worst}");
}

#[test]
fn canonical_density_matches_the_bound() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(
        &dir,
        "d.toml",
        &config(4, 2, "kind = \"canonical\"", "k_max = 8"),
    );
    let out = dir.path().join("d.tsv");
    let r = run("density", &cfg, Some(&out));
    assert_eq!(r.code, 0, "{}", r.stderr);
    let table = std::fs::read_to_string(&out).unwrap();
    assert!(table.starts_with("n\tm\tcount\tratio\n"));
    let summary_file = dir.path().join("d.tsv.summary.json");
    let summary: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(summary_file).unwrap()).unwrap();
    let bound = json_number(&summary, "bound");
    assert_eq!(format!("{bound:.6}"), "2.449490");
    let estimate = json_number(&summary, "estimate");
    assert!(
        estimate <= bound && (bound - estimate) / bound < 0.02,
        "{estimate}"
    );
    assert_eq!(summary["verdict"], "PASS");
    assert_eq!(summary["convergence"]["pass"], true);
}

#[test]
fn density_on_a_single_point_does_not_crash() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(
        &dir,
        "one.toml",
        &config(4, 2, "kind = \"canonical\"", "search_radius = 0"),
    );
    let r = run("density", &cfg, None);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let summary: serde_json::Value = serde_json::from_str(&r.stderr).unwrap();
    assert_eq!(summary["dimension"]["degenerate"], true);
    assert_eq!(summary["verdict"], "PASS");
}

#[test]
fn thp_density_estimate_is_positive() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(
        &dir,
        "t63.toml",
        &config(6, 3, "kind = \"thp\"", "k_max = 5"),
    );
    let r = run("density", &cfg, None);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let summary: serde_json::Value = serde_json::from_str(&r.stderr).unwrap();
    assert!(json_number(&summary, "estimate") > 0.0);
}

#[test]
fn unbounded_enumeration_is_a_compute_error() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(
        &dir,
        "u.toml",
        &config(3, 3, "kind = \"sign-word\"\nsigns = \"+-\"", ""),
    );
    let r = run("density", &cfg, None);
    assert_eq!(r.code, 3, "{}", r.stderr);
    assert!(r.stderr.starts_with("spectra-lab: "));
}

#[test]
fn full_lattice_fails_maximality() {
    // With p = q the canonical family is every nonnegative integer, which
    // is orthogonal but extends by negative integers.
    let dir = TempDir::new().unwrap();
    let cfg = write_config(
        &dir,
        "n.toml",
        &config(3, 3, "kind = \"canonical\"", "index_limit = 81\nk_max = 3"),
    );
    let r = run("check", &cfg, None);
    assert_eq!(r.code, 4, "{}{}", r.stdout, r.stderr);
    assert!(check_line(&r.stdout, "maximality").starts_with("CHECK maximality FAIL"));
    assert!(check_line(&r.stdout, "orthogonality").contains(" PASS "));
}

#[test]
fn unknown_keys_and_missing_files_are_config_errors() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(
        &dir,
        "k.toml",
        &config(4, 2, "kind = \"canonical\"", "depth = 3"),
    );
    let r = run("generate", &cfg, None);
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("depth"), "{}", r.stderr);
    assert_eq!(run("check", &dir.path().join("absent.toml"), None).code, 2);
}

#[test]
fn written_configs_reload_identically() {
    let body = config(
        9,
        3,
        "kind = \"custom\"\nhead = [[0, 4, -1], [0, 7, 2]]",
        "k_max = 3\ntolerance = 1e-6",
    );
    let cfg = RunConfig::parse(&body).unwrap();
    let dir = TempDir::new().unwrap();
    let path = write_config(&dir, "again.toml", &cfg.to_toml());
    assert_eq!(RunConfig::load(&path).unwrap(), cfg);
    assert_eq!(run("generate", &path, None).code, 0);
}
