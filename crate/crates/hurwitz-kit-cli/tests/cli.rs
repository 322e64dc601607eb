//! End-to-end tests spawning the built binary.

use std::path::PathBuf;
use std::process::{Command, Output};

use hurwitz_kit::insulin;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_hurwitz-kit"))
}

fn run(cmd: &mut Command) -> Output {
    cmd.output().expect("binary should spawn")
}

fn stdout_str(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("stdout should be utf-8")
}

fn stderr_str(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).expect("stderr should be utf-8")
}

/// Unique-named scratch file removed on drop.
struct TempFile {
    path: PathBuf,
}

impl TempFile {
    fn new(name: &str, contents: &str) -> TempFile {
        let path = std::env::temp_dir().join(format!(
            "hurwitz-kit-cli-{}-{name}",
            std::process::id()
        ));
        std::fs::write(&path, contents).expect("temp file should be writable");
        TempFile { path }
    }

    fn path(&self) -> &str {
        self.path.to_str().expect("temp path should be utf-8")
    }
}

impl Drop for TempFile {
    fn drop(&mut self) {
        let _ = std::fs::remove_file(&self.path);
    }
}

fn a7_file(name: &str) -> TempFile {
    TempFile::new(name, insulin::a7_json())
}

#[test]
fn certify_insulin_exact_exits_zero_with_seven_pivots() {
    let input = a7_file("certify-a7.json");
    let out = run(bin()
        .args(["certify", "--kind", "metzler", "--mode", "exact", "--input"])
        .arg(input.path()));
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr_str(&out));
    let text = stdout_str(&out);
    assert!(text.contains("\"verdict\":\"hurwitz\""));
    assert!(text.contains("\"pivots\":[\"-111/1000\","));
    assert!(text.contains("\"mmatrix\":true"));
    assert!(text.contains("\"routh\":true"));
    assert_eq!(text.matches('/').count(), 7, "seven rational pivots");
}

#[test]
fn certify_positive_scalar_exits_one() {
    let input = TempFile::new("certify-one.json", "{\"entries\":[[1]],\"mode\":\"float\",\"n\":1}");
    let out = run(bin()
        .args(["certify", "--kind", "symmetric", "--mode", "float", "--input"])
        .arg(input.path()));
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout_str(&out).contains("\"verdict\":\"not_hurwitz\""));
}

#[test]
fn certify_non_metzler_input_exits_two() {
    let input = TempFile::new(
        "certify-nonmetzler.json",
        "{\"entries\":[[-1,-2],[3,-1]],\"mode\":\"float\",\"n\":2}",
    );
    let out = run(bin()
        .args(["certify", "--kind", "metzler", "--mode", "float", "--input"])
        .arg(input.path()));
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr_str(&out).contains("Metzler"));
}

#[test]
fn certify_out_flag_writes_certificate_file() {
    let input = a7_file("certify-out-in.json");
    let target = std::env::temp_dir().join(format!(
        "hurwitz-kit-cli-{}-certify-out.json",
        std::process::id()
    ));
    let out = run(bin()
        .args(["certify", "--kind", "metzler", "--mode", "exact", "--input"])
        .arg(input.path())
        .arg("--out")
        .arg(&target));
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout_str(&out).is_empty());
    let written = std::fs::read_to_string(&target).expect("--out file should exist");
    let _ = std::fs::remove_file(&target);
    assert!(written.contains("\"verdict\":\"hurwitz\""));
}

#[test]
fn certify_rejects_tol_in_exact_mode() {
    let input = a7_file("certify-tol-exact.json");
    let out = run(bin()
        .args([
            "certify", "--kind", "metzler", "--mode", "exact", "--tol", "1e-9", "--input",
        ])
        .arg(input.path()));
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn reduce_insulin_reproduces_bundled_reduction() {
    let input = a7_file("reduce-a7.json");
    let out = run(bin().args(["reduce", "--input"]).arg(input.path()));
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout_str(&out).trim_end_matches('\n'), insulin::b6_json());
}

#[test]
fn reduce_needs_dimension_at_least_two() {
    let input = TempFile::new("reduce-tiny.json", "{\"entries\":[[-1]],\"mode\":\"float\",\"n\":1}");
    let out = run(bin().args(["reduce", "--input"]).arg(input.path()));
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn lift_metzler_nominal_rebuilds_bundled_matrix() {
    let base = TempFile::new("lift-b6.json", insulin::b6_json());
    let params = TempFile::new(
        "lift-nominal.json",
        "{\"d\":\"-111/1000\",\"h\":[\"0\",\"0\",\"0\",\"0\",\"0\",\"91/200\"],\"k\":[\"0\",\"0\",\"0\",\"0\",\"0\",\"1/20\"]}",
    );
    let out = run(bin()
        .args(["lift", "metzler", "--base"])
        .arg(base.path())
        .arg("--params")
        .arg(params.path()));
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr_str(&out));
    assert_eq!(stdout_str(&out).trim_end_matches('\n'), insulin::a7_json());
}

#[test]
fn lift_symmetric_then_reduce_returns_base() {
    let base = TempFile::new(
        "lift-sym-base.json",
        "{\"entries\":[[\"-2\",\"1\"],[\"1\",\"-2\"]],\"mode\":\"exact\",\"n\":2}",
    );
    let params = TempFile::new(
        "lift-sym-params.json",
        "{\"d\":\"-3/2\",\"k_row\":[\"1/3\",\"-1/4\"]}",
    );
    let out = run(bin()
        .args(["lift", "symmetric", "--base"])
        .arg(base.path())
        .arg("--params")
        .arg(params.path()));
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr_str(&out));
    let lifted = TempFile::new("lift-sym-out.json", stdout_str(&out).trim_end_matches('\n'));

    let reduced = run(bin().args(["reduce", "--input"]).arg(lifted.path()));
    assert_eq!(reduced.status.code(), Some(0));
    assert_eq!(
        stdout_str(&reduced).trim_end_matches('\n'),
        std::fs::read_to_string(&base.path).unwrap()
    );

    let verdict = run(bin()
        .args(["certify", "--kind", "symmetric", "--mode", "exact", "--input"])
        .arg(lifted.path()));
    assert_eq!(verdict.status.code(), Some(0));
}

#[test]
fn chart_forward_on_diagonal_matrix() {
    let input = TempFile::new(
        "chart-diag.json",
        "{\"entries\":[[-2,0],[0,-3]],\"mode\":\"float\",\"n\":2}",
    );
    let out = run(bin().args(["chart", "forward", "--input"]).arg(input.path()));
    assert_eq!(out.status.code(), Some(0));
    let text = stdout_str(&out);
    assert!(text.contains("\"base\":{\"entries\":[[-2.0000000000000000e0]]"));
    assert!(text.contains("\"k\":[0.0000000000000000e0,1.0986122886681098e0]"));
}

#[test]
fn chart_forward_then_inverse_roundtrips() {
    let entries = [[-5.0, 1.5], [1.5, -4.0]];
    let input = TempFile::new(
        "chart-rt.json",
        "{\"entries\":[[-5.0,1.5],[1.5,-4.0]],\"mode\":\"float\",\"n\":2}",
    );
    let fwd = run(bin().args(["chart", "forward", "--input"]).arg(input.path()));
    assert_eq!(fwd.status.code(), Some(0));
    let point = TempFile::new("chart-rt-point.json", stdout_str(&fwd).trim_end_matches('\n'));
    let inv = run(bin().args(["chart", "inverse", "--input"]).arg(point.path()));
    assert_eq!(inv.status.code(), Some(0));
    let matrix = hurwitz_kit::json::matrix_from_json(stdout_str(&inv).trim_end_matches('\n'))
        .expect("inverse output should parse");
    for i in 0..2 {
        for j in 0..2 {
            let expected = entries[i][j];
            let got = matrix.get(i, j).to_f64();
            assert!(
                (expected - got).abs() <= 1e-9 * expected.abs().max(1.0),
                "entry ({i},{j}): {expected} vs {got}"
            );
        }
    }
}

#[test]
fn chart_forward_rejects_non_hurwitz() {
    let input = TempFile::new(
        "chart-unstable.json",
        "{\"entries\":[[1,0],[0,-1]],\"mode\":\"float\",\"n\":2}",
    );
    let out = run(bin().args(["chart", "forward", "--input"]).arg(input.path()));
    assert_eq!(out.status.code(), Some(2));
}

const BALL_CONFIG: &str = "{\"center\":{\"entries\":[[-2,0.4],[0.4,-2]],\"mode\":\"float\",\"n\":2},\"count\":15,\"radius\":0.5,\"seed\":7}";

#[test]
fn sample_is_reproducible() {
    let config = TempFile::new("sample-repro.json", BALL_CONFIG);
    let first = run(bin().args(["sample", "--config"]).arg(config.path()));
    let second = run(bin().args(["sample", "--config"]).arg(config.path()));
    assert_eq!(first.status.code(), Some(0));
    assert_eq!(first.stdout, second.stdout);
    assert!(stdout_str(&first).contains("\"accepted\":15"));
}

#[test]
fn sample_seed_precedence_env_over_flag_over_config() {
    let config = TempFile::new("sample-seed.json", BALL_CONFIG);
    let flag_three = run(bin()
        .args(["sample", "--config"])
        .arg(config.path())
        .args(["--seed", "3"]));
    let env_three = run(bin()
        .args(["sample", "--config"])
        .arg(config.path())
        .args(["--seed", "9"])
        .env("HURWITZ_KIT_SEED", "3"));
    assert_eq!(flag_three.status.code(), Some(0));
    assert_eq!(flag_three.stdout, env_three.stdout);
}

#[test]
fn equilibrium_insulin_system_is_exact() {
    let system = TempFile::new(
        "equilibrium-insulin.json",
        &format!(
            "{{\"a\":{},\"b\":[\"0\",\"1\",\"0\",\"0\",\"0\",\"0\",\"0\"]}}",
            insulin::a7_json()
        ),
    );
    let out = run(bin().args(["equilibrium", "--system"]).arg(system.path()));
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr_str(&out));
    let text = stdout_str(&out);
    assert!(text.contains("\"x_bar\":[\"11176166590000/7752153675637\""));
    assert!(text.contains("\"residual\":0.0000000000000000e0"));
}

#[test]
fn equilibrium_rejects_unstable_system() {
    let system = TempFile::new(
        "equilibrium-unstable.json",
        "{\"a\":{\"entries\":[[1]],\"mode\":\"float\",\"n\":1},\"b\":[1]}",
    );
    let out = run(bin().args(["equilibrium", "--system"]).arg(system.path()));
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn simulate_scalar_system_matches_closed_form() {
    let system = TempFile::new(
        "simulate-scalar.json",
        "{\"a\":{\"entries\":[[-1]],\"mode\":\"float\",\"n\":1},\"b\":[1]}",
    );
    let x0 = TempFile::new("simulate-x0.json", "[0]");
    let out = run(bin()
        .args(["simulate", "--system"])
        .arg(system.path())
        .arg("--x0")
        .arg(x0.path())
        .args(["--dt", "0.01", "--steps", "100"]));
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr_str(&out));
    let text = stdout_str(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("t,x1"));
    let last = lines.last().expect("trajectory rows");
    let mut fields = last.split(',');
    let t: f64 = fields.next().unwrap().parse().unwrap();
    let x: f64 = fields.next().unwrap().parse().unwrap();
    assert!((t - 1.0).abs() < 1e-12);
    assert!((x - (1.0 - (-1.0f64).exp())).abs() <= 1e-8);
}

#[test]
fn simulate_rejects_nonpositive_step() {
    let system = TempFile::new(
        "simulate-baddt.json",
        "{\"a\":{\"entries\":[[-1]],\"mode\":\"float\",\"n\":1},\"b\":[1]}",
    );
    let x0 = TempFile::new("simulate-baddt-x0.json", "[0]");
    let out = run(bin()
        .args(["simulate", "--system"])
        .arg(system.path())
        .arg("--x0")
        .arg(x0.path())
        .args(["--dt", "0", "--steps", "10"]));
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn insulin_demo_all_stages_pass() {
    let out = run(bin().args(["insulin-demo", "--family-count", "5"]));
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr_str(&out));
    let text = stdout_str(&out);
    assert!(text.contains("corner entry (6,6) = -23158/13875 ... PASS"));
    assert!(text.contains("stage 2: nominal fiber parameters rebuild the 7x7 matrix byte-for-byte ... PASS"));
    assert!(text.contains("0 stability failures ... PASS"));
    assert!(text.contains("stage 4: equilibrium"));
    assert_eq!(text.matches("PASS").count(), 4);
}

#[test]
fn insulin_demo_family_count_zero_skips_stage_three() {
    let out = run(bin().args(["insulin-demo", "--family-count", "0"]));
    assert_eq!(out.status.code(), Some(0));
    let text = stdout_str(&out);
    assert!(text.contains("stage 3: restricted family sampling skipped (family-count 0)"));
    assert_eq!(text.matches("PASS").count(), 3);
}

#[test]
fn insulin_demo_corrupted_data_exits_three_naming_stage_one() {
    let corrupted = insulin::a7_json().replace("-111/1000", "-112/1000");
    assert_ne!(corrupted, insulin::a7_json());
    let data = TempFile::new("demo-corrupt.json", &corrupted);
    let out = run(bin()
        .args(["insulin-demo", "--family-count", "0", "--data"])
        .arg(data.path()));
    assert_eq!(out.status.code(), Some(3));
    assert!(stderr_str(&out).contains("stage 1"));
    assert!(stdout_str(&out).contains("FAIL"));
}

#[test]
fn insulin_demo_seeded_runs_are_byte_identical() {
    let first = run(bin()
        .args(["insulin-demo", "--family-count", "8", "--seed", "5"]));
    let second = run(bin()
        .args(["insulin-demo", "--family-count", "8"])
        .env("HURWITZ_KIT_SEED", "5"));
    assert_eq!(first.status.code(), Some(0));
    assert_eq!(first.stdout, second.stdout);
}
