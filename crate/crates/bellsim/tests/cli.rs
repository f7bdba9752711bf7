//! End-to-end checks of the `bellsim` binary: run the real executable,
//! inspect stdout/stderr/exit codes, and confirm the file outputs are
//! byte-reproducible.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bellsim() -> Command {
    Command::new(env!("CARGO_BIN_EXE_bellsim"))
}

fn stdout(output: &Output) -> String {
    String::from_utf8(output.stdout.clone()).expect("utf-8 stdout")
}

fn stderr(output: &Output) -> String {
    String::from_utf8(output.stderr.clone()).expect("utf-8 stderr")
}

fn bundled_model() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("models/chsh_pairs.model")
}

fn write_config(dir: &Path, body: &str) -> PathBuf {
    let path = dir.join("experiment.cfg");
    std::fs::write(&path, body).expect("write config");
    path
}

const SMALL_QUANTUM: &str = "trials = 400\nseed = 7\nsource = quantum\n";

#[test]
fn theory_prints_the_maximal_violation() {
    let output = bellsim()
        .args(["theory", "0", "90", "225", "135"])
        .output()
        .expect("binary runs");
    assert!(output.status.success());
    let text = stdout(&output);
    assert!(text.contains("S = E(a,b) + E(a',b) + E(a,b') - E(a',b') = 2.828427124746190"));
    assert!(text.contains("E(a , b ) = +0.707106781"));
}

#[test]
fn theory_at_equal_settings_gives_minus_two() {
    let output = bellsim()
        .args(["theory", "30", "30", "30", "30"])
        .output()
        .expect("binary runs");
    assert!(output.status.success());
    let text = stdout(&output);
    assert!(text.contains("equal settings give E = -1"));
    assert!(text.contains("= -2.000000000000000"));
}

#[test]
fn simulate_is_reproducible_byte_for_byte() {
    let dir = tempfile::tempdir().expect("tempdir");
    let config = write_config(dir.path(), SMALL_QUANTUM);
    let (out1, out2) = (dir.path().join("one.csv"), dir.path().join("two.csv"));

    for out in [&out1, &out2] {
        let output = bellsim()
            .args(["simulate", "--config"])
            .arg(&config)
            .arg("--out")
            .arg(out)
            .env_remove("BELLSIM_SEED")
            .output()
            .expect("binary runs");
        assert!(output.status.success(), "stderr: {}", stderr(&output));
        let text = stdout(&output);
        assert!(text.contains("seed 7 from config"));
        assert!(text.contains("wrote 400 trials"));
        assert!(text.contains("cells: l1 (a,b)"));
    }
    let bytes1 = std::fs::read(&out1).expect("read one");
    let bytes2 = std::fs::read(&out2).expect("read two");
    assert_eq!(bytes1, bytes2, "same config must give identical trial files");
}

#[test]
fn simulate_honors_the_seed_environment_override() {
    let dir = tempfile::tempdir().expect("tempdir");
    let config = write_config(dir.path(), SMALL_QUANTUM);
    let (base, overridden) = (dir.path().join("base.csv"), dir.path().join("override.csv"));

    let output = bellsim()
        .args(["simulate", "--config"])
        .arg(&config)
        .arg("--out")
        .arg(&base)
        .env_remove("BELLSIM_SEED")
        .output()
        .expect("binary runs");
    assert!(output.status.success());

    let output = bellsim()
        .args(["simulate", "--config"])
        .arg(&config)
        .arg("--out")
        .arg(&overridden)
        .env("BELLSIM_SEED", "123")
        .output()
        .expect("binary runs");
    assert!(output.status.success());
    assert!(stdout(&output).contains("seed 123 from BELLSIM_SEED"));

    assert_ne!(
        std::fs::read(&base).expect("read base"),
        std::fs::read(&overridden).expect("read override"),
        "a different seed must change the trials"
    );
}

#[test]
fn simulate_rejects_a_malformed_seed_override() {
    let dir = tempfile::tempdir().expect("tempdir");
    let config = write_config(dir.path(), SMALL_QUANTUM);
    let output = bellsim()
        .args(["simulate", "--config"])
        .arg(&config)
        .arg("--out")
        .arg(dir.path().join("never.csv"))
        .env("BELLSIM_SEED", "not-a-number")
        .output()
        .expect("binary runs");
    assert_eq!(output.status.code(), Some(1));
    assert!(stderr(&output).starts_with("error: BELLSIM_SEED must be an unsigned integer"));
}

#[test]
fn analyze_reports_a_perfectly_correlated_strategy_exactly() {
    let dir = tempfile::tempdir().expect("tempdir");
    // Fixed answers +1 to every question: every cell mean is +1, so
    // S = 1 + 1 + 1 - 1 = 2 with zero standard error.
    let config = write_config(
        dir.path(),
        "trials = 1000\nseed = 11\nsource = strategy:+1,+1,+1,+1\n",
    );
    let trials = dir.path().join("trials.csv");
    let output = bellsim()
        .args(["simulate", "--config"])
        .arg(&config)
        .arg("--out")
        .arg(&trials)
        .env_remove("BELLSIM_SEED")
        .output()
        .expect("binary runs");
    assert!(output.status.success());

    let output = bellsim()
        .args(["analyze", "--trials"])
        .arg(&trials)
        .output()
        .expect("binary runs");
    assert!(output.status.success());
    let text = stdout(&output);
    assert!(text.contains("S = 2.000000 +/- 0.000000"));

    let output = bellsim()
        .args(["analyze", "--format", "kv", "--trials"])
        .arg(&trials)
        .output()
        .expect("binary runs");
    assert!(output.status.success());
    let kv = stdout(&output);
    assert!(kv.contains("\nS = 2\n"), "kv output was:\n{kv}");
    assert!(kv.contains("meta.trials = 1000"));
}

#[test]
fn analyze_explains_an_undefined_s_without_failing() {
    let dir = tempfile::tempdir().expect("tempdir");
    let trials = dir.path().join("partial.csv");
    std::fs::write(
        &trials,
        "trial,alice_setting,bob_setting,alice_outcome,bob_outcome\n\
         0,a,b,1,-1\n1,a,b,-1,1\n2,a',b,1,1\n3,a,b',-1,-1\n",
    )
    .expect("write trials");
    let output = bellsim()
        .args(["analyze", "--trials"])
        .arg(&trials)
        .output()
        .expect("binary runs");
    assert!(output.status.success(), "an undefined S is a finding, not a failure");
    let text = stdout(&output);
    assert!(text.contains("S is undefined: cell (a', b') holds no trials"));

    let output = bellsim()
        .args(["analyze", "--format", "kv", "--trials"])
        .arg(&trials)
        .output()
        .expect("binary runs");
    assert!(output.status.success());
    assert!(stdout(&output).contains("S.undefined_cell = a',b'"));
}

#[test]
fn analyze_fails_cleanly_on_a_missing_file() {
    let output = bellsim()
        .args(["analyze", "--trials", "/nonexistent/trials.csv"])
        .output()
        .expect("binary runs");
    assert_eq!(output.status.code(), Some(1));
    assert!(stderr(&output).starts_with("error: /nonexistent/trials.csv"));
}

#[test]
fn lhv_bound_lists_all_strategies_and_the_bound() {
    let output = bellsim().arg("lhv-bound").output().expect("binary runs");
    assert!(output.status.success());
    let text = stdout(&output);
    assert!(text.contains("bound: max S = 2, attained by 8 of 16 strategies"));
    assert_eq!(text.matches("<- attains the bound").count(), 8);
    assert_eq!(text.lines().filter(|l| l.starts_with(" +") || l.starts_with(" -")).count(), 16);
}

#[test]
fn spectrum_prints_the_computed_eigenvalues_and_overlap() {
    let output = bellsim().arg("spectrum").output().expect("binary runs");
    assert!(output.status.success());
    let text = stdout(&output);
    assert!(text.contains(
        "eigenvalues: -3.000000000000, +1.000000000000, +1.000000000000, +1.000000000000"
    ));
    assert!(text.contains("trace: +0.000000000000"));
    assert!(text.contains("singlet overlap with the lowest eigenvector: 1.000000"));
}

#[test]
fn coherent_scales_its_checks_with_the_grid() {
    let output = bellsim()
        .args(["coherent", "--grid", "500"])
        .output()
        .expect("binary runs");
    assert!(output.status.success());
    let text = stdout(&output);
    assert!(text.contains("resolution-of-identity defect"));
    assert!(text.contains("operator reconstruction needs --grid >= 10000; skipped"));

    let output = bellsim()
        .args(["coherent", "--grid", "10000"])
        .output()
        .expect("binary runs");
    assert!(output.status.success());
    let text = stdout(&output);
    assert!(text.contains("operator rebuilt from theta(n) = n_z"));
    assert!(text.contains("Frobenius distance to the exact z operator"));

    let output = bellsim()
        .args(["coherent", "--grid", "10"])
        .output()
        .expect("binary runs");
    assert_eq!(output.status.code(), Some(1), "grid below the floor must be refused");
}

#[test]
fn relate_classifies_the_bundled_model() {
    for (flag, mode_line) in [
        (None, "mode: unrestricted bijections"),
        (Some("--within-group"), "mode: witnesses restricted to the group"),
    ] {
        let mut cmd = bellsim();
        cmd.args(["relate", "--model"]).arg(bundled_model());
        if let Some(flag) = flag {
            cmd.arg(flag);
        }
        let output = cmd.output().expect("binary runs");
        assert!(output.status.success(), "stderr: {}", stderr(&output));
        let text = stdout(&output);
        assert!(text.contains("model: 16 points, 2 generators (rot, mir), group order 32, 4 variables"));
        assert!(text.contains(mode_line));
        // The frozen classification: C, D, E mutually related, F apart.
        assert!(text.contains("  C   x x x ."));
        assert!(text.contains("  F   . . . x"));
        assert!(text.contains("C ~ D via point map ["));
        assert!(!text.contains("C ~ F"));
    }
}

#[test]
fn relate_rejects_a_broken_model_file_with_its_line() {
    let dir = tempfile::tempdir().expect("tempdir");
    let path = dir.path().join("broken.model");
    std::fs::write(&path, "points p q\ngen swap q z\n").expect("write model");
    let output = bellsim()
        .args(["relate", "--model"])
        .arg(&path)
        .output()
        .expect("binary runs");
    assert_eq!(output.status.code(), Some(1));
    let err = stderr(&output);
    assert!(err.starts_with("error: "), "stderr: {err}");
    assert!(err.contains("line 2"), "stderr: {err}");
}

#[test]
fn unknown_subcommands_exit_with_a_usage_error() {
    let output = bellsim().arg("frobnicate").output().expect("binary runs");
    assert_eq!(output.status.code(), Some(2), "clap usage errors exit 2");
}
