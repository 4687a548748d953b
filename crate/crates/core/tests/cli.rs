//! End-to-end CLI checks: command flow, file outputs, and exit codes
//! (0 success, 1 configuration error, 2 runtime fault).

use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_drivefusion"))
}

fn write_config(dir: &Path, body: &str) -> std::path::PathBuf {
    let path = dir.join("config.toml");
    std::fs::write(&path, body).unwrap();
    path
}

const TINY_CONFIG: &str = r#"
[run]
episodes = 2
max_steps = 20
dt = 0.02
seed = 5
out_dir = "OUT"

[track]
preset = "straight"

[agent]
hidden = [4]
warmup_steps = 8
batch_size = 4
"#;

fn tiny_config(dir: &Path) -> std::path::PathBuf {
    let out = dir.join("run");
    write_config(dir, &TINY_CONFIG.replace("OUT", out.to_str().unwrap()))
}

fn code(output: &Output) -> i32 {
    output.status.code().expect("process terminated by signal")
}

#[test]
fn train_eval_compare_extract_flow() {
    let dir = tempfile::tempdir().unwrap();
    let config = tiny_config(dir.path());

    let train = bin().args(["train", "--config"]).arg(&config).output().unwrap();
    assert_eq!(code(&train), 0, "train failed: {}", String::from_utf8_lossy(&train.stderr));
    let ckpt = dir.path().join("run/agent.ckpt");
    assert!(ckpt.exists());
    assert!(dir.path().join("run/metrics.csv").exists());

    let eval = bin()
        .args(["eval", "--config"])
        .arg(&config)
        .arg("--checkpoint")
        .arg(&ckpt)
        .args(["--mode", "fused"])
        .output()
        .unwrap();
    assert_eq!(code(&eval), 0, "eval failed: {}", String::from_utf8_lossy(&eval.stderr));
    let trace = dir.path().join("run/trace_fused_ep000.csv");
    assert!(trace.exists());
    assert!(dir.path().join("run/summary_fused.csv").exists());

    let compare = bin()
        .args(["compare", "--config"])
        .arg(&config)
        .arg("--checkpoint")
        .arg(&ckpt)
        .output()
        .unwrap();
    assert_eq!(code(&compare), 0);
    let table = String::from_utf8_lossy(&compare.stdout);
    for mode in ["ddpg_only", "apf_only", "tracking_only", "fused"] {
        assert!(table.contains(mode), "missing {mode} in:\n{table}");
    }
    assert!(dir.path().join("run/compare.csv").exists());

    let extract = bin()
        .args(["extract", "--trace"])
        .arg(&trace)
        .args(["--columns", "time,delta,tau"])
        .output()
        .unwrap();
    assert_eq!(code(&extract), 0);
    let selected = String::from_utf8_lossy(&extract.stdout);
    let mut lines = selected.lines();
    assert_eq!(lines.next().unwrap(), "time,delta,tau");
    assert_eq!(lines.count(), 20); // one row per executed step
}

#[test]
fn seed_override_changes_outputs_and_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let config = tiny_config(dir.path());
    let run = |seed: &str, out: &str| {
        let out_dir = dir.path().join(out);
        let status = bin()
            .args(["train", "--config"])
            .arg(&config)
            .args(["--seed", seed, "--out"])
            .arg(&out_dir)
            .status()
            .unwrap();
        assert!(status.success());
        std::fs::read(out_dir.join("metrics.csv")).unwrap()
    };
    let a = run("11", "a");
    let b = run("11", "b");
    let c = run("12", "c");
    assert_eq!(a, b);
    assert_ne!(a, c);
}

#[test]
fn configuration_errors_exit_1() {
    let dir = tempfile::tempdir().unwrap();

    // Invalid fusion weights.
    let bad = write_config(
        dir.path(),
        "[fusion]\nalpha = 0.9\nbeta = 0.9\nlambda = 0.2\n",
    );
    let out = bin().args(["train", "--config"]).arg(&bad).output().unwrap();
    assert_eq!(code(&out), 1);

    // Training scenario with opponents.
    let with_opp = dir.path().join("opp.toml");
    std::fs::write(
        &with_opp,
        "[track]\npreset = \"straight\"\n\n[[scenario.opponents]]\nstart_s = 50.0\n",
    )
    .unwrap();
    let out = bin().args(["train", "--config"]).arg(&with_opp).output().unwrap();
    assert_eq!(code(&out), 1);

    // Unreadable config path.
    let out = bin()
        .args(["train", "--config", "/nonexistent/config.toml"])
        .output()
        .unwrap();
    assert_eq!(code(&out), 1);

    // Unknown eval mode.
    let config = tiny_config(dir.path());
    let out = bin()
        .args(["eval", "--config"])
        .arg(&config)
        .args(["--checkpoint", "whatever.ckpt", "--mode", "turbo"])
        .output()
        .unwrap();
    assert_eq!(code(&out), 1);

    // Missing checkpoint file.
    let out = bin()
        .args(["eval", "--config"])
        .arg(&config)
        .args(["--checkpoint", "missing.ckpt"])
        .output()
        .unwrap();
    assert_eq!(code(&out), 1);

    // Unknown extract column.
    let out = bin()
        .args(["extract", "--trace", "/nonexistent/trace.csv", "--columns", "time"])
        .output()
        .unwrap();
    assert_eq!(code(&out), 1);
}

#[test]
fn corrupt_checkpoint_is_a_load_error_not_a_crash() {
    let dir = tempfile::tempdir().unwrap();
    let config = tiny_config(dir.path());
    let train = bin().args(["train", "--config"]).arg(&config).output().unwrap();
    assert_eq!(code(&train), 0, "{}", String::from_utf8_lossy(&train.stderr));

    // Truncate the checkpoint.
    let ckpt = dir.path().join("run/agent.ckpt");
    let bytes = std::fs::read(&ckpt).unwrap();
    let cut = dir.path().join("truncated.ckpt");
    std::fs::write(&cut, &bytes[..bytes.len() / 2]).unwrap();

    let out = bin()
        .args(["eval", "--config"])
        .arg(&config)
        .arg("--checkpoint")
        .arg(&cut)
        .output()
        .unwrap();
    assert_eq!(code(&out), 1);
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("checkpoint"), "stderr: {stderr}");
}

#[test]
fn track_file_config_works() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("track.toml"),
        "half_width = 5.0\nclosed = false\npoints = [[0.0, 0.0], [150.0, 0.0]]\n",
    )
    .unwrap();
    let out_dir = dir.path().join("run");
    let config = write_config(
        dir.path(),
        &format!(
            "[run]\nepisodes = 1\nmax_steps = 10\nout_dir = \"{}\"\n\n[track]\nfile = \"track.toml\"\n\n[agent]\nhidden = [4]\nwarmup_steps = 4\nbatch_size = 2\n",
            out_dir.display()
        ),
    );
    let out = bin().args(["train", "--config"]).arg(&config).output().unwrap();
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
}
