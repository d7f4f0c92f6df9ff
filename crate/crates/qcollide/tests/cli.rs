//! End-to-end checks of the command-line interface and its file outputs.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_qcollide"))
}

fn temp_dir(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("qcollide-cli-{tag}-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn run_ok(cmd: &mut Command) -> Output {
    let output = cmd.output().unwrap();
    assert!(
        output.status.success(),
        "command failed: {}\n{}",
        String::from_utf8_lossy(&output.stdout),
        String::from_utf8_lossy(&output.stderr)
    );
    output
}

#[test]
fn list_prints_the_full_registry() {
    let output = run_ok(bin().arg("list"));
    let text = String::from_utf8(output.stdout).unwrap();
    for id in [
        "fig1-pswap",
        "fig1-cswap",
        "fig2-pp",
        "fig2-pc",
        "fig3-pp-sweep",
        "fig3-pc-sweep",
        "fig4-cc",
        "fig4-cp",
        "fig5-pp",
        "fig6-cc",
        "fig7-cp",
    ] {
        assert!(text.contains(id), "registry listing is missing {id}");
    }
}

#[test]
fn unknown_scenario_exits_nonzero_with_one_line_diagnostic() {
    let out = temp_dir("bad-scenario");
    let output = bin()
        .args(["scenario", "fig9-zz", "--out"])
        .arg(&out)
        .output()
        .unwrap();
    assert!(!output.status.success());
    let stderr = String::from_utf8(output.stderr).unwrap();
    assert_eq!(stderr.lines().count(), 1, "diagnostic: {stderr}");
    assert!(stderr.contains("fig9-zz"));
    std::fs::remove_dir_all(&out).ok();
}

#[test]
fn scenario_run_writes_the_declared_files() {
    let out = temp_dir("scenario");
    run_ok(bin().args(["scenario", "fig1-pswap", "--out"]).arg(&out));
    let dir = out.join("fig1-pswap");
    for file in [
        "trajectory.csv",
        "bloch_path.csv",
        "summary.json",
        "manifest.json",
    ] {
        assert!(dir.join(file).exists(), "{file} missing");
    }

    let trajectory = std::fs::read_to_string(dir.join("trajectory.csv")).unwrap();
    let mut lines = trajectory.lines();
    assert_eq!(
        lines.next().unwrap(),
        "collision,bloch_x,bloch_y,bloch_z,fidelity,entropy,coherence"
    );
    assert_eq!(lines.count(), 1100);

    let summary: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.join("summary.json")).unwrap()).unwrap();
    let crossing = summary["first_collision_fidelity_ge_0_99"]
        .as_u64()
        .unwrap();
    assert!(crossing <= 1100);
    assert!(summary["final"]["fidelity"].as_f64().unwrap() > 0.99);
    assert_eq!(
        summary["parameters"]["gamma_se_over_halfpi"]
            .as_f64()
            .unwrap(),
        0.05
    );

    let manifest: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.join("manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["scenario"], "fig1-pswap");
    assert_eq!(manifest["outputs"].as_array().unwrap().len(), 3);
    assert!(manifest["duration_seconds"].as_f64().unwrap() >= 0.0);
    std::fs::remove_dir_all(&out).ok();
}

#[test]
fn incoherent_scenario_reports_monotone_distance_and_rising_z() {
    let out = temp_dir("fig4");
    run_ok(bin().args(["scenario", "fig4-cc", "--out"]).arg(&out));
    let dir = out.join("fig4-cc");
    let summary: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.join("summary.json")).unwrap()).unwrap();
    assert!(summary["distance"]["nd"].as_f64().unwrap() <= 1e-12);
    assert_eq!(summary["distance"]["monotone_non_increasing"], true);

    // The Bloch path climbs monotonically toward the pole.
    let bloch = std::fs::read_to_string(dir.join("bloch_path.csv")).unwrap();
    let zs: Vec<f64> = bloch
        .lines()
        .skip(1)
        .map(|line| line.split(',').nth(3).unwrap().parse().unwrap())
        .collect();
    assert_eq!(zs.len(), 1200);
    assert!(zs.windows(2).all(|w| w[1] >= w[0]));
    std::fs::remove_dir_all(&out).ok();
}

#[test]
fn run_command_handles_config_files_and_blp_grid() {
    let out = temp_dir("run");
    let config_path = out.join("weak.cfg");
    std::fs::write(
        &config_path,
        "# weak non-markovian model\n\
         model = nonmarkovian\n\
         se_kind = pswap\n\
         ee_kind = cswap\n\
         gamma_se_over_halfpi = 0.05\n\
         gamma_ee_over_halfpi = 0.93\n\
         n = 200\n",
    )
    .unwrap();
    run_ok(
        bin()
            .args(["run"])
            .arg(&config_path)
            .args(["--out"])
            .arg(&out)
            .args(["--grid-theta", "2", "--grid-phi", "4"]),
    );
    let dir = out.join("weak");
    let summary: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.join("summary.json")).unwrap()).unwrap();
    // Paired-distance columns and measure, plus the requested grid search.
    assert!(summary["distance"]["nd"].as_f64().is_some());
    assert_eq!(summary["blp_optimization"]["grid_theta"], 2);
    assert!(summary["blp_optimization"]["nd_max"].as_f64().unwrap() >= 0.0);
    let trajectory = std::fs::read_to_string(dir.join("trajectory.csv")).unwrap();
    assert!(trajectory
        .lines()
        .next()
        .unwrap()
        .ends_with("trace_distance,running_nd"));
    std::fs::remove_dir_all(&out).ok();
}

#[test]
fn sweep_command_requires_a_sweep_config() {
    let out = temp_dir("sweep");
    let wrong = out.join("wrong.cfg");
    std::fs::write(
        &wrong,
        "model = markovian\nse_kind = pswap\ngamma_se_over_halfpi = 0.05\nn = 10\n",
    )
    .unwrap();
    let output = bin()
        .args(["sweep"])
        .arg(&wrong)
        .args(["--out"])
        .arg(&out)
        .output()
        .unwrap();
    assert!(!output.status.success());
    assert!(String::from_utf8_lossy(&output.stderr).contains("model = sweep"));

    let config = out.join("grid.cfg");
    std::fs::write(
        &config,
        "model = sweep\n\
         se_kind = pswap\n\
         ee_kind = cswap\n\
         gamma_se_axis = 0.0,0.05\n\
         gamma_ee_axis = 0.90,0.93\n\
         n = 150\n",
    )
    .unwrap();
    run_ok(bin().args(["sweep"]).arg(&config).args(["--out"]).arg(&out));
    let sweep_csv = std::fs::read_to_string(out.join("grid").join("sweep.csv")).unwrap();
    let lines: Vec<&str> = sweep_csv.lines().collect();
    // Header row plus one row per system-environment axis value.
    assert_eq!(lines.len(), 3);
    assert!(lines[0].starts_with("gamma_se_over_halfpi\\gamma_ee_over_halfpi,"));
    // The zero-coupling row carries exactly zero memory.
    let first_row: Vec<&str> = lines[1].split(',').collect();
    assert_eq!(first_row[1].parse::<f64>().unwrap(), 0.0);
    assert_eq!(first_row[2].parse::<f64>().unwrap(), 0.0);
    std::fs::remove_dir_all(&out).ok();
}

#[test]
fn joint_carryover_flag_changes_the_dynamics() {
    let out = temp_dir("joint");
    let config_path = out.join("model.cfg");
    std::fs::write(
        &config_path,
        "model = nonmarkovian\n\
         se_kind = pswap\n\
         ee_kind = pswap\n\
         gamma_se_over_halfpi = 0.05\n\
         gamma_ee_over_halfpi = 0.93\n\
         n = 120\n",
    )
    .unwrap();
    run_ok(
        bin()
            .args(["run"])
            .arg(&config_path)
            .args(["--out"])
            .arg(out.join("marginal")),
    );
    run_ok(
        bin()
            .args(["run"])
            .arg(&config_path)
            .args(["--out"])
            .arg(out.join("joint"))
            .arg("--joint-carryover"),
    );
    let a = std::fs::read_to_string(out.join("marginal/model/trajectory.csv")).unwrap();
    let b = std::fs::read_to_string(out.join("joint/model/trajectory.csv")).unwrap();
    assert_ne!(a, b, "carryover mode had no effect");

    let summary: serde_json::Value = serde_json::from_str(
        &std::fs::read_to_string(out.join("joint/model/summary.json")).unwrap(),
    )
    .unwrap();
    assert_eq!(summary["parameters"]["carryover"], "joint");
    std::fs::remove_dir_all(&out).ok();
}

/// Re-running a scenario produces byte-identical data files, and the manifest
/// references every emitted data file.
#[test]
fn scenario_reruns_are_byte_identical() {
    let out_a = temp_dir("det-a");
    let out_b = temp_dir("det-b");
    run_ok(bin().args(["scenario", "fig1-cswap", "--out"]).arg(&out_a));
    run_ok(bin().args(["scenario", "fig1-cswap", "--out"]).arg(&out_b));
    for file in ["trajectory.csv", "bloch_path.csv", "summary.json"] {
        let a = std::fs::read(out_a.join("fig1-cswap").join(file)).unwrap();
        let b = std::fs::read(out_b.join("fig1-cswap").join(file)).unwrap();
        assert_eq!(a, b, "{file} not deterministic");
    }
    let manifest: serde_json::Value = serde_json::from_str(
        &std::fs::read_to_string(out_a.join("fig1-cswap/manifest.json")).unwrap(),
    )
    .unwrap();
    let outputs: Vec<String> = manifest["outputs"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_str().unwrap().to_string())
        .collect();
    for file in ["trajectory.csv", "bloch_path.csv", "summary.json"] {
        assert!(
            outputs.iter().any(|o| o.ends_with(file)),
            "manifest does not reference {file}"
        );
        assert!(Path::new(&outputs[0]).exists());
    }
    std::fs::remove_dir_all(&out_a).ok();
    std::fs::remove_dir_all(&out_b).ok();
}
