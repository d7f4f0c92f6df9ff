//! Scenario registry, sweep engine, configuration loading, and data export:
//! the surface the CLI drives.
//!
//! Each scenario id maps to one fully parameterized model; running it writes
//! a trajectory CSV, a Bloch-path CSV, a summary JSON, and a manifest JSON
//! into `<out>/<scenario-id>/`. Data files are deterministic: two runs of the
//! same scenario are byte-identical (the manifest carries the wall-clock
//! duration and is excluded from that guarantee).

pub mod config;
pub mod export;
pub mod sweep;

use std::f64::consts::FRAC_PI_2;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde_json::json;

use crate::metrics::PearsonSeries;
use crate::model::{
    optimize_blp, run_distance_pair, run_single_qubit, run_sync, CarryoverMode, CollisionModelSpec,
    CouplingKind, SyncModelSpec, TrajectoryRecord,
};
use crate::state::PureState;
use crate::{Error, Result};

pub use config::{load_config, parse_config, write_config, LoadedConfig};
pub use sweep::{run_sweep, run_sweep_sequential, SweepGrid, SweepRequest};

/// Closed registry of built-in scenarios.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScenarioId {
    Fig1Pswap,
    Fig1Cswap,
    Fig2Pp,
    Fig2Pc,
    Fig3PpSweep,
    Fig3PcSweep,
    Fig4Cc,
    Fig4Cp,
    Fig5Pp,
    Fig6Cc,
    Fig7Cp,
}

impl ScenarioId {
    pub const ALL: [ScenarioId; 11] = [
        ScenarioId::Fig1Pswap,
        ScenarioId::Fig1Cswap,
        ScenarioId::Fig2Pp,
        ScenarioId::Fig2Pc,
        ScenarioId::Fig3PpSweep,
        ScenarioId::Fig3PcSweep,
        ScenarioId::Fig4Cc,
        ScenarioId::Fig4Cp,
        ScenarioId::Fig5Pp,
        ScenarioId::Fig6Cc,
        ScenarioId::Fig7Cp,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            ScenarioId::Fig1Pswap => "fig1-pswap",
            ScenarioId::Fig1Cswap => "fig1-cswap",
            ScenarioId::Fig2Pp => "fig2-pp",
            ScenarioId::Fig2Pc => "fig2-pc",
            ScenarioId::Fig3PpSweep => "fig3-pp-sweep",
            ScenarioId::Fig3PcSweep => "fig3-pc-sweep",
            ScenarioId::Fig4Cc => "fig4-cc",
            ScenarioId::Fig4Cp => "fig4-cp",
            ScenarioId::Fig5Pp => "fig5-pp",
            ScenarioId::Fig6Cc => "fig6-cc",
            ScenarioId::Fig7Cp => "fig7-cp",
        }
    }

    /// One-line description for the registry listing.
    pub fn describe(&self) -> &'static str {
        match self {
            ScenarioId::Fig1Pswap => {
                "memoryless pswap coupling, gamma_se=0.05(pi/2), n=1100: |+> homogenizes to |0> along a spiral"
            }
            ScenarioId::Fig1Cswap => {
                "memoryless cswap coupling, gamma_se=0.05(pi/2), n=1100: |+> homogenizes to |0> along a straight xz path"
            }
            ScenarioId::Fig2Pp => {
                "pswap-pswap with unit memory, gamma_se=0.05(pi/2), gamma_ee=0.93(pi/2), n=1200: trace-distance revivals for the |+>/|-> pair"
            }
            ScenarioId::Fig2Pc => {
                "pswap-cswap with unit memory, same strengths, n=1200: stronger revivals than pswap-pswap"
            }
            ScenarioId::Fig3PpSweep => {
                "memory-measure sweep for pswap-pswap, gamma_se=0.00-0.10, gamma_ee=0.90-0.98 (pi/2 units), n=12000 per cell"
            }
            ScenarioId::Fig3PcSweep => {
                "memory-measure sweep for pswap-cswap over the same grid, n=12000 per cell"
            }
            ScenarioId::Fig4Cc => {
                "cswap-cswap, gamma_se=0.05(pi/2), gamma_ee=0.93(pi/2), n=1200: monotone distance decay, no memory"
            }
            ScenarioId::Fig4Cp => {
                "cswap-pswap, same strengths, n=1200: monotone distance decay, no memory"
            }
            ScenarioId::Fig5Pp => {
                "two-qubit pswap/pswap sync model, omega=1, dt=0.04, gamma_se=0.03(pi/2), n=2500: anti-synchronization, Pearson -> -1"
            }
            ScenarioId::Fig6Cc => {
                "two-qubit cswap/cswap sync model, same parameters: no phase locking"
            }
            ScenarioId::Fig7Cp => {
                "two-qubit cswap/pswap sync model, same parameters: no phase locking"
            }
        }
    }
}

impl std::str::FromStr for ScenarioId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ScenarioId::ALL
            .into_iter()
            .find(|id| id.as_str() == s)
            .ok_or_else(|| Error::UnknownScenario(s.to_string()))
    }
}

impl std::fmt::Display for ScenarioId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// The fully parameterized model behind a scenario id.
#[derive(Debug, Clone)]
pub enum ScenarioSpec {
    /// Single-qubit run; `distance_pair` adds the |+>/|-> paired distance
    /// analysis to the trajectory output.
    Single {
        spec: CollisionModelSpec,
        distance_pair: bool,
    },
    Sweep(SweepRequest),
    Sync(SyncModelSpec),
}

/// Resolve a scenario id to its model parameters.
pub fn registry_spec(id: ScenarioId) -> ScenarioSpec {
    use CouplingKind::{Coherent, Incoherent};
    let gamma = |units: f64| units * FRAC_PI_2;
    match id {
        ScenarioId::Fig1Pswap => ScenarioSpec::Single {
            spec: CollisionModelSpec::new(Coherent, Coherent, gamma(0.05), 0.0, 1100)
                .expect("valid"),
            distance_pair: false,
        },
        ScenarioId::Fig1Cswap => ScenarioSpec::Single {
            spec: CollisionModelSpec::new(Incoherent, Coherent, gamma(0.05), 0.0, 1100)
                .expect("valid"),
            distance_pair: false,
        },
        ScenarioId::Fig2Pp => ScenarioSpec::Single {
            spec: CollisionModelSpec::new(Coherent, Coherent, gamma(0.05), gamma(0.93), 1200)
                .expect("valid"),
            distance_pair: true,
        },
        ScenarioId::Fig2Pc => ScenarioSpec::Single {
            spec: CollisionModelSpec::new(Coherent, Incoherent, gamma(0.05), gamma(0.93), 1200)
                .expect("valid"),
            distance_pair: true,
        },
        ScenarioId::Fig3PpSweep => ScenarioSpec::Sweep(SweepRequest {
            se_kind: Coherent,
            ee_kind: Coherent,
            gamma_se_axis: default_axis(0.00, 0.10),
            gamma_ee_axis: default_axis(0.90, 0.98),
            n_collisions: 12000,
        }),
        ScenarioId::Fig3PcSweep => ScenarioSpec::Sweep(SweepRequest {
            se_kind: Coherent,
            ee_kind: Incoherent,
            gamma_se_axis: default_axis(0.00, 0.10),
            gamma_ee_axis: default_axis(0.90, 0.98),
            n_collisions: 12000,
        }),
        ScenarioId::Fig4Cc => ScenarioSpec::Single {
            spec: CollisionModelSpec::new(Incoherent, Incoherent, gamma(0.05), gamma(0.93), 1200)
                .expect("valid"),
            distance_pair: true,
        },
        ScenarioId::Fig4Cp => ScenarioSpec::Single {
            spec: CollisionModelSpec::new(Incoherent, Coherent, gamma(0.05), gamma(0.93), 1200)
                .expect("valid"),
            distance_pair: true,
        },
        ScenarioId::Fig5Pp => ScenarioSpec::Sync(sync_spec(Coherent, Coherent)),
        ScenarioId::Fig6Cc => ScenarioSpec::Sync(sync_spec(Incoherent, Incoherent)),
        ScenarioId::Fig7Cp => ScenarioSpec::Sync(sync_spec(Incoherent, Coherent)),
    }
}

fn sync_spec(s1: CouplingKind, s2: CouplingKind) -> SyncModelSpec {
    SyncModelSpec::new(s1, s2, 0.03 * FRAC_PI_2, 1.0, 1.0, 0.04, 2500, 100, 50).expect("valid")
}

/// Inclusive 0.01-step axis in units of pi/2.
fn default_axis(start: f64, stop: f64) -> Vec<f64> {
    let count = ((stop - start) / 0.01 + 0.5).floor() as usize + 1;
    (0..count).map(|i| start + 0.01 * i as f64).collect()
}

/// Options shared by the scenario and config runners.
#[derive(Debug, Clone, Copy, Default)]
pub struct RunOptions {
    /// Thread the correlated system/next-unit state between non-Markovian
    /// steps instead of the default marginal semantics.
    pub joint_carryover: bool,
    /// Run the antipodal-pair grid search at this resolution and report the
    /// optimum in the summary (single-qubit models only).
    pub blp_grid: Option<(usize, usize)>,
}

/// Run record: what ran, with which parameters, how long it took, and which
/// files it produced. Every emitted data file is referenced by exactly one
/// manifest.
#[derive(Debug, Clone)]
pub struct RunManifest {
    pub scenario: String,
    pub engine_version: String,
    pub parameters: serde_json::Value,
    pub duration_seconds: f64,
    pub outputs: Vec<PathBuf>,
}

impl RunManifest {
    fn to_json(&self) -> serde_json::Value {
        json!({
            "scenario": self.scenario,
            "engine_version": self.engine_version,
            "parameters": self.parameters,
            "duration_seconds": self.duration_seconds,
            "outputs": self.outputs.iter().map(|p| p.display().to_string()).collect::<Vec<_>>(),
        })
    }
}

/// Execute a registry scenario, writing its data files under
/// `<out_dir>/<id>/`.
pub fn run_scenario(id: ScenarioId, out_dir: &Path, opts: &RunOptions) -> Result<RunManifest> {
    let dir = out_dir.join(id.as_str());
    run_resolved(id.as_str(), registry_spec(id), &dir, opts)
}

/// Execute a loaded configuration, writing its data files under
/// `<out_dir>/<name>/`.
pub fn run_config(
    config: &LoadedConfig,
    name: &str,
    out_dir: &Path,
    opts: &RunOptions,
) -> Result<RunManifest> {
    let dir = out_dir.join(name);
    let resolved = match config {
        LoadedConfig::Collision(spec) => ScenarioSpec::Single {
            spec: spec.clone(),
            distance_pair: !spec.is_markovian(),
        },
        LoadedConfig::Sync(spec) => ScenarioSpec::Sync(spec.clone()),
        LoadedConfig::Sweep(request) => ScenarioSpec::Sweep(request.clone()),
    };
    run_resolved(name, resolved, &dir, opts)
}

fn run_resolved(
    name: &str,
    resolved: ScenarioSpec,
    dir: &Path,
    opts: &RunOptions,
) -> Result<RunManifest> {
    let started = Instant::now();
    let (parameters, outputs) = match resolved {
        ScenarioSpec::Single {
            mut spec,
            distance_pair,
        } => {
            if opts.joint_carryover {
                spec = spec.with_carryover(CarryoverMode::Joint);
            }
            execute_single(name, &spec, distance_pair, dir, opts)?
        }
        ScenarioSpec::Sweep(request) => execute_sweep(name, &request, dir)?,
        ScenarioSpec::Sync(spec) => execute_sync(name, &spec, dir)?,
    };
    let manifest = RunManifest {
        scenario: name.to_string(),
        engine_version: env!("CARGO_PKG_VERSION").to_string(),
        parameters,
        duration_seconds: started.elapsed().as_secs_f64(),
        outputs,
    };
    let manifest_path = dir.join("manifest.json");
    export::emit_json(&manifest.to_json(), &manifest_path)?;
    Ok(manifest)
}

fn collision_parameters(spec: &CollisionModelSpec, distance_pair: bool) -> serde_json::Value {
    json!({
        "model": if spec.is_markovian() { "markovian" } else { "nonmarkovian" },
        "se_kind": spec.se_kind.as_str(),
        "ee_kind": if spec.is_markovian() { serde_json::Value::Null } else { spec.ee_kind.as_str().into() },
        "gamma_se_radians": spec.gamma_se,
        "gamma_se_over_halfpi": spec.gamma_se / FRAC_PI_2,
        "gamma_ee_radians": spec.gamma_ee,
        "gamma_ee_over_halfpi": spec.gamma_ee / FRAC_PI_2,
        "n_collisions": spec.n_collisions,
        "carryover": match spec.carryover {
            CarryoverMode::Marginal => "marginal",
            CarryoverMode::Joint => "joint",
        },
        "distance_pair": distance_pair,
    })
}

fn sync_parameters(spec: &SyncModelSpec) -> serde_json::Value {
    json!({
        "model": "sync",
        "s1_kind": spec.s1_kind.as_str(),
        "s2_kind": spec.s2_kind.as_str(),
        "gamma_se_radians": spec.gamma_se,
        "gamma_se_over_halfpi": spec.gamma_se / FRAC_PI_2,
        "omega1": spec.omega1,
        "omega2": spec.omega2,
        "dt": spec.dt,
        "n_collisions": spec.n_collisions,
        "window_width": spec.window_width,
        "window_stride": spec.window_stride,
    })
}

fn sweep_parameters(request: &SweepRequest) -> serde_json::Value {
    json!({
        "model": "sweep",
        "se_kind": request.se_kind.as_str(),
        "ee_kind": request.ee_kind.as_str(),
        "gamma_se_axis_over_halfpi": request.gamma_se_axis,
        "gamma_ee_axis_over_halfpi": request.gamma_ee_axis,
        "gamma_se_axis_radians": request.gamma_se_axis.iter().map(|u| u * FRAC_PI_2).collect::<Vec<_>>(),
        "gamma_ee_axis_radians": request.gamma_ee_axis.iter().map(|u| u * FRAC_PI_2).collect::<Vec<_>>(),
        "n_collisions": request.n_collisions,
    })
}

/// First collision index at which the value reaches the threshold.
fn first_crossing(values: impl Iterator<Item = f64>, threshold: f64) -> Option<usize> {
    values
        .enumerate()
        .find(|(_, v)| *v >= threshold)
        .map(|(i, _)| i)
}

fn bloch_path_length(records: &[TrajectoryRecord]) -> f64 {
    records
        .windows(2)
        .map(|w| {
            let d = w[1].bloch.add(&w[0].bloch.negated());
            d.norm()
        })
        .sum()
}

fn execute_single(
    name: &str,
    spec: &CollisionModelSpec,
    distance_pair: bool,
    dir: &Path,
    opts: &RunOptions,
) -> Result<(serde_json::Value, Vec<PathBuf>)> {
    let mut records = run_single_qubit(spec)?;

    let mut distance_summary = serde_json::Value::Null;
    if distance_pair {
        let plus = PureState::plus().density();
        let minus = PureState::minus().density();
        let pair = run_distance_pair(spec, &plus, &minus)?;
        for (record, (d, nd)) in records
            .iter_mut()
            .zip(pair.distances.values().iter().zip(&pair.running_nd))
        {
            record.trace_distance = Some(*d);
            record.running_nd = Some(*nd);
        }
        distance_summary = json!({
            "pair": "plus/minus",
            "nd": pair.nd,
            "monotone_non_increasing": pair.distances.is_monotone_non_increasing(),
            "max_increment": pair.distances.max_increment(),
            "final_distance": pair.distances.values().last().copied(),
        });
    }

    let trajectory_path = dir.join("trajectory.csv");
    export::emit_trajectory_csv(&records, &trajectory_path)?;
    let bloch_path = dir.join("bloch_path.csv");
    export::emit_bloch_csv(&records, &bloch_path)?;

    let blp_summary = match opts.blp_grid {
        Some((n_theta, n_phi)) => {
            let optimum = optimize_blp(spec, n_theta, n_phi)?;
            json!({
                "grid_theta": n_theta,
                "grid_phi": n_phi,
                "nd_max": optimum.nd_max,
                "theta": optimum.theta,
                "phi": optimum.phi,
            })
        }
        None => serde_json::Value::Null,
    };

    let last = records.last().expect("non-empty");
    let summary = json!({
        "scenario": name,
        "parameters": collision_parameters(spec, distance_pair),
        "final": {
            "collision": last.collision,
            "fidelity": last.fidelity_to_env,
            "entropy": last.entropy,
            "coherence": last.coherence,
            "bloch": [last.bloch.x, last.bloch.y, last.bloch.z],
        },
        "first_collision_fidelity_ge_0_99": first_crossing(records.iter().map(|r| r.fidelity_to_env), 0.99),
        "max_abs_bloch_y": records.iter().map(|r| r.bloch.y.abs()).fold(0.0, f64::max),
        "bloch_path_length": bloch_path_length(&records),
        "distance": distance_summary,
        "blp_optimization": blp_summary,
    });
    let summary_path = dir.join("summary.json");
    export::emit_json(&summary, &summary_path)?;

    Ok((
        collision_parameters(spec, distance_pair),
        vec![trajectory_path, bloch_path, summary_path],
    ))
}

fn execute_sweep(
    name: &str,
    request: &SweepRequest,
    dir: &Path,
) -> Result<(serde_json::Value, Vec<PathBuf>)> {
    let grid = run_sweep(request)?;
    let sweep_path = dir.join("sweep.csv");
    export::emit_sweep_csv(&grid, &sweep_path)?;

    let nd_min = grid.values.iter().copied().fold(f64::INFINITY, f64::min);
    let summary = json!({
        "scenario": name,
        "parameters": sweep_parameters(request),
        "cells": grid.values.len(),
        "nd_min": nd_min,
        "nd_max": grid.max_value(),
    });
    let summary_path = dir.join("summary.json");
    export::emit_json(&summary, &summary_path)?;

    Ok((sweep_parameters(request), vec![sweep_path, summary_path]))
}

fn pearson_summary(series: &PearsonSeries) -> serde_json::Value {
    let windows: Vec<serde_json::Value> = series
        .values()
        .iter()
        .map(|(start, c)| json!([start, c]))
        .collect();
    json!({
        "window_width": series.window_width(),
        "window_stride": series.stride(),
        "last_defined": series.last_defined().map(|(start, value)| json!({
            "window_start": start,
            "value": value,
        })),
        "tail_defined": series
            .tail_defined(10)
            .into_iter()
            .map(|(start, value)| json!([start, value]))
            .collect::<Vec<_>>(),
        "windows": windows,
    })
}

fn execute_sync(
    name: &str,
    spec: &SyncModelSpec,
    dir: &Path,
) -> Result<(serde_json::Value, Vec<PathBuf>)> {
    let run = run_sync(spec)?;

    let trajectory_path = dir.join("trajectory.csv");
    export::emit_sync_csv(&run.records, &trajectory_path)?;
    let bloch_path = dir.join("bloch_path.csv");
    export::emit_sync_bloch_csv(&run.records, &bloch_path)?;

    let last = run.records.last().expect("non-empty");
    let summary = json!({
        "scenario": name,
        "parameters": sync_parameters(spec),
        "final": {
            "collision": last.collision,
            "fidelity_s1": last.fidelity_s1,
            "fidelity_s2": last.fidelity_s2,
            "fidelity_joint": last.fidelity_joint,
            "sigma_x_s1": last.sigma_x_s1,
            "sigma_x_s2": last.sigma_x_s2,
        },
        "first_collision_fidelity_ge_0_99": {
            "s1": first_crossing(run.records.iter().map(|r| r.fidelity_s1), 0.99),
            "s2": first_crossing(run.records.iter().map(|r| r.fidelity_s2), 0.99),
            "joint": first_crossing(run.records.iter().map(|r| r.fidelity_joint), 0.99),
        },
        "pearson": pearson_summary(&run.pearson),
    });
    let summary_path = dir.join("summary.json");
    export::emit_json(&summary, &summary_path)?;

    Ok((
        sync_parameters(spec),
        vec![trajectory_path, bloch_path, summary_path],
    ))
}
