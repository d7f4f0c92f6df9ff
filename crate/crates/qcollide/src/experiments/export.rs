//! CSV and JSON writers. Floats in CSV carry 17 significant digits so a
//! re-read reproduces every double bit-exactly.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use crate::experiments::sweep::SweepGrid;
use crate::model::{SyncRecord, TrajectoryRecord};
use crate::{Error, Result};

/// 17-significant-digit scientific notation; round-trips any finite double.
pub fn format_float(x: f64) -> String {
    format!("{x:.16e}")
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    if let Some(parent) = path.parent() {
        std::fs::create_dir_all(parent).map_err(|e| Error::io(parent, e))?;
    }
    Ok(BufWriter::new(
        File::create(path).map_err(|e| Error::io(path, e))?,
    ))
}

fn finish(mut w: BufWriter<File>, path: &Path) -> Result<()> {
    w.flush().map_err(|e| Error::io(path, e))
}

/// Write single-qubit trajectory records. The distance columns appear only
/// when the records carry them (paired runs).
pub fn emit_trajectory_csv(records: &[TrajectoryRecord], path: &Path) -> Result<()> {
    if records.is_empty() {
        return Err(Error::Shape("cannot emit an empty trajectory".into()));
    }
    let with_distance = records[0].trace_distance.is_some();
    let mut w = create(path)?;
    let io = |e| Error::io(path, e);
    if with_distance {
        writeln!(
            w,
            "collision,bloch_x,bloch_y,bloch_z,fidelity,entropy,coherence,trace_distance,running_nd"
        )
        .map_err(io)?;
    } else {
        writeln!(
            w,
            "collision,bloch_x,bloch_y,bloch_z,fidelity,entropy,coherence"
        )
        .map_err(io)?;
    }
    for r in records {
        let base = format!(
            "{},{},{},{},{},{},{}",
            r.collision,
            format_float(r.bloch.x),
            format_float(r.bloch.y),
            format_float(r.bloch.z),
            format_float(r.fidelity_to_env),
            format_float(r.entropy),
            format_float(r.coherence),
        );
        if with_distance {
            writeln!(
                w,
                "{base},{},{}",
                format_float(r.trace_distance.unwrap_or(f64::NAN)),
                format_float(r.running_nd.unwrap_or(f64::NAN)),
            )
            .map_err(io)?;
        } else {
            writeln!(w, "{base}").map_err(io)?;
        }
    }
    finish(w, path)
}

/// Bloch-ball path of a single-qubit trajectory.
pub fn emit_bloch_csv(records: &[TrajectoryRecord], path: &Path) -> Result<()> {
    if records.is_empty() {
        return Err(Error::Shape("cannot emit an empty trajectory".into()));
    }
    let mut w = create(path)?;
    let io = |e| Error::io(path, e);
    writeln!(w, "collision,x,y,z").map_err(io)?;
    for r in records {
        writeln!(
            w,
            "{},{},{},{}",
            r.collision,
            format_float(r.bloch.x),
            format_float(r.bloch.y),
            format_float(r.bloch.z)
        )
        .map_err(io)?;
    }
    finish(w, path)
}

/// Synchronization-run trajectory records.
pub fn emit_sync_csv(records: &[SyncRecord], path: &Path) -> Result<()> {
    if records.is_empty() {
        return Err(Error::Shape("cannot emit an empty trajectory".into()));
    }
    let mut w = create(path)?;
    let io = |e| Error::io(path, e);
    writeln!(
        w,
        "collision,sigma_x_s1,sigma_x_s2,fidelity_s1,fidelity_s2,fidelity_joint,entropy,coherence"
    )
    .map_err(io)?;
    for r in records {
        writeln!(
            w,
            "{},{},{},{},{},{},{},{}",
            r.collision,
            format_float(r.sigma_x_s1),
            format_float(r.sigma_x_s2),
            format_float(r.fidelity_s1),
            format_float(r.fidelity_s2),
            format_float(r.fidelity_joint),
            format_float(r.entropy),
            format_float(r.coherence),
        )
        .map_err(io)?;
    }
    finish(w, path)
}

/// Bloch paths of both marginals of a synchronization run.
pub fn emit_sync_bloch_csv(records: &[SyncRecord], path: &Path) -> Result<()> {
    if records.is_empty() {
        return Err(Error::Shape("cannot emit an empty trajectory".into()));
    }
    let mut w = create(path)?;
    let io = |e| Error::io(path, e);
    writeln!(w, "collision,s1_x,s1_y,s1_z,s2_x,s2_y,s2_z").map_err(io)?;
    for r in records {
        writeln!(
            w,
            "{},{},{},{},{},{},{}",
            r.collision,
            format_float(r.bloch_s1.x),
            format_float(r.bloch_s1.y),
            format_float(r.bloch_s1.z),
            format_float(r.bloch_s2.x),
            format_float(r.bloch_s2.y),
            format_float(r.bloch_s2.z),
        )
        .map_err(io)?;
    }
    finish(w, path)
}

/// Sweep grid as a CSV matrix: first row is the intra-environment axis,
/// first column the system-environment axis, both in units of pi/2.
pub fn emit_sweep_csv(grid: &SweepGrid, path: &Path) -> Result<()> {
    let mut w = create(path)?;
    let io = |e| Error::io(path, e);
    let header: Vec<String> = std::iter::once("gamma_se_over_halfpi\\gamma_ee_over_halfpi".into())
        .chain(grid.gamma_ee_axis.iter().map(|v| format_float(*v)))
        .collect();
    writeln!(w, "{}", header.join(",")).map_err(io)?;
    for (i, se) in grid.gamma_se_axis.iter().enumerate() {
        let row: Vec<String> = std::iter::once(format_float(*se))
            .chain((0..grid.gamma_ee_axis.len()).map(|j| format_float(grid.value(i, j))))
            .collect();
        writeln!(w, "{}", row.join(",")).map_err(io)?;
    }
    finish(w, path)
}

/// Pretty-printed JSON with a trailing newline.
pub fn emit_json(value: &serde_json::Value, path: &Path) -> Result<()> {
    let mut w = create(path)?;
    let io = |e| Error::io(path, e);
    serde_json::to_writer_pretty(&mut w, value).map_err(|e| Error::io(path, e.into()))?;
    writeln!(w).map_err(io)?;
    finish(w, path)
}
