//! Parameter-sweep engine: a grid of (gamma_se, gamma_ee) cells, each scored
//! by the distance measure of the fixed `|+>/|->` pair.

use std::f64::consts::FRAC_PI_2;

use crate::model::{run_distance_pair, CollisionModelSpec, CouplingKind};
use crate::par;
use crate::state::PureState;
use crate::{Error, Result};

/// A sweep to run: coupling kinds, both axes in units of pi/2, and the
/// collision count per cell.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRequest {
    pub se_kind: CouplingKind,
    pub ee_kind: CouplingKind,
    /// System-environment axis, units of pi/2, strictly increasing.
    pub gamma_se_axis: Vec<f64>,
    /// Intra-environment axis, units of pi/2, strictly increasing.
    pub gamma_ee_axis: Vec<f64>,
    pub n_collisions: usize,
}

impl SweepRequest {
    pub fn check(&self) -> Result<()> {
        for (name, axis) in [
            ("gamma_se_axis", &self.gamma_se_axis),
            ("gamma_ee_axis", &self.gamma_ee_axis),
        ] {
            if axis.is_empty() {
                return Err(Error::InvalidSpec(format!("{name} must be non-empty")));
            }
            if axis.windows(2).any(|w| w[1] <= w[0]) {
                return Err(Error::InvalidSpec(format!(
                    "{name} must be strictly increasing"
                )));
            }
            if axis.iter().any(|v| !v.is_finite()) {
                return Err(Error::InvalidSpec(format!("{name} must be finite")));
            }
        }
        if self.n_collisions == 0 {
            return Err(Error::InvalidSpec("n_collisions must be at least 1".into()));
        }
        Ok(())
    }

    fn cell_spec(&self, se_units: f64, ee_units: f64) -> Result<CollisionModelSpec> {
        CollisionModelSpec::new(
            self.se_kind,
            self.ee_kind,
            se_units * FRAC_PI_2,
            ee_units * FRAC_PI_2,
            self.n_collisions,
        )
    }
}

/// Distance-measure values over the sweep grid. Rows follow the
/// system-environment axis, columns the intra-environment axis.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepGrid {
    pub gamma_se_axis: Vec<f64>,
    pub gamma_ee_axis: Vec<f64>,
    pub n_collisions: usize,
    /// Row-major, `gamma_se_axis.len() x gamma_ee_axis.len()`.
    pub values: Vec<f64>,
}

impl SweepGrid {
    pub fn value(&self, se_index: usize, ee_index: usize) -> f64 {
        self.values[se_index * self.gamma_ee_axis.len() + ee_index]
    }

    pub fn max_value(&self) -> f64 {
        self.values.iter().copied().fold(0.0, f64::max)
    }
}

/// Evaluate every grid cell. With the `parallel` feature the cells run on
/// rayon; output is identical to the sequential path regardless of schedule
/// or worker count.
pub fn run_sweep(request: &SweepRequest) -> Result<SweepGrid> {
    compute(request, true)
}

/// Strictly sequential evaluation of the same grid, for benchmarking and for
/// verifying schedule independence.
pub fn run_sweep_sequential(request: &SweepRequest) -> Result<SweepGrid> {
    compute(request, false)
}

fn compute(request: &SweepRequest, parallel: bool) -> Result<SweepGrid> {
    request.check()?;
    let mut cells = Vec::with_capacity(request.gamma_se_axis.len() * request.gamma_ee_axis.len());
    for &se in &request.gamma_se_axis {
        for &ee in &request.gamma_ee_axis {
            cells.push((se, ee));
        }
    }
    let plus = PureState::plus().density();
    let minus = PureState::minus().density();
    let eval = |(se, ee): (f64, f64)| -> Result<f64> {
        let spec = request.cell_spec(se, ee)?;
        Ok(run_distance_pair(&spec, &plus, &minus)?.nd)
    };
    let results = if parallel {
        par::map(cells, eval)
    } else {
        par::map_sequential(cells, eval)
    };
    let values = results.into_iter().collect::<Result<Vec<f64>>>()?;
    Ok(SweepGrid {
        gamma_se_axis: request.gamma_se_axis.clone(),
        gamma_ee_axis: request.gamma_ee_axis.clone(),
        n_collisions: request.n_collisions,
        values,
    })
}
