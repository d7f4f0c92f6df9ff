//! Single-qubit trajectory runners: Markovian and non-Markovian steps,
//! paired distance runs, and the memory-measure grid search.

use crate::metrics::{
    blp_measure, fidelity_qubit, l1_coherence, running_blp, trace_distance, von_neumann_entropy,
    DistanceSeries,
};
use crate::model::{apply_pair_coupling, CarryoverMode, CollisionModelSpec, TrajectoryRecord};
use crate::par;
use crate::state::{BlochVector, DensityMatrix, PureState};
use crate::{Error, Result};

/// Environment memory handed from one non-Markovian step to the next.
///
/// `Marginal` carries the reduced state of the unit the system will collide
/// with next (the only memory channel of the model as written). `Joint`
/// carries the correlated system/next-unit state instead; comparison mode
/// only.
#[derive(Debug, Clone, PartialEq)]
pub enum Carryover {
    Marginal(DensityMatrix),
    Joint(DensityMatrix),
}

impl Carryover {
    /// Initial carryover for a trajectory: a fresh unit, uncorrelated.
    pub fn initial(spec: &CollisionModelSpec, system: &DensityMatrix) -> Result<Self> {
        match spec.carryover {
            CarryoverMode::Marginal => Ok(Carryover::Marginal(spec.env_state.clone())),
            CarryoverMode::Joint => Ok(Carryover::Joint(system.tensor(&spec.env_state)?)),
        }
    }
}

/// One memoryless collision: attach a fresh environment unit, couple it to
/// the system, trace it out.
pub fn markovian_step(spec: &CollisionModelSpec, rho_s: &DensityMatrix) -> Result<DensityMatrix> {
    if spec.gamma_ee != 0.0 {
        return Err(Error::InvalidSpec(
            "markovian_step requires gamma_ee = 0".into(),
        ));
    }
    let register = rho_s.tensor(&spec.env_state)?;
    let coupled = apply_pair_coupling(spec.se_kind, spec.gamma_se, &register, 0, 1)?;
    Ok(coupled.partial_trace(&[0])?.stabilized())
}

/// One collision with intra-environment memory.
///
/// Register order is (system, current unit, next unit). The system couples to
/// the current unit, then the current unit couples to the next one, and both
/// units are traced out of the system state. The next unit's reduced state
/// (which now carries system information) becomes the carryover.
pub fn nonmarkov_step(
    spec: &CollisionModelSpec,
    rho_s: &DensityMatrix,
    carry: &Carryover,
) -> Result<(DensityMatrix, Carryover)> {
    match carry {
        Carryover::Marginal(unit) => {
            let register = rho_s.tensor(unit)?.tensor(&spec.env_state)?;
            let evolved = step_register(spec, &register)?;
            let next_system = evolved.partial_trace(&[0])?.stabilized();
            let next_carry = Carryover::Marginal(evolved.partial_trace(&[2])?.stabilized());
            Ok((next_system, next_carry))
        }
        Carryover::Joint(system_and_unit) => {
            let register = system_and_unit.tensor(&spec.env_state)?;
            let evolved = step_register(spec, &register)?;
            let next_system = evolved.partial_trace(&[0])?.stabilized();
            let next_carry = Carryover::Joint(evolved.partial_trace(&[0, 2])?.stabilized());
            Ok((next_system, next_carry))
        }
    }
}

fn step_register(spec: &CollisionModelSpec, register: &DensityMatrix) -> Result<DensityMatrix> {
    let after_se = apply_pair_coupling(spec.se_kind, spec.gamma_se, register, 0, 1)?;
    apply_pair_coupling(spec.ee_kind, spec.gamma_ee, &after_se, 1, 2)
}

/// Evolving trajectory state: the system qubit plus whatever memory the model
/// threads between steps.
struct Trajectory {
    system: DensityMatrix,
    carry: Option<Carryover>,
}

impl Trajectory {
    fn start(spec: &CollisionModelSpec, initial: DensityMatrix) -> Result<Self> {
        let carry = if spec.is_markovian() {
            None
        } else {
            Some(Carryover::initial(spec, &initial)?)
        };
        Ok(Self {
            system: initial,
            carry,
        })
    }

    fn advance(&mut self, spec: &CollisionModelSpec) -> Result<()> {
        match &self.carry {
            None => {
                self.system = markovian_step(spec, &self.system)?;
            }
            Some(carry) => {
                let (system, carry) = nonmarkov_step(spec, &self.system, carry)?;
                self.system = system;
                self.carry = Some(carry);
            }
        }
        Ok(())
    }
}

fn record(
    spec: &CollisionModelSpec,
    collision: usize,
    rho: &DensityMatrix,
) -> Result<TrajectoryRecord> {
    Ok(TrajectoryRecord {
        collision,
        bloch: rho.bloch_vector()?,
        fidelity_to_env: fidelity_qubit(rho, &spec.env_state)?,
        entropy: von_neumann_entropy(rho),
        coherence: l1_coherence(rho),
        trace_distance: None,
        running_nd: None,
    })
}

/// Run the model for `spec.n_collisions` records; record `i` holds the
/// metrics of the state after `i` collisions (record 0 is the initial state).
pub fn run_single_qubit(spec: &CollisionModelSpec) -> Result<Vec<TrajectoryRecord>> {
    spec.check()?;
    let mut trajectory = Trajectory::start(spec, spec.initial_system.clone())?;
    let mut records = Vec::with_capacity(spec.n_collisions);
    records.push(record(spec, 0, &trajectory.system)?);
    for i in 1..spec.n_collisions {
        trajectory.advance(spec)?;
        records.push(record(spec, i, &trajectory.system)?);
    }
    Ok(records)
}

/// Outcome of evolving two initial states under one spec.
#[derive(Debug, Clone)]
pub struct DistancePairRun {
    /// Trace distance at each collision index.
    pub distances: DistanceSeries,
    /// Total positive-increment measure of the series.
    pub nd: f64,
    /// Cumulative measure up to each collision, for inset-style plots.
    pub running_nd: Vec<f64>,
}

/// Evolve `rho1` and `rho2` under the same spec and track their trace
/// distance collision by collision.
pub fn run_distance_pair(
    spec: &CollisionModelSpec,
    rho1: &DensityMatrix,
    rho2: &DensityMatrix,
) -> Result<DistancePairRun> {
    spec.check()?;
    let mut t1 = Trajectory::start(spec, rho1.clone())?;
    let mut t2 = Trajectory::start(spec, rho2.clone())?;
    let mut distances = Vec::with_capacity(spec.n_collisions);
    distances.push(trace_distance(&t1.system, &t2.system)?);
    for _ in 1..spec.n_collisions {
        t1.advance(spec)?;
        t2.advance(spec)?;
        distances.push(trace_distance(&t1.system, &t2.system)?);
    }
    let distances = DistanceSeries::new(distances)?;
    let nd = blp_measure(&distances)?;
    let running_nd = running_blp(&distances);
    Ok(DistancePairRun {
        distances,
        nd,
        running_nd,
    })
}

/// Result of the antipodal-pair grid search.
#[derive(Debug, Clone, Copy)]
pub struct BlpOptimum {
    pub nd_max: f64,
    /// Polar angle of the maximizing pure state (its antipode completes the
    /// pair).
    pub theta: f64,
    /// Azimuthal angle of the maximizing pure state.
    pub phi: f64,
}

impl BlpOptimum {
    /// The maximizing antipodal pair as density matrices.
    pub fn pair(&self) -> (DensityMatrix, DensityMatrix) {
        let v = BlochVector::from_angles(self.theta, self.phi);
        (
            PureState::from_angles(self.theta, self.phi).density(),
            DensityMatrix::from_bloch(v.negated()).expect("unit vector"),
        )
    }
}

/// Maximize the distance measure over antipodal pure-state pairs on a uniform
/// `(theta, phi)` grid of the upper hemisphere, `theta` in `(0, pi/2]` and
/// `phi` in `[0, 2 pi)`. Grid cells are independent and evaluated in
/// parallel; the reported maximum is the first one in grid order, so the
/// result does not depend on the schedule.
pub fn optimize_blp(spec: &CollisionModelSpec, n_theta: usize, n_phi: usize) -> Result<BlpOptimum> {
    if n_theta == 0 || n_phi == 0 {
        return Err(Error::InvalidSpec(
            "grid resolution must be at least 1 in both angles".into(),
        ));
    }
    spec.check()?;
    let mut points = Vec::with_capacity(n_theta * n_phi);
    for j in 1..=n_theta {
        let theta = (j as f64) * std::f64::consts::FRAC_PI_2 / (n_theta as f64);
        for k in 0..n_phi {
            let phi = (k as f64) * std::f64::consts::TAU / (n_phi as f64);
            points.push((theta, phi));
        }
    }
    let results = par::map(points, |(theta, phi)| {
        let rho1 = PureState::from_angles(theta, phi).density();
        let rho2 = DensityMatrix::from_bloch(BlochVector::from_angles(theta, phi).negated())
            .expect("unit vector");
        run_distance_pair(spec, &rho1, &rho2).map(|run| (theta, phi, run.nd))
    });
    let mut best: Option<BlpOptimum> = None;
    for res in results {
        let (theta, phi, nd) = res?;
        if best.as_ref().is_none_or(|b| nd > b.nd_max) {
            best = Some(BlpOptimum {
                nd_max: nd,
                theta,
                phi,
            });
        }
    }
    Ok(best.expect("grid is non-empty"))
}
