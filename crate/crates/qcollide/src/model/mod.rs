//! Collision-step dynamics: single-qubit homogenizers in all four coupling
//! combinations, the two-qubit synchronization models, trajectory runners,
//! memory-measure optimization, and closed-form single-collision oracles.

mod coupling;
mod oracle;
mod single;
mod sync;

pub use coupling::apply_pair_coupling;
pub use oracle::{
    cswap_collision_oracle, extract_cross_coefficient, matrix_collision_bloch,
    pswap_collision_oracle,
};
pub use single::{
    markovian_step, nonmarkov_step, optimize_blp, run_distance_pair, run_single_qubit, BlpOptimum,
    Carryover, DistancePairRun,
};
pub use sync::{run_sync, sync_step, SyncRecord, SyncRun};

use crate::state::{BlochVector, DensityMatrix, PureState};
use crate::{Error, Result};

/// The two interaction flavors: a coherent partial-SWAP unitary, or an
/// incoherent controlled-SWAP mediated by a fresh control qubit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CouplingKind {
    Coherent,
    Incoherent,
}

impl CouplingKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            CouplingKind::Coherent => "pswap",
            CouplingKind::Incoherent => "cswap",
        }
    }
}

impl std::str::FromStr for CouplingKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "pswap" => Ok(CouplingKind::Coherent),
            "cswap" => Ok(CouplingKind::Incoherent),
            other => Err(Error::Config {
                key: None,
                message: format!("unknown coupling kind `{other}` (accepted: pswap, cswap)"),
            }),
        }
    }
}

/// How environment memory is threaded between consecutive non-Markovian
/// steps.
///
/// `Marginal` rebuilds the register each step as the product of the system
/// state, the carried environment marginal, and a fresh unit, so
/// system-environment correlations are dropped and the unit marginal is the
/// sole memory channel. `Joint` instead keeps the correlated
/// system/next-unit state between steps; it exists for comparison only and is
/// not used by any built-in scenario.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CarryoverMode {
    #[default]
    Marginal,
    Joint,
}

/// Full description of a single-qubit collision model.
#[derive(Debug, Clone, PartialEq)]
pub struct CollisionModelSpec {
    /// System-environment coupling flavor.
    pub se_kind: CouplingKind,
    /// Intra-environment coupling flavor; ignored when `gamma_ee` is 0.
    pub ee_kind: CouplingKind,
    /// System-environment strength, radians.
    pub gamma_se: f64,
    /// Intra-environment strength, radians. Zero means Markovian.
    pub gamma_ee: f64,
    pub n_collisions: usize,
    pub initial_system: DensityMatrix,
    pub env_state: DensityMatrix,
    pub carryover: CarryoverMode,
}

impl CollisionModelSpec {
    /// Spec with the conventional defaults: environment `|0><0|`, initial
    /// system `|+><+|`, marginal carryover.
    pub fn new(
        se_kind: CouplingKind,
        ee_kind: CouplingKind,
        gamma_se: f64,
        gamma_ee: f64,
        n_collisions: usize,
    ) -> Result<Self> {
        let spec = Self {
            se_kind,
            ee_kind,
            gamma_se,
            gamma_ee,
            n_collisions,
            initial_system: PureState::plus().density(),
            env_state: PureState::zero().density(),
            carryover: CarryoverMode::Marginal,
        };
        spec.check()?;
        Ok(spec)
    }

    pub fn with_initial_system(mut self, rho: DensityMatrix) -> Self {
        self.initial_system = rho;
        self
    }

    pub fn with_env_state(mut self, rho: DensityMatrix) -> Self {
        self.env_state = rho;
        self
    }

    pub fn with_carryover(mut self, mode: CarryoverMode) -> Self {
        self.carryover = mode;
        self
    }

    pub fn is_markovian(&self) -> bool {
        self.gamma_ee == 0.0
    }

    pub fn check(&self) -> Result<()> {
        if !self.gamma_se.is_finite() || !self.gamma_ee.is_finite() {
            return Err(Error::InvalidSpec(
                "coupling strengths must be finite".into(),
            ));
        }
        if self.n_collisions == 0 {
            return Err(Error::InvalidSpec("n_collisions must be at least 1".into()));
        }
        for (name, rho, qubits) in [
            ("initial_system", &self.initial_system, 1),
            ("env_state", &self.env_state, 1),
        ] {
            if rho.num_qubits() != qubits {
                return Err(Error::InvalidSpec(format!(
                    "{name} must have {qubits} qubit(s), got {}",
                    rho.num_qubits()
                )));
            }
        }
        Ok(())
    }
}

/// Full description of the two-qubit synchronization model. There are no
/// intra-environment collisions in this setting.
#[derive(Debug, Clone, PartialEq)]
pub struct SyncModelSpec {
    pub s1_kind: CouplingKind,
    pub s2_kind: CouplingKind,
    /// Shared system-environment strength, radians (identical for both
    /// qubits).
    pub gamma_se: f64,
    /// Self-energies of the two qubits.
    pub omega1: f64,
    pub omega2: f64,
    /// Free-evolution time step per collision.
    pub dt: f64,
    pub n_collisions: usize,
    pub initial_pair: DensityMatrix,
    pub env_state: DensityMatrix,
    pub window_width: usize,
    pub window_stride: usize,
}

impl SyncModelSpec {
    /// Spec with the conventional defaults: initial pair `|+>|L>` with
    /// `|L> = (|0> + i|1>)/sqrt(2)`, environment `|0><0|`.
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        s1_kind: CouplingKind,
        s2_kind: CouplingKind,
        gamma_se: f64,
        omega1: f64,
        omega2: f64,
        dt: f64,
        n_collisions: usize,
        window_width: usize,
        window_stride: usize,
    ) -> Result<Self> {
        let initial_pair = PureState::plus()
            .tensor(&PureState::plus_i())
            .expect("two qubits")
            .density();
        let spec = Self {
            s1_kind,
            s2_kind,
            gamma_se,
            omega1,
            omega2,
            dt,
            n_collisions,
            initial_pair,
            env_state: PureState::zero().density(),
            window_width,
            window_stride,
        };
        spec.check()?;
        Ok(spec)
    }

    pub fn with_initial_pair(mut self, rho: DensityMatrix) -> Self {
        self.initial_pair = rho;
        self
    }

    pub fn with_env_state(mut self, rho: DensityMatrix) -> Self {
        self.env_state = rho;
        self
    }

    pub fn check(&self) -> Result<()> {
        for (name, v) in [
            ("gamma_se", self.gamma_se),
            ("omega1", self.omega1),
            ("omega2", self.omega2),
            ("dt", self.dt),
        ] {
            if !v.is_finite() {
                return Err(Error::InvalidSpec(format!("{name} must be finite")));
            }
        }
        if self.n_collisions == 0 {
            return Err(Error::InvalidSpec("n_collisions must be at least 1".into()));
        }
        if self.initial_pair.num_qubits() != 2 {
            return Err(Error::InvalidSpec(format!(
                "initial_pair must have 2 qubits, got {}",
                self.initial_pair.num_qubits()
            )));
        }
        if self.env_state.num_qubits() != 1 {
            return Err(Error::InvalidSpec(format!(
                "env_state must have 1 qubit, got {}",
                self.env_state.num_qubits()
            )));
        }
        if self.window_width < 2 || self.window_width > self.n_collisions {
            return Err(Error::InvalidSpec(format!(
                "window_width {} must lie in 2..=n_collisions ({})",
                self.window_width, self.n_collisions
            )));
        }
        if self.window_stride == 0 {
            return Err(Error::InvalidSpec(
                "window_stride must be at least 1".into(),
            ));
        }
        Ok(())
    }
}

/// Per-collision metrics row for a single-qubit trajectory. `collision` 0 is
/// the initial state; row `i` describes the state after `i` collisions.
#[derive(Debug, Clone, PartialEq)]
pub struct TrajectoryRecord {
    pub collision: usize,
    pub bloch: BlochVector,
    pub fidelity_to_env: f64,
    pub entropy: f64,
    pub coherence: f64,
    /// Trace distance to the partner trajectory, for paired runs.
    pub trace_distance: Option<f64>,
    /// Running cumulative memory measure, for paired runs.
    pub running_nd: Option<f64>,
}
