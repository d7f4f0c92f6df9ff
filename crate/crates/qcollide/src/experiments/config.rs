//! Plain-text key-value configuration files.
//!
//! Format: one `key = value` per line, `#` starts a comment, blank lines are
//! ignored. Unknown keys are rejected. Coupling strengths are given in units
//! of pi/2 and converted to radians on load.

use std::collections::BTreeMap;
use std::f64::consts::FRAC_PI_2;
use std::path::Path;

use crate::experiments::sweep::SweepRequest;
use crate::model::{CarryoverMode, CollisionModelSpec, CouplingKind, SyncModelSpec};
use crate::state::{BlochVector, DensityMatrix, PureState};
use crate::{Error, Result};

/// Every key the parser accepts.
const KNOWN_KEYS: &[&str] = &[
    "model",
    "se_kind",
    "ee_kind",
    "s1_kind",
    "s2_kind",
    "gamma_se_over_halfpi",
    "gamma_ee_over_halfpi",
    "gamma_se_axis",
    "gamma_ee_axis",
    "omega1",
    "omega2",
    "dt",
    "n",
    "window_width",
    "window_stride",
    "initial_system",
    "env_state",
    "joint_carryover",
];

/// A fully resolved configuration.
#[derive(Debug, Clone, PartialEq)]
pub enum LoadedConfig {
    Collision(CollisionModelSpec),
    Sync(SyncModelSpec),
    Sweep(SweepRequest),
}

impl LoadedConfig {
    pub fn model_name(&self) -> &'static str {
        match self {
            LoadedConfig::Collision(spec) if spec.is_markovian() => "markovian",
            LoadedConfig::Collision(_) => "nonmarkovian",
            LoadedConfig::Sync(_) => "sync",
            LoadedConfig::Sweep(_) => "sweep",
        }
    }
}

/// Load and validate a configuration file.
pub fn load_config(path: &Path) -> Result<LoadedConfig> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_config(&text)
}

/// Parse configuration text; see the module docs for the format.
pub fn parse_config(text: &str) -> Result<LoadedConfig> {
    let mut entries: BTreeMap<String, String> = BTreeMap::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = match raw.find('#') {
            Some(pos) => &raw[..pos],
            None => raw,
        }
        .trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| Error::Config {
            key: None,
            message: format!("line {}: expected `key = value`, got `{line}`", lineno + 1),
        })?;
        let key = key.trim().to_string();
        let value = value.trim().to_string();
        if !KNOWN_KEYS.contains(&key.as_str()) {
            return Err(Error::config(
                &key,
                format!("unknown key (accepted keys: {})", KNOWN_KEYS.join(", ")),
            ));
        }
        if entries.insert(key.clone(), value).is_some() {
            return Err(Error::config(&key, "duplicate key"));
        }
    }

    let mut cfg = Entries { map: entries };
    let model = cfg.take_required("model")?;
    let loaded = match model.as_str() {
        "markovian" => LoadedConfig::Collision(parse_collision(&mut cfg, true)?),
        "nonmarkovian" => LoadedConfig::Collision(parse_collision(&mut cfg, false)?),
        "sync" => LoadedConfig::Sync(parse_sync(&mut cfg)?),
        "sweep" => LoadedConfig::Sweep(parse_sweep(&mut cfg)?),
        other => {
            return Err(Error::config(
                "model",
                format!("unknown model `{other}` (accepted: markovian, nonmarkovian, sync, sweep)"),
            ))
        }
    };
    cfg.ensure_empty()?;
    Ok(loaded)
}

struct Entries {
    map: BTreeMap<String, String>,
}

impl Entries {
    fn take(&mut self, key: &str) -> Option<String> {
        self.map.remove(key)
    }

    fn take_required(&mut self, key: &str) -> Result<String> {
        self.take(key)
            .ok_or_else(|| Error::config(key, "required key is missing"))
    }

    fn take_f64(&mut self, key: &str) -> Result<Option<f64>> {
        match self.take(key) {
            None => Ok(None),
            Some(v) => {
                let parsed: f64 = v
                    .parse()
                    .map_err(|_| Error::config(key, format!("`{v}` is not a number")))?;
                if !parsed.is_finite() {
                    return Err(Error::config(key, "value must be finite"));
                }
                Ok(Some(parsed))
            }
        }
    }

    fn take_f64_required(&mut self, key: &str) -> Result<f64> {
        self.take_f64(key)?
            .ok_or_else(|| Error::config(key, "required key is missing"))
    }

    fn take_usize_required(&mut self, key: &str, min: usize) -> Result<usize> {
        let v = self.take_required(key)?;
        let parsed: usize = v
            .parse()
            .map_err(|_| Error::config(key, format!("`{v}` is not a non-negative integer")))?;
        if parsed < min {
            return Err(Error::config(key, format!("must be at least {min}")));
        }
        Ok(parsed)
    }

    fn take_usize_or(&mut self, key: &str, min: usize, default: usize) -> Result<usize> {
        match self.take(key) {
            None => Ok(default),
            Some(v) => {
                let parsed: usize = v.parse().map_err(|_| {
                    Error::config(key, format!("`{v}` is not a non-negative integer"))
                })?;
                if parsed < min {
                    return Err(Error::config(key, format!("must be at least {min}")));
                }
                Ok(parsed)
            }
        }
    }

    fn take_kind_required(&mut self, key: &str) -> Result<CouplingKind> {
        let v = self.take_required(key)?;
        v.parse().map_err(|_| {
            Error::config(
                key,
                format!("`{v}` is not a coupling kind (accepted: pswap, cswap)"),
            )
        })
    }

    fn take_bool_or(&mut self, key: &str, default: bool) -> Result<bool> {
        match self.take(key) {
            None => Ok(default),
            Some(v) => match v.as_str() {
                "true" => Ok(true),
                "false" => Ok(false),
                other => Err(Error::config(
                    key,
                    format!("`{other}` is not a boolean (accepted: true, false)"),
                )),
            },
        }
    }

    fn ensure_empty(&self) -> Result<()> {
        if let Some(key) = self.map.keys().next() {
            return Err(Error::config(
                key,
                "key is not accepted by this model".to_string(),
            ));
        }
        Ok(())
    }
}

/// Parse a single-qubit state: a named state or an explicit Bloch triple.
fn parse_qubit_state(key: &str, value: &str) -> Result<DensityMatrix> {
    if let Some(named) = named_state(value) {
        return Ok(named.density());
    }
    let parts: Vec<&str> = value.split(',').map(str::trim).collect();
    if parts.len() == 3 {
        let mut comps = [0.0f64; 3];
        for (i, p) in parts.iter().enumerate() {
            comps[i] = p.parse().map_err(|_| {
                Error::config(
                    key,
                    format!("`{p}` is not a number in Bloch triple `{value}`"),
                )
            })?;
        }
        return DensityMatrix::from_bloch(BlochVector::new(comps[0], comps[1], comps[2]))
            .map_err(|e| Error::config(key, format!("{e}")));
    }
    Err(Error::config(
        key,
        format!(
            "`{value}` is not a state (accepted: plus, minus, zero, one, L, or a Bloch triple x,y,z)"
        ),
    ))
}

/// Parse a two-qubit product state `name,name`.
fn parse_pair_state(key: &str, value: &str) -> Result<DensityMatrix> {
    let parts: Vec<&str> = value.split(',').map(str::trim).collect();
    if parts.len() == 2 {
        if let (Some(a), Some(b)) = (named_state(parts[0]), named_state(parts[1])) {
            return Ok(a.tensor(&b).expect("two qubits").density());
        }
    }
    Err(Error::config(
        key,
        format!("`{value}` is not a product pair (accepted: two of plus, minus, zero, one, L separated by a comma)"),
    ))
}

fn named_state(name: &str) -> Option<PureState> {
    match name {
        "zero" => Some(PureState::zero()),
        "one" => Some(PureState::one()),
        "plus" => Some(PureState::plus()),
        "minus" => Some(PureState::minus()),
        "L" => Some(PureState::plus_i()),
        _ => None,
    }
}

fn named_state_label(rho: &DensityMatrix) -> Option<&'static str> {
    let v = rho.bloch_vector().ok()?;
    let matches = |x: f64, y: f64, z: f64| v.x == x && v.y == y && v.z == z;
    if matches(0.0, 0.0, 1.0) {
        Some("zero")
    } else if matches(0.0, 0.0, -1.0) {
        Some("one")
    } else if matches(1.0, 0.0, 0.0) {
        Some("plus")
    } else if matches(-1.0, 0.0, 0.0) {
        Some("minus")
    } else if matches(0.0, 1.0, 0.0) {
        Some("L")
    } else {
        None
    }
}

fn parse_collision(cfg: &mut Entries, markovian: bool) -> Result<CollisionModelSpec> {
    let se_kind = cfg.take_kind_required("se_kind")?;
    let gamma_se = cfg.take_f64_required("gamma_se_over_halfpi")? * FRAC_PI_2;
    let n = cfg.take_usize_required("n", 1)?;
    let (ee_kind, gamma_ee) = if markovian {
        if let Some(v) = cfg.take_f64("gamma_ee_over_halfpi")? {
            if v != 0.0 {
                return Err(Error::config(
                    "gamma_ee_over_halfpi",
                    "must be 0 for a markovian model (use model = nonmarkovian)",
                ));
            }
        }
        // A stray ee_kind is harmless but rejected anyway to keep configs honest.
        if cfg.take("ee_kind").is_some() {
            return Err(Error::config(
                "ee_kind",
                "not accepted for a markovian model",
            ));
        }
        (CouplingKind::Coherent, 0.0)
    } else {
        (
            cfg.take_kind_required("ee_kind")?,
            cfg.take_f64_required("gamma_ee_over_halfpi")? * FRAC_PI_2,
        )
    };
    let initial_system = match cfg.take("initial_system") {
        None => PureState::plus().density(),
        Some(v) => parse_qubit_state("initial_system", &v)?,
    };
    let env_state = match cfg.take("env_state") {
        None => PureState::zero().density(),
        Some(v) => parse_qubit_state("env_state", &v)?,
    };
    let carryover = if cfg.take_bool_or("joint_carryover", false)? {
        CarryoverMode::Joint
    } else {
        CarryoverMode::Marginal
    };
    let spec = CollisionModelSpec::new(se_kind, ee_kind, gamma_se, gamma_ee, n)?
        .with_initial_system(initial_system)
        .with_env_state(env_state)
        .with_carryover(carryover);
    spec.check().map_err(|e| Error::Config {
        key: None,
        message: format!("{e}"),
    })?;
    Ok(spec)
}

fn parse_sync(cfg: &mut Entries) -> Result<SyncModelSpec> {
    let s1_kind = cfg.take_kind_required("s1_kind")?;
    let s2_kind = cfg.take_kind_required("s2_kind")?;
    let gamma_se = cfg.take_f64_required("gamma_se_over_halfpi")? * FRAC_PI_2;
    let omega1 = cfg.take_f64_required("omega1")?;
    let omega2 = cfg.take_f64_required("omega2")?;
    let dt = cfg.take_f64_required("dt")?;
    let n = cfg.take_usize_required("n", 1)?;
    let window_width = cfg.take_usize_or("window_width", 2, 100)?;
    let window_stride = cfg.take_usize_or("window_stride", 1, 50)?;
    let initial_pair = match cfg.take("initial_system") {
        None => PureState::plus()
            .tensor(&PureState::plus_i())
            .expect("two qubits")
            .density(),
        Some(v) => parse_pair_state("initial_system", &v)?,
    };
    let env_state = match cfg.take("env_state") {
        None => PureState::zero().density(),
        Some(v) => {
            let rho = parse_qubit_state("env_state", &v)?;
            if rho.to_pure_qubit().is_err() {
                return Err(Error::config(
                    "env_state",
                    "sync models need a pure environment state",
                ));
            }
            rho
        }
    };
    let spec = SyncModelSpec::new(
        s1_kind,
        s2_kind,
        gamma_se,
        omega1,
        omega2,
        dt,
        n,
        window_width,
        window_stride,
    )?
    .with_initial_pair(initial_pair)
    .with_env_state(env_state);
    spec.check().map_err(|e| Error::Config {
        key: None,
        message: format!("{e}"),
    })?;
    Ok(spec)
}

fn parse_sweep(cfg: &mut Entries) -> Result<SweepRequest> {
    let se_kind = cfg.take_kind_required("se_kind")?;
    let ee_kind = cfg.take_kind_required("ee_kind")?;
    let gamma_se_axis = parse_axis("gamma_se_axis", &cfg.take_required("gamma_se_axis")?)?;
    let gamma_ee_axis = parse_axis("gamma_ee_axis", &cfg.take_required("gamma_ee_axis")?)?;
    let n_collisions = cfg.take_usize_required("n", 1)?;
    let request = SweepRequest {
        se_kind,
        ee_kind,
        gamma_se_axis,
        gamma_ee_axis,
        n_collisions,
    };
    request.check().map_err(|e| Error::Config {
        key: None,
        message: format!("{e}"),
    })?;
    Ok(request)
}

/// Axis syntax: either `start:stop:step` (inclusive endpoints) or an explicit
/// comma-separated list.
fn parse_axis(key: &str, value: &str) -> Result<Vec<f64>> {
    let parse_one = |p: &str| -> Result<f64> {
        p.trim()
            .parse()
            .map_err(|_| Error::config(key, format!("`{p}` is not a number in axis `{value}`")))
    };
    if value.contains(':') {
        let parts: Vec<&str> = value.split(':').collect();
        if parts.len() != 3 {
            return Err(Error::config(
                key,
                format!("`{value}` is not an axis (accepted: start:stop:step or v1,v2,...)"),
            ));
        }
        let start = parse_one(parts[0])?;
        let stop = parse_one(parts[1])?;
        let step = parse_one(parts[2])?;
        if step <= 0.0 || stop < start {
            return Err(Error::config(key, "axis needs step > 0 and stop >= start"));
        }
        let count = ((stop - start) / step + 0.5).floor() as usize + 1;
        return Ok((0..count).map(|i| start + step * i as f64).collect());
    }
    value.split(',').map(parse_one).collect()
}

/// Serialize a resolved configuration back to config text. Reloading the
/// output yields an identical value. Fails for sync pairs that are not
/// products of named states, which the config format cannot express.
pub fn write_config(config: &LoadedConfig) -> Result<String> {
    let mut lines = vec![format!("model = {}", config.model_name())];
    match config {
        LoadedConfig::Collision(spec) => {
            lines.push(format!("se_kind = {}", spec.se_kind.as_str()));
            if !spec.is_markovian() {
                lines.push(format!("ee_kind = {}", spec.ee_kind.as_str()));
            }
            lines.push(format!(
                "gamma_se_over_halfpi = {}",
                halfpi_units(spec.gamma_se)
            ));
            if !spec.is_markovian() {
                lines.push(format!(
                    "gamma_ee_over_halfpi = {}",
                    halfpi_units(spec.gamma_ee)
                ));
            }
            lines.push(format!("n = {}", spec.n_collisions));
            lines.push(format!(
                "initial_system = {}",
                qubit_state_value(&spec.initial_system)
            ));
            lines.push(format!(
                "env_state = {}",
                qubit_state_value(&spec.env_state)
            ));
            lines.push(format!(
                "joint_carryover = {}",
                spec.carryover == CarryoverMode::Joint
            ));
        }
        LoadedConfig::Sync(spec) => {
            lines.push(format!("s1_kind = {}", spec.s1_kind.as_str()));
            lines.push(format!("s2_kind = {}", spec.s2_kind.as_str()));
            lines.push(format!(
                "gamma_se_over_halfpi = {}",
                halfpi_units(spec.gamma_se)
            ));
            lines.push(format!("omega1 = {}", spec.omega1));
            lines.push(format!("omega2 = {}", spec.omega2));
            lines.push(format!("dt = {}", spec.dt));
            lines.push(format!("n = {}", spec.n_collisions));
            lines.push(format!("window_width = {}", spec.window_width));
            lines.push(format!("window_stride = {}", spec.window_stride));
            lines.push(format!(
                "initial_system = {}",
                pair_state_value(&spec.initial_pair)?
            ));
            lines.push(format!(
                "env_state = {}",
                qubit_state_value(&spec.env_state)
            ));
        }
        LoadedConfig::Sweep(request) => {
            lines.push(format!("se_kind = {}", request.se_kind.as_str()));
            lines.push(format!("ee_kind = {}", request.ee_kind.as_str()));
            lines.push(format!(
                "gamma_se_axis = {}",
                axis_value(&request.gamma_se_axis)
            ));
            lines.push(format!(
                "gamma_ee_axis = {}",
                axis_value(&request.gamma_ee_axis)
            ));
            lines.push(format!("n = {}", request.n_collisions));
        }
    }
    lines.push(String::new());
    Ok(lines.join("\n"))
}

fn axis_value(axis: &[f64]) -> String {
    axis.iter()
        .map(|v| format!("{v}"))
        .collect::<Vec<_>>()
        .join(",")
}

/// Radians back to units of pi/2, preferring a representation that converts
/// back to the exact same radian value. Values born as `u * pi/2` always
/// find their `u` within a couple of ulps.
fn halfpi_units(rad: f64) -> f64 {
    let u0 = rad / FRAC_PI_2;
    if u0 * FRAC_PI_2 == rad {
        return u0;
    }
    let mut up = u0;
    let mut down = u0;
    for _ in 0..4 {
        up = up.next_up();
        down = down.next_down();
        if up * FRAC_PI_2 == rad {
            return up;
        }
        if down * FRAC_PI_2 == rad {
            return down;
        }
    }
    u0
}

fn qubit_state_value(rho: &DensityMatrix) -> String {
    if let Some(label) = named_state_label(rho) {
        return label.to_string();
    }
    let v = rho.bloch_vector().expect("single qubit");
    // z survives the density round-trip only for some representations; pick
    // one that reproduces the stored entries exactly when possible.
    let emit = |z: f64| format!("{},{},{z}", v.x, v.y);
    let reload_matches = |z: f64| {
        DensityMatrix::from_bloch(BlochVector::new(v.x, v.y, z))
            .map(|r| r == *rho)
            .unwrap_or(false)
    };
    if reload_matches(v.z) {
        return emit(v.z);
    }
    let mut up = v.z;
    let mut down = v.z;
    for _ in 0..4 {
        up = up.next_up();
        down = down.next_down();
        if reload_matches(up) {
            return emit(up);
        }
        if reload_matches(down) {
            return emit(down);
        }
    }
    emit(v.z)
}

fn pair_state_value(rho: &DensityMatrix) -> Result<String> {
    let a = rho.partial_trace(&[0])?;
    let b = rho.partial_trace(&[1])?;
    if let (Some(la), Some(lb)) = (named_state_label(&a), named_state_label(&b)) {
        let product = named_state(la)
            .zip(named_state(lb))
            .map(|(sa, sb)| sa.tensor(&sb).expect("two qubits").density());
        if product.is_some_and(|p| p == *rho) {
            return Ok(format!("{la},{lb}"));
        }
    }
    Err(Error::Config {
        key: Some("initial_system".into()),
        message: "sync pair is not a product of named states and cannot be written as config text"
            .into(),
    })
}
