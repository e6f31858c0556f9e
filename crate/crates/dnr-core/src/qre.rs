//! Parametric fault-tolerant resource estimation.
//!
//! Logical counts (qubits and rotation gates of one optimisation layer)
//! are translated into surface-code physical estimates per hardware
//! profile. The code distance is chosen automatically as the smallest odd
//! d whose accumulated logical error fits the allotted budget share, with
//! the per-cycle logical error modelled as a·(p/p_th)^((d+1)/2).
//!
//! Rotations are synthesised sequentially: each rotation costs a T-depth
//! of ceil(synth_a·log2(rotations/(ε/3)) + synth_b) and the schedule runs
//! one logical time step per synthesised layer, a deliberately pessimistic
//! upper bound. The error budget is split evenly three ways between
//! logical failures, rotation synthesis, and reserve.
//!
//! All profile constants are inputs, not claims: six typical presets ship
//! built in (four gate-based, two Majorana) and can be overridden from a
//! JSON profiles file.

use crate::ising::IsingSummary;
use serde::{Deserialize, Serialize};
use std::io::Read;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum QreError {
    #[error("qre: summary has no rotation gates; nothing to estimate")]
    EmptySummary,
    #[error("qre: error budget must lie strictly between 0 and 1, got {0}")]
    BadBudget(f64),
    #[error("qre: profile `{name}` is invalid: {reason}")]
    BadProfile { name: String, reason: String },
    #[error("qre: no odd distance <= {cap} meets the budget for profile `{name}`")]
    DistanceOutOfRange { name: String, cap: u32 },
    #[error("qre: malformed profiles file: {0}")]
    Malformed(String),
    #[error("qre: io error: {0}")]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum QubitFamily {
    GateBased,
    Majorana,
}

/// A hardware preset for the surface-code model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HardwareProfile {
    pub name: String,
    pub family: QubitFamily,
    /// Physical gate time, seconds.
    pub t_gate_s: f64,
    /// Physical measurement time, seconds.
    pub t_meas_s: f64,
    /// Physical error rate per operation.
    pub p_phys: f64,
    /// Code threshold the error rate is compared against.
    pub p_threshold: f64,
    /// Prefactor a in the logical error model a·(p/p_th)^((d+1)/2).
    pub code_prefactor_a: f64,
    /// Logical cycle = d·(cycle_gate_factor·t_gate + cycle_meas_factor·t_meas).
    pub cycle_gate_factor: u32,
    pub cycle_meas_factor: u32,
    /// Rotation synthesis T-count model: ceil(synth_a·log2(R/(ε/3)) + synth_b).
    pub synth_a: f64,
    pub synth_b: f64,
}

impl HardwareProfile {
    pub fn validate(&self) -> Result<(), QreError> {
        let bad = |reason: &str| QreError::BadProfile {
            name: self.name.clone(),
            reason: reason.to_string(),
        };
        if !(self.t_gate_s > 0.0 && self.t_meas_s > 0.0) {
            return Err(bad("times must be positive"));
        }
        if !(self.p_phys > 0.0 && self.p_phys < self.p_threshold) {
            return Err(bad("requires 0 < p_phys < p_threshold"));
        }
        if self.code_prefactor_a <= 0.0 || self.synth_a <= 0.0 || self.synth_b < 0.0 {
            return Err(bad("model constants must be positive"));
        }
        Ok(())
    }

    /// Logical error per qubit per cycle at distance d.
    pub fn logical_error_per_cycle(&self, d: u32) -> f64 {
        self.code_prefactor_a * (self.p_phys / self.p_threshold).powi(d.div_ceil(2) as i32)
    }

    /// Duration of one logical cycle at distance d, seconds.
    pub fn cycle_time(&self, d: u32) -> f64 {
        f64::from(d)
            * (f64::from(self.cycle_gate_factor) * self.t_gate_s
                + f64::from(self.cycle_meas_factor) * self.t_meas_s)
    }

    /// T gates synthesising one rotation to the per-rotation budget share.
    pub fn t_per_rotation(&self, rotations: u64, budget: f64) -> u64 {
        let share = budget / 3.0;
        let precision_bits = (rotations as f64 / share).log2();
        (self.synth_a * precision_bits + self.synth_b).ceil() as u64
    }
}

/// Estimation knobs beyond the profile itself.
#[derive(Debug, Clone, Copy)]
pub struct EstimateOptions {
    /// Total error budget ε, split evenly between logical, synthesis and
    /// reserve shares.
    pub budget: f64,
    /// Physical-qubit layout multiplier on top of the 2·d² patch pair.
    pub layout_overhead: f64,
    /// Largest odd distance tried before giving up.
    pub max_distance: u32,
}

impl Default for EstimateOptions {
    fn default() -> Self {
        Self {
            budget: 0.333,
            layout_overhead: 2.0,
            max_distance: 99,
        }
    }
}

/// Physical resources for one optimisation layer on one profile.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PhysicalEstimate {
    pub profile: String,
    pub code_distance: u32,
    pub logical_qubits: usize,
    pub physical_qubits: u64,
    /// Wall-clock execution time of the layer, seconds.
    pub runtime_s: f64,
    pub t_count: u64,
    pub logical_cycles: u64,
    /// Budget actually consumed (logical share used plus synthesis share).
    pub error_budget_used: f64,
    /// Whether the underlying rotation count was exact.
    pub exact_counts: bool,
}

fn checked(summary: &IsingSummary, opts: &EstimateOptions) -> Result<(), QreError> {
    if summary.rotation_gates_one_layer == 0 || summary.logical_qubits == 0 {
        return Err(QreError::EmptySummary);
    }
    if !(opts.budget > 0.0 && opts.budget < 1.0) {
        return Err(QreError::BadBudget(opts.budget));
    }
    Ok(())
}

/// Sequential-schedule logical cycle count: one time step per synthesised
/// T layer across all rotations.
fn logical_cycles(summary: &IsingSummary, profile: &HardwareProfile, budget: f64) -> u64 {
    let rotations = summary.rotation_gates_one_layer as u64;
    rotations * profile.t_per_rotation(rotations, budget)
}

/// Smallest odd distance whose accumulated logical error fits the logical
/// budget share ε/3.
pub fn required_code_distance(
    summary: &IsingSummary,
    profile: &HardwareProfile,
    opts: &EstimateOptions,
) -> Result<u32, QreError> {
    checked(summary, opts)?;
    profile.validate()?;
    let cycles = logical_cycles(summary, profile, opts.budget) as f64;
    let volume = summary.logical_qubits as f64 * cycles;
    let share = opts.budget / 3.0;
    let mut d = 3;
    while d <= opts.max_distance {
        if volume * profile.logical_error_per_cycle(d) <= share {
            return Ok(d);
        }
        d += 2;
    }
    Err(QreError::DistanceOutOfRange {
        name: profile.name.clone(),
        cap: opts.max_distance,
    })
}

/// Full estimate at an explicitly chosen distance.
pub fn estimate_at_distance(
    summary: &IsingSummary,
    profile: &HardwareProfile,
    opts: &EstimateOptions,
    d: u32,
) -> Result<PhysicalEstimate, QreError> {
    checked(summary, opts)?;
    profile.validate()?;
    let rotations = summary.rotation_gates_one_layer as u64;
    let t_count = rotations * profile.t_per_rotation(rotations, opts.budget);
    let cycles = t_count; // sequential rotation schedule
    let physical_qubits = (2.0
        * f64::from(d) * f64::from(d)
        * summary.logical_qubits as f64
        * opts.layout_overhead)
        .round() as u64;
    let logical_used =
        summary.logical_qubits as f64 * cycles as f64 * profile.logical_error_per_cycle(d);
    Ok(PhysicalEstimate {
        profile: profile.name.clone(),
        code_distance: d,
        logical_qubits: summary.logical_qubits,
        physical_qubits,
        runtime_s: cycles as f64 * profile.cycle_time(d),
        t_count,
        logical_cycles: cycles,
        error_budget_used: logical_used + opts.budget / 3.0,
        exact_counts: summary.exact,
    })
}

/// Physical estimate with the automatically selected code distance.
pub fn physical_estimate(
    summary: &IsingSummary,
    profile: &HardwareProfile,
    opts: &EstimateOptions,
) -> Result<PhysicalEstimate, QreError> {
    let d = required_code_distance(summary, profile, opts)?;
    estimate_at_distance(summary, profile, opts, d)
}

/// One point per profile at the required distance plus two over-distanced
/// variants (d+2, d+4), trading physical qubits for reliability margin.
pub fn tradeoff_region(
    summary: &IsingSummary,
    profiles: &[HardwareProfile],
    opts: &EstimateOptions,
) -> Result<Vec<PhysicalEstimate>, QreError> {
    let mut out = Vec::new();
    for profile in profiles {
        let d = required_code_distance(summary, profile, opts)?;
        for extra in [0, 2, 4] {
            out.push(estimate_at_distance(summary, profile, opts, d + extra)?);
        }
    }
    Ok(out)
}

/// The six built-in presets: four gate-based and two Majorana qubit types.
/// Times and error rates follow the usual published ballparks for
/// superconducting (ns), trapped-ion (µs) and measurement-based Majorana
/// hardware; all are editable through a profiles file.
pub fn builtin_profiles() -> Vec<HardwareProfile> {
    let base = |name: &str, family, t_gate_s, t_meas_s, p_phys| HardwareProfile {
        name: name.to_string(),
        family,
        t_gate_s,
        t_meas_s,
        p_phys,
        p_threshold: 0.01,
        code_prefactor_a: 0.03,
        cycle_gate_factor: 4,
        cycle_meas_factor: 2,
        synth_a: 0.53,
        synth_b: 5.3,
    };
    vec![
        base("gate_ns_e3", QubitFamily::GateBased, 50e-9, 100e-9, 1e-3),
        base("gate_ns_e4", QubitFamily::GateBased, 50e-9, 100e-9, 1e-4),
        base("gate_us_e3", QubitFamily::GateBased, 10e-6, 100e-6, 1e-3),
        base("gate_us_e4", QubitFamily::GateBased, 10e-6, 100e-6, 1e-4),
        base("maj_ns_e4", QubitFamily::Majorana, 100e-9, 100e-9, 1e-4),
        base("maj_ns_e6", QubitFamily::Majorana, 100e-9, 100e-9, 1e-6),
    ]
}

/// Loads and validates a JSON array of profiles.
pub fn load_profiles(reader: impl Read) -> Result<Vec<HardwareProfile>, QreError> {
    let profiles: Vec<HardwareProfile> =
        serde_json::from_reader(reader).map_err(|e| QreError::Malformed(e.to_string()))?;
    for p in &profiles {
        p.validate()?;
    }
    Ok(profiles)
}
