//! Time integration: Strang splitting with an exact phase half-step for
//! the potential and nonlinear terms and a Crank–Nicolson full step for
//! the Laplacian.
//!
//! The phase sub-flow i u_t = (c r^{-a} + λ r^{-b} |u|^σ) u is solved
//! exactly (|u| is invariant along it), and the Crank–Nicolson step is a
//! Cayley transform of a self-adjoint operator, so the discrete mass is
//! conserved to the accuracy of the banded linear solve. The scheme is
//! time-reversible: stepping by -dt undoes a step by +dt.

use serde::Serialize;
use thiserror::Error;

use crate::field::{FieldError, RadialField};
use crate::operator::{BandedLdl, RadialLaplacian};
use crate::params::ProblemParams;
use crate::virial::{
    virial_first_derivative, virial_second_derivative_identity, virial_value, VirialError,
    VirialWeight,
};

#[derive(Debug, Error)]
pub enum EvolutionError {
    #[error("time step must be a nonzero finite number, got {0}")]
    InvalidStep(f64),
    #[error("simulation horizon must be positive, got {0}")]
    InvalidHorizon(f64),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Virial(#[from] VirialError),
}

/// Why a run stopped.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Termination {
    Completed,
    /// Kinetic-growth guard tripped; the field stores the trip time.
    BlowupDetected,
    /// Phase gradient exceeded the resolution guard before any blow-up
    /// certificate fired.
    ResolutionLost,
}

#[derive(Debug, Clone)]
pub struct SimulationConfig {
    pub dt: f64,
    pub t_end: f64,
    /// Record monitors every this many steps.
    pub monitor_stride: usize,
    /// Blow-up guard: kinetic energy growth by this factor (in norm, i.e.
    /// kinetic by factor²) counts as numerical blow-up.
    pub blowup_gradient_factor: f64,
    /// Resolution guard: maximum tolerated adjacent phase difference is
    /// 2π / resolution_guard (on nodes carrying amplitude).
    pub resolution_guard: f64,
    /// Optional virial weight to monitor.
    pub virial: Option<VirialWeight>,
    /// Disable the phase sub-step (free evolution).
    pub linear_only: bool,
    /// Disable the Laplacian sub-step (pure phase rotation).
    pub phase_only: bool,
}

impl Default for SimulationConfig {
    fn default() -> Self {
        SimulationConfig {
            dt: 1e-3,
            t_end: 1.0,
            monitor_stride: 10,
            blowup_gradient_factor: 100.0,
            resolution_guard: 4.0,
            virial: None,
            linear_only: false,
            phase_only: false,
        }
    }
}

/// One monitor row.
#[derive(Debug, Clone, Serialize)]
pub struct MonitorSample {
    pub t: f64,
    pub mass: f64,
    pub energy: f64,
    pub kinetic: f64,
    pub virial: f64,
    pub virial_rate: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct SimulationTrace {
    pub samples: Vec<MonitorSample>,
    pub termination: Termination,
    /// First time the blow-up guard tripped.
    pub blowup_time: Option<f64>,
    /// Largest fraction of the mass sitting on the outermost node.
    pub boundary_mass_max: f64,
    pub warnings: Vec<String>,
}

impl SimulationTrace {
    pub fn mass_drift(&self) -> f64 {
        let m0 = self.samples[0].mass;
        self.samples
            .iter()
            .map(|s| (s.mass - m0).abs() / m0)
            .fold(0.0, f64::max)
    }

    pub fn energy_drift(&self) -> f64 {
        let e0 = self.samples[0].energy;
        let scale = e0.abs().max(1e-12);
        self.samples
            .iter()
            .map(|s| (s.energy - e0).abs() / scale)
            .fold(0.0, f64::max)
    }

    pub fn max_kinetic(&self) -> f64 {
        self.samples.iter().map(|s| s.kinetic).fold(0.0, f64::max)
    }

    /// CSV rendering of the monitor series.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t,mass,energy,kinetic,virial,virial_rate,flag\n");
        let flag = match self.termination {
            Termination::Completed => "completed",
            Termination::BlowupDetected => "blowup_detected",
            Termination::ResolutionLost => "resolution_lost",
        };
        for s in &self.samples {
            out.push_str(&format!(
                "{},{},{},{},{},{},{}\n",
                s.t, s.mass, s.energy, s.kinetic, s.virial, s.virial_rate, flag
            ));
        }
        out
    }
}

/// Strang-splitting stepper with a cached Crank–Nicolson factorization.
pub struct Stepper {
    pub params: ProblemParams,
    lap: RadialLaplacian,
    factor: BandedLdl,
    dt: f64,
    /// Precomputed phase coefficients c r^{-a} and r^{-b} per node.
    pot_phase: Vec<f64>,
    inhom: Vec<f64>,
    linear_only: bool,
    phase_only: bool,
}

impl Stepper {
    pub fn new(
        params: ProblemParams,
        lap: RadialLaplacian,
        dt: f64,
        linear_only: bool,
        phase_only: bool,
    ) -> Result<Self, EvolutionError> {
        if !(dt.is_finite() && dt != 0.0) {
            return Err(EvolutionError::InvalidStep(dt));
        }
        let tau = dt / 2.0;
        let factor = lap.shifted_factor(tau);
        let nodes = lap.grid.nodes().to_vec();
        let pot_phase = nodes
            .iter()
            .map(|&r| if params.c == 0.0 { 0.0 } else { params.c * r.powf(-params.a) })
            .collect();
        let inhom = nodes.iter().map(|&r| r.powf(-params.b)).collect();
        Ok(Stepper { params, lap, factor, dt, pot_phase, inhom, linear_only, phase_only })
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    fn phase_half_step(&self, u: &mut RadialField) {
        let lam = self.params.lambda();
        let sigma = self.params.sigma;
        let half = self.dt / 2.0;
        for (j, v) in u.values.iter_mut().enumerate() {
            let amp = v.norm();
            let theta = -half * (self.pot_phase[j] + lam * self.inhom[j] * amp.powf(sigma));
            *v *= num_complex::Complex64::from_polar(1.0, theta);
        }
    }

    /// One full Strang step.
    pub fn step(&self, u: &mut RadialField) {
        if !self.linear_only {
            self.phase_half_step(u);
        }
        if !self.phase_only {
            let rhs = self.lap.shifted_apply(self.dt / 2.0, &u.values);
            u.values = self.factor.solve(&rhs);
        }
        if !self.linear_only {
            self.phase_half_step(u);
        }
    }
}

/// Maximum adjacent phase difference over node pairs that each carry at
/// least 1e-5 of the total mass. Singular potentials scramble the phase of
/// the innermost nodes, which hold a few parts per million of the mass in
/// d ≥ 2; only unresolved oscillation that carries mass is a resolution
/// problem, so near-massless nodes are excluded from the guard.
fn max_phase_jump(u: &RadialField) -> f64 {
    let weights = u.grid.weights();
    let node_mass: Vec<f64> = weights
        .iter()
        .zip(&u.values)
        .map(|(w, v)| w * v.norm_sqr())
        .collect();
    let floor = 1e-5 * node_mass.iter().sum::<f64>();
    let mut max = 0.0f64;
    for j in 0..u.values.len() - 1 {
        if node_mass[j] > floor && node_mass[j + 1] > floor {
            let raw = u.values[j + 1].arg() - u.values[j].arg();
            let dphi = (raw + std::f64::consts::PI).rem_euclid(2.0 * std::f64::consts::PI)
                - std::f64::consts::PI;
            max = max.max(dphi.abs());
        }
    }
    max
}

/// Evolve u0 and record monitors; terminates early on guard trips.
pub fn simulate(
    u0: &RadialField,
    params: &ProblemParams,
    cfg: &SimulationConfig,
) -> Result<SimulationTrace, EvolutionError> {
    if !(cfg.t_end > 0.0 && cfg.t_end.is_finite()) {
        return Err(EvolutionError::InvalidHorizon(cfg.t_end));
    }
    let lap = RadialLaplacian::new(&u0.grid);
    let stepper = Stepper::new(*params, lap.clone(), cfg.dt, cfg.linear_only, cfg.phase_only)?;
    let mut warnings = Vec::new();
    if params.a >= 2.0 {
        warnings.push(format!(
            "potential exponent a = {} is at or beyond the inverse-square scaling; \
             quadrature near the origin is formally first-order there",
            params.a
        ));
    }

    let n_steps = (cfg.t_end / cfg.dt).round().max(1.0) as usize;
    let stride = cfg.monitor_stride.max(1);
    let mut u = u0.clone();
    let kinetic0 = u.kinetic();
    let mass0 = u.mass();
    let guard = cfg.blowup_gradient_factor * cfg.blowup_gradient_factor;
    let phase_limit = 2.0 * std::f64::consts::PI / cfg.resolution_guard;

    let mut samples = Vec::new();
    let mut termination = Termination::Completed;
    let mut blowup_time = None;
    let mut boundary_mass_max = 0.0f64;

    // Kinetic energy is monitored through the scheme's own quadratic form
    // so that the recorded energy is the quantity the splitting actually
    // preserves to O(dt²); a fixed discretization mismatch would otherwise
    // masquerade as drift.
    let record =
        |u: &RadialField, t: f64, samples: &mut Vec<MonitorSample>| -> Result<(f64, f64), EvolutionError> {
            let kinetic = lap.dirichlet_form(&u.values);
            let pot = if params.c == 0.0 { 0.0 } else { u.potential_term(params.a)? };
            let nl = u.inhomogeneous_term(params.b, params.sigma)?;
            let energy =
                0.5 * kinetic + 0.5 * params.c * pot + params.lambda() / (params.sigma + 2.0) * nl;
            let (virial, virial_rate) = match &cfg.virial {
                Some(w) => (virial_value(u, w), virial_first_derivative(u, w)),
                None => (0.0, 0.0),
            };
            let mass = u.mass();
            samples.push(MonitorSample { t, mass, energy, kinetic, virial, virial_rate });
            Ok((kinetic, mass))
        };
    record(&u, 0.0, &mut samples)?;

    for step in 1..=n_steps {
        stepper.step(&mut u);
        let t = step as f64 * cfg.dt;
        if step % stride == 0 || step == n_steps {
            let (kinetic, mass) = record(&u, t, &mut samples)?;
            let w = u.grid.weights();
            let boundary = w[w.len() - 1] * u.values[u.n() - 1].norm_sqr() / mass0;
            boundary_mass_max = boundary_mass_max.max(boundary);
            let _ = mass;
            if kinetic > guard * kinetic0 {
                termination = Termination::BlowupDetected;
                blowup_time = Some(t);
                break;
            }
            if max_phase_jump(&u) > phase_limit {
                termination = Termination::ResolutionLost;
                break;
            }
        }
    }

    Ok(SimulationTrace { samples, termination, blowup_time, boundary_mass_max, warnings })
}

/// Finite-difference audit of the virial identities along a short run:
/// compares centered differences of V(t) against the integral expressions
/// for dV/dt and d²V/dt².
#[derive(Debug, Clone, Serialize)]
pub struct VirialAudit {
    pub dt: f64,
    /// max_t |FD(V)' - rate| / max_t |rate|.
    pub first_derivative_dev: f64,
    /// max_t |FD(V)'' - identity| / max_t |identity|.
    pub second_derivative_dev: f64,
    /// dV/dt at t = 0 from the integral expression.
    pub rate_at_zero: f64,
}

pub fn virial_consistency_audit(
    u0: &RadialField,
    params: &ProblemParams,
    weight: &VirialWeight,
    dt: f64,
    n_steps: usize,
) -> Result<VirialAudit, EvolutionError> {
    let lap = RadialLaplacian::new(&u0.grid);
    let fwd = Stepper::new(*params, lap.clone(), dt, false, false)?;
    let bwd = Stepper::new(*params, lap, -dt, false, false)?;

    // sample V, dV/dt, d²V/dt² along t = -dt, 0, dt, ..., n dt
    let mut u = u0.clone();
    bwd.step(&mut u);
    let mut vs = vec![virial_value(&u, weight)];
    let mut rates = Vec::new();
    let mut idents = Vec::new();
    let mut u = u0.clone();
    for _ in 0..=n_steps {
        vs.push(virial_value(&u, weight));
        rates.push(virial_first_derivative(&u, weight));
        idents.push(virial_second_derivative_identity(&u, weight, params)?.sum);
        fwd.step(&mut u);
    }
    vs.push(virial_value(&u, weight));
    // vs[k+1] corresponds to rates[k]/idents[k] at t = k dt
    let rate_scale = rates.iter().map(|r| r.abs()).fold(0.0, f64::max).max(1e-12);
    let ident_scale = idents.iter().map(|r| r.abs()).fold(0.0, f64::max).max(1e-12);
    let mut dev1 = 0.0f64;
    let mut dev2 = 0.0f64;
    for k in 0..rates.len() {
        let fd1 = (vs[k + 2] - vs[k]) / (2.0 * dt);
        let fd2 = (vs[k + 2] - 2.0 * vs[k + 1] + vs[k]) / (dt * dt);
        dev1 = dev1.max((fd1 - rates[k]).abs() / rate_scale);
        dev2 = dev2.max((fd2 - idents[k]).abs() / ident_scale);
    }
    Ok(VirialAudit {
        dt,
        first_derivative_dev: dev1,
        second_derivative_dev: dev2,
        rate_at_zero: rates[0],
    })
}
