//! TOML run configuration shared by all CLI subcommands.

use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::evolution::SimulationConfig;
use crate::field::{FieldError, RadialField, RadialGrid};
use crate::ledger::ConstantsLedger;
use crate::params::{Coupling, ParamError, ProblemParams};
use crate::variational::GroundState;
use crate::virial::{VirialError, VirialWeight};

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read config {path}: {msg}")]
    Read { path: PathBuf, msg: String },
    #[error("cannot parse config {path}: {msg}")]
    Parse { path: PathBuf, msg: String },
    #[error("invalid config: {0}")]
    Invalid(String),
    #[error(transparent)]
    Params(#[from] ParamError),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Virial(#[from] VirialError),
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub problem: ProblemSection,
    #[serde(default)]
    pub grid: GridSection,
    #[serde(default)]
    pub sim: SimSection,
    #[serde(default)]
    pub initial: InitialSection,
    #[serde(default)]
    pub virial: VirialSection,
    #[serde(default)]
    pub exponents: ExponentsSection,
    #[serde(default)]
    pub ledger: LedgerSection,
    #[serde(default)]
    pub output: OutputSection,
    #[serde(default)]
    pub sweep: SweepSection,
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemSection {
    pub d: u32,
    #[serde(default)]
    pub c: f64,
    pub a: f64,
    #[serde(default)]
    pub b: f64,
    pub sigma: f64,
    pub lambda: f64,
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct GridSection {
    pub n: usize,
    pub r_max: f64,
}

impl Default for GridSection {
    fn default() -> Self {
        GridSection { n: 4096, r_max: 32.0 }
    }
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct SimSection {
    pub dt: f64,
    pub t_end: f64,
    pub monitor_stride: usize,
    pub blowup_gradient_factor: f64,
    pub resolution_guard: f64,
    #[serde(default)]
    pub linear_only: bool,
    #[serde(default)]
    pub phase_only: bool,
}

impl Default for SimSection {
    fn default() -> Self {
        SimSection {
            dt: 1e-3,
            t_end: 1.0,
            monitor_stride: 10,
            blowup_gradient_factor: 100.0,
            resolution_guard: 4.0,
            linear_only: false,
            phase_only: false,
        }
    }
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields, rename_all = "snake_case", tag = "kind")]
pub enum InitialSection {
    /// amplitude · e^{-r²/(2 width²)}
    Gaussian { amplitude: f64, width: f64 },
    /// scale · Q(r) with Q resampled from the ledger profile.
    GroundState { scale: f64 },
    /// Columnar field file.
    File { path: PathBuf },
}

impl Default for InitialSection {
    fn default() -> Self {
        InitialSection::Gaussian { amplitude: 1.0, width: 1.0 }
    }
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct VirialSection {
    pub enabled: bool,
    pub kind: VirialKindSection,
    pub radius: f64,
    /// Shoulder exponent of the mass-critical weight.
    pub shoulder: u32,
}

#[derive(Debug, Clone, Copy, Deserialize, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum VirialKindSection {
    Quadratic,
    MassCritical,
}

impl Default for VirialSection {
    fn default() -> Self {
        VirialSection {
            enabled: false,
            kind: VirialKindSection::Quadratic,
            radius: 4.0,
            shoulder: 4,
        }
    }
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct ExponentsSection {
    /// Regularity s for the H^s hypothesis check and pair selection.
    pub s: f64,
}

impl Default for ExponentsSection {
    fn default() -> Self {
        ExponentsSection { s: 1.0 }
    }
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct LedgerSection {
    pub path: PathBuf,
}

impl Default for LedgerSection {
    fn default() -> Self {
        LedgerSection { path: PathBuf::from("constants.json") }
    }
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    pub dir: PathBuf,
    /// Write the final field snapshot in columnar form.
    pub snapshots: bool,
}

impl Default for OutputSection {
    fn default() -> Self {
        OutputSection { dir: PathBuf::from("out"), snapshots: false }
    }
}

#[derive(Debug, Clone, Default, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSection {
    #[serde(default)]
    pub amplitudes: Vec<f64>,
    #[serde(default)]
    pub sigmas: Vec<f64>,
    #[serde(default)]
    pub workers: usize,
    #[serde(default)]
    pub cross_check: bool,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|e| ConfigError::Read {
            path: path.to_path_buf(),
            msg: e.to_string(),
        })?;
        let cfg: RunConfig = toml::from_str(&text).map_err(|e| ConfigError::Parse {
            path: path.to_path_buf(),
            msg: e.to_string(),
        })?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        self.params()?;
        if self.sim.dt == 0.0 || !self.sim.dt.is_finite() {
            return Err(ConfigError::Invalid(format!("sim.dt = {}", self.sim.dt)));
        }
        if !self.sim.t_end.is_finite() || self.sim.t_end <= 0.0 {
            return Err(ConfigError::Invalid(format!("sim.t_end = {}", self.sim.t_end)));
        }
        if self.sim.blowup_gradient_factor <= 1.0 {
            return Err(ConfigError::Invalid(
                "sim.blowup_gradient_factor must exceed 1".into(),
            ));
        }
        if self.sim.resolution_guard <= 1.0 {
            return Err(ConfigError::Invalid("sim.resolution_guard must exceed 1".into()));
        }
        if let InitialSection::File { path } = &self.initial {
            if !path.exists() {
                return Err(ConfigError::Invalid(format!(
                    "initial.path {} does not exist",
                    path.display()
                )));
            }
        }
        // grid and virial sections validate on construction
        RadialGrid::new(self.problem.d, self.grid.n, self.grid.r_max)?;
        if self.virial.enabled {
            self.virial_weight()?;
        }
        Ok(())
    }

    pub fn params(&self) -> Result<ProblemParams, ConfigError> {
        let p = &self.problem;
        let coupling = Coupling::from_lambda(p.lambda)?;
        Ok(ProblemParams::new(p.d, p.c, p.a, p.b, p.sigma, coupling)?)
    }

    pub fn grid(&self) -> Result<Arc<RadialGrid>, ConfigError> {
        Ok(RadialGrid::new(self.problem.d, self.grid.n, self.grid.r_max)?)
    }

    pub fn virial_weight(&self) -> Result<Option<VirialWeight>, ConfigError> {
        if !self.virial.enabled {
            return Ok(None);
        }
        let w = match self.virial.kind {
            VirialKindSection::Quadratic => VirialWeight::quadratic(self.virial.radius)?,
            VirialKindSection::MassCritical => {
                VirialWeight::mass_critical(self.virial.radius, self.virial.shoulder)?
            }
        };
        Ok(Some(w))
    }

    pub fn simulation(&self) -> Result<SimulationConfig, ConfigError> {
        Ok(SimulationConfig {
            dt: self.sim.dt,
            t_end: self.sim.t_end,
            monitor_stride: self.sim.monitor_stride,
            blowup_gradient_factor: self.sim.blowup_gradient_factor,
            resolution_guard: self.sim.resolution_guard,
            virial: self.virial_weight()?,
            linear_only: self.sim.linear_only,
            phase_only: self.sim.phase_only,
        })
    }

    /// Build the initial field; ground-state initials read the ledger.
    pub fn initial_field(
        &self,
        grid: &Arc<RadialGrid>,
        ledger: &ConstantsLedger,
    ) -> Result<RadialField, ConfigError> {
        match &self.initial {
            InitialSection::Gaussian { amplitude, width } => {
                if !width.is_finite() || *width <= 0.0 {
                    return Err(ConfigError::Invalid(format!("initial.width = {width}")));
                }
                Ok(RadialField::gaussian(grid, *amplitude, *width))
            }
            InitialSection::GroundState { scale } => {
                let entry = ledger
                    .ground_state(self.problem.d, self.problem.b, self.problem.sigma)
                    .map_err(|e| ConfigError::Invalid(e.to_string()))?;
                Ok(scale_profile(&entry.state, grid, *scale))
            }
            InitialSection::File { path } => Ok(RadialField::read_from_file(path)?),
        }
    }
}

fn scale_profile(gs: &GroundState, grid: &Arc<RadialGrid>, scale: f64) -> RadialField {
    let mut u = gs.on_grid(grid);
    for v in &mut u.values {
        *v *= scale;
    }
    u
}
