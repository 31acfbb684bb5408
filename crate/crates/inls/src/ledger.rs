//! Persistent JSON ledger of computed ground states and sharp constants,
//! keyed by parameter triple. Serialization is deterministic (entries are
//! kept sorted), so ledgers diff cleanly across runs.

use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::variational::{GroundState, HardySobolevConstants};

#[derive(Debug, Error)]
pub enum LedgerError {
    #[error("ledger io: {0}")]
    Io(String),
    #[error("ledger parse: {0}")]
    Parse(String),
    #[error("missing ground-state entry for (d={d}, b={b}, sigma={sigma}); run the ground-state command first")]
    MissingGroundState { d: u32, b: f64, sigma: f64 },
    #[error("missing extremal-constants entry for (d={d}, b={b}); run the constants command first")]
    MissingExtremal { d: u32, b: f64 },
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct ConstantsLedger {
    #[serde(default)]
    pub ground_states: Vec<GroundStateEntry>,
    #[serde(default)]
    pub extremals: Vec<HardySobolevConstants>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GroundStateEntry {
    #[serde(flatten)]
    pub state: GroundState,
    /// Sharp Gagliardo–Nirenberg constant, when the regime admits one.
    pub gn_constant: Option<f64>,
}

impl ConstantsLedger {
    pub fn load(path: &Path) -> Result<Self, LedgerError> {
        if !path.exists() {
            return Ok(ConstantsLedger::default());
        }
        let text = std::fs::read_to_string(path).map_err(|e| LedgerError::Io(e.to_string()))?;
        serde_json::from_str(&text).map_err(|e| LedgerError::Parse(e.to_string()))
    }

    pub fn save(&self, path: &Path) -> Result<(), LedgerError> {
        let mut sorted = self.clone();
        sorted.ground_states.sort_by(|a, b| {
            (a.state.d, a.state.b, a.state.sigma)
                .partial_cmp(&(b.state.d, b.state.b, b.state.sigma))
                .unwrap()
        });
        sorted.extremals.sort_by(|a, b| (a.d, a.b).partial_cmp(&(b.d, b.b)).unwrap());
        let text = serde_json::to_string_pretty(&sorted).map_err(|e| LedgerError::Io(e.to_string()))?;
        std::fs::write(path, text).map_err(|e| LedgerError::Io(e.to_string()))
    }

    pub fn ground_state(&self, d: u32, b: f64, sigma: f64) -> Result<&GroundStateEntry, LedgerError> {
        self.ground_states
            .iter()
            .find(|e| e.state.d == d && e.state.b == b && e.state.sigma == sigma)
            .ok_or(LedgerError::MissingGroundState { d, b, sigma })
    }

    pub fn extremal(&self, d: u32, b: f64) -> Result<&HardySobolevConstants, LedgerError> {
        self.extremals
            .iter()
            .find(|e| e.d == d && e.b == b)
            .ok_or(LedgerError::MissingExtremal { d, b })
    }

    /// Insert or replace an entry (idempotent on re-runs).
    pub fn upsert_ground_state(&mut self, entry: GroundStateEntry) {
        self.ground_states.retain(|e| {
            !(e.state.d == entry.state.d
                && e.state.b == entry.state.b
                && e.state.sigma == entry.state.sigma)
        });
        self.ground_states.push(entry);
    }

    pub fn upsert_extremal(&mut self, entry: HardySobolevConstants) {
        self.extremals.retain(|e| !(e.d == entry.d && e.b == entry.b));
        self.extremals.push(entry);
    }
}
