//! Global-existence versus blow-up classification of initial data from
//! the conserved quantities and the sharp constants ledger, together with
//! a numerical cross-check that runs the classified data forward.
//!
//! Criteria are evaluated in a fixed document order (global-existence
//! criteria first, then blow-up criteria); the theory makes them mutually
//! exclusive, and the evaluator verifies that no global-existence
//! criterion and blow-up criterion fire simultaneously.

use serde::Serialize;
use thiserror::Error;

use crate::evolution::{simulate, EvolutionError, SimulationConfig, Termination};
use crate::field::{FieldError, RadialField};
use crate::ledger::{ConstantsLedger, LedgerError};
use crate::params::{gamma_c, Coupling, ProblemParams, Regime};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Outcome {
    GlobalExistence,
    BlowupFinite,
    /// Finite-time blow-up or unbounded gradient growth along a sequence
    /// of times.
    BlowupFiniteOrInfinite,
    NotCovered,
}

/// One inequality backing a verdict, with both sides evaluated.
#[derive(Debug, Clone, Serialize)]
pub struct Margin {
    pub name: String,
    pub lhs: f64,
    pub rhs: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct Verdict {
    pub outcome: Outcome,
    /// Which criterion fired, e.g. "global-existence.mass-subcritical".
    pub criterion: Option<String>,
    pub margins: Vec<Margin>,
}

#[derive(Debug, Error)]
pub enum DichotomyError {
    #[error("hypothesis range violated: {0}")]
    HypothesisRange(String),
    #[error("inconsistent criteria fired simultaneously: {0} and {1}")]
    Contradiction(String, String),
    #[error(transparent)]
    Ledger(#[from] LedgerError),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Evolution(#[from] EvolutionError),
}

struct Fired {
    outcome: Outcome,
    criterion: String,
    margins: Vec<Margin>,
}

/// Classify initial data. Needs the ledger for threshold comparisons
/// against the ground state Q or the extremal W_b.
pub fn evaluate(
    u0: &RadialField,
    p: &ProblemParams,
    ledger: &ConstantsLedger,
) -> Result<Verdict, DichotomyError> {
    let d = p.d;
    let df = d as f64;
    let cap = 2.0f64.min(df);
    let regime = p.regime();

    // Range gates. The subcritical/critical dichotomy theory assumes
    // 0 <= b < min{2, d} and, when the potential is present, a in the
    // same range; the inverse-square endpoint a = 2 is covered by a
    // separate mass-critical criterion for d >= 3.
    let standard_gate =
        p.b < cap && (p.c == 0.0 || (p.a > 0.0 && p.a < cap)) && regime != Regime::EnergySupercritical;
    let inverse_square_gate = d >= 3
        && p.a == 2.0
        && p.c != 0.0
        && regime == Regime::MassCritical
        && p.c > -((df - 2.0) / 2.0).powi(2);
    if !standard_gate && !inverse_square_gate {
        return Err(DichotomyError::HypothesisRange(format!(
            "(d={d}, a={}, b={}, sigma={}, c={}) lies outside every supported criterion range",
            p.a, p.b, p.sigma, p.c
        )));
    }

    let mass = u0.mass();
    let kinetic = u0.kinetic();
    let energy = u0.energy(p)?;

    let mut fired: Vec<Fired> = Vec::new();

    if standard_gate {
        // --- global existence ---
        if p.coupling == Coupling::Defocusing {
            fired.push(Fired {
                outcome: Outcome::GlobalExistence,
                criterion: "global-existence.defocusing".into(),
                margins: vec![],
            });
        }
        if p.coupling == Coupling::Focusing && regime == Regime::MassSubcritical {
            fired.push(Fired {
                outcome: Outcome::GlobalExistence,
                criterion: "global-existence.mass-subcritical".into(),
                margins: vec![Margin {
                    name: "sigma_below_mass_critical".into(),
                    lhs: p.sigma,
                    rhs: (4.0 - 2.0 * p.b) / df,
                }],
            });
        }
        if p.coupling == Coupling::Focusing && regime == Regime::MassCritical {
            let q = ledger.ground_state(d, p.b, p.sigma)?;
            if mass < q.state.mass {
                fired.push(Fired {
                    outcome: Outcome::GlobalExistence,
                    criterion: "global-existence.mass-threshold".into(),
                    margins: vec![Margin {
                        name: "mass_below_ground_state".into(),
                        lhs: mass,
                        rhs: q.state.mass,
                    }],
                });
            }
        }
        if p.coupling == Coupling::Focusing && regime == Regime::Intercritical && p.c >= 0.0 {
            let q = ledger.ground_state(d, p.b, p.sigma)?;
            let gc = gamma_c(d, p.b, p.sigma).expect("intercritical");
            let e_thresh = q.state.energy() * q.state.mass.powf(gc);
            let k_thresh = q.state.kinetic * q.state.mass.powf(gc);
            let e_lhs = energy * mass.powf(gc);
            let k_lhs = kinetic * mass.powf(gc);
            let margins = vec![
                Margin { name: "energy_mass_product".into(), lhs: e_lhs, rhs: e_thresh },
                Margin { name: "kinetic_mass_product".into(), lhs: k_lhs, rhs: k_thresh },
            ];
            if e_lhs < e_thresh && k_lhs < k_thresh {
                fired.push(Fired {
                    outcome: Outcome::GlobalExistence,
                    criterion: "global-existence.intercritical-threshold".into(),
                    margins,
                });
            }
        }

        // --- blow-up ---
        if p.coupling == Coupling::Focusing && p.c >= 0.0 {
            match regime {
                Regime::MassCritical if energy < 0.0 => {
                    fired.push(Fired {
                        outcome: Outcome::BlowupFinite,
                        criterion: "blowup.mass-critical-negative-energy".into(),
                        margins: vec![Margin {
                            name: "energy_negative".into(),
                            lhs: energy,
                            rhs: 0.0,
                        }],
                    });
                }
                Regime::Intercritical => {
                    let outcome = if p.sigma < 4.0 / df {
                        Outcome::BlowupFinite
                    } else {
                        Outcome::BlowupFiniteOrInfinite
                    };
                    if energy < 0.0 {
                        fired.push(Fired {
                            outcome,
                            criterion: "blowup.intercritical-negative-energy".into(),
                            margins: vec![Margin {
                                name: "energy_negative".into(),
                                lhs: energy,
                                rhs: 0.0,
                            }],
                        });
                    } else {
                        let q = ledger.ground_state(d, p.b, p.sigma)?;
                        let gc = gamma_c(d, p.b, p.sigma).expect("intercritical");
                        let e_lhs = energy * mass.powf(gc);
                        let e_thresh = q.state.energy() * q.state.mass.powf(gc);
                        let k_lhs = kinetic * mass.powf(gc);
                        let k_thresh = q.state.kinetic * q.state.mass.powf(gc);
                        if e_lhs < e_thresh && k_lhs > k_thresh {
                            fired.push(Fired {
                                outcome,
                                criterion: "blowup.intercritical-above-threshold".into(),
                                margins: vec![
                                    Margin {
                                        name: "energy_mass_product".into(),
                                        lhs: e_lhs,
                                        rhs: e_thresh,
                                    },
                                    Margin {
                                        name: "kinetic_mass_product_exceeds".into(),
                                        lhs: k_lhs,
                                        rhs: k_thresh,
                                    },
                                ],
                            });
                        }
                    }
                }
                Regime::EnergyCritical => {
                    let outcome = if p.b > 4.0 / df {
                        Outcome::BlowupFinite
                    } else {
                        Outcome::BlowupFiniteOrInfinite
                    };
                    if energy < 0.0 {
                        fired.push(Fired {
                            outcome,
                            criterion: "blowup.energy-critical-negative-energy".into(),
                            margins: vec![Margin {
                                name: "energy_negative".into(),
                                lhs: energy,
                                rhs: 0.0,
                            }],
                        });
                    } else {
                        let w = ledger.extremal(d, p.b)?;
                        if energy < w.energy && kinetic > w.kinetic {
                            fired.push(Fired {
                                outcome,
                                criterion: "blowup.energy-critical-above-threshold".into(),
                                margins: vec![
                                    Margin { name: "energy_below_extremal".into(), lhs: energy, rhs: w.energy },
                                    Margin { name: "kinetic_exceeds_extremal".into(), lhs: kinetic, rhs: w.kinetic },
                                ],
                            });
                        }
                    }
                }
                _ => {}
            }
        }
    }

    if inverse_square_gate && p.coupling == Coupling::Focusing && energy < 0.0 {
        fired.push(Fired {
            outcome: Outcome::BlowupFinite,
            criterion: "blowup.inverse-square-mass-critical".into(),
            margins: vec![Margin { name: "energy_negative".into(), lhs: energy, rhs: 0.0 }],
        });
    }

    // Mutual exclusivity: a global-existence criterion and a blow-up
    // criterion firing together means the inputs (or the ledger) are bad.
    let ge = fired.iter().find(|f| f.outcome == Outcome::GlobalExistence);
    let bu = fired.iter().find(|f| f.outcome != Outcome::GlobalExistence);
    if let (Some(g), Some(b)) = (ge, bu) {
        return Err(DichotomyError::Contradiction(g.criterion.clone(), b.criterion.clone()));
    }

    Ok(match fired.into_iter().next() {
        Some(f) => Verdict { outcome: f.outcome, criterion: Some(f.criterion), margins: f.margins },
        None => Verdict { outcome: Outcome::NotCovered, criterion: None, margins: vec![] },
    })
}

/// Verdict plus the observed fate of the forward run.
#[derive(Debug, Clone, Serialize)]
pub struct CrossCheck {
    pub verdict: Verdict,
    pub termination: Termination,
    pub blowup_time: Option<f64>,
    /// Whether the observed behavior is compatible with the verdict.
    pub consistent: bool,
}

pub fn cross_check(
    u0: &RadialField,
    p: &ProblemParams,
    cfg: &SimulationConfig,
    ledger: &ConstantsLedger,
) -> Result<CrossCheck, DichotomyError> {
    let verdict = evaluate(u0, p, ledger)?;
    let trace = simulate(u0, p, cfg)?;
    let consistent = match verdict.outcome {
        Outcome::GlobalExistence => trace.termination == Termination::Completed,
        Outcome::BlowupFinite | Outcome::BlowupFiniteOrInfinite => {
            trace.termination == Termination::BlowupDetected
        }
        Outcome::NotCovered => true,
    };
    Ok(CrossCheck {
        verdict,
        termination: trace.termination,
        blowup_time: trace.blowup_time,
        consistent,
    })
}
