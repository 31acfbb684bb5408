//! Problem parameters and the exponent calculus for
//! `i u_t + Δu - c|x|^{-a} u = λ |x|^{-b} |u|^σ u` on `R^d`.
//!
//! Everything here is scale arithmetic: critical Sobolev index, scaling
//! regimes, local-wellposedness hypothesis checks, and the selection of
//! admissible Strichartz pairs for the contraction argument. Threshold
//! comparisons that decide a regime are done in exact rational arithmetic
//! (every finite `f64` is a rational), with a `1e-12` relative tolerance
//! fallback for inputs that only approximate a rational threshold.

use num::{BigRational, FromPrimitive, One, Signed, Zero};
use serde::Serialize;
use thiserror::Error;

/// Sign of the nonlinear coupling λ.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Coupling {
    /// λ = +1
    Defocusing,
    /// λ = -1
    Focusing,
}

impl Coupling {
    pub fn lambda(self) -> f64 {
        match self {
            Coupling::Defocusing => 1.0,
            Coupling::Focusing => -1.0,
        }
    }

    pub fn from_lambda(lambda: f64) -> Result<Self, ParamError> {
        if lambda == 1.0 {
            Ok(Coupling::Defocusing)
        } else if lambda == -1.0 {
            Ok(Coupling::Focusing)
        } else {
            Err(ParamError::InvalidLambda(lambda))
        }
    }
}

/// Scaling regime of (d, b, σ) relative to the mass- and energy-critical
/// exponents σ = (4-2b)/d and σ = (4-2b)/(d-2).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Regime {
    MassSubcritical,
    MassCritical,
    Intercritical,
    EnergyCritical,
    EnergySupercritical,
}

#[derive(Debug, Error, PartialEq)]
pub enum ParamError {
    #[error("dimension must be >= 1, got {0}")]
    InvalidDimension(u32),
    #[error("potential exponent a must be positive, got {0}")]
    InvalidA(f64),
    #[error("inhomogeneity exponent b must be nonnegative, got {0}")]
    InvalidB(f64),
    #[error("nonlinearity power sigma must be positive, got {0}")]
    InvalidSigma(f64),
    #[error("coupling lambda must be +1 or -1, got {0}")]
    InvalidLambda(f64),
    #[error("gamma_c is undefined at the mass-critical exponent (s_c = 0)")]
    MassCriticalGamma,
    #[error("parameter {0} is not finite")]
    NotFinite(&'static str),
}

/// Full parameter set of the equation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ProblemParams {
    pub d: u32,
    pub c: f64,
    pub a: f64,
    pub b: f64,
    pub sigma: f64,
    pub coupling: Coupling,
}

impl ProblemParams {
    pub fn new(
        d: u32,
        c: f64,
        a: f64,
        b: f64,
        sigma: f64,
        coupling: Coupling,
    ) -> Result<Self, ParamError> {
        if d < 1 {
            return Err(ParamError::InvalidDimension(d));
        }
        for (name, v) in [("c", c), ("a", a), ("b", b), ("sigma", sigma)] {
            if !v.is_finite() {
                return Err(ParamError::NotFinite(name));
            }
        }
        if a <= 0.0 {
            return Err(ParamError::InvalidA(a));
        }
        if b < 0.0 {
            return Err(ParamError::InvalidB(b));
        }
        if sigma <= 0.0 {
            return Err(ParamError::InvalidSigma(sigma));
        }
        Ok(ProblemParams { d, c, a, b, sigma, coupling })
    }

    pub fn lambda(&self) -> f64 {
        self.coupling.lambda()
    }

    /// Critical Sobolev index s_c = d/2 - (2-b)/σ.
    pub fn critical_sobolev_exponent(&self) -> f64 {
        critical_sobolev_exponent(self.d, self.b, self.sigma)
    }

    /// γ_c = (1 - s_c)/s_c; undefined at the mass-critical exponent.
    pub fn gamma_c(&self) -> Result<f64, ParamError> {
        gamma_c(self.d, self.b, self.sigma)
    }

    pub fn regime(&self) -> Regime {
        classify_regime(self.d, self.b, self.sigma)
    }
}

pub(crate) fn rat(x: f64) -> BigRational {
    BigRational::from_f64(x).expect("finite float")
}

fn rat_u(n: u32) -> BigRational {
    BigRational::from_u32(n).expect("u32")
}

/// Exact-rational equality with a 1e-12 absolute tolerance fallback for
/// inputs that only approximate the threshold in floating point.
fn rational_eq(x: &BigRational, y: &BigRational) -> bool {
    if x == y {
        return true;
    }
    let tol = rat(1e-12);
    (x - y).abs() <= tol
}

/// s_c = d/2 - (2-b)/σ.
pub fn critical_sobolev_exponent(d: u32, b: f64, sigma: f64) -> f64 {
    d as f64 / 2.0 - (2.0 - b) / sigma
}

/// γ_c = (1 - s_c)/s_c, equivalently (4 - 2b - (d-2)σ) / (dσ - 4 + 2b).
///
/// The two forms are computed independently and must agree to relative
/// 1e-12; errors at the mass-critical exponent where s_c = 0.
pub fn gamma_c(d: u32, b: f64, sigma: f64) -> Result<f64, ParamError> {
    let df = d as f64;
    let sc_num = rat_u(d) * rat(sigma) - (rat(2.0) - rat(b)) * rat(2.0);
    let s_c = critical_sobolev_exponent(d, b, sigma);
    if sc_num.is_zero() || s_c == 0.0 {
        return Err(ParamError::MassCriticalGamma);
    }
    let primary = (1.0 - s_c) / s_c;
    let alt = (4.0 - 2.0 * b - (df - 2.0) * sigma) / (df * sigma - 4.0 + 2.0 * b);
    debug_assert!(
        (primary - alt).abs() <= 1e-12 * primary.abs().max(alt.abs()).max(1.0),
        "gamma_c forms disagree: {primary} vs {alt}"
    );
    Ok(primary)
}

/// σ_c(s, b): the H^s-critical nonlinearity power, (4-2b)/(d-2s) when
/// s < d/2 and +∞ otherwise (also +∞ when b >= 2 makes the numerator
/// nonpositive only formally; we return the formula's value for b < 2).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum SigmaC {
    Finite(f64),
    Infinite,
}

impl SigmaC {
    pub fn is_finite(&self) -> bool {
        matches!(self, SigmaC::Finite(_))
    }

    /// true iff sigma < self (strict).
    pub fn exceeds(&self, sigma: f64) -> bool {
        match self {
            SigmaC::Finite(v) => sigma < *v,
            SigmaC::Infinite => true,
        }
    }

    /// true iff sigma <= self.
    pub fn admits(&self, sigma: f64) -> bool {
        match self {
            SigmaC::Finite(v) => sigma <= *v,
            SigmaC::Infinite => true,
        }
    }

    pub fn value(&self) -> f64 {
        match self {
            SigmaC::Finite(v) => *v,
            SigmaC::Infinite => f64::INFINITY,
        }
    }
}

/// σ_c(s, b) = (4 - 2b)/(d - 2s) for s < d/2, +∞ for s >= d/2.
pub fn critical_power(d: u32, s: f64, b: f64) -> SigmaC {
    let df = d as f64;
    if s >= df / 2.0 {
        SigmaC::Infinite
    } else {
        SigmaC::Finite((4.0 - 2.0 * b) / (df - 2.0 * s))
    }
}

/// Classify (d, b, σ) against the mass- and energy-critical exponents.
pub fn classify_regime(d: u32, b: f64, sigma: f64) -> Regime {
    let s = rat(sigma);
    let mass = (rat(4.0) - rat(2.0) * rat(b)) / rat_u(d);
    if rational_eq(&s, &mass) {
        return Regime::MassCritical;
    }
    if s < mass {
        return Regime::MassSubcritical;
    }
    if d >= 3 {
        let energy = (rat(4.0) - rat(2.0) * rat(b)) / rat_u(d - 2);
        if rational_eq(&s, &energy) {
            return Regime::EnergyCritical;
        }
        if s > energy {
            return Regime::EnergySupercritical;
        }
    }
    Regime::Intercritical
}

/// One named hypothesis inequality with its two sides and the distance to
/// the boundary (positive when satisfied with room to spare).
#[derive(Debug, Clone, Serialize)]
pub struct Clause {
    pub name: String,
    pub passed: bool,
    pub lhs: f64,
    pub rhs: f64,
    pub margin: f64,
}

impl Clause {
    fn strict(name: &str, lhs: f64, rhs: f64) -> Self {
        Clause {
            name: name.to_string(),
            passed: lhs < rhs,
            lhs,
            rhs,
            margin: rhs - lhs,
        }
    }

    fn weak(name: &str, lhs: f64, rhs: f64) -> Self {
        Clause {
            name: name.to_string(),
            passed: lhs <= rhs,
            lhs,
            rhs,
            margin: rhs - lhs,
        }
    }

    fn boolean(name: &str, passed: bool) -> Self {
        Clause {
            name: name.to_string(),
            passed,
            lhs: if passed { 1.0 } else { 0.0 },
            rhs: 1.0,
            margin: 0.0,
        }
    }
}

/// Outcome of a hypothesis check: every clause with pass/fail and margins.
#[derive(Debug, Clone, Serialize)]
pub struct HypothesisReport {
    pub clauses: Vec<Clause>,
}

impl HypothesisReport {
    pub fn all_pass(&self) -> bool {
        self.clauses.iter().all(|c| c.passed)
    }

    pub fn failed(&self) -> Vec<&Clause> {
        self.clauses.iter().filter(|c| !c.passed).collect()
    }
}

/// H^1 local-wellposedness hypotheses:
/// 0 < a < min{2, d}, 0 < b < min{2, d}, 0 < σ < σ_c(1, b).
pub fn check_lwp_h1(p: &ProblemParams) -> HypothesisReport {
    let cap = 2.0f64.min(p.d as f64);
    let sigma_cap = critical_power(p.d, 1.0, p.b);
    let mut clauses = vec![
        Clause::strict("a_positive", 0.0, p.a),
        Clause::strict("a_below_min_2_d", p.a, cap),
        Clause::strict("b_positive", 0.0, p.b),
        Clause::strict("b_below_min_2_d", p.b, cap),
        Clause::strict("sigma_positive", 0.0, p.sigma),
    ];
    clauses.push(match sigma_cap {
        SigmaC::Finite(v) => Clause::strict("sigma_below_h1_critical", p.sigma, v),
        SigmaC::Infinite => Clause::boolean("sigma_below_h1_critical", true),
    });
    HypothesisReport { clauses }
}

/// H^s local-wellposedness hypotheses for 0 <= s < d/2:
/// b and a below min{2, d-s, 1 + d/2 - s}, σ <= (4-2b)/(d-2s), and the
/// regularity condition (σ an even integer, or σ > ⌈s⌉ - 1).
pub fn check_lwp_hs(p: &ProblemParams, s: f64) -> HypothesisReport {
    let df = p.d as f64;
    let cap = 2.0f64.min(df - s).min(1.0 + df / 2.0 - s);
    let sigma_cap = critical_power(p.d, s, p.b);
    let mut clauses = vec![
        Clause::weak("s_nonnegative", 0.0, s),
        Clause::strict("s_below_d_half", s, df / 2.0),
        Clause::weak("b_nonnegative", 0.0, p.b),
        Clause::strict("b_below_cap", p.b, cap),
        Clause::strict("a_positive", 0.0, p.a),
        Clause::strict("a_below_cap", p.a, cap),
        Clause::strict("sigma_positive", 0.0, p.sigma),
    ];
    clauses.push(match sigma_cap {
        SigmaC::Finite(v) => Clause::weak("sigma_at_most_hs_critical", p.sigma, v),
        SigmaC::Infinite => Clause::boolean("sigma_at_most_hs_critical", true),
    });
    clauses.push(Clause::boolean(
        "regularity",
        is_even_integer(p.sigma) || p.sigma > s.ceil() - 1.0,
    ));
    HypothesisReport { clauses }
}

fn is_even_integer(x: f64) -> bool {
    let r = x.round();
    (x - r).abs() <= 1e-12 && (r as i64) % 2 == 0 && r > 0.0
}

/// Schrödinger-admissibility on R^d: 2/p = d/2 - d/q with q in the
/// admissible range (2 <= q <= 2d/(d-2) for d >= 3, 2 <= q < ∞ otherwise).
/// The scaling relation is checked in exact rational arithmetic with a
/// 1e-12 tolerance fallback. p = ∞ is permitted (q = 2).
pub fn is_admissible(p: f64, q: f64, d: u32) -> bool {
    let df = d as f64;
    if !q.is_finite() || q < 2.0 {
        return false;
    }
    if d >= 3 && q > 2.0 * df / (df - 2.0) + 1e-12 {
        return false;
    }
    if p < 2.0 && p.is_finite() {
        // the relation forces p >= 2 inside the q-range anyway; reject junk
        return false;
    }
    let inv_p = if p.is_finite() { rat(1.0) / rat(p) } else { BigRational::zero() };
    let lhs = rat(2.0) * inv_p;
    let rhs = rat_u(d) / rat(2.0) - rat_u(d) / rat(q);
    rational_eq(&lhs, &rhs)
}

/// Strichartz pair selection for the contraction argument at regularity s.
#[derive(Debug, Clone, Serialize)]
pub struct StrichartzSelection {
    /// Pair handling the nonlinear term.
    pub p_nl: f64,
    pub q_nl: f64,
    /// Pair handling the potential term.
    pub p_pot: f64,
    pub q_pot: f64,
    /// Contraction exponent θ = (4 - 2b - (d-2s)σ)/4; zero exactly at the
    /// critical power.
    pub theta: f64,
    /// Feasibility window for the dual Lebesgue index of the nonlinear
    /// estimate (after intersecting with admissibility), as (lo, hi).
    pub nl_window: (f64, f64),
    /// Same for the potential estimate.
    pub pot_window: (f64, f64),
}

#[derive(Debug, Error, PartialEq)]
pub enum PairError {
    #[error("empty {which} exponent window: ({lo}, {hi})")]
    Infeasible { which: &'static str, lo: f64, hi: f64 },
}

/// Select admissible Strichartz pairs witnessing the nonlinear and
/// potential contraction estimates at regularity s.
///
/// The dual index 1/β' of the nonlinear estimate must lie in the window
/// (max{(s+b)/d, (d-2)(σ+1)/(2d) - σs/d + b/d}, (σ+1)/2 - σs/d + b/d),
/// and β must additionally be the Lebesgue index of an admissible pair
/// with q strictly inside the admissible range, i.e. 1/β' in
/// (1/2, 1 - max{(d-2)/(2d), 0}). We take the midpoint of the
/// intersection of the two windows: the raw window's midpoint can fall
/// outside the admissible strip (e.g. d=3, s=0, b=1, σ=1 gives raw
/// midpoint 1 which corresponds to β = ∞), while the intersection is
/// nonempty whenever the hypotheses of the H^s theory hold.
pub fn find_source_pairs(p: &ProblemParams, s: f64) -> Result<StrichartzSelection, PairError> {
    let d = rat_u(p.d);
    let two = rat(2.0);
    let half = rat(0.5);
    let one = BigRational::one();
    let b = rat(p.b);
    let sr = rat(s);
    let sig = rat(p.sigma);

    // Open admissible strip for a dual index 1/β': (1/2, 1 - max{(d-2)/(2d), 0}).
    let strip_lo = half.clone();
    let strip_hi = if p.d >= 3 {
        one.clone() - (d.clone() - two.clone()) / (two.clone() * d.clone())
    } else {
        one.clone()
    };

    // Nonlinear-term window on 1/β̃'.
    let nl_lo_a = (sr.clone() + b.clone()) / d.clone();
    let nl_lo_b = (d.clone() - two.clone()) * (sig.clone() + one.clone())
        / (two.clone() * d.clone())
        - sig.clone() * sr.clone() / d.clone()
        + b.clone() / d.clone();
    let nl_hi = (sig.clone() + one.clone()) / two.clone() - sig.clone() * sr.clone() / d.clone()
        + b.clone() / d.clone();
    let nl_lo = nl_lo_a.max(nl_lo_b).max(strip_lo.clone());
    let nl_hi = nl_hi.min(strip_hi.clone());
    if nl_lo >= nl_hi {
        return Err(PairError::Infeasible {
            which: "nonlinear",
            lo: to_f64(&nl_lo),
            hi: to_f64(&nl_hi),
        });
    }

    // Potential-term window on 1/β̄'.
    let a = rat(p.a);
    let pot_lo_a = (d.clone() - two.clone()) / (two.clone() * d.clone()) + a.clone() / d.clone();
    let pot_lo_b = (sr.clone() + a.clone()) / d.clone();
    let pot_hi = half.clone() + a.clone() / d.clone();
    let pot_lo = pot_lo_a.max(pot_lo_b).max(strip_lo.clone());
    let pot_hi = pot_hi.min(strip_hi.clone());
    if pot_lo >= pot_hi {
        return Err(PairError::Infeasible {
            which: "potential",
            lo: to_f64(&pot_lo),
            hi: to_f64(&pot_hi),
        });
    }

    let inv_beta_dual = (nl_lo.clone() + nl_hi.clone()) / two.clone();
    // 1/β̃' = (σ+1)/q̃ - σs/d + b/d  =>  1/q̃ from the midpoint.
    let inv_q_nl = (inv_beta_dual.clone() + sig.clone() * sr.clone() / d.clone()
        - b.clone() / d.clone())
        / (sig.clone() + one.clone());
    let (p_nl, q_nl) = admissible_pair_from(&inv_q_nl, p.d);
    debug_assert!(is_admissible(p_nl, q_nl, p.d));
    let pot_mid_dual = (pot_lo.clone() + pot_hi.clone()) / two.clone();
    let inv_q_pot = one.clone() - pot_mid_dual;
    let (p_pot, q_pot) = admissible_pair_from(&inv_q_pot, p.d);
    debug_assert!(is_admissible(p_pot, q_pot, p.d));

    // θ = (4 - 2b - (d - 2s)σ)/4, exact in rationals so criticality gives 0.
    let theta = (rat(4.0) - two.clone() * b.clone()
        - (d.clone() - two.clone() * sr.clone()) * sig.clone())
        / rat(4.0);

    Ok(StrichartzSelection {
        p_nl,
        q_nl,
        theta: to_f64(&theta),
        p_pot,
        q_pot,
        nl_window: (to_f64(&nl_lo), to_f64(&nl_hi)),
        pot_window: (to_f64(&pot_lo), to_f64(&pot_hi)),
    })
}

/// Build the admissible pair with Lebesgue reciprocal 1/q, via 1/p = d/4 - (d/2)(1/q).
fn admissible_pair_from(inv_q: &BigRational, d: u32) -> (f64, f64) {
    let inv_p = rat_u(d) / rat(4.0) - rat_u(d) / rat(2.0) * inv_q.clone();
    let q = 1.0 / to_f64(inv_q);
    let p = if inv_p.is_zero() { f64::INFINITY } else { 1.0 / to_f64(&inv_p) };
    (p, q)
}

fn to_f64(x: &BigRational) -> f64 {
    use num::ToPrimitive;
    x.to_f64().expect("rational fits f64")
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn params(d: u32, b: f64, sigma: f64) -> ProblemParams {
        ProblemParams::new(d, 0.0, 1.0, b, sigma, Coupling::Focusing).unwrap()
    }

    #[test]
    fn critical_index_quintic_line() {
        // d=1, b=0, σ=4 sits exactly at the mass-critical point.
        assert_eq!(critical_sobolev_exponent(1, 0.0, 4.0), 0.0);
        assert_eq!(classify_regime(1, 0.0, 4.0), Regime::MassCritical);
    }

    #[test]
    fn critical_index_cubic_3d() {
        assert_relative_eq!(critical_sobolev_exponent(3, 0.0, 2.0), 0.5);
        assert_eq!(gamma_c(3, 0.0, 2.0).unwrap(), 1.0);
        assert_eq!(classify_regime(3, 0.0, 2.0), Regime::Intercritical);
    }

    #[test]
    fn gamma_undefined_at_mass_critical() {
        assert_eq!(gamma_c(2, 0.0, 2.0), Err(ParamError::MassCriticalGamma));
        assert_eq!(gamma_c(1, 0.0, 4.0), Err(ParamError::MassCriticalGamma));
    }

    #[test]
    fn regime_tolerates_float_thresholds() {
        // σ = 2/3 in floating point is not exactly rational 2/3.
        assert_eq!(classify_regime(3, 1.0, 2.0 / 3.0), Regime::MassCritical);
        assert_eq!(classify_regime(3, 1.0, 2.0), Regime::EnergyCritical);
        assert_eq!(classify_regime(3, 1.0, 2.5), Regime::EnergySupercritical);
        assert_eq!(classify_regime(3, 1.0, 0.5), Regime::MassSubcritical);
        assert_eq!(classify_regime(2, 0.0, 5.0), Regime::Intercritical);
    }

    #[test]
    fn critical_power_formula() {
        assert_eq!(critical_power(3, 1.0, 0.0), SigmaC::Finite(4.0));
        assert_eq!(critical_power(3, 1.0, 1.0), SigmaC::Finite(2.0));
        assert_eq!(critical_power(2, 1.0, 0.0), SigmaC::Infinite);
        assert_eq!(critical_power(1, 0.5, 0.0), SigmaC::Infinite);
    }

    #[test]
    fn h1_check_cubic_3d() {
        let p = ProblemParams::new(3, 1.0, 1.0, 1.0, 1.0, Coupling::Focusing).unwrap();
        assert!(check_lwp_h1(&p).all_pass());
        let p = ProblemParams::new(3, 1.0, 1.0, 1.0, 2.5, Coupling::Focusing).unwrap();
        let rep = check_lwp_h1(&p);
        assert!(!rep.all_pass());
        assert_eq!(rep.failed()[0].name, "sigma_below_h1_critical");
    }

    #[test]
    fn hs_check_examples() {
        // s = 0.5 in 3d with b = 0.5, a = 0.5, σ = 1: all clauses hold.
        let p = ProblemParams::new(3, 0.0, 0.5, 0.5, 1.0, Coupling::Focusing).unwrap();
        assert!(check_lwp_hs(&p, 0.5).all_pass());

        // High regularity with a weak nonlinearity fails the regularity clause.
        let p = ProblemParams::new(3, 0.0, 1.0, 1.0, 0.4, Coupling::Focusing).unwrap();
        let rep = check_lwp_hs(&p, 1.5);
        assert!(!rep.all_pass());
        assert!(rep.failed().iter().any(|c| c.name == "regularity"));

        // Near-maximal b leaves almost no room for σ.
        let p = ProblemParams::new(4, 0.0, 1.0, 1.9, 0.5, Coupling::Focusing).unwrap();
        let rep = check_lwp_hs(&p, 0.0);
        assert!(!rep.all_pass());
        assert!(rep.failed().iter().any(|c| c.name == "sigma_at_most_hs_critical"));

        // Even-integer σ passes the regularity clause regardless of s.
        let p = ProblemParams::new(3, 0.0, 0.5, 0.5, 2.0, Coupling::Focusing).unwrap();
        let rep = check_lwp_hs(&p, 1.4);
        assert!(rep.clauses.iter().find(|c| c.name == "regularity").unwrap().passed);
    }

    #[test]
    fn admissible_basics() {
        assert!(is_admissible(f64::INFINITY, 2.0, 3));
        assert!(is_admissible(f64::INFINITY, 2.0, 1));
        assert!(is_admissible(2.0, 6.0, 3)); // endpoint in 3d
        assert!(is_admissible(4.0, 4.0, 2));
        assert!(!is_admissible(4.0, 4.0, 3)); // relation fails
        assert!(!is_admissible(2.0, 8.0, 3)); // q out of range
        assert!(is_admissible(8.0, 4.0, 1));
    }

    #[test]
    fn source_pairs_3d_example() {
        // d=3, s=0, b=1, σ=1: raw window (2/3, 4/3) must be clipped by the
        // admissible strip (1/2, 5/6) before taking the midpoint.
        let p = params(3, 1.0, 1.0);
        let sel = find_source_pairs(&p, 0.0).unwrap();
        assert!(sel.nl_window.0 < sel.nl_window.1);
        assert_relative_eq!(sel.nl_window.0, 2.0 / 3.0, max_relative = 1e-14);
        assert_relative_eq!(sel.nl_window.1, 5.0 / 6.0, max_relative = 1e-14);
        assert!(is_admissible(sel.p_nl, sel.q_nl, 3));
        assert!(is_admissible(sel.p_pot, sel.q_pot, 3));
        // σ below critical at s=0 (σ_c(0,1) = 2/3 < 1)? No: σ=1 > 2/3, so θ < 0 here.
        assert!(sel.theta < 0.0);
    }

    #[test]
    fn theta_zero_exactly_at_criticality() {
        // d=3, s=1/2, b=1 gives σ_c = 1; θ must vanish exactly.
        let p = params(3, 1.0, 1.0);
        let sel = find_source_pairs(&p, 0.5).unwrap();
        assert_eq!(sel.theta, 0.0);
    }

    #[test]
    fn potential_window_example() {
        // d=3, s=1, a=1: window (2/3, 5/6) before clipping; strip keeps it.
        let p = ProblemParams::new(3, 1.0, 1.0, 0.5, 1.0, Coupling::Focusing).unwrap();
        let sel = find_source_pairs(&p, 1.0).unwrap();
        assert_relative_eq!(sel.pot_window.0, 2.0 / 3.0, max_relative = 1e-14);
        assert_relative_eq!(sel.pot_window.1, 5.0 / 6.0, max_relative = 1e-14);
    }

    #[test]
    fn infeasible_window_reports_bounds() {
        // Large a in low dimension empties the potential window.
        let p = ProblemParams::new(1, 1.0, 0.9, 0.1, 1.0, Coupling::Focusing).unwrap();
        match find_source_pairs(&p, 0.45) {
            Err(PairError::Infeasible { which, lo, hi }) => {
                assert_eq!(which, "potential");
                assert!(lo >= hi);
            }
            other => panic!("expected infeasible, got {other:?}"),
        }
    }
}
