//! Localized virial weights and the virial identities.
//!
//! Two weight families are provided, both scaled as ω_R(r) = R² φ(r/R):
//!
//! * `Quadratic`: φ(ρ) = ρ² for ρ ≤ 1, constant for ρ ≥ 2, joined by a
//!   quintic bridge chosen so that φ'' ≤ 2, φ'/ρ ≤ 2 and Δφ ≤ 2d hold
//!   pointwise — the comparisons that drive the blow-up argument.
//! * `MassCritical`: built from a profile v = φ' with v(ρ) = 2ρ inside,
//!   v(ρ) = 2ρ - 2(ρ-1)^k on a shoulder, a C¹ monotone ramp down to 0
//!   at ρ = 2, and 0 outside.
//!
//! `virial_second_derivative_identity` evaluates the localized identity
//! term by term for radial fields under the focusing sign, returning the
//! breakdown together with the comparison functional G.

use serde::Serialize;
use thiserror::Error;

use crate::field::{FieldError, RadialField};
use crate::params::{Coupling, ProblemParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum WeightKind {
    Quadratic,
    /// Shoulder exponent k >= 2.
    MassCritical {
        k: u32,
    },
}

#[derive(Debug, Error, PartialEq)]
pub enum VirialError {
    #[error("virial radius must be positive, got {0}")]
    InvalidRadius(f64),
    #[error("mass-critical shoulder exponent must be >= 2, got {0}")]
    InvalidShoulder(u32),
    #[error("the second-derivative identity is stated for the focusing sign")]
    NotFocusing,
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// Pointwise data of the weight at one radius.
#[derive(Debug, Clone, Copy, Default)]
pub struct WeightSample {
    pub value: f64,   // ω
    pub d1: f64,      // ω'
    pub d2: f64,      // ω''
    pub d3: f64,      // ω'''
    pub d4: f64,      // ω''''
}

#[derive(Debug, Clone)]
pub struct VirialWeight {
    pub kind: WeightKind,
    pub radius: f64,
}

impl VirialWeight {
    pub fn new(kind: WeightKind, radius: f64) -> Result<Self, VirialError> {
        if !(radius.is_finite() && radius > 0.0) {
            return Err(VirialError::InvalidRadius(radius));
        }
        if let WeightKind::MassCritical { k } = kind {
            if k < 2 {
                return Err(VirialError::InvalidShoulder(k));
            }
        }
        Ok(VirialWeight { kind, radius })
    }

    pub fn quadratic(radius: f64) -> Result<Self, VirialError> {
        Self::new(WeightKind::Quadratic, radius)
    }

    pub fn mass_critical(radius: f64, k: u32) -> Result<Self, VirialError> {
        Self::new(WeightKind::MassCritical { k }, radius)
    }

    /// ω_R and its radial derivatives at radius r.
    pub fn sample(&self, r: f64) -> WeightSample {
        let rr = self.radius;
        let rho = r / rr;
        let p = match self.kind {
            WeightKind::Quadratic => quadratic_profile(rho),
            WeightKind::MassCritical { k } => mass_critical_profile(rho, k),
        };
        WeightSample {
            value: rr * rr * p.value,
            d1: rr * p.d1,
            d2: p.d2,
            d3: p.d3 / rr,
            d4: p.d4 / (rr * rr),
        }
    }

    /// Δω at radius r (radial form).
    pub fn laplacian(&self, r: f64, d: u32) -> f64 {
        let s = self.sample(r);
        s.d2 + (d as f64 - 1.0) * s.d1 / r
    }

    /// Δ²ω at radius r (radial form).
    pub fn bilaplacian(&self, r: f64, d: u32) -> f64 {
        let s = self.sample(r);
        let dm = d as f64 - 1.0;
        let dk = d as f64 - 3.0;
        s.d4 + 2.0 * dm * s.d3 / r + dm * dk * (s.d2 / (r * r) - s.d1 / (r * r * r))
    }

    /// Verify the pointwise comparisons used by the blow-up argument at
    /// every node of the field's grid. For the quadratic weight:
    /// ω'' ≤ 2, ω'/r ≤ 2, Δω ≤ 2d, ω' ≥ 0. For the mass-critical weight:
    /// ω' ≥ 0 with ω' = 2r inside r ≤ R and ω' = 0 beyond 2R.
    pub fn audit(&self, grid: &crate::field::RadialGrid) -> Result<(), String> {
        let d = grid.d;
        let tol = 1e-12;
        for &r in grid.nodes() {
            let s = self.sample(r);
            match self.kind {
                WeightKind::Quadratic => {
                    if s.d2 > 2.0 + tol {
                        return Err(format!("omega'' = {} > 2 at r = {r}", s.d2));
                    }
                    if s.d1 / r > 2.0 + tol {
                        return Err(format!("omega'/r = {} > 2 at r = {r}", s.d1 / r));
                    }
                    let lap = self.laplacian(r, d);
                    if lap > 2.0 * d as f64 + tol {
                        return Err(format!("lap omega = {lap} > 2d at r = {r}"));
                    }
                    if s.d1 < -tol {
                        return Err(format!("omega' = {} < 0 at r = {r}", s.d1));
                    }
                }
                WeightKind::MassCritical { .. } => {
                    if s.d1 < -tol {
                        return Err(format!("omega' = {} < 0 at r = {r}", s.d1));
                    }
                    if r <= self.radius && (s.d1 - 2.0 * r).abs() > tol {
                        return Err(format!("omega' != 2r inside at r = {r}"));
                    }
                    if r >= 2.0 * self.radius && s.d1.abs() > tol {
                        return Err(format!("omega' != 0 outside at r = {r}"));
                    }
                }
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, Default)]
struct Profile {
    value: f64,
    d1: f64,
    d2: f64,
    d3: f64,
    d4: f64,
}

/// φ(ρ) = ρ² inside, plateau 5/2 outside, quintic bridge on (1, 2):
/// φ'(1+t) = 2 + 2t - 14t³ + 10t⁴, which meets φ' = 2ρ to second order
/// at ρ = 1 and flattens with φ'(2) = φ''(2) = 0.
fn quadratic_profile(rho: f64) -> Profile {
    if rho <= 1.0 {
        Profile { value: rho * rho, d1: 2.0 * rho, d2: 2.0, d3: 0.0, d4: 0.0 }
    } else if rho < 2.0 {
        let t = rho - 1.0;
        let t2 = t * t;
        let t3 = t2 * t;
        let t4 = t2 * t2;
        Profile {
            value: 1.0 + 2.0 * t + t2 - 3.5 * t4 + 2.0 * t4 * t,
            d1: 2.0 + 2.0 * t - 14.0 * t3 + 10.0 * t4,
            d2: 2.0 - 42.0 * t2 + 40.0 * t3,
            d3: -84.0 * t + 120.0 * t2,
            d4: -84.0 + 240.0 * t,
        }
    } else {
        Profile { value: 2.5, ..Default::default() }
    }
}

/// Mass-critical profile: φ' = v with v = 2ρ inside, a shoulder
/// 2ρ - 2(ρ-1)^k up to its maximum at ρ₁ = 1 + k^{-1/(k-1)}, then a
/// monotone C¹ smoothstep ramp down to 0 at ρ = 2, and 0 beyond.
fn mass_critical_profile(rho: f64, k: u32) -> Profile {
    let kf = k as f64;
    let rho1 = 1.0 + (1.0 / kf).powf(1.0 / (kf - 1.0));
    let v_max = 2.0 * rho1 - 2.0 * (rho1 - 1.0).powf(kf);
    // φ at the joins, by the closed-form antiderivatives of each branch.
    let phi_at = |x: f64| -> f64 {
        if x <= 1.0 {
            x * x
        } else if x <= rho1 {
            x * x - 2.0 * (x - 1.0).powf(kf + 1.0) / (kf + 1.0)
        } else if x < 2.0 {
            let phi_rho1 = rho1 * rho1 - 2.0 * (rho1 - 1.0).powf(kf + 1.0) / (kf + 1.0);
            // substitute y = (2 - ρ)/(2 - ρ₁): ∫ v = (2-ρ₁) v_max ∫_y^1 s(w) dw
            let y = (2.0 - x) / (2.0 - rho1);
            let s_int = |w: f64| w * w * w - w * w * w * w / 2.0; // ∫ s, s(w) = 3w² - 2w³
            phi_rho1 + (2.0 - rho1) * v_max * (s_int(1.0) - s_int(y))
        } else {
            phi_at_2(rho1, v_max, kf)
        }
    };
    if rho <= 1.0 {
        Profile { value: rho * rho, d1: 2.0 * rho, d2: 2.0, d3: 0.0, d4: 0.0 }
    } else if rho <= rho1 {
        let t = rho - 1.0;
        Profile {
            value: phi_at(rho),
            d1: 2.0 * rho - 2.0 * t.powf(kf),
            d2: 2.0 - 2.0 * kf * t.powf(kf - 1.0),
            d3: -2.0 * kf * (kf - 1.0) * t.powf(kf - 2.0),
            d4: if k >= 3 {
                -2.0 * kf * (kf - 1.0) * (kf - 2.0) * t.powf(kf - 3.0)
            } else {
                0.0
            },
        }
    } else if rho < 2.0 {
        let w = 2.0 - rho1;
        let y = (2.0 - rho) / w;
        let s = 3.0 * y * y - 2.0 * y * y * y;
        let sp = 6.0 * y - 6.0 * y * y;
        let spp = 6.0 - 12.0 * y;
        Profile {
            value: phi_at(rho),
            d1: v_max * s,
            d2: -v_max * sp / w,
            d3: v_max * spp / (w * w),
            d4: 12.0 * v_max / (w * w * w),
        }
    } else {
        Profile { value: phi_at_2(rho1, v_max, kf), ..Default::default() }
    }
}

fn phi_at_2(rho1: f64, v_max: f64, kf: f64) -> f64 {
    let phi_rho1 = rho1 * rho1 - 2.0 * (rho1 - 1.0).powf(kf + 1.0) / (kf + 1.0);
    phi_rho1 + (2.0 - rho1) * v_max * 0.5
}

/// V_ω(u) = ∫ ω |u|² dx.
pub fn virial_value(u: &RadialField, w: &VirialWeight) -> f64 {
    u.grid.integrate(
        u.grid
            .nodes()
            .iter()
            .zip(&u.values)
            .map(|(&r, z)| w.sample(r).value * z.norm_sqr()),
    )
}

/// dV/dt = 2 ∫ ω' Im(ū ∂_r u) dx for radial fields.
pub fn virial_first_derivative(u: &RadialField, w: &VirialWeight) -> f64 {
    let du = u.radial_derivative();
    2.0 * u.grid.integrate(
        u.grid
            .nodes()
            .iter()
            .zip(u.values.iter().zip(&du))
            .map(|(&r, (z, dz))| w.sample(r).d1 * (z.conj() * dz).im),
    )
}

/// Term-by-term evaluation of the localized virial second derivative for
/// radial fields (focusing sign). `sum` is d²V/dt²; `g_value` is the
/// comparison functional G(u); `potential_comparison` is the extra
/// potential term -2c(dσ+2b-2a)∫|x|^{-a}|u|² appearing in the comparison
/// dV²/dt² ≤ G(u) + potential_comparison + (localization remainders).
#[derive(Debug, Clone, Serialize)]
pub struct TermBreakdown {
    pub bilaplacian: f64,
    pub gradient_radial: f64,
    pub gradient_anisotropic: f64,
    pub potential_localized: f64,
    pub potential_global: f64,
    pub nonlinear_gradient: f64,
    pub nonlinear_laplacian: f64,
    pub sum: f64,
    pub g_value: f64,
    pub potential_comparison: f64,
}

pub fn virial_second_derivative_identity(
    u: &RadialField,
    w: &VirialWeight,
    p: &ProblemParams,
) -> Result<TermBreakdown, VirialError> {
    if p.coupling != Coupling::Focusing {
        return Err(VirialError::NotFocusing);
    }
    let grid = &u.grid;
    let d = grid.d;
    let du = u.radial_derivative();
    let nodes = grid.nodes();
    let (mut t_bilap, mut t_grad_r, mut t_grad_aniso) = (0.0, 0.0, 0.0);
    let (mut t_pot_loc, mut t_pot_glob) = (0.0, 0.0);
    let (mut t_nl_grad, mut t_nl_lap) = (0.0, 0.0);
    let a = p.a;
    let b = p.b;
    let sigma = p.sigma;
    let c = p.c;
    for (j, (&r, &wq)) in nodes.iter().zip(grid.weights()).enumerate() {
        let s = w.sample(r);
        let lap = w.laplacian(r, d);
        let bilap = w.bilaplacian(r, d);
        let abs2 = u.values[j].norm_sqr();
        let dabs2 = du[j].norm_sqr();
        let nlw = r.powf(-b) * u.values[j].norm().powf(sigma + 2.0);
        t_bilap -= wq * bilap * abs2;
        t_grad_r += 4.0 * wq * (s.d1 / r) * dabs2;
        t_grad_aniso += 4.0 * wq * (s.d2 - s.d1 / r) * dabs2;
        if c != 0.0 {
            let pw = r.powf(-a) * abs2;
            t_pot_loc -= 2.0 * a * c * wq * (2.0 - s.d1 / r) * pw;
            t_pot_glob += 4.0 * a * c * wq * pw;
        }
        t_nl_grad -= 4.0 * b / (sigma + 2.0) * wq * (s.d1 / r) * nlw;
        t_nl_lap -= 2.0 * sigma / (sigma + 2.0) * wq * lap * nlw;
    }
    let sum = t_bilap + t_grad_r + t_grad_aniso + t_pot_loc + t_pot_glob + t_nl_grad + t_nl_lap;
    let g_value = u.functional_g(p)?;
    let pot_cmp = if c != 0.0 {
        -2.0 * c * (d as f64 * sigma + 2.0 * b - 2.0 * a) * u.potential_term(a)?
    } else {
        0.0
    };
    Ok(TermBreakdown {
        bilaplacian: t_bilap,
        gradient_radial: t_grad_r,
        gradient_anisotropic: t_grad_aniso,
        potential_localized: t_pot_loc,
        potential_global: t_pot_glob,
        nonlinear_gradient: t_nl_grad,
        nonlinear_laplacian: t_nl_lap,
        sum,
        g_value,
        potential_comparison: pot_cmp,
    })
}
