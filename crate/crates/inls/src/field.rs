//! Radial grids, complex radial fields, and the conserved-quantity
//! functionals (mass, kinetic energy, potential and nonlinear terms,
//! energy, and the virial-comparison functional G).
//!
//! Fields live on a staggered grid r_j = (j + 1/2) h, j = 0..n-1, with
//! midpoint quadrature weights ω_d r_j^{d-1} h where ω_d is the area of
//! the unit sphere in R^d. The stagger keeps every node away from the
//! |x|^{-a} and |x|^{-b} singularities at the origin.

use std::fmt::Write as _;
use std::sync::Arc;

use num_complex::Complex64;
use serde::Serialize;
use thiserror::Error;

use crate::params::ProblemParams;

#[derive(Debug, Error, PartialEq)]
pub enum FieldError {
    #[error("grid must have at least 8 nodes, got {0}")]
    TooFewNodes(usize),
    #[error("grid radius must be positive and finite, got {0}")]
    InvalidRadius(f64),
    #[error("grid dimension must be >= 1, got {0}")]
    InvalidDimension(u32),
    #[error("singular weight |x|^(-{exponent}) is not integrable in dimension {d}")]
    NonIntegrableSingularity { exponent: f64, d: u32 },
    #[error("fields live on different grids")]
    GridMismatch,
    #[error("malformed field file: {0}")]
    Parse(String),
    #[error("io error: {0}")]
    Io(String),
}

/// Area of the unit sphere S^{d-1}: 2 π^{d/2} / Γ(d/2).
pub fn unit_sphere_area(d: u32) -> f64 {
    2.0 * std::f64::consts::PI.powf(d as f64 / 2.0) / gamma_half(d)
}

/// Γ(k/2) for positive integer k, by the recursion Γ(x+1) = x Γ(x).
fn gamma_half(k: u32) -> f64 {
    match k {
        0 => panic!("gamma_half(0)"),
        1 => std::f64::consts::PI.sqrt(),
        2 => 1.0,
        k => (k as f64 / 2.0 - 1.0) * gamma_half(k - 2),
    }
}

/// Staggered radial grid on (0, r_max].
#[derive(Debug, Clone, PartialEq)]
pub struct RadialGrid {
    pub d: u32,
    pub n: usize,
    pub r_max: f64,
    pub h: f64,
    nodes: Vec<f64>,
    weights: Vec<f64>,
    omega_d: f64,
}

impl RadialGrid {
    pub fn new(d: u32, n: usize, r_max: f64) -> Result<Arc<Self>, FieldError> {
        if d < 1 {
            return Err(FieldError::InvalidDimension(d));
        }
        if n < 8 {
            return Err(FieldError::TooFewNodes(n));
        }
        if !(r_max.is_finite() && r_max > 0.0) {
            return Err(FieldError::InvalidRadius(r_max));
        }
        let h = r_max / n as f64;
        let omega_d = unit_sphere_area(d);
        let nodes: Vec<f64> = (0..n).map(|j| (j as f64 + 0.5) * h).collect();
        let weights = nodes
            .iter()
            .map(|&r| omega_d * r.powi(d as i32 - 1) * h)
            .collect();
        Ok(Arc::new(RadialGrid { d, n, r_max, h, nodes, weights, omega_d }))
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    /// Midpoint quadrature weights ω_d r_j^{d-1} h.
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn omega_d(&self) -> f64 {
        self.omega_d
    }

    /// ∫ f dx over R^d for a radial integrand sampled at the nodes.
    pub fn integrate(&self, f: impl Iterator<Item = f64>) -> f64 {
        self.weights.iter().zip(f).map(|(w, v)| w * v).sum()
    }
}

/// Complex-valued radial field on a shared grid.
#[derive(Debug, Clone)]
pub struct RadialField {
    pub grid: Arc<RadialGrid>,
    pub values: Vec<Complex64>,
}

impl RadialField {
    pub fn zeros(grid: &Arc<RadialGrid>) -> Self {
        RadialField { grid: grid.clone(), values: vec![Complex64::ZERO; grid.n] }
    }

    pub fn from_fn(grid: &Arc<RadialGrid>, f: impl Fn(f64) -> Complex64) -> Self {
        let values = grid.nodes().iter().map(|&r| f(r)).collect();
        RadialField { grid: grid.clone(), values }
    }

    pub fn from_real_fn(grid: &Arc<RadialGrid>, f: impl Fn(f64) -> f64) -> Self {
        Self::from_fn(grid, |r| Complex64::new(f(r), 0.0))
    }

    /// A e^{-r^2 / (2 w^2)}.
    pub fn gaussian(grid: &Arc<RadialGrid>, amplitude: f64, width: f64) -> Self {
        Self::from_real_fn(grid, |r| amplitude * (-r * r / (2.0 * width * width)).exp())
    }

    pub fn n(&self) -> usize {
        self.grid.n
    }

    /// M(u) = ∫ |u|^2 dx.
    pub fn mass(&self) -> f64 {
        self.grid.integrate(self.values.iter().map(|u| u.norm_sqr()))
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|u| u.norm()).fold(0.0, f64::max)
    }

    /// Second-order radial derivative: centered in the interior, one-sided
    /// second-order stencils at both ends.
    pub fn radial_derivative(&self) -> Vec<Complex64> {
        let n = self.n();
        let h = self.grid.h;
        let u = &self.values;
        let mut du = vec![Complex64::ZERO; n];
        du[0] = (-3.0 * u[0] + 4.0 * u[1] - u[2]) / (2.0 * h);
        for j in 1..n - 1 {
            du[j] = (u[j + 1] - u[j - 1]) / (2.0 * h);
        }
        du[n - 1] = (3.0 * u[n - 1] - 4.0 * u[n - 2] + u[n - 3]) / (2.0 * h);
        du
    }

    /// ∫ |∇u|^2 dx.
    pub fn kinetic(&self) -> f64 {
        let du = self.radial_derivative();
        self.grid.integrate(du.iter().map(|v| v.norm_sqr()))
    }

    /// ∫ |x|^{-a} |u|^2 dx; requires a < d for integrability at the origin.
    pub fn potential_term(&self, a: f64) -> Result<f64, FieldError> {
        if a >= self.grid.d as f64 {
            return Err(FieldError::NonIntegrableSingularity { exponent: a, d: self.grid.d });
        }
        Ok(self.grid.integrate(
            self.grid
                .nodes()
                .iter()
                .zip(&self.values)
                .map(|(&r, u)| r.powf(-a) * u.norm_sqr()),
        ))
    }

    /// ∫ |x|^{-b} |u|^{σ+2} dx; requires b < d.
    pub fn inhomogeneous_term(&self, b: f64, sigma: f64) -> Result<f64, FieldError> {
        if b >= self.grid.d as f64 {
            return Err(FieldError::NonIntegrableSingularity { exponent: b, d: self.grid.d });
        }
        Ok(self.grid.integrate(
            self.grid
                .nodes()
                .iter()
                .zip(&self.values)
                .map(|(&r, u)| r.powf(-b) * u.norm().powf(sigma + 2.0)),
        ))
    }

    /// E(u) = ∫ ( |∇u|^2/2 + (c/2)|x|^{-a}|u|^2 + (λ/(σ+2))|x|^{-b}|u|^{σ+2} ) dx.
    pub fn energy(&self, p: &ProblemParams) -> Result<f64, FieldError> {
        let k = self.kinetic();
        let pot = if p.c == 0.0 { 0.0 } else { self.potential_term(p.a)? };
        let nl = self.inhomogeneous_term(p.b, p.sigma)?;
        Ok(0.5 * k + 0.5 * p.c * pot + p.lambda() / (p.sigma + 2.0) * nl)
    }

    /// G(u) = 8‖∇u‖^2 + 2c(dσ+2b)∫|x|^{-a}|u|^2 - (4(dσ+2b)/(σ+2))∫|x|^{-b}|u|^{σ+2}.
    ///
    /// For the focusing sign this equals 4(dσ+2b)E(u) - 2(dσ+2b-4)‖∇u‖^2.
    pub fn functional_g(&self, p: &ProblemParams) -> Result<f64, FieldError> {
        let k = self.kinetic();
        let pot = if p.c == 0.0 { 0.0 } else { self.potential_term(p.a)? };
        let nl = self.inhomogeneous_term(p.b, p.sigma)?;
        let m = p.d as f64 * p.sigma + 2.0 * p.b;
        Ok(8.0 * k + 2.0 * p.c * m * pot - 4.0 * m / (p.sigma + 2.0) * nl)
    }

    /// Energy-form expression of G for the focusing sign (λ = -1); used as
    /// a cross-check of `functional_g`.
    pub fn functional_g_energy_form(&self, p: &ProblemParams) -> Result<f64, FieldError> {
        let m = p.d as f64 * p.sigma + 2.0 * p.b;
        Ok(4.0 * m * self.energy(p)? - 2.0 * (m - 4.0) * self.kinetic())
    }

    /// The scaled field μ^{(2-b)/σ} u(μ r), resampled onto the same grid by
    /// linear interpolation (zero beyond r_max).
    pub fn rescaled(&self, mu: f64, p: &ProblemParams) -> Self {
        let amp = mu.powf((2.0 - p.b) / p.sigma);
        let values = self
            .grid
            .nodes()
            .iter()
            .map(|&r| amp * self.interpolate(mu * r))
            .collect();
        RadialField { grid: self.grid.clone(), values }
    }

    /// Linear interpolation of the field at radius r, with even reflection
    /// across the origin and zero beyond r_max.
    pub fn interpolate(&self, r: f64) -> Complex64 {
        let h = self.grid.h;
        let x = r / h - 0.5;
        if x <= 0.0 {
            // even extension: value between r_0 and its mirror node
            return self.values[0];
        }
        let j = x.floor() as usize;
        if j + 1 >= self.n() {
            return Complex64::ZERO;
        }
        let t = x - j as f64;
        self.values[j] * (1.0 - t) + self.values[j + 1] * t
    }

    /// Serialize in the columnar text format: a header line `d n r_max`
    /// followed by one `r re im` row per node. Floats are printed in
    /// shortest round-trip form, so read-back is bit-exact.
    pub fn to_columnar(&self) -> String {
        let mut s = String::new();
        writeln!(s, "{} {} {}", self.grid.d, self.grid.n, self.grid.r_max).unwrap();
        for (r, u) in self.grid.nodes().iter().zip(&self.values) {
            writeln!(s, "{} {} {}", r, u.re, u.im).unwrap();
        }
        s
    }

    pub fn from_columnar(text: &str) -> Result<Self, FieldError> {
        let mut lines = text.lines();
        let header = lines.next().ok_or_else(|| FieldError::Parse("empty file".into()))?;
        let mut parts = header.split_whitespace();
        let d: u32 = parse_field(parts.next(), "header d")?;
        let n: usize = parse_field(parts.next(), "header n")?;
        let r_max: f64 = parse_field(parts.next(), "header r_max")?;
        let grid = RadialGrid::new(d, n, r_max)?;
        let mut values = Vec::with_capacity(n);
        for (i, line) in lines.enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let mut parts = line.split_whitespace();
            let _r: f64 = parse_field(parts.next(), "row r")?;
            let re: f64 = parse_field(parts.next(), "row re")?;
            let im: f64 = parse_field(parts.next(), "row im")?;
            if i >= n {
                return Err(FieldError::Parse("more rows than header n".into()));
            }
            values.push(Complex64::new(re, im));
        }
        if values.len() != n {
            return Err(FieldError::Parse(format!(
                "expected {} rows, found {}",
                n,
                values.len()
            )));
        }
        Ok(RadialField { grid, values })
    }

    pub fn write_to_file(&self, path: &std::path::Path) -> Result<(), FieldError> {
        std::fs::write(path, self.to_columnar()).map_err(|e| FieldError::Io(e.to_string()))
    }

    pub fn read_from_file(path: &std::path::Path) -> Result<Self, FieldError> {
        let text = std::fs::read_to_string(path).map_err(|e| FieldError::Io(e.to_string()))?;
        Self::from_columnar(&text)
    }
}

fn parse_field<T: std::str::FromStr>(tok: Option<&str>, what: &str) -> Result<T, FieldError> {
    tok.ok_or_else(|| FieldError::Parse(format!("missing {what}")))?
        .parse()
        .map_err(|_| FieldError::Parse(format!("bad {what}")))
}

/// Per-observable summary used in monitor output.
#[derive(Debug, Clone, Serialize)]
pub struct Observables {
    pub mass: f64,
    pub kinetic: f64,
    pub energy: f64,
}

pub fn observables(u: &RadialField, p: &ProblemParams) -> Result<Observables, FieldError> {
    Ok(Observables { mass: u.mass(), kinetic: u.kinetic(), energy: u.energy(p)? })
}
