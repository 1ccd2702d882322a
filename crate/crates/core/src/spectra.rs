//! Radiation-pressure noise spectra and the scattering rates they set.
//!
//! Everything is expressed through the normalized rate spectrum
//! `Σ(ω) = g²|χ_cl(ω)|²`, the force-noise spectrum with `x_ZPF²/ħ²` folded
//! in, for a vacuum optical input. The Stokes rate samples `Σ(−ω_m)` and the
//! anti-Stokes rate samples `Σ(+ω_m)`.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{invalid, Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    pub omegas: Vec<f64>,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateResult {
    /// Stokes (heating) rate `A₊ = Σ(−ω_m)`.
    pub a_plus: f64,
    /// Anti-Stokes (cooling) rate `A₋ = Σ(+ω_m)`.
    pub a_minus: f64,
    /// Optical damping `A₋ − A₊`.
    pub gamma_opt: f64,
    /// `A₊ / (A₋ − A₊)`, present only when `gamma_opt > 0`.
    pub n_min: Option<f64>,
}

impl RateResult {
    pub fn from_rates(a_plus: f64, a_minus: f64) -> Self {
        let gamma_opt = a_minus - a_plus;
        let n_min = (gamma_opt > 0.0).then(|| a_plus / gamma_opt);
        Self {
            a_plus,
            a_minus,
            gamma_opt,
            n_min,
        }
    }
}

/// Intrinsic mechanical damping and thermal bath occupation.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct MechanicalBath {
    pub gamma_m: f64,
    pub n_th: f64,
}

impl MechanicalBath {
    pub fn new(gamma_m: f64, n_th: f64) -> Result<Self> {
        if !(gamma_m.is_finite() && gamma_m >= 0.0) {
            return Err(invalid("gamma_m", format!("must be >= 0, got {gamma_m}")));
        }
        if !(n_th.is_finite() && n_th >= 0.0) {
            return Err(invalid("n_th", format!("must be >= 0, got {n_th}")));
        }
        Ok(Self { gamma_m, n_th })
    }
}

/// Dissipator weights: `gamma_minus` multiplies `D[b]`, `gamma_plus`
/// multiplies `D[b†]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LindbladRates {
    pub gamma_minus: f64,
    pub gamma_plus: f64,
}

/// `Σ(ω)` at a single frequency.
pub fn rate_density<F>(chi_cl: &F, g: f64, omega: f64) -> Result<f64>
where
    F: Fn(f64) -> Result<Complex64>,
{
    Ok(g * g * chi_cl(omega)?.norm_sqr())
}

/// `Σ(ω)` on every grid point, keeping per-point failures in grid order.
pub fn spectrum_points<F>(chi_cl: &F, g: f64, grid: &[f64]) -> Vec<Result<f64>>
where
    F: Fn(f64) -> Result<Complex64> + Sync,
{
    grid.par_iter()
        .map(|&w| rate_density(chi_cl, g, w))
        .collect()
}

pub fn rate_spectrum<F>(chi_cl: &F, g: f64, grid: &[f64]) -> Result<Spectrum>
where
    F: Fn(f64) -> Result<Complex64> + Sync,
{
    if !(g.is_finite() && g >= 0.0) {
        return Err(invalid("g", format!("must be >= 0, got {g}")));
    }
    let values = spectrum_points(chi_cl, g, grid)
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    Ok(Spectrum {
        omegas: grid.to_vec(),
        values,
    })
}

pub fn scattering_rates<F>(chi_cl: &F, g: f64, omega_m: f64) -> Result<RateResult>
where
    F: Fn(f64) -> Result<Complex64>,
{
    if !(omega_m.is_finite() && omega_m > 0.0) {
        return Err(invalid("omega_m", format!("must be > 0, got {omega_m}")));
    }
    let a_plus = rate_density(chi_cl, g, -omega_m)?;
    let a_minus = rate_density(chi_cl, g, omega_m)?;
    Ok(RateResult::from_rates(a_plus, a_minus))
}

/// Minimum occupation reachable with vanishing intrinsic damping.
pub fn n_min(r: &RateResult) -> Result<f64> {
    r.n_min.ok_or(Error::NoNetCooling {
        a_plus: r.a_plus,
        a_minus: r.a_minus,
        gamma_m: 0.0,
    })
}

/// Steady state of `ṅ = −(A₋ − A₊ + γ_m) n + A₊ + γ_m n_th`.
pub fn steady_phonon(r: &RateResult, bath: &MechanicalBath) -> Result<f64> {
    let damping = r.a_minus - r.a_plus + bath.gamma_m;
    if !(damping > 0.0) {
        return Err(Error::NoNetCooling {
            a_plus: r.a_plus,
            a_minus: r.a_minus,
            gamma_m: bath.gamma_m,
        });
    }
    Ok((r.a_plus + bath.gamma_m * bath.n_th) / damping)
}

pub fn lindblad_rates(r: &RateResult) -> LindbladRates {
    LindbladRates {
        gamma_minus: r.a_minus,
        gamma_plus: r.a_plus,
    }
}
