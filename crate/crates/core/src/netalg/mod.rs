//! Frequency-domain network elements for the coherent-feedback loop.
//!
//! All responses are evaluated pointwise at a real angular frequency `omega`
//! measured in the frame rotating at the drive-laser frequency. Field
//! amplitudes follow `a(t) = ∫ a(ω) e^{-iωt} dω/2π`, so a Langevin equation
//! `ȧ = (iΔ − κ/2) a − √κ a_in` becomes `a(ω) = √κ a_in(ω) / (i(Δ+ω) − κ/2)`.
//! A cavity with detuning `Δ` therefore resonates at `ω = −Δ`.

mod network;

pub use network::{solve_network, Element, NetworkSpec, Port, Source, SINGULAR_RCOND};

use num_complex::Complex64;

use crate::error::{invalid, Error, Result};

/// Sign of the phase acquired by a delayed field, `e^{DELAY_PHASE_SIGN·iωτ}`.
///
/// With the `e^{-iωt}` convention a delayed signal `x(t − τ)` picks up
/// `e^{+iωτ}`.
pub const DELAY_PHASE_SIGN: f64 = 1.0;

/// Driven optomechanical cavity, linearized around its steady state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptoCavityParams {
    /// Energy decay rate through the coupling port.
    pub kappa: f64,
    /// Drive detuning `Δ = ω_L − ω_c`.
    pub delta: f64,
    /// Linearized optomechanical coupling `g = g₀ x_ZPF`.
    pub g: f64,
    /// Mechanical frequency.
    pub omega_m: f64,
}

impl OptoCavityParams {
    pub fn new(kappa: f64, delta: f64, g: f64, omega_m: f64) -> Result<Self> {
        let cav = Self {
            kappa,
            delta,
            g,
            omega_m,
        };
        cav.validate()?;
        Ok(cav)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.kappa.is_finite() && self.kappa > 0.0) {
            return Err(invalid("kappa", format!("must be > 0, got {}", self.kappa)));
        }
        if !(self.omega_m.is_finite() && self.omega_m > 0.0) {
            return Err(invalid(
                "omega_m",
                format!("must be > 0, got {}", self.omega_m),
            ));
        }
        if !(self.g.is_finite() && self.g >= 0.0) {
            return Err(invalid("g", format!("must be >= 0, got {}", self.g)));
        }
        if !self.delta.is_finite() {
            return Err(invalid("delta", "must be finite"));
        }
        Ok(())
    }

    /// Resolved-sideband regime: linewidth below the mechanical frequency.
    pub fn is_resolved(&self) -> bool {
        self.kappa < self.omega_m
    }
}

/// Two-sided filter cavity used as the coherent-feedback controller.
///
/// `kappa1`/`kappa2` are the per-mirror coupling rates; the total energy
/// decay rate is `kappa1 + kappa2 + kappa_loss`. The ideal controller has
/// `kappa1 == kappa2 == κ_f` and no internal loss, i.e. linewidth `2κ_f`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FilterCavityParams {
    pub kappa1: f64,
    pub kappa2: f64,
    pub kappa_loss: f64,
    /// Filter detuning `Δ_f = ω_L − ω_f`.
    pub delta_f: f64,
}

impl FilterCavityParams {
    pub fn new(kappa1: f64, kappa2: f64, kappa_loss: f64, delta_f: f64) -> Result<Self> {
        let f = Self {
            kappa1,
            kappa2,
            kappa_loss,
            delta_f,
        };
        f.validate()?;
        Ok(f)
    }

    /// Lossless filter with equal mirrors of rate `kappa_f`.
    pub fn symmetric(kappa_f: f64, delta_f: f64) -> Result<Self> {
        Self::new(kappa_f, kappa_f, 0.0, delta_f)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("kappa1", self.kappa1),
            ("kappa2", self.kappa2),
            ("kappa_loss", self.kappa_loss),
        ] {
            if !(v.is_finite() && v >= 0.0) {
                return Err(invalid(name, format!("must be >= 0, got {v}")));
            }
        }
        if self.kappa1 + self.kappa2 <= 0.0 {
            return Err(invalid("kappa1", "kappa1 + kappa2 must be > 0"));
        }
        if !self.delta_f.is_finite() {
            return Err(invalid("delta_f", "must be finite"));
        }
        Ok(())
    }

    pub fn kappa_total(&self) -> f64 {
        self.kappa1 + self.kappa2 + self.kappa_loss
    }

    pub fn is_symmetric_ideal(&self) -> bool {
        self.kappa1 == self.kappa2 && self.kappa_loss == 0.0
    }
}

/// Filter scattering matrix `[[R₁₁, T₁₂], [T₂₁, R₂₂]]` mapping the two
/// mirror inputs onto the two mirror outputs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Scattering {
    pub r11: Complex64,
    pub t12: Complex64,
    pub t21: Complex64,
    pub r22: Complex64,
}

impl Scattering {
    pub fn entry(&self, out: usize, inp: usize) -> Complex64 {
        match (out, inp) {
            (0, 0) => self.r11,
            (0, 1) => self.t12,
            (1, 0) => self.t21,
            (1, 1) => self.r22,
            _ => panic!("filter port index out of range: ({out}, {inp})"),
        }
    }
}

/// Optical susceptibility: intracavity field per unit input field.
pub fn chi(cav: &OptoCavityParams, omega: f64) -> Complex64 {
    let denom = Complex64::new(-cav.kappa / 2.0, cav.delta + omega);
    cav.kappa.sqrt() / denom
}

/// Reflection of the optomechanical cavity seen as a lossless one-port,
/// `1 + √κ χ(ω)`.
pub fn reflection_sys(cav: &OptoCavityParams, omega: f64) -> Complex64 {
    1.0 + cav.kappa.sqrt() * chi(cav, omega)
}

pub fn scattering(f: &FilterCavityParams, omega: f64) -> Scattering {
    let d = Complex64::new(-f.kappa_total() / 2.0, omega + f.delta_f);
    let t = (f.kappa1 * f.kappa2).sqrt() / d;
    Scattering {
        r11: 1.0 + f.kappa1 / d,
        t12: t,
        t21: t,
        r22: 1.0 + f.kappa2 / d,
    }
}

/// Pure propagation delay of `tau` seconds.
pub fn delay_response(tau: f64, omega: f64) -> Complex64 {
    Complex64::from_polar(1.0, DELAY_PHASE_SIGN * omega * tau)
}

fn require_ideal(f: &FilterCavityParams) -> Result<()> {
    if f.is_symmetric_ideal() {
        Ok(())
    } else {
        Err(Error::ClosedFormInapplicable)
    }
}

/// Intracavity response of the notch loop: the filter's reflected port
/// drives the cavity and the cavity output re-enters the far mirror.
pub fn closed_form_notch(
    cav: &OptoCavityParams,
    f: &FilterCavityParams,
    omega: f64,
) -> Result<Complex64> {
    require_ideal(f)?;
    let s = scattering(f, omega);
    let denom = 1.0 - reflection_sys(cav, omega) * s.t21;
    if denom.norm() < SINGULAR_RCOND {
        return Err(Error::SingularLoop { omega });
    }
    Ok(chi(cav, omega) * s.r11 / denom)
}

/// Intracavity response of the band-pass loop: the filter's transmitted
/// port drives the cavity and the cavity output re-enters the same mirror.
pub fn closed_form_bandpass(
    cav: &OptoCavityParams,
    f: &FilterCavityParams,
    omega: f64,
) -> Result<Complex64> {
    require_ideal(f)?;
    let s = scattering(f, omega);
    let denom = 1.0 - reflection_sys(cav, omega) * s.r22;
    if denom.norm() < SINGULAR_RCOND {
        return Err(Error::SingularLoop { omega });
    }
    Ok(chi(cav, omega) * s.t21 / denom)
}
