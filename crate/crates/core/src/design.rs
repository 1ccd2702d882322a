//! Controller design: notch and band-pass presets, optimal drive detuning,
//! feasibility checks and parameter sweeps.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{invalid, Error, Result};
use crate::netalg::{
    chi, closed_form_bandpass, closed_form_notch, solve_network, FilterCavityParams, NetworkSpec,
    OptoCavityParams,
};
use crate::oracle;
use crate::spectra::{scattering_rates, MechanicalBath, RateResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Topology {
    Notch,
    BandPass,
    None,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemConfig {
    pub cav: OptoCavityParams,
    /// Ignored when `topology` is `None`.
    pub filter: FilterCavityParams,
    pub topology: Topology,
    /// Loop delay between the cavity output and the filter return port.
    pub delay: Option<f64>,
}

impl SystemConfig {
    pub fn new(
        cav: OptoCavityParams,
        filter: FilterCavityParams,
        topology: Topology,
        delay: Option<f64>,
    ) -> Result<Self> {
        let cfg = Self {
            cav,
            filter,
            topology,
            delay,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn uncontrolled(cav: OptoCavityParams) -> Result<Self> {
        // placeholder filter, never wired
        let filter = FilterCavityParams::symmetric(1.0, 0.0)?;
        Self::new(cav, filter, Topology::None, None)
    }

    pub fn validate(&self) -> Result<()> {
        self.cav.validate()?;
        if self.topology != Topology::None {
            self.filter.validate()?;
        }
        if let Some(tau) = self.delay {
            if !(tau.is_finite() && tau >= 0.0) {
                return Err(invalid("delay", format!("must be >= 0, got {tau}")));
            }
        }
        Ok(())
    }

    pub fn with_delta(mut self, delta: f64) -> Self {
        self.cav.delta = delta;
        self
    }

    pub fn network(&self) -> Result<NetworkSpec> {
        match self.topology {
            Topology::None => NetworkSpec::uncontrolled(self.cav),
            Topology::Notch => NetworkSpec::notch(self.cav, self.filter, self.delay),
            Topology::BandPass => NetworkSpec::bandpass(self.cav, self.filter, self.delay),
        }
    }

    /// Closed-loop intracavity response evaluated by the network solver.
    pub fn response_fn(&self) -> Result<impl Fn(f64) -> Result<Complex64> + Sync> {
        let net = self.network()?;
        Ok(move |w| solve_network(&net, w))
    }

    pub fn response(&self, omega: f64) -> Result<Complex64> {
        solve_network(&self.network()?, omega)
    }

    /// Same response from the closed-form expressions. Only defined for a
    /// symmetric lossless filter without delay.
    pub fn closed_form(&self, omega: f64) -> Result<Complex64> {
        if self.delay.is_some_and(|t| t > 0.0) {
            return Err(Error::ClosedFormInapplicable);
        }
        match self.topology {
            Topology::None => Ok(chi(&self.cav, omega)),
            Topology::Notch => closed_form_notch(&self.cav, &self.filter, omega),
            Topology::BandPass => closed_form_bandpass(&self.cav, &self.filter, omega),
        }
    }

    pub fn rates(&self) -> Result<RateResult> {
        let response = self.response_fn()?;
        scattering_rates(&response, self.cav.g, self.cav.omega_m)
    }
}

fn check_rates(kappa: f64, omega_m: f64, g: f64, kappa_f: f64) -> Result<()> {
    for (name, v) in [("kappa", kappa), ("omega_m", omega_m), ("kappa_f", kappa_f)] {
        if !(v.is_finite() && v > 0.0) {
            return Err(invalid(name, format!("must be > 0, got {v}")));
        }
    }
    if !(g.is_finite() && g >= 0.0) {
        return Err(invalid("g", format!("must be >= 0, got {g}")));
    }
    Ok(())
}

fn preset(
    topology: Topology,
    kappa: f64,
    omega_m: f64,
    g: f64,
    kappa_f: f64,
    delta_override: Option<f64>,
) -> Result<SystemConfig> {
    check_rates(kappa, omega_m, g, kappa_f)?;
    let delta = delta_override.unwrap_or(-omega_m);
    let delta_f = match topology {
        Topology::BandPass => -omega_m,
        _ => omega_m,
    };
    let cav = OptoCavityParams::new(kappa, delta, g, omega_m)?;
    let filter = FilterCavityParams::symmetric(kappa_f, delta_f)?;
    SystemConfig::new(cav, filter, topology, None)
}

/// Filter resonance on the Stokes sideband (`Δ_f = ω_m`), used in reflection.
pub fn make_notch(
    kappa: f64,
    omega_m: f64,
    g: f64,
    kappa_f: f64,
    delta_override: Option<f64>,
) -> Result<SystemConfig> {
    preset(Topology::Notch, kappa, omega_m, g, kappa_f, delta_override)
}

/// Filter resonance on the anti-Stokes sideband (`Δ_f = −ω_m`), used in
/// transmission.
pub fn make_bandpass(
    kappa: f64,
    omega_m: f64,
    g: f64,
    kappa_f: f64,
    delta_override: Option<f64>,
) -> Result<SystemConfig> {
    preset(Topology::BandPass, kappa, omega_m, g, kappa_f, delta_override)
}

/// Drive detuning maximizing the anti-Stokes rate of the notch loop.
pub fn optimal_detuning(omega_m: f64, kappa: f64, kappa_f: f64) -> f64 {
    -omega_m - omega_m * kappa_f * kappa / (2.0 * (omega_m * omega_m + kappa_f * kappa_f))
}

/// Anti-Stokes enhancement of the notch loop at the optimal detuning,
/// relative to `4g²/κ`.
pub fn enhancement_factor(omega_m: f64, kappa_f: f64) -> f64 {
    1.0 + (kappa_f / omega_m).powi(2)
}

pub fn default_bracket(omega_m: f64, kappa: f64, kappa_f: f64) -> (f64, f64) {
    (-omega_m - kappa * kappa_f, -omega_m * 1e-3)
}

pub fn bandpass_ground_state_feasible(kappa: f64, kappa_f: f64, omega_m: f64) -> bool {
    kappa * kappa_f / (4.0 * (kappa + kappa_f)) < omega_m
}

const INV_PHI: f64 = 0.618_033_988_749_894_8;

/// Golden-section maximization on `[lo, hi]`. Returns the abscissa and the
/// objective there.
fn golden_section_max<F>(f: F, lo: f64, hi: f64, tol: f64) -> Result<(f64, f64)>
where
    F: Fn(f64) -> Result<f64>,
{
    let (mut a, mut b) = (lo, hi);
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c)?;
    let mut fd = f(d)?;
    while (b - a).abs() > tol {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d)?;
        }
    }
    let x = 0.5 * (a + b);
    Ok((x, f(x)?))
}

/// Numerically locate the detuning maximizing `A₋` on `bracket`.
pub fn argmax_detuning_numeric(config: &SystemConfig, bracket: (f64, f64), tol: f64) -> Result<f64> {
    let (lo, hi) = bracket;
    if !(tol > 0.0) {
        return Err(invalid("tol", format!("must be > 0, got {tol}")));
    }
    if !(lo < hi) {
        return Err(Error::BracketError {
            lo,
            hi,
            reason: "empty bracket".into(),
        });
    }
    let objective = |delta: f64| config.with_delta(delta).rates().map(|r| r.a_minus);

    // the objective is flat near its peak, so the search runs well below the
    // requested tolerance on the abscissa
    let (x, fx) = golden_section_max(objective, lo, hi, tol * 1e-2)?;
    let (f_lo, f_hi) = (objective(lo)?, objective(hi)?);
    if fx == f_lo && fx == f_hi {
        return Err(Error::BracketError {
            lo,
            hi,
            reason: "flat objective".into(),
        });
    }
    let edge = tol.max(1e-9 * (hi - lo));
    if x - lo <= edge || hi - x <= edge || f_lo >= fx || f_hi >= fx {
        return Err(Error::BracketError {
            lo,
            hi,
            reason: "anti-Stokes rate is monotone on the bracket".into(),
        });
    }
    Ok(x)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SweepParameter {
    Delta,
    KappaF,
    Kappa,
    G,
}

impl SweepParameter {
    pub fn name(&self) -> &'static str {
        match self {
            SweepParameter::Delta => "delta",
            SweepParameter::KappaF => "kappa_f",
            SweepParameter::Kappa => "kappa",
            SweepParameter::G => "g",
        }
    }

    /// Copy of `config` with this parameter set to `value`. `KappaF` sets
    /// `kappa1` and rescales `kappa2` to keep the mirror ratio.
    pub fn apply(&self, config: &SystemConfig, value: f64) -> Result<SystemConfig> {
        let mut c = *config;
        match self {
            SweepParameter::Delta => c.cav.delta = value,
            SweepParameter::Kappa => c.cav.kappa = value,
            SweepParameter::G => c.cav.g = value,
            SweepParameter::KappaF => {
                let ratio = c.filter.kappa2 / c.filter.kappa1;
                c.filter.kappa1 = value;
                c.filter.kappa2 = value * ratio;
            }
        }
        c.validate()?;
        Ok(c)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub value: f64,
    pub rates: Result<RateResult>,
    /// `None` when no state-space model exists (loop delay, invalid point).
    pub stable: Option<bool>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepTable {
    pub parameter: SweepParameter,
    pub rows: Vec<SweepRow>,
}

impl SweepTable {
    /// Row with the largest anti-Stokes rate among the evaluated points.
    pub fn argmax_a_minus(&self) -> Option<&SweepRow> {
        self.rows
            .iter()
            .filter(|r| r.rates.is_ok())
            .max_by(|a, b| {
                let (a, b) = (a.rates.as_ref().unwrap(), b.rates.as_ref().unwrap());
                a.a_minus.total_cmp(&b.a_minus)
            })
    }
}

pub fn sweep(
    config: &SystemConfig,
    bath: &MechanicalBath,
    parameter: SweepParameter,
    grid: &[f64],
) -> Result<SweepTable> {
    if grid.is_empty() {
        return Err(invalid("grid", "must not be empty"));
    }
    let increasing = grid.windows(2).all(|w| w[0] < w[1]);
    let decreasing = grid.windows(2).all(|w| w[0] > w[1]);
    if !(increasing || decreasing) {
        return Err(invalid("grid", "must be strictly monotone"));
    }
    let rows = grid
        .par_iter()
        .map(|&value| {
            let point = parameter.apply(config, value);
            let rates = point.as_ref().map_err(Clone::clone).and_then(SystemConfig::rates);
            let stable = point
                .ok()
                .and_then(|c| oracle::build_state_space(&c, bath).ok())
                .map(|m| oracle::is_stable(&m));
            SweepRow {
                value,
                rates,
                stable,
            }
        })
        .collect();
    Ok(SweepTable { parameter, rows })
}
