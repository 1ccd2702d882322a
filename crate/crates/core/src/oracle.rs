//! Independent state-space check of the rate-equation predictions.
//!
//! The closed loop (mechanics, optomechanical cavity, filter) is written as
//! a linear quantum Langevin system over quadratures `X = (a + a†)/√2`,
//! `P = (a − a†)/(i√2)` with `[X, P] = i`. The coupling keeps both the
//! beam-splitter and the two-mode-squeezing terms of `−g(a + a†)(b + b†)`.
//! The symmetrized steady covariance solves `A V + V Aᵀ + D = 0`; vacuum
//! inputs contribute `1/2` and the mechanical bath `n_th + 1/2` per
//! quadrature.
//!
//! Notch loop: filter mirror 0 output drives the cavity and the cavity
//! output enters mirror 1, a plain cascade with three modes.
//!
//! Band-pass loop: the cavity and the filter exchange light through mirror 1
//! with no mode in between, which pins `√κ a_c + √κ₂ a_f = 0`. Eliminating
//! the constraint leaves one optical supermode `z` with `a_f = z/√(1+s²)`,
//! `a_c = −s a_f`, `s² = κ₂/κ`.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use crate::design::{SystemConfig, Topology};
use crate::error::{invalid, Error, Result};
use crate::spectra::{steady_phonon, MechanicalBath};

/// Relative Lyapunov residual accepted from the dense solve.
pub const LYAPUNOV_RESIDUAL_TOL: f64 = 1e-10;
/// Default gate on `|n_oracle − n_rate| / n_rate`.
pub const DEFAULT_REL_DEV_THRESHOLD: f64 = 0.05;
/// Occupations in `[−NEGATIVE_OCCUPATION_TOL, 0)` are clamped to zero.
pub const NEGATIVE_OCCUPATION_TOL: f64 = 1e-9;

const REL_DEV_FLOOR: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct StateSpaceModel {
    pub drift: DMatrix<f64>,
    pub diffusion: DMatrix<f64>,
    pub labels: Vec<String>,
}

impl StateSpaceModel {
    pub fn dim(&self) -> usize {
        self.drift.nrows()
    }

    /// Index of the first quadrature of the named mode.
    pub fn mode_index(&self, mode: &str) -> Option<usize> {
        let x = format!("X_{mode}");
        self.labels.iter().position(|l| *l == x)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleReport {
    pub stable: bool,
    pub n_oracle: f64,
    pub n_rate: f64,
    pub rel_dev: f64,
    pub threshold: f64,
    pub within_threshold: bool,
    /// `‖AV + VAᵀ + D‖ / ‖D‖` of the accepted solve.
    pub residual: f64,
    /// Smallest eigenvalue of `V + (i/2)Ω`.
    pub heisenberg_min_eig: f64,
}

/// Accumulates complex mode equations into real quadrature blocks.
struct Builder {
    modes: usize,
    drift: DMatrix<f64>,
    diffusion: DMatrix<f64>,
}

impl Builder {
    fn new(modes: usize) -> Self {
        Self {
            modes,
            drift: DMatrix::zeros(2 * modes, 2 * modes),
            diffusion: DMatrix::zeros(2 * modes, 2 * modes),
        }
    }

    /// `ȧ_i += c a_j`.
    fn link(&mut self, i: usize, j: usize, c: Complex64) {
        let (r, k) = (2 * i, 2 * j);
        self.drift[(r, k)] += c.re;
        self.drift[(r, k + 1)] -= c.im;
        self.drift[(r + 1, k)] += c.im;
        self.drift[(r + 1, k + 1)] += c.re;
    }

    /// `ȧ_i += i·coupling·(a_j + a_j†)` and the mirror term on `a_j`.
    fn position_coupling(&mut self, i: usize, j: usize, coupling: f64) {
        self.drift[(2 * i + 1, 2 * j)] += 2.0 * coupling;
        self.drift[(2 * j + 1, 2 * i)] += 2.0 * coupling;
    }

    /// White input field entering mode `i` with real amplitude gains; each
    /// input carries `variance` per quadrature.
    fn input(&mut self, gains: &[(usize, f64)], variance: f64) {
        let mut b = DMatrix::<f64>::zeros(2 * self.modes, 2);
        for &(i, k) in gains {
            b[(2 * i, 0)] += k;
            b[(2 * i + 1, 1)] += k;
        }
        self.diffusion += variance * &b * b.transpose();
    }
}

const VACUUM: f64 = 0.5;

pub fn build_state_space(config: &SystemConfig, bath: &MechanicalBath) -> Result<StateSpaceModel> {
    config.validate()?;
    bath_check(bath)?;
    if let Some(tau) = config.delay.filter(|t| *t > 0.0) {
        return Err(Error::UnsupportedDelay { tau });
    }
    let cav = &config.cav;
    let f = &config.filter;
    let i = Complex64::i();
    let kappa = cav.kappa;

    const MECH: usize = 0;
    const OPT: usize = 1;
    const FILT: usize = 2;

    let (mut b, labels) = match config.topology {
        Topology::None => {
            let mut b = Builder::new(2);
            b.link(OPT, OPT, i * cav.delta - kappa / 2.0);
            b.position_coupling(OPT, MECH, cav.g);
            b.input(&[(OPT, -kappa.sqrt())], VACUUM);
            (b, vec!["X_m", "P_m", "X_c", "P_c"])
        }
        Topology::Notch => {
            let mut b = Builder::new(3);
            let (k1, k2, kl) = (f.kappa1, f.kappa2, f.kappa_loss);
            b.link(OPT, OPT, i * cav.delta - kappa / 2.0);
            b.link(OPT, FILT, Complex64::from(-(kappa * k1).sqrt()));
            b.link(FILT, FILT, i * f.delta_f - f.kappa_total() / 2.0 - (k1 * k2).sqrt());
            b.link(FILT, OPT, Complex64::from(-(k2 * kappa).sqrt()));
            b.position_coupling(OPT, MECH, cav.g);
            b.input(&[(OPT, -kappa.sqrt()), (FILT, -(k1.sqrt() + k2.sqrt()))], VACUUM);
            b.input(&[(FILT, -kl.sqrt())], VACUUM);
            (b, vec!["X_m", "P_m", "X_c", "P_c", "X_f", "P_f"])
        }
        Topology::BandPass => {
            if f.kappa2 <= 0.0 {
                return Err(invalid("kappa2", "band-pass loop needs a coupled return mirror"));
            }
            let mut b = Builder::new(2);
            let s2 = f.kappa2 / kappa;
            let norm = 1.0 + s2;
            let weight = (f.kappa2 / (kappa + f.kappa2)).sqrt();
            let cav_rate = i * cav.delta - kappa / 2.0;
            let filt_rate = i * f.delta_f - f.kappa_total() / 2.0 + f.kappa2;
            b.link(OPT, OPT, (s2 * cav_rate + filt_rate) / norm);
            b.position_coupling(OPT, MECH, -weight * cav.g);
            b.input(&[(OPT, -(f.kappa1 / norm).sqrt())], VACUUM);
            b.input(&[(OPT, -(f.kappa_loss / norm).sqrt())], VACUUM);
            (b, vec!["X_m", "P_m", "X_z", "P_z"])
        }
    };

    b.link(MECH, MECH, Complex64::new(-bath.gamma_m / 2.0, -cav.omega_m));
    b.input(&[(MECH, -bath.gamma_m.sqrt())], bath.n_th + 0.5);

    Ok(StateSpaceModel {
        drift: b.drift,
        diffusion: b.diffusion,
        labels: labels.into_iter().map(String::from).collect(),
    })
}

fn bath_check(bath: &MechanicalBath) -> Result<()> {
    MechanicalBath::new(bath.gamma_m, bath.n_th).map(|_| ())
}

/// Largest real part among the drift eigenvalues.
pub fn max_real_part(m: &StateSpaceModel) -> f64 {
    let n = m.dim();
    let a = faer::Mat::<f64>::from_fn(n, n, |i, j| m.drift[(i, j)]);
    match a.eigenvalues() {
        Ok(eig) => eig.iter().map(|z| z.re).fold(f64::NEG_INFINITY, f64::max),
        Err(_) => f64::NAN,
    }
}

pub fn is_stable(m: &StateSpaceModel) -> bool {
    max_real_part(m) < -1e-12 * m.drift.norm()
}

/// Symmetric solution of `A V + V Aᵀ + D = 0`.
pub fn steady_covariance(m: &StateSpaceModel) -> Result<DMatrix<f64>> {
    if !is_stable(m) {
        return Err(Error::UnstableModel {
            max_real_part: max_real_part(m),
        });
    }
    let n = m.dim();
    let a = &m.drift;
    let eye = DMatrix::<f64>::identity(n, n);
    // column-major vec: vec(AV) = (I ⊗ A) vec V, vec(VAᵀ) = (A ⊗ I) vec V
    let k = eye.kronecker(a) + a.kronecker(&eye);
    let rhs = -DVector::from_column_slice(m.diffusion.as_slice());
    let lu = k.clone().lu();
    let mut x = lu
        .solve(&rhs)
        .ok_or_else(|| Error::SolverFailure("singular Lyapunov operator".into()))?;
    // one refinement step
    if let Some(dx) = lu.solve(&(&rhs - &k * &x)) {
        x += dx;
    }
    let v = DMatrix::from_column_slice(n, n, x.as_slice());
    let v = 0.5 * (&v + v.transpose());

    let residual = lyapunov_residual(m, &v);
    if residual > LYAPUNOV_RESIDUAL_TOL {
        return Err(Error::SolverFailure(format!(
            "relative residual {residual:e} exceeds {LYAPUNOV_RESIDUAL_TOL:e}"
        )));
    }
    Ok(v)
}

/// `‖AV + VAᵀ + D‖ / ‖D‖` in the Frobenius norm.
pub fn lyapunov_residual(m: &StateSpaceModel, v: &DMatrix<f64>) -> f64 {
    let r = &m.drift * v + v * m.drift.transpose() + &m.diffusion;
    let scale = m.diffusion.norm();
    if scale == 0.0 {
        r.norm()
    } else {
        r.norm() / scale
    }
}

/// Smallest eigenvalue of the Hermitian matrix `V + (i/2)Ω`.
pub fn heisenberg_min_eigenvalue(v: &DMatrix<f64>) -> f64 {
    let n = v.nrows();
    let mut omega = DMatrix::<f64>::zeros(n, n);
    for k in (0..n).step_by(2) {
        omega[(k, k + 1)] = 0.5;
        omega[(k + 1, k)] = -0.5;
    }
    // real form of S + iK is [[S, −K], [K, S]]
    let mut embed = DMatrix::<f64>::zeros(2 * n, 2 * n);
    embed.view_mut((0, 0), (n, n)).copy_from(v);
    embed.view_mut((n, n), (n, n)).copy_from(v);
    embed.view_mut((0, n), (n, n)).copy_from(&(-&omega));
    embed.view_mut((n, 0), (n, n)).copy_from(&omega);
    SymmetricEigen::new(embed).eigenvalues.min()
}

/// Mean occupation of the mode whose quadratures start at `index`.
pub fn phonon_number(v: &DMatrix<f64>, index: usize) -> Result<f64> {
    let n = (v[(index, index)] + v[(index + 1, index + 1)] - 1.0) / 2.0;
    if n < -NEGATIVE_OCCUPATION_TOL {
        return Err(Error::NegativeOccupation(n));
    }
    Ok(n.max(0.0))
}

/// Compare the Lyapunov phonon number with the rate-equation steady state.
pub fn consistency_check(
    config: &SystemConfig,
    bath: &MechanicalBath,
    threshold: f64,
) -> Result<OracleReport> {
    let model = build_state_space(config, bath)?;
    let v = steady_covariance(&model)?;
    let n_oracle = phonon_number(&v, 0)?;
    let n_rate = steady_phonon(&config.rates()?, bath)?;
    let rel_dev = (n_oracle - n_rate).abs() / n_rate.max(REL_DEV_FLOOR);
    Ok(OracleReport {
        stable: true,
        n_oracle,
        n_rate,
        rel_dev,
        threshold,
        within_threshold: rel_dev <= threshold,
        residual: lyapunov_residual(&model, &v),
        heisenberg_min_eig: heisenberg_min_eigenvalue(&v),
    })
}
