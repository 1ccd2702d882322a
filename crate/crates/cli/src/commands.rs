//! Subcommand bodies. Each returns an [`OutputTable`]; rendering and exit
//! codes are left to the caller.

use cfshape_core::design::{
    argmax_detuning_numeric, bandpass_ground_state_feasible, default_bracket, enhancement_factor,
    optimal_detuning, sweep,
};
use cfshape_core::netalg::scattering;
use cfshape_core::oracle::{build_state_space, consistency_check, is_stable};
use cfshape_core::spectra::{spectrum_points, steady_phonon};
use cfshape_core::Error;

use crate::config::{Element, RunConfig};
use crate::error::CliError;
use crate::table::{Cell, OutputTable};

const ARGMAX_TOL: f64 = 1e-9;

fn meta(cfg: &RunConfig, command: &str) -> Vec<(String, String)> {
    let mut m = vec![
        ("tool".to_string(), "cfshape".to_string()),
        ("version".to_string(), env!("CARGO_PKG_VERSION").to_string()),
        ("command".to_string(), command.to_string()),
    ];
    m.extend(cfg.metadata_pairs());
    m
}

fn feasibility(cfg: &RunConfig) -> Cell {
    match (cfg.system, cfg.filter) {
        (Some(s), Some(f)) if f.is_symmetric_ideal() => Cell::Bool(bandpass_ground_state_feasible(
            s.kappa,
            f.kappa1,
            cfg.omega_m,
        )),
        _ => Cell::Empty,
    }
}

/// `omega, Sigma, Sigma_uncontrolled`, or `omega, R2, T2` for the bare filter.
/// Points where the loop is singular keep their row with empty values.
pub fn cmd_spectrum(cfg: &RunConfig) -> Result<OutputTable, CliError> {
    let grid = cfg.grid.values();
    if cfg.element == Element::Filter {
        let f = cfg.filter_spec()?.params()?;
        let mut t = OutputTable::new(meta(cfg, "spectrum"), &["omega", "R2", "T2"]);
        for &w in &grid {
            let s = scattering(&f, w);
            t.push(vec![
                Cell::num(w),
                Cell::num(s.r11.norm_sqr()),
                Cell::num(s.t21.norm_sqr()),
            ]);
        }
        return Ok(t);
    }

    let sys = cfg.system_config()?;
    let base = cfg.baseline_config()?;
    let g = sys.cav.g;
    let sigma = spectrum_points(&sys.response_fn()?, g, &grid);
    let sigma0 = spectrum_points(&base.response_fn()?, g, &grid);
    let mut t = OutputTable::new(
        meta(cfg, "spectrum"),
        &["omega", "Sigma", "Sigma_uncontrolled"],
    );
    for ((&w, s), s0) in grid.iter().zip(sigma).zip(sigma0) {
        let cell = |r: Result<f64, Error>| match r {
            Ok(v) => Ok(Cell::num(v)),
            Err(Error::SingularLoop { .. }) => Ok(Cell::Empty),
            Err(e) => Err(CliError::from(e)),
        };
        t.push(vec![Cell::num(w), cell(s)?, cell(s0)?]);
    }
    Ok(t)
}

/// One row of sideband rates. A singular loop at `±ω_m` is a numeric
/// failure; absence of net cooling is reported, not raised.
pub fn cmd_rates(cfg: &RunConfig) -> Result<OutputTable, CliError> {
    let sys = cfg.system_config()?;
    let r = sys.rates()?;
    let n_steady = match steady_phonon(&r, &cfg.bath) {
        Ok(n) => Some(n),
        Err(Error::NoNetCooling { .. }) => None,
        Err(e) => return Err(e.into()),
    };
    let mut t = OutputTable::new(
        meta(cfg, "rates"),
        &[
            "a_plus",
            "a_minus",
            "gamma_opt",
            "n_min",
            "n_steady",
            "net_cooling",
            "resolved_sideband",
            "bandpass_feasible",
        ],
    );
    t.push(vec![
        Cell::num(r.a_plus),
        Cell::num(r.a_minus),
        Cell::num(r.gamma_opt),
        Cell::opt(r.n_min),
        Cell::opt(n_steady),
        Cell::Bool(r.n_min.is_some()),
        Cell::Bool(sys.cav.is_resolved()),
        feasibility(cfg),
    ]);
    Ok(t)
}

pub fn cmd_sweep(cfg: &RunConfig) -> Result<OutputTable, CliError> {
    let spec = cfg
        .sweep
        .as_ref()
        .ok_or_else(|| CliError::Config("--sweep-param: required for sweep".into()))?;
    let sys = cfg.system_config()?;
    let table = sweep(&sys, &cfg.bath, spec.parameter, &spec.values)?;
    let mut t = OutputTable::new(
        meta(cfg, "sweep"),
        &[
            spec.parameter.name(),
            "a_plus",
            "a_minus",
            "gamma_opt",
            "n_min",
            "stable",
        ],
    );
    for row in &table.rows {
        let stable = row.stable.map_or(Cell::Empty, Cell::Bool);
        match &row.rates {
            Ok(r) => t.push(vec![
                Cell::num(row.value),
                Cell::num(r.a_plus),
                Cell::num(r.a_minus),
                Cell::num(r.gamma_opt),
                Cell::opt(r.n_min),
                stable,
            ]),
            Err(_) => t.push(vec![
                Cell::num(row.value),
                Cell::Empty,
                Cell::Empty,
                Cell::Empty,
                Cell::Empty,
                stable,
            ]),
        }
    }
    Ok(t)
}

/// Lyapunov phonon number against the rate equation. An unstable model is
/// a `stable=false` row.
pub fn cmd_oracle(cfg: &RunConfig) -> Result<OutputTable, CliError> {
    let sys = cfg.system_config()?;
    let mut t = OutputTable::new(
        meta(cfg, "oracle"),
        &[
            "stable",
            "n_oracle",
            "n_rate",
            "rel_dev",
            "within_threshold",
            "residual",
            "heisenberg_min_eig",
        ],
    );
    let model = build_state_space(&sys, &cfg.bath)?;
    if !is_stable(&model) {
        let mut row = vec![Cell::Bool(false)];
        row.resize(t.columns.len(), Cell::Empty);
        t.push(row);
        return Ok(t);
    }
    match consistency_check(&sys, &cfg.bath, cfg.threshold) {
        Ok(r) => t.push(vec![
            Cell::Bool(r.stable),
            Cell::num(r.n_oracle),
            Cell::num(r.n_rate),
            Cell::num(r.rel_dev),
            Cell::Bool(r.within_threshold),
            Cell::num(r.residual),
            Cell::num(r.heisenberg_min_eig),
        ]),
        Err(Error::UnstableModel { .. }) => {
            let mut row = vec![Cell::Bool(false)];
            row.resize(t.columns.len(), Cell::Empty);
            t.push(row);
        }
        Err(e) => return Err(e.into()),
    }
    Ok(t)
}

/// Optimal detuning (closed form and numeric), filter detuning,
/// enhancement and feasibility.
pub fn cmd_design(cfg: &RunConfig) -> Result<OutputTable, CliError> {
    let s = cfg.system_params()?;
    let f = cfg.filter_spec()?;
    if !f.is_symmetric_ideal() {
        return Err(CliError::Config(
            "--kappa-f: design needs a symmetric lossless filter".into(),
        ));
    }
    let kf = f.kappa1;
    let sys = cfg.system_config()?;
    let bracket = default_bracket(cfg.omega_m, s.kappa, kf);
    let numeric = match argmax_detuning_numeric(&sys, bracket, ARGMAX_TOL) {
        Ok(d) => Some(d),
        Err(Error::BracketError { .. }) => None,
        Err(e) => return Err(e.into()),
    };
    let mut t = OutputTable::new(
        meta(cfg, "design"),
        &[
            "delta_c",
            "delta_c_numeric",
            "delta_f",
            "enhancement",
            "bandpass_feasible",
            "resolved_sideband",
        ],
    );
    t.push(vec![
        Cell::num(optimal_detuning(cfg.omega_m, s.kappa, kf)),
        Cell::opt(numeric),
        Cell::num(f.delta_f),
        Cell::num(enhancement_factor(cfg.omega_m, kf)),
        feasibility(cfg),
        Cell::Bool(sys.cav.is_resolved()),
    ]);
    Ok(t)
}
