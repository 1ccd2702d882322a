//! Run configuration: flat `key=value` pairs from a file and/or flags,
//! resolved into a [`RunConfig`]. Keys are the long flag names without the
//! leading dashes.

use std::collections::BTreeMap;

use cfshape_core::design::{optimal_detuning, SweepParameter, SystemConfig, Topology};
use cfshape_core::netalg::{FilterCavityParams, OptoCavityParams};
use cfshape_core::spectra::MechanicalBath;

use crate::error::CliError;

/// Every accepted key, in metadata emission order.
pub const KEYS: &[&str] = &[
    "units",
    "element",
    "topology",
    "kappa",
    "omega-m",
    "g",
    "delta",
    "kappa-f",
    "kappa1",
    "kappa2",
    "kappa-loss",
    "delta-f",
    "tau",
    "gamma-m",
    "n-th",
    "omega-min",
    "omega-max",
    "points",
    "format",
    "sweep-param",
    "sweep-values",
    "sweep-min",
    "sweep-max",
    "sweep-points",
    "threshold",
];

/// Keys written into the metadata header that are informational only.
const META_ONLY: &[&str] = &["tool", "version", "command", "delta-resolved"];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Units {
    /// Frequencies in units of the mechanical frequency, `ω_m = 1`.
    OmegaM,
    Si,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Element {
    System,
    Filter,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemParams {
    pub kappa: f64,
    pub g: f64,
    pub delta: f64,
    /// `delta` was resolved from the optimal-detuning formula.
    pub delta_auto: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FilterSpec {
    pub kappa1: f64,
    pub kappa2: f64,
    pub kappa_loss: f64,
    pub delta_f: f64,
}

impl FilterSpec {
    pub fn is_symmetric_ideal(&self) -> bool {
        self.kappa1 == self.kappa2 && self.kappa_loss == 0.0
    }

    pub fn params(&self) -> Result<FilterCavityParams, CliError> {
        Ok(FilterCavityParams::new(
            self.kappa1,
            self.kappa2,
            self.kappa_loss,
            self.delta_f,
        )?)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub omega_min: f64,
    pub omega_max: f64,
    pub points: usize,
}

impl Grid {
    pub fn values(&self) -> Vec<f64> {
        let n = self.points;
        let span = self.omega_max - self.omega_min;
        (0..n)
            .map(|i| {
                if i + 1 == n {
                    self.omega_max
                } else {
                    self.omega_min + span * i as f64 / (n - 1) as f64
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub parameter: SweepParameter,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub units: Units,
    pub element: Element,
    pub topology: Topology,
    pub omega_m: f64,
    /// Absent only in filter-only runs that did not set the cavity.
    pub system: Option<SystemParams>,
    pub filter: Option<FilterSpec>,
    pub tau: Option<f64>,
    pub bath: MechanicalBath,
    pub grid: Grid,
    pub format: Format,
    pub sweep: Option<SweepSpec>,
    pub threshold: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Origin {
    Flag,
    Line(usize),
    Meta,
}

#[derive(Debug, Clone, Default)]
pub struct RawConfig {
    entries: BTreeMap<String, (String, Origin)>,
}

fn where_(key: &str, origin: Origin) -> String {
    match origin {
        Origin::Flag => format!("--{key}"),
        Origin::Line(n) => format!("line {n} ({key})"),
        Origin::Meta => format!("metadata key {key}"),
    }
}

impl RawConfig {
    /// Parse a flat `key=value` config file. Blank lines and `#` comments are
    /// skipped; a repeated key is an error.
    pub fn from_file_text(text: &str) -> Result<Self, CliError> {
        let mut raw = RawConfig::default();
        for (i, line) in text.lines().enumerate() {
            let n = i + 1;
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((k, v)) = line.split_once('=') else {
                return Err(CliError::Config(format!(
                    "line {n}: expected key=value, got `{line}`"
                )));
            };
            let (k, v) = (k.trim(), v.trim());
            if !KEYS.contains(&k) {
                return Err(CliError::Config(format!("line {n}: unknown key `{k}`")));
            }
            if let Some((prev, origin)) = raw.entries.get(k) {
                let what = if k == "delta" && (prev == "auto" || v == "auto") {
                    "ambiguous detuning, both a value and auto given"
                } else {
                    "duplicate key"
                };
                return Err(CliError::Config(format!(
                    "line {n}: {what} `{k}` (first set at {})",
                    where_(k, *origin)
                )));
            }
            raw.entries
                .insert(k.to_string(), (v.to_string(), Origin::Line(n)));
        }
        Ok(raw)
    }

    /// Read back a `# key=value ...` metadata line.
    pub fn from_metadata(line: &str) -> Result<Self, CliError> {
        let body = line.trim().strip_prefix('#').unwrap_or(line).trim();
        let mut raw = RawConfig::default();
        for tok in body.split_whitespace() {
            let Some((k, v)) = tok.split_once('=') else {
                return Err(CliError::Config(format!(
                    "metadata: malformed token `{tok}`"
                )));
            };
            if META_ONLY.contains(&k) {
                continue;
            }
            if !KEYS.contains(&k) {
                return Err(CliError::Config(format!("metadata: unknown key `{k}`")));
            }
            if raw
                .entries
                .insert(k.to_string(), (v.to_string(), Origin::Meta))
                .is_some()
            {
                return Err(CliError::Config(format!("metadata: duplicate key `{k}`")));
            }
        }
        Ok(raw)
    }

    /// Flags override file entries.
    pub fn apply_flags<'a, I>(&mut self, flags: I) -> Result<(), CliError>
    where
        I: IntoIterator<Item = (&'a str, String)>,
    {
        for (k, v) in flags {
            if !KEYS.contains(&k) {
                return Err(CliError::Config(format!("--{k}: unknown option")));
            }
            self.entries.insert(k.to_string(), (v, Origin::Flag));
        }
        Ok(())
    }

    fn get(&self, key: &str) -> Option<(&str, Origin)> {
        self.entries.get(key).map(|(v, o)| (v.as_str(), *o))
    }

    fn has(&self, key: &str) -> bool {
        self.entries.contains_key(key)
    }

    fn err(&self, key: &str, msg: impl std::fmt::Display) -> CliError {
        match self.get(key) {
            Some((_, o)) => CliError::Config(format!("{}: {msg}", where_(key, o))),
            None => CliError::Config(format!("--{key}: {msg}")),
        }
    }

    fn float(&self, key: &str) -> Result<Option<f64>, CliError> {
        let Some((v, _)) = self.get(key) else {
            return Ok(None);
        };
        match v.parse::<f64>() {
            Ok(x) if x.is_finite() => Ok(Some(x)),
            _ => Err(self.err(key, format!("expected a finite number, got `{v}`"))),
        }
    }

    fn required(&self, key: &str) -> Result<f64, CliError> {
        self.float(key)?
            .ok_or_else(|| CliError::Config(format!("--{key}: required but not given")))
    }

    fn positive(&self, key: &str) -> Result<Option<f64>, CliError> {
        match self.float(key)? {
            Some(x) if x <= 0.0 => Err(self.err(key, format!("must be > 0, got {x}"))),
            other => Ok(other),
        }
    }

    fn nonnegative(&self, key: &str) -> Result<Option<f64>, CliError> {
        match self.float(key)? {
            Some(x) if x < 0.0 => Err(self.err(key, format!("must be >= 0, got {x}"))),
            other => Ok(other),
        }
    }

    fn count(&self, key: &str) -> Result<Option<usize>, CliError> {
        let Some((v, _)) = self.get(key) else {
            return Ok(None);
        };
        v.parse::<usize>()
            .map(Some)
            .map_err(|_| self.err(key, format!("expected a non-negative integer, got `{v}`")))
    }

    fn choice<T: Copy>(&self, key: &str, options: &[(&str, T)]) -> Result<Option<T>, CliError> {
        let Some((v, _)) = self.get(key) else {
            return Ok(None);
        };
        options
            .iter()
            .find(|(name, _)| *name == v)
            .map(|(_, t)| Some(*t))
            .ok_or_else(|| {
                let names: Vec<_> = options.iter().map(|(n, _)| *n).collect();
                self.err(
                    key,
                    format!("expected one of {}, got `{v}`", names.join("|")),
                )
            })
    }

    pub fn resolve(&self) -> Result<RunConfig, CliError> {
        let units = self
            .choice("units", &[("omega_m", Units::OmegaM), ("si", Units::Si)])?
            .unwrap_or(Units::OmegaM);
        let element = self
            .choice(
                "element",
                &[("system", Element::System), ("filter", Element::Filter)],
            )?
            .unwrap_or(Element::System);
        let topology = self
            .choice(
                "topology",
                &[
                    ("notch", Topology::Notch),
                    ("bandpass", Topology::BandPass),
                    ("none", Topology::None),
                ],
            )?
            .unwrap_or(Topology::None);

        let omega_m = match (units, self.positive("omega-m")?) {
            (Units::OmegaM, None) => 1.0,
            (Units::OmegaM, Some(w)) if w == 1.0 => 1.0,
            (Units::OmegaM, Some(w)) => {
                let (_, o) = self.get("omega-m").unwrap();
                return Err(CliError::Unit(format!(
                    "{}: omega-m = {w} conflicts with units=omega_m, which fixes omega-m = 1; use --units si",
                    where_("omega-m", o)
                )));
            }
            (Units::Si, Some(w)) => w,
            (Units::Si, None) => {
                return Err(CliError::Unit("--omega-m: required with units=si".into()));
            }
        };

        let filter = self.filter_spec(topology, omega_m)?;
        if element == Element::Filter && filter.is_none() {
            return Err(CliError::Config(
                "--kappa-f: filter-only mode needs the filter (kappa-f or kappa1/kappa2)".into(),
            ));
        }
        if topology != Topology::None && filter.is_none() {
            return Err(CliError::Config(
                "--kappa-f: required for topology notch/bandpass (or give kappa1 and kappa2)"
                    .into(),
            ));
        }

        let need_system = element == Element::System || self.has("kappa") || self.has("g");
        let system = if need_system {
            let kappa = self.required("kappa")?;
            if kappa <= 0.0 {
                return Err(self.err("kappa", format!("must be > 0, got {kappa}")));
            }
            let g = self.required("g")?;
            if g < 0.0 {
                return Err(self.err("g", format!("must be >= 0, got {g}")));
            }
            let (delta, delta_auto) = match self.get("delta") {
                Some(("auto", _)) => {
                    let f = match (topology, filter) {
                        (Topology::Notch, Some(f)) if f.is_symmetric_ideal() => f,
                        _ => {
                            return Err(self.err(
                                "delta",
                                "auto needs topology notch with a symmetric lossless filter",
                            ))
                        }
                    };
                    (optimal_detuning(omega_m, kappa, f.kappa1), true)
                }
                Some(_) => (self.float("delta")?.unwrap(), false),
                None => (-omega_m, false),
            };
            Some(SystemParams {
                kappa,
                g,
                delta,
                delta_auto,
            })
        } else {
            None
        };

        let tau = self.nonnegative("tau")?;
        let gamma_m = self.nonnegative("gamma-m")?.unwrap_or(0.0);
        let n_th = self.nonnegative("n-th")?.unwrap_or(0.0);
        let bath = MechanicalBath { gamma_m, n_th };

        let omega_min = self.float("omega-min")?.unwrap_or(-3.0 * omega_m);
        let omega_max = self.float("omega-max")?.unwrap_or(3.0 * omega_m);
        let points = self.count("points")?.unwrap_or(601);
        if points < 2 {
            return Err(self.err(
                "points",
                format!("need at least 2 grid points, got {points}"),
            ));
        }
        if !(omega_min < omega_max) {
            return Err(self.err(
                "omega-max",
                format!("omega-max ({omega_max}) must exceed omega-min ({omega_min})"),
            ));
        }
        let grid = Grid {
            omega_min,
            omega_max,
            points,
        };

        let format = self
            .choice("format", &[("csv", Format::Csv), ("json", Format::Json)])?
            .unwrap_or(Format::Csv);
        let sweep = self.sweep_spec()?;
        let threshold = self
            .positive("threshold")?
            .unwrap_or(cfshape_core::oracle::DEFAULT_REL_DEV_THRESHOLD);

        let cfg = RunConfig {
            units,
            element,
            topology,
            omega_m,
            system,
            filter,
            tau,
            bath,
            grid,
            format,
            sweep,
            threshold,
        };
        if cfg.system.is_some() {
            cfg.system_config()?;
        }
        Ok(cfg)
    }

    fn filter_spec(
        &self,
        topology: Topology,
        omega_m: f64,
    ) -> Result<Option<FilterSpec>, CliError> {
        let kf = self.positive("kappa-f")?;
        let k1 = self.positive("kappa1")?;
        let k2 = self.positive("kappa2")?;
        let loss = self.nonnegative("kappa-loss")?;
        let (kappa1, kappa2) = match (kf, k1, k2) {
            (None, None, None) => {
                if loss.is_some() || self.has("delta-f") {
                    return Err(self.err(
                        if loss.is_some() {
                            "kappa-loss"
                        } else {
                            "delta-f"
                        },
                        "given without a filter (kappa-f or kappa1/kappa2)",
                    ));
                }
                return Ok(None);
            }
            (Some(kf), None, None) => (kf, kf),
            (None, Some(a), Some(b)) => (a, b),
            (Some(_), _, _) => {
                return Err(self.err("kappa-f", "give either kappa-f or kappa1/kappa2, not both"))
            }
            (None, Some(_), None) => {
                return Err(self.err("kappa2", "required together with kappa1"))
            }
            (None, None, Some(_)) => {
                return Err(self.err("kappa1", "required together with kappa2"))
            }
        };
        let delta_f = match (self.float("delta-f")?, topology) {
            (Some(d), _) => d,
            (None, Topology::Notch) => omega_m,
            (None, Topology::BandPass) => -omega_m,
            (None, Topology::None) => {
                return Err(CliError::Config(
                    "--delta-f: required when the filter is used without a topology".into(),
                ))
            }
        };
        Ok(Some(FilterSpec {
            kappa1,
            kappa2,
            kappa_loss: loss.unwrap_or(0.0),
            delta_f,
        }))
    }

    fn sweep_spec(&self) -> Result<Option<SweepSpec>, CliError> {
        let parameter = self.choice(
            "sweep-param",
            &[
                ("delta", SweepParameter::Delta),
                ("kappa-f", SweepParameter::KappaF),
                ("kappa", SweepParameter::Kappa),
                ("g", SweepParameter::G),
            ],
        )?;
        let listed = self.get("sweep-values");
        let ranged = ["sweep-min", "sweep-max", "sweep-points"]
            .iter()
            .any(|k| self.has(k));
        let Some(parameter) = parameter else {
            if listed.is_some() || ranged {
                return Err(CliError::Config(
                    "--sweep-param: required with a sweep grid".into(),
                ));
            }
            return Ok(None);
        };
        let values = match (listed, ranged) {
            (Some(_), true) => {
                return Err(self.err(
                    "sweep-values",
                    "give either sweep-values or sweep-min/max/points, not both",
                ))
            }
            (Some((text, _)), false) => {
                let mut values = Vec::new();
                for tok in text.split(',').map(str::trim).filter(|t| !t.is_empty()) {
                    match tok.parse::<f64>() {
                        Ok(x) if x.is_finite() => values.push(x),
                        _ => return Err(self.err("sweep-values", format!("bad value `{tok}`"))),
                    }
                }
                values
            }
            (None, true) => {
                let lo = self.required("sweep-min")?;
                let hi = self.required("sweep-max")?;
                let n = self.count("sweep-points")?.ok_or_else(|| {
                    CliError::Config("--sweep-points: required with sweep-min/max".into())
                })?;
                if n == 1 && lo != hi {
                    return Err(self.err(
                        "sweep-points",
                        "a single point needs sweep-min == sweep-max",
                    ));
                }
                Grid {
                    omega_min: lo,
                    omega_max: hi,
                    points: n,
                }
                .values()
            }
            (None, false) => Vec::new(),
        };
        if values.is_empty() {
            return Err(CliError::Config(
                "--sweep-values: sweep grid is empty".into(),
            ));
        }
        let up = values.windows(2).all(|w| w[0] < w[1]);
        let down = values.windows(2).all(|w| w[0] > w[1]);
        if !(up || down) {
            return Err(self.err("sweep-values", "sweep grid must be strictly monotone"));
        }
        Ok(Some(SweepSpec { parameter, values }))
    }
}

/// Exact decimal rendering used in metadata and output rows.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

fn sweep_name(p: SweepParameter) -> &'static str {
    match p {
        SweepParameter::Delta => "delta",
        SweepParameter::KappaF => "kappa-f",
        SweepParameter::Kappa => "kappa",
        SweepParameter::G => "g",
    }
}

impl RunConfig {
    /// Parse from an optional config-file body plus flag overrides.
    pub fn parse<'a, I>(file_text: Option<&str>, flags: I) -> Result<Self, CliError>
    where
        I: IntoIterator<Item = (&'a str, String)>,
    {
        let mut raw = match file_text {
            Some(t) => RawConfig::from_file_text(t)?,
            None => RawConfig::default(),
        };
        raw.apply_flags(flags)?;
        raw.resolve()
    }

    pub fn from_metadata(line: &str) -> Result<Self, CliError> {
        RawConfig::from_metadata(line)?.resolve()
    }

    /// Full resolved parameter set as ordered `key=value` pairs.
    pub fn metadata_pairs(&self) -> Vec<(String, String)> {
        let mut out: Vec<(String, String)> = Vec::new();
        let mut put = |k: &str, v: String| out.push((k.to_string(), v));
        put(
            "units",
            match self.units {
                Units::OmegaM => "omega_m",
                Units::Si => "si",
            }
            .into(),
        );
        put(
            "element",
            match self.element {
                Element::System => "system",
                Element::Filter => "filter",
            }
            .into(),
        );
        put(
            "topology",
            match self.topology {
                Topology::Notch => "notch",
                Topology::BandPass => "bandpass",
                Topology::None => "none",
            }
            .into(),
        );
        if let Some(s) = &self.system {
            put("kappa", fmt_f64(s.kappa));
        }
        put("omega-m", fmt_f64(self.omega_m));
        if let Some(s) = &self.system {
            put("g", fmt_f64(s.g));
            if s.delta_auto {
                put("delta", "auto".into());
                put("delta-resolved", fmt_f64(s.delta));
            } else {
                put("delta", fmt_f64(s.delta));
            }
        }
        if let Some(f) = &self.filter {
            if f.is_symmetric_ideal() {
                put("kappa-f", fmt_f64(f.kappa1));
            } else {
                put("kappa1", fmt_f64(f.kappa1));
                put("kappa2", fmt_f64(f.kappa2));
                put("kappa-loss", fmt_f64(f.kappa_loss));
            }
            put("delta-f", fmt_f64(f.delta_f));
        }
        if let Some(t) = self.tau {
            put("tau", fmt_f64(t));
        }
        put("gamma-m", fmt_f64(self.bath.gamma_m));
        put("n-th", fmt_f64(self.bath.n_th));
        put("omega-min", fmt_f64(self.grid.omega_min));
        put("omega-max", fmt_f64(self.grid.omega_max));
        put("points", self.grid.points.to_string());
        put(
            "format",
            match self.format {
                Format::Csv => "csv",
                Format::Json => "json",
            }
            .into(),
        );
        if let Some(s) = &self.sweep {
            put("sweep-param", sweep_name(s.parameter).into());
            let vals: Vec<String> = s.values.iter().map(|&v| fmt_f64(v)).collect();
            put("sweep-values", vals.join(","));
        }
        put("threshold", fmt_f64(self.threshold));
        out
    }

    /// `# tool=cfshape version=... key=value ...`
    pub fn emit_metadata(&self) -> String {
        let mut line = format!("# tool=cfshape version={}", env!("CARGO_PKG_VERSION"));
        for (k, v) in self.metadata_pairs() {
            line.push(' ');
            line.push_str(&k);
            line.push('=');
            line.push_str(&v);
        }
        line
    }

    pub fn system_params(&self) -> Result<SystemParams, CliError> {
        self.system
            .ok_or_else(|| CliError::Config("--kappa: required but not given".into()))
    }

    pub fn filter_spec(&self) -> Result<FilterSpec, CliError> {
        self.filter
            .ok_or_else(|| CliError::Config("--kappa-f: required but not given".into()))
    }

    pub fn system_config(&self) -> Result<SystemConfig, CliError> {
        let s = self.system_params()?;
        let cav = OptoCavityParams::new(s.kappa, s.delta, s.g, self.omega_m)?;
        let filter = match self.filter {
            Some(f) => f.params()?,
            None => FilterCavityParams::symmetric(1.0, 0.0)?,
        };
        Ok(SystemConfig::new(cav, filter, self.topology, self.tau)?)
    }

    /// Same cavity, no controller, driven at `Δ = −ω_m`.
    pub fn baseline_config(&self) -> Result<SystemConfig, CliError> {
        let s = self.system_params()?;
        let cav = OptoCavityParams::new(s.kappa, -self.omega_m, s.g, self.omega_m)?;
        Ok(SystemConfig::uncontrolled(cav)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn flags(s: &[(&'static str, &str)]) -> Vec<(&'static str, String)> {
        s.iter().map(|(k, v)| (*k, v.to_string())).collect()
    }

    #[test]
    fn auto_detuning_resolves() {
        let cfg = RunConfig::parse(
            None,
            flags(&[
                ("topology", "notch"),
                ("kappa", "10"),
                ("omega-m", "1"),
                ("g", "0.1"),
                ("kappa-f", "1"),
                ("delta", "auto"),
            ]),
        )
        .unwrap();
        let s = cfg.system.unwrap();
        assert!(s.delta_auto);
        assert_eq!(s.delta, -3.5);
        assert!(cfg
            .emit_metadata()
            .contains("delta=auto delta-resolved=-3.5000000000000000e0"));
    }

    #[test]
    fn missing_kappa_names_flag() {
        let err = RunConfig::parse(None, flags(&[("g", "0.1")])).unwrap_err();
        assert!(
            matches!(&err, CliError::Config(m) if m.contains("--kappa")),
            "{err}"
        );
    }

    #[test]
    fn file_with_value_and_auto_is_ambiguous() {
        let text = "kappa=10\ng=0.1\ntopology=notch\nkappa-f=1\ndelta=-1\ndelta=auto\n";
        let err = RunConfig::parse(Some(text), Vec::new()).unwrap_err();
        assert!(
            matches!(&err, CliError::Config(m) if m.contains("line 6") && m.contains("ambiguous"))
        );
    }

    #[test]
    fn flags_override_file() {
        let text = "# P0\nkappa = 10\ng=0.1\ndelta=-2\n";
        let cfg = RunConfig::parse(Some(text), flags(&[("delta", "-1")])).unwrap();
        assert_eq!(cfg.system.unwrap().delta, -1.0);
    }

    #[test]
    fn bad_file_line_is_located() {
        let err = RunConfig::parse(Some("kappa=10\ng=abc\n"), Vec::new()).unwrap_err();
        assert!(
            matches!(&err, CliError::Config(m) if m.contains("line 2")),
            "{err}"
        );
        let err = RunConfig::parse(Some("kappa=10\nbogus=1\n"), Vec::new()).unwrap_err();
        assert!(
            matches!(&err, CliError::Config(m) if m.contains("line 2")),
            "{err}"
        );
    }

    #[test]
    fn mixed_units_rejected() {
        let err = RunConfig::parse(
            None,
            flags(&[("kappa", "10"), ("g", "0.1"), ("omega-m", "2")]),
        )
        .unwrap_err();
        assert!(matches!(err, CliError::Unit(_)));
        let err = RunConfig::parse(
            None,
            flags(&[("kappa", "10"), ("g", "0.1"), ("units", "si")]),
        )
        .unwrap_err();
        assert!(matches!(err, CliError::Unit(_)));
        let cfg = RunConfig::parse(
            None,
            flags(&[
                ("kappa", "1e7"),
                ("g", "1e4"),
                ("units", "si"),
                ("omega-m", "1e6"),
            ]),
        )
        .unwrap();
        assert_eq!(cfg.omega_m, 1e6);
        assert_eq!(cfg.system.unwrap().delta, -1e6);
    }

    #[test]
    fn grid_validation() {
        let base = [("kappa", "10"), ("g", "0.1")];
        let mut f = flags(&base);
        f.push(("points", "1".into()));
        assert!(RunConfig::parse(None, f).is_err());
        let mut f = flags(&base);
        f.extend(flags(&[("sweep-param", "delta"), ("sweep-values", "")]));
        let err = RunConfig::parse(None, f).unwrap_err();
        assert!(matches!(&err, CliError::Config(m) if m.contains("empty")));
        let mut f = flags(&base);
        f.extend(flags(&[
            ("sweep-param", "delta"),
            ("sweep-values", "1,3,2"),
        ]));
        assert!(RunConfig::parse(None, f).is_err());
    }

    #[test]
    fn grid_hits_sidebands_exactly() {
        let g = Grid {
            omega_min: -3.0,
            omega_max: 3.0,
            points: 601,
        };
        let v = g.values();
        assert_eq!((v[200], v[300], v[400], v[600]), (-1.0, 0.0, 1.0, 3.0));
    }

    #[test]
    fn filter_only_needs_no_cavity() {
        let cfg = RunConfig::parse(
            None,
            flags(&[("element", "filter"), ("kappa-f", "1"), ("delta-f", "1")]),
        )
        .unwrap();
        assert!(cfg.system.is_none());
        assert!(RunConfig::parse(None, flags(&[("element", "filter")])).is_err());
    }

    #[test]
    fn asymmetric_filter_round_trips() {
        let cfg = RunConfig::parse(
            None,
            flags(&[
                ("kappa", "10"),
                ("g", "0.1"),
                ("topology", "bandpass"),
                ("kappa1", "1"),
                ("kappa2", "1.2"),
                ("kappa-loss", "0.01"),
                ("tau", "0.5"),
                ("sweep-param", "kappa-f"),
                ("sweep-min", "0.1"),
                ("sweep-max", "10"),
                ("sweep-points", "7"),
            ]),
        )
        .unwrap();
        assert_eq!(RunConfig::from_metadata(&cfg.emit_metadata()).unwrap(), cfg);
    }
}
