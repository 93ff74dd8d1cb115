//! Run configuration: flat TOML sections, every key optional.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use isowave::gm::GMParams;
use isowave::hamlab::{Domain, IntegrateSettings, Model, ModelKind, PvProfile, Scheme};
use isowave::kinetic::{EvolveSettings, QuadSettings};
use isowave::{make_log_grid, Cutoffs, PhysicalParams, PowerLawSpectrum, SpectralGrid, Wavevector};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("{0}")]
    Syntax(String),
    #[error("{0}")]
    Invalid(String),
}

impl From<isowave::Error> for ConfigError {
    fn from(e: isowave::Error) -> Self {
        ConfigError::Invalid(e.to_string())
    }
}

fn bad(name: &str, reason: impl fmt::Display) -> ConfigError {
    ConfigError::Invalid(format!("invalid parameter `{name}`: {reason}"))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Scenario {
    Dispersion,
    TriadsDump,
    CollisionScan,
    ExponentScan,
    Locality,
    Evolve,
    GmCompare,
    HamlabRun,
}

impl Scenario {
    pub const ALL: [Scenario; 8] = [
        Scenario::Dispersion,
        Scenario::TriadsDump,
        Scenario::CollisionScan,
        Scenario::ExponentScan,
        Scenario::Locality,
        Scenario::Evolve,
        Scenario::GmCompare,
        Scenario::HamlabRun,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Scenario::Dispersion => "dispersion",
            Scenario::TriadsDump => "triads-dump",
            Scenario::CollisionScan => "collision-scan",
            Scenario::ExponentScan => "exponent-scan",
            Scenario::Locality => "locality",
            Scenario::Evolve => "evolve",
            Scenario::GmCompare => "gm-compare",
            Scenario::HamlabRun => "hamlab-run",
        }
    }
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Scenario {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Scenario::ALL
            .into_iter()
            .find(|sc| sc.name() == s)
            .ok_or_else(|| {
                let names: Vec<&str> = Scenario::ALL.iter().map(|s| s.name()).collect();
                if s.is_empty() {
                    format!("no scenario given; expected one of {}", names.join(", "))
                } else {
                    format!(
                        "unknown scenario `{s}`; expected one of {}",
                        names.join(", ")
                    )
                }
            })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PhysicsConfig {
    pub f: f64,
    pub g: f64,
    #[serde(rename = "N")]
    pub n: f64,
    pub rho0: f64,
}

impl Default for PhysicsConfig {
    fn default() -> Self {
        Self {
            f: 0.0,
            g: 1.0,
            n: 1.0,
            rho0: 1.0,
        }
    }
}

impl PhysicsConfig {
    pub fn params(&self) -> Result<PhysicalParams, ConfigError> {
        Ok(PhysicalParams::new(self.f, self.g, self.n, self.rho0)?)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GridConfig {
    pub k_min: f64,
    pub k_max: f64,
    pub nk: usize,
    pub m_min: f64,
    pub m_max: f64,
    pub nm: usize,
}

impl Default for GridConfig {
    fn default() -> Self {
        Self {
            k_min: 0.1,
            k_max: 10.0,
            nk: 9,
            m_min: 0.1,
            m_max: 10.0,
            nm: 9,
        }
    }
}

impl GridConfig {
    pub fn grid(&self) -> Result<SpectralGrid, ConfigError> {
        Ok(make_log_grid(
            self.k_min, self.k_max, self.nk, self.m_min, self.m_max, self.nm,
        )?)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum SpectrumKind {
    #[default]
    PowerLaw,
    Equipartition,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SpectrumConfig {
    pub kind: SpectrumKind,
    pub amplitude: f64,
    pub x: f64,
    pub y: f64,
    /// Equipartition temperature.
    pub temperature: f64,
}

impl Default for SpectrumConfig {
    fn default() -> Self {
        Self {
            kind: SpectrumKind::PowerLaw,
            amplitude: 1.0,
            x: -3.5,
            y: -0.5,
            temperature: 1.0,
        }
    }
}

impl SpectrumConfig {
    pub fn law(&self) -> Result<PowerLawSpectrum, ConfigError> {
        Ok(PowerLawSpectrum::new(self.amplitude, self.x, self.y)?)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct TriadsConfig {
    pub count: usize,
    pub k_min: f64,
    pub k_max: f64,
    pub m_max: f64,
}

impl Default for TriadsConfig {
    fn default() -> Self {
        Self {
            count: 100,
            k_min: 0.1,
            k_max: 10.0,
            m_max: 10.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ScanConfig {
    pub x_min: f64,
    pub x_max: f64,
    pub nx: usize,
    pub y_min: f64,
    pub y_max: f64,
    pub ny: usize,
    /// Probe wavevectors as [k, m]; empty means the grid centre.
    pub probes: Vec<[f64; 2]>,
}

impl Default for ScanConfig {
    fn default() -> Self {
        Self {
            x_min: -4.5,
            x_max: -2.5,
            nx: 9,
            y_min: -1.5,
            y_max: 0.5,
            ny: 9,
            probes: Vec::new(),
        }
    }
}

fn axis(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![lo];
    }
    (0..n)
        .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
        .collect()
}

impl ScanConfig {
    pub fn xs(&self) -> Vec<f64> {
        axis(self.x_min, self.x_max, self.nx)
    }

    pub fn ys(&self) -> Vec<f64> {
        axis(self.y_min, self.y_max, self.ny)
    }

    pub fn probe_nodes(&self, grid: &SpectralGrid) -> Vec<Wavevector> {
        if self.probes.is_empty() {
            let c = grid.centre();
            vec![Wavevector { k: c.k, m: c.m }]
        } else {
            self.probes
                .iter()
                .map(|p| Wavevector { k: p[0], m: p[1] })
                .collect()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct LocalityConfig {
    pub k: f64,
    pub m: f64,
    /// Single-edge and all-edge extension factor.
    pub factor: f64,
    /// Extra nested all-edge factors appended after the single-edge rows.
    pub nested: Vec<f64>,
    pub tolerance: f64,
}

impl Default for LocalityConfig {
    fn default() -> Self {
        Self {
            k: 1.0,
            m: 1.0,
            factor: 4.0,
            nested: Vec::new(),
            tolerance: 0.01,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GmConfig {
    #[serde(rename = "E")]
    pub energy: f64,
    pub m_star: f64,
    pub k_min: f64,
    pub k_max: f64,
    pub nk: usize,
    pub m_min: f64,
    pub m_max: f64,
    pub nm: usize,
    /// Fit window [lo, hi] on each axis.
    pub k_window: [f64; 2],
    pub m_window: [f64; 2],
}

impl Default for GmConfig {
    fn default() -> Self {
        Self {
            energy: 1.0,
            m_star: 1.0,
            k_min: 1e4,
            k_max: 1e6,
            nk: 21,
            m_min: 1e3,
            m_max: 1e4,
            nm: 11,
            k_window: [1e5, 1e6],
            m_window: [1e3, 1e4],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum InitialState {
    #[default]
    Random,
    Standing,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct HamlabConfig {
    pub model: ModelKind,
    pub nx: usize,
    pub ny: usize,
    /// Points in ρ; internal-wave models only.
    pub nz: usize,
    pub lx: f64,
    pub ly: f64,
    pub lz: f64,
    pub amplitude: f64,
    pub dt: f64,
    pub steps: usize,
    pub scheme: Scheme,
    pub snapshot_every: usize,
    pub initial: InitialState,
    /// Lattice mode of the standing-wave initial state.
    pub mode: [i64; 3],
    pub profile: PvProfile,
}

impl Default for HamlabConfig {
    fn default() -> Self {
        Self {
            model: ModelKind::NonlinearSW,
            nx: 32,
            ny: 32,
            nz: 16,
            lx: 2.0 * std::f64::consts::PI,
            ly: 2.0 * std::f64::consts::PI,
            lz: 2.0 * std::f64::consts::PI,
            amplitude: 1e-2,
            dt: 1e-2,
            steps: 100,
            scheme: Scheme::Rk4,
            snapshot_every: 0,
            initial: InitialState::Random,
            mode: [1, 0, 1],
            profile: PvProfile::Rest,
        }
    }
}

impl HamlabConfig {
    pub fn domain(&self) -> Result<Domain, ConfigError> {
        let d = if self.model.is_internal() {
            Domain::new([self.nx, self.ny, self.nz], [self.lx, self.ly, self.lz])?
        } else {
            Domain::horizontal(self.nx, self.ny, self.lx, self.ly)?
        };
        Ok(d)
    }

    pub fn model(&self, physics: &PhysicsConfig) -> Result<Model, ConfigError> {
        if self.model.is_internal() {
            Ok(Model::new(self.model, physics.params()?, self.profile)?)
        } else {
            Ok(Model::standard(self.model))
        }
    }

    pub fn settings(&self) -> IntegrateSettings {
        IntegrateSettings {
            snapshot_every: self.snapshot_every,
            ..IntegrateSettings::new(self.dt, self.steps, self.scheme)
        }
    }
}

/// Complete run configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    /// Scenario run by `isowave run`; subcommands set it themselves.
    pub scenario: String,
    pub output: PathBuf,
    pub seed: u64,
    /// Single worker thread.
    pub deterministic: bool,
    pub physics: PhysicsConfig,
    pub grid: GridConfig,
    pub quad: QuadSettings,
    pub spectrum: SpectrumConfig,
    pub triads: TriadsConfig,
    pub scan: ScanConfig,
    pub locality: LocalityConfig,
    pub evolve: EvolveSettings,
    pub gm: GmConfig,
    pub hamlab: HamlabConfig,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            scenario: String::new(),
            output: PathBuf::from("isowave-out"),
            seed: 0,
            deterministic: false,
            physics: PhysicsConfig::default(),
            grid: GridConfig::default(),
            quad: QuadSettings::default(),
            spectrum: SpectrumConfig::default(),
            triads: TriadsConfig::default(),
            scan: ScanConfig::default(),
            locality: LocalityConfig::default(),
            evolve: EvolveSettings::default(),
            gm: GmConfig::default(),
            hamlab: HamlabConfig::default(),
        }
    }
}

fn line_of(text: &str, offset: usize) -> usize {
    text[..offset.min(text.len())].matches('\n').count() + 1
}

/// Parses and validates a TOML run configuration.
pub fn parse_config(text: &str) -> Result<RunConfig, ConfigError> {
    let cfg: RunConfig = toml::from_str(text).map_err(|e| match e.span() {
        Some(span) => ConfigError::Parse {
            line: line_of(text, span.start),
            message: e.message().to_string(),
        },
        None => ConfigError::Syntax(e.message().to_string()),
    })?;
    cfg.validate()?;
    Ok(cfg)
}

impl RunConfig {
    /// The effective configuration as TOML.
    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("run configuration serializes")
    }

    pub fn scenario(&self) -> Result<Scenario, String> {
        self.scenario.parse()
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if !self.scenario.is_empty() {
            self.scenario().map_err(|e| bad("scenario", e))?;
        }
        if self.output.as_os_str().is_empty() {
            return Err(bad("output", "must name a directory"));
        }
        if self.seed > i64::MAX as u64 {
            return Err(bad("seed", "must fit in a signed 64-bit integer"));
        }
        let params = self.physics.params()?;
        self.grid.grid()?;
        self.quad.validate()?;
        if let Some(c) = self.quad.cutoffs {
            Cutoffs::new(c.k_min, c.k_max, c.m_min, c.m_max)?;
        }
        self.spectrum.law()?;
        if !(self.spectrum.temperature.is_finite() && self.spectrum.temperature > 0.0) {
            return Err(bad("temperature", "must be finite and > 0"));
        }
        let t = &self.triads;
        if !(t.k_min > 0.0 && t.k_max > t.k_min && t.k_max.is_finite()) {
            return Err(bad("triads.k_min", "need 0 < k_min < k_max"));
        }
        if !(t.m_max > 0.0 && t.m_max.is_finite()) {
            return Err(bad("triads.m_max", "must be finite and > 0"));
        }
        let s = &self.scan;
        if s.nx == 0 || s.ny == 0 {
            return Err(bad("scan.nx", "scan axes need at least one point"));
        }
        if !(s.x_min <= s.x_max && s.y_min <= s.y_max) {
            return Err(bad("scan.x_min", "scan ranges must be ordered"));
        }
        if s.probes
            .iter()
            .any(|p| !(p[0] > 0.0 && p[1] != 0.0 && p[0].is_finite() && p[1].is_finite()))
        {
            return Err(bad("scan.probes", "probes need k > 0 and m != 0"));
        }
        let l = &self.locality;
        Wavevector::new(l.k, l.m)?;
        if !(l.factor.is_finite() && l.factor > 1.0) {
            return Err(bad("locality.factor", "must be > 1"));
        }
        if l.nested.iter().any(|f| !(f.is_finite() && *f > 1.0)) {
            return Err(bad("locality.nested", "factors must be > 1"));
        }
        if !(l.tolerance.is_finite() && l.tolerance > 0.0) {
            return Err(bad("locality.tolerance", "must be finite and > 0"));
        }
        self.evolve.validate()?;
        let g = &self.gm;
        if self.scenario == Scenario::GmCompare.name() {
            GMParams::new(g.energy, g.m_star, params)?;
        } else if !(g.energy > 0.0
            && g.energy.is_finite()
            && g.m_star > 0.0
            && g.m_star.is_finite())
        {
            return Err(bad("gm.E", "E and m_star must be finite and > 0"));
        }
        make_log_grid(g.k_min, g.k_max, g.nk, g.m_min, g.m_max, g.nm)?;
        for (name, w) in [("gm.k_window", g.k_window), ("gm.m_window", g.m_window)] {
            if !(w[0] > 0.0 && w[1] > w[0]) {
                return Err(bad(name, "need 0 < lo < hi"));
            }
        }
        let h = &self.hamlab;
        h.domain()?;
        h.model(&self.physics)?;
        h.settings().validate()?;
        if !(h.amplitude.is_finite() && h.amplitude >= 0.0) {
            return Err(bad("hamlab.amplitude", "must be finite and >= 0"));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_text_gives_defaults() {
        assert_eq!(parse_config("").unwrap(), RunConfig::default());
    }

    #[test]
    fn negative_f_names_the_field() {
        let err = parse_config("[physics]\nf = -1.0\n").unwrap_err();
        assert!(err.to_string().contains("`f`"), "{err}");
    }

    #[test]
    fn unknown_key_reports_line() {
        let err = parse_config("seed = 3\n\n[grid]\nnk = 5\nwibble = 2\n").unwrap_err();
        match err {
            ConfigError::Parse { line, message } => {
                assert_eq!(line, 5);
                assert!(message.contains("wibble"));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn scenario_names_parse() {
        for s in Scenario::ALL {
            assert_eq!(s.name().parse::<Scenario>().unwrap(), s);
        }
        assert!("".parse::<Scenario>().is_err());
    }

    #[test]
    fn defaults_round_trip() {
        let cfg = RunConfig::default();
        assert_eq!(parse_config(&cfg.to_toml()).unwrap(), cfg);
    }
}
