//! Run configuration: a line-oriented `section.key = value` file with the
//! unit carried in the key suffix.
//!
//! ```text
//! # headline design
//! cantilever.length_nm = 495
//! bias.auto = true
//! ```

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use serde::Serialize;

use crate::cantilever::{CantileverGeometry, MaterialParams, StiffnessConvention};
use crate::cqad::CqadConfig;
use crate::design::Design;
use crate::explorer::{linspace, DesignConstraints, SweepSpec};
use crate::oracle::grid::{GridSpec, PotentialPart};
use crate::potential::LennardJonesParams;
use crate::units::{
    angular_to_mhz, ghz_to_angular, joule_to_mev, khz_to_angular, mhz_to_angular, ANGSTROM,
    FEMTOMETER, GIGAPASCAL, MILLIKELVIN, NANOMETER,
};

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("line {line}: unknown key `{key}`")]
    UnknownKey { line: usize, key: String },
    #[error(
        "line {line}: key `{key}` has the wrong or missing unit suffix; expected `{expected}`"
    )]
    UnitMismatch {
        line: usize,
        key: String,
        expected: String,
    },
    #[error("missing required key `{0}`")]
    Missing(String),
    #[error("invalid configuration: {0}")]
    Invalid(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Kind {
    Number,
    Integer,
    Bool,
    Text,
}

const KEYS: &[(&str, Kind)] = &[
    ("material.young_modulus_gpa", Kind::Number),
    ("material.density_kg_m3", Kind::Number),
    ("cantilever.length_nm", Kind::Number),
    ("cantilever.width_nm", Kind::Number),
    ("cantilever.thickness_nm", Kind::Number),
    ("potential.epsilon_mev", Kind::Number),
    ("potential.sigma_angstrom", Kind::Number),
    ("bias.auto", Kind::Bool),
    ("bias.gap_angstrom", Kind::Number),
    ("bias.gap_sigma", Kind::Number),
    ("bias.convention", Kind::Text),
    ("spectrum.temperature_mk", Kind::Number),
    ("spectrum.n_max", Kind::Integer),
    ("cqad.omega_q_mhz", Kind::Number),
    ("cqad.omega_m_mhz", Kind::Number),
    ("cqad.omega_r_ghz", Kind::Number),
    ("cqad.delta_r_mhz", Kind::Number),
    ("cqad.g_mhz", Kind::Number),
    ("cqad.qubit_quality", Kind::Number),
    ("cqad.mech_damping_khz", Kind::Number),
    ("cqad.kappa_i_mhz", Kind::Number),
    ("cqad.kappa_e_mhz", Kind::Number),
    ("cqad.n_d_photons", Kind::Number),
    ("cqad.participation", Kind::Number),
    ("cqad.gap_nm", Kind::Number),
    ("cqad.x_zpf_fm", Kind::Number),
    ("cqad.detuning_mhz", Kind::Number),
    ("cqad.probe_start_mhz", Kind::Number),
    ("cqad.probe_stop_mhz", Kind::Number),
    ("cqad.probe_points", Kind::Integer),
    ("sweep.length_min_nm", Kind::Number),
    ("sweep.length_max_nm", Kind::Number),
    ("sweep.length_points", Kind::Integer),
    ("sweep.gap_min_sigma", Kind::Number),
    ("sweep.gap_max_sigma", Kind::Number),
    ("sweep.gap_points", Kind::Integer),
    ("sweep.convention", Kind::Text),
    ("sweep.max_occupancy", Kind::Number),
    ("sweep.min_eta_r", Kind::Number),
    ("sweep.min_omega_10_mhz", Kind::Number),
    ("oracle.grid_points", Kind::Integer),
    ("oracle.half_width_zpf", Kind::Number),
    ("oracle.part", Kind::Text),
    ("oracle.photon_truncation", Kind::Integer),
];

/// Keys every configuration file must set.
const REQUIRED: &[&str] = &[
    "material.young_modulus_gpa",
    "material.density_kg_m3",
    "cantilever.length_nm",
    "cantilever.width_nm",
    "cantilever.thickness_nm",
    "potential.epsilon_mev",
    "potential.sigma_angstrom",
];

#[derive(Debug, Clone, PartialEq)]
enum Value {
    Number(f64),
    Bool(bool),
    Text(String),
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Number(v) => write!(f, "{}", display_number(*v)),
            Value::Bool(b) => write!(f, "{b}"),
            Value::Text(s) => write!(f, "{s}"),
        }
    }
}

/// Shortest representation that parses back to the same f64.
fn display_number(v: f64) -> String {
    if v.fract() == 0.0 && v.abs() < 1e15 {
        format!("{}", v as i64)
    } else {
        format!("{v:?}")
    }
}

fn kind_of(key: &str) -> Option<Kind> {
    KEYS.iter().find(|(k, _)| *k == key).map(|&(_, kind)| kind)
}

fn stem(name: &str) -> &str {
    name.rsplit_once('_').map_or(name, |(s, _)| s)
}

/// Known key that differs from `key` only in its unit suffix.
fn suffix_candidate(key: &str) -> Option<&'static str> {
    let (section, name) = key.split_once('.')?;
    KEYS.iter().map(|&(k, _)| k).find(|known| {
        let (s, n) = known.split_once('.').unwrap_or_default();
        s == section
            && n.contains('_')
            && (n.strip_prefix(name).is_some_and(|r| r.starts_with('_')) || stem(n) == stem(name))
    })
}

/// Raw key/value pairs of a configuration file.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RawConfig {
    values: BTreeMap<String, Value>,
}

impl RawConfig {
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut values = BTreeMap::new();
        for (i, raw_line) in text.lines().enumerate() {
            let line = i + 1;
            let content = raw_line.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let (key, value) = content.split_once('=').ok_or_else(|| ConfigError::Parse {
                line,
                message: format!("expected `section.key = value`, got `{content}`"),
            })?;
            let key = key.trim();
            let value = value.trim();
            if !key.contains('.') {
                return Err(ConfigError::Parse {
                    line,
                    message: format!("key `{key}` has no section"),
                });
            }
            let kind = match kind_of(key) {
                Some(kind) => kind,
                None => {
                    return Err(match suffix_candidate(key) {
                        Some(expected) => ConfigError::UnitMismatch {
                            line,
                            key: key.to_string(),
                            expected: expected.to_string(),
                        },
                        None => ConfigError::UnknownKey {
                            line,
                            key: key.to_string(),
                        },
                    })
                }
            };
            let bad = |what: &str| ConfigError::Parse {
                line,
                message: format!("`{key}` expects {what}, got `{value}`"),
            };
            let parsed = match kind {
                Kind::Number => Value::Number(
                    value
                        .parse::<f64>()
                        .ok()
                        .filter(|v| v.is_finite())
                        .ok_or_else(|| bad("a finite number"))?,
                ),
                Kind::Integer => Value::Number(
                    value
                        .parse::<u64>()
                        .map_err(|_| bad("a non-negative integer"))? as f64,
                ),
                Kind::Bool => Value::Bool(value.parse::<bool>().map_err(|_| bad("true or false"))?),
                Kind::Text => Value::Text(value.to_string()),
            };
            if values.insert(key.to_string(), parsed).is_some() {
                return Err(ConfigError::Parse {
                    line,
                    message: format!("duplicate key `{key}`"),
                });
            }
        }
        Ok(Self { values })
    }

    fn number(&self, key: &str) -> Option<f64> {
        match self.values.get(key) {
            Some(Value::Number(v)) => Some(*v),
            _ => None,
        }
    }

    fn flag(&self, key: &str) -> Option<bool> {
        match self.values.get(key) {
            Some(Value::Bool(v)) => Some(*v),
            _ => None,
        }
    }

    fn text(&self, key: &str) -> Option<&str> {
        match self.values.get(key) {
            Some(Value::Text(v)) => Some(v),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BiasConfig {
    pub auto: bool,
    /// Explicit gap (m) when `auto` is false.
    pub gap: Option<f64>,
    pub convention: StiffnessConvention,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpectrumConfig {
    pub temperature: f64,
    pub n_max: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CqadSection {
    /// Qubit frequency; `None` takes ω₁₀ of the design.
    pub omega_q: Option<f64>,
    pub omega_m: f64,
    pub omega_r: f64,
    pub delta_r: f64,
    pub g: f64,
    pub qubit_quality: f64,
    pub mech_damping: f64,
    pub kappa_i: f64,
    pub kappa_e: f64,
    pub n_d: f64,
    pub participation: f64,
    pub gap: f64,
    pub x_zpf: f64,
    /// Qubit–readout detuning for χ and J; `None` uses ω̃_m − ω_q.
    pub detuning: Option<f64>,
    pub probe_start: f64,
    pub probe_stop: f64,
    pub probe_points: usize,
}

impl CqadSection {
    /// Full chain parameters for a qubit at `omega_q_design` unless one is
    /// configured.
    pub fn resolve(&self, omega_q_design: f64) -> CqadConfig {
        let omega_q = self.omega_q.unwrap_or(omega_q_design);
        CqadConfig {
            omega_q,
            omega_m: self.omega_m,
            omega_r: self.omega_r,
            omega_d: self.omega_r - self.delta_r,
            g: self.g,
            qubit_damping: omega_q / self.qubit_quality,
            mech_damping: self.mech_damping,
            kappa_i: self.kappa_i,
            kappa_e: self.kappa_e,
            n_d: self.n_d,
            participation: self.participation,
            gap: self.gap,
            x_zpf: self.x_zpf,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepSection {
    pub length_min: f64,
    pub length_max: f64,
    pub length_points: usize,
    pub gap_min_sigma: f64,
    pub gap_max_sigma: f64,
    pub gap_points: usize,
    pub convention: StiffnessConvention,
    pub constraints: DesignConstraints,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OracleSection {
    pub grid: GridSpec,
    pub part: PotentialPart,
    pub photon_truncation: usize,
}

/// Fully resolved configuration in SI units.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RunConfig {
    pub material: MaterialParams,
    pub geometry: CantileverGeometry,
    pub potential: LennardJonesParams,
    pub bias: BiasConfig,
    pub spectrum: SpectrumConfig,
    pub cqad: CqadSection,
    pub sweep: SweepSection,
    pub oracle: OracleSection,
}

impl Default for RunConfig {
    /// The headline design: silicon (495, 10, 12) nm cantilever biased at
    /// the inflection point, 8 mK.
    fn default() -> Self {
        let cqad = CqadConfig::default();
        let grid = GridSpec::default();
        Self {
            material: MaterialParams::silicon(),
            geometry: Design::headline().geometry,
            potential: LennardJonesParams::silicon(),
            bias: BiasConfig {
                auto: true,
                gap: None,
                convention: StiffnessConvention::Signed,
            },
            spectrum: SpectrumConfig {
                temperature: 8.0 * MILLIKELVIN,
                n_max: crate::spectrum::DEFAULT_N_MAX,
            },
            cqad: CqadSection {
                omega_q: None,
                omega_m: cqad.omega_m,
                omega_r: cqad.omega_r,
                delta_r: cqad.omega_m,
                g: cqad.g,
                qubit_quality: 1e10,
                mech_damping: cqad.mech_damping,
                kappa_i: cqad.kappa_i,
                kappa_e: cqad.kappa_e,
                n_d: cqad.n_d,
                participation: cqad.participation,
                gap: cqad.gap,
                x_zpf: cqad.x_zpf,
                detuning: None,
                probe_start: mhz_to_angular(55.0),
                probe_stop: mhz_to_angular(75.0),
                probe_points: 2001,
            },
            sweep: SweepSection {
                length_min: 200.0 * NANOMETER,
                length_max: 800.0 * NANOMETER,
                length_points: 100,
                gap_min_sigma: 1.15,
                gap_max_sigma: 2.0,
                gap_points: 100,
                convention: StiffnessConvention::Magnitude,
                constraints: DesignConstraints {
                    max_occupancy: 2.3,
                    min_relative_anharmonicity: 0.0,
                    min_omega_10: None,
                },
            },
            oracle: OracleSection {
                grid,
                part: PotentialPart::Full,
                photon_truncation: 15,
            },
        }
    }
}

fn parse_convention(key: &str, s: &str) -> Result<StiffnessConvention, ConfigError> {
    StiffnessConvention::parse(s).ok_or_else(|| {
        ConfigError::Invalid(format!(
            "`{key}` must be `signed` or `magnitude`, got `{s}`"
        ))
    })
}

fn parse_part(s: &str) -> Result<PotentialPart, ConfigError> {
    match s {
        "full" => Ok(PotentialPart::Full),
        "even" => Ok(PotentialPart::EvenPart),
        _ => Err(ConfigError::Invalid(format!(
            "`oracle.part` must be `full` or `even`, got `{s}`"
        ))),
    }
}

fn is_count(key: &str) -> bool {
    key.ends_with("_points") || key.ends_with("n_max") || key.ends_with("photon_truncation")
}

fn part_name(p: PotentialPart) -> &'static str {
    match p {
        PotentialPart::Full => "full",
        PotentialPart::EvenPart => "even",
    }
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        Self::from_raw(&RawConfig::parse(text)?)
    }

    pub fn from_raw(raw: &RawConfig) -> Result<Self, ConfigError> {
        for key in REQUIRED {
            if !raw.values.contains_key(*key) {
                return Err(ConfigError::Missing((*key).to_string()));
            }
        }
        let mut cfg = Self::default();
        let num = |key: &str, scale: f64, into: &mut f64| {
            if let Some(v) = raw.number(key) {
                *into = v * scale;
            }
        };
        let count = |key: &str, into: &mut usize| {
            if let Some(v) = raw.number(key) {
                *into = v as usize;
            }
        };

        num(
            "material.young_modulus_gpa",
            GIGAPASCAL,
            &mut cfg.material.young_modulus,
        );
        num("material.density_kg_m3", 1.0, &mut cfg.material.density);
        num("cantilever.length_nm", NANOMETER, &mut cfg.geometry.length);
        num("cantilever.width_nm", NANOMETER, &mut cfg.geometry.width);
        num(
            "cantilever.thickness_nm",
            NANOMETER,
            &mut cfg.geometry.thickness,
        );
        if let Some(v) = raw.number("potential.epsilon_mev") {
            cfg.potential.epsilon = crate::units::mev_to_joule(v);
        }
        num(
            "potential.sigma_angstrom",
            ANGSTROM,
            &mut cfg.potential.sigma,
        );

        let gap_a = raw.number("bias.gap_angstrom").map(|v| v * ANGSTROM);
        let gap_s = raw
            .number("bias.gap_sigma")
            .map(|v| v * cfg.potential.sigma);
        let explicit = match (gap_a, gap_s) {
            (Some(_), Some(_)) => {
                return Err(ConfigError::Invalid(
                    "set only one of `bias.gap_angstrom` and `bias.gap_sigma`".into(),
                ))
            }
            (a, s) => a.or(s),
        };
        cfg.bias.auto = raw.flag("bias.auto").unwrap_or(explicit.is_none());
        match (cfg.bias.auto, explicit) {
            (true, Some(_)) => {
                return Err(ConfigError::Invalid(
                    "`bias.auto = true` conflicts with an explicit bias gap".into(),
                ))
            }
            (false, None) => return Err(ConfigError::Missing("bias.gap_angstrom".into())),
            _ => cfg.bias.gap = explicit,
        }
        if let Some(s) = raw.text("bias.convention") {
            cfg.bias.convention = parse_convention("bias.convention", s)?;
        }

        num(
            "spectrum.temperature_mk",
            MILLIKELVIN,
            &mut cfg.spectrum.temperature,
        );
        count("spectrum.n_max", &mut cfg.spectrum.n_max);

        let c = &mut cfg.cqad;
        c.omega_q = raw.number("cqad.omega_q_mhz").map(mhz_to_angular);
        if let Some(v) = raw.number("cqad.omega_m_mhz") {
            c.omega_m = mhz_to_angular(v);
            // keep the drive on the red sideband unless told otherwise
            c.delta_r = c.omega_m;
        }
        if let Some(v) = raw.number("cqad.omega_r_ghz") {
            c.omega_r = ghz_to_angular(v);
        }
        for (key, into) in [
            ("cqad.delta_r_mhz", &mut c.delta_r),
            ("cqad.g_mhz", &mut c.g),
            ("cqad.kappa_i_mhz", &mut c.kappa_i),
            ("cqad.kappa_e_mhz", &mut c.kappa_e),
            ("cqad.probe_start_mhz", &mut c.probe_start),
            ("cqad.probe_stop_mhz", &mut c.probe_stop),
        ] {
            if let Some(v) = raw.number(key) {
                *into = mhz_to_angular(v);
            }
        }
        if let Some(v) = raw.number("cqad.mech_damping_khz") {
            c.mech_damping = khz_to_angular(v);
        }
        num("cqad.qubit_quality", 1.0, &mut c.qubit_quality);
        num("cqad.n_d_photons", 1.0, &mut c.n_d);
        num("cqad.participation", 1.0, &mut c.participation);
        num("cqad.gap_nm", NANOMETER, &mut c.gap);
        num("cqad.x_zpf_fm", FEMTOMETER, &mut c.x_zpf);
        c.detuning = raw.number("cqad.detuning_mhz").map(mhz_to_angular);
        count("cqad.probe_points", &mut c.probe_points);

        let s = &mut cfg.sweep;
        num("sweep.length_min_nm", NANOMETER, &mut s.length_min);
        num("sweep.length_max_nm", NANOMETER, &mut s.length_max);
        count("sweep.length_points", &mut s.length_points);
        num("sweep.gap_min_sigma", 1.0, &mut s.gap_min_sigma);
        num("sweep.gap_max_sigma", 1.0, &mut s.gap_max_sigma);
        count("sweep.gap_points", &mut s.gap_points);
        if let Some(v) = raw.text("sweep.convention") {
            s.convention = parse_convention("sweep.convention", v)?;
        }
        num("sweep.max_occupancy", 1.0, &mut s.constraints.max_occupancy);
        num(
            "sweep.min_eta_r",
            1.0,
            &mut s.constraints.min_relative_anharmonicity,
        );
        if let Some(v) = raw.number("sweep.min_omega_10_mhz") {
            s.constraints.min_omega_10 = Some(mhz_to_angular(v));
        }

        count("oracle.grid_points", &mut cfg.oracle.grid.points);
        num(
            "oracle.half_width_zpf",
            1.0,
            &mut cfg.oracle.grid.half_width,
        );
        if let Some(v) = raw.text("oracle.part") {
            cfg.oracle.part = parse_part(v)?;
        }
        count(
            "oracle.photon_truncation",
            &mut cfg.oracle.photon_truncation,
        );

        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let invalid = |e: crate::Error| ConfigError::Invalid(e.to_string());
        MaterialParams::new(self.material.young_modulus, self.material.density).map_err(invalid)?;
        CantileverGeometry::new(
            self.geometry.length,
            self.geometry.width,
            self.geometry.thickness,
        )
        .map_err(invalid)?;
        LennardJonesParams::new(self.potential.epsilon, self.potential.sigma).map_err(invalid)?;
        if !(self.spectrum.temperature >= 0.0) {
            return Err(ConfigError::Invalid("temperature must be >= 0".into()));
        }
        if self.spectrum.n_max < 2 {
            return Err(ConfigError::Invalid("`spectrum.n_max` must be >= 2".into()));
        }
        if !(self.cqad.qubit_quality > 0.0) {
            return Err(ConfigError::Invalid(
                "`cqad.qubit_quality` must be > 0".into(),
            ));
        }
        if self.cqad.probe_points == 0 || !(self.cqad.probe_stop > self.cqad.probe_start) {
            return Err(ConfigError::Invalid(
                "cqad probe window must be non-empty and increasing".into(),
            ));
        }
        self.cqad.resolve(1.0).validate().map_err(invalid)?;
        self.sweep_spec().validate().map_err(invalid)?;
        self.sweep.constraints.validate().map_err(invalid)?;
        self.oracle.grid.validate().map_err(invalid)?;
        if self.oracle.photon_truncation < 10 {
            return Err(ConfigError::Invalid(
                "`oracle.photon_truncation` must be >= 10".into(),
            ));
        }
        Ok(())
    }

    pub fn design(&self) -> Design {
        Design {
            geometry: self.geometry,
            material: self.material,
            potential: self.potential,
            gap: if self.bias.auto { None } else { self.bias.gap },
            temperature: self.spectrum.temperature,
            convention: self.bias.convention,
        }
    }

    pub fn sweep_spec(&self) -> SweepSpec {
        let s = &self.sweep;
        SweepSpec {
            lengths: linspace(
                s.length_min / NANOMETER,
                s.length_max / NANOMETER,
                s.length_points,
            )
            .into_iter()
            .map(|l| l * NANOMETER)
            .collect(),
            gaps_sigma: linspace(s.gap_min_sigma, s.gap_max_sigma, s.gap_points),
            width: self.geometry.width,
            thickness: self.geometry.thickness,
            material: self.material,
            potential: self.potential,
            temperature: self.spectrum.temperature,
            convention: s.convention,
        }
    }

    fn entries(&self) -> Vec<(&'static str, Value)> {
        use Value::{Bool, Number as N, Text};
        let c = &self.cqad;
        let s = &self.sweep;
        let mut out = vec![
            (
                "material.young_modulus_gpa",
                N(self.material.young_modulus / GIGAPASCAL),
            ),
            ("material.density_kg_m3", N(self.material.density)),
            ("cantilever.length_nm", N(self.geometry.length / NANOMETER)),
            ("cantilever.width_nm", N(self.geometry.width / NANOMETER)),
            (
                "cantilever.thickness_nm",
                N(self.geometry.thickness / NANOMETER),
            ),
            (
                "potential.epsilon_mev",
                N(joule_to_mev(self.potential.epsilon)),
            ),
            (
                "potential.sigma_angstrom",
                N(self.potential.sigma / ANGSTROM),
            ),
            ("bias.auto", Bool(self.bias.auto)),
        ];
        if let Some(g) = self.bias.gap {
            out.push(("bias.gap_angstrom", N(g / ANGSTROM)));
        }
        out.extend([
            (
                "bias.convention",
                Text(self.bias.convention.as_str().into()),
            ),
            (
                "spectrum.temperature_mk",
                N(self.spectrum.temperature / MILLIKELVIN),
            ),
            ("spectrum.n_max", N(self.spectrum.n_max as f64)),
        ]);
        if let Some(w) = c.omega_q {
            out.push(("cqad.omega_q_mhz", N(angular_to_mhz(w))));
        }
        out.extend([
            ("cqad.omega_m_mhz", N(angular_to_mhz(c.omega_m))),
            ("cqad.omega_r_ghz", N(angular_to_mhz(c.omega_r) / 1e3)),
            ("cqad.delta_r_mhz", N(angular_to_mhz(c.delta_r))),
            ("cqad.g_mhz", N(angular_to_mhz(c.g))),
            ("cqad.qubit_quality", N(c.qubit_quality)),
            (
                "cqad.mech_damping_khz",
                N(angular_to_mhz(c.mech_damping) * 1e3),
            ),
            ("cqad.kappa_i_mhz", N(angular_to_mhz(c.kappa_i))),
            ("cqad.kappa_e_mhz", N(angular_to_mhz(c.kappa_e))),
            ("cqad.n_d_photons", N(c.n_d)),
            ("cqad.participation", N(c.participation)),
            ("cqad.gap_nm", N(c.gap / NANOMETER)),
            ("cqad.x_zpf_fm", N(c.x_zpf / FEMTOMETER)),
        ]);
        if let Some(d) = c.detuning {
            out.push(("cqad.detuning_mhz", N(angular_to_mhz(d))));
        }
        out.extend([
            ("cqad.probe_start_mhz", N(angular_to_mhz(c.probe_start))),
            ("cqad.probe_stop_mhz", N(angular_to_mhz(c.probe_stop))),
            ("cqad.probe_points", N(c.probe_points as f64)),
            ("sweep.length_min_nm", N(s.length_min / NANOMETER)),
            ("sweep.length_max_nm", N(s.length_max / NANOMETER)),
            ("sweep.length_points", N(s.length_points as f64)),
            ("sweep.gap_min_sigma", N(s.gap_min_sigma)),
            ("sweep.gap_max_sigma", N(s.gap_max_sigma)),
            ("sweep.gap_points", N(s.gap_points as f64)),
            ("sweep.convention", Text(s.convention.as_str().into())),
            ("sweep.max_occupancy", N(s.constraints.max_occupancy)),
            (
                "sweep.min_eta_r",
                N(s.constraints.min_relative_anharmonicity),
            ),
        ]);
        if let Some(w) = s.constraints.min_omega_10 {
            out.push(("sweep.min_omega_10_mhz", N(angular_to_mhz(w))));
        }
        out.extend([
            ("oracle.grid_points", N(self.oracle.grid.points as f64)),
            ("oracle.half_width_zpf", N(self.oracle.grid.half_width)),
            ("oracle.part", Text(part_name(self.oracle.part).into())),
            (
                "oracle.photon_truncation",
                N(self.oracle.photon_truncation as f64),
            ),
        ]);
        out
    }

    /// Every resolved key in display units, sorted by key.
    pub fn echo(&self) -> BTreeMap<&'static str, serde_json::Value> {
        self.entries()
            .into_iter()
            .map(|(k, v)| {
                let j = match v {
                    Value::Number(x) if is_count(k) => serde_json::json!(x as u64),
                    Value::Number(x) => serde_json::json!(x),
                    Value::Bool(b) => serde_json::json!(b),
                    Value::Text(s) => serde_json::json!(s),
                };
                (k, j)
            })
            .collect()
    }

    /// The resolved configuration in the file format it was read from.
    pub fn to_config_text(&self) -> String {
        let mut out = String::new();
        for (k, v) in self.entries() {
            out.push_str(&format!("{k} = {v}\n"));
        }
        out
    }
}
