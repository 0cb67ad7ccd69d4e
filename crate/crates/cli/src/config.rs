//! Scenario files: `[section]` headers followed by `key = value unit` lines.
//!
//! Parsing validates every key against a fixed schema. Values keep the text
//! they were written with, so serialization reproduces the file's content in
//! canonical layout and a second parse yields an equal config.

use std::fmt;

use nefluct::units::{BOHR_RADIUS, JULIAN_YEAR, SI};
use thiserror::Error;

/// Physical dimension of a quantity-valued key.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dimension {
    Length,
    Temperature,
    Energy,
    NumberDensity,
    MassDensity,
    Mass,
    Velocity,
    Time,
    Volume,
    MagneticField,
}

impl Dimension {
    pub const ALL: [Dimension; 10] = [
        Dimension::Length,
        Dimension::Temperature,
        Dimension::Energy,
        Dimension::NumberDensity,
        Dimension::MassDensity,
        Dimension::Mass,
        Dimension::Velocity,
        Dimension::Time,
        Dimension::Volume,
        Dimension::MagneticField,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Dimension::Length => "length",
            Dimension::Temperature => "temperature",
            Dimension::Energy => "energy",
            Dimension::NumberDensity => "number density",
            Dimension::MassDensity => "mass density",
            Dimension::Mass => "mass",
            Dimension::Velocity => "velocity",
            Dimension::Time => "time",
            Dimension::Volume => "volume",
            Dimension::MagneticField => "magnetic field",
        }
    }

    /// Accepted unit symbols and their factor to SI (eV for energies).
    pub fn units(self) -> &'static [(&'static str, f64)] {
        const A0_CUBED: f64 = BOHR_RADIUS * BOHR_RADIUS * BOHR_RADIUS;
        match self {
            Dimension::Length => &[
                ("m", 1.0),
                ("cm", 1e-2),
                ("mm", 1e-3),
                ("um", 1e-6),
                ("µm", 1e-6),
                ("μm", 1e-6),
                ("nm", 1e-9),
                ("pm", 1e-12),
                ("a0", BOHR_RADIUS),
            ],
            Dimension::Temperature => &[("K", 1.0), ("mK", 1e-3)],
            Dimension::Energy => &[("eV", 1.0), ("meV", 1e-3), ("keV", 1e3)],
            Dimension::NumberDensity => &[("m^-3", 1.0), ("cm^-3", 1e6), ("nm^-3", 1e27)],
            Dimension::MassDensity => &[("kg/m^3", 1.0), ("g/cm^3", 1e3)],
            Dimension::Mass => &[("kg", 1.0), ("g", 1e-3), ("Da", SI.dalton), ("u", SI.dalton)],
            Dimension::Velocity => &[("m/s", 1.0), ("km/s", 1e3), ("c", SI.c)],
            Dimension::Time => &[("s", 1.0), ("ms", 1e-3), ("us", 1e-6), ("ns", 1e-9), ("yr", JULIAN_YEAR)],
            Dimension::Volume => &[("m^3", 1.0), ("cm^3", 1e-6), ("nm^3", 1e-27), ("a0^3", A0_CUBED)],
            Dimension::MagneticField => &[("T", 1.0), ("mT", 1e-3)],
        }
    }

    fn factor(self, unit: &str) -> Option<f64> {
        self.units().iter().find(|(u, _)| *u == unit).map(|&(_, f)| f)
    }
}

impl fmt::Display for Dimension {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A number with a unit, converted to SI (eV for energies).
#[derive(Debug, Clone, PartialEq)]
pub struct Quantity {
    pub value: f64,
    pub unit: String,
    pub dimension: Dimension,
    pub si: f64,
}

/// Why a `value unit` pair was rejected.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum QuantityError {
    #[error("`{0}` is not a finite number")]
    NotANumber(String),
    #[error("a unit is required{}", expected.map(|d| format!(" ({d})")).unwrap_or_default())]
    MissingUnit { expected: Option<Dimension> },
    #[error("unknown unit `{unit}`{}", nearest.as_ref().map(|n| format!(", did you mean `{n}`?")).unwrap_or_default())]
    UnknownUnit { unit: String, nearest: Option<String> },
    #[error("unit `{unit}` is a {found}, expected a {expected}")]
    WrongDimension { unit: String, found: Dimension, expected: Dimension },
    #[error("expected `value unit`, found `{0}`")]
    Malformed(String),
    #[error("`{value} {unit}` overflows in SI units")]
    OutOfRange { value: String, unit: String },
}

fn parse_finite(text: &str) -> Option<f64> {
    text.parse::<f64>().ok().filter(|v| v.is_finite())
}

fn resolve_unit(unit: &str, expected: Option<Dimension>) -> Result<(Dimension, f64), QuantityError> {
    for d in Dimension::ALL {
        if let Some(f) = d.factor(unit) {
            return match expected {
                Some(e) if e != d => Err(QuantityError::WrongDimension {
                    unit: unit.to_string(),
                    found: d,
                    expected: e,
                }),
                _ => Ok((d, f)),
            };
        }
    }
    let pool: Vec<&str> = match expected {
        Some(d) => d.units().iter().map(|(u, _)| *u).collect(),
        None => Dimension::ALL.iter().flat_map(|d| d.units().iter().map(|(u, _)| *u)).collect(),
    };
    Err(QuantityError::UnknownUnit {
        unit: unit.to_string(),
        nearest: nearest(unit, pool.iter().copied()).map(str::to_string),
    })
}

/// Parse `"<number> <unit>"`, e.g. `"100 nm"`.
pub fn parse_quantity(text: &str) -> Result<Quantity, QuantityError> {
    parse_quantity_as(text, None)
}

/// As [`parse_quantity`], insisting on a dimension when one is given.
pub fn parse_quantity_as(text: &str, expected: Option<Dimension>) -> Result<Quantity, QuantityError> {
    let mut tokens = text.split_whitespace();
    let (Some(num), unit, None) = (tokens.next(), tokens.next(), tokens.next()) else {
        return Err(QuantityError::Malformed(text.trim().to_string()));
    };
    let value = parse_finite(num).ok_or_else(|| QuantityError::NotANumber(num.to_string()))?;
    let unit = unit.ok_or(QuantityError::MissingUnit { expected })?;
    let (dimension, factor) = resolve_unit(unit, expected)?;
    let si = value * factor;
    if !si.is_finite() {
        return Err(QuantityError::OutOfRange { value: num.to_string(), unit: unit.to_string() });
    }
    Ok(Quantity { value, unit: unit.to_string(), dimension, si })
}

/// Closest candidate by normalized Damerau–Levenshtein similarity.
pub(crate) fn nearest<'a>(word: &str, candidates: impl IntoIterator<Item = &'a str>) -> Option<&'a str> {
    candidates
        .into_iter()
        .map(|c| (strsim::normalized_damerau_levenshtein(word, c), c))
        .max_by(|a, b| a.0.total_cmp(&b.0))
        .map(|(_, c)| c)
}

/// Type of a key's value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Kind {
    Quantity(Dimension),
    /// A quantity of any dimension, or a bare number.
    FreeQuantity,
    Number,
    Integer,
    Bool,
    Choice(&'static [&'static str]),
    /// The rest of the line, verbatim.
    Text,
    IntegerList,
}

impl Kind {
    fn describe(&self) -> String {
        match self {
            Kind::Quantity(d) => format!("a {d} with unit"),
            Kind::FreeQuantity => "a number, optionally with unit".into(),
            Kind::Number => "a number".into(),
            Kind::Integer => "an integer".into(),
            Kind::Bool => "`true` or `false`".into(),
            Kind::Choice(c) => format!("one of {}", c.join(", ")),
            Kind::Text => "text".into(),
            Kind::IntegerList => "a comma-separated list of integers".into(),
        }
    }
}

/// A typed value.
#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Quantity(Quantity),
    Number(f64),
    Integer(i128),
    Bool(bool),
    Word(String),
    Text(String),
    IntegerList(Vec<i128>),
}

pub struct KeySpec {
    pub name: &'static str,
    pub kind: Kind,
}

const fn key(name: &'static str, kind: Kind) -> KeySpec {
    KeySpec { name, kind }
}

use Dimension as D;

pub const MATERIAL_LABELS: [&str; 4] = ["A", "B", "plate", "particle"];
pub const MATERIAL_MODELS: [&str; 4] = ["drude", "dielectric", "monomial", "gyrotropic"];
pub const SHAPES: [&str; 3] = ["janus", "wrench", "flags"];
pub const TARGETS: [&str; 6] = ["friction", "eh", "ness", "propel", "torque", "relax"];
pub const SWEEP_VARIABLES: [&str; 5] = ["velocity", "env_temperature", "body_temperature", "omega_a", "u0"];
pub const MECHANISMS: [&str; 4] = ["image_lag", "radiation_reaction", "intrinsic_dissipation", "all"];

static MATERIAL_KEYS: [KeySpec; 12] = [
    key("preset", Kind::Text),
    key("model", Kind::Choice(&MATERIAL_MODELS)),
    key("plasma_freq", Kind::Quantity(D::Energy)),
    key("damping", Kind::Quantity(D::Energy)),
    key("atom_density", Kind::Quantity(D::NumberDensity)),
    key("mass_density", Kind::Quantity(D::MassDensity)),
    key("chi0", Kind::Number),
    key("exponent", Kind::Integer),
    key("amplitude", Kind::Number),
    key("cyclotron_freq", Kind::Quantity(D::Energy)),
    key("field", Kind::Quantity(D::MagneticField)),
    key("radius", Kind::Quantity(D::Length)),
];

static GEOMETRY_KEYS: [KeySpec; 9] = [
    key("preset", Kind::Text),
    key("shape", Kind::Choice(&SHAPES)),
    key("radius", Kind::Quantity(D::Length)),
    key("a", Kind::Quantity(D::Length)),
    key("b", Kind::Quantity(D::Length)),
    key("r_cross", Kind::Quantity(D::Length)),
    key("w", Kind::Quantity(D::Length)),
    key("h", Kind::Quantity(D::Length)),
    key("t", Kind::Quantity(D::Length)),
];

static THERMAL_KEYS: [KeySpec; 2] = [
    key("env", Kind::Quantity(D::Temperature)),
    key("body", Kind::Quantity(D::Temperature)),
];

static QUADRATURE_KEYS: [KeySpec; 8] = [
    key("rel_tol", Kind::Number),
    key("abs_tol", Kind::Number),
    key("max_subdivisions", Kind::Integer),
    key("phi_switch", Kind::Number),
    key("phi_terms", Kind::Integer),
    key("mc_samples", Kind::Integer),
    key("seed", Kind::Integer),
    key("allow_mc", Kind::Bool),
];

static SWEEP_KEYS: [KeySpec; 6] = [
    key("target", Kind::Choice(&TARGETS)),
    key("variable", Kind::Choice(&SWEEP_VARIABLES)),
    key("from", Kind::FreeQuantity),
    key("to", Kind::FreeQuantity),
    key("points", Kind::Integer),
    key("scale", Kind::Choice(&["linear", "log"])),
];

static PARTICLE_KEYS: [KeySpec; 6] = [
    key("alpha0", Kind::Quantity(D::Volume)),
    key("mass", Kind::Quantity(D::Mass)),
    key("separation", Kind::Quantity(D::Length)),
    key("velocity", Kind::Quantity(D::Velocity)),
    key("mechanism", Kind::Choice(&MECHANISMS)),
    key("exponents", Kind::IntegerList),
];

static RELAX_KEYS: [KeySpec; 6] = [
    key("u0", Kind::Number),
    key("u_end", Kind::Number),
    key("steps", Kind::Integer),
    key("drive", Kind::Choice(&["closed", "spectral"])),
    key("dielectric_density", Kind::Quantity(D::MassDensity)),
    key("debye_temperature", Kind::Quantity(D::Temperature)),
];

const PLAIN_SECTIONS: [&str; 6] = ["geometry", "thermal", "quadrature", "sweep", "particle", "relax"];

fn all_section_names() -> impl Iterator<Item = String> {
    MATERIAL_LABELS
        .iter()
        .map(|l| format!("material.{l}"))
        .chain(PLAIN_SECTIONS.iter().map(|s| s.to_string()))
}

/// Key schema of a section, or `None` if the section is unknown.
pub fn section_schema(name: &str) -> Option<&'static [KeySpec]> {
    if let Some(label) = name.strip_prefix("material.") {
        return MATERIAL_LABELS.contains(&label).then_some(&MATERIAL_KEYS[..]);
    }
    Some(match name {
        "geometry" => &GEOMETRY_KEYS[..],
        "thermal" => &THERMAL_KEYS,
        "quadrature" => &QUADRATURE_KEYS,
        "sweep" => &SWEEP_KEYS,
        "particle" => &PARTICLE_KEYS,
        "relax" => &RELAX_KEYS,
        _ => return None,
    })
}

/// 1-based line and column (in characters).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Position {
    pub line: usize,
    pub column: usize,
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}", self.line, self.column)
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigErrorKind {
    #[error("{0}")]
    Syntax(String),
    #[error("unknown section `[{name}]`, nearest valid section is `[{nearest}]`")]
    UnknownSection { name: String, nearest: String },
    #[error("duplicate section `[{0}]`")]
    DuplicateSection(String),
    #[error("unknown key `{key}`, nearest valid key is `{nearest}`")]
    UnknownKey { key: String, nearest: String },
    #[error("duplicate key `{0}`")]
    DuplicateKey(String),
    #[error("`{key}` requires a unit ({dimension}), e.g. `{example}`")]
    UnitRequired { key: String, dimension: Dimension, example: String },
    #[error("`{key}` takes no unit, found `{unit}`")]
    UnexpectedUnit { key: String, unit: String },
    #[error("`{key}`: {source}")]
    BadQuantity { key: String, source: QuantityError },
    #[error("`{key}` expects {expected}, found `{found}`")]
    TypeMismatch { key: String, expected: String, found: String },
    #[error("missing key `{0}`")]
    MissingKey(String),
    #[error("missing section `[{0}]`")]
    MissingSection(String),
    #[error("{0}")]
    Invalid(String),
}

/// A configuration diagnostic: where, which section and key, and why.
#[derive(Debug, Clone, PartialEq, Error)]
pub struct ConfigError {
    pub position: Option<Position>,
    pub section: Option<String>,
    pub kind: ConfigErrorKind,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(p) = self.position {
            write!(f, "{p}: ")?;
        }
        if let Some(s) = &self.section {
            write!(f, "[{s}] ")?;
        }
        write!(f, "{}", self.kind)
    }
}

impl ConfigError {
    pub fn new(position: Option<Position>, section: Option<&str>, kind: ConfigErrorKind) -> Self {
        ConfigError {
            position,
            section: section.map(str::to_string),
            kind,
        }
    }

    pub fn missing_key(section: &str, key: &str) -> Self {
        Self::new(None, Some(section), ConfigErrorKind::MissingKey(key.to_string()))
    }

    pub fn missing_section(section: &str) -> Self {
        Self::new(None, None, ConfigErrorKind::MissingSection(section.to_string()))
    }
}

/// One `key = value unit` line.
#[derive(Debug, Clone)]
pub struct Entry {
    pub key: String,
    /// The value as written, without the unit.
    pub raw: String,
    pub unit: Option<String>,
    pub value: Value,
    pub position: Position,
}

impl PartialEq for Entry {
    fn eq(&self, other: &Self) -> bool {
        self.key == other.key && self.raw == other.raw && self.unit == other.unit
    }
}

impl Entry {
    /// Diagnostic attached to this entry.
    pub fn error(&self, section: &str, reason: impl Into<String>) -> ConfigError {
        ConfigError::new(
            Some(self.position),
            Some(section),
            ConfigErrorKind::Invalid(format!("`{}`: {}", self.key, reason.into())),
        )
    }
}

#[derive(Debug, Clone)]
pub struct Section {
    pub name: String,
    pub entries: Vec<Entry>,
    pub position: Position,
}

impl PartialEq for Section {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name && self.entries == other.entries
    }
}

impl Section {
    pub fn get(&self, key: &str) -> Option<&Entry> {
        self.entries.iter().find(|e| e.key == key)
    }
}

/// A fully validated scenario file.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ScenarioConfig {
    pub sections: Vec<Section>,
}

fn col(line: &str, byte: usize) -> usize {
    line[..byte].chars().count() + 1
}

fn check_value(
    section: &str,
    key: &KeySpec,
    rest: &str,
    line: &str,
    rest_at: usize,
    line_no: usize,
) -> Result<(String, Option<String>, Value), ConfigError> {
    let at = |byte: usize| Some(Position { line: line_no, column: col(line, byte) });
    let err = |byte: usize, kind| ConfigError::new(at(byte), Some(section), kind);
    let name = key.name.to_string();
    let mismatch = |found: &str| ConfigErrorKind::TypeMismatch {
        key: name.clone(),
        expected: key.kind.describe(),
        found: found.to_string(),
    };
    if rest.is_empty() {
        return Err(err(rest_at, ConfigErrorKind::Syntax(format!("`{}` has no value", key.name))));
    }
    match key.kind {
        Kind::Text => return Ok((rest.to_string(), None, Value::Text(rest.to_string()))),
        Kind::IntegerList => {
            let items: Option<Vec<i128>> = rest.split(',').map(|s| s.trim().parse::<i128>().ok()).collect();
            return match items {
                Some(v) => Ok((rest.to_string(), None, Value::IntegerList(v))),
                None => Err(err(rest_at, mismatch(rest))),
            };
        }
        _ => {}
    }
    // value token, then an optional unit token
    let value_end = rest.find(char::is_whitespace).unwrap_or(rest.len());
    let raw = &rest[..value_end];
    let tail = rest[value_end..].trim_start();
    let unit_at = rest_at + rest.len() - tail.len();
    let unit = if tail.is_empty() {
        None
    } else {
        if tail.contains(char::is_whitespace) {
            let extra = tail.split_whitespace().nth(1).unwrap_or_default();
            let extra_at = unit_at + tail.find(extra).unwrap_or(0);
            return Err(err(extra_at, ConfigErrorKind::Syntax(format!("unexpected `{extra}` after unit"))));
        }
        Some(tail.to_string())
    };
    let no_unit = |v: Value| match &unit {
        Some(u) => Err(err(
            unit_at,
            ConfigErrorKind::UnexpectedUnit { key: name.clone(), unit: u.clone() },
        )),
        None => Ok((raw.to_string(), None, v)),
    };
    match key.kind {
        Kind::Quantity(dim) => {
            let Some(u) = &unit else {
                if parse_finite(raw).is_none() {
                    return Err(err(rest_at, mismatch(raw)));
                }
                return Err(err(
                    rest_at + raw.len(),
                    ConfigErrorKind::UnitRequired {
                        key: name.clone(),
                        dimension: dim,
                        example: format!("{raw} {}", dim.units()[0].0),
                    },
                ));
            };
            let q = parse_quantity_as(&format!("{raw} {u}"), Some(dim)).map_err(|e| {
                let pos = if matches!(e, QuantityError::NotANumber(_)) { rest_at } else { unit_at };
                err(pos, ConfigErrorKind::BadQuantity { key: name.clone(), source: e })
            })?;
            Ok((raw.to_string(), unit, Value::Quantity(q)))
        }
        Kind::FreeQuantity => match &unit {
            None => parse_finite(raw)
                .map(|v| (raw.to_string(), None, Value::Number(v)))
                .ok_or_else(|| err(rest_at, mismatch(raw))),
            Some(u) => {
                let q = parse_quantity(&format!("{raw} {u}")).map_err(|e| {
                    let pos = if matches!(e, QuantityError::NotANumber(_)) { rest_at } else { unit_at };
                    err(pos, ConfigErrorKind::BadQuantity { key: name.clone(), source: e })
                })?;
                Ok((raw.to_string(), unit, Value::Quantity(q)))
            }
        },
        Kind::Number => match parse_finite(raw) {
            Some(v) => no_unit(Value::Number(v)),
            None => Err(err(rest_at, mismatch(raw))),
        },
        Kind::Integer => match raw.parse::<i128>() {
            Ok(v) => no_unit(Value::Integer(v)),
            Err(_) => Err(err(rest_at, mismatch(raw))),
        },
        Kind::Bool => match raw {
            "true" => no_unit(Value::Bool(true)),
            "false" => no_unit(Value::Bool(false)),
            _ => Err(err(rest_at, mismatch(raw))),
        },
        Kind::Choice(options) => {
            if options.contains(&raw) {
                no_unit(Value::Word(raw.to_string()))
            } else {
                Err(err(rest_at, mismatch(raw)))
            }
        }
        Kind::Text | Kind::IntegerList => unreachable!("handled above"),
    }
}

fn valid_section_name(name: &str) -> bool {
    !name.is_empty()
        && name
            .chars()
            .all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '.' || c == '-')
}

fn valid_key(key: &str) -> bool {
    !key.is_empty() && key.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Parse and validate a scenario file.
pub fn parse_config(text: &str) -> Result<ScenarioConfig, ConfigError> {
    let text = text.strip_prefix('\u{feff}').unwrap_or(text);
    let mut cfg = ScenarioConfig::default();
    let mut schema: Option<&'static [KeySpec]> = None;
    for (idx, full) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = match full.find('#') {
            Some(i) => &full[..i],
            None => full,
        };
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        let start = line.len() - line.trim_start().len();
        let pos = Position { line: line_no, column: col(line, start) };
        if let Some(inner) = trimmed.strip_prefix('[') {
            let Some(name) = inner.strip_suffix(']') else {
                return Err(ConfigError::new(Some(pos), None, ConfigErrorKind::Syntax("section header lacks `]`".into())));
            };
            let name = name.trim();
            if !valid_section_name(name) {
                return Err(ConfigError::new(
                    Some(pos),
                    None,
                    ConfigErrorKind::Syntax(format!("malformed section name `{name}`")),
                ));
            }
            let Some(s) = section_schema(name) else {
                let names: Vec<String> = all_section_names().collect();
                let near = nearest(name, names.iter().map(String::as_str)).unwrap_or_default().to_string();
                return Err(ConfigError::new(
                    Some(pos),
                    None,
                    ConfigErrorKind::UnknownSection { name: name.to_string(), nearest: near },
                ));
            };
            if cfg.section(name).is_some() {
                return Err(ConfigError::new(Some(pos), None, ConfigErrorKind::DuplicateSection(name.to_string())));
            }
            schema = Some(s);
            cfg.sections.push(Section { name: name.to_string(), entries: Vec::new(), position: pos });
            continue;
        }
        let Some(eq) = line.find('=') else {
            return Err(ConfigError::new(
                Some(pos),
                cfg.sections.last().map(|s| s.name.as_str()),
                ConfigErrorKind::Syntax(format!("expected `key = value`, found `{trimmed}`")),
            ));
        };
        let (Some(section), Some(schema)) = (cfg.sections.last_mut(), schema) else {
            return Err(ConfigError::new(Some(pos), None, ConfigErrorKind::Syntax("key outside of any section".into())));
        };
        let key = line[..eq].trim();
        if !valid_key(key) {
            return Err(ConfigError::new(
                Some(pos),
                Some(&section.name),
                ConfigErrorKind::Syntax(format!("malformed key `{key}`")),
            ));
        }
        let Some(spec) = schema.iter().find(|k| k.name == key) else {
            let near = nearest(key, schema.iter().map(|k| k.name)).unwrap_or_default().to_string();
            return Err(ConfigError::new(
                Some(pos),
                Some(&section.name),
                ConfigErrorKind::UnknownKey { key: key.to_string(), nearest: near },
            ));
        };
        if section.get(key).is_some() {
            return Err(ConfigError::new(Some(pos), Some(&section.name), ConfigErrorKind::DuplicateKey(key.to_string())));
        }
        let after = &line[eq + 1..];
        let rest = after.trim();
        let rest_at = eq + 1 + (after.len() - after.trim_start().len());
        let (raw, unit, value) = check_value(&section.name, spec, rest, line, rest_at, line_no)?;
        section.entries.push(Entry { key: key.to_string(), raw, unit, value, position: pos });
    }
    Ok(cfg)
}

impl ScenarioConfig {
    pub fn section(&self, name: &str) -> Option<&Section> {
        self.sections.iter().find(|s| s.name == name)
    }

    pub fn get(&self, section: &str, key: &str) -> Option<&Entry> {
        self.section(section)?.get(key)
    }

    /// Insert or replace `key` in `section` from text, validating it.
    pub fn set(&mut self, section: &str, key: &str, text: &str) -> Result<(), ConfigError> {
        let schema = section_schema(section).ok_or_else(|| {
            ConfigError::new(None, None, ConfigErrorKind::MissingSection(section.to_string()))
        })?;
        let spec = schema.iter().find(|k| k.name == key).ok_or_else(|| {
            let near = nearest(key, schema.iter().map(|k| k.name)).unwrap_or_default().to_string();
            ConfigError::new(None, Some(section), ConfigErrorKind::UnknownKey { key: key.to_string(), nearest: near })
        })?;
        let line = format!("{key} = {text}");
        let rest_at = key.len() + 3;
        let (raw, unit, value) = check_value(section, spec, text.trim(), &line, rest_at, 0)?;
        let entry = Entry { key: key.to_string(), raw, unit, value, position: Position::default() };
        let idx = match self.sections.iter().position(|s| s.name == section) {
            Some(i) => i,
            None => {
                self.sections.push(Section { name: section.to_string(), entries: Vec::new(), position: Position::default() });
                self.sections.len() - 1
            }
        };
        let s = &mut self.sections[idx];
        match s.entries.iter_mut().find(|e| e.key == key) {
            Some(e) => *e = entry,
            None => s.entries.push(entry),
        }
        Ok(())
    }

    /// Canonical text: one blank line between sections, `key = value unit`.
    pub fn to_text(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for ScenarioConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, s) in self.sections.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            writeln!(f, "[{}]", s.name)?;
            for e in &s.entries {
                match &e.unit {
                    Some(u) => writeln!(f, "{} = {} {}", e.key, e.raw, u)?,
                    None => writeln!(f, "{} = {}", e.key, e.raw)?,
                }
            }
        }
        Ok(())
    }
}
