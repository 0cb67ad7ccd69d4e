//! Subcommand dispatch: config in, curves out.

use std::fmt;
use std::path::{Path, PathBuf};

use nefluct::dynamics::{
    chiral_torque, janus_force_closed, nonreciprocal_torque, propulsion_force, small_wrench_torque,
    BodyPolarizability,
};
use nefluct::friction::{
    einstein_hopf_closed, einstein_hopf_force, image_radiation_crossover, ness_ratio, slowdown_t0,
    surface_friction, AbsorptionModel, FrictionMechanism, NessQuery, SurfaceScenario,
};
use nefluct::geometry::{janus_scaled_iab, wrench_jhat};
use nefluct::relax::{
    cooling_curve, moment_of_inertia, terminal_angular_velocity, terminal_velocity, CoolingModel, Drive,
    RelaxationProblem,
};
use nefluct::units::SI;
use nefluct::{BodyGeometry, DrudeParams, Material, QuadratureSpec, ThermalPair, TwoPartBody};
use rayon::prelude::*;
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::config::{ConfigError, ConfigErrorKind, Entry, ScenarioConfig, Value};
use crate::curve::{Column, CurveError, ScalarCurve};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subcommand {
    Friction,
    Eh,
    Ness,
    Propel,
    Torque,
    Relax,
    Sweep,
}

impl Subcommand {
    pub const ALL: [Subcommand; 7] = [
        Subcommand::Friction,
        Subcommand::Eh,
        Subcommand::Ness,
        Subcommand::Propel,
        Subcommand::Torque,
        Subcommand::Relax,
        Subcommand::Sweep,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Subcommand::Friction => "friction",
            Subcommand::Eh => "eh",
            Subcommand::Ness => "ness",
            Subcommand::Propel => "propel",
            Subcommand::Torque => "torque",
            Subcommand::Relax => "relax",
            Subcommand::Sweep => "sweep",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|c| c.name() == name)
    }
}

impl fmt::Display for Subcommand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Error)]
pub enum RunError {
    #[error("config error: {0}")]
    Config(#[from] ConfigError),
    /// A model or solver failure, with the sweep point it happened at.
    #[error("{context}: {source}")]
    Model { context: String, source: nefluct::Error },
    #[error("invalid curve: {0}")]
    Curve(#[from] CurveError),
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
}

impl RunError {
    /// 2 for bad input, 3 for numerical failure, 1 for I/O.
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Config(_) => 2,
            RunError::Model { source, .. } => match source {
                nefluct::Error::NotConverged { .. } | nefluct::Error::NotBracketed { .. } => 3,
                _ => 2,
            },
            RunError::Curve(_) => 3,
            RunError::Io { .. } => 1,
        }
    }
}

type Result<T, E = RunError> = std::result::Result<T, E>;

fn model(context: impl Into<String>) -> impl FnOnce(nefluct::Error) -> RunError {
    let context = context.into();
    move |source| RunError::Model { context, source }
}

/// A curve and the file name it is written under.
#[derive(Debug, Clone, PartialEq)]
pub struct CurveOutput {
    pub file_name: String,
    pub curve: ScalarCurve,
}

fn invalid(section: &str, reason: impl Into<String>) -> RunError {
    ConfigError::new(None, Some(section), ConfigErrorKind::Invalid(reason.into())).into()
}

/// Typed reads on a validated config.
struct Reader<'a>(&'a ScenarioConfig);

impl<'a> Reader<'a> {
    fn entry(&self, section: &str, key: &str) -> Option<&'a Entry> {
        self.0.get(section, key)
    }

    fn require(&self, section: &str, key: &str) -> Result<&'a Entry> {
        if self.0.section(section).is_none() {
            return Err(ConfigError::missing_section(section).into());
        }
        self.entry(section, key)
            .ok_or_else(|| ConfigError::missing_key(section, key).into())
    }

    /// SI value of a quantity key.
    fn quantity(&self, section: &str, key: &str) -> Option<f64> {
        match &self.entry(section, key)?.value {
            Value::Quantity(q) => Some(q.si),
            _ => None,
        }
    }

    fn req_quantity(&self, section: &str, key: &str) -> Result<f64> {
        self.require(section, key)?;
        self.quantity(section, key)
            .ok_or_else(|| invalid(section, format!("`{key}` is not a quantity")))
    }

    fn number(&self, section: &str, key: &str) -> Option<f64> {
        match &self.entry(section, key)?.value {
            Value::Number(v) => Some(*v),
            _ => None,
        }
    }

    fn req_number(&self, section: &str, key: &str) -> Result<f64> {
        self.require(section, key)?;
        self.number(section, key)
            .ok_or_else(|| invalid(section, format!("`{key}` is not a number")))
    }

    fn integer<T: TryFrom<i128>>(&self, section: &str, key: &str) -> Result<Option<T>> {
        let Some(e) = self.entry(section, key) else {
            return Ok(None);
        };
        match &e.value {
            Value::Integer(v) => T::try_from(*v)
                .map(Some)
                .map_err(|_| e.error(section, format!("{v} is out of range")).into()),
            _ => Err(e.error(section, "not an integer").into()),
        }
    }

    fn word(&self, section: &str, key: &str) -> Option<&'a str> {
        match &self.entry(section, key)?.value {
            Value::Word(w) | Value::Text(w) => Some(w.as_str()),
            _ => None,
        }
    }

    fn bool(&self, section: &str, key: &str) -> Option<bool> {
        match &self.entry(section, key)?.value {
            Value::Bool(b) => Some(*b),
            _ => None,
        }
    }
}

fn only_keys(cfg: &ScenarioConfig, section: &str, allowed: &[&str], why: &str) -> Result<()> {
    if let Some(s) = cfg.section(section) {
        if let Some(e) = s.entries.iter().find(|e| !allowed.contains(&e.key.as_str())) {
            return Err(e.error(section, format!("does not apply to {why}")).into());
        }
    }
    Ok(())
}

/// The material in `[material.<label>]`, if that section exists.
pub fn material(cfg: &ScenarioConfig, label: &str) -> Result<Option<Material>> {
    let section = format!("material.{label}");
    let s = section.as_str();
    let r = Reader(cfg);
    if cfg.section(s).is_none() {
        return Ok(None);
    }
    if let Some(e) = r.entry(s, "preset") {
        only_keys(cfg, s, &["preset"], "a preset material")?;
        return Material::preset(&e.raw)
            .map(Some)
            .map_err(|err| e.error(s, err.to_string()).into());
    }
    let model_entry = r
        .entry(s, "model")
        .ok_or_else(|| invalid(s, "needs `preset` or `model`"))?;
    let gold = DrudeParams::GOLD;
    let energy = |key: &str, default: f64| r.quantity(s, key).unwrap_or(default);
    let m = match model_entry.raw.as_str() {
        "drude" => {
            only_keys(cfg, s, &["model", "plasma_freq", "damping", "atom_density", "mass_density"], "model drude")?;
            Material::DrudeMetal(DrudeParams {
                plasma_freq: r.req_quantity(s, "plasma_freq")?,
                damping: r.req_quantity(s, "damping")?,
                atom_density: r.quantity(s, "atom_density").unwrap_or(gold.atom_density),
                mass_density: r.quantity(s, "mass_density").unwrap_or(gold.mass_density),
            })
        }
        "dielectric" => {
            only_keys(cfg, s, &["model", "chi0"], "model dielectric")?;
            Material::dielectric(r.req_number(s, "chi0")?)
        }
        "monomial" => {
            only_keys(cfg, s, &["model", "exponent", "amplitude"], "model monomial")?;
            let exponent = r
                .integer::<i32>(s, "exponent")?
                .ok_or_else(|| RunError::from(ConfigError::missing_key(s, "exponent")))?;
            Material::MonomialAbsorber { exponent, amplitude: r.req_number(s, "amplitude")? }
        }
        "gyrotropic" => {
            only_keys(
                cfg,
                s,
                &["model", "plasma_freq", "damping", "cyclotron_freq", "field", "radius"],
                "model gyrotropic",
            )?;
            let cyclotron_freq = match (r.quantity(s, "cyclotron_freq"), r.quantity(s, "field")) {
                (Some(w), None) => w,
                (None, Some(b)) => SI.cyclotron_energy(b),
                _ => return Err(invalid(s, "give exactly one of `cyclotron_freq` and `field`")),
            };
            Material::GyrotropicSphere {
                plasma_freq: energy("plasma_freq", gold.plasma_freq),
                damping: energy("damping", gold.damping),
                cyclotron_freq,
                radius: r.req_quantity(s, "radius")?,
            }
        }
        other => return Err(model_entry.error(s, format!("unknown model `{other}`")).into()),
    };
    Ok(Some(m))
}

pub fn geometry(cfg: &ScenarioConfig) -> Result<BodyGeometry> {
    let s = "geometry";
    let r = Reader(cfg);
    if let Some(e) = r.entry(s, "preset") {
        only_keys(cfg, s, &["preset"], "a preset geometry")?;
        return BodyGeometry::preset(&e.raw).map_err(|err| e.error(s, err.to_string()).into());
    }
    let shape = r.require(s, "shape")?;
    let len = |k: &str| r.req_quantity(s, k);
    let g = match shape.raw.as_str() {
        "janus" => {
            only_keys(cfg, s, &["shape", "radius"], "a janus ball")?;
            BodyGeometry::janus(len("radius")?)
        }
        "wrench" => {
            only_keys(cfg, s, &["shape", "a", "b", "r_cross"], "a wrench")?;
            BodyGeometry::wrench(len("a")?, len("b")?, len("r_cross")?)
        }
        "flags" => {
            only_keys(cfg, s, &["shape", "a", "w", "h", "t"], "dual flags")?;
            BodyGeometry::flags(len("a")?, len("w")?, len("h")?, len("t")?)
        }
        other => return Err(shape.error(s, format!("unknown shape `{other}`")).into()),
    };
    g.validate().map_err(|err| shape.error(s, err.to_string()))?;
    Ok(g)
}

pub fn two_part_body(cfg: &ScenarioConfig) -> Result<TwoPartBody> {
    let g = geometry(cfg)?;
    let a = material(cfg, "A")?.ok_or_else(|| ConfigError::missing_section("material.A"))?;
    let b = material(cfg, "B")?.ok_or_else(|| ConfigError::missing_section("material.B"))?;
    TwoPartBody::new(g, a, b).map_err(model("body"))
}

pub fn quadrature(cfg: &ScenarioConfig) -> Result<QuadratureSpec> {
    let s = "quadrature";
    let r = Reader(cfg);
    let mut q = QuadratureSpec::default();
    if let Some(v) = r.number(s, "rel_tol") {
        q.rel_tol = v;
    }
    if let Some(v) = r.number(s, "abs_tol") {
        q.abs_tol = v;
    }
    if let Some(v) = r.integer(s, "max_subdivisions")? {
        q.max_subdivisions = v;
    }
    if let Some(v) = r.number(s, "phi_switch") {
        q.phi_policy.switch_threshold = v;
    }
    if let Some(v) = r.integer(s, "phi_terms")? {
        q.phi_policy.series_terms = v;
    }
    if let Some(v) = r.integer(s, "mc_samples")? {
        q.mc_samples = v;
    }
    if let Some(v) = r.integer(s, "seed")? {
        q.rng_seed = v;
    }
    if let Some(v) = r.bool(s, "allow_mc") {
        q.allow_mc = v;
    }
    q.validate().map_err(|e| invalid(s, e.to_string()))?;
    Ok(q)
}

/// Sweep variable with its abscissa column and how config values map to it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Var {
    Velocity,
    EnvTemperature,
    BodyTemperature,
    OmegaA,
    U0,
}

impl Var {
    fn from_name(name: &str) -> Option<Var> {
        Some(match name {
            "velocity" => Var::Velocity,
            "env_temperature" => Var::EnvTemperature,
            "body_temperature" => Var::BodyTemperature,
            "omega_a" => Var::OmegaA,
            "u0" => Var::U0,
            _ => return None,
        })
    }

    fn name(self) -> &'static str {
        match self {
            Var::Velocity => "velocity",
            Var::EnvTemperature => "env_temperature",
            Var::BodyTemperature => "body_temperature",
            Var::OmegaA => "omega_a",
            Var::U0 => "u0",
        }
    }

    fn dimension(self) -> Option<crate::config::Dimension> {
        use crate::config::Dimension as D;
        match self {
            Var::Velocity => Some(D::Velocity),
            Var::EnvTemperature | Var::BodyTemperature => Some(D::Temperature),
            Var::OmegaA | Var::U0 => None,
        }
    }
}

/// Grid from `[sweep]`, or the single point `fallback`.
fn grid(cfg: &ScenarioConfig, allowed: &[Var], fallback: Option<(Var, f64)>) -> Result<(Var, Vec<f64>)> {
    let s = "sweep";
    let r = Reader(cfg);
    if cfg.section(s).is_none() {
        return match fallback {
            Some((v, x)) => Ok((v, vec![x])),
            None => Err(ConfigError::missing_section(s).into()),
        };
    }
    let var_entry = r.require(s, "variable")?;
    let var = Var::from_name(&var_entry.raw)
        .filter(|v| allowed.contains(v))
        .ok_or_else(|| {
            let names: Vec<&str> = allowed.iter().map(|v| v.name()).collect();
            var_entry.error(s, format!("must be one of {} here", names.join(", ")))
        })?;
    let endpoint = |key: &str| -> Result<f64> {
        let e = r.require(s, key)?;
        match (&e.value, var.dimension()) {
            (Value::Quantity(q), Some(d)) if q.dimension == d => Ok(q.si),
            (Value::Number(v), None) => Ok(*v),
            (_, Some(d)) => Err(e.error(s, format!("needs a {d} with unit for variable {}", var.name())).into()),
            (_, None) => Err(e.error(s, format!("variable {} is dimensionless; drop the unit", var.name())).into()),
        }
    };
    let (from, to) = (endpoint("from")?, endpoint("to")?);
    let n: usize = r
        .integer(s, "points")?
        .ok_or_else(|| RunError::from(ConfigError::missing_key(s, "points")))?;
    let points = r.require(s, "points")?;
    if n == 0 {
        return Err(points.error(s, "must be at least 1").into());
    }
    if n == 1 {
        return Ok((var, vec![from]));
    }
    if !(to > from) {
        return Err(invalid(s, "`to` must exceed `from`"));
    }
    let log = r.word(s, "scale") == Some("log");
    if log && !(from > 0.0) {
        return Err(invalid(s, "a log sweep needs `from` > 0"));
    }
    let last = (n - 1) as f64;
    let xs: Vec<f64> = (0..n)
        .map(|k| {
            let f = k as f64 / last;
            if k == n - 1 {
                to
            } else if log {
                from * (to / from).powf(f)
            } else {
                from + (to - from) * f
            }
        })
        .collect();
    if xs.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(invalid(s, "grid points are not strictly increasing at this resolution"));
    }
    Ok((var, xs))
}

/// Evaluate `f` at every point on the rayon pool; results keep grid order
/// and the first failure in grid order is reported.
fn par_map<T: Send>(xs: &[f64], f: impl Fn(f64) -> Result<T> + Sync + Send) -> Result<Vec<T>> {
    let results: Vec<Result<T>> = xs.par_iter().map(|&x| f(x)).collect();
    results.into_iter().collect()
}

fn point(var: Var, x: f64) -> String {
    format!("{} = {x:e}", var.name())
}

type Row = (f64, f64, Option<f64>);

fn curve(abscissa: (&str, &str), value: (&str, &str), error: Option<(&str, &str)>, rows: &[Row]) -> Result<ScalarCurve> {
    let mut c = ScalarCurve::new(Column::new(abscissa.0, abscissa.1), Column::new(value.0, value.1))?;
    if let Some((n, u)) = error {
        c = c.with_error(Column::new(n, u))?;
    }
    for &(x, y, e) in rows {
        c.push(x, y, e)?;
    }
    Ok(c)
}

fn out(file_name: impl Into<String>, curve: ScalarCurve) -> CurveOutput {
    CurveOutput { file_name: file_name.into(), curve }
}

fn fraction_of_c(v: f64) -> f64 {
    v / SI.c
}

fn friction(cfg: &ScenarioConfig) -> Result<Vec<CurveOutput>> {
    let r = Reader(cfg);
    let plate = material(cfg, "plate")?.ok_or_else(|| ConfigError::missing_section("material.plate"))?;
    let sigma_plate = plate
        .drude()
        .ok_or_else(|| invalid("material.plate", "the plate must be a Drude metal"))?
        .conductivity();
    let sigma_particle = match material(cfg, "particle")? {
        None => None,
        Some(m) => Some(
            m.drude()
                .ok_or_else(|| invalid("material.particle", "intrinsic dissipation needs a Drude particle"))?
                .conductivity(),
        ),
    };
    let alpha0 = SI.volume_to_natural(r.req_quantity("particle", "alpha0")?);
    let separation = r.req_quantity("particle", "separation")?;
    let mechanisms: Vec<FrictionMechanism> = match r.word("particle", "mechanism").unwrap_or("all") {
        "image_lag" => vec![FrictionMechanism::ImageLag],
        "radiation_reaction" => vec![FrictionMechanism::RadiationReaction],
        "intrinsic_dissipation" => vec![FrictionMechanism::IntrinsicDissipation],
        _ => FrictionMechanism::ALL
            .into_iter()
            .filter(|m| *m != FrictionMechanism::IntrinsicDissipation || sigma_particle.is_some())
            .collect(),
    };
    let fallback = r.quantity("particle", "velocity").map(|v| (Var::Velocity, v));
    let (var, xs) = grid(cfg, &[Var::Velocity], fallback)?;
    let crossover = image_radiation_crossover(sigma_plate, separation).map_err(model("crossover"))?;
    let mut outs = Vec::new();
    for mechanism in mechanisms {
        let rows = par_map(&xs, |x| {
            let s = SurfaceScenario {
                alpha0,
                sigma_plate,
                sigma_particle,
                separation,
                velocity: fraction_of_c(x),
                mechanism,
            };
            let f = surface_friction(&s).map_err(model(point(var, x)))?;
            Ok((x, f, None))
        })?;
        let mut c = curve(("velocity", "m/s"), ("force", "N"), None, &rows)?;
        c.set_meta("mechanism", mechanism.name())?;
        c.set_meta("crossover_speed_m_per_s", format!("{crossover:e}"))?;
        outs.push(out(format!("friction_{}.csv", mechanism.name()), c));
    }
    Ok(outs)
}

fn einstein_hopf(cfg: &ScenarioConfig, q: &QuadratureSpec) -> Result<Vec<CurveOutput>> {
    let r = Reader(cfg);
    let alpha0 = SI.volume_to_natural(r.req_quantity("particle", "alpha0")?);
    let v = fraction_of_c(r.req_quantity("particle", "velocity")?);
    let mass = r.quantity("particle", "mass");
    let fallback = r.quantity("thermal", "env").map(|t| (Var::EnvTemperature, t));
    let (var, xs) = grid(cfg, &[Var::EnvTemperature], fallback)?;
    let absorber = AbsorptionModel::RadiationReaction { alpha0 };
    let tol = q.tolerance();
    let rows = par_map(&xs, |t| {
        let f = einstein_hopf_force(&absorber, t, v, tol).map_err(model(point(var, t)))?;
        Ok((t, f.value, Some(f.error)))
    })?;
    let closed: Vec<Row> = xs.iter().map(|&t| (t, einstein_hopf_closed(alpha0, t, v), None)).collect();
    let ab = ("env_temperature", "K");
    let mut outs = vec![
        out("eh_force.csv", curve(ab, ("force", "N"), Some(("force_error", "N")), &rows)?),
        out("eh_closed.csv", curve(ab, ("force", "N"), None, &closed)?),
    ];
    if let Some(m) = mass {
        let rows = par_map(&xs, |t| Ok((t, slowdown_t0(m, alpha0, t).map_err(model(point(var, t)))?, None)))?;
        let mut c = curve(ab, ("t0", "s"), None, &rows)?;
        c.set_meta("mass_kg", format!("{m:e}"))?;
        outs.push(out("eh_t0.csv", c));
    }
    for o in &mut outs {
        o.curve.set_meta("velocity_c", format!("{v:e}"))?;
    }
    Ok(outs)
}

fn ness(cfg: &ScenarioConfig) -> Result<Vec<CurveOutput>> {
    let r = Reader(cfg);
    let e = r.require("particle", "exponents")?;
    let Value::IntegerList(list) = &e.value else {
        return Err(e.error("particle", "not an integer list").into());
    };
    let exponents = list
        .iter()
        .map(|&n| i32::try_from(n).map_err(|_| e.error("particle", format!("exponent {n} out of range"))))
        .collect::<Result<Vec<i32>, ConfigError>>()?;
    let fallback = r.quantity("particle", "velocity").map(|v| (Var::Velocity, v));
    let (var, xs) = grid(cfg, &[Var::Velocity], fallback)?;
    let mut outs = Vec::new();
    for n in exponents {
        let rows = par_map(&xs, |x| {
            let v = fraction_of_c(x);
            let ratio = ness_ratio(NessQuery { exponent: n, velocity: v }).map_err(model(point(var, x)))?;
            Ok((v, ratio, None))
        })?;
        let mut c = curve(("velocity", "c"), ("temperature_ratio", "1"), None, &rows)?;
        c.set_meta("exponent", n)?;
        outs.push(out(format!("ness_n{n}.csv"), c));
    }
    Ok(outs)
}

/// (χ of the dielectric, metal, +1 when A is the dielectric).
fn metal_dielectric(body: &TwoPartBody) -> Option<(f64, DrudeParams, f64)> {
    match (body.material_a, body.material_b) {
        (Material::Dielectric { chi0 }, Material::DrudeMetal(m)) => Some((chi0, m, 1.0)),
        (Material::DrudeMetal(m), Material::Dielectric { chi0 }) => Some((chi0, m, -1.0)),
        _ => None,
    }
}

fn env_temperature(cfg: &ScenarioConfig) -> Result<f64> {
    Reader(cfg).req_quantity("thermal", "env")
}

fn body_fallback(cfg: &ScenarioConfig) -> Option<(Var, f64)> {
    Reader(cfg).quantity("thermal", "body").map(|t| (Var::BodyTemperature, t))
}

fn thin_metal_meta(c: &mut ScalarCurve, body: &TwoPartBody, env: f64, xs: &[f64]) -> Result<()> {
    let hottest = xs.iter().copied().fold(env, f64::max);
    let th = ThermalPair::new(env, hottest).map_err(model("thin-metal check"))?;
    let report = body.thin_metal_check(&th);
    if let Some(d) = report.skin_depth_nm {
        c.set_meta("skin_depth_nm", format!("{d:e}"))?;
    }
    c.set_meta("thin_metal_valid", report.valid())?;
    Ok(())
}

fn propel(cfg: &ScenarioConfig, q: &QuadratureSpec) -> Result<Vec<CurveOutput>> {
    let body = two_part_body(cfg)?;
    let (var, xs) = grid(cfg, &[Var::BodyTemperature, Var::OmegaA], body_fallback(cfg))?;
    if var == Var::OmegaA {
        if !matches!(body.geometry, BodyGeometry::JanusBall { .. }) {
            return Err(invalid("sweep", "an omega_a sweep of the force needs a janus geometry"));
        }
        let rows = par_map(&xs, |x| {
            let e = janus_scaled_iab(x, q).map_err(model(point(var, x)))?;
            Ok((x, e.value, Some(e.error)))
        })?;
        let c = curve(("omega_a", "1"), ("iab_scaled", "1"), Some(("iab_scaled_error", "1")), &rows)?;
        return Ok(vec![out("janus_iab.csv", c)]);
    }
    let env = env_temperature(cfg)?;
    let rows = par_map(&xs, |t| {
        let th = ThermalPair::new(env, t).map_err(model(point(var, t)))?;
        let f = propulsion_force(&body, &th, q).map_err(model(point(var, t)))?;
        Ok((t, f.value, Some(f.error)))
    })?;
    let ab = ("body_temperature", "K");
    let mut force = curve(ab, ("force", "N"), Some(("force_error", "N")), &rows)?;
    force.set_meta("env_temperature_K", env)?;
    thin_metal_meta(&mut force, &body, env, &xs)?;
    let mut outs = vec![out("propel_force.csv", force)];
    if let (BodyGeometry::JanusBall { radius }, Some((chi, metal, sign))) = (&body.geometry, metal_dielectric(&body)) {
        let closed = par_map(&xs, |t| {
            let th = ThermalPair::new(env, t).map_err(model(point(var, t)))?;
            janus_force_closed(chi, &metal, *radius, &th).map_err(model(point(var, t)))
        })?;
        let prefactor = closed.first().map(|c| c.prefactor).unwrap_or(0.0);
        let val: Vec<Row> = xs.iter().zip(&closed).map(|(&t, c)| (t, sign * c.value, None)).collect();
        let hat: Vec<Row> = xs.iter().zip(&closed).map(|(&t, c)| (t, sign * c.drive, None)).collect();
        for (name, col, rows) in [("propel_closed.csv", ("force", "N"), val), ("propel_fhat.csv", ("f_hat", "1"), hat)] {
            let mut c = curve(ab, col, None, &rows)?;
            c.set_meta("prefactor_N", format!("{:e}", sign * prefactor))?;
            c.set_meta("env_temperature_K", env)?;
            outs.push(out(name, c));
        }
    }
    Ok(outs)
}

fn torque(cfg: &ScenarioConfig, q: &QuadratureSpec) -> Result<Vec<CurveOutput>> {
    if cfg.section("geometry").is_none() && cfg.section("material.particle").is_some() {
        return nonreciprocal(cfg, q);
    }
    let body = two_part_body(cfg)?;
    let (var, xs) = grid(cfg, &[Var::BodyTemperature, Var::OmegaA], body_fallback(cfg))?;
    if var == Var::OmegaA {
        if !matches!(body.geometry, BodyGeometry::DualWrench { .. }) {
            return Err(invalid("sweep", "an omega_a sweep of the torque needs a wrench geometry"));
        }
        let mut outs = Vec::new();
        for (tag, ratio) in [("half", 0.5), ("equal", 1.0), ("double", 2.0)] {
            let rows = par_map(&xs, |x| {
                let e = wrench_jhat(x, ratio * x, &q.phi_policy, q.tolerance()).map_err(model(point(var, x)))?;
                Ok((x, e.value, Some(e.error)))
            })?;
            let mut c = curve(("omega_a", "1"), ("j_hat", "1"), Some(("j_hat_error", "1")), &rows)?;
            c.set_meta("b_over_a", ratio)?;
            outs.push(out(format!("wrench_jhat_b_{tag}.csv"), c));
        }
        return Ok(outs);
    }
    let env = env_temperature(cfg)?;
    let full = par_map(&xs, |t| {
        let th = ThermalPair::new(env, t).map_err(model(point(var, t)))?;
        let tau = chiral_torque(&body, &th, q).map_err(model(point(var, t)))?;
        Ok(tau[2])
    })?;
    let ab = ("body_temperature", "K");
    let rows: Vec<Row> = xs.iter().zip(&full).map(|(&t, e)| (t, e.value, Some(e.error))).collect();
    let mut tc = curve(ab, ("torque_z", "N m"), Some(("torque_z_error", "N m")), &rows)?;
    tc.set_meta("env_temperature_K", env)?;
    thin_metal_meta(&mut tc, &body, env, &xs)?;
    let mut outs = vec![out("torque.csv", tc)];
    if let (&BodyGeometry::DualWrench { a, b, s_a, s_b }, Some((chi, metal, sign))) =
        (&body.geometry, metal_dielectric(&body))
    {
        // the closed form has the metal as the wire
        let sign = -sign;
        let closed = par_map(&xs, |t| {
            let th = ThermalPair::new(env, t).map_err(model(point(var, t)))?;
            small_wrench_torque(chi, &metal, a, b, s_a, s_b, &th).map_err(model(point(var, t)))
        })?;
        let tau0 = closed.first().map(|c| c.prefactor).unwrap_or(0.0);
        let small: Vec<Row> = xs.iter().zip(&closed).map(|(&t, c)| (t, sign * c.value, None)).collect();
        let hat: Vec<Row> = xs
            .iter()
            .zip(&full)
            .map(|(&t, e)| (t, sign * e.value / tau0, Some(e.error / tau0.abs())))
            .collect();
        let mut c = curve(ab, ("torque_z", "N m"), None, &small)?;
        c.set_meta("prefactor_N_m", format!("{:e}", sign * tau0))?;
        outs.push(out("torque_small.csv", c));
        let mut c = curve(ab, ("tau_hat", "1"), Some(("tau_hat_error", "1")), &hat)?;
        c.set_meta("prefactor_N_m", format!("{:e}", sign * tau0))?;
        c.set_meta("env_temperature_K", env)?;
        outs.push(out("torque_tauhat.csv", c));
    }
    Ok(outs)
}

fn nonreciprocal(cfg: &ScenarioConfig, q: &QuadratureSpec) -> Result<Vec<CurveOutput>> {
    let m = material(cfg, "particle")?.ok_or_else(|| ConfigError::missing_section("material.particle"))?;
    let Material::GyrotropicSphere { radius, .. } = m else {
        return Err(invalid("material.particle", "the nonreciprocal torque needs model gyrotropic"));
    };
    let alpha = BodyPolarizability::ball(m, radius);
    let env = env_temperature(cfg)?;
    let (var, xs) = grid(cfg, &[Var::BodyTemperature], body_fallback(cfg))?;
    let rows = par_map(&xs, |t| {
        let th = ThermalPair::new(env, t).map_err(model(point(var, t)))?;
        let tau = nonreciprocal_torque(&alpha, &th, q).map_err(model(point(var, t)))?;
        Ok((t, tau[2].value, Some(tau[2].error)))
    })?;
    let mut c = curve(
        ("body_temperature", "K"),
        ("torque_z", "N m"),
        Some(("torque_z_error", "N m")),
        &rows,
    )?;
    c.set_meta("env_temperature_K", env)?;
    c.set_meta("polarizability", "first_order")?;
    Ok(vec![out("torque_nonreciprocal.csv", c)])
}

/// Dielectric density used when the config gives none [kg/m³].
pub const DEFAULT_DIELECTRIC_DENSITY: f64 = 2200.0;

fn relax(cfg: &ScenarioConfig, q: &QuadratureSpec) -> Result<Vec<CurveOutput>> {
    let s = "relax";
    let r = Reader(cfg);
    let body = two_part_body(cfg)?;
    let temperature = env_temperature(cfg)?;
    let rho_d = r.quantity(s, "dielectric_density").unwrap_or(DEFAULT_DIELECTRIC_DENSITY);
    let drive = match r.word(s, "drive").unwrap_or("closed") {
        "spectral" => Drive::Spectral,
        _ => Drive::ClosedForm,
    };
    let (chi, metal, _) =
        metal_dielectric(&body).ok_or_else(|| invalid("material.A", "relax needs one Drude metal and one dielectric"))?;
    let mut cooling = CoolingModel { metal, ..CoolingModel::gold() };
    if let Some(t) = r.quantity(s, "debye_temperature") {
        cooling.debye_temperature = t;
    }
    let rho = |m: &Material| m.mass_density().unwrap_or(rho_d);
    let spin = match body.geometry {
        BodyGeometry::JanusBall { .. } => false,
        BodyGeometry::DualWrench { .. } => true,
        _ => return Err(invalid("geometry", "relax supports janus and wrench bodies")),
    };
    let inertia = if spin {
        moment_of_inertia(&body.geometry, rho(&body.material_a), rho(&body.material_b)).map_err(model("inertia"))?
    } else {
        body.mass(rho_d)
    };
    let u0 = r.number(s, "u0");
    let (var, xs) = grid(cfg, &[Var::U0], u0.map(|u| (Var::U0, u)))?;
    let results = par_map(&xs, |u| {
        let p = RelaxationProblem { body: body.clone(), temperature, u0: u, inertia, drive, cooling };
        let res = if spin { terminal_angular_velocity(&p, q) } else { terminal_velocity(&p, q) };
        res.map_err(model(point(var, u)))
    })?;
    let rows: Vec<Row> = xs
        .iter()
        .zip(&results)
        .map(|(&u, t)| (u, t.value, Some((t.prefactor * t.integral.error).abs())))
        .collect();
    let value = if spin { ("terminal_angular_velocity", "1/s") } else { ("terminal_velocity", "m/s") };
    let error = if spin {
        ("terminal_angular_velocity_error", "1/s")
    } else {
        ("terminal_velocity_error", "m/s")
    };
    let mut c = curve(("u0", "1"), value, Some(error), &rows)?;
    let t_c = cooling.cooling_constant(temperature).map_err(model("cooling constant"))?;
    c.set_meta("env_temperature_K", temperature)?;
    c.set_meta("t_c_s", format!("{t_c:e}"))?;
    if let Some(first) = results.first() {
        c.set_meta("prefactor", format!("{:e}", first.prefactor))?;
    }
    if results.len() == 1 {
        c.set_meta("integral", format!("{:e}", results[0].integral.value))?;
    }
    c.set_meta(if spin { "inertia_kg_m2" } else { "mass_kg" }, format!("{inertia:e}"))?;
    c.set_meta("chi_dielectric", chi)?;
    c.set_meta("dielectric_density_kg_m3", rho_d)?;
    c.set_meta("metal_density_kg_m3", metal.mass_density)?;
    c.set_meta("drive", if drive == Drive::Spectral { "spectral" } else { "closed" })?;
    c.set_meta("dulong_petit_valid", cooling.dulong_petit_valid(temperature))?;
    let mut outs = vec![out("relax_terminal.csv", c)];
    if let Some(u0) = u0.filter(|&u| u != 1.0) {
        let u_end = r.number(s, "u_end").unwrap_or(1.0 + (u0 - 1.0) * 1e-2);
        let steps: usize = r.integer(s, "steps")?.unwrap_or(100);
        let path = cooling_curve(u0, u_end, steps, temperature, &cooling).map_err(model("trajectory"))?;
        let rows: Vec<Row> = path.into_iter().map(|(t, u)| (t, u, None)).collect();
        let mut c = curve(("time", "s"), ("u", "1"), None, &rows)?;
        c.set_meta("u0", u0)?;
        c.set_meta("t_c_s", format!("{t_c:e}"))?;
        outs.push(out("relax_trajectory.csv", c));
    }
    Ok(outs)
}

/// Run one subcommand on a validated config.
pub fn run_scenario(cfg: &ScenarioConfig, cmd: Subcommand) -> Result<Vec<CurveOutput>> {
    let target = cfg.get("sweep", "target");
    let cmd = match (cmd, target) {
        (Subcommand::Sweep, None) => return Err(ConfigError::missing_key("sweep", "target").into()),
        (Subcommand::Sweep, Some(t)) => Subcommand::from_name(&t.raw).ok_or_else(|| t.error("sweep", "unknown target"))?,
        (c, Some(t)) if t.raw != c.name() => {
            return Err(t.error("sweep", format!("targets {} but the subcommand is {c}", t.raw)).into())
        }
        (c, _) => c,
    };
    let q = quadrature(cfg)?;
    match cmd {
        Subcommand::Friction => friction(cfg),
        Subcommand::Eh => einstein_hopf(cfg, &q),
        Subcommand::Ness => ness(cfg),
        Subcommand::Propel => propel(cfg, &q),
        Subcommand::Torque => torque(cfg, &q),
        Subcommand::Relax => relax(cfg, &q),
        Subcommand::Sweep => unreachable!("resolved above"),
    }
}

/// Flag overrides folded into the config so the echo reproduces the run.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub rel_tol: Option<f64>,
}

pub fn apply_overrides(cfg: &mut ScenarioConfig, o: Overrides) -> Result<(), ConfigError> {
    if let Some(seed) = o.seed {
        cfg.set("quadrature", "seed", &seed.to_string())?;
    }
    if let Some(tol) = o.rel_tol {
        cfg.set("quadrature", "rel_tol", &format!("{tol:e}"))?;
    }
    Ok(())
}

/// What every output file records about its origin.
#[derive(Debug, Clone, PartialEq)]
pub struct Provenance {
    pub tool_version: String,
    pub command: String,
    pub config_sha256: String,
    pub seed: u64,
    pub timestamp: String,
    pub echo: String,
}

impl Provenance {
    pub fn new(cfg: &ScenarioConfig, cmd: Subcommand, seed: u64, timestamp: String) -> Self {
        let echo = cfg.to_text();
        let digest = Sha256::digest(echo.as_bytes());
        Provenance {
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            command: cmd.name().to_string(),
            config_sha256: digest.iter().map(|b| format!("{b:02x}")).collect(),
            seed,
            timestamp,
            echo,
        }
    }

    pub fn stamp(&self, curve: &mut ScalarCurve) -> Result<(), CurveError> {
        curve.set_meta("tool_version", &self.tool_version)?;
        curve.set_meta("command", &self.command)?;
        curve.set_meta("config_sha256", &self.config_sha256)?;
        curve.set_meta("seed", self.seed)?;
        curve.set_meta("timestamp", &self.timestamp)?;
        curve.set_echo(&self.echo);
        Ok(())
    }
}

/// Current UTC time, RFC 3339 to the second.
pub fn timestamp_now() -> String {
    chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true)
}

/// Parse, apply overrides, run and stamp; nothing is written.
pub fn run_text(text: &str, cmd: Subcommand, overrides: Overrides, timestamp: String) -> Result<Vec<CurveOutput>> {
    let mut cfg = crate::config::parse_config(text)?;
    apply_overrides(&mut cfg, overrides)?;
    let seed = quadrature(&cfg)?.rng_seed;
    let mut outs = run_scenario(&cfg, cmd)?;
    let prov = Provenance::new(&cfg, cmd, seed, timestamp);
    for o in &mut outs {
        prov.stamp(&mut o.curve)?;
    }
    Ok(outs)
}

/// Write each curve under `dir`, one file at a time.
pub fn write_outputs(dir: &Path, outs: &[CurveOutput]) -> Result<Vec<PathBuf>> {
    let io = |path: &Path| {
        let path = path.to_path_buf();
        move |source| RunError::Io { path, source }
    };
    std::fs::create_dir_all(dir).map_err(io(dir))?;
    let mut paths = Vec::new();
    for o in outs {
        let path = dir.join(&o.file_name);
        std::fs::write(&path, o.curve.to_csv()).map_err(io(&path))?;
        paths.push(path);
    }
    Ok(paths)
}
