//! Two-part bodies and their geometric pair integrals.
//!
//! For a body made of regions A and B the spectral force and torque factor
//! into material and geometric parts. The geometric parts are
//!
//! * I_AB(ω) = (1/16π²) ∫_A∫_B R_z φ(ωR)/R⁸ (force), with R = r − r′;
//! * J_AB(ω) = −∫_A∫_B (r × r′) φ(ωR)/R⁸ (torque),
//!
//! where r ∈ A and r′ ∈ B. In natural units I is in eV and J is
//! dimensionless.
//!
//! Lengths in [`BodyGeometry`] are metres.

mod janus;
mod mc;
mod wrench;

pub use janus::{janus_iab, janus_overlap_moment, janus_scaled_iab};
pub use mc::{mc_pair_integral, mc_pair_oracle, McEstimate, PairKind};
pub use wrench::{wrench_jab_reduced, wrench_jhat, wrench_jhat_segments};

use crate::error::{Error, Result};
use crate::kernels::{PhiEvalPolicy, ThermalPair};
use crate::material::Material;
use crate::quad::{Estimate, Tolerance};
use crate::units::SI;

pub type Vec3 = [f64; 3];

/// Coordinate axis of a cylinder.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub(crate) fn index(self) -> usize {
        match self {
            Axis::X => 0,
            Axis::Y => 1,
            Axis::Z => 2,
        }
    }
}

/// Axis-aligned building blocks of a region. Lengths in metres.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Primitive {
    Ball { center: Vec3, radius: f64 },
    /// The half of a ball above (`upper`) or below its equatorial plane z = center.z.
    HalfBall { center: Vec3, radius: f64, upper: bool },
    Box { min: Vec3, max: Vec3 },
    Cylinder { base: Vec3, axis: Axis, radius: f64, length: f64 },
    /// Thin wire from `start` to `end`; its measure is `cross_section` × length.
    Wire { start: Vec3, end: Vec3, cross_section: f64 },
}

impl Primitive {
    /// Volume in m³ (wires: cross section times length).
    pub fn measure(&self) -> f64 {
        use std::f64::consts::PI;
        match *self {
            Primitive::Ball { radius, .. } => 4.0 / 3.0 * PI * radius.powi(3),
            Primitive::HalfBall { radius, .. } => 2.0 / 3.0 * PI * radius.powi(3),
            Primitive::Box { min, max } => (0..3).map(|i| max[i] - min[i]).product(),
            Primitive::Cylinder { radius, length, .. } => PI * radius * radius * length,
            Primitive::Wire { start, end, cross_section } => cross_section * dist(start, end),
        }
    }

    /// Smallest linear extent, used for the thin-body check.
    pub fn thickness(&self) -> f64 {
        use std::f64::consts::PI;
        match *self {
            Primitive::Ball { radius, .. } => 2.0 * radius,
            Primitive::HalfBall { radius, .. } => radius,
            Primitive::Box { min, max } => (0..3).map(|i| max[i] - min[i]).fold(f64::INFINITY, f64::min),
            Primitive::Cylinder { radius, length, .. } => (2.0 * radius).min(length),
            Primitive::Wire { cross_section, .. } => 2.0 * (cross_section / PI).sqrt(),
        }
    }

    /// Axis-aligned bounding box.
    pub fn bounds(&self) -> (Vec3, Vec3) {
        match *self {
            Primitive::Ball { center: c, radius: r } => {
                ([c[0] - r, c[1] - r, c[2] - r], [c[0] + r, c[1] + r, c[2] + r])
            }
            Primitive::HalfBall { center: c, radius: r, upper } => {
                let (zl, zh) = if upper { (c[2], c[2] + r) } else { (c[2] - r, c[2]) };
                ([c[0] - r, c[1] - r, zl], [c[0] + r, c[1] + r, zh])
            }
            Primitive::Box { min, max } => (min, max),
            Primitive::Cylinder { base, axis, radius, length } => {
                let mut lo = [base[0] - radius, base[1] - radius, base[2] - radius];
                let mut hi = [base[0] + radius, base[1] + radius, base[2] + radius];
                lo[axis.index()] = base[axis.index()];
                hi[axis.index()] = base[axis.index()] + length;
                (lo, hi)
            }
            Primitive::Wire { start, end, .. } => {
                let lo = [0, 1, 2].map(|i| start[i].min(end[i]));
                let hi = [0, 1, 2].map(|i| start[i].max(end[i]));
                (lo, hi)
            }
        }
    }

    /// Centre of mass.
    pub fn centroid(&self) -> Vec3 {
        match *self {
            Primitive::Ball { center, .. } => center,
            Primitive::HalfBall { center, radius, upper } => {
                let dz = if upper { 0.375 * radius } else { -0.375 * radius };
                [center[0], center[1], center[2] + dz]
            }
            Primitive::Box { min, max } => [0, 1, 2].map(|i| 0.5 * (min[i] + max[i])),
            Primitive::Cylinder { base, axis, length, .. } => {
                let mut c = base;
                c[axis.index()] += 0.5 * length;
                c
            }
            Primitive::Wire { start, end, .. } => [0, 1, 2].map(|i| 0.5 * (start[i] + end[i])),
        }
    }

    /// Point reflection r → −r.
    pub fn inverted(&self) -> Primitive {
        let neg = |v: Vec3| [-v[0], -v[1], -v[2]];
        match *self {
            Primitive::Ball { center, radius } => Primitive::Ball { center: neg(center), radius },
            Primitive::HalfBall { center, radius, upper } => Primitive::HalfBall {
                center: neg(center),
                radius,
                upper: !upper,
            },
            Primitive::Box { min, max } => Primitive::Box { min: neg(max), max: neg(min) },
            Primitive::Cylinder { base, axis, radius, length } => {
                let mut b = neg(base);
                b[axis.index()] -= length;
                Primitive::Cylinder { base: b, axis, radius, length }
            }
            Primitive::Wire { start, end, cross_section } => Primitive::Wire {
                start: neg(start),
                end: neg(end),
                cross_section,
            },
        }
    }

    /// Mirror image in the plane x = 0.
    pub fn mirrored_x(&self) -> Primitive {
        let m = |v: Vec3| [-v[0], v[1], v[2]];
        match *self {
            Primitive::Ball { center, radius } => Primitive::Ball { center: m(center), radius },
            Primitive::HalfBall { center, radius, upper } => Primitive::HalfBall { center: m(center), radius, upper },
            Primitive::Box { min, max } => Primitive::Box {
                min: [-max[0], min[1], min[2]],
                max: [-min[0], max[1], max[2]],
            },
            Primitive::Cylinder { base, axis, radius, length } => {
                let mut b = m(base);
                if axis == Axis::X {
                    b[0] -= length;
                }
                Primitive::Cylinder { base: b, axis, radius, length }
            }
            Primitive::Wire { start, end, cross_section } => Primitive::Wire {
                start: m(start),
                end: m(end),
                cross_section,
            },
        }
    }

    fn validate(&self) -> Result<()> {
        let ok = match *self {
            Primitive::Ball { radius, .. } | Primitive::HalfBall { radius, .. } => radius > 0.0,
            Primitive::Box { min, max } => (0..3).all(|i| max[i] > min[i]),
            Primitive::Cylinder { radius, length, .. } => radius > 0.0 && length > 0.0,
            Primitive::Wire { start, end, cross_section } => cross_section > 0.0 && dist(start, end) > 0.0,
        };
        let finite = {
            let (lo, hi) = self.bounds();
            lo.iter().chain(hi.iter()).all(|v| v.is_finite())
        };
        if ok && finite && self.measure() > 0.0 {
            Ok(())
        } else {
            Err(Error::Geometry(format!("degenerate primitive {self:?}")))
        }
    }
}

fn dist(a: Vec3, b: Vec3) -> f64 {
    ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2) + (a[2] - b[2]).powi(2)).sqrt()
}

/// A union of non-overlapping primitives.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Region {
    pub parts: Vec<Primitive>,
}

impl Region {
    pub fn new(parts: Vec<Primitive>) -> Self {
        Region { parts }
    }

    pub fn measure(&self) -> f64 {
        self.parts.iter().map(Primitive::measure).sum()
    }

    pub fn thickness(&self) -> f64 {
        self.parts.iter().map(Primitive::thickness).fold(f64::INFINITY, f64::min)
    }

    /// ∫ r dV [m⁴].
    pub fn first_moment(&self) -> Vec3 {
        let mut m = [0.0; 3];
        for p in &self.parts {
            let (c, v) = (p.centroid(), p.measure());
            for i in 0..3 {
                m[i] += c[i] * v;
            }
        }
        m
    }

    /// Smallest box containing every part.
    pub fn bounds(&self) -> (Vec3, Vec3) {
        let mut lo = [f64::INFINITY; 3];
        let mut hi = [f64::NEG_INFINITY; 3];
        for p in &self.parts {
            let (l, h) = p.bounds();
            for i in 0..3 {
                lo[i] = lo[i].min(l[i]);
                hi[i] = hi[i].max(h[i]);
            }
        }
        (lo, hi)
    }

    pub fn inverted(&self) -> Region {
        Region::new(self.parts.iter().map(Primitive::inverted).collect())
    }

    pub fn mirrored_x(&self) -> Region {
        Region::new(self.parts.iter().map(Primitive::mirrored_x).collect())
    }
}

/// Shape of a two-part body. Lengths in metres, areas in m².
#[derive(Debug, Clone, PartialEq)]
pub enum BodyGeometry {
    /// Ball of radius `radius` split by z = 0; A is the upper hemisphere.
    JanusBall { radius: f64 },
    /// Central wire A along y from −a to a; tags B of length b run along +x
    /// from (0, −a) and along −x from (0, a).
    DualWrench { a: f64, b: f64, s_a: f64, s_b: f64 },
    /// Central wire A (cross section `s_a`) with rectangular flags B of
    /// width w (along x), height h (along y) and thickness t (along z); the
    /// first flag spans x ∈ [0, w], y ∈ [−a, −a + h], the second is its
    /// image under r → −r.
    DualFlag { a: f64, w: f64, h: f64, t: f64, s_a: f64 },
    /// Arbitrary disjoint regions.
    GenericPair { a: Region, b: Region },
}

impl BodyGeometry {
    pub fn janus(radius: f64) -> Self {
        BodyGeometry::JanusBall { radius }
    }

    /// Wrench with circular wire and tag cross sections of radius `r_cross`.
    pub fn wrench(a: f64, b: f64, r_cross: f64) -> Self {
        let s = std::f64::consts::PI * r_cross * r_cross;
        BodyGeometry::DualWrench { a, b, s_a: s, s_b: s }
    }

    /// Dual flag whose wire has circular cross section of radius `t / 2`.
    pub fn flags(a: f64, w: f64, h: f64, t: f64) -> Self {
        let s_a = std::f64::consts::PI * t * t / 4.0;
        BodyGeometry::DualFlag { a, w, h, t, s_a }
    }

    /// Parse "janus:<a>", "wrench:<a>,<b>,<r_cross>" or "flags:<a>,<w>,<h>,<t>";
    /// lengths carry one of the suffixes nm, um, mm or m.
    pub fn preset(spec: &str) -> Result<Self> {
        let (kind, args) = spec
            .split_once(':')
            .ok_or_else(|| Error::Geometry(format!("preset '{spec}' lacks a ':'")))?;
        let vals = args
            .split(',')
            .map(|s| parse_length(s.trim()))
            .collect::<Result<Vec<f64>>>()?;
        let want = |n: usize| {
            if vals.len() == n {
                Ok(())
            } else {
                Err(Error::Geometry(format!("preset '{kind}' takes {n} lengths, got {}", vals.len())))
            }
        };
        let g = match kind.trim() {
            "janus" => {
                want(1)?;
                BodyGeometry::janus(vals[0])
            }
            "wrench" => {
                want(3)?;
                BodyGeometry::wrench(vals[0], vals[1], vals[2])
            }
            "flags" => {
                want(4)?;
                BodyGeometry::flags(vals[0], vals[1], vals[2], vals[3])
            }
            other => return Err(Error::Geometry(format!("unknown geometry preset '{other}'"))),
        };
        g.validate()?;
        Ok(g)
    }

    /// Explicit primitive decomposition of the two regions.
    pub fn regions(&self) -> (Region, Region) {
        match *self {
            BodyGeometry::JanusBall { radius } => {
                let c = [0.0; 3];
                (
                    Region::new(vec![Primitive::HalfBall { center: c, radius, upper: true }]),
                    Region::new(vec![Primitive::HalfBall { center: c, radius, upper: false }]),
                )
            }
            BodyGeometry::DualWrench { a, b, s_a, s_b } => {
                let wire = Primitive::Wire { start: [0.0, -a, 0.0], end: [0.0, a, 0.0], cross_section: s_a };
                let tag = Primitive::Wire { start: [0.0, -a, 0.0], end: [b, -a, 0.0], cross_section: s_b };
                (Region::new(vec![wire]), Region::new(vec![tag, tag.inverted()]))
            }
            BodyGeometry::DualFlag { a, w, h, t, s_a } => {
                let wire = Primitive::Wire { start: [0.0, -a, 0.0], end: [0.0, a, 0.0], cross_section: s_a };
                let flag = Primitive::Box {
                    min: [0.0, -a, -t / 2.0],
                    max: [w, -a + h, t / 2.0],
                };
                (Region::new(vec![wire]), Region::new(vec![flag, flag.inverted()]))
            }
            BodyGeometry::GenericPair { ref a, ref b } => (a.clone(), b.clone()),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let pos = |name: &str, v: f64| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(Error::Geometry(format!("{name} must be positive, got {v}")))
            }
        };
        match *self {
            BodyGeometry::JanusBall { radius } => pos("radius", radius)?,
            BodyGeometry::DualWrench { a, b, s_a, s_b } => {
                pos("a", a)?;
                pos("b", b)?;
                pos("S_A", s_a)?;
                pos("S_B", s_b)?;
            }
            BodyGeometry::DualFlag { a, w, h, t, s_a } => {
                pos("a", a)?;
                pos("w", w)?;
                pos("h", h)?;
                pos("t", t)?;
                pos("S_A", s_a)?;
                if h > 2.0 * a {
                    return Err(Error::Geometry(format!("flag height {h} exceeds the wire length {}", 2.0 * a)));
                }
            }
            BodyGeometry::GenericPair { ref a, ref b } => {
                if a.parts.is_empty() || b.parts.is_empty() {
                    return Err(Error::Geometry("both regions need at least one primitive".into()));
                }
                for p in a.parts.iter().chain(&b.parts) {
                    p.validate()?;
                }
                for pa in &a.parts {
                    for pb in &b.parts {
                        if interiors_overlap(pa, pb) {
                            return Err(Error::Geometry(format!("regions overlap: {pa:?} and {pb:?}")));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// Whether the body maps onto itself under r → −r.
    pub fn is_inversion_symmetric(&self) -> bool {
        let (a, b) = self.regions();
        same_parts(&a, &a.inverted()) && same_parts(&b, &b.inverted())
    }

    /// The mirror image in x = 0. Wrenches and flags become generic pairs.
    pub fn mirrored(&self) -> BodyGeometry {
        match self {
            BodyGeometry::JanusBall { .. } => self.clone(),
            _ => {
                let (a, b) = self.regions();
                BodyGeometry::GenericPair { a: a.mirrored_x(), b: b.mirrored_x() }
            }
        }
    }
}

fn same_parts(x: &Region, y: &Region) -> bool {
    let close = |p: &Primitive, q: &Primitive| {
        let (pl, ph) = p.bounds();
        let (ql, qh) = q.bounds();
        let scale = (0..3).map(|i| (ph[i] - pl[i]).abs()).fold(0.0, f64::max);
        (p.measure() - q.measure()).abs() <= 1e-12 * p.measure()
            && (0..3).all(|i| (pl[i] - ql[i]).abs() <= 1e-12 * scale && (ph[i] - qh[i]).abs() <= 1e-12 * scale)
    };
    x.parts.len() == y.parts.len() && x.parts.iter().all(|p| y.parts.iter().any(|q| close(p, q)))
}

/// Conservative overlap test: bounding boxes must not share interior
/// volume, except for the flat face of two opposite half balls.
fn interiors_overlap(p: &Primitive, q: &Primitive) -> bool {
    if let (
        Primitive::HalfBall { center: c1, radius: r1, upper: u1 },
        Primitive::HalfBall { center: c2, radius: r2, upper: u2 },
    ) = (p, q)
    {
        if c1 == c2 && r1 == r2 && u1 != u2 {
            return false;
        }
    }
    let (pl, ph) = p.bounds();
    let (ql, qh) = q.bounds();
    // wires have zero-width boxes; treat contact as allowed
    (0..3).all(|i| pl[i] < qh[i] && ql[i] < ph[i])
}

fn parse_length(s: &str) -> Result<f64> {
    let split = s
        .find(|c: char| c.is_ascii_alphabetic() && c != 'e' && c != 'E')
        .ok_or_else(|| Error::Geometry(format!("length '{s}' needs a unit (nm, um, mm, m)")))?;
    let (num, unit) = s.split_at(split);
    let v: f64 = num
        .trim()
        .parse()
        .map_err(|_| Error::Geometry(format!("cannot parse length '{s}'")))?;
    let scale = match unit.trim() {
        "nm" => 1e-9,
        "um" | "µm" => 1e-6,
        "mm" => 1e-3,
        "m" => 1.0,
        u => return Err(Error::Geometry(format!("unknown length unit '{u}'"))),
    };
    if !(v > 0.0) || !v.is_finite() {
        return Err(Error::Geometry(format!("length '{s}' must be positive")));
    }
    Ok(v * scale)
}

/// Integration settings shared by every geometric and spectral integral.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_subdivisions: usize,
    pub phi_policy: PhiEvalPolicy,
    pub mc_samples: u64,
    pub rng_seed: u64,
    /// Permit Monte Carlo for geometries without a deterministic reduction.
    pub allow_mc: bool,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            rel_tol: 1e-8,
            abs_tol: 0.0,
            max_subdivisions: 4000,
            phi_policy: PhiEvalPolicy::default(),
            mc_samples: 200_000,
            rng_seed: 0,
            allow_mc: false,
        }
    }
}

impl QuadratureSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0 && self.rel_tol <= 1e-2) {
            return Err(Error::Settings(format!("rel_tol {} outside (0, 1e-2]", self.rel_tol)));
        }
        if !(self.abs_tol >= 0.0) {
            return Err(Error::Settings(format!("abs_tol {} is negative", self.abs_tol)));
        }
        if self.mc_samples < 10_000 {
            return Err(Error::Settings(format!("mc_samples {} below 10000", self.mc_samples)));
        }
        if self.max_subdivisions == 0 {
            return Err(Error::Settings("max_subdivisions must be positive".into()));
        }
        self.phi_policy.validate()
    }

    pub fn tolerance(&self) -> Tolerance {
        Tolerance::new(self.rel_tol, self.abs_tol, self.max_subdivisions)
    }
}

/// A two-region body with its materials; the origin is the centre of mass.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoPartBody {
    pub geometry: BodyGeometry,
    pub material_a: Material,
    pub material_b: Material,
    /// Roles of the regions are exchanged: A occupies the geometry's B slot.
    pub exchanged: bool,
}

/// Outcome of the thin-metal check.
#[derive(Debug, Clone, PartialEq)]
pub struct ThinMetalReport {
    /// Frequency of the Planck peak at the hotter temperature [eV].
    pub peak_omega: f64,
    /// Skin depth there [nm], if any region is metallic.
    pub skin_depth_nm: Option<f64>,
    /// Metallic regions thicker than the skin depth: (label, thickness in nm).
    pub too_thick: Vec<(&'static str, f64)>,
}

impl ThinMetalReport {
    pub fn valid(&self) -> bool {
        self.too_thick.is_empty()
    }
}

impl TwoPartBody {
    pub fn new(geometry: BodyGeometry, material_a: Material, material_b: Material) -> Result<Self> {
        geometry.validate()?;
        Ok(TwoPartBody { geometry, material_a, material_b, exchanged: false })
    }

    /// The same body with the labels A and B swapped.
    pub fn exchanged(&self) -> Self {
        TwoPartBody {
            geometry: self.geometry.clone(),
            material_a: self.material_b.clone(),
            material_b: self.material_a.clone(),
            exchanged: !self.exchanged,
        }
    }

    /// Regions in (A, B) order, honouring `exchanged`.
    pub fn regions(&self) -> (Region, Region) {
        let (a, b) = self.geometry.regions();
        if self.exchanged {
            (b, a)
        } else {
            (a, b)
        }
    }

    fn orientation(&self) -> f64 {
        if self.exchanged {
            -1.0
        } else {
            1.0
        }
    }

    /// Compare metallic thicknesses with the skin depth at the Wien peak.
    pub fn thin_metal_check(&self, th: &ThermalPair) -> ThinMetalReport {
        // ω_peak = 2.821 k_B T for the Planck spectral density per unit ω
        let peak_omega = 2.821_439_372 * th.hot_ev().max(f64::MIN_POSITIVE);
        let (ra, rb) = self.regions();
        let mut too_thick = Vec::new();
        let mut skin = None;
        for (label, mat, reg) in [("A", &self.material_a, ra), ("B", &self.material_b, rb)] {
            if let Some(d) = mat.drude() {
                if let Ok(delta) = d.skin_depth(peak_omega) {
                    skin = Some(delta);
                    let thick_nm = reg.thickness() * 1e9;
                    if thick_nm > delta {
                        too_thick.push((label, thick_nm));
                    }
                }
            }
        }
        ThinMetalReport { peak_omega, skin_depth_nm: skin, too_thick }
    }

    /// Total mass [kg] from the materials' densities; dielectric regions use
    /// `rho_default` [kg/m³].
    pub fn mass(&self, rho_default: f64) -> f64 {
        let (ra, rb) = self.regions();
        let rho = |m: &Material| m.mass_density().unwrap_or(rho_default);
        rho(&self.material_a) * ra.measure() + rho(&self.material_b) * rb.measure()
    }
}

/// I_AB(ω) in natural units (eV).
///
/// Janus balls use the deterministic overlap-moment reduction; other
/// geometries need `q.allow_mc` and fall back to the Monte Carlo oracle.
pub fn pair_integral_iab(body: &TwoPartBody, omega: f64, q: &QuadratureSpec) -> Result<Estimate> {
    q.validate()?;
    check_omega(omega)?;
    match body.geometry {
        BodyGeometry::JanusBall { radius } => {
            let a = SI.length_to_natural(radius);
            Ok(janus_iab(omega, a, q)?.scale(body.orientation()))
        }
        _ if q.allow_mc => {
            let r = mc_pair_oracle(body, omega, PairKind::Force, q)?;
            Ok(r.components[2])
        }
        _ => Err(Error::Settings(
            "no deterministic I_AB reduction for this geometry; enable Monte Carlo".into(),
        )),
    }
}

/// J_AB(ω) as a vector in natural units.
///
/// Dual wrenches use the reduced thin-wire integral (only the z component is
/// nonzero); Janus balls are axially symmetric and give zero; other
/// geometries use Monte Carlo when allowed.
pub fn pair_integral_jab(body: &TwoPartBody, omega: f64, q: &QuadratureSpec) -> Result<[Estimate; 3]> {
    q.validate()?;
    check_omega(omega)?;
    let zero = Estimate::exact(0.0);
    match body.geometry {
        BodyGeometry::DualWrench { a, b, s_a, s_b } => {
            let jz = wrench_jab_reduced(a, b, s_a, s_b, omega, q)?;
            Ok([zero, zero, jz.scale(body.orientation())])
        }
        BodyGeometry::JanusBall { .. } => Ok([zero; 3]),
        _ if q.allow_mc => Ok(mc_pair_oracle(body, omega, PairKind::Torque, q)?.components),
        _ => Err(Error::Settings(
            "no deterministic J_AB reduction for this geometry; enable Monte Carlo".into(),
        )),
    }
}

fn check_omega(omega: f64) -> Result<()> {
    if omega > 0.0 && omega.is_finite() {
        Ok(())
    } else {
        Err(Error::domain("pair integral", format!("frequency must be positive, got {omega}")))
    }
}
