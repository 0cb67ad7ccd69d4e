//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
//! criterion fails. Oracles here share no code with the library.

use std::f64::consts::PI;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::process::ExitCode;
use std::time::Instant;

use astro_float::{BigFloat, Consts, RoundingMode};
use nefluct::dynamics::{
    chiral_torque, dimensionless_drive, janus_force_closed, nonreciprocal_torque, propulsion_force,
    small_wrench_torque, BodyPolarizability, DriveKind,
};
use nefluct::friction::{
    einstein_hopf_closed, einstein_hopf_force, ness_ratio, polarizability_from_au, slowdown_t0, slowdown_time,
    surface_friction, AbsorptionModel, FrictionMechanism, NessQuery, SurfaceScenario,
};
use nefluct::geometry::{janus_scaled_iab, mc_pair_oracle, wrench_jhat, PairKind, Primitive, Region};
use nefluct::kernels::{f_n, phi, phi_hat, PhiEvalPolicy};
use nefluct::material::{Tensor3, ZERO_TENSOR};
use nefluct::quad::Tolerance;
use nefluct::relax::{
    moment_of_inertia, net_power, terminal_angular_velocity, terminal_velocity, CoolingModel, Drive,
    RelaxationProblem,
};
use nefluct::units::{JULIAN_YEAR, SI};
use nefluct::{BodyGeometry, DrudeParams, Material, QuadratureSpec, ThermalPair, TwoPartBody};
use nefluct_cli::{run_text, Overrides, Subcommand};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn verdict(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn within_factor(value: f64, target: f64, factor: f64) -> bool {
    let r = value.abs() / target;
    r >= 1.0 / factor && r <= factor
}

const P: usize = 256;
const RM: RoundingMode = RoundingMode::ToEven;

/// φ̂(x) = φ(x)/x⁸ from the closed form in 256-bit arithmetic.
fn phi_hat_big(cc: &mut Consts, x: f64) -> f64 {
    let int = |i: i64| BigFloat::from_i64(i, P);
    let x = BigFloat::from_f64(x, P);
    let two_x = x.mul(&int(2), P, RM);
    let (s, c) = (two_x.sin(P, RM, cc), two_x.cos(P, RM, cc));
    let x2 = x.mul(&x, P, RM);
    let x4 = x2.mul(&x2, P, RM);
    let poly = |a: i64, b: i64, d: i64| int(a).add(&int(b).mul(&x2, P, RM), P, RM).add(&int(d).mul(&x4, P, RM), P, RM);
    let num = poly(-9, -2, -1)
        .add(&poly(9, -16, 3).mul(&c, P, RM), P, RM)
        .add(&x.mul(&poly(18, -8, 1), P, RM).mul(&s, P, RM), P, RM);
    let v = num.div(&x4.mul(&x4, P, RM), P, RM);
    format!("{v}").parse().unwrap()
}

fn phi_kernel() -> Outcome {
    let mut cc = Consts::new().unwrap();
    let default = PhiEvalPolicy::default();
    let series_only = PhiEvalPolicy { switch_threshold: 1.5, ..default };
    let mut worst: f64 = 0.0;
    for k in 0..1000 {
        let x = 0.25 + 0.5 * (k as f64 + 0.5) / 1000.0;
        let r = phi_hat_big(&mut cc, x);
        for p in [&default, &series_only] {
            worst = worst.max(((phi_hat(x, p) - r) / r).abs());
        }
        let r8 = r * x.powi(8);
        worst = worst.max(((phi(x, &default) - r8) / r8).abs());
    }
    let h = 1e-3;
    let g: Vec<f64> = (1..=3).map(|k| phi_hat_big(&mut cc, k as f64 * h)).collect();
    let c0 = (4.0 * g[0] - g[1]) / 3.0;
    let (u1, u2, u3) = (h * h, 4.0 * h * h, 9.0 * h * h);
    let (d21, d31) = ((g[1] - g[0]) / (u2 - u1), (g[2] - g[0]) / (u3 - u1));
    let c2 = (d31 - d21) / (u3 - u2);
    let c1 = d21 - c2 * (u2 + u1);
    let e0 = (c0 / (-4.0 / 9.0) - 1.0).abs();
    let e1 = (c1 / (28.0 / 225.0) - 1.0).abs();
    verdict(
        worst < 1e-10 && e0 < 1e-6 && e1 < 1e-6,
        format!("worst rel {worst:.1e} on 1000 points; c0 rel {e0:.1e}, c1 rel {e1:.1e}"),
    )
}

/// ζ(s), s ≥ 2, by Euler–Maclaurin after 100 terms.
fn zeta(s: f64) -> f64 {
    let n = 100.0f64;
    let head: f64 = (1..100).map(|k| (k as f64).powf(-s)).sum();
    head + n.powf(1.0 - s) / (s - 1.0) + 0.5 * n.powf(-s) + s * n.powf(-s - 1.0) / 12.0
        - s * (s + 1.0) * (s + 2.0) * n.powf(-s - 3.0) / 720.0
}

fn bose_moment(k: u32, y: f64) -> f64 {
    let gamma: f64 = (1..=k).map(|j| j as f64).product();
    gamma * zeta(k as f64 + 1.0) / y.powi(k as i32 + 1)
}

fn f_n_suite() -> Outcome {
    let mut rec: f64 = 0.0;
    for n in 2..=9 {
        for y in [0.1, 1.0, 10.0] {
            let lhs = f_n(n + 2, y).map_err(|e| e.to_string())? + f_n(n, y).map_err(|e| e.to_string())?;
            rec = rec.max((lhs / bose_moment(n, y) - 1.0).abs());
        }
    }
    // large y: alternating series in 1/y², truncated at its smallest term
    let mut asym: f64 = 0.0;
    for n in 2..=12 {
        let (mut sum, mut last) = (0.0, f64::INFINITY);
        for k in 0..40 {
            let t = bose_moment(n + 2 * k, 50.0);
            if t > last {
                break;
            }
            sum += if k % 2 == 0 { t } else { -t };
            last = t;
        }
        asym = asym.max((f_n(n, 50.0).map_err(|e| e.to_string())? / sum - 1.0).abs());
    }
    verdict(rec < 1e-8 && asym < 1e-3, format!("recurrence rel {rec:.1e}; y = 50 asymptote rel {asym:.1e}"))
}

const GOLD_ATOM_KG: f64 = 196.966_57 * 1.660_539_066_6e-27;

fn einstein_hopf() -> Outcome {
    let alpha0 = polarizability_from_au(36.0);
    let model = AbsorptionModel::RadiationReaction { alpha0 };
    let v = 1e-4;
    let mut worst: f64 = 0.0;
    for k in 0..=16 {
        let t = 10.0 * 10f64.powf(k as f64 / 4.0);
        let q = einstein_hopf_force(&model, t, v, Tolerance::rel(1e-10)).map_err(|e| e.to_string())?.value;
        worst = worst.max((q / einstein_hopf_closed(alpha0, t, v) - 1.0).abs());
    }
    let t0 = slowdown_t0(GOLD_ATOM_KG, alpha0, 300.0).map_err(|e| e.to_string())?;
    let years = slowdown_time(GOLD_ATOM_KG, alpha0, 30_000.0, 1e-3, 0.9e-3).map_err(|e| e.to_string())? / JULIAN_YEAR;
    verdict(
        worst < 1e-6 && within_factor(t0, 1.7e25, 10.0) && (years / 5.9 - 1.0).abs() < 0.05,
        format!("quadrature rel {worst:.1e} over 10..1e5 K; t0(300 K) = {t0:.2e} s; 30000 K, 10% slow-down = {years:.3} yr"),
    )
}

fn ness_anchors() -> Outcome {
    let mut worst: f64 = 0.0;
    for v in [0.1, 0.5, 0.9] {
        let r3 = ness_ratio(NessQuery { exponent: -3, velocity: v }).map_err(|e| e.to_string())?;
        let r6 = ness_ratio(NessQuery { exponent: -6, velocity: v }).map_err(|e| e.to_string())?;
        worst = worst.max((r3 - 1.0).abs()).max((r6 - (1.0 - v * v).sqrt()).abs());
    }
    verdict(worst < 1e-6, format!("max deviation {worst:.1e}"))
}

fn jhat(a: f64, b: f64) -> Result<f64, String> {
    wrench_jhat(a, b, &PhiEvalPolicy::default(), Tolerance::rel(1e-10))
        .map(|e| e.value)
        .map_err(|e| e.to_string())
}

fn wrench_asymptotics() -> Outcome {
    let big = jhat(1e3, 1e3)? / (11.0 / 30.0 * PI * 1e3);
    let x: f64 = 1e-2;
    let small = jhat(x, x)? / (56.0 / 675.0 * x.powi(6));
    let mut ordered = true;
    for a in [0.1, 0.3, 1.0, 3.0, 10.0, 30.0, 100.0, 300.0] {
        let (h, m, d) = (jhat(a, 0.5 * a)?, jhat(a, a)?, jhat(a, 2.0 * a)?);
        ordered &= h < m && m < d;
    }
    verdict(
        (big - 1.0).abs() < 0.02 && (small - 1.0).abs() < 0.01 && ordered,
        format!("large ratio {big:.4}, small ratio {small:.5}, b = a/2 < a < 2a ordering {ordered}"),
    )
}

fn janus_geometry() -> Outcome {
    let q = QuadratureSpec::default();
    let scaled = |x: f64| janus_scaled_iab(x, &q).map(|e| e.value).map_err(|e| e.to_string());
    let wa: f64 = 0.01;
    let small = scaled(wa)? / (-(8.0 * PI / 108.0) * wa.powi(8));
    let slope = |x0: f64, x1: f64| -> Result<f64, String> {
        Ok((scaled(x1)?.abs() / scaled(x0)?.abs()).ln() / (x1 / x0).ln())
    };
    let (s_small, s_large) = (slope(0.01, 0.1)?, slope(30.0, 300.0)?);
    let radius = 1e-7;
    let a = SI.length_to_natural(radius);
    let g = BodyGeometry::GenericPair {
        a: Region::new(vec![Primitive::HalfBall { center: [0.0; 3], radius, upper: true }]),
        b: Region::new(vec![Primitive::HalfBall { center: [0.0; 3], radius, upper: false }]),
    };
    let body = TwoPartBody::new(g, Material::dielectric(1.0), Material::gold()).map_err(|e| e.to_string())?;
    let mc = QuadratureSpec { mc_samples: 200_000, rng_seed: 1, allow_mc: true, ..Default::default() };
    let mut zs = Vec::new();
    for wa in [0.3, 1.0, 2.0, 5.0, 10.0] {
        let exact = scaled(wa)? / (8.0 * PI * a);
        let r = mc_pair_oracle(&body, wa / a, PairKind::Force, &mc).map_err(|e| e.to_string())?;
        let c = r.components[2];
        zs.push((c.value - exact) / c.error);
    }
    let z_max = zs.iter().fold(0.0f64, |m, z| m.max(z.abs()));
    verdict(
        (small - 1.0).abs() < 0.01 && (s_small / 8.0 - 1.0).abs() < 0.05 && (s_large / 4.0 - 1.0).abs() < 0.05 && z_max < 3.0,
        format!(
            "small-limit ratio {small:.5}; slopes {s_small:.3} and {s_large:.3}; MC z-scores {}",
            zs.iter().map(|z| format!("{z:+.2}")).collect::<Vec<_>>().join(" ")
        ),
    )
}

fn hot() -> ThermalPair {
    ThermalPair::new(300.0, 600.0).unwrap()
}

fn janus(radius: f64) -> TwoPartBody {
    TwoPartBody::new(BodyGeometry::janus(radius), Material::dielectric(1.0), Material::gold()).unwrap()
}

fn wrench(a: f64, b: f64, r: f64) -> TwoPartBody {
    TwoPartBody::new(BodyGeometry::wrench(a, b, r), Material::gold(), Material::dielectric(1.0)).unwrap()
}

fn closed_form_cross_checks() -> Outcome {
    let q = QuadratureSpec::default();
    let gold = DrudeParams::GOLD;
    let radius = SI.length_to_si(1e-2 / gold.damping);
    let full = propulsion_force(&janus(radius), &hot(), &q).map_err(|e| e.to_string())?.value;
    let closed = janus_force_closed(1.0, &gold, radius, &hot()).map_err(|e| e.to_string())?.value;
    let a = SI.length_to_si(1e-3 / gold.damping);
    let r = 5e-10;
    let s = PI * r * r;
    let tau = chiral_torque(&wrench(a, a, r), &hot(), &q).map_err(|e| e.to_string())?[2].value;
    let tau_closed = small_wrench_torque(1.0, &gold, a, a, s, s, &hot()).map_err(|e| e.to_string())?.value;
    let (rf, rt) = (full / closed, tau / tau_closed);
    verdict(
        (rf - 1.0).abs() < 0.05 && (rt - 1.0).abs() < 0.05,
        format!("Janus full/closed at νa = 1e-2: {rf:.5}; wrench full/closed at νa = νb = 1e-3: {rt:.5}"),
    )
}

fn headline_numbers() -> Outcome {
    let q = QuadratureSpec::default();
    let gold = DrudeParams::GOLD;
    let e = |e: nefluct::Error| e.to_string();
    let prefactor = janus_force_closed(1.0, &gold, 1e-7, &hot()).map_err(e)?.prefactor;
    let skin = gold.skin_depth(2.821_439_372 * SI.temperature_to_natural(300.0)).map_err(e)?;
    let cooling = CoolingModel::gold();
    let t_c = cooling.cooling_constant(300.0).map_err(e)?;
    let jb = janus(1e-7);
    let drift = RelaxationProblem {
        inertia: jb.mass(2200.0),
        body: jb,
        temperature: 300.0,
        u0: 2.0,
        drive: Drive::ClosedForm,
        cooling,
    };
    let v_t = terminal_velocity(&drift, &q).map_err(e)?.value;
    let wb = wrench(1e-6, 1e-6, 5e-8);
    let spin = RelaxationProblem {
        inertia: moment_of_inertia(&wb.geometry, gold.mass_density, 2200.0).map_err(e)?,
        body: wb,
        temperature: 300.0,
        u0: 2.0,
        drive: Drive::ClosedForm,
        cooling,
    };
    let w = terminal_angular_velocity(&spin, &q).map_err(e)?;
    let mag = BodyPolarizability::ball(Material::magnetized_gold(1e-7, 1.0), 1e-7);
    let tau_nr = nonreciprocal_torque(&mag, &hot(), &q).map_err(e)?[2].value;
    let checks = [
        ("Janus prefactor", prefactor, 4e-25, 2.0, "N"),
        ("skin depth", skin, 50.0, 2.0, "nm"),
        ("t_c", t_c, 1e-4, 2.0, "s"),
        ("v_T", v_t * 1e9, 0.1, 3.0, "nm/s"),
        ("wrench prefactor", w.prefactor, 2e-7, 3.0, "1/s"),
        ("ω̂_T", w.integral.value, 2e4, 2.0, ""),
        ("ω_T", w.value, 4e-3, 3.0, "1/s"),
        ("nonreciprocal torque", tau_nr, 1e-24, 10.0, "N m"),
    ];
    let ok = checks.iter().all(|&(_, v, t, f, _)| within_factor(v, t, f));
    let detail = checks
        .iter()
        .map(|(n, v, _, _, u)| format!("{n} {v:.3e} {u}").trim_end().to_string())
        .collect::<Vec<_>>()
        .join("; ");
    verdict(ok, detail)
}

fn random_material(rng: &mut ChaCha8Rng) -> Material {
    match rng.gen_range(0..4) {
        0 => Material::gold(),
        1 => Material::dielectric(rng.gen_range(0.1..10.0)),
        2 => Material::DrudeMetal(DrudeParams {
            plasma_freq: rng.gen_range(2.0..15.0),
            damping: rng.gen_range(0.005..0.2),
            ..DrudeParams::GOLD
        }),
        _ => Material::MonomialAbsorber { exponent: rng.gen_range(1..4), amplitude: rng.gen_range(0.01..1.0) },
    }
}

fn random_geometry(rng: &mut ChaCha8Rng) -> BodyGeometry {
    if rng.gen_bool(0.5) {
        BodyGeometry::janus(rng.gen_range(1e-8..3e-7))
    } else {
        BodyGeometry::wrench(rng.gen_range(1e-8..1e-6), rng.gen_range(1e-8..1e-6), rng.gen_range(1e-9..5e-8))
    }
}

fn nullity() -> Outcome {
    const N: usize = 100;
    let q = QuadratureSpec::default();
    let tol = q.abs_tol;
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let e = |e: nefluct::Error| e.to_string();
    let mut worst: f64 = 0.0;
    let mut note = |v: f64| worst = worst.max(v.abs());
    for _ in 0..N {
        // equilibrium
        let t = rng.gen_range(1.0..3000.0);
        let eq = ThermalPair::new(t, t).unwrap();
        let body = TwoPartBody::new(random_geometry(&mut rng), random_material(&mut rng), random_material(&mut rng)).unwrap();
        note(propulsion_force(&body, &eq, &q).map_err(e)?.value);
        chiral_torque(&body, &eq, &q).map_err(e)?.iter().for_each(|c| note(c.value));
        let mag = BodyPolarizability::ball(Material::magnetized_gold(1e-7, rng.gen_range(-5.0..5.0)), 1e-7);
        nonreciprocal_torque(&mag, &eq, &q).map_err(e)?.iter().for_each(|c| note(c.value));
        note(net_power(&mag, &eq, &q).map_err(e)?.value);
        note(dimensionless_drive(DriveKind::Force, rng.gen_range(0.001..1.0), &eq).map_err(e)?);
        // homogeneity
        let th = ThermalPair::new(rng.gen_range(10.0..2000.0), rng.gen_range(10.0..2000.0)).unwrap();
        let m = random_material(&mut rng);
        let same = TwoPartBody::new(random_geometry(&mut rng), m, m).unwrap();
        note(propulsion_force(&same, &th, &q).map_err(e)?.value);
        chiral_torque(&same, &th, &q).map_err(e)?.iter().for_each(|c| note(c.value));
        // reciprocity
        let mut base: Tensor3 = ZERO_TENSOR;
        for i in 0..3 {
            for j in i..3 {
                let z = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(0.0..1.0));
                base[i][j] = z;
                base[j][i] = z;
            }
        }
        let alpha = move |w: f64| -> nefluct::Result<Tensor3> { Ok(base.map(|r| r.map(|z| z / (1.0 + w * w)))) };
        nonreciprocal_torque(&alpha, &th, &q).map_err(e)?.iter().for_each(|c| note(c.value));
        // rest
        let sigma = rng.gen_range(1.0..1e4);
        for mechanism in FrictionMechanism::ALL {
            let s = SurfaceScenario {
                alpha0: rng.gen_range(1e-9..1e-3),
                sigma_plate: sigma,
                sigma_particle: Some(sigma),
                separation: rng.gen_range(1e-9..1e-6),
                velocity: 0.0,
                mechanism,
            };
            note(surface_friction(&s).map_err(e)?);
        }
        let model = AbsorptionModel::Monomial { exponent: rng.gen_range(0..5), amplitude: rng.gen_range(1e-3..1.0) };
        note(einstein_hopf_force(&model, rng.gen_range(1.0..1e5), 0.0, Tolerance::rel(1e-8)).map_err(e)?.value);
    }
    verdict(worst <= tol, format!("{N} scenarios per case; largest |value| {worst:e} (abs_tol {tol:e})"))
}

fn scenario(name: &str) -> String {
    std::fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs").join(name)).unwrap()
}

const FLAGS_MC: &str = "\
[material.A]
preset = gold
[material.B]
preset = dielectric:1
[geometry]
preset = flags:200nm,200nm,200nm,20nm
[thermal]
env = 300 K
[quadrature]
allow_mc = true
mc_samples = 20000
seed = 5
[sweep]
variable = body_temperature
from = 350 K
to = 600 K
points = 2
";

fn determinism() -> Outcome {
    let cases = [
        (scenario("janus.cfg"), Subcommand::Propel),
        (scenario("small_wrench.cfg"), Subcommand::Torque),
        (scenario("ness.cfg"), Subcommand::Ness),
        (scenario("friction.cfg"), Subcommand::Friction),
        (scenario("eh.cfg"), Subcommand::Eh),
        (scenario("relax_janus.cfg"), Subcommand::Relax),
        (FLAGS_MC.to_string(), Subcommand::Torque),
    ];
    let mut files = 0;
    for (text, cmd) in &cases {
        let run = |threads: usize, stamp: &str| -> Result<Vec<String>, String> {
            let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().map_err(|e| e.to_string())?;
            let outs = pool
                .install(|| run_text(text, *cmd, Overrides::default(), stamp.to_string()))
                .map_err(|e| e.to_string())?;
            Ok(outs.iter().map(|o| format!("{}\n{}", o.file_name, o.curve.body())).collect())
        };
        let reference = run(1, "first")?;
        if run(1, "second")? != reference {
            return Err(format!("{cmd}: repeated run differs"));
        }
        for threads in [4, 8] {
            if run(threads, "threads")? != reference {
                return Err(format!("{cmd}: {threads} threads differ from 1"));
            }
        }
        files += reference.len();
    }
    Ok(format!("{} scenarios, {files} CSV bodies identical across repeats and 1/4/8 threads", cases.len()))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("phi kernel", phi_kernel),
        ("f_n suite", f_n_suite),
        ("Einstein-Hopf and slow-down", einstein_hopf),
        ("NESS anchors", ness_anchors),
        ("wrench asymptotics", wrench_asymptotics),
        ("Janus geometry", janus_geometry),
        ("closed-form cross-checks", closed_form_cross_checks),
        ("headline numbers", headline_numbers),
        ("nullity properties", nullity),
        ("determinism", determinism),
    ];
    let mut failed = 0;
    for (name, f) in criteria {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(d) => println!("PASS {name}: {d} [{secs:.1} s]"),
            Err(d) => {
                failed += 1;
                println!("FAIL {name}: {d} [{secs:.1} s]");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
