//! Monte Carlo estimate of the pair integrals for arbitrary primitive unions.
//!
//! Every (A-primitive, B-primitive) combination is a stratum group; its
//! samples are split into fixed-size chunks, each drawing from its own
//! ChaCha stream (seed, chunk index). Chunks run in parallel but are summed
//! in index order, so results do not depend on the thread count.

use std::f64::consts::PI;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::{Primitive, QuadratureSpec, TwoPartBody, Vec3};
use crate::error::{Error, Result};
use crate::kernels::phi_hat;
use crate::quad::Estimate;
use crate::units::SI;

const CHUNK: u64 = 4096;

/// Which pair integral to estimate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PairKind {
    /// The vector (1/16π²)∫∫ R φ(ωR)/R⁸; its z component is I_AB.
    Force,
    /// J_AB = −∫∫ (r × r′) φ(ωR)/R⁸.
    Torque,
}

/// Vector estimate with per-component standard errors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate {
    pub components: [Estimate; 3],
    pub samples: u64,
}

fn to_natural(v: Vec3) -> Vec3 {
    v.map(|x| SI.length_to_natural(x))
}

/// Uniform point in `p`, in natural units.
fn sample<R: Rng>(p: &Primitive, rng: &mut R) -> Vec3 {
    match *p {
        Primitive::Ball { center, radius } | Primitive::HalfBall { center, radius, .. } => {
            let c = to_natural(center);
            let r = SI.length_to_natural(radius) * rng.gen::<f64>().cbrt();
            let cos_t = 2.0 * rng.gen::<f64>() - 1.0;
            let sin_t = (1.0 - cos_t * cos_t).max(0.0).sqrt();
            let ph = 2.0 * PI * rng.gen::<f64>();
            let mut z = r * cos_t;
            if let Primitive::HalfBall { upper, .. } = *p {
                z = if upper { z.abs() } else { -z.abs() };
            }
            [c[0] + r * sin_t * ph.cos(), c[1] + r * sin_t * ph.sin(), c[2] + z]
        }
        Primitive::Box { min, max } => {
            let (lo, hi) = (to_natural(min), to_natural(max));
            [0, 1, 2].map(|i| lo[i] + (hi[i] - lo[i]) * rng.gen::<f64>())
        }
        Primitive::Cylinder { base, axis, radius, length } => {
            let b = to_natural(base);
            let r = SI.length_to_natural(radius) * rng.gen::<f64>().sqrt();
            let ph = 2.0 * PI * rng.gen::<f64>();
            let l = SI.length_to_natural(length) * rng.gen::<f64>();
            let k = axis.index();
            let (i, j) = ((k + 1) % 3, (k + 2) % 3);
            let mut out = b;
            out[k] += l;
            out[i] += r * ph.cos();
            out[j] += r * ph.sin();
            out
        }
        Primitive::Wire { start, end, .. } => {
            let (s, e) = (to_natural(start), to_natural(end));
            let t = rng.gen::<f64>();
            [0, 1, 2].map(|i| s[i] + t * (e[i] - s[i]))
        }
    }
}

fn natural_measure(p: &Primitive) -> f64 {
    SI.volume_to_natural(p.measure())
}

#[derive(Clone, Copy, Default)]
struct Sums {
    s: [f64; 3],
    s2: [f64; 3],
    n: u64,
}

struct Chunk {
    pair: usize,
    stream: u64,
    count: u64,
}

/// Stratified Monte Carlo estimate of a pair integral at frequency `omega` [eV].
pub fn mc_pair_oracle(body: &TwoPartBody, omega: f64, kind: PairKind, q: &QuadratureSpec) -> Result<McEstimate> {
    if !(omega > 0.0 && omega.is_finite()) {
        return Err(Error::domain("mc_pair_oracle", format!("frequency must be positive, got {omega}")));
    }
    let policy = q.phi_policy;
    let w8 = omega.powi(8);
    let norm = match kind {
        PairKind::Force => 1.0 / (16.0 * PI * PI),
        PairKind::Torque => 1.0,
    };
    mc_pair_integral(body, kind, q, &|dist| norm * w8 * phi_hat(omega * dist, &policy))
}

/// Same estimator with an arbitrary radial weight `kernel(R)` (R in eV⁻¹):
/// ∫∫ R·k(R) for `Force`, −∫∫ (r × r′)·k(R) for `Torque`.
pub fn mc_pair_integral(
    body: &TwoPartBody,
    kind: PairKind,
    q: &QuadratureSpec,
    kernel: &(dyn Fn(f64) -> f64 + Sync),
) -> Result<McEstimate> {
    q.validate()?;
    let (ra, rb) = body.regions();
    let pairs: Vec<(Primitive, Primitive, f64)> = ra
        .parts
        .iter()
        .flat_map(|pa| {
            rb.parts
                .iter()
                .map(move |pb| (*pa, *pb, natural_measure(pa) * natural_measure(pb)))
        })
        .collect();
    let total_w: f64 = pairs.iter().map(|p| p.2).sum();
    let mut chunks = Vec::new();
    let mut stream = 0u64;
    for (k, p) in pairs.iter().enumerate() {
        let n = ((q.mc_samples as f64 * p.2 / total_w).round() as u64).max(2 * CHUNK);
        let mut left = n;
        while left > 0 {
            let c = left.min(CHUNK);
            chunks.push(Chunk { pair: k, stream, count: c });
            stream += 1;
            left -= c;
        }
    }
    let results: Vec<Sums> = chunks
        .par_iter()
        .map(|ch| {
            let mut rng = ChaCha8Rng::seed_from_u64(q.rng_seed);
            rng.set_stream(ch.stream);
            let (pa, pb, _) = &pairs[ch.pair];
            let mut acc = Sums::default();
            for _ in 0..ch.count {
                let r = sample(pa, &mut rng);
                let rp = sample(pb, &mut rng);
                let d = [r[0] - rp[0], r[1] - rp[1], r[2] - rp[2]];
                let dist = (d[0] * d[0] + d[1] * d[1] + d[2] * d[2]).sqrt();
                let k = kernel(dist);
                let v = match kind {
                    PairKind::Force => [d[0] * k, d[1] * k, d[2] * k],
                    PairKind::Torque => {
                        let c = [
                            r[1] * rp[2] - r[2] * rp[1],
                            r[2] * rp[0] - r[0] * rp[2],
                            r[0] * rp[1] - r[1] * rp[0],
                        ];
                        [-c[0] * k, -c[1] * k, -c[2] * k]
                    }
                };
                for i in 0..3 {
                    acc.s[i] += v[i];
                    acc.s2[i] += v[i] * v[i];
                }
                acc.n += 1;
            }
            acc
        })
        .collect();

    let mut per_pair = vec![Sums::default(); pairs.len()];
    for (ch, r) in chunks.iter().zip(&results) {
        let t = &mut per_pair[ch.pair];
        for i in 0..3 {
            t.s[i] += r.s[i];
            t.s2[i] += r.s2[i];
        }
        t.n += r.n;
    }
    let mut value = [0.0; 3];
    let mut var = [0.0; 3];
    let mut samples = 0;
    for (t, p) in per_pair.iter().zip(&pairs) {
        let n = t.n as f64;
        samples += t.n;
        for i in 0..3 {
            let mean = t.s[i] / n;
            let s2 = ((t.s2[i] / n - mean * mean) * n / (n - 1.0)).max(0.0);
            value[i] += p.2 * mean;
            var[i] += p.2 * p.2 * s2 / n;
        }
    }
    Ok(McEstimate {
        components: [0, 1, 2].map(|i| Estimate::new(value[i], var[i].sqrt())),
        samples,
    })
}
