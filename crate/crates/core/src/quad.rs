//! Adaptive Gauss–Kronrod quadrature and composite Gauss–Legendre rules.
//!
//! The adaptive driver keeps a priority queue of subintervals keyed on their
//! local error and bisects the worst one until the summed error meets
//! `max(abs, rel·|I|)`. Running out of subdivisions returns
//! [`Error::NotConverged`] with the best estimate attached.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

/// A value together with an estimate of its absolute error.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
}

impl Estimate {
    pub fn new(value: f64, error: f64) -> Self {
        Estimate { value, error }
    }

    pub fn exact(value: f64) -> Self {
        Estimate { value, error: 0.0 }
    }

    pub fn scale(self, factor: f64) -> Self {
        Estimate {
            value: self.value * factor,
            error: self.error * factor.abs(),
        }
    }

    pub fn relative_error(&self) -> f64 {
        if self.value == 0.0 {
            if self.error == 0.0 {
                0.0
            } else {
                f64::INFINITY
            }
        } else {
            (self.error / self.value).abs()
        }
    }
}

impl std::ops::Add for Estimate {
    type Output = Estimate;
    fn add(self, rhs: Estimate) -> Estimate {
        Estimate::new(self.value + rhs.value, self.error + rhs.error)
    }
}

impl std::ops::Neg for Estimate {
    type Output = Estimate;
    fn neg(self) -> Estimate {
        Estimate::new(-self.value, self.error)
    }
}

/// Stopping rule for the adaptive driver.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub rel: f64,
    pub abs: f64,
    pub max_subdivisions: usize,
}

impl Tolerance {
    pub fn new(rel: f64, abs: f64, max_subdivisions: usize) -> Self {
        Tolerance {
            rel,
            abs,
            max_subdivisions,
        }
    }

    pub fn rel(rel: f64) -> Self {
        Tolerance::new(rel, 0.0, 4000)
    }

    fn target(&self, value: f64) -> f64 {
        self.abs.max(self.rel * value.abs())
    }
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance::rel(1e-10)
    }
}

// 21-point Kronrod abscissae (x >= 0) and weights; odd entries are the
// 10-point Gauss nodes.
const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];
const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_600_525_086_734,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

/// One Gauss–Kronrod 21 panel: (integral, error, |f| integral).
fn gk21<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64, f64) {
    let centre = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(centre);
    let mut resk = fc * WGK[10];
    let mut resg = 0.0;
    let mut resabs = (fc * WGK[10]).abs();
    let mut fv1 = [0.0; 10];
    let mut fv2 = [0.0; 10];
    for j in 0..10 {
        let dx = half * XGK[j];
        let f1 = f(centre - dx);
        let f2 = f(centre + dx);
        fv1[j] = f1;
        fv2[j] = f2;
        resk += WGK[j] * (f1 + f2);
        resabs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            resg += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = 0.5 * resk;
    let mut resasc = WGK[10] * (fc - mean).abs();
    for j in 0..10 {
        resasc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let result = resk * half;
    let resabs = resabs * half.abs();
    let resasc = resasc * half.abs();
    let mut err = ((resk - resg) * half).abs();
    if resasc != 0.0 && err != 0.0 {
        err = resasc * (200.0 * err / resasc).powf(1.5).min(1.0);
    }
    if resabs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * resabs);
    }
    (result, err, resabs)
}

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.error.total_cmp(&other.error) == Ordering::Equal
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

/// Integrate `f` over `[a, b]`.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: Tolerance) -> Result<Estimate> {
    integrate_with_breaks(f, &[a, b], tol)
}

/// Integrate `f` over `[points[0], points[last]]`, starting from the panels
/// delimited by `points` (kinks, peaks and scale changes go there).
pub fn integrate_with_breaks<F: Fn(f64) -> f64>(
    f: F,
    points: &[f64],
    tol: Tolerance,
) -> Result<Estimate> {
    assert!(points.len() >= 2, "need at least one interval");
    let mut heap = BinaryHeap::new();
    let mut total = 0.0;
    let mut total_err = 0.0;
    let mut total_abs = 0.0;
    for w in points.windows(2) {
        if w[0] == w[1] {
            continue;
        }
        let (v, e, ra) = gk21(&f, w[0], w[1]);
        total += v;
        total_err += e;
        total_abs += ra;
        heap.push(Panel {
            a: w[0],
            b: w[1],
            value: v,
            error: e,
        });
    }
    let mut subdivisions = heap.len();
    loop {
        let target = tol.target(total);
        // Roundoff floor: nothing below a few ulps of the absolute integral is
        // resolvable.
        if total_err <= target || total_err <= 100.0 * f64::EPSILON * total_abs {
            return Ok(Estimate::new(total, total_err));
        }
        if subdivisions >= tol.max_subdivisions {
            return Err(Error::NotConverged {
                what: "adaptive quadrature".into(),
                estimate: total,
                error: total_err,
                at: None,
            });
        }
        let Some(worst) = heap.pop() else {
            return Ok(Estimate::new(total, total_err));
        };
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a.min(worst.b) || mid >= worst.a.max(worst.b) {
            // Interval no longer divisible in floating point.
            return Err(Error::NotConverged {
                what: "adaptive quadrature (interval exhausted)".into(),
                estimate: total,
                error: total_err,
                at: None,
            });
        }
        let (v1, e1, r1) = gk21(&f, worst.a, mid);
        let (v2, e2, r2) = gk21(&f, mid, worst.b);
        total += v1 + v2 - worst.value;
        total_err += e1 + e2 - worst.error;
        total_abs += r1 + r2;
        if total_err < 0.0 {
            total_err = heap.iter().map(|p| p.error).sum::<f64>() + e1 + e2;
        }
        heap.push(Panel {
            a: worst.a,
            b: mid,
            value: v1,
            error: e1,
        });
        heap.push(Panel {
            a: mid,
            b: worst.b,
            value: v2,
            error: e2,
        });
        subdivisions += 1;
    }
}

/// Integrate over `[a, ∞)` through x = a + t/(1 − t).
pub fn integrate_to_infinity<F: Fn(f64) -> f64>(f: F, a: f64, tol: Tolerance) -> Result<Estimate> {
    let g = |t: f64| {
        let s = 1.0 - t;
        let x = a + t / s;
        let v = f(x);
        if v == 0.0 {
            0.0
        } else {
            v / (s * s)
        }
    };
    integrate(g, 0.0, 1.0, tol)
}

/// Gauss–Legendre nodes and weights on [−1, 1].
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            if n == 1 {
                p1 = z;
                p0 = 1.0;
            }
            dp = n as f64 * (z * p1 - p0) / (z * z - 1.0);
            let dz = p1 / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        if n == 1 {
            x[0] = 0.0;
            w[0] = 2.0;
            break;
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    (x, w)
}

/// A fixed composite Gauss–Legendre rule: `panels` equal panels of `order`
/// nodes each over `[a, b]`.
#[derive(Debug, Clone)]
pub struct CompositeRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl CompositeRule {
    pub fn uniform(a: f64, b: f64, panels: usize, order: usize) -> Self {
        let (x, w) = gauss_legendre(order);
        let h = (b - a) / panels as f64;
        let mut nodes = Vec::with_capacity(panels * order);
        let mut weights = Vec::with_capacity(panels * order);
        for p in 0..panels {
            let lo = a + h * p as f64;
            for (xi, wi) in x.iter().zip(&w) {
                nodes.push(lo + 0.5 * h * (xi + 1.0));
                weights.push(0.5 * h * wi);
            }
        }
        CompositeRule { nodes, weights }
    }

    pub fn apply<F: Fn(f64) -> f64>(&self, f: F) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

/// Polynomial interpolant on Chebyshev–Lobatto points, evaluated in
/// barycentric form.
#[derive(Debug, Clone)]
pub struct Chebyshev {
    lo: f64,
    hi: f64,
    nodes: Vec<f64>,
    values: Vec<f64>,
}

fn lobatto(n: usize, lo: f64, hi: f64) -> Vec<f64> {
    (0..=n)
        .map(|k| {
            let c = (std::f64::consts::PI * k as f64 / n as f64).cos();
            0.5 * (lo + hi) - 0.5 * (hi - lo) * c
        })
        .collect()
}

impl Chebyshev {
    /// Fit `f` on [lo, hi], doubling the degree from 16 until the new
    /// nodes are reproduced to `rel · max|f|` (plus `abs`).
    pub fn fit<F: Fn(f64) -> Result<f64>>(f: F, lo: f64, hi: f64, rel: f64, abs: f64, max_degree: usize) -> Result<Self> {
        assert!(hi > lo, "empty interval");
        let mut n = 16;
        let mut values = lobatto(n, lo, hi).into_iter().map(&f).collect::<Result<Vec<_>>>()?;
        loop {
            let current = Chebyshev { lo, hi, nodes: lobatto(n, lo, hi), values: values.clone() };
            let fine_nodes = lobatto(2 * n, lo, hi);
            // even-indexed fine nodes coincide with the coarse ones
            let mut fine = Vec::with_capacity(2 * n + 1);
            let mut worst: f64 = 0.0;
            for (k, &x) in fine_nodes.iter().enumerate() {
                let v = if k % 2 == 0 { values[k / 2] } else { f(x)? };
                if k % 2 == 1 {
                    worst = worst.max((current.eval(x) - v).abs());
                }
                fine.push(v);
            }
            let scale = fine.iter().fold(0.0f64, |m, v| m.max(v.abs()));
            n *= 2;
            values = fine;
            if worst <= rel * scale + abs {
                return Ok(Chebyshev { lo, hi, nodes: fine_nodes, values });
            }
            if n >= max_degree {
                return Err(Error::NotConverged {
                    what: "Chebyshev fit".into(),
                    estimate: scale,
                    error: worst,
                    at: None,
                });
            }
        }
    }

    pub fn degree(&self) -> usize {
        self.nodes.len() - 1
    }

    pub fn domain(&self) -> (f64, f64) {
        (self.lo, self.hi)
    }

    pub fn eval(&self, x: f64) -> f64 {
        let n = self.nodes.len() - 1;
        let (mut num, mut den) = (0.0, 0.0);
        for (k, (&xk, &yk)) in self.nodes.iter().zip(&self.values).enumerate() {
            let d = x - xk;
            if d == 0.0 {
                return yk;
            }
            let mut w = if k % 2 == 0 { 1.0 } else { -1.0 };
            if k == 0 || k == n {
                w *= 0.5;
            }
            let t = w / d;
            num += t * yk;
            den += t;
        }
        num / den
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn polynomial_is_exact() {
        let r = integrate(|x| 3.0 * x * x, 0.0, 2.0, Tolerance::default()).unwrap();
        assert!((r.value - 8.0).abs() < 1e-14);
    }

    #[test]
    fn oscillatory_integral() {
        // ∫₀^{100} sin(x)² dx = 50 - sin(200)/4
        let want = 50.0 - (200.0f64).sin() / 4.0;
        let r = integrate(|x| x.sin().powi(2), 0.0, 100.0, Tolerance::rel(1e-12)).unwrap();
        assert!((r.value - want).abs() < 1e-10);
    }

    #[test]
    fn semi_infinite_gaussian() {
        let r = integrate_to_infinity(|x| (-x * x).exp(), 0.0, Tolerance::rel(1e-12)).unwrap();
        assert!((r.value - PI.sqrt() / 2.0).abs() < 1e-12);
    }

    #[test]
    fn endpoint_singularity_converges() {
        // ∫₀¹ x^{-1/2} dx = 2
        let r = integrate(|x| x.powf(-0.5), 0.0, 1.0, Tolerance::rel(1e-9)).unwrap();
        assert!((r.value - 2.0).abs() < 1e-8);
    }

    #[test]
    fn exhausted_budget_reports_best_estimate() {
        let tol = Tolerance::new(1e-14, 0.0, 3);
        let err = integrate(|x| (50.0 * x).sin() * x.sqrt(), 0.0, 10.0, tol).unwrap_err();
        assert!(err.best_estimate().is_some());
    }

    #[test]
    fn gauss_legendre_moments() {
        for n in [1, 2, 5, 16, 33] {
            let (x, w) = gauss_legendre(n);
            assert!((w.iter().sum::<f64>() - 2.0).abs() < 1e-13);
            // exact for degree 2n-1
            let d = 2 * n - 2;
            let m: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(d as i32)).sum();
            assert!((m - 2.0 / (d as f64 + 1.0)).abs() < 1e-13, "n={n}");
        }
    }

    #[test]
    fn composite_rule_integrates_cosine() {
        let rule = CompositeRule::uniform(0.0, 10.0, 20, 16);
        let v = rule.apply(|x| x.cos());
        assert!((v - 10.0f64.sin()).abs() < 1e-13);
    }

    #[test]
    fn chebyshev_reproduces_smooth_function() {
        let c = Chebyshev::fit(|x| Ok((3.0 * x).sin() * (-x).exp()), 0.0, 4.0, 1e-13, 0.0, 1024).unwrap();
        for k in 0..50 {
            let x = 0.08 * k as f64 + 0.013;
            assert!((c.eval(x) - (3.0 * x).sin() * (-x).exp()).abs() < 1e-12);
        }
        assert!(c.degree() <= 128);
    }
}
