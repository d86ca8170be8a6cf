//! Monte Carlo estimates of `f_s(δ)`, the volume of
//! `{a ∈ ℝ^{n+1} : h(a) ≤ 1, signature s, |D(a)| ≤ δ}`.
//!
//! Points are drawn in coefficient space; the discriminant and the Sturm
//! count run in floating point and fall back to exact integer arithmetic on
//! the (dyadic) sample whenever a decision is within the guard band.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::census::binomial;
use crate::poly::discriminant::discriminant_f64;
use crate::poly::ring::{self, Coeffs};
use crate::poly::roots::{coeffs_from_roots, mahler_measure};
use crate::poly::sturm::{distinct_real_roots_f64, signature, NumericCount};
use crate::poly::{height, CoefficientPoint, HeightKind, IntPolynomial};
use crate::rng::{split_evenly, stream};
use crate::{Error, Result};

/// Relative guard band around each threshold `δ`.
pub const DELTA_GUARD: f64 = 1e-9;
/// Absolute floor of the guard band, relative to `max|a_k|^{2n-2}`.
pub const ROUNDING_FLOOR: f64 = 1e-12;
/// Leading-coefficient guard of the floating Sturm chain.
pub const STURM_GUARD: f64 = 1e-9;
/// Proposals allowed per accepted point in Mahler rejection sampling.
pub const MAHLER_REJECTION_BUDGET: u64 = 1_000_000;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct McEstimate {
    pub n: usize,
    pub s: u32,
    pub height: HeightKind,
    pub delta: f64,
    pub mean: f64,
    pub stderr: f64,
    /// Points drawn from the reference region (the unit ball, or the
    /// enclosing box for Mahler height).
    pub samples: u64,
    pub hits: u64,
    pub seed: u64,
    pub workers: usize,
    /// Samples decided by exact arithmetic.
    pub escalated: u64,
}

/// Volume of `{h(a) ≤ 1}` where known in closed form.
pub fn unit_ball_volume(n: usize, kind: HeightKind) -> Option<f64> {
    match kind {
        HeightKind::Naive => Some(2f64.powi(n as i32 + 1)),
        HeightKind::Length => Some(2f64.powi(n as i32 + 1) / factorial(n + 1)),
        HeightKind::Mahler => None,
    }
}

/// Volume of the region samples are drawn from.
pub fn reference_volume(n: usize, kind: HeightKind) -> f64 {
    match kind {
        HeightKind::Mahler => (0..=n).map(|k| 2.0 * binomial(n, k) as f64).product(),
        _ => unit_ball_volume(n, kind).expect("closed form"),
    }
}

pub(crate) fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

fn uniform_pm1(rng: &mut ChaCha8Rng) -> f64 {
    2.0 * rng.random::<f64>() - 1.0
}

/// `M(a) ≤ 1`, with exact filters `M ≥ |a_n|, |a_0|` and `M ≤ ‖a‖₂`.
fn mahler_at_most_one(a: &[f64]) -> bool {
    let n = a.len() - 1;
    if a[n].abs() > 1.0 || a[0].abs() > 1.0 || a[n] == 0.0 {
        return false;
    }
    if a.iter().map(|c| c * c).sum::<f64>() <= 1.0 {
        return true;
    }
    mahler_measure(a).is_ok_and(|m| m <= 1.0)
}

/// Draw one point of the reference region into `a`; returns whether it lies
/// in the unit ball.
fn propose(kind: HeightKind, rng: &mut ChaCha8Rng, a: &mut [f64]) -> bool {
    let n = a.len() - 1;
    match kind {
        HeightKind::Naive => {
            for c in a.iter_mut() {
                *c = uniform_pm1(rng);
            }
            true
        }
        HeightKind::Length => {
            // uniform on the simplex via normalized exponential spacings,
            // with one slack coordinate, then random signs
            let mut total = 0.0;
            for c in a.iter_mut() {
                *c = -(1.0 - rng.random::<f64>()).ln();
                total += *c;
            }
            total += -(1.0 - rng.random::<f64>()).ln();
            for c in a.iter_mut() {
                *c /= total;
                if rng.random::<bool>() {
                    *c = -*c;
                }
            }
            true
        }
        HeightKind::Mahler => {
            for (k, c) in a.iter_mut().enumerate() {
                *c = binomial(n, k) as f64 * uniform_pm1(rng);
            }
            mahler_at_most_one(a)
        }
    }
}

/// A point distributed uniformly on `{h(a) ≤ 1}`.
pub fn sample_unit_ball(n: usize, kind: HeightKind, rng: &mut ChaCha8Rng) -> Result<CoefficientPoint> {
    let mut a = vec![0.0; n + 1];
    for _ in 0..MAHLER_REJECTION_BUDGET {
        if propose(kind, rng, &mut a) {
            return CoefficientPoint::new(a);
        }
    }
    Err(Error::NumericFailure(format!(
        "rejection sampling accepted none of {MAHLER_REJECTION_BUDGET} proposals for the {kind} ball"
    )))
}

/// Exact value of a finite `f64` as `m · 2^e`.
fn dyadic(x: f64) -> (BigInt, i64) {
    if x == 0.0 {
        return (BigInt::zero(), 0);
    }
    let bits = x.to_bits();
    let sign = if bits >> 63 == 1 { -1 } else { 1 };
    let exp = ((bits >> 52) & 0x7ff) as i64;
    let frac = bits & ((1u64 << 52) - 1);
    let (mant, e) = if exp == 0 { (frac, -1074) } else { (frac | (1 << 52), exp - 1075) };
    let tz = mant.trailing_zeros();
    (BigInt::from(sign) * BigInt::from(mant >> tz), e + tz as i64)
}

/// Scale a dyadic vector to integers: returns `(a · 2^E, E)`.
fn integerize(a: &[f64]) -> (Vec<BigInt>, i64) {
    let parts: Vec<(BigInt, i64)> = a.iter().map(|&x| dyadic(x)).collect();
    let shift = parts.iter().filter(|(m, _)| !m.is_zero()).map(|(_, e)| -e).max().unwrap_or(0);
    let ints = parts.into_iter().map(|(m, e)| m << (e + shift) as usize).collect();
    (ints, shift)
}

/// Classification outcome for one point: the first threshold index it
/// meets (`None` if none) and its signature.
struct Verdict {
    slot: Option<usize>,
    s: u32,
    escalated: bool,
}

fn classify(a: &[f64], deltas: &[f64]) -> Verdict {
    let n = a.len() - 1;
    if a[n] == 0.0 {
        return Verdict { slot: None, s: 0, escalated: false };
    }
    let d = discriminant_f64(a);
    let scale = a.iter().fold(0.0f64, |m, c| m.max(c.abs())).powi(2 * n as i32 - 2);
    let floor = ROUNDING_FLOOR * scale;
    let ad = d.abs();
    let slot = deltas.partition_point(|x| *x < ad);
    let near = |j: usize| (ad - deltas[j]).abs() <= DELTA_GUARD * deltas[j] + floor;
    if !d.is_finite() || ad <= floor || (slot < deltas.len() && near(slot)) || (slot > 0 && near(slot - 1)) {
        return classify_exact(a, deltas);
    }
    if slot == deltas.len() {
        return Verdict { slot: None, s: 0, escalated: false };
    }
    let negative = d < 0.0;
    if n <= 3 {
        return Verdict { slot: Some(slot), s: u32::from(negative), escalated: false };
    }
    match distinct_real_roots_f64(a, STURM_GUARD) {
        NumericCount::Count(r) if (n - r) % 2 == 0 => {
            let s = ((n - r) / 2) as u32;
            if (s % 2 == 1) == negative {
                Verdict { slot: Some(slot), s, escalated: false }
            } else {
                classify_exact(a, deltas)
            }
        }
        _ => classify_exact(a, deltas),
    }
}

fn classify_exact(a: &[f64], deltas: &[f64]) -> Verdict {
    let n = a.len() - 1;
    let (ints, shift) = integerize(a);
    let big: Coeffs<BigInt> = ints.iter().cloned().collect();
    let d = ring::discriminant(&big).expect("BigInt arithmetic does not overflow");
    // D(a) = D(a · 2^E) / 2^{E(2n-2)}
    let e = shift * (2 * n as i64 - 2);
    let ad = if e >= 0 {
        BigRational::new(d.abs(), BigInt::one() << e as usize)
    } else {
        BigRational::from_integer(d.abs() << (-e) as usize)
    };
    let slot = deltas.iter().position(|&x| {
        let x = BigRational::from_float(x).expect("finite threshold");
        ad <= x
    });
    let s = match slot {
        Some(_) => signature(&IntPolynomial::new(ints).expect("a_n ≠ 0")).0,
        None => 0,
    };
    Verdict { slot, s, escalated: true }
}

/// Per-signature hit histograms for one shard.
struct ShardHits {
    /// `hist[s][j]`: points whose first admissible threshold is `j`.
    hist: Vec<Vec<u64>>,
    escalated: u64,
}

fn run_shard(n: usize, kind: HeightKind, deltas: &[f64], samples: u64, rng: &mut ChaCha8Rng) -> ShardHits {
    let mut out = ShardHits { hist: vec![vec![0; deltas.len()]; n / 2 + 1], escalated: 0 };
    let mut a = vec![0.0; n + 1];
    for _ in 0..samples {
        if !propose(kind, rng, &mut a) {
            continue;
        }
        let v = classify(&a, deltas);
        out.escalated += u64::from(v.escalated);
        if let Some(j) = v.slot {
            out.hist[v.s as usize][j] += 1;
        }
    }
    out
}

/// Parameters shared by the volume estimators.
#[derive(Clone, Debug, PartialEq)]
pub struct VolumeSpec {
    pub n: usize,
    pub kind: HeightKind,
    pub samples: u64,
    pub seed: u64,
    pub workers: usize,
}

impl VolumeSpec {
    pub fn new(n: usize, kind: HeightKind, samples: u64, seed: u64) -> Self {
        Self { n, kind, samples, seed, workers: 1 }
    }

    pub fn with_workers(mut self, workers: usize) -> Self {
        self.workers = workers;
        self
    }

    fn validate(&self, deltas: &[f64]) -> Result<()> {
        if self.n < 2 {
            return Err(Error::UnsupportedDegree { degree: self.n, min: 2 });
        }
        if self.samples < 1 || self.workers < 1 {
            return Err(Error::InvalidInput("samples and workers must be positive".into()));
        }
        if deltas.is_empty() {
            return Err(Error::InvalidInput("at least one δ is required".into()));
        }
        if deltas.iter().any(|d| !d.is_finite() || *d < 0.0) {
            return Err(Error::InvalidInput("δ must be finite and nonnegative".into()));
        }
        if deltas.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::InvalidInput("δ grid must be sorted ascending".into()));
        }
        Ok(())
    }
}

/// Estimates `f_s(δ_j)` for every signature and every `δ_j` from one shared
/// sample: `result[s][j]`.
pub fn estimate_all(spec: &VolumeSpec, deltas: &[f64]) -> Result<Vec<Vec<McEstimate>>> {
    spec.validate(deltas)?;
    let n = spec.n;
    let counts = split_evenly(spec.samples, spec.workers);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(spec.workers)
        .build()
        .map_err(|e| Error::InvalidInput(format!("cannot start worker pool: {e}")))?;
    let parts: Vec<ShardHits> = pool.install(|| {
        counts
            .par_iter()
            .enumerate()
            .map(|(i, &c)| {
                let mut rng = stream(spec.seed, i as u64);
                run_shard(n, spec.kind, deltas, c, &mut rng)
            })
            .collect()
    });
    let mut hist = vec![vec![0u64; deltas.len()]; n / 2 + 1];
    let mut escalated = 0;
    for p in &parts {
        for (row, prow) in hist.iter_mut().zip(p.hist.iter()) {
            for (a, b) in row.iter_mut().zip(prow.iter()) {
                *a += b;
            }
        }
        escalated += p.escalated;
    }
    let volume = reference_volume(n, spec.kind);
    let samples = spec.samples as f64;
    Ok(hist
        .iter()
        .enumerate()
        .map(|(s, row)| {
            let mut hits = 0;
            row.iter()
                .zip(deltas)
                .map(|(h, &delta)| {
                    hits += h;
                    let p = hits as f64 / samples;
                    McEstimate {
                        n,
                        s: s as u32,
                        height: spec.kind,
                        delta,
                        mean: volume * p,
                        stderr: volume * (p * (1.0 - p) / samples).sqrt(),
                        samples: spec.samples,
                        hits,
                        seed: spec.seed,
                        workers: spec.workers,
                        escalated,
                    }
                })
                .collect()
        })
        .collect())
}

/// `f_s(δ_j)` for a sorted δ-grid, sharing samples across the grid.
pub fn estimate_f_grid(spec: &VolumeSpec, s: u32, deltas: &[f64]) -> Result<Vec<McEstimate>> {
    if s as usize > spec.n / 2 {
        return Err(Error::InvalidInput(format!("signature {s} exceeds n/2 for n = {}", spec.n)));
    }
    let mut all = estimate_all(spec, deltas)?;
    Ok(all.swap_remove(s as usize))
}

pub fn estimate_f(spec: &VolumeSpec, s: u32, delta: f64) -> Result<McEstimate> {
    Ok(estimate_f_grid(spec, s, &[delta])?.remove(0))
}

/// `f_s(δ)` for quadratics with naive height, by iterated adaptive
/// quadrature: for fixed `(a_1, a_2)` the admissible `a_0` form an interval.
pub fn f_quadratic(s: u32, delta: f64, tol: f64) -> Result<f64> {
    if s > 1 {
        return Err(Error::InvalidInput("quadratics have signature 0 or 1".into()));
    }
    if delta <= 0.0 {
        return Ok(0.0);
    }
    // by symmetry integrate a_1, a_2 ∈ [0, 1] and multiply by 4
    let inner = |a2: f64| -> f64 {
        if a2 <= 0.0 {
            return 0.0;
        }
        let c = 4.0 * a2;
        // t = 4 a_0 a_2 ranges over [-c, c]; D = a_1^2 - t
        let len = move |a1: f64| -> f64 {
            let sq = a1 * a1;
            let (lo, hi) = if s == 0 { (sq - delta, sq) } else { (sq, sq + delta) };
            (hi.min(c) - lo.max(-c)).max(0.0) / c
        };
        let mut pts = vec![0.0, 1.0];
        for v in [c, delta - c, c + delta, c - delta] {
            if v > 0.0 && v.sqrt() < 1.0 {
                pts.push(v.sqrt());
            }
        }
        pts.sort_by(|x, y| x.partial_cmp(y).unwrap());
        pts.dedup();
        crate::quad::gauss_kronrod_pieces(len, &pts, tol * 0.1).value
    };
    let mut pts = vec![0.0, 1.0];
    for v in [0.25, delta / 4.0, (1.0 - delta) / 4.0, (1.0 + delta) / 4.0, delta / 8.0] {
        if v > 0.0 && v < 1.0 {
            pts.push(v);
        }
    }
    pts.sort_by(|x, y| x.partial_cmp(y).unwrap());
    pts.dedup();
    let r = crate::quad::gauss_kronrod_pieces(inner, &pts, tol);
    Ok(4.0 * r.value)
}

/// Both sides of the inversion identity
/// `∫_{ℝⁿ} g = 2 ∫_{[-1,1]×ℝ^{n-1}} g` with `g = √Δ(α) Ψ(α)^{n+1}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InversionReport {
    pub n: usize,
    pub delta: f64,
    pub height: HeightKind,
    pub lhs: f64,
    pub lhs_stderr: f64,
    pub rhs: f64,
    pub rhs_stderr: f64,
    /// `∫` over `|α_1| > 1`, which the substitution `α = 1/β` maps onto the
    /// right-hand side.
    pub complement: f64,
    pub complement_stderr: f64,
    pub samples: u64,
    pub seed: u64,
    pub pass: bool,
}

/// `K(α) = 1 / h(∏(x - α_i))`.
pub fn k_of_roots(alpha: &[f64], kind: HeightKind) -> f64 {
    match kind {
        HeightKind::Mahler => 1.0 / alpha.iter().map(|a| a.abs().max(1.0)).product::<f64>(),
        _ => {
            let c = coeffs_from_roots(1.0, alpha);
            1.0 / height(c.coords(), kind).expect("finite coefficients")
        }
    }
}

/// `Δ(α) = ∏_{i<j} (α_i - α_j)^2`.
pub fn vandermonde_sq(alpha: &[f64]) -> f64 {
    let mut p = 1.0;
    for i in 0..alpha.len() {
        for j in i + 1..alpha.len() {
            p *= (alpha[i] - alpha[j]).powi(2);
        }
    }
    p
}

/// `√Δ(α) Ψ(α)^{n+1}` with `Ψ = min((δ/Δ)^{1/(2n-2)}, K(α))`.
pub fn root_space_integrand(alpha: &[f64], delta: f64, kind: HeightKind) -> f64 {
    let n = alpha.len();
    let dv = vandermonde_sq(alpha);
    if dv == 0.0 || delta == 0.0 {
        return 0.0;
    }
    let psi = (delta / dv).powf(1.0 / (2 * n - 2) as f64).min(k_of_roots(alpha, kind));
    dv.sqrt() * psi.powi(n as i32 + 1)
}

/// Standard Cauchy draw and its density.
pub(crate) fn cauchy(rng: &mut ChaCha8Rng) -> (f64, f64) {
    let x = (std::f64::consts::PI * (rng.random::<f64>() - 0.5)).tan();
    (x, 1.0 / (std::f64::consts::PI * (1.0 + x * x)))
}

pub fn inversion_symmetry_check(
    n: usize,
    delta: f64,
    kind: HeightKind,
    samples: u64,
    seed: u64,
) -> Result<InversionReport> {
    if n < 2 {
        return Err(Error::UnsupportedDegree { degree: n, min: 2 });
    }
    if samples < 2 || delta < 0.0 || !delta.is_finite() {
        return Err(Error::InvalidInput("need samples ≥ 2 and finite δ ≥ 0".into()));
    }
    let mut alpha = vec![0.0; n];
    // left: all coordinates Cauchy
    let mut rng = stream(seed, 0);
    let (mut sum, mut sum2, mut csum, mut csum2) = (0.0, 0.0, 0.0, 0.0);
    for _ in 0..samples {
        let mut density = 1.0;
        for a in alpha.iter_mut() {
            let (x, p) = cauchy(&mut rng);
            *a = x;
            density *= p;
        }
        let w = root_space_integrand(&alpha, delta, kind) / density;
        sum += w;
        sum2 += w * w;
        let wc = if alpha[0].abs() > 1.0 { w } else { 0.0 };
        csum += wc;
        csum2 += wc * wc;
    }
    // right: α_1 uniform on [-1, 1], the rest Cauchy
    let mut rng = stream(seed, 1);
    let (mut rsum, mut rsum2) = (0.0, 0.0);
    for _ in 0..samples {
        alpha[0] = uniform_pm1(&mut rng);
        let mut density = 0.5;
        for a in alpha.iter_mut().skip(1) {
            let (x, p) = cauchy(&mut rng);
            *a = x;
            density *= p;
        }
        let w = root_space_integrand(&alpha, delta, kind) / density;
        rsum += w;
        rsum2 += w * w;
    }
    let m = samples as f64;
    let stats = |s: f64, s2: f64| {
        let mean = s / m;
        let var = (s2 / m - mean * mean).max(0.0) * m / (m - 1.0);
        (mean, (var / m).sqrt())
    };
    let (lhs, lhs_stderr) = stats(sum, sum2);
    let (rhs, rhs_stderr) = stats(rsum, rsum2);
    let (complement, complement_stderr) = stats(csum, csum2);
    let combined = (lhs_stderr.powi(2) + 4.0 * rhs_stderr.powi(2)).sqrt();
    let pass = (lhs - 2.0 * rhs).abs() <= 4.0 * combined;
    Ok(InversionReport {
        n,
        delta,
        height: kind,
        lhs,
        lhs_stderr,
        rhs,
        rhs_stderr,
        complement,
        complement_stderr,
        samples,
        seed,
        pass,
    })
}
