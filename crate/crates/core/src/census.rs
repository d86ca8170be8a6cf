//! Exhaustive census of integer polynomials of bounded height.
//!
//! Counts `N_s(Q, X_j) = #{P : h(P) ≤ Q, signature s, |D(P)| ≤ X_j}` exactly
//! for every threshold in one pass. The enumeration walks a mixed-radix
//! index space over the coefficient box; shards are contiguous index ranges
//! so merged counts are independent of the worker count.

use std::time::Instant;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::poly::discriminant::discriminant_det;
use crate::poly::ring::{self, Coeffs};
use crate::poly::roots::{mahler_from_dd_roots, mahler_measure, roots_dd};
use crate::poly::sturm::{distinct_real_roots, signature, squarefree_decomposition_generic};
use crate::poly::{HeightKind, IntPolynomial};
use crate::{Error, Result};

/// Default cap on enumerated polynomials.
pub const DEFAULT_WORK_BUDGET: f64 = 2e10;

/// One in this many polynomials is re-checked with the determinant route.
pub const SELF_CHECK_STRIDE: u128 = 1_000_000;

/// Relative guard band around `Q` for the floating Mahler decision.
pub const MAHLER_GUARD: f64 = 1e-6;

#[derive(Clone, Debug, PartialEq)]
pub struct CensusSpec {
    pub n: usize,
    pub q: u64,
    pub height: HeightKind,
    /// Strictly increasing, nonnegative.
    pub thresholds: Vec<BigInt>,
    pub workers: usize,
    /// Enumerate one representative per `{±P(±x)}` orbit.
    pub reduce: bool,
    /// Maximum number of enumerated polynomials.
    pub work_budget: f64,
}

impl CensusSpec {
    pub fn new(n: usize, q: u64, height: HeightKind, thresholds: Vec<BigInt>) -> Result<Self> {
        let spec = Self {
            n,
            q,
            height,
            thresholds,
            workers: 1,
            reduce: true,
            work_budget: DEFAULT_WORK_BUDGET,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn with_workers(mut self, workers: usize) -> Self {
        self.workers = workers;
        self
    }

    pub fn with_reduce(mut self, reduce: bool) -> Self {
        self.reduce = reduce;
        self
    }

    pub fn with_work_budget(mut self, budget: f64) -> Self {
        self.work_budget = budget;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 2 {
            return Err(Error::UnsupportedDegree { degree: self.n, min: 2 });
        }
        if self.q < 1 {
            return Err(Error::InvalidInput("Q must be at least 1".into()));
        }
        if self.workers < 1 {
            return Err(Error::InvalidInput("workers must be at least 1".into()));
        }
        if self.thresholds.is_empty() {
            return Err(Error::InvalidInput("at least one threshold X is required".into()));
        }
        if self.thresholds.iter().any(|x| x.is_negative()) {
            return Err(Error::InvalidInput("thresholds must be nonnegative".into()));
        }
        if self.thresholds.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidInput("thresholds must be strictly increasing".into()));
        }
        Ok(())
    }

    /// Per-coefficient bound `|a_k| ≤ c_k Q` of the enumerated box.
    pub fn box_constants(&self) -> Vec<u64> {
        match self.height {
            HeightKind::Naive | HeightKind::Length => vec![1; self.n + 1],
            // |a_k| ≤ C(n, k) M(P)
            HeightKind::Mahler => (0..=self.n).map(|k| binomial(self.n, k)).collect(),
        }
    }
}

pub(crate) fn binomial(n: usize, k: usize) -> u64 {
    (0..k).fold(1u64, |acc, i| acc * (n - i) as u64 / (i + 1) as u64)
}

/// Exact counts for one census run.
#[derive(Clone, Debug)]
pub struct CensusTable {
    pub spec: CensusSpec,
    /// `counts[s][j] = N_s(Q, X_j)`.
    pub counts: Vec<Vec<u64>>,
    /// `#P_n(Q)`, members counted regardless of `|D|`.
    pub total: u64,
    /// Mahler-height polynomials whose membership could not be certified.
    pub ambiguous: u64,
    /// Examples of ambiguous polynomials (at most 16).
    pub ambiguous_examples: Vec<IntPolynomial>,
    /// Polynomials visited in the enumeration box.
    pub enumerated: u128,
    pub elapsed: f64,
}

/// One output record: `N_s(Q, X) = count`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CensusRow {
    pub n: usize,
    pub q: u64,
    pub height: HeightKind,
    pub s: u32,
    pub x: BigInt,
    pub count: u64,
}

impl CensusTable {
    pub fn count(&self, s: usize, j: usize) -> u64 {
        self.counts[s][j]
    }

    /// Records ordered by signature, then threshold.
    pub fn rows(&self) -> Vec<CensusRow> {
        let mut out = Vec::new();
        for (s, row) in self.counts.iter().enumerate() {
            for (x, &count) in self.spec.thresholds.iter().zip(row) {
                out.push(CensusRow {
                    n: self.spec.n,
                    q: self.spec.q,
                    height: self.spec.height,
                    s: s as u32,
                    x: x.clone(),
                    count,
                });
            }
        }
        out
    }

    /// Counts are equal; timing is ignored.
    pub fn same_counts(&self, other: &CensusTable) -> bool {
        self.counts == other.counts && self.total == other.total && self.ambiguous == other.ambiguous
    }
}

/// Mixed-radix enumeration of the coefficient box.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EnumerationPlan {
    pub n: usize,
    /// `|a_k| ≤ bounds[k]`.
    pub bounds: Vec<i64>,
    /// Only `a_n > 0` and the canonical sign of `P(-x)` are visited.
    pub reduced: bool,
    /// Size of the index space.
    pub cardinality: u128,
}

impl EnumerationPlan {
    fn radix(&self, k: usize) -> u128 {
        let b = self.bounds[k] as u128;
        if k == self.n {
            if self.reduced {
                b
            } else {
                2 * b
            }
        } else {
            2 * b + 1
        }
    }

    fn digit_value(&self, k: usize, d: u128) -> i64 {
        let b = self.bounds[k];
        let d = d as i64;
        if k == self.n {
            if self.reduced {
                d + 1
            } else if d < b {
                d - b
            } else {
                d - b + 1
            }
        } else {
            d - b
        }
    }

    fn decode(&self, mut index: u128) -> Vec<u128> {
        (0..=self.n)
            .map(|k| {
                let r = self.radix(k);
                let d = index % r;
                index /= r;
                d
            })
            .collect()
    }
}

/// Orbit bookkeeping under `P ↦ -P` and `P(x) ↦ P(-x)`.
///
/// With `a_n > 0` fixed, the remaining symmetry is `P ↦ (-1)^n P(-x)`, which
/// flips the coefficients `a_k` with `n - k` odd. The representative has the
/// highest such nonzero coefficient positive. Returns the orbit size, or
/// `None` when `c` is not the representative.
pub fn orbit_weight(c: &[i128]) -> Option<u64> {
    let n = c.len() - 1;
    let mut k = n as isize - 1;
    while k >= 0 {
        let v = c[k as usize];
        if v != 0 {
            return if v > 0 { Some(4) } else { None };
        }
        k -= 2;
    }
    Some(2)
}

pub fn symmetry_reduce(spec: &CensusSpec) -> EnumerationPlan {
    let bounds: Vec<i64> = spec.box_constants().iter().map(|c| (c * spec.q) as i64).collect();
    let mut plan = EnumerationPlan { n: spec.n, bounds, reduced: spec.reduce, cardinality: 1 };
    plan.cardinality = (0..=spec.n).map(|k| plan.radix(k)).product();
    plan
}

/// A contiguous range `[start, end)` of the enumeration index space.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Shard {
    pub start: u128,
    pub end: u128,
}

impl Shard {
    pub fn len(&self) -> u128 {
        self.end - self.start
    }

    pub fn is_empty(&self) -> bool {
        self.end == self.start
    }
}

/// One shard for a single worker, four per worker otherwise; sizes differ
/// by at most one.
pub fn partition_work(spec: &CensusSpec) -> Vec<Shard> {
    let plan = symmetry_reduce(spec);
    let wanted = if spec.workers <= 1 { 1 } else { 4 * spec.workers as u128 };
    let count = wanted.min(plan.cardinality.max(1));
    let base = plan.cardinality / count;
    let extra = plan.cardinality % count;
    let mut shards = Vec::with_capacity(count as usize);
    let mut start = 0;
    for i in 0..count {
        let len = base + u128::from(i < extra);
        shards.push(Shard { start, end: start + len });
        start += len;
    }
    shards
}

/// Outcome of the Mahler membership test `M(P) ≤ Q`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Membership {
    In,
    Out,
    Ambiguous,
}

/// Decide `M(P) ≤ Q` for an integer polynomial.
///
/// Cheap exact filters first (`M ≥ |a_n|, |a_0|` and `M ≤ ‖P‖₂`), then a
/// floating value, then a double-double recomputation inside the guard band.
/// When `M ≠ Q`, `|M - Q|` is at least `(2Q+1)^{1-C(n,⌊n/2⌋)}` because
/// `±M` is a root of a monic integer polynomial of that degree whose other
/// roots are bounded by `M`; a double-double value closer than half that
/// bound certifies `M = Q`.
pub fn mahler_membership(c: &[i128], q: u64) -> Membership {
    let n = c.len() - 1;
    let qi = q as i128;
    if c[n].abs() > qi || c[0].abs() > qi {
        return Membership::Out;
    }
    let norm2: Option<i128> = c.iter().try_fold(0i128, |s, a| s.checked_add(a.checked_mul(*a)?));
    if let Some(s) = norm2 {
        if s <= qi * qi {
            return Membership::In;
        }
    }
    let qf = q as f64;
    let f: Vec<f64> = c.iter().map(|&a| a as f64).collect();
    if let Ok(m) = mahler_measure(&f) {
        if (m - qf).abs() >= MAHLER_GUARD * qf {
            return if m <= qf { Membership::In } else { Membership::Out };
        }
    }
    let Some(factors) = squarefree_decomposition_generic(c) else {
        return Membership::Ambiguous;
    };
    let mut roots = Vec::with_capacity(n);
    for (g, mult) in factors {
        let Ok(r) = roots_dd(&g) else {
            return Membership::Ambiguous;
        };
        for _ in 0..mult {
            roots.extend_from_slice(&r);
        }
    }
    let m = mahler_from_dd_roots(c[n] as f64, &roots);
    let diff = (m - crate::ddouble::DD::new(qf)).to_f64().abs();
    let degree = binomial(n, n / 2) as f64;
    let separation = (2.0 * qf + 1.0).powf(-(degree - 1.0));
    // double-double roots of squarefree integer factors carry ~1e-24 error
    let accuracy = 1e-24 * qf;
    if diff < 0.5 * separation && accuracy < 0.5 * separation {
        Membership::In
    } else if diff > accuracy {
        if m.to_f64() <= qf {
            Membership::In
        } else {
            Membership::Out
        }
    } else {
        Membership::Ambiguous
    }
}

struct ShardCounts {
    /// `hist[s][j]`: members whose first admissible threshold index is `j`
    /// (`j = m` means above every threshold).
    hist: Vec<Vec<u64>>,
    total: u64,
    ambiguous: u64,
    ambiguous_examples: Vec<IntPolynomial>,
}

fn signature_of(c: &[i128], d_sign: i32) -> u32 {
    let n = c.len() - 1;
    if d_sign != 0 {
        // squarefree: sign(D) = (-1)^s settles n ≤ 3
        if n <= 3 {
            return u32::from(d_sign < 0);
        }
        let r = distinct_real_roots(c).unwrap_or_else(|| {
            let big: Coeffs<BigInt> = c.iter().map(|&a| BigInt::from(a)).collect();
            distinct_real_roots(&big).expect("BigInt arithmetic does not overflow")
        });
        return ((n - r) / 2) as u32;
    }
    let p = IntPolynomial::new(c.iter().map(|&a| BigInt::from(a)).collect()).expect("a_n ≠ 0");
    signature(&p).0
}

fn run_shard(spec: &CensusSpec, plan: &EnumerationPlan, shard: Shard) -> Result<ShardCounts> {
    let n = spec.n;
    let m = spec.thresholds.len();
    let big_thresholds = &spec.thresholds;
    let small_thresholds: Vec<i128> =
        spec.thresholds.iter().map(|x| x.to_i128().unwrap_or(i128::MAX)).collect();
    let mut out = ShardCounts {
        hist: vec![vec![0; m + 1]; n / 2 + 1],
        total: 0,
        ambiguous: 0,
        ambiguous_examples: Vec::new(),
    };
    if shard.is_empty() {
        return Ok(out);
    }
    let mut digits = plan.decode(shard.start);
    let radices: Vec<u128> = (0..=n).map(|k| plan.radix(k)).collect();
    let mut c: Vec<i128> = (0..=n).map(|k| plan.digit_value(k, digits[k]) as i128).collect();
    let q = spec.q as i128;
    let mut next_check = shard.start.div_ceil(SELF_CHECK_STRIDE) * SELF_CHECK_STRIDE;
    for index in shard.start..shard.end {
        let due = index == next_check;
        if due {
            next_check += SELF_CHECK_STRIDE;
        }
        let weight = if plan.reduced { orbit_weight(&c) } else { Some(1) };
        if let Some(w) = weight {
            let member = match spec.height {
                HeightKind::Naive => Membership::In,
                HeightKind::Length => {
                    if c.iter().map(|a| a.abs()).sum::<i128>() <= q {
                        Membership::In
                    } else {
                        Membership::Out
                    }
                }
                HeightKind::Mahler => mahler_membership(&c, spec.q),
            };
            match member {
                Membership::Out => {}
                Membership::Ambiguous => {
                    out.ambiguous += w;
                    if out.ambiguous_examples.len() < 16 {
                        let big = c.iter().map(|&a| BigInt::from(a)).collect();
                        out.ambiguous_examples.push(IntPolynomial::new(big)?);
                    }
                }
                Membership::In => {
                    out.total += w;
                    if due {
                        self_check(&c)?;
                    }
                    let narrow: Coeffs<i64> = c.iter().map(|&a| a as i64).collect();
                    let fast = ring::discriminant::<i64>(&narrow)
                        .map(i128::from)
                        .or_else(|| ring::discriminant::<i128>(&c));
                    let (slot, d_sign) = match fast {
                        Some(d) => {
                            let a = d.abs();
                            (small_thresholds.partition_point(|x| *x < a), d.signum() as i32)
                        }
                        None => {
                            let big: Coeffs<BigInt> = c.iter().map(|&a| BigInt::from(a)).collect();
                            let d = ring::discriminant(&big).expect("BigInt arithmetic does not overflow");
                            let a = d.abs();
                            let sign = if d.is_zero() { 0 } else if d.is_negative() { -1 } else { 1 };
                            (big_thresholds.partition_point(|x| *x < a), sign)
                        }
                    };
                    let s = if slot < m { signature_of(&c, d_sign) as usize } else { 0 };
                    out.hist[s][slot] += w;
                }
            }
        }
        // odometer step
        let mut k = 0;
        while k <= n {
            digits[k] += 1;
            if digits[k] < radices[k] {
                c[k] = plan.digit_value(k, digits[k]) as i128;
                break;
            }
            digits[k] = 0;
            c[k] = plan.digit_value(k, 0) as i128;
            k += 1;
        }
    }
    Ok(out)
}

fn self_check(c: &[i128]) -> Result<()> {
    let p = IntPolynomial::new(c.iter().map(|&a| BigInt::from(a)).collect())?;
    let det = discriminant_det(&p)?.0;
    let prs = ring::discriminant::<i128>(c).map(BigInt::from).unwrap_or_else(|| {
        let big: Coeffs<BigInt> = c.iter().map(|&a| BigInt::from(a)).collect();
        ring::discriminant(&big).expect("BigInt arithmetic does not overflow")
    });
    if det != prs {
        return Err(Error::SelfCheck(format!(
            "discriminant routes disagree on {p}: determinant {det}, remainder sequence {prs}"
        )));
    }
    Ok(())
}

pub fn run_census(spec: &CensusSpec) -> Result<CensusTable> {
    spec.validate()?;
    let started = Instant::now();
    let plan = symmetry_reduce(spec);
    let required = plan.cardinality as f64;
    if required > spec.work_budget {
        return Err(Error::WorkBudgetExceeded { required, budget: spec.work_budget });
    }
    let shards = partition_work(spec);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(spec.workers)
        .build()
        .map_err(|e| Error::InvalidInput(format!("cannot start worker pool: {e}")))?;
    let parts: Vec<Result<ShardCounts>> =
        pool.install(|| shards.par_iter().map(|&s| run_shard(spec, &plan, s)).collect());

    let m = spec.thresholds.len();
    let mut hist = vec![vec![0u64; m + 1]; spec.n / 2 + 1];
    let mut total = 0;
    let mut ambiguous = 0;
    let mut ambiguous_examples = Vec::new();
    for part in parts {
        let part = part?;
        for (row, prow) in hist.iter_mut().zip(part.hist.iter()) {
            for (a, b) in row.iter_mut().zip(prow.iter()) {
                *a += b;
            }
        }
        total += part.total;
        ambiguous += part.ambiguous;
        for p in part.ambiguous_examples {
            if ambiguous_examples.len() < 16 {
                ambiguous_examples.push(p);
            }
        }
    }
    let counts = hist
        .iter()
        .map(|row| {
            row[..m]
                .iter()
                .scan(0u64, |acc, v| {
                    *acc += v;
                    Some(*acc)
                })
                .collect()
        })
        .collect();
    Ok(CensusTable {
        spec: spec.clone(),
        counts,
        total,
        ambiguous,
        ambiguous_examples,
        enumerated: plan.cardinality,
        elapsed: started.elapsed().as_secs_f64(),
    })
}

/// A threshold above every `|D|` on `P_n(Q)` for naive height:
/// `(n+1)^n (2Q)^{2n-2} n^n`.
pub fn crude_discriminant_bound(n: usize, q: u64) -> BigInt {
    BigInt::from(n + 1).pow(n as u32)
        * BigInt::from(2 * q).pow(2 * n as u32 - 2)
        * BigInt::from(n).pow(n as u32)
}

/// `⌊δ Q^{2n-2}⌋`, the integer threshold equivalent to `|D| ≤ δ Q^{2n-2}`;
/// exact for every finite `δ ≥ 0`.
pub fn threshold_for_delta(delta: f64, q: u64, n: usize) -> Result<BigInt> {
    let d = BigRational::from_float(delta)
        .filter(|d| !d.is_negative())
        .ok_or_else(|| Error::InvalidInput(format!("δ must be finite and nonnegative, got {delta}")))?;
    let scaled = d * BigRational::from_integer(BigInt::from(q).pow(2 * n as u32 - 2));
    Ok(scaled.floor().to_integer())
}

/// `⌊Q^{2n-2-2v}⌋`, the threshold of the corollary's `v`-parameterization.
pub fn corollary_threshold(n: usize, q: u64, v: f64) -> Result<BigInt> {
    let e = 2.0 * n as f64 - 2.0 - 2.0 * v;
    let x = (q as f64).powf(e).floor();
    if !x.is_finite() || x < 0.0 {
        return Err(Error::InvalidInput(format!("Q^(2n-2-2v) is not representable for Q = {q}, v = {v}")));
    }
    BigRational::from_float(x)
        .map(|r| r.to_integer())
        .ok_or_else(|| Error::InvalidInput(format!("invalid threshold for v = {v}")))
}

/// `2Q (2Q+1)^n`, the size of `P_n(Q)` for naive height.
pub fn naive_total(n: usize, q: u64) -> BigInt {
    BigInt::from(2 * q) * BigInt::from(2 * q + 1).pow(n as u32)
}
