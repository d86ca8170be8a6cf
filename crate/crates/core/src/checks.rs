//! Self-contained property checks with pass/fail verdicts, shared by the
//! command-line `check` subcommand and the acceptance suite.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::Zero;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::asymptotic::{scaling_reduction_check, selberg_closed_form, Normalization, TestFunction};
use crate::census::{run_census, CensusSpec};
use crate::poly::discriminant::discriminant_from_roots;
use crate::poly::{big_to_f64, coeffs_from_roots, discriminant_det, discriminant_prs, jacobian_formula};
use crate::quad::tanh_sinh;
use crate::rng::stream;
use crate::volume::{estimate_all, inversion_symmetry_check, VolumeSpec};
use crate::{Error, HeightKind, IntPolynomial, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckOutcome {
    pub name: String,
    pub pass: bool,
    pub summary: String,
    pub metrics: BTreeMap<String, f64>,
}

impl CheckOutcome {
    fn new(name: &str, pass: bool, summary: String, metrics: &[(&str, f64)]) -> Self {
        Self {
            name: name.into(),
            pass,
            summary,
            metrics: metrics.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
        }
    }
}

/// Names accepted by [`run_check`].
pub const CHECK_NAMES: [&str; 8] =
    ["census-total", "discriminant", "hand-census", "jacobian", "scaling", "selberg", "inversion", "determinism"];

/// Sizes for the randomized checks.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CheckBudget {
    pub samples: u64,
    pub seed: u64,
    pub workers: usize,
}

pub fn run_check(name: &str, budget: &CheckBudget) -> Result<CheckOutcome> {
    match name {
        "census-total" => census_total(&[2, 3, 4], &[1, 2, 5, 10], budget.workers),
        "discriminant" => discriminant_oracle(budget.samples.min(1_000_000), budget.seed),
        "hand-census" => hand_census(),
        "jacobian" => jacobian_identity(budget.samples.min(1_000_000), budget.seed),
        "scaling" => scaling_reduction(),
        "selberg" => selberg_cross_check(),
        "inversion" => inversion(&[2, 3], 0.5, budget.samples, budget.seed),
        "determinism" => determinism(budget.seed, budget.workers),
        _ => Err(Error::InvalidInput(format!("unknown check `{name}`; known: {}", CHECK_NAMES.join(", ")))),
    }
}

/// `#P_n(Q) = 2Q(2Q+1)^n` for naive height.
pub fn census_total(ns: &[usize], qs: &[u64], workers: usize) -> Result<CheckOutcome> {
    let mut bad = Vec::new();
    for &n in ns {
        for &q in qs {
            let spec = CensusSpec::new(n, q, HeightKind::Naive, vec![BigInt::zero()])?.with_workers(workers);
            let t = run_census(&spec)?;
            let want = 2 * q * (2 * q + 1).pow(n as u32);
            if t.total != want {
                bad.push(format!("n={n} Q={q}: {} ≠ {want}", t.total));
            }
        }
    }
    let cases = (ns.len() * qs.len()) as f64;
    Ok(CheckOutcome::new(
        "census-total",
        bad.is_empty(),
        if bad.is_empty() { format!("{cases} totals exact") } else { bad.join("; ") },
        &[("cases", cases), ("mismatches", bad.len() as f64)],
    ))
}

/// Determinant and subresultant discriminants agree exactly, and both match
/// the root product to `10⁻⁶` relative when nonzero.
pub fn discriminant_oracle(count: u64, seed: u64) -> Result<CheckOutcome> {
    let mut rng = stream(seed, 0);
    let (mut exact_bad, mut root_bad, mut nonzero) = (0u64, 0u64, 0u64);
    let mut worst = 0.0f64;
    for _ in 0..count {
        let n = rng.random_range(2..=6usize);
        let mut c: Vec<i64> = (0..n).map(|_| rng.random_range(-100..=100)).collect();
        c.push(rng.random_range(1..=100) * if rng.random_bool(0.5) { 1 } else { -1 });
        let p = IntPolynomial::from_i64(&c)?;
        let (det, prs) = (discriminant_det(&p)?, discriminant_prs(&p)?);
        if det != prs {
            exact_bad += 1;
        }
        if !det.0.is_zero() {
            nonzero += 1;
            let exact = big_to_f64(&det.0);
            let rel = (discriminant_from_roots(&p, 1e-12)? - exact).abs() / exact.abs();
            worst = worst.max(rel);
            if rel > 1e-6 {
                root_bad += 1;
            }
        }
    }
    Ok(CheckOutcome::new(
        "discriminant",
        exact_bad == 0 && root_bad == 0,
        format!("{count} polynomials: {exact_bad} exact mismatches, {root_bad} root-product deviations > 1e-6 (worst {worst:.2e})"),
        &[
            ("polynomials", count as f64),
            ("nonzero", nonzero as f64),
            ("exact_mismatches", exact_bad as f64),
            ("root_product_failures", root_bad as f64),
            ("worst_rel_err", worst),
        ],
    ))
}

/// Quadratics with `|a_k| ≤ 1`, `|D| ≤ 4`: eight with real roots, six
/// without.
pub fn hand_census() -> Result<CheckOutcome> {
    let spec = CensusSpec::new(2, 1, HeightKind::Naive, vec![BigInt::from(4)])?;
    let t = run_census(&spec)?;
    let (n0, n1) = (t.count(0, 0), t.count(1, 0));
    Ok(CheckOutcome::new(
        "hand-census",
        n0 == 8 && n1 == 6,
        format!("N_0 = {n0}, N_1 = {n1}"),
        &[("N0", n0 as f64), ("N1", n1 as f64)],
    ))
}

fn det_f64(mut m: Vec<Vec<f64>>) -> f64 {
    let n = m.len();
    let mut d = 1.0;
    for k in 0..n {
        let piv = (k..n).max_by(|&a, &b| m[a][k].abs().total_cmp(&m[b][k].abs())).unwrap_or(k);
        if piv != k {
            m.swap(piv, k);
            d = -d;
        }
        d *= m[k][k];
        if m[k][k] == 0.0 {
            return 0.0;
        }
        for i in k + 1..n {
            let f = m[i][k] / m[k][k];
            for j in k..n {
                m[i][j] -= f * m[k][j];
            }
        }
    }
    d
}

/// Finite-difference Jacobian of `(b, z) ↦ b ∏(x - z_j)` against
/// `|b|^n ∏|z_i - z_j|` for `n ∈ {2, 3, 4, 5}`.
pub fn jacobian_identity(count: u64, seed: u64) -> Result<CheckOutcome> {
    let mut rng = stream(seed, 0);
    let mut worst = 0.0f64;
    for i in 0..count {
        let n = 2 + (i % 4) as usize;
        let b: f64 = rng.random_range(0.5..2.0) * if rng.random_bool(0.5) { 1.0 } else { -1.0 };
        let z: Vec<f64> = (0..n).map(|_| rng.random_range(-2.0..2.0)).collect();
        let mut x = vec![b];
        x.extend_from_slice(&z);
        let f = |x: &[f64]| coeffs_from_roots(x[0], &x[1..]).into_coords();
        // every coefficient is affine in each single coordinate, so central
        // differences carry rounding error only and a wide step keeps it small
        let h = 0.25;
        let mut jac = vec![vec![0.0; n + 1]; n + 1];
        for col in 0..=n {
            let at = |t: f64| {
                let mut y = x.clone();
                y[col] += t;
                f(&y)
            };
            let (p, m) = (at(h), at(-h));
            for row in 0..=n {
                jac[row][col] = (p[row] - m[row]) / (2.0 * h);
            }
        }
        let got = det_f64(jac).abs();
        let want = jacobian_formula(b, &z);
        if want > 0.0 {
            worst = worst.max((got - want).abs() / want);
        }
    }
    Ok(CheckOutcome::new(
        "jacobian",
        worst < 1e-5,
        format!("{count} points, worst relative error {worst:.2e}"),
        &[("points", count as f64), ("worst_rel_err", worst)],
    ))
}

/// The cone-reduction identity on its closed and quadrature examples, plus
/// the normalization that lifts the cone to the full space.
pub fn scaling_reduction() -> Result<CheckOutcome> {
    let f = TestFunction::RadialPower { c: 2.0 };
    let one = scaling_reduction_check(1, -1.0, 0.5, 1.0, f, 1e-10)?;
    let two = scaling_reduction_check(2, -2.0, 0.5, 1.0, f, 1e-8)?;
    let (c, d1, d2, kappa) = (2.0, -1.0, 0.5, 16.0);
    let k16 = scaling_reduction_check(1, d1, d2, kappa, f, 1e-10)?;
    // κ^{-(m + c d₁)/(c (d₂ - d₁))} at m = 1
    let exp = -(1.0 + c * d1) / (c * (d2 - d1));
    let ratio_err = (k16.cone / one.cone / kappa.powf(exp) - 1.0).abs();
    let closed_err = (one.cone - 1.5).abs();
    let two_err = (two.cone / two.formula - 1.0).abs();
    let disc = scaling_reduction_check(2, -0.5, 0.5, 1.0, TestFunction::ReducedDiscriminant, 1e-6)?;
    let lift = disc.matching.map(Normalization::as_str).unwrap_or("none");
    let pass = closed_err < 1e-8 && one.formula == 1.5 && two_err < 1e-3 && ratio_err < 1e-6;
    let mut metrics = vec![
        ("closed_case", one.cone),
        ("closed_case_err", closed_err),
        ("quadrature_case_rel_err", two_err),
        ("kappa_ratio_rel_err", ratio_err),
    ];
    let labels: Vec<String> = disc.deviations.iter().map(|(n, _)| format!("deviation_{}", n.as_str())).collect();
    for ((_, d), l) in disc.deviations.iter().zip(&labels) {
        metrics.push((l.as_str(), *d));
    }
    Ok(CheckOutcome::new(
        "scaling",
        pass,
        format!(
            "m=1 closed case {:.12}, m=2 rel err {two_err:.1e}, κ-ratio rel err {ratio_err:.1e}; full-space lift: {lift}",
            one.cone
        ),
        &metrics,
    ))
}

/// `S_2(α, β, γ)` by iterated tanh-sinh with the inner rule split at `t₁`.
pub fn selberg2_quadrature(alpha: f64, beta: f64, gamma: f64) -> f64 {
    let w = |dl: f64, dr: f64| dl.powf(alpha - 1.0) * dr.powf(beta - 1.0);
    tanh_sinh(
        |t1, dl1, dr1| {
            let left = tanh_sinh(|_, dl, dr| w(dl, 1.0 - dl) * dr.powf(2.0 * gamma), 0.0, t1, 1e-7).value;
            let right = tanh_sinh(|_, dl, dr| w(t1 + dl, dr) * dl.powf(2.0 * gamma), t1, 1.0, 1e-7).value;
            w(dl1, dr1) * (left + right)
        },
        0.0,
        1.0,
        1e-6,
    )
    .value
}

/// Closed-form Selberg integrals at `m = 2` against direct quadrature, and
/// rejection of parameters outside the convergence region.
pub fn selberg_cross_check() -> Result<CheckOutcome> {
    let sets = [(1.0, 1.0, 1.0), (0.5, 0.5, -0.25)];
    let mut worst = 0.0f64;
    for &(a, b, g) in &sets {
        let closed = selberg_closed_form(2, a, b, g)?;
        worst = worst.max((selberg2_quadrature(a, b, g) / closed - 1.0).abs());
    }
    let rejected = [(0.5, 0.5, -0.5), (0.0, 1.0, 0.1), (1.0, -0.5, 0.1), (1.0, 1.0, -0.6)]
        .iter()
        .filter(|&&(a, b, g)| selberg_closed_form(2, a, b, g).is_err())
        .count();
    Ok(CheckOutcome::new(
        "selberg",
        worst < 1e-3 && rejected == 4,
        format!("worst relative error {worst:.2e}; {rejected}/4 inadmissible sets rejected"),
        &[("worst_rel_err", worst), ("rejected", rejected as f64)],
    ))
}

/// Both sides of the inversion identity agree within four combined stderr.
pub fn inversion(ns: &[usize], delta: f64, samples: u64, seed: u64) -> Result<CheckOutcome> {
    let mut parts = Vec::new();
    let mut pass = true;
    let mut metrics = Vec::new();
    let mut zs = Vec::new();
    for &n in ns {
        let r = inversion_symmetry_check(n, delta, HeightKind::Naive, samples, seed)?;
        let comb = (r.lhs_stderr.powi(2) + 4.0 * r.rhs_stderr.powi(2)).sqrt();
        let z = (r.lhs - 2.0 * r.rhs).abs() / comb;
        pass &= r.pass;
        parts.push(format!("n={n}: {:.5} vs 2×{:.5} ({z:.2}σ)", r.lhs, r.rhs));
        zs.push((format!("z_n{n}"), z));
    }
    for (k, v) in &zs {
        metrics.push((k.as_str(), *v));
    }
    Ok(CheckOutcome::new("inversion", pass, parts.join("; "), &metrics))
}

/// Repeated volume runs reproduce hit counts; censuses agree across worker
/// counts.
pub fn determinism(seed: u64, workers: usize) -> Result<CheckOutcome> {
    let spec = VolumeSpec::new(4, HeightKind::Naive, 200_000, seed).with_workers(workers);
    let deltas = [1e-3, 1e-2, 1e-1];
    let a = estimate_all(&spec, &deltas)?;
    let b = estimate_all(&spec, &deltas)?;
    let hits = |v: &Vec<Vec<crate::volume::McEstimate>>| -> Vec<u64> { v.iter().flatten().map(|e| e.hits).collect() };
    let volume_ok = hits(&a) == hits(&b);
    let xs = vec![BigInt::from(0), BigInt::from(1000), BigInt::from(100_000)];
    let one = run_census(&CensusSpec::new(3, 6, HeightKind::Naive, xs.clone())?.with_workers(1))?;
    let many = run_census(&CensusSpec::new(3, 6, HeightKind::Naive, xs)?.with_workers(workers.max(2) + 1))?;
    let census_ok = one.same_counts(&many);
    Ok(CheckOutcome::new(
        "determinism",
        volume_ok && census_ok,
        format!("volume hits reproduced: {volume_ok}; census identical across worker counts: {census_ok}"),
        &[("volume_reproduced", volume_ok as u8 as f64), ("census_identical", census_ok as u8 as f64)],
    ))
}
