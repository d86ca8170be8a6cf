//! The constant `λ₀` in `f_0(δ) ~ λ₀ δ^{(n+2)/(2n)}`.
//!
//! In root space the small-δ volume becomes
//! `λ₀ = 4/(n+1)! · ∫_{-1}^{1} I₃(K̃(τ)) dτ`, where `I₃(K)` is an integral over
//! `ℝ^{n-1}` of a function of the reduced discriminant `Δ̃(θ)`. The cone
//! reduction turns `I₃(K)` into `c_n K^{2/n} I₄` with the singular integral
//!
//! ```text
//! I₄ = ∫_{[-1,1]^{n-2}} ∏|ξ_i|^{-2/n} (1-ξ_i)^{-2/n} ∏_{i<j} |ξ_i-ξ_j|^{-2/n} dξ.
//! ```
//!
//! The cone formula covers one of the `2m` congruent cones `{±x_k > |x_i|}`
//! of `ℝ^m` (`m = n-1`); [`Normalization`] selects how it is lifted to the
//! whole space.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Beta, Distribution};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use statrs::function::gamma::ln_gamma;

use crate::census::binomial;
use crate::quad::{gauss_kronrod, gauss_kronrod_pieces, tanh_sinh, tanh_sinh_pieces, Method, QuadratureResult};
use crate::rng::{median_of_means, stream};
use crate::volume::{cauchy, factorial, k_of_roots};
use crate::{Error, HeightKind, Result};

/// `Δ̃(θ) = ∏ θ_k² ∏_{i<j} (θ_i - θ_j)²`.
pub fn delta_tilde(theta: &[f64]) -> f64 {
    let mut p: f64 = theta.iter().map(|t| t * t).product();
    for i in 0..theta.len() {
        for j in i + 1..theta.len() {
            p *= (theta[i] - theta[j]).powi(2);
        }
    }
    p
}

/// `K̃(τ) = 1 / h((x - τ)^n)`.
pub fn k_tilde(tau: f64, n: usize, kind: HeightKind) -> f64 {
    let t = tau.abs();
    match kind {
        HeightKind::Naive => {
            let h = (0..=n).map(|k| binomial(n, k) as f64 * t.powi((n - k) as i32)).fold(0.0, f64::max);
            1.0 / h
        }
        HeightKind::Length => 1.0 / (1.0 + t).powi(n as i32),
        HeightKind::Mahler => 1.0 / t.max(1.0).powi(n as i32),
    }
}

/// Points of `(0, 1)` where the maximizing term of the naive height of
/// `(x - τ)^n` changes, located by bisection to `1e-12`.
pub fn k_tilde_breakpoints(n: usize, kind: HeightKind) -> Vec<f64> {
    if kind != HeightKind::Naive {
        return Vec::new();
    }
    let term = |k: usize, t: f64| binomial(n, k) as f64 * t.powi((n - k) as i32);
    let mut out: Vec<f64> = Vec::new();
    for k in 0..=n {
        for k2 in k + 1..=n {
            // ln g_k - ln g_k2 increases with τ; a crossing in (0, 1) exists
            // iff g_k > g_k2 at τ = 1
            if binomial(n, k) <= binomial(n, k2) {
                continue;
            }
            let (mut lo, mut hi) = (0.0f64, 1.0f64);
            while hi - lo > 1e-12 {
                let mid = 0.5 * (lo + hi);
                if term(k, mid) < term(k2, mid) {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            let r = 0.5 * (lo + hi);
            let top = (0..=n).map(|j| term(j, r)).fold(0.0, f64::max);
            if term(k, r) >= top * (1.0 - 1e-9) {
                out.push(r);
            }
        }
    }
    out.sort_by(|a, b| a.partial_cmp(b).unwrap());
    out.dedup_by(|a, b| (*a - *b).abs() < 1e-10);
    out
}

/// `∫_{-1}^{1} K̃(τ)^{2/n} dτ` by adaptive Gauss-Kronrod on the smooth pieces.
pub fn ktau_integral(n: usize, kind: HeightKind, tol: f64) -> QuadratureResult {
    let bp = k_tilde_breakpoints(n, kind);
    let mut pts: Vec<f64> = bp.iter().rev().map(|b| -b).collect();
    pts.insert(0, -1.0);
    pts.push(0.0);
    pts.extend(bp.iter().copied());
    pts.push(1.0);
    let e = 2.0 / n as f64;
    gauss_kronrod_pieces(|t| k_tilde(t, n, kind).powf(e), &pts, tol)
}

/// How the single-cone formula is lifted to `ℝ^{n-1}`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Normalization {
    /// The cone formula as is (one cone).
    Cone,
    /// The cone formula times `m`.
    TimesM,
    /// The cone formula times `2m`: all congruent cones of `ℝ^m`.
    #[default]
    #[serde(rename = "times-2m")]
    TimesTwoM,
}

impl Normalization {
    pub const ALL: [Normalization; 3] = [Normalization::Cone, Normalization::TimesM, Normalization::TimesTwoM];

    pub fn factor(self, m: usize) -> f64 {
        match self {
            Normalization::Cone => 1.0,
            Normalization::TimesM => m as f64,
            Normalization::TimesTwoM => 2.0 * m as f64,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Normalization::Cone => "cone",
            Normalization::TimesM => "times-m",
            Normalization::TimesTwoM => "times-2m",
        }
    }
}

impl std::str::FromStr for Normalization {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "cone" => Ok(Normalization::Cone),
            "times-m" => Ok(Normalization::TimesM),
            "times-2m" => Ok(Normalization::TimesTwoM),
            other => Err(Error::Parse(format!("unknown normalization `{other}`"))),
        }
    }
}

/// `I₃(K) / (K^{2/n} I₄)`: the cone constant `n(n+1)/((n-1)(n+2))` times the
/// normalization factor.
pub fn i3_coefficient(n: usize, norm: Normalization) -> f64 {
    let nf = n as f64;
    norm.factor(n - 1) * nf * (nf + 1.0) / ((nf - 1.0) * (nf + 2.0))
}

/// `I₃(K)` from a known `I₄`.
pub fn i3_value(n: usize, k: f64, i4: f64, norm: Normalization) -> f64 {
    i3_coefficient(n, norm) * k.powf(2.0 / n as f64) * i4
}

/// `√Δ̃(θ) · min(K, Δ̃(θ)^{-1/(2n-2)})^{n+1}`, the integrand of `I₃(K)`.
pub fn i3_integrand(k: f64, theta: &[f64]) -> f64 {
    let n = theta.len() + 1;
    let d = delta_tilde(theta);
    if d == 0.0 {
        return 0.0;
    }
    let psi = d.powf(-1.0 / (2 * n - 2) as f64).min(k);
    d.sqrt() * psi.powi(n as i32 + 1)
}

/// Roots `α_1 = τ`, `α_i = τ + ρ θ_{i-1}`.
pub fn center_change(tau: f64, rho: f64, theta: &[f64]) -> Vec<f64> {
    std::iter::once(tau).chain(theta.iter().map(|t| tau + rho * t)).collect()
}

/// Integrand of `Ĩ₁(ρ)`: `√Δ̃(θ) · min(Δ̃^{-1/(2n-2)}, K(τ + ρθ̂))^{n+1}`.
/// At `ρ = 0` the height factor is `K̃(τ)`.
pub fn i1_tilde_integrand(rho: f64, tau: f64, theta: &[f64], kind: HeightKind) -> f64 {
    let n = theta.len() + 1;
    let k = if rho == 0.0 { k_tilde(tau, n, kind) } else { k_of_roots(&center_change(tau, rho, theta), kind) };
    i3_integrand(k, theta)
}

/// Sampling controls for the Monte Carlo integrators.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct McBudget {
    pub max_samples: u64,
    pub seed: u64,
    pub workers: usize,
    /// Independent groups for median-of-means; each owns stream `(seed, g)`.
    pub groups: usize,
}

impl McBudget {
    pub fn new(max_samples: u64, seed: u64) -> Self {
        Self { max_samples, seed, workers: 1, groups: 64 }
    }

    pub fn with_workers(mut self, workers: usize) -> Self {
        self.workers = workers;
        self
    }

    fn validate(&self) -> Result<()> {
        if self.workers == 0 || self.groups < 3 || self.max_samples < self.groups as u64 {
            return Err(Error::InvalidInput("need workers ≥ 1, groups ≥ 3 and samples ≥ groups".into()));
        }
        Ok(())
    }
}

/// Runs `draw` in `groups` independent streams, doubling the per-group
/// sample count until the median-of-means error meets `target_rel_err` or
/// the budget is spent. Group results do not depend on the worker count.
fn grouped_mc<F>(budget: &McBudget, target_rel_err: f64, draw: F) -> Result<QuadratureResult>
where
    F: Fn(&mut ChaCha8Rng) -> f64 + Sync,
{
    budget.validate()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(budget.workers)
        .build()
        .map_err(|e| Error::InvalidInput(format!("cannot start worker pool: {e}")))?;
    let g = budget.groups;
    let mut state: Vec<(ChaCha8Rng, f64, u64)> = (0..g).map(|i| (stream(budget.seed, i as u64), 0.0, 0)).collect();
    let per_group_cap = budget.max_samples / g as u64;
    let mut chunk = per_group_cap.clamp(1, 1024);
    loop {
        pool.install(|| {
            state.par_iter_mut().for_each(|(rng, sum, count)| {
                for _ in 0..chunk {
                    *sum += draw(rng);
                }
                *count += chunk;
            })
        });
        let means: Vec<f64> = state.iter().map(|(_, s, c)| s / *c as f64).collect();
        let (value, err) = median_of_means(&means);
        let done = state[0].2;
        let met = err <= target_rel_err * value.abs();
        if met || done >= per_group_cap {
            return Ok(QuadratureResult {
                value,
                error_estimate: err,
                method: Method::McImportance,
                evaluations: done * g as u64,
                target_missed: !met,
            });
        }
        chunk = done.min(per_group_cap - done);
    }
}

/// Proposal for one `ξ ∈ [-1, 1]`: with probability `p₊` a `Beta(1-a, 1-a)`
/// point in `(0, 1)`, otherwise `-U^{1/(1-a)}` in `(-1, 0)`. Returns `ξ` and
/// the ratio `|ξ|^{-a}|1-ξ|^{-a} / q(ξ)`, which is bounded.
struct XiProposal {
    a: f64,
    beta: Beta<f64>,
    beta_norm: f64,
    p_plus: f64,
}

impl XiProposal {
    fn new(a: f64) -> Self {
        let b = 1.0 - a;
        let beta_norm = (2.0 * ln_gamma(b) - ln_gamma(2.0 * b)).exp();
        let neg_norm = 1.0 / b;
        Self { a, beta: Beta::new(b, b).expect("positive shape"), beta_norm, p_plus: beta_norm / (beta_norm + neg_norm) }
    }

    fn draw(&self, rng: &mut ChaCha8Rng) -> (f64, f64) {
        if rng.random::<f64>() < self.p_plus {
            let x = self.beta.sample(rng);
            (x, self.beta_norm / self.p_plus)
        } else {
            let u = 1.0 - rng.random::<f64>();
            let x = -u.powf(1.0 / (1.0 - self.a));
            (x, (1.0 - x).powf(-self.a) / ((1.0 - self.p_plus) * (1.0 - self.a)))
        }
    }
}

fn check_i4_degree(n: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::UnsupportedDegree { degree: n, min: 2 });
    }
    if n > 12 {
        return Err(Error::InvalidInput(format!("degree {n} is beyond the supported range 2..=12")));
    }
    Ok(())
}

/// `I₄` by importance sampling (`n ≥ 4`); the one-dimensional `n = 3` case
/// and the empty product `n = 2` are evaluated deterministically.
pub fn integrate_i4(n: usize, target_rel_err: f64, budget: &McBudget) -> Result<QuadratureResult> {
    check_i4_degree(n)?;
    match n {
        2 => return Ok(QuadratureResult::grid(1.0, 0.0, 0)),
        3 => return integrate_i4_grid(3, target_rel_err.min(1e-10)),
        _ => {}
    }
    let a = 2.0 / n as f64;
    let prop = XiProposal::new(a);
    let dim = n - 2;
    grouped_mc(budget, target_rel_err, |rng| {
        let mut xi = [0.0f64; 12];
        let mut w = 1.0;
        for x in xi.iter_mut().take(dim) {
            let (v, r) = prop.draw(rng);
            *x = v;
            w *= r;
        }
        for i in 0..dim {
            for j in i + 1..dim {
                w *= (xi[i] - xi[j]).abs().powf(-a);
            }
        }
        if w.is_finite() {
            w
        } else {
            0.0
        }
    })
}

/// Distance from `x` to the special point `s`, exact when `s` is an endpoint
/// of the current piece `[lo, hi]`.
fn dist(x: f64, s: f64, lo: f64, hi: f64, dl: f64, dr: f64) -> f64 {
    if s == lo {
        dl
    } else if s == hi {
        dr
    } else {
        (x - s).abs()
    }
}

/// `I₄` by (iterated) tanh-sinh quadrature for `n ≤ 4`.
pub fn integrate_i4_grid(n: usize, tol: f64) -> Result<QuadratureResult> {
    check_i4_degree(n)?;
    let a = 2.0 / n as f64;
    match n {
        2 => Ok(QuadratureResult::grid(1.0, 0.0, 0)),
        3 => {
            let mut total = QuadratureResult::grid(0.0, 0.0, 0);
            for (lo, hi) in [(-1.0, 0.0), (0.0, 1.0)] {
                let r = tanh_sinh(
                    |x, dl, dr| dist(x, 0.0, lo, hi, dl, dr).powf(-a) * dist(x, 1.0, lo, hi, dl, dr).powf(-a),
                    lo,
                    hi,
                    tol,
                );
                total.value += r.value;
                total.error_estimate += r.error_estimate;
                total.evaluations += r.evaluations;
                total.target_missed |= r.target_missed;
            }
            Ok(total)
        }
        4 => {
            let inner_tol = (tol * 1e-2).max(1e-13);
            let mut evals = 0u64;
            let mut missed = false;
            // ∫_lo^hi |y|^{-a} |1-y|^{-a} |y-c|^{-a} dy with pieces split at
            // the singularities and geometrically refined between 0 and c
            let mut inner = |c: f64, lo: f64, hi: f64| -> f64 {
                let mut pts = vec![lo, 0.0, c, 1.0, hi];
                let mut r = 16.0 * c.abs();
                while r < 2.0 {
                    pts.push(r);
                    pts.push(-r);
                    r *= 16.0;
                }
                pts.retain(|p| (lo..=hi).contains(p));
                pts.sort_by(|p, q| p.partial_cmp(q).unwrap());
                pts.dedup();
                let mut sum = 0.0;
                for w in pts.windows(2) {
                    let (plo, phi) = (w[0], w[1]);
                    let r = tanh_sinh(
                        |x, dl, dr| {
                            let d0 = dist(x, 0.0, plo, phi, dl, dr);
                            let d1 = dist(x, 1.0, plo, phi, dl, dr);
                            let dc = dist(x, c, plo, phi, dl, dr);
                            d0.powf(-a) * d1.powf(-a) * dc.powf(-a)
                        },
                        plo,
                        phi,
                        inner_tol,
                    );
                    evals += r.evaluations;
                    missed |= r.target_missed;
                    sum += r.value;
                }
                sum
            };
            let mut total = QuadratureResult::grid(0.0, 0.0, 0);
            for (lo, hi) in [(-1.0, 0.0), (0.0, 1.0)] {
                let r = tanh_sinh(
                    |_, dl, dr| {
                        if hi == 0.0 {
                            // ξ1 = -dr
                            dr.powf(-a) * (1.0 + dr).powf(-a) * inner(-dr, -1.0, 1.0)
                        } else if dl <= 0.5 {
                            dl.powf(-a) * dr.powf(-a) * inner(dl, -1.0, 1.0)
                        } else {
                            // mirror y = 1 - ξ maps the integrand onto itself
                            // with c = 1 - ξ1 = dr, kept exact near ξ1 = 1
                            dl.powf(-a) * dr.powf(-a) * inner(dr, 0.0, 2.0)
                        }
                    },
                    lo,
                    hi,
                    tol,
                );
                total.value += r.value;
                total.error_estimate += r.error_estimate;
                total.target_missed |= r.target_missed;
            }
            total.evaluations = evals;
            total.target_missed |= missed;
            Ok(total)
        }
        _ => Err(Error::InvalidInput(format!("grid evaluation of I4 is implemented for n ≤ 4, got {n}"))),
    }
}

/// The Selberg integral
/// `S_m(α, β, γ) = ∫_{[0,1]^m} ∏ t_i^{α-1}(1-t_i)^{β-1} ∏_{i<j}|t_i-t_j|^{2γ} dt`
/// from its Gamma-product formula.
pub fn selberg_closed_form(m: usize, alpha: f64, beta: f64, gamma: f64) -> Result<f64> {
    if m == 0 {
        return Err(Error::Domain("Selberg integral needs m ≥ 1".into()));
    }
    if !(alpha.is_finite() && beta.is_finite() && gamma.is_finite()) {
        return Err(Error::Domain("Selberg parameters must be finite".into()));
    }
    if alpha <= 0.0 {
        return Err(Error::Domain(format!("convergence requires α > 0, got α = {alpha}")));
    }
    if beta <= 0.0 {
        return Err(Error::Domain(format!("convergence requires β > 0, got β = {beta}")));
    }
    let mf = m as f64;
    let mut bound = 1.0 / mf;
    let mut which = "1/m";
    if m > 1 {
        if alpha / (mf - 1.0) < bound {
            bound = alpha / (mf - 1.0);
            which = "α/(m-1)";
        }
        if beta / (mf - 1.0) < bound {
            bound = beta / (mf - 1.0);
            which = "β/(m-1)";
        }
    }
    if gamma <= -bound {
        return Err(Error::Domain(format!(
            "convergence requires γ > -min(1/m, α/(m-1), β/(m-1)) = -{bound} (binding term {which}), got γ = {gamma}"
        )));
    }
    let mut log = 0.0;
    for j in 0..m {
        let jf = j as f64;
        log += ln_gamma(alpha + jf * gamma) + ln_gamma(beta + jf * gamma) + ln_gamma(1.0 + (jf + 1.0) * gamma)
            - ln_gamma(alpha + beta + (mf + jf - 1.0) * gamma)
            - ln_gamma(1.0 + gamma);
    }
    Ok(log.exp())
}

/// `2^{n-2} S_{n-2}((n-2)/n, (n-2)/n, -1/n)`, an upper bound for `I₄`.
pub fn i4_selberg_bound(n: usize) -> Result<f64> {
    if n < 4 {
        return Err(Error::UnsupportedDegree { degree: n, min: 4 });
    }
    let nf = n as f64;
    let m = n - 2;
    let limit = if n == 4 { 1.0 / (nf - 2.0) } else { (1.0 / (nf - 2.0)).min((nf - 2.0) / (nf * (nf - 3.0))) };
    if -1.0 / nf <= -limit {
        return Err(Error::Domain(format!("-1/n > -min(1/(n-2), (n-2)/(n(n-3))) fails for n = {n}")));
    }
    let s = selberg_closed_form(m, (nf - 2.0) / nf, (nf - 2.0) / nf, -1.0 / nf)?;
    Ok(2f64.powi(m as i32) * s)
}

/// `λ₀` together with its factors.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Lambda0Result {
    pub n: usize,
    pub height: HeightKind,
    #[serde(rename = "I4")]
    pub i4: f64,
    #[serde(rename = "I4_err")]
    pub i4_err: f64,
    #[serde(rename = "Ktau_integral")]
    pub ktau_integral: f64,
    #[serde(rename = "Ktau_err")]
    pub ktau_err: f64,
    pub lambda0: f64,
    pub lambda0_err: f64,
    pub method: Method,
    pub normalization: Normalization,
    pub target_missed: bool,
}

impl Lambda0Result {
    pub fn as_quadrature(&self) -> QuadratureResult {
        QuadratureResult {
            value: self.lambda0,
            error_estimate: self.lambda0_err,
            method: self.method,
            evaluations: 0,
            target_missed: self.target_missed,
        }
    }
}

/// `λ₀ = 4/(n+1)! · I₃-coefficient · ∫K̃^{2/n} · I₄`. `I₄` comes from the
/// grid for `n ≤ 4` and from importance sampling above.
pub fn lambda0(
    n: usize,
    kind: HeightKind,
    target_rel_err: f64,
    norm: Normalization,
    budget: &McBudget,
) -> Result<Lambda0Result> {
    check_i4_degree(n)?;
    if !(target_rel_err > 0.0) {
        return Err(Error::InvalidInput("target relative error must be positive".into()));
    }
    let kt = ktau_integral(n, kind, (target_rel_err * 1e-3).max(1e-13));
    let i4 = if n <= 4 {
        integrate_i4_grid(n, (target_rel_err * 1e-2).clamp(1e-12, 1e-6))?
    } else {
        integrate_i4(n, target_rel_err, budget)?
    };
    let pre = 4.0 / factorial(n + 1) * i3_coefficient(n, norm);
    let value = pre * kt.value * i4.value;
    let rel = ((kt.error_estimate / kt.value).powi(2) + (i4.error_estimate / i4.value).powi(2)).sqrt();
    Ok(Lambda0Result {
        n,
        height: kind,
        i4: i4.value,
        i4_err: i4.error_estimate,
        ktau_integral: kt.value,
        ktau_err: kt.error_estimate,
        lambda0: value,
        lambda0_err: value * rel,
        method: i4.method,
        normalization: norm,
        target_missed: kt.target_missed || i4.target_missed,
    })
}

/// `λ₀` straight from the root-space integral
/// `4/(n+1)! ∫_{-1}^{1} dτ ∫_{ℝ^{n-1}} √Δ̃ min(K̃(τ), Δ̃^{-1/(2n-2)})^{n+1} dθ`
/// with `τ` uniform and `θ` Cauchy; bypasses the cone reduction entirely.
pub fn lambda0_root_space(n: usize, kind: HeightKind, budget: &McBudget) -> Result<QuadratureResult> {
    check_i4_degree(n)?;
    let pre = 4.0 / factorial(n + 1);
    let mut r = grouped_mc(budget, 0.0, |rng| {
        let tau = 2.0 * rng.random::<f64>() - 1.0;
        let mut theta = [0.0f64; 11];
        let mut density = 0.5;
        for t in theta.iter_mut().take(n - 1) {
            let (x, p) = cauchy(rng);
            *t = x;
            density *= p;
        }
        pre * i3_integrand(k_tilde(tau, n, kind), &theta[..n - 1]) / density
    })?;
    // a zero target always runs to the budget; that is not a miss
    r.target_missed = false;
    Ok(r)
}

/// Test functions for the cone-reduction identity.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum TestFunction {
    /// `f(x) = |x|^c`.
    RadialPower { c: f64 },
    /// `f = Δ̃` on `ℝ^m`, homogeneous of degree `m(m+1)`.
    ReducedDiscriminant,
}

impl TestFunction {
    pub fn degree(self, m: usize) -> f64 {
        match self {
            TestFunction::RadialPower { c } => c,
            TestFunction::ReducedDiscriminant => (m * (m + 1)) as f64,
        }
    }

    pub fn eval(self, x: &[f64]) -> f64 {
        match self {
            TestFunction::RadialPower { c } => x.iter().map(|v| v * v).sum::<f64>().powf(0.5 * c),
            TestFunction::ReducedDiscriminant => delta_tilde(x),
        }
    }
}

/// Cone integral, the closed-form right-hand side, and the full-space
/// integral of `min(f^{d₁}, κ f^{d₂})`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScalingReport {
    pub m: usize,
    pub c: f64,
    pub d1: f64,
    pub d2: f64,
    pub kappa: f64,
    pub function: TestFunction,
    /// Over `{x_m > |x_i|}`, by radial and angular quadrature.
    pub cone: f64,
    pub cone_err: f64,
    /// `κ^{-(m+cd₁)/(c(d₂-d₁))} (1/(m+cd₂) - 1/(m+cd₁)) ∫ f(t,1)^{-m/c} dt`.
    pub formula: f64,
    pub formula_err: f64,
    /// Over all of `ℝ^m`, in polar coordinates.
    pub full_space: f64,
    pub full_space_err: f64,
    /// `full_space / (factor · formula) - 1` for each normalization.
    pub deviations: Vec<(Normalization, f64)>,
    /// The normalization whose deviation is below `tol`, if any.
    pub matching: Option<Normalization>,
}

/// `∫_0^∞ s^{m-1} min(s^{cd₁} F^{d₁}, κ s^{cd₂} F^{d₂}) ds` by quadrature up
/// to four times the crossing radius plus the exact power-law tail.
fn radial_part(m: usize, c: f64, d1: f64, d2: f64, kappa: f64, f: f64, tol: f64) -> (f64, f64) {
    if f <= 0.0 {
        return (0.0, 0.0);
    }
    let mf = m as f64;
    let star = (f.powf(d1 - d2) / kappa).powf(1.0 / (c * (d2 - d1)));
    let g = |s: f64| s.powf(mf - 1.0) * (s.powf(c * d1) * f.powf(d1)).min(kappa * s.powf(c * d2) * f.powf(d2));
    let near = tanh_sinh(|x, _, _| g(x), 0.0, star, tol);
    let r = 4.0 * star;
    let far = gauss_kronrod(g, star, r, tol);
    let tail = f.powf(d1) * r.powf(mf + c * d1) / -(mf + c * d1);
    (near.value + far.value + tail, near.error_estimate + far.error_estimate)
}

/// Numerical check of the cone-reduction identity for `m ∈ {1, 2}`.
pub fn scaling_reduction_check(
    m: usize,
    d1: f64,
    d2: f64,
    kappa: f64,
    function: TestFunction,
    tol: f64,
) -> Result<ScalingReport> {
    if !(1..=2).contains(&m) {
        return Err(Error::Domain(format!("the reduction check supports m ∈ {{1, 2}}, got {m}")));
    }
    let c = function.degree(m);
    let mf = m as f64;
    if !(c > 0.0) {
        return Err(Error::Domain(format!("homogeneity degree must be positive, got c = {c}")));
    }
    if !(c * d1 < -mf && -mf < c * d2) {
        return Err(Error::Domain(format!("need c·d1 < -m < c·d2, got c·d1 = {}, c·d2 = {}", c * d1, c * d2)));
    }
    if !(kappa > 0.0) {
        return Err(Error::Domain(format!("κ must be positive, got {kappa}")));
    }
    let inner_tol = tol * 1e-2;
    let radial = |f: f64| radial_part(m, c, d1, d2, kappa, f, inner_tol);
    let pref = kappa.powf(-(mf + c * d1) / (c * (d2 - d1))) * (1.0 / (mf + c * d2) - 1.0 / (mf + c * d1));
    let (cone, cone_err, formula, formula_err, full, full_err);
    if m == 1 {
        let (v, e) = radial(function.eval(&[1.0]));
        let (w, ew) = radial(function.eval(&[-1.0]));
        cone = v;
        cone_err = e;
        formula = pref * function.eval(&[1.0]).powf(-mf / c);
        formula_err = 0.0;
        full = v + w;
        full_err = e + ew;
    } else {
        // cone: x = s (t, 1), t ∈ [-1, 1]
        let cone_q = tanh_sinh_pieces(|t, _, _| radial(function.eval(&[t, 1.0])).0, &[-1.0, 0.0, 1.0], tol);
        let formula_q =
            tanh_sinh_pieces(|t, _, _| function.eval(&[t, 1.0]).powf(-mf / c), &[-1.0, 0.0, 1.0], tol * 1e-2);
        cone = cone_q.value;
        cone_err = cone_q.error_estimate;
        formula = pref * formula_q.value;
        formula_err = pref * formula_q.error_estimate;
        // full space in polar coordinates; the zero set of the built-in
        // functions lies on multiples of π/4
        let q = std::f64::consts::FRAC_PI_4;
        let pts: Vec<f64> = (0..=8).map(|k| k as f64 * q).collect();
        let full_q = tanh_sinh_pieces(|phi, _, _| radial(function.eval(&[phi.cos(), phi.sin()])).0, &pts, tol);
        full = full_q.value;
        full_err = full_q.error_estimate;
    }
    let deviations: Vec<(Normalization, f64)> =
        Normalization::ALL.iter().map(|&nm| (nm, full / (nm.factor(m) * formula) - 1.0)).collect();
    let mut matching = None;
    for &(nm, dev) in &deviations {
        if dev.abs() <= tol.max(1e-12) * 10.0 {
            matching = Some(nm);
            break;
        }
    }
    Ok(ScalingReport {
        m,
        c,
        d1,
        d2,
        kappa,
        function,
        cone,
        cone_err,
        formula,
        formula_err,
        full_space: full,
        full_space_err: full_err,
        deviations,
        matching,
    })
}
