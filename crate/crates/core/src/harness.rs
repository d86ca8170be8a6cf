//! Quantitative reports joining census counts, volume estimates and `λ₀`.
//!
//! Every report is a pure function of its inputs, which can come from memory
//! or from the files written by [`crate::io`].

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::asymptotic::Lambda0Result;
use crate::census::{corollary_threshold, threshold_for_delta, CensusRow};
use crate::volume::McEstimate;
use crate::{Error, HeightKind, Result};

/// Result of a weighted log-log regression `value ≈ prefactor · δ^exponent`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PowerLawFit {
    pub exponent: f64,
    pub prefactor: f64,
    pub exponent_stderr: f64,
    pub prefactor_stderr: f64,
    pub points_used: usize,
    /// `Σ w (residual)²`.
    pub chi2: f64,
}

/// Weighted least squares of `ln value` on `ln δ` over `(δ, value, stderr)`
/// points, with weights `(value / stderr)²`. If any stderr is zero the fit
/// is unweighted and errors come from the residual scatter; otherwise the
/// formal errors are inflated by `max(1, χ²/(N-2))`.
pub fn fit_power_law(points: &[(f64, f64, f64)]) -> Result<PowerLawFit> {
    if points.len() < 3 {
        return Err(Error::InvalidInput(format!("a power-law fit needs at least 3 points, got {}", points.len())));
    }
    for &(d, v, e) in points {
        if !(d > 0.0 && d.is_finite()) {
            return Err(Error::Domain(format!("abscissa must be positive, got {d}")));
        }
        if !(v > 0.0 && v.is_finite()) {
            return Err(Error::Domain(format!("values must be positive, got {v}")));
        }
        if !(e >= 0.0 && e.is_finite()) {
            return Err(Error::Domain(format!("stderr must be finite and nonnegative, got {e}")));
        }
    }
    let weighted = points.iter().all(|p| p.2 > 0.0);
    let (mut s, mut sx, mut sy, mut sxx, mut sxy) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for &(d, v, e) in points {
        let w = if weighted { (v / e).powi(2) } else { 1.0 };
        let (x, y) = (d.ln(), v.ln());
        s += w;
        sx += w * x;
        sy += w * y;
        sxx += w * x * x;
        sxy += w * x * y;
    }
    let det = s * sxx - sx * sx;
    if det.abs() <= 1e-12 * s * sxx {
        return Err(Error::InvalidInput("all abscissae coincide".into()));
    }
    let slope = (s * sxy - sx * sy) / det;
    let intercept = (sxx * sy - sx * sxy) / det;
    let mut chi2 = 0.0;
    for &(d, v, e) in points {
        let w = if weighted { (v / e).powi(2) } else { 1.0 };
        chi2 += w * (v.ln() - intercept - slope * d.ln()).powi(2);
    }
    let dof = (points.len() - 2) as f64;
    let scale = if weighted { (chi2 / dof).max(1.0) } else { chi2 / dof };
    let prefactor = intercept.exp();
    Ok(PowerLawFit {
        exponent: slope,
        prefactor,
        exponent_stderr: (scale * s / det).sqrt(),
        prefactor_stderr: prefactor * (scale * sxx / det).sqrt(),
        points_used: points.len(),
        chi2,
    })
}

/// An estimate of `f_s(δ)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DensityPoint {
    pub delta: f64,
    pub value: f64,
    pub stderr: f64,
}

impl From<&McEstimate> for DensityPoint {
    fn from(e: &McEstimate) -> Self {
        Self { delta: e.delta, value: e.mean, stderr: e.stderr }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Theorem1Row {
    pub q: u64,
    /// Exact threshold `⌊δ Q^{2n-2}⌋`, decimal.
    pub x: String,
    pub count: u64,
    /// `Q^{n+1} f̂_s(δ)`.
    pub predicted: f64,
    /// `|N_s - Q^{n+1} f̂_s| / Q^n`.
    pub r: f64,
    /// Shift of `r` caused by one stderr of `f̂_s`: `Q · stderr`.
    pub r_band: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Theorem1Report {
    pub n: usize,
    pub s: u32,
    pub height: HeightKind,
    pub delta: f64,
    pub f_hat: f64,
    pub f_hat_stderr: f64,
    pub rows: Vec<Theorem1Row>,
    pub median_r: f64,
    /// Largest `r` among the two largest `Q`.
    pub max_r_largest_two: f64,
    pub ratio_limit: f64,
    pub bounded: bool,
    /// The limit theorem is stated for `n ≥ 3`.
    pub outside_stated_range: bool,
}

fn median(v: &[f64]) -> f64 {
    let mut s = v.to_vec();
    s.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let k = s.len();
    if k % 2 == 1 {
        s[k / 2]
    } else {
        0.5 * (s[k / 2 - 1] + s[k / 2])
    }
}

fn find_count(rows: &[CensusRow], n: usize, q: u64, height: HeightKind, s: u32, x: &BigInt) -> Option<u64> {
    rows.iter().find(|r| r.n == n && r.q == q && r.height == height && r.s == s && &r.x == x).map(|r| r.count)
}

/// `r(Q) = |N_s(Q, δQ^{2n-2}) - Q^{n+1} f̂_s(δ)| / Q^n` for every `Q` present
/// in `rows`; bounded when the largest `r` over the two largest `Q` is at
/// most `ratio_limit` times the median `r`.
pub fn theorem1_report(
    rows: &[CensusRow],
    n: usize,
    s: u32,
    height: HeightKind,
    f_hat: &DensityPoint,
    ratio_limit: f64,
) -> Result<Theorem1Report> {
    let mut qs: Vec<u64> = rows.iter().filter(|r| r.n == n && r.height == height).map(|r| r.q).collect();
    qs.sort_unstable();
    qs.dedup();
    if qs.len() < 2 {
        return Err(Error::Domain(format!("need census data for at least two Q at n = {n}, height {height}")));
    }
    let mut out = Vec::new();
    for &q in &qs {
        let x = threshold_for_delta(f_hat.delta, q, n)?;
        let count = find_count(rows, n, q, height, s, &x).ok_or_else(|| {
            Error::Domain(format!("census for Q = {q} has no threshold X = {x} (δ = {}) for s = {s}", f_hat.delta))
        })?;
        let qf = q as f64;
        let predicted = qf.powi(n as i32 + 1) * f_hat.value;
        out.push(Theorem1Row {
            q,
            x: x.to_string(),
            count,
            predicted,
            r: (count as f64 - predicted).abs() / qf.powi(n as i32),
            r_band: qf * f_hat.stderr,
        });
    }
    let rs: Vec<f64> = out.iter().map(|r| r.r).collect();
    let med = median(&rs);
    let top = rs[rs.len() - 2..].iter().cloned().fold(0.0, f64::max);
    Ok(Theorem1Report {
        n,
        s,
        height,
        delta: f_hat.delta,
        f_hat: f_hat.value,
        f_hat_stderr: f_hat.stderr,
        rows: out,
        median_r: med,
        max_r_largest_two: top,
        ratio_limit,
        bounded: top <= ratio_limit * med,
        outside_stated_range: n < 3,
    })
}

/// Rows `Q, count, predicted, r, r_band` for plotting.
pub fn theorem1_plot_rows(report: &Theorem1Report) -> Vec<Vec<f64>> {
    report.rows.iter().map(|r| vec![r.q as f64, r.count as f64, r.predicted, r.r, r.r_band]).collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CorollaryRow {
    pub q: u64,
    pub v: f64,
    pub x: String,
    pub count: u64,
    /// `λ₀ Q^{n+1-(n+2)v/n}`.
    pub predicted: f64,
    pub rel_deviation: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CorollaryFit {
    pub v: f64,
    /// Fit of `N_0(Q, Q^{2n-2-2v})` against `Q`.
    pub fit: PowerLawFit,
    /// `n + 1 - (n+2)v/n`.
    pub target: f64,
    pub deviation: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Theorem2Report {
    pub n: usize,
    pub height: HeightKind,
    /// `(n+2)/(2n)`.
    pub exponent_target: f64,
    pub fit: PowerLawFit,
    pub exponent_deviation: f64,
    /// Deviation in units of the fitted exponent's stderr.
    pub exponent_z: f64,
    pub lambda0: f64,
    pub lambda0_err: f64,
    /// `fit.prefactor / λ₀ - 1`.
    pub prefactor_rel_deviation: f64,
    /// Weighted mean of `f̂(δ) / δ^{(n+2)/(2n)}` with the exponent held at
    /// its target.
    pub fixed_exponent_prefactor: f64,
    pub fixed_exponent_prefactor_stderr: f64,
    pub fixed_exponent_rel_deviation: f64,
    pub corollary: Vec<CorollaryRow>,
    pub corollary_fits: Vec<CorollaryFit>,
}

/// Compares small-δ volume estimates of `f_0` and, optionally, census
/// counts along `X = Q^{2n-2-2v}` with the asymptotic law
/// `f_0(δ) ~ λ₀ δ^{(n+2)/(2n)}`.
pub fn theorem2_report(
    lambda: &Lambda0Result,
    points: &[DensityPoint],
    census: &[CensusRow],
    vs: &[f64],
) -> Result<Theorem2Report> {
    let n = lambda.n;
    if points.is_empty() {
        return Err(Error::Domain("no volume estimates supplied".into()));
    }
    if !(lambda.lambda0 > 0.0) {
        return Err(Error::Domain("λ₀ must be positive".into()));
    }
    let target = (n as f64 + 2.0) / (2.0 * n as f64);
    let triples: Vec<(f64, f64, f64)> = points.iter().map(|p| (p.delta, p.value, p.stderr)).collect();
    let fit = fit_power_law(&triples)?;
    let (mut num, mut den) = (0.0, 0.0);
    for p in points {
        let scale = p.delta.powf(target);
        let (c, e) = (p.value / scale, p.stderr / scale);
        let w = if e > 0.0 { 1.0 / (e * e) } else { 1.0 };
        num += w * c;
        den += w;
    }
    let fixed = num / den;
    let fixed_err = if points.iter().all(|p| p.stderr > 0.0) { den.sqrt().recip() } else { 0.0 };

    let mut corollary = Vec::new();
    let mut corollary_fits = Vec::new();
    let mut qs: Vec<u64> = census.iter().filter(|r| r.n == n && r.height == lambda.height).map(|r| r.q).collect();
    qs.sort_unstable();
    qs.dedup();
    for &v in vs {
        let mut fit_pts = Vec::new();
        for &q in &qs {
            let x = corollary_threshold(n, q, v)?;
            let count = find_count(census, n, q, lambda.height, 0, &x)
                .ok_or_else(|| Error::Domain(format!("census for Q = {q} has no threshold X = {x} (v = {v})")))?;
            let e = n as f64 + 1.0 - (n as f64 + 2.0) * v / n as f64;
            let predicted = lambda.lambda0 * (q as f64).powf(e);
            corollary.push(CorollaryRow {
                q,
                v,
                x: x.to_string(),
                count,
                predicted,
                rel_deviation: count as f64 / predicted - 1.0,
            });
            if count > 0 {
                fit_pts.push((q as f64, count as f64, (count as f64).sqrt()));
            }
        }
        if fit_pts.len() >= 3 {
            let f = fit_power_law(&fit_pts)?;
            let t = n as f64 + 1.0 - (n as f64 + 2.0) * v / n as f64;
            corollary_fits.push(CorollaryFit { v, deviation: f.exponent - t, fit: f, target: t });
        }
    }
    Ok(Theorem2Report {
        n,
        height: lambda.height,
        exponent_target: target,
        exponent_deviation: fit.exponent - target,
        exponent_z: if fit.exponent_stderr > 0.0 { (fit.exponent - target) / fit.exponent_stderr } else { f64::INFINITY },
        lambda0: lambda.lambda0,
        lambda0_err: lambda.lambda0_err,
        prefactor_rel_deviation: fit.prefactor / lambda.lambda0 - 1.0,
        fixed_exponent_prefactor: fixed,
        fixed_exponent_prefactor_stderr: fixed_err,
        fixed_exponent_rel_deviation: fixed / lambda.lambda0 - 1.0,
        fit,
        corollary,
        corollary_fits,
    })
}

/// One line of plot-ready data.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PlotRow {
    pub delta: f64,
    pub value: f64,
    pub stderr: f64,
    pub model: f64,
}

/// Volume estimates next to the model `λ₀ δ^{(n+2)/(2n)}`.
pub fn theorem2_plot_rows(report: &Theorem2Report, points: &[DensityPoint]) -> Vec<PlotRow> {
    points
        .iter()
        .map(|p| PlotRow {
            delta: p.delta,
            value: p.value,
            stderr: p.stderr,
            model: report.lambda0 * p.delta.powf(report.exponent_target),
        })
        .collect()
}
