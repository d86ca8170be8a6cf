//! Numeric roots (simultaneous Aberth iteration with a double-double
//! polishing fallback) and the root ↔ coefficient change of variables.

use num_complex::Complex64;

use super::{CoefficientPoint, IntPolynomial};
use crate::ddouble::{CDD, DD};
use crate::{Error, Result};

const MAX_ITERATIONS: usize = 2000;

fn horner_with_derivative(c: &[Complex64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    for &a in c.iter().rev() {
        dp = dp * z + p;
        p = p * z + a;
    }
    (p, dp)
}

/// Coefficients (low → high) of `∏ (x - z_j)`.
fn expand_complex(roots: &[Complex64]) -> Vec<Complex64> {
    let mut c = vec![Complex64::new(1.0, 0.0)];
    for &z in roots {
        c.push(Complex64::new(0.0, 0.0));
        for k in (1..c.len()).rev() {
            c[k] = c[k - 1] - z * c[k];
        }
        c[0] = -z * c[0];
    }
    c
}

/// Relative backward error `‖a - a_n ∏(x - z_j)‖∞ / ‖a‖∞`.
pub fn backward_error(coeffs: &[f64], roots: &[Complex64]) -> f64 {
    let an = coeffs[coeffs.len() - 1];
    let rec = expand_complex(roots);
    let scale = coeffs.iter().fold(0.0f64, |m, c| m.max(c.abs()));
    let mut err = 0.0f64;
    for (a, r) in coeffs.iter().zip(rec.iter()) {
        err = err.max((Complex64::new(*a, 0.0) - r * an).norm());
    }
    err / scale
}

fn aberth(monic: &[Complex64], n: usize) -> (Vec<Complex64>, bool) {
    let radius = 1.0 + monic[..n].iter().fold(0.0f64, |m, c| m.max(c.norm()));
    let abs_coeffs: Vec<f64> = monic.iter().map(|c| c.norm()).collect();
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| {
            let t = 2.0 * std::f64::consts::PI * k as f64 / n as f64 + 0.4;
            Complex64::from_polar(radius, t)
        })
        .collect();
    let mut done = vec![false; n];
    for _ in 0..MAX_ITERATIONS {
        for k in 0..n {
            if done[k] {
                continue;
            }
            let (p, dp) = horner_with_derivative(monic, z[k]);
            // residual at the rounding level of the Horner evaluation
            let r = z[k].norm();
            let bound = abs_coeffs.iter().rev().fold(0.0, |acc, c| acc * r + c);
            if p.norm() <= 4.0 * f64::EPSILON * bound {
                done[k] = true;
                continue;
            }
            let ratio = p / dp;
            let mut s = Complex64::new(0.0, 0.0);
            for j in 0..n {
                if j != k {
                    let d = z[k] - z[j];
                    if d != Complex64::new(0.0, 0.0) {
                        s += d.inv();
                    }
                }
            }
            let w = ratio / (Complex64::new(1.0, 0.0) - ratio * s);
            if w.is_finite() {
                z[k] -= w;
            }
        }
        if done.iter().all(|d| *d) {
            return (z, true);
        }
    }
    (z, false)
}

/// Aberth sweeps in double-double against the given coefficients.
fn polish_dd(coeffs: &[DD], roots: &mut [Complex64], rounds: usize) -> Vec<CDD> {
    let n = roots.len();
    let mut z: Vec<CDD> = roots.iter().map(|r| CDD::new(DD::new(r.re), DD::new(r.im))).collect();
    let one = CDD::new(DD::ONE, DD::ZERO);
    for _ in 0..rounds {
        let mut max_step = 0.0f64;
        for k in 0..n {
            let mut p = CDD::default();
            let mut dp = CDD::default();
            for &a in coeffs.iter().rev() {
                dp = dp * z[k] + p;
                p = p * z[k] + CDD::new(a, DD::ZERO);
            }
            if p.norm_sqr().hi == 0.0 || dp.norm_sqr().hi == 0.0 {
                continue;
            }
            let ratio = p / dp;
            let mut s = CDD::default();
            for j in 0..n {
                if j != k {
                    let d = z[k] - z[j];
                    if d.norm_sqr().hi != 0.0 {
                        s = s + one / d;
                    }
                }
            }
            let w = ratio / (one - ratio * s);
            if !w.re.hi.is_finite() || !w.im.hi.is_finite() {
                continue;
            }
            z[k] = z[k] - w;
            max_step = max_step.max(w.abs().hi / z[k].abs().hi.max(1.0));
        }
        if max_step < 1e-30 {
            break;
        }
    }
    for (r, zz) in roots.iter_mut().zip(z.iter()) {
        *r = Complex64::new(zz.re.to_f64(), zz.im.to_f64());
    }
    z
}

/// All `n` complex roots of `Σ a_k x^k` (with multiplicity).
///
/// Fails with a numeric-failure error when the relative backward error stays
/// above `tol` after the double-double polishing fallback.
pub fn roots_numeric(coeffs: &[f64], tol: f64) -> Result<Vec<Complex64>> {
    let n = coeffs.len().saturating_sub(1);
    if n == 0 || coeffs[n] == 0.0 {
        return Err(Error::DegenerateInput("leading coefficient must be nonzero".into()));
    }
    if coeffs.iter().any(|c| !c.is_finite()) {
        return Err(Error::InvalidInput("non-finite coefficient".into()));
    }
    // exact zero roots first
    let zeros = coeffs.iter().take_while(|c| **c == 0.0).count();
    let rest = &coeffs[zeros..];
    let m = rest.len() - 1;
    let mut roots = vec![Complex64::new(0.0, 0.0); zeros];
    if m > 0 {
        let an = rest[m];
        let monic: Vec<Complex64> = rest.iter().map(|c| Complex64::new(c / an, 0.0)).collect();
        let (mut z, _converged) = aberth(&monic, m);
        if backward_error(rest, &z) > tol {
            let dd: Vec<DD> = rest.iter().map(|&c| DD::new(c)).collect();
            polish_dd(&dd, &mut z, 200);
        }
        let err = backward_error(rest, &z);
        if err > tol || z.iter().any(|r| !r.is_finite()) {
            return Err(Error::NumericFailure(format!(
                "root finder reached backward error {err:.3e} > {tol:.3e}"
            )));
        }
        roots.extend(z);
    }
    Ok(roots)
}

pub fn roots_numeric_int(p: &IntPolynomial, tol: f64) -> Result<Vec<Complex64>> {
    roots_numeric(&p.to_f64(), tol)
}

/// Roots of an integer polynomial polished in double-double. Coefficients
/// must be exactly representable (|a_k| < 2^53).
pub(crate) fn roots_dd(coeffs: &[i128]) -> Result<Vec<CDD>> {
    let f: Vec<f64> = coeffs.iter().map(|&c| c as f64).collect();
    let zeros = f.iter().take_while(|c| **c == 0.0).count();
    let mut out = vec![CDD::default(); zeros];
    let rest = &f[zeros..];
    if rest.len() > 1 {
        let mut z = roots_numeric(rest, 1e-8)?;
        let dd: Vec<DD> = rest.iter().map(|&c| DD::new(c)).collect();
        out.extend(polish_dd(&dd, &mut z, 6));
    }
    Ok(out)
}

/// Coefficients of `b ∏ (x - z_j)`, i.e. `a_k = (-1)^{n-k} b σ_{n-k}(z)`.
pub fn coeffs_from_roots(b: f64, roots: &[f64]) -> CoefficientPoint {
    let mut c = vec![b];
    for &z in roots {
        c.push(0.0);
        for k in (1..c.len()).rev() {
            c[k] = c[k - 1] - z * c[k];
        }
        c[0] *= -z;
    }
    CoefficientPoint::new(c).expect("finite inputs give finite coefficients")
}

/// `|b|^n ∏_{i<j} |z_i - z_j|`, the Jacobian of `(b, z) ↦ a`.
pub fn jacobian_formula(b: f64, z: &[f64]) -> f64 {
    let n = z.len();
    let mut prod = b.abs().powi(n as i32);
    for i in 0..n {
        for j in i + 1..n {
            prod *= (z[i] - z[j]).abs();
        }
    }
    prod
}

/// Mahler measure `|a_n| ∏ max(1, |α_j|)` from numeric roots.
pub fn mahler_measure(coeffs: &[f64]) -> Result<f64> {
    let n = coeffs.len().saturating_sub(1);
    if n == 0 || coeffs[n] == 0.0 {
        return Err(Error::DegenerateInput(
            "Mahler measure needs a nonzero leading coefficient".into(),
        ));
    }
    let roots = roots_numeric(coeffs, 1e-9)?;
    Ok(roots.iter().fold(coeffs[n].abs(), |m, z| m * z.norm().max(1.0)))
}

pub fn mahler_measure_int(p: &IntPolynomial) -> Result<f64> {
    mahler_measure(&p.to_f64())
}

pub(crate) fn mahler_from_dd_roots(lead: f64, roots: &[CDD]) -> DD {
    let mut m = DD::new(lead.abs());
    for z in roots {
        m = m * z.abs().max(DD::ONE);
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sorted_re(mut v: Vec<Complex64>) -> Vec<Complex64> {
        let key = |z: &Complex64| ((z.re * 1e6).round(), (z.im * 1e6).round());
        v.sort_by(|a, b| key(a).partial_cmp(&key(b)).unwrap());
        v
    }

    #[test]
    fn x_squared_plus_one() {
        let r = sorted_re(roots_numeric(&[1.0, 0.0, 1.0], 1e-12).unwrap());
        assert!((r[0] - Complex64::new(0.0, -1.0)).norm() < 1e-12);
        assert!((r[1] - Complex64::new(0.0, 1.0)).norm() < 1e-12);
    }

    #[test]
    fn three_real_roots() {
        // (x-1)(x-2)(x-3) = x^3 - 6x^2 + 11x - 6
        let r = sorted_re(roots_numeric(&[-6.0, 11.0, -6.0, 1.0], 1e-12).unwrap());
        for (z, want) in r.iter().zip([1.0, 2.0, 3.0]) {
            assert!((z - Complex64::new(want, 0.0)).norm() < 1e-10);
        }
    }

    #[test]
    fn repeated_root_reaches_extended_precision_floor() {
        // (x-1)^4: a 4-fold cluster resolves to about 1e-8 in double-double
        let c = [1.0, -4.0, 6.0, -4.0, 1.0];
        let r = roots_numeric(&c, 1e-7).unwrap();
        assert!(backward_error(&c, &r) < 1e-7);
        for z in r {
            assert!((z - Complex64::new(1.0, 0.0)).norm() < 1e-6);
        }
    }

    #[test]
    fn zero_roots_are_exact() {
        let r = roots_numeric(&[0.0, 0.0, -1.0, 1.0], 1e-12).unwrap();
        assert_eq!(r[0], Complex64::new(0.0, 0.0));
        assert_eq!(r[1], Complex64::new(0.0, 0.0));
    }

    #[test]
    fn degenerate_leading_coefficient() {
        assert!(matches!(roots_numeric(&[1.0, 0.0], 1e-10), Err(Error::DegenerateInput(_))));
        assert!(matches!(mahler_measure(&[1.0, 2.0, 0.0]), Err(Error::DegenerateInput(_))));
    }

    #[test]
    fn coefficient_expansion_examples() {
        assert_eq!(coeffs_from_roots(1.0, &[0.0, 1.0]).coords(), &[0.0, -1.0, 1.0]);
        assert_eq!(coeffs_from_roots(2.0, &[1.0, 1.0]).coords(), &[2.0, -4.0, 2.0]);
    }

    #[test]
    fn jacobian_examples() {
        assert_eq!(jacobian_formula(1.0, &[0.0, 1.0]), 1.0);
        assert_eq!(jacobian_formula(2.0, &[0.0, 1.0, 2.0]), 16.0);
    }

    #[test]
    fn mahler_of_cyclotomic_and_shifted() {
        assert!((mahler_measure(&[-1.0, 0.0, 0.0, 0.0, 1.0]).unwrap() - 1.0).abs() < 1e-10);
        // 2x^2 - 5x + 2 = (2x - 1)(x - 2): M = 2 · 2 = 4
        assert!((mahler_measure(&[2.0, -5.0, 2.0]).unwrap() - 4.0).abs() < 1e-10);
    }

    #[test]
    fn dd_polish_reaches_double_double_accuracy() {
        // x^2 - 2: root sqrt(2) to ~1e-30
        let r = roots_dd(&[-2, 0, 1]).unwrap();
        let pos = r.iter().find(|z| z.re.hi > 0.0).unwrap();
        let err = pos.re * pos.re - DD::new(2.0);
        assert!(err.to_f64().abs() < 1e-28);
    }
}
