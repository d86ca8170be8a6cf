//! Two independent exact discriminant routes.
//!
//! `discriminant_det` expands the `(2n-1)×(2n-1)` Sylvester-type determinant
//! with fraction-free (Bareiss) elimination; `discriminant_prs` runs the
//! subresultant remainder sequence of `P` and `P'`. The two share no code
//! beyond the coefficient type.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::ring::{self, Coeffs};
use super::{DiscriminantValue, IntPolynomial};
use crate::{Error, Result};

fn check_degree(p: &IntPolynomial) -> Result<usize> {
    let n = p.degree();
    if n < 2 {
        return Err(Error::UnsupportedDegree { degree: n, min: 2 });
    }
    Ok(n)
}

/// The matrix whose determinant times `(-1)^{n(n-1)/2}` is `D(P)`.
///
/// Rows `0..n-1` hold shifted copies of `P`, rows `n-1..2n-1` shifted copies
/// of `P'`; the first column is divided by `a_n`, which turns the Sylvester
/// determinant `Res(P, P')` into `Res(P, P') / a_n`.
pub fn discriminant_matrix(p: &IntPolynomial) -> Result<Vec<Vec<BigInt>>> {
    let n = check_degree(p)?;
    let size = 2 * n - 1;
    let a = p.coeffs();
    let mut m = vec![vec![BigInt::zero(); size]; size];
    for row in 0..n - 1 {
        for k in 0..=n {
            m[row][row + (n - k)] = a[k].clone();
        }
    }
    for row in 0..n {
        for k in 1..=n {
            m[n - 1 + row][row + (n - k)] = &a[k] * BigInt::from(k);
        }
    }
    m[0][0] = BigInt::one();
    m[n - 1][0] = BigInt::from(n);
    Ok(m)
}

/// Fraction-free Gaussian elimination; exact for integer matrices.
pub fn bareiss_determinant(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let size = m.len();
    if size == 0 {
        return BigInt::one();
    }
    let mut sign = 1;
    let mut prev = BigInt::one();
    for k in 0..size - 1 {
        if m[k][k].is_zero() {
            let Some(swap) = (k + 1..size).find(|&i| !m[i][k].is_zero()) else {
                return BigInt::zero();
            };
            m.swap(k, swap);
            sign = -sign;
        }
        for i in k + 1..size {
            for j in k + 1..size {
                let v = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                m[i][j] = v / &prev;
            }
        }
        prev = m[k][k].clone();
    }
    let d = m[size - 1][size - 1].clone();
    if sign < 0 {
        -d
    } else {
        d
    }
}

pub fn discriminant_det(p: &IntPolynomial) -> Result<DiscriminantValue> {
    let n = check_degree(p)?;
    let det = bareiss_determinant(discriminant_matrix(p)?);
    let value = if (n * (n - 1) / 2) % 2 == 1 { -det } else { det };
    Ok(DiscriminantValue(value))
}

pub fn discriminant_prs(p: &IntPolynomial) -> Result<DiscriminantValue> {
    check_degree(p)?;
    if let Some(small) = p.to_i128() {
        if let Some(d) = ring::discriminant::<i128>(&small) {
            return Ok(DiscriminantValue(BigInt::from(d)));
        }
    }
    let big: Coeffs<BigInt> = p.coeffs().iter().cloned().collect();
    let d = ring::discriminant(&big).expect("BigInt arithmetic does not overflow");
    Ok(DiscriminantValue(d))
}

/// Discriminant from numerically computed roots, `a_n^{2n-2} ∏ (α_i - α_j)^2`.
pub fn discriminant_from_roots(p: &IntPolynomial, tol: f64) -> Result<f64> {
    let n = check_degree(p)?;
    let roots = super::roots::roots_numeric_int(p, tol)?;
    let an = super::big_to_f64(p.leading());
    let mut prod = num_complex::Complex64::new(an.abs().powi(2 * n as i32 - 2), 0.0);
    for i in 0..n {
        for j in i + 1..n {
            let d = roots[i] - roots[j];
            prod *= d * d;
        }
    }
    Ok(prod.re)
}

/// Floating-point discriminant of a real coefficient vector.
///
/// Same subresultant recurrence as the exact route, on stack arrays; falls
/// back to the generic implementation above degree 15.
pub fn discriminant_f64(coeffs: &[f64]) -> f64 {
    if coeffs.len() > FLOAT_CAP || coeffs.len() < 2 {
        return ring::discriminant::<f64>(coeffs).unwrap_or(f64::NAN);
    }
    let n = coeffs.len() - 1;
    let p = FPoly::from_slice(coeffs);
    let mut dp = FPoly { c: [0.0; FLOAT_CAP], len: n };
    for k in 1..=n {
        dp.c[k - 1] = coeffs[k] * k as f64;
    }
    dp.trim();
    let d = resultant_f64(p, dp) / coeffs[n];
    if (n * (n - 1) / 2) % 2 == 1 {
        -d
    } else {
        d
    }
}

const FLOAT_CAP: usize = 16;

#[derive(Clone, Copy)]
struct FPoly {
    c: [f64; FLOAT_CAP],
    len: usize,
}

impl FPoly {
    fn from_slice(v: &[f64]) -> Self {
        let mut c = [0.0; FLOAT_CAP];
        c[..v.len()].copy_from_slice(v);
        let mut p = FPoly { c, len: v.len() };
        p.trim();
        p
    }

    fn trim(&mut self) {
        while self.len > 0 && self.c[self.len - 1] == 0.0 {
            self.len -= 1;
        }
    }

    fn lead(&self) -> f64 {
        self.c[self.len - 1]
    }
}

fn pow_f64(x: f64, e: usize) -> f64 {
    let mut acc = 1.0;
    for _ in 0..e {
        acc *= x;
    }
    acc
}

fn prem_f64(a: &FPoly, b: &FPoly) -> FPoly {
    let db = b.len - 1;
    let lb = b.c[db];
    let mut r = *a;
    let mut e = a.len as isize - b.len as isize + 1;
    while r.len > db && r.len > 0 {
        let dr = r.len - 1;
        let lr = r.c[dr];
        let shift = dr - db;
        for c in r.c[..r.len].iter_mut() {
            *c *= lb;
        }
        for i in 0..b.len {
            r.c[i + shift] -= b.c[i] * lr;
        }
        r.len -= 1;
        r.trim();
        e -= 1;
    }
    if e > 0 {
        let f = pow_f64(lb, e as usize);
        for c in r.c[..r.len].iter_mut() {
            *c *= f;
        }
    }
    r
}

fn resultant_f64(mut a: FPoly, mut b: FPoly) -> f64 {
    if a.len == 0 || b.len == 0 {
        return 0.0;
    }
    let mut sign = 1.0;
    if a.len < b.len {
        std::mem::swap(&mut a, &mut b);
        if (a.len - 1) % 2 == 1 && (b.len - 1) % 2 == 1 {
            sign = -sign;
        }
    }
    if b.len == 1 {
        return sign * pow_f64(b.c[0], a.len - 1);
    }
    let mut g = 1.0;
    let mut h = 1.0;
    loop {
        let da = a.len - 1;
        let db = b.len - 1;
        let delta = da - db;
        if da % 2 == 1 && db % 2 == 1 {
            sign = -sign;
        }
        let r = prem_f64(&a, &b);
        a = b;
        if r.len == 0 {
            return 0.0;
        }
        let div = g * pow_f64(h, delta);
        b = r;
        for c in b.c[..b.len].iter_mut() {
            *c /= div;
        }
        g = a.lead();
        if delta != 0 {
            h = pow_f64(g, delta) / pow_f64(h, delta - 1);
        }
        if b.len == 1 {
            let da = a.len - 1;
            return sign * (pow_f64(b.c[0], da) / pow_f64(h, da - 1));
        }
    }
}
