//! Height functions on coefficient vectors.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use super::roots::mahler_measure;
use super::{big_to_f64, IntPolynomial};
use super::HeightKind;
use crate::{Error, Result};

/// `h(a)` for a real coefficient vector (index = power of x).
pub fn height(coeffs: &[f64], kind: HeightKind) -> Result<f64> {
    if coeffs.iter().any(|c| !c.is_finite()) {
        return Err(Error::InvalidInput("non-finite coefficient".into()));
    }
    match kind {
        HeightKind::Naive => Ok(coeffs.iter().fold(0.0f64, |m, c| m.max(c.abs()))),
        HeightKind::Length => Ok(coeffs.iter().map(|c| c.abs()).sum()),
        HeightKind::Mahler => {
            if coeffs.iter().all(|c| *c == 0.0) {
                return Err(Error::DegenerateInput("Mahler height of the zero vector".into()));
            }
            mahler_measure(coeffs)
        }
    }
}

/// Exact naive or length height of an integer polynomial; `None` for Mahler.
pub fn height_exact(p: &IntPolynomial, kind: HeightKind) -> Option<BigInt> {
    match kind {
        HeightKind::Naive => p.coeffs().iter().map(|c| c.abs()).max(),
        HeightKind::Length => Some(p.coeffs().iter().fold(BigInt::zero(), |s, c| s + c.abs())),
        HeightKind::Mahler => None,
    }
}

pub fn height_int(p: &IntPolynomial, kind: HeightKind) -> Result<f64> {
    match height_exact(p, kind) {
        Some(v) => Ok(big_to_f64(&v)),
        None => mahler_measure(&p.to_f64()),
    }
}
