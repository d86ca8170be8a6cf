//! Polynomial primitives: integer polynomials, heights, discriminants,
//! root signatures and the root/coefficient change of variables.

pub mod discriminant;
pub mod height;
pub mod ring;
pub mod roots;
pub mod sturm;

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

pub use discriminant::{discriminant_det, discriminant_f64, discriminant_prs};
pub use height::{height, height_int};
pub use roots::{coeffs_from_roots, jacobian_formula, roots_numeric, roots_numeric_int};
pub use sturm::{signature, squarefree_decomposition};

/// Integer polynomial `a_0 + a_1 x + … + a_n x^n` with `a_n ≠ 0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntPolynomial {
    coeffs: Vec<BigInt>,
}

impl IntPolynomial {
    pub fn new(coeffs: Vec<BigInt>) -> Result<Self> {
        if coeffs.len() < 2 {
            return Err(Error::InvalidInput(
                "a polynomial of positive degree needs at least two coefficients".into(),
            ));
        }
        if coeffs.last().is_some_and(|c| c.is_zero()) {
            return Err(Error::InvalidInput("leading coefficient a_n must be nonzero".into()));
        }
        Ok(Self { coeffs })
    }

    pub fn from_i64(coeffs: &[i64]) -> Result<Self> {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Coefficients `a_0..a_n`, index = power of x.
    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn leading(&self) -> &BigInt {
        &self.coeffs[self.degree()]
    }

    pub fn to_i128(&self) -> Option<Vec<i128>> {
        self.coeffs.iter().map(|c| c.to_i128()).collect()
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.coeffs.iter().map(big_to_f64).collect()
    }

    /// `P(-x)`.
    pub fn reflect(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| if k % 2 == 1 { -c } else { c.clone() })
            .collect();
        Self { coeffs }
    }

    /// `x^n P(1/x)`; `None` when `a_0 = 0` (the reversal drops degree).
    pub fn reversed(&self) -> Option<Self> {
        let coeffs: Vec<BigInt> = self.coeffs.iter().rev().cloned().collect();
        Self::new(coeffs).ok()
    }

    pub fn scaled(&self, t: &BigInt) -> Result<Self> {
        Self::new(self.coeffs.iter().map(|c| c * t).collect())
    }
}

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coeffs.iter().map(|c| c.to_string()).collect();
        write!(f, "[{}]", parts.join(", "))
    }
}

pub fn big_to_f64(v: &BigInt) -> f64 {
    v.to_f64().unwrap_or(f64::NAN)
}

/// Real coefficient vector `a ∈ ℝ^{n+1}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoefficientPoint {
    coords: Vec<f64>,
}

impl CoefficientPoint {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidInput("coefficient point has a non-finite coordinate".into()));
        }
        Ok(Self { coords })
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<f64> {
        self.coords
    }
}

/// Which height function defines `P_n(Q)` and the unit ball `h(a) ≤ 1`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum HeightKind {
    /// `max |a_k|`
    #[default]
    Naive,
    /// `Σ |a_k|`
    Length,
    /// `|a_n| ∏ max(1, |α_j|)`
    Mahler,
}

impl HeightKind {
    pub const ALL: [HeightKind; 3] = [HeightKind::Naive, HeightKind::Length, HeightKind::Mahler];

    pub fn as_str(self) -> &'static str {
        match self {
            HeightKind::Naive => "naive",
            HeightKind::Length => "length",
            HeightKind::Mahler => "mahler",
        }
    }

    /// The constant `h₀` with `h(v) ≥ h₀` whenever `max |v_i| ≥ 1`.
    pub fn lower_bound_constant(self, n: usize) -> f64 {
        match self {
            HeightKind::Naive | HeightKind::Length => 1.0,
            HeightKind::Mahler => 2f64.powi(-(n as i32)),
        }
    }
}

impl fmt::Display for HeightKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for HeightKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "naive" => Ok(HeightKind::Naive),
            "length" => Ok(HeightKind::Length),
            "mahler" => Ok(HeightKind::Mahler),
            other => Err(Error::Parse(format!("unknown height kind `{other}`"))),
        }
    }
}

/// Exact discriminant value.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DiscriminantValue(pub BigInt);

/// Number of complex-conjugate root pairs, counted with multiplicity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Signature(pub u32);

impl Signature {
    pub fn pairs(self) -> u32 {
        self.0
    }

    pub fn real_roots(self, degree: usize) -> usize {
        degree - 2 * self.0 as usize
    }
}
