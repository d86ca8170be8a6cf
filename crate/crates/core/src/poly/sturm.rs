//! Exact root signatures: squarefree decomposition over ℤ plus Sturm chains.

use num_bigint::BigInt;

use super::ring::{self, Coeffs, IntRing};
use super::{IntPolynomial, Signature};

/// Number of distinct real roots of a nonzero integer polynomial.
///
/// The chain is `s_0 = P`, `s_1 = P'`, `s_{k+1} = -prem(s_{k-1}, s_k)` with
/// a positive pseudo-division multiplier, reduced to primitive parts. Only
/// the leading coefficients matter for the count on `(-∞, ∞)`.
pub fn distinct_real_roots<T: IntRing>(p: &[T]) -> Option<usize> {
    if p.len() <= 1 {
        return Some(0);
    }
    let mut chain_signs: Vec<(i32, usize)> = Vec::with_capacity(p.len());
    let mut prev: Coeffs<T> = ring::primitive_part(p);
    let mut cur: Coeffs<T> = ring::primitive_part(&ring::derivative(p)?);
    chain_signs.push((prev.last()?.sign(), prev.len() - 1));
    while !cur.is_empty() {
        chain_signs.push((cur.last()?.sign(), cur.len() - 1));
        let lc = cur.last()?.clone();
        let mut r = ring::prem(&prev, &cur)?;
        // prem multiplies by lc^(d+1); undo a negative sign so the chain
        // stays a positive multiple of the true remainder sequence
        let d = prev.len() - cur.len();
        if lc.sign() < 0 && d % 2 == 0 {
            r = r.iter().map(|c| c.neg()).collect::<Option<_>>()?;
        }
        let next: Coeffs<T> = r.iter().map(|c| c.neg()).collect::<Option<_>>()?;
        prev = cur;
        cur = ring::primitive_part(&next);
    }
    Some(sign_variations(&chain_signs, true) - sign_variations(&chain_signs, false))
}

/// Sign variations of the chain at `-∞` (`at_minus = true`) or `+∞`.
fn sign_variations(chain: &[(i32, usize)], at_minus: bool) -> usize {
    let mut count = 0;
    let mut last = 0;
    for &(s, deg) in chain {
        let v = if at_minus && deg % 2 == 1 { -s } else { s };
        if v == 0 {
            continue;
        }
        if last != 0 && v != last {
            count += 1;
        }
        last = v;
    }
    count
}

/// Squarefree factors `f_i` with `P = c · ∏ f_i^i`, as `(f_i, i)` pairs,
/// each primitive with positive leading coefficient. Constant factors are
/// omitted.
pub fn squarefree_decomposition_generic<T: IntRing>(p: &[T]) -> Option<Vec<(Coeffs<T>, usize)>> {
    // tower g_0 = P, g_{k+1} = gcd(g_k, g_k'); g_{k-1}/g_k = ∏_{i ≥ k} f_i
    let mut tower: Vec<Coeffs<T>> = vec![ring::primitive_part(p)];
    while tower.last()?.len() > 1 {
        let g = tower.last()?;
        let dg = ring::derivative(g)?;
        tower.push(ring::gcd(g, &dg)?);
    }
    let mut products: Vec<Coeffs<T>> = Vec::new();
    for w in tower.windows(2) {
        products.push(ring::primitive_quotient(&w[0], &w[1])?);
    }
    let mut out = Vec::new();
    for k in 0..products.len() {
        let f = if k + 1 < products.len() {
            ring::primitive_quotient(&products[k], &products[k + 1])?
        } else {
            products[k].clone()
        };
        if f.len() > 1 {
            out.push((f, k + 1));
        }
    }
    Some(out)
}

pub fn squarefree_decomposition(p: &IntPolynomial) -> Vec<(IntPolynomial, usize)> {
    let big: Coeffs<BigInt> = p.coeffs().iter().cloned().collect();
    squarefree_decomposition_generic(&big)
        .expect("BigInt arithmetic does not overflow")
        .into_iter()
        .map(|(f, i)| (IntPolynomial::new(f.into_vec()).expect("nonconstant factor"), i))
        .collect()
}

/// Real roots counted with multiplicity.
pub fn real_roots_with_multiplicity<T: IntRing>(p: &[T]) -> Option<usize> {
    let mut total = 0;
    for (f, i) in squarefree_decomposition_generic(p)? {
        total += i * distinct_real_roots(&f)?;
    }
    Some(total)
}

/// Signature on a fixed-width coefficient vector, `None` on overflow.
pub fn signature_i128(p: &[i128]) -> Option<Signature> {
    let n = p.len() - 1;
    let r = real_roots_with_multiplicity(p)?;
    Some(Signature(((n - r) / 2) as u32))
}

/// Number of complex-conjugate root pairs, counted with multiplicity.
pub fn signature(p: &IntPolynomial) -> Signature {
    if let Some(small) = p.to_i128() {
        if let Some(s) = signature_i128(&small) {
            return s;
        }
    }
    let big: Coeffs<BigInt> = p.coeffs().iter().cloned().collect();
    let n = p.degree();
    let r = real_roots_with_multiplicity(&big).expect("BigInt arithmetic does not overflow");
    Signature(((n - r) / 2) as u32)
}

/// Outcome of a floating-point Sturm count.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NumericCount {
    Count(usize),
    /// A chain element had a leading coefficient too small to trust.
    IllConditioned,
}

/// Distinct real roots of a real polynomial from a floating Sturm chain.
///
/// Each remainder is normalized to unit max-norm; if any leading
/// coefficient falls below `guard` relative to its polynomial, or a
/// remainder collapses below `guard` relative to its predecessor, the count
/// is reported as ill-conditioned so the caller can escalate.
pub fn distinct_real_roots_f64(p: &[f64], guard: f64) -> NumericCount {
    fn normalize(v: &mut Coeffs<f64>) -> f64 {
        let m = v.iter().fold(0.0f64, |m, c| m.max(c.abs()));
        if m > 0.0 {
            for c in v.iter_mut() {
                *c /= m;
            }
        }
        m
    }
    let mut prev: Coeffs<f64> = p.iter().copied().collect();
    ring::trim(&mut prev);
    if prev.len() <= 1 {
        return NumericCount::Count(0);
    }
    normalize(&mut prev);
    let mut cur = ring::derivative(&prev).expect("f64 ops are total");
    normalize(&mut cur);
    let mut chain = vec![(prev.last().unwrap().signum() as i32, prev.len() - 1)];
    while !cur.is_empty() {
        let lc = *cur.last().unwrap();
        if lc.abs() < guard {
            return NumericCount::IllConditioned;
        }
        chain.push((lc.signum() as i32, cur.len() - 1));
        if cur.len() == 1 {
            break;
        }
        // true remainder of prev / cur
        let mut r: Coeffs<f64> = prev.clone();
        let db = cur.len() - 1;
        while r.len() > db {
            let dr = r.len() - 1;
            let q = r[dr] / lc;
            for (i, b) in cur.iter().enumerate() {
                r[i + dr - db] -= q * b;
            }
            r.pop();
        }
        let mut next: Coeffs<f64> = r.iter().map(|c| -c).collect();
        ring::trim(&mut next);
        let scale = normalize(&mut next);
        if next.is_empty() || scale < guard {
            // numerically zero remainder: near-repeated root
            return NumericCount::IllConditioned;
        }
        prev = cur;
        cur = next;
    }
    NumericCount::Count(sign_variations(&chain, true) - sign_variations(&chain, false))
}
