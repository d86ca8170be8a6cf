//! Coefficient arithmetic shared by the remainder-sequence algorithms.
//!
//! Every operation returns `Option` so that the fixed-width fast path can
//! report overflow and let the caller retry with `BigInt`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use smallvec::SmallVec;

pub type Coeffs<T> = SmallVec<[T; 16]>;

pub trait Ring: Clone + std::fmt::Debug {
    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(v: i64) -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, o: &Self) -> Option<Self>;
    fn sub(&self, o: &Self) -> Option<Self>;
    fn mul(&self, o: &Self) -> Option<Self>;
    /// Division that is known to be exact over the integers.
    fn exact_div(&self, o: &Self) -> Option<Self>;
    fn neg(&self) -> Option<Self>;
    /// -1, 0 or 1.
    fn sign(&self) -> i32;

    fn pow(&self, e: usize) -> Option<Self> {
        let mut acc = Self::one();
        for _ in 0..e {
            acc = acc.mul(self)?;
        }
        Some(acc)
    }
}

/// Integer rings additionally support gcd-based content removal.
pub trait IntRing: Ring {
    fn gcd(&self, o: &Self) -> Self;
    fn abs(&self) -> Self;
}

macro_rules! fixed_width_ring {
    ($t:ty) => {
        impl Ring for $t {
            fn zero() -> Self {
                0
            }
            fn one() -> Self {
                1
            }
            fn from_i64(v: i64) -> Self {
                v as $t
            }
            fn is_zero(&self) -> bool {
                *self == 0
            }
            fn add(&self, o: &Self) -> Option<Self> {
                self.checked_add(*o)
            }
            fn sub(&self, o: &Self) -> Option<Self> {
                self.checked_sub(*o)
            }
            fn mul(&self, o: &Self) -> Option<Self> {
                self.checked_mul(*o)
            }
            fn exact_div(&self, o: &Self) -> Option<Self> {
                debug_assert!(*o == 0 || self % o == 0, "inexact division {self} / {o}");
                self.checked_div(*o)
            }
            fn neg(&self) -> Option<Self> {
                self.checked_neg()
            }
            fn sign(&self) -> i32 {
                self.signum() as i32
            }
        }

        impl IntRing for $t {
            fn gcd(&self, o: &Self) -> Self {
                Integer::gcd(self, o)
            }
            fn abs(&self) -> Self {
                <$t>::abs(*self)
            }
        }
    };
}

fixed_width_ring!(i64);
fixed_width_ring!(i128);

impl Ring for BigInt {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn from_i64(v: i64) -> Self {
        BigInt::from(v)
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, o: &Self) -> Option<Self> {
        Some(self + o)
    }
    fn sub(&self, o: &Self) -> Option<Self> {
        Some(self - o)
    }
    fn mul(&self, o: &Self) -> Option<Self> {
        Some(self * o)
    }
    fn exact_div(&self, o: &Self) -> Option<Self> {
        if Zero::is_zero(o) {
            return None;
        }
        debug_assert!(Zero::is_zero(&(self % o)), "inexact division");
        Some(self / o)
    }
    fn neg(&self) -> Option<Self> {
        Some(-self)
    }
    fn sign(&self) -> i32 {
        if Signed::is_positive(self) {
            1
        } else if Signed::is_negative(self) {
            -1
        } else {
            0
        }
    }
}

impl IntRing for BigInt {
    fn gcd(&self, o: &Self) -> Self {
        Integer::gcd(self, o)
    }
    fn abs(&self) -> Self {
        Signed::abs(self)
    }
}

impl Ring for f64 {
    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn from_i64(v: i64) -> Self {
        v as f64
    }
    fn is_zero(&self) -> bool {
        *self == 0.0
    }
    fn add(&self, o: &Self) -> Option<Self> {
        Some(self + o)
    }
    fn sub(&self, o: &Self) -> Option<Self> {
        Some(self - o)
    }
    fn mul(&self, o: &Self) -> Option<Self> {
        Some(self * o)
    }
    fn exact_div(&self, o: &Self) -> Option<Self> {
        Some(self / o)
    }
    fn neg(&self) -> Option<Self> {
        Some(-self)
    }
    fn sign(&self) -> i32 {
        if *self > 0.0 {
            1
        } else if *self < 0.0 {
            -1
        } else {
            0
        }
    }
}

/// Drop trailing (highest-degree) zero coefficients.
pub fn trim<T: Ring>(p: &mut Coeffs<T>) {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
}

/// Degree of a trimmed coefficient vector; `None` for the zero polynomial.
pub fn degree<T>(p: &[T]) -> Option<usize> {
    p.len().checked_sub(1)
}

pub fn derivative<T: Ring>(p: &[T]) -> Option<Coeffs<T>> {
    let mut out = Coeffs::new();
    for (k, c) in p.iter().enumerate().skip(1) {
        out.push(c.mul(&T::from_i64(k as i64))?);
    }
    trim(&mut out);
    Some(out)
}

/// Pseudo-remainder `lc(b)^(deg a - deg b + 1) · a mod b`.
///
/// `b` must be nonzero and trimmed, `deg a >= deg b`.
pub fn prem<T: Ring>(a: &[T], b: &[T]) -> Option<Coeffs<T>> {
    let db = b.len() - 1;
    let lb = &b[db];
    let mut r: Coeffs<T> = a.iter().cloned().collect();
    let mut e = a.len() as isize - b.len() as isize + 1;
    while r.len() > db && !r.is_empty() {
        let dr = r.len() - 1;
        let lr = r[dr].clone();
        let shift = dr - db;
        for c in r.iter_mut() {
            *c = c.mul(lb)?;
        }
        for (i, bc) in b.iter().enumerate() {
            let t = bc.mul(&lr)?;
            r[i + shift] = r[i + shift].sub(&t)?;
        }
        // leading term cancels exactly by construction
        r.pop();
        trim(&mut r);
        e -= 1;
    }
    if e > 0 {
        let f = lb.pow(e as usize)?;
        for c in r.iter_mut() {
            *c = c.mul(&f)?;
        }
    }
    Some(r)
}

/// Divide out the (positive) content. Leaves the sign of the leading
/// coefficient unchanged.
pub fn primitive_part<T: IntRing>(p: &[T]) -> Coeffs<T> {
    let mut g = T::zero();
    for c in p {
        g = g.gcd(c);
    }
    let g = g.abs();
    if g.is_zero() || g.sign() == 0 {
        return p.iter().cloned().collect();
    }
    p.iter()
        .map(|c| c.exact_div(&g).expect("content divides every coefficient"))
        .collect()
}

/// Resultant of `a` and `b` via the subresultant remainder sequence.
///
/// Inputs are trimmed coefficient vectors (index = power of x).
pub fn resultant<T: Ring>(a: &[T], b: &[T]) -> Option<T> {
    if a.is_empty() || b.is_empty() {
        return Some(T::zero());
    }
    let mut a: Coeffs<T> = a.iter().cloned().collect();
    let mut b: Coeffs<T> = b.iter().cloned().collect();
    let mut sign = 1i32;
    if a.len() < b.len() {
        std::mem::swap(&mut a, &mut b);
        let (da, db) = (a.len() - 1, b.len() - 1);
        if da % 2 == 1 && db % 2 == 1 {
            sign = -sign;
        }
    }
    if b.len() == 1 {
        let r = b[0].pow(a.len() - 1)?;
        return if sign < 0 { r.neg() } else { Some(r) };
    }
    let mut g = T::one();
    let mut h = T::one();
    loop {
        let da = a.len() - 1;
        let db = b.len() - 1;
        let delta = da - db;
        if da % 2 == 1 && db % 2 == 1 {
            sign = -sign;
        }
        let r = prem(&a, &b)?;
        a = b;
        if r.is_empty() {
            return Some(T::zero());
        }
        let div = g.mul(&h.pow(delta)?)?;
        b = r.iter().map(|c| c.exact_div(&div)).collect::<Option<_>>()?;
        g = a[a.len() - 1].clone();
        h = if delta == 0 {
            h
        } else {
            g.pow(delta)?.exact_div(&h.pow(delta - 1)?)?
        };
        if b.len() == 1 {
            let da = a.len() - 1;
            let num = b[0].pow(da)?;
            let res = num.exact_div(&h.pow(da - 1)?)?;
            return if sign < 0 { res.neg() } else { Some(res) };
        }
    }
}

/// Discriminant `(-1)^{n(n-1)/2} Res(P, P') / a_n`.
pub fn discriminant<T: Ring>(p: &[T]) -> Option<T> {
    let n = p.len() - 1;
    let dp = derivative(p)?;
    let res = resultant(p, &dp)?;
    let d = res.exact_div(&p[n])?;
    if (n * (n - 1) / 2) % 2 == 1 {
        d.neg()
    } else {
        Some(d)
    }
}

/// Polynomial gcd over the integers via the primitive remainder sequence.
/// The result is primitive with positive leading coefficient.
pub fn gcd<T: IntRing>(a: &[T], b: &[T]) -> Option<Coeffs<T>> {
    let mut a = primitive_part(a);
    let mut b = primitive_part(b);
    if a.len() < b.len() {
        std::mem::swap(&mut a, &mut b);
    }
    while !b.is_empty() {
        let r = prem(&a, &b)?;
        a = b;
        b = primitive_part(&r);
    }
    if a.last().is_some_and(|c| c.sign() < 0) {
        a = a.iter().map(|c| c.neg()).collect::<Option<_>>()?;
    }
    Some(a)
}

/// Exact quotient `a / b` up to a positive constant, returned primitive.
/// Requires `b | a` over the rationals.
pub fn primitive_quotient<T: IntRing>(a: &[T], b: &[T]) -> Option<Coeffs<T>> {
    let db = b.len() - 1;
    let lb = &b[db];
    let mut r: Coeffs<T> = a.iter().cloned().collect();
    let mut q: Coeffs<T> = smallvec::smallvec![T::zero(); a.len() - db];
    // Multiply a by lb^(deg a - deg b + 1) on the fly, tracking q.
    while r.len() > db && !r.is_empty() {
        let dr = r.len() - 1;
        let lr = r[dr].clone();
        let shift = dr - db;
        for c in r.iter_mut() {
            *c = c.mul(lb)?;
        }
        for c in q.iter_mut() {
            *c = c.mul(lb)?;
        }
        q[shift] = q[shift].add(&lr)?;
        for (i, bc) in b.iter().enumerate() {
            let t = bc.mul(&lr)?;
            r[i + shift] = r[i + shift].sub(&t)?;
        }
        r.pop();
        trim(&mut r);
    }
    debug_assert!(r.is_empty(), "primitive_quotient: b does not divide a");
    trim(&mut q);
    let mut q = primitive_part(&q);
    if q.last().is_some_and(|c| c.sign() < 0) {
        q = q.iter().map(|c| c.neg()).collect::<Option<_>>()?;
    }
    Some(q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use smallvec::smallvec;

    #[test]
    fn prem_matches_hand_computation() {
        // 4(x^2 - 1) mod 2x = -4
        let a: Coeffs<i128> = smallvec![-1, 0, 1];
        let b: Coeffs<i128> = smallvec![0, 2];
        assert_eq!(prem(&a, &b).unwrap().as_slice(), &[-4]);
    }

    #[test]
    fn resultant_of_linear_factors() {
        // Res((x-1)(x-2), x-3) = (3-1)(3-2) up to the standard sign convention
        let a: Coeffs<i128> = smallvec![2, -3, 1];
        let b: Coeffs<i128> = smallvec![-3, 1];
        // Res(a, b) = (-1)^{2·1} · 1^2 · a(3) = 2
        assert_eq!(resultant(&a, &b), Some(2));
        assert_eq!(resultant(&b, &a), Some(2));
    }

    #[test]
    fn gcd_detects_common_root() {
        // (x-1)^2 (x+2) and (x-1)(x+5)
        let a: Coeffs<i128> = smallvec![2, -3, 0, 1];
        let b: Coeffs<i128> = smallvec![-5, 4, 1];
        assert_eq!(gcd(&a, &b).unwrap().as_slice(), &[-1, 1]);
    }

    #[test]
    fn overflow_is_reported() {
        let a: Coeffs<i128> = smallvec![i128::MAX / 2, 3, i128::MAX / 3];
        assert!(discriminant(&a).is_none());
    }
}
