use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use polydisc_core::poly::discriminant::{discriminant_from_roots, discriminant_det, discriminant_prs};
use polydisc_core::poly::height::height_exact;
use polydisc_core::poly::roots::backward_error;
use polydisc_core::poly::{
    coeffs_from_roots, height, jacobian_formula, roots_numeric, roots_numeric_int, signature,
    squarefree_decomposition,
};
use polydisc_core::{HeightKind, IntPolynomial};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn int_poly(max_deg: usize, bound: i64) -> impl Strategy<Value = IntPolynomial> {
    (2..=max_deg).prop_flat_map(move |n| {
        (prop::collection::vec(-bound..=bound, n), (1..=bound, any::<bool>())).prop_map(
            |(mut c, (lead, neg))| {
                c.push(if neg { -lead } else { lead });
                IntPolynomial::from_i64(&c).unwrap()
            },
        )
    })
}

fn real_vec(n: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-10.0f64..10.0, n + 1)
        .prop_filter("nonzero ends", |v| v[0].abs() > 1e-3 && v[v.len() - 1].abs() > 1e-3)
}

/// Naive Leibniz expansion over all permutations, independent of both
/// library routes.
fn leibniz(m: &[Vec<BigInt>]) -> BigInt {
    fn rec(m: &[Vec<BigInt>], row: usize, used: &mut Vec<bool>, sign: i32) -> BigInt {
        if row == m.len() {
            return BigInt::from(sign);
        }
        let mut total = BigInt::zero();
        for col in 0..m.len() {
            if used[col] || m[row][col].is_zero() {
                continue;
            }
            // parity: number of used columns to the right of `col`
            let right_used = (col + 1..m.len()).filter(|&c| used[c]).count();
            let s = if right_used % 2 == 0 { sign } else { -sign };
            used[col] = true;
            total += &m[row][col] * rec(m, row + 1, used, s);
            used[col] = false;
        }
        total
    }
    rec(m, 0, &mut vec![false; m.len()], 1)
}

#[test]
fn determinant_route_matches_permutation_expansion() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..200 {
        let n = rng.random_range(2..=4);
        let mut c: Vec<i64> = (0..n).map(|_| rng.random_range(-20..=20)).collect();
        c.push(rng.random_range(1..=20) * if rng.random_bool(0.5) { 1 } else { -1 });
        let p = IntPolynomial::from_i64(&c).unwrap();
        let m = polydisc_core::poly::discriminant::discriminant_matrix(&p).unwrap();
        let det = leibniz(&m);
        let sign = if (n * (n - 1) / 2) % 2 == 1 { -1 } else { 1 };
        assert_eq!(discriminant_det(&p).unwrap().0, det * sign, "{p}");
    }
}

#[test]
fn prs_matches_determinant_on_ten_thousand_random_polynomials() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..10_000 {
        let n = rng.random_range(2..=6);
        let mut c: Vec<i64> = (0..n).map(|_| rng.random_range(-100..=100)).collect();
        let lead = rng.random_range(1..=100) * if rng.random_bool(0.5) { 1 } else { -1 };
        c.push(lead);
        let p = IntPolynomial::from_i64(&c).unwrap();
        assert_eq!(discriminant_prs(&p).unwrap(), discriminant_det(&p).unwrap(), "{p}");
    }
}

#[test]
fn discriminant_is_zero_exactly_for_constructed_repeated_roots() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..300 {
        // (x - r)^2 · q(x)
        let r: i64 = rng.random_range(-5..=5);
        let q: Vec<i64> = (0..rng.random_range(1..=3)).map(|_| rng.random_range(-4..=4)).chain([1]).collect();
        let sq = [r * r, -2 * r, 1];
        let mut c = vec![0i64; sq.len() + q.len() - 1];
        for (i, a) in sq.iter().enumerate() {
            for (j, b) in q.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        let p = IntPolynomial::from_i64(&c).unwrap();
        assert!(discriminant_prs(&p).unwrap().0.is_zero());
        assert!(discriminant_det(&p).unwrap().0.is_zero());
        assert!(squarefree_decomposition(&p).iter().any(|(_, i)| *i >= 2));
    }
}

#[test]
fn mahler_lower_bound_by_random_search() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for n in 2..=6usize {
        let h0 = HeightKind::Mahler.lower_bound_constant(n);
        let mut min = f64::INFINITY;
        for _ in 0..20_000 {
            let v: Vec<f64> = (0..=n).map(|_| rng.random_range(-1.0..1.0)).collect();
            let m = v.iter().fold(0.0f64, |m, c| m.max(c.abs()));
            let v: Vec<f64> = v.iter().map(|c| c / m).collect();
            let h = height(&v, HeightKind::Mahler).unwrap();
            min = min.min(h);
        }
        println!("mahler n={n}: empirical min {min:.4} (h0 = {h0:.4})");
        assert!(min >= h0, "n={n}: empirical min {min} below {h0}");
    }
}

#[test]
fn reconstruction_of_random_quintic() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..100 {
        let c: Vec<f64> = (0..6).map(|_| rng.random_range(-1.0..1.0)).collect();
        let r = roots_numeric(&c, 1e-12).unwrap();
        assert!(backward_error(&c, &r) <= 1e-12);
    }
}

#[test]
fn jacobian_matches_finite_differences() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for _ in 0..50 {
        let n = 4;
        let b: f64 = rng.random_range(0.5..2.0);
        let z: Vec<f64> = (0..n).map(|_| rng.random_range(-2.0..2.0)).collect();
        let mut x = vec![b];
        x.extend_from_slice(&z);
        let f = |x: &[f64]| coeffs_from_roots(x[0], &x[1..]).into_coords();
        let h = 1e-6;
        let mut jac = vec![vec![0.0; n + 1]; n + 1];
        for col in 0..=n {
            let mut xp = x.clone();
            let mut xm = x.clone();
            xp[col] += h;
            xm[col] -= h;
            let (fp, fm) = (f(&xp), f(&xm));
            for row in 0..=n {
                jac[row][col] = (fp[row] - fm[row]) / (2.0 * h);
            }
        }
        let det = det_f64(jac).abs();
        let want = jacobian_formula(b, &z);
        assert!((det - want).abs() <= 1e-5 * want, "{det} vs {want}");
    }
}

fn det_f64(mut m: Vec<Vec<f64>>) -> f64 {
    let n = m.len();
    let mut d = 1.0;
    for k in 0..n {
        let piv = (k..n).max_by(|&a, &b| m[a][k].abs().partial_cmp(&m[b][k].abs()).unwrap()).unwrap();
        if piv != k {
            m.swap(piv, k);
            d = -d;
        }
        d *= m[k][k];
        for i in k + 1..n {
            let f = m[i][k] / m[k][k];
            for j in k..n {
                m[i][j] -= f * m[k][j];
            }
        }
    }
    d
}

#[test]
fn low_degree_signature_follows_discriminant_sign() {
    for n in 2..=3usize {
        let q = 5i64;
        let total = (2 * q + 1).pow(n as u32 + 1);
        for idx in 0..total {
            let mut c = Vec::with_capacity(n + 1);
            let mut t = idx;
            for _ in 0..=n {
                c.push(t % (2 * q + 1) - q);
                t /= 2 * q + 1;
            }
            if c[n] == 0 {
                continue;
            }
            let p = IntPolynomial::from_i64(&c).unwrap();
            let d = discriminant_prs(&p).unwrap().0;
            let s = signature(&p).0;
            assert_eq!(d.is_negative(), s == 1, "{p}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn homogeneity_of_discriminant(p in int_poly(6, 30), t in -7i64..=7) {
        prop_assume!(t != 0);
        let n = p.degree() as u32;
        let scaled = p.scaled(&BigInt::from(t)).unwrap();
        let want = discriminant_prs(&p).unwrap().0 * BigInt::from(t).pow(2 * n - 2);
        prop_assert_eq!(discriminant_det(&scaled).unwrap().0, want);
    }

    #[test]
    fn reflection_preserves_discriminant_and_signature(p in int_poly(6, 30)) {
        let r = p.reflect();
        prop_assert_eq!(discriminant_prs(&p).unwrap(), discriminant_prs(&r).unwrap());
        prop_assert_eq!(signature(&p), signature(&r));
    }

    #[test]
    fn discriminant_agrees_with_root_product(p in int_poly(5, 20)) {
        let d = discriminant_det(&p).unwrap().0;
        prop_assume!(!d.is_zero());
        let exact = polydisc_core::poly::big_to_f64(&d);
        let approx = discriminant_from_roots(&p, 1e-12).unwrap();
        prop_assert!((approx - exact).abs() <= 1e-6 * exact.abs(), "{} vs {}", approx, exact);
    }

    #[test]
    fn zero_discriminant_iff_nonconstant_gcd(p in int_poly(5, 6)) {
        let d = discriminant_prs(&p).unwrap().0;
        let repeated = squarefree_decomposition(&p).iter().any(|(_, i)| *i >= 2);
        prop_assert_eq!(d.is_zero(), repeated);
    }

    #[test]
    fn signature_counts_real_roots(p in int_poly(6, 20)) {
        let d = discriminant_prs(&p).unwrap().0;
        prop_assume!(!d.is_zero());
        let roots = roots_numeric_int(&p, 1e-10).unwrap();
        let scale = roots.iter().fold(1.0f64, |m, z| m.max(z.norm()));
        let real = roots.iter().filter(|z| z.im.abs() < 1e-6 * scale).count();
        let s = signature(&p);
        prop_assert_eq!(s.real_roots(p.degree()), real);
        // parity: sign(D) = (-1)^s for squarefree P
        prop_assert_eq!(d.is_negative(), s.0 % 2 == 1);
    }

    #[test]
    fn exact_heights_match_float_heights(p in int_poly(6, 50)) {
        for kind in [HeightKind::Naive, HeightKind::Length] {
            let exact = height_exact(&p, kind).unwrap();
            let f = height(&p.to_f64(), kind).unwrap();
            prop_assert_eq!(polydisc_core::poly::big_to_f64(&exact), f);
        }
    }

    #[test]
    fn height_axioms(v in real_vec(4), t in -5.0f64..5.0) {
        prop_assume!(t.abs() > 1e-3);
        for kind in HeightKind::ALL {
            let h = height(&v, kind).unwrap();
            prop_assert!(h > 0.0);
            let tv: Vec<f64> = v.iter().map(|c| t * c).collect();
            let ht = height(&tv, kind).unwrap();
            prop_assert!((ht - t.abs() * h).abs() <= 1e-9 * ht.max(1.0));
            let rev: Vec<f64> = v.iter().rev().copied().collect();
            prop_assert!((height(&rev, kind).unwrap() - h).abs() <= 1e-9 * h.max(1.0));
            let alt: Vec<f64> = v.iter().enumerate().map(|(k, c)| if k % 2 == 1 { -c } else { *c }).collect();
            prop_assert!((height(&alt, kind).unwrap() - h).abs() <= 1e-9 * h.max(1.0));
        }
        prop_assert_eq!(height(&[0.0; 5], HeightKind::Naive).unwrap(), 0.0);
        prop_assert_eq!(height(&[0.0; 5], HeightKind::Length).unwrap(), 0.0);
    }

    #[test]
    fn roots_round_trip(z in prop::collection::vec(-3.0f64..3.0, 2..=6)) {
        let mut sorted = z.clone();
        sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
        prop_assume!(sorted.windows(2).all(|w| w[1] - w[0] > 0.05));
        let c = coeffs_from_roots(1.0, &z).into_coords();
        let mut r: Vec<f64> = roots_numeric(&c, 1e-12).unwrap().iter().map(|x| x.re).collect();
        r.sort_by(|a, b| a.partial_cmp(b).unwrap());
        for (a, b) in r.iter().zip(sorted.iter()) {
            prop_assert!((a - b).abs() < 1e-8, "{} vs {}", a, b);
        }
    }
}
