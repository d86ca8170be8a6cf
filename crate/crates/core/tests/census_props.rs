use num_bigint::BigInt;
use num_traits::Signed;
use polydisc_core::census::{
    crude_discriminant_bound, mahler_membership, naive_total, partition_work, run_census, CensusSpec,
    Membership,
};
use polydisc_core::poly::discriminant::discriminant_det;
use polydisc_core::poly::{height_int, signature};
use polydisc_core::{HeightKind, IntPolynomial};
use proptest::prelude::*;

/// Every integer vector in the box `|a_k| ≤ bound`, `a_n ≠ 0`.
fn all_polynomials(n: usize, bound: i64) -> Vec<IntPolynomial> {
    let side = (2 * bound + 1) as usize;
    let mut out = Vec::new();
    for idx in 0..side.pow(n as u32 + 1) {
        let mut t = idx;
        let mut c = Vec::with_capacity(n + 1);
        for _ in 0..=n {
            c.push((t % side) as i64 - bound);
            t /= side;
        }
        if c[n] != 0 {
            out.push(IntPolynomial::from_i64(&c).unwrap());
        }
    }
    out
}

/// Unpruned reference: determinant route and exact signature only.
fn reference_counts(polys: &[IntPolynomial], n: usize, xs: &[BigInt]) -> Vec<Vec<u64>> {
    let mut counts = vec![vec![0u64; xs.len()]; n / 2 + 1];
    for p in polys {
        let d = discriminant_det(p).unwrap().0.abs();
        let s = signature(p).0 as usize;
        for (j, x) in xs.iter().enumerate() {
            if d <= *x {
                counts[s][j] += 1;
            }
        }
    }
    counts
}

fn thresholds(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

#[test]
fn oracle_equivalence_small_degrees() {
    for n in 2..=3 {
        for q in 1..=4u64 {
            let xs = thresholds(&[0, 1, 5, 30, 200, 5000]);
            let polys = all_polynomials(n, q as i64);
            let want = reference_counts(&polys, n, &xs);
            let spec = CensusSpec::new(n, q, HeightKind::Naive, xs).unwrap();
            let got = run_census(&spec).unwrap();
            assert_eq!(got.counts, want, "n={n} Q={q}");
            assert_eq!(BigInt::from(got.total), naive_total(n, q));
        }
    }
}

#[test]
fn reduced_and_unreduced_tables_agree() {
    let xs = thresholds(&[0, 10, 100, 1000, 10_000]);
    let spec = CensusSpec::new(3, 3, HeightKind::Naive, xs).unwrap();
    let reduced = run_census(&spec).unwrap();
    let full = run_census(&spec.clone().with_reduce(false)).unwrap();
    assert!(reduced.same_counts(&full));
    assert!(reduced.enumerated * 2 <= full.enumerated);
}

#[test]
fn merged_shards_equal_single_shard() {
    let xs = thresholds(&[3, 300, 30_000]);
    let spec = CensusSpec::new(3, 5, HeightKind::Naive, xs).unwrap();
    let one = run_census(&spec).unwrap();
    for w in [2, 3, 8] {
        let many = run_census(&spec.clone().with_workers(w)).unwrap();
        assert!(one.same_counts(&many), "workers={w}");
    }
    let shards = partition_work(&spec.clone().with_workers(8));
    let lens: Vec<u128> = shards.iter().map(|s| s.len()).collect();
    assert!(lens.iter().max().unwrap() <= &(2 * lens.iter().min().unwrap()));
}

#[test]
fn quartic_census_matches_reference() {
    let xs = thresholds(&[0, 50, 2000, 100_000]);
    let polys = all_polynomials(4, 2);
    let want = reference_counts(&polys, 4, &xs);
    let got = run_census(&CensusSpec::new(4, 2, HeightKind::Naive, xs).unwrap()).unwrap();
    assert_eq!(got.counts, want);
}

#[test]
fn reflection_consistency() {
    // reversal x^n P(1/x) preserves D and s when a_0 ≠ 0
    let n = 3;
    let q = 3;
    let xs = thresholds(&[0, 20, 400, 9000]);
    let polys = all_polynomials(n, q);
    let (with_zero, nonzero): (Vec<_>, Vec<_>) =
        polys.into_iter().partition(|p| p.coeffs()[0] == BigInt::from(0));
    let reversed: Vec<IntPolynomial> = nonzero.iter().map(|p| p.reversed().unwrap()).collect();
    let a = reference_counts(&reversed, n, &xs);
    let b = reference_counts(&with_zero, n, &xs);
    let table = run_census(&CensusSpec::new(n, q as u64, HeightKind::Naive, xs).unwrap()).unwrap();
    for s in 0..a.len() {
        for j in 0..a[s].len() {
            assert_eq!(table.count(s, j), a[s][j] + b[s][j]);
        }
    }
}

#[test]
fn length_and_mahler_censuses_filter_correctly() {
    for (kind, box_bound) in [(HeightKind::Length, 2i64), (HeightKind::Mahler, 6)] {
        let n = 2;
        let q = 2u64;
        let xs = thresholds(&[0, 4, 16, 1000]);
        let polys: Vec<IntPolynomial> = all_polynomials(n, box_bound)
            .into_iter()
            .filter(|p| match kind {
                HeightKind::Mahler => {
                    let c: Vec<i128> = p.to_i128().unwrap();
                    mahler_membership(&c, q) == Membership::In
                }
                _ => height_int(p, kind).unwrap() <= q as f64,
            })
            .collect();
        let want = reference_counts(&polys, n, &xs);
        let got = run_census(&CensusSpec::new(n, q, kind, xs).unwrap()).unwrap();
        assert_eq!(got.counts, want, "{kind}");
        assert_eq!(got.total, polys.len() as u64);
        assert_eq!(got.ambiguous, 0);
    }
}

#[test]
fn mahler_membership_matches_float_away_from_boundary() {
    for p in all_polynomials(3, 3) {
        let c = p.to_i128().unwrap();
        let m = height_int(&p, HeightKind::Mahler).unwrap();
        for q in 1..=4u64 {
            let decided = mahler_membership(&c, q);
            if (m - q as f64).abs() > 1e-6 {
                assert_eq!(decided == Membership::In, m <= q as f64, "{p} M={m} Q={q}");
            } else {
                assert_eq!(decided, Membership::In, "{p} M={m} Q={q}");
            }
        }
    }
}

#[test]
fn crude_bound_covers_every_discriminant() {
    for n in 2..=4 {
        let q = 2;
        let xs = vec![crude_discriminant_bound(n, q)];
        let t = run_census(&CensusSpec::new(n, q, HeightKind::Naive, xs).unwrap()).unwrap();
        let sum: u64 = (0..=n / 2).map(|s| t.count(s, 0)).sum();
        assert_eq!(BigInt::from(sum), naive_total(n, q));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn counts_are_monotone_and_deterministic(n in 2usize..=4, q in 1u64..=3, mut xs in prop::collection::vec(0i64..100_000, 1..6), workers in 1usize..=4) {
        xs.sort();
        xs.dedup();
        let spec = CensusSpec::new(n, q, HeightKind::Naive, thresholds(&xs)).unwrap();
        let a = run_census(&spec).unwrap();
        let b = run_census(&spec.clone().with_workers(workers)).unwrap();
        prop_assert!(a.same_counts(&b));
        for row in &a.counts {
            prop_assert!(row.windows(2).all(|w| w[0] <= w[1]));
        }
        let last: u64 = a.counts.iter().map(|r| *r.last().unwrap()).sum();
        prop_assert!(last <= a.total);
    }
}

#[test]
#[ignore]
fn timing_cubic_q64() {
    let xs = thresholds(&[64i64.pow(4)]);
    let t = run_census(&CensusSpec::new(3, 64, HeightKind::Naive, xs).unwrap()).unwrap();
    println!("elapsed {:.2}s total {}", t.elapsed, t.total);
}
