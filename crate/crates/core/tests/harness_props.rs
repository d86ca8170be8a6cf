use num_bigint::BigInt;
use polydisc_core::asymptotic::{lambda0, McBudget, Normalization};
use polydisc_core::census::{corollary_threshold, run_census, threshold_for_delta, CensusRow, CensusSpec};
use polydisc_core::harness::*;
use polydisc_core::volume::f_quadratic;
use polydisc_core::{Error, HeightKind};
use proptest::prelude::*;

fn quadratic_census(qs: &[u64], xs: impl Fn(u64) -> Vec<BigInt>) -> Vec<CensusRow> {
    let mut rows = Vec::new();
    for &q in qs {
        let spec = CensusSpec::new(2, q, HeightKind::Naive, xs(q)).unwrap().with_workers(2);
        rows.extend(run_census(&spec).unwrap().rows());
    }
    rows
}

proptest! {
    #[test]
    fn noiseless_power_law_recovered(a in 0.1f64..3.0, c in 0.01f64..100.0, k in 3usize..8) {
        let pts: Vec<(f64, f64, f64)> = (0..k).map(|i| {
            let d = 10f64.powi(-(i as i32) - 1);
            (d, c * d.powf(a), 0.01 * c * d.powf(a))
        }).collect();
        let f = fit_power_law(&pts).unwrap();
        prop_assert!((f.exponent - a).abs() < 1e-10);
        prop_assert!((f.prefactor / c - 1.0).abs() < 1e-10);
        prop_assert!(f.exponent_stderr >= 0.0 && f.prefactor_stderr >= 0.0);
        prop_assert_eq!(f.points_used, k);
    }
}

#[test]
fn fit_rejects_bad_input() {
    assert!(fit_power_law(&[(0.1, 1.0, 0.1)]).is_err());
    assert!(matches!(fit_power_law(&[(0.1, 1.0, 0.1), (0.01, 0.0, 0.1), (0.001, 1.0, 0.1)]), Err(Error::Domain(_))));
}

#[test]
fn theorem1_quadratic_bounded() {
    let delta = 4.0;
    let qs = [4, 8, 16, 32];
    let rows = quadratic_census(&qs, |q| vec![threshold_for_delta(delta, q, 2).unwrap()]);
    for s in 0..2u32 {
        let f = f_quadratic(s, delta, 1e-12).unwrap();
        let p = DensityPoint { delta, value: f, stderr: 0.0 };
        let rep = theorem1_report(&rows, 2, s, HeightKind::Naive, &p, 3.0).unwrap();
        assert!(rep.bounded, "{rep:?}");
        assert!(rep.outside_stated_range);
        assert_eq!(rep.rows.len(), 4);
        assert!(rep.rows.iter().all(|r| r.r < 10.0), "{rep:?}");
    }
}

#[test]
fn theorem1_zero_delta_reports_degenerate_count() {
    let qs = [2, 4, 8];
    let rows = quadratic_census(&qs, |_| vec![BigInt::from(0)]);
    let p = DensityPoint { delta: 0.0, value: 0.0, stderr: 0.0 };
    let rep = theorem1_report(&rows, 2, 0, HeightKind::Naive, &p, 3.0).unwrap();
    for r in &rep.rows {
        assert_eq!(r.predicted, 0.0);
        assert_eq!(r.r, r.count as f64 / (r.q as f64).powi(2));
    }
}

#[test]
fn theorem1_threshold_is_exact_integer() {
    // 4Q² in integer arithmetic and δ·Q^{2n-2} from the float δ coincide
    let qs = [3u64, 5, 7];
    let rows = quadratic_census(&qs, |q| vec![BigInt::from(4 * q * q)]);
    let p = DensityPoint { delta: 4.0, value: f_quadratic(0, 4.0, 1e-12).unwrap(), stderr: 0.0 };
    let rep = theorem1_report(&rows, 2, 0, HeightKind::Naive, &p, 3.0).unwrap();
    for (r, q) in rep.rows.iter().zip(qs) {
        assert_eq!(r.x, (4 * q * q).to_string());
    }
}

#[test]
fn theorem1_mismatched_grid_rejected() {
    let rows = quadratic_census(&[2, 4], |_| vec![BigInt::from(3)]);
    let p = DensityPoint { delta: 1.0, value: 0.5, stderr: 0.0 };
    assert!(matches!(theorem1_report(&rows, 2, 0, HeightKind::Naive, &p, 3.0), Err(Error::Domain(_))));
    assert!(theorem1_report(&rows[..1], 2, 0, HeightKind::Naive, &p, 3.0).is_err());
}

#[test]
fn theorem2_quadratic_prefactor() {
    let b = McBudget::new(1000, 1);
    let points: Vec<DensityPoint> = [1e-3, 1e-4, 1e-5, 1e-6]
        .iter()
        .map(|&d| DensityPoint { delta: d, value: f_quadratic(0, d, 1e-13).unwrap(), stderr: 0.0 })
        .collect();
    let full = lambda0(2, HeightKind::Naive, 1e-8, Normalization::TimesTwoM, &b).unwrap();
    let rep = theorem2_report(&full, &points, &[], &[]).unwrap();
    assert_eq!(rep.exponent_target, 1.0);
    assert!((rep.fit.exponent - 1.0).abs() < 0.01, "{rep:?}");
    assert!(rep.prefactor_rel_deviation.abs() < 0.05, "{rep:?}");
    let half = lambda0(2, HeightKind::Naive, 1e-8, Normalization::TimesM, &b).unwrap();
    let rep = theorem2_report(&half, &points, &[], &[]).unwrap();
    assert!(rep.prefactor_rel_deviation > 0.5, "{rep:?}");
}

#[test]
fn theorem2_corollary_counts() {
    let b = McBudget::new(1000, 1);
    let lam = lambda0(2, HeightKind::Naive, 1e-8, Normalization::default(), &b).unwrap();
    let v = 0.3;
    let qs = [8, 16, 32, 64];
    let rows = quadratic_census(&qs, |q| vec![corollary_threshold(2, q, v).unwrap()]);
    let points: Vec<DensityPoint> =
        [1e-2, 1e-3, 1e-4].iter().map(|&d| DensityPoint { delta: d, value: f_quadratic(0, d, 1e-12).unwrap(), stderr: 0.0 }).collect();
    let rep = theorem2_report(&lam, &points, &rows, &[v]).unwrap();
    assert_eq!(rep.corollary.len(), 4);
    assert_eq!(rep.corollary_fits.len(), 1);
    let fit = &rep.corollary_fits[0];
    assert!((fit.target - 2.4).abs() < 1e-12);
    assert!(fit.deviation.abs() < 0.3, "{fit:?}");
    let plot = theorem2_plot_rows(&rep, &points);
    assert_eq!(plot.len(), 3);
    assert!(theorem2_report(&lam, &points, &rows, &[0.1]).is_err());
    assert!(theorem2_report(&lam, &[], &rows, &[]).is_err());
}

#[test]
fn reports_are_pure() {
    let rows = quadratic_census(&[2, 4, 8], |q| vec![threshold_for_delta(1.0, q, 2).unwrap()]);
    let p = DensityPoint { delta: 1.0, value: f_quadratic(1, 1.0, 1e-12).unwrap(), stderr: 1e-6 };
    let a = serde_json::to_string(&theorem1_report(&rows, 2, 1, HeightKind::Naive, &p, 3.0).unwrap()).unwrap();
    let b = serde_json::to_string(&theorem1_report(&rows, 2, 1, HeightKind::Naive, &p, 3.0).unwrap()).unwrap();
    assert_eq!(a, b);
}
