use polydisc_core::asymptotic::*;
use polydisc_core::poly::roots::coeffs_from_roots;
use polydisc_core::quad::{gauss_kronrod, tanh_sinh};
use polydisc_core::rng::stream;
use polydisc_core::volume::vandermonde_sq;
use polydisc_core::HeightKind;
use proptest::prelude::*;
use rand::Rng;

fn theta_vec() -> impl Strategy<Value = Vec<f64>> {
    (1usize..6).prop_flat_map(|m| prop::collection::vec(-3.0f64..3.0, m))
}

proptest! {
    #[test]
    fn delta_tilde_permutation_invariant(theta in theta_vec(), seed in any::<u64>()) {
        let mut p = theta.clone();
        let mut rng = stream(seed, 0);
        for i in (1..p.len()).rev() {
            let j = rng.random_range(0..=i);
            p.swap(i, j);
        }
        let (a, b) = (delta_tilde(&theta), delta_tilde(&p));
        prop_assert!((a - b).abs() <= 1e-12 * a.abs());
    }

    #[test]
    fn delta_tilde_homogeneous(theta in theta_vec(), r in 0.1f64..3.0) {
        let n = theta.len() + 1;
        let scaled: Vec<f64> = theta.iter().map(|t| r * t).collect();
        let want = r.powi((n * (n - 1)) as i32) * delta_tilde(&theta);
        let got = delta_tilde(&scaled);
        // rounding of r·θ_i amplifies in near-coincident differences
        prop_assert!((got - want).abs() <= 1e-8 * want.abs().max(1e-300));
    }

    #[test]
    fn k_tilde_even(tau in -5.0f64..5.0, n in 2usize..8) {
        for kind in HeightKind::ALL {
            prop_assert_eq!(k_tilde(tau, n, kind), k_tilde(-tau, n, kind));
        }
    }

    #[test]
    fn k_tilde_matches_height_of_power(tau in -2.0f64..2.0, n in 2usize..7) {
        for kind in [HeightKind::Naive, HeightKind::Length] {
            let c = coeffs_from_roots(1.0, &vec![tau; n]);
            let h = polydisc_core::poly::height(c.coords(), kind).unwrap();
            prop_assert!((k_tilde(tau, n, kind) * h - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn rho_choice_identity(n in 2usize..6, tau in -1.0f64..1.0, delta in 1e-6f64..1.0, seed in any::<u64>()) {
        // with ρ^{n(n-1)} = δ, Δ(α) = δ Δ̃(θ)
        let mut rng = stream(seed, 0);
        let theta: Vec<f64> = (0..n - 1).map(|_| rng.random::<f64>() * 4.0 - 2.0).collect();
        let rho = delta.powf(1.0 / (n * (n - 1)) as f64);
        let alpha = center_change(tau, rho, &theta);
        let lhs = vandermonde_sq(&alpha);
        let rhs = delta * delta_tilde(&theta);
        prop_assert!((lhs - rhs).abs() <= 1e-9 * rhs.abs().max(1e-300), "{} vs {}", lhs, rhs);
    }
}

#[test]
fn center_change_jacobian() {
    let mut rng = stream(5, 0);
    for n in 2..6 {
        for _ in 0..20 {
            let rho: f64 = 0.1 + rng.random::<f64>();
            let x: Vec<f64> = (0..n).map(|_| rng.random::<f64>() * 2.0 - 1.0).collect();
            let f = |v: &[f64]| center_change(v[0], rho, &v[1..]);
            let h = 1e-6;
            let mut jac = vec![vec![0.0; n]; n];
            for j in 0..n {
                let mut p = x.clone();
                let mut m = x.clone();
                p[j] += h;
                m[j] -= h;
                let (fp, fm) = (f(&p), f(&m));
                for i in 0..n {
                    jac[i][j] = (fp[i] - fm[i]) / (2.0 * h);
                }
            }
            let det = det(jac);
            let want = rho.powi(n as i32 - 1);
            assert!((det.abs() - want).abs() < 1e-6 * want, "n={n}: {det} vs {want}");
        }
    }
}

fn det(mut a: Vec<Vec<f64>>) -> f64 {
    let n = a.len();
    let mut d = 1.0;
    for c in 0..n {
        let p = (c..n).max_by(|&i, &j| a[i][c].abs().partial_cmp(&a[j][c].abs()).unwrap()).unwrap();
        if p != c {
            a.swap(p, c);
            d = -d;
        }
        d *= a[c][c];
        for r in c + 1..n {
            let f = a[r][c] / a[c][c];
            for k in c..n {
                a[r][k] -= f * a[c][k];
            }
        }
    }
    d
}

#[test]
fn i1_integrand_bounded_by_i3_with_k0() {
    // K(α) ≤ 1 for monic polynomials under every built-in height
    let mut rng = stream(9, 0);
    for kind in HeightKind::ALL {
        for n in 2..6 {
            for _ in 0..2000 {
                let rho = rng.random::<f64>();
                let tau = rng.random::<f64>() * 2.0 - 1.0;
                let theta: Vec<f64> = (0..n - 1).map(|_| (rng.random::<f64>() - 0.5) * 10.0).collect();
                let a = i1_tilde_integrand(rho, tau, &theta, kind);
                let b = i3_integrand(1.0, &theta);
                assert!(a <= b * (1.0 + 1e-12), "{kind} n={n}: {a} > {b}");
            }
        }
    }
}

#[test]
fn i4_cubic_matches_substitution_oracle() {
    // [0,1]: B(1/3, 1/3); [-1,0]: with u = w³, 3 ∫_0^1 (1 + w³)^{-2/3} dw
    let beta = 2.678_938_534_707_747_6f64.powi(2) / 1.354_117_939_426_400_4;
    let neg = 3.0 * gauss_kronrod(|w| (1.0 + w * w * w).powf(-2.0 / 3.0), 0.0, 1.0, 1e-14).value;
    let got = integrate_i4_grid(3, 1e-12).unwrap();
    assert!((got.value - (beta + neg)).abs() < 1e-9, "{} vs {}", got.value, beta + neg);
    let via_mc_entry = integrate_i4(3, 1e-10, &McBudget::new(1000, 1)).unwrap();
    assert_eq!(via_mc_entry.value, got.value);
}

#[test]
fn i4_quartic_dual_method() {
    let grid = integrate_i4_grid(4, 1e-9).unwrap();
    assert!(!grid.target_missed);
    let mc = integrate_i4(4, 1e-6, &McBudget::new(4_000_000, 11)).unwrap();
    let combined = (grid.error_estimate.powi(2) + mc.error_estimate.powi(2)).sqrt();
    assert!((grid.value - mc.value).abs() <= 3.0 * combined, "{grid:?} vs {mc:?}");
    let bound = i4_selberg_bound(4).unwrap();
    assert!(grid.value <= bound);
}

#[test]
fn i4_mc_deterministic_in_workers() {
    let a = integrate_i4(5, 1e-9, &McBudget::new(64_000, 3)).unwrap();
    let b = integrate_i4(5, 1e-9, &McBudget::new(64_000, 3).with_workers(3)).unwrap();
    assert_eq!(a, b);
}

#[test]
fn empty_product_at_n2() {
    assert_eq!(integrate_i4(2, 1e-3, &McBudget::new(1000, 1)).unwrap().value, 1.0);
}

#[test]
fn selberg_bound_formula() {
    let b4 = i4_selberg_bound(4).unwrap();
    assert!((b4 - 4.0 * selberg_closed_form(2, 0.5, 0.5, -0.25).unwrap()).abs() < 1e-12);
    let b5 = i4_selberg_bound(5).unwrap();
    assert!((b5 - 8.0 * selberg_closed_form(3, 0.6, 0.6, -0.2).unwrap()).abs() < 1e-12);
    assert!(i4_selberg_bound(3).is_err());
}

/// `S_2(α, β, γ)` by iterated tanh-sinh with the inner rule split at `t₁`.
fn selberg2_quadrature(alpha: f64, beta: f64, gamma: f64) -> f64 {
    let w = |dl: f64, dr: f64| dl.powf(alpha - 1.0) * dr.powf(beta - 1.0);
    tanh_sinh(
        |t1, dl1, dr1| {
            let left = tanh_sinh(|_, dl, dr| w(dl, 1.0 - dl) * dr.powf(2.0 * gamma), 0.0, t1, 1e-7).value;
            let right = tanh_sinh(|_, dl, dr| w(t1 + dl, dr) * dl.powf(2.0 * gamma), t1, 1.0, 1e-7).value;
            w(dl1, dr1) * (left + right)
        },
        0.0,
        1.0,
        1e-6,
    )
    .value
}

#[test]
fn selberg_two_dimensional_oracles() {
    let closed = selberg_closed_form(2, 1.0, 1.0, 1.0).unwrap();
    assert!((closed - 1.0 / 6.0).abs() < 1e-12);
    let q = selberg2_quadrature(1.0, 1.0, 1.0);
    assert!((q / closed - 1.0).abs() < 1e-4);
    let closed = selberg_closed_form(2, 0.5, 0.5, -0.25).unwrap();
    let q = selberg2_quadrature(0.5, 0.5, -0.25);
    assert!((q / closed - 1.0).abs() < 1e-3, "{q} vs {closed}");
}

#[test]
fn lambda0_quadratic_closed_computation() {
    let b = McBudget::new(1000, 1);
    let oracle = gauss_kronrod(|t: f64| 1.0 / 1f64.max(2.0 * t.abs()).max(t * t), -1.0, 0.0, 1e-14).value
        + gauss_kronrod(|t: f64| 1.0 / 1f64.max(2.0 * t.abs()).max(t * t), 0.0, 1.0, 1e-14).value;
    assert!((oracle - (1.0 + 2f64.ln())).abs() < 1e-6);
    let m = lambda0(2, HeightKind::Naive, 1e-8, Normalization::TimesM, &b).unwrap();
    assert!((m.lambda0 - oracle).abs() < 1e-6, "{} vs {oracle}", m.lambda0);
    let full = lambda0(2, HeightKind::Naive, 1e-8, Normalization::TimesTwoM, &b).unwrap();
    assert!((full.lambda0 - 2.0 * oracle).abs() < 2e-6);
}

#[test]
fn lambda0_positive_everywhere() {
    let b = McBudget::new(64_000, 2);
    for kind in HeightKind::ALL {
        for n in 2..7 {
            let r = lambda0(n, kind, 1e-2, Normalization::default(), &b).unwrap();
            assert!(r.lambda0 > 0.0, "{kind} n={n}");
        }
    }
}

#[test]
fn lambda0_quartic_precise() {
    let r = lambda0(4, HeightKind::Naive, 1e-3, Normalization::default(), &McBudget::new(1000, 1)).unwrap();
    assert!(r.lambda0_err <= 1e-3 * r.lambda0);
    assert!(!r.target_missed);
}

#[test]
fn root_space_lambda0_selects_full_space_lift() {
    let b = McBudget::new(2_000_000, 4);
    let rs = lambda0_root_space(2, HeightKind::Naive, &b).unwrap();
    let full = lambda0(2, HeightKind::Naive, 1e-8, Normalization::TimesTwoM, &b).unwrap().lambda0;
    let half = lambda0(2, HeightKind::Naive, 1e-8, Normalization::TimesM, &b).unwrap().lambda0;
    assert!((rs.value - full).abs() < 4.0 * rs.error_estimate, "{rs:?} vs {full}");
    assert!((rs.value - half).abs() > 10.0 * rs.error_estimate);
}

#[test]
fn scaling_reduction_examples() {
    let f = TestFunction::RadialPower { c: 2.0 };
    let one = scaling_reduction_check(1, -1.0, 0.5, 1.0, f, 1e-9).unwrap();
    assert!((one.cone - 1.5).abs() < 1e-8);
    assert_eq!(one.formula, 1.5);
    let two = scaling_reduction_check(2, -2.0, 0.5, 1.0, f, 1e-8).unwrap();
    assert!((two.cone / two.formula - 1.0).abs() < 1e-3);
    let k16 = scaling_reduction_check(1, -1.0, 0.5, 16.0, f, 1e-9).unwrap();
    assert!((k16.cone / one.cone - 16f64.powf(1.0 / 3.0)).abs() < 1e-6);
}

#[test]
fn scaling_reduction_reduced_discriminant() {
    let r = scaling_reduction_check(2, -0.5, 0.5, 1.0, TestFunction::ReducedDiscriminant, 1e-6).unwrap();
    assert!((r.cone / r.formula - 1.0).abs() < 1e-4);
    assert_eq!(r.matching, Some(Normalization::TimesTwoM));
}

#[test]
fn scaling_reduction_rejects_inadmissible() {
    let f = TestFunction::RadialPower { c: 2.0 };
    assert!(scaling_reduction_check(1, 0.5, 1.0, 1.0, f, 1e-6).is_err());
    assert!(scaling_reduction_check(1, -1.0, 0.5, -1.0, f, 1e-6).is_err());
    assert!(scaling_reduction_check(3, -1.0, 0.5, 1.0, f, 1e-6).is_err());
}

#[test]
fn i3_closed_form_matches_direct_integral_at_n3() {
    // I₃(K) over ℝ² against the reduction with I₄ from the grid
    let k: f64 = 0.7;
    let i4 = integrate_i4_grid(3, 1e-12).unwrap().value;
    let kappa = k.powi(4);
    let r = scaling_reduction_check(2, -0.5, 0.5, kappa, TestFunction::ReducedDiscriminant, 1e-6).unwrap();
    let want = i3_value(3, k, i4, Normalization::TimesTwoM);
    assert!((r.full_space / want - 1.0).abs() < 1e-4, "{} vs {want}", r.full_space);
}
