use super::*;
use approx::assert_relative_eq;
use proptest::prelude::*;
use std::f64::consts::PI;

const OMEGA_C: f64 = 2.0 * PI;

fn metal(ratio: f64) -> CavityParams<f64> {
    CavityParams::<f64>::from_ratios(ratio, 0.0, 1.0).unwrap()
}

/// Bisection on the tangent form `tan(ωL/2c) = ±|ε|^{±1/2}` over an
/// interval that avoids the tangent's poles.
fn tan_form_root(params: &CavityParams<f64>, even: bool, lo: f64, hi: f64) -> f64 {
    let f = |w: f64| {
        let e = -dielectric(w, params).unwrap();
        let t = (0.5 * w * params.length()).tan();
        if even {
            t - e.sqrt()
        } else {
            t + 1.0 / e.sqrt()
        }
    };
    let (mut a, mut b) = (lo, hi);
    let fa = f(a);
    assert!(fa * f(b) < 0.0, "oracle bracket does not change sign");
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if f(m) * fa > 0.0 {
            a = m;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}

#[test]
fn ideal_limit_residual_changes_sign_at_half_wavelength() {
    let p = metal(1e6);
    let below = characteristic(PI * (1.0 - 1e-3), Parity::Even, 1.0, &p).unwrap();
    let above = characteristic(PI * (1.0 + 1e-3), Parity::Even, 1.0, &p).unwrap();
    assert!(below < 0.0 && above > 0.0);
}

#[test]
fn residual_is_finite_where_tangent_diverges() {
    let p = metal(3.0);
    for parity in [Parity::Even, Parity::Odd] {
        let r = characteristic(PI, parity, 1.0, &p).unwrap();
        assert!(r.is_finite());
    }
}

#[test]
fn residual_brackets_lowest_metal_mode() {
    let p = metal(1.0);
    let lo = characteristic(0.37 * OMEGA_C, Parity::Even, 1.0, &p).unwrap();
    let hi = characteristic(0.38 * OMEGA_C, Parity::Even, 1.0, &p).unwrap();
    assert!(lo * hi < 0.0);
}

#[test]
fn residual_rejects_out_of_band() {
    let p = CavityParams::<f64>::new(4.0, 3.0, 1.0).unwrap();
    assert!(matches!(
        characteristic(2.0, Parity::Even, 1.0, &p),
        Err(Error::OutOfBand { .. })
    ));
    assert!(matches!(
        characteristic(5.5, Parity::Odd, 1.0, &p),
        Err(Error::OutOfBand { .. })
    ));
}

#[test]
fn near_ideal_mirror_frequencies() {
    let modes = solve_discrete(1.0, &metal(100.0), 1).unwrap();
    assert_eq!(modes.len(), 2);
    assert!((modes[0].omega / OMEGA_C - 0.5).abs() < 0.005);
    assert!((modes[1].omega / OMEGA_C - 1.0).abs() < 0.01);
}

#[test]
fn low_plasma_frequency_has_two_modes_matching_tan_oracle() {
    let p = metal(1.0);
    let modes = solve_discrete(1.0, &p, 10).unwrap();
    assert_eq!(modes.len(), 2);
    // Even root has ωL/2 in (0, π/2); odd root in (π/2, π).
    let even = tan_form_root(&p, true, 1e-6, PI - 1e-6);
    let odd = tan_form_root(&p, false, PI + 1e-6, OMEGA_C - 1e-9);
    assert_relative_eq!(modes[0].omega, even, max_relative = 1e-11);
    assert_relative_eq!(modes[1].omega, odd, max_relative = 1e-11);
    // Frozen from the same oracle.
    assert!((modes[0].omega / OMEGA_C - 0.376_967_009_393_275_7).abs() < 1e-10);
    assert!((modes[1].omega / OMEGA_C - 0.736_484_448_241_516_8).abs() < 1e-10);
}

#[test]
fn closed_band_yields_no_modes() {
    let p = CavityParams::<f64>::new(1e-9, 0.0, 1.0).unwrap();
    assert!(solve_discrete(1.0, &p, 5).unwrap().is_empty());
}

#[test]
fn truncation_and_labels() {
    let modes = solve_discrete(1.0, &metal(10.0), 6).unwrap();
    assert_eq!(modes.len(), 7);
    for (i, m) in modes.iter().enumerate() {
        assert_eq!(m.n, i);
        assert_eq!(m.order, i + 1);
        assert_eq!(m.parity, Parity::of(i));
        assert!(m.eps < 0.0 && m.alpha > 0.0);
        assert!(m.left_amplitude() > 0.0);
    }
    assert!(modes.windows(2).all(|w| w[0].omega < w[1].omega));
}

#[test]
fn resonant_matter_labels_start_above_zero() {
    // Ω L > π: the lowest bound mode already has one node.
    let p = CavityParams::<f64>::from_ratios(1.0, 0.7, 1.0).unwrap();
    let modes = solve_discrete(1.0, &p, 10).unwrap();
    assert!(!modes.is_empty());
    assert_eq!(modes[0].n, 1);
    for w in modes.windows(2) {
        assert_eq!(w[1].n, w[0].n + 1);
        assert_ne!(w[1].parity, w[0].parity);
    }
    let (lo, hi) = discrete_band(&p);
    assert!(modes.iter().all(|m| m.omega > lo && m.omega < hi));
}

#[test]
fn normalization_limits() {
    // κ → ∞: α² → 2/(ε₀L)
    let p = metal(1e7);
    let m = solve_discrete(1.0, &p, 0).unwrap()[0];
    assert_relative_eq!(m.alpha_sq(), 2.0, max_relative = 1e-6);
    // Ω = 0: α² = [ε₀(L/2 + 1/κ)]^{-1}
    let p = metal(2.0);
    for m in solve_discrete(1.0, &p, 5).unwrap() {
        assert_relative_eq!(m.alpha_sq(), 1.0 / (0.5 + 1.0 / m.kappa), max_relative = 1e-13);
    }
    assert!(normalization(20.0, 1.0, &metal(1.0)).is_err());
}

#[test]
fn normalization_agrees_with_quadrature_of_the_norm() {
    let p = metal(1.0);
    let m = solve_discrete(1.0, &p, 0).unwrap()[0];
    // Full quadrature with no closed-form pieces; the tails have decayed by
    // e^{-60} at the window edge.
    let window = 30.0 / m.kappa;
    let norm = overlap_windowed(&m, &m, window).unwrap();
    assert!((norm + 1.0).abs() < 1e-8, "{norm}");
}

#[test]
fn profile_center_values() {
    let modes = solve_discrete(1.0, &metal(4.0), 3).unwrap();
    assert_relative_eq!(mode_profile(&modes[0], 0.5).a, modes[0].alpha, max_relative = 1e-15);
    assert_eq!(mode_profile(&modes[1], 0.5).a, 0.0);
    assert_relative_eq!(
        mode_profile(&modes[2], 0.5).a.abs(),
        modes[2].alpha,
        max_relative = 1e-15
    );
    assert_eq!(mode_profile(&modes[3], 0.5).a, 0.0);
}

#[test]
fn profile_is_continuous_at_both_mirrors() {
    for (ratio, res) in [(1.0, 0.0), (10.0, 0.0), (3.0, 0.8)] {
        let p = CavityParams::<f64>::from_ratios(ratio, res, 1.0).unwrap();
        for m in solve_discrete(1.0, &p, 8).unwrap() {
            let scale = m.alpha * m.k.max(m.kappa);
            for z in [0.0, 1.0] {
                let inside = interior_reference(&m, z);
                let outside = mode_profile(&m, z);
                assert!(
                    (inside.0 - outside.a).abs() <= 1e-10 * m.alpha,
                    "A jump n={} z={z}",
                    m.n
                );
                assert!(
                    (inside.1 - outside.da).abs() <= 1e-10 * scale,
                    "A' jump n={} z={z}",
                    m.n
                );
            }
        }
    }
}

/// Interior cos/sin form continued to the mirror surface.
fn interior_reference(m: &DiscreteMode<f64>, z: f64) -> (f64, f64) {
    let amp = m.sign * m.alpha;
    let x = m.k * (z - 0.5 * m.length);
    match m.parity {
        Parity::Even => (amp * x.cos(), -amp * m.k * x.sin()),
        Parity::Odd => (amp * x.sin(), amp * m.k * x.cos()),
    }
}

#[test]
fn profile_solves_the_wave_equation() {
    let p = CavityParams::<f64>::from_ratios(2.0, 0.3, 1.0).unwrap();
    for m in solve_discrete(1.0, &p, 3).unwrap() {
        for i in 0..40 {
            let z = -0.7 + 2.4 * (i as f64 + 0.37) / 40.0;
            if z.abs() < 0.02 || (z - 1.0).abs() < 0.02 {
                continue;
            }
            let h = 1e-4;
            let a = |z| mode_profile(&m, z).a;
            let second = (a(z + h) - 2.0 * a(z) + a(z - h)) / (h * h);
            let eps = if (0.0..1.0).contains(&z) { 1.0 } else { m.eps };
            let residual = second + m.omega * m.omega * eps * a(z);
            let scale = m.omega * m.omega * (1.0 + eps.abs()) * m.alpha;
            assert!(residual.abs() < 1e-6 * scale, "n={} z={z}: {residual}", m.n);
        }
    }
}

#[test]
fn bound_modes_are_orthonormal() {
    for ratio in [1.0, 10.0] {
        let modes = solve_discrete(1.0, &metal(ratio), 5).unwrap();
        for a in &modes {
            for b in &modes {
                let target = if a.n == b.n { -1.0 } else { 0.0 };
                let got = overlap(a, b).unwrap();
                assert!((got - target).abs() < 1e-8, "({}, {}): {got}", a.n, b.n);
            }
        }
    }
}

#[test]
fn bound_modes_orthonormal_with_resonant_matter() {
    let p = CavityParams::<f64>::from_ratios(3.0, 0.4, 1.0).unwrap();
    let modes = solve_discrete(1.0, &p, 5).unwrap();
    for a in &modes {
        for b in &modes {
            let target = if a.n == b.n { -1.0 } else { 0.0 };
            assert!((overlap(a, b).unwrap() - target).abs() < 1e-8);
        }
    }
}

#[test]
fn bound_and_scattering_states_are_orthogonal() {
    for (ratio, res) in [(1.0, 0.0), (10.0, 0.0), (2.0, 0.5)] {
        let p = CavityParams::<f64>::from_ratios(ratio, res, 1.0).unwrap();
        let top = discrete_band(&p).1;
        let m = solve_discrete(1.0, &p, 0).unwrap()[0];
        for factor in [1.05, 1.7, 4.0, 23.0] {
            for branch in [Branch::One, Branch::Two] {
                let c = continuum_mode(factor * top, branch, 1.0, &p).unwrap();
                let got = overlap(&m, &c).unwrap();
                assert!(got.abs() < 1e-6, "ratio {ratio} k {} {branch:?}: {got}", c.k);
                assert!(overlap(&c, &m).unwrap().abs() < 1e-6);
            }
        }
    }
}

#[test]
fn continuum_normalization_limits() {
    let p = metal(1.0);
    for branch in [Branch::One, Branch::Two] {
        let c = continuum_mode(1e9, branch, 1.0, &p).unwrap();
        assert_relative_eq!(c.norm, PI.powf(-0.5), max_relative = 1e-9);
    }
    // kL/2 = 3π/2 puts cos(kL/2) = 0.
    let k = 3.0 * PI;
    let p = metal(1.2);
    let c = continuum_mode(k, Branch::One, 1.0, &p).unwrap();
    assert_relative_eq!(c.norm, (PI * c.eps.sqrt()).powf(-0.5), max_relative = 1e-12);
    assert!(matches!(
        continuum_mode(2.0, Branch::One, 1.0, &p),
        Err(Error::ForbiddenBand { .. })
    ));
}

#[test]
fn continuum_profile_is_smooth_at_mirrors() {
    let p = CavityParams::<f64>::from_ratios(1.0, 0.2, 1.0).unwrap();
    for branch in [Branch::One, Branch::Two] {
        let c = continuum_mode(9.3, branch, 1.0, &p).unwrap();
        for z in [0.0, 1.0] {
            let h = 1e-9;
            let (lo, hi) = (c.field(z - h), c.field(z + h));
            assert!((lo.a - hi.a).abs() < 1e-7);
            assert!((lo.da - hi.da).abs() < 1e-6);
        }
    }
}

/// The windowed self-overlap integrated over `k'` approaches `−1` as the
/// window grows: a numerical check of the delta normalization.
#[test]
fn continuum_modes_are_delta_normalized() {
    let p = metal(0.8);
    let k = 9.0;
    let errors: Vec<f64> = [40.0, 160.0]
        .iter()
        .map(|&window| {
            let half_width = 60.0 / window;
            let rule = GaussLegendre::<f64>::new(32);
            let a = continuum_mode(k, Branch::One, 1.0, &p).unwrap();
            let integral = rule.composite(
                &mut |kp| {
                    let b = continuum_mode(kp, Branch::One, 1.0, &p).unwrap();
                    overlap_windowed(&a, &b, window).unwrap()
                },
                k - half_width,
                k + half_width,
                8,
            );
            (integral + 1.0).abs()
        })
        .collect();
    assert!(errors.iter().all(|&e| e < 0.01), "{errors:?}");
}

#[test]
fn branches_do_not_mix() {
    let p = metal(0.8);
    let a = continuum_mode(9.0, Branch::One, 1.0, &p).unwrap();
    let window = 80.0;
    let rule = GaussLegendre::<f64>::new(32);
    let half_width = 60.0 / window;
    let cross = rule.composite(
        &mut |kp| {
            let b = continuum_mode(kp, Branch::Two, 1.0, &p).unwrap();
            overlap_windowed(&a, &b, window).unwrap()
        },
        9.0 - half_width,
        9.0 + half_width,
        8,
    );
    assert!(cross.abs() < 0.01, "{cross}");
}

#[test]
fn overlap_needs_a_bound_mode() {
    let p = metal(0.8);
    let a = continuum_mode(9.0, Branch::One, 1.0, &p).unwrap();
    assert!(overlap(&a, &a).is_err());
    let other = metal(0.9);
    let b = solve_discrete(1.0, &other, 0).unwrap()[0];
    let c = solve_discrete(1.0, &metal(0.8), 0).unwrap()[0];
    assert!(overlap(&b, &c).is_err());
}

#[test]
fn metal_mode_count_matches_interval_count() {
    for ratio in [0.3, 0.77, 1.3, 2.45, 7.1] {
        let p = metal(ratio);
        let count = solve_discrete(1.0, &p, 10_000).unwrap().len();
        let expected = (p.omega_p() / PI).ceil() as usize;
        assert_eq!(count, expected, "ratio {ratio}");
    }
}

#[test]
fn eigenvalues_increase_with_plasma_frequency() {
    let mut previous: Option<Vec<f64>> = None;
    for i in 0..30 {
        let ratio = 0.4 * 1.15f64.powi(i);
        let omegas: Vec<f64> = solve_discrete(1.0, &metal(ratio), 4)
            .unwrap()
            .iter()
            .map(|m| m.omega)
            .collect();
        if let Some(prev) = &previous {
            assert!(omegas.len() >= prev.len());
            for (a, b) in prev.iter().zip(&omegas) {
                assert!(b > a, "ratio {ratio}");
            }
        }
        previous = Some(omegas);
    }
}

#[test]
fn single_precision_solve_is_close() {
    let p32 = CavityParams::<f32>::from_ratios(1.0, 0.0, 1.0).unwrap();
    let m = solve_discrete(1.0f32, &p32, 3).unwrap();
    assert_eq!(m.len(), 2);
    assert!((m[0].omega / (2.0 * std::f32::consts::PI) - 0.37697).abs() < 1e-4);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn solved_modes_satisfy_invariants(ratio in 0.3f64..40.0, res in 0.0f64..1.5, length in 0.5f64..2.0) {
        let p = CavityParams::<f64>::from_ratios(ratio, res, 1.0).unwrap();
        let modes = solve_discrete(length, &p, 6).unwrap();
        let (lo, hi) = discrete_band(&p);
        for m in &modes {
            prop_assert!(m.omega > lo && m.omega < hi);
            prop_assert!(m.eps < 0.0 && m.alpha > 0.0);
            prop_assert_eq!(m.parity, Parity::of(m.n));
            let r = characteristic(m.omega, m.parity, length, &p).unwrap();
            prop_assert!(r.abs() <= 1e-8 * (m.k + m.kappa));
        }
        for w in modes.windows(2) {
            prop_assert!(w[0].omega < w[1].omega);
            prop_assert_eq!(w[1].n, w[0].n + 1);
        }
        if let Some(m) = modes.first() {
            prop_assert!((overlap(m, m).unwrap() + 1.0).abs() < 1e-8);
        }
    }

    #[test]
    fn doubling_plasma_frequency_never_loses_modes(ratio in 0.2f64..20.0) {
        let a = solve_discrete(1.0, &metal(ratio), 1000).unwrap().len();
        let b = solve_discrete(1.0, &metal(2.0 * ratio), 1000).unwrap().len();
        prop_assert!(b >= a);
    }
}

#[test]
fn unbounded_request_returns_every_mode() {
    let all = solve_discrete(1.0, &metal(10.0), usize::MAX).unwrap();
    assert_eq!(all.len(), 20);
}
