use num_complex::Complex64;
use qw_core::analytic::{Branch, build_solution, omega};
use qw_core::genfun::{
    CONVERGENCE_SLACK, Chirality, Side, build_system, det_a_roots, system_residual,
    truncated_series, unit_circle_points,
};
use qw_core::{Error, stationary_amplitude};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn assert_close(got: Complex64, want: Complex64, tol: f64) {
    assert!(
        (got - want).norm() <= tol,
        "got {got}, want {want}, diff {}",
        (got - want).norm()
    );
}

fn default_alpha() -> Complex64 {
    c(std::f64::consts::FRAC_1_SQRT_2, 0.0)
}

#[test]
fn system_matrix_and_determinant_agree_with_the_quadratic() {
    // det A equals (lambda / (sqrt2 z)) (z^2 - sqrt2 (1/lambda - lambda) z - 1)
    // for every z, so the roots returned by det_a_roots must annihilate it.
    let sol = build_solution(0.37, Branch::MinusI, default_alpha()).unwrap();
    let w = omega(0.37);
    for k in 0..12 {
        let z = Complex64::from_polar(0.7 + 0.1 * k as f64, 0.5 * k as f64);
        let sys = build_system(z, sol.lambda, w, sol.alpha, sol.beta).unwrap();
        let quad = z * z - std::f64::consts::SQRT_2 * (1.0 / sol.lambda - sol.lambda) * z - 1.0;
        let expected = sol.lambda / (std::f64::consts::SQRT_2 * z) * quad;
        assert_close(sys.det_a(), expected, 1e-13);
    }
    let (r1, r2) = det_a_roots(sol.lambda).unwrap();
    for root in [r1, r2] {
        let sys = build_system(root, sol.lambda, w, sol.alpha, sol.beta).unwrap();
        assert!(
            sys.det_a().norm() <= 1e-13,
            "root {root} misses the determinant kernel"
        );
    }
}

#[test]
fn determinant_roots_multiply_to_minus_one_and_sort_by_modulus() {
    for (phi, branch) in [
        (0.1, Branch::PlusI),
        (0.37, Branch::MinusI),
        (0.61, Branch::PlusI),
        (0.88, Branch::MinusI),
    ] {
        let sol = build_solution(phi, branch, default_alpha()).unwrap();
        let (small, large) = det_a_roots(sol.lambda).unwrap();
        assert_close(small * large, c(-1.0, 0.0), 1e-12);
        assert!(small.norm() <= large.norm() + 1e-12);
    }
    assert!(det_a_roots(c(0.5, 0.0)).is_err());
}

#[test]
fn determinant_roots_reference_pair() {
    // lambda = i gives the exactly known pair -i (sqrt2 -+ 1).
    let (small, large) = det_a_roots(c(0.0, 1.0)).unwrap();
    assert_close(small, c(0.0, -0.4142135623730949), 1e-13);
    assert_close(large, c(0.0, -2.4142135623730954), 1e-13);
}

#[test]
fn marginal_phase_collapses_the_root_pair() {
    // At the plus-branch marginal phase the quadratic has a double root at
    // -i, which is exactly theta_s there. Double roots cost half the digits,
    // hence the loose tolerance.
    let sol = build_solution(0.25, Branch::PlusI, default_alpha()).unwrap();
    let (small, large) = det_a_roots(sol.lambda).unwrap();
    assert_close(small, c(0.0, -1.0), 1e-6);
    assert_close(large, c(0.0, -1.0), 1e-6);
    assert_close(small * large, c(-1.0, 0.0), 1e-12);
}

#[test]
fn spatial_ratio_is_a_determinant_root() {
    // Away from the marginal phases the closed-form theta_s must coincide
    // with one of the two determinant roots to near machine precision.
    for (phi, branch) in [
        (0.1, Branch::PlusI),
        (0.37, Branch::MinusI),
        (0.613, Branch::MinusI),
        (0.9, Branch::PlusI),
    ] {
        let sol = build_solution(phi, branch, default_alpha()).unwrap();
        let (r1, r2) = det_a_roots(sol.lambda).unwrap();
        let dist = (sol.theta_s - r1).norm().min((sol.theta_s - r2).norm());
        assert!(
            dist <= 1e-12,
            "theta_s off the root pair by {dist} at phi = {phi}"
        );
    }
}

#[test]
fn truncated_series_reproduces_the_geometric_sum() {
    // On the decaying branch at z inside the disk the left series is a pure
    // geometric sum alpha sum (-theta_s z)^x, comparable in closed form.
    let sol = build_solution(0.37, Branch::MinusI, default_alpha()).unwrap();
    let z = c(0.6, 0.3);
    let n = 60;
    let got = truncated_series(&sol, Side::Plus, Chirality::Left, z, n).unwrap();
    let r = -sol.theta_s * z;
    let closed = sol.alpha * (r - r.powu(n + 1)) / (1.0 - r);
    assert_close(got, closed, 1e-13);
}

#[test]
fn series_terms_match_the_site_amplitudes() {
    let sol = build_solution(0.613, Branch::MinusI, default_alpha()).unwrap();
    let z = Complex64::from_polar(1.0, 1.1);
    for side in [Side::Plus, Side::Minus] {
        let mut left = c(0.0, 0.0);
        let mut right = c(0.0, 0.0);
        for k in 1..=25i64 {
            let x = match side {
                Side::Plus => k,
                Side::Minus => -k,
            };
            let amp = stationary_amplitude(&sol, x);
            let zp = z.powi(x as i32);
            left += amp.left * zp;
            right += amp.right * zp;
        }
        let gl = truncated_series(&sol, side, Chirality::Left, z, 25).unwrap();
        let gr = truncated_series(&sol, side, Chirality::Right, z, 25).unwrap();
        assert_close(gl, left, 1e-12);
        assert_close(gr, right, 1e-12);
    }
}

#[test]
fn series_evaluation_refuses_divergent_points() {
    let sol = build_solution(0.37, Branch::MinusI, default_alpha()).unwrap();
    // |theta_s| ~ 0.414, so |z| = 3 puts the plus series ratio above 1.
    let err = truncated_series(&sol, Side::Plus, Chirality::Left, c(3.0, 0.0), 10).unwrap_err();
    match err {
        Error::DivergentSeries { ratio, bound } => {
            assert!(ratio >= bound);
            assert!((bound - (1.0 - CONVERGENCE_SLACK)).abs() < 1e-15);
        }
        other => panic!("unexpected error {other:?}"),
    }
    // The minus series diverges for small |z| instead.
    assert!(truncated_series(&sol, Side::Minus, Chirality::Left, c(0.1, 0.0), 10).is_err());
    assert!(truncated_series(&sol, Side::Plus, Chirality::Left, c(0.0, 0.0), 10).is_err());
}

#[test]
fn zero_term_residual_is_the_right_hand_side_norm() {
    let sol = build_solution(0.37, Branch::MinusI, default_alpha()).unwrap();
    let z = Complex64::from_polar(1.0, std::f64::consts::PI / 3.0);
    let sys = build_system(z, sol.lambda, omega(0.37), sol.alpha, sol.beta).unwrap();
    let (rp, rm) = system_residual(&sol, z, 0).unwrap();
    let norm = |v: [Complex64; 2]| v[0].norm().max(v[1].norm());
    assert!((rp - norm(sys.rhs_plus)).abs() <= 1e-15);
    assert!((rm - norm(sys.rhs_minus)).abs() <= 1e-15);
    assert!(
        rp > 0.1 && rm > 0.1,
        "baseline residuals should be order one"
    );
}

#[test]
fn residual_decays_geometrically_with_the_truncation_order() {
    // phi = 0.3 on the plus branch decays slowly enough (|theta_s| ~ 0.76)
    // that the 50-term truncation error sits far above rounding, making the
    // geometric shrinkage visible before the floating-point floor.
    let sol = build_solution(0.3, Branch::PlusI, default_alpha()).unwrap();
    let z = Complex64::from_polar(1.0, std::f64::consts::PI / 3.0);
    let (p50, m50) = system_residual(&sol, z, 50).unwrap();
    let (p120, m120) = system_residual(&sol, z, 120).unwrap();
    assert!(
        p50 < 1e-3 && m50 < 1e-3,
        "50-term residuals too large: {p50}, {m50}"
    );
    assert!(p120 < p50 * 1e-7, "plus residual {p120} vs {p50}");
    assert!(m120 < m50 * 1e-7, "minus residual {m120} vs {m50}");
}

#[test]
fn deep_truncations_bottom_out_at_rounding_level() {
    let sol = build_solution(0.25, Branch::MinusI, default_alpha()).unwrap();
    let z = Complex64::from_polar(1.0, std::f64::consts::PI / 3.0);
    let (rp, rm) = system_residual(&sol, z, 200).unwrap();
    assert!(rp <= 1e-14, "plus residual {rp}");
    assert!(rm <= 1e-14, "minus residual {rm}");
}

#[test]
fn long_truncations_verify_the_closed_form_on_the_unit_circle() {
    // 400 terms pushes the truncation error below 1e-9 for every decaying
    // solution whose ratio stays under ~0.94; the grid used here keeps a
    // full step of clearance from the marginal phases.
    for (phi, branch) in [
        (0.3, Branch::PlusI),
        (0.5, Branch::MinusI),
        (0.72, Branch::PlusI),
        (0.98, Branch::PlusI),
        (0.02, Branch::MinusI),
    ] {
        let sol = build_solution(phi, branch, default_alpha()).unwrap();
        assert_eq!(
            sol.decay_class,
            qw_core::DecayClass::Decaying,
            "phi = {phi}"
        );
        for z in unit_circle_points(&sol) {
            let (rp, rm) = system_residual(&sol, z, 400).unwrap();
            assert!(rp <= 1e-9, "plus residual {rp} at phi = {phi}, z = {z}");
            assert!(rm <= 1e-9, "minus residual {rm} at phi = {phi}, z = {z}");
        }
    }
}

#[test]
fn wrong_eigenvalue_leaves_an_order_one_residual() {
    // Negative control: flipping the sign of lambda (the companion root
    // belongs to the sign-flipped eigenvector) must break the system.
    let sol = build_solution(0.37, Branch::MinusI, default_alpha()).unwrap();
    let mut wrong = sol.clone();
    wrong.lambda = -wrong.lambda;
    let z = Complex64::from_polar(1.0, std::f64::consts::PI / 3.0);
    let (rp, _) = system_residual(&wrong, z, 400).unwrap();
    assert!(
        rp > 0.5,
        "sign-flipped eigenvalue still satisfied the system: {rp}"
    );
}

#[test]
fn evaluation_points_skip_pole_neighbourhoods() {
    let sol = build_solution(0.3, Branch::PlusI, default_alpha()).unwrap();
    let points = unit_circle_points(&sol);
    assert!(!points.is_empty() && points.len() <= 8);
    for z in &points {
        assert!((z.norm() - 1.0).abs() < 1e-15);
        assert!((1.0 + sol.theta_s * z).norm() >= 1e-3);
    }
}

#[test]
fn system_rejects_the_origin() {
    let sol = build_solution(0.3, Branch::PlusI, default_alpha()).unwrap();
    assert!(matches!(
        build_system(c(0.0, 0.0), sol.lambda, omega(0.3), sol.alpha, sol.beta),
        Err(Error::Domain(_))
    ));
}
