use std::f64::consts::PI;

use proptest::prelude::*;
use risd2d_core::quadrature::{integrate, Domain, Quadrature};
use risd2d_core::stats::{pdf_gamma_v, q_exact};

#[test]
fn integral_of_q_over_half_line() {
    let r = integrate(q_exact, Domain::half_line(0.0), 1e-12);
    assert!(r.converged);
    assert!((r.value - 1.0 / (2.0 * PI).sqrt()).abs() < 1e-8);
}

#[test]
fn integral_of_q_matches_riemann_sum() {
    // Midpoint rule on [0, 12] with 2·10⁶ cells; the tail beyond 12 is < 1e-33.
    let n = 2_000_000;
    let h = 12.0 / n as f64;
    let riemann: f64 = (0..n).map(|i| q_exact((i as f64 + 0.5) * h) * h).sum();
    let r = integrate(q_exact, Domain::half_line(0.0), 1e-12);
    assert!((r.value - riemann).abs() < 1e-9);
}

#[test]
fn gamma_v_density_normalizes() {
    for m in [1usize, 2, 4, 8, 16] {
        for alpha in [0.01, 1.0, 37.0, 560.0] {
            let r = integrate(
                |x| pdf_gamma_v(x, alpha, m),
                Domain::HalfLine {
                    start: 1.0,
                    scale: alpha,
                },
                1e-10,
            );
            assert!(r.converged, "M={m} alpha={alpha}");
            assert!((r.value - 1.0).abs() < 1e-8, "M={m} alpha={alpha}: {}", r.value);
        }
    }
}

#[test]
fn converged_results_respect_tolerance() {
    let r = integrate(|x| x.sin().powi(2) * (-x).exp(), Domain::half_line(0.0), 1e-11);
    assert!(r.converged && r.abs_error_estimate <= 1e-11);
    assert!((r.value - 0.4).abs() < 1e-10);
}

#[test]
fn evaluation_budget_is_respected() {
    let q = Quadrature {
        tol: 1e-15,
        max_evals: 1_000,
        initial_intervals: 1,
    };
    let r = q.integrate(|x| (1.0 / x).sin(), Domain::Finite(1e-8, 1.0));
    assert!(r.evaluations <= 1_000);
    assert!(!r.converged);
}

proptest! {
    #[test]
    fn refinement_never_worsens_error(a in 0.1f64..5.0, b in 0.1f64..3.0, c in -2.0f64..2.0) {
        let f = |x: f64| (-(a * x)).exp() * (b * x + c).cos();
        let domain = Domain::HalfLine { start: 0.0, scale: 1.0 / a };
        let coarse = integrate(f, domain, 1e-6);
        let fine = integrate(f, domain, 1e-7);
        prop_assert!(coarse.converged && fine.converged);
        prop_assert!(fine.abs_error_estimate <= coarse.abs_error_estimate);
        prop_assert!((fine.value - coarse.value).abs() <= coarse.abs_error_estimate);
    }

    /// Oscillatory integrands are out of scope, so the true error is checked
    /// with at most one period per decay length.
    #[test]
    fn converged_error_holds_against_exact_value(a in 0.1f64..5.0, b in 0.1f64..3.0, c in -2.0f64..2.0) {
        prop_assume!(b <= 2.0 * PI * a);
        let f = |x: f64| (-(a * x)).exp() * (b * x + c).cos();
        let domain = Domain::HalfLine { start: 0.0, scale: 1.0 / a };
        let exact = (a * c.cos() - b * c.sin()) / (a * a + b * b);
        for tol in [1e-6, 1e-7] {
            let r = integrate(f, domain, tol);
            prop_assert!(r.converged);
            prop_assert!((r.value - exact).abs() <= tol, "tol {:e}: error {:e}", tol, r.value - exact);
        }
    }
}
