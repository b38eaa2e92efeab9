mod common;

use proptest::prelude::*;
use risd2d_core::channel::db_to_linear;
use risd2d_core::montecarlo::estimate_mean_sinr_stats;
use risd2d_core::quadrature::Quadrature;
use risd2d_core::sinr_approx::{
    mean_gamma_srd, mean_gamma_srd_verbatim, mean_var_gamma_v, sinr_hat_boxed, sinr_hat_from_stats,
    three_term,
};
use risd2d_core::stats::pdf_gamma_v;
use risd2d_core::optimizer::z_parallel;
use risd2d_core::{
    sinr_hat, Domain, Error, LinkStats, MomentMode, RefLossScope, SystemParams, Topology,
};

use common::{close, d4, reference_params, reference_topology, stats_at};

fn stats_n(n: usize, p_s: f64) -> LinkStats {
    let params = SystemParams {
        n_elements: n,
        ..reference_params()
    };
    stats_at(&params, d4(), p_s)
}

/// Operating profile with negligible interference (`d_bd = 300 m`).
fn far_bs_params(n: usize) -> SystemParams {
    SystemParams {
        n_elements: n,
        d_bd: 300.0,
        ..reference_params()
    }
}

#[test]
fn direct_only_mean() {
    let ls = stats_n(0, 3.0);
    assert_eq!(mean_gamma_srd(&ls), 3.0 * ls.beta_sd);
}

#[test]
fn mean_srd_matches_simulation() {
    let mut ls = stats_n(50, 10.0);
    ls.gamma_bar_b = 0.0;
    let mc = estimate_mean_sinr_stats(&ls, 1_000_000, 3).unwrap();
    let exact = mean_gamma_srd(&ls);
    let verbatim = mean_gamma_srd_verbatim(&ls);
    println!(
        "E[gamma_srd]: simulated {:.4} ± {:.4}, moment form {exact:.4}, verbatim form {verbatim:.4}",
        mc.value, mc.std_error
    );
    assert!((exact / mc.value - 1.0).abs() < 0.01);
}

#[test]
fn quadratic_growth_in_elements() {
    let base = mean_gamma_srd(&stats_n(0, 1.0));
    let g = |n: usize| mean_gamma_srd(&stats_n(n, 1.0)) - base;
    let ratio = g(2000) / g(1000);
    assert!((ratio - 4.0).abs() < 0.01 * 4.0, "ratio {ratio}");
}

#[test]
fn exact_moments_match_density_quadrature() {
    for m in [1usize, 2, 4, 8] {
        for a in [0.5, 12.0, 560.0] {
            let dom = Domain::HalfLine { start: 1.0, scale: a };
            let q = |tol: f64| Quadrature {
                tol,
                ..Quadrature::default()
            };
            let scale = 1.0 + a;
            let m1 = q(1e-10 * scale).integrate(|x| x * pdf_gamma_v(x, a, m), dom);
            let m2 = q(1e-10 * scale * scale).integrate(|x| x * x * pdf_gamma_v(x, a, m), dom);
            assert!(m1.converged && m2.converged);
            let (mean, var) = mean_var_gamma_v(a, m, MomentMode::ExactSum).unwrap();
            assert!(close(mean, m1.value, 1e-8, 0.0), "M={m} a={a}: {mean} vs {}", m1.value);
            let qvar = m2.value - m1.value * m1.value;
            assert!(close(var, qvar, 1e-6, 0.0), "M={m} a={a}: {var} vs {qvar}");
        }
    }
    let (mean, var) = mean_var_gamma_v(4.0, 1, MomentMode::ExactSum).unwrap();
    assert!((mean - 5.0).abs() < 1e-14 && (var - 16.0).abs() < 1e-12);
}

#[test]
fn gumbel_against_exact_moments() {
    let pi2_6 = std::f64::consts::PI.powi(2) / 6.0;
    for a in [0.1, 1.0, 30.0, 560.0] {
        let (em, ev) = mean_var_gamma_v(a, 64, MomentMode::ExactSum).unwrap();
        let (gm, gv) = mean_var_gamma_v(a, 64, MomentMode::Gumbel).unwrap();
        assert!(((gm - em) / em).abs() < 0.02);
        assert!(((ev - a * a * pi2_6) / (a * a * pi2_6)).abs() < 0.05);
        assert_eq!(gv, mean_var_gamma_v(a, 2, MomentMode::Gumbel).unwrap().1);
    }
    let mut prev = 0.0;
    for m in 1..=64 {
        let (_, v) = mean_var_gamma_v(1.0, m, MomentMode::ExactSum).unwrap();
        assert!(v > prev && v < pi2_6);
        prev = v;
    }
}

#[test]
fn exact_mode_refuses_beyond_64_antennas() {
    assert!(matches!(
        mean_var_gamma_v(1.0, 65, MomentMode::ExactSum),
        Err(Error::Conditioning(_))
    ));
    assert!(mean_var_gamma_v(1.0, 65, MomentMode::Auto).is_ok());
}

#[test]
fn boxed_form_equals_three_term_assembly() {
    let topo = reference_topology();
    let (lo, hi) = topo.feasible_interval().unwrap();
    for scope in [RefLossScope::AllLinks, RefLossScope::LongLinksOnly] {
        // The verbatim moment sums carry e^{M/α_bd}; keep α_bd away from zero
        // by raising P_b together with the reference loss.
        for (c, p_b_db, m) in [(1.0, 28.0, 1usize), (1e-3, 58.0, 2), (1.0, 28.0, 4)] {
            let params = SystemParams {
                ref_path_loss: c,
                p_b: db_to_linear(p_b_db),
                ref_loss_scope: scope,
                n_antennas: m,
                d_bd: 3.0,
                ..reference_params()
            };
            for i in 0..5 {
                let d = lo + (hi - lo) * i as f64 / 4.0;
                let ls = LinkStats::new(&params, &topo, d, 4.0).unwrap();
                let (mv, vv) = mean_var_gamma_v(ls.alpha_bd, m, MomentMode::PaperVerbatim).unwrap();
                let assembled = three_term(mean_gamma_srd_verbatim(&ls), mv, vv);
                let boxed = sinr_hat_boxed(d, 4.0, &topo, &params).unwrap();
                assert!(close(boxed, assembled, 1e-11, 0.0), "{boxed:e} vs {assembled:e}");
            }
        }
    }
}

#[test]
fn jensen_direction_on_sampled_configurations() {
    for (n, d_bd, p_s) in [(20, 1.1, 10.0), (50, 2.0, 3.0), (80, 3.5, 1.0), (50, 300.0, 10.0)] {
        let params = SystemParams {
            n_elements: n,
            d_bd,
            ..reference_params()
        };
        let ls = stats_at(&params, d4(), p_s);
        let s = sinr_hat_from_stats(&ls, MomentMode::ExactSum).unwrap();
        let at_means = s.mean_srd / s.mean_v;
        let mc = estimate_mean_sinr_stats(&ls, 100_000, 9).unwrap();
        assert!(mc.value >= at_means, "N={n} d_bd={d_bd}: {} < {at_means}", mc.value);
    }
}

/// Root of `Z_p(d) = z` on `[a, b]` by bisection.
fn solve_z(topo: &Topology, z: f64, mut a: f64, mut b: f64) -> f64 {
    let sign = (z_parallel(b, topo) - z).signum();
    for _ in 0..200 {
        let mid = 0.5 * (a + b);
        if (z_parallel(mid, topo) - z).signum() == sign {
            b = mid;
        } else {
            a = mid;
        }
    }
    0.5 * (a + b)
}

#[test]
fn surrogate_depends_on_placement_only_through_z() {
    let topo = Topology::parallel(5.0, 2.0, 2.0);
    let params = reference_params();
    // Z_p has a local minimum at d = 1 and a local maximum at d = 2.5, so
    // each level between them is hit once on either side of d = 1.
    for z in [101.0, 103.0, 105.0] {
        let left = solve_z(&topo, z, 0.0, 1.0);
        let right = solve_z(&topo, z, 1.0, 2.5);
        assert!((left - right).abs() > 0.1);
        let a = sinr_hat(left, 5.0, &topo, &params, MomentMode::Auto).unwrap().value;
        let b = sinr_hat(right, 5.0, &topo, &params, MomentMode::Auto).unwrap().value;
        assert!(close(a, b, 1e-9, 0.0), "Z={z}: {a} vs {b}");
        let m = sinr_hat(5.0 - left, 5.0, &topo, &params, MomentMode::Auto).unwrap().value;
        assert!(close(a, m, 1e-9, 0.0));
    }
}

#[test]
fn surrogate_tracks_simulation_at_large_arrays() {
    for n in [40, 80] {
        for gs_db in [0.0, 10.0, 20.0] {
            let params = far_bs_params(n);
            let ls = stats_at(&params, d4(), db_to_linear(gs_db));
            let hat = sinr_hat_from_stats(&ls, MomentMode::Auto).unwrap().value;
            let mc = estimate_mean_sinr_stats(&ls, 200_000, 13).unwrap();
            let rel = (hat - mc.value).abs() / mc.value;
            assert!(rel <= 0.05, "N={n} {gs_db} dB: surrogate {hat} simulated {}", mc.value);
        }
    }
}

#[test]
fn surrogate_error_in_interference_limited_regime() {
    let ls = stats_n(50, 10.0);
    let hat = sinr_hat_from_stats(&ls, MomentMode::Auto).unwrap().value;
    let mc = estimate_mean_sinr_stats(&ls, 200_000, 13).unwrap();
    println!(
        "alpha_bd = {:.1}: surrogate {hat:.5e} simulated {:.5e} (relative error {:.3})",
        ls.alpha_bd,
        mc.value,
        (hat - mc.value) / mc.value
    );
    // The second-order expansion of E[1/γ_v] undershoots for a heavy exponential tail.
    assert!(hat < mc.value);
}

#[test]
fn surrogate_strictly_increasing_in_power() {
    let topo = reference_topology();
    let params = reference_params();
    let mut prev = 0.0;
    for i in 0..20 {
        let p = db_to_linear(-10.0 + i as f64);
        let v = sinr_hat(d4(), p, &topo, &params, MomentMode::Auto).unwrap();
        assert!(v.value > prev && v.mean_v >= 1.0);
        prev = v.value;
    }
}

proptest! {
    #[test]
    fn surrogate_is_linear_in_power(p in 1e-3f64..100.0, c in 1e-3f64..1e3, frac in 0.0f64..=1.0, m in 1usize..=20) {
        let topo = reference_topology();
        let (lo, hi) = topo.feasible_interval().unwrap();
        let d = lo + frac * (hi - lo);
        let params = SystemParams { n_antennas: m, ..reference_params() };
        let a = sinr_hat(d, p, &topo, &params, MomentMode::Auto).unwrap().value;
        let b = sinr_hat(d, c * p, &topo, &params, MomentMode::Auto).unwrap().value;
        prop_assert!(close(b, c * a, 1e-12, 0.0));
    }
}
