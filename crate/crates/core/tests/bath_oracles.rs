use std::f64::consts::FRAC_PI_2;

use fermi_persist::bath::{
    bath_functions, gamma_integrand, gamma_quadrature, gamma_series, BathCache, BathParams, Beta,
    QUADRATURE_MAX_WCT,
};
use fermi_persist::dephasing::{asymptotic_state, evolve};
use fermi_persist::quadrature::{integrate_partitioned, QuadConfig};
use fermi_persist::{delta_of_t, density_from_pure, gamma_of_t, make_state, theta_of_t};
use nalgebra::Complex;

fn params(j0: f64, beta: Beta<f64>) -> BathParams<f64> {
    BathParams::new(j0, 1.0, beta).unwrap()
}

const BETAS: [Beta<f64>; 4] = [Beta::Finite(0.1), Beta::Finite(1.0), Beta::Finite(10.0), Beta::ZeroTemperature];

/// `∫₀^∞ e^{−x} sin(xτ)/x dx` by brute-force quadrature on fine panels.
fn delta_by_quadrature(tau: f64) -> f64 {
    let upper = 50.0 + 10.0 * tau.max(1.0);
    let panels = ((60.0 * tau / std::f64::consts::TAU).ceil() as usize).clamp(8, 20_000);
    let mut pts: Vec<f64> = (0..=panels).map(|i| 60.0 * i as f64 / panels as f64).collect();
    pts.push(upper);
    let f = |x: f64| if x == 0.0 { tau } else { (-x).exp() * (x * tau).sin() / x };
    let cfg = QuadConfig { rel_tol: 1e-12, abs_tol: 1e-14, max_intervals: 100_000 };
    integrate_partitioned(f, &pts, &cfg).unwrap().value
}

#[test]
fn zero_temperature_gamma_matches_log() {
    for j0 in [1.0, 8.0] {
        let p = params(j0, Beta::ZeroTemperature);
        for t in [0.1f64, 1.0, 10.0, 100.0, 350.0] {
            let exact = j0 / 8.0 * (t * t).ln_1p();
            let got = gamma_of_t(t, &p).unwrap();
            assert!(((got - exact) / exact).abs() <= 1e-9, "t={t}: {got} vs {exact}");
        }
    }
}

#[test]
fn delta_quadrature_matches_arctan() {
    let p = params(8.0, Beta::Finite(1.0));
    for t in [0.0, 0.3, 1.0, 7.5, 30.0, 1e3] {
        let q = delta_by_quadrature(t);
        let d = delta_of_t(t, &p).unwrap();
        assert!((q - d).abs() <= 1e-8, "t={t}: {q} vs {d}");
    }
    assert!((delta_of_t(1e3, &p).unwrap() - FRAC_PI_2).abs() < 1.1e-3);
    assert!((delta_of_t(1.0, &p).unwrap() - std::f64::consts::FRAC_PI_4).abs() < 1e-15);
}

#[test]
fn theta_is_linear() {
    for omega_c in [0.5, 1.0, 2.0] {
        let p = BathParams::new(8.0, omega_c, Beta::Finite(1.0)).unwrap();
        for t in [0.0, 1.0, 3.0, 5.0] {
            assert_eq!(theta_of_t(t, &p).unwrap(), omega_c * t);
        }
    }
}

#[test]
fn quadrature_and_series_agree() {
    for beta in BETAS {
        let p = params(8.0, beta);
        for t in [0.05, 0.5, 2.0, 10.0, 30.0, 120.0, 400.0] {
            let q = gamma_quadrature(t, &p).unwrap();
            let s = gamma_series(t, &p);
            assert!(((q - s) / s).abs() < 1e-9, "beta={beta:?} t={t}: {q} vs {s}");
        }
    }
}

#[test]
fn quadrature_still_agrees_past_the_switch() {
    let p = params(8.0, Beta::Finite(1.0));
    let t = 1000.0;
    let q = gamma_quadrature(t, &p).unwrap();
    let s = gamma_of_t(t, &p).unwrap();
    assert!(((q - s) / s).abs() < 1e-9, "{q} vs {s}");
}

#[test]
fn series_matches_brute_force_sum() {
    // Σ_k ln(1 + τ²/(1+kβ)²) summed term by term up to k = 2·10⁷, far
    // deeper than the series routine goes, plus a crude integral remainder.
    for (beta, tau) in [(10.0, 50.0), (1.0, 500.0), (0.1, 20.0), (10.0, 1e4)] {
        let n = 20_000_000usize;
        let mut direct = 0.0f64;
        for k in (1..=n).rev() {
            let u = 1.0 + k as f64 * beta;
            direct += (tau * tau / (u * u)).ln_1p();
        }
        // ∫_{n+1/2}^∞ of the summand.
        let a = 1.0 + (n as f64 + 0.5) * beta;
        direct += (2.0 * tau * (tau / a).atan() - a * (tau * tau / (a * a)).ln_1p()) / beta;
        // J₀/8 = 1.
        let brute = (tau * tau).ln_1p() + 2.0 * direct;
        let s = gamma_series(tau, &params(8.0, Beta::Finite(beta)));
        assert!(((s - brute) / brute).abs() < 1e-11, "beta={beta} tau={tau}: {s} vs {brute}");
    }
}

#[test]
fn gamma_is_monotone_on_a_log_grid() {
    let grid: Vec<f64> = (0..100).map(|i| 10f64.powf(-2.0 + 5.0 * i as f64 / 99.0)).collect();
    assert!(grid.iter().any(|&t| t > QUADRATURE_MAX_WCT));
    for beta in BETAS {
        let p = params(8.0, beta);
        let g: Vec<f64> = grid.iter().map(|&t| gamma_of_t(t, &p).unwrap()).collect();
        for w in g.windows(2) {
            assert!(w[1] >= w[0], "beta={beta:?}: {} then {}", w[0], w[1]);
        }
    }
}

#[test]
fn integrand_is_finite_near_zero() {
    for beta in BETAS {
        for x in [0.0, 1e-300, 1e-12, 1e-3] {
            let v = gamma_integrand(x, 30.0, beta);
            assert!(v.is_finite() && v >= 0.0);
        }
    }
}

#[test]
fn long_time_limit_matches_asymptotic_state() {
    let c = |re: f64, im: f64| Complex::new(re, im);
    let states = [
        [c(0.1, 0.2), c(-0.3, 0.1), c(0.4, -0.2), c(0.2, 0.2), c(0.0, -0.5), c(0.3, 0.1)],
        [c(0.5, 0.0), c(0.1, 0.1), c(0.6, 0.0), c(0.2, -0.3), c(0.1, 0.0), c(0.0, 0.4)],
    ];
    let p = params(8.0, Beta::Finite(1.0));
    for amps in states {
        let rho = density_from_pure(&make_state(&amps).unwrap());
        let late = evolve(&rho, 1e6, &p).unwrap();
        let limit = asymptotic_state(&rho);
        let diff = (late.matrix() - limit.matrix()).iter().map(|z| z.norm()).fold(0.0, f64::max);
        assert!(diff <= 1e-8, "{diff}");
    }
}

#[test]
fn cache_is_consistent_under_threads() {
    use rayon::prelude::*;
    let p = params(8.0, Beta::Finite(10.0));
    let cache = BathCache::new(p).unwrap();
    let times: Vec<f64> = (0..64).map(|i| (i % 16) as f64 * 0.5).collect();
    let got: Vec<_> = times.par_iter().map(|&t| cache.get(t).unwrap()).collect();
    for (t, g) in times.iter().zip(got) {
        assert_eq!(g, bath_functions(*t, &p).unwrap());
    }
    assert_eq!(cache.len(), 16);
}
