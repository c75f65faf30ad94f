use coxperc::cert::{general_margin, pipeline_bounds, strictly_below, Estimator};
use coxperc::coxeter::{build_ball, BallOptions};
use coxperc::fixtures;
use coxperc::growth::{
    bracket_inequality_holds, growth_rate, spherical_growth_polynomial, steinberg_inverse_growth,
    IntPolynomial,
};
use coxperc::nerve::build_nerve;
use coxperc::oracle::{linear_grid, percolation_sweep, PercolationMode, SweepOptions};
use coxperc::walks::{f_map, gamma_star_bound, RhoLemma};
use proptest::prelude::*;

proptest! {
    #[test]
    fn bracket_inequality(b in 1usize..=12, a_off in 0usize..=12, d_frac in 0.0f64..1.0, t in 0.0f64..10.0) {
        let a = 1 + a_off % (b + 1);
        let d = ((a as f64) * d_frac) as usize;
        prop_assert!(bracket_inequality_holds(a, b, d, t).unwrap());
    }

    #[test]
    fn gamma_star_solves_its_equation(k in 3usize..200, excess in 0.0f64..50.0) {
        let rho = 2.0 * ((k - 1) as f64).sqrt() + excess;
        let g = gamma_star_bound(rho, k).unwrap().value;
        let back = g + (k as f64 - 1.0) / g;
        prop_assert!((back - rho).abs() <= 1e-12 * rho);
        prop_assert!(g >= ((k - 1) as f64).sqrt() - 1e-12);
    }

    #[test]
    fn bracket_products_are_palindromic(ns in proptest::collection::vec(1usize..12, 0..5)) {
        prop_assert!(IntPolynomial::bracket_product(&ns).is_palindromic());
    }

    #[test]
    fn f_map_is_increasing(k in 3usize..40, x in 0.0f64..1.0, y in 0.0f64..1.0) {
        let r = 1.0 / (2.0 * ((k - 1) as f64).sqrt());
        let (lo, hi) = if x < y { (x, y) } else { (y, x) };
        let (a, b) = (f_map(lo * r, k).unwrap(), f_map(hi * r, k).unwrap());
        prop_assert!(a <= b);
        prop_assert!(b <= 1.0 / ((k - 1) as f64).sqrt() + 1e-15);
    }

    #[test]
    fn percolation_is_reproducible(seed in any::<u64>()) {
        let ball = build_ball(&fixtures::cube_three_thirds(), 3, BallOptions::default()).unwrap();
        let grid = linear_grid(0.0, 1.0, 6).unwrap();
        let opts = SweepOptions { samples: 8, mode: PercolationMode::Bond, seed, workers: 1 };
        let a = percolation_sweep(&ball, &grid, opts).unwrap();
        let b = percolation_sweep(&ball, &grid, SweepOptions { workers: 3, ..opts }).unwrap();
        prop_assert_eq!(&a, &b);
        prop_assert!(a.points.windows(2).all(|w| w[0].theta_hat <= w[1].theta_hat));
    }
}

#[test]
fn spherical_polynomials_are_palindromic() {
    for name in fixtures::names() {
        let m = fixtures::load(name).unwrap();
        let nerve = build_nerve(&m);
        for simplex in nerve.all_simplices() {
            let p = spherical_growth_polynomial(&m, simplex).unwrap();
            assert!(p.is_palindromic(), "{name} {simplex:?}");
        }
    }
}

#[test]
fn growth_root_is_bracketed() {
    for name in fixtures::names() {
        let m = fixtures::load(name).unwrap();
        let ig = steinberg_inverse_growth(&m, &build_nerve(&m)).unwrap();
        let r = growth_rate(&ig).unwrap();
        let (lo, hi) = r.bracket;
        assert!(
            lo <= r.t_star && r.t_star <= hi && hi - lo <= 1e-12,
            "{name}"
        );
        assert!(
            ig.eval(lo) * ig.eval(hi) <= 0.0 || ig.eval(r.t_star).abs() < 1e-12,
            "{name}"
        );
        let below = lo * 0.999;
        assert!(ig.eval(below) > 0.0, "{name}");
    }
}

#[test]
fn ball_sizes_strictly_increase() {
    for name in fixtures::names() {
        let m = fixtures::load(name).unwrap();
        let ball = build_ball(&m, 4, BallOptions::default()).unwrap();
        assert!(ball.ball_sizes().windows(2).all(|w| w[0] < w[1]), "{name}");
    }
}

#[test]
fn general_margins_increase() {
    let margins: Vec<f64> = (13..=60).map(|k| general_margin(k).unwrap()).collect();
    assert!(margins.iter().all(|&m| m > 0.0));
    assert!(margins.windows(2).all(|w| w[1] > w[0]));
}

#[test]
fn transform_never_hurts() {
    for lemma in RhoLemma::ALL {
        for k in lemma.min_rank().max(6)..=200 {
            let (rho, b2) = pipeline_bounds(k, lemma, Estimator::Rho).unwrap();
            let (gamma, b2_again) = pipeline_bounds(k, lemma, Estimator::GammaStar).unwrap();
            assert_eq!(b2, b2_again);
            assert!(gamma <= rho);
            if strictly_below(rho, b2) {
                assert!(strictly_below(gamma, b2));
            }
        }
    }
}
