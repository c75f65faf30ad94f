use coxperc::coxeter::{build_ball, BallOptions};
use coxperc::fixtures;
use coxperc::growth::{ball_size_series, steinberg_inverse_growth};
use coxperc::nerve::build_nerve;
use coxperc::oracle::{count_walk_spectra, RootedGraph, SpectraOptions};
use coxperc::walks::{tree_path_counts, verify_cycle_decomposition};
use num_bigint::BigUint;

#[derive(Default)]
struct Brute {
    closed: Vec<u128>,
    nonbacktracking: Vec<u128>,
    self_avoiding: Vec<u128>,
}

/// Every walk of length `<= n_max` from the root, enumerated one by one.
fn brute_force(g: &RootedGraph, n_max: usize) -> Brute {
    let mut out = Brute {
        closed: vec![0; n_max + 1],
        nonbacktracking: vec![0; n_max + 1],
        self_avoiding: vec![0; n_max + 1],
    };
    let mut path = vec![0usize];
    walk(g, n_max, &mut path, &mut out);
    out
}

fn walk(g: &RootedGraph, n_max: usize, path: &mut Vec<usize>, out: &mut Brute) {
    let n = path.len() - 1;
    if *path.last().unwrap() == 0 {
        out.closed[n] += 1;
        let nb = path.windows(3).all(|w| w[0] != w[2]);
        if nb {
            out.nonbacktracking[n] += 1;
        }
        let inner = &path[1..n.max(1)];
        let mut sorted = inner.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        if n >= 3 && sorted.len() == inner.len() && !inner.contains(&0) {
            out.self_avoiding[n] += 1;
        }
    }
    if n == n_max {
        return;
    }
    let v = *path.last().unwrap();
    for &u in g.neighbors(v) {
        path.push(u as usize);
        walk(g, n_max, path, out);
        path.pop();
    }
}

fn check_against_brute_force(g: &RootedGraph, n_max: usize) {
    let s = count_walk_spectra(
        g,
        n_max,
        SpectraOptions {
            self_avoiding_max: n_max,
        },
    )
    .unwrap();
    let b = brute_force(g, n_max);
    assert_eq!(s.closed_walks, b.closed);
    // a*_0 counts the empty walk; the enumeration agrees from n = 1
    assert_eq!(s.nonbacktracking[1..], b.nonbacktracking[1..]);
    assert_eq!(s.nonbacktracking[0], 1);
    let sa: Vec<u128> = s.self_avoiding.iter().map(|x| x.unwrap()).collect();
    assert_eq!(sa, b.self_avoiding);
}

#[test]
fn spectra_match_enumeration_on_k5() {
    check_against_brute_force(&RootedGraph::complete(5), 8);
}

#[test]
fn spectra_match_enumeration_on_small_balls() {
    let ball = build_ball(&fixtures::dodecahedron(), 4, BallOptions::default()).unwrap();
    check_against_brute_force(&RootedGraph::from_ball(&ball), 6);
    let ball = build_ball(&fixtures::cube_three_thirds(), 5, BallOptions::default()).unwrap();
    check_against_brute_force(&RootedGraph::from_ball(&ball), 8);
    let ball = build_ball(&fixtures::lanner_535(), 5, BallOptions::default()).unwrap();
    check_against_brute_force(&RootedGraph::from_ball(&ball), 8);
    check_against_brute_force(&RootedGraph::regular_tree_ball(3, 5), 8);
}

#[test]
fn k5_closed_form() {
    // eigenvalues 4 and -1 (four times)
    let s = count_walk_spectra(&RootedGraph::complete(5), 12, SpectraOptions::default()).unwrap();
    for n in 0..=12u32 {
        let expected = (4i128.pow(n) + 4 * (-1i128).pow(n)) / 5;
        assert_eq!(s.closed_walks[n as usize] as i128, expected);
    }
    assert_eq!(s.self_avoiding[3..=5], [Some(12), Some(24), Some(24)]);
    assert_eq!(s.self_avoiding[6], Some(0));
}

#[test]
fn tree_closed_walks_are_kernel_values() {
    let d = verify_cycle_decomposition(&RootedGraph::regular_tree_ball(3, 6), 10).unwrap();
    assert!(d.holds);
    let kernel = tree_path_counts(3, 10).unwrap();
    for n in 0..=10 {
        assert_eq!(BigUint::from(d.spectra.closed_walks[n]), kernel.c(n, 0));
    }
}

const FROZEN: &[(&str, &[u64])] = &[
    ("dodecahedron", &[1, 12, 102, 812, 6402, 50412]),
    (
        "cube_three_thirds",
        &[1, 6, 21, 60, 157, 396, 984, 2430, 5987, 14736, 36255],
    ),
    ("lanner_535", &[1, 4, 9, 17, 30, 50, 80, 125, 193, 296, 450]),
    ("ultraparallel_13", &[1, 13, 156, 1872, 22464]),
];

#[test]
fn steinberg_series_matches_frozen_sphere_sizes() {
    for &(name, sizes) in FROZEN {
        let m = fixtures::load(name).unwrap();
        let ig = steinberg_inverse_growth(&m, &build_nerve(&m)).unwrap();
        let series = ball_size_series(&ig, sizes.len() - 1).unwrap();
        assert_eq!(series.sphere_sizes_u64().unwrap(), sizes, "{name}");
        let ball = build_ball(&m, sizes.len() - 1, BallOptions::default()).unwrap();
        let bfs: Vec<u64> = ball.sphere_sizes().iter().map(|&x| x as u64).collect();
        assert_eq!(bfs, sizes, "{name}");
    }
}

#[test]
fn steinberg_matches_bfs_on_every_fixture() {
    for name in fixtures::names() {
        let m = fixtures::load(name).unwrap();
        let ig = steinberg_inverse_growth(&m, &build_nerve(&m)).unwrap();
        let radius = 4;
        let series = ball_size_series(&ig, radius).unwrap();
        let ball = build_ball(&m, radius, BallOptions::default()).unwrap();
        let bfs: Vec<u64> = ball.sphere_sizes().iter().map(|&x| x as u64).collect();
        assert_eq!(series.sphere_sizes_u64().unwrap(), bfs, "{name}");
        assert_eq!(
            *series.ball_sizes_u64().unwrap().last().unwrap(),
            ball.len() as u64
        );
    }
}
