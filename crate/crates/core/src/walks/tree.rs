//! Walk counts on the `k`-regular tree and the cycle decomposition of
//! closed walks.

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use super::BoundError;
use crate::oracle::{count_walk_spectra, RootedGraph, SpectraOptions, WalkSpectra};

/// `c(n, d)`: walks of length `n` in the `k`-regular tree between two
/// vertices at distance `d`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeKernel {
    k: usize,
    n_max: usize,
    table: Vec<Vec<BigUint>>,
}

/// Dynamic program on the distance to the target: from distance `0` there
/// are `k` steps to distance `1`, from `m >= 1` one step down and `k - 1`
/// steps up.
pub fn tree_path_counts(k: usize, n_max: usize) -> Result<TreeKernel, BoundError> {
    if k < 2 {
        return Err(BoundError::DegreeTooSmall(k));
    }
    let up = BigUint::from(k - 1);
    let mut table: Vec<Vec<BigUint>> = vec![vec![BigUint::from(1u8)]];
    for n in 1..=n_max {
        let prev = &table[n - 1];
        let get = |d: usize| prev.get(d).cloned().unwrap_or_default();
        let mut row = Vec::with_capacity(n + 1);
        row.push(get(1) * BigUint::from(k));
        for d in 1..=n {
            row.push(get(d - 1) + &up * get(d + 1));
        }
        table.push(row);
    }
    Ok(TreeKernel { k, n_max, table })
}

impl TreeKernel {
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn c(&self, n: usize, d: usize) -> BigUint {
        self.table
            .get(n)
            .and_then(|row| row.get(d))
            .cloned()
            .unwrap_or_default()
    }

    /// `sum_{n <= n_max} c(n, d) z^n`.
    pub fn partial_sum(&self, d: usize, z: f64) -> f64 {
        (d..=self.n_max)
            .map(|n| self.c(n, d).to_f64().unwrap_or(f64::INFINITY) * z.powi(n as i32))
            .sum()
    }

    /// `(c(n, 0) / c(n - 2, 0))^(1/2)` for the largest even `n`, which
    /// tends to the cogrowth `2 sqrt(k-1)` of the tree.
    pub fn return_ratio_root(&self) -> Option<f64> {
        let n = self.n_max - self.n_max % 2;
        if n < 2 {
            return None;
        }
        let (a, b) = (self.c(n, 0), self.c(n - 2, 0));
        let shift = a.bits().saturating_sub(60);
        let ratio = (a >> shift).to_f64()? / (b >> shift).to_f64()?;
        Some(ratio.sqrt())
    }
}

fn domain_radius(k: usize) -> f64 {
    1.0 / (2.0 * (k as f64 - 1.0).sqrt())
}

fn check_domain(k: usize, z: f64) -> Result<f64, BoundError> {
    if k < 2 {
        return Err(BoundError::DegreeTooSmall(k));
    }
    let radius = domain_radius(k);
    if z.is_nan() || z.abs() > radius {
        return Err(BoundError::OutsideDomain { z, radius });
    }
    Ok(radius)
}

/// `f(z) = (1 - sqrt(1 - 4(k-1) z^2)) / (2(k-1) z)`, the generating
/// function of first passage one step closer. Evaluated as
/// `2z / (1 + sqrt(1 - 4(k-1) z^2))`, which has no cancellation anywhere on
/// the domain.
pub fn f_map(z: f64, k: usize) -> Result<f64, BoundError> {
    let radius = check_domain(k, z)?;
    let km1 = k as f64 - 1.0;
    if z.abs() == radius {
        return Ok(z.signum() / km1.sqrt());
    }
    let root = (1.0 - 4.0 * km1 * z * z).max(0.0).sqrt();
    Ok(2.0 * z / (1.0 + root))
}

/// `sum_n c(n, d) z^n = A(z) f(z)^d` with
/// `A(z) = 2(k-1) / (k - 2 + k sqrt(1 - 4(k-1) z^2))`.
pub fn tree_green(k: usize, d: usize, z: f64) -> Result<f64, BoundError> {
    check_domain(k, z)?;
    let km1 = k as f64 - 1.0;
    let root = (1.0 - 4.0 * km1 * z * z).max(0.0).sqrt();
    let a = 2.0 * km1 / (k as f64 - 2.0 + k as f64 * root);
    Ok(a * f_map(z, k)?.powi(d as i32))
}

fn biguint_string<S: Serializer>(v: &BigUint, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CycleDecompositionRow {
    pub n: usize,
    pub closed_walks: u128,
    #[serde(serialize_with = "biguint_string")]
    pub decomposition: BigUint,
    pub equal: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CycleDecomposition {
    pub k: usize,
    pub holds: bool,
    pub rows: Vec<CycleDecompositionRow>,
    pub spectra: WalkSpectra,
}

/// Check `C_n = sum_d a*_d c(n, d)` exactly for `n <= n_max`.
pub fn verify_cycle_decomposition(
    graph: &RootedGraph,
    n_max: usize,
) -> Result<CycleDecomposition, BoundError> {
    let spectra = count_walk_spectra(
        graph,
        n_max,
        SpectraOptions {
            self_avoiding_max: 0,
        },
    )?;
    decompose_spectra(spectra)
}

/// Check the decomposition on already computed spectra.
pub fn decompose_spectra(spectra: WalkSpectra) -> Result<CycleDecomposition, BoundError> {
    let k = spectra.degree;
    let kernel = tree_path_counts(k, spectra.n_max)?;
    let rows: Vec<_> = (0..=spectra.n_max)
        .map(|n| {
            let decomposition = (0..=n).fold(BigUint::zero(), |acc, d| {
                acc + BigUint::from(spectra.nonbacktracking[d]) * kernel.c(n, d)
            });
            let closed_walks = spectra.closed_walks[n];
            CycleDecompositionRow {
                n,
                closed_walks,
                equal: decomposition == BigUint::from(closed_walks),
                decomposition,
            }
        })
        .collect();
    Ok(CycleDecomposition {
        k,
        holds: rows.iter().all(|r| r.equal),
        rows,
        spectra,
    })
}
