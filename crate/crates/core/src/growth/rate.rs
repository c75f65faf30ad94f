//! Growth rate as the inverse of the least positive root of `1/W`, and the
//! comparison with the right-angled reference series.

use num_rational::BigRational;
use num_traits::Signed;
use serde::Serialize;

use super::{GrowthError, IntPolynomial, InverseGrowth};

const SCAN_POINTS: usize = 10_000;
const SCAN_MIN: f64 = 1e-6;
const ROOT_TOLERANCE: f64 = 1e-12;
const TIE_THRESHOLD: f64 = 1e-14;
const MARGIN_SLACK: f64 = 1e-12;

/// Number of uniform grid points `i/n` used by the lower bound check.
pub const DEFAULT_LOWER_BOUND_GRID: usize = 1000;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GrowthRateResult {
    pub t_star: f64,
    pub growth_rate: f64,
    pub bracket: (f64, f64),
    pub method: String,
}

fn scan_grid() -> Vec<f64> {
    let ratio = (1.0 / SCAN_MIN).ln() / (SCAN_POINTS - 1) as f64;
    let mut grid: Vec<f64> = (0..SCAN_POINTS)
        .map(|i| SCAN_MIN * (ratio * i as f64).exp())
        .collect();
    grid[SCAN_POINTS - 1] = 1.0;
    grid
}

fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> (f64, f64) {
    let positive_at_lo = f(lo) > 0.0;
    while hi - lo > ROOT_TOLERANCE {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if (f(mid) > 0.0) == positive_at_lo {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    (lo, hi)
}

/// Least positive root of a function positive at `0+`, by sign scan on a
/// geometric grid of `[1e-6, 1]` followed by bisection.
fn least_root(f: impl Fn(f64) -> f64) -> Result<GrowthRateResult, GrowthError> {
    let grid = scan_grid();
    let values: Vec<f64> = grid.iter().map(|&t| f(t)).collect();
    if values[0] <= 0.0 {
        return Err(GrowthError::RootBelowGrid(grid[0]));
    }
    for i in 1..grid.len() {
        let v = values[i];
        if v.abs() < TIE_THRESHOLD {
            let lo = grid[i - 1];
            let hi = grid
                .get(i + 1)
                .copied()
                .unwrap_or(grid[i] * grid[i] / grid[i - 1]);
            if f(hi) < 0.0 {
                let (a, b) = bisect(&f, lo, hi);
                return Ok(finish(a, b, "sign scan, near-zero grid value, bisection"));
            }
            return Ok(finish(grid[i], grid[i], "tangential zero on the scan grid"));
        }
        if v < 0.0 {
            let (a, b) = bisect(&f, grid[i - 1], grid[i]);
            return Ok(finish(a, b, "sign scan, bisection"));
        }
    }
    Err(GrowthError::NoRootAtMostOne)
}

fn finish(a: f64, b: f64, method: &str) -> GrowthRateResult {
    let t_star = 0.5 * (a + b);
    GrowthRateResult {
        t_star,
        growth_rate: 1.0 / t_star,
        bracket: (a, b),
        method: method.to_owned(),
    }
}

pub fn growth_rate(ig: &InverseGrowth) -> Result<GrowthRateResult, GrowthError> {
    least_root(|t| ig.eval(t))
}

/// `1/W` of the reference right-angled series in rank `k`:
/// `(t-1)/(t+1)^3 (-t^2 + (k-4)t - 1)`.
pub fn ra_reference_inverse(k: usize, t: f64) -> Result<f64, GrowthError> {
    if k < 6 {
        return Err(GrowthError::RankTooSmall { k, required: 6 });
    }
    let kf = k as f64;
    Ok((t - 1.0) / (t + 1.0).powi(3) * (-t * t + (kf - 4.0) * t - 1.0))
}

/// `(k - 4 + sqrt((k-4)^2 - 4)) / 2`.
pub fn ra_reference_growth_rate(k: usize) -> Result<f64, GrowthError> {
    if k < 6 {
        return Err(GrowthError::RankTooSmall { k, required: 6 });
    }
    let a = k as f64 - 4.0;
    Ok((a + (a * a - 4.0).sqrt()) / 2.0)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum LowerBoundVerdict {
    /// `1/W <= 1/W^rb` checked on the grid; `worst_margin` is the minimum
    /// of `1/W^rb - 1/W`.
    Checked {
        holds: bool,
        points: usize,
        worst_margin: f64,
        worst_t: f64,
        violations: usize,
    },
    /// The nerve is too small for the comparison; the tree bound
    /// `gr >= k - 4` applies instead.
    TreeBoundApplies { reason: String },
}

/// Compare `1/W` with the reference on `t = i/grid`, `i = 1..=grid`.
pub fn growth_lower_bound_check(
    ig: &InverseGrowth,
    k: usize,
    grid: usize,
) -> Result<LowerBoundVerdict, GrowthError> {
    if k < 6 {
        return Err(GrowthError::RankTooSmall { k, required: 6 });
    }
    let faces = ig.face_counts();
    let f1 = faces.get(2).copied().unwrap_or(0);
    let f2 = faces.get(3).copied().unwrap_or(0);
    let degenerate = match (f1, f2) {
        (0, _) => Some("no edges"),
        (1, _) => Some("a single edge"),
        (3, 1) => Some("a single triangle"),
        _ => None,
    };
    if let Some(reason) = degenerate {
        return Ok(LowerBoundVerdict::TreeBoundApplies {
            reason: reason.to_owned(),
        });
    }
    let mut worst_margin = f64::INFINITY;
    let mut worst_t = 0.0;
    let mut violations = 0;
    for i in 1..=grid {
        let t = i as f64 / grid as f64;
        let margin = ra_reference_inverse(k, t)? - ig.eval(t);
        if margin < -MARGIN_SLACK {
            violations += 1;
        }
        if margin < worst_margin {
            worst_margin = margin;
            worst_t = t;
        }
    }
    Ok(LowerBoundVerdict::Checked {
        holds: violations == 0,
        points: grid,
        worst_margin,
        worst_t,
        violations,
    })
}

/// Exact test of `[a-d][b+d](t) <= [a][b](t)` at the rational value of `t`.
pub fn bracket_inequality_holds(a: usize, b: usize, d: usize, t: f64) -> Result<bool, GrowthError> {
    let t_exact = BigRational::from_float(t).filter(|_| t >= 0.0);
    let Some(t_exact) = t_exact.filter(|_| a <= b + 1 && d <= a) else {
        return Err(GrowthError::BracketPrecondition { a, b, d, t });
    };
    let lhs = &IntPolynomial::bracket(a - d) * &IntPolynomial::bracket(b + d);
    let rhs = &IntPolynomial::bracket(a) * &IntPolynomial::bracket(b);
    let diff = (&rhs - &lhs).eval_rational(&t_exact);
    Ok(!diff.is_negative())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coxeter::{ClassFlags, CoxeterMatrix, Order};
    use crate::fixtures;
    use crate::growth::steinberg_inverse_growth;
    use crate::nerve::build_nerve;

    fn inverse(m: &CoxeterMatrix) -> InverseGrowth {
        steinberg_inverse_growth(m, &build_nerve(m)).unwrap()
    }

    #[test]
    fn dodecahedron_rate() {
        let r = growth_rate(&inverse(&fixtures::dodecahedron())).unwrap();
        assert!((r.t_star - (4.0 - 15f64.sqrt())).abs() < 1e-12);
        assert!((r.growth_rate - (4.0 + 15f64.sqrt())).abs() < 1e-9);
        assert!(r.bracket.1 - r.bracket.0 <= 1e-12);
    }

    #[test]
    fn free_product_rate() {
        let r = growth_rate(&inverse(&fixtures::ultraparallel_13())).unwrap();
        assert!((r.growth_rate - 12.0).abs() < 1e-9);
    }

    #[test]
    fn infinite_dihedral_rate_is_one() {
        let m = CoxeterMatrix::from_fn(2, ClassFlags::default(), |_, _| Order::Infinite).unwrap();
        let r = growth_rate(&inverse(&m)).unwrap();
        assert!((r.t_star - 1.0).abs() < 1e-12, "{r:?}");
    }

    #[test]
    fn finite_group_has_no_root() {
        let a2 = CoxeterMatrix::from_fn(2, ClassFlags::default(), |_, _| Order::Finite(3)).unwrap();
        // the nerve of a finite group is a full simplex; 1/W = t^3/W(t) > 0
        assert_eq!(
            growth_rate(&inverse(&a2)),
            Err(GrowthError::NoRootAtMostOne)
        );
    }

    #[test]
    fn reference_roots() {
        assert!((ra_reference_growth_rate(12).unwrap() - (4.0 + 15f64.sqrt())).abs() < 1e-12);
        assert!((ra_reference_growth_rate(18).unwrap() - (7.0 + 48f64.sqrt())).abs() < 1e-12);
        assert_eq!(ra_reference_growth_rate(6).unwrap(), 1.0);
        assert_eq!(ra_reference_inverse(9, 1.0).unwrap(), 0.0);
        assert!(ra_reference_inverse(5, 0.5).is_err());
        let root = 4.0 - 15f64.sqrt();
        assert!(ra_reference_inverse(12, root).unwrap().abs() < 1e-14);
    }

    #[test]
    fn lower_bound_on_fixtures() {
        match growth_lower_bound_check(&inverse(&fixtures::dodecahedron()), 12, 1000).unwrap() {
            LowerBoundVerdict::Checked {
                holds,
                worst_margin,
                ..
            } => {
                assert!(holds);
                assert!(worst_margin.abs() < 1e-12);
            }
            other => panic!("{other:?}"),
        }
        match growth_lower_bound_check(&inverse(&fixtures::cube_three_thirds()), 6, 1000).unwrap() {
            LowerBoundVerdict::Checked {
                holds,
                worst_margin,
                ..
            } => {
                assert!(holds);
                assert!(worst_margin > -1e-12);
            }
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            growth_lower_bound_check(&inverse(&fixtures::ultraparallel_13()), 13, 1000).unwrap(),
            LowerBoundVerdict::TreeBoundApplies { .. }
        ));
    }

    #[test]
    fn bracket_inequality_small_range() {
        assert!(bracket_inequality_holds(2, 2, 1, 1.0).unwrap());
        assert!(bracket_inequality_holds(3, 7, 0, 0.3).unwrap());
        assert!(bracket_inequality_holds(5, 2, 0, 0.5).is_err());
        assert!(bracket_inequality_holds(2, 2, 3, 0.5).is_err());
        for a in 0..=12 {
            for b in (a.max(1) - 1)..=12 {
                for d in 0..=a {
                    for i in 0..=20 {
                        let t = f64::from(i) / 10.0;
                        assert!(
                            bracket_inequality_holds(a, b, d, t).unwrap(),
                            "{a} {b} {d} {t}"
                        );
                    }
                }
            }
        }
    }
}
