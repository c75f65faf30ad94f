//! Least `k` from which each lemma certifies, with and without the
//! non-backtracking transform.

use serde::Serialize;

use super::{strictly_below, transformed};
use crate::growth::ra_reference_growth_rate;
use crate::walks::RhoLemma;

/// Every `k` from the reported threshold up to this value is checked.
pub const TABLE_HORIZON: usize = 1000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Estimator {
    Rho,
    GammaStar,
}

/// `(b1, b2)` for a lemma at rank `k`, with `b2` the lower bound on the
/// growth rate. `None` outside the lemma's range of validity.
pub fn pipeline_bounds(k: usize, lemma: RhoLemma, estimator: Estimator) -> Option<(f64, f64)> {
    if k < lemma.min_rank() {
        return None;
    }
    let b2 = ra_reference_growth_rate(k).ok()?;
    let rho = lemma.value_at(k as f64);
    let (b1, _) = transformed(rho, k, estimator == Estimator::GammaStar).ok()?;
    Some((b1, b2))
}

/// `b2 - b1` for the general lemma with the transform.
pub fn general_margin(k: usize) -> Option<f64> {
    pipeline_bounds(k, RhoLemma::General, Estimator::GammaStar).map(|(b1, b2)| b2 - b1)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ThresholdRow {
    pub lemma: RhoLemma,
    pub rho: Option<usize>,
    pub gamma_star: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ThresholdTable {
    pub horizon: usize,
    pub rows: Vec<ThresholdRow>,
}

impl ThresholdTable {
    pub fn get(&self, lemma: RhoLemma, estimator: Estimator) -> Option<usize> {
        let row = self.rows.iter().find(|r| r.lemma == lemma)?;
        match estimator {
            Estimator::Rho => row.rho,
            Estimator::GammaStar => row.gamma_star,
        }
    }
}

/// Least `k` such that `b1 < b2` for every rank from `k` to the horizon.
fn threshold(lemma: RhoLemma, estimator: Estimator) -> Option<usize> {
    let start = lemma.min_rank().max(6);
    let mut answer = None;
    for k in (start..=TABLE_HORIZON).rev() {
        let (b1, b2) = pipeline_bounds(k, lemma, estimator)?;
        if !strictly_below(b1, b2) {
            break;
        }
        answer = Some(k);
    }
    answer
}

pub fn reproduce_threshold_table() -> ThresholdTable {
    ThresholdTable {
        horizon: TABLE_HORIZON,
        rows: RhoLemma::ALL
            .into_iter()
            .map(|lemma| ThresholdRow {
                lemma,
                rho: threshold(lemma, Estimator::Rho),
                gamma_star: threshold(lemma, Estimator::GammaStar),
            })
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_values() {
        let t = reproduce_threshold_table();
        let get = |l, e| t.get(l, e).unwrap();
        assert_eq!(get(RhoLemma::Basic, Estimator::Rho), 18);
        assert_eq!(get(RhoLemma::Basic, Estimator::GammaStar), 15);
        assert_eq!(get(RhoLemma::General, Estimator::Rho), 15);
        assert_eq!(get(RhoLemma::General, Estimator::GammaStar), 13);
        assert_eq!(get(RhoLemma::RaCompact, Estimator::Rho), 15);
        assert_eq!(get(RhoLemma::RaCompact, Estimator::GammaStar), 12);
        assert_eq!(t, reproduce_threshold_table());
    }

    #[test]
    fn basic_base_case() {
        let (b1, b2) = pipeline_bounds(18, RhoLemma::Basic, Estimator::Rho).unwrap();
        assert!((b1 - 2.0 * 45f64.sqrt()).abs() < 1e-12);
        assert!((b2 - (7.0 + 48f64.sqrt())).abs() < 1e-12);
        assert!(b1 < b2);
    }

    #[test]
    fn general_margin_increases() {
        let margins: Vec<f64> = (13..=60).map(|k| general_margin(k).unwrap()).collect();
        assert!(margins[0] > 0.0);
        assert!(margins.windows(2).all(|w| w[1] > w[0]));
    }
}
