use serde::Serialize;

use super::{BoundError, BoundSource, BoundValue};
use crate::coxeter::{CayleyBall, OrientationStats};

/// Weights `(c1, c2, c3)` indexed by the descent count of the far endpoint
/// of an oriented edge.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GabberParams {
    c: [f64; 3],
}

impl GabberParams {
    pub fn new(c1: f64, c2: f64, c3: f64) -> Result<Self, BoundError> {
        let c = [c1, c2, c3];
        if c.iter().all(|x| x.is_finite() && *x > 0.0) {
            Ok(Self { c })
        } else {
            Err(BoundError::InvalidWeights(c))
        }
    }

    pub fn from_array(c: [f64; 3]) -> Result<Self, BoundError> {
        Self::new(c[0], c[1], c[2])
    }

    /// `c_i` for `i` in `1..=3`.
    pub fn c(&self, i: usize) -> f64 {
        self.c[i - 1]
    }

    pub fn as_array(&self) -> [f64; 3] {
        self.c
    }

    /// `f_v = r c_r + sum_i q_i / c_i`.
    pub fn vertex_sum(&self, stats: &OrientationStats, v: usize) -> Result<f64, BoundError> {
        let r = stats.r(v);
        let mut total = if r == 0 {
            0.0
        } else if r <= 3 {
            r as f64 * self.c(r)
        } else {
            return Err(BoundError::DescentOutOfRange { vertex: v, r });
        };
        for (i, q) in stats.q(v) {
            if !(1..=3).contains(&i) {
                return Err(BoundError::DescentOutOfRange { vertex: v, r: i });
            }
            total += q as f64 / self.c(i);
        }
        Ok(total)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GabberObservation {
    pub weights: [f64; 3],
    pub bound: BoundValue,
    pub argmax_vertex: usize,
    pub argmax_word: Vec<usize>,
    /// Largest `f_v` among interior vertices with `r(v) = 0, 1, 2, 3`.
    pub max_by_descents: [Option<f64>; 4],
    pub interior_vertices: usize,
    pub excluded_vertices: usize,
}

/// Largest Gabber sum over interior vertices of the ball. Boundary vertices
/// have children outside the ball and are excluded.
pub fn gabber_bound_on_ball(
    ball: &CayleyBall,
    stats: &OrientationStats,
    params: GabberParams,
) -> Result<GabberObservation, BoundError> {
    let mut best: Option<(f64, usize)> = None;
    let mut by_r = [None; 4];
    let mut interior = 0;
    for v in 0..ball.len() {
        if !stats.is_interior(v) {
            continue;
        }
        interior += 1;
        let f = params.vertex_sum(stats, v)?;
        let slot: &mut Option<f64> = &mut by_r[stats.r(v)];
        *slot = Some(slot.map_or(f, |m| m.max(f)));
        if best.is_none_or(|(b, _)| f > b) {
            best = Some((f, v));
        }
    }
    let (value, argmax) = best.ok_or(BoundError::NoInteriorVertices)?;
    Ok(GabberObservation {
        weights: params.as_array(),
        bound: BoundValue {
            value,
            source: BoundSource::ObservedSup,
            preconditions: vec![format!(
                "interior of a ball of radius {}; not a bound on the infinite graph",
                ball.radius()
            )],
        },
        argmax_vertex: argmax,
        argmax_word: ball.word(argmax),
        max_by_descents: by_r,
        interior_vertices: interior,
        excluded_vertices: ball.len() - interior,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coxeter::{build_ball, orientation_stats, BallOptions};
    use crate::fixtures;
    use crate::walks::RhoLemma;

    #[test]
    fn unit_weights_give_degree() {
        let ball = build_ball(&fixtures::cube_three_thirds(), 4, BallOptions::default()).unwrap();
        let stats = orientation_stats(&ball);
        let obs =
            gabber_bound_on_ball(&ball, &stats, GabberParams::new(1.0, 1.0, 1.0).unwrap()).unwrap();
        assert!((obs.bound.value - 6.0).abs() < 1e-12);
        for v in 0..ball.len() {
            if stats.is_interior(v) {
                let f = GabberParams::new(1.0, 1.0, 1.0)
                    .unwrap()
                    .vertex_sum(&stats, v)
                    .unwrap();
                assert!((f - 6.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn dodecahedron_lemma_weights_respect_closed_forms() {
        let m = fixtures::dodecahedron();
        let ball = build_ball(&m, 4, BallOptions::default()).unwrap();
        let stats = orientation_stats(&ball);
        for lemma in RhoLemma::ALL {
            let params = GabberParams::from_array(lemma.weights(12)).unwrap();
            let obs = gabber_bound_on_ball(&ball, &stats, params).unwrap();
            assert!(
                obs.bound.value <= lemma.value_at(12.0) + 1e-12,
                "{lemma}: {obs:?}"
            );
        }
    }

    #[test]
    fn invalid_weights() {
        assert!(GabberParams::new(1.0, 0.0, 1.0).is_err());
        assert!(GabberParams::new(f64::NAN, 1.0, 1.0).is_err());
    }

    #[test]
    fn radius_zero_has_no_interior() {
        let ball = build_ball(&fixtures::dodecahedron(), 0, BallOptions::default()).unwrap();
        let stats = orientation_stats(&ball);
        assert_eq!(
            gabber_bound_on_ball(&ball, &stats, GabberParams::new(1.0, 1.0, 1.0).unwrap()),
            Err(BoundError::NoInteriorVertices)
        );
    }
}
