//! Descent counts `r(v)` and their distribution among children `q_i(v)`.

use serde::Serialize;

use super::CayleyBall;

/// `r(v)` is the number of neighbours one step closer to the identity;
/// `q_i(v)` counts children `u` (one step further) with `r(u) = i`.
///
/// `r` is known for every vertex of the ball. `q` is only recorded for
/// interior vertices, whose children all lie in the ball.
#[derive(Debug, Clone)]
pub struct OrientationStats {
    r: Vec<u8>,
    q_offsets: Vec<u32>,
    q_entries: Vec<(u8, u32)>,
    interior: Vec<bool>,
}

pub fn orientation_stats(ball: &CayleyBall) -> OrientationStats {
    let n = ball.len();
    let r: Vec<u8> = (0..n)
        .map(|v| {
            let l = ball.length(v);
            ball.neighbors(v)
                .filter(|&(_, u)| ball.length(u) + 1 == l)
                .count() as u8
        })
        .collect();
    let interior: Vec<bool> = (0..n).map(|v| ball.is_interior(v)).collect();
    let mut q_offsets = Vec::with_capacity(n + 1);
    let mut q_entries = Vec::new();
    q_offsets.push(0);
    let mut counts: Vec<u32> = Vec::new();
    for v in 0..n {
        if interior[v] {
            counts.clear();
            let l = ball.length(v);
            for (_, u) in ball.neighbors(v) {
                if ball.length(u) == l + 1 {
                    let i = r[u] as usize;
                    if counts.len() <= i {
                        counts.resize(i + 1, 0);
                    }
                    counts[i] += 1;
                }
            }
            q_entries.extend(
                counts
                    .iter()
                    .enumerate()
                    .filter(|&(_, &c)| c > 0)
                    .map(|(i, &c)| (i as u8, c)),
            );
        }
        q_offsets.push(q_entries.len() as u32);
    }
    OrientationStats {
        r,
        q_offsets,
        q_entries,
        interior,
    }
}

impl OrientationStats {
    pub fn len(&self) -> usize {
        self.r.len()
    }

    pub fn is_empty(&self) -> bool {
        self.r.is_empty()
    }

    pub fn r(&self, v: usize) -> usize {
        self.r[v] as usize
    }

    pub fn is_interior(&self, v: usize) -> bool {
        self.interior[v]
    }

    /// Nonzero `(i, q_i(v))` pairs. Empty for boundary vertices.
    pub fn q(&self, v: usize) -> impl Iterator<Item = (usize, usize)> + '_ {
        let range = self.q_offsets[v] as usize..self.q_offsets[v + 1] as usize;
        self.q_entries[range]
            .iter()
            .map(|&(i, c)| (i as usize, c as usize))
    }

    pub fn q_i(&self, v: usize, i: usize) -> usize {
        self.q(v).find(|&(j, _)| j == i).map_or(0, |(_, c)| c)
    }

    /// Largest `r(v)` over all vertices of the ball.
    pub fn max_r(&self) -> usize {
        self.r.iter().copied().max().unwrap_or(0) as usize
    }
}

/// Largest `q_3(v)` allowed at an interior vertex `v != o` with `r(v) = r`.
pub fn q3_ceiling(r: usize) -> Option<usize> {
    match r {
        1 => Some(0),
        2 => Some(2),
        3 => Some(3),
        _ => None,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OrientationCheck {
    pub interior_vertices: usize,
    pub max_interior_r: usize,
    /// Interior vertices other than the identity with `r(v)` outside `1..=3`.
    pub r_violations: usize,
    pub q3_violations: usize,
    pub first_violation: Option<usize>,
    pub holds: bool,
}

/// `r(v) <= 3` and the `q_3` ceilings on every interior vertex.
pub fn check_orientation(stats: &OrientationStats) -> OrientationCheck {
    let mut check = OrientationCheck {
        interior_vertices: 0,
        max_interior_r: 0,
        r_violations: 0,
        q3_violations: 0,
        first_violation: None,
        holds: true,
    };
    for v in (0..stats.len()).filter(|&v| stats.is_interior(v)) {
        check.interior_vertices += 1;
        let r = stats.r(v);
        check.max_interior_r = check.max_interior_r.max(r);
        if v == 0 {
            continue;
        }
        let bad = match q3_ceiling(r) {
            None => {
                check.r_violations += 1;
                true
            }
            Some(cap) if stats.q_i(v, 3) > cap => {
                check.q3_violations += 1;
                true
            }
            Some(_) => false,
        };
        if bad && check.first_violation.is_none() {
            check.first_violation = Some(v);
        }
    }
    check.holds = check.r_violations == 0 && check.q3_violations == 0;
    check
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coxeter::{build_ball, BallOptions};
    use crate::fixtures;

    #[test]
    fn right_angled_descents_bounded_by_three() {
        let ball = build_ball(&fixtures::dodecahedron(), 4, BallOptions::default()).unwrap();
        let stats = orientation_stats(&ball);
        assert_eq!(stats.r(0), 0);
        assert_eq!(stats.max_r(), 3);
        for v in 0..ball.len() {
            if stats.is_interior(v) {
                let children = ball.rank() - stats.r(v);
                let total: usize = stats.q(v).map(|(_, c)| c).sum();
                assert_eq!(total, children);
            } else {
                assert_eq!(stats.q(v).count(), 0);
            }
        }
        // children of the identity are the generators, each with one descent
        assert_eq!(stats.q_i(0, 1), 12);
        let check = check_orientation(&stats);
        assert!(check.holds, "{check:?}");
        assert_eq!(check.max_interior_r, 3);
    }
}
