//! Breadth-first construction of balls in the Cayley graph.

use indexmap::IndexSet;
use serde::Serialize;
use thiserror::Error;

use super::repr::{Action, ExactAction, FloatAction, Overflow};
use super::{CoxeterMatrix, DEFAULT_MAX_BALL_SIZE};

const NONE: u32 = u32::MAX;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BackendChoice {
    /// Exact arithmetic when the orders allow it, floats otherwise.
    #[default]
    Auto,
    Float,
}

#[derive(Debug, Clone, Copy)]
pub struct BallOptions {
    pub max_vertices: usize,
    pub backend: BackendChoice,
}

impl Default for BallOptions {
    fn default() -> Self {
        Self {
            max_vertices: DEFAULT_MAX_BALL_SIZE,
            backend: BackendChoice::Auto,
        }
    }
}

#[derive(Debug, Error)]
pub enum BallError {
    #[error(
        "ball size cap of {cap} vertices exceeded while building radius {radius_reached} \
         (complete up to radius {complete_radius})"
    )]
    SizeCap {
        cap: usize,
        radius_reached: usize,
        complete_radius: usize,
    },
    #[error("coordinate overflow at radius {radius_reached}")]
    Overflow { radius_reached: usize },
    #[error("element identification failed at radius {radius}: {detail}")]
    Identification { radius: usize, detail: String },
}

/// A group element, named by its canonical key in the faithful action.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GroupElement<'a> {
    pub key: &'a [i64],
    pub length: usize,
}

/// Ball of radius `R` around the identity in the right Cayley graph.
///
/// Vertices are numbered in BFS order so each sphere is a contiguous index
/// range. Vertex `0` is the identity.
#[derive(Debug, Clone)]
pub struct CayleyBall {
    rank: usize,
    radius: usize,
    exact: bool,
    keys: IndexSet<Box<[i64]>>,
    lengths: Vec<u32>,
    parents: Vec<(u32, u8)>,
    neighbors: Vec<u32>,
    sphere_offsets: Vec<usize>,
}

pub fn build_ball(
    m: &CoxeterMatrix,
    radius: usize,
    options: BallOptions,
) -> Result<CayleyBall, BallError> {
    assert!(
        m.rank() < usize::from(u8::MAX),
        "rank too large for a Cayley ball"
    );
    let exact = match options.backend {
        BackendChoice::Auto => ExactAction::new(m),
        BackendChoice::Float => None,
    };
    match exact {
        Some(action) => bfs(&action, m.rank(), radius, options.max_vertices, true),
        None => bfs(
            &FloatAction::new(m),
            m.rank(),
            radius,
            options.max_vertices,
            false,
        ),
    }
}

fn bfs<A: Action>(
    action: &A,
    rank: usize,
    radius: usize,
    cap: usize,
    exact: bool,
) -> Result<CayleyBall, BallError> {
    let overflow = |level: usize| {
        move |_: Overflow| BallError::Overflow {
            radius_reached: level,
        }
    };
    let start = action.start();
    let mut keys = IndexSet::new();
    keys.insert(action.key(&start).map_err(overflow(0))?);
    let mut lengths = vec![0u32];
    let mut parents = vec![(NONE, 0u8)];
    let mut neighbors = vec![NONE; rank];
    let mut sphere_offsets = vec![0, 1];
    let mut level_coords = vec![start];
    let mut image = Vec::new();

    for level in 0..=radius {
        let level_start = sphere_offsets[level];
        let mut next_coords = Vec::new();
        for (i, x) in level_coords.iter().enumerate() {
            let v = level_start + i;
            for s in 0..rank {
                let ascent = action.coordinate(x, s) > 0.0;
                if neighbors[v * rank + s] != NONE {
                    continue;
                }
                action.reflect(s, x, &mut image).map_err(overflow(level))?;
                let key = action.key(&image).map_err(overflow(level))?;
                let expected = if ascent {
                    level + 1
                } else {
                    level.wrapping_sub(1)
                };
                match keys.get_index_of(&key) {
                    Some(u) => {
                        if lengths[u] as usize != expected {
                            return Err(BallError::Identification {
                                radius: level,
                                detail: format!(
                                    "vertex {v} at length {level} meets vertex {u} at length {} \
                                     via generator {s}, expected length {expected}",
                                    lengths[u]
                                ),
                            });
                        }
                        neighbors[v * rank + s] = u as u32;
                        neighbors[u * rank + s] = v as u32;
                    }
                    None if !ascent => {
                        return Err(BallError::Identification {
                            radius: level,
                            detail: format!(
                                "descent of vertex {v} by generator {s} not found in the ball"
                            ),
                        });
                    }
                    None if level == radius => {}
                    None => {
                        if keys.len() >= cap {
                            return Err(BallError::SizeCap {
                                cap,
                                radius_reached: level + 1,
                                complete_radius: level,
                            });
                        }
                        let u = keys.len();
                        keys.insert(key);
                        lengths.push(level as u32 + 1);
                        parents.push((v as u32, s as u8));
                        neighbors.extend(std::iter::repeat_n(NONE, rank));
                        neighbors[v * rank + s] = u as u32;
                        neighbors[u * rank + s] = v as u32;
                        next_coords.push(image.clone());
                    }
                }
            }
        }
        if level < radius {
            sphere_offsets.push(keys.len());
        }
        level_coords = next_coords;
    }

    Ok(CayleyBall {
        rank,
        radius,
        exact,
        keys,
        lengths,
        parents,
        neighbors,
        sphere_offsets,
    })
}

impl CayleyBall {
    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    /// Whether elements were identified by exact arithmetic.
    pub fn is_exact(&self) -> bool {
        self.exact
    }

    pub fn len(&self) -> usize {
        self.lengths.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lengths.is_empty()
    }

    pub fn length(&self, v: usize) -> usize {
        self.lengths[v] as usize
    }

    pub fn is_interior(&self, v: usize) -> bool {
        self.length(v) < self.radius
    }

    /// `|S(n)|` for `n = 0..=R`.
    pub fn sphere_sizes(&self) -> Vec<usize> {
        self.sphere_offsets
            .windows(2)
            .map(|w| w[1] - w[0])
            .collect()
    }

    /// `|B(n)|` for `n = 0..=R`.
    pub fn ball_sizes(&self) -> Vec<usize> {
        self.sphere_offsets[1..].to_vec()
    }

    /// Vertex indices of the sphere of radius `n`.
    pub fn sphere(&self, n: usize) -> std::ops::Range<usize> {
        self.sphere_offsets[n]..self.sphere_offsets[n + 1]
    }

    /// Neighbour of `v` across generator `s`, if it lies in the ball.
    pub fn neighbor(&self, v: usize, s: usize) -> Option<usize> {
        match self.neighbors[v * self.rank + s] {
            NONE => None,
            u => Some(u as usize),
        }
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.rank).filter_map(move |s| self.neighbor(v, s).map(|u| (s, u)))
    }

    /// Edges `(u, v, s)` with `u < v`, in canonical order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, usize)> + '_ {
        (0..self.len()).flat_map(move |u| {
            self.neighbors(u)
                .filter(move |&(_, v)| u < v)
                .map(move |(s, v)| (u, v, s))
        })
    }

    pub fn edge_count(&self) -> usize {
        self.edges().count()
    }

    pub fn element(&self, v: usize) -> GroupElement<'_> {
        GroupElement {
            key: self.keys.get_index(v).expect("vertex in range"),
            length: self.length(v),
        }
    }

    pub fn index_of(&self, key: &[i64]) -> Option<usize> {
        self.keys.get_index_of(key)
    }

    /// A reduced word `s_1 ... s_n` for vertex `v`, read as a path from the
    /// identity.
    pub fn word(&self, v: usize) -> Vec<usize> {
        let mut word = Vec::with_capacity(self.length(v));
        let mut u = v;
        while self.parents[u].0 != NONE {
            word.push(self.parents[u].1 as usize);
            u = self.parents[u].0 as usize;
        }
        word.reverse();
        word
    }

    /// Vertex reached from the identity by following `word`, if the path
    /// stays inside the ball.
    pub fn follow(&self, word: &[usize]) -> Option<usize> {
        word.iter().try_fold(0, |v, &s| self.neighbor(v, s))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coxeter::{ClassFlags, Order};
    use crate::fixtures;

    #[test]
    fn dodecahedron_spheres() {
        let ball = build_ball(&fixtures::dodecahedron(), 4, BallOptions::default()).unwrap();
        assert!(ball.is_exact());
        assert_eq!(ball.sphere_sizes(), vec![1, 12, 102, 812, 6402]);
        assert_eq!(ball.ball_sizes(), vec![1, 13, 115, 927, 7329]);
    }

    #[test]
    fn finite_group_saturates() {
        // H3 has order 120 and longest element of length 15
        let h3 = CoxeterMatrix::from_fn(3, ClassFlags::default(), |s, t| match (s, t) {
            (0, 1) => Order::Finite(5),
            (1, 2) => Order::Finite(3),
            _ => Order::Finite(2),
        })
        .unwrap();
        let ball = build_ball(&h3, 20, BallOptions::default()).unwrap();
        assert_eq!(ball.len(), 120);
        assert_eq!(ball.sphere_sizes().iter().rposition(|&n| n > 0), Some(15));
    }

    #[test]
    fn words_follow_back_to_vertices() {
        let ball = build_ball(&fixtures::cube_three_thirds(), 5, BallOptions::default()).unwrap();
        for v in 0..ball.len() {
            let word = ball.word(v);
            assert_eq!(word.len(), ball.length(v));
            assert_eq!(ball.follow(&word), Some(v));
        }
    }

    #[test]
    fn float_backend_matches_exact() {
        for m in [fixtures::cube_three_thirds(), fixtures::lanner_535()] {
            let exact = build_ball(&m, 6, BallOptions::default()).unwrap();
            let float = build_ball(
                &m,
                6,
                BallOptions {
                    backend: BackendChoice::Float,
                    ..Default::default()
                },
            )
            .unwrap();
            assert!(!float.is_exact());
            assert_eq!(exact.sphere_sizes(), float.sphere_sizes());
            assert_eq!(exact.edge_count(), float.edge_count());
        }
    }

    #[test]
    fn size_cap_reports_partial_radius() {
        let err = build_ball(
            &fixtures::dodecahedron(),
            6,
            BallOptions {
                max_vertices: 1000,
                ..Default::default()
            },
        )
        .unwrap_err();
        match err {
            BallError::SizeCap {
                radius_reached,
                complete_radius,
                ..
            } => {
                assert_eq!(radius_reached, 4);
                assert_eq!(complete_radius, 3);
            }
            other => panic!("unexpected {other}"),
        }
    }

    #[test]
    fn degrees_and_bipartiteness() {
        let ball = build_ball(&fixtures::lanner_535(), 5, BallOptions::default()).unwrap();
        for v in 0..ball.len() {
            if ball.is_interior(v) {
                assert_eq!(ball.neighbors(v).count(), ball.rank());
            }
            for (_, u) in ball.neighbors(v) {
                assert_eq!(ball.length(u).abs_diff(ball.length(v)), 1);
            }
        }
    }
}
