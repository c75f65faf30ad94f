//! Faithful linear action used to name group elements.
//!
//! An element `w` is stored as the vector `w . rho` in the contragredient
//! of the geometric representation, where `rho` pairs to `1` with every
//! simple root. Generator `s` acts by
//! `(s.x)_t = x_t + c_st x_s` for `t != s` and `(s.x)_s = -x_s`, with
//! `c_st = 2 cos(pi / m_st)` (and `2` for `m = inf`). The coordinate `x_s`
//! is negative exactly when `s` shortens `w` on the left.
//!
//! When all finite orders lie in `{2,3,4,5,6}` the coordinates live in
//! `Z[sqrt2, sqrt3, phi]` and are stored exactly as integer vectors over the
//! monomial basis `sqrt2^i sqrt3^j phi^l`. Otherwise coordinates are floats
//! and keys are quantized.

use super::{CoxeterMatrix, Order};

pub(crate) const FLOAT_KEY_QUANTUM: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct Overflow;

pub(crate) trait Action {
    type Coord: Copy;

    fn start(&self) -> Vec<Self::Coord>;

    fn reflect(
        &self,
        s: usize,
        x: &[Self::Coord],
        out: &mut Vec<Self::Coord>,
    ) -> Result<(), Overflow>;

    fn key(&self, x: &[Self::Coord]) -> Result<Box<[i64]>, Overflow>;

    /// Approximate value of coordinate `s`.
    fn coordinate(&self, x: &[Self::Coord], s: usize) -> f64;
}

/// Exact action over the smallest subring of `Z[sqrt2, sqrt3, phi]` that
/// contains every `c_st`.
pub(crate) struct ExactAction {
    rank: usize,
    dim: usize,
    basis_values: Vec<f64>,
    /// Row-major `dim x dim` multiplication matrix of `c_st`, `None` when
    /// `c_st = 0`.
    constants: Vec<Option<Vec<i64>>>,
}

/// Index of `sqrt2^i sqrt3^j phi^l` in the full 8-dimensional basis.
fn full_index(i: usize, j: usize, l: usize) -> usize {
    i + 2 * j + 4 * l
}

/// Multiply two elements written in the full basis.
fn full_mul(a: &[i64; 8], b: &[i64; 8]) -> [i64; 8] {
    let mut out = [0i64; 8];
    for (ia, &ca) in a.iter().enumerate() {
        if ca == 0 {
            continue;
        }
        for (ib, &cb) in b.iter().enumerate() {
            if cb == 0 {
                continue;
            }
            let (i1, j1, l1) = (ia & 1, (ia >> 1) & 1, ia >> 2);
            let (i2, j2, l2) = (ib & 1, (ib >> 1) & 1, ib >> 2);
            let mut coeff = ca * cb;
            let i = if i1 + i2 == 2 {
                coeff *= 2;
                0
            } else {
                i1 + i2
            };
            let j = if j1 + j2 == 2 {
                coeff *= 3;
                0
            } else {
                j1 + j2
            };
            if l1 + l2 == 2 {
                out[full_index(i, j, 1)] += coeff;
                out[full_index(i, j, 0)] += coeff;
            } else {
                out[full_index(i, j, l1 + l2)] += coeff;
            }
        }
    }
    out
}

fn constant_in_full_basis(order: Order) -> Option<[i64; 8]> {
    let mut v = [0i64; 8];
    match order {
        Order::Finite(2) => {}
        Order::Finite(3) => v[0] = 1,
        Order::Finite(4) => v[full_index(1, 0, 0)] = 1,
        Order::Finite(5) => v[full_index(0, 0, 1)] = 1,
        Order::Finite(6) => v[full_index(0, 1, 0)] = 1,
        Order::Infinite => v[0] = 2,
        Order::Finite(_) => return None,
    }
    Some(v)
}

impl ExactAction {
    /// `None` if some finite order falls outside `{2,3,4,5,6}`.
    pub(crate) fn new(m: &CoxeterMatrix) -> Option<Self> {
        let rank = m.rank();
        let orders = m.finite_orders();
        if orders.iter().any(|&o| !(2..=6).contains(&o)) {
            return None;
        }
        let (need2, need3, need5) = (
            usize::from(orders.contains(&4)),
            usize::from(orders.contains(&6)),
            usize::from(orders.contains(&5)),
        );
        let mut active = Vec::new();
        for l in 0..=need5 {
            for j in 0..=need3 {
                for i in 0..=need2 {
                    active.push(full_index(i, j, l));
                }
            }
        }
        active.sort_unstable();
        let dim = active.len();
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        let basis_values = active
            .iter()
            .map(|&b| {
                let mut v = 1.0;
                if b & 1 == 1 {
                    v *= 2f64.sqrt();
                }
                if (b >> 1) & 1 == 1 {
                    v *= 3f64.sqrt();
                }
                if b >> 2 == 1 {
                    v *= phi;
                }
                v
            })
            .collect();
        let mut constants = vec![None; rank * rank];
        for s in 0..rank {
            for t in 0..rank {
                if s == t {
                    continue;
                }
                let c = constant_in_full_basis(m.order(s, t))?;
                if c.iter().all(|&x| x == 0) {
                    continue;
                }
                let mut mat = vec![0i64; dim * dim];
                for (col, &b) in active.iter().enumerate() {
                    let mut unit = [0i64; 8];
                    unit[b] = 1;
                    let prod = full_mul(&c, &unit);
                    for (row, &r) in active.iter().enumerate() {
                        mat[row * dim + col] = prod[r];
                    }
                    debug_assert!(prod
                        .iter()
                        .enumerate()
                        .all(|(i, &v)| v == 0 || active.contains(&i)));
                }
                constants[s * rank + t] = Some(mat);
            }
        }
        Some(Self {
            rank,
            dim,
            basis_values,
            constants,
        })
    }

    #[cfg(test)]
    pub(crate) fn dim(&self) -> usize {
        self.dim
    }
}

impl Action for ExactAction {
    type Coord = i64;

    fn start(&self) -> Vec<i64> {
        let mut x = vec![0; self.rank * self.dim];
        for t in 0..self.rank {
            x[t * self.dim] = 1;
        }
        x
    }

    fn reflect(&self, s: usize, x: &[i64], out: &mut Vec<i64>) -> Result<(), Overflow> {
        let d = self.dim;
        out.clear();
        out.extend_from_slice(x);
        let xs = &x[s * d..(s + 1) * d];
        for t in 0..self.rank {
            if t == s {
                for v in &mut out[s * d..(s + 1) * d] {
                    *v = v.checked_neg().ok_or(Overflow)?;
                }
                continue;
            }
            let Some(mat) = &self.constants[s * self.rank + t] else {
                continue;
            };
            for row in 0..d {
                let mut acc = out[t * d + row];
                for col in 0..d {
                    let term = mat[row * d + col].checked_mul(xs[col]).ok_or(Overflow)?;
                    acc = acc.checked_add(term).ok_or(Overflow)?;
                }
                out[t * d + row] = acc;
            }
        }
        Ok(())
    }

    fn key(&self, x: &[i64]) -> Result<Box<[i64]>, Overflow> {
        Ok(x.into())
    }

    fn coordinate(&self, x: &[i64], s: usize) -> f64 {
        let d = self.dim;
        x[s * d..(s + 1) * d]
            .iter()
            .zip(&self.basis_values)
            .map(|(&c, &b)| c as f64 * b)
            .sum()
    }
}

pub(crate) struct FloatAction {
    rank: usize,
    constants: Vec<f64>,
}

impl FloatAction {
    pub(crate) fn new(m: &CoxeterMatrix) -> Self {
        let rank = m.rank();
        let mut constants = vec![0.0; rank * rank];
        for (s, t) in m.pairs() {
            let c = 2.0 * m.order(s, t).cos_pi_over();
            // cos(pi/2) is not exactly zero in floating point
            let c = if m.order(s, t) == Order::Finite(2) {
                0.0
            } else {
                c
            };
            constants[s * rank + t] = c;
            constants[t * rank + s] = c;
        }
        Self { rank, constants }
    }
}

impl Action for FloatAction {
    type Coord = f64;

    fn start(&self) -> Vec<f64> {
        vec![1.0; self.rank]
    }

    fn reflect(&self, s: usize, x: &[f64], out: &mut Vec<f64>) -> Result<(), Overflow> {
        out.clear();
        out.extend_from_slice(x);
        let xs = x[s];
        for (t, v) in out.iter_mut().enumerate() {
            if t == s {
                *v = -xs;
            } else {
                *v += self.constants[s * self.rank + t] * xs;
            }
        }
        Ok(())
    }

    fn key(&self, x: &[f64]) -> Result<Box<[i64]>, Overflow> {
        x.iter()
            .map(|&v| {
                let q = (v / FLOAT_KEY_QUANTUM).round();
                if q.is_finite() && q.abs() < 9.0e15 {
                    Ok(q as i64)
                } else {
                    Err(Overflow)
                }
            })
            .collect()
    }

    fn coordinate(&self, x: &[f64], s: usize) -> f64 {
        x[s]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coxeter::ClassFlags;

    fn dihedral(m: Order) -> CoxeterMatrix {
        CoxeterMatrix::from_fn(2, ClassFlags::default(), |_, _| m).unwrap()
    }

    #[test]
    fn ring_multiplication() {
        let sqrt2 = {
            let mut v = [0; 8];
            v[1] = 1;
            v
        };
        let phi = {
            let mut v = [0; 8];
            v[4] = 1;
            v
        };
        let two = full_mul(&sqrt2, &sqrt2);
        assert_eq!(two, [2, 0, 0, 0, 0, 0, 0, 0]);
        // phi^2 = phi + 1
        assert_eq!(full_mul(&phi, &phi), [1, 0, 0, 0, 1, 0, 0, 0]);
    }

    #[test]
    fn adaptive_dimension() {
        let cases = [
            (Order::Finite(3), 1),
            (Order::Infinite, 1),
            (Order::Finite(4), 2),
            (Order::Finite(5), 2),
            (Order::Finite(6), 2),
        ];
        for (m, dim) in cases {
            assert_eq!(ExactAction::new(&dihedral(m)).unwrap().dim(), dim, "{m}");
        }
        assert!(ExactAction::new(&dihedral(Order::Finite(7))).is_none());
    }

    /// Orbit of `rho` under the dihedral group has exactly `2m` points.
    fn exact_orbit(m: u32) -> usize {
        let a = ExactAction::new(&dihedral(Order::Finite(m))).unwrap();
        let mut seen = vec![a.start()];
        let mut frontier = seen.clone();
        let mut out = Vec::new();
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for x in &frontier {
                for s in 0..2 {
                    a.reflect(s, x, &mut out).unwrap();
                    if !seen.contains(&out) {
                        seen.push(out.clone());
                        next.push(out.clone());
                    }
                }
            }
            frontier = next;
        }
        seen.len()
    }

    #[test]
    fn dihedral_orbits_are_exact() {
        for m in 2..=6 {
            assert_eq!(exact_orbit(m), 2 * m as usize);
        }
    }

    #[test]
    fn exact_and_float_coordinates_agree() {
        let m = dihedral(Order::Finite(5));
        let exact = ExactAction::new(&m).unwrap();
        let float = FloatAction::new(&m);
        let (mut xe, mut xf) = (exact.start(), float.start());
        let (mut oe, mut of) = (Vec::new(), Vec::new());
        for step in 0..7 {
            let s = step % 2;
            exact.reflect(s, &xe, &mut oe).unwrap();
            float.reflect(s, &xf, &mut of).unwrap();
            std::mem::swap(&mut xe, &mut oe);
            std::mem::swap(&mut xf, &mut of);
            for t in 0..2 {
                assert!((exact.coordinate(&xe, t) - xf[t]).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn overflow_is_detected() {
        let a = ExactAction::new(&dihedral(Order::Infinite)).unwrap();
        let x = vec![i64::MAX / 2, i64::MAX / 2];
        let mut out = Vec::new();
        assert_eq!(a.reflect(0, &x, &mut out), Err(Overflow));
    }
}
