//! Coxeter matrices and the combinatorics of their Cayley graphs.
//!
//! A [`CoxeterMatrix`] is the single source of truth for a group. Everything
//! else in the crate (nerve, growth series, bounds, oracles) is derived from
//! it. Class flags (`hyperbolic_polyhedral`, `right_angled`, `compact`) are
//! assertions made by whoever wrote the input; only their combinatorial
//! consequences are ever checked.

mod ball;
mod orientation;
mod repr;

use std::fmt;

use serde::{Deserialize, Serialize, Serializer};
use serde_json::Value;
use thiserror::Error;

pub use ball::{build_ball, BackendChoice, BallError, BallOptions, CayleyBall, GroupElement};
pub use orientation::{
    check_orientation, orientation_stats, q3_ceiling, OrientationCheck, OrientationStats,
};

/// Default cap on the number of vertices of a Cayley ball.
pub const DEFAULT_MAX_BALL_SIZE: usize = 5_000_000;

/// Tolerance on leading principal minors of the cosine matrix.
pub const SPHERICITY_TOLERANCE: f64 = 1e-9;

/// Entry `m(s,t)` of a Coxeter matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Order {
    Finite(u32),
    Infinite,
}

impl Order {
    pub fn finite(self) -> Option<u32> {
        match self {
            Order::Finite(m) => Some(m),
            Order::Infinite => None,
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, Order::Finite(_))
    }

    /// `cos(pi/m)`, with the `m = inf` convention of `1`.
    pub fn cos_pi_over(self) -> f64 {
        match self {
            Order::Finite(m) => (std::f64::consts::PI / f64::from(m)).cos(),
            Order::Infinite => 1.0,
        }
    }
}

impl fmt::Display for Order {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Order::Finite(m) => write!(f, "{m}"),
            Order::Infinite => f.write_str("inf"),
        }
    }
}

impl Serialize for Order {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            Order::Finite(m) => serializer.serialize_u32(*m),
            Order::Infinite => serializer.serialize_str("inf"),
        }
    }
}

/// User-asserted class of the polyhedron behind the matrix.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct ClassFlags {
    pub hyperbolic_polyhedral: bool,
    pub right_angled: bool,
    pub compact: bool,
}

#[derive(Debug, Error)]
pub enum CoxeterError {
    #[error("malformed input document: {0}")]
    Json(#[from] serde_json::Error),
    #[error("rank must be at least 1")]
    ZeroRank,
    #[error("declared rank {rank} but the matrix has {rows} rows")]
    RowCount { rank: usize, rows: usize },
    #[error("row {row} has {len} entries, expected {rank}")]
    RowLength { row: usize, len: usize, rank: usize },
    #[error("entry ({s},{t}) is not an order: {entry}")]
    BadEntry { s: usize, t: usize, entry: String },
    #[error("matrix is asymmetric: m({s},{t}) = {st} but m({t},{s}) = {ts}")]
    Asymmetric {
        s: usize,
        t: usize,
        st: Order,
        ts: Order,
    },
    #[error("diagonal entry m({s},{s}) = {value}, expected 1")]
    Diagonal { s: usize, value: Order },
    #[error("off-diagonal entry m({s},{t}) = {value} is below 2")]
    OffDiagonalTooSmall { s: usize, t: usize, value: Order },
    #[error("right_angled flag set but m({s},{t}) = {order}")]
    RightAngledViolation { s: usize, t: usize, order: u32 },
    #[error("empty generator subset")]
    EmptySubset,
    #[error("generator {index} out of range for rank {rank}")]
    GeneratorOutOfRange { index: usize, rank: usize },
}

impl CoxeterError {
    /// Flag-consistency failures are validation failures; everything else is
    /// a malformed input.
    pub fn is_validation(&self) -> bool {
        matches!(self, CoxeterError::RightAngledViolation { .. })
    }
}

/// A validated, symmetric Coxeter matrix with its class flags.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoxeterMatrix {
    rank: usize,
    orders: Vec<Order>,
    flags: ClassFlags,
}

#[derive(Debug, Deserialize)]
struct InputDocument {
    rank: usize,
    orders: Vec<Vec<Value>>,
    #[serde(default = "default_infinity_token")]
    infinity_token: String,
    #[serde(default)]
    flags: ClassFlags,
}

fn default_infinity_token() -> String {
    "inf".to_owned()
}

/// Serializable echo of a matrix in the input schema.
#[derive(Debug, Clone, Serialize)]
pub struct MatrixDocument {
    pub rank: usize,
    pub orders: Vec<Vec<Order>>,
    pub infinity_token: &'static str,
    pub flags: ClassFlags,
}

/// Parse and validate a JSON input document.
pub fn parse_coxeter_input(text: &str) -> Result<CoxeterMatrix, CoxeterError> {
    CoxeterMatrix::from_json(text)
}

impl CoxeterMatrix {
    /// Build from rows of orders. Checks every structural invariant and the
    /// `right_angled` flag.
    pub fn new(rows: Vec<Vec<Order>>, flags: ClassFlags) -> Result<Self, CoxeterError> {
        let matrix = Self::structural(rows, flags)?;
        if let Some((s, t, order)) = matrix.right_angled_violation() {
            if flags.right_angled {
                return Err(CoxeterError::RightAngledViolation { s, t, order });
            }
        }
        Ok(matrix)
    }

    /// Build from `rank` and a symmetric order function on `s < t`.
    pub fn from_fn(
        rank: usize,
        flags: ClassFlags,
        mut order: impl FnMut(usize, usize) -> Order,
    ) -> Result<Self, CoxeterError> {
        let mut rows = vec![vec![Order::Finite(1); rank]; rank];
        for s in 0..rank {
            for t in s + 1..rank {
                let m = order(s, t);
                rows[s][t] = m;
                rows[t][s] = m;
            }
        }
        Self::new(rows, flags)
    }

    pub fn from_json(text: &str) -> Result<Self, CoxeterError> {
        let (rows, flags) = Self::rows_from_json(text)?;
        Self::new(rows, flags)
    }

    /// Like [`CoxeterMatrix::from_json`], but a `right_angled` flag that the
    /// orders contradict is dropped and returned as an error value instead of
    /// failing the parse.
    pub fn from_json_lenient(text: &str) -> Result<(Self, Option<CoxeterError>), CoxeterError> {
        let (rows, mut flags) = Self::rows_from_json(text)?;
        let mut matrix = Self::structural(rows, flags)?;
        let mut rejected = None;
        if flags.right_angled {
            if let Some((s, t, order)) = matrix.right_angled_violation() {
                flags.right_angled = false;
                matrix.flags = flags;
                rejected = Some(CoxeterError::RightAngledViolation { s, t, order });
            }
        }
        Ok((matrix, rejected))
    }

    fn rows_from_json(text: &str) -> Result<(Vec<Vec<Order>>, ClassFlags), CoxeterError> {
        let doc: InputDocument = serde_json::from_str(text)?;
        if doc.rank == 0 {
            return Err(CoxeterError::ZeroRank);
        }
        if doc.orders.len() != doc.rank {
            return Err(CoxeterError::RowCount {
                rank: doc.rank,
                rows: doc.orders.len(),
            });
        }
        let mut rows = Vec::with_capacity(doc.rank);
        for (s, row) in doc.orders.iter().enumerate() {
            if row.len() != doc.rank {
                return Err(CoxeterError::RowLength {
                    row: s,
                    len: row.len(),
                    rank: doc.rank,
                });
            }
            let parsed = row
                .iter()
                .enumerate()
                .map(|(t, v)| parse_entry(v, &doc.infinity_token, s, t))
                .collect::<Result<Vec<_>, _>>()?;
            rows.push(parsed);
        }
        Ok((rows, doc.flags))
    }

    fn structural(rows: Vec<Vec<Order>>, flags: ClassFlags) -> Result<Self, CoxeterError> {
        let rank = rows.len();
        if rank == 0 {
            return Err(CoxeterError::ZeroRank);
        }
        for (s, row) in rows.iter().enumerate() {
            if row.len() != rank {
                return Err(CoxeterError::RowLength {
                    row: s,
                    len: row.len(),
                    rank,
                });
            }
        }
        for s in 0..rank {
            if rows[s][s] != Order::Finite(1) {
                return Err(CoxeterError::Diagonal {
                    s,
                    value: rows[s][s],
                });
            }
            for t in s + 1..rank {
                let (st, ts) = (rows[s][t], rows[t][s]);
                if st != ts {
                    return Err(CoxeterError::Asymmetric { s, t, st, ts });
                }
                if let Order::Finite(m) = st {
                    if m < 2 {
                        return Err(CoxeterError::OffDiagonalTooSmall { s, t, value: st });
                    }
                }
            }
        }
        Ok(Self {
            rank,
            orders: rows.into_iter().flatten().collect(),
            flags,
        })
    }

    fn right_angled_violation(&self) -> Option<(usize, usize, u32)> {
        self.pairs().find_map(|(s, t)| match self.order(s, t) {
            Order::Finite(m) if m != 2 => Some((s, t, m)),
            _ => None,
        })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn flags(&self) -> ClassFlags {
        self.flags
    }

    pub fn with_flags(mut self, flags: ClassFlags) -> Result<Self, CoxeterError> {
        if flags.right_angled {
            if let Some((s, t, order)) = self.right_angled_violation() {
                return Err(CoxeterError::RightAngledViolation { s, t, order });
            }
        }
        self.flags = flags;
        Ok(self)
    }

    pub fn order(&self, s: usize, t: usize) -> Order {
        self.orders[s * self.rank + t]
    }

    /// All unordered pairs `s < t`.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.rank).flat_map(move |s| (s + 1..self.rank).map(move |t| (s, t)))
    }

    /// Distinct finite off-diagonal orders.
    pub fn finite_orders(&self) -> Vec<u32> {
        let mut out: Vec<u32> = self
            .pairs()
            .filter_map(|(s, t)| self.order(s, t).finite())
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    pub fn to_document(&self) -> MatrixDocument {
        MatrixDocument {
            rank: self.rank,
            orders: (0..self.rank)
                .map(|s| (0..self.rank).map(|t| self.order(s, t)).collect())
                .collect(),
            infinity_token: "inf",
            flags: self.flags,
        }
    }

    /// Whether the standard parabolic subgroup generated by `subset` is
    /// finite.
    ///
    /// Rank 1 and 2 are decided by finiteness of the order, rank 3 by the
    /// exact triangle-group criterion `1/a + 1/b + 1/c > 1`. Larger subsets
    /// must pass the exact test on every sub-triple and then have a positive
    /// definite cosine matrix.
    pub fn is_spherical(&self, subset: &[usize]) -> Result<bool, CoxeterError> {
        if subset.is_empty() {
            return Err(CoxeterError::EmptySubset);
        }
        let mut set = subset.to_vec();
        set.sort_unstable();
        set.dedup();
        if let Some(&index) = set.iter().find(|&&i| i >= self.rank) {
            return Err(CoxeterError::GeneratorOutOfRange {
                index,
                rank: self.rank,
            });
        }
        Ok(self.spherical_sorted(&set))
    }

    pub(crate) fn spherical_sorted(&self, set: &[usize]) -> bool {
        match *set {
            [] => false,
            [_] => true,
            [s, t] => self.order(s, t).is_finite(),
            [a, b, c] => self.triple_spherical(a, b, c),
            _ => {
                for (i, &a) in set.iter().enumerate() {
                    for (j, &b) in set.iter().enumerate().skip(i + 1) {
                        for &c in &set[j + 1..] {
                            if !self.triple_spherical(a, b, c) {
                                return false;
                            }
                        }
                    }
                }
                self.cosine_matrix_positive_definite(set)
            }
        }
    }

    fn triple_spherical(&self, a: usize, b: usize, c: usize) -> bool {
        let (Some(x), Some(y), Some(z)) = (
            self.order(a, b).finite(),
            self.order(a, c).finite(),
            self.order(b, c).finite(),
        ) else {
            return false;
        };
        let (x, y, z) = (u64::from(x), u64::from(y), u64::from(z));
        x * y + y * z + x * z > x * y * z
    }

    /// Leading principal minors via Cholesky; a pivot at or below the
    /// tolerance means not positive definite.
    fn cosine_matrix_positive_definite(&self, set: &[usize]) -> bool {
        let n = set.len();
        let mut a = vec![0.0; n * n];
        for (i, &s) in set.iter().enumerate() {
            for (j, &t) in set.iter().enumerate() {
                a[i * n + j] = if i == j {
                    1.0
                } else {
                    -self.order(s, t).cos_pi_over()
                };
            }
        }
        for j in 0..n {
            let mut pivot = a[j * n + j];
            for p in 0..j {
                pivot -= a[j * n + p] * a[j * n + p];
            }
            if pivot <= SPHERICITY_TOLERANCE {
                return false;
            }
            let root = pivot.sqrt();
            a[j * n + j] = root;
            for i in j + 1..n {
                let mut v = a[i * n + j];
                for p in 0..j {
                    v -= a[i * n + p] * a[j * n + p];
                }
                a[i * n + j] = v / root;
            }
        }
        true
    }
}

fn parse_entry(value: &Value, infinity: &str, s: usize, t: usize) -> Result<Order, CoxeterError> {
    let bad = || CoxeterError::BadEntry {
        s,
        t,
        entry: value.to_string(),
    };
    match value {
        Value::String(token) if token == infinity => Ok(Order::Infinite),
        Value::Number(n) => n
            .as_u64()
            .and_then(|m| u32::try_from(m).ok())
            .map(Order::Finite)
            .ok_or_else(bad),
        _ => Err(bad()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn matrix(rank: usize, order: impl FnMut(usize, usize) -> Order) -> CoxeterMatrix {
        CoxeterMatrix::from_fn(rank, ClassFlags::default(), order).unwrap()
    }

    fn triangle(a: u32, b: u32, c: u32) -> CoxeterMatrix {
        matrix(3, |s, t| match (s, t) {
            (0, 1) => Order::Finite(a),
            (0, 2) => Order::Finite(b),
            _ => Order::Finite(c),
        })
    }

    #[test]
    fn minimal_system_parses() {
        let m = parse_coxeter_input(r#"{"rank": 1, "orders": [[1]]}"#).unwrap();
        assert_eq!(m.rank(), 1);
        assert_eq!(m.flags(), ClassFlags::default());
    }

    #[test]
    fn dodecahedron_fixture_is_right_angled() {
        let m = fixtures::dodecahedron();
        assert_eq!(m.rank(), 12);
        assert!(m.flags().right_angled);
        assert_eq!(m.finite_orders(), vec![2]);
        let finite = m
            .pairs()
            .filter(|&(s, t)| m.order(s, t).is_finite())
            .count();
        assert_eq!(finite, 30);
    }

    #[test]
    fn asymmetric_matrix_is_rejected() {
        let text = r#"{"rank": 2, "orders": [[1, 3], [4, 1]]}"#;
        assert!(matches!(
            parse_coxeter_input(text),
            Err(CoxeterError::Asymmetric { s: 0, t: 1, .. })
        ));
    }

    #[test]
    fn structural_errors() {
        let diag = r#"{"rank": 2, "orders": [[2, 3], [3, 1]]}"#;
        assert!(matches!(
            parse_coxeter_input(diag),
            Err(CoxeterError::Diagonal { s: 0, .. })
        ));
        let small = r#"{"rank": 2, "orders": [[1, 1], [1, 1]]}"#;
        assert!(matches!(
            parse_coxeter_input(small),
            Err(CoxeterError::OffDiagonalTooSmall { .. })
        ));
        let token = r#"{"rank": 2, "orders": [[1, "oo"], ["oo", 1]], "infinity_token": "oo"}"#;
        assert_eq!(
            parse_coxeter_input(token).unwrap().order(0, 1),
            Order::Infinite
        );
        let wrong_token =
            r#"{"rank": 2, "orders": [[1, "inf"], ["inf", 1]], "infinity_token": "oo"}"#;
        assert!(matches!(
            parse_coxeter_input(wrong_token),
            Err(CoxeterError::BadEntry { .. })
        ));
        let rows = r#"{"rank": 3, "orders": [[1, 2], [2, 1]]}"#;
        assert!(matches!(
            parse_coxeter_input(rows),
            Err(CoxeterError::RowCount { .. })
        ));
        assert!(parse_coxeter_input("not json").is_err());
    }

    #[test]
    fn right_angled_flag_checked() {
        let text = r#"{"rank": 2, "orders": [[1, 3], [3, 1]], "flags": {"right_angled": true}}"#;
        let err = parse_coxeter_input(text).unwrap_err();
        assert!(err.is_validation());
        let (m, rejected) = CoxeterMatrix::from_json_lenient(text).unwrap();
        assert!(!m.flags().right_angled);
        assert!(matches!(
            rejected,
            Some(CoxeterError::RightAngledViolation {
                s: 0,
                t: 1,
                order: 3
            })
        ));
        // infinite orders are compatible with right-angledness
        let ok =
            r#"{"rank": 2, "orders": [[1, "inf"], ["inf", 1]], "flags": {"right_angled": true}}"#;
        assert!(parse_coxeter_input(ok).unwrap().flags().right_angled);
    }

    #[test]
    fn singletons_and_pairs() {
        let m = matrix(3, |s, _| {
            if s == 0 {
                Order::Infinite
            } else {
                Order::Finite(7)
            }
        });
        for s in 0..3 {
            assert!(m.is_spherical(&[s]).unwrap());
        }
        assert!(!m.is_spherical(&[0, 1]).unwrap());
        assert!(m.is_spherical(&[1, 2]).unwrap());
        assert!(matches!(
            m.is_spherical(&[]),
            Err(CoxeterError::EmptySubset)
        ));
        assert!(matches!(
            m.is_spherical(&[3]),
            Err(CoxeterError::GeneratorOutOfRange { index: 3, .. })
        ));
    }

    #[test]
    fn triangle_groups() {
        assert!(triangle(2, 3, 5).is_spherical(&[0, 1, 2]).unwrap());
        assert!(!triangle(2, 3, 6).is_spherical(&[0, 1, 2]).unwrap());
        assert!(triangle(2, 3, 3).is_spherical(&[0, 1, 2]).unwrap());
        assert!(triangle(2, 2, 100).is_spherical(&[0, 1, 2]).unwrap());
        assert!(!triangle(3, 3, 3).is_spherical(&[0, 1, 2]).unwrap());
        assert!(!triangle(2, 4, 4).is_spherical(&[0, 1, 2]).unwrap());
    }

    #[test]
    fn cosine_minors_agree_with_triangle_criterion() {
        // Oracle: the exact rank-3 criterion. The float route must agree on
        // every small triangle group.
        for a in 2..9 {
            for b in 2..9 {
                for c in 2..9 {
                    let m = triangle(a, b, c);
                    assert_eq!(
                        m.cosine_matrix_positive_definite(&[0, 1, 2]),
                        m.triple_spherical(0, 1, 2),
                        "({a},{b},{c})"
                    );
                }
            }
        }
    }

    #[test]
    fn rank_four_subsets() {
        let commuting = matrix(4, |_, _| Order::Finite(2));
        assert!(commuting.is_spherical(&[0, 1, 2, 3]).unwrap());
        // A4 (linear 3-3-3) is finite; affine A3 (a 4-cycle of 3s) is not
        let a4 = matrix(4, |s, t| {
            if t == s + 1 {
                Order::Finite(3)
            } else {
                Order::Finite(2)
            }
        });
        assert!(a4.is_spherical(&[0, 1, 2, 3]).unwrap());
        let affine = matrix(4, |s, t| {
            if t == s + 1 || (s, t) == (0, 3) {
                Order::Finite(3)
            } else {
                Order::Finite(2)
            }
        });
        assert!(!affine.is_spherical(&[0, 1, 2, 3]).unwrap());
        // H4 finite, the Lanner [5,3,5] tetrahedron is not
        let h4 = matrix(4, |s, t| match (s, t) {
            (0, 1) => Order::Finite(5),
            (1, 2) | (2, 3) => Order::Finite(3),
            _ => Order::Finite(2),
        });
        assert!(h4.is_spherical(&[0, 1, 2, 3]).unwrap());
        assert!(!fixtures::lanner_535().is_spherical(&[0, 1, 2, 3]).unwrap());
    }
}
