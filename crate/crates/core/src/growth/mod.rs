//! Growth series of Coxeter groups via Steinberg's formula.

mod poly;
mod rate;

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive};
use serde::Serialize;
use thiserror::Error;

use crate::coxeter::{CoxeterMatrix, Order};
use crate::nerve::Nerve;

pub use poly::IntPolynomial;
pub use rate::{
    bracket_inequality_holds, growth_lower_bound_check, growth_rate, ra_reference_growth_rate,
    ra_reference_inverse, GrowthRateResult, LowerBoundVerdict, DEFAULT_LOWER_BOUND_GRID,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GrowthError {
    #[error("bracket [0] in a product")]
    ZeroBracket,
    #[error("subset {subset:?} is not spherical")]
    NonSpherical { subset: Vec<usize> },
    #[error("spherical subset {subset:?} of size {} is not supported", subset.len())]
    UnsupportedSimplex { subset: Vec<usize> },
    #[error("finite triangle group with orders {orders:?} not recognised")]
    UnknownTriangle { orders: [u32; 3] },
    #[error("constant term {0} of the reduced numerator is not a unit")]
    NonUnitConstant(String),
    #[error("no root <= 1: 1/W has no sign change on the unit interval")]
    NoRootAtMostOne,
    #[error("1/W is already non-positive at the first grid point {0}")]
    RootBelowGrid(f64),
    #[error("rank {k} below the required minimum {required}")]
    RankTooSmall { k: usize, required: usize },
    #[error("bracket inequality precondition violated: a={a}, b={b}, d={d}, t={t}")]
    BracketPrecondition {
        a: usize,
        b: usize,
        d: usize,
        t: f64,
    },
}

/// `prod [n_i]`, rejecting `[0]`.
pub fn bracket_product(ns: &[usize]) -> Result<IntPolynomial, GrowthError> {
    if ns.contains(&0) {
        return Err(GrowthError::ZeroBracket);
    }
    Ok(IntPolynomial::bracket_product(ns))
}

/// Degrees of the finite Coxeter group generated by `subset`, as the
/// bracket list whose product is its growth polynomial.
pub fn spherical_brackets(m: &CoxeterMatrix, subset: &[usize]) -> Result<Vec<usize>, GrowthError> {
    let mut set = subset.to_vec();
    set.sort_unstable();
    set.dedup();
    if set.is_empty() || set.iter().any(|&s| s >= m.rank()) || !m.spherical_sorted(&set) {
        return Err(GrowthError::NonSpherical { subset: set });
    }
    let order = |s: usize, t: usize| match m.order(s, t) {
        Order::Finite(o) => o,
        Order::Infinite => unreachable!("spherical subsets have finite orders"),
    };
    match *set.as_slice() {
        [_] => Ok(vec![2]),
        [s, t] => Ok(vec![2, order(s, t) as usize]),
        [a, b, c] => {
            let mut orders = [order(a, b), order(a, c), order(b, c)];
            orders.sort_unstable();
            match orders {
                [2, 2, m] => Ok(vec![2, 2, m as usize]),
                [2, 3, 3] => Ok(vec![2, 3, 4]),
                [2, 3, 4] => Ok(vec![2, 4, 6]),
                [2, 3, 5] => Ok(vec![2, 6, 10]),
                _ => Err(GrowthError::UnknownTriangle { orders }),
            }
        }
        _ => Err(GrowthError::UnsupportedSimplex { subset: set }),
    }
}

pub fn spherical_growth_polynomial(
    m: &CoxeterMatrix,
    subset: &[usize],
) -> Result<IntPolynomial, GrowthError> {
    bracket_product(&spherical_brackets(m, subset)?)
}

/// One summand `(-1)^|T| / W_T(1/t)` of Steinberg's formula.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SteinbergTerm {
    pub subset: Vec<usize>,
    pub sign: i8,
    pub brackets: Vec<usize>,
    pub polynomial: IntPolynomial,
}

/// `1/W(t)` as a term list and as a reduced fraction `p/q` with
/// `p(0) = q(0) = 1`.
#[derive(Debug, Clone, Serialize)]
pub struct InverseGrowth {
    pub rank: usize,
    pub terms: Vec<SteinbergTerm>,
    pub numerator: IntPolynomial,
    pub denominator: IntPolynomial,
}

/// Multiplicity of each cyclotomic factor `Phi_d`, `d > 1`, in `prod [n_i]`.
fn cyclotomic_multiplicities(brackets: &[usize]) -> BTreeMap<usize, usize> {
    let mut out = BTreeMap::new();
    for &n in brackets {
        for d in 2..=n {
            if n % d == 0 {
                *out.entry(d).or_insert(0) += 1;
            }
        }
    }
    out
}

fn cyclotomic_product(exponents: &BTreeMap<usize, usize>) -> IntPolynomial {
    exponents
        .iter()
        .fold(IntPolynomial::one(), |acc, (&d, &e)| {
            (0..e).fold(acc, |acc, _| acc * IntPolynomial::cyclotomic(d))
        })
}

pub fn steinberg_inverse_growth(
    m: &CoxeterMatrix,
    nerve: &Nerve,
) -> Result<InverseGrowth, GrowthError> {
    if let Some(big) = nerve.simplices(3).first() {
        return Err(GrowthError::UnsupportedSimplex {
            subset: big.clone(),
        });
    }
    let mut terms = vec![SteinbergTerm {
        subset: Vec::new(),
        sign: 1,
        brackets: Vec::new(),
        polynomial: IntPolynomial::one(),
    }];
    for simplex in nerve.all_simplices() {
        let brackets = spherical_brackets(m, simplex)?;
        terms.push(SteinbergTerm {
            subset: simplex.to_vec(),
            sign: if simplex.len() % 2 == 0 { 1 } else { -1 },
            polynomial: bracket_product(&brackets)?,
            brackets,
        });
    }

    // Common denominator: the lcm of all W_T, assembled from cyclotomic
    // factors. Since W_T is palindromic, 1/W_T(1/t) = t^deg / W_T(t).
    let mut lcm: BTreeMap<usize, usize> = BTreeMap::new();
    let term_factors: Vec<_> = terms
        .iter()
        .map(|term| cyclotomic_multiplicities(&term.brackets))
        .collect();
    for factors in &term_factors {
        for (&d, &e) in factors {
            let slot = lcm.entry(d).or_insert(0);
            *slot = (*slot).max(e);
        }
    }
    let mut numerator = IntPolynomial::zero();
    for (term, factors) in terms.iter().zip(&term_factors) {
        let cofactor: BTreeMap<usize, usize> = lcm
            .iter()
            .map(|(&d, &e)| (d, e - factors.get(&d).copied().unwrap_or(0)))
            .collect();
        let deg = term.polynomial.degree().unwrap_or(0);
        let summand = cyclotomic_product(&cofactor)
            .shift(deg)
            .scale(&BigInt::from(term.sign));
        numerator = &numerator + &summand;
    }
    for (&d, e) in lcm.iter_mut() {
        let phi = IntPolynomial::cyclotomic(d);
        while *e > 0 {
            match numerator.div_exact(&phi) {
                Some(q) => {
                    numerator = q;
                    *e -= 1;
                }
                None => break,
            }
        }
    }
    let denominator = cyclotomic_product(&lcm);
    Ok(InverseGrowth {
        rank: m.rank(),
        terms,
        numerator,
        denominator,
    })
}

impl InverseGrowth {
    /// `1/W(t)` from the reduced fraction.
    pub fn eval(&self, t: f64) -> f64 {
        if t == 0.0 {
            return 1.0;
        }
        self.numerator.eval_f64(t) / self.denominator.eval_f64(t)
    }

    /// `1/W(t)` summed term by term, each `W_T` evaluated at `1/t`.
    pub fn eval_terms(&self, t: f64) -> f64 {
        if t == 0.0 {
            return 1.0;
        }
        let inv = 1.0 / t;
        self.terms
            .iter()
            .map(|term| f64::from(term.sign) / term.polynomial.eval_f64(inv))
            .sum()
    }

    /// Number of simplices of each size among the terms, indexed by `|T|`.
    pub fn face_counts(&self) -> Vec<usize> {
        let mut counts = Vec::new();
        for term in &self.terms {
            if counts.len() <= term.subset.len() {
                counts.resize(term.subset.len() + 1, 0);
            }
            counts[term.subset.len()] += 1;
        }
        counts
    }
}

/// Sphere and ball sizes predicted by the growth series.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SeriesCoefficients {
    #[serde(serialize_with = "decimal_strings")]
    pub sphere_sizes: Vec<BigInt>,
    #[serde(serialize_with = "decimal_strings")]
    pub ball_sizes: Vec<BigInt>,
}

fn decimal_strings<S: serde::Serializer>(values: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(values.iter().map(ToString::to_string))
}

impl SeriesCoefficients {
    pub fn sphere_sizes_u64(&self) -> Option<Vec<u64>> {
        self.sphere_sizes.iter().map(ToPrimitive::to_u64).collect()
    }

    pub fn ball_sizes_u64(&self) -> Option<Vec<u64>> {
        self.ball_sizes.iter().map(ToPrimitive::to_u64).collect()
    }
}

/// Coefficients `0..=n` of `W = q/p` and of `W/(1-t)`.
pub fn ball_size_series(ig: &InverseGrowth, n: usize) -> Result<SeriesCoefficients, GrowthError> {
    let p0 = ig.numerator.coeff(0);
    if !p0.is_one() && !(-&p0).is_one() {
        return Err(GrowthError::NonUnitConstant(p0.to_string()));
    }
    let sphere_sizes = ig
        .denominator
        .series_div(&ig.numerator, n + 1)
        .expect("unit constant term");
    let mut acc = BigInt::from(0);
    let ball_sizes = sphere_sizes
        .iter()
        .map(|c| {
            acc += c;
            acc.clone()
        })
        .collect();
    Ok(SeriesCoefficients {
        sphere_sizes,
        ball_sizes,
    })
}
