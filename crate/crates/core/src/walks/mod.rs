//! Upper bounds on the cogrowth of Cayley graphs: Gabber weights, closed
//! forms, the non-backtracking transform and regular-tree kernels.

mod gabber;
mod tree;

use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

pub use gabber::{gabber_bound_on_ball, GabberObservation, GabberParams};
pub use tree::{
    decompose_spectra, f_map, tree_green, tree_path_counts, verify_cycle_decomposition,
    CycleDecomposition, CycleDecompositionRow, TreeKernel,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BoundError {
    #[error("weights must be finite and positive, got {0:?}")]
    InvalidWeights([f64; 3]),
    #[error("ball has no interior vertices")]
    NoInteriorVertices,
    #[error("vertex {vertex} has r = {r}, outside the weight range 1..=3")]
    DescentOutOfRange { vertex: usize, r: usize },
    #[error("{lemma} bound needs k >= {required}, got k = {k}")]
    RankTooSmall {
        lemma: RhoLemma,
        k: usize,
        required: usize,
    },
    #[error("transform needs rho >= 2 sqrt(k-1) = {threshold}, got {rho}")]
    NegativeRadicand { rho: f64, threshold: f64 },
    #[error("k = {0} is below 2")]
    DegreeTooSmall(usize),
    #[error("argument {z} outside [-{radius}, {radius}]")]
    OutsideDomain { z: f64, radius: f64 },
    #[error("graph is not complete to depth {required}: {detail}")]
    InsufficientRadius { required: usize, detail: String },
    #[error(transparent)]
    Oracle(#[from] crate::oracle::OracleError),
}

/// The three Gabber-weight lemmas bounding the cogrowth `rho~`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RhoLemma {
    /// `2 sqrt(3(k-3))`, from uniform weights.
    Basic,
    /// `(k+17)/3`, from weights `(3, 3, 2)`.
    General,
    /// `k/2 + 3.1`, from weights `(5, 2, 1)`; right-angled compact only.
    RaCompact,
}

impl RhoLemma {
    pub const ALL: [RhoLemma; 3] = [RhoLemma::Basic, RhoLemma::General, RhoLemma::RaCompact];

    pub fn name(self) -> &'static str {
        match self {
            RhoLemma::Basic => "basic",
            RhoLemma::General => "general",
            RhoLemma::RaCompact => "ra_compact",
        }
    }

    pub fn min_rank(self) -> usize {
        match self {
            RhoLemma::Basic => 6,
            RhoLemma::General => 4,
            RhoLemma::RaCompact => 12,
        }
    }

    /// Closed-form value at real `k`, without precondition checks.
    pub fn value_at(self, k: f64) -> f64 {
        match self {
            RhoLemma::Basic => 2.0 * (3.0 * (k - 3.0)).sqrt(),
            RhoLemma::General => (k + 17.0) / 3.0,
            RhoLemma::RaCompact => (10.0 * k + 62.0) / 20.0,
        }
    }

    /// Gabber weights `(c1, c2, c3)` that realise the bound.
    pub fn weights(self, k: usize) -> [f64; 3] {
        match self {
            RhoLemma::Basic => [((k as f64 - 3.0) / 3.0).sqrt(); 3],
            RhoLemma::General => [3.0, 3.0, 2.0],
            RhoLemma::RaCompact => [5.0, 2.0, 1.0],
        }
    }
}

impl fmt::Display for RhoLemma {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for RhoLemma {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        RhoLemma::ALL
            .into_iter()
            .find(|l| l.name() == s)
            .ok_or_else(|| format!("unknown lemma {s:?}"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundSource {
    Lemma(RhoLemma),
    GammaStar,
    /// Largest Gabber sum seen on a finite ball: evidence, not a bound.
    ObservedSup,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundValue {
    pub value: f64,
    pub source: BoundSource,
    pub preconditions: Vec<String>,
}

pub fn rho_closed_form(k: usize, lemma: RhoLemma) -> Result<BoundValue, BoundError> {
    if k < lemma.min_rank() {
        return Err(BoundError::RankTooSmall {
            lemma,
            k,
            required: lemma.min_rank(),
        });
    }
    let mut preconditions = vec![format!("k = {k} >= {}", lemma.min_rank())];
    preconditions.push(
        match lemma {
            RhoLemma::Basic | RhoLemma::General => {
                "Cayley graph of a hyperbolic Coxeter polyhedron"
            }
            RhoLemma::RaCompact => "compact right-angled polyhedron",
        }
        .to_owned(),
    );
    Ok(BoundValue {
        value: lemma.value_at(k as f64),
        source: BoundSource::Lemma(lemma),
        preconditions,
    })
}

/// `(rho + sqrt(rho^2 - 4(k-1))) / 2`, the larger root of
/// `g + (k-1)/g = rho`.
pub fn gamma_star_bound(rho: f64, k: usize) -> Result<BoundValue, BoundError> {
    if k < 2 {
        return Err(BoundError::DegreeTooSmall(k));
    }
    let km1 = k as f64 - 1.0;
    let mut radicand = rho * rho - 4.0 * km1;
    if radicand < 0.0 {
        if radicand < -1e-12 * rho * rho || !rho.is_finite() {
            return Err(BoundError::NegativeRadicand {
                rho,
                threshold: 2.0 * km1.sqrt(),
            });
        }
        radicand = 0.0;
    }
    Ok(BoundValue {
        value: (rho + radicand.sqrt()) / 2.0,
        source: BoundSource::GammaStar,
        preconditions: vec![format!("rho = {rho} >= 2 sqrt(k-1) with k = {k}")],
    })
}
