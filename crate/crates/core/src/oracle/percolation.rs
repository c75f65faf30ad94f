//! Bernoulli bond and site percolation on Cayley balls with free boundary.
//!
//! Every edge (bond mode) or vertex (site mode) gets one uniform from a
//! ChaCha8 stream keyed by `(seed, sample index)`, drawn in canonical order.
//! An element is open at parameter `p` iff its uniform is below `p`, so all
//! grid points of a sweep share one coupled configuration per sample.

use std::fmt;
use std::str::FromStr;

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};
use rayon::prelude::*;
use serde::Serialize;

use super::OracleError;
use crate::coxeter::CayleyBall;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PercolationMode {
    Bond,
    Site,
}

impl fmt::Display for PercolationMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PercolationMode::Bond => "bond",
            PercolationMode::Site => "site",
        })
    }
}

impl FromStr for PercolationMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "bond" => Ok(PercolationMode::Bond),
            "site" => Ok(PercolationMode::Site),
            _ => Err(format!("unknown percolation mode {s:?}")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ClusterSummary {
    pub root_cluster_size: usize,
    pub root_touches_boundary: bool,
    pub boundary_clusters: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PercolationSample {
    pub p: f64,
    pub mode: PercolationMode,
    pub seed: u64,
    pub sample_index: u64,
    /// Open flag per edge (bond, canonical edge order) or per vertex (site).
    pub open: Vec<bool>,
    /// Smallest vertex index of each vertex's cluster; `None` for closed
    /// sites.
    pub cluster: Vec<Option<u32>>,
    pub summary: ClusterSummary,
}

fn uniforms(seed: u64, sample_index: u64, n: usize) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(sample_index);
    (0..n)
        .map(|_| (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64))
        .collect()
}

fn check_p(p: f64) -> Result<(), OracleError> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(OracleError::ProbabilityOutOfRange(p))
    }
}

struct UnionFind {
    parent: Vec<u32>,
    size: Vec<u32>,
    boundary: Vec<bool>,
    boundary_clusters: usize,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        Self {
            parent: (0..n as u32).collect(),
            size: vec![1; n],
            boundary: vec![false; n],
            boundary_clusters: 0,
        }
    }

    fn find(&mut self, mut v: usize) -> usize {
        while self.parent[v] as usize != v {
            let grand = self.parent[self.parent[v] as usize];
            self.parent[v] = grand;
            v = grand as usize;
        }
        v
    }

    fn mark_boundary(&mut self, v: usize) {
        let r = self.find(v);
        if !self.boundary[r] {
            self.boundary[r] = true;
            self.boundary_clusters += 1;
        }
    }

    fn union(&mut self, a: usize, b: usize) {
        let (mut ra, mut rb) = (self.find(a), self.find(b));
        if ra == rb {
            return;
        }
        if self.size[ra] < self.size[rb] {
            std::mem::swap(&mut ra, &mut rb);
        }
        self.parent[rb] = ra as u32;
        self.size[ra] += self.size[rb];
        if self.boundary[ra] && self.boundary[rb] {
            self.boundary_clusters -= 1;
        }
        self.boundary[ra] |= self.boundary[rb];
    }

    fn root_summary(&mut self) -> ClusterSummary {
        let r = self.find(0);
        ClusterSummary {
            root_cluster_size: self.size[r] as usize,
            root_touches_boundary: self.boundary[r],
            boundary_clusters: self.boundary_clusters,
        }
    }
}

/// Coupled configuration of one sample: elements sorted by their uniform.
struct Coupling<'a> {
    ball: &'a CayleyBall,
    mode: PercolationMode,
    edges: &'a [(usize, usize)],
    boundary_start: usize,
    uniforms: Vec<f64>,
}

impl<'a> Coupling<'a> {
    fn new(
        ball: &'a CayleyBall,
        edges: &'a [(usize, usize)],
        mode: PercolationMode,
        seed: u64,
        sample_index: u64,
    ) -> Self {
        let n = match mode {
            PercolationMode::Bond => edges.len(),
            PercolationMode::Site => ball.len(),
        };
        Self {
            ball,
            mode,
            edges,
            boundary_start: ball.sphere(ball.radius()).start,
            uniforms: uniforms(seed, sample_index, n),
        }
    }

    fn is_boundary(&self, v: usize) -> bool {
        v >= self.boundary_start
    }

    fn is_open(&self, i: usize, p: f64) -> bool {
        (self.mode == PercolationMode::Site && i == 0) || self.uniforms[i] < p
    }

    /// Initial state before any element is opened.
    fn start(&self) -> (UnionFind, Vec<bool>) {
        let n = self.ball.len();
        let mut uf = UnionFind::new(n);
        let mut open_site = vec![false; n];
        match self.mode {
            PercolationMode::Bond => {
                for v in self.boundary_start..n {
                    uf.mark_boundary(v);
                }
                open_site.fill(true);
            }
            PercolationMode::Site => {
                open_site[0] = true;
                if self.is_boundary(0) {
                    uf.mark_boundary(0);
                }
            }
        }
        (uf, open_site)
    }

    fn open_element(&self, i: usize, uf: &mut UnionFind, open_site: &mut [bool]) {
        match self.mode {
            PercolationMode::Bond => {
                let (a, b) = self.edges[i];
                uf.union(a, b);
            }
            PercolationMode::Site => {
                if open_site[i] {
                    return;
                }
                open_site[i] = true;
                if self.is_boundary(i) {
                    uf.mark_boundary(i);
                }
                for (_, u) in self.ball.neighbors(i) {
                    if open_site[u] {
                        uf.union(i, u);
                    }
                }
            }
        }
    }

    /// Summaries at each `p` of an ascending grid.
    fn sweep(&self, sorted_grid: &[f64]) -> Vec<ClusterSummary> {
        let mut order: Vec<usize> = (0..self.uniforms.len()).collect();
        order.sort_by(|&a, &b| {
            self.uniforms[a]
                .total_cmp(&self.uniforms[b])
                .then(a.cmp(&b))
        });
        let (mut uf, mut open_site) = self.start();
        let mut next = 0;
        sorted_grid
            .iter()
            .map(|&p| {
                while next < order.len() && self.uniforms[order[next]] < p {
                    self.open_element(order[next], &mut uf, &mut open_site);
                    next += 1;
                }
                uf.root_summary()
            })
            .collect()
    }
}

fn canonical_edges(ball: &CayleyBall) -> Vec<(usize, usize)> {
    ball.edges().map(|(u, v, _)| (u, v)).collect()
}

pub fn percolation_sample(
    ball: &CayleyBall,
    p: f64,
    mode: PercolationMode,
    seed: u64,
) -> Result<PercolationSample, OracleError> {
    percolation_sample_indexed(ball, p, mode, seed, 0)
}

/// Sample `sample_index` of the stream used by [`percolation_sweep`].
pub fn percolation_sample_indexed(
    ball: &CayleyBall,
    p: f64,
    mode: PercolationMode,
    seed: u64,
    sample_index: u64,
) -> Result<PercolationSample, OracleError> {
    check_p(p)?;
    let edges = canonical_edges(ball);
    let coupling = Coupling::new(ball, &edges, mode, seed, sample_index);
    let (mut uf, mut open_site) = coupling.start();
    let open: Vec<bool> = (0..coupling.uniforms.len())
        .map(|i| coupling.is_open(i, p))
        .collect();
    for (i, _) in open.iter().enumerate().filter(|&(_, &o)| o) {
        coupling.open_element(i, &mut uf, &mut open_site);
    }
    let summary = uf.root_summary();
    let mut smallest = vec![u32::MAX; ball.len()];
    for v in 0..ball.len() {
        if open_site[v] {
            let r = uf.find(v);
            smallest[r] = smallest[r].min(v as u32);
        }
    }
    let cluster = (0..ball.len())
        .map(|v| open_site[v].then(|| smallest[uf.find(v)]))
        .collect();
    Ok(PercolationSample {
        p,
        mode,
        seed,
        sample_index,
        open,
        cluster,
        summary,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepPoint {
    pub p: f64,
    pub theta_hat: f64,
    pub mean_boundary_clusters: f64,
    pub samples: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepResult {
    pub mode: PercolationMode,
    pub seed: u64,
    pub radius: usize,
    pub points: Vec<SweepPoint>,
}

impl SweepResult {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("p,theta_hat,mean_boundary_clusters,samples\n");
        for pt in &self.points {
            out.push_str(&format!(
                "{},{},{},{}\n",
                pt.p, pt.theta_hat, pt.mean_boundary_clusters, pt.samples
            ));
        }
        out
    }
}

#[derive(Debug, Clone, Copy)]
pub struct SweepOptions {
    pub samples: u64,
    pub mode: PercolationMode,
    pub seed: u64,
    /// Worker threads; `0` uses the rayon default.
    pub workers: usize,
}

/// `n` evenly spaced points from `a` to `b` inclusive.
pub fn linear_grid(a: f64, b: f64, n: usize) -> Result<Vec<f64>, OracleError> {
    match n {
        0 => Err(OracleError::EmptyGrid),
        1 => Ok(vec![a]),
        _ => Ok((0..n)
            .map(|i| {
                if i == n - 1 {
                    b
                } else {
                    a + (b - a) * i as f64 / (n - 1) as f64
                }
            })
            .collect()),
    }
}

pub fn percolation_sweep(
    ball: &CayleyBall,
    grid: &[f64],
    options: SweepOptions,
) -> Result<SweepResult, OracleError> {
    if grid.is_empty() {
        return Err(OracleError::EmptyGrid);
    }
    if options.samples == 0 {
        return Err(OracleError::ZeroSamples);
    }
    for &p in grid {
        check_p(p)?;
    }
    let mut order: Vec<usize> = (0..grid.len()).collect();
    order.sort_by(|&a, &b| grid[a].total_cmp(&grid[b]));
    let sorted: Vec<f64> = order.iter().map(|&i| grid[i]).collect();
    let edges = canonical_edges(ball);

    let run = |sample: u64| -> Vec<(u64, u64)> {
        Coupling::new(ball, &edges, options.mode, options.seed, sample)
            .sweep(&sorted)
            .into_iter()
            .map(|s| {
                (
                    u64::from(s.root_touches_boundary),
                    s.boundary_clusters as u64,
                )
            })
            .collect()
    };
    let merge = |mut a: Vec<(u64, u64)>, b: Vec<(u64, u64)>| {
        for (x, y) in a.iter_mut().zip(b) {
            x.0 += y.0;
            x.1 += y.1;
        }
        a
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(options.workers)
        .build()
        .map_err(|e| OracleError::ThreadPool(e.to_string()))?;
    let totals = pool.install(|| {
        (0..options.samples)
            .into_par_iter()
            .map(run)
            .reduce(|| vec![(0, 0); sorted.len()], merge)
    });

    let mut points = vec![None; grid.len()];
    for (slot, &(hits, clusters)) in order.iter().zip(&totals) {
        let n = options.samples as f64;
        points[*slot] = Some(SweepPoint {
            p: grid[*slot],
            theta_hat: hits as f64 / n,
            mean_boundary_clusters: clusters as f64 / n,
            samples: options.samples,
        });
    }
    Ok(SweepResult {
        mode: options.mode,
        seed: options.seed,
        radius: ball.radius(),
        points: points.into_iter().map(Option::unwrap).collect(),
    })
}
