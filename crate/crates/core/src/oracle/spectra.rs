//! Exact counts of closed walks, non-backtracking closed walks and
//! self-avoiding cycles through the root.

use serde::Serialize;

use super::{OracleError, RootedGraph};

/// Default cap on the length of enumerated self-avoiding cycles.
pub const DEFAULT_SELF_AVOIDING_MAX: usize = 8;

#[derive(Debug, Clone, Copy)]
pub struct SpectraOptions {
    pub self_avoiding_max: usize,
}

impl Default for SpectraOptions {
    fn default() -> Self {
        Self {
            self_avoiding_max: DEFAULT_SELF_AVOIDING_MAX,
        }
    }
}

/// `C_n`, `a*_n` and `a_n` at the root for `n = 0..=n_max`.
///
/// `a*_n` counts closed walks with no immediate reversal along the walk; a
/// reversal joining the last step to the first is allowed. `a_n` counts
/// oriented self-avoiding cycles through the root, with `a_0 = a_1 = a_2 = 0`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WalkSpectra {
    pub n_max: usize,
    pub degree: usize,
    pub closed_walks: Vec<u128>,
    pub nonbacktracking: Vec<u128>,
    pub self_avoiding: Vec<Option<u128>>,
    pub validity: String,
}

impl WalkSpectra {
    /// Whether `a_n <= a*_n <= C_n` wherever `a_n` was computed.
    pub fn chain_holds(&self) -> bool {
        (0..=self.n_max).all(|n| {
            let c = self.closed_walks[n];
            let nb = self.nonbacktracking[n];
            nb <= c && self.self_avoiding[n].is_none_or(|a| a <= nb)
        })
    }
}

pub fn count_walk_spectra(
    graph: &RootedGraph,
    n_max: usize,
    options: SpectraOptions,
) -> Result<WalkSpectra, OracleError> {
    let half = n_max.div_ceil(2);
    let k = graph.regular_degree_within(half)?;
    if (k as u128).checked_pow(n_max as u32).is_none()
        || (k as u64).checked_pow(half as u32).is_none()
    {
        return Err(OracleError::Overflow { k, n_max });
    }
    let region = graph.prefix_len(half);
    let edges = graph.edge_range(region.saturating_sub(1)).end;

    // walks[j][v]: walks of length j from the root to v.
    let mut walks: Vec<Vec<u64>> = vec![vec![0; region]];
    walks[0][0] = 1;
    for j in 1..=half {
        let prev = &walks[j - 1];
        let mut next = vec![0u64; region];
        for (v, slot) in next.iter_mut().enumerate().take(graph.prefix_len(j)) {
            *slot = graph
                .neighbors(v)
                .iter()
                .filter(|&&u| (u as usize) < region)
                .map(|&u| prev[u as usize])
                .sum();
        }
        walks.push(next);
    }

    // last_edge[j][e]: non-backtracking walks of length j whose last step
    // is the directed edge e.
    let mut last_edge: Vec<Vec<u64>> = vec![vec![0; edges]];
    if half >= 1 {
        let mut first = vec![0u64; edges];
        for e in graph.edge_range(0) {
            first[e] = 1;
        }
        last_edge.push(first);
    }
    for j in 2..=half {
        let prev = &last_edge[j - 1];
        let mut next = vec![0u64; edges];
        for v in 0..graph.prefix_len(j - 1) {
            let into = incoming(graph, prev, v);
            for e in graph.edge_range(v) {
                let back = graph.reverse(e).map_or(0, |r| prev[r]);
                next[e] = into - back;
            }
        }
        last_edge.push(next);
    }

    let mut closed_walks = Vec::with_capacity(n_max + 1);
    let mut nonbacktracking = Vec::with_capacity(n_max + 1);
    for n in 0..=n_max {
        let (a, b) = (n / 2, n - n / 2);
        let c: u128 = (0..graph.prefix_len(a))
            .map(|v| u128::from(walks[a][v]) * u128::from(walks[b][v]))
            .sum();
        closed_walks.push(c);
        let nb = match n {
            0 => 1,
            1 => 0,
            _ => (0..graph.prefix_len(a))
                .map(|v| {
                    let ia = u128::from(incoming(graph, &last_edge[a], v));
                    let ib = u128::from(incoming(graph, &last_edge[b], v));
                    let same: u128 = graph
                        .edge_range(v)
                        .filter_map(|e| graph.reverse(e))
                        .filter(|&r| r < edges)
                        .map(|r| u128::from(last_edge[a][r]) * u128::from(last_edge[b][r]))
                        .sum();
                    ia * ib - same
                })
                .sum(),
        };
        nonbacktracking.push(nb);
    }

    let sa_len = n_max.min(options.self_avoiding_max);
    let counts = self_avoiding_cycles(graph, sa_len);
    let self_avoiding = (0..=n_max)
        .map(|n| (n <= sa_len).then(|| counts[n]))
        .collect();

    Ok(WalkSpectra {
        n_max,
        degree: k,
        closed_walks,
        nonbacktracking,
        self_avoiding,
        validity: format!(
            "exact for n <= {n_max}: every vertex within distance {half} has its full {k} neighbours"
        ),
    })
}

/// Sum of `values` over the edges pointing into `v`.
fn incoming(graph: &RootedGraph, values: &[u64], v: usize) -> u64 {
    graph
        .edge_range(v)
        .filter_map(|e| graph.reverse(e))
        .filter(|&r| r < values.len())
        .map(|r| values[r])
        .sum()
}

/// Oriented self-avoiding cycles through the root, by length up to `max_len`.
fn self_avoiding_cycles(graph: &RootedGraph, max_len: usize) -> Vec<u128> {
    let mut counts = vec![0u128; max_len + 1];
    if max_len < 3 {
        return counts;
    }
    let region = graph.prefix_len(max_len / 2);
    let mut on_path = vec![false; region];
    on_path[0] = true;
    extend_path(graph, 0, 0, max_len, &mut on_path, &mut counts);
    counts
}

fn extend_path(
    graph: &RootedGraph,
    v: usize,
    depth: usize,
    max_len: usize,
    on_path: &mut [bool],
    counts: &mut [u128],
) {
    let next_depth = depth + 1;
    for &u in graph.neighbors(v) {
        let u = u as usize;
        if u == 0 {
            if next_depth >= 3 {
                counts[next_depth] += 1;
            }
            continue;
        }
        if next_depth < max_len && graph.dist(u) <= max_len - next_depth && !on_path[u] {
            on_path[u] = true;
            extend_path(graph, u, next_depth, max_len, on_path, counts);
            on_path[u] = false;
        }
    }
}
