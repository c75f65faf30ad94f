use std::collections::VecDeque;

use super::OracleError;
use crate::coxeter::CayleyBall;

const NONE: u32 = u32::MAX;

/// A finite simple graph with a root, stored in CSR form with vertices
/// relabelled in BFS order from the root (so the root is vertex `0`).
///
/// `complete_radius` is the depth below which adjacency lists are known to
/// be the true neighbourhoods; for a ball of radius `R` it is `R`.
#[derive(Debug, Clone)]
pub struct RootedGraph {
    offsets: Vec<usize>,
    targets: Vec<u32>,
    reverse: Vec<u32>,
    dist: Vec<u32>,
    layer_offsets: Vec<usize>,
    complete_radius: usize,
}

impl RootedGraph {
    /// Build from adjacency lists. Only the component of `root` is kept.
    pub fn from_adjacency(
        adj: &[Vec<usize>],
        root: usize,
        complete_radius: Option<usize>,
    ) -> Result<Self, OracleError> {
        let n = adj.len();
        if root >= n {
            return Err(OracleError::InvalidGraph(format!(
                "root {root} out of range"
            )));
        }
        for (v, list) in adj.iter().enumerate() {
            let mut sorted = list.clone();
            sorted.sort_unstable();
            if sorted.windows(2).any(|w| w[0] == w[1]) {
                return Err(OracleError::InvalidGraph(format!(
                    "multi-edge at vertex {v}"
                )));
            }
            for &u in list {
                if u >= n || u == v {
                    return Err(OracleError::InvalidGraph(format!(
                        "bad neighbour {u} of {v}"
                    )));
                }
                if !adj[u].contains(&v) {
                    return Err(OracleError::InvalidGraph(format!(
                        "edge {v}-{u} not symmetric"
                    )));
                }
            }
        }
        let mut order = vec![root];
        let mut label = vec![NONE; n];
        let mut dist = vec![0u32];
        label[root] = 0;
        let mut queue = VecDeque::from([root]);
        while let Some(v) = queue.pop_front() {
            for &u in &adj[v] {
                if label[u] == NONE {
                    label[u] = order.len() as u32;
                    dist.push(dist[label[v] as usize] + 1);
                    order.push(u);
                    queue.push_back(u);
                }
            }
        }
        let lists: Vec<Vec<u32>> = order
            .iter()
            .map(|&v| adj[v].iter().map(|&u| label[u]).collect())
            .collect();
        Ok(Self::from_lists(
            lists,
            dist,
            complete_radius.unwrap_or(usize::MAX),
        ))
    }

    fn from_lists(lists: Vec<Vec<u32>>, dist: Vec<u32>, complete_radius: usize) -> Self {
        let mut offsets = Vec::with_capacity(lists.len() + 1);
        offsets.push(0);
        let mut targets = Vec::new();
        for list in &lists {
            targets.extend_from_slice(list);
            offsets.push(targets.len());
        }
        let mut reverse = vec![NONE; targets.len()];
        for v in 0..lists.len() {
            for e in offsets[v]..offsets[v + 1] {
                let u = targets[e] as usize;
                if let Some(pos) = targets[offsets[u]..offsets[u + 1]]
                    .iter()
                    .position(|&w| w as usize == v)
                {
                    reverse[e] = (offsets[u] + pos) as u32;
                }
            }
        }
        let mut layer_offsets = vec![0];
        for (i, &d) in dist.iter().enumerate() {
            while layer_offsets.len() <= d as usize {
                layer_offsets.push(i);
            }
        }
        layer_offsets.push(dist.len());
        Self {
            offsets,
            targets,
            reverse,
            dist,
            layer_offsets,
            complete_radius,
        }
    }

    /// The Cayley ball as a rooted graph; vertex labels are preserved.
    pub fn from_ball(ball: &CayleyBall) -> Self {
        let lists = (0..ball.len())
            .map(|v| ball.neighbors(v).map(|(_, u)| u as u32).collect())
            .collect();
        let dist = (0..ball.len()).map(|v| ball.length(v) as u32).collect();
        Self::from_lists(lists, dist, ball.radius())
    }

    /// Complete graph on `n` vertices, rooted at `0`.
    pub fn complete(n: usize) -> Self {
        let adj: Vec<Vec<usize>> = (0..n)
            .map(|v| (0..n).filter(|&u| u != v).collect())
            .collect();
        Self::from_adjacency(&adj, 0, None).expect("complete graph is simple")
    }

    /// Ball of radius `radius` around a vertex of the `k`-regular tree.
    pub fn regular_tree_ball(k: usize, radius: usize) -> Self {
        let mut adj: Vec<Vec<usize>> = vec![Vec::new()];
        let mut frontier = vec![0usize];
        for depth in 0..radius {
            let mut next = Vec::new();
            for &v in &frontier {
                let children = if depth == 0 { k } else { k - 1 };
                for _ in 0..children {
                    let u = adj.len();
                    adj.push(vec![v]);
                    adj[v].push(u);
                    next.push(u);
                }
            }
            frontier = next;
        }
        Self::from_adjacency(&adj, 0, Some(radius)).expect("tree is simple")
    }

    pub fn len(&self) -> usize {
        self.dist.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dist.is_empty()
    }

    pub fn degree(&self, v: usize) -> usize {
        self.offsets[v + 1] - self.offsets[v]
    }

    pub fn neighbors(&self, v: usize) -> &[u32] {
        &self.targets[self.offsets[v]..self.offsets[v + 1]]
    }

    pub(crate) fn edge_range(&self, v: usize) -> std::ops::Range<usize> {
        self.offsets[v]..self.offsets[v + 1]
    }

    #[cfg(test)]
    pub(crate) fn target(&self, e: usize) -> usize {
        self.targets[e] as usize
    }

    /// CSR position of the reverse of edge `e`, if its head is stored.
    pub(crate) fn reverse(&self, e: usize) -> Option<usize> {
        match self.reverse[e] {
            NONE => None,
            r => Some(r as usize),
        }
    }

    pub fn dist(&self, v: usize) -> usize {
        self.dist[v] as usize
    }

    pub fn complete_radius(&self) -> usize {
        self.complete_radius
    }

    /// Number of vertices at distance at most `d` from the root.
    pub fn prefix_len(&self, d: usize) -> usize {
        self.layer_offsets.get(d + 1).copied().unwrap_or(self.len())
    }

    /// Common degree of every vertex within distance `depth`, after checking
    /// that their neighbourhoods are complete.
    pub fn regular_degree_within(&self, depth: usize) -> Result<usize, OracleError> {
        if self.complete_radius != usize::MAX && depth >= self.complete_radius {
            return Err(OracleError::InsufficientRadius {
                required: depth + 1,
                available: self.complete_radius,
            });
        }
        let k = self.degree(0);
        for v in 0..self.prefix_len(depth) {
            if self.degree(v) != k {
                return Err(OracleError::NotRegular {
                    vertex: v,
                    degree: self.degree(v),
                    expected: k,
                });
            }
        }
        Ok(k)
    }
}
