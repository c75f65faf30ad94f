//! The nerve: simplicial complex of spherical generator subsets.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use serde::Serialize;

use crate::coxeter::{CoxeterMatrix, Order};

/// Nonempty spherical subsets of the generators, graded by dimension
/// (a `d`-simplex has `d + 1` vertices). Every vertex is a 0-simplex.
#[derive(Debug, Clone)]
pub struct Nerve {
    rank: usize,
    simplices: Vec<Vec<Vec<usize>>>,
    edge_orders: BTreeMap<(usize, usize), u32>,
}

pub fn build_nerve(m: &CoxeterMatrix) -> Nerve {
    let rank = m.rank();
    let mut simplices: Vec<Vec<Vec<usize>>> = vec![(0..rank).map(|s| vec![s]).collect()];
    loop {
        let last = simplices.last().unwrap();
        let mut next = Vec::new();
        for sigma in last {
            let top = *sigma.last().unwrap();
            for s in top + 1..rank {
                if sigma.iter().all(|&t| m.order(t, s).is_finite()) {
                    let mut tau = sigma.clone();
                    tau.push(s);
                    if m.spherical_sorted(&tau) {
                        next.push(tau);
                    }
                }
            }
        }
        if next.is_empty() {
            break;
        }
        simplices.push(next);
    }
    let edge_orders = m
        .pairs()
        .filter_map(|(s, t)| match m.order(s, t) {
            Order::Finite(o) => Some(((s, t), o)),
            Order::Infinite => None,
        })
        .collect();
    Nerve {
        rank,
        simplices,
        edge_orders,
    }
}

impl Nerve {
    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Largest simplex dimension present.
    pub fn dimension(&self) -> usize {
        self.simplices.len() - 1
    }

    /// Simplices of dimension `d`, each sorted, in lexicographic order.
    pub fn simplices(&self, d: usize) -> &[Vec<usize>] {
        self.simplices.get(d).map_or(&[], Vec::as_slice)
    }

    /// All simplices, lowest dimension first.
    pub fn all_simplices(&self) -> impl Iterator<Item = &[usize]> {
        self.simplices.iter().flatten().map(Vec::as_slice)
    }

    /// Number of `d`-simplices.
    pub fn f(&self, d: usize) -> usize {
        self.simplices(d).len()
    }

    pub fn edge_orders(&self) -> &BTreeMap<(usize, usize), u32> {
        &self.edge_orders
    }

    fn adjacency(&self) -> Vec<BTreeSet<usize>> {
        let mut adj = vec![BTreeSet::new(); self.rank];
        for &(s, t) in self.edge_orders.keys() {
            adj[s].insert(t);
            adj[t].insert(s);
        }
        adj
    }

    pub fn vertex_degrees(&self) -> Vec<usize> {
        self.adjacency().iter().map(BTreeSet::len).collect()
    }

    pub fn max_vertex_degree(&self) -> usize {
        self.vertex_degrees().into_iter().max().unwrap_or(0)
    }

    /// Whether every clique of the 1-skeleton is a simplex.
    pub fn is_flag(&self) -> bool {
        self.first_empty_clique().is_none()
    }

    /// A clique of the 1-skeleton that is not a simplex, if any.
    pub fn first_empty_clique(&self) -> Option<Vec<usize>> {
        let adj = self.adjacency();
        let present: HashSet<&[usize]> = self.all_simplices().collect();
        let mut layer: Vec<Vec<usize>> = self.simplices(1).to_vec();
        while !layer.is_empty() {
            let mut next = Vec::new();
            for clique in &layer {
                let top = *clique.last().unwrap();
                for s in top + 1..self.rank {
                    if clique.iter().all(|t| adj[*t].contains(&s)) {
                        let mut bigger = clique.clone();
                        bigger.push(s);
                        if !present.contains(bigger.as_slice()) {
                            return Some(bigger);
                        }
                        next.push(bigger);
                    }
                }
            }
            layer = next;
        }
        None
    }

    fn components(&self, adj: &[BTreeSet<usize>]) -> usize {
        let mut seen = vec![false; self.rank];
        let mut count = 0;
        for start in 0..self.rank {
            if seen[start] {
                continue;
            }
            count += 1;
            let mut stack = vec![start];
            seen[start] = true;
            while let Some(v) = stack.pop() {
                for &u in &adj[v] {
                    if !seen[u] {
                        seen[u] = true;
                        stack.push(u);
                    }
                }
            }
        }
        count
    }

    /// Reason the nerve fails to be a triangulated 2-sphere, or `None`.
    pub fn sphere_obstruction(&self) -> Option<String> {
        if self.dimension() != 2 {
            return Some(format!("dimension is {}, expected 2", self.dimension()));
        }
        let mut edge_triangles: BTreeMap<(usize, usize), usize> = self
            .simplices(1)
            .iter()
            .map(|e| ((e[0], e[1]), 0))
            .collect();
        for tri in self.simplices(2) {
            for (a, b) in [(tri[0], tri[1]), (tri[0], tri[2]), (tri[1], tri[2])] {
                *edge_triangles
                    .get_mut(&(a, b))
                    .expect("faces are simplices") += 1;
            }
        }
        if let Some((e, n)) = edge_triangles.iter().find(|&(_, &n)| n != 2) {
            return Some(format!("edge {e:?} lies in {n} triangles"));
        }
        for v in 0..self.rank {
            let mut link_adj: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
            for tri in self.simplices(2).iter().filter(|t| t.contains(&v)) {
                let others: Vec<usize> = tri.iter().copied().filter(|&u| u != v).collect();
                link_adj.entry(others[0]).or_default().push(others[1]);
                link_adj.entry(others[1]).or_default().push(others[0]);
            }
            if link_adj.len() < 3 || link_adj.values().any(|n| n.len() != 2) {
                return Some(format!("link of vertex {v} is not a cycle"));
            }
            let start = *link_adj.keys().next().unwrap();
            let (mut prev, mut cur, mut steps) = (start, link_adj[&start][0], 1);
            while cur != start {
                let next = link_adj[&cur]
                    .iter()
                    .copied()
                    .find(|&u| u != prev)
                    .unwrap_or(prev);
                prev = cur;
                cur = next;
                steps += 1;
                if steps > link_adj.len() {
                    break;
                }
            }
            if steps != link_adj.len() {
                return Some(format!("link of vertex {v} is disconnected"));
            }
        }
        if self.components(&self.adjacency()) != 1 {
            return Some("not connected".to_owned());
        }
        let chi = self.euler_characteristic();
        if chi != 2 {
            return Some(format!("Euler characteristic {chi}"));
        }
        None
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.simplices
            .iter()
            .enumerate()
            .map(|(d, s)| {
                if d % 2 == 0 {
                    s.len() as i64
                } else {
                    -(s.len() as i64)
                }
            })
            .sum()
    }

    pub fn is_connected(&self) -> bool {
        self.components(&self.adjacency()) == 1
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NerveReport {
    pub rank: usize,
    pub f_vector: Vec<usize>,
    pub euler_characteristic: i64,
    pub max_vertex_degree: usize,
    pub connected: bool,
    pub is_flag: bool,
    pub has_3_simplex: bool,
    pub is_sphere_triangulation: bool,
    pub sphere_obstruction: Option<String>,
    pub empty_clique: Option<Vec<usize>>,
}

pub fn classify_nerve(nerve: &Nerve) -> NerveReport {
    let sphere_obstruction = nerve.sphere_obstruction();
    let empty_clique = nerve.first_empty_clique();
    NerveReport {
        rank: nerve.rank(),
        f_vector: nerve.simplices.iter().map(Vec::len).collect(),
        euler_characteristic: nerve.euler_characteristic(),
        max_vertex_degree: nerve.max_vertex_degree(),
        connected: nerve.is_connected(),
        is_flag: empty_clique.is_none(),
        has_3_simplex: nerve.dimension() >= 3,
        is_sphere_triangulation: sphere_obstruction.is_none(),
        sphere_obstruction,
        empty_clique,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ValidationCheck {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

/// The four combinatorial consequences of being a compact right-angled
/// hyperbolic polyhedron: right angles, a flag 2-sphere nerve, maximum
/// degree at most `(k-1)/2`, and `k >= 12`.
pub fn validate_right_angled_compact(m: &CoxeterMatrix, nerve: &Nerve) -> Vec<ValidationCheck> {
    let report = classify_nerve(nerve);
    let k = m.rank();
    let bad_order = m.pairs().find_map(|(s, t)| {
        m.order(s, t)
            .finite()
            .filter(|&o| o != 2)
            .map(|o| (s, t, o))
    });
    let sphere = report.is_flag && report.is_sphere_triangulation;
    vec![
        ValidationCheck {
            name: "orders_right_angled",
            passed: bad_order.is_none(),
            detail: match bad_order {
                Some((s, t, o)) => format!("m({s},{t}) = {o}"),
                None => "all finite orders are 2".to_owned(),
            },
        },
        ValidationCheck {
            name: "flag_sphere_nerve",
            passed: sphere,
            detail: match (&report.empty_clique, &report.sphere_obstruction) {
                (Some(c), _) => format!("clique {c:?} is not a simplex"),
                (None, Some(why)) => why.clone(),
                (None, None) => "flag triangulation of the 2-sphere".to_owned(),
            },
        },
        ValidationCheck {
            name: "max_degree",
            passed: 2 * report.max_vertex_degree <= k.saturating_sub(1),
            detail: format!("max degree {} with k = {k}", report.max_vertex_degree),
        },
        ValidationCheck {
            name: "rank_at_least_12",
            passed: k >= 12,
            detail: format!("k = {k}"),
        },
    ]
}
