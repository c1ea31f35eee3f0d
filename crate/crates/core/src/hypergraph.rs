//! Recovery hypergraphs and their matching, transversal and fractional
//! matching numbers.
//!
//! `ν` and `τ` are computed exactly by branch and bound over 64-bit vertex
//! masks; `μ_f` is an exact LP. Every witness can be re-checked with the
//! `validate_*` functions, which share no code with the searches.

use std::collections::{BTreeMap, HashSet};

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactmath::{rational_serde, Rational};
use crate::lp::{solve_with, LpOptions, LpOutcome, LpProblem, Relation};
use crate::recovery::RecoverySystem;

/// Exact searches use `u64` vertex masks.
pub const MAX_SEARCH_VERTICES: usize = 64;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Edge {
    /// 0-based, strictly ascending.
    pub members: Vec<usize>,
    /// 0-based data-symbol index.
    pub label: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hypergraph {
    vertex_count: usize,
    edges: Vec<Edge>,
}

impl Hypergraph {
    pub fn new(vertex_count: usize, edges: Vec<Edge>) -> Result<Self> {
        let mut seen = HashSet::new();
        for e in &edges {
            if e.members.is_empty() {
                return Err(Error::InvalidParameter("hyperedge must be nonempty".into()));
            }
            if e.members.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::InvalidParameter(format!(
                    "hyperedge {:?} is not strictly ascending",
                    e.members
                )));
            }
            if e.members.iter().any(|&v| v >= vertex_count) {
                return Err(Error::InvalidParameter(format!(
                    "hyperedge {:?} exceeds {vertex_count} vertices",
                    e.members
                )));
            }
            if !seen.insert((e.members.clone(), e.label)) {
                return Err(Error::InvalidParameter(format!(
                    "duplicate hyperedge {:?} with label {}",
                    e.members, e.label
                )));
            }
        }
        Ok(Hypergraph {
            vertex_count,
            edges,
        })
    }

    /// One vertex per generator column, one labeled edge per recovery set.
    pub fn from_recovery_system(system: &RecoverySystem) -> Self {
        let edges = system
            .per_symbol()
            .iter()
            .enumerate()
            .flat_map(|(label, sets)| {
                sets.iter().map(move |s| Edge {
                    members: s.members().to_vec(),
                    label,
                })
            })
            .collect();
        Hypergraph {
            vertex_count: system.n(),
            edges,
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// Keeps only edges whose label lies in `labels`.
    pub fn partial(&self, labels: &[usize]) -> Hypergraph {
        Hypergraph {
            vertex_count: self.vertex_count,
            edges: self
                .edges
                .iter()
                .filter(|e| labels.contains(&e.label))
                .cloned()
                .collect(),
        }
    }

    fn masks(&self) -> Result<Vec<u64>> {
        if self.vertex_count > MAX_SEARCH_VERTICES {
            return Err(Error::SearchLimit(format!(
                "exact search supports at most {MAX_SEARCH_VERTICES} vertices, got {}",
                self.vertex_count
            )));
        }
        Ok(self
            .edges
            .iter()
            .map(|e| e.members.iter().fold(0u64, |m, &v| m | (1 << v)))
            .collect())
    }
}

fn bits(mask: u64) -> impl Iterator<Item = usize> {
    let mut m = mask;
    std::iter::from_fn(move || {
        if m == 0 {
            None
        } else {
            let v = m.trailing_zeros() as usize;
            m &= m - 1;
            Some(v)
        }
    })
}

/// Distinct edge masks, with the lowest edge index carrying each mask.
fn distinct_masks(masks: &[u64]) -> Vec<(u64, usize)> {
    let mut by_mask: BTreeMap<u64, usize> = BTreeMap::new();
    for (i, &m) in masks.iter().enumerate() {
        by_mask.entry(m).or_insert(i);
    }
    let mut out: Vec<(u64, usize)> = by_mask.into_iter().collect();
    out.sort_by_key(|&(m, i)| (m.count_ones(), i));
    out
}

/// Size of a greedy transversal of `edges`: forced singleton vertices first,
/// then highest-degree vertices (lowest index on ties). An upper bound on
/// both `τ` and `ν` of the edge set.
fn greedy_transversal_size(edges: &[u64]) -> usize {
    let mut chosen = 0u64;
    for &e in edges {
        if e.count_ones() == 1 {
            chosen |= e;
        }
    }
    let mut remaining: Vec<u64> = edges.iter().copied().filter(|&e| e & chosen == 0).collect();
    let mut size = chosen.count_ones() as usize;
    while !remaining.is_empty() {
        let mut degree = [0u32; 64];
        for &e in &remaining {
            for v in bits(e) {
                degree[v] += 1;
            }
        }
        let v = (0..64).max_by_key(|&v| (degree[v], std::cmp::Reverse(v))).unwrap();
        remaining.retain(|&e| e & (1 << v) == 0);
        size += 1;
    }
    size
}

struct MatchingSearch<'a> {
    edges: &'a [(u64, usize)],
    best: Vec<usize>,
    current: Vec<usize>,
    ceiling: usize,
}

impl MatchingSearch<'_> {
    fn go(&mut self, used: u64, discarded: u64) {
        if self.best.len() == self.ceiling {
            return;
        }
        let blocked = used | discarded;
        let avail: Vec<u64> = self
            .edges
            .iter()
            .map(|&(m, _)| m)
            .filter(|&m| m & blocked == 0)
            .collect();
        if self.current.len() + greedy_transversal_size(&avail) <= self.best.len() {
            return;
        }
        if avail.is_empty() {
            if self.current.len() > self.best.len() {
                self.best = self.current.clone();
            }
            return;
        }
        // Branch on the lowest vertex still touched by an available edge.
        let v = avail.iter().map(|m| m.trailing_zeros()).min().unwrap() as usize;
        let bit = 1u64 << v;
        for (idx, &(m, _)) in self.edges.iter().enumerate() {
            if m & bit != 0 && m & blocked == 0 {
                self.current.push(idx);
                self.go(used | m, discarded);
                self.current.pop();
            }
        }
        self.go(used, discarded | bit);
    }
}

/// Maximum number of pairwise-disjoint edges, with one witness (edge
/// indices into `h.edges()`, ascending).
pub fn matching_number(h: &Hypergraph) -> Result<(usize, Vec<usize>)> {
    let masks = h.masks()?;
    let edges = distinct_masks(&masks);
    let ceiling = greedy_transversal_size(&masks);
    let mut search = MatchingSearch {
        edges: &edges,
        best: Vec::new(),
        current: Vec::new(),
        ceiling,
    };
    search.go(0, 0);
    let mut witness: Vec<usize> = search.best.iter().map(|&i| edges[i].1).collect();
    witness.sort_unstable();
    Ok((witness.len(), witness))
}

struct TransversalSearch<'a> {
    edges: &'a [u64],
    best: u64,
    best_size: usize,
}

impl TransversalSearch<'_> {
    fn go(&mut self, chosen: u64, forbidden: u64) {
        let uncovered: Vec<u64> = self
            .edges
            .iter()
            .copied()
            .filter(|&e| e & chosen == 0)
            .collect();
        if uncovered.is_empty() {
            let size = chosen.count_ones() as usize;
            if size < self.best_size {
                self.best_size = size;
                self.best = chosen;
            }
            return;
        }
        // Lower bound: a greedy packing of disjoint uncovered edges needs one
        // new vertex each.
        let mut packed = 0u64;
        let mut disjoint = 0usize;
        for &e in &uncovered {
            if e & packed == 0 {
                packed |= e;
                disjoint += 1;
            }
        }
        if chosen.count_ones() as usize + disjoint >= self.best_size {
            return;
        }
        // Fewest allowed vertices first, lowest members on ties.
        let pick = uncovered
            .iter()
            .copied()
            .min_by_key(|&e| ((e & !forbidden).count_ones(), e.trailing_zeros(), e))
            .unwrap();
        let options = pick & !forbidden;
        if options == 0 {
            return;
        }
        let mut excluded = forbidden;
        for v in bits(options) {
            let bit = 1u64 << v;
            self.go(chosen | bit, excluded);
            excluded |= bit;
        }
    }
}

/// Minimum vertex set meeting every edge, with one witness (ascending
/// 0-based vertices).
pub fn transversal_number(h: &Hypergraph) -> Result<(usize, Vec<usize>)> {
    let masks = h.masks()?;
    let distinct: Vec<u64> = distinct_masks(&masks).into_iter().map(|(m, _)| m).collect();
    // Singleton edges force their vertex.
    let forced = distinct
        .iter()
        .filter(|m| m.count_ones() == 1)
        .fold(0u64, |a, &m| a | m);
    let rest: Vec<u64> = distinct.iter().copied().filter(|&m| m & forced == 0).collect();
    let mut search = TransversalSearch {
        edges: &rest,
        best: 0,
        best_size: usize::MAX,
    };
    search.go(0, 0);
    let all = search.best | forced;
    let witness: Vec<usize> = bits(all).collect();
    Ok((witness.len(), witness))
}

/// Exact fractional matching number with optimal edge weights.
pub fn fractional_matching_number(h: &Hypergraph, options: &LpOptions) -> Result<(Rational, Vec<Rational>)> {
    let m = h.edges.len();
    if m == 0 {
        return Ok((Rational::zero(), Vec::new()));
    }
    let mut lp = LpProblem::new(m, vec![Rational::one(); m]);
    for v in 0..h.vertex_count {
        let row: Vec<Rational> = h
            .edges
            .iter()
            .map(|e| {
                if e.members.binary_search(&v).is_ok() {
                    Rational::one()
                } else {
                    Rational::zero()
                }
            })
            .collect();
        if row.iter().any(|a| !a.is_zero()) {
            lp.add(row, Relation::Le, Rational::one());
        }
    }
    match solve_with(&lp, options)? {
        LpOutcome::Optimal(s) => Ok((s.value, s.values)),
        other => Err(Error::InvalidParameter(format!(
            "fractional matching LP returned {:?}",
            other.status()
        ))),
    }
}

pub fn validate_matching(h: &Hypergraph, edges: &[usize]) -> bool {
    let mut used = vec![false; h.vertex_count];
    for &i in edges {
        let Some(e) = h.edges.get(i) else {
            return false;
        };
        for &v in &e.members {
            if used[v] {
                return false;
            }
            used[v] = true;
        }
    }
    true
}

pub fn validate_transversal(h: &Hypergraph, vertices: &[usize]) -> bool {
    h.edges
        .iter()
        .all(|e| e.members.iter().any(|v| vertices.contains(v)))
}

pub fn validate_fractional(h: &Hypergraph, weights: &[Rational]) -> bool {
    if weights.len() != h.edges.len() {
        return false;
    }
    if weights.iter().any(|w| w.is_negative() || *w > Rational::one()) {
        return false;
    }
    (0..h.vertex_count).all(|v| {
        let load: Rational = h
            .edges
            .iter()
            .zip(weights)
            .filter(|(e, _)| e.members.contains(&v))
            .map(|(_, w)| w.clone())
            .sum();
        load <= Rational::one()
    })
}

/// Matching, transversal and fractional matching numbers with witnesses.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HypergraphStats {
    pub nu: usize,
    pub tau: usize,
    #[serde(with = "rational_serde")]
    pub mu_f: Rational,
    pub witness_matching: Vec<usize>,
    pub witness_transversal: Vec<usize>,
    #[serde(with = "rational_serde::vec")]
    pub witness_fractional: Vec<Rational>,
}

impl HypergraphStats {
    pub fn compute(h: &Hypergraph, options: &LpOptions) -> Result<Self> {
        let (nu, witness_matching) = matching_number(h)?;
        let (tau, witness_transversal) = transversal_number(h)?;
        let (mu_f, witness_fractional) = fractional_matching_number(h, options)?;
        Ok(HypergraphStats {
            nu,
            tau,
            mu_f,
            witness_matching,
            witness_transversal,
            witness_fractional,
        })
    }

    /// `ν <= μ_f <= τ` and all three witnesses re-validated.
    pub fn is_consistent(&self, h: &Hypergraph) -> bool {
        let nu = Rational::from_integer(self.nu.into());
        let tau = Rational::from_integer(self.tau.into());
        let weight_sum: Rational = self.witness_fractional.iter().cloned().sum();
        nu <= self.mu_f
            && self.mu_f <= tau
            && self.witness_matching.len() == self.nu
            && self.witness_transversal.len() == self.tau
            && weight_sum == self.mu_f
            && validate_matching(h, &self.witness_matching)
            && validate_transversal(h, &self.witness_transversal)
            && validate_fractional(h, &self.witness_fractional)
    }

    /// JSON form: 1-based vertices, matching edges as 1-based member lists
    /// with their 1-based symbol label, nonzero fractional weights only.
    pub fn to_json(&self, h: &Hypergraph) -> serde_json::Value {
        let edge_json = |i: usize| {
            let e = &h.edges[i];
            serde_json::json!({
                "symbol": e.label + 1,
                "set": e.members.iter().map(|v| v + 1).collect::<Vec<_>>(),
            })
        };
        let fractional: Vec<serde_json::Value> = self
            .witness_fractional
            .iter()
            .enumerate()
            .filter(|(_, w)| !w.is_zero())
            .map(|(i, w)| {
                let mut e = edge_json(i);
                e["weight"] = serde_json::Value::String(w.to_string());
                e
            })
            .collect();
        serde_json::json!({
            "nu": self.nu,
            "tau": self.tau,
            "mu_f": self.mu_f.to_string(),
            "witness_matching": self.witness_matching.iter().map(|&i| edge_json(i)).collect::<Vec<_>>(),
            "witness_transversal": self.witness_transversal.iter().map(|v| v + 1).collect::<Vec<_>>(),
            "witness_fractional": fractional,
        })
    }
}
