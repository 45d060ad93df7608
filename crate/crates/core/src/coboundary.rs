//! Deciding `g = b∘σ - b`, recovering `b`, and classifying potentials.

use std::collections::VecDeque;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph;
use crate::locfun::LocFun;
use crate::sft::{higher_block, BlockPresentation, TransitionMatrix, Word};

pub const DEFAULT_CYCLE_CAP: usize = 1_000_000;

/// Every simple cycle of the `depth(g)`-block graph with the sum of `g`
/// along it. Cycles are reported as base words (first symbol of each block),
/// so a cycle `c` stands for the periodic point `c^∞`.
pub fn cycle_sums(a: &TransitionMatrix, g: &LocFun, cap: usize) -> Result<Vec<(Word, i64)>> {
    let hb = higher_block(a, g.depth())?;
    let weights = vertex_weights(&hb, g);
    let cycles = graph::simple_cycles(hb.matrix.entries(), cap)?;
    Ok(cycles
        .into_iter()
        .map(|c| {
            let sum = c.iter().map(|&v| weights[v]).sum();
            (base_word(&hb, &c), sum)
        })
        .collect())
}

pub fn is_coboundary(a: &TransitionMatrix, g: &LocFun, cap: usize) -> Result<bool> {
    Ok(cycle_sums(a, g, cap)?.iter().all(|(_, s)| *s == 0))
}

fn vertex_weights(hb: &BlockPresentation, g: &LocFun) -> Vec<i64> {
    hb.labels.iter().map(|l| g.values()[l]).collect()
}

fn base_word(hb: &BlockPresentation, vertices: &[usize]) -> Word {
    Word::new(vertices.iter().map(|&v| hb.labels[v][0]).collect())
}

/// Solves `g = b∘σ - b` with `b` of depth `depth(g)`, normalized so that
/// `b` vanishes on the least word.
///
/// For irreducible `A` a failure comes with a cycle whose `g`-sum is nonzero.
pub fn solve_potential(a: &TransitionMatrix, g: &LocFun) -> Result<LocFun> {
    let hb = higher_block(a, g.depth())?;
    let adj = hb.matrix.entries();
    let weights = vertex_weights(&hb, g);

    // b(t) - b(s) = g(s) on each edge s -> t
    let phi = if hb.matrix.is_irreducible() {
        let phi = out_tree(adj, &weights);
        if let Some(err) = nonzero_cycle(&hb, adj, &weights, &phi) {
            return Err(err);
        }
        phi
    } else {
        undirected_potential(&hb, adj, &weights)?
    };

    let values = hb.labels.iter().cloned().zip(phi.iter().copied()).collect();
    let b = LocFun::new(a, g.depth(), values)?.base_normalized(a);
    debug_assert_eq!(b.shift_difference(a), *g);
    Ok(b)
}

/// Potential along a directed BFS out-tree from vertex 0.
fn out_tree(adj: &[Vec<u8>], weights: &[i64]) -> Vec<i64> {
    let n = adj.len();
    let mut phi = vec![0i64; n];
    let mut seen = vec![false; n];
    seen[0] = true;
    let mut queue = VecDeque::from([0usize]);
    while let Some(s) = queue.pop_front() {
        for t in 0..n {
            if adj[s][t] != 0 && !seen[t] {
                seen[t] = true;
                phi[t] = phi[s] + weights[s];
                queue.push_back(t);
            }
        }
    }
    phi
}

/// Directed in-tree paths to vertex 0: `next[v]` is the successor of `v`
/// on a shortest path to 0.
fn in_tree(adj: &[Vec<u8>]) -> Vec<Option<usize>> {
    let n = adj.len();
    let mut next = vec![None; n];
    let mut seen = vec![false; n];
    seen[0] = true;
    let mut queue = VecDeque::from([0usize]);
    while let Some(t) = queue.pop_front() {
        for s in 0..n {
            if adj[s][t] != 0 && !seen[s] {
                seen[s] = true;
                next[s] = Some(t);
                queue.push_back(s);
            }
        }
    }
    next
}

/// If `phi` is inconsistent, some closed walk
/// (out-tree path to `s`) · `s→t` · (in-tree path back) has nonzero sum;
/// one of the simple cycles it decomposes into is returned as witness.
fn nonzero_cycle(hb: &BlockPresentation, adj: &[Vec<u8>], weights: &[i64], phi: &[i64]) -> Option<Error> {
    let n = adj.len();
    let next = in_tree(adj);
    // psi(v): weight of the in-tree path from v to 0; psi = -phi exactly
    // when every such closed walk sums to zero, i.e. when phi is consistent
    let mut psi = vec![None; n];
    psi[0] = Some(0i64);
    for start in 0..n {
        let mut chain = Vec::new();
        let mut v = start;
        while psi[v].is_none() {
            chain.push(v);
            v = next[v].expect("irreducible");
        }
        let mut acc = psi[v].unwrap();
        for &u in chain.iter().rev() {
            acc += weights[u];
            psi[u] = Some(acc);
        }
    }
    let bad = (0..n)
        .flat_map(|s| (0..n).map(move |t| (s, t)))
        .find(|&(s, t)| adj[s][t] != 0 && phi[s] + weights[s] + psi[t].unwrap() != 0)?;
    let parents = out_parents(adj);

    let mut walk = Vec::new();
    let mut v = bad.0;
    while v != 0 {
        walk.push(v);
        v = parents[v].expect("irreducible");
    }
    walk.push(0);
    walk.reverse();
    let mut v = bad.1;
    while v != 0 {
        walk.push(v);
        v = next[v].expect("irreducible");
    }
    // walk = [0, ..., s, t, ..., last], closed by last -> 0

    let mut stack: Vec<usize> = Vec::new();
    let mut on_stack = vec![None; n];
    for &v in walk.iter().chain(std::iter::once(&0)) {
        if let Some(pos) = on_stack[v] {
            let cycle: Vec<usize> = stack[pos..].to_vec();
            let sum: i64 = cycle.iter().map(|&u| weights[u]).sum();
            if sum != 0 {
                return Some(Error::NotCoboundary {
                    cycle: base_word(hb, &rotate_min(cycle)),
                    sum,
                });
            }
            for &u in &stack[pos..] {
                on_stack[u] = None;
            }
            stack.truncate(pos);
        }
        on_stack[v] = Some(stack.len());
        stack.push(v);
    }
    unreachable!("a closed walk with nonzero sum contains a cycle with nonzero sum")
}

fn rotate_min(mut cycle: Vec<usize>) -> Vec<usize> {
    let k = (0..cycle.len()).min_by_key(|&i| cycle[i]).unwrap_or(0);
    cycle.rotate_left(k);
    cycle
}

fn out_parents(adj: &[Vec<u8>]) -> Vec<Option<usize>> {
    let n = adj.len();
    let mut parent = vec![None; n];
    let mut seen = vec![false; n];
    seen[0] = true;
    let mut queue = VecDeque::from([0usize]);
    while let Some(s) = queue.pop_front() {
        for t in 0..n {
            if adj[s][t] != 0 && !seen[t] {
                seen[t] = true;
                parent[t] = Some(s);
                queue.push_back(t);
            }
        }
    }
    parent
}

/// Spanning forest of the underlying undirected graph, then every edge is
/// checked against it.
fn undirected_potential(hb: &BlockPresentation, adj: &[Vec<u8>], weights: &[i64]) -> Result<Vec<i64>> {
    let n = adj.len();
    let mut phi = vec![0i64; n];
    let mut seen = vec![false; n];
    for root in 0..n {
        if seen[root] {
            continue;
        }
        seen[root] = true;
        let mut queue = VecDeque::from([root]);
        while let Some(v) = queue.pop_front() {
            for u in 0..n {
                if seen[u] {
                    continue;
                }
                if adj[v][u] != 0 {
                    phi[u] = phi[v] + weights[v];
                } else if adj[u][v] != 0 {
                    phi[u] = phi[v] - weights[u];
                } else {
                    continue;
                }
                seen[u] = true;
                queue.push_back(u);
            }
        }
    }
    for s in 0..n {
        for t in 0..n {
            if adj[s][t] != 0 && phi[t] - phi[s] != weights[s] {
                let mut edge = hb.labels[s].to_vec();
                edge.push(hb.labels[t].last().unwrap());
                return Err(Error::InconsistentPotential(Word::new(edge)));
            }
        }
    }
    Ok(phi)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PotentialClass {
    /// Strictly positive: a ceiling function for the suspension construction.
    Positive { constant: Option<i64> },
    /// `χ_H` for the listed `H`.
    ChiH { h: Vec<usize> },
    /// `1_b` with the recovered, base-normalized `b` (as its table file).
    Coboundary1b {
        b: crate::locfun::LocFunFile,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Classification {
    pub classes: Vec<PotentialClass>,
    /// Set when more than one class applies; by the exclusivity of the three
    /// shapes this only happens for `f ≡ 1`.
    pub degenerate: bool,
}

impl Classification {
    pub fn is_general(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn chi_h(&self) -> Option<&[usize]> {
        self.classes.iter().find_map(|c| match c {
            PotentialClass::ChiH { h } => Some(h.as_slice()),
            _ => None,
        })
    }

    pub fn is_one_b(&self) -> bool {
        self.classes
            .iter()
            .any(|c| matches!(c, PotentialClass::Coboundary1b { .. }))
    }
}

/// If `f` takes values in `{0, 1}` and depends on the first symbol only,
/// the set where it is 1.
pub fn chi_h_shape(f: &LocFun) -> Option<Vec<usize>> {
    if f.depth() != 1 || f.values().values().any(|&v| v != 0 && v != 1) {
        return None;
    }
    Some(f.values().iter().filter(|(_, &v)| v == 1).map(|(w, _)| w[0]).collect())
}

/// `b` with `f = 1_b`, if one exists.
pub fn one_b_potential(a: &TransitionMatrix, f: &LocFun) -> Result<Option<LocFun>> {
    match solve_potential(a, &f.add_constant(a, -1)) {
        Ok(b) => Ok(Some(b)),
        Err(Error::NotCoboundary { .. }) | Err(Error::InconsistentPotential(_)) => Ok(None),
        Err(e) => Err(e),
    }
}

pub fn classify_potential(a: &TransitionMatrix, f: &LocFun) -> Result<Classification> {
    let mut classes = Vec::new();
    if f.min_value() > 0 {
        classes.push(PotentialClass::Positive {
            constant: f.is_constant(),
        });
    }
    if let Some(h) = chi_h_shape(f) {
        classes.push(PotentialClass::ChiH { h });
    }
    if let Some(b) = one_b_potential(a, f)? {
        classes.push(PotentialClass::Coboundary1b { b: b.to_file() });
    }
    let degenerate = classes.len() > 1;
    Ok(Classification { classes, degenerate })
}
