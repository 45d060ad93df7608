//! Directed-graph utilities over square 0/1 adjacency matrices.
//!
//! Vertices here are 0-based indices; the symbol-level API in [`crate::sft`]
//! converts to and from the 1-based alphabet.

use std::collections::VecDeque;

use crate::error::{Error, Result};

/// Transitive closure of the edge relation (paths of length >= 1).
pub fn reachability(adj: &[Vec<u8>]) -> Vec<Vec<bool>> {
    let n = adj.len();
    let mut reach = vec![vec![false; n]; n];
    for (s, row) in reach.iter_mut().enumerate() {
        let mut queue: VecDeque<usize> = VecDeque::new();
        for t in 0..n {
            if adj[s][t] != 0 && !row[t] {
                row[t] = true;
                queue.push_back(t);
            }
        }
        while let Some(v) = queue.pop_front() {
            for t in 0..n {
                if adj[v][t] != 0 && !row[t] {
                    row[t] = true;
                    queue.push_back(t);
                }
            }
        }
    }
    reach
}

pub fn is_irreducible(adj: &[Vec<u8>]) -> bool {
    !adj.is_empty() && reachability(adj).iter().all(|row| row.iter().all(|&r| r))
}

fn bool_square(m: &[Vec<bool>]) -> Vec<Vec<bool>> {
    let n = m.len();
    let mut out = vec![vec![false; n]; n];
    for i in 0..n {
        for k in 0..n {
            if m[i][k] {
                for j in 0..n {
                    if m[k][j] {
                        out[i][j] = true;
                    }
                }
            }
        }
    }
    out
}

/// Primitivity via boolean powers.
///
/// A nonnegative matrix is primitive iff `M^w > 0` for the Wielandt exponent
/// `w = (n-1)^2 + 1`, and positivity persists for every larger power, so it
/// suffices to square until the exponent reaches `w`.
pub fn is_primitive(adj: &[Vec<u8>]) -> bool {
    let n = adj.len();
    if n == 0 {
        return false;
    }
    let wielandt = (n - 1) * (n - 1) + 1;
    let mut power: Vec<Vec<bool>> = adj
        .iter()
        .map(|row| row.iter().map(|&e| e != 0).collect())
        .collect();
    let mut exponent = 1usize;
    while exponent < wielandt {
        power = bool_square(&power);
        exponent *= 2;
    }
    power.iter().all(|row| row.iter().all(|&b| b))
}

/// All elementary circuits, each rotated to start at its least vertex, sorted
/// by (length, vertex sequence). Johnson's blocking search restricted to
/// vertices `>= s` for each start `s`.
///
/// Fails with [`Error::CycleLimit`] once more than `cap` circuits are found.
pub fn simple_cycles(adj: &[Vec<u8>], cap: usize) -> Result<Vec<Vec<usize>>> {
    let n = adj.len();
    let succ: Vec<Vec<usize>> = adj
        .iter()
        .map(|row| (0..n).filter(|&j| row[j] != 0).collect())
        .collect();
    let mut out: Vec<Vec<usize>> = Vec::new();

    for s in 0..n {
        let mut blocked = vec![false; n];
        let mut b_sets: Vec<Vec<usize>> = vec![Vec::new(); n];
        let mut path = vec![s];
        blocked[s] = true;
        // (vertex, next successor index, found a circuit below this frame)
        let mut stack: Vec<(usize, usize, bool)> = vec![(s, 0, false)];

        while let Some(top) = stack.last_mut() {
            let v = top.0;
            let mut next = None;
            while top.1 < succ[v].len() {
                let w = succ[v][top.1];
                top.1 += 1;
                if w >= s {
                    next = Some(w);
                    break;
                }
            }
            match next {
                Some(w) => {
                    if w == s {
                        top.2 = true;
                        out.push(path.clone());
                        if out.len() > cap {
                            return Err(Error::CycleLimit(cap));
                        }
                    } else if !blocked[w] {
                        blocked[w] = true;
                        path.push(w);
                        stack.push((w, 0, false));
                    }
                }
                None => {
                    let (v, _, found) = stack.pop().unwrap();
                    path.pop();
                    if found {
                        unblock(v, &mut blocked, &mut b_sets);
                    } else {
                        for &w in succ[v].iter().filter(|&&w| w >= s) {
                            if !b_sets[w].contains(&v) {
                                b_sets[w].push(v);
                            }
                        }
                    }
                    if let Some(parent) = stack.last_mut() {
                        parent.2 |= found;
                    }
                }
            }
        }
    }

    out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    Ok(out)
}

fn unblock(v: usize, blocked: &mut [bool], b_sets: &mut [Vec<usize>]) {
    let mut pending = vec![v];
    while let Some(u) = pending.pop() {
        if blocked[u] {
            blocked[u] = false;
            pending.append(&mut b_sets[u]);
        }
    }
}

/// Shortest cycle (as a vertex sequence, closing edge implied) inside the
/// vertex subset `allowed`, preferring the least start vertex.
pub fn shortest_cycle_within(adj: &[Vec<u8>], allowed: &[bool]) -> Option<Vec<usize>> {
    let n = adj.len();
    for s in (0..n).filter(|&s| allowed[s]) {
        let mut parent: Vec<Option<usize>> = vec![None; n];
        let mut seen = vec![false; n];
        let mut queue = VecDeque::new();
        queue.push_back(s);
        seen[s] = true;
        while let Some(v) = queue.pop_front() {
            for w in 0..n {
                if adj[v][w] == 0 || !allowed[w] {
                    continue;
                }
                if w == s {
                    let mut cycle = vec![v];
                    let mut cur = v;
                    while let Some(p) = parent[cur] {
                        cycle.push(p);
                        cur = p;
                    }
                    cycle.reverse();
                    return Some(cycle);
                }
                if !seen[w] {
                    seen[w] = true;
                    parent[w] = Some(v);
                    queue.push_back(w);
                }
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Brute force: all vertex sequences without repetition that close up,
    /// canonicalized to start at their minimum.
    fn brute_cycles(adj: &[Vec<u8>]) -> Vec<Vec<usize>> {
        fn extend(adj: &[Vec<u8>], path: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            let s = path[0];
            let v = *path.last().unwrap();
            if adj[v][s] != 0 {
                out.push(path.clone());
            }
            for w in (s + 1)..adj.len() {
                if adj[v][w] != 0 && !path.contains(&w) {
                    path.push(w);
                    extend(adj, path, out);
                    path.pop();
                }
            }
        }
        let mut out = Vec::new();
        for s in 0..adj.len() {
            extend(adj, &mut vec![s], &mut out);
        }
        out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        out
    }

    #[test]
    fn johnson_matches_brute_force() {
        let graphs: Vec<Vec<Vec<u8>>> = vec![
            vec![vec![1, 1], vec![1, 0]],
            vec![vec![1, 1], vec![1, 1]],
            vec![vec![0, 1, 1], vec![1, 0, 1], vec![1, 1, 0]],
            vec![vec![1; 4]; 4],
            vec![
                vec![0, 1, 0, 1],
                vec![0, 0, 1, 1],
                vec![1, 0, 0, 1],
                vec![1, 1, 0, 0],
            ],
        ];
        for g in graphs {
            assert_eq!(simple_cycles(&g, 1_000_000).unwrap(), brute_cycles(&g));
        }
    }

    #[test]
    fn cycle_cap_is_enforced() {
        let full = vec![vec![1u8; 5]; 5];
        assert_eq!(simple_cycles(&full, 10), Err(Error::CycleLimit(10)));
    }

    #[test]
    fn primitivity() {
        assert!(is_primitive(&[vec![1, 1], vec![1, 0]]));
        assert!(!is_primitive(&[vec![0, 1], vec![1, 0]]));
        assert!(!is_primitive(&[vec![1, 0], vec![0, 1]]));
        // 4-cycle with a chord of length 3 closing: periods 4 and 3 → primitive
        let m = vec![
            vec![0, 1, 0, 0],
            vec![0, 0, 1, 0],
            vec![0, 0, 0, 1],
            vec![1, 1, 0, 0],
        ];
        assert!(is_primitive(&m));
    }

    #[test]
    fn shortest_cycle_respects_subset() {
        let gm = vec![vec![1, 1], vec![1, 0]];
        assert_eq!(shortest_cycle_within(&gm, &[false, true]), None);
        assert_eq!(shortest_cycle_within(&gm, &[true, true]), Some(vec![0]));
        let c3 = vec![vec![0, 1, 0], vec![0, 0, 1], vec![1, 0, 0]];
        assert_eq!(
            shortest_cycle_within(&c3, &[true, true, true]),
            Some(vec![0, 1, 2])
        );
    }
}
