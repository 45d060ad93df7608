//! Saturated symbol sets, the family `Σ_H`, the inclusion matrix `A_H`
//! and the dimension vectors of the AF filtration it generates.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph;
use crate::sft::{TransitionMatrix, Word};

/// Sorted, deduplicated symbol set after range checking.
pub fn normalize_set(a: &TransitionMatrix, h: &[usize]) -> Result<Vec<usize>> {
    let mut out: Vec<usize> = h.to_vec();
    for &s in &out {
        if !(1..=a.n()).contains(&s) {
            return Err(Error::SymbolOutOfRange { symbol: s, n: a.n() });
        }
    }
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

fn complement(a: &TransitionMatrix, h: &[usize]) -> Vec<usize> {
    (1..=a.n()).filter(|s| !h.contains(s)).collect()
}

/// A cycle avoiding `H`, or `None` if `H` is saturated.
///
/// For empty `H` every cycle avoids it, so the witness is any cycle of `A`.
pub fn saturation_witness(a: &TransitionMatrix, h: &[usize]) -> Result<Option<Word>> {
    let h = normalize_set(a, h)?;
    Ok(a.cycle_within(&complement(a, &h)))
}

pub fn is_saturated(a: &TransitionMatrix, h: &[usize]) -> Result<bool> {
    Ok(saturation_witness(a, h)?.is_none())
}

/// `Σ_H`: words whose last symbol is the first visit to `H`, sorted.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SigmaFamily {
    pub h: Vec<usize>,
    pub words: Vec<Word>,
}

impl SigmaFamily {
    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn max_len(&self) -> usize {
        self.words.iter().map(|w| w.len()).max().unwrap_or(0)
    }

    /// Index of the unique member that is a prefix of `w`.
    pub fn prefix_index(&self, w: &[usize]) -> Option<usize> {
        self.words.iter().position(|m| w.starts_with(m))
    }
}

pub fn sigma_family(a: &TransitionMatrix, h: &[usize]) -> Result<SigmaFamily> {
    let h = normalize_set(a, h)?;
    if h.is_empty() {
        return Err(Error::EmptySet);
    }
    if let Some(c) = a.cycle_within(&complement(a, &h)) {
        return Err(Error::NotSaturated(c));
    }
    let mut words = Vec::new();
    // no cycle in the complement, so every run through it is finite
    let mut stack: Vec<Word> = (1..=a.n()).map(|i| Word::new(vec![i])).collect();
    while let Some(w) = stack.pop() {
        let last = w.last().unwrap();
        if h.contains(&last) {
            words.push(w);
        } else {
            for j in a.followers(last) {
                stack.push(w.concat(&[j]));
            }
        }
    }
    words.sort();
    Ok(SigmaFamily { h, words })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InclusionMatrix {
    pub sigma: SigmaFamily,
    /// May have zero rows or columns, so it is kept as a plain array.
    pub matrix: Vec<Vec<u8>>,
}

impl InclusionMatrix {
    pub fn is_primitive(&self) -> bool {
        graph::is_primitive(&self.matrix)
    }

    pub fn to_rows(&self) -> Vec<Vec<u64>> {
        self.matrix
            .iter()
            .map(|r| r.iter().map(|&e| u64::from(e)).collect())
            .collect()
    }
}

/// `A_H(m, n) = A(last ω(m), first ω(n))`.
pub fn inclusion_matrix(a: &TransitionMatrix, h: &[usize]) -> Result<InclusionMatrix> {
    let sigma = sigma_family(a, h)?;
    let matrix = sigma
        .words
        .iter()
        .map(|u| {
            sigma
                .words
                .iter()
                .map(|v| u8::from(a.allows(u.last().unwrap(), v.first().unwrap())))
                .collect()
        })
        .collect();
    Ok(InclusionMatrix { sigma, matrix })
}

pub fn is_primitive_h(a: &TransitionMatrix, h: &[usize]) -> Result<bool> {
    Ok(inclusion_matrix(a, h)?.is_primitive())
}

/// Number of `H`-symbols in `w`.
pub fn weight(h: &[usize], w: &[usize]) -> usize {
    w.iter().filter(|s| h.contains(s)).count()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Census {
    /// Words of weight `n` with length `1..=len_cap`.
    pub count: u128,
    /// `per_length[L - 1]` counts those of length `L`.
    pub per_length: Vec<u128>,
    /// No word of weight `n` at any of the last `window` lengths.
    pub stabilized: bool,
    pub window: usize,
}

/// Counts admissible words with exactly `n` symbols in `H`.
///
/// Stabilization looks at the last `max(2, |alphabet|)` lengths: a cycle
/// avoiding `H` has length at most the alphabet size and, once reachable,
/// produces weight-`n` words in every window of that many lengths.
pub fn weight_word_census(
    a: &TransitionMatrix,
    h: &[usize],
    n: usize,
    len_cap: usize,
) -> Result<Census> {
    let h = normalize_set(a, h)?;
    if n == 0 || len_cap == 0 {
        return Err(Error::Invalid("weight and length cap must be at least 1".into()));
    }
    let size = a.n();
    // counts[s][k]: words ending in symbol s+1 with weight k
    let mut counts = vec![vec![0u128; n + 1]; size];
    for s in 0..size {
        let k = usize::from(h.contains(&(s + 1)));
        if k <= n {
            counts[s][k] = 1;
        }
    }
    let mut per_length = Vec::with_capacity(len_cap);
    for len in 1..=len_cap {
        if len > 1 {
            let mut next = vec![vec![0u128; n + 1]; size];
            for s in 0..size {
                for t in a.followers(s + 1) {
                    let add = usize::from(h.contains(&t));
                    for k in 0..=n - add {
                        next[t - 1][k + add] = next[t - 1][k + add]
                            .checked_add(counts[s][k])
                            .ok_or(Error::Overflow("word census"))?;
                    }
                }
            }
            counts = next;
        }
        let at_len = counts.iter().map(|c| c[n]).try_fold(0u128, |acc, x| acc.checked_add(x));
        per_length.push(at_len.ok_or(Error::Overflow("word census"))?);
    }
    let window = size.max(2);
    let stabilized = len_cap >= window && per_length[len_cap - window..].iter().all(|&c| c == 0);
    let count = per_length
        .iter()
        .try_fold(0u128, |acc, &x| acc.checked_add(x))
        .ok_or(Error::Overflow("word census"))?;
    Ok(Census {
        count,
        per_length,
        stabilized,
        window,
    })
}

/// `d(1) = 1`, `d(k+1) = Mᵀ d(k)` for `k + 1 <= levels`.
pub fn dimension_vectors(m: &[Vec<u64>], levels: usize) -> Result<Vec<Vec<u64>>> {
    let size = m.len();
    let mut out = Vec::with_capacity(levels);
    if levels == 0 {
        return Ok(out);
    }
    let mut d = vec![1u64; size];
    out.push(d.clone());
    for _ in 1..levels {
        let mut next = vec![0u64; size];
        for (i, row) in m.iter().enumerate() {
            for (j, &e) in row.iter().enumerate() {
                let term = e.checked_mul(d[i]).ok_or(Error::Overflow("dimension vector"))?;
                next[j] = next[j].checked_add(term).ok_or(Error::Overflow("dimension vector"))?;
            }
        }
        d = next;
        out.push(d.clone());
    }
    Ok(out)
}

/// `d(n)` for the AF filtration generated by `A_H`.
pub fn level_dimensions(a: &TransitionMatrix, h: &[usize], n: usize) -> Result<Vec<u64>> {
    if n == 0 {
        return Err(Error::Invalid("level must be at least 1".into()));
    }
    let inc = inclusion_matrix(a, h)?;
    Ok(dimension_vectors(&inc.to_rows(), n)?.pop().unwrap())
}
