//! The suspended matrix `A_f` of a positive ceiling function, and the
//! translation between words of `X_{A_f}` and words of `X_A` with return times.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph;
use crate::locfun::LocFun;
use crate::sft::{higher_block, BlockPresentation, TransitionMatrix, Word};

/// Passes to the `depth(f)`-block presentation, where `f` reads one symbol.
/// Returns the presentation and the values `f'_s` on its symbols.
pub fn reduce_to_first_coordinate(a: &TransitionMatrix, f: &LocFun) -> Result<(BlockPresentation, Vec<i64>)> {
    if let Some((w, &v)) = f.values().iter().find(|(_, &v)| v < 1) {
        return Err(Error::BadValue {
            word: w.clone(),
            value: v,
            expected: "at least 1",
        });
    }
    let hb = higher_block(a, f.depth())?;
    let values = hb.labels.iter().map(|l| f.values()[l]).collect();
    Ok((hb, values))
}

/// Vertices `j_t` for `0 <= t < f_j`, grouped by symbol, levels ascending.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuspendedMatrix {
    pub matrix: TransitionMatrix,
    /// `labels[i] = (j, t)` for row `i`.
    pub labels: Vec<(usize, usize)>,
    heights: Vec<usize>,
    offsets: Vec<usize>,
}

impl SuspendedMatrix {
    /// Symbol (1-based) of vertex `j_t`.
    pub fn symbol(&self, j: usize, t: usize) -> usize {
        self.offsets[j - 1] + t + 1
    }

    /// `(j, t)` for a symbol of `A_f`.
    pub fn label(&self, symbol: usize) -> (usize, usize) {
        self.labels[symbol - 1]
    }

    /// `f_j`.
    pub fn height(&self, j: usize) -> usize {
        self.heights[j - 1]
    }

    pub fn label_strings(&self) -> Vec<String> {
        self.labels.iter().map(|(j, t)| format!("{j}_{t}")).collect()
    }

    /// Expands each `j` to `j_0 ... j_{f_j - 1}`.
    pub fn encode(&self, u: &[usize]) -> Word {
        let mut out = Vec::new();
        for &j in u {
            for t in 0..self.height(j) {
                out.push(self.symbol(j, t));
            }
        }
        Word::new(out)
    }
}

pub fn suspended_matrix(a: &TransitionMatrix, f: &[i64]) -> Result<SuspendedMatrix> {
    if f.len() != a.n() {
        return Err(Error::Invalid(format!(
            "expected {} heights, got {}",
            a.n(),
            f.len()
        )));
    }
    let mut heights = Vec::with_capacity(f.len());
    for (j, &v) in f.iter().enumerate() {
        if v < 1 {
            return Err(Error::BadValue {
                word: Word::new(vec![j + 1]),
                value: v,
                expected: "at least 1",
            });
        }
        heights.push(v as usize);
    }
    let mut offsets = Vec::with_capacity(heights.len());
    let mut labels = Vec::new();
    for (j, &h) in heights.iter().enumerate() {
        offsets.push(labels.len());
        labels.extend((0..h).map(|t| (j + 1, t)));
    }
    let size = labels.len();
    let mut bits = vec![vec![0u8; size]; size];
    for j in 1..=a.n() {
        let top = heights[j - 1] - 1;
        for t in 0..top {
            bits[offsets[j - 1] + t][offsets[j - 1] + t + 1] = 1;
        }
        for k in a.followers(j) {
            bits[offsets[j - 1] + top][offsets[k - 1]] = 1;
        }
    }
    Ok(SuspendedMatrix {
        matrix: TransitionMatrix::from_bits(bits)?,
        labels,
        heights,
        offsets,
    })
}

/// Reads a window of `X_{A_f}` as a word of `X_A` and an offset.
///
/// The first symbol `j_t` contributes `j` with offset `t`; each later
/// visit to a level-0 vertex `k_0` contributes `k`.
pub fn decode_return_times(s: &SuspendedMatrix, w: &[usize]) -> Result<(Word, usize)> {
    if w.is_empty() {
        return Err(Error::EmptyWindow);
    }
    s.matrix.check_word(&Word::new(w.to_vec()))?;
    let (j, offset) = s.label(w[0]);
    let mut out = vec![j];
    out.extend(w[1..].iter().map(|&x| s.label(x)).filter(|&(_, t)| t == 0).map(|(k, _)| k));
    Ok((Word::new(out), offset))
}

/// Positions in `w` of its level-0 symbols.
pub fn return_positions(s: &SuspendedMatrix, w: &[usize]) -> Vec<usize> {
    w.iter()
        .enumerate()
        .filter(|(_, &x)| s.label(x).1 == 0)
        .map(|(i, _)| i)
        .collect()
}

/// The cylinders of the towers `j_0 j_1 ... j_{f_j-1}` partition the union of
/// the level-0 cylinders, each tower is the only path between its ends, and
/// the tops lead exactly to the level-0 vertices allowed by `A`.
pub fn corner_partition_check(a: &TransitionMatrix, f: &[i64]) -> Result<bool> {
    let s = suspended_matrix(a, f)?;
    let adj = s.matrix.entries();
    let mut covered = vec![false; s.labels.len()];
    for j in 1..=a.n() {
        let h = s.height(j);
        for t in 0..h {
            let v = s.symbol(j, t) - 1;
            if covered[v] {
                return Ok(false);
            }
            covered[v] = true;
            let succ: Vec<usize> = (0..adj.len()).filter(|&u| adj[v][u] != 0).collect();
            if t + 1 < h {
                // forced step inside the tower
                if succ != [s.symbol(j, t + 1) - 1] {
                    return Ok(false);
                }
            } else {
                let expected: Vec<usize> = a.followers(j).iter().map(|&k| s.symbol(k, 0) - 1).collect();
                if succ != expected {
                    return Ok(false);
                }
            }
            // only the previous level (or a top, for level 0) enters j_t
            for u in 0..adj.len() {
                if adj[u][v] == 0 {
                    continue;
                }
                let (ku, tu) = s.labels[u];
                let ok = if t == 0 {
                    tu + 1 == s.height(ku) && a.allows(ku, j)
                } else {
                    ku == j && tu + 1 == t
                };
                if !ok {
                    return Ok(false);
                }
            }
        }
    }
    Ok(covered.iter().all(|&c| c))
}

pub fn is_primitive(s: &SuspendedMatrix) -> bool {
    graph::is_primitive(s.matrix.entries())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SuspensionReport {
    #[serde(rename = "A_f")]
    pub a_f: Vec<Vec<i64>>,
    pub labels: Vec<String>,
    pub corner_ok: bool,
    /// Base words of the block presentation when `depth(f) > 1`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub blocks: Option<Vec<Word>>,
}

/// Reduction, suspension and corner check in one step.
pub fn suspend(a: &TransitionMatrix, f: &LocFun) -> Result<SuspensionReport> {
    let (hb, values) = reduce_to_first_coordinate(a, f)?;
    let s = suspended_matrix(&hb.matrix, &values)?;
    Ok(SuspensionReport {
        a_f: s.matrix.to_rows(),
        labels: s.label_strings(),
        corner_ok: corner_partition_check(&hb.matrix, &values)?,
        blocks: (f.depth() > 1).then(|| hb.labels.clone()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> TransitionMatrix {
        TransitionMatrix::new(rows.iter().map(|r| r.to_vec()).collect()).unwrap()
    }

    fn golden() -> TransitionMatrix {
        m(&[&[1, 1], &[1, 0]])
    }

    #[test]
    fn reduce_examples() {
        let a = golden();
        let f = LocFun::first_coordinate(&a, &[2, 1]).unwrap();
        let (hb, vals) = reduce_to_first_coordinate(&a, &f).unwrap();
        assert_eq!(hb.matrix, a);
        assert_eq!(vals, vec![2, 1]);

        let f = LocFun::from_fn(&a, 2, |u| match u {
            [1, 1] => 2,
            [1, 2] => 1,
            _ => 3,
        });
        let (hb, vals) = reduce_to_first_coordinate(&a, &f).unwrap();
        assert_eq!(hb.matrix.n(), 3);
        assert_eq!(vals, vec![2, 1, 3]);

        let bad = LocFun::first_coordinate(&a, &[0, 1]).unwrap();
        assert!(matches!(
            reduce_to_first_coordinate(&a, &bad),
            Err(Error::BadValue { value: 0, .. })
        ));
    }

    #[test]
    fn suspended_examples() {
        let a = golden();
        let s = suspended_matrix(&a, &[1, 1]).unwrap();
        assert_eq!(s.matrix, a);
        assert_eq!(s.label_strings(), vec!["1_0", "2_0"]);

        let s = suspended_matrix(&a, &[2, 1]).unwrap();
        assert_eq!(s.label_strings(), vec!["1_0", "1_1", "2_0"]);
        assert_eq!(s.matrix.to_rows(), vec![vec![0, 1, 0], vec![1, 0, 1], vec![1, 0, 0]]);

        let full = m(&[&[1, 1], &[1, 1]]);
        let s = suspended_matrix(&full, &[2, 2]).unwrap();
        assert_eq!(
            s.matrix.to_rows(),
            vec![vec![0, 1, 0, 0], vec![1, 0, 1, 0], vec![0, 0, 0, 1], vec![1, 0, 1, 0]]
        );
        assert!(corner_partition_check(&full, &[2, 2]).unwrap());
        assert!(corner_partition_check(&a, &[2, 1]).unwrap());
        assert!(corner_partition_check(&a, &[1, 1]).unwrap());
    }

    #[test]
    fn decode_examples() {
        let a = golden();
        let s = suspended_matrix(&a, &[2, 1]).unwrap();
        // symbols: 1 = 1_0, 2 = 1_1, 3 = 2_0
        let (u, off) = decode_return_times(&s, &[1, 2, 3, 1]).unwrap();
        assert_eq!((u.to_vec(), off), (vec![1, 2, 1], 0));
        let (u, off) = decode_return_times(&s, &[2, 3, 1, 2]).unwrap();
        assert_eq!((u.to_vec(), off), (vec![1, 2, 1], 1));
        assert_eq!(decode_return_times(&s, &[]), Err(Error::EmptyWindow));
        assert!(decode_return_times(&s, &[1, 3]).is_err());

        let id = suspended_matrix(&a, &[1, 1]).unwrap();
        let (u, off) = decode_return_times(&id, &[1, 2, 1, 1]).unwrap();
        assert_eq!((u.to_vec(), off), (vec![1, 2, 1, 1], 0));
    }

    #[test]
    fn suspend_report_depth_two() {
        let a = golden();
        let f = LocFun::from_fn(&a, 2, |u| if u == [1, 1] { 2 } else { 1 });
        let r = suspend(&a, &f).unwrap();
        assert_eq!(r.labels, vec!["1_0", "1_1", "2_0", "3_0"]);
        assert!(r.corner_ok);
        assert_eq!(r.blocks.unwrap().len(), 3);
    }
}
