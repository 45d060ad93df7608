//! Transition matrices, admissible words, eventually periodic points and
//! higher-block recoding for one-sided topological Markov shifts.
//!
//! Symbols are 1-based (`1..=n`) everywhere in the public API.

use std::borrow::Borrow;
use std::fmt;
use std::ops::Deref;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph;

/// A finite word over the 1-based alphabet. Admissibility is checked against
/// a [`TransitionMatrix`] at construction sites, not stored.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Word(Vec<usize>);

impl Word {
    pub fn new(symbols: Vec<usize>) -> Self {
        Word(symbols)
    }

    pub fn empty() -> Self {
        Word(Vec::new())
    }

    /// Builds a word and checks it against `a`.
    pub fn admissible(a: &TransitionMatrix, symbols: Vec<usize>) -> Result<Self> {
        let w = Word(symbols);
        a.check_word(&w)?;
        Ok(w)
    }

    pub fn symbols(&self) -> &[usize] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<usize> {
        self.0
    }

    pub fn first(&self) -> Option<usize> {
        self.0.first().copied()
    }

    pub fn last(&self) -> Option<usize> {
        self.0.last().copied()
    }

    pub fn concat(&self, other: &[usize]) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(other);
        Word(v)
    }

    pub fn push(&mut self, symbol: usize) {
        self.0.push(symbol);
    }

    /// `σ^k` applied to the word: drops the first `k` symbols.
    pub fn shifted(&self, k: usize) -> Word {
        Word(self.0[k.min(self.0.len())..].to_vec())
    }

    pub fn prefix(&self, len: usize) -> Word {
        Word(self.0[..len.min(self.0.len())].to_vec())
    }

    pub fn starts_with(&self, other: &[usize]) -> bool {
        self.0.starts_with(other)
    }

    /// Parses `"1,2,1"`; the empty string is the empty word.
    pub fn parse(s: &str) -> Result<Word> {
        let s = s.trim();
        if s.is_empty() {
            return Ok(Word::empty());
        }
        s.split(',')
            .map(|t| {
                t.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::Invalid(format!("bad symbol {t:?} in word {s:?}")))
            })
            .collect::<Result<Vec<_>>>()
            .map(Word)
    }
}

impl Deref for Word {
    type Target = [usize];
    fn deref(&self) -> &[usize] {
        &self.0
    }
}

impl Borrow<[usize]> for Word {
    fn borrow(&self) -> &[usize] {
        &self.0
    }
}

impl From<Vec<usize>> for Word {
    fn from(v: Vec<usize>) -> Self {
        Word(v)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|s| s.to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}

/// Square 0/1 matrix with no zero rows or columns, plus its graph predicates.
///
/// Reducible and permutation matrices are representable; the flags record
/// the defect so callers can refuse work with a precise reason.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransitionMatrix {
    entries: Vec<Vec<u8>>,
    irreducible: bool,
    primitive: bool,
    permutation: bool,
}

impl TransitionMatrix {
    /// Validates a square 0/1 array.
    pub fn new(entries: Vec<Vec<i64>>) -> Result<Self> {
        let n = entries.len();
        if n == 0 {
            return Err(Error::EmptyMatrix);
        }
        for (row, r) in entries.iter().enumerate() {
            if r.len() != n {
                return Err(Error::NotSquare {
                    row: row + 1,
                    len: r.len(),
                    expected: n,
                });
            }
        }
        if n < 2 {
            return Err(Error::AlphabetTooSmall(n));
        }
        let mut bits = vec![vec![0u8; n]; n];
        for (i, r) in entries.iter().enumerate() {
            for (j, &v) in r.iter().enumerate() {
                match v {
                    0 => {}
                    1 => bits[i][j] = 1,
                    _ => {
                        return Err(Error::NotBinary {
                            row: i + 1,
                            col: j + 1,
                            value: v,
                        })
                    }
                }
            }
        }
        Self::from_bits(bits)
    }

    pub(crate) fn from_bits(bits: Vec<Vec<u8>>) -> Result<Self> {
        let n = bits.len();
        for i in 0..n {
            if bits[i].iter().all(|&e| e == 0) {
                return Err(Error::ZeroRow(i + 1));
            }
        }
        for j in 0..n {
            if (0..n).all(|i| bits[i][j] == 0) {
                return Err(Error::ZeroColumn(j + 1));
            }
        }
        let irreducible = graph::is_irreducible(&bits);
        let primitive = graph::is_primitive(&bits);
        let permutation = bits.iter().all(|r| r.iter().filter(|&&e| e != 0).count() == 1);
        Ok(TransitionMatrix {
            entries: bits,
            irreducible,
            primitive,
            permutation,
        })
    }

    /// Alphabet size.
    pub fn n(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[Vec<u8>] {
        &self.entries
    }

    pub fn to_rows(&self) -> Vec<Vec<i64>> {
        self.entries
            .iter()
            .map(|r| r.iter().map(|&e| e as i64).collect())
            .collect()
    }

    pub fn is_irreducible(&self) -> bool {
        self.irreducible
    }

    pub fn is_primitive(&self) -> bool {
        self.primitive
    }

    pub fn is_permutation(&self) -> bool {
        self.permutation
    }

    /// `A(i, j) = 1` for 1-based symbols; out-of-range symbols are never allowed.
    pub fn allows(&self, i: usize, j: usize) -> bool {
        let n = self.n();
        (1..=n).contains(&i) && (1..=n).contains(&j) && self.entries[i - 1][j - 1] != 0
    }

    pub fn followers(&self, i: usize) -> Vec<usize> {
        (1..=self.n()).filter(|&j| self.allows(i, j)).collect()
    }

    pub fn out_degree(&self, i: usize) -> usize {
        self.entries[i - 1].iter().filter(|&&e| e != 0).count()
    }

    pub fn is_admissible(&self, w: &[usize]) -> bool {
        w.iter().all(|&s| (1..=self.n()).contains(&s)) && w.windows(2).all(|p| self.allows(p[0], p[1]))
    }

    pub fn check_word(&self, w: &Word) -> Result<()> {
        if let Some(&s) = w.iter().find(|&&s| !(1..=self.n()).contains(&s)) {
            return Err(Error::SymbolOutOfRange { symbol: s, n: self.n() });
        }
        if self.is_admissible(w) {
            Ok(())
        } else {
            Err(Error::Inadmissible(w.clone()))
        }
    }

    /// `B_m(X_A)` in lexicographic order; `m = 0` gives the empty word.
    pub fn words(&self, m: usize) -> Vec<Word> {
        let mut level = vec![Word::empty()];
        for _ in 0..m {
            let mut next = Vec::new();
            for w in &level {
                let cands: Vec<usize> = match w.last() {
                    None => (1..=self.n()).collect(),
                    Some(l) => self.followers(l),
                };
                for j in cands {
                    next.push(w.concat(&[j]));
                }
            }
            level = next;
        }
        level
    }

    /// All admissible extensions `w·u` with `|u| = len`, in lexicographic order of `u`.
    pub fn extensions(&self, w: &[usize], len: usize) -> Vec<Word> {
        let mut level = vec![Word::new(w.to_vec())];
        for _ in 0..len {
            let mut next = Vec::new();
            for v in &level {
                let cands: Vec<usize> = match v.last() {
                    None => (1..=self.n()).collect(),
                    Some(l) => self.followers(l),
                };
                for j in cands {
                    next.push(v.concat(&[j]));
                }
            }
            level = next;
        }
        level
    }

    /// Lexicographically least word of length `m`.
    pub fn least_word(&self, m: usize) -> Word {
        let mut w = Word::empty();
        for _ in 0..m {
            let next = match w.last() {
                None => 1,
                Some(l) => self.followers(l)[0],
            };
            w.push(next);
        }
        w
    }

    /// A directed cycle through symbols of `allowed` only, as the word
    /// `(c_1, ..., c_p)` with `A(c_p, c_1) = 1`.
    pub fn cycle_within(&self, allowed: &[usize]) -> Option<Word> {
        let mut mask = vec![false; self.n()];
        for &s in allowed {
            if (1..=self.n()).contains(&s) {
                mask[s - 1] = true;
            }
        }
        graph::shortest_cycle_within(&self.entries, &mask)
            .map(|c| Word(c.into_iter().map(|v| v + 1).collect()))
    }

    /// Shortest path word `(i, ..., j)` from `i` to `j` (length >= 2), if any.
    pub fn connecting_path(&self, i: usize, j: usize) -> Option<Word> {
        let n = self.n();
        let mut parent = vec![None; n + 1];
        let mut seen = vec![false; n + 1];
        let mut queue = std::collections::VecDeque::new();
        for k in self.followers(i) {
            if !seen[k] {
                seen[k] = true;
                parent[k] = Some(i);
                queue.push_back(k);
            }
        }
        while let Some(v) = queue.pop_front() {
            if v == j {
                let mut path = vec![j];
                let mut cur = j;
                loop {
                    let p = parent[cur].unwrap();
                    path.push(p);
                    if p == i && path.len() >= 2 {
                        break;
                    }
                    cur = p;
                }
                path.reverse();
                return Some(Word(path));
            }
            for k in self.followers(v) {
                if !seen[k] {
                    seen[k] = true;
                    parent[k] = Some(v);
                    queue.push_back(k);
                }
            }
        }
        None
    }
}

/// `B_m(X_A)` in lexicographic order.
pub fn enumerate_words(a: &TransitionMatrix, m: usize) -> Vec<Word> {
    a.words(m)
}

/// `has_cycle_within`: a cycle using only symbols in `allowed`.
pub fn has_cycle_within(a: &TransitionMatrix, allowed: &[usize]) -> Option<Word> {
    a.cycle_within(allowed)
}

/// The `K`-block presentation: new symbol `s` stands for `labels[s - 1]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockPresentation {
    pub matrix: TransitionMatrix,
    pub labels: Vec<Word>,
}

impl BlockPresentation {
    /// New symbol for a base word of the block length.
    pub fn symbol_of(&self, w: &[usize]) -> Option<usize> {
        self.labels
            .binary_search_by(|l| l.symbols().cmp(w))
            .ok()
            .map(|i| i + 1)
    }

    /// Recodes an `A`-word of length `m + K - 1` as the `A^[K]`-word of length `m`.
    pub fn encode(&self, w: &[usize]) -> Option<Word> {
        let k = self.labels.first().map_or(1, |l| l.len());
        if w.len() < k {
            return None;
        }
        w.windows(k)
            .map(|win| self.symbol_of(win))
            .collect::<Option<Vec<_>>>()
            .map(Word)
    }
}

/// Higher-block presentation `A^[K]` over `B_K(X_A)`, edges by overlap.
pub fn higher_block(a: &TransitionMatrix, k: usize) -> Result<BlockPresentation> {
    if k == 0 {
        return Err(Error::BadDepth(0));
    }
    let labels = a.words(k);
    if k == 1 {
        return Ok(BlockPresentation {
            matrix: a.clone(),
            labels,
        });
    }
    let m = labels.len();
    let mut bits = vec![vec![0u8; m]; m];
    for (i, u) in labels.iter().enumerate() {
        for (j, v) in labels.iter().enumerate() {
            if u[1..] == v[..k - 1] {
                bits[i][j] = 1;
            }
        }
    }
    Ok(BlockPresentation {
        matrix: TransitionMatrix::from_bits(bits)?,
        labels,
    })
}

/// An eventually periodic point `preperiod · period^∞` of `X_A`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PointSpec {
    pub preperiod: Word,
    pub period: Word,
}

impl PointSpec {
    /// Validates `preperiod · period · period` (which covers the wrap-around).
    pub fn new(a: &TransitionMatrix, preperiod: Word, period: Word) -> Result<Self> {
        if period.is_empty() {
            return Err(Error::BadPoint("period is empty".into()));
        }
        let probe = preperiod.concat(&period).concat(&period);
        if !a.is_admissible(&probe) {
            return Err(Error::BadPoint(format!(
                "[{preperiod}] followed by ([{period}])^inf is not admissible"
            )));
        }
        Ok(PointSpec { preperiod, period })
    }

    pub fn periodic(a: &TransitionMatrix, period: Word) -> Result<Self> {
        Self::new(a, Word::empty(), period)
    }

    /// Parses `"2,1:1,2"` (preperiod `2,1`, period `1,2`); `":2"` or `"2"` is `2^∞`.
    pub fn parse(a: &TransitionMatrix, s: &str) -> Result<Self> {
        let (pre, per) = match s.split_once(':') {
            Some((p, q)) => (Word::parse(p)?, Word::parse(q)?),
            None => (Word::empty(), Word::parse(s)?),
        };
        for w in [&pre, &per] {
            if let Some(&sym) = w.iter().find(|&&x| !(1..=a.n()).contains(&x)) {
                return Err(Error::SymbolOutOfRange { symbol: sym, n: a.n() });
            }
        }
        Self::new(a, pre, per)
    }

    /// Symbol at 0-based position `i`.
    pub fn symbol_at(&self, i: usize) -> usize {
        if i < self.preperiod.len() {
            self.preperiod[i]
        } else {
            let j = (i - self.preperiod.len()) % self.period.len();
            self.period[j]
        }
    }

    /// First `len` symbols starting at position `offset`.
    pub fn window(&self, offset: usize, len: usize) -> Word {
        Word((offset..offset + len).map(|i| self.symbol_at(i)).collect())
    }

    /// `σ^k` of the point.
    pub fn shift(&self, k: usize) -> PointSpec {
        if k <= self.preperiod.len() {
            PointSpec {
                preperiod: self.preperiod.shifted(k),
                period: self.period.clone(),
            }
        } else {
            let r = (k - self.preperiod.len()) % self.period.len();
            let mut rotated = self.period[r..].to_vec();
            rotated.extend_from_slice(&self.period[..r]);
            PointSpec {
                preperiod: Word::empty(),
                period: Word(rotated),
            }
        }
    }

    /// `p · self`; caller guarantees admissibility at the splice.
    pub fn prepend(&self, p: &[usize]) -> PointSpec {
        let mut pre = p.to_vec();
        pre.extend_from_slice(&self.preperiod);
        PointSpec {
            preperiod: Word(pre),
            period: self.period.clone(),
        }
    }

    /// Canonical representative: primitive period and shortest preperiod.
    /// Two points are equal iff their canonical forms are identical.
    pub fn canonical(&self) -> PointSpec {
        let per = &self.period;
        let p = per.len();
        let root = (1..=p)
            .find(|&d| p.is_multiple_of(d) && (0..p).all(|i| per[i] == per[i % d]))
            .unwrap_or(p);
        let mut period: Vec<usize> = per[..root].to_vec();
        let mut pre: Vec<usize> = self.preperiod.to_vec();
        while let (Some(&a), Some(&b)) = (pre.last(), period.last()) {
            if a != b {
                break;
            }
            pre.pop();
            period.rotate_right(1);
        }
        PointSpec {
            preperiod: Word(pre),
            period: Word(period),
        }
    }

    pub fn same_point(&self, other: &PointSpec) -> bool {
        self.canonical() == other.canonical()
    }
}

impl fmt::Display for PointSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.preperiod, self.period)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> TransitionMatrix {
        TransitionMatrix::new(rows.iter().map(|r| r.to_vec()).collect()).unwrap()
    }

    fn w(s: &[usize]) -> Word {
        Word::new(s.to_vec())
    }

    #[test]
    fn validate_flags() {
        let gm = m(&[&[1, 1], &[1, 0]]);
        assert!(gm.is_irreducible() && gm.is_primitive() && !gm.is_permutation());
        let id = m(&[&[1, 0], &[0, 1]]);
        assert!(!id.is_irreducible() && !id.is_primitive() && id.is_permutation());
        let swap = m(&[&[0, 1], &[1, 0]]);
        assert!(swap.is_irreducible() && !swap.is_primitive() && swap.is_permutation());
    }

    #[test]
    fn validate_errors() {
        assert_eq!(TransitionMatrix::new(vec![]), Err(Error::EmptyMatrix));
        assert!(matches!(
            TransitionMatrix::new(vec![vec![1, 1], vec![1]]),
            Err(Error::NotSquare { row: 2, .. })
        ));
        assert_eq!(
            TransitionMatrix::new(vec![vec![1, 1], vec![0, 0]]),
            Err(Error::ZeroRow(2))
        );
        assert_eq!(
            TransitionMatrix::new(vec![vec![1, 0], vec![1, 0]]),
            Err(Error::ZeroColumn(2))
        );
        assert!(matches!(
            TransitionMatrix::new(vec![vec![1, 2], vec![1, 0]]),
            Err(Error::NotBinary { row: 1, col: 2, value: 2 })
        ));
    }

    #[test]
    fn words_examples() {
        let gm = m(&[&[1, 1], &[1, 0]]);
        assert_eq!(gm.words(2), vec![w(&[1, 1]), w(&[1, 2]), w(&[2, 1])]);
        assert_eq!(gm.words(1), vec![w(&[1]), w(&[2])]);
        assert_eq!(gm.words(0), vec![Word::empty()]);
        let full = m(&[&[1, 1], &[1, 1]]);
        assert_eq!(full.words(3).len(), 8);
    }

    #[test]
    fn higher_block_examples() {
        let gm = m(&[&[1, 1], &[1, 0]]);
        let hb1 = higher_block(&gm, 1).unwrap();
        assert_eq!(hb1.matrix, gm);
        assert_eq!(hb1.labels, vec![w(&[1]), w(&[2])]);

        let hb2 = higher_block(&gm, 2).unwrap();
        assert_eq!(hb2.labels, vec![w(&[1, 1]), w(&[1, 2]), w(&[2, 1])]);
        // 11→11, 11→12, 12→21, 21→11, 21→12
        assert_eq!(
            hb2.matrix.entries(),
            &[vec![1, 1, 0], vec![0, 0, 1], vec![1, 1, 0]]
        );

        let full = m(&[&[1, 1], &[1, 1]]);
        let hb = higher_block(&full, 2).unwrap();
        assert_eq!(hb.matrix.n(), 4);
        assert!((1..=4).all(|s| hb.matrix.out_degree(s) == 2));
    }

    #[test]
    fn cycle_within_examples() {
        let gm = m(&[&[1, 1], &[1, 0]]);
        assert_eq!(has_cycle_within(&gm, &[2]), None);
        let full = m(&[&[1, 1], &[1, 1]]);
        assert_eq!(has_cycle_within(&full, &[2]), Some(w(&[2])));
        assert_eq!(has_cycle_within(&full, &[]), None);
    }

    #[test]
    fn point_canonical_forms() {
        let full = m(&[&[1, 1], &[1, 1]]);
        let p = PointSpec::new(&full, w(&[2, 1, 2]), w(&[1, 2, 1, 2])).unwrap();
        let q = PointSpec::new(&full, w(&[2]), w(&[1, 2])).unwrap();
        assert!(p.same_point(&q));
        assert_eq!(q.canonical().preperiod, w(&[]));
        assert_eq!(q.canonical().period, w(&[2, 1]));
        assert_eq!(p.shift(3).canonical(), q.shift(1).canonical());
        for i in 0..12 {
            assert_eq!(p.symbol_at(i), q.symbol_at(i));
        }
        assert_eq!(PointSpec::parse(&full, "2,1:1,2").unwrap().window(0, 5), w(&[2, 1, 1, 2, 1]));
    }

    #[test]
    fn point_rejects_bad_wrap() {
        let gm = m(&[&[1, 1], &[1, 0]]);
        assert!(PointSpec::periodic(&gm, w(&[2])).is_err());
        assert!(PointSpec::periodic(&gm, w(&[1, 2])).is_ok());
        assert!(PointSpec::periodic(&gm, w(&[2, 1, 2])).is_err());
    }

    #[test]
    fn connecting_paths() {
        let gm = m(&[&[1, 1], &[1, 0]]);
        assert_eq!(gm.connecting_path(2, 2), Some(w(&[2, 1, 2])));
        assert_eq!(gm.connecting_path(1, 1), Some(w(&[1, 1])));
    }
}
