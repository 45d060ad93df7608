//! Locally constant integer functions on `X_A`, ergodic (cocycle) sums,
//! the coboundary transform `b ↦ 1 - b + b∘σ`, and transfer of potentials
//! along continuous orbit equivalences.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sft::{PointSpec, TransitionMatrix, Word};

/// A function `f ∈ C(X_A, Z)` given by a total table over `B_K(X_A)`.
///
/// Values are always stored at minimal depth, so two `LocFun`s over the
/// same matrix are equal as functions iff they compare equal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocFun {
    depth: usize,
    values: BTreeMap<Word, i64>,
}

impl LocFun {
    /// Builds from a table that must cover exactly `B_depth(X_A)`, then normalizes.
    pub fn new(a: &TransitionMatrix, depth: usize, values: BTreeMap<Word, i64>) -> Result<Self> {
        if depth == 0 {
            return Err(Error::BadDepth(0));
        }
        let words = a.words(depth);
        for w in &words {
            if !values.contains_key(w) {
                return Err(Error::MissingWord(w.clone()));
            }
        }
        if values.len() != words.len() {
            let extra = values
                .keys()
                .find(|k| k.len() != depth || !a.is_admissible(k))
                .cloned()
                .unwrap_or_default();
            return Err(Error::ExtraWord(extra));
        }
        Ok(LocFun { depth, values }.normalized(a))
    }

    /// Tabulates `eval` over `B_depth(X_A)`.
    pub fn from_fn(a: &TransitionMatrix, depth: usize, eval: impl Fn(&[usize]) -> i64) -> Self {
        let depth = depth.max(1);
        let values = a.words(depth).into_iter().map(|w| {
            let v = eval(&w);
            (w, v)
        });
        LocFun {
            depth,
            values: values.collect(),
        }
        .normalized(a)
    }

    pub fn constant(a: &TransitionMatrix, c: i64) -> Self {
        Self::from_fn(a, 1, |_| c)
    }

    /// `χ_H`: 1 on symbols in `H`, 0 elsewhere.
    pub fn chi_h(a: &TransitionMatrix, h: &[usize]) -> Self {
        Self::from_fn(a, 1, |w| i64::from(h.contains(&w[0])))
    }

    /// Indicator of the cylinder `U_μ`.
    pub fn chi_cylinder(a: &TransitionMatrix, mu: &[usize]) -> Self {
        Self::from_fn(a, mu.len(), |w| i64::from(w == mu))
    }

    /// First-coordinate function with `values[j-1]` on `U_j`.
    pub fn first_coordinate(a: &TransitionMatrix, values: &[i64]) -> Result<Self> {
        if values.len() != a.n() {
            return Err(Error::Invalid(format!(
                "expected {} values, got {}",
                a.n(),
                values.len()
            )));
        }
        Ok(Self::from_fn(a, 1, |w| values[w[0] - 1]))
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn values(&self) -> &BTreeMap<Word, i64> {
        &self.values
    }

    pub fn is_constant(&self) -> Option<i64> {
        let mut it = self.values.values();
        let first = *it.next()?;
        it.all(|&v| v == first).then_some(first)
    }

    pub fn min_value(&self) -> i64 {
        self.values.values().copied().min().unwrap_or(0)
    }

    pub fn max_value(&self) -> i64 {
        self.values.values().copied().max().unwrap_or(0)
    }

    /// `f(x)` for any `x` beginning with `w`; needs `|w| >= depth`.
    pub fn eval(&self, w: &[usize]) -> Result<i64> {
        if w.len() < self.depth {
            return Err(Error::WordTooShort {
                len: w.len(),
                needed: self.depth,
            });
        }
        self.values
            .get(&w[..self.depth])
            .copied()
            .ok_or_else(|| Error::Inadmissible(Word::new(w[..self.depth].to_vec())))
    }

    /// `f^n(x) = Σ_{i<n} f(σ^i x)` for `x ∈ U_w`; needs `|w| >= n + depth - 1`.
    pub fn cocycle_sum(&self, w: &[usize], n: usize) -> Result<i64> {
        if n == 0 {
            return Ok(0);
        }
        let needed = n + self.depth - 1;
        if w.len() < needed {
            return Err(Error::WordTooShort {
                len: w.len(),
                needed,
            });
        }
        (0..n).try_fold(0i64, |acc, i| {
            let v = self.eval(&w[i..])?;
            acc.checked_add(v).ok_or(Error::Overflow("cocycle sum"))
        })
    }

    /// Value at `σ^offset(p)`.
    pub fn eval_on_point(&self, p: &PointSpec, offset: usize) -> Result<i64> {
        self.eval(&p.window(offset, self.depth))
    }

    /// `f^n(σ^offset p)`.
    pub fn cocycle_sum_on_point(&self, p: &PointSpec, offset: usize, n: usize) -> Result<i64> {
        self.cocycle_sum(&p.window(offset, n + self.depth - 1), n)
    }

    /// The same function tabulated at a larger depth (not normalized).
    pub fn table_at_depth(&self, a: &TransitionMatrix, depth: usize) -> BTreeMap<Word, i64> {
        let depth = depth.max(self.depth);
        a.words(depth)
            .into_iter()
            .map(|w| {
                let v = self.values[&w[..self.depth]];
                (w, v)
            })
            .collect()
    }

    /// Reduces to the least depth that still represents the function.
    pub fn normalized(mut self, a: &TransitionMatrix) -> Self {
        while self.depth > 1 {
            let shorter = a.words(self.depth - 1);
            let mut reduced = BTreeMap::new();
            let mut ok = true;
            for u in shorter {
                let mut seen: Option<i64> = None;
                for ext in a.extensions(&u, 1) {
                    let v = self.values[&ext];
                    match seen {
                        None => seen = Some(v),
                        Some(s) if s != v => {
                            ok = false;
                            break;
                        }
                        _ => {}
                    }
                }
                if !ok {
                    break;
                }
                reduced.insert(u, seen.expect("no zero rows"));
            }
            if !ok {
                break;
            }
            self.depth -= 1;
            self.values = reduced;
        }
        self
    }

    fn zip_with(&self, other: &LocFun, a: &TransitionMatrix, op: impl Fn(i64, i64) -> i64) -> LocFun {
        let depth = self.depth.max(other.depth);
        LocFun::from_fn(a, depth, |w| {
            op(self.values[&w[..self.depth]], other.values[&w[..other.depth]])
        })
    }

    pub fn add(&self, other: &LocFun, a: &TransitionMatrix) -> LocFun {
        self.zip_with(other, a, |x, y| x + y)
    }

    pub fn sub(&self, other: &LocFun, a: &TransitionMatrix) -> LocFun {
        self.zip_with(other, a, |x, y| x - y)
    }

    pub fn add_constant(&self, a: &TransitionMatrix, c: i64) -> LocFun {
        LocFun::from_fn(a, self.depth, |w| self.values[w] + c)
    }

    /// `f∘σ`.
    pub fn compose_shift(&self, a: &TransitionMatrix) -> LocFun {
        LocFun::from_fn(a, self.depth + 1, |w| self.values[&w[1..]])
    }

    /// `b∘σ - b`.
    pub fn shift_difference(&self, a: &TransitionMatrix) -> LocFun {
        LocFun::from_fn(a, self.depth + 1, |w| {
            self.values[&w[1..]] - self.values[&w[..self.depth]]
        })
    }

    /// `1_b = 1 - b + b∘σ`.
    pub fn coboundary_transform(&self, a: &TransitionMatrix) -> LocFun {
        LocFun::from_fn(a, self.depth + 1, |w| {
            1 - self.values[&w[..self.depth]] + self.values[&w[1..]]
        })
    }

    /// Shifts by a constant so the value on the lexicographically least
    /// word is zero.
    pub fn base_normalized(&self, a: &TransitionMatrix) -> LocFun {
        let base = self.values[&a.least_word(self.depth)];
        self.add_constant(a, -base)
    }

    pub fn to_file(&self) -> LocFunFile {
        LocFunFile {
            depth: self.depth,
            values: self
                .values
                .iter()
                .map(|(w, &v)| (w.to_string(), v))
                .collect(),
        }
    }

    pub fn from_file(a: &TransitionMatrix, file: &LocFunFile) -> Result<Self> {
        let mut values = BTreeMap::new();
        for (k, &v) in &file.values {
            let w = Word::parse(k)?;
            if w.len() != file.depth || !a.is_admissible(&w) {
                return Err(Error::ExtraWord(w));
            }
            values.insert(w, v);
        }
        LocFun::new(a, file.depth, values)
    }
}

/// Serialized form `{"depth": K, "values": {"1,2": 3, ...}}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocFunFile {
    pub depth: usize,
    pub values: BTreeMap<String, i64>,
}

/// A continuous map `X_A → X_B` that can be evaluated on finite windows.
pub trait WindowMap {
    /// Input symbols needed to determine the first `len` output symbols,
    /// for every input word.
    fn lookahead(&self, len: usize) -> usize;

    /// First `len` symbols of `h(x)` for `x ∈ U_w`, when `|w| >= lookahead(len)`.
    fn image_prefix(&self, w: &[usize], len: usize) -> Option<Vec<usize>>;
}

/// Sliding block code with window `D`: `h(x)_i = table(x_i ... x_{i+D-1})`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockCode {
    window: usize,
    table: BTreeMap<Word, usize>,
}

impl BlockCode {
    /// Checks totality on `B_D(X_A)`, the target range, and that every
    /// admissible `(D+1)`-word maps to an admissible 2-word of `B`.
    pub fn new(
        source: &TransitionMatrix,
        target: &TransitionMatrix,
        window: usize,
        table: BTreeMap<Word, usize>,
    ) -> Result<Self> {
        if window == 0 {
            return Err(Error::BadDepth(0));
        }
        for w in source.words(window) {
            match table.get(&w) {
                None => return Err(Error::MissingWord(w)),
                Some(&s) if !(1..=target.n()).contains(&s) => {
                    return Err(Error::BadBlockSymbol {
                        word: w,
                        symbol: s,
                        n: target.n(),
                    })
                }
                _ => {}
            }
        }
        if table.len() != source.words(window).len() {
            let extra = table
                .keys()
                .find(|k| k.len() != window || !source.is_admissible(k))
                .cloned()
                .unwrap_or_default();
            return Err(Error::ExtraWord(extra));
        }
        let code = BlockCode { window, table };
        for w in source.words(window + 1) {
            let img = code.image_prefix(&w, 2).expect("total table");
            if !target.allows(img[0], img[1]) {
                return Err(Error::BlockCodeNotSliding(w));
            }
        }
        Ok(code)
    }

    pub fn identity(a: &TransitionMatrix) -> Self {
        let table = a.words(1).into_iter().map(|w| {
            let s = w[0];
            (w, s)
        });
        BlockCode {
            window: 1,
            table: table.collect(),
        }
    }

    pub fn window(&self) -> usize {
        self.window
    }
}

impl WindowMap for BlockCode {
    fn lookahead(&self, len: usize) -> usize {
        len + self.window - 1
    }

    fn image_prefix(&self, w: &[usize], len: usize) -> Option<Vec<usize>> {
        if w.len() < self.lookahead(len) {
            return None;
        }
        (0..len)
            .map(|i| self.table.get(&w[i..i + self.window]).copied())
            .collect()
    }
}

/// A homeomorphism of `X_A` given by finitely many prefix rewrites
/// `from·y ↦ to·y`: the shape of elements of the continuous full group.
///
/// The `from` cylinders partition `X_A`, the `to` cylinders partition `X_A`,
/// and each rule's last symbols share their follower sets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrefixReplacement {
    rules: Vec<(Word, Word)>,
}

impl PrefixReplacement {
    pub fn new(a: &TransitionMatrix, rules: Vec<(Word, Word)>) -> Result<Self> {
        if rules.is_empty() {
            return Err(Error::BadRules("no rules".into()));
        }
        for (from, to) in &rules {
            if from.is_empty() || to.is_empty() {
                return Err(Error::BadRules("empty word in a rule".into()));
            }
            a.check_word(from)?;
            a.check_word(to)?;
            if a.followers(from.last().unwrap()) != a.followers(to.last().unwrap()) {
                return Err(Error::BadRules(format!(
                    "[{from}] -> [{to}]: last symbols have different followers"
                )));
            }
        }
        let froms: Vec<&Word> = rules.iter().map(|r| &r.0).collect();
        let tos: Vec<&Word> = rules.iter().map(|r| &r.1).collect();
        check_partition(a, &froms).map_err(|e| Error::BadRules(format!("domain: {e}")))?;
        check_partition(a, &tos).map_err(|e| Error::BadRules(format!("range: {e}")))?;
        Ok(PrefixReplacement { rules })
    }

    pub fn rules(&self) -> &[(Word, Word)] {
        &self.rules
    }

    fn rule_for(&self, w: &[usize]) -> Option<&(Word, Word)> {
        self.rules.iter().find(|(from, _)| w.starts_with(from))
    }

    /// `k_τ` and `l_τ` with `σ^{k_τ(x)}(τ x) = σ^{l_τ(x)}(x)`: `|to|` and `|from|` on each rule.
    pub fn lag_functions(&self, a: &TransitionMatrix) -> (LocFun, LocFun) {
        let depth = self.rules.iter().map(|r| r.0.len()).max().unwrap_or(1);
        let k = LocFun::from_fn(a, depth, |w| self.rule_for(w).unwrap().1.len() as i64);
        let l = LocFun::from_fn(a, depth, |w| self.rule_for(w).unwrap().0.len() as i64);
        (k, l)
    }
}

/// Cylinders of `words` are pairwise disjoint and cover `X_A`.
fn check_partition(a: &TransitionMatrix, words: &[&Word]) -> std::result::Result<(), String> {
    let depth = words.iter().map(|w| w.len()).max().unwrap_or(0);
    for u in a.words(depth) {
        let hits = words.iter().filter(|w| u.starts_with(w)).count();
        if hits != 1 {
            return Err(format!("[{u}] lies in {hits} cylinders"));
        }
    }
    Ok(())
}

impl WindowMap for PrefixReplacement {
    fn lookahead(&self, len: usize) -> usize {
        self.rules.iter().map(|r| r.0.len()).max().unwrap_or(0) + len
    }

    fn image_prefix(&self, w: &[usize], len: usize) -> Option<Vec<usize>> {
        let (from, to) = self.rule_for(w)?;
        let mut out = to.to_vec();
        out.extend_from_slice(&w[from.len()..]);
        if out.len() < len {
            return None;
        }
        out.truncate(len);
        Some(out)
    }
}

/// `Ψ_h(g)(x) = Σ_{i=0}^{l1(x)} g(σ_B^i h x) − Σ_{j=0}^{k1(x)} g(σ_B^j h σ_A x)`.
///
/// `(k1, l1)` must satisfy `σ_B^{k1(x)}(h(σ_A x)) = σ_B^{l1(x)}(h x)`; this is
/// checked on every cylinder of a depth that determines both sides with at
/// least `depth(g)` symbols of overlap.
pub fn psi_transfer(
    a: &TransitionMatrix,
    b: &TransitionMatrix,
    h: &impl WindowMap,
    g: &LocFun,
    k1: &LocFun,
    l1: &LocFun,
) -> Result<LocFun> {
    for f in [k1, l1] {
        if let Some((w, &v)) = f.values().iter().find(|(_, &v)| v < 0) {
            return Err(Error::BadValue {
                word: w.clone(),
                value: v,
                expected: "nonnegative",
            });
        }
    }
    let l_max = l1.max_value() as usize;
    let k_max = k1.max_value() as usize;
    let kg = g.depth();
    // h(x) through index l_max + kg, and h(σx) through index k_max + kg.
    let need_hx = h.lookahead(l_max + kg);
    let need_hsx = 1 + h.lookahead(k_max + kg);
    let depth = need_hx.max(need_hsx).max(k1.depth()).max(l1.depth());

    let mut table = BTreeMap::new();
    for w in a.words(depth) {
        let l = l1.eval(&w)? as usize;
        let k = k1.eval(&w)? as usize;
        let hx = h.image_prefix(&w, l + kg).ok_or(Error::WordTooShort {
            len: w.len(),
            needed: need_hx,
        })?;
        let hsx = h.image_prefix(&w[1..], k + kg).ok_or(Error::WordTooShort {
            len: w.len(),
            needed: need_hsx,
        })?;
        if !b.is_admissible(&hx) || !b.is_admissible(&hsx) {
            return Err(Error::Inadmissible(w));
        }
        // inclusive sums: l + 1 and k + 1 terms
        let left = g.cocycle_sum(&hx, l + 1)?;
        let right = g.cocycle_sum(&hsx, k + 1)?;
        table.insert(w, left - right);
    }
    check_orbit_identity(a, h, k1, l1, depth + kg)?;
    LocFun::new(a, depth, table)
}

/// Compares `σ^{k1}(h σx)` and `σ^{l1}(h x)` on all cylinders of length `depth`
/// over the longest window both sides determine.
fn check_orbit_identity(
    a: &TransitionMatrix,
    h: &impl WindowMap,
    k1: &LocFun,
    l1: &LocFun,
    depth: usize,
) -> Result<()> {
    for w in a.words(depth) {
        let l = l1.eval(&w)? as usize;
        let k = k1.eval(&w)? as usize;
        let out_len = |input: usize| (0..=input).rev().find(|&m| h.lookahead(m) <= input).unwrap_or(0);
        let hx = h.image_prefix(&w, out_len(w.len())).unwrap_or_default();
        let hsx = h.image_prefix(&w[1..], out_len(w.len() - 1)).unwrap_or_default();
        if hx.len() <= l || hsx.len() <= k {
            continue;
        }
        let left = &hx[l..];
        let right = &hsx[k..];
        let overlap = left.len().min(right.len());
        if left[..overlap] != right[..overlap] {
            return Err(Error::OrbitIdentityFails(w));
        }
    }
    Ok(())
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

    fn table(a: &TransitionMatrix, depth: usize, entries: &[(&[usize], i64)]) -> LocFun {
        let map = entries.iter().map(|(k, v)| (w(k), *v)).collect();
        LocFun::new(a, depth, map).unwrap()
    }

    fn golden() -> TransitionMatrix {
        m(&[&[1, 1], &[1, 0]])
    }

    fn full2() -> TransitionMatrix {
        m(&[&[1, 1], &[1, 1]])
    }

    #[test]
    fn chi_h_examples() {
        let a = golden();
        assert_eq!(LocFun::chi_h(&a, &[1, 2]), LocFun::constant(&a, 1));
        assert_eq!(LocFun::chi_h(&a, &[]), LocFun::constant(&a, 0));
        let chi = LocFun::chi_h(&a, &[1]);
        assert_eq!(chi.depth(), 1);
        assert_eq!(chi.values()[&w(&[1])], 1);
        assert_eq!(chi.values()[&w(&[2])], 0);
    }

    #[test]
    fn cocycle_sum_examples() {
        let a = golden();
        let one = LocFun::constant(&a, 1);
        assert_eq!(one.cocycle_sum(&[1, 2, 1, 1, 2], 4).unwrap(), 4);
        let chi = LocFun::chi_h(&a, &[1]);
        assert_eq!(chi.cocycle_sum(&[1, 2, 1, 1], 3).unwrap(), 2);
        let f = table(&a, 2, &[(&[1, 1], 2), (&[1, 2], -1), (&[2, 1], 0)]);
        assert_eq!(f.cocycle_sum(&[1, 1, 2, 1, 1], 3).unwrap(), 1);
        assert_eq!(f.cocycle_sum(&[], 0).unwrap(), 0);
        assert!(matches!(
            f.cocycle_sum(&[1, 1, 2], 3),
            Err(Error::WordTooShort { len: 3, needed: 4 })
        ));
    }

    #[test]
    fn coboundary_transform_examples() {
        let a = golden();
        assert_eq!(
            LocFun::constant(&a, 7).coboundary_transform(&a),
            LocFun::constant(&a, 1)
        );
        let full = full2();
        let b = LocFun::chi_cylinder(&full, &[1]);
        let t = b.coboundary_transform(&full);
        assert_eq!(t.depth(), 2);
        let expect: Vec<(Word, i64)> = vec![
            (w(&[1, 1]), 1),
            (w(&[1, 2]), 0),
            (w(&[2, 1]), 2),
            (w(&[2, 2]), 1),
        ];
        assert_eq!(t.values().clone().into_iter().collect::<Vec<_>>(), expect);

        let t = LocFun::chi_h(&a, &[1]).coboundary_transform(&a);
        let expect: Vec<(Word, i64)> = vec![(w(&[1, 1]), 1), (w(&[1, 2]), 0), (w(&[2, 1]), 2)];
        assert_eq!(t.values().clone().into_iter().collect::<Vec<_>>(), expect);
    }

    #[test]
    fn eval_on_point_examples() {
        let full = full2();
        let c = LocFun::constant(&full, -3);
        let p = PointSpec::parse(&full, "2:1").unwrap();
        assert_eq!(c.eval_on_point(&p, 5).unwrap(), -3);
        let chi = LocFun::chi_h(&full, &[1]);
        assert_eq!(chi.eval_on_point(&p, 0).unwrap(), 0);
        assert_eq!(chi.eval_on_point(&p, 1).unwrap(), 1);

        let a = golden();
        let f = table(&a, 2, &[(&[1, 1], 5), (&[1, 2], 6), (&[2, 1], 7)]);
        let q = PointSpec::parse(&a, "1,2").unwrap();
        let vals: Vec<i64> = (0..4).map(|i| f.eval_on_point(&q, i).unwrap()).collect();
        assert_eq!(vals, vec![6, 7, 6, 7]);
    }

    #[test]
    fn new_rejects_partial_tables() {
        let a = golden();
        let map: BTreeMap<Word, i64> = [(w(&[1, 1]), 1), (w(&[1, 2]), 1)].into_iter().collect();
        assert_eq!(LocFun::new(&a, 2, map), Err(Error::MissingWord(w(&[2, 1]))));
        let map: BTreeMap<Word, i64> = [(w(&[1, 1]), 1), (w(&[1, 2]), 1), (w(&[2, 1]), 1), (w(&[2, 2]), 1)]
            .into_iter()
            .collect();
        assert_eq!(LocFun::new(&a, 2, map), Err(Error::ExtraWord(w(&[2, 2]))));
    }

    #[test]
    fn normalization_reduces_depth() {
        let a = golden();
        let f = table(&a, 2, &[(&[1, 1], 4), (&[1, 2], 4), (&[2, 1], -1)]);
        assert_eq!(f.depth(), 1);
        assert_eq!(f, LocFun::first_coordinate(&a, &[4, -1]).unwrap());
    }

    #[test]
    fn file_round_trip() {
        let a = golden();
        let f = table(&a, 2, &[(&[1, 1], 2), (&[1, 2], -1), (&[2, 1], 0)]);
        let file = f.to_file();
        assert_eq!(file.values["1,2"], -1);
        assert_eq!(LocFun::from_file(&a, &file).unwrap(), f);
    }

    #[test]
    fn psi_identity_code() {
        let a = golden();
        let h = BlockCode::identity(&a);
        let g = table(&a, 2, &[(&[1, 1], 2), (&[1, 2], -1), (&[2, 1], 5)]);
        let zero = LocFun::constant(&a, 0);
        let one = LocFun::constant(&a, 1);
        assert_eq!(psi_transfer(&a, &a, &h, &g, &zero, &one).unwrap(), g);
    }

    #[test]
    fn psi_conjugacy_gives_composition() {
        // 2-block presentation of the golden mean shift and the recoding map
        let a = golden();
        let hb = crate::sft::higher_block(&a, 2).unwrap();
        let b = hb.matrix.clone();
        let table: BTreeMap<Word, usize> = a
            .words(2)
            .into_iter()
            .map(|u| {
                let s = hb.symbol_of(&u).unwrap();
                (u, s)
            })
            .collect();
        let h = BlockCode::new(&a, &b, 2, table).unwrap();
        let g = LocFun::first_coordinate(&b, &[3, -2, 7]).unwrap();
        let zero = LocFun::constant(&a, 0);
        let one = LocFun::constant(&a, 1);
        let psi = psi_transfer(&a, &b, &h, &g, &zero, &one).unwrap();
        // g∘h evaluated directly: depends on the first two symbols of x
        let g_h = LocFun::from_fn(&a, 2, |u| g.eval(&[hb.symbol_of(&u[..2]).unwrap()]).unwrap());
        assert_eq!(psi, g_h);
    }

    #[test]
    fn psi_rejects_wrong_lags() {
        let a = golden();
        let h = BlockCode::identity(&a);
        let g = LocFun::constant(&a, 1);
        let zero = LocFun::constant(&a, 0);
        assert!(matches!(
            psi_transfer(&a, &a, &h, &g, &zero, &zero),
            Err(Error::OrbitIdentityFails(_))
        ));
        let neg = LocFun::constant(&a, -1);
        assert!(matches!(
            psi_transfer(&a, &a, &h, &g, &neg, &zero),
            Err(Error::BadValue { .. })
        ));
    }

    #[test]
    fn psi_full_group_element() {
        let full = full2();
        let tau = PrefixReplacement::new(
            &full,
            vec![
                (w(&[1, 1]), w(&[1])),
                (w(&[1, 2]), w(&[2, 2])),
                (w(&[2]), w(&[2, 1])),
            ],
        )
        .unwrap();
        let (k, l) = tau.lag_functions(&full);
        let d = l.sub(&k, &full);
        // lags for the pair (x, σx): σ^{k1}(τσx) = σ^{l1}(τx)
        let k1 = k.compose_shift(&full).add(&l, &full);
        let l1 = l.compose_shift(&full).add(&k, &full).add_constant(&full, 1);
        let one = LocFun::constant(&full, 1);
        let psi = psi_transfer(&full, &full, &tau, &one, &k1, &l1).unwrap();
        assert_eq!(psi, d.coboundary_transform(&full));
        assert_eq!(d.values()[&w(&[1, 1])], 1);
        assert_eq!(d.values()[&w(&[1, 2])], 0);
        assert_eq!(d.values()[&w(&[2, 1])], -1);
    }

    #[test]
    fn block_code_validation() {
        let a = golden();
        let full = full2();
        // identity table into the full shift is a valid sliding code
        let table: BTreeMap<Word, usize> = [(w(&[1]), 1), (w(&[2]), 2)].into_iter().collect();
        assert!(BlockCode::new(&a, &full, 1, table).is_ok());
        // full shift onto the golden mean with identity symbols is not
        let table: BTreeMap<Word, usize> = [(w(&[1]), 1), (w(&[2]), 2)].into_iter().collect();
        assert!(matches!(
            BlockCode::new(&full, &a, 1, table),
            Err(Error::BlockCodeNotSliding(_))
        ));
        let table: BTreeMap<Word, usize> = [(w(&[1]), 1), (w(&[2]), 3)].into_iter().collect();
        assert!(matches!(
            BlockCode::new(&a, &full, 1, table),
            Err(Error::BadBlockSymbol { .. })
        ));
    }

    #[test]
    fn prefix_replacement_validation() {
        let full = full2();
        let ok = vec![
            (w(&[1, 1]), w(&[1])),
            (w(&[1, 2]), w(&[2, 2])),
            (w(&[2]), w(&[2, 1])),
        ];
        assert!(PrefixReplacement::new(&full, ok).is_ok());
        let overlapping = vec![(w(&[1]), w(&[1])), (w(&[1, 2]), w(&[2]))];
        assert!(PrefixReplacement::new(&full, overlapping).is_err());
        let a = golden();
        let bad_followers = vec![(w(&[1]), w(&[2])), (w(&[2]), w(&[1]))];
        assert!(PrefixReplacement::new(&a, bad_followers).is_err());
    }
}
