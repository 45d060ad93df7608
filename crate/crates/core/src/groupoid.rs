//! Compact open bisections `Z(μ,ν)` of the groupoid `G_A`, their calculus,
//! and membership in the cocycle subgroupoid `G_{A,f}`.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::coboundary;
use crate::error::{Error, Result};
use crate::locfun::LocFun;
use crate::sft::{PointSpec, TransitionMatrix, Word};
use crate::support;

/// `Z(μ,ν) = {(μw, |μ|-|ν|, νw)}`, kept end-matched: both words share
/// their last symbol, so the allowed tails `w` coincide.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Bisection {
    pub mu: Word,
    pub nu: Word,
}

impl Bisection {
    /// Trusts the caller on admissibility and end-matching.
    pub fn new(mu: Word, nu: Word) -> Self {
        Bisection { mu, nu }
    }

    pub fn diagonal(mu: Word) -> Self {
        Bisection { nu: mu.clone(), mu }
    }

    pub fn is_diagonal(&self) -> bool {
        self.mu == self.nu
    }

    pub fn is_end_matched(&self) -> bool {
        !self.mu.is_empty() && self.mu.last() == self.nu.last()
    }

    /// The lag `|μ| - |ν|` carried by every element.
    pub fn lag(&self) -> i64 {
        self.mu.len() as i64 - self.nu.len() as i64
    }

    pub fn invert(&self) -> Bisection {
        Bisection {
            mu: self.nu.clone(),
            nu: self.mu.clone(),
        }
    }

    /// `Z(μ,ν)·Z(ξ,η)`; `None` when the product is empty.
    pub fn compose(&self, other: &Bisection) -> Option<Bisection> {
        let (mu, nu) = (&self.mu, &self.nu);
        let (xi, eta) = (&other.mu, &other.nu);
        if xi.starts_with(nu) {
            Some(Bisection {
                mu: mu.concat(&xi[nu.len()..]),
                nu: eta.clone(),
            })
        } else if nu.starts_with(xi) {
            Some(Bisection {
                mu: mu.clone(),
                nu: eta.concat(&nu[xi.len()..]),
            })
        } else {
            None
        }
    }
}

/// Rewrites `Z(μ,ν)` as a disjoint union of end-matched bisections.
pub fn canonicalize(a: &TransitionMatrix, mu: &Word, nu: &Word) -> Result<Vec<Bisection>> {
    for w in [mu, nu] {
        if w.is_empty() {
            return Err(Error::EmptyWord);
        }
        a.check_word(w)?;
    }
    let (lm, ln) = (mu.last().unwrap(), nu.last().unwrap());
    if lm == ln {
        return Ok(vec![Bisection::new(mu.clone(), nu.clone())]);
    }
    Ok((1..=a.n())
        .filter(|&j| a.allows(lm, j) && a.allows(ln, j))
        .map(|j| Bisection::new(mu.concat(&[j]), nu.concat(&[j])))
        .collect())
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct MembershipSplit {
    pub inside: Vec<Bisection>,
    pub outside: Vec<Bisection>,
}

impl MembershipSplit {
    pub fn fully_inside(&self) -> bool {
        self.outside.is_empty()
    }

    pub fn fully_outside(&self) -> bool {
        self.inside.is_empty()
    }

    fn extend(&mut self, other: MembershipSplit) {
        self.inside.extend(other.inside);
        self.outside.extend(other.outside);
    }
}

/// Splits an end-matched `Z(μ,ν)` into the parts inside and outside `G_{A,f}`.
///
/// An element `(μwy, |μ|-|ν|, νwy)` lies in `G_{A,f}` iff
/// `f^{|μ|}(μwy) = f^{|ν|}(νwy)`: for larger exponents `|μ|+p, |ν|+p` both
/// sides gain the same `f^p` of the common tail. That condition only reads
/// `depth(f) - 1` symbols past the words, so refining by those tails suffices.
pub fn membership_split(a: &TransitionMatrix, f: &LocFun, z: &Bisection) -> Result<MembershipSplit> {
    if !z.is_end_matched() {
        return Err(Error::Invalid(format!(
            "bisection ([{}], [{}]) is not end-matched",
            z.mu, z.nu
        )));
    }
    a.check_word(&z.mu)?;
    a.check_word(&z.nu)?;
    let pad = f.depth() - 1;
    let mut split = MembershipSplit::default();
    for ext in a.extensions(&z.mu, pad) {
        let tail = &ext[z.mu.len()..];
        let nu_ext = z.nu.concat(tail);
        let left = f.cocycle_sum(&ext, z.mu.len())?;
        let right = f.cocycle_sum(&nu_ext, z.nu.len())?;
        let piece = Bisection::new(ext, nu_ext);
        if left == right {
            split.inside.push(piece);
        } else {
            split.outside.push(piece);
        }
    }
    Ok(split)
}

/// Splits every canonical piece of `Z(μ,ν)`.
pub fn split_words(a: &TransitionMatrix, f: &LocFun, mu: &Word, nu: &Word) -> Result<MembershipSplit> {
    let mut out = MembershipSplit::default();
    for piece in canonicalize(a, mu, nu)? {
        out.extend(membership_split(a, f, &piece)?);
    }
    Ok(out)
}

/// `Z(μ,ν) ⊆ G_{A,f}`.
pub fn generator_fixed(a: &TransitionMatrix, f: &LocFun, mu: &Word, nu: &Word) -> Result<bool> {
    Ok(split_words(a, f, mu, nu)?.fully_inside())
}

/// Cylinders of `U_μ` whose points `x` have `(x, |μ|-|ν|, ·) ∈ G_{A,f}` via `Z(μ,ν)`.
pub fn expectation_support(a: &TransitionMatrix, f: &LocFun, mu: &Word, nu: &Word) -> Result<Vec<Word>> {
    let mut words: Vec<Word> = split_words(a, f, mu, nu)?
        .inside
        .into_iter()
        .map(|z| z.mu)
        .collect();
    words.sort();
    Ok(words)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SearchBounds {
    pub k_max: usize,
    pub value_max: i64,
}

impl Default for SearchBounds {
    fn default() -> Self {
        SearchBounds {
            k_max: 24,
            value_max: 64,
        }
    }
}

/// `x ∈ U_μ` with `σ^k x = σ^l z` and `f^k(x) = f^l(z)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MinimalityWitness {
    pub x: PointSpec,
    pub k: usize,
    pub l: usize,
}

impl MinimalityWitness {
    pub fn verify(&self, f: &LocFun, z: &PointSpec, mu: &Word) -> Result<bool> {
        Ok(self.x.window(0, mu.len()) == *mu
            && self.x.shift(self.k).same_point(&z.shift(self.l))
            && f.cocycle_sum_on_point(&self.x, 0, self.k)? == f.cocycle_sum_on_point(z, 0, self.l)?)
    }
}

/// Paths `p ⊇ μ` of one length, keyed by (last `max(depth-1, 1)` symbols, sum of
/// the windows lying inside `p`), each with its lexicographically least `p`.
type Layer = BTreeMap<(Vec<usize>, i64), Word>;

/// Searches `x = p · σ^l(z)` in order of `l`, then `k = |p|`, then `p`.
///
/// Exhaustive for `k, l <= k_max` among paths whose partial sums stay within
/// `value_max` in absolute value. `None` is not a proof that no witness exists.
pub fn minimality_search(
    a: &TransitionMatrix,
    f: &LocFun,
    z: &PointSpec,
    mu: &Word,
    bounds: SearchBounds,
) -> Result<Option<MinimalityWitness>> {
    if mu.is_empty() {
        return Err(Error::EmptyWord);
    }
    a.check_word(mu)?;
    let kd = f.depth();
    let tail_len = kd - 1;
    let layers = build_layers(f, a, mu, bounds)?;

    for l in 0..=bounds.k_max {
        let target = f.cocycle_sum_on_point(z, 0, l)?;
        if target.abs() > bounds.value_max {
            continue;
        }
        let rest = z.shift(l);
        let head = rest.window(0, tail_len.max(1));
        for k in 0..=bounds.k_max {
            let found = if k < mu.len() {
                // x = μ[..k] · σ^l z must still start with μ
                if rest.window(0, mu.len() - k)[..] != mu[k..] {
                    None
                } else {
                    let x = rest.prepend(&mu[..k]);
                    let v = f.cocycle_sum_on_point(&x, 0, k)?;
                    (v == target).then_some(x)
                }
            } else {
                let mut hit = None;
                for ((tail, partial), p) in &layers[k - mu.len()] {
                    if !a.allows(p.last().unwrap(), head[0]) {
                        continue;
                    }
                    // windows of f starting in the last tail_len symbols of p
                    let c = tail_len.min(p.len());
                    let mut joined = tail[tail.len() - c..].to_vec();
                    joined.extend_from_slice(&head[..tail_len]);
                    let crossing = f.cocycle_sum(&joined, c)?;
                    if partial + crossing == target && hit.as_ref().is_none_or(|q: &Word| p < q) {
                        hit = Some(p.clone());
                    }
                }
                hit.map(|p| rest.prepend(&p))
            };
            if let Some(x) = found {
                let witness = MinimalityWitness {
                    x: x.canonical(),
                    k,
                    l,
                };
                debug_assert!(witness.verify(f, z, mu)?);
                if !witness.verify(f, z, mu)? {
                    return Err(Error::Invalid("witness failed verification".into()));
                }
                return Ok(Some(witness));
            }
        }
    }
    Ok(None)
}

fn build_layers(f: &LocFun, a: &TransitionMatrix, mu: &Word, bounds: SearchBounds) -> Result<Vec<Layer>> {
    let kd = f.depth();
    let tail_len = kd - 1;
    let key = |p: &Word| -> Result<(Vec<usize>, i64)> {
        let inner = p.len().saturating_sub(tail_len);
        let partial = if inner == 0 { 0 } else { f.cocycle_sum(p, inner)? };
        // the last symbol is always kept: it decides the splice
        let t = tail_len.max(1).min(p.len());
        Ok((p[p.len() - t..].to_vec(), partial))
    };
    let mut layers = Vec::new();
    if mu.len() > bounds.k_max {
        return Ok(layers);
    }
    let mut layer = Layer::new();
    let (t, partial) = key(mu)?;
    if partial.abs() <= bounds.value_max {
        layer.insert((t, partial), mu.clone());
    }
    for _ in mu.len()..bounds.k_max {
        let mut next = Layer::new();
        for p in layer.values() {
            for j in a.followers(p.last().unwrap()) {
                let q = p.concat(&[j]);
                let k = key(&q)?;
                if k.1.abs() > bounds.value_max {
                    continue;
                }
                match next.get(&k) {
                    Some(old) if old <= &q => {}
                    _ => {
                        next.insert(k, q);
                    }
                }
            }
        }
        layers.push(layer);
        layer = next;
    }
    layers.push(layer);
    Ok(layers)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum MinimalityVerdict {
    Minimal {
        reason: String,
    },
    /// Pairs `(z, μ)` for which no witness exists (`certified`) or none was
    /// found within the search bounds.
    NonMinimalEvidence {
        pairs: Vec<(PointSpec, Word)>,
        certified: bool,
    },
    Unknown,
}

/// Deterministic sample of base points and cylinders: the first five
/// periodic orbits (by period, then word) padded with preperiodic points,
/// and the first five words of lengths 1 to 3.
pub fn sample_grid(a: &TransitionMatrix) -> (Vec<PointSpec>, Vec<Word>) {
    const SIZE: usize = 5;
    let mut points: Vec<PointSpec> = Vec::new();
    let mut orbits: Vec<Word> = Vec::new();
    for len in 1..=a.n() {
        for w in a.words(len) {
            let closes = a.allows(w.last().unwrap(), w[0]);
            let p = PointSpec {
                preperiod: Word::empty(),
                period: w.clone(),
            };
            if closes && p.canonical().period == w && p.canonical().preperiod.is_empty() {
                orbits.push(w.clone());
                if points.len() < SIZE {
                    points.push(p);
                }
            }
        }
    }
    'pad: for pre_len in 1..=3 {
        for u in a.words(pre_len) {
            for c in &orbits {
                if points.len() >= SIZE {
                    break 'pad;
                }
                if !a.allows(u.last().unwrap(), c[0]) {
                    continue;
                }
                let p = PointSpec {
                    preperiod: u.clone(),
                    period: c.clone(),
                }
                .canonical();
                if !points.contains(&p) {
                    points.push(p);
                }
            }
        }
    }
    let mut mus = Vec::new();
    for len in 1..=3 {
        mus.extend(a.words(len));
    }
    mus.truncate(SIZE);
    (points, mus)
}

/// Exact answers for the classes with known structure, otherwise a bounded
/// search over [`sample_grid`].
pub fn minimality_verdict(a: &TransitionMatrix, f: &LocFun, bounds: SearchBounds) -> Result<MinimalityVerdict> {
    if !a.is_irreducible() {
        return Err(Error::Reducible);
    }
    if f.is_constant() == Some(0) {
        return Ok(MinimalityVerdict::Minimal {
            reason: "f is zero".into(),
        });
    }
    if let Some(h) = coboundary::chi_h_shape(f) {
        if let Some(cycle) = support::saturation_witness(a, &h)? {
            // f vanishes along cycle^∞ while every x in U_{min H} has f^k(x) >= 1 for k >= 1
            let z = PointSpec::periodic(a, cycle)?;
            let mu = Word::new(vec![h[0]]);
            return Ok(MinimalityVerdict::NonMinimalEvidence {
                pairs: vec![(z, mu)],
                certified: true,
            });
        }
        if support::is_primitive_h(a, &h)? {
            return Ok(MinimalityVerdict::Minimal {
                reason: format!("f = chi_H with H = {h:?} saturated and A_H primitive"),
            });
        }
    }
    if a.is_primitive() && coboundary::one_b_potential(a, f)?.is_some() {
        return Ok(MinimalityVerdict::Minimal {
            reason: "f = 1_b with A primitive".into(),
        });
    }
    let (points, mus) = sample_grid(a);
    let mut missing = Vec::new();
    for z in &points {
        for mu in &mus {
            if minimality_search(a, f, z, mu, bounds)?.is_none() {
                missing.push((z.clone(), mu.clone()));
            }
        }
    }
    if missing.is_empty() {
        Ok(MinimalityVerdict::Unknown)
    } else {
        Ok(MinimalityVerdict::NonMinimalEvidence {
            pairs: missing,
            certified: false,
        })
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

    fn bis(mu: &[usize], nu: &[usize]) -> Bisection {
        Bisection::new(w(mu), w(nu))
    }

    fn golden() -> TransitionMatrix {
        m(&[&[1, 1], &[1, 0]])
    }

    fn full2() -> TransitionMatrix {
        m(&[&[1, 1], &[1, 1]])
    }

    #[test]
    fn canonicalize_examples() {
        let a = golden();
        assert_eq!(canonicalize(&a, &w(&[1, 2]), &w(&[1, 2])).unwrap(), vec![bis(&[1, 2], &[1, 2])]);
        assert_eq!(canonicalize(&a, &w(&[1]), &w(&[2])).unwrap(), vec![bis(&[1, 1], &[2, 1])]);
        assert_eq!(
            canonicalize(&full2(), &w(&[1]), &w(&[2])).unwrap(),
            vec![bis(&[1, 1], &[2, 1]), bis(&[1, 2], &[2, 2])]
        );
        assert!(canonicalize(&a, &w(&[2, 2]), &w(&[1])).is_err());
    }

    #[test]
    fn compose_examples() {
        let z = bis(&[1, 1], &[2, 1]);
        assert_eq!(z.compose(&bis(&[2, 1], &[1])), Some(bis(&[1, 1], &[1])));
        assert_eq!(z.compose(&bis(&[2, 1, 1], &[1, 1])), Some(bis(&[1, 1, 1], &[1, 1])));
        assert_eq!(z.compose(&bis(&[1, 2], &[2, 2])), None);
        assert_eq!(z.invert().invert(), z);
        assert_eq!(z.compose(&z.invert()), Some(bis(&[1, 1], &[1, 1])));
    }

    #[test]
    fn split_examples() {
        let a = golden();
        let one = LocFun::constant(&a, 1);
        let z = bis(&[1, 2, 1], &[2, 1]);
        assert_eq!(membership_split(&a, &one, &z).unwrap().outside, vec![z.clone()]);
        let z2 = bis(&[1, 2, 1], &[1, 1, 1]);
        assert!(membership_split(&a, &one, &z2).unwrap().fully_inside());

        let f = LocFun::from_fn(&a, 2, |u| match u {
            [1, 1] => 1,
            [1, 2] => 0,
            _ => 1,
        });
        let split = membership_split(&a, &f, &bis(&[1], &[2, 1])).unwrap();
        assert!(split.inside.is_empty());
        assert_eq!(split.outside, vec![bis(&[1, 1], &[2, 1, 1]), bis(&[1, 2], &[2, 1, 2])]);
        assert!(expectation_support(&a, &f, &w(&[1]), &w(&[2, 1])).unwrap().is_empty());
    }

    #[test]
    fn generator_examples() {
        let a = golden();
        let zero = LocFun::constant(&a, 0);
        assert!(generator_fixed(&a, &zero, &w(&[1]), &w(&[1, 2, 1])).unwrap());
        let chi = LocFun::chi_h(&a, &[1]);
        assert!(!generator_fixed(&a, &chi, &w(&[1]), &w(&[1, 1])).unwrap());
        assert!(generator_fixed(&a, &chi, &w(&[1]), &w(&[2, 1])).unwrap());
        assert_eq!(
            expectation_support(&a, &chi, &w(&[1]), &w(&[2, 1])).unwrap(),
            vec![w(&[1])]
        );
        let one = LocFun::constant(&a, 1);
        assert!(generator_fixed(&a, &one, &w(&[1, 2]), &w(&[2, 1])).unwrap());
    }

    #[test]
    fn search_examples() {
        let a = golden();
        let zero = LocFun::constant(&a, 0);
        let z = PointSpec::parse(&a, "1,2").unwrap();
        let wit = minimality_search(&a, &zero, &z, &w(&[2]), SearchBounds::default())
            .unwrap()
            .unwrap();
        assert_eq!(wit.l, 0);
        assert!(wit.verify(&zero, &z, &w(&[2])).unwrap());

        let full = full2();
        let chi = LocFun::chi_h(&full, &[1]);
        let z = PointSpec::parse(&full, "2").unwrap();
        assert_eq!(
            minimality_search(&full, &chi, &z, &w(&[1]), SearchBounds::default()).unwrap(),
            None
        );
    }

    #[test]
    fn search_with_depth_two() {
        let full = full2();
        let b = LocFun::chi_cylinder(&full, &[1]);
        let f = b.coboundary_transform(&full);
        let (points, mus) = sample_grid(&full);
        assert_eq!(points.len(), 5);
        assert_eq!(mus.len(), 5);
        for z in &points {
            for mu in &mus {
                let wit = minimality_search(&full, &f, z, mu, SearchBounds::default())
                    .unwrap()
                    .unwrap();
                assert!(wit.verify(&f, z, mu).unwrap());
            }
        }
    }

    #[test]
    fn verdict_examples() {
        let a = golden();
        let b = SearchBounds::default();
        assert!(matches!(
            minimality_verdict(&a, &LocFun::constant(&a, 1), b).unwrap(),
            MinimalityVerdict::Minimal { .. }
        ));
        assert!(matches!(
            minimality_verdict(&a, &LocFun::chi_h(&a, &[1]), b).unwrap(),
            MinimalityVerdict::Minimal { .. }
        ));
        let full = full2();
        let v = minimality_verdict(&full, &LocFun::chi_h(&full, &[1]), b).unwrap();
        assert_eq!(
            v,
            MinimalityVerdict::NonMinimalEvidence {
                pairs: vec![(PointSpec::parse(&full, "2").unwrap(), w(&[1]))],
                certified: true
            }
        );
    }
}
