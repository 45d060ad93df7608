#![allow(dead_code)]

use cocycle_core::{LocFun, TransitionMatrix, Word};
use rand::seq::SliceRandom;
use rand::Rng;

pub fn matrix(rows: &[&[i64]]) -> TransitionMatrix {
    TransitionMatrix::new(rows.iter().map(|r| r.to_vec()).collect()).unwrap()
}

pub fn w(s: &[usize]) -> Word {
    Word::new(s.to_vec())
}

pub fn golden() -> TransitionMatrix {
    matrix(&[&[1, 1], &[1, 0]])
}

pub fn full(n: usize) -> TransitionMatrix {
    TransitionMatrix::new(vec![vec![1; n]; n]).unwrap()
}

pub fn example2() -> TransitionMatrix {
    matrix(&[&[0, 1, 1], &[1, 0, 1], &[1, 1, 0]])
}

/// Primitive, not symmetric, one self-loop.
pub fn skew3() -> TransitionMatrix {
    matrix(&[&[1, 1, 0], &[0, 0, 1], &[1, 1, 1]])
}

pub fn test_matrices() -> Vec<(&'static str, TransitionMatrix)> {
    vec![
        ("golden", golden()),
        ("full2", full(2)),
        ("example2", example2()),
        ("skew3", skew3()),
    ]
}

/// All admissible words of length `1..=max_len`.
pub fn words_upto(a: &TransitionMatrix, max_len: usize) -> Vec<Word> {
    (1..=max_len).flat_map(|m| a.words(m)).collect()
}

pub fn random_locfun(a: &TransitionMatrix, rng: &mut impl Rng, depth: usize, range: i64) -> LocFun {
    let values = a
        .words(depth)
        .into_iter()
        .map(|u| (u, rng.gen_range(-range..=range)))
        .collect();
    LocFun::new(a, depth, values).unwrap()
}

/// Uniformly chosen successor at each step.
pub fn random_word(a: &TransitionMatrix, rng: &mut impl Rng, len: usize) -> Word {
    let mut out: Vec<usize> = Vec::with_capacity(len);
    for _ in 0..len {
        let next = match out.last() {
            None => rng.gen_range(1..=a.n()),
            Some(&l) => *a.followers(l).choose(rng).unwrap(),
        };
        out.push(next);
    }
    Word::new(out)
}

/// Symbols of `w` lying in `h`, counted directly.
pub fn brute_weight(h: &[usize], w: &[usize]) -> usize {
    let mut count = 0;
    for s in w {
        if h.iter().any(|x| x == s) {
            count += 1;
        }
    }
    count
}

/// Fraction-free Gaussian elimination.
pub fn bareiss_det(m: &[Vec<i128>]) -> i128 {
    let n = m.len();
    if n == 0 {
        return 1;
    }
    let mut a = m.to_vec();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n - 1 {
        if a[k][k] == 0 {
            match (k + 1..n).find(|&i| a[i][k] != 0) {
                Some(i) => {
                    a.swap(k, i);
                    sign = -sign;
                }
                None => return 0,
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
        }
        prev = a[k][k];
    }
    sign * a[n - 1][n - 1]
}

fn gcd(a: i128, b: i128) -> i128 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if n < k {
        return vec![];
    }
    let mut out = subsets(n - 1, k);
    for mut s in subsets(n - 1, k - 1) {
        s.push(n - 1);
        out.push(s);
    }
    out
}

/// Invariant factors from determinantal divisors: `d_k = D_k / D_{k-1}`
/// where `D_k` is the gcd of all `k×k` minors.
pub fn invariant_factors(m: &[Vec<i64>]) -> Vec<i128> {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut out = Vec::new();
    let mut prev = 1i128;
    for k in 1..=rows.min(cols) {
        let mut g = 0i128;
        for rs in subsets(rows, k) {
            for cs in subsets(cols, k) {
                let minor: Vec<Vec<i128>> = rs
                    .iter()
                    .map(|&i| cs.iter().map(|&j| i128::from(m[i][j])).collect())
                    .collect();
                g = gcd(g, bareiss_det(&minor));
            }
        }
        if g == 0 {
            out.extend(std::iter::repeat_n(0, rows.min(cols) - k + 1));
            break;
        }
        out.push(g / prev);
        prev = g;
    }
    out
}

pub fn i_minus_transpose(a: &TransitionMatrix) -> Vec<Vec<i64>> {
    let n = a.n();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| i64::from(i == j) - i64::from(a.entries()[j][i]))
                .collect()
        })
        .collect()
}
