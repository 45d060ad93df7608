//! Smith normal form, Cuntz–Krieger K-groups, dimension vectors and
//! Perron values.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph;
use crate::sft::TransitionMatrix;
use crate::support::dimension_vectors;

pub type BigMatrix = Vec<Vec<BigInt>>;

/// `U · M · V = D` with `U`, `V` unimodular and `D` diagonal,
/// `d_1 | d_2 | ...`, all `d_i >= 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmithForm {
    pub d: BigMatrix,
    pub u: BigMatrix,
    pub v: BigMatrix,
}

impl SmithForm {
    /// Diagonal entries `d_1, ..., d_min(r,c)`.
    pub fn diagonal(&self) -> Vec<BigInt> {
        let r = self.d.len();
        let c = self.d.first().map_or(0, |row| row.len());
        (0..r.min(c)).map(|i| self.d[i][i].clone()).collect()
    }

    pub fn rank(&self) -> usize {
        self.diagonal().iter().filter(|x| !x.is_zero()).count()
    }
}

pub fn to_big(m: &[Vec<i64>]) -> BigMatrix {
    m.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
}

pub fn identity(n: usize) -> BigMatrix {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect()
}

pub fn mat_mul(a: &BigMatrix, b: &BigMatrix) -> BigMatrix {
    let inner = b.len();
    let cols = b.first().map_or(0, |r| r.len());
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| {
                    (0..inner).fold(BigInt::zero(), |acc, k| acc + &row[k] * &b[k][j])
                })
                .collect()
        })
        .collect()
}

fn swap_cols(m: &mut BigMatrix, i: usize, j: usize) {
    for row in m.iter_mut() {
        row.swap(i, j);
    }
}

/// row_i -= q * row_j
fn row_axpy(m: &mut BigMatrix, i: usize, j: usize, q: &BigInt) {
    let src = m[j].clone();
    for (x, y) in m[i].iter_mut().zip(src.iter()) {
        *x -= q * y;
    }
}

/// col_i -= q * col_j
fn col_axpy(m: &mut BigMatrix, i: usize, j: usize, q: &BigInt) {
    for row in m.iter_mut() {
        let y = row[j].clone();
        row[i] -= q * y;
    }
}

fn negate_row(m: &mut BigMatrix, i: usize) {
    for x in m[i].iter_mut() {
        *x = -x.clone();
    }
}

/// Exact Smith normal form; the result is recomputed as `U · M · V` and
/// compared against `D` before returning.
pub fn smith_normal_form(m: &[Vec<i64>]) -> SmithForm {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut d = to_big(m);
    let mut u = identity(rows);
    let mut v = identity(cols);

    for t in 0..rows.min(cols) {
        loop {
            // smallest nonzero entry of the trailing block as pivot
            let pivot = (t..rows)
                .flat_map(|i| (t..cols).map(move |j| (i, j)))
                .filter(|&(i, j)| !d[i][j].is_zero())
                .min_by(|&(i, j), &(k, l)| d[i][j].abs().cmp(&d[k][l].abs()));
            let Some((pi, pj)) = pivot else {
                break;
            };
            d.swap(t, pi);
            u.swap(t, pi);
            swap_cols(&mut d, t, pj);
            swap_cols(&mut v, t, pj);

            let mut clean = true;
            for i in t + 1..rows {
                let q = d[i][t].div_floor(&d[t][t]);
                if !q.is_zero() {
                    row_axpy(&mut d, i, t, &q);
                    row_axpy(&mut u, i, t, &q);
                }
                if !d[i][t].is_zero() {
                    clean = false;
                }
            }
            for j in t + 1..cols {
                let q = d[t][j].div_floor(&d[t][t]);
                if !q.is_zero() {
                    col_axpy(&mut d, j, t, &q);
                    col_axpy(&mut v, j, t, &q);
                }
                if !d[t][j].is_zero() {
                    clean = false;
                }
            }
            if !clean {
                continue;
            }
            // divisibility: fold an offending row into row t and retry
            let bad = (t + 1..rows)
                .flat_map(|i| (t + 1..cols).map(move |j| (i, j)))
                .find(|&(i, j)| !d[i][j].is_multiple_of(&d[t][t]));
            match bad {
                Some((i, _)) => {
                    let minus_one = -BigInt::one();
                    row_axpy(&mut d, t, i, &minus_one);
                    row_axpy(&mut u, t, i, &minus_one);
                }
                None => break,
            }
        }
        if d[t][t].is_negative() {
            negate_row(&mut d, t);
            negate_row(&mut u, t);
        }
    }

    let check = mat_mul(&mat_mul(&u, &to_big(m)), &v);
    assert_eq!(check, d, "Smith normal form failed self-check");
    SmithForm { d, u, v }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KGroups {
    pub k0_rank: usize,
    /// Invariant factors greater than 1.
    pub k0_torsion: Vec<BigInt>,
    pub k1_rank: usize,
}

impl KGroups {
    pub fn torsion_u64(&self) -> Option<Vec<u64>> {
        self.k0_torsion.iter().map(|x| x.to_u64()).collect()
    }
}

/// `K_0 = coker(I - Aᵀ)`, `K_1 = ker(I - Aᵀ)` on `Z^n`.
pub fn ck_k_groups(a: &TransitionMatrix) -> KGroups {
    let n = a.n();
    let m: Vec<Vec<i64>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| i64::from(i == j) - i64::from(a.entries()[j][i]))
                .collect()
        })
        .collect();
    let snf = smith_normal_form(&m);
    let rank = snf.rank();
    let k0_torsion = snf
        .diagonal()
        .into_iter()
        .filter(|x| !x.is_zero() && !x.is_one())
        .collect();
    KGroups {
        k0_rank: n - rank,
        k0_torsion,
        k1_rank: n - rank,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DimensionReport {
    pub vectors: Vec<Vec<u64>>,
    /// `Σ_i d(k)_i`.
    pub totals: Vec<u64>,
    /// `Σ_i d(k)_i²`, the dimension of the level-`k` algebra when each
    /// entry is a full matrix block.
    pub square_totals: Vec<u128>,
    /// `totals[k+1] / totals[k]`.
    pub ratios: Vec<f64>,
    /// Common row sum when all rows of `M` coincide.
    pub uhf_factor: Option<u64>,
    pub summary: String,
}

pub fn dimension_report(m: &[Vec<u64>], levels: usize) -> Result<DimensionReport> {
    if levels == 0 {
        return Err(Error::Invalid("levels must be at least 1".into()));
    }
    let vectors = dimension_vectors(m, levels)?;
    let mut totals = Vec::new();
    let mut square_totals = Vec::new();
    for d in &vectors {
        totals.push(
            d.iter()
                .try_fold(0u64, |acc, &x| acc.checked_add(x))
                .ok_or(Error::Overflow("dimension total"))?,
        );
        square_totals.push(
            d.iter()
                .try_fold(0u128, |acc, &x| acc.checked_add(u128::from(x) * u128::from(x)))
                .ok_or(Error::Overflow("dimension total"))?,
        );
    }
    let ratios = totals
        .windows(2)
        .map(|w| if w[0] == 0 { f64::NAN } else { w[1] as f64 / w[0] as f64 })
        .collect();
    let uhf_factor = match m.first() {
        Some(first) if m.iter().all(|r| r == first) => Some(first.iter().sum()),
        _ => None,
    };
    let summary = match uhf_factor {
        Some(1) => "type 1 (finite dimensional)".to_string(),
        Some(k) => format!("UHF of type {k}^∞"),
        None => "inconclusive".to_string(),
    };
    Ok(DimensionReport {
        vectors,
        totals,
        square_totals,
        ratios,
        uhf_factor,
        summary,
    })
}

const PERRON_TOL: f64 = 1e-10;
const PERRON_MAX_ITER: usize = 100_000;

/// Dominant eigenvalue of an irreducible nonnegative matrix, by power
/// iteration with Collatz–Wielandt bounds. Imprimitive input is shifted by
/// the identity first, which makes it primitive without moving eigenvectors.
pub fn perron_value(m: &[Vec<i64>]) -> Result<f64> {
    let n = m.len();
    if n == 0 || m.iter().any(|r| r.len() != n) {
        return Err(Error::Invalid("matrix must be square and nonempty".into()));
    }
    if m.iter().flatten().any(|&x| x < 0) {
        return Err(Error::Invalid("matrix has a negative entry".into()));
    }
    let pattern: Vec<Vec<u8>> = m.iter().map(|r| r.iter().map(|&x| u8::from(x != 0)).collect()).collect();
    if !graph::is_irreducible(&pattern) {
        return Err(Error::Reducible);
    }
    let shift = if graph::is_primitive(&pattern) { 0.0 } else { 1.0 };
    let mat: Vec<Vec<f64>> = m
        .iter()
        .enumerate()
        .map(|(i, r)| {
            r.iter()
                .enumerate()
                .map(|(j, &x)| x as f64 + if i == j { shift } else { 0.0 })
                .collect()
        })
        .collect();
    let mut x = vec![1.0f64; n];
    for _ in 0..PERRON_MAX_ITER {
        let y: Vec<f64> = mat.iter().map(|r| r.iter().zip(&x).map(|(a, b)| a * b).sum()).collect();
        let ratios = y.iter().zip(&x).map(|(a, b)| a / b);
        let (lo, hi) = ratios.fold((f64::INFINITY, 0.0f64), |(lo, hi), r| (lo.min(r), hi.max(r)));
        if hi - lo <= PERRON_TOL * hi {
            return Ok((lo + hi) / 2.0 - shift);
        }
        let norm = y.iter().cloned().fold(0.0, f64::max);
        x = y.into_iter().map(|v| v / norm).collect();
    }
    Err(Error::NoConvergence)
}
