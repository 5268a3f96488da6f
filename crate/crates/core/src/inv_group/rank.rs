//! Integer rank of finitely many elements on a finite window of points.

use serde::Serialize;

use super::GroupElement;
use crate::error::{Error, Result};
use crate::ordinal_space::{Ordinal, SpectrumSpace};

/// Modulus for the independent cross-check of the rank.
const PRIME: u64 = (1 << 61) - 1;

/// The points of the depth-`depth` truncation lying in the space.
pub fn window(space: &SpectrumSpace, depth: u64) -> Vec<Ordinal> {
    space
        .truncation(depth)
        .into_iter()
        .filter(|p| space.contains(p))
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct RankCertificate {
    pub rank: usize,
    pub independent: bool,
    pub window_size: usize,
    /// Window points carrying the pivots of the elimination.
    pub pivots: Vec<Ordinal>,
    pub rank_mod_p: usize,
}

/// Fraction-free Gaussian elimination; returns the rank and pivot columns.
fn bareiss(mut m: Vec<Vec<i128>>) -> Result<(usize, Vec<usize>)> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut prev: i128 = 1;
    let mut r = 0;
    let mut pivots = Vec::new();
    for c in 0..cols {
        let Some(pr) = (r..rows).find(|&i| m[i][c] != 0) else {
            continue;
        };
        m.swap(r, pr);
        for i in r + 1..rows {
            for j in c + 1..cols {
                let v = m[i][j]
                    .checked_mul(m[r][c])
                    .and_then(|a| m[i][c].checked_mul(m[r][j]).and_then(|b| a.checked_sub(b)))
                    .ok_or_else(|| {
                        Error::UnsupportedShape("integer overflow in elimination".into())
                    })?;
                m[i][j] = v / prev;
            }
            m[i][c] = 0;
        }
        prev = m[r][c];
        pivots.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    Ok((r, pivots))
}

fn rank_mod_p(m: &[Vec<i64>]) -> usize {
    let p = PRIME as u128;
    let red = |v: i64| (v.rem_euclid(PRIME as i64)) as u128;
    let mut a: Vec<Vec<u128>> = m
        .iter()
        .map(|row| row.iter().map(|&v| red(v)).collect())
        .collect();
    let pow = |mut b: u128, mut e: u128| {
        let mut acc = 1u128;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * b % p;
            }
            b = b * b % p;
            e >>= 1;
        }
        acc
    };
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(pr) = (r..rows).find(|&i| a[i][c] != 0) else {
            continue;
        };
        a.swap(r, pr);
        let inv = pow(a[r][c], p - 2);
        let (top, below) = a.split_at_mut(r + 1);
        let pivot = &top[r];
        for row in below {
            let f = row[c] * inv % p;
            for (x, y) in row[c..].iter_mut().zip(&pivot[c..]) {
                *x = (*x + p - f * y % p) % p;
            }
        }
        r += 1;
    }
    r
}

/// Rank of the subgroup generated by `elements`, evaluated on `window`.
/// Distinct elements that agree on the window mean the window is too small.
pub fn zrank(elements: &[GroupElement], window: &[Ordinal]) -> Result<RankCertificate> {
    let matrix: Vec<Vec<i64>> = elements
        .iter()
        .map(|g| window.iter().map(|p| g.value_at(p)).collect())
        .collect::<Result<_>>()?;
    for i in 0..elements.len() {
        for j in i + 1..elements.len() {
            if matrix[i] == matrix[j] && elements[i] != elements[j] {
                return Err(Error::WindowTooSmall(i, j));
            }
        }
    }
    let wide = matrix
        .iter()
        .map(|row| row.iter().map(|&v| v as i128).collect())
        .collect();
    let (rank, pivots) = bareiss(wide)?;
    let rank_mod_p = rank_mod_p(&matrix);
    Ok(RankCertificate {
        rank,
        independent: rank == elements.len(),
        window_size: window.len(),
        pivots: pivots.into_iter().map(|c| window[c].clone()).collect(),
        rank_mod_p,
    })
}
