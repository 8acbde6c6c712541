//! Independent oracles shared by the integration tests. Nothing here calls
//! into the library's linear algebra or measure code.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub fn q(a: i64, b: i64) -> BigRational {
    BigRational::new(a.into(), b.into())
}

/// Determinant by cofactor expansion (small matrices only).
pub fn det(m: &[Vec<i64>]) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    if n == 1 {
        return m[0][0].into();
    }
    let mut acc = BigInt::zero();
    for j in 0..n {
        if m[0][j] == 0 {
            continue;
        }
        let minor: Vec<Vec<i64>> =
            m[1..].iter().map(|r| r.iter().enumerate().filter(|(c, _)| *c != j).map(|(_, x)| *x).collect()).collect();
        let term = BigInt::from(m[0][j]) * det(&minor);
        if j % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    acc
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

/// Invariant factors via determinantal divisors `d_k = gcd(k×k minors)`.
/// Zeros mark the free part.
pub fn invariant_factors_by_minors(m: &[Vec<i64>]) -> Vec<BigInt> {
    let (r, c) = (m.len(), m[0].len());
    let mut divisors = vec![BigInt::one()];
    for k in 1..=r.min(c) {
        let mut g = BigInt::zero();
        for rows in subsets(r, k) {
            for cols in subsets(c, k) {
                let sub: Vec<Vec<i64>> = rows.iter().map(|&i| cols.iter().map(|&j| m[i][j]).collect()).collect();
                g = g.gcd(&det(&sub));
            }
        }
        divisors.push(g);
    }
    let mut out = Vec::new();
    for k in 1..divisors.len() {
        if divisors[k].is_zero() {
            out.push(BigInt::zero());
        } else {
            out.push(&divisors[k] / &divisors[k - 1]);
        }
    }
    out.extend(std::iter::repeat_n(BigInt::zero(), r.saturating_sub(c)));
    out
}

/// `(rank, torsion)` of `Z^r / im(m)` (columns are relations); over
/// `Z[1/2]` when `invert_two`.
pub fn group_by_minors(m: &[Vec<i64>], invert_two: bool) -> (usize, Vec<BigInt>) {
    let f = invariant_factors_by_minors(m);
    let rank = f.iter().filter(|d| d.is_zero()).count();
    let torsion = f
        .into_iter()
        .filter(|d| !d.is_zero())
        .map(|d| {
            let mut d = d.abs();
            if invert_two {
                while d.is_even() {
                    d /= 2;
                }
            }
            d
        })
        .filter(|d| !d.is_one())
        .collect();
    (rank, torsion)
}

/// The `p × p` presentation of the coinvariants of a period-`p` orbit:
/// generators `e_0 … e_{p-1}` (positions), relations `ψ e_{i+1} - e_i`.
pub fn circulant(p: usize, psi: i64) -> Vec<Vec<i64>> {
    let mut m = vec![vec![0i64; p]; p];
    for i in 0..p {
        m[(i + 1) % p][i] += psi;
        m[i][i] -= 1;
    }
    m
}

/// Iterates a substitution on a seed letter.
pub fn iterate(rules: &BTreeMap<u8, Vec<u8>>, seed: u8, times: usize) -> Vec<u8> {
    let mut w = vec![seed];
    for _ in 0..times {
        w = w.iter().flat_map(|a| rules[a].iter().copied()).collect();
    }
    w
}

pub fn tm_rules() -> BTreeMap<u8, Vec<u8>> {
    BTreeMap::from([(b'1', b"12".to_vec()), (b'2', b"21".to_vec())])
}

/// Distinct `n`-blocks of a string.
pub fn blocks(w: &[u8], n: usize) -> BTreeSet<Vec<u8>> {
    w.windows(n).map(|b| b.to_vec()).collect()
}

/// Exact Perron–Frobenius measures of the `n`-blocks of a constant-length
/// substitution with uniform length `len`, via the `n`-block substitution and
/// exact Gaussian elimination on `M - len·I`.
pub fn pf_block_measures(rules: &BTreeMap<u8, Vec<u8>>, n: usize, len: usize) -> BTreeMap<Vec<u8>, BigRational> {
    // legal blocks from a long iterate
    let long = iterate(rules, *rules.keys().next().unwrap(), 14);
    let legal: Vec<Vec<u8>> = blocks(&long, n).into_iter().collect();
    let idx: BTreeMap<&Vec<u8>, usize> = legal.iter().enumerate().map(|(i, b)| (b, i)).collect();
    let k = legal.len();
    // M[a][b] = occurrences of block a starting in the first `len` positions of θ(b)
    let mut m = vec![vec![BigRational::zero(); k]; k];
    for (j, b) in legal.iter().enumerate() {
        let img: Vec<u8> = b.iter().flat_map(|x| rules[x].iter().copied()).collect();
        for s in 0..len {
            let a = img[s..s + n].to_vec();
            m[idx[&a]][j] += BigRational::one();
        }
    }
    for (i, row) in m.iter_mut().enumerate() {
        row[i] -= BigRational::from_integer((len as i64).into());
    }
    let v = nullvector(m);
    let total: BigRational = v.iter().cloned().sum();
    legal.into_iter().zip(v).map(|(b, x)| (b, x / &total)).collect()
}

/// A nonzero vector of the (one-dimensional) kernel.
fn nullvector(mut m: Vec<Vec<BigRational>>) -> Vec<BigRational> {
    let (rows, cols) = (m.len(), m[0].len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for x in m[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                let pivot_row = m[r].clone();
                for (x, y) in m[i].iter_mut().zip(pivot_row) {
                    *x -= &f * y;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    let free = (0..cols).find(|c| !pivots.contains(c)).expect("nontrivial kernel");
    let mut v = vec![BigRational::zero(); cols];
    v[free] = BigRational::one();
    for (i, &c) in pivots.iter().enumerate() {
        v[c] = -m[i][free].clone();
    }
    v
}

/// Block frequencies in a long prefix, rounded to multiples of `1/den`.
pub fn rounded_frequencies(w: &[u8], n: usize, den: i64) -> BTreeMap<Vec<u8>, BigRational> {
    let mut counts: BTreeMap<Vec<u8>, usize> = BTreeMap::new();
    for b in w.windows(n) {
        *counts.entry(b.to_vec()).or_default() += 1;
    }
    let total = (w.len() - n + 1) as f64;
    counts.into_iter().map(|(b, c)| (b, q((c as f64 / total * den as f64).round() as i64, den))).collect()
}

/// Generator of the subgroup of `Q` spanned by the values.
pub fn gcd_generator<'a>(values: impl IntoIterator<Item = &'a BigRational>) -> BigRational {
    let vals: Vec<&BigRational> = values.into_iter().collect();
    let den = vals.iter().fold(BigInt::one(), |a, v| a.lcm(v.denom()));
    let g = vals.iter().fold(BigInt::zero(), |a, v| a.gcd(&(v.numer() * (&den / v.denom()))));
    BigRational::new(g, den)
}
