//! Exterior powers in the lexicographic monomial basis.
//!
//! A `p`-vector in `∧^p Z^n` is a coefficient vector indexed by the sorted
//! `p`-subsets of `0..n` in lexicographic order. Functionals on `∧^p` use the
//! dual monomial basis.

use std::ops::Neg;

use itertools::Itertools;
use num_bigint::BigInt;
use num_traits::Num;

use crate::zlinalg::{det, IntMatrix};

/// The `p`-subsets of `0..n` in lexicographic order.
pub fn subsets(n: usize, p: usize) -> Vec<Vec<usize>> {
    if p > n {
        return Vec::new();
    }
    (0..n).combinations(p).collect()
}

pub fn binomial(n: usize, p: usize) -> usize {
    if p > n {
        return 0;
    }
    (0..p).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

/// Position of a sorted subset in the lexicographic order of `p`-subsets of `0..n`.
pub fn lex_rank(n: usize, subset: &[usize]) -> usize {
    let p = subset.len();
    let mut rank = 0;
    let mut prev = 0;
    for (i, &s) in subset.iter().enumerate() {
        for skipped in prev..s {
            rank += binomial(n - skipped - 1, p - i - 1);
        }
        prev = s + 1;
    }
    rank
}

/// Sign of the shuffle sorting the concatenation of two disjoint sorted sets.
pub fn shuffle_sign(a: &[usize], b: &[usize]) -> i32 {
    let inversions: usize = a.iter().map(|x| b.iter().filter(|y| *y < x).count()).sum();
    if inversions.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

fn merge(a: &[usize], b: &[usize]) -> Option<Vec<usize>> {
    if a.iter().any(|x| b.contains(x)) {
        return None;
    }
    let mut m: Vec<usize> = a.iter().chain(b).copied().collect();
    m.sort_unstable();
    Some(m)
}

fn signed<T: Num + Clone + Neg<Output = T>>(x: T, sign: i32) -> T {
    if sign > 0 {
        x
    } else {
        -x
    }
}

/// `a ∧ b` for `a ∈ ∧^p`, `b ∈ ∧^q` of an `n`-dimensional space.
pub fn wedge<T: Num + Clone + Neg<Output = T>>(n: usize, p: usize, a: &[T], q: usize, b: &[T]) -> Vec<T> {
    let sp = subsets(n, p);
    let sq = subsets(n, q);
    debug_assert_eq!(a.len(), sp.len());
    debug_assert_eq!(b.len(), sq.len());
    let mut out = vec![T::zero(); binomial(n, p + q)];
    for (s, x) in sp.iter().zip(a) {
        if x.is_zero() {
            continue;
        }
        for (t, y) in sq.iter().zip(b) {
            if y.is_zero() {
                continue;
            }
            if let Some(u) = merge(s, t) {
                let k = lex_rank(n, &u);
                out[k] = out[k].clone() + signed(x.clone() * y.clone(), shuffle_sign(s, t));
            }
        }
    }
    out
}

/// The wedge of the given rows, as an element of `∧^k Z^n` (its coordinates are the maximal minors).
pub fn wedge_of_rows(rows: &IntMatrix) -> Vec<BigInt> {
    let (k, n) = (rows.rows(), rows.cols());
    subsets(n, k).iter().map(|cols| det(&rows.select_cols(cols))).collect()
}

/// Generators of `∧^p L` where `L` is spanned by the rows: wedges of all `p`-subsets of rows.
pub fn wedge_generators(rows: &IntMatrix, p: usize) -> Vec<Vec<BigInt>> {
    subsets(rows.rows(), p).iter().map(|s| wedge_of_rows(&rows.select_rows(s))).collect()
}

/// Matrix of `∧^p q` acting on row vectors, for `q` an `m × n` matrix acting on row vectors.
pub fn exterior_power(q: &IntMatrix, p: usize) -> IntMatrix {
    let rs = subsets(q.rows(), p);
    let cs = subsets(q.cols(), p);
    let mut out = IntMatrix::zeros(rs.len(), cs.len());
    for (i, s) in rs.iter().enumerate() {
        let sub = q.select_rows(s);
        for (j, t) in cs.iter().enumerate() {
            out.set(i, j, det(&sub.select_cols(t)));
        }
    }
    out
}

/// Contraction of a functional on `∧^p` by a `k`-vector: `w ↦ α(v ∧ w)`, a functional on `∧^{p−k}`.
pub fn contract<T: Num + Clone + Neg<Output = T>>(n: usize, p: usize, alpha: &[T], k: usize, v: &[T]) -> Vec<T> {
    assert!(k <= p, "contraction degree exceeds form degree");
    let sk = subsets(n, k);
    subsets(n, p - k)
        .iter()
        .map(|t| {
            let mut acc = T::zero();
            for (s, x) in sk.iter().zip(v) {
                if x.is_zero() {
                    continue;
                }
                if let Some(u) = merge(s, t) {
                    let term = x.clone() * alpha[lex_rank(n, &u)].clone();
                    acc = acc + signed(term, shuffle_sign(s, t));
                }
            }
            acc
        })
        .collect()
}

/// Contraction of a `p`-vector by a functional on `∧^k`: the `(p−k)`-vector
/// with coefficients `Σ_S ε(S, T) α_S v_{S∪T}`.
pub fn contract_vector<T: Num + Clone + Neg<Output = T>>(n: usize, k: usize, alpha: &[T], p: usize, v: &[T]) -> Vec<T> {
    assert!(k <= p, "contraction degree exceeds vector degree");
    let sk = subsets(n, k);
    subsets(n, p - k)
        .iter()
        .map(|t| {
            let mut acc = T::zero();
            for (s, a) in sk.iter().zip(alpha) {
                if a.is_zero() {
                    continue;
                }
                if let Some(u) = merge(s, t) {
                    let term = a.clone() * v[lex_rank(n, &u)].clone();
                    acc = acc + signed(term, shuffle_sign(s, t));
                }
            }
            acc
        })
        .collect()
}

pub fn dot<T: Num + Clone>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).fold(T::zero(), |acc, (x, y)| acc + x.clone() * y.clone())
}

/// The monomial basis vector `e_S` of `∧^p`.
pub fn monomial<T: Num + Clone>(n: usize, s: &[usize]) -> Vec<T> {
    let mut v = vec![T::zero(); binomial(n, s.len())];
    v[lex_rank(n, s)] = T::one();
    v
}

/// `∧^0` generator.
pub fn unit<T: Num + Clone>() -> Vec<T> {
    vec![T::one()]
}
