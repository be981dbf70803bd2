//! Smith and Hermite normal forms over the integers, and the lattice
//! operations built from them (kernels, saturation, integer solving).

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::matrix::IntMatrix;

/// Result of a Smith normal form computation: `u · m · v = d`.
///
/// `u_inv` and `v_inv` are maintained alongside so callers never invert.
#[derive(Clone, Debug)]
pub struct Snf {
    pub u: IntMatrix,
    pub u_inv: IntMatrix,
    pub v: IntMatrix,
    pub v_inv: IntMatrix,
    pub d: IntMatrix,
    /// Nonzero diagonal entries `d_1 | d_2 | ... | d_r`, all positive.
    pub diag: Vec<BigInt>,
}

impl Snf {
    pub fn rank(&self) -> usize {
        self.diag.len()
    }
}

struct SnfState {
    a: IntMatrix,
    u: IntMatrix,
    u_inv: IntMatrix,
    v: IntMatrix,
    v_inv: IntMatrix,
}

impl SnfState {
    fn swap_rows(&mut self, i: usize, j: usize) {
        if i != j {
            self.a.swap_rows(i, j);
            self.u.swap_rows(i, j);
            self.u_inv.swap_cols(i, j);
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        if i != j {
            self.a.swap_cols(i, j);
            self.v.swap_cols(i, j);
            self.v_inv.swap_rows(i, j);
        }
    }

    /// row[dst] += c * row[src]
    fn row_op(&mut self, dst: usize, src: usize, c: &BigInt) {
        self.a.add_row_multiple(dst, src, c);
        self.u.add_row_multiple(dst, src, c);
        self.u_inv.add_col_multiple(src, dst, &-c);
    }

    /// col[dst] += c * col[src]
    fn col_op(&mut self, dst: usize, src: usize, c: &BigInt) {
        self.a.add_col_multiple(dst, src, c);
        self.v.add_col_multiple(dst, src, c);
        self.v_inv.add_row_multiple(src, dst, &-c);
    }

    fn negate_row(&mut self, i: usize) {
        self.a.negate_row(i);
        self.u.negate_row(i);
        self.u_inv.negate_col(i);
    }
}

/// Smith normal form with minimal-absolute-value pivoting.
pub fn snf(m: &IntMatrix) -> Snf {
    let (rows, cols) = (m.rows(), m.cols());
    let mut st = SnfState {
        a: m.clone(),
        u: IntMatrix::identity(rows),
        u_inv: IntMatrix::identity(rows),
        v: IntMatrix::identity(cols),
        v_inv: IntMatrix::identity(cols),
    };
    let mut diag = Vec::new();
    let mut t = 0;
    while t < rows.min(cols) {
        let Some((pi, pj)) = min_abs_entry(&st.a, t, t) else { break };
        st.swap_rows(t, pi);
        st.swap_cols(t, pj);
        loop {
            let mut clean = true;
            for i in t + 1..rows {
                if !st.a.get(i, t).is_zero() {
                    let q = st.a.get(i, t) / st.a.get(t, t);
                    st.row_op(i, t, &-q);
                    if !st.a.get(i, t).is_zero() {
                        clean = false;
                    }
                }
            }
            for j in t + 1..cols {
                if !st.a.get(t, j).is_zero() {
                    let q = st.a.get(t, j) / st.a.get(t, t);
                    st.col_op(j, t, &-q);
                    if !st.a.get(t, j).is_zero() {
                        clean = false;
                    }
                }
            }
            if clean {
                let p = st.a.get(t, t).clone();
                let bad = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !st.a.get(i, j).is_multiple_of(&p)));
                match bad {
                    Some(i) => {
                        st.row_op(t, i, &BigInt::one());
                        continue;
                    }
                    None => break,
                }
            }
            // Remainders left in row/column t: move the smallest to the pivot.
            let mut best: Option<(usize, usize)> = None;
            let mut best_abs = st.a.get(t, t).abs();
            for i in t + 1..rows {
                let x = st.a.get(i, t);
                if !x.is_zero() && x.abs() < best_abs {
                    best_abs = x.abs();
                    best = Some((i, t));
                }
            }
            for j in t + 1..cols {
                let x = st.a.get(t, j);
                if !x.is_zero() && x.abs() < best_abs {
                    best_abs = x.abs();
                    best = Some((t, j));
                }
            }
            if let Some((i, j)) = best {
                st.swap_rows(t, i);
                st.swap_cols(t, j);
            }
        }
        if st.a.get(t, t).is_negative() {
            st.negate_row(t);
        }
        diag.push(st.a.get(t, t).clone());
        t += 1;
    }
    Snf { u: st.u, u_inv: st.u_inv, v: st.v, v_inv: st.v_inv, d: st.a, diag }
}

fn min_abs_entry(a: &IntMatrix, r0: usize, c0: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize, BigInt)> = None;
    for i in r0..a.rows() {
        for j in c0..a.cols() {
            let x = a.get(i, j);
            if x.is_zero() {
                continue;
            }
            let ax = x.abs();
            if best.as_ref().is_none_or(|(_, _, b)| &ax < b) {
                best = Some((i, j, ax));
            }
        }
    }
    best.map(|(i, j, _)| (i, j))
}

/// Row-style Hermite normal form of the lattice spanned by the rows of `m`.
///
/// Returns only the nonzero rows: echelon shape, positive pivots, entries
/// above each pivot reduced into `[0, pivot)`.
pub fn hnf(m: &IntMatrix) -> IntMatrix {
    let mut a = m.clone();
    let (rows, cols) = (a.rows(), a.cols());
    let mut pivots: Vec<usize> = Vec::new();
    let mut pr = 0;
    for c in 0..cols {
        if pr == rows {
            break;
        }
        loop {
            let mut best: Option<(usize, BigInt)> = None;
            for i in pr..rows {
                let x = a.get(i, c);
                if !x.is_zero() && best.as_ref().is_none_or(|(_, b)| &x.abs() < b) {
                    best = Some((i, x.abs()));
                }
            }
            let Some((bi, _)) = best else { break };
            a.swap_rows(pr, bi);
            let mut done = true;
            for i in pr + 1..rows {
                if !a.get(i, c).is_zero() {
                    let q = a.get(i, c) / a.get(pr, c);
                    a.add_row_multiple(i, pr, &-q);
                    if !a.get(i, c).is_zero() {
                        done = false;
                    }
                }
            }
            if done {
                break;
            }
        }
        if a.get(pr, c).is_zero() {
            continue;
        }
        if a.get(pr, c).is_negative() {
            a.negate_row(pr);
        }
        let p = a.get(pr, c).clone();
        for i in 0..pr {
            let q = a.get(i, c).div_floor(&p);
            a.add_row_multiple(i, pr, &-q);
        }
        pivots.push(c);
        pr += 1;
    }
    let keep: Vec<usize> = (0..pr).collect();
    a.select_rows(&keep)
}

/// Pivot column of each row of a matrix in echelon form.
pub fn echelon_pivots(h: &IntMatrix) -> Vec<usize> {
    (0..h.rows()).map(|i| (0..h.cols()).find(|&j| !h.get(i, j).is_zero()).expect("zero row in echelon form")).collect()
}

pub fn rank(m: &IntMatrix) -> usize {
    hnf(m).rows()
}

/// Determinant by fraction-free (Bareiss) elimination.
pub fn det(m: &IntMatrix) -> BigInt {
    assert_eq!(m.rows(), m.cols(), "determinant of a non-square matrix");
    let n = m.rows();
    if n == 0 {
        return BigInt::one();
    }
    let mut a = m.clone();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        if a.get(k, k).is_zero() {
            let Some(s) = (k + 1..n).find(|&i| !a.get(i, k).is_zero()) else {
                return BigInt::zero();
            };
            a.swap_rows(k, s);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (a.get(i, j) * a.get(k, k) - a.get(i, k) * a.get(k, j)) / &prev;
                a.set(i, j, v);
            }
        }
        prev = a.get(k, k).clone();
    }
    sign * a.get(n - 1, n - 1)
}

/// Saturated integer kernel of `x ↦ m · x`, as HNF rows.
pub fn kernel_basis(m: &IntMatrix) -> IntMatrix {
    let s = snf(m);
    let r = s.rank();
    let cols: Vec<usize> = (r..m.cols()).collect();
    let k = s.v.select_cols(&cols).transpose();
    if k.rows() == 0 {
        return k;
    }
    hnf(&k)
}

/// Basis (HNF rows) of the saturation of the row lattice of `m`, together
/// with the index of the row lattice inside it (product of invariant factors).
pub fn saturate_rows(m: &IntMatrix) -> (IntMatrix, BigInt) {
    let s = snf(m);
    let r = s.rank();
    let idx: Vec<usize> = (0..r).collect();
    let basis = s.v_inv.select_rows(&idx);
    let index = s.diag.iter().fold(BigInt::one(), |acc, d| acc * d);
    if basis.rows() == 0 {
        return (basis, index);
    }
    (hnf(&basis), index)
}

/// Some integer `x` with `x · a = b`, if one exists.
pub fn solve_int_rows(a: &IntMatrix, b: &[BigInt]) -> Option<Vec<BigInt>> {
    assert_eq!(a.cols(), b.len());
    let s = snf(a);
    let c = s.v.vec_mul(b);
    let r = s.rank();
    let mut y = vec![BigInt::zero(); a.rows()];
    for i in 0..c.len() {
        if i < r {
            let (q, rem) = c[i].div_rem(&s.diag[i]);
            if !rem.is_zero() {
                return None;
            }
            y[i] = q;
        } else if !c[i].is_zero() {
            return None;
        }
    }
    Some(s.u.vec_mul(&y))
}

/// Some integer `x` with `a · x = b`, if one exists.
pub fn solve_int_cols(a: &IntMatrix, b: &[BigInt]) -> Option<Vec<BigInt>> {
    solve_int_rows(&a.transpose(), b)
}

pub fn gcd_vec(v: &[BigInt]) -> BigInt {
    v.iter().fold(BigInt::zero(), |g, x| g.gcd(x))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check_snf(m: &IntMatrix) {
        let s = snf(m);
        assert_eq!(s.u.mul(m).mul(&s.v), s.d);
        assert_eq!(s.u.mul(&s.u_inv), IntMatrix::identity(m.rows()));
        assert_eq!(s.v.mul(&s.v_inv), IntMatrix::identity(m.cols()));
        for i in 0..s.d.rows() {
            for j in 0..s.d.cols() {
                if i != j {
                    assert!(s.d.get(i, j).is_zero());
                }
            }
        }
        for w in s.diag.windows(2) {
            assert!(w[1].is_multiple_of(&w[0]));
        }
        assert!(det(&s.u).abs().is_one());
        assert!(det(&s.v).abs().is_one());
    }

    #[test]
    fn snf_identity_and_diag() {
        let id = IntMatrix::identity(2);
        assert_eq!(snf(&id).d, id);
        let m = IntMatrix::from_i64(2, 2, &[2, 0, 0, 3]);
        let s = snf(&m);
        assert_eq!(s.d, IntMatrix::from_i64(2, 2, &[1, 0, 0, 6]));
        check_snf(&m);
    }

    #[test]
    fn snf_zero_matrix() {
        let z = IntMatrix::zeros(2, 3);
        let s = snf(&z);
        assert!(s.d.is_zero());
        assert_eq!(s.rank(), 0);
    }

    #[test]
    fn snf_random_like() {
        let m = IntMatrix::from_i64(3, 4, &[2, 4, 4, -6, -6, 6, 12, 10, 10, -4, -16, 4]);
        check_snf(&m);
        let m = IntMatrix::from_i64(4, 2, &[0, 0, 6, 4, 0, 0, -9, 3]);
        check_snf(&m);
    }

    #[test]
    fn hnf_shape() {
        let m = IntMatrix::from_i64(3, 2, &[1, -3, -2, 3, 1, 0]);
        let h = hnf(&m);
        assert_eq!(h, IntMatrix::from_i64(2, 2, &[1, 0, 0, 3]));
    }

    #[test]
    fn kernel_and_saturation() {
        let m = IntMatrix::from_i64(2, 3, &[1, 0, -1, 0, 1, -1]);
        let k = kernel_basis(&m);
        assert_eq!(k, IntMatrix::from_i64(1, 3, &[1, 1, 1]));
        assert_eq!(kernel_basis(&IntMatrix::identity(3)).rows(), 0);
        assert_eq!(kernel_basis(&IntMatrix::zeros(1, 3)).rows(), 3);

        let (sat, idx) = saturate_rows(&IntMatrix::from_i64(2, 2, &[1, 0, 0, 3]));
        assert_eq!(sat, IntMatrix::identity(2));
        assert_eq!(idx, BigInt::from(3));
        let (sat, idx) = saturate_rows(&IntMatrix::from_i64(2, 2, &[2, 0, 0, 2]));
        assert_eq!(sat, IntMatrix::identity(2));
        assert_eq!(idx, BigInt::from(4));
        let (sat, idx) = saturate_rows(&IntMatrix::from_i64(1, 2, &[1, 0]));
        assert_eq!(sat, IntMatrix::from_i64(1, 2, &[1, 0]));
        assert_eq!(idx, BigInt::one());
    }

    #[test]
    fn integer_solving() {
        let a = IntMatrix::from_i64(2, 2, &[1, 0, 0, 3]);
        assert!(solve_int_rows(&a, &[BigInt::from(2), BigInt::from(1)]).is_none());
        let x = solve_int_rows(&a, &[BigInt::from(2), BigInt::from(6)]).unwrap();
        assert_eq!(a.transpose().mul_vec(&x), vec![BigInt::from(2), BigInt::from(6)]);
    }

    #[test]
    fn determinant() {
        let m = IntMatrix::from_i64(3, 3, &[2, -1, 0, -1, 2, -1, 0, -1, 2]);
        assert_eq!(det(&m), BigInt::from(4));
        let m = IntMatrix::from_i64(2, 2, &[0, 1, 1, 0]);
        assert_eq!(det(&m), BigInt::from(-1));
    }
}
