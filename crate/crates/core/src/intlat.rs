//! Integer matrix normal forms: Smith and Hermite forms, modular kernels.
//!
//! Everything here is exact over arbitrary-precision integers; there are no
//! probabilistic shortcuts. The row Hermite form is the canonical form used
//! for lattice bases throughout the crate, with zero rows kept in a fixed
//! trailing position so shapes are stable under serialization.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

/// Dense integer matrix in row-major order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, entries: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<BigInt>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        IntMatrix { rows: r, cols: c, entries: rows.into_iter().flatten().collect() }
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_zero_row(&self, i: usize) -> bool {
        self.row(i).iter().all(|x| x.is_zero())
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows);
        let mut out = IntMatrix::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let t = a * &other[(k, j)];
                    out[(i, j)] += t;
                }
            }
        }
        out
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            let ia = a * self.cols + j;
            let ib = b * self.cols + j;
            self.entries.swap(ia, ib);
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let v = -std::mem::take(&mut self[(i, j)]);
            self[(i, j)] = v;
        }
    }

    /// row[dst] += q * row[src]
    fn add_multiple_of_row(&mut self, dst: usize, src: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let t = q * &self[(src, j)];
            self[(dst, j)] += t;
        }
    }

    /// Replaces rows (a, b) by (x*a + y*b, z*a + w*b); the 2x2 multiplier must
    /// be unimodular for lattice-preserving use.
    fn combine_rows(&mut self, a: usize, b: usize, x: &BigInt, y: &BigInt, z: &BigInt, w: &BigInt) {
        for j in 0..self.cols {
            let va = self[(a, j)].clone();
            let vb = self[(b, j)].clone();
            self[(a, j)] = x * &va + y * &vb;
            self[(b, j)] = z * &va + w * &vb;
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            let ia = i * self.cols + a;
            let ib = i * self.cols + b;
            self.entries.swap(ia, ib);
        }
    }

    fn combine_cols(&mut self, a: usize, b: usize, x: &BigInt, y: &BigInt, z: &BigInt, w: &BigInt) {
        for i in 0..self.rows {
            let va = self[(i, a)].clone();
            let vb = self[(i, b)].clone();
            self[(i, a)] = x * &va + y * &vb;
            self[(i, b)] = z * &va + w * &vb;
        }
    }

    /// Exact determinant by fraction-free (Bareiss) elimination.
    pub fn det(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "det of non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut m = self.clone();
        let mut sign = 1i32;
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if m[(k, k)].is_zero() {
                let Some(p) = (k + 1..n).find(|&i| !m[(i, k)].is_zero()) else {
                    return BigInt::zero();
                };
                m.swap_rows(k, p);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let t = &m[(k, k)] * &m[(i, j)] - &m[(i, k)] * &m[(k, j)];
                    let (q, r) = t.div_rem(&prev);
                    debug_assert!(r.is_zero());
                    m[(i, j)] = q;
                }
                m[(i, k)] = BigInt::zero();
            }
            prev = m[(k, k)].clone();
        }
        let d = m[(n - 1, n - 1)].clone();
        if sign < 0 {
            -d
        } else {
            d
        }
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.entries[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        &mut self.entries[i * self.cols + j]
    }
}

/// Row Hermite normal form: pivots positive with strictly increasing pivot
/// columns, entries above a pivot reduced into [0, pivot), zero rows trailing.
/// The result is the canonical basis of the row lattice of `a` (padded with
/// zero rows to the input row count).
pub fn hermite_normal_form(a: &IntMatrix) -> IntMatrix {
    hnf_with_transform(a).0
}

/// Row HNF together with a unimodular `u` such that `u * a = h`.
pub fn hnf_with_transform(a: &IntMatrix) -> (IntMatrix, IntMatrix) {
    let mut h = a.clone();
    let mut u = IntMatrix::identity(a.rows());
    let (rows, cols) = (h.rows(), h.cols());
    let mut pivot_row = 0;
    for col in 0..cols {
        if pivot_row == rows {
            break;
        }
        // clear the column below pivot_row with gcd row combinations
        let mut pivot = None;
        for i in pivot_row..rows {
            if !h[(i, col)].is_zero() {
                pivot = Some(i);
                break;
            }
        }
        let Some(p) = pivot else { continue };
        h.swap_rows(pivot_row, p);
        u.swap_rows(pivot_row, p);
        for i in pivot_row + 1..rows {
            if h[(i, col)].is_zero() {
                continue;
            }
            let x = h[(pivot_row, col)].clone();
            let y = h[(i, col)].clone();
            let e = x.extended_gcd(&y);
            // [s t; -y/g x/g] is unimodular and sends (x, y) to (g, 0)
            let mg = -(&y / &e.gcd);
            let xg = &x / &e.gcd;
            h.combine_rows(pivot_row, i, &e.x, &e.y, &mg, &xg);
            u.combine_rows(pivot_row, i, &e.x, &e.y, &mg, &xg);
        }
        if h[(pivot_row, col)].is_negative() {
            h.negate_row(pivot_row);
            u.negate_row(pivot_row);
        }
        // reduce entries above the pivot into [0, pivot)
        let p_val = h[(pivot_row, col)].clone();
        for i in 0..pivot_row {
            let q = h[(i, col)].div_floor(&p_val);
            if !q.is_zero() {
                let nq = -q;
                h.add_multiple_of_row(i, pivot_row, &nq);
                u.add_multiple_of_row(i, pivot_row, &nq);
            }
        }
        pivot_row += 1;
    }
    (h, u)
}

/// Smith normal form: returns (u, d, v) with u*a*v = d, u and v unimodular,
/// d diagonal with nonnegative entries and d_i | d_{i+1}.
pub fn smith_normal_form(a: &IntMatrix) -> (IntMatrix, IntMatrix, IntMatrix) {
    let mut d = a.clone();
    let mut u = IntMatrix::identity(a.rows());
    let mut v = IntMatrix::identity(a.cols());
    let (rows, cols) = (d.rows(), d.cols());
    let steps = rows.min(cols);

    for t in 0..steps {
        // find a nonzero entry in the trailing submatrix
        let mut found = None;
        'search: for i in t..rows {
            for j in t..cols {
                if !d[(i, j)].is_zero() {
                    found = Some((i, j));
                    break 'search;
                }
            }
        }
        let Some((pi, pj)) = found else { break };
        d.swap_rows(t, pi);
        u.swap_rows(t, pi);
        d.swap_cols(t, pj);
        v.swap_cols(t, pj);

        loop {
            // clear column t below the pivot
            for i in t + 1..rows {
                if d[(i, t)].is_zero() {
                    continue;
                }
                let x = d[(t, t)].clone();
                let y = d[(i, t)].clone();
                let e = x.extended_gcd(&y);
                let mg = -(&y / &e.gcd);
                let xg = &x / &e.gcd;
                d.combine_rows(t, i, &e.x, &e.y, &mg, &xg);
                u.combine_rows(t, i, &e.x, &e.y, &mg, &xg);
            }
            // clear row t right of the pivot
            for j in t + 1..cols {
                if d[(t, j)].is_zero() {
                    continue;
                }
                let x = d[(t, t)].clone();
                let y = d[(t, j)].clone();
                let e = x.extended_gcd(&y);
                let mg = -(&y / &e.gcd);
                let xg = &x / &e.gcd;
                d.combine_cols(t, j, &e.x, &e.y, &mg, &xg);
                v.combine_cols(t, j, &e.x, &e.y, &mg, &xg);
            }
            let col_clear = (t + 1..rows).all(|i| d[(i, t)].is_zero());
            let row_clear = (t + 1..cols).all(|j| d[(t, j)].is_zero());
            if !(col_clear && row_clear) {
                continue;
            }
            // pivot must divide the rest of the submatrix
            let mut offender = None;
            'div: for i in t + 1..rows {
                for j in t + 1..cols {
                    if !(&d[(i, j)] % &d[(t, t)]).is_zero() {
                        offender = Some(i);
                        break 'div;
                    }
                }
            }
            match offender {
                Some(i) => {
                    d.add_multiple_of_row(t, i, &BigInt::one());
                    u.add_multiple_of_row(t, i, &BigInt::one());
                }
                None => break,
            }
        }
        if d[(t, t)].is_negative() {
            d.negate_row(t);
            u.negate_row(t);
        }
    }
    (u, d, v)
}

/// Basis of the lattice `{x in Z^rows : (x * a)_j = 0 mod moduli_j for all j}`
/// as rows of a Hermite-form matrix. The lattice always has full rank equal
/// to `a.rows()` because it contains `prod(moduli) * Z^rows`.
///
/// Implemented by stacking `diag(moduli)` under `a` and reading the left
/// kernel of the extended system off the HNF transformation.
pub fn kernel_mod(a: &IntMatrix, moduli: &[u64]) -> IntMatrix {
    assert_eq!(moduli.len(), a.cols(), "one modulus per column");
    let r = a.rows();
    let c = a.cols();
    let mut stacked = a.row_vecs();
    for (j, &m) in moduli.iter().enumerate() {
        let mut row = vec![BigInt::zero(); c];
        row[j] = BigInt::from(m);
        stacked.push(row);
    }
    let b = IntMatrix::from_rows(stacked);
    let (h, u) = hnf_with_transform(&b);
    let mut basis = Vec::new();
    for i in 0..h.rows() {
        if h.is_zero_row(i) {
            basis.push(u.row(i)[..r].to_vec());
        }
    }
    let k = hermite_normal_form(&IntMatrix::from_rows(basis));
    let nonzero = (0..k.rows()).filter(|&i| !k.is_zero_row(i)).count();
    assert_eq!(nonzero, r, "kernel_mod basis must have full rank");
    IntMatrix::from_rows((0..nonzero).map(|i| k.row(i).to_vec()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn snf_identity_and_zero() {
        let (u, d, v) = smith_normal_form(&IntMatrix::identity(3));
        assert_eq!(d, IntMatrix::identity(3));
        assert_eq!(u.mul(&IntMatrix::identity(3)).mul(&v), d);
        let z = IntMatrix::zero(2, 3);
        let (_, d, _) = smith_normal_form(&z);
        assert_eq!(d, z);
    }

    #[test]
    fn snf_diag_2_3() {
        let a = IntMatrix::from_i64(&[&[2, 0], &[0, 3]]);
        let (u, d, v) = smith_normal_form(&a);
        assert_eq!(d, IntMatrix::from_i64(&[&[1, 0], &[0, 6]]));
        assert_eq!(u.mul(&a).mul(&v), d);
        assert_eq!(u.det().abs(), BigInt::one());
        assert_eq!(v.det().abs(), BigInt::one());
    }

    #[test]
    fn hnf_examples() {
        let a = IntMatrix::from_i64(&[&[2, 0], &[0, 2]]);
        assert_eq!(hermite_normal_form(&a), a);
        let b = IntMatrix::from_i64(&[&[1, 2], &[3, 4]]);
        assert_eq!(hermite_normal_form(&b), IntMatrix::from_i64(&[&[1, 0], &[0, 2]]));
        // zero rows are retained, trailing
        let z = IntMatrix::from_i64(&[&[0, 0]]);
        assert_eq!(hermite_normal_form(&z), z);
        let c = IntMatrix::from_i64(&[&[0, 0], &[0, 3]]);
        assert_eq!(hermite_normal_form(&c), IntMatrix::from_i64(&[&[0, 3], &[0, 0]]));
    }

    #[test]
    fn hnf_transform_is_unimodular() {
        let a = IntMatrix::from_i64(&[&[4, 6, 2], &[6, 9, 3], &[2, 8, 5]]);
        let (h, u) = hnf_with_transform(&a);
        assert_eq!(u.mul(&a), h);
        assert_eq!(u.det().abs(), BigInt::one());
    }

    #[test]
    fn kernel_mod_examples() {
        // multiples of 2
        let a = IntMatrix::from_i64(&[&[1]]);
        assert_eq!(kernel_mod(&a, &[2]), IntMatrix::from_i64(&[&[2]]));
        // modulus 1: no constraint
        assert_eq!(kernel_mod(&a, &[1]), IntMatrix::from_i64(&[&[1]]));
        // a + b = 0 mod 3
        let b = IntMatrix::from_i64(&[&[1], &[1]]);
        let k = kernel_mod(&b, &[3]);
        assert_eq!(k, IntMatrix::from_i64(&[&[1, 2], &[0, 3]]));
    }

    #[test]
    fn bareiss_det() {
        let a = IntMatrix::from_i64(&[&[2, 3, 1], &[0, 1, 4], &[5, 6, 0]]);
        assert_eq!(a.det(), BigInt::from(2 * (0 - 24) - 3 * (0 - 20) + (0 - 5)));
        assert_eq!(IntMatrix::zero(2, 2).det(), BigInt::zero());
    }
}
