//! Dense exact matrices and echelonised subspaces over a [`Field`].
//!
//! Row-echelon form is the canonical representation everywhere: two
//! subspaces are equal iff their reduced echelon bases are equal, which
//! keeps every subspace comparison deterministic.

use crate::field::Field;

#[derive(Clone, PartialEq)]
pub struct Matrix<F: Field> {
    pub field: F,
    pub rows: usize,
    pub cols: usize,
    data: Vec<F::Elem>,
}

impl<F: Field> std::fmt::Debug for Matrix<F> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(
            f,
            "Matrix {}x{} over {:?}",
            self.rows, self.cols, self.field
        )?;
        for i in 0..self.rows {
            writeln!(f, "  {:?}", &self.data[i * self.cols..(i + 1) * self.cols])?;
        }
        Ok(())
    }
}

impl<F: Field> Matrix<F> {
    pub fn zeros(field: F, rows: usize, cols: usize) -> Self {
        let data = vec![field.zero(); rows * cols];
        Matrix {
            field,
            rows,
            cols,
            data,
        }
    }

    pub fn identity(field: F, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            let one = m.field.one();
            m.set(i, i, one);
        }
        m
    }

    pub fn from_rows(field: F, rows: &[Vec<F::Elem>]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged rows");
            data.extend(r.iter().cloned());
        }
        Matrix {
            field,
            rows: rows.len(),
            cols,
            data,
        }
    }

    #[inline]
    pub fn at(&self, i: usize, j: usize) -> &F::Elem {
        &self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: F::Elem) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[F::Elem] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vec(&self, i: usize) -> Vec<F::Elem> {
        self.row(i).to_vec()
    }

    pub fn rows_vec(&self) -> Vec<Vec<F::Elem>> {
        (0..self.rows).map(|i| self.row_vec(i)).collect()
    }

    pub fn push_row(&mut self, r: &[F::Elem]) {
        assert_eq!(r.len(), self.cols);
        self.data.extend(r.iter().cloned());
        self.rows += 1;
    }

    pub fn vstack(&self, other: &Matrix<F>) -> Matrix<F> {
        assert_eq!(self.cols, other.cols);
        let mut m = self.clone();
        m.data.extend(other.data.iter().cloned());
        m.rows += other.rows;
        m
    }

    pub fn transpose(&self) -> Matrix<F> {
        let mut t = Matrix::zeros(self.field.clone(), self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.at(i, j).clone());
            }
        }
        t
    }

    pub fn mat_mul(&self, other: &Matrix<F>) -> Matrix<F> {
        assert_eq!(self.cols, other.rows);
        let f = &self.field;
        let mut out = Matrix::zeros(self.field.clone(), self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(i, k);
                if f.is_zero(a) {
                    continue;
                }
                for j in 0..other.cols {
                    let v = f.mul_add(out.at(i, j), a, other.at(k, j));
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    /// Apply the matrix to a column vector.
    pub fn apply(&self, v: &[F::Elem]) -> Vec<F::Elem> {
        assert_eq!(self.cols, v.len());
        let f = &self.field;
        let mut out = vec![f.zero(); self.rows];
        for i in 0..self.rows {
            let mut acc = f.zero();
            for j in 0..self.cols {
                let a = self.at(i, j);
                if !f.is_zero(a) {
                    acc = f.mul_add(&acc, a, &v[j]);
                }
            }
            out[i] = acc;
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| self.field.is_zero(x))
    }

    pub fn scale(&self, c: &F::Elem) -> Matrix<F> {
        let mut m = self.clone();
        for x in &mut m.data {
            *x = m.field.mul(x, c);
        }
        m
    }

    pub fn add_mat(&self, other: &Matrix<F>) -> Matrix<F> {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut m = self.clone();
        for (x, y) in m.data.iter_mut().zip(other.data.iter()) {
            *x = m.field.add(x, y);
        }
        m
    }

    pub fn sub_mat(&self, other: &Matrix<F>) -> Matrix<F> {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut m = self.clone();
        for (x, y) in m.data.iter_mut().zip(other.data.iter()) {
            *x = m.field.sub(x, y);
        }
        m
    }

    pub fn pow_square(&self, e: u64) -> Matrix<F> {
        assert_eq!(self.rows, self.cols);
        let mut acc = Matrix::identity(self.field.clone(), self.rows);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mat_mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mat_mul(&base);
            }
        }
        acc
    }

    /// In-place reduced row echelon form. Returns the pivot columns.
    pub fn rref(&mut self) -> Vec<usize> {
        let f = self.field.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            // Find a pivot in column c at or below row r.
            let mut piv = None;
            for i in r..self.rows {
                if !f.is_zero(self.at(i, c)) {
                    piv = Some(i);
                    break;
                }
            }
            let Some(i) = piv else { continue };
            self.swap_rows(r, i);
            let inv = f.inv(self.at(r, c)).expect("pivot nonzero");
            for j in c..self.cols {
                let v = f.mul(self.at(r, j), &inv);
                self.set(r, j, v);
            }
            for i in 0..self.rows {
                if i != r && !f.is_zero(self.at(i, c)) {
                    let factor = f.neg(self.at(i, c));
                    for j in c..self.cols {
                        let v = f.mul_add(self.at(i, j), &factor, self.at(r, j));
                        self.set(i, j, v);
                    }
                    self.set(i, c, f.zero());
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        m.rref().len()
    }

    /// Basis of the right kernel {v : M v = 0}, as rows of the result.
    pub fn kernel(&self) -> Matrix<F> {
        let f = self.field.clone();
        let mut m = self.clone();
        let pivots = m.rref();
        let pivot_set: std::collections::HashSet<usize> = pivots.iter().copied().collect();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivot_set.contains(c)).collect();
        let mut out = Matrix::zeros(f.clone(), 0, self.cols);
        for &fc in &free {
            let mut v = vec![f.zero(); self.cols];
            v[fc] = f.one();
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = f.neg(m.at(r, fc));
            }
            out.push_row(&v);
        }
        out
    }

    /// Solve M x = b. Returns one solution (free variables set to zero,
    /// which makes the answer deterministic) or `None` if inconsistent.
    pub fn solve(&self, b: &[F::Elem]) -> Option<Vec<F::Elem>> {
        assert_eq!(b.len(), self.rows);
        let f = self.field.clone();
        let mut aug = Matrix::zeros(f.clone(), self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug.set(i, j, self.at(i, j).clone());
            }
            aug.set(i, self.cols, b[i].clone());
        }
        let pivots = aug.rref();
        if pivots.contains(&self.cols) {
            return None;
        }
        let mut x = vec![f.zero(); self.cols];
        for (r, &c) in pivots.iter().enumerate() {
            x[c] = aug.at(r, self.cols).clone();
        }
        Some(x)
    }
}

impl Matrix<crate::field::Fp> {
    /// Product with delayed modular reduction; for p below 2^16 the
    /// accumulator cannot overflow u64 across a full row.
    pub fn mat_mul_fp(&self, other: &Matrix<crate::field::Fp>) -> Matrix<crate::field::Fp> {
        assert_eq!(self.cols, other.rows);
        let p = self.field.p();
        assert!(p < (1 << 16));
        let (n, m, l) = (self.rows, self.cols, other.cols);
        let mut out = Matrix::zeros(self.field, n, l);
        let mut acc = vec![0u64; l];
        for i in 0..n {
            acc.iter_mut().for_each(|a| *a = 0);
            for k in 0..m {
                let a = self.data[i * m + k];
                if a == 0 {
                    continue;
                }
                let row = &other.data[k * l..(k + 1) * l];
                for (s, b) in acc.iter_mut().zip(row) {
                    *s += a * b;
                }
            }
            for (j, s) in acc.iter().enumerate() {
                out.data[i * l + j] = s % p;
            }
        }
        out
    }

    pub fn pow_square_fp(&self, e: u64) -> Matrix<crate::field::Fp> {
        assert_eq!(self.rows, self.cols);
        let mut acc = Matrix::identity(self.field, self.rows);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mat_mul_fp(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mat_mul_fp(&base);
            }
        }
        acc
    }
}

/// A subspace of a fixed coordinate space, stored as a reduced row
/// echelon basis with strictly increasing pivots.
///
/// The two flags cache verified structural facts (bracket closure,
/// closure under the p-map). `None` means not yet checked; they are set
/// by the algebra operations, never assumed, and are excluded from
/// equality.
#[derive(Clone, Debug)]
pub struct Subspace<F: Field> {
    mat: Matrix<F>,
    pivots: Vec<usize>,
    pub flag_subalgebra: Option<bool>,
    pub flag_restricted: Option<bool>,
}

impl<F: Field> PartialEq for Subspace<F> {
    fn eq(&self, other: &Self) -> bool {
        self.mat == other.mat
    }
}

impl<F: Field> Subspace<F> {
    pub fn zero(field: F, ambient: usize) -> Self {
        Subspace {
            mat: Matrix::zeros(field, 0, ambient),
            pivots: vec![],
            flag_subalgebra: None,
            flag_restricted: None,
        }
    }

    pub fn full(field: F, ambient: usize) -> Self {
        Self::from_rows(field.clone(), &Matrix::identity(field, ambient).rows_vec())
    }

    pub fn from_rows(field: F, rows: &[Vec<F::Elem>]) -> Self {
        let ambient = rows.first().map_or(0, |r| r.len());
        let mut m = Matrix::from_rows(field.clone(), rows);
        let pivots = m.rref();
        let mut clean = Matrix::zeros(field, 0, ambient);
        for i in 0..pivots.len() {
            let r = m.row_vec(i);
            clean.push_row(&r);
        }
        Subspace {
            mat: clean,
            pivots,
            flag_subalgebra: None,
            flag_restricted: None,
        }
    }

    pub fn from_matrix(m: &Matrix<F>) -> Self {
        if m.rows == 0 {
            return Self::zero(m.field.clone(), m.cols);
        }
        Self::from_rows(m.field.clone(), &m.rows_vec())
    }

    /// Like `from_rows` but with the ambient dimension made explicit,
    /// so an empty spanning set is handled correctly.
    pub fn span(field: F, ambient: usize, rows: &[Vec<F::Elem>]) -> Self {
        if rows.is_empty() {
            return Self::zero(field, ambient);
        }
        assert!(rows.iter().all(|r| r.len() == ambient));
        Self::from_rows(field, rows)
    }

    pub fn dim(&self) -> usize {
        self.mat.rows
    }

    pub fn ambient(&self) -> usize {
        self.mat.cols
    }

    pub fn field(&self) -> &F {
        &self.mat.field
    }

    pub fn basis(&self) -> &Matrix<F> {
        &self.mat
    }

    pub fn basis_rows(&self) -> Vec<Vec<F::Elem>> {
        self.mat.rows_vec()
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Residual of v after reduction by the echelon basis; zero iff v
    /// lies in the subspace.
    pub fn reduce(&self, v: &[F::Elem]) -> Vec<F::Elem> {
        let f = self.field().clone();
        let mut w = v.to_vec();
        for (r, &c) in self.pivots.iter().enumerate() {
            if !f.is_zero(&w[c]) {
                let factor = f.neg(&w[c]);
                for j in c..w.len() {
                    w[j] = f.mul_add(&w[j], &factor, self.mat.at(r, j));
                }
                w[c] = f.zero();
            }
        }
        w
    }

    pub fn contains(&self, v: &[F::Elem]) -> bool {
        let f = self.field();
        self.reduce(v).iter().all(|x| f.is_zero(x))
    }

    pub fn contains_subspace(&self, other: &Subspace<F>) -> bool {
        (0..other.dim()).all(|i| self.contains(other.mat.row(i)))
    }

    /// Coordinates of v in the echelon basis, or `None` if v is outside.
    pub fn coordinates(&self, v: &[F::Elem]) -> Option<Vec<F::Elem>> {
        let f = self.field().clone();
        let mut w = v.to_vec();
        let mut coords = vec![f.zero(); self.dim()];
        for (r, &c) in self.pivots.iter().enumerate() {
            if !f.is_zero(&w[c]) {
                let coeff = w[c].clone();
                let factor = f.neg(&coeff);
                for j in c..w.len() {
                    w[j] = f.mul_add(&w[j], &factor, self.mat.at(r, j));
                }
                w[c] = f.zero();
                coords[r] = coeff;
            }
        }
        if w.iter().all(|x| f.is_zero(x)) {
            Some(coords)
        } else {
            None
        }
    }

    /// Insert a vector, returning true when the dimension grew.
    pub fn insert(&mut self, v: &[F::Elem]) -> bool {
        let f = self.field().clone();
        let res = self.reduce(v);
        let Some(c) = res.iter().position(|x| !f.is_zero(x)) else {
            return false;
        };
        // Normalise and re-echelonise against existing rows.
        let inv = f.inv(&res[c]).unwrap();
        let norm: Vec<F::Elem> = res.iter().map(|x| f.mul(x, &inv)).collect();
        let pos = self
            .pivots
            .iter()
            .position(|&p| p > c)
            .unwrap_or(self.pivots.len());
        let mut rows = self.basis_rows();
        rows.insert(pos, norm.clone());
        for (i, row) in rows.iter_mut().enumerate() {
            if i == pos {
                continue;
            }
            if !f.is_zero(&row[c]) {
                let factor = f.neg(&row[c]);
                for j in 0..row.len() {
                    row[j] = f.mul_add(&row[j], &factor, &norm[j]);
                }
            }
        }
        self.mat = Matrix::from_rows(f, &rows);
        self.pivots.insert(pos, c);
        true
    }

    pub fn sum(&self, other: &Subspace<F>) -> Subspace<F> {
        let mut rows = self.basis_rows();
        rows.extend(other.basis_rows());
        Subspace::from_rows(self.field().clone(), &rows)
    }

    /// Intersection via the kernel of the stacked basis.
    pub fn intersect(&self, other: &Subspace<F>) -> Subspace<F> {
        let f = self.field().clone();
        let n = self.ambient();
        assert_eq!(n, other.ambient());
        let a = self.dim();
        let b = other.dim();
        if a == 0 || b == 0 {
            return Subspace::zero(f, n);
        }
        // Solve x*A = y*B; kernel of [A^T | -B^T] gives the coefficient
        // pairs, and x*A spans the intersection.
        let mut m = Matrix::zeros(f.clone(), n, a + b);
        for i in 0..a {
            for j in 0..n {
                m.set(j, i, self.mat.at(i, j).clone());
            }
        }
        for i in 0..b {
            for j in 0..n {
                m.set(j, a + i, f.neg(other.mat.at(i, j)));
            }
        }
        let ker = m.kernel();
        let mut rows = Vec::new();
        for k in 0..ker.rows {
            let mut v = vec![f.zero(); n];
            for i in 0..a {
                let ci = ker.at(k, i);
                if f.is_zero(ci) {
                    continue;
                }
                for j in 0..n {
                    v[j] = f.mul_add(&v[j], ci, self.mat.at(i, j));
                }
            }
            rows.push(v);
        }
        Subspace::from_rows(f, &rows)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Fp;
    use proptest::prelude::*;

    fn f7() -> Fp {
        Fp::new(7)
    }

    #[test]
    fn rref_and_rank() {
        let m = Matrix::from_rows(f7(), &[vec![1, 2, 3], vec![2, 4, 6], vec![0, 1, 1]]);
        assert_eq!(m.rank(), 2);
        let k = m.kernel();
        assert_eq!(k.rows, 1);
        for i in 0..m.rows {
            let mv = m.apply(k.row(0));
            assert!(mv.iter().all(|&x| x == 0), "kernel row {i} fails");
        }
    }

    #[test]
    fn solve_consistent_and_not() {
        let m = Matrix::from_rows(f7(), &[vec![1, 1], vec![0, 1], vec![1, 2]]);
        let x = m.solve(&[3, 2, 5]).unwrap();
        assert_eq!(m.apply(&x), vec![3, 2, 5]);
        assert!(m.solve(&[3, 2, 6]).is_none());
    }

    #[test]
    fn subspace_membership() {
        let s = Subspace::from_rows(f7(), &[vec![1, 2, 0], vec![0, 0, 1]]);
        assert_eq!(s.dim(), 2);
        assert!(s.contains(&[2, 4, 5]));
        assert!(!s.contains(&[1, 0, 0]));
        let c = s.coordinates(&[2, 4, 5]).unwrap();
        assert_eq!(c, vec![2, 5]);
    }

    #[test]
    fn subspace_insert_grows_once() {
        let mut s = Subspace::zero(f7(), 3);
        assert!(s.insert(&[0, 2, 1]));
        assert!(!s.insert(&[0, 4, 2]));
        assert!(s.insert(&[1, 0, 0]));
        assert_eq!(s.dim(), 2);
    }

    #[test]
    fn intersection() {
        let a = Subspace::from_rows(f7(), &[vec![1, 0, 0], vec![0, 1, 0]]);
        let b = Subspace::from_rows(f7(), &[vec![0, 1, 0], vec![0, 0, 1]]);
        let c = a.intersect(&b);
        assert_eq!(c.dim(), 1);
        assert!(c.contains(&[0, 3, 0]));
    }

    proptest! {
        #[test]
        fn echelon_idempotent(rows in proptest::collection::vec(
            proptest::collection::vec(0u64..7, 5), 1..6)) {
            let s = Subspace::from_rows(f7(), &rows);
            let t = Subspace::from_rows(f7(), &s.basis_rows());
            prop_assert_eq!(s, t);
        }

        #[test]
        fn kernel_times_matrix_is_zero(rows in proptest::collection::vec(
            proptest::collection::vec(0u64..7, 4), 1..5)) {
            let m = Matrix::from_rows(f7(), &rows);
            let k = m.kernel();
            for i in 0..k.rows {
                prop_assert!(m.apply(k.row(i)).iter().all(|&x| x == 0));
            }
            prop_assert_eq!(k.rows + m.rank(), 4);
        }
    }
}
