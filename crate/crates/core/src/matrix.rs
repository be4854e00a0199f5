//! Dense exact matrices over a [`FieldHandle`], with the row reduction,
//! solving, and tensor-product helpers the rest of the crate is built on.
//!
//! All dimensions may be zero; empty matrices behave as the corresponding
//! linear maps between zero spaces.

use crate::field::{FieldElement, FieldHandle};
use crate::{Error, Result};
use std::fmt;

/// A `rows × cols` matrix, stored row-major.
#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    handle: FieldHandle,
    rows: usize,
    cols: usize,
    data: Vec<FieldElement>,
}

/// Result of solving `A·X = B`.
pub enum Solution {
    Inconsistent,
    Solved {
        /// One particular solution, `A.cols × B.cols`.
        particular: Matrix,
        /// Columns form a basis of the null space of `A`.
        kernel: Matrix,
    },
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} over {}", self.rows, self.cols, self.handle.describe())?;
        for r in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|c| self.get(r, c).format()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl Matrix {
    pub fn zero(handle: &FieldHandle, rows: usize, cols: usize) -> Matrix {
        Matrix {
            handle: handle.clone(),
            rows,
            cols,
            data: vec![handle.zero(); rows * cols],
        }
    }

    pub fn identity(handle: &FieldHandle, n: usize) -> Matrix {
        let mut m = Matrix::zero(handle, n, n);
        for i in 0..n {
            m.set(i, i, handle.one());
        }
        m
    }

    pub fn from_fn<F: FnMut(usize, usize) -> FieldElement>(
        handle: &FieldHandle,
        rows: usize,
        cols: usize,
        mut f: F,
    ) -> Matrix {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Matrix {
            handle: handle.clone(),
            rows,
            cols,
            data,
        }
    }

    pub fn from_rows(handle: &FieldHandle, rows: Vec<Vec<FieldElement>>) -> Result<Matrix> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, |r| r.len());
        for r in &rows {
            if r.len() != ncols {
                return Err(Error::ShapeMismatch("ragged rows".into()));
            }
        }
        Ok(Matrix {
            handle: handle.clone(),
            rows: nrows,
            cols: ncols,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn from_cols(handle: &FieldHandle, cols: &[Vec<FieldElement>]) -> Result<Matrix> {
        let ncols = cols.len();
        let nrows = cols.first().map_or(0, |c| c.len());
        for c in cols {
            if c.len() != nrows {
                return Err(Error::ShapeMismatch("ragged columns".into()));
            }
        }
        Ok(Matrix::from_fn(handle, nrows, ncols, |r, c| {
            cols[c][r].clone()
        }))
    }

    /// Convenience constructor from integer literals.
    pub fn from_ints(handle: &FieldHandle, rows: &[Vec<i64>]) -> Matrix {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, |r| r.len());
        Matrix::from_fn(handle, nrows, ncols, |r, c| handle.from_i64(rows[r][c]))
    }

    pub fn handle(&self) -> &FieldHandle {
        &self.handle
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &FieldElement {
        debug_assert!(r < self.rows && c < self.cols);
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: FieldElement) {
        debug_assert!(r < self.rows && c < self.cols);
        self.data[r * self.cols + c] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|e| e.is_zero())
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, r: usize) -> Vec<FieldElement> {
        (0..self.cols).map(|c| self.get(r, c).clone()).collect()
    }

    pub fn col(&self, c: usize) -> Vec<FieldElement> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    /// Column `c` as a `rows × 1` matrix.
    pub fn col_matrix(&self, c: usize) -> Matrix {
        Matrix::from_fn(&self.handle, self.rows, 1, |r, _| self.get(r, c).clone())
    }

    pub fn set_col(&mut self, c: usize, v: &[FieldElement]) {
        debug_assert_eq!(v.len(), self.rows);
        for r in 0..self.rows {
            self.set(r, c, v[r].clone());
        }
    }

    pub fn submatrix(&self, row_idx: &[usize], col_idx: &[usize]) -> Matrix {
        Matrix::from_fn(&self.handle, row_idx.len(), col_idx.len(), |r, c| {
            self.get(row_idx[r], col_idx[c]).clone()
        })
    }

    pub fn map<F: FnMut(&FieldElement) -> FieldElement>(&self, f: F) -> Matrix {
        Matrix {
            handle: self.handle.clone(),
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    /// Reinterprets a matrix over a degree-1 handle as a matrix over
    /// `target` (entries become constants of the larger field).
    pub fn promote_scalars(&self, target: &FieldHandle) -> Result<Matrix> {
        if self.handle.degree() != 1 {
            return Err(Error::ShapeMismatch(
                "can only promote matrices over a degree-1 field".into(),
            ));
        }
        if self.handle.base_field() != target.base_field() {
            return Err(Error::HandleMismatch("different base fields".into()));
        }
        Ok(Matrix {
            handle: target.clone(),
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .map(|e| target.from_base(e.base_value()))
                .collect(),
        })
    }

    /// Expands each entry of a matrix over an extension field into its
    /// `d×d` base-field multiplication matrix.  With coordinates stacked
    /// component-major, this is the matrix of the same linear map over the
    /// base field.
    pub fn to_base_blocks(&self) -> Matrix {
        let d = self.handle.degree();
        let base = self.handle.base_handle();
        let mut out = Matrix::zero(&base, self.rows * d, self.cols * d);
        for r in 0..self.rows {
            for c in 0..self.cols {
                let e = self.get(r, c);
                if e.is_zero() {
                    continue;
                }
                let block = self.handle.mult_matrix(e);
                for s in 0..d {
                    for t in 0..d {
                        out.set(r * d + s, c * d + t, block.get(s, t).clone());
                    }
                }
            }
        }
        out
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(&self.handle, self.cols, self.rows, |r, c| {
            self.get(c, r).clone()
        })
    }

    pub fn add(&self, other: &Matrix) -> Result<Matrix> {
        self.check_same_shape(other)?;
        Ok(Matrix {
            handle: self.handle.clone(),
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a.add(b))
                .collect(),
        })
    }

    pub fn sub(&self, other: &Matrix) -> Result<Matrix> {
        self.check_same_shape(other)?;
        Ok(Matrix {
            handle: self.handle.clone(),
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a.sub(b))
                .collect(),
        })
    }

    pub fn neg(&self) -> Matrix {
        self.map(|e| e.neg())
    }

    pub fn scale(&self, c: &FieldElement) -> Matrix {
        self.map(|e| e.mul(c))
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix> {
        if self.handle != other.handle {
            return Err(Error::HandleMismatch("matrix product".into()));
        }
        if self.cols != other.rows {
            return Err(Error::ShapeMismatch(format!(
                "product of {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Matrix::zero(&self.handle, self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    let b = other.get(k, c);
                    if b.is_zero() {
                        continue;
                    }
                    let cur = out.get(r, c).add(&a.mul(b));
                    out.set(r, c, cur);
                }
            }
        }
        Ok(out)
    }

    /// Applies the matrix to a coordinate vector.
    pub fn apply(&self, v: &[FieldElement]) -> Result<Vec<FieldElement>> {
        if v.len() != self.cols {
            return Err(Error::ShapeMismatch(format!(
                "applying {}x{} to a vector of length {}",
                self.rows,
                self.cols,
                v.len()
            )));
        }
        let mut out = vec![self.handle.zero(); self.rows];
        for (c, x) in v.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for r in 0..self.rows {
                let a = self.get(r, c);
                if !a.is_zero() {
                    out[r] = out[r].add(&a.mul(x));
                }
            }
        }
        Ok(out)
    }

    pub fn hstack(mats: &[Matrix]) -> Result<Matrix> {
        let first = mats.first().ok_or_else(|| {
            Error::ShapeMismatch("hstack of an empty list".into())
        })?;
        let rows = first.rows;
        let handle = first.handle.clone();
        let mut cols = 0;
        for m in mats {
            if m.rows != rows {
                return Err(Error::ShapeMismatch("hstack with mismatched row counts".into()));
            }
            if m.handle != handle {
                return Err(Error::HandleMismatch("hstack".into()));
            }
            cols += m.cols;
        }
        let mut out = Matrix::zero(&handle, rows, cols);
        let mut offset = 0;
        for m in mats {
            for r in 0..rows {
                for c in 0..m.cols {
                    out.set(r, offset + c, m.get(r, c).clone());
                }
            }
            offset += m.cols;
        }
        Ok(out)
    }

    pub fn vstack(mats: &[Matrix]) -> Result<Matrix> {
        let first = mats.first().ok_or_else(|| {
            Error::ShapeMismatch("vstack of an empty list".into())
        })?;
        let cols = first.cols;
        let handle = first.handle.clone();
        let mut rows = 0;
        for m in mats {
            if m.cols != cols {
                return Err(Error::ShapeMismatch("vstack with mismatched column counts".into()));
            }
            if m.handle != handle {
                return Err(Error::HandleMismatch("vstack".into()));
            }
            rows += m.rows;
        }
        let mut out = Matrix::zero(&handle, rows, cols);
        let mut offset = 0;
        for m in mats {
            for r in 0..m.rows {
                for c in 0..cols {
                    out.set(offset + r, c, m.get(r, c).clone());
                }
            }
            offset += m.rows;
        }
        Ok(out)
    }

    pub fn block_diag(handle: &FieldHandle, blocks: &[Matrix]) -> Matrix {
        let rows = blocks.iter().map(|b| b.rows).sum();
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut out = Matrix::zero(handle, rows, cols);
        let mut ro = 0;
        let mut co = 0;
        for b in blocks {
            debug_assert!(b.handle == *handle);
            for r in 0..b.rows {
                for c in 0..b.cols {
                    out.set(ro + r, co + c, b.get(r, c).clone());
                }
            }
            ro += b.rows;
            co += b.cols;
        }
        out
    }

    /// Kronecker product with the left factor major: entry
    /// `((a,b),(c,d)) = A[a,c]·B[b,d]` at row `a·B.rows + b`, column
    /// `c·B.cols + d`.
    pub fn kronecker(a: &Matrix, b: &Matrix) -> Matrix {
        debug_assert!(a.handle == b.handle);
        let mut out = Matrix::zero(&a.handle, a.rows * b.rows, a.cols * b.cols);
        for ar in 0..a.rows {
            for ac in 0..a.cols {
                let x = a.get(ar, ac);
                if x.is_zero() {
                    continue;
                }
                for br in 0..b.rows {
                    for bc in 0..b.cols {
                        let y = b.get(br, bc);
                        if y.is_zero() {
                            continue;
                        }
                        out.set(ar * b.rows + br, ac * b.cols + bc, x.mul(y));
                    }
                }
            }
        }
        out
    }

    /// Reduced row echelon form together with the pivot column indices.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row >= m.rows {
                break;
            }
            // find the first nonzero entry at or below `row`
            let mut pivot = None;
            for r in row..m.rows {
                if !m.get(r, col).is_zero() {
                    pivot = Some(r);
                    break;
                }
            }
            let Some(p) = pivot else { continue };
            if p != row {
                for c in 0..m.cols {
                    let a = m.get(row, c).clone();
                    let b = m.get(p, c).clone();
                    m.set(row, c, b);
                    m.set(p, c, a);
                }
            }
            let inv = m
                .get(row, col)
                .inv()
                .expect("pivot entry is nonzero");
            for c in col..m.cols {
                let v = m.get(row, c).mul(&inv);
                m.set(row, c, v);
            }
            for r in 0..m.rows {
                if r == row {
                    continue;
                }
                let factor = m.get(r, col).clone();
                if factor.is_zero() {
                    continue;
                }
                for c in col..m.cols {
                    let v = m.get(r, c).sub(&factor.mul(m.get(row, c)));
                    m.set(r, c, v);
                }
            }
            pivots.push(col);
            row += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Columns form a basis of `{x : self·x = 0}`.
    pub fn kernel_basis(&self) -> Matrix {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut out = Matrix::zero(&self.handle, self.cols, free.len());
        for (k, &fc) in free.iter().enumerate() {
            out.set(fc, k, self.handle.one());
            for (prow, &pc) in pivots.iter().enumerate() {
                out.set(pc, k, r.get(prow, fc).neg());
            }
        }
        out
    }

    /// Solves `self·X = b` for all columns of `b` at once.
    pub fn solve(&self, b: &Matrix) -> Result<Solution> {
        if b.rows != self.rows {
            return Err(Error::ShapeMismatch(format!(
                "solving {}x{} system with rhs of {} rows",
                self.rows, self.cols, b.rows
            )));
        }
        let aug = Matrix::hstack(&[self.clone(), b.clone()])?;
        let (r, pivots) = aug.rref();
        if pivots.iter().any(|&p| p >= self.cols) {
            return Ok(Solution::Inconsistent);
        }
        let mut particular = Matrix::zero(&self.handle, self.cols, b.cols);
        for (prow, &pc) in pivots.iter().enumerate() {
            for bc in 0..b.cols {
                particular.set(pc, bc, r.get(prow, self.cols + bc).clone());
            }
        }
        Ok(Solution::Solved {
            particular,
            kernel: self.kernel_basis(),
        })
    }

    pub fn inverse(&self) -> Result<Matrix> {
        if !self.is_square() {
            return Err(Error::ShapeMismatch("inverse of a non-square matrix".into()));
        }
        let id = Matrix::identity(&self.handle, self.rows);
        match self.solve(&id)? {
            Solution::Solved { particular, kernel } if kernel.cols == 0 => Ok(particular),
            _ => Err(Error::Singular("matrix is not invertible".into())),
        }
    }

    /// Any right inverse `X` with `self·X = I`; requires full row rank.
    pub fn right_inverse(&self) -> Result<Matrix> {
        let id = Matrix::identity(&self.handle, self.rows);
        match self.solve(&id)? {
            Solution::Solved { particular, .. } => Ok(particular),
            Solution::Inconsistent => {
                Err(Error::Singular("matrix has no right inverse".into()))
            }
        }
    }

    pub fn determinant(&self) -> Result<FieldElement> {
        if !self.is_square() {
            return Err(Error::ShapeMismatch("determinant of a non-square matrix".into()));
        }
        let mut m = self.clone();
        let n = m.rows;
        let mut det = self.handle.one();
        for col in 0..n {
            let mut pivot = None;
            for r in col..n {
                if !m.get(r, col).is_zero() {
                    pivot = Some(r);
                    break;
                }
            }
            let Some(p) = pivot else {
                return Ok(self.handle.zero());
            };
            if p != col {
                det = det.neg();
                for c in 0..n {
                    let a = m.get(col, c).clone();
                    let b = m.get(p, c).clone();
                    m.set(col, c, b);
                    m.set(p, c, a);
                }
            }
            let piv = m.get(col, col).clone();
            det = det.mul(&piv);
            let inv = piv.inv().expect("pivot entry is nonzero");
            for r in (col + 1)..n {
                let factor = m.get(r, col).mul(&inv);
                if factor.is_zero() {
                    continue;
                }
                for c in col..n {
                    let v = m.get(r, c).sub(&factor.mul(m.get(col, c)));
                    m.set(r, c, v);
                }
            }
        }
        Ok(det)
    }

    /// Flattens the matrix row-major into a single column vector.
    pub fn vec_rm(&self) -> Vec<FieldElement> {
        self.data.clone()
    }

    /// Rebuilds a `rows × cols` matrix from its row-major flattening.
    pub fn from_vec_rm(
        handle: &FieldHandle,
        rows: usize,
        cols: usize,
        data: Vec<FieldElement>,
    ) -> Result<Matrix> {
        if data.len() != rows * cols {
            return Err(Error::ShapeMismatch("row-major data of the wrong length".into()));
        }
        Ok(Matrix {
            handle: handle.clone(),
            rows,
            cols,
            data,
        })
    }

    fn check_same_shape(&self, other: &Matrix) -> Result<()> {
        if self.handle != other.handle {
            return Err(Error::HandleMismatch("matrix addition".into()));
        }
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::ShapeMismatch(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(())
    }
}

/// An incrementally built row space in reduced echelon form, used for
/// deduplicated span computations.
#[derive(Clone, Debug)]
pub struct RowSpace {
    handle: FieldHandle,
    ncols: usize,
    /// Rows, each normalized to have a leading 1; kept sorted by pivot.
    rows: Vec<Vec<FieldElement>>,
    pivots: Vec<usize>,
}

impl RowSpace {
    pub fn new(handle: &FieldHandle, ncols: usize) -> RowSpace {
        RowSpace {
            handle: handle.clone(),
            ncols,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    /// Reduces `v` against the current rows, returning the residual.
    pub fn residual(&self, v: &[FieldElement]) -> Vec<FieldElement> {
        debug_assert_eq!(v.len(), self.ncols);
        let mut w = v.to_vec();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if w[p].is_zero() {
                continue;
            }
            let factor = w[p].clone();
            for c in p..self.ncols {
                w[c] = w[c].sub(&factor.mul(&row[c]));
            }
        }
        w
    }

    pub fn contains(&self, v: &[FieldElement]) -> bool {
        self.residual(v).iter().all(|e| e.is_zero())
    }

    /// Inserts a vector; returns `true` if it enlarged the span.
    pub fn insert(&mut self, v: &[FieldElement]) -> bool {
        let w = self.residual(v);
        let Some(p) = w.iter().position(|e| !e.is_zero()) else {
            return false;
        };
        let inv = w[p].inv().expect("leading residual entry is nonzero");
        let norm: Vec<FieldElement> = w.iter().map(|e| e.mul(&inv)).collect();
        // back-substitute into existing rows to keep reduced form
        for row in &mut self.rows {
            if row[p].is_zero() {
                continue;
            }
            let factor = row[p].clone();
            for c in p..self.ncols {
                row[c] = row[c].sub(&factor.mul(&norm[c]));
            }
        }
        let at = self.pivots.partition_point(|&q| q < p);
        self.pivots.insert(at, p);
        self.rows.insert(at, norm);
        true
    }

    /// Inserts every column of `m`; returns the number of new dimensions.
    pub fn insert_cols(&mut self, m: &Matrix) -> usize {
        let mut added = 0;
        for c in 0..m.ncols() {
            if self.insert(&m.col(c)) {
                added += 1;
            }
        }
        added
    }

    /// Inserts every row of `m`; returns the number of new dimensions.
    pub fn insert_rows(&mut self, m: &Matrix) -> usize {
        let mut added = 0;
        for r in 0..m.nrows() {
            if self.insert(&m.row(r)) {
                added += 1;
            }
        }
        added
    }

    /// The current basis as the rows of a matrix.
    pub fn basis_matrix(&self) -> Matrix {
        Matrix::from_rows(&self.handle, self.rows.clone())
            .expect("rows all have the tracked width")
            .clone()
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::BaseField;
    use proptest::prelude::*;

    fn qh() -> FieldHandle {
        FieldHandle::base(BaseField::Rationals).unwrap()
    }

    fn small_matrix(rows: usize, cols: usize) -> impl Strategy<Value = Matrix> {
        proptest::collection::vec(-5i64..=5, rows * cols).prop_map(move |v| {
            let h = qh();
            let mut m = Matrix::zero(&h, rows, cols);
            for r in 0..rows {
                for c in 0..cols {
                    m.set(r, c, h.from_i64(v[r * cols + c]));
                }
            }
            m
        })
    }

    proptest! {
        #[test]
        fn rank_transpose_invariant(m in small_matrix(4, 3)) {
            prop_assert_eq!(m.rank(), m.transpose().rank());
        }

        #[test]
        fn kernel_is_killed(m in small_matrix(3, 5)) {
            let k = m.kernel_basis();
            prop_assert_eq!(k.ncols() + m.rank(), m.ncols());
            let prod = m.mul(&k).unwrap();
            prop_assert!(prod.is_zero());
        }

        #[test]
        fn product_rank_bound(a in small_matrix(3, 4), b in small_matrix(4, 3)) {
            let p = a.mul(&b).unwrap();
            prop_assert!(p.rank() <= a.rank().min(b.rank()));
        }

        #[test]
        fn kronecker_mixed_product(
            a in small_matrix(2, 3), b in small_matrix(2, 2),
            c in small_matrix(3, 2), d in small_matrix(2, 3),
        ) {
            // (A⊗B)(C⊗D) = AC ⊗ BD
            let lhs = Matrix::kronecker(&a, &b).mul(&Matrix::kronecker(&c, &d)).unwrap();
            let rhs = Matrix::kronecker(&a.mul(&c).unwrap(), &b.mul(&d).unwrap());
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn determinant_multiplicative(a in small_matrix(3, 3), b in small_matrix(3, 3)) {
            let lhs = a.mul(&b).unwrap().determinant().unwrap();
            let rhs = a.determinant().unwrap().mul(&b.determinant().unwrap());
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn solve_roundtrip(a in small_matrix(3, 4), x in small_matrix(4, 2)) {
            let b = a.mul(&x).unwrap();
            match a.solve(&b).unwrap() {
                Solution::Inconsistent => prop_assert!(false, "consistent by construction"),
                Solution::Solved { particular, .. } => {
                    prop_assert_eq!(a.mul(&particular).unwrap(), b);
                }
            }
        }

        #[test]
        fn rowspace_matches_rank(m in small_matrix(4, 4)) {
            let mut rs = RowSpace::new(&qh(), 4);
            rs.insert_rows(&m);
            prop_assert_eq!(rs.dim(), m.rank());
            for r in 0..4 {
                prop_assert!(rs.contains(&m.row(r)));
            }
        }
    }

    #[test]
    fn inverse_roundtrip() {
        let h = qh();
        let m = Matrix::from_ints(&h, &[vec![2, 1], vec![1, 1]]);
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv).unwrap(), Matrix::identity(&h, 2));
        let sing = Matrix::from_ints(&h, &[vec![1, 2], vec![2, 4]]);
        assert!(sing.inverse().is_err());
    }

    #[test]
    fn empty_shapes() {
        let h = qh();
        let a = Matrix::zero(&h, 0, 3);
        let b = Matrix::zero(&h, 3, 2);
        let p = a.mul(&b).unwrap();
        assert_eq!((p.nrows(), p.ncols()), (0, 2));
        assert_eq!(a.rank(), 0);
        assert_eq!(a.kernel_basis().ncols(), 3);
        let k = Matrix::kronecker(&a, &b);
        assert_eq!((k.nrows(), k.ncols()), (0, 6));
    }

    #[test]
    fn extension_field_rref() {
        use crate::scalar::BaseField;
        let q = BaseField::Rationals;
        let f = FieldHandle::extension(
            q,
            &[q.from_i64(1), q.from_i64(0), q.from_i64(1)],
        )
        .unwrap();
        let i = f.gen();
        // [[i, 1], [1, -i]] has rank 1 since row2 = -i * row1
        let m = Matrix::from_rows(
            &f,
            vec![
                vec![i.clone(), f.one()],
                vec![f.one(), i.neg()],
            ],
        )
        .unwrap();
        assert_eq!(m.rank(), 1);
    }
}
