use std::fmt;

use crate::error::{Error, Result};
use crate::exact::scalar::{Field, Scalar};

type Row = Vec<(usize, Scalar)>;

/// An exact matrix, read as a linear map from a `cols`-dimensional space to a
/// `rows`-dimensional one. Rows are stored sparsely: sorted by column, with
/// no explicit zeros, so equal matrices have equal representations.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    field: Field,
    zero: Scalar,
    data: Vec<Row>,
}

/// `x + c·y` on sparse rows.
fn axpy(x: &Row, c: &Scalar, y: &Row) -> Row {
    let mut out = Vec::with_capacity(x.len() + y.len());
    let (mut i, mut j) = (0, 0);
    while i < x.len() || j < y.len() {
        let take_x = j == y.len() || (i < x.len() && x[i].0 < y[j].0);
        let take_y = i == x.len() || (j < y.len() && y[j].0 < x[i].0);
        if take_x {
            out.push(x[i].clone());
            i += 1;
        } else if take_y {
            out.push((y[j].0, c.mul(&y[j].1)));
            j += 1;
        } else {
            let v = x[i].1.add(&c.mul(&y[j].1));
            if !v.is_zero() {
                out.push((x[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

fn lookup(row: &Row, c: usize) -> Option<&Scalar> {
    row.binary_search_by_key(&c, |e| e.0).ok().map(|k| &row[k].1)
}

impl Matrix {
    /// From row-major dense entries.
    pub fn new(rows: usize, cols: usize, field: Field, entries: Vec<Scalar>) -> Result<Matrix> {
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!("{} entries for a {rows}x{cols} map", entries.len())));
        }
        if let Some(bad) = entries.iter().find(|s| s.field() != field) {
            return Err(Error::FieldMismatch(field.to_string(), bad.field().to_string()));
        }
        let mut m = Matrix::zeros(rows, cols, field);
        for (k, v) in entries.into_iter().enumerate() {
            if !v.is_zero() {
                m.data[k / cols].push((k % cols, v));
            }
        }
        Ok(m)
    }

    pub fn zeros(rows: usize, cols: usize, field: Field) -> Matrix {
        Matrix { rows, cols, field, zero: field.zero(), data: vec![Vec::new(); rows] }
    }

    pub fn identity(n: usize, field: Field) -> Matrix {
        let mut m = Matrix::zeros(n, n, field);
        for (i, row) in m.data.iter_mut().enumerate() {
            row.push((i, field.one()));
        }
        m
    }

    /// Builds a map from integer rows; convenient for tests and builders.
    pub fn from_int_rows(field: Field, rows: &[&[i64]]) -> Matrix {
        let cols = rows.first().map_or(0, |r| r.len());
        let mut m = Matrix::zeros(rows.len(), cols, field);
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.len(), cols, "ragged rows");
            m.data[i] = r.iter().enumerate().filter(|(_, &x)| x != 0).map(|(j, &x)| (j, field.from_i64(x))).collect();
        }
        m
    }

    /// The 0/1 matrix of a function `table[j] = i` (column j has a 1 in row i).
    pub fn from_function(rows: usize, table: &[usize], field: Field) -> Matrix {
        let mut m = Matrix::zeros(rows, table.len(), field);
        for (j, &i) in table.iter().enumerate() {
            m.data[i].push((j, field.one()));
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn field(&self) -> Field {
        self.field
    }

    /// Number of nonzero entries.
    pub fn nnz(&self) -> usize {
        self.data.iter().map(Vec::len).sum()
    }

    pub fn get(&self, r: usize, c: usize) -> &Scalar {
        assert!(r < self.rows && c < self.cols, "entry ({r}, {c}) outside {}x{}", self.rows, self.cols);
        lookup(&self.data[r], c).unwrap_or(&self.zero)
    }

    pub fn set(&mut self, r: usize, c: usize, value: Scalar) {
        debug_assert_eq!(value.field(), self.field);
        assert!(r < self.rows && c < self.cols, "entry ({r}, {c}) outside {}x{}", self.rows, self.cols);
        let row = &mut self.data[r];
        match (row.binary_search_by_key(&c, |e| e.0), value.is_zero()) {
            (Ok(k), true) => {
                row.remove(k);
            }
            (Ok(k), false) => row[k].1 = value,
            (Err(_), true) => {}
            (Err(k), false) => row.insert(k, (c, value)),
        }
    }

    /// The nonzero entries of row `r`, by increasing column.
    pub fn row_entries(&self, r: usize) -> &[(usize, Scalar)] {
        &self.data[r]
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Vec::is_empty)
    }

    pub fn column(&self, c: usize) -> Vec<Scalar> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    fn same_field(&self, other: &Matrix) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch(self.field.to_string(), other.field.to_string()));
        }
        Ok(())
    }

    /// `g.compose(f)` is the product `g·f`: apply `f`, then `g`.
    pub fn compose(&self, f: &Matrix) -> Result<Matrix> {
        self.same_field(f)?;
        if f.rows != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "composing {}x{} after {}x{}",
                self.rows, self.cols, f.rows, f.cols
            )));
        }
        let mut out = Matrix::zeros(self.rows, f.cols, self.field);
        let mut acc: Vec<Option<Scalar>> = vec![None; f.cols];
        let mut touched = Vec::new();
        for (i, row) in self.data.iter().enumerate() {
            for (k, a) in row {
                for (j, b) in &f.data[*k] {
                    let term = a.mul(b);
                    match &mut acc[*j] {
                        Some(v) => *v = v.add(&term),
                        slot => {
                            *slot = Some(term);
                            touched.push(*j);
                        }
                    }
                }
            }
            touched.sort_unstable();
            for j in touched.drain(..) {
                let v = acc[j].take().expect("touched");
                if !v.is_zero() {
                    out.data[i].push((j, v));
                }
            }
        }
        Ok(out)
    }

    /// Kronecker product; basis pair `(i, j)` sits at flat index `i * right_dim + j`.
    pub fn kronecker(&self, g: &Matrix) -> Result<Matrix> {
        self.same_field(g)?;
        let mut out = Matrix::zeros(self.rows * g.rows, self.cols * g.cols, self.field);
        for (i, x) in self.data.iter().enumerate() {
            for (k, y) in g.data.iter().enumerate() {
                let row = &mut out.data[i * g.rows + k];
                for (j, a) in x {
                    for (l, b) in y {
                        row.push((j * g.cols + l, a.mul(b)));
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Matrix) -> Result<Matrix> {
        self.same_field(other)?;
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch("subtracting maps of different shape".into()));
        }
        let minus = self.field.from_i64(-1);
        let mut out = Matrix::zeros(self.rows, self.cols, self.field);
        out.data = self.data.iter().zip(&other.data).map(|(a, b)| axpy(a, &minus, b)).collect();
        Ok(out)
    }

    pub fn transpose(&self) -> Matrix {
        let mut out = Matrix::zeros(self.cols, self.rows, self.field);
        for (r, row) in self.data.iter().enumerate() {
            for (c, v) in row {
                out.data[*c].push((r, v.clone()));
            }
        }
        out
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        m.row_reduce().len()
    }

    /// In-place reduced row echelon form; returns the pivot columns.
    fn row_reduce(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..self.cols {
            if row == self.rows {
                break;
            }
            let Some(p) = (row..self.rows).find(|&r| self.data[r].first().is_some_and(|e| e.0 == col)) else {
                continue;
            };
            self.data.swap(p, row);
            let inv = self.data[row][0].1.inv().expect("nonzero pivot");
            for e in &mut self.data[row] {
                e.1 = e.1.mul(&inv);
            }
            let pivot_row = std::mem::take(&mut self.data[row]);
            for r in 0..self.rows {
                if r == row {
                    continue;
                }
                if let Some(factor) = lookup(&self.data[r], col) {
                    let factor = factor.neg();
                    self.data[r] = axpy(&self.data[r], &factor, &pivot_row);
                }
            }
            self.data[row] = pivot_row;
            pivots.push(col);
            row += 1;
        }
        pivots
    }

    /// A basis of the column space in reduced column echelon form: the
    /// transpose of the reduced row echelon form of the transpose, with zero
    /// columns dropped. Two maps have the same image iff this agrees.
    pub fn column_echelon(&self) -> Matrix {
        let mut t = self.transpose();
        let rank = t.row_reduce().len();
        t.data.truncate(rank);
        t.rows = rank;
        t.transpose()
    }

    /// Columns spanning `ker self`, in reduced column echelon form.
    pub fn kernel_basis(&self) -> Matrix {
        let mut r = self.clone();
        let pivots = r.row_reduce();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let free: Vec<usize> = (0..self.cols).filter(|&c| !is_pivot[c]).collect();
        let mut slot = vec![usize::MAX; self.cols];
        for (k, &fc) in free.iter().enumerate() {
            slot[fc] = k;
        }
        let mut basis = Matrix::zeros(self.cols, free.len(), self.field);
        for (k, &fc) in free.iter().enumerate() {
            basis.data[fc].push((k, self.field.one()));
        }
        for (row, &pc) in pivots.iter().enumerate() {
            basis.data[pc] =
                r.data[row].iter().filter(|(c, _)| slot[*c] != usize::MAX).map(|(c, v)| (slot[*c], v.neg())).collect();
        }
        if free.is_empty() {
            return basis;
        }
        basis.column_echelon()
    }

    /// The unique `h` with `mono · h = g`, for `mono` of full column rank.
    pub fn solve_factor(mono: &Matrix, g: &Matrix) -> Result<Matrix> {
        mono.same_field(g)?;
        if mono.rows != g.rows {
            return Err(Error::DimensionMismatch(format!(
                "factoring a map with {} rows through a mono with {} rows",
                g.rows, mono.rows
            )));
        }
        let n = mono.cols;
        let mut aug = Matrix::zeros(mono.rows, n + g.cols, mono.field);
        for (r, row) in aug.data.iter_mut().enumerate() {
            row.extend(mono.data[r].iter().cloned());
            row.extend(g.data[r].iter().map(|(c, v)| (n + c, v.clone())));
        }
        let pivots = aug.row_reduce();
        let mono_rank = pivots.iter().filter(|&&c| c < n).count();
        if mono_rank < n {
            return Err(Error::NotMonic(format!("rank {mono_rank} < {n} columns")));
        }
        if pivots.iter().any(|&c| c >= n) {
            return Err(Error::NoFactorization("target not contained in the image".into()));
        }
        let mut h = Matrix::zeros(n, g.cols, mono.field);
        for (r, row) in h.data.iter_mut().enumerate() {
            *row = aug.data[r].iter().filter(|(c, _)| *c >= n).map(|(c, v)| (c - n, v.clone())).collect();
        }
        Ok(h)
    }

    /// Some `l` with `l · self = id`, for `self` of full column rank: the
    /// inverse of a maximal invertible block of rows, zero elsewhere.
    pub fn left_inverse(&self) -> Result<Matrix> {
        let mut t = self.transpose();
        let rows = t.row_reduce();
        if rows.len() < self.cols {
            return Err(Error::NotMonic(format!("rank {} < {} columns", rows.len(), self.cols)));
        }
        let mut block = Matrix::zeros(self.cols, self.cols, self.field);
        for (k, &r) in rows.iter().enumerate() {
            block.data[k] = self.data[r].clone();
        }
        let inv = block.two_sided_inverse()?;
        let mut select = Matrix::zeros(self.cols, self.rows, self.field);
        for (k, &r) in rows.iter().enumerate() {
            select.data[k].push((r, self.field.one()));
        }
        inv.compose(&select)
    }

    pub fn two_sided_inverse(&self) -> Result<Matrix> {
        if self.rows != self.cols {
            return Err(Error::NotInvertible(format!("{}x{} is not square", self.rows, self.cols)));
        }
        let id = Matrix::identity(self.rows, self.field);
        match Matrix::solve_factor(self, &id) {
            Ok(inv) => Ok(inv),
            Err(Error::NotMonic(_)) | Err(Error::NoFactorization(_)) => {
                Err(Error::NotInvertible("singular matrix".into()))
            }
            Err(e) => Err(e),
        }
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for r in 0..self.rows {
            if r > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for c in 0..self.cols {
                if c > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.get(r, c))?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const Q: Field = Field::Rational;

    fn m(rows: &[&[i64]]) -> Matrix {
        Matrix::from_int_rows(Q, rows)
    }

    #[test]
    fn compose_examples() {
        let swap = m(&[&[0, 1], &[1, 0]]);
        let f = m(&[&[1, 2], &[3, 4]]);
        assert_eq!(Matrix::identity(2, Q).compose(&f).unwrap(), f);
        assert_eq!(swap.compose(&swap).unwrap(), Matrix::identity(2, Q));
        assert_eq!(m(&[&[1, 1]]).compose(&m(&[&[1], &[1]])).unwrap(), m(&[&[2]]));
        assert!(matches!(f.compose(&m(&[&[1, 1]])), Err(Error::DimensionMismatch(_))));
        let f5 = Matrix::identity(2, Field::Prime(5));
        assert!(matches!(f.compose(&f5), Err(Error::FieldMismatch(..))));
    }

    #[test]
    fn kronecker_examples() {
        let i2 = Matrix::identity(2, Q);
        assert_eq!(i2.kronecker(&Matrix::identity(3, Q)).unwrap(), Matrix::identity(6, Q));
        assert_eq!(m(&[&[2]]).kronecker(&m(&[&[3]])).unwrap(), m(&[&[6]]));
        // swap ⊗ I2: basis (i, j) -> (1 - i, j), flat index 2i + j.
        let k = m(&[&[0, 1], &[1, 0]]).kronecker(&i2).unwrap();
        for col in 0..4 {
            let (i, j) = (col / 2, col % 2);
            let target = (1 - i) * 2 + j;
            for row in 0..4 {
                assert_eq!(k.get(row, col).is_one(), row == target);
                assert!(k.get(row, col).is_one() || k.get(row, col).is_zero());
            }
        }
    }

    #[test]
    fn kernel_examples() {
        let k = Matrix::identity(2, Q).kernel_basis();
        assert_eq!((k.rows(), k.cols()), (2, 0));
        assert_eq!(Matrix::zeros(2, 2, Q).kernel_basis(), Matrix::identity(2, Q));
        let k = m(&[&[1, 1], &[1, 1]]).kernel_basis();
        assert_eq!(k, m(&[&[1], &[-1]]));
        assert!(m(&[&[1, 1], &[1, 1]]).compose(&k).unwrap().is_zero());
    }

    #[test]
    fn solve_factor_examples() {
        let g = m(&[&[1, 2], &[3, 4]]);
        assert_eq!(Matrix::solve_factor(&Matrix::identity(2, Q), &g).unwrap(), g);
        assert_eq!(Matrix::solve_factor(&m(&[&[1], &[1]]), &m(&[&[2], &[2]])).unwrap(), m(&[&[2]]));
        assert!(matches!(
            Matrix::solve_factor(&m(&[&[1], &[0]]), &m(&[&[0], &[1]])),
            Err(Error::NoFactorization(_))
        ));
        assert!(matches!(
            Matrix::solve_factor(&m(&[&[1, 1], &[1, 1]]), &m(&[&[1], &[1]])),
            Err(Error::NotMonic(_))
        ));
    }

    #[test]
    fn left_inverse_examples() {
        let m3 = m(&[&[1, 0], &[2, 1], &[0, 3]]);
        let l = m3.left_inverse().unwrap();
        assert_eq!(l.compose(&m3).unwrap(), Matrix::identity(2, Q));
        assert!(m(&[&[1, 2], &[2, 4]]).left_inverse().is_err());
    }

    #[test]
    fn inverse_examples() {
        let i3 = Matrix::identity(3, Q);
        assert_eq!(i3.two_sided_inverse().unwrap(), i3);
        let swap = m(&[&[0, 1], &[1, 0]]);
        assert_eq!(swap.two_sided_inverse().unwrap(), swap);
        let shear = m(&[&[1, 1], &[0, 1]]);
        let inv = shear.two_sided_inverse().unwrap();
        assert_eq!(inv, m(&[&[1, -1], &[0, 1]]));
        assert_eq!(shear.compose(&inv).unwrap(), Matrix::identity(2, Q));
        assert_eq!(inv.compose(&shear).unwrap(), Matrix::identity(2, Q));
        assert!(matches!(m(&[&[1, 1], &[1, 1]]).two_sided_inverse(), Err(Error::NotInvertible(_))));
    }
}
