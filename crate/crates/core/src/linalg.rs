//! Dense exact linear algebra over the rationals.
//!
//! Matrices here are small (tens to a few hundred rows) but entries must be
//! exact, so everything is plain Gaussian elimination over `BigRational`.

use std::fmt;

use num_traits::{Signed, Zero};

use crate::rational::Rational;

#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(crate::rational::format).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

/// Result of symmetric Gaussian elimination with diagonal pivoting.
#[derive(Clone, Debug)]
pub struct SymmetricElimination {
    /// `(index, pivot)` in elimination order. The indices select a
    /// nonsingular principal submatrix.
    pub pivots: Vec<(usize, Rational)>,
    /// True when elimination stalled on a zero diagonal with a nonzero
    /// off-diagonal entry left over. That cannot happen for a positive
    /// semidefinite matrix.
    pub stalled: bool,
}

impl SymmetricElimination {
    pub fn is_positive_semidefinite(&self) -> bool {
        !self.stalled && self.pivots.iter().all(|(_, p)| p.is_positive())
    }

    pub fn pivot_indices(&self) -> Vec<usize> {
        self.pivots.iter().map(|(i, _)| *i).collect()
    }
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, crate::rational::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged matrix");
        Matrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn from_i64_rows(rows: &[Vec<i64>]) -> Self {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| crate::rational::int(x)).collect())
                .collect(),
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rational) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn is_symmetric(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "matrix product shape mismatch");
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        let idx = i * out.cols + j;
                        out.data[idx] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Vec<Rational> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .map(|(a, b)| a * b)
                    .sum()
            })
            .collect()
    }

    pub fn add_assign(&mut self, other: &Matrix) {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            if !b.is_zero() {
                *a += b;
            }
        }
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Matrix {
        let mut m = Matrix::zeros(rows.len(), cols.len());
        for (a, &i) in rows.iter().enumerate() {
            for (b, &j) in cols.iter().enumerate() {
                m.set(a, b, self.get(i, j).clone());
            }
        }
        m
    }

    /// Stacks matrices with equal column counts on top of each other.
    pub fn vstack<'a>(cols: usize, parts: impl IntoIterator<Item = &'a Matrix>) -> Matrix {
        let mut data = Vec::new();
        let mut rows = 0;
        for p in parts {
            assert_eq!(p.cols, cols);
            rows += p.rows;
            data.extend(p.data.iter().cloned());
        }
        Matrix { rows, cols, data }
    }

    /// Reduced row echelon form in place; returns the pivot columns.
    pub fn rref_in_place(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !self.get(i, c).is_zero()) else {
                continue;
            };
            if p != r {
                for j in 0..self.cols {
                    self.data.swap(p * self.cols + j, r * self.cols + j);
                }
            }
            let inv = self.get(r, c).recip();
            for j in c..self.cols {
                let v = self.get(r, j) * &inv;
                self.set(r, j, v);
            }
            for i in 0..self.rows {
                if i == r {
                    continue;
                }
                let f = self.get(i, c).clone();
                if f.is_zero() {
                    continue;
                }
                for j in c..self.cols {
                    let rv = self.get(r, j);
                    if rv.is_zero() {
                        continue;
                    }
                    let v = self.get(i, j) - &f * rv;
                    self.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.clone().rref_in_place().len()
    }

    /// Basis of the right kernel `{x : self * x = 0}`.
    pub fn kernel(&self) -> Vec<Vec<Rational>> {
        let mut m = self.clone();
        let pivots = m.rref_in_place();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![Rational::zero(); self.cols];
                v[f] = crate::rational::one();
                for (r, &p) in pivots.iter().enumerate() {
                    v[p] = -m.get(r, f).clone();
                }
                v
            })
            .collect()
    }

    pub fn determinant(&self) -> Rational {
        assert_eq!(self.rows, self.cols, "determinant of non-square matrix");
        let n = self.rows;
        let mut m = self.clone();
        let mut det = crate::rational::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !m.get(i, c).is_zero()) else {
                return Rational::zero();
            };
            if p != c {
                for j in 0..n {
                    m.data.swap(p * n + j, c * n + j);
                }
                det = -det;
            }
            let piv = m.get(c, c).clone();
            det *= &piv;
            for i in c + 1..n {
                let f = m.get(i, c) / &piv;
                if f.is_zero() {
                    continue;
                }
                for j in c..n {
                    let v = m.get(i, j) - &f * m.get(c, j);
                    m.set(i, j, v);
                }
            }
        }
        det
    }

    /// Solves `self * x = b`. Returns `None` when the system is inconsistent
    /// or the solution is not unique.
    pub fn solve_unique(&self, b: &[Rational]) -> Option<Vec<Rational>> {
        assert_eq!(b.len(), self.rows);
        let mut aug = Matrix::zeros(self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, self.cols, b[i].clone());
        }
        let pivots = aug.rref_in_place();
        if pivots.contains(&self.cols) || pivots.len() != self.cols {
            return None;
        }
        Some((0..self.cols).map(|r| aug.get(r, self.cols).clone()).collect())
    }

    /// Solves `self * X = rhs` for square nonsingular `self`.
    pub fn solve_matrix(&self, rhs: &Matrix) -> Option<Matrix> {
        assert_eq!(self.rows, self.cols);
        assert_eq!(self.rows, rhs.rows);
        let n = self.rows;
        let mut aug = Matrix::zeros(n, n + rhs.cols);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j).clone());
            }
            for j in 0..rhs.cols {
                aug.set(i, n + j, rhs.get(i, j).clone());
            }
        }
        let pivots = aug.rref_in_place();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        let cols: Vec<usize> = (n..n + rhs.cols).collect();
        let rows: Vec<usize> = (0..n).collect();
        Some(aug.submatrix(&rows, &cols))
    }

    /// Symmetric elimination choosing the first nonzero diagonal entry as
    /// pivot at each step.
    pub fn symmetric_elimination(&self) -> SymmetricElimination {
        assert!(self.is_symmetric(), "symmetric elimination needs a symmetric matrix");
        let n = self.rows;
        let mut w = self.clone();
        let mut active: Vec<usize> = (0..n).collect();
        let mut pivots = Vec::new();
        while let Some(pos) = active.iter().position(|&i| !w.get(i, i).is_zero()) {
            let i = active.remove(pos);
            let p = w.get(i, i).clone();
            for &j in &active {
                let f = w.get(j, i) / &p;
                if f.is_zero() {
                    continue;
                }
                for &k in &active {
                    let v = w.get(i, k);
                    if v.is_zero() {
                        continue;
                    }
                    let nv = w.get(j, k) - &f * v;
                    w.set(j, k, nv);
                }
            }
            pivots.push((i, p));
        }
        let stalled = active
            .iter()
            .any(|&j| active.iter().any(|&k| !w.get(j, k).is_zero()));
        SymmetricElimination { pivots, stalled }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    #[test]
    fn rank_and_kernel() {
        let m = Matrix::from_i64_rows(&[vec![1, 2, 3], vec![2, 4, 6], vec![1, 0, 1]]);
        assert_eq!(m.rank(), 2);
        let k = m.kernel();
        assert_eq!(k.len(), 1);
        assert!(m.mul_vec(&k[0]).iter().all(Zero::is_zero));
    }

    #[test]
    fn determinant_matches_cofactor() {
        let m = Matrix::from_i64_rows(&[vec![2, -1, 0], vec![-1, 2, -1], vec![0, -1, 2]]);
        assert_eq!(m.determinant(), int(4));
        let a = Matrix::from_i64_rows(&[vec![2, -2], vec![-2, 2]]);
        assert_eq!(a.determinant(), int(0));
    }

    #[test]
    fn solve_unique_overdetermined() {
        let m = Matrix::from_i64_rows(&[vec![2, -2], vec![-2, 2], vec![1, 0]]);
        let x = m.solve_unique(&[int(0), int(0), int(3)]).unwrap();
        assert_eq!(x, vec![int(3), int(3)]);
        assert!(m.solve_unique(&[int(1), int(0), int(3)]).is_none());
    }

    #[test]
    fn symmetric_elimination_detects_indefinite() {
        let psd = Matrix::from_i64_rows(&[vec![1, 1], vec![1, 1]]);
        let e = psd.symmetric_elimination();
        assert!(e.is_positive_semidefinite());
        assert_eq!(e.pivots.len(), 1);
        let hyperbolic = Matrix::from_i64_rows(&[vec![0, 1], vec![1, 0]]);
        let e = hyperbolic.symmetric_elimination();
        assert!(e.stalled);
        assert!(!e.is_positive_semidefinite());
        let neg = Matrix::from_i64_rows(&[vec![-1]]);
        assert!(!neg.symmetric_elimination().is_positive_semidefinite());
    }

    #[test]
    fn solve_matrix_inverts() {
        let a = Matrix::from_i64_rows(&[vec![2, 1], vec![1, 1]]);
        let x = a.solve_matrix(&Matrix::identity(2)).unwrap();
        assert_eq!(a.mul(&x), Matrix::identity(2));
    }
}
