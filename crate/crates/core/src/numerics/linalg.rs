//! Dense matrices with fraction-free elimination.

use std::fmt;

use super::Scalar;

#[derive(Clone, PartialEq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Scalar> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![T::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, T::one());
        }
        m
    }

    /// Panics when the rows have different lengths.
    pub fn from_rows(rows: Vec<Vec<T>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged matrix");
        Matrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    /// Sub-matrix on the given rows and columns.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Self {
        Matrix::from_rows(
            rows.iter()
                .map(|&i| cols.iter().map(|&j| self.get(i, j).clone()).collect())
                .collect(),
        )
    }

    pub fn mul_vec(&self, v: &[T]) -> Vec<T> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(T::zero(), |acc, (a, b)| acc.add(&a.mul(b)))
            })
            .collect()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    /// Bareiss fraction-free row echelon form. Returns the pivot columns and
    /// the number of row swaps. Every division is exact in an integral
    /// domain, so this also works over polynomial rings.
    fn bareiss(&mut self) -> (Vec<usize>, usize) {
        let mut pivots = Vec::new();
        let mut swaps = 0;
        let mut prev = T::one();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !self.get(i, c).is_zero()) else {
                continue;
            };
            if p != r {
                self.swap_rows(p, r);
                swaps += 1;
            }
            let piv = self.get(r, c).clone();
            for i in r + 1..self.rows {
                let lead = self.get(i, c).clone();
                for j in c..self.cols {
                    let v = self
                        .get(i, j)
                        .mul(&piv)
                        .sub(&lead.mul(self.get(r, j)))
                        .checked_div(&prev)
                        .expect("Bareiss division is exact");
                    self.set(i, j, v);
                }
                // Columns left of c are already zero below the pivot row.
            }
            prev = piv;
            pivots.push(c);
            r += 1;
        }
        (pivots, swaps)
    }

    /// Determinant by Bareiss elimination. Panics for non-square input.
    pub fn determinant(&self) -> T {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        if self.rows == 0 {
            return T::one();
        }
        let mut m = self.clone();
        let (pivots, swaps) = m.bareiss();
        if pivots.len() < self.rows {
            return T::zero();
        }
        let d = m.get(self.rows - 1, self.cols - 1).clone();
        if swaps % 2 == 1 {
            d.neg()
        } else {
            d
        }
    }

    pub fn rank(&self) -> usize {
        self.clone().bareiss().0.len()
    }
}

/// Basis of `{v : M v = 0}` over a field. Elimination is fraction-free;
/// back-substitution divides by pivots. Each basis vector has a single free
/// coordinate set to one. An empty result means only the trivial solution.
pub fn exact_nullspace<T: Scalar>(m: &Matrix<T>) -> Vec<Vec<T>> {
    let mut e = m.clone();
    let (pivots, _) = e.bareiss();
    let free: Vec<usize> = (0..m.cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![T::zero(); m.cols];
            v[f] = T::one();
            for (r, &pc) in pivots.iter().enumerate().rev() {
                let mut acc = T::zero();
                for (j, vj) in v.iter().enumerate().skip(pc + 1) {
                    acc = acc.add(&e.get(r, j).mul(vj));
                }
                v[pc] = acc
                    .neg()
                    .checked_div(e.get(r, pc))
                    .expect("pivot is nonzero");
            }
            v
        })
        .collect()
}

impl<T: Scalar + fmt::Debug> fmt::Debug for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{}", self.rows, self.cols)?;
        for i in 0..self.rows {
            writeln!(f, "  {:?}", self.row(i))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::rational::{int, rat};
    use crate::numerics::{Rational, UniPoly, Var};
    use proptest::prelude::*;

    fn m(rows: &[&[i64]]) -> Matrix<Rational> {
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&v| int(v)).collect()).collect())
    }

    #[test]
    fn identity_has_trivial_nullspace() {
        assert!(exact_nullspace(&Matrix::<Rational>::identity(3)).is_empty());
    }

    #[test]
    fn zero_matrix_nullspace_is_everything() {
        let z = Matrix::<Rational>::zeros(2, 2);
        let basis = exact_nullspace(&z);
        assert_eq!(basis, vec![vec![int(1), int(0)], vec![int(0), int(1)]]);
    }

    #[test]
    fn rank_deficient_rectangular() {
        let a = m(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1], &[0, 1, 1]]);
        let basis = exact_nullspace(&a);
        assert_eq!(basis.len(), 1);
        assert!(a.mul_vec(&basis[0]).iter().all(|v| v == &int(0)));
        assert_eq!(a.rank(), 2);
    }

    #[test]
    fn determinants() {
        assert_eq!(m(&[&[2, 1], &[7, 4]]).determinant(), int(1));
        assert_eq!(m(&[&[0, 1], &[1, 0]]).determinant(), int(-1));
        assert_eq!(m(&[&[1, 2], &[2, 4]]).determinant(), int(0));
        let h = Matrix::from_rows(
            (1..4)
                .map(|i| (1..4).map(|j| rat(1, i + j - 1)).collect())
                .collect(),
        );
        assert_eq!(h.determinant(), rat(1, 2160));
    }

    #[test]
    fn determinant_over_polynomials() {
        // det [[E, 1], [1, E]] = E² - 1
        let e = UniPoly::<Rational>::identity(Var::E);
        let one = UniPoly::constant(Var::E, int(1));
        let a = Matrix::from_rows(vec![vec![e.clone(), one.clone()], vec![one, e]]);
        assert_eq!(a.determinant(), UniPoly::new(Var::E, vec![int(-1), int(0), int(1)]));
    }

    proptest! {
        #[test]
        fn nullspace_vectors_are_annihilated(
            entries in prop::collection::vec(-3i64..4, 12),
            rows in 1usize..5,
        ) {
            let cols = 12 / 4 + 1;
            let data: Vec<Vec<Rational>> = (0..rows)
                .map(|i| (0..cols).map(|j| int(entries[(i * cols + j) % entries.len()])).collect())
                .collect();
            let a = Matrix::from_rows(data);
            let basis = exact_nullspace(&a);
            prop_assert_eq!(basis.len(), cols - a.rank());
            for v in &basis {
                prop_assert!(a.mul_vec(v).iter().all(|x| x == &int(0)));
            }
        }
    }
}
