//! Dense polynomials in (x, E).

use std::fmt;

use super::{Scalar, UniPoly, Var};

/// `grid[i][j]` multiplies `x^i E^j`. Rows and columns are trimmed so the
/// zero polynomial has an empty grid and every stored row ends in a nonzero
/// entry.
#[derive(Clone, PartialEq)]
pub struct BiPoly<T> {
    grid: Vec<Vec<T>>,
}

impl<T: Scalar> BiPoly<T> {
    pub fn new(mut grid: Vec<Vec<T>>) -> Self {
        for row in grid.iter_mut() {
            while row.last().is_some_and(|c| c.is_zero()) {
                row.pop();
            }
        }
        while grid.last().is_some_and(|r| r.is_empty()) {
            grid.pop();
        }
        BiPoly { grid }
    }

    pub fn zero() -> Self {
        BiPoly { grid: Vec::new() }
    }

    pub fn constant(c: T) -> Self {
        Self::new(vec![vec![c]])
    }

    /// `c · x^i · E^j`.
    pub fn monomial(c: T, i: usize, j: usize) -> Self {
        let mut grid = vec![Vec::new(); i + 1];
        grid[i] = vec![T::zero(); j + 1];
        grid[i][j] = c;
        Self::new(grid)
    }

    /// Embeds a polynomial in x (E-degree 0).
    pub fn from_x(p: &UniPoly<T>) -> Self {
        Self::new(p.coeffs().iter().map(|c| vec![c.clone()]).collect())
    }

    /// Builds from the E-polynomials multiplying each power of x.
    pub fn from_x_rows(rows: Vec<UniPoly<T>>) -> Self {
        Self::new(rows.into_iter().map(UniPoly::into_coeffs).collect())
    }

    pub fn get(&self, i: usize, j: usize) -> T {
        self.grid
            .get(i)
            .and_then(|r| r.get(j))
            .cloned()
            .unwrap_or_else(T::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.grid.is_empty()
    }

    pub fn deg_x(&self) -> Option<usize> {
        self.grid.len().checked_sub(1)
    }

    pub fn deg_e(&self) -> Option<usize> {
        self.grid.iter().filter_map(|r| r.len().checked_sub(1)).max()
    }

    /// Coefficient of `x^i` as a polynomial in E.
    pub fn x_row(&self, i: usize) -> UniPoly<T> {
        UniPoly::new(Var::E, self.grid.get(i).cloned().unwrap_or_default())
    }

    pub fn rows(&self) -> &[Vec<T>] {
        &self.grid
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.grid.len().max(other.grid.len());
        let grid = (0..n)
            .map(|i| {
                let a = self.grid.get(i).map(Vec::as_slice).unwrap_or(&[]);
                let b = other.grid.get(i).map(Vec::as_slice).unwrap_or(&[]);
                add_rows(a, b)
            })
            .collect();
        Self::new(grid)
    }

    pub fn neg(&self) -> Self {
        BiPoly {
            grid: self
                .grid
                .iter()
                .map(|r| r.iter().map(Scalar::neg).collect())
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &T) -> Self {
        Self::new(
            self.grid
                .iter()
                .map(|r| r.iter().map(|v| v.mul(c)).collect())
                .collect(),
        )
    }

    /// Product; zero entries are skipped so sparse factors stay cheap.
    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut grid: Vec<Vec<T>> = vec![Vec::new(); self.grid.len() + other.grid.len() - 1];
        for (i1, r1) in self.grid.iter().enumerate() {
            for (i2, r2) in other.grid.iter().enumerate() {
                if r1.is_empty() || r2.is_empty() {
                    continue;
                }
                let out = &mut grid[i1 + i2];
                let need = r1.len() + r2.len() - 1;
                if out.len() < need {
                    out.resize(need, T::zero());
                }
                for (j1, a) in r1.iter().enumerate() {
                    if a.is_zero() {
                        continue;
                    }
                    for (j2, b) in r2.iter().enumerate() {
                        if b.is_zero() {
                            continue;
                        }
                        out[j1 + j2] = out[j1 + j2].add(&a.mul(b));
                    }
                }
            }
        }
        Self::new(grid)
    }

    /// Partial derivative in x.
    pub fn derivative_x(&self) -> Self {
        Self::new(
            self.grid
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, r)| r.iter().map(|c| c.mul_i64(i as i64)).collect())
                .collect(),
        )
    }

    /// Keeps the powers `x^0 .. x^(len-1)`.
    pub fn truncate_x(&self, len: usize) -> Self {
        Self::new(self.grid.iter().take(len).cloned().collect())
    }

    /// Re-expands in powers of `(x - x0)`.
    pub fn shift_x(&self, x0: &T) -> Self {
        let width = self.deg_e().map_or(0, |d| d + 1);
        let mut cols: Vec<UniPoly<T>> = (0..width)
            .map(|j| {
                UniPoly::new(Var::X, self.grid.iter().map(|r| r.get(j).cloned().unwrap_or_else(T::zero)).collect())
                    .taylor_shift(x0)
            })
            .collect();
        let rows = self.grid.len();
        let grid = (0..rows)
            .map(|i| cols.iter_mut().map(|c| c.coeff(i)).collect())
            .collect();
        Self::new(grid)
    }

    /// Substitutes `x = x0`, leaving a polynomial in E.
    pub fn eval_x(&self, x0: &T) -> UniPoly<T> {
        let mut acc: Vec<T> = Vec::new();
        for r in self.grid.iter().rev() {
            for v in acc.iter_mut() {
                *v = v.mul(x0);
            }
            acc = add_rows(&acc, r);
        }
        UniPoly::new(Var::E, acc)
    }

    /// Substitutes `E = e0`, leaving a polynomial in x.
    pub fn eval_e(&self, e0: &T) -> UniPoly<T> {
        UniPoly::new(
            Var::X,
            self.grid
                .iter()
                .map(|r| r.iter().rev().fold(T::zero(), |acc, c| acc.mul(e0).add(c)))
                .collect(),
        )
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> BiPoly<U> {
        BiPoly::new(
            self.grid
                .iter()
                .map(|r| r.iter().map(&f).collect())
                .collect(),
        )
    }
}

fn add_rows<T: Scalar>(a: &[T], b: &[T]) -> Vec<T> {
    let n = a.len().max(b.len());
    (0..n)
        .map(|k| match (a.get(k), b.get(k)) {
            (Some(x), Some(y)) => x.add(y),
            (Some(x), None) => x.clone(),
            (None, Some(y)) => y.clone(),
            (None, None) => unreachable!(),
        })
        .collect()
}

impl<T: Scalar + fmt::Debug> fmt::Debug for BiPoly<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("BiPoly{")?;
        let mut first = true;
        for (i, r) in self.grid.iter().enumerate() {
            for (j, c) in r.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                if !first {
                    f.write_str(" + ")?;
                }
                first = false;
                write!(f, "{c:?}·x^{i}·E^{j}")?;
            }
        }
        if first {
            f.write_str("0")?;
        }
        f.write_str("}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::rational::int;
    use crate::numerics::Rational;

    fn xe(terms: &[(i64, usize, usize)]) -> BiPoly<Rational> {
        terms
            .iter()
            .fold(BiPoly::zero(), |acc, &(c, i, j)| acc.add(&BiPoly::monomial(int(c), i, j)))
    }

    #[test]
    fn derivative_acts_on_x_only() {
        let p = xe(&[(1, 3, 0), (2, 1, 2), (5, 0, 4)]);
        assert_eq!(p.derivative_x(), xe(&[(3, 2, 0), (2, 0, 2)]));
        assert!(BiPoly::constant(int(7)).derivative_x().is_zero());
    }

    #[test]
    fn evaluation_in_either_variable() {
        // (x + E)(x - E) = x² - E²
        let p = xe(&[(1, 1, 0), (1, 0, 1)]).mul(&xe(&[(1, 1, 0), (-1, 0, 1)]));
        assert_eq!(p, xe(&[(1, 2, 0), (-1, 0, 2)]));
        assert_eq!(p.eval_x(&int(3)), UniPoly::new(Var::E, vec![int(9), int(0), int(-1)]));
        assert_eq!(p.eval_e(&int(2)), UniPoly::new(Var::X, vec![int(-4), int(0), int(1)]));
    }

    #[test]
    fn shift_matches_evaluation() {
        let p = xe(&[(1, 3, 1), (-2, 1, 0), (4, 0, 2), (1, 2, 0)]);
        let s = p.shift_x(&int(2));
        for e in -2..3 {
            assert_eq!(p.eval_e(&int(e)).eval(&int(5)), s.eval_e(&int(e)).eval(&int(3)));
        }
    }

    #[test]
    fn degrees() {
        let p = xe(&[(1, 5, 0), (3, 2, 3)]);
        assert_eq!(p.deg_x(), Some(5));
        assert_eq!(p.deg_e(), Some(3));
        assert_eq!(BiPoly::<Rational>::zero().deg_x(), None);
    }
}
