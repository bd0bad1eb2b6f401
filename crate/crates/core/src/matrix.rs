//! Dense row-major matrices over rationals or polynomials.

use std::fmt;
use std::ops::{Index, IndexMut};

use num::{BigInt, Integer, One, Zero};

use crate::error::{Error, Result};
use crate::poly::EpsPoly;
use crate::rational::{self, Rational};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

pub type RatMatrix = Matrix<Rational>;
pub type PolyMatrix = Matrix<EpsPoly>;

impl<T> Matrix<T> {
    pub fn from_vec(rows: usize, cols: usize, data: Vec<T>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Shape {
                expected: rows * cols,
                got: data.len(),
            });
        }
        Ok(Matrix { rows, cols, data })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, r: usize) -> &[T] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> impl Iterator<Item = &T> + '_ {
        (0..self.rows).map(move |r| &self[(r, c)])
    }

    pub fn map<U>(&self, f: impl FnMut(&T) -> U) -> Matrix<U> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn entries(&self) -> impl Iterator<Item = ((usize, usize), &T)> + '_ {
        let cols = self.cols;
        self.data
            .iter()
            .enumerate()
            .map(move |(k, v)| ((k / cols, k % cols), v))
    }
}

impl<T: Clone> Matrix<T> {
    pub fn transpose(&self) -> Self {
        Matrix::from_fn(self.cols, self.rows, |r, c| self[(c, r)].clone())
    }

    /// Submatrix on the given row and column index lists, in that order.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Self {
        Matrix::from_fn(rows.len(), cols.len(), |r, c| self[(rows[r], cols[c])].clone())
    }
}

impl<T: Clone + Zero> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![T::zero(); rows * cols],
        }
    }

    pub fn is_zero_at(&self, r: usize, c: usize) -> bool {
        self[(r, c)].is_zero()
    }

    pub fn zero_column(&mut self, c: usize) {
        for r in 0..self.rows {
            self[(r, c)] = T::zero();
        }
    }
}

impl<T: Clone + Zero + One> Matrix<T> {
    pub fn identity(n: usize) -> Self {
        Matrix::from_fn(n, n, |r, c| if r == c { T::one() } else { T::zero() })
    }
}

impl<T> Index<(usize, usize)> for Matrix<T> {
    type Output = T;
    fn index(&self, (r, c): (usize, usize)) -> &T {
        debug_assert!(r < self.rows && c < self.cols);
        &self.data[r * self.cols + c]
    }
}

impl<T> IndexMut<(usize, usize)> for Matrix<T> {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut T {
        debug_assert!(r < self.rows && c < self.cols);
        &mut self.data[r * self.cols + c]
    }
}

impl RatMatrix {
    /// Product that skips zero entries of the left factor.
    /// Exact product. Denominators are cleared once per row of `self` and
    /// per column of `rhs`, so the inner loop is integer multiply-add and each
    /// output entry is reduced once.
    pub fn mul(&self, rhs: &RatMatrix) -> RatMatrix {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch in product");
        let col_scale: Vec<BigInt> = (0..rhs.cols)
            .map(|c| common_denominator((0..rhs.rows).map(|k| &rhs[(k, c)])))
            .collect();
        let rhs_rows: Vec<Vec<(usize, BigInt)>> = (0..rhs.rows)
            .map(|k| {
                (0..rhs.cols)
                    .filter(|&c| !rhs[(k, c)].is_zero())
                    .map(|c| (c, scaled_numerator(&rhs[(k, c)], &col_scale[c])))
                    .collect()
            })
            .collect();
        let mut out = RatMatrix::zeros(self.rows, rhs.cols);
        let mut acc = vec![BigInt::zero(); rhs.cols];
        for r in 0..self.rows {
            let row = self.row(r);
            let row_scale = common_denominator(row.iter());
            let mut touched = false;
            for (k, a) in row.iter().enumerate().filter(|(_, a)| !a.is_zero()) {
                let a = scaled_numerator(a, &row_scale);
                for (c, b) in &rhs_rows[k] {
                    acc[*c] += &a * b;
                    touched = true;
                }
            }
            if !touched {
                continue;
            }
            for (c, sum) in acc.iter_mut().enumerate() {
                if !sum.is_zero() {
                    let denom = &row_scale * &col_scale[c];
                    out[(r, c)] = Rational::new(std::mem::take(sum), denom);
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Vec<Rational> {
        assert_eq!(self.cols, v.len(), "dimension mismatch in product");
        (0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(v)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .fold(Rational::zero(), |acc, (a, b)| acc + a * b)
            })
            .collect()
    }

    pub fn sub(&self, rhs: &RatMatrix) -> RatMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Matrix::from_fn(self.rows, self.cols, |r, c| &self[(r, c)] - &rhs[(r, c)])
    }

    pub fn add(&self, rhs: &RatMatrix) -> RatMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Matrix::from_fn(self.rows, self.cols, |r, c| &self[(r, c)] + &rhs[(r, c)])
    }

    pub fn column_sums(&self) -> Vec<Rational> {
        (0..self.cols)
            .map(|c| self.column(c).fold(Rational::zero(), |acc, x| acc + x))
            .collect()
    }

    pub fn scale_columns(&self, factors: &[Rational]) -> RatMatrix {
        assert_eq!(self.cols, factors.len());
        Matrix::from_fn(self.rows, self.cols, |r, c| &self[(r, c)] * &factors[c])
    }

    pub fn to_poly(&self) -> PolyMatrix {
        self.map(|x| EpsPoly::constant(x.clone()))
    }
}

impl PolyMatrix {
    /// Product with a constant right factor; polynomial degrees do not grow.
    pub fn mul_rat(&self, rhs: &RatMatrix) -> PolyMatrix {
        assert_eq!(self.cols, rhs.rows(), "dimension mismatch in product");
        let parts: Vec<RatMatrix> = self.coefficients().iter().map(|c| c.mul(rhs)).collect();
        PolyMatrix::from_coefficients(self.rows, rhs.cols(), &parts)
    }

    /// Product with a constant left factor.
    pub fn rat_mul(lhs: &RatMatrix, rhs: &PolyMatrix) -> PolyMatrix {
        assert_eq!(lhs.cols(), rhs.rows, "dimension mismatch in product");
        let parts: Vec<RatMatrix> = rhs.coefficients().iter().map(|c| lhs.mul(c)).collect();
        PolyMatrix::from_coefficients(lhs.rows(), rhs.cols, &parts)
    }

    /// Splits into constant matrices `C_d` with `self = sum_d e^d C_d`.
    pub fn coefficients(&self) -> Vec<RatMatrix> {
        let len = self.data.iter().map(|p| p.coeffs().len()).max().unwrap_or(0);
        (0..len)
            .map(|d| RatMatrix::from_fn(self.rows, self.cols, |r, c| self[(r, c)].coeff(d)))
            .collect()
    }

    pub fn from_coefficients(rows: usize, cols: usize, parts: &[RatMatrix]) -> PolyMatrix {
        PolyMatrix::from_fn(rows, cols, |r, c| {
            EpsPoly::new(parts.iter().map(|m| m[(r, c)].clone()).collect())
        })
    }

    pub fn eval_at(&self, x: &Rational) -> RatMatrix {
        self.map(|p| p.eval_at(x))
    }

    pub fn constant_terms(&self) -> RatMatrix {
        self.map(EpsPoly::constant_term)
    }

    pub fn column_sums(&self) -> Vec<EpsPoly> {
        (0..self.cols)
            .map(|c| self.column(c).fold(EpsPoly::zero(), |acc, x| &acc + x))
            .collect()
    }

    pub fn max_degree(&self) -> usize {
        self.data.iter().filter_map(EpsPoly::degree).max().unwrap_or(0)
    }
}

impl fmt::Display for RatMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cells: Vec<String> = self.data.iter().map(rational::render).collect();
        write_grid(f, self.rows, self.cols, &cells)
    }
}

impl fmt::Display for PolyMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cells: Vec<String> = self.data.iter().map(|p| p.to_string()).collect();
        write_grid(f, self.rows, self.cols, &cells)
    }
}

pub(crate) fn write_grid(
    f: &mut impl fmt::Write,
    rows: usize,
    cols: usize,
    cells: &[String],
) -> fmt::Result {
    let width = cells.iter().map(|c| c.chars().count()).max().unwrap_or(1);
    for r in 0..rows {
        for c in 0..cols {
            if c > 0 {
                f.write_str("  ")?;
            }
            write!(f, "{:>width$}", cells[r * cols + c])?;
        }
        writeln!(f)?;
    }
    Ok(())
}


fn common_denominator<'a>(entries: impl Iterator<Item = &'a Rational>) -> BigInt {
    entries
        .filter(|x| !x.is_zero())
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()))
}

fn scaled_numerator(x: &Rational, scale: &BigInt) -> BigInt {
    x.numer() * (scale / x.denom())
}
