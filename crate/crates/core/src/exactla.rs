//! Exact rational linear algebra.
//!
//! Everything here works over arbitrary-precision rationals; nothing is ever
//! rounded. Matrices are dense and row-major, which is plenty for the sizes
//! this crate deals with (a few dozen rows and columns at most).

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

/// Arbitrary-precision rational, always kept in lowest terms with a positive
/// denominator.
pub type Rational = BigRational;

/// Shorthand for the rational `n / d`. Panics if `d == 0`.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Shorthand for the integer `n` as a rational.
pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinAlgError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("matrix is not square ({0}x{1})")]
    NotSquare(usize, usize),
    #[error("matrix is not symmetric")]
    NotSymmetric,
    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl RationalMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = Rational::one();
        }
        m
    }

    /// Scalar matrix `c * I`.
    pub fn scalar(n: usize, c: &Rational) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = c.clone();
        }
        m
    }

    pub fn diagonal(entries: &[Rational]) -> Self {
        let n = entries.len();
        let mut m = Self::zeros(n, n);
        for (i, e) in entries.iter().enumerate() {
            m.data[i * n + i] = e.clone();
        }
        m
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<Rational>) -> Result<Self, LinAlgError> {
        if data.len() != rows * cols {
            return Err(LinAlgError::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(Self { rows, cols, data })
    }

    /// Builds a matrix from rows; every row must have the same length.
    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self, LinAlgError> {
        let cols = rows.first().map_or(0, Vec::len);
        Self::from_rows_with_cols(rows, cols)
    }

    /// Like [`from_rows`](Self::from_rows) but fixes the column count, so an
    /// empty row list still yields a `0 x cols` matrix.
    pub fn from_rows_with_cols(rows: Vec<Vec<Rational>>, cols: usize) -> Result<Self, LinAlgError> {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * cols);
        for (i, r) in rows.into_iter().enumerate() {
            if r.len() != cols {
                return Err(LinAlgError::DimensionMismatch(format!(
                    "row {i} has {} entries, expected {cols}",
                    r.len()
                )));
            }
            data.extend(r);
        }
        Ok(Self {
            rows: n,
            cols,
            data,
        })
    }

    /// Integer matrix literal, mostly for tests.
    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let r: Vec<Vec<Rational>> = rows
            .iter()
            .map(|row| row.iter().map(|&x| int(x)).collect())
            .collect();
        Self::from_rows(r).expect("ragged integer literal")
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

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rational) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<Rational>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn column(&self, j: usize) -> Vec<Rational> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn entries(&self) -> &[Rational] {
        &self.data
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.get(i, j).clone();
            }
        }
        t
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x * c).collect(),
        }
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, LinAlgError> {
        if self.cols != other.rows {
            return Err(LinAlgError::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        out.data[i * other.cols + j] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    fn zip_with(
        &self,
        other: &Self,
        f: impl Fn(&Rational, &Rational) -> Rational,
    ) -> Result<Self, LinAlgError> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(LinAlgError::DimensionMismatch(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| f(a, b))
                .collect(),
        })
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, LinAlgError> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, LinAlgError> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn submatrix(&self, row0: usize, col0: usize, rows: usize, cols: usize) -> Self {
        let mut out = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                out.data[i * cols + j] = self.get(row0 + i, col0 + j).clone();
            }
        }
        out
    }

    pub fn set_block(&mut self, row0: usize, col0: usize, block: &Self) {
        for i in 0..block.rows {
            for j in 0..block.cols {
                self.set(row0 + i, col0 + j, block.get(i, j).clone());
            }
        }
    }

    /// Block-diagonal matrix from square or rectangular blocks.
    pub fn block_diag(blocks: &[RationalMatrix]) -> Self {
        let rows = blocks.iter().map(|b| b.rows).sum();
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut out = Self::zeros(rows, cols);
        let (mut r, mut c) = (0, 0);
        for b in blocks {
            out.set_block(r, c, b);
            r += b.rows;
            c += b.cols;
        }
        out
    }

    /// Assembles a matrix from a grid of blocks. Block sizes must line up.
    pub fn from_blocks(grid: &[Vec<RationalMatrix>]) -> Result<Self, LinAlgError> {
        let heights: Vec<usize> = grid
            .iter()
            .map(|row| row.first().map_or(0, |b| b.rows))
            .collect();
        let widths: Vec<usize> = grid
            .first()
            .map_or(vec![], |row| row.iter().map(|b| b.cols).collect());
        for (bi, row) in grid.iter().enumerate() {
            if row.len() != widths.len() {
                return Err(LinAlgError::DimensionMismatch("ragged block grid".into()));
            }
            for (bj, b) in row.iter().enumerate() {
                if b.rows != heights[bi] || b.cols != widths[bj] {
                    return Err(LinAlgError::DimensionMismatch(format!(
                        "block ({bi},{bj}) has wrong shape"
                    )));
                }
            }
        }
        let mut out = Self::zeros(heights.iter().sum(), widths.iter().sum());
        let mut r = 0;
        for (bi, row) in grid.iter().enumerate() {
            let mut c = 0;
            for (bj, b) in row.iter().enumerate() {
                out.set_block(r, c, b);
                c += widths[bj];
            }
            r += heights[bi];
        }
        Ok(out)
    }

    pub fn vstack(&self, other: &Self) -> Result<Self, LinAlgError> {
        if self.cols != other.cols {
            return Err(LinAlgError::DimensionMismatch(format!(
                "vstack of {} and {} columns",
                self.cols, other.cols
            )));
        }
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Ok(Self {
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        })
    }

    /// Reduced row echelon form and pivot columns. Zero rows trail.
    pub fn rref(&self) -> (Self, Vec<usize>) {
        let mut m = self.clone();
        let pivots = m.rref_in_place();
        (m, pivots)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn rref_in_place(&mut self) -> Vec<usize> {
        let (rows, cols) = (self.rows, self.cols);
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..cols {
            if r == rows {
                break;
            }
            let Some(p) = (r..rows).find(|&i| !self.get(i, c).is_zero()) else {
                continue;
            };
            self.swap_rows(r, p);
            let inv = self.get(r, c).recip();
            for j in c..cols {
                let v = &self.data[r * cols + j] * &inv;
                self.data[r * cols + j] = v;
            }
            for i in 0..rows {
                if i == r {
                    continue;
                }
                let f = self.get(i, c).clone();
                if f.is_zero() {
                    continue;
                }
                for j in c..cols {
                    let t = &self.data[r * cols + j];
                    if t.is_zero() {
                        continue;
                    }
                    let v = &self.data[i * cols + j] - &f * t;
                    self.data[i * cols + j] = v;
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the right null space `{x : self * x = 0}`, one vector per row.
    pub fn kernel(&self) -> Self {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut out = Self::zeros(free.len(), self.cols);
        for (k, &f) in free.iter().enumerate() {
            out.set(k, f, Rational::one());
            for (pi, &pc) in pivots.iter().enumerate() {
                out.set(k, pc, -r.get(pi, f).clone());
            }
        }
        out
    }

    /// Exact inverse by Gauss-Jordan elimination on `[m | I]`.
    pub fn inverse(&self) -> Result<Self, LinAlgError> {
        if !self.is_square() {
            return Err(LinAlgError::NotSquare(self.rows, self.cols));
        }
        let n = self.rows;
        let mut aug = Self::zeros(n, 2 * n);
        aug.set_block(0, 0, self);
        aug.set_block(0, n, &Self::identity(n));
        let pivots = aug.rref_in_place();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return Err(LinAlgError::SingularMatrix);
        }
        Ok(aug.submatrix(0, n, n, n))
    }

    /// Determinant by elimination with row pivoting.
    pub fn determinant(&self) -> Result<Rational, LinAlgError> {
        if !self.is_square() {
            return Err(LinAlgError::NotSquare(self.rows, self.cols));
        }
        let n = self.rows;
        let mut m = self.clone();
        let mut det = Rational::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !m.get(i, c).is_zero()) else {
                return Ok(Rational::zero());
            };
            if p != c {
                m.swap_rows(p, c);
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
        Ok(det)
    }

    /// Leading principal minors `det(M[0..k, 0..k])` for `k = 1..=n`, each
    /// computed as an independent determinant.
    pub fn leading_principal_minors(&self) -> Result<Vec<Rational>, LinAlgError> {
        if !self.is_square() {
            return Err(LinAlgError::NotSquare(self.rows, self.cols));
        }
        (1..=self.rows)
            .map(|k| self.submatrix(0, 0, k, k).determinant())
            .collect()
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square() && (0..self.rows).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    /// Sylvester's criterion: all leading principal minors positive.
    pub fn is_positive_definite(&self) -> Result<bool, LinAlgError> {
        if !self.is_symmetric() {
            return Err(LinAlgError::NotSymmetric);
        }
        Ok(self
            .leading_principal_minors()?
            .iter()
            .all(Signed::is_positive))
    }

    /// Bilinear form `xᵀ M y` for vectors given as slices.
    pub fn bilinear(&self, x: &[Rational], y: &[Rational]) -> Rational {
        let mut acc = Rational::zero();
        for i in 0..self.rows {
            if x[i].is_zero() {
                continue;
            }
            for j in 0..self.cols {
                let g = self.get(i, j);
                if !g.is_zero() && !y[j].is_zero() {
                    acc += &x[i] * g * &y[j];
                }
            }
        }
        acc
    }
}

/// `pᵀ · g · p`: the form `g` expressed in the basis given by the columns of `p`.
pub fn congruence_transform(
    p: &RationalMatrix,
    g: &RationalMatrix,
) -> Result<RationalMatrix, LinAlgError> {
    if !g.is_square() {
        return Err(LinAlgError::NotSquare(g.rows, g.cols));
    }
    if !p.is_square() || p.rows != g.rows {
        return Err(LinAlgError::DimensionMismatch(format!(
            "transform {}x{} against form {}x{}",
            p.rows, p.cols, g.rows, g.cols
        )));
    }
    if p.rank() < p.rows {
        return Err(LinAlgError::SingularMatrix);
    }
    p.transpose().try_mul(g)?.try_mul(p)
}

/// Symmetric elimination by elementary congruences. Returns an invertible `p`
/// and the diagonal `d` with `pᵀ g p = diag(d)`.
pub fn diagonalize_congruent(
    g: &RationalMatrix,
) -> Result<(RationalMatrix, Vec<Rational>), LinAlgError> {
    if !g.is_symmetric() {
        return Err(LinAlgError::NotSymmetric);
    }
    let n = g.rows;
    let mut a = g.clone();
    let mut p = RationalMatrix::identity(n);
    for k in 0..n {
        if a.get(k, k).is_zero() {
            if let Some(j) = (k + 1..n).find(|&j| !a.get(j, j).is_zero()) {
                let mut e = RationalMatrix::identity(n);
                e.set(k, k, Rational::zero());
                e.set(j, j, Rational::zero());
                e.set(k, j, Rational::one());
                e.set(j, k, Rational::one());
                a = congruence_transform(&e, &a)?;
                p = p.try_mul(&e)?;
            } else if let Some(j) = (k + 1..n).find(|&j| !a.get(k, j).is_zero()) {
                // column k += column j makes the (k,k) entry 2 a_kj
                let mut e = RationalMatrix::identity(n);
                e.set(j, k, Rational::one());
                a = congruence_transform(&e, &a)?;
                p = p.try_mul(&e)?;
            } else {
                continue;
            }
        }
        let piv = a.get(k, k).clone();
        let mut e = RationalMatrix::identity(n);
        for j in k + 1..n {
            let f = a.get(k, j) / &piv;
            if !f.is_zero() {
                e.set(k, j, -f);
            }
        }
        a = congruence_transform(&e, &a)?;
        p = p.try_mul(&e)?;
    }
    let d = (0..n).map(|i| a.get(i, i).clone()).collect();
    Ok((p, d))
}

impl Mul for &RationalMatrix {
    type Output = RationalMatrix;
    fn mul(self, rhs: &RationalMatrix) -> RationalMatrix {
        self.try_mul(rhs)
            .expect("matrix product dimension mismatch")
    }
}

impl Add for &RationalMatrix {
    type Output = RationalMatrix;
    fn add(self, rhs: &RationalMatrix) -> RationalMatrix {
        self.try_add(rhs).expect("matrix sum dimension mismatch")
    }
}

impl Sub for &RationalMatrix {
    type Output = RationalMatrix;
    fn sub(self, rhs: &RationalMatrix) -> RationalMatrix {
        self.try_sub(rhs)
            .expect("matrix difference dimension mismatch")
    }
}

impl Neg for &RationalMatrix {
    type Output = RationalMatrix;
    fn neg(self) -> RationalMatrix {
        RationalMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| -x).collect(),
        }
    }
}

impl fmt::Debug for RationalMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            let row: Vec<String> = self.row(i).iter().map(ToString::to_string).collect();
            write!(f, "{}", row.join(" "))?;
        }
        write!(f, "]")
    }
}

/// Text format: a `rows cols` header line followed by one line per row of
/// whitespace-separated rationals (`p/q` or `p`).
impl fmt::Display for RationalMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} {}", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(ToString::to_string).collect();
            writeln!(f, "{}", row.join(" "))?;
        }
        Ok(())
    }
}

pub fn parse_rational(tok: &str) -> Option<Rational> {
    Rational::from_str(tok).ok()
}

impl RationalMatrix {
    /// Parses the matrix text format from an iterator of `(line_no, line)`
    /// pairs, consuming exactly the header and `rows` data lines.
    pub(crate) fn parse_lines<'a, I>(lines: &mut I) -> Result<Self, LinAlgError>
    where
        I: Iterator<Item = (usize, &'a str)>,
    {
        let (hl, header) = lines
            .find(|(_, l)| !l.trim().is_empty())
            .ok_or(LinAlgError::Parse {
                line: 0,
                msg: "missing header".into(),
            })?;
        let dims: Vec<usize> = header
            .split_whitespace()
            .map(|t| t.parse::<usize>())
            .collect::<Result<_, _>>()
            .map_err(|e| LinAlgError::Parse {
                line: hl + 1,
                msg: e.to_string(),
            })?;
        let [rows, cols] = dims[..] else {
            return Err(LinAlgError::Parse {
                line: hl + 1,
                msg: "header must be `rows cols`".into(),
            });
        };
        let mut data = Vec::with_capacity(rows * cols);
        for _ in 0..rows {
            let (ln, line) =
                lines
                    .find(|(_, l)| !l.trim().is_empty())
                    .ok_or(LinAlgError::Parse {
                        line: hl + 1,
                        msg: format!("expected {rows} rows"),
                    })?;
            let row: Vec<Rational> = line
                .split_whitespace()
                .map(|t| {
                    parse_rational(t).ok_or_else(|| LinAlgError::Parse {
                        line: ln + 1,
                        msg: format!("bad rational `{t}`"),
                    })
                })
                .collect::<Result<_, _>>()?;
            if row.len() != cols {
                return Err(LinAlgError::Parse {
                    line: ln + 1,
                    msg: format!("expected {cols} entries, found {}", row.len()),
                });
            }
            data.extend(row);
        }
        Ok(Self { rows, cols, data })
    }
}

impl FromStr for RationalMatrix {
    type Err = LinAlgError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut lines = s.lines().enumerate();
        let m = Self::parse_lines(&mut lines)?;
        if let Some((ln, _)) = lines.find(|(_, l)| !l.trim().is_empty()) {
            return Err(LinAlgError::Parse {
                line: ln + 1,
                msg: "trailing data".into(),
            });
        }
        Ok(m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn m(rows: &[&[i64]]) -> RationalMatrix {
        RationalMatrix::from_i64(rows)
    }

    #[test]
    fn rref_examples() {
        let (r, p) = RationalMatrix::identity(2).rref();
        assert_eq!(r, RationalMatrix::identity(2));
        assert_eq!(p, vec![0, 1]);

        let (r, p) = m(&[&[2, 4], &[1, 2]]).rref();
        assert_eq!(r, m(&[&[1, 2], &[0, 0]]));
        assert_eq!(p, vec![0]);

        let (r, p) = RationalMatrix::zeros(2, 2).rref();
        assert_eq!(r, RationalMatrix::zeros(2, 2));
        assert!(p.is_empty());
    }

    #[test]
    fn inverse_examples() {
        assert_eq!(
            RationalMatrix::identity(3).inverse().unwrap(),
            RationalMatrix::identity(3)
        );
        let inv = m(&[&[2, 1], &[1, 2]]).inverse().unwrap();
        let expected = RationalMatrix::from_rows(vec![
            vec![rat(2, 3), rat(-1, 3)],
            vec![rat(-1, 3), rat(2, 3)],
        ])
        .unwrap();
        assert_eq!(inv, expected);
        assert_eq!(&m(&[&[2, 1], &[1, 2]]) * &inv, RationalMatrix::identity(2));
        assert_eq!(
            m(&[&[1, 1], &[1, 1]]).inverse(),
            Err(LinAlgError::SingularMatrix)
        );
    }

    #[test]
    fn positive_definite_examples() {
        assert!(RationalMatrix::identity(5).is_positive_definite().unwrap());
        assert!(!m(&[&[1, 0], &[0, -1]]).is_positive_definite().unwrap());
        let g = m(&[&[2, 1], &[1, 2]]);
        assert_eq!(g.leading_principal_minors().unwrap(), vec![int(2), int(3)]);
        assert!(g.is_positive_definite().unwrap());
        assert_eq!(
            m(&[&[1, 2], &[0, 1]]).is_positive_definite(),
            Err(LinAlgError::NotSymmetric)
        );
    }

    #[test]
    fn congruence_examples() {
        let g = m(&[&[3, 1], &[1, 5]]);
        assert_eq!(
            congruence_transform(&RationalMatrix::identity(2), &g).unwrap(),
            g
        );

        // left factor [[1,0],[-1,1]] of the displayed reduction is pᵀ
        let b = m(&[&[1, 1], &[1, 2]]);
        let left = m(&[&[1, 0], &[-1, 1]]);
        assert_eq!(
            congruence_transform(&left.transpose(), &b).unwrap(),
            RationalMatrix::identity(2)
        );

        let a = m(&[&[2, 1], &[1, 2]]);
        let p = RationalMatrix::from_rows(vec![vec![int(1), int(0)], vec![rat(-1, 2), int(1)]])
            .unwrap();
        assert_eq!(
            congruence_transform(&p, &a).unwrap(),
            RationalMatrix::diagonal(&[rat(3, 2), int(2)])
        );

        assert_eq!(
            congruence_transform(&m(&[&[1, 1], &[1, 1]]), &a),
            Err(LinAlgError::SingularMatrix)
        );
        assert!(matches!(
            congruence_transform(&RationalMatrix::identity(3), &a),
            Err(LinAlgError::DimensionMismatch(_))
        ));
    }

    #[test]
    fn kernel_and_determinant() {
        let a = m(&[&[1, 1, 0], &[0, 0, 1]]);
        let k = a.kernel();
        assert_eq!(k, m(&[&[-1, 1, 0]]));
        assert!((&a * &k.transpose()).is_zero());
        assert_eq!(m(&[&[0, 1], &[1, 0]]).determinant().unwrap(), int(-1));
    }

    #[test]
    fn diagonalize_indefinite_with_zero_diagonal() {
        let g = m(&[&[0, 1], &[1, 0]]);
        let (p, d) = diagonalize_congruent(&g).unwrap();
        assert_eq!(
            congruence_transform(&p, &g).unwrap(),
            RationalMatrix::diagonal(&d)
        );
        assert!(d.iter().any(Signed::is_negative));
    }

    #[test]
    fn text_format_round_trip() {
        let a = RationalMatrix::from_rows(vec![vec![rat(1, 2), int(-3)], vec![int(0), rat(-7, 9)]])
            .unwrap();
        let text = a.to_string();
        assert_eq!(text, "2 2\n1/2 -3\n0 -7/9\n");
        let back: RationalMatrix = text.parse().unwrap();
        assert_eq!(back, a);
        assert_eq!(back.to_string(), text);
        assert!("2 2\n1 2\n3\n".parse::<RationalMatrix>().is_err());
        assert!("1 1\n1/0\n".parse::<RationalMatrix>().is_err());
        // unreduced input is normalised
        assert_eq!(
            "1 1\n4/-6\n".parse::<RationalMatrix>().unwrap().get(0, 0),
            &rat(-2, 3)
        );
    }

    fn small_matrix(n: usize) -> impl Strategy<Value = RationalMatrix> {
        proptest::collection::vec(-4i64..=4, n * n).prop_map(move |v| {
            RationalMatrix::from_vec(n, n, v.into_iter().map(int).collect()).unwrap()
        })
    }

    proptest! {
        #[test]
        fn rref_is_idempotent(a in (1usize..6).prop_flat_map(small_matrix)) {
            let (r, p) = a.rref();
            let (rr, pp) = r.rref();
            prop_assert_eq!(rr, r);
            prop_assert_eq!(pp, p);
        }

        #[test]
        fn inverse_round_trip(a in (1usize..=8).prop_flat_map(small_matrix)) {
            match a.inverse() {
                Ok(inv) => {
                    prop_assert_eq!(&a * &inv, RationalMatrix::identity(a.rows()));
                    prop_assert_eq!(&inv * &a, RationalMatrix::identity(a.rows()));
                }
                Err(e) => {
                    prop_assert_eq!(e, LinAlgError::SingularMatrix);
                    prop_assert!(a.determinant().unwrap().is_zero());
                }
            }
        }

        #[test]
        fn sylvester_invariance(
            n in 1usize..5,
            seed in proptest::collection::vec(-3i64..=3, 32),
            pseed in proptest::collection::vec(-3i64..=3, 32),
        ) {
            // g = aᵀa + I is positive definite
            let a = RationalMatrix::from_vec(n, n, seed[..n * n].iter().map(|&x| int(x)).collect()).unwrap();
            let g = &(&a.transpose() * &a) + &RationalMatrix::identity(n);
            prop_assert!(g.is_positive_definite().unwrap());
            let p = RationalMatrix::from_vec(n, n, pseed[..n * n].iter().map(|&x| int(x)).collect()).unwrap();
            if p.rank() == n {
                let h = congruence_transform(&p, &g).unwrap();
                prop_assert!(h.is_positive_definite().unwrap());
            }
            let (q, d) = diagonalize_congruent(&g).unwrap();
            prop_assert_eq!(congruence_transform(&q, &g).unwrap(), RationalMatrix::diagonal(&d));
            prop_assert!(d.iter().all(Signed::is_positive));
        }
    }
}
