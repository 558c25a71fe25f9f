//! Exact rational matrices.
//!
//! Every rank, kernel and solve goes through one fraction-free (Bareiss)
//! elimination over the integers: each row is first scaled by the lcm of its
//! denominators, which changes neither the row space nor the kernel. The
//! minor-enumeration rank in [`rank_by_minors`] shares no code with that path
//! and is kept as an oracle for it.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

/// Exact rational scalar. `num_rational` keeps it reduced with a positive
/// denominator, and zero as `0/1`.
pub type Rational = num_rational::BigRational;

/// Largest row or column count accepted by [`rank_by_minors`].
pub const MINOR_ORACLE_LIMIT: usize = 12;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("{found} entries cannot fill a {rows}x{cols} matrix")]
    Shape { rows: usize, cols: usize, found: usize },
    #[error("dimension mismatch: expected length {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("minor enumeration is limited to {limit}x{limit}, got {rows}x{cols}")]
    OracleGuard { rows: usize, cols: usize, limit: usize },
}

/// Dense row-major matrix over ℚ.
#[derive(Clone, PartialEq, Eq)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Rational>,
}

impl RationalMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<Rational>) -> Result<Self, LinalgError> {
        if entries.len() != rows * cols {
            return Err(LinalgError::Shape {
                rows,
                cols,
                found: entries.len(),
            });
        }
        Ok(Self { rows, cols, entries })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            entries: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(size: usize) -> Self {
        let mut m = Self::zeros(size, size);
        for i in 0..size {
            m.entries[i * size + i] = Rational::one();
        }
        m
    }

    /// Builds a matrix from integer rows. A ragged input is a shape error.
    pub fn from_integer_rows<T: Into<BigInt> + Clone>(
        cols: usize,
        rows: &[Vec<T>],
    ) -> Result<Self, LinalgError> {
        let mut entries = Vec::with_capacity(rows.len() * cols);
        for row in rows {
            if row.len() != cols {
                return Err(LinalgError::DimensionMismatch {
                    expected: cols,
                    found: row.len(),
                });
            }
            entries.extend(row.iter().cloned().map(|v| Rational::from_integer(v.into())));
        }
        Self::new(rows.len(), cols, entries)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_empty(&self) -> bool {
        self.rows == 0 || self.cols == 0
    }

    pub fn get(&self, row: usize, col: usize) -> &Rational {
        &self.entries[row * self.cols + col]
    }

    pub fn set(&mut self, row: usize, col: usize, value: Rational) {
        self.entries[row * self.cols + col] = value;
    }

    pub fn row(&self, row: usize) -> &[Rational] {
        &self.entries[row * self.cols..(row + 1) * self.cols]
    }

    pub fn entries(&self) -> &[Rational] {
        &self.entries
    }

    pub fn transpose(&self) -> Self {
        let mut entries = Vec::with_capacity(self.entries.len());
        for c in 0..self.cols {
            for r in 0..self.rows {
                entries.push(self.get(r, c).clone());
            }
        }
        Self {
            rows: self.cols,
            cols: self.rows,
            entries,
        }
    }

    /// Submatrix made of the given rows, in the given order.
    pub fn select_rows(&self, rows: &[usize]) -> Self {
        let mut entries = Vec::with_capacity(rows.len() * self.cols);
        for &r in rows {
            entries.extend_from_slice(self.row(r));
        }
        Self {
            rows: rows.len(),
            cols: self.cols,
            entries,
        }
    }

    /// Places `other` to the right of `self`.
    pub fn hstack(&self, other: &Self) -> Result<Self, LinalgError> {
        if self.rows != other.rows {
            return Err(LinalgError::DimensionMismatch {
                expected: self.rows,
                found: other.rows,
            });
        }
        let mut entries = Vec::with_capacity(self.rows * (self.cols + other.cols));
        for r in 0..self.rows {
            entries.extend_from_slice(self.row(r));
            entries.extend_from_slice(other.row(r));
        }
        Ok(Self {
            rows: self.rows,
            cols: self.cols + other.cols,
            entries,
        })
    }

    pub fn mul(&self, other: &Self) -> Result<Self, LinalgError> {
        if self.cols != other.rows {
            return Err(LinalgError::DimensionMismatch {
                expected: self.cols,
                found: other.rows,
            });
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
                        out.entries[i * other.cols + j] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Result<Vec<Rational>, LinalgError> {
        if v.len() != self.cols {
            return Err(LinalgError::DimensionMismatch {
                expected: self.cols,
                found: v.len(),
            });
        }
        Ok((0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(v)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .fold(Rational::zero(), |acc, (a, b)| acc + a * b)
            })
            .collect())
    }

    /// Rows scaled to integers by the lcm of their denominators.
    fn integer_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|r| clear_denominators(self.row(r))).collect()
    }
}

impl fmt::Debug for RationalMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "RationalMatrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            let cells: Vec<String> = self.row(r).iter().map(|v| v.to_string()).collect();
            writeln!(f, "  [{}]", cells.join(", "))?;
        }
        write!(f, "]")
    }
}

/// Multiplies a rational vector by the lcm of its denominators.
pub fn clear_denominators(values: &[Rational]) -> Vec<BigInt> {
    let lcm = values.iter().fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
    values.iter().map(|v| v.numer() * (&lcm / v.denom())).collect()
}

/// Scales a nonzero rational vector to the primitive integer vector with a
/// positive first nonzero entry. The zero vector is returned as zeros.
pub fn primitive_integer_vector(values: &[Rational]) -> Vec<BigInt> {
    let mut ints = clear_denominators(values);
    let gcd = ints.iter().fold(BigInt::zero(), |acc, v| acc.gcd(v));
    if gcd.is_zero() {
        return ints;
    }
    let negate = ints
        .iter()
        .find(|v| !v.is_zero())
        .is_some_and(|v| v.is_negative());
    for v in ints.iter_mut() {
        *v = &*v / &gcd;
        if negate {
            *v = -&*v;
        }
    }
    ints
}

/// Row echelon form produced by fraction-free elimination.
struct Echelon {
    /// Pivot column of each nonzero row, in row order.
    pivots: Vec<usize>,
    /// The first `pivots.len()` rows are the echelon rows.
    rows: Vec<Vec<BigInt>>,
}

impl Echelon {
    fn rank(&self) -> usize {
        self.pivots.len()
    }
}

/// Bareiss elimination. Pivot: first column with a nonzero entry at or below
/// the current row, taking the topmost such row. After step k every entry
/// below the pivot rows is a (k+1)-minor of the input, so each division is
/// exact.
fn bareiss(mut a: Vec<Vec<BigInt>>, cols: usize) -> Echelon {
    let rows = a.len();
    let mut pivots = Vec::new();
    let mut prev = BigInt::one();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let (head, tail) = a.split_at_mut(r + 1);
        let pivot_row = &head[r];
        let pivot = &pivot_row[c];
        for row in tail.iter_mut() {
            let factor = std::mem::take(&mut row[c]);
            for j in c + 1..cols {
                let updated = pivot * &row[j] - &factor * &pivot_row[j];
                row[j] = if prev.is_one() { updated } else { updated / &prev };
            }
        }
        prev = a[r][c].clone();
        pivots.push(c);
        r += 1;
    }
    Echelon { pivots, rows: a }
}

/// Solves the echelon system with the given right-hand column and every free
/// variable fixed by `free_value`.
fn back_substitute(
    echelon: &Echelon,
    cols: usize,
    rhs: impl Fn(usize) -> Rational,
    free_value: impl Fn(usize) -> Rational,
) -> Vec<Rational> {
    let mut x: Vec<Rational> = vec![Rational::zero(); cols];
    let mut is_pivot = vec![false; cols];
    for &p in &echelon.pivots {
        is_pivot[p] = true;
    }
    for (c, slot) in x.iter_mut().enumerate() {
        if !is_pivot[c] {
            *slot = free_value(c);
        }
    }
    for (i, &p) in echelon.pivots.iter().enumerate().rev() {
        let row = &echelon.rows[i];
        let mut acc = rhs(i);
        for j in p + 1..cols {
            if !row[j].is_zero() && !x[j].is_zero() {
                acc -= Rational::from_integer(row[j].clone()) * &x[j];
            }
        }
        x[p] = acc / Rational::from_integer(row[p].clone());
    }
    x
}

/// Rank over ℚ. Empty matrices have rank 0.
pub fn rank(m: &RationalMatrix) -> usize {
    if m.is_empty() {
        return 0;
    }
    bareiss(m.integer_rows(), m.cols).rank()
}

/// Basis of the right null space. Vector `i` is the solution with the `i`-th
/// free column set to one and the other free columns zero, rescaled to a
/// primitive integer vector.
pub fn kernel_basis(m: &RationalMatrix) -> Vec<Vec<Rational>> {
    let cols = m.cols;
    if cols == 0 {
        return Vec::new();
    }
    let echelon = if m.rows == 0 {
        Echelon {
            pivots: Vec::new(),
            rows: Vec::new(),
        }
    } else {
        bareiss(m.integer_rows(), cols)
    };
    let mut is_pivot = vec![false; cols];
    for &p in &echelon.pivots {
        is_pivot[p] = true;
    }
    (0..cols)
        .filter(|&c| !is_pivot[c])
        .map(|free| {
            let v = back_substitute(
                &echelon,
                cols,
                |_| Rational::zero(),
                |c| {
                    if c == free {
                        Rational::one()
                    } else {
                        Rational::zero()
                    }
                },
            );
            primitive_integer_vector(&v)
                .into_iter()
                .map(Rational::from_integer)
                .collect()
        })
        .collect()
}

/// One exact solution of `m · x = b`, or `None` when the system is
/// inconsistent. Free variables are set to zero.
pub fn solve(m: &RationalMatrix, b: &[Rational]) -> Result<Option<Vec<Rational>>, LinalgError> {
    if b.len() != m.rows {
        return Err(LinalgError::DimensionMismatch {
            expected: m.rows,
            found: b.len(),
        });
    }
    let cols = m.cols;
    let augmented: Vec<Vec<BigInt>> = (0..m.rows)
        .map(|r| {
            let mut row: Vec<Rational> = m.row(r).to_vec();
            row.push(b[r].clone());
            clear_denominators(&row)
        })
        .collect();
    let echelon = bareiss(augmented, cols + 1);
    if echelon.pivots.last() == Some(&cols) {
        return Ok(None);
    }
    Ok(Some(back_substitute(
        &echelon,
        cols,
        |i| Rational::from_integer(echelon.rows[i][cols].clone()),
        |_| Rational::zero(),
    )))
}

/// Rank as the size of the largest nonzero minor.
///
/// Minors are built level by level with Laplace expansion along the last row,
/// and the rank is the last level that still holds a nonzero minor. Machine
/// integers are tried first, with big integers taking over on overflow. No
/// elimination is involved, so this is an independent check of [`rank`].
pub fn rank_by_minors(m: &RationalMatrix) -> Result<usize, LinalgError> {
    if m.rows > MINOR_ORACLE_LIMIT || m.cols > MINOR_ORACLE_LIMIT {
        return Err(LinalgError::OracleGuard {
            rows: m.rows,
            cols: m.cols,
            limit: MINOR_ORACLE_LIMIT,
        });
    }
    let a = m.integer_rows();
    let small: Option<Vec<Vec<i128>>> = a
        .iter()
        .map(|row| row.iter().map(|v| v.to_i128()).collect())
        .collect();
    if let Some(rank) = small.and_then(|small| minor_rank(&small, m.rows, m.cols)) {
        return Ok(rank);
    }
    Ok(minor_rank(&a, m.rows, m.cols).expect("big integers do not overflow"))
}

/// Arithmetic needed by the minor expansion; `None` signals overflow.
trait MinorScalar: Clone + Zero + One {
    fn mul_add(&self, sign: bool, entry: &Self, minor: &Self) -> Option<Self>;
}

impl MinorScalar for i128 {
    fn mul_add(&self, sign: bool, entry: &Self, minor: &Self) -> Option<Self> {
        let term = entry.checked_mul(*minor)?;
        if sign {
            self.checked_add(term)
        } else {
            self.checked_sub(term)
        }
    }
}

impl MinorScalar for BigInt {
    fn mul_add(&self, sign: bool, entry: &Self, minor: &Self) -> Option<Self> {
        let term = entry * minor;
        Some(if sign { self + term } else { self - term })
    }
}

/// Subsets of 0..n of each size, as bit masks in increasing order, plus the
/// position of every mask within its size class.
fn subsets_by_size(n: usize) -> (Vec<Vec<u16>>, Vec<usize>) {
    let mut by_size = vec![Vec::new(); n + 1];
    let mut position = vec![0; 1 << n];
    for mask in 0..(1u32 << n) {
        let class = &mut by_size[mask.count_ones() as usize];
        position[mask as usize] = class.len();
        class.push(mask as u16);
    }
    (by_size, position)
}

/// Every k × k minor of the chosen rows R and columns C is expanded along the
/// last row of R against the (k−1)-minors on the remaining rows. Levels are
/// built until one has no nonzero minor.
fn minor_rank<T: MinorScalar>(a: &[Vec<T>], rows: usize, cols: usize) -> Option<usize> {
    let (row_sets, row_pos) = subsets_by_size(rows);
    let (col_sets, col_pos) = subsets_by_size(cols);
    // level[i * width + j] is the minor on row_sets[k][i] × col_sets[k][j]
    let mut level = vec![T::one()];
    let mut k = 0;
    while k < rows.min(cols) {
        let width = col_sets[k + 1].len();
        let prev_width = col_sets[k].len();
        let mut next = vec![T::zero(); row_sets[k + 1].len() * width];
        let mut any = false;
        for (i, &row_mask) in row_sets[k + 1].iter().enumerate() {
            let last = 15 - row_mask.leading_zeros() as usize;
            let sub_rows = row_pos[(row_mask & !(1 << last)) as usize];
            for (j, &col_mask) in col_sets[k + 1].iter().enumerate() {
                let mut value = T::zero();
                let mut pos = 0;
                for (c, entry) in a[last].iter().enumerate() {
                    if col_mask & (1 << c) == 0 {
                        continue;
                    }
                    if !entry.is_zero() {
                        let sub_cols = col_pos[(col_mask & !(1 << c)) as usize];
                        let minor = &level[sub_rows * prev_width + sub_cols];
                        if !minor.is_zero() {
                            value = value.mul_add((k + pos) % 2 == 0, entry, minor)?;
                        }
                    }
                    pos += 1;
                }
                any |= !value.is_zero();
                next[i * width + j] = value;
            }
        }
        if !any {
            break;
        }
        level = next;
        k += 1;
    }
    Some(k)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn int_matrix(rows: &[Vec<i64>]) -> RationalMatrix {
        let cols = rows.first().map_or(0, |r| r.len());
        RationalMatrix::from_integer_rows(cols, rows).unwrap()
    }

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    fn ints(values: &[i64]) -> Vec<Rational> {
        values.iter().map(|&v| Rational::from_integer(v.into())).collect()
    }

    #[test]
    fn identity_has_full_rank() {
        let id = RationalMatrix::identity(3);
        assert_eq!(rank(&id), 3);
        assert_eq!(rank_by_minors(&id).unwrap(), 3);
        assert!(kernel_basis(&RationalMatrix::identity(2)).is_empty());
    }

    #[test]
    fn proportional_rows() {
        let m = int_matrix(&[vec![1, 2], vec![2, 4]]);
        assert_eq!(rank(&m), 1);
        assert_eq!(rank_by_minors(&m).unwrap(), 1);
    }

    #[test]
    fn empty_and_zero_matrices() {
        assert_eq!(rank(&RationalMatrix::zeros(0, 4)), 0);
        assert_eq!(rank(&RationalMatrix::zeros(3, 0)), 0);
        assert_eq!(rank(&RationalMatrix::zeros(3, 3)), 0);
        assert_eq!(rank_by_minors(&RationalMatrix::zeros(3, 3)).unwrap(), 0);
        assert_eq!(kernel_basis(&RationalMatrix::zeros(0, 3)).len(), 3);
    }

    #[test]
    fn single_row_kernel() {
        let m = int_matrix(&[vec![1, 1, 1]]);
        let kernel = kernel_basis(&m);
        assert_eq!(kernel.len(), 2);
        for v in &kernel {
            assert!(m.mul_vec(v).unwrap().iter().all(Zero::is_zero));
        }
        assert_eq!(rank(&RationalMatrix::new(2, 3, kernel.concat()).unwrap()), 2);
    }

    #[test]
    fn rational_entries_are_cleared() {
        let m = RationalMatrix::new(2, 2, vec![q(1, 2), q(1, 3), q(3, 4), q(1, 2)]).unwrap();
        assert_eq!(rank(&m), 1);
        let kernel = kernel_basis(&m);
        assert_eq!(kernel, vec![ints(&[2, -3])]);
    }

    #[test]
    fn solve_identity_and_inconsistent() {
        let id = RationalMatrix::identity(3);
        assert_eq!(solve(&id, &ints(&[1, 2, 3])).unwrap(), Some(ints(&[1, 2, 3])));
        let m = int_matrix(&[vec![1, 2], vec![2, 4]]);
        assert_eq!(solve(&m, &ints(&[1, 3])).unwrap(), None);
        assert!(solve(&m, &ints(&[1])).is_err());
    }

    #[test]
    fn solve_underdetermined_reproduces_rhs() {
        let m = int_matrix(&[vec![1, 2, 3], vec![0, 0, 1]]);
        let b = vec![q(7, 3), q(-1, 2)];
        let x = solve(&m, &b).unwrap().unwrap();
        assert_eq!(m.mul_vec(&x).unwrap(), b);
    }

    #[test]
    fn oracle_guard() {
        let big = RationalMatrix::zeros(13, 2);
        assert!(matches!(
            rank_by_minors(&big),
            Err(LinalgError::OracleGuard { .. })
        ));
    }

    #[test]
    fn rank_deficient_with_skipped_columns() {
        // first column zero, third column a combination of the second and fourth
        let m = int_matrix(&[
            vec![0, 2, 5, 1],
            vec![0, 4, 10, 2],
            vec![0, 1, 3, 1],
            vec![0, 3, 8, 2],
        ]);
        assert_eq!(rank(&m), 2);
        assert_eq!(rank_by_minors(&m).unwrap(), 2);
        assert_eq!(kernel_basis(&m).len(), 2);
    }

    #[test]
    fn oracle_survives_overflow() {
        // 2x2 minors near 10^40 do not fit in i128
        let huge = Rational::from_integer(BigInt::from(10).pow(20));
        let m = RationalMatrix::new(
            3,
            2,
            vec![
                huge.clone(),
                q(1, 1),
                q(1, 1),
                huge.clone(),
                huge.clone() + q(1, 1),
                huge + q(1, 1),
            ],
        )
        .unwrap();
        assert_eq!(rank_by_minors(&m).unwrap(), 2);
        let dependent = RationalMatrix::new(
            2,
            2,
            vec![
                m.get(0, 0).clone(),
                q(1, 1),
                m.get(0, 0) * m.get(0, 0),
                m.get(0, 0).clone(),
            ],
        )
        .unwrap();
        assert_eq!(rank_by_minors(&dependent).unwrap(), 1);
    }

    #[test]
    fn primitive_vector_sign_and_gcd() {
        assert_eq!(
            primitive_integer_vector(&[q(0, 1), q(-2, 3), q(4, 3)]),
            vec![BigInt::from(0), BigInt::from(1), BigInt::from(-2)]
        );
    }
}
