//! Exact linear algebra over the rationals.
//!
//! Two flavours live here. Large sparse systems (graded pieces of polynomial
//! maps) are ranked by fraction-free elimination on integer rows: each row is
//! cleared of denominators, eliminated with `row * p - pivot * c` updates and
//! divided by its content. Elimination first runs on `i64` with checked
//! arithmetic and restarts on `BigInt` if anything overflows. Small dense
//! systems (obstruction class matrices) use Gauss-Jordan over `BigRational`.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Sparse row: `(column, value)` pairs, strictly increasing columns, no zeros.
pub type SparseRow<T> = Vec<(usize, T)>;

trait ElimInt: Clone {
    fn is_zero(&self) -> bool;
    fn is_negative(&self) -> bool;
    fn neg(&self) -> Self;
    fn mul(&self, other: &Self) -> Option<Self>;
    fn sub(&self, other: &Self) -> Option<Self>;
    fn gcd(&self, other: &Self) -> Self;
    fn div_exact(&self, other: &Self) -> Self;
    fn is_unit(&self) -> bool;
}

impl ElimInt for i64 {
    fn is_zero(&self) -> bool {
        *self == 0
    }
    fn is_negative(&self) -> bool {
        *self < 0
    }
    fn neg(&self) -> Self {
        -*self
    }
    fn mul(&self, other: &Self) -> Option<Self> {
        self.checked_mul(*other).filter(|v| *v != i64::MIN)
    }
    fn sub(&self, other: &Self) -> Option<Self> {
        self.checked_sub(*other).filter(|v| *v != i64::MIN)
    }
    fn gcd(&self, other: &Self) -> Self {
        Integer::gcd(self, other)
    }
    fn div_exact(&self, other: &Self) -> Self {
        *self / *other
    }
    fn is_unit(&self) -> bool {
        *self == 1 || *self == -1
    }
}

impl ElimInt for BigInt {
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn is_negative(&self) -> bool {
        Signed::is_negative(self)
    }
    fn neg(&self) -> Self {
        -self.clone()
    }
    fn mul(&self, other: &Self) -> Option<Self> {
        Some(self * other)
    }
    fn sub(&self, other: &Self) -> Option<Self> {
        Some(self - other)
    }
    fn gcd(&self, other: &Self) -> Self {
        Integer::gcd(self, other)
    }
    fn div_exact(&self, other: &Self) -> Self {
        self / other
    }
    fn is_unit(&self) -> bool {
        self.abs().is_one()
    }
}

fn normalize_content<T: ElimInt>(row: &mut SparseRow<T>) {
    let Some((_, first)) = row.first() else {
        return;
    };
    let mut g = first.gcd(first);
    for (_, v) in row.iter().skip(1) {
        if g.is_unit() {
            break;
        }
        g = g.gcd(v);
    }
    if first.is_negative() {
        g = g.neg();
    }
    if !(g.is_unit() && !g.is_negative()) {
        for (_, v) in row.iter_mut() {
            *v = v.div_exact(&g);
        }
    }
}

/// `row <- row * pc - pivot * rc` where the leads cancel.
fn eliminate<T: ElimInt>(row: &SparseRow<T>, pivot: &SparseRow<T>) -> Option<SparseRow<T>> {
    let lead_r = &row[0].1;
    let lead_p = &pivot[0].1;
    let g = lead_r.gcd(lead_p);
    let rc = lead_r.div_exact(&g);
    let pc = lead_p.div_exact(&g);
    let mut out = Vec::with_capacity(row.len() + pivot.len());
    let (mut i, mut j) = (1, 1);
    while i < row.len() || j < pivot.len() {
        let ci = row.get(i).map(|e| e.0).unwrap_or(usize::MAX);
        let cj = pivot.get(j).map(|e| e.0).unwrap_or(usize::MAX);
        if ci < cj {
            out.push((ci, row[i].1.mul(&pc)?));
            i += 1;
        } else if cj < ci {
            out.push((cj, pivot[j].1.mul(&rc)?.neg()));
            j += 1;
        } else {
            let v = row[i].1.mul(&pc)?.sub(&pivot[j].1.mul(&rc)?)?;
            if !v.is_zero() {
                out.push((ci, v));
            }
            i += 1;
            j += 1;
        }
    }
    normalize_content(&mut out);
    Some(out)
}

fn echelon_rank<T: ElimInt>(rows: impl Iterator<Item = SparseRow<T>>) -> Option<usize> {
    let mut pivots: HashMap<usize, SparseRow<T>> = HashMap::new();
    for mut row in rows {
        normalize_content(&mut row);
        while let Some(&(lead, _)) = row.first() {
            match pivots.get(&lead) {
                Some(p) => row = eliminate(&row, p)?,
                None => {
                    pivots.insert(lead, row);
                    break;
                }
            }
        }
    }
    Some(pivots.len())
}

/// Rank of a set of sparse integer rows.
pub fn rank_integer_rows(rows: &[SparseRow<BigInt>]) -> usize {
    let small: Option<Vec<SparseRow<i64>>> = rows
        .iter()
        .map(|r| {
            r.iter()
                .map(|(c, v)| v.to_i64().filter(|v| *v != i64::MIN).map(|v| (*c, v)))
                .collect::<Option<Vec<_>>>()
        })
        .collect();
    if let Some(small) = small {
        if let Some(rank) = echelon_rank(small.into_iter()) {
            return rank;
        }
    }
    echelon_rank(rows.iter().cloned()).expect("bigint elimination cannot overflow")
}

/// Multiplies a rational row by the lcm of its denominators.
pub fn clear_denominators(row: &SparseRow<BigRational>) -> SparseRow<BigInt> {
    let lcm = row
        .iter()
        .fold(BigInt::one(), |acc, (_, v)| acc.lcm(v.denom()));
    row.iter()
        .filter(|(_, v)| !v.is_zero())
        .map(|(c, v)| (*c, v.numer() * (&lcm / v.denom())))
        .collect()
}

/// Rank of a set of sparse rational rows.
pub fn rank_rational_rows(rows: &[SparseRow<BigRational>]) -> usize {
    let ints: Vec<_> = rows.iter().map(clear_denominators).collect();
    rank_integer_rows(&ints)
}

/// Dense rational matrix, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigRational>,
}

impl RationalMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![BigRational::zero(); rows * cols],
        }
    }

    /// Builds the matrix whose columns are the given vectors (all of length `rows`).
    pub fn from_columns(rows: usize, columns: &[Vec<BigRational>]) -> Self {
        let mut m = Self::zeros(rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows, "column {j} has wrong length");
            for (i, v) in col.iter().enumerate() {
                m[(i, j)] = v.clone();
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Reduced row echelon form and the pivot columns.
    pub fn rref(&self) -> (RationalMatrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m[(i, c)].is_zero()) else {
                continue;
            };
            m.swap_rows(r, p);
            let inv = m[(r, c)].recip();
            for j in c..m.cols {
                let v = &m[(r, j)] * &inv;
                m[(r, j)] = v;
            }
            for i in 0..m.rows {
                if i == r || m[(i, c)].is_zero() {
                    continue;
                }
                let factor = m[(i, c)].clone();
                for j in c..m.cols {
                    let v = &m[(i, j)] - &factor * &m[(r, j)];
                    m[(i, j)] = v;
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the right kernel `{v : M v = 0}`, one vector per free column,
    /// with a 1 in that free column.
    pub fn kernel_basis(&self) -> Vec<Vec<BigRational>> {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![BigRational::zero(); self.cols];
                v[f] = BigRational::one();
                for (row, &p) in pivots.iter().enumerate() {
                    v[p] = -r[(row, f)].clone();
                }
                v
            })
            .collect()
    }

    pub fn mul_vec(&self, v: &[BigRational]) -> Vec<BigRational> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                (0..self.cols).fold(BigRational::zero(), |acc, j| acc + &self[(i, j)] * &v[j])
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
}

impl std::ops::Index<(usize, usize)> for RationalMatrix {
    type Output = BigRational;
    fn index(&self, (i, j): (usize, usize)) -> &BigRational {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for RationalMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigRational {
        &mut self.data[i * self.cols + j]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::big;

    fn int_rows(rows: &[&[i64]]) -> Vec<SparseRow<BigInt>> {
        rows.iter()
            .map(|r| {
                r.iter()
                    .enumerate()
                    .filter(|(_, v)| **v != 0)
                    .map(|(c, v)| (c, BigInt::from(*v)))
                    .collect()
            })
            .collect()
    }

    #[test]
    fn sparse_rank_small() {
        assert_eq!(rank_integer_rows(&int_rows(&[&[1, 2], &[2, 4]])), 1);
        assert_eq!(rank_integer_rows(&int_rows(&[&[1, 2, 0], &[0, 1, 1], &[1, 3, 1]])), 2);
        assert_eq!(rank_integer_rows(&int_rows(&[&[0, 0], &[0, 0]])), 0);
        assert_eq!(rank_integer_rows(&[]), 0);
    }

    #[test]
    fn overflow_falls_back_to_bigint() {
        let huge = i64::MAX / 3;
        let rows = int_rows(&[&[huge, 7, 1], &[7, huge, 1], &[1, 1, huge]]);
        assert_eq!(rank_integer_rows(&rows), 3);
        let dependent = int_rows(&[&[huge, huge - 1], &[huge - 1, huge - 2]]);
        // det = huge*(huge-2) - (huge-1)^2 = -1
        assert_eq!(rank_integer_rows(&dependent), 2);
    }

    #[test]
    fn dense_kernel() {
        let m = RationalMatrix::from_columns(
            2,
            &[vec![big(1), big(0)], vec![big(0), big(1)], vec![big(0), big(2)]],
        );
        assert_eq!(m.rank(), 2);
        let k = m.kernel_basis();
        assert_eq!(k, vec![vec![big(0), big(-2), big(1)]]);
        assert!(m.mul_vec(&k[0]).iter().all(Zero::is_zero));
    }

    #[test]
    fn rational_rows_clear_denominators() {
        let half = BigRational::new(1.into(), 2.into());
        let rows = vec![vec![(0, half.clone()), (1, big(1))], vec![(0, big(1)), (1, big(2))]];
        assert_eq!(rank_rational_rows(&rows), 1);
    }
}
