//! Dense exact rational matrices.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::rational::{self, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Rational>,
}

impl RationalMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            entries: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Rational::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::InvalidParameter("ragged matrix rows".into()));
        }
        Ok(Self {
            rows: r,
            cols: c,
            entries: rows.into_iter().flatten().collect(),
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.entries[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, value: Rational) {
        self.entries[i * self.cols + j] = value;
    }

    #[inline]
    pub fn add_to(&mut self, i: usize, j: usize, value: &Rational) {
        self.entries[i * self.cols + j] += value;
    }

    pub fn entries(&self) -> &[Rational] {
        &self.entries
    }

    pub fn row_vec(&self, i: usize) -> &[Rational] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<Rational>> {
        (0..self.rows).map(|i| self.row_vec(i).to_vec()).collect()
    }

    /// Exact product. Both operands are scaled to integer matrices over
    /// their common denominators, multiplied, and reduced once per entry.
    pub fn mul(&self, other: &RationalMatrix) -> Result<RationalMatrix> {
        if self.cols != other.rows {
            return Err(Error::OrderMismatch {
                left: self.cols,
                right: other.rows,
            });
        }
        let (an, ad) = rational::common_denominator(&self.entries);
        let (bn, bd) = rational::common_denominator(&other.entries);
        let d = ad * bd;
        let (r, c, inner) = (self.rows, other.cols, self.cols);
        let mut entries = Vec::with_capacity(r * c);
        let mut acc = vec![BigInt::zero(); c];
        for i in 0..r {
            acc.iter_mut().for_each(|v| v.set_zero());
            for t in 0..inner {
                let a = &an[i * inner + t];
                if a.is_zero() {
                    continue;
                }
                for (j, slot) in acc.iter_mut().enumerate() {
                    let b = &bn[t * c + j];
                    if !b.is_zero() {
                        *slot += a * b;
                    }
                }
            }
            entries.extend(acc.iter().map(|v| Rational::new(v.clone(), d.clone())));
        }
        Ok(RationalMatrix {
            rows: r,
            cols: c,
            entries,
        })
    }

    /// Rank by exact Gaussian elimination.
    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        let mut rank = 0;
        for col in 0..m.cols {
            let Some(pivot) = (rank..m.rows).find(|&r| !m.get(r, col).is_zero()) else {
                continue;
            };
            m.swap_rows(rank, pivot);
            let p = m.get(rank, col).clone();
            for r in rank + 1..m.rows {
                if m.get(r, col).is_zero() {
                    continue;
                }
                let factor = m.get(r, col) / &p;
                for c in col..m.cols {
                    let delta = &factor * m.get(rank, c);
                    m.entries[r * m.cols + c] -= delta;
                }
            }
            rank += 1;
            if rank == m.rows {
                break;
            }
        }
        rank
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.entries.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    /// Largest numerator or denominator bit length over all entries.
    pub fn max_bits(&self) -> u64 {
        self.entries.iter().map(rational::bit_size).max().unwrap_or(0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    fn m(rows: &[&[i64]]) -> RationalMatrix {
        RationalMatrix::from_rows(rows.iter().map(|r| r.iter().map(|&v| int(v)).collect()).collect())
            .unwrap()
    }

    #[test]
    fn product_matches_hand_computation() {
        let a = m(&[&[1, 2], &[3, 4]]);
        let b = m(&[&[0, 1], &[1, 0]]);
        assert_eq!(a.mul(&b).unwrap(), m(&[&[2, 1], &[4, 3]]));
        let h = RationalMatrix::from_rows(vec![
            vec![ratio(3, 4), ratio(1, 4)],
            vec![ratio(1, 4), ratio(3, 4)],
        ])
        .unwrap();
        let h2 = h.mul(&h).unwrap();
        assert_eq!(h2.get(0, 0), &ratio(5, 8));
        assert_eq!(h2.get(0, 1), &ratio(3, 8));
        assert!(a.mul(&m(&[&[1, 2, 3]])).is_err());
    }

    #[test]
    fn rank_examples() {
        assert_eq!(m(&[&[1, 2], &[2, 4]]).rank(), 1);
        assert_eq!(m(&[&[0, 1], &[1, 0]]).rank(), 2);
        assert_eq!(m(&[&[0, 0], &[0, 0]]).rank(), 0);
        assert_eq!(m(&[&[1, 0], &[0, 1], &[1, 1]]).rank(), 2);
        assert_eq!(m(&[&[1, 2, 3], &[4, 5, 6], &[7, 8, 9]]).rank(), 2);
        assert_eq!(RationalMatrix::identity(5).rank(), 5);
    }
}
