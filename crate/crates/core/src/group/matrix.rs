use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{CurvError, Result};

/// Square integer matrix with arbitrary-precision entries, row-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IntMatrix {
    dim: usize,
    entries: Vec<BigInt>,
}

impl IntMatrix {
    pub fn identity(dim: usize) -> Self {
        let mut entries = vec![BigInt::zero(); dim * dim];
        for i in 0..dim {
            entries[i * dim + i] = BigInt::one();
        }
        IntMatrix { dim, entries }
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Result<Self> {
        let dim = rows.len();
        if dim == 0 || rows.iter().any(|r| r.len() != dim) {
            return Err(CurvError::InvalidGroup("matrix must be square and non-empty".into()));
        }
        let entries = rows.iter().flatten().map(|&x| BigInt::from(x)).collect();
        Ok(IntMatrix { dim, entries })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn at(&self, i: usize, j: usize) -> &BigInt {
        &self.entries[i * self.dim + j]
    }

    pub fn mul(&self, rhs: &IntMatrix) -> IntMatrix {
        let n = self.dim;
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = BigInt::zero();
                for k in 0..n {
                    let a = self.at(i, k);
                    if !a.is_zero() {
                        acc += a * rhs.at(k, j);
                    }
                }
                entries.push(acc);
            }
        }
        IntMatrix { dim: n, entries }
    }

    /// Exact inverse over the rationals; `None` unless it is again integral.
    pub fn inverse(&self) -> Option<IntMatrix> {
        let n = self.dim;
        let mut a: Vec<Vec<BigRational>> = (0..n)
            .map(|i| {
                let mut row: Vec<BigRational> =
                    (0..n).map(|j| BigRational::from_integer(self.at(i, j).clone())).collect();
                row.extend((0..n).map(|j| {
                    if i == j {
                        BigRational::one()
                    } else {
                        BigRational::zero()
                    }
                }));
                row
            })
            .collect();
        for col in 0..n {
            let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
            a.swap(col, pivot);
            let p = a[col][col].clone();
            for x in a[col].iter_mut() {
                *x = &*x / &p;
            }
            for r in 0..n {
                if r != col && !a[r][col].is_zero() {
                    let factor = a[r][col].clone();
                    for c in 0..2 * n {
                        let delta = &factor * &a[col][c];
                        a[r][c] -= delta;
                    }
                }
            }
        }
        let mut entries = Vec::with_capacity(n * n);
        for row in &a {
            for x in &row[n..] {
                if !x.is_integer() {
                    return None;
                }
                entries.push(x.to_integer());
            }
        }
        Some(IntMatrix { dim: n, entries })
    }

    pub fn is_identity(&self) -> bool {
        *self == IntMatrix::identity(self.dim)
    }

    pub fn rows(&self) -> Vec<Vec<BigInt>> {
        self.entries.chunks(self.dim).map(|r| r.to_vec()).collect()
    }

    pub fn render(&self) -> String {
        let rows: Vec<String> = self
            .entries
            .chunks(self.dim)
            .map(|r| {
                let cells: Vec<String> = r.iter().map(|x| x.to_string()).collect();
                format!("[{}]", cells.join(","))
            })
            .collect();
        format!("[{}]", rows.join(","))
    }

    pub fn max_abs_entry(&self) -> BigInt {
        self.entries.iter().map(|x| x.abs()).max().unwrap_or_default()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sl2_generator_inverse() {
        let u = IntMatrix::from_rows(&[vec![1, 1], vec![0, 1]]).unwrap();
        let ui = u.inverse().unwrap();
        assert_eq!(ui, IntMatrix::from_rows(&[vec![1, -1], vec![0, 1]]).unwrap());
        assert!(u.mul(&ui).is_identity());
    }

    #[test]
    fn non_unimodular_has_no_integer_inverse() {
        let m = IntMatrix::from_rows(&[vec![2, 0], vec![0, 1]]).unwrap();
        assert!(m.inverse().is_none());
        let singular = IntMatrix::from_rows(&[vec![1, 2], vec![2, 4]]).unwrap();
        assert!(singular.inverse().is_none());
    }

    #[test]
    fn entries_grow_without_overflow() {
        let u = IntMatrix::from_rows(&[vec![2, 1], vec![1, 1]]).unwrap();
        let mut p = IntMatrix::identity(2);
        for _ in 0..200 {
            p = p.mul(&u);
        }
        assert!(p.max_abs_entry() > BigInt::from(u64::MAX));
        assert!(p.mul(&p.inverse().unwrap()).is_identity());
    }
}
