//! Dense matrices over the ambient field and the little linear algebra the
//! representation spaces need.

use serde::{Deserialize, Serialize};

use crate::gf::{FieldSpec, Scalar};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Mat {
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl Mat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat { rows, cols, data: vec![Scalar::ZERO; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Scalar::ONE;
        }
        m
    }

    pub fn from_rows(rows: usize, cols: usize, data: Vec<Scalar>) -> Self {
        assert_eq!(data.len(), rows * cols);
        Mat { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn data(&self) -> &[Scalar] {
        &self.data
    }

    pub fn row(&self, r: usize) -> &[Scalar] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn mul(&self, f: &FieldSpec, rhs: &Mat) -> Mat {
        assert_eq!(self.cols, rhs.rows, "matrix shapes");
        let mut out = Mat::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let v = f.add(out[(i, j)], f.mul(a, rhs[(k, j)]));
                    out[(i, j)] = v;
                }
            }
        }
        out
    }

    pub fn sub(&self, f: &FieldSpec, rhs: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(&a, &b)| f.sub(a, b)).collect(),
        }
    }

    /// Entrywise `x -> x^(q^k)`.
    pub fn frobenius(&self, f: &FieldSpec, k: u32) -> Mat {
        if k % f.n() == 0 {
            return self.clone();
        }
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&x| f.frobenius(x, k)).collect(),
        }
    }

    /// Reduced row echelon form in place; returns the pivot columns.
    pub fn rref(&mut self, f: &FieldSpec) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(pr) = (r..self.rows).find(|&i| !self[(i, c)].is_zero()) else { continue };
            if pr != r {
                for j in 0..self.cols {
                    self.data.swap(pr * self.cols + j, r * self.cols + j);
                }
            }
            let inv = f.inv(self[(r, c)]).expect("pivot is nonzero");
            for j in 0..self.cols {
                self[(r, j)] = f.mul(self[(r, j)], inv);
            }
            for i in 0..self.rows {
                if i == r {
                    continue;
                }
                let factor = self[(i, c)];
                if factor.is_zero() {
                    continue;
                }
                for j in 0..self.cols {
                    let v = f.sub(self[(i, j)], f.mul(factor, self[(r, j)]));
                    self[(i, j)] = v;
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self, f: &FieldSpec) -> usize {
        self.clone().rref(f).len()
    }

    pub fn inverse(&self, f: &FieldSpec) -> Option<Mat> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        if n == 0 {
            return Some(self.clone());
        }
        let mut aug = Mat::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug[(i, j)] = self[(i, j)];
            }
            aug[(i, n + i)] = Scalar::ONE;
        }
        let pivots = aug.rref(f);
        if pivots.len() < n || pivots[n - 1] >= n {
            return None;
        }
        let mut inv = Mat::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                inv[(i, j)] = aug[(i, n + j)];
            }
        }
        Some(inv)
    }
}

impl std::ops::Index<(usize, usize)> for Mat {
    type Output = Scalar;

    #[inline]
    fn index(&self, (r, c): (usize, usize)) -> &Scalar {
        &self.data[r * self.cols + c]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Mat {
    #[inline]
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Scalar {
        &mut self.data[r * self.cols + c]
    }
}

/// Rank of an integer matrix modulo a prime `p`, given row-major.
pub fn rank_mod_p(mut rows: Vec<Vec<u32>>, p: u32) -> usize {
    let ncols = rows.first().map_or(0, |r| r.len());
    let inv = |a: u32| crate::gf::poly::inv_mod(a, p);
    let mut rank = 0;
    for c in 0..ncols {
        let Some(pr) = (rank..rows.len()).find(|&i| rows[i][c] != 0) else { continue };
        rows.swap(pr, rank);
        let s = inv(rows[rank][c]);
        for x in rows[rank].iter_mut() {
            *x = (*x as u64 * s as u64 % p as u64) as u32;
        }
        let pivot = rows[rank].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == rank || row[c] == 0 {
                continue;
            }
            let factor = row[c];
            for (x, &y) in row.iter_mut().zip(&pivot) {
                *x = ((*x as u64 + (p - factor) as u64 * y as u64) % p as u64) as u32;
            }
        }
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_roundtrip() {
        let f = FieldSpec::new(3, 1, 2).unwrap();
        let m = Mat::from_rows(2, 2, vec![Scalar(1), Scalar(4), Scalar(7), Scalar(2)]);
        if let Some(inv) = m.inverse(&f) {
            assert_eq!(m.mul(&f, &inv), Mat::identity(2));
        } else {
            assert!(m.rank(&f) < 2);
        }
        let sing = Mat::from_rows(2, 2, vec![Scalar(1), Scalar(2), Scalar(2), Scalar(1)]);
        // over F_9 with p = 3: rows (1,2) and (2,1) = 2*(1,2) since 4 = 1 mod 3.
        assert!(sing.inverse(&f).is_none());
    }

    #[test]
    fn rank_mod_p_small() {
        assert_eq!(rank_mod_p(vec![vec![1, 1], vec![1, 1]], 2), 1);
        assert_eq!(rank_mod_p(vec![vec![1, 2], vec![2, 1]], 3), 1);
        assert_eq!(rank_mod_p(vec![vec![1, 2], vec![2, 1]], 5), 2);
        assert_eq!(rank_mod_p(vec![], 5), 0);
    }
}
