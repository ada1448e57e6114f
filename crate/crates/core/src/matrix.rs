//! Dense exact matrices over a coefficient ring.
//!
//! The convention throughout is row vectors acted on from the right: a
//! linear map with an m x n matrix sends a 1 x m row to a 1 x n row. Tensor
//! legs are flattened row-major with the left factor major, so the basis
//! vector e_i (x) e_j of an (a x b)-fold tensor sits at index i*b + j.

use crate::ring::{fmt_coeff, Coeff, CoeffRing};
use num::Zero;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MatrixError {
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("ring mismatch: {0} vs {1}")]
    RingMismatch(CoeffRing, CoeffRing),
    #[error("unsupported ring {0}: {1}")]
    UnsupportedRing(CoeffRing, String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RMatrix {
    ring: CoeffRing,
    rows: usize,
    cols: usize,
    entries: Vec<Coeff>,
}

impl RMatrix {
    pub fn zeros(ring: &CoeffRing, rows: usize, cols: usize) -> Self {
        RMatrix {
            ring: ring.clone(),
            rows,
            cols,
            entries: vec![ring.zero(); rows * cols],
        }
    }

    pub fn identity(ring: &CoeffRing, n: usize) -> Self {
        let mut m = Self::zeros(ring, n, n);
        for i in 0..n {
            m.set(i, i, ring.one());
        }
        m
    }

    pub fn from_fn(ring: &CoeffRing, rows: usize, cols: usize, f: impl Fn(usize, usize) -> Coeff) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                entries.push(ring.normalize(f(r, c)));
            }
        }
        RMatrix { ring: ring.clone(), rows, cols, entries }
    }

    /// Build from integer literals, normalizing into the ring.
    pub fn from_i64_rows(ring: &CoeffRing, rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Self::from_fn(ring, r, c, |i, j| ring.from_i64(rows[i][j]))
    }

    pub fn from_rows(ring: &CoeffRing, rows: Vec<Vec<Coeff>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Self::from_fn(ring, r, c, |i, j| rows[i][j].clone())
    }

    pub fn row_vector(ring: &CoeffRing, entries: Vec<Coeff>) -> Self {
        let cols = entries.len();
        let entries = entries.into_iter().map(|x| ring.normalize(x)).collect();
        RMatrix { ring: ring.clone(), rows: 1, cols, entries }
    }

    pub fn ring(&self) -> &CoeffRing {
        &self.ring
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, r: usize, c: usize) -> &Coeff {
        debug_assert!(r < self.rows && c < self.cols);
        &self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Coeff) {
        debug_assert!(r < self.rows && c < self.cols);
        self.entries[r * self.cols + c] = self.ring.normalize(v);
    }

    pub fn row(&self, r: usize) -> Vec<Coeff> {
        self.entries[r * self.cols..(r + 1) * self.cols].to_vec()
    }

    pub fn row_matrix(&self, r: usize) -> RMatrix {
        RMatrix::row_vector(&self.ring, self.row(r))
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Coeff::is_zero)
    }

    pub fn is_zero_row(&self, r: usize) -> bool {
        (0..self.cols).all(|c| self.at(r, c).is_zero())
    }

    pub fn transpose(&self) -> RMatrix {
        Self::from_fn(&self.ring, self.cols, self.rows, |i, j| self.at(j, i).clone())
    }

    fn check_ring(&self, other: &RMatrix) -> Result<(), MatrixError> {
        if self.ring != other.ring {
            return Err(MatrixError::RingMismatch(self.ring.clone(), other.ring.clone()));
        }
        Ok(())
    }

    pub fn add(&self, other: &RMatrix) -> Result<RMatrix, MatrixError> {
        self.check_ring(other)?;
        if self.rows != other.rows || self.cols != other.cols {
            return Err(MatrixError::ShapeMismatch(format!(
                "{}x{} + {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(Self::from_fn(&self.ring, self.rows, self.cols, |i, j| {
            self.ring.add(self.at(i, j), other.at(i, j))
        }))
    }

    pub fn sub(&self, other: &RMatrix) -> Result<RMatrix, MatrixError> {
        self.check_ring(other)?;
        if self.rows != other.rows || self.cols != other.cols {
            return Err(MatrixError::ShapeMismatch(format!(
                "{}x{} - {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(Self::from_fn(&self.ring, self.rows, self.cols, |i, j| {
            self.ring.sub(self.at(i, j), other.at(i, j))
        }))
    }

    pub fn scale(&self, k: &Coeff) -> RMatrix {
        Self::from_fn(&self.ring, self.rows, self.cols, |i, j| self.ring.mul(self.at(i, j), k))
    }

    pub fn mul(&self, other: &RMatrix) -> Result<RMatrix, MatrixError> {
        self.check_ring(other)?;
        if self.cols != other.rows {
            return Err(MatrixError::ShapeMismatch(format!(
                "{}x{} * {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(&self.ring, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let v = self.ring.add(out.at(i, j), &(a * other.at(k, j)));
                    out.set(i, j, v);
                }
            }
        }
        Ok(out)
    }

    /// Stack rows of `other` below `self`.
    pub fn vstack(&self, other: &RMatrix) -> Result<RMatrix, MatrixError> {
        self.check_ring(other)?;
        if self.cols != other.cols && self.rows != 0 && other.rows != 0 {
            return Err(MatrixError::ShapeMismatch(format!(
                "vstack {}x{} with {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let cols = if self.rows == 0 { other.cols } else { self.cols };
        Ok(Self::from_fn(&self.ring, self.rows + other.rows, cols, |i, j| {
            if i < self.rows {
                self.at(i, j).clone()
            } else {
                other.at(i - self.rows, j).clone()
            }
        }))
    }

    pub fn hstack(&self, other: &RMatrix) -> Result<RMatrix, MatrixError> {
        self.check_ring(other)?;
        if self.rows != other.rows {
            return Err(MatrixError::ShapeMismatch(format!(
                "hstack {}x{} with {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(Self::from_fn(&self.ring, self.rows, self.cols + other.cols, |i, j| {
            if j < self.cols {
                self.at(i, j).clone()
            } else {
                other.at(i, j - self.cols).clone()
            }
        }))
    }

    pub fn submatrix(&self, rows: std::ops::Range<usize>, cols: std::ops::Range<usize>) -> RMatrix {
        Self::from_fn(&self.ring, rows.len(), cols.len(), |i, j| {
            self.at(rows.start + i, cols.start + j).clone()
        })
    }

    /// Drop rows that are entirely zero.
    pub fn drop_zero_rows(&self) -> RMatrix {
        let keep: Vec<usize> = (0..self.rows).filter(|&r| !self.is_zero_row(r)).collect();
        Self::from_fn(&self.ring, keep.len(), self.cols, |i, j| self.at(keep[i], j).clone())
    }

    pub fn neg(&self) -> RMatrix {
        Self::from_fn(&self.ring, self.rows, self.cols, |i, j| self.ring.neg(self.at(i, j)))
    }

    /// Kronecker product with index convention (i*b.rows + k, j*b.cols + l).
    pub fn kronecker(&self, other: &RMatrix) -> Result<RMatrix, MatrixError> {
        self.check_ring(other)?;
        Ok(Self::from_fn(
            &self.ring,
            self.rows * other.rows,
            self.cols * other.cols,
            |r, c| {
                let (i, k) = (r / other.rows, r % other.rows);
                let (j, l) = (c / other.cols, c % other.cols);
                self.ring.mul(self.at(i, j), other.at(k, l))
            },
        ))
    }
}

impl fmt::Display for RMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "[{}x{} over {}]", self.rows, self.cols, self.ring)?;
        for r in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|c| fmt_coeff(self.at(r, c))).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// Flatten a multi-index against factor dimensions, left factor major.
pub fn flatten_index(dims: &[usize], idx: &[usize]) -> usize {
    debug_assert_eq!(dims.len(), idx.len());
    let mut out = 0;
    for (d, i) in dims.iter().zip(idx) {
        debug_assert!(i < d);
        out = out * d + i;
    }
    out
}

/// Inverse of `flatten_index`.
pub fn unflatten_index(dims: &[usize], mut flat: usize) -> Vec<usize> {
    let mut idx = vec![0; dims.len()];
    for k in (0..dims.len()).rev() {
        idx[k] = flat % dims[k];
        flat /= dims[k];
    }
    idx
}

/// Matrix of the tensor-leg shuffle sending factor j to position `dest[j]`.
///
/// For dims [d1..dk] this is the permutation isomorphism of the k-fold
/// tensor product; `dest` must be a permutation of 0..k.
pub fn tensor_shuffle(ring: &CoeffRing, dims: &[usize], dest: &[usize]) -> RMatrix {
    assert_eq!(dims.len(), dest.len());
    let total: usize = dims.iter().product();
    let mut out_dims = vec![0usize; dims.len()];
    for (j, &d) in dest.iter().enumerate() {
        out_dims[d] = dims[j];
    }
    let mut m = RMatrix::zeros(ring, total, total);
    for flat in 0..total {
        let idx = unflatten_index(dims, flat);
        let mut out_idx = vec![0usize; dims.len()];
        for (j, &d) in dest.iter().enumerate() {
            out_idx[d] = idx[j];
        }
        m.set(flat, flatten_index(&out_dims, &out_idx), ring.one());
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z() -> CoeffRing {
        CoeffRing::integers()
    }

    #[test]
    fn kronecker_identity_left() {
        let ring = z();
        let b = RMatrix::from_i64_rows(&ring, &[vec![1, 2], vec![3, 4]]);
        let one = RMatrix::identity(&ring, 1);
        assert_eq!(one.kronecker(&b).unwrap(), b);
    }

    #[test]
    fn kronecker_scalars_and_diag() {
        let ring = z();
        let a = RMatrix::from_i64_rows(&ring, &[vec![2]]);
        let b = RMatrix::from_i64_rows(&ring, &[vec![3]]);
        assert_eq!(a.kronecker(&b).unwrap(), RMatrix::from_i64_rows(&ring, &[vec![6]]));

        let a = RMatrix::from_i64_rows(&ring, &[vec![1, 0], vec![0, 2]]);
        let b = RMatrix::from_i64_rows(&ring, &[vec![1, 0], vec![0, 3]]);
        let expect = RMatrix::from_i64_rows(&ring, &[
            vec![1, 0, 0, 0],
            vec![0, 3, 0, 0],
            vec![0, 0, 2, 0],
            vec![0, 0, 0, 6],
        ]);
        assert_eq!(a.kronecker(&b).unwrap(), expect);
    }

    #[test]
    fn kronecker_mixed_product() {
        let ring = z();
        let a = RMatrix::from_i64_rows(&ring, &[vec![1, 2], vec![0, 1]]);
        let b = RMatrix::from_i64_rows(&ring, &[vec![2, 1], vec![1, 1]]);
        let c = RMatrix::from_i64_rows(&ring, &[vec![1, 1], vec![2, 0]]);
        let d = RMatrix::from_i64_rows(&ring, &[vec![0, 1], vec![1, 3]]);
        let lhs = a.kronecker(&b).unwrap().mul(&c.kronecker(&d).unwrap()).unwrap();
        let rhs = a.mul(&c).unwrap().kronecker(&b.mul(&d).unwrap()).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn shuffle_swap_is_involution() {
        let ring = z();
        let tau = tensor_shuffle(&ring, &[2, 3], &[1, 0]);
        let tau_back = tensor_shuffle(&ring, &[3, 2], &[1, 0]);
        assert_eq!(tau.mul(&tau_back).unwrap(), RMatrix::identity(&ring, 6));
        // e_{(1,2)} at 1*3+2=5 maps to e_{(2,1)} at 2*2+1=5 in the 3x2 order.
        assert_eq!(tau.at(5, 5), &ring.one());
        // e_{(0,1)} at 1 maps to e_{(1,0)} at 1*2+0=2.
        assert_eq!(tau.at(1, 2), &ring.one());
    }

    #[test]
    fn empty_shapes() {
        let ring = z();
        let e = RMatrix::zeros(&ring, 0, 3);
        let m = RMatrix::from_i64_rows(&ring, &[vec![1, 2, 3]]);
        assert_eq!(e.vstack(&m).unwrap().rows(), 1);
        assert!(e.is_zero());
    }
}
