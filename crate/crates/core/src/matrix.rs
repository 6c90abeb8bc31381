//! Dense matrices with exact entries.
//!
//! Columns index the source basis and rows the target basis, so `A·B`
//! means "first B, then A".

use std::fmt;

use crate::error::{Error, Result};
use crate::ring::{RingSpec, Scalar};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ExactMatrix {
    ring: RingSpec,
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl fmt::Debug for ExactMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}x{} over {} [", self.rows, self.cols, self.ring)?;
        for r in 0..self.rows {
            if r > 0 {
                write!(f, "; ")?;
            }
            for c in 0..self.cols {
                if c > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", self.get(r, c))?;
            }
        }
        write!(f, "]")
    }
}

impl ExactMatrix {
    pub fn zeros(ring: RingSpec, rows: usize, cols: usize) -> Self {
        ExactMatrix {
            ring,
            rows,
            cols,
            data: vec![Scalar::Small(0); rows * cols],
        }
    }

    pub fn identity(ring: RingSpec, n: usize) -> Self {
        let mut m = Self::zeros(ring, n, n);
        for i in 0..n {
            m.set(i, i, ring.one());
        }
        m
    }

    pub fn scalar(ring: RingSpec, n: usize, s: Scalar) -> Self {
        let mut m = Self::zeros(ring, n, n);
        for i in 0..n {
            m.set(i, i, s.clone());
        }
        m
    }

    /// Builds a matrix from integer rows, reducing into the ring.
    pub fn from_i64_rows(ring: RingSpec, rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        let mut m = Self::zeros(ring, r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged rows");
            for (j, v) in row.iter().enumerate() {
                m.data[i * c + j] = ring.from_i64(*v);
            }
        }
        m
    }

    pub fn from_rows(ring: RingSpec, rows: Vec<Vec<Scalar>>, cols: usize) -> Self {
        let r = rows.len();
        let mut data = Vec::with_capacity(r * cols);
        for row in rows {
            assert_eq!(row.len(), cols, "ragged rows");
            data.extend(row);
        }
        ExactMatrix {
            ring,
            rows: r,
            cols,
            data,
        }
    }

    /// Matrix whose columns are the given vectors, each of length `rows`.
    pub fn from_columns(ring: RingSpec, rows: usize, columns: &[Vec<Scalar>]) -> Self {
        let mut m = Self::zeros(ring, rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows, "column length");
            for (i, v) in col.iter().enumerate() {
                m.data[i * m.cols + j] = v.clone();
            }
        }
        m
    }

    pub fn ring(&self) -> RingSpec {
        self.ring
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn get(&self, r: usize, c: usize) -> &Scalar {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Scalar) {
        self.data[r * self.cols + c] = v;
    }

    pub fn add_at(&mut self, r: usize, c: usize, v: &Scalar) {
        let i = r * self.cols + c;
        self.data[i] = self.ring.add(&self.data[i], v);
    }

    pub fn row(&self, r: usize) -> &[Scalar] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<Scalar> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<Scalar>> {
        (0..self.cols).map(|c| self.column(c)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| self.ring.is_zero(x))
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols && *self == Self::identity(self.ring, self.rows)
    }

    pub fn nonzero_entries(&self) -> impl Iterator<Item = (usize, usize, &Scalar)> + '_ {
        let w = self.cols.max(1);
        self.data
            .iter()
            .enumerate()
            .filter(|(_, v)| !self.ring.is_zero(v))
            .map(move |(k, v)| (k / w, k % w, v))
    }

    pub fn transpose(&self) -> Self {
        let mut m = Self::zeros(self.ring, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                m.data[c * self.rows + r] = self.get(r, c).clone();
            }
        }
        m
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        if self.ring != other.ring {
            return Err(Error::RingMismatch(self.ring, other.ring));
        }
        let ring = self.ring;
        let mut out = Self::zeros(ring, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if ring.is_zero(a) {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if ring.is_zero(b) {
                        continue;
                    }
                    let idx = i * out.cols + j;
                    out.data[idx] = ring.add(&out.data[idx], &ring.mul(a, b));
                }
            }
        }
        Ok(out)
    }

    /// Product; panics on a shape mismatch.
    pub fn mul(&self, other: &Self) -> Self {
        self.try_mul(other).expect("matrix product")
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(v.len(), self.cols, "vector length");
        let ring = self.ring;
        (0..self.rows)
            .map(|i| {
                let mut acc = ring.zero();
                for (a, b) in self.row(i).iter().zip(v) {
                    if !ring.is_zero(a) && !ring.is_zero(b) {
                        acc = ring.add(&acc, &ring.mul(a, b));
                    }
                }
                acc
            })
            .collect()
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.shape(), other.shape(), "matrix sum shape");
        let ring = self.ring;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| ring.add(a, b))
            .collect();
        ExactMatrix {
            ring,
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.scale(&self.ring.from_i64(-1))
    }

    pub fn scale(&self, s: &Scalar) -> Self {
        let ring = self.ring;
        let data = self.data.iter().map(|a| ring.mul(a, s)).collect();
        ExactMatrix {
            ring,
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    /// Kronecker product, index `(i, j) ↦ i·|other| + j`.
    pub fn kron(&self, other: &Self) -> Self {
        let ring = self.ring;
        let mut out = Self::zeros(ring, self.rows * other.rows, self.cols * other.cols);
        for (r1, c1, a) in self.nonzero_entries() {
            for (r2, c2, b) in other.nonzero_entries() {
                out.set(r1 * other.rows + r2, c1 * other.cols + c2, ring.mul(a, b));
            }
        }
        out
    }

    pub fn set_block(&mut self, r0: usize, c0: usize, block: &Self) {
        assert!(
            r0 + block.rows <= self.rows && c0 + block.cols <= self.cols,
            "block bounds"
        );
        for r in 0..block.rows {
            for c in 0..block.cols {
                self.set(r0 + r, c0 + c, block.get(r, c).clone());
            }
        }
    }

    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Self {
        let mut m = Self::zeros(self.ring, rows, cols);
        for r in 0..rows {
            for c in 0..cols {
                m.set(r, c, self.get(r0 + r, c0 + c).clone());
            }
        }
        m
    }

    pub fn select_columns(&self, idx: &[usize]) -> Self {
        let mut m = Self::zeros(self.ring, self.rows, idx.len());
        for (j, &c) in idx.iter().enumerate() {
            for r in 0..self.rows {
                m.set(r, j, self.get(r, c).clone());
            }
        }
        m
    }

    pub fn select_rows(&self, idx: &[usize]) -> Self {
        let mut m = Self::zeros(self.ring, idx.len(), self.cols);
        for (i, &r) in idx.iter().enumerate() {
            for c in 0..self.cols {
                m.set(i, c, self.get(r, c).clone());
            }
        }
        m
    }

    pub fn hstack(ring: RingSpec, rows: usize, parts: &[&Self]) -> Self {
        let cols = parts.iter().map(|m| m.cols).sum();
        let mut out = Self::zeros(ring, rows, cols);
        let mut c0 = 0;
        for m in parts {
            out.set_block(0, c0, m);
            c0 += m.cols;
        }
        out
    }

    pub fn vstack(ring: RingSpec, cols: usize, parts: &[&Self]) -> Self {
        let rows = parts.iter().map(|m| m.rows).sum();
        let mut out = Self::zeros(ring, rows, cols);
        let mut r0 = 0;
        for m in parts {
            out.set_block(r0, 0, m);
            r0 += m.rows;
        }
        out
    }

    /// Block-diagonal sum.
    pub fn direct_sum(&self, other: &Self) -> Self {
        let mut out = Self::zeros(self.ring, self.rows + other.rows, self.cols + other.cols);
        out.set_block(0, 0, self);
        out.set_block(self.rows, self.cols, other);
        out
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for r in 0..self.rows {
            self.data.swap(r * self.cols + a, r * self.cols + b);
        }
    }

    /// `row[dst] += s · row[src]`.
    pub fn add_row_multiple(&mut self, dst: usize, src: usize, s: &Scalar) {
        let ring = self.ring;
        if ring.is_zero(s) {
            return;
        }
        for c in 0..self.cols {
            let v = &self.data[src * self.cols + c];
            if ring.is_zero(v) {
                continue;
            }
            let t = ring.mul(s, v);
            let i = dst * self.cols + c;
            self.data[i] = ring.add(&self.data[i], &t);
        }
    }

    /// `col[dst] += s · col[src]`.
    pub fn add_col_multiple(&mut self, dst: usize, src: usize, s: &Scalar) {
        let ring = self.ring;
        if ring.is_zero(s) {
            return;
        }
        for r in 0..self.rows {
            let v = &self.data[r * self.cols + src];
            if ring.is_zero(v) {
                continue;
            }
            let t = ring.mul(s, v);
            let i = r * self.cols + dst;
            self.data[i] = ring.add(&self.data[i], &t);
        }
    }

    pub fn scale_row(&mut self, r: usize, s: &Scalar) {
        for c in 0..self.cols {
            let i = r * self.cols + c;
            self.data[i] = self.ring.mul(&self.data[i], s);
        }
    }

    pub fn scale_col(&mut self, c: usize, s: &Scalar) {
        for r in 0..self.rows {
            let i = r * self.cols + c;
            self.data[i] = self.ring.mul(&self.data[i], s);
        }
    }

    /// Reinterprets integer entries in another ring (e.g. ℤ → F_p).
    pub fn change_ring(&self, ring: RingSpec) -> Result<Self> {
        let mut data = Vec::with_capacity(self.data.len());
        for v in &self.data {
            let r = v.to_rational();
            data.push(
                ring.from_rational(r)
                    .ok_or_else(|| Error::BadParameter(format!("entry {v} does not lie in {ring}")))?,
            );
        }
        Ok(ExactMatrix {
            ring,
            rows: self.rows,
            cols: self.cols,
            data,
        })
    }

    pub(crate) fn data(&self) -> &[Scalar] {
        &self.data
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn product_and_kron() {
        let z = RingSpec::Integers;
        let a = ExactMatrix::from_i64_rows(z, &[vec![1, 2], vec![3, 4]]);
        let b = ExactMatrix::from_i64_rows(z, &[vec![0, 1], vec![1, 0]]);
        assert_eq!(
            a.mul(&b),
            ExactMatrix::from_i64_rows(z, &[vec![2, 1], vec![4, 3]])
        );
        let k = a.kron(&b);
        assert_eq!(k.shape(), (4, 4));
        assert_eq!(*k.get(1, 0), Scalar::Small(1));
        assert_eq!(*k.get(3, 2), Scalar::Small(4));
        assert!(a.try_mul(&ExactMatrix::zeros(z, 3, 1)).is_err());
    }

    #[test]
    fn transpose_twice() {
        let z = RingSpec::Integers;
        let a = ExactMatrix::from_i64_rows(z, &[vec![1, 2, 3], vec![4, 5, 6]]);
        assert_eq!(a.transpose().transpose(), a);
        assert_eq!(a.transpose().shape(), (3, 2));
    }
}
