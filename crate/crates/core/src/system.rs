//! Assembly of linear systems whose unknowns are blocks of matrices.

use std::collections::BTreeMap;

use crate::matrix::ExactMatrix;
use crate::ring::{RingSpec, Scalar};

/// An unknown `rows × cols` matrix stored row-major from `offset`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) struct Block {
    pub offset: usize,
    pub rows: usize,
    pub cols: usize,
}

/// Named unknown blocks laid out one after another.
#[derive(Clone, Debug)]
pub(crate) struct Layout<K: Ord> {
    pub blocks: BTreeMap<K, Block>,
    pub total: usize,
}

impl<K: Ord + Clone> Layout<K> {
    pub fn new() -> Self {
        Layout {
            blocks: BTreeMap::new(),
            total: 0,
        }
    }

    pub fn push(&mut self, key: K, rows: usize, cols: usize) {
        if rows == 0 || cols == 0 {
            return;
        }
        self.blocks.insert(
            key,
            Block {
                offset: self.total,
                rows,
                cols,
            },
        );
        self.total += rows * cols;
    }

    pub fn get(&self, key: &K) -> Option<Block> {
        self.blocks.get(key).copied()
    }

    /// Cuts a solution vector back into matrices.
    pub fn unpack(&self, ring: RingSpec, x: &[Scalar]) -> BTreeMap<K, ExactMatrix> {
        let mut out = BTreeMap::new();
        for (k, b) in &self.blocks {
            let mut m = ExactMatrix::zeros(ring, b.rows, b.cols);
            for r in 0..b.rows {
                for c in 0..b.cols {
                    let v = &x[b.offset + r * b.cols + c];
                    if !ring.is_zero(v) {
                        m.set(r, c, v.clone());
                    }
                }
            }
            out.insert(k.clone(), m);
        }
        out
    }
}

/// One summand `coeff · L · X · R` of a matrix equation; `None` means identity.
pub(crate) struct Term<'a> {
    pub left: Option<&'a ExactMatrix>,
    pub block: Block,
    pub right: Option<&'a ExactMatrix>,
    pub coeff: Scalar,
}

/// Rows of a linear map on the unknown vector, with right-hand sides.
pub(crate) struct System {
    ring: RingSpec,
    n: usize,
    keep_zero_rows: bool,
    rows: Vec<Vec<(usize, Scalar)>>,
    rhs: Vec<Scalar>,
}

impl System {
    pub fn new(ring: RingSpec, n: usize) -> Self {
        System {
            ring,
            n,
            keep_zero_rows: false,
            rows: Vec::new(),
            rhs: Vec::new(),
        }
    }

    /// A system whose rows are the matrix of a linear operator, zero rows kept.
    pub fn operator(ring: RingSpec, n: usize) -> Self {
        System {
            ring,
            n,
            keep_zero_rows: true,
            rows: Vec::new(),
            rhs: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    /// Adds the `shape.0 × shape.1` equations `Σ terms = rhs`.
    pub fn add_matrix_equation(
        &mut self,
        shape: (usize, usize),
        terms: &[Term<'_>],
        rhs: Option<&ExactMatrix>,
    ) {
        let ring = self.ring;
        let (nr, nc) = shape;
        if nr == 0 || nc == 0 {
            return;
        }
        // nonzero pattern of each L row and R column
        let lefts: Vec<Vec<Vec<(usize, Scalar)>>> = terms
            .iter()
            .map(|t| match t.left {
                Some(l) => (0..nr)
                    .map(|r| {
                        (0..l.cols())
                            .filter(|&a| !ring.is_zero(l.get(r, a)))
                            .map(|a| (a, l.get(r, a).clone()))
                            .collect()
                    })
                    .collect(),
                None => (0..nr).map(|r| vec![(r, ring.one())]).collect(),
            })
            .collect();
        let rights: Vec<Vec<Vec<(usize, Scalar)>>> = terms
            .iter()
            .map(|t| match t.right {
                Some(rm) => (0..nc)
                    .map(|c| {
                        (0..rm.rows())
                            .filter(|&b| !ring.is_zero(rm.get(b, c)))
                            .map(|b| (b, rm.get(b, c).clone()))
                            .collect()
                    })
                    .collect(),
                None => (0..nc).map(|c| vec![(c, ring.one())]).collect(),
            })
            .collect();
        for r in 0..nr {
            for c in 0..nc {
                let mut acc: BTreeMap<usize, Scalar> = BTreeMap::new();
                for (k, t) in terms.iter().enumerate() {
                    for (a, la) in &lefts[k][r] {
                        let la = ring.mul(la, &t.coeff);
                        for (b, rb) in &rights[k][c] {
                            let idx = t.block.offset + a * t.block.cols + b;
                            let v = ring.mul(&la, rb);
                            let e = acc.entry(idx).or_insert_with(|| ring.zero());
                            *e = ring.add(e, &v);
                        }
                    }
                }
                let row: Vec<(usize, Scalar)> = acc.into_iter().filter(|(_, v)| !ring.is_zero(v)).collect();
                let b = rhs.map_or_else(|| ring.zero(), |m| m.get(r, c).clone());
                if row.is_empty() && ring.is_zero(&b) && !self.keep_zero_rows {
                    continue;
                }
                self.rows.push(row);
                self.rhs.push(b);
            }
        }
    }

    pub fn matrix(&self) -> ExactMatrix {
        let mut m = ExactMatrix::zeros(self.ring, self.rows.len(), self.n);
        for (i, row) in self.rows.iter().enumerate() {
            for (j, v) in row {
                m.set(i, *j, v.clone());
            }
        }
        m
    }

    pub fn rhs(&self) -> &[Scalar] {
        &self.rhs
    }
}
