//! Rank, kernels, images, exact solving and Smith normal form.
//!
//! Over a field everything goes through reduced row echelon form, with a
//! native `u64` path for prime fields. Over ℤ everything goes through a
//! diagonalization `U·M·V = D` with unimodular `U` and `V`.

use crate::error::{Error, Result};
use crate::matrix::ExactMatrix;
use crate::ring::{RingSpec, Scalar};

/// Reduced row echelon form `T·M = R`.
#[derive(Clone, Debug)]
pub struct Rref {
    pub rank: usize,
    pub pivots: Vec<usize>,
    pub reduced: ExactMatrix,
    pub transform: ExactMatrix,
}

fn fp_rref(p: u64, rows: usize, cols: usize, a: &mut [u64], t: &mut [u64]) -> Vec<usize> {
    let inv = |x: u64| -> u64 {
        let (mut r0, mut r1) = (p as i64, x as i64);
        let (mut s0, mut s1) = (0i64, 1i64);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (s0, s1) = (s1, s0 - q * s1);
        }
        s0.rem_euclid(p as i64) as u64
    };
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(pr) = (r..rows).find(|&i| a[i * cols + c] != 0) else {
            continue;
        };
        if pr != r {
            for k in 0..cols {
                a.swap(pr * cols + k, r * cols + k);
            }
            for k in 0..rows {
                t.swap(pr * rows + k, r * rows + k);
            }
        }
        let iv = inv(a[r * cols + c]);
        if iv != 1 {
            for k in 0..cols {
                a[r * cols + k] = a[r * cols + k] * iv % p;
            }
            for k in 0..rows {
                t[r * rows + k] = t[r * rows + k] * iv % p;
            }
        }
        for i in 0..rows {
            if i == r {
                continue;
            }
            let f = a[i * cols + c];
            if f == 0 {
                continue;
            }
            let g = p - f;
            for k in c..cols {
                let v = a[r * cols + k];
                if v != 0 {
                    a[i * cols + k] = (a[i * cols + k] + g * v) % p;
                }
            }
            for k in 0..rows {
                let v = t[r * rows + k];
                if v != 0 {
                    t[i * rows + k] = (t[i * rows + k] + g * v) % p;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

fn to_u64(m: &ExactMatrix) -> Vec<u64> {
    m.data().iter().map(|x| x.as_i64().unwrap() as u64).collect()
}

fn from_u64(ring: RingSpec, rows: usize, cols: usize, v: &[u64]) -> ExactMatrix {
    let mut m = ExactMatrix::zeros(ring, rows, cols);
    for r in 0..rows {
        for c in 0..cols {
            let x = v[r * cols + c];
            if x != 0 {
                m.set(r, c, Scalar::Small(x as i64));
            }
        }
    }
    m
}

/// Reduced row echelon form over a field.
pub fn rref(m: &ExactMatrix) -> Result<Rref> {
    let ring = m.ring();
    let (rows, cols) = m.shape();
    match ring {
        RingSpec::Integers => Err(Error::UnsupportedRing { op: "rref", ring }),
        RingSpec::PrimeField(p) => {
            let mut a = to_u64(m);
            let mut t = vec![0u64; rows * rows];
            for i in 0..rows {
                t[i * rows + i] = 1;
            }
            let pivots = fp_rref(p as u64, rows, cols, &mut a, &mut t);
            Ok(Rref {
                rank: pivots.len(),
                pivots,
                reduced: from_u64(ring, rows, cols, &a),
                transform: from_u64(ring, rows, rows, &t),
            })
        }
        RingSpec::Rationals => {
            let mut a = m.clone();
            let mut t = ExactMatrix::identity(ring, rows);
            let mut pivots = Vec::new();
            let mut r = 0;
            for c in 0..cols {
                if r == rows {
                    break;
                }
                let Some(pr) = (r..rows).find(|&i| !ring.is_zero(a.get(i, c))) else {
                    continue;
                };
                a.swap_rows(pr, r);
                t.swap_rows(pr, r);
                let iv = ring.inv(a.get(r, c)).unwrap();
                a.scale_row(r, &iv);
                t.scale_row(r, &iv);
                for i in 0..rows {
                    if i != r && !ring.is_zero(a.get(i, c)) {
                        let f = ring.neg(a.get(i, c));
                        a.add_row_multiple(i, r, &f);
                        t.add_row_multiple(i, r, &f);
                    }
                }
                pivots.push(c);
                r += 1;
            }
            Ok(Rref {
                rank: pivots.len(),
                pivots,
                reduced: a,
                transform: t,
            })
        }
    }
}

/// `U·M·V = D` with `D` diagonal; `U`, `V` invertible over the ring.
#[derive(Clone, Debug)]
pub struct Diagonalization {
    pub rank: usize,
    /// The nonzero diagonal entries; over ℤ positive with a divisibility chain.
    pub diag: Vec<Scalar>,
    pub u: ExactMatrix,
    pub u_inv: ExactMatrix,
    pub v: ExactMatrix,
    pub v_inv: ExactMatrix,
}

struct Ops {
    a: ExactMatrix,
    u: ExactMatrix,
    u_inv: ExactMatrix,
    v: ExactMatrix,
    v_inv: ExactMatrix,
}

impl Ops {
    fn ring(&self) -> RingSpec {
        self.a.ring()
    }

    // row i += s row j
    fn row_add(&mut self, i: usize, j: usize, s: &Scalar) {
        let ring = self.ring();
        self.a.add_row_multiple(i, j, s);
        self.u.add_row_multiple(i, j, s);
        self.u_inv.add_col_multiple(j, i, &ring.neg(s));
    }

    fn row_swap(&mut self, i: usize, j: usize) {
        self.a.swap_rows(i, j);
        self.u.swap_rows(i, j);
        self.u_inv.swap_cols(i, j);
    }

    // row i *= s, s a unit
    fn row_scale(&mut self, i: usize, s: &Scalar) {
        let ring = self.ring();
        let si = ring.inv(s).unwrap();
        self.a.scale_row(i, s);
        self.u.scale_row(i, s);
        self.u_inv.scale_col(i, &si);
    }

    // col j += s col i
    fn col_add(&mut self, j: usize, i: usize, s: &Scalar) {
        let ring = self.ring();
        self.a.add_col_multiple(j, i, s);
        self.v.add_col_multiple(j, i, s);
        self.v_inv.add_row_multiple(i, j, &ring.neg(s));
    }

    fn col_swap(&mut self, i: usize, j: usize) {
        self.a.swap_cols(i, j);
        self.v.swap_cols(i, j);
        self.v_inv.swap_rows(i, j);
    }
}

/// Diagonalizes any matrix by invertible row and column operations.
pub fn diagonalize(m: &ExactMatrix) -> Diagonalization {
    let ring = m.ring();
    let (rows, cols) = m.shape();
    let mut o = Ops {
        a: m.clone(),
        u: ExactMatrix::identity(ring, rows),
        u_inv: ExactMatrix::identity(ring, rows),
        v: ExactMatrix::identity(ring, cols),
        v_inv: ExactMatrix::identity(ring, cols),
    };
    let mut t = 0;
    while t < rows.min(cols) {
        // pivot: smallest absolute value over ℤ, first nonzero over a field
        let mut best: Option<(usize, usize)> = None;
        'search: for i in t..rows {
            for j in t..cols {
                let x = o.a.get(i, j);
                if ring.is_zero(x) {
                    continue;
                }
                match best {
                    None => best = Some((i, j)),
                    Some((bi, bj)) => {
                        if ring.cmp_abs(x, o.a.get(bi, bj)).is_lt() {
                            best = Some((i, j));
                        }
                    }
                }
                if ring.is_field() || ring.is_unit(x) {
                    break 'search;
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        o.row_swap(t, pi);
        o.col_swap(t, pj);
        loop {
            if ring.is_field() {
                let iv = ring.inv(o.a.get(t, t)).unwrap();
                if !ring.is_one(&iv) {
                    o.row_scale(t, &iv);
                }
            }
            let mut clean = true;
            for i in t + 1..rows {
                let x = o.a.get(i, t).clone();
                if ring.is_zero(&x) {
                    continue;
                }
                let q = quotient(ring, &x, o.a.get(t, t));
                o.row_add(i, t, &ring.neg(&q));
                if !ring.is_zero(o.a.get(i, t)) {
                    clean = false;
                }
            }
            for j in t + 1..cols {
                let x = o.a.get(t, j).clone();
                if ring.is_zero(&x) {
                    continue;
                }
                let q = quotient(ring, &x, o.a.get(t, t));
                o.col_add(j, t, &ring.neg(&q));
                if !ring.is_zero(o.a.get(t, j)) {
                    clean = false;
                }
            }
            if !clean {
                // a smaller remainder appeared in row t or column t
                let mut best = (t, t);
                for i in t + 1..rows {
                    let x = o.a.get(i, t);
                    if !ring.is_zero(x) && ring.cmp_abs(x, o.a.get(best.0, best.1)).is_lt() {
                        best = (i, t);
                    }
                }
                for j in t + 1..cols {
                    let x = o.a.get(t, j);
                    if !ring.is_zero(x) && ring.cmp_abs(x, o.a.get(best.0, best.1)).is_lt() {
                        best = (t, j);
                    }
                }
                o.row_swap(t, best.0);
                o.col_swap(t, best.1);
                continue;
            }
            if ring == RingSpec::Integers {
                let piv = o.a.get(t, t).clone();
                let bad = (t + 1..rows)
                    .find(|&i| (t + 1..cols).any(|j| ring.div_exact(o.a.get(i, j), &piv).is_none()));
                if let Some(i) = bad {
                    o.row_add(t, i, &ring.one());
                    continue;
                }
            }
            break;
        }
        if ring.is_negative(o.a.get(t, t)) {
            o.row_scale(t, &ring.from_i64(-1));
        }
        t += 1;
    }
    let diag = (0..t).map(|i| o.a.get(i, i).clone()).collect();
    Diagonalization {
        rank: t,
        diag,
        u: o.u,
        u_inv: o.u_inv,
        v: o.v,
        v_inv: o.v_inv,
    }
}

fn quotient(ring: RingSpec, a: &Scalar, b: &Scalar) -> Scalar {
    if ring.is_field() {
        ring.div_exact(a, b).unwrap()
    } else {
        ring.div_floor_euclid(a, b)
    }
}

/// Smith normal form over ℤ.
#[derive(Clone, Debug)]
pub struct SnfResult {
    pub u: ExactMatrix,
    pub d: ExactMatrix,
    pub v: ExactMatrix,
    pub u_inv: ExactMatrix,
    pub v_inv: ExactMatrix,
    pub invariant_factors: Vec<Scalar>,
}

pub fn smith_normal_form(m: &ExactMatrix) -> Result<SnfResult> {
    if m.ring() != RingSpec::Integers {
        return Err(Error::UnsupportedRing {
            op: "smith_normal_form",
            ring: m.ring(),
        });
    }
    let dg = diagonalize(m);
    let mut d = ExactMatrix::zeros(m.ring(), m.rows(), m.cols());
    for (i, x) in dg.diag.iter().enumerate() {
        d.set(i, i, x.clone());
    }
    Ok(SnfResult {
        u: dg.u,
        d,
        v: dg.v,
        u_inv: dg.u_inv,
        v_inv: dg.v_inv,
        invariant_factors: dg.diag,
    })
}

pub fn rank(m: &ExactMatrix) -> usize {
    if m.rows() == 0 || m.cols() == 0 {
        return 0;
    }
    match m.ring() {
        RingSpec::PrimeField(p) => {
            let mut a = to_u64(m);
            fp_rank_only(p as u64, m.rows(), m.cols(), &mut a)
        }
        RingSpec::Rationals => rref(m).unwrap().rank,
        RingSpec::Integers => {
            // rank over ℤ equals rank over ℚ
            rref(&m.change_ring(RingSpec::Rationals).unwrap()).unwrap().rank
        }
    }
}

fn fp_rank_only(p: u64, rows: usize, cols: usize, a: &mut [u64]) -> usize {
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(pr) = (r..rows).find(|&i| a[i * cols + c] != 0) else {
            continue;
        };
        if pr != r {
            for k in 0..cols {
                a.swap(pr * cols + k, r * cols + k);
            }
        }
        let piv = a[r * cols + c];
        for i in r + 1..rows {
            let f = a[i * cols + c];
            if f == 0 {
                continue;
            }
            // row_i = piv * row_i - f * row_r
            for k in c..cols {
                a[i * cols + k] = (piv * a[i * cols + k] + (p - f) * a[r * cols + k]) % p;
            }
        }
        r += 1;
    }
    r
}

/// Kernel basis as the columns of a `cols × k` matrix.
///
/// Fields: one vector per free column of the echelon form. ℤ: the trailing
/// columns of `V`, a ℤ-basis of the kernel.
pub fn kernel(m: &ExactMatrix) -> ExactMatrix {
    let ring = m.ring();
    let n = m.cols();
    if m.rows() == 0 {
        return ExactMatrix::identity(ring, n);
    }
    if ring.is_field() {
        let r = rref(m).unwrap();
        let free: Vec<usize> = (0..n).filter(|c| !r.pivots.contains(c)).collect();
        let mut k = ExactMatrix::zeros(ring, n, free.len());
        for (j, &f) in free.iter().enumerate() {
            k.set(f, j, ring.one());
            for (row, &pc) in r.pivots.iter().enumerate() {
                let x = r.reduced.get(row, f);
                if !ring.is_zero(x) {
                    k.set(pc, j, ring.neg(x));
                }
            }
        }
        k
    } else {
        let dg = diagonalize(m);
        let idx: Vec<usize> = (dg.rank..n).collect();
        dg.v.select_columns(&idx)
    }
}

/// Basis of the column space, as columns.
///
/// Fields: the pivot columns of `M`. ℤ: `d_i · (U⁻¹ e_i)`, a ℤ-basis of the
/// image.
pub fn image(m: &ExactMatrix) -> ExactMatrix {
    let ring = m.ring();
    if m.rows() == 0 || m.cols() == 0 {
        return ExactMatrix::zeros(ring, m.rows(), 0);
    }
    if ring.is_field() {
        let r = rref(m).unwrap();
        m.select_columns(&r.pivots)
    } else {
        let dg = diagonalize(m);
        let mut out = ExactMatrix::zeros(ring, m.rows(), dg.rank);
        for (i, d) in dg.diag.iter().enumerate() {
            for r in 0..m.rows() {
                out.set(r, i, ring.mul(dg.u_inv.get(r, i), d));
            }
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankKernelImage {
    pub rank: usize,
    pub kernel_basis: Vec<Vec<Scalar>>,
    pub image_basis: Vec<Vec<Scalar>>,
}

pub fn rank_kernel_image(m: &ExactMatrix) -> RankKernelImage {
    let k = kernel(m);
    let im = image(m);
    RankKernelImage {
        rank: im.cols(),
        kernel_basis: k.columns(),
        image_basis: im.columns(),
    }
}

/// A factorization of `A` reused for many right-hand sides.
#[derive(Clone, Debug)]
pub struct Solver {
    ring: RingSpec,
    rows: usize,
    cols: usize,
    kind: SolverKind,
}

#[derive(Clone, Debug)]
enum SolverKind {
    Fp { p: u64, t: Vec<u64>, pivots: Vec<usize> },
    Field { t: ExactMatrix, pivots: Vec<usize> },
    Integer(Diagonalization),
}

impl Solver {
    pub fn new(a: &ExactMatrix) -> Self {
        let ring = a.ring();
        let (rows, cols) = a.shape();
        let kind = match ring {
            RingSpec::PrimeField(p) => {
                let mut m = to_u64(a);
                let mut t = vec![0u64; rows * rows];
                for i in 0..rows {
                    t[i * rows + i] = 1;
                }
                let pivots = fp_rref(p as u64, rows, cols, &mut m, &mut t);
                SolverKind::Fp {
                    p: p as u64,
                    t,
                    pivots,
                }
            }
            RingSpec::Rationals => {
                let r = rref(a).unwrap();
                SolverKind::Field {
                    t: r.transform,
                    pivots: r.pivots,
                }
            }
            RingSpec::Integers => SolverKind::Integer(diagonalize(a)),
        };
        Solver {
            ring,
            rows,
            cols,
            kind,
        }
    }

    pub fn rank(&self) -> usize {
        match &self.kind {
            SolverKind::Fp { pivots, .. } | SolverKind::Field { pivots, .. } => pivots.len(),
            SolverKind::Integer(d) => d.rank,
        }
    }

    /// Some `x` with `A·x = b`, or `None`.
    pub fn solve(&self, b: &[Scalar]) -> Option<Vec<Scalar>> {
        assert_eq!(b.len(), self.rows, "right-hand side length");
        let ring = self.ring;
        match &self.kind {
            SolverKind::Fp { p, t, pivots } => {
                let bb: Vec<u64> = b.iter().map(|x| x.as_i64().unwrap() as u64).collect();
                let n = self.rows;
                let mut c = vec![0u64; n];
                for i in 0..n {
                    let mut acc = 0u64;
                    for k in 0..n {
                        let tv = t[i * n + k];
                        if tv != 0 && bb[k] != 0 {
                            acc = (acc + tv * bb[k]) % p;
                        }
                    }
                    c[i] = acc;
                }
                if c[pivots.len()..].iter().any(|&x| x != 0) {
                    return None;
                }
                let mut x = vec![Scalar::Small(0); self.cols];
                for (k, &pc) in pivots.iter().enumerate() {
                    x[pc] = Scalar::Small(c[k] as i64);
                }
                Some(x)
            }
            SolverKind::Field { t, pivots } => {
                let c = t.mul_vec(b);
                if c[pivots.len()..].iter().any(|x| !ring.is_zero(x)) {
                    return None;
                }
                let mut x = vec![ring.zero(); self.cols];
                for (k, &pc) in pivots.iter().enumerate() {
                    x[pc] = c[k].clone();
                }
                Some(x)
            }
            SolverKind::Integer(dg) => {
                let c = dg.u.mul_vec(b);
                if c[dg.rank..].iter().any(|x| !ring.is_zero(x)) {
                    return None;
                }
                let mut y = vec![ring.zero(); self.cols];
                for i in 0..dg.rank {
                    y[i] = ring.div_exact(&c[i], &dg.diag[i])?;
                }
                Some(dg.v.mul_vec(&y))
            }
        }
    }

    /// Solves `A·X = B` column by column.
    pub fn solve_matrix(&self, b: &ExactMatrix) -> Option<ExactMatrix> {
        let mut out = ExactMatrix::zeros(self.ring, self.cols, b.cols());
        for j in 0..b.cols() {
            let x = self.solve(&b.column(j))?;
            for (i, v) in x.into_iter().enumerate() {
                out.set(i, j, v);
            }
        }
        Some(out)
    }
}

pub fn solve_exact(a: &ExactMatrix, b: &[Scalar]) -> Option<Vec<Scalar>> {
    Solver::new(a).solve(b)
}

/// Whether `M` is onto its target (over ℤ: every invariant factor is 1).
pub fn is_surjective(m: &ExactMatrix) -> bool {
    if m.rows() == 0 {
        return true;
    }
    if m.ring().is_field() {
        rank(m) == m.rows()
    } else {
        let dg = diagonalize(m);
        dg.rank == m.rows() && dg.diag.iter().all(|d| m.ring().is_one(d))
    }
}

pub fn is_injective(m: &ExactMatrix) -> bool {
    rank(m) == m.cols()
}

/// Two-sided inverse over the ring, if one exists.
pub fn inverse(m: &ExactMatrix) -> Option<ExactMatrix> {
    if m.rows() != m.cols() {
        return None;
    }
    let ring = m.ring();
    if ring.is_field() {
        let r = rref(m).unwrap();
        (r.rank == m.rows()).then_some(r.transform)
    } else {
        let dg = diagonalize(m);
        if dg.rank != m.rows() || !dg.diag.iter().all(|d| ring.is_one(d)) {
            return None;
        }
        // U M V = I, so M⁻¹ = V U
        Some(dg.v.mul(&dg.u))
    }
}

/// Presentation of `T/S` for free submodules `S ⊆ T` of an ambient module.
#[derive(Clone, Debug)]
pub struct Quotient {
    /// Ambient coordinates of the quotient basis representatives.
    pub reps: ExactMatrix,
    sup: Solver,
    proj: ExactMatrix,
}

impl Quotient {
    /// `sup` spans `T` by independent columns, `sub` spans `S ⊆ T`.
    /// Returns `None` when `T/S` has torsion.
    pub fn new(sup: &ExactMatrix, sub: &ExactMatrix) -> Option<Self> {
        let ring = sup.ring();
        let solver = Solver::new(sup);
        let coords = solver
            .solve_matrix(sub)
            .expect("subspace not contained in superspace");
        let m = sup.cols();
        if coords.cols() == 0 || m == 0 {
            return Some(Quotient {
                reps: sup.clone(),
                sup: solver,
                proj: ExactMatrix::identity(ring, m),
            });
        }
        let dg = diagonalize(&coords);
        if dg.diag.iter().any(|d| !ring.is_unit(d)) {
            return None;
        }
        let idx: Vec<usize> = (dg.rank..m).collect();
        let reps = sup.mul(&dg.u_inv.select_columns(&idx));
        let proj = dg.u.select_rows(&idx);
        Some(Quotient {
            reps,
            sup: solver,
            proj,
        })
    }

    pub fn dim(&self) -> usize {
        self.reps.cols()
    }

    /// Quotient coordinates of an ambient vector lying in `T`.
    pub fn project(&self, v: &[Scalar]) -> Option<Vec<Scalar>> {
        let y = self.sup.solve(v)?;
        Some(self.proj.mul_vec(&y))
    }

    pub fn project_matrix(&self, m: &ExactMatrix) -> Option<ExactMatrix> {
        let y = self.sup.solve_matrix(m)?;
        Some(self.proj.mul(&y))
    }
}

/// Basis of the sum of two column spans (fields only).
pub fn span_sum(a: &ExactMatrix, b: &ExactMatrix) -> ExactMatrix {
    let m = ExactMatrix::hstack(a.ring(), a.rows(), &[a, b]);
    image(&m)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(rows: &[Vec<i64>]) -> ExactMatrix {
        ExactMatrix::from_i64_rows(RingSpec::Integers, rows)
    }

    #[test]
    fn snf_small() {
        let m = z(&[vec![2, 4], vec![6, 8]]);
        let s = smith_normal_form(&m).unwrap();
        assert_eq!(s.invariant_factors, vec![Scalar::Small(2), Scalar::Small(4)]);
        assert_eq!(s.u.mul(&m).mul(&s.v), s.d);
        assert!(s.u.mul(&s.u_inv).is_identity());
        assert!(s.v_inv.mul(&s.v).is_identity());
    }

    #[test]
    fn snf_rejects_fields() {
        let m = ExactMatrix::identity(RingSpec::Rationals, 2);
        assert!(matches!(
            smith_normal_form(&m),
            Err(Error::UnsupportedRing { .. })
        ));
    }

    #[test]
    fn solve_parity() {
        let a = z(&[vec![2]]);
        assert_eq!(solve_exact(&a, &[Scalar::Small(3)]), None);
        let q = a.change_ring(RingSpec::Rationals).unwrap();
        let x = solve_exact(&q, &[Scalar::Small(3)]).unwrap();
        assert_eq!(x[0].to_string(), "3/2");
    }

    #[test]
    fn kernel_of_ones() {
        for ring in [RingSpec::Rationals, RingSpec::PrimeField(2), RingSpec::Integers] {
            let m = ExactMatrix::from_i64_rows(ring, &[vec![1, 1], vec![1, 1]]);
            let r = rank_kernel_image(&m);
            assert_eq!(r.rank, 1);
            assert_eq!(r.kernel_basis.len(), 1);
            assert!(m.mul_vec(&r.kernel_basis[0]).iter().all(|x| ring.is_zero(x)));
        }
    }

    #[test]
    fn quotient_detects_torsion() {
        let sup = ExactMatrix::identity(RingSpec::Integers, 1);
        let sub = z(&[vec![2]]);
        assert!(Quotient::new(&sup, &sub).is_none());
        let q = Quotient::new(&sup, &ExactMatrix::zeros(RingSpec::Integers, 1, 0)).unwrap();
        assert_eq!(q.dim(), 1);
    }
}
