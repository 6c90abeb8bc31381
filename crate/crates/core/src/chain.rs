//! Bounded chain complexes of finitely generated free modules.

use std::collections::BTreeMap;
use std::fmt;

use crate::bidegree::Bidegree;
use crate::error::{Error, Result, Violation, ViolationKind};
use crate::linalg::{self, diagonalize, kernel, Solver};
use crate::matrix::ExactMatrix;
use crate::ring::{RingSpec, Scalar};

/// A chain complex; `d(n)` goes from degree `n` to degree `n - 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainComplex {
    ring: RingSpec,
    ranks: BTreeMap<i32, usize>,
    d: BTreeMap<i32, ExactMatrix>,
}

/// Isomorphism class of a finitely generated module.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct ModuleClass {
    pub free_rank: usize,
    /// Invariant factors greater than one, each dividing the next.
    pub torsion: Vec<Scalar>,
}

impl ModuleClass {
    pub fn is_zero(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    pub fn free(n: usize) -> Self {
        ModuleClass {
            free_rank: n,
            torsion: Vec::new(),
        }
    }

    /// Renders as e.g. `Z^2 + Z/2`, or `0`.
    pub fn describe(&self, ring: RingSpec) -> String {
        let base = match ring {
            RingSpec::Integers => "Z".to_string(),
            RingSpec::Rationals => "Q".to_string(),
            RingSpec::PrimeField(p) => format!("F_{p}"),
        };
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push(base.clone()),
            n => parts.push(format!("{base}^{n}")),
        }
        for t in &self.torsion {
            parts.push(format!("Z/{t}"));
        }
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }
}

impl fmt::Display for ModuleClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.describe(RingSpec::Integers))
    }
}

/// The standard complexes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ChainKind {
    /// Free module of rank `r` in degree `n`.
    Sphere { n: i32, r: usize },
    /// Identity map from degree `n` to `n - 1`, rank `r`.
    Disc { n: i32, r: usize },
    /// Augmented simplicial chains of the `n`-simplex.
    SimplexChain(i32),
    /// Coaugmented simplicial cochains, cochain degree `t` at chain degree `-t`.
    SimplexCochain(i32),
    /// Cochains of `Δⁿ` vanishing on the front face `Δᵐ`.
    RelativeSimplexCochain { n: i32, m: i32 },
}

/// Faces of the `n`-simplex with `t + 1` vertices, in lexicographic order.
pub fn simplices(n: i32, t: i32) -> Vec<Vec<i32>> {
    fn rec(start: i32, n: i32, left: i32, cur: &mut Vec<i32>, out: &mut Vec<Vec<i32>>) {
        if left == 0 {
            out.push(cur.clone());
            return;
        }
        for v in start..=n {
            cur.push(v);
            rec(v + 1, n, left - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if t >= -1 && t <= n {
        rec(0, n, t + 1, &mut Vec::new(), &mut out);
    }
    out
}

fn index_of(list: &[Vec<i32>]) -> BTreeMap<Vec<i32>, usize> {
    list.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect()
}

/// Boundary of `Δⁿ` from `t`-faces to `(t-1)`-faces, augmented.
pub fn simplex_boundary(ring: RingSpec, n: i32, t: i32) -> ExactMatrix {
    let src = simplices(n, t);
    let tgt = simplices(n, t - 1);
    let idx = index_of(&tgt);
    let mut m = ExactMatrix::zeros(ring, tgt.len(), src.len());
    for (j, s) in src.iter().enumerate() {
        for i in 0..s.len() {
            let mut face = s.clone();
            face.remove(i);
            m.set(idx[&face], j, ring.sign(i as i64));
        }
    }
    m
}

/// Coboundary `δ[σ]* = Σ_{v∉σ} (-1)^{pos(v)} [σ∪v]*` from `t`- to `(t+1)`-cochains,
/// restricted to the faces passing `keep`.
fn simplex_coboundary(
    ring: RingSpec,
    n: i32,
    t: i32,
    keep: &dyn Fn(&[i32]) -> bool,
) -> (Vec<Vec<i32>>, Vec<Vec<i32>>, ExactMatrix) {
    let src: Vec<_> = simplices(n, t).into_iter().filter(|s| keep(s)).collect();
    let tgt: Vec<_> = simplices(n, t + 1).into_iter().filter(|s| keep(s)).collect();
    let idx = index_of(&tgt);
    let mut m = ExactMatrix::zeros(ring, tgt.len(), src.len());
    for (j, s) in src.iter().enumerate() {
        for v in 0..=n {
            if s.contains(&v) {
                continue;
            }
            let pos = s.iter().filter(|&&w| w < v).count();
            let mut co = s.clone();
            co.insert(pos, v);
            if let Some(&i) = idx.get(&co) {
                m.set(i, j, ring.sign(pos as i64));
            }
        }
    }
    (src, tgt, m)
}

impl ChainComplex {
    pub fn zero(ring: RingSpec) -> Self {
        ChainComplex {
            ring,
            ranks: BTreeMap::new(),
            d: BTreeMap::new(),
        }
    }

    /// Builds and validates a complex. `d` is keyed by source degree.
    pub fn new(ring: RingSpec, ranks: BTreeMap<i32, usize>, d: BTreeMap<i32, ExactMatrix>) -> Result<Self> {
        let c = Self::from_raw(ring, ranks, d);
        let v = c.validate();
        if v.is_empty() {
            Ok(c)
        } else {
            Err(Error::Validation(v))
        }
    }

    /// Stores data without checking `d² = 0`; zero entries are dropped.
    pub fn from_raw(ring: RingSpec, ranks: BTreeMap<i32, usize>, d: BTreeMap<i32, ExactMatrix>) -> Self {
        let ranks = ranks.into_iter().filter(|(_, r)| *r > 0).collect();
        let d = d.into_iter().filter(|(_, m)| !m.is_zero()).collect();
        ChainComplex { ring, ranks, d }
    }

    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        for (&n, m) in &self.d {
            let expected = (self.rank(n - 1), self.rank(n));
            if m.shape() != expected {
                out.push(Violation {
                    kind: ViolationKind::Dimension {
                        index: "d".into(),
                        rows: m.rows(),
                        cols: m.cols(),
                        expected,
                    },
                    at: Bidegree::new(0, n),
                });
            }
        }
        if !out.is_empty() {
            return out;
        }
        for (&n, m) in &self.d {
            if let Some(prev) = self.d.get(&(n - 1)) {
                if !prev.mul(m).is_zero() {
                    out.push(Violation {
                        kind: ViolationKind::ChainSquare,
                        at: Bidegree::new(0, n),
                    });
                }
            }
        }
        out
    }

    pub fn standard(ring: RingSpec, kind: &ChainKind) -> Result<Self> {
        let one = |n: i32, r: usize| BTreeMap::from([(n, r)]);
        match *kind {
            ChainKind::Sphere { n, r } => {
                if r == 0 {
                    return Err(Error::BadParameter("sphere rank must be positive".into()));
                }
                Ok(ChainComplex::from_raw(ring, one(n, r), BTreeMap::new()))
            }
            ChainKind::Disc { n, r } => {
                if r == 0 {
                    return Err(Error::BadParameter("disc rank must be positive".into()));
                }
                let ranks = BTreeMap::from([(n, r), (n - 1, r)]);
                let d = BTreeMap::from([(n, ExactMatrix::identity(ring, r))]);
                Ok(ChainComplex::from_raw(ring, ranks, d))
            }
            ChainKind::SimplexChain(n) => {
                if n < 0 {
                    return Err(Error::BadParameter(format!("simplex dimension {n}")));
                }
                let mut ranks = BTreeMap::new();
                let mut d = BTreeMap::new();
                for t in -1..=n {
                    ranks.insert(t, simplices(n, t).len());
                    if t >= 0 {
                        d.insert(t, simplex_boundary(ring, n, t));
                    }
                }
                Ok(ChainComplex::from_raw(ring, ranks, d))
            }
            ChainKind::SimplexCochain(n) => {
                if n < 0 {
                    return Err(Error::BadParameter(format!("simplex dimension {n}")));
                }
                Ok(Self::cochains(ring, n, &|_| true))
            }
            ChainKind::RelativeSimplexCochain { n, m } => {
                if n < 0 || m < -1 || m >= n {
                    return Err(Error::BadParameter(format!(
                        "relative cochains need -1 <= m < n, got n={n}, m={m}"
                    )));
                }
                Ok(Self::cochains(ring, n, &|s: &[i32]| {
                    s.last().is_some_and(|&v| v > m)
                }))
            }
        }
    }

    fn cochains(ring: RingSpec, n: i32, keep: &dyn Fn(&[i32]) -> bool) -> Self {
        let mut ranks = BTreeMap::new();
        let mut d = BTreeMap::new();
        for t in -1..=n {
            let (src, _, m) = simplex_coboundary(ring, n, t, keep);
            ranks.insert(-t, src.len());
            if t < n {
                d.insert(-t, m);
            }
        }
        ChainComplex::from_raw(ring, ranks, d)
    }

    /// Basis labels of the cochain complexes above, by chain degree.
    pub fn cochain_basis(n: i32, m: Option<i32>, degree: i32) -> Vec<Vec<i32>> {
        simplices(n, -degree)
            .into_iter()
            .filter(|s| m.is_none_or(|m| s.last().is_some_and(|&v| v > m)))
            .collect()
    }

    pub fn ring(&self) -> RingSpec {
        self.ring
    }

    pub fn rank(&self, n: i32) -> usize {
        self.ranks.get(&n).copied().unwrap_or(0)
    }

    pub fn ranks(&self) -> &BTreeMap<i32, usize> {
        &self.ranks
    }

    pub fn differentials(&self) -> &BTreeMap<i32, ExactMatrix> {
        &self.d
    }

    /// The differential out of degree `n`.
    pub fn d(&self, n: i32) -> ExactMatrix {
        self.d
            .get(&n)
            .cloned()
            .unwrap_or_else(|| ExactMatrix::zeros(self.ring, self.rank(n - 1), self.rank(n)))
    }

    /// Smallest and largest degree with nonzero rank.
    pub fn support(&self) -> Option<(i32, i32)> {
        let lo = *self.ranks.keys().next()?;
        let hi = *self.ranks.keys().next_back()?;
        Some((lo, hi))
    }

    pub fn is_zero(&self) -> bool {
        self.ranks.is_empty()
    }

    /// Degrees where homology might be nonzero.
    fn degree_range(&self) -> Vec<i32> {
        match self.support() {
            Some((lo, hi)) => (lo..=hi).collect(),
            None => Vec::new(),
        }
    }

    pub fn homology_at(&self, n: i32) -> ModuleClass {
        let dn = self.d(n);
        let dn1 = self.d(n + 1);
        let ring = self.ring;
        if ring.is_field() {
            let k = self.rank(n) - linalg::rank(&dn);
            return ModuleClass::free(k - linalg::rank(&dn1));
        }
        let kb = kernel(&dn);
        if kb.cols() == 0 {
            return ModuleClass::default();
        }
        let coords = Solver::new(&kb).solve_matrix(&dn1).expect("image inside kernel");
        let dg = diagonalize(&coords);
        let torsion = dg.diag.into_iter().filter(|x| !ring.is_one(x)).collect();
        ModuleClass {
            free_rank: kb.cols() - dg.rank,
            torsion,
        }
    }

    /// Nonzero homology modules by degree.
    pub fn homology(&self) -> BTreeMap<i32, ModuleClass> {
        self.degree_range()
            .into_iter()
            .map(|n| (n, self.homology_at(n)))
            .filter(|(_, h)| !h.is_zero())
            .collect()
    }

    pub fn is_acyclic(&self) -> bool {
        let ring = self.ring;
        self.degree_range().into_iter().all(|n| {
            let a = linalg::rank(&self.d(n));
            let b = self.d(n + 1);
            if a + linalg::rank(&b) != self.rank(n) {
                return false;
            }
            ring.is_field() || linalg::diagonalize(&b).diag.iter().all(|x| ring.is_one(x))
        })
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.ranks
            .iter()
            .map(|(&n, &r)| if n % 2 == 0 { r as i64 } else { -(r as i64) })
            .sum()
    }

    /// Keeps positive degrees, replaces degree 0 by the cycles.
    pub fn truncate_nonneg(&self) -> Self {
        let kb = kernel(&self.d(0));
        let mut ranks: BTreeMap<i32, usize> = self
            .ranks
            .iter()
            .filter(|(&n, _)| n >= 1)
            .map(|(&n, &r)| (n, r))
            .collect();
        ranks.insert(0, kb.cols());
        let mut d: BTreeMap<i32, ExactMatrix> = self
            .d
            .iter()
            .filter(|(&n, _)| n >= 2)
            .map(|(&n, m)| (n, m.clone()))
            .collect();
        if kb.cols() > 0 && self.rank(1) > 0 {
            let m = Solver::new(&kb)
                .solve_matrix(&self.d(1))
                .expect("d1 lands in cycles");
            d.insert(1, m);
        }
        ChainComplex::from_raw(self.ring, ranks, d)
    }

    /// `(C⊗D)_n = ⊕_a C_a ⊗ D_{n-a}`, blocks by increasing `a`.
    pub fn tensor(&self, other: &Self) -> Self {
        let ring = self.ring;
        let mut ranks = BTreeMap::new();
        let mut blocks: BTreeMap<i32, Vec<(i32, i32, usize)>> = BTreeMap::new();
        for (&a, &ra) in &self.ranks {
            for (&b, &rb) in &other.ranks {
                let e = blocks.entry(a + b).or_default();
                let off = e.iter().map(|x| self.rank(x.0) * other.rank(x.1)).sum();
                e.push((a, b, off));
                *ranks.entry(a + b).or_insert(0) += ra * rb;
            }
        }
        for v in blocks.values_mut() {
            v.sort();
            let mut off = 0;
            for x in v.iter_mut() {
                x.2 = off;
                off += self.rank(x.0) * other.rank(x.1);
            }
        }
        let mut d = BTreeMap::new();
        for (&n, parts) in &blocks {
            let Some(tparts) = blocks.get(&(n - 1)) else {
                continue;
            };
            let find = |a: i32, b: i32| tparts.iter().find(|x| x.0 == a && x.1 == b).map(|x| x.2);
            let mut m = ExactMatrix::zeros(ring, ranks[&(n - 1)], ranks[&n]);
            for &(a, b, off) in parts {
                if let Some(t) = find(a - 1, b) {
                    let blk = self.d(a).kron(&ExactMatrix::identity(ring, other.rank(b)));
                    m.set_block(t, off, &blk);
                }
                if let Some(t) = find(a, b - 1) {
                    let blk = ExactMatrix::identity(ring, self.rank(a))
                        .kron(&other.d(b))
                        .scale(&ring.sign(a as i64));
                    m.set_block(t, off, &blk);
                }
            }
            d.insert(n, m);
        }
        ChainComplex::from_raw(ring, ranks, d)
    }

    pub fn direct_sum(&self, other: &Self) -> Self {
        let mut ranks = self.ranks.clone();
        for (&n, &r) in &other.ranks {
            *ranks.entry(n).or_insert(0) += r;
        }
        let mut d = BTreeMap::new();
        for &n in ranks.keys() {
            d.insert(n, self.d(n).direct_sum(&other.d(n)));
        }
        ChainComplex::from_raw(self.ring, ranks, d)
    }

    /// Shifts degrees up by `k`, negating the differential when `k` is odd.
    pub fn shift(&self, k: i32) -> Self {
        let ranks = self.ranks.iter().map(|(&n, &r)| (n + k, r)).collect();
        let s = self.ring.sign(k as i64);
        let d = self.d.iter().map(|(&n, m)| (n + k, m.scale(&s))).collect();
        ChainComplex::from_raw(self.ring, ranks, d)
    }
}

/// A chain map; `f(n)` maps degree `n` to degree `n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainMap {
    source: ChainComplex,
    target: ChainComplex,
    f: BTreeMap<i32, ExactMatrix>,
}

impl ChainMap {
    pub fn new(source: ChainComplex, target: ChainComplex, f: BTreeMap<i32, ExactMatrix>) -> Result<Self> {
        let m = ChainMap {
            source,
            target,
            f: f.into_iter().filter(|(_, m)| !m.is_zero()).collect(),
        };
        let v = m.validate();
        if v.is_empty() {
            Ok(m)
        } else {
            Err(Error::Validation(v))
        }
    }

    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        for (&n, m) in &self.f {
            let expected = (self.target.rank(n), self.source.rank(n));
            if m.shape() != expected {
                out.push(Violation {
                    kind: ViolationKind::Dimension {
                        index: "f".into(),
                        rows: m.rows(),
                        cols: m.cols(),
                        expected,
                    },
                    at: Bidegree::new(0, n),
                });
            }
        }
        if !out.is_empty() {
            return out;
        }
        let mut degs: Vec<i32> = self.source.ranks.keys().copied().collect();
        degs.sort();
        for n in degs {
            let lhs = self.target.d(n).mul(&self.at(n));
            let rhs = self.at(n - 1).mul(&self.source.d(n));
            if lhs != rhs {
                out.push(Violation {
                    kind: ViolationKind::NotChainMap { index: "d".into() },
                    at: Bidegree::new(0, n),
                });
            }
        }
        out
    }

    pub fn identity(c: &ChainComplex) -> Self {
        let f = c
            .ranks
            .iter()
            .map(|(&n, &r)| (n, ExactMatrix::identity(c.ring, r)))
            .collect();
        ChainMap {
            source: c.clone(),
            target: c.clone(),
            f,
        }
    }

    pub fn zero(source: &ChainComplex, target: &ChainComplex) -> Self {
        ChainMap {
            source: source.clone(),
            target: target.clone(),
            f: BTreeMap::new(),
        }
    }

    pub fn source(&self) -> &ChainComplex {
        &self.source
    }

    pub fn target(&self) -> &ChainComplex {
        &self.target
    }

    pub fn components(&self) -> &BTreeMap<i32, ExactMatrix> {
        &self.f
    }

    pub fn at(&self, n: i32) -> ExactMatrix {
        self.f
            .get(&n)
            .cloned()
            .unwrap_or_else(|| ExactMatrix::zeros(self.source.ring, self.target.rank(n), self.source.rank(n)))
    }

    pub fn compose(&self, first: &ChainMap) -> Self {
        let mut f = BTreeMap::new();
        for &n in first.source.ranks.keys() {
            f.insert(n, self.at(n).mul(&first.at(n)));
        }
        ChainMap {
            source: first.source.clone(),
            target: self.target.clone(),
            f: f.into_iter().filter(|(_, m)| !m.is_zero()).collect(),
        }
    }

    /// `Cone_n = X_{n-1} ⊕ Y_n`, `d(x, y) = (-dx, fx + dy)`.
    pub fn cone(&self) -> ChainComplex {
        let ring = self.source.ring;
        let (x, y) = (&self.source, &self.target);
        let mut degs: Vec<i32> = x.ranks.keys().map(|n| n + 1).collect();
        degs.extend(y.ranks.keys().copied());
        degs.sort();
        degs.dedup();
        let mut ranks = BTreeMap::new();
        for &n in &degs {
            ranks.insert(n, x.rank(n - 1) + y.rank(n));
        }
        let mut d = BTreeMap::new();
        for &n in &degs {
            let (xs, ys) = (x.rank(n - 1), y.rank(n));
            let (xt, yt) = (x.rank(n - 2), y.rank(n - 1));
            let mut m = ExactMatrix::zeros(ring, xt + yt, xs + ys);
            m.set_block(0, 0, &x.d(n - 1).neg());
            m.set_block(xt, 0, &self.at(n - 1));
            m.set_block(xt, xs, &y.d(n));
            d.insert(n, m);
        }
        ChainComplex::from_raw(ring, ranks, d)
    }

    pub fn is_quasi_iso(&self) -> bool {
        self.cone().is_acyclic()
    }

    pub fn is_degreewise_surjective(&self) -> bool {
        self.target
            .ranks
            .keys()
            .all(|&n| linalg::is_surjective(&self.at(n)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn times_two() {
        let z = RingSpec::Integers;
        let c = ChainComplex::new(
            z,
            BTreeMap::from([(1, 1), (0, 1)]),
            BTreeMap::from([(1, ExactMatrix::from_i64_rows(z, &[vec![2]]))]),
        )
        .unwrap();
        assert_eq!(c.homology_at(0).torsion, vec![Scalar::Small(2)]);
        assert!(c.homology_at(1).is_zero());
        assert!(!c.is_acyclic());
    }

    #[test]
    fn cochain_is_transpose() {
        let q = RingSpec::Rationals;
        for n in 0..5 {
            let c = ChainComplex::standard(q, &ChainKind::SimplexCochain(n)).unwrap();
            for t in -1..n {
                assert_eq!(c.d(-t), simplex_boundary(q, n, t + 1).transpose());
            }
        }
    }
}
