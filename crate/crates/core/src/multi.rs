//! Bigraded free modules with maps `d_i` of bidegree `(-i, i-1)`.
//!
//! This is the common representation of bicomplexes (`d_0 = d_v`,
//! `d_1 = d_h`) and twisted complexes. Operations that make sense for both
//! live here; the public wrappers add the flavour-specific invariants.

use std::collections::{BTreeMap, BTreeSet};

use rand::Rng;

use crate::bidegree::Bidegree;
use crate::chain::{ChainComplex, ChainMap};
use crate::error::{Error, Result, Violation, ViolationKind};
use crate::linalg::{self, image, kernel, Quotient, Solver};
use crate::matrix::ExactMatrix;
use crate::ring::{RingSpec, Scalar};
use crate::system::{Layout, System, Term};

/// Which relations `validate` checks and how it names them.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Flavor {
    Bicomplex,
    Twisted,
}

/// Bounding box of the nonzero modules.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Support {
    pub pmin: i32,
    pub pmax: i32,
    pub qmin: i32,
    pub qmax: i32,
}

impl Support {
    pub fn union(self, o: Support) -> Support {
        Support {
            pmin: self.pmin.min(o.pmin),
            pmax: self.pmax.max(o.pmax),
            qmin: self.qmin.min(o.qmin),
            qmax: self.qmax.max(o.qmax),
        }
    }

    pub fn contains(self, b: Bidegree) -> bool {
        (self.pmin..=self.pmax).contains(&b.p) && (self.qmin..=self.qmax).contains(&b.q)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Multicomplex {
    ring: RingSpec,
    ranks: BTreeMap<Bidegree, usize>,
    maps: BTreeMap<(usize, Bidegree), ExactMatrix>,
}

/// `d_i` label used in reports.
pub(crate) fn map_name(flavor: Flavor, i: usize) -> String {
    match (flavor, i) {
        (Flavor::Bicomplex, 0) => "dv".into(),
        (Flavor::Bicomplex, 1) => "dh".into(),
        _ => format!("d{i}"),
    }
}

impl Multicomplex {
    pub fn zero(ring: RingSpec) -> Self {
        Multicomplex {
            ring,
            ranks: BTreeMap::new(),
            maps: BTreeMap::new(),
        }
    }

    /// Stores data as given, dropping zero ranks and zero matrices.
    pub fn from_raw(
        ring: RingSpec,
        ranks: BTreeMap<Bidegree, usize>,
        maps: BTreeMap<(usize, Bidegree), ExactMatrix>,
    ) -> Self {
        let ranks = ranks.into_iter().filter(|(_, r)| *r > 0).collect();
        let maps = maps.into_iter().filter(|(_, m)| !m.is_zero()).collect();
        Multicomplex { ring, ranks, maps }
    }

    pub fn ring(&self) -> RingSpec {
        self.ring
    }

    pub fn rank(&self, b: Bidegree) -> usize {
        self.ranks.get(&b).copied().unwrap_or(0)
    }

    pub fn ranks(&self) -> &BTreeMap<Bidegree, usize> {
        &self.ranks
    }

    /// All stored nonzero maps keyed by `(i, source)`.
    pub fn maps(&self) -> &BTreeMap<(usize, Bidegree), ExactMatrix> {
        &self.maps
    }

    pub fn d_ref(&self, i: usize, b: Bidegree) -> Option<&ExactMatrix> {
        self.maps.get(&(i, b))
    }

    /// `d_i` out of `b`, zero if absent.
    pub fn d(&self, i: usize, b: Bidegree) -> ExactMatrix {
        self.maps
            .get(&(i, b))
            .cloned()
            .unwrap_or_else(|| ExactMatrix::zeros(self.ring, self.rank(b.shift(i)), self.rank(b)))
    }

    /// Largest `i` with a nonzero `d_i`, or 0.
    pub fn max_index(&self) -> usize {
        self.maps.keys().map(|k| k.0).max().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.ranks.is_empty()
    }

    pub fn support(&self) -> Option<Support> {
        let mut it = self.ranks.keys();
        let first = it.next()?;
        let mut s = Support {
            pmin: first.p,
            pmax: first.p,
            qmin: first.q,
            qmax: first.q,
        };
        for b in it {
            s.pmin = s.pmin.min(b.p);
            s.pmax = s.pmax.max(b.p);
            s.qmin = s.qmin.min(b.q);
            s.qmax = s.qmax.max(b.q);
        }
        Some(s)
    }

    pub fn total_rank(&self) -> usize {
        self.ranks.values().sum()
    }

    pub fn validate(&self, flavor: Flavor) -> Vec<Violation> {
        let mut out = Vec::new();
        for (&b, &r) in &self.ranks {
            if b.p < 0 && r > 0 {
                out.push(Violation {
                    kind: ViolationKind::NegativeColumn,
                    at: b,
                });
            }
        }
        for (&(i, b), m) in &self.maps {
            let expected = (self.rank(b.shift(i)), self.rank(b));
            if m.shape() != expected {
                out.push(Violation {
                    kind: ViolationKind::Dimension {
                        index: map_name(flavor, i),
                        rows: m.rows(),
                        cols: m.cols(),
                        expected,
                    },
                    at: b,
                });
            }
            if flavor == Flavor::Bicomplex && i >= 2 {
                out.push(Violation {
                    kind: ViolationKind::HigherDifferential { index: i },
                    at: b,
                });
            }
        }
        if !out.is_empty() {
            return out;
        }
        let pmax = self.support().map_or(0, |s| s.pmax.max(0) as usize);
        let nmax = (pmax + 1).max(2 * self.max_index());
        for n in 0..=nmax {
            for &b in self.ranks.keys() {
                let mut acc: Option<ExactMatrix> = None;
                for j in 0..=n {
                    let i = n - j;
                    let (Some(dj), Some(di)) = (self.d_ref(j, b), self.d_ref(i, b.shift(j))) else {
                        continue;
                    };
                    let prod = di.mul(dj);
                    acc = Some(match acc {
                        None => prod,
                        Some(a) => a.add(&prod),
                    });
                }
                if acc.is_some_and(|a| !a.is_zero()) {
                    let kind = match (flavor, n) {
                        (Flavor::Bicomplex, 0) => ViolationKind::VerticalSquare,
                        (Flavor::Bicomplex, 1) => ViolationKind::Anticommutation,
                        (Flavor::Bicomplex, 2) => ViolationKind::HorizontalSquare,
                        _ => ViolationKind::Quadratic { n },
                    };
                    out.push(Violation { kind, at: b });
                }
            }
        }
        out
    }

    /// Bidegrees of total degree `n` by increasing `p`, with block offsets.
    pub fn tot_layout(&self) -> BTreeMap<i32, Vec<(Bidegree, usize)>> {
        let mut out: BTreeMap<i32, Vec<(Bidegree, usize)>> = BTreeMap::new();
        let mut sizes: BTreeMap<i32, usize> = BTreeMap::new();
        for (&b, &r) in &self.ranks {
            let n = b.total();
            let off = sizes.entry(n).or_insert(0);
            out.entry(n).or_default().push((b, *off));
            *off += r;
        }
        out
    }

    /// Totalisation with `d = Σ d_i`.
    pub fn tot(&self) -> ChainComplex {
        let layout = self.tot_layout();
        let ranks: BTreeMap<i32, usize> = layout
            .iter()
            .map(|(&n, v)| (n, v.iter().map(|(b, _)| self.rank(*b)).sum()))
            .collect();
        let offset = |b: Bidegree| {
            layout
                .get(&b.total())
                .and_then(|v| v.iter().find(|x| x.0 == b).map(|x| x.1))
        };
        let mut d: BTreeMap<i32, ExactMatrix> = BTreeMap::new();
        for (&(i, b), m) in &self.maps {
            let n = b.total();
            let entry = d.entry(n).or_insert_with(|| {
                ExactMatrix::zeros(self.ring, ranks.get(&(n - 1)).copied().unwrap_or(0), ranks[&n])
            });
            let (Some(r0), Some(c0)) = (offset(b.shift(i)), offset(b)) else {
                continue;
            };
            let mut cur = entry.block(r0, c0, m.rows(), m.cols());
            cur = cur.add(m);
            entry.set_block(r0, c0, &cur);
        }
        ChainComplex::from_raw(self.ring, ranks, d)
    }

    /// Column `p` as a chain complex in `q` with differential `d_0`.
    pub fn column(&self, p: i32) -> ChainComplex {
        let ranks = self
            .ranks
            .iter()
            .filter(|(b, _)| b.p == p)
            .map(|(b, &r)| (b.q, r))
            .collect();
        let d = self
            .maps
            .iter()
            .filter(|((i, b), _)| *i == 0 && b.p == p)
            .map(|((_, b), m)| (b.q, m.clone()))
            .collect();
        ChainComplex::from_raw(self.ring, ranks, d)
    }

    /// Row `q` as a chain complex in `p` with differential `d_1`.
    pub fn row(&self, q: i32) -> ChainComplex {
        let ranks = self
            .ranks
            .iter()
            .filter(|(b, _)| b.q == q)
            .map(|(b, &r)| (b.p, r))
            .collect();
        let d = self
            .maps
            .iter()
            .filter(|((i, b), _)| *i == 1 && b.q == q)
            .map(|((_, b), m)| (b.p, m.clone()))
            .collect();
        ChainComplex::from_raw(self.ring, ranks, d)
    }

    /// Summands `(x-bidegree, y-bidegree, offset)` of each tensor bidegree.
    pub fn tensor_layout(&self, other: &Self) -> BTreeMap<Bidegree, Vec<(Bidegree, Bidegree, usize)>> {
        let mut out: BTreeMap<Bidegree, Vec<(Bidegree, Bidegree, usize)>> = BTreeMap::new();
        for &bx in self.ranks.keys() {
            for &by in other.ranks.keys() {
                let b = Bidegree::new(bx.p + by.p, bx.q + by.q);
                let v = out.entry(b).or_default();
                let off = v.last().map_or(0, |&(x, y, o)| o + self.rank(x) * other.rank(y));
                v.push((bx, by, off));
            }
        }
        out
    }

    /// `d_i(x⊗y) = d_i x ⊗ y + (-1)^{|x|} x ⊗ d_i y`.
    pub fn tensor(&self, other: &Self) -> Self {
        let ring = self.ring;
        let layout = self.tensor_layout(other);
        let ranks: BTreeMap<Bidegree, usize> = layout
            .iter()
            .map(|(&b, v)| (b, v.iter().map(|&(x, y, _)| self.rank(x) * other.rank(y)).sum()))
            .collect();
        let find = |b: Bidegree, x: Bidegree, y: Bidegree| {
            layout
                .get(&b)
                .and_then(|v| v.iter().find(|t| t.0 == x && t.1 == y).map(|t| t.2))
        };
        let imax = self.max_index().max(other.max_index());
        let mut maps = BTreeMap::new();
        for (&b, parts) in &layout {
            for i in 0..=imax {
                let t = b.shift(i);
                let Some(&rt) = ranks.get(&t) else { continue };
                let mut m = ExactMatrix::zeros(ring, rt, ranks[&b]);
                let mut any = false;
                for &(x, y, off) in parts {
                    if let Some(dx) = self.d_ref(i, x) {
                        if let Some(r0) = find(t, x.shift(i), y) {
                            m.set_block(r0, off, &dx.kron(&ExactMatrix::identity(ring, other.rank(y))));
                            any = true;
                        }
                    }
                    if let Some(dy) = other.d_ref(i, y) {
                        if let Some(r0) = find(t, x, y.shift(i)) {
                            let blk = ExactMatrix::identity(ring, self.rank(x))
                                .kron(dy)
                                .scale(&ring.sign(x.total() as i64));
                            m.set_block(r0, off, &blk);
                            any = true;
                        }
                    }
                }
                if any {
                    maps.insert((i, b), m);
                }
            }
        }
        Multicomplex::from_raw(ring, ranks, maps)
    }

    pub fn direct_sum(&self, other: &Self) -> Self {
        let mut ranks = self.ranks.clone();
        for (&b, &r) in &other.ranks {
            *ranks.entry(b).or_insert(0) += r;
        }
        let keys: BTreeSet<(usize, Bidegree)> = self.maps.keys().chain(other.maps.keys()).copied().collect();
        let maps = keys
            .into_iter()
            .map(|(i, b)| ((i, b), self.d(i, b).direct_sum(&other.d(i, b))))
            .collect();
        Multicomplex::from_raw(self.ring, ranks, maps)
    }

    /// Scales `d_0` on column `p` by `(-1)^p`.
    pub fn flip_vertical_signs(&self) -> Self {
        let ring = self.ring;
        let maps = self
            .maps
            .iter()
            .map(|(&(i, b), m)| {
                let m = if i == 0 {
                    m.scale(&ring.sign(b.p as i64))
                } else {
                    m.clone()
                };
                ((i, b), m)
            })
            .collect();
        Multicomplex {
            ring,
            ranks: self.ranks.clone(),
            maps,
        }
    }

    /// Same data with scalars reinterpreted in another ring.
    pub fn change_ring(&self, ring: RingSpec) -> Result<Self> {
        let mut maps = BTreeMap::new();
        for (k, m) in &self.maps {
            maps.insert(*k, m.change_ring(ring)?);
        }
        Ok(Multicomplex::from_raw(ring, self.ranks.clone(), maps))
    }

    fn hom_layout(&self, other: &Self, p: i32, q: i32) -> Layout<Bidegree> {
        let mut l = Layout::new();
        for (&b, &r) in &self.ranks {
            let t = Bidegree::new(b.p + p, b.q + q);
            l.push(b, other.rank(t), r);
        }
        l
    }

    /// Matrix of `f ↦ d_i f - (-1)^{p+q} f d_i` on the ambient Hom modules.
    fn hom_operator(&self, other: &Self, i: usize, p: i32, q: i32) -> ExactMatrix {
        let ring = self.ring;
        let src = self.hom_layout(other, p, q);
        let tgt = self.hom_layout(other, p - i as i32, q + i as i32 - 1);
        let mut sys = System::operator(ring, src.total);
        let eps = ring.neg(&ring.sign((p + q) as i64));
        for (&s, blk) in &tgt.blocks {
            let mut terms = Vec::new();
            let ys = Bidegree::new(s.p + p, s.q + q);
            let dy = other.d_ref(i, ys);
            if let (Some(dy), Some(b)) = (dy, src.get(&s)) {
                terms.push(Term {
                    left: Some(dy),
                    block: b,
                    right: None,
                    coeff: ring.one(),
                });
            }
            let dx = self.d_ref(i, s);
            if let (Some(dx), Some(b)) = (dx, src.get(&s.shift(i))) {
                terms.push(Term {
                    left: None,
                    block: b,
                    right: Some(dx),
                    coeff: eps.clone(),
                });
            }
            sys.add_matrix_equation((blk.rows, blk.cols), &terms, None);
        }
        sys.matrix()
    }

    /// Internal Hom; bidegree `(p, q)` consists of families `f_{s,t}` of
    /// bidegree `(p, q)` with `d_i f = (-1)^{p+q} f d_i` for every `i > p`.
    pub fn hom(&self, other: &Self, imax: usize) -> Result<Self> {
        let ring = self.ring;
        let (Some(sx), Some(sy)) = (self.support(), other.support()) else {
            return Ok(Multicomplex::zero(ring));
        };
        let pmax = sy.pmax - sx.pmin;
        if pmax < 0 {
            return Ok(Multicomplex::zero(ring));
        }
        let (qlo, qhi) = (sy.qmin - sx.qmax, sy.qmax - sx.qmin);
        let mut bases: BTreeMap<Bidegree, ExactMatrix> = BTreeMap::new();
        for p in 0..=pmax {
            for q in qlo..=qhi {
                let amb = self.hom_layout(other, p, q).total;
                if amb == 0 {
                    continue;
                }
                let cons: Vec<ExactMatrix> = ((p as usize + 1)..=imax)
                    .map(|i| self.hom_operator(other, i, p, q))
                    .filter(|m| m.rows() > 0)
                    .collect();
                let basis = if cons.is_empty() {
                    ExactMatrix::identity(ring, amb)
                } else {
                    let refs: Vec<&ExactMatrix> = cons.iter().collect();
                    kernel(&ExactMatrix::vstack(ring, amb, &refs))
                };
                if basis.cols() > 0 {
                    bases.insert(Bidegree::new(p, q), basis);
                }
            }
        }
        let ranks = bases.iter().map(|(&b, m)| (b, m.cols())).collect();
        let mut maps = BTreeMap::new();
        for (&b, basis) in &bases {
            for i in 0..=imax.min(b.p as usize) {
                let t = b.shift(i);
                let Some(tb) = bases.get(&t) else { continue };
                let op = self.hom_operator(other, i, b.p, b.q);
                let img = op.mul(basis);
                let coords = Solver::new(tb).solve_matrix(&img).ok_or_else(|| {
                    Error::Internal(format!("Hom differential d{i} leaves the subspace at {b}"))
                })?;
                maps.insert((i, b), coords);
            }
        }
        Ok(Multicomplex::from_raw(ring, ranks, maps))
    }

    /// Pointwise `Z`, `B` or `H` of `d_primary`, keeping `d_secondary`.
    pub fn subquotient(
        &self,
        primary: usize,
        secondary: usize,
        kind: SubKind,
    ) -> Result<(Self, Presentation)> {
        let ring = self.ring;
        let mut reps = BTreeMap::new();
        let mut coords = BTreeMap::new();
        for (&b, &r) in &self.ranks {
            let z = match self.d_ref(primary, b) {
                Some(m) => kernel(m),
                None => ExactMatrix::identity(ring, r),
            };
            let src = b.unshift(primary);
            let bd = match self.d_ref(primary, src) {
                Some(m) => image(m),
                None => ExactMatrix::zeros(ring, r, 0),
            };
            let (rep, coord) = match kind {
                SubKind::Z => (z.clone(), Coord::Span(Solver::new(&z))),
                SubKind::B => (bd.clone(), Coord::Span(Solver::new(&bd))),
                SubKind::H => {
                    let q = Quotient::new(&z, &bd).ok_or(Error::TorsionInSubquotient(b))?;
                    (q.reps.clone(), Coord::Quot(q))
                }
            };
            if rep.cols() > 0 {
                reps.insert(b, rep);
                coords.insert(b, coord);
            }
        }
        let pres = Presentation { reps, coords };
        let ranks = pres.reps.iter().map(|(&b, m)| (b, m.cols())).collect();
        let mut maps = BTreeMap::new();
        for (&b, rep) in &pres.reps {
            let Some(d) = self.d_ref(secondary, b) else {
                continue;
            };
            let t = b.shift(secondary);
            if !pres.reps.contains_key(&t) {
                continue;
            }
            let m = pres
                .coords(t, &d.mul(rep))
                .ok_or_else(|| Error::Internal(format!("induced d{secondary} not defined at {b}")))?;
            maps.insert((secondary, b), m);
        }
        Ok((Multicomplex::from_raw(ring, ranks, maps), pres))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SubKind {
    Z,
    B,
    H,
}

#[derive(Clone, Debug)]
enum Coord {
    Span(Solver),
    Quot(Quotient),
}

/// Chosen bases of a pointwise subquotient.
#[derive(Clone, Debug)]
pub struct Presentation {
    /// Ambient coordinates of the basis representatives.
    pub reps: BTreeMap<Bidegree, ExactMatrix>,
    coords: BTreeMap<Bidegree, Coord>,
}

impl Presentation {
    pub fn dim(&self, b: Bidegree) -> usize {
        self.reps.get(&b).map_or(0, |m| m.cols())
    }

    /// Coordinates of ambient columns lying in the subobject at `b`.
    pub fn coords(&self, b: Bidegree, v: &ExactMatrix) -> Option<ExactMatrix> {
        match self.coords.get(&b)? {
            Coord::Span(s) => s.solve_matrix(v),
            Coord::Quot(q) => q.project_matrix(v),
        }
    }
}

/// A degreewise map commuting with every `d_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiMap {
    source: Multicomplex,
    target: Multicomplex,
    f: BTreeMap<Bidegree, ExactMatrix>,
}

impl MultiMap {
    pub fn new(
        source: Multicomplex,
        target: Multicomplex,
        f: BTreeMap<Bidegree, ExactMatrix>,
    ) -> Result<Self> {
        let m = Self::from_raw(source, target, f);
        let v = m.validate();
        if v.is_empty() {
            Ok(m)
        } else {
            Err(Error::Validation(v))
        }
    }

    pub fn from_raw(source: Multicomplex, target: Multicomplex, f: BTreeMap<Bidegree, ExactMatrix>) -> Self {
        let f = f.into_iter().filter(|(_, m)| !m.is_zero()).collect();
        MultiMap { source, target, f }
    }

    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        for (&b, m) in &self.f {
            let expected = (self.target.rank(b), self.source.rank(b));
            if m.shape() != expected {
                out.push(Violation {
                    kind: ViolationKind::Dimension {
                        index: "f".into(),
                        rows: m.rows(),
                        cols: m.cols(),
                        expected,
                    },
                    at: b,
                });
            }
        }
        if !out.is_empty() {
            return out;
        }
        let imax = self.source.max_index().max(self.target.max_index());
        for &b in self.source.ranks.keys() {
            for i in 0..=imax {
                let t = b.shift(i);
                if self.target.rank(t) == 0 {
                    continue;
                }
                let lhs = self.target.d(i, b).mul(&self.at(b));
                let rhs = self.at(t).mul(&self.source.d(i, b));
                if lhs != rhs {
                    out.push(Violation {
                        kind: ViolationKind::NotChainMap {
                            index: format!("d{i}"),
                        },
                        at: b,
                    });
                }
            }
        }
        out
    }

    pub fn identity(x: &Multicomplex) -> Self {
        let f = x
            .ranks
            .iter()
            .map(|(&b, &r)| (b, ExactMatrix::identity(x.ring, r)))
            .collect();
        MultiMap {
            source: x.clone(),
            target: x.clone(),
            f,
        }
    }

    pub fn zero(source: &Multicomplex, target: &Multicomplex) -> Self {
        MultiMap {
            source: source.clone(),
            target: target.clone(),
            f: BTreeMap::new(),
        }
    }

    pub fn source(&self) -> &Multicomplex {
        &self.source
    }

    pub fn target(&self) -> &Multicomplex {
        &self.target
    }

    pub fn ring(&self) -> RingSpec {
        self.source.ring
    }

    pub fn components(&self) -> &BTreeMap<Bidegree, ExactMatrix> {
        &self.f
    }

    pub fn at(&self, b: Bidegree) -> ExactMatrix {
        self.f
            .get(&b)
            .cloned()
            .unwrap_or_else(|| ExactMatrix::zeros(self.source.ring, self.target.rank(b), self.source.rank(b)))
    }

    pub fn is_zero(&self) -> bool {
        self.f.is_empty()
    }

    /// `self ∘ first`.
    pub fn compose(&self, first: &MultiMap) -> Self {
        let f = first
            .source
            .ranks
            .keys()
            .map(|&b| (b, self.at(b).mul(&first.at(b))))
            .collect();
        MultiMap::from_raw(first.source.clone(), self.target.clone(), f)
    }

    pub fn add(&self, other: &MultiMap) -> Self {
        let f = self
            .source
            .ranks
            .keys()
            .map(|&b| (b, self.at(b).add(&other.at(b))))
            .collect();
        MultiMap::from_raw(self.source.clone(), self.target.clone(), f)
    }

    pub fn scale(&self, s: &Scalar) -> Self {
        let f = self.f.iter().map(|(&b, m)| (b, m.scale(s))).collect();
        MultiMap::from_raw(self.source.clone(), self.target.clone(), f)
    }

    pub fn is_pointwise_surjective(&self) -> bool {
        self.target
            .ranks
            .keys()
            .all(|&b| linalg::is_surjective(&self.at(b)))
    }

    pub fn is_pointwise_injective(&self) -> bool {
        self.source
            .ranks
            .keys()
            .all(|&b| linalg::is_injective(&self.at(b)))
    }

    /// Invertible at every bidegree (over ℤ: unimodular).
    pub fn is_isomorphism(&self) -> bool {
        let keys: BTreeSet<Bidegree> = self
            .source
            .ranks
            .keys()
            .chain(self.target.ranks.keys())
            .copied()
            .collect();
        keys.into_iter().all(|b| linalg::inverse(&self.at(b)).is_some())
    }

    pub fn inverse(&self) -> Option<Self> {
        let mut f = BTreeMap::new();
        for &b in self.source.ranks.keys().chain(self.target.ranks.keys()) {
            f.insert(b, linalg::inverse(&self.at(b))?);
        }
        Some(MultiMap::from_raw(self.target.clone(), self.source.clone(), f))
    }

    pub fn column(&self, p: i32) -> ChainMap {
        let f = self
            .f
            .iter()
            .filter(|(b, _)| b.p == p)
            .map(|(b, m)| (b.q, m.clone()))
            .collect();
        ChainMap::new(self.source.column(p), self.target.column(p), f).expect("column of a map")
    }

    pub fn row(&self, q: i32) -> ChainMap {
        let f = self
            .f
            .iter()
            .filter(|(b, _)| b.q == q)
            .map(|(b, m)| (b.p, m.clone()))
            .collect();
        ChainMap::new(self.source.row(q), self.target.row(q), f).expect("row of a map")
    }

    pub fn tot(&self) -> ChainMap {
        let ls = self.source.tot_layout();
        let lt = self.target.tot_layout();
        let (cs, ct) = (self.source.tot(), self.target.tot());
        let mut f = BTreeMap::new();
        for (&n, parts) in &ls {
            let mut m = ExactMatrix::zeros(self.ring(), ct.rank(n), cs.rank(n));
            for &(b, c0) in parts {
                let Some(r0) = lt.get(&n).and_then(|v| v.iter().find(|x| x.0 == b)).map(|x| x.1) else {
                    continue;
                };
                m.set_block(r0, c0, &self.at(b));
            }
            f.insert(n, m);
        }
        ChainMap::new(cs, ct, f).expect("totalised map")
    }

    /// `f⊗g` with the block layout of `Multicomplex::tensor`.
    pub fn tensor(&self, g: &MultiMap) -> Self {
        let src = self.source.tensor(&g.source);
        let tgt = self.target.tensor(&g.target);
        let ls = self.source.tensor_layout(&g.source);
        let lt = self.target.tensor_layout(&g.target);
        let mut f = BTreeMap::new();
        for (&b, parts) in &ls {
            let mut m = ExactMatrix::zeros(self.ring(), tgt.rank(b), src.rank(b));
            for &(x, y, c0) in parts {
                let Some(r0) = lt
                    .get(&b)
                    .and_then(|v| v.iter().find(|t| t.0 == x && t.1 == y))
                    .map(|t| t.2)
                else {
                    continue;
                };
                m.set_block(r0, c0, &self.at(x).kron(&g.at(y)));
            }
            f.insert(b, m);
        }
        MultiMap::from_raw(src, tgt, f)
    }

    /// Pointwise kernel with its inclusion.
    pub fn kernel(&self) -> (Multicomplex, MultiMap) {
        let ring = self.ring();
        let x = &self.source;
        let mut bases = BTreeMap::new();
        for (&b, &r) in &x.ranks {
            let k = match self.f.get(&b) {
                Some(m) => kernel(m),
                None => ExactMatrix::identity(ring, r),
            };
            if k.cols() > 0 {
                bases.insert(b, k);
            }
        }
        let ranks = bases.iter().map(|(&b, m)| (b, m.cols())).collect();
        let mut maps = BTreeMap::new();
        for (&(i, b), d) in &x.maps {
            let (Some(kb), Some(kt)) = (bases.get(&b), bases.get(&b.shift(i))) else {
                continue;
            };
            let m = Solver::new(kt)
                .solve_matrix(&d.mul(kb))
                .expect("kernel is a subcomplex");
            maps.insert((i, b), m);
        }
        let k = Multicomplex::from_raw(ring, ranks, maps);
        let incl = MultiMap::from_raw(k.clone(), x.clone(), bases);
        (k, incl)
    }

    /// Pointwise cokernel with its projection; over ℤ fails on torsion.
    pub fn cokernel(&self) -> Result<(Multicomplex, MultiMap)> {
        let ring = self.ring();
        let y = &self.target;
        let mut quots = BTreeMap::new();
        for (&b, &r) in &y.ranks {
            let im = match self.f.get(&b) {
                Some(m) => image(m),
                None => ExactMatrix::zeros(ring, r, 0),
            };
            let q = Quotient::new(&ExactMatrix::identity(ring, r), &im).ok_or(Error::TorsionCokernel(b))?;
            if q.dim() > 0 {
                quots.insert(b, q);
            }
        }
        let ranks = quots.iter().map(|(&b, q)| (b, q.dim())).collect();
        let mut maps = BTreeMap::new();
        for (&(i, b), d) in &y.maps {
            let (Some(qb), Some(qt)) = (quots.get(&b), quots.get(&b.shift(i))) else {
                continue;
            };
            let m = qt.project_matrix(&d.mul(&qb.reps)).expect("projection");
            maps.insert((i, b), m);
        }
        let c = Multicomplex::from_raw(ring, ranks, maps);
        let proj = quots
            .iter()
            .map(|(&b, q)| {
                (
                    b,
                    q.project_matrix(&ExactMatrix::identity(ring, y.rank(b))).unwrap(),
                )
            })
            .collect();
        let proj = MultiMap::from_raw(y.clone(), c.clone(), proj);
        Ok((c, proj))
    }

    /// Map induced on chosen subquotient bases.
    pub fn induced(
        &self,
        src: (&Multicomplex, &Presentation),
        tgt: (&Multicomplex, &Presentation),
    ) -> Result<MultiMap> {
        let mut f = BTreeMap::new();
        for (&b, rep) in &src.1.reps {
            if tgt.1.dim(b) == 0 {
                continue;
            }
            let img = self.at(b).mul(rep);
            let m = tgt
                .1
                .coords(b, &img)
                .ok_or_else(|| Error::Internal(format!("map does not preserve the subquotient at {b}")))?;
            f.insert(b, m);
        }
        Ok(MultiMap::from_raw(src.0.clone(), tgt.0.clone(), f))
    }
}

/// Injections and projections of a direct sum.
pub struct Biproduct {
    pub sum: Multicomplex,
    pub in1: MultiMap,
    pub in2: MultiMap,
    pub pr1: MultiMap,
    pub pr2: MultiMap,
}

pub fn biproduct(x: &Multicomplex, y: &Multicomplex) -> Biproduct {
    let ring = x.ring;
    let sum = x.direct_sum(y);
    let mut maps: [BTreeMap<Bidegree, ExactMatrix>; 4] = Default::default();
    for (&b, &r) in &sum.ranks {
        let (a, c) = (x.rank(b), y.rank(b));
        let mut i1 = ExactMatrix::zeros(ring, r, a);
        i1.set_block(0, 0, &ExactMatrix::identity(ring, a));
        let mut i2 = ExactMatrix::zeros(ring, r, c);
        i2.set_block(a, 0, &ExactMatrix::identity(ring, c));
        maps[2].insert(b, i1.transpose());
        maps[3].insert(b, i2.transpose());
        maps[0].insert(b, i1);
        maps[1].insert(b, i2);
    }
    let [m0, m1, m2, m3] = maps;
    Biproduct {
        in1: MultiMap::from_raw(x.clone(), sum.clone(), m0),
        in2: MultiMap::from_raw(y.clone(), sum.clone(), m1),
        pr1: MultiMap::from_raw(sum.clone(), x.clone(), m2),
        pr2: MultiMap::from_raw(sum.clone(), y.clone(), m3),
        sum,
    }
}

/// The linear system whose solutions are the maps `X → Y`.
pub(crate) fn morphism_system(x: &Multicomplex, y: &Multicomplex) -> (Layout<Bidegree>, System) {
    let ring = x.ring;
    let mut layout = Layout::new();
    for (&b, &r) in &x.ranks {
        layout.push(b, y.rank(b), r);
    }
    let mut sys = System::new(ring, layout.total);
    add_commutation(&mut sys, &layout, x, y);
    (layout, sys)
}

/// Adds `d_i^Y h_b - h_t d_i^X = 0` for the unknown blocks `h` in `layout`.
pub(crate) fn add_commutation(
    sys: &mut System,
    layout: &Layout<Bidegree>,
    x: &Multicomplex,
    y: &Multicomplex,
) {
    let ring = x.ring;
    let imax = x.max_index().max(y.max_index());
    let minus = ring.from_i64(-1);
    for &b in x.ranks.keys() {
        for i in 0..=imax {
            let t = b.shift(i);
            let rows = y.rank(t);
            if rows == 0 {
                continue;
            }
            let mut terms = Vec::new();
            if let (Some(dy), Some(blk)) = (y.d_ref(i, b), layout.get(&b)) {
                terms.push(Term {
                    left: Some(dy),
                    block: blk,
                    right: None,
                    coeff: ring.one(),
                });
            }
            if let (Some(dx), Some(blk)) = (x.d_ref(i, b), layout.get(&t)) {
                terms.push(Term {
                    left: None,
                    block: blk,
                    right: Some(dx),
                    coeff: minus.clone(),
                });
            }
            if !terms.is_empty() {
                sys.add_matrix_equation((rows, x.rank(b)), &terms, None);
            }
        }
    }
}

/// A basis of the module of maps `X → Y`.
pub fn morphism_space(x: &Multicomplex, y: &Multicomplex) -> Vec<MultiMap> {
    let ring = x.ring;
    let (layout, sys) = morphism_system(x, y);
    if layout.total == 0 {
        return Vec::new();
    }
    let k = if sys.len() == 0 {
        ExactMatrix::identity(ring, layout.total)
    } else {
        kernel(&sys.matrix())
    };
    (0..k.cols())
        .map(|j| MultiMap::from_raw(x.clone(), y.clone(), layout.unpack(ring, &k.column(j))))
        .collect()
}

/// Searches the morphism module for a map invertible at every bidegree.
///
/// Tries basis elements, then small integer combinations; the search is
/// deterministic.
pub fn find_isomorphism(x: &Multicomplex, y: &Multicomplex) -> Option<MultiMap> {
    if x.ranks != y.ranks {
        return None;
    }
    if x.is_zero() {
        return Some(MultiMap::zero(x, y));
    }
    let basis = morphism_space(x, y);
    if basis.is_empty() {
        return None;
    }
    let ring = x.ring;
    search_combination(
        basis.len(),
        |coeffs| {
            let mut acc = MultiMap::zero(x, y);
            for (c, m) in coeffs.iter().zip(&basis) {
                if *c != 0 {
                    acc = acc.add(&m.scale(&ring.from_i64(*c)));
                }
            }
            acc
        },
        |m| m.is_isomorphism(),
    )
}

/// Deterministic search over small integer coefficient vectors of length `k`:
/// unit vectors, all ones, then `{-1,0,1}^k` for `k ≤ 7`, then seeded samples.
pub fn search_combination<T>(
    k: usize,
    build: impl Fn(&[i64]) -> T,
    accept: impl Fn(&T) -> bool,
) -> Option<T> {
    let mut tries: Vec<Vec<i64>> = Vec::new();
    for j in 0..k {
        let mut v = vec![0; k];
        v[j] = 1;
        tries.push(v);
    }
    tries.push(vec![1; k]);
    for cand in tries {
        let m = build(&cand);
        if accept(&m) {
            return Some(m);
        }
    }
    if k <= 7 {
        let total = 3usize.pow(k as u32);
        for code in 0..total {
            let mut c = code;
            let v: Vec<i64> = (0..k)
                .map(|_| {
                    let d = (c % 3) as i64 - 1;
                    c /= 3;
                    d
                })
                .collect();
            let m = build(&v);
            if accept(&m) {
                return Some(m);
            }
        }
    }
    let mut rng = crate::random::seeded(0x150);
    for _ in 0..3000 {
        let v: Vec<i64> = (0..k).map(|_| rng.gen_range(-2..=2)).collect();
        let m = build(&v);
        if accept(&m) {
            return Some(m);
        }
    }
    None
}
