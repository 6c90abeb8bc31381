//! Bicomplexes with anticommuting `d_h` and `d_v`, concentrated in `p ≥ 0`.

use std::collections::BTreeMap;

use crate::bidegree::Bidegree;
use crate::chain::{ChainComplex, ChainMap};
use crate::error::{Error, Result, Violation, ViolationKind};
use crate::matrix::ExactMatrix;
use crate::multi::{morphism_space, Flavor, MultiMap, Multicomplex, Presentation, SubKind, Support};
use crate::ring::RingSpec;

pub const DV: usize = 0;
pub const DH: usize = 1;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bicomplex(Multicomplex);

/// Horizontal (`d_h`) or vertical (`d_v`) direction.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    H,
    V,
}

impl Direction {
    fn primary(self) -> usize {
        match self {
            Direction::V => DV,
            Direction::H => DH,
        }
    }

    fn other(self) -> usize {
        match self {
            Direction::V => DH,
            Direction::H => DV,
        }
    }
}

/// The standard bicomplexes, all of free rank `r` per cell.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BicomplexKind {
    Sphere {
        p: i32,
        q: i32,
        r: usize,
    },
    Disc {
        p: i32,
        q: i32,
        r: usize,
    },
    HBoundary {
        p: i32,
        q: i32,
        r: usize,
    },
    VBoundary {
        p: i32,
        q: i32,
        r: usize,
    },
    /// A non-negative complex placed in row `q`, differential `d_h`.
    Z {
        q: i32,
        c: ChainComplex,
    },
    /// A non-negative complex in rows `q`, `q-1`, joined by `d_v = (-1)^p`.
    Cq {
        q: i32,
        c: ChainComplex,
    },
    /// A complex placed in column 0, differential `d_v`.
    IncludeChain(ChainComplex),
}

/// Checks raw data against the bicomplex identities.
pub fn validate_bicomplex(raw: &Multicomplex) -> Vec<Violation> {
    raw.validate(Flavor::Bicomplex)
}

fn cell_ranks(cells: &[(i32, i32)], r: usize) -> BTreeMap<Bidegree, usize> {
    cells.iter().map(|&(p, q)| (Bidegree::new(p, q), r)).collect()
}

impl Bicomplex {
    pub fn zero(ring: RingSpec) -> Self {
        Bicomplex(Multicomplex::zero(ring))
    }

    /// `dh` and `dv` are keyed by source bidegree.
    pub fn new(
        ring: RingSpec,
        ranks: BTreeMap<Bidegree, usize>,
        dh: BTreeMap<Bidegree, ExactMatrix>,
        dv: BTreeMap<Bidegree, ExactMatrix>,
    ) -> Result<Self> {
        let mut maps = BTreeMap::new();
        for (b, m) in dv {
            maps.insert((DV, b), m);
        }
        for (b, m) in dh {
            maps.insert((DH, b), m);
        }
        Self::from_multi(Multicomplex::from_raw(ring, ranks, maps))
    }

    pub fn from_multi(m: Multicomplex) -> Result<Self> {
        let v = validate_bicomplex(&m);
        if v.is_empty() {
            Ok(Bicomplex(m))
        } else {
            Err(Error::Validation(v))
        }
    }

    pub(crate) fn from_multi_unchecked(m: Multicomplex) -> Self {
        debug_assert!(validate_bicomplex(&m).is_empty(), "{:?}", validate_bicomplex(&m));
        Bicomplex(m)
    }

    pub fn standard(ring: RingSpec, kind: &BicomplexKind) -> Result<Self> {
        let id = |r: usize| ExactMatrix::identity(ring, r);
        let b = Bidegree::new;
        let need_p = |p: i32| {
            if p <= 0 {
                Err(Error::BadParameter(format!("p must be positive, got {p}")))
            } else {
                Ok(())
            }
        };
        let need_r = |r: usize| {
            if r == 0 {
                Err(Error::BadParameter("rank must be positive".into()))
            } else {
                Ok(())
            }
        };
        let m = match kind {
            &BicomplexKind::Sphere { p, q, r } => {
                need_r(r)?;
                if p < 0 {
                    return Err(Error::BadParameter(format!("sphere needs p >= 0, got {p}")));
                }
                Multicomplex::from_raw(ring, cell_ranks(&[(p, q)], r), BTreeMap::new())
            }
            &BicomplexKind::Disc { p, q, r } => {
                need_p(p)?;
                need_r(r)?;
                let ranks = cell_ranks(&[(p, q), (p, q - 1), (p - 1, q), (p - 1, q - 1)], r);
                let maps = BTreeMap::from([
                    ((DV, b(p, q)), id(r).neg()),
                    ((DH, b(p, q)), id(r)),
                    ((DH, b(p, q - 1)), id(r)),
                    ((DV, b(p - 1, q)), id(r)),
                ]);
                Multicomplex::from_raw(ring, ranks, maps)
            }
            &BicomplexKind::HBoundary { p, q, r } => {
                need_p(p)?;
                need_r(r)?;
                let ranks = cell_ranks(&[(p - 1, q), (p - 1, q - 1)], r);
                let maps = BTreeMap::from([((DV, b(p - 1, q)), id(r))]);
                Multicomplex::from_raw(ring, ranks, maps)
            }
            &BicomplexKind::VBoundary { p, q, r } => {
                need_p(p)?;
                need_r(r)?;
                let ranks = cell_ranks(&[(p, q - 1), (p - 1, q - 1)], r);
                let maps = BTreeMap::from([((DH, b(p, q - 1)), id(r))]);
                Multicomplex::from_raw(ring, ranks, maps)
            }
            BicomplexKind::Z { q, c } => {
                nonneg(c)?;
                let ranks = c.ranks().iter().map(|(&n, &r)| (b(n, *q), r)).collect();
                let maps = c
                    .differentials()
                    .iter()
                    .map(|(&n, m)| ((DH, b(n, *q)), m.clone()))
                    .collect();
                Multicomplex::from_raw(ring, ranks, maps)
            }
            BicomplexKind::Cq { q, c } => {
                nonneg(c)?;
                let mut ranks = BTreeMap::new();
                let mut maps = BTreeMap::new();
                for (&n, &r) in c.ranks() {
                    ranks.insert(b(n, *q), r);
                    ranks.insert(b(n, q - 1), r);
                    maps.insert((DV, b(n, *q)), id(r).scale(&ring.sign(n as i64)));
                }
                for (&n, m) in c.differentials() {
                    maps.insert((DH, b(n, *q)), m.clone());
                    maps.insert((DH, b(n, q - 1)), m.clone());
                }
                Multicomplex::from_raw(ring, ranks, maps)
            }
            BicomplexKind::IncludeChain(c) => {
                let ranks = c.ranks().iter().map(|(&n, &r)| (b(0, n), r)).collect();
                let maps = c
                    .differentials()
                    .iter()
                    .map(|(&n, m)| ((DV, b(0, n)), m.clone()))
                    .collect();
                Multicomplex::from_raw(ring, ranks, maps)
            }
        };
        Self::from_multi(m)
    }

    pub fn as_multi(&self) -> &Multicomplex {
        &self.0
    }

    pub fn into_multi(self) -> Multicomplex {
        self.0
    }

    pub fn ring(&self) -> RingSpec {
        self.0.ring()
    }

    pub fn rank(&self, b: Bidegree) -> usize {
        self.0.rank(b)
    }

    pub fn ranks(&self) -> &BTreeMap<Bidegree, usize> {
        self.0.ranks()
    }

    pub fn support(&self) -> Option<Support> {
        self.0.support()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn dh(&self, b: Bidegree) -> ExactMatrix {
        self.0.d(DH, b)
    }

    pub fn dv(&self, b: Bidegree) -> ExactMatrix {
        self.0.d(DV, b)
    }

    pub fn tot(&self) -> ChainComplex {
        self.0.tot()
    }

    pub fn tensor(&self, other: &Self) -> Self {
        Bicomplex::from_multi_unchecked(self.0.tensor(&other.0))
    }

    pub fn direct_sum(&self, other: &Self) -> Self {
        Bicomplex(self.0.direct_sum(&other.0))
    }

    /// Internal Hom; only `p = 0` carries the `d_h`-equivariance constraint.
    pub fn hom(&self, other: &Self) -> Result<Self> {
        let h = self.0.hom(&other.0, 1)?;
        Self::from_multi(h).map_err(|e| Error::Internal(format!("Hom is not a bicomplex: {e}")))
    }

    /// `Z`, `B` or `H` of the `dir` differential, with the other one induced.
    pub fn subquotient(&self, dir: Direction, kind: SubKind) -> Result<Self> {
        Ok(self.subquotient_with_presentation(dir, kind)?.0)
    }

    pub fn subquotient_with_presentation(
        &self,
        dir: Direction,
        kind: SubKind,
    ) -> Result<(Self, Presentation)> {
        let (m, pres) = self.0.subquotient(dir.primary(), dir.other(), kind)?;
        Ok((Bicomplex::from_multi_unchecked(m), pres))
    }

    /// Dimensions of `H^h(H^v(X))`.
    pub fn e2(&self) -> Result<BTreeMap<Bidegree, usize>> {
        if !self.ring().is_field() {
            return Err(Error::UnsupportedRing {
                op: "e2",
                ring: self.ring(),
            });
        }
        let hv = self.subquotient(Direction::V, SubKind::H)?;
        let hh = hv.subquotient(Direction::H, SubKind::H)?;
        Ok(hh.ranks().clone())
    }

    /// Column 0 with `d_v`.
    pub fn ev0(&self) -> ChainComplex {
        self.0.column(0)
    }

    pub fn column(&self, p: i32) -> ChainComplex {
        self.0.column(p)
    }

    pub fn row(&self, q: i32) -> ChainComplex {
        self.0.row(q)
    }

    /// `d_v` scaled by `(-1)^p`; the result has commuting squares.
    pub fn to_commuting(&self) -> Multicomplex {
        self.0.flip_vertical_signs()
    }

    /// Inverse of `to_commuting`; checks the input squares commute.
    pub fn from_commuting(raw: &Multicomplex) -> Result<Self> {
        let mut bad = Vec::new();
        for (&(i, b), m) in raw.maps() {
            if i >= 2 {
                bad.push(Violation {
                    kind: ViolationKind::HigherDifferential { index: i },
                    at: b,
                });
                continue;
            }
            let t = b.shift(i);
            if let Some(n) = raw.d_ref(i, t) {
                if !n.mul(m).is_zero() {
                    let kind = if i == 0 {
                        ViolationKind::VerticalSquare
                    } else {
                        ViolationKind::HorizontalSquare
                    };
                    bad.push(Violation { kind, at: b });
                }
            }
            if i == 0 {
                let lhs = raw.d(DH, t).mul(m);
                let rhs = raw.d(DV, b.shift(1)).mul(&raw.d(DH, b));
                if lhs != rhs {
                    bad.push(Violation {
                        kind: ViolationKind::Anticommutation,
                        at: b,
                    });
                }
            }
        }
        if !bad.is_empty() {
            return Err(Error::Validation(bad));
        }
        Self::from_multi(raw.flip_vertical_signs())
    }
}

fn nonneg(c: &ChainComplex) -> Result<()> {
    if c.support().is_some_and(|(lo, _)| lo < 0) {
        return Err(Error::BadParameter(
            "complex must be concentrated in degrees >= 0".into(),
        ));
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BicomplexMap(MultiMap);

impl BicomplexMap {
    pub fn new(source: Bicomplex, target: Bicomplex, f: BTreeMap<Bidegree, ExactMatrix>) -> Result<Self> {
        Ok(BicomplexMap(MultiMap::new(source.0, target.0, f)?))
    }

    pub fn from_multi(m: MultiMap) -> Result<Self> {
        Bicomplex::from_multi(m.source().clone())?;
        Bicomplex::from_multi(m.target().clone())?;
        let v = m.validate();
        if v.is_empty() {
            Ok(BicomplexMap(m))
        } else {
            Err(Error::Validation(v))
        }
    }

    pub fn identity(x: &Bicomplex) -> Self {
        BicomplexMap(MultiMap::identity(&x.0))
    }

    pub fn zero(x: &Bicomplex, y: &Bicomplex) -> Self {
        BicomplexMap(MultiMap::zero(&x.0, &y.0))
    }

    pub fn as_multi(&self) -> &MultiMap {
        &self.0
    }

    pub fn into_multi(self) -> MultiMap {
        self.0
    }

    pub fn source(&self) -> Bicomplex {
        Bicomplex(self.0.source().clone())
    }

    pub fn target(&self) -> Bicomplex {
        Bicomplex(self.0.target().clone())
    }

    pub fn at(&self, b: Bidegree) -> ExactMatrix {
        self.0.at(b)
    }

    pub fn compose(&self, first: &BicomplexMap) -> Self {
        BicomplexMap(self.0.compose(&first.0))
    }

    pub fn tensor(&self, g: &BicomplexMap) -> Self {
        BicomplexMap(self.0.tensor(&g.0))
    }

    pub fn tot(&self) -> ChainMap {
        self.0.tot()
    }

    pub fn kernel(&self) -> (Bicomplex, BicomplexMap) {
        let (k, i) = self.0.kernel();
        (Bicomplex::from_multi_unchecked(k), BicomplexMap(i))
    }

    /// Over ℤ fails with `TorsionCokernel`.
    pub fn cokernel(&self) -> Result<(Bicomplex, BicomplexMap)> {
        let (c, p) = self.0.cokernel()?;
        Ok((Bicomplex::from_multi_unchecked(c), BicomplexMap(p)))
    }

    /// Whether row `index` (`H`) or column `index` (`V`) is a quasi-isomorphism.
    pub fn line_quasi_iso(&self, dir: Direction, index: i32) -> bool {
        match dir {
            Direction::V => self.0.column(index).is_quasi_iso(),
            Direction::H => self.0.row(index).is_quasi_iso(),
        }
    }

    /// The map induced on a directional subquotient.
    pub fn subquotient(&self, dir: Direction, kind: SubKind) -> Result<BicomplexMap> {
        let (s, ps) = self.source().subquotient_with_presentation(dir, kind)?;
        let (t, pt) = self.target().subquotient_with_presentation(dir, kind)?;
        Ok(BicomplexMap(self.0.induced((&s.0, &ps), (&t.0, &pt))?))
    }
}

/// Koszul symmetry `x⊗y ↦ (-1)^{|x||y|} y⊗x`.
pub fn swap_map(x: &Multicomplex, y: &Multicomplex) -> MultiMap {
    let ring = x.ring();
    let src = x.tensor(y);
    let tgt = y.tensor(x);
    let ls = x.tensor_layout(y);
    let lt = y.tensor_layout(x);
    let mut f = BTreeMap::new();
    for (&b, parts) in &ls {
        let mut m = ExactMatrix::zeros(ring, tgt.rank(b), src.rank(b));
        for &(bx, by, c0) in parts {
            let r0 = lt[&b].iter().find(|t| t.0 == by && t.1 == bx).unwrap().2;
            let (nx, ny) = (x.rank(bx), y.rank(by));
            let s = ring.sign(bx.total() as i64 * by.total() as i64);
            for a in 0..nx {
                for c in 0..ny {
                    m.set(r0 + c * nx + a, c0 + a * ny + c, s.clone());
                }
            }
        }
        f.insert(b, m);
    }
    MultiMap::from_raw(src, tgt, f)
}

/// Dimension of the module of maps `X → Y`.
pub fn morphism_rank(x: &Multicomplex, y: &Multicomplex) -> usize {
    morphism_space(x, y).len()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn disc_is_valid() {
        for ring in [RingSpec::Integers, RingSpec::PrimeField(2)] {
            let d = Bicomplex::standard(ring, &BicomplexKind::Disc { p: 2, q: 0, r: 1 }).unwrap();
            assert_eq!(d.as_multi().total_rank(), 4);
            assert!(d.tot().is_acyclic());
        }
    }

    #[test]
    fn commuting_square_rejected() {
        let ring = RingSpec::Integers;
        let b = Bidegree::new;
        let ranks = cell_ranks(&[(1, 0), (1, -1), (0, 0), (0, -1)], 1);
        let one = || ExactMatrix::identity(ring, 1);
        let dh = BTreeMap::from([(b(1, 0), one()), (b(1, -1), one())]);
        let dv = BTreeMap::from([(b(1, 0), one()), (b(0, 0), one())]);
        let err = Bicomplex::new(ring, ranks, dh, dv).unwrap_err();
        let Error::Validation(v) = err else { panic!() };
        assert_eq!(
            v,
            vec![Violation {
                kind: ViolationKind::Anticommutation,
                at: b(1, 0)
            }]
        );
    }
}
