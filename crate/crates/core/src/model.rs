//! The total and Cartan–Eilenberg model structures on bicomplexes and the
//! total model structure on twisted complexes: generating maps, lifting,
//! classification, pushouts and Cartan–Eilenberg resolutions.

use std::collections::BTreeMap;
use std::fmt;

use crate::bicomplex::{Bicomplex, BicomplexKind, BicomplexMap};
use crate::bidegree::Bidegree;
use crate::chain::ChainComplex;
use crate::error::{Error, Result};
use crate::linalg::{self, kernel, smith_normal_form, Solver};
use crate::matrix::ExactMatrix;
use crate::multi::{
    biproduct, find_isomorphism, morphism_space, search_combination, MultiMap, Multicomplex, SubKind, Support,
};
use crate::ring::{RingSpec, Scalar};
use crate::twisted;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum StructureId {
    TotalBicomplex,
    CEBicomplex,
    TotalTwisted,
}

impl StructureId {
    pub const ALL: [StructureId; 3] = [
        StructureId::TotalBicomplex,
        StructureId::CEBicomplex,
        StructureId::TotalTwisted,
    ];

    pub fn name(self) -> &'static str {
        match self {
            StructureId::TotalBicomplex => "tot",
            StructureId::CEBicomplex => "ce",
            StructureId::TotalTwisted => "twisted-tot",
        }
    }
}

impl std::str::FromStr for StructureId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "tot" => Ok(StructureId::TotalBicomplex),
            "ce" => Ok(StructureId::CEBicomplex),
            "twisted-tot" | "tw" => Ok(StructureId::TotalTwisted),
            _ => Err(Error::Parse(format!("unknown structure '{s}'"))),
        }
    }
}

/// Shapes of generating maps; `p`, `q` as in the corresponding objects.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    /// `S^{0,q-1} ↪ ∂_h D^{1,q}`
    SphereToHBoundary,
    /// `∂_v D^{p,q} ↪ D^{p,q}`
    VBoundaryToDisc,
    /// `0 ↪ ∂_h D^{1,q}`
    ZeroToHBoundary,
    /// `0 ↪ S^{0,q}`
    ZeroToSphere,
    /// `S^{p-1,q-1} ↪ ∂_v D^{p,q}`
    SphereToVBoundary,
    /// `∂_h D^{p,q} ↪ D^{p,q}`
    HBoundaryToDisc,
    /// `0 ↪ ∂_v D^{p,q}`
    ZeroToVBoundary,
    /// `∂_v D̃^{p,q} ↪ D̃^{p,q}`
    TwistedBoundaryToDisc,
    /// `0 ↪ D̃^{0,q}`
    ZeroToTwistedDisc,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GeneratorRef {
    pub family: Family,
    pub p: i32,
    pub q: i32,
}

impl fmt::Display for GeneratorRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.family {
            Family::SphereToHBoundary
            | Family::ZeroToHBoundary
            | Family::ZeroToSphere
            | Family::ZeroToTwistedDisc => write!(f, "{:?}({})", self.family, self.q),
            _ => write!(f, "{:?}({},{})", self.family, self.p, self.q),
        }
    }
}

/// Membership in the generating cofibrations `I` and trivial cofibrations `J`.
fn membership(s: StructureId, fam: Family) -> (bool, bool) {
    use Family::*;
    use StructureId::*;
    match (s, fam) {
        (TotalBicomplex, SphereToHBoundary) => (true, false),
        (TotalBicomplex, VBoundaryToDisc) => (true, true),
        (TotalBicomplex, ZeroToHBoundary) => (false, true),
        (CEBicomplex, ZeroToSphere | SphereToVBoundary) => (true, false),
        (CEBicomplex, ZeroToHBoundary | HBoundaryToDisc) => (true, true),
        (CEBicomplex, ZeroToVBoundary) => (false, true),
        (TotalTwisted, TwistedBoundaryToDisc) => (true, true),
        (TotalTwisted, ZeroToTwistedDisc) => (false, true),
        _ => (false, false),
    }
}

/// Families of a structure, with whether they carry a free `p > 0`.
fn families(s: StructureId) -> &'static [(Family, bool)] {
    use Family::*;
    match s {
        StructureId::TotalBicomplex => &[
            (SphereToHBoundary, false),
            (VBoundaryToDisc, true),
            (ZeroToHBoundary, false),
        ],
        StructureId::CEBicomplex => &[
            (ZeroToSphere, false),
            (SphereToVBoundary, true),
            (ZeroToHBoundary, false),
            (HBoundaryToDisc, true),
            (ZeroToVBoundary, true),
        ],
        StructureId::TotalTwisted => &[(TwistedBoundaryToDisc, true), (ZeroToTwistedDisc, false)],
    }
}

impl GeneratorRef {
    pub fn new(family: Family, p: i32, q: i32) -> Self {
        GeneratorRef { family, p, q }
    }

    pub fn in_i(&self, s: StructureId) -> bool {
        membership(s, self.family).0
    }

    pub fn in_j(&self, s: StructureId) -> bool {
        membership(s, self.family).1 && !(self.family == Family::TwistedBoundaryToDisc && self.p == 0)
    }

    /// The inclusion `A ↪ B`.
    pub fn build(&self, ring: RingSpec) -> Result<MultiMap> {
        use Family::*;
        let (p, q) = (self.p, self.q);
        let std = |k: BicomplexKind| Bicomplex::standard(ring, &k).map(Bicomplex::into_multi);
        let zero = || Multicomplex::zero(ring);
        let sphere = |p, q| std(BicomplexKind::Sphere { p, q, r: 1 });
        let disc = |p, q| std(BicomplexKind::Disc { p, q, r: 1 });
        let hb = |p, q| std(BicomplexKind::HBoundary { p, q, r: 1 });
        let vb = |p, q| std(BicomplexKind::VBoundary { p, q, r: 1 });
        let (a, b) = match self.family {
            SphereToHBoundary => (sphere(0, q - 1)?, hb(1, q)?),
            VBoundaryToDisc => (vb(p, q)?, disc(p, q)?),
            ZeroToHBoundary => (zero(), hb(1, q)?),
            ZeroToSphere => (zero(), sphere(0, q)?),
            SphereToVBoundary => (sphere(p - 1, q - 1)?, vb(p, q)?),
            HBoundaryToDisc => (hb(p, q)?, disc(p, q)?),
            ZeroToVBoundary => (zero(), vb(p, q)?),
            TwistedBoundaryToDisc => return Ok(twisted::boundary_inclusion(ring, p, q)?.into_multi()),
            ZeroToTwistedDisc => (zero(), twisted::twisted_disc(ring, 0, q)?.into_multi()),
        };
        cell_inclusion(&a, &b)
    }
}

/// Identity on every cell of `a`, which must be a subobject of `b` on the same basis.
fn cell_inclusion(a: &Multicomplex, b: &Multicomplex) -> Result<MultiMap> {
    let ring = a.ring();
    let f = a
        .ranks()
        .iter()
        .map(|(&k, &r)| (k, ExactMatrix::identity(ring, r)))
        .collect();
    MultiMap::new(a.clone(), b.clone(), f)
}

/// The projection `D^{p,q} ↠ ∂_v D^{p,q+1}`, identity on the shared cells.
pub fn disc_onto_vboundary(ring: RingSpec, p: i32, q: i32) -> Result<MultiMap> {
    let d = Bicomplex::standard(ring, &BicomplexKind::Disc { p, q, r: 1 })?.into_multi();
    let b = Bicomplex::standard(ring, &BicomplexKind::VBoundary { p, q: q + 1, r: 1 })?.into_multi();
    let f = b
        .ranks()
        .iter()
        .map(|(&k, &r)| (k, ExactMatrix::identity(ring, r)))
        .collect();
    MultiMap::new(d, b, f)
}

fn union_support(f: &MultiMap) -> Option<Support> {
    match (f.source().support(), f.target().support()) {
        (Some(a), Some(b)) => Some(a.union(b)),
        (a, b) => a.or(b),
    }
}

/// Generators that can pose a non-trivial lifting problem against `f`.
pub fn relevant_generators(f: &MultiMap, s: StructureId) -> Vec<GeneratorRef> {
    let Some(sup) = union_support(f) else {
        return Vec::new();
    };
    let (plo, phi) = ((sup.pmin - 1).max(0), sup.pmax + 1);
    let (qlo, qhi) = (sup.qmin - 1, sup.qmax + 1);
    let mut out = Vec::new();
    for &(fam, free_p) in families(s) {
        for q in qlo..=qhi {
            if free_p {
                let start = if fam == Family::TwistedBoundaryToDisc {
                    plo
                } else {
                    plo.max(1)
                };
                for p in start..=phi {
                    out.push(GeneratorRef::new(fam, p, q));
                }
            } else {
                out.push(GeneratorRef::new(fam, 0, q));
            }
        }
    }
    out
}

/// A commuting square `g ∘ u = f ∘ i`.
#[derive(Clone, Debug)]
pub struct LiftingProblem {
    pub i: MultiMap,
    pub g: MultiMap,
    pub u: MultiMap,
    pub f: MultiMap,
}

/// Entries of `m` on the given source bidegrees, row-major.
fn flat(m: &MultiMap, keys: &[Bidegree]) -> Vec<Scalar> {
    let mut out = Vec::new();
    for &b in keys {
        let a = m.at(b);
        for r in 0..a.rows() {
            for c in 0..a.cols() {
                out.push(a.get(r, c).clone());
            }
        }
    }
    out
}

fn flat_len(x: &Multicomplex, y: &Multicomplex) -> usize {
    x.ranks().iter().map(|(&b, &r)| r * y.rank(b)).sum()
}

fn columns_matrix(ring: RingSpec, rows: usize, cols: &[Vec<Scalar>]) -> ExactMatrix {
    let mut m = ExactMatrix::zeros(ring, rows, cols.len());
    for (j, c) in cols.iter().enumerate() {
        for (i, v) in c.iter().enumerate() {
            if !ring.is_zero(v) {
                m.set(i, j, v.clone());
            }
        }
    }
    m
}

/// Solver for `h ↦ (h ∘ i, g ∘ h)` over the maps `h: B → X`.
struct LiftSystem {
    ring: RingSpec,
    basis: Vec<MultiMap>,
    solver: Option<Solver>,
    a_keys: Vec<Bidegree>,
    b_keys: Vec<Bidegree>,
}

impl LiftSystem {
    fn new(i: &MultiMap, g: &MultiMap) -> Self {
        let ring = i.ring();
        let (a, b, x, y) = (i.source(), i.target(), g.source(), g.target());
        let a_keys: Vec<_> = a.ranks().keys().copied().collect();
        let b_keys: Vec<_> = b.ranks().keys().copied().collect();
        let basis = morphism_space(b, x);
        let rows = flat_len(a, x) + flat_len(b, y);
        let cols: Vec<Vec<Scalar>> = basis
            .iter()
            .map(|h| {
                let mut v = flat(&h.compose(i), &a_keys);
                v.extend(flat(&g.compose(h), &b_keys));
                v
            })
            .collect();
        let solver = (!basis.is_empty() && rows > 0).then(|| Solver::new(&columns_matrix(ring, rows, &cols)));
        LiftSystem {
            ring,
            basis,
            solver,
            a_keys,
            b_keys,
        }
    }

    fn rhs(&self, u: &[Scalar], f: &[Scalar]) -> Vec<Scalar> {
        u.iter().chain(f).cloned().collect()
    }

    fn solve(&self, rhs: &[Scalar]) -> Option<Vec<Scalar>> {
        match &self.solver {
            Some(s) => s.solve(rhs),
            None => rhs.iter().all(|v| self.ring.is_zero(v)).then(Vec::new),
        }
    }
}

/// Finds `h` with `h ∘ i = u` and `g ∘ h = f`.
pub fn solve_lift(p: &LiftingProblem) -> Result<Option<MultiMap>> {
    if p.g.compose(&p.u) != p.f.compose(&p.i) {
        return Err(Error::BadSquare("g∘u differs from f∘i".into()));
    }
    if p.i.target() != p.f.source() || p.g.source() != p.u.target() {
        return Err(Error::BadSquare("objects of the square do not match".into()));
    }
    let sys = LiftSystem::new(&p.i, &p.g);
    let rhs = sys.rhs(&flat(&p.u, &sys.a_keys), &flat(&p.f, &sys.b_keys));
    let Some(c) = sys.solve(&rhs) else { return Ok(None) };
    let ring = p.i.ring();
    let mut h = MultiMap::zero(p.i.target(), p.g.source());
    for (m, k) in sys.basis.iter().zip(&c) {
        if !ring.is_zero(k) {
            h = h.add(&m.scale(k));
        }
    }
    Ok(Some(h))
}

/// Whether every commuting square from `i` to `g` has a lift.
pub fn universally_liftable(i: &MultiMap, g: &MultiMap) -> bool {
    let ring = i.ring();
    let (a, b, x, y) = (i.source(), i.target(), g.source(), g.target());
    let us = morphism_space(a, x);
    let fs = morphism_space(b, y);
    if us.is_empty() && fs.is_empty() {
        return true;
    }
    let a_keys: Vec<_> = a.ranks().keys().copied().collect();
    let b_keys: Vec<_> = b.ranks().keys().copied().collect();
    // squares: g∘u - f∘i = 0
    let rows = flat_len(a, y);
    let minus = ring.from_i64(-1);
    let mut cols: Vec<Vec<Scalar>> = us.iter().map(|u| flat(&g.compose(u), &a_keys)).collect();
    cols.extend(fs.iter().map(|f| flat(&f.compose(i).scale(&minus), &a_keys)));
    let squares = if rows == 0 {
        ExactMatrix::identity(ring, cols.len())
    } else {
        kernel(&columns_matrix(ring, rows, &cols))
    };
    if squares.cols() == 0 {
        return true;
    }
    let u_flat: Vec<Vec<Scalar>> = us.iter().map(|u| flat(u, &a_keys)).collect();
    let f_flat: Vec<Vec<Scalar>> = fs.iter().map(|f| flat(f, &b_keys)).collect();
    let combine = |vecs: &[Vec<Scalar>], coeffs: &[Scalar], len: usize| {
        let mut acc = vec![ring.zero(); len];
        for (v, c) in vecs.iter().zip(coeffs) {
            if ring.is_zero(c) {
                continue;
            }
            for (a, e) in acc.iter_mut().zip(v) {
                *a = ring.add(a, &ring.mul(c, e));
            }
        }
        acc
    };
    let sys = LiftSystem::new(i, g);
    let (nu, lu, lf) = (us.len(), flat_len(a, x), flat_len(b, y));
    (0..squares.cols()).all(|j| {
        let col = squares.column(j);
        let u = combine(&u_flat, &col[..nu], lu);
        let f = combine(&f_flat, &col[nu..], lf);
        sys.solve(&sys.rhs(&u, &f)).is_some()
    })
}

#[derive(Clone, Debug)]
pub struct RlpEntry {
    pub generator: GeneratorRef,
    pub in_i: bool,
    pub in_j: bool,
    pub liftable: bool,
}

#[derive(Clone, Debug)]
pub struct RlpReport {
    pub entries: Vec<RlpEntry>,
    pub rlp_i: bool,
    pub rlp_j: bool,
}

pub fn rlp_report(f: &MultiMap, s: StructureId) -> Result<RlpReport> {
    let ring = f.ring();
    let mut entries = Vec::new();
    for g in relevant_generators(f, s) {
        let i = g.build(ring)?;
        let liftable = universally_liftable(&i, f);
        entries.push(RlpEntry {
            generator: g,
            in_i: g.in_i(s),
            in_j: g.in_j(s),
            liftable,
        });
    }
    let rlp_i = entries.iter().filter(|e| e.in_i).all(|e| e.liftable);
    let rlp_j = entries.iter().filter(|e| e.in_j).all(|e| e.liftable);
    Ok(RlpReport {
        entries,
        rlp_i,
        rlp_j,
    })
}

/// One evaluated condition of a theorem.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Evidence {
    pub condition: String,
    pub holds: bool,
}

#[derive(Clone, Debug)]
pub struct ClassifyReport {
    /// `None` when the ring does not allow deciding it.
    pub is_weq: Option<bool>,
    pub is_fibration: bool,
    pub is_trivial_fibration: bool,
    pub evidence: Vec<Evidence>,
}

fn note(ev: &mut Vec<Evidence>, condition: String, holds: bool) -> bool {
    ev.push(Evidence { condition, holds });
    holds
}

/// Records `name` as holding, or lists every point where it fails.
fn failures(ev: &mut Vec<Evidence>, name: &str, points: impl Iterator<Item = (String, bool)>) -> bool {
    let bad: Vec<String> = points.filter(|(_, ok)| !ok).map(|(at, _)| at).collect();
    if bad.is_empty() {
        note(ev, format!("{name} holds"), true)
    } else {
        note(ev, format!("{name} fails at {}", bad.join(", ")), false)
    }
}

fn range_p(f: &MultiMap) -> impl Iterator<Item = i32> {
    union_support(f).into_iter().flat_map(|s| s.pmin.max(0)..=s.pmax)
}

fn range_q(f: &MultiMap) -> impl Iterator<Item = i32> {
    union_support(f).into_iter().flat_map(|s| s.qmin..=s.qmax)
}

fn pointwise_surjective(f: &MultiMap, ev: &mut Vec<Evidence>) -> bool {
    let pts: Vec<_> = f
        .target()
        .ranks()
        .keys()
        .map(|&b| (b.to_string(), linalg::is_surjective(&f.at(b))))
        .collect();
    failures(ev, "pointwise surjectivity", pts.into_iter())
}

/// Evaluates the theorem characterisations of the structure `s`.
pub fn classify_map(f: &MultiMap, s: StructureId) -> Result<ClassifyReport> {
    let mut ev = Vec::new();
    let surj = pointwise_surjective(f, &mut ev);
    match s {
        StructureId::TotalBicomplex | StructureId::TotalTwisted => {
            let cols: Vec<(String, bool)> = range_p(f)
                .filter(|&p| p > 0)
                .map(|p| (format!("column {p}"), f.column(p).is_quasi_iso()))
                .collect();
            let pos = failures(&mut ev, "H^v iso for p > 0", cols.into_iter());
            let col0 = note(&mut ev, "H^v iso at p = 0".into(), f.column(0).is_quasi_iso());
            let weq = note(&mut ev, "Tot(f) quasi-isomorphism".into(), f.tot().is_quasi_iso());
            let fib = surj && pos;
            Ok(ClassifyReport {
                is_weq: Some(weq),
                is_fibration: fib,
                is_trivial_fibration: fib && col0,
                evidence: ev,
            })
        }
        StructureId::CEBicomplex => {
            let (x, y) = (f.source(), f.target());
            let (zx, px) = x.subquotient(0, 1, SubKind::Z)?;
            let (zy, py) = y.subquotient(0, 1, SubKind::Z)?;
            let zf = f.induced((&zx, &px), (&zy, &py))?;
            let zs: Vec<(String, bool)> = zy
                .ranks()
                .keys()
                .filter(|b| b.p > 0)
                .map(|&b| (b.to_string(), linalg::is_surjective(&zf.at(b))))
                .collect();
            let zsurj = failures(&mut ev, "Z^v surjectivity", zs.into_iter());
            let rows: Vec<(String, bool)> = range_q(f)
                .map(|q| (format!("row {q}"), f.row(q).is_quasi_iso()))
                .collect();
            let hh = failures(&mut ev, "H^h(f) iso", rows.into_iter());
            let zrows: Vec<(String, bool)> = range_q(f)
                .map(|q| (format!("row {q}"), zf.row(q).is_quasi_iso()))
                .collect();
            let hz = failures(&mut ev, "H^h(Z^v(f)) iso", zrows.into_iter());
            let weq = if f.ring().is_field() {
                let (hx, qx) = x.subquotient(0, 1, SubKind::H)?;
                let (hy, qy) = y.subquotient(0, 1, SubKind::H)?;
                let hf = f.induced((&hx, &qx), (&hy, &qy))?;
                let rows: Vec<(String, bool)> = range_q(f)
                    .map(|q| (format!("row {q}"), hf.row(q).is_quasi_iso()))
                    .collect();
                Some(failures(&mut ev, "H^h(H^v(f)) iso", rows.into_iter()))
            } else {
                note(&mut ev, "H^h(H^v(f)) iso unavailable over Z".into(), true);
                None
            };
            let fib = surj && zsurj && hh;
            Ok(ClassifyReport {
                is_weq: weq,
                is_fibration: fib,
                is_trivial_fibration: fib && hz,
                evidence: ev,
            })
        }
    }
}

/// Necessary conditions for `0 → X` to be a cofibration.
#[derive(Clone, Debug)]
pub struct CofibrancyReport {
    pub necessary_only: bool,
    pub conditions: Vec<Evidence>,
}

impl CofibrancyReport {
    pub fn passes(&self) -> bool {
        self.conditions.iter().all(|c| c.holds)
    }
}

fn torsion_free_rows(x: &Multicomplex, q: i32) -> (bool, bool) {
    let h = x.row(q).homology();
    let free = h.values().all(|m| m.torsion.is_empty());
    let conc = h.iter().all(|(&p, m)| p == 0 || m.is_zero());
    (conc, free)
}

pub fn cofibrancy_report(x: &Multicomplex, s: StructureId) -> CofibrancyReport {
    let mut ev = Vec::new();
    note(
        &mut ev,
        "pointwise projective (free by construction)".into(),
        true,
    );
    let qs: Vec<i32> = x.support().into_iter().flat_map(|s| s.qmin..=s.qmax).collect();
    match s {
        StructureId::TotalBicomplex => {
            let mut conc = true;
            let mut free = true;
            for q in qs {
                let (c, f) = torsion_free_rows(x, q);
                if !c && conc {
                    note(
                        &mut ev,
                        format!("H^h concentrated in p = 0 fails at row {q}"),
                        false,
                    );
                }
                if !f && free {
                    note(&mut ev, format!("H^h_0 projective fails at row {q}"), false);
                }
                conc &= c;
                free &= f;
            }
            if conc {
                note(&mut ev, "H^h concentrated in p = 0".into(), true);
            }
            if free {
                note(&mut ev, "H^h_0 projective".into(), true);
            }
        }
        StructureId::CEBicomplex => {
            let ok = x.subquotient(0, 1, SubKind::H).is_ok();
            note(&mut ev, "H^v(X) degreewise projective".into(), ok);
        }
        StructureId::TotalTwisted => {}
    }
    CofibrancyReport {
        necessary_only: true,
        conditions: ev,
    }
}

/// Pushout of `i: A → B` along `a: A → X`; returns `X'` and `X → X'`.
pub fn pushout(i: &MultiMap, a: &MultiMap) -> Result<(Multicomplex, MultiMap)> {
    if i.source() != a.source() {
        return Err(Error::DimensionMismatch(
            "pushout legs have different sources".into(),
        ));
    }
    let bp = biproduct(a.target(), i.target());
    let ring = i.ring();
    let glue = bp
        .in1
        .compose(a)
        .add(&bp.in2.compose(i).scale(&ring.from_i64(-1)));
    let (xp, proj) = glue.cokernel()?;
    let inc = proj.compose(&bp.in1);
    Ok((xp, inc))
}

/// A Cartan–Eilenberg resolution `ε: P → Y` of a complex placed in column 0.
pub fn ce_resolution(y: &ChainComplex) -> Result<(Bicomplex, BicomplexMap)> {
    let ring = y.ring();
    let target = Bicomplex::standard(ring, &BicomplexKind::IncludeChain(y.clone()))?;
    match ring {
        RingSpec::Integers => horseshoe(y, target),
        _ => Ok((target.clone(), BicomplexMap::identity(&target))),
    }
}

/// Per degree `n`: `z` a basis of `Z_n` adapted to `B_n = span(c_j z_j)`,
/// `w` preimages in `Y_{n+1}` with `d w_j = c_j z_j`.
struct Adapted {
    z: ExactMatrix,
    factors: Vec<Scalar>,
    w: ExactMatrix,
}

fn adapted_basis(y: &ChainComplex, n: i32) -> Result<Adapted> {
    let ring = y.ring();
    let z = kernel(&y.d(n));
    let up = y.d(n + 1);
    if z.cols() == 0 || up.cols() == 0 {
        return Ok(Adapted {
            z,
            factors: Vec::new(),
            w: ExactMatrix::zeros(ring, y.rank(n + 1), 0),
        });
    }
    let coords = Solver::new(&z)
        .solve_matrix(&up)
        .ok_or_else(|| Error::Internal(format!("boundaries outside cycles in degree {n}")))?;
    let snf = smith_normal_form(&coords)?;
    let z = z.mul(&snf.u_inv);
    let r = snf.invariant_factors.len();
    let w = snf.v.select_columns(&(0..r).collect::<Vec<_>>());
    Ok(Adapted {
        z,
        factors: snf.invariant_factors,
        w,
    })
}

fn horseshoe(y: &ChainComplex, target: Bicomplex) -> Result<(Bicomplex, BicomplexMap)> {
    let ring = y.ring();
    let Some((lo, hi)) = y.support() else {
        let zero = Bicomplex::zero(ring);
        return Ok((zero.clone(), BicomplexMap::zero(&zero, &target)));
    };
    let b = Bidegree::new;
    let one = ring.one();
    let adapted: BTreeMap<i32, Adapted> = (lo - 1..=hi)
        .map(|n| Ok((n, adapted_basis(y, n)?)))
        .collect::<Result<_>>()?;
    // cells at (0,n): lifts of B_{n-1}, then b_j, then h_j; at (1,n): h'_j
    let mut ranks = BTreeMap::new();
    let mut dh = BTreeMap::new();
    let mut dv = BTreeMap::new();
    let mut eps = BTreeMap::new();
    let layout = |n: i32| {
        let lifts = adapted.get(&(n - 1)).map_or(0, |a| a.factors.len());
        let a = &adapted[&n];
        let nb = a.factors.len();
        let hs: Vec<usize> = (0..a.z.cols())
            .filter(|&j| j >= nb || !ring.is_one(&a.factors[j]))
            .collect();
        (lifts, nb, hs)
    };
    for n in lo..=hi {
        let a = &adapted[&n];
        let (lifts, nb, hs) = layout(n);
        let r0 = lifts + nb + hs.len();
        ranks.insert(b(0, n), r0);
        let mut e = ExactMatrix::zeros(ring, y.rank(n), r0);
        if lifts > 0 {
            e.set_block(0, 0, &adapted[&(n - 1)].w);
        }
        for j in 0..nb {
            for r in 0..y.rank(n) {
                e.set(r, lifts + j, ring.mul(&a.factors[j], a.z.get(r, j)));
            }
        }
        for (k, &j) in hs.iter().enumerate() {
            for r in 0..y.rank(n) {
                e.set(r, lifts + nb + k, a.z.get(r, j).clone());
            }
        }
        eps.insert(b(0, n), e);
        // d_v: lift of c_j z_j at (0,n+1) to b_j at (0,n)
        if nb > 0 && n < hi {
            let (lifts_up, _, hs_up) = layout(n + 1);
            let rows = r0;
            let cols = lifts_up + adapted[&(n + 1)].factors.len() + hs_up.len();
            let mut m = ExactMatrix::zeros(ring, rows, cols);
            for j in 0..nb {
                m.set(lifts + j, j, one.clone());
            }
            dv.insert(b(0, n + 1), m);
        }
        let torsion: Vec<usize> = hs
            .iter()
            .enumerate()
            .filter(|(_, &j)| j < nb)
            .map(|(k, _)| k)
            .collect();
        if !torsion.is_empty() {
            ranks.insert(b(1, n), torsion.len());
            let mut m = ExactMatrix::zeros(ring, r0, torsion.len());
            for (c, &k) in torsion.iter().enumerate() {
                let j = hs[k];
                m.set(lifts + nb + k, c, a.factors[j].clone());
                m.set(lifts + j, c, ring.from_i64(-1));
            }
            dh.insert(b(1, n), m);
        }
    }
    let p = Bicomplex::new(ring, ranks, dh, dv)?;
    let eps = BicomplexMap::new(p.clone(), target, eps)?;
    Ok((p, eps))
}

/// Outcome of one identity check.
#[derive(Clone, Debug)]
pub struct IdentityCheck {
    pub name: String,
    pub holds: bool,
}

fn std_obj(ring: RingSpec, k: BicomplexKind) -> Result<Multicomplex> {
    Ok(Bicomplex::standard(ring, &k)?.into_multi())
}

/// Isomorphisms `φ: src f → src g`, `ψ: tgt f → tgt g` with `ψ f = g φ`.
pub fn find_arrow_isomorphism(f: &MultiMap, g: &MultiMap) -> Option<(MultiMap, MultiMap)> {
    let ring = f.ring();
    let phis = morphism_space(f.source(), g.source());
    let psis = morphism_space(f.target(), g.target());
    let keys: Vec<Bidegree> = f.source().ranks().keys().copied().collect();
    let rows = flat_len(f.source(), g.target());
    let minus = ring.from_i64(-1);
    let mut cols: Vec<Vec<Scalar>> = phis.iter().map(|p| flat(&g.compose(p), &keys)).collect();
    cols.extend(psis.iter().map(|p| flat(&p.compose(f).scale(&minus), &keys)));
    let k = if rows == 0 {
        ExactMatrix::identity(ring, cols.len())
    } else {
        kernel(&columns_matrix(ring, rows, &cols))
    };
    let np = phis.len();
    let basis: Vec<(MultiMap, MultiMap)> = (0..k.cols())
        .map(|j| {
            let c = k.column(j);
            let mut a = MultiMap::zero(f.source(), g.source());
            for (m, s) in phis.iter().zip(&c[..np]) {
                a = a.add(&m.scale(s));
            }
            let mut b = MultiMap::zero(f.target(), g.target());
            for (m, s) in psis.iter().zip(&c[np..]) {
                b = b.add(&m.scale(s));
            }
            (a, b)
        })
        .collect();
    search_combination(
        basis.len(),
        |coeffs| {
            let mut a = MultiMap::zero(f.source(), g.source());
            let mut b = MultiMap::zero(f.target(), g.target());
            for (c, (x, y)) in coeffs.iter().zip(&basis) {
                if *c != 0 {
                    let s = ring.from_i64(*c);
                    a = a.add(&x.scale(&s));
                    b = b.add(&y.scale(&s));
                }
            }
            (a, b)
        },
        |(a, b)| a.is_isomorphism() && b.is_isomorphism(),
    )
}

/// The tensor identities among generating objects and the map identity
/// `∂_h D^{1,1} ⊗ (S^{p-1,q-1} ↪ ∂_v D^{p,q}) = (∂_h D^{p,q} ↪ D^{p,q})`.
pub fn verify_generator_identities(ring: RingSpec, pmax: i32, qs: &[i32]) -> Result<Vec<IdentityCheck>> {
    use BicomplexKind::*;
    let mut objects = Vec::new();
    let mut out = Vec::new();
    let mut check = |name: String, lhs: Multicomplex, rhs: Multicomplex| {
        let holds = lhs.ranks() == rhs.ranks() && find_isomorphism(&lhs, &rhs).is_some();
        objects.push(IdentityCheck { name, holds });
    };
    let vb = |p, q| std_obj(ring, VBoundary { p, q, r: 1 });
    let hb = |p, q| std_obj(ring, HBoundary { p, q, r: 1 });
    let sph = |p, q| std_obj(ring, Sphere { p, q, r: 1 });
    let disc = |p, q| std_obj(ring, Disc { p, q, r: 1 });
    for &q in qs {
        for &t in qs {
            check(
                format!("S^{{0,{q}}} ⊗ S^{{0,{t}}} ≅ S^{{0,{}}}", q + t),
                sph(0, q)?.tensor(&sph(0, t)?),
                sph(0, q + t)?,
            );
            check(
                format!("S^{{0,{q}}} ⊗ ∂hD^{{1,{t}}} ≅ ∂hD^{{1,{}}}", t + q),
                sph(0, q)?.tensor(&hb(1, t)?),
                hb(1, t + q)?,
            );
            for p in 1..=pmax {
                check(
                    format!("∂vD^{{{p},{q}}} ⊗ S^{{0,{t}}} ≅ ∂vD^{{{p},{}}}", q + t),
                    vb(p, q)?.tensor(&sph(0, t)?),
                    vb(p, q + t)?,
                );
                check(
                    format!("∂vD^{{{p},{q}}} ⊗ ∂hD^{{1,{t}}} ≅ D^{{{p},{}}}", q + t - 1),
                    vb(p, q)?.tensor(&hb(1, t)?),
                    disc(p, q + t - 1)?,
                );
                for s in 1..=pmax {
                    check(
                        format!(
                            "∂vD^{{{p},{q}}} ⊗ ∂vD^{{{s},{t}}} ≅ ∂vD^{{{},{}}} ⊕ ∂vD^{{{},{}}}",
                            p + s,
                            q + t - 1,
                            p + s - 1,
                            q + t - 1
                        ),
                        vb(p, q)?.tensor(&vb(s, t)?),
                        vb(p + s, q + t - 1)?.direct_sum(&vb(p + s - 1, q + t - 1)?),
                    );
                }
            }
        }
        for p in 1..=pmax {
            let left = MultiMap::identity(&hb(1, 1)?)
                .tensor(&GeneratorRef::new(Family::SphereToVBoundary, p, q).build(ring)?);
            let right = GeneratorRef::new(Family::HBoundaryToDisc, p, q).build(ring)?;
            let holds = find_arrow_isomorphism(&left, &right).is_some();
            out.push(IdentityCheck {
                name: format!(
                    "∂hD^{{1,1}} ⊗ (S^{{{},{}}} ↪ ∂vD^{{{p},{q}}}) = (∂hD^{{{p},{q}}} ↪ D^{{{p},{q}}})",
                    p - 1,
                    q - 1
                ),
                holds,
            });
        }
    }
    objects.extend(out);
    Ok(objects)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generators_are_valid_inclusions() {
        let ring = RingSpec::PrimeField(2);
        for s in StructureId::ALL {
            for &(fam, free_p) in families(s) {
                let p = if free_p { 2 } else { 0 };
                let m = GeneratorRef::new(fam, p, 0).build(ring).unwrap();
                assert!(m.validate().is_empty());
                assert!(m.is_pointwise_injective());
            }
        }
    }
}
