//! Twisted complexes: maps `d_i` of bidegree `(-i, i-1)` with
//! `Σ_{i+j=n} d_i d_j = 0`, and the free objects on one generator.

use std::collections::{BTreeMap, HashMap};

use crate::bicomplex::Bicomplex;
use crate::bidegree::Bidegree;
use crate::chain::{ChainComplex, ChainKind};
use crate::error::{Error, Result, Violation};
use crate::linalg::{image, span_sum, Quotient};
use crate::matrix::ExactMatrix;
use crate::multi::{Flavor, MultiMap, Multicomplex, SubKind, Support};
use crate::ring::RingSpec;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwistedComplex(Multicomplex);

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwistedMap(MultiMap);

pub fn validate_twisted(raw: &Multicomplex) -> Vec<Violation> {
    raw.validate(Flavor::Twisted)
}

impl TwistedComplex {
    pub fn zero(ring: RingSpec) -> Self {
        TwistedComplex(Multicomplex::zero(ring))
    }

    pub fn new(
        ring: RingSpec,
        ranks: BTreeMap<Bidegree, usize>,
        maps: BTreeMap<(usize, Bidegree), ExactMatrix>,
    ) -> Result<Self> {
        Self::from_multi(Multicomplex::from_raw(ring, ranks, maps))
    }

    pub fn from_multi(m: Multicomplex) -> Result<Self> {
        let v = validate_twisted(&m);
        if v.is_empty() {
            Ok(TwistedComplex(m))
        } else {
            Err(Error::Validation(v))
        }
    }

    pub(crate) fn from_multi_unchecked(m: Multicomplex) -> Self {
        debug_assert!(validate_twisted(&m).is_empty());
        TwistedComplex(m)
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

    pub fn d(&self, i: usize, b: Bidegree) -> ExactMatrix {
        self.0.d(i, b)
    }

    pub fn tot(&self) -> ChainComplex {
        self.0.tot()
    }

    pub fn tensor(&self, other: &Self) -> Self {
        TwistedComplex::from_multi_unchecked(self.0.tensor(&other.0))
    }

    pub fn hom(&self, other: &Self) -> Result<Self> {
        let imax = self.0.max_index().max(other.0.max_index());
        let h = self.0.hom(&other.0, imax)?;
        Self::from_multi(h).map_err(|e| Error::Internal(format!("Hom is not twisted: {e}")))
    }

    pub fn column(&self, p: i32) -> ChainComplex {
        self.0.column(p)
    }

    /// `H^v` with the induced `d_1`.
    pub fn vertical_homology(&self) -> Result<Bicomplex> {
        if !self.ring().is_field() {
            return Err(Error::UnsupportedRing {
                op: "vertical homology",
                ring: self.ring(),
            });
        }
        let (m, _) = self.0.subquotient(0, 1, SubKind::H)?;
        Bicomplex::from_multi(m)
    }

    /// `X / S` where `S` is the smallest subobject containing every `d_i(X)`, `i ≥ 2`.
    pub fn quotient_to_bicomplex(&self) -> Result<Bicomplex> {
        let ring = self.ring();
        let x = &self.0;
        let mut sub: BTreeMap<Bidegree, ExactMatrix> = BTreeMap::new();
        let extend = |sub: &mut BTreeMap<Bidegree, ExactMatrix>, b: Bidegree, m: ExactMatrix| {
            let cur = sub
                .remove(&b)
                .unwrap_or_else(|| ExactMatrix::zeros(ring, x.rank(b), 0));
            let before = cur.cols();
            let next = image(&span_sum(&cur, &m));
            let grew = next.cols() > before;
            sub.insert(b, next);
            grew
        };
        for (&(i, b), m) in x.maps() {
            if i >= 2 {
                extend(&mut sub, b.shift(i), m.clone());
            }
        }
        loop {
            let mut grew = false;
            let snapshot = sub.clone();
            for (b, s) in &snapshot {
                for i in 0..=x.max_index() {
                    if let Some(d) = x.d_ref(i, *b) {
                        grew |= extend(&mut sub, b.shift(i), d.mul(s));
                    }
                }
            }
            if !grew {
                break;
            }
        }
        let mut ranks = BTreeMap::new();
        let mut quots = BTreeMap::new();
        for (&b, &r) in x.ranks() {
            let s = sub
                .get(&b)
                .cloned()
                .unwrap_or_else(|| ExactMatrix::zeros(ring, r, 0));
            let q = Quotient::new(&ExactMatrix::identity(ring, r), &s).ok_or(Error::TorsionQuotient(b))?;
            ranks.insert(b, q.dim());
            quots.insert(b, q);
        }
        let mut maps = BTreeMap::new();
        for (&(i, b), m) in x.maps() {
            if i >= 2 {
                continue;
            }
            let (qs, qt) = (&quots[&b], &quots[&b.shift(i)]);
            let induced = qt
                .project_matrix(&m.mul(&qs.reps))
                .ok_or(Error::TorsionQuotient(b))?;
            maps.insert((i, b), induced);
        }
        Bicomplex::from_multi(Multicomplex::from_raw(ring, ranks, maps))
    }
}

/// A chain complex placed in column 0.
pub fn embed_chain(c: &ChainComplex) -> TwistedComplex {
    let ranks = c
        .ranks()
        .iter()
        .map(|(&n, &r)| (Bidegree::new(0, n), r))
        .collect();
    let maps = c
        .differentials()
        .iter()
        .map(|(&n, m)| ((0, Bidegree::new(0, n)), m.clone()))
        .collect();
    TwistedComplex::from_multi_unchecked(Multicomplex::from_raw(c.ring(), ranks, maps))
}

pub fn embed_bicomplex(b: &Bicomplex) -> TwistedComplex {
    TwistedComplex(b.as_multi().clone())
}

impl TwistedMap {
    pub fn new(
        source: TwistedComplex,
        target: TwistedComplex,
        f: BTreeMap<Bidegree, ExactMatrix>,
    ) -> Result<Self> {
        Ok(TwistedMap(MultiMap::new(source.0, target.0, f)?))
    }

    pub fn from_multi(m: MultiMap) -> Result<Self> {
        TwistedComplex::from_multi(m.source().clone())?;
        TwistedComplex::from_multi(m.target().clone())?;
        let v = m.validate();
        if v.is_empty() {
            Ok(TwistedMap(m))
        } else {
            Err(Error::Validation(v))
        }
    }

    pub fn as_multi(&self) -> &MultiMap {
        &self.0
    }

    pub fn into_multi(self) -> MultiMap {
        self.0
    }

    pub fn source(&self) -> TwistedComplex {
        TwistedComplex(self.0.source().clone())
    }

    pub fn target(&self) -> TwistedComplex {
        TwistedComplex(self.0.target().clone())
    }
}

/// Which free generator a word is applied to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Generator {
    /// `x_{p,q}` of the disc.
    X,
    /// The vertical cycle `y_{p,q-1}` of the boundary.
    Y,
}

/// `d_{i_1} ⋯ d_{i_n}` applied to a generator.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word {
    pub subs: Vec<usize>,
    pub generator: Generator,
}

impl Word {
    pub fn new(generator: Generator, subs: Vec<usize>) -> Self {
        Word { subs, generator }
    }

    pub fn weight(&self) -> usize {
        self.subs.iter().sum()
    }

    /// Bidegree inside the disc or boundary on `(p, q)`.
    pub fn bidegree(&self, p: i32, q: i32) -> Bidegree {
        let s = self.weight() as i32;
        let n = self.subs.len() as i32;
        match self.generator {
            Generator::X => Bidegree::new(p - s, q + s - n),
            Generator::Y => Bidegree::new(p - s, q - 1 + s - n),
        }
    }
}

impl std::fmt::Display for Word {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for i in &self.subs {
            write!(f, "d{i}")?;
        }
        match self.generator {
            Generator::X => write!(f, "(x)"),
            Generator::Y => write!(f, "(y)"),
        }
    }
}

type Combination = Vec<(Vec<usize>, i64)>;

/// Rewrites words on `x` into the canonical basis, memoized.
#[derive(Default)]
pub struct Rewriter {
    memo: HashMap<Vec<usize>, Combination>,
}

impl Rewriter {
    pub fn new() -> Self {
        Self::default()
    }

    /// Moves the rightmost non-final `d_0` one step right using
    /// `d_0 d_m = -d_m d_0 - Σ_{a+b=m, a,b>0} d_a d_b`, until every word has
    /// no `d_0` or a single final one.
    fn reduce(&mut self, w: &[usize]) -> Combination {
        if let Some(c) = self.memo.get(w) {
            return c.clone();
        }
        let n = w.len();
        let j = (0..n.saturating_sub(1)).rev().find(|&j| w[j] == 0);
        let out = match j {
            None => vec![(w.to_vec(), 1)],
            Some(j) if w[j + 1] == 0 => Vec::new(),
            Some(j) => {
                let m = w[j + 1];
                let mut acc: BTreeMap<Vec<usize>, i64> = BTreeMap::new();
                let push = |acc: &mut BTreeMap<Vec<usize>, i64>, this: &mut Self, v: Vec<usize>| {
                    for (u, c) in this.reduce(&v) {
                        *acc.entry(u).or_insert(0) -= c;
                    }
                };
                let mut swapped = w.to_vec();
                swapped.swap(j, j + 1);
                push(&mut acc, self, swapped);
                for a in 1..m {
                    let mut v = w[..j].to_vec();
                    v.push(a);
                    v.push(m - a);
                    v.extend_from_slice(&w[j + 2..]);
                    push(&mut acc, self, v);
                }
                acc.into_iter().filter(|(_, c)| *c != 0).collect()
            }
        };
        self.memo.insert(w.to_vec(), out.clone());
        out
    }

    /// Canonical-basis expansion of `w`. Words on `y` ending in `d_0` vanish.
    pub fn normal_form(&mut self, w: &Word) -> Vec<(Word, i64)> {
        match w.generator {
            Generator::X => self
                .reduce(&w.subs)
                .into_iter()
                .map(|(s, c)| (Word::new(Generator::X, s), c))
                .collect(),
            Generator::Y => {
                if w.subs.last() == Some(&0) {
                    return Vec::new();
                }
                let mut s = w.subs.clone();
                s.push(0);
                self.reduce(&s)
                    .into_iter()
                    .map(|(mut s, c)| {
                        s.pop();
                        (Word::new(Generator::Y, s), c)
                    })
                    .collect()
            }
        }
    }
}

/// Convenience wrapper around a fresh `Rewriter`.
pub fn normal_form(w: &Word) -> Vec<(Word, i64)> {
    Rewriter::new().normal_form(w)
}

/// Compositions of `s` into `n` positive parts, lexicographically.
pub fn compositions(s: usize, n: usize) -> Vec<Vec<usize>> {
    fn rec(s: usize, n: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if n == 0 {
            if s == 0 {
                out.push(cur.clone());
            }
            return;
        }
        for a in 1..=s.saturating_sub(n - 1) {
            cur.push(a);
            rec(s - a, n - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(s, n, &mut Vec::new(), &mut out);
    out
}

pub type WordBasis = BTreeMap<Bidegree, Vec<Word>>;

/// Canonical basis of the disc on `x_{p,q}`.
pub fn disc_basis(p: i32, q: i32) -> WordBasis {
    let mut out: WordBasis = BTreeMap::new();
    let x = |subs| Word::new(Generator::X, subs);
    for s in 0..=p.max(-1) as usize {
        for n in 0..=s + 1 {
            let mut words: Vec<Word> = compositions(s, n).into_iter().map(x).collect();
            if n >= 1 {
                for mut c in compositions(s, n - 1) {
                    c.push(0);
                    words.push(x(c));
                }
            }
            if !words.is_empty() {
                out.insert(words[0].bidegree(p, q), words);
            }
        }
    }
    out
}

/// Canonical basis of the vertical boundary on `y_{p,q-1}`.
pub fn boundary_basis(p: i32, q: i32) -> WordBasis {
    let mut out: WordBasis = BTreeMap::new();
    for s in 0..=p.max(-1) as usize {
        for n in 0..=s {
            let words: Vec<Word> = compositions(s, n)
                .into_iter()
                .map(|c| Word::new(Generator::Y, c))
                .collect();
            if !words.is_empty() {
                out.insert(words[0].bidegree(p, q), words);
            }
        }
    }
    out
}

fn index(basis: &WordBasis) -> HashMap<&Word, usize> {
    basis
        .values()
        .flat_map(|v| v.iter().enumerate().map(|(i, w)| (w, i)))
        .collect()
}

/// The free twisted complex spanned by `basis`, with every `d_i` computed by
/// prefixing `d_i` and rewriting.
fn word_complex(ring: RingSpec, p: i32, basis: &WordBasis) -> Multicomplex {
    let mut rw = Rewriter::new();
    let idx = index(basis);
    let mut maps = BTreeMap::new();
    for (&b, words) in basis {
        for i in 0..=b.p as usize {
            let t = b.shift(i);
            let Some(tw) = basis.get(&t) else { continue };
            let mut m = ExactMatrix::zeros(ring, tw.len(), words.len());
            for (c, w) in words.iter().enumerate() {
                let mut subs = vec![i];
                subs.extend_from_slice(&w.subs);
                for (u, k) in rw.normal_form(&Word::new(w.generator, subs)) {
                    if u.weight() as i32 > p {
                        continue;
                    }
                    m.add_at(idx[&u], c, &ring.from_i64(k));
                }
            }
            maps.insert((i, b), m);
        }
    }
    let ranks = basis.iter().map(|(&b, v)| (b, v.len())).collect();
    Multicomplex::from_raw(ring, ranks, maps)
}

pub fn twisted_disc(ring: RingSpec, p: i32, q: i32) -> Result<TwistedComplex> {
    if p < 0 {
        return Err(Error::BadParameter(format!("twisted disc needs p >= 0, got {p}")));
    }
    TwistedComplex::from_multi(word_complex(ring, p, &disc_basis(p, q)))
}

pub fn twisted_boundary(ring: RingSpec, p: i32, q: i32) -> Result<TwistedComplex> {
    if p < 0 {
        return Err(Error::BadParameter(format!(
            "twisted boundary needs p >= 0, got {p}"
        )));
    }
    TwistedComplex::from_multi(word_complex(ring, p, &boundary_basis(p, q)))
}

/// `y ↦ d_0 x`, and `w(y) ↦ w d_0 (x)`.
pub fn boundary_inclusion(ring: RingSpec, p: i32, q: i32) -> Result<TwistedMap> {
    let src = twisted_boundary(ring, p, q)?;
    let tgt = twisted_disc(ring, p, q)?;
    let db = disc_basis(p, q);
    let didx = index(&db);
    let mut f = BTreeMap::new();
    for (b, words) in boundary_basis(p, q) {
        let mut m = ExactMatrix::zeros(ring, db[&b].len(), words.len());
        for (c, w) in words.iter().enumerate() {
            let mut subs = w.subs.clone();
            subs.push(0);
            m.set(didx[&Word::new(Generator::X, subs)], c, ring.one());
        }
        f.insert(b, m);
    }
    TwistedMap::new(src, tgt, f)
}

/// Basis of the truncation: `y` and the words with first subscript `≤ s`.
pub fn truncated_basis(p: i32, q: i32, s: usize) -> WordBasis {
    boundary_basis(p, q)
        .into_iter()
        .filter_map(|(b, v)| {
            let v: Vec<Word> = v
                .into_iter()
                .filter(|w| w.subs.first().is_none_or(|&i| i <= s))
                .collect();
            (!v.is_empty()).then_some((b, v))
        })
        .collect()
}

/// The `d_0`-subcomplex spanned by `truncated_basis(p, q, s)`.
pub fn truncated_boundary(ring: RingSpec, p: i32, q: i32, s: usize) -> Result<TwistedComplex> {
    let full = twisted_boundary(ring, p, q)?;
    let fb = boundary_basis(p, q);
    let tb = truncated_basis(p, q, s);
    let keep = |b: &Bidegree| -> Vec<usize> {
        let all = &fb[b];
        tb.get(b).map_or(Vec::new(), |v| {
            v.iter()
                .map(|w| all.iter().position(|u| u == w).unwrap())
                .collect()
        })
    };
    let mut maps = BTreeMap::new();
    for &b in tb.keys() {
        let t = b.shift(0);
        if !tb.contains_key(&t) {
            continue;
        }
        let d = full.d(0, b);
        let (cols, rows) = (keep(&b), keep(&t));
        // closure: nothing outside the truncation is hit
        let outside: Vec<usize> = (0..d.rows()).filter(|r| !rows.contains(r)).collect();
        if !d.select_rows(&outside).select_columns(&cols).is_zero() {
            return Err(Error::Internal(format!("truncation not closed under d0 at {b}")));
        }
        maps.insert((0, b), d.select_rows(&rows).select_columns(&cols));
    }
    let ranks = tb.iter().map(|(&b, v)| (b, v.len())).collect();
    TwistedComplex::from_multi(Multicomplex::from_raw(ring, ranks, maps))
}

/// Vertices of the simplex attached to a boundary word of weight `S`: the
/// partial sums `i_n - 1, i_n + i_{n-1} - 1, …, i_n + ⋯ + i_2 - 1`.
pub fn simplex_of(w: &Word) -> Vec<i32> {
    let mut out = Vec::new();
    let mut acc = 0i32;
    for &i in w.subs[1..].iter().rev() {
        acc += i as i32;
        out.push(acc - 1);
    }
    out
}

/// The vertex reading `[i_2 - 1, i_2 + i_3 - 1, …]` with prefix sums.
pub fn prefix_simplex_of(w: &Word) -> Vec<i32> {
    let mut out = Vec::new();
    let mut acc = 0i32;
    for &i in &w.subs[1..] {
        acc += i as i32;
        out.push(acc - 1);
    }
    out
}

/// Sign attached to a word of length `n` by the comparison isomorphism.
pub fn comparison_sign(n: usize) -> i64 {
    let n = n as i64;
    if ((n - 1) * n / 2 + (n - 1)).rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

/// A verified isomorphism between a boundary column and simplicial cochains.
#[derive(Clone, Debug)]
pub struct SimplexComparison {
    pub column: i32,
    pub simplex_dim: i32,
    /// Front face the cochains vanish on, for the truncated case.
    pub relative_to: Option<i32>,
    /// Word, simplex and the sign of the basis correspondence.
    pub bijection: Vec<(Word, Vec<i32>, i64)>,
    pub global_sign: i64,
}

/// Identifies column `u` of the boundary on `(p, q)` (or of its truncation at
/// `s`) with the cochains of `Δ^{p-u-2}` (relative to `Δ^{p-u-s-2}`).
pub fn compare_to_simplex_cochain(
    ring: RingSpec,
    p: i32,
    q: i32,
    s: Option<usize>,
    u: i32,
) -> Result<SimplexComparison> {
    compare_with(ring, p, q, s, u, &simplex_of, &comparison_sign)
}

pub fn compare_with(
    ring: RingSpec,
    p: i32,
    q: i32,
    s: Option<usize>,
    u: i32,
    vertices: &dyn Fn(&Word) -> Vec<i32>,
    sign: &dyn Fn(usize) -> i64,
) -> Result<SimplexComparison> {
    let big_s = p - u;
    if u < 0 || big_s < 2 {
        return Err(Error::BadParameter(format!(
            "column {u} of p={p} has no simplex model"
        )));
    }
    let n = big_s - 2;
    let (x, basis, m) = match s {
        None => (twisted_boundary(ring, p, q)?, boundary_basis(p, q), None),
        Some(s) => {
            let m = big_s - s as i32 - 2;
            if m < 0 {
                return Err(Error::BadParameter(format!(
                    "relative comparison needs u < p - s - 1, got u={u}, p={p}, s={s}"
                )));
            }
            (
                truncated_boundary(ring, p, q, s)?,
                truncated_basis(p, q, s),
                Some(m),
            )
        }
    };
    let cochains = match m {
        None => ChainComplex::standard(ring, &ChainKind::SimplexCochain(n))?,
        Some(m) => ChainComplex::standard(ring, &ChainKind::RelativeSimplexCochain { n, m })?,
    };
    // word of length k sits in vertical degree q - 1 + S - k, cochain degree k - 2
    let shift = q - 3 + big_s;
    let mut bijection = Vec::new();
    let mut perms: BTreeMap<i32, ExactMatrix> = BTreeMap::new();
    for (b, words) in basis.iter().filter(|(b, _)| b.p == u) {
        let deg = b.q - shift;
        let simp = ChainComplex::cochain_basis(n, m, deg);
        if simp.len() != words.len() {
            return Err(Error::MismatchAt {
                at: *b,
                element: format!("rank {} vs {}", words.len(), simp.len()),
            });
        }
        let mut pm = ExactMatrix::zeros(ring, simp.len(), words.len());
        for (c, w) in words.iter().enumerate() {
            let v = vertices(w);
            let Some(r) = simp.iter().position(|x| *x == v) else {
                return Err(Error::MismatchAt {
                    at: *b,
                    element: w.to_string(),
                });
            };
            let e = sign(w.subs.len());
            pm.set(r, c, ring.from_i64(e));
            bijection.push((w.clone(), v, e));
        }
        perms.insert(b.q, pm);
    }
    let minus = ring.from_i64(-1);
    for (&qq, pm) in &perms {
        let b = Bidegree::new(u, qq);
        let Some(pt) = perms.get(&(qq - 1)) else { continue };
        let lhs = pt.mul(&x.d(0, b));
        let rhs = cochains.d(qq - shift).mul(pm).scale(&minus);
        if let Some(c) = (0..lhs.cols()).find(|&c| lhs.column(c) != rhs.column(c)) {
            return Err(Error::MismatchAt {
                at: b,
                element: basis[&b][c].to_string(),
            });
        }
    }
    Ok(SimplexComparison {
        column: u,
        simplex_dim: n,
        relative_to: m,
        bijection,
        global_sign: -1,
    })
}

/// Words `d_0 d_{i_1} ⋯ d_{i_{n-1}}(x)` in place of the trailing-`d_0` ones.
pub fn alternative_basis(p: i32, q: i32) -> WordBasis {
    disc_basis(p, q)
        .into_iter()
        .map(|(b, v)| {
            let v = v
                .into_iter()
                .map(|w| {
                    if w.subs.last() == Some(&0) {
                        let mut subs = vec![0];
                        subs.extend_from_slice(&w.subs[..w.subs.len() - 1]);
                        Word::new(Generator::X, subs)
                    } else {
                        w
                    }
                })
                .collect();
            (b, v)
        })
        .collect()
}

/// Columns express the alternative basis in the canonical one.
pub fn alternative_change_of_basis(ring: RingSpec, p: i32, q: i32) -> BTreeMap<Bidegree, ExactMatrix> {
    let canon = disc_basis(p, q);
    let idx = index(&canon);
    let mut rw = Rewriter::new();
    alternative_basis(p, q)
        .into_iter()
        .map(|(b, v)| {
            let mut m = ExactMatrix::zeros(ring, canon[&b].len(), v.len());
            for (c, w) in v.iter().enumerate() {
                for (u, k) in rw.normal_form(w) {
                    m.add_at(idx[&u], c, &ring.from_i64(k));
                }
            }
            (b, m)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(s: &[usize]) -> Word {
        Word::new(Generator::X, s.to_vec())
    }

    #[test]
    fn rewriting_low_weight() {
        assert_eq!(normal_form(&x(&[0, 1])), vec![(x(&[1, 0]), -1)]);
        assert_eq!(normal_form(&x(&[0, 2])), vec![(x(&[1, 1]), -1), (x(&[2, 0]), -1)]);
        assert!(normal_form(&x(&[0, 1, 0])).is_empty());
        assert_eq!(normal_form(&x(&[0, 2, 0])), vec![(x(&[1, 1, 0]), -1)]);
    }

    #[test]
    fn compositions_count() {
        assert_eq!(compositions(4, 2), vec![vec![1, 3], vec![2, 2], vec![3, 1]]);
        assert_eq!(compositions(0, 0), vec![Vec::<usize>::new()]);
        assert!(compositions(2, 3).is_empty());
    }
}
