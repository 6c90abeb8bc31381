//! Seeded random objects and maps for the verification suites.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bidegree::Bidegree;
use crate::chain::ChainComplex;
use crate::linalg::{kernel, Solver};
use crate::matrix::ExactMatrix;
use crate::multi::{biproduct, morphism_space, Flavor, MultiMap, Multicomplex};
use crate::ring::{RingSpec, Scalar};
use crate::system::{Layout, System, Term};

pub type Rng64 = ChaCha8Rng;

pub fn seeded(seed: u64) -> Rng64 {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Shape of a random object.
#[derive(Clone, Copy, Debug)]
pub struct Shape {
    pub pmax: i32,
    pub qmin: i32,
    pub qmax: i32,
    pub max_rank: usize,
    /// 1 for bicomplexes, larger for twisted complexes.
    pub max_index: usize,
    /// Probability that a cell is empty.
    pub sparsity: f64,
}

fn scalar(rng: &mut Rng64, ring: RingSpec) -> Scalar {
    match ring {
        RingSpec::PrimeField(p) => ring.from_i64(rng.gen_range(0..p as i64)),
        _ => ring.from_i64(rng.gen_range(-2..=2)),
    }
}

fn random_matrix(rng: &mut Rng64, ring: RingSpec, rows: usize, cols: usize) -> ExactMatrix {
    let mut m = ExactMatrix::zeros(ring, rows, cols);
    for r in 0..rows {
        for c in 0..cols {
            if rng.gen_bool(0.6) {
                m.set(r, c, scalar(rng, ring));
            }
        }
    }
    m
}

/// A random combination of the columns of `k`.
fn random_combination(rng: &mut Rng64, k: &ExactMatrix) -> Vec<Scalar> {
    let ring = k.ring();
    let coeffs: Vec<Scalar> = (0..k.cols())
        .map(|_| {
            if rng.gen_bool(0.5) {
                scalar(rng, ring)
            } else {
                ring.zero()
            }
        })
        .collect();
    k.mul_vec(&coeffs)
}

/// Random chain complex in degrees `lo..=hi`, built by choosing each
/// differential inside the kernel of the next one down.
pub fn random_chain(rng: &mut Rng64, ring: RingSpec, lo: i32, hi: i32, max_rank: usize) -> ChainComplex {
    let mut ranks = BTreeMap::new();
    for n in lo..=hi {
        ranks.insert(n, rng.gen_range(0..=max_rank));
    }
    let mut d: BTreeMap<i32, ExactMatrix> = BTreeMap::new();
    for n in lo + 1..=hi {
        let below = d
            .get(&(n - 1))
            .cloned()
            .unwrap_or_else(|| ExactMatrix::zeros(ring, 0, ranks[&(n - 1)]));
        let k = kernel(&below);
        let r = random_matrix(rng, ring, k.cols(), ranks[&n]);
        d.insert(n, k.mul(&r));
    }
    ChainComplex::new(ring, ranks, d).expect("random chain complex")
}

/// Random multicomplex: `d_0` columnwise, then each `d_n` solved from the
/// relation of weight `n` with a random kernel component.
pub fn random_multicomplex(rng: &mut Rng64, ring: RingSpec, shape: Shape) -> Multicomplex {
    loop {
        if let Some(m) = try_random_multicomplex(rng, ring, shape, None) {
            return m;
        }
    }
}

/// As `random_multicomplex`, with columns `p ≥ 1` vertically acyclic.
pub fn random_column_acyclic(rng: &mut Rng64, ring: RingSpec, shape: Shape) -> Multicomplex {
    loop {
        if let Some(m) = try_random_multicomplex(rng, ring, shape, Some(1)) {
            return m;
        }
    }
}

fn acyclic_column(
    rng: &mut Rng64,
    ring: RingSpec,
    qmin: i32,
    qmax: i32,
    max_rank: usize,
) -> (BTreeMap<i32, usize>, BTreeMap<i32, ExactMatrix>) {
    // a sum of discs in a random basis
    let mut ranks: BTreeMap<i32, usize> = BTreeMap::new();
    let mut discs = Vec::new();
    for q in qmin + 1..=qmax {
        let r = rng.gen_range(0..=max_rank.div_ceil(2));
        if r > 0 {
            *ranks.entry(q).or_insert(0) += r;
            *ranks.entry(q - 1).or_insert(0) += r;
            discs.push((q, r));
        }
    }
    let mut used: BTreeMap<i32, usize> = BTreeMap::new();
    let mut d: BTreeMap<i32, ExactMatrix> = BTreeMap::new();
    for &(q, r) in &discs {
        let top = *used.get(&q).unwrap_or(&0);
        let bot = *used.get(&(q - 1)).unwrap_or(&0);
        *used.entry(q).or_insert(0) += r;
        *used.entry(q - 1).or_insert(0) += r;
        let e = d
            .entry(q)
            .or_insert_with(|| ExactMatrix::zeros(ring, ranks[&(q - 1)], ranks[&q]));
        for k in 0..r {
            e.set(bot + k, top + k, ring.one());
        }
    }
    let change: BTreeMap<i32, (ExactMatrix, ExactMatrix)> = ranks
        .iter()
        .map(|(&q, &r)| (q, random_unimodular(rng, ring, r)))
        .collect();
    let d = d
        .into_iter()
        .map(|(q, m)| (q, change[&(q - 1)].0.mul(&m).mul(&change[&q].1)))
        .collect();
    (ranks, d)
}

/// A random invertible matrix and its inverse, from elementary operations.
pub fn random_unimodular(rng: &mut Rng64, ring: RingSpec, n: usize) -> (ExactMatrix, ExactMatrix) {
    let mut a = ExactMatrix::identity(ring, n);
    let mut inv = ExactMatrix::identity(ring, n);
    if n < 2 {
        if n == 1 && ring.is_field() {
            let s = loop {
                let s = scalar(rng, ring);
                if ring.is_unit(&s) {
                    break s;
                }
            };
            a.set(0, 0, s.clone());
            inv.set(0, 0, ring.inv(&s).unwrap());
        }
        return (a, inv);
    }
    for _ in 0..2 * n {
        let i = rng.gen_range(0..n);
        let mut j = rng.gen_range(0..n - 1);
        if j >= i {
            j += 1;
        }
        let s = ring.from_i64(if rng.gen_bool(0.5) { 1 } else { -1 });
        a.add_row_multiple(i, j, &s);
        // (E A)^{-1} = A^{-1} E^{-1}
        inv.add_col_multiple(j, i, &ring.neg(&s));
    }
    (a, inv)
}

fn try_random_multicomplex(
    rng: &mut Rng64,
    ring: RingSpec,
    shape: Shape,
    acyclic_from: Option<i32>,
) -> Option<Multicomplex> {
    let mut ranks = BTreeMap::new();
    let mut maps: BTreeMap<(usize, Bidegree), ExactMatrix> = BTreeMap::new();
    for p in 0..=shape.pmax {
        if acyclic_from.is_some_and(|a| p >= a) {
            let (r, d) = acyclic_column(rng, ring, shape.qmin, shape.qmax, shape.max_rank);
            for (q, n) in r {
                ranks.insert(Bidegree::new(p, q), n);
            }
            for (q, m) in d {
                maps.insert((0, Bidegree::new(p, q)), m);
            }
            continue;
        }
        for q in shape.qmin..=shape.qmax {
            if !rng.gen_bool(shape.sparsity) {
                ranks.insert(Bidegree::new(p, q), rng.gen_range(1..=shape.max_rank));
            }
        }
        let c = ranks_column(&ranks, p);
        let mut below: Option<ExactMatrix> = None;
        for q in shape.qmin..=shape.qmax {
            let r = c.get(&q).copied().unwrap_or(0);
            let rb = c.get(&(q - 1)).copied().unwrap_or(0);
            let k = match &below {
                Some(m) => kernel(m),
                None => ExactMatrix::identity(ring, rb),
            };
            let m = k.mul(&random_matrix(rng, ring, k.cols(), r));
            below = Some(m.clone());
            if r > 0 && rb > 0 {
                maps.insert((0, Bidegree::new(p, q)), m);
            }
        }
    }
    let x = Multicomplex::from_raw(ring, ranks.clone(), maps.clone());
    let flavor = if shape.max_index <= 1 {
        Flavor::Bicomplex
    } else {
        Flavor::Twisted
    };
    let last = shape.max_index.min(shape.pmax.max(0) as usize);
    let mut cur = x;
    for n in 1..=last {
        let mut done = false;
        for _ in 0..8 {
            // weights above `last` are not solved for
            if let Some(next) = solve_next_index(rng, &cur, n) {
                if n < last || next.validate(flavor).is_empty() {
                    cur = next;
                    done = true;
                    break;
                }
            }
        }
        if !done {
            return None;
        }
    }
    cur.validate(flavor).is_empty().then_some(cur)
}

fn ranks_column(ranks: &BTreeMap<Bidegree, usize>, p: i32) -> BTreeMap<i32, usize> {
    ranks
        .iter()
        .filter(|(b, _)| b.p == p)
        .map(|(b, &r)| (b.q, r))
        .collect()
}

/// Chooses `d_n` so that `Σ_{i+j=n} d_i d_j = 0`, given `d_0, …, d_{n-1}`.
fn solve_next_index(rng: &mut Rng64, x: &Multicomplex, n: usize) -> Option<Multicomplex> {
    let ring = x.ring();
    let mut layout: Layout<Bidegree> = Layout::new();
    for (&b, &r) in x.ranks() {
        layout.push(b, x.rank(b.shift(n)), r);
    }
    if layout.total == 0 {
        return Some(x.clone());
    }
    let mut sys = System::new(ring, layout.total);
    for &b in x.ranks().keys() {
        let t = b.shift(n).shift(0);
        let rows = x.rank(t);
        if rows == 0 {
            continue;
        }
        let mut terms = Vec::new();
        // d_0 d_n + d_n d_0
        if let (Some(d0), Some(blk)) = (x.d_ref(0, b.shift(n)), layout.get(&b)) {
            terms.push(Term {
                left: Some(d0),
                block: blk,
                right: None,
                coeff: ring.one(),
            });
        }
        if let (Some(d0), Some(blk)) = (x.d_ref(0, b), layout.get(&b.shift(0))) {
            terms.push(Term {
                left: None,
                block: blk,
                right: Some(d0),
                coeff: ring.one(),
            });
        }
        let mut rhs = ExactMatrix::zeros(ring, rows, x.rank(b));
        for j in 1..n {
            let i = n - j;
            if let (Some(dj), Some(di)) = (x.d_ref(j, b), x.d_ref(i, b.shift(j))) {
                rhs = rhs.sub(&di.mul(dj));
            }
        }
        if terms.is_empty() && rhs.is_zero() {
            continue;
        }
        sys.add_matrix_equation((rows, x.rank(b)), &terms, Some(&rhs));
    }
    let a = sys.matrix();
    let sol = if a.rows() == 0 {
        vec![ring.zero(); layout.total]
    } else {
        Solver::new(&a).solve(sys.rhs())?
    };
    let k = if a.rows() == 0 {
        ExactMatrix::identity(ring, layout.total)
    } else {
        kernel(&a)
    };
    let extra = random_combination(rng, &k);
    let v: Vec<Scalar> = sol.iter().zip(&extra).map(|(a, b)| ring.add(a, b)).collect();
    let mut maps = x.maps().clone();
    for (b, m) in layout.unpack(ring, &v) {
        maps.insert((n, b), m);
    }
    let out = Multicomplex::from_raw(ring, x.ranks().clone(), maps);
    Some(out)
}

/// A random map `X → Y` from the morphism module.
pub fn random_morphism(rng: &mut Rng64, x: &Multicomplex, y: &Multicomplex) -> MultiMap {
    let basis = morphism_space(x, y);
    let ring = x.ring();
    let mut acc = MultiMap::zero(x, y);
    for m in &basis {
        if rng.gen_bool(0.6) {
            acc = acc.add(&m.scale(&scalar(rng, ring)));
        }
    }
    acc
}

/// A mix of maps likely to hit every classification outcome.
pub fn random_map(rng: &mut Rng64, ring: RingSpec, shape: Shape) -> MultiMap {
    let x = random_multicomplex(rng, ring, shape);
    let kinds = [0, 1, 1, 2, 2, 3, 4, 5, 6, 6];
    match *kinds.choose(rng).unwrap() {
        0 => {
            let y = random_multicomplex(rng, ring, shape);
            random_morphism(rng, &x, &y)
        }
        1 => {
            // projection onto a quotient
            let s = random_multicomplex(rng, ring, shape);
            let f = random_morphism(rng, &s, &x);
            f.cokernel().expect("field cokernel").1
        }
        2 => {
            let y = random_multicomplex(rng, ring, shape);
            biproduct(&x, &y).pr2
        }
        3 => MultiMap::zero(&x, &Multicomplex::zero(ring)),
        4 => MultiMap::zero(&Multicomplex::zero(ring), &x),
        5 => MultiMap::identity(&x),
        _ => {
            // a surjection from a column-acyclic object
            let a = random_column_acyclic(rng, ring, shape);
            let bp = biproduct(&a, &x);
            let f = random_morphism(rng, &a, &x);
            bp.pr2.add(&f.compose(&bp.pr1))
        }
    }
}
