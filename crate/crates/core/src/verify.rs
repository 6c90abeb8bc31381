//! The desk-scale verification suite behind `bicx verify-paper`.
//!
//! Each check is a pure function of its parameters and seed, so two runs with
//! the same options print identical reports.

use std::collections::BTreeMap;
use std::fmt;

use rand::Rng;

use crate::bicomplex::{Bicomplex, BicomplexKind};
use crate::bidegree::Bidegree;
use crate::chain::{ChainComplex, ChainMap, ModuleClass};
use crate::error::Result;
use crate::linalg::smith_normal_form;
use crate::matrix::ExactMatrix;
use crate::model::{self, StructureId};
use crate::multi::{biproduct, MultiMap, Multicomplex};
use crate::random::{self, seeded, Rng64, Shape};
use crate::ring::RingSpec;
use crate::spectral;
use crate::twisted::{self, TwistedComplex};

#[derive(Clone, Debug)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub details: Vec<String>,
}

impl Check {
    fn new(name: &str) -> Self {
        Check {
            name: name.to_string(),
            passed: true,
            details: Vec::new(),
        }
    }

    fn info(&mut self, line: String) {
        self.details.push(line);
    }

    /// Records a failure; only the first few are kept verbatim.
    fn fail(&mut self, line: String) {
        if self.passed || self.details.iter().filter(|d| d.starts_with("FAIL")).count() < 5 {
            self.details.push(format!("FAIL {line}"));
        }
        self.passed = false;
    }

    fn expect(&mut self, ok: bool, line: impl FnOnce() -> String) {
        if !ok {
            self.fail(line());
        }
    }

    fn error(&mut self, what: &str, e: crate::Error) {
        self.fail(format!("{what}: {e}"));
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "[{}] {}", if self.passed { "PASS" } else { "FAIL" }, self.name)?;
        for d in &self.details {
            writeln!(f, "    {d}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub struct Options {
    pub max_p: i32,
    pub seed: u64,
    /// Restricts the ring-parametrised checks to one ring.
    pub ring: Option<RingSpec>,
    pub maps_per_structure: usize,
    pub spectral_cases: usize,
    pub ce_cases: usize,
    pub snf_cases: usize,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            max_p: 5,
            seed: 42,
            ring: None,
            maps_per_structure: 200,
            spectral_cases: 100,
            ce_cases: 50,
            snf_cases: 1000,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Report {
    pub checks: Vec<Check>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn first_failure(&self) -> Option<&Check> {
        self.checks.iter().find(|c| !c.passed)
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            write!(f, "{c}")?;
        }
        let n = self.checks.iter().filter(|c| c.passed).count();
        writeln!(f, "{n}/{} checks passed", self.checks.len())
    }
}

pub const QS: [i32; 3] = [-1, 0, 2];

fn sub_seed(seed: u64, tag: u64) -> u64 {
    seed.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(tag)
}

fn field_rings(opts: &Options) -> Vec<RingSpec> {
    match opts.ring {
        Some(r) if r.is_field() => vec![r],
        _ => vec![RingSpec::PrimeField(2), RingSpec::PrimeField(3)],
    }
}

/// Runs every check.
pub fn run(opts: &Options) -> Report {
    let all_rings = match opts.ring {
        Some(r) => vec![r],
        None => vec![
            RingSpec::Rationals,
            RingSpec::PrimeField(2),
            RingSpec::PrimeField(3),
            RingSpec::Integers,
        ],
    };
    let spectral_ring = match opts.ring {
        Some(r) if r.is_field() => r,
        _ => RingSpec::Rationals,
    };
    let identity_ring = opts.ring.unwrap_or(RingSpec::Integers);
    let checks = vec![
        rank_tables(opts.max_p),
        acyclicity(opts.max_p, &all_rings),
        simplicial_identification(opts.max_p),
        tensor_identities(identity_ring, opts.max_p.min(3)),
        rlp_agreement(opts.seed, opts.maps_per_structure, &field_rings(opts)),
        spectral_consistency(opts.seed, opts.spectral_cases, spectral_ring),
        ce_resolutions(opts.seed, opts.ce_cases),
        adjunction_sanity(opts.seed),
        torsion(opts.seed, opts.snf_cases),
    ];
    Report { checks }
}

fn binom(n: i64, k: i64) -> usize {
    if k < 0 || n < 0 || k > n {
        return 0;
    }
    let mut r: u64 = 1;
    for i in 0..k as u64 {
        r = r * (n as u64 - i) / (i + 1);
    }
    r as usize
}

/// Ranks of the twisted disc from the counting formula.
pub fn disc_rank_formula(p: i32, q: i32) -> BTreeMap<Bidegree, usize> {
    let mut out = BTreeMap::new();
    out.insert(Bidegree::new(p, q), 1);
    for s in 0..=p {
        for n in 1..=s + 1 {
            let r = if n == 1 || n == s + 1 {
                1
            } else {
                binom((s - 1) as i64, (n - 1) as i64) + binom((s - 1) as i64, (n - 2) as i64)
            };
            out.insert(Bidegree::new(p - s, q + s - n), r);
        }
    }
    out
}

/// Ranks of the vertical boundary of the twisted disc from the counting formula.
pub fn boundary_rank_formula(p: i32, q: i32) -> BTreeMap<Bidegree, usize> {
    let mut out = BTreeMap::new();
    out.insert(Bidegree::new(p, q - 1), 1);
    for s in 1..=p {
        for n in 1..=s {
            out.insert(
                Bidegree::new(p - s, q - 1 + s - n),
                binom((s - 1) as i64, (n - 1) as i64),
            );
        }
    }
    out
}

fn table(entries: &[(i32, i32, usize)]) -> BTreeMap<Bidegree, usize> {
    entries
        .iter()
        .map(|&(p, q, r)| (Bidegree::new(p, q), r))
        .collect()
}

/// The two pictures of the `p = 4, q = 0` twisted disc and its boundary.
pub fn figure_tables() -> (BTreeMap<Bidegree, usize>, BTreeMap<Bidegree, usize>) {
    let disc = table(&[
        (4, 0, 1),
        (4, -1, 1),
        (3, 0, 1),
        (2, 1, 1),
        (1, 2, 1),
        (0, 3, 1),
        (3, -1, 1),
        (2, 0, 2),
        (1, 1, 3),
        (0, 2, 4),
        (2, -1, 1),
        (1, 0, 3),
        (0, 1, 6),
        (1, -1, 1),
        (0, 0, 4),
        (0, -1, 1),
    ]);
    let boundary = table(&[
        (4, -1, 1),
        (3, -1, 1),
        (2, 0, 1),
        (1, 1, 1),
        (0, 2, 1),
        (2, -1, 1),
        (1, 0, 2),
        (0, 1, 3),
        (1, -1, 1),
        (0, 0, 3),
        (0, -1, 1),
    ]);
    (disc, boundary)
}

pub fn rank_tables(max_p: i32) -> Check {
    let mut c = Check::new("rank tables of twisted discs and their vertical boundaries");
    let ring = RingSpec::Integers;
    let mut objects = 0;
    for p in 0..=max_p {
        for q in QS {
            match twisted::twisted_disc(ring, p, q) {
                Ok(x) => c.expect(x.ranks() == &disc_rank_formula(p, q), || {
                    format!("disc ({p},{q}) ranks differ")
                }),
                Err(e) => c.error(&format!("disc ({p},{q})"), e),
            }
            match twisted::twisted_boundary(ring, p, q) {
                Ok(x) => c.expect(x.ranks() == &boundary_rank_formula(p, q), || {
                    format!("boundary ({p},{q}) ranks differ")
                }),
                Err(e) => c.error(&format!("boundary ({p},{q})"), e),
            }
            objects += 2;
        }
    }
    let (fd, fb) = figure_tables();
    match (
        twisted::twisted_disc(ring, 4, 0),
        twisted::twisted_boundary(ring, 4, 0),
    ) {
        (Ok(d), Ok(b)) => {
            c.expect(d.ranks() == &fd, || "disc (4,0) differs from its picture".into());
            c.expect(b.ranks() == &fb, || {
                "boundary (4,0) differs from its picture".into()
            });
        }
        _ => c.fail("could not build the (4,0) objects".into()),
    }
    c.info(format!(
        "{objects} objects, 0 <= p <= {max_p}, q in {QS:?}, plus both p = 4, q = 0 pictures"
    ));
    c
}

pub fn acyclicity(max_p: i32, rings: &[RingSpec]) -> Check {
    let mut c = Check::new("total acyclicity of twisted discs (p >= 0) and boundaries (p >= 1)");
    let mut n = 0;
    for &ring in rings {
        for p in 0..=max_p {
            for q in QS {
                match twisted::twisted_disc(ring, p, q) {
                    Ok(x) => c.expect(x.tot().is_acyclic(), || format!("disc ({p},{q}) over {ring}")),
                    Err(e) => c.error("disc", e),
                }
                n += 1;
                if p >= 1 {
                    match twisted::twisted_boundary(ring, p, q) {
                        Ok(x) => c.expect(x.tot().is_acyclic(), || format!("boundary ({p},{q}) over {ring}")),
                        Err(e) => c.error("boundary", e),
                    }
                    n += 1;
                }
            }
        }
    }
    let names: Vec<String> = rings.iter().map(|r| r.to_string()).collect();
    c.info(format!("{n} total complexes over {}", names.join(", ")));
    c
}

pub fn simplicial_identification(max_p: i32) -> Check {
    let mut c = Check::new("columns of the boundary are simplex cochains (global sign -1)");
    let ring = RingSpec::Integers;
    let (mut abs, mut rel) = (0, 0);
    for p in 2..=max_p {
        for q in QS {
            for u in 0..=p - 2 {
                match twisted::compare_to_simplex_cochain(ring, p, q, None, u) {
                    Ok(r) => c.expect(r.global_sign == -1, || format!("sign at p={p} u={u}")),
                    Err(e) => c.error(&format!("p={p} q={q} u={u}"), e),
                }
                abs += 1;
            }
            for s in 1..=(p - 2) {
                for u in 0..p - s - 1 {
                    match twisted::compare_to_simplex_cochain(ring, p, q, Some(s as usize), u) {
                        Ok(r) => c.expect(r.relative_to == Some(p - u - s - 2), || {
                            format!("front face at p={p} s={s} u={u}")
                        }),
                        Err(e) => c.error(&format!("p={p} q={q} s={s} u={u}"), e),
                    }
                    rel += 1;
                }
            }
        }
    }
    c.info(format!(
        "{abs} absolute and {rel} relative columns, p <= {max_p}, q in {QS:?}"
    ));
    c
}

pub fn tensor_identities(ring: RingSpec, pmax: i32) -> Check {
    let mut c = Check::new("tensor identities among generating bicomplexes");
    match model::verify_generator_identities(ring, pmax, &QS) {
        Ok(list) => {
            for i in &list {
                c.expect(i.holds, || i.name.clone());
            }
            let maps = list.iter().filter(|i| i.name.contains('↪')).count();
            c.info(format!(
                "{} object isomorphisms and {maps} arrow isomorphisms over {ring}, p, s <= {pmax}, q, t in {QS:?}",
                list.len() - maps
            ));
        }
        Err(e) => c.error("identity suite", e),
    }
    c
}

fn map_shape(s: StructureId) -> Shape {
    let max_index = if s == StructureId::TotalTwisted { 3 } else { 1 };
    Shape {
        pmax: 3,
        qmin: -2,
        qmax: 2,
        max_rank: 2,
        max_index,
        sparsity: 0.5,
    }
}

/// Rows acyclic, vertical cycles not: `X → 0` is a CE fibration but not a trivial one.
pub fn ce_fibration_fixture(ring: RingSpec) -> Result<MultiMap> {
    let b = Bidegree::new;
    let one = || ExactMatrix::identity(ring, 1);
    let x = Bicomplex::new(
        ring,
        BTreeMap::from([(b(1, 1), 1), (b(0, 1), 1), (b(2, 0), 1), (b(1, 0), 1)]),
        BTreeMap::from([(b(1, 1), one()), (b(2, 0), one())]),
        BTreeMap::from([(b(1, 1), one())]),
    )?;
    Ok(MultiMap::zero(x.as_multi(), &Multicomplex::zero(ring)))
}

fn fixed_maps(ring: RingSpec) -> Result<Vec<MultiMap>> {
    let mut out = vec![ce_fibration_fixture(ring)?];
    for p in 1..=2 {
        for q in 0..=1 {
            out.push(model::disc_onto_vboundary(ring, p, q)?);
        }
    }
    Ok(out)
}

pub fn rlp_agreement(seed: u64, count: usize, rings: &[RingSpec]) -> Check {
    let mut c = Check::new("RLP against I and J agrees with the (trivial) fibration criteria");
    for s in StructureId::ALL {
        let mut tally = [0usize; 3];
        let mut fixtures = 0;
        for (k, &ring) in rings.iter().enumerate() {
            let mut rng = seeded(sub_seed(seed, 100 + 10 * s as u64 + k as u64));
            let fixed = match fixed_maps(ring) {
                Ok(v) => v,
                Err(e) => {
                    c.error("fixtures", e);
                    Vec::new()
                }
            };
            let nfixed = fixed.len();
            fixtures += nfixed;
            let mut fixed = fixed.into_iter();
            for case in 0..count + nfixed {
                let f = match fixed.next() {
                    Some(f) => f,
                    None => random::random_map(&mut rng, ring, map_shape(s)),
                };
                let (r, cl) = match (model::rlp_report(&f, s), model::classify_map(&f, s)) {
                    (Ok(r), Ok(cl)) => (r, cl),
                    (Err(e), _) | (_, Err(e)) => {
                        c.error(&format!("{} case {case} over {ring}", s.name()), e);
                        continue;
                    }
                };
                c.expect(
                    r.rlp_j == cl.is_fibration && r.rlp_i == cl.is_trivial_fibration,
                    || {
                        format!(
                        "{} case {case} over {ring}: rlp (I {}, J {}) vs classify (trivial {}, fibration {})",
                        s.name(),
                        r.rlp_i,
                        r.rlp_j,
                        cl.is_trivial_fibration,
                        cl.is_fibration
                    )
                    },
                );
                tally[cl.is_fibration as usize + cl.is_trivial_fibration as usize] += 1;
            }
        }
        let names: Vec<String> = rings.iter().map(|r| r.to_string()).collect();
        c.info(format!(
            "{}: {} random and {fixtures} fixed maps over {}; {} trivial fibrations, {} other fibrations, {} non-fibrations",
            s.name(),
            count * rings.len(),
            names.join(", "),
            tally[2],
            tally[1],
            tally[0]
        ));
    }
    c
}

fn page_two_oracle(x: &Multicomplex, twisted_case: bool) -> Result<BTreeMap<Bidegree, usize>> {
    if twisted_case {
        TwistedComplex::from_multi(x.clone())?.vertical_homology()?.e2()
    } else {
        Bicomplex::from_multi(x.clone())?.e2()
    }
}

/// `X → X ⊕ D` with `D` a sum of discs, perturbed by a random map into `D`.
fn e2_iso_fixture(rng: &mut Rng64, x: &Multicomplex) -> Result<MultiMap> {
    let ring = x.ring();
    let mut d = Multicomplex::zero(ring);
    for _ in 0..2 {
        let p = rng.gen_range(1..=3);
        let q = rng.gen_range(-1..=1);
        d = d.direct_sum(Bicomplex::standard(ring, &BicomplexKind::Disc { p, q, r: 1 })?.as_multi());
    }
    let bp = biproduct(x, &d);
    let g = random::random_morphism(rng, x, &d);
    Ok(bp.in1.add(&bp.in2.compose(&g)))
}

pub fn spectral_consistency(seed: u64, count: usize, ring: RingSpec) -> Check {
    let mut c = Check::new("spectral sequence: E2 = H^h(H^v), strong convergence, E2-iso implies Tot-weq");
    let mut rng = seeded(sub_seed(seed, 200));
    let (mut iso_fixtures, mut e2_isos) = (0, 0);
    for case in 0..count {
        let twisted_case = case % 2 == 1;
        let shape = Shape {
            pmax: 3,
            qmin: -2,
            qmax: 1,
            max_rank: 2,
            max_index: if twisted_case { 3 } else { 1 },
            sparsity: 0.4,
        };
        let x = random::random_multicomplex(&mut rng, ring, shape);
        let ss = match spectral::pages(&x, 4) {
            Ok(s) => s,
            Err(e) => {
                c.error(&format!("case {case}"), e);
                continue;
            }
        };
        match page_two_oracle(&x, twisted_case) {
            Ok(e2) => c.expect(ss.page(2) == &e2, || {
                format!("case {case}: page 2 differs from H^h(H^v)")
            }),
            Err(e) => c.error(&format!("case {case} oracle"), e),
        }
        c.expect(ss.stable_page <= 4, || {
            format!("case {case}: stable only from page {}", ss.stable_page)
        });
        for (r, ds) in &ss.differentials {
            for (b, m) in ds {
                let t = Bidegree::new(b.p - *r as i32, b.q + *r as i32 - 1);
                if let Some(next) = ds.get(&t) {
                    c.expect(next.mul(m).is_zero(), || {
                        format!("case {case}: d^{r} d^{r} != 0 at {b}")
                    });
                }
            }
        }
        match spectral::convergence_check(&x) {
            Ok(cv) => c.expect(cv.holds(), || {
                format!("case {case}: E-infinity and H(Tot) differ {:?}", cv.rows)
            }),
            Err(e) => c.error(&format!("case {case}"), e),
        }
        if !twisted_case {
            let maps = [
                e2_iso_fixture(&mut rng, &x),
                Ok(random::random_map(&mut rng, ring, shape)),
            ];
            for f in maps {
                let f = match f {
                    Ok(f) => f,
                    Err(e) => {
                        c.error(&format!("case {case} fixture"), e);
                        continue;
                    }
                };
                iso_fixtures += 1;
                match model::classify_map(&f, StructureId::CEBicomplex) {
                    Ok(r) if r.is_weq == Some(true) => {
                        e2_isos += 1;
                        c.expect(f.tot().is_quasi_iso(), || {
                            format!("case {case}: E2-iso that is not a Tot-weq")
                        });
                    }
                    Ok(_) => {}
                    Err(e) => c.error(&format!("case {case} classify"), e),
                }
            }
        }
    }
    c.info(format!(
        "{count} random objects over {ring} (bicomplexes and twisted complexes alternating); {e2_isos} of {iso_fixtures} map fixtures are E2-isomorphisms, all Tot-weqs"
    ));
    c
}

pub fn ce_resolutions(seed: u64, count: usize) -> Check {
    let mut c = Check::new("Cartan-Eilenberg resolutions over Z");
    let mut rng = seeded(sub_seed(seed, 300));
    let ring = RingSpec::Integers;
    let mut torsion_cases = 0;
    for case in 0..count {
        let lo = rng.gen_range(-1..=1);
        let len = rng.gen_range(1..=4);
        let y = random::random_chain(&mut rng, ring, lo, lo + len - 1, 3);
        if y.homology().values().any(|h| !h.torsion.is_empty()) {
            torsion_cases += 1;
        }
        let (p, eps) = match model::ce_resolution(&y) {
            Ok(r) => r,
            Err(e) => {
                c.error(&format!("case {case}"), e);
                continue;
            }
        };
        let width = p.support().map_or(0, |s| s.pmax - s.pmin.min(0) + 1);
        c.expect(width <= 2, || format!("case {case}: horizontal width {width}"));
        if let Some(s) = p.support() {
            for q in s.qmin..=s.qmax {
                let h = p.row(q).homology();
                c.expect(h.iter().all(|(&n, m)| n == 0 || m.is_zero()), || {
                    format!("case {case}: row {q} not exact")
                });
            }
        }
        match model::classify_map(eps.as_multi(), StructureId::CEBicomplex) {
            Ok(r) => c.expect(r.is_trivial_fibration, || {
                format!("case {case}: augmentation not a trivial fibration")
            }),
            Err(e) => c.error(&format!("case {case}"), e),
        }
        let cof = model::cofibrancy_report(p.as_multi(), StructureId::CEBicomplex);
        c.expect(cof.passes(), || {
            format!("case {case}: cofibrancy conditions fail")
        });
    }
    c.info(format!(
        "{count} random free complexes, {torsion_cases} with torsion in homology"
    ));
    c
}

/// Inclusion of column 0 into the total complex.
fn column_zero_inclusion(x: &Multicomplex) -> Result<ChainMap> {
    let col = x.column(0);
    let tot = x.tot();
    let f = col
        .ranks()
        .iter()
        .map(|(&n, &r)| {
            let mut m = ExactMatrix::zeros(x.ring(), tot.rank(n), r);
            m.set_block(0, 0, &ExactMatrix::identity(x.ring(), r));
            (n, m)
        })
        .collect();
    ChainMap::new(col, tot, f)
}

pub fn adjunction_sanity(seed: u64) -> Check {
    let mut c = Check::new("column-0 adjunction: ev0 of the inclusion, H(Tot) of fibrant objects");
    let mut rng = seeded(sub_seed(seed, 400));
    let (mut chains, mut fibrant) = (0, 0);
    for ring in [RingSpec::Rationals, RingSpec::PrimeField(2), RingSpec::Integers] {
        for case in 0..10 {
            let ch = random::random_chain(&mut rng, ring, -1, 2, 3);
            match Bicomplex::standard(ring, &BicomplexKind::IncludeChain(ch.clone())) {
                Ok(b) => {
                    c.expect(b.ev0() == ch, || {
                        format!("{ring} case {case}: ev0 is not the identity")
                    });
                    c.expect(b.tot().homology() == ch.homology(), || {
                        format!("{ring} case {case}: H(Tot) != H(C)")
                    });
                }
                Err(e) => c.error("include", e),
            }
            chains += 1;
            let shape = Shape {
                pmax: 3,
                qmin: -1,
                qmax: 2,
                max_rank: 2,
                max_index: 1,
                sparsity: 0.4,
            };
            let y = random::random_column_acyclic(&mut rng, ring, shape);
            let to_zero = MultiMap::zero(&y, &Multicomplex::zero(ring));
            match model::classify_map(&to_zero, StructureId::TotalBicomplex) {
                Ok(r) => c.expect(r.is_fibration, || {
                    format!("{ring} case {case}: fixture is not fibrant")
                }),
                Err(e) => c.error("classify", e),
            }
            match column_zero_inclusion(&y) {
                Ok(i) => {
                    c.expect(i.is_quasi_iso(), || {
                        format!("{ring} case {case}: column 0 -> Tot has a non-acyclic cone")
                    });
                    c.expect(i.source().homology() == y.tot().homology(), || {
                        format!("{ring} case {case}: H(Y_0) != H(Tot Y)")
                    });
                }
                Err(e) => c.error("inclusion", e),
            }
            fibrant += 1;
        }
    }
    c.info(format!(
        "{chains} included chain complexes, {fibrant} fibrant bicomplexes over Q, F_2, Z"
    ));
    c
}

pub fn torsion(seed: u64, count: usize) -> Check {
    let mut c = Check::new("torsion in homology and Smith normal form certificates");
    let ring = RingSpec::Integers;
    let two = ChainComplex::new(
        ring,
        BTreeMap::from([(0, 1), (1, 1)]),
        BTreeMap::from([(1, ExactMatrix::from_i64_rows(ring, &[vec![2]]))]),
    );
    match two {
        Ok(x) => {
            let h = x.homology_at(0);
            c.expect(
                h == ModuleClass {
                    free_rank: 0,
                    torsion: vec![ring.from_i64(2)],
                },
                || format!("H_0 of x2 is {h}"),
            );
            c.expect(x.homology_at(1).is_zero(), || "H_1 of x2 is nonzero".into());
        }
        Err(e) => c.error("x2 complex", e),
    }
    let mut rng = seeded(sub_seed(seed, 500));
    for case in 0..count {
        let rows = rng.gen_range(1..=8);
        let cols = rng.gen_range(1..=8);
        let entries: Vec<Vec<i64>> = (0..rows)
            .map(|_| {
                (0..cols)
                    .map(|_| {
                        if rng.gen_bool(0.4) {
                            0
                        } else {
                            rng.gen_range(-9..=9)
                        }
                    })
                    .collect()
            })
            .collect();
        let m = ExactMatrix::from_i64_rows(ring, &entries);
        let snf = match smith_normal_form(&m) {
            Ok(s) => s,
            Err(e) => {
                c.error(&format!("case {case}"), e);
                continue;
            }
        };
        c.expect(snf.u.mul(&m).mul(&snf.v) == snf.d, || {
            format!("case {case}: U M V != D")
        });
        c.expect(
            snf.u.mul(&snf.u_inv).is_identity() && snf.v.mul(&snf.v_inv).is_identity(),
            || format!("case {case}: U or V not unimodular"),
        );
        let diag: Vec<_> = (0..rows.min(cols)).map(|i| snf.d.get(i, i).clone()).collect();
        let off_diagonal_zero = snf.d.nonzero_entries().all(|(r, c, _)| r == c);
        let chain = diag
            .windows(2)
            .all(|w| ring.is_zero(&w[1]) || (!ring.is_zero(&w[0]) && ring.div_exact(&w[1], &w[0]).is_some()));
        let nonneg = diag.iter().all(|x| !ring.is_negative(x));
        c.expect(off_diagonal_zero && chain && nonneg, || {
            format!("case {case}: D is not in normal form")
        });
    }
    c.info(format!(
        "x2 complex has H_0 = Z/2; {count} random integer matrices up to 8x8"
    ));
    c
}
