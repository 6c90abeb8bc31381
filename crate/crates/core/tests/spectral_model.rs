use std::collections::BTreeMap;

use bicx::bicomplex::Bicomplex;
use bicx::model::{self, LiftingProblem, StructureId};
use bicx::multi::{MultiMap, Multicomplex};
use bicx::random::{self, Shape};
use bicx::spectral;
use bicx::{Bidegree, Error, RingSpec};
use proptest::prelude::*;

fn shape(max_index: usize) -> Shape {
    Shape {
        pmax: 3,
        qmin: -1,
        qmax: 2,
        max_rank: 2,
        max_index,
        sparsity: 0.4,
    }
}

fn euler(t: &BTreeMap<Bidegree, usize>) -> i64 {
    t.iter()
        .map(|(b, &d)| {
            if b.total().rem_euclid(2) == 0 {
                d as i64
            } else {
                -(d as i64)
            }
        })
        .sum()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn pages_of_random_objects(seed in any::<u64>(), twisted in any::<bool>(), p in prop::sample::select(vec![0u32, 2, 3])) {
        let ring = if p == 0 { RingSpec::Rationals } else { RingSpec::PrimeField(p) };
        let mut rng = random::seeded(seed);
        let x = random::random_multicomplex(&mut rng, ring, shape(if twisted { 3 } else { 1 }));
        let ss = spectral::pages(&x, 4).unwrap();

        // E^1 is the vertical homology of the columns
        let mut e1 = BTreeMap::new();
        if let Some(s) = x.support() {
            for c in s.pmin..=s.pmax {
                for (q, m) in x.column(c).homology() {
                    e1.insert(Bidegree::new(c, q), m.free_rank);
                }
            }
        }
        prop_assert_eq!(ss.page(1), &e1);

        if !twisted {
            let e2 = Bicomplex::from_multi(x.clone()).unwrap().e2().unwrap();
            prop_assert_eq!(ss.page(2), &e2);
        }

        let chi = x.tot().euler_characteristic();
        for (r, page) in &ss.pages {
            prop_assert_eq!(euler(page), chi, "page {}", r);
        }

        // d^r lowers p by r and d^r d^r = 0
        for (r, ds) in &ss.differentials {
            for (b, m) in ds {
                let t = Bidegree::new(b.p - *r as i32, b.q + *r as i32 - 1);
                if let Some(n) = ds.get(&t) {
                    prop_assert!(n.mul(m).is_zero());
                }
                prop_assert_eq!(m.cols(), ss.pages[r][b]);
            }
        }

        prop_assert!(spectral::convergence_check(&x).unwrap().holds());
        prop_assert!(ss.stable_page <= (x.support().map_or(0, |s| s.pmax - s.pmin) + 1) as usize);
    }

    #[test]
    fn lifts_solve_the_square(seed in any::<u64>(), p in prop::sample::select(vec![0u32, 2, 3])) {
        let ring = if p == 0 { RingSpec::Integers } else { RingSpec::PrimeField(p) };
        let mut rng = random::seeded(seed);
        let sh = Shape { pmax: 2, qmin: 0, qmax: 1, max_rank: 2, max_index: 1, sparsity: 0.5 };
        let a = random::random_multicomplex(&mut rng, ring, sh);
        let b = random::random_multicomplex(&mut rng, ring, sh);
        let x = random::random_multicomplex(&mut rng, ring, sh);
        let y = random::random_multicomplex(&mut rng, ring, sh);
        let i = random::random_morphism(&mut rng, &a, &b);
        let g = random::random_morphism(&mut rng, &x, &y);
        let h0 = random::random_morphism(&mut rng, &b, &x);
        let sq = LiftingProblem { u: h0.compose(&i), f: g.compose(&h0), i, g };
        let h = model::solve_lift(&sq).unwrap();
        prop_assert!(h.is_some());
        let h = h.unwrap();
        prop_assert!(h.validate().is_empty());
        prop_assert_eq!(h.compose(&sq.i), sq.u.clone());
        prop_assert_eq!(sq.g.compose(&h), sq.f.clone());
    }

    #[test]
    fn tot_weq_is_tot_quasi_iso(seed in any::<u64>()) {
        let ring = RingSpec::PrimeField(2);
        let mut rng = random::seeded(seed);
        let f = random::random_map(&mut rng, ring, shape(1));
        let id = MultiMap::identity(f.source());
        let r = model::classify_map(&f, StructureId::TotalBicomplex).unwrap();
        let r2 = model::classify_map(&f.compose(&id), StructureId::TotalBicomplex).unwrap();
        prop_assert_eq!(r.is_weq, r2.is_weq);
        prop_assert_eq!(r.is_weq, Some(f.tot().is_quasi_iso()));
    }
}

#[test]
fn non_commuting_square_is_rejected() {
    let ring = RingSpec::Rationals;
    let mut rng = random::seeded(5);
    let x = loop {
        let x = random::random_multicomplex(&mut rng, ring, shape(1));
        if !x.is_zero() {
            break x;
        }
    };
    let id = MultiMap::identity(&x);
    let zero = MultiMap::zero(&x, &x);
    let sq = LiftingProblem {
        i: id.clone(),
        g: id.clone(),
        u: id,
        f: zero,
    };
    assert!(matches!(model::solve_lift(&sq), Err(Error::BadSquare(_))));
}

#[test]
fn spectral_sequence_needs_a_field() {
    let x = Multicomplex::zero(RingSpec::Integers);
    assert!(matches!(
        spectral::pages(&x, 2),
        Err(Error::UnsupportedRing { .. })
    ));
    let z = spectral::pages(&Multicomplex::zero(RingSpec::Rationals), 3).unwrap();
    assert!(z.e_infinity().is_empty());
}
