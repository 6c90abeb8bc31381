use std::collections::BTreeMap;

use bicx::multi::Flavor;
use bicx::twisted::{self, Generator, Word};
use bicx::verify;
use bicx::{Bidegree, RingSpec};

/// Sequences of `n` entries from `0..=s` with sum `s`, filtered by `keep`.
fn count_sequences(s: usize, n: usize, keep: &dyn Fn(&[usize]) -> bool) -> usize {
    let mut count = 0;
    let mut cur = vec![0; n];
    loop {
        if cur.iter().sum::<usize>() == s && keep(&cur) {
            count += 1;
        }
        let mut i = 0;
        while i < n && cur[i] == s {
            cur[i] = 0;
            i += 1;
        }
        if i == n {
            return count;
        }
        cur[i] += 1;
    }
}

/// Ranks by brute-force enumeration of the normal-form words.
fn disc_oracle(p: i32, q: i32) -> BTreeMap<Bidegree, usize> {
    let mut out = BTreeMap::new();
    for s in 0..=p as usize {
        for n in 0..=s + 1 {
            let positive = count_sequences(s, n, &|w| w.iter().all(|&i| i > 0));
            let final_zero = if n == 0 {
                0
            } else {
                count_sequences(s, n, &|w| w[n - 1] == 0 && w[..n - 1].iter().all(|&i| i > 0))
            };
            if positive + final_zero > 0 {
                out.insert(
                    Bidegree::new(p - s as i32, q + s as i32 - n as i32),
                    positive + final_zero,
                );
            }
        }
    }
    out
}

fn boundary_oracle(p: i32, q: i32) -> BTreeMap<Bidegree, usize> {
    let mut out = BTreeMap::new();
    for s in 0..=p as usize {
        for n in 0..=s {
            let k = count_sequences(s, n, &|w| w.iter().all(|&i| i > 0));
            if k > 0 {
                out.insert(Bidegree::new(p - s as i32, q - 1 + s as i32 - n as i32), k);
            }
        }
    }
    out
}

#[test]
fn rank_formulas_match_enumeration() {
    for p in 0..=6 {
        for q in verify::QS {
            assert_eq!(
                verify::disc_rank_formula(p, q),
                disc_oracle(p, q),
                "disc p={p} q={q}"
            );
            assert_eq!(
                verify::boundary_rank_formula(p, q),
                boundary_oracle(p, q),
                "boundary p={p} q={q}"
            );
            let d = twisted::twisted_disc(RingSpec::Integers, p, q).unwrap();
            assert_eq!(d.ranks(), &disc_oracle(p, q));
            let b = twisted::twisted_boundary(RingSpec::Integers, p, q).unwrap();
            assert_eq!(b.ranks(), &boundary_oracle(p, q));
        }
    }
}

#[test]
fn pictures_for_p4_q0() {
    let b = Bidegree::new;
    let disc = BTreeMap::from([
        (b(4, 0), 1),
        (b(4, -1), 1),
        (b(3, 0), 1),
        (b(2, 1), 1),
        (b(1, 2), 1),
        (b(0, 3), 1),
        (b(3, -1), 1),
        (b(2, 0), 2),
        (b(1, 1), 3),
        (b(0, 2), 4),
        (b(2, -1), 1),
        (b(1, 0), 3),
        (b(0, 1), 6),
        (b(1, -1), 1),
        (b(0, 0), 4),
        (b(0, -1), 1),
    ]);
    let boundary = BTreeMap::from([
        (b(4, -1), 1),
        (b(3, -1), 1),
        (b(2, 0), 1),
        (b(1, 1), 1),
        (b(0, 2), 1),
        (b(2, -1), 1),
        (b(1, 0), 2),
        (b(0, 1), 3),
        (b(1, -1), 1),
        (b(0, 0), 3),
        (b(0, -1), 1),
    ]);
    assert_eq!(
        twisted::twisted_disc(RingSpec::Rationals, 4, 0).unwrap().ranks(),
        &disc
    );
    assert_eq!(
        twisted::twisted_boundary(RingSpec::Rationals, 4, 0)
            .unwrap()
            .ranks(),
        &boundary
    );
    assert_eq!(verify::figure_tables(), (disc, boundary));
}

#[test]
fn generated_objects_satisfy_the_relations() {
    for ring in [RingSpec::Integers, RingSpec::PrimeField(2)] {
        for p in 0..=5 {
            let d = twisted::twisted_disc(ring, p, 1).unwrap();
            assert!(d.as_multi().validate(Flavor::Twisted).is_empty());
            assert!(d.tot().is_acyclic());
            for s in 0..=p as usize {
                let t = twisted::truncated_boundary(ring, p, 1, s).unwrap();
                assert!(t.as_multi().validate(Flavor::Twisted).is_empty());
            }
            let i = twisted::boundary_inclusion(ring, p, 1).unwrap();
            assert!(i.as_multi().validate().is_empty());
            assert!(i.as_multi().is_pointwise_injective());
        }
    }
}

#[test]
fn normal_forms() {
    let x = |s: &[usize]| Word::new(Generator::X, s.to_vec());
    let y = |s: &[usize]| Word::new(Generator::Y, s.to_vec());
    assert!(twisted::normal_form(&x(&[0, 0])).is_empty());
    assert_eq!(twisted::normal_form(&x(&[0, 1])), vec![(x(&[1, 0]), -1)]);
    let mut nf = twisted::normal_form(&x(&[0, 2]));
    nf.sort();
    assert_eq!(nf, vec![(x(&[1, 1]), -1), (x(&[2, 0]), -1)]);
    // two d_0 that are not adjacent need not cancel
    assert_eq!(twisted::normal_form(&x(&[0, 2, 0])), vec![(x(&[1, 1, 0]), -1)]);
    assert!(twisted::normal_form(&y(&[2, 0])).is_empty());
    assert!(twisted::normal_form(&y(&[0, 1])).is_empty());
    assert_eq!(twisted::normal_form(&y(&[0, 2, 1])), vec![(y(&[1, 1, 1]), -1)]);
    for words in twisted::disc_basis(4, 0).values() {
        for w in words {
            assert_eq!(twisted::normal_form(w), vec![(w.clone(), 1)]);
        }
    }
}

#[test]
fn suffix_reading_identifies_columns_and_prefix_reading_does_not() {
    let ring = RingSpec::Integers;
    for p in 2..=6 {
        for u in 0..=p - 2 {
            let c = twisted::compare_to_simplex_cochain(ring, p, 0, None, u).unwrap();
            assert_eq!(c.global_sign, -1);
            assert_eq!(c.simplex_dim, p - u - 2);
        }
    }
    let prefix_fails = (0..=2).any(|u| {
        twisted::compare_with(
            ring,
            5,
            0,
            None,
            u,
            &twisted::prefix_simplex_of,
            &twisted::comparison_sign,
        )
        .is_err()
    });
    assert!(prefix_fails);
}

#[test]
fn relative_columns() {
    let ring = RingSpec::PrimeField(3);
    for p in 3..=6 {
        for s in 1..=p as usize {
            for u in 0..=p - s as i32 - 2 {
                let c = twisted::compare_to_simplex_cochain(ring, p, 2, Some(s), u).unwrap();
                assert_eq!(c.relative_to, Some(p - u - s as i32 - 2));
            }
        }
    }
    assert!(twisted::compare_to_simplex_cochain(ring, 4, 0, Some(3), 0).is_err());
}

#[test]
fn negative_parameters_are_rejected() {
    assert!(twisted::twisted_disc(RingSpec::Integers, -1, 0).is_err());
}
