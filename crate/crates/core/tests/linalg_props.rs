use bicx::linalg::{self, Solver};
use bicx::{ExactMatrix, RingSpec, Scalar};
use proptest::prelude::*;

fn matrix(max: usize, range: i64) -> impl Strategy<Value = Vec<Vec<i64>>> {
    (0..=max, 0..=max)
        .prop_flat_map(move |(r, c)| prop::collection::vec(prop::collection::vec(-range..=range, c), r))
}

fn build(ring: RingSpec, rows: &[Vec<i64>], cols: usize) -> ExactMatrix {
    if rows.is_empty() {
        return ExactMatrix::zeros(ring, 0, cols);
    }
    ExactMatrix::from_i64_rows(ring, rows)
}

fn cols_of(rows: &[Vec<i64>]) -> usize {
    rows.first().map_or(0, Vec::len)
}

/// Size of the largest minor that is nonzero in `ring`.
fn rank_by_minors(ring: RingSpec, rows: &[Vec<i64>]) -> usize {
    let r = rows.len();
    let c = cols_of(rows);
    let mut best = 0;
    for k in 1..=r.min(c) {
        let row_sets = subsets(r, k);
        let col_sets = subsets(c, k);
        let found = row_sets.iter().any(|rs| {
            col_sets.iter().any(|cs| {
                let minor: Vec<Vec<i64>> = rs
                    .iter()
                    .map(|&i| cs.iter().map(|&j| rows[i][j]).collect())
                    .collect();
                !ring.is_zero(&ring.from_i64(det(&minor)))
            })
        });
        if found {
            best = k;
        } else {
            break;
        }
    }
    best
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if n < k {
        return vec![];
    }
    let mut out = subsets(n - 1, k);
    for mut s in subsets(n - 1, k - 1) {
        s.push(n - 1);
        out.push(s);
    }
    out
}

fn det(m: &[Vec<i64>]) -> i64 {
    let n = m.len();
    if n == 1 {
        return m[0][0];
    }
    (0..n)
        .map(|j| {
            let sub: Vec<Vec<i64>> = m[1..]
                .iter()
                .map(|r| {
                    r.iter()
                        .enumerate()
                        .filter(|(c, _)| *c != j)
                        .map(|x| *x.1)
                        .collect()
                })
                .collect();
            let s = if j % 2 == 0 { 1 } else { -1 };
            s * m[0][j] * det(&sub)
        })
        .sum()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rank_agrees_with_minors(rows in matrix(4, 3), p in prop::sample::select(vec![0u32, 2, 3, 5])) {
        let ring = if p == 0 { RingSpec::Rationals } else { RingSpec::PrimeField(p) };
        let m = build(ring, &rows, cols_of(&rows));
        prop_assert_eq!(linalg::rank(&m), rank_by_minors(ring, &rows));
    }

    #[test]
    fn kernel_and_image(rows in matrix(5, 4), p in prop::sample::select(vec![0u32, 2, 7])) {
        let ring = if p == 0 { RingSpec::Rationals } else { RingSpec::PrimeField(p) };
        let m = build(ring, &rows, cols_of(&rows));
        let k = linalg::kernel(&m);
        prop_assert!(m.mul(&k).is_zero());
        prop_assert_eq!(linalg::rank(&k), k.cols());
        prop_assert_eq!(k.cols() + linalg::rank(&m), m.cols());
        prop_assert_eq!(linalg::image(&m).cols(), linalg::rank(&m));
    }

    #[test]
    fn snf_certificate(rows in matrix(6, 9)) {
        let ring = RingSpec::Integers;
        let m = build(ring, &rows, cols_of(&rows));
        let s = linalg::smith_normal_form(&m).unwrap();
        prop_assert_eq!(s.u.mul(&m).mul(&s.v), s.d.clone());
        prop_assert!(s.u.mul(&s.u_inv).is_identity());
        prop_assert!(s.v.mul(&s.v_inv).is_identity());
        for (r, c, _) in s.d.nonzero_entries() {
            prop_assert_eq!(r, c);
        }
        let f: Vec<Scalar> = (0..m.rows().min(m.cols())).map(|i| s.d.get(i, i).clone()).filter(|x| !ring.is_zero(x)).collect();
        prop_assert_eq!(f.len(), rank_by_minors(RingSpec::Rationals, &rows));
        for w in f.windows(2) {
            prop_assert!(ring.div_exact(&w[1], &w[0]).is_some());
        }
        for x in &f {
            prop_assert!(!ring.is_negative(x));
        }
    }

    #[test]
    fn integer_solver_finds_preimages(rows in matrix(4, 5), x in prop::collection::vec(-4i64..=4, 4)) {
        let ring = RingSpec::Integers;
        let cols = cols_of(&rows);
        let m = build(ring, &rows, cols);
        let x: Vec<Scalar> = x.into_iter().take(cols).map(|v| ring.from_i64(v)).chain(std::iter::repeat(ring.zero())).take(cols).collect();
        let b = m.mul_vec(&x);
        let y = Solver::new(&m).solve(&b);
        prop_assert!(y.is_some());
        prop_assert_eq!(m.mul_vec(&y.unwrap()), b);
    }
}

#[test]
fn unsolvable_over_integers() {
    let ring = RingSpec::Integers;
    let m = ExactMatrix::from_i64_rows(ring, &[vec![2, 4]]);
    assert!(linalg::solve_exact(&m, &[ring.from_i64(3)]).is_none());
    assert!(linalg::solve_exact(&m, &[ring.from_i64(6)]).is_some());
}
