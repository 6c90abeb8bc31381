//! Spectral sequence of the column filtration of the total complex.

use std::collections::{BTreeMap, HashMap};

use crate::bidegree::Bidegree;
use crate::chain::ChainComplex;
use crate::error::{Error, Result};
use crate::linalg::{kernel, Quotient};
use crate::matrix::ExactMatrix;
use crate::multi::Multicomplex;
use crate::ring::RingSpec;

#[derive(Clone, Debug)]
pub struct SpectralData {
    pub ring: RingSpec,
    /// `pages[r][(p,q)] = dim E^r_{p,q}`, zero entries omitted.
    pub pages: BTreeMap<usize, BTreeMap<Bidegree, usize>>,
    /// `d^r` out of `(p,q)`, only between nonzero entries.
    pub differentials: BTreeMap<usize, BTreeMap<Bidegree, ExactMatrix>>,
    /// First page from which all computed pages agree.
    pub stable_page: usize,
}

impl SpectralData {
    pub fn page(&self, r: usize) -> &BTreeMap<Bidegree, usize> {
        let last = *self.pages.keys().next_back().unwrap();
        &self.pages[&r.min(last)]
    }

    pub fn e_infinity(&self) -> &BTreeMap<Bidegree, usize> {
        self.page(usize::MAX)
    }
}

struct Filtered {
    tot: ChainComplex,
    /// Per total degree, `(p, end offset)` of each column block, increasing `p`.
    ends: BTreeMap<i32, Vec<(i32, usize)>>,
    zcache: HashMap<(usize, i32, i32), ExactMatrix>,
}

impl Filtered {
    fn new(x: &Multicomplex) -> Self {
        let tot = x.tot();
        let mut ends = BTreeMap::new();
        for (n, blocks) in x.tot_layout() {
            let v = blocks.iter().map(|(b, off)| (b.p, off + x.rank(*b))).collect();
            ends.insert(n, v);
        }
        Filtered {
            tot,
            ends,
            zcache: HashMap::new(),
        }
    }

    /// Dimension of `F_p Tot_n`.
    fn prefix(&self, n: i32, p: i32) -> usize {
        self.ends
            .get(&n)
            .and_then(|v| v.iter().filter(|(c, _)| *c <= p).map(|x| x.1).max())
            .unwrap_or(0)
    }

    /// `{x ∈ F_p Tot_n : dx ∈ F_{p-r}}`, as ambient columns.
    fn z(&mut self, r: usize, p: i32, n: i32) -> ExactMatrix {
        let key = (r, p, n);
        if let Some(m) = self.zcache.get(&key) {
            return m.clone();
        }
        let ring = self.tot.ring();
        let dim = self.tot.rank(n);
        let k = self.prefix(n, p);
        let out = if k == 0 {
            ExactMatrix::zeros(ring, dim, 0)
        } else {
            let d = self.tot.d(n);
            let lo = self.prefix(n - 1, p - r as i32);
            let rows: Vec<usize> = (lo..d.rows()).collect();
            let cols: Vec<usize> = (0..k).collect();
            let restricted = d.select_rows(&rows).select_columns(&cols);
            let kk = if restricted.rows() == 0 {
                ExactMatrix::identity(ring, k)
            } else {
                kernel(&restricted)
            };
            let mut full = ExactMatrix::zeros(ring, dim, kk.cols());
            full.set_block(0, 0, &kk);
            full
        };
        self.zcache.insert(key, out.clone());
        out
    }

    fn page_entry(&mut self, r: usize, p: i32, n: i32) -> Quotient {
        let ring = self.tot.ring();
        let top = self.z(r, p, n);
        let lower = if r == 0 {
            ExactMatrix::zeros(ring, self.tot.rank(n), 0)
        } else {
            self.z(r - 1, p - 1, n)
        };
        let bounds = if r == 0 {
            ExactMatrix::zeros(ring, self.tot.rank(n), 0)
        } else {
            let src = self.z(r - 1, p + r as i32 - 1, n + 1);
            self.tot.d(n + 1).mul(&src)
        };
        let sub = ExactMatrix::hstack(ring, self.tot.rank(n), &[&lower, &bounds]);
        Quotient::new(&top, &sub).expect("field quotient")
    }
}

/// Pages `E^1, …` up to at least `r_max` and at least the stable range.
pub fn pages(x: &Multicomplex, r_max: usize) -> Result<SpectralData> {
    let ring = x.ring();
    if !ring.is_field() {
        return Err(Error::UnsupportedRing {
            op: "spectral sequence",
            ring,
        });
    }
    let Some(sup) = x.support() else {
        return Ok(SpectralData {
            ring,
            pages: BTreeMap::from([(1, BTreeMap::new())]),
            differentials: BTreeMap::new(),
            stable_page: 1,
        });
    };
    let last = r_max.max(sup.pmax as usize + 2).max(1);
    let mut fil = Filtered::new(x);
    let degrees: Vec<i32> = fil.ends.keys().copied().collect();
    let mut pages = BTreeMap::new();
    let mut differentials = BTreeMap::new();
    for r in 1..=last {
        let mut entries: BTreeMap<Bidegree, Quotient> = BTreeMap::new();
        for &n in &degrees {
            for p in sup.pmin..=sup.pmax {
                let e = fil.page_entry(r, p, n);
                if e.dim() > 0 {
                    entries.insert(Bidegree::new(p, n - p), e);
                }
            }
        }
        let mut ds = BTreeMap::new();
        for (b, e) in &entries {
            let t = Bidegree::new(b.p - r as i32, b.q + r as i32 - 1);
            let Some(et) = entries.get(&t) else { continue };
            let img = fil.tot.d(b.total()).mul(&e.reps);
            let m = et
                .project_matrix(&img)
                .ok_or_else(|| Error::Internal(format!("d^{r} leaves the approximate cycles at {b}")))?;
            if !m.is_zero() {
                ds.insert(*b, m);
            }
        }
        pages.insert(
            r,
            entries
                .iter()
                .map(|(b, e)| (*b, e.dim()))
                .collect::<BTreeMap<_, _>>(),
        );
        differentials.insert(r, ds);
    }
    let final_page = &pages[&last];
    let stable_page = (1..=last)
        .rev()
        .take_while(|r| &pages[r] == final_page)
        .last()
        .unwrap_or(last);
    Ok(SpectralData {
        ring,
        pages,
        differentials,
        stable_page,
    })
}

/// Per total degree: `Σ dim E^∞` against `dim H_n(Tot)`.
#[derive(Clone, Debug)]
pub struct Convergence {
    pub rows: Vec<(i32, usize, usize)>,
}

impl Convergence {
    pub fn holds(&self) -> bool {
        self.rows.iter().all(|&(_, a, b)| a == b)
    }
}

pub fn convergence_check(x: &Multicomplex) -> Result<Convergence> {
    let ss = pages(x, 1)?;
    let mut einf: BTreeMap<i32, usize> = BTreeMap::new();
    for (b, &d) in ss.e_infinity() {
        *einf.entry(b.total()).or_insert(0) += d;
    }
    let h = x.tot().homology();
    let mut degrees: Vec<i32> = einf.keys().chain(h.keys()).copied().collect();
    degrees.sort();
    degrees.dedup();
    let rows = degrees
        .into_iter()
        .map(|n| {
            (
                n,
                einf.get(&n).copied().unwrap_or(0),
                h.get(&n).map_or(0, |m| m.free_rank),
            )
        })
        .collect();
    Ok(Convergence { rows })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_cell_twisted_example() {
        let ring = RingSpec::Rationals;
        let b = Bidegree::new;
        let x = Multicomplex::from_raw(
            ring,
            BTreeMap::from([(b(2, 0), 1), (b(0, 1), 1)]),
            BTreeMap::from([((2, b(2, 0)), ExactMatrix::identity(ring, 1))]),
        );
        let ss = pages(&x, 3).unwrap();
        assert_eq!(ss.page(2), &BTreeMap::from([(b(2, 0), 1), (b(0, 1), 1)]));
        assert!(ss.differentials[&2].contains_key(&b(2, 0)));
        assert!(ss.page(3).is_empty());
        assert!(convergence_check(&x).unwrap().holds());
    }
}
