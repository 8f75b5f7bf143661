//! Laws of the count variable: exact (by cell decomposition of the unit cube) and empirical.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::geometry::cell::Cell;
use crate::geometry::{format_rational, Body, HalfSpace, RVector, Rational};
use crate::lattice::count_at;

pub const DEFAULT_CELL_BUDGET: usize = 1_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CountDistribution {
    /// Exact probabilities, summing to one.
    Exact(BTreeMap<u64, Rational>),
    /// Sample frequencies from seeded Monte Carlo.
    Empirical {
        counts: BTreeMap<u64, u64>,
        samples: u64,
        seed: u64,
        /// Draws rejected because a lattice point landed on the boundary.
        redraws: u64,
    },
}

impl CountDistribution {
    pub fn is_exact(&self) -> bool {
        matches!(self, CountDistribution::Exact(_))
    }

    /// Probabilities (exact) or relative frequencies (empirical).
    pub fn probabilities(&self) -> BTreeMap<u64, Rational> {
        match self {
            CountDistribution::Exact(m) => m.clone(),
            CountDistribution::Empirical { counts, samples, .. } => counts
                .iter()
                .map(|(&k, &c)| (k, Rational::new(BigInt::from(c), BigInt::from(*samples))))
                .collect(),
        }
    }

    pub fn support(&self) -> Vec<u64> {
        self.probabilities().keys().copied().collect()
    }

    pub fn mean(&self) -> Rational {
        self.probabilities()
            .iter()
            .map(|(&k, p)| p * Rational::from_integer(BigInt::from(k)))
            .sum()
    }

    pub fn variance(&self) -> Rational {
        let mean = self.mean();
        self.probabilities()
            .iter()
            .map(|(&k, p)| {
                let dev = Rational::from_integer(BigInt::from(k)) - &mean;
                p * &dev * &dev
            })
            .sum()
    }

    pub fn is_constant(&self) -> bool {
        self.support().len() == 1
    }

    /// Whether `N − E N` has a symmetric law: `P(N = m) = P(N = 2·mean − m)` for every `m`.
    pub fn is_symmetric_about_mean(&self) -> bool {
        let probs = self.probabilities();
        let twice = self.mean() * Rational::from_integer(BigInt::from(2));
        probs.iter().all(|(&m, p)| {
            let mirror = &twice - Rational::from_integer(BigInt::from(m));
            mirror.is_integer()
                && mirror.to_integer().to_u64().and_then(|k| probs.get(&k)) == Some(p)
        })
    }

    /// `count,probability` rows with probabilities written as exact fractions.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("count,probability\n");
        for (k, p) in self.probabilities() {
            out.push_str(&format!("{k},{}\n", format_rational(&p)));
        }
        out
    }
}

fn unit_cube_crossing(h: &HalfSpace) -> bool {
    let (mut lo, mut hi) = (Rational::zero(), Rational::zero());
    for a in h.normal.coords() {
        if a < &Rational::zero() {
            lo += a;
        } else {
            hi += a;
        }
    }
    lo < h.offset && h.offset < hi
}

/// Hyperplanes `{x : a·x = a·z − b}` bounding the translates `z − P` that cross the open unit
/// cube, for every facet `a·y <= b` of every part. Sorted by their canonical form.
fn splitting_hyperplanes<B: Body + ?Sized>(body: &B) -> Vec<HalfSpace> {
    let d = body.ambient_dim();
    let mut planes = BTreeSet::new();
    for p in body.parts() {
        let (lo, hi) = p.bounding_box();
        let zlo: Vec<i64> = (0..d).map(|j| lo[j].ceil().to_integer().to_i64().unwrap()).collect();
        let zhi: Vec<i64> = (0..d).map(|j| (&hi[j] + Rational::from_integer(1.into())).floor().to_integer().to_i64().unwrap()).collect();
        let mut z = zlo.clone();
        'outer: loop {
            let zv = RVector::from_ints(&z);
            for f in p.facets() {
                let h = HalfSpace { normal: f.normal.clone(), offset: f.normal.dot(&zv) - &f.offset };
                if unit_cube_crossing(&h) {
                    planes.insert(h.hyperplane_key());
                }
            }
            let mut j = d;
            loop {
                if j == 0 {
                    break 'outer;
                }
                j -= 1;
                if z[j] < zhi[j] {
                    z[j] += 1;
                    for k in j + 1..d {
                        z[k] = zlo[k];
                    }
                    break;
                }
            }
        }
    }
    planes.into_iter().collect()
}

/// Exact law of the count. The count is constant on the cells cut from `[0,1]^d` by the facet
/// hyperplanes of all lattice translates `z − P` meeting the cube; each cell's count is read at
/// its vertex centroid and weighted by its exact volume.
pub fn exact_distribution<B: Body + ?Sized>(body: &B, cell_budget: usize) -> Result<CountDistribution> {
    let d = body.ambient_dim();
    if body.parts().iter().any(|p| !p.is_full_dim()) {
        return Err(Error::DegenerateInput("exact distribution needs full-dimensional parts".into()));
    }
    let planes = splitting_hyperplanes(body);
    let approx: Vec<(Vec<f64>, f64)> = planes
        .iter()
        .map(|h| (h.normal.to_f64s(), h.offset.to_f64().unwrap()))
        .collect();

    let mut law: BTreeMap<u64, Rational> = BTreeMap::new();
    let mut cells = 1usize;
    let mut stack = vec![(Cell::unit_cube(d), 0usize)];
    while let Some((cell, start)) = stack.pop() {
        let mut split = None;
        for i in start..planes.len() {
            let h = &planes[i];
            if let Some(pair) = cell.split(h.normal.coords(), &h.offset, &approx[i].0, approx[i].1, 2 * d + i) {
                split = Some((pair, i + 1));
                break;
            }
        }
        match split {
            Some(((below, above), next)) => {
                cells += 1;
                if cells > cell_budget {
                    return Err(Error::CellBudgetExceeded(cell_budget));
                }
                stack.push((above, next));
                stack.push((below, next));
            }
            None => {
                let centroid = cell.centroid();
                let r = count_at(body, &centroid);
                if !r.is_generic() {
                    return Err(Error::NonGenericCentroid(format!("{:?}", r.boundary_hits)));
                }
                *law.entry(r.count).or_insert_with(Rational::zero) += cell.volume();
            }
        }
    }
    law.retain(|_, p| !p.is_zero());
    let total: Rational = law.values().sum();
    assert_eq!(total, Rational::from_integer(1.into()), "cell volumes must tile the unit cube");
    Ok(CountDistribution::Exact(law))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::linalg::{frac, int};
    use crate::geometry::Polytope;

    fn exact(p: &Polytope) -> BTreeMap<u64, Rational> {
        match exact_distribution(p, DEFAULT_CELL_BUDGET).unwrap() {
            CountDistribution::Exact(m) => m,
            _ => unreachable!(),
        }
    }

    #[test]
    fn standard_simplices() {
        let tri = Polytope::from_int_vertices(&[vec![0, 0], vec![1, 0], vec![0, 1]]).unwrap();
        assert_eq!(exact(&tri), BTreeMap::from([(0, frac(1, 2)), (1, frac(1, 2))]));
        let s3 = Polytope::from_int_vertices(&[vec![0, 0, 0], vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]).unwrap();
        assert_eq!(exact(&s3), BTreeMap::from([(0, frac(5, 6)), (1, frac(1, 6))]));
    }

    #[test]
    fn reeve_two_moments() {
        let t = Polytope::from_int_vertices(&[vec![0, 0, 0], vec![0, 1, 0], vec![1, 0, 0], vec![1, 1, 2]]).unwrap();
        let dist = exact_distribution(&t, DEFAULT_CELL_BUDGET).unwrap();
        assert_eq!(dist.mean(), frac(1, 3));
        assert_eq!(dist.variance(), frac(2, 9));
    }

    #[test]
    fn budget_is_enforced() {
        let t = Polytope::from_int_vertices(&[vec![0, 0, 0], vec![0, 1, 0], vec![1, 0, 0], vec![1, 1, 3]]).unwrap();
        assert!(matches!(exact_distribution(&t, 3), Err(Error::CellBudgetExceeded(3))));
    }

    #[test]
    fn symmetry_and_csv() {
        let d = CountDistribution::Exact(BTreeMap::from([(0, frac(1, 2)), (1, frac(1, 2))]));
        assert!(d.is_symmetric_about_mean());
        assert_eq!(d.to_csv(), "count,probability\n0,1/2\n1,1/2\n");
        let s = CountDistribution::Exact(BTreeMap::from([(0, frac(5, 6)), (1, frac(1, 6))]));
        assert!(!s.is_symmetric_about_mean());
        let c = CountDistribution::Exact(BTreeMap::from([(3, int(1))]));
        assert!(c.is_symmetric_about_mean() && c.is_constant());
    }
}
