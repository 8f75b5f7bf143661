//! Lattice point counting in shifted polytopes, genericity of shifts, and the constant
//! counts of lattice parallelepipeds and zonotopes.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::linalg::{combinations, determinant};
use crate::geometry::{Body, HalfSpace, Polytope, RVector, Rational};

/// Maximum redraws while looking for a shift with no boundary lattice points.
pub const MAX_RESAMPLE: usize = 64;

/// A point of `[0,1)^d` with dyadic coordinates `k / 2^64`, tagged with where it came from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Shift {
    numerators: Vec<u64>,
    coords: Vec<Rational>,
    pub seed: u64,
    pub stream: u64,
    pub index: u64,
}

fn two_pow_64() -> BigInt {
    BigInt::one() << 64
}

impl Shift {
    pub fn from_numerators(numerators: Vec<u64>) -> Shift {
        let den = two_pow_64();
        let coords = numerators.iter().map(|&k| Rational::new(BigInt::from(k), den.clone())).collect();
        Shift { numerators, coords, seed: 0, stream: 0, index: 0 }
    }

    /// The shift with every coordinate equal to `k / 2^64`.
    pub fn constant(d: usize, k: u64) -> Shift {
        Self::from_numerators(vec![k; d])
    }

    pub fn half(d: usize) -> Shift {
        Self::constant(d, 1 << 63)
    }

    pub fn numerators(&self) -> &[u64] {
        &self.numerators
    }

    pub fn coords(&self) -> &[Rational] {
        &self.coords
    }

    pub fn dim(&self) -> usize {
        self.numerators.len()
    }
}

/// Seeded source of shifts. Each `(seed, stream)` pair gives an independent, reproducible
/// sequence.
pub struct ShiftStream {
    rng: ChaCha8Rng,
    seed: u64,
    stream: u64,
    drawn: u64,
}

impl ShiftStream {
    pub fn new(seed: u64, stream: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        ShiftStream { rng, seed, stream, drawn: 0 }
    }

    pub fn next_shift(&mut self, d: usize) -> Shift {
        let mut s = Shift::from_numerators((0..d).map(|_| self.rng.next_u64()).collect());
        s.seed = self.seed;
        s.stream = self.stream;
        s.index = self.drawn;
        self.drawn += 1;
        s
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct CountResult {
    pub count: u64,
    /// Counted lattice points lying on the boundary of the shifted body.
    pub boundary_hits: Vec<Vec<i64>>,
}

impl CountResult {
    pub fn is_generic(&self) -> bool {
        self.boundary_hits.is_empty()
    }
}

struct Threshold {
    normal: Vec<i64>,
    floor: i128,
    exact: bool,
}

fn threshold(h: &HalfSpace, shift: &[Rational]) -> Threshold {
    let t = &h.offset + h.normal.dot(&RVector::new(shift.to_vec()));
    let normal = h
        .normal
        .to_i64s()
        .expect("facet normals are primitive integer vectors within i64 range");
    Threshold {
        normal,
        floor: t.floor().to_integer().to_i128().expect("threshold within i128 range"),
        exact: t.is_integer(),
    }
}

fn floor_div(a: i128, b: i128) -> i128 {
    Integer::div_floor(&a, &b)
}

fn ceil_div(a: i128, b: i128) -> i128 {
    -Integer::div_floor(&-a, &b)
}

/// Lattice points in `p + shift`, treating `p` as a closed set.
pub fn count_polytope(p: &Polytope, shift: &[Rational]) -> CountResult {
    let d = p.dim();
    assert_eq!(shift.len(), d, "shift dimension");
    let (lo, hi) = p.bounding_box();
    let lo: Vec<i128> = (0..d)
        .map(|j| (&lo[j] + &shift[j]).ceil().to_integer().to_i128().expect("box in range"))
        .collect();
    let hi: Vec<i128> = (0..d)
        .map(|j| (&hi[j] + &shift[j]).floor().to_integer().to_i128().expect("box in range"))
        .collect();
    if (0..d).any(|j| lo[j] > hi[j]) {
        return CountResult::default();
    }
    let hrep = p.hrep();
    let facets: Vec<Threshold> = hrep.facets.iter().map(|h| threshold(h, shift)).collect();
    let equalities: Vec<Threshold> = hrep.equalities.iter().map(|h| threshold(h, shift)).collect();
    if equalities.iter().any(|e| !e.exact) {
        return CountResult::default();
    }
    let flat = !p.is_full_dim();
    let last = d - 1;

    let mut count = 0u64;
    let mut hits: BTreeSet<Vec<i64>> = BTreeSet::new();
    let mut prefix: Vec<i128> = lo[..last].to_vec();
    loop {
        let partial = |t: &Threshold| -> i128 {
            prefix.iter().zip(&t.normal).map(|(z, a)| z * *a as i128).sum()
        };
        let (mut zlo, mut zhi) = (lo[last], hi[last]);
        let mut feasible = true;
        for t in facets.iter().chain(&equalities) {
            let c = t.normal[last] as i128;
            let rem = t.floor - partial(t);
            if c > 0 {
                zhi = zhi.min(floor_div(rem, c));
            } else if c < 0 {
                zlo = zlo.max(ceil_div(rem, c));
            } else if rem < 0 {
                feasible = false;
            }
        }
        for e in &equalities {
            let c = e.normal[last] as i128;
            let rem = e.floor - partial(e);
            if c == 0 {
                feasible &= rem == 0;
            } else if rem % c != 0 {
                feasible = false;
            } else {
                zlo = zlo.max(rem / c);
                zhi = zhi.min(rem / c);
            }
        }
        if feasible && zlo <= zhi {
            count += (zhi - zlo + 1) as u64;
            let point = |z: i128| -> Vec<i64> {
                prefix.iter().chain(std::iter::once(&z)).map(|&x| x as i64).collect()
            };
            if flat {
                hits.extend((zlo..=zhi).map(point));
            } else {
                for t in facets.iter().filter(|t| t.exact) {
                    let c = t.normal[last] as i128;
                    let rem = t.floor - partial(t);
                    if c == 0 {
                        if rem == 0 {
                            hits.extend((zlo..=zhi).map(point));
                        }
                    } else if rem % c == 0 && (zlo..=zhi).contains(&(rem / c)) {
                        hits.insert(point(rem / c));
                    }
                }
            }
        }
        // advance the odometer over all but the last coordinate
        let mut j = last;
        loop {
            if j == 0 {
                return CountResult { count, boundary_hits: hits.into_iter().collect() };
            }
            j -= 1;
            if prefix[j] < hi[j] {
                prefix[j] += 1;
                for k in j + 1..last {
                    prefix[k] = lo[k];
                }
                break;
            }
        }
    }
}

/// `|(body + shift) ∩ Z^d|`, summed over the parts of the body.
pub fn count_at<B: Body + ?Sized>(body: &B, shift: &[Rational]) -> CountResult {
    let mut total = CountResult::default();
    for p in body.parts() {
        let r = count_polytope(p, shift);
        total.count += r.count;
        total.boundary_hits.extend(r.boundary_hits);
    }
    total
}

pub fn is_generic<B: Body + ?Sized>(body: &B, shift: &[Rational]) -> bool {
    count_at(body, shift).is_generic()
}

/// Draws shifts until one is generic for every body in `bodies`.
pub fn draw_generic(bodies: &[&dyn Body], stream: &mut ShiftStream, d: usize) -> Result<Shift> {
    for _ in 0..MAX_RESAMPLE {
        let s = stream.next_shift(d);
        if bodies.iter().all(|b| is_generic(*b, s.coords())) {
            return Ok(s);
        }
    }
    Err(Error::ResampleExhausted(MAX_RESAMPLE))
}

/// The almost-sure count of a body whose generic count is constant, checked over
/// `trials` generic shifts.
pub fn generic_count<B: Body>(body: &B, stream: &mut ShiftStream, trials: usize) -> Result<u64> {
    let d = body.ambient_dim();
    let mut value = None;
    for _ in 0..trials.max(1) {
        let s = draw_generic(&[body], stream, d)?;
        let c = count_at(body, s.coords()).count;
        match value {
            None => value = Some(c),
            Some(v) if v != c => {
                return Err(Error::NotConstant(format!("generic shifts gave counts {v} and {c}")))
            }
            _ => {}
        }
    }
    Ok(value.unwrap())
}

fn integer_rows(gens: &[RVector]) -> Result<Vec<Vec<Rational>>> {
    if gens.iter().any(|g| !g.is_integral()) {
        return Err(Error::DegenerateInput("generators must be integer vectors".into()));
    }
    Ok(gens.iter().map(|g| g.coords().to_vec()).collect())
}

/// Index of the sublattice spanned by `d` integer vectors in `Z^d`, which is also the
/// almost-sure lattice count of the parallelepiped they span.
pub fn parallelepiped_index(gens: &[RVector]) -> Result<BigInt> {
    let d = gens.len();
    if gens.iter().any(|g| g.dim() != d) {
        return Err(Error::DimensionMismatch("need d generators in dimension d".into()));
    }
    let det = determinant(&integer_rows(gens)?).abs();
    if det.is_zero() {
        return Err(Error::DegenerateInput("generators do not span".into()));
    }
    Ok(det.to_integer())
}

/// Generators of an integer zonotope `v_1 ⊕ … ⊕ v_n` (each `v_i` the segment `[0, v_i]`).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZonotopeSpec {
    pub dim: usize,
    pub generators: Vec<Vec<i64>>,
}

impl ZonotopeSpec {
    pub fn new(dim: usize, generators: Vec<Vec<i64>>) -> Result<Self> {
        if generators.is_empty() || generators.iter().any(|g| g.len() != dim) {
            return Err(Error::DimensionMismatch(format!("zonotope generators in dimension {dim}")));
        }
        Ok(ZonotopeSpec { dim, generators })
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let z: ZonotopeSpec = serde_json::from_str(text)?;
        Self::new(z.dim, z.generators)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("serializable")
    }

    pub fn generator_vectors(&self) -> Vec<RVector> {
        self.generators.iter().map(|g| RVector::from_ints(g)).collect()
    }

    pub fn polytope(&self) -> Result<Polytope> {
        let mut acc = Polytope::from_points(self.dim, vec![RVector::zeros(self.dim)])?;
        for g in self.generator_vectors() {
            let seg = Polytope::from_points(self.dim, vec![RVector::zeros(self.dim), g])?;
            acc = acc.minkowski_sum(&seg)?;
        }
        Ok(acc)
    }
}

/// Sum of `|det|` over all `d`-subsets of generators: the constant count of the zonotope.
pub fn zonotope_constant(z: &ZonotopeSpec) -> Result<BigInt> {
    let gens = z.generator_vectors();
    let rows = integer_rows(&gens)?;
    let total: BigInt = combinations(gens.len(), z.dim)
        .map(|s| {
            let m: Vec<Vec<Rational>> = s.iter().map(|&i| rows[i].clone()).collect();
            determinant(&m).abs().to_integer()
        })
        .sum();
    if total.is_zero() {
        return Err(Error::DegenerateInput("zonotope generators do not span".into()));
    }
    Ok(total)
}
