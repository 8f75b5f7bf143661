//! Per-tag instance generation and checks.

use num_bigint::BigInt;
use num_traits::Zero;
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::{IdentityKind, Outcome, VerifyConfig, Witness};
use crate::constructions::{
    central_slab, cross_polytope, polygon_zonotope, prism_over_embedded, random_lattice_polytope,
    random_lattice_simplex, random_symmetric_polytope, random_unimodular_bounded, random_zonotope,
    scaling_decomposition, standard_simplex, BaseKind, Construction,
};
use crate::error::{Error, Result};
use crate::geometry::linalg::{binomial, int};
use crate::geometry::{format_rational, Body, Polytope, RMatrix, RVector, Rational};
use crate::lattice::{count_at, draw_generic, zonotope_constant, ShiftStream, ZonotopeSpec};
use crate::stats::{exact_distribution, exact_variance, CountDistribution};

/// Coordinates of random bases for the scaling checks lie in `[−3, 3]`.
const SCALING_BOUND: i64 = 3;

fn salt(kind: IdentityKind, d: usize, i: usize) -> u64 {
    ((kind as u64) << 48) | ((d as u64) << 32) | i as u64
}

fn instance_seed(seed: u64, salt: u64) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(salt);
    rng.next_u64()
}

fn shifts_for(seed: u64, salt: u64, n: u64) -> ShiftStream {
    ShiftStream::new(seed, (salt << 6) | (n & 63))
}

fn describe(p: &Polytope) -> String {
    let vs: Vec<String> = p.vertices().iter().map(ToString::to_string).collect();
    format!("conv[{}]", vs.join(", "))
}

fn law(d: &CountDistribution) -> String {
    let atoms: Vec<String> =
        d.probabilities().iter().map(|(k, p)| format!("{k}: {}", format_rational(p))).collect();
    format!("{{{}}}", atoms.join(", "))
}

fn bigint_rational(b: BigInt) -> Rational {
    Rational::from_integer(b)
}

fn witness(instance: String, shift: Option<&[Rational]>, lhs: impl ToString, rhs: impl ToString, holds: bool) -> Witness {
    Witness { instance, shift: shift.map(<[Rational]>::to_vec), lhs: lhs.to_string(), rhs: rhs.to_string(), holds }
}

fn input_polytope(config: &VerifyConfig) -> Result<Option<Polytope>> {
    config.input.as_ref().map(Construction::polytope).transpose()
}

fn require_dim(p: &Polytope, dims: &[usize], kind: IdentityKind) -> Result<()> {
    if !dims.contains(&p.dim()) {
        return Err(Error::DimensionMismatch(format!("{kind} runs in dimension {dims:?}, input has {}", p.dim())));
    }
    Ok(())
}

/// `(body, salt)` for every instance: the input if given, else seeded random draws for
/// each dimension in `dims`.
fn instances<F>(kind: IdentityKind, config: &VerifyConfig, dims: &[usize], count: usize, draw: F) -> Result<Vec<(Polytope, u64)>>
where
    F: Fn(usize, u64) -> Result<Polytope>,
{
    if let Some(p) = input_polytope(config)? {
        require_dim(&p, dims, kind)?;
        return Ok(vec![(p, salt(kind, 0, 0))]);
    }
    let mut out = Vec::new();
    for &d in dims {
        for i in 0..count {
            let s = salt(kind, d, i);
            out.push((draw(d, instance_seed(config.seed, s))?, s));
        }
    }
    Ok(out)
}

pub(crate) fn run(
    kind: IdentityKind,
    config: &VerifyConfig,
    count: usize,
    shifts: usize,
    dilations: &[u64],
) -> Result<Vec<Outcome>> {
    use IdentityKind::*;
    let seed = config.seed;
    match kind {
        ScalingSimplex | ScalingPolyhedron => {
            let (base_kind, draw): (BaseKind, fn(usize, u64) -> Result<Polytope>) = if kind == ScalingSimplex {
                (BaseKind::Simplex, |d, s| random_lattice_simplex(d, SCALING_BOUND, s))
            } else {
                (BaseKind::Polyhedron, |d, s| random_lattice_polytope(d, 2 * d + 2, SCALING_BOUND, s))
            };
            let bases = instances(kind, config, &[2, 3], count, draw)?;
            bases.par_iter().map(|(b, s)| scaling(b, base_kind, dilations, shifts, seed, *s)).collect()
        }
        Corollary3d => {
            let bodies = instances(kind, config, &[3], count, |d, s| random_lattice_polytope(d, 6, 2, s))?;
            bodies.par_iter().map(|(p, s)| corollary_3d(p, dilations, shifts, seed, *s)).collect()
        }
        Corollary3dSymmetric | Corollary4dSymmetric => {
            let (d, exponent) = if kind == Corollary3dSymmetric { (3, 2) } else { (4, 4) };
            let bodies = match input_polytope(config)? {
                Some(p) => {
                    require_dim(&p, &[d], kind)?;
                    vec![p]
                }
                None => {
                    let mut v = vec![cross_polytope(d)];
                    for i in 1..count {
                        v.push(random_symmetric_polytope(d, 2, 1, instance_seed(seed, salt(kind, d, i)))?);
                    }
                    v
                }
            };
            bodies.par_iter().map(|p| symmetric_scaling(p, dilations, exponent)).collect()
        }
        ZonotopeConstancy => {
            let zonotopes = match &config.input {
                Some(Construction::Zonotope(z)) => vec![(z.clone(), salt(kind, 0, 0))],
                Some(Construction::Polytope(p)) => vec![(polygon_zonotope(p)?, salt(kind, 0, 0))],
                None => {
                    let mut v = Vec::new();
                    for d in [2, 3] {
                        for i in 0..count {
                            let s = salt(kind, d, i);
                            let is = instance_seed(seed, s);
                            v.push((random_zonotope(d, 3 + (is % 3) as usize, 3, is)?, s));
                        }
                    }
                    v
                }
            };
            zonotopes.par_iter().map(|(z, s)| zonotope_constancy(z, shifts, seed, *s)).collect()
        }
        SlInvariance | NegationInvariance => {
            let bodies = instances(kind, config, &[2, 3], count, |d, s| random_lattice_polytope(d, d + 2, 1, s))?;
            // with an explicit input, `count` random matrices act on that one body
            let jobs: Vec<(Polytope, u64)> = if config.input.is_some() && kind == SlInvariance {
                let p = &bodies[0].0;
                (0..count).map(|i| (p.clone(), salt(kind, p.dim(), i))).collect()
            } else {
                bodies
            };
            jobs.par_iter()
                .map(|(p, s)| {
                    let (image, label) = if kind == SlInvariance {
                        let a = random_unimodular_bounded(
                            p.dim(),
                            instance_seed(seed, s ^ 1),
                            config.unimodular_steps,
                            config.unimodular_max_entry,
                        )?
                        .matrix;
                        (p.affine_image(&a, &RVector::zeros(p.dim()))?, format!("A={:?}", int_rows(&a)))
                    } else {
                        (p.negate(), "-P".to_string())
                    };
                    invariance(p, &image, &label, config.cell_budget)
                })
                .collect()
        }
        Minkowski2d => {
            let pairs = match input_polytope(config)? {
                Some(p) => {
                    require_dim(&p, &[2], kind)?;
                    vec![(p.clone(), standard_simplex(2), salt(kind, 2, 0))]
                }
                None => (0..count)
                    .map(|i| {
                        let s = salt(kind, 2, i);
                        let is = instance_seed(seed, s);
                        Ok((random_lattice_polytope(2, 4, 2, is)?, random_lattice_polytope(2, 4, 2, is ^ 0x5a5a)?, s))
                    })
                    .collect::<Result<_>>()?,
            };
            pairs
                .par_iter()
                .map(|(p, q, s)| minkowski(p, q, &p.minkowski_sum(q)?, shifts, seed, *s))
                .collect()
        }
        SymmetricDistribution2d => {
            let bodies = instances(kind, config, &[2], count, |d, s| random_lattice_polytope(d, 4, 2, s))?;
            bodies.par_iter().map(|(p, _)| symmetric_law(p, config.cell_budget)).collect()
        }
        CentrallySymmetric2dConstancy => {
            let bodies = instances(kind, config, &[2], count, |d, s| random_symmetric_polytope(d, 2, 2, s))?;
            bodies
                .par_iter()
                .map(|(p, s)| {
                    let z = polygon_zonotope(p)?;
                    constancy(p, describe(p), Some(zonotope_constant(&z)?), shifts, seed, *s)
                })
                .collect()
        }
        CounterexampleSlab => {
            let p = input_polytope(config)?.map_or_else(|| central_slab(3), Ok)?;
            let mut o = constancy(&p, format!("central slab {}", describe(&p)), None, shifts, seed, salt(kind, 3, 0))?;
            let dist = exact_distribution(&p, config.cell_budget)?;
            o.record(witness("exact law of the centrally symmetric body".into(), None, law(&dist), "a single atom", dist.is_constant()));
            Ok(vec![o])
        }
        CounterexampleMinkowski => {
            let base = input_polytope(config)?.map_or_else(|| central_slab(3), Ok)?;
            let flat = base.embed();
            let d = flat.dim();
            let segment = Polytope::from_points(d, vec![RVector::zeros(d), RVector::unit(d, d - 1)])?;
            let prism = prism_over_embedded(&base)?;
            let mut o = minkowski(&flat, &segment, &prism, shifts, seed, salt(kind, d, 0))?;
            let dist = exact_distribution(&prism, config.cell_budget)?;
            o.notes.push(format!("exact law of the prism: {}", law(&dist)));
            Ok(vec![o])
        }
        CounterexampleSymmetry => {
            let p = input_polytope(config)?.unwrap_or_else(|| standard_simplex(3));
            Ok(vec![symmetric_law(&p, config.cell_budget)?])
        }
    }
}

fn int_rows(m: &RMatrix) -> Vec<Vec<i64>> {
    m.rows().iter().map(|r| RVector::new(r.clone()).to_i64s().expect("integer matrix")).collect()
}

/// `count(n·B) = Σ_k C(n−k+d, d)·count(P_k)` and `Σ_k count(P_k) = d!·vol(B)` at generic shifts.
fn scaling(base: &Polytope, kind: BaseKind, dilations: &[u64], shifts: usize, seed: u64, salt: u64) -> Result<Outcome> {
    let dec = scaling_decomposition(base, kind)?;
    let d = base.dim();
    let union = dec.union();
    let label = describe(base);
    let mut out = Outcome::default();
    for &n in dilations {
        let scaled = base.scale(n as i64)?;
        let simplices = dec.dilated_simplices(n as i64);
        let mults: Vec<BigInt> = (1..=d).map(|k| dec.multiplicity(k, n)).collect();
        let mut stream = shifts_for(seed, salt, n);
        for _ in 0..shifts {
            let s = draw_generic(&[&scaled, &simplices, &union], &mut stream, d)?;
            let x = s.coords();
            let lhs = count_at(&scaled, x).count;
            let pieces: Vec<u64> = dec.pieces.iter().map(|p| count_at(p, x).count).collect();
            let rhs: BigInt = mults.iter().zip(&pieces).map(|(m, &c)| m * c).sum();
            out.record(witness(format!("{label}, n={n}: dilate vs weighted pieces"), Some(x), lhs, &rhs, rhs == lhs.into()));
            let total: u64 = pieces.iter().sum();
            out.record(witness(
                format!("{label}, n={n}: sum of piece counts vs constant"),
                Some(x),
                total,
                &dec.constant_sum,
                dec.constant_sum == total.into(),
            ));
        }
    }
    Ok(out)
}

/// `count(nP) = C(n+1,2)·count(P) − C(n,2)·count(−P) + C(n+1,3)·6·vol(P)`.
fn corollary_3d(p: &Polytope, dilations: &[u64], shifts: usize, seed: u64, salt: u64) -> Result<Outcome> {
    let neg = p.negate();
    let vol6 = p.volume() * int(6);
    let label = describe(p);
    let mut out = Outcome::default();
    for &n in dilations {
        let n = n as i64;
        let scaled = p.scale(n)?;
        let constant = bigint_rational(binomial(n + 1, 3)) * &vol6;
        let (a, b) = (bigint_rational(binomial(n + 1, 2)), bigint_rational(binomial(n, 2)));
        let mut stream = shifts_for(seed, salt, n as u64);
        for _ in 0..shifts {
            let s = draw_generic(&[&scaled, p, &neg], &mut stream, 3)?;
            let x = s.coords();
            let lhs = int(count_at(&scaled, x).count as i64);
            let rhs = &a * int(count_at(p, x).count as i64) - &b * int(count_at(&neg, x).count as i64) + &constant;
            out.record(witness(
                format!("{label}, n={n}, constant {}", format_rational(&constant)),
                Some(x),
                format_rational(&lhs),
                format_rational(&rhs),
                lhs == rhs,
            ));
        }
    }
    Ok(out)
}

/// `Var(nP) = n^exponent · Var(P)`.
fn symmetric_scaling(p: &Polytope, dilations: &[u64], exponent: u32) -> Result<Outcome> {
    let base = exact_variance(p)?.variance;
    let label = describe(p);
    let mut out = Outcome::default();
    out.notes.push(format!("Var({label}) = {}", format_rational(&base)));
    for &n in dilations {
        let var = exact_variance(&p.scale(n as i64)?)?.variance;
        let expected = &base * int((n as i64).pow(exponent));
        out.record(witness(
            format!("{label}, n={n}: Var(nP) vs n^{exponent}·Var(P)"),
            None,
            format_rational(&var),
            format_rational(&expected),
            var == expected,
        ));
    }
    Ok(out)
}

fn zonotope_constancy(z: &ZonotopeSpec, shifts: usize, seed: u64, salt: u64) -> Result<Outcome> {
    let constant = zonotope_constant(z)?;
    let p = z.polytope()?;
    let label = format!("zonotope {:?}", z.generators);
    let mut out = constancy(&p, label.clone(), Some(constant.clone()), shifts, seed, salt)?;
    let vol = p.volume();
    out.record(witness(format!("{label}: volume vs constant"), None, format_rational(&vol), &constant, vol == bigint_rational(constant.clone())));
    out.notes.push(format!("{label}: constant {constant}"));
    Ok(out)
}

/// The count is the same at every generic shift (and equals `expected` when given).
fn constancy(p: &Polytope, label: String, expected: Option<BigInt>, shifts: usize, seed: u64, salt: u64) -> Result<Outcome> {
    let mut out = Outcome::default();
    let mut stream = shifts_for(seed, salt, 0);
    let mut reference = expected;
    for _ in 0..shifts {
        let s = draw_generic(&[p], &mut stream, p.dim())?;
        let c = BigInt::from(count_at(p, s.coords()).count);
        let target = reference.get_or_insert_with(|| c.clone()).clone();
        out.record(witness(label.clone(), Some(s.coords()), &c, &target, c == target));
    }
    Ok(out)
}

/// `count(S) − count(P) − count(Q) = vol(S) − vol(P) − vol(Q)` for `S = P ⊕ Q`.
/// Only `S` is required to be generic, so flat summands are allowed.
fn minkowski(p: &Polytope, q: &Polytope, sum: &Polytope, shifts: usize, seed: u64, salt: u64) -> Result<Outcome> {
    let constant = sum.volume() - p.volume() - q.volume();
    let label = format!("{} + {}", describe(p), describe(q));
    let mut out = Outcome::default();
    let mut stream = shifts_for(seed, salt, 0);
    let mut seen = std::collections::BTreeSet::new();
    let bodies: Vec<&dyn Body> = if p.is_full_dim() && q.is_full_dim() { vec![sum, p, q] } else { vec![sum] };
    for _ in 0..shifts {
        let s = draw_generic(&bodies, &mut stream, sum.dim())?;
        let x = s.coords();
        let diff = count_at(sum, x).count as i64 - count_at(p, x).count as i64 - count_at(q, x).count as i64;
        seen.insert(diff);
        out.record(witness(
            format!("{label}, constant {}", format_rational(&constant)),
            Some(x),
            diff,
            format_rational(&constant),
            int(diff) == constant,
        ));
    }
    out.notes.push(format!("{label}: count(sum) - count(P) - count(Q) took values {seen:?}"));
    Ok(out)
}

fn symmetric_law(p: &Polytope, budget: usize) -> Result<Outcome> {
    let dist = exact_distribution(p, budget)?;
    let probs = dist.probabilities();
    let twice = dist.mean() * int(2);
    let mut out = Outcome::default();
    let asymmetric = probs.iter().find_map(|(&m, pr)| {
        let mirror = &twice - int(m as i64);
        let other = if mirror.is_integer() && !mirror.numer().sign().eq(&num_bigint::Sign::Minus) {
            num_traits::ToPrimitive::to_u64(&mirror.to_integer()).and_then(|k| probs.get(&k)).cloned()
        } else {
            None
        }
        .unwrap_or_else(Rational::zero);
        (&other != pr).then(|| (m, pr.clone(), mirror, other))
    });
    let label = format!("{}: law {}", describe(p), law(&dist));
    match asymmetric {
        None => out.record(witness(label, None, "symmetric", "symmetric", true)),
        Some((m, pm, mirror, other)) => out.record(witness(
            label,
            None,
            format!("P(N={m})={}", format_rational(&pm)),
            format!("P(N={})={}", format_rational(&mirror), format_rational(&other)),
            false,
        )),
    }
    Ok(out)
}

/// `Var(image) = Var(P)` and, for `d <= 3`, equal exact laws.
fn invariance(p: &Polytope, image: &Polytope, label: &str, budget: usize) -> Result<Outcome> {
    let mut out = Outcome::default();
    let name = format!("{} under {label}", describe(p));
    let (a, b) = (exact_variance(p)?.variance, exact_variance(image)?.variance);
    out.record(witness(format!("{name}: variance"), None, format_rational(&b), format_rational(&a), a == b));
    if p.dim() <= 3 {
        let (da, db) = (exact_distribution(p, budget)?, exact_distribution(image, budget)?);
        out.record(witness(format!("{name}: law"), None, law(&db), law(&da), da == db));
    }
    Ok(out)
}
