//! Polytope families: simplices, cube slabs, scaling decompositions, Reeve tetrahedra,
//! counterexample bodies and seeded random instances.

use std::path::Path;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::geometry::io::polytope_from_json;
use crate::geometry::linalg::{binomial, int};
use crate::geometry::{HalfSpace, Polytope, PolytopeUnion, RMatrix, RVector, Rational};
use crate::lattice::ZonotopeSpec;

pub const DEFAULT_UNIMODULAR_STEPS: usize = 12;
pub const MAX_UNIMODULAR_ENTRY: i64 = 1_000_000;
const MAX_REJECTIONS: usize = 100;

/// `conv{0, e_1, …, e_d}`.
pub fn standard_simplex(d: usize) -> Polytope {
    let mut pts = vec![RVector::zeros(d)];
    pts.extend((0..d).map(|i| RVector::unit(d, i)));
    Polytope::from_points(d, pts).expect("simplex")
}

pub fn unit_cube(d: usize) -> Polytope {
    let pts = (0..1u64 << d)
        .map(|mask| RVector::from_ints(&(0..d).map(|j| ((mask >> j) & 1) as i64).collect::<Vec<_>>()))
        .collect();
    Polytope::from_points(d, pts).expect("cube")
}

/// `conv{±e_1, …, ±e_d}`.
pub fn cross_polytope(d: usize) -> Polytope {
    let pts = (0..d)
        .flat_map(|i| {
            let e = RVector::unit(d, i);
            let m = -&e;
            [e, m]
        })
        .collect();
    Polytope::from_points(d, pts).expect("cross polytope")
}

fn coordinate_sum(d: usize) -> RVector {
    RVector::ones(d)
}

/// The `d` slices `{x ∈ [0,1]^d : k−1 <= Σx <= k}`, `k = 1..d`.
pub fn slab_pieces(d: usize) -> Vec<Polytope> {
    let cube = unit_cube(d);
    (1..=d as i64)
        .map(|k| {
            let upper = HalfSpace { normal: coordinate_sum(d), offset: int(k) };
            let lower = HalfSpace { normal: -&coordinate_sum(d), offset: int(1 - k) };
            cube.clip(&upper).and_then(|p| p.clip(&lower)).expect("slab pieces are nonempty")
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ReeveParams {
    n: u32,
}

impl ReeveParams {
    pub fn new(n: i64) -> Result<Self> {
        if n < 1 || n > u32::MAX as i64 {
            return Err(Error::OutOfRange(format!("Reeve parameter must be >= 1, got {n}")));
        }
        Ok(ReeveParams { n: n as u32 })
    }

    pub fn n(&self) -> i64 {
        self.n as i64
    }
}

/// `conv{(0,0,0), (0,1,0), (1,0,0), (1,1,n)}`.
pub fn reeve_tetrahedron(params: ReeveParams) -> Polytope {
    Polytope::from_int_vertices(&[vec![0, 0, 0], vec![0, 1, 0], vec![1, 0, 0], vec![1, 1, params.n()]])
        .expect("Reeve tetrahedron")
}

/// The cube with its two corner simplices cut off: `{x ∈ [0,1]^d : 1 <= Σx <= d−1}`.
pub fn central_slab(d: usize) -> Result<Polytope> {
    if d < 2 {
        return Err(Error::DegenerateInput(format!("central slab needs d >= 2, got {d}")));
    }
    let mut hs = Vec::with_capacity(2 * d + 2);
    for j in 0..d {
        hs.push(HalfSpace { normal: -&RVector::unit(d, j), offset: int(0) });
        hs.push(HalfSpace { normal: RVector::unit(d, j), offset: int(1) });
    }
    hs.push(HalfSpace { normal: -&coordinate_sum(d), offset: int(-1) });
    hs.push(HalfSpace { normal: coordinate_sum(d), offset: int(d as i64 - 1) });
    Polytope::from_halfspaces(&hs, d)
}

/// `p × {0}` summed with the segment `[0, e_{d+1}]`.
pub fn prism_over_embedded(p: &Polytope) -> Result<Polytope> {
    if !p.is_full_dim() {
        return Err(Error::DegenerateInput("prism base must be full-dimensional".into()));
    }
    let d = p.dim() + 1;
    let segment = Polytope::from_points(d, vec![RVector::zeros(d), RVector::unit(d, d - 1)])?;
    p.embed().minkowski_sum(&segment)
}

/// Generators `(1,0), (0,1), (1,1)`: a lattice hexagon of area 3.
pub fn hexagon_zonotope() -> ZonotopeSpec {
    ZonotopeSpec::new(2, vec![vec![1, 0], vec![0, 1], vec![1, 1]]).expect("hexagon")
}

/// Edge generators of a centrally symmetric lattice polygon: one edge from each pair of
/// opposite sides. Their zonotope is a translate of the polygon.
pub fn polygon_zonotope(p: &Polytope) -> Result<ZonotopeSpec> {
    if p.dim() != 2 || !p.is_full_dim() || !p.is_lattice() {
        return Err(Error::DegenerateInput("need a full-dimensional lattice polygon".into()));
    }
    let (lo, hi) = p.bounding_box();
    let center = (&lo + &hi).scale(&Rational::new(1.into(), 2.into()));
    if !p.is_centrally_symmetric_about(&center) {
        return Err(Error::DegenerateInput("polygon is not centrally symmetric".into()));
    }
    let mut generators = Vec::new();
    for f in p.facets() {
        let ends: Vec<&RVector> = p.vertices().iter().filter(|v| f.slack(v).is_zero()).collect();
        let mut edge = ends[1] - ends[0];
        // orient counterclockwise: direction (−b, a) for outward normal (a, b)
        let ccw = RVector::new(vec![-f.normal[1].clone(), f.normal[0].clone()]);
        if edge.dot(&ccw).is_negative() {
            edge = -&edge;
        }
        let upper = edge[1].is_positive() || (edge[1].is_zero() && edge[0].is_positive());
        if upper {
            generators.push(edge.to_i64s().expect("lattice edge"));
        }
    }
    generators.sort();
    ZonotopeSpec::new(2, generators)
}

/// An integer matrix of determinant one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnimodularMatrix {
    pub matrix: RMatrix,
}

/// Product of `steps` random row operations `row_i += ±row_j`. Operations that would push an
/// entry past `MAX_UNIMODULAR_ENTRY` are rejected and redrawn.
pub fn random_unimodular(d: usize, seed: u64, steps: usize) -> Result<UnimodularMatrix> {
    random_unimodular_bounded(d, seed, steps, MAX_UNIMODULAR_ENTRY)
}

pub fn random_unimodular_bounded(d: usize, seed: u64, steps: usize, max_entry: i64) -> Result<UnimodularMatrix> {
    if d < 2 {
        return Err(Error::DegenerateInput(format!("unimodular sampling needs d >= 2, got {d}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut m: Vec<Vec<i64>> = (0..d).map(|i| (0..d).map(|j| (i == j) as i64).collect()).collect();
    let mut done = 0;
    let mut attempts = 0;
    while done < steps {
        attempts += 1;
        if attempts > steps * MAX_REJECTIONS {
            return Err(Error::ResampleExhausted(attempts));
        }
        let i = rng.random_range(0..d);
        let mut j = rng.random_range(0..d - 1);
        if j >= i {
            j += 1;
        }
        let sign = if rng.random_bool(0.5) { 1 } else { -1 };
        let row: Vec<i64> = (0..d).map(|c| m[i][c] + sign * m[j][c]).collect();
        if row.iter().any(|x| x.abs() > max_entry) {
            continue;
        }
        m[i] = row;
        done += 1;
    }
    let matrix = RMatrix::from_int_rows(&m)?;
    assert_eq!(matrix.determinant(), int(1));
    Ok(UnimodularMatrix { matrix })
}

fn random_points(rng: &mut ChaCha8Rng, d: usize, count: usize, bound: i64) -> Vec<RVector> {
    (0..count)
        .map(|_| RVector::from_ints(&(0..d).map(|_| rng.random_range(-bound..=bound)).collect::<Vec<_>>()))
        .collect()
}

/// Hull of `point_count` uniform integer points of `[−bound, bound]^d`, redrawn until
/// full-dimensional.
pub fn random_lattice_polytope(d: usize, point_count: usize, bound: i64, seed: u64) -> Result<Polytope> {
    if point_count < d + 1 {
        return Err(Error::DegenerateInput(format!("need at least {} points, got {point_count}", d + 1)));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..MAX_REJECTIONS {
        let p = Polytope::from_points(d, random_points(&mut rng, d, point_count, bound))?;
        if p.is_full_dim() {
            return Ok(p);
        }
    }
    Err(Error::DegenerateInput(format!("{MAX_REJECTIONS} draws were all flat")))
}

pub fn random_lattice_simplex(d: usize, bound: i64, seed: u64) -> Result<Polytope> {
    random_lattice_polytope(d, d + 1, bound, seed)
}

/// `conv(S ∪ −S)` for `half_count` random integer points `S`; symmetric about the origin.
pub fn random_symmetric_polytope(d: usize, half_count: usize, bound: i64, seed: u64) -> Result<Polytope> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..MAX_REJECTIONS {
        let mut pts = random_points(&mut rng, d, half_count, bound);
        pts.extend(pts.iter().map(|p| -p).collect::<Vec<_>>());
        let p = Polytope::from_points(d, pts)?;
        if p.is_full_dim() {
            return Ok(p);
        }
    }
    Err(Error::DegenerateInput(format!("{MAX_REJECTIONS} draws were all flat")))
}

/// Zonotope with `count` nonzero integer generators in `[−bound, bound]^d` spanning `R^d`.
pub fn random_zonotope(d: usize, count: usize, bound: i64, seed: u64) -> Result<ZonotopeSpec> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..MAX_REJECTIONS {
        let gens: Vec<Vec<i64>> = random_points(&mut rng, d, count, bound)
            .iter()
            .map(|g| g.to_i64s().unwrap())
            .collect();
        if gens.iter().any(|g| g.iter().all(|&x| x == 0)) {
            continue;
        }
        let z = ZonotopeSpec::new(d, gens)?;
        if crate::lattice::zonotope_constant(&z).is_ok() {
            return Ok(z);
        }
    }
    Err(Error::DegenerateInput(format!("{MAX_REJECTIONS} generator draws failed to span")))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BaseKind {
    Simplex,
    Polyhedron,
}

/// Slab-piece bodies whose integer translates tile every dilate `n·base`.
#[derive(Clone, Debug)]
pub struct ScalingDecomposition {
    pub base: Polytope,
    pub dim: usize,
    /// `pieces[k−1]` collects the image of the `k`-th slab under every simplex's map.
    pub pieces: Vec<PolytopeUnion>,
    /// Per simplex: edge vectors from its first vertex as columns, and that vertex.
    pub transforms: Vec<(RMatrix, RVector)>,
    /// `Σ |det|` over the simplices, the a.s. total count of all pieces.
    pub constant_sum: BigInt,
}

impl ScalingDecomposition {
    /// How many translates of piece `k` tile `n·base`: `C(n−k+d, d)`.
    pub fn multiplicity(&self, k: usize, n: u64) -> BigInt {
        multiplicity(self.dim, k, n)
    }

    /// All pieces as one body.
    pub fn union(&self) -> PolytopeUnion {
        PolytopeUnion::new(self.pieces.iter().flat_map(|u| u.parts.iter().cloned()).collect(), "pieces")
    }

    /// The dilates `n·S` of the simplices, as one body.
    pub fn dilated_simplices(&self, n: i64) -> PolytopeUnion {
        let dn = int(n);
        let parts = self
            .transforms
            .iter()
            .map(|(m, t)| {
                let mut pts = vec![t.scale(&dn)];
                for j in 0..self.dim {
                    let col = RVector::new((0..self.dim).map(|i| m.get(i, j).clone()).collect());
                    pts.push((t + &col).scale(&dn));
                }
                Polytope::from_points(self.dim, pts).expect("simplex")
            })
            .collect();
        PolytopeUnion::new(parts, format!("{n}*simplices"))
    }
}

pub fn multiplicity(d: usize, k: usize, n: u64) -> BigInt {
    let d = d as i64;
    binomial(n as i64 - k as i64 + d, d)
}

pub fn scaling_decomposition(base: &Polytope, kind: BaseKind) -> Result<ScalingDecomposition> {
    let d = base.dim();
    if !base.is_full_dim() {
        return Err(Error::DegenerateInput("scaling base must be full-dimensional".into()));
    }
    if !base.is_lattice() {
        return Err(Error::DegenerateInput("scaling base must be an integer polytope".into()));
    }
    let simplices = match kind {
        BaseKind::Simplex => {
            if base.vertices().len() != d + 1 {
                return Err(Error::DegenerateInput(format!(
                    "a {d}-simplex has {} vertices, got {}",
                    d + 1,
                    base.vertices().len()
                )));
            }
            vec![base.vertices().to_vec()]
        }
        BaseKind::Polyhedron => base.triangulate(),
    };
    let slabs = slab_pieces(d);
    let ones = RVector::ones(d);
    let mut parts: Vec<Vec<Polytope>> = vec![Vec::new(); d];
    let mut transforms = Vec::new();
    let mut constant_sum = BigInt::zero();
    for s in simplices {
        let t = s[0].clone();
        let cols: Vec<RVector> = s[1..].iter().map(|v| v - &t).collect();
        let m = RMatrix::from_columns(&cols)?;
        // integer vector moving M·slab_k + t onto −piece_{d+1−k} + 𝟙
        let flip = &ones - &(&m.apply(&ones) + &t.scale(&int(2)));
        for k in 1..=d {
            let mut piece = slabs[k - 1].affine_image(&m, &t)?;
            if 2 * k > d + 1 {
                piece = piece.translate(&flip);
            }
            parts[k - 1].push(piece);
        }
        constant_sum += m.determinant().abs().to_integer();
        transforms.push((m, t));
    }
    let pieces = parts
        .into_iter()
        .enumerate()
        .map(|(i, ps)| PolytopeUnion::new(ps, format!("P{}", i + 1)))
        .collect();
    Ok(ScalingDecomposition { base: base.clone(), dim: d, pieces, transforms, constant_sum })
}

/// A parsed catalog name or input file.
#[derive(Clone, Debug)]
pub enum Construction {
    Polytope(Polytope),
    Zonotope(ZonotopeSpec),
}

impl Construction {
    /// `simplex:d`, `cube:d`, `cross:d`, `slab:d:k`, `reeve:n`, `central-slab:d`, `hexagon`,
    /// `zonotope:<path>`, `file:<path>`; a bare path is read as a polytope file.
    pub fn parse(spec: &str) -> Result<Construction> {
        let (head, rest) = spec.split_once(':').unwrap_or((spec, ""));
        let ints = |s: &str| -> Result<Vec<i64>> {
            s.split(':')
                .map(|x| x.trim().parse::<i64>().map_err(|_| Error::Parse(format!("bad integer {x:?} in {spec:?}"))))
                .collect()
        };
        let dim = |s: &str| -> Result<usize> {
            match ints(s)?.as_slice() {
                [d] if *d >= 1 && *d <= 8 => Ok(*d as usize),
                _ => Err(Error::Parse(format!("expected a dimension 1..8 in {spec:?}"))),
            }
        };
        let p = match head {
            "simplex" => standard_simplex(dim(rest)?),
            "cube" => unit_cube(dim(rest)?),
            "cross" => cross_polytope(dim(rest)?),
            "central-slab" => central_slab(dim(rest)?)?,
            "reeve" => match ints(rest)?.as_slice() {
                [n] => reeve_tetrahedron(ReeveParams::new(*n)?),
                _ => return Err(Error::Parse(format!("expected reeve:n, got {spec:?}"))),
            },
            "slab" => match ints(rest)?.as_slice() {
                [d, k] if *d >= 1 && *d <= 8 && *k >= 1 && k <= d => slab_pieces(*d as usize).swap_remove(*k as usize - 1),
                _ => return Err(Error::Parse(format!("expected slab:d:k with 1 <= k <= d, got {spec:?}"))),
            },
            "hexagon" if rest.is_empty() => return Ok(Construction::Zonotope(hexagon_zonotope())),
            "zonotope" => return Ok(Construction::Zonotope(ZonotopeSpec::from_json(&read(rest)?)?)),
            "file" => polytope_from_json(&read(rest)?)?,
            _ if Path::new(spec).is_file() => polytope_from_json(&read(spec)?)?,
            _ => return Err(Error::Parse(format!("unknown construction {spec:?}"))),
        };
        Ok(Construction::Polytope(p))
    }

    pub fn polytope(&self) -> Result<Polytope> {
        match self {
            Construction::Polytope(p) => Ok(p.clone()),
            Construction::Zonotope(z) => z.polytope(),
        }
    }
}

fn read(path: &str) -> Result<String> {
    if path.is_empty() {
        return Err(Error::Parse("missing file path".into()));
    }
    Ok(std::fs::read_to_string(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::linalg::{factorial, frac};

    #[test]
    fn simplex_basics() {
        for d in 1..=4 {
            let s = standard_simplex(d);
            assert_eq!(s.volume(), Rational::new(1.into(), factorial(d)));
            assert_eq!(s.facets().len(), d + 1);
        }
    }

    #[test]
    fn slab_volumes_are_eulerian() {
        let vols: Vec<Rational> = slab_pieces(3).iter().map(Polytope::volume).collect();
        assert_eq!(vols, vec![frac(1, 6), frac(4, 6), frac(1, 6)]);
        let vols: Vec<Rational> = slab_pieces(4).iter().map(Polytope::volume).collect();
        assert_eq!(vols, vec![frac(1, 24), frac(11, 24), frac(11, 24), frac(1, 24)]);
        for d in 1..=4 {
            assert_eq!(slab_pieces(d).iter().map(Polytope::volume).sum::<Rational>(), int(1));
        }
    }

    #[test]
    fn slabs_reflect_through_center() {
        for d in 2..=4 {
            let slabs = slab_pieces(d);
            let ones = RVector::ones(d);
            for k in 0..d {
                assert_eq!(slabs[k].negate().translate(&ones), slabs[d - 1 - k]);
            }
        }
    }

    #[test]
    fn reeve_has_only_vertices() {
        let t = reeve_tetrahedron(ReeveParams::new(5).unwrap());
        assert_eq!(t.volume(), frac(5, 6));
        assert!(ReeveParams::new(0).is_err());
    }

    #[test]
    fn central_slab_is_octahedron() {
        let p = central_slab(3).unwrap();
        assert_eq!(p.vertices().len(), 6);
        assert_eq!(p.volume(), frac(2, 3));
        assert!(p.is_centrally_symmetric_about(&RVector::new(vec![frac(1, 2); 3])));
        assert!(central_slab(1).is_err());
    }

    #[test]
    fn prism_over_square_is_cube() {
        assert_eq!(prism_over_embedded(&unit_cube(2)).unwrap(), unit_cube(3));
    }

    #[test]
    fn hexagon_from_polygon() {
        let hex = hexagon_zonotope().polytope().unwrap();
        assert_eq!(hex.vertices().len(), 6);
        assert_eq!(polygon_zonotope(&hex).unwrap().generators, vec![vec![0, 1], vec![1, 0], vec![1, 1]]);
        let tri = standard_simplex(2);
        assert!(polygon_zonotope(&tri).is_err());
    }

    #[test]
    fn unimodular_sampling() {
        assert_eq!(random_unimodular(3, 1, 0).unwrap().matrix, RMatrix::identity(3));
        for seed in 0..20 {
            let a = random_unimodular(3, seed, DEFAULT_UNIMODULAR_STEPS).unwrap();
            assert_eq!(a.matrix.determinant(), int(1));
            assert!(a.matrix.is_integral());
        }
        assert_eq!(random_unimodular(2, 7, 12).unwrap(), random_unimodular(2, 7, 12).unwrap());
        let small = random_unimodular_bounded(3, 3, 40, 2).unwrap();
        assert!(small.matrix.max_abs_entry() <= int(2));
    }

    #[test]
    fn random_instances_are_reproducible() {
        let p = random_lattice_polytope(2, 3, 3, 9).unwrap();
        assert!(p.is_lattice() && p.is_full_dim());
        assert_eq!(p.vertices().len(), 3);
        assert_eq!(p, random_lattice_polytope(2, 3, 3, 9).unwrap());
        assert!(random_lattice_polytope(3, 3, 3, 0).is_err());
        let s = random_symmetric_polytope(3, 3, 2, 4).unwrap();
        assert!(s.is_centrally_symmetric_about(&RVector::zeros(3)));
    }

    #[test]
    fn simplex_decomposition_of_standard_simplex() {
        let dec = scaling_decomposition(&standard_simplex(3), BaseKind::Simplex).unwrap();
        let slabs = slab_pieces(3);
        for k in 0..3 {
            assert_eq!(dec.pieces[k].parts, vec![slabs[k].clone()]);
        }
        let m: Vec<BigInt> = (1..=3).map(|k| dec.multiplicity(k, 2)).collect();
        assert_eq!(m, vec![4.into(), 1.into(), 0.into()]);
        assert_eq!(dec.constant_sum, 1.into());
    }

    #[test]
    fn reeve_constant_sum() {
        let t = reeve_tetrahedron(ReeveParams::new(1).unwrap());
        assert_eq!(scaling_decomposition(&t, BaseKind::Simplex).unwrap().constant_sum, 1.into());
        let t4 = reeve_tetrahedron(ReeveParams::new(4).unwrap());
        assert_eq!(scaling_decomposition(&t4, BaseKind::Simplex).unwrap().constant_sum, 4.into());
    }

    #[test]
    fn volume_certificate() {
        let bases = [
            standard_simplex(2),
            random_lattice_simplex(2, 3, 1).unwrap(),
            random_lattice_simplex(3, 2, 2).unwrap(),
            random_lattice_polytope(3, 6, 2, 3).unwrap(),
            standard_simplex(4),
            cross_polytope(2),
        ];
        for base in &bases {
            let d = base.dim();
            let kind = if base.vertices().len() == d + 1 { BaseKind::Simplex } else { BaseKind::Polyhedron };
            let dec = scaling_decomposition(base, kind).unwrap();
            let vol = base.volume();
            for n in 1..=5u64 {
                let lhs: Rational = (1..=d)
                    .map(|k| Rational::from_integer(dec.multiplicity(k, n)) * dec.pieces[k - 1].volume())
                    .sum();
                assert_eq!(lhs, &vol * int((n as i64).pow(d as u32)));
            }
            assert_eq!(
                Rational::from_integer(dec.constant_sum.clone()),
                vol * Rational::from_integer(factorial(d))
            );
        }
    }

    #[test]
    fn negation_pairing() {
        let base = random_lattice_polytope(3, 6, 2, 5).unwrap();
        let dec = scaling_decomposition(&base, BaseKind::Polyhedron).unwrap();
        let ones = RVector::ones(3);
        assert_eq!(dec.pieces[0].negate().translate(&ones).parts, dec.pieces[2].parts);
        assert_eq!(dec.pieces[2].negate().translate(&ones).parts, dec.pieces[0].parts);
    }

    #[test]
    fn parse_names() {
        let tri = match Construction::parse("simplex:2").unwrap() {
            Construction::Polytope(p) => p,
            _ => unreachable!(),
        };
        assert_eq!(tri, Polytope::from_int_vertices(&[vec![0, 0], vec![1, 0], vec![0, 1]]).unwrap());
        let t4 = Construction::parse("reeve:4").unwrap().polytope().unwrap();
        assert_eq!(t4, reeve_tetrahedron(ReeveParams::new(4).unwrap()));
        assert_eq!(Construction::parse("slab:3:2").unwrap().polytope().unwrap().volume(), frac(2, 3));
        assert!(matches!(Construction::parse("hexagon").unwrap(), Construction::Zonotope(_)));
        for bad in ["simplex:x", "slab:3:4", "reeve:0", "nonsense", "central-slab:1", "file:"] {
            assert!(Construction::parse(bad).is_err(), "{bad}");
        }
    }
}
