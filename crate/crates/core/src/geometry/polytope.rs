use std::collections::BTreeSet;
use std::fmt;
use std::sync::OnceLock;

use num_traits::{Signed, Zero};

use super::cell::{Bits, Cell, Clip};
use super::linalg::{
    affine_dim, combinations, dot, nullspace, primitive_scale, rank, solve, RMatrix,
    RVector, Rational,
};
use crate::error::{Error, Result};

/// The closed halfspace `normal · x <= offset`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HalfSpace {
    pub normal: RVector,
    pub offset: Rational,
}

impl HalfSpace {
    pub fn new(normal: RVector, offset: Rational) -> Result<Self> {
        if normal.is_zero() {
            return Err(Error::DegenerateInput("halfspace with zero normal".into()));
        }
        Ok(HalfSpace { normal, offset })
    }

    /// `Σ coeffs·x <= offset` from integer data.
    pub fn from_ints(coeffs: &[i64], offset: Rational) -> Self {
        HalfSpace { normal: RVector::from_ints(coeffs), offset }
    }

    pub fn contains(&self, p: &RVector) -> bool {
        self.normal.dot(p) <= self.offset
    }

    pub fn slack(&self, p: &RVector) -> Rational {
        &self.offset - self.normal.dot(p)
    }

    /// The complementary closed halfspace `normal · x >= offset`.
    pub fn flipped(&self) -> HalfSpace {
        HalfSpace { normal: -&self.normal, offset: -self.offset.clone() }
    }

    /// Positive rescaling so the normal is a primitive integer vector.
    pub fn normalized(&self) -> HalfSpace {
        let k = primitive_scale(self.normal.coords());
        HalfSpace { normal: self.normal.scale(&k), offset: &self.offset * &k }
    }

    /// Canonical form of the bounding hyperplane: primitive integer normal whose first
    /// nonzero entry is positive.
    pub fn hyperplane_key(&self) -> HalfSpace {
        let h = self.normalized();
        match h.normal.coords().iter().find(|c| !c.is_zero()) {
            Some(c) if c.is_negative() => h.flipped(),
            _ => h,
        }
    }

    pub fn translated(&self, t: &RVector) -> HalfSpace {
        HalfSpace { normal: self.normal.clone(), offset: &self.offset + self.normal.dot(t) }
    }
}

impl fmt::Display for HalfSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}·x <= {}", self.normal, self.offset)
    }
}

/// Facet description of a polytope: `equalities` cut out the affine hull (each stored as
/// `a·x <= b` meaning `a·x = b`), `facets` are irredundant within it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HRep {
    pub equalities: Vec<HalfSpace>,
    pub facets: Vec<HalfSpace>,
}

impl HRep {
    /// Every inequality, with each equality expanded into its two halves.
    pub fn inequalities(&self) -> Vec<HalfSpace> {
        let mut out = self.facets.clone();
        for e in &self.equalities {
            out.push(e.clone());
            out.push(e.flipped());
        }
        out
    }
}

/// A convex polytope with exact rational vertices.
///
/// Vertices are the extreme points, sorted lexicographically. The facet description is
/// computed on first use and cached.
#[derive(Clone)]
pub struct Polytope {
    dim: usize,
    vertices: Vec<RVector>,
    affine_dim: usize,
    is_lattice: bool,
    hrep: OnceLock<HRep>,
}

impl PartialEq for Polytope {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim && self.vertices == other.vertices
    }
}

impl Eq for Polytope {}

impl fmt::Debug for Polytope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Polytope")
            .field("dim", &self.dim)
            .field("vertices", &self.vertices.iter().map(|v| v.to_string()).collect::<Vec<_>>())
            .finish()
    }
}

fn check_dims(dim: usize, pts: &[RVector]) -> Result<()> {
    match pts.iter().find(|p| p.dim() != dim) {
        Some(p) => Err(Error::DimensionMismatch(format!("point {p} in ambient dimension {dim}"))),
        None => Ok(()),
    }
}

/// Hyperplane data for an affinely spanning point set: equalities of the hull and all
/// supporting hyperplanes found by exhaustive search over affinely independent subsets.
fn hull_hrep(dim: usize, pts: &[RVector]) -> HRep {
    let refs: Vec<&RVector> = pts.iter().collect();
    let k = affine_dim(&refs).expect("nonempty point set");
    let base = &pts[0];
    let diffs: Vec<Vec<Rational>> = pts[1..].iter().map(|p| (p - base).into_coords()).collect();
    let eq_normals = nullspace(&diffs, dim);
    let equalities: BTreeSet<HalfSpace> = eq_normals
        .iter()
        .map(|n| {
            let n = RVector::new(n.clone());
            let off = n.dot(base);
            HalfSpace { normal: n, offset: off }.hyperplane_key()
        })
        .collect();

    let mut facets = BTreeSet::new();
    if k > 0 {
        for subset in combinations(pts.len(), k) {
            let w0 = &pts[subset[0]];
            let mut rows: Vec<Vec<Rational>> =
                subset[1..].iter().map(|&i| (&pts[i] - w0).into_coords()).collect();
            rows.extend(eq_normals.iter().cloned());
            let ns = nullspace(&rows, dim);
            if ns.len() != 1 {
                continue;
            }
            let normal = RVector::new(ns.into_iter().next().unwrap());
            let offset = normal.dot(w0);
            let (mut pos, mut neg) = (false, false);
            for p in pts {
                let s = normal.dot(p) - &offset;
                pos |= s.is_positive();
                neg |= s.is_negative();
                if pos && neg {
                    break;
                }
            }
            let h = match (pos, neg) {
                (false, _) => HalfSpace { normal, offset },
                (true, false) => HalfSpace { normal: -&normal, offset: -offset },
                (true, true) => continue,
            };
            facets.insert(h.normalized());
        }
    }
    HRep { equalities: equalities.into_iter().collect(), facets: facets.into_iter().collect() }
}

impl Polytope {
    /// Convex hull of a finite point set, reduced to its extreme points.
    pub fn from_points(dim: usize, points: Vec<RVector>) -> Result<Polytope> {
        check_dims(dim, &points)?;
        let pts: Vec<RVector> = points.into_iter().collect::<BTreeSet<_>>().into_iter().collect();
        if pts.is_empty() {
            return Err(Error::DegenerateInput("empty point set".into()));
        }
        let hrep = hull_hrep(dim, &pts);
        let vertices: Vec<RVector> = pts
            .iter()
            .filter(|p| {
                let mut rows: Vec<Vec<Rational>> =
                    hrep.equalities.iter().map(|e| e.normal.coords().to_vec()).collect();
                rows.extend(
                    hrep.facets.iter().filter(|f| f.slack(p).is_zero()).map(|f| f.normal.coords().to_vec()),
                );
                rank(&rows, dim) == dim
            })
            .cloned()
            .collect();
        let p = Self::from_extreme_points(dim, vertices);
        let _ = p.hrep.set(hrep);
        Ok(p)
    }

    /// Wraps points already known to be exactly the extreme points of their hull.
    pub(crate) fn from_extreme_points(dim: usize, mut vertices: Vec<RVector>) -> Polytope {
        vertices.sort();
        vertices.dedup();
        let affine_dim = affine_dim(&vertices.iter().collect::<Vec<_>>()).unwrap_or(0);
        let is_lattice = vertices.iter().all(RVector::is_integral);
        Polytope { dim, vertices, affine_dim, is_lattice, hrep: OnceLock::new() }
    }

    pub fn from_int_vertices(rows: &[Vec<i64>]) -> Result<Polytope> {
        let dim = rows.first().map_or(0, Vec::len);
        Self::from_points(dim, rows.iter().map(|r| RVector::from_ints(r)).collect())
    }

    /// Vertex enumeration of a bounded halfspace system by exhaustive `d`-subset solves.
    pub fn from_halfspaces(halfspaces: &[HalfSpace], dim: usize) -> Result<Polytope> {
        let mut hs = halfspaces.to_vec();
        if hs.iter().any(|h| h.normal.dim() != dim) {
            return Err(Error::DimensionMismatch("halfspace normal dimension".into()));
        }
        let normals: Vec<Vec<Rational>> = hs.iter().map(|h| h.normal.coords().to_vec()).collect();
        let full_rank = rank(&normals, dim) == dim;
        if !full_rank {
            // Pin the lineality space so a feasible point, if any, becomes a vertex.
            for n in nullspace(&normals, dim) {
                let h = HalfSpace { normal: RVector::new(n), offset: Rational::zero() };
                hs.push(h.flipped());
                hs.push(h);
            }
            return if enumerate_vertices(&hs, dim).is_empty() {
                Err(Error::Infeasible)
            } else {
                Err(Error::Unbounded)
            };
        }
        let vertices = enumerate_vertices(&hs, dim);
        if vertices.is_empty() {
            return Err(Error::Infeasible);
        }
        if has_extreme_ray(&normals, dim) {
            return Err(Error::Unbounded);
        }
        Ok(Self::from_extreme_points(dim, vertices))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertices(&self) -> &[RVector] {
        &self.vertices
    }

    pub fn affine_dim(&self) -> usize {
        self.affine_dim
    }

    pub fn is_full_dim(&self) -> bool {
        self.affine_dim == self.dim
    }

    pub fn is_lattice(&self) -> bool {
        self.is_lattice
    }

    pub fn hrep(&self) -> &HRep {
        self.hrep.get_or_init(|| hull_hrep(self.dim, &self.vertices))
    }

    pub fn facets(&self) -> &[HalfSpace] {
        &self.hrep().facets
    }

    pub fn contains(&self, p: &RVector) -> bool {
        let h = self.hrep();
        h.facets.iter().all(|f| f.contains(p)) && h.equalities.iter().all(|e| e.slack(p).is_zero())
    }

    pub(crate) fn to_cell(&self) -> (Cell, Vec<HalfSpace>) {
        let table = self.hrep().inequalities();
        let tight = self
            .vertices
            .iter()
            .map(|v| {
                let mut bits = Bits::default();
                for (i, h) in table.iter().enumerate() {
                    if h.slack(v).is_zero() {
                        bits.insert(i);
                    }
                }
                bits
            })
            .collect();
        (Cell::new(self.dim, self.vertices.clone(), tight), table)
    }

    fn from_cell(cell: Cell) -> Polytope {
        Self::from_extreme_points(cell.dim, cell.vertices)
    }

    /// `self ∩ {x : h}`; `None` when empty.
    pub fn clip(&self, h: &HalfSpace) -> Option<Polytope> {
        let (cell, table) = self.to_cell();
        match cell.clip(h.normal.coords(), &h.offset, table.len()) {
            Clip::Unchanged => Some(self.clone()),
            Clip::Empty => None,
            Clip::Cut(c) => Some(Self::from_cell(c)),
        }
    }

    pub(crate) fn intersect_cell(&self, other: &Polytope) -> Option<Cell> {
        let (mut cell, table) = self.to_cell();
        for (i, h) in other.hrep().inequalities().iter().enumerate() {
            match cell.clip(h.normal.coords(), &h.offset, table.len() + i) {
                Clip::Unchanged => {}
                Clip::Empty => return None,
                Clip::Cut(c) => cell = c,
            }
        }
        Some(cell)
    }

    /// Exact intersection; `None` when empty. Lower-dimensional results are kept.
    pub fn intersect(&self, other: &Polytope) -> Result<Option<Polytope>> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch("intersect".into()));
        }
        Ok(self.intersect_cell(other).map(Self::from_cell))
    }

    /// Volume of `self ∩ other` without materializing the intersection as a polytope.
    pub fn intersection_volume(&self, other: &Polytope) -> Rational {
        if !(self.is_full_dim() && other.is_full_dim()) || !boxes_overlap(self, other) {
            return Rational::zero();
        }
        self.intersect_cell(other).map_or_else(Rational::zero, |c| c.volume())
    }

    /// Exact `d`-volume; zero for lower-dimensional polytopes.
    pub fn volume(&self) -> Rational {
        if !self.is_full_dim() {
            return Rational::zero();
        }
        self.to_cell().0.volume()
    }

    /// Triangulation into full-dimensional simplices, fanning each face from its
    /// lexicographically smallest vertex.
    pub fn triangulate(&self) -> Vec<Vec<RVector>> {
        if !self.is_full_dim() {
            return Vec::new();
        }
        let (cell, _) = self.to_cell();
        cell.simplices()
            .into_iter()
            .map(|s| s.into_iter().map(|i| cell.vertices[i].clone()).collect())
            .collect()
    }

    pub fn minkowski_sum(&self, other: &Polytope) -> Result<Polytope> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch("minkowski sum".into()));
        }
        let pts = self
            .vertices
            .iter()
            .flat_map(|a| other.vertices.iter().map(move |b| a + b))
            .collect();
        Self::from_points(self.dim, pts)
    }

    /// Image under `x ↦ m·x + t` for invertible `m`.
    pub fn affine_image(&self, m: &RMatrix, t: &RVector) -> Result<Polytope> {
        if m.size() != self.dim || t.dim() != self.dim {
            return Err(Error::DimensionMismatch("affine map".into()));
        }
        let inv_t = m.inverse()?.transpose();
        let vertices = self.vertices.iter().map(|v| &m.apply(v) + t).collect();
        let p = Self::from_extreme_points(self.dim, vertices);
        if let Some(h) = self.hrep.get() {
            let map = |hs: &HalfSpace| {
                let normal = inv_t.apply(&hs.normal);
                let offset = &hs.offset + normal.dot(t);
                HalfSpace { normal, offset }
            };
            let mut facets: Vec<HalfSpace> = h.facets.iter().map(|f| map(f).normalized()).collect();
            let mut equalities: Vec<HalfSpace> = h.equalities.iter().map(|e| map(e).hyperplane_key()).collect();
            facets.sort();
            equalities.sort();
            let _ = p.hrep.set(HRep { equalities, facets });
        }
        Ok(p)
    }

    pub fn translate(&self, t: &RVector) -> Polytope {
        let vertices = self.vertices.iter().map(|v| v + t).collect();
        let p = Self::from_extreme_points(self.dim, vertices);
        if let Some(h) = self.hrep.get() {
            let _ = p.hrep.set(HRep {
                equalities: h.equalities.iter().map(|e| e.translated(t).hyperplane_key()).collect(),
                facets: h.facets.iter().map(|f| f.translated(t)).collect(),
            });
        }
        p
    }

    pub fn negate(&self) -> Polytope {
        self.affine_image(&RMatrix::scalar(self.dim, -Rational::from_integer(1.into())), &RVector::zeros(self.dim))
            .expect("negation is invertible")
    }

    /// The dilation `k·P` about the origin.
    pub fn scale(&self, k: i64) -> Result<Polytope> {
        self.affine_image(&RMatrix::scalar(self.dim, super::linalg::int(k)), &RVector::zeros(self.dim))
    }

    /// Embeds into one dimension higher with last coordinate zero.
    pub fn embed(&self) -> Polytope {
        Self::from_extreme_points(
            self.dim + 1,
            self.vertices.iter().map(|v| v.extended(Rational::zero())).collect(),
        )
    }

    pub fn bounding_box(&self) -> (RVector, RVector) {
        let lo = (0..self.dim)
            .map(|j| self.vertices.iter().map(|v| v[j].clone()).min().unwrap())
            .collect();
        let hi = (0..self.dim)
            .map(|j| self.vertices.iter().map(|v| v[j].clone()).max().unwrap())
            .collect();
        (RVector::new(lo), RVector::new(hi))
    }

    /// Whether the point reflection through `center` maps the polytope onto itself.
    pub fn is_centrally_symmetric_about(&self, center: &RVector) -> bool {
        let twice = center.scale(&super::linalg::int(2));
        let mut reflected: Vec<RVector> = self.vertices.iter().map(|v| &twice - v).collect();
        reflected.sort();
        reflected == self.vertices
    }
}

fn boxes_overlap(a: &Polytope, b: &Polytope) -> bool {
    let (alo, ahi) = a.bounding_box();
    let (blo, bhi) = b.bounding_box();
    (0..a.dim).all(|j| alo[j] < bhi[j] && blo[j] < ahi[j])
}

fn enumerate_vertices(hs: &[HalfSpace], dim: usize) -> Vec<RVector> {
    let mut found = BTreeSet::new();
    for subset in combinations(hs.len(), dim) {
        let a: Vec<Vec<Rational>> = subset.iter().map(|&i| hs[i].normal.coords().to_vec()).collect();
        let b: Vec<Rational> = subset.iter().map(|&i| hs[i].offset.clone()).collect();
        if let Some(x) = solve(&a, &b) {
            let x = RVector::new(x);
            if hs.iter().all(|h| h.contains(&x)) {
                found.insert(x);
            }
        }
    }
    found.into_iter().collect()
}

/// Whether the cone `{y : normals · y <= 0}` (pointed) has an extreme ray.
fn has_extreme_ray(normals: &[Vec<Rational>], dim: usize) -> bool {
    combinations(normals.len(), dim - 1).any(|subset| {
        let rows: Vec<Vec<Rational>> = subset.iter().map(|&i| normals[i].clone()).collect();
        let ns = nullspace(&rows, dim);
        if ns.len() != 1 {
            return false;
        }
        let r = &ns[0];
        let signs: Vec<Rational> = normals.iter().map(|n| dot(n, r)).collect();
        signs.iter().all(|s| !s.is_positive()) || signs.iter().all(|s| !s.is_negative())
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::linalg::{frac, int};

    fn pts(rows: &[&[i64]]) -> Vec<RVector> {
        rows.iter().map(|r| RVector::from_ints(r)).collect()
    }

    fn simplex3() -> Polytope {
        Polytope::from_int_vertices(&[vec![0, 0, 0], vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]).unwrap()
    }

    #[test]
    fn square_facets() {
        let sq = Polytope::from_int_vertices(&[vec![0, 0], vec![1, 0], vec![0, 1], vec![1, 1]]).unwrap();
        let f: BTreeSet<String> = sq.facets().iter().map(|h| h.to_string()).collect();
        let want: BTreeSet<String> =
            ["(-1, 0)·x <= 0", "(0, -1)·x <= 0", "(1, 0)·x <= 1", "(0, 1)·x <= 1"].iter().map(|s| s.to_string()).collect();
        assert_eq!(f, want);
    }

    #[test]
    fn simplex_facets_and_volume() {
        let s = simplex3();
        assert_eq!(s.facets().len(), 4);
        assert!(s.facets().contains(&HalfSpace::from_ints(&[1, 1, 1], int(1))));
        for j in 0..3 {
            let mut c = [0; 3];
            c[j] = -1;
            assert!(s.facets().contains(&HalfSpace::from_ints(&c, int(0))));
        }
        assert_eq!(s.volume(), frac(1, 6));
    }

    #[test]
    fn reeve_facets_each_tight_at_three_vertices() {
        let t = Polytope::from_int_vertices(&[vec![0, 0, 0], vec![0, 1, 0], vec![1, 0, 0], vec![1, 1, 2]]).unwrap();
        assert_eq!(t.facets().len(), 4);
        for f in t.facets() {
            assert_eq!(t.vertices().iter().filter(|v| f.slack(v).is_zero()).count(), 3);
        }
        assert_eq!(t.volume(), frac(2, 6));
    }

    #[test]
    fn interior_points_are_dropped() {
        let p = Polytope::from_points(2, pts(&[&[0, 0], &[2, 0], &[0, 2], &[1, 1], &[1, 0], &[0, 1], &[1, 0]])).unwrap();
        assert_eq!(p.vertices(), pts(&[&[0, 0], &[0, 2], &[2, 0]]).as_slice());
    }

    #[test]
    fn box_from_halfspaces() {
        for d in 1..=4 {
            let mut hs = Vec::new();
            for j in 0..d {
                let mut c = vec![0; d];
                c[j] = 1;
                hs.push(HalfSpace::from_ints(&c, int(1)));
                c[j] = -1;
                hs.push(HalfSpace::from_ints(&c, int(0)));
            }
            let p = Polytope::from_halfspaces(&hs, d).unwrap();
            assert_eq!(p.vertices().len(), 1 << d);
        }
    }

    #[test]
    fn middle_slab_of_cube() {
        let mut hs = Vec::new();
        for j in 0..3 {
            let mut c = vec![0; 3];
            c[j] = 1;
            hs.push(HalfSpace::from_ints(&c, int(1)));
            c[j] = -1;
            hs.push(HalfSpace::from_ints(&c, int(0)));
        }
        hs.push(HalfSpace::from_ints(&[1, 1, 1], int(2)));
        hs.push(HalfSpace::from_ints(&[-1, -1, -1], int(-1)));
        let p = Polytope::from_halfspaces(&hs, 3).unwrap();
        let want: Vec<RVector> = {
            let mut v = pts(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1], &[1, 1, 0], &[1, 0, 1], &[0, 1, 1]]);
            v.sort();
            v
        };
        assert_eq!(p.vertices(), want.as_slice());
    }

    #[test]
    fn shifted_triangle_intersection_via_halfspaces() {
        let tri = Polytope::from_int_vertices(&[vec![0, 0], vec![1, 0], vec![0, 1]]).unwrap();
        let shifted = tri.translate(&RVector::new(vec![frac(1, 2), int(0)]));
        let mut hs = tri.facets().to_vec();
        hs.extend(shifted.facets().iter().cloned());
        let p = Polytope::from_halfspaces(&hs, 2).unwrap();
        assert_eq!(p.volume(), frac(1, 8));
        assert_eq!(tri.intersect(&shifted).unwrap().unwrap(), p);
    }

    #[test]
    fn unbounded_and_infeasible_systems() {
        let quadrant = [HalfSpace::from_ints(&[-1, 0], int(0)), HalfSpace::from_ints(&[0, -1], int(0))];
        assert!(matches!(Polytope::from_halfspaces(&quadrant, 2), Err(Error::Unbounded)));
        let strip = [HalfSpace::from_ints(&[1, 0], int(1)), HalfSpace::from_ints(&[-1, 0], int(0))];
        assert!(matches!(Polytope::from_halfspaces(&strip, 2), Err(Error::Unbounded)));
        let empty = [HalfSpace::from_ints(&[1, 0], int(0)), HalfSpace::from_ints(&[-1, 0], int(-1))];
        assert!(matches!(Polytope::from_halfspaces(&empty, 2), Err(Error::Infeasible)));
        let mut hs = quadrant.to_vec();
        hs.push(HalfSpace::from_ints(&[1, 1], int(-1)));
        assert!(matches!(Polytope::from_halfspaces(&hs, 2), Err(Error::Infeasible)));
    }

    #[test]
    fn clip_examples() {
        let cube = Polytope::from_points(3, (0..8).map(|m| RVector::from_ints(&[m >> 2 & 1, m >> 1 & 1, m & 1])).collect()).unwrap();
        assert_eq!(cube.clip(&HalfSpace::from_ints(&[1, 0, 0], int(1))).unwrap(), cube);
        assert_eq!(cube.clip(&HalfSpace::from_ints(&[1, 1, 1], int(1))).unwrap(), simplex3());
        let tri = Polytope::from_int_vertices(&[vec![0, 0], vec![1, 0], vec![0, 1]]).unwrap();
        assert!(tri.clip(&HalfSpace::from_ints(&[-1, 0], int(-2))).is_none());
    }

    #[test]
    fn hexagon_minkowski_sum() {
        let seg = |x, y| Polytope::from_int_vertices(&[vec![0, 0], vec![x, y]]).unwrap();
        let hex = seg(1, 0).minkowski_sum(&seg(0, 1)).unwrap().minkowski_sum(&seg(1, 1)).unwrap();
        let mut want = pts(&[&[0, 0], &[1, 0], &[2, 1], &[2, 2], &[1, 2], &[0, 1]]);
        want.sort();
        assert_eq!(hex.vertices(), want.as_slice());
        assert_eq!(hex.volume(), int(3));
        assert_eq!(hex.bounding_box(), (RVector::from_ints(&[0, 0]), RVector::from_ints(&[2, 2])));
    }

    #[test]
    fn affine_image_of_standard_simplex() {
        let tri = Polytope::from_int_vertices(&[vec![0, 0], vec![1, 0], vec![0, 1]]).unwrap();
        let neg = tri.negate();
        let mut want = pts(&[&[0, 0], &[-1, 0], &[0, -1]]);
        want.sort();
        assert_eq!(neg.vertices(), want.as_slice());
        let v0 = RVector::from_ints(&[2, 1]);
        let m = RMatrix::from_columns(&[RVector::from_ints(&[1, 3]), RVector::from_ints(&[-2, 1])]).unwrap();
        let img = tri.affine_image(&m, &v0).unwrap();
        let mut want = pts(&[&[2, 1], &[3, 4], &[0, 2]]);
        want.sort();
        assert_eq!(img.vertices(), want.as_slice());
        assert_eq!(img.volume(), frac(7, 2));
        assert!(matches!(
            tri.affine_image(&RMatrix::from_int_rows(&[vec![1, 1], vec![1, 1]]).unwrap(), &v0),
            Err(Error::SingularMatrix)
        ));
    }

    #[test]
    fn carried_hrep_matches_recomputed() {
        let t = Polytope::from_int_vertices(&[vec![0, 0, 0], vec![0, 1, 0], vec![1, 0, 0], vec![1, 1, 3]]).unwrap();
        let _ = t.facets();
        let m = RMatrix::from_int_rows(&[vec![1, 2, 0], vec![0, 1, 0], vec![1, 1, 1]]).unwrap();
        let img = t.affine_image(&m, &RVector::from_ints(&[1, -2, 5])).unwrap();
        let fresh = Polytope::from_extreme_points(3, img.vertices().to_vec());
        assert_eq!(img.hrep(), fresh.hrep());
        let moved = t.translate(&RVector::from_ints(&[3, 0, -1]));
        let fresh = Polytope::from_extreme_points(3, moved.vertices().to_vec());
        assert_eq!(moved.hrep(), fresh.hrep());
    }

    #[test]
    fn lower_dimensional_hrep() {
        let seg = Polytope::from_int_vertices(&[vec![0, 0, 0], vec![0, 0, 1]]).unwrap();
        assert!(!seg.is_full_dim());
        assert_eq!(seg.hrep().equalities.len(), 2);
        assert_eq!(seg.facets().len(), 2);
        assert_eq!(seg.volume(), int(0));
        assert!(seg.contains(&RVector::new(vec![int(0), int(0), frac(1, 2)])));
        assert!(!seg.contains(&RVector::new(vec![frac(1, 3), int(0), frac(1, 2)])));
    }

    #[test]
    fn touching_translates_meet_in_zero_volume() {
        let t2 = Polytope::from_int_vertices(&[vec![0, 0, 0], vec![0, 1, 0], vec![1, 0, 0], vec![1, 1, 2]]).unwrap();
        let up = t2.translate(&RVector::from_ints(&[0, 0, 1]));
        let meet = t2.intersect(&up).unwrap();
        assert_eq!(meet.map_or(int(0), |p| p.volume()), int(0));
        assert_eq!(t2.intersection_volume(&up), int(0));
        assert_eq!(t2.intersect(&t2).unwrap().unwrap(), t2);
    }
}
