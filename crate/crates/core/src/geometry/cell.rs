//! Vertex/halfspace incidence structure used for exact clipping, splitting and triangulation.
//!
//! A [`Cell`] stores the vertices of a convex polytope together with, for each vertex, the set
//! of constraint indices tight at it. The constraint table itself lives with the caller; only
//! indices are tracked here. Adjacency is combinatorial: two vertices span an edge iff no third
//! vertex is tight at every constraint they share.

use std::collections::HashSet;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use super::linalg::{affine_dim, determinant, dot, factorial, RVector, Rational};

/// Small growable bit set over constraint indices.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub(crate) struct Bits(Vec<u64>);

impl Bits {
    pub fn insert(&mut self, i: usize) {
        let w = i / 64;
        if self.0.len() <= w {
            self.0.resize(w + 1, 0);
        }
        self.0[w] |= 1 << (i % 64);
    }

    pub fn contains(&self, i: usize) -> bool {
        self.0.get(i / 64).is_some_and(|w| w & (1 << (i % 64)) != 0)
    }

    pub fn and(&self, other: &Bits) -> Bits {
        Bits(self.0.iter().zip(&other.0).map(|(a, b)| a & b).collect())
    }

    pub fn or_assign(&mut self, other: &Bits) {
        if self.0.len() < other.0.len() {
            self.0.resize(other.0.len(), 0);
        }
        for (a, b) in self.0.iter_mut().zip(&other.0) {
            *a |= b;
        }
    }

    pub fn is_subset(&self, other: &Bits) -> bool {
        self.0
            .iter()
            .enumerate()
            .all(|(i, a)| a & !other.0.get(i).copied().unwrap_or(0) == 0)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().enumerate().flat_map(|(w, &bits)| {
            (0..64).filter(move |b| bits & (1 << b) != 0).map(move |b| w * 64 + b)
        })
    }
}

#[derive(Clone, Debug)]
pub(crate) struct Cell {
    pub dim: usize,
    pub vertices: Vec<RVector>,
    pub approx: Vec<Vec<f64>>,
    pub tight: Vec<Bits>,
}

pub(crate) enum Clip {
    Unchanged,
    Empty,
    Cut(Cell),
}

const APPROX_EPS: f64 = 1e-9;

impl Cell {
    pub fn new(dim: usize, vertices: Vec<RVector>, tight: Vec<Bits>) -> Cell {
        let approx = vertices.iter().map(RVector::to_f64s).collect();
        Cell { dim, vertices, approx, tight }
    }

    /// `[0,1]^d` with constraint `2j` being `x_j >= 0` and `2j + 1` being `x_j <= 1`.
    pub fn unit_cube(d: usize) -> Cell {
        let mut vertices = Vec::with_capacity(1 << d);
        let mut tight = Vec::with_capacity(1 << d);
        for mask in 0..(1usize << d) {
            let mut bits = Bits::default();
            let coords: Vec<i64> = (0..d)
                .map(|j| {
                    let up = (mask >> (d - 1 - j)) & 1;
                    bits.insert(2 * j + up);
                    up as i64
                })
                .collect();
            vertices.push(RVector::from_ints(&coords));
            tight.push(bits);
        }
        Cell::new(d, vertices, tight)
    }

    fn values(&self, normal: &[Rational], offset: &Rational) -> Vec<Rational> {
        self.vertices.iter().map(|v| dot(normal, v.coords()) - offset).collect()
    }

    fn adjacent(&self, u: usize, v: usize) -> bool {
        let common = self.tight[u].and(&self.tight[v]);
        (0..self.vertices.len()).all(|w| w == u || w == v || !common.is_subset(&self.tight[w]))
    }

    fn crossing(&self, u: usize, v: usize, su: &Rational, sv: &Rational, index: usize) -> (RVector, Bits) {
        let lambda = su / (su - sv);
        let p = &self.vertices[u] + &(&self.vertices[v] - &self.vertices[u]).scale(&lambda);
        let mut bits = self.tight[u].and(&self.tight[v]);
        bits.insert(index);
        (p, bits)
    }

    /// Intersects with `normal · x <= offset`, recording `index` as tight on the new boundary.
    pub fn clip(&self, normal: &[Rational], offset: &Rational, index: usize) -> Clip {
        let s = self.values(normal, offset);
        if s.iter().all(|x| !x.is_positive()) {
            return Clip::Unchanged;
        }
        if s.iter().all(|x| x.is_positive()) {
            return Clip::Empty;
        }
        let mut vertices = Vec::new();
        let mut tight = Vec::new();
        for (i, si) in s.iter().enumerate() {
            if !si.is_positive() {
                let mut bits = self.tight[i].clone();
                if si.is_zero() {
                    bits.insert(index);
                }
                vertices.push(self.vertices[i].clone());
                tight.push(bits);
            }
        }
        for u in 0..s.len() {
            if !s[u].is_negative() {
                continue;
            }
            for v in 0..s.len() {
                if s[v].is_positive() && self.adjacent(u, v) {
                    let (p, bits) = self.crossing(u, v, &s[u], &s[v], index);
                    vertices.push(p);
                    tight.push(bits);
                }
            }
        }
        Clip::Cut(Cell::new(self.dim, vertices, tight))
    }

    /// Splits along `normal · x = offset` if the hyperplane meets the interior.
    /// Returns the `<=` side first.
    pub fn split(&self, normal: &[Rational], offset: &Rational, normal_f64: &[f64], offset_f64: f64, index: usize) -> Option<(Cell, Cell)> {
        let (mut neg, mut pos) = (false, false);
        for (i, a) in self.approx.iter().enumerate() {
            let x = a.iter().zip(normal_f64).map(|(p, q)| p * q).sum::<f64>() - offset_f64;
            if x > APPROX_EPS {
                pos = true;
            } else if x < -APPROX_EPS {
                neg = true;
            } else {
                let e = dot(normal, self.vertices[i].coords()) - offset;
                pos |= e.is_positive();
                neg |= e.is_negative();
            }
            if pos && neg {
                break;
            }
        }
        if !(pos && neg) {
            return None;
        }
        let s = self.values(normal, offset);
        let mut below = (Vec::new(), Vec::new());
        let mut above = (Vec::new(), Vec::new());
        for (i, si) in s.iter().enumerate() {
            let mut bits = self.tight[i].clone();
            if si.is_zero() {
                bits.insert(index);
            }
            if !si.is_positive() {
                below.0.push(self.vertices[i].clone());
                below.1.push(bits.clone());
            }
            if !si.is_negative() {
                above.0.push(self.vertices[i].clone());
                above.1.push(bits);
            }
        }
        for u in 0..s.len() {
            if !s[u].is_negative() {
                continue;
            }
            for v in 0..s.len() {
                if s[v].is_positive() && self.adjacent(u, v) {
                    let (p, bits) = self.crossing(u, v, &s[u], &s[v], index);
                    below.0.push(p.clone());
                    below.1.push(bits.clone());
                    above.0.push(p);
                    above.1.push(bits);
                }
            }
        }
        Some((Cell::new(self.dim, below.0, below.1), Cell::new(self.dim, above.0, above.1)))
    }

    pub fn centroid(&self) -> Vec<Rational> {
        let n = Rational::from_integer(BigInt::from(self.vertices.len()));
        (0..self.dim)
            .map(|j| self.vertices.iter().fold(Rational::zero(), |acc, v| acc + &v[j]) / &n)
            .collect()
    }

    pub fn affine_dim(&self) -> Option<usize> {
        affine_dim(&self.vertices.iter().collect::<Vec<_>>())
    }

    /// Triangulation into full-dimensional simplices (as vertex index lists), coning every
    /// face from its lowest-index vertex. Empty when the cell is not full-dimensional.
    pub fn simplices(&self) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        if self.affine_dim() != Some(self.dim) {
            return out;
        }
        let face: Vec<usize> = (0..self.vertices.len()).collect();
        self.triangulate(&face, self.dim, &mut Vec::new(), &mut out);
        out
    }

    fn triangulate(&self, face: &[usize], k: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        let apex = face[0];
        if k == 0 {
            let mut s = prefix.clone();
            s.push(apex);
            out.push(s);
            return;
        }
        if face.len() == k + 1 {
            let mut s = prefix.clone();
            s.extend_from_slice(face);
            out.push(s);
            return;
        }
        let mut constraints = Bits::default();
        for &v in face {
            constraints.or_assign(&self.tight[v]);
        }
        let mut seen = HashSet::new();
        prefix.push(apex);
        for h in constraints.iter() {
            if self.tight[apex].contains(h) {
                continue;
            }
            let sub: Vec<usize> = face.iter().copied().filter(|&v| self.tight[v].contains(h)).collect();
            if sub.len() < k || seen.contains(&sub) {
                continue;
            }
            let pts: Vec<&RVector> = sub.iter().map(|&v| &self.vertices[v]).collect();
            if affine_dim(&pts) == Some(k - 1) {
                self.triangulate(&sub, k - 1, prefix, out);
                seen.insert(sub);
            }
        }
        prefix.pop();
    }

    pub fn volume(&self) -> Rational {
        let simplices = self.simplices();
        let total = simplices.iter().fold(Rational::zero(), |acc, s| {
            let base = &self.vertices[s[0]];
            let rows: Vec<Vec<Rational>> =
                s[1..].iter().map(|&i| (&self.vertices[i] - base).into_coords()).collect();
            acc + determinant(&rows).abs()
        });
        total / Rational::from_integer(factorial(self.dim))
    }
}
