//! Exact rational polytope calculus.

pub(crate) mod cell;
pub mod io;
pub mod linalg;
mod polytope;

pub use linalg::{determinant, format_rational, parse_rational, RMatrix, RVector, Rational};
pub use polytope::{HRep, HalfSpace, Polytope};

/// Disjoint union of polytopes, counted part by part.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolytopeUnion {
    pub parts: Vec<Polytope>,
    pub label: String,
}

impl PolytopeUnion {
    pub fn new(parts: Vec<Polytope>, label: impl Into<String>) -> Self {
        PolytopeUnion { parts, label: label.into() }
    }

    pub fn volume(&self) -> Rational {
        self.parts.iter().map(Polytope::volume).sum()
    }

    pub fn translate(&self, t: &RVector) -> PolytopeUnion {
        PolytopeUnion { parts: self.parts.iter().map(|p| p.translate(t)).collect(), label: self.label.clone() }
    }

    pub fn negate(&self) -> PolytopeUnion {
        PolytopeUnion { parts: self.parts.iter().map(Polytope::negate).collect(), label: format!("-{}", self.label) }
    }
}

/// Anything whose lattice count is a sum over convex parts.
pub trait Body: Sync {
    fn parts(&self) -> &[Polytope];

    fn ambient_dim(&self) -> usize {
        self.parts().first().map_or(0, Polytope::dim)
    }
}

impl Body for Polytope {
    fn parts(&self) -> &[Polytope] {
        std::slice::from_ref(self)
    }
}

impl Body for PolytopeUnion {
    fn parts(&self) -> &[Polytope] {
        &self.parts
    }
}
