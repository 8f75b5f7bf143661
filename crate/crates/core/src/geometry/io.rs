//! JSON form of polytopes: `{"dim": d, "vertices": [["p/q" | "k", ...], ...]}`.

use serde::{Deserialize, Serialize};

use super::linalg::{format_rational, parse_rational, RVector, Rational};
use super::Polytope;
use crate::error::{Error, Result};

/// A coordinate as written in JSON; bare integers are accepted alongside strings.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Coord {
    Text(String),
    Int(i64),
}

impl Coord {
    fn to_rational(&self) -> Result<Rational> {
        match self {
            Coord::Text(s) => parse_rational(s),
            Coord::Int(k) => Ok(Rational::from_integer((*k).into())),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PolytopeJson {
    pub dim: usize,
    pub vertices: Vec<Vec<Coord>>,
}

impl PolytopeJson {
    pub fn from_polytope(p: &Polytope) -> Self {
        PolytopeJson {
            dim: p.dim(),
            vertices: p
                .vertices()
                .iter()
                .map(|v| v.coords().iter().map(|c| Coord::Text(format_rational(c))).collect())
                .collect(),
        }
    }

    pub fn to_polytope(&self) -> Result<Polytope> {
        let pts = self
            .vertices
            .iter()
            .map(|row| {
                if row.len() != self.dim {
                    return Err(Error::DimensionMismatch(format!(
                        "vertex with {} coordinates in dimension {}",
                        row.len(),
                        self.dim
                    )));
                }
                row.iter().map(Coord::to_rational).collect::<Result<Vec<_>>>().map(RVector::new)
            })
            .collect::<Result<Vec<_>>>()?;
        Polytope::from_points(self.dim, pts)
    }
}

pub fn polytope_from_json(text: &str) -> Result<Polytope> {
    serde_json::from_str::<PolytopeJson>(text)?.to_polytope()
}

pub fn polytope_to_json(p: &Polytope) -> String {
    serde_json::to_string(&PolytopeJson::from_polytope(p)).expect("serializable")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::linalg::frac;

    #[test]
    fn parses_unit_square() {
        let p = polytope_from_json(r#"{"dim": 2, "vertices": [["0","0"],["1","0"],["0","1"],["1","1"]]}"#).unwrap();
        assert_eq!(p.volume(), frac(1, 1));
        assert!(p.is_lattice());
    }

    #[test]
    fn rational_coordinates_round_trip() {
        let p = polytope_from_json(r#"{"dim": 2, "vertices": [["1/2", 0], ["3", "-2/4"], [0, "5"]]}"#).unwrap();
        assert!(!p.is_lattice());
        assert_eq!(polytope_from_json(&polytope_to_json(&p)).unwrap(), p);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(polytope_from_json(r#"{"dim": 2, "vertices": [["1/0","0"]]}"#).is_err());
        assert!(polytope_from_json(r#"{"dim": 2, "vertices": [["1","0","2"]]}"#).is_err());
        assert!(polytope_from_json(r#"{"dim": 2}"#).is_err());
    }
}
