//! Exact moments of count variables.
//!
//! The mixed second moment is a lattice sum of intersection volumes:
//! `E[X_P X_Q] = Σ_{t ∈ Z^d} vol(P ∩ (Q + t))`, so
//! `cov(X_P, X_Q) = Σ_t vol(P ∩ (Q + t)) − vol(P)·vol(Q)`.

use num_traits::Zero;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geometry::{Body, Polytope, RVector, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MomentReport {
    pub mean: Rational,
    pub variance: Rational,
    pub covariance: Option<Rational>,
}

fn require_full_dim<B: Body + ?Sized>(body: &B) -> Result<()> {
    if body.parts().iter().any(|p| !p.is_full_dim()) {
        return Err(Error::DegenerateInput(
            "body is not full-dimensional (its count is 0 almost surely)".into(),
        ));
    }
    Ok(())
}

/// `E X_P`, which equals the volume.
pub fn exact_mean<B: Body + ?Sized>(body: &B) -> Result<Rational> {
    require_full_dim(body)?;
    Ok(body.parts().iter().map(Polytope::volume).sum())
}

/// Integer translations `t` for which `p ∩ (q + t)` can have positive volume.
fn translation_range(p: &Polytope, q: &Polytope) -> Vec<RVector> {
    let (plo, phi) = p.bounding_box();
    let (qlo, qhi) = q.bounding_box();
    let d = p.dim();
    let lo: Vec<i64> = (0..d).map(|j| num_traits::ToPrimitive::to_i64(&(&plo[j] - &qhi[j]).floor().to_integer()).unwrap()).collect();
    let hi: Vec<i64> = (0..d).map(|j| num_traits::ToPrimitive::to_i64(&(&phi[j] - &qlo[j]).ceil().to_integer()).unwrap()).collect();
    let mut out = Vec::new();
    let mut t = lo.clone();
    loop {
        out.push(RVector::from_ints(&t));
        let mut j = d;
        loop {
            if j == 0 {
                return out;
            }
            j -= 1;
            if t[j] < hi[j] {
                t[j] += 1;
                for k in j + 1..d {
                    t[k] = lo[k];
                }
                break;
            }
        }
    }
}

/// `Σ_{t ∈ Z^d} vol(p ∩ (q + t))`.
pub fn lattice_overlap_sum(p: &Polytope, q: &Polytope) -> Rational {
    // populate the facet cache once so translates inherit it
    let _ = q.hrep();
    let _ = p.hrep();
    translation_range(p, q)
        .par_iter()
        .map(|t| p.intersection_volume(&q.translate(t)))
        .reduce(Rational::zero, |a, b| a + b)
}

/// `cov(X_P, X_Q)`; bilinear over the parts of each body.
pub fn exact_covariance<B: Body + ?Sized, C: Body + ?Sized>(p: &B, q: &C) -> Result<Rational> {
    require_full_dim(p)?;
    require_full_dim(q)?;
    if p.ambient_dim() != q.ambient_dim() {
        return Err(Error::DimensionMismatch("covariance of bodies in different dimensions".into()));
    }
    let mut total = Rational::zero();
    for a in p.parts() {
        for b in q.parts() {
            total += lattice_overlap_sum(a, b) - a.volume() * b.volume();
        }
    }
    Ok(total)
}

pub fn exact_variance<B: Body + ?Sized>(p: &B) -> Result<MomentReport> {
    Ok(MomentReport { mean: exact_mean(p)?, variance: exact_covariance(p, p)?, covariance: None })
}

/// Mean and variance of both bodies plus their covariance.
pub fn exact_pair_moments<B: Body + ?Sized>(p: &B, q: &B) -> Result<(MomentReport, MomentReport)> {
    let cov = exact_covariance(p, q)?;
    let mut a = exact_variance(p)?;
    let mut b = exact_variance(q)?;
    a.covariance = Some(cov.clone());
    b.covariance = Some(cov);
    Ok((a, b))
}
