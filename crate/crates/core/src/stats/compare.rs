use std::collections::{BTreeMap, BTreeSet};

use num_traits::ToPrimitive;
use serde::Serialize;
use statrs::distribution::{ChiSquared, ContinuousCDF};

use super::distribution::CountDistribution;
use crate::error::{Error, Result};

/// Outcome of comparing two count laws. Exact pairs report `equal`; anything involving
/// samples reports a chi-square statistic.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ComparisonReport {
    pub method: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub equal: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub chi2: Option<f64>,
    #[serde(rename = "pValue", skip_serializing_if = "Option::is_none")]
    pub p_value: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dof: Option<usize>,
}

impl ComparisonReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("serializable")
    }
}

const MIN_EXPECTED: f64 = 5.0;

fn survival(chi2: f64, dof: usize) -> f64 {
    if dof == 0 {
        return if chi2 == 0.0 { 1.0 } else { 0.0 };
    }
    if chi2.is_infinite() {
        return 0.0;
    }
    ChiSquared::new(dof as f64).expect("positive degrees of freedom").sf(chi2)
}

fn goodness_of_fit(exact: &BTreeMap<u64, num_rational::BigRational>, counts: &BTreeMap<u64, u64>, n: u64) -> Result<ComparisonReport> {
    let n = n as f64;
    let mut chi2 = 0.0;
    for (k, p) in exact {
        let expected = p.to_f64().unwrap() * n;
        if expected < MIN_EXPECTED {
            return Err(Error::InsufficientSamples(format!("expected count {expected:.2} for value {k}")));
        }
        let observed = *counts.get(k).unwrap_or(&0) as f64;
        chi2 += (observed - expected).powi(2) / expected;
    }
    // tail bucket: values the exact law says are impossible
    let tail: u64 = counts.iter().filter(|(k, _)| !exact.contains_key(k)).map(|(_, c)| c).sum();
    if tail > 0 {
        chi2 = f64::INFINITY;
    }
    let dof = exact.len().saturating_sub(1);
    Ok(ComparisonReport {
        method: "chi-square-goodness-of-fit".into(),
        equal: None,
        chi2: Some(chi2),
        p_value: Some(survival(chi2, dof)),
        dof: Some(dof),
    })
}

fn two_sample(a: &BTreeMap<u64, u64>, b: &BTreeMap<u64, u64>) -> Result<ComparisonReport> {
    let na: u64 = a.values().sum();
    let nb: u64 = b.values().sum();
    let total = (na + nb) as f64;
    let keys: BTreeSet<u64> = a.keys().chain(b.keys()).copied().collect();
    let mut chi2 = 0.0;
    for k in &keys {
        let oa = *a.get(k).unwrap_or(&0) as f64;
        let ob = *b.get(k).unwrap_or(&0) as f64;
        let col = oa + ob;
        for (obs, row) in [(oa, na as f64), (ob, nb as f64)] {
            let expected = row * col / total;
            if expected < MIN_EXPECTED {
                return Err(Error::InsufficientSamples(format!("expected count {expected:.2} for value {k}")));
            }
            chi2 += (obs - expected).powi(2) / expected;
        }
    }
    let dof = keys.len().saturating_sub(1);
    Ok(ComparisonReport {
        method: "chi-square-two-sample".into(),
        equal: None,
        chi2: Some(chi2),
        p_value: Some(survival(chi2, dof)),
        dof: Some(dof),
    })
}

pub fn compare_distributions(a: &CountDistribution, b: &CountDistribution) -> Result<ComparisonReport> {
    use CountDistribution::*;
    match (a, b) {
        (Exact(x), Exact(y)) => Ok(ComparisonReport {
            method: "exact".into(),
            equal: Some(x == y),
            chi2: None,
            p_value: None,
            dof: None,
        }),
        (Exact(x), Empirical { counts, samples, .. }) | (Empirical { counts, samples, .. }, Exact(x)) => {
            goodness_of_fit(x, counts, *samples)
        }
        (Empirical { counts: x, .. }, Empirical { counts: y, .. }) => two_sample(x, y),
    }
}
