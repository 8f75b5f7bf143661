//! Variance of the Reeve tetrahedron count, computed three independent ways.
//!
//! Slicing `T_n` at the integer heights `x₃ = k` splits the count into layer indicators
//! `I_k` (the point `(1,1,k)` is captured). For a vertical shift offset `w` the section at
//! height `k` is a right triangle, so `E I_k` and `E I_k I_l` reduce to one-dimensional
//! integrals in `w`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::Zero;
use serde_json::{json, Value};

use crate::constructions::{reeve_tetrahedron, ReeveParams};
use crate::error::{Error, Result};
use crate::geometry::format_rational;
use crate::geometry::linalg::{frac, int};
use crate::geometry::Rational;
use crate::stats::{exact_distribution, exact_variance, DEFAULT_CELL_BUDGET};

fn cube(x: i64) -> BigInt {
    BigInt::from(x).pow(3)
}

fn over_6n2(num: BigInt, n: i64) -> Rational {
    Rational::new(num, BigInt::from(6 * n * n))
}

/// `E I_k = ∫₀¹ (n−k+w)²/(2n²) dw`.
pub fn reeve_layer_mean(n: i64, k: i64) -> Result<Rational> {
    if n < 1 || k < 1 || k > n {
        return Err(Error::OutOfRange(format!("layer mean needs 1 <= k <= n, got n={n}, k={k}")));
    }
    Ok(over_6n2(cube(n - k + 1) - cube(n - k), n))
}

/// `E I_k I_l` for `k < l`: zero once `2l > k + n`, else `((c+1)³ − c³)/(6n²)` with
/// `c = k + n − 2l`.
pub fn reeve_pair_expectation(n: i64, k: i64, l: i64) -> Result<Rational> {
    if !(1 <= k && k < l && l <= n) {
        return Err(Error::OutOfRange(format!("pair expectation needs 1 <= k < l <= n, got n={n}, k={k}, l={l}")));
    }
    if 2 * l > k + n {
        return Ok(Rational::zero());
    }
    let c = k + n - 2 * l;
    Ok(over_6n2(cube(c + 1) - cube(c), n))
}

/// The closed form `(n³ + 12n − 3)/(72n)` as printed.
pub fn reeve_closed_form(n: i64) -> Rational {
    frac(n * n * n + 12 * n - 3, 72 * n)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Discrepancy {
    pub printed: Rational,
    pub computed: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReeveAudit {
    pub n: i64,
    pub var_closed_form: Rational,
    pub var_layer_oracle: Rational,
    pub var_intersection_engine: Rational,
    pub var_exact_distribution: Option<Rational>,
    pub pair_table: BTreeMap<(i64, i64), Rational>,
    pub mean_table: BTreeMap<i64, Rational>,
    /// Present whenever the printed closed form disagrees with the layer oracle.
    pub discrepancy: Option<Discrepancy>,
}

impl ReeveAudit {
    /// Layer oracle, intersection engine and (when computed) the exact law all agree.
    pub fn oracles_agree(&self) -> bool {
        self.var_layer_oracle == self.var_intersection_engine
            && self.var_exact_distribution.as_ref().is_none_or(|v| v == &self.var_layer_oracle)
    }

    pub fn to_json(&self) -> Value {
        let r = format_rational;
        json!({
            "n": self.n,
            "varClosedFormPrinted": r(&self.var_closed_form),
            "varLayerOracle": r(&self.var_layer_oracle),
            "varIntersectionEngine": r(&self.var_intersection_engine),
            "varExactDistribution": self.var_exact_distribution.as_ref().map(r),
            "oraclesAgree": self.oracles_agree(),
            "closedFormAgrees": self.discrepancy.is_none(),
            "meanTable": self.mean_table.iter().map(|(k, v)| (k.to_string(), Value::from(r(v)))).collect::<serde_json::Map<_, _>>(),
            "pairTable": self.pair_table.iter().map(|((k, l), v)| (format!("{k},{l}"), Value::from(r(v)))).collect::<serde_json::Map<_, _>>(),
            "discrepancy": self.discrepancy.as_ref().map(|d| json!({
                "printed": r(&d.printed),
                "computed": r(&d.computed),
                "difference": r(&(&d.printed - &d.computed)),
            })),
        })
    }
}

/// Tables and variance from the layer decomposition alone:
/// `Var = 2·Σ_{k<l} E I_k I_l + Σ E I_k − (Σ E I_k)²`, using `I_k² = I_k`.
pub fn reeve_layer_oracle(n: i64) -> Result<(Rational, BTreeMap<i64, Rational>, BTreeMap<(i64, i64), Rational>)> {
    let mut means = BTreeMap::new();
    let mut pairs = BTreeMap::new();
    for k in 1..=n {
        means.insert(k, reeve_layer_mean(n, k)?);
        for l in k + 1..=n {
            pairs.insert((k, l), reeve_pair_expectation(n, k, l)?);
        }
    }
    let mean: Rational = means.values().sum();
    let pair_sum: Rational = pairs.values().sum();
    let var = int(2) * pair_sum + &mean - &mean * &mean;
    Ok((var, means, pairs))
}

/// Runs all oracles; the exact law is included when `with_distribution` is set.
pub fn reeve_audit_with(n: i64, with_distribution: bool, cell_budget: usize) -> Result<ReeveAudit> {
    let t = reeve_tetrahedron(ReeveParams::new(n)?);
    let (var_layer_oracle, mean_table, pair_table) = reeve_layer_oracle(n)?;
    let var_intersection_engine = exact_variance(&t)?.variance;
    let var_exact_distribution =
        if with_distribution { Some(exact_distribution(&t, cell_budget)?.variance()) } else { None };
    let var_closed_form = reeve_closed_form(n);
    let discrepancy = (var_closed_form != var_layer_oracle)
        .then(|| Discrepancy { printed: var_closed_form.clone(), computed: var_layer_oracle.clone() });
    Ok(ReeveAudit {
        n,
        var_closed_form,
        var_layer_oracle,
        var_intersection_engine,
        var_exact_distribution,
        pair_table,
        mean_table,
        discrepancy,
    })
}

/// Full audit; the exact-law oracle runs for `n <= 4`.
pub fn reeve_audit(n: i64) -> Result<ReeveAudit> {
    reeve_audit_with(n, n <= 4, DEFAULT_CELL_BUDGET)
}
