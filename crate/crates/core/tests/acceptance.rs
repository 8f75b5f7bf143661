//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.
//!
//! Run with `cargo test -p shiftcount --test acceptance` (add `--release` for speed).

use std::process::ExitCode;
use std::time::Instant;

use num_integer::Integer;
use num_traits::ToPrimitive;

use shiftcount::constructions::{
    central_slab, cross_polytope, hexagon_zonotope, random_lattice_polytope, reeve_tetrahedron,
    standard_simplex, unit_cube, ReeveParams,
};
use shiftcount::geometry::linalg::{frac, int};
use shiftcount::stats::{
    compare_distributions, exact_distribution, exact_variance, mc_distribution, CountDistribution,
    DEFAULT_CELL_BUDGET,
};
use shiftcount::verify::{reeve_audit, reeve_closed_form, verify, IdentityKind, Status, VerifyConfig};
use shiftcount::{Polytope, Rational};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn law(pairs: &[(u64, Rational)]) -> std::collections::BTreeMap<u64, Rational> {
    pairs.iter().cloned().collect()
}

/// The fixed list of bodies shared by the first two criteria.
fn mean_instances() -> Vec<(String, Polytope)> {
    let mut out = vec![
        ("simplex:2".to_string(), standard_simplex(2)),
        ("simplex:3".to_string(), standard_simplex(3)),
    ];
    for n in 1..=4 {
        out.push((format!("reeve:{n}"), reeve_tetrahedron(ReeveParams::new(n).unwrap())));
    }
    out.push(("cube:3".into(), unit_cube(3)));
    out.push(("central-slab:3".into(), central_slab(3).unwrap()));
    out.push(("hexagon".into(), hexagon_zonotope().polytope().unwrap()));
    for seed in 0..5 {
        out.push((format!("random 2d #{seed}"), random_lattice_polytope(2, 5, 2, seed).unwrap()));
        out.push((format!("random 3d #{seed}"), random_lattice_polytope(3, 5, 2, 100 + seed).unwrap()));
    }
    out
}

fn mean_is_volume() -> Outcome {
    let bodies = mean_instances();
    for (name, p) in &bodies {
        let dist = exact_distribution(p, DEFAULT_CELL_BUDGET).map_err(|e| format!("{name}: {e}"))?;
        ensure(dist.mean() == p.volume(), || format!("{name}: mean {} vs volume {}", dist.mean(), p.volume()))?;
    }
    Ok(format!("{} bodies", bodies.len()))
}

fn variance_oracles_agree() -> Outcome {
    let bodies = mean_instances();
    for (name, p) in &bodies {
        let dist = exact_distribution(p, DEFAULT_CELL_BUDGET).map_err(|e| format!("{name}: {e}"))?;
        let engine = exact_variance(p).map_err(|e| format!("{name}: {e}"))?.variance;
        ensure(dist.variance() == engine, || format!("{name}: law {} vs lattice sum {engine}", dist.variance()))?;
    }
    Ok(format!("{} bodies", bodies.len()))
}

fn unit_triangle_variance() -> Outcome {
    let tri = standard_simplex(2);
    // every side of the triangle has lattice length gcd(|dx|, |dy|)
    let verts = tri.vertices();
    let squares: i64 = (0..3)
        .map(|i| {
            let e = (&verts[(i + 1) % 3] - &verts[i]).to_i64s().unwrap();
            e[0].gcd(&e[1]).pow(2)
        })
        .sum();
    let oracle = frac(squares, 12);
    let engine = exact_variance(&tri).map_err(|e| e.to_string())?.variance;
    ensure(engine == frac(1, 4) && oracle == engine, || format!("engine {engine}, side-length oracle {oracle}"))?;
    Ok(format!("variance {engine}"))
}

fn reeve_audits() -> Outcome {
    let mut discrepancies = 0;
    for n in 1..=6 {
        let a = reeve_audit(n).map_err(|e| format!("n={n}: {e}"))?;
        ensure(a.var_layer_oracle == a.var_intersection_engine, || {
            format!("n={n}: layer {} vs engine {}", a.var_layer_oracle, a.var_intersection_engine)
        })?;
        if n <= 4 {
            ensure(a.var_exact_distribution.as_ref() == Some(&a.var_layer_oracle), || {
                format!("n={n}: law variance {:?}", a.var_exact_distribution)
            })?;
        }
        if n == 1 {
            ensure(a.var_layer_oracle == frac(5, 36) && reeve_closed_form(1) == frac(5, 36), || "n=1 is not 5/36".into())?;
        } else {
            let d = a.discrepancy.as_ref().ok_or_else(|| format!("n={n}: no discrepancy record"))?;
            ensure(d.printed == reeve_closed_form(n) && d.computed == a.var_layer_oracle, || format!("n={n}: bad record"))?;
            discrepancies += 1;
        }
    }
    Ok(format!("oracles agree for n=1..6, {discrepancies} closed-form discrepancies recorded"))
}

fn passes(kind: IdentityKind, config: &VerifyConfig, want: Status) -> Outcome {
    let r = verify(kind, config).map_err(|e| format!("{kind}: {e}"))?;
    ensure(r.status == want, || format!("{kind}: {} with {} violations", r.status.as_str(), r.violations))?;
    Ok(format!("{kind}: {} checks on {} instances", r.checks, r.instances))
}

fn all_pass(kinds: &[IdentityKind]) -> Outcome {
    let config = VerifyConfig::default();
    let lines: Result<Vec<_>, _> = kinds.iter().map(|k| passes(*k, &config, Status::Pass)).collect();
    Ok(lines?.join("; "))
}

fn symmetric_scaling() -> Outcome {
    let octahedron = cross_polytope(3);
    let base = exact_variance(&octahedron).map_err(|e| e.to_string())?.variance;
    for n in 1..=3i64 {
        let v = exact_variance(&octahedron.scale(n).unwrap()).map_err(|e| e.to_string())?.variance;
        ensure(v == &base * int(n * n), || format!("octahedron n={n}: {v} vs {n}²·{base}"))?;
    }
    let cross4 = cross_polytope(4);
    let base4 = exact_variance(&cross4).map_err(|e| e.to_string())?.variance;
    let v4 = exact_variance(&cross4.scale(2).unwrap()).map_err(|e| e.to_string())?.variance;
    ensure(v4 == &base4 * int(16), || format!("4d cross-polytope: {v4} vs 16·{base4}"))?;
    Ok(format!("Var(octahedron) = {base}, Var(4d cross) = {base4}"))
}

fn counterexamples() -> Outcome {
    let slab = exact_distribution(&central_slab(3).unwrap(), DEFAULT_CELL_BUDGET).map_err(|e| e.to_string())?;
    ensure(slab.probabilities() == law(&[(0, frac(1, 3)), (1, frac(2, 3))]), || format!("slab law {:?}", slab.probabilities()))?;
    passes(IdentityKind::CounterexampleMinkowski, &VerifyConfig::default(), Status::ExpectedFailureConfirmed)?;
    let simplex = exact_distribution(&standard_simplex(3), DEFAULT_CELL_BUDGET).map_err(|e| e.to_string())?;
    ensure(simplex.probabilities() == law(&[(0, frac(5, 6)), (1, frac(1, 6))]), || format!("simplex law {:?}", simplex.probabilities()))?;
    ensure(!simplex.is_symmetric_about_mean(), || "simplex law is symmetric".into())?;
    Ok("slab {0:1/3, 1:2/3}; prism counterexample confirmed; simplex {0:5/6, 1:1/6} asymmetric".into())
}

fn monte_carlo() -> Outcome {
    const SAMPLES: u64 = 100_000;
    const SEED: u64 = 2024;
    let mut notes = Vec::new();
    for (name, p) in [("simplex:2", standard_simplex(2)), ("reeve:3", reeve_tetrahedron(ReeveParams::new(3).unwrap()))] {
        let exact = exact_distribution(&p, DEFAULT_CELL_BUDGET).map_err(|e| e.to_string())?;
        let mc = mc_distribution(&p, SAMPLES, SEED);
        let CountDistribution::Empirical { samples, .. } = &mc else {
            return Err(format!("{name}: sampler returned an exact law"));
        };
        ensure(*samples == SAMPLES, || format!("{name}: {samples} samples"))?;
        let se = (exact.variance().to_f64().unwrap() / SAMPLES as f64).sqrt();
        let gap = (mc.mean() - exact.mean()).to_f64().unwrap().abs();
        ensure(gap <= 4.0 * se, || format!("{name}: mean off by {gap:.5} > 4·{se:.5}"))?;
        let report = compare_distributions(&mc, &exact).map_err(|e| format!("{name}: {e}"))?;
        let p_value = report.p_value.unwrap_or(0.0);
        ensure(p_value > 0.001, || format!("{name}: chi-square p = {p_value}"))?;
        ensure(mc_distribution(&p, SAMPLES, SEED).to_csv() == mc.to_csv(), || format!("{name}: rerun differs"))?;
        notes.push(format!("{name}: |Δmean| = {:.2} SE, p = {p_value:.3}", gap / se));
    }
    Ok(notes.join("; "))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 11] = [
        ("mean equals volume", mean_is_volume),
        ("lattice-sum variance equals law variance", variance_oracles_agree),
        ("unit triangle variance 1/4", unit_triangle_variance),
        ("Reeve audit n=1..6", reeve_audits),
        ("slab-piece scaling decompositions", || all_pass(&[IdentityKind::ScalingSimplex, IdentityKind::ScalingPolyhedron])),
        ("3d dilation corollary", || all_pass(&[IdentityKind::Corollary3d])),
        ("symmetric variance scaling", symmetric_scaling),
        ("zonotope constancy", || all_pass(&[IdentityKind::ZonotopeConstancy])),
        ("unimodular and negation invariance", || all_pass(&[IdentityKind::SlInvariance, IdentityKind::NegationInvariance])),
        ("counterexamples", counterexamples),
        ("Monte Carlo soundness", monte_carlo),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS criterion {}: {name} — {detail} ({secs:.1}s)", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {}: {name} — {why} ({secs:.1}s)", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
