//! `shiftcount`: exact and simulated lattice-point statistics of randomly shifted polytopes.

use std::process::ExitCode;

use clap::builder::TypedValueParser;
use clap::{Parser, ValueEnum};
use serde_json::{json, Map, Value};

use shiftcount::constructions::Construction;
use shiftcount::geometry::format_rational;
use shiftcount::geometry::io::polytope_to_json;
use shiftcount::lattice::{count_at, ShiftStream};
use shiftcount::stats::{exact_distribution, exact_variance, mc_distribution, CountDistribution, DEFAULT_CELL_BUDGET};
use shiftcount::verify::{reeve_audit_with, verify, IdentityKind, Status, VerifyConfig};
use shiftcount::{Error, Polytope};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Command {
    Volume,
    Count,
    Moments,
    Distribution,
    Verify,
    ReeveAudit,
    Catalog,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Method {
    Exact,
    Mc,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Debug, Parser)]
#[command(name = "shiftcount", version, about = "Lattice points captured by a randomly shifted integer polytope")]
struct Cli {
    command: Command,
    /// Catalog name (simplex:d, slab:d:k, reeve:n, central-slab:d, cube:d, cross:d, hexagon),
    /// zonotope:<path>, or file:<path>.
    #[arg(long)]
    input: Option<String>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Monte Carlo sample count.
    #[arg(long, default_value_t = 100_000, value_parser = clap::value_parser!(u64).range(1..))]
    samples: u64,
    #[arg(long, value_enum, default_value_t = Method::Exact)]
    method: Method,
    /// Identity tag for `verify`.
    #[arg(long)]
    identity: Option<String>,
    /// Reeve parameter for `reeve-audit`; dilation factor for `verify`.
    #[arg(long)]
    n: Option<u64>,
    /// Shifts per instance (`verify`) or number of shifts to draw (`count`).
    #[arg(long)]
    shifts: Option<usize>,
    /// Random instances per dimension for `verify`.
    #[arg(long)]
    instances: Option<usize>,
    /// Defaults to csv for `distribution`, json otherwise.
    #[arg(long, value_enum)]
    format: Option<Format>,
    #[arg(long)]
    out: Option<std::path::PathBuf>,
    #[arg(long, default_value_t = DEFAULT_CELL_BUDGET, value_parser = clap::value_parser!(u64).range(1..).map(|v| v as usize))]
    cell_budget: usize,
    /// With `catalog`: print the input polytope as JSON.
    #[arg(long)]
    dump: bool,
}

/// Rendered output plus whether a verification failed.
struct Output {
    text: String,
    failed: bool,
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn ok(v: Value) -> Output {
    Output { text: pretty(&v), failed: false }
}

fn input(cli: &Cli) -> Result<(String, Construction), Error> {
    let spec = cli.input.clone().ok_or_else(|| Error::Parse("--input is required".into()))?;
    let c = Construction::parse(&spec)?;
    Ok((spec, c))
}

fn input_polytope(cli: &Cli) -> Result<(String, Polytope), Error> {
    let (spec, c) = input(cli)?;
    Ok((spec, c.polytope()?))
}

fn header(cli: &Cli, spec: &str) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("input".into(), spec.into());
    m.insert("seed".into(), cli.seed.into());
    m
}

fn run(cli: &Cli) -> Result<Output, Error> {
    let format = cli.format.unwrap_or(if cli.command == Command::Distribution { Format::Csv } else { Format::Json });
    if format == Format::Csv && cli.command != Command::Distribution {
        return Err(Error::Parse("csv output is only available for distribution".into()));
    }
    match cli.command {
        Command::Volume => {
            let (spec, p) = input_polytope(cli)?;
            let mut m = header(cli, &spec);
            m.insert("dim".into(), p.dim().into());
            m.insert("vertices".into(), p.vertices().len().into());
            m.insert("isLattice".into(), p.is_lattice().into());
            m.insert("volume".into(), format_rational(&p.volume()).into());
            Ok(ok(Value::Object(m)))
        }
        Command::Count => {
            let (spec, p) = input_polytope(cli)?;
            let mut stream = ShiftStream::new(cli.seed, 0);
            let counts: Vec<Value> = (0..cli.shifts.unwrap_or(1))
                .map(|_| {
                    let s = stream.next_shift(p.dim());
                    let r = count_at(&p, s.coords());
                    json!({
                        "shift": s.coords().iter().map(format_rational).collect::<Vec<_>>(),
                        "count": r.count,
                        "generic": r.is_generic(),
                    })
                })
                .collect();
            let mut m = header(cli, &spec);
            m.insert("counts".into(), counts.into());
            Ok(ok(Value::Object(m)))
        }
        Command::Moments => {
            let (spec, p) = input_polytope(cli)?;
            let report = exact_variance(&p)?;
            let mut m = header(cli, &spec);
            m.insert("mean".into(), format_rational(&report.mean).into());
            m.insert("variance".into(), format_rational(&report.variance).into());
            Ok(ok(Value::Object(m)))
        }
        Command::Distribution => {
            let (spec, p) = input_polytope(cli)?;
            let dist = match cli.method {
                Method::Exact => exact_distribution(&p, cli.cell_budget)?,
                Method::Mc => mc_distribution(&p, cli.samples, cli.seed),
            };
            Ok(Output { text: render_distribution(cli, &spec, &dist, format), failed: false })
        }
        Command::Verify => {
            let tag = cli.identity.as_deref().ok_or_else(|| Error::Parse("--identity is required".into()))?;
            let kind: IdentityKind = tag.parse()?;
            let config = VerifyConfig {
                instances: cli.instances,
                shifts: cli.shifts,
                dilations: cli.n.map(|n| vec![n]),
                seed: cli.seed,
                input: cli.input.as_deref().map(Construction::parse).transpose()?,
                cell_budget: cli.cell_budget,
                ..VerifyConfig::default()
            };
            let report = verify(kind, &config)?;
            let mut v = report.to_json();
            if let Some(spec) = &cli.input {
                v["input"] = spec.as_str().into();
            }
            Ok(Output { text: pretty(&v), failed: report.status == Status::Fail })
        }
        Command::ReeveAudit => {
            let n = cli.n.ok_or_else(|| Error::Parse("--n is required".into()))?;
            let n = i64::try_from(n).map_err(|_| Error::OutOfRange(format!("n = {n}")))?;
            let audit = reeve_audit_with(n, n <= 4, cli.cell_budget)?;
            let mut v = audit.to_json();
            v["seed"] = cli.seed.into();
            Ok(Output { text: pretty(&v), failed: !audit.oracles_agree() })
        }
        Command::Catalog => match &cli.input {
            None => Ok(ok(json!({
                "seed": cli.seed,
                "constructions": [
                    "simplex:d", "cube:d", "cross:d", "slab:d:k", "reeve:n", "central-slab:d",
                    "hexagon", "zonotope:<path>", "file:<path>"
                ],
                "identities": IdentityKind::ALL.iter().map(|k| k.tag()).collect::<Vec<_>>(),
            }))),
            Some(_) => {
                let (spec, c) = input(cli)?;
                if cli.dump {
                    let text = match &c {
                        Construction::Zonotope(z) => z.to_json(),
                        Construction::Polytope(p) => polytope_to_json(p),
                    };
                    return Ok(Output { text: text + "\n", failed: false });
                }
                let p = c.polytope()?;
                let mut m = header(cli, &spec);
                m.insert("polytope".into(), serde_json::from_str(&polytope_to_json(&p))?);
                m.insert("facets".into(), p.facets().iter().map(ToString::to_string).collect::<Vec<_>>().into());
                Ok(ok(Value::Object(m)))
            }
        },
    }
}

fn render_distribution(cli: &Cli, spec: &str, dist: &CountDistribution, format: Format) -> String {
    let method = if dist.is_exact() { "exact" } else { "mc" };
    match format {
        Format::Csv => {
            let mut s = dist.to_csv();
            s.push_str(&format!("# input={spec} method={method} seed={}", cli.seed));
            if let CountDistribution::Empirical { samples, redraws, .. } = dist {
                s.push_str(&format!(" samples={samples} redraws={redraws}"));
            }
            s.push('\n');
            s
        }
        Format::Json => {
            let mut m = header(cli, spec);
            m.insert("method".into(), method.into());
            m.insert(
                "distribution".into(),
                Value::Object(
                    dist.probabilities().iter().map(|(k, p)| (k.to_string(), Value::from(format_rational(p)))).collect(),
                ),
            );
            m.insert("mean".into(), format_rational(&dist.mean()).into());
            m.insert("variance".into(), format_rational(&dist.variance()).into());
            if let CountDistribution::Empirical { samples, redraws, .. } = dist {
                m.insert("samples".into(), (*samples).into());
                m.insert("redraws".into(), (*redraws).into());
            }
            pretty(&Value::Object(m))
        }
    }
}

fn emit(cli: &Cli, text: &str) -> std::io::Result<()> {
    match &cli.out {
        Some(path) => std::fs::write(path, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn error_exit(message: String) -> ExitCode {
    println!("{}", serde_json::to_string(&json!({ "error": message })).expect("serializable"));
    ExitCode::from(2)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => return error_exit(e.to_string().trim().to_string()),
    };
    match run(&cli) {
        Ok(out) => {
            if let Err(e) = emit(&cli, &out.text) {
                return error_exit(e.to_string());
            }
            if out.failed {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => error_exit(e.to_string()),
    }
}
