use std::collections::BTreeMap;
use std::path::Path;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, ValueEnum};
use serde_json::{json, Value};

use ordut::constructions::{catalog, CATALOG_NAMES};
use ordut::factorization::{check_equivalence_theorem, eg_witness_over, is_factorizable_over, units, SweepMode};
use ordut::format::GeneratorFile;
use ordut::monoid::{TransMonoid, DEFAULT_MONOID_LIMIT};
use ordut::normalizer::{normalizer_in_symmetric, transfer_report};
use ordut::report::{group_report, monoid_report};
use ordut::transversal::{has_kut_with, has_ordered_kut_with, Strategy, UtConfig, UtVerdict};
use ordut::{Error, PermGroup, Transformation};

const JSON_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Verb {
    GroupProps,
    Ordut,
    Kut,
    MonoidReport,
    Factorize,
    Equivalence,
    Normalizer,
    Transfer,
    CatalogList,
}

/// Universal transversal properties of permutation groups and the
/// semigroup-theoretic properties they control.
#[derive(Debug, Parser)]
#[command(name = "ordut", version)]
struct Cli {
    #[arg(value_enum)]
    verb: Verb,
    /// Catalog name such as "A4@4" or a generator file.
    #[arg(long)]
    group: Option<String>,
    /// Generator file for a transformation monoid.
    #[arg(long)]
    monoid: Option<String>,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long, value_enum)]
    strategy: Option<StrategyArg>,
    /// Enumeration bound for monoids (default: ORDUT_LIMIT or 2000000).
    #[arg(long)]
    limit: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Number of sampled rank-k maps; the sweep is exhaustive when absent.
    #[arg(long)]
    count: Option<usize>,
    #[arg(long)]
    json: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum StrategyArg {
    Exhaustive,
    Csp,
}

impl From<StrategyArg> for Strategy {
    fn from(s: StrategyArg) -> Self {
        match s {
            StrategyArg::Exhaustive => Strategy::Exhaustive,
            StrategyArg::Csp => Strategy::Csp,
        }
    }
}

/// An assertion inside a harness failed; reported with exit status 2.
#[derive(Debug)]
struct HarnessFailure(String);

impl std::fmt::Display for HarnessFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for HarnessFailure {}

struct Output {
    text: String,
    json: Value,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            if cli.json {
                println!("{}", serde_json::to_string_pretty(&out.json).expect("json values serialize"));
            } else {
                print!("{}", out.text);
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_status(&e))
        }
    }
}

/// 2 for harness assertion failures, 1 for input and limit errors.
fn exit_status(e: &anyhow::Error) -> u8 {
    let harness = e.downcast_ref::<HarnessFailure>().is_some()
        || matches!(e.downcast_ref::<Error>(), Some(Error::LawViolated { .. }));
    if harness {
        2
    } else {
        1
    }
}

fn validate(cli: &Cli) -> Result<()> {
    let allowed: &[&str] = match cli.verb {
        Verb::GroupProps => &["group"],
        Verb::Ordut | Verb::Kut => &["group", "k", "strategy"],
        Verb::MonoidReport | Verb::Normalizer | Verb::Transfer => &["monoid", "limit"],
        Verb::Factorize => &["monoid", "group", "limit"],
        Verb::Equivalence => &["group", "k", "seed", "count"],
        Verb::CatalogList => &[],
    };
    let given = [
        ("group", cli.group.is_some()),
        ("monoid", cli.monoid.is_some()),
        ("k", cli.k.is_some()),
        ("strategy", cli.strategy.is_some()),
        ("limit", cli.limit.is_some()),
        ("seed", cli.seed.is_some()),
        ("count", cli.count.is_some()),
    ];
    for (flag, present) in given {
        if present && !allowed.contains(&flag) {
            bail!("--{flag} does not apply to {:?}", cli.verb);
        }
    }
    let required: &[&str] = match cli.verb {
        Verb::GroupProps => &["group"],
        Verb::Ordut | Verb::Kut | Verb::Equivalence => &["group", "k"],
        Verb::MonoidReport | Verb::Normalizer | Verb::Transfer | Verb::Factorize => &["monoid"],
        Verb::CatalogList => &[],
    };
    for flag in required {
        if !given.iter().any(|&(f, present)| f == *flag && present) {
            bail!("{:?} requires --{flag}", cli.verb);
        }
    }
    if cli.seed.is_some() && cli.count.is_none() {
        bail!("--seed needs --count");
    }
    Ok(())
}

fn limit(cli: &Cli) -> Result<usize> {
    if let Some(l) = cli.limit {
        return Ok(l);
    }
    match std::env::var("ORDUT_LIMIT") {
        Ok(v) => v.trim().parse().with_context(|| format!("ORDUT_LIMIT={v} is not a count")),
        Err(_) => Ok(DEFAULT_MONOID_LIMIT),
    }
}

fn load_group(spec: &str) -> Result<PermGroup> {
    if Path::new(spec).is_file() {
        let file = GeneratorFile::read(spec).with_context(|| format!("reading {spec}"))?;
        return Ok(file.group()?);
    }
    Ok(catalog(spec)?)
}

fn load_monoid(path: &str, extra: Option<&PermGroup>, limit: usize) -> Result<(GeneratorFile, TransMonoid)> {
    let file = GeneratorFile::read(path).with_context(|| format!("reading {path}"))?;
    let mut gens = file.transformations();
    if let Some(g) = extra {
        if g.degree() != file.degree {
            bail!("group degree {} differs from monoid degree {}", g.degree(), file.degree);
        }
        gens.extend(g.generators().iter().map(|p| p.as_transformation()));
    }
    let m = TransMonoid::froidure_pin(file.degree, &gens, limit)?;
    Ok((file, m))
}

/// Labels of named generators keyed by their image-list rendering.
fn labels(file: &GeneratorFile) -> BTreeMap<String, String> {
    let mut out = BTreeMap::new();
    for e in &file.entries {
        if let Some(label) = &e.label {
            out.entry(e.map.to_string()).or_insert_with(|| label.clone());
        }
    }
    out
}

fn envelope(cli: &Cli, subject: Option<&str>, result: Value) -> Value {
    json!({
        "version": JSON_VERSION,
        "command": cli.verb.to_possible_value().expect("verbs have names").get_name(),
        "subject": subject,
        "result": result,
    })
}

fn run(cli: &Cli) -> Result<Output> {
    validate(cli)?;
    match cli.verb {
        Verb::CatalogList => {
            let text: String = CATALOG_NAMES.iter().map(|n| format!("{n}\n")).collect();
            Ok(Output { text, json: envelope(cli, None, json!(CATALOG_NAMES)) })
        }
        Verb::GroupProps => {
            let name = cli.group.as_deref().expect("validated");
            let report = group_report(name, &load_group(name)?);
            Ok(Output { text: report.to_string(), json: envelope(cli, Some(name), serde_json::to_value(&report)?) })
        }
        Verb::Ordut | Verb::Kut => {
            let name = cli.group.as_deref().expect("validated");
            let g = load_group(name)?;
            let k = cli.k.expect("validated");
            let config = UtConfig::new(cli.strategy.map_or(Strategy::Csp, Strategy::from));
            let v = if cli.verb == Verb::Ordut {
                has_ordered_kut_with(&g, k, &config)?
            } else {
                has_kut_with(&g, k, &config)?
            };
            Ok(ut_output(cli, name, k, &v))
        }
        Verb::MonoidReport => {
            let path = cli.monoid.as_deref().expect("validated");
            let (_, m) = load_monoid(path, None, limit(cli)?)?;
            let report = monoid_report(path, &m);
            Ok(Output { text: report.to_string(), json: envelope(cli, Some(path), serde_json::to_value(&report)?) })
        }
        Verb::Factorize => factorize(cli),
        Verb::Equivalence => equivalence(cli),
        Verb::Normalizer => {
            let path = cli.monoid.as_deref().expect("validated");
            let (_, m) = load_monoid(path, None, limit(cli)?)?;
            let g = normalizer_in_symmetric(&m)?;
            let gens: Vec<String> = g.small_generators().iter().map(ToString::to_string).collect();
            let text = format!("order={}\ngenerators=<{}>\n", g.order(), gens.join(", "));
            let result = json!({ "order": g.order(), "generators": gens });
            Ok(Output { text, json: envelope(cli, Some(path), result) })
        }
        Verb::Transfer => {
            let path = cli.monoid.as_deref().expect("validated");
            let (file, m) = load_monoid(path, None, limit(cli)?)?;
            let report = transfer_report(&m, limit(cli)?)?;
            let names = labels(&file);
            let mut text = report.to_string();
            for (name, r) in &report.restrictions {
                for [a, b] in &r.discrepancies {
                    if let (Some(x), Some(y)) = (names.get(a), names.get(b)) {
                        text.push_str(&format!("{} discrepancy ({x},{y})\n", name.to_uppercase()));
                    }
                }
            }
            let mut result = serde_json::to_value(&report)?;
            result["labels"] = json!(names);
            Ok(Output { text, json: envelope(cli, Some(path), result) })
        }
    }
}

fn ut_output(cli: &Cli, name: &str, k: usize, v: &UtVerdict) -> Output {
    let mut text = format!("holds={}\n", v.holds);
    if let Some(w) = &v.witness {
        text.push_str(&format!("witness={w}\n"));
    }
    text.push_str(&format!(
        "strategy={} orbits={} colorings={} nodes={}\n",
        v.strategy, v.work.orbits, v.work.colorings, v.work.nodes
    ));
    let witness = v.witness.as_ref().map(|w| {
        json!({
            "tuple": w.tuple.entries().iter().map(|x| x + 1).collect::<Vec<_>>(),
            "parts": w.partition.parts().iter().map(|p| p.iter().map(|x| x + 1).collect::<Vec<_>>()).collect::<Vec<_>>(),
        })
    });
    let result = json!({ "k": k, "holds": v.holds, "witness": witness, "strategy": v.strategy, "work": v.work });
    Output { text, json: envelope(cli, Some(name), result) }
}

fn factorize(cli: &Cli) -> Result<Output> {
    let path = cli.monoid.as_deref().expect("validated");
    let group = cli.group.as_deref().map(load_group).transpose()?;
    let (file, m) = load_monoid(path, group.as_ref(), limit(cli)?)?;
    let unit_group = match &group {
        Some(g) => g.clone(),
        None => units(&m),
    };
    let verdict = is_factorizable_over(&m, &unit_group);
    let mut text = format!("holds={}\n", verdict.holds);
    if let Some(bad) = &verdict.witness {
        text.push_str(&format!("witness={bad}\n"));
    }
    let mut rows = Vec::new();
    for e in &file.entries {
        let f = eg_witness_over(unit_group.elements(), &e.map);
        let label = e.label.clone().unwrap_or_else(|| e.map.to_string());
        let rendered = f.as_ref().map(ToString::to_string);
        text.push_str(&format!("{label}: {} factorization={}\n", e.map, rendered.as_deref().unwrap_or("none")));
        rows.push(json!({ "label": label, "map": e.map.to_string(), "factorization": rendered }));
    }
    let result = json!({
        "holds": verdict.holds,
        "witness": verdict.witness.as_ref().map(Transformation::to_string),
        "order": m.len(),
        "units": unit_group.order(),
        "generators": rows,
    });
    Ok(Output { text, json: envelope(cli, Some(path), result) })
}

fn equivalence(cli: &Cli) -> Result<Output> {
    let name = cli.group.as_deref().expect("validated");
    let g = load_group(name)?;
    let k = cli.k.expect("validated");
    let mode = match cli.count {
        Some(count) => SweepMode::Sample { seed: cli.seed.unwrap_or(0), count },
        None => SweepMode::All,
    };
    let report = check_equivalence_theorem(&g, k, mode)?;
    if !report.consistent {
        return Err(HarnessFailure(format!("equivalence inconsistent for {name}, k={k}:\n{report}")).into());
    }
    let seed = match mode {
        SweepMode::Sample { seed, .. } => Some(seed),
        SweepMode::All => None,
    };
    let rows: Vec<Value> = report
        .rows
        .iter()
        .map(|r| json!({ "t": r.t.to_string(), "factorizable": r.factorizable, "witness": r.witness }))
        .collect();
    let result = json!({
        "k": k,
        "mode": mode.to_string(),
        "seed": seed,
        "ordered_kut": report.ordered_kut,
        "kut_witness": report.kut_witness.as_ref().map(ToString::to_string),
        "rows": rows,
        "converse": report.converse.as_ref().map(|r| json!({ "t": r.t.to_string(), "factorizable": r.factorizable })),
        "consistent": report.consistent,
    });
    Ok(Output { text: format!("{report}\n"), json: envelope(cli, Some(name), result) })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn harness_failures_map_to_status_two() {
        let law = anyhow::Error::from(Error::LawViolated { law: "regular".into(), witness: "[1,1]".into() });
        assert_eq!(exit_status(&law), 2);
        assert_eq!(exit_status(&HarnessFailure("inconsistent".into()).into()), 2);
        assert_eq!(exit_status(&Error::TooLarge { bound: 3, reached: 4 }.into()), 1);
        assert_eq!(exit_status(&anyhow::anyhow!("--k needed")), 1);
    }
}
