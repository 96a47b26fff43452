use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use log::info;
use serde_json::json;

use sarc::actions::{
    load_catalog, parse_catalog, ActionFamily, ActionSpec, FamilyTag, GroupType, Instantiated, BUNDLED_CATALOG,
};
use sarc::digraph::{
    orbitals, s_max_bruteforce, s_max_criterion, vertex_stabilizer_order, Pairing, DEFAULT_ARC_BUDGET,
    DEFAULT_S_CAP,
};
use sarc::fixtures;
use sarc::verify::{verify, VerifyParams};
use sarc::GroupAction;

#[derive(Parser)]
#[command(name = "sarc", version, about = "Check s-arc transitivity of orbital digraphs of A_n and S_n")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check every candidate primitive action in a degree range.
    Verify(VerifyArgs),
    /// Show one action, its orbitals, or the s_max of one orbital.
    Inspect {
        #[command(subcommand)]
        what: Inspect,
    },
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, default_value_t = 5)]
    n_min: usize,
    #[arg(long, default_value_t = 9)]
    n_max: usize,
    /// Comma-separated: alt, sym.
    #[arg(long, default_value = "alt,sym")]
    groups: String,
    /// Comma-separated family letters a..f, or `catalog`.
    #[arg(long, default_value = "a,b,c,catalog")]
    families: String,
    #[arg(long, default_value_t = 1000)]
    degree_cap: usize,
    #[arg(long, default_value_t = DEFAULT_S_CAP)]
    s_cap: u32,
    /// Largest number of s-arcs listed per level by the enumeration check.
    #[arg(long, default_value_t = DEFAULT_ARC_BUDGET)]
    arc_budget: u64,
    /// Catalog JSON; the bundled catalog is used when omitted.
    #[arg(long)]
    catalog: Option<PathBuf>,
    /// Where to write the JSON report.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Inspect {
    Action(InspectArgs),
    Orbitals(InspectArgs),
    Smax(SmaxArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    Subsets,
    Partitions,
    Affine,
    Wreath,
    Catalog,
}

#[derive(Args)]
struct Target {
    /// A built-in fixture instead of an A_n / S_n action.
    #[arg(long, conflicts_with_all = ["n", "family"])]
    fixture: Option<String>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long, default_value = "sym")]
    group: String,
    #[arg(long, value_enum)]
    family: Option<FamilyArg>,
    #[arg(long)]
    m: Option<usize>,
    #[arg(long)]
    k: Option<u32>,
    #[arg(long)]
    p: Option<u64>,
    /// Index into the catalog entries.
    #[arg(long)]
    entry: Option<usize>,
    #[arg(long)]
    catalog: Option<PathBuf>,
    #[arg(long, default_value_t = 5000)]
    degree_cap: usize,
}

#[derive(Args)]
struct InspectArgs {
    #[command(flatten)]
    target: Target,
    /// Also write the result as JSON to this path.
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Args)]
struct SmaxArgs {
    #[command(flatten)]
    target: Target,
    #[arg(long, default_value_t = 0)]
    orbital: usize,
    #[arg(long, default_value_t = DEFAULT_S_CAP)]
    s_cap: u32,
    /// Use s-arc enumeration instead of the stabilizer criterion.
    #[arg(long)]
    bruteforce: bool,
    #[arg(long, default_value_t = DEFAULT_ARC_BUDGET)]
    arc_budget: u64,
    /// Write the orbital as an edge list.
    #[arg(long)]
    edges: Option<PathBuf>,
    #[arg(long)]
    json: Option<PathBuf>,
}

fn parse_list<T>(text: &str, parse: impl Fn(&str) -> Result<T>) -> Result<Vec<T>> {
    text.split(',').filter(|s| !s.trim().is_empty()).map(|s| parse(s.trim())).collect()
}

fn run_verify(args: VerifyArgs) -> Result<ExitCode> {
    let groups = parse_list(&args.groups, |s| Ok(s.parse::<GroupType>()?))?;
    let mut include_catalog = false;
    let mut families = Vec::new();
    for tok in args.families.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        if tok == "catalog" {
            include_catalog = true;
        } else {
            families.push(tok.parse::<FamilyTag>()?);
        }
    }
    let params = VerifyParams {
        n_min: args.n_min,
        n_max: args.n_max,
        groups,
        families,
        include_catalog,
        degree_cap: args.degree_cap,
        s_cap: args.s_cap,
        arc_budget: args.arc_budget,
        catalog_path: args.catalog,
    };
    let report = verify(&params)?;
    let s = &report.summary;
    println!(
        "actions checked: {}  digraphs: {}  degenerate: {}  rejected: {}  excluded: {}",
        s.actions_checked, s.digraphs_checked, s.degenerate_digraphs, s.rejections, s.exclusions
    );
    for r in &report.records {
        println!(
            "  n={} {} {:<40} degree {:>5}  {:?}",
            r.n, r.group_type, r.description, r.degree, r.bound_status
        );
    }
    for r in &report.rejections {
        println!("  n={} {} {:<40} rejected: {}", r.n, r.group_type, r.description, r.reason);
    }
    for e in &report.exclusions {
        println!("  n={} {} {:<40} excluded: {}", e.n, e.group_type, e.description, e.reason);
    }
    let max_s = s.max_s_observed.map_or("none".to_string(), |v| v.to_string());
    println!("max s observed: {max_s}  bound status: {:?}", s.bound_status);
    if !s.oracle_disagreements.is_empty() {
        println!("enumeration disagreements: {}", s.oracle_disagreements.len());
    }
    if let Some(out) = &args.out {
        fs::write(out, report.to_json()).with_context(|| format!("writing {}", out.display()))?;
        info!("report written to {}", out.display());
    }
    if report.passed() {
        println!("PASS: no digraph exceeds s = 2");
        Ok(ExitCode::SUCCESS)
    } else {
        for v in &s.violations {
            println!("VIOLATION: n={} {} {} orbital {} s_max {}", v.n, v.group_type, v.description, v.orbital, v.s_max);
        }
        Ok(ExitCode::from(1))
    }
}

struct Built {
    action: GroupAction,
    label: String,
    primitive: Option<bool>,
    rejection: Option<String>,
}

fn build_target(t: &Target) -> Result<Built> {
    if let Some(name) = &t.fixture {
        let action = fixtures::by_name(name)
            .ok_or_else(|| anyhow!("unknown fixture {name:?}; known: {}", fixtures::names().join(", ")))?;
        let primitive = action.induced().is_primitive().ok();
        return Ok(Built {
            action,
            label: format!("fixture {name}"),
            primitive,
            rejection: None,
        });
    }
    let n = t.n.ok_or_else(|| anyhow!("give --fixture or --n with --family"))?;
    let group: GroupType = t.group.parse()?;
    let family = t.family.ok_or_else(|| anyhow!("--family is required with --n"))?;
    let need = |v: Option<usize>, name: &str| v.ok_or_else(|| anyhow!("--{name} is required for this family"));
    let spec = match family {
        FamilyArg::Subsets => {
            let m = need(t.m, "m")?;
            if 2 * m >= n {
                bail!("subsets need m < n - m");
            }
            ActionSpec::Family {
                n,
                group,
                family: ActionFamily::Intransitive { m, k: n - m },
            }
        }
        FamilyArg::Partitions => {
            let m = need(t.m, "m")?;
            if m == 0 || n % m != 0 {
                bail!("partitions need m dividing n");
            }
            ActionSpec::Family {
                n,
                group,
                family: ActionFamily::Imprimitive { m, k: n / m },
            }
        }
        FamilyArg::Affine => ActionSpec::Family {
            n,
            group,
            family: ActionFamily::Affine {
                k: t.k.ok_or_else(|| anyhow!("--k is required for affine"))?,
                p: t.p.ok_or_else(|| anyhow!("--p is required for affine"))?,
            },
        },
        FamilyArg::Wreath => ActionSpec::Family {
            n,
            group,
            family: ActionFamily::Wreath {
                m: need(t.m, "m")?,
                k: t.k.ok_or_else(|| anyhow!("--k is required for wreath"))?,
            },
        },
        FamilyArg::Catalog => {
            let entries = match &t.catalog {
                Some(p) => load_catalog(p)?,
                None => parse_catalog(BUNDLED_CATALOG)?,
            };
            let i = need(t.entry, "entry")?;
            let e = entries
                .get(i)
                .cloned()
                .ok_or_else(|| anyhow!("catalog has {} entries", entries.len()))?;
            if e.n != n || e.group != group {
                bail!("catalog entry {i} is for n={} {}", e.n, e.group);
            }
            ActionSpec::Catalog(e)
        }
    };
    let label = format!("n={n} {group} {}", spec.describe());
    Ok(match spec.build(t.degree_cap)? {
        Instantiated::Accepted(action) => Built {
            action,
            label,
            primitive: Some(true),
            rejection: None,
        },
        Instantiated::Rejected { action, reason } => Built {
            action: action.ok_or_else(|| anyhow!("rejected: {reason}"))?,
            label,
            primitive: Some(false),
            rejection: Some(reason.to_string()),
        },
    })
}

fn write_json(path: &Option<PathBuf>, value: &serde_json::Value) -> Result<()> {
    if let Some(p) = path {
        let text = serde_json::to_string_pretty(value)?;
        fs::write(p, text).with_context(|| format!("writing {}", p.display()))?;
    }
    Ok(())
}

fn inspect_action(args: InspectArgs) -> Result<()> {
    let b = build_target(&args.target)?;
    let stab = vertex_stabilizer_order(&b.action);
    println!("{}", b.label);
    println!("degree: {}", b.action.degree());
    println!("group order: {}", b.action.induced().order());
    println!("stabilizer order: {stab}");
    match (&b.primitive, &b.rejection) {
        (_, Some(r)) => println!("primitive: no ({r})"),
        (Some(p), None) => println!("primitive: {}", if *p { "yes" } else { "no" }),
        (None, None) => println!("primitive: n/a"),
    }
    write_json(
        &args.json,
        &json!({
            "action": b.label,
            "degree": b.action.degree(),
            "group_order": b.action.induced().order().to_string(),
            "stabilizer_order": stab.to_string(),
            "label_kind": b.action.kind(),
            "primitive": b.primitive,
            "rejection": b.rejection,
        }),
    )
}

fn inspect_orbitals(args: InspectArgs) -> Result<()> {
    let b = build_target(&args.target)?;
    let orbs = orbitals(&b.action)?;
    println!("{}  degree {}", b.label, b.action.degree());
    println!("{:>3}  {:>7}  {:<14}  rep arc", "id", "valency", "pairing");
    let mut rows = Vec::new();
    for o in &orbs {
        let pairing = match o.pairing {
            Pairing::SelfPaired => "self-paired".to_string(),
            Pairing::PairedWith(j) => format!("paired with {j}"),
        };
        println!(
            "{:>3}  {:>7}  {:<14}  ({}, {})",
            o.id, o.valency, pairing, o.representative_arc.0, o.representative_arc.1
        );
        rows.push(json!({
            "id": o.id,
            "valency": o.valency,
            "pairing": o.pairing,
            "representative_arc": [o.representative_arc.0, o.representative_arc.1],
        }));
    }
    write_json(&args.json, &json!({ "action": b.label, "degree": b.action.degree(), "orbitals": rows }))
}

fn inspect_smax(args: SmaxArgs) -> Result<()> {
    let b = build_target(&args.target)?;
    let orbs = orbitals(&b.action)?;
    let d = orbs
        .get(args.orbital)
        .ok_or_else(|| anyhow!("action has {} orbitals", orbs.len()))?;
    let r = if args.bruteforce {
        s_max_bruteforce(&b.action, d, args.s_cap, args.arc_budget)?
    } else {
        s_max_criterion(&b.action, d, args.s_cap)?
    };
    println!("{}  orbital {}  valency {}", b.label, d.id, d.valency);
    println!("s_max: {}", r.s_max);
    println!("method: {:?}", r.method);
    println!("arc path: {:?}", r.witness_arc_path);
    match r.divisibility_cap {
        Some(c) => println!("divisibility cap: {c}"),
        None => println!("divisibility cap: n/a (valency {})", d.valency),
    }
    if let Some(p) = &args.edges {
        d.write_edge_list(fs::File::create(p).with_context(|| format!("creating {}", p.display()))?)?;
    }
    write_json(&args.json, &serde_json::to_value(&r)?)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Verify(a) => run_verify(a),
        Command::Inspect { what } => match what {
            Inspect::Action(a) => inspect_action(a),
            Inspect::Orbitals(a) => inspect_orbitals(a),
            Inspect::Smax(a) => inspect_smax(a),
        }
        .map(|()| ExitCode::SUCCESS),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
