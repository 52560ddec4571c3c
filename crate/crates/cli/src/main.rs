mod input;
mod render;
mod scenarios;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use vlab::constructions::{kaloujnine_krasner, regular_wreath};
use vlab::engine::{dominion_bounds, epi_decide, epi_decide_with, find_wreath_escape, Outcome, SCHEMA};
use vlab::power_series::{law_failure_witness, magnus_image};
use vlab::variety::{member_of_variety, q_verbal, Context, FixtureSet};
use vlab::{Budget, Error, Permutation, PermutationGroup};

use input::Resolver;

const GRAMMAR: &str = "\
GROUPS
  Cn, Sn, An, Dn (order 2n), V4, Q8, 1     named families
  X wr Y, X x Y                             regular wreath / direct products
  any name in the bundled or --catalog catalog
  <(0 1 2); (0 1)>                          generators in cycle notation, points from 0
  <(0 1 2); (0 1)>@5                        ... with an explicit degree
  A named subgroup is taken in its natural position when that lies inside
  the group, otherwise through the first embedding found.

VARIETIES
  A | Nc:c | Sl:n | var:NAME | laws:{w1;w2;...} | prod(V1,V2,...)

WORDS
  x1 x2^-1 [x1,x2] [x1,x2,x3] (x1 x2)^3 ...   variables x1, x2, ...

EXIT STATUS
  0 success, 2 Unknown or budget exhausted, 1 error";

#[derive(Parser)]
#[command(name = "vlab", version, about = "Dominions, epimorphisms and varieties of finite permutation groups", after_long_help = GRAMMAR)]
struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,
    /// Largest group enumerated element by element.
    #[arg(long, global = true, default_value_t = Budget::default().element_cap)]
    element_cap: u128,
    /// Largest |G|·|C| for homomorphism enumeration.
    #[arg(long, global = true, default_value_t = Budget::default().hom_cap)]
    hom_cap: u128,
    /// Largest top group accepted in wreath constructions.
    #[arg(long, global = true, default_value_t = Budget::default().wreath_top_cap)]
    wreath_top_cap: u128,
    /// Extra fixture file, added to the bundled fixtures.
    #[arg(long, global = true)]
    fixtures: Option<PathBuf>,
    /// Catalog file whose names take precedence over the bundled ones.
    #[arg(long, global = true, env = "VLAB_CATALOG")]
    catalog: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Order, degree and generators of a group.
    Order { group: String },
    /// The verbal subgroup V(G) and whether G lies in V.
    Verbal {
        #[arg(long)]
        group: String,
        #[arg(long)]
        variety: String,
    },
    /// The regular wreath product A wr B.
    Wreath { bottom: String, top: String },
    /// Embeds E into N wr (E/N) for a normal subgroup N.
    KkEmbed {
        #[arg(long)]
        group: String,
        #[arg(long)]
        normal: String,
    },
    /// Decides whether H is epimorphically embedded in G within a variety.
    Epi {
        #[arg(long)]
        group: String,
        #[arg(long)]
        sub: String,
        #[arg(long)]
        variety: String,
        /// Targets for the separating-pair search (default: G, and S for var:S).
        #[arg(long = "target")]
        targets: Vec<String>,
    },
    /// Lower and upper bounds for the dominion of H in G.
    Bounds {
        #[arg(long)]
        group: String,
        #[arg(long)]
        sub: String,
        #[arg(long)]
        variety: String,
    },
    /// Law-failure witness for a word in the units of a truncated algebra.
    Magnus {
        #[arg(long)]
        word: String,
        #[arg(long, default_value_t = 2)]
        prime: u32,
        /// Also report the image truncated at this degree.
        #[arg(long)]
        degree: Option<u32>,
    },
    /// First ladder group G in V with BASE wr G outside V.
    Escape {
        #[arg(long)]
        base: String,
        #[arg(long)]
        variety: String,
    },
    /// Runs a bundled scenario; `list` names them, `all` runs every one.
    Scenario { name: String },
}

/// What a command produced, and how it should exit.
enum Status {
    Done,
    Unknown,
    Mismatch,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok((report, status)) => {
            match cli.format {
                Format::Json => println!("{}", serde_json::to_string_pretty(&report).expect("report serializes")),
                Format::Text => print!("{}", render::text(&report)),
            }
            match status {
                Status::Done => ExitCode::SUCCESS,
                Status::Unknown => ExitCode::from(2),
                Status::Mismatch => ExitCode::from(1),
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn context(cli: &Cli) -> Result<Context> {
    let mut fixtures = FixtureSet::bundled();
    if let Some(path) = &cli.fixtures {
        for f in FixtureSet::load(path)?.iter() {
            fixtures.push(f.clone());
        }
    }
    let budget = Budget {
        element_cap: cli.element_cap,
        hom_cap: cli.hom_cap,
        wreath_top_cap: cli.wreath_top_cap,
    };
    Ok(Context::new(fixtures, budget))
}

fn envelope(command: &str, ctx: &Context, result: Value) -> Value {
    json!({
        "schema": SCHEMA,
        "command": command,
        "budgets": ctx.budget,
        "result": result,
    })
}

fn cycles(ps: &[Permutation]) -> Vec<String> {
    ps.iter().map(Permutation::to_string).collect()
}

fn describe(g: &PermutationGroup) -> Value {
    json!({
        "order": g.order().to_string(),
        "degree": g.degree(),
        "generators": cycles(g.generators()),
    })
}

/// Budget and undecidability errors become `Unknown` reports.
fn unknown_on_limits(command: &str, ctx: &Context, r: vlab::Result<Value>) -> Result<(Value, Status)> {
    match r {
        Ok(v) => Ok((envelope(command, ctx, v), Status::Done)),
        Err(e @ (Error::BudgetExceeded { .. } | Error::Undecidable(_))) => Ok((
            envelope(command, ctx, json!({"outcome": "Unknown", "reason": e.to_string()})),
            Status::Unknown,
        )),
        Err(e) => Err(e.into()),
    }
}

fn run(cli: &Cli) -> Result<(Value, Status)> {
    let ctx = context(cli)?;
    let names = Resolver::new(cli.catalog.as_deref())?;
    match &cli.command {
        Command::Order { group } => {
            let g = names.group("group", group)?;
            Ok((envelope("order", &ctx, describe(&g)), Status::Done))
        }
        Command::Verbal { group, variety } => {
            let g = names.group("--group", group)?;
            let desc = input::descriptor("--variety", variety)?;
            let r = q_verbal(&g, &desc, &ctx).map(|v| {
                json!({
                    "group": describe(&g),
                    "variety": desc,
                    "verbal": describe(&v),
                    "member": member_of_variety(&g, &desc, &ctx),
                })
            });
            unknown_on_limits("verbal", &ctx, r)
        }
        Command::Wreath { bottom, top } => {
            let a = names.group("bottom", bottom)?;
            let b = names.group("top", top)?;
            let r = regular_wreath(&a, &b, &ctx.budget).map(|w| {
                json!({
                    "bottom_order": a.order().to_string(),
                    "top_order": b.order().to_string(),
                    "blocks": w.blocks(),
                    "block_size": w.block_size(),
                    "product": describe(&w.product),
                })
            });
            unknown_on_limits("wreath", &ctx, r)
        }
        Command::KkEmbed { group, normal } => {
            let e = names.group("--group", group)?;
            let a = names.subgroup("--normal", normal, &e, ctx.budget.hom_cap)?;
            let r = kaloujnine_krasner(&e, &a, &ctx.budget).map(|k| {
                let image = k.hom.image();
                json!({
                    "group_order": e.order().to_string(),
                    "normal_order": a.order().to_string(),
                    "wreath_order": k.wreath.product.order().to_string(),
                    "homomorphism": k.hom.verify(),
                    "injective": k.hom.is_injective(),
                    "image_order": image.order().to_string(),
                    "image_in_wreath": image.is_subgroup_of(&k.wreath.product),
                    "images": cycles(k.hom.generator_images()),
                    "transversal": cycles(&k.transversal),
                })
            });
            unknown_on_limits("kk-embed", &ctx, r)
        }
        Command::Epi {
            group,
            sub,
            variety,
            targets,
        } => {
            let g = names.group("--group", group)?;
            let h = names.subgroup("--sub", sub, &g, ctx.budget.hom_cap)?;
            let desc = input::descriptor("--variety", variety)?;
            let verdict = if targets.is_empty() {
                epi_decide(&g, &h, &desc, &ctx)
            } else {
                let ts = targets
                    .iter()
                    .map(|t| names.group("--target", t))
                    .collect::<Result<Vec<_>>>()?;
                epi_decide_with(&g, &h, &desc, &ctx, &ts)
            };
            let verified = verdict.verify(&ctx)?;
            if !verified {
                bail!("internal error: the certificate does not re-verify");
            }
            let status = if verdict.outcome == Outcome::Unknown { Status::Unknown } else { Status::Done };
            let mut result = serde_json::to_value(&verdict)?;
            result["verified"] = json!(verified);
            Ok((envelope("epi", &ctx, result), status))
        }
        Command::Bounds { group, sub, variety } => {
            let g = names.group("--group", group)?;
            let h = names.subgroup("--sub", sub, &g, ctx.budget.hom_cap)?;
            let desc = input::descriptor("--variety", variety)?;
            let r = dominion_bounds(&g, &h, &desc, &ctx).and_then(|b| {
                let mut v = serde_json::to_value(&b).map_err(|e| Error::Invalid(e.to_string()))?;
                v["group_order"] = json!(g.order().to_string());
                v["sub_order"] = json!(h.order().to_string());
                v["lower_order"] = json!(b.lower.order().to_string());
                v["upper_order"] = json!(b.upper.order().to_string());
                v["mckay_order"] = json!(b.mckay.order().to_string());
                Ok(v)
            });
            unknown_on_limits("bounds", &ctx, r)
        }
        Command::Magnus { word, prime, degree } => {
            let w = input::word("--word", word)?;
            let r = law_failure_witness(&w, *prime).and_then(|x| {
                let mut v = serde_json::to_value(&x).map_err(|e| Error::Invalid(e.to_string()))?;
                v["verified"] = json!(x.verified());
                if let Some(d) = degree {
                    let image = magnus_image(&w, *prime, *d)?;
                    let terms: Vec<String> = image
                        .terms()
                        .iter()
                        .map(|(m, c)| format!("{c}*{}", vlab::power_series::monomial_text(m)))
                        .collect();
                    v["image"] = json!({"degree": d, "terms": terms});
                }
                Ok(v)
            });
            unknown_on_limits("magnus", &ctx, r)
        }
        Command::Escape { base, variety } => {
            let a = names.group("--base", base)?;
            let desc = input::descriptor("--variety", variety)?;
            let r = find_wreath_escape(&a, base.trim(), &desc, &ctx)
                .and_then(|x| serde_json::to_value(&x).map_err(|e| Error::Invalid(e.to_string())));
            unknown_on_limits("escape", &ctx, r)
        }
        Command::Scenario { name } => scenario(name, &ctx),
    }
}

fn scenario(name: &str, ctx: &Context) -> Result<(Value, Status)> {
    if name == "list" {
        let list: Vec<Value> = scenarios::all()
            .iter()
            .map(|s| json!({"name": s.name, "description": s.description, "expected": s.expected}))
            .collect();
        return Ok((envelope("scenario", ctx, json!({ "scenarios": list })), Status::Done));
    }
    let chosen = if name == "all" {
        scenarios::all()
    } else {
        match scenarios::find(name) {
            Some(s) => vec![s],
            None => bail!("unknown scenario '{name}'; try `vlab scenario list`"),
        }
    };
    let mut reports = Vec::new();
    let mut all_match = true;
    for s in &chosen {
        let (observed, details) = s.run(ctx)?;
        let matches = observed == s.expected;
        all_match &= matches;
        reports.push(json!({
            "scenario": s.name,
            "description": s.description,
            "expected": s.expected,
            "observed": observed,
            "matches": matches,
            "details": details,
        }));
    }
    let result = if reports.len() == 1 { reports.pop().unwrap() } else { json!({ "scenarios": reports }) };
    let status = if all_match { Status::Done } else { Status::Mismatch };
    Ok((envelope("scenario", ctx, result), status))
}
