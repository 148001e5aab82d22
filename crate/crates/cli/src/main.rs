mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num_bigint::BigUint;
use popi_core::dihedral::{bruteforce_isomorphism, conjugation_isomorphism, decide_isomorphic};
use popi_core::green::{
    d_equals_l_compose_r, green_characterized, green_oracle_with, regular_flags_oracle, IdealComponents, Relation,
};
use popi_core::rank::{factor_into_top_rank, semigroup_rank, verify_certificate};
use popi_core::{cardinality_formula, enumerate, selftest, Error, PartialInjection, Point, RangeContext};
use serde_json::{json, Value};

use report::{Format, Report};

/// Enumerations above this size are skipped by `card`.
const CARD_ENUMERATION_LIMIT: u64 = 2_000_000;
const SELFTEST_MAX_N: usize = 7;

#[derive(Parser, Debug)]
#[command(name = "popi", version, about = "Orientation-preserving partial injections with restricted range")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Emit JSON
    #[arg(long, global = true, conflicts_with = "csv")]
    json: bool,
    /// Emit CSV
    #[arg(long, global = true)]
    csv: bool,
    /// Write the report to a file instead of stdout
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
struct RangeArgs {
    /// Chain size
    #[arg(long)]
    n: usize,
    /// Range as comma-separated points, e.g. 1,2,5
    #[arg(long, value_delimiter = ',', required = true)]
    y: Vec<usize>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// List every element of POPI_n(Y)
    Enumerate(RangeArgs),
    /// Compare the closed-form cardinality with the enumerated count
    Card {
        #[arg(long)]
        n: usize,
        #[arg(long, conflicts_with = "y", required_unless_present = "y")]
        r: Option<usize>,
        #[arg(long, value_delimiter = ',')]
        y: Option<Vec<usize>>,
    },
    /// Green's classes from the characterization
    Green {
        #[command(flatten)]
        range: RangeArgs,
        /// One of L, R, H, D, J (all when omitted)
        #[arg(long)]
        rel: Option<String>,
        /// Also compute the ideal-based partitions and compare
        #[arg(long)]
        check: bool,
    },
    /// Rank with a generating set and its deletion test
    Rank(RangeArgs),
    /// Decide whether POPI_n(Y) and POPI_n(Z) are isomorphic
    Iso {
        #[command(flatten)]
        range: RangeArgs,
        #[arg(long, value_delimiter = ',', required = true)]
        z: Vec<usize>,
        /// Confirm with the backtracking search
        #[arg(long)]
        oracle: bool,
    },
    /// Factor an element into top-rank elements
    Decompose {
        #[command(flatten)]
        range: RangeArgs,
        /// JSON pairs such as [[3,1]] or {"n":3,"pairs":[[3,1]]}
        #[arg(long)]
        element: String,
    },
    /// Cross-check closed forms against oracles
    Selftest {
        #[arg(long, default_value_t = 4)]
        max_n: usize,
    },
}

enum Failure {
    Usage(Error),
    Checks(Report),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Usage(e)
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            // help and version
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let msg = e.to_string();
            let body = msg.split("\n\nUsage:").next().unwrap_or("");
            let line = body.split_whitespace().collect::<Vec<_>>().join(" ");
            eprintln!("error: kind=usage msg={}", line.trim_start_matches("error: "));
            return ExitCode::from(2);
        }
    };
    let format = if cli.json {
        Format::Json
    } else if cli.csv {
        Format::Csv
    } else {
        Format::Text
    };
    let (report, code) = match run(&cli.command) {
        Ok(report) => (report, ExitCode::SUCCESS),
        Err(Failure::Checks(report)) => (report, ExitCode::from(1)),
        Err(Failure::Usage(e)) => {
            eprintln!("error: kind={} msg={e}", e.kind());
            return ExitCode::from(2);
        }
    };
    if let Err(msg) = emit(&report, format, cli.out.as_ref()) {
        eprintln!("error: kind=io msg={msg}");
        return ExitCode::from(1);
    }
    code
}

fn emit(report: &Report, format: Format, out: Option<&PathBuf>) -> Result<(), String> {
    let bytes = report.render(format)?;
    match out {
        Some(path) => std::fs::write(path, bytes).map_err(|e| format!("{}: {e}", path.display())),
        None => {
            use std::io::Write;
            std::io::stdout().write_all(&bytes).map_err(|e| e.to_string())
        }
    }
}

fn points(n: usize, raw: &[usize]) -> Result<Vec<Point>, Error> {
    raw.iter()
        .map(|&p| {
            if p == 0 || p > n {
                Err(Error::PointOutOfRange { point: p, n })
            } else {
                Ok(p as Point)
            }
        })
        .collect()
}

fn context(args: &RangeArgs) -> Result<RangeContext, Error> {
    RangeContext::new(args.n, &points(args.n, &args.y)?)
}

fn range_config(ctx: &RangeContext) -> Value {
    json!({ "n": ctx.n(), "y": ctx.points() })
}

fn run(command: &Command) -> Result<Report, Failure> {
    match command {
        Command::Enumerate(args) => {
            let ctx = context(args)?;
            let set = enumerate(&ctx);
            let mut report = Report::new("enumerate", range_config(&ctx));
            report.set("count", set.len());
            for (i, a) in set.iter().enumerate() {
                report.push(json!({
                    "index": i,
                    "rank": a.rank(),
                    "domain": a.domain(),
                    "image": a.image(),
                    "map": a.to_string(),
                }));
            }
            Ok(report)
        }
        Command::Card { n, r, y } => card(*n, *r, y.as_deref()),
        Command::Green { range, rel, check } => green(range, rel.as_deref(), *check),
        Command::Rank(args) => {
            let ctx = context(args)?;
            let cert = semigroup_rank(&ctx);
            let check = verify_certificate(&cert);
            let mut report = Report::new("rank", range_config(&ctx));
            report.set("claimed_rank", cert.claimed_rank);
            report.set("closure_ok", check.closure_ok);
            report.set("closure_size", check.closure_size);
            report.set("expected_size", check.expected_size);
            report.set("deletion_test", if check.deletion_all_shrink { "all-fail" } else { "some-generate" });
            report.set("no_single_generator", json!(check.no_single_generator));
            for (i, (g, size)) in cert.generating_set.iter().zip(&check.deletion_sizes).enumerate() {
                report.push(json!({
                    "index": i,
                    "generator": g.to_string(),
                    "domain": g.domain(),
                    "closure_without": size,
                }));
            }
            Ok(report)
        }
        Command::Iso { range, z, oracle } => iso(range, z, *oracle),
        Command::Decompose { range, element } => decompose(range, element),
        Command::Selftest { max_n } => {
            if *max_n == 0 || *max_n > SELFTEST_MAX_N {
                return Err(Error::BadParameters(format!("--max-n must be in 1..={SELFTEST_MAX_N}")).into());
            }
            let result = selftest::run(*max_n);
            let mut report = Report::new("selftest", json!({ "max_n": max_n }));
            report.set("passed", result.passed());
            report.set("checks", result.checks.len());
            for c in &result.checks {
                report.push(json!({
                    "name": c.name,
                    "n": c.n,
                    "passed": c.passed,
                    "cases": c.cases,
                    "failures": c.failures,
                }));
            }
            if result.passed() {
                Ok(report)
            } else {
                Err(Failure::Checks(report))
            }
        }
    }
}

fn card(n: usize, r: Option<usize>, y: Option<&[usize]>) -> Result<Report, Failure> {
    let (r, ctx) = match (r, y) {
        (_, Some(y)) => {
            let ctx = RangeContext::new(n, &points(n, y)?)?;
            (ctx.r(), ctx)
        }
        (Some(r), None) => {
            cardinality_formula(n, r)?;
            let pts: Vec<Point> = (1..=r as Point).collect();
            (r, RangeContext::new(n, &pts)?)
        }
        (None, None) => return Err(Error::BadParameters("one of --r or --y is required".into()).into()),
    };
    let formula = cardinality_formula(n, r)?;
    let mut report = Report::new("card", json!({ "n": n, "r": r, "y": ctx.points() }));
    report.set("formula", formula.to_string());
    if formula <= BigUint::from(CARD_ENUMERATION_LIMIT) {
        let count = enumerate(&ctx).len();
        report.set("enumerated", count);
        report.set("match", formula == BigUint::from(count));
    } else {
        report.set("enumerated", Value::Null);
        report.set("match", Value::Null);
    }
    Ok(report)
}

fn green(args: &RangeArgs, rel: Option<&str>, check: bool) -> Result<Report, Failure> {
    let ctx = context(args)?;
    let relations: Vec<Relation> = match rel {
        Some(s) => vec![s.parse()?],
        None => Relation::ALL.to_vec(),
    };
    let set = enumerate(&ctx);
    let mut report = Report::new(
        "green",
        json!({ "n": ctx.n(), "y": ctx.points(), "rel": rel.map(|_| relations[0].to_string()), "check": check }),
    );
    let oracle_parts = check.then(|| {
        let flags = regular_flags_oracle(&set);
        let comps = IdealComponents::new(&set);
        Relation::ALL.map(|r| green_oracle_with(&set, &comps, &flags, r))
    });
    for &relation in &relations {
        let part = green_characterized(&ctx, &set, relation);
        report.set(&format!("{relation}_classes"), part.len());
        if let Some(oracle) = &oracle_parts {
            let o = &oracle[Relation::ALL.iter().position(|&r| r == relation).expect("listed")];
            report.set(&format!("{relation}_agree"), part.same_classes(o));
        }
        for (c, (members, info)) in part.classes.iter().zip(&part.info).enumerate() {
            let maps: Vec<String> = members.iter().map(|&i| set.get(i).to_string()).collect();
            report.push(json!({
                "relation": relation.to_string(),
                "class": c,
                "size": info.size,
                "rank": info.rank,
                "regular": info.regular,
                "domain": info.domain,
                "image": info.image,
                "members": maps,
            }));
        }
    }
    if let Some(o) = &oracle_parts {
        let [l, r, _, d, j] = o;
        report.set("d_equals_j", d.same_classes(j));
        report.set("d_equals_l_compose_r", d_equals_l_compose_r(l, r, d));
    }
    Ok(report)
}

fn iso(args: &RangeArgs, z: &[usize], oracle: bool) -> Result<Report, Failure> {
    let ys = context(args)?;
    let zs = RangeContext::new(args.n, &points(args.n, z)?)?;
    let witness = decide_isomorphic(args.n, ys.range(), zs.range())?;
    let mut report =
        Report::new("iso", json!({ "n": args.n, "y": ys.points(), "z": zs.points(), "oracle": oracle }));
    report.set("verdict", witness.verdict);
    report.set("reason", serde_json::to_value(witness.reason).expect("serializable"));
    report.set("delta", witness.delta.map(|d| d.to_string()));
    if let Some(delta) = &witness.delta {
        let verified = conjugation_isomorphism(args.n, ys.range(), zs.range(), delta).is_ok();
        report.set("conjugation_verified", verified);
    }
    if oracle {
        let found = bruteforce_isomorphism(&enumerate(&ys), &enumerate(&zs));
        let found_iso = found.is_some();
        report.set("oracle", found_iso);
        report.set("agree", found_iso == witness.verdict);
        if let Some(found) = found {
            let phi = found.point_map.iter().map(|(a, b)| format!("{a}->{b}")).collect::<Vec<_>>().join(",");
            report.set("oracle_point_map", phi);
        }
    }
    Ok(report)
}

fn parse_element(n: usize, raw: &str) -> Result<PartialInjection, Error> {
    if let Ok(a) = serde_json::from_str::<PartialInjection>(raw) {
        if a.n() != n {
            return Err(Error::MismatchedChainSize { left: n, right: a.n() });
        }
        return Ok(a);
    }
    let pairs: Vec<(usize, usize)> =
        serde_json::from_str(raw).map_err(|e| Error::BadParameters(format!("--element: {e}")))?;
    let mut checked = Vec::with_capacity(pairs.len());
    for (x, y) in pairs {
        for p in [x, y] {
            if p == 0 || p > n {
                return Err(Error::PointOutOfRange { point: p, n });
            }
        }
        checked.push((x as Point, y as Point));
    }
    PartialInjection::new(n, &checked)
}

fn decompose(args: &RangeArgs, element: &str) -> Result<Report, Failure> {
    let ctx = context(args)?;
    let a = parse_element(ctx.n(), element)?;
    let f = factor_into_top_rank(&ctx, &a)?;
    let product = f.product();
    let mut report = Report::new(
        "decompose",
        json!({ "n": ctx.n(), "y": ctx.points(), "element": a }),
    );
    report.set("element", a.to_string());
    report.set("rank", a.rank());
    report.set("word", f.word.iter().map(ToString::to_string).collect::<Vec<_>>());
    report.set("product_ok", product == Some(a));
    for (i, s) in f.steps.iter().enumerate() {
        let d = &s.decomposition;
        report.push(json!({
            "step": i,
            "kind": d.step.to_string(),
            "target": s.target.to_string(),
            "beta": d.beta.to_string(),
            "gamma": d.gamma.to_string(),
            "shift_exponent": d.shift_exponent,
            "identity_ok": d.beta.compose(&d.gamma).ok() == Some(s.target),
        }));
    }
    if product == Some(a) {
        Ok(report)
    } else {
        Err(Failure::Checks(report))
    }
}
