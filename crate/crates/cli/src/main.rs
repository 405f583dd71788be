mod groups;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use serde_json::{json, Value};

use nilhoro::boundary::{act, eval_point, limit_of_standard_path, verify_convergence, BusemannPoint, Convergence, StandardPath};
use nilhoro::facet::{group_polytope, Abelianized, GroupPolytope};
use nilhoro::metric::h3_norm_with_case;
use nilhoro::oracle::{geodesic_words_to, h3_window, is_geodesic_word, oracle_dist, OracleDistance};
use nilhoro::{
    evaluate_word, run_suite, Budget, Error, Group, H3Element, H3FormulaMetric, Heisenberg, Suite,
    SuiteConfig, Word, ZdGroup,
};

use groups::{big_json, group_name, CliGroup, GroupId};

#[derive(Parser)]
#[command(name = "nilhoro", version, about = "Exact word metrics and Busemann points for nilpotent groups")]
struct Cli {
    /// Pretty-print JSON output.
    #[arg(long, global = true)]
    pretty: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Word-metric distance between two elements.
    Dist(DistArgs),
    /// Every element of a ball with its distance from the identity.
    Ball(BallArgs),
    /// Check a word for geodesicity, or list the geodesic words to an element.
    Geodesic(GeodesicArgs),
    /// Busemann points of the Heisenberg group.
    Horo {
        #[command(subcommand)]
        command: HoroCommand,
    },
    /// The polytope spanned by the projected generators, with facet alphabets.
    Polytope(PolytopeArgs),
    /// Run a named verification suite.
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    /// Closed form for h3, BFS otherwise.
    Auto,
    Formula,
    Bfs,
}

#[derive(Args)]
struct DistArgs {
    #[arg(long, value_enum, default_value = "h3")]
    group: GroupId,
    #[arg(long, allow_hyphen_values = true)]
    element: String,
    /// Start point; the identity if omitted.
    #[arg(long, allow_hyphen_values = true)]
    from: Option<String>,
    #[arg(long, value_enum, default_value = "auto")]
    method: Method,
    /// BFS radius; defaults to the group's budget.
    #[arg(long)]
    radius: Option<u32>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Args)]
struct BallArgs {
    #[arg(long, value_enum, default_value = "h3")]
    group: GroupId,
    #[arg(long, default_value_t = 3)]
    radius: u32,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

#[derive(Args)]
struct GeodesicArgs {
    #[arg(long, value_enum, default_value = "h3")]
    group: GroupId,
    /// A word such as `abAB`.
    #[arg(long, conflicts_with = "element")]
    word: Option<String>,
    /// Only report whether `--word` is geodesic.
    #[arg(long, requires = "word")]
    check: bool,
    #[arg(long, allow_hyphen_values = true)]
    element: Option<String>,
    /// Most geodesic words to list.
    #[arg(long, default_value_t = 16)]
    cap: usize,
    /// BFS budget; defaults to the group's.
    #[arg(long)]
    radius: Option<u32>,
}

#[derive(Subcommand)]
enum HoroCommand {
    /// Value of a Busemann function at an element.
    Eval {
        #[arg(long)]
        point: String,
        #[arg(long, allow_hyphen_values = true)]
        element: String,
    },
    /// Image of a point under the action of an element or word.
    Act {
        #[arg(long)]
        point: String,
        #[arg(long, conflicts_with = "element", required_unless_present = "element")]
        word: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        element: Option<String>,
    },
    /// Limit point of a standard path, optionally confirmed on a window.
    Limit {
        /// `gamma:+,m,n`, `lambda:-,m,l`, `two:<period>` or `two:<prefix>,<period>`.
        #[arg(long)]
        path: String,
        #[arg(long)]
        verify: bool,
        #[arg(long, default_value_t = 3)]
        window: u32,
        #[arg(long, default_value_t = 40)]
        t_max: u64,
    },
}

#[derive(Args)]
struct PolytopeArgs {
    #[arg(long, value_enum, default_value = "h3")]
    group: GroupId,
    /// Custom generators for `Z^d` as `x,y;x,y;...`, closed under negation.
    #[arg(long, allow_hyphen_values = true)]
    generators: Option<String>,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, value_parser = parse_suite)]
    suite: Suite,
    #[arg(long)]
    radius: Option<u32>,
    #[arg(long)]
    window: Option<u32>,
    #[arg(long)]
    max_len: Option<usize>,
    #[arg(long)]
    t_max: Option<u64>,
    #[arg(long)]
    ex1_radius: Option<u32>,
    #[arg(long)]
    eta_max: Option<u32>,
    /// Include wall time in the report.
    #[arg(long)]
    timing: bool,
}

fn parse_suite(s: &str) -> Result<Suite, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

/// Outcome of a command: what to print and whether it counts as success.
struct Output {
    value: Value,
    /// Printed verbatim instead of `value` when set.
    text: Option<String>,
    ok: bool,
}

impl Output {
    fn ok(value: Value) -> Self {
        Output::with_status(value, true)
    }

    fn with_status(value: Value, ok: bool) -> Self {
        Output { value, text: None, ok }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(out) => {
            let text = match out.text {
                Some(t) => t,
                None if cli.pretty => serde_json::to_string_pretty(&out.value).expect("JSON values always serialise"),
                None => serde_json::to_string(&out.value).expect("JSON values always serialise"),
            };
            println!("{text}");
            if out.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::InvalidLetter(_)
        | Error::UnknownLetter { .. }
        | Error::Parse { .. }
        | Error::InvalidInput(_)
        | Error::NonSymmetricGenerators(_)
        | Error::UnsupportedDimension(_)
        | Error::OverlappingPositions(..)
        | Error::PositionOutOfRange { .. }
        | Error::NegativeInput(_) => 2,
        _ => 1,
    }
}

fn run(command: Command) -> nilhoro::Result<Output> {
    match command {
        Command::Dist(args) => dist(args),
        Command::Ball(args) => ball(args),
        Command::Geodesic(args) => geodesic(args),
        Command::Horo { command } => horo(command),
        Command::Polytope(args) => polytope(args),
        Command::Verify(args) => verify(args),
    }
}

fn dist(args: DistArgs) -> nilhoro::Result<Output> {
    let use_formula = match args.method {
        Method::Auto => args.group == GroupId::H3,
        Method::Formula => {
            if args.group != GroupId::H3 {
                return Err(Error::InvalidInput("the closed-form metric exists only for h3".into()));
            }
            true
        }
        Method::Bfs => false,
    };
    if use_formula {
        let h3 = Heisenberg::new();
        let to = h3.parse(&args.element)?;
        let from = args.from.as_deref().map(|s| h3.parse(s)).transpose()?;
        let rel = match &from {
            Some(f) => h3.mul(&h3.inv(f), &to),
            None => to.clone(),
        };
        let (d, case) = h3_norm_with_case(&rel);
        return Ok(Output::ok(json!({
            "group": "h3",
            "from": from.map(|f| h3.to_json(&f)),
            "element": h3.to_json(&to),
            "d": big_json(&d),
            "method": "formula",
            "case": case.as_str(),
        })));
    }
    with_group!(args.group, |g| dist_bfs(&g, args.group, &args))
}

fn dist_bfs<G: CliGroup>(group: &G, id: GroupId, args: &DistArgs) -> nilhoro::Result<Output> {
    let to = group.parse(&args.element)?;
    let from = args.from.as_deref().map(|s| group.parse(s)).transpose()?;
    let rel = match &from {
        Some(f) => group.mul(&group.inv(f), &to),
        None => to.clone(),
    };
    let radius = args.radius.unwrap_or_else(|| group.default_radius());
    let d = oracle_dist(group, &rel, radius, Budget::new(radius))?;
    let (d, ok) = match d {
        OracleDistance::Exact(d) => (json!(d), true),
        OracleDistance::BeyondRadius => (Value::Null, false),
    };
    Ok(Output::with_status(
        json!({
            "group": group_name(id),
            "from": from.map(|f| group.to_json(&f)),
            "element": group.to_json(&to),
            "d": d,
            "method": "bfs",
            "radius": radius,
        }),
        ok,
    ))
}

fn ball(args: BallArgs) -> nilhoro::Result<Output> {
    with_group!(args.group, |g| ball_for(&g, args.group, &args))
}

fn ball_for<G: CliGroup>(group: &G, id: GroupId, args: &BallArgs) -> nilhoro::Result<Output> {
    let ball = nilhoro::bfs_ball(group, args.radius, Budget::new(args.radius.max(group.default_radius())))?;
    match args.format {
        Format::Json => {
            let elements: Vec<Value> = ball
                .iter()
                .map(|(e, d)| json!({"element": group.to_json(e), "d": d}))
                .collect();
            Ok(Output::ok(json!({
                "group": group_name(id),
                "radius": args.radius,
                "sizes": ball.cumulative_sizes(),
                "elements": elements,
            })))
        }
        Format::Csv => {
            let mut header = group.csv_header();
            header.push("d".into());
            let mut text = header.join(",");
            for (e, d) in ball.iter() {
                let mut row = group.csv_fields(e);
                row.push(d.to_string());
                text.push('\n');
                text.push_str(&row.join(","));
            }
            Ok(Output {
                value: Value::Null,
                text: Some(text),
                ok: true,
            })
        }
    }
}

fn geodesic(args: GeodesicArgs) -> nilhoro::Result<Output> {
    with_group!(args.group, |g| geodesic_for(&g, args.group, &args))
}

fn geodesic_for<G: CliGroup>(group: &G, id: GroupId, args: &GeodesicArgs) -> nilhoro::Result<Output> {
    let radius = args.radius.unwrap_or_else(|| group.default_radius());
    let budget = Budget::new(radius);
    let target = match (&args.word, &args.element) {
        (Some(w), _) => {
            let word: Word = w.parse()?;
            if args.check {
                let geo = is_geodesic_word(group, &word, budget)?;
                return Ok(Output::ok(json!({
                    "group": group_name(id),
                    "word": word.to_string(),
                    "geodesic": geo,
                })));
            }
            evaluate_word(group, &word)?
        }
        (None, Some(e)) => group.parse(e)?,
        (None, None) => return Err(Error::InvalidInput("pass --word or --element".into())),
    };
    let mut words = geodesic_words_to(group, &target, args.cap.saturating_add(1), budget)?;
    let truncated = words.len() > args.cap;
    words.truncate(args.cap);
    let d = words.first().map(Word::len);
    Ok(Output::ok(json!({
        "group": group_name(id),
        "element": group.to_json(&target),
        "d": d,
        "words": words.iter().map(Word::to_string).collect::<Vec<_>>(),
        "truncated": truncated,
    })))
}

fn horo(command: HoroCommand) -> nilhoro::Result<Output> {
    let h3 = Heisenberg::new();
    match command {
        HoroCommand::Eval { point, element } => {
            let p: BusemannPoint = point.parse()?;
            let g = h3.parse(&element)?;
            Ok(Output::ok(json!({
                "point": p.to_string(),
                "element": h3.to_json(&g),
                "value": big_json(&eval_point(&p, &g)),
            })))
        }
        HoroCommand::Act { point, word, element } => {
            let p: BusemannPoint = point.parse()?;
            let g: H3Element = match (word, element) {
                (Some(w), _) => evaluate_word(&h3, &w.parse()?)?,
                (None, Some(e)) => h3.parse(&e)?,
                (None, None) => return Err(Error::InvalidInput("pass --word or --element".into())),
            };
            Ok(Output::ok(json!({
                "point": p.to_string(),
                "by": h3.to_json(&g),
                "image": act(&g, &p).to_string(),
            })))
        }
        HoroCommand::Limit {
            path,
            verify,
            window,
            t_max,
        } => {
            let path: StandardPath = path.parse()?;
            let limit = limit_of_standard_path(&path);
            let mut value = json!({
                "path": path.to_string(),
                "limit": limit.to_string(),
            });
            let mut ok = true;
            if verify {
                let conv = verify_convergence(&path, &limit, &h3_window(window), t_max, &H3FormulaMetric)?;
                ok = conv.is_stabilised();
                value["window"] = json!(window);
                value["convergence"] = convergence_json(&conv);
            }
            Ok(Output::with_status(value, ok))
        }
    }
}

fn convergence_json(c: &Convergence) -> Value {
    serde_json::to_value(c).expect("plain enum")
}

fn polytope(args: PolytopeArgs) -> nilhoro::Result<Output> {
    if let Some(spec) = &args.generators {
        let gens = parse_generators(spec)?;
        let dim = gens.first().map_or(0, Vec::len);
        let group = ZdGroup::new(dim, &gens)?;
        return polytope_for(&group, group.name());
    }
    with_group!(args.group, |g| polytope_for(&g, group_name(args.group)))
}

fn parse_generators(spec: &str) -> nilhoro::Result<Vec<Vec<i64>>> {
    spec.split(';')
        .map(|v| {
            v.split(',')
                .map(|c| c.trim().parse::<i64>().map_err(|_| Error::InvalidInput(format!("bad generator {v}"))))
                .collect()
        })
        .collect()
}

fn polytope_for<G: Abelianized>(group: &G, name: &str) -> nilhoro::Result<Output> {
    let GroupPolytope { polytope, alphabets } = group_polytope(group)?;
    let point = |p: &Vec<BigInt>| p.iter().map(big_json).collect::<Vec<_>>();
    let facets: Vec<Value> = polytope
        .facets
        .iter()
        .zip(&alphabets)
        .map(|(f, v)| {
            json!({
                "functional": f.functional.iter().map(|q| json!([big_json(q.numer()), big_json(q.denom())])).collect::<Vec<_>>(),
                "alphabet": v.iter().map(|l| l.to_char()).collect::<String>(),
                "vertices": f.vertices.iter().map(point).collect::<Vec<_>>(),
            })
        })
        .collect();
    Ok(Output::ok(json!({
        "group": name,
        "dim": polytope.dim,
        "vertices": polytope.vertices.iter().map(point).collect::<Vec<_>>(),
        "facets": facets,
    })))
}

fn verify(args: VerifyArgs) -> nilhoro::Result<Output> {
    let d = SuiteConfig::default();
    let config = SuiteConfig {
        radius: args.radius.unwrap_or(d.radius),
        window: args.window.unwrap_or(d.window),
        max_len: args.max_len.unwrap_or(d.max_len),
        t_max: args.t_max.unwrap_or(d.t_max),
        ex1_radius: args.ex1_radius.unwrap_or(d.ex1_radius),
        eta_max: args.eta_max.unwrap_or(d.eta_max),
        timing: args.timing,
    };
    let report = run_suite(args.suite, &config);
    Ok(Output::with_status(serde_json::to_value(&report).expect("plain struct"), report.pass))
}
