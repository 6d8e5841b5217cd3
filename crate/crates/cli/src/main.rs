use std::fs;
use std::io::{self, Read};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use lefschetz::verify::Options;
use lefschetz_cli::{diagnostic, parse_failure, parse_problem, parse_problem_value, run, run_grid, Format, Outcome, EXIT_INVALID};

/// Exact equivariant Lefschetz numbers of linear torus actions on projective space.
#[derive(Parser, Debug)]
#[command(name = "lefschetz", version)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Alternating trace on cohomology, from monomial bases
    Direct(ProblemArgs),
    /// Sum of fixed-component contributions
    Localize(ProblemArgs),
    /// Point formula (distinct weights only)
    Points(ProblemArgs),
    /// Two-stage resummation of the bifiltration traces
    Biseries(ProblemArgs),
    /// One-sided filtration traces (purely non-hyperbolic actions)
    Filtration(ProblemArgs),
    /// Truncated Čech complex oracle
    Cech(ProblemArgs),
    /// Every route, compared
    Verify(VerifyArgs),
    /// Alternating fixed-part trace over a sequence of bundles
    Defect(DefectArgs),
    /// Run a problem described by a JSON file ("-" reads stdin)
    Run { file: String },
}

#[derive(Args, Debug)]
struct ProblemArgs {
    /// Dimension N of ℙᴺ
    #[arg(long)]
    n: Option<i64>,
    /// Comma-separated weights a₀,…,a_N
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    weights: Vec<i64>,
    /// Bundle terms as inline JSON or @file, e.g. '[{"l":1,"c":0,"mult":1}]'
    #[arg(long)]
    bundle: Option<String>,
    #[arg(long)]
    p_max: Option<i64>,
    #[arg(long)]
    q_max: Option<i64>,
    #[arg(long)]
    trunc: Option<i64>,
    /// Order of the boundary expansions attached to the report
    #[arg(long)]
    order: Option<i64>,
    #[arg(long, value_enum, default_value_t = FormatArg::Json)]
    format: FormatArg,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[command(flatten)]
    problem: ProblemArgs,
    /// Run the built-in acceptance grid instead of a single problem
    #[arg(long)]
    grid: bool,
}

#[derive(Args, Debug)]
struct DefectArgs {
    #[command(flatten)]
    problem: ProblemArgs,
    /// List of bundles as inline JSON or @file; defaults to the Euler sequence
    #[arg(long)]
    sequence: Option<String>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FormatArg {
    Json,
    Text,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Json => Format::Json,
            FormatArg::Text => Format::Text,
        }
    }
}

fn read_source(arg: &str) -> io::Result<String> {
    match arg.strip_prefix('@') {
        Some(path) => fs::read_to_string(path),
        None => Ok(arg.to_string()),
    }
}

fn json_arg(field: &str, arg: &str) -> Result<Value, Outcome> {
    let text = read_source(arg).map_err(|e| diagnostic("invalid-input", &format!("{field}: {e}"), None))?;
    serde_json::from_str(&text).map_err(|e| {
        diagnostic("invalid-input", &format!("malformed JSON: {e}"), Some(("field", Value::String(field.into()))))
    })
}

fn problem_value(command: &str, a: &ProblemArgs, sequence: Option<&str>) -> Result<Value, Outcome> {
    let mut obj = Map::new();
    obj.insert("command".into(), json!(command));
    if let Some(n) = a.n {
        obj.insert("n".into(), json!(n));
    }
    if !a.weights.is_empty() {
        obj.insert("weights".into(), json!(a.weights));
    }
    if let Some(b) = &a.bundle {
        obj.insert("bundle".into(), json_arg("bundle", b)?);
    }
    if let Some(s) = sequence {
        obj.insert("sequence".into(), json_arg("sequence", s)?);
    }
    for (key, v) in [("p_max", a.p_max), ("q_max", a.q_max), ("trunc", a.trunc), ("order", a.order)] {
        if let Some(v) = v {
            obj.insert(key.into(), json!(v));
        }
    }
    Ok(Value::Object(obj))
}

fn execute(cli: Cli) -> (Outcome, Format) {
    let (name, args, sequence) = match &cli.command {
        Cmd::Run { file } => {
            let text = if file == "-" {
                let mut s = String::new();
                io::stdin().read_to_string(&mut s).map(|_| s)
            } else {
                fs::read_to_string(file)
            };
            return match text {
                Err(e) => (diagnostic("invalid-input", &format!("{file}: {e}"), None), Format::Json),
                Ok(text) => match parse_problem(&text) {
                    Ok(p) => (run(&p), p.format),
                    Err(e) => (parse_failure(&e), Format::Json),
                },
            };
        }
        Cmd::Verify(v) if v.grid => {
            let a = &v.problem;
            let mut opts = Options::default();
            let check = |name: &str, v: Option<i64>, lo: i64, hi: i64| match v {
                Some(x) if !(lo..=hi).contains(&x) => Err(diagnostic(
                    "invalid-input",
                    &format!("must lie in [{lo}, {hi}] (got {x})"),
                    Some(("field", Value::String(name.into()))),
                )),
                _ => Ok(v),
            };
            let parsed = (|| {
                Ok::<_, Outcome>((
                    check("p_max", a.p_max, 1, 64)?,
                    check("q_max", a.q_max, 1, 64)?,
                    check("trunc", a.trunc, 1, 32)?,
                ))
            })();
            return match parsed {
                Err(o) => (o, a.format.into()),
                Ok((p, q, t)) => {
                    opts.p_max = p.map_or(opts.p_max, |x| x as usize);
                    opts.q_max = q.map_or(opts.q_max, |x| x as usize);
                    opts.trunc = t.unwrap_or(opts.trunc);
                    (run_grid(opts), a.format.into())
                }
            };
        }
        Cmd::Direct(a) => ("direct", a, None),
        Cmd::Localize(a) => ("localize", a, None),
        Cmd::Points(a) => ("points", a, None),
        Cmd::Biseries(a) => ("biseries", a, None),
        Cmd::Filtration(a) => ("filtration", a, None),
        Cmd::Cech(a) => ("cech", a, None),
        Cmd::Verify(v) => ("verify", &v.problem, None),
        Cmd::Defect(d) => ("defect", &d.problem, d.sequence.as_deref()),
    };
    let format = args.format.into();
    let outcome = match problem_value(name, args, sequence) {
        Err(o) => o,
        Ok(v) => match parse_problem_value(&v) {
            Ok(p) => run(&p),
            Err(e) => parse_failure(&e),
        },
    };
    (outcome, format)
}

fn main() -> ExitCode {
    let (outcome, format) = execute(Cli::parse());
    let text = outcome.render(format);
    if outcome.exit_code == EXIT_INVALID {
        eprint!("{text}");
    } else {
        print!("{text}");
    }
    ExitCode::from(outcome.exit_code as u8)
}
