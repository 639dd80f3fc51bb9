use std::io::Write as _;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crossint::arith::{format_rational, parse_rational};
use crossint::constructions::{
    a_family_measure, a_family_uniform, b_family_measure, b_family_uniform, star_measure, star_uniform,
};
use crossint::family::{parse_text, shadow, write_text, ParsedFamily};
use crossint::oracle::{
    conjecture_scan, max_product_cascade_with, max_product_enumeration, measure_oracle, OracleResult,
};
use crossint::regions::{
    c1, c1_value, c2, c2_value, claim_conditions, curve_samples, delta_prime_values, i0, in_delta, in_delta_prime,
    in_omega, write_csv, ClaimKind, CurveKind, CurveSpec, RegionPoint,
};
use crossint::report::{envelope, OutputFormat, RunConfig};
use crossint::Error;

const EXIT_FAIL: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_CAPACITY: u8 = 3;

#[derive(Parser)]
#[command(
    name = "crossint",
    version,
    about = "Maximum products of cross-intersecting families"
)]
struct Cli {
    #[command(flatten)]
    global: GlobalOpts,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct GlobalOpts {
    /// Curves checked explicitly before the tail bound takes over.
    #[arg(long, global = true, default_value_t = 64)]
    j_cap: usize,
    #[arg(long, global = true, default_value_t = 1000)]
    i_max: usize,
    /// Largest C(n,k) the cascade sweep will walk.
    #[arg(long, global = true, default_value_t = 100_000_000)]
    sweep_budget: u64,
    #[arg(long, global = true, value_enum)]
    output: Option<Format>,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Fill in elapsed_ms (makes output run-dependent).
    #[arg(long, global = true)]
    timing: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Exact M(n,k,l).
    Mnkl {
        n: usize,
        k: usize,
        l: usize,
        #[arg(long, value_enum, default_value = "cascade")]
        method: MethodArg,
    },
    /// Boundary curves sampled over an alpha grid.
    Region {
        #[arg(long, value_enum)]
        what: What,
        #[arg(long, default_value_t = 100)]
        grid: usize,
        #[arg(long, num_args = 2, value_names = ["LO", "HI"], default_values_t = [0.01, 0.49])]
        alpha_range: Vec<f64>,
        /// Number of e_j curves for `--what ej`.
        #[arg(long, default_value_t = 6)]
        curves: usize,
    },
    /// Evaluate sufficient conditions for star optimality.
    Check {
        n: Option<usize>,
        k: Option<usize>,
        l: Option<usize>,
        #[arg(long)]
        alpha: Option<f64>,
        #[arg(long)]
        beta: Option<f64>,
        #[arg(long, value_delimiter = ',', required = true)]
        conditions: Vec<Condition>,
    },
    /// Exact m(n, alpha, beta) over up-closed families.
    Measure {
        n: usize,
        #[arg(long)]
        alpha: String,
        #[arg(long)]
        beta: String,
    },
    /// Conjecture evidence over a box of parameters, one JSON line per instance.
    Scan {
        #[arg(long, num_args = 2, value_names = ["LO", "HI"], required = true)]
        n_range: Vec<usize>,
        #[arg(long, num_args = 2, value_names = ["LO", "HI"])]
        k_range: Option<Vec<usize>>,
        #[arg(long, num_args = 2, value_names = ["LO", "HI"])]
        l_range: Option<Vec<usize>>,
        #[arg(long, default_value_t = 64)]
        j_max: usize,
    },
    /// Import or export families in the line format.
    #[command(subcommand)]
    Family(FamilyCmd),
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Cascade,
    Enum,
    Both,
}

#[derive(Clone, Copy, ValueEnum)]
enum What {
    Delta,
    DeltaPrime,
    Ej,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Condition {
    C1,
    C2,
    Omega,
    Delta,
    DeltaPrime,
    Claims,
}

#[derive(Subcommand)]
enum FamilyCmd {
    /// Print a named family.
    Export {
        #[arg(value_enum)]
        kind: FamilyKind,
        n: usize,
        /// Uniform size; omit for the non-uniform version.
        #[arg(long)]
        size: Option<usize>,
        /// Star centre, or `j` for the perturbed families.
        #[arg(long, default_value_t = 1)]
        index: usize,
    },
    /// Read a family file (or `-` for standard input) and summarise it.
    Import {
        path: String,
        /// Also report the shadow at this level (uniform families).
        #[arg(long)]
        shadow: Option<usize>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyKind {
    Star,
    A,
    B,
}

struct Failure {
    code: u8,
    msg: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Capacity(_) => EXIT_CAPACITY,
            _ => EXIT_USAGE,
        };
        Failure {
            code,
            msg: e.to_string(),
        }
    }
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_USAGE,
        msg: msg.into(),
    }
}

type Outcome = Result<u8, Failure>;

struct Ctx {
    config: RunConfig,
    timing: bool,
    out: String,
}

impl Ctx {
    fn emit_json(&mut self, command: &str, payload: Value) {
        let v = envelope(command, &self.config, payload);
        self.out
            .push_str(&serde_json::to_string_pretty(&v).expect("serialisable"));
        self.out.push('\n');
    }

    fn timed<T>(&self, f: impl FnOnce() -> crossint::Result<T>) -> crossint::Result<(T, Option<u128>)> {
        let start = Instant::now();
        let v = f()?;
        Ok((v, self.timing.then(|| start.elapsed().as_millis())))
    }
}

fn with_time(mut r: OracleResult, t: Option<u128>) -> OracleResult {
    r.elapsed_ms = t;
    r
}

fn cmd_mnkl(ctx: &mut Ctx, n: usize, k: usize, l: usize, method: MethodArg) -> Outcome {
    let budget = ctx.config.sweep_budget;
    let cascade = || {
        ctx.timed(|| max_product_cascade_with(n, k, l, budget))
            .map(|(r, t)| with_time(r, t))
    };
    let enumerate = || {
        ctx.timed(|| max_product_enumeration(n, k, l))
            .map(|(r, t)| with_time(r, t))
    };
    let results = match method {
        MethodArg::Cascade => vec![cascade()?],
        MethodArg::Enum => vec![enumerate()?],
        MethodArg::Both => vec![cascade()?, enumerate()?],
    };
    let agree = results.windows(2).all(|w| w[0].value == w[1].value);
    match ctx.config.output {
        OutputFormat::Csv => {
            ctx.out.push_str("n,k,l,method,value\n");
            for r in &results {
                ctx.out
                    .push_str(&format!("{n},{k},{l},{},{}\n", r.method.as_str(), r.value));
            }
        }
        OutputFormat::Json => {
            let payload = if results.len() == 1 {
                results[0].to_json()
            } else {
                json!({"results": results.iter().map(OracleResult::to_json).collect::<Vec<_>>(), "agree": agree})
            };
            ctx.emit_json("mnkl", payload);
        }
    }
    Ok(if agree { 0 } else { EXIT_FAIL })
}

fn cmd_region(ctx: &mut Ctx, what: What, grid: usize, range: &[f64], curves: usize) -> Outcome {
    let kind = match what {
        What::Delta => CurveKind::DeltaBoundary,
        What::DeltaPrime => CurveKind::DeltaPrimeBoundary,
        What::Ej => CurveKind::EjCurves { count: curves },
    };
    let spec = CurveSpec {
        kind,
        grid,
        alpha_lo: range[0],
        alpha_hi: range[1],
        j_cap: ctx.config.j_cap,
    };
    let rows = curve_samples(&spec)?;
    match ctx.config.output {
        OutputFormat::Csv => ctx.out.push_str(&write_csv(&rows)),
        OutputFormat::Json => {
            let rows: Vec<Value> = rows
                .iter()
                .map(|r| json!({"alpha": r.alpha, "value": r.value, "label": r.label}))
                .collect();
            ctx.emit_json("region", json!({"rows": rows}));
        }
    }
    Ok(0)
}

fn verdict(r: crossint::Result<bool>) -> (Value, Option<bool>) {
    match r {
        Ok(b) => (json!(b), Some(b)),
        Err(Error::Undecidable(msg)) => (json!({"undecidable": msg}), None),
        Err(Error::TailUncertified(msg)) => (json!({"uncertified": msg}), None),
        Err(e) => (json!({"error": e.to_string()}), None),
    }
}

fn cmd_check(
    ctx: &mut Ctx,
    nkl: (Option<usize>, Option<usize>, Option<usize>),
    ab: (Option<f64>, Option<f64>),
    conditions: &[Condition],
) -> Outcome {
    let mut report = serde_json::Map::new();
    let mut all = true;
    let needs_nkl = conditions.iter().any(|c| matches!(c, Condition::C1 | Condition::C2));
    let needs_ab = conditions.iter().any(|c| !matches!(c, Condition::C1 | Condition::C2));
    let triple = match nkl {
        (Some(n), Some(k), Some(l)) => Some((n, k, l)),
        (None, None, None) => None,
        _ => return Err(usage("give all of n, k, l or none")),
    };
    if needs_nkl && triple.is_none() {
        return Err(usage("c1/c2 need n k l"));
    }
    let point = match ab {
        (Some(a), Some(b)) => Some(RegionPoint::new(a, b)?),
        (None, None) => None,
        _ => return Err(usage("give both --alpha and --beta")),
    };
    if needs_ab && point.is_none() {
        return Err(usage("region conditions need --alpha and --beta"));
    }
    for &c in conditions {
        let (name, entry, holds) = match c {
            Condition::C1 => {
                let (n, k, l) = triple.expect("checked");
                let v = c1_value(n, k, l)?;
                let h = c1(n, k, l)?;
                ("c1", json!({"holds": h, "value": format_rational(&v)}), Some(h))
            }
            Condition::C2 => {
                let (n, k, l) = triple.expect("checked");
                let v = c2_value(n, k, l)?;
                let h = c2(n, k, l)?;
                ("c2", json!({"holds": h, "value": format_rational(&v)}), Some(h))
            }
            Condition::Omega => {
                let p = point.expect("checked");
                let h = in_omega(p.alpha(), p.beta());
                ("omega", json!({"holds": h}), Some(h))
            }
            Condition::Delta => {
                let p = point.expect("checked");
                let (v, h) = verdict(in_delta(p, ctx.config.j_cap));
                ("delta", json!({"holds": v}), h)
            }
            Condition::DeltaPrime => {
                let p = point.expect("checked");
                let (first, second) = delta_prime_values(p);
                let (v, h) = verdict(in_delta_prime(p));
                ("delta-prime", json!({"holds": v, "values": [first, second]}), h)
            }
            Condition::Claims => {
                let p = point.expect("checked");
                let (entry, h) = claims_report(p, ctx.config.i_max)?;
                ("claims", entry, Some(h))
            }
        };
        all &= holds == Some(true);
        report.insert(name.into(), entry);
    }
    report.insert("all_hold".into(), json!(all));
    if let Some((n, k, l)) = triple {
        report.insert("n".into(), json!(n));
        report.insert("k".into(), json!(k));
        report.insert("l".into(), json!(l));
    }
    if let Some(p) = point {
        report.insert("alpha".into(), json!(p.alpha()));
        report.insert("beta".into(), json!(p.beta()));
    }
    ctx.emit_json("check", Value::Object(report));
    Ok(if all { 0 } else { EXIT_FAIL })
}

fn claims_report(p: RegionPoint, i_max: usize) -> Result<(Value, bool), Failure> {
    let mut cases = vec![(ClaimKind::A, 2, 1), (ClaimKind::A, 3, 1), (ClaimKind::B, 2, 2)];
    if p.alpha() > 0.23 {
        cases.push((ClaimKind::B, 3, 1));
    }
    let i = i0(p.alpha(), i_max)?;
    cases.push((ClaimKind::C, i, 0));
    let mut rows = Vec::new();
    let mut all = true;
    for (kind, i, eps) in cases {
        let h = claim_conditions(p, i, eps, kind)?;
        all &= h;
        rows.push(json!({"kind": format!("{kind:?}"), "i": i, "eps": eps, "holds": h}));
    }
    Ok((json!({"holds": all, "i0": i, "cases": rows}), all))
}

fn cmd_measure(ctx: &mut Ctx, n: usize, alpha: &str, beta: &str) -> Outcome {
    let a = parse_rational(alpha)?;
    let b = parse_rational(beta)?;
    let (r, t) = ctx.timed(|| measure_oracle(n, &a, &b))?;
    let r = with_time(r, t);
    let product = &a * &b;
    let equal = r.rational() == Some(&product);
    let mut payload = r.to_json();
    payload["alpha_beta"] = json!(format_rational(&product));
    payload["equal"] = json!(equal);
    ctx.emit_json("measure", payload);
    Ok(0)
}

fn range_of(v: &Option<Vec<usize>>, default: (usize, usize)) -> (usize, usize) {
    v.as_ref().map_or(default, |r| (r[0], r[1]))
}

fn cmd_scan(
    ctx: &mut Ctx,
    n_range: &[usize],
    k_range: &Option<Vec<usize>>,
    l_range: &Option<Vec<usize>>,
    j_max: usize,
) -> Outcome {
    let (n_lo, n_hi) = (n_range[0], n_range[1]);
    if n_lo > n_hi {
        return Err(usage("empty n range"));
    }
    let mut total = 0;
    let mut reached = 0;
    for n in n_lo..=n_hi {
        let (k_lo, k_hi) = range_of(k_range, (1, n));
        let (l_lo, l_hi) = range_of(l_range, (1, n));
        for k in k_lo..=k_hi.min(n) {
            for l in l_lo..=l_hi.min(n) {
                if !crossint::regions::in_omega_prime(n, k, l) {
                    continue;
                }
                let r = conjecture_scan(n, k, l, j_max, ctx.config.sweep_budget)?;
                total += 1;
                if r.oracle_value.is_some() {
                    reached += 1;
                }
                let line =
                    json!({"schema": crossint::report::SCHEMA_VERSION, "config": ctx.config, "report": r.to_json()});
                ctx.out.push_str(&serde_json::to_string(&line).expect("serialisable"));
                ctx.out.push('\n');
            }
        }
    }
    if total > 0 && reached == 0 {
        return Ok(EXIT_CAPACITY);
    }
    Ok(0)
}

fn cmd_family(ctx: &mut Ctx, cmd: &FamilyCmd) -> Outcome {
    match cmd {
        FamilyCmd::Export { kind, n, size, index } => {
            let text = match (kind, size) {
                (FamilyKind::Star, Some(k)) => {
                    let f = star_uniform(*n, *k, *index)?;
                    write_text(*n, Some(*k), f.members())
                }
                (FamilyKind::A, Some(k)) => {
                    let f = a_family_uniform(*n, *k, *index)?;
                    write_text(*n, Some(*k), f.members())
                }
                (FamilyKind::B, Some(k)) => {
                    let f = b_family_uniform(*n, *k, *index)?;
                    write_text(*n, Some(*k), f.members())
                }
                (FamilyKind::Star, None) => write_text(*n, None, star_measure(*n, *index)?.members()),
                (FamilyKind::A, None) => write_text(*n, None, a_family_measure(*n, *index)?.members()),
                (FamilyKind::B, None) => write_text(*n, None, b_family_measure(*n, *index)?.members()),
            };
            ctx.out.push_str(&text);
        }
        FamilyCmd::Import { path, shadow: level } => {
            let text = if path == "-" {
                std::io::read_to_string(std::io::stdin()).map_err(|e| usage(e.to_string()))?
            } else {
                std::fs::read_to_string(path).map_err(|e| usage(format!("{path}: {e}")))?
            };
            let payload = match parse_text(&text)? {
                ParsedFamily::Uniform(f) => {
                    let mut v = json!({"n": f.n(), "k": f.k(), "len": f.len(), "support": f.support().count_ones()});
                    if let Some(lv) = level {
                        v["shadow_size"] = json!(shadow(&f, *lv)?.len());
                    }
                    v
                }
                ParsedFamily::General(f) => json!({"n": f.n(), "len": f.len(), "profile": f.size_profile()}),
            };
            ctx.emit_json("family", payload);
        }
    }
    Ok(0)
}

fn configure_threads() {
    if let Some(t) = std::env::var("CROSSINT_THREADS")
        .ok()
        .and_then(|s| s.parse::<usize>().ok())
    {
        if t > 0 {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(t).build_global();
        }
    }
}

fn run(cli: Cli) -> (Outcome, String) {
    let g = &cli.global;
    let default_output = match cli.command {
        Command::Region { .. } => OutputFormat::Csv,
        _ => OutputFormat::Json,
    };
    let config = RunConfig {
        j_cap: g.j_cap,
        i_max: g.i_max,
        sweep_budget: g.sweep_budget,
        output: match g.output {
            Some(Format::Csv) => OutputFormat::Csv,
            Some(Format::Json) => OutputFormat::Json,
            None => default_output,
        },
        seed: g.seed,
        ..RunConfig::default()
    };
    let mut ctx = Ctx {
        config,
        timing: g.timing,
        out: String::new(),
    };
    if let Err(e) = ctx.config.validate() {
        return (Err(e.into()), ctx.out);
    }
    let outcome = match &cli.command {
        Command::Mnkl { n, k, l, method } => cmd_mnkl(&mut ctx, *n, *k, *l, *method),
        Command::Region {
            what,
            grid,
            alpha_range,
            curves,
        } => cmd_region(&mut ctx, *what, *grid, alpha_range, *curves),
        Command::Check {
            n,
            k,
            l,
            alpha,
            beta,
            conditions,
        } => cmd_check(&mut ctx, (*n, *k, *l), (*alpha, *beta), conditions),
        Command::Measure { n, alpha, beta } => cmd_measure(&mut ctx, *n, alpha, beta),
        Command::Scan {
            n_range,
            k_range,
            l_range,
            j_max,
        } => cmd_scan(&mut ctx, n_range, k_range, l_range, *j_max),
        Command::Family(cmd) => cmd_family(&mut ctx, cmd),
    };
    (outcome, ctx.out)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    configure_threads();
    let (outcome, out) = run(cli);
    let mut stdout = std::io::stdout().lock();
    let _ = stdout.write_all(out.as_bytes());
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("crossint: {}", f.msg);
            ExitCode::from(f.code)
        }
    }
}
