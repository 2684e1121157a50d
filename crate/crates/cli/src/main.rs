mod report;

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_rational::BigRational;

use ladder_core::checks::{first_failure, run_suite, Fault, Status, SuiteConfig};
use ladder_core::cylinders::{decompose, Direction};
use ladder_core::fuchsian::{
    build_domain, membership, reduce, FuchsianError, FundamentalDomain, GroupWord, Membership, MAX_ORBIT_WORD_LEN,
};
use ladder_core::moebius::MoebiusElement;
use ladder_core::numeric::{solve_lambda, LadderParams, QuadExt};
use ladder_core::render::{render_cylinders, render_domain, render_segments, render_surface, RenderOptions};
use ladder_core::surface::{area, build_surface, singular_segments, LadderSurface};

use report::*;

const DEPTH_LIMIT_VAR: &str = "LADDER_DEPTH_LIMIT";

/// Ladder translation surfaces in exact arithmetic.
#[derive(Parser, Debug)]
#[command(name = "veech-ladder", version, about)]
struct Cli {
    #[command(flatten)]
    run: RunArgs,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct RunArgs {
    /// First ladder parameter, k > l
    #[arg(long, global = true, default_value_t = 2, allow_negative_numbers = true)]
    k: i64,
    /// Second ladder parameter, l >= 1
    #[arg(long, global = true, default_value_t = 1, allow_negative_numbers = true)]
    l: i64,
    /// Truncation depth of the staircase
    #[arg(long, global = true, default_value_t = 24)]
    depth: usize,
    /// Digits after the point in approximations
    #[arg(long, global = true, default_value_t = 12)]
    digits: usize,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Write to this file instead of stdout
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Seed for the randomized checks
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Solve for lambda and print it exactly
    Lambda,
    /// Cylinder tables, moduli and parabolics per direction
    Cylinders {
        /// Only this direction (default: all three)
        #[arg(long)]
        direction: Option<Direction>,
    },
    /// Run the verification suite
    Check {
        #[arg(long, default_value_t = 8)]
        max_word_len: u64,
        #[arg(long, hide = true)]
        inject_fault: Option<Fault>,
    },
    /// Emit an SVG figure
    Render {
        #[arg(long, value_enum)]
        figure: Figure,
        /// Cylinder direction for the cylinders figure
        #[arg(long, default_value = "horizontal")]
        direction: Direction,
        /// Rational slope for the segments figure
        #[arg(long, default_value = "1")]
        slope: BigRational,
        /// Number of corners for the segments figure (default: min(depth, 16))
        #[arg(long)]
        corners: Option<usize>,
    },
    /// Decide whether a matrix lies in the group generated by T and R
    Membership {
        /// Four entries "a b c d", or one string holding all four
        #[arg(num_args = 0..=4, allow_hyphen_values = true)]
        entries: Vec<String>,
        /// Build the matrix from a word such as "R T^2 R^2"
        #[arg(long, conflicts_with = "entries")]
        word: Option<String>,
        /// Print the reduction trace
        #[arg(long)]
        trace: bool,
    },
    /// Reduce a point of the upper half-plane into the fundamental domain
    Reduce {
        #[arg(long, allow_hyphen_values = true)]
        re: String,
        #[arg(long)]
        im: String,
    },
    /// Everything above in one document
    Report {
        #[arg(long, default_value_t = 8)]
        max_word_len: u64,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Format {
    Json,
    Text,
    Svg,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Figure {
    Surface,
    Cylinders,
    Segments,
    Domain,
}

/// Maps to exit code 2.
#[derive(Debug)]
struct UsageError(String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    UsageError(msg.into()).into()
}

/// Outcome of a command that ran to completion.
enum Outcome {
    Ok,
    CheckFailed(String),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(Outcome::Ok) => ExitCode::SUCCESS,
        Ok(Outcome::CheckFailed(name)) => {
            eprintln!("check failed: {name}");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.is::<UsageError>() {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}

struct Ctx {
    params: LadderParams,
    depth: usize,
    digits: usize,
    seed: u64,
    format: Format,
    output: Option<PathBuf>,
}

impl Ctx {
    fn echo(&self) -> ParamsEcho {
        ParamsEcho::new(&self.params, self.depth, self.digits)
    }

    fn exact(&self, x: &QuadExt) -> Exact {
        Exact::new(x, self.digits)
    }

    fn surface(&self) -> Result<LadderSurface> {
        build_surface(&self.params, self.depth).map_err(|e| usage(e.to_string()))
    }

    fn domain(&self) -> Result<FundamentalDomain> {
        let dom = build_domain(&self.params)?;
        if let Some(w) = dom.warning() {
            eprintln!("warning: {w}");
        }
        Ok(dom)
    }

    fn emit(&self, body: &str) -> Result<()> {
        match &self.output {
            Some(path) => std::fs::write(path, body).with_context(|| format!("writing {}", path.display())),
            None => {
                print!("{body}");
                Ok(())
            }
        }
    }

    /// JSON or text; svg is only meaningful for `render`.
    fn emit_report<T: serde::Serialize>(&self, value: &T, text: impl FnOnce() -> String) -> Result<()> {
        match self.format {
            Format::Json => self.emit(&(serde_json::to_string_pretty(value)? + "\n")),
            Format::Text => self.emit(&text()),
            Format::Svg => Err(usage("--format svg is only available for render")),
        }
    }
}

fn depth_limit() -> Result<Option<usize>> {
    match std::env::var(DEPTH_LIMIT_VAR) {
        Ok(v) => v
            .trim()
            .parse()
            .map(Some)
            .map_err(|_| usage(format!("{DEPTH_LIMIT_VAR}={v:?} is not a non-negative integer"))),
        Err(std::env::VarError::NotPresent) => Ok(None),
        Err(e) => Err(usage(format!("{DEPTH_LIMIT_VAR}: {e}"))),
    }
}

fn run(cli: Cli) -> Result<Outcome> {
    let RunArgs {
        k,
        l,
        mut depth,
        digits,
        format,
        output,
        seed,
    } = cli.run;
    let params = solve_lambda(k, l).map_err(|e| usage(e.to_string()))?;
    if let Some(limit) = depth_limit()? {
        if depth > limit {
            eprintln!("note: depth {depth} capped to {limit} by {DEPTH_LIMIT_VAR}");
            depth = limit;
        }
    }
    if depth < 2 {
        return Err(usage(format!("depth must be at least 2, got {depth}")));
    }
    let default_format = match cli.command {
        Command::Render { .. } => Format::Svg,
        _ => Format::Text,
    };
    let ctx = Ctx {
        params,
        depth,
        digits,
        seed,
        format: format.unwrap_or(default_format),
        output,
    };
    match cli.command {
        Command::Lambda => cmd_lambda(&ctx),
        Command::Cylinders { direction } => cmd_cylinders(&ctx, direction),
        Command::Check {
            max_word_len,
            inject_fault,
        } => cmd_check(&ctx, max_word_len, inject_fault),
        Command::Render {
            figure,
            direction,
            slope,
            corners,
        } => cmd_render(&ctx, figure, direction, &slope, corners),
        Command::Membership { entries, word, trace } => cmd_membership(&ctx, &entries, word.as_deref(), trace),
        Command::Reduce { re, im } => cmd_reduce(&ctx, &re, &im),
        Command::Report { max_word_len } => cmd_report(&ctx, max_word_len),
    }
}

fn cmd_lambda(ctx: &Ctx) -> Result<Outcome> {
    let rep = lambda_report(&ctx.params, ctx.digits);
    ctx.emit_report(&rep, || {
        let mut s = String::new();
        let _ = writeln!(s, "k = {}, l = {}", rep.k, rep.l);
        let _ = writeln!(s, "lambda = {}", rep.lambda.exact);
        let _ = writeln!(s, "approx = {}", rep.lambda.approx);
        let _ = writeln!(s, "D = {}", rep.radicand);
        let _ = writeln!(s, "residual = {}", rep.residual);
        s
    })?;
    Ok(Outcome::Ok)
}

fn direction_reports(ctx: &Ctx, only: Option<Direction>) -> Result<Vec<DirectionReport>> {
    let surface = ctx.surface()?;
    let dirs: Vec<Direction> = match only {
        Some(d) => vec![d],
        None => Direction::ALL.to_vec(),
    };
    dirs.into_iter()
        .map(|d| {
            let dec = decompose(&surface, d)?;
            direction_report(&dec, ctx.digits)
        })
        .collect()
}

fn join<T: ToString>(xs: &[T]) -> String {
    xs.iter().map(T::to_string).collect::<Vec<_>>().join(" ")
}

fn show(e: &Exact) -> String {
    format!("{} (approx {})", e.exact, e.approx)
}

fn show_matrix(m: &MatrixRow) -> String {
    format!("({}, {}; {}, {})", m.a, m.b, m.c, m.d)
}

fn directions_text(dirs: &[DirectionReport]) -> String {
    let mut s = String::new();
    for d in dirs {
        let _ = writeln!(s, "[{}]", d.direction);
        for c in &d.cylinders {
            let _ = writeln!(
                s,
                "  {:>3}  height {}  circumference {}  modulus {}",
                c.index,
                c.height.exact,
                c.circumference.exact,
                show(&c.modulus)
            );
        }
        match &d.commensurability {
            CommensurabilityRow::Commensurable { m, multipliers } => {
                let _ = writeln!(s, "  m = {}", show(m));
                let _ = writeln!(s, "  multipliers = {}", join(multipliers));
            }
            CommensurabilityRow::NotCommensurable { index } => {
                let _ = writeln!(s, "  not commensurable (cylinder {index})");
            }
        }
        if let Some(shear) = &d.shear {
            let _ = writeln!(s, "  shear = {}", show(shear));
        }
        if let Some(p) = &d.parabolic {
            let _ = writeln!(s, "  parabolic = {}", show_matrix(p));
        }
        if let Some(t) = &d.twist_counts {
            let _ = writeln!(s, "  twists = {}", join(t));
        }
    }
    s
}

fn cmd_cylinders(ctx: &Ctx, only: Option<Direction>) -> Result<Outcome> {
    let rep = CylindersReport {
        schema: SCHEMA.into(),
        params: ctx.echo(),
        directions: direction_reports(ctx, only)?,
    };
    ctx.emit_report(&rep, || directions_text(&rep.directions))?;
    Ok(Outcome::Ok)
}

fn suite_config(ctx: &Ctx, max_word_len: u64, fault: Option<Fault>) -> Result<SuiteConfig> {
    if max_word_len > MAX_ORBIT_WORD_LEN {
        return Err(usage(format!("--max-word-len is at most {MAX_ORBIT_WORD_LEN}")));
    }
    Ok(SuiteConfig {
        depth: ctx.depth,
        max_word_len,
        seed: ctx.seed,
        fault,
        ..SuiteConfig::default()
    })
}

fn verdicts_text(verdicts: &[ladder_core::checks::Verdict]) -> String {
    let mut s = String::new();
    for v in verdicts {
        let tag = match v.status {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Skipped => "SKIP",
        };
        let _ = writeln!(s, "{tag} {}: {}", v.name, v.detail);
    }
    s
}

fn cmd_check(ctx: &Ctx, max_word_len: u64, fault: Option<Fault>) -> Result<Outcome> {
    let cfg = suite_config(ctx, max_word_len, fault)?;
    let verdicts = run_suite(&ctx.params, &cfg);
    let failed = first_failure(&verdicts).map(|v| v.name.clone());
    let rep = CheckReport {
        schema: SCHEMA.into(),
        params: ctx.echo(),
        max_word_len,
        seed: ctx.seed,
        passed: failed.is_none(),
        first_failure: failed.clone(),
        verdicts,
    };
    ctx.emit_report(&rep, || verdicts_text(&rep.verdicts))?;
    Ok(match failed {
        Some(name) => Outcome::CheckFailed(name),
        None => Outcome::Ok,
    })
}

fn cmd_render(
    ctx: &Ctx,
    figure: Figure,
    direction: Direction,
    slope: &BigRational,
    corners: Option<usize>,
) -> Result<Outcome> {
    if ctx.format != Format::Svg {
        return Err(usage("render only produces svg"));
    }
    let opts = RenderOptions::default();
    let svg = match figure {
        Figure::Surface => render_surface(&ctx.surface()?, &opts),
        Figure::Cylinders => {
            let surface = ctx.surface()?;
            let dec = decompose(&surface, direction)?;
            render_cylinders(&surface, &dec, &opts).map_err(|e| usage(e.to_string()))?
        }
        Figure::Segments => {
            let surface = ctx.surface()?;
            let count = corners.unwrap_or(ctx.depth.min(16));
            let verdicts = singular_segments(&surface, slope, count).map_err(|e| usage(e.to_string()))?;
            let s = ctx.params.field().rational(slope.clone());
            render_segments(&surface, &s, &verdicts, &opts)
        }
        Figure::Domain => render_domain(&ctx.domain()?, &opts),
    };
    ctx.emit(&svg)?;
    Ok(Outcome::Ok)
}

fn parse_matrix(ctx: &Ctx, dom: &FundamentalDomain, entries: &[String], word: Option<&str>) -> Result<MoebiusElement> {
    if let Some(w) = word {
        let w: GroupWord = w.parse().map_err(|e: FuchsianError| usage(e.to_string()))?;
        return Ok(dom.evaluate(&w));
    }
    let split: Vec<String> = match entries {
        [one] => one.split_whitespace().map(str::to_string).collect(),
        many => many.to_vec(),
    };
    if split.len() != 4 {
        return Err(usage(format!("expected four matrix entries, got {}", split.len())));
    }
    MoebiusElement::parse_entries(ctx.params.field(), &split).map_err(|e| usage(e.to_string()))
}

fn cmd_membership(ctx: &Ctx, entries: &[String], word: Option<&str>, trace: bool) -> Result<Outcome> {
    let dom = ctx.domain()?;
    let m = parse_matrix(ctx, &dom, entries, word)?;
    let (answer, red) = membership(&dom, &m)?;
    let rep = MembershipReport {
        schema: SCHEMA.into(),
        question: Membership::LABEL.into(),
        params: ctx.echo(),
        matrix: MatrixRow::new(&m),
        answer: match &answer {
            Membership::Yes(_) => "yes",
            Membership::No => "no",
            Membership::Ambiguous => "ambiguous",
        }
        .into(),
        word: match &answer {
            Membership::Yes(w) => Some(w.to_string()),
            _ => None,
        },
        warning: dom.warning().map(str::to_string),
        trace: trace.then(|| step_rows(&red.steps)),
    };
    ctx.emit_report(&rep, || {
        let mut s = format!("{}: {answer}\n", Membership::LABEL);
        if let Some(steps) = &rep.trace {
            s.push_str(&trace_text(steps));
        }
        s
    })?;
    Ok(Outcome::Ok)
}

fn trace_text(steps: &[StepRow]) -> String {
    let mut s = String::new();
    for (i, st) in steps.iter().enumerate() {
        let _ = writeln!(s, "  {:>3}  {:<6} -> {} + i*({})", i + 1, st.apply, st.re, st.im);
    }
    s
}

fn cmd_reduce(ctx: &Ctx, re: &str, im: &str) -> Result<Outcome> {
    let dom = ctx.domain()?;
    let f = ctx.params.field();
    let parse = |s: &str| QuadExt::parse_in(f, s).map_err(|e| usage(format!("{s:?}: {e}")));
    let z = dom.point(parse(re)?, parse(im)?).map_err(|e| usage(e.to_string()))?;
    let red = reduce(&dom, &z)?;
    let rep = ReduceReport {
        schema: SCHEMA.into(),
        params: ctx.echo(),
        input: PointRow::new(&z),
        word: red.word.to_string(),
        reduced: PointRow::new(&red.reduced_point),
        iterations: red.iterations,
        steps: step_rows(&red.steps),
    };
    ctx.emit_report(&rep, || {
        let mut s = String::new();
        let _ = writeln!(s, "word = {}", rep.word);
        let _ = writeln!(s, "reduced = {} + i*({})", rep.reduced.re, rep.reduced.im);
        let _ = writeln!(s, "iterations = {}", rep.iterations);
        s.push_str(&trace_text(&rep.steps));
        s
    })?;
    Ok(Outcome::Ok)
}

fn cmd_report(ctx: &Ctx, max_word_len: u64) -> Result<Outcome> {
    let cfg = suite_config(ctx, max_word_len, None)?;
    let dom = ctx.domain()?;
    let checks = run_suite(&ctx.params, &cfg);
    let failed = first_failure(&checks).map(|v| v.name.clone());
    let rep = FullReport {
        schema: SCHEMA.into(),
        params: ctx.echo(),
        lambda: ctx.exact(&ctx.params.lambda),
        area: ctx.exact(&area(&ctx.params)),
        cylinders: direction_reports(ctx, None)?,
        generators: Generators {
            t: MatrixRow::new(&dom.t()),
            r: MatrixRow::new(&dom.r()),
        },
        domain: domain_row(&dom, ctx.digits),
        checks,
    };
    ctx.emit_report(&rep, || {
        let mut s = String::new();
        let _ = writeln!(s, "k = {}, l = {}, D = {}", rep.params.k, rep.params.l, rep.params.radicand);
        let _ = writeln!(s, "lambda = {}", show(&rep.lambda));
        let _ = writeln!(s, "area = {}", show(&rep.area));
        let _ = writeln!(s, "T = {}", show_matrix(&rep.generators.t));
        let _ = writeln!(s, "R = {}", show_matrix(&rep.generators.r));
        let d = &rep.domain;
        let _ = writeln!(
            s,
            "domain: strip [{}, {}] minus unit disks at 0 and -1, free side ({}, {})",
            d.strip_left.exact, d.strip_right.exact, d.free_side.0.exact, d.free_side.1.exact
        );
        s.push_str(&directions_text(&rep.cylinders));
        s.push_str(&verdicts_text(&rep.checks));
        s
    })?;
    Ok(match failed {
        Some(name) => Outcome::CheckFailed(name),
        None => Outcome::Ok,
    })
}
