//! The `kmbc` command line: parse inputs, run one belief-change operation or
//! checker, and print the outcome as text or JSON.

mod demos;
mod render;

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use kmbc::change::{self, ChangeReport};
use kmbc::logic::{parse, parse_unchecked, Alphabet, Formula};
use kmbc::measures::{kappa_b, kappa_h, kappa_s};
use kmbc::postulates::{
    check_contraction, check_iterated, check_revision, check_severe, exhaustive, fuzz, grid_distributions, Family,
    FuzzConfig, Operator, PostulateReport,
};
use kmbc::prob::ProbDist;
use kmbc::rankings::{dist_from_ranking, FaithfulRanking};
use kmbc::{Error, Result};
use serde_json::{json, Value};

/// Tolerance for agreement between a measure and its closed form.
const CLOSED_FORM_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Parser)]
#[command(name = "kmbc", version, about = "Belief change guided by Shannon knowledge measures")]
struct Cli {
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Print rationals as exact decimals where they terminate.
    #[arg(long, global = true)]
    decimal: bool,
    #[command(subcommand)]
    command: Command,
}

/// Where the distribution comes from.
#[derive(Debug, Args)]
struct Source {
    /// Distribution file (text or JSON).
    #[arg(long)]
    dist: Option<PathBuf>,
    /// Space-separated letters; without --dist the distribution is uniform.
    #[arg(long)]
    alphabet: Option<String>,
}

#[derive(Debug, Args)]
struct Belief {
    #[command(flatten)]
    source: Source,
    /// Current belief φ.
    #[arg(long)]
    phi: String,
}

#[derive(Debug, Args)]
struct Change {
    #[command(flatten)]
    belief: Belief,
    /// Input formula α.
    #[arg(long)]
    alpha: String,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// List the models of φ (and its possible models under --dist).
    Models(Belief),
    /// Exact probability of φ.
    Prob(Belief),
    /// Knowledge measures of φ.
    Kappa {
        #[command(flatten)]
        belief: Belief,
        /// Logarithm base for an additional κ value.
        #[arg(long, default_value_t = 2.0)]
        base: f64,
    },
    /// Contract α from φ.
    Contract {
        #[command(flatten)]
        change: Change,
        /// Keep every remainder instead of the least surprising ones.
        #[arg(long)]
        full_meet: bool,
    },
    /// Severe withdrawal of α from φ.
    Withdraw(Change),
    /// Revise φ by α.
    Revise {
        #[command(flatten)]
        change: Change,
        /// Evaluate through contraction by ¬α followed by conjunction with α.
        #[arg(long)]
        levi: bool,
    },
    /// Expand φ by α.
    Expand(Change),
    /// Sphere system around φ.
    Spheres(Belief),
    /// Check postulates by fuzzing, exhaustively, or on a single instance.
    Check(CheckArgs),
    /// Turn a ranking file into a distribution faithful to it.
    Rank2dist {
        #[arg(long)]
        ranking: PathBuf,
    },
    /// Run a scripted example.
    Demo {
        #[arg(value_enum)]
        name: DemoName,
    },
}

#[derive(Debug, Args)]
struct CheckArgs {
    /// contraction, severe, revision or iterated.
    #[arg(long, value_parser = parse_family)]
    family: Family,
    /// Operator to check; defaults to the family's own.
    #[arg(long, value_parser = parse_operator)]
    operator: Option<Operator>,
    #[arg(long, default_value_t = 3)]
    letters: usize,
    #[arg(long, default_value_t = 1000)]
    cases: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Enumerate every instance over grid distributions (at most 2 letters).
    #[arg(long)]
    exhaustive: bool,
    /// Report witnesses as found, without shrinking.
    #[arg(long)]
    no_shrink: bool,
    /// Check a single instance under this distribution instead.
    #[arg(long)]
    dist: Option<PathBuf>,
    #[arg(long)]
    phi: Option<String>,
    #[arg(long)]
    alpha: Option<String>,
    /// Second input (β, or ψ for the iterated family); defaults to ⊤.
    #[arg(long)]
    beta: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum DemoName {
    Birds,
    Ranking,
    C2Counterexample,
    Pets,
}

fn parse_family(s: &str) -> std::result::Result<Family, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_operator(s: &str) -> std::result::Result<Operator, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

/// What a command produced, rendered once at the end.
enum Output {
    Text(String),
    Json(Value),
}

struct Style {
    json: bool,
    decimal: bool,
}

impl Style {
    fn emit(&self, text: impl FnOnce() -> String, value: impl FnOnce() -> Value) -> Output {
        if self.json {
            Output::Json(value())
        } else {
            Output::Text(text())
        }
    }
}

/// A distribution together with the current belief φ.
struct Session {
    dist: ProbDist,
    belief: Formula,
    /// False when the distribution is the uniform default.
    explicit_dist: bool,
}

impl Session {
    /// `extra` formulas contribute letters when no alphabet is given.
    fn open(belief: &Belief, extra: &[&str]) -> Result<Self> {
        let mut formulas = vec![belief.phi.as_str()];
        formulas.extend_from_slice(extra);
        let (dist, explicit_dist) = load_source(&belief.source, &formulas)?;
        let belief = parse(&belief.phi, dist.alphabet())?;
        Ok(Session { dist, belief, explicit_dist })
    }

    /// Belief change is only defined for P-consistent beliefs.
    fn consistent(self) -> Result<Self> {
        if !self.dist.p_consistent(&self.belief)? {
            return Err(Error::PInconsistent);
        }
        Ok(self)
    }

    fn formula(&self, text: &str) -> Result<Formula> {
        parse(text, self.dist.alphabet())
    }

    fn alphabet(&self) -> &Alphabet {
        self.dist.alphabet()
    }
}

fn read_file(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::InvalidArgument(format!("cannot read {}: {e}", path.display())))
}

// The alphabet of all letters in `formulas`, in order of first occurrence.
fn alphabet_of(formulas: &[&str]) -> Result<Alphabet> {
    let mut letters: Vec<String> = Vec::new();
    for text in formulas {
        for l in parse_unchecked(text)?.letters() {
            if !letters.contains(&l) {
                letters.push(l);
            }
        }
    }
    if letters.is_empty() {
        return Err(Error::InvalidArgument("no letters to build an alphabet from; pass --alphabet".into()));
    }
    Alphabet::new(letters)
}

fn load_source(source: &Source, formulas: &[&str]) -> Result<(ProbDist, bool)> {
    let alphabet = source.alphabet.as_deref().map(Alphabet::parse).transpose()?;
    match &source.dist {
        Some(path) => {
            let dist = ProbDist::load(&read_file(path)?)?;
            if let Some(a) = alphabet {
                if &a != dist.alphabet() {
                    return Err(Error::AlphabetMismatch(format!(
                        "--alphabet `{a}` differs from the distribution's `{}`",
                        dist.alphabet()
                    )));
                }
            }
            Ok((dist, true))
        }
        None => {
            let alphabet = match alphabet {
                Some(a) => a,
                None => alphabet_of(formulas)?,
            };
            Ok((ProbDist::uniform(alphabet), false))
        }
    }
}

fn models(belief: &Belief, style: &Style) -> Result<Output> {
    let s = Session::open(belief, &[])?;
    let sigma = s.alphabet();
    let all = s.belief.models(sigma)?;
    let possible = s.dist.possible(&all);
    Ok(style.emit(
        || {
            let mut out = format!("models of {} over {}: {}\n", s.belief, sigma, all.len());
            for w in all.iter() {
                out += &format!("  {}  {}\n", sigma.world_bits(w), sigma.render_world(w));
            }
            if s.explicit_dist {
                out += &format!("possible models: {}\n", possible.len());
                for w in possible.iter() {
                    out += &format!("  {}  {}\n", sigma.world_bits(w), sigma.render_world(w));
                }
            }
            out
        },
        || {
            let mut v = json!({
                "alphabet": sigma.letters(),
                "phi": s.belief.to_string(),
                "models": render::worlds_json(&all, sigma),
            });
            if s.explicit_dist {
                v["possible_models"] = render::worlds_json(&possible, sigma);
            }
            v
        },
    ))
}

fn prob(belief: &Belief, style: &Style) -> Result<Output> {
    let s = Session::open(belief, &[])?;
    let p = s.dist.prob(&s.belief)?;
    let shown = render::rational(&p, style.decimal);
    Ok(style.emit(
        || format!("P({}) = {shown}\n", s.belief),
        || json!({ "phi": s.belief.to_string(), "probability": shown }),
    ))
}

fn kappa(belief: &Belief, base: f64, style: &Style) -> Result<Output> {
    let s = Session::open(belief, &[])?;
    let ks = kappa_s(&s.belief, &s.dist)?;
    let kb = kappa_b(&s.belief, &s.dist, base)?;
    let kh = kappa_h(&s.belief);
    let p = render::rational(&s.dist.prob(&s.belief)?, style.decimal);
    Ok(style.emit(
        || {
            let mut out = format!("P({}) = {p}\nκ_S = {}\n", s.belief, render::km(ks));
            if base != 2.0 {
                out += &format!("κ (base {base}) = {}\n", render::km(kb));
            }
            out + &format!("κ_h = {}\n", render::km(kh))
        },
        || {
            json!({
                "phi": s.belief.to_string(),
                "probability": p,
                "kappa_s": render::km_json(ks),
                "base": base,
                "kappa_b": render::km_json(kb),
                "kappa_h": render::km_json(kh),
            })
        },
    ))
}

fn verified(report: ChangeReport) -> Result<ChangeReport> {
    let (m, c) = (report.measure, report.closed_form);
    let agree = if m.is_finite() || c.is_finite() { (m - c).abs() <= CLOSED_FORM_TOLERANCE } else { m == c };
    if !agree {
        return Err(Error::Invariant(format!(
            "{} measure {m} disagrees with its closed form {c}",
            report.operator
        )));
    }
    Ok(report)
}

fn change_output(s: &Session, alpha: &Formula, report: &ChangeReport, style: &Style) -> Output {
    let sigma = s.alphabet();
    let symbol = report.kind.symbol();
    style.emit(
        || {
            format!(
                "operator: {}\nφ = {}\nα = {alpha}\nresult = {}\nworlds = {}\n{symbol} = {}\n",
                report.operator,
                s.belief,
                report.result,
                render::worlds_text(&report.result_worlds, sigma),
                render::real(report.measure),
            )
        },
        || {
            json!({
                "operator": report.operator.to_string(),
                "phi": s.belief.to_string(),
                "alpha": alpha.to_string(),
                "result": report.result.to_string(),
                "worlds": render::worlds_json(&report.result_worlds, sigma),
                "consistent": !report.is_inconsistent(),
                "measure": {
                    "kind": symbol,
                    "value": render::real_json(report.measure),
                    "closed_form": render::real_json(report.closed_form),
                },
            })
        },
    )
}

fn run_change(
    args: &Change,
    style: &Style,
    op: fn(&Formula, &Formula, &ProbDist) -> Result<ChangeReport>,
) -> Result<Output> {
    let s = Session::open(&args.belief, &[&args.alpha])?.consistent()?;
    let alpha = s.formula(&args.alpha)?;
    let report = verified(op(&s.belief, &alpha, &s.dist)?)?;
    Ok(change_output(&s, &alpha, &report, style))
}

fn spheres(belief: &Belief, style: &Style) -> Result<Output> {
    let s = Session::open(belief, &[])?.consistent()?;
    let system = change::spheres(&s.belief, &s.dist)?;
    let sigma = s.alphabet();
    Ok(style.emit(
        || {
            let mut out = format!("centre: {}\n", render::worlds_text(system.center(), sigma));
            for (i, (mass, ring)) in system.annuli().iter().enumerate() {
                out += &format!(
                    "annulus {} (mass {}): {}\n",
                    i + 1,
                    render::rational(mass, style.decimal),
                    render::worlds_text(ring, sigma)
                );
            }
            out
        },
        || {
            let annuli: Vec<Value> = system
                .annuli()
                .iter()
                .map(|(mass, ring)| {
                    json!({ "mass": render::rational(mass, style.decimal), "worlds": render::worlds_json(ring, sigma) })
                })
                .collect();
            json!({ "phi": s.belief.to_string(), "center": render::worlds_json(system.center(), sigma), "annuli": annuli })
        },
    ))
}

fn check_single(args: &CheckArgs, op: Operator, path: &Path) -> Result<PostulateReport> {
    let missing = |flag: &str| Error::InvalidArgument(format!("a single-instance check needs {flag}"));
    let dist = ProbDist::load(&read_file(path)?)?;
    let sigma = dist.alphabet();
    let phi = parse(args.phi.as_deref().ok_or_else(|| missing("--phi"))?, sigma)?;
    let alpha = parse(args.alpha.as_deref().ok_or_else(|| missing("--alpha"))?, sigma)?;
    let beta = match &args.beta {
        Some(b) => parse(b, sigma)?,
        None => Formula::Top,
    };
    match args.family {
        Family::Contraction => check_contraction(&op, &phi, &alpha, &beta, &dist),
        Family::Severe => check_severe(&op, &phi, &alpha, &beta, &dist),
        Family::Revision => check_revision(&op, &phi, &alpha, &beta, &dist),
        Family::Iterated => check_iterated(&op, &phi, &alpha, &beta, &dist),
    }
}

fn check(args: &CheckArgs, style: &Style) -> Result<Output> {
    let op = args.operator.unwrap_or(args.family.default_operator());
    let report = match &args.dist {
        Some(path) => check_single(args, op, path)?,
        None if args.exhaustive => {
            let sigma = Alphabet::new(["p", "q", "r", "s"].iter().take(args.letters).copied())?;
            exhaustive(args.family, &op, &grid_distributions(&sigma))?
        }
        None => {
            let mut config = FuzzConfig::new(args.family, args.letters, args.cases, args.seed).with_operator(op);
            config.shrink = !args.no_shrink;
            fuzz(&config)?
        }
    };
    Ok(style.emit(|| report_text(&report), || serde_json::to_value(&report).expect("report serializes")))
}

fn report_text(report: &PostulateReport) -> String {
    let mut out =
        format!("family: {}  operator: {}  cases: {}\n", report.family, report.operator, report.cases);
    for v in &report.verdicts {
        out += &format!(
            "{:<7} {}  holds {}  vacuous {}  violated {}\n",
            v.label,
            if v.passed() { "PASS" } else { "FAIL" },
            v.holds,
            v.vacuous,
            v.violated
        );
        if let Some(w) = &v.witness {
            let dist = w.distribution.trim_end().replace('\n', "; ");
            out += &format!(
                "  witness: {}\n    distribution: {dist}\n    φ = {}\n    α = {}\n    β = {}\n",
                w.detail, w.phi, w.alpha, w.beta
            );
        }
    }
    out
}

fn rank2dist(path: &Path, style: &Style) -> Result<Output> {
    let ranking = FaithfulRanking::from_text(&read_file(path)?)?;
    let dist = dist_from_ranking(&ranking);
    Ok(style.emit(|| dist.to_text(), || dist.to_json_value()))
}

fn dispatch(cli: &Cli) -> Result<Output> {
    let style = Style { json: cli.json, decimal: cli.decimal };
    match &cli.command {
        Command::Models(b) => models(b, &style),
        Command::Prob(b) => prob(b, &style),
        Command::Kappa { belief, base } => kappa(belief, *base, &style),
        Command::Contract { change, full_meet: false } => run_change(change, &style, change::contract),
        Command::Contract { change, full_meet: true } => run_change(change, &style, change::full_meet_contract),
        Command::Withdraw(c) => run_change(c, &style, change::severe_withdraw),
        Command::Revise { change, levi: false } => run_change(change, &style, change::revise),
        Command::Revise { change, levi: true } => run_change(change, &style, change::revise_levi),
        Command::Expand(c) => run_change(c, &style, change::expand_report),
        Command::Spheres(b) => spheres(b, &style),
        Command::Check(args) => check(args, &style),
        Command::Rank2dist { ranking } => rank2dist(ranking, &style),
        Command::Demo { name } => demos::run(*name, &style),
    }
}

/// Runs the command line `args` (program name first), writing results to
/// `out` and diagnostics to `err`. Returns the process exit code: 0 on
/// success, 1 on invalid input, 2 when an internal invariant is violated.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(err, "{text}");
                1
            } else {
                let _ = write!(out, "{text}");
                0
            };
        }
    };
    match dispatch(&cli) {
        Ok(Output::Text(text)) => {
            let _ = write!(out, "{text}");
            0
        }
        Ok(Output::Json(value)) => {
            let _ = writeln!(out, "{}", serde_json::to_string_pretty(&value).expect("JSON values serialize"));
            0
        }
        Err(e @ Error::Invariant(_)) => {
            let _ = writeln!(err, "error: {e}");
            2
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            1
        }
    }
}
