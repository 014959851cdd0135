//! The `symq` command line: verification campaigns over A(5), census and
//! conjugacy queries, formula translation with its finite truth oracle, the
//! base-Omega ordinal calculator, and the invariant classifier.
//!
//! Exit codes: 0 on success/PASS, 1 on a verification FAIL (the report
//! carries a replayable witness), 2 on usage errors. Reports go to stdout
//! and are byte-deterministic; progress and timing go to stderr.

use std::fmt::Write as _;
use std::process::ExitCode;

use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use symq_core::alt5::{lemmas, A5Context};
use symq_core::census::{census, tuples_conjugate, TrivialConvention};
use symq_core::classifier::{
    self, CardinalExpr, ContinuumSpec, InvariantReport, QuotientSpec,
};
use symq_core::logic::{
    check_translation_in, parse_group_formula, required_sort_arity, translate, MEvaluator,
    MFinModel, ModelBounds,
};
use symq_core::ordinal::{parse_ordinal, OrdOmega};
use symq_core::perm::PermTuple;

#[derive(Parser)]
#[command(
    name = "symq",
    about = "workbench for quotient symmetric group invariants",
    version
)]
struct Cli {
    /// Emit machine-readable key<TAB>value records instead of prose.
    #[arg(long, global = true)]
    machine: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the exhaustive A(5) verification campaigns.
    Verify(VerifyArgs),
    /// Print the census of a permutation tuple.
    Census(CensusArgs),
    /// Search for a conjugating witness between two tuples.
    Conjugate(ConjugateArgs),
    /// Compile a group formula into the census language.
    Translate(TranslateArgs),
    /// Exhaustively compare a formula pool against its compiled forms.
    CheckTranslation(CheckTranslationArgs),
    /// Base-Omega ordinal calculator.
    #[command(subcommand)]
    Ordinal(OrdinalCommand),
    /// Compute the invariant report of one parameter triple.
    Classify(ClassifyArgs),
    /// Compare the invariant reports of two parameter triples.
    Equiv(EquivArgs),
}

#[derive(Args)]
struct VerifyArgs {
    /// What to verify; only `a5` is available.
    target: String,
    /// Restrict to one lemma id (3.3, 3.4, or 3.5); default runs all.
    #[arg(long)]
    lemma: Option<String>,
}

#[derive(Clone, Copy, ValueEnum)]
enum ConventionArg {
    Include,
    Exclude,
}

impl From<ConventionArg> for TrivialConvention {
    fn from(c: ConventionArg) -> Self {
        match c {
            ConventionArg::Include => TrivialConvention::IncludeTrivial,
            ConventionArg::Exclude => TrivialConvention::ExcludeTrivial,
        }
    }
}

#[derive(Args)]
struct CensusArgs {
    /// Ground set size.
    #[arg(long)]
    ground: usize,
    /// Comma-separated cycle notations, e.g. "(0 1)(2 3), (0 1 2)".
    tuple: String,
    #[arg(long, value_enum, default_value = "include")]
    convention: ConventionArg,
}

#[derive(Args)]
struct ConjugateArgs {
    #[arg(long)]
    ground: usize,
    first: String,
    second: String,
}

#[derive(Args)]
struct TranslateArgs {
    /// Number of coordinates the free census variable carries.
    #[arg(long)]
    arity: usize,
    formula: String,
}

#[derive(Args)]
struct CheckTranslationArgs {
    /// Ground set size of the oracle.
    #[arg(long)]
    omega: usize,
    /// Coordinates per formula.
    #[arg(long)]
    arity: usize,
    /// File with one formula per line ('#' comments allowed); the builtin
    /// regression pool runs when absent.
    #[arg(long)]
    pool: Option<std::path::PathBuf>,
}

#[derive(Subcommand)]
enum OrdinalCommand {
    /// Normalize an ordinal expression.
    Cnf { expr: String },
    /// Extended cofinality (0, 1, w, or W).
    Cf { expr: String },
    /// Coefficient/cofinality agreement up to level k.
    Simk {
        #[arg(long)]
        k: u32,
        first: String,
        second: String,
    },
    /// The canonical representative below W^(k+2).
    Canon {
        #[arg(long)]
        k: u32,
        expr: String,
    },
    /// Left-to-right ordinal sum of the arguments.
    Sum { exprs: Vec<String> },
}

#[derive(Args)]
struct ClassifyArgs {
    #[arg(long)]
    kappa: String,
    #[arg(long)]
    lambda: String,
    #[arg(long)]
    mu: String,
    /// The exponent theta in the assumption 2^aleph0 = aleph_theta.
    #[arg(long)]
    continuum: String,
    #[arg(long, default_value_t = 3)]
    k: u32,
}

#[derive(Args)]
struct EquivArgs {
    /// First triple as "kappa;lambda;mu", e.g. "aleph(5);aleph(6);aleph(9)".
    #[arg(long)]
    spec1: String,
    /// Second triple in the same form.
    #[arg(long)]
    spec2: String,
    #[arg(long)]
    continuum: String,
    #[arg(long, default_value_t = 3)]
    k: u32,
}

struct Output {
    machine: bool,
    lines: String,
}

impl Output {
    fn new(machine: bool) -> Self {
        Output {
            machine,
            lines: String::new(),
        }
    }

    fn record(&mut self, key: &str, value: impl std::fmt::Display) {
        if self.machine {
            let _ = writeln!(self.lines, "{key}\t{value}");
        } else {
            let _ = writeln!(self.lines, "{key}: {value}");
        }
    }

    fn raw(&mut self, text: &str) {
        self.lines.push_str(text);
        if !text.ends_with('\n') {
            self.lines.push('\n');
        }
    }

    fn flush(self) {
        print!("{}", self.lines);
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    init_threads();
    let machine = cli.machine;
    match run(cli.command, machine) {
        Ok(code) => code,
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}

fn init_threads() {
    if let Ok(value) = std::env::var("SYMQ_THREADS") {
        if let Ok(n) = value.trim().parse::<usize>() {
            if n >= 1 {
                let _ = rayon::ThreadPoolBuilder::new()
                    .num_threads(n)
                    .build_global();
            }
        }
    }
}

fn run(command: Command, machine: bool) -> Result<ExitCode, String> {
    match command {
        Command::Verify(args) => verify(args, machine),
        Command::Census(args) => census_cmd(args, machine),
        Command::Conjugate(args) => conjugate_cmd(args, machine),
        Command::Translate(args) => translate_cmd(args, machine),
        Command::CheckTranslation(args) => check_translation_cmd(args, machine),
        Command::Ordinal(args) => ordinal_cmd(args, machine),
        Command::Classify(args) => classify_cmd(args, machine),
        Command::Equiv(args) => equiv_cmd(args, machine),
    }
}

fn verify(args: VerifyArgs, machine: bool) -> Result<ExitCode, String> {
    if args.target != "a5" {
        return Err(format!("unknown verification target '{}'", args.target));
    }
    let checks: Vec<Box<dyn lemmas::LemmaCheck>> = match &args.lemma {
        None => lemmas::registry(),
        Some(id) => {
            let check = lemmas::find_check(id)
                .ok_or_else(|| format!("unknown lemma id '{id}' (try 3.3, 3.4, 3.5)"))?;
            vec![check]
        }
    };
    eprintln!("building A(5) context");
    let ctx = A5Context::new();
    let mut out = Output::new(machine);
    let mut all_pass = true;
    for check in checks {
        let started = Instant::now();
        eprintln!("running lemma {}", check.id());
        let report = check.run(&ctx);
        eprintln!("lemma {} finished in {:?}", check.id(), started.elapsed());
        let status = if report.pass { "PASS" } else { "FAIL" };
        if machine {
            out.record(&format!("lemma.{}.status", report.id), status);
            for (k, v) in &report.records {
                out.record(&format!("lemma.{}.{k}", report.id), v);
            }
        } else {
            out.raw(&format!("lemma {} ({}): {status}", report.id, report.title));
            for (k, v) in &report.records {
                out.raw(&format!("  {k}: {v}"));
            }
        }
        all_pass &= report.pass;
    }
    out.flush();
    Ok(if all_pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn census_cmd(args: CensusArgs, machine: bool) -> Result<ExitCode, String> {
    let tuple = PermTuple::parse(&args.tuple, args.ground).map_err(|e| e.to_string())?;
    let c = census(&tuple, args.convention.into());
    let mut out = Output::new(machine);
    out.record("arity", tuple.arity());
    out.record("ground", args.ground);
    out.record("weight", c.weight());
    if machine {
        for (t, count) in c.counts() {
            out.record(&format!("type.{:016x}", t.fingerprint()), count);
        }
    } else {
        out.raw(&c.to_string());
    }
    out.flush();
    Ok(ExitCode::SUCCESS)
}

fn conjugate_cmd(args: ConjugateArgs, machine: bool) -> Result<ExitCode, String> {
    let t1 = PermTuple::parse(&args.first, args.ground).map_err(|e| e.to_string())?;
    let t2 = PermTuple::parse(&args.second, args.ground).map_err(|e| e.to_string())?;
    let witness = tuples_conjugate(&t1, &t2).map_err(|e| e.to_string())?;
    let mut out = Output::new(machine);
    match witness {
        Some(h) => {
            out.record("conjugate", "yes");
            out.record("witness", h);
        }
        None => out.record("conjugate", "no"),
    }
    out.flush();
    Ok(ExitCode::SUCCESS)
}

fn translate_cmd(args: TranslateArgs, machine: bool) -> Result<ExitCode, String> {
    let phi = parse_group_formula(&args.formula).map_err(|e| e.to_string())?;
    let compiled = translate(&phi, args.arity).map_err(|e| e.to_string())?;
    let mut out = Output::new(machine);
    out.record("arity", compiled.arity);
    out.record("free", format!("h{} {}", compiled.free_var, compiled.free_sort()));
    out.record("compiled", &compiled.formula);
    out.flush();
    Ok(ExitCode::SUCCESS)
}

fn check_translation_cmd(args: CheckTranslationArgs, machine: bool) -> Result<ExitCode, String> {
    let pool: Vec<(String, usize)> = match &args.pool {
        Some(path) => std::fs::read_to_string(path)
            .map_err(|e| format!("cannot read pool {}: {e}", path.display()))?
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
            .map(|l| (l.to_string(), args.arity))
            .collect(),
        None => symq_core::logic::regression_pool()
            .into_iter()
            .filter(|(_, a)| *a <= args.arity)
            .map(|(f, a)| (f.to_string(), a))
            .collect(),
    };
    if pool.is_empty() {
        return Err("the formula pool is empty".into());
    }
    let bounds = ModelBounds::default();
    let mut max_needed = 0usize;
    let mut formulas = Vec::new();
    for (text, arity) in &pool {
        let phi = parse_group_formula(text).map_err(|e| format!("{text}: {e}"))?;
        max_needed =
            max_needed.max(required_sort_arity(&phi, *arity).map_err(|e| e.to_string())?);
        formulas.push((text.clone(), *arity, phi));
    }
    eprintln!(
        "building the census model at ground {} with sorts up to {max_needed}",
        args.omega
    );
    let started = Instant::now();
    let model = MFinModel::build(
        args.omega,
        max_needed,
        TrivialConvention::IncludeTrivial,
        &bounds,
    )
    .map_err(|e| e.to_string())?;
    eprintln!("model ready in {:?}", started.elapsed());
    let mut eval = MEvaluator::new(&model);
    let mut out = Output::new(machine);
    let mut failures = 0u64;
    for (text, arity, phi) in &formulas {
        let report = check_translation_in(phi, *arity, &model, &mut eval)
            .map_err(|e| format!("{text}: {e}"))?;
        let status = if report.pass() { "PASS" } else { "FAIL" };
        if machine {
            out.record(&format!("check.{text}"), status);
            out.record(&format!("assignments.{text}"), report.assignments);
        } else {
            out.raw(&format!(
                "{status} [{} assignments, {} censuses] {text}",
                report.assignments, report.distinct_censuses
            ));
        }
        if !report.pass() {
            failures += 1;
            for witness in &report.disagreements {
                out.record("witness", witness);
            }
        }
    }
    out.record("formulas", formulas.len());
    out.record("failures", failures);
    out.flush();
    Ok(if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn ordinal_cmd(cmd: OrdinalCommand, machine: bool) -> Result<ExitCode, String> {
    let parse = |s: &str| parse_ordinal(s).map_err(|e| e.to_string());
    let mut out = Output::new(machine);
    match cmd {
        OrdinalCommand::Cnf { expr } => {
            out.record("cnf", parse(&expr)?);
        }
        OrdinalCommand::Cf { expr } => {
            out.record("cf", parse(&expr)?.cf());
        }
        OrdinalCommand::Simk { k, first, second } => {
            let (a, b) = (parse(&first)?, parse(&second)?);
            out.record("simk", a.sim_k(&b, k));
        }
        OrdinalCommand::Canon { k, expr } => {
            out.record("canon", parse(&expr)?.canonical_k(k));
        }
        OrdinalCommand::Sum { exprs } => {
            if exprs.is_empty() {
                return Err("sum needs at least one ordinal".into());
            }
            let mut acc = OrdOmega::zero();
            for e in &exprs {
                acc = acc.add(&parse(e)?);
            }
            out.record("sum", acc);
        }
    }
    out.flush();
    Ok(ExitCode::SUCCESS)
}

fn parse_spec(
    kappa: &str,
    lambda: &str,
    mu: &str,
    continuum: &str,
) -> Result<QuotientSpec, String> {
    let theta = parse_ordinal(continuum).map_err(|e| e.to_string())?;
    QuotientSpec::new(
        CardinalExpr::parse(kappa).map_err(|e| e.to_string())?,
        CardinalExpr::parse(lambda).map_err(|e| e.to_string())?,
        CardinalExpr::parse(mu).map_err(|e| e.to_string())?,
        ContinuumSpec::new(theta).map_err(|e| e.to_string())?,
    )
    .map_err(|e| e.to_string())
}

fn render_invariants(out: &mut Output, prefix: &str, report: &InvariantReport) {
    let key = |name: &str| {
        if prefix.is_empty() {
            name.to_string()
        } else {
            format!("{prefix}.{name}")
        }
    };
    out.record(&key("max_case"), report.max_case);
    out.record(&key("kappa_case"), report.kappa_case);
    out.record(&key("alpha"), &report.alpha);
    for (l, c) in report.alpha_coeffs.iter().enumerate() {
        out.record(&key(&format!("alpha_coeff[{l}]")), c);
    }
    for (l, u) in report.alpha_uppers.iter().enumerate() {
        out.record(&key(&format!("alpha_upper[{l}]")), u);
    }
    match &report.alpha_star {
        Some(star) => {
            out.record(&key("alpha_star"), star);
            for (l, c) in report.alpha_star_coeffs.iter().enumerate() {
                out.record(&key(&format!("alpha_star_coeff[{l}]")), c);
            }
            for (l, u) in report.alpha_star_uppers.iter().enumerate() {
                out.record(&key(&format!("alpha_star_upper[{l}]")), u);
            }
        }
        None => out.record(&key("alpha_star"), "not-applicable"),
    }
    match &report.cf_kappa {
        Some(cf) => out.record(&key("cf_kappa"), cf),
        None => out.record(&key("cf_kappa"), "not-included"),
    }
    out.record(&key("kap_flag"), report.kap_flag);
    out.record(&key("fin_flag"), report.fin_flag);
}

fn classify_cmd(args: ClassifyArgs, machine: bool) -> Result<ExitCode, String> {
    let spec = parse_spec(&args.kappa, &args.lambda, &args.mu, &args.continuum)?;
    let report = classifier::invariants(&spec, args.k);
    let mut out = Output::new(machine);
    out.record("kappa", spec.kappa());
    out.record("lambda", spec.lambda());
    out.record("mu", spec.mu());
    out.record("continuum_theta", spec.continuum().theta());
    out.record("k", args.k);
    render_invariants(&mut out, "", &report);
    out.flush();
    Ok(ExitCode::SUCCESS)
}

fn split_triple(text: &str) -> Result<(String, String, String), String> {
    let parts: Vec<&str> = text.split(';').map(str::trim).collect();
    if parts.len() != 3 {
        return Err(format!(
            "expected \"kappa;lambda;mu\" with three parts, got '{text}'"
        ));
    }
    Ok((
        parts[0].to_string(),
        parts[1].to_string(),
        parts[2].to_string(),
    ))
}

fn equiv_cmd(args: EquivArgs, machine: bool) -> Result<ExitCode, String> {
    let (k1, l1, m1) = split_triple(&args.spec1)?;
    let (k2, l2, m2) = split_triple(&args.spec2)?;
    let s1 = parse_spec(&k1, &l1, &m1, &args.continuum)?;
    let s2 = parse_spec(&k2, &l2, &m2, &args.continuum)?;
    let verdict = classifier::equivalent(&s1, &s2, args.k).map_err(|e| e.to_string())?;
    let mut out = Output::new(machine);
    out.record("k", args.k);
    out.record("verdict", &verdict);
    render_invariants(&mut out, "spec1", &classifier::invariants(&s1, args.k));
    render_invariants(&mut out, "spec2", &classifier::invariants(&s2, args.k));
    out.flush();
    Ok(ExitCode::SUCCESS)
}
