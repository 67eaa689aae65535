//! The `gaft` command line: `construct`, `check` and `enumerate`.
//!
//! Exit codes: 0 success, 1 usage or input error, 2 no finite solution set,
//! 3 verification failure or checker violations, 4 budget exceeded.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use crate::adjoint::{check_adjunction_laws, Adjunction};
use crate::construct::{
    check_solset, construct_universal, solution_set, test_family, verify_universality, ConstructBudget, Strategy,
    UniversalArrowResult,
};
use crate::dsl::{parse_kind, KindSpec};
use crate::engine::{check_kind_axioms, enumerate_homs, enumerate_sizes, kappa, Cardinal, EnumBudget, Structure};
use crate::error::Error;
use crate::finset::{product, FinSet};
use crate::functor::{builtin_functors, check_limit_preservation, check_st_axioms, ConcreteFunctor};
use crate::kinds;
use crate::report::{Report, SampleBudget, DEFAULT_SEED};

#[derive(Parser, Debug)]
#[command(
    name = "gaft",
    version,
    about = "Universal arrows and left adjoints over finite equational structures"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Construct and certify the universal arrow out of one object.
    Construct(ConstructArgs),
    /// Run the axiom, solution-set and adjunction checkers.
    Check(CheckArgs),
    /// List isomorphism classes of structures, or the morphisms between two.
    Enumerate(EnumerateArgs),
}

#[derive(Args, Debug)]
struct Budgets {
    /// Largest carrier the enumerator may be asked for.
    #[arg(long = "budget-enum", default_value_t = 8, value_parser = clap::value_parser!(u64).range(1..))]
    budget_enum: u64,
    /// Largest universal object the closure may reach.
    #[arg(long = "budget-sat", env = "GAFT_BUDGET_SAT", default_value_t = 10_000, value_parser = clap::value_parser!(u64).range(1..))]
    budget_sat: u64,
}

impl Budgets {
    fn construct(&self) -> ConstructBudget {
        ConstructBudget {
            enumeration: EnumBudget {
                max_carrier: self.budget_enum as usize,
                ..EnumBudget::default()
            },
            saturation: self.budget_sat as usize,
        }
    }
}

#[derive(Args, Debug)]
struct ConstructArgs {
    /// Kind file or `builtin:NAME`. The first is the source kind; a second
    /// one is the target of an inclusion functor.
    #[arg(long = "kind", required = true)]
    kinds: Vec<String>,
    /// `forgetful`, `inclusion` or `inclusion:t=s,...`.
    #[arg(long, default_value = "forgetful")]
    functor: String,
    /// Generators for a set-valued functor: a count or comma-separated labels.
    #[arg(long, conflicts_with = "object")]
    generators: Option<String>,
    /// JSON file holding the generating object, for structured targets.
    #[arg(long)]
    object: Option<PathBuf>,
    /// `kappa`, or `solset FILE` with a JSON list of source structures.
    #[arg(long, num_args = 1..=2, default_values_t = ["kappa".to_string()])]
    strategy: Vec<String>,
    /// Also verify against every source structure with at most this many elements.
    #[arg(long = "verify-margin", default_value_t = 0)]
    verify_margin: usize,
    #[command(flatten)]
    budgets: Budgets,
    /// Certificate path; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Graphviz rendering of the construction diagram.
    #[arg(long)]
    dot: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct CheckArgs {
    /// Kind file or `builtin:NAME` (repeatable).
    #[arg(long = "kind")]
    kinds: Vec<String>,
    /// Check every built-in kind and functor.
    #[arg(long)]
    builtins: bool,
    /// Functor to check for the given kinds.
    #[arg(long, default_value = "forgetful")]
    functor: String,
    /// Largest carrier of sampled structures.
    #[arg(long = "max-card", default_value_t = 4)]
    max_card: usize,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    #[command(flatten)]
    budgets: Budgets,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct EnumerateArgs {
    /// Kind file or `builtin:NAME`.
    #[arg(long = "kind")]
    kind: String,
    #[arg(long = "min-card", default_value_t = 1)]
    min_card: usize,
    #[arg(long = "max-card", default_value_t = 3)]
    max_card: usize,
    /// List morphisms from this structure (JSON) instead of structures.
    #[arg(long = "hom-from", requires = "hom_to")]
    hom_from: Option<PathBuf>,
    #[arg(long = "hom-to", requires = "hom_from")]
    hom_to: Option<PathBuf>,
    #[command(flatten)]
    budgets: Budgets,
    #[arg(long)]
    out: Option<PathBuf>,
}

/// A failed run: exit code and the message for standard error.
#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: 1,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Precondition(_) | Error::Parse(_) | Error::Io(_) | Error::Json(_) => 1,
            Error::KappaUnavailable(_) | Error::NoFiniteSolutionSet { .. } => 2,
            Error::IllDefinedFunctor { .. } | Error::NoFactorization(_) | Error::Certification(_) => 3,
            Error::Budget { .. } => 4,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

type Outcome<T> = std::result::Result<T, Failure>;

/// Runs the command line and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    let outcome = match cli.command {
        Command::Construct(a) => construct(&a),
        Command::Check(a) => check(&a),
        Command::Enumerate(a) => enumerate(&a),
    };
    match outcome {
        Ok(()) => 0,
        Err(f) => {
            eprintln!("error: {}", f.message.trim_end());
            f.code
        }
    }
}

fn read(path: &Path) -> Outcome<String> {
    fs::read_to_string(path).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}

fn read_json(path: &Path) -> Outcome<Value> {
    let text = read(path)?;
    serde_json::from_str(&text)
        .map_err(|e| Failure::usage(format!("{}:{}:{}: {e}", path.display(), e.line(), e.column())))
}

/// Resolves `builtin:NAME` or parses a kind file.
fn load_kind(spec: &str) -> Outcome<Arc<KindSpec>> {
    if let Some(name) = spec.strip_prefix("builtin:") {
        return kinds::by_name(name).ok_or_else(|| {
            let names: Vec<&str> = kinds::BUILTIN.iter().map(|(n, _)| *n).collect();
            Failure::usage(format!("no built-in kind `{name}` (known: {})", names.join(", ")))
        });
    }
    let path = Path::new(spec);
    let text = read(path)?;
    parse_kind(&text)
        .map(Arc::new)
        .map_err(|d| Failure::usage(format!("{}:{d}", path.display())))
}

fn load_structure(kind: &Arc<KindSpec>, path: &Path) -> Outcome<Arc<Structure>> {
    let value = read_json(path)?;
    Structure::from_json(kind.clone(), &value)
        .map(Arc::new)
        .map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}

fn distinct_paths(paths: &[&Option<PathBuf>]) -> Outcome<()> {
    let given: Vec<&PathBuf> = paths.iter().filter_map(|p| p.as_ref()).collect();
    for (i, p) in given.iter().enumerate() {
        if given[..i].contains(p) {
            return Err(Failure::usage(format!("output path {} given twice", p.display())));
        }
    }
    Ok(())
}

fn to_text(value: &Value) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("JSON values serialize");
    s.push('\n');
    s
}

/// Writes all outputs at the end; `None` paths go to standard output.
fn emit(outputs: &[(Option<&Path>, String)]) -> Outcome<()> {
    for (path, text) in outputs {
        match path {
            Some(p) => fs::write(p, text).map_err(|e| Failure::usage(format!("{}: {e}", p.display())))?,
            None => print!("{text}"),
        }
    }
    Ok(())
}

fn functor_for(name: &str, kinds: &[Arc<KindSpec>]) -> Outcome<ConcreteFunctor> {
    if kinds.len() > 2 {
        return Err(Failure::usage("at most two kinds: a source and an inclusion target"));
    }
    Ok(ConcreteFunctor::builtin(name, &kinds[0], kinds.get(1))?)
}

fn generating_object(a: &ConstructArgs, target: &Arc<KindSpec>) -> Outcome<Arc<Structure>> {
    if let Some(path) = &a.object {
        return load_structure(target, path);
    }
    let Some(spec) = &a.generators else {
        return Err(Failure::usage(
            "give the generating object with --generators or --object",
        ));
    };
    if !target.ops().is_empty() {
        return Err(Failure::usage(format!(
            "target kind `{}` has operations; give the generating object with --object",
            target.name()
        )));
    }
    let carrier = match spec.trim().parse::<usize>() {
        Ok(n) => FinSet::new(n),
        Err(_) => FinSet::with_labels(spec.split(',').map(str::trim).filter(|s| !s.is_empty()))?,
    };
    Ok(Arc::new(Structure::new(target.clone(), carrier, Vec::new())?))
}

fn strategy_for(a: &ConstructArgs, source: &Arc<KindSpec>) -> Outcome<Strategy> {
    match a.strategy.as_slice() {
        [k] if k == "kappa" => Ok(Strategy::Kappa),
        [s, file] if s == "solset" => {
            let path = Path::new(file);
            let value = read_json(path)?;
            let (description, items) = match &value {
                Value::Array(items) => (path.display().to_string(), items.clone()),
                Value::Object(o) => (
                    o.get("description")
                        .and_then(Value::as_str)
                        .map_or_else(|| path.display().to_string(), str::to_string),
                    o.get("members")
                        .and_then(Value::as_array)
                        .cloned()
                        .ok_or_else(|| Failure::usage(format!("{}: expected a `members` array", path.display())))?,
                ),
                _ => {
                    return Err(Failure::usage(format!(
                        "{}: expected a list of structures",
                        path.display()
                    )))
                }
            };
            let members = items
                .iter()
                .enumerate()
                .map(|(i, v)| {
                    Structure::from_json(source.clone(), v)
                        .map(Arc::new)
                        .map_err(|e| Failure::usage(format!("{}: member {i}: {e}", path.display())))
                })
                .collect::<Outcome<Vec<_>>>()?;
            Ok(Strategy::UserSupplied { description, members })
        }
        [s] if s == "solset" => Err(Failure::usage("--strategy solset needs a FILE")),
        other => Err(Failure::usage(format!("unknown strategy `{}`", other.join(" ")))),
    }
}

fn construct(a: &ConstructArgs) -> Outcome<()> {
    distinct_paths(&[&a.out, &a.dot])?;
    let kinds = a.kinds.iter().map(|k| load_kind(k)).collect::<Outcome<Vec<_>>>()?;
    let functor = Arc::new(functor_for(&a.functor, &kinds)?);
    let x = generating_object(a, functor.target())?;
    let strategy = strategy_for(a, functor.source())?;
    let budget = a.budgets.construct();
    let result = construct_universal(&functor, &x, &strategy, &budget)?;

    let mut cert = result.certificate();
    if a.verify_margin > 0 {
        let family = test_family(functor.source(), &result.lambda, a.verify_margin, budget.enumeration)?;
        let verified = verify_universality(&functor, &result, &family)?;
        if !verified.report.passed {
            return Err(Failure {
                code: 3,
                message: verified.report.summary(),
            });
        }
        cert["verification"] = serde_json::to_value(&verified.entries).expect("entries serialize");
        cert["test_family"] = json!(format!("lambda+carrier<={}", a.verify_margin));
        cert["test_family_size"] = json!(family.len());
    }

    let mut outputs = vec![(a.out.as_deref(), to_text(&cert))];
    if let Some(dot) = &a.dot {
        outputs.push((Some(dot.as_path()), render_dot(&result)));
    }
    emit(&outputs)
}

fn dot_escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

/// The construction diagram: `X -> E(Y0) -> E(product) -> E(Z_phi)`.
pub fn render_dot(result: &UniversalArrowResult) -> String {
    let x = result.source();
    let source = result.functor.source().name();
    let target = result.functor.target().name();
    let factors: Vec<FinSet> = result
        .delta
        .entries
        .iter()
        .map(|d| result.lambda.members[d.member].carrier().clone())
        .collect();
    let prod = product(factors);
    let prod_card = match prod.cardinality() {
        Some(c) => c.to_string(),
        None => format!("~10^{:.1}", prod.log10_cardinality()),
    };
    let mut s = String::new();
    let _ = writeln!(s, "digraph universal_arrow {{");
    let _ = writeln!(s, "  rankdir=LR;");
    let _ = writeln!(s, "  node [shape=box, fontname=\"Helvetica\"];");
    let _ = writeln!(s, "  X [label=\"X\\n{} | card {}\"];", dot_escape(target), x.size());
    let _ = writeln!(
        s,
        "  Y0 [label=\"E(Y\u{2080})\\n{} | card {}\"];",
        dot_escape(source),
        result.object.size()
    );
    let _ = writeln!(
        s,
        "  P [label=\"E(\u{220f} Z_\u{3c6})\\n{} factors | card {}\"];",
        result.delta.len(),
        prod_card
    );
    let _ = writeln!(s, "  X -> Y0 [label=\"\u{3c8}\"];");
    let _ = writeln!(s, "  X -> P [label=\"\u{3c8}\u{2032}\"];");
    let _ = writeln!(s, "  Y0 -> P [label=\"i\"];");
    if let Some(first) = result.delta.entries.first() {
        let z = &result.lambda.members[first.member];
        let _ = writeln!(
            s,
            "  Z [label=\"E(Z_\u{3c6})\\nmember {} | card {}\"];",
            first.member,
            z.size()
        );
        let _ = writeln!(s, "  P -> Z [label=\"\u{3c0}_\u{3c6}\"];");
        let _ = writeln!(s, "  Y0 -> Z [label=\"e_\u{3c6}\"];");
        let _ = writeln!(s, "  X -> Z [label=\"\u{3c6}\", style=dashed];");
    }
    let _ = writeln!(s, "}}");
    s
}

fn check(a: &CheckArgs) -> Outcome<()> {
    if !a.builtins && a.kinds.is_empty() {
        return Err(Failure::usage("nothing to check: give --kind or --builtins"));
    }
    let sample = SampleBudget {
        max_carrier: a.max_card,
        seed: a.seed,
        ..SampleBudget::default()
    };
    let budget = a.budgets.construct();
    if a.max_card > budget.enumeration.max_carrier {
        return Err(Error::Budget {
            what: "enumeration carrier size",
            bound: budget.enumeration.max_carrier as u64,
        }
        .into());
    }

    let mut kinds_checked: Vec<Arc<KindSpec>> = Vec::new();
    let mut functors: Vec<ConcreteFunctor> = Vec::new();
    if a.builtins {
        kinds_checked.extend(
            kinds::BUILTIN
                .iter()
                .map(|(name, _)| kinds::by_name(name).expect("listed built-in")),
        );
        functors.extend(builtin_functors());
    }
    if !a.kinds.is_empty() {
        let given = a.kinds.iter().map(|k| load_kind(k)).collect::<Outcome<Vec<_>>>()?;
        if a.functor == "forgetful" {
            functors.extend(given.iter().map(ConcreteFunctor::forgetful));
        } else {
            functors.push(functor_for(&a.functor, &given)?);
        }
        kinds_checked.extend(given);
    }

    let mut reports: Vec<Report> = Vec::new();
    let mut broken: Vec<&KindSpec> = Vec::new();
    for k in &kinds_checked {
        let r = check_kind_axioms(k, &sample)?;
        if !r.passed {
            broken.push(k);
        }
        reports.push(r);
    }
    for f in functors {
        reports.push(check_st_axioms(&f, &sample)?);
        reports.push(check_limit_preservation(&f, &sample)?);
        if broken.contains(&f.source().as_ref()) {
            let mut r = Report::new(format!("construction checks for {} on {}", f.name(), f.source().name()));
            r.note("skipped: the source kind fails its own axioms");
            reports.push(r);
        } else {
            reports.extend(construction_reports(Arc::new(f), &sample, &budget)?);
        }
    }

    let passed = reports.iter().all(|r| r.passed);
    if !passed {
        let mut msg = String::from("checker violations\n");
        for r in reports.iter().filter(|r| !r.passed) {
            msg.push_str(&r.summary());
        }
        return Err(Failure { code: 3, message: msg });
    }
    let value = json!({
        "seed": a.seed,
        "max_carrier": a.max_card,
        "passed": passed,
        "violations": reports.iter().map(Report::violations).sum::<usize>(),
        "reports": reports,
    });
    emit(&[(a.out.as_deref(), to_text(&value))])
}

/// Largest generating object sampled by the construction checks.
const CHECK_GENERATORS: usize = 2;

/// Solution-set and adjunction checks; skipped with a note when the source
/// kind has no finite closure bound.
fn construction_reports(
    f: Arc<ConcreteFunctor>,
    sample: &SampleBudget,
    budget: &ConstructBudget,
) -> Outcome<Vec<Report>> {
    let finite = matches!(kappa(f.source(), Cardinal::Finite(CHECK_GENERATORS)), Ok(Cardinal::Finite(k)) if k <= budget.enumeration.max_carrier);
    if !finite {
        let mut r = Report::new(format!("construction checks for {} on {}", f.name(), f.source().name()));
        r.note("skipped: the closure bound is infinite or beyond the enumeration budget");
        return Ok(vec![r]);
    }
    let mut out = Vec::new();
    let targets = enumerate_sizes(f.source(), 0, sample.max_carrier, budget.enumeration)?;
    for x in enumerate_sizes(f.target(), 0, CHECK_GENERATORS, budget.enumeration)? {
        let lambda = solution_set(&f, &x, &Strategy::Kappa, budget)?;
        let mut r = check_solset(&f, &lambda, &targets)?;
        r.title = format!(
            "{} ({} {} on {})",
            r.title,
            f.name(),
            f.source().name(),
            f.target().name()
        );
        out.push(r);
    }
    let adj = Adjunction::new(f, *budget);
    out.push(check_adjunction_laws(&adj, sample)?);
    Ok(out)
}

fn enumerate(a: &EnumerateArgs) -> Outcome<()> {
    let kind = load_kind(&a.kind)?;
    let budget = a.budgets.construct().enumeration;
    let value = match (&a.hom_from, &a.hom_to) {
        (Some(from), Some(to)) => {
            let dom = load_structure(&kind, from)?;
            let cod = load_structure(&kind, to)?;
            let homs = enumerate_homs(&dom, &cod)?;
            json!({
                "kind": kind.name(),
                "from": dom.to_json(),
                "to": cod.to_json(),
                "count": homs.len(),
                "homs": homs.iter().map(|h| h.map().table().to_vec()).collect::<Vec<_>>(),
            })
        }
        _ => {
            let list = if a.min_card > a.max_card {
                Vec::new()
            } else {
                enumerate_sizes(&kind, a.min_card, a.max_card, budget)?
            };
            json!({
                "kind": kind.name(),
                "min_card": a.min_card,
                "max_card": a.max_card,
                "count": list.len(),
                "structures": list.iter().map(|s| s.to_json()).collect::<Vec<_>>(),
            })
        }
    };
    emit(&[(a.out.as_deref(), to_text(&value))])
}
