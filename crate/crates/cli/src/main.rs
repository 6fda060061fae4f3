use std::collections::BTreeSet;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use actkit::hom::ActHom;
use actkit::independence::{
    is_independent, minimal_base, splitting_witness, type_nonforking, IndependenceQuery,
};
use actkit::injectivity::InjectivityTester;
use actkit::io::{format_act, load_act, LoadedAct};
use actkit::report::{self, AnalysisReport, Subject, ZooCheck, ZooOptions};
use actkit::saturation::{cellular_factorize, saturate, SaturateOptions, SaturationStatus, Target};
use actkit::selftest::{self, Kind, Ops, SelftestConfig};
use actkit::types::{compare_types, type_rep, TypeComparison};
use actkit::Error;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

#[derive(Parser)]
#[command(
    name = "actkit",
    version,
    about = "Finite monoids, their acts, and the independence and injectivity calculus on them"
)]
struct Cli {
    /// Seed for randomized checks; recorded in every report.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Print the full JSON report instead of a summary.
    #[arg(long, global = true)]
    json: bool,
    /// Worker threads (defaults to one per core).
    #[arg(long, global = true)]
    parallelism: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Monoid analysis.
    #[command(subcommand)]
    Monoid(MonoidCommand),
    /// Act injectivity checks.
    #[command(subcommand)]
    Act(ActCommand),
    /// Type comparison.
    #[command(name = "type", subcommand)]
    Type(TypeCommand),
    /// Independence queries.
    #[command(subcommand)]
    Indep(IndepCommand),
    /// Factor a mono `K → L` into pushouts along cyclic acts.
    Factorize {
        k: PathBuf,
        l: PathBuf,
        /// Images of the elements of K, e.g. `0,2,3`.
        #[arg(long, value_parser = parse_list, default_value = "")]
        embedding: IndexList,
    },
    /// Grow an act until it is weakly injective (or injective).
    Saturate {
        act: PathBuf,
        #[arg(long, value_enum, default_value_t = TargetArg::Weak)]
        target: TargetArg,
        #[arg(long, default_value_t = 8, value_parser = positive)]
        max_steps: usize,
        #[arg(long, default_value_t = 512)]
        max_size: usize,
        /// Write the saturated act here.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Classify every `*.monoid` file in a directory.
    Zoo {
        dir: PathBuf,
        #[arg(long, value_delimiter = ',', default_value = "ideals,coproducts")]
        checks: Vec<ZooCheck>,
        /// Largest act size used by the coproduct check.
        #[arg(long, default_value_t = 4)]
        max_act_size: usize,
        /// Largest act size used by the saturation check.
        #[arg(long, default_value_t = 2)]
        saturation_size: usize,
    },
    /// Run the randomized invariant suites.
    Selftest {
        /// Largest act size generated; 0 runs nothing.
        #[arg(long, default_value_t = 4)]
        sizes: usize,
        #[arg(long, default_value_t = 200)]
        trials: usize,
        #[arg(long, hide = true, value_enum)]
        mutant: Option<Mutant>,
    },
}

#[derive(Subcommand)]
enum MonoidCommand {
    /// Ideals, minimum generators, g(S), right reversibility.
    Analyze { path: PathBuf },
}

#[derive(Subcommand)]
enum ActCommand {
    /// Test one extension property.
    Check {
        act: PathBuf,
        #[command(flatten)]
        test: CheckArgs,
    },
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct CheckArgs {
    /// Injectivity: a zero, and extension along subacts of cyclic acts.
    #[arg(long)]
    injective: bool,
    /// Extension along every left ideal of the monoid.
    #[arg(long)]
    weakly_injective: bool,
    /// Extension along left ideals with at most N generators.
    #[arg(long, value_name = "N")]
    n_injective: Option<usize>,
    /// Absolute purity against acts of at most this size.
    #[arg(long, value_name = "BOUND", value_parser = clap::value_parser!(u64).range(1..))]
    pure: Option<u64>,
}

#[derive(Subcommand)]
enum TypeCommand {
    /// Compare the type of a tuple over parameters in two acts.
    Eq {
        act1: PathBuf,
        act2: PathBuf,
        #[arg(long, value_parser = parse_list)]
        tuple1: IndexList,
        #[arg(long, value_parser = parse_list)]
        tuple2: IndexList,
        #[arg(long, value_parser = parse_list, default_value = "")]
        params1: IndexList,
        #[arg(long, value_parser = parse_list, default_value = "")]
        params2: IndexList,
    },
}

#[derive(Subcommand)]
enum IndepCommand {
    /// Is SX ∩ SY contained in the base subact?
    Check {
        act: PathBuf,
        #[arg(long, value_parser = parse_list, default_value = "")]
        base: IndexList,
        #[arg(long, value_parser = parse_list, default_value = "")]
        left: IndexList,
        #[arg(long, value_parser = parse_list, default_value = "")]
        right: IndexList,
    },
    /// A smallest Z generating Sx ∩ A.
    Base {
        act: PathBuf,
        #[arg(long, value_parser = parse_list, default_value = "")]
        base: IndexList,
        #[arg(long)]
        element: usize,
    },
    /// Does the type of a tuple over params split over a base subact?
    Split {
        act: PathBuf,
        #[arg(long, value_parser = parse_list)]
        tuple: IndexList,
        #[arg(long, value_parser = parse_list, default_value = "")]
        params: IndexList,
        #[arg(long, value_parser = parse_list, default_value = "")]
        base: IndexList,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum TargetArg {
    Weak,
    Full,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mutant {
    Pushout,
}

/// Comma-separated element indices.
#[derive(Clone, Debug)]
struct IndexList(Vec<usize>);

impl std::ops::Deref for IndexList {
    type Target = [usize];

    fn deref(&self) -> &[usize] {
        &self.0
    }
}

fn positive(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(0) => Err("must be at least 1".into()),
        Ok(n) => Ok(n),
        Err(e) => Err(e.to_string()),
    }
}

/// Parses `1,2,3`; the empty string is the empty list.
fn parse_list(s: &str) -> Result<IndexList, String> {
    if s.trim().is_empty() {
        return Ok(IndexList(Vec::new()));
    }
    s.split(',')
        .map(|w| {
            w.trim()
                .parse()
                .map_err(|_| format!("`{w}` is not an index"))
        })
        .collect::<Result<_, _>>()
        .map(IndexList)
}

fn set(xs: &[usize]) -> BTreeSet<usize> {
    xs.iter().copied().collect()
}

fn file_id(path: &Path) -> String {
    path.file_name()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string())
}

fn act_subject(loaded: &LoadedAct, path: &Path) -> Subject {
    Subject::new("act", file_id(path), loaded.text.as_bytes())
}

fn pair_subject(a: (&LoadedAct, &Path), b: (&LoadedAct, &Path)) -> Subject {
    let content = format!("{}\0{}", a.0.text, b.0.text);
    Subject::new(
        "acts",
        format!("{},{}", file_id(a.1), file_id(b.1)),
        content.as_bytes(),
    )
}

struct Output {
    json: String,
    summary: String,
    ok: bool,
    /// Some inputs failed to load even though the command produced output.
    input_errors: bool,
}

impl Output {
    fn new(report: AnalysisReport, summary: String, ok: bool) -> Self {
        Output {
            json: report.to_json(),
            summary,
            ok,
            input_errors: false,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.parallelism {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
        {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match run(&cli) {
        Ok(out) => {
            let text = if cli.json {
                format!("{}\n", out.json)
            } else {
                out.summary
            };
            // A closed pipe is not an error worth reporting.
            let _ = std::io::stdout().lock().write_all(text.as_bytes());
            ExitCode::from(match (out.input_errors, out.ok) {
                (true, _) => 2,
                (false, true) => 0,
                (false, false) => 1,
            })
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: &Cli) -> actkit::Result<Output> {
    let seed = cli.seed;
    match &cli.command {
        Command::Monoid(MonoidCommand::Analyze { path }) => monoid_analyze(path, seed),
        Command::Act(ActCommand::Check { act, test }) => act_check(act, test, seed),
        Command::Type(TypeCommand::Eq {
            act1,
            act2,
            tuple1,
            tuple2,
            params1,
            params2,
        }) => type_eq(act1, act2, tuple1, tuple2, params1, params2, seed),
        Command::Indep(cmd) => indep(cmd, seed),
        Command::Factorize { k, l, embedding } => factorize(k, l, embedding, seed),
        Command::Saturate {
            act,
            target,
            max_steps,
            max_size,
            output,
        } => {
            let options = SaturateOptions {
                target: match target {
                    TargetArg::Weak => Target::Weak,
                    TargetArg::Full => Target::Full,
                },
                max_steps: *max_steps,
                max_size: *max_size,
            };
            saturate_cmd(act, options, output.as_deref(), seed)
        }
        Command::Zoo {
            dir,
            checks,
            max_act_size,
            saturation_size,
        } => zoo(dir, checks, *max_act_size, *saturation_size, seed),
        Command::Selftest {
            sizes,
            trials,
            mutant,
        } => selftest_cmd(*sizes, *trials, *mutant, seed),
    }
}

fn monoid_analyze(path: &Path, seed: u64) -> actkit::Result<Output> {
    let text =
        std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    let report = report::analyze_monoid(&file_id(path), &text, seed)?;
    let r = &report.results;
    let summary = format!(
        "size {}\nleft ideals {}\nmin generator counts {}\ng(S) {}\nright reversible {}\ncommutative {}\n",
        r["size"],
        r["left_ideals"].as_array().map_or(0, |a| a.len()),
        r["min_generator_counts"],
        r["generation_degree"],
        r["right_reversible"],
        r["commutative"],
    );
    Ok(Output::new(report, summary, true))
}

fn act_check(path: &Path, test: &CheckArgs, seed: u64) -> actkit::Result<Output> {
    let loaded = load_act(path)?;
    let q = &loaded.act;
    let tester = InjectivityTester::new(q.monoid().clone());
    let (name, verdict) = if test.injective {
        ("injective", tester.injective(q))
    } else if test.weakly_injective {
        ("weakly_injective", tester.weakly_injective(q))
    } else if let Some(n) = test.n_injective {
        ("n_injective", tester.n_injective(q, n))
    } else {
        let bound = test.pure.expect("one test is required") as usize;
        ("absolutely_pure", tester.absolutely_pure(q, bound))
    };
    let mut report = AnalysisReport::new(act_subject(&loaded, path), seed);
    report.insert("size", q.size());
    report.insert("generation_degree", tester.generation_degree());
    report.insert(name, &verdict);
    let mut summary = format!("{name}: {}\n", verdict.verdict);
    if let Some(c) = &verdict.counterexample {
        summary.push_str(&format!(
            "counterexample: subact {:?} of {}-element act, hom {:?}\n",
            c.subact,
            c.ambient.size(),
            c.hom
        ));
    }
    Ok(Output::new(report, summary, verdict.verdict))
}

fn type_eq(
    p1: &Path,
    p2: &Path,
    t1: &[usize],
    t2: &[usize],
    x1: &[usize],
    x2: &[usize],
    seed: u64,
) -> actkit::Result<Output> {
    let a1 = load_act(p1)?;
    let a2 = load_act(p2)?;
    let p = type_rep(&a1.act, t1, &set(x1))?;
    let q = type_rep(&a2.act, t2, &set(x2))?;
    let cmp = compare_types(&p, &q)?;
    let mut report = AnalysisReport::new(pair_subject((&a1, p1), (&a2, p2)), seed);
    report.insert("type_eq", &cmp);
    let summary = match &cmp {
        TypeComparison::Equal { map } => format!("equal\nmap {map:?}\n"),
        TypeComparison::Different { equation } => format!(
            "different\nequation {}·g{} = {}·g{} holds on the {} side only\n",
            equation.s, equation.i, equation.t, equation.j, equation.holds_on
        ),
    };
    Ok(Output::new(report, summary, cmp.is_equal()))
}

fn indep(cmd: &IndepCommand, seed: u64) -> actkit::Result<Output> {
    match cmd {
        IndepCommand::Check {
            act,
            base,
            left,
            right,
        } => {
            let loaded = load_act(act)?;
            let query = IndependenceQuery {
                ambient: loaded.act.clone(),
                base: set(base),
                left: set(left),
                right: set(right),
            };
            let witness = query.witness()?;
            let independent = is_independent(&query)?;
            let mut report = AnalysisReport::new(act_subject(&loaded, act), seed);
            report.insert(
                "independent",
                json!({"verdict": independent, "witness": witness}),
            );
            Ok(Output::new(
                report,
                format!("independent: {independent}\nwitness {witness:?}\n"),
                independent,
            ))
        }
        IndepCommand::Base { act, base, element } => {
            let loaded = load_act(act)?;
            let z = minimal_base(&loaded.act, &set(base), *element)?;
            let mut report = AnalysisReport::new(act_subject(&loaded, act), seed);
            report.insert("minimal_base", json!({"element": element, "base": z}));
            Ok(Output::new(report, format!("minimal base {z:?}\n"), true))
        }
        IndepCommand::Split {
            act,
            tuple,
            params,
            base,
        } => {
            let loaded = load_act(act)?;
            let p = type_rep(&loaded.act, tuple, &set(params))?;
            let base = set(base);
            let nonforking = type_nonforking(&p, &base)?;
            let witness = splitting_witness(&p, &base)?;
            let splits = witness.is_some();
            let mut report = AnalysisReport::new(act_subject(&loaded, act), seed);
            report.insert("nonforking", &nonforking);
            report.insert("splits", json!({"verdict": splits, "witness": witness}));
            Ok(Output::new(
                report,
                format!("splits: {splits}\nnonforking: {}\n", nonforking.nonforking),
                splits,
            ))
        }
    }
}

fn factorize(k: &Path, l: &Path, embedding: &[usize], seed: u64) -> actkit::Result<Output> {
    let kk = load_act(k)?;
    let ll = load_act(l)?;
    let f = ActHom::new(kk.act.clone(), ll.act.clone(), embedding.to_vec())?;
    let chain = cellular_factorize(&f)?;
    let verified = chain.verify();
    let steps: Vec<_> = chain
        .steps
        .iter()
        .map(|st| {
            json!({
                "element": st.element,
                "cyclic": st.cyclic,
                "attaching": st.attaching,
                "attaching_hom": st.attaching_hom.map(),
                "stage": st.pushout.apex,
                "stage_leg": st.pushout.left.map(),
                "cell_leg": st.pushout.right.map(),
                "to_target": st.to_target.map(),
            })
        })
        .collect();
    let mut report = AnalysisReport::new(pair_subject((&kk, k), (&ll, l)), seed);
    report.insert(
        "cellular_chain",
        json!({
            "steps": steps,
            "composite": chain.composite.map(),
            "comparison": chain.comparison.map(),
            "verified": verified.is_ok(),
            "problem": verified.as_ref().err(),
        }),
    );
    let mut summary = format!("{} step(s)\n", chain.steps.len());
    for (i, st) in chain.steps.iter().enumerate() {
        summary.push_str(&format!(
            "step {i}: attach orbit of {} ({} elements) along {:?}\n",
            st.element,
            st.cyclic.size(),
            st.attaching
        ));
    }
    summary.push_str(&format!("verified: {}\n", verified.is_ok()));
    Ok(Output::new(report, summary, verified.is_ok()))
}

/// How the output act file should name its monoid.
fn monoid_ref_for(output: &Path, input: &Path, loaded: &LoadedAct) -> String {
    let dir = |p: &Path| {
        p.parent()
            .map(|d| {
                if d.as_os_str().is_empty() {
                    Path::new(".")
                } else {
                    d
                }
            })
            .and_then(|d| d.canonicalize().ok())
    };
    if dir(output).is_some() && dir(output) == dir(input) {
        return loaded.monoid_ref.clone();
    }
    loaded
        .monoid_path
        .canonicalize()
        .unwrap_or_else(|_| loaded.monoid_path.clone())
        .display()
        .to_string()
}

fn saturate_cmd(
    path: &Path,
    options: SaturateOptions,
    output: Option<&Path>,
    seed: u64,
) -> actkit::Result<Output> {
    let loaded = load_act(path)?;
    let sat = saturate(&loaded.act, options);
    let monoid_ref = match output {
        Some(out) => monoid_ref_for(out, path, &loaded),
        None => loaded.monoid_ref.clone(),
    };
    let act_file = format_act(&sat.result, &monoid_ref);
    if let Some(out) = output {
        std::fs::write(out, &act_file).map_err(|e| Error::Io(format!("{}: {e}", out.display())))?;
    }
    let mut report = AnalysisReport::new(act_subject(&loaded, path), seed);
    report.insert(
        "saturation",
        json!({
            "target": options.target,
            "max_steps": options.max_steps,
            "max_size": options.max_size,
            "status": sat.status,
            "sizes": sat.sizes,
            "embedding": sat.embedding.map(),
            "skips_extendable_cells": true,
            "result": act_file,
        }),
    );
    let reached = matches!(sat.status, SaturationStatus::Reached { .. });
    let status = match sat.status {
        SaturationStatus::Reached { steps } => format!("reached after {steps} step(s)"),
        SaturationStatus::CapExceeded { size } => format!("cap exceeded at size {size}"),
    };
    let summary = match output {
        Some(out) => format!(
            "{status}\nwrote {} elements to {}\n",
            sat.result.size(),
            out.display()
        ),
        None => format!("{act_file}# {status}\n"),
    };
    Ok(Output::new(report, summary, reached))
}

fn zoo(
    dir: &Path,
    checks: &[ZooCheck],
    max_act_size: usize,
    saturation_size: usize,
    seed: u64,
) -> actkit::Result<Output> {
    let options = ZooOptions {
        checks: checks.to_vec(),
        max_act_size,
        saturation_size,
        seed,
    };
    let out = report::zoo(dir, &options)?;
    let mut summary = String::new();
    if !out.summary.is_empty() {
        summary.push_str("monoid            reversible  injective  pairs  failures  violation\n");
        for row in &out.summary {
            summary.push_str(&format!(
                "{:<17} {:<11} {:>9} {:>6} {:>9}  {}\n",
                row.monoid,
                row.right_reversible,
                row.injective_acts,
                row.coproduct_pairs,
                row.non_injective_coproducts,
                row.violation
            ));
        }
    }
    summary.push_str(&format!(
        "{} report(s), {} error(s), {} violation(s)\n",
        out.reports.len(),
        out.errors.len(),
        out.violations
    ));
    for e in &out.errors {
        summary.push_str(&format!("error in {}: {}\n", e.file, e.error));
    }
    Ok(Output {
        json: serde_json::to_string_pretty(&out).expect("zoo output serializes"),
        summary,
        ok: out.violations == 0,
        input_errors: !out.errors.is_empty(),
    })
}

fn selftest_cmd(
    sizes: usize,
    trials: usize,
    mutant: Option<Mutant>,
    seed: u64,
) -> actkit::Result<Output> {
    let ops = match mutant {
        Some(Mutant::Pushout) => Ops::mutant_pushout(),
        None => Ops::standard(),
    };
    let config = SelftestConfig {
        seed,
        sizes,
        trials,
    };
    let result = selftest::run(&config, ops);
    let content = format!("seed={seed} sizes={sizes} trials={trials}");
    let mut report = AnalysisReport::new(
        Subject::new("selftest", "selftest", content.as_bytes()),
        seed,
    );
    report.insert("passed", result.passed());
    report.insert("properties", &result.properties);
    let mut summary = String::new();
    for p in &result.properties {
        let tag = match (p.kind, p.passed()) {
            (_, true) => "PASS",
            (Kind::Invariant, false) => "FAIL",
            (Kind::Finding, false) => "NOTE",
        };
        summary.push_str(&format!(
            "{tag} {} ({} cases, {} failures)\n",
            p.name, p.cases, p.failures
        ));
        if let Some(ce) = &p.counterexample {
            summary.push_str(&format!("     counterexample: {ce}\n"));
        }
    }
    summary.push_str(if result.passed() {
        "all invariants hold\n"
    } else {
        "invariant violated\n"
    });
    Ok(Output::new(report, summary, result.passed()))
}
