use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use oaforge_core::algebraic::{bush_oa, projective_oa, q4_oa, sylvester_oa2, sylvester_oa3};
use oaforge_core::catalog::{catalog, run_entry, Verdict};
use oaforge_core::compose::{cosets_strength1, describe_large_set_failure, juxtapose, kronecker, zero_sum};
use oaforge_core::diffmatrix::{
    develop_chai1, develop_chai2, dm_for, read_dm, search_dm, verify_dm, write_dm, DifferenceMatrix,
    DEFAULT_SEARCH_BUDGET,
};
use oaforge_core::fixtures::{builtin_corpus, fixtures_check, load_corpus, CorpusStatus};
use oaforge_core::gf::parse_order;
use oaforge_core::io::format_artifact;
use oaforge_core::plan::{chai1_columns, execute_plan, parse_params, plan_cost, DEFAULT_BUDGET};
use oaforge_core::{
    brute_force_strength, expand_shift, find_resolvable_projection, plan_theorem, project_columns, read_array,
    verify_large_set, verify_strength, verify_strength_with, write_array, Artifact, Error, LargeSet,
    LargeSetReport, LevelProfile, ResolvableProjection, StrengthFailure, SymbolMatrix, VerifyOptions,
};

#[derive(Parser)]
#[command(name = "oaforge", version, about = "Construct and verify orthogonal arrays and their large sets")]
struct Cli {
    /// Worker threads for verification.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Counting-operation budget, e.g. 1e8.
    #[arg(long, global = true, value_parser = parse_budget)]
    budget: Option<u64>,
    /// Stop strength checks at the first failing subset.
    #[arg(long, global = true)]
    fail_fast: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build an array from a named family.
    Construct {
        #[command(subcommand)]
        family: Family,
    },
    /// Partition the full factorial into shifted copies of an array.
    Expand {
        input: PathBuf,
        /// Resolvable columns; searched for when omitted.
        #[arg(long, value_delimiter = ',')]
        columns: Option<Vec<usize>>,
        #[arg(short = 'o', long = "output")]
        output: Option<PathBuf>,
    },
    Verify {
        #[command(subcommand)]
        what: VerifyTarget,
    },
    Compose {
        #[command(subcommand)]
        op: ComposeOp,
    },
    /// Run a recipe, e.g. `theorem v1+v3-2 --params v=4,k=5`.
    Theorem {
        id: String,
        #[arg(long, default_value = "")]
        params: String,
        #[arg(short = 'o', long = "output")]
        output: Option<PathBuf>,
    },
    /// List table rows and recipes: table1..table6, theorems or all.
    Catalog {
        query: String,
        /// Execute runnable entries within the budget.
        #[arg(long)]
        run: bool,
        /// Restrict to one 1-based row.
        #[arg(long)]
        entry: Option<usize>,
        #[arg(short = 'o', long = "output")]
        output: Option<PathBuf>,
    },
    Search {
        #[command(subcommand)]
        what: SearchTarget,
    },
    /// Compare the counting kernel with the brute-force checker.
    Oracle {
        input: PathBuf,
        #[arg(long)]
        strength: Option<usize>,
    },
    Fixtures {
        #[command(subcommand)]
        action: FixturesAction,
    },
}

#[derive(Args)]
struct Output {
    /// Emit the large set instead of the seed array.
    #[arg(long)]
    expand: bool,
    #[arg(short = 'o', long = "output")]
    output: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Family {
    Sylvester2 {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        k: usize,
        #[command(flatten)]
        out: Output,
    },
    Sylvester3 {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        k: usize,
        #[command(flatten)]
        out: Output,
    },
    Bush {
        #[arg(long, value_parser = parse_q)]
        q: u64,
        #[arg(long)]
        t: usize,
        #[arg(long)]
        k: usize,
        #[command(flatten)]
        out: Output,
    },
    Projective {
        #[arg(long, value_parser = parse_q)]
        q: u64,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[command(flatten)]
        out: Output,
    },
    Q4t3 {
        #[arg(long, value_parser = parse_q)]
        q: u64,
        #[arg(long)]
        k: usize,
        #[command(flatten)]
        out: Output,
    },
    Chai1 {
        #[arg(long)]
        v: u64,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        dm_file: Option<PathBuf>,
        #[command(flatten)]
        out: Output,
    },
    Chai2 {
        #[arg(long)]
        v: u64,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        dm_file: Option<PathBuf>,
        #[command(flatten)]
        out: Output,
    },
    /// Strength-1 large set of cosets of the all-ones vector.
    Cosets {
        /// Level profile, e.g. `2^3` or `4,6`.
        #[arg(long)]
        levels: String,
        #[arg(short = 'o', long = "output")]
        output: Option<PathBuf>,
    },
    ZeroSum {
        #[arg(long)]
        s: u32,
        #[arg(long)]
        t: usize,
        #[command(flatten)]
        out: Output,
    },
}

#[derive(Subcommand)]
enum VerifyTarget {
    Oa {
        file: PathBuf,
        #[arg(long)]
        strength: Option<usize>,
    },
    Loa {
        file: PathBuf,
        #[arg(long)]
        strength: Option<usize>,
    },
    Dm {
        file: PathBuf,
    },
}

#[derive(Subcommand)]
enum ComposeOp {
    Juxtapose {
        first: PathBuf,
        second: PathBuf,
        #[arg(short = 'o', long = "output")]
        output: Option<PathBuf>,
    },
    Kronecker {
        first: PathBuf,
        second: PathBuf,
        #[arg(short = 'o', long = "output")]
        output: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum SearchTarget {
    /// Backtracking search for a (v, k, 1) difference matrix over Z_v.
    Dm {
        #[arg(long)]
        v: u32,
        #[arg(long)]
        k: usize,
        #[arg(short = 'o', long = "output")]
        output: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum FixturesAction {
    List,
    /// Check strength, marked columns and expansion of every fixture.
    Check {
        #[arg(long)]
        dir: Option<PathBuf>,
    },
    /// Write the built-in fixtures as `.oa` files.
    Export {
        #[arg(long)]
        dir: PathBuf,
    },
}

fn parse_budget(text: &str) -> Result<u64, String> {
    let text = text.replace('_', "");
    if let Ok(n) = text.parse::<u64>() {
        return Ok(n);
    }
    match text.parse::<f64>() {
        Ok(x) if x.is_finite() && x >= 0.0 && x < u64::MAX as f64 => Ok(x as u64),
        _ => Err(format!("`{text}` is not a budget")),
    }
}

fn parse_q(text: &str) -> Result<u64, String> {
    parse_order(text).map_err(|e| e.to_string())
}

/// What a successful command reports.
struct Report {
    records: Vec<Value>,
    failed: bool,
}

impl Report {
    fn ok(record: Value) -> Report {
        Report { records: vec![record], failed: false }
    }
}

type Run = Result<Report, Error>;

fn print(v: &Value) {
    println!("{v}");
}

fn describe(x: &Artifact) -> Value {
    match x {
        Artifact::Oa(a) => json!({"kind": "oa", "runs": a.runs(), "levels": a.profile().notation(), "strength": a.strength()}),
        Artifact::Loa(l) => json!({
            "kind": "loa",
            "members": l.len(),
            "runs": l.runs(),
            "levels": l.profile().notation(),
            "strength": l.strength(),
        }),
    }
}

/// Writes `x` to `output`, or to standard output when no path is given.
fn emit(x: &Artifact, output: Option<&Path>, mut summary: Value) -> Run {
    match output {
        Some(path) => {
            write_array(x, path)?;
            summary["output"] = json!(path.display().to_string());
            Ok(Report::ok(summary))
        }
        None => {
            print!("{}", format_artifact(x));
            Ok(Report { records: Vec::new(), failed: false })
        }
    }
}

fn checked_expand(a: &SymbolMatrix, p: &ResolvableProjection) -> Result<LargeSet, Error> {
    let l = expand_shift(a, p)?;
    let r = verify_large_set(&l, a.strength())?;
    if !r.passed() {
        return Err(Error::Verification(describe_large_set_failure(&r)));
    }
    Ok(l)
}

fn finish(a: SymbolMatrix, p: ResolvableProjection, out: &Output, mut extra: Value) -> Run {
    let x = if out.expand { Artifact::Loa(checked_expand(&a, &p)?) } else { Artifact::Oa(a) };
    let mut summary = json!({"status": "verified", "resolvable_columns": p.columns});
    if let (Some(s), Some(e)) = (summary.as_object_mut(), extra.as_object_mut()) {
        s.append(e);
    }
    if let (Some(s), Value::Object(d)) = (summary.as_object_mut(), describe(&x)) {
        s.extend(d);
    }
    emit(&x, out.output.as_deref(), summary)
}

fn load_dm(v: u64, file: Option<&Path>) -> Result<DifferenceMatrix, Error> {
    let d = match file {
        Some(f) => read_dm(f)?,
        None => dm_for(v)?,
    };
    if d.v() as u64 != v {
        return Err(Error::Mismatch(format!("difference matrix has v = {}, expected {v}", d.v())));
    }
    Ok(d)
}

fn construct(family: Family) -> Run {
    match family {
        Family::Sylvester2 { n, k, out } => {
            let (a, p) = sylvester_oa2(n, k)?;
            finish(a, p, &out, json!({}))
        }
        Family::Sylvester3 { n, k, out } => {
            let (a, p) = sylvester_oa3(n, k)?;
            finish(a, p, &out, json!({}))
        }
        Family::Bush { q, t, k, out } => {
            let (a, p) = bush_oa(q, t, k)?;
            finish(a, p, &out, json!({}))
        }
        Family::Projective { q, n, k, out } => {
            let (a, p) = projective_oa(q, n, k)?;
            finish(a, p, &out, json!({}))
        }
        Family::Q4t3 { q, k, out } => {
            let (a, p) = q4_oa(q, k)?;
            finish(a, p, &out, json!({}))
        }
        Family::Chai1 { v, k, dm_file, out } => {
            let (a, p) = develop_chai1(&load_dm(v, dm_file.as_deref())?)?;
            let k = k.unwrap_or(13);
            if !(3..=13).contains(&k) {
                return Err(Error::Precondition(format!("k = {k} outside 3..=13")));
            }
            let cols = chai1_columns(k);
            let sub = project_columns(&a, &cols)?;
            let marked = p.columns.iter().filter_map(|c| cols.iter().position(|x| x == c)).collect();
            let p = ResolvableProjection::new(&sub, marked)?;
            finish(sub, p, &out, json!({"source_columns": cols}))
        }
        Family::Chai2 { v, k, dm_file, out } => {
            let dev = develop_chai2(&load_dm(v, dm_file.as_deref())?)?;
            if let Some(d) = &dev.projection_defect {
                return Err(Error::Verification(format!("columns 0..4 are not a full factorial: {d}")));
            }
            let keep = dev.passing_columns();
            let k = k.unwrap_or(keep.len());
            if k < 4 || k > keep.len() {
                return Err(Error::Precondition(format!(
                    "k = {k} outside 4..={}; failing column pairs {:?}",
                    keep.len(),
                    dev.failing_pairs()
                )));
            }
            let cols = keep[..k].to_vec();
            let sub = project_columns(&dev.array, &cols)?.with_strength(2)?;
            let p = ResolvableProjection::new(&sub, vec![0, 1, 2, 3])?;
            let extra = json!({"development_passed": dev.passed(), "failing_pairs": dev.failing_pairs(), "source_columns": cols});
            finish(sub, p, &out, extra)
        }
        Family::Cosets { levels, output } => {
            let l = cosets_strength1(&LevelProfile::parse(&levels)?)?;
            let x = Artifact::Loa(l);
            let mut s = describe(&x);
            s["status"] = json!("verified");
            emit(&x, output.as_deref(), s)
        }
        Family::ZeroSum { s, t, out } => {
            let a = zero_sum(s, t)?;
            let p = ResolvableProjection::new(&a, (0..t).collect())?;
            finish(a, p, &out, json!({}))
        }
    }
}

fn strength_record(f: &StrengthFailure) -> Value {
    match f {
        StrengthFailure::Imbalance { columns, tuple, observed, expected } => json!({
            "status": "failed", "failure": "imbalance", "columns": columns, "tuple": tuple,
            "observed": observed, "expected": expected,
        }),
        StrengthFailure::NonIntegralIndex { columns, runs, level_product } => json!({
            "status": "failed", "failure": "non-integral-index", "columns": columns, "runs": runs,
            "level_product": level_product,
        }),
    }
}

fn large_set_records(r: &LargeSetReport) -> Vec<Value> {
    let mut out = Vec::new();
    if !r.count_matches {
        out.push(json!({"status": "failed", "failure": "count", "members": r.members, "runs": r.runs, "universe": r.universe.to_string()}));
    }
    for (i, f) in &r.strength_failures {
        let mut rec = strength_record(f);
        rec["member"] = json!(i);
        out.push(rec);
    }
    for (i, (a, b)) in &r.non_simple {
        out.push(json!({"status": "failed", "failure": "repeated-row", "member": i, "rows": [a, b]}));
    }
    for o in &r.overlaps {
        out.push(json!({"status": "failed", "failure": "overlap", "tuple": o.tuple, "members": [o.first_member, o.second_member]}));
    }
    if out.is_empty() && r.covered != r.universe {
        out.push(json!({"status": "failed", "failure": "coverage", "covered": r.covered.to_string(), "universe": r.universe.to_string()}));
    }
    out
}

fn verify(what: VerifyTarget, fail_fast: bool) -> Run {
    match what {
        VerifyTarget::Oa { file, strength } => {
            let a = read_array(&file)?.into_oa()?;
            let t = strength.unwrap_or(a.strength());
            let opts = VerifyOptions { fail_fast, ..VerifyOptions::default() };
            let r = verify_strength_with(&a, t, &opts)?;
            if r.passed() {
                return Ok(Report::ok(json!({"status": "verified", "kind": "oa", "runs": a.runs(), "levels": a.profile().notation(), "strength": t})));
            }
            Ok(Report { records: r.failures.iter().map(strength_record).collect(), failed: true })
        }
        VerifyTarget::Loa { file, strength } => {
            let l = read_array(&file)?.into_loa()?;
            let t = strength.unwrap_or(l.strength());
            let r = verify_large_set(&l, t)?;
            if r.passed() {
                return Ok(Report::ok(json!({
                    "status": "verified", "kind": "loa", "members": l.len(), "runs": l.runs(),
                    "levels": l.profile().notation(), "strength": t, "universe": r.universe.to_string(),
                })));
            }
            Ok(Report { records: large_set_records(&r), failed: true })
        }
        VerifyTarget::Dm { file } => {
            let d = read_dm(&file)?;
            let r = verify_dm(&d);
            if r.passed() {
                return Ok(Report::ok(json!({"status": "verified", "kind": "dm", "v": d.v(), "k": d.k(), "group": d.group().to_string()})));
            }
            let records = r
                .failures
                .iter()
                .map(|f| json!({"status": "failed", "columns": [f.pair.0, f.pair.1], "missing": f.missing, "repeated": f.repeated}))
                .collect();
            Ok(Report { records, failed: true })
        }
    }
}

fn compose(op: ComposeOp) -> Run {
    let (x, output) = match op {
        ComposeOp::Juxtapose { first, second, output } => {
            let (a, b) = (read_array(first)?.into_loa()?, read_array(second)?.into_loa()?);
            (Artifact::Loa(juxtapose(&a, &b)?), output)
        }
        ComposeOp::Kronecker { first, second, output } => {
            let (a, b) = (read_array(first)?.into_loa()?, read_array(second)?.into_loa()?);
            (Artifact::Oa(kronecker(&a, &b)?), output)
        }
    };
    let mut s = describe(&x);
    s["status"] = json!("verified");
    emit(&x, output.as_deref(), s)
}

fn theorem(id: &str, params: &str, output: Option<&Path>, budget: u64) -> Run {
    let plan = plan_theorem(id, &parse_params(params)?)?;
    let cost = plan_cost(&plan)?;
    let x = execute_plan(&plan, budget)?;
    let mut s = describe(&x);
    s["status"] = json!("verified");
    s["plan"] = json!(plan.to_string());
    s["cost"] = json!(cost.to_string());
    emit(&x, output, s)
}

fn run_catalog(query: &str, run: bool, entry: Option<usize>, output: Option<&Path>, budget: u64) -> Run {
    let mut entries = catalog(query)?;
    if let Some(row) = entry {
        if query == "all" {
            return Err(Error::Precondition("--entry needs a single table".into()));
        }
        entries.retain(|e| e.row == row);
        if entries.is_empty() {
            return Err(Error::Unknown { kind: "catalog row", name: format!("{query} row {row}") });
        }
    }
    if output.is_some() && (entry.is_none() || !run) {
        return Err(Error::Precondition("-o needs --run and --entry".into()));
    }
    let mut records = Vec::new();
    let mut failed = false;
    for e in &entries {
        let mut rec = json!({
            "table": e.table, "row": e.row, "result": e.result, "params": e.params,
            "status": e.status.to_string(), "command": e.command, "note": e.note,
        });
        if run {
            let (verdict, artifact) = run_entry(e, budget);
            rec["verdict"] = json!(verdict.to_string());
            match &verdict {
                Verdict::Verified { cost } | Verdict::SkippedBudget { cost } => rec["cost"] = json!(cost.to_string()),
                Verdict::Failed(_) => failed = true,
                Verdict::NotRunnable(_) => {}
            }
            if let (Some(path), Some(x)) = (output, artifact) {
                write_array(&x, path)?;
                rec["output"] = json!(path.display().to_string());
            }
        }
        records.push(rec);
    }
    Ok(Report { records, failed })
}

fn search(what: SearchTarget, budget: Option<u64>) -> Run {
    let SearchTarget::Dm { v, k, output } = what;
    let budget = budget.unwrap_or(DEFAULT_SEARCH_BUDGET);
    match search_dm(v, k, budget)? {
        Some(d) => {
            if let Some(path) = &output {
                write_dm(&d, path)?;
            }
            let mut rec = json!({"status": "found", "v": v, "k": k, "verified": verify_dm(&d).passed()});
            match &output {
                Some(path) => rec["output"] = json!(path.display().to_string()),
                None => rec["matrix"] = json!(oaforge_core::diffmatrix::format_dm(&d)),
            }
            Ok(Report::ok(rec))
        }
        None => Ok(Report::ok(json!({"status": "none", "v": v, "k": k, "exhausted": true}))),
    }
}

fn oracle(input: &Path, strength: Option<usize>) -> Run {
    let a = read_array(input)?.into_oa()?;
    let t = strength.unwrap_or(a.strength());
    let fast = verify_strength(&a, t)?;
    let slow = brute_force_strength(&a, t)?;
    let agree = fast.same_verdict(&slow);
    let rec = json!({
        "status": if !agree { "disagree" } else if fast.passed() { "verified" } else { "failed" },
        "kernel_passed": fast.passed(), "oracle_passed": slow.passed(), "agree": agree, "strength": t,
    });
    Ok(Report { records: vec![rec], failed: !agree || !fast.passed() })
}

fn fixtures(action: FixturesAction) -> Run {
    match action {
        FixturesAction::List => {
            let records = builtin_corpus()?
                .iter()
                .map(|f| {
                    json!({
                        "name": f.name, "runs": f.array.runs(), "levels": f.array.profile().notation(),
                        "strength": f.array.strength(), "marked_columns": f.marked_columns,
                    })
                })
                .collect();
            Ok(Report { records, failed: false })
        }
        FixturesAction::Check { dir } => {
            let corpus = match dir {
                Some(d) => load_corpus(d)?,
                None => builtin_corpus()?,
            };
            match fixtures_check(&corpus)? {
                CorpusStatus::NoFixtures => {
                    Ok(Report { records: vec![json!({"status": "no fixtures installed"})], failed: true })
                }
                CorpusStatus::Checked(outcomes) => {
                    let failed = !outcomes.iter().all(|o| o.passed());
                    let records = outcomes
                        .iter()
                        .map(|o| {
                            json!({
                                "name": o.name, "status": if o.passed() { "verified" } else { "failed" },
                                "strength_ok": o.strength_ok, "projection_ok": o.projection_ok,
                                "expansion_ok": o.expansion_ok, "members": o.members,
                                "inferred_columns": o.inferred, "defect": o.defect,
                            })
                        })
                        .collect();
                    Ok(Report { records, failed })
                }
            }
        }
        FixturesAction::Export { dir } => {
            std::fs::create_dir_all(&dir)?;
            let mut records = Vec::new();
            for f in builtin_corpus()? {
                let path = dir.join(format!("{}.oa", f.name));
                write_array(&Artifact::Oa(f.array), &path)?;
                records.push(json!({"name": f.name, "output": path.display().to_string()}));
            }
            Ok(Report { records, failed: false })
        }
    }
}

fn expand(input: &Path, columns: Option<Vec<usize>>, output: Option<&Path>) -> Run {
    let a = read_array(input)?.into_oa()?;
    let p = match columns {
        Some(c) => ResolvableProjection::new(&a, c)?,
        None => find_resolvable_projection(&a)?
            .ok_or_else(|| Error::Precondition("no set of columns is a resolvable projection".into()))?,
    };
    let x = Artifact::Loa(checked_expand(&a, &p)?);
    let mut s = describe(&x);
    s["status"] = json!("verified");
    s["resolvable_columns"] = json!(p.columns);
    emit(&x, output, s)
}

fn dispatch(cli: Cli) -> Run {
    let budget = cli.budget.unwrap_or(DEFAULT_BUDGET);
    match cli.command {
        Command::Construct { family } => construct(family),
        Command::Expand { input, columns, output } => expand(&input, columns, output.as_deref()),
        Command::Verify { what } => verify(what, cli.fail_fast),
        Command::Compose { op } => compose(op),
        Command::Theorem { id, params, output } => theorem(&id, &params, output.as_deref(), budget),
        Command::Catalog { query, run, entry, output } => run_catalog(&query, run, entry, output.as_deref(), budget),
        Command::Search { what } => search(what, cli.budget),
        Command::Oracle { input, strength } => oracle(&input, strength),
        Command::Fixtures { action } => fixtures(action),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match dispatch(cli) {
        Ok(report) => {
            for r in &report.records {
                print(r);
            }
            ExitCode::from(u8::from(report.failed))
        }
        Err(e) => match e.root() {
            Error::Verification(_) => {
                print(&json!({"status": "failed", "error": e.to_string()}));
                ExitCode::from(1)
            }
            Error::BudgetExceeded(_) => {
                print(&json!({"status": "skipped(budget)", "error": e.to_string()}));
                ExitCode::from(1)
            }
            _ => {
                eprintln!("error: {e}");
                ExitCode::from(2)
            }
        },
    }
}
