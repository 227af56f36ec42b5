//! The `amc` command-line tool.
//!
//! Exit codes: 0 success, 1 unsound evaluation or verification mismatch,
//! 2 input or parse error, 3 violated semiring law.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::circuit::{classify_circuit, parse_nnf, propagate_constants, write_nnf, Circuit, Determinism, PropertyReport, DEFAULT_DETERMINISM_BUDGET};
use crate::compile::{compile_cnf_to_sddnnf, parse_dimacs};
use crate::eval::{evaluate_checked, required_circuit_class, task_profile_of, EvalError, EvalOptions, Mode};
use crate::lit::Var;
use crate::oracle::{amc_brute_force_within, DEFAULT_ENUMERATION_BUDGET};
use crate::semiring::{
    check_axioms, parse_labeling, parse_order, Builtin, Labeling, SemiringDescriptor, SemiringParams, Value,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_UNSOUND: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_AXIOM: i32 = 3;

/// Seed used when neither `--seed` nor `AMC_SEED` is given.
pub const DEFAULT_SEED: u64 = 0;

#[derive(Debug, Parser)]
#[command(name = "amc", version, about = "Algebraic model counting over NNF circuits")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate a circuit in a semiring, after checking soundness
    Eval(EvalArgs),
    /// Report decomposability, determinism and smoothness of a circuit
    Check(CheckArgs),
    /// Print the task profile and the circuit class it requires
    Classify(ClassifyArgs),
    /// Compile a DIMACS CNF to an sd-DNNF circuit file
    Compile(CompileArgs),
    /// Compare circuit evaluation with brute-force enumeration
    Verify(VerifyArgs),
    /// Test the semiring laws on random elements
    Axioms(AxiomsArgs),
}

#[derive(Debug, Args)]
struct SemiringArgs {
    /// Semiring name, e.g. prob, count, mpe, kweight, obdd
    #[arg(long)]
    semiring: Option<String>,
    /// Labeling file; its header names the semiring
    #[arg(long)]
    labels: Option<PathBuf>,
    /// Bound of kWEIGHT
    #[arg(long)]
    k: Option<u64>,
    /// Variable whose partial derivative GRAD tracks
    #[arg(long = "grad-var")]
    grad_var: Option<Var>,
    /// Variable order of OBDD, e.g. 1,2,3
    #[arg(long)]
    order: Option<String>,
    /// Seed for default random labels (overrides AMC_SEED)
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Debug, Args)]
struct EvalArgs {
    #[arg(long)]
    circuit: PathBuf,
    #[command(flatten)]
    semiring: SemiringArgs,
    /// strict refuses unsound circuits, repair smooths when that suffices,
    /// force evaluates anyway
    #[arg(long, default_value = "strict")]
    mode: Mode,
    /// Variable budget of the semantic determinism test
    #[arg(long, default_value_t = DEFAULT_DETERMINISM_BUDGET)]
    budget: usize,
    /// Do not account for variables the root does not mention
    #[arg(long)]
    no_extend: bool,
    /// Where to write a diagram-valued result
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    json: bool,
}

#[derive(Debug, Args)]
struct CheckArgs {
    #[arg(long)]
    circuit: PathBuf,
    #[arg(long, default_value_t = DEFAULT_DETERMINISM_BUDGET)]
    budget: usize,
    #[arg(long)]
    json: bool,
}

#[derive(Debug, Args)]
struct ClassifyArgs {
    #[command(flatten)]
    semiring: SemiringArgs,
    #[arg(long)]
    json: bool,
}

#[derive(Debug, Args)]
struct CompileArgs {
    /// DIMACS CNF input
    #[arg(long)]
    cnf: PathBuf,
    /// Diagram variable order, e.g. 3,1,2; ascending by default
    #[arg(long)]
    order: Option<String>,
    /// Output NNF file
    #[arg(long)]
    out: PathBuf,
    #[arg(long)]
    json: bool,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[arg(long)]
    circuit: PathBuf,
    #[command(flatten)]
    semiring: SemiringArgs,
    /// Largest number of variables to enumerate
    #[arg(long, default_value_t = DEFAULT_ENUMERATION_BUDGET)]
    budget: u32,
    #[arg(long)]
    no_extend: bool,
    #[arg(long)]
    json: bool,
}

#[derive(Debug, Args)]
struct AxiomsArgs {
    #[arg(long)]
    semiring: String,
    #[arg(long)]
    k: Option<u64>,
    #[arg(long = "grad-var")]
    grad_var: Option<Var>,
    #[arg(long)]
    order: Option<String>,
    #[arg(long, default_value_t = 1000)]
    trials: usize,
    /// Overrides AMC_SEED
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    json: bool,
}

/// A failure that ends the command with `code`.
struct Failure {
    code: i32,
    message: String,
}

fn input(message: impl ToString) -> Failure {
    Failure {
        code: EXIT_INPUT,
        message: message.to_string(),
    }
}

type CmdResult = Result<i32, Failure>;

/// Output sinks, so that tests can capture what a command prints.
struct Io<'a> {
    out: &'a mut dyn Write,
}

impl Io<'_> {
    fn line(&mut self, text: impl AsRef<str>) {
        let _ = writeln!(self.out, "{}", text.as_ref());
    }
}

/// Runs the tool on `args` (program name first), printing to `out` and
/// `err`, and returns the exit code. `env_seed` is the value of `AMC_SEED`.
pub fn run(
    args: impl IntoIterator<Item = impl Into<OsString> + Clone>,
    env_seed: Option<&str>,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> i32 {
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                write!(err, "{text}")
            } else {
                write!(out, "{text}")
            };
            return code;
        }
    };
    let mut io = Io { out };
    let result = env_seed_value(env_seed).and_then(|env_seed| match cli.command {
        Command::Eval(a) => cmd_eval(a, env_seed, &mut io),
        Command::Check(a) => cmd_check(a, &mut io),
        Command::Classify(a) => cmd_classify(a, env_seed, &mut io),
        Command::Compile(a) => cmd_compile(a, &mut io),
        Command::Verify(a) => cmd_verify(a, env_seed, &mut io),
        Command::Axioms(a) => cmd_axioms(a, env_seed, &mut io),
    });
    match result {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

/// Entry point of the binary.
pub fn main_with_env() -> i32 {
    let env_seed = std::env::var("AMC_SEED").ok();
    let mut out = std::io::stdout().lock();
    let code = run(std::env::args_os(), env_seed.as_deref(), &mut out, &mut std::io::stderr().lock());
    let _ = out.flush();
    code
}

fn env_seed_value(text: Option<&str>) -> Result<Option<u64>, Failure> {
    text.map(|t| {
        t.trim()
            .parse::<u64>()
            .map_err(|_| input(format!("AMC_SEED must be an unsigned integer, found `{t}`")))
    })
    .transpose()
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| input(format!("{}: {e}", path.display())))
}

fn load_circuit(path: &Path) -> Result<Circuit, Failure> {
    parse_nnf(&read(path)?).map_err(|e| input(format!("{}: {e}", path.display())))
}

fn order_arg(text: &Option<String>) -> Result<Option<Vec<Var>>, Failure> {
    text.as_deref().map(parse_order).transpose().map_err(input)
}

fn params(k: Option<u64>, grad_var: Option<Var>, order: Option<Vec<Var>>) -> SemiringParams {
    SemiringParams { k, grad_var, order }
}

/// The semiring and labeling for a command over `n` variables, from a
/// labeling file or from the named semiring's defaults. Returns a note on
/// where the labels came from.
fn load_semiring(a: &SemiringArgs, n: u32, env_seed: Option<u64>) -> Result<(SemiringDescriptor, Labeling, String), Failure> {
    let order = order_arg(&a.order)?;
    if let Some(path) = &a.labels {
        let (desc, lab) = parse_labeling(&read(path)?).map_err(|e| input(format!("{}: {e}", path.display())))?;
        if let Some(name) = &a.semiring {
            let named = Builtin::from_name(name).ok_or_else(|| input(format!("unknown semiring `{name}`")))?;
            if desc.kind() != Some(named) {
                return Err(input(format!(
                    "--semiring {name} disagrees with {} named in {}",
                    desc.name(),
                    path.display()
                )));
            }
        }
        if a.k.is_some() || a.grad_var.is_some() || order.is_some() {
            return Err(input("semiring parameters come from the labeling file header"));
        }
        return Ok((desc, lab, format!("labels from {}", path.display())));
    }
    let name = a
        .semiring
        .as_deref()
        .ok_or_else(|| input("either --semiring or --labels is required"))?;
    let which = Builtin::from_name(name).ok_or_else(|| input(format!("unknown semiring `{name}`")))?;
    let order = match (which, order) {
        (Builtin::Obdd, None) => Some((1..=n.max(1)).collect()),
        (_, o) => o,
    };
    let desc = SemiringDescriptor::builtin(name, &params(a.k, a.grad_var, order)).map_err(input)?;
    if let Ok(lab) = Labeling::canonical(&desc, n) {
        return Ok((desc, lab, "canonical labels".into()));
    }
    let seed = a.seed.or(env_seed).unwrap_or(DEFAULT_SEED);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let lab = Labeling::random(&desc, n, &mut rng).map_err(input)?;
    Ok((desc, lab, format!("random labels, seed {seed}")))
}

/// Reals printed to 15 significant digits, which hides last-place rounding
/// noise while staying in the labeling-file grammar.
fn show(v: &Value) -> String {
    fn r(x: f64) -> f64 {
        if x.is_finite() {
            format!("{x:.14e}").parse().unwrap_or(x)
        } else {
            x
        }
    }
    match v {
        Value::Real(x) => Value::Real(r(*x)).to_string(),
        Value::Pair(a, b) => Value::Pair(r(*a), r(*b)).to_string(),
        other => other.to_string(),
    }
}

/// Prints `v`, writing diagram values to `out` and printing the path instead.
fn show_or_write(desc: &SemiringDescriptor, v: &Value, out: Option<&Path>, n: u32) -> Result<String, Failure> {
    let Value::Bdd(r) = v else {
        return Ok(show(v));
    };
    let Some(path) = out else {
        return Err(input("diagram results are written to a file; pass --out"));
    };
    let store = desc.store().expect("diagram values come with a store");
    let circuit = store.lock().expect("diagram store poisoned").to_circuit(*r).map_err(input)?;
    let n = n.max(circuit.variable_count());
    let circuit = propagate_constants(&circuit).with_variable_count(n);
    fs::write(path, write_nnf(&circuit)).map_err(|e| input(format!("{}: {e}", path.display())))?;
    Ok(path.display().to_string())
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn cmd_eval(a: EvalArgs, env_seed: Option<u64>, io: &mut Io) -> CmdResult {
    let c = load_circuit(&a.circuit)?;
    let (desc, lab, source) = load_semiring(&a.semiring, c.variable_count(), env_seed)?;
    let opts = EvalOptions {
        mode: a.mode,
        extend_root: !a.no_extend,
        budget: a.budget,
    };
    let r = match evaluate_checked(&c, &desc, &lab, opts) {
        Ok(r) => r,
        Err(e @ EvalError::Refused { .. }) => {
            return Err(Failure {
                code: EXIT_UNSOUND,
                message: e.to_string(),
            })
        }
        Err(e) => return Err(input(e)),
    };
    let value = show_or_write(&desc, &r.value, a.out.as_deref(), c.variable_count())?;
    if a.json {
        io.line(
            json!({
                "command": "eval",
                "semiring": desc.name(),
                "value": value,
                "class": r.report.class.name(),
                "class_is_lower_bound": r.report.class_is_lower_bound,
                "required": r.required.name(),
                "profile": r.profile,
                "status": r.status,
                "mode": a.mode,
                "extended": r.extended,
                "labels": source,
                "note": r.note,
            })
            .to_string(),
        );
    } else {
        io.line(&value);
        io.line(format!("class: {}", r.report.class_label()));
        io.line(format!("required: {}", r.required));
        io.line(format!("status: {}", r.status));
        io.line(format!("note: {}; {source}", r.note));
    }
    Ok(EXIT_OK)
}

fn determinism_text(report: &PropertyReport) -> &'static str {
    match (&report.determinism, report.syntactically_deterministic) {
        (Determinism::Holds, _) => "yes",
        (Determinism::Fails(_), _) => "no",
        (Determinism::Undecided { .. }, true) => "yes (structural)",
        (Determinism::Undecided { .. }, false) => "undecided (budget)",
    }
}

fn cmd_check(a: CheckArgs, io: &mut Io) -> CmdResult {
    let c = load_circuit(&a.circuit)?;
    let report = classify_circuit(&c, a.budget);
    if a.json {
        io.line(
            json!({
                "command": "check",
                "decomposable": report.is_decomposable(),
                "deterministic": report.is_deterministic(),
                "smooth": report.is_smooth(),
                "class": report.class.name(),
                "class_is_lower_bound": report.class_is_lower_bound,
                "report": report,
            })
            .to_string(),
        );
        return Ok(EXIT_OK);
    }
    io.line(format!(
        "decomposable: {}, deterministic: {}, smooth: {}, class: {}",
        yes_no(report.is_decomposable()),
        determinism_text(&report),
        yes_no(report.is_smooth()),
        report.class_label()
    ));
    if let Some(w) = &report.decomposable {
        io.line(format!(
            "  not decomposable: AND node {} has children {} and {} sharing variable {}",
            w.node, w.left, w.right, w.var
        ));
    }
    match &report.determinism {
        Determinism::Fails(w) => {
            let model: Vec<String> = w.model.iter().map(|l| l.to_string()).collect();
            io.line(format!(
                "  not deterministic: OR node {} has children {} and {} sharing model {{{}}}",
                w.node,
                w.left,
                w.right,
                model.join(", ")
            ));
        }
        Determinism::Undecided { node, needed, budget } => io.line(format!(
            "  determinism at OR node {node} needs {needed} variables, over the budget of {budget}"
        )),
        Determinism::Holds => {}
    }
    if let Some(w) = &report.smooth {
        io.line(format!(
            "  not smooth: OR node {} has children {} and {}; variable {} is mentioned by only one",
            w.node, w.left, w.right, w.var
        ));
    }
    Ok(EXIT_OK)
}

fn cmd_classify(a: ClassifyArgs, env_seed: Option<u64>, io: &mut Io) -> CmdResult {
    let s = &a.semiring;
    let (desc, profile, source) = if s.labels.is_some() {
        let (desc, lab, source) = load_semiring(s, 0, env_seed)?;
        let p = task_profile_of(&desc, &lab);
        (desc, p, source)
    } else {
        let n = order_arg(&s.order)?.map_or(1, |o| o.iter().copied().max().unwrap_or(1));
        let (desc, _, _) = load_semiring(s, n, env_seed)?;
        let p = desc.kind().expect("named semirings are built in").canonical_profile();
        (desc, p, "canonical labeling".to_string())
    };
    let required = required_circuit_class(profile);
    if a.json {
        io.line(
            json!({
                "command": "classify",
                "semiring": desc.name(),
                "profile": profile,
                "required": required.name(),
                "labels": source,
            })
            .to_string(),
        );
    } else {
        io.line(format!("required: {required}"));
        io.line(format!("profile: {profile}"));
        io.line(format!("semiring: {} ({source})", desc.name()));
    }
    Ok(EXIT_OK)
}

fn cmd_compile(a: CompileArgs, io: &mut Io) -> CmdResult {
    let cnf = parse_dimacs(&read(&a.cnf)?).map_err(|e| input(format!("{}: {e}", a.cnf.display())))?;
    let order = order_arg(&a.order)?;
    let compiled = compile_cnf_to_sddnnf(&cnf, order.as_deref()).map_err(input)?;
    let c = &compiled.circuit;
    fs::write(&a.out, write_nnf(c)).map_err(|e| input(format!("{}: {e}", a.out.display())))?;
    if a.json {
        io.line(
            json!({
                "command": "compile",
                "out": a.out.display().to_string(),
                "variables": c.variable_count(),
                "nodes": c.len(),
                "edges": c.edge_count(),
                "diagram_nodes": compiled.diagram_size,
                "notices": cnf.notices,
            })
            .to_string(),
        );
    } else {
        for n in &cnf.notices {
            io.line(format!("note: {n}"));
        }
        io.line(format!(
            "wrote {}: {} nodes, {} edges, {} variables ({} diagram nodes)",
            a.out.display(),
            c.len(),
            c.edge_count(),
            c.variable_count(),
            compiled.diagram_size
        ));
    }
    Ok(EXIT_OK)
}

/// Tolerance of `verify` on real carriers; evaluation and enumeration sum in
/// different orders.
const VERIFY_RELATIVE_TOLERANCE: f64 = 1e-9;

fn cmd_verify(a: VerifyArgs, env_seed: Option<u64>, io: &mut Io) -> CmdResult {
    let c = load_circuit(&a.circuit)?;
    let (desc, lab, source) = load_semiring(&a.semiring, c.variable_count(), env_seed)?;
    let opts = EvalOptions {
        mode: Mode::Force,
        extend_root: !a.no_extend,
        budget: DEFAULT_DETERMINISM_BUDGET,
    };
    let r = evaluate_checked(&c, &desc, &lab, opts).map_err(input)?;
    let oracle = amc_brute_force_within(&c, &desc, &lab, a.budget).map_err(input)?;
    let matched = r.value.approx_eq_rel(&oracle, VERIFY_RELATIVE_TOLERANCE);
    let (ev, or) = (show(&r.value), show(&oracle));
    if a.json {
        io.line(
            json!({
                "command": "verify",
                "semiring": desc.name(),
                "match": matched,
                "evaluation": ev,
                "oracle": or,
                "class": r.report.class_label(),
                "required": r.required.name(),
                "status": r.status,
                "labels": source,
            })
            .to_string(),
        );
    } else {
        let verdict = if matched { "match" } else { "mismatch" };
        io.line(format!("{verdict}: evaluation {ev}, oracle {or}"));
        io.line(format!("class: {}", r.report.class_label()));
        io.line(format!("required: {}", r.required));
        io.line(format!("status: {}; {source}", r.status));
    }
    Ok(if matched { EXIT_OK } else { EXIT_UNSOUND })
}

fn cmd_axioms(a: AxiomsArgs, env_seed: Option<u64>, io: &mut Io) -> CmdResult {
    if a.trials == 0 {
        return Err(input("--trials must be at least 1"));
    }
    let which = Builtin::from_name(&a.semiring).ok_or_else(|| input(format!("unknown semiring `{}`", a.semiring)))?;
    let order = match (which, order_arg(&a.order)?) {
        (Builtin::Obdd, None) => Some(vec![1, 2, 3, 4]),
        (_, o) => o,
    };
    let desc = SemiringDescriptor::builtin(&a.semiring, &params(a.k, a.grad_var, order)).map_err(input)?;
    let seed = a.seed.or(env_seed).unwrap_or(DEFAULT_SEED);
    let report = check_axioms(&desc, a.trials, seed);
    if a.json {
        io.line(serde_json::to_string(&report).expect("reports serialize"));
    } else {
        io.line(format!("{}: {} trials, seed {seed}", desc.name(), a.trials));
        for l in &report.laws {
            if l.passed {
                io.line(format!("  {}: pass", l.law));
            } else {
                let ce = l.counterexample.as_ref().map(|c| c.join(", ")).unwrap_or_default();
                let why = l.error.as_ref().map(|e| format!(" ({e})")).unwrap_or_default();
                io.line(format!("  {}: FAIL at {ce}{why}", l.law));
            }
        }
        let failed = report.failures().count();
        if failed == 0 {
            io.line("all laws hold");
        } else {
            io.line(format!("{failed} law(s) violated"));
        }
    }
    Ok(if report.all_passed() { EXIT_OK } else { EXIT_AXIOM })
}
