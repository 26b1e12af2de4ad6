//! `nec`: deciding, model checking, frame checking, repair and sandbox runs
//! from the command line.
//!
//! Output is one line of JSON per result on stdout (human-readable with `--pretty`). Exit codes:
//! 0 success, 1 negative answer, 2 usage or input error, 3 internal
//! completeness error. Errors go to stderr as one JSON line
//! `{"error": <code>, "reason": <text>}`.

use clap::{Args, Parser, Subcommand};
use nec_core::closure::ClosureSets;
use nec_core::corpus::one_variable;
use nec_core::formula::Formula;
use nec_core::logic::{Logic, LogicParseError};
use nec_core::par::Execution;
use nec_core::prover::{decide, verify_certificate, verify_countermodel, Prover, ProverError, Verdict};
use nec_core::sandbox::{run_scenario, SandboxError, Scenario, Status, TraceJson};
use nec_core::semantics::{
    check_frame_class, repair_transitive, to_dot, FrameClass, FrameSpec, Model, ModelJson, SemanticsError, WorldId,
};
use serde::de::DeserializeOwned;
use serde_json::{json, Value};
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser, Debug)]
#[command(name = "nec", version, about = "Decision procedures and finite semantics for N, NP, ND, N4, NP4 and ND4")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Global {
    /// Logic for commands that take one (N, NP, ND, N4, NP4, ND4).
    #[arg(long, global = true)]
    logic: Option<String>,
    /// Human-readable output instead of JSON.
    #[arg(long, global = true)]
    pretty: bool,
    /// Accepted for reproducible scripts; every command is deterministic.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Premise-universe depth of the prover.
    #[arg(long, global = true, default_value_t = nec_core::prover::DEFAULT_DEPTH)]
    oracle_depth: usize,
    /// Stage horizon for `simulate`, overriding the scenario file.
    #[arg(long, global = true)]
    horizon: Option<u64>,
    /// Write the main output to FILE instead of stdout.
    #[arg(long, global = true, value_name = "FILE")]
    out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Decide a formula: exit 0 if provable, 1 if not.
    Decide {
        /// `[LOGIC] FORMULA`; the logic may also come from --logic.
        #[arg(num_args = 1..=2, required = true)]
        args: Vec<String>,
        /// Write the countermodel frame as DOT.
        #[arg(long, value_name = "FILE")]
        dot: Option<PathBuf>,
    },
    /// Print Sub, Sub* and the closure of a formula.
    Closure { formula: String },
    /// Check a formula in a model (or in the countermodel of a verdict file).
    CheckModel {
        model_file: PathBuf,
        formula: String,
        /// World to check at; defaults to the verdict's world, else all worlds.
        #[arg(long)]
        world: Option<WorldId>,
    },
    /// Check frame-class membership: N, NP, ND, serial, transitive, or a logic name.
    CheckFrame { frame_file: PathBuf, class: String },
    /// Transitivity repair of a frame relative to a formula.
    Repair {
        frame_file: PathBuf,
        formula: String,
        #[arg(long, value_name = "FILE")]
        dot: Option<PathBuf>,
    },
    /// Re-check the evidence in a verdict file.
    Certify { verdict_file: PathBuf },
    /// Run a sandbox scenario and check its trace claims.
    Simulate { scenario_file: PathBuf },
    /// Decide every one-variable formula up to MAX_SIZE nodes, as JSON lines in code order.
    Enumerate {
        /// `[LOGIC] MAX_SIZE`; the logic may also come from --logic.
        #[arg(num_args = 1..=2, required = true)]
        args: Vec<String>,
    },
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Input(String),
    Completeness(String),
}

impl Failure {
    fn code(&self) -> &'static str {
        match self {
            Failure::Usage(_) => "usage",
            Failure::Input(_) => "input",
            Failure::Completeness(_) => "internal-completeness",
        }
    }

    fn reason(&self) -> &str {
        match self {
            Failure::Usage(r) | Failure::Input(r) | Failure::Completeness(r) => r,
        }
    }

    fn exit(&self) -> u8 {
        match self {
            Failure::Usage(_) | Failure::Input(_) => 2,
            Failure::Completeness(_) => 3,
        }
    }
}

impl From<SemanticsError> for Failure {
    fn from(e: SemanticsError) -> Failure {
        Failure::Input(e.to_string())
    }
}

impl From<ProverError> for Failure {
    fn from(e: ProverError) -> Failure {
        match e {
            ProverError::InternalCompleteness(_) => Failure::Completeness(e.to_string()),
            ProverError::Semantics(e) => e.into(),
        }
    }
}

impl From<SandboxError> for Failure {
    fn from(e: SandboxError) -> Failure {
        match e {
            SandboxError::Prover(e) => e.into(),
            e => Failure::Input(e.to_string()),
        }
    }
}

/// A command result: JSON, its human-readable rendering and the exit code.
struct Output {
    json: Value,
    text: String,
    positive: bool,
}

enum Rendered {
    One(Output),
    Lines(Vec<Output>),
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let reason = e.to_string();
            let first = reason.lines().next().unwrap_or("").trim_start_matches("error: ");
            return fail(&Failure::Usage(first.to_string()));
        }
    };
    match run(&cli).and_then(|r| emit(&cli.global, r)) {
        Ok(code) => code,
        Err(f) => fail(&f),
    }
}

fn fail(f: &Failure) -> ExitCode {
    eprintln!("{}", json!({"error": f.code(), "reason": f.reason()}));
    ExitCode::from(f.exit())
}

fn emit(g: &Global, r: Rendered) -> Result<ExitCode, Failure> {
    // JSON lines succeed as a whole.
    let (outs, ok) = match r {
        Rendered::One(o) => {
            let ok = o.positive;
            (vec![o], ok)
        }
        Rendered::Lines(v) => (v, true),
    };
    let mut buf = String::new();
    for o in &outs {
        if g.pretty {
            buf.push_str(&o.text);
            if !o.text.ends_with('\n') {
                buf.push('\n');
            }
        } else {
            let _ = writeln!(buf, "{}", o.json);
        }
    }
    match &g.out {
        Some(p) => write_file(p, &buf)?,
        None => print!("{buf}"),
    }
    Ok(if ok { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn write_file(p: &Path, s: &str) -> Result<(), Failure> {
    std::fs::write(p, s).map_err(|e| Failure::Input(format!("{}: {e}", p.display())))
}

fn read_json<T: DeserializeOwned>(p: &Path) -> Result<T, Failure> {
    let s = std::fs::read_to_string(p).map_err(|e| Failure::Input(format!("{}: {e}", p.display())))?;
    serde_json::from_str(&s).map_err(|e| Failure::Input(format!("{}: {e}", p.display())))
}

fn formula(s: &str) -> Result<Formula, Failure> {
    s.parse().map_err(|e| Failure::Usage(format!("formula {s:?}: {e}")))
}

fn logic(s: &str) -> Result<Logic, Failure> {
    s.parse().map_err(|e: LogicParseError| Failure::Usage(e.to_string()))
}

/// Splits `[LOGIC] X` positional arguments, falling back on --logic.
fn logic_and_arg<'a>(g: &Global, args: &'a [String]) -> Result<(Logic, &'a str), Failure> {
    match (args, &g.logic) {
        ([l, x], None) => Ok((logic(l)?, x)),
        ([_, _], Some(_)) => Err(Failure::Usage("logic given both as argument and as --logic".into())),
        ([x], Some(l)) => Ok((logic(l)?, x)),
        ([_], None) => Err(Failure::Usage("no logic given".into())),
        _ => unreachable!("clap bounds the argument count"),
    }
}

fn prover(g: &Global, l: Logic) -> Result<Prover, Failure> {
    if g.oracle_depth == 0 {
        return Err(Failure::Usage("--oracle-depth must be positive".into()));
    }
    Ok(Prover::with_depth(l, g.oracle_depth))
}

fn to_value<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("serialisable")
}

fn run(cli: &Cli) -> Result<Rendered, Failure> {
    let g = &cli.global;
    let one = |o: Output| Ok(Rendered::One(o));
    match &cli.command {
        Command::Decide { args, dot } => one(cmd_decide(g, args, dot.as_deref())?),
        Command::Closure { formula: f } => {
            let c = ClosureSets::of(&formula(f)?);
            let text = format!(
                "Sub ({}): {}\nSub* ({}): {}\nclosure ({}): {}",
                c.sub.len(),
                join(&c.sub),
                c.sub_star.len(),
                join(&c.sub_star),
                c.closure.len(),
                join(&c.closure)
            );
            one(Output { json: to_value(&c), text, positive: true })
        }
        Command::CheckModel { model_file, formula: f, world } => one(cmd_check_model(g, model_file, f, *world)?),
        Command::CheckFrame { frame_file, class } => one(cmd_check_frame(frame_file, class)?),
        Command::Repair { frame_file, formula: f, dot } => {
            let (m, _) = load_model(frame_file)?;
            let a = formula(f)?;
            let mut repaired = Model::new(repair_transitive(&m.frame, &a));
            for (v, set) in m.valuation() {
                repaired.set_valuation(v.clone(), set.clone());
            }
            if let Some(p) = dot {
                write_file(p, &to_dot(&repaired.frame))?;
            }
            let j = ModelJson::from_model(&repaired);
            let text = format!(
                "repaired relative to {a}: {} worlds, {} explicit relations (was {})",
                j.worlds.len(),
                j.relations.len(),
                m.frame.explicit().len()
            );
            one(Output { json: to_value(&j), text, positive: true })
        }
        Command::Certify { verdict_file } => one(cmd_certify(verdict_file)?),
        Command::Simulate { scenario_file } => {
            let mut sc: Scenario = read_json(scenario_file)?;
            if let Some(h) = g.horizon {
                sc.horizon = h;
            }
            let (trace, report) = run_scenario(&sc)?;
            let j = TraceJson::new(&trace, &report);
            let mut text = format!("{} run, horizon {}", j.logic, j.horizon);
            match j.switch_stage {
                Some(s) => {
                    let _ = write!(text, ", switch at stage {s} to h = {}", j.h.last().copied().unwrap_or(0));
                }
                None => text.push_str(", no switch"),
            }
            for a in &j.assertions {
                let st = if a.status == Status::Pass { "pass" } else { "FAIL" };
                let _ = write!(text, "\n  {st:4} {}", a.claim);
                if let Some(w) = &a.witness {
                    let _ = write!(text, ": {w}");
                }
            }
            one(Output { json: to_value(&j), text, positive: report.all_pass() })
        }
        Command::Enumerate { args } => {
            let (l, n) = logic_and_arg(g, args)?;
            let n: usize = n.parse().map_err(|_| Failure::Usage(format!("MAX_SIZE {n:?} is not a number")))?;
            let p = prover(g, l)?;
            let corpus = one_variable(n);
            let results = Execution::best().map(&corpus, |f| decide(&p, f));
            let mut lines = Vec::with_capacity(corpus.len());
            for (f, v) in corpus.iter().zip(results) {
                let v = v?;
                lines.push(Output {
                    json: json!({"formula": f, "gn": f.gn(), "verdict": v.verdict}),
                    text: format!("{:10} {f}", to_value(&v.verdict).as_str().unwrap_or("")),
                    positive: true,
                });
            }
            Ok(Rendered::Lines(lines))
        }
    }
}

fn join<'a>(it: impl IntoIterator<Item = &'a Formula>) -> String {
    it.into_iter().map(Formula::to_string).collect::<Vec<_>>().join(", ")
}

fn cmd_decide(g: &Global, args: &[String], dot: Option<&Path>) -> Result<Output, Failure> {
    let (l, f) = logic_and_arg(g, args)?;
    let a = formula(f)?;
    let v = decide(&prover(g, l)?, &a)?;
    let text = match (&v.certificate, v.countermodel()) {
        (Some(c), _) => format!("{l} proves {a}\n  certificate size {}", c.size()),
        (None, Some(cm)) => {
            let (m, w) = cm?;
            if let Some(p) = dot {
                write_file(p, &to_dot(&m.frame))?;
            }
            format!("{l} does not prove {a}\n  countermodel with {} worlds, refuted at world {w}", m.frame.len())
        }
        (None, None) => unreachable!("verdicts carry evidence"),
    };
    Ok(Output { json: to_value(&v), text, positive: v.is_provable() })
}

/// A model file, or a verdict file with its countermodel and world.
fn load_model(p: &Path) -> Result<(Model, Option<WorldId>), Failure> {
    let v: Value = read_json(p)?;
    if v.get("verdict").is_some() {
        let verdict: Verdict =
            serde_json::from_value(v).map_err(|e| Failure::Input(format!("{}: {e}", p.display())))?;
        return match verdict.countermodel() {
            Some(cm) => {
                let (m, w) = cm?;
                Ok((m, Some(w)))
            }
            None => Err(Failure::Input(format!("{}: a provable verdict has no model", p.display()))),
        };
    }
    let j: ModelJson = serde_json::from_value(v).map_err(|e| Failure::Input(format!("{}: {e}", p.display())))?;
    Ok((j.to_model()?, None))
}

fn cmd_check_model(g: &Global, p: &Path, f: &str, world: Option<WorldId>) -> Result<Output, Failure> {
    let (m, verdict_world) = load_model(p)?;
    let a = formula(f)?;
    let mut json = json!({"formula": a});
    let mut text;
    let positive = match world.or(verdict_world) {
        Some(w) => {
            let forced = m.forces(w, &a)?;
            json["world"] = json!(w);
            json["forced"] = json!(forced);
            text = format!("world {w} {} {a}", if forced { "forces" } else { "does not force" });
            forced
        }
        None => {
            let mut refuting = Vec::new();
            for &w in m.frame.worlds() {
                if !m.forces(w, &a)? {
                    refuting.push(w);
                }
            }
            json["valid"] = json!(refuting.is_empty());
            json["refutedAt"] = json!(refuting);
            text = if refuting.is_empty() {
                format!("{a} holds at every world")
            } else {
                format!("{a} fails at worlds {refuting:?}")
            };
            refuting.is_empty()
        }
    };
    if let Some(l) = &g.logic {
        let l = logic(l)?;
        let mut holds = true;
        for c in l.frame_classes() {
            holds &= check_frame_class(&m.frame, &c)?.holds;
        }
        json["logic"] = json!(l);
        json["inFrameClass"] = json!(holds);
        let _ = write!(text, "\n  frame {} an {l}-frame", if holds { "is" } else { "is not" });
    }
    Ok(Output { json, text, positive })
}

/// Frame-class names: N, NP, ND, serial, transitive, or a logic name
/// (NR and NR4 stand for the serial and serial transitive frames).
fn classes(name: &str) -> Result<Vec<FrameClass>, Failure> {
    Ok(match name.to_ascii_lowercase().as_str() {
        "serial" => vec![FrameClass::Serial],
        "transitive" => vec![FrameClass::Transitive],
        "nr" => vec![FrameClass::Serial],
        "nr4" => vec![FrameClass::Serial, FrameClass::Transitive],
        _ => match logic(name) {
            Ok(l) => match l {
                Logic::N => vec![FrameClass::N],
                Logic::NP => vec![FrameClass::NP],
                Logic::ND => vec![FrameClass::ND],
                l => l.frame_classes(),
            },
            Err(_) => {
                return Err(Failure::Usage(format!(
                    "unknown frame class {name:?}; expected N, NP, ND, serial, transitive or a logic name"
                )))
            }
        },
    })
}

fn cmd_check_frame(p: &Path, class: &str) -> Result<Output, Failure> {
    let (m, _) = load_model(p)?;
    let frame: &FrameSpec = &m.frame;
    let mut checks = Vec::new();
    let mut text = String::new();
    let mut holds = true;
    for c in classes(class)? {
        let r = check_frame_class(frame, &c)?;
        holds &= r.holds;
        let _ = write!(text, "{c}: {}", if r.holds { "holds" } else { "fails" });
        if let Some(w) = &r.witness {
            let _ = write!(text, " ({})", to_value(w));
        }
        text.push('\n');
        let mut j = to_value(&r);
        j["class"] = json!(c.to_string());
        checks.push(j);
    }
    let json = json!({"class": class, "holds": holds, "checks": checks});
    Ok(Output { json, text, positive: holds })
}

fn cmd_certify(p: &Path) -> Result<Output, Failure> {
    let v: Verdict = read_json(p)?;
    let (ok, what) = match (&v.certificate, v.countermodel()) {
        (Some(c), _) => {
            let ok = c.goal == v.formula && verify_certificate(v.logic, c);
            (ok, "certificate")
        }
        (None, Some(cm)) => {
            let (m, w) = cm?;
            (verify_countermodel(v.logic, &m, w, &v.formula)?, "countermodel")
        }
        (None, None) => (false, "evidence"),
    };
    let text = format!("{what} for {} in {}: {}", v.formula, v.logic, if ok { "verified" } else { "REJECTED" });
    Ok(Output {
        json: json!({"logic": v.logic, "formula": v.formula, "verdict": v.verdict, "verified": ok}),
        text,
        positive: ok,
    })
}
