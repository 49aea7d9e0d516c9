use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use school_choice::io::{
    priorities_names, realization_json, Instance, MatchingFile, ProfileFile, RelationFile,
    TiebreakFile,
};
use school_choice::mechanisms::{
    deferred_acceptance_with, eadam_trace, enumerate_extension_profiles, extend_profile,
    extend_profile_tiebreak, EadamConfig, EadamRound, ExtensionProfile, TiebreakProfile,
    DEFAULT_MAX_PROFILES,
};
use school_choice::model::{sosm_set_oracle_with, stable_set_oracle_with, MatchingGuard};
use school_choice::random::{random_problem, random_violation_set, ClassSpec, RandomSpec};
use school_choice::relations::{classify, LowestIndex};
use school_choice::violations::{
    effective_problem, partial_stability_report, realize_as_violation_model, ViolationSet,
};
use school_choice::{fixtures, Error, Problem, SchoolId};

mod check;

#[derive(Parser)]
#[command(
    name = "school-choice",
    version,
    about = "School choice with partial priorities"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Classify each school's priority relation.
    Classify {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long)]
        json: bool,
    },
    /// Extend the priorities to total orders.
    Extend(ExtendArgs),
    /// Run deferred acceptance under an extension profile.
    Da(RunArgs),
    /// Run EADAM from an extension profile.
    Eadam {
        #[command(flatten)]
        run: RunArgs,
        /// Write one JSON line per round to stderr.
        #[arg(long)]
        trace: bool,
        /// Settle underdemanded schools repeatedly within a round.
        #[arg(long)]
        settle_to_fixpoint: bool,
    },
    /// Check a structural claim on fixtures, instance files or random instances.
    Check(check::CheckArgs),
    /// Evaluate partial stability of a matching under the instance's violations.
    Pstable {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, value_name = "FILE")]
        matching: PathBuf,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Emit the priorities with the allowed violations removed.
    Reduce {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Express an acyclic relation as a total order and a violation set.
    Realize {
        /// Relation file: {"students": [...], "pairs": [[i, j], ...]}.
        relation: PathBuf,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// List stable matchings (or SOSMs) by exhaustive enumeration.
    Oracle {
        #[command(flatten)]
        input: InputArgs,
        /// Keep only the stable matchings no other stable matching dominates.
        #[arg(long)]
        sosm: bool,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Generate a random instance.
    Generate(GenerateArgs),
}

#[derive(Args)]
pub(crate) struct InputArgs {
    /// Instance file.
    #[arg(required_unless_present = "fixture", conflicts_with = "fixture")]
    file: Option<PathBuf>,
    /// Use a built-in fixture instead of a file.
    #[arg(long)]
    fixture: Option<Fixture>,
}

#[derive(Clone, Copy, ValueEnum)]
pub(crate) enum Fixture {
    Example1,
    Example2,
}

impl Fixture {
    pub(crate) fn problem(self) -> Problem {
        match self {
            Fixture::Example1 => fixtures::example1(),
            Fixture::Example2 => fixtures::example2(),
        }
    }
}

#[derive(Args)]
struct OutputArgs {
    /// Write to this file instead of stdout.
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum TiebreakArg {
    Single,
    Multiple,
}

#[derive(Args)]
struct ExtendArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Random tiebreaking ranks; without it the lowest-index student is
    /// picked first.
    #[arg(long, conflicts_with_all = ["rank_file", "enumerate"])]
    tiebreak: Option<TiebreakArg>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Tiebreak file: {"kind": "single", "order": [...]} or
    /// {"kind": "multiple", "orders": {...}}.
    #[arg(long, value_name = "FILE", conflicts_with = "enumerate")]
    rank_file: Option<PathBuf>,
    /// Emit every extension profile, one JSON object per line.
    #[arg(long)]
    enumerate: bool,
    #[arg(long, default_value_t = DEFAULT_MAX_PROFILES)]
    max_profiles: u128,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct RunArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Extension profile file. Defaults to the instance's own
    /// "extension_profile", then to the lowest-index extension.
    #[arg(long, value_name = "FILE", conflicts_with = "tiebreak")]
    profile: Option<PathBuf>,
    /// Build the profile by random tiebreaking instead.
    #[arg(long)]
    tiebreak: Option<TiebreakArg>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct GenerateArgs {
    #[arg(long, default_value_t = 4)]
    students: usize,
    #[arg(long, default_value_t = 3)]
    schools: usize,
    #[arg(long, default_value_t = 1)]
    min_capacity: usize,
    #[arg(long, default_value_t = 1)]
    max_capacity: usize,
    /// A, P, W, T, A\P, P\W or W\T.
    #[arg(long, default_value = "P", value_parser = parse_class)]
    class: ClassSpec,
    #[arg(long, default_value_t = 0.5)]
    density: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Also draw a violation set with this density.
    #[arg(long, value_name = "DENSITY")]
    violations: Option<f64>,
    #[command(flatten)]
    output: OutputArgs,
}

pub(crate) fn parse_class(s: &str) -> Result<ClassSpec, String> {
    ClassSpec::parse(s)
        .ok_or_else(|| format!("unknown class {s:?}; expected one of A, P, W, T, A\\P, P\\W, W\\T"))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn exit_code(e: &anyhow::Error) -> u8 {
    match e.chain().find_map(|c| c.downcast_ref::<Error>()) {
        Some(Error::GuardExceeded { .. }) => 3,
        Some(Error::Invariant(_)) => 1,
        _ => 2,
    }
}

fn run(cli: Cli) -> anyhow::Result<ExitCode> {
    match cli.command {
        Command::Classify { input, json } => cmd_classify(&load(&input)?.problem, json),
        Command::Extend(args) => cmd_extend(args),
        Command::Da(args) => {
            let inst = load(&args.input)?;
            let profile = run_profile(&inst, &args)?;
            let mu = deferred_acceptance_with(&inst.problem, &profile)
                .map_err(|e| name_school(e, &inst.problem))?;
            emit_json(
                &args.output,
                &serde_json::to_value(MatchingFile::new(&inst.problem, &mu))?,
            )
        }
        Command::Eadam {
            run,
            trace,
            settle_to_fixpoint,
        } => {
            let inst = load(&run.input)?;
            let p = &inst.problem;
            let profile = run_profile(&inst, &run)?;
            let out = eadam_trace(p, &profile, EadamConfig { settle_to_fixpoint })
                .map_err(|e| name_school(e, p))?;
            if trace {
                let mut err = std::io::stderr().lock();
                for round in &out.rounds {
                    writeln!(err, "{}", round_json(p, round))?;
                }
            }
            emit_json(
                &run.output,
                &serde_json::to_value(MatchingFile::new(p, &out.outcome))?,
            )
        }
        Command::Check(args) => check::cmd_check(args),
        Command::Pstable {
            input,
            matching,
            output,
        } => {
            let inst = load(&input)?;
            let p = &inst.problem;
            let mu = MatchingFile::parse(p, &read(&matching)?)
                .with_context(|| format!("in {}", matching.display()))?;
            let c = inst
                .violations
                .clone()
                .unwrap_or_else(|| ViolationSet::empty(p));
            let r = partial_stability_report(p, &c, &mu)?;
            let triple =
                |v: &[(school_choice::StudentId, school_choice::StudentId, SchoolId)]| {
                    v.iter()
                        .map(|&(i, j, s)| {
                            json!([p.student_name(i), p.student_name(j), p.school_name(s)])
                        })
                        .collect::<Vec<_>>()
                };
            emit_json(
                &output,
                &json!({
                    "partially_stable": r.partially_stable,
                    "individually_rational": r.individually_rational,
                    "wasteful": r.wasteful_witnesses
                        .iter()
                        .map(|&(i, s)| json!([p.student_name(i), p.school_name(s)]))
                        .collect::<Vec<_>>(),
                    "unallowed_violations": triple(&r.unallowed_violations),
                    "allowed_violations": triple(&r.allowed_violations),
                }),
            )
        }
        Command::Reduce { input, output } => {
            let inst = load(&input)?;
            let p = &inst.problem;
            let c = inst
                .violations
                .clone()
                .unwrap_or_else(|| ViolationSet::empty(p));
            let reduced = effective_problem(p, &c)?;
            emit_json(
                &output,
                &json!({ "priorities": priorities_names(p, reduced.priorities()) }),
            )
        }
        Command::Realize { relation, output } => {
            let text = read(&relation)?;
            let file: RelationFile = serde_json::from_str(&text)
                .with_context(|| format!("in {}", relation.display()))?;
            let rel = file
                .to_relation()
                .with_context(|| format!("in {}", relation.display()))?;
            let (order, allowed) = realize_as_violation_model(&rel)?;
            let allowed: Vec<_> = allowed.into_iter().collect();
            emit_json(&output, &realization_json(&file.students, &order, &allowed))
        }
        Command::Oracle {
            input,
            sosm,
            output,
        } => {
            let p = load(&input)?.problem;
            let guard = MatchingGuard::default();
            let set = if sosm {
                sosm_set_oracle_with(&p, guard)?
            } else {
                stable_set_oracle_with(&p, guard)?
            };
            let lines: Vec<String> = set
                .iter()
                .map(|mu| serde_json::to_string(&MatchingFile::new(&p, mu)))
                .collect::<Result<_, _>>()?;
            emit_lines(&output, &lines)
        }
        Command::Generate(args) => {
            use rand::SeedableRng;
            let spec = RandomSpec {
                students: args.students,
                schools: args.schools,
                min_capacity: args.min_capacity,
                max_capacity: args.max_capacity,
                class: args.class,
                density: args.density,
                seed: args.seed,
            };
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(args.seed);
            let mut inst = Instance::new(random_problem(&spec, &mut rng)?);
            if let Some(d) = args.violations {
                if !(0.0..=1.0).contains(&d) {
                    bail!(Error::InvalidInput(format!(
                        "violation density {d} outside [0, 1]"
                    )));
                }
                inst.violations = Some(random_violation_set(&inst.problem, d, &mut rng)?);
            }
            emit_json(&args.output, &serde_json::to_value(inst.to_file())?)
        }
    }
}

fn cmd_classify(p: &Problem, as_json: bool) -> anyhow::Result<ExitCode> {
    let rows: Vec<Value> = p
        .schools()
        .map(|s| {
            let c = classify(p.priority(s));
            json!({
                "school": p.school_name(s),
                "label": c.label,
                "complete": c.complete,
                "transitive": c.transitive,
                "negatively_transitive": c.negatively_transitive,
                "acyclic": c.acyclic,
            })
        })
        .collect();
    if as_json {
        return emit_json(&OutputArgs { output: None }, &Value::Array(rows));
    }
    let width = p
        .school_names()
        .iter()
        .map(String::len)
        .max()
        .unwrap_or(0)
        .max(6);
    let mut out = std::io::stdout().lock();
    writeln!(
        out,
        "{:width$}  {:6}  complete  transitive  neg-trans  acyclic",
        "school", "class"
    )?;
    for s in p.schools() {
        let c = classify(p.priority(s));
        let yn = |b: bool| if b { "yes" } else { "no" };
        writeln!(
            out,
            "{:width$}  {:6}  {:8}  {:10}  {:9}  {}",
            p.school_name(s),
            c.label.as_str(),
            yn(c.complete),
            yn(c.transitive),
            yn(c.negatively_transitive),
            yn(c.acyclic)
        )?;
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_extend(args: ExtendArgs) -> anyhow::Result<ExitCode> {
    let inst = load(&args.input)?;
    let p = &inst.problem;
    if args.enumerate {
        let all = enumerate_extension_profiles(p.priorities(), args.max_profiles)?;
        let lines: Vec<String> = all
            .iter()
            .map(|prof| serde_json::to_string(&ProfileFile::new(p, prof)))
            .collect::<Result<_, _>>()?;
        return emit_lines(&args.output, &lines);
    }
    let tau = match (&args.rank_file, args.tiebreak) {
        (Some(path), _) => Some(
            TiebreakFile::parse(p, &read(path)?)
                .with_context(|| format!("in {}", path.display()))?,
        ),
        (None, Some(kind)) => Some(random_tiebreak(p, kind, args.seed)),
        (None, None) => None,
    };
    let profile = match tau {
        Some(tau) => extend_profile_tiebreak(p.priorities(), &tau),
        None => extend_profile(p.priorities(), &mut LowestIndex),
    }
    .map_err(|e| name_school(e, p))?;
    emit_json(
        &args.output,
        &serde_json::to_value(ProfileFile::new(p, &profile))?,
    )
}

fn random_tiebreak(p: &Problem, kind: TiebreakArg, seed: u64) -> TiebreakProfile {
    match kind {
        TiebreakArg::Single => {
            TiebreakProfile::random_single(p.num_students(), p.num_schools(), seed)
        }
        TiebreakArg::Multiple => {
            TiebreakProfile::random_multiple(p.num_students(), p.num_schools(), seed)
        }
    }
}

fn run_profile(inst: &Instance, args: &RunArgs) -> anyhow::Result<ExtensionProfile> {
    let p = &inst.problem;
    if let Some(path) = &args.profile {
        return ProfileFile::parse(p, &read(path)?)
            .with_context(|| format!("in {}", path.display()));
    }
    let built = match args.tiebreak {
        Some(kind) => extend_profile_tiebreak(p.priorities(), &random_tiebreak(p, kind, args.seed)),
        None => match &inst.extension_profile {
            Some(prof) => return Ok(prof.clone()),
            None => extend_profile(p.priorities(), &mut LowestIndex),
        },
    };
    built.map_err(|e| name_school(e, p))
}

/// Restates school-indexed errors with the school's name.
fn name_school(e: Error, p: &Problem) -> anyhow::Error {
    match e {
        Error::CyclicRelation { school: Some(s) } => anyhow!(Error::InvalidInput(format!(
            "priority of school {:?} is cyclic, so it has no total order extension",
            p.school_name(s)
        ))),
        Error::NotTotalOrder { school: s } => anyhow!(Error::InvalidInput(format!(
            "priority of school {:?} is not a total order",
            p.school_name(s)
        ))),
        other => other.into(),
    }
}

fn round_json(p: &Problem, r: &EadamRound) -> Value {
    let school = |a: Option<SchoolId>| a.map(|s| p.school_name(s).to_string());
    let assignment = |v: &[(school_choice::StudentId, Option<SchoolId>)]| {
        v.iter()
            .map(|&(i, a)| (p.student_name(i).to_string(), json!(school(a))))
            .collect::<serde_json::Map<_, _>>()
    };
    json!({
        "round": r.round,
        "settled_schools": r.settled_schools.iter().map(|&s| p.school_name(s)).collect::<Vec<_>>(),
        "removed": assignment(&r.removed_students),
        "deletions": r.deletions.iter().map(|d| json!({
            "student": p.student_name(d.student),
            "school": p.school_name(d.school),
            "because_of": p.student_name(d.because_of),
        })).collect::<Vec<_>>(),
        "matching": assignment(&r.matching),
    })
}

pub(crate) fn read(path: &Path) -> anyhow::Result<String> {
    fs::read_to_string(path)
        .with_context(|| format!("cannot read {}", path.display()))
        .map_err(|e| anyhow!(Error::InvalidInput(format!("{e:#}"))))
}

pub(crate) fn load(input: &InputArgs) -> anyhow::Result<Instance> {
    match (&input.file, input.fixture) {
        (_, Some(f)) => Ok(Instance::new(f.problem())),
        (Some(path), None) => {
            Instance::from_json(&read(path)?).with_context(|| format!("in {}", path.display()))
        }
        (None, None) => bail!(Error::InvalidInput("no instance given".into())),
    }
}

fn emit_json(output: &OutputArgs, value: &Value) -> anyhow::Result<ExitCode> {
    emit_lines(output, &[serde_json::to_string_pretty(value)?])
}

fn emit_lines(output: &OutputArgs, lines: &[String]) -> anyhow::Result<ExitCode> {
    let mut text = String::new();
    for line in lines {
        text.push_str(line);
        text.push('\n');
    }
    match &output.output {
        Some(path) => {
            fs::write(path, text).with_context(|| format!("cannot write {}", path.display()))?
        }
        None => std::io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(ExitCode::SUCCESS)
}
