use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{ArgGroup, Args, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

use school_choice::io::{Instance, MatchingFile, ProblemFile};
use school_choice::mechanisms::DEFAULT_MAX_PROFILES;
use school_choice::model::stable_set_oracle_with;
use school_choice::random::{random_violation_set, ClassSpec, InstanceSampler};
use school_choice::theory::{
    check_corollary1, check_corollary2, check_corollary4, check_corollary5, check_corollary6,
    check_lemma1, check_theorem1, CheckLimits, CheckReport, Claim, Verdict,
};
use school_choice::violations::{check_corollary7, ViolationSet};
use school_choice::Error;

use crate::{emit_lines, parse_class, read, Fixture, OutputArgs};

#[derive(Clone, Copy, ValueEnum)]
enum ClaimArg {
    Lemma1,
    Cor1,
    Cor2,
    Cor4,
    Cor5,
    Cor6,
    Cor7,
    Thm1,
}

impl ClaimArg {
    fn claim(self) -> Claim {
        match self {
            ClaimArg::Lemma1 => Claim::Lemma1,
            ClaimArg::Cor1 => Claim::Cor1,
            ClaimArg::Cor2 => Claim::Cor2,
            ClaimArg::Cor4 => Claim::Cor4,
            ClaimArg::Cor5 => Claim::Cor5,
            ClaimArg::Cor6 => Claim::Cor6,
            ClaimArg::Cor7 => Claim::Cor7,
            ClaimArg::Thm1 => Claim::Thm1,
        }
    }

    /// Priority class the claim is stated for.
    fn default_class(self) -> ClassSpec {
        match self {
            ClaimArg::Lemma1 | ClaimArg::Cor1 | ClaimArg::Cor7 => ClassSpec::A,
            ClaimArg::Cor4 => ClassSpec::W,
            _ => ClassSpec::P,
        }
    }
}

#[derive(Args)]
#[command(group(ArgGroup::new("source").required(true).args(["fixture", "instances", "random"])))]
pub(crate) struct CheckArgs {
    #[arg(long)]
    claim: ClaimArg,
    #[arg(long)]
    fixture: Option<Fixture>,
    /// File of instances: JSON objects, arrays of them, or one per line.
    #[arg(long, value_name = "FILE")]
    instances: Option<PathBuf>,
    /// Check seeded random instances.
    #[arg(long)]
    random: bool,
    #[arg(long, default_value_t = 100)]
    count: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 5)]
    max_students: usize,
    #[arg(long, default_value_t = 3)]
    max_schools: usize,
    #[arg(long, default_value_t = 1)]
    min_capacity: usize,
    #[arg(long, default_value_t = 2)]
    max_capacity: usize,
    /// Priority class of random instances; defaults to the claim's domain.
    #[arg(long, value_parser = parse_class)]
    class: Option<ClassSpec>,
    /// Density of random violation sets for cor7.
    #[arg(long, default_value_t = 0.4)]
    violation_density: f64,
    #[arg(long, default_value_t = DEFAULT_MAX_PROFILES)]
    max_profiles: u128,
    /// For cor6: the stable matching to check. Without it every stable
    /// matching of each instance is checked.
    #[arg(long, value_name = "FILE")]
    matching: Option<PathBuf>,
    #[command(flatten)]
    output: OutputArgs,
}

pub(crate) fn cmd_check(args: CheckArgs) -> anyhow::Result<ExitCode> {
    let claim = args.claim.claim();
    let instances = collect_instances(&args)?;
    if args.matching.is_some() && (instances.len() != 1 || !matches!(args.claim, ClaimArg::Cor6)) {
        return Err(Error::InvalidInput(
            "--matching needs --claim cor6 and exactly one instance".into(),
        )
        .into());
    }
    let limits = CheckLimits {
        max_profiles: args.max_profiles,
        ..CheckLimits::default()
    };
    let mut reports = Vec::new();
    for (k, inst) in instances.iter().enumerate() {
        let p = &inst.problem;
        let batch = match args.claim {
            ClaimArg::Lemma1 => vec![check_lemma1(p, &limits)],
            ClaimArg::Cor1 => vec![check_corollary1(p, &limits)],
            ClaimArg::Cor2 => vec![check_corollary2(p, &limits)],
            ClaimArg::Cor4 => vec![check_corollary4(p, &limits)],
            ClaimArg::Cor5 => vec![check_corollary5(p, &limits)],
            ClaimArg::Thm1 => vec![check_theorem1(p, &limits)],
            ClaimArg::Cor7 => {
                let c = inst
                    .violations
                    .clone()
                    .unwrap_or_else(|| ViolationSet::empty(p));
                vec![check_corollary7(p, &c, &limits)]
            }
            ClaimArg::Cor6 => match &args.matching {
                Some(path) => {
                    let mu = MatchingFile::parse(p, &read(path)?)
                        .with_context(|| format!("in {}", path.display()))?;
                    vec![check_corollary6(p, &mu, &limits)]
                }
                None => match stable_set_oracle_with(p, limits.matchings) {
                    Ok(stable) => stable
                        .iter()
                        .map(|mu| check_corollary6(p, mu, &limits))
                        .collect(),
                    Err(e @ Error::GuardExceeded { .. }) => vec![Ok(skipped(claim, p, &e))],
                    Err(e) => vec![Err(e)],
                },
            },
        };
        for report in batch {
            reports.push(report.with_context(|| format!("instance {k}"))?);
        }
    }
    let count = |v: Verdict| reports.iter().filter(|r| r.verdict == v).count();
    let (holds, skipped, failed) = (
        count(Verdict::Holds),
        count(Verdict::Skipped),
        count(Verdict::Counterexample),
    );
    let lines: Vec<String> = reports
        .iter()
        .map(serde_json::to_string)
        .collect::<Result<_, _>>()?;
    emit_lines(&args.output, &lines)?;
    eprintln!(
        "{claim}: {} instances, {} reports: {holds} hold, {skipped} skipped, {failed} counterexamples",
        instances.len(),
        reports.len()
    );
    Ok(if failed > 0 {
        ExitCode::from(1)
    } else {
        ExitCode::SUCCESS
    })
}

fn skipped(claim: Claim, p: &school_choice::Problem, e: &Error) -> CheckReport {
    CheckReport {
        claim,
        instance: school_choice::io::problem_json(p),
        verdict: Verdict::Skipped,
        detail: e.to_string(),
        witness: Value::Null,
    }
}

fn collect_instances(args: &CheckArgs) -> anyhow::Result<Vec<Instance>> {
    if let Some(f) = args.fixture {
        return Ok(vec![Instance::new(f.problem())]);
    }
    if let Some(path) = &args.instances {
        let text = read(path)?;
        let mut out = Vec::new();
        for value in serde_json::Deserializer::from_str(&text).into_iter::<Value>() {
            let value = value
                .map_err(Error::from)
                .with_context(|| format!("in {}", path.display()))?;
            let items = match value {
                Value::Array(items) => items,
                other => vec![other],
            };
            for item in items {
                let k = out.len();
                let file: ProblemFile = serde_json::from_value(item)
                    .map_err(Error::from)
                    .with_context(|| format!("in {}, instance {k}", path.display()))?;
                out.push(
                    Instance::from_file(&file)
                        .with_context(|| format!("in {}, instance {k}", path.display()))?,
                );
            }
        }
        return Ok(out);
    }
    let class = args.class.unwrap_or(args.claim.default_class());
    let mut sampler = InstanceSampler::new(class, args.max_students, args.max_schools, args.seed)?
        .with_capacity(args.min_capacity, args.max_capacity);
    let mut violation_rng = ChaCha8Rng::seed_from_u64(args.seed ^ 0x5eed);
    let mut out = Vec::with_capacity(args.count);
    for _ in 0..args.count {
        let mut inst = Instance::new(sampler.next().expect("sampler is endless"));
        if matches!(args.claim, ClaimArg::Cor7) {
            inst.violations = Some(random_violation_set(
                &inst.problem,
                args.violation_density,
                &mut violation_rng,
            )?);
        }
        out.push(inst);
    }
    Ok(out)
}
