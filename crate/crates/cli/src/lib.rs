//! Command-line driver: parse group/matrix specs, dispatch computations and
//! verification suites, emit JSON/CSV reports with stable exit codes.
//!
//! Exit codes: 0 when every asserted check passes, 1 when a check fails
//! (reports are still emitted), 2 for input/usage errors and hypothesis
//! violations (diagnostic on stderr).

pub mod spec;

use std::path::PathBuf;
use std::str::FromStr;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use atiyah_core::approx::{
    approximation_run, lamplighter_family, series_partial_sum, DimStrategy, SymbolicOperator,
};
use atiyah_core::groupring::{RingElement, RingMatrix};
use atiyah_core::groups::{Group, Subgroup};
use atiyah_core::morph::QuotientMap;
use atiyah_core::scalar::{CycloScalar, FieldSpec, Rational};
use atiyah_core::verify;
use atiyah_core::vnla;

use spec::{load_group, load_matrix, resolve_word_list};

#[derive(Parser)]
#[command(
    name = "atiyah",
    about = "Exact von Neumann dimensions over finite group rings",
    version
)]
struct Cli {
    /// Seed for the randomized suites (reproducible by default).
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Exact kernel dimension report for a matrix over a finite group.
    Dim(DimArgs),
    /// Verification suites with exact pass/fail checks.
    Verify {
        #[command(subcommand)]
        suite: VerifySuite,
    },
    /// Dimension sequences along families of finite quotients.
    Approx(ApproxArgs),
    /// Exact series evaluation with certified tails.
    Series(SeriesArgs),
}

#[derive(Args)]
struct DimArgs {
    /// Group spec JSON file.
    #[arg(long)]
    group: PathBuf,
    /// Matrix spec JSON file.
    #[arg(long)]
    matrix: PathBuf,
    /// Also write the report to this file.
    #[arg(long)]
    report: Option<PathBuf>,
    /// Use two-prime modular screening instead of the exact path
    /// (rational scalars only; the report is flagged).
    #[arg(long)]
    screen: bool,
    /// Extra membership diagnostics: check lcm(G)*dim against d*Z.
    #[arg(long = "membership")]
    memberships: Vec<u64>,
}

#[derive(Subcommand)]
enum VerifySuite {
    /// Subgroup criterion suite (augmented matrices, trace transfer,
    /// direct sum). Defaults to the standard S3 instance.
    Prop31(Prop31Args),
    /// Quotient transfer of images and projections. Defaults to Z/4 -> Z/2.
    Prop41(Prop41Args),
    /// Split-extension dimension chain. Defaults to Z/2 x Z/3.
    Prop44(Prop44Args),
    /// Kernel-size bookkeeping |G| = |K| |Q| with sampled subgroups.
    Lemma42(Lemma42Args),
    /// Restriction formula with transversal independence.
    Restriction(RestrictionArgs),
    /// Transfer-map properties (1)-(5) on seeded random pairs.
    Pstar(PstarArgs),
    /// Integrality fuzz over seeded random sparse matrices.
    AtiyahFuzz(FuzzArgs),
}

#[derive(Args)]
struct Prop31Args {
    #[arg(long)]
    group: Option<PathBuf>,
    /// Generators of U (comma-separated words).
    #[arg(long)]
    u: Option<String>,
    /// Generators of V (comma-separated words).
    #[arg(long)]
    v: Option<String>,
    #[arg(long)]
    matrix: Option<PathBuf>,
    /// The prime power that must divide |V|/|U meet V|.
    #[arg(long)]
    pn: Option<u64>,
    /// Run a built-in example instance (1 or 2) instead.
    #[arg(long)]
    footnote: Option<u8>,
    /// With --footnote 2: use the trivial V2 (hypothesis fails by design).
    #[arg(long)]
    degenerate: bool,
}

#[derive(Args)]
struct Prop41Args {
    #[arg(long)]
    group: Option<PathBuf>,
    /// Generators of the normal kernel K (comma-separated words).
    #[arg(long)]
    kernel: Option<String>,
    /// Matrix over the quotient group Q.
    #[arg(long)]
    matrix: Option<PathBuf>,
}

#[derive(Args)]
struct Prop44Args {
    #[arg(long)]
    group: Option<PathBuf>,
    #[arg(long)]
    kernel: Option<String>,
    /// Generators of a complement subgroup providing the section
    /// (auto-detected for small groups when omitted).
    #[arg(long)]
    section: Option<String>,
    /// Matrix over the source group G.
    #[arg(long)]
    matrix: Option<PathBuf>,
}

#[derive(Args)]
struct Lemma42Args {
    #[arg(long)]
    group: Option<PathBuf>,
    #[arg(long)]
    kernel: Option<String>,
}

#[derive(Args)]
struct RestrictionArgs {
    #[arg(long)]
    group: Option<PathBuf>,
    /// Generators of the finite-index subgroup U.
    #[arg(long)]
    u: Option<String>,
    #[arg(long)]
    matrix: Option<PathBuf>,
}

#[derive(Args)]
struct PstarArgs {
    #[arg(long)]
    group: Option<PathBuf>,
    #[arg(long)]
    kernel: Option<String>,
    #[arg(long, default_value_t = 100)]
    pairs: usize,
    #[arg(long, default_value_t = 1)]
    conductor: u32,
}

#[derive(Args)]
struct FuzzArgs {
    /// Group spec file; without it the built-in corpus
    /// {Z/6, S3, D4, Q8, Z/2 x Z/3} is used.
    #[arg(long)]
    group: Option<PathBuf>,
    #[arg(long, default_value_t = 25)]
    trials: usize,
    #[arg(long, default_value_t = 1)]
    conductor: u32,
}

#[derive(Args)]
struct ApproxArgs {
    /// Family name (only "lamplighter" is built in).
    family: String,
    #[arg(long)]
    from: u32,
    #[arg(long)]
    to: u32,
    /// Exact target value "p/q" for the error column.
    #[arg(long)]
    target: Option<String>,
    /// Also write the run as CSV to this file.
    #[arg(long)]
    csv: Option<PathBuf>,
    /// Generator words for the Markov operator.
    #[arg(long, default_value = "t,a*t")]
    gens: String,
    /// Force the generic dense pipeline instead of the structured path.
    #[arg(long)]
    generic: bool,
    /// Use two-prime modular screening (reports are flagged).
    #[arg(long)]
    screen: bool,
}

#[derive(Args)]
struct SeriesArgs {
    /// Series name (only "ds02" is built in).
    series: String,
    #[arg(long)]
    terms: u64,
    #[arg(long, default_value_t = 10)]
    digits: usize,
}

/// Outcome of a dispatched command: the JSON to print and whether every
/// asserted check passed; hypothesis violations downgrade to exit 2.
struct Outcome {
    json: serde_json::Value,
    pass: bool,
    precondition_failure: bool,
}

impl Outcome {
    fn passing(json: serde_json::Value) -> Outcome {
        Outcome {
            json,
            pass: true,
            precondition_failure: false,
        }
    }

    fn from_report(r: verify::SuiteReport) -> Outcome {
        Outcome {
            pass: r.pass,
            precondition_failure: r.precondition_failure(),
            json: serde_json::to_value(&r).expect("reports serialize"),
        }
    }
}

/// Parses argv and runs; returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            // clap renders help/version on stdout with success, usage errors
            // on stderr with code 2
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(&cli) {
        Ok(out) => {
            println!(
                "{}",
                serde_json::to_string_pretty(&out.json).expect("valid JSON")
            );
            if out.precondition_failure {
                eprintln!("error: hypothesis violation (see failed hypothesis checks)");
                2
            } else if out.pass {
                0
            } else {
                1
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            2
        }
    }
}

fn dispatch(cli: &Cli) -> Result<Outcome> {
    match &cli.command {
        Command::Dim(args) => run_dim(args, cli.seed),
        Command::Verify { suite } => run_verify(suite, cli.seed),
        Command::Approx(args) => run_approx(args, cli.seed),
        Command::Series(args) => run_series(args),
    }
}

fn run_dim(args: &DimArgs, seed: u64) -> Result<Outcome> {
    let (_, matrix, _) = spec::parse_specs(&args.group, &args.matrix)?;
    let mut report = if args.screen {
        vnla::modular::vn_dim_kernel_screened(&matrix, seed)?
    } else {
        vnla::vn_dim_kernel(&matrix)
    };
    for &d in &args.memberships {
        report = report.with_membership(d);
    }
    let json = serde_json::to_value(&report)?;
    if let Some(path) = &args.report {
        std::fs::write(path, serde_json::to_string_pretty(&json)?)
            .with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(Outcome::passing(json))
}

fn group_or(path: &Option<PathBuf>, default: impl FnOnce() -> Result<Group>) -> Result<Group> {
    match path {
        Some(p) => load_group(p),
        None => default(),
    }
}

fn subgroup_or(group: &Group, words: &Option<String>, default_words: &str) -> Result<Subgroup> {
    let w = words.as_deref().unwrap_or(default_words);
    Ok(Subgroup::closure(group, &resolve_word_list(group, w)?))
}

fn matrix_or(path: &Option<PathBuf>, group: &Group, default_terms: &str) -> Result<RingMatrix> {
    match path {
        Some(p) => Ok(load_matrix(p, group)?.0),
        None => {
            let field = FieldSpec::rationals();
            let terms: Result<Vec<_>> = default_terms
                .split('+')
                .map(|w| {
                    group
                        .resolve_word(w.trim())
                        .map(|e| (e, CycloScalar::one(&field)))
                        .map_err(|e| anyhow!("{e}"))
                })
                .collect();
            Ok(RingMatrix::single(RingElement::from_terms(
                group, &field, terms?,
            )?))
        }
    }
}

fn run_verify(suite: &VerifySuite, seed: u64) -> Result<Outcome> {
    match suite {
        VerifySuite::Prop31(a) => {
            if let Some(case) = a.footnote {
                let case = match case {
                    1 => verify::FootnoteCase::FiniteNormal,
                    2 => verify::FootnoteCase::DirectProduct {
                        v2_trivial: a.degenerate,
                    },
                    other => bail!("unknown footnote case {other} (expected 1 or 2)"),
                };
                return Ok(Outcome::from_report(verify::prop31_footnote(case)?));
            }
            let g = group_or(&a.group, || Ok(Group::symmetric(3)?))?;
            let u = subgroup_or(&g, &a.u, "s1")?;
            let v = subgroup_or(&g, &a.v, "s1*s2")?;
            let m = matrix_or(&a.matrix, &g, "e + s1")?;
            let pn = a.pn.unwrap_or(3);
            Ok(Outcome::from_report(verify::prop31(&g, &u, &v, &m, pn)))
        }
        VerifySuite::Prop41(a) => {
            let g = group_or(&a.group, || Ok(Group::cyclic(4)?))?;
            let k = subgroup_or(&g, &a.kernel, "g^2")?;
            let p = QuotientMap::new(&g, &k)?;
            let m = matrix_or(&a.matrix, p.target(), "e + g")?;
            Ok(Outcome::from_report(verify::prop41(&p, &m)))
        }
        VerifySuite::Prop44(a) => {
            let g = group_or(&a.group, || {
                Ok(Group::product(&[Group::cyclic(2)?, Group::cyclic(3)?])?)
            })?;
            let k = subgroup_or(&g, &a.kernel, "f0.g")?;
            let mut p = QuotientMap::new(&g, &k)?;
            if let Some(words) = &a.section {
                let c = Subgroup::closure(&g, &resolve_word_list(&g, words)?);
                p = p.with_section_from(&c)?;
            }
            let m = matrix_or(&a.matrix, &g, "e + f0.g*f1.g")?;
            Ok(Outcome::from_report(verify::prop44(&p, &m)?))
        }
        VerifySuite::Lemma42(a) => {
            let g = group_or(&a.group, || Ok(Group::symmetric(3)?))?;
            let k = subgroup_or(&g, &a.kernel, "s1*s2")?;
            let p = QuotientMap::new(&g, &k)?;
            Ok(Outcome::from_report(verify::lemma42(&p)))
        }
        VerifySuite::Restriction(a) => {
            let g = group_or(&a.group, || Ok(Group::symmetric(3)?))?;
            let u = subgroup_or(&g, &a.u, "s1*s2")?;
            let m = matrix_or(&a.matrix, &g, "e + s1")?;
            Ok(Outcome::from_report(verify::restriction(&g, &u, &m)))
        }
        VerifySuite::Pstar(a) => {
            let g = group_or(&a.group, || Ok(Group::cyclic(4)?))?;
            let k = subgroup_or(&g, &a.kernel, "g^2")?;
            let p = QuotientMap::new(&g, &k)?;
            let field = FieldSpec::new(a.conductor)?;
            Ok(Outcome::from_report(verify::transfer_properties(
                &p, &field, a.pairs, seed,
            )))
        }
        VerifySuite::AtiyahFuzz(a) => {
            let field = FieldSpec::new(a.conductor)?;
            let groups: Vec<Group> = match &a.group {
                Some(p) => vec![load_group(p)?],
                None => default_fuzz_corpus()?,
            };
            let reports: Vec<verify::SuiteReport> = groups
                .iter()
                .map(|g| verify::strong_atiyah_fuzz(g, &field, a.trials, seed))
                .collect();
            let pass = reports.iter().all(|r| r.pass);
            Ok(Outcome {
                pass,
                precondition_failure: false,
                json: serde_json::to_value(&reports)?,
            })
        }
    }
}

/// The standard five-group fuzz corpus.
pub fn default_fuzz_corpus() -> Result<Vec<Group>> {
    Ok(vec![
        Group::cyclic(6)?,
        Group::symmetric(3)?,
        Group::dihedral(4)?,
        Group::quaternion8()?,
        Group::product(&[Group::cyclic(2)?, Group::cyclic(3)?])?,
    ])
}

fn run_approx(args: &ApproxArgs, seed: u64) -> Result<Outcome> {
    if args.family != "lamplighter" {
        bail!("unknown family '{}' (expected 'lamplighter')", args.family);
    }
    let family = lamplighter_family();
    let field = FieldSpec::rationals();
    let gens: Vec<&str> = args
        .gens
        .split(',')
        .map(|s| s.trim())
        .filter(|s| !s.is_empty())
        .collect();
    let op = SymbolicOperator::markov(&gens, &field)?;
    let target = args
        .target
        .as_deref()
        .map(|t| Rational::from_str(t).map_err(|e| anyhow!("target '{t}': {e}")))
        .transpose()?;
    let strategy = if args.screen {
        DimStrategy::Screened { seed }
    } else if args.generic {
        DimStrategy::Generic
    } else {
        DimStrategy::Auto
    };
    let run = approximation_run(&family, &op, args.from, args.to, target, strategy)?;
    if let Some(path) = &args.csv {
        std::fs::write(path, run.to_csv())
            .with_context(|| format!("writing {}", path.display()))?;
    }
    let aborted = run.aborted.clone();
    let json = serde_json::to_value(&run)?;
    match aborted {
        Some(msg) => {
            // partial results are flagged and emitted; the abort is an input error
            println!("{}", serde_json::to_string_pretty(&json)?);
            Err(anyhow!("approximation run aborted: {msg}"))
        }
        None => Ok(Outcome::passing(json)),
    }
}

fn run_series(args: &SeriesArgs) -> Result<Outcome> {
    if args.series != "ds02" {
        bail!("unknown series '{}' (expected 'ds02')", args.series);
    }
    let result = series_partial_sum(args.terms, args.digits)?;
    Ok(Outcome::passing(serde_json::to_value(&result)?))
}
