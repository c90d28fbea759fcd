//! `trispace`: checks, flag recovery and campaigns on matrix spaces over
//! finite fields.
//!
//! Exit codes: 0 success (or a true verdict), 1 error, 2 `check` found a
//! non-triangularizable element, 3 theorem-violation alarm or lemma
//! violation, 4 budget exceeded.

use std::fs;
use std::io::{self, Read};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use trispace::adapted::{find_adapted_vector_with, ScanOrder};
use trispace::lemma::{f2_counterexample, lemma31_verify_with};
use trispace::poly;
use trispace::recover::{recover_flag_with, RecoverOptions};
use trispace::spacefile;
use trispace::survey::{
    count_flags, gen_joint, gen_random, gen_sl, gen_sym, gen_triangular, random_conjugator,
    run_campaign, CampaignMode, CampaignSpec,
};
use trispace::{
    space_weakly_triangularizable, Error, Execution, FieldCtx, MatSpace, Mode, Verdict,
    DEFAULT_BUDGET,
};

const BUDGET_ENV: &str = "TRISPACE_BUDGET";
const DEFAULT_SEED: u64 = 0;

#[derive(Parser)]
#[command(
    name = "trispace",
    version,
    about = "Weakly triangularizable matrix spaces over finite fields"
)]
struct Cli {
    /// Maximum number of elements or candidates a command may sweep.
    /// Overrides the TRISPACE_BUDGET environment variable.
    #[arg(long, global = true)]
    budget: Option<u128>,

    /// Accept fields of characteristic 2.
    #[arg(long, global = true)]
    exploratory: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether every element of a space is triangularizable.
    Check {
        /// Space file; standard input when omitted or `-`.
        file: Option<PathBuf>,
        /// `exhaustive`, `sample:N` or `sample:N:SEED`.
        #[arg(long, default_value = "exhaustive")]
        mode: String,
    },
    /// Recover the flag of an optimal weakly triangularizable space.
    Recover {
        file: Option<PathBuf>,
        /// Also write the recovery trace to this file.
        #[arg(long)]
        trace: Option<PathBuf>,
        /// Scan projective points for the adapted vector in reverse order.
        #[arg(long)]
        reverse: bool,
    },
    /// Print the first adapted vector of a space, or `none`.
    Adapted {
        file: Option<PathBuf>,
        #[arg(long)]
        reverse: bool,
    },
    /// Sweep all pencils p - λq of the given degree for the split-pencil lemma.
    Lemma31 {
        #[arg(long)]
        field: String,
        #[arg(long)]
        degree: usize,
    },
    /// Sweep all subspaces of a given dimension for weakly triangularizable ones.
    Campaign {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        field: String,
        #[arg(long)]
        dim: usize,
        #[arg(long)]
        contains_identity: bool,
        #[arg(long, default_value_t = 1)]
        shards: usize,
        #[arg(long)]
        journal: Option<PathBuf>,
        #[arg(long, requires = "journal")]
        resume: bool,
        /// Draw this many random candidates instead of sweeping all.
        #[arg(long)]
        random: Option<u64>,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// Run shards on the calling thread only.
        #[arg(long)]
        sequential: bool,
        /// Include wall-clock time in the report.
        #[arg(long)]
        timing: bool,
    },
    /// Write a named space as a space file to standard output.
    Gen {
        #[arg(long, value_enum)]
        kind: Kind,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        field: Option<String>,
        /// Dimension of a random space.
        #[arg(long)]
        dim: Option<usize>,
        /// Seed of a random space, or of the conjugating matrix for `triangular`.
        #[arg(long)]
        seed: Option<u64>,
        /// Diagonal blocks of a joint, as space files.
        #[arg(long = "block")]
        blocks: Vec<PathBuf>,
    },
    /// Count the complete flags of F^n.
    Flags {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        field: String,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Triangular,
    Sym,
    Sl,
    Joint,
    Random,
}

/// Failure of a command, mapped onto an exit code.
enum Failure {
    Lib(Error),
    Usage(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Lib(e.into())
    }
}

type Outcome = Result<u8, Failure>;

fn budget(cli: &Cli) -> Result<u128, Failure> {
    if let Some(b) = cli.budget {
        return Ok(b);
    }
    match std::env::var(BUDGET_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| Failure::Usage(format!("{BUDGET_ENV}={v} is not a non-negative integer"))),
        Err(_) => Ok(DEFAULT_BUDGET),
    }
}

fn field(cli: &Cli, desc: &str) -> Result<FieldCtx, Failure> {
    Ok(FieldCtx::parse_descriptor(desc, cli.exploratory)?)
}

fn read_space(file: &Option<PathBuf>) -> Result<MatSpace, Failure> {
    let text = match file {
        Some(p) if p.as_os_str() != "-" => fs::read_to_string(p)?,
        _ => {
            let mut s = String::new();
            io::stdin().read_to_string(&mut s)?;
            s
        }
    };
    Ok(spacefile::parse(&text, false)?)
}

fn parse_mode(mode: &str) -> Result<(Mode, Option<u64>), Failure> {
    if mode == "exhaustive" {
        return Ok((Mode::Exhaustive, None));
    }
    let bad = || {
        Failure::Usage(format!(
            "unknown mode `{mode}`; expected exhaustive, sample:N or sample:N:SEED"
        ))
    };
    let rest = mode.strip_prefix("sample:").ok_or_else(bad)?;
    let (count, seed) = match rest.split_once(':') {
        Some((c, s)) => (c, s.parse().map_err(|_| bad())?),
        None => (rest, DEFAULT_SEED),
    };
    let count = count.parse().map_err(|_| bad())?;
    Ok((Mode::Sample { count, seed }, Some(seed)))
}

fn scan(reverse: bool) -> ScanOrder {
    if reverse {
        ScanOrder::Reverse
    } else {
        ScanOrder::Forward
    }
}

fn check(cli: &Cli, file: &Option<PathBuf>, mode: &str) -> Outcome {
    let s = read_space(file)?;
    let (mode, seed) = parse_mode(mode)?;
    let verdict = space_weakly_triangularizable(&s, mode, budget(cli)?)?;
    let label = match mode {
        Mode::Exhaustive => "exhaustive".to_string(),
        Mode::Sample { count, .. } => format!("sample {count}"),
    };
    println!("# mode: {label}");
    if let Some(seed) = seed {
        println!("# seed: {seed}");
    }
    println!("# n: {}", s.n());
    println!("# field: {}", s.field());
    println!("# dim: {}", s.dim());
    match verdict {
        Verdict::WeaklyTriangularizable => {
            println!("# weakly_triangularizable: true");
            Ok(0)
        }
        Verdict::NoCounterexample { samples } => {
            println!("# weakly_triangularizable: unknown");
            println!("no counterexample in {samples} samples");
            Ok(0)
        }
        Verdict::Counterexample(w) => {
            println!("# weakly_triangularizable: false");
            println!("witness: {w}");
            println!("char_poly: {}", poly::render(&w.char_poly()));
            Ok(2)
        }
    }
}

fn recover(
    cli: &Cli,
    file: &Option<PathBuf>,
    trace_path: &Option<PathBuf>,
    reverse: bool,
) -> Outcome {
    let s = read_space(file)?;
    let opts = RecoverOptions {
        scan: scan(reverse),
        budget: budget(cli)?,
        ..Default::default()
    };
    match recover_flag_with(&s, &opts) {
        Ok((flag, trace)) => {
            println!("# n: {}", s.n());
            println!("# field: {}", s.field());
            println!("# checks_passed: {}", trace.all_passed());
            for (i, v) in flag.basis().iter().enumerate() {
                println!("e{}: {v}", i + 1);
            }
            let text = trace.render();
            match trace_path {
                Some(p) => fs::write(p, &text)?,
                None => print!("{text}"),
            }
            Ok(0)
        }
        Err(Error::TheoremViolation(alarm)) => {
            let text = alarm.trace.render();
            eprintln!("{alarm}");
            if let Some(p) = trace_path {
                fs::write(p, &text)?;
            } else {
                eprint!("{text}");
            }
            Ok(3)
        }
        Err(Error::Precondition { message, witness }) => {
            eprintln!("error: precondition failed: {message}");
            if let Some(w) = witness {
                eprintln!("witness: {w}");
            }
            Ok(1)
        }
        Err(e) => Err(e.into()),
    }
}

fn adapted(file: &Option<PathBuf>, reverse: bool) -> Outcome {
    let s = read_space(file)?;
    match find_adapted_vector_with(&s, scan(reverse)) {
        Some(x) => println!("{x}"),
        None => println!("none"),
    }
    Ok(0)
}

fn lemma31(cli: &Cli, desc: &str, degree: usize) -> Outcome {
    let f = field(cli, desc)?;
    if f.q() == 2 {
        let r = f2_counterexample(degree)?;
        println!("# field: {f}");
        println!("# degree: {degree}");
        println!("p: {}", poly::render(&r.p));
        println!("q: {}", poly::render(&r.q));
        println!("pencil_splits: {}", r.hypothesis_holds);
        println!("q_divides_p: {}", r.q_divides_p);
        println!("counterexample: {}", r.is_counterexample());
        return Ok(0);
    }
    let r = lemma31_verify_with(&f, degree, budget(cli)?, Execution::Sequential)?;
    println!("{}", r.summary());
    for (p, q) in &r.violations {
        println!("violation: p = {} q = {}", poly::render(p), poly::render(q));
    }
    Ok(if r.violations.is_empty() { 0 } else { 3 })
}

#[allow(clippy::too_many_arguments)]
fn campaign(
    cli: &Cli,
    n: usize,
    desc: &str,
    dim: usize,
    contains_identity: bool,
    shards: usize,
    journal: &Option<PathBuf>,
    resume: bool,
    random: Option<u64>,
    seed: u64,
    sequential: bool,
    timing: bool,
) -> Outcome {
    let f = field(cli, desc)?;
    if n == 0 {
        return Err(Failure::Usage("--n must be positive".into()));
    }
    let mut spec = CampaignSpec::new(n, &f, dim);
    if contains_identity {
        spec = spec.with_identity();
    }
    spec.shards = shards.max(1);
    spec.budget = budget(cli)?;
    spec.journal = journal.clone();
    spec.resume = resume;
    if let Some(count) = random {
        spec.mode = CampaignMode::Random { count, seed };
    }
    if sequential {
        spec.execution = Execution::Sequential;
    }
    let report = run_campaign(&spec)?;
    print!("{}", report.render(timing));
    Ok(if report.alarms.is_empty() { 0 } else { 3 })
}

fn gen(
    cli: &Cli,
    kind: Kind,
    n: Option<usize>,
    desc: &Option<String>,
    dim: Option<usize>,
    seed: Option<u64>,
    blocks: &[PathBuf],
) -> Outcome {
    let need = |what: &str| Failure::Usage(format!("--kind needs --{what}"));
    let space = match kind {
        Kind::Joint => {
            if blocks.is_empty() {
                return Err(Failure::Usage(
                    "--kind joint needs at least one --block file".into(),
                ));
            }
            let parts = blocks
                .iter()
                .map(|b| read_space(&Some(b.clone())))
                .collect::<Result<Vec<_>, _>>()?;
            gen_joint(&parts)?
        }
        _ => {
            let n = n.ok_or_else(|| need("n"))?;
            let f = field(cli, desc.as_deref().ok_or_else(|| need("field"))?)?;
            match kind {
                Kind::Triangular => match seed {
                    Some(seed) => {
                        println!("# conjugated by a random matrix, seed {seed}");
                        gen_triangular(n, &f, Some(&random_conjugator(&f, n, seed)))?
                    }
                    None => gen_triangular(n, &f, None)?,
                },
                Kind::Sym => gen_sym(n, &f),
                Kind::Sl => gen_sl(n, &f),
                Kind::Random => {
                    let d = dim.ok_or_else(|| need("dim"))?;
                    let seed = seed.unwrap_or(DEFAULT_SEED);
                    println!("# seed: {seed}");
                    gen_random(n, &f, d, seed)?
                }
                Kind::Joint => unreachable!("handled above"),
            }
        }
    };
    print!("{}", spacefile::render(&space));
    Ok(0)
}

fn flags(cli: &Cli, n: usize, desc: &str) -> Outcome {
    let f = field(cli, desc)?;
    println!("{}", count_flags(n, &f)?);
    Ok(0)
}

fn run(cli: &Cli) -> Outcome {
    match &cli.command {
        Command::Check { file, mode } => check(cli, file, mode),
        Command::Recover {
            file,
            trace,
            reverse,
        } => recover(cli, file, trace, *reverse),
        Command::Adapted { file, reverse } => adapted(file, *reverse),
        Command::Lemma31 { field, degree } => lemma31(cli, field, *degree),
        Command::Campaign {
            n,
            field,
            dim,
            contains_identity,
            shards,
            journal,
            resume,
            random,
            seed,
            sequential,
            timing,
        } => campaign(
            cli,
            *n,
            field,
            *dim,
            *contains_identity,
            *shards,
            journal,
            *resume,
            *random,
            *seed,
            *sequential,
            *timing,
        ),
        Command::Gen {
            kind,
            n,
            field,
            dim,
            seed,
            blocks,
        } => gen(cli, *kind, *n, field, *dim, *seed, blocks),
        Command::Flags { n, field } => flags(cli, *n, field),
    }
}

fn main() -> ExitCode {
    // clap reports usage errors with status 2, which `check` reserves
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Lib(e)) => {
            eprintln!("error: {e}");
            match e {
                Error::BudgetExceeded { .. } => ExitCode::from(4),
                Error::TheoremViolation(_) => ExitCode::from(3),
                _ => ExitCode::from(1),
            }
        }
    }
}
