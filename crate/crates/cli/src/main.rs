//! `oddkh`: odd and even Khovanov homology from the command line.
//!
//! Exit codes: 0 success, 1 failed self-test, 2 bad input, 3 resource limit,
//! 4 internal consistency failure.

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::mpsc;
use std::time::Duration;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use oddkh::checks::{self, SuiteOptions};
use oddkh::{
    bundled_corpus, compute_homology, homological_width, is_zero_omitting, jones_from_table,
    jones_skein_oracle, parse_corpus, parse_generator, parse_pd, qa_obstruction, render, tb_report,
    torsion_profile, BuildOptions, Error, ErrorKind, Flavor, HomologyTable, PlanarDiagram, Ring,
    Theory,
};

/// Rough peak memory per generator of the unreduced complex, in bytes.
const BYTES_PER_GENERATOR: u64 = 160;

#[derive(Parser)]
#[command(
    name = "oddkh",
    version,
    about = "Odd and even Khovanov homology of links"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute a homology table.
    Compute {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        job: Job,
        /// Output formats, comma separated.
        #[arg(long, value_enum, value_delimiter = ',', default_value = "table")]
        format: Vec<Format>,
        /// Write output to a file instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compute an invariant read off the homology.
    Invariant {
        #[arg(value_enum)]
        kind: Kind,
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        job: Job,
        /// Print the report as JSON.
        #[arg(long)]
        json: bool,
    },
    /// Run the acceptance checks.
    Selftest {
        /// Include the long torus knot computation.
        #[arg(long)]
        stretch: bool,
        /// Corrupt one edge sign and run the square check, which must fail.
        #[arg(long)]
        inject_fault: bool,
        /// Run only these checks, comma separated.
        #[arg(long, value_delimiter = ',')]
        only: Vec<u8>,
    },
    /// Dump the resolution cube with its edge signs as JSON.
    Cube {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        job: Job,
    },
    /// Dump the chain complex as JSON.
    Complex {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        job: Job,
    },
}

#[derive(Args)]
#[command(group(ArgGroup::new("diagram").required(true).args(["pd", "gen", "corpus_name"])))]
struct Input {
    /// Planar diagram code, e.g. "PD[X[1,3,2,4],X[3,1,4,2]]".
    #[arg(long)]
    pd: Option<String>,
    /// Generator spec: "pretzel p1 p2 ...", "torus p q", or "braid strands word...".
    #[arg(long = "gen", allow_hyphen_values = true)]
    gen: Option<String>,
    /// Name of a diagram in the corpus.
    #[arg(long)]
    corpus_name: Option<String>,
    /// Corpus file to look names up in; defaults to the bundled tables.
    #[arg(long)]
    corpus: Option<PathBuf>,
}

#[derive(Args)]
struct Job {
    #[arg(long, value_enum, default_value = "odd")]
    theory: TheoryArg,
    #[arg(long)]
    reduced: bool,
    /// Z, Q, or Z2.
    #[arg(long, default_value = "Z")]
    ring: Ring,
    /// Edge label carrying the basepoint of reduced even homology.
    #[arg(long)]
    basepoint: Option<u32>,
    /// Re-randomizes arrows and edge signs.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, default_value_t = 15)]
    max_crossings: usize,
    /// Give up after this many seconds.
    #[arg(long)]
    time_limit: Option<u64>,
}

#[derive(Clone, Copy, ValueEnum)]
enum TheoryArg {
    Odd,
    Even,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Table,
    Json,
    Latex,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Jones,
    Width,
    Tb,
    Qa,
    ZeroOmitting,
    TorsionProfile,
}

impl Job {
    fn flavor(&self) -> Flavor {
        let theory = match self.theory {
            TheoryArg::Odd => Theory::Odd,
            TheoryArg::Even => Theory::Even,
        };
        Flavor::new(theory, self.reduced)
    }

    fn options(&self) -> BuildOptions {
        BuildOptions {
            max_crossings: self.max_crossings,
            seed: self.seed,
            basepoint: self.basepoint,
            inject_fault: false,
        }
    }
}

enum Failure {
    Lib(Error),
    Io(String),
    Selftest { internal: bool },
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Io(e.to_string())
    }
}

fn load(input: &Input) -> Result<PlanarDiagram, Failure> {
    if let Some(pd) = &input.pd {
        return Ok(parse_pd(pd)?);
    }
    if let Some(spec) = &input.gen {
        return Ok(parse_generator(spec)?);
    }
    let name = input.corpus_name.as_deref().unwrap_or_default();
    let entries = match &input.corpus {
        Some(path) => parse_corpus(&fs::read_to_string(path)?)?,
        None => {
            let mut all = bundled_corpus();
            all.extend(checks::external_corpus());
            all
        }
    };
    entries
        .into_iter()
        .find(|e| e.name == name)
        .map(|e| e.diagram)
        .ok_or_else(|| {
            Error::InvalidArgument(format!("no diagram named `{name}` in the corpus")).into()
        })
}

/// Refuses inputs whose estimated footprint exceeds `ODDKH_MEMORY_CAP_MB`.
fn check_memory(d: &PlanarDiagram, job: &Job) -> Result<(), Failure> {
    let Ok(cap) = std::env::var("ODDKH_MEMORY_CAP_MB") else {
        return Ok(());
    };
    let cap: u64 = cap.parse().map_err(|_| {
        Error::InvalidArgument(format!("ODDKH_MEMORY_CAP_MB=`{cap}` is not a number"))
    })?;
    let gens = oddkh::generator_count(d, job.max_crossings)?;
    let mb = (gens * BYTES_PER_GENERATOR) >> 20;
    if mb > cap {
        return Err(Error::ResourceLimit(format!(
            "{gens} generators need about {mb} MB, above the cap of {cap} MB"
        ))
        .into());
    }
    Ok(())
}

/// Runs `f`, abandoning it after the job's time limit.
fn timed<T: Send + 'static>(
    job: &Job,
    f: impl FnOnce() -> oddkh::Result<T> + Send + 'static,
) -> Result<T, Failure> {
    let Some(secs) = job.time_limit else {
        return Ok(f()?);
    };
    let (tx, rx) = mpsc::channel();
    std::thread::spawn(move || {
        let _ = tx.send(f());
    });
    match rx.recv_timeout(Duration::from_secs(secs)) {
        Ok(r) => Ok(r?),
        Err(_) => Err(Error::ResourceLimit(format!("time limit of {secs}s exceeded")).into()),
    }
}

fn table(
    d: &PlanarDiagram,
    job: &Job,
    flavor: Flavor,
    ring: Ring,
) -> Result<HomologyTable, Failure> {
    check_memory(d, job)?;
    let (d, opts) = (d.clone(), job.options());
    timed(job, move || compute_homology(&d, flavor, ring, &opts))
}

fn compute(
    input: &Input,
    job: &Job,
    formats: &[Format],
    out: Option<&PathBuf>,
) -> Result<(), Failure> {
    let d = load(input)?;
    let t = table(&d, job, job.flavor(), job.ring)?;
    let mut text = String::new();
    for f in formats {
        match f {
            Format::Table => text.push_str(&render::text_table(&t)),
            Format::Json => {
                text.push_str(&render::table_to_json(&t));
                text.push('\n');
            }
            Format::Latex => text.push_str(&render::latex_table(&t)),
        }
    }
    emit(&text, out)
}

fn emit(text: &str, out: Option<&PathBuf>) -> Result<(), Failure> {
    match out {
        Some(path) => fs::write(path, text)?,
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn json<T: serde::Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("reports serialize") + "\n"
}

fn invariant(kind: Kind, input: &Input, job: &Job, as_json: bool) -> Result<(), Failure> {
    let d = load(input)?;
    let text = match kind {
        Kind::Jones => {
            let flavor = Flavor::new(job.flavor().theory(), false);
            let t = table(&d, job, flavor, Ring::Z)?;
            let p = jones_from_table(&t);
            let oracle = jones_skein_oracle(&d)?;
            if p != oracle {
                return Err(Error::Inconsistent(format!(
                    "homology gives {p} but the state sum gives {oracle}"
                ))
                .into());
            }
            if as_json {
                json(&p)
            } else {
                format!("{p}\n")
            }
        }
        Kind::Width => {
            let r = homological_width(&table(&d, job, job.flavor(), job.ring)?)?;
            if as_json {
                json(&r)
            } else {
                let diagonals: Vec<String> = r.diagonals.iter().map(i32::to_string).collect();
                format!(
                    "width {} (diagonals j-2i: {}), {}\n",
                    r.width,
                    diagonals.join(", "),
                    if r.thin { "thin" } else { "thick" }
                )
            }
        }
        Kind::Tb => {
            check_memory(&d, job)?;
            let (d, opts) = (d.clone(), job.options());
            let r = timed(job, move || tb_report(&d, &opts))?;
            if as_json {
                json(&r)
            } else {
                format!("{r}\n")
            }
        }
        Kind::Qa => {
            check_memory(&d, job)?;
            let (d, opts) = (d.clone(), job.options());
            let r = timed(job, move || qa_obstruction(&d, &opts))?;
            if as_json {
                json(&r)
            } else {
                format!("{r}\n")
            }
        }
        Kind::ZeroOmitting => {
            let z = is_zero_omitting(&table(&d, job, Flavor::Odd, Ring::Z)?);
            if as_json {
                json(&z)
            } else {
                format!("zero-omitting: {z}\n")
            }
        }
        Kind::TorsionProfile => {
            let p = torsion_profile(&table(&d, job, job.flavor(), Ring::Z)?);
            if as_json {
                json(&p)
            } else if p.by_diagonal.is_empty() {
                "no torsion\n".to_string()
            } else {
                p.by_diagonal
                    .iter()
                    .map(|(diag, orders)| {
                        let orders: Vec<String> = orders.iter().map(u64::to_string).collect();
                        let place = if p.free_diagonals.contains(diag) {
                            ""
                        } else {
                            " (off-diagonal)"
                        };
                        format!("j-2i = {diag}: Z/{}{place}\n", orders.join(", Z/"))
                    })
                    .collect()
            }
        }
    };
    emit(&text, None)
}

fn selftest(stretch: bool, inject_fault: bool, only: &[u8]) -> Result<(), Failure> {
    let opts = SuiteOptions {
        stretch,
        inject_fault,
    };
    let ids: Vec<u8> = match (only.is_empty(), inject_fault) {
        (false, _) => only.to_vec(),
        (true, true) => vec![1],
        (true, false) => checks::CRITERIA.iter().map(|c| c.0).collect(),
    };
    let mut failed = 0;
    let mut internal = false;
    for id in ids {
        let r = checks::run_check(id, &opts);
        println!("{r}");
        if !r.passed {
            failed += 1;
            internal |= r.error == Some(ErrorKind::Internal);
        }
    }
    if failed == 0 {
        println!("all checks passed");
        Ok(())
    } else {
        println!("{failed} check(s) failed");
        Err(Failure::Selftest { internal })
    }
}

fn dump(input: &Input, job: &Job, cube: bool) -> Result<(), Failure> {
    let d = load(input)?;
    check_memory(&d, job)?;
    let value = if cube {
        let (c, signs) = oddkh::prepare_cube(&d, job.flavor(), &job.options())?;
        c.to_json(&signs)?
    } else if job.flavor() == Flavor::ReducedOdd {
        return Err(Error::InvalidArgument(
            "reduced odd homology has no complex of its own; dump the odd complex instead".into(),
        )
        .into());
    } else {
        oddkh::build_complex_with(&d, job.flavor(), &job.options())?.to_json()
    };
    emit(&json(&value), None)
}

fn configure_threads() -> Result<(), Failure> {
    if let Ok(n) = std::env::var("ODDKH_THREADS") {
        let n: usize = n
            .parse()
            .map_err(|_| Error::InvalidArgument(format!("ODDKH_THREADS=`{n}` is not a number")))?;
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Error::InvalidArgument(format!("thread pool: {e}")))?;
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), Failure> {
    configure_threads()?;
    match &cli.command {
        Command::Compute {
            input,
            job,
            format,
            out,
        } => compute(input, job, format, out.as_ref()),
        Command::Invariant {
            kind,
            input,
            job,
            json,
        } => invariant(*kind, input, job, *json),
        Command::Selftest {
            stretch,
            inject_fault,
            only,
        } => selftest(*stretch, *inject_fault, only),
        Command::Cube { input, job } => dump(input, job, true),
        Command::Complex { input, job } => dump(input, job, false),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Lib(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(match e.kind() {
                ErrorKind::Input => 2,
                ErrorKind::Resource => 3,
                ErrorKind::Internal => 4,
            })
        }
        Err(Failure::Io(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(Failure::Selftest { internal }) => ExitCode::from(if internal { 4 } else { 1 }),
    }
}
