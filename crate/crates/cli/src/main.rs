//! `piexp`: structure, exponent, and identity computations on
//! finite-dimensional rational algebras described by JSON documents.

mod commands;
mod document;
mod report;

use clap::{Parser, Subcommand, ValueEnum};
use commands::{CodimArgs, Outcome};
use std::path::PathBuf;

#[derive(Parser)]
#[command(name = "piexp", version, about = "exact PI-exponent and codimension toolkit")]
struct Cli {
    /// Report rendering on stdout.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Worker-thread cap; 1 forces fully serial execution.  Results are
    /// identical for every setting.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Cmd {
    /// Parse, build, and validate an algebra document.
    Validate { file: PathBuf },
    /// Print the canonical form of a document (sorted table, reduced
    /// rationals, dimension and basis filled in).  Canonical documents
    /// are fixed points of this command.
    Canon { file: PathBuf },
    /// Radical, semisimple complement, and simple component summary.
    Info { file: PathBuf },
    /// PI-exponent with witness sequence and chain.
    Exponent { file: PathBuf },
    /// Codimension at one degree, exact or sampled.
    Codim {
        file: PathBuf,
        #[arg(short)]
        m: usize,
        #[arg(long, value_enum, default_value_t = Strategy::Exact)]
        strategy: Strategy,
        /// Sample count for the sampled strategy (default `2·m!·dim`).
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Work cap for the exact strategy (`m!·dim^(m+1)·tags^m` must stay below it).
        #[arg(long)]
        budget: Option<u128>,
    },
    /// Test one polynomial (text grammar, see README) against an algebra.
    Identity {
        file: PathBuf,
        #[arg(long)]
        poly: PathBuf,
    },
    /// Do the degree-m identities of A all hold in B?
    Contain {
        #[arg(short)]
        m: usize,
        a: PathBuf,
        b: PathBuf,
        #[arg(long)]
        budget: Option<u128>,
    },
    /// Theorem and example verification suites.
    Verify {
        #[command(subcommand)]
        what: VerifyCmd,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Strategy {
    Exact,
    Sampled,
}

#[derive(Subcommand)]
enum VerifyCmd {
    /// exp(M_n(A)) = n² · exp(A) for n = 1..=nmax, both sides computed
    /// independently.
    MainTheorem {
        #[arg(long)]
        base: PathBuf,
        #[arg(long)]
        nmax: usize,
        /// Rows whose matrix extension exceeds this dimension are skipped.
        #[arg(long, default_value_t = 120)]
        dim_cap: usize,
    },
    /// exp(A ⊗ S) = dim S · exp(A) for a structurally simple unital S.
    TensorTheorem {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        s: PathBuf,
    },
    /// The pinned regression numbers for the triangular tensor square and
    /// its incidence-algebra twin.
    PaperExamples,
    /// c_m(A⊗B) ≤ c_m(A)·c_m(B).
    Regev {
        #[arg(short)]
        m: usize,
        a: PathBuf,
        b: PathBuf,
    },
}

fn main() {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build_global()
            .expect("the global thread pool is configured once, before any use");
    }
    let started = std::time::Instant::now();
    // canon emits a document, not a report, so the output stays loadable
    if let Cmd::Canon { file } = &cli.cmd {
        match document::load_document(file).and_then(|d| document::canonicalize(&d)) {
            Ok(doc) => {
                print!("{}", document::to_json(&doc));
                std::process::exit(0);
            }
            Err(e) => {
                eprintln!("error: {e}");
                std::process::exit(2);
            }
        }
    }
    let Outcome { report, exit } = match &cli.cmd {
        Cmd::Validate { file } => commands::cmd_validate(file),
        Cmd::Info { file } => commands::cmd_info(file),
        Cmd::Exponent { file } => commands::cmd_exponent(file),
        Cmd::Codim { file, m, strategy, samples, seed, budget } => commands::cmd_codim(
            file,
            &CodimArgs {
                m: *m,
                sampled: matches!(strategy, Strategy::Sampled),
                samples: *samples,
                seed: *seed,
                budget: *budget,
            },
        ),
        Cmd::Canon { .. } => unreachable!("handled above"),
        Cmd::Identity { file, poly } => commands::cmd_identity(file, poly),
        Cmd::Contain { m, a, b, budget } => commands::cmd_contain(*m, a, b, *budget),
        Cmd::Verify { what } => match what {
            VerifyCmd::MainTheorem { base, nmax, dim_cap } => {
                commands::cmd_verify_main_theorem(base, *nmax, *dim_cap)
            }
            VerifyCmd::TensorTheorem { a, s } => commands::cmd_verify_tensor_theorem(a, s),
            VerifyCmd::PaperExamples => commands::cmd_verify_paper_examples(),
            VerifyCmd::Regev { m, a, b } => commands::cmd_verify_regev(*m, a, b),
        },
    };
    match cli.format {
        Format::Json => print!("{}", report.to_json()),
        Format::Text => print!("{}", report.to_text()),
    }
    // timing stays out of the report so reports compare byte-for-byte
    eprintln!("wall_clock_s: {:.3}", started.elapsed().as_secs_f64());
    std::process::exit(exit);
}
