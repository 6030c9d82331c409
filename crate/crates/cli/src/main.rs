//! `galrep`: command-line front end for the exact checks in `galrep-core`.

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use output::Format;

pub const EXIT_OK: u8 = 0;
pub const EXIT_REFUTED: u8 = 1;
pub const EXIT_INSUFFICIENT: u8 = 2;
pub const EXIT_USAGE: u8 = 64;

#[derive(Parser, Debug)]
#[command(
    name = "galrep",
    version,
    about = "Exact checks on mod-ℓ images of modular forms"
)]
pub struct Cli {
    #[command(flatten)]
    pub config: RunConfig,
    #[command(subcommand)]
    pub command: Command,
}

/// Settings shared by every subcommand; echoed in each report header.
#[derive(Args, Debug, Clone, serde::Serialize)]
pub struct RunConfig {
    /// Fixture directory (overrides GALREP_FIXTURES and the embedded set).
    #[arg(long, global = true, value_name = "DIR")]
    pub fixtures: Option<PathBuf>,
    /// Coefficient sample bound B; defaults to the bound stored with the form.
    #[arg(long, global = true, value_name = "B",
          value_parser = clap::value_parser!(u64).range(100..))]
    pub sample_bound: Option<u64>,
    /// Worker threads.
    #[arg(long, global = true, default_value_t = default_workers(),
          value_parser = clap::value_parser!(u64).range(1..))]
    pub workers: u64,
    /// Seed for the randomized splitting in polynomial factorization.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    #[serde(skip)]
    pub format: Format,
}

fn default_workers() -> u64 {
    std::thread::available_parallelism()
        .map(|n| n.get() as u64)
        .unwrap_or(1)
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Validate an eigenform file and copy it into the local cache.
    Ingest {
        file: PathBuf,
        /// Cache directory; defaults to GALREP_CACHE_DIR.
        #[arg(long)]
        cache_dir: Option<PathBuf>,
    },
    /// Classify the image at every prime slot above ℓ (default: all odd
    /// ℓ up to --ell-max).
    Analyze {
        #[arg(long)]
        form: String,
        #[arg(long)]
        ell: Option<u64>,
        #[arg(long, default_value_t = 50)]
        ell_max: u64,
    },
    /// CM, inner twists, F_f and the unramifiedness checklist.
    Twists {
        #[arg(long)]
        form: String,
    },
    /// Level-raising primes q ≡ p−1 mod p² split in Q(i, √aux).
    SieveQ {
        #[arg(long)]
        p: u64,
        #[arg(long, value_delimiter = ',')]
        aux: Vec<u64>,
        /// Add the trace-zero surrogate for this form.
        #[arg(long, requires = "ell")]
        trace_form: Option<String>,
        /// Residue characteristic of Λ; must equal p.
        #[arg(long)]
        ell: Option<u64>,
        /// Which slot above ℓ, in canonical order.
        #[arg(long, default_value_t = 0)]
        slot: usize,
        #[arg(long)]
        bound: u64,
        /// Also compare with the predicted density (needs bound >= 1000).
        #[arg(long)]
        density: bool,
    },
    /// Primes ℓ with a degree-n slot and large image.
    ScanPsl {
        #[arg(long)]
        form: String,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        bound: u64,
    },
    /// Certificate for a tamely dihedral type at q.
    CertifyTd {
        #[arg(long)]
        form: String,
        #[arg(long)]
        q: u64,
        #[arg(long)]
        order: u64,
    },
    /// Check a family chain manifest.
    CheckChain { manifest: PathBuf },
    /// Exact and empirical density of a set of prime conditions.
    Density {
        /// e.g. "4 mod 25; split -1; split 5"
        #[arg(long)]
        conditions: String,
        #[arg(long, default_value_t = 100_000)]
        bound: u64,
    },
    /// Fixture inventory, or a full report on one form.
    Report {
        #[arg(long)]
        form: Option<String>,
        /// Largest ℓ classified in a form report.
        #[arg(long, default_value_t = 50)]
        ell_max: u64,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let stdout = std::io::stdout();
    match commands::run(&cli, stdout.lock()) {
        Ok(code) => ExitCode::from(code),
        Err(e) if is_broken_pipe(&e) => ExitCode::from(EXIT_OK),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_INSUFFICIENT)
        }
    }
}

/// A closed downstream pipe (`galrep … | head`) is not a failure.
fn is_broken_pipe(e: &anyhow::Error) -> bool {
    e.chain().any(|c| {
        c.downcast_ref::<std::io::Error>()
            .is_some_and(|io| io.kind() == std::io::ErrorKind::BrokenPipe)
    })
}
