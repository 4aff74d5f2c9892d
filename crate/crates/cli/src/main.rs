use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use hkr_cli::{
    demo_gm_restricted, demo_projective_space, exit_code, run_suite, ConfigError, Format, Report, SuiteConfig,
    CONFIG_ERROR_EXIT,
};
use hkr_core::specseq::{all_pages, random_filtered, FilteredComplex, PageEntry};

#[derive(Parser)]
#[command(name = "hkr", version, about = "Exact verification suites for Witt vectors, formal groups, restricted Lie algebras, Bocksteins and spectral sequences")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args)]
struct Common {
    /// Primes to run at (2, 3 or 5); repeat or separate with commas.
    #[arg(long = "prime", value_delimiter = ',', default_values_t = vec![2u64, 3])]
    primes: Vec<u64>,
    #[arg(long, default_value_t = Format::Json, value_enum)]
    format: Format,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Run a verification suite: witt, fgl, lie, gadual, specseq or all.
    Suite {
        name: String,
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 3)]
        witt_length: usize,
        #[arg(long, default_value_t = 6)]
        degree_t: u32,
        /// Defaults to p.
        #[arg(long)]
        degree_lambda: Option<u32>,
        #[arg(long, default_value_t = 2)]
        matrix_dim: usize,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Record wall time in the report (makes output vary between runs).
        #[arg(long)]
        timing: bool,
    },
    /// Hodge cohomology of projective space with V(c) = c^p.
    ProjectiveSpace {
        #[arg(long, default_value_t = 4)]
        n: usize,
        #[command(flatten)]
        common: Common,
    },
    /// The restricted p-th power of vector fields on G_m.
    GmRestricted {
        #[command(flatten)]
        common: Common,
    },
    /// Pages of the spectral sequence of a random filtered complex.
    Pages {
        #[arg(long, default_value_t = 2)]
        prime: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 3)]
        top: usize,
        #[arg(long, default_value_t = Format::Text, value_enum)]
        format: Format,
    },
}

fn emit(text: &str, out: Option<&PathBuf>) -> Result<(), std::io::Error> {
    match out {
        Some(path) => std::fs::write(path, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn render(report: &Report, format: Format) -> String {
    match format {
        Format::Json => report.to_json() + "\n",
        Format::Text => report.to_text(),
    }
}

fn finish(result: Result<Report, ConfigError>, format: Format, out: Option<&PathBuf>) -> ExitCode {
    match result {
        Ok(report) => {
            if let Err(e) = emit(&render(&report, format), out) {
                eprintln!("hkr: cannot write report: {e}");
                return ExitCode::from(CONFIG_ERROR_EXIT as u8);
            }
            ExitCode::from(exit_code(&report) as u8)
        }
        Err(e) => {
            eprintln!("hkr: {e}");
            ExitCode::from(CONFIG_ERROR_EXIT as u8)
        }
    }
}

fn pages(prime: u64, seed: u64, top: usize, format: Format) -> ExitCode {
    if !hkr_cli::config::SUPPORTED_PRIMES.contains(&prime) {
        eprintln!("hkr: {}", ConfigError::UnsupportedPrime(prime));
        return ExitCode::from(CONFIG_ERROR_EXIT as u8);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (d, l) = random_filtered(prime, 4, 3, top, |_| true, &mut rng);
    let fc = FilteredComplex::from_levels(prime, 0, d, l, top).expect("generated complexes are filtered");
    let pages = match all_pages(&fc) {
        Ok(p) => p,
        Err(e) => {
            eprintln!("hkr: {e}");
            return ExitCode::from(1);
        }
    };
    match format {
        Format::Json => {
            let entries: Vec<PageEntry> = pages.iter().flat_map(|p| p.entries()).collect();
            println!("{}", serde_json::to_string_pretty(&entries).expect("entries serialize"));
        }
        Format::Text => {
            for p in &pages {
                print!("{}", p.to_table());
            }
        }
    }
    ExitCode::SUCCESS
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Suite {
            name,
            common,
            witt_length,
            degree_t,
            degree_lambda,
            matrix_dim,
            trials,
            seed,
            timing,
        } => {
            let cfg = SuiteConfig {
                primes: common.primes,
                witt_length,
                degree_t,
                degree_lambda,
                matrix_dim,
                trials,
                seed,
                format: common.format,
                timing,
            };
            finish(run_suite(&name, &cfg), common.format, common.out.as_ref())
        }
        Command::ProjectiveSpace { n, common } => {
            let mut merged: Option<Report> = None;
            let mut result = Ok(());
            for &p in &common.primes {
                match demo_projective_space(n, p) {
                    Ok(r) => merged = Some(merge(merged, r)),
                    Err(e) => result = Err(e),
                }
            }
            finish(result.and(merged.ok_or(ConfigError::NoPrimes)), common.format, common.out.as_ref())
        }
        Command::GmRestricted { common } => {
            let mut merged: Option<Report> = None;
            let mut result = Ok(());
            for &p in &common.primes {
                match demo_gm_restricted(p) {
                    Ok(r) => merged = Some(merge(merged, r)),
                    Err(e) => result = Err(e),
                }
            }
            finish(result.and(merged.ok_or(ConfigError::NoPrimes)), common.format, common.out.as_ref())
        }
        Command::Pages { prime, seed, top, format } => pages(prime, seed, top, format),
    }
}

/// Concatenates per-prime demo reports, prefixing check names with `p=`.
fn merge(acc: Option<Report>, next: Report) -> Report {
    let p = next.params["p"].clone();
    let mut next = next;
    for c in &mut next.checks {
        c.name = format!("p{p}/{}", c.name);
    }
    match acc {
        None => {
            let mut r = Report::new(&next.suite, serde_json::json!({ "runs": [next.params.clone()] }));
            r.extend(next);
            r.finish(0)
        }
        Some(mut acc) => {
            if let Some(runs) = acc.params["runs"].as_array_mut() {
                runs.push(next.params.clone());
            }
            acc.extend(next);
            acc.finish(0)
        }
    }
}
