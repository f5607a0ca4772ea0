mod config;
mod obstruct;
mod random;
mod report;
mod suites;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};
use nilmassey_core::magnus::magnus_embed;
use nilmassey_core::obstruction::Verdict;
use nilmassey_core::{FreeWord, GroupElement, ModulusContext, TruncatedSeries};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::config::RunConfig;
use crate::suites::{AldefParams, CochainParams, EquivarianceParams, MagnusParams, PropParams};

const EXIT_FAIL: u8 = 1;
const EXIT_CONFIG: u8 = 2;

#[derive(Parser)]
#[command(name = "nilmassey", version, about = "Magnus expansions, lifting obstructions and Massey products over Z/l^k")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a verification suite; exit 0 iff every identity holds.
    Verify {
        #[command(subcommand)]
        suite: Suite,
    },
    /// Run the single-2 Massey obstruction pipeline on a JSON config.
    Obstruct {
        #[arg(long)]
        config: PathBuf,
    },
    /// Print the Magnus expansion of a word as a monomial table.
    Expand {
        /// Signed generator list, e.g. "1 2 -1 -2".
        #[arg(long, allow_hyphen_values = true)]
        word: String,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        ell: u64,
        #[arg(long, default_value_t = 1)]
        k: u32,
        /// Number of generators; defaults to the largest one in the word.
        #[arg(long)]
        r: Option<usize>,
    },
    /// Time the series kernel.
    Bench {
        #[command(subcommand)]
        which: Bench,
    },
}

#[derive(Subcommand)]
enum Bench {
    SeriesMul {
        #[arg(long)]
        r: usize,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 7)]
        ell: u64,
        #[arg(long, default_value_t = 1)]
        k: u32,
        #[arg(long, default_value_t = 1000)]
        iters: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Subcommand)]
enum Suite {
    Aldef {
        #[arg(long, default_value_t = 6)]
        lmax: usize,
        #[arg(long = "Nmax", alias = "nmax", default_value_t = 50)]
        nmax: i64,
        #[arg(long, value_delimiter = ',', default_value = "5,7,11")]
        ell: Vec<u64>,
        #[arg(long, default_value_t = 3)]
        kmax: u32,
    },
    Magnus {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 10_000)]
        pairs: usize,
        #[arg(long, value_delimiter = ',', default_value = "5,7")]
        ell: Vec<u64>,
        #[arg(long, default_value_t = 20)]
        samples: usize,
    },
    Cochain {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1000)]
        cases: usize,
        #[arg(long, default_value_t = 12)]
        max_order: usize,
        #[arg(long, default_value_t = 3)]
        max_rank: usize,
        #[arg(long, default_value_t = 7)]
        ell: u64,
        #[arg(long, default_value_t = 1)]
        k: u32,
    },
    Equivariance {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, default_value_t = 7)]
        ell: u64,
        #[arg(long, default_value_t = 3)]
        n: usize,
    },
    Prop24(PropArgs),
    Prop25(PropArgs),
}

#[derive(clap::Args)]
struct PropArgs {
    /// `cyclic:m` or `abelian:m1xm2`.
    #[arg(long, default_value = "cyclic:3")]
    group: String,
    #[arg(long, default_value_t = 2)]
    n: usize,
    #[arg(long, default_value_t = 7)]
    ell: u64,
    #[arg(long, default_value_t = 1)]
    k: u32,
    /// Value of χ on the generator; all admissible characters when omitted.
    #[arg(long)]
    chi: Option<u64>,
    /// Random monodromy twists per character (prop25 only).
    #[arg(long, default_value_t = 20)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

impl PropArgs {
    fn params(&self) -> PropParams {
        PropParams {
            group: self.group.clone(),
            n: self.n,
            ell: self.ell,
            k: self.k,
            chi: self.chi,
            samples: self.samples,
            seed: self.seed,
        }
    }
}

fn print(value: &Value) {
    println!("{}", serde_json::to_string_pretty(value).expect("reports serialize"));
}

fn config_error(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("{}", json!({ "error": msg.to_string() }));
    ExitCode::from(EXIT_CONFIG)
}

fn init_threads() -> Result<(), String> {
    let Ok(raw) = std::env::var("NILMASSEY_THREADS") else { return Ok(()) };
    let n: usize = raw.trim().parse().ok().filter(|&n| n > 0).ok_or(format!("NILMASSEY_THREADS={raw:?} is not a positive integer"))?;
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| e.to_string())
}

fn verify(suite: Suite) -> nilmassey_core::Result<report::SuiteReport> {
    match suite {
        Suite::Aldef { lmax, nmax, ell, kmax } => suites::aldef(&AldefParams { lmax, nmax, ells: ell, kmax }),
        Suite::Magnus { seed, pairs, ell, samples } => {
            suites::magnus(&MagnusParams { seed, pairs, ells: ell, depth_max: 5, samples_per_depth: samples, nmax: 4 })
        }
        Suite::Cochain { seed, cases, max_order, max_rank, ell, k } => {
            suites::cochain(&CochainParams { seed, cases, max_order, max_rank, ell, k })
        }
        Suite::Equivariance { seed, samples, ell, n } => suites::equivariance(&EquivarianceParams { seed, samples, ell, n }),
        Suite::Prop24(a) => suites::prop24(&a.params()),
        Suite::Prop25(a) => suites::prop25(&a.params()),
    }
}

fn expand(word: &str, n: usize, ell: u64, k: u32, r: Option<usize>) -> nilmassey_core::Result<Value> {
    let ctx = ModulusContext::new(ell, k)?;
    let w: FreeWord = word.parse()?;
    let r = r.unwrap_or_else(|| w.max_generator().max(1));
    let e = magnus_embed(&w, r, n, ctx)?;
    Ok(json!(e.series().to_table()))
}

fn bench_series_mul(r: usize, n: usize, ell: u64, k: u32, iters: u32, seed: u64) -> nilmassey_core::Result<Value> {
    let ctx = ModulusContext::new(ell, k)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut random_element = || -> nilmassey_core::Result<GroupElement> {
        let mut s = TruncatedSeries::one(r, n, ctx);
        for d in 1..=n {
            let block: Vec<u64> = (0..r.pow(d as u32)).map(|_| rng.gen_range(0..ctx.modulus())).collect();
            s.set_homogeneous(d, &block);
        }
        GroupElement::new(s)
    };
    let (a, b) = (random_element()?, random_element()?);
    let start = Instant::now();
    let mut acc = a.clone();
    for _ in 0..iters {
        acc = acc.multiply(&b)?;
    }
    let elapsed = start.elapsed();
    std::hint::black_box(&acc);
    Ok(json!({
        "bench": "series-mul",
        "r": r,
        "n": n,
        "ell": ell,
        "k": k,
        "iters": iters,
        "ns_per_mul": elapsed.as_nanos() as f64 / f64::from(iters.max(1)),
    }))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = init_threads() {
        return config_error(e);
    }
    match cli.command {
        Command::Verify { suite } => match verify(suite) {
            Ok(report) => {
                print(&serde_json::to_value(&report).expect("reports serialize"));
                if report.passed {
                    ExitCode::SUCCESS
                } else {
                    ExitCode::from(EXIT_FAIL)
                }
            }
            Err(e) => config_error(e),
        },
        Command::Obstruct { config } => {
            let text = match std::fs::read_to_string(&config) {
                Ok(t) => t,
                Err(e) => return config_error(format!("{}: {e}", config.display())),
            };
            let parsed: RunConfig = match serde_json::from_str(&text) {
                Ok(c) => c,
                Err(e) => return config_error(format!("{}: {e}", config.display())),
            };
            match obstruct::run(&parsed) {
                Ok((value, verdict)) => {
                    print(&value);
                    if verdict == Verdict::Unobstructed {
                        ExitCode::SUCCESS
                    } else {
                        ExitCode::from(EXIT_FAIL)
                    }
                }
                Err(e) => config_error(e),
            }
        }
        Command::Expand { word, n, ell, k, r } => match expand(&word, n, ell, k, r) {
            Ok(v) => {
                print(&v);
                ExitCode::SUCCESS
            }
            Err(e) => config_error(e),
        },
        Command::Bench { which: Bench::SeriesMul { r, n, ell, k, iters, seed } } => {
            match bench_series_mul(r, n, ell, k, iters, seed) {
                Ok(v) => {
                    print(&v);
                    ExitCode::SUCCESS
                }
                Err(e) => config_error(e),
            }
        }
    }
}
