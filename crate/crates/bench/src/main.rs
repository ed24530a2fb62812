use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use shallowsort::{sort_by, verify_sorted_permutation, Engine, MergeKind, Policy};
use shallowsort_bench::experiment::run_stats;
use shallowsort_bench::io::{read_array, write_array, Format};
use shallowsort_bench::{compare_traces, generate, report_csv, run_experiment, BenchError, Family, Grid, InputSpec};

#[derive(Parser)]
#[command(
    name = "shallowsort",
    version,
    about = "Generate inputs, sort files and run mergesort experiments"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a generated input file.
    Gen {
        #[arg(long)]
        family: Family,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value = "text")]
        format: Format,
    },
    /// Sort a file in place.
    Sort {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value = "powersort")]
        policy: Policy,
        #[arg(long, default_value = "walkback")]
        engine: Engine,
        #[arg(long, default_value = "buffered")]
        kernel: MergeKind,
        /// Check the output is a sorted permutation of the input.
        #[arg(long)]
        verify: bool,
        /// Print the operation counters.
        #[arg(long)]
        metrics: bool,
        #[arg(long, default_value = "text")]
        format: Format,
    },
    /// Run a verified experiment grid and write a CSV report.
    Bench {
        #[arg(long, value_delimiter = ',', default_value = "uniform")]
        families: Vec<Family>,
        #[arg(long, value_delimiter = ',', default_value = "65536")]
        sizes: Vec<usize>,
        /// Defaults to every policy.
        #[arg(long, value_delimiter = ',')]
        policies: Vec<Policy>,
        /// Defaults to every engine.
        #[arg(long, value_delimiter = ',')]
        engines: Vec<Engine>,
        #[arg(long, value_delimiter = ',', default_value = "buffered")]
        kernels: Vec<MergeKind>,
        #[arg(long, default_value_t = 1)]
        reps: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Timed sorts per trial for the wall-clock median; 0 disables timing.
        #[arg(long, default_value_t = 5)]
        timing_runs: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Print the run count and run entropy of a file.
    Stats {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value = "text")]
        format: Format,
    },
    /// Compare the merge traces of two engines on one input.
    TraceDiff {
        #[command(flatten)]
        source: Source,
        #[arg(long, default_value = "powersort")]
        policy: Policy,
        #[arg(long, default_value = "standard")]
        a: Engine,
        #[arg(long, default_value = "walkback")]
        b: Engine,
        #[arg(long, default_value = "buffered")]
        kernel: MergeKind,
    },
}

/// An input file, or a generated input when no file is given.
#[derive(Args)]
struct Source {
    #[arg(long, conflicts_with_all = ["family", "n"])]
    input: Option<PathBuf>,
    #[arg(long, default_value = "text")]
    format: Format,
    #[arg(long, requires = "n")]
    family: Option<Family>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

impl Source {
    fn load(&self) -> Result<Vec<i64>, BenchError> {
        match (&self.input, &self.family, self.n) {
            (Some(path), _, _) => read_array(path, self.format),
            (None, family, Some(n)) => {
                let family = family.clone().unwrap_or(Family::UniformRandom);
                generate(&InputSpec::new(family, n, self.seed))
            }
            _ => Err(BenchError::Config("give --input or --n".into())),
        }
    }
}

fn run(command: Command) -> Result<(), BenchError> {
    match command {
        Command::Gen {
            family,
            n,
            seed,
            out,
            format,
        } => {
            let v = generate(&InputSpec::new(family, n, seed))?;
            write_array(&out, &v, format)
        }
        Command::Sort {
            input,
            policy,
            engine,
            kernel,
            verify,
            metrics,
            format,
        } => {
            let original = read_array(&input, format)?;
            let mut v = original.clone();
            let m = sort_by(&mut v, |a, b| a < b, policy, engine, kernel);
            if verify && !verify_sorted_permutation(&original, &v, |a, b| a < b) {
                return Err(BenchError::Verification {
                    spec: input.display().to_string(),
                    policy: policy.to_string(),
                    engine: engine.to_string(),
                    kernel: kernel.to_string(),
                    seed: 0,
                });
            }
            if metrics {
                println!("{m:#?}");
            }
            write_array(&input, &v, format)
        }
        Command::Bench {
            families,
            sizes,
            policies,
            engines,
            kernels,
            reps,
            seed,
            timing_runs,
            out,
        } => {
            let specs = families
                .iter()
                .flat_map(|f| sizes.iter().map(move |&n| InputSpec::new(f.clone(), n, seed)))
                .collect();
            let grid = Grid {
                specs,
                policies: if policies.is_empty() {
                    Policy::ALL.to_vec()
                } else {
                    policies
                },
                engines: if engines.is_empty() {
                    Engine::ALL.to_vec()
                } else {
                    engines
                },
                kinds: kernels,
                repetitions: reps,
                timing_runs,
            };
            let records = run_experiment(&grid)?;
            report_csv(&records, &out)?;
            eprintln!("wrote {} records to {}", records.len(), out.display());
            Ok(())
        }
        Command::Stats { input, format } => {
            let v = read_array(&input, format)?;
            let (entropy, runs) = run_stats(&v);
            println!("n = {}\nruns = {runs}\nentropy = {entropy:.6}", v.len());
            Ok(())
        }
        Command::TraceDiff {
            source,
            policy,
            a,
            b,
            kernel,
        } => {
            let v = source.load()?;
            let cmp = compare_traces(&v, policy, a, b, kernel);
            println!("merges: {a} {}, {b} {}", cmp.merges.0, cmp.merges.1);
            match cmp.first_divergence {
                None => println!("traces equal"),
                Some((i, x, y)) => {
                    println!("first divergence at merge {i}: {a} {x:?}, {b} {y:?}");
                    return Err(BenchError::Config("traces differ".into()));
                }
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse().command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
