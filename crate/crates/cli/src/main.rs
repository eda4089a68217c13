//! `cds`: generate, solve, validate, and benchmark container delivery
//! scheduling instances.
//!
//! Exit codes: 0 success/feasible, 1 infeasible solution or violated
//! certificate, 2 usage/parse/consistency errors, 3 capacity guards.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use cds_cli::algorithms::Algorithm;
use cds_cli::bench::{self, BenchSpec, CorpusEntry};
use cds_cli::format::{parse_cost, FormatError, InstanceFile, Metadata, SolutionFile};
use cds_core::{validate, GeneratorError, GeneratorSpec, Instance, OracleError};

#[derive(Parser)]
#[command(name = "cds", version, about = "Container delivery scheduling tools")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write an instance (and its claimed packing, when the family has one)
    Generate {
        #[command(subcommand)]
        family: Family,
    },
    /// Solve an instance and write the solution document
    Solve {
        /// Instance document to read
        #[arg(long)]
        instance: PathBuf,
        /// Solver to run
        #[arg(long, value_enum)]
        algorithm: Algorithm,
        /// Where to write the solution document
        #[arg(long)]
        out: PathBuf,
    },
    /// Recheck a solution document against its instance
    Validate {
        /// Instance document to read
        #[arg(long)]
        instance: PathBuf,
        /// Solution document to recheck
        #[arg(long)]
        solution: PathBuf,
    },
    /// Solve a generated corpus with each algorithm and write a CSV report
    Bench {
        /// Where to write the CSV report
        #[arg(long)]
        out: PathBuf,
        /// Algorithms to run (repeatable; default: all approximations)
        #[arg(long = "algorithm", value_enum)]
        algorithms: Vec<Algorithm>,
        /// Add a grouped-dues instance with this many groups (repeatable)
        #[arg(long = "theorem3", value_name = "ELL")]
        theorem3: Vec<u32>,
        /// Add a median-adversary instance for this lambda (repeatable)
        #[arg(long = "median-lb", value_name = "LAMBDA")]
        median_lb: Vec<u64>,
        /// Add a uniform random instance: N,MAX_DUE,BOUND,SEED (repeatable)
        #[arg(long = "random", value_name = "N,MAX_DUE,BOUND,SEED")]
        random: Vec<String>,
    },
}

#[derive(Subcommand)]
enum Family {
    /// Grouped dues that early-policy greedy splits into one bin per group
    Theorem3 {
        /// Number of due groups (2 to 6)
        #[arg(long)]
        ell: u32,
        /// Bin budget override; must divide evenly among every group size
        #[arg(long)]
        bound: Option<String>,
        /// Where to write the instance document
        #[arg(long)]
        out: PathBuf,
        /// Where to write the claimed packing (default: <out>.cert.json)
        #[arg(long)]
        certificate: Option<PathBuf>,
    },
    /// Runs plus heavy groups that double median-policy greedy's bin count
    MedianLb {
        /// Shape parameter; lambda − 1 must be a perfect square
        #[arg(long)]
        lambda: u64,
        #[arg(long)]
        out: PathBuf,
        /// Where to write the claimed packing (default: <out>.cert.json)
        #[arg(long)]
        certificate: Option<PathBuf>,
    },
    /// Encode an equal-sum triple partition search as a scheduling instance
    ThreePartition {
        /// 3m values, comma separated, each strictly between beta/4 and beta/2
        #[arg(long, value_delimiter = ',', required = true)]
        values: Vec<u64>,
        /// Target sum of each triple
        #[arg(long)]
        beta: u64,
        /// Known triple partition as index triples, e.g. "0,1,2;3,4,5"
        #[arg(long)]
        partition: Option<String>,
        #[arg(long)]
        out: PathBuf,
        /// Where to write the claimed packing (default: <out>.cert.json)
        #[arg(long)]
        certificate: Option<PathBuf>,
    },
    /// Uniform random dues
    Random {
        /// Number of items
        #[arg(long)]
        n: usize,
        /// Dues are drawn from 0..=MAX_DUE
        #[arg(long)]
        max_due: u64,
        /// Per-bin cost budget (decimal)
        #[arg(long)]
        bound: String,
        /// Generator seed
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(thiserror::Error, Debug)]
enum CliError {
    #[error(transparent)]
    Generator(#[from] GeneratorError),
    #[error(transparent)]
    Format(#[from] FormatError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    fn exit_code(&self) -> ExitCode {
        match self {
            // Capacity guards: the request was understood but is too big.
            CliError::Oracle(_) => ExitCode::from(3),
            CliError::Generator(GeneratorError::InstanceTooLarge { .. }) => ExitCode::from(3),
            _ => ExitCode::from(2),
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(error) => {
            eprintln!("error: {error}");
            error.exit_code()
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, CliError> {
    match cli.command {
        Command::Generate { family } => cmd_generate(family),
        Command::Solve {
            instance,
            algorithm,
            out,
        } => cmd_solve(&instance, algorithm, &out),
        Command::Validate { instance, solution } => cmd_validate(&instance, &solution),
        Command::Bench {
            out,
            algorithms,
            theorem3,
            median_lb,
            random,
        } => cmd_bench(&out, algorithms, &theorem3, &median_lb, &random),
    }
}

fn read_text(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn write_text(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn read_instance(path: &Path) -> Result<(Instance, InstanceFile), CliError> {
    let file = InstanceFile::from_json(&read_text(path)?)?;
    let instance = file.to_instance()?;
    Ok((instance, file))
}

/// "a,b,c;d,e,f" → [[a,b,c],[d,e,f]]; validated further by the generator.
fn parse_partition(text: &str) -> Result<Vec<Vec<usize>>, CliError> {
    text.split(';')
        .map(|block| {
            block
                .split(',')
                .map(|index| {
                    index.trim().parse::<usize>().map_err(|_| {
                        CliError::Usage(format!("bad partition index {index:?} in {text:?}"))
                    })
                })
                .collect()
        })
        .collect()
}

/// "N,MAX_DUE,BOUND,SEED" → a random-family corpus entry.
fn parse_random_entry(text: &str) -> Result<CorpusEntry, CliError> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    let [n, max_due, bound, seed] = parts.as_slice() else {
        return Err(CliError::Usage(format!(
            "expected N,MAX_DUE,BOUND,SEED, got {text:?}"
        )));
    };
    let parse_u64 = |what: &str, value: &str| {
        value
            .parse::<u64>()
            .map_err(|_| CliError::Usage(format!("bad {what} {value:?} in --random {text:?}")))
    };
    let n = parse_u64("item count", n)? as usize;
    let max_due = parse_u64("max due", max_due)?;
    let bound = parse_cost(bound)?;
    let seed = parse_u64("seed", seed)?;
    Ok(CorpusEntry {
        name: format!("random-n{n}-d{max_due}-b{bound}-s{seed}"),
        spec: GeneratorSpec::Random {
            n,
            max_due,
            bound,
            seed,
        },
    })
}

fn metadata_for(spec: &GeneratorSpec) -> Metadata {
    let mut params = serde_json::Map::new();
    let mut seed = None;
    match spec {
        GeneratorSpec::Theorem3 { ell, bound } => {
            params.insert("ell".into(), (*ell).into());
            if let Some(bound) = bound {
                params.insert("bound".into(), bound.to_string().into());
            }
        }
        GeneratorSpec::MedianLowerBound { lambda } => {
            params.insert("lambda".into(), (*lambda).into());
        }
        GeneratorSpec::ThreePartition {
            values,
            beta,
            partition,
        } => {
            params.insert("values".into(), values.clone().into());
            params.insert("beta".into(), (*beta).into());
            if let Some(partition) = partition {
                let blocks: Vec<serde_json::Value> = partition
                    .iter()
                    .map(|block| block.iter().map(|&i| i as u64).collect::<Vec<u64>>().into())
                    .collect();
                params.insert("partition".into(), blocks.into());
            }
        }
        GeneratorSpec::Random {
            n,
            max_due,
            bound,
            seed: s,
        } => {
            params.insert("n".into(), (*n as u64).into());
            params.insert("max_due".into(), (*max_due).into());
            params.insert("bound".into(), bound.to_string().into());
            seed = Some(*s);
        }
    }
    Metadata {
        family: spec.family().to_string(),
        params,
        seed,
    }
}

fn default_certificate_path(out: &Path) -> PathBuf {
    let mut name = out.file_stem().unwrap_or_default().to_os_string();
    name.push(".cert.json");
    out.with_file_name(name)
}

fn cmd_generate(family: Family) -> Result<ExitCode, CliError> {
    let (spec, out, certificate) = match family {
        Family::Theorem3 {
            ell,
            bound,
            out,
            certificate,
        } => {
            let bound = bound.as_deref().map(parse_cost).transpose()?;
            (GeneratorSpec::Theorem3 { ell, bound }, out, certificate)
        }
        Family::MedianLb {
            lambda,
            out,
            certificate,
        } => (GeneratorSpec::MedianLowerBound { lambda }, out, certificate),
        Family::ThreePartition {
            values,
            beta,
            partition,
            out,
            certificate,
        } => {
            let partition = partition.as_deref().map(parse_partition).transpose()?;
            (
                GeneratorSpec::ThreePartition {
                    values,
                    beta,
                    partition,
                },
                out,
                certificate,
            )
        }
        Family::Random {
            n,
            max_due,
            bound,
            seed,
            out,
        } => {
            let bound = parse_cost(&bound)?;
            (
                GeneratorSpec::Random {
                    n,
                    max_due,
                    bound,
                    seed,
                },
                out,
                None,
            )
        }
    };

    let generated = spec.generate()?;
    let file = InstanceFile::from_instance(&generated.instance, Some(metadata_for(&spec)));
    write_text(&out, &file.to_json())?;
    println!(
        "wrote {} items (bound {}) to {}",
        generated.instance.len(),
        generated.instance.bound(),
        out.display()
    );

    if let Some(claimed) = &generated.certificate {
        let solution = SolutionFile::from_schedule(&generated.instance, claimed, "certificate");
        let path = certificate.unwrap_or_else(|| default_certificate_path(&out));
        write_text(&path, &solution.to_json())?;
        println!(
            "wrote claimed packing ({} bins, feasible: {}) to {}",
            solution.totals.bins,
            solution.feasible,
            path.display()
        );
        if !solution.feasible {
            eprintln!("warning: the family's claimed packing does not validate; it is recorded with feasible: false");
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_solve(instance_path: &Path, algorithm: Algorithm, out: &Path) -> Result<ExitCode, CliError> {
    let (instance, _) = read_instance(instance_path)?;
    let schedule = algorithm.solve(&instance)?;
    let solution = SolutionFile::from_schedule(&instance, &schedule, algorithm.name());
    write_text(out, &solution.to_json())?;
    println!(
        "{}: {} bins, total cost {}, feasible: {}",
        algorithm.name(),
        solution.totals.bins,
        solution.totals.total_cost,
        solution.feasible
    );
    if solution.feasible {
        Ok(ExitCode::SUCCESS)
    } else {
        // Solvers must always emit feasible schedules; reaching this is a bug.
        let report = validate(&instance, &schedule);
        eprintln!("error: solver emitted an infeasible schedule; please report this. {report:?}");
        Ok(ExitCode::from(1))
    }
}

fn cmd_validate(instance_path: &Path, solution_path: &Path) -> Result<ExitCode, CliError> {
    let (instance, _) = read_instance(instance_path)?;
    let solution = SolutionFile::from_json(&read_text(solution_path)?)?;
    let schedule = solution.to_schedule(&instance)?;
    let report = validate(&instance, &schedule);

    let bound = instance.bound();
    println!(
        "{} bins over {} items, bound {}",
        schedule.len(),
        instance.len(),
        bound
    );
    for (index, bin) in schedule.bins.iter().enumerate() {
        match bin.cost(&instance) {
            Ok(cost) => {
                let verdict = if cost <= bound { "ok" } else { "OVER BOUND" };
                println!(
                    "bin {index}: time {}, {} items, cost {cost} ({verdict})",
                    bin.time(),
                    bin.item_ids().len()
                );
            }
            Err(_) => println!(
                "bin {index}: time {}, {} items, cost not computable (unknown items)",
                bin.time(),
                bin.item_ids().len()
            ),
        }
    }
    if !report.missing.is_empty() {
        println!(
            "missing items: {:?}",
            report.missing.iter().map(|id| id.0).collect::<Vec<_>>()
        );
    }
    if !report.duplicated.is_empty() {
        println!(
            "duplicated items: {:?}",
            report.duplicated.iter().map(|id| id.0).collect::<Vec<_>>()
        );
    }
    if !report.unknown.is_empty() {
        println!(
            "unknown items: {:?}",
            report.unknown.iter().map(|id| id.0).collect::<Vec<_>>()
        );
    }
    for overloaded in &report.overloaded {
        println!(
            "bin {} exceeds the bound: cost {} > {}",
            overloaded.bin_index, overloaded.cost, bound
        );
    }

    if report.is_feasible() {
        println!("feasible");
        Ok(ExitCode::SUCCESS)
    } else {
        println!("infeasible");
        Ok(ExitCode::from(1))
    }
}

fn cmd_bench(
    out: &Path,
    algorithms: Vec<Algorithm>,
    theorem3: &[u32],
    median_lb: &[u64],
    random: &[String],
) -> Result<ExitCode, CliError> {
    let algorithms = if algorithms.is_empty() {
        Algorithm::APPROXIMATIONS.to_vec()
    } else {
        algorithms
    };

    let mut entries = Vec::new();
    for &ell in theorem3 {
        entries.push(CorpusEntry {
            name: format!("theorem3-l{ell}"),
            spec: GeneratorSpec::Theorem3 { ell, bound: None },
        });
    }
    for &lambda in median_lb {
        entries.push(CorpusEntry {
            name: format!("median-lb-{lambda}"),
            spec: GeneratorSpec::MedianLowerBound { lambda },
        });
    }
    for text in random {
        entries.push(parse_random_entry(text)?);
    }

    let data_rows = entries.len() * algorithms.len();
    let csv = bench::run(&BenchSpec {
        entries,
        algorithms,
    })?;
    write_text(out, &csv)?;
    println!("wrote {} data rows to {}", data_rows, out.display());
    Ok(ExitCode::SUCCESS)
}
