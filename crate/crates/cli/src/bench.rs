//! Benchmark harness: solves a generated corpus with each selected
//! algorithm and reports one CSV row per (instance, algorithm) pair.
//!
//! Every column except `wall_ms` is deterministic for a given corpus. The
//! `optimum` column is filled only when it is provable: by the exact oracle
//! on small instances, or by a validated one-bin certificate. Solver
//! refusals (the exact oracle over capacity) leave the result columns blank
//! so the rest of the run still reports.

use std::fmt::Write as _;
use std::time::Instant;

use cds_core::{exact_min_bins, validate, CostValue, Generated, GeneratorError, GeneratorSpec};
use rayon::prelude::*;

use crate::algorithms::Algorithm;

/// One corpus member: a display name and how to generate it.
pub struct CorpusEntry {
    pub name: String,
    pub spec: GeneratorSpec,
}

/// A full benchmark request.
pub struct BenchSpec {
    pub entries: Vec<CorpusEntry>,
    pub algorithms: Vec<Algorithm>,
}

/// First line of every report.
pub const CSV_HEADER: &str = "instance,algorithm,bins,total_cost,optimum,ratio,wall_ms";

/// Best provable bin count: exact below the oracle capacity, otherwise a
/// validated one-bin certificate (nothing beats one bin), otherwise unknown.
fn known_optimum(generated: &Generated) -> Option<usize> {
    let instance = &generated.instance;
    if instance.len() <= cds_core::EXACT_ITEM_LIMIT {
        let exact = exact_min_bins(instance).expect("within oracle capacity");
        return Some(exact.len());
    }
    match &generated.certificate {
        Some(cert) if cert.len() == 1 && validate(instance, cert).is_feasible() => Some(1),
        _ => None,
    }
}

struct Row {
    entry: usize,
    algorithm: Algorithm,
    bins: Option<usize>,
    total_cost: Option<CostValue>,
    wall_ms: u128,
}

/// Runs the corpus and returns the complete CSV text.
pub fn run(spec: &BenchSpec) -> Result<String, GeneratorError> {
    let corpus = spec
        .entries
        .iter()
        .map(|entry| Ok((entry.name.as_str(), entry.spec.generate()?)))
        .collect::<Result<Vec<_>, GeneratorError>>()?;

    let optima: Vec<Option<usize>> = corpus
        .par_iter()
        .map(|(_, generated)| known_optimum(generated))
        .collect();

    let jobs: Vec<(usize, Algorithm)> = (0..corpus.len())
        .flat_map(|entry| {
            spec.algorithms
                .iter()
                .map(move |&algorithm| (entry, algorithm))
        })
        .collect();

    let rows: Vec<Row> = jobs
        .par_iter()
        .map(|&(entry, algorithm)| {
            let instance = &corpus[entry].1.instance;
            let start = Instant::now();
            let outcome = algorithm.solve(instance);
            let wall_ms = start.elapsed().as_millis();
            let (bins, total_cost) = match outcome {
                Ok(schedule) => {
                    let cost = schedule
                        .total_cost(instance)
                        .expect("solver bins reference instance items");
                    (Some(schedule.len()), Some(cost))
                }
                Err(_) => (None, None),
            };
            Row {
                entry,
                algorithm,
                bins,
                total_cost,
                wall_ms,
            }
        })
        .collect();

    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    let mut max_ratio = vec![None::<f64>; spec.algorithms.len()];
    for row in &rows {
        let ratio = match (row.bins, optima[row.entry]) {
            (Some(bins), Some(optimum)) => Some(bins as f64 / optimum as f64),
            _ => None,
        };
        if let Some(r) = ratio {
            let slot = spec
                .algorithms
                .iter()
                .position(|&a| a == row.algorithm)
                .expect("row algorithms come from the request's list");
            max_ratio[slot] = Some(max_ratio[slot].map_or(r, |m: f64| m.max(r)));
        }
        writeln!(
            out,
            "{},{},{},{},{},{},{}",
            corpus[row.entry].0,
            row.algorithm.name(),
            row.bins.map(|b| b.to_string()).unwrap_or_default(),
            row.total_cost.map(|c| c.to_string()).unwrap_or_default(),
            optima[row.entry].map(|o| o.to_string()).unwrap_or_default(),
            ratio.map(|r| format!("{r:.4}")).unwrap_or_default(),
            row.wall_ms,
        )
        .expect("writing to a String");
    }
    if !corpus.is_empty() {
        for (slot, &algorithm) in spec.algorithms.iter().enumerate() {
            writeln!(
                out,
                "max_ratio,{},,,,{},",
                algorithm.name(),
                max_ratio[slot]
                    .map(|r| format!("{r:.4}"))
                    .unwrap_or_default(),
            )
            .expect("writing to a String");
        }
    }
    Ok(out)
}
