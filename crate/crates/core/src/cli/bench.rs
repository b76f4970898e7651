use std::io::Write;

use serde::Serialize;

use super::gen::{generate, rng_for, GenParams};
use super::io::{millis, run_mode, Epsilon, Instance, Mode, Problem};
use super::CliError;
use crate::error::Error;
use crate::oracles::Limits;

/// A sweep: one base instance, re-run at several magnitudes.
pub struct BenchSpec {
    pub problem: Problem,
    pub params: GenParams,
    pub seed: u64,
    /// Powers of ten applied to every input number.
    pub scales: Vec<u32>,
    pub epsilons: Vec<Epsilon>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchRow {
    pub algorithm: String,
    pub size: usize,
    pub scale: u32,
    pub epsilon: String,
    pub count: String,
    pub oracle_calls: Option<u64>,
    pub elapsed_ms: f64,
    pub set_size_max: Option<usize>,
}

fn size_of(inst: &Instance) -> usize {
    match inst {
        Instance::Mtuples(m) => m.m(),
        Instance::Knapsack(k) => k.n(),
        Instance::Contingency2(c) => c.n(),
    }
}

pub fn bench_rows(spec: &BenchSpec, limits: &Limits) -> Result<Vec<BenchRow>, CliError> {
    let base = generate(spec.problem, &spec.params, &mut rng_for(spec.seed, 0));
    let mut rows = Vec::new();
    for &scale in &spec.scales {
        let factor = 10i64
            .checked_pow(scale)
            .ok_or_else(|| CliError::Usage(format!("scale 10^{scale} is too large")))?;
        let inst = base.scaled(factor)?;
        let size = size_of(&inst);
        // Exact rows beyond the work caps are kept with an empty count.
        let exact = match run_mode(&inst, Mode::ExactDp, None, limits) {
            Ok(c) => Some(c),
            Err(CliError::Core(Error::TooLarge { .. })) => None,
            Err(e) => return Err(e),
        };
        rows.push(BenchRow {
            algorithm: Mode::ExactDp.name().to_string(),
            size,
            scale,
            epsilon: String::new(),
            count: exact
                .as_ref()
                .map(|c| c.count.to_string())
                .unwrap_or_default(),
            oracle_calls: None,
            elapsed_ms: exact.as_ref().map(|c| millis(c.elapsed)).unwrap_or(0.0),
            set_size_max: None,
        });
        for eps in &spec.epsilons {
            for &mode in spec.problem.approx_modes() {
                let c = run_mode(&inst, mode, Some(eps), limits)?;
                rows.push(BenchRow {
                    algorithm: mode.name().to_string(),
                    size,
                    scale,
                    epsilon: eps.text.clone(),
                    count: c.count.to_string(),
                    oracle_calls: c.oracle_calls,
                    elapsed_ms: millis(c.elapsed),
                    set_size_max: c.set_sizes.iter().copied().max(),
                });
            }
        }
    }
    Ok(rows)
}

pub fn write_csv(rows: &[BenchRow], out: impl Write) -> Result<(), CliError> {
    let mut w = csv::Writer::from_writer(out);
    for row in rows {
        w.serialize(row)
            .map_err(|e| CliError::Output(e.to_string()))?;
    }
    w.flush().map_err(|e| CliError::Output(e.to_string()))?;
    Ok(())
}
