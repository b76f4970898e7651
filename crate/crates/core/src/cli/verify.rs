use num_rational::BigRational;
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::gen::{generate, rng_for, GenParams};
use super::io::{exact_count, run_mode, Epsilon, Instance, Mode, Problem};
use super::CliError;
use crate::oracles::Limits;
use crate::stepfunc::{ratio_to_f64, within_factor};

/// Where the instances of a verification run come from.
pub enum Source {
    File(Vec<Instance>),
    Random {
        problem: Problem,
        bounds: GenParams,
        seed: u64,
        trials: u64,
    },
}

#[derive(Debug, Clone, Serialize)]
pub struct Violation {
    pub trial: u64,
    pub mode: Mode,
    pub exact: String,
    pub approx: String,
    pub instance: Instance,
}

#[derive(Debug, Clone, Serialize)]
pub struct ModeSummary {
    pub mode: Mode,
    pub checks: u64,
    pub max_ratio: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifySummary {
    pub epsilon: String,
    pub instances: u64,
    pub checks: u64,
    pub violations: Vec<Violation>,
    pub modes: Vec<ModeSummary>,
}

/// Draws sizes uniformly up to the bounds, then an instance of those sizes.
fn random_instance(problem: Problem, bounds: &GenParams, seed: u64, trial: u64) -> Instance {
    let mut rng = rng_for(seed, trial);
    let sized = GenParams {
        n: rng.gen_range(1..=bounds.n.max(1)),
        m: rng.gen_range(1..=bounds.m.max(1)),
        ..*bounds
    };
    generate(problem, &sized, &mut rng)
}

struct Check {
    mode: Mode,
    ratio: f64,
    violation: Option<Violation>,
}

fn check_instance(
    trial: u64,
    inst: &Instance,
    eps: &Epsilon,
    limits: &Limits,
) -> Result<Vec<Check>, CliError> {
    let exact = exact_count(inst, Mode::ExactDp, limits)?;
    inst.problem()
        .approx_modes()
        .iter()
        .map(|&mode| {
            let approx = run_mode(inst, mode, Some(eps), limits)?.count;
            let ok = within_factor(&exact, &approx, &eps.value);
            Ok(Check {
                mode,
                ratio: ratio_to_f64(&approx, &exact),
                violation: (!ok).then(|| Violation {
                    trial,
                    mode,
                    exact: exact.to_string(),
                    approx: approx.to_string(),
                    instance: inst.clone(),
                }),
            })
        })
        .collect()
}

pub fn verify(source: Source, eps: &Epsilon, limits: &Limits) -> Result<VerifySummary, CliError> {
    let results: Vec<Result<Vec<Check>, CliError>> = match &source {
        Source::File(instances) => instances
            .par_iter()
            .enumerate()
            .map(|(i, inst)| check_instance(i as u64, inst, eps, limits))
            .collect(),
        Source::Random {
            problem,
            bounds,
            seed,
            trials,
        } => (0..*trials)
            .into_par_iter()
            .map(|t| check_instance(t, &random_instance(*problem, bounds, *seed, t), eps, limits))
            .collect(),
    };
    let instances = results.len() as u64;
    let mut modes: Vec<ModeSummary> = Vec::new();
    let mut violations = Vec::new();
    let mut checks = 0;
    for result in results {
        for c in result? {
            checks += 1;
            match modes.iter_mut().find(|m| m.mode == c.mode) {
                Some(m) => {
                    m.checks += 1;
                    m.max_ratio = m.max_ratio.max(c.ratio);
                }
                None => modes.push(ModeSummary {
                    mode: c.mode,
                    checks: 1,
                    max_ratio: c.ratio,
                }),
            }
            violations.extend(c.violation);
        }
    }
    Ok(VerifySummary {
        epsilon: eps.text.clone(),
        instances,
        checks,
        violations,
        modes,
    })
}

impl VerifySummary {
    /// Largest ratio permitted by the epsilon, for display.
    pub fn bound(&self) -> f64 {
        use num_traits::ToPrimitive;
        let eps: BigRational =
            crate::stepfunc::parse_rational(&self.epsilon).expect("parsed before");
        1.0 + eps.to_f64().unwrap_or(f64::INFINITY)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracles::MTuplesInstance;

    #[test]
    fn worked_example_ratio() {
        let inst = Instance::Mtuples(
            MTuplesInstance::new(vec![vec![1, 3, 7], vec![2, 5], vec![3, 9]], 17).unwrap(),
        );
        let eps = Epsilon::parse("7").unwrap();
        let s = verify(Source::File(vec![inst]), &eps, &Limits::default()).unwrap();
        assert!(s.violations.is_empty());
        let fptas = s.modes.iter().find(|m| m.mode == Mode::Fptas).unwrap();
        assert!((fptas.max_ratio - 4.0).abs() < 1e-9);
        assert_eq!(s.bound(), 8.0);
    }

    #[test]
    fn random_knapsack_run_is_clean() {
        let bounds = GenParams {
            n: 10,
            wmax: 50,
            cmax: Some(200),
            ..GenParams::default()
        };
        let src = Source::Random {
            problem: Problem::Knapsack,
            bounds,
            seed: 3,
            trials: 30,
        };
        let s = verify(src, &Epsilon::parse("0.5").unwrap(), &Limits::default()).unwrap();
        assert_eq!(s.instances, 30);
        assert_eq!(s.checks, 60);
        assert!(s.violations.is_empty());
    }
}
