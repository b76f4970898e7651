use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::io::{Instance, Problem};
use crate::oracles::{Contingency2Instance, KnapsackInstance, MTuplesInstance};

/// Size knobs for random instances. For `gen` they are exact sizes; `verify`
/// treats `n`/`m` as upper bounds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GenParams {
    /// Items (knapsack) or columns (contingency).
    pub n: usize,
    /// Number of sets (m-tuples).
    pub m: usize,
    pub wmax: i64,
    /// Capacity cap; `None` draws up to the total weight.
    pub cmax: Option<i64>,
    pub setmax: usize,
    pub valmax: i64,
    pub cellmax: i64,
}

impl Default for GenParams {
    fn default() -> Self {
        GenParams {
            n: 5,
            m: 3,
            wmax: 20,
            cmax: None,
            setmax: 4,
            valmax: 30,
            cellmax: 5,
        }
    }
}

/// Generator for trial `stream` of a seeded run.
pub fn rng_for(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

pub fn generate(problem: Problem, p: &GenParams, rng: &mut impl Rng) -> Instance {
    match problem {
        Problem::Mtuples => {
            let sets: Vec<Vec<i64>> = (0..p.m.max(1))
                .map(|_| {
                    let len = rng.gen_range(1..=p.setmax.max(1));
                    (0..len).map(|_| rng.gen_range(0..=p.valmax)).collect()
                })
                .collect();
            let reach: i64 = sets
                .iter()
                .map(|s| s.iter().max().copied().unwrap_or(0))
                .sum();
            let bound = rng.gen_range(0..=reach);
            Instance::Mtuples(MTuplesInstance::new(sets, bound).expect("valid by construction"))
        }
        Problem::Knapsack => {
            let weights: Vec<i64> = (0..p.n.max(1))
                .map(|_| rng.gen_range(1..=p.wmax.max(1)))
                .collect();
            let cmax = p.cmax.unwrap_or_else(|| weights.iter().sum());
            let capacity = rng.gen_range(0..=cmax.max(0));
            Instance::Knapsack(
                KnapsackInstance::new(weights, capacity).expect("valid by construction"),
            )
        }
        Problem::Contingency2 => {
            let n = p.n.max(1);
            let cellmax = p.cellmax.max(1);
            let mut top = Vec::with_capacity(n);
            let mut cols = Vec::with_capacity(n);
            for _ in 0..n {
                // Redraw the column until it is nonzero so every column sum
                // is positive.
                loop {
                    let (a, b) = (rng.gen_range(0..=cellmax), rng.gen_range(0..=cellmax));
                    if a + b > 0 {
                        top.push(a);
                        cols.push(a + b);
                        break;
                    }
                }
            }
            let r1: i64 = top.iter().sum();
            let r2 = cols.iter().sum::<i64>() - r1;
            Instance::Contingency2(
                Contingency2Instance::new([r1, r2], cols).expect("valid by construction"),
            )
        }
    }
}
