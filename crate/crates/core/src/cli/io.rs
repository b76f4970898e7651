use std::fs::File;
use std::io::{self, BufRead, BufReader, Read, Write};
use std::path::Path;
use std::time::Duration;

use clap::ValueEnum;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use super::CliError;
use crate::contingency::fptas_contingency2;
use crate::knapsack::{fptas_knapsack, strong_fptas_knapsack};
use crate::mtuples::{fptas_mtuples, strong_fptas_mtuples};
use crate::oracles::{BigCount, Contingency2Instance, KnapsackInstance, Limits, MTuplesInstance};
use crate::report::RunReport;
use crate::stepfunc::{parse_rational, ratio_to_f64};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Problem {
    Mtuples,
    Knapsack,
    Contingency2,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    ExactDp,
    ExactBrute,
    Fptas,
    StrongFptas,
}

impl Mode {
    pub fn is_exact(self) -> bool {
        matches!(self, Mode::ExactDp | Mode::ExactBrute)
    }

    pub fn name(self) -> &'static str {
        match self {
            Mode::ExactDp => "exact-dp",
            Mode::ExactBrute => "exact-brute",
            Mode::Fptas => "fptas",
            Mode::StrongFptas => "strong-fptas",
        }
    }
}

impl Problem {
    /// Approximate modes implemented for this problem.
    pub fn approx_modes(self) -> &'static [Mode] {
        match self {
            Problem::Contingency2 => &[Mode::Fptas],
            _ => &[Mode::Fptas, Mode::StrongFptas],
        }
    }
}

/// One line of an instance file.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "problem", rename_all = "lowercase")]
pub enum Instance {
    Mtuples(MTuplesInstance),
    Knapsack(KnapsackInstance),
    Contingency2(Contingency2Instance),
}

impl Instance {
    pub fn problem(&self) -> Problem {
        match self {
            Instance::Mtuples(_) => Problem::Mtuples,
            Instance::Knapsack(_) => Problem::Knapsack,
            Instance::Contingency2(_) => Problem::Contingency2,
        }
    }

    /// Every input number multiplied by `factor`; the count is unchanged.
    pub fn scaled(&self, factor: i64) -> crate::Result<Instance> {
        Ok(match self {
            Instance::Mtuples(m) => Instance::Mtuples(m.scaled(factor)?),
            Instance::Knapsack(k) => Instance::Knapsack(k.scaled(factor)?),
            Instance::Contingency2(c) => {
                let mul = |x: i64| {
                    x.checked_mul(factor)
                        .ok_or_else(|| crate::Error::invalid("scaled value overflows"))
                };
                let [a, b] = c.row_sums();
                let cols = c
                    .col_sums()
                    .iter()
                    .map(|&s| mul(s))
                    .collect::<crate::Result<_>>()?;
                Instance::Contingency2(Contingency2Instance::new([mul(a)?, mul(b)?], cols)?)
            }
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("instances serialize")
    }
}

/// Epsilon as typed by the user plus its exact value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Epsilon {
    pub text: String,
    pub value: BigRational,
}

impl Epsilon {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let value = parse_rational(text)?;
        if value <= BigRational::from_integer(0.into()) {
            return Err(CliError::Usage(format!(
                "epsilon must be positive, got {text}"
            )));
        }
        Ok(Epsilon {
            text: text.trim().to_string(),
            value,
        })
    }
}

/// Output line of `count`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultRecord {
    pub problem: Problem,
    pub mode: Mode,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<String>,
    pub count: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub oracle_calls: Option<u64>,
    #[serde(default)]
    pub set_sizes: Vec<usize>,
    pub elapsed_ms: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ratio_vs_exact: Option<f64>,
}

impl ResultRecord {
    pub fn count_value(&self) -> Option<BigCount> {
        self.count.parse().ok()
    }
}

/// Count with approximation details, before formatting.
#[derive(Debug, Clone)]
pub struct Counted {
    pub count: BigCount,
    pub oracle_calls: Option<u64>,
    pub set_sizes: Vec<usize>,
    pub elapsed: Duration,
}

impl From<RunReport> for Counted {
    fn from(r: RunReport) -> Self {
        Counted {
            count: r.count,
            oracle_calls: Some(r.oracle_calls),
            set_sizes: r.per_stage_set_sizes,
            elapsed: r.elapsed,
        }
    }
}

pub fn exact_count(inst: &Instance, mode: Mode, limits: &Limits) -> Result<BigCount, CliError> {
    Ok(match (inst, mode) {
        (Instance::Mtuples(m), Mode::ExactBrute) => limits.brute_mtuples(m)?,
        (Instance::Mtuples(m), _) => limits.dp_mtuples(m)?,
        (Instance::Knapsack(k), Mode::ExactBrute) => limits.brute_knapsack(k)?,
        (Instance::Knapsack(k), _) => limits.dp_knapsack(k)?,
        (Instance::Contingency2(c), Mode::ExactBrute) => limits.brute_contingency(c)?,
        (Instance::Contingency2(c), _) => limits.dp_contingency_sub(c)?,
    })
}

pub fn run_mode(
    inst: &Instance,
    mode: Mode,
    epsilon: Option<&Epsilon>,
    limits: &Limits,
) -> Result<Counted, CliError> {
    if mode.is_exact() {
        let start = std::time::Instant::now();
        let count = exact_count(inst, mode, limits)?;
        return Ok(Counted {
            count,
            oracle_calls: None,
            set_sizes: vec![],
            elapsed: start.elapsed(),
        });
    }
    let eps = &epsilon
        .ok_or_else(|| CliError::Usage(format!("--epsilon is required for mode {}", mode.name())))?
        .value;
    Ok(match (inst, mode) {
        (Instance::Mtuples(m), Mode::Fptas) => fptas_mtuples(m, eps)?.into(),
        (Instance::Mtuples(m), _) => strong_fptas_mtuples(m, eps)?.into(),
        (Instance::Knapsack(k), Mode::Fptas) => fptas_knapsack(k, eps)?.into(),
        (Instance::Knapsack(k), _) => strong_fptas_knapsack(k, eps)?.into(),
        (Instance::Contingency2(c), Mode::Fptas) => {
            let r = fptas_contingency2(c, eps)?;
            Counted {
                count: r.count,
                oracle_calls: Some(r.oracle_calls),
                set_sizes: r.set_sizes,
                elapsed: r.elapsed,
            }
        }
        (Instance::Contingency2(_), _) => {
            return Err(CliError::Usage(
                "contingency2 has a single approximate mode: fptas".into(),
            ))
        }
    })
}

pub fn count_record(
    inst: &Instance,
    mode: Mode,
    epsilon: Option<&Epsilon>,
    with_exact: bool,
    limits: &Limits,
) -> Result<ResultRecord, CliError> {
    let counted = run_mode(inst, mode, epsilon, limits)?;
    let ratio_vs_exact = if with_exact && !mode.is_exact() {
        let exact = exact_count(inst, Mode::ExactDp, limits)?;
        Some(ratio_to_f64(&counted.count, &exact))
    } else {
        None
    };
    Ok(ResultRecord {
        problem: inst.problem(),
        mode,
        epsilon: if mode.is_exact() {
            None
        } else {
            epsilon.map(|e| e.text.clone())
        },
        count: counted.count.to_string(),
        oracle_calls: counted.oracle_calls,
        set_sizes: counted.set_sizes,
        elapsed_ms: millis(counted.elapsed),
        ratio_vs_exact,
    })
}

pub fn millis(d: Duration) -> f64 {
    (d.as_secs_f64() * 1e6).round() / 1e3
}

/// Reads one instance per nonblank line from a file, or from stdin for `-`.
pub fn read_instances(path: &Path) -> Result<Vec<Instance>, CliError> {
    let reader: Box<dyn Read> = if path.as_os_str() == "-" {
        Box::new(io::stdin())
    } else {
        Box::new(File::open(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?)
    };
    let mut out = Vec::new();
    for (idx, line) in BufReader::new(reader).lines().enumerate() {
        let line = line.map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
        if line.trim().is_empty() {
            continue;
        }
        let inst = serde_json::from_str(&line)
            .map_err(|e| CliError::Input(format!("{}:{}: {e}", path.display(), idx + 1)))?;
        out.push(inst);
    }
    if out.is_empty() {
        return Err(CliError::Input(format!("{}: no instances", path.display())));
    }
    Ok(out)
}

/// Stdout, or a file when a path is given.
pub fn open_output(path: Option<&Path>) -> Result<Box<dyn Write>, CliError> {
    Ok(match path {
        Some(p) => Box::new(io::BufWriter::new(
            File::create(p).map_err(|e| CliError::Input(format!("{}: {e}", p.display())))?,
        )),
        None => Box::new(io::BufWriter::new(io::stdout())),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn instance_lines_round_trip() {
        let line = r#"{"problem":"mtuples","sets":[[1,3,7],[2,5],[3,9]],"bound":17}"#;
        let inst: Instance = serde_json::from_str(line).unwrap();
        assert_eq!(inst.problem(), Problem::Mtuples);
        assert_eq!(inst.to_json(), line);
        let c: Instance = serde_json::from_str(
            r#"{"problem":"contingency2","row_sums":["2",2],"col_sums":[2,1,1]}"#,
        )
        .unwrap();
        assert_eq!(
            c.to_json(),
            r#"{"problem":"contingency2","row_sums":[2,2],"col_sums":[2,1,1]}"#
        );
    }

    #[test]
    fn rejects_unknown_problem_and_invalid_payload() {
        assert!(serde_json::from_str::<Instance>(r#"{"problem":"tsp","n":3}"#).is_err());
        let bad = r#"{"problem":"knapsack","weights":[0],"capacity":3}"#;
        assert!(serde_json::from_str::<Instance>(bad).is_err());
    }

    #[test]
    fn records_omit_epsilon_for_exact() {
        let inst = Instance::Knapsack(KnapsackInstance::new(vec![5], 4).unwrap());
        let r = count_record(&inst, Mode::ExactBrute, None, false, &Limits::default()).unwrap();
        let json = serde_json::to_string(&r).unwrap();
        assert!(!json.contains("epsilon"));
        assert!(json.contains(r#""count":"1""#));
        assert!(json.contains(r#""mode":"exact-brute""#));
    }

    #[test]
    fn epsilon_must_be_positive() {
        assert!(Epsilon::parse("0").is_err());
        assert!(Epsilon::parse("-1").is_err());
        assert!(Epsilon::parse("x").is_err());
        assert_eq!(
            Epsilon::parse("1/4").unwrap().value,
            BigRational::new(1.into(), 4.into())
        );
    }
}
