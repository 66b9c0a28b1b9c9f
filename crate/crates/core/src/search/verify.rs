//! Per-class evaluation and the mergeable search accumulator.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::bound::{extreme_point_bound, m_k, BiasedParams};
use crate::cube::{BooleanFunction, NoiseParams};
use crate::error::Result;
use crate::info::oracle::{joint_table_coordinate_mi, joint_table_mi};
use crate::info::{capacity, coordinate_sum, mutual_information};
use crate::io::{fmt_f64, table_string};
use crate::search::group::{key_table, points};

/// Absolute slack, in bits, before a value above capacity counts as a violation.
pub const VIOLATION_TOL: f64 = 1e-10;

/// Which inequality an exhaustive run checks.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SearchTask {
    /// `I(b(X); Y) ≤ 1 − H(α)`, the dictatorship conjecture.
    TotalMi,
    /// `Σ_i I(b(X); Y_i) ≤ 1 − H(α)` together with the per-bias chain
    /// `Σ_i I ≤ extreme_point_bound ≤ M_K ≤ 1 − H(α)`.
    CoordinateSum,
}

impl SearchTask {
    pub fn name(self) -> &'static str {
        match self {
            SearchTask::TotalMi => "total_mi",
            SearchTask::CoordinateSum => "coordinate_sum",
        }
    }
}

/// A function exceeding a bound, with an independent recomputation.
#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
pub struct Violation {
    pub key: u64,
    pub table: String,
    /// Which inequality failed: `total_mi`, `coordinate_sum`, or a chain link.
    pub kind: String,
    pub value: f64,
    pub bound: f64,
    /// The value recomputed from explicit joint tables, when applicable.
    pub oracle_value: Option<f64>,
}

/// Running maxima for one noise level. Merging is associative and
/// commutative, so the result does not depend on how keys are split.
#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
pub struct AlphaAccumulator {
    pub max_total_mi: f64,
    pub argmax_total_mi: u64,
    pub max_sum_coord_mi: f64,
    pub argmax_sum_coord_mi: u64,
    /// Classes whose checked quantity is within [`VIOLATION_TOL`] of capacity.
    pub equality: Vec<u64>,
    pub violations: Vec<Violation>,
}

impl AlphaAccumulator {
    fn empty() -> Self {
        Self {
            max_total_mi: f64::MIN,
            argmax_total_mi: u64::MAX,
            max_sum_coord_mi: f64::MIN,
            argmax_sum_coord_mi: u64::MAX,
            equality: Vec::new(),
            violations: Vec::new(),
        }
    }

    fn merge(&mut self, other: AlphaAccumulator) {
        fn better(v: f64, k: u64, best: f64, best_k: u64) -> bool {
            v > best || (v == best && k < best_k)
        }
        if better(other.max_total_mi, other.argmax_total_mi, self.max_total_mi, self.argmax_total_mi) {
            self.max_total_mi = other.max_total_mi;
            self.argmax_total_mi = other.argmax_total_mi;
        }
        if better(
            other.max_sum_coord_mi,
            other.argmax_sum_coord_mi,
            self.max_sum_coord_mi,
            self.argmax_sum_coord_mi,
        ) {
            self.max_sum_coord_mi = other.max_sum_coord_mi;
            self.argmax_sum_coord_mi = other.argmax_sum_coord_mi;
        }
        self.equality.extend(other.equality);
        self.equality.sort_unstable();
        self.violations.extend(other.violations);
        self.violations
            .sort_by(|a, b| a.key.cmp(&b.key).then_with(|| a.kind.cmp(&b.kind)));
    }
}

/// Partial result over a set of classes.
#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
pub struct Accumulator {
    pub classes: u64,
    pub orbit_total: u64,
    pub per_alpha: Vec<AlphaAccumulator>,
}

impl Accumulator {
    pub fn empty(alphas: usize) -> Self {
        Self {
            classes: 0,
            orbit_total: 0,
            per_alpha: (0..alphas).map(|_| AlphaAccumulator::empty()).collect(),
        }
    }

    pub fn merge(&mut self, other: Accumulator) {
        self.classes += other.classes;
        self.orbit_total += other.orbit_total;
        for (a, b) in self.per_alpha.iter_mut().zip(other.per_alpha) {
            a.merge(b);
        }
    }
}

/// Evaluates one class representative at every noise level.
pub(crate) struct Evaluator {
    pub n: usize,
    pub task: SearchTask,
    pub params: Vec<NoiseParams>,
    pub capacities: Vec<f64>,
}

impl Evaluator {
    pub fn new(n: usize, task: SearchTask, params: Vec<NoiseParams>) -> Self {
        let capacities = params.iter().map(capacity).collect();
        Self { n, task, params, capacities }
    }

    pub fn add(&self, acc: &mut Accumulator, key: u64, orbit_size: u64) -> Result<()> {
        let b = BooleanFunction::from_bits(self.n, key_table(key, self.n))?;
        acc.classes += 1;
        acc.orbit_total += orbit_size;
        let mu = b.bias();
        for ((slot, p), &cap) in acc.per_alpha.iter_mut().zip(&self.params).zip(&self.capacities) {
            let total = mutual_information(&b, p);
            let sum = coordinate_sum(&b, p);
            if total > slot.max_total_mi {
                slot.max_total_mi = total;
                slot.argmax_total_mi = key;
            }
            if sum > slot.max_sum_coord_mi {
                slot.max_sum_coord_mi = sum;
                slot.argmax_sum_coord_mi = key;
            }
            let checked = match self.task {
                SearchTask::TotalMi => total,
                SearchTask::CoordinateSum => sum,
            };
            if checked >= cap - VIOLATION_TOL {
                slot.equality.push(key);
            }
            let mut violate = |kind: &str, value: f64, bound: f64, oracle: Option<f64>| {
                slot.violations.push(Violation {
                    key,
                    table: table_string(&b),
                    kind: kind.to_string(),
                    value,
                    bound,
                    oracle_value: oracle,
                });
            };
            match self.task {
                SearchTask::TotalMi => {
                    if total > cap + VIOLATION_TOL {
                        violate("total_mi", total, cap, joint_table_mi(&b, p).ok());
                    }
                }
                SearchTask::CoordinateSum => {
                    if sum > cap + VIOLATION_TOL {
                        let oracle = (1..=self.n)
                            .map(|i| joint_table_coordinate_mi(&b, i, p))
                            .sum::<Result<f64>>()
                            .ok();
                        violate("coordinate_sum", sum, cap, oracle);
                    }
                    let extreme = extreme_point_bound(self.n, mu, p)?;
                    if sum > extreme + VIOLATION_TOL {
                        violate("sum_vs_extreme_point", sum, extreme, None);
                    }
                    if mu.abs() < 1.0 {
                        let mk = m_k(BiasedParams::new(mu, p)?.k, p)?;
                        if extreme > mk + VIOLATION_TOL {
                            violate("extreme_point_vs_m_k", extreme, mk, None);
                        }
                        if mk > cap + VIOLATION_TOL {
                            violate("m_k_vs_capacity", mk, cap, None);
                        }
                    } else if extreme > cap + VIOLATION_TOL {
                        violate("extreme_point_vs_capacity", extreme, cap, None);
                    }
                }
            }
        }
        Ok(())
    }
}

/// Results at one noise level.
#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
pub struct AlphaSummary {
    pub alpha: f64,
    pub capacity: f64,
    pub max_total_mi: f64,
    pub argmax_total_mi: String,
    pub max_sum_coord_mi: f64,
    pub argmax_sum_coord_mi: String,
    /// `capacity` minus the maximum of the checked quantity.
    pub margin: f64,
    pub equality_classes: Vec<String>,
    /// The checked maximum is attained (within tolerance) by the dictator class alone.
    pub argmax_is_dictator_only: bool,
    pub violation_count: usize,
    pub violations: Vec<Violation>,
}

/// Outcome of an exhaustive run. Contains no timing, so equal inputs give
/// byte-identical serializations.
#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
pub struct SearchReport {
    pub task: SearchTask,
    pub n: usize,
    pub alpha_grid: Vec<f64>,
    pub classes: u64,
    /// Sum of orbit sizes; equals `2^(2^n)` on a complete run.
    pub functions_covered: u64,
    pub per_alpha: Vec<AlphaSummary>,
    pub violation_count: usize,
}

impl SearchReport {
    pub(crate) fn from_accumulator(
        task: SearchTask,
        n: usize,
        alpha_grid: &[f64],
        acc: Accumulator,
        dictator_key: u64,
    ) -> Self {
        let name = |key: u64| {
            if key == u64::MAX {
                String::new()
            } else {
                let b = BooleanFunction::from_bits(n, key_table(key, n)).expect("n <= 5");
                table_string(&b)
            }
        };
        let per_alpha: Vec<AlphaSummary> = acc
            .per_alpha
            .into_iter()
            .zip(alpha_grid)
            .map(|(a, &alpha)| {
                let cap = capacity(&NoiseParams::new(alpha).expect("validated grid"));
                let best = match task {
                    SearchTask::TotalMi => a.max_total_mi,
                    SearchTask::CoordinateSum => a.max_sum_coord_mi,
                };
                AlphaSummary {
                    alpha,
                    capacity: cap,
                    max_total_mi: a.max_total_mi,
                    argmax_total_mi: name(a.argmax_total_mi),
                    max_sum_coord_mi: a.max_sum_coord_mi,
                    argmax_sum_coord_mi: name(a.argmax_sum_coord_mi),
                    margin: cap - best,
                    argmax_is_dictator_only: a.equality == [dictator_key],
                    equality_classes: a.equality.iter().map(|&k| name(k)).collect(),
                    violation_count: a.violations.len(),
                    violations: a.violations,
                }
            })
            .collect();
        Self {
            task,
            n,
            alpha_grid: alpha_grid.to_vec(),
            classes: acc.classes,
            functions_covered: acc.orbit_total,
            violation_count: per_alpha.iter().map(|a| a.violation_count).sum(),
            per_alpha,
        }
    }

    /// `functions_covered == 2^(2^n)`.
    pub fn is_complete(&self) -> bool {
        u128::from(self.functions_covered) == 1u128 << points(self.n)
    }

    /// CSV summary `alpha,max_mi,max_sum_coord_mi,capacity,margin`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("alpha,max_mi,max_sum_coord_mi,capacity,margin\n");
        for a in &self.per_alpha {
            let _ = writeln!(
                out,
                "{},{},{},{},{}",
                fmt_f64(a.alpha),
                fmt_f64(a.max_total_mi),
                fmt_f64(a.max_sum_coord_mi),
                fmt_f64(a.capacity),
                fmt_f64(a.margin)
            );
        }
        out
    }
}
