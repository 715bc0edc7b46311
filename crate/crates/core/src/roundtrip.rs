//! Seeded derive-then-recover harness over every abelian group of an order.

use serde::Serialize;
use thiserror::Error;

use crate::cube::MeasureVector;
use crate::derivation::{degeneracy_check, derive_cube};
use crate::groups::{cayley_table, check_order, enumerate_abelian_groups, CayleyTable, GroupError, InvariantFactors};
use crate::recovery::{recover, RecoveryResult};
use crate::sampler::{MeasureSampler, SamplerExhausted, DEFAULT_DENOMINATOR};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RoundtripConfig {
    pub order: usize,
    pub trials: usize,
    pub seed: u64,
    pub denominator: u32,
    /// Also run uniform measures on cyclic subgroups and on the whole group;
    /// these must be rejected and are counted as skipped.
    pub include_degenerate: bool,
    pub order_cap: usize,
}

impl RoundtripConfig {
    pub fn new(order: usize, trials: usize, seed: u64) -> Self {
        Self {
            order,
            trials,
            seed,
            denominator: DEFAULT_DENOMINATOR,
            include_degenerate: false,
            order_cap: crate::groups::DEFAULT_ORDER_CAP,
        }
    }
}

#[derive(Debug, Error)]
pub enum RoundtripError {
    #[error(transparent)]
    Order(#[from] GroupError),
    #[error(transparent)]
    Sampler(#[from] SamplerExhausted),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GroupOutcome {
    pub factors: InvariantFactors,
    pub passed: usize,
    pub failed: usize,
    pub skipped_degenerate: usize,
    pub failures: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RoundtripSummary {
    pub order: usize,
    pub trials: usize,
    pub seed: u64,
    pub groups: Vec<GroupOutcome>,
    pub passed: usize,
    pub failed: usize,
    pub skipped_degenerate: usize,
}

impl RoundtripSummary {
    pub fn all_passed(&self) -> bool {
        self.failed == 0
    }
}

/// Distinct uniform-on-subgroup measures: every nontrivial cyclic subgroup
/// plus the whole group.
fn degenerate_measures(table: &CayleyTable) -> Vec<MeasureVector> {
    let n = table.n();
    let mut supports: Vec<Vec<usize>> = (1..n).map(|g| table.cyclic_subgroup(g)).collect();
    supports.push((0..n).collect());
    supports.sort();
    supports.dedup();
    supports
        .iter()
        .filter(|s| s.len() > 1)
        .map(|s| MeasureVector::uniform_on(n, s).expect("nonempty support"))
        .collect()
}

pub fn run_roundtrip(config: &RoundtripConfig) -> Result<RoundtripSummary, RoundtripError> {
    check_order(config.order, config.order_cap)?;
    let mut sampler = MeasureSampler::with_denominator(config.seed, config.denominator);
    let mut groups = Vec::new();
    for factors in enumerate_abelian_groups(config.order) {
        let table = cayley_table(&factors);
        let mut outcome = GroupOutcome {
            factors: factors.clone(),
            passed: 0,
            failed: 0,
            skipped_degenerate: 0,
            failures: Vec::new(),
        };
        for trial in 0..config.trials {
            let m = sampler.non_degenerate(&table)?;
            let cube = derive_cube(&table, &m).expect("matching order");
            let expected = RecoveryResult::Recovered {
                table: table.clone(),
                measure: m.clone(),
                factors: factors.clone(),
            };
            let got = recover(&cube);
            if got == expected {
                outcome.passed += 1;
            } else {
                outcome.failed += 1;
                outcome
                    .failures
                    .push(format!("trial {} with m = {m}: {got:?}", trial + 1));
            }
        }
        if config.include_degenerate {
            for m in degenerate_measures(&table) {
                let degenerate = degeneracy_check(&table, &m).expect("matching order").is_degenerate();
                let cube = derive_cube(&table, &m).expect("matching order");
                if degenerate && !recover(&cube).is_recovered() {
                    outcome.skipped_degenerate += 1;
                } else {
                    outcome.failed += 1;
                    outcome
                        .failures
                        .push(format!("uniform measure {m} was not rejected as degenerate"));
                }
            }
        }
        groups.push(outcome);
    }
    Ok(RoundtripSummary {
        order: config.order,
        trials: config.trials,
        seed: config.seed,
        passed: groups.iter().map(|g| g.passed).sum(),
        failed: groups.iter().map(|g| g.failed).sum(),
        skipped_degenerate: groups.iter().map(|g| g.skipped_degenerate).sum(),
        groups,
    })
}
