//! Seeded random measures on a fixed denominator grid.
//!
//! A draw picks integer weights `w_k` uniformly from `0..=D` (or `1..=D`
//! when zeros are excluded) with a ChaCha8 stream seeded from a `u64`, then
//! normalizes to `m_k = w_k / Σ w`. Draws with all-zero weights are redrawn.
//! Rejection-sampling variants redraw until the measure is non-degenerate
//! for the given group.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::cube::MeasureVector;
use crate::derivation::{degeneracy_check, DegeneracyVerdict};
use crate::groups::CayleyTable;
use crate::rational::Rational;

pub const DEFAULT_DENOMINATOR: u32 = 1000;
pub const DEFAULT_MAX_ATTEMPTS: usize = 10_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("no acceptable measure of order {n} after {attempts} draws")]
pub struct SamplerExhausted {
    pub n: usize,
    pub attempts: usize,
}

#[derive(Debug, Clone)]
pub struct MeasureSampler {
    rng: ChaCha8Rng,
    denominator: u32,
    max_attempts: usize,
}

impl MeasureSampler {
    pub fn new(seed: u64) -> Self {
        Self::with_denominator(seed, DEFAULT_DENOMINATOR)
    }

    pub fn with_denominator(seed: u64, denominator: u32) -> Self {
        Self {
            rng: ChaCha8Rng::seed_from_u64(seed),
            denominator: denominator.max(1),
            max_attempts: DEFAULT_MAX_ATTEMPTS,
        }
    }

    pub fn weights(&mut self, n: usize, allow_zero: bool) -> Vec<u32> {
        let low = u32::from(!allow_zero);
        loop {
            let w: Vec<u32> = (0..n).map(|_| self.rng.gen_range(low..=self.denominator)).collect();
            if w.iter().any(|&x| x > 0) {
                return w;
            }
        }
    }

    /// Any measure on the grid, degenerate or not.
    pub fn measure(&mut self, n: usize) -> MeasureVector {
        normalize(&self.weights(n, true))
    }

    pub fn non_degenerate(&mut self, table: &CayleyTable) -> Result<MeasureVector, SamplerExhausted> {
        self.rejection(table, |s, n| Some(s.measure(n)))
    }

    /// Non-degenerate measure whose values are nonzero and pairwise distinct.
    pub fn distinct_non_degenerate(&mut self, table: &CayleyTable) -> Result<MeasureVector, SamplerExhausted> {
        self.rejection(table, |s, n| {
            let w = s.weights(n, false);
            let mut sorted = w.clone();
            sorted.sort_unstable();
            sorted.dedup();
            (sorted.len() == n).then(|| normalize(&w))
        })
    }

    fn rejection(
        &mut self,
        table: &CayleyTable,
        mut draw: impl FnMut(&mut Self, usize) -> Option<MeasureVector>,
    ) -> Result<MeasureVector, SamplerExhausted> {
        let n = table.n();
        for _ in 0..self.max_attempts {
            let Some(m) = draw(self, n) else { continue };
            if degeneracy_check(table, &m).expect("matching order") == DegeneracyVerdict::NonDegenerate {
                return Ok(m);
            }
        }
        Err(SamplerExhausted {
            n,
            attempts: self.max_attempts,
        })
    }

    /// Random 0-based index below `n`.
    pub fn index(&mut self, n: usize) -> usize {
        self.rng.gen_range(0..n)
    }
}

fn normalize(weights: &[u32]) -> MeasureVector {
    let total: u64 = weights.iter().map(|&w| u64::from(w)).sum();
    let values = weights.iter().map(|&w| Rational::new(w.into(), total.into())).collect();
    MeasureVector::new(values).expect("normalized weights sum to one")
}
