use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::dynamics::{bitstring, Axis, SpinState};
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Measurement record: how many times each basis outcome was seen.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShotTable {
    pub n_sites: usize,
    pub axis: Axis,
    pub shots: u64,
    pub counts: BTreeMap<usize, u64>,
}

impl ShotTable {
    pub fn new(n_sites: usize, axis: Axis) -> Self {
        Self { n_sites, axis, shots: 0, counts: BTreeMap::new() }
    }

    pub fn from_counts(n_sites: usize, axis: Axis, counts: BTreeMap<usize, u64>) -> Result<Self> {
        if let Some((&k, _)) = counts.iter().next_back() {
            if k >> n_sites != 0 {
                return Err(Error::Validation(format!("outcome {k} out of range for {n_sites} sites")));
            }
        }
        let shots = counts.values().sum();
        Ok(Self { n_sites, axis, shots, counts })
    }

    pub fn record(&mut self, outcome: usize, times: u64) {
        if times > 0 {
            *self.counts.entry(outcome).or_insert(0) += times;
            self.shots += times;
        }
    }

    pub fn count(&self, outcome: usize) -> u64 {
        self.counts.get(&outcome).copied().unwrap_or(0)
    }

    /// `(bitstring, count)` rows in ascending outcome order.
    pub fn rows(&self) -> impl Iterator<Item = (String, u64)> + '_ {
        self.counts.iter().map(move |(&k, &c)| (bitstring(k, self.n_sites), c))
    }
}

/// Outcome probabilities over all `2^N` basis states of one axis.
#[derive(Debug, Clone, PartialEq)]
pub struct Distribution<T> {
    pub n_sites: usize,
    pub axis: Axis,
    pub probs: Vec<T>,
}

impl<T: Real> Distribution<T> {
    pub fn from_state(state: &SpinState<T>, axis: Axis) -> Self {
        Self { n_sites: state.n_sites(), axis, probs: state.probabilities_in(axis) }
    }

    /// Empirical frequencies of a shot record.
    pub fn from_shots(table: &ShotTable) -> Result<Self> {
        if table.shots == 0 {
            return Err(Error::Undefined("empty shot table"));
        }
        let mut probs = vec![T::zero(); 1 << table.n_sites];
        let total = T::lit(table.shots as f64);
        for (&k, &c) in &table.counts {
            probs[k] = T::lit(c as f64) / total;
        }
        Ok(Self { n_sites: table.n_sites, axis: table.axis, probs })
    }

    pub fn from_probabilities(n_sites: usize, axis: Axis, probs: Vec<T>) -> Result<Self> {
        if probs.len() != 1 << n_sites {
            return Err(Error::Dimension { expected: 1 << n_sites, got: probs.len() });
        }
        Ok(Self { n_sites, axis, probs })
    }

    /// `P(s)`: probability of finding exactly `s` spins up, `s = 0..=N`.
    pub fn up_count_probabilities(&self) -> Vec<T> {
        let mut p = vec![T::zero(); self.n_sites + 1];
        for (b, &pb) in self.probs.iter().enumerate() {
            p[b.count_ones() as usize] += pb;
        }
        p
    }

    pub(crate) fn require_axis(&self, axis: Axis) -> Result<()> {
        if self.axis != axis {
            return Err(Error::Validation(format!("expected {axis}-basis data, got {}-basis", self.axis)));
        }
        Ok(())
    }
}
