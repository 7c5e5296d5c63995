use serde::{Deserialize, Serialize};

use crate::dynamics::bitstring;
use crate::error::{Error, Result};
use crate::observables::ShotTable;

/// Most frequent outcome of a shot record.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Prevalence {
    pub outcome: usize,
    pub bitstring: String,
    pub probability: f64,
    pub runner_up: f64,
    /// `P_g − P_e` between the two most frequent outcomes.
    pub margin: f64,
    /// Repetitions needed to resolve the top outcome,
    /// `(P_g² + P_e²)/(P_g − P_e)²`; infinite on a tie.
    pub required_shots: f64,
    pub tie: bool,
}

/// Shots needed to tell apart two outcome probabilities.
pub fn required_shots(p_g: f64, p_e: f64) -> f64 {
    let d = p_g - p_e;
    if d == 0.0 {
        f64::INFINITY
    } else {
        (p_g * p_g + p_e * p_e) / (d * d)
    }
}

/// Ties go to the lowest outcome index and are flagged.
pub fn most_prevalent(table: &ShotTable) -> Result<Prevalence> {
    if table.shots == 0 {
        return Err(Error::Undefined("empty shot table"));
    }
    let total = table.shots as f64;
    let mut ranked: Vec<(usize, u64)> = table.counts.iter().map(|(&k, &c)| (k, c)).collect();
    ranked.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));
    let (outcome, top) = ranked[0];
    let second = ranked.get(1).map_or(0, |r| r.1);
    let p_g = top as f64 / total;
    let p_e = second as f64 / total;
    Ok(Prevalence {
        outcome,
        bitstring: bitstring(outcome, table.n_sites),
        probability: p_g,
        runner_up: p_e,
        margin: p_g - p_e,
        required_shots: required_shots(p_g, p_e),
        tie: top == second,
    })
}
