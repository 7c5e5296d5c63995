//! Ground-state phases of the Ising model in a longitudinal field.

use serde::{Deserialize, Serialize};

use crate::couplings::CouplingMatrix;
use crate::error::{Error, Result};

const MAX_SITES: usize = 24;

/// A ground-level crossing between magnetization plateaus.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LevelCrossing {
    pub field: f64,
    pub magnetization_below: i64,
    pub magnetization_above: i64,
}

/// Classical ground states of `Σ J_ij s_i s_j + B_x Σ s_i` for
/// `0 ≤ B_x ≤ b_max`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Staircase {
    pub crossings: Vec<LevelCrossing>,
    /// Magnetization `Σ s_i` of each plateau in order of increasing field.
    pub plateaus: Vec<i64>,
}

struct Level {
    energy: f64,
    magnetization: i64,
}

/// Lowest Ising energy for each total magnetization.
fn levels(j: &CouplingMatrix<f64>) -> Vec<Level> {
    let n = j.n();
    let pairs: Vec<_> = j.pairs().collect();
    let mut best = vec![f64::INFINITY; n + 1];
    for b in 0..1usize << n {
        let e: f64 = pairs
            .iter()
            .map(|&(a, c, v)| if (b >> a & 1) == (b >> c & 1) { v } else { -v })
            .sum();
        let ups = b.count_ones() as usize;
        if e < best[ups] {
            best[ups] = e;
        }
    }
    best.into_iter()
        .enumerate()
        .map(|(ups, energy)| Level { energy, magnetization: 2 * ups as i64 - n as i64 })
        .collect()
}

fn ground(levels: &[Level], b: f64) -> usize {
    // ties go to the larger magnetization, i.e. the low-field side
    let mut k = 0;
    let mut e = f64::INFINITY;
    for (i, l) in levels.iter().enumerate().rev() {
        let v = l.energy + b * l.magnetization as f64;
        if v < e - 1e-12 * (1.0 + v.abs()) {
            e = v;
            k = i;
        }
    }
    k
}

/// Locates every ground-level crossing by bisecting on changes of the
/// ground magnetization over a `scan`-point grid, then solving the two
/// crossing levels exactly.
pub fn classical_staircase(j: &CouplingMatrix<f64>, b_max: f64, scan: usize) -> Result<Staircase> {
    let n = j.n();
    if n == 0 || n > MAX_SITES {
        return Err(Error::Validation(format!("staircase enumeration supports 1..={MAX_SITES} sites")));
    }
    if !(b_max > 0.0) || scan < 2 {
        return Err(Error::Validation("field range and scan size must be positive".into()));
    }
    let lv = levels(j);
    let mut prev = ground(&lv, 0.0);
    let mut crossings = Vec::new();
    let mut plateaus = vec![lv[prev].magnetization];
    let mut left = 0.0;
    for k in 1..scan {
        let b = b_max * k as f64 / (scan - 1) as f64;
        // a cell may hold several crossings; peel them off one at a time
        while ground(&lv, b) != prev {
            let (mut lo, mut hi) = (left, b);
            while hi - lo > 1e-13 * b_max.max(1.0) {
                let mid = 0.5 * (lo + hi);
                if ground(&lv, mid) == prev {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            let next = ground(&lv, hi);
            let (a, c) = (&lv[prev], &lv[next]);
            crossings.push(LevelCrossing {
                field: (c.energy - a.energy) / (a.magnetization - c.magnetization) as f64,
                magnetization_below: a.magnetization,
                magnetization_above: c.magnetization,
            });
            plateaus.push(c.magnetization);
            prev = next;
            left = hi;
        }
        left = b;
    }
    Ok(Staircase { crossings, plateaus })
}
