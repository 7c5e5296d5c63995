//! Order parameters from Ising-axis measurement statistics.

use super::shots::Distribution;
use crate::dynamics::Axis;
use crate::error::{Error, Result};
use crate::scalar::Real;

fn binomial<T: Real>(n: usize, k: usize) -> T {
    (0..k).fold(T::one(), |acc, i| acc * T::from_usize_lossy(n - i) / T::from_usize_lossy(i + 1))
}

/// Mean `|N − 2s|/N` of the uncorrelated paramagnet.
pub fn paramagnet_magnetization<T: Real>(n: usize) -> T {
    let nn = T::from_usize_lossy(n);
    let total = (0..=n).fold(T::zero(), |s, k| {
        let m = (nn - T::lit(2.0) * T::from_usize_lossy(k)).abs();
        s + binomial::<T>(n, k) * m
    });
    total / (nn * T::lit(2.0).powi(n as i32))
}

/// Binder cumulant of the uncorrelated paramagnet.
pub fn paramagnet_binder<T: Real>(n: usize) -> T {
    T::lit(3.0) - T::lit(2.0) / T::from_usize_lossy(n)
}

/// Average absolute magnetization `m_x` and its finite-size rescaling
/// (0 for the paramagnet, 1 for the ferromagnet).
pub fn magnetization_mx<T: Real>(data: &Distribution<T>) -> Result<(T, T)> {
    data.require_axis(Axis::X)?;
    let n = data.n_sites;
    if n < 2 {
        return Err(Error::Undefined("rescaled magnetization needs at least two sites"));
    }
    let nn = T::from_usize_lossy(n);
    let m = data
        .up_count_probabilities()
        .iter()
        .enumerate()
        .fold(T::zero(), |acc, (s, &p)| acc + (nn - T::lit(2.0) * T::from_usize_lossy(s)).abs() * p)
        / nn;
    let m0 = paramagnet_magnetization::<T>(n);
    Ok((m, (m0 - m) / (m0 - T::one())))
}

/// Binder cumulant `⟨M⁴⟩/⟨M²⟩²` of the Ising-axis magnetization and its
/// rescaling.
pub fn binder_cumulant<T: Real>(data: &Distribution<T>) -> Result<(T, T)> {
    data.require_axis(Axis::X)?;
    let n = data.n_sites;
    if n < 2 {
        return Err(Error::Undefined("rescaled Binder cumulant needs at least two sites"));
    }
    let nn = T::from_usize_lossy(n);
    let (m2, m4) = data.up_count_probabilities().iter().enumerate().fold((T::zero(), T::zero()), |(a, b), (s, &p)| {
        let m = nn - T::lit(2.0) * T::from_usize_lossy(s);
        let sq = m * m;
        (a + sq * p, b + sq * sq * p)
    });
    if m2 == T::zero() {
        return Err(Error::Undefined("zero second magnetization moment"));
    }
    let g = m4 / (m2 * m2);
    let g0 = paramagnet_binder::<T>(n);
    Ok((g, (g0 - g) / (g0 - T::one())))
}

/// Site means `⟨σ_i⟩` and pair moments `⟨σ_i σ_j⟩` in the data's basis.
pub fn moments<T: Real>(data: &Distribution<T>) -> (Vec<T>, Vec<Vec<T>>) {
    let n = data.n_sites;
    let mut mean = vec![T::zero(); n];
    let mut pair = vec![vec![T::zero(); n]; n];
    for (b, &p) in data.probs.iter().enumerate() {
        if p == T::zero() {
            continue;
        }
        let s: Vec<T> = (0..n).map(|k| if b >> k & 1 == 1 { p } else { -p }).collect();
        for i in 0..n {
            mean[i] += s[i];
            let si = if b >> i & 1 == 1 { T::one() } else { -T::one() };
            for j in i..n {
                pair[i][j] += si * s[j];
            }
        }
    }
    for i in 0..n {
        for j in 0..i {
            pair[i][j] = pair[j][i];
        }
    }
    (mean, pair)
}

/// Distance-resolved connected correlation `C(r)`, `r = 1..N−1`, and the
/// structure function `S(k)` on `k = πj/(N−1)`, `j = 0..N−1`.
pub fn correlations_and_structure<T: Real>(data: &Distribution<T>) -> Result<(Vec<T>, Vec<T>)> {
    data.require_axis(Axis::X)?;
    let n = data.n_sites;
    if n < 2 {
        return Err(Error::Undefined("correlations need at least two sites"));
    }
    let (mean, pair) = moments(data);
    let c: Vec<T> = (1..n)
        .map(|r| {
            let sum = (0..n - r).fold(T::zero(), |s, m| s + pair[m][m + r] - mean[m] * mean[m + r]);
            sum / T::from_usize_lossy(n - r)
        })
        .collect();
    let nm1 = T::from_usize_lossy(n - 1);
    let s = (0..n)
        .map(|j| {
            let k = T::pi() * T::from_usize_lossy(j) / nm1;
            let (re, im) = c.iter().enumerate().fold((T::zero(), T::zero()), |(re, im), (idx, &cr)| {
                let ph = k * T::from_usize_lossy(idx + 1);
                (re + cr * ph.cos(), im + cr * ph.sin())
            });
            (re * re + im * im).sqrt() / nm1
        })
        .collect();
    Ok((c, s))
}

/// `C₂ = N⁻² Σ_ij ⟨σ_i σ_j⟩` in the data's basis.
pub fn two_body_c2<T: Real>(data: &Distribution<T>) -> T {
    let n = data.n_sites;
    let nn = T::from_usize_lossy(n);
    data.probs.iter().enumerate().fold(T::zero(), |acc, (b, &p)| {
        let m = T::lit(2.0) * T::lit(b.count_ones() as f64) - nn;
        acc + m * m * p
    }) / (nn * nn)
}

/// Expected domain-size counts and mean largest domain.
#[derive(Debug, Clone, PartialEq)]
pub struct DomainStats<T> {
    /// Entry `L − 1` is the expected number of domains of size `L`.
    pub size_counts: Vec<T>,
    pub mean_largest: T,
}

/// Statistics of runs of equal neighbouring spins along the chain.
pub fn domain_statistics<T: Real>(data: &Distribution<T>) -> DomainStats<T> {
    let n = data.n_sites;
    let mut size_counts = vec![T::zero(); n];
    let mut mean_largest = T::zero();
    for (b, &p) in data.probs.iter().enumerate() {
        if p == T::zero() || n == 0 {
            continue;
        }
        let mut run = 1;
        let mut largest = 0;
        for k in 1..=n {
            if k < n && (b >> k & 1) == (b >> (k - 1) & 1) {
                run += 1;
            } else {
                size_counts[run - 1] += p;
                largest = largest.max(run);
                run = 1;
            }
        }
        mean_largest += p * T::from_usize_lossy(largest);
    }
    DomainStats { size_counts, mean_largest }
}
