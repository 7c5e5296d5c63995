use std::io::{Read, Write};

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{cplx, Real, C};

/// Spin quantisation axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::X, Axis::Y, Axis::Z];

    /// Single-site eigenvector as amplitudes on (|↓⟩, |↑⟩) of σ_z.
    pub fn eigenvector<T: Real>(self, up: bool) -> [C<T>; 2] {
        let h = T::lit(std::f64::consts::FRAC_1_SQRT_2);
        let z = T::zero();
        match (self, up) {
            (Axis::Z, false) => [cplx(T::one(), z), cplx(z, z)],
            (Axis::Z, true) => [cplx(z, z), cplx(T::one(), z)],
            (Axis::X, false) => [cplx(h, z), cplx(-h, z)],
            (Axis::X, true) => [cplx(h, z), cplx(h, z)],
            (Axis::Y, false) => [cplx(h, z), cplx(z, h)],
            (Axis::Y, true) => [cplx(z, h), cplx(h, z)],
        }
    }
}

impl std::fmt::Display for Axis {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Axis::X => "x",
            Axis::Y => "y",
            Axis::Z => "z",
        })
    }
}

/// Bitstring label with site 1 first; `1` marks spin up.
pub fn bitstring(index: usize, n: usize) -> String {
    (0..n).map(|k| if index >> k & 1 == 1 { '1' } else { '0' }).collect()
}

/// Pure state of `n` spins. Bit `k` of a basis index is site `k + 1`,
/// with bit value 1 meaning |↑⟩.
#[derive(Debug, Clone, PartialEq)]
pub struct SpinState<T: Real> {
    n: usize,
    amps: Vec<C<T>>,
}

impl<T: Real> SpinState<T> {
    pub fn from_amplitudes(n: usize, amps: Vec<C<T>>) -> Result<Self> {
        if amps.len() != 1usize << n {
            return Err(Error::Dimension { expected: 1 << n, got: amps.len() });
        }
        Ok(Self { n, amps })
    }

    pub fn basis(n: usize, index: usize) -> Self {
        let mut amps = vec![C::zero(); 1 << n];
        amps[index] = cplx(T::one(), T::zero());
        Self { n, amps }
    }

    /// Product state from per-site amplitudes on (|↓⟩, |↑⟩).
    pub fn product(sites: &[[C<T>; 2]]) -> Self {
        let n = sites.len();
        let mut amps = vec![cplx(T::one(), T::zero())];
        for (k, site) in sites.iter().enumerate() {
            let mut next = vec![C::zero(); 2 << k];
            for (b, &a) in amps.iter().enumerate() {
                next[b] = a * site[0];
                next[b | 1 << k] = a * site[1];
            }
            amps = next;
        }
        Self { n, amps }
    }

    /// Every spin along `+axis` (`up`) or `−axis`.
    pub fn polarized(n: usize, axis: Axis, up: bool) -> Self {
        Self::product(&vec![axis.eigenvector(up); n])
    }

    /// Alternating state along `axis`; site 1 is down unless `first_up`.
    pub fn neel(n: usize, axis: Axis, first_up: bool) -> Self {
        let sites: Vec<_> = (0..n).map(|k| axis.eigenvector((k % 2 == 0) == first_up)).collect();
        Self::product(&sites)
    }

    /// Product state along `axis` with spin up wherever `pattern` has a 1.
    pub fn configuration(n: usize, axis: Axis, pattern: usize) -> Self {
        let sites: Vec<_> = (0..n).map(|k| axis.eigenvector(pattern >> k & 1 == 1)).collect();
        Self::product(&sites)
    }

    pub fn n_sites(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[C<T>] {
        &self.amps
    }

    pub fn amplitudes_mut(&mut self) -> &mut [C<T>] {
        &mut self.amps
    }

    pub fn into_amplitudes(self) -> Vec<C<T>> {
        self.amps
    }

    pub fn norm(&self) -> T {
        self.amps.iter().fold(T::zero(), |s, a| s + a.norm_sqr()).sqrt()
    }

    pub fn normalize(&mut self) {
        let n = self.norm();
        if n > T::zero() {
            let inv = T::one() / n;
            self.amps.iter_mut().for_each(|a| *a = a.scale(inv));
        }
    }

    /// ⟨self|other⟩.
    pub fn inner(&self, other: &Self) -> C<T> {
        self.amps
            .iter()
            .zip(&other.amps)
            .fold(C::zero(), |s, (a, b)| s + a.conj() * b)
    }

    pub fn fidelity(&self, other: &Self) -> T {
        self.inner(other).norm_sqr()
    }

    /// Probability of each basis state of the σ_z basis.
    pub fn probabilities(&self) -> Vec<T> {
        self.amps.iter().map(|a| a.norm_sqr()).collect()
    }

    /// Amplitudes in the product eigenbasis of `axis`: entry `b` is
    /// `⟨b_axis|ψ⟩` where bit 1 means spin up along the axis.
    pub fn in_basis(&self, axis: Axis) -> Vec<C<T>> {
        let mut v = self.amps.clone();
        if axis == Axis::Z {
            return v;
        }
        let dn = axis.eigenvector::<T>(false);
        let up = axis.eigenvector::<T>(true);
        for k in 0..self.n {
            let bit = 1usize << k;
            for b in 0..v.len() {
                if b & bit == 0 {
                    let a0 = v[b];
                    let a1 = v[b | bit];
                    v[b] = dn[0].conj() * a0 + dn[1].conj() * a1;
                    v[b | bit] = up[0].conj() * a0 + up[1].conj() * a1;
                }
            }
        }
        v
    }

    /// Measurement probabilities in the eigenbasis of `axis`.
    pub fn probabilities_in(&self, axis: Axis) -> Vec<T> {
        self.in_basis(axis).iter().map(|a| a.norm_sqr()).collect()
    }

    /// ⟨σ_axis⟩ on every site.
    pub fn site_expectations(&self, axis: Axis) -> Vec<T> {
        let p = self.probabilities_in(axis);
        (0..self.n)
            .map(|k| {
                p.iter().enumerate().fold(T::zero(), |s, (b, &pb)| {
                    if b >> k & 1 == 1 {
                        s + pb
                    } else {
                        s - pb
                    }
                })
            })
            .collect()
    }

    /// Applies a single-site operator (2×2, acting on (|↓⟩, |↑⟩)) to `site`
    /// (0-based).
    pub fn apply_site(&mut self, site: usize, op: [[C<T>; 2]; 2]) {
        let bit = 1usize << site;
        for b in 0..self.amps.len() {
            if b & bit == 0 {
                let a0 = self.amps[b];
                let a1 = self.amps[b | bit];
                self.amps[b] = op[0][0] * a0 + op[0][1] * a1;
                self.amps[b | bit] = op[1][0] * a0 + op[1][1] * a1;
            }
        }
    }

    /// Writes the little-endian binary dump: an 8-byte site count followed
    /// by interleaved (re, im) doubles.
    pub fn write_dump(&self, mut w: impl Write) -> std::io::Result<()> {
        w.write_all(&(self.n as u64).to_le_bytes())?;
        for a in &self.amps {
            w.write_all(&a.re.as_f64().to_le_bytes())?;
            w.write_all(&a.im.as_f64().to_le_bytes())?;
        }
        Ok(())
    }

    pub fn read_dump(mut r: impl Read) -> std::io::Result<Self> {
        let mut word = [0u8; 8];
        r.read_exact(&mut word)?;
        let n = u64::from_le_bytes(word) as usize;
        if n > 40 {
            return Err(std::io::Error::new(std::io::ErrorKind::InvalidData, "site count too large"));
        }
        let mut amps = Vec::with_capacity(1 << n);
        for _ in 0..1usize << n {
            r.read_exact(&mut word)?;
            let re = f64::from_le_bytes(word);
            r.read_exact(&mut word)?;
            let im = f64::from_le_bytes(word);
            amps.push(cplx(T::lit(re), T::lit(im)));
        }
        Ok(Self { n, amps })
    }
}

/// Pauli matrix for `axis` acting on (|↓⟩, |↑⟩).
pub fn pauli<T: Real>(axis: Axis) -> [[C<T>; 2]; 2] {
    let o = T::one();
    let z = T::zero();
    match axis {
        // rows/columns ordered (↓, ↑)
        Axis::X => [[cplx(z, z), cplx(o, z)], [cplx(o, z), cplx(z, z)]],
        Axis::Y => [[cplx(z, z), cplx(z, o)], [cplx(z, -o), cplx(z, z)]],
        Axis::Z => [[cplx(-o, z), cplx(z, z)], [cplx(z, z), cplx(o, z)]],
    }
}
