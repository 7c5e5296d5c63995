use rustfft::num_complex::Complex;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Window {
    #[default]
    Hann,
    Rectangular,
}

/// One-sided amplitude spectrum.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    pub freqs: Vec<f64>,
    pub amps: Vec<f64>,
    /// Spacing of the unpadded frequency grid, `1/(len·dt)`.
    pub native_bin: f64,
    pub pad: usize,
}

impl Spectrum {
    /// Index and frequency of the largest amplitude, ignoring DC.
    pub fn peak(&self) -> (usize, f64) {
        let k = (1..self.amps.len())
            .max_by(|&a, &b| self.amps[a].partial_cmp(&self.amps[b]).unwrap_or(std::cmp::Ordering::Equal))
            .unwrap_or(0);
        (k, self.freqs[k])
    }

    /// Share of the non-DC power within `native_bins` unpadded bins of
    /// `freq`.
    pub fn weight_near(&self, freq: f64, native_bins: f64) -> f64 {
        let half = native_bins * self.native_bin + 1e-12 * self.native_bin;
        let (mut near, mut total) = (0.0, 0.0);
        for (f, a) in self.freqs.iter().zip(&self.amps).skip(1) {
            let p = a * a;
            total += p;
            if (f - freq).abs() <= half {
                near += p;
            }
        }
        if total == 0.0 {
            0.0
        } else {
            near / total
        }
    }
}

/// Windowed, zero-padded amplitude spectrum of a uniformly sampled series.
/// A cosine of amplitude `A` on a bin centre reads `A`.
pub fn fourier_spectrum(series: &[f64], dt: f64, window: Window, pad: usize) -> Result<Spectrum> {
    let n = series.len();
    if n < 2 {
        return Err(Error::Validation("spectrum needs at least two samples".into()));
    }
    if !(dt > 0.0) || pad == 0 {
        return Err(Error::Validation("sample spacing and padding must be positive".into()));
    }
    let w: Vec<f64> = match window {
        Window::Rectangular => vec![1.0; n],
        Window::Hann => (0..n)
            .map(|k| 0.5 - 0.5 * (2.0 * std::f64::consts::PI * k as f64 / n as f64).cos())
            .collect(),
    };
    let wsum: f64 = w.iter().sum();
    let len = n * pad;
    let mut buf: Vec<Complex<f64>> = series.iter().zip(&w).map(|(x, w)| Complex::new(x * w, 0.0)).collect();
    buf.resize(len, Complex::new(0.0, 0.0));
    FftPlanner::new().plan_fft_forward(len).process(&mut buf);
    let half = len / 2;
    let freqs = (0..=half).map(|k| k as f64 / (len as f64 * dt)).collect();
    let amps = (0..=half)
        .map(|k| {
            let edge = k == 0 || (len % 2 == 0 && k == half);
            let s = if edge { 1.0 } else { 2.0 };
            s * buf[k].norm() / wsum
        })
        .collect();
    Ok(Spectrum { freqs, amps, native_bin: 1.0 / (n as f64 * dt), pad })
}
