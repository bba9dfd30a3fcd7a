//! FFT helpers: a chirp-z transform for evaluating DFT sums on arbitrary
//! uniform frequency grids, and the angular-frequency axis of a plain FFT.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

/// Evaluates `X_k = sum_m x_m exp(i * omega * k * m)` for `k = 0..out_len`
/// with Bluestein's algorithm.
///
/// The plan depends only on `(in_len, out_len, omega)` and can be reused
/// across rows; it is `Sync`.
pub struct ChirpZ {
    in_len: usize,
    out_len: usize,
    fft_len: usize,
    fwd: Arc<dyn Fft<f64>>,
    inv: Arc<dyn Fft<f64>>,
    /// `exp(i omega m^2 / 2)` for `m < max(in_len, out_len)`.
    chirp: Vec<Complex64>,
    /// FFT of the conjugate chirp arranged for circular convolution.
    kernel_hat: Vec<Complex64>,
}

impl ChirpZ {
    pub fn new(in_len: usize, out_len: usize, omega: f64) -> Self {
        let fft_len = (in_len + out_len - 1).next_power_of_two();
        let mut planner = FftPlanner::new();
        let fwd = planner.plan_fft_forward(fft_len);
        let inv = planner.plan_fft_inverse(fft_len);

        let chirp_len = in_len.max(out_len);
        let chirp: Vec<Complex64> = (0..chirp_len)
            .map(|m| {
                let mf = m as f64;
                Complex64::from_polar(1.0, 0.5 * omega * mf * mf)
            })
            .collect();

        let mut kernel = vec![Complex64::new(0.0, 0.0); fft_len];
        for m in 0..out_len {
            kernel[m] = chirp[m].conj();
        }
        for m in 1..in_len {
            kernel[fft_len - m] = chirp[m].conj();
        }
        fwd.process(&mut kernel);

        ChirpZ {
            in_len,
            out_len,
            fft_len,
            fwd,
            inv,
            chirp,
            kernel_hat: kernel,
        }
    }

    pub fn in_len(&self) -> usize {
        self.in_len
    }

    pub fn out_len(&self) -> usize {
        self.out_len
    }

    pub fn process(&self, input: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(input.len(), self.in_len, "chirp-z input length");
        let mut buf = vec![Complex64::new(0.0, 0.0); self.fft_len];
        for (m, (b, x)) in buf.iter_mut().zip(input).enumerate() {
            *b = x * self.chirp[m];
        }
        self.fwd.process(&mut buf);
        for (b, k) in buf.iter_mut().zip(&self.kernel_hat) {
            *b *= k;
        }
        self.inv.process(&mut buf);
        let scale = (self.fft_len as f64).recip();
        (0..self.out_len)
            .map(|k| buf[k] * self.chirp[k] * scale)
            .collect()
    }
}

/// Angular frequencies `2 pi k / (n dx)` in FFT order (non-negative first).
pub fn fft_frequencies(n: usize, dx: f64) -> Vec<f64> {
    let scale = 2.0 * PI / (n as f64 * dx);
    (0..n)
        .map(|k| {
            let k = if k < (n + 1) / 2 { k as f64 } else { k as f64 - n as f64 };
            k * scale
        })
        .collect()
}
