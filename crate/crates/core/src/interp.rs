//! Interpolation on uniform grids.
//!
//! `Cubic` is four-point Lagrange interpolation (fourth-order accurate);
//! `Linear` is the two-point rule. Both treat samples outside the grid as zero.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Interpolation {
    Linear,
    #[default]
    Cubic,
}

/// Lagrange weights for nodes at offsets -1, 0, 1, 2 and fractional position `t`.
#[inline]
pub fn cubic_weights(t: f64) -> [f64; 4] {
    let tm1 = t - 1.0;
    let tm2 = t - 2.0;
    let tp1 = t + 1.0;
    [
        -t * tm1 * tm2 / 6.0,
        tp1 * tm1 * tm2 / 2.0,
        -tp1 * t * tm2 / 2.0,
        tp1 * t * tm1 / 6.0,
    ]
}

/// Uniform axis `x_j = origin + j * step`, `j = 0..len`.
#[derive(Debug, Clone, Copy)]
pub struct Axis {
    pub origin: f64,
    pub step: f64,
    pub len: usize,
}

/// Stencil (first index, weights) for evaluating at `x`; `None` when the
/// point lies outside the grid.
#[derive(Debug, Clone, Copy)]
enum Stencil {
    Two(usize, [f64; 2]),
    Four(usize, [f64; 4]),
}

impl Axis {
    fn stencil(&self, x: f64, kind: Interpolation) -> Option<Stencil> {
        let f = (x - self.origin) / self.step;
        if !(f >= 0.0) || f > (self.len - 1) as f64 {
            return None;
        }
        let mut i = f.floor() as usize;
        if i >= self.len - 1 {
            i = self.len - 2;
        }
        let t = f - i as f64;
        if kind == Interpolation::Cubic && i >= 1 && i + 2 < self.len {
            return Some(Stencil::Four(i - 1, cubic_weights(t)));
        }
        Some(Stencil::Two(i, [1.0 - t, t]))
    }

    pub fn value(&self, j: usize) -> f64 {
        self.origin + j as f64 * self.step
    }
}

/// Interpolates complex samples on `axis` at `x`; zero outside.
pub fn interp_complex(samples: &[Complex64], axis: Axis, x: f64, kind: Interpolation) -> Complex64 {
    match axis.stencil(x, kind) {
        None => Complex64::new(0.0, 0.0),
        Some(Stencil::Two(i, w)) => samples[i] * w[0] + samples[i + 1] * w[1],
        Some(Stencil::Four(i, w)) => w
            .iter()
            .zip(&samples[i..i + 4])
            .map(|(w, s)| s * *w)
            .sum(),
    }
}

/// Interpolates real samples on `axis` at `x`; zero outside.
pub fn interp_real(samples: &[f64], axis: Axis, x: f64, kind: Interpolation) -> f64 {
    match axis.stencil(x, kind) {
        None => 0.0,
        Some(Stencil::Two(i, w)) => samples[i] * w[0] + samples[i + 1] * w[1],
        Some(Stencil::Four(i, w)) => w.iter().zip(&samples[i..i + 4]).map(|(w, s)| w * s).sum(),
    }
}

/// Tensor-product interpolation of a row-major `(x, p)` table; zero outside.
pub fn interp_2d(
    values: &[f64],
    x_axis: Axis,
    p_axis: Axis,
    x: f64,
    p: f64,
    kind: Interpolation,
) -> f64 {
    let (Some(sx), Some(sp)) = (x_axis.stencil(x, kind), p_axis.stencil(p, kind)) else {
        return 0.0;
    };
    let cols = p_axis.len;
    let row = |j: usize| -> f64 {
        let r = &values[j * cols..(j + 1) * cols];
        match sp {
            Stencil::Two(k, w) => r[k] * w[0] + r[k + 1] * w[1],
            Stencil::Four(k, w) => w[0] * r[k] + w[1] * r[k + 1] + w[2] * r[k + 2] + w[3] * r[k + 3],
        }
    };
    match sx {
        Stencil::Two(j, w) => w[0] * row(j) + w[1] * row(j + 1),
        Stencil::Four(j, w) => {
            w[0] * row(j) + w[1] * row(j + 1) + w[2] * row(j + 2) + w[3] * row(j + 3)
        }
    }
}
