//! Phase space: Wigner functions, their Radon transforms along the lines
//! `x = D x' - B p'` (position type) or `p = A p' - C x'` (momentum type),
//! tomograms obtained by Fresnel-transforming the state, and filtered
//! back-projection.

mod fbp;
mod radon;
mod wigner;

pub use fbp::{inverse_radon_fbp, rotation_sinogram};
pub use radon::{
    central_identity_check, central_identity_check_with, radon, radon_momentum, radon_position,
    radon_with, rotated_quadrature_density, tomogram_via_fresnel,
};
pub use wigner::{momentum_wavefunction, weyl_expectation, weyl_expectation_fn, wigner};

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::gridtransform::GridSpec;
use crate::interp::{interp_2d, Interpolation};
use crate::symplectic::RayMatrix;

/// Which tomographic quadrature a curve samples.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Quadrature {
    /// Distribution of `DX - BP`.
    #[default]
    Position,
    /// Distribution of `AP - CX`.
    Momentum,
}

impl fmt::Display for Quadrature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Quadrature::Position => "position",
            Quadrature::Momentum => "momentum",
        })
    }
}

impl FromStr for Quadrature {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "position" | "x" => Ok(Quadrature::Position),
            "momentum" | "p" => Ok(Quadrature::Momentum),
            _ => Err(Error::Parse(format!("unknown quadrature mode {s:?}"))),
        }
    }
}

/// Real Wigner values on the square grid `x_j, p_k = -L + j dx`.
/// Stored row-major: `values[j * n + k] = W(x_j, p_k)`.
#[derive(Debug, Clone, PartialEq)]
pub struct WignerGrid {
    grid: GridSpec,
    values: Vec<f64>,
}

impl WignerGrid {
    pub fn new(grid: GridSpec, values: Vec<f64>) -> Result<Self> {
        let n = grid.len();
        if values.len() != n * n {
            return Err(Error::DimensionMismatch {
                expected: n * n,
                got: values.len(),
            });
        }
        Ok(WignerGrid { grid, values })
    }

    pub fn zeros(grid: GridSpec) -> Self {
        WignerGrid {
            grid,
            values: vec![0.0; grid.len() * grid.len()],
        }
    }

    pub fn from_fn(grid: GridSpec, f: impl Fn(f64, f64) -> f64 + Sync) -> Self {
        let n = grid.len();
        let values = (0..n * n)
            .into_par_iter()
            .map(|i| f(grid.x(i / n), grid.x(i % n)))
            .collect();
        WignerGrid { grid, values }
    }

    pub fn grid(&self) -> GridSpec {
        self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// `W(x_j, p_k)`.
    pub fn get(&self, j: usize, k: usize) -> f64 {
        self.values[j * self.grid.len() + k]
    }

    /// Bicubic interpolation, zero outside the grid.
    pub fn value_at(&self, x: f64, p: f64) -> f64 {
        self.value_at_with(x, p, Interpolation::Cubic)
    }

    pub fn value_at_with(&self, x: f64, p: f64, kind: Interpolation) -> f64 {
        let axis = self.grid.axis();
        interp_2d(&self.values, axis, axis, x, p, kind)
    }

    /// `sum W dx^2`.
    pub fn normalization(&self) -> f64 {
        let d = self.grid.step();
        self.values.iter().sum::<f64>() * d * d
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    /// Index `(j, k)` of the largest value.
    pub fn argmax(&self) -> (usize, usize) {
        let n = self.grid.len();
        let i = self
            .values
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(b.1))
            .map(|(i, _)| i)
            .unwrap_or(0);
        (i / n, i % n)
    }

    /// `sum_k W(x_j, p_k) dx`, the position density.
    pub fn position_marginal(&self) -> Vec<f64> {
        let d = self.grid.step();
        self.values
            .chunks(self.grid.len())
            .map(|row| row.iter().sum::<f64>() * d)
            .collect()
    }

    /// `sum_j W(x_j, p_k) dx`, the momentum density.
    pub fn momentum_marginal(&self) -> Vec<f64> {
        let n = self.grid.len();
        let d = self.grid.step();
        let mut out = vec![0.0; n];
        for row in self.values.chunks(n) {
            for (o, v) in out.iter_mut().zip(row) {
                *o += v;
            }
        }
        out.iter_mut().for_each(|v| *v *= d);
        out
    }

    /// Largest `|W|` on the outer boundary.
    pub fn border_max(&self) -> f64 {
        let n = self.grid.len();
        let mut m: f64 = 0.0;
        for i in 0..n {
            m = m
                .max(self.get(0, i).abs())
                .max(self.get(n - 1, i).abs())
                .max(self.get(i, 0).abs())
                .max(self.get(i, n - 1).abs());
        }
        m
    }

    /// Smallest index box `[(x_lo, x_hi), (p_lo, p_hi)]` holding every entry
    /// with `|W| > threshold`, or `None` if there is none.
    pub fn support_box(&self, threshold: f64) -> Option<[(usize, usize); 2]> {
        let n = self.grid.len();
        let mut bx = [(usize::MAX, 0), (usize::MAX, 0)];
        for (i, v) in self.values.iter().enumerate() {
            if v.abs() > threshold {
                let (j, k) = (i / n, i % n);
                bx[0] = (bx[0].0.min(j), bx[0].1.max(j));
                bx[1] = (bx[1].0.min(k), bx[1].1.max(k));
            }
        }
        (bx[0].0 != usize::MAX).then_some(bx)
    }

    pub fn max_abs_diff(&self, other: &WignerGrid) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

/// Samples of a quadrature distribution tagged with the matrix and mode
/// that produced them.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TomogramCurve {
    abscissas: Vec<f64>,
    values: Vec<f64>,
    matrix: RayMatrix,
    mode: Quadrature,
}

impl TomogramCurve {
    pub fn new(
        abscissas: Vec<f64>,
        values: Vec<f64>,
        matrix: RayMatrix,
        mode: Quadrature,
    ) -> Result<Self> {
        if abscissas.len() != values.len() {
            return Err(Error::DimensionMismatch {
                expected: abscissas.len(),
                got: values.len(),
            });
        }
        if abscissas.len() < 2 {
            return invalid("a tomogram needs at least two samples");
        }
        if abscissas.windows(2).any(|w| !(w[1] > w[0])) {
            return invalid("tomogram abscissas must increase strictly");
        }
        Ok(TomogramCurve {
            abscissas,
            values,
            matrix,
            mode,
        })
    }

    pub fn abscissas(&self) -> &[f64] {
        &self.abscissas
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn matrix(&self) -> RayMatrix {
        self.matrix
    }

    pub fn mode(&self) -> Quadrature {
        self.mode
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// The pair parameterizing the line family: `(D, B)` or `(A, C)`.
    pub fn parameters(&self) -> (f64, f64) {
        match self.mode {
            Quadrature::Position => (self.matrix.d(), self.matrix.b()),
            Quadrature::Momentum => (self.matrix.a(), self.matrix.c()),
        }
    }

    fn trapezoid(&self, f: impl Fn(f64, f64) -> f64) -> f64 {
        self.abscissas
            .windows(2)
            .zip(self.values.windows(2))
            .map(|(x, t)| 0.5 * (x[1] - x[0]) * (f(x[0], t[0]) + f(x[1], t[1])))
            .sum()
    }

    /// `\int t dx` by the trapezoid rule.
    pub fn integral(&self) -> f64 {
        self.trapezoid(|_, t| t)
    }

    pub fn mean(&self) -> f64 {
        self.trapezoid(|x, t| x * t) / self.integral()
    }

    pub fn variance(&self) -> f64 {
        let m = self.mean();
        self.trapezoid(|x, t| (x - m) * (x - m) * t) / self.integral()
    }

    /// Most negative sample (zero if none).
    pub fn min_value(&self) -> f64 {
        self.values.iter().copied().fold(0.0, f64::min)
    }

    /// Uniform spacing if the abscissas are uniform to `1e-9` relative.
    pub fn uniform_step(&self) -> Option<f64> {
        let h = (self.abscissas[self.len() - 1] - self.abscissas[0]) / (self.len() - 1) as f64;
        self.abscissas
            .windows(2)
            .all(|w| ((w[1] - w[0]) - h).abs() <= 1e-9 * h.abs())
            .then_some(h)
    }

    pub fn max_abs_diff(&self, other: &TomogramCurve) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}
