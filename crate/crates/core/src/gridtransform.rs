//! The Fresnel integral transform on sampled wavefunctions.
//!
//! For `|B| > EPS_B` the transform is
//!
//! ```text
//! g(x') = (2 pi i B)^{-1/2} \int exp[i/(2B) (A x^2 - 2 x' x + D x'^2)] f(x) dx
//! ```
//!
//! evaluated by a dense kernel-vector product with trapezoid weights. When the
//! sampled integrand would alias (small `|B|` against a wide or fast input) the
//! same operator is applied through the factorization
//! `M = [[A, 0], [C, 1/A]] * free(B/A)`: an exact FFT propagation followed by
//! the `B = 0` limit `g(x') = A^{-1/2} exp(i C x'^2 / 2A) f(x'/A)`.
//! Square roots take the principal branch, so different routes to the same
//! operator may differ by a global sign.

use std::f64::consts::PI;

use log::warn;
use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::interp::{interp_complex, Axis, Interpolation};
use crate::spectral::fft_frequencies;
use crate::symplectic::RayMatrix;

/// `|B|` at or below which the kernel is treated as a delta function.
pub const EPS_B: f64 = 1e-12;

/// Amplitude threshold below which samples count as outside the support.
const SUPPORT_REL: f64 = 1e-10;

/// Fraction of the trapezoid aliasing frequency `2 pi / dx` the integrand
/// may reach before the dense route is abandoned.
const ALIAS_MARGIN: f64 = 0.85;

/// Uniform symmetric grid `x_j = -L + j dx`, `dx = 2L/(n-1)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    #[serde(rename = "L")]
    half_width: f64,
    #[serde(rename = "n")]
    points: usize,
}

impl GridSpec {
    pub fn new(half_width: f64, points: usize) -> Result<Self> {
        if !(half_width > 0.0 && half_width.is_finite()) {
            return invalid(format!("grid half-width must be positive, got {half_width}"));
        }
        if points < 8 {
            return invalid(format!("grid needs at least 8 points, got {points}"));
        }
        Ok(GridSpec { half_width, points })
    }

    pub fn half_width(&self) -> f64 {
        self.half_width
    }

    pub fn len(&self) -> usize {
        self.points
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn step(&self) -> f64 {
        2.0 * self.half_width / (self.points - 1) as f64
    }

    pub fn x(&self, j: usize) -> f64 {
        -self.half_width + j as f64 * self.step()
    }

    pub fn xs(&self) -> Vec<f64> {
        (0..self.points).map(|j| self.x(j)).collect()
    }

    pub fn axis(&self) -> Axis {
        Axis {
            origin: -self.half_width,
            step: self.step(),
            len: self.points,
        }
    }

    /// Same extent with twice the resolution (`2n - 1` points, nodes nested).
    pub fn refined(&self) -> GridSpec {
        GridSpec {
            half_width: self.half_width,
            points: 2 * self.points - 1,
        }
    }

    /// Trapezoid weights `dx`, halved at the two end points.
    pub fn trapezoid_weight(&self, j: usize) -> f64 {
        if j == 0 || j + 1 == self.points {
            0.5 * self.step()
        } else {
            self.step()
        }
    }
}

impl Default for GridSpec {
    /// `L = 10`, `n = 1024`.
    fn default() -> Self {
        GridSpec {
            half_width: 10.0,
            points: 1024,
        }
    }
}

/// Complex wavefunction sampled on a [`GridSpec`].
#[derive(Debug, Clone, PartialEq)]
pub struct GridWavefunction {
    grid: GridSpec,
    samples: Vec<Complex64>,
}

impl GridWavefunction {
    pub fn new(grid: GridSpec, samples: Vec<Complex64>) -> Result<Self> {
        if samples.len() != grid.len() {
            return Err(Error::DimensionMismatch {
                expected: grid.len(),
                got: samples.len(),
            });
        }
        Ok(GridWavefunction { grid, samples })
    }

    pub fn from_fn(grid: GridSpec, f: impl Fn(f64) -> Complex64) -> Self {
        let samples = (0..grid.len()).map(|j| f(grid.x(j))).collect();
        GridWavefunction { grid, samples }
    }

    pub fn grid(&self) -> GridSpec {
        self.grid
    }

    pub fn samples(&self) -> &[Complex64] {
        &self.samples
    }

    pub fn into_samples(self) -> Vec<Complex64> {
        self.samples
    }

    /// `sum |psi_j|^2 dx` with trapezoid end weights.
    pub fn norm_sqr(&self) -> f64 {
        self.samples
            .iter()
            .enumerate()
            .map(|(j, v)| v.norm_sqr() * self.grid.trapezoid_weight(j))
            .sum()
    }

    /// `<self|other>` by trapezoid quadrature.
    pub fn inner(&self, other: &GridWavefunction) -> Complex64 {
        assert_eq!(self.grid, other.grid, "inner product across different grids");
        self.samples
            .iter()
            .zip(&other.samples)
            .enumerate()
            .map(|(j, (a, b))| a.conj() * b * self.grid.trapezoid_weight(j))
            .sum()
    }

    pub fn normalized(mut self) -> Self {
        let k = self.norm_sqr().sqrt().recip();
        self.samples.iter_mut().for_each(|v| *v *= k);
        self
    }

    /// Larger of the two end-point magnitudes.
    pub fn edge_amplitude(&self) -> f64 {
        self.samples[0].norm().max(self.samples[self.samples.len() - 1].norm())
    }

    /// Samples `|psi|^2`.
    pub fn density(&self) -> Vec<f64> {
        self.samples.iter().map(|v| v.norm_sqr()).collect()
    }

    /// Evaluates at an arbitrary point with cubic interpolation (zero outside).
    pub fn value_at(&self, x: f64) -> Complex64 {
        interp_complex(&self.samples, self.grid.axis(), x, Interpolation::Cubic)
    }

    /// Largest `|x_j|` whose amplitude exceeds `1e-10` of the peak.
    pub fn support_radius(&self) -> f64 {
        let peak = self.samples.iter().map(|v| v.norm()).fold(0.0, f64::max);
        let cut = peak * SUPPORT_REL;
        self.samples
            .iter()
            .enumerate()
            .filter(|(_, v)| v.norm() > cut)
            .map(|(j, _)| self.grid.x(j).abs())
            .fold(0.0, f64::max)
    }

    /// Largest angular frequency with FFT amplitude above `1e-10` of the peak.
    pub fn bandwidth(&self) -> f64 {
        let mut buf = self.samples.clone();
        FftPlanner::new().plan_fft_forward(buf.len()).process(&mut buf);
        let freqs = fft_frequencies(buf.len(), self.grid.step());
        let peak = buf.iter().map(|v| v.norm()).fold(0.0, f64::max);
        let cut = peak * SUPPORT_REL;
        buf.iter()
            .zip(&freqs)
            .filter(|(v, _)| v.norm() > cut)
            .map(|(_, k)| k.abs())
            .fold(0.0, f64::max)
    }
}

/// `(2 pi i B)^{-1/2} exp[i/(2B) (A xin^2 - 2 xout xin + D xout^2)]`.
pub fn fresnel_kernel(m: &RayMatrix, xout: f64, xin: f64) -> Result<Complex64> {
    let b = m.b();
    if b.abs() <= EPS_B {
        return Err(Error::DegenerateKernel(b));
    }
    let phase = (m.a() * xin * xin - 2.0 * xout * xin + m.d() * xout * xout) / (2.0 * b);
    Ok(kernel_prefactor(b) * Complex64::from_polar(1.0, phase))
}

fn kernel_prefactor(b: f64) -> Complex64 {
    Complex64::new(0.0, 2.0 * PI * b).sqrt().inv()
}

/// How [`fresnel_transform`] evaluates a given matrix on a given input.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TransformRoute {
    /// Dense kernel quadrature.
    Dense,
    /// `|B| <= EPS_B`: scaling plus chirp.
    Degenerate,
    /// FFT free propagation combined with the degenerate step.
    Factorized,
}

/// Chooses the evaluation route: dense unless the trapezoid rule would alias.
pub fn choose_route(m: &RayMatrix, psi: &GridWavefunction) -> TransformRoute {
    let b = m.b().abs();
    if b <= EPS_B {
        return TransformRoute::Degenerate;
    }
    let grid = psi.grid();
    let chirp_freq = (m.a().abs() * psi.support_radius() + grid.half_width()) / b;
    let limit = ALIAS_MARGIN * 2.0 * PI / grid.step();
    if chirp_freq + psi.bandwidth() <= limit {
        TransformRoute::Dense
    } else {
        TransformRoute::Factorized
    }
}

/// Applies the Fresnel transform of `m` to `psi`, output on the same grid.
pub fn fresnel_transform(m: &RayMatrix, psi: &GridWavefunction) -> GridWavefunction {
    if psi.edge_amplitude() > 1e-8 {
        warn!(
            "wavefunction amplitude {:.2e} at the grid edge; transform will be truncated",
            psi.edge_amplitude()
        );
    }
    fresnel_transform_via(m, psi, choose_route(m, psi))
}

/// Applies the transform through an explicitly chosen route.
pub fn fresnel_transform_via(
    m: &RayMatrix,
    psi: &GridWavefunction,
    route: TransformRoute,
) -> GridWavefunction {
    match route {
        TransformRoute::Dense => dense_transform(m, psi),
        TransformRoute::Degenerate => degenerate_transform(m.a(), m.c(), psi),
        TransformRoute::Factorized => factorized_transform(m, psi),
    }
}

/// `F(M)^dagger psi`, realized as the transform of `M^{-1}`.
pub fn apply_fresnel_adjoint(m: &RayMatrix, psi: &GridWavefunction) -> GridWavefunction {
    fresnel_transform(&m.inverse(), psi)
}

fn dense_transform(m: &RayMatrix, psi: &GridWavefunction) -> GridWavefunction {
    let grid = psi.grid();
    let (a, b, d) = (m.a(), m.b(), m.d());
    assert!(b.abs() > EPS_B, "dense route needs |B| > EPS_B");
    let xs = grid.xs();
    let inv2b = 0.5 / b;
    let weighted: Vec<Complex64> = psi
        .samples()
        .iter()
        .enumerate()
        .map(|(j, f)| f * grid.trapezoid_weight(j) * Complex64::from_polar(1.0, a * xs[j] * xs[j] * inv2b))
        .collect();
    let pref = kernel_prefactor(b);
    let x0 = xs[0];
    let dx = grid.step();
    let out: Vec<Complex64> = xs
        .par_iter()
        .map(|&xo| {
            // exp(-i xo x_j / B) generated by repeated multiplication.
            let start = Complex64::from_polar(1.0, -xo * x0 / b);
            let stride = Complex64::from_polar(1.0, -xo * dx / b);
            let mut phase = start;
            let mut acc = Complex64::new(0.0, 0.0);
            for w in &weighted {
                acc += w * phase;
                phase *= stride;
            }
            pref * Complex64::from_polar(1.0, d * xo * xo * inv2b) * acc
        })
        .collect();
    GridWavefunction {
        grid,
        samples: out,
    }
}

/// `g(x') = A^{-1/2} exp(i C x'^2 / 2A) f(x'/A)`, the `B -> 0` limit.
fn degenerate_transform(a: f64, c: f64, psi: &GridWavefunction) -> GridWavefunction {
    assert!(a != 0.0, "A and B cannot both vanish for a unimodular matrix");
    let grid = psi.grid();
    let pref = Complex64::new(a, 0.0).sqrt().inv();
    let axis = grid.axis();
    let samples = (0..grid.len())
        .map(|j| {
            let x = grid.x(j);
            let f = interp_complex(psi.samples(), axis, x / a, Interpolation::Cubic);
            pref * Complex64::from_polar(1.0, c * x * x / (2.0 * a)) * f
        })
        .collect();
    GridWavefunction { grid, samples }
}

/// Free propagation `exp(-i l P^2 / 2)` by FFT.
fn free_propagate(l: f64, psi: &GridWavefunction) -> GridWavefunction {
    let grid = psi.grid();
    let n = grid.len();
    let mut planner = FftPlanner::new();
    let mut buf = psi.samples().to_vec();
    planner.plan_fft_forward(n).process(&mut buf);
    let scale = (n as f64).recip();
    for (v, k) in buf.iter_mut().zip(fft_frequencies(n, grid.step())) {
        *v *= Complex64::from_polar(scale, -0.5 * l * k * k);
    }
    planner.plan_fft_inverse(n).process(&mut buf);
    GridWavefunction { grid, samples: buf }
}

fn factorized_transform(m: &RayMatrix, psi: &GridWavefunction) -> GridWavefunction {
    let (a, b, c, d) = (m.a(), m.b(), m.c(), m.d());
    if a.abs() >= d.abs() {
        // M = [[A, 0], [C, 1/A]] * free(B/A)
        let propagated = free_propagate(b / a, psi);
        degenerate_transform(a, c, &propagated)
    } else {
        // M = free(B/D) * [[1/D, 0], [C, D]]
        let scaled = degenerate_transform(d.recip(), c, psi);
        free_propagate(b / d, &scaled)
    }
}

/// Rotates `candidate` by the global phase that matches `reference` at the
/// reference's largest-magnitude sample.
pub fn align_global_phase(reference: &[Complex64], candidate: &[Complex64]) -> Vec<Complex64> {
    assert_eq!(reference.len(), candidate.len());
    let peak = reference
        .iter()
        .enumerate()
        .max_by(|x, y| x.1.norm().total_cmp(&y.1.norm()))
        .map(|(i, _)| i)
        .unwrap_or(0);
    let ratio = reference[peak] / candidate[peak];
    let phase = if ratio.norm() > 0.0 && ratio.is_finite() {
        ratio / ratio.norm()
    } else {
        Complex64::new(1.0, 0.0)
    };
    candidate.iter().map(|v| v * phase).collect()
}

/// Largest elementwise difference after global-phase alignment.
pub fn max_diff_up_to_phase(reference: &[Complex64], candidate: &[Complex64]) -> f64 {
    align_global_phase(reference, candidate)
        .iter()
        .zip(reference)
        .map(|(a, b)| (a - b).norm())
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symplectic::Elementary;

    fn vacuum(grid: GridSpec) -> GridWavefunction {
        GridWavefunction::from_fn(grid, |x| Complex64::new(PI.powf(-0.25) * (-0.5 * x * x).exp(), 0.0))
    }

    fn coherent(grid: GridSpec, z: Complex64) -> GridWavefunction {
        GridWavefunction::from_fn(grid, |x| {
            (Complex64::new(-0.5 * x * x, 0.0) + 2f64.sqrt() * x * z - 0.5 * z * z - 0.5 * z.norm_sqr())
                .exp()
                * PI.powf(-0.25)
        })
    }

    #[test]
    fn grid_spec_validation() {
        assert!(GridSpec::new(10.0, 7).is_err());
        assert!(GridSpec::new(-1.0, 64).is_err());
        let g = GridSpec::default();
        assert_eq!(g.len(), 1024);
        assert!((g.x(1023) - 10.0).abs() < 1e-12);
        assert!((g.step() - 20.0 / 1023.0).abs() < 1e-15);
    }

    #[test]
    fn kernel_examples() {
        let q = RayMatrix::new(0.0, 1.0, -1.0, 0.0).unwrap();
        let pref = Complex64::new(0.0, 2.0 * PI).sqrt().inv();
        for &(xo, xi) in &[(0.3, -1.2), (2.0, 0.7)] {
            let k = fresnel_kernel(&q, xo, xi).unwrap();
            assert!((k - pref * Complex64::from_polar(1.0, -xo * xi)).norm() < 1e-14);
        }

        let m = RayMatrix::new(1.7, -0.4, 0.5, (1.0 - 0.4 * 0.5) / 1.7).unwrap();
        for &(xo, xi) in &[(0.0, 0.0), (3.3, -2.1), (-8.0, 5.0)] {
            let k = fresnel_kernel(&m, xo, xi).unwrap();
            assert!((k.norm() - (2.0 * PI * 0.4f64).powf(-0.5)).abs() < 1e-14);
        }

        let lam = 0.8;
        let f = Elementary::Free(lam).to_matrix().unwrap();
        let (xo, xi) = (0.9, -0.35);
        let chirp = Complex64::new(0.0, 2.0 * PI * lam).sqrt().inv()
            * Complex64::from_polar(1.0, (xi - xo) * (xi - xo) / (2.0 * lam));
        assert!((fresnel_kernel(&f, xo, xi).unwrap() - chirp).norm() < 1e-14);

        assert!(matches!(
            fresnel_kernel(&RayMatrix::IDENTITY, 0.0, 0.0),
            Err(Error::DegenerateKernel(_))
        ));
    }

    #[test]
    fn identity_is_exact() {
        let psi = coherent(GridSpec::default(), Complex64::new(1.0, 0.5));
        let g = fresnel_transform(&RayMatrix::IDENTITY, &psi);
        assert_eq!(choose_route(&RayMatrix::IDENTITY, &psi), TransformRoute::Degenerate);
        for (a, b) in g.samples().iter().zip(psi.samples()) {
            assert!((a - b).norm() < 1e-15);
        }
    }

    #[test]
    fn fourier_keeps_vacuum() {
        let psi = vacuum(GridSpec::default());
        let q = RayMatrix::new(0.0, 1.0, -1.0, 0.0).unwrap();
        let g = fresnel_transform(&q, &psi);
        assert!(max_diff_up_to_phase(psi.samples(), g.samples()) < 1e-10);
    }

    #[test]
    fn inverse_undoes_transform() {
        let psi = coherent(GridSpec::default(), Complex64::new(1.0, 0.0));
        let m = Elementary::Free(0.5).to_matrix().unwrap();
        let back = fresnel_transform(&m.inverse(), &fresnel_transform(&m, &psi));
        assert!(max_diff_up_to_phase(psi.samples(), back.samples()) < 1e-6);
    }

    #[test]
    fn composition_matches_product() {
        let psi = coherent(GridSpec::default(), Complex64::new(0.7, -0.4));
        let m1 = RayMatrix::new(1.2, 0.6, -0.3, (1.0 + 0.6 * -0.3) / 1.2).unwrap();
        let m2 = Elementary::Rotation(0.9).to_matrix().unwrap();
        let two_step = fresnel_transform(&m1, &fresnel_transform(&m2, &psi));
        let direct = fresnel_transform(&(m1 * m2), &psi);
        assert!(max_diff_up_to_phase(direct.samples(), two_step.samples()) < 1e-5);
    }

    #[test]
    fn adjoint_examples() {
        let grid = GridSpec::default();
        let psi = coherent(grid, Complex64::new(-0.3, 0.8));
        let same = apply_fresnel_adjoint(&RayMatrix::IDENTITY, &psi);
        assert!(max_diff_up_to_phase(psi.samples(), same.samples()) < 1e-15);

        // Fock n = 2: (2x^2 - 1) e^{-x^2/2} / sqrt(2 sqrt(pi))
        let fock2 = GridWavefunction::from_fn(grid, |x| {
            Complex64::new((2.0 * x * x - 1.0) * (-0.5 * x * x).exp() / (2.0 * PI.sqrt()).sqrt(), 0.0)
        });
        let rot = Elementary::Rotation(0.7).to_matrix().unwrap();
        let round = apply_fresnel_adjoint(&rot, &fresnel_transform(&rot, &fock2));
        let err = round
            .samples()
            .iter()
            .zip(fock2.samples())
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt()
            * grid.step().sqrt();
        assert!(err < 1e-6, "{err}");

        // <F phi, psi> = <phi, F^dagger psi>
        let phi = coherent(grid, Complex64::new(0.4, 0.1));
        let m = RayMatrix::new(0.8, 0.9, -0.6, (1.0 - 0.9 * 0.6) / 0.8).unwrap();
        let lhs = fresnel_transform(&m, &phi).inner(&psi);
        let rhs = phi.inner(&apply_fresnel_adjoint(&m, &psi));
        assert!((lhs - rhs).norm() < 1e-6, "{lhs} vs {rhs}");
    }

    #[test]
    fn norm_preserved_across_b_range() {
        let grid = GridSpec::default();
        let psi = coherent(grid, Complex64::new(0.5, 0.2));
        for &b in &[1e-3, 1e-2, 0.1, 1.0] {
            let m = RayMatrix::new(1.0, b, 0.0, 1.0).unwrap();
            let g = fresnel_transform(&m, &psi);
            assert!((g.norm_sqr() - 1.0).abs() < 1e-6, "B = {b}: {}", g.norm_sqr());
        }
        // (0, B, -1/B, 0) maps a Gaussian of variance B/2 to one of the same width
        let balanced = |b: f64| {
            let psi = GridWavefunction::from_fn(grid, |x| Complex64::new((-x * x / (2.0 * b)).exp(), 0.0))
                .normalized();
            let m = RayMatrix::new(0.0, b, -1.0 / b, 0.0).unwrap();
            1.0 - fresnel_transform(&m, &psi).norm_sqr()
        };
        for &b in &[1.0, 3.0, 6.0, 8.0] {
            assert!(balanced(b).abs() < 1e-6, "B = {b}: {}", balanced(b));
        }
        // at B = 10 the output tail beyond L is ~erfc(sqrt(L^2 / B)) and cannot fit
        let b = 10.0;
        let z: f64 = (grid.half_width().powi(2) / b).sqrt();
        let tail = (-z * z).exp() / (z * std::f64::consts::PI.sqrt()) * (1.0 - 0.5 / (z * z));
        let loss = balanced(b);
        assert!(loss > 0.5 * tail && loss < 2.0 * tail, "loss {loss} tail {tail}");
    }

    #[test]
    fn small_b_routes_agree() {
        let psi = coherent(GridSpec::default(), Complex64::new(1.5, 0.0));
        let m = RayMatrix::new(1.1, 0.08, 0.2, (1.0 + 0.08 * 0.2) / 1.1).unwrap();
        let dense = fresnel_transform_via(&m, &psi, TransformRoute::Dense);
        let fact = fresnel_transform_via(&m, &psi, TransformRoute::Factorized);
        assert!(max_diff_up_to_phase(dense.samples(), fact.samples()) < 1e-6);
    }
}
