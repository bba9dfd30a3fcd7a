//! The Fresnel operator `F(s, r)`.
//!
//! Closed (disentangled) form:
//!
//! ```text
//! F = (1/sqrt(s*)) exp(-(r/2s*) a^dagger^2) (1/s*)^{a^dagger a} exp((r*/2s*) a^2)
//! ```
//!
//! The outer factors are lower / upper triangular in the number basis, so
//! their truncated product equals the truncation of the exact operator.
//! The coherent-state integral `F = sqrt(s) \int d^2z/pi |sz - rz*><z|` is
//! kept as an independent numerical oracle.

use std::f64::consts::PI;
use std::num::NonZeroUsize;

use gauss_quad::legendre::GaussLegendre;
use ndarray::Array2;
use num_complex::Complex64;
use rayon::prelude::*;

use super::FockOperator;
use crate::error::{invalid, Error, Result};
use crate::symplectic::SrPair;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// `ln k!` for `k < n`.
fn ln_factorials(n: usize) -> Vec<f64> {
    let mut t = Vec::with_capacity(n.max(1));
    let mut acc = 0.0;
    t.push(0.0);
    for k in 1..n {
        acc += (k as f64).ln();
        t.push(acc);
    }
    t
}

/// Truncated `exp(g a^dagger^2)`: `<m|.|j> = g^k/k! sqrt(m!/j!)`, `m = j + 2k`.
fn squeeze_factor(g: Complex64, n: usize, lnf: &[f64]) -> Array2<Complex64> {
    let mut out = Array2::from_elem((n, n), ZERO);
    for j in 0..n {
        out[[j, j]] = Complex64::new(1.0, 0.0);
    }
    if g == ZERO {
        return out;
    }
    let (lg, ag) = (g.norm().ln(), g.arg());
    for j in 0..n {
        let mut k = 1;
        while j + 2 * k < n {
            let m = j + 2 * k;
            let kf = k as f64;
            let mag = kf * lg - lnf[k] + 0.5 * (lnf[m] - lnf[j]);
            out[[m, j]] = Complex64::from_polar(mag.exp(), kf * ag);
            k += 1;
        }
    }
    out
}

/// Closed-form Fresnel operator in dimension `n >= 2`.
pub fn fresnel_operator(p: &SrPair, n: usize) -> Result<FockOperator> {
    if n < 2 {
        return invalid(format!("Fresnel operator needs N >= 2, got {n}"));
    }
    let (s, r) = (p.s(), p.r());
    let sc = s.conj();
    let lnf = ln_factorials(n);
    let left = squeeze_factor(-r / (2.0 * sc), n, &lnf);
    let right = squeeze_factor(r.conj() / (2.0 * sc), n, &lnf)
        .t()
        .to_owned();
    // (1/s*)^n with modulus and phase tracked separately.
    let t = sc.inv();
    let (lt, at) = (t.norm().ln(), t.arg());
    let pref = sc.sqrt().inv();
    let mut middle = right;
    for (j, mut row) in middle.rows_mut().into_iter().enumerate() {
        let d = Complex64::from_polar((j as f64 * lt).exp(), j as f64 * at) * pref;
        row.mapv_inplace(|v| v * d);
    }
    FockOperator::new(left.dot(&middle))
}

/// Polar product rule: Gauss-Legendre in `|z|` over `[0, radius]` times the
/// trapezoid rule in `arg z`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolarQuadrature {
    pub radius: f64,
    pub radial_nodes: usize,
    pub angular_nodes: usize,
}

impl Default for PolarQuadrature {
    fn default() -> Self {
        PolarQuadrature {
            radius: 6.0,
            radial_nodes: 200,
            angular_nodes: 200,
        }
    }
}

impl PolarQuadrature {
    fn validate(&self) -> Result<()> {
        if !(self.radius > 0.0) || self.radial_nodes < 2 || self.angular_nodes < 4 {
            return invalid(format!("bad polar quadrature {self:?}"));
        }
        Ok(())
    }

    /// Same radius, half the nodes in each direction.
    pub fn coarsened(&self) -> PolarQuadrature {
        PolarQuadrature {
            radius: self.radius,
            radial_nodes: (self.radial_nodes / 2).max(2),
            angular_nodes: (self.angular_nodes / 2).max(4),
        }
    }

    /// The default rule, widened until [`tail_bound`] drops below `1e-14`.
    /// Node counts grow in proportion to the radius.
    pub fn for_operator(p: &SrPair, n: usize) -> PolarQuadrature {
        let base = PolarQuadrature::default();
        let mut radius = base.radius;
        while tail_bound(p, n, radius) > 1e-14 && radius < 40.0 {
            radius += 0.5;
        }
        let grow = radius / base.radius;
        PolarQuadrature {
            radius,
            radial_nodes: (base.radial_nodes as f64 * grow).ceil() as usize,
            angular_nodes: (base.angular_nodes as f64 * grow).ceil() as usize,
        }
    }
}

/// Bound on any entry of `sqrt(s) \int_{|z| > radius} d^2z/pi <i|sz - rz*><z|j>`.
///
/// Uses `|sz - rz*| >= k |z|` with `k = 1/(|s| + |r|)`; once `k |z|` passes
/// the peak of `e^{-t^2/2} t^i`, the ket factor is bounded by its value at
/// `k |z|`, otherwise by 1. Then `\int_R^inf t^{m+1} e^{-a t^2/2} dt <=
/// R^m e^{-a R^2/2} / (a - m/R^2)` for `a R^2 > m`.
pub fn tail_bound(p: &SrPair, n: usize, radius: f64) -> f64 {
    let k = 1.0 / (p.s().norm() + p.r().norm());
    let lnf = ln_factorials(n);
    let r = radius;
    let mut worst: f64 = 0.0;
    for i in 0..n {
        let (a, ket_pow, ket_log) = if k * r >= (i as f64).sqrt() {
            (1.0 + k * k, i, i as f64 * k.ln() - 0.5 * lnf[i])
        } else {
            (1.0, 0, 0.0)
        };
        for j in 0..n {
            let m = (ket_pow + j) as f64;
            if a * r * r <= m {
                return f64::INFINITY;
            }
            let ln_tail = m * r.ln() - 0.5 * a * r * r - (a - m / (r * r)).ln();
            worst = worst.max((ket_log - 0.5 * lnf[j] + ln_tail).exp());
        }
    }
    2.0 * p.s().norm().sqrt() * worst
}

/// Result of the integral construction.
#[derive(Debug, Clone)]
pub struct IntegralOutcome {
    pub operator: FockOperator,
    /// Larger of the max-entry difference against the same rule with half
    /// the nodes and the [`tail_bound`] beyond the radius.
    pub error_estimate: f64,
}

/// `<n|w>` for `n < dim`: `e^{-|w|^2/2} w^n / sqrt(n!)`.
fn coherent_column(w: Complex64, dim: usize, out: &mut [Complex64]) {
    let mut cur = Complex64::new((-0.5 * w.norm_sqr()).exp(), 0.0);
    for (n, o) in out.iter_mut().enumerate().take(dim) {
        *o = cur;
        cur *= w / ((n + 1) as f64).sqrt();
    }
}

fn integrate(p: &SrPair, n: usize, quad: &PolarQuadrature) -> Array2<Complex64> {
    let (s, r) = (p.s(), p.r());
    let gl = GaussLegendre::new(NonZeroUsize::new(quad.radial_nodes).expect("validated"));
    let half = 0.5 * quad.radius;
    let dphi = 2.0 * PI / quad.angular_nodes as f64;
    let pairs = gl.as_node_weight_pairs();
    // One partial sum per radial node, then a fixed-order reduction.
    let partials: Vec<Array2<Complex64>> = pairs
        .par_iter()
        .map(|&(x, w)| {
            let rho = half * (x + 1.0);
            let weight = w * half * rho * dphi / PI;
            let mut acc = Array2::from_elem((n, n), ZERO);
            let mut ket = vec![ZERO; n];
            let mut bra = vec![ZERO; n];
            for k in 0..quad.angular_nodes {
                let z = Complex64::from_polar(rho, k as f64 * dphi);
                coherent_column(s * z - r * z.conj(), n, &mut ket);
                coherent_column(z, n, &mut bra);
                for (i, ki) in ket.iter().enumerate() {
                    let kw = ki * weight;
                    for (j, bj) in bra.iter().enumerate() {
                        acc[[i, j]] += kw * bj.conj();
                    }
                }
            }
            acc
        })
        .collect();
    let mut total = Array2::from_elem((n, n), ZERO);
    for part in &partials {
        total += part;
    }
    let pref = s.sqrt();
    total.mapv_inplace(|v| v * pref);
    total
}

/// Fresnel operator from the coherent-state integral, for `2 <= n <= 16`.
///
/// Fails with [`Error::QuadratureTolerance`] when the estimated error exceeds
/// `tolerance`.
pub fn fresnel_operator_integral(
    p: &SrPair,
    n: usize,
    quad: &PolarQuadrature,
    tolerance: f64,
) -> Result<IntegralOutcome> {
    if !(2..=16).contains(&n) {
        return invalid(format!("integral construction supports 2 <= N <= 16, got {n}"));
    }
    quad.validate()?;
    let fine = integrate(p, n, quad);
    let coarse = integrate(p, n, &quad.coarsened());
    let estimate = fine
        .iter()
        .zip(coarse.iter())
        .map(|(a, b)| (a - b).norm())
        .fold(0.0, f64::max)
        .max(tail_bound(p, n, quad.radius));
    if !(estimate <= tolerance) {
        return Err(Error::QuadratureTolerance {
            estimate,
            tolerance,
        });
    }
    Ok(IntegralOutcome {
        operator: FockOperator::new(fine)?,
        error_estimate: estimate,
    })
}

/// `<z|F(s,r)|z'>` in closed form, on the same branch as [`fresnel_operator`].
pub fn coherent_matrix_element(p: &SrPair, z: Complex64, zp: Complex64) -> Complex64 {
    let (s, r) = (p.s(), p.r());
    let sc = s.conj();
    let zc = z.conj();
    let expo = -0.5 * z.norm_sqr() - 0.5 * zp.norm_sqr() - r / (2.0 * sc) * zc * zc
        + r.conj() / (2.0 * sc) * zp * zp
        + zc * zp / sc;
    sc.sqrt().inv() * expo.exp()
}
