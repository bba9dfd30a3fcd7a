//! Tomographic eigenstates `|x>_{s,r} = F(s,r)|x>` of `DX - BP` and their
//! momentum counterparts, eigenstates of `AP - CX`.
//!
//! Both are Gaussian exponentials `c0 exp(alpha a^dagger + beta a^dagger^2/2)|0>`
//! whose coefficients follow
//! `c_{n+1} = (alpha c_n + beta sqrt(n) c_{n-1}) / sqrt(n+1)`.
//! They are not normalizable: `|c_n|` decays only like `n^{-1/4}`, so the last
//! row of `(K - x) v` in truncation picks up `sqrt(N/2) |D + iB| |c_N|` from the
//! missing coefficient. [`eigen_residual`] reports that row separately.

use std::f64::consts::PI;

use log::warn;
use ndarray::Array2;
use num_complex::Complex64;
use rayon::prelude::*;

use super::{quadratures, FockOperator, FockVector};
use crate::error::{invalid, Result};
use crate::gridtransform::GridSpec;
use crate::phasespace::Quadrature;
use crate::symplectic::RayMatrix;

/// Eigenvalues are trusted for `|x| / sqrt(D^2 + B^2) <= TRUST_FACTOR sqrt(2N)`.
pub const TRUST_FACTOR: f64 = 0.7;

/// `TRUST_FACTOR * sqrt(2N)`, in units of the scaled eigenvalue.
pub fn trust_radius(n: usize) -> f64 {
    TRUST_FACTOR * (2.0 * n as f64).sqrt()
}

/// Length of the vector `(D, B)` (position) or `(A, C)` (momentum).
fn scale(m: &RayMatrix, q: Quadrature) -> f64 {
    match q {
        Quadrature::Position => m.d().hypot(m.b()),
        Quadrature::Momentum => m.a().hypot(m.c()),
    }
}

fn coefficients(m: &RayMatrix, value: f64, n: usize, q: Quadrature) -> Vec<Complex64> {
    let i = Complex64::i();
    let (den, num, alpha_num) = match q {
        // c0 ~ (D+iB)^{-1/2} exp(-(A-iC)/(D+iB) x^2/2), beta = -(D-iB)/(D+iB)
        Quadrature::Position => {
            let den = Complex64::new(m.d(), m.b());
            (den, Complex64::new(m.a(), -m.c()), Complex64::new(2f64.sqrt() * value, 0.0))
        }
        // c0 ~ (A-iC)^{-1/2} exp(-(D+iB)/(A-iC) p^2/2), beta = (A+iC)/(A-iC)
        Quadrature::Momentum => {
            let den = Complex64::new(m.a(), -m.c());
            (den, Complex64::new(m.d(), m.b()), i * 2f64.sqrt() * value)
        }
    };
    let beta = match q {
        Quadrature::Position => -den.conj() / den,
        Quadrature::Momentum => den.conj() / den,
    };
    let alpha = alpha_num / den;
    let c0 = PI.powf(-0.25) * den.sqrt().inv() * (-num / den * (0.5 * value * value)).exp();

    let mut c = Vec::with_capacity(n);
    c.push(c0);
    if n > 1 {
        c.push(alpha * c0);
    }
    for k in 1..n.saturating_sub(1) {
        let kf = k as f64;
        let next = (alpha * c[k] + beta * kf.sqrt() * c[k - 1]) / (kf + 1.0).sqrt();
        c.push(next);
    }
    c
}

/// Eigenstate of `DX - BP` (position) or `AP - CX` (momentum) with the given
/// eigenvalue, truncated to `n >= 2` coefficients.
pub fn eigenstate(m: &RayMatrix, value: f64, n: usize, q: Quadrature) -> Result<FockVector> {
    if n < 2 {
        return invalid(format!("eigenstates need N >= 2, got {n}"));
    }
    if !value.is_finite() {
        return invalid("eigenvalue must be finite");
    }
    let scaled = value.abs() / scale(m, q);
    if scaled > trust_radius(n) {
        warn!(
            "eigenvalue {value} lies outside the truncation trust region (|x|/{:.3} = {scaled:.3} > {:.3} for N = {n})",
            scale(m, q),
            trust_radius(n)
        );
    }
    FockVector::new(coefficients(m, value, n, q))
}

/// `|x>_{s,r}`: eigenstate of `DX - BP`.
pub fn tomo_eigenstate(m: &RayMatrix, x: f64, n: usize) -> Result<FockVector> {
    eigenstate(m, x, n, Quadrature::Position)
}

/// Eigenstate of `AP - CX`.
pub fn momentum_eigenstate(m: &RayMatrix, p: f64, n: usize) -> Result<FockVector> {
    eigenstate(m, p, n, Quadrature::Momentum)
}

/// `DX - BP` or `AP - CX` as a truncated matrix.
pub fn tomographic_quadrature(m: &RayMatrix, n: usize, q: Quadrature) -> Result<FockOperator> {
    let (x, p) = quadratures(n)?;
    let re = |v: f64| Complex64::new(v, 0.0);
    Ok(match q {
        Quadrature::Position => &x.scaled(re(m.d())) - &p.scaled(re(m.b())),
        Quadrature::Momentum => &p.scaled(re(m.a())) - &x.scaled(re(m.c())),
    })
}

/// Residual of the eigen-relation in truncation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenResidual {
    /// 2-norm of `(K - value) v` over rows `0..N-1`.
    pub interior: f64,
    /// Magnitude of the last row, where the missing `c_N` enters.
    pub boundary: f64,
}

pub fn eigen_residual(
    m: &RayMatrix,
    value: f64,
    v: &FockVector,
    q: Quadrature,
) -> Result<EigenResidual> {
    let k = tomographic_quadrature(m, v.dim(), q)?;
    let kv = k.apply(v)?;
    let n = v.dim();
    let rows: Vec<f64> = kv
        .as_slice()
        .iter()
        .zip(v.as_slice())
        .map(|(a, b)| (a - b * value).norm())
        .collect();
    Ok(EigenResidual {
        interior: rows[..n - 1].iter().map(|r| r * r).sum::<f64>().sqrt(),
        boundary: rows[n - 1],
    })
}

/// A grid adequate for [`completeness_defect`]: wide enough for the
/// leading `N/2` coefficients and fine enough to resolve their oscillation.
pub fn completeness_grid(m: &RayMatrix, n: usize) -> GridSpec {
    let j = scale(m, Quadrature::Position);
    let k = (n / 2).max(1);
    let half = j * ((2.0 * k as f64 + 1.0).sqrt() + 6.0);
    let step = 0.05 * j;
    let points = ((2.0 * half / step).ceil() as usize + 1).max(64);
    GridSpec::new(half, points).expect("positive extent")
}

/// `|| \int dx |x>_{s,r} <x|_{s,r} - I ||_max` over the leading `N/2` block,
/// with the integral done by the trapezoid rule on `grid`.
pub fn completeness_defect(m: &RayMatrix, n: usize, grid: &GridSpec) -> Result<f64> {
    if n < 2 {
        return invalid(format!("completeness needs N >= 2, got {n}"));
    }
    let k = n / 2;
    let j = scale(m, Quadrature::Position);
    let needed = j * ((2.0 * k as f64 + 1.0).sqrt() + 4.0);
    if grid.half_width() < needed {
        warn!(
            "grid half-width {} is below {needed:.2}; completeness integral will be truncated",
            grid.half_width()
        );
    }
    let partial: Vec<Array2<Complex64>> = (0..grid.len())
        .into_par_iter()
        .chunks(64)
        .map(|idx| {
            let mut acc = Array2::from_elem((k, k), Complex64::new(0.0, 0.0));
            for jx in idx {
                let c = coefficients(m, grid.x(jx), k, Quadrature::Position);
                let w = grid.trapezoid_weight(jx);
                for a in 0..k {
                    let ca = c[a] * w;
                    for b in 0..k {
                        acc[[a, b]] += ca * c[b].conj();
                    }
                }
            }
            acc
        })
        .collect();
    let mut total = Array2::from_elem((k, k), Complex64::new(0.0, 0.0));
    for p in &partial {
        total += p;
    }
    let op = FockOperator::new(total)?;
    Ok(op.identity_defect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fockspace::hermite_functions;
    use crate::symplectic::Elementary;

    #[test]
    fn identity_reduces_to_position_ket() {
        for &x in &[0.0, 1.0, -2.2] {
            let v = tomo_eigenstate(&RayMatrix::IDENTITY, x, 64).unwrap();
            let h = hermite_functions(x, 64);
            for (c, h) in v.as_slice().iter().zip(&h) {
                assert!((c - Complex64::new(*h, 0.0)).norm() < 1e-8);
            }
        }
        let v = tomo_eigenstate(&RayMatrix::IDENTITY, 0.0, 16).unwrap();
        for (n, c) in v.as_slice().iter().enumerate() {
            if n % 2 == 1 {
                assert_eq!(c.norm(), 0.0);
            }
        }
    }

    #[test]
    fn momentum_ket_at_identity() {
        // <n|p> = i^n h_n(p)
        let p = 0.8;
        let v = momentum_eigenstate(&RayMatrix::IDENTITY, p, 32).unwrap();
        let h = hermite_functions(p, 32);
        let mut phase = Complex64::new(1.0, 0.0);
        for (c, h) in v.as_slice().iter().zip(&h) {
            assert!((c - phase * *h).norm() < 1e-12);
            phase *= Complex64::i();
        }
        let v0 = momentum_eigenstate(&RayMatrix::IDENTITY, 0.0, 16).unwrap();
        assert!(v0.as_slice().iter().skip(1).step_by(2).all(|c| c.norm() == 0.0));
    }

    #[test]
    fn plane_wave_overlap() {
        // <p|x> = e^{-ipx} / sqrt(2 pi) is reached only slowly: the truncated
        // sum oscillates around it with an O(N^{-1/2}) error
        let (x, p) = (0.5, 0.3);
        let want = (2.0 * PI).sqrt().recip();
        let raw = |n| {
            let kx = tomo_eigenstate(&RayMatrix::IDENTITY, x, n).unwrap();
            let kp = momentum_eigenstate(&RayMatrix::IDENTITY, p, n).unwrap();
            kp.inner(&kx).unwrap()
        };
        assert!((raw(128).norm() - want).abs() > 1e-3);
        // a smooth window over n restores fast convergence
        let n = 512;
        let kx = tomo_eigenstate(&RayMatrix::IDENTITY, x, n).unwrap();
        let kp = momentum_eigenstate(&RayMatrix::IDENTITY, p, n).unwrap();
        let windowed: Complex64 = (0..n)
            .map(|k| {
                let t = k as f64 / n as f64;
                kp.as_slice()[k].conj() * kx.as_slice()[k] * (1.0 - 1.0 / (1.0 - t * t)).exp()
            })
            .sum();
        let exact = Complex64::from_polar(want, -p * x);
        assert!((windowed - exact).norm() < 1e-5, "{windowed}");
    }

    #[test]
    fn residual_examples() {
        let free = Elementary::Free(1.0).to_matrix().unwrap();
        let v = tomo_eigenstate(&free, 0.5, 128).unwrap();
        let r = eigen_residual(&free, 0.5, &v, Quadrature::Position).unwrap();
        assert!(r.interior < 1e-6, "{r:?}");

        // boundary row is exactly the missing-coefficient term
        let longer = tomo_eigenstate(&free, 0.5, 129).unwrap();
        let predicted = (64.0f64).sqrt() * free.d().hypot(free.b()) * longer.as_slice()[128].norm();
        assert!((r.boundary - predicted).abs() < 1e-10 * predicted.max(1.0));

        let lens = Elementary::Lens(0.5).to_matrix().unwrap();
        let v = momentum_eigenstate(&lens, 0.3, 128).unwrap();
        let r = eigen_residual(&lens, 0.3, &v, Quadrature::Momentum).unwrap();
        assert!(r.interior < 1e-6, "{r:?}");
    }

    #[test]
    fn completeness_examples() {
        let cases = [
            (RayMatrix::IDENTITY, 1e-6),
            (Elementary::Rotation(PI / 3.0).to_matrix().unwrap(), 1e-6),
            (Elementary::Free(1.0).to_matrix().unwrap(), 1e-5),
        ];
        for (m, tol) in cases {
            let grid = completeness_grid(&m, 64);
            let d = completeness_defect(&m, 64, &grid).unwrap();
            assert!(d < tol, "{m}: {d}");
        }
    }

    #[test]
    fn short_dimension_rejected() {
        assert!(tomo_eigenstate(&RayMatrix::IDENTITY, 0.0, 1).is_err());
        assert!(tomo_eigenstate(&RayMatrix::IDENTITY, f64::NAN, 8).is_err());
    }
}
