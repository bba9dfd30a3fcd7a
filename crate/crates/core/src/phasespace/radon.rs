//! Radon transforms of Wigner functions and the Fresnel route to the same
//! distributions.
//!
//! Position type: `R(x) = \int\int W(x', p') delta(x - (D x' - B p')) dx' dp'`.
//! With `J = D^2 + B^2`, the line `D x' - B p' = x` is
//! `(x', p') = x (D, -B)/J + s (B, D)/sqrt(J)` and `R(x) = J^{-1/2} \int W ds`.
//! Momentum type uses `A p' - C x' = p`: `(x', p') = p (-C, A)/J + s (A, C)/sqrt(J)`
//! with `J = A^2 + C^2`. The arclength `s` is sampled on the grid lattice
//! `-L + i dx`, so axis-aligned lines hit grid nodes exactly.

use log::warn;
use num_complex::Complex64;
use rayon::prelude::*;

use super::{wigner, Quadrature, TomogramCurve, WignerGrid};
use crate::error::Result;
use crate::fockspace::{fock_to_grid, grid_to_fock};
use crate::gridtransform::{apply_fresnel_adjoint, fresnel_transform, GridWavefunction};
use crate::interp::Interpolation;
use crate::symplectic::{Elementary, RayMatrix};

struct Line {
    normal: (f64, f64),
    tangent: (f64, f64),
    jac: f64,
}

impl Line {
    fn new(m: &RayMatrix, mode: Quadrature) -> Line {
        let (normal, dir) = match mode {
            Quadrature::Position => ((m.d(), -m.b()), (m.b(), m.d())),
            Quadrature::Momentum => ((-m.c(), m.a()), (m.a(), m.c())),
        };
        let jac = dir.0 * dir.0 + dir.1 * dir.1;
        assert!(jac > 0.0, "line direction vanishes; matrix is not unimodular");
        let r = jac.sqrt();
        Line {
            normal,
            tangent: (dir.0 / r, dir.1 / r),
            jac,
        }
    }

    /// Interval of `s` where the line at offset `u` stays in the box.
    fn clip(&self, u: f64, bx: &[(f64, f64); 2]) -> Option<(f64, f64)> {
        let base = (u * self.normal.0 / self.jac, u * self.normal.1 / self.jac);
        let mut lo = f64::NEG_INFINITY;
        let mut hi = f64::INFINITY;
        for ((b, t), (bl, bh)) in [(base.0, self.tangent.0), (base.1, self.tangent.1)].into_iter().zip(bx) {
            if t.abs() < 1e-300 {
                if b < *bl || b > *bh {
                    return None;
                }
            } else {
                let (a, c) = ((bl - b) / t, (bh - b) / t);
                lo = lo.max(a.min(c));
                hi = hi.min(a.max(c));
            }
        }
        (lo <= hi).then_some((lo, hi))
    }

    fn integrate(&self, w: &WignerGrid, bx: &[(f64, f64); 2], u: f64, kind: Interpolation) -> f64 {
        let g = w.grid();
        let (l, dx) = (g.half_width(), g.step());
        let Some((lo, hi)) = self.clip(u, bx) else {
            return 0.0;
        };
        let first = ((lo + l) / dx).ceil() as i64;
        let last = ((hi + l) / dx).floor() as i64;
        let base = (u * self.normal.0 / self.jac, u * self.normal.1 / self.jac);
        let mut acc = 0.0;
        for i in first..=last {
            let s = -l + i as f64 * dx;
            acc += w.value_at_with(base.0 + s * self.tangent.0, base.1 + s * self.tangent.1, kind);
        }
        acc * dx / self.jac.sqrt()
    }
}

/// Entries below this fraction of `max |W|` are treated as zero when
/// clipping the lines; it sits above the FFT roundoff floor.
const SUPPORT_THRESHOLD: f64 = 1e-13;

/// Region of phase space the line integrals have to visit: the support of
/// `W` padded by the interpolation stencil.
fn support_region(w: &WignerGrid) -> Option<[(f64, f64); 2]> {
    let g = w.grid();
    let peak = w.values().iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let bx = w.support_box(SUPPORT_THRESHOLD * peak)?;
    let pad = |(lo, hi): (usize, usize)| (g.x(lo.saturating_sub(3)), g.x((hi + 3).min(g.len() - 1)));
    Some([pad(bx[0]), pad(bx[1])])
}

/// Radon transform of `w` along the position (`D, B`) or momentum (`A, C`)
/// line family, sampled at `abscissas`.
pub fn radon_with(
    w: &WignerGrid,
    m: &RayMatrix,
    abscissas: &[f64],
    mode: Quadrature,
    kind: Interpolation,
) -> Result<TomogramCurve> {
    warn_on_border(w);
    radon_quiet(w, m, abscissas, mode, kind)
}

pub(crate) fn warn_on_border(w: &WignerGrid) {
    let border = w.border_max();
    if border > 1e-8 {
        warn!("Wigner function reaches {border:.2e} on the grid boundary; line integrals are truncated");
    }
}

/// [`radon_with`] without the boundary warning.
pub(crate) fn radon_quiet(
    w: &WignerGrid,
    m: &RayMatrix,
    abscissas: &[f64],
    mode: Quadrature,
    kind: Interpolation,
) -> Result<TomogramCurve> {
    let line = Line::new(m, mode);
    let values = match support_region(w) {
        Some(bx) => abscissas
            .par_iter()
            .map(|&u| line.integrate(w, &bx, u, kind))
            .collect(),
        None => vec![0.0; abscissas.len()],
    };
    TomogramCurve::new(abscissas.to_vec(), values, *m, mode)
}

/// [`radon_with`] using bicubic interpolation.
pub fn radon(w: &WignerGrid, m: &RayMatrix, abscissas: &[f64], mode: Quadrature) -> Result<TomogramCurve> {
    radon_with(w, m, abscissas, mode, Interpolation::Cubic)
}

/// Distribution of `DX - BP` from the Wigner function.
pub fn radon_position(w: &WignerGrid, m: &RayMatrix, xs: &[f64]) -> Result<TomogramCurve> {
    radon(w, m, xs, Quadrature::Position)
}

/// Distribution of `AP - CX` from the Wigner function.
pub fn radon_momentum(w: &WignerGrid, m: &RayMatrix, ps: &[f64]) -> Result<TomogramCurve> {
    radon(w, m, ps, Quadrature::Momentum)
}

/// `|<x|F^dagger|psi>|^2` (position) or the momentum density of `F^dagger psi`,
/// on the wavefunction's grid.
///
/// The momentum wavefunction of `F^dagger psi` is evaluated as one transform
/// with the composite `Q M^{-1}`, `Q = (0, 1, -1, 0)` the Fourier matrix, so
/// `F^dagger psi` is never truncated to the grid in between: a wide output
/// would otherwise ring in momentum space.
pub fn tomogram_via_fresnel(
    psi: &GridWavefunction,
    m: &RayMatrix,
    mode: Quadrature,
) -> Result<TomogramCurve> {
    let density = match mode {
        Quadrature::Position => apply_fresnel_adjoint(m, psi).density(),
        Quadrature::Momentum => fresnel_transform(&(RayMatrix::FOURIER * m.inverse()), psi).density(),
    };
    TomogramCurve::new(psi.grid().xs(), density, *m, mode)
}

/// Max deviation between the Fresnel tomogram and the Radon transform of
/// the Wigner function on the grid abscissas.
pub fn central_identity_check(psi: &GridWavefunction, m: &RayMatrix, mode: Quadrature) -> Result<f64> {
    let w = wigner(psi)?;
    central_identity_check_with(psi, &w, m, mode)
}

/// [`central_identity_check`] with a precomputed Wigner grid.
pub fn central_identity_check_with(
    psi: &GridWavefunction,
    w: &WignerGrid,
    m: &RayMatrix,
    mode: Quadrature,
) -> Result<f64> {
    let fresnel = tomogram_via_fresnel(psi, m, mode)?;
    let radon = radon(w, m, fresnel.abscissas(), mode)?;
    Ok(fresnel.max_abs_diff(&radon))
}

/// Homodyne distribution of `X cos(theta) - P sin(theta)` by fractional
/// Fourier transform: rotate the Fock coefficients by `e^{i n theta}` and
/// resynthesize on the grid.
pub fn rotated_quadrature_density(
    psi: &GridWavefunction,
    theta: f64,
    fock_dim: usize,
) -> Result<TomogramCurve> {
    let c = grid_to_fock(psi, fock_dim);
    let rotated: Vec<Complex64> = c
        .as_slice()
        .iter()
        .enumerate()
        .map(|(n, v)| v * Complex64::from_polar(1.0, n as f64 * theta))
        .collect();
    let phi = fock_to_grid(&crate::fockspace::FockVector::new(rotated)?, &psi.grid());
    TomogramCurve::new(
        psi.grid().xs(),
        phi.density(),
        Elementary::Rotation(theta).to_matrix()?,
        Quadrature::Position,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gridtransform::GridSpec;
    use crate::states::{analytic_wigner, make_state_grid, StateSpec};
    use std::f64::consts::PI;

    fn gaussian(x: f64, var: f64) -> f64 {
        (-x * x / (2.0 * var)).exp() / (2.0 * PI * var).sqrt()
    }

    #[test]
    fn identity_gives_marginals() {
        let grid = GridSpec::default();
        let psi = make_state_grid(&StateSpec::Fock { n: 2 }, &grid).unwrap();
        let w = wigner(&psi).unwrap();
        let xs = grid.xs();
        let r = radon_position(&w, &RayMatrix::IDENTITY, &xs).unwrap();
        for (a, b) in r.values().iter().zip(w.position_marginal()) {
            assert!((a - b).abs() < 1e-12);
        }
        let r = radon_momentum(&w, &RayMatrix::IDENTITY, &xs).unwrap();
        for (a, b) in r.values().iter().zip(w.momentum_marginal()) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn vacuum_lines_are_gaussian() {
        let grid = GridSpec::default();
        let w = analytic_wigner(&StateSpec::Vacuum, &grid).unwrap();
        let m = RayMatrix::new(0.9, 1.3, -0.2, (1.0 - 1.3 * 0.2) / 0.9).unwrap();
        let xs: Vec<f64> = (-40..=40).map(|i| i as f64 * 0.1).collect();
        let r = radon_position(&w, &m, &xs).unwrap();
        let var = 0.5 * (m.d().powi(2) + m.b().powi(2));
        for (x, t) in xs.iter().zip(r.values()) {
            assert!((t - gaussian(*x, var)).abs() < 1e-7, "{x}");
        }
        let r = radon_momentum(&w, &m, &xs).unwrap();
        let var = 0.5 * (m.a().powi(2) + m.c().powi(2));
        for (x, t) in xs.iter().zip(r.values()) {
            assert!((t - gaussian(*x, var)).abs() < 1e-7, "{x}");
        }
    }

    #[test]
    fn momentum_rotation_is_relabeled_position() {
        let grid = GridSpec::default();
        let w = analytic_wigner(&"coherent:0.7,0.4".parse().unwrap(), &grid).unwrap();
        let xs: Vec<f64> = (-30..=30).map(|i| i as f64 * 0.1).collect();
        let th = 0.6;
        let a = radon_momentum(&w, &Elementary::Rotation(th).to_matrix().unwrap(), &xs).unwrap();
        let b = radon_position(&w, &Elementary::Rotation(th - PI / 2.0).to_matrix().unwrap(), &xs).unwrap();
        assert!(a.max_abs_diff(&b) < 1e-10);
    }

    #[test]
    fn sequential_lines() {
        // the (D, B) of M M' are (B'C + DD', AB' + BD')
        let grid = GridSpec::default();
        let w = analytic_wigner(&"cat:1.2".parse().unwrap(), &grid).unwrap();
        let m = RayMatrix::new(1.1, 0.4, -0.5, (1.0 - 0.2) / 1.1).unwrap();
        let mp = Elementary::Rotation(0.8).to_matrix().unwrap();
        let prod = m * mp;
        let (d2, b2) = (mp.b() * m.c() + m.d() * mp.d(), m.a() * mp.b() + m.b() * mp.d());
        assert!((prod.d() - d2).abs() < 1e-14 && (prod.b() - b2).abs() < 1e-14);
        let xs: Vec<f64> = (-30..=30).map(|i| i as f64 * 0.1).collect();
        let a = radon_position(&w, &prod, &xs).unwrap();
        // any matrix sharing (D, B) gives the same curve
        let other = RayMatrix::new((1.0 + b2 * 0.3) / d2, b2, 0.3, d2).unwrap();
        let b = radon_position(&w, &other, &xs).unwrap();
        assert!(a.max_abs_diff(&b) < 1e-13);
    }

    #[test]
    fn central_identity_examples() {
        let grid = GridSpec::default();
        let vac = make_state_grid(&StateSpec::Vacuum, &grid).unwrap();
        let free = Elementary::Free(1.0).to_matrix().unwrap();
        assert!(central_identity_check(&vac, &free, Quadrature::Position).unwrap() < 1e-5);

        let f3 = make_state_grid(&StateSpec::Fock { n: 3 }, &grid).unwrap();
        let rot = Elementary::Rotation(1.1).to_matrix().unwrap();
        assert!(central_identity_check(&f3, &rot, Quadrature::Position).unwrap() < 1e-4);

        let cat = make_state_grid(&"cat:2".parse().unwrap(), &grid).unwrap();
        let m = RayMatrix::normalized(1.0, 1.5, 0.4, 1.6).unwrap();
        assert!(central_identity_check(&cat, &m, Quadrature::Position).unwrap() < 1e-4);
        assert!(central_identity_check(&cat, &m, Quadrature::Momentum).unwrap() < 1e-4);
    }

    #[test]
    fn fresnel_tomogram_moments() {
        let grid = GridSpec::default();
        let vac = make_state_grid(&StateSpec::Vacuum, &grid).unwrap();
        let q = RayMatrix::new(0.0, 1.0, -1.0, 0.0).unwrap();
        let t = tomogram_via_fresnel(&vac, &q, Quadrature::Position).unwrap();
        assert!((t.variance() - 0.5).abs() < 1e-8);

        let coh = make_state_grid(&"coherent:1".parse().unwrap(), &grid).unwrap();
        let th = 0.785;
        let t = tomogram_via_fresnel(&coh, &Elementary::Rotation(th).to_matrix().unwrap(), Quadrature::Position).unwrap();
        assert!((t.mean() - th.cos() * 2f64.sqrt()).abs() < 1e-8);
        assert!((t.variance() - 0.5).abs() < 1e-8);
        assert!((t.integral() - 1.0).abs() < 1e-8);
    }

    #[test]
    fn fractional_fourier_route() {
        let grid = GridSpec::default();
        let psi = make_state_grid(&"coherent:0.6,0.3".parse().unwrap(), &grid).unwrap();
        let w = wigner(&psi).unwrap();
        for th in [0.0, PI / 6.0, PI / 2.0] {
            let a = rotated_quadrature_density(&psi, th, 96).unwrap();
            let b = radon_position(&w, &a.matrix(), &grid.xs()).unwrap();
            assert!(a.max_abs_diff(&b) < 1e-5, "{th}");
        }
    }
}
