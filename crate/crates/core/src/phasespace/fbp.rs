//! Filtered back-projection for the rotation family `M = rotation(theta)`,
//! whose curves are distributions of `X cos(theta) - P sin(theta)`.

use std::f64::consts::PI;

use log::warn;
use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::FftPlanner;

use super::radon::{radon_quiet, warn_on_border};
use super::{TomogramCurve, WignerGrid};
use crate::error::{invalid, Result};
use crate::gridtransform::GridSpec;
use crate::interp::{interp_real, Axis, Interpolation};
use crate::phasespace::Quadrature;
use crate::symplectic::Elementary;

/// Fewest angles accepted.
pub const MIN_ANGLES: usize = 8;

/// Radon curves at `theta_i = i pi / m`, `i = 0..m`.
pub fn rotation_sinogram(w: &WignerGrid, m: usize, abscissas: &[f64]) -> Result<Vec<TomogramCurve>> {
    warn_on_border(w);
    (0..m)
        .map(|i| {
            let th = i as f64 * PI / m as f64;
            let rot = Elementary::Rotation(th).to_matrix()?;
            radon_quiet(w, &rot, abscissas, Quadrature::Position, Interpolation::Cubic)
        })
        .collect()
}

/// Ram-Lak filter with Hann apodization, applied by zero-padded FFT.
fn ramp_filter(values: &[f64], step: f64) -> Vec<f64> {
    let n = values.len();
    let len = (2 * n).next_power_of_two();
    let mut planner = FftPlanner::new();
    let fwd = planner.plan_fft_forward(len);
    let inv = planner.plan_fft_inverse(len);

    // spatial band-limited ramp: 1/(4h^2) at 0, -1/(pi k h)^2 at odd k
    let mut kernel = vec![Complex64::new(0.0, 0.0); len];
    kernel[0] = Complex64::new(0.25 / (step * step), 0.0);
    for k in (1..n).step_by(2) {
        let v = -1.0 / (PI * k as f64 * step).powi(2);
        kernel[k] = Complex64::new(v, 0.0);
        kernel[len - k] = Complex64::new(v, 0.0);
    }
    fwd.process(&mut kernel);

    let mut buf: Vec<Complex64> = values.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    buf.resize(len, Complex64::new(0.0, 0.0));
    fwd.process(&mut buf);
    for (i, (b, k)) in buf.iter_mut().zip(&kernel).enumerate() {
        // |f| / f_nyquist
        let frac = if i <= len / 2 { i } else { len - i } as f64 * 2.0 / len as f64;
        let hann = 0.5 * (1.0 + (PI * frac).cos());
        *b *= k * hann;
    }
    inv.process(&mut buf);
    let scale = step / len as f64;
    buf[..n].iter().map(|v| v.re * scale).collect()
}

/// Reconstructs the Wigner function on `out` from rotation-family position
/// curves covering a half turn.
pub fn inverse_radon_fbp(curves: &[TomogramCurve], out: &GridSpec) -> Result<WignerGrid> {
    let m = curves.len();
    if m < MIN_ANGLES {
        return invalid(format!("filtered back-projection needs at least {MIN_ANGLES} angles, got {m}"));
    }
    if m < 32 {
        warn!("only {m} angles; expect streak artifacts below 32");
    }
    let mut angles = Vec::with_capacity(m);
    let mut filtered = Vec::with_capacity(m);
    for c in curves {
        if c.mode() != Quadrature::Position {
            return invalid("back-projection expects position-type curves");
        }
        let Some(theta) = c.matrix().rotation_angle(1e-9) else {
            return invalid(format!("curve matrix {} is not a rotation", c.matrix()));
        };
        let Some(step) = c.uniform_step() else {
            return invalid("back-projection needs uniformly spaced abscissas");
        };
        angles.push(theta);
        let axis = Axis {
            origin: c.abscissas()[0],
            step,
            len: c.len(),
        };
        filtered.push((axis, ramp_filter(c.values(), step)));
    }
    check_coverage(&angles);

    let trig: Vec<(f64, f64)> = angles.iter().map(|t| (t.cos(), t.sin())).collect();
    let n = out.len();
    let weight = PI / m as f64;
    let values: Vec<f64> = (0..n * n)
        .into_par_iter()
        .with_min_len(n)
        .map(|i| {
            let (x, p) = (out.x(i / n), out.x(i % n));
            let mut acc = 0.0;
            for ((cs, sn), (axis, q)) in trig.iter().zip(&filtered) {
                acc += interp_real(q, *axis, x * cs - p * sn, Interpolation::Linear);
            }
            acc * weight
        })
        .collect();
    WignerGrid::new(*out, values)
}

/// Warns unless the angles, reduced mod pi, are evenly spaced.
fn check_coverage(angles: &[f64]) {
    let m = angles.len();
    let mut red: Vec<f64> = angles.iter().map(|t| t.rem_euclid(PI)).collect();
    red.sort_by(f64::total_cmp);
    let gap = PI / m as f64;
    let uneven = red
        .windows(2)
        .map(|w| w[1] - w[0])
        .chain(std::iter::once(red[0] + PI - red[m - 1]))
        .any(|d| (d - gap).abs() > 1e-6);
    if uneven {
        warn!("rotation angles do not cover [0, pi) uniformly; reconstruction will be biased");
    }
}
