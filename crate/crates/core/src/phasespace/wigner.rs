use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use super::WignerGrid;
use crate::error::{Error, Result};
use crate::gridtransform::GridWavefunction;
use crate::spectral::ChirpZ;

/// Largest imaginary part tolerated before the Wigner sum is rejected.
pub const IMAGINARY_TOLERANCE: f64 = 1e-8;

/// `W(x, p) = (1/2pi) \int du e^{ipu} psi*(x + u/2) psi(x - u/2)` on the
/// state's own grid (`p_k = x_k`).
///
/// With `u = 2 m dx` each row is
/// `(dx/pi) sum_m psi*_{j+m} psi_{j-m} e^{2 i p_k m dx}`, a DFT on a
/// non-standard frequency grid evaluated by chirp-z.
pub fn wigner(psi: &GridWavefunction) -> Result<WignerGrid> {
    let grid = psi.grid();
    let n = grid.len();
    let dx = grid.step();
    let l = grid.half_width();
    let k_max = n - 1;
    let omega = 2.0 * dx * dx;
    let czt = ChirpZ::new(2 * n - 1, n, omega);
    let s = psi.samples();
    let zero = Complex64::new(0.0, 0.0);

    // e^{-i omega k K}, shared by all rows
    let shift: Vec<Complex64> = (0..n)
        .map(|k| Complex64::from_polar(1.0, -omega * (k * k_max) as f64))
        .collect();
    let offset: Vec<Complex64> = (0..2 * n - 1)
        .map(|q| {
            let m = q as f64 - k_max as f64;
            Complex64::from_polar(1.0, -2.0 * l * m * dx)
        })
        .collect();

    let rows: Vec<(Vec<f64>, f64)> = (0..n)
        .into_par_iter()
        .map(|j| {
            let mut input = vec![zero; 2 * n - 1];
            let reach = j.min(n - 1 - j);
            for m in -(reach as isize)..=(reach as isize) {
                let q = (m + k_max as isize) as usize;
                let plus = (j as isize + m) as usize;
                let minus = (j as isize - m) as usize;
                input[q] = s[plus].conj() * s[minus] * offset[q];
            }
            let out = czt.process(&input);
            let mut resid: f64 = 0.0;
            let vals = out
                .iter()
                .zip(&shift)
                .map(|(v, sh)| {
                    let w = v * sh * (dx / PI);
                    resid = resid.max(w.im.abs());
                    w.re
                })
                .collect();
            (vals, resid)
        })
        .collect();

    let residue = rows.iter().map(|r| r.1).fold(0.0, f64::max);
    if residue > IMAGINARY_TOLERANCE {
        return Err(Error::ImaginaryResidue(residue));
    }
    let values = rows.into_iter().flat_map(|r| r.0).collect();
    WignerGrid::new(grid, values)
}

/// `psi~(p) = (2 pi)^{-1/2} \int dx e^{-ipx} psi(x)` on `p_k = x_k`.
pub fn momentum_wavefunction(psi: &GridWavefunction) -> GridWavefunction {
    let grid = psi.grid();
    let n = grid.len();
    let dx = grid.step();
    let l = grid.half_width();
    // p_k x_j = L^2 - L dx (j + k) + dx^2 j k
    let input: Vec<Complex64> = psi
        .samples()
        .iter()
        .enumerate()
        .map(|(j, f)| f * grid.trapezoid_weight(j) * Complex64::from_polar(1.0, l * dx * j as f64))
        .collect();
    let out = ChirpZ::new(n, n, -dx * dx).process(&input);
    let norm = (2.0 * PI).sqrt().recip();
    let samples = out
        .iter()
        .enumerate()
        .map(|(k, v)| v * Complex64::from_polar(norm, l * dx * k as f64 - l * l))
        .collect();
    GridWavefunction::new(grid, samples).expect("same grid")
}

/// `sum_jk h_jk W_jk dx^2` for a symbol sampled on the Wigner grid (row-major).
pub fn weyl_expectation(w: &WignerGrid, h: &[f64]) -> Result<f64> {
    if h.len() != w.values().len() {
        return Err(Error::DimensionMismatch {
            expected: w.values().len(),
            got: h.len(),
        });
    }
    let d = w.grid().step();
    Ok(w.values().iter().zip(h).map(|(a, b)| a * b).sum::<f64>() * d * d)
}

/// [`weyl_expectation`] with the symbol given as a function of `(x, p)`.
pub fn weyl_expectation_fn(w: &WignerGrid, h: impl Fn(f64, f64) -> f64) -> f64 {
    let g = w.grid();
    let n = g.len();
    let d = g.step();
    w.values()
        .iter()
        .enumerate()
        .map(|(i, v)| v * h(g.x(i / n), g.x(i % n)))
        .sum::<f64>()
        * d
        * d
}
