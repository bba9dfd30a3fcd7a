//! Hermite-function synthesis and analysis between Fock coefficients and
//! grid samples.

use log::warn;
use ndarray::Array2;
use num_complex::Complex64;
use rayon::prelude::*;

use super::FockVector;
use crate::gridtransform::{GridSpec, GridWavefunction};

const RESCALE: f64 = 1e150;

/// Orthonormal Hermite functions `h_0(x) .. h_{n-1}(x)`.
///
/// The recursion runs on rescaled values so that `h_0` underflowing far in
/// the tail does not zero out higher orders.
pub fn hermite_functions(x: f64, n: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(n);
    if n == 0 {
        return out;
    }
    // h_k = v_k * exp(log_scale)
    let mut log_scale = -0.5 * x * x - 0.25 * std::f64::consts::PI.ln();
    let (mut prev, mut cur) = (0.0, 1.0);
    let mut logs = Vec::with_capacity(n);
    let mut vals = Vec::with_capacity(n);
    for k in 0..n {
        vals.push(cur);
        logs.push(log_scale);
        let kf = k as f64;
        let next = (2.0 / (kf + 1.0)).sqrt() * x * cur - (kf / (kf + 1.0)).sqrt() * prev;
        prev = cur;
        cur = next;
        if cur.abs() > RESCALE {
            cur /= RESCALE;
            prev /= RESCALE;
            log_scale += RESCALE.ln();
        }
    }
    for (v, l) in vals.into_iter().zip(logs) {
        out.push(if v == 0.0 { 0.0 } else { v * l.exp() });
    }
    out
}

/// `table[[j, n]] = h_n(x_j)`.
pub fn hermite_table(grid: &GridSpec, n: usize) -> Array2<f64> {
    let rows: Vec<Vec<f64>> = (0..grid.len())
        .into_par_iter()
        .map(|j| hermite_functions(grid.x(j), n))
        .collect();
    let mut t = Array2::zeros((grid.len(), n));
    for (j, r) in rows.into_iter().enumerate() {
        for (k, v) in r.into_iter().enumerate() {
            t[[j, k]] = v;
        }
    }
    t
}

/// `psi(x_j) = sum_n c_n h_n(x_j)`.
pub fn fock_to_grid(v: &FockVector, grid: &GridSpec) -> GridWavefunction {
    let table = hermite_table(grid, v.dim());
    let c = v.as_slice();
    let samples: Vec<Complex64> = table
        .outer_iter()
        .map(|row| row.iter().zip(c).map(|(h, c)| c * *h).sum())
        .collect();
    let psi = GridWavefunction::new(*grid, samples).expect("grid length");
    if psi.edge_amplitude() > 1e-8 {
        warn!(
            "Hermite synthesis leaves amplitude {:.2e} at the grid edge x = +-{}; widen the grid",
            psi.edge_amplitude(),
            grid.half_width()
        );
    }
    psi
}

/// `c_n = sum_j w_j h_n(x_j) psi(x_j)` with trapezoid weights.
pub fn grid_to_fock(psi: &GridWavefunction, n: usize) -> FockVector {
    let grid = psi.grid();
    if psi.edge_amplitude() > 1e-8 {
        warn!(
            "wavefunction amplitude {:.2e} at the grid edge; Fock analysis will be truncated",
            psi.edge_amplitude()
        );
    }
    let needed = (2.0 * n as f64 + 1.0).sqrt();
    if std::f64::consts::PI / grid.step() < needed {
        warn!("grid step {} cannot resolve h_{} ", grid.step(), n - 1);
    }
    let table = hermite_table(&grid, n);
    let mut c = vec![Complex64::new(0.0, 0.0); n.max(1)];
    for (j, (row, f)) in table.outer_iter().zip(psi.samples()).enumerate() {
        let wf = f * grid.trapezoid_weight(j);
        for (ck, h) in c.iter_mut().zip(row.iter()) {
            *ck += wf * *h;
        }
    }
    FockVector::new(c).expect("finite coefficients")
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn low_orders_match_closed_forms() {
        for &x in &[-2.3, 0.0, 0.7, 4.1] {
            let h = hermite_functions(x, 4);
            let g = PI.powf(-0.25) * (-0.5 * x * x).exp();
            assert!((h[0] - g).abs() < 1e-15);
            assert!((h[1] - g * 2f64.sqrt() * x).abs() < 1e-14);
            assert!((h[2] - g * (2.0 * x * x - 1.0) / 2f64.sqrt()).abs() < 1e-14);
            assert!((h[3] - g * (2.0 * x * x * x - 3.0 * x) / 3f64.sqrt()).abs() < 1e-13);
        }
    }

    #[test]
    fn deep_tail_does_not_underflow_high_orders() {
        // h_n(x) near its turning point sqrt(2n+1) is O(n^{-1/12}) even when h_0 underflows.
        let n = 1200;
        let x = (2.0 * n as f64).sqrt() - 1.0;
        assert!((-0.5 * x * x).exp() == 0.0);
        let h = hermite_functions(x, n);
        assert!(h[n - 1].abs() > 1e-3, "{}", h[n - 1]);
        assert!(h.iter().all(|v| v.is_finite()));
    }

    #[test]
    fn vacuum_synthesis() {
        let grid = GridSpec::default();
        let v = FockVector::basis(0, 4).unwrap();
        let psi = fock_to_grid(&v, &grid);
        for j in 0..grid.len() {
            let x = grid.x(j);
            let want = PI.powf(-0.25) * (-0.5 * x * x).exp();
            assert!((psi.samples()[j] - Complex64::new(want, 0.0)).norm() < 1e-15);
        }
    }

    #[test]
    fn orthonormality_on_default_grid() {
        let grid = GridSpec::new(14.0, 1024).unwrap();
        let t = hermite_table(&grid, 48);
        for m in 0..48 {
            for n in 0..48 {
                let s: f64 = (0..grid.len()).map(|j| grid.trapezoid_weight(j) * t[[j, m]] * t[[j, n]]).sum();
                let expect = if m == n { 1.0 } else { 0.0 };
                assert!((s - expect).abs() < 1e-12, "{m} {n} {s}");
            }
        }
    }
}
