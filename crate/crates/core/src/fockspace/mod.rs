//! Truncated Fock space: state vectors, operator matrices, the Fresnel
//! operator and tomographic eigenstates.
//!
//! All matrices act on `span{|0>, ..., |N-1>}`. Identities that need the
//! missing states `|N>, |N+1>, ...` fail only in the bottom-right corner;
//! checks therefore look at a leading block.

mod eigen;
mod fresnel;
mod hermite;

pub use eigen::{
    completeness_defect, completeness_grid, eigen_residual, eigenstate, momentum_eigenstate,
    tomo_eigenstate, tomographic_quadrature, trust_radius, EigenResidual, TRUST_FACTOR,
};
pub use fresnel::{
    coherent_matrix_element, fresnel_operator, fresnel_operator_integral, tail_bound,
    IntegralOutcome, PolarQuadrature,
};
pub use hermite::{fock_to_grid, grid_to_fock, hermite_functions, hermite_table};

use std::ops::{Add, Mul, Sub};

use ndarray::{Array1, Array2, Axis};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

/// Default truncation dimension.
pub const DEFAULT_DIM: usize = 64;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Coefficients `c_n = <n|psi>`, `n = 0..N`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "FockVectorRepr", into = "FockVectorRepr")]
pub struct FockVector {
    coefficients: Array1<Complex64>,
}

#[derive(Serialize, Deserialize)]
struct FockVectorRepr {
    dim: usize,
    coefficients: Vec<Complex64>,
}

impl TryFrom<FockVectorRepr> for FockVector {
    type Error = Error;
    fn try_from(r: FockVectorRepr) -> Result<Self> {
        if r.coefficients.len() != r.dim {
            return Err(Error::DimensionMismatch {
                expected: r.dim,
                got: r.coefficients.len(),
            });
        }
        FockVector::new(r.coefficients)
    }
}

impl From<FockVector> for FockVectorRepr {
    fn from(v: FockVector) -> Self {
        FockVectorRepr {
            dim: v.dim(),
            coefficients: v.coefficients.to_vec(),
        }
    }
}

impl FockVector {
    pub fn new(coefficients: Vec<Complex64>) -> Result<Self> {
        if coefficients.is_empty() {
            return invalid("Fock vector needs dimension >= 1");
        }
        if coefficients.iter().any(|c| !c.is_finite()) {
            return invalid("Fock vector has non-finite coefficients");
        }
        Ok(FockVector {
            coefficients: Array1::from(coefficients),
        })
    }

    pub fn zeros(dim: usize) -> Self {
        FockVector {
            coefficients: Array1::from_elem(dim.max(1), ZERO),
        }
    }

    /// Number state `|n>` in dimension `dim`.
    pub fn basis(n: usize, dim: usize) -> Result<Self> {
        if n >= dim {
            return invalid(format!("|{n}> does not fit in dimension {dim}"));
        }
        let mut v = FockVector::zeros(dim);
        v.coefficients[n] = ONE;
        Ok(v)
    }

    pub fn dim(&self) -> usize {
        self.coefficients.len()
    }

    pub fn coefficients(&self) -> &Array1<Complex64> {
        &self.coefficients
    }

    pub fn as_slice(&self) -> &[Complex64] {
        self.coefficients.as_slice().expect("contiguous")
    }

    pub fn norm(&self) -> f64 {
        self.coefficients.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn normalized(mut self) -> Self {
        let k = self.norm().recip();
        self.coefficients.mapv_inplace(|c| c * k);
        self
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &FockVector) -> Result<Complex64> {
        self.check_dim(other.dim())?;
        Ok(self
            .coefficients
            .iter()
            .zip(other.coefficients.iter())
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// Probability missing from a state meant to be normalized, `|1 - ||c||^2|`.
    pub fn truncation_loss(&self) -> f64 {
        (1.0 - self.norm().powi(2)).abs()
    }

    /// Copy truncated to the first `k` coefficients.
    pub fn leading(&self, k: usize) -> FockVector {
        let k = k.clamp(1, self.dim());
        FockVector {
            coefficients: self.coefficients.slice(ndarray::s![..k]).to_owned(),
        }
    }

    /// Zero-padded or truncated copy of dimension `dim`.
    pub fn resized(&self, dim: usize) -> FockVector {
        let mut out = FockVector::zeros(dim);
        let k = dim.min(self.dim());
        out.coefficients
            .slice_mut(ndarray::s![..k])
            .assign(&self.coefficients.slice(ndarray::s![..k]));
        out
    }

    pub fn max_abs_diff(&self, other: &FockVector) -> f64 {
        self.coefficients
            .iter()
            .zip(other.coefficients.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    fn check_dim(&self, got: usize) -> Result<()> {
        if got != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got,
            });
        }
        Ok(())
    }
}

/// Coherent state `e^{-|z|^2/2} sum z^n / sqrt(n!) |n>`, truncated.
pub fn coherent_vector(z: Complex64, dim: usize) -> FockVector {
    let mut c = Vec::with_capacity(dim.max(1));
    let mut cur = Complex64::new((-0.5 * z.norm_sqr()).exp(), 0.0);
    for n in 0..dim.max(1) {
        c.push(cur);
        cur *= z / ((n + 1) as f64).sqrt();
    }
    FockVector {
        coefficients: Array1::from(c),
    }
}

/// Square matrix `m_jk = <j|O|k>`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "FockOperatorRepr", into = "FockOperatorRepr")]
pub struct FockOperator {
    entries: Array2<Complex64>,
}

#[derive(Serialize, Deserialize)]
struct FockOperatorRepr {
    dim: usize,
    entries: Vec<Vec<Complex64>>,
}

impl TryFrom<FockOperatorRepr> for FockOperator {
    type Error = Error;
    fn try_from(r: FockOperatorRepr) -> Result<Self> {
        if r.entries.len() != r.dim {
            return Err(Error::DimensionMismatch {
                expected: r.dim,
                got: r.entries.len(),
            });
        }
        let mut m = Array2::from_elem((r.dim, r.dim), ZERO);
        for (j, row) in r.entries.iter().enumerate() {
            if row.len() != r.dim {
                return Err(Error::DimensionMismatch {
                    expected: r.dim,
                    got: row.len(),
                });
            }
            for (k, v) in row.iter().enumerate() {
                m[[j, k]] = *v;
            }
        }
        FockOperator::new(m)
    }
}

impl From<FockOperator> for FockOperatorRepr {
    fn from(op: FockOperator) -> Self {
        FockOperatorRepr {
            dim: op.dim(),
            entries: op.entries.outer_iter().map(|r| r.to_vec()).collect(),
        }
    }
}

impl FockOperator {
    pub fn new(entries: Array2<Complex64>) -> Result<Self> {
        let (r, c) = entries.dim();
        if r != c {
            return invalid(format!("operator matrix must be square, got {r}x{c}"));
        }
        if r == 0 {
            return invalid("operator needs dimension >= 1");
        }
        Ok(FockOperator { entries })
    }

    pub fn identity(dim: usize) -> Self {
        FockOperator {
            entries: Array2::from_diag_elem(dim.max(1), ONE),
        }
    }

    pub fn zeros(dim: usize) -> Self {
        FockOperator {
            entries: Array2::from_elem((dim.max(1), dim.max(1)), ZERO),
        }
    }

    pub fn from_diag(diag: &[Complex64]) -> Result<Self> {
        FockOperator::new(Array2::from_diag(&Array1::from(diag.to_vec())))
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entries(&self) -> &Array2<Complex64> {
        &self.entries
    }

    pub fn get(&self, j: usize, k: usize) -> Complex64 {
        self.entries[[j, k]]
    }

    pub fn adjoint(&self) -> FockOperator {
        FockOperator {
            entries: self.entries.t().mapv(|c| c.conj()),
        }
    }

    pub fn scaled(&self, k: Complex64) -> FockOperator {
        FockOperator {
            entries: self.entries.mapv(|c| c * k),
        }
    }

    pub fn matmul(&self, rhs: &FockOperator) -> Result<FockOperator> {
        self.check_dim(rhs.dim())?;
        Ok(FockOperator {
            entries: self.entries.dot(&rhs.entries),
        })
    }

    pub fn apply(&self, v: &FockVector) -> Result<FockVector> {
        self.check_dim(v.dim())?;
        Ok(FockVector {
            coefficients: self.entries.dot(&v.coefficients),
        })
    }

    /// `[self, rhs] = self rhs - rhs self`.
    pub fn commutator(&self, rhs: &FockOperator) -> Result<FockOperator> {
        Ok(&self.matmul(rhs)? - &rhs.matmul(self)?)
    }

    /// Top-left `k x k` block.
    pub fn leading_block(&self, k: usize) -> FockOperator {
        let k = k.clamp(1, self.dim());
        FockOperator {
            entries: self.entries.slice(ndarray::s![..k, ..k]).to_owned(),
        }
    }

    pub fn max_abs_diff(&self, other: &FockOperator) -> f64 {
        self.entries
            .iter()
            .zip(other.entries.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// `||self - I||_max`.
    pub fn identity_defect(&self) -> f64 {
        self.max_abs_diff(&FockOperator::identity(self.dim()))
    }

    /// Largest deviation from Hermiticity.
    pub fn hermiticity_defect(&self) -> f64 {
        self.max_abs_diff(&self.adjoint())
    }

    /// Entry of largest magnitude, `(row, col)`.
    pub fn argmax(&self) -> (usize, usize) {
        let mut best = (0, 0);
        let mut val = -1.0;
        for ((j, k), v) in self.entries.indexed_iter() {
            if v.norm() > val {
                val = v.norm();
                best = (j, k);
            }
        }
        best
    }

    /// Largest elementwise difference after removing the global phase,
    /// aligned on the largest-magnitude entry of `self`.
    pub fn max_diff_up_to_phase(&self, other: &FockOperator) -> f64 {
        let (j, k) = self.argmax();
        let ratio = self.entries[[j, k]] / other.entries[[j, k]];
        let phase = if ratio.is_finite() && ratio.norm() > 0.0 {
            ratio / ratio.norm()
        } else {
            ONE
        };
        other.scaled(phase).max_abs_diff(self)
    }

    pub fn rows(&self) -> impl Iterator<Item = ndarray::ArrayView1<'_, Complex64>> {
        self.entries.axis_iter(Axis(0))
    }

    fn check_dim(&self, got: usize) -> Result<()> {
        if got != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got,
            });
        }
        Ok(())
    }
}

impl Add for &FockOperator {
    type Output = FockOperator;
    fn add(self, rhs: &FockOperator) -> FockOperator {
        FockOperator {
            entries: &self.entries + &rhs.entries,
        }
    }
}

impl Sub for &FockOperator {
    type Output = FockOperator;
    fn sub(self, rhs: &FockOperator) -> FockOperator {
        FockOperator {
            entries: &self.entries - &rhs.entries,
        }
    }
}

/// Panics on dimension mismatch; use [`FockOperator::matmul`] to get an error.
impl Mul for &FockOperator {
    type Output = FockOperator;
    fn mul(self, rhs: &FockOperator) -> FockOperator {
        self.matmul(rhs).expect("operator dimensions differ")
    }
}

/// Annihilation and creation operators `(a, a^dagger)` in dimension `n >= 2`.
pub fn ladder(n: usize) -> Result<(FockOperator, FockOperator)> {
    if n < 2 {
        return invalid(format!("ladder operators need N >= 2, got {n}"));
    }
    let mut a = Array2::from_elem((n, n), ZERO);
    for k in 1..n {
        a[[k - 1, k]] = Complex64::new((k as f64).sqrt(), 0.0);
    }
    let adag = a.t().to_owned();
    Ok((FockOperator { entries: a }, FockOperator { entries: adag }))
}

/// `X = (a + a^dagger)/sqrt 2`, `P = i (a^dagger - a)/sqrt 2`.
pub fn quadratures(n: usize) -> Result<(FockOperator, FockOperator)> {
    let (a, adag) = ladder(n)?;
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let x = (&a + &adag).scaled(Complex64::new(h, 0.0));
    let p = (&adag - &a).scaled(Complex64::new(0.0, h));
    Ok((x, p))
}
