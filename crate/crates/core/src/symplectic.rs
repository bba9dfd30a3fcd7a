//! Ray-transfer matrices and their complex `(s, r)` chart.
//!
//! A [`RayMatrix`] is a real 2x2 matrix `[[A, B], [C, D]]` with `AD - BC = 1`.
//! It acts on phase-space points as `(x, p) -> (A x + B p, C x + D p)`. The
//! equivalent [`SrPair`] describes the same map on `z = (x + i p)/sqrt(2)`:
//! `z -> s z - r z*`, with `|s|^2 - |r|^2 = 1`.
//!
//! Constructors validate the invariants; nothing is renormalized.

use std::f64::consts::PI;
use std::fmt;
use std::ops::Mul;
use std::str::FromStr;

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

/// Tolerance on `AD - BC = 1` and `|s|^2 - |r|^2 = 1`.
pub const UNIMODULAR_TOL: f64 = 1e-12;

/// Real 2x2 unimodular ray-transfer matrix.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "[f64; 4]", into = "[f64; 4]")]
pub struct RayMatrix {
    a: f64,
    b: f64,
    c: f64,
    d: f64,
}

impl RayMatrix {
    pub const IDENTITY: RayMatrix = RayMatrix {
        a: 1.0,
        b: 0.0,
        c: 0.0,
        d: 1.0,
    };

    /// `(X, P) -> (P, -X)`; its transform is the Fourier transform up to a constant phase.
    pub const FOURIER: RayMatrix = RayMatrix {
        a: 0.0,
        b: 1.0,
        c: -1.0,
        d: 0.0,
    };

    /// Validating constructor: rejects `|AD - BC - 1| > 1e-12` and non-finite entries.
    pub fn new(a: f64, b: f64, c: f64, d: f64) -> Result<Self> {
        if ![a, b, c, d].iter().all(|v| v.is_finite()) {
            return invalid("ray matrix entries must be finite");
        }
        let det = a * d - b * c;
        if (det - 1.0).abs() > UNIMODULAR_TOL {
            return Err(Error::NotUnimodular { det });
        }
        Ok(RayMatrix { a, b, c, d })
    }

    /// Rescales an arbitrary matrix with positive determinant to `det = 1`.
    pub fn normalized(a: f64, b: f64, c: f64, d: f64) -> Result<Self> {
        let det = a * d - b * c;
        if !(det > 0.0) || !det.is_finite() {
            return invalid(format!("cannot rescale matrix with determinant {det} to 1"));
        }
        let k = det.sqrt().recip();
        RayMatrix::new(a * k, b * k, c * k, d * k)
    }

    pub fn a(&self) -> f64 {
        self.a
    }
    pub fn b(&self) -> f64 {
        self.b
    }
    pub fn c(&self) -> f64 {
        self.c
    }
    pub fn d(&self) -> f64 {
        self.d
    }

    pub fn entries(&self) -> [f64; 4] {
        [self.a, self.b, self.c, self.d]
    }

    pub fn det(&self) -> f64 {
        self.a * self.d - self.b * self.c
    }

    /// `s = ((A + D) - i(B - C))/2`, `r = -((A - D) + i(B + C))/2`.
    pub fn to_sr(&self) -> SrPair {
        let s = Complex64::new(0.5 * (self.a + self.d), -0.5 * (self.b - self.c));
        let r = Complex64::new(-0.5 * (self.a - self.d), -0.5 * (self.b + self.c));
        SrPair { s, r }
    }

    /// Matrix product `self * rhs`: `rhs` acts first on phase-space points.
    pub fn compose(&self, rhs: &RayMatrix) -> RayMatrix {
        RayMatrix {
            a: self.a * rhs.a + self.b * rhs.c,
            b: self.a * rhs.b + self.b * rhs.d,
            c: rhs.a * self.c + rhs.c * self.d,
            d: rhs.b * self.c + self.d * rhs.d,
        }
    }

    /// Adjugate `(D, -B, -C, A)`, the exact inverse of a unimodular matrix.
    pub fn inverse(&self) -> RayMatrix {
        RayMatrix {
            a: self.d,
            b: -self.b,
            c: -self.c,
            d: self.a,
        }
    }

    /// Largest componentwise difference to another matrix.
    pub fn max_abs_diff(&self, other: &RayMatrix) -> f64 {
        self.entries()
            .iter()
            .zip(other.entries())
            .map(|(x, y)| (x - y).abs())
            .fold(0.0, f64::max)
    }

    /// Rotation angle if this matrix is `rotation(theta)` to within `tol`.
    pub fn rotation_angle(&self, tol: f64) -> Option<f64> {
        let is_rotation = (self.a - self.d).abs() <= tol
            && (self.b + self.c).abs() <= tol
            && (self.a * self.a + self.b * self.b - 1.0).abs() <= tol;
        is_rotation.then(|| self.b.atan2(self.a))
    }
}

impl Default for RayMatrix {
    fn default() -> Self {
        RayMatrix::IDENTITY
    }
}

impl Mul for RayMatrix {
    type Output = RayMatrix;
    fn mul(self, rhs: RayMatrix) -> RayMatrix {
        self.compose(&rhs)
    }
}

impl TryFrom<[f64; 4]> for RayMatrix {
    type Error = Error;
    fn try_from(e: [f64; 4]) -> Result<Self> {
        RayMatrix::new(e[0], e[1], e[2], e[3])
    }
}

impl From<RayMatrix> for [f64; 4] {
    fn from(m: RayMatrix) -> [f64; 4] {
        m.entries()
    }
}

impl fmt::Display for RayMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}, {}, {}]", self.a, self.b, self.c, self.d)
    }
}

/// Complex chart `(s, r)` of a ray matrix, `|s|^2 - |r|^2 = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "[Complex64; 2]", into = "[Complex64; 2]")]
pub struct SrPair {
    s: Complex64,
    r: Complex64,
}

impl SrPair {
    pub fn new(s: Complex64, r: Complex64) -> Result<Self> {
        if !(s.re.is_finite() && s.im.is_finite() && r.re.is_finite() && r.im.is_finite()) {
            return invalid("(s, r) must be finite");
        }
        let value = s.norm_sqr() - r.norm_sqr();
        if (value - 1.0).abs() > UNIMODULAR_TOL {
            return Err(Error::NotNormalizedPair { value });
        }
        Ok(SrPair { s, r })
    }

    pub fn s(&self) -> Complex64 {
        self.s
    }
    pub fn r(&self) -> Complex64 {
        self.r
    }

    /// `A = Re(s - r)`, `C = Im(s - r)`, `D = Re(s + r)`, `B = -Im(s + r)`.
    pub fn to_ray(&self) -> RayMatrix {
        let diff = self.s - self.r;
        let sum = self.s + self.r;
        RayMatrix {
            a: diff.re,
            b: -sum.im,
            c: diff.im,
            d: sum.re,
        }
    }

    /// Group product matching [`RayMatrix::compose`] under the chart:
    /// `s'' = s s' + r r'*`, `r'' = s r' + r s'*`.
    pub fn compose(&self, rhs: &SrPair) -> SrPair {
        SrPair {
            s: self.s * rhs.s + self.r * rhs.r.conj(),
            r: self.s * rhs.r + self.r * rhs.s.conj(),
        }
    }

    /// Inverse element `(s*, -r)`.
    pub fn inverse(&self) -> SrPair {
        SrPair {
            s: self.s.conj(),
            r: -self.r,
        }
    }

    pub fn max_abs_diff(&self, other: &SrPair) -> f64 {
        (self.s - other.s).norm().max((self.r - other.r).norm())
    }
}

impl TryFrom<[Complex64; 2]> for SrPair {
    type Error = Error;
    fn try_from(v: [Complex64; 2]) -> Result<Self> {
        SrPair::new(v[0], v[1])
    }
}

impl From<SrPair> for [Complex64; 2] {
    fn from(p: SrPair) -> Self {
        [p.s, p.r]
    }
}

/// Named one-parameter families of ray matrices.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Elementary {
    Identity,
    /// `(cos t, sin t, -sin t, cos t)`; maps to `s = e^{-it}, r = 0`.
    Rotation(f64),
    /// Free propagation `(1, l, 0, 1)`.
    Free(f64),
    /// Thin lens `(1, 0, k, 1)`.
    Lens(f64),
    /// Magnifier `(m, 0, 0, 1/m)`.
    Scale(f64),
}

impl Elementary {
    pub fn to_matrix(&self) -> Result<RayMatrix> {
        let m = match *self {
            Elementary::Identity => RayMatrix::IDENTITY,
            Elementary::Rotation(t) => {
                let (sin, cos) = t.sin_cos();
                RayMatrix {
                    a: cos,
                    b: sin,
                    c: -sin,
                    d: cos,
                }
            }
            Elementary::Free(l) => RayMatrix::new(1.0, l, 0.0, 1.0)?,
            Elementary::Lens(k) => RayMatrix::new(1.0, 0.0, k, 1.0)?,
            Elementary::Scale(m) => {
                if m == 0.0 || !m.is_finite() {
                    return invalid("scale factor must be finite and nonzero");
                }
                RayMatrix::new(m, 0.0, 0.0, m.recip())?
            }
        };
        Ok(m)
    }
}

impl FromStr for Elementary {
    type Err = Error;

    /// `identity`, `rotation:0.5`, `free:1`, `lens:-0.3`, `scale:2`.
    fn from_str(text: &str) -> Result<Self> {
        let (name, arg) = match text.split_once(':') {
            Some((n, a)) => (n.trim(), Some(a.trim())),
            None => (text.trim(), None),
        };
        let value = || -> Result<f64> {
            let a = arg.ok_or_else(|| Error::Parse(format!("`{name}` needs a parameter")))?;
            a.parse::<f64>()
                .map_err(|e| Error::Parse(format!("bad parameter `{a}`: {e}")))
        };
        match name {
            "identity" | "id" => Ok(Elementary::Identity),
            "rotation" | "rot" => Ok(Elementary::Rotation(value()?)),
            "free" => Ok(Elementary::Free(value()?)),
            "lens" => Ok(Elementary::Lens(value()?)),
            "scale" => Ok(Elementary::Scale(value()?)),
            other => Err(Error::Parse(format!("unknown elementary matrix `{other}`"))),
        }
    }
}

/// Parameters for drawing random unimodular matrices as
/// `rotation(theta) * scale(mu) * lens(kappa)`.
///
/// The factorization keeps the product unimodular up to rounding. Draws with
/// `|B| < min_abs_b` or any entry outside `[-max_entry, max_entry]` are rejected.
#[derive(Debug, Clone, Copy)]
pub struct MatrixSampler {
    pub max_log_scale: f64,
    pub max_lens: f64,
    pub min_abs_b: f64,
    pub max_entry: f64,
}

impl Default for MatrixSampler {
    /// Keeps the images of the acceptance-suite states inside the default grid.
    fn default() -> Self {
        MatrixSampler {
            max_log_scale: 0.35,
            max_lens: 0.5,
            min_abs_b: 0.05,
            max_entry: 3.0,
        }
    }
}

impl MatrixSampler {
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> RayMatrix {
        loop {
            let theta = rng.gen_range(0.0..2.0 * PI);
            let mu = rng.gen_range(-self.max_log_scale..=self.max_log_scale).exp();
            let kappa = rng.gen_range(-self.max_lens..=self.max_lens);
            let rot = Elementary::Rotation(theta).to_matrix().expect("rotation");
            let scale = RayMatrix {
                a: mu,
                b: 0.0,
                c: 0.0,
                d: mu.recip(),
            };
            let lens = RayMatrix {
                a: 1.0,
                b: 0.0,
                c: kappa,
                d: 1.0,
            };
            let m = rot * scale * lens;
            if m.b.abs() >= self.min_abs_b && m.entries().iter().all(|e| e.abs() <= self.max_entry) {
                return m;
            }
        }
    }
}

/// Draws `(s, r)` with `|r|` uniform on the disk of radius `max_r` and an
/// independent uniform phase on `s`.
pub fn sample_sr<R: Rng + ?Sized>(rng: &mut R, max_r: f64) -> SrPair {
    let radius = max_r * rng.gen::<f64>().sqrt();
    let r = Complex64::from_polar(radius, rng.gen_range(0.0..2.0 * PI));
    let s = Complex64::from_polar((1.0 + radius * radius).sqrt(), rng.gen_range(0.0..2.0 * PI));
    SrPair { s, r }
}
