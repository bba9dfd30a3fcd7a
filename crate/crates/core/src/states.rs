//! Test states with closed-form representations: vacuum, number states,
//! coherent states, squeezed vacuum and even cat states.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::fockspace::{coherent_vector, hermite_functions, FockVector};
use crate::gridtransform::{GridSpec, GridWavefunction};
use crate::phasespace::WignerGrid;

/// Largest coherent amplitude accepted.
pub const MAX_ALPHA: f64 = 4.0;
/// Largest squeezing parameter accepted.
pub const MAX_LAMBDA: f64 = 1.5;
/// Fock states need this many spare dimensions above `n`.
pub const FOCK_HEADROOM: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum StateSpec {
    Vacuum,
    Fock { n: usize },
    Coherent { alpha: Complex64 },
    /// `S(lambda)|0>`, position wavefunction `exp(-e^{2 lambda} x^2 / 2)`.
    Squeezed { lambda: f64 },
    /// Even cat `(|alpha> + |-alpha>)`, normalized.
    Cat { alpha: Complex64 },
}

impl StateSpec {
    /// Checks parameter ranges; `fock_dim` adds the headroom check for number states.
    pub fn validate(&self, fock_dim: Option<usize>) -> Result<()> {
        match *self {
            StateSpec::Vacuum => Ok(()),
            StateSpec::Fock { n } => match fock_dim {
                Some(dim) if n + FOCK_HEADROOM > dim => invalid(format!(
                    "fock:{n} needs dimension >= {} (got {dim})",
                    n + FOCK_HEADROOM
                )),
                _ => Ok(()),
            },
            StateSpec::Coherent { alpha } | StateSpec::Cat { alpha } => {
                if !alpha.is_finite() || alpha.norm() > MAX_ALPHA {
                    invalid(format!("|alpha| = {} exceeds {MAX_ALPHA}", alpha.norm()))
                } else {
                    Ok(())
                }
            }
            StateSpec::Squeezed { lambda } => {
                if !lambda.is_finite() || lambda.abs() > MAX_LAMBDA {
                    invalid(format!("|lambda| = {} exceeds {MAX_LAMBDA}", lambda.abs()))
                } else {
                    Ok(())
                }
            }
        }
    }

    /// Mean `(<X>, <P>)`.
    pub fn mean(&self) -> (f64, f64) {
        match *self {
            StateSpec::Coherent { alpha } => (2f64.sqrt() * alpha.re, 2f64.sqrt() * alpha.im),
            _ => (0.0, 0.0),
        }
    }
}

impl fmt::Display for StateSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StateSpec::Vacuum => write!(f, "vacuum"),
            StateSpec::Fock { n } => write!(f, "fock:{n}"),
            StateSpec::Coherent { alpha } => write!(f, "coherent:{},{}", alpha.re, alpha.im),
            StateSpec::Squeezed { lambda } => write!(f, "squeezed:{lambda}"),
            StateSpec::Cat { alpha } => write!(f, "cat:{},{}", alpha.re, alpha.im),
        }
    }
}

fn parse_complex(s: &str) -> Result<Complex64> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let num = |t: &str| {
        t.parse::<f64>()
            .map_err(|_| Error::Parse(format!("not a number: {t:?}")))
    };
    match parts.as_slice() {
        [re] => Ok(Complex64::new(num(re)?, 0.0)),
        [re, im] => Ok(Complex64::new(num(re)?, num(im)?)),
        _ => Err(Error::Parse(format!("expected 're' or 're,im', got {s:?}"))),
    }
}

impl FromStr for StateSpec {
    type Err = Error;

    /// `vacuum`, `fock:N`, `coherent:RE[,IM]`, `squeezed:LAMBDA`, `cat:RE[,IM]`.
    fn from_str(s: &str) -> Result<Self> {
        let (kind, arg) = match s.split_once(':') {
            Some((k, a)) => (k.trim(), Some(a.trim())),
            None => (s.trim(), None),
        };
        let need = || arg.ok_or_else(|| Error::Parse(format!("state {kind:?} needs a parameter")));
        let spec = match kind.to_ascii_lowercase().as_str() {
            "vacuum" => StateSpec::Vacuum,
            "fock" => StateSpec::Fock {
                n: need()?
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad Fock index in {s:?}")))?,
            },
            "coherent" => StateSpec::Coherent {
                alpha: parse_complex(need()?)?,
            },
            "squeezed" => StateSpec::Squeezed {
                lambda: need()?
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad squeezing in {s:?}")))?,
            },
            "cat" => StateSpec::Cat {
                alpha: parse_complex(need()?)?,
            },
            _ => return Err(Error::Parse(format!("unknown state kind {kind:?}"))),
        };
        if kind.eq_ignore_ascii_case("vacuum") && arg.is_some() {
            return Err(Error::Parse("vacuum takes no parameter".into()));
        }
        Ok(spec)
    }
}

/// `<x|z> = pi^{-1/4} exp(-x^2/2 + sqrt2 x z - z^2/2 - |z|^2/2)`.
pub fn coherent_amplitude(z: Complex64, x: f64) -> Complex64 {
    (Complex64::new(-0.5 * x * x - 0.5 * z.norm_sqr(), 0.0) + 2f64.sqrt() * x * z - 0.5 * z * z).exp()
        * PI.powf(-0.25)
}

fn cat_norm(alpha: Complex64) -> f64 {
    (2.0 * (1.0 + (-2.0 * alpha.norm_sqr()).exp())).sqrt().recip()
}

/// Samples the state on `grid`.
pub fn make_state_grid(spec: &StateSpec, grid: &GridSpec) -> Result<GridWavefunction> {
    spec.validate(None)?;
    let psi = match *spec {
        StateSpec::Vacuum => GridWavefunction::from_fn(*grid, |x| {
            Complex64::new(PI.powf(-0.25) * (-0.5 * x * x).exp(), 0.0)
        }),
        StateSpec::Fock { n } => {
            GridWavefunction::from_fn(*grid, |x| Complex64::new(hermite_functions(x, n + 1)[n], 0.0))
        }
        StateSpec::Coherent { alpha } => {
            GridWavefunction::from_fn(*grid, |x| coherent_amplitude(alpha, x))
        }
        StateSpec::Squeezed { lambda } => GridWavefunction::from_fn(*grid, |x| {
            let k = (2.0 * lambda).exp();
            Complex64::new(PI.powf(-0.25) * (0.5 * lambda).exp() * (-0.5 * k * x * x).exp(), 0.0)
        }),
        StateSpec::Cat { alpha } => {
            let nrm = cat_norm(alpha);
            GridWavefunction::from_fn(*grid, |x| {
                (coherent_amplitude(alpha, x) + coherent_amplitude(-alpha, x)) * nrm
            })
        }
    };
    if psi.edge_amplitude() > 1e-8 {
        log::warn!(
            "{spec} has amplitude {:.2e} at the grid edge x = +-{}",
            psi.edge_amplitude(),
            grid.half_width()
        );
    }
    Ok(psi)
}

/// Number-basis coefficients in dimension `dim`.
pub fn make_state_fock(spec: &StateSpec, dim: usize) -> Result<FockVector> {
    spec.validate(Some(dim))?;
    if dim < 2 {
        return invalid(format!("Fock dimension must be >= 2, got {dim}"));
    }
    let v = match *spec {
        StateSpec::Vacuum => FockVector::basis(0, dim)?,
        StateSpec::Fock { n } => FockVector::basis(n, dim)?,
        StateSpec::Coherent { alpha } => coherent_vector(alpha, dim),
        StateSpec::Squeezed { lambda } => {
            // c_{2k} = (-tanh l)^k sqrt((2k)!) / (2^k k!) / sqrt(cosh l)
            let t = -lambda.tanh();
            let mut c = vec![Complex64::new(0.0, 0.0); dim];
            let mut cur = lambda.cosh().powf(-0.5);
            let mut k = 0;
            while 2 * k < dim {
                c[2 * k] = Complex64::new(cur, 0.0);
                let kf = k as f64;
                // ratio c_{2k+2}/c_{2k} = t sqrt((2k+1)(2k+2)) / (2(k+1))
                cur *= t * ((2.0 * kf + 1.0) * (2.0 * kf + 2.0)).sqrt() / (2.0 * (kf + 1.0));
                k += 1;
            }
            FockVector::new(c)?
        }
        StateSpec::Cat { alpha } => {
            let a = coherent_vector(alpha, dim);
            let b = coherent_vector(-alpha, dim);
            let nrm = cat_norm(alpha);
            FockVector::new(
                a.as_slice()
                    .iter()
                    .zip(b.as_slice())
                    .map(|(x, y)| (x + y) * nrm)
                    .collect(),
            )?
        }
    };
    let loss = v.truncation_loss();
    if loss > 1e-8 {
        log::warn!("{spec} loses {loss:.2e} of its norm at Fock dimension {dim}");
    }
    Ok(v)
}

/// Laguerre polynomial `L_n(t)`.
fn laguerre(n: usize, t: f64) -> f64 {
    let (mut prev, mut cur) = (1.0, 1.0 - t);
    if n == 0 {
        return prev;
    }
    for k in 1..n {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0 - t) * cur - kf * prev) / (kf + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

/// Closed-form Wigner function of `spec` sampled on `grid`.
pub fn analytic_wigner(spec: &StateSpec, grid: &GridSpec) -> Result<WignerGrid> {
    spec.validate(None)?;
    let f: Box<dyn Fn(f64, f64) -> f64 + Sync> = match *spec {
        StateSpec::Vacuum => Box::new(|x, p| (-x * x - p * p).exp() / PI),
        StateSpec::Fock { n } => Box::new(move |x, p| {
            let r2 = x * x + p * p;
            let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
            sign * laguerre(n, 2.0 * r2) * (-r2).exp() / PI
        }),
        StateSpec::Coherent { alpha } => {
            let (x0, p0) = (2f64.sqrt() * alpha.re, 2f64.sqrt() * alpha.im);
            Box::new(move |x, p| (-(x - x0).powi(2) - (p - p0).powi(2)).exp() / PI)
        }
        StateSpec::Squeezed { lambda } => {
            let k = (2.0 * lambda).exp();
            Box::new(move |x, p| (-k * x * x - p * p / k).exp() / PI)
        }
        StateSpec::Cat { alpha } => {
            let (x0, p0) = (2f64.sqrt() * alpha.re, 2f64.sqrt() * alpha.im);
            let n2 = cat_norm(alpha).powi(2);
            Box::new(move |x, p| {
                let g = |a: f64, b: f64| (-(x - a).powi(2) - (p - b).powi(2)).exp();
                let cross = 2.0 * (-x * x - p * p).exp() * (2.0 * (x0 * p - p0 * x)).cos();
                n2 * (g(x0, p0) + g(-x0, -p0) + cross) / PI
            })
        }
    };
    Ok(WignerGrid::from_fn(*grid, f))
}
