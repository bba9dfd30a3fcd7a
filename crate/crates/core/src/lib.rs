//! Fresnel operators and quantum tomography.
//!
//! A real unimodular ray-transfer matrix `(A, B, C, D)` defines both a
//! classical Fresnel (linear canonical) integral transform and a unitary
//! operator on the oscillator Hilbert space. The probability distribution of
//! the Fresnel-transformed quadrature `DX - BP` is the Radon transform of the
//! state's Wigner function along the lines `x = D x' - B p'`; this crate
//! computes both sides of that identity and the machinery around it.
//!
//! Modules:
//! - [`symplectic`]: ray matrices, the complex `(s, r)` chart and composition.
//! - [`fockspace`]: truncated Fock-space operators, the Fresnel operator in
//!   disentangled form and as a coherent-state integral, tomographic
//!   eigenstates, Hermite-function synthesis.
//! - [`gridtransform`]: the Fresnel integral transform on sampled wavefunctions.
//! - [`phasespace`]: Wigner functions, Radon transforms, tomograms,
//!   filtered back-projection.
//! - [`states`]: test-state factory with closed-form oracles.
//! - [`io`]: CSV / JSON / binary file formats.
//! - [`verify`]: the self-check suite behind `fresnel-tomo verify`.

pub mod cli;
pub mod error;
pub mod fockspace;
pub mod gridtransform;
pub mod interp;
pub mod io;
pub mod phasespace;
pub mod spectral;
pub mod states;
pub mod symplectic;
pub mod verify;

pub use error::{Error, Result};
pub use fockspace::{FockOperator, FockVector};
pub use gridtransform::{GridSpec, GridWavefunction};
pub use phasespace::{Quadrature, TomogramCurve, WignerGrid};
pub use states::StateSpec;
pub use symplectic::{Elementary, RayMatrix, SrPair};

pub use num_complex::Complex64;
