//! Reconstruction of quantum-mechanical potential functions from the matrix
//! elements of the wave operator in square-integrable bases.
//!
//! The library is organized around a pipeline:
//!
//! * [`specfun`] — log-gamma (real and complex) and classical orthogonal
//!   polynomial evaluation.
//! * [`lintridiag`] — symmetric tridiagonal matrices and their full
//!   eigendecomposition (implicit-shift QL).
//! * [`quadrature`] — Gauss rules built from three-term recurrence
//!   coefficients, including derivative weights.
//! * [`bases`] — the five square-integrable basis families with closed-form
//!   overlap and kinetic-energy matrices.
//! * [`energypoly`] — energy-polynomial families (Meixner-Pollaczek,
//!   continuous dual Hahn, Wilson, dipole), their weights, asymptotics and
//!   phase shifts.
//! * [`systems`] — assembly of the six physical systems into H, T, Ω, V
//!   matrices with counterterm bookkeeping.
//! * [`reconstruct`] — the four reconstruction methods plus the
//!   continued-fraction rational fitter.
//! * [`verify`] — named invariant and acceptance checks shared by the test
//!   suite and the CLI `verify` subcommand.

pub mod bases;
pub mod energypoly;
pub mod lintridiag;
pub mod mat;
pub mod quadrature;
pub mod reconstruct;
pub mod specfun;
pub mod systems;
pub mod verify;

pub use mat::Mat;

/// Library-wide error type. Variants map onto the CLI exit-code classes:
/// `Domain` is a configuration/precondition failure, the others are runtime
/// numeric failures.
#[derive(Debug, Clone, thiserror::Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("numeric failure: {0}")]
    Numeric(String),
    #[error("reconstruction failed: {0}")]
    Reconstruction(String),
    #[error("degenerate data: {0}")]
    DegenerateData(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
    pub fn numeric(msg: impl Into<String>) -> Self {
        Error::Numeric(msg.into())
    }
}

/// Uniform grid of `count` points strictly inside the open interval
/// `(min, max)`. Reconstruction domains are open at singular endpoints, so
/// interior sampling is the default everywhere.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub min: f64,
    pub max: f64,
    pub count: usize,
}

impl Grid {
    pub fn new(min: f64, max: f64, count: usize) -> Result<Self> {
        if !(min < max) || count == 0 {
            return Err(Error::domain(format!(
                "invalid grid: min={min}, max={max}, count={count}"
            )));
        }
        Ok(Grid { min, max, count })
    }

    pub fn points(&self) -> Vec<f64> {
        let h = (self.max - self.min) / (self.count as f64 + 1.0);
        (0..self.count)
            .map(|i| self.min + h * (i as f64 + 1.0))
            .collect()
    }
}
