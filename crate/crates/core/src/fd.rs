//! Central finite differences with one Richardson extrapolation level.
//!
//! Every evaluation goes through a fallible closure, so a stencil point that
//! leaves the model domain aborts the whole derivative instead of producing a
//! silently wrong number.

use serde::{Deserialize, Serialize};

use crate::error::Result;

/// Values that can be linearly combined by the stencils.
pub trait Linear: Copy {
    /// Returns `a * self + b * other`.
    fn lin(self, a: f64, other: Self, b: f64) -> Self;
}

impl Linear for f64 {
    fn lin(self, a: f64, other: Self, b: f64) -> Self {
        a * self + b * other
    }
}

impl<const N: usize> Linear for [f64; N] {
    fn lin(self, a: f64, other: Self, b: f64) -> Self {
        let mut out = [0.0; N];
        for i in 0..N {
            out[i] = a * self[i] + b * other[i];
        }
        out
    }
}

/// Step size and the tolerances attached to first and second order stencils.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FdConfig {
    pub step: f64,
    pub tol_first: f64,
    pub tol_second: f64,
}

impl Default for FdConfig {
    fn default() -> Self {
        Self { step: 1e-3, tol_first: 1e-6, tol_second: 1e-4 }
    }
}

/// First derivative at `x`, central difference refined by Richardson.
pub fn first<T, F>(f: F, x: f64, h: f64) -> Result<T>
where
    T: Linear,
    F: Fn(f64) -> Result<T>,
{
    let d = |h: f64| -> Result<T> { Ok(f(x + h)?.lin(0.5 / h, f(x - h)?, -0.5 / h)) };
    let coarse = d(h)?;
    let fine = d(0.5 * h)?;
    Ok(fine.lin(4.0 / 3.0, coarse, -1.0 / 3.0))
}

/// Second derivative at `x`, three-point stencil refined by Richardson.
pub fn second<T, F>(f: F, x: f64, h: f64) -> Result<T>
where
    T: Linear,
    F: Fn(f64) -> Result<T>,
{
    let mid = f(x)?;
    let d = |h: f64| -> Result<T> {
        let s = f(x + h)?.lin(1.0, f(x - h)?, 1.0);
        Ok(s.lin(1.0 / (h * h), mid, -2.0 / (h * h)))
    };
    let coarse = d(h)?;
    let fine = d(0.5 * h)?;
    Ok(fine.lin(4.0 / 3.0, coarse, -1.0 / 3.0))
}
