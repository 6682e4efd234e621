//! Existence of proper CMC r-harmonic Hopf cylinders over `(m, ℓ, r)`.
//!
//! A cylinder with constant geodesic curvature `κ ≠ 0` is r-harmonic exactly
//! when `x = κ²` solves `x² + b x + c = 0` with
//! `b = -4m(r-1) + 3ℓ²r/4` and `c = -(ℓ²/2)(4m - ℓ²)`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hopf::circle_radius;
use crate::space::BcvParams;

/// Positive roots below this are treated as zero.
pub const POSITIVE_ROOT_TOL: f64 = 1e-12;
/// Relative window for `disc = 0` and `r = r_bound`.
pub const BOUNDARY_WINDOW: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RootReport {
    /// `(1, b, c)`.
    pub coefficients: [f64; 3],
    pub discriminant: f64,
    /// Real roots in increasing order; a double root is listed once.
    pub roots: Vec<f64>,
    pub positive_roots: Vec<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CaseTag {
    PositiveBundleCurvatureCase,
    ParabolaCase,
    SU2NegativeCase,
    NoSolution,
}

impl CaseTag {
    pub const ALL: [CaseTag; 4] =
        [CaseTag::PositiveBundleCurvatureCase, CaseTag::ParabolaCase, CaseTag::SU2NegativeCase, CaseTag::NoSolution];

    /// Small integer used in grid serializations.
    pub fn code(self) -> u8 {
        match self {
            CaseTag::PositiveBundleCurvatureCase => 0,
            CaseTag::ParabolaCase => 1,
            CaseTag::SU2NegativeCase => 2,
            CaseTag::NoSolution => 3,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            CaseTag::PositiveBundleCurvatureCase => "PositiveBundleCurvatureCase",
            CaseTag::ParabolaCase => "ParabolaCase",
            CaseTag::SU2NegativeCase => "SU2NegativeCase",
            CaseTag::NoSolution => "NoSolution",
        }
    }

    pub fn is_solvable(self) -> bool {
        self != CaseTag::NoSolution
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Classification {
    pub case: CaseTag,
    /// Admissible values of `κ²`.
    pub roots: Vec<f64>,
    /// Base-circle radius for each root, when `m > 0`.
    pub radius: Vec<f64>,
    pub r_bound: Option<f64>,
}

fn check_order(r: u32) -> Result<()> {
    if r < 2 {
        return Err(Error::InvalidArgument(format!("r must be an integer >= 2, got {r}")));
    }
    Ok(())
}

/// Coefficients and roots of the r-harmonicity quadratic in `κ²`.
pub fn quadratic_condition(m: f64, l: f64, r: u32) -> Result<RootReport> {
    check_order(r)?;
    let r = r as f64;
    let b = -4.0 * m * (r - 1.0) + 0.75 * l * l * r;
    let c = -0.5 * l * l * (4.0 * m - l * l);
    let disc = b * b - 4.0 * c;
    let roots = if disc.abs() <= BOUNDARY_WINDOW * (b * b).max(f64::MIN_POSITIVE) {
        vec![-0.5 * b]
    } else if disc < 0.0 {
        Vec::new()
    } else {
        let sgn = if b < 0.0 { -1.0 } else { 1.0 };
        let q = -0.5 * (b + sgn * disc.sqrt());
        let (x1, x2) = (q, if q != 0.0 { c / q } else { 0.0 });
        if x1 <= x2 {
            vec![x1, x2]
        } else {
            vec![x2, x1]
        }
    };
    let positive_roots = roots.iter().copied().filter(|&x| x > POSITIVE_ROOT_TOL).collect();
    Ok(RootReport { coefficients: [1.0, b, c], discriminant: disc, roots, positive_roots })
}

/// Whether `4m = ℓ²` up to rounding.
fn on_parabola(m: f64, l: f64) -> bool {
    let d = 4.0 * m - l * l;
    d.abs() <= 1e-12 * (4.0 * m.abs()).max(l * l).max(1.0)
}

/// Lower bound on `r` in the region `3ℓ²/4 < 4m < ℓ²`.
pub fn r_bound(m: f64, l: f64) -> Result<f64> {
    let l2 = l * l;
    if !(0.75 * l2 < 4.0 * m && 4.0 * m < l2) {
        return Err(Error::OutOfRegion(format!("r_bound needs 3l^2/4 < 4m < l^2, got m = {m}, l = {l}")));
    }
    Ok(4.0 * ((2.0f64).sqrt() * (l2 * l2 - 4.0 * l2 * m).sqrt() + 4.0 * m) / (16.0 * m - 3.0 * l2))
}

/// The bound along the parabola `4m = aℓ²`, `3/4 < a < 1`.
pub fn r_a(a: f64) -> Result<f64> {
    if !(0.75 < a && a < 1.0) {
        return Err(Error::OutOfRegion(format!("r_a needs 3/4 < a < 1, got {a}")));
    }
    Ok(4.0 * (a + (2.0 - 2.0 * a).sqrt()) / (4.0 * a - 3.0))
}

/// Existence classification for the given `(m, ℓ, r)`.
pub fn classify(m: f64, l: f64, r: u32) -> Result<Classification> {
    let report = quadratic_condition(m, l, r)?;
    let params = BcvParams::new(m, l);
    let bound = r_bound(m, l).ok();
    let mut roots = Vec::new();
    let case = if m <= 0.0 {
        CaseTag::NoSolution
    } else if on_parabola(m, l) {
        if l != 0.0 && r >= 5 {
            roots.push(l * l * (r as f64 - 4.0) / 4.0);
            CaseTag::ParabolaCase
        } else {
            CaseTag::NoSolution
        }
    } else if params.gap() > 0.0 {
        roots = report.positive_roots.clone();
        CaseTag::PositiveBundleCurvatureCase
    } else if params.horizontal_curvature() > 0.0 {
        let b = bound.expect("inside the bound region");
        if r as f64 >= b * (1.0 - BOUNDARY_WINDOW) {
            roots = report.positive_roots.clone();
            if roots.is_empty() {
                // rounding pushed a double root just below zero discriminant
                roots.push(-0.5 * report.coefficients[1]);
            }
            CaseTag::SU2NegativeCase
        } else {
            CaseTag::NoSolution
        }
    } else {
        CaseTag::NoSolution
    };
    let radius = if m > 0.0 {
        roots.iter().map(|&x| circle_radius(&params, x.sqrt())).collect::<Result<_>>()?
    } else {
        Vec::new()
    };
    Ok(Classification { case, roots, radius, r_bound: bound })
}

/// The r-harmonicity condition at `(m, ℓ) = (1, 2)` written through `|A|²`,
/// next to the condition for CMC r-harmonic hypersurfaces of the unit
/// sphere with mean curvature `-κ/2`. Both are polynomials in `κ²`.
pub fn sphere_consistency(r: u32, kappa: f64) -> Result<(f64, f64)> {
    check_order(r)?;
    let (m, l) = (1.0, 2.0);
    let x = kappa * kappa;
    let rep = quadratic_condition(m, l, r)?;
    let bcv = x * x + rep.coefficients[1] * x + rep.coefficients[2];
    let a2 = x + 0.5 * l * l;
    let dim = 2.0;
    let alpha = -0.5 * kappa;
    let sphere = a2 * a2 - dim * a2 - (r as f64 - 2.0) * dim * dim * alpha * alpha;
    Ok((bcv, sphere))
}

/// A grid of classification tags over `ℓ × m`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiagramGrid {
    pub r: u32,
    pub l_values: Vec<f64>,
    pub m_values: Vec<f64>,
    /// `tags[i][j]` is the tag code at `(m_values[i], l_values[j])`.
    pub tags: Vec<Vec<u8>>,
    /// `(code, name)` pairs.
    pub legend: Vec<(u8, String)>,
    /// `4m = ℓ²` sampled at `l_values`, as `(ℓ, m)` points.
    pub parabola_space_form: Vec<(f64, f64)>,
    /// `4m = 3ℓ²/4` sampled at `l_values`.
    pub parabola_flat_horizontal: Vec<(f64, f64)>,
}

fn linspace(range: (f64, f64), n: usize) -> Vec<f64> {
    (0..n).map(|i| range.0 + (range.1 - range.0) * i as f64 / (n - 1) as f64).collect()
}

/// Tags on a `resolution × resolution` grid; rows are computed in parallel.
pub fn diagram_grid(r: u32, l_range: (f64, f64), m_range: (f64, f64), resolution: usize) -> Result<DiagramGrid> {
    check_order(r)?;
    if resolution < 2 {
        return Err(Error::InvalidArgument(format!("resolution must be at least 2, got {resolution}")));
    }
    let l_values = linspace(l_range, resolution);
    let m_values = linspace(m_range, resolution);
    let tags = m_values
        .par_iter()
        .map(|&m| l_values.iter().map(|&l| classify(m, l, r).map(|c| c.case.code())).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    let legend = CaseTag::ALL.iter().map(|t| (t.code(), t.name().to_string())).collect();
    let parabola_space_form = l_values.iter().map(|&l| (l, 0.25 * l * l)).collect();
    let parabola_flat_horizontal = l_values.iter().map(|&l| (l, 0.1875 * l * l)).collect();
    Ok(DiagramGrid { r, l_values, m_values, tags, legend, parabola_space_form, parabola_flat_horizontal })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadratic_examples() {
        let q = quadratic_condition(1.0, 1.0, 2).unwrap();
        assert!((q.roots[0] + 0.5).abs() < 1e-14 && (q.roots[1] - 3.0).abs() < 1e-14);
        assert_eq!(q.positive_roots.len(), 1);
        let q = quadratic_condition(1.0, 2.0, 5).unwrap();
        assert_eq!(q.positive_roots, vec![1.0]);
        assert!(quadratic_condition(0.9, 2.0, 8).unwrap().roots.is_empty());
        assert!(quadratic_condition(1.0, 1.0, 1).is_err());
    }

    #[test]
    fn bound_and_parabola_parameter() {
        assert!((r_bound(0.9, 2.0).unwrap() - 8.98142).abs() < 1e-5);
        assert!(r_bound(1.0, 1.0).is_err());
        assert!((r_a(1.0 - 1e-9).unwrap() - 4.0).abs() < 1e-3);
        assert!(r_a(0.7).is_err());
    }
}
