//! Finite-difference oracles for the ambient geometry. They only read the
//! metric and the frame in coordinates, so they check the closed-form tables
//! independently.

use crate::error::Result;
use crate::fd;
use crate::space::{Ambient, CoordVec, FrameVec, Point3};

type Mat3 = [[f64; 3]; 3];

fn axis(a: usize) -> CoordVec {
    let mut v = [0.0; 3];
    v[a] = 1.0;
    CoordVec(v)
}

/// Metric matrix `g_ab` in coordinates.
pub fn metric_matrix<S: Ambient + ?Sized>(space: &S, p: Point3) -> Result<Mat3> {
    let mut g = [[0.0; 3]; 3];
    for a in 0..3 {
        for b in a..3 {
            let v = space.metric(p, axis(a), axis(b))?;
            g[a][b] = v;
            g[b][a] = v;
        }
    }
    Ok(g)
}

fn invert(m: &Mat3) -> Mat3 {
    let det = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
    let mut inv = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            let (r0, r1) = ((j + 1) % 3, (j + 2) % 3);
            let (c0, c1) = ((i + 1) % 3, (i + 2) % 3);
            inv[i][j] = (m[r0][c0] * m[r1][c1] - m[r0][c1] * m[r1][c0]) / det;
        }
    }
    inv
}

fn flat(m: Mat3) -> [f64; 9] {
    let mut out = [0.0; 9];
    for i in 0..3 {
        for j in 0..3 {
            out[3 * i + j] = m[i][j];
        }
    }
    out
}

/// Christoffel symbols `Γ^k_ab` (index order `[k][a][b]`) from the Koszul
/// formula on coordinate fields, with metric derivatives taken numerically.
pub fn christoffel_fd<S: Ambient + ?Sized>(space: &S, p: Point3, h: f64) -> Result<[[[f64; 3]; 3]; 3]> {
    let g = metric_matrix(space, p)?;
    let gi = invert(&g);
    let mut dg = [[[0.0; 3]; 3]; 3];
    for c in 0..3 {
        let d = fd::first(|t| Ok(flat(metric_matrix(space, p.offset(axis(c), t))?)), 0.0, h)?;
        for a in 0..3 {
            for b in 0..3 {
                dg[c][a][b] = d[3 * a + b];
            }
        }
    }
    let mut gamma = [[[0.0; 3]; 3]; 3];
    for k in 0..3 {
        for a in 0..3 {
            for b in 0..3 {
                gamma[k][a][b] = (0..3)
                    .map(|l| 0.5 * gi[k][l] * (dg[a][b][l] + dg[b][a][l] - dg[l][a][b]))
                    .sum();
            }
        }
    }
    Ok(gamma)
}

/// `∇_{E_i} E_j` in frame components, computed from coordinate Christoffel
/// symbols and numerical derivatives of the frame.
pub fn connection_fd_oracle<S: Ambient + ?Sized>(space: &S, p: Point3, i: usize, j: usize, h: f64) -> Result<FrameVec> {
    let gamma = christoffel_fd(space, p, h)?;
    let e = space.frame(p)?;
    let ei = e[i];
    let ej = e[j];
    let mut out = [0.0; 3];
    for a in 0..3 {
        if ei.0[a] == 0.0 {
            continue;
        }
        let dej = fd::first(|t| Ok(space.frame(p.offset(axis(a), t))?[j].0), 0.0, h)?;
        for k in 0..3 {
            let chr: f64 = (0..3).map(|b| gamma[k][a][b] * ej.0[b]).sum();
            out[k] += ei.0[a] * (dej[k] + chr);
        }
    }
    space.to_frame(p, CoordVec(out))
}

/// `[E_i, E_j]` in frame components from numerical derivatives of the frame.
pub fn bracket_fd_oracle<S: Ambient + ?Sized>(space: &S, p: Point3, i: usize, j: usize, h: f64) -> Result<FrameVec> {
    let e = space.frame(p)?;
    let along = |v: CoordVec, k: usize| -> Result<[f64; 3]> {
        fd::first(|t| Ok(space.frame(p.offset(v, t))?[k].0), 0.0, h)
    };
    let a = along(e[i], j)?;
    let b = along(e[j], i)?;
    space.to_frame(p, CoordVec([a[0] - b[0], a[1] - b[1], a[2] - b[2]]))
}

/// `∇_{E_i} W` for a field given by its frame components as a function of the point.
fn covariant_of_field<S, W>(space: &S, p: Point3, i: usize, w: W, h: f64) -> Result<FrameVec>
where
    S: Ambient + ?Sized,
    W: Fn(Point3) -> Result<FrameVec>,
{
    let ei = space.frame(p)?[i];
    let dw = fd::first(|t| w(p.offset(ei, t)), 0.0, h)?;
    Ok(dw + space.frozen_covariant(p, FrameVec::basis(i), w(p)?))
}

/// `R(E_i, E_j)E_k` from differentiating the connection table along the frame.
pub fn curvature_fd_oracle<S: Ambient + ?Sized>(space: &S, p: Point3, i: usize, j: usize, k: usize, h: f64) -> Result<FrameVec> {
    let nab_jk = |q: Point3| Ok(space.connection(q, j, k));
    let nab_ik = |q: Point3| Ok(space.connection(q, i, k));
    let a = covariant_of_field(space, p, i, nab_jk, h)?;
    let b = covariant_of_field(space, p, j, nab_ik, h)?;
    let br = space.bracket(p, i, j);
    let c = space.frozen_covariant(p, br, FrameVec::basis(k));
    Ok(a - b - c)
}

/// `E_i⟨E_j, E_k⟩ - ⟨∇_{E_i}E_j, E_k⟩ - ⟨E_j, ∇_{E_i}E_k⟩`, with the
/// derivative of the pairing taken numerically.
pub fn metric_compatibility_residual<S: Ambient + ?Sized>(space: &S, p: Point3, i: usize, j: usize, k: usize, h: f64) -> Result<f64> {
    let ei = space.frame(p)?[i];
    let pairing = |q: Point3| -> Result<f64> {
        let e = space.frame(q)?;
        space.metric(q, e[j], e[k])
    };
    let d = fd::first(|t| pairing(p.offset(ei, t)), 0.0, h)?;
    let a = space.connection(p, i, j).0[k];
    let b = space.connection(p, i, k).0[j];
    Ok(d - a - b)
}
