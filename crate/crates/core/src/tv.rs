//! Forward-difference gradient, its negative adjoint, and the discrete `TV_p`
//! functional.
//!
//! The gradient uses forward differences with a zero (Neumann) value on the
//! last cell of each axis. `divergence` is its exact negative adjoint, so
//! `<grad u, g> = -<u, div g>` holds to rounding for every pair.

use crate::error::{Error, Result};
use crate::grid::{strides, ImageGrid};
use crate::lp::AnisotropicMetric;

/// One `N`-vector per grid cell, stored cell-major (`data[cell * N + axis]`).
#[derive(Clone, Debug, PartialEq)]
pub struct DualField {
    dims: Vec<usize>,
    data: Vec<f64>,
}

impl DualField {
    pub fn zeros(dims: &[usize]) -> Self {
        let cells: usize = dims.iter().product();
        DualField {
            dims: dims.to_vec(),
            data: vec![0.0; cells * dims.len()],
        }
    }

    pub fn from_data(dims: Vec<usize>, data: Vec<f64>) -> Result<Self> {
        let cells: usize = dims.iter().product();
        if data.len() != cells * dims.len() {
            return Err(Error::Shape(format!(
                "field over {dims:?} needs {} components, got {}",
                cells * dims.len(),
                data.len()
            )));
        }
        Ok(DualField { dims, data })
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn ndim(&self) -> usize {
        self.dims.len()
    }

    pub fn num_cells(&self) -> usize {
        self.dims.iter().product()
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    /// The vector attached to `cell`.
    pub fn cell(&self, cell: usize) -> &[f64] {
        let n = self.dims.len();
        &self.data[cell * n..(cell + 1) * n]
    }

    /// All components along one axis, in cell order.
    pub fn component(&self, axis: usize) -> Vec<f64> {
        self.data
            .iter()
            .skip(axis)
            .step_by(self.dims.len())
            .copied()
            .collect()
    }
}

/// Forward-difference gradient of `u`.
pub fn gradient(u: &ImageGrid) -> DualField {
    let mut g = DualField::zeros(u.dims());
    gradient_into(u.values(), u.dims(), u.spacing(), &mut g.data);
    g
}

pub(crate) fn gradient_into(u: &[f64], dims: &[usize], spacing: &[f64], out: &mut [f64]) {
    match dims.len() {
        1 => {
            let n = dims[0];
            let inv_h = 1.0 / spacing[0];
            for i in 0..n - 1 {
                out[i] = (u[i + 1] - u[i]) * inv_h;
            }
            out[n - 1] = 0.0;
        }
        2 => {
            let (rows, cols) = (dims[0], dims[1]);
            let (inv_h0, inv_h1) = (1.0 / spacing[0], 1.0 / spacing[1]);
            for r in 0..rows {
                for c in 0..cols {
                    let k = r * cols + c;
                    out[2 * k] = if r + 1 < rows {
                        (u[k + cols] - u[k]) * inv_h0
                    } else {
                        0.0
                    };
                    out[2 * k + 1] = if c + 1 < cols {
                        (u[k + 1] - u[k]) * inv_h1
                    } else {
                        0.0
                    };
                }
            }
        }
        n => {
            let st = strides(dims);
            for k in 0..u.len() {
                for a in 0..n {
                    let coord = (k / st[a]) % dims[a];
                    out[k * n + a] = if coord + 1 < dims[a] {
                        (u[k + st[a]] - u[k]) / spacing[a]
                    } else {
                        0.0
                    };
                }
            }
        }
    }
}

/// Negative adjoint of [`gradient`]: `<grad u, g> = -<u, div g>`.
pub fn divergence(g: &DualField, dims: &[usize], spacing: &[f64]) -> Result<ImageGrid> {
    if g.dims() != dims || spacing.len() != dims.len() {
        return Err(Error::Shape(format!(
            "field dims {:?} do not match grid dims {dims:?}",
            g.dims()
        )));
    }
    let mut out = vec![0.0; g.num_cells()];
    divergence_into(&g.data, dims, spacing, &mut out);
    ImageGrid::new(dims.to_vec(), out)
}

pub(crate) fn divergence_into(g: &[f64], dims: &[usize], spacing: &[f64], out: &mut [f64]) {
    match dims.len() {
        1 => {
            let n = dims[0];
            let inv_h = 1.0 / spacing[0];
            if n == 1 {
                out[0] = 0.0;
                return;
            }
            out[0] = g[0] * inv_h;
            for i in 1..n - 1 {
                out[i] = (g[i] - g[i - 1]) * inv_h;
            }
            out[n - 1] = -g[n - 2] * inv_h;
        }
        2 => {
            let (rows, cols) = (dims[0], dims[1]);
            let (inv_h0, inv_h1) = (1.0 / spacing[0], 1.0 / spacing[1]);
            for r in 0..rows {
                for c in 0..cols {
                    let k = r * cols + c;
                    let mut d = 0.0;
                    if r + 1 < rows {
                        d += g[2 * k] * inv_h0;
                    }
                    if r > 0 {
                        d -= g[2 * (k - cols)] * inv_h0;
                    }
                    if c + 1 < cols {
                        d += g[2 * k + 1] * inv_h1;
                    }
                    if c > 0 {
                        d -= g[2 * (k - 1) + 1] * inv_h1;
                    }
                    out[k] = d;
                }
            }
        }
        n => {
            let st = strides(dims);
            for k in 0..out.len() {
                let mut d = 0.0;
                for a in 0..n {
                    let coord = (k / st[a]) % dims[a];
                    if coord + 1 < dims[a] {
                        d += g[k * n + a] / spacing[a];
                    }
                    if coord > 0 {
                        d -= g[(k - st[a]) * n + a] / spacing[a];
                    }
                }
                out[k] = d;
            }
        }
    }
}

/// Upper bound on the operator norm of the discrete gradient:
/// `||grad||^2 <= sum_i 4 / h_i^2`.
pub fn gradient_norm_bound(spacing: &[f64]) -> f64 {
    spacing.iter().map(|h| 4.0 / (h * h)).sum::<f64>().sqrt()
}

/// Discrete `TV_m(u) = sum_cells |grad u|_m * cell_area`.
pub fn tv_p(u: &ImageGrid, m: &AnisotropicMetric) -> Result<f64> {
    m.check_dim(u.ndim())?;
    Ok(tv_unchecked(u, m))
}

pub(crate) fn tv_unchecked(u: &ImageGrid, m: &AnisotropicMetric) -> f64 {
    let n = u.ndim();
    let mut g = vec![0.0; u.len() * n];
    gradient_into(u.values(), u.dims(), u.spacing(), &mut g);
    tv_of_gradient(&g, n, m) * u.cell_area()
}

pub(crate) fn tv_of_gradient(g: &[f64], n: usize, m: &AnisotropicMetric) -> f64 {
    g.chunks_exact(n).map(|c| m.norm(c)).sum()
}

/// Smoothed variant `sum_cells sqrt(|grad u|_m^2 + delta) * cell_area`.
pub fn tv_p_smoothed(u: &ImageGrid, m: &AnisotropicMetric, delta: f64) -> Result<f64> {
    if !(delta > 0.0 && delta.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "smoothing delta must be positive, got {delta}"
        )));
    }
    m.check_dim(u.ndim())?;
    let n = u.ndim();
    let mut g = vec![0.0; u.len() * n];
    gradient_into(u.values(), u.dims(), u.spacing(), &mut g);
    let s: f64 = g
        .chunks_exact(n)
        .map(|c| {
            let r = m.norm(c);
            (r * r + delta).sqrt()
        })
        .sum();
    Ok(s * u.cell_area())
}
