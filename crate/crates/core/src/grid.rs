//! Grid functions on the unit cube `(0, 1)^N`.

use crate::error::{Error, Result};

/// A scalar function sampled on a regular grid over `(0, 1)^N`.
///
/// Values are stored row-major (last axis fastest); the spacing along axis
/// `i` is `1 / dims[i]`.
#[derive(Clone, Debug, PartialEq)]
pub struct ImageGrid {
    dims: Vec<usize>,
    spacing: Vec<f64>,
    values: Vec<f64>,
}

impl ImageGrid {
    pub fn new(dims: Vec<usize>, values: Vec<f64>) -> Result<Self> {
        if dims.is_empty() || dims.contains(&0) {
            return Err(Error::Shape(format!("invalid dims {dims:?}")));
        }
        let len: usize = dims.iter().product();
        if len != values.len() {
            return Err(Error::Shape(format!(
                "dims {dims:?} need {len} values, got {}",
                values.len()
            )));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidInput(format!("value at index {i} is not finite")));
        }
        let spacing = dims.iter().map(|&d| 1.0 / d as f64).collect();
        Ok(ImageGrid {
            dims,
            spacing,
            values,
        })
    }

    /// A 1D signal.
    pub fn signal(values: Vec<f64>) -> Result<Self> {
        Self::new(vec![values.len()], values)
    }

    /// A 2D image with `rows` x `cols` cells.
    pub fn image(rows: usize, cols: usize, values: Vec<f64>) -> Result<Self> {
        Self::new(vec![rows, cols], values)
    }

    pub fn constant(dims: Vec<usize>, value: f64) -> Result<Self> {
        let len = dims.iter().product();
        Self::new(dims, vec![value; len])
    }

    pub fn from_fn(dims: Vec<usize>, mut f: impl FnMut(&[usize]) -> f64) -> Result<Self> {
        let len: usize = dims.iter().product();
        let mut idx = vec![0usize; dims.len()];
        let mut values = Vec::with_capacity(len);
        for _ in 0..len {
            values.push(f(&idx));
            for a in (0..dims.len()).rev() {
                idx[a] += 1;
                if idx[a] < dims[a] {
                    break;
                }
                idx[a] = 0;
            }
        }
        Self::new(dims, values)
    }

    /// Same shape, new values (checked).
    pub fn with_values(&self, values: Vec<f64>) -> Result<Self> {
        Self::new(self.dims.clone(), values)
    }

    pub(crate) fn with_values_unchecked(&self, values: Vec<f64>) -> Self {
        debug_assert_eq!(values.len(), self.values.len());
        ImageGrid {
            dims: self.dims.clone(),
            spacing: self.spacing.clone(),
            values,
        }
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn ndim(&self) -> usize {
        self.dims.len()
    }

    pub fn spacing(&self) -> &[f64] {
        &self.spacing
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Measure of one cell, `prod_i h_i`.
    pub fn cell_area(&self) -> f64 {
        self.spacing.iter().product()
    }

    /// Row-major strides.
    pub fn strides(&self) -> Vec<usize> {
        strides(&self.dims)
    }

    pub fn same_shape(&self, other: &ImageGrid) -> bool {
        self.dims == other.dims
    }

    pub(crate) fn check_same_shape(&self, other: &ImageGrid) -> Result<()> {
        if self.same_shape(other) {
            Ok(())
        } else {
            Err(Error::Shape(format!(
                "dims {:?} and {:?} differ",
                self.dims, other.dims
            )))
        }
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    /// `max - min`.
    pub fn range(&self) -> f64 {
        self.max() - self.min()
    }

    pub fn is_constant(&self) -> bool {
        let first = self.values[0];
        self.values.iter().all(|&v| v == first)
    }

    /// Squared `L^2(Q)` norm (area weighted).
    pub fn l2_norm_sq(&self) -> f64 {
        self.values.iter().map(|v| v * v).sum::<f64>() * self.cell_area()
    }

    pub fn l2_norm(&self) -> f64 {
        self.l2_norm_sq().sqrt()
    }

    /// Squared `L^2(Q)` distance; panics on shape mismatch.
    pub fn l2_distance_sq(&self, other: &ImageGrid) -> f64 {
        assert!(self.same_shape(other), "shape mismatch");
        l2_distance_sq(&self.values, &other.values, self.cell_area())
    }

    pub fn l2_distance(&self, other: &ImageGrid) -> f64 {
        self.l2_distance_sq(other).sqrt()
    }

    /// Area-weighted mean `(1/|Q|) int_Q u`; `|Q| = 1`.
    pub fn mean(&self) -> f64 {
        mean_value(self)
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Result<ImageGrid> {
        self.with_values(self.values.iter().map(|&v| f(v)).collect())
    }
}

pub(crate) fn strides(dims: &[usize]) -> Vec<usize> {
    let mut s = vec![1usize; dims.len()];
    for a in (0..dims.len().saturating_sub(1)).rev() {
        s[a] = s[a + 1] * dims[a + 1];
    }
    s
}

pub(crate) fn l2_distance_sq(a: &[f64], b: &[f64], area: f64) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        * area
}

/// Area-weighted average of `u` over the unit cube.
pub fn mean_value(u: &ImageGrid) -> f64 {
    // Kahan summation keeps the mean of large constant images exact.
    let mut sum = 0.0;
    let mut c = 0.0;
    for &v in &u.values {
        let y = v - c;
        let t = sum + y;
        c = (t - sum) - y;
        sum = t;
    }
    sum / u.values.len() as f64
}
