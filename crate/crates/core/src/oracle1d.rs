//! Exact 1D denoising of piecewise-constant signals, plus the four-level
//! counterexample whose assessment function is not quasi-convex.
//!
//! For data that is constant on a partition of `(0, 1)`, the minimizer of
//! `||v - f||^2 + alpha * TV(v)` is constant on the same partition, so the
//! finite problem `sum w_i (v_i - f_i)^2 + alpha * sum |v_{i+1} - v_i|` is
//! exact. It is solved with a weighted taut string.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::ImageGrid;

const WIDTH_TOL: f64 = 1e-12;

/// Piecewise-constant function on `(0, 1)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StepSignal {
    widths: Vec<f64>,
    levels: Vec<f64>,
}

impl StepSignal {
    /// Pieces of the given widths (positive, summing to 1) and levels.
    pub fn new(widths: Vec<f64>, levels: Vec<f64>) -> Result<Self> {
        if widths.is_empty() || widths.len() != levels.len() {
            return Err(Error::InvalidInput(format!(
                "need one level per piece, got {} widths and {} levels",
                widths.len(),
                levels.len()
            )));
        }
        if let Some(w) = widths.iter().find(|w| !(**w > 0.0 && w.is_finite())) {
            return Err(Error::InvalidInput(format!("piece width {w} is not positive")));
        }
        let total: f64 = widths.iter().sum();
        if (total - 1.0).abs() > WIDTH_TOL {
            return Err(Error::InvalidInput(format!("piece widths sum to {total}, not 1")));
        }
        if let Some(v) = levels.iter().find(|v| !v.is_finite()) {
            return Err(Error::InvalidInput(format!("level {v} is not finite")));
        }
        Ok(StepSignal { widths, levels })
    }

    /// Pieces split at the interior `breakpoints` (strictly increasing in `(0, 1)`).
    pub fn from_breakpoints(breakpoints: &[f64], levels: Vec<f64>) -> Result<Self> {
        let mut widths = Vec::with_capacity(breakpoints.len() + 1);
        let mut prev = 0.0;
        for &b in breakpoints {
            if !(b > prev && b < 1.0) {
                return Err(Error::InvalidInput(format!(
                    "breakpoints must increase strictly inside (0, 1), got {breakpoints:?}"
                )));
            }
            widths.push(b - prev);
            prev = b;
        }
        widths.push(1.0 - prev);
        Self::new(widths, levels)
    }

    /// `n` pieces of width `1/n`.
    pub fn uniform(levels: Vec<f64>) -> Result<Self> {
        let n = levels.len();
        Self::new(vec![1.0 / n as f64; n], levels)
    }

    pub fn widths(&self) -> &[f64] {
        &self.widths
    }

    pub fn levels(&self) -> &[f64] {
        &self.levels
    }

    pub fn len(&self) -> usize {
        self.levels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.levels.is_empty()
    }

    /// Interior breakpoints.
    pub fn breakpoints(&self) -> Vec<f64> {
        let mut acc = 0.0;
        self.widths[..self.widths.len() - 1]
            .iter()
            .map(|w| {
                acc += w;
                acc
            })
            .collect()
    }

    pub fn mean(&self) -> f64 {
        self.widths.iter().zip(&self.levels).map(|(w, v)| w * v).sum()
    }

    /// Sum of absolute jumps.
    pub fn total_variation(&self) -> f64 {
        self.levels.windows(2).map(|p| (p[1] - p[0]).abs()).sum()
    }

    /// Squared `L^2(0,1)` distance to a signal on the same partition.
    pub fn l2_distance_sq(&self, other: &StepSignal) -> Result<f64> {
        self.check_partition(other)?;
        Ok(self
            .widths
            .iter()
            .zip(self.levels.iter().zip(&other.levels))
            .map(|(w, (a, b))| w * (a - b) * (a - b))
            .sum())
    }

    fn check_partition(&self, other: &StepSignal) -> Result<()> {
        let same = self.len() == other.len()
            && self
                .widths
                .iter()
                .zip(&other.widths)
                .all(|(a, b)| (a - b).abs() <= WIDTH_TOL);
        if same {
            Ok(())
        } else {
            Err(Error::Shape("signals live on different partitions".into()))
        }
    }

    /// Samples onto `cells` equal cells; every breakpoint must fall on a cell
    /// boundary.
    pub fn rasterize(&self, cells: usize) -> Result<ImageGrid> {
        if cells == 0 {
            return Err(Error::InvalidArgument("need at least one cell".into()));
        }
        let mut values = Vec::with_capacity(cells);
        let mut start = 0usize;
        let mut acc = 0.0;
        for (w, &v) in self.widths.iter().zip(&self.levels) {
            acc += w;
            let end = acc * cells as f64;
            let end_i = end.round();
            if (end - end_i).abs() > 1e-9 || (end_i as usize) <= start {
                return Err(Error::InvalidArgument(format!(
                    "breakpoint {acc} does not fall on a boundary of {cells} cells"
                )));
            }
            let end_i = end_i as usize;
            values.resize(end_i, v);
            start = end_i;
        }
        ImageGrid::signal(values)
    }
}

/// Exact minimizer of `sum w_i (v_i - f_i)^2 + alpha * sum |v_{i+1} - v_i|`.
///
/// In cumulative coordinates `(W_k, F_k) = (sum w, sum w f)` the optimal `V_k`
/// is the shortest path from `(0, 0)` to `(W_n, F_n)` through the tube
/// `|V_k - F_k| <= alpha / 2`; `v_i` is its slope on piece `i`.
pub fn exact_tv1d(f: &StepSignal, alpha: f64) -> StepSignal {
    let n = f.len();
    if alpha <= 0.0 || n == 1 {
        return f.clone();
    }
    let lambda = 0.5 * alpha;
    let mut x = vec![0.0; n + 1];
    let mut y = vec![0.0; n + 1];
    for i in 0..n {
        x[i + 1] = x[i] + f.widths[i];
        y[i + 1] = y[i] + f.widths[i] * f.levels[i];
    }
    let upper = |k: usize| if k == n { y[n] } else { y[k] + lambda };
    let lower = |k: usize| if k == n { y[n] } else { y[k] - lambda };

    let mut v = vec![0.0; n];
    let (mut k0, mut y0) = (0usize, 0.0);
    while k0 < n {
        let (mut lo, mut hi) = (f64::NEG_INFINITY, f64::INFINITY);
        let (mut lo_k, mut hi_k) = (k0, k0);
        let mut k = k0 + 1;
        let (end, slope, end_y) = loop {
            let dx = x[k] - x[k0];
            let s_up = (upper(k) - y0) / dx;
            let s_lo = (lower(k) - y0) / dx;
            if s_up < lo {
                // the string bends down at the last lower contact
                break (lo_k, lo, lower(lo_k));
            }
            if s_lo > hi {
                break (hi_k, hi, upper(hi_k));
            }
            if s_up <= hi {
                hi = s_up;
                hi_k = k;
            }
            if s_lo >= lo {
                lo = s_lo;
                lo_k = k;
            }
            if k == n {
                break (n, (y[n] - y0) / dx, y[n]);
            }
            k += 1;
        };
        v[k0..end].iter_mut().for_each(|vi| *vi = slope);
        k0 = end;
        y0 = end_y;
    }
    StepSignal {
        widths: f.widths.clone(),
        levels: v,
    }
}

/// The four-level noisy/clean pair on quarters of `(0, 1)`.
pub fn counterexample_pair() -> (StepSignal, StepSignal) {
    let q = vec![0.25; 4];
    (
        StepSignal {
            widths: q.clone(),
            levels: vec![-10.0, 2.0, 98.0, 110.0],
        },
        StepSignal {
            widths: q,
            levels: vec![0.0, 20.0, 80.0, 100.0],
        },
    )
}

/// Closed form of the counterexample assessment on `[0, 12]`.
///
/// Its `alpha` is a quarter of the `alpha` in `||u - f||^2 + alpha * TV(u)`:
/// `assessment_closed_form(a)` equals the exact assessment at `4 a`.
pub fn assessment_closed_form(alpha: f64) -> Result<f64> {
    if !(0.0..=12.0).contains(&alpha) {
        return Err(Error::Domain {
            value: alpha,
            domain: "[0, 12]",
        });
    }
    if alpha <= 1.5 {
        let a = 8.0 * alpha - 10.0;
        Ok(0.25 * a * a + 0.25 * a * a + 18.0 * 18.0 / 2.0)
    } else {
        let low = 2.0 + 4.0 * (alpha - 1.5);
        let high = 98.0 - 4.0 * (alpha - 1.5);
        Ok(0.25 * low * low
            + 0.25 * (20.0 - low).powi(2)
            + 0.25 * (80.0 - high).powi(2)
            + 0.25 * (100.0 - high).powi(2))
    }
}

/// `||exact_tv1d(u_eta, alpha) - u_c||^2` for the counterexample pair.
pub fn counterexample_assessment(alpha: f64) -> f64 {
    let (noisy, clean) = counterexample_pair();
    exact_tv1d(&noisy, alpha)
        .l2_distance_sq(&clean)
        .expect("same partition")
}

/// Indices of strict local minima of a sampled landscape (endpoints count
/// when they are strictly below their only neighbour).
pub fn strict_local_minima(values: &[f64]) -> Vec<usize> {
    let n = values.len();
    (0..n)
        .filter(|&i| {
            let left = i == 0 || values[i] < values[i - 1];
            let right = i + 1 == n || values[i] < values[i + 1];
            n > 1 && left && right
        })
        .collect()
}
