//! Level-2 solver: `u = argmin ||u - u_eta||^2 + alpha * TV_m(u)`.
//!
//! The saddle-point form `min_u max_{|phi|_m* <= 1} ||u - u_eta||^2 - alpha <u, div phi>`
//! is solved with a first-order primal-dual iteration (dual ascent with
//! projection onto the dual ball, exact proximal step on the quadratic
//! fidelity, primal extrapolation). All inner products are area weighted.

use crate::error::{Error, Result};
use crate::grid::{l2_distance_sq, ImageGrid};
use crate::lp::{AnisotropicMetric, PExponent, PROJECTION_TOL};
use crate::tv::{divergence_into, gradient_into, gradient_norm_bound, tv_of_gradient, DualField};

pub const DEFAULT_TOL: f64 = 1e-6;
pub const DEFAULT_MAX_ITER: usize = 20_000;
/// Step products are kept at `tau * sigma * ||K||^2 = STEP_SAFETY^2`.
pub const STEP_SAFETY: f64 = 0.99;

const ADAPT_RATE: f64 = 0.5;
const ADAPT_DECAY: f64 = 0.95;
const ADAPT_BAND: f64 = 1.5;
const ADAPT_FLOOR: f64 = 1e-8;

/// Parameters of one Level-2 solve.
#[derive(Clone, Debug, PartialEq)]
pub struct DenoiseParams {
    pub alpha: f64,
    pub metric: AnisotropicMetric,
    pub tol: f64,
    pub max_iter: usize,
    /// Primal step; derived from the operator norm when `None`.
    pub step_primal: Option<f64>,
    /// Dual step; derived from the operator norm when `None`.
    pub step_dual: Option<f64>,
}

impl DenoiseParams {
    pub fn new(alpha: f64, metric: AnisotropicMetric) -> Self {
        DenoiseParams {
            alpha,
            metric,
            tol: DEFAULT_TOL,
            max_iter: DEFAULT_MAX_ITER,
            step_primal: None,
            step_dual: None,
        }
    }

    pub fn lp(alpha: f64, p: PExponent) -> Self {
        Self::new(alpha, AnisotropicMetric::lp(p))
    }

    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    pub fn with_max_iter(mut self, max_iter: usize) -> Self {
        self.max_iter = max_iter;
        self
    }

    pub fn with_steps(mut self, tau: f64, sigma: f64) -> Self {
        self.step_primal = Some(tau);
        self.step_dual = Some(sigma);
        self
    }

    /// Same solver settings with another `(alpha, metric)`.
    pub fn at(&self, alpha: f64, metric: AnisotropicMetric) -> Self {
        DenoiseParams {
            alpha,
            metric,
            ..self.clone()
        }
    }

    fn validate(&self, u_eta: &ImageGrid) -> Result<()> {
        if !(self.alpha >= 0.0 && self.alpha.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "alpha must be finite and >= 0, got {}",
                self.alpha
            )));
        }
        if !(self.tol > 0.0) {
            return Err(Error::InvalidArgument(format!("tol must be > 0, got {}", self.tol)));
        }
        if self.max_iter == 0 {
            return Err(Error::InvalidArgument("max_iter must be >= 1".into()));
        }
        self.metric.check_dim(u_eta.ndim())
    }

    /// `(tau, sigma)` for an image with the given spacing.
    ///
    /// The operator is `K = alpha * grad`; by default `tau = sigma = 0.99 / ||K||`.
    /// Default steps are rebalanced during the solve, explicit ones are kept.
    pub fn steps(&self, spacing: &[f64]) -> Result<(f64, f64)> {
        let op_norm = self.alpha * gradient_norm_bound(spacing);
        let (tau, sigma) = match (self.step_primal, self.step_dual) {
            (Some(t), Some(s)) => (t, s),
            (Some(t), None) => (t, STEP_SAFETY * STEP_SAFETY / (t * op_norm * op_norm)),
            (None, Some(s)) => (STEP_SAFETY * STEP_SAFETY / (s * op_norm * op_norm), s),
            (None, None) => (STEP_SAFETY / op_norm, STEP_SAFETY / op_norm),
        };
        if !(tau > 0.0 && sigma > 0.0 && tau.is_finite() && sigma.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "steps must be positive, got tau = {tau}, sigma = {sigma}"
            )));
        }
        if tau * sigma * op_norm * op_norm > 1.0 + 1e-12 {
            return Err(Error::InvalidArgument(format!(
                "step condition violated: tau * sigma * L^2 = {}",
                tau * sigma * op_norm * op_norm
            )));
        }
        Ok((tau, sigma))
    }
}

/// Minimizer with convergence diagnostics.
#[derive(Clone, Debug)]
pub struct DenoiseResult {
    pub u: ImageGrid,
    pub dual: DualField,
    pub iterations: usize,
    /// Final normalized primal-dual residual.
    pub residual: f64,
    /// `TV_m(u)`.
    pub tv_value: f64,
    /// `||u - u_eta||^2` (area weighted).
    pub fidelity: f64,
    pub converged: bool,
    /// Primal-dual gap at the returned pair; `||u - u*||^2 <= duality_gap`.
    pub duality_gap: f64,
}

impl DenoiseResult {
    /// Level-2 energy at the returned `u`.
    pub fn energy(&self, alpha: f64) -> f64 {
        self.fidelity + alpha * self.tv_value
    }

    /// Certified bound on `||u - u*||_{L^2}` from the duality gap.
    pub fn error_bound(&self) -> f64 {
        self.duality_gap.max(0.0).sqrt()
    }
}

/// Level-2 energy `||u - u_eta||^2 + alpha * TV_m(u)`.
pub fn energy(u: &ImageGrid, u_eta: &ImageGrid, alpha: f64, metric: &AnisotropicMetric) -> Result<f64> {
    u.check_same_shape(u_eta)?;
    Ok(u.l2_distance_sq(u_eta) + alpha * crate::tv::tv_p(u, metric)?)
}

/// Solves the Level-2 problem starting from `u_eta`.
pub fn denoise(u_eta: &ImageGrid, params: &DenoiseParams) -> Result<DenoiseResult> {
    denoise_from(u_eta, params, u_eta)
}

/// Solves the Level-2 problem from an arbitrary primal starting point.
pub fn denoise_from(u_eta: &ImageGrid, params: &DenoiseParams, init: &ImageGrid) -> Result<DenoiseResult> {
    denoise_warm(u_eta, params, init, None)
}

/// Solves the Level-2 problem from a primal and (optionally) a dual starting
/// point, e.g. the solution at a nearby `alpha`. The dual start is projected
/// onto the dual ball first.
pub fn denoise_warm(
    u_eta: &ImageGrid,
    params: &DenoiseParams,
    init: &ImageGrid,
    init_dual: Option<&DualField>,
) -> Result<DenoiseResult> {
    params.validate(u_eta)?;
    init.check_same_shape(u_eta)?;
    if let Some(d) = init_dual {
        if d.dims() != u_eta.dims() {
            return Err(Error::Shape(format!(
                "dual start over {:?}, data over {:?}",
                d.dims(),
                u_eta.dims()
            )));
        }
    }
    let dims = u_eta.dims().to_vec();
    let n = dims.len();
    let cells = u_eta.len();
    let area = u_eta.cell_area();
    let f = u_eta.values();
    let alpha = params.alpha;
    let metric = &params.metric;

    if alpha == 0.0 {
        return Ok(finish(u_eta, u_eta.values().to_vec(), DualField::zeros(&dims), 0, 0.0, true, params));
    }

    let spacing = u_eta.spacing().to_vec();
    let mut grad_f = vec![0.0; cells * n];
    gradient_into(f, &dims, &spacing, &mut grad_f);
    let grad_f_norm = (grad_f.iter().map(|v| v * v).sum::<f64>() * area).sqrt();
    let f_norm = u_eta.l2_norm();

    let (mut tau, mut sigma) = params.steps(&spacing)?;
    let adaptive = params.step_primal.is_none() && params.step_dual.is_none();
    let mut adapt_rate = ADAPT_RATE;
    let mut last_dir = 0;
    let primal_scale = if f_norm > 0.0 { 2.0 * f_norm } else { 1.0 };
    let dual_scale = if grad_f_norm > 0.0 { alpha * grad_f_norm } else { 1.0 };

    let mut u = init.values().to_vec();
    let mut u_new = vec![0.0; cells];
    let mut grad_u = vec![0.0; cells * n];
    gradient_into(&u, &dims, &spacing, &mut grad_u);
    let mut grad_u_new = vec![0.0; cells * n];
    let mut grad_bar = grad_u.clone();
    let mut phi = vec![0.0; cells * n];
    if let Some(d) = init_dual {
        phi.copy_from_slice(d.data());
        for c in phi.chunks_exact_mut(n) {
            metric.project_dual(c, PROJECTION_TOL)?;
        }
    }
    let mut phi_new = vec![0.0; cells * n];
    let mut div_phi = vec![0.0; cells];
    divergence_into(&phi, &dims, &spacing, &mut div_phi);
    let mut div_phi_new = vec![0.0; cells];

    let mut residual = f64::INFINITY;
    let mut converged = false;
    let mut iterations = 0;

    for k in 1..=params.max_iter {
        iterations = k;
        let sa = sigma * alpha;
        let ta = tau * alpha;
        let denom = 1.0 / (1.0 + 2.0 * tau);
        // dual ascent + projection onto the dual ball
        for c in 0..cells {
            let base = c * n;
            for a in 0..n {
                phi_new[base + a] = phi[base + a] + sa * grad_bar[base + a];
            }
            metric.project_dual(&mut phi_new[base..base + n], PROJECTION_TOL)?;
        }
        divergence_into(&phi_new, &dims, &spacing, &mut div_phi_new);

        // exact prox of the quadratic fidelity
        for i in 0..cells {
            u_new[i] = (u[i] + ta * div_phi_new[i] + 2.0 * tau * f[i]) * denom;
        }
        gradient_into(&u_new, &dims, &spacing, &mut grad_u_new);

        // residuals
        let mut rp = 0.0;
        for i in 0..cells {
            let r = (u[i] - u_new[i]) / tau + alpha * (div_phi[i] - div_phi_new[i]);
            rp += r * r;
        }
        let mut rd = 0.0;
        for j in 0..cells * n {
            let r = (phi[j] - phi_new[j]) / sigma - alpha * (grad_u[j] - grad_u_new[j]);
            rd += r * r;
        }
        let rp = (rp * area).sqrt() / primal_scale;
        let rd = (rd * area).sqrt() / dual_scale;
        residual = rp + rd;

        for j in 0..cells * n {
            grad_bar[j] = 2.0 * grad_u_new[j] - grad_u[j];
        }
        std::mem::swap(&mut u, &mut u_new);
        std::mem::swap(&mut phi, &mut phi_new);
        std::mem::swap(&mut div_phi, &mut div_phi_new);
        std::mem::swap(&mut grad_u, &mut grad_u_new);

        if !residual.is_finite() {
            return Err(Error::NumericFailure(format!(
                "non-finite iterate at iteration {k}"
            )));
        }
        if residual <= params.tol {
            converged = true;
            break;
        }
        // keep the two residuals of comparable size; tau * sigma is unchanged
        if adaptive && adapt_rate > ADAPT_FLOOR {
            let dir = if rp > ADAPT_BAND * rd {
                1
            } else if rd > ADAPT_BAND * rp {
                -1
            } else {
                0
            };
            if dir != 0 {
                // the rate only shrinks when the balance overshoots
                if dir == -last_dir {
                    adapt_rate *= ADAPT_DECAY;
                }
                let factor = if dir > 0 { 1.0 / (1.0 - adapt_rate) } else { 1.0 - adapt_rate };
                tau *= factor;
                sigma /= factor;
                last_dir = dir;
            }
        }
    }

    let dual = DualField::from_data(dims, phi)?;
    Ok(finish(u_eta, u, dual, iterations, residual, converged, params))
}

fn finish(
    u_eta: &ImageGrid,
    u: Vec<f64>,
    dual: DualField,
    iterations: usize,
    residual: f64,
    converged: bool,
    params: &DenoiseParams,
) -> DenoiseResult {
    let u = u_eta.with_values_unchecked(u);
    let n = u.ndim();
    let area = u.cell_area();
    let mut g = vec![0.0; u.len() * n];
    gradient_into(u.values(), u.dims(), u.spacing(), &mut g);
    let tv_value = tv_of_gradient(&g, n, &params.metric) * area;
    let fidelity = l2_distance_sq(u.values(), u_eta.values(), area);
    let duality_gap = gap(u_eta, &dual, fidelity + params.alpha * tv_value, params.alpha);
    DenoiseResult {
        u,
        dual,
        iterations,
        residual,
        tv_value,
        fidelity,
        converged,
        duality_gap,
    }
}

/// `P(u) - D(phi)` with `D(phi) = -alpha <f, div phi> - alpha^2/4 ||div phi||^2`.
fn gap(u_eta: &ImageGrid, dual: &DualField, primal: f64, alpha: f64) -> f64 {
    if alpha == 0.0 {
        return primal;
    }
    let mut div = vec![0.0; u_eta.len()];
    divergence_into(dual.data(), u_eta.dims(), u_eta.spacing(), &mut div);
    let area = u_eta.cell_area();
    let fd: f64 = u_eta.values().iter().zip(&div).map(|(a, b)| a * b).sum::<f64>() * area;
    let dd: f64 = div.iter().map(|v| v * v).sum::<f64>() * area;
    let dual_value = -alpha * fd - 0.25 * alpha * alpha * dd;
    (primal - dual_value).max(0.0)
}

/// Minimizes the smoothed energy `||u - u_eta||^2 + alpha * TV_m^delta(u)` by
/// accelerated gradient descent with backtracking and adaptive restart.
///
/// Independent of the primal-dual path; used to cross-check [`denoise`].
pub fn denoise_smoothed(u_eta: &ImageGrid, params: &DenoiseParams, delta: f64) -> Result<DenoiseResult> {
    if !(delta > 0.0 && delta.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "smoothing delta must be positive, got {delta}"
        )));
    }
    params.validate(u_eta)?;
    let dims = u_eta.dims().to_vec();
    let n = dims.len();
    let cells = u_eta.len();
    let area = u_eta.cell_area();
    let spacing = u_eta.spacing().to_vec();
    let f = u_eta.values();
    let alpha = params.alpha;
    let metric = &params.metric;

    if alpha == 0.0 {
        return Ok(finish(u_eta, f.to_vec(), DualField::zeros(&dims), 0, 0.0, true, params));
    }

    let mut g = vec![0.0; cells * n];
    let mut zeta = vec![0.0; cells * n];
    let mut div = vec![0.0; cells];

    // energy (per unit area) and gradient (in the area-weighted inner product)
    let mut objective = |u: &[f64], grad: Option<&mut [f64]>| -> f64 {
        gradient_into(u, &dims, &spacing, &mut g);
        let mut e = 0.0;
        for i in 0..cells {
            e += (u[i] - f[i]) * (u[i] - f[i]);
        }
        let mut reg = 0.0;
        for c in 0..cells {
            let cell = &g[c * n..(c + 1) * n];
            reg += smoothed_cell(metric, cell, delta, &mut zeta[c * n..(c + 1) * n]);
        }
        if let Some(out) = grad {
            divergence_into(&zeta, &dims, &spacing, &mut div);
            for i in 0..cells {
                out[i] = 2.0 * (u[i] - f[i]) - alpha * div[i];
            }
        }
        (e + alpha * reg) * area
    };

    let scale = if u_eta.l2_norm() > 0.0 { 2.0 * u_eta.l2_norm() } else { 1.0 };
    let mut x = f.to_vec();
    let mut y = x.clone();
    let mut x_new = vec![0.0; cells];
    let mut grad_y = vec![0.0; cells];
    let mut grad_x = vec![0.0; cells];
    let mut lip = 2.0;
    let mut t = 1.0_f64;
    let mut residual = f64::INFINITY;
    let mut converged = false;
    let mut iterations = 0;
    let mut fx = objective(&x, Some(&mut grad_x));

    for k in 1..=params.max_iter {
        iterations = k;
        let fy = objective(&y, Some(&mut grad_y));
        let gy_sq: f64 = grad_y.iter().map(|v| v * v).sum::<f64>() * area;
        // backtracking on the Lipschitz estimate
        loop {
            for i in 0..cells {
                x_new[i] = y[i] - grad_y[i] / lip;
            }
            let fx_new = objective(&x_new, None);
            if fx_new <= fy - 0.5 * gy_sq / lip + 1e-15 * fy.abs() {
                break;
            }
            lip *= 2.0;
            if !lip.is_finite() {
                return Err(Error::NumericFailure("smoothed solver: step underflow".into()));
            }
        }
        let fx_new = objective(&x_new, Some(&mut grad_x));
        residual = (grad_x.iter().map(|v| v * v).sum::<f64>() * area).sqrt() / scale;
        if !residual.is_finite() {
            return Err(Error::NumericFailure(format!("non-finite iterate at iteration {k}")));
        }
        if residual <= params.tol {
            std::mem::swap(&mut x, &mut x_new);
            converged = true;
            break;
        }
        // restart the momentum whenever the objective goes up
        let t_new = if fx_new > fx { 1.0 } else { 0.5 * (1.0 + (1.0 + 4.0 * t * t).sqrt()) };
        let beta = if fx_new > fx { 0.0 } else { (t - 1.0) / t_new };
        for i in 0..cells {
            y[i] = x_new[i] + beta * (x_new[i] - x[i]);
        }
        t = t_new;
        fx = fx_new;
        std::mem::swap(&mut x, &mut x_new);
    }

    Ok(finish(u_eta, x, DualField::zeros(&dims), iterations, residual, converged, params))
}

/// `sqrt(|g|^2 + delta)` for one cell; writes its gradient with respect to
/// `g` into `zeta`.
fn smoothed_cell(metric: &AnisotropicMetric, g: &[f64], delta: f64, zeta: &mut [f64]) -> f64 {
    let r = metric.norm(g);
    let s = (r * r + delta).sqrt();
    if r == 0.0 {
        zeta.iter_mut().for_each(|z| *z = 0.0);
        return s;
    }
    let p = metric.p();
    let scales: Option<&[f64]> = match metric {
        AnisotropicMetric::Lp(_) => None,
        AnisotropicMetric::SkewedLp(sk) => Some(sk.scales()),
    };
    // d|Dg|_p / dg_i = d_i * sign(y_i) |y_i|^(p-1) / |y|_p^(p-1), y = D g
    let d = |i: usize| scales.map_or(1.0, |s| s[i]);
    if p.is_infinite() {
        let (mut best, mut arg) = (-1.0, 0);
        for (i, &gi) in g.iter().enumerate() {
            if (d(i) * gi).abs() > best {
                best = (d(i) * gi).abs();
                arg = i;
            }
        }
        for (i, z) in zeta.iter_mut().enumerate() {
            *z = if i == arg { d(i) * g[i].signum() * r / s } else { 0.0 };
        }
    } else {
        let pp = p.value();
        for (i, z) in zeta.iter_mut().enumerate() {
            let y = d(i) * g[i];
            let dn = d(i) * y.signum() * (y.abs() / r).powf(pp - 1.0);
            *z = dn * r / s;
        }
    }
    s
}
