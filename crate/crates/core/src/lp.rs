//! Finite-dimensional `l^p` geometry.
//!
//! Exponents are stored as `s = 1/p`, so the closed interval `[0, 1]` covers
//! `p` in `[1, inf]` with `s = 0` standing for `p = inf`. The dual exponent is
//! then simply `1 - s`.

use std::cmp::Ordering;
use std::fmt;

use serde::de::{self, Deserializer, Visitor};
use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};

/// Distance (in `s = 1/p`) below which an exponent snaps to `inf`, `2` or `1`.
pub const SNAP_TOL: f64 = 1e-9;

/// Default relative tolerance for the general `l^q` ball projection.
pub const PROJECTION_TOL: f64 = 1e-12;

/// An exponent `p` in `[1, inf]`, stored as its reciprocal.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PExponent {
    inv_p: f64,
}

impl PExponent {
    pub const ONE: PExponent = PExponent { inv_p: 1.0 };
    pub const TWO: PExponent = PExponent { inv_p: 0.5 };
    pub const INFINITY: PExponent = PExponent { inv_p: 0.0 };

    /// Builds an exponent from `s = 1/p`.
    pub fn from_inv(inv_p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&inv_p) {
            return Err(Error::InvalidInput(format!(
                "1/p = {inv_p} is outside [0, 1]"
            )));
        }
        Ok(PExponent {
            inv_p: snap(inv_p),
        })
    }

    /// Builds an exponent from `p` itself; `f64::INFINITY` is accepted.
    pub fn new(p: f64) -> Result<Self> {
        if p.is_nan() || p < 1.0 {
            return Err(Error::InvalidInput(format!("p = {p} is not in [1, inf]")));
        }
        if p.is_infinite() {
            return Ok(Self::INFINITY);
        }
        Self::from_inv(1.0 / p)
    }

    /// The exact reciprocal `i / k` of the rational exponent `p = k / i`.
    pub fn ratio(k: u64, i: u64) -> Result<Self> {
        if i == 0 {
            return Ok(Self::INFINITY);
        }
        Self::from_inv(i as f64 / k as f64)
    }

    #[inline]
    pub fn inv(self) -> f64 {
        self.inv_p
    }

    #[inline]
    pub fn value(self) -> f64 {
        if self.inv_p == 0.0 {
            f64::INFINITY
        } else {
            1.0 / self.inv_p
        }
    }

    #[inline]
    pub fn is_infinite(self) -> bool {
        self.inv_p == 0.0
    }

    #[inline]
    pub fn is_one(self) -> bool {
        self.inv_p == 1.0
    }

    #[inline]
    pub fn is_two(self) -> bool {
        self.inv_p == 0.5
    }

    /// Ordering by `p` (so `1 < 2 < inf`).
    pub fn cmp_p(self, other: Self) -> Ordering {
        other.inv_p.total_cmp(&self.inv_p)
    }
}

fn snap(s: f64) -> f64 {
    for anchor in [0.0, 0.5, 1.0] {
        if (s - anchor).abs() <= SNAP_TOL {
            return anchor;
        }
    }
    s
}

impl fmt::Display for PExponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_infinite() {
            f.pad("inf")
        } else {
            f.pad(&self.value().to_string())
        }
    }
}

impl std::str::FromStr for PExponent {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        match t.to_ascii_lowercase().as_str() {
            "inf" | "infinity" | "+inf" => Ok(Self::INFINITY),
            _ => {
                let p: f64 = t
                    .parse()
                    .map_err(|_| Error::InvalidInput(format!("cannot parse p from {s:?}")))?;
                Self::new(p)
            }
        }
    }
}

impl Serialize for PExponent {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        if self.is_infinite() {
            serializer.serialize_str("inf")
        } else {
            serializer.serialize_f64(self.value())
        }
    }
}

impl<'de> Deserialize<'de> for PExponent {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        struct PVisitor;

        impl Visitor<'_> for PVisitor {
            type Value = PExponent;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a number >= 1 or \"inf\"")
            }

            fn visit_f64<E: de::Error>(self, v: f64) -> std::result::Result<PExponent, E> {
                PExponent::new(v).map_err(E::custom)
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<PExponent, E> {
                self.visit_f64(v as f64)
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<PExponent, E> {
                self.visit_f64(v as f64)
            }

            fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<PExponent, E> {
                v.parse().map_err(E::custom)
            }
        }

        deserializer.deserialize_any(PVisitor)
    }
}

/// Returns the Hölder conjugate `p*` with `1/p + 1/p* = 1`.
pub fn dual_exponent(p: PExponent) -> PExponent {
    PExponent {
        inv_p: 1.0 - p.inv_p,
    }
}

/// `|x|_p`, rejecting non-finite components.
pub fn lp_norm(x: &[f64], p: PExponent) -> Result<f64> {
    check_finite(x)?;
    Ok(norm(x, p))
}

fn check_finite(x: &[f64]) -> Result<()> {
    if x.is_empty() {
        return Err(Error::InvalidInput("empty vector".into()));
    }
    if let Some(i) = x.iter().position(|v| !v.is_finite()) {
        return Err(Error::InvalidInput(format!(
            "component {i} is not finite ({})",
            x[i]
        )));
    }
    Ok(())
}

/// `|x|_p` without validation. The largest magnitude is factored out before
/// powering so large or tiny entries do not overflow.
pub(crate) fn norm(x: &[f64], p: PExponent) -> f64 {
    let s = p.inv_p;
    if s == 1.0 {
        return x.iter().map(|v| v.abs()).sum();
    }
    if s == 0.5 {
        return hypot_all(x);
    }
    let m = x.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    if s == 0.0 || m == 0.0 {
        return m;
    }
    let pp = 1.0 / s;
    let sum: f64 = x.iter().map(|v| (v.abs() / m).powf(pp)).sum();
    m * sum.powf(s)
}

fn hypot_all(x: &[f64]) -> f64 {
    match x.len() {
        1 => x[0].abs(),
        2 => x[0].hypot(x[1]),
        _ => {
            let m = x.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
            if m == 0.0 {
                return 0.0;
            }
            m * x.iter().map(|v| (v / m) * (v / m)).sum::<f64>().sqrt()
        }
    }
}

/// Norm-equivalence constant `N^(1/p1 - 1/p2)` for `p1 <= p2`, so that
/// `|x|_p2 <= |x|_p1 <= factor * |x|_p2` on `R^N`.
pub fn equivalence_factor(p1: PExponent, p2: PExponent, n: usize) -> Result<f64> {
    if p1.inv_p < p2.inv_p {
        return Err(Error::ArgumentOrder(format!(
            "expected p1 <= p2, got p1 = {p1}, p2 = {p2}"
        )));
    }
    if n == 0 {
        return Err(Error::InvalidArgument("dimension must be at least 1".into()));
    }
    Ok((n as f64).powf(p1.inv_p - p2.inv_p))
}

/// Euclidean projection of `v` onto the unit ball of the norm dual to `|.|_p`,
/// i.e. `{w : |w|_{p*} <= 1}`.
pub fn project_dual_ball(v: &[f64], p: PExponent, tol: f64) -> Result<Vec<f64>> {
    check_finite(v)?;
    check_tol(tol)?;
    let mut w = v.to_vec();
    project_scaled_ball(&mut w, dual_exponent(p), None, tol)?;
    Ok(w)
}

fn check_tol(tol: f64) -> Result<()> {
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(Error::InvalidArgument(format!("tol must be positive, got {tol}")));
    }
    Ok(())
}

/// Projects `v` in place onto `{w : |(w_i / d_i)_i|_q <= 1}` where `d` are the
/// optional per-axis `scales` (all ones when `None`).
pub(crate) fn project_scaled_ball(
    v: &mut [f64],
    q: PExponent,
    scales: Option<&[f64]>,
    tol: f64,
) -> Result<()> {
    let scale = |i: usize| scales.map_or(1.0, |d| d[i]);

    if v.len() == 1 {
        // all norms coincide on the line
        let d = scale(0);
        v[0] = v[0].clamp(-d, d);
        return Ok(());
    }

    if q.is_infinite() {
        for (i, x) in v.iter_mut().enumerate() {
            let d = scale(i);
            *x = x.clamp(-d, d);
        }
        return Ok(());
    }

    let dual_norm = match scales {
        None => norm(v, q),
        Some(d) => scaled_norm(v, q, d),
    };
    if dual_norm <= 1.0 {
        return Ok(());
    }

    let uniform = scales.is_none_or(|d| d.iter().all(|&x| x == 1.0));
    if uniform {
        if q.is_two() {
            for x in v.iter_mut() {
                *x /= dual_norm;
            }
            return Ok(());
        }
        if q.is_one() {
            project_l1_ball(v);
            return Ok(());
        }
    }
    if q.is_one() {
        // weighted l1 never arises: scales are a_i^(1/p) and q = 1 means p = inf
        return Err(Error::NumericFailure(
            "weighted l1 projection is not supported".into(),
        ));
    }
    if v.len() <= NEWTON_MAX_DIM && project_lq_newton(v, q, scales, tol) {
        return Ok(());
    }
    project_lq_kkt(v, q, scales, tol)
}

const NEWTON_MAX_DIM: usize = 8;
const NEWTON_MAX_ITER: usize = 40;

/// Newton on the full system `t_i + lambda w_i t_i^(q-1) = b_i`, `sum t_i^q = 1`
/// (`w_i = d_i^-2`), started from the radial point. The Jacobian is diagonal
/// plus one border, so each step is closed form. Returns `false`, leaving `v`
/// untouched, when the iteration leaves the positive orthant or stalls.
fn project_lq_newton(v: &mut [f64], q: PExponent, scales: Option<&[f64]>, tol: f64) -> bool {
    let qq = 1.0 / q.inv_p;
    let n = v.len();
    let mut b = [0.0; NEWTON_MAX_DIM];
    let mut w = [0.0; NEWTON_MAX_DIM];
    let mut t = [0.0; NEWTON_MAX_DIM];
    let mut big = 0.0_f64;
    for i in 0..n {
        let d = scales.map_or(1.0, |s| s[i]);
        b[i] = v[i].abs() / d;
        w[i] = 1.0 / (d * d);
        big = big.max(b[i]);
    }
    let r = norm(&b[..n], q);
    for i in 0..n {
        t[i] = b[i] / r;
    }
    // least-squares multiplier at the radial point
    let (mut num, mut den) = (0.0, 0.0);
    for i in 0..n {
        if b[i] > 0.0 {
            let e = w[i] * t[i].powf(qq - 1.0);
            num += (b[i] - t[i]) * e;
            den += e * e;
        }
    }
    let mut lambda = num / den;
    if !(lambda > 0.0 && lambda.is_finite()) {
        return false;
    }
    let f_tol = tol * big.max(1.0);
    let mut f = [0.0; NEWTON_MAX_DIM];
    let mut dd = [0.0; NEWTON_MAX_DIM];
    let mut e = [0.0; NEWTON_MAX_DIM];
    let mut g = [0.0; NEWTON_MAX_DIM];
    for _ in 0..NEWTON_MAX_ITER {
        let mut res_g = -1.0;
        let mut res_f = 0.0_f64;
        for i in 0..n {
            if b[i] == 0.0 {
                continue;
            }
            let tq2 = t[i].powf(qq - 2.0);
            let tq1 = tq2 * t[i];
            res_g += tq1 * t[i];
            e[i] = w[i] * tq1;
            f[i] = t[i] + lambda * e[i] - b[i];
            dd[i] = 1.0 + lambda * w[i] * (qq - 1.0) * tq2;
            g[i] = qq * tq1;
            res_f = res_f.max(f[i].abs());
        }
        if res_f <= f_tol && res_g.abs() <= tol {
            for i in 0..n {
                let d = scales.map_or(1.0, |s| s[i]);
                v[i] = v[i].signum() * t[i] * d;
            }
            return true;
        }
        let (mut a, mut c) = (0.0, 0.0);
        for i in 0..n {
            if b[i] > 0.0 {
                a += g[i] * f[i] / dd[i];
                c += g[i] * e[i] / dd[i];
            }
        }
        let dl = (res_g - a) / c;
        let mut step = 1.0;
        let mut ok = false;
        while step > 1e-3 {
            if (0..n).all(|i| b[i] == 0.0 || t[i] - step * (f[i] + e[i] * dl) / dd[i] > 0.0)
                && lambda + step * dl > 0.0
            {
                ok = true;
                break;
            }
            step *= 0.5;
        }
        if !ok || !dl.is_finite() {
            return false;
        }
        for i in 0..n {
            if b[i] > 0.0 {
                t[i] -= step * (f[i] + e[i] * dl) / dd[i];
            }
        }
        lambda += step * dl;
    }
    false
}

fn scaled_norm(v: &[f64], q: PExponent, d: &[f64]) -> f64 {
    let mut buf = [0.0; 8];
    if v.len() <= buf.len() {
        for (i, (&x, &s)) in v.iter().zip(d).enumerate() {
            buf[i] = x / s;
        }
        norm(&buf[..v.len()], q)
    } else {
        let w: Vec<f64> = v.iter().zip(d).map(|(x, s)| x / s).collect();
        norm(&w, q)
    }
}

/// Sort-based projection onto the unit `l^1` ball (caller guarantees `|v|_1 > 1`).
fn project_l1_ball(v: &mut [f64]) {
    let mut mags: Vec<f64> = v.iter().map(|x| x.abs()).collect();
    mags.sort_by(|a, b| b.total_cmp(a));
    let mut cumsum = 0.0;
    let mut theta = 0.0;
    for (j, &m) in mags.iter().enumerate() {
        cumsum += m;
        let t = (cumsum - 1.0) / (j + 1) as f64;
        if m - t > 0.0 {
            theta = t;
        } else {
            break;
        }
    }
    for x in v.iter_mut() {
        *x = x.signum() * (x.abs() - theta).max(0.0);
    }
}

/// General `q` in `(1, inf)`. With `t_i = |w_i| / d_i` and `b_i = |v_i| / d_i`
/// the optimality conditions read
///
/// `t_i + (lambda / d_i^2) t_i^(q-1) = b_i`,  `sum_i t_i^q = 1`.
///
/// The multiplier is searched in `eta = ln(lambda)` so that very large values
/// (q near 1 or q huge) stay representable; each `t_i` is a safeguarded Newton
/// solve of a monotone scalar equation.
fn project_lq_kkt(v: &mut [f64], q: PExponent, scales: Option<&[f64]>, tol: f64) -> Result<()> {
    let qq = 1.0 / q.inv_p;
    let n = v.len();
    let mut b = vec![0.0; n];
    let mut log_w = vec![0.0; n];
    for i in 0..n {
        let d = scales.map_or(1.0, |s| s[i]);
        b[i] = v[i].abs() / d;
        log_w[i] = -2.0 * d.ln();
    }
    let mut t = vec![0.0; n];
    let mut dt = vec![0.0; n];

    // H(eta) = sum t_i^q - 1 is strictly decreasing in eta.
    let eval = |eta: f64, t: &mut [f64], dt: &mut [f64]| -> (f64, f64) {
        let mut h = -1.0;
        let mut dh = 0.0;
        for i in 0..n {
            if b[i] == 0.0 {
                t[i] = 0.0;
                dt[i] = 0.0;
                continue;
            }
            let kappa = eta + log_w[i];
            let (ti, dphi) = solve_coordinate(b[i], kappa, qq);
            t[i] = ti;
            // d t_i / d eta = -(b_i - t_i) / phi'(t_i)
            dt[i] = -(b[i] - ti) / dphi;
            let tq1 = ti.powf(qq - 1.0);
            h += tq1 * ti;
            dh += qq * tq1 * dt[i];
        }
        (h, dh)
    };

    let (mut lo, mut hi) = (0.0_f64, 0.0_f64);
    let (h0, _) = eval(0.0, &mut t, &mut dt);
    if h0 > 0.0 {
        let mut step = 1.0;
        loop {
            hi += step;
            step *= 2.0;
            let (h, _) = eval(hi, &mut t, &mut dt);
            if h <= 0.0 {
                break;
            }
            lo = hi;
            if hi > 1e4 {
                return Err(Error::NumericFailure("lq projection: cannot bracket".into()));
            }
        }
    } else {
        let mut step = 1.0;
        loop {
            lo -= step;
            step *= 2.0;
            let (h, _) = eval(lo, &mut t, &mut dt);
            if h > 0.0 {
                break;
            }
            hi = lo;
            if lo < -1e4 {
                // v sits on the sphere up to rounding
                let r = match scales {
                    None => norm(v, q),
                    Some(d) => scaled_norm(v, q, d),
                };
                v.iter_mut().for_each(|x| *x /= r);
                return Ok(());
            }
        }
    }

    let mut eta = 0.5 * (lo + hi);
    let mut converged = false;
    for _ in 0..200 {
        let (h, dh) = eval(eta, &mut t, &mut dt);
        if h.abs() <= tol {
            converged = true;
            break;
        }
        if h > 0.0 {
            lo = eta;
        } else {
            hi = eta;
        }
        let newton = eta - h / dh;
        eta = if dh < 0.0 && newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
        if hi - lo <= 4.0 * f64::EPSILON * eta.abs().max(1.0) {
            eval(eta, &mut t, &mut dt);
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::NumericFailure(
            "lq projection: multiplier search did not converge".into(),
        ));
    }
    for i in 0..n {
        let d = scales.map_or(1.0, |s| s[i]);
        v[i] = v[i].signum() * t[i] * d;
    }
    Ok(())
}

/// Solves `t + exp(kappa) t^(q-1) = b` for `t` in `(0, b)`; returns `t` and
/// the derivative of the left side at `t`.
///
/// Works on the equivalent log form `kappa + (q-1) ln t - ln(b - t) = 0`,
/// whose left side increases strictly from `-inf` to `+inf`, so nothing
/// overflows for extreme `q` or `kappa`.
fn solve_coordinate(b: f64, kappa: f64, q: f64) -> (f64, f64) {
    let psi = |t: f64| kappa + (q - 1.0) * t.ln() - (b - t).ln();
    let (mut lo, mut hi) = (0.0_f64, b);
    // exact root when the power term is negligible or dominant
    let mut t = {
        let g_at_b = kappa + (q - 1.0) * b.ln();
        if g_at_b < b.ln() - 40.0 {
            b * (1.0 - (g_at_b - b.ln()).exp())
        } else {
            0.5 * b
        }
    };
    if !(t > 0.0 && t < b) {
        t = 0.5 * b;
    }
    for _ in 0..200 {
        let val = psi(t);
        if val > 0.0 {
            hi = t;
        } else if val < 0.0 {
            lo = t;
        } else {
            break;
        }
        let der = (q - 1.0) / t + 1.0 / (b - t);
        let newton = t - val / der;
        let next = if newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
        let done = (next - t).abs() <= 2.0 * f64::EPSILON * t || hi - lo <= 2.0 * f64::EPSILON * b;
        t = next;
        if done {
            break;
        }
    }
    let der = 1.0 + (q - 1.0) * (b - t) / t;
    (t, der)
}

/// An anisotropic gradient metric: plain `l^p` or the skewed
/// `(sum_i a_i |x_i|^p)^(1/p)` with positive weights summing to one.
#[derive(Clone, Debug, PartialEq)]
pub enum AnisotropicMetric {
    Lp(PExponent),
    SkewedLp(SkewedLp),
}

/// Skewed `l^p` metric; construct with [`AnisotropicMetric::skewed`].
#[derive(Clone, Debug, PartialEq)]
pub struct SkewedLp {
    p: PExponent,
    weights: Vec<f64>,
    // d_i = a_i^(1/p); the metric is |(d_i x_i)|_p
    scales: Vec<f64>,
    inv_scales: Vec<f64>,
}

impl SkewedLp {
    pub fn p(&self) -> PExponent {
        self.p
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// `a_i^(1/p)`: the metric is `|(a_i^(1/p) x_i)_i|_p`.
    pub(crate) fn scales(&self) -> &[f64] {
        &self.scales
    }
}

impl AnisotropicMetric {
    pub fn lp(p: PExponent) -> Self {
        AnisotropicMetric::Lp(p)
    }

    pub fn skewed(p: PExponent, weights: Vec<f64>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::InvalidMetric("no weights".into()));
        }
        if weights.iter().any(|a| !(a.is_finite() && *a > 0.0)) {
            return Err(Error::InvalidMetric(format!(
                "weights must be positive and finite: {weights:?}"
            )));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidMetric(format!(
                "weights must sum to 1, got {total}"
            )));
        }
        let scales: Vec<f64> = weights.iter().map(|a| a.powf(p.inv())).collect();
        let inv_scales = scales.iter().map(|d| 1.0 / d).collect();
        Ok(AnisotropicMetric::SkewedLp(SkewedLp {
            p,
            weights,
            scales,
            inv_scales,
        }))
    }

    pub fn p(&self) -> PExponent {
        match self {
            AnisotropicMetric::Lp(p) => *p,
            AnisotropicMetric::SkewedLp(s) => s.p,
        }
    }

    /// Checks that the metric can act on vectors of length `n`.
    pub fn check_dim(&self, n: usize) -> Result<()> {
        match self {
            AnisotropicMetric::Lp(_) => Ok(()),
            AnisotropicMetric::SkewedLp(s) if s.weights.len() == n => Ok(()),
            AnisotropicMetric::SkewedLp(s) => Err(Error::InvalidMetric(format!(
                "metric has {} weights but vectors have {n} components",
                s.weights.len()
            ))),
        }
    }

    /// Metric value without validation (hot path).
    #[inline]
    pub(crate) fn norm(&self, x: &[f64]) -> f64 {
        match self {
            AnisotropicMetric::Lp(p) => norm(x, *p),
            AnisotropicMetric::SkewedLp(s) => scaled_norm(x, s.p, &s.inv_scales),
        }
    }

    /// Dual norm `sup { <x, y> : |x| <= 1 }`.
    pub fn dual_norm(&self, y: &[f64]) -> f64 {
        match self {
            AnisotropicMetric::Lp(p) => norm(y, dual_exponent(*p)),
            AnisotropicMetric::SkewedLp(s) => scaled_norm(y, dual_exponent(s.p), &s.scales),
        }
    }

    /// In-place projection onto the dual unit ball (hot path).
    #[inline]
    pub(crate) fn project_dual(&self, v: &mut [f64], tol: f64) -> Result<()> {
        match self {
            AnisotropicMetric::Lp(p) => project_scaled_ball(v, dual_exponent(*p), None, tol),
            AnisotropicMetric::SkewedLp(s) => {
                project_scaled_ball(v, dual_exponent(s.p), Some(&s.scales), tol)
            }
        }
    }
}

impl fmt::Display for AnisotropicMetric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AnisotropicMetric::Lp(p) => write!(f, "l^{p}"),
            AnisotropicMetric::SkewedLp(s) => write!(f, "skewed l^{} {:?}", s.p, s.weights),
        }
    }
}

/// Evaluates `|x|_m`.
pub fn metric_eval(x: &[f64], m: &AnisotropicMetric) -> Result<f64> {
    check_finite(x)?;
    m.check_dim(x.len())?;
    Ok(m.norm(x))
}

/// Euclidean projection of `v` onto `{y : |y|_m* <= 1}`.
pub fn metric_dual_project(v: &[f64], m: &AnisotropicMetric, tol: f64) -> Result<Vec<f64>> {
    check_finite(v)?;
    check_tol(tol)?;
    m.check_dim(v.len())?;
    let mut w = v.to_vec();
    m.project_dual(&mut w, tol)?;
    Ok(w)
}
