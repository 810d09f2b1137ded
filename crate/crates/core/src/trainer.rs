//! Finite-resolution training of `(alpha, p)`.
//!
//! The upper bound `alpha_U`, finite training grounds `T_l`, the exhaustive
//! sweep of the assessment function, the a-priori error certificate, and the
//! block-average relaxation of noisy data.

use std::cmp::Ordering;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::denoise::{denoise, denoise_warm, DenoiseParams, DenoiseResult};
use crate::error::{Error, Result};
use crate::grid::ImageGrid;
use crate::lp::{AnisotropicMetric, PExponent};
use crate::tv::{tv_p, DualField};

pub const SCHEMA_VERSION: u32 = 1;
/// Relative `TV_inf` below which a reconstruction counts as collapsed.
pub const COLLAPSE_THRESHOLD: f64 = 1e-6;
/// Grid points closer than this (in `alpha` or in `1/p`) are merged.
pub const GRID_DEDUP_TOL: f64 = 1e-12;
/// Levels above this are not searched by [`required_level`].
pub const LEVEL_BUDGET: u64 = 1 << 52;

const MAX_BRACKET_STEPS: usize = 200;
/// Solver tolerance cap for the collapse test; looser solves leave residual
/// variation above the threshold and overestimate `alpha_U`.
const COLLAPSE_SOLVE_TOL: f64 = 1e-8;

/// `alpha_U` together with the bracket that certifies it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AlphaMaxCertificate {
    /// `2 * collapse_alpha`.
    pub alpha_max: f64,
    /// Right end of the final bracket: `u_{alpha, inf}` is collapsed here.
    pub collapse_alpha: f64,
    /// Left end of the final bracket: not collapsed here.
    pub bracket_low: f64,
    pub tv_inf_noisy: f64,
    /// `TV_inf(u_{collapse_alpha, inf})`.
    pub tv_inf_at_collapse: f64,
    pub threshold: f64,
    pub tol: f64,
    pub solves: usize,
}

/// `alpha_U` with default solver settings.
pub fn compute_alpha_max(u_eta: &ImageGrid, tol: f64) -> Result<f64> {
    let template = DenoiseParams::lp(1.0, PExponent::INFINITY);
    Ok(compute_alpha_max_certified(u_eta, tol, &template)?.alpha_max)
}

/// Brackets the smallest `alpha` with `TV_inf(u_{alpha,inf}) <= 1e-6 TV_inf(u_eta)`
/// by doubling, refines it by bisection to relative width `tol`, and returns
/// twice the right end.
pub fn compute_alpha_max_certified(
    u_eta: &ImageGrid,
    tol: f64,
    solver: &DenoiseParams,
) -> Result<AlphaMaxCertificate> {
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(Error::InvalidArgument(format!("tol must be > 0, got {tol}")));
    }
    if u_eta.is_constant() {
        return Err(Error::DegenerateInput(
            "constant image: every alpha already gives the mean".into(),
        ));
    }
    let inf = AnisotropicMetric::lp(PExponent::INFINITY);
    let tv0 = tv_p(u_eta, &inf)?;
    let threshold = COLLAPSE_THRESHOLD * tv0;
    let solver = solver.at(1.0, inf.clone()).with_tol(solver.tol.min(COLLAPSE_SOLVE_TOL));
    let mut solves = 0;
    // each solve starts from the previous one, with the dual rescaled to the
    // new alpha (exact when both are collapsed)
    let mut warm: Option<(f64, ImageGrid, DualField)> = None;
    let mut tv_at = |alpha: f64| -> Result<f64> {
        solves += 1;
        let params = solver.at(alpha, inf.clone());
        let r = match &warm {
            Some((a0, u0, d0)) => {
                let scaled: Vec<f64> = d0.data().iter().map(|v| v * a0 / alpha).collect();
                let d = DualField::from_data(d0.dims().to_vec(), scaled)?;
                denoise_warm(u_eta, &params, u0, Some(&d))?
            }
            None => denoise(u_eta, &params)?,
        };
        let tv = r.tv_value;
        warm = Some((alpha, r.u, r.dual));
        Ok(tv)
    };

    // scale-free starting guess: the range over the domain size
    let mut hi = u_eta.range().max(f64::MIN_POSITIVE);
    let mut tv_hi = tv_at(hi)?;
    let mut lo = 0.0;
    let mut steps = 0;
    if tv_hi <= threshold {
        loop {
            let mid = 0.5 * hi;
            let tv_mid = tv_at(mid)?;
            if tv_mid > threshold {
                lo = mid;
                break;
            }
            hi = mid;
            tv_hi = tv_mid;
            steps += 1;
            if steps > MAX_BRACKET_STEPS {
                return Err(Error::NumericFailure("alpha_U bracket underflow".into()));
            }
        }
    } else {
        while tv_hi > threshold {
            lo = hi;
            hi *= 2.0;
            tv_hi = tv_at(hi)?;
            steps += 1;
            if steps > MAX_BRACKET_STEPS || !hi.is_finite() {
                return Err(Error::NumericFailure("alpha_U bracket overflow".into()));
            }
        }
    }
    while hi - lo > tol * hi {
        let mid = 0.5 * (lo + hi);
        let tv_mid = tv_at(mid)?;
        if tv_mid <= threshold {
            hi = mid;
            tv_hi = tv_mid;
        } else {
            lo = mid;
        }
    }
    Ok(AlphaMaxCertificate {
        alpha_max: 2.0 * hi,
        collapse_alpha: hi,
        bracket_low: lo,
        tv_inf_noisy: tv0,
        tv_inf_at_collapse: tv_hi,
        threshold,
        tol,
        solves,
    })
}

/// The finite grid `T_l[alpha] x T_l[p]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrainingGround {
    pub alpha_max: f64,
    pub level: u64,
    /// Sorted ascending, from 0 to `alpha_max`.
    pub alphas: Vec<f64>,
    /// Sorted by `p` ascending, from 1 to infinity.
    pub ps: Vec<PExponent>,
}

impl TrainingGround {
    pub fn len(&self) -> usize {
        self.alphas.len() * self.ps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Grid points in index order: `alpha` outer, `p` inner.
    pub fn points(&self) -> impl Iterator<Item = (f64, PExponent)> + '_ {
        self.alphas
            .iter()
            .flat_map(move |&a| self.ps.iter().map(move |&p| (a, p)))
    }

    /// A ground with explicitly given axes (sorted and deduplicated here).
    pub fn custom(alphas: Vec<f64>, ps: Vec<PExponent>) -> Result<Self> {
        if alphas.is_empty() || ps.is_empty() {
            return Err(Error::InvalidArgument("ground axes must be non-empty".into()));
        }
        if let Some(a) = alphas.iter().find(|a| !(**a >= 0.0 && a.is_finite())) {
            return Err(Error::InvalidArgument(format!("alpha {a} is not finite and >= 0")));
        }
        let alphas = dedup_sorted(alphas);
        let ps = dedup_ps(ps);
        Ok(TrainingGround {
            alpha_max: *alphas.last().expect("non-empty"),
            level: 0,
            alphas,
            ps,
        })
    }
}

fn dedup_sorted(mut v: Vec<f64>) -> Vec<f64> {
    v.sort_by(f64::total_cmp);
    v.dedup_by(|b, a| (*b - *a).abs() <= GRID_DEDUP_TOL);
    v
}

fn dedup_ps(mut ps: Vec<PExponent>) -> Vec<PExponent> {
    ps.sort_by(|a, b| a.cmp_p(*b));
    ps.dedup_by(|b, a| (b.inv() - a.inv()).abs() <= GRID_DEDUP_TOL);
    ps
}

/// `T_l`: multiples of `1/k` up to `alpha_max` (plus `alpha_max`) and
/// exponents `k/i`, for `k = 1..=l`, together with `p = inf`.
pub fn build_training_ground(alpha_max: f64, level: u64) -> Result<TrainingGround> {
    if level < 1 {
        return Err(Error::InvalidArgument("level must be >= 1".into()));
    }
    if !(alpha_max > 0.0 && alpha_max.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "alpha_max must be finite and > 0, got {alpha_max}"
        )));
    }
    let mut alphas = vec![alpha_max];
    let mut ps = vec![PExponent::INFINITY];
    for k in 1..=level {
        let kf = k as f64;
        let mut i = 0u64;
        loop {
            let a = i as f64 / kf;
            if a >= alpha_max {
                break;
            }
            alphas.push(a);
            i += 1;
        }
        for i in 1..=k {
            ps.push(PExponent::ratio(k, i)?);
        }
    }
    Ok(TrainingGround {
        alpha_max,
        level,
        alphas: dedup_sorted(alphas),
        ps: dedup_ps(ps),
    })
}

/// `sqrt(alpha_U) * (sqrt(1/l) + 2 sqrt(1 - N^(-1/sqrt(l)))) * sqrt(TV_1(u_eta))`.
pub fn error_bound(level: u64, alpha_max: f64, tv1_noisy: f64, dim: usize) -> f64 {
    let l = level as f64;
    let n = dim as f64;
    let grid_term = (1.0 / l).sqrt();
    let exponent_term = 2.0 * (-(-n.ln() / l.sqrt()).exp_m1()).max(0.0).sqrt();
    alpha_max.sqrt() * (grid_term + exponent_term) * tv1_noisy.sqrt()
}

/// Smallest `l` with `error_bound(l, ..) <= epsilon`.
pub fn required_level(epsilon: f64, alpha_max: f64, tv1_noisy: f64, dim: usize) -> Result<u64> {
    if !(epsilon > 0.0) {
        return Err(Error::InvalidArgument(format!("epsilon must be > 0, got {epsilon}")));
    }
    let ok = |l: u64| error_bound(l, alpha_max, tv1_noisy, dim) <= epsilon;
    if ok(1) {
        return Ok(1);
    }
    let mut lo = 1u64;
    let mut hi = 2u64;
    while !ok(hi) {
        lo = hi;
        if hi >= LEVEL_BUDGET {
            return Err(Error::ResourceLimit {
                what: format!("level for epsilon = {epsilon} exceeds {LEVEL_BUDGET}"),
                lower_bound: lo + 1,
            });
        }
        hi *= 2;
    }
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if ok(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

/// One or more `(noisy, clean)` pairs on a common grid.
#[derive(Clone, Debug)]
pub struct TrainingPairSet {
    pairs: Vec<(ImageGrid, ImageGrid)>,
}

impl TrainingPairSet {
    pub fn new(pairs: Vec<(ImageGrid, ImageGrid)>) -> Result<Self> {
        let Some((first, _)) = pairs.first() else {
            return Err(Error::InvalidInput("need at least one training pair".into()));
        };
        let dims = first.dims().to_vec();
        for (i, (noisy, clean)) in pairs.iter().enumerate() {
            if noisy.dims() != dims.as_slice() || clean.dims() != dims.as_slice() {
                return Err(Error::Shape(format!(
                    "pair {i} has dims {:?} / {:?}, expected {dims:?}",
                    noisy.dims(),
                    clean.dims()
                )));
            }
        }
        Ok(TrainingPairSet { pairs })
    }

    pub fn single(noisy: ImageGrid, clean: ImageGrid) -> Result<Self> {
        Self::new(vec![(noisy, clean)])
    }

    pub fn pairs(&self) -> &[(ImageGrid, ImageGrid)] {
        &self.pairs
    }

    pub fn dims(&self) -> &[usize] {
        self.pairs[0].0.dims()
    }

    pub fn ndim(&self) -> usize {
        self.pairs[0].0.ndim()
    }

    /// `max_i TV_1(u_eta^i)`.
    pub fn tv1_noisy(&self) -> f64 {
        let one = AnisotropicMetric::lp(PExponent::ONE);
        self.pairs
            .iter()
            .map(|(n, _)| crate::tv::tv_unchecked(n, &one))
            .fold(0.0, f64::max)
    }
}

/// Assessment at one grid point.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AssessmentRecord {
    pub alpha: f64,
    pub p: PExponent,
    /// Sum over pairs of `||u_{alpha,p} - u_c||^2`.
    pub assessment: f64,
    /// `sqrt(assessment)`.
    pub assessment_root: f64,
    /// Sum over pairs of `TV_p(u_{alpha,p})`.
    pub tv: f64,
    /// Total solver iterations over pairs.
    pub iterations: usize,
    pub converged: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ReportStatus {
    Ok,
    /// The selected grid point came from a non-converged solve.
    Warning,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrainingReport {
    pub schema_version: u32,
    pub status: ReportStatus,
    pub level: u64,
    pub alpha_max: f64,
    pub tv1_noisy: f64,
    pub dim: usize,
    /// Bound on the un-squared assessment gap to the continuum optimum;
    /// absent for hand-built grounds.
    pub error_bound: Option<f64>,
    pub argmin_alpha: f64,
    pub argmin_p: PExponent,
    pub min_value: f64,
    pub min_root: f64,
    pub non_converged: usize,
    pub records: Vec<AssessmentRecord>,
}

/// Total order used for selection: assessment, then `alpha`, then `p`.
pub fn record_order(a: &AssessmentRecord, b: &AssessmentRecord) -> Ordering {
    a.assessment
        .total_cmp(&b.assessment)
        .then(a.alpha.total_cmp(&b.alpha))
        .then(a.p.cmp_p(b.p))
}

/// Index of the selected record, or `None` when empty.
pub fn select_argmin(records: &[AssessmentRecord]) -> Option<usize> {
    (0..records.len()).min_by(|&i, &j| record_order(&records[i], &records[j]))
}

fn build_pool(workers: usize) -> Result<rayon::ThreadPool> {
    if workers == 0 {
        return Err(Error::InvalidArgument("workers must be >= 1".into()));
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::Pool(e.to_string()))
}

fn assess(
    pairs: &TrainingPairSet,
    alpha: f64,
    p: PExponent,
    solver: &DenoiseParams,
) -> Result<(AssessmentRecord, Vec<DenoiseResult>)> {
    let metric = AnisotropicMetric::lp(p);
    let params = solver.at(alpha, metric);
    let mut results = Vec::with_capacity(pairs.pairs.len());
    for (noisy, _) in &pairs.pairs {
        results.push(denoise(noisy, &params)?);
    }
    Ok((record_from(pairs, alpha, p, &results), results))
}

fn record_from(pairs: &TrainingPairSet, alpha: f64, p: PExponent, results: &[DenoiseResult]) -> AssessmentRecord {
    let metric = AnisotropicMetric::lp(p);
    let mut assessment = 0.0;
    let mut tv = 0.0;
    let mut iterations = 0;
    let mut converged = true;
    for ((_, clean), r) in pairs.pairs.iter().zip(results) {
        assessment += r.u.l2_distance_sq(clean);
        tv += crate::tv::tv_unchecked(&r.u, &metric);
        iterations += r.iterations;
        converged &= r.converged;
    }
    AssessmentRecord {
        alpha,
        p,
        assessment,
        assessment_root: assessment.sqrt(),
        tv,
        iterations,
        converged,
    }
}

/// Evaluates the assessment at every grid point, in grid-index order.
///
/// In 1D every `l^p` norm of the gradient is `|u'|`, so one solve per `alpha`
/// serves all exponents.
pub fn landscape(
    pairs: &TrainingPairSet,
    ground: &TrainingGround,
    solver: &DenoiseParams,
    workers: usize,
) -> Result<Vec<AssessmentRecord>> {
    let pool = build_pool(workers)?;
    if pairs.ndim() == 1 {
        let per_alpha: Vec<Vec<DenoiseResult>> = pool.install(|| {
            ground
                .alphas
                .par_iter()
                .map(|&a| assess(pairs, a, PExponent::TWO, solver).map(|(_, r)| r))
                .collect::<Result<_>>()
        })?;
        let mut records = Vec::with_capacity(ground.len());
        for (&a, results) in ground.alphas.iter().zip(&per_alpha) {
            for &p in &ground.ps {
                records.push(record_from(pairs, a, p, results));
            }
        }
        return Ok(records);
    }
    let points: Vec<(f64, PExponent)> = ground.points().collect();
    pool.install(|| {
        points
            .par_iter()
            .map(|&(a, p)| assess(pairs, a, p, solver).map(|(rec, _)| rec))
            .collect()
    })
}

/// Sweeps the ground and selects the minimizer.
pub fn train(
    pairs: &TrainingPairSet,
    ground: &TrainingGround,
    solver: &DenoiseParams,
    workers: usize,
) -> Result<TrainingReport> {
    let records = landscape(pairs, ground, solver, workers)?;
    let tv1 = pairs.tv1_noisy();
    report_from_records(records, ground.level, ground.alpha_max, tv1, pairs.ndim())
}

/// Assembles a report (selection, certificate, status) from swept records.
pub fn report_from_records(
    records: Vec<AssessmentRecord>,
    level: u64,
    alpha_max: f64,
    tv1_noisy: f64,
    dim: usize,
) -> Result<TrainingReport> {
    let best = select_argmin(&records)
        .ok_or_else(|| Error::InvalidInput("no grid points were evaluated".into()))?;
    let sel = &records[best];
    let bound = (level >= 1).then(|| error_bound(level, alpha_max, tv1_noisy, dim));
    Ok(TrainingReport {
        schema_version: SCHEMA_VERSION,
        status: if sel.converged { ReportStatus::Ok } else { ReportStatus::Warning },
        level,
        alpha_max,
        tv1_noisy,
        dim,
        error_bound: bound,
        argmin_alpha: sel.alpha,
        argmin_p: sel.p,
        min_value: sel.assessment,
        min_root: sel.assessment_root,
        non_converged: records.iter().filter(|r| !r.converged).count(),
        records,
    })
}

/// Common divisors of all axis lengths, ascending.
pub fn admissible_resolutions(dims: &[usize]) -> Vec<usize> {
    let m = dims.iter().copied().min().unwrap_or(0);
    (1..=m).filter(|k| dims.iter().all(|d| d % k == 0)).collect()
}

/// Averages `u` over `K^N` congruent blocks; the result keeps `u`'s grid.
pub fn relax_image(u: &ImageGrid, k: usize) -> Result<ImageGrid> {
    if k == 0 || u.dims().iter().any(|d| d % k != 0) {
        return Err(Error::InvalidArgument(format!(
            "K = {k} does not divide every axis of {:?}",
            u.dims()
        )));
    }
    let dims = u.dims();
    let n = dims.len();
    let block: Vec<usize> = dims.iter().map(|d| d / k).collect();
    let strides = u.strides();
    let blocks = k.pow(n as u32);
    let mut sums = vec![0.0; blocks];
    let mut owner = vec![0usize; u.len()];
    for (idx, o) in owner.iter_mut().enumerate() {
        let mut b = 0;
        for a in 0..n {
            let coord = (idx / strides[a]) % dims[a];
            b = b * k + coord / block[a];
        }
        *o = b;
    }
    for (&b, &v) in owner.iter().zip(u.values()) {
        sums[b] += v;
    }
    let per_block = (u.len() / blocks) as f64;
    let means: Vec<f64> = sums.iter().map(|s| s / per_block).collect();
    u.with_values(owner.iter().map(|&b| means[b]).collect())
}

/// Smallest admissible `K` with `||u^K - u|| <= epsilon / 4`.
pub fn choose_resolution(u: &ImageGrid, epsilon: f64) -> Result<usize> {
    if !(epsilon > 0.0) {
        return Err(Error::InvalidArgument(format!("epsilon must be > 0, got {epsilon}")));
    }
    for k in admissible_resolutions(u.dims()) {
        if relax_image(u, k)?.l2_distance(u) <= 0.25 * epsilon {
            return Ok(k);
        }
    }
    Err(Error::InvalidInput(format!(
        "no block resolution of {:?} is within {} of the data",
        u.dims(),
        0.25 * epsilon
    )))
}

/// Settings for [`run_practical_strategy`].
#[derive(Clone, Debug)]
pub struct StrategyConfig {
    pub solver: DenoiseParams,
    pub workers: usize,
    /// Relative bisection width for `alpha_U`.
    pub alpha_tol: f64,
    /// Largest level that will actually be swept.
    pub max_level: u64,
}

impl Default for StrategyConfig {
    fn default() -> Self {
        StrategyConfig {
            solver: DenoiseParams::lp(1.0, PExponent::TWO),
            workers: 1,
            alpha_tol: 1e-4,
            max_level: 64,
        }
    }
}

/// Every intermediate quantity of the relaxed pipeline.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StrategyCertificate {
    pub epsilon: f64,
    pub resolution: usize,
    /// `||u_eta^K - u_eta||`.
    pub relaxation_distance: f64,
    pub alpha: AlphaMaxCertificate,
    /// `TV_1(u_eta^K)`.
    pub tv1_relaxed: f64,
    pub level: u64,
    /// `error_bound(level, ..)` with the relaxed data; at most `epsilon / 4`.
    pub level_bound: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PracticalOutcome {
    pub certificate: StrategyCertificate,
    pub report: TrainingReport,
}

/// Picks `K`, computes `alpha_U` of `u_eta^K`, finds
/// the level whose certificate is `epsilon / 4`, and sweeps that ground on
/// `(u_eta^K, u_c)`.
pub fn run_practical_strategy(
    clean: &ImageGrid,
    noisy: &ImageGrid,
    epsilon: f64,
    config: &StrategyConfig,
) -> Result<PracticalOutcome> {
    noisy.check_same_shape(clean)?;
    let k = choose_resolution(noisy, epsilon)?;
    let relaxed = relax_image(noisy, k)?;
    let relaxation_distance = relaxed.l2_distance(noisy);
    // a flat relaxation is returned by every alpha; the data's own
    // bound keeps the ground non-trivial
    let alpha_source = if relaxed.is_constant() { noisy } else { &relaxed };
    if alpha_source.is_constant() {
        return flat_outcome(clean, noisy, epsilon, config);
    }
    let alpha_cert = compute_alpha_max_certified(alpha_source, config.alpha_tol, &config.solver)?;
    let one = AnisotropicMetric::lp(PExponent::ONE);
    let tv1 = tv_p(&relaxed, &one)?;
    let dim = noisy.ndim();
    let level = required_level(0.25 * epsilon, alpha_cert.alpha_max, tv1, dim)?;
    if level > config.max_level {
        return Err(Error::ResourceLimit {
            what: format!(
                "certified level exceeds max level {} (K = {k}, alpha_U = {}, TV_1 = {tv1})",
                config.max_level, alpha_cert.alpha_max
            ),
            lower_bound: level,
        });
    }
    let ground = build_training_ground(alpha_cert.alpha_max, level)?;
    let pairs = TrainingPairSet::single(relaxed, clean.clone())?;
    let records = landscape(&pairs, &ground, &config.solver, config.workers)?;
    let report = report_from_records(records, level, alpha_cert.alpha_max, tv1, dim)?;
    Ok(PracticalOutcome {
        certificate: StrategyCertificate {
            epsilon,
            resolution: k,
            relaxation_distance,
            level_bound: error_bound(level, alpha_cert.alpha_max, tv1, dim),
            alpha: alpha_cert,
            tv1_relaxed: tv1,
            level,
        },
        report,
    })
}

/// Constant noisy data: every `alpha` returns it, so the ground is `{0} x {1}`
/// and the certificate is exact.
fn flat_outcome(clean: &ImageGrid, noisy: &ImageGrid, epsilon: f64, config: &StrategyConfig) -> Result<PracticalOutcome> {
    let ground = TrainingGround::custom(vec![0.0], vec![PExponent::ONE])?;
    let pairs = TrainingPairSet::single(noisy.clone(), clean.clone())?;
    let records = landscape(&pairs, &ground, &config.solver, config.workers)?;
    let mut report = report_from_records(records, 0, 0.0, 0.0, noisy.ndim())?;
    report.error_bound = Some(0.0);
    Ok(PracticalOutcome {
        certificate: StrategyCertificate {
            epsilon,
            resolution: 1,
            relaxation_distance: 0.0,
            alpha: AlphaMaxCertificate {
                alpha_max: 0.0,
                collapse_alpha: 0.0,
                bracket_low: 0.0,
                tv_inf_noisy: 0.0,
                tv_inf_at_collapse: 0.0,
                threshold: 0.0,
                tol: config.alpha_tol,
                solves: 0,
            },
            tv1_relaxed: 0.0,
            level: 1,
            level_bound: 0.0,
        },
        report,
    })
}
