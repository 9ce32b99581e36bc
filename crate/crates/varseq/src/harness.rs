//! Empirical verification harness: seeded ensembles driven through the
//! operators, per-trial norm ratios, and grid-doubling stability verdicts.
//!
//! "Bounded" is not decidable from finite data, so every boundedness claim
//! is checked through a falsifiable proxy: all per-trial ratios must be
//! finite, and the maximum ratio may grow by at most a factor 1.3 when the
//! grid doubles (with paired per-trial seeds). An unbounded operator fails
//! this protocol at small grids, where its ratio divergence is steepest; the
//! shipped negative control (Hilbert transform at `p ≡ 1` on a delta
//! ensemble) demonstrates that.

use std::fmt;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::mpsc;
use std::time::Instant;

use serde::{Deserialize, Serialize};
use varseq_core::ensemble::{Ensemble, EnsembleFamily};
use varseq_core::operators::{
    fractional_maximal, hilbert_transform, riesz_potential, theta_aggregate, Grid,
};
use varseq_core::rdf::estimate_maximal_norm;
use varseq_core::spaces::{luxemburg_norm, Seq};
use varseq_core::weights::{a1_constant, ar_constant, Weight};
use varseq_core::{CoreError, ExponentSequence};

/// Maximum allowed growth of the max ratio under one grid doubling.
pub const STABILITY_GROWTH_LIMIT: f64 = 1.3;

/// Ensemble size used for the recorded maximal-norm estimates.
const NORM_ESTIMATE_TRIALS: usize = 50;

#[derive(Debug)]
pub struct HarnessError(pub String);

impl HarnessError {
    pub fn hypothesis(condition: impl Into<String>) -> Self {
        HarnessError(format!("hypothesis violated: {}", condition.into()))
    }
}

impl fmt::Display for HarnessError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl std::error::Error for HarnessError {}

impl From<CoreError> for HarnessError {
    fn from(e: CoreError) -> Self {
        HarnessError(e.to_string())
    }
}

/// Exponent descriptors that can be tabulated on any grid the harness needs.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(rename_all = "snake_case")]
pub enum ExponentSpec {
    Constant { value: f64 },
    LogHolder { p_inf: f64, c_inf: f64 },
    File { path: String },
}

impl ExponentSpec {
    pub fn materialize(&self, grid: Grid) -> Result<ExponentSequence, HarnessError> {
        match self {
            ExponentSpec::Constant { value } => {
                ExponentSequence::constant(*value).map_err(HarnessError::from)
            }
            ExponentSpec::LogHolder { p_inf, c_inf } => {
                ExponentSequence::log_holder(*p_inf, *c_inf, grid).map_err(HarnessError::from)
            }
            ExponentSpec::File { path } => crate::formats::resolve_exponent_arg(path)
                .map_err(|e| HarnessError(e.to_string())),
        }
    }

    pub fn describe(&self) -> String {
        match self {
            ExponentSpec::Constant { value } => format!("constant({value})"),
            ExponentSpec::LogHolder { p_inf, c_inf } => format!("log_holder({p_inf}, {c_inf})"),
            ExponentSpec::File { path } => format!("file({path})"),
        }
    }
}

/// Weight descriptors; only closed forms can follow a grid doubling.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(rename_all = "snake_case")]
pub enum WeightSpec {
    Power { delta: f64 },
    File { path: String },
}

impl WeightSpec {
    pub fn materialize(&self, grid: Grid) -> Result<Weight, HarnessError> {
        match self {
            WeightSpec::Power { delta } => Ok(Weight::power(*delta, grid)),
            WeightSpec::File { path } => {
                let w = crate::formats::load_weight(std::path::Path::new(path))
                    .map_err(|e| HarnessError(e.to_string()))?;
                if w.grid() != grid {
                    return Err(HarnessError(format!(
                        "weight file {path} is tabulated on [{}, {}], not on [{}, {}]",
                        w.grid().lo(),
                        w.grid().hi(),
                        grid.lo(),
                        grid.hi()
                    )));
                }
                Ok(w)
            }
        }
    }

    pub fn describe(&self) -> String {
        match self {
            WeightSpec::Power { delta } => format!("power({delta})"),
            WeightSpec::File { path } => format!("file({path})"),
        }
    }
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
pub enum OpKind {
    Maximal,
    Hilbert,
    Riesz,
}

impl OpKind {
    pub fn name(self) -> &'static str {
        match self {
            OpKind::Maximal => "maximal",
            OpKind::Hilbert => "hilbert",
            OpKind::Riesz => "riesz",
        }
    }
}

/// The weighted inequalities that can be checked.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(tag = "kind")]
pub enum WeightedKind {
    /// `Σ |Ha|^r w <= C Σ |a|^r w`
    #[serde(rename = "weighted_hilbert")]
    WeightedHilbert { r: f64 },
    /// `Σ |I_α a|^s w <= C (Σ |a|^r w^{r/s})^{s/r}` with `1/r = 1/s + α`
    #[serde(rename = "weighted_riesz")]
    WeightedRiesz { alpha: f64, s: f64 },
    /// The same two-sided bound for θ-aggregated maximal families.
    #[serde(rename = "weighted_family")]
    WeightedFamily {
        alpha: f64,
        s: f64,
        theta: f64,
        family_count: usize,
    },
}

/// Common run options for a single verification check.
#[derive(Debug, Clone)]
pub struct RunOptions {
    pub name: String,
    pub rel_tol: f64,
    pub jobs: usize,
    /// Re-run on the doubled grid and apply the growth criterion.
    pub double: bool,
    /// Optional explicit cap on every observed ratio.
    pub bound: Option<f64>,
    /// Negative controls: the check is expected to fail its criterion.
    pub expect_fail: bool,
}

impl RunOptions {
    pub fn named(name: impl Into<String>) -> Self {
        RunOptions {
            name: name.into(),
            rel_tol: varseq_core::DEFAULT_REL_TOL,
            jobs: 1,
            double: false,
            bound: None,
            expect_fail: false,
        }
    }

    pub fn with_double(mut self, double: bool) -> Self {
        self.double = double;
        self
    }

    pub fn with_bound(mut self, bound: Option<f64>) -> Self {
        self.bound = bound;
        self
    }

    pub fn with_expect_fail(mut self, expect_fail: bool) -> Self {
        self.expect_fail = expect_fail;
        self
    }

    pub fn with_jobs(mut self, jobs: usize) -> Self {
        self.jobs = jobs.max(1);
        self
    }
}

/// Structured outcome of one verification check.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VerificationReport {
    pub name: String,
    pub check: String,
    pub exponents: Vec<String>,
    pub weight: Option<String>,
    pub weight_constant: Option<f64>,
    pub r: Option<f64>,
    pub s: Option<f64>,
    pub alpha: Option<f64>,
    pub theta: Option<f64>,
    pub family_count: Option<usize>,
    pub ensemble_family: String,
    pub ensemble_size: usize,
    pub grid: (i64, i64),
    pub grid_doubled: Option<(i64, i64)>,
    pub seed: u64,
    pub maximal_norm_estimate: Option<f64>,
    pub ratios: Vec<f64>,
    pub ratios_doubled: Option<Vec<f64>>,
    pub max_ratio: f64,
    pub max_ratio_doubled: Option<f64>,
    pub growth_factor: Option<f64>,
    pub growth_limit: Option<f64>,
    pub bound: Option<f64>,
    pub expect_fail: bool,
    /// Raw outcome of the named criterion ("pass" / "fail").
    pub verdict: String,
    /// Whether the outcome matches the expectation (negative controls pass
    /// by failing).
    pub ok: bool,
    pub runtime_seconds: f64,
}

/// Deterministic parallel map: results are assembled in index order whatever
/// the completion order, so `jobs > 1` cannot change any output.
fn parallel_map<T, F>(n: usize, jobs: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync,
{
    if jobs <= 1 || n <= 1 {
        return (0..n).map(f).collect();
    }
    let workers = jobs.min(n);
    let next = AtomicUsize::new(0);
    let (tx, rx) = mpsc::channel::<(usize, T)>();
    std::thread::scope(|scope| {
        for _ in 0..workers {
            let tx = tx.clone();
            let next = &next;
            let f = &f;
            scope.spawn(move || loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                if i >= n {
                    break;
                }
                if tx.send((i, f(i))).is_err() {
                    break;
                }
            });
        }
        drop(tx);
        let mut slots: Vec<Option<T>> = (0..n).map(|_| None).collect();
        for (i, value) in rx {
            slots[i] = Some(value);
        }
        slots
            .into_iter()
            .map(|s| s.expect("worker produced every index"))
            .collect()
    })
}

/// Per-trial ratios for an ensemble; trial `k` uses member `k`.
fn ratio_trials(
    ens: &Ensemble,
    jobs: usize,
    trial: impl Fn(usize, Seq) -> Result<f64, HarnessError> + Sync,
) -> Result<Vec<f64>, HarnessError> {
    let results = parallel_map(ens.size, jobs, |k| trial(k, ens.member(k)));
    let mut ratios = Vec::with_capacity(results.len());
    for r in results {
        ratios.push(r?);
    }
    Ok(ratios)
}

fn apply_operator(
    op: OpKind,
    alpha: f64,
    a: &Seq,
    grid: Grid,
) -> Result<Seq, HarnessError> {
    match op {
        OpKind::Maximal => fractional_maximal(a, alpha, grid).map_err(HarnessError::from),
        OpKind::Hilbert => Ok(hilbert_transform(a, grid)),
        OpKind::Riesz => riesz_potential(a, alpha, grid).map_err(HarnessError::from),
    }
}

/// Norm-ratio trials `‖op(a)‖_{q} / ‖a‖_{p}` on one grid.
fn operator_ratios(
    op: OpKind,
    alpha: f64,
    p_in: &ExponentSequence,
    q_out: &ExponentSequence,
    ens: &Ensemble,
    rel_tol: f64,
    jobs: usize,
) -> Result<Vec<f64>, HarnessError> {
    ratio_trials(ens, jobs, |_, a| {
        if a.is_zero() {
            return Ok(0.0);
        }
        let denom = luxemburg_norm(&a, p_in, rel_tol);
        if denom == 0.0 {
            return Ok(0.0);
        }
        let out = apply_operator(op, alpha, &a, ens.grid)?;
        Ok(luxemburg_norm(&out, q_out, rel_tol) / denom)
    })
}

struct ReportSkeleton {
    check: &'static str,
    exponents: Vec<String>,
    weight: Option<String>,
    weight_constant: Option<f64>,
    r: Option<f64>,
    s: Option<f64>,
    alpha: Option<f64>,
    theta: Option<f64>,
    family_count: Option<usize>,
    maximal_norm_estimate: Option<f64>,
}

fn max_of(ratios: &[f64]) -> f64 {
    ratios.iter().cloned().fold(0.0, f64::max)
}

fn finalize(
    skeleton: ReportSkeleton,
    ens: &Ensemble,
    run: &RunOptions,
    ratios: Vec<f64>,
    ratios_doubled: Option<Vec<f64>>,
    started: Instant,
) -> VerificationReport {
    let max_ratio = max_of(&ratios);
    let max_ratio_doubled = ratios_doubled.as_deref().map(max_of);
    let all_finite = ratios.iter().all(|r| r.is_finite())
        && ratios_doubled
            .as_deref()
            .map(|rs| rs.iter().all(|r| r.is_finite()))
            .unwrap_or(true);
    let growth_factor = max_ratio_doubled.map(|m| {
        if max_ratio > 0.0 {
            m / max_ratio
        } else if m == 0.0 {
            1.0
        } else {
            f64::INFINITY
        }
    });
    let mut pass = all_finite;
    if let Some(g) = growth_factor {
        pass = pass && g <= STABILITY_GROWTH_LIMIT;
    }
    if let Some(bound) = run.bound {
        pass = pass && max_ratio <= bound && max_ratio_doubled.is_none_or(|m| m <= bound);
    }
    let ok = pass != run.expect_fail;
    VerificationReport {
        name: run.name.clone(),
        check: skeleton.check.to_string(),
        exponents: skeleton.exponents,
        weight: skeleton.weight,
        weight_constant: skeleton.weight_constant,
        r: skeleton.r,
        s: skeleton.s,
        alpha: skeleton.alpha,
        theta: skeleton.theta,
        family_count: skeleton.family_count,
        ensemble_family: ens.family.name().to_string(),
        ensemble_size: ens.size,
        grid: (ens.grid.lo(), ens.grid.hi()),
        grid_doubled: run
            .double
            .then(|| (ens.grid.doubled().lo(), ens.grid.doubled().hi())),
        seed: ens.seed,
        maximal_norm_estimate: skeleton.maximal_norm_estimate,
        ratios,
        ratios_doubled,
        max_ratio,
        max_ratio_doubled,
        growth_factor,
        growth_limit: run.double.then_some(STABILITY_GROWTH_LIMIT),
        bound: run.bound,
        expect_fail: run.expect_fail,
        verdict: if pass { "pass" } else { "fail" }.to_string(),
        ok,
        runtime_seconds: started.elapsed().as_secs_f64(),
    }
}

fn doubled_ensemble(ens: &Ensemble) -> Ensemble {
    Ensemble::new(ens.family, ens.size, ens.grid.doubled(), ens.seed)
}

/// Ratios `‖op(a)‖_{q} / ‖a‖_{p}` over the ensemble, with hypothesis checks.
pub fn empirical_operator_norm(
    op: OpKind,
    alpha: f64,
    p_spec: &ExponentSpec,
    q_spec: &ExponentSpec,
    ens: &Ensemble,
    run: &RunOptions,
) -> Result<VerificationReport, HarnessError> {
    let started = Instant::now();
    let p = p_spec.materialize(ens.grid)?;
    match op {
        OpKind::Riesz => {
            if !(alpha > 0.0 && alpha < 1.0) {
                return Err(HarnessError::hypothesis("0 < alpha < 1 for the Riesz potential"));
            }
            if p.max_exponent() >= 1.0 / alpha {
                return Err(HarnessError::hypothesis(
                    "p_+ < 1/alpha so the Riesz potential is well defined",
                ));
            }
        }
        OpKind::Maximal => {
            if !(0.0..1.0).contains(&alpha) {
                return Err(HarnessError::hypothesis("0 <= alpha < 1 for the fractional maximal"));
            }
        }
        OpKind::Hilbert => {}
    }
    let q = q_spec.materialize(ens.grid)?;
    let ratios = operator_ratios(op, alpha, &p, &q, ens, run.rel_tol, run.jobs)?;
    let ratios_doubled = if run.double {
        let big = doubled_ensemble(ens);
        let p2 = p_spec.materialize(big.grid)?;
        let q2 = q_spec.materialize(big.grid)?;
        Some(operator_ratios(op, alpha, &p2, &q2, &big, run.rel_tol, run.jobs)?)
    } else {
        None
    };
    Ok(finalize(
        ReportSkeleton {
            check: "operator_norm",
            exponents: vec![p_spec.describe(), q_spec.describe()],
            weight: None,
            weight_constant: None,
            r: None,
            s: None,
            alpha: Some(alpha),
            theta: None,
            family_count: None,
            maximal_norm_estimate: None,
        },
        ens,
        run,
        ratios,
        ratios_doubled,
        started,
    ))
}

/// Hilbert-transform boundedness on `ℓ^{p(·)}` under the scaled-conjugate
/// hypothesis: ratios plus grid-doubling stability.
///
/// `bypass_preconditions` deliberately skips the `1 < r < p_-` check (and the
/// conjugate-exponent norm estimate, which would be undefined); it exists for
/// negative controls.
pub fn verify_hilbert_bound(
    p_spec: &ExponentSpec,
    r: f64,
    ens: &Ensemble,
    bypass_preconditions: bool,
    run: &RunOptions,
) -> Result<VerificationReport, HarnessError> {
    let started = Instant::now();
    let p = p_spec.materialize(ens.grid)?;
    let mut estimate = None;
    if !bypass_preconditions {
        if !(r > 1.0 && r < p.min_exponent()) {
            return Err(HarnessError::hypothesis("1 < r < p_-"));
        }
        let dual = p.scaled(r).conjugate()?;
        estimate = Some(estimate_maximal_norm(
            &dual,
            NORM_ESTIMATE_TRIALS,
            ens.seed,
            ens.grid,
        ));
    }
    let run = RunOptions {
        double: true,
        ..run.clone()
    };
    let ratios = operator_ratios(OpKind::Hilbert, 0.0, &p, &p, ens, run.rel_tol, run.jobs)?;
    let big = doubled_ensemble(ens);
    let p2 = p_spec.materialize(big.grid)?;
    let ratios_doubled =
        operator_ratios(OpKind::Hilbert, 0.0, &p2, &p2, &big, run.rel_tol, run.jobs)?;
    Ok(finalize(
        ReportSkeleton {
            check: "hilbert_bound",
            exponents: vec![p_spec.describe()],
            weight: None,
            weight_constant: None,
            r: Some(r),
            s: None,
            alpha: None,
            theta: None,
            family_count: None,
            maximal_norm_estimate: estimate,
        },
        ens,
        &run,
        ratios,
        Some(ratios_doubled),
        started,
    ))
}

/// Riesz-potential boundedness `ℓ^{p(·)} → ℓ^{q(·)}` with `1/p = 1/q + α`.
pub fn verify_riesz_bound(
    q_spec: &ExponentSpec,
    s: f64,
    alpha: f64,
    ens: &Ensemble,
    run: &RunOptions,
) -> Result<VerificationReport, HarnessError> {
    let started = Instant::now();
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(HarnessError::hypothesis("0 < alpha < 1 (the Riesz potential needs it)"));
    }
    let q = q_spec.materialize(ens.grid)?;
    if !(s > 1.0 / (1.0 - alpha) && s < q.min_exponent()) {
        return Err(HarnessError::hypothesis("1/(1-alpha) < s < q_-"));
    }
    let p = q.sobolev_preimage(alpha)?;
    let r = s / (1.0 + alpha * s);
    if !(r > 1.0 && r < p.min_exponent()) {
        return Err(HarnessError::hypothesis("1 < r < p_- for 1/r = 1/s + alpha"));
    }
    let dual = q.scaled(s).conjugate()?;
    let estimate = estimate_maximal_norm(&dual, NORM_ESTIMATE_TRIALS, ens.seed, ens.grid);

    let run = RunOptions {
        double: true,
        ..run.clone()
    };
    let ratios = operator_ratios(OpKind::Riesz, alpha, &p, &q, ens, run.rel_tol, run.jobs)?;
    let big = doubled_ensemble(ens);
    let q2 = q_spec.materialize(big.grid)?;
    let p2 = q2.sobolev_preimage(alpha)?;
    let ratios_doubled =
        operator_ratios(OpKind::Riesz, alpha, &p2, &q2, &big, run.rel_tol, run.jobs)?;
    Ok(finalize(
        ReportSkeleton {
            check: "riesz_bound",
            exponents: vec![q_spec.describe()],
            weight: None,
            weight_constant: None,
            r: Some(r),
            s: Some(s),
            alpha: Some(alpha),
            theta: None,
            family_count: None,
            maximal_norm_estimate: Some(estimate),
        },
        ens,
        &run,
        ratios,
        Some(ratios_doubled),
        started,
    ))
}

/// Vector-valued fractional-maximal inequality: θ-aggregates of operator
/// outputs against θ-aggregates of inputs.
pub fn verify_maximal_family_bound(
    q_spec: &ExponentSpec,
    s: f64,
    alpha: f64,
    theta: f64,
    family_count: usize,
    ens: &Ensemble,
    run: &RunOptions,
) -> Result<VerificationReport, HarnessError> {
    let started = Instant::now();
    if !(theta > 1.0 && theta.is_finite()) {
        return Err(HarnessError::hypothesis("theta in (1, inf)"));
    }
    if !(0.0..1.0).contains(&alpha) {
        return Err(HarnessError::hypothesis("0 <= alpha < 1"));
    }
    if family_count == 0 {
        return Err(HarnessError::hypothesis("family_count >= 1"));
    }
    let q = q_spec.materialize(ens.grid)?;
    let s_floor = if alpha > 0.0 { 1.0 / (1.0 - alpha) } else { 1.0 };
    if !(s > s_floor && s < q.min_exponent()) {
        return Err(HarnessError::hypothesis(
            "1/(1-alpha) < s < q_- (alpha > 0), or 1 < s < q_- (alpha = 0)",
        ));
    }
    let r = s / (1.0 + alpha * s);
    let dual = q.scaled(s).conjugate()?;
    let estimate = estimate_maximal_norm(&dual, NORM_ESTIMATE_TRIALS, ens.seed, ens.grid);

    let run = RunOptions {
        double: true,
        ..run.clone()
    };
    let aggregate_ratios = |grid: Grid, q_here: &ExponentSequence| -> Result<Vec<f64>, HarnessError> {
        let p_here = if alpha > 0.0 {
            q_here.sobolev_preimage(alpha)?
        } else {
            q_here.clone()
        };
        let family_ens = Ensemble::new(ens.family, ens.size * family_count, grid, ens.seed);
        ratio_trials(
            &Ensemble::new(ens.family, ens.size, grid, ens.seed),
            run.jobs,
            |t, _| {
                let members: Vec<Seq> = (0..family_count)
                    .map(|i| family_ens.member(t * family_count + i))
                    .collect();
                let inputs = theta_aggregate(&members, theta, grid)?;
                if inputs.is_zero() {
                    return Ok(0.0);
                }
                let denom = luxemburg_norm(&inputs, &p_here, run.rel_tol);
                if denom == 0.0 {
                    return Ok(0.0);
                }
                let outputs: Result<Vec<Seq>, CoreError> = members
                    .iter()
                    .map(|a| fractional_maximal(a, alpha, grid))
                    .collect();
                let aggregated = theta_aggregate(&outputs?, theta, grid)?;
                Ok(luxemburg_norm(&aggregated, q_here, run.rel_tol) / denom)
            },
        )
    };
    let ratios = aggregate_ratios(ens.grid, &q)?;
    let big_grid = ens.grid.doubled();
    let q2 = q_spec.materialize(big_grid)?;
    let ratios_doubled = aggregate_ratios(big_grid, &q2)?;
    Ok(finalize(
        ReportSkeleton {
            check: "maximal_family_bound",
            exponents: vec![q_spec.describe()],
            weight: None,
            weight_constant: None,
            r: Some(r),
            s: Some(s),
            alpha: Some(alpha),
            theta: Some(theta),
            family_count: Some(family_count),
            maximal_norm_estimate: Some(estimate),
        },
        ens,
        &run,
        ratios,
        Some(ratios_doubled),
        started,
    ))
}

fn weighted_sum_pow(seq: &Seq, exponent: f64, w: &Weight) -> f64 {
    let grid = w.grid();
    let mut sum = 0.0;
    for j in grid.indices() {
        let v = seq.at(j).abs();
        if v != 0.0 {
            sum += v.powf(exponent) * w.at(j);
        }
    }
    sum
}

/// Weighted norm inequalities: per-trial quotient `LHS / RHS` as the
/// empirical constant, optional bound, grid-doubling stability.
pub fn verify_weighted_inequality(
    kind: &WeightedKind,
    weight_spec: &WeightSpec,
    ens: &Ensemble,
    run: &RunOptions,
) -> Result<VerificationReport, HarnessError> {
    let started = Instant::now();
    struct WeightedMeta {
        check: &'static str,
        r: f64,
        s: Option<f64>,
        alpha: Option<f64>,
        theta: Option<f64>,
        family_count: Option<usize>,
    }
    let meta = match kind {
        WeightedKind::WeightedHilbert { r } => {
            if r.is_nan() || *r <= 1.0 {
                return Err(HarnessError::hypothesis("r > 1 for the weighted Hilbert bound"));
            }
            WeightedMeta {
                check: "weighted_hilbert",
                r: *r,
                s: None,
                alpha: None,
                theta: None,
                family_count: None,
            }
        }
        WeightedKind::WeightedRiesz { alpha, s } => {
            if !(*alpha > 0.0 && *alpha < 1.0) {
                return Err(HarnessError::hypothesis("0 < alpha < 1"));
            }
            if s.is_nan() || *s <= 1.0 / (1.0 - alpha) {
                return Err(HarnessError::hypothesis("s > 1/(1-alpha) so that r > 1"));
            }
            WeightedMeta {
                check: "weighted_riesz",
                r: s / (1.0 + alpha * s),
                s: Some(*s),
                alpha: Some(*alpha),
                theta: None,
                family_count: None,
            }
        }
        WeightedKind::WeightedFamily {
            alpha,
            s,
            theta,
            family_count,
        } => {
            if theta.is_nan() || *theta <= 1.0 {
                return Err(HarnessError::hypothesis("theta in (1, inf)"));
            }
            if !(0.0..1.0).contains(alpha) {
                return Err(HarnessError::hypothesis("0 <= alpha < 1"));
            }
            let floor = if *alpha > 0.0 { 1.0 / (1.0 - alpha) } else { 1.0 };
            if s.is_nan() || *s <= floor {
                return Err(HarnessError::hypothesis(
                    "1/(1-alpha) < s (alpha > 0), or 1 < s (alpha = 0)",
                ));
            }
            if *family_count == 0 {
                return Err(HarnessError::hypothesis("family_count >= 1"));
            }
            WeightedMeta {
                check: "weighted_family",
                r: if *alpha > 0.0 { s / (1.0 + alpha * s) } else { *s },
                s: Some(*s),
                alpha: Some(*alpha),
                theta: Some(*theta),
                family_count: Some(*family_count),
            }
        }
    };

    let base_weight = weight_spec.materialize(ens.grid)?;
    let weight_constant = match kind {
        WeightedKind::WeightedHilbert { r } => ar_constant(&base_weight, *r).map_err(HarnessError::from)?,
        _ => a1_constant(&base_weight),
    };

    let quotients = |grid: Grid, w: &Weight| -> Result<Vec<f64>, HarnessError> {
        match kind {
            WeightedKind::WeightedHilbert { r } => ratio_trials(
                &Ensemble::new(ens.family, ens.size, grid, ens.seed),
                run.jobs,
                |_, a| {
                    if a.is_zero() {
                        return Ok(0.0);
                    }
                    let rhs = weighted_sum_pow(&a, *r, w);
                    if rhs == 0.0 {
                        return Ok(0.0);
                    }
                    let ha = hilbert_transform(&a, grid);
                    Ok(weighted_sum_pow(&ha, *r, w) / rhs)
                },
            ),
            WeightedKind::WeightedRiesz { alpha, s } => {
                let r = s / (1.0 + alpha * s);
                let w_pow = w.pow(r / s);
                ratio_trials(
                    &Ensemble::new(ens.family, ens.size, grid, ens.seed),
                    run.jobs,
                    |_, a| {
                        if a.is_zero() {
                            return Ok(0.0);
                        }
                        let rhs = weighted_sum_pow(&a, r, &w_pow).powf(s / r);
                        if rhs == 0.0 {
                            return Ok(0.0);
                        }
                        let out = riesz_potential(&a, *alpha, grid)?;
                        Ok(weighted_sum_pow(&out, *s, w) / rhs)
                    },
                )
            }
            WeightedKind::WeightedFamily {
                alpha,
                s,
                theta,
                family_count,
            } => {
                let r = if *alpha > 0.0 { s / (1.0 + alpha * s) } else { *s };
                let w_pow = w.pow(r / s);
                let family_ens =
                    Ensemble::new(ens.family, ens.size * family_count, grid, ens.seed);
                ratio_trials(
                    &Ensemble::new(ens.family, ens.size, grid, ens.seed),
                    run.jobs,
                    |t, _| {
                        let members: Vec<Seq> = (0..*family_count)
                            .map(|i| family_ens.member(t * family_count + i))
                            .collect();
                        let inputs = theta_aggregate(&members, *theta, grid)?;
                        let rhs = weighted_sum_pow(&inputs, r, &w_pow).powf(s / r);
                        if rhs == 0.0 {
                            return Ok(0.0);
                        }
                        let outputs: Result<Vec<Seq>, CoreError> = members
                            .iter()
                            .map(|a| fractional_maximal(a, *alpha, grid))
                            .collect();
                        let aggregated = theta_aggregate(&outputs?, *theta, grid)?;
                        Ok(weighted_sum_pow(&aggregated, *s, w) / rhs)
                    },
                )
            }
        }
    };

    let ratios = quotients(ens.grid, &base_weight)?;
    let ratios_doubled = if run.double {
        let big_grid = ens.grid.doubled();
        let w2 = weight_spec.materialize(big_grid)?;
        Some(quotients(big_grid, &w2)?)
    } else {
        None
    };
    Ok(finalize(
        ReportSkeleton {
            check: meta.check,
            exponents: vec![],
            weight: Some(weight_spec.describe()),
            weight_constant: Some(weight_constant),
            r: Some(meta.r),
            s: meta.s,
            alpha: meta.alpha,
            theta: meta.theta,
            family_count: meta.family_count,
            maximal_norm_estimate: None,
        },
        ens,
        run,
        ratios,
        ratios_doubled,
        started,
    ))
}

/// Parse an ensemble family name as used in configs and reports.
pub fn family_from_name(name: &str) -> Result<EnsembleFamily, HarnessError> {
    match name {
        "delta" => Ok(EnsembleFamily::Delta),
        "sparse_random" => Ok(EnsembleFamily::SparseRandom),
        "dense_random" => Ok(EnsembleFamily::DenseRandom),
        "oscillatory" => Ok(EnsembleFamily::Oscillatory),
        "block" => Ok(EnsembleFamily::Block),
        other => Err(HarnessError(format!(
            "unknown ensemble family {other:?} (expected delta, sparse_random, dense_random, oscillatory, block)"
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_ens(family: EnsembleFamily, size: usize, half: i64) -> Ensemble {
        Ensemble::new(family, size, Grid::symmetric(half), 42)
    }

    #[test]
    fn report_invariants_hold() {
        let ens = small_ens(EnsembleFamily::DenseRandom, 6, 32);
        let p = ExponentSpec::Constant { value: 2.0 };
        let report = empirical_operator_norm(
            OpKind::Hilbert,
            0.0,
            &p,
            &p,
            &ens,
            &RunOptions::named("hilbert_l2"),
        )
        .unwrap();
        assert_eq!(report.ratios.len(), 6);
        assert!(report.ratios.iter().all(|&r| r >= 0.0));
        let max = report.ratios.iter().cloned().fold(0.0, f64::max);
        assert_eq!(report.max_ratio, max);
        assert!(report.max_ratio <= std::f64::consts::PI + 0.02);
        assert_eq!(report.verdict, "pass");
        assert!(report.ok);
    }

    #[test]
    fn reports_are_deterministic_across_jobs() {
        let ens = small_ens(EnsembleFamily::SparseRandom, 8, 24);
        let p = ExponentSpec::LogHolder {
            p_inf: 2.0,
            c_inf: 1.0,
        };
        let one = verify_hilbert_bound(&p, 1.3, &ens, false, &RunOptions::named("t1")).unwrap();
        let many =
            verify_hilbert_bound(&p, 1.3, &ens, false, &RunOptions::named("t1").with_jobs(4)).unwrap();
        assert_eq!(one.ratios, many.ratios);
        assert_eq!(one.ratios_doubled, many.ratios_doubled);
        assert_eq!(one.max_ratio, many.max_ratio);
    }

    #[test]
    fn hilbert_bound_rejects_bad_r() {
        let ens = small_ens(EnsembleFamily::Delta, 2, 8);
        let p = ExponentSpec::Constant { value: 2.0 };
        let err = verify_hilbert_bound(&p, 2.0, &ens, false, &RunOptions::named("t1")).unwrap_err();
        assert!(err.to_string().contains("1 < r < p_-"), "{err}");
    }

    #[test]
    fn riesz_bound_rejects_alpha_zero_and_bad_s() {
        let ens = small_ens(EnsembleFamily::Delta, 2, 8);
        let q = ExponentSpec::Constant { value: 4.0 };
        assert!(verify_riesz_bound(&q, 3.0, 0.0, &ens, &RunOptions::named("t2")).is_err());
        assert!(verify_riesz_bound(&q, 2.0, 0.5, &ens, &RunOptions::named("t2")).is_err());
        assert!(verify_riesz_bound(&q, 5.0, 0.5, &ens, &RunOptions::named("t2")).is_err());
    }

    #[test]
    fn maximal_family_rejects_bad_theta() {
        let ens = small_ens(EnsembleFamily::Delta, 2, 8);
        let q = ExponentSpec::Constant { value: 4.0 };
        assert!(verify_maximal_family_bound(&q, 2.0, 0.25, 1.0, 4, &ens, &RunOptions::named("t3")).is_err());
    }

    #[test]
    fn negative_control_fails_stability() {
        let ens = small_ens(EnsembleFamily::Delta, 1, 2);
        let p = ExponentSpec::Constant { value: 1.0 };
        let run = RunOptions::named("control").with_expect_fail(true);
        let report = verify_hilbert_bound(&p, 1.0, &ens, true, &run).unwrap();
        assert_eq!(report.verdict, "fail");
        assert!(report.ok, "negative control must fail the criterion: {report:?}");
        assert!(report.growth_factor.unwrap() > STABILITY_GROWTH_LIMIT);
    }

    #[test]
    fn maximal_of_spike_ratio_matches_direct_sum() {
        // ||M delta||_2 = sqrt(sum over the grid of (|j|+1)^{-2}) < sqrt(pi^2/3 - 1)
        let grid = Grid::symmetric(512);
        let ens = Ensemble::new(EnsembleFamily::Delta, 1, grid, 7);
        let p = ExponentSpec::Constant { value: 2.0 };
        let report = empirical_operator_norm(
            OpKind::Maximal,
            0.0,
            &p,
            &p,
            &ens,
            &RunOptions::named("m_delta"),
        )
        .unwrap();
        let direct: f64 = grid
            .indices()
            .map(|j| ((j.abs() + 1) as f64).powi(-2))
            .sum::<f64>()
            .sqrt();
        assert!((report.max_ratio - direct).abs() < 1e-9 * direct);
        let pi = std::f64::consts::PI;
        assert!(report.max_ratio < (pi * pi / 3.0 - 1.0).sqrt());
        assert!(report.max_ratio >= 1.0);
    }

    #[test]
    fn riesz_of_spike_ratio_matches_direct_sum() {
        // p = 4/3, q = 4, alpha = 1/2: ratio = (sum_{j != 0} |j|^{-2})^{1/4}
        let grid = Grid::symmetric(512);
        let ens = Ensemble::new(EnsembleFamily::Delta, 1, grid, 7);
        let report = empirical_operator_norm(
            OpKind::Riesz,
            0.5,
            &ExponentSpec::Constant { value: 4.0 / 3.0 },
            &ExponentSpec::Constant { value: 4.0 },
            &ens,
            &RunOptions::named("r_delta"),
        )
        .unwrap();
        let direct: f64 = grid
            .indices()
            .filter(|&j| j != 0)
            .map(|j| (j.abs() as f64).powi(-2))
            .sum::<f64>()
            .powf(0.25);
        assert!(
            (report.max_ratio - direct).abs() < 1e-9 * direct,
            "{} vs {direct}",
            report.max_ratio
        );
    }

    #[test]
    fn weighted_unit_case_reduces_to_unweighted_square() {
        let ens = small_ens(EnsembleFamily::DenseRandom, 5, 32);
        let report = verify_weighted_inequality(
            &WeightedKind::WeightedHilbert { r: 2.0 },
            &WeightSpec::Power { delta: 0.0 },
            &ens,
            &RunOptions::named("weighted_hilbert"),
        )
        .unwrap();
        let pi2 = std::f64::consts::PI * std::f64::consts::PI;
        assert!(report.max_ratio <= pi2 + 0.1);
        assert!((report.weight_constant.unwrap() - 1.0).abs() < 1e-12);
    }
}
