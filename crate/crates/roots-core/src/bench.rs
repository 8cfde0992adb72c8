//! Experiment runner: adaptive-precision solves over the method/problem
//! grid with the stopping rule |x_k - alpha| < 10^-eta, evaluation
//! accounting, and report assembly.
//!
//! Working digits are recomputed at the start of each iteration from the
//! previous error magnitude. Errors are measured against a reference root
//! carried at eta + 100 digits; once a run converges, the root is refined
//! so the final error is resolved at the precision the last step actually
//! ran at (unless the step was capped, in which case the trailing error
//! reflects arithmetic resolution rather than the method and is marked
//! untrusted).

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::analysis::coc_from_log10;
use crate::error::{Error, Result};
use crate::methods::{step, MethodSpec, StepOutcome};
use crate::precision::PrecisionPolicy;
use crate::problems::{refine_root, reference_root, Evaluator, Problem};
use crate::real::{Ctx, Real};

pub const DEFAULT_MAX_ITER: u32 = 200;

/// Significant digits kept when storing error magnitudes in records.
const ERR_SIG_DIGITS: u32 = 24;

/// One iterate of a solve.
#[derive(Clone, Debug)]
pub struct IterationRecord {
    /// Iteration index; 0 is the initial point.
    pub k: u32,
    /// The iterate x_k at the precision it was computed.
    pub x: Real,
    /// |x_k - alpha|, stored compactly.
    pub err_mag: Real,
    /// log10 of the error magnitude; `None` when the error is exactly zero.
    pub log10_err: Option<f64>,
    /// Working digits of the step that produced this iterate (0 for x_0).
    pub digits_used: u32,
    /// Function/derivative evaluations spent by that step (0 for x_0).
    pub evals: u32,
    /// Whether the recorded magnitude reflects the method's mathematical
    /// error sequence (above the step's arithmetic floor, uncapped, and
    /// resolvable against the reference root).
    pub trusted: bool,
}

/// Full trace of one solve.
#[derive(Clone, Debug)]
pub struct RunRecord {
    pub method: MethodSpec,
    pub problem_id: String,
    pub iterations: Vec<IterationRecord>,
    pub converged: bool,
    /// Steps taken to produce the first iterate under the stop threshold.
    pub iter_count: u32,
    /// Total function evaluations; equals iter_count * evals_per_step.
    pub tnfe: u64,
    /// Computational order of convergence over the trailing trusted errors.
    pub coc: Option<f64>,
    /// |e_n| / |e_{n-1}|^order at the last trusted transition.
    pub empirical_constant: Option<f64>,
    /// Failure description for non-converged runs.
    pub diagnostic: Option<String>,
}

impl RunRecord {
    /// log10 error magnitudes of the trusted prefix of the trace.
    pub fn trusted_log_errors(&self) -> Vec<f64> {
        self.iterations
            .iter()
            .take_while(|r| r.trusted)
            .filter_map(|r| r.log10_err)
            .collect()
    }
}

/// Policy for running `method` at target accuracy `eta`: rho is the
/// method's theoretical order.
pub fn policy_for(method: &MethodSpec, eta: u32, cap_digits: u32) -> Result<PrecisionPolicy> {
    PrecisionPolicy::with_limits(method.order(), eta, crate::precision::DEFAULT_FLOOR_DIGITS, cap_digits)
}

/// Solve `problem` with `method` under `policy`, bootstrapping the
/// reference root internally. Math-level failures (derivative zero,
/// degenerate step, iteration budget) yield a non-converged record with
/// a diagnostic; `Err` is reserved for contract violations.
pub fn run(method: &MethodSpec, problem: &Problem, policy: &PrecisionPolicy) -> Result<RunRecord> {
    let alpha_digits = policy.reference_digits();
    let alpha = reference_root(problem, alpha_digits)?;
    run_with_root(method, problem, policy, &alpha, alpha_digits, DEFAULT_MAX_ITER)
}

/// [`run`] with a prewarmed reference root at `alpha_digits` digits.
pub fn run_with_root(
    method: &MethodSpec,
    problem: &Problem,
    policy: &PrecisionPolicy,
    alpha: &Real,
    alpha_digits: u32,
    max_iter: u32,
) -> Result<RunRecord> {
    if policy.rho != method.order() {
        return Err(Error::ContractViolation {
            what: format!(
                "policy rho = {} does not match the order {} of {}",
                policy.rho,
                method.order(),
                method.name()
            ),
        });
    }
    let ref_ctx = Ctx::new(alpha_digits)?;
    let stop = policy.stop_threshold(&ref_ctx);
    let ev = Evaluator::new(problem);

    let mut x = problem.x0(&ref_ctx)?;
    let mut err = ref_ctx.sub(&x, alpha).abs();
    let mut records = alloc::vec![IterationRecord {
        k: 0,
        x: x.clone(),
        err_mag: Ctx::compress(&err, ERR_SIG_DIGITS),
        log10_err: err.log10_abs(),
        digits_used: 0,
        evals: 0,
        trusted: !err.is_zero(),
    }];
    let mut converged = err.is_zero() || err.lt(&stop);
    let mut diagnostic: Option<String> = None;

    let mut k = 0;
    while !converged && k < max_iter {
        k += 1;
        let digits = policy.required_digits(&err)?;
        let ctx = Ctx::new(digits)?;
        ev.reset();
        match step(method, &ev, &x, &ctx) {
            Ok((outcome, _)) => {
                let x_next = outcome.value().clone();
                err = ref_ctx.sub(&x_next, alpha).abs();
                let log_err = err.log10_abs();
                let trusted = !policy.is_capped(digits)
                    && log_err.is_some_and(|l| {
                        l > -(digits as f64 - 2.0) && l > -(alpha_digits as f64 - 5.0)
                    });
                records.push(IterationRecord {
                    k,
                    x: x_next.clone(),
                    err_mag: Ctx::compress(&err, ERR_SIG_DIGITS),
                    log10_err: log_err,
                    digits_used: digits,
                    evals: ev.count() as u32,
                    trusted,
                });
                x = x_next;
                let hit = err.is_zero() || err.lt(&stop);
                if matches!(outcome, StepOutcome::Converged(_)) {
                    converged = hit;
                    if !hit {
                        diagnostic =
                            Some("degenerate step before reaching the target accuracy".to_string());
                    }
                    break;
                }
                if hit {
                    converged = true;
                }
            }
            Err(e) => {
                diagnostic = Some(e.to_string());
                break;
            }
        }
    }
    if !converged && diagnostic.is_none() {
        diagnostic = Some(format!("no convergence within {max_iter} iterations"));
    }

    if converged {
        resolve_final_error(problem, policy, alpha_digits, &mut records);
    }

    let logs: Vec<f64> = records
        .iter()
        .take_while(|r| r.trusted)
        .filter_map(|r| r.log10_err)
        .collect();
    let coc = coc_from_log10(&logs).ok();
    let order = method.order() as f64;
    let empirical_constant = if logs.len() >= 2 {
        let v = 10f64.powf(logs[logs.len() - 1] - order * logs[logs.len() - 2]);
        v.is_finite().then_some(v)
    } else {
        None
    };

    let iter_count = (records.len() - 1) as u32;
    let tnfe = records.iter().map(|r| r.evals as u64).sum();
    Ok(RunRecord {
        method: *method,
        problem_id: problem.id().to_string(),
        iterations: records,
        converged,
        iter_count,
        tnfe,
        coc,
        empirical_constant,
        diagnostic,
    })
}

/// Re-measure the final error against a root refined to the precision the
/// last step ran at, so overshoot below the reference resolution is
/// resolved instead of saturating. Capped steps are left as measured.
fn resolve_final_error(
    problem: &Problem,
    policy: &PrecisionPolicy,
    alpha_digits: u32,
    records: &mut [IterationRecord],
) {
    let Some(last) = records.last() else { return };
    if last.digits_used == 0 || policy.is_capped(last.digits_used) {
        return;
    }
    let saturated = match last.log10_err {
        Some(l) => l <= -(alpha_digits as f64 - 5.0),
        None => false, // exactly zero: nothing to resolve
    };
    if !saturated {
        return;
    }
    let target = last.digits_used + 20;
    let Ok(alpha_hi) = refine_root(problem, &last.x, target) else { return };
    let Ok(hi_ctx) = Ctx::new(target + 10) else { return };
    let last = records.last_mut().expect("nonempty");
    let err = hi_ctx.sub(&last.x, &alpha_hi).abs();
    let log_err = err.log10_abs();
    last.trusted = log_err
        .is_some_and(|l| l > -(last.digits_used as f64 - 2.0) && l > -(target as f64 - 5.0));
    last.err_mag = Ctx::compress(&err, ERR_SIG_DIGITS);
    last.log10_err = log_err;
}

/// Iteration-count matrix over a method set and problem set, with column
/// totals and evaluation accounting.
#[derive(Clone, Debug)]
pub struct BenchmarkReport {
    pub eta: u32,
    pub methods: Vec<MethodSpec>,
    pub problem_ids: Vec<String>,
    /// Row-major: runs[problem_index * methods.len() + method_index].
    pub runs: Vec<RunRecord>,
}

impl BenchmarkReport {
    pub fn cell(&self, problem_index: usize, method_index: usize) -> &RunRecord {
        &self.runs[problem_index * self.methods.len() + method_index]
    }

    /// Per-column iteration totals over converged runs.
    pub fn iter_totals(&self) -> Vec<u64> {
        let mut totals = alloc::vec![0u64; self.methods.len()];
        for (i, run) in self.runs.iter().enumerate() {
            if run.converged {
                totals[i % self.methods.len()] += run.iter_count as u64;
            }
        }
        totals
    }

    /// Per-column evaluation totals over converged runs.
    pub fn tnfe_totals(&self) -> Vec<u64> {
        let mut totals = alloc::vec![0u64; self.methods.len()];
        for (i, run) in self.runs.iter().enumerate() {
            if run.converged {
                totals[i % self.methods.len()] += run.tnfe;
            }
        }
        totals
    }

    /// (problem, method) pairs that failed to converge; these are excluded
    /// from the totals.
    pub fn diverged_cells(&self) -> Vec<(String, String)> {
        self.runs
            .iter()
            .filter(|r| !r.converged)
            .map(|r| (r.problem_id.clone(), r.method.name()))
            .collect()
    }

    pub fn has_divergence(&self) -> bool {
        self.runs.iter().any(|r| !r.converged)
    }
}

/// Assemble a report from runs produced elsewhere (e.g. in parallel).
/// `runs` must be row-major in the same order as the grid.
pub fn assemble_report(
    eta: u32,
    methods: Vec<MethodSpec>,
    problem_ids: Vec<String>,
    runs: Vec<RunRecord>,
) -> BenchmarkReport {
    debug_assert_eq!(runs.len(), methods.len() * problem_ids.len());
    BenchmarkReport { eta, methods, problem_ids, runs }
}

/// Run the full grid sequentially: all nine methods over the seven
/// catalog problems, bootstrapping each problem's reference root once.
pub fn table4(eta: u32, cap_digits: u32, max_iter: u32) -> Result<BenchmarkReport> {
    let methods = crate::methods::all_methods();
    let problems = crate::problems::catalog();
    let alpha_digits = eta + 100;
    let mut runs = Vec::with_capacity(methods.len() * problems.len());
    for problem in &problems {
        let alpha = reference_root(problem, alpha_digits)?;
        for method in &methods {
            let policy = policy_for(method, eta, cap_digits)?;
            runs.push(run_with_root(method, problem, &policy, &alpha, alpha_digits, max_iter)?);
        }
    }
    Ok(assemble_report(
        eta,
        methods,
        problems.iter().map(|p| p.id().to_string()).collect(),
        runs,
    ))
}
