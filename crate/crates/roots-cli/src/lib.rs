//! Library side of the benchmark CLI: parallel grid driver, environment
//! handling, and report serialization.

pub mod report;

use anyhow::{Context, Result};
use rayon::prelude::*;
use roots_core::bench::{assemble_report, policy_for, run_with_root, BenchmarkReport, RunRecord};
use roots_core::methods::all_methods;
use roots_core::precision::DEFAULT_CAP_DIGITS;
use roots_core::problems::{catalog, reference_root};

/// Hard digit cap, overridable through ROOTS_DIGITS_CAP.
pub fn cap_from_env() -> Result<u32> {
    match std::env::var("ROOTS_DIGITS_CAP") {
        Ok(v) => v
            .trim()
            .parse::<u32>()
            .with_context(|| format!("ROOTS_DIGITS_CAP must be a positive integer, got {v:?}")),
        Err(_) => Ok(DEFAULT_CAP_DIGITS),
    }
}

/// Run the full 9-method x 7-problem grid. Each problem's reference root
/// is bootstrapped once; the 63 solves are independent and run on the
/// rayon pool. Records are assembled in grid order, so the report is
/// identical to a sequential run.
pub fn table4_parallel(eta: u32, cap_digits: u32, max_iter: u32) -> Result<BenchmarkReport> {
    let methods = all_methods();
    let problems = catalog();
    let alpha_digits = eta + 100;

    let roots = problems
        .par_iter()
        .map(|p| reference_root(p, alpha_digits).map_err(anyhow::Error::from))
        .collect::<Result<Vec<_>>>()?;

    let grid: Vec<(usize, usize)> = (0..problems.len())
        .flat_map(|pi| (0..methods.len()).map(move |mi| (pi, mi)))
        .collect();
    let runs = grid
        .par_iter()
        .map(|&(pi, mi)| -> Result<RunRecord> {
            let policy = policy_for(&methods[mi], eta, cap_digits)?;
            let rec = run_with_root(
                &methods[mi],
                &problems[pi],
                &policy,
                &roots[pi],
                alpha_digits,
                max_iter,
            )?;
            Ok(rec)
        })
        .collect::<Result<Vec<_>>>()?;

    Ok(assemble_report(
        eta,
        methods,
        problems.iter().map(|p| p.id().to_string()).collect(),
        runs,
    ))
}

impl From<roots_core::Error> for ExitHint {
    fn from(_: roots_core::Error) -> Self {
        ExitHint::Failure
    }
}

/// Exit-code conventions: 0 all converged, 2 some run diverged.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExitHint {
    Success,
    Diverged,
    Failure,
}

impl ExitHint {
    pub fn code(self) -> i32 {
        match self {
            ExitHint::Success => 0,
            ExitHint::Diverged => 2,
            ExitHint::Failure => 1,
        }
    }
}
