//! Error-constant prediction, computational order of convergence, and
//! efficiency indices.
//!
//! The asymptotic constants are evaluated numerically from the scaled
//! derivative coefficients `A_k = f^(k)(alpha) / (k! f'(alpha))` at the
//! reference root. The inverse-series coefficients `f'(alpha)^q B_{q+1}`
//! (with `B_k = g^(k)(0)/(k! g'(0))` for the inverse function g) come
//! from Jabotinsky's partition-sum formula
//!
//! ```text
//! f'(a)^q B_{q+1} = 1/(q+1)! * sum (-1)^r (q+r)! prod_{l=2}^{q+1} A_l^{b_l} / b_l!
//! ```
//!
//! summed over non-negative integers b_l with sum (l-1) b_l = q and
//! r = sum b_l. The enumeration is exact integer combinatorics; only the
//! final evaluation at the A_k happens in working-precision arithmetic.

use alloc::format;
use alloc::string::ToString;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::problems::{reference_root, Problem};
use crate::real::{Ctx, Real};

/// Scaled derivative coefficients at a simple root.
#[derive(Clone, Debug)]
pub struct CoefficientVector {
    /// A_2, A_3, ... contiguously; index k maps to a[k - 2].
    a: Vec<Real>,
    /// f'(alpha), nonzero at a simple root.
    fprime_alpha: Real,
}

impl CoefficientVector {
    pub fn new(a: Vec<Real>, fprime_alpha: Real) -> Result<CoefficientVector> {
        if fprime_alpha.is_zero() {
            return Err(Error::DerivativeSingularity { at: "coefficient vector".to_string() });
        }
        Ok(CoefficientVector { a, fprime_alpha })
    }

    /// A_k for k >= 2, when populated.
    pub fn a(&self, k: u32) -> Option<&Real> {
        if k < 2 {
            return None;
        }
        self.a.get((k - 2) as usize)
    }

    /// Highest populated coefficient index.
    pub fn highest(&self) -> u32 {
        1 + self.a.len() as u32
    }

    pub fn fprime_alpha(&self) -> &Real {
        &self.fprime_alpha
    }
}

/// Compute A_2..A_K at the problem's reference root, K = min(max_order, 5).
pub fn a_coeffs(problem: &Problem, digits: u32) -> Result<CoefficientVector> {
    let alpha = reference_root(problem, digits)?;
    let ctx = Ctx::new(digits)?;
    a_coeffs_at(problem, &alpha, &ctx)
}

/// Same as [`a_coeffs`] with the root supplied by the caller.
pub fn a_coeffs_at(problem: &Problem, alpha: &Real, ctx: &Ctx) -> Result<CoefficientVector> {
    let fprime = problem.evaluate(alpha, 1, ctx)?;
    if fprime.is_zero() {
        return Err(Error::DerivativeSingularity { at: "reference root".to_string() });
    }
    let highest = problem.max_order().min(5);
    let mut a = Vec::new();
    let mut kfact: i64 = 1;
    for k in 2..=highest {
        kfact *= k as i64;
        let dk = problem.evaluate(alpha, k, ctx)?;
        a.push(ctx.div(&dk, &ctx.mul_i64(&fprime, kfact)));
    }
    CoefficientVector::new(a, fprime)
}

/// One monomial of the partition sum: integer coefficient times
/// `prod A_l^{exponents[l-2]}` with exponents covering l = 2..=q+1.
pub type PartitionTerm = (i64, Vec<u32>);

/// Enumerate the partition-sum monomials for `f'(alpha)^q B_{q+1}`.
/// The rational coefficient of every monomial reduces to an integer.
pub fn partition_terms(q: u32) -> Result<Vec<PartitionTerm>> {
    if !(1..=4).contains(&q) {
        return Err(Error::UnsupportedOrder { k: q, max: 4 });
    }
    let slots = q as usize; // exponents for A_2 .. A_{q+1}
    let mut terms = Vec::new();
    let mut betas = alloc::vec![0u32; slots];
    enumerate(q, 2, &mut betas, &mut terms);
    Ok(terms)
}

fn enumerate(remaining: u32, ell: u32, betas: &mut Vec<u32>, out: &mut Vec<PartitionTerm>) {
    let slots = betas.len() as u32;
    if ell > slots + 1 {
        if remaining == 0 {
            out.push((term_coefficient(slots, betas), betas.clone()));
        }
        return;
    }
    let weight = ell - 1;
    let max_beta = remaining / weight;
    for b in 0..=max_beta {
        betas[(ell - 2) as usize] = b;
        enumerate(remaining - b * weight, ell + 1, betas, out);
    }
    betas[(ell - 2) as usize] = 0;
}

fn term_coefficient(q: u32, betas: &[u32]) -> i64 {
    let r: u32 = betas.iter().sum();
    let mut num: i128 = fact(q + r);
    let sign = if r.is_multiple_of(2) { 1 } else { -1 };
    let mut den: i128 = fact(q + 1);
    for &b in betas {
        den *= fact(b);
    }
    debug_assert_eq!(num % den, 0, "partition coefficient must be integral");
    num /= den;
    sign * num as i64
}

fn fact(n: u32) -> i128 {
    (1..=n as i128).product::<i128>().max(1)
}

/// Evaluate `f'(alpha)^q B_{q+1}` from the coefficient vector.
pub fn jabotinsky_b(q: u32, coeffs: &CoefficientVector, ctx: &Ctx) -> Result<Real> {
    let terms = partition_terms(q)?;
    if coeffs.highest() < q + 1 {
        return Err(Error::UnsupportedOrder { k: q + 1, max: coeffs.highest() });
    }
    let mut acc = ctx.from_i64(0);
    for (c, betas) in terms {
        let mut t = ctx.from_i64(c);
        for (i, &b) in betas.iter().enumerate() {
            if b > 0 {
                let ak = coeffs.a(i as u32 + 2).expect("highest checked");
                t = ctx.mul(&t, &ctx.powi(ak, b as usize));
            }
        }
        acc = ctx.add(&acc, &t);
    }
    Ok(acc)
}

/// Asymptotic error model of a composed method.
#[derive(Clone, Debug)]
pub struct ErrorModel {
    pub p: u32,
    pub q: u32,
    /// Base-method constant K in E = K e^p + O(e^{p+1}).
    pub k: Real,
    /// Composed-method constant: |B_{q+1} f'(a)^q K| for p > q, and the
    /// signed ((-1)^q B_{q+1} f'(a)^q + A_2 K) K for p = q.
    pub c: Real,
    /// Order p + q.
    pub order: u32,
}

/// The asymptotic constant of the base method of order p:
/// A_2 (Newton), 2 A_2^2 - A_3 (order 3), 5 A_2^3 - 5 A_2 A_3 + A_4 (order 4).
pub fn base_error_constant(p: u32, coeffs: &CoefficientVector, ctx: &Ctx) -> Result<Real> {
    let a2 = coeffs.a(2).ok_or(Error::UnsupportedOrder { k: 2, max: coeffs.highest() })?;
    match p {
        2 => Ok(a2.clone()),
        3 => {
            let a3 = coeffs.a(3).ok_or(Error::UnsupportedOrder { k: 3, max: coeffs.highest() })?;
            Ok(ctx.sub(&ctx.mul_i64(&ctx.powi(a2, 2), 2), a3))
        }
        4 => {
            let a3 = coeffs.a(3).ok_or(Error::UnsupportedOrder { k: 3, max: coeffs.highest() })?;
            let a4 = coeffs.a(4).ok_or(Error::UnsupportedOrder { k: 4, max: coeffs.highest() })?;
            let t = ctx.sub(&ctx.powi(a2, 2), a3);
            // 5 A2^3 - 5 A2 A3 + A4 = 5 A2 (A2^2 - A3) + A4
            Ok(ctx.add(&ctx.mul_i64(&ctx.mul(a2, &t), 5), a4))
        }
        _ => Err(Error::ContractViolation { what: format!("no base method of order {p}") }),
    }
}

/// The composed-method constant: the two branches cover a boost of
/// strictly lower order than the base method and the equal-order case.
pub fn predicted_error_constant(
    p: u32,
    q: u32,
    k: &Real,
    coeffs: &CoefficientVector,
    ctx: &Ctx,
) -> Result<ErrorModel> {
    if q < 2 || p < q {
        return Err(Error::ContractViolation {
            what: format!("constant prediction needs p >= q >= 2, got p = {p}, q = {q}"),
        });
    }
    let bq = jabotinsky_b(q, coeffs, ctx)?;
    let c = if p > q {
        ctx.mul(&bq, k).abs()
    } else {
        let a2 = coeffs.a(2).ok_or(Error::UnsupportedOrder { k: 2, max: coeffs.highest() })?;
        let signed_b = if q.is_multiple_of(2) { bq } else { bq.neg() };
        ctx.mul(&ctx.add(&signed_b, &ctx.mul(a2, k)), k)
    };
    Ok(ErrorModel { p, q, k: k.clone(), c, order: p + q })
}

/// Computational order of convergence from consecutive error magnitudes:
/// `ln(e_{k+1}/e_k) / ln(e_k/e_{k-1})` for the last admissible triple
/// (positive, strictly decreasing, finite ratios), scanning from the tail.
pub fn coc_estimate(errors: &[Real]) -> Result<f64> {
    let logs: Vec<f64> = errors.iter().map(|e| e.log10_abs().unwrap_or(f64::NAN)).collect();
    coc_from_log10(&logs)
}

/// [`coc_estimate`] on base-10 log magnitudes (handles errors far below
/// the f64 underflow threshold).
pub fn coc_from_log10(logs: &[f64]) -> Result<f64> {
    if logs.len() < 3 {
        return Err(Error::InsufficientData { needed: 3, got: logs.len() });
    }
    for i in (2..logs.len()).rev() {
        let (a, b, c) = (logs[i - 2], logs[i - 1], logs[i]);
        if !(a.is_finite() && b.is_finite() && c.is_finite()) {
            continue;
        }
        // decreasing magnitudes with nondegenerate ratios
        if b < a && c < b {
            return Ok((c - b) / (b - a));
        }
    }
    Err(Error::InsufficientData { needed: 3, got: 0 })
}

/// Efficiency index m^(1/r): order per evaluation count.
pub fn efficiency_index(m: u32, r: u32) -> f64 {
    debug_assert!(m >= 2 && r >= 1);
    (m as f64).powf(1.0 / r as f64)
}
