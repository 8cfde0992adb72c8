//! Iteration methods: the base one-point iterations of orders 2..4, the
//! order-q approximation of the inverse function's derivative, and the
//! two-step composition that raises a base method of order p to order
//! p + q at the cost of a single extra function evaluation.
//!
//! A composed step computes
//!
//! ```text
//! z = phi_p(x)                      (base step, order p)
//! x_next = z - f(z) * gq
//! ```
//!
//! where `gq` approximates g'(w) = 1/f'(z) for the inverse function g,
//! built from the divided difference (z - x)/(f(z) - f(x)) and the
//! inverse jet at y = f(x):
//!
//! ```text
//! gq = q*(z - x)/(w - y) + sum_{k=1}^{q-1} ((k - q)/k!) g^(k)(y) (w - y)^(k-1)
//! ```

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::inverse::{inverse_jet, InverseJet};
use crate::problems::Evaluator;
use crate::real::{Ctx, Real};

/// Identifies a method psi_p^{p+q}: base order `p`, boost order `q`
/// (0 for a bare base method).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct MethodSpec {
    p: u32,
    q: u32,
}

impl MethodSpec {
    pub fn new(p: u32, q: u32) -> Result<MethodSpec> {
        if !(2..=4).contains(&p) {
            return Err(Error::ContractViolation {
                what: format!("base order p = {p} outside 2..=4"),
            });
        }
        if q != 0 && !(2..=4).contains(&q) {
            return Err(Error::ContractViolation {
                what: format!("boost order q = {q} outside {{0, 2, 3, 4}}"),
            });
        }
        if q > p {
            return Err(Error::ContractViolation {
                what: format!("boost order q = {q} exceeds base order p = {p}"),
            });
        }
        Ok(MethodSpec { p, q })
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    /// Theoretical order of convergence: p for base methods, p + q composed.
    pub fn order(&self) -> u32 {
        self.p + self.q
    }

    /// Evaluations of f or a derivative per step; composition adds
    /// exactly one evaluation to the base method's p.
    pub fn evals_per_step(&self) -> u32 {
        if self.q == 0 {
            self.p
        } else {
            self.p + 1
        }
    }

    pub fn is_composed(&self) -> bool {
        self.q != 0
    }

    /// Name in the psi_p^{p+q} convention, e.g. "psi3_6".
    pub fn name(&self) -> String {
        format!("psi{}_{}", self.p, self.order())
    }

    /// Efficiency index order^(1/evals).
    pub fn efficiency_index(&self) -> f64 {
        crate::analysis::efficiency_index(self.order(), self.evals_per_step())
    }
}

impl core::fmt::Display for MethodSpec {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(f, "psi{}_{}", self.p, self.order())
    }
}

/// All nine methods in benchmark column order.
pub fn all_methods() -> Vec<MethodSpec> {
    [(2, 0), (2, 2), (3, 0), (3, 2), (3, 3), (4, 0), (4, 2), (4, 3), (4, 4)]
        .into_iter()
        .map(|(p, q)| MethodSpec { p, q })
        .collect()
}

/// Look up a method by its "psiP_M" name (M = p + q).
pub fn method_by_name(name: &str) -> Option<MethodSpec> {
    all_methods().into_iter().find(|m| m.name() == name)
}

/// Intermediate quantities of one iteration, kept for reuse and diagnostics.
#[derive(Clone, Debug)]
pub struct StepIntermediates {
    /// y = f(x)
    pub y: Real,
    /// u = f(x)/f'(x)
    pub u: Real,
    /// L = f''(x) u / f'(x), for base order >= 3
    pub l: Option<Real>,
    /// M = f'''(x)/f'(x) - 3 (f''(x)/f'(x))^2, for base order 4
    pub m: Option<Real>,
    /// z from the base step
    pub z: Real,
    /// w = f(z), for composed steps
    pub w: Option<Real>,
    /// divided difference (z - x)/(w - y)
    pub dd: Option<Real>,
    /// the g'_q value used by the modified Newton correction
    pub gq: Option<Real>,
    f1: Real,
    f2: Option<Real>,
    f3: Option<Real>,
}

impl StepIntermediates {
    pub fn fprime(&self) -> &Real {
        &self.f1
    }
}

/// One base iteration z = phi_p(x) for p in {2, 3, 4}:
///
/// ```text
/// p = 2:  z = x - u
/// p = 3:  z = x - (1 + L/2) u
/// p = 4:  z = x - (1 + L/2 - M u^2 / 6) u
/// ```
pub fn base_step(
    spec: &MethodSpec,
    ev: &Evaluator<'_>,
    x: &Real,
    ctx: &Ctx,
) -> Result<(Real, StepIntermediates)> {
    let y = ev.eval(x, 0, ctx)?;
    let f1 = ev.eval(x, 1, ctx)?;
    if f1.is_zero() {
        return Err(Error::DerivativeSingularity { at: x.to_sci_string(8) });
    }
    let u = ctx.div(&y, &f1);
    let mut f2 = None;
    let mut f3 = None;
    let mut l = None;
    let mut m = None;
    let z = match spec.p {
        2 => ctx.sub(x, &u),
        3 => {
            let d2 = ev.eval(x, 2, ctx)?;
            let lv = ctx.div(&ctx.mul(&d2, &u), &f1);
            // z = x - (1 + L/2) u
            let corr = ctx.add(&ctx.from_i64(1), &ctx.div_i64(&lv, 2));
            let z = ctx.sub(x, &ctx.mul(&corr, &u));
            l = Some(lv);
            f2 = Some(d2);
            z
        }
        4 => {
            let d2 = ev.eval(x, 2, ctx)?;
            let d3 = ev.eval(x, 3, ctx)?;
            let lv = ctx.div(&ctx.mul(&d2, &u), &f1);
            let ratio = ctx.div(&d2, &f1);
            let mv = ctx.sub(&ctx.div(&d3, &f1), &ctx.mul_i64(&ctx.powi(&ratio, 2), 3));
            // z = x - (1 + L/2 - M u^2 / 6) u
            let mu2 = ctx.div_i64(&ctx.mul(&mv, &ctx.powi(&u, 2)), 6);
            let corr = ctx.sub(&ctx.add(&ctx.from_i64(1), &ctx.div_i64(&lv, 2)), &mu2);
            let z = ctx.sub(x, &ctx.mul(&corr, &u));
            l = Some(lv);
            m = Some(mv);
            f2 = Some(d2);
            f3 = Some(d3);
            z
        }
        _ => unreachable!("MethodSpec validates p"),
    };
    if !z.is_finite() {
        return Err(Error::NonFinite { what: "base step".to_string() });
    }
    let inter = StepIntermediates {
        y: y.clone(),
        u,
        l,
        m,
        z: z.clone(),
        w: None,
        dd: None,
        gq: None,
        f1,
        f2,
        f3,
    };
    Ok((z, inter))
}

/// The order-q approximation of g'(w) from the divided difference and the
/// inverse jet at y. Exact when all higher derivatives of g vanish
/// (affine f). Requires w != y.
pub fn gq_prime(
    q: u32,
    jets: &InverseJet,
    x: &Real,
    z: &Real,
    y: &Real,
    w: &Real,
    ctx: &Ctx,
) -> Result<Real> {
    if !(2..=4).contains(&q) {
        return Err(Error::UnsupportedOrder { k: q, max: 4 });
    }
    if jets.order < q - 1 {
        return Err(Error::ContractViolation {
            what: format!("inverse jet of order {} given, q = {q} needs {}", jets.order, q - 1),
        });
    }
    let wy = ctx.sub(w, y);
    if wy.is_zero() {
        return Err(Error::DegenerateStep);
    }
    let dd = ctx.div(&ctx.sub(z, x), &wy);
    let mut acc = ctx.mul_i64(&dd, q as i64);
    // k = 1 term: (1 - q) g'(y)
    acc = ctx.add(&acc, &ctx.mul_i64(&jets.g1, 1 - q as i64));
    if q >= 3 {
        // k = 2 term: ((2 - q)/2) g''(y) (w - y)
        let g2 = jets.g2.as_ref().expect("jet order checked");
        let t = ctx.mul(&ctx.div_i64(&ctx.mul_i64(g2, 2 - q as i64), 2), &wy);
        acc = ctx.add(&acc, &t);
    }
    if q == 4 {
        // k = 3 term: ((3 - q)/6) g'''(y) (w - y)^2
        let g3 = jets.g3.as_ref().expect("jet order checked");
        let t = ctx.mul(&ctx.div_i64(&g3.neg(), 6), &ctx.powi(&wy, 2));
        acc = ctx.add(&acc, &t);
    }
    Ok(acc)
}

/// Outcome of one composed step. `Converged` is the f(z) = 0 short-circuit;
/// a degenerate divided difference with a near-zero residual also lands
/// there.
#[derive(Clone, Debug)]
pub enum StepOutcome {
    Next(Real),
    Converged(Real),
}

impl StepOutcome {
    pub fn value(&self) -> &Real {
        match self {
            StepOutcome::Next(v) | StepOutcome::Converged(v) => v,
        }
    }
}

/// One composed iteration: base step of order p, then the modified Newton
/// correction x_next = z - f(z) g'_q.
pub fn composed_step(
    spec: &MethodSpec,
    ev: &Evaluator<'_>,
    x: &Real,
    ctx: &Ctx,
) -> Result<(StepOutcome, StepIntermediates)> {
    if spec.q < 2 {
        return Err(Error::ContractViolation {
            what: format!("{} is not a composed method", spec.name()),
        });
    }
    let (z, mut inter) = base_step(spec, ev, x, ctx)?;
    let w = ev.eval(&z, 0, ctx)?;
    inter.w = Some(w.clone());
    if w.is_zero() {
        // root hit exactly
        return Ok((StepOutcome::Converged(z), inter));
    }
    if ctx.sub(&w, &inter.y).is_zero() {
        // f(z) = f(x): no usable secant slope. If the residual is already
        // at the working-precision floor the iterate is converged;
        // otherwise the step is degenerate.
        let tiny = ctx.pow10(-(ctx.digits() as i64));
        if inter.y.abs().lt(&tiny) {
            return Ok((StepOutcome::Converged(z), inter));
        }
        return Err(Error::DegenerateStep);
    }
    let jets = inverse_jet(&inter.f1, inter.f2.as_ref(), inter.f3.as_ref(), spec.q - 1, ctx)?;
    let gq = gq_prime(spec.q, &jets, x, &z, &inter.y, &w, ctx)?;
    let x_next = ctx.sub(&z, &ctx.mul(&w, &gq));
    if !x_next.is_finite() {
        return Err(Error::NonFinite { what: "composed step".to_string() });
    }
    inter.dd = Some(ctx.div(&ctx.sub(&z, x), &ctx.sub(&w, &inter.y)));
    inter.gq = Some(gq);
    Ok((StepOutcome::Next(x_next), inter))
}

/// One iteration of any method: the base step for q = 0, the composed
/// step otherwise.
pub fn step(
    spec: &MethodSpec,
    ev: &Evaluator<'_>,
    x: &Real,
    ctx: &Ctx,
) -> Result<(StepOutcome, StepIntermediates)> {
    if spec.q == 0 {
        let (z, inter) = base_step(spec, ev, x, ctx)?;
        Ok((StepOutcome::Next(z), inter))
    } else {
        composed_step(spec, ev, x, ctx)
    }
}

/// The explicit closed forms of the three fully-boosted methods
/// (p = q in {2, 3, 4}), algebraically equal to the generic composed
/// step. Used to cross-check the generic path.
pub fn closed_form_step(
    spec: &MethodSpec,
    ev: &Evaluator<'_>,
    x: &Real,
    ctx: &Ctx,
) -> Result<StepOutcome> {
    if spec.p != spec.q {
        return Err(Error::ContractViolation {
            what: format!("no closed form for {}", spec.name()),
        });
    }
    let (z, inter) = base_step(spec, ev, x, ctx)?;
    let w = ev.eval(&z, 0, ctx)?;
    if w.is_zero() {
        return Ok(StepOutcome::Converged(z));
    }
    let y = &inter.y;
    let f1 = &inter.f1;
    let wy = ctx.sub(&w, y);
    if wy.is_zero() {
        let tiny = ctx.pow10(-(ctx.digits() as i64));
        if y.abs().lt(&tiny) {
            return Ok(StepOutcome::Converged(z));
        }
        return Err(Error::DegenerateStep);
    }
    let next = match spec.p {
        2 => {
            // z - (y + w)/(y - w) * w/f'(x)
            let ratio = ctx.div(&ctx.add(y, &w), &ctx.sub(y, &w));
            ctx.sub(&z, &ctx.mul(&ratio, &ctx.div(&w, f1)))
        }
        3 => {
            // z - w * (3 (z-x)/(w-y) - 2/f' + f''/(2 f'^3) (w-y))
            let f2 = inter.f2.as_ref().expect("p = 3 evaluates f''");
            let dd = ctx.div(&ctx.sub(&z, x), &wy);
            let mut g = ctx.mul_i64(&dd, 3);
            g = ctx.sub(&g, &ctx.div(&ctx.from_i64(2), f1));
            let t = ctx.div(f2, &ctx.mul_i64(&ctx.powi(f1, 3), 2));
            g = ctx.add(&g, &ctx.mul(&t, &wy));
            ctx.sub(&z, &ctx.mul(&w, &g))
        }
        4 => {
            // z - w * (4 (z-x)/(w-y) - 3/f' + f''/f'^3 (w-y)
            //          + (f'''/f'^4 - 3 f''^2/f'^5)/6 (w-y)^2)
            let f2 = inter.f2.as_ref().expect("p = 4 evaluates f''");
            let f3 = inter.f3.as_ref().expect("p = 4 evaluates f'''");
            let dd = ctx.div(&ctx.sub(&z, x), &wy);
            let mut g = ctx.mul_i64(&dd, 4);
            g = ctx.sub(&g, &ctx.div(&ctx.from_i64(3), f1));
            g = ctx.add(&g, &ctx.mul(&ctx.div(f2, &ctx.powi(f1, 3)), &wy));
            let inner = ctx.sub(
                &ctx.div(f3, &ctx.powi(f1, 4)),
                &ctx.div(&ctx.mul_i64(&ctx.powi(f2, 2), 3), &ctx.powi(f1, 5)),
            );
            g = ctx.add(&g, &ctx.mul(&ctx.div_i64(&inner, 6), &ctx.powi(&wy, 2)));
            ctx.sub(&z, &ctx.mul(&w, &g))
        }
        _ => unreachable!(),
    };
    Ok(StepOutcome::Next(next))
}
