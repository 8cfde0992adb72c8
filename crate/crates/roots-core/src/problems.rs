//! Test-equation catalog: seven standard functions with closed-form
//! derivatives through order 3, plus polynomial fixtures for analysis
//! checks (polynomials supply exact derivatives through order 5).

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use alloc::{format, vec};
use core::cell::Cell;

use crate::error::{Error, Result};
use crate::real::{Ctx, Real};

/// Maximum Newton steps when bootstrapping a reference root.
const BOOTSTRAP_MAX_STEPS: u32 = 2000;

#[derive(Clone, Debug, PartialEq)]
enum Rule {
    /// Coefficients in ascending order: c[0] + c[1] x + c[2] x^2 + ...
    Poly(Vec<i64>),
    /// x^3 + cos x - 2
    CubeCos,
    /// 2 sin x + 1 - x
    SineLine,
    /// (x+1) e^(x-1) - 1
    ExpLinear,
    /// e^(x^2 + 7x - 30) - 1
    ExpQuadratic,
    /// e^(-x) + cos x
    ExpCosine,
    /// x - 3 ln x, defined for x > 0
    LogLine,
}

/// A test equation: evaluators for f and its derivatives, an initial
/// point, and the means to produce a high-precision reference root.
#[derive(Clone, Debug, PartialEq)]
pub struct Problem {
    id: String,
    expr: String,
    x0: String,
    /// Root printed to seven significant digits, when known ahead of time.
    table_root: Option<String>,
    /// Exact decimal root, for fixtures built around one.
    exact_root: Option<String>,
    rule: Rule,
    max_order: u32,
}

impl Problem {
    /// Polynomial fixture with coefficients in ascending order.
    pub fn polynomial(id: &str, coeffs: &[i64], x0: &str, exact_root: Option<&str>) -> Problem {
        Problem {
            id: id.to_string(),
            expr: poly_expr(coeffs),
            x0: x0.to_string(),
            table_root: exact_root.map(|r| r.to_string()),
            exact_root: exact_root.map(|r| r.to_string()),
            rule: Rule::Poly(coeffs.to_vec()),
            max_order: 5,
        }
    }

    fn builtin(id: &str, expr: &str, x0: &str, table_root: &str, rule: Rule) -> Problem {
        Problem {
            id: id.to_string(),
            expr: expr.to_string(),
            x0: x0.to_string(),
            table_root: Some(table_root.to_string()),
            exact_root: None,
            rule,
            max_order: 3,
        }
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn expr(&self) -> &str {
        &self.expr
    }

    pub fn x0_literal(&self) -> &str {
        &self.x0
    }

    /// The root as printed in the catalog (seven significant digits).
    pub fn table_root(&self) -> Option<&str> {
        self.table_root.as_deref()
    }

    pub fn max_order(&self) -> u32 {
        self.max_order
    }

    pub fn x0(&self, ctx: &Ctx) -> Result<Real> {
        ctx.parse(&self.x0)
    }

    /// f^(k)(x) at the context's working precision, k = 0 for f itself.
    pub fn evaluate(&self, x: &Real, k: u32, ctx: &Ctx) -> Result<Real> {
        if k > self.max_order {
            return Err(Error::UnsupportedOrder { k, max: self.max_order });
        }
        match &self.rule {
            Rule::Poly(c) => Ok(eval_poly_derivative(c, k, x, ctx)),
            Rule::CubeCos => {
                // f = x^3 + cos x - 2
                Ok(match k {
                    0 => {
                        let x3 = ctx.powi(x, 3);
                        let t = ctx.add(&x3, &ctx.cos(x));
                        ctx.sub(&t, &ctx.from_i64(2))
                    }
                    1 => {
                        let t = ctx.mul_i64(&ctx.powi(x, 2), 3);
                        ctx.sub(&t, &ctx.sin(x))
                    }
                    2 => ctx.sub(&ctx.mul_i64(x, 6), &ctx.cos(x)),
                    _ => ctx.add(&ctx.from_i64(6), &ctx.sin(x)),
                })
            }
            Rule::SineLine => {
                // f = 2 sin x + 1 - x
                Ok(match k {
                    0 => {
                        let t = ctx.mul_i64(&ctx.sin(x), 2);
                        ctx.sub(&ctx.add(&t, &ctx.from_i64(1)), x)
                    }
                    1 => ctx.sub(&ctx.mul_i64(&ctx.cos(x), 2), &ctx.from_i64(1)),
                    2 => ctx.mul_i64(&ctx.sin(x), -2),
                    _ => ctx.mul_i64(&ctx.cos(x), -2),
                })
            }
            Rule::ExpLinear => {
                // f = (x+1) e^(x-1) - 1; f^(k) = (x+1+k) e^(x-1) for k >= 1
                let e = ctx.exp(&ctx.sub(x, &ctx.from_i64(1)));
                Ok(if k == 0 {
                    let t = ctx.mul(&ctx.add(x, &ctx.from_i64(1)), &e);
                    ctx.sub(&t, &ctx.from_i64(1))
                } else {
                    ctx.mul(&ctx.add(x, &ctx.from_i64(1 + k as i64)), &e)
                })
            }
            Rule::ExpQuadratic => {
                // f = e^g - 1 with g = x^2 + 7x - 30, g' = 2x + 7
                let g = {
                    let t = ctx.add(&ctx.powi(x, 2), &ctx.mul_i64(x, 7));
                    ctx.sub(&t, &ctx.from_i64(30))
                };
                let eg = ctx.exp(&g);
                let gp = ctx.add(&ctx.mul_i64(x, 2), &ctx.from_i64(7));
                Ok(match k {
                    0 => ctx.sub(&eg, &ctx.from_i64(1)),
                    1 => ctx.mul(&gp, &eg),
                    2 => {
                        let t = ctx.add(&ctx.powi(&gp, 2), &ctx.from_i64(2));
                        ctx.mul(&t, &eg)
                    }
                    _ => {
                        let t = ctx.add(&ctx.powi(&gp, 3), &ctx.mul_i64(&gp, 6));
                        ctx.mul(&t, &eg)
                    }
                })
            }
            Rule::ExpCosine => {
                // f = e^(-x) + cos x
                let e = ctx.exp(&x.neg());
                Ok(match k {
                    0 => ctx.add(&e, &ctx.cos(x)),
                    1 => ctx.sub(&e.neg(), &ctx.sin(x)),
                    2 => ctx.sub(&e, &ctx.cos(x)),
                    _ => ctx.add(&e.neg(), &ctx.sin(x)),
                })
            }
            Rule::LogLine => {
                // f = x - 3 ln x, x > 0
                if !x.is_positive() {
                    return Err(Error::DomainViolation { problem: self.id.clone() });
                }
                Ok(match k {
                    0 => ctx.sub(x, &ctx.mul_i64(&ctx.ln(x), 3)),
                    1 => ctx.sub(&ctx.from_i64(1), &ctx.div(&ctx.from_i64(3), x)),
                    2 => ctx.div(&ctx.from_i64(3), &ctx.powi(x, 2)),
                    _ => ctx.div(&ctx.from_i64(-6), &ctx.powi(x, 3)),
                })
            }
        }
    }
}

fn eval_poly_derivative(coeffs: &[i64], k: u32, x: &Real, ctx: &Ctx) -> Real {
    // k-th derivative: sum over i >= k of c_i * i!/(i-k)! * x^(i-k)
    let mut dc: Vec<i64> = Vec::new();
    for (i, &c) in coeffs.iter().enumerate() {
        let i = i as u32;
        if i < k {
            continue;
        }
        let mut m = c;
        for j in 0..k {
            m *= (i - j) as i64;
        }
        dc.push(m);
    }
    let mut acc = ctx.from_i64(0);
    for &c in dc.iter().rev() {
        acc = ctx.add(&ctx.mul(&acc, x), &ctx.from_i64(c));
    }
    acc
}

fn poly_expr(coeffs: &[i64]) -> String {
    let mut parts: Vec<String> = Vec::new();
    for (i, &c) in coeffs.iter().enumerate().rev() {
        if c == 0 {
            continue;
        }
        let term = match (i, c) {
            (0, c) => format!("{c}"),
            (1, 1) => "x".to_string(),
            (1, -1) => "-x".to_string(),
            (1, c) => format!("{c}x"),
            (i, 1) => format!("x^{i}"),
            (i, -1) => format!("-x^{i}"),
            (i, c) => format!("{c}x^{i}"),
        };
        if parts.is_empty() {
            parts.push(term);
        } else if let Some(tail) = term.strip_prefix('-') {
            parts.push(format!(" - {tail}"));
        } else {
            parts.push(format!(" + {term}"));
        }
    }
    if parts.is_empty() {
        "0".to_string()
    } else {
        parts.concat()
    }
}

/// The seven standard test equations, addressable as "f1".."f7".
pub fn catalog() -> Vec<Problem> {
    vec![
        Problem {
            id: "f1".to_string(),
            expr: "x^3 - 3x^2 + x - 2".to_string(),
            x0: "2.5".to_string(),
            table_root: Some("2.893289".to_string()),
            exact_root: None,
            rule: Rule::Poly(vec![-2, 1, -3, 1]),
            max_order: 5,
        },
        Problem::builtin("f2", "x^3 + cos x - 2", "1.5", "1.172578", Rule::CubeCos),
        Problem::builtin("f3", "2 sin x + 1 - x", "2.5", "2.380061", Rule::SineLine),
        Problem::builtin("f4", "(x+1) e^(x-1) - 1", "1.0", "0.557146", Rule::ExpLinear),
        Problem::builtin("f5", "e^(x^2+7x-30) - 1", "2.94", "3.000000", Rule::ExpQuadratic),
        Problem::builtin("f6", "e^(-x) + cos x", "1.5", "1.746140", Rule::ExpCosine),
        Problem::builtin("f7", "x - 3 ln x", "2.0", "1.857184", Rule::LogLine),
    ]
}

/// Look up a catalog problem by id.
pub fn by_id(id: &str) -> Option<Problem> {
    catalog().into_iter().find(|p| p.id() == id)
}

/// Problem evaluator with an evaluation counter; each call for f or any
/// derivative counts as one evaluation.
pub struct Evaluator<'a> {
    problem: &'a Problem,
    count: Cell<u64>,
}

impl<'a> Evaluator<'a> {
    pub fn new(problem: &'a Problem) -> Evaluator<'a> {
        Evaluator { problem, count: Cell::new(0) }
    }

    pub fn eval(&self, x: &Real, k: u32, ctx: &Ctx) -> Result<Real> {
        self.count.set(self.count.get() + 1);
        self.problem.evaluate(x, k, ctx)
    }

    pub fn count(&self) -> u64 {
        self.count.get()
    }

    pub fn reset(&self) {
        self.count.set(0);
    }

    pub fn problem(&self) -> &Problem {
        self.problem
    }
}

/// Reference root to `digits` decimal digits: plain Newton at fixed
/// precision `digits + 20` from the problem's initial point. Fixtures
/// with an exact root short-circuit to parsing it.
pub fn reference_root(problem: &Problem, digits: u32) -> Result<Real> {
    let ctx = Ctx::new(digits + 20)?;
    if let Some(root) = &problem.exact_root {
        return ctx.parse(root);
    }
    let x0 = problem.x0(&ctx)?;
    newton_refine(problem, &x0, digits, &ctx)
}

/// Polish a root approximation up to `digits` digits by plain Newton at
/// fixed precision. `seed` may be anywhere in the root's basin.
pub fn refine_root(problem: &Problem, seed: &Real, digits: u32) -> Result<Real> {
    let ctx = Ctx::new(digits + 20)?;
    if let Some(root) = &problem.exact_root {
        return ctx.parse(root);
    }
    newton_refine(problem, seed, digits, &ctx)
}

fn newton_refine(problem: &Problem, start: &Real, digits: u32, ctx: &Ctx) -> Result<Real> {
    let threshold = ctx.pow10(-(digits as i64 + 8));
    let mut x = ctx.round_to(start);
    for _ in 0..BOOTSTRAP_MAX_STEPS {
        let fx = problem.evaluate(&x, 0, ctx)?;
        if fx.is_zero() {
            return Ok(x);
        }
        let d1 = problem.evaluate(&x, 1, ctx)?;
        if d1.is_zero() {
            return Err(Error::DerivativeSingularity { at: x.to_sci_string(8) });
        }
        let step = ctx.div(&fx, &d1);
        x = ctx.sub(&x, &step);
        if !x.is_finite() {
            return Err(Error::NonFinite { what: "newton iterate".to_string() });
        }
        if step.abs().lt(&threshold) {
            return Ok(x);
        }
    }
    Err(Error::RootBootstrapFailure { steps: BOOTSTRAP_MAX_STEPS })
}
