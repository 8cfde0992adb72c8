//! Derivatives of the inverse function g = f^-1 at y = f(x), expressed
//! through derivatives of f at x:
//!
//! ```text
//! g'(y)   =  1 / f'(x)
//! g''(y)  = -f''(x) / f'(x)^3
//! g'''(y) = 3 f''(x)^2 / f'(x)^5 - f'''(x) / f'(x)^4
//! ```
//!
//! Only orders 1..3 are provided; the boost orders in use consume
//! g^(k)(y) for k <= 3.

use alloc::string::ToString;

use crate::error::{Error, Result};
use crate::real::{Ctx, Real};

/// Jet of inverse-function derivatives at one point.
#[derive(Clone, Debug)]
pub struct InverseJet {
    pub g1: Real,
    pub g2: Option<Real>,
    pub g3: Option<Real>,
    /// Highest populated derivative (1..=3).
    pub order: u32,
}

/// Build the inverse jet from f'(x), f''(x), f'''(x). `f2` is required for
/// `order >= 2` and `f3` for `order == 3`.
pub fn inverse_jet(
    f1: &Real,
    f2: Option<&Real>,
    f3: Option<&Real>,
    order: u32,
    ctx: &Ctx,
) -> Result<InverseJet> {
    if !(1..=3).contains(&order) {
        return Err(Error::UnsupportedOrder { k: order, max: 3 });
    }
    if f1.is_zero() {
        return Err(Error::DerivativeSingularity { at: "inverse jet".to_string() });
    }
    let g1 = ctx.recip(f1);
    let mut jet = InverseJet { g1, g2: None, g3: None, order };
    if order >= 2 {
        let f2 = f2.ok_or(Error::ContractViolation {
            what: "f'' required for order >= 2".to_string(),
        })?;
        let f1_3 = ctx.powi(f1, 3);
        jet.g2 = Some(ctx.div(&f2.neg(), &f1_3));
        if order == 3 {
            let f3 = f3.ok_or(Error::ContractViolation {
                what: "f''' required for order 3".to_string(),
            })?;
            let t1 = ctx.div(&ctx.mul_i64(&ctx.powi(f2, 2), 3), &ctx.powi(f1, 5));
            let t2 = ctx.div(f3, &ctx.powi(f1, 4));
            jet.g3 = Some(ctx.sub(&t1, &t2));
        }
    }
    Ok(jet)
}
