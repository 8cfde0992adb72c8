//! Adaptive mantissa-length schedule.
//!
//! The working precision for each iteration is derived from the previous
//! error magnitude: `digits = rho * floor(-log10|e| + 2)`, floored at a
//! starting precision and clamped by a hard safety cap. `rho` is the
//! theoretical order of the method being run, so the step that maps an
//! error of 10^-d to roughly 10^-(rho*d) carries just enough digits to
//! represent the result.

use alloc::string::ToString;

use crate::error::{Error, Result};
use crate::real::{Ctx, Real};

pub const DEFAULT_ETA: u32 = 3000;
pub const DEFAULT_FLOOR_DIGITS: u32 = 32;
pub const DEFAULT_CAP_DIGITS: u32 = 16000;

/// Digit schedule for one solver run.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrecisionPolicy {
    /// Order of the method being run; scales the mantissa length.
    pub rho: u32,
    /// Target accuracy exponent: stop once |e_k| < 10^-eta.
    pub eta: u32,
    /// Minimum working digits.
    pub floor_digits: u32,
    /// Hard safety cap on working digits.
    pub cap_digits: u32,
}

impl PrecisionPolicy {
    pub fn new(rho: u32, eta: u32) -> Result<PrecisionPolicy> {
        PrecisionPolicy::with_limits(rho, eta, DEFAULT_FLOOR_DIGITS, DEFAULT_CAP_DIGITS)
    }

    pub fn with_limits(rho: u32, eta: u32, floor_digits: u32, cap_digits: u32) -> Result<PrecisionPolicy> {
        if rho == 0 {
            return Err(Error::ContractViolation { what: "rho must be positive".to_string() });
        }
        if floor_digits < 16 {
            return Err(Error::ContractViolation {
                what: "floor_digits must be at least 16".to_string(),
            });
        }
        if cap_digits <= eta {
            return Err(Error::ContractViolation {
                what: "cap_digits must exceed eta".to_string(),
            });
        }
        Ok(PrecisionPolicy { rho, eta, floor_digits, cap_digits })
    }

    /// Digits for the step consuming an iterate of error magnitude `err_mag`:
    /// `max(floor_digits, rho * floor(-log10(err) + 2))`, clamped to
    /// `cap_digits`. The value may exceed `eta`; the schedule deliberately
    /// lets the final step grow past the target accuracy.
    pub fn required_digits(&self, err_mag: &Real) -> Result<u32> {
        if !err_mag.is_finite() || err_mag.is_zero() || err_mag.is_negative() {
            return Err(Error::DegenerateInput);
        }
        let l = err_mag.log10_abs().ok_or(Error::DegenerateInput)?;
        let t = -l + 2.0;
        // The binary representation of a decimal-exact magnitude puts
        // -log10 a hair off an integer; snap before flooring.
        let r = t.round();
        let fl = if (t - r).abs() < 1e-6 { r } else { t.floor() };
        let d = (self.rho as i64).saturating_mul(fl as i64);
        Ok(d.clamp(self.floor_digits as i64, self.cap_digits as i64) as u32)
    }

    /// Whether `required_digits` hit the safety cap for this magnitude
    /// (the iterate computed at a capped precision cannot reach its
    /// mathematical accuracy).
    pub fn is_capped(&self, digits: u32) -> bool {
        digits >= self.cap_digits
    }

    /// The stopping threshold 10^-eta in the given context.
    pub fn stop_threshold(&self, ctx: &Ctx) -> Real {
        ctx.pow10(-(self.eta as i64))
    }

    /// Digits at which reference roots are carried so that errors down to
    /// 10^-eta stay measurable.
    pub fn reference_digits(&self) -> u32 {
        self.eta + 100
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx() -> Ctx {
        Ctx::new(60).unwrap()
    }

    #[test]
    fn schedule_matches_hand_values() {
        let c = ctx();
        // rho=4, |e|=1e-10 -> 4 * floor(10 + 2) = 48
        let p4 = PrecisionPolicy::new(4, 3000).unwrap();
        assert_eq!(p4.required_digits(&c.pow10(-10)).unwrap(), 48);
        // rho=2, |e|=0.5 -> floor clamp: max(32, 2*floor(2.301)) = 32
        let p2 = PrecisionPolicy::new(2, 3000).unwrap();
        assert_eq!(p2.required_digits(&c.parse("0.5").unwrap()).unwrap(), 32);
        // rho=8, |e|=1e-400 -> 8 * 402 = 3216, allowed past eta
        let p8 = PrecisionPolicy::new(8, 3000).unwrap();
        assert_eq!(p8.required_digits(&c.pow10(-400)).unwrap(), 3216);
    }

    #[test]
    fn cap_and_floor() {
        let c = ctx();
        let p = PrecisionPolicy::new(8, 3000).unwrap();
        let d = p.required_digits(&c.pow10(-2998)).unwrap();
        assert_eq!(d, DEFAULT_CAP_DIGITS);
        assert!(p.is_capped(d));
        // large magnitudes stay at the floor
        assert_eq!(p.required_digits(&c.pow10(9)).unwrap(), 32);
    }

    #[test]
    fn degenerate_magnitudes_are_rejected() {
        let c = ctx();
        let p = PrecisionPolicy::new(2, 3000).unwrap();
        assert_eq!(p.required_digits(&c.from_i64(0)), Err(Error::DegenerateInput));
        assert_eq!(p.required_digits(&c.from_i64(-1)), Err(Error::DegenerateInput));
    }

    #[test]
    fn invalid_policies_are_rejected() {
        assert!(PrecisionPolicy::with_limits(2, 3000, 8, 16000).is_err());
        assert!(PrecisionPolicy::with_limits(2, 3000, 32, 3000).is_err());
        assert!(PrecisionPolicy::with_limits(0, 3000, 32, 16000).is_err());
    }
}
