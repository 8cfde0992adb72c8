//! Arbitrary-precision reals and the working-precision context.
//!
//! Every arithmetic operation in the crate runs through a [`Ctx`], which
//! owns the mantissa length (decimal digits mapped to bits), the rounding
//! mode, and the transcendental-constants cache. Contexts are cheap to
//! create and private to a solver run; they are deliberately not `Sync`.

use alloc::format;
use alloc::string::{String, ToString};
use core::cell::RefCell;
use core::cmp::Ordering;
use core::fmt;

use astro_float::{BigFloat, Consts, Radix, RoundingMode, WORD_BIT_SIZE};

use crate::error::{Error, Result};

use core::f64::consts::{LOG10_2, LOG2_10};

/// An arbitrary-precision real number.
///
/// Values carry their own mantissa; the precision and rounding of every
/// operation come from the [`Ctx`] that performs it.
#[derive(Clone, Debug, PartialEq)]
pub struct Real(BigFloat);

impl Real {
    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_finite(&self) -> bool {
        !(self.0.is_nan() || self.0.is_inf())
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    /// Magnitude without rounding.
    pub fn abs(&self) -> Real {
        Real(self.0.abs())
    }

    /// Sign flip without rounding.
    pub fn neg(&self) -> Real {
        Real(self.0.neg())
    }

    pub fn compare(&self, other: &Real) -> Option<Ordering> {
        self.0.cmp(&other.0).map(|s| s.cmp(&0))
    }

    pub fn compare_abs(&self, other: &Real) -> Option<Ordering> {
        self.0.abs_cmp(&other.0).map(|s| s.cmp(&0))
    }

    pub fn lt(&self, other: &Real) -> bool {
        matches!(self.compare(other), Some(Ordering::Less))
    }

    /// Base-10 logarithm of |x| extracted from the binary exponent and the
    /// top mantissa word. Accurate to ~1e-11 absolute, independent of the
    /// working precision. `None` for zero and non-finite values.
    pub fn log10_abs(&self) -> Option<f64> {
        if self.0.is_zero() || self.0.is_nan() || self.0.is_inf() {
            return None;
        }
        let (words, _n, _s, e, _inexact) = self.0.as_raw_parts()?;
        let top = *words.last()? as f64;
        // normalized mantissa: value = m * 2^e with m in [0.5, 1)
        let m = top / (2f64).powi(WORD_BIT_SIZE as i32);
        Some((e as f64) * LOG10_2 + m.log10())
    }

    /// Nearest f64, good enough for display and coarse checks.
    pub fn to_f64(&self) -> f64 {
        if self.0.is_zero() {
            return 0.0;
        }
        if self.0.is_nan() {
            return f64::NAN;
        }
        if self.0.is_inf_pos() {
            return f64::INFINITY;
        }
        if self.0.is_inf_neg() {
            return f64::NEG_INFINITY;
        }
        let sign = if self.0.is_negative() { -1.0 } else { 1.0 };
        match self.log10_abs() {
            Some(l) if l.abs() < 307.0 => {
                let (words, _, _, e, _) = self.0.as_raw_parts().unwrap();
                let m = *words.last().unwrap() as f64 / (2f64).powi(WORD_BIT_SIZE as i32);
                sign * m * (2f64).powf(e as f64)
            }
            Some(l) if l > 0.0 => sign * f64::INFINITY,
            _ => 0.0,
        }
    }

    /// Scientific-notation string with `sig` significant digits; exponent
    /// range is unlimited (values like 1e-4800 render exactly).
    pub fn to_sci_string(&self, sig: usize) -> String {
        if self.0.is_zero() {
            return "0".to_string();
        }
        if !self.is_finite() {
            return if self.0.is_nan() {
                "NaN".to_string()
            } else if self.0.is_inf_neg() {
                "-inf".to_string()
            } else {
                "inf".to_string()
            };
        }
        let l = match self.log10_abs() {
            Some(l) => l,
            None => return "?".to_string(),
        };
        let mut e = l.floor() as i64;
        let mut m = 10f64.powf(l - l.floor());
        // rounding at the requested width can carry over (9.99.. -> 10.0)
        let scale = 10f64.powi(sig.saturating_sub(1) as i32);
        m = (m * scale).round() / scale;
        if m >= 10.0 {
            m /= 10.0;
            e += 1;
        }
        let sign = if self.0.is_negative() { "-" } else { "" };
        format!("{sign}{m:.prec$}e{e}", prec = sig.saturating_sub(1))
    }

    /// Exact bit-level equality (mantissa, exponent, sign).
    pub fn bit_eq(&self, other: &Real) -> bool {
        match (self.0.as_raw_parts(), other.0.as_raw_parts()) {
            (Some(a), Some(b)) => a == b,
            (None, None) => self.0.is_nan() == other.0.is_nan(),
            _ => false,
        }
    }
}

impl fmt::Display for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_sci_string(17))
    }
}

/// Working-precision arithmetic context.
///
/// Holds the decimal digit count, the derived binary mantissa length
/// (`ceil(digits * log2(10)) + 8` guard bits), the rounding mode, and a
/// private cache of transcendental constants.
pub struct Ctx {
    digits: u32,
    bits: usize,
    rm: RoundingMode,
    consts: RefCell<Consts>,
}

impl Ctx {
    /// Context carrying `digits` decimal digits of working precision.
    pub fn new(digits: u32) -> Result<Ctx> {
        let digits = digits.max(1);
        let bits = (digits as f64 * LOG2_10).ceil() as usize + 8;
        let consts = Consts::new().map_err(|e| Error::Backend {
            what: format!("constants cache: {e:?}"),
        })?;
        Ok(Ctx {
            digits,
            bits: bits.max(64),
            rm: RoundingMode::ToEven,
            consts: RefCell::new(consts),
        })
    }

    pub fn digits(&self) -> u32 {
        self.digits
    }

    pub fn bits(&self) -> usize {
        self.bits
    }

    // --- construction ---

    pub fn from_i64(&self, v: i64) -> Real {
        Real(BigFloat::from_i64(v, self.bits))
    }

    /// Parse a decimal literal (e.g. "2.94", "1e-3000") at working precision.
    pub fn parse(&self, s: &str) -> Result<Real> {
        let v = BigFloat::parse(s, Radix::Dec, self.bits, self.rm, &mut self.consts.borrow_mut());
        if v.is_nan() {
            return Err(Error::NonFinite { what: format!("parse {s:?}") });
        }
        Ok(Real(v))
    }

    /// 10^k as a working-precision value.
    pub fn pow10(&self, k: i64) -> Real {
        let ten = BigFloat::from_i64(10, self.bits);
        if k >= 0 {
            Real(ten.powi(k as usize, self.bits, self.rm))
        } else {
            let p = ten.powi(k.unsigned_abs() as usize, self.bits, self.rm);
            Real(BigFloat::from_i64(1, self.bits).div(&p, self.bits, self.rm))
        }
    }

    // --- field operations ---

    pub fn add(&self, a: &Real, b: &Real) -> Real {
        Real(a.0.add(&b.0, self.bits, self.rm))
    }

    pub fn sub(&self, a: &Real, b: &Real) -> Real {
        Real(a.0.sub(&b.0, self.bits, self.rm))
    }

    pub fn mul(&self, a: &Real, b: &Real) -> Real {
        Real(a.0.mul(&b.0, self.bits, self.rm))
    }

    pub fn div(&self, a: &Real, b: &Real) -> Real {
        Real(a.0.div(&b.0, self.bits, self.rm))
    }

    pub fn mul_i64(&self, a: &Real, k: i64) -> Real {
        Real(a.0.mul(&BigFloat::from_i64(k, self.bits), self.bits, self.rm))
    }

    pub fn div_i64(&self, a: &Real, k: i64) -> Real {
        Real(a.0.div(&BigFloat::from_i64(k, self.bits), self.bits, self.rm))
    }

    /// Small non-negative integer power.
    pub fn powi(&self, a: &Real, n: usize) -> Real {
        Real(a.0.powi(n, self.bits, self.rm))
    }

    /// 1/x at working precision.
    pub fn recip(&self, a: &Real) -> Real {
        Real(a.0.reciprocal(self.bits, self.rm))
    }

    // --- transcendental functions ---

    pub fn exp(&self, a: &Real) -> Real {
        Real(a.0.exp(self.bits, self.rm, &mut self.consts.borrow_mut()))
    }

    pub fn ln(&self, a: &Real) -> Real {
        Real(a.0.ln(self.bits, self.rm, &mut self.consts.borrow_mut()))
    }

    pub fn sin(&self, a: &Real) -> Real {
        Real(a.0.sin(self.bits, self.rm, &mut self.consts.borrow_mut()))
    }

    pub fn cos(&self, a: &Real) -> Real {
        Real(a.0.cos(self.bits, self.rm, &mut self.consts.borrow_mut()))
    }

    // --- rounding helpers ---

    /// Full-precision decimal rendering of a value (all digits its
    /// mantissa carries).
    pub fn format_full(&self, a: &Real) -> Result<String> {
        a.0
            .format(Radix::Dec, self.rm, &mut self.consts.borrow_mut())
            .map_err(|e| Error::Backend { what: format!("format: {e:?}") })
    }

    /// Re-round a value to this context's precision.
    pub fn round_to(&self, a: &Real) -> Real {
        let mut v = a.0.clone();
        if v.set_precision(self.bits, self.rm).is_err() {
            return Real(astro_float::NAN);
        }
        Real(v)
    }

    /// A copy of `a` holding roughly `sig` significant decimal digits,
    /// used to keep stored traces compact.
    pub fn compress(a: &Real, sig: u32) -> Real {
        let bits = ((sig as f64 * LOG2_10).ceil() as usize + 8).max(64);
        let mut v = a.0.clone();
        if v.set_precision(bits, RoundingMode::ToEven).is_err() {
            return Real(astro_float::NAN);
        }
        Real(v)
    }
}

impl fmt::Debug for Ctx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Ctx")
            .field("digits", &self.digits)
            .field("bits", &self.bits)
            .finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn log10_extraction() {
        let ctx = Ctx::new(50).unwrap();
        let x = ctx.parse("3.7e-2718").unwrap();
        let l = x.log10_abs().unwrap();
        assert!((l - (-2718.0 + 3.7f64.log10())).abs() < 1e-9, "l = {l}");
        assert!(ctx.from_i64(0).log10_abs().is_none());
    }

    #[test]
    fn pow10_round_trip() {
        let ctx = Ctx::new(40).unwrap();
        let t = ctx.pow10(-3000);
        assert!((t.log10_abs().unwrap() + 3000.0).abs() < 1e-9);
        let u = ctx.pow10(12);
        assert!((u.log10_abs().unwrap() - 12.0).abs() < 1e-9);
    }

    #[test]
    fn sci_string() {
        let ctx = Ctx::new(40).unwrap();
        let x = ctx.parse("-1.2347e-4800").unwrap();
        assert_eq!(x.to_sci_string(4), "-1.235e-4800");
        assert_eq!(ctx.from_i64(0).to_sci_string(4), "0");
        let y = ctx.parse("9.9999").unwrap();
        assert_eq!(y.to_sci_string(3), "1.00e1");
    }

    #[test]
    fn arithmetic_smoke() {
        let ctx = Ctx::new(60).unwrap();
        let a = ctx.parse("2.5").unwrap();
        let b = ctx.from_i64(4);
        let s = ctx.add(&a, &b);
        assert_eq!(s.to_f64(), 6.5);
        let q = ctx.div(&a, &b);
        assert_eq!(q.to_f64(), 0.625);
        let e1 = ctx.exp(&ctx.from_i64(1));
        let l = ctx.ln(&e1);
        let diff = ctx.sub(&l, &ctx.from_i64(1)).abs();
        assert!(diff.log10_abs().unwrap_or(-999.0) < -55.0);
    }

    #[test]
    fn cancellation_keeps_tiny_differences() {
        let ctx = Ctx::new(3100).unwrap();
        let three = ctx.from_i64(3);
        let tiny = ctx.pow10(-3000);
        let close = ctx.sub(&three, &tiny);
        let back = ctx.sub(&three, &close);
        let l = back.log10_abs().unwrap();
        assert!((l + 3000.0).abs() < 1e-6, "l = {l}");
    }
}
