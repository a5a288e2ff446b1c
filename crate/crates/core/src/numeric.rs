//! Scalar plumbing: exact rationals, factorial-type products, and the
//! 256-bit floating representation used for quantities like `e^{2r}`.

use std::fmt;

use astro_float::{BigFloat, Consts, Radix, RoundingMode, Sign};
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// Exact scalar for every symbolic computation (reduced, positive denominator).
pub type Rational = BigRational;

/// Extended-precision float.
pub type Float = BigFloat;

/// Mantissa width for all extended-precision evaluation.
pub const PRECISION: usize = 256;

/// Relative error declared for values produced by a bounded number of
/// 256-bit operations (leaves 56 bits of headroom for accumulated rounding).
pub const HP_REL_ERR: f64 = 6.223015277861142e-61; // 2^-200

pub(crate) const RM: RoundingMode = RoundingMode::ToEven;

pub fn rat(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn from_biguint(n: BigUint) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `p/q` text, always with an explicit denominator.
pub fn rational_to_text(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Parses `p/q`, an integer, or a finite decimal such as `0.8` or `-1.25e-3`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let err = |msg: &str| Error::Parse {
        pos: 0,
        msg: format!("{msg}: {s:?}"),
    };
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| err("bad numerator"))?;
        let q: BigInt = q.trim().parse().map_err(|_| err("bad denominator"))?;
        if q.is_zero() {
            return Err(err("zero denominator"));
        }
        return Ok(Rational::new(p, q));
    }
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(i) => (
            &s[..i],
            s[i + 1..].parse::<i32>().map_err(|_| err("bad exponent"))?,
        ),
        None => (s, 0),
    };
    let (neg, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (whole, frac) = digits.split_once('.').unwrap_or((digits, ""));
    if whole.is_empty() && frac.is_empty() {
        return Err(err("empty number"));
    }
    if !whole.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return Err(err("not a number"));
    }
    let all: BigInt = format!("{whole}{frac}").parse().map_err(|_| err("bad digits"))?;
    let scale = exponent - frac.len() as i32;
    let ten = BigInt::from(10u32);
    let mut value = if scale >= 0 {
        Rational::from_integer(all * num_traits::pow(ten, scale as usize))
    } else {
        Rational::new(all, num_traits::pow(ten, (-scale) as usize))
    };
    if neg {
        value = -value;
    }
    Ok(value)
}

/// `start * (start + 1) * ... * (start + len - 1)`; empty product is 1.
///
/// Balanced product tree so that huge gaps (tens of thousands of factors)
/// stay fast.
pub fn rising_product(start: u64, len: u64) -> BigUint {
    fn tree(lo: u64, hi: u64) -> BigUint {
        // product of lo..hi (exclusive)
        if hi - lo <= 16 {
            let mut acc = BigUint::one();
            let mut chunk: u128 = 1;
            for v in lo..hi {
                match chunk.checked_mul(v as u128) {
                    Some(c) => chunk = c,
                    None => {
                        acc *= BigUint::from(chunk);
                        chunk = v as u128;
                    }
                }
            }
            acc * BigUint::from(chunk)
        } else {
            let mid = lo + (hi - lo) / 2;
            tree(lo, mid) * tree(mid, hi)
        }
    }
    if len == 0 {
        return BigUint::one();
    }
    tree(start, start + len)
}

pub fn factorial(n: u64) -> BigUint {
    rising_product(1, n)
}

pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    rising_product(n - k + 1, k) / factorial(k)
}

pub fn pow_rational(r: &Rational, e: u64) -> Rational {
    let e = usize::try_from(e).expect("exponent fits usize");
    Rational::new(
        num_traits::pow(r.numer().clone(), e),
        num_traits::pow(r.denom().clone(), e),
    )
}

/// Smallest integer `>= r`.
pub fn ceil_integer(r: &Rational) -> BigInt {
    r.ceil().to_integer()
}

/// `ln|r|` for nonzero `r`, accurate to about 1e-15 relative regardless of
/// the size of numerator and denominator.
pub fn ln_abs_rational(r: &Rational) -> f64 {
    ln_biguint(r.numer().magnitude()) - ln_biguint(r.denom().magnitude())
}

pub fn ln_biguint(n: &BigUint) -> f64 {
    let bits = n.bits();
    if bits <= 1000 {
        return n.to_f64().unwrap_or(f64::INFINITY).ln();
    }
    let shift = bits - 64;
    let top = (n >> shift).to_f64().unwrap_or(f64::INFINITY);
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

/// Upward-rounded rational at least as large as `x` (for `x >= 0`), with
/// denominator `2^40`.
pub fn rational_upper_bound(x: f64) -> Rational {
    let scale = (1u64 << 40) as f64;
    let numer = (x * scale).ceil() + 1.0;
    Rational::new(
        BigInt::from(numer as u128),
        BigInt::from(1u64 << 40),
    )
}

// ---------------------------------------------------------------------------
// extended precision

pub fn consts() -> Consts {
    Consts::new().expect("astro-float constant cache")
}

pub fn float_from_f64(x: f64) -> Float {
    BigFloat::from_f64(x, PRECISION)
}

pub fn float_from_bigint(n: &BigInt) -> Float {
    if n.is_zero() {
        return BigFloat::from_u8(0, PRECISION);
    }
    let sign = if n.is_negative() { Sign::Neg } else { Sign::Pos };
    let mag = n.magnitude();
    let bits = mag.bits();
    // keep the top PRECISION + 64 bits; the rest only affects rounding
    let keep = (PRECISION as u64) + 64;
    let (top, shift) = if bits > keep {
        (mag >> (bits - keep), bits - keep)
    } else {
        (mag.clone(), 0)
    };
    let words = top.to_u64_digits();
    let exp = (words.len() as u64 * 64 + shift) as i64;
    let exp = i32::try_from(exp).expect("exponent in range");
    let mut f = BigFloat::from_words(&words, sign, exp);
    f.set_precision(PRECISION, RM).expect("precision");
    f
}

pub fn float_from_rational(r: &Rational) -> Float {
    float_from_bigint(r.numer()).div(&float_from_bigint(r.denom()), PRECISION, RM)
}

/// Nearest f64; saturates to 0 or infinity outside the f64 range.
pub fn float_to_f64(x: &Float) -> f64 {
    match x.as_raw_parts() {
        None => f64::NAN,
        Some((words, _, sign, exp, _)) => {
            if x.is_zero() {
                return 0.0;
            }
            let top = *words.last().unwrap_or(&0) as f64 / 18446744073709551616.0;
            let v = if exp > 2000 {
                f64::INFINITY
            } else if exp < -2000 {
                0.0
            } else {
                top * 2f64.powi(exp)
            };
            if sign == Sign::Neg {
                -v
            } else {
                v
            }
        }
    }
}

/// `log2|x|` without range limits.
pub fn float_log2(x: &Float) -> f64 {
    match x.as_raw_parts() {
        Some((words, _, _, exp, _)) if !x.is_zero() => {
            let top = *words.last().unwrap_or(&0) as f64 / 18446744073709551616.0;
            top.log2() + exp as f64
        }
        _ => f64::NEG_INFINITY,
    }
}

/// Decimal scientific text with `digits` significant digits (truncated).
pub fn float_to_string(x: &Float, digits: usize) -> String {
    if x.is_zero() {
        return "0".to_string();
    }
    let mut cc = consts();
    let s = x
        .format(Radix::Dec, RM, &mut cc)
        .unwrap_or_else(|_| "NaN".to_string());
    // astro-float renders "d.ddddde±x"
    let (mant, exp) = match s.split_once('e') {
        Some((m, e)) => (m.to_string(), e.to_string()),
        None => (s.clone(), "+0".to_string()),
    };
    let (sign, body) = match mant.strip_prefix('-') {
        Some(b) => ("-", b.to_string()),
        None => ("", mant),
    };
    let mut out = String::new();
    let mut count = 0;
    for c in body.chars() {
        if c.is_ascii_digit() {
            if count == digits {
                break;
            }
            count += 1;
        }
        out.push(c);
    }
    let out = out.trim_end_matches('.');
    let exp = exp.trim_start_matches('+');
    format!("{sign}{out}e{exp}")
}

pub fn float_cmp(a: &Float, b: &Float) -> std::cmp::Ordering {
    a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal)
}

/// `|a - b| / |b|` in f64 (for cross-checks between two evaluations).
pub fn float_rel_diff(a: &Float, b: &Float) -> f64 {
    if b.is_zero() {
        return if a.is_zero() { 0.0 } else { f64::INFINITY };
    }
    let d = a.sub(b, PRECISION, RM).abs();
    let q = d.div(&b.abs(), PRECISION, RM);
    float_to_f64(&q)
}

// ---------------------------------------------------------------------------

/// A nonnegative scalar, exact or approximate with a relative error bound.
#[derive(Clone, Debug)]
pub enum NormValue {
    Exact(Rational),
    Approx { value: Float, rel_err: f64 },
}

impl NormValue {
    pub fn exact(r: Rational) -> Self {
        debug_assert!(!r.is_negative(), "NormValue must be nonnegative");
        NormValue::Exact(r)
    }

    pub fn approx(value: Float, rel_err: f64) -> Self {
        NormValue::Approx { value, rel_err }
    }

    pub fn from_f64(value: f64, rel_err: f64) -> Self {
        debug_assert!(value >= 0.0);
        NormValue::Approx {
            value: float_from_f64(value),
            rel_err,
        }
    }

    pub fn zero() -> Self {
        NormValue::Exact(Rational::zero())
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, NormValue::Exact(_))
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        match self {
            NormValue::Exact(r) => Some(r),
            NormValue::Approx { .. } => None,
        }
    }

    pub fn rel_err(&self) -> f64 {
        match self {
            NormValue::Exact(_) => 0.0,
            NormValue::Approx { rel_err, .. } => *rel_err,
        }
    }

    pub fn to_float(&self) -> Float {
        match self {
            NormValue::Exact(r) => float_from_rational(r),
            NormValue::Approx { value, .. } => value.clone(),
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            NormValue::Exact(r) => r.to_f64().unwrap_or_else(|| {
                if r.is_zero() {
                    0.0
                } else {
                    ln_abs_rational(r).exp()
                }
            }),
            NormValue::Approx { value, .. } => float_to_f64(value),
        }
    }

    /// Upper end of the declared error interval, in f64.
    pub fn upper_f64(&self) -> f64 {
        self.to_f64() * (1.0 + self.rel_err())
    }

    pub fn lower_f64(&self) -> f64 {
        self.to_f64() * (1.0 - self.rel_err()).max(0.0)
    }

    pub fn sqrt(&self) -> NormValue {
        let v = self.to_float().sqrt(PRECISION, RM);
        NormValue::Approx {
            value: v,
            rel_err: self.rel_err() / 2.0 + HP_REL_ERR,
        }
    }

    /// `p/q` for exact values, scientific decimal otherwise.
    pub fn to_text(&self) -> String {
        match self {
            NormValue::Exact(r) => rational_to_text(r),
            NormValue::Approx { value, .. } => float_to_string(value, 20),
        }
    }
}

impl fmt::Display for NormValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NormValue::Exact(r) => write!(f, "{}", rational_to_text(r)),
            NormValue::Approx { value, rel_err } => {
                write!(f, "{} (rel err {:.1e})", float_to_string(value, 20), rel_err)
            }
        }
    }
}

impl Serialize for NormValue {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            NormValue::Exact(r) => {
                let mut s = serializer.serialize_struct("NormValue", 2)?;
                s.serialize_field("mode", "exact")?;
                s.serialize_field("value", &rational_to_text(r))?;
                s.end()
            }
            NormValue::Approx { value, rel_err } => {
                let mut s = serializer.serialize_struct("NormValue", 3)?;
                s.serialize_field("mode", "approximate")?;
                s.serialize_field("value", &float_to_string(value, 30))?;
                s.serialize_field("rel_err", rel_err)?;
                s.end()
            }
        }
    }
}
