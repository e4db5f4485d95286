//! Scalar abstraction shared by the exact and floating-point solver paths.
//!
//! Everything on the classical side (costs, priors, polytope optima) is
//! generic over [`Scalar`] so the same code runs with exact rationals or with
//! doubles. Two rational instantiations are provided: [`BigRational`] for
//! user-supplied data of arbitrary precision, and the machine-word [`Rat64`]
//! for the bulk verification sweep, where every sampled probability has a
//! small denominator and `i64` arithmetic cannot overflow.

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{FromPrimitive, Num, Signed, ToPrimitive};
use std::fmt::{Debug, Display};

/// Machine-word rational used by the verification audit.
pub type Rat64 = Ratio<i64>;

/// Number type the classical solvers are generic over.
///
/// Implementations must be a field containing the integers (division by a
/// nonzero element always succeeds). `EXACT` selects between exact equality
/// checks and the documented floating-point tolerances at validation sites.
pub trait Scalar:
    Num + Signed + Clone + PartialOrd + Debug + Display + Send + Sync + 'static
{
    /// Whether arithmetic is exact. Exact types compare with `==`; `f64`
    /// compares within explicit tolerances.
    const EXACT: bool;

    fn from_int(v: i64) -> Self;

    /// `num / den` as a scalar. Panics if `den == 0`.
    fn from_ratio(num: i64, den: i64) -> Self;

    /// Nearest double, for reporting and for handing data to the quantum side.
    fn to_f64(&self) -> f64;
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn from_int(v: i64) -> Self {
        v as f64
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        num as f64 / den as f64
    }

    fn to_f64(&self) -> f64 {
        *self
    }
}

impl Scalar for Rat64 {
    const EXACT: bool = true;

    fn from_int(v: i64) -> Self {
        Ratio::from_integer(v)
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Ratio::new(num, den)
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).expect("i64 ratio always fits a double")
    }
}

impl Scalar for BigRational {
    const EXACT: bool = true;

    fn from_int(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or_else(|| {
            // Out-of-range values saturate; good enough for display purposes.
            if self.is_negative() {
                f64::NEG_INFINITY
            } else {
                f64::INFINITY
            }
        })
    }
}

/// Formats a scalar for reports: exact types as `p` or `p/q`, doubles with
/// enough digits to round-trip (via Rust's shortest-representation `Display`).
pub fn scalar_to_string<S: Scalar>(x: &S) -> String {
    format!("{x}")
}

/// Parses `"p"`, `"-p"`, or `"p/q"` into an exact rational of arbitrary size.
pub fn parse_big_fraction(s: &str) -> Option<BigRational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((num, den)) => {
            let num: BigInt = num.trim().parse().ok()?;
            let den: BigInt = den.trim().parse().ok()?;
            if den == BigInt::from(0) {
                None
            } else {
                Some(BigRational::new(num, den))
            }
        }
        None => {
            if let Ok(int) = s.parse::<BigInt>() {
                return Some(BigRational::from_integer(int));
            }
            // Fall back to decimal notation ("0.25"); exact when the literal
            // is a terminating decimal.
            let f: f64 = s.parse().ok()?;
            BigRational::from_f64(f)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ratio_display_round_trips() {
        assert_eq!(scalar_to_string(&Rat64::from_ratio(-6, 5)), "-6/5");
        assert_eq!(scalar_to_string(&Rat64::from_ratio(4, 2)), "2");
        assert_eq!(scalar_to_string(&BigRational::from_ratio(1, 3)), "1/3");
    }

    #[test]
    fn fraction_parsing() {
        assert_eq!(
            parse_big_fraction("3/4"),
            Some(BigRational::from_ratio(3, 4))
        );
        assert_eq!(
            parse_big_fraction(" -7/5 "),
            Some(BigRational::from_ratio(-7, 5))
        );
        assert_eq!(parse_big_fraction("2"), Some(BigRational::from_int(2)));
        assert_eq!(
            parse_big_fraction("0.25"),
            Some(BigRational::from_ratio(1, 4))
        );
        assert_eq!(parse_big_fraction("1/0"), None);
        assert_eq!(parse_big_fraction("abc"), None);
    }

    #[test]
    fn float_scalar_arithmetic() {
        let x = f64::from_ratio(1, 4) + f64::from_ratio(3, 4);
        assert_eq!(x, 1.0);
        assert_eq!(Scalar::to_f64(&f64::from_int(-3)), -3.0);
    }
}
