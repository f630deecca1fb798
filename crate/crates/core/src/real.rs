//! Scalar abstraction shared by the double and double-double code paths.

use std::fmt::Debug;
use std::ops::{Add, AddAssign, Div, DivAssign, Mul, MulAssign, Neg, Sub, SubAssign};

/// Real field operations needed by orbit expansion, basis evaluation and
/// residual assembly.
pub trait Real:
    Copy
    + Debug
    + PartialOrd
    + Send
    + Sync
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + AddAssign
    + SubAssign
    + MulAssign
    + DivAssign
    + 'static
{
    fn from_f64(x: f64) -> Self;
    fn to_f64(self) -> f64;
    fn sqrt(self) -> Self;

    fn abs(self) -> Self {
        if self < Self::zero() {
            -self
        } else {
            self
        }
    }

    fn zero() -> Self {
        Self::from_f64(0.0)
    }

    fn one() -> Self {
        Self::from_f64(1.0)
    }

    /// `num / den`, exact to working precision.
    fn ratio(num: i64, den: i64) -> Self {
        Self::from_f64(num as f64) / Self::from_f64(den as f64)
    }

    fn is_finite(self) -> bool {
        self.to_f64().is_finite()
    }

    /// Scientific notation with `digits` significant digits.
    fn format_sig(self, digits: usize) -> String;

    fn parse_decimal(s: &str) -> Option<Self>;
}

impl Real for f64 {
    #[inline]
    fn from_f64(x: f64) -> Self {
        x
    }

    #[inline]
    fn to_f64(self) -> f64 {
        self
    }

    #[inline]
    fn sqrt(self) -> Self {
        f64::sqrt(self)
    }

    #[inline]
    fn abs(self) -> Self {
        f64::abs(self)
    }

    fn format_sig(self, digits: usize) -> String {
        format!("{:.*e}", digits.saturating_sub(1), self)
    }

    fn parse_decimal(s: &str) -> Option<Self> {
        s.parse().ok()
    }
}
