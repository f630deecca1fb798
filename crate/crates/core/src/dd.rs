//! Double-double arithmetic: an unevaluated sum `hi + lo` of two `f64`
//! carrying roughly 32 significant decimal digits.
//!
//! The error-free transformations follow the usual Dekker/Knuth forms, with
//! the product error taken from a fused multiply-add.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, DivAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use crate::real::Real;

#[derive(Clone, Copy, Debug, Default)]
pub struct DoubleDouble {
    pub hi: f64,
    pub lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

impl DoubleDouble {
    pub const ZERO: Self = Self { hi: 0.0, lo: 0.0 };
    pub const ONE: Self = Self { hi: 1.0, lo: 0.0 };

    pub fn new(hi: f64, lo: f64) -> Self {
        let (hi, lo) = quick_two_sum(hi, lo);
        Self { hi, lo }
    }

    fn mul_f64(self, b: f64) -> Self {
        let (p1, p2) = two_prod(self.hi, b);
        let p2 = p2 + self.lo * b;
        let (hi, lo) = quick_two_sum(p1, p2);
        Self { hi, lo }
    }

    fn floor(self) -> Self {
        let hi = self.hi.floor();
        if hi == self.hi {
            let (hi, lo) = quick_two_sum(hi, self.lo.floor());
            Self { hi, lo }
        } else {
            Self { hi, lo: 0.0 }
        }
    }

    /// `10^exp`.
    pub fn pow10(exp: i32) -> Self {
        let mut result = Self::ONE;
        let mut base = Self::from(10.0);
        let mut n = exp.unsigned_abs();
        while n > 0 {
            if n & 1 == 1 {
                result *= base;
            }
            base *= base;
            n >>= 1;
        }
        if exp < 0 {
            Self::ONE / result
        } else {
            result
        }
    }
}

impl From<f64> for DoubleDouble {
    fn from(x: f64) -> Self {
        Self { hi: x, lo: 0.0 }
    }
}

impl PartialEq for DoubleDouble {
    fn eq(&self, other: &Self) -> bool {
        self.hi == other.hi && self.lo == other.lo
    }
}

impl PartialOrd for DoubleDouble {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        match self.hi.partial_cmp(&other.hi)? {
            Ordering::Equal => self.lo.partial_cmp(&other.lo),
            ord => Some(ord),
        }
    }
}

impl Neg for DoubleDouble {
    type Output = Self;
    fn neg(self) -> Self {
        Self {
            hi: -self.hi,
            lo: -self.lo,
        }
    }
}

impl Add for DoubleDouble {
    type Output = Self;
    fn add(self, b: Self) -> Self {
        let (s1, s2) = two_sum(self.hi, b.hi);
        let (t1, t2) = two_sum(self.lo, b.lo);
        let (s1, s2) = quick_two_sum(s1, s2 + t1);
        let (hi, lo) = quick_two_sum(s1, s2 + t2);
        Self { hi, lo }
    }
}

impl Sub for DoubleDouble {
    type Output = Self;
    fn sub(self, b: Self) -> Self {
        self + (-b)
    }
}

impl Mul for DoubleDouble {
    type Output = Self;
    fn mul(self, b: Self) -> Self {
        let (p1, p2) = two_prod(self.hi, b.hi);
        let p2 = p2 + (self.hi * b.lo + self.lo * b.hi);
        let (hi, lo) = quick_two_sum(p1, p2);
        Self { hi, lo }
    }
}

impl Div for DoubleDouble {
    type Output = Self;
    fn div(self, b: Self) -> Self {
        let q1 = self.hi / b.hi;
        let r = self - b.mul_f64(q1);
        let q2 = r.hi / b.hi;
        let r = r - b.mul_f64(q2);
        let q3 = r.hi / b.hi;
        let (q1, q2) = quick_two_sum(q1, q2);
        Self { hi: q1, lo: q2 } + Self::from(q3)
    }
}

macro_rules! assign_op {
    ($trait:ident, $fn:ident, $op:tt) => {
        impl $trait for DoubleDouble {
            fn $fn(&mut self, rhs: Self) {
                *self = *self $op rhs;
            }
        }
    };
}

assign_op!(AddAssign, add_assign, +);
assign_op!(SubAssign, sub_assign, -);
assign_op!(MulAssign, mul_assign, *);
assign_op!(DivAssign, div_assign, /);

impl Real for DoubleDouble {
    fn from_f64(x: f64) -> Self {
        Self::from(x)
    }

    fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    fn sqrt(self) -> Self {
        if self.hi <= 0.0 {
            return Self::from(self.hi.sqrt());
        }
        let x = 1.0 / self.hi.sqrt();
        let ax = Self::from(self.hi * x);
        let diff = (self - ax * ax).hi * (x * 0.5);
        ax + Self::from(diff)
    }

    fn is_finite(self) -> bool {
        self.hi.is_finite() && self.lo.is_finite()
    }

    fn format_sig(self, digits: usize) -> String {
        let digits = digits.max(1);
        if self.hi == 0.0 {
            return format!("{:.*e}", digits - 1, 0.0);
        }
        if !self.hi.is_finite() {
            return format!("{}", self.hi);
        }
        let negative = self.hi < 0.0;
        let x = self.abs();
        let mut exp = x.hi.log10().floor() as i32;
        let mut r = x / Self::pow10(exp);
        if r.hi >= 10.0 {
            r /= Self::from(10.0);
            exp += 1;
        } else if r.hi < 1.0 {
            r *= Self::from(10.0);
            exp -= 1;
        }

        // One guard digit for rounding.
        let mut out: Vec<u8> = Vec::with_capacity(digits + 1);
        for _ in 0..=digits {
            let mut d = r.floor();
            if (r - d).hi < 0.0 {
                d -= Self::ONE;
            }
            let dv = d.hi.clamp(0.0, 9.0) as u8;
            out.push(dv);
            r = (r - Self::from(dv as f64)) * Self::from(10.0);
        }
        let guard = out.pop().unwrap();
        if guard >= 5 {
            let mut i = out.len();
            loop {
                if i == 0 {
                    out.insert(0, 1);
                    out.pop();
                    exp += 1;
                    break;
                }
                i -= 1;
                if out[i] == 9 {
                    out[i] = 0;
                } else {
                    out[i] += 1;
                    break;
                }
            }
        }

        let mut s = String::with_capacity(digits + 8);
        if negative {
            s.push('-');
        }
        s.push((b'0' + out[0]) as char);
        if out.len() > 1 {
            s.push('.');
            for &d in &out[1..] {
                s.push((b'0' + d) as char);
            }
        }
        s.push('e');
        s.push_str(&exp.to_string());
        s
    }

    fn parse_decimal(s: &str) -> Option<Self> {
        let s = s.trim();
        let (negative, body) = match s.as_bytes().first()? {
            b'-' => (true, &s[1..]),
            b'+' => (false, &s[1..]),
            _ => (false, s),
        };
        let (mantissa, exp) = match body.find(['e', 'E']) {
            Some(pos) => (&body[..pos], body[pos + 1..].parse::<i32>().ok()?),
            None => (body, 0),
        };
        let mut acc = Self::ZERO;
        let mut frac_digits = 0i32;
        let mut seen_dot = false;
        let mut any = false;
        for c in mantissa.chars() {
            match c {
                '.' if !seen_dot => seen_dot = true,
                '0'..='9' => {
                    any = true;
                    acc = acc.mul_f64(10.0) + Self::from((c as u8 - b'0') as f64);
                    if seen_dot {
                        frac_digits += 1;
                    }
                }
                _ => return None,
            }
        }
        if !any {
            return None;
        }
        let scale = exp - frac_digits;
        let value = if scale >= 0 {
            acc * Self::pow10(scale)
        } else {
            acc / Self::pow10(-scale)
        };
        Some(if negative { -value } else { value })
    }
}

impl fmt::Display for DoubleDouble {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.format_sig(f.precision().unwrap_or(32)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dd(x: f64) -> DoubleDouble {
        DoubleDouble::from(x)
    }

    #[test]
    fn third_times_three_is_one() {
        let third = dd(1.0) / dd(3.0);
        let back = third * dd(3.0) - dd(1.0);
        assert!(back.to_f64().abs() < 1e-31);
        // A plain f64 third carries an error of ~1.8e-17.
        assert!((third - dd(1.0 / 3.0)).to_f64().abs() > 1e-17);
    }

    #[test]
    fn sqrt_two_squared() {
        let r = dd(2.0).sqrt();
        assert!((r * r - dd(2.0)).to_f64().abs() < 1e-31);
    }

    #[test]
    fn format_known_constant() {
        let r = dd(5.0).sqrt();
        // A double-double carries about 32 significant digits.
        assert_eq!(r.format_sig(31), "2.236067977499789696409173668731e0");
        assert_eq!(dd(-0.5).format_sig(3), "-5.00e-1");
        assert_eq!(dd(9.9999).format_sig(2), "1.0e1");
    }

    #[test]
    fn parse_then_format() {
        let s = "2.236067977499789696409173668731276e0";
        let x = DoubleDouble::parse_decimal(s).unwrap();
        assert!((x - dd(5.0).sqrt()).to_f64().abs() < 1e-31);
        let back = DoubleDouble::parse_decimal(&x.format_sig(34)).unwrap();
        assert!((back - x).to_f64().abs() < 1e-32);
        assert_eq!(
            DoubleDouble::parse_decimal("-1.25e-3").unwrap().to_f64(),
            -0.00125
        );
        assert!(DoubleDouble::parse_decimal("1.2.3").is_none());
        assert!(DoubleDouble::parse_decimal("e5").is_none());
    }
}
