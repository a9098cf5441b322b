//! Minimal double-double arithmetic (~32 significant digits).
//!
//! Only what the Brillouin-zone quadrature needs: +, ×, ÷ and the cosine and
//! sine of rational multiples of 2π. The R-dependent Fourier coefficient is
//! exponentially small compared with the integrand, so plain f64 rounding in
//! the integrand would swamp it at large R.

use std::ops::{Add, Div, Mul, Neg, Sub};

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct DoubleDouble {
    hi: f64,
    lo: f64,
}

const PI_HALF: DoubleDouble = DoubleDouble {
    hi: std::f64::consts::FRAC_PI_2,
    lo: 6.123_233_995_736_766e-17,
};

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

    pub fn from_f64(x: f64) -> Self {
        Self { hi: x, lo: 0.0 }
    }

    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    /// `(cos, sin)` of `2π·m/denominator`.
    pub fn cos_sin_turn(m: i64, denominator: i64) -> (Self, Self) {
        assert!(denominator > 0);
        let m = m.rem_euclid(denominator);
        // 2πm/M = (π/2)·quadrant + (π/2)·rest/M
        let quadrant = (4 * m as i128 / denominator as i128) as i64;
        let rest = 4 * m - quadrant * denominator;
        let (c, s) = if 2 * rest <= denominator {
            let x = PI_HALF * (Self::from_f64(rest as f64) / Self::from_f64(denominator as f64));
            cos_sin_taylor(x)
        } else {
            let x = PI_HALF
                * (Self::from_f64((denominator - rest) as f64)
                    / Self::from_f64(denominator as f64));
            let (c, s) = cos_sin_taylor(x);
            (s, c)
        };
        match quadrant {
            0 => (c, s),
            1 => (-s, c),
            2 => (-c, -s),
            _ => (s, -c),
        }
    }
}

/// Taylor series for `|x| <= π/4`.
fn cos_sin_taylor(x: DoubleDouble) -> (DoubleDouble, DoubleDouble) {
    let x2 = x * x;
    let mut cos = DoubleDouble::ONE;
    let mut sin = x;
    let mut cterm = DoubleDouble::ONE;
    let mut sterm = x;
    let mut n = 1.0;
    loop {
        cterm = -(cterm * x2) / DoubleDouble::from_f64(n * (n + 1.0));
        sterm = -(sterm * x2) / DoubleDouble::from_f64((n + 1.0) * (n + 2.0));
        cos = cos + cterm;
        sin = sin + sterm;
        n += 2.0;
        if cterm.hi.abs() < 1e-36 && sterm.hi.abs() < 1e-36 {
            break;
        }
    }
    (cos, sin)
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
    fn add(self, rhs: Self) -> Self {
        let (s, e) = two_sum(self.hi, rhs.hi);
        let (t, f) = two_sum(self.lo, rhs.lo);
        let (s, e) = quick_two_sum(s, e + t);
        let (hi, lo) = quick_two_sum(s, e + f);
        Self { hi, lo }
    }
}

impl Sub for DoubleDouble {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl Mul for DoubleDouble {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let (p, e) = two_prod(self.hi, rhs.hi);
        let e = e + (self.hi * rhs.lo + self.lo * rhs.hi);
        let (hi, lo) = quick_two_sum(p, e);
        Self { hi, lo }
    }
}

impl Div for DoubleDouble {
    type Output = Self;
    fn div(self, rhs: Self) -> Self {
        let q1 = self.hi / rhs.hi;
        let r = self - rhs * Self::from_f64(q1);
        let q2 = r.hi / rhs.hi;
        let r = r - rhs * Self::from_f64(q2);
        let q3 = r.hi / rhs.hi;
        let (hi, lo) = quick_two_sum(q1, q2);
        Self { hi, lo } + Self::from_f64(q3)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_carries_extra_digits() {
        let third = DoubleDouble::ONE / DoubleDouble::from_f64(3.0);
        let back = third * DoubleDouble::from_f64(3.0) - DoubleDouble::ONE;
        assert!(back.to_f64().abs() < 1e-31);
        let tiny = DoubleDouble::from_f64(1e-20);
        let sum = DoubleDouble::ONE + tiny - DoubleDouble::ONE;
        assert_eq!(sum.to_f64(), 1e-20);
    }

    #[test]
    fn turn_angles() {
        for denom in [1, 2, 3, 7, 12, 64, 1000] {
            for m in -2 * denom..2 * denom {
                let (c, s) = DoubleDouble::cos_sin_turn(m, denom);
                let angle = 2.0 * std::f64::consts::PI * m as f64 / denom as f64;
                assert!((c.to_f64() - angle.cos()).abs() < 1e-14);
                assert!((s.to_f64() - angle.sin()).abs() < 1e-14);
                let norm = c * c + s * s - DoubleDouble::ONE;
                assert!(norm.to_f64().abs() < 1e-30);
            }
        }
    }

    #[test]
    fn exact_special_angles() {
        let (c, s) = DoubleDouble::cos_sin_turn(1, 4);
        assert_eq!((c.to_f64(), s.to_f64()), (0.0, 1.0));
        let (c, _) = DoubleDouble::cos_sin_turn(1, 6);
        assert!((c - DoubleDouble::from_f64(0.5)).to_f64().abs() < 1e-31);
        let (c, s) = DoubleDouble::cos_sin_turn(1, 8);
        assert!((c - s).to_f64().abs() < 1e-31);
    }
}
