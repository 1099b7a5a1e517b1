//! Signed log-magnitude arithmetic.
//!
//! The volume/distance estimates of the slow-growth construction involve
//! quantities of size `exp(240 j^2 + 480 j + 240)`, far beyond `f64` range,
//! so they are carried as a sign plus the natural log of the magnitude.
//! Addition goes through log-sum-exp; products add logs.

use serde::Serialize;
use std::ops::{Add, Mul, Neg, Sub};

/// A real number stored as `sign * exp(ln_abs)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LogQuantity {
    /// -1, 0 or +1; 0 iff the value is exactly zero.
    pub sign: i8,
    /// Natural log of the magnitude; ignored when `sign == 0`.
    pub ln_abs: f64,
}

impl LogQuantity {
    pub const ZERO: LogQuantity = LogQuantity {
        sign: 0,
        ln_abs: f64::NEG_INFINITY,
    };

    pub fn from_value(x: f64) -> Self {
        if x == 0.0 {
            Self::ZERO
        } else {
            Self {
                sign: if x > 0.0 { 1 } else { -1 },
                ln_abs: x.abs().ln(),
            }
        }
    }

    pub fn from_ln(ln_abs: f64) -> Self {
        Self { sign: 1, ln_abs }
    }

    pub fn from_sign_ln(sign: i8, ln_abs: f64) -> Self {
        assert!(sign == -1 || sign == 0 || sign == 1);
        if sign == 0 {
            Self::ZERO
        } else {
            Self { sign, ln_abs }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.sign == 0
    }

    /// Converts back to `f64`; saturates to +-inf when out of range.
    pub fn to_f64(&self) -> f64 {
        self.sign as f64 * self.ln_abs.exp()
    }

    pub fn abs(&self) -> Self {
        Self {
            sign: self.sign.abs(),
            ln_abs: self.ln_abs,
        }
    }

    /// `x^p` for positive `x`.
    pub fn powf(&self, p: f64) -> Self {
        assert!(self.sign > 0, "powf needs a positive quantity");
        Self {
            sign: 1,
            ln_abs: self.ln_abs * p,
        }
    }
}

impl Mul for LogQuantity {
    type Output = LogQuantity;

    fn mul(self, rhs: Self) -> Self {
        if self.sign == 0 || rhs.sign == 0 {
            Self::ZERO
        } else {
            Self {
                sign: self.sign * rhs.sign,
                ln_abs: self.ln_abs + rhs.ln_abs,
            }
        }
    }
}

impl Neg for LogQuantity {
    type Output = LogQuantity;

    fn neg(self) -> Self {
        Self {
            sign: -self.sign,
            ln_abs: self.ln_abs,
        }
    }
}

impl Add for LogQuantity {
    type Output = LogQuantity;

    fn add(self, rhs: Self) -> Self {
        if self.sign == 0 {
            return rhs;
        }
        if rhs.sign == 0 {
            return self;
        }
        let (big, small) = if self.ln_abs >= rhs.ln_abs {
            (self, rhs)
        } else {
            (rhs, self)
        };
        let d = small.ln_abs - big.ln_abs; // <= 0
        if big.sign == small.sign {
            Self {
                sign: big.sign,
                ln_abs: big.ln_abs + d.exp().ln_1p(),
            }
        } else {
            // magnitudes subtract; exact cancellation gives zero
            let rem = -d.exp_m1(); // 1 - e^d, in [0, 1)
            if rem == 0.0 {
                Self::ZERO
            } else {
                Self {
                    sign: big.sign,
                    ln_abs: big.ln_abs + rem.ln(),
                }
            }
        }
    }
}

impl Sub for LogQuantity {
    type Output = LogQuantity;

    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}
