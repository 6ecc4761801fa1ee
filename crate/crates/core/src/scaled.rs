//! Reals stored as `m * exp(ln_scale)`, for quantities such as
//! `exp(exp(alpha + beta eps))` whose magnitude leaves the f64 range long
//! before their ratios do.

use std::ops::{Add, Mul, Neg, Sub};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Scaled {
    mantissa: f64,
    ln_scale: f64,
}

impl Scaled {
    pub const ZERO: Scaled = Scaled {
        mantissa: 0.0,
        ln_scale: 0.0,
    };

    pub fn new(mantissa: f64, ln_scale: f64) -> Self {
        if mantissa == 0.0 {
            Self::ZERO
        } else {
            Self { mantissa, ln_scale }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.mantissa == 0.0
    }

    /// `ln |x|`, `-inf` for zero.
    pub fn ln_abs(&self) -> f64 {
        if self.is_zero() {
            f64::NEG_INFINITY
        } else {
            self.mantissa.abs().ln() + self.ln_scale
        }
    }

    /// Nearest f64; saturates to `±inf` or underflows to zero.
    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            0.0
        } else {
            self.mantissa.signum() * self.ln_abs().exp()
        }
    }

    pub fn abs(self) -> Self {
        Self::new(self.mantissa.abs(), self.ln_scale)
    }

    /// `|self| / |other|` as an f64; zero over zero is zero.
    pub fn ratio_abs(&self, other: &Scaled) -> f64 {
        match (self.is_zero(), other.is_zero()) {
            (true, _) => 0.0,
            (false, true) => f64::INFINITY,
            _ => (self.mantissa / other.mantissa).abs() * (self.ln_scale - other.ln_scale).exp(),
        }
    }
}

impl From<f64> for Scaled {
    fn from(x: f64) -> Self {
        Scaled::new(x, 0.0)
    }
}

impl Add for Scaled {
    type Output = Scaled;

    fn add(self, rhs: Scaled) -> Scaled {
        if self.is_zero() {
            return rhs;
        }
        if rhs.is_zero() {
            return self;
        }
        let s = self.ln_scale.max(rhs.ln_scale);
        Scaled::new(
            self.mantissa * (self.ln_scale - s).exp() + rhs.mantissa * (rhs.ln_scale - s).exp(),
            s,
        )
    }
}

impl Neg for Scaled {
    type Output = Scaled;

    fn neg(self) -> Scaled {
        Scaled::new(-self.mantissa, self.ln_scale)
    }
}

impl Sub for Scaled {
    type Output = Scaled;

    fn sub(self, rhs: Scaled) -> Scaled {
        self + (-rhs)
    }
}

impl Mul<f64> for Scaled {
    type Output = Scaled;

    fn mul(self, k: f64) -> Scaled {
        Scaled::new(self.mantissa * k, self.ln_scale)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_in_range() {
        let a = Scaled::from(3.0);
        let b = Scaled::new(2.0, 1.0);
        assert!(((a + b).to_f64() - (3.0 + 2.0 * 1f64.exp())).abs() < 1e-14);
        assert!(((a - b).to_f64() - (3.0 - 2.0 * 1f64.exp())).abs() < 1e-14);
        assert_eq!((a * 2.0).to_f64(), 6.0);
        assert_eq!((a - a).to_f64(), 0.0);
        assert!(((-b).to_f64() + 2.0 * 1f64.exp()).abs() < 1e-15);
    }

    #[test]
    fn beyond_f64_range() {
        let huge = Scaled::new(1.5, 2000.0);
        let other = Scaled::new(3.0, 2000.0);
        assert_eq!(huge.to_f64(), f64::INFINITY);
        assert!((huge.ratio_abs(&other) - 0.5).abs() < 1e-15);
        assert!(((other - huge).ratio_abs(&huge) - 1.0).abs() < 1e-12);
        assert_eq!(Scaled::ZERO.ratio_abs(&huge), 0.0);
    }
}
