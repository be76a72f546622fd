use std::fmt;
use std::ops::{Div, Mul, Neg};

use num_bigint::{BigInt, Sign};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// An exact number of the form `sign * sqrt(radicand)` with a non-negative
/// rational radicand. Closed under multiplication and division, which is all
/// that angular-momentum coupling coefficients need.
///
/// Zero is canonical: `sign == 0` exactly when `radicand == 0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SignedSqrtRational {
    sign: i8,
    radicand: BigRational,
}

impl SignedSqrtRational {
    pub fn zero() -> Self {
        SignedSqrtRational {
            sign: 0,
            radicand: BigRational::zero(),
        }
    }

    pub fn one() -> Self {
        SignedSqrtRational {
            sign: 1,
            radicand: BigRational::one(),
        }
    }

    /// `sign * sqrt(radicand)`. A negative radicand is a caller bug.
    pub fn new(sign: i32, radicand: BigRational) -> Self {
        assert!(!radicand.is_negative(), "negative radicand {radicand}");
        if sign == 0 || radicand.is_zero() {
            return Self::zero();
        }
        SignedSqrtRational {
            sign: sign.signum() as i8,
            radicand,
        }
    }

    /// The exact value `c` (a rational), i.e. `sign(c) * sqrt(c^2)`.
    pub fn from_rational(c: &BigRational) -> Self {
        let sign = match c.numer().sign() {
            Sign::Minus => -1,
            Sign::NoSign => 0,
            Sign::Plus => 1,
        };
        Self::new(sign, c * c)
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(&BigRational::from_integer(n.into()))
    }

    pub fn sign(&self) -> i32 {
        self.sign as i32
    }

    pub fn radicand(&self) -> &BigRational {
        &self.radicand
    }

    pub fn is_zero(&self) -> bool {
        self.sign == 0
    }

    /// `sign * radicand`, the square carrying the sign.
    pub fn signed_square(&self) -> BigRational {
        match self.sign {
            0 => BigRational::zero(),
            1 => self.radicand.clone(),
            _ => -self.radicand.clone(),
        }
    }

    /// Exact sum, available only when the result stays in the closure: when
    /// either side is zero or both share the same radicand.
    pub fn checked_add(&self, other: &Self) -> Option<Self> {
        if self.is_zero() {
            return Some(other.clone());
        }
        if other.is_zero() {
            return Some(self.clone());
        }
        if self.radicand != other.radicand {
            return None;
        }
        let coeff = self.sign as i64 + other.sign as i64;
        // coeff in {-2, 0, 2}; (±2)^2 = 4
        Some(Self::new(
            coeff.signum() as i32,
            &self.radicand * BigRational::from_integer(BigInt::from(coeff * coeff)),
        ))
    }

    pub fn checked_sub(&self, other: &Self) -> Option<Self> {
        self.checked_add(&-other.clone())
    }

    /// Correctly rounded to within one ulp.
    pub fn to_f64(&self) -> f64 {
        if self.sign == 0 {
            return 0.0;
        }
        let magnitude = sqrt_rational_f64(&self.radicand);
        if self.sign < 0 {
            -magnitude
        } else {
            magnitude
        }
    }
}

/// `sqrt(p/q)` via an integer square root carrying at least 64 significant bits.
fn sqrt_rational_f64(r: &BigRational) -> f64 {
    let p = r.numer().magnitude().clone();
    let q = r.denom().magnitude().clone();
    // choose k with p * 4^k / q >= 2^128
    let shift = 128i64 + q.bits() as i64 - p.bits() as i64;
    let k = if shift > 0 {
        (shift + 1) / 2
    } else {
        -((-shift) / 2)
    };
    let scaled = if k >= 0 {
        (p << (2 * k as u64)) / q
    } else {
        p / (q << (2 * (-k) as u64))
    };
    let root = scaled.sqrt();
    let mantissa = root.to_f64().expect("finite after scaling");
    scale_by_pow2(mantissa, -k)
}

fn scale_by_pow2(mut x: f64, mut e: i64) -> f64 {
    while e > 1000 {
        x *= 2f64.powi(1000);
        e -= 1000;
    }
    while e < -1000 {
        x *= 2f64.powi(-1000);
        e += 1000;
    }
    x * 2f64.powi(e as i32)
}

impl Mul for &SignedSqrtRational {
    type Output = SignedSqrtRational;
    fn mul(self, rhs: &SignedSqrtRational) -> SignedSqrtRational {
        SignedSqrtRational::new(
            self.sign as i32 * rhs.sign as i32,
            &self.radicand * &rhs.radicand,
        )
    }
}

impl Mul for SignedSqrtRational {
    type Output = SignedSqrtRational;
    fn mul(self, rhs: SignedSqrtRational) -> SignedSqrtRational {
        &self * &rhs
    }
}

impl Div for &SignedSqrtRational {
    type Output = SignedSqrtRational;
    /// Panics on division by zero.
    fn div(self, rhs: &SignedSqrtRational) -> SignedSqrtRational {
        assert!(!rhs.is_zero(), "division by zero");
        SignedSqrtRational::new(
            self.sign as i32 * rhs.sign as i32,
            &self.radicand / &rhs.radicand,
        )
    }
}

impl Div for SignedSqrtRational {
    type Output = SignedSqrtRational;
    fn div(self, rhs: SignedSqrtRational) -> SignedSqrtRational {
        &self / &rhs
    }
}

impl Neg for SignedSqrtRational {
    type Output = SignedSqrtRational;
    fn neg(self) -> SignedSqrtRational {
        SignedSqrtRational {
            sign: -self.sign,
            radicand: self.radicand,
        }
    }
}

/// Renders as `0`, `√(p/q)`, or `-√(p/q)`.
impl fmt::Display for SignedSqrtRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.sign {
            0 => write!(f, "0"),
            s => {
                let minus = if s < 0 { "-" } else { "" };
                write!(f, "{minus}√({})", self.radicand)
            }
        }
    }
}
