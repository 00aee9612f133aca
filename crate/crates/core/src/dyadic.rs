//! Dyadic rationals `num / 2^expo`, the exact carrier for every probability
//! and Fourier coefficient on the hypercube (all are multiples of `2^-2n`).

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

/// A dyadic rational in normalized form: `num` is odd, or `num = 0` with
/// `expo = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Dyadic {
    num: i128,
    expo: u32,
}

impl Dyadic {
    pub const ZERO: Dyadic = Dyadic { num: 0, expo: 0 };
    pub const ONE: Dyadic = Dyadic { num: 1, expo: 0 };

    /// `num / 2^expo`, normalized.
    pub fn new(num: i128, expo: u32) -> Self {
        if num == 0 {
            return Self::ZERO;
        }
        let tz = num.trailing_zeros().min(expo);
        Dyadic {
            num: num >> tz,
            expo: expo - tz,
        }
    }

    pub fn from_int(v: i64) -> Self {
        Dyadic {
            num: v as i128,
            expo: 0,
        }
    }

    pub fn num(&self) -> i128 {
        self.num
    }

    pub fn expo(&self) -> u32 {
        self.expo
    }

    pub fn is_zero(&self) -> bool {
        self.num == 0
    }

    pub fn div_pow2(self, k: u32) -> Self {
        Dyadic::new(self.num, self.expo + k)
    }

    pub fn abs(self) -> Self {
        Dyadic {
            num: self.num.abs(),
            expo: self.expo,
        }
    }

    pub fn to_f64(self) -> f64 {
        self.num as f64 * 2f64.powi(-(self.expo as i32))
    }
}

impl Add for Dyadic {
    type Output = Dyadic;
    fn add(self, rhs: Dyadic) -> Dyadic {
        let expo = self.expo.max(rhs.expo);
        let a = self.num << (expo - self.expo);
        let b = rhs.num << (expo - rhs.expo);
        Dyadic::new(a + b, expo)
    }
}

impl Sub for Dyadic {
    type Output = Dyadic;
    fn sub(self, rhs: Dyadic) -> Dyadic {
        self + (-rhs)
    }
}

impl Neg for Dyadic {
    type Output = Dyadic;
    fn neg(self) -> Dyadic {
        Dyadic {
            num: -self.num,
            expo: self.expo,
        }
    }
}

impl Mul for Dyadic {
    type Output = Dyadic;
    fn mul(self, rhs: Dyadic) -> Dyadic {
        Dyadic::new(self.num * rhs.num, self.expo + rhs.expo)
    }
}

/// Division by a power of two only; panics otherwise.
impl Div<i128> for Dyadic {
    type Output = Dyadic;
    fn div(self, rhs: i128) -> Dyadic {
        assert!(rhs > 0 && rhs.count_ones() == 1, "dyadic division must be by a power of two");
        Dyadic::new(self.num, self.expo + rhs.trailing_zeros())
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        (*self - *other).num.cmp(&0)
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.expo == 0 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, 1u128 << self.expo)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalization() {
        let d = Dyadic::new(4, 4);
        assert_eq!(d.num(), 1);
        assert_eq!(d.expo(), 2);
        assert_eq!(Dyadic::new(0, 7), Dyadic::ZERO);
        // integer numerators keep excess factors of two
        assert_eq!(Dyadic::new(6, 1).num(), 3);
        assert_eq!(Dyadic::new(6, 0).num(), 6);
    }

    #[test]
    fn arithmetic_is_exact() {
        let a = Dyadic::new(1, 2); // 1/4
        let b = Dyadic::new(1, 4); // 1/16
        assert_eq!(a + b, Dyadic::new(5, 4));
        assert_eq!(a - b, Dyadic::new(3, 4));
        assert_eq!(a * b, Dyadic::new(1, 6));
        assert_eq!((a + b).to_f64(), 5.0 / 16.0);
    }

    #[test]
    fn ordering() {
        assert!(Dyadic::new(1, 2) < Dyadic::new(3, 3));
        assert!(Dyadic::new(-1, 1) < Dyadic::ZERO);
        assert_eq!(Dyadic::new(2, 1), Dyadic::ONE);
    }

    #[test]
    fn display_reduced_fraction() {
        assert_eq!(Dyadic::new(5, 4).to_string(), "5/16");
        assert_eq!(Dyadic::new(4, 4).to_string(), "1/4");
        assert_eq!(Dyadic::ZERO.to_string(), "0");
        assert_eq!(Dyadic::from_int(-3).to_string(), "-3");
    }
}
