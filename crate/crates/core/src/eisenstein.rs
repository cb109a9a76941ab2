//! Exact arithmetic in Z[w], w = e^(2 pi i / 3), in the basis {1, w}.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The Eisenstein integer `a + b w`.
///
/// Operator impls panic on overflow; the `checked_*` methods report it.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Eisenstein {
    pub a: i64,
    pub b: i64,
}

impl Eisenstein {
    pub const ZERO: Eisenstein = Eisenstein { a: 0, b: 0 };
    pub const ONE: Eisenstein = Eisenstein { a: 1, b: 0 };
    pub const OMEGA: Eisenstein = Eisenstein { a: 0, b: 1 };

    pub const fn new(a: i64, b: i64) -> Self {
        Eisenstein { a, b }
    }

    pub const fn from_int(a: i64) -> Self {
        Eisenstein { a, b: 0 }
    }

    /// `w^k` for any integer `k`.
    pub const fn omega_pow(k: i64) -> Self {
        match k.rem_euclid(3) {
            0 => Eisenstein::new(1, 0),
            1 => Eisenstein::new(0, 1),
            _ => Eisenstein::new(-1, -1),
        }
    }

    /// `c0 + c1 w + c2 w^2` for term counts of each cube root of unity.
    pub fn from_counts(counts: [i64; 3]) -> Self {
        Eisenstein::new(counts[0] - counts[2], counts[1] - counts[2])
    }

    pub fn checked_add(self, rhs: Self) -> Result<Self> {
        Ok(Eisenstein {
            a: self.a.checked_add(rhs.a).ok_or(Error::Overflow)?,
            b: self.b.checked_add(rhs.b).ok_or(Error::Overflow)?,
        })
    }

    pub fn checked_sub(self, rhs: Self) -> Result<Self> {
        Ok(Eisenstein {
            a: self.a.checked_sub(rhs.a).ok_or(Error::Overflow)?,
            b: self.b.checked_sub(rhs.b).ok_or(Error::Overflow)?,
        })
    }

    /// `(a + bw)(c + dw) = (ac - bd) + (ad + bc - bd) w` using `w^2 = -1 - w`.
    pub fn checked_mul(self, rhs: Self) -> Result<Self> {
        let (a, b, c, d) = (self.a as i128, self.b as i128, rhs.a as i128, rhs.b as i128);
        let bd = b * d;
        let re = a * c - bd;
        let im = a * d + b * c - bd;
        Ok(Eisenstein {
            a: i64::try_from(re).map_err(|_| Error::Overflow)?,
            b: i64::try_from(im).map_err(|_| Error::Overflow)?,
        })
    }

    /// Complex conjugate, the image under `w -> w^2`: `(a - b, -b)`.
    pub fn conj(self) -> Self {
        Eisenstein::new(self.a - self.b, -self.b)
    }

    /// Multiplication by `w`: `(a + bw) w = -b + (a - b) w`.
    #[inline]
    pub fn mul_omega(self) -> Self {
        Eisenstein::new(-self.b, self.a - self.b)
    }

    /// Multiplication by `w^k`.
    pub fn mul_omega_pow(self, k: i64) -> Self {
        match k.rem_euclid(3) {
            0 => self,
            1 => self.mul_omega(),
            _ => self.mul_omega().mul_omega(),
        }
    }

    /// `|x|^2 = a^2 - ab + b^2`.
    pub fn norm_sq(self) -> u128 {
        let (a, b) = (self.a as i128, self.b as i128);
        (a * a - a * b + b * b) as u128
    }

    /// Returns `k` when `self == q * w^k`.
    pub fn as_q_omega_power(self, q: i64) -> Option<u8> {
        (0..3u8).find(|&k| self == Eisenstein::omega_pow(k as i64).scale(q))
    }

    pub fn scale(self, s: i64) -> Self {
        Eisenstein::new(self.a * s, self.b * s)
    }

    /// Complex embedding with `w -> (-1/2, sqrt(3)/2)`.
    pub fn to_complex(self) -> (f64, f64) {
        let (a, b) = (self.a as f64, self.b as f64);
        (a - b / 2.0, b * 3f64.sqrt() / 2.0)
    }
}

impl Add for Eisenstein {
    type Output = Eisenstein;
    fn add(self, rhs: Self) -> Self {
        self.checked_add(rhs).expect("Eisenstein addition overflow")
    }
}

impl Sub for Eisenstein {
    type Output = Eisenstein;
    fn sub(self, rhs: Self) -> Self {
        self.checked_sub(rhs)
            .expect("Eisenstein subtraction overflow")
    }
}

impl Mul for Eisenstein {
    type Output = Eisenstein;
    fn mul(self, rhs: Self) -> Self {
        self.checked_mul(rhs)
            .expect("Eisenstein multiplication overflow")
    }
}

impl Neg for Eisenstein {
    type Output = Eisenstein;
    fn neg(self) -> Self {
        Eisenstein::new(-self.a, -self.b)
    }
}

impl std::iter::Sum for Eisenstein {
    fn sum<I: Iterator<Item = Eisenstein>>(iter: I) -> Self {
        iter.fold(Eisenstein::ZERO, |acc, x| acc + x)
    }
}

impl fmt::Display for Eisenstein {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.a, self.b) {
            (a, 0) => write!(f, "{a}"),
            (0, b) => write!(f, "{b}w"),
            (a, b) if b < 0 => write!(f, "{a} - {}w", -b),
            (a, b) => write!(f, "{a} + {b}w"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn e(a: i64, b: i64) -> Eisenstein {
        Eisenstein::new(a, b)
    }

    #[test]
    fn omega_powers() {
        assert_eq!(Eisenstein::omega_pow(0), e(1, 0));
        assert_eq!(Eisenstein::omega_pow(1), e(0, 1));
        assert_eq!(Eisenstein::omega_pow(2), e(-1, -1));
        assert_eq!(Eisenstein::omega_pow(-1), e(-1, -1));
    }

    #[test]
    fn ring_examples() {
        assert_eq!(e(0, 1) * e(0, 1), e(-1, -1));
        assert_eq!(e(1, 0) + e(0, 1), e(1, 1));
        assert_eq!(e(-1, -1) * e(0, 1), e(1, 0));
        assert_eq!(e(3, -2).mul_omega(), e(3, -2) * Eisenstein::OMEGA);
    }

    #[test]
    fn conj_examples() {
        assert_eq!(e(0, 1).conj(), e(-1, -1));
        assert_eq!(e(1, 0).conj(), e(1, 0));
        assert_eq!(e(2, 1).conj(), e(1, -1));
    }

    #[test]
    fn norm_examples() {
        assert_eq!(e(0, 0).norm_sq(), 0);
        assert_eq!(e(0, 1).norm_sq(), 1);
        assert_eq!(e(27, 0).norm_sq(), 729);
    }

    #[test]
    fn q_omega_membership() {
        assert_eq!(e(27, 0).as_q_omega_power(27), Some(0));
        assert_eq!(e(0, 27).as_q_omega_power(27), Some(1));
        assert_eq!(e(-27, -27).as_q_omega_power(27), Some(2));
        assert_eq!(e(26, 0).as_q_omega_power(27), None);
    }

    #[test]
    fn overflow_is_reported() {
        let big = e(i64::MAX, 0);
        assert_eq!(big.checked_add(e(1, 0)), Err(Error::Overflow));
        assert_eq!(big.checked_mul(e(2, 0)), Err(Error::Overflow));
        assert_eq!(e(i64::MIN, 0).checked_sub(e(1, 0)), Err(Error::Overflow));
    }

    #[test]
    fn embedding_matches_norm() {
        let x = e(5, -7);
        let (re, im) = x.to_complex();
        assert!(((re * re + im * im) - x.norm_sq() as f64).abs() < 1e-9);
    }

    /// Integers divisible by 3^n in Z[w] are zero or have norm >= 3^(2n).
    #[test]
    fn divisible_elements_have_large_norm() {
        for n in 1..=19u32 {
            let p = 3i64.pow(n);
            for (f0, f1) in [(1, 0), (0, 1), (1, 1), (-1, 2), (3, -5), (-1, -1)] {
                let x = e(f0 * p, f1 * p);
                assert!(x.norm_sq() >= (p as u128) * (p as u128));
            }
        }
    }

    fn small() -> impl Strategy<Value = Eisenstein> {
        (-1_000_000i64..1_000_000, -1_000_000i64..1_000_000).prop_map(|(a, b)| e(a, b))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(10_000))]

        #[test]
        fn norm_is_multiplicative(x in small(), y in small()) {
            prop_assert_eq!((x * y).norm_sq(), x.norm_sq() * y.norm_sq());
        }

        #[test]
        fn conj_is_ring_homomorphism(x in small(), y in small()) {
            prop_assert_eq!((x * y).conj(), x.conj() * y.conj());
            prop_assert_eq!((x + y).conj(), x.conj() + y.conj());
            prop_assert_eq!(x.conj().conj(), x);
        }

        #[test]
        fn norm_is_x_times_conj(x in small()) {
            let p = x * x.conj();
            prop_assert_eq!(p.b, 0);
            prop_assert_eq!(p.a as u128, x.norm_sq());
        }

        #[test]
        fn norm_gap_for_multiples(f0 in -1000i64..1000, f1 in -1000i64..1000, n in 1u32..=12) {
            prop_assume!((f0, f1) != (0, 0));
            let p = 3i64.pow(n);
            let x = e(f0 * p, f1 * p);
            prop_assert!(x.norm_sq() >= (p as u128).pow(2));
        }
    }
}
