//! Arithmetic in the prime field F_p.

use std::fmt;

use crate::error::{Error, Result};

/// Default working prime, large enough for random genericity searches.
pub const DEFAULT_PRIME: u32 = 32003;

/// The prime field F_p for an odd prime p. Elements are plain `u32`
/// residues in `[0, p)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PrimeField {
    p: u32,
}

impl PrimeField {
    /// Characteristic 2 is rejected: several sign conventions
    /// (alternating assembly signs, `l' = x - y` splittings) collapse there.
    pub fn new(p: u32) -> Result<Self> {
        if p == 2 {
            return Err(Error::InvalidPrime(
                p,
                "characteristic 2 is not supported (sign-sensitive constructions require -1 != 1)",
            ));
        }
        if !is_prime(p) {
            return Err(Error::InvalidPrime(p, "modulus is not prime"));
        }
        if p > (1 << 31) {
            return Err(Error::InvalidPrime(p, "modulus must be below 2^31"));
        }
        Ok(Self { p })
    }

    pub fn default_field() -> Self {
        Self { p: DEFAULT_PRIME }
    }

    #[inline]
    pub fn p(self) -> u32 {
        self.p
    }

    #[inline]
    pub fn add(self, a: u32, b: u32) -> u32 {
        let s = a as u64 + b as u64;
        (s % self.p as u64) as u32
    }

    #[inline]
    pub fn sub(self, a: u32, b: u32) -> u32 {
        if a >= b {
            a - b
        } else {
            self.p - (b - a)
        }
    }

    #[inline]
    pub fn neg(self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    #[inline]
    pub fn mul(self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.p as u64) as u32
    }

    /// `a + b * c`
    #[inline]
    pub fn mul_add(self, a: u32, b: u32, c: u32) -> u32 {
        ((a as u64 + b as u64 * c as u64) % self.p as u64) as u32
    }

    pub fn pow(self, mut base: u32, mut exp: u64) -> u32 {
        let mut acc = 1u32;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(self, a: u32) -> Option<u32> {
        if a.is_multiple_of(self.p) {
            return None;
        }
        // extended Euclid on signed integers
        let (mut r0, mut r1) = (self.p as i64, a as i64);
        let (mut t0, mut t1) = (0i64, 1i64);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (t0, t1) = (t1, t0 - q * t1);
        }
        Some(t0.rem_euclid(self.p as i64) as u32)
    }

    /// Reduce a signed integer into `[0, p)`.
    #[inline]
    pub fn from_i64(self, v: i64) -> u32 {
        v.rem_euclid(self.p as i64) as u32
    }

    /// Symmetric representative in `(-p/2, p/2]`, used for printing.
    pub fn to_signed(self, a: u32) -> i64 {
        let a = a as i64;
        let p = self.p as i64;
        if a > p / 2 {
            a - p
        } else {
            a
        }
    }
}

impl Default for PrimeField {
    fn default() -> Self {
        Self::default_field()
    }
}

impl fmt::Display for PrimeField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}", self.p)
    }
}

pub fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let n = n as u64;
    let mut d = 3u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_two_and_composites() {
        assert!(matches!(PrimeField::new(2), Err(Error::InvalidPrime(2, _))));
        assert!(PrimeField::new(9).is_err());
        assert!(PrimeField::new(1).is_err());
        assert!(PrimeField::new(3).is_ok());
        assert!(PrimeField::new(32003).is_ok());
    }

    #[test]
    fn inverse_round_trip() {
        for p in [3u32, 5, 7, 101, 32003] {
            let k = PrimeField::new(p).unwrap();
            for a in 1..p.min(500) {
                let b = k.inv(a).unwrap();
                assert_eq!(k.mul(a, b), 1, "p={p} a={a}");
            }
            assert_eq!(k.inv(0), None);
        }
    }

    #[test]
    fn signed_reduction() {
        let k = PrimeField::new(5).unwrap();
        assert_eq!(k.from_i64(-1), 4);
        assert_eq!(k.from_i64(-7), 3);
        assert_eq!(k.to_signed(4), -1);
        assert_eq!(k.to_signed(2), 2);
        assert_eq!(k.sub(1, 3), 3);
        assert_eq!(k.neg(0), 0);
    }
}
