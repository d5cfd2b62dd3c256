//! Prime fields with a distinguished square root of -1.
//!
//! When `p ≡ 1 (mod 4)` the square root already lives in `F_p` and every
//! element is stored with a zero imaginary part. When `p ≡ 3 (mod 4)` the
//! field is `F_p[t]/(t^2 + 1)` and `t` plays the role of `i`.

use core::fmt;

use crate::error::{Error, Result};

/// An element `re + im·t` of the ground field. In prime mode `im` is always 0.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Fe {
    pub re: u32,
    pub im: u32,
}

impl Fe {
    pub const ZERO: Fe = Fe { re: 0, im: 0 };
    pub const ONE: Fe = Fe { re: 1, im: 0 };

    #[inline]
    pub const fn new(re: u32) -> Self {
        Fe { re, im: 0 }
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.re == 0 && self.im == 0
    }
}

impl fmt::Display for Fe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im == 0 {
            write!(f, "{}", self.re)
        } else {
            write!(f, "{}+{}*i", self.re, self.im)
        }
    }
}

/// The scalar ground ring of every computation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FieldSpec {
    p: u32,
    i: Option<u32>,
    ext_mode: bool,
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1u64;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

/// Builds the field for an odd prime `p`.
pub fn make_field(p: u64) -> Result<FieldSpec> {
    if p >= 1 << 31 {
        return Err(Error::ModulusTooLarge(p));
    }
    if p == 2 || !is_prime(p) {
        return Err(Error::NotOddPrime(p));
    }
    if p % 4 == 3 {
        return Ok(FieldSpec { p: p as u32, i: None, ext_mode: true });
    }
    // g^((p-1)/4) is a square root of -1 for any non-residue g.
    let mut g = 2u64;
    while pow_mod(g, (p - 1) / 2, p) != p - 1 {
        g += 1;
    }
    let r = pow_mod(g, (p - 1) / 4, p);
    let i = r.min(p - r) as u32;
    Ok(FieldSpec { p: p as u32, i: Some(i), ext_mode: false })
}

impl FieldSpec {
    #[inline]
    pub fn prime(&self) -> u32 {
        self.p
    }

    /// `Some(i)` with `i^2 = -1` in `F_p`, or `None` in extension mode.
    pub fn prime_sqrt_neg_one(&self) -> Option<u32> {
        self.i
    }

    pub fn ext_mode(&self) -> bool {
        self.ext_mode
    }

    /// The designated square root of -1 as a field element.
    pub fn sqrt_neg_one(&self) -> Fe {
        match self.i {
            Some(i) => Fe::new(i),
            None => Fe { re: 0, im: 1 },
        }
    }

    #[inline]
    pub fn zero(&self) -> Fe {
        Fe::ZERO
    }

    #[inline]
    pub fn one(&self) -> Fe {
        Fe::new(1)
    }

    #[inline]
    pub fn from_u64(&self, v: u64) -> Fe {
        Fe::new((v % self.p as u64) as u32)
    }

    #[inline]
    pub fn from_i64(&self, v: i64) -> Fe {
        Fe::new(v.rem_euclid(self.p as i64) as u32)
    }

    #[inline]
    fn addp(&self, a: u32, b: u32) -> u32 {
        let s = a as u64 + b as u64;
        let p = self.p as u64;
        (if s >= p { s - p } else { s }) as u32
    }

    #[inline]
    fn subp(&self, a: u32, b: u32) -> u32 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    #[inline]
    fn mulp(&self, a: u32, b: u32) -> u32 {
        (a as u64 * b as u64 % self.p as u64) as u32
    }

    #[inline]
    pub fn add(&self, a: Fe, b: Fe) -> Fe {
        Fe { re: self.addp(a.re, b.re), im: self.addp(a.im, b.im) }
    }

    #[inline]
    pub fn sub(&self, a: Fe, b: Fe) -> Fe {
        Fe { re: self.subp(a.re, b.re), im: self.subp(a.im, b.im) }
    }

    #[inline]
    pub fn neg(&self, a: Fe) -> Fe {
        self.sub(Fe::ZERO, a)
    }

    #[inline]
    pub fn mul(&self, a: Fe, b: Fe) -> Fe {
        if a.im == 0 && b.im == 0 {
            return Fe::new(self.mulp(a.re, b.re));
        }
        // (a + b t)(c + d t) with t^2 = -1
        let re = self.subp(self.mulp(a.re, b.re), self.mulp(a.im, b.im));
        let im = self.addp(self.mulp(a.re, b.im), self.mulp(a.im, b.re));
        Fe { re, im }
    }

    pub fn pow(&self, a: Fe, mut e: u64) -> Fe {
        let mut r = self.one();
        let mut b = a;
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(r, b);
            }
            b = self.mul(b, b);
            e >>= 1;
        }
        r
    }

    fn inv_prime(&self, a: u32) -> u32 {
        pow_mod(a as u64, self.p as u64 - 2, self.p as u64) as u32
    }

    /// Multiplicative inverse. Panics on zero.
    pub fn inv(&self, a: Fe) -> Fe {
        assert!(!a.is_zero(), "inverse of zero");
        if a.im == 0 {
            return Fe::new(self.inv_prime(a.re));
        }
        // 1/(a + b t) = (a - b t)/(a^2 + b^2)
        let norm = self.addp(self.mulp(a.re, a.re), self.mulp(a.im, a.im));
        let ninv = self.inv_prime(norm);
        Fe { re: self.mulp(a.re, ninv), im: self.mulp(self.subp(0, a.im), ninv) }
    }

    pub fn div(&self, a: Fe, b: Fe) -> Fe {
        self.mul(a, self.inv(b))
    }

    /// Signed representative in `(-p/2, p/2]` of a prime-mode element.
    pub fn signed(&self, a: Fe) -> i64 {
        let r = a.re as i64;
        if r > self.p as i64 / 2 {
            r - self.p as i64
        } else {
            r
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn p313_has_i_25() {
        let f = make_field(313).unwrap();
        assert_eq!(f.prime_sqrt_neg_one(), Some(25));
        assert_eq!((25 * 25 + 1) % 313, 0);
        assert!(!f.ext_mode());
    }

    #[test]
    fn p5_has_i_2() {
        let f = make_field(5).unwrap();
        assert_eq!(f.prime_sqrt_neg_one(), Some(2));
    }

    #[test]
    fn p331_is_extension() {
        assert_eq!(331 % 4, 3);
        let f = make_field(331).unwrap();
        assert!(f.ext_mode());
        let i = f.sqrt_neg_one();
        assert_eq!(f.add(f.mul(i, i), f.one()), Fe::ZERO);
    }

    #[test]
    fn rejects_two_and_composites() {
        assert_eq!(make_field(2), Err(Error::NotOddPrime(2)));
        assert_eq!(make_field(315), Err(Error::NotOddPrime(315)));
        assert_eq!(make_field(1), Err(Error::NotOddPrime(1)));
    }

    #[test]
    fn extension_inverse() {
        let f = make_field(331).unwrap();
        let a = Fe { re: 17, im: 200 };
        assert_eq!(f.mul(a, f.inv(a)), f.one());
    }
}
