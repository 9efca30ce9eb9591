//! Residues modulo `p^m` with the precision carried alongside the value.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::fmt;

pub fn is_odd_prime(p: u64) -> bool {
    if p < 3 || p % 2 == 0 {
        return false;
    }
    let mut d = 3;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// p-adic valuation of a nonzero integer.
pub fn valuation(mut x: u64, p: u64) -> u32 {
    debug_assert!(x != 0);
    let mut v = 0;
    while x % p == 0 {
        x /= p;
        v += 1;
    }
    v
}

/// `floor(log_p(k))` for `k >= 1`.
pub fn floor_log(k: u64, p: u64) -> u32 {
    let mut v = 0;
    let mut t = p;
    while t <= k {
        v += 1;
        t = match t.checked_mul(p) {
            Some(t) => t,
            None => break,
        };
    }
    v
}

/// The ring `Z/p^m`. Residues are plain `u64` in `[0, p^m)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Modulus {
    p: u64,
    m: u32,
    pm: u64,
}

impl Modulus {
    pub fn new(p: u64, m: u32) -> Result<Self> {
        if !is_odd_prime(p) {
            return Err(Error::BadPrime(p));
        }
        let mut pm: u64 = 1;
        for _ in 0..m {
            pm = pm
                .checked_mul(p)
                .filter(|&x| x < (1 << 62))
                .ok_or(Error::PrecisionTooLarge { p, m })?;
        }
        Ok(Modulus { p, m, pm })
    }

    pub fn p(&self) -> u64 {
        self.p
    }
    pub fn precision(&self) -> u32 {
        self.m
    }
    pub fn modulus(&self) -> u64 {
        self.pm
    }

    pub fn with_precision(&self, m: u32) -> Result<Self> {
        Modulus::new(self.p, m)
    }

    pub fn reduce(&self, x: u64) -> u64 {
        x % self.pm
    }
    pub fn from_i64(&self, x: i64) -> u64 {
        x.rem_euclid(self.pm as i64) as u64
    }
    /// Signed representative in `(-p^m/2, p^m/2]`.
    pub fn signed(&self, x: u64) -> i64 {
        if x > self.pm / 2 {
            x as i64 - self.pm as i64
        } else {
            x as i64
        }
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.pm {
            s - self.pm
        } else {
            s
        }
    }
    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.pm - b
        }
    }
    #[inline]
    pub fn neg(&self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.pm - a
        }
    }
    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.pm as u128) as u64
    }

    pub fn pow(&self, a: u64, mut e: u64) -> u64 {
        let mut base = a % self.pm;
        let mut acc = 1 % self.pm;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn is_unit(&self, a: u64) -> bool {
        a % self.p != 0
    }

    pub fn inv(&self, a: u64) -> Option<u64> {
        if !self.is_unit(a) {
            return None;
        }
        let (mut r0, mut r1) = (self.pm as i128, (a % self.pm) as i128);
        let (mut s0, mut s1) = (0i128, 1i128);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (s0, s1) = (s1, s0 - q * s1);
        }
        Some(s0.rem_euclid(self.pm as i128) as u64)
    }

    /// Valuation of a residue, `m` for zero.
    pub fn val(&self, a: u64) -> u32 {
        if a == 0 {
            self.m
        } else {
            valuation(a, self.p).min(self.m)
        }
    }

    /// `p^k` as a residue (zero once `k >= m`).
    pub fn p_pow(&self, k: u32) -> u64 {
        if k >= self.m {
            0
        } else {
            self.p.pow(k)
        }
    }

    /// `exp(p a)` for a residue `a`.
    pub fn exp_p(&self, a: u64) -> u64 {
        let (p, m) = (self.p, self.m as u64);
        let mut sum = 1 % self.pm;
        let mut apow = 1 % self.pm;
        let mut fact_unit = 1u64;
        let mut fact_val = 0u64;
        let mut k = 1u64;
        // k - v(k!) >= (k(p-2)+1)/(p-1); once that reaches m every later term vanishes
        while k * (p - 2) + 1 < m * (p - 1) {
            apow = self.mul(apow, a);
            let vk = valuation(k, p) as u64;
            fact_val += vk;
            fact_unit = self.mul(fact_unit, k / p.pow(vk as u32));
            let shift = k - fact_val;
            if shift < m {
                let t = self.mul(apow, self.p_pow(shift as u32));
                sum = self.add(sum, self.mul(t, self.inv(fact_unit).unwrap()));
            }
            k += 1;
        }
        sum
    }

    /// `log(u)` for `u = 1 mod p`.
    pub fn log_1p(&self, u: u64) -> Result<u64> {
        if u % self.p != 1 % self.p {
            return Err(Error::NotOneUnit);
        }
        let (p, m) = (self.p, self.m as u64);
        let t = (self.sub(u, 1)) / p;
        let mut sum = 0;
        let mut tpow = 1 % self.pm;
        let mut k = 1u64;
        while k - (floor_log(k, p) as u64) < m {
            tpow = self.mul(tpow, t);
            let vk = valuation(k, p) as u64;
            let shift = k - vk;
            if shift < m {
                let unit = k / p.pow(vk as u32);
                let term = self.mul(self.mul(tpow, self.p_pow(shift as u32)), self.inv(unit).unwrap());
                sum = if k % 2 == 1 { self.add(sum, term) } else { self.sub(sum, term) };
            }
            k += 1;
        }
        Ok(sum)
    }

    pub fn teichmuller(&self, a: u64) -> Result<u64> {
        if !self.is_unit(a) {
            return Err(Error::NotUnit);
        }
        let mut x = a % self.pm;
        loop {
            let y = self.pow(x, self.p);
            if y == x {
                return Ok(x);
            }
            x = y;
        }
    }

    /// `log` on all units: the Teichmüller factor is discarded.
    pub fn log_unit(&self, u: u64) -> Result<u64> {
        let w = self.teichmuller(u)?;
        self.log_1p(self.mul(u, self.inv(w).unwrap()))
    }
}

/// An element of `Z/p^m` that remembers `p` and `m`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PadicInt {
    prime: u64,
    precision: u32,
    value: u64,
}

impl fmt::Debug for PadicInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {}^{})", self.value, self.prime, self.precision)
    }
}

impl fmt::Display for PadicInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

impl PadicInt {
    pub fn new(prime: u64, precision: u32, value: i64) -> Result<Self> {
        let md = Modulus::new(prime, precision)?;
        Ok(PadicInt { prime, precision, value: md.from_i64(value) })
    }

    pub fn from_residue(md: &Modulus, value: u64) -> Self {
        PadicInt { prime: md.p(), precision: md.precision(), value: md.reduce(value) }
    }

    pub fn modulus(&self) -> Modulus {
        Modulus::new(self.prime, self.precision).expect("validated at construction")
    }
    pub fn prime(&self) -> u64 {
        self.prime
    }
    pub fn precision(&self) -> u32 {
        self.precision
    }
    pub fn value(&self) -> u64 {
        self.value
    }

    /// Drop to a lower precision; never raises it.
    pub fn truncate(&self, precision: u32) -> Self {
        let precision = precision.min(self.precision);
        let md = Modulus::new(self.prime, precision).unwrap();
        PadicInt::from_residue(&md, self.value)
    }

    fn common(&self, other: &Self) -> Result<Modulus> {
        if self.prime != other.prime {
            return Err(Error::MixedContext(format!("primes {} and {}", self.prime, other.prime)));
        }
        Modulus::new(self.prime, self.precision.min(other.precision))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        let md = self.common(other)?;
        Ok(PadicInt::from_residue(&md, md.add(md.reduce(self.value), md.reduce(other.value))))
    }
    pub fn sub(&self, other: &Self) -> Result<Self> {
        let md = self.common(other)?;
        Ok(PadicInt::from_residue(&md, md.sub(md.reduce(self.value), md.reduce(other.value))))
    }
    pub fn mul(&self, other: &Self) -> Result<Self> {
        let md = self.common(other)?;
        Ok(PadicInt::from_residue(&md, md.mul(self.value, other.value)))
    }
    pub fn neg(&self) -> Self {
        let md = self.modulus();
        PadicInt::from_residue(&md, md.neg(self.value))
    }
    pub fn pow(&self, e: u64) -> Self {
        let md = self.modulus();
        PadicInt::from_residue(&md, md.pow(self.value, e))
    }
    pub fn inv(&self) -> Result<Self> {
        let md = self.modulus();
        md.inv(self.value).map(|v| PadicInt::from_residue(&md, v)).ok_or(Error::NotUnit)
    }
    pub fn is_unit(&self) -> bool {
        self.value % self.prime != 0
    }
    pub fn is_zero(&self) -> bool {
        self.value == 0
    }

    /// Valuation, capped at the precision.
    pub fn valuation(&self) -> u32 {
        self.modulus().val(self.value)
    }

    /// Exact division by `p`; the result is known to one digit less.
    pub fn div_p(&self) -> Result<Self> {
        if self.value % self.prime != 0 || self.precision == 0 {
            return Err(Error::NotDivisible);
        }
        let md = Modulus::new(self.prime, self.precision - 1)?;
        Ok(PadicInt::from_residue(&md, self.value / self.prime))
    }

    /// `exp(p * self)`.
    pub fn exp_p(&self) -> Self {
        let md = self.modulus();
        PadicInt::from_residue(&md, md.exp_p(self.value))
    }

    pub fn log_1p(&self) -> Result<Self> {
        let md = self.modulus();
        Ok(PadicInt::from_residue(&md, md.log_1p(self.value)?))
    }

    pub fn teichmuller(&self) -> Result<Self> {
        let md = self.modulus();
        Ok(PadicInt::from_residue(&md, md.teichmuller(self.value)?))
    }

    pub fn log_unit(&self) -> Result<Self> {
        let md = self.modulus();
        Ok(PadicInt::from_residue(&md, md.log_unit(self.value)?))
    }
}

/// `value / p^denominator_exponent`, used for intermediate quantities with a `1/p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PadicRational {
    pub numerator: PadicInt,
    pub denominator_exponent: u32,
}

impl PadicRational {
    pub fn integral(x: PadicInt) -> Self {
        PadicRational { numerator: x, denominator_exponent: 0 }
    }

    pub fn over_p_pow(x: PadicInt, k: u32) -> Self {
        PadicRational { numerator: x, denominator_exponent: k }
    }

    /// Clears the denominator; the precision drops by the denominator exponent.
    pub fn into_integral(self) -> Result<PadicInt> {
        let mut x = self.numerator;
        for _ in 0..self.denominator_exponent {
            x = x.div_p().map_err(|_| {
                Error::IntegralityFailure(format!(
                    "{:?} is not divisible by p^{}",
                    self.numerator, self.denominator_exponent
                ))
            })?;
        }
        Ok(x)
    }
}
