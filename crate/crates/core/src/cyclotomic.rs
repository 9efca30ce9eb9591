//! Arithmetic in `Z/p^m[ε_n]`, the ring of integers of `Q_p(ε_n)` modulo `p^m`.
//!
//! Elements are dense coefficient vectors in the basis `1, ε, …, ε^{φ-1}` with
//! `φ = p^{n-1}(p-1)`; reduction uses `Φ_{p^n}(X) = Φ_p(X^{p^{n-1}})`.

use crate::error::{Error, Result};
use crate::padic::{Modulus, PadicInt};
use serde::{Deserialize, Serialize};

pub fn degree(p: u64, level: u32) -> usize {
    if level == 0 {
        1
    } else {
        (p.pow(level - 1) * (p - 1)) as usize
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CyclotomicElem {
    md: Modulus,
    level: u32,
    coeffs: Vec<u64>,
}

fn reduce_poly(md: &Modulus, p: u64, level: u32, poly: &[u64]) -> Vec<u64> {
    if level == 0 {
        let s = poly.iter().fold(0, |acc, &c| md.add(acc, md.reduce(c)));
        return vec![s];
    }
    let order = p.pow(level) as usize;
    let block = p.pow(level - 1) as usize;
    let phi = order - block;
    let mut folded = vec![0u64; order];
    for (e, &c) in poly.iter().enumerate() {
        let slot = &mut folded[e % order];
        *slot = md.add(*slot, md.reduce(c));
    }
    for r in 0..block {
        let c = folded[phi + r];
        if c == 0 {
            continue;
        }
        for j in 0..(p as usize - 1) {
            let slot = &mut folded[j * block + r];
            *slot = md.sub(*slot, c);
        }
    }
    folded.truncate(phi);
    folded
}

impl CyclotomicElem {
    /// Reduces an arbitrary polynomial in `ε_n`.
    pub fn from_poly(md: Modulus, level: u32, poly: &[u64]) -> Self {
        let coeffs = reduce_poly(&md, md.p(), level, poly);
        CyclotomicElem { md, level, coeffs }
    }

    pub fn zero(md: Modulus, level: u32) -> Self {
        CyclotomicElem { md, level, coeffs: vec![0; degree(md.p(), level)] }
    }

    pub fn scalar(md: Modulus, level: u32, c: u64) -> Self {
        let mut z = Self::zero(md, level);
        z.coeffs[0] = md.reduce(c);
        z
    }

    pub fn one(md: Modulus, level: u32) -> Self {
        Self::scalar(md, level, 1)
    }

    /// `ε_n^e`.
    pub fn root_power(md: Modulus, level: u32, e: u64) -> Self {
        if level == 0 {
            return Self::one(md, 0);
        }
        let order = md.p().pow(level);
        let mut poly = vec![0u64; order as usize];
        poly[(e % order) as usize] = 1;
        Self::from_poly(md, level, &poly)
    }

    pub fn epsilon(md: Modulus, level: u32) -> Self {
        Self::root_power(md, level, 1)
    }

    pub fn level(&self) -> u32 {
        self.level
    }
    pub fn modulus(&self) -> Modulus {
        self.md
    }
    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }
    pub fn coeff(&self, i: usize) -> PadicInt {
        PadicInt::from_residue(&self.md, self.coeffs[i])
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.md != other.md || self.level != other.level {
            return Err(Error::MixedContext(format!(
                "cyclotomic level {} mod {}^{} vs level {} mod {}^{}",
                self.level,
                self.md.p(),
                self.md.precision(),
                other.level,
                other.md.p(),
                other.md.precision()
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(&a, &b)| self.md.add(a, b)).collect();
        Ok(CyclotomicElem { coeffs, ..self.clone() })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(&a, &b)| self.md.sub(a, b)).collect();
        Ok(CyclotomicElem { coeffs, ..self.clone() })
    }

    pub fn neg(&self) -> Self {
        let coeffs = self.coeffs.iter().map(|&a| self.md.neg(a)).collect();
        CyclotomicElem { coeffs, ..self.clone() }
    }

    pub fn scale(&self, c: u64) -> Self {
        let coeffs = self.coeffs.iter().map(|&a| self.md.mul(a, c)).collect();
        CyclotomicElem { coeffs, ..self.clone() }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let n = self.coeffs.len();
        let mut prod = vec![0u64; 2 * n - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                prod[i + j] = self.md.add(prod[i + j], self.md.mul(a, b));
            }
        }
        Ok(Self::from_poly(self.md, self.level, &prod))
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(self.md, self.level);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).unwrap();
            }
            base = base.mul(&base).unwrap();
            e >>= 1;
        }
        acc
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    /// Units are exactly the elements with nonzero image under `ε ↦ 1` in `F_p`.
    pub fn is_unit(&self) -> bool {
        let s = self.coeffs.iter().fold(0u64, |acc, &c| (acc + c % self.md.p()) % self.md.p());
        s != 0
    }

    /// Largest `k` with the element in `p^k O_n`, capped at the precision.
    pub fn valuation(&self) -> u32 {
        self.coeffs.iter().map(|&c| self.md.val(c)).min().unwrap_or(self.md.precision())
    }

    pub fn with_precision(&self, m: u32) -> Result<Self> {
        let md = self.md.with_precision(m)?;
        Ok(CyclotomicElem { md, level: self.level, coeffs: self.coeffs.iter().map(|&c| md.reduce(c)).collect() })
    }

    /// `σ_k : ε ↦ ε^k` for `k` prime to `p`.
    pub fn galois(&self, k: u64) -> Self {
        if self.level == 0 {
            return self.clone();
        }
        let order = self.md.p().pow(self.level);
        let mut poly = vec![0u64; order as usize];
        for (i, &c) in self.coeffs.iter().enumerate() {
            let e = ((i as u128 * k as u128) % order as u128) as usize;
            poly[e] = self.md.add(poly[e], c);
        }
        Self::from_poly(self.md, self.level, &poly)
    }

    /// Exponents `k` of the automorphisms fixing the level-`target` subfield.
    pub fn conjugate_exponents(p: u64, level: u32, target: u32) -> Vec<u64> {
        if target == level {
            return vec![1];
        }
        let order = p.pow(level);
        let step = p.pow(target);
        (0..order).filter(|&k| k % p != 0 && k % step == 1 % step).collect()
    }

    /// Includes this element into the level-`level` ring via `ε_k = ε_level^{p^{level-k}}`.
    pub fn embed(&self, level: u32) -> Self {
        assert!(level >= self.level);
        if level == self.level {
            return self.clone();
        }
        let p = self.md.p();
        let stride = p.pow(level - self.level) as usize;
        let mut poly = vec![0u64; p.pow(level) as usize];
        for (i, &c) in self.coeffs.iter().enumerate() {
            poly[i * stride] = c;
        }
        Self::from_poly(self.md, level, &poly)
    }

    /// Reads this element as a member of the level-`target` subring; `None` if it is not one.
    pub fn restrict(&self, target: u32) -> Option<Self> {
        assert!(target <= self.level);
        if target == self.level {
            return Some(self.clone());
        }
        let stride = self.md.p().pow(self.level - target) as usize;
        let mut coeffs = vec![0u64; degree(self.md.p(), target)];
        for (i, &c) in self.coeffs.iter().enumerate() {
            if i % stride == 0 {
                coeffs[i / stride] = c;
            } else if c != 0 {
                return None;
            }
        }
        Some(CyclotomicElem { md: self.md, level: target, coeffs })
    }

    pub fn trace_to(&self, target: u32) -> Self {
        let mut acc = Self::zero(self.md, self.level);
        for k in Self::conjugate_exponents(self.md.p(), self.level, target) {
            acc = acc.add(&self.galois(k)).unwrap();
        }
        acc.restrict(target).expect("trace lies in the fixed field")
    }

    pub fn norm_to(&self, target: u32) -> Self {
        let mut acc = Self::one(self.md, self.level);
        for k in Self::conjugate_exponents(self.md.p(), self.level, target) {
            acc = acc.mul(&self.galois(k)).unwrap();
        }
        acc.restrict(target).expect("norm lies in the fixed field")
    }

    pub fn inv(&self) -> Result<Self> {
        if !self.is_unit() {
            return Err(Error::NotUnit);
        }
        let mut others = Self::one(self.md, self.level);
        for k in Self::conjugate_exponents(self.md.p(), self.level, 0) {
            if k != 1 {
                others = others.mul(&self.galois(k))?;
            }
        }
        let norm = self.mul(&others)?.restrict(0).expect("norm is rational");
        let ninv = self.md.inv(norm.coeffs[0]).ok_or(Error::NotUnit)?;
        Ok(others.scale(ninv))
    }

    /// `log(1 + z)` for `z` in `p O_n`.
    pub fn log_one_unit(&self) -> Result<Self> {
        let one = Self::one(self.md, self.level);
        let z = self.sub(&one)?;
        if z.valuation() < 1 {
            return Err(Error::NotOneUnit);
        }
        let md = self.md;
        let p = md.p();
        let m = md.precision() as u64;
        let w = CyclotomicElem { md, level: self.level, coeffs: z.coeffs.iter().map(|&c| c / p).collect() };
        let mut sum = Self::zero(md, self.level);
        let mut wpow = one;
        let mut k = 1u64;
        while k - (crate::padic::floor_log(k, p) as u64) < m {
            wpow = wpow.mul(&w)?;
            let vk = crate::padic::valuation(k, p);
            let factor = md.mul(md.p_pow((k - vk as u64) as u32), md.inv(k / p.pow(vk)).unwrap());
            let term = wpow.scale(factor);
            sum = if k % 2 == 1 { sum.add(&term)? } else { sum.sub(&term)? };
            k += 1;
        }
        Ok(sum)
    }

    /// Divides every coefficient by `p`; precision drops by one.
    pub fn div_p(&self) -> Result<Self> {
        if self.coeffs.iter().any(|&c| c % self.md.p() != 0) {
            return Err(Error::NotDivisible);
        }
        let md = self.md.with_precision(self.md.precision() - 1)?;
        Ok(CyclotomicElem { md, level: self.level, coeffs: self.coeffs.iter().map(|&c| c / self.md.p()).collect() })
    }
}
