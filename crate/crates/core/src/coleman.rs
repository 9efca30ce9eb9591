//! The one-variable model `Z/p^m[[T]] / (T^N)` for the group `Z_p`, with `1+T`
//! the topological generator: substitution, `Φ`, Coleman's norm operator,
//! the series-side `Γ`, and evaluation at `ε_n − 1`.

use crate::cyclotomic::CyclotomicElem;
use crate::error::{Error, Result};
use crate::padic::{floor_log, valuation, Modulus};
use serde::{Deserialize, Serialize};

/// Polynomial coefficients `a_0, …, a_{N−1}`, arithmetic modulo `T^N`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncSeries {
    md: Modulus,
    coeffs: Vec<u64>,
}

impl TruncSeries {
    pub fn from_coeffs(md: Modulus, degree: usize, coeffs: &[u64]) -> Self {
        let mut c = vec![0u64; degree];
        for (dst, &s) in c.iter_mut().zip(coeffs) {
            *dst = md.reduce(s);
        }
        TruncSeries { md, coeffs: c }
    }

    pub fn zero(md: Modulus, degree: usize) -> Self {
        TruncSeries { md, coeffs: vec![0; degree] }
    }

    pub fn constant(md: Modulus, degree: usize, c: u64) -> Self {
        Self::from_coeffs(md, degree, &[c])
    }

    pub fn one(md: Modulus, degree: usize) -> Self {
        Self::constant(md, degree, 1)
    }

    /// `1 + T`.
    pub fn generator(md: Modulus, degree: usize) -> Self {
        Self::from_coeffs(md, degree, &[1, 1])
    }

    /// `(1+T)^k`.
    pub fn generator_power(md: Modulus, degree: usize, k: u64) -> Self {
        Self::generator(md, degree).pow(k)
    }

    pub fn modulus(&self) -> Modulus {
        self.md
    }
    pub fn degree(&self) -> usize {
        self.coeffs.len()
    }
    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }
    pub fn coeff(&self, k: usize) -> u64 {
        self.coeffs.get(k).copied().unwrap_or(0)
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.md != other.md || self.degree() != other.degree() {
            return Err(Error::MixedContext(format!(
                "series mod (p^{}, T^{}) and (p^{}, T^{})",
                self.md.precision(),
                self.degree(),
                other.md.precision(),
                other.degree()
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(TruncSeries { md: self.md, coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(&a, &b)| self.md.add(a, b)).collect() })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(TruncSeries { md: self.md, coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(&a, &b)| self.md.sub(a, b)).collect() })
    }

    pub fn neg(&self) -> Self {
        TruncSeries { md: self.md, coeffs: self.coeffs.iter().map(|&a| self.md.neg(a)).collect() }
    }

    pub fn scale(&self, c: u64) -> Self {
        TruncSeries { md: self.md, coeffs: self.coeffs.iter().map(|&a| self.md.mul(a, c)).collect() }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(self.mul_unchecked(other))
    }

    fn mul_unchecked(&self, other: &Self) -> Self {
        let n = self.degree();
        let pm = self.md.modulus() as u128;
        let mut acc = vec![0u128; n];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs[..n - i].iter().enumerate() {
                acc[i + j] = (acc[i + j] + a as u128 * b as u128) % pm;
            }
        }
        TruncSeries { md: self.md, coeffs: acc.into_iter().map(|x| x as u64).collect() }
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(self.md, self.degree());
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_unchecked(&base);
            }
            base = base.mul_unchecked(&base);
            e >>= 1;
        }
        acc
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    pub fn is_unit(&self) -> bool {
        !self.coeffs.is_empty() && self.md.is_unit(self.coeffs[0])
    }

    pub fn inv(&self) -> Result<Self> {
        if !self.is_unit() {
            return Err(Error::NotUnit);
        }
        let md = self.md;
        let n = self.degree();
        let c0 = md.inv(self.coeffs[0]).unwrap();
        let mut g = vec![0u64; n];
        g[0] = c0;
        for k in 1..n {
            let mut s = 0;
            for i in 1..=k {
                s = md.add(s, md.mul(self.coeffs[i], g[k - i]));
            }
            g[k] = md.neg(md.mul(c0, s));
        }
        Ok(TruncSeries { md, coeffs: g })
    }

    /// Minimum coefficient valuation (the precision for zero).
    pub fn valuation(&self) -> u32 {
        self.coeffs.iter().map(|&c| self.md.val(c)).min().unwrap_or(self.md.precision())
    }

    pub fn with_precision(&self, m: u32) -> Result<Self> {
        let md = self.md.with_precision(m)?;
        Ok(TruncSeries { md, coeffs: self.coeffs.iter().map(|&c| md.reduce(c)).collect() })
    }

    /// Truncates or pads with zeros.
    pub fn with_degree(&self, degree: usize) -> Self {
        Self::from_coeffs(self.md, degree, &self.coeffs)
    }

    pub fn derivative(&self) -> Self {
        let n = self.degree();
        let mut c = vec![0u64; n];
        for k in 1..n {
            c[k - 1] = self.md.mul(self.coeffs[k], k as u64);
        }
        TruncSeries { md: self.md, coeffs: c }
    }

    /// `f ∘ g`; needs `g(0) = 0`.
    pub fn substitute(&self, g: &Self) -> Result<Self> {
        self.check(g)?;
        if g.coeffs.first().is_some_and(|&c| c != 0) {
            return Err(Error::BadSubstitution);
        }
        let mut r = Self::zero(self.md, self.degree());
        for &a in self.coeffs.iter().rev() {
            r = r.mul_unchecked(g);
            r.coeffs[0] = self.md.add(r.coeffs[0], a);
        }
        Ok(r)
    }

    /// `Φ(f) = f((1+T)^p − 1)`: in the variable `U = 1+T` this is `U^k ↦ U^{pk}`.
    pub fn phi(&self) -> Self {
        let md = self.md;
        let p = md.p() as usize;
        let n = self.degree();
        let b = expand_in_u(self);
        let mut out = vec![0u64; n];
        // Pascal rows of C(r, j), j < n, for r up to p(n − 1)
        let mut row = vec![0u64; n];
        if n > 0 {
            row[0] = 1;
        }
        for r in 0..=p * n.saturating_sub(1) {
            if r > 0 {
                for j in (1..n.min(r + 1)).rev() {
                    row[j] = md.add(row[j], row[j - 1]);
                }
            }
            if r % p == 0 && b[r / p] != 0 {
                let bk = b[r / p];
                for (o, &c) in out.iter_mut().zip(&row) {
                    *o = md.add(*o, md.mul(bk, c));
                }
            }
        }
        TruncSeries { md, coeffs: out }
    }

    /// `exp(p f)`.
    pub fn exp_p(&self) -> Self {
        let md = self.md;
        let (p, m) = (md.p(), md.precision() as u64);
        let mut sum = Self::one(md, self.degree());
        let mut fpow = sum.clone();
        let mut fact_unit = 1u64;
        let mut fact_val = 0u64;
        let mut k = 1u64;
        while k * (p - 2) + 1 < m * (p - 1) {
            fpow = fpow.mul_unchecked(self);
            let vk = valuation(k, p) as u64;
            fact_val += vk;
            fact_unit = md.mul(fact_unit, k / p.pow(vk as u32));
            let shift = k - fact_val;
            if shift < m {
                let c = md.mul(md.p_pow(shift as u32), md.inv(fact_unit).unwrap());
                sum = sum.add(&fpow.scale(c)).unwrap();
            }
            k += 1;
        }
        sum
    }

    /// `f(ε_n − 1)` in the level-`n` cyclotomic ring.
    pub fn evaluate_cyclotomic(&self, level: u32) -> Result<CyclotomicElem> {
        let md = self.md;
        let p = md.p();
        let needed = if level == 0 { 1 } else { md.precision() as usize * (p.pow(level - 1) * (p - 1)) as usize };
        if self.degree() < needed {
            return Err(Error::DegreeExhausted { needed, available: self.degree() });
        }
        let x = CyclotomicElem::epsilon(md, level).sub(&CyclotomicElem::one(md, level))?;
        let mut r = CyclotomicElem::zero(md, level);
        for &a in self.coeffs.iter().rev() {
            r = r.mul(&x)?.add(&CyclotomicElem::scalar(md, level, a))?;
        }
        Ok(r)
    }
}

/// Coefficients of `f` as a polynomial in `U = 1 + T`:
/// `b_k = Σ_{i ≥ k} a_i C(i, k) (−1)^{i−k}`.
fn expand_in_u(f: &TruncSeries) -> Vec<u64> {
    let md = f.md;
    let n = f.degree();
    let mut binom = vec![0u64; n];
    let mut b = vec![0u64; n];
    for i in 0..n {
        binom[i] = 1;
        for k in (1..i).rev() {
            binom[k] = md.add(binom[k], binom[k - 1]);
        }
        let a = f.coeffs[i];
        if a == 0 {
            continue;
        }
        for (k, &c) in binom[..=i].iter().enumerate() {
            let t = md.mul(a, c);
            b[k] = if (i - k) % 2 == 0 { md.add(b[k], t) } else { md.sub(b[k], t) };
        }
    }
    b
}

/// `(1+T)^p − 1`.
pub fn frobenius_variable(md: Modulus, degree: usize) -> TruncSeries {
    TruncSeries::generator_power(md, degree, md.p()).sub(&TruncSeries::one(md, degree)).unwrap()
}

/// Writes `f = Σ_{j<p} (1+T)^j G_j((1+T)^p − 1)`; returns the coefficient lists of the `G_j`.
pub fn frobenius_components(f: &TruncSeries) -> Vec<Vec<u64>> {
    let md = f.md;
    let p = md.p() as usize;
    let n = f.degree();
    let b = expand_in_u(f);
    // U^{j + p t} = U^j (1 + S)^t
    let sdeg = n.div_ceil(p).max(1);
    let mut comps = vec![vec![0u64; sdeg]; p];
    let mut row = vec![1u64];
    for t in 0..sdeg {
        if t > 0 {
            let mut next = vec![1u64; t + 1];
            for k in 1..t {
                next[k] = md.add(row[k - 1], row[k]);
            }
            row = next;
        }
        for (j, comp) in comps.iter_mut().enumerate() {
            let idx = j + p * t;
            if idx >= n || b[idx] == 0 {
                continue;
            }
            for (k, &c) in row.iter().enumerate() {
                comp[k] = md.add(comp[k], md.mul(b[idx], c));
            }
        }
    }
    comps
}

/// `ψ(f) = G_0`, the left inverse of `Φ`.
pub fn psi_series(f: &TruncSeries) -> TruncSeries {
    let comps = frobenius_components(f);
    TruncSeries::from_coeffs(f.md, f.degree(), &comps[0])
}

/// Coleman's norm: determinant of multiplication by `f` on the basis
/// `1, (1+T), …, (1+T)^{p−1}` over `Z/p^m[S]/(S^N)`, then `S ↦ (1+T)^p − 1`.
pub fn norm_series(f: &TruncSeries) -> Result<TruncSeries> {
    let md = f.md;
    let p = md.p() as usize;
    let n = f.degree();
    if n < p {
        return Err(Error::DegreeExhausted { needed: p, available: n });
    }
    if !f.is_unit() {
        return Err(Error::NotUnit);
    }
    let comps: Vec<TruncSeries> = frobenius_components(f).iter().map(|c| TruncSeries::from_coeffs(md, n, c)).collect();
    let one_plus_s = TruncSeries::generator(md, n);
    let mut a = vec![vec![TruncSeries::zero(md, n); p]; p];
    for (i, row) in a.iter_mut().enumerate() {
        for (j, g) in comps.iter().enumerate() {
            let l = (i + j) % p;
            let entry = if i + j >= p { g.mul_unchecked(&one_plus_s) } else { g.clone() };
            row[l] = row[l].add(&entry)?;
        }
    }
    let det = unit_pivot_determinant(a)?;
    det.substitute(&frobenius_variable(md, n))
}

/// Determinant over the local ring `Z/p^m[S]/(S^N)` by row operations that
/// leave it unchanged: the first unit entry in each column is added onto the
/// diagonal row, then the entries below it are cleared.
pub fn unit_pivot_determinant(mut a: Vec<Vec<TruncSeries>>) -> Result<TruncSeries> {
    let k = a.len();
    let md = a[0][0].md;
    let n = a[0][0].degree();
    let mut det = TruncSeries::one(md, n);
    for c in 0..k {
        let Some(pi) = (c..k).find(|&i| a[i][c].is_unit()) else {
            return Err(Error::NoUnitPivot(c));
        };
        if pi != c {
            let src = a[pi].clone();
            for (dst, s) in a[c].iter_mut().zip(&src) {
                *dst = dst.add(s)?;
            }
        }
        let pinv = a[c][c].inv()?;
        for r in c + 1..k {
            if a[r][c].is_zero() {
                continue;
            }
            let f = a[r][c].mul_unchecked(&pinv);
            let pivot_row = a[c].clone();
            for (dst, s) in a[r].iter_mut().zip(&pivot_row) {
                *dst = dst.sub(&f.mul_unchecked(s))?;
            }
        }
        det = det.mul_unchecked(&a[c][c]);
    }
    Ok(det)
}

/// `Γ(f) = log f − Φ(log f)/p` modulo `p^q`, with `q < m`.
///
/// `log f` is built as `log f(0) + ∫ f'/f`, with every coefficient scaled by
/// `p^K` so the integration stays integral; the final division is checked.
pub fn gamma_series_at(f: &TruncSeries, q: u32) -> Result<TruncSeries> {
    let md0 = f.md;
    let p = md0.p();
    if !f.is_unit() {
        return Err(Error::NotUnit);
    }
    let n = f.degree();
    let out = md0.with_precision(q)?;
    if q == 0 || n == 0 {
        return Ok(TruncSeries::zero(out, n));
    }
    let big_k = if n > 1 { floor_log(n as u64 - 1, p) } else { 0 };
    let md = md0.with_precision(q + big_k + 1)?;
    let lifted = f.with_precision(md.precision())?;
    let quotient = lifted.derivative().mul_unchecked(&lifted.inv()?);
    let mut scaled = vec![0u64; n];
    scaled[0] = md.mul(md.p_pow(big_k), md.log_unit(lifted.coeffs[0])?);
    for k in 1..n {
        let vk = valuation(k as u64, p);
        let unit = k as u64 / p.pow(vk);
        scaled[k] = md.mul(md.mul(quotient.coeffs[k - 1], md.p_pow(big_k - vk)), md.inv(unit).unwrap());
    }
    let scaled_log = TruncSeries { md, coeffs: scaled };
    let scaled_gamma = scaled_log.scale(p).sub(&scaled_log.phi())?;
    let div = p.pow(big_k + 1);
    let mut coeffs = Vec::with_capacity(n);
    for &c in &scaled_gamma.coeffs {
        if c % div != 0 {
            return Err(Error::IntegralityFailure(format!("series coefficient {c} not divisible by p^{}", big_k + 1)));
        }
        coeffs.push(c / div);
    }
    Ok(TruncSeries::from_coeffs(out, n, &coeffs))
}

pub fn gamma_series(f: &TruncSeries) -> Result<TruncSeries> {
    gamma_series_at(f, f.md.precision().saturating_sub(1))
}

/// `Φ̃(f) = exp(pΓ(f))^{-1} f^p`.
pub fn adams_tilde_series(f: &TruncSeries) -> Result<TruncSeries> {
    let g = gamma_series(f)?;
    let lifted = TruncSeries::from_coeffs(f.md, f.degree(), &g.coeffs);
    lifted.exp_p().inv()?.mul(&f.pow(f.md.p()))
}

/// `N(f) − Φ̃(f)` and its valuation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EigenResidual {
    pub holds: bool,
    pub residual_valuation: u32,
}

pub fn eigen_residual(f: &TruncSeries) -> Result<EigenResidual> {
    let diff = norm_series(f)?.sub(&adams_tilde_series(f)?)?;
    Ok(EigenResidual { holds: diff.is_zero(), residual_valuation: diff.valuation() })
}

pub fn eigen_test(f: &TruncSeries) -> Result<bool> {
    Ok(eigen_residual(f)?.holds)
}

/// `f · exp(pc)` with `c = Σ_k p^k ψ^{k+1}(Γ f)`, which solves `ψ(Γ f + (p − Φ)c) = 0`.
/// Each `ψ` divides the reliable degree by `p`, so the work happens at degree `p^{m-1} N`.
pub fn project_series(f: &TruncSeries) -> Result<TruncSeries> {
    let md = f.md;
    let p = md.p() as usize;
    let n = f.degree();
    let m = md.precision();
    if m < 2 {
        return Ok(f.clone());
    }
    let wide = f.with_degree(p.pow(m - 1) * n);
    let gamma = gamma_series(&wide)?;
    let gamma = TruncSeries::from_coeffs(md, wide.degree(), &gamma.coeffs);
    let mut c = TruncSeries::zero(md, wide.degree());
    let mut iterate = gamma;
    for k in 0..m - 1 {
        iterate = psi_series(&iterate);
        c = c.add(&iterate.scale(md.p_pow(k)))?;
    }
    Ok(wide.mul(&c.exp_p())?.with_degree(n))
}
