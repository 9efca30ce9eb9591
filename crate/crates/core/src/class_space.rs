//! Function and measure spaces on a tower `X` with a contracting self-map `Ψ`.
//!
//! Two towers are built in: `Z_p^r` with `Ψx = px`, read at finite depth as
//! `(Z/p^n)^r`, and the conjugacy classes of a finite group with `Ψ` the
//! class of the p-th power.

use crate::error::{Error, Result};
use crate::group_ring::AbQuotElem;
use crate::groups::GroupTable;
use crate::linalg::{self, HowellForm};
use crate::padic::{valuation, Modulus};
use std::sync::Arc;

/// A `Z/p^m`-valued function on `(Z/p^n)^r`, points packed in mixed radix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DepthFunction {
    md: Modulus,
    rank: usize,
    depth: u32,
    values: Vec<u64>,
}

impl DepthFunction {
    fn size(p: u64, rank: usize, depth: u32) -> usize {
        (p.pow(depth) as usize).pow(rank as u32)
    }

    pub fn from_fn(md: Modulus, rank: usize, depth: u32, f: impl Fn(&[u64]) -> u64) -> Self {
        let n = Self::size(md.p(), rank, depth);
        let pn = md.p().pow(depth);
        let mut pt = vec![0u64; rank];
        let values = (0..n)
            .map(|idx| {
                let mut r = idx as u64;
                for c in pt.iter_mut().rev() {
                    *c = r % pn;
                    r /= pn;
                }
                md.reduce(f(&pt))
            })
            .collect();
        DepthFunction { md, rank, depth, values }
    }

    pub fn constant(md: Modulus, rank: usize, depth: u32, c: u64) -> Self {
        Self::from_fn(md, rank, depth, |_| c)
    }

    pub fn depth(&self) -> u32 {
        self.depth
    }
    pub fn rank(&self) -> usize {
        self.rank
    }
    pub fn modulus(&self) -> Modulus {
        self.md
    }
    pub fn values(&self) -> &[u64] {
        &self.values
    }

    fn index(&self, pt: &[u64]) -> usize {
        let pn = self.md.p().pow(self.depth);
        pt.iter().fold(0u64, |acc, &c| acc * pn + c % pn) as usize
    }

    /// Value at a point given by integer coordinates (reduced mod `p^depth`).
    pub fn eval(&self, pt: &[u64]) -> u64 {
        self.values[self.index(pt)]
    }

    /// The same function read at a larger depth.
    pub fn refine(&self, depth: u32) -> Self {
        assert!(depth >= self.depth);
        Self::from_fn(self.md, self.rank, depth, |x| self.eval(x))
    }

    fn aligned(&self, other: &Self) -> Result<(Self, Self)> {
        if self.md != other.md || self.rank != other.rank {
            return Err(Error::MixedContext("depth functions on different towers".into()));
        }
        let d = self.depth.max(other.depth);
        Ok((self.refine(d), other.refine(d)))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        let (a, b) = self.aligned(other)?;
        let values = a.values.iter().zip(&b.values).map(|(&x, &y)| self.md.add(x, y)).collect();
        Ok(DepthFunction { values, ..a })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        let (a, b) = self.aligned(other)?;
        let values = a.values.iter().zip(&b.values).map(|(&x, &y)| self.md.sub(x, y)).collect();
        Ok(DepthFunction { values, ..a })
    }

    pub fn scale(&self, c: u64) -> Self {
        DepthFunction { values: self.values.iter().map(|&x| self.md.mul(x, c)).collect(), ..self.clone() }
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|&x| x == 0)
    }

    /// Whether the function vanishes on `X ∖ Ψ(X)` (points with some unit coordinate).
    pub fn vanishes_off_image(&self) -> bool {
        let p = self.md.p();
        let me = self.clone();
        let probe = Self::from_fn(self.md, self.rank, self.depth, |x| {
            if x.iter().any(|&c| c % p != 0) {
                me.eval(x)
            } else {
                0
            }
        });
        probe.is_zero()
    }
}

/// `(Ψ*f)(x) = f(px)`, one depth lower.
pub fn psi_pullback(f: &DepthFunction) -> Result<DepthFunction> {
    if f.depth == 0 {
        return Err(Error::DepthExhausted { needed: 1, available: 0 });
    }
    let p = f.md.p();
    Ok(DepthFunction::from_fn(f.md, f.rank, f.depth - 1, |x| {
        let px: Vec<u64> = x.iter().map(|&c| c * p).collect();
        f.eval(&px)
    }))
}

/// `(Sh)(x) = h(x/p)` on `Ψ(X)`, zero elsewhere; a right inverse of `Ψ*`, one depth higher.
fn psi_section(h: &DepthFunction) -> DepthFunction {
    let p = h.md.p();
    DepthFunction::from_fn(h.md, h.rank, h.depth + 1, |x| {
        if x.iter().all(|&c| c % p == 0) {
            let y: Vec<u64> = x.iter().map(|&c| c / p).collect();
            h.eval(&y)
        } else {
            0
        }
    })
}

/// `g^♯(x) = p^k g(y)` for `x = p^k y` with `y ∉ Ψ(X)`, and `0` at the base point.
///
/// `y` is read through the canonical lift `x / p^k`, so the result is exact when
/// `g` factors through a depth at most `depth - k` for every occurring `k`.
pub fn sharp_extend(g: &DepthFunction) -> DepthFunction {
    let md = g.md;
    let p = md.p();
    DepthFunction::from_fn(md, g.rank, g.depth, |x| {
        let k = x.iter().filter(|&&c| c != 0).map(|&c| valuation(c, p)).min();
        match k {
            None => 0,
            Some(k) => {
                let y: Vec<u64> = x.iter().map(|&c| c / p.pow(k)).collect();
                md.mul(md.p_pow(k), g.eval(&y))
            }
        }
    })
}

/// `g ↦ (g|_{X∖Ψ(X)})^♯`, the projector onto `ker(Ψ* − p)`.
pub fn project_to_kernel(g: &DepthFunction) -> DepthFunction {
    sharp_extend(g)
}

/// `(Ψ* − p)(g)`, read at the depth of `g`.
pub fn psi_minus_p(g: &DepthFunction) -> Result<DepthFunction> {
    let pulled = psi_pullback(g)?;
    pulled.sub(&g.scale(g.md.p()))
}

/// Solves `Ψ*(g) − p g = f` by `g = Σ_{k<m} p^k S^{k+1} f` where `S` is the
/// section of `Ψ*`. Each term costs one depth, so the answer sits at depth `n + m`.
pub fn solve_psi_minus_p(f: &DepthFunction, max_depth: u32) -> Result<DepthFunction> {
    let m = f.md.precision();
    let needed = f.depth + m;
    if needed > max_depth {
        return Err(Error::DepthExhausted { needed, available: max_depth });
    }
    let mut term = f.clone();
    let mut g = DepthFunction::constant(f.md, f.rank, needed, 0);
    for k in 0..m {
        term = psi_section(&term);
        g = g.add(&term.scale(f.md.p_pow(k)))?;
    }
    Ok(g)
}

/// Class measures are the free module on conjugacy classes.
pub type ClassMeasure = AbQuotElem;

/// Column order used for canonical forms: classes in `Ψ(X)` deepest first
/// (the identity class leads), then the classes off `Ψ(X)`.
pub fn elimination_order(table: &GroupTable) -> Vec<usize> {
    let n = table.classes().count();
    let mut inside: Vec<(Option<u32>, usize)> = Vec::new();
    let mut outside = Vec::new();
    for c in 0..n {
        match table.class_depth(c) {
            Some(0) => outside.push(c),
            d => inside.push((d, c)),
        }
    }
    inside.sort_by(|a, b| match (a.0, b.0) {
        (None, None) => a.1.cmp(&b.1),
        (None, _) => std::cmp::Ordering::Less,
        (_, None) => std::cmp::Ordering::Greater,
        (Some(x), Some(y)) => y.cmp(&x).then(a.1.cmp(&b.1)),
    });
    inside.into_iter().map(|x| x.1).chain(outside).collect()
}

/// Canonical coset representatives modulo `(p − Φ)` on class measures.
#[derive(Clone, Debug)]
pub struct ClassSplitting {
    table: Arc<GroupTable>,
    md: Modulus,
    order: Vec<usize>,
    howell: HowellForm,
    off_image: Vec<bool>,
}

#[derive(Clone, Debug)]
pub struct MeasureSplit {
    /// supported on `X ∖ Ψ(X)`
    pub off_image: ClassMeasure,
    /// lies in `(Ψ_* − p)` of the measures
    pub image_part: ClassMeasure,
    /// `ν` with `(Ψ_* − p)ν = image_part`
    pub witness: ClassMeasure,
}

impl ClassSplitting {
    pub fn new(table: &Arc<GroupTable>, md: Modulus) -> Self {
        let n = table.classes().count();
        let order = elimination_order(table);
        let rows: Vec<Vec<u64>> = (0..n)
            .map(|c| {
                let v = AbQuotElem::delta(table, md, c).p_minus_phi();
                order.iter().map(|&k| v.coeffs()[k]).collect()
            })
            .collect();
        let howell = HowellForm::new(md, n, &rows);
        let off_image = (0..n).map(|c| table.class_depth(c) == Some(0)).collect();
        ClassSplitting { table: table.clone(), md, order, howell, off_image }
    }

    pub fn modulus(&self) -> Modulus {
        self.md
    }

    pub fn is_off_image(&self, class: usize) -> bool {
        self.off_image[class]
    }

    /// Canonical representative of `μ + image(p − Φ)`.
    pub fn normal_form(&self, mu: &ClassMeasure) -> ClassMeasure {
        let permuted: Vec<u64> = self.order.iter().map(|&k| mu.coeffs()[k]).collect();
        let reduced = self.howell.reduce(&permuted);
        let mut coeffs = vec![0u64; reduced.len()];
        for (pos, &k) in self.order.iter().enumerate() {
            coeffs[k] = reduced[pos];
        }
        AbQuotElem::from_coeffs(&self.table, self.md, coeffs)
    }

    /// Some `c` with `(p − Φ)c = target`, free coordinates zeroed.
    pub fn solve_p_minus_phi(&self, target: &ClassMeasure) -> Option<ClassMeasure> {
        let n = self.table.classes().count();
        let mut a = vec![vec![0u64; n]; n];
        for j in 0..n {
            let col = AbQuotElem::delta(&self.table, self.md, j).p_minus_phi();
            for i in 0..n {
                a[i][j] = col.coeffs()[i];
            }
        }
        let x = linalg::solve(&self.md, &a, target.coeffs())?;
        Some(AbQuotElem::from_coeffs(&self.table, self.md, x))
    }

    pub fn split(&self, mu: &ClassMeasure) -> Result<MeasureSplit> {
        let off = self.normal_form(mu);
        if off.coeffs().iter().enumerate().any(|(c, &x)| x != 0 && !self.off_image[c]) {
            return Err(Error::IntegralityFailure("normal form keeps mass on Ψ(X)".into()));
        }
        let image_part = mu.sub(&off)?;
        let target = image_part.neg();
        let w = self
            .solve_p_minus_phi(&target)
            .ok_or_else(|| Error::IntegralityFailure("image component has no (p − Φ) preimage".into()))?;
        Ok(MeasureSplit { off_image: off, image_part, witness: w })
    }
}

/// Forward map `(Ψ_* − p)` on class measures.
pub fn psi_push_minus_p(mu: &ClassMeasure) -> ClassMeasure {
    mu.p_minus_phi().neg()
}

/// Classes in `Ψ^k(X)` for `k = 0, 1, …` until the sequence stabilises.
pub fn psi_iterates(table: &GroupTable) -> Vec<Vec<bool>> {
    let n = table.classes().count();
    let mut level = vec![true; n];
    let mut out = vec![level.clone()];
    loop {
        let mut next = vec![false; n];
        for (c, &inside) in level.iter().enumerate() {
            if inside {
                next[table.class_phi(c)] = true;
            }
        }
        if next == level {
            return out;
        }
        out.push(next.clone());
        level = next;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::FiniteGroup;

    #[test]
    fn pullback_indicator() {
        let md = Modulus::new(3, 3).unwrap();
        let f = DepthFunction::from_fn(md, 1, 2, |x| u64::from(x[0] % 3 == 0));
        let g = psi_pullback(&f).unwrap();
        assert_eq!(g.depth(), 1);
        assert!(g.values().iter().all(|&v| v == 1));
        let h = DepthFunction::from_fn(md, 1, 2, |x| u64::from(x[0] % 9 == 0));
        let k = psi_pullback(&h).unwrap();
        assert_eq!(k.values(), &[1, 0, 0]);
        assert!(psi_pullback(&DepthFunction::constant(md, 1, 0, 1)).is_err());
    }

    #[test]
    fn sharp_of_one() {
        let md = Modulus::new(3, 4).unwrap();
        let g = DepthFunction::constant(md, 1, 3, 1);
        let s = sharp_extend(&g);
        for x in 0..27u64 {
            let want = if x == 0 { 0 } else { 3u64.pow(valuation(x, 3)) };
            assert_eq!(s.eval(&[x]), want);
        }
    }

    #[test]
    fn split_point_masses() {
        let g = FiniteGroup::cyclic(3, 2).unwrap();
        let t = GroupTable::of_group(&g);
        let md = Modulus::new(3, 3).unwrap();
        let sp = ClassSplitting::new(&t, md);
        let d1 = AbQuotElem::delta(&t, md, 1);
        let s = sp.split(&d1).unwrap();
        assert_eq!(s.off_image, d1);
        assert!(s.image_part.is_zero());
        let d3 = AbQuotElem::delta(&t, md, 3);
        let s = sp.split(&d3).unwrap();
        assert_eq!(s.off_image.add(&s.image_part).unwrap(), d3);
        assert_eq!(psi_push_minus_p(&s.witness), s.image_part);
    }
}
