//! The group ring `Z/p^m[G]`, its quotient by additive commutators (the free
//! module on conjugacy classes), and the structure maps between them.

use crate::error::{Error, Result};
use crate::groups::{GroupTable, Subgroup};
use crate::padic::{valuation, Modulus, PadicInt};
use rand::Rng;
use serde::{Deserialize, Serialize};
use std::sync::Arc;

fn same_context(a: &Arc<GroupTable>, b: &Arc<GroupTable>, ma: &Modulus, mb: &Modulus) -> Result<()> {
    if !(Arc::ptr_eq(a, b) || a.same_group(b)) {
        return Err(Error::MixedContext(format!("groups {} and {}", a.label(), b.label())));
    }
    if ma != mb {
        return Err(Error::MixedContext(format!("precisions {} and {}", ma.precision(), mb.precision())));
    }
    Ok(())
}

/// `Σ a_g g` in `Z/p^m[G]`, dense over the table's element order.
#[derive(Clone, Debug)]
pub struct GroupRingElem {
    table: Arc<GroupTable>,
    md: Modulus,
    coeffs: Vec<u64>,
}

impl PartialEq for GroupRingElem {
    fn eq(&self, other: &Self) -> bool {
        same_context(&self.table, &other.table, &self.md, &other.md).is_ok() && self.coeffs == other.coeffs
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermRecord {
    pub element: String,
    pub coefficient: u64,
}

impl GroupRingElem {
    pub fn zero(table: &Arc<GroupTable>, md: Modulus) -> Self {
        GroupRingElem { table: table.clone(), md, coeffs: vec![0; table.order()] }
    }

    pub fn scalar(table: &Arc<GroupTable>, md: Modulus, c: u64) -> Self {
        let mut z = Self::zero(table, md);
        z.coeffs[0] = md.reduce(c);
        z
    }

    pub fn one(table: &Arc<GroupTable>, md: Modulus) -> Self {
        Self::scalar(table, md, 1)
    }

    /// The group element with table index `idx`.
    pub fn basis(table: &Arc<GroupTable>, md: Modulus, idx: usize) -> Self {
        let mut z = Self::zero(table, md);
        z.coeffs[idx] = 1 % md.modulus();
        z
    }

    pub fn from_coeffs(table: &Arc<GroupTable>, md: Modulus, coeffs: Vec<u64>) -> Self {
        assert_eq!(coeffs.len(), table.order());
        let coeffs = coeffs.into_iter().map(|c| md.reduce(c)).collect();
        GroupRingElem { table: table.clone(), md, coeffs }
    }

    pub fn random<R: Rng>(table: &Arc<GroupTable>, md: Modulus, rng: &mut R) -> Self {
        let coeffs = (0..table.order()).map(|_| rng.gen_range(0..md.modulus())).collect();
        GroupRingElem { table: table.clone(), md, coeffs }
    }

    pub fn random_unit<R: Rng>(table: &Arc<GroupTable>, md: Modulus, rng: &mut R) -> Self {
        loop {
            let x = Self::random(table, md, rng);
            if x.is_unit() {
                return x;
            }
        }
    }

    pub fn table(&self) -> &Arc<GroupTable> {
        &self.table
    }
    pub fn modulus(&self) -> Modulus {
        self.md
    }
    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }
    pub fn coeff(&self, idx: usize) -> PadicInt {
        PadicInt::from_residue(&self.md, self.coeffs[idx])
    }

    fn check(&self, other: &Self) -> Result<()> {
        same_context(&self.table, &other.table, &self.md, &other.md)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(&a, &b)| self.md.add(a, b)).collect();
        Ok(GroupRingElem { coeffs, ..self.clone() })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(&a, &b)| self.md.sub(a, b)).collect();
        Ok(GroupRingElem { coeffs, ..self.clone() })
    }

    pub fn neg(&self) -> Self {
        GroupRingElem { coeffs: self.coeffs.iter().map(|&a| self.md.neg(a)).collect(), ..self.clone() }
    }

    pub fn scale(&self, c: u64) -> Self {
        GroupRingElem { coeffs: self.coeffs.iter().map(|&a| self.md.mul(a, c)).collect(), ..self.clone() }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let n = self.coeffs.len();
        let pm = self.md.modulus() as u128;
        let mut acc = vec![0u128; n];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                if b != 0 {
                    let k = self.table.mul(i, j);
                    acc[k] = (acc[k] + a as u128 * b as u128) % pm;
                }
            }
        }
        Ok(GroupRingElem { coeffs: acc.into_iter().map(|x| x as u64).collect(), ..self.clone() })
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(&self.table, self.md);
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

    pub fn augmentation(&self) -> u64 {
        self.coeffs.iter().fold(0, |acc, &c| self.md.add(acc, c))
    }

    /// `Z/p^m[P]` is local with residue field `F_p` for a p-group `P`.
    pub fn is_unit(&self) -> bool {
        self.augmentation() % self.md.p() != 0
    }

    pub fn inv(&self) -> Result<Self> {
        let s = self.md.inv(self.augmentation()).ok_or(Error::NotUnit)?;
        let y = self.scale(s);
        let one = Self::one(&self.table, self.md);
        // y = 1 - z with z in the radical; 1/y = Π (1 + z^{2^j})
        let mut z = one.sub(&y)?;
        let mut inv = one.clone();
        for _ in 0..64 {
            if z.is_zero() {
                return Ok(inv.scale(s));
            }
            inv = inv.mul(&one.add(&z)?)?;
            z = z.mul(&z)?;
        }
        Err(Error::IntegralityFailure("radical element failed to become nilpotent".into()))
    }

    /// Re-reads the coefficients at another precision: truncation, or the
    /// canonical lift by least non-negative residues.
    pub fn with_precision(&self, m: u32) -> Result<Self> {
        let md = self.md.with_precision(m)?;
        Ok(GroupRingElem { md, coeffs: self.coeffs.iter().map(|&c| md.reduce(c)).collect(), table: self.table.clone() })
    }

    /// Pushforward along `g ↦ g^p` (additive, not multiplicative).
    pub fn phi(&self) -> Self {
        let mut coeffs = vec![0u64; self.coeffs.len()];
        for (i, &c) in self.coeffs.iter().enumerate() {
            let j = self.table.phi(i);
            coeffs[j] = self.md.add(coeffs[j], c);
        }
        GroupRingElem { coeffs, ..self.clone() }
    }

    pub fn to_ab(&self) -> AbQuotElem {
        let classes = self.table.classes();
        let mut coeffs = vec![0u64; classes.count()];
        for (i, &c) in self.coeffs.iter().enumerate() {
            let k = classes.class_of(i);
            coeffs[k] = self.md.add(coeffs[k], c);
        }
        AbQuotElem { table: self.table.clone(), md: self.md, coeffs }
    }

    /// Image in `Z/p^m[G^ab]`.
    pub fn to_abelianized(&self) -> AbelianizedElem {
        let mut coeffs = vec![0u64; self.table.ab_count()];
        for (i, &c) in self.coeffs.iter().enumerate() {
            let k = self.table.ab_of(i);
            coeffs[k] = self.md.add(coeffs[k], c);
        }
        AbelianizedElem { table: self.table.clone(), md: self.md, coeffs }
    }

    /// The inclusion `Z/p^m[H] → Z/p^m[G]` for a subgroup table `H` of the parent of `target`.
    pub fn include_into(&self, target: &Arc<GroupTable>) -> Self {
        let mut z = Self::zero(target, self.md);
        for (i, &c) in self.coeffs.iter().enumerate() {
            let j = target.index_of(self.table.element(i)).expect("subgroup element");
            z.coeffs[j] = self.md.add(z.coeffs[j], c);
        }
        z
    }

    /// `exp(p a)`.
    pub fn exp_p(&self) -> Self {
        let (p, m) = (self.md.p(), self.md.precision() as u64);
        let mut sum = Self::one(&self.table, self.md);
        let mut apow = sum.clone();
        let mut fact_unit = 1u64;
        let mut fact_val = 0u64;
        let mut k = 1u64;
        while k * (p - 2) + 1 < m * (p - 1) {
            apow = apow.mul(self).unwrap();
            let vk = valuation(k, p) as u64;
            fact_val += vk;
            fact_unit = self.md.mul(fact_unit, k / p.pow(vk as u32));
            let shift = k - fact_val;
            if shift < m {
                let f = self.md.mul(self.md.p_pow(shift as u32), self.md.inv(fact_unit).unwrap());
                sum = sum.add(&apow.scale(f)).unwrap();
            }
            k += 1;
        }
        sum
    }

    pub fn to_records(&self) -> Vec<TermRecord> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(i, &c)| TermRecord { element: self.table.describe(i), coefficient: c })
            .collect()
    }
}

/// Element of the free module on conjugacy classes.
#[derive(Clone, Debug)]
pub struct AbQuotElem {
    table: Arc<GroupTable>,
    md: Modulus,
    coeffs: Vec<u64>,
}

impl PartialEq for AbQuotElem {
    fn eq(&self, other: &Self) -> bool {
        same_context(&self.table, &other.table, &self.md, &other.md).is_ok() && self.coeffs == other.coeffs
    }
}

impl AbQuotElem {
    pub fn zero(table: &Arc<GroupTable>, md: Modulus) -> Self {
        AbQuotElem { table: table.clone(), md, coeffs: vec![0; table.classes().count()] }
    }

    pub fn from_coeffs(table: &Arc<GroupTable>, md: Modulus, coeffs: Vec<u64>) -> Self {
        assert_eq!(coeffs.len(), table.classes().count());
        AbQuotElem { table: table.clone(), md, coeffs: coeffs.into_iter().map(|c| md.reduce(c)).collect() }
    }

    /// Point mass on a class.
    pub fn delta(table: &Arc<GroupTable>, md: Modulus, class: usize) -> Self {
        let mut z = Self::zero(table, md);
        z.coeffs[class] = 1 % md.modulus();
        z
    }

    pub fn table(&self) -> &Arc<GroupTable> {
        &self.table
    }
    pub fn modulus(&self) -> Modulus {
        self.md
    }
    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    fn check(&self, other: &Self) -> Result<()> {
        same_context(&self.table, &other.table, &self.md, &other.md)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(&a, &b)| self.md.add(a, b)).collect();
        Ok(AbQuotElem { coeffs, ..self.clone() })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(&a, &b)| self.md.sub(a, b)).collect();
        Ok(AbQuotElem { coeffs, ..self.clone() })
    }

    pub fn neg(&self) -> Self {
        AbQuotElem { coeffs: self.coeffs.iter().map(|&a| self.md.neg(a)).collect(), ..self.clone() }
    }

    pub fn scale(&self, c: u64) -> Self {
        AbQuotElem { coeffs: self.coeffs.iter().map(|&a| self.md.mul(a, c)).collect(), ..self.clone() }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    /// Minimum coefficient valuation (the precision for zero).
    pub fn valuation(&self) -> u32 {
        self.coeffs.iter().map(|&c| self.md.val(c)).min().unwrap_or(self.md.precision())
    }

    pub fn with_precision(&self, m: u32) -> Result<Self> {
        let md = self.md.with_precision(m)?;
        Ok(AbQuotElem { md, coeffs: self.coeffs.iter().map(|&c| md.reduce(c)).collect(), table: self.table.clone() })
    }

    /// `Φ`: pushforward of class coefficients along the class of `g ↦ g^p`.
    pub fn phi(&self) -> Self {
        let mut coeffs = vec![0u64; self.coeffs.len()];
        for (c, &a) in self.coeffs.iter().enumerate() {
            let d = self.table.class_phi(c);
            coeffs[d] = self.md.add(coeffs[d], a);
        }
        AbQuotElem { coeffs, ..self.clone() }
    }

    /// `(p - Φ)(a)`.
    pub fn p_minus_phi(&self) -> Self {
        self.scale(self.md.p()).sub(&self.phi()).unwrap()
    }

    /// A group-ring lift: each class coefficient sits on the class representative.
    pub fn lift(&self) -> GroupRingElem {
        let mut z = GroupRingElem::zero(&self.table, self.md);
        for (c, &a) in self.coeffs.iter().enumerate() {
            z.coeffs[self.table.classes().representative(c)] = a;
        }
        z
    }

    /// `ω(Σ a_g g) = Π g^{a_g}` in `G^ab`, returned as an abelianisation coset index.
    /// Exponents are read as residues, which is well defined once the exponent of `G^ab` divides `p^m`.
    pub fn omega(&self) -> usize {
        let mut acc = self.table.ab_of(0);
        for (c, &a) in self.coeffs.iter().enumerate() {
            let g = self.table.ab_of(self.table.classes().representative(c));
            let mut base = g;
            let mut e = a;
            while e > 0 {
                if e & 1 == 1 {
                    acc = self.table.ab_mul(acc, base);
                }
                base = self.table.ab_mul(base, base);
                e >>= 1;
            }
        }
        acc
    }

    /// The composite modified trace on class functions of `G`:
    /// `p^{d-1} g^p` off `φG`, `p^d g` on it, with `[G : φG] = p^d`.
    pub fn tr_prime(&self, phi_group: &Subgroup) -> Self {
        let t = &self.table;
        let index = t.order() as u64 / phi_group.order();
        let d = crate::padic::floor_log(index, self.md.p());
        let pd1 = self.md.p_pow(d.saturating_sub(1));
        let pd = self.md.p_pow(d);
        let mut coeffs = vec![0u64; self.coeffs.len()];
        for (c, &a) in self.coeffs.iter().enumerate() {
            let rep = t.element(t.classes().representative(c));
            if phi_group.contains(rep) {
                coeffs[c] = self.md.add(coeffs[c], self.md.mul(a, pd));
            } else {
                let e = t.class_phi(c);
                coeffs[e] = self.md.add(coeffs[e], self.md.mul(a, pd1));
            }
        }
        AbQuotElem { coeffs, ..self.clone() }
    }

    pub fn to_records(&self) -> Vec<TermRecord> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(k, &c)| TermRecord {
                element: self.table.describe(self.table.classes().representative(k)),
                coefficient: c,
            })
            .collect()
    }
}

/// Element of `Z/p^m[G^ab]`.
#[derive(Clone, Debug)]
pub struct AbelianizedElem {
    table: Arc<GroupTable>,
    md: Modulus,
    coeffs: Vec<u64>,
}

impl PartialEq for AbelianizedElem {
    fn eq(&self, other: &Self) -> bool {
        same_context(&self.table, &other.table, &self.md, &other.md).is_ok() && self.coeffs == other.coeffs
    }
}

impl AbelianizedElem {
    pub fn one(table: &Arc<GroupTable>, md: Modulus) -> Self {
        let mut coeffs = vec![0u64; table.ab_count()];
        coeffs[table.ab_of(0)] = 1 % md.modulus();
        AbelianizedElem { table: table.clone(), md, coeffs }
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }
    pub fn modulus(&self) -> Modulus {
        self.md
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        same_context(&self.table, &other.table, &self.md, &other.md)?;
        let n = self.coeffs.len();
        let mut out = vec![0u64; n];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                if b != 0 {
                    let k = self.table.ab_mul(i, j);
                    out[k] = self.md.add(out[k], self.md.mul(a, b));
                }
            }
        }
        Ok(AbelianizedElem { coeffs: out, ..self.clone() })
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(&self.table, self.md);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).unwrap();
            }
            base = base.mul(&base).unwrap();
            e >>= 1;
        }
        acc
    }

    pub fn with_precision(&self, m: u32) -> Result<Self> {
        let md = self.md.with_precision(m)?;
        Ok(AbelianizedElem { md, coeffs: self.coeffs.iter().map(|&c| md.reduce(c)).collect(), table: self.table.clone() })
    }

    /// Minimum valuation of the coefficientwise difference.
    pub fn distance(&self, other: &Self) -> u32 {
        self.coeffs.iter().zip(&other.coeffs).map(|(&a, &b)| self.md.val(self.md.sub(a, b))).min().unwrap_or(self.md.precision())
    }
}

/// Right coset representatives `t_i` with `G = ⊔ H t_i`, each the smallest element of its coset.
pub fn right_coset_reps(g: &GroupTable, h: &Subgroup) -> Vec<usize> {
    let n = g.order();
    let mut seen = vec![false; n];
    let mut reps = Vec::new();
    for t in 0..n {
        if seen[t] {
            continue;
        }
        reps.push(t);
        for &x in h.elements() {
            let hi = g.index_of(x).expect("subgroup element");
            seen[g.mul(hi, t)] = true;
        }
    }
    reps
}

/// `tr_{B/A}(b)`: trace of right multiplication by `b` on the free `Z/p^m[H]`-module
/// `Z/p^m[G]` with basis the right coset representatives.
pub fn tr_b_over_a(b: &GroupRingElem, sub_table: &Arc<GroupTable>, h: &Subgroup) -> GroupRingElem {
    tr_b_over_a_with_reps(b, sub_table, h, &right_coset_reps(b.table(), h))
}

pub fn tr_b_over_a_with_reps(b: &GroupRingElem, sub_table: &Arc<GroupTable>, h: &Subgroup, reps: &[usize]) -> GroupRingElem {
    let g = b.table();
    let md = b.modulus();
    let mut out = GroupRingElem::zero(sub_table, md);
    for &t in reps {
        for (x, &c) in b.coeffs().iter().enumerate() {
            if c == 0 {
                continue;
            }
            let conj = g.mul(g.mul(t, x), g.inv(t));
            let e = g.element(conj);
            if h.contains(e) {
                let j = sub_table.index_of(e).unwrap();
                out.coeffs[j] = md.add(out.coeffs[j], c);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{phi_subgroup, FiniteGroup};

    fn ctx(desc: &str, m: u32) -> (Arc<GroupTable>, Modulus) {
        let g = FiniteGroup::parse(desc).unwrap();
        (GroupTable::of_group(&g), Modulus::new(g.prime(), m).unwrap())
    }

    #[test]
    fn units_and_inverse() {
        let (t, md) = ctx("U(3,3,1)", 3);
        let g = GroupRingElem::basis(&t, md, 5);
        let one = GroupRingElem::one(&t, md);
        assert_eq!(g.mul(&g.inv().unwrap()).unwrap(), one);
        let gm1 = g.sub(&one).unwrap();
        assert!(!gm1.is_unit());
        assert!(one.add(&gm1).unwrap().is_unit());
        let x = GroupRingElem::from_coeffs(&t, md, (0..27).map(|i| (i * i + 1) as u64).collect());
        if x.is_unit() {
            assert_eq!(x.mul(&x.inv().unwrap()).unwrap(), one);
        }
    }

    #[test]
    fn cyclic_phi_and_tr_prime() {
        let (t, md) = ctx("C(3,2)", 4);
        let d1 = AbQuotElem::delta(&t, md, 1);
        assert_eq!(d1.phi(), AbQuotElem::delta(&t, md, 3));
        let g = FiniteGroup::cyclic(3, 2).unwrap();
        let h = phi_subgroup(&g).unwrap();
        assert_eq!(d1.tr_prime(&h), AbQuotElem::delta(&t, md, 3));
        let d3 = AbQuotElem::delta(&t, md, 3);
        assert_eq!(d3.tr_prime(&h), d3.scale(3));
    }

    #[test]
    fn mixed_context() {
        let (t, md) = ctx("C(3,2)", 4);
        let a = GroupRingElem::one(&t, md);
        let b = GroupRingElem::one(&t, md.with_precision(3).unwrap());
        assert!(matches!(a.add(&b), Err(Error::MixedContext(_))));
        let (t2, _) = ctx("C(3,1)xC(3,1)", 4);
        assert!(a.mul(&GroupRingElem::one(&t2, md)).is_err());
    }
}
