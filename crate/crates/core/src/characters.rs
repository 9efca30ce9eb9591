//! Characters of finite abelian p-groups and functions on them: the
//! determinant map from units of `Z/p^m[G]`, the Adams and induction
//! operators, the character-side logarithm, and the cyclic-group relations.

use crate::cyclotomic::CyclotomicElem;
use crate::error::{Error, Result};
use crate::group_ring::{AbQuotElem, GroupRingElem};
use crate::groups::{GroupKind, GroupTable};
use crate::padic::{valuation, Modulus};
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::sync::Arc;

/// The dual group of `Z/p^{e_1} × … × Z/p^{e_r}`, split into Galois orbits.
///
/// A dual vector `a` gives `χ_a(x) = ε_N^{Σ a_i x_i p^{N − e_i}}` with `p^N` the
/// exponent of the group; its values live at the level of the order of `χ_a`.
#[derive(Debug)]
pub struct CharacterTable {
    table: Arc<GroupTable>,
    p: u64,
    exponents: Vec<u32>,
    top: u32,
    /// dual vector of each orbit representative
    reps: Vec<Vec<u64>>,
    levels: Vec<u32>,
    /// character code ↦ (orbit, k) with `χ = rep^k`
    lookup: HashMap<Vec<u64>, (usize, u64)>,
}

impl CharacterTable {
    pub fn new(table: &Arc<GroupTable>) -> Result<Arc<Self>> {
        let exponents = match table.parent().kind() {
            GroupKind::Cyclic { exponents } if table.order() as u64 == table.parent().order() => exponents.clone(),
            _ => return Err(Error::NonAbelianContext),
        };
        let p = table.prime();
        let top = exponents.iter().copied().max().unwrap_or(0);
        let radices: Vec<u64> = exponents.iter().map(|&e| p.pow(e)).collect();
        let total: u64 = radices.iter().product();
        let pn = p.pow(top);
        let mut reps = Vec::new();
        let mut levels = Vec::new();
        let mut lookup = HashMap::new();
        for code in 0..total {
            let mut a = vec![0u64; radices.len()];
            let mut r = code;
            for (slot, &rad) in a.iter_mut().zip(&radices).rev() {
                *slot = r % rad;
                r /= rad;
            }
            if lookup.contains_key(&a) {
                continue;
            }
            let orbit = reps.len();
            for k in (1..pn.max(2)).filter(|k| k % p != 0) {
                let b: Vec<u64> = a.iter().zip(&radices).map(|(&x, &rad)| x * k % rad).collect();
                lookup.entry(b).or_insert((orbit, k));
            }
            lookup.insert(a.clone(), (orbit, 1));
            levels.push(Self::level_of(p, &exponents, top, &a));
            reps.push(a);
        }
        Ok(Arc::new(CharacterTable { table: table.clone(), p, exponents, top, reps, levels, lookup }))
    }

    fn level_of(p: u64, exponents: &[u32], top: u32, a: &[u64]) -> u32 {
        let v = a
            .iter()
            .zip(exponents)
            .filter(|(&x, _)| x != 0)
            .map(|(&x, &e)| valuation(x, p) + top - e)
            .min()
            .unwrap_or(top);
        top - v
    }

    pub fn table(&self) -> &Arc<GroupTable> {
        &self.table
    }
    pub fn orbit_count(&self) -> usize {
        self.reps.len()
    }
    pub fn representative(&self, orbit: usize) -> &[u64] {
        &self.reps[orbit]
    }
    pub fn level(&self, orbit: usize) -> u32 {
        self.levels[orbit]
    }
    /// Orbit of the trivial character.
    pub fn trivial(&self) -> usize {
        0
    }

    /// Orbit and Galois exponent of an arbitrary dual vector.
    pub fn locate(&self, a: &[u64]) -> (usize, u64) {
        self.lookup[&self.reduce_dual(a)]
    }

    fn reduce_dual(&self, a: &[u64]) -> Vec<u64> {
        a.iter().zip(&self.exponents).map(|(&x, &e)| x % self.p.pow(e)).collect()
    }

    /// `χ_a(g)` at the level of `χ_a`.
    pub fn value(&self, md: Modulus, a: &[u64], element: usize) -> CyclotomicElem {
        let level = Self::level_of(self.p, &self.exponents, self.top, a);
        let x = self.table.parent().coords(self.table.element(element));
        let pn = self.p.pow(self.top) as u128;
        let mut t: u128 = 0;
        for ((&ai, &xi), &e) in a.iter().zip(&x).zip(&self.exponents) {
            t = (t + ai as u128 * xi as u128 * self.p.pow(self.top - e) as u128) % pn;
        }
        let e = t as u64 / self.p.pow(self.top - level);
        CyclotomicElem::root_power(md, level, e)
    }

    /// Dual vectors killed by `p`: the characters of `G/φG`.
    pub fn p_torsion(&self) -> Vec<Vec<u64>> {
        let mut out = vec![vec![]];
        for &e in &self.exponents {
            let step = if e == 0 { 1 } else { self.p.pow(e - 1) };
            let choices: Vec<u64> = if e == 0 { vec![0] } else { (0..self.p).map(|j| j * step).collect() };
            out = out.iter().flat_map(|v| choices.iter().map(move |&c| [v.clone(), vec![c]].concat())).collect();
        }
        out
    }
}

/// Function on characters, stored on Galois-orbit representatives; the value
/// at `χ^k` is `σ_k` of the stored value.
#[derive(Clone, Debug)]
pub struct HomVector {
    chars: Arc<CharacterTable>,
    md: Modulus,
    values: Vec<CyclotomicElem>,
}

impl PartialEq for HomVector {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.chars, &other.chars) && self.md == other.md && self.values == other.values
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitRecord {
    pub character: Vec<u64>,
    pub level: u32,
    pub value: Vec<u64>,
}

impl HomVector {
    pub fn from_values(chars: &Arc<CharacterTable>, md: Modulus, values: Vec<CyclotomicElem>) -> Self {
        assert_eq!(values.len(), chars.orbit_count());
        HomVector { chars: chars.clone(), md, values }
    }

    pub fn constant(chars: &Arc<CharacterTable>, md: Modulus, c: u64) -> Self {
        let values = (0..chars.orbit_count()).map(|o| CyclotomicElem::scalar(md, chars.level(o), c)).collect();
        HomVector { chars: chars.clone(), md, values }
    }

    pub fn characters(&self) -> &Arc<CharacterTable> {
        &self.chars
    }
    pub fn modulus(&self) -> Modulus {
        self.md
    }
    pub fn values(&self) -> &[CyclotomicElem] {
        &self.values
    }

    /// `f(χ_a)` for any dual vector `a`.
    pub fn value_at(&self, a: &[u64]) -> CyclotomicElem {
        let (o, k) = self.chars.locate(a);
        self.values[o].galois(k)
    }

    fn check(&self, other: &Self) -> Result<()> {
        if !Arc::ptr_eq(&self.chars, &other.chars) || self.md != other.md {
            return Err(Error::MixedContext("hom vectors over different character tables".into()));
        }
        Ok(())
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let values = self.values.iter().zip(&other.values).map(|(a, b)| a.mul(b)).collect::<Result<_>>()?;
        Ok(HomVector { values, ..self.clone() })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let values = self.values.iter().zip(&other.values).map(|(a, b)| a.sub(b)).collect::<Result<_>>()?;
        Ok(HomVector { values, ..self.clone() })
    }

    pub fn pow(&self, e: u64) -> Self {
        HomVector { values: self.values.iter().map(|v| v.pow(e)).collect(), ..self.clone() }
    }

    pub fn inv(&self) -> Result<Self> {
        let values = self.values.iter().map(|v| v.inv()).collect::<Result<_>>()?;
        Ok(HomVector { values, ..self.clone() })
    }

    pub fn with_precision(&self, m: u32) -> Result<Self> {
        let md = self.md.with_precision(m)?;
        let values = self.values.iter().map(|v| v.with_precision(m)).collect::<Result<_>>()?;
        Ok(HomVector { values, md, chars: self.chars.clone() })
    }

    /// Replaces the value at one orbit.
    pub fn with_value(&self, orbit: usize, v: CyclotomicElem) -> Self {
        let mut out = self.clone();
        out.values[orbit] = v;
        out
    }

    /// Minimum valuation over all stored values.
    pub fn valuation(&self) -> u32 {
        self.values.iter().map(|v| v.valuation()).min().unwrap_or(self.md.precision())
    }

    pub fn to_records(&self) -> Vec<OrbitRecord> {
        self.values
            .iter()
            .enumerate()
            .map(|(o, v)| OrbitRecord { character: self.chars.reps[o].clone(), level: self.chars.level(o), value: v.coeffs().to_vec() })
            .collect()
    }
}

fn character_sum(chars: &Arc<CharacterTable>, md: Modulus, coeffs: &[u64]) -> HomVector {
    let values = (0..chars.orbit_count())
        .map(|o| {
            let a = chars.representative(o);
            let mut acc = CyclotomicElem::zero(md, chars.level(o));
            for (g, &c) in coeffs.iter().enumerate() {
                if c != 0 {
                    acc = acc.add(&chars.value(md, a, g).scale(c)).unwrap();
                }
            }
            acc
        })
        .collect();
    HomVector { chars: chars.clone(), md, values }
}

/// `DET(u)(χ) = Σ_g u_g χ(g)`.
pub fn det_map(chars: &Arc<CharacterTable>, u: &GroupRingElem) -> Result<HomVector> {
    if !chars.table().same_group(u.table()) {
        return Err(Error::MixedContext("unit and characters on different groups".into()));
    }
    Ok(character_sum(chars, u.modulus(), u.coeffs()))
}

/// Additive version on the class module: `TR(a)(χ) = Σ_g a_g χ(g)`.
pub fn tr_map(chars: &Arc<CharacterTable>, a: &AbQuotElem) -> Result<HomVector> {
    if !chars.table().same_group(a.table()) {
        return Err(Error::MixedContext("class function and characters on different groups".into()));
    }
    let t = a.table();
    let mut coeffs = vec![0u64; t.order()];
    for (g, slot) in coeffs.iter_mut().enumerate() {
        *slot = a.coeffs()[t.classes().class_of(g)];
    }
    Ok(character_sum(chars, a.modulus(), &coeffs))
}

/// `ψ_p(f)(χ) = f(χ^p)`.
pub fn adams_psi(f: &HomVector) -> HomVector {
    let chars = &f.chars;
    let values = (0..chars.orbit_count())
        .map(|o| {
            let a = chars.representative(o);
            let pa: Vec<u64> = a.iter().map(|&x| x * chars.p).collect();
            f.value_at(&chars.reduce_dual(&pa)).embed(chars.level(o))
        })
        .collect();
    HomVector { values, ..f.clone() }
}

/// `ι_p(f)(χ) = Π_ψ f(χψ)` over the characters `ψ` of `G/φG`.
pub fn iota_p(f: &HomVector) -> Result<HomVector> {
    let chars = &f.chars;
    let torsion = chars.p_torsion();
    let mut values = Vec::with_capacity(chars.orbit_count());
    for o in 0..chars.orbit_count() {
        let a = chars.representative(o);
        let level = chars.level(o);
        let work = level.max(1);
        let mut acc = CyclotomicElem::one(f.md, work);
        for psi in &torsion {
            let b: Vec<u64> = a.iter().zip(psi).map(|(&x, &y)| x + y).collect();
            acc = acc.mul(&f.value_at(&chars.reduce_dual(&b)).embed(work))?;
        }
        let v = acc
            .restrict(level)
            .ok_or_else(|| Error::LayerMismatch(format!("induced value for orbit {o} is not in level {level}")))?;
        values.push(v);
    }
    Ok(HomVector { values, ..f.clone() })
}

/// Per orbit: `f(χ)^p / ψ_p(f)(χ)`.
fn frobenius_quotient(f: &HomVector) -> Result<HomVector> {
    f.pow(f.md.p()).mul(&adams_psi(f).inv()?)
}

/// Whether `f^p / ψ_p(f)` is `1 mod p` at every character.
pub fn hom1_test(f: &HomVector) -> Result<bool> {
    let q = frobenius_quotient(f)?;
    Ok(q.values.iter().all(|v| v.sub(&CyclotomicElem::one(f.md, v.level())).unwrap().valuation() >= 1))
}

/// `Γ_Hom(f) = (1/p) log(f^p / ψ_p f)`, one precision lower.
pub fn gamma_hom(f: &HomVector) -> Result<HomVector> {
    let q = frobenius_quotient(f)?;
    let mut values = Vec::with_capacity(q.values.len());
    for (o, v) in q.values.iter().enumerate() {
        let l = v.log_one_unit().map_err(|_| Error::NotInHom1(o))?;
        values.push(l.div_p()?);
    }
    Ok(HomVector { chars: f.chars.clone(), md: f.md.with_precision(f.md.precision() - 1)?, values })
}

/// `Σ_χ f(χ) = Σ_orbits Tr(f(χ_rep))`, a residue in `Z/p^m`.
pub fn character_total(f: &HomVector) -> u64 {
    f.values.iter().fold(0, |acc, v| f.md.add(acc, v.trace_to(0).coeffs()[0]))
}

/// For `G = Z/p^K` with precision at most `K`: `h(f) = f(χ_0) / (−Σ_{k=1}^{K} Tr f(χ_k))`.
pub fn h_map(f: &HomVector) -> Result<u64> {
    let chars = &f.chars;
    if chars.exponents.len() != 1 {
        return Err(Error::LayerMismatch("h is defined for cyclic groups".into()));
    }
    let level = chars.exponents[0];
    let precision = f.md.precision();
    if level < precision {
        return Err(Error::LevelTooLow { level, precision });
    }
    let md = f.md;
    let mut denom = 0u64;
    for (o, v) in f.values.iter().enumerate() {
        if o != chars.trivial() {
            denom = md.add(denom, v.trace_to(0).coeffs()[0]);
        }
    }
    let denom = md.neg(denom);
    let inv = md.inv(denom).ok_or(Error::DenominatorNotUnit)?;
    Ok(md.mul(f.values[chars.trivial()].coeffs()[0], inv))
}

/// Lifts `u ∈ Z/p^m[Z/p^n]` to `Z/p^K[Z/p^K]` keeping exponents and coefficient residues.
pub fn lift_cyclic_unit(u: &GroupRingElem, big_k: u32, target: &Arc<GroupTable>) -> Result<GroupRingElem> {
    let md = Modulus::new(u.modulus().p(), big_k)?;
    let src = u.table();
    let mut coeffs = vec![0u64; target.order()];
    for (g, &c) in u.coeffs().iter().enumerate() {
        let exp = src.parent().coords(src.element(g))[0];
        let idx = target.index_of(target.parent().from_coords(&[exp])).ok_or(Error::LayerMismatch("target group too small".into()))?;
        coeffs[idx] = c;
    }
    Ok(GroupRingElem::from_coeffs(target, md, coeffs))
}
