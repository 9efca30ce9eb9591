//! `K_1` of `Z/p^m[G]` through unit representatives: the integral logarithm
//! `Γ`, `exp(p·)`, the twisted Adams operation, transfer and the norm operator.

use crate::class_space::ClassSplitting;
use crate::error::{Error, Result};
use crate::group_ring::{tr_b_over_a, AbQuotElem, AbelianizedElem, GroupRingElem};
use crate::groups::{generate, phi_of, GroupTable, Subgroup};
use crate::linalg::smith_valuations;
use crate::padic::{floor_log, valuation, Modulus};
use std::sync::Arc;

/// Smallest `L` with `y^L = 0` in `F_p[G]`.
fn nilpotency_index(y: &GroupRingElem) -> usize {
    let mut pw = y.clone();
    let mut l = 1;
    while !pw.is_zero() {
        pw = pw.mul(y).unwrap();
        l += 1;
        assert!(l <= y.table().order() + 1, "augmentation element failed to be nilpotent");
    }
    l
}

/// Series length for `log(1 + y)` modulo `p^{q+1}` when `y^L ∈ pA`.
fn log_cutoff(l: usize, q: u32, p: u64) -> u64 {
    let l = l as u64;
    let ok = |k: u64| (k..=p * k).all(|kk| (kk / l) as i64 - floor_log(kk, p) as i64 > q as i64);
    let mut k = l;
    while !ok(k) {
        k += 1;
    }
    k - 1
}

/// `Γ(x) = log x − Φ(log x)/p` in the class module, modulo `p^q`. Needs `q < m`.
///
/// The Teichmüller factor of the augmentation is split off, the logarithm of the
/// one-unit part is taken with its coefficients scaled by `p^K` so the whole
/// computation stays integral, and the final division by `p^{K+1}` is checked.
pub fn gamma_at(x: &GroupRingElem, q: u32) -> Result<AbQuotElem> {
    let md0 = x.modulus();
    let p = md0.p();
    if q >= md0.precision() && md0.precision() > 0 {
        return Err(Error::IntegralityFailure(format!("Γ mod p^{q} needs precision above {}", md0.precision())));
    }
    let aug = x.augmentation();
    if aug % p == 0 {
        return Err(Error::NotUnit);
    }
    let table = x.table();
    let out_md = md0.with_precision(q)?;
    if q == 0 {
        return Ok(AbQuotElem::zero(table, out_md));
    }
    let mdp = md0.with_precision(1)?;
    let xp = x.with_precision(1)?;
    let yp = xp.scale(mdp.inv(aug % p).unwrap()).sub(&GroupRingElem::one(table, mdp))?;
    let l = nilpotency_index(&yp);
    let k0 = log_cutoff(l, q, p);
    let big_k = if k0 == 0 { 0 } else { floor_log(k0, p) };
    let md = md0.with_precision(q + big_k + 1)?;
    let lifted = x.with_precision(md.precision())?;
    let omega = md.teichmuller(lifted.augmentation())?;
    let one = GroupRingElem::one(table, md);
    let y = lifted.scale(md.inv(omega).unwrap()).sub(&one)?;
    let mut scaled_log = GroupRingElem::zero(table, md);
    let mut ypow = one;
    for k in 1..=k0 {
        ypow = ypow.mul(&y)?;
        let vk = valuation(k, p);
        let unit = k / p.pow(vk);
        let c = md.mul(md.p_pow(big_k - vk), md.inv(unit).unwrap());
        let term = ypow.scale(c);
        scaled_log = if k % 2 == 1 { scaled_log.add(&term)? } else { scaled_log.sub(&term)? };
    }
    let ab = scaled_log.to_ab();
    let scaled_gamma = ab.p_minus_phi();
    let div = p.pow(big_k + 1);
    let mut coeffs = Vec::with_capacity(scaled_gamma.coeffs().len());
    for &c in scaled_gamma.coeffs() {
        if c % div != 0 {
            return Err(Error::IntegralityFailure(format!("coefficient {c} not divisible by p^{}", big_k + 1)));
        }
        coeffs.push(c / div);
    }
    Ok(AbQuotElem::from_coeffs(table, out_md, coeffs))
}

/// A class in `K_1(Z/p^m[G])`, held as a unit with its complete invariant
/// `(Γ mod p^{m-1}, image in Z/p^m[G^ab])`.
#[derive(Clone, Debug)]
pub struct K1Class {
    rep: GroupRingElem,
    gamma: AbQuotElem,
    ab: AbelianizedElem,
}

impl PartialEq for K1Class {
    fn eq(&self, other: &Self) -> bool {
        self.gamma == other.gamma && self.ab == other.ab
    }
}

impl K1Class {
    pub fn new(rep: GroupRingElem) -> Result<Self> {
        if !rep.is_unit() {
            return Err(Error::NotUnit);
        }
        let q = rep.modulus().precision().saturating_sub(1);
        let gamma = gamma_at(&rep, q)?;
        let ab = rep.to_abelianized();
        Ok(K1Class { rep, gamma, ab })
    }

    pub fn identity(table: &Arc<GroupTable>, md: Modulus) -> Self {
        Self::new(GroupRingElem::one(table, md)).unwrap()
    }

    pub fn group_element(table: &Arc<GroupTable>, md: Modulus, idx: usize) -> Self {
        Self::new(GroupRingElem::basis(table, md, idx)).unwrap()
    }

    /// The constant `teich(a)`.
    pub fn teichmuller(table: &Arc<GroupTable>, md: Modulus, a: u64) -> Result<Self> {
        Self::new(GroupRingElem::scalar(table, md, md.teichmuller(a)?))
    }

    pub fn representative(&self) -> &GroupRingElem {
        &self.rep
    }
    pub fn gamma(&self) -> &AbQuotElem {
        &self.gamma
    }
    pub fn ab_image(&self) -> &AbelianizedElem {
        &self.ab
    }
    pub fn table(&self) -> &Arc<GroupTable> {
        self.rep.table()
    }
    pub fn modulus(&self) -> Modulus {
        self.rep.modulus()
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        Self::new(self.rep.mul(&other.rep)?)
    }

    pub fn inverse(&self) -> Self {
        Self::new(self.rep.inv().unwrap()).unwrap()
    }

    pub fn pow(&self, e: u64) -> Self {
        Self::new(self.rep.pow(e)).unwrap()
    }

    pub fn reduce_mod_p(&self) -> OmegaK1Class {
        OmegaK1Class::new(self.rep.with_precision(1).unwrap()).unwrap()
    }
}

/// The class of `exp(p a)`.
pub fn exp_class(a: &GroupRingElem) -> K1Class {
    K1Class::new(a.exp_p()).expect("exp(pa) is a unit")
}

/// `exp(p a)` for a class-module element, put on class representatives.
pub fn exp_class_of_ab(a: &AbQuotElem, m: u32) -> Result<K1Class> {
    Ok(exp_class(&a.lift().with_precision(m)?))
}

/// `Φ̃(x) = exp(pΓ(x))^{-1} x^p`.
pub fn adams_tilde(x: &K1Class) -> Result<K1Class> {
    let m = x.modulus().precision();
    let e = exp_class_of_ab(x.gamma(), m)?;
    let xp = x.rep.pow(x.modulus().p());
    K1Class::new(e.rep.inv()?.mul(&xp)?)
}

/// Right coset representatives and the multiplication matrix of right
/// multiplication by `x` on the free module over `Z/p^m[H]`.
fn transfer_matrix(x: &GroupRingElem, sub_table: &Arc<GroupTable>, h: &Subgroup) -> Vec<Vec<GroupRingElem>> {
    let g = x.table();
    let md = x.modulus();
    let reps = crate::group_ring::right_coset_reps(g, h);
    let k = reps.len();
    let mut coset_of = vec![usize::MAX; g.order()];
    for (j, &t) in reps.iter().enumerate() {
        for &e in h.elements() {
            coset_of[g.mul(g.index_of(e).unwrap(), t)] = j;
        }
    }
    let mut coeffs = vec![vec![vec![0u64; sub_table.order()]; k]; k];
    for (i, &t) in reps.iter().enumerate() {
        for (gi, &c) in x.coeffs().iter().enumerate() {
            if c == 0 {
                continue;
            }
            let tg = g.mul(t, gi);
            let j = coset_of[tg];
            let hpart = g.mul(tg, g.inv(reps[j]));
            let hi = sub_table.index_of(g.element(hpart)).unwrap();
            coeffs[i][j][hi] = md.add(coeffs[i][j][hi], c);
        }
    }
    coeffs
        .into_iter()
        .map(|row| row.into_iter().map(|v| GroupRingElem::from_coeffs(sub_table, md, v)).collect())
        .collect()
}

/// Transfer of a unit along `H ≤ G`: the multiplication matrix is brought to
/// upper triangular form by elementary row operations (first unit pivot in each
/// column, added onto the diagonal row when needed) and the diagonal multiplied out.
pub fn transfer_unit(x: &GroupRingElem, sub_table: &Arc<GroupTable>, h: &Subgroup) -> Result<GroupRingElem> {
    let mut a = transfer_matrix(x, sub_table, h);
    let k = a.len();
    let md = x.modulus();
    let mut det = GroupRingElem::one(sub_table, md);
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
            let f = a[r][c].mul(&pinv)?;
            let pivot_row = a[c].clone();
            for (dst, s) in a[r].iter_mut().zip(&pivot_row) {
                *dst = dst.sub(&f.mul(s)?)?;
            }
        }
        det = det.mul(&a[c][c])?;
    }
    Ok(det)
}

/// The subgroup underlying a table.
pub fn table_subgroup(t: &GroupTable) -> Subgroup {
    let gens: Vec<_> = t.generators().iter().map(|&i| t.element(i)).collect();
    generate(t.parent(), &gens)
}

/// `φG` for the group of a table, with its own table and `d` where `[G : φG] = p^d`.
#[derive(Clone, Debug)]
pub struct NormContext {
    pub table: Arc<GroupTable>,
    pub phi_group: Subgroup,
    pub phi_table: Arc<GroupTable>,
    pub d: u32,
}

impl NormContext {
    pub fn new(table: &Arc<GroupTable>) -> Result<Self> {
        let whole = table_subgroup(table);
        let phi_group = phi_of(table.parent(), &whole)?;
        let phi_table = GroupTable::of_subgroup(table.parent(), &phi_group, format!("phi({})", table.label()));
        let d = floor_log(whole.order() / phi_group.order(), table.prime());
        Ok(NormContext { table: table.clone(), phi_group, phi_table, d })
    }

    /// `can ∘ transfer` along `φG`.
    pub fn norm(&self, x: &K1Class) -> Result<K1Class> {
        let t = transfer_unit(x.representative(), &self.phi_table, &self.phi_group)?;
        K1Class::new(t.include_into(&self.table))
    }

    /// `tr'` on the class module of `G`.
    pub fn tr_prime(&self, a: &AbQuotElem) -> AbQuotElem {
        a.tr_prime(&self.phi_group)
    }

    /// Plain trace to `Z/p^m[φG]`, included back into `Z/p^m[G]`.
    pub fn trace(&self, b: &GroupRingElem) -> GroupRingElem {
        tr_b_over_a(b, &self.phi_table, &self.phi_group).include_into(&self.table)
    }
}

pub fn norm_operator(x: &K1Class) -> Result<K1Class> {
    NormContext::new(x.table())?.norm(x)
}

/// Outcome of comparing `N_G(x)` with `Φ̃(x)^{p^{d-1}}` on invariants.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EigenComparison {
    pub holds: bool,
    /// valuation of the Γ difference (the precision when equal)
    pub gamma_agreement: u32,
    pub ab_agreement: u32,
}

pub fn eigenspace_compare(x: &K1Class, ctx: &NormContext) -> Result<EigenComparison> {
    let p = x.modulus().p();
    let n = ctx.norm(x)?;
    let t = adams_tilde(x)?;
    let (lhs_gamma, rhs_gamma, lhs_ab, rhs_ab) = if ctx.d == 0 {
        // trivial group: compare N(x)^p with Φ̃(x)
        (n.gamma().scale(p), t.gamma().clone(), n.ab_image().pow(p), t.ab_image().clone())
    } else {
        let e = p.pow(ctx.d - 1);
        (n.gamma().clone(), t.gamma().scale(e), n.ab_image().clone(), t.ab_image().pow(e))
    };
    let diff = lhs_gamma.sub(&rhs_gamma)?;
    let gamma_agreement = diff.valuation();
    let ab_agreement = lhs_ab.distance(&rhs_ab);
    let holds = diff.is_zero() && lhs_ab == rhs_ab;
    Ok(EigenComparison { holds, gamma_agreement, ab_agreement })
}

/// Whether `N_G(x) = Φ̃(x)^{p^{d-1}}` at working precision.
pub fn eigenspace_test(x: &K1Class) -> Result<bool> {
    Ok(eigenspace_compare(x, &NormContext::new(x.table())?)?.holds)
}

/// Largest Smith valuation of `p − Φ` on the class module, i.e. the exponent of its cokernel.
pub fn cokernel_exponent(table: &Arc<GroupTable>, p: u64) -> u32 {
    let n = table.classes().count();
    let mut prec = 1;
    while prec < 24 && Modulus::new(p, prec + 1).is_ok() {
        prec += 1;
    }
    let md = Modulus::new(p, prec).unwrap();
    let mut a = vec![vec![0u64; n]; n];
    for j in 0..n {
        let col = AbQuotElem::delta(table, md, j).p_minus_phi();
        for i in 0..n {
            a[i][j] = col.coeffs()[i];
        }
    }
    let v = smith_valuations(&md, &a);
    assert_eq!(v.len(), n, "p − Φ has full rank");
    v.into_iter().max().unwrap_or(0)
}

/// A class in `K_1(F_p[G])`. Two units agree when lifts have `Γ` values equal
/// modulo `(p − Φ)` (checked modulo `p^r`, `r` the cokernel exponent) and equal
/// images in `F_p[G^ab]`.
#[derive(Clone, Debug)]
pub struct OmegaK1Class {
    rep: GroupRingElem,
    gamma_class: AbQuotElem,
    ab: AbelianizedElem,
}

impl PartialEq for OmegaK1Class {
    fn eq(&self, other: &Self) -> bool {
        self.gamma_class == other.gamma_class && self.ab == other.ab
    }
}

impl OmegaK1Class {
    pub fn new(rep: GroupRingElem) -> Result<Self> {
        let md = rep.modulus();
        if md.precision() != 1 {
            return Err(Error::MixedContext("residue classes live over F_p".into()));
        }
        if !rep.is_unit() {
            return Err(Error::NotUnit);
        }
        let table = rep.table().clone();
        let r = cokernel_exponent(&table, md.p());
        let lifted = rep.with_precision(r + 1)?;
        let gamma = gamma_at(&lifted, r)?;
        let splitting = ClassSplitting::new(&table, md.with_precision(r)?);
        let gamma_class = splitting.normal_form(&gamma);
        let ab = rep.to_abelianized();
        Ok(OmegaK1Class { rep, gamma_class, ab })
    }

    pub fn representative(&self) -> &GroupRingElem {
        &self.rep
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        Self::new(self.rep.mul(&other.rep)?)
    }

    pub fn pow(&self, e: u64) -> Self {
        Self::new(self.rep.pow(e)).unwrap()
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::new(GroupRingElem::one(self.rep.table(), self.rep.modulus())).unwrap()
    }
}

/// `x · exp(pc)` with `c` chosen so that `Γ` of the result is the canonical
/// representative of `Γ(x)` modulo `(p − Φ)`, which is supported off the p-th power classes.
pub fn project_to_eigenspace(x: &K1Class) -> Result<K1Class> {
    let md = x.modulus();
    let m = md.precision();
    if m < 2 {
        return Ok(x.clone());
    }
    let table = x.table().clone();
    let r = cokernel_exponent(&table, md.p());
    let q = m - 1 + r;
    let lifted = x.representative().with_precision(q + 1)?;
    let gamma = gamma_at(&lifted, q)?;
    let splitting = ClassSplitting::new(&table, md.with_precision(q)?);
    let canonical = splitting.normal_form(&gamma);
    if canonical.coeffs().iter().enumerate().any(|(c, &v)| v != 0 && !splitting.is_off_image(c)) {
        return Err(Error::IntegralityFailure("canonical Γ keeps mass on p-th power classes".into()));
    }
    let target = canonical.sub(&gamma)?;
    let c = splitting
        .solve_p_minus_phi(&target)
        .ok_or_else(|| Error::DepthExhausted { needed: q + 1, available: q })?;
    x.mul(&exp_class_of_ab(&c, m)?)
}
