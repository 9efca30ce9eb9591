//! Lower unitriangular groups over `Z/p^n`: root-group relations, the lower
//! central series, the graded commutator pairing between consecutive layers
//! and its kernel, and the commutator identities behind the wedge rearrangement.

use crate::error::{Error, Result};
use crate::groups::{center_series, normal_closure, FiniteGroup, GroupElement, GroupKind, Subgroup};
use crate::linalg::rank_mod_p;
use crate::padic::Modulus;
use serde::{Deserialize, Serialize};

fn dims(g: &FiniteGroup) -> Result<(usize, u32)> {
    match g.kind() {
        GroupKind::Unitriangular { d, n } => Ok((*d, *n)),
        _ => Err(Error::LayerMismatch(format!("{} is not a unitriangular group", g.label()))),
    }
}

/// Element of `G^{(m-1)}/G^{(m)} ⊗ G/G^{(1)}` on the basis
/// `Ē_{m+i,i} ⊗ Ē_{k+1,k}`, `1 ≤ i ≤ d−m`, `1 ≤ k ≤ d−1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GradedTensor {
    pub d: usize,
    pub layer: usize,
    pub modulus: u64,
    /// row-major over `(i, k)`
    pub coeffs: Vec<u64>,
}

/// Element of `G^{(m)}/G^{(m+1)}` on the basis `Ē_{m+1+i,i}`, `1 ≤ i ≤ d−m−1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GradedElem {
    pub d: usize,
    pub layer: usize,
    pub modulus: u64,
    pub coeffs: Vec<u64>,
}

impl GradedTensor {
    pub fn zero(d: usize, layer: usize, modulus: u64) -> Self {
        GradedTensor { d, layer, modulus, coeffs: vec![0; (d - layer) * (d - 1)] }
    }

    pub fn basis(d: usize, layer: usize, modulus: u64, i: usize, k: usize) -> Self {
        let mut t = Self::zero(d, layer, modulus);
        t.coeffs[Self::slot(d, i, k)] = 1 % modulus;
        t
    }

    fn slot(d: usize, i: usize, k: usize) -> usize {
        (i - 1) * (d - 1) + (k - 1)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if (self.d, self.layer, self.modulus) != (other.d, other.layer, other.modulus) {
            return Err(Error::LayerMismatch("tensors on different layers".into()));
        }
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| (a + b) % self.modulus).collect();
        Ok(GradedTensor { coeffs, ..self.clone() })
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    /// Nonzero `((i, k), coefficient)` terms.
    pub fn terms(&self) -> Vec<((usize, usize), u64)> {
        let w = self.d - 1;
        self.coeffs.iter().enumerate().filter(|(_, &c)| c != 0).map(|(s, &c)| ((s / w + 1, s % w + 1), c)).collect()
    }
}

impl GradedElem {
    pub fn zero(d: usize, layer: usize, modulus: u64) -> Self {
        GradedElem { d, layer, modulus, coeffs: vec![0; d - layer - 1] }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }
}

/// Image of `Ē_{m+i,i} ⊗ Ē_{k+1,k}`: `(target index, ±1)` or nothing.
pub fn pairing_on_basis(layer: usize, i: usize, k: usize) -> Option<(usize, i64)> {
    let m = layer;
    if i == k + 1 {
        // Ē_{m+i,i-1}
        Some((i - 1, 1))
    } else if m + i == k {
        // −Ē_{m+i+1,i}
        Some((i, -1))
    } else {
        None
    }
}

/// `g G^{(m)} ⊗ h G^{(1)} ↦ [g, h] G^{(m+1)}`, extended bilinearly.
pub fn delta_gamma(t: &GradedTensor) -> Result<GradedElem> {
    let (d, m, q) = (t.d, t.layer, t.modulus);
    if m == 0 || m + 2 > d {
        return Err(Error::LayerMismatch(format!("layer {m} outside 1..={}", d.saturating_sub(2))));
    }
    let mut out = GradedElem::zero(d, m, q);
    for ((i, k), c) in t.terms() {
        if let Some((target, sign)) = pairing_on_basis(m, i, k) {
            let v = if sign > 0 { c } else { (q - c) % q };
            out.coeffs[target - 1] = (out.coeffs[target - 1] + v) % q;
        }
    }
    Ok(out)
}

/// The same pairing read off honest matrix commutators in `G(p^n)`.
pub fn commutator_pairing(g: &FiniteGroup, layer: usize, i: usize, k: usize) -> Result<GradedElem> {
    let (d, n) = dims(g)?;
    let q = g.prime().pow(n);
    let m = layer;
    let a = g.root_element(m + i, i, 1);
    let b = g.root_element(k + 1, k, 1);
    let c = g.commutator(a, b);
    for r in 2..=d {
        for s in 1..r {
            if r - s <= m && g.entry(c, r, s) != 0 {
                return Err(Error::LayerMismatch(format!("commutator leaves layer {m} at ({r},{s})")));
            }
        }
    }
    let mut out = GradedElem::zero(d, m, q);
    for j in 1..d - m {
        out.coeffs[j - 1] = g.entry(c, m + 1 + j, j);
    }
    Ok(out)
}

/// The two generator families of the kernel of the pairing on layer `m`.
pub fn kernel_generators(d: usize, p: u64, n: u32, layer: usize) -> Vec<GradedTensor> {
    let m = layer;
    let q = p.pow(n);
    let mut out = Vec::new();
    for i in 1..d - m {
        let first = GradedTensor::basis(d, m, q, i + 1, i);
        let second = GradedTensor::basis(d, m, q, i, m + i);
        out.push(first.add(&second).unwrap());
    }
    for i in 1..=d - m {
        for k in 1..d {
            if k + 1 != i && k != m + i {
                out.push(GradedTensor::basis(d, m, q, i, k));
            }
        }
    }
    out
}

/// Number of basis pairs minus the rank of the pairing's image.
pub fn expected_kernel_rank(d: usize, layer: usize) -> usize {
    (d - layer) * (d - 1) - (d - layer - 1)
}

/// Rank mod `p` of a family of tensors.
pub fn family_rank(p: u64, n: u32, family: &[GradedTensor]) -> usize {
    let md = Modulus::new(p, n).unwrap();
    let rows: Vec<Vec<u64>> = family.iter().map(|t| t.coeffs.clone()).collect();
    if rows.is_empty() {
        return 0;
    }
    rank_mod_p(&md, &rows)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WedgeCheck {
    pub holds: bool,
    /// the case `m = 1`, where the element is already zero
    pub vacuous: bool,
    pub failures: Vec<String>,
}

/// Checks, inside `G(p^n)`, the commutator identities used to rewrite
/// `A∧B + C∧D` as `AC∧BD − A∧D − C∧B` with every pair commuting.
pub fn wedge_identity_check(g: &FiniteGroup, layer: usize, i: usize) -> Result<WedgeCheck> {
    let (d, _) = dims(g)?;
    let m = layer;
    if m == 0 || m + 2 > d || i == 0 || i + m + 1 > d {
        return Err(Error::LayerMismatch(format!("no wedge element for layer {m}, index {i} in dimension {d}")));
    }
    if m == 1 {
        return Ok(WedgeCheck { holds: true, vacuous: true, failures: vec![] });
    }
    let a = g.root_element(m + i + 1, i + 1, 1);
    let b = g.root_element(i + 1, i, 1);
    let c = g.root_element(m + i, i, 1);
    let dd = g.root_element(m + i + 1, m + i, 1);
    let e = g.root_element(m + i + 1, i, 1);
    let one = g.identity();
    let comm = |x, y| g.commutator(x, y);
    let mut failures = Vec::new();
    let mut expect = |label: &str, got: GroupElement, want: GroupElement| {
        if got != want {
            failures.push(format!("{label}: got {}, want {}", g.describe(got), g.describe(want)));
        }
    };
    expect("[A,B] = E", comm(a, b), e);
    expect("[C,D] = E^-1", comm(c, dd), g.inv(e));
    for (label, x, y) in [
        ("[A,C]", a, c),
        ("[A,D]", a, dd),
        ("[B,C]", b, c),
        ("[B,D]", b, dd),
        ("[E,A]", e, a),
        ("[E,B]", e, b),
        ("[E,C]", e, c),
        ("[E,D]", e, dd),
    ] {
        expect(label, comm(x, y), one);
    }
    let bd = g.mul(b, dd);
    let ac = g.mul(a, c);
    expect("[A,BD] = E", comm(a, bd), e);
    expect("[C,BD] = E^-1", comm(c, bd), g.inv(e));
    expect("[AC,BD] = 1", comm(ac, bd), one);
    expect("AC and BD commute", comm(ac, bd), one);
    expect("A and D commute", comm(a, dd), one);
    expect("C and B commute", comm(c, b), one);
    Ok(WedgeCheck { holds: failures.is_empty(), vacuous: false, failures })
}

/// Failures of `E_ij(a)E_ij(b) = E_ij(a+b)` and the three commutation rules, over all roots and all `a, b`.
pub fn relation_failures(g: &FiniteGroup) -> Result<Vec<String>> {
    let (d, n) = dims(g)?;
    let q = g.prime().pow(n);
    let roots: Vec<(usize, usize)> = (2..=d).flat_map(|i| (1..i).map(move |j| (i, j))).collect();
    let mut out = Vec::new();
    for &(i, j) in &roots {
        for a in 0..q {
            for b in 0..q {
                if g.mul(g.root_element(i, j, a), g.root_element(i, j, b)) != g.root_element(i, j, a + b) {
                    out.push(format!("E_{i}{j}({a})E_{i}{j}({b})"));
                }
            }
        }
    }
    for &(i, j) in &roots {
        for &(k, l) in &roots {
            for a in 0..q {
                for b in 0..q {
                    let c = g.commutator(g.root_element(i, j, a), g.root_element(k, l, b));
                    let want = if j == k {
                        g.root_element(i, l, a * b)
                    } else if l == i {
                        g.root_element(k, j, (q - a * b % q) % q)
                    } else if i != l && j != k {
                        g.identity()
                    } else {
                        continue;
                    };
                    if c != want {
                        out.push(format!("[E_{i}{j}({a}), E_{k}{l}({b})]"));
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Elements whose entries vanish on every root of gap at most `layer`.
pub fn in_root_layer(g: &FiniteGroup, x: GroupElement, layer: usize) -> bool {
    let GroupKind::Unitriangular { d, .. } = g.kind() else { return false };
    (2..=*d).all(|r| (1..r).all(|s| r - s > layer || g.entry(x, r, s) == 0))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CentralSeriesCheck {
    pub layer: usize,
    pub root_product: bool,
    pub generated_by_roots: bool,
    pub central_quotient: bool,
}

/// Properties (a)–(c) of the lower central series, by brute force.
pub fn central_series_checks(g: &FiniteGroup) -> Result<Vec<CentralSeriesCheck>> {
    let (d, _) = dims(g)?;
    let mut series: Vec<Subgroup> = center_series(g);
    while series.len() < d {
        series.push(Subgroup::trivial(g));
    }
    let all: Vec<GroupElement> = g.elements().collect();
    let gens = g.generators();
    let mut out = Vec::new();
    for m in 0..d {
        let layer = &series[m];
        let expected_order = g.prime().pow(
            ((m + 1)..d).map(|gap| (d - gap) as u32).sum::<u32>() * match g.kind() {
                GroupKind::Unitriangular { n, .. } => *n,
                _ => unreachable!(),
            },
        );
        let root_product = layer.order() == expected_order && layer.elements().iter().all(|&x| in_root_layer(g, x, m));
        let seeds: Vec<GroupElement> = (1..d - m).map(|j| g.root_element(m + 1 + j, j, 1)).collect();
        let generated_by_roots = normal_closure(g, &seeds).elements() == layer.elements();
        let central_quotient = if m == 0 {
            true
        } else {
            let below = &series[m];
            let above = &series[m - 1];
            let mut ok = true;
            for &x in &all {
                let central = gens.iter().all(|&s| below.contains(g.commutator(x, s)));
                if central != above.contains(x) {
                    ok = false;
                    break;
                }
            }
            ok
        };
        out.push(CentralSeriesCheck { layer: m, root_product, generated_by_roots, central_quotient });
    }
    Ok(out)
}
