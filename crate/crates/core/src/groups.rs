//! Finite p-groups: products of cyclic groups and lower unitriangular matrix
//! groups over `Z/p^n`.

use crate::error::{Error, Result};
use crate::padic::is_odd_prime;
use serde::{Deserialize, Serialize};
use std::collections::{HashMap, HashSet};
use std::fmt;
use std::sync::Arc;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GroupKind {
    /// `Z/p^{e_1} × … × Z/p^{e_r}`
    Cyclic { exponents: Vec<u32> },
    /// lower unitriangular `d × d` matrices over `Z/p^n`
    Unitriangular { d: usize, n: u32 },
}

/// Opaque element handle: a packed canonical code, ordered lexicographically.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GroupElement(pub u64);

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FiniteGroup {
    p: u64,
    kind: GroupKind,
    /// modulus of each packed coordinate, most significant first
    radices: Vec<u64>,
    /// strictly lower positions `(i, j)` for unitriangular groups, 0-based
    positions: Vec<(usize, usize)>,
    order: u64,
}

impl fmt::Display for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.label())
    }
}

impl FiniteGroup {
    fn build(p: u64, kind: GroupKind) -> Result<Self> {
        if !is_odd_prime(p) {
            return Err(Error::BadPrime(p));
        }
        let (radices, positions) = match &kind {
            GroupKind::Cyclic { exponents } => (exponents.iter().map(|&e| p.pow(e)).collect::<Vec<_>>(), vec![]),
            GroupKind::Unitriangular { d, n } => {
                let mut pos = Vec::new();
                for i in 1..*d {
                    for j in 0..i {
                        pos.push((i, j));
                    }
                }
                (vec![p.pow(*n); pos.len()], pos)
            }
        };
        let order = radices
            .iter()
            .try_fold(1u64, |acc, &r| acc.checked_mul(r))
            .filter(|&o| o < (1 << 40))
            .ok_or_else(|| Error::Parse(format!("group of kind {kind:?} is too large")))?;
        Ok(FiniteGroup { p, kind, radices, positions, order })
    }

    pub fn cyclic(p: u64, n: u32) -> Result<Self> {
        Self::build(p, GroupKind::Cyclic { exponents: vec![n] })
    }

    pub fn product(p: u64, exponents: &[u32]) -> Result<Self> {
        Self::build(p, GroupKind::Cyclic { exponents: exponents.to_vec() })
    }

    pub fn unitriangular(d: usize, p: u64, n: u32) -> Result<Self> {
        if d < 1 {
            return Err(Error::Parse(format!("U({d},{p},{n})")));
        }
        Self::build(p, GroupKind::Unitriangular { d, n })
    }

    /// Parses `"C(3,2)xC(3,1)"`, `"C(3,2)"`, `"U(4,3,2)"`; `"1"` style trivial groups as `"C(p,0)"`.
    pub fn parse(desc: &str) -> Result<Self> {
        let err = || Error::Parse(desc.to_string());
        let s: String = desc.chars().filter(|c| !c.is_whitespace()).collect();
        let args = |part: &str, prefix: char| -> Result<Vec<u64>> {
            let inner = part
                .strip_prefix(prefix)
                .and_then(|r| r.strip_prefix('('))
                .and_then(|r| r.strip_suffix(')'))
                .ok_or_else(err)?;
            inner.split(',').map(|x| x.parse::<u64>().map_err(|_| err())).collect()
        };
        if s.starts_with('U') {
            let a = args(&s, 'U')?;
            if a.len() != 3 {
                return Err(err());
            }
            return Self::unitriangular(a[0] as usize, a[1], a[2] as u32);
        }
        let mut p = None;
        let mut exps = Vec::new();
        for part in s.split(['x', '×']) {
            let a = args(part, 'C')?;
            if a.len() != 2 || p.is_some_and(|q| q != a[0]) {
                return Err(err());
            }
            p = Some(a[0]);
            exps.push(a[1] as u32);
        }
        Self::product(p.ok_or_else(err)?, &exps)
    }

    pub fn label(&self) -> String {
        match &self.kind {
            GroupKind::Cyclic { exponents } => {
                exponents.iter().map(|e| format!("C({},{})", self.p, e)).collect::<Vec<_>>().join("x")
            }
            GroupKind::Unitriangular { d, n } => format!("U({},{},{})", d, self.p, n),
        }
    }

    pub fn prime(&self) -> u64 {
        self.p
    }
    pub fn kind(&self) -> &GroupKind {
        &self.kind
    }
    pub fn order(&self) -> u64 {
        self.order
    }

    /// `e` with `|G| = p^e`.
    pub fn order_exponent(&self) -> u32 {
        crate::padic::floor_log(self.order, self.p)
    }

    pub fn is_abelian(&self) -> bool {
        match &self.kind {
            GroupKind::Cyclic { .. } => true,
            GroupKind::Unitriangular { d, n } => *d <= 2 || *n == 0,
        }
    }

    pub fn identity(&self) -> GroupElement {
        match &self.kind {
            GroupKind::Cyclic { .. } => GroupElement(0),
            GroupKind::Unitriangular { .. } => GroupElement(0),
        }
    }

    pub fn elements(&self) -> impl Iterator<Item = GroupElement> {
        (0..self.order).map(GroupElement)
    }

    pub fn coords(&self, g: GroupElement) -> Vec<u64> {
        let mut c = vec![0; self.radices.len()];
        let mut x = g.0;
        for (slot, &r) in c.iter_mut().zip(&self.radices).rev() {
            *slot = x % r;
            x /= r;
        }
        c
    }

    pub fn from_coords(&self, c: &[u64]) -> GroupElement {
        assert_eq!(c.len(), self.radices.len());
        GroupElement(c.iter().zip(&self.radices).fold(0, |acc, (&x, &r)| acc * r + x % r))
    }

    /// Full matrix of a unitriangular element, row-major.
    pub fn matrix(&self, g: GroupElement) -> Vec<u64> {
        let GroupKind::Unitriangular { d, .. } = self.kind else { panic!("not a matrix group") };
        let mut a = vec![0u64; d * d];
        for i in 0..d {
            a[i * d + i] = 1;
        }
        for (&(i, j), x) in self.positions.iter().zip(self.coords(g)) {
            a[i * d + j] = x;
        }
        a
    }

    pub fn from_matrix(&self, a: &[u64]) -> GroupElement {
        let GroupKind::Unitriangular { d, .. } = self.kind else { panic!("not a matrix group") };
        let c: Vec<u64> = self.positions.iter().map(|&(i, j)| a[i * d + j]).collect();
        self.from_coords(&c)
    }

    /// `E_{ij}(a)` with 1-based indices `i > j`.
    pub fn root_element(&self, i: usize, j: usize, a: u64) -> GroupElement {
        let GroupKind::Unitriangular { d, .. } = self.kind else { panic!("not a matrix group") };
        assert!(i > j && j >= 1 && i <= d);
        let mut m = self.matrix(self.identity());
        m[(i - 1) * d + (j - 1)] = a % self.radices[0];
        self.from_matrix(&m)
    }

    /// Entry `(i, j)` with 1-based indices.
    pub fn entry(&self, g: GroupElement, i: usize, j: usize) -> u64 {
        let GroupKind::Unitriangular { d, .. } = self.kind else { panic!("not a matrix group") };
        self.matrix(g)[(i - 1) * d + (j - 1)]
    }

    pub fn mul(&self, a: GroupElement, b: GroupElement) -> GroupElement {
        match &self.kind {
            GroupKind::Cyclic { .. } => {
                let (x, y) = (self.coords(a), self.coords(b));
                let c: Vec<u64> = x.iter().zip(&y).zip(&self.radices).map(|((&u, &v), &r)| (u + v) % r).collect();
                self.from_coords(&c)
            }
            GroupKind::Unitriangular { d, .. } => {
                let d = *d;
                let q = self.radices.first().copied().unwrap_or(1);
                let (x, y) = (self.matrix(a), self.matrix(b));
                let mut z = vec![0u64; d * d];
                for i in 0..d {
                    for j in 0..=i {
                        let mut s = 0u64;
                        for k in j..=i {
                            s = (s + x[i * d + k] * y[k * d + j]) % q;
                        }
                        z[i * d + j] = s;
                    }
                }
                self.from_matrix(&z)
            }
        }
    }

    pub fn inv(&self, a: GroupElement) -> GroupElement {
        match &self.kind {
            GroupKind::Cyclic { .. } => {
                let c: Vec<u64> = self.coords(a).iter().zip(&self.radices).map(|(&u, &r)| (r - u) % r).collect();
                self.from_coords(&c)
            }
            GroupKind::Unitriangular { d, .. } => {
                let d = *d;
                let q = self.radices.first().copied().unwrap_or(1);
                let x = self.matrix(a);
                let mut y = vec![0u64; d * d];
                for j in 0..d {
                    y[j * d + j] = 1;
                    for i in j + 1..d {
                        let mut s = 0u64;
                        for k in j..i {
                            s = (s + x[i * d + k] * y[k * d + j]) % q;
                        }
                        y[i * d + j] = (q - s) % q;
                    }
                }
                self.from_matrix(&y)
            }
        }
    }

    pub fn pow(&self, a: GroupElement, mut e: u64) -> GroupElement {
        let mut base = a;
        let mut acc = self.identity();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// The p-power map `g ↦ g^p`.
    pub fn phi_map(&self, g: GroupElement) -> GroupElement {
        self.pow(g, self.p)
    }

    /// `[x, y] = x y x^{-1} y^{-1}`.
    pub fn commutator(&self, x: GroupElement, y: GroupElement) -> GroupElement {
        let xy = self.mul(x, y);
        self.mul(self.mul(xy, self.inv(x)), self.inv(y))
    }

    /// `x g x^{-1}`.
    pub fn conj(&self, x: GroupElement, g: GroupElement) -> GroupElement {
        self.mul(self.mul(x, g), self.inv(x))
    }

    pub fn generators(&self) -> Vec<GroupElement> {
        match &self.kind {
            GroupKind::Cyclic { exponents } => (0..exponents.len())
                .filter(|&i| exponents[i] > 0)
                .map(|i| {
                    let mut c = vec![0; exponents.len()];
                    c[i] = 1;
                    self.from_coords(&c)
                })
                .collect(),
            GroupKind::Unitriangular { d, n } => {
                if *n == 0 {
                    return vec![];
                }
                (1..*d).map(|j| self.root_element(j + 1, j, 1)).collect()
            }
        }
    }

    pub fn describe(&self, g: GroupElement) -> String {
        let c = self.coords(g);
        match &self.kind {
            GroupKind::Cyclic { .. } if c.len() == 1 => format!("{}", c[0]),
            GroupKind::Cyclic { .. } => {
                format!("({})", c.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","))
            }
            GroupKind::Unitriangular { .. } => {
                format!("[{}]", c.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","))
            }
        }
    }
}

/// A subgroup given by its sorted element list and a generating set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subgroup {
    elements: Vec<GroupElement>,
    gens: Vec<GroupElement>,
}

impl Subgroup {
    pub fn whole(g: &FiniteGroup) -> Self {
        Subgroup { elements: g.elements().collect(), gens: g.generators() }
    }

    pub fn trivial(g: &FiniteGroup) -> Self {
        Subgroup { elements: vec![g.identity()], gens: vec![] }
    }

    pub fn elements(&self) -> &[GroupElement] {
        &self.elements
    }
    pub fn generators(&self) -> &[GroupElement] {
        &self.gens
    }
    pub fn order(&self) -> u64 {
        self.elements.len() as u64
    }
    pub fn contains(&self, g: GroupElement) -> bool {
        self.elements.binary_search(&g).is_ok()
    }
}

/// Subgroup generated by `gens`; redundant generators are dropped.
pub fn generate(g: &FiniteGroup, gens: &[GroupElement]) -> Subgroup {
    let mut kept: Vec<GroupElement> = Vec::new();
    let mut current: HashSet<GroupElement> = HashSet::from([g.identity()]);
    for &x in gens {
        if current.contains(&x) {
            continue;
        }
        kept.push(x);
        current = closure(g, &kept);
    }
    let mut elements: Vec<GroupElement> = current.into_iter().collect();
    elements.sort_unstable();
    Subgroup { elements, gens: kept }
}

fn closure(g: &FiniteGroup, gens: &[GroupElement]) -> HashSet<GroupElement> {
    let mut seen = HashSet::from([g.identity()]);
    let mut frontier = vec![g.identity()];
    while let Some(x) = frontier.pop() {
        for &s in gens {
            let y = g.mul(x, s);
            if seen.insert(y) {
                frontier.push(y);
            }
        }
    }
    seen
}

/// Smallest normal subgroup of `g` containing `seeds`.
pub fn normal_closure(g: &FiniteGroup, seeds: &[GroupElement]) -> Subgroup {
    let ggens = g.generators();
    let mut h = generate(g, seeds);
    loop {
        let extra: Vec<GroupElement> = h
            .gens
            .iter()
            .flat_map(|&x| ggens.iter().map(move |&s| (s, x)))
            .map(|(s, x)| g.conj(s, x))
            .filter(|&c| !h.contains(c))
            .collect();
        if extra.is_empty() {
            return h;
        }
        let mut gens = h.gens.clone();
        gens.extend(extra);
        h = generate(g, &gens);
    }
}

/// `[G, H]` for a normal subgroup `H`.
pub fn commutator_with(g: &FiniteGroup, h: &Subgroup) -> Subgroup {
    let seeds: Vec<GroupElement> =
        g.generators().iter().flat_map(|&x| h.gens.iter().map(move |&y| (x, y))).map(|(x, y)| g.commutator(x, y)).collect();
    normal_closure(g, &seeds)
}

/// Lower central series `G^{(0)} = G, G^{(k)} = [G, G^{(k-1)}]`, ending at the trivial group.
pub fn center_series(g: &FiniteGroup) -> Vec<Subgroup> {
    let mut series = vec![Subgroup::whole(g)];
    loop {
        let last = series.last().unwrap();
        if last.order() == 1 {
            return series;
        }
        let next = commutator_with(g, last);
        if next.order() == last.order() {
            return series;
        }
        series.push(next);
    }
}

/// The set `{h^p : h ∈ H}` as a subgroup, checking that it is closed.
pub fn phi_of(g: &FiniteGroup, h: &Subgroup) -> Result<Subgroup> {
    let powers: HashSet<GroupElement> = h.elements.iter().map(|&x| g.phi_map(x)).collect();
    let mut sorted: Vec<GroupElement> = powers.iter().copied().collect();
    sorted.sort_unstable();
    let sub = generate(g, &sorted);
    if sub.order() as usize != powers.len() {
        return Err(Error::HypothesisPViolated(format!(
            "{}: {} p-th powers generate a subgroup of order {}",
            g.label(),
            powers.len(),
            sub.order()
        )));
    }
    Ok(sub)
}

pub fn phi_subgroup(g: &FiniteGroup) -> Result<Subgroup> {
    phi_of(g, &Subgroup::whole(g))
}

/// `G ⊃ φG ⊃ φ²G ⊃ …`, at most `k` steps, stopping at the trivial group.
pub fn descending_phi_chain(g: &FiniteGroup, k: usize) -> Result<Vec<Subgroup>> {
    let mut chain = vec![Subgroup::whole(g)];
    for _ in 0..k {
        let last = chain.last().unwrap();
        if last.order() == 1 {
            break;
        }
        let next = phi_of(g, last)?;
        chain.push(next);
    }
    Ok(chain)
}

/// `G/[G,G]` realised as a product of cyclic groups, with the quotient map.
pub struct Abelianization {
    pub quotient: FiniteGroup,
    source: FiniteGroup,
}

impl Abelianization {
    pub fn apply(&self, g: GroupElement) -> GroupElement {
        match self.source.kind() {
            GroupKind::Cyclic { .. } => g,
            GroupKind::Unitriangular { d, .. } => {
                let c: Vec<u64> = (1..*d).map(|j| self.source.entry(g, j + 1, j)).collect();
                self.quotient.from_coords(&c)
            }
        }
    }
}

pub fn abelianization(g: &FiniteGroup) -> Abelianization {
    let quotient = match g.kind() {
        GroupKind::Cyclic { .. } => g.clone(),
        GroupKind::Unitriangular { d, n } => FiniteGroup::product(g.prime(), &vec![*n; d - 1]).unwrap(),
    };
    Abelianization { quotient, source: g.clone() }
}

/// Conjugacy classes of an enumerated group.
#[derive(Clone, Debug)]
pub struct ConjClassTable {
    class_of: Vec<usize>,
    reps: Vec<usize>,
    members: Vec<Vec<usize>>,
}

impl ConjClassTable {
    pub fn count(&self) -> usize {
        self.reps.len()
    }
    /// Class of the element with the given table index.
    pub fn class_of(&self, idx: usize) -> usize {
        self.class_of[idx]
    }
    /// Table index of the class representative (the smallest element of the class).
    pub fn representative(&self, class: usize) -> usize {
        self.reps[class]
    }
    pub fn members(&self, class: usize) -> &[usize] {
        &self.members[class]
    }
}

/// A finite group (or a subgroup of one) with its elements indexed `0..order`
/// and the tables needed for group-ring arithmetic.
#[derive(Debug)]
pub struct GroupTable {
    parent: FiniteGroup,
    label: String,
    elems: Vec<GroupElement>,
    index: HashMap<GroupElement, usize>,
    mul: Vec<u32>,
    inv: Vec<u32>,
    phi: Vec<u32>,
    classes: ConjClassTable,
    class_phi: Vec<usize>,
    ab_of: Vec<usize>,
    ab_mul: Vec<u32>,
    ab_count: usize,
    gens: Vec<usize>,
    abelian: bool,
}

pub const MAX_TABLE_ORDER: usize = 1024;

impl GroupTable {
    pub fn of_group(g: &FiniteGroup) -> Arc<Self> {
        Self::of_subgroup(g, &Subgroup::whole(g), g.label())
    }

    pub fn of_subgroup(parent: &FiniteGroup, h: &Subgroup, label: String) -> Arc<Self> {
        let elems = h.elements().to_vec();
        let n = elems.len();
        assert!(n <= MAX_TABLE_ORDER, "group table of order {n} is too large");
        let index: HashMap<GroupElement, usize> = elems.iter().enumerate().map(|(i, &e)| (e, i)).collect();
        let mut mul = vec![0u32; n * n];
        for i in 0..n {
            for j in 0..n {
                mul[i * n + j] = index[&parent.mul(elems[i], elems[j])] as u32;
            }
        }
        let inv: Vec<u32> = elems.iter().map(|&e| index[&parent.inv(e)] as u32).collect();
        let phi: Vec<u32> = elems.iter().map(|&e| index[&parent.phi_map(e)] as u32).collect();
        let gens: Vec<usize> = h.generators().iter().map(|g| index[g]).collect();
        let conj = |x: usize, y: usize| mul[mul[x * n + y] as usize * n + inv[x] as usize] as usize;
        // classes: orbits under conjugation by generators, in increasing element order
        let mut class_of = vec![usize::MAX; n];
        let mut reps = Vec::new();
        let mut members = Vec::new();
        for start in 0..n {
            if class_of[start] != usize::MAX {
                continue;
            }
            let id = reps.len();
            let mut orbit = vec![start];
            class_of[start] = id;
            let mut k = 0;
            while k < orbit.len() {
                let x = orbit[k];
                for &s in &gens {
                    let y = conj(s, x);
                    if class_of[y] == usize::MAX {
                        class_of[y] = id;
                        orbit.push(y);
                    }
                }
                k += 1;
            }
            orbit.sort_unstable();
            reps.push(orbit[0]);
            members.push(orbit);
        }
        let class_phi: Vec<usize> = reps.iter().map(|&r| class_of[phi[r] as usize]).collect();
        let abelian = (0..n).all(|i| gens.iter().all(|&s| mul[i * n + s] == mul[s * n + i]));
        // abelianisation: cosets of the commutator subgroup
        let mut comm: Vec<usize> = vec![0];
        {
            let mut inside = vec![false; n];
            inside[0] = true;
            let identity = index[&parent.identity()];
            debug_assert_eq!(identity, 0);
            let mut is_seed = vec![false; n];
            for a in 0..n {
                for b in 0..n {
                    let c = mul[mul[mul[a * n + b] as usize * n + inv[a] as usize] as usize * n + inv[b] as usize] as usize;
                    is_seed[c] = true;
                }
            }
            let seeds: Vec<usize> = (0..n).filter(|&c| is_seed[c] && c != 0).collect();
            // subgroup generated by all commutators
            let mut frontier = vec![0usize];
            while let Some(x) = frontier.pop() {
                for &s in &seeds {
                    let y = mul[x * n + s] as usize;
                    if !inside[y] {
                        inside[y] = true;
                        comm.push(y);
                        frontier.push(y);
                    }
                }
            }
        }
        let mut ab_of = vec![usize::MAX; n];
        let mut ab_reps = Vec::new();
        for x in 0..n {
            if ab_of[x] != usize::MAX {
                continue;
            }
            let id = ab_reps.len();
            ab_reps.push(x);
            for &c in &comm {
                ab_of[mul[x * n + c] as usize] = id;
            }
        }
        let ab_count = ab_reps.len();
        let mut ab_mul = vec![0u32; ab_count * ab_count];
        for i in 0..ab_count {
            for j in 0..ab_count {
                ab_mul[i * ab_count + j] = ab_of[mul[ab_reps[i] * n + ab_reps[j]] as usize] as u32;
            }
        }
        Arc::new(GroupTable {
            parent: parent.clone(),
            label,
            elems,
            index,
            mul,
            inv,
            phi,
            classes: ConjClassTable { class_of, reps, members },
            class_phi,
            ab_of,
            ab_mul,
            ab_count,
            gens,
            abelian,
        })
    }

    pub fn parent(&self) -> &FiniteGroup {
        &self.parent
    }
    pub fn label(&self) -> &str {
        &self.label
    }
    pub fn prime(&self) -> u64 {
        self.parent.prime()
    }
    pub fn order(&self) -> usize {
        self.elems.len()
    }
    pub fn is_abelian(&self) -> bool {
        self.abelian
    }
    pub fn element(&self, i: usize) -> GroupElement {
        self.elems[i]
    }
    pub fn elements(&self) -> &[GroupElement] {
        &self.elems
    }
    pub fn index_of(&self, g: GroupElement) -> Option<usize> {
        self.index.get(&g).copied()
    }
    pub fn generators(&self) -> &[usize] {
        &self.gens
    }
    #[inline]
    pub fn mul(&self, i: usize, j: usize) -> usize {
        self.mul[i * self.elems.len() + j] as usize
    }
    pub fn inv(&self, i: usize) -> usize {
        self.inv[i] as usize
    }
    pub fn phi(&self, i: usize) -> usize {
        self.phi[i] as usize
    }
    pub fn classes(&self) -> &ConjClassTable {
        &self.classes
    }
    /// Class of `g^p` for `g` in the given class.
    pub fn class_phi(&self, class: usize) -> usize {
        self.class_phi[class]
    }
    pub fn ab_count(&self) -> usize {
        self.ab_count
    }
    pub fn ab_of(&self, i: usize) -> usize {
        self.ab_of[i]
    }
    pub fn ab_mul(&self, i: usize, j: usize) -> usize {
        self.ab_mul[i * self.ab_count + j] as usize
    }
    pub fn describe(&self, i: usize) -> String {
        self.parent.describe(self.elems[i])
    }
    pub fn same_group(&self, other: &GroupTable) -> bool {
        std::ptr::eq(self, other) || (self.label == other.label && self.elems == other.elems)
    }

    /// Largest `k` with the class in `Ψ^k(X)`; `None` when it lies in every iterate.
    pub fn class_depth(&self, class: usize) -> Option<u32> {
        let mut level: Vec<bool> = vec![true; self.classes.count()];
        let mut depth = 0;
        loop {
            let mut next = vec![false; level.len()];
            for (c, &inside) in level.iter().enumerate() {
                if inside {
                    next[self.class_phi[c]] = true;
                }
            }
            if next == level {
                return None;
            }
            if !next[class] {
                return Some(depth);
            }
            level = next;
            depth += 1;
        }
    }

    /// Classes that are p-th powers of some class.
    pub fn phi_image_classes(&self) -> Vec<bool> {
        let mut hit = vec![false; self.classes.count()];
        for c in 0..self.classes.count() {
            hit[self.class_phi[c]] = true;
        }
        hit
    }
}
