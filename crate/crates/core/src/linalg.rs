//! Linear algebra over the chain ring `Z/p^m`: Howell forms, canonical coset
//! representatives, and linear solves with valuation pivoting.

use crate::padic::Modulus;

fn axpy(md: &Modulus, dst: &mut [u64], f: u64, src: &[u64]) {
    if f == 0 {
        return;
    }
    for (d, &s) in dst.iter_mut().zip(src) {
        *d = md.sub(*d, md.mul(f, s));
    }
}

/// Row lattice in Howell form. Every vector of the span reduces to zero and
/// two vectors in the same coset reduce to the same residue.
#[derive(Clone, Debug)]
pub struct HowellForm {
    md: Modulus,
    ncols: usize,
    rows: Vec<(usize, u32, Vec<u64>)>,
}

impl HowellForm {
    pub fn new(md: Modulus, ncols: usize, generators: &[Vec<u64>]) -> Self {
        let p = md.p();
        let m = md.precision();
        let mut work: Vec<Vec<u64>> = generators.iter().filter(|r| r.iter().any(|&x| x != 0)).cloned().collect();
        let mut rows: Vec<(usize, u32, Vec<u64>)> = Vec::new();
        for col in 0..ncols {
            let best = work
                .iter()
                .enumerate()
                .filter(|(_, r)| r[col] != 0)
                .min_by_key(|(_, r)| md.val(r[col]))
                .map(|(i, _)| i);
            let Some(bi) = best else { continue };
            let mut piv = work.swap_remove(bi);
            let v = md.val(piv[col]);
            let pv = p.pow(v);
            let unit_inv = md.inv(piv[col] / pv).unwrap();
            for x in piv.iter_mut() {
                *x = md.mul(*x, unit_inv);
            }
            for r in work.iter_mut() {
                let f = r[col] / pv;
                axpy(&md, r, f, &piv);
            }
            for (_, _, r) in rows.iter_mut() {
                let f = r[col] / pv;
                axpy(&md, r, f, &piv);
            }
            work.retain(|r| r.iter().any(|&x| x != 0));
            if v > 0 {
                let f = p.pow(m - v);
                let extra: Vec<u64> = piv.iter().map(|&x| md.mul(x, f)).collect();
                if extra.iter().any(|&x| x != 0) {
                    work.push(extra);
                }
            }
            rows.push((col, v, piv));
        }
        HowellForm { md, ncols, rows }
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    /// Pivot columns with their pivot valuations.
    pub fn pivots(&self) -> Vec<(usize, u32)> {
        self.rows.iter().map(|(c, v, _)| (*c, *v)).collect()
    }

    pub fn reduce(&self, v: &[u64]) -> Vec<u64> {
        let mut out: Vec<u64> = v.iter().map(|&x| self.md.reduce(x)).collect();
        for (col, val, row) in &self.rows {
            let f = out[*col] / self.md.p().pow(*val);
            axpy(&self.md, &mut out, f, row);
        }
        out
    }

    pub fn contains(&self, v: &[u64]) -> bool {
        self.reduce(v).iter().all(|&x| x == 0)
    }
}

/// Result of diagonalising `U A Q = D`.
struct Diagonal {
    /// (pivot valuation, unit part inverse) per diagonal position
    pivots: Vec<(u32, u64)>,
    transformed_rhs: Vec<u64>,
    col_transform: Vec<Vec<u64>>,
}

fn diagonalize(md: &Modulus, a: &[Vec<u64>], b: &[u64]) -> Diagonal {
    let nr = a.len();
    let nc = if nr == 0 { 0 } else { a[0].len() };
    let mut a: Vec<Vec<u64>> = a.iter().map(|r| r.iter().map(|&x| md.reduce(x)).collect()).collect();
    let mut b: Vec<u64> = b.iter().map(|&x| md.reduce(x)).collect();
    // columns of Q stored as rows for cheap column operations
    let mut q: Vec<Vec<u64>> = (0..nc).map(|j| (0..nc).map(|i| u64::from(i == j)).collect()).collect();
    let mut pivots = Vec::new();
    for t in 0..nr.min(nc) {
        let mut best: Option<(u32, usize, usize)> = None;
        for (i, row) in a.iter().enumerate().skip(t) {
            for (j, &x) in row.iter().enumerate().skip(t) {
                if x != 0 {
                    let v = md.val(x);
                    if best.map_or(true, |(bv, _, _)| v < bv) {
                        best = Some((v, i, j));
                    }
                }
            }
        }
        let Some((v, i, j)) = best else { break };
        a.swap(t, i);
        b.swap(t, i);
        for row in a.iter_mut() {
            row.swap(t, j);
        }
        q.swap(t, j);
        let pv = md.p().pow(v);
        let uinv = md.inv(a[t][t] / pv).unwrap();
        for i in t + 1..nr {
            let f = md.mul(a[i][t] / pv, uinv);
            if f != 0 {
                let (top, rest) = a.split_at_mut(i);
                axpy(md, &mut rest[0], f, &top[t]);
                b[i] = md.sub(b[i], md.mul(f, b[t]));
            }
        }
        for j in t + 1..nc {
            let g = md.mul(a[t][j] / pv, uinv);
            if g != 0 {
                for row in a.iter_mut() {
                    row[j] = md.sub(row[j], md.mul(g, row[t]));
                }
                let (lo, hi) = q.split_at_mut(j);
                axpy(md, &mut hi[0], g, &lo[t]);
            }
        }
        pivots.push((v, uinv));
    }
    Diagonal { pivots, transformed_rhs: b, col_transform: q }
}

/// Solves `A x = b`; free variables are set to zero, so the answer is canonical.
pub fn solve(md: &Modulus, a: &[Vec<u64>], b: &[u64]) -> Option<Vec<u64>> {
    let nc = if a.is_empty() { 0 } else { a[0].len() };
    let d = diagonalize(md, a, b);
    let rank = d.pivots.len();
    if d.transformed_rhs[rank..].iter().any(|&x| x != 0) {
        return None;
    }
    let mut x = vec![0u64; nc];
    for (t, &(v, uinv)) in d.pivots.iter().enumerate() {
        let bt = d.transformed_rhs[t];
        if md.val(bt) < v {
            return None;
        }
        let yt = md.mul(bt / md.p().pow(v), uinv) % md.p().pow(md.precision() - v);
        if yt != 0 {
            for (xi, &qi) in x.iter_mut().zip(&d.col_transform[t]) {
                *xi = md.add(*xi, md.mul(yt, qi));
            }
        }
    }
    Some(x)
}

/// Valuations of the Smith diagonal (nonzero entries only).
pub fn smith_valuations(md: &Modulus, a: &[Vec<u64>]) -> Vec<u32> {
    let zeros = vec![0; a.len()];
    let mut v: Vec<u32> = diagonalize(md, a, &zeros).pivots.iter().map(|x| x.0).collect();
    v.sort_unstable();
    v
}

/// Rank of the reduction mod `p`.
pub fn rank_mod_p(md: &Modulus, a: &[Vec<u64>]) -> usize {
    smith_valuations(md, a).iter().filter(|&&v| v == 0).count()
}

pub fn mat_vec(md: &Modulus, a: &[Vec<u64>], x: &[u64]) -> Vec<u64> {
    a.iter().map(|row| row.iter().zip(x).fold(0, |acc, (&r, &xi)| md.add(acc, md.mul(r, xi)))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn howell_canonical() {
        let md = Modulus::new(3, 2).unwrap();
        // lattice spanned by (3, 1): contains (0, 3) after scaling by 3
        let h = HowellForm::new(md, 2, &[vec![3, 1]]);
        assert!(h.contains(&[0, 3]));
        assert!(h.contains(&[6, 2]));
        assert!(!h.contains(&[0, 1]));
        assert_eq!(h.reduce(&[4, 1]), h.reduce(&[1, 0]));
    }

    #[test]
    fn solve_small() {
        let md = Modulus::new(3, 3).unwrap();
        let a = vec![vec![3, 1], vec![0, 9]];
        let x = solve(&md, &a, &[4, 9]).unwrap();
        assert_eq!(mat_vec(&md, &a, &x), vec![4, 9]);
        assert!(solve(&md, &a, &[0, 1]).is_none());
        assert_eq!(smith_valuations(&md, &a), vec![0]);
        assert_eq!(smith_valuations(&md, &[vec![3, 0], vec![0, 1]]), vec![0, 1]);
    }
}
