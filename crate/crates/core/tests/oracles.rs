//! Independent oracles for the derived example values. Each oracle is
//! computed separately from the library code path and its output is frozen.

use iwasawa_k1::characters::*;
use iwasawa_k1::class_space::*;
use iwasawa_k1::coleman::*;
use iwasawa_k1::cyclotomic::CyclotomicElem;
use iwasawa_k1::group_ring::{AbQuotElem, GroupRingElem};
use iwasawa_k1::groups::{generate, FiniteGroup, GroupTable};
use iwasawa_k1::k1::*;
use iwasawa_k1::padic::Modulus;
use iwasawa_k1::unipotent::*;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::HashSet;
use std::sync::Arc;

fn table(desc: &str) -> Arc<GroupTable> {
    GroupTable::of_group(&FiniteGroup::parse(desc).unwrap())
}

/// Residue of a p-integral rational modulo `p^m`.
fn rational_mod(x: &BigRational, p: u64, m: u32) -> u64 {
    let q = BigInt::from(p).pow(m);
    let den = x.denom().clone();
    assert!(!(&den % BigInt::from(p)).is_zero() || den.is_one(), "not p-integral: {x}");
    let num = ((x.numer() % &q) + &q) % &q;
    let den = ((den % &q) + &q) % &q;
    let inv = den.modpow(&(BigInt::from(p).pow(m - 1) * (p - 1) - 1), &q);
    ((num * inv) % &q).to_u64().unwrap()
}

fn rational_exp_p(a: i64, p: u64, m: u32) -> u64 {
    let x = BigRational::from_integer(BigInt::from(p as i64 * a));
    let mut term = BigRational::one();
    let mut sum = BigRational::one();
    for k in 1..(4 * m as i64 + 8) {
        term = term * &x / BigRational::from_integer(BigInt::from(k));
        sum += &term;
    }
    rational_mod(&sum, p, m)
}

/// `log(1 + x)` for `x ≡ 0 mod p`, as an exact rational partial sum.
fn rational_log(u: i64, terms: i64) -> BigRational {
    let x = BigRational::from_integer(BigInt::from(u - 1));
    let mut pw = BigRational::one();
    let mut sum = BigRational::zero();
    for k in 1..terms {
        pw = pw * &x;
        let t = &pw / BigRational::from_integer(BigInt::from(k));
        sum = if k % 2 == 1 { sum + t } else { sum - t };
    }
    sum
}

fn teich_fixpoint(a: u64, p: u64, m: u32) -> u64 {
    let q = p.pow(m);
    let mut x = a % q;
    loop {
        let mut y = 1u64;
        for _ in 0..p {
            y = y * x % q;
        }
        if y == x {
            return x;
        }
        x = y;
    }
}

#[test]
fn exp_log_teichmuller_against_rational_series() {
    assert_eq!(rational_exp_p(1, 3, 2), 4);
    assert_eq!(Modulus::new(3, 2).unwrap().exp_p(1), 4);

    let log4 = rational_log(4, 40);
    assert_eq!(rational_mod(&log4, 3, 3), 21);
    assert_eq!(Modulus::new(3, 3).unwrap().log_1p(4).unwrap(), 21);

    assert_eq!(teich_fixpoint(2, 5, 2), 7);
    assert_eq!(Modulus::new(5, 2).unwrap().teichmuller(2).unwrap(), 7);
    assert_eq!(Modulus::new(3, 4).unwrap().teichmuller(2).unwrap(), 80);

    let mut rng = ChaCha8Rng::seed_from_u64(100);
    for p in [3u64, 5, 7] {
        for m in 2..=5 {
            let md = Modulus::new(p, m).unwrap();
            for _ in 0..10 {
                let a = rng.gen_range(0..md.modulus());
                assert_eq!(md.exp_p(a), rational_exp_p(a as i64, p, m), "exp p={p} m={m} a={a}");
                let u = 1 + p * rng.gen_range(0..md.modulus() / p);
                let oracle = rational_mod(&rational_log(u as i64, 6 * m as i64 + 10), p, m);
                assert_eq!(md.log_1p(u).unwrap(), oracle, "log p={p} m={m} u={u}");
                let b = rng.gen_range(1..p);
                assert_eq!(md.teichmuller(b).unwrap(), teich_fixpoint(b, p, m));
            }
        }
    }
}

#[test]
fn gamma_on_the_trivial_group_against_rational_series() {
    // Γ(4) = (1 − 1/3) log 4 = 2·(log 4)/3
    let g = BigRational::new(BigInt::from(2), BigInt::from(3)) * rational_log(4, 60);
    assert_eq!(rational_mod(&g, 3, 2), 5);
    let t = table("C(3,0)");
    let x = K1Class::new(GroupRingElem::scalar(&t, Modulus::new(3, 3).unwrap(), 4)).unwrap();
    assert_eq!(x.gamma().coeffs(), &[5]);

    let mut rng = ChaCha8Rng::seed_from_u64(101);
    for p in [3u64, 5] {
        let md = Modulus::new(p, 4).unwrap();
        for _ in 0..5 {
            let u = rng.gen_range(1..md.modulus());
            if u % p == 0 {
                continue;
            }
            // Γ kills the Teichmüller part: Γ(u) = (1 − 1/p) log(u/ω(u))
            let one_unit = md.mul(u, md.inv(md.teichmuller(u).unwrap()).unwrap());
            let big = Modulus::new(p, 6).unwrap();
            let lifted = big.mul(u, big.inv(big.teichmuller(u).unwrap()).unwrap());
            assert_eq!(lifted % md.modulus(), one_unit);
            let v = BigRational::new(BigInt::from(p as i64 - 1), BigInt::from(p as i64)) * rational_log(lifted as i64, 60);
            let x = K1Class::new(GroupRingElem::scalar(&t, md, u)).unwrap();
            assert_eq!(x.gamma().coeffs(), &[rational_mod(&v, p, 3)]);
        }
    }
}

#[test]
fn cyclotomic_conjugate_sums_and_products() {
    let md = Modulus::new(3, 4).unwrap();
    let conj = |level: u32| (1..3u64.pow(level)).filter(|k| k % 3 != 0).collect::<Vec<_>>();
    let brute_trace = conj(2).iter().fold(CyclotomicElem::zero(md, 2), |acc, &k| acc.add(&CyclotomicElem::root_power(md, 2, k)).unwrap());
    assert!(brute_trace.is_zero());
    assert!(CyclotomicElem::epsilon(md, 2).trace_to(0).is_zero());
    let brute_norm = conj(1).iter().fold(CyclotomicElem::one(md, 1), |acc, &k| acc.mul(&CyclotomicElem::root_power(md, 1, k)).unwrap());
    assert_eq!(brute_norm, CyclotomicElem::one(md, 1));
    assert_eq!(CyclotomicElem::epsilon(md, 1).norm_to(0), CyclotomicElem::one(md, 0));
}

#[test]
fn heisenberg_by_enumeration() {
    let g = FiniteGroup::unitriangular(3, 3, 1).unwrap();
    let all: Vec<_> = g.elements().collect();
    let mut seen = HashSet::new();
    let mut classes = 0;
    for &x in &all {
        if seen.contains(&x) {
            continue;
        }
        classes += 1;
        for &y in &all {
            seen.insert(g.mul(g.mul(y, x), g.inv(y)));
        }
    }
    assert_eq!(classes, 11);
    assert_eq!(table("U(3,3,1)").classes().count(), 11);
    assert!(all.iter().all(|&x| g.pow(x, 3) == g.identity()));
    let comms: Vec<_> = all.iter().flat_map(|&x| all.iter().map(move |&y| (x, y))).map(|(x, y)| g.commutator(x, y)).collect();
    let derived = generate(&g, &comms);
    assert_eq!(g.order() / derived.order(), 9);
    assert_eq!(table("U(3,3,1)").ab_count(), 9);
}

#[test]
fn class_space_forward_maps() {
    let md = Modulus::new(3, 2).unwrap();
    let id = DepthFunction::from_fn(md, 1, 2, |x| x[0]);
    let pulled = psi_pullback(&id).unwrap();
    assert_eq!(pulled.depth(), 1);
    for x in 0..3u64 {
        assert_eq!(pulled.eval(&[x]), (3 * x) % 9);
    }

    let mut rng = ChaCha8Rng::seed_from_u64(102);
    for rank in [1usize, 2] {
        let size = 9usize.pow(rank as u32);
        let vals: Vec<u64> = (0..size).map(|_| rng.gen_range(0..9)).collect();
        let h = DepthFunction::from_fn(md, rank, 2, |x| vals[x.iter().fold(0, |acc, &c| acc * 9 + c as usize)]);
        let f = psi_minus_p(&h).unwrap();
        let g = solve_psi_minus_p(&f, 8).unwrap();
        let back = psi_minus_p(&g).unwrap();
        assert_eq!(back, f.refine(back.depth()));
        // g − h lies in the kernel
        let diff = g.sub(&h).unwrap();
        let k = psi_minus_p(&diff).unwrap();
        assert!(k.is_zero());
    }

    let t = table("C(3,2)");
    let mdc = Modulus::new(3, 3).unwrap();
    let split = ClassSplitting::new(&t, mdc);
    for _ in 0..10 {
        let nu = AbQuotElem::from_coeffs(&t, mdc, (0..9).map(|_| rng.gen_range(0..27)).collect());
        let mu = nu.p_minus_phi();
        let s = split.split(&mu).unwrap();
        assert!(s.off_image.is_zero());
        assert_eq!(s.image_part, mu);
        assert_eq!(psi_push_minus_p(&s.witness), mu);
    }
}

#[test]
fn trace_of_non_subgroup_element_vanishes() {
    let t = table("C(3,2)");
    let g = t.parent();
    let h = generate(g, &[g.pow(g.generators()[0], 3)]);
    let sub = GroupTable::of_subgroup(g, &h, "H".into());
    let md = Modulus::new(3, 3).unwrap();
    for idx in 0..t.order() {
        let b = GroupRingElem::basis(&t, md, idx);
        // diagonal of right multiplication on cosets H·t_i, built by hand
        let reps = iwasawa_k1::group_ring::right_coset_reps(&t, &h);
        let mut oracle = vec![0u64; sub.order()];
        for &r in &reps {
            let moved = t.mul(r, idx);
            let ratio = t.element(t.mul(moved, t.inv(r)));
            if h.contains(ratio) {
                oracle[sub.index_of(ratio).unwrap()] += 1;
            }
        }
        let got = iwasawa_k1::group_ring::tr_b_over_a(&b, &sub, &h);
        assert_eq!(got.coeffs(), &oracle[..]);
        if !h.contains(t.element(idx)) {
            assert!(got.is_zero());
        } else {
            assert_eq!(oracle.iter().sum::<u64>(), 3);
        }
    }
}

/// `Π_k f(ζ^k (1+T) − 1)` over `Z/p^m[ζ_p][T]`, truncated at `degree`.
fn conjugate_product(f: &[u64], md: Modulus, degree: usize) -> Vec<CyclotomicElem> {
    let p = md.p();
    let zero = CyclotomicElem::zero(md, 1);
    let mul = |a: &[CyclotomicElem], b: &[CyclotomicElem]| {
        let mut out = vec![zero.clone(); degree];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                if i + j < degree {
                    out[i + j] = out[i + j].add(&x.mul(y).unwrap()).unwrap();
                }
            }
        }
        out
    };
    let mut product = vec![zero.clone(); degree];
    product[0] = CyclotomicElem::one(md, 1);
    for k in 0..p {
        let z = CyclotomicElem::root_power(md, 1, k);
        // ζ^k(1+T) − 1
        let mut lin = vec![zero.clone(); degree];
        lin[0] = z.sub(&CyclotomicElem::one(md, 1)).unwrap();
        lin[1] = z.clone();
        let mut value = vec![zero.clone(); degree];
        let mut pw = vec![zero.clone(); degree];
        pw[0] = CyclotomicElem::one(md, 1);
        for &a in f {
            for (v, w) in value.iter_mut().zip(&pw) {
                *v = v.add(&w.scale(a)).unwrap();
            }
            pw = mul(&pw, &lin);
        }
        product = mul(&product, &value);
    }
    product
}

#[test]
fn coleman_norm_against_conjugate_product() {
    let md = Modulus::new(3, 4).unwrap();
    let n = 24;
    let mut rng = ChaCha8Rng::seed_from_u64(103);
    for trial in 0..4 {
        let len = 2 + trial;
        let mut f: Vec<u64> = (0..len).map(|_| rng.gen_range(0..81)).collect();
        f[0] = 1 + 3 * rng.gen_range(0..27);
        let series = TruncSeries::from_coeffs(md, n, &f);
        let oracle = conjugate_product(&f, md, n);
        let frozen: Vec<u64> = oracle
            .iter()
            .map(|c| {
                assert!(c.coeffs()[1..].iter().all(|&x| x == 0), "conjugate product leaves Z/p^m");
                c.coeffs()[0]
            })
            .collect();
        assert_eq!(norm_series(&series).unwrap().coeffs(), &frozen[..]);
    }
    // constants: determinant of a scalar matrix
    let c = TruncSeries::constant(md, n, 5);
    assert_eq!(norm_series(&c).unwrap(), TruncSeries::constant(md, n, md.pow(5, 3)));
}

#[test]
fn adams_and_eigen_examples() {
    // trivial group: Φ̃(c) = c for c ≡ 1 mod p
    let t = table("C(3,0)");
    let md = Modulus::new(3, 4).unwrap();
    for c in [4u64, 7, 10, 31] {
        let x = K1Class::new(GroupRingElem::scalar(&t, md, c)).unwrap();
        assert_eq!(adams_tilde(&x).unwrap(), x);
    }
    // on Z/3: N(1+p) = (1+p)^p ≠ Φ̃(1+p) = 1+p
    let z3 = table("C(3,1)");
    let c = K1Class::new(GroupRingElem::scalar(&z3, md, 4)).unwrap();
    assert_eq!(norm_operator(&c).unwrap(), c.pow(3));
    assert!(!eigenspace_test(&c).unwrap());
    // exp of a point mass on a p-th power class projects to the identity
    let c9 = table("C(3,2)");
    let g = c9.parent();
    let cube = c9.index_of(g.pow(g.generators()[0], 3)).unwrap();
    let x = exp_class(&GroupRingElem::basis(&c9, md, cube));
    assert_eq!(project_to_eigenspace(&x).unwrap(), K1Class::identity(&c9, md));
    // Teichmüller series and 1 + p
    let mds = Modulus::new(3, 5).unwrap();
    assert!(eigen_test(&TruncSeries::constant(mds, 30, mds.teichmuller(2).unwrap())).unwrap());
    let r = eigen_residual(&TruncSeries::constant(mds, 30, 4)).unwrap();
    assert!(!r.holds);
    assert_eq!(r.residual_valuation, 1);
}

#[test]
fn det_multiplicativity_by_double_sum() {
    let t = table("C(3,2)");
    let md = Modulus::new(3, 3).unwrap();
    let chars = CharacterTable::new(&t).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(104);
    let u = GroupRingElem::random_unit(&t, md, &mut rng);
    let v = GroupRingElem::random_unit(&t, md, &mut rng);
    let product = det_map(&chars, &u).unwrap().mul(&det_map(&chars, &v).unwrap()).unwrap();
    for orbit in 0..chars.orbit_count() {
        let a = chars.representative(orbit).to_vec();
        let level = chars.level(orbit);
        let mut sum = CyclotomicElem::zero(md, level);
        for (i, &x) in u.coeffs().iter().enumerate() {
            for (j, &y) in v.coeffs().iter().enumerate() {
                sum = sum.add(&chars.value(md, &a, t.mul(i, j)).scale(md.mul(x, y))).unwrap();
            }
        }
        assert_eq!(sum, product.values()[orbit]);
    }
}

#[test]
fn h_reads_the_trivial_character() {
    let t = table("C(3,2)");
    let big = table("C(3,3)");
    let md = Modulus::new(3, 3).unwrap();
    let chars = CharacterTable::new(&big).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(105);
    let u = GroupRingElem::random_unit(&t, md, &mut rng);
    let f = det_map(&chars, &lift_cyclic_unit(&u, 3, &big).unwrap()).unwrap();
    assert_eq!(h_map(&f).unwrap(), 1);
    let e = chars.trivial();
    let scaled = f.with_value(e, f.values()[e].scale(4));
    assert_eq!(h_map(&scaled).unwrap(), 4);
}

fn rank_mod_p_by_hand(rows: &[Vec<u64>], p: u64) -> usize {
    let mut a: Vec<Vec<i64>> = rows.iter().map(|r| r.iter().map(|&x| (x % p) as i64).collect()).collect();
    let p = p as i64;
    let cols = a.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for c in 0..cols {
        let Some(r) = (rank..a.len()).find(|&r| a[r][c] != 0) else { continue };
        a.swap(rank, r);
        let inv = (1..p).find(|&i| i * a[rank][c] % p == 1).unwrap();
        for r in 0..a.len() {
            if r != rank && a[r][c] != 0 {
                let f = a[r][c] * inv % p;
                for k in 0..cols {
                    a[r][k] = ((a[r][k] - f * a[rank][k]) % p + p) % p;
                }
            }
        }
        rank += 1;
    }
    rank
}

#[test]
fn kernel_plus_image_counts_basis() {
    for (d, m) in [(3usize, 1usize), (4, 1), (4, 2), (5, 1), (5, 2), (5, 3)] {
        let mut images = Vec::new();
        for i in 1..=d - m {
            for k in 1..d {
                images.push(delta_gamma(&GradedTensor::basis(d, m, 3, i, k)).unwrap().coeffs);
            }
        }
        let image_rank = rank_mod_p_by_hand(&images, 3);
        let kernel = kernel_generators(d, 3, 1, m);
        assert_eq!(kernel.len() + image_rank, (d - m) * (d - 1), "d={d} m={m}");
        assert_eq!(image_rank, d - m - 1);
    }
    // the displayed pair for d = 4, m = 2, i = 1
    let mut pair = GradedTensor::basis(4, 2, 3, 2, 1);
    pair = pair.add(&GradedTensor::basis(4, 2, 3, 1, 3)).unwrap();
    assert!(delta_gamma(&pair).unwrap().is_zero());
    assert!(kernel_generators(4, 3, 1, 2).contains(&pair));
}

#[test]
fn gamma_vanishes_on_group_elements() {
    for desc in ["C(3,2)", "U(3,3,1)", "C(5,1)xC(5,1)"] {
        let t = table(desc);
        let md = Modulus::new(t.prime(), 3).unwrap();
        for i in 0..t.order() {
            let x = K1Class::group_element(&t, md, i);
            assert!(x.gamma().is_zero(), "{desc} element {i}");
            assert_eq!(adams_tilde(&x).unwrap(), K1Class::group_element(&t, md, t.phi(i)));
        }
    }
}

#[test]
fn rational_helpers_are_sane() {
    let half = BigRational::new(BigInt::from(1), BigInt::from(2));
    assert_eq!(rational_mod(&half, 3, 2), 5);
    assert!(BigRational::from_integer(BigInt::from(-3)).is_negative());
}
