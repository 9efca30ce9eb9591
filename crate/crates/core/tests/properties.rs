use iwasawa_k1::characters::*;
use iwasawa_k1::class_space::*;
use iwasawa_k1::coleman::*;
use iwasawa_k1::cyclotomic::CyclotomicElem;
use iwasawa_k1::group_ring::*;
use iwasawa_k1::groups::{generate, FiniteGroup, GroupTable};
use iwasawa_k1::k1::*;
use iwasawa_k1::padic::Modulus;
use iwasawa_k1::report::{run_suite, RunConfig, Suite};
use iwasawa_k1::unipotent::*;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::sync::Arc;

fn table(desc: &str) -> Arc<GroupTable> {
    GroupTable::of_group(&FiniteGroup::parse(desc).unwrap())
}

fn carrier() -> impl Strategy<Value = &'static str> {
    prop_oneof![Just("C(3,2)"), Just("C(3,1)xC(3,1)"), Just("U(3,3,1)"), Just("C(5,1)"), Just("C(3,2)xC(3,1)")]
}

fn small() -> ProptestConfig {
    ProptestConfig { cases: 24, ..ProptestConfig::default() }
}

proptest! {
    #![proptest_config(small())]

    #[test]
    fn exp_and_log_are_inverse(p in prop_oneof![Just(3u64), Just(5), Just(7)], m in 2u32..7, a in any::<u64>(), b in any::<u64>()) {
        let md = Modulus::new(p, m).unwrap();
        let mq = md.with_precision(m - 1).unwrap();
        let a = a % md.modulus();
        prop_assert_eq!(mq.reduce(md.log_1p(md.exp_p(a)).unwrap()), mq.reduce(md.mul(p, a)));
        let u = md.reduce(1 + p * (b % md.modulus()));
        let l = md.log_1p(u).unwrap();
        prop_assert_eq!(l % p, 0);
        prop_assert_eq!(mq.reduce(md.exp_p(l / p)), mq.reduce(u));
    }

    #[test]
    fn teichmuller_is_a_root_of_unity(p in prop_oneof![Just(3u64), Just(5), Just(7), Just(11)], m in 1u32..8, a in any::<u64>()) {
        let md = Modulus::new(p, m).unwrap();
        let a = a % md.modulus();
        prop_assume!(a % p != 0);
        let w = md.teichmuller(a).unwrap();
        prop_assert_eq!(md.pow(w, p - 1), 1);
        prop_assert_eq!(w % p, a % p);
    }

    #[test]
    fn cyclotomic_trace_and_norm_are_transitive(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let md = Modulus::new(3, 4).unwrap();
        let poly: Vec<u64> = (0..9).map(|_| rng.gen_range(0..81)).collect();
        let x = CyclotomicElem::from_poly(md, 2, &poly);
        prop_assert_eq!(x.trace_to(1).trace_to(0), x.trace_to(0));
        prop_assert_eq!(x.norm_to(1).norm_to(0), x.norm_to(0));
    }

    #[test]
    fn to_ab_kills_commutators(desc in carrier(), seed in any::<u64>()) {
        let t = table(desc);
        let md = Modulus::new(t.prime(), 3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = GroupRingElem::random(&t, md, &mut rng);
        let b = GroupRingElem::random(&t, md, &mut rng);
        prop_assert_eq!(a.mul(&b).unwrap().to_ab(), b.mul(&a).unwrap().to_ab());
        prop_assert_eq!(a.to_ab().phi(), a.phi().to_ab());
        prop_assert_eq!(a.to_ab().p_minus_phi().omega(), t.ab_of(0));
    }

    #[test]
    fn gamma_identities(desc in carrier(), seed in any::<u64>()) {
        let t = table(desc);
        let md = Modulus::new(t.prime(), 4).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = GroupRingElem::random(&t, md, &mut rng);
        let e = exp_class(&a);
        prop_assert_eq!(e.gamma().clone(), a.to_ab().p_minus_phi().with_precision(3).unwrap());
        prop_assert_eq!(e.mul(&exp_class(&a.neg())).unwrap(), K1Class::identity(&t, md));
        let x = K1Class::new(GroupRingElem::random_unit(&t, md, &mut rng)).unwrap();
        let y = adams_tilde(&x).unwrap();
        prop_assert_eq!(y.gamma().clone(), x.gamma().phi());
        prop_assert_eq!(y.reduce_mod_p(), x.reduce_mod_p().pow(md.p()));
        let ctx = NormContext::new(&t).unwrap();
        prop_assert_eq!(ctx.norm(&x).unwrap().gamma().clone(), ctx.tr_prime(x.gamma()));
    }

    #[test]
    fn gamma_kills_torsion_units(desc in carrier(), seed in any::<u64>()) {
        let t = table(desc);
        let md = Modulus::new(t.prime(), 4).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let w = md.teichmuller(rng.gen_range(1..md.p())).unwrap();
        let x = GroupRingElem::basis(&t, md, rng.gen_range(0..t.order())).scale(w);
        prop_assert!(K1Class::new(x).unwrap().gamma().is_zero());
    }

    #[test]
    fn projection_is_a_section(seed in any::<u64>()) {
        let t = table("C(3,2)");
        let md = Modulus::new(3, 3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let u = GroupRingElem::random_unit(&t, md, &mut rng);
        let v = u.add(&GroupRingElem::random(&t, md, &mut rng).scale(3)).unwrap();
        let pu = project_to_eigenspace(&K1Class::new(u).unwrap()).unwrap();
        let pv = project_to_eigenspace(&K1Class::new(v).unwrap()).unwrap();
        prop_assert_eq!(&pu, &pv);
        prop_assert!(eigenspace_test(&pu).unwrap());
    }

    #[test]
    fn modified_trace_on_off_image_classes(desc in prop_oneof![Just("C(3,2)"), Just("C(3,1)xC(3,1)"), Just("C(3,2)xC(3,2)")], seed in any::<u64>()) {
        let t = table(desc);
        let md = Modulus::new(3, 4).unwrap();
        let ctx = NormContext::new(&t).unwrap();
        let split = ClassSplitting::new(&t, md);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = t.classes().count();
        let y = AbQuotElem::from_coeffs(&t, md, (0..n).map(|c| if split.is_off_image(c) { rng.gen_range(0..81) } else { 0 }).collect());
        prop_assert_eq!(ctx.tr_prime(&y), y.phi().scale(3u64.pow(ctx.d - 1)));
    }

    #[test]
    fn trace_ignores_coset_representatives(seed in any::<u64>()) {
        let t = table("C(3,2)xC(3,1)");
        let g = t.parent();
        let h = generate(g, &[g.generators()[0]]);
        let sub = GroupTable::of_subgroup(g, &h, "H".into());
        let md = Modulus::new(3, 3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let b = GroupRingElem::random(&t, md, &mut rng);
        let reps = right_coset_reps(&t, &h);
        let shifted: Vec<usize> = reps.iter().rev().map(|&r| t.mul(t.index_of(h.elements()[rng.gen_range(0..h.elements().len())]).unwrap(), r)).collect();
        prop_assert_eq!(tr_b_over_a_with_reps(&b, &sub, &h, &reps), tr_b_over_a_with_reps(&b, &sub, &h, &shifted));
    }

    #[test]
    fn transfer_is_transitive(seed in any::<u64>()) {
        let t = table("C(3,3)");
        let g = t.parent();
        let gen = g.generators()[0];
        let mid = generate(g, &[g.pow(gen, 3)]);
        let low = generate(g, &[g.pow(gen, 9)]);
        let mid_t = GroupTable::of_subgroup(g, &mid, "K".into());
        let low_t = GroupTable::of_subgroup(g, &low, "H".into());
        let md = Modulus::new(3, 2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = GroupRingElem::random_unit(&t, md, &mut rng);
        let step = transfer_unit(&transfer_unit(&x, &mid_t, &mid).unwrap(), &low_t, &low).unwrap();
        let direct = transfer_unit(&x, &low_t, &low).unwrap();
        prop_assert_eq!(K1Class::new(step).unwrap(), K1Class::new(direct).unwrap());
    }

    #[test]
    fn sharp_inverts_restriction(rank in 1usize..3, seed in any::<u64>()) {
        let md = Modulus::new(3, 2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let size = 9usize.pow(rank as u32);
        let vals: Vec<u64> = (0..size).map(|_| rng.gen_range(0..9)).collect();
        // factors through depth 1, so the canonical lifts in g♯ are harmless
        let g = DepthFunction::from_fn(md, rank, 1, |x| vals[x.iter().fold(0, |acc, &c| acc * 3 + c as usize)]).refine(2);
        let s = sharp_extend(&g);
        // agrees with g off the image, and lies in ker(Ψ* − p)
        let off = g.sub(&s).unwrap();
        prop_assert!(off.vanishes_off_image());
        prop_assert!(psi_minus_p(&s).unwrap().is_zero());
        prop_assert_eq!(project_to_kernel(&s), s);
    }

    #[test]
    fn measure_split_recomposes(desc in carrier(), seed in any::<u64>()) {
        let t = table(desc);
        let md = Modulus::new(t.prime(), 3).unwrap();
        let split = ClassSplitting::new(&t, md);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = t.classes().count();
        let mu = AbQuotElem::from_coeffs(&t, md, (0..n).map(|_| rng.gen_range(0..md.modulus())).collect());
        let s = split.split(&mu).unwrap();
        prop_assert_eq!(s.off_image.add(&s.image_part).unwrap(), mu);
        prop_assert_eq!(psi_push_minus_p(&s.witness), s.image_part.clone());
        prop_assert_eq!(split.normal_form(&s.image_part), AbQuotElem::zero(&t, md));
    }

    #[test]
    fn series_norm_is_multiplicative(seed in any::<u64>()) {
        let md = Modulus::new(3, 4).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        // polynomial inputs: the norm of a truncated series is that of the polynomial it stores
        let mut draw = || {
            let mut c: Vec<u64> = (0..5).map(|_| rng.gen_range(0..81)).collect();
            c[0] = 1 + 3 * rng.gen_range(0..27);
            TruncSeries::from_coeffs(md, 18, &c)
        };
        let f = draw();
        let g = draw();
        prop_assert_eq!(norm_series(&f.mul(&g).unwrap()).unwrap(), norm_series(&f).unwrap().mul(&norm_series(&g).unwrap()).unwrap());
        prop_assert_eq!(f.mul(&g).unwrap().phi(), f.phi().mul(&g.phi()).unwrap());
    }

    #[test]
    fn substitution_is_associative(seed in any::<u64>()) {
        let md = Modulus::new(3, 3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut draw = |constant: bool| {
            let mut c: Vec<u64> = (0..10).map(|_| rng.gen_range(0..27)).collect();
            if !constant { c[0] = 0; }
            TruncSeries::from_coeffs(md, 10, &c)
        };
        let f = draw(true);
        let g = draw(false);
        let h = draw(false);
        prop_assert_eq!(f.substitute(&g).unwrap().substitute(&h).unwrap(), f.substitute(&g.substitute(&h).unwrap()).unwrap());
    }

    #[test]
    fn projected_series_keep_their_reduction(seed in any::<u64>()) {
        let md = Modulus::new(3, 4).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut c: Vec<u64> = (0..24).map(|_| rng.gen_range(0..3)).collect();
        c[0] = rng.gen_range(1..3);
        let f = TruncSeries::from_coeffs(md, 24, &c);
        let g = project_series(&f).unwrap();
        prop_assert_eq!(g.with_precision(1).unwrap(), f.with_precision(1).unwrap());
        let lifted = f.add(&TruncSeries::from_coeffs(md, 24, &(0..24).map(|_| 3 * rng.gen_range(0..27)).collect::<Vec<_>>())).unwrap();
        prop_assert_eq!(project_series(&lifted).unwrap(), g);
    }

    #[test]
    fn det_respects_products_adams_and_orthogonality(desc in prop_oneof![Just("C(3,2)"), Just("C(3,1)xC(3,1)"), Just("C(5,1)")], seed in any::<u64>()) {
        let t = table(desc);
        let md = Modulus::new(t.prime(), 3).unwrap();
        let chars = CharacterTable::new(&t).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let u = GroupRingElem::random_unit(&t, md, &mut rng);
        let v = GroupRingElem::random_unit(&t, md, &mut rng);
        let du = det_map(&chars, &u).unwrap();
        prop_assert_eq!(det_map(&chars, &u.mul(&v).unwrap()).unwrap(), du.mul(&det_map(&chars, &v).unwrap()).unwrap());
        let x = K1Class::new(u.clone()).unwrap();
        let r = det_map(&chars, adams_tilde(&x).unwrap().representative()).unwrap().sub(&adams_psi(&du)).unwrap().valuation();
        prop_assert!(r >= 2);
        let a = GroupRingElem::random(&t, md, &mut rng);
        prop_assert_eq!(character_total(&det_map(&chars, &a).unwrap()), md.mul(t.order() as u64, a.coeffs()[0]));
        // classes with equal DET are equal
        let y = K1Class::new(v.clone()).unwrap();
        if x != y {
            prop_assert_ne!(du, det_map(&chars, &v).unwrap());
        }
    }
}

#[test]
fn p_th_power_class_is_well_defined() {
    for desc in ["U(3,3,1)", "U(4,3,1)", "C(3,2)xC(3,1)"] {
        let t = table(desc);
        for x in 0..t.order() {
            for y in 0..t.order() {
                let conj = t.mul(t.mul(y, x), t.inv(y));
                assert_eq!(t.classes().class_of(t.phi(conj)), t.classes().class_of(t.phi(x)), "{desc}");
            }
        }
    }
}

#[test]
fn psi_iterates_shrink_to_the_identity_class() {
    for desc in ["C(3,3)", "U(3,3,1)", "C(3,2)xC(3,1)", "U(4,3,1)"] {
        let t = table(desc);
        let levels = psi_iterates(&t);
        let sizes: Vec<usize> = levels.iter().map(|l| l.iter().filter(|&&b| b).count()).collect();
        assert!(sizes.windows(2).all(|w| w[1] < w[0]), "{desc}: {sizes:?}");
        let last = levels.last().unwrap();
        assert_eq!(sizes.last(), Some(&1));
        assert!(last[t.classes().class_of(0)]);
    }
}

#[test]
fn omega_of_to_ab_is_onto() {
    for desc in ["U(3,3,1)", "C(3,2)xC(3,1)"] {
        let t = table(desc);
        let md = Modulus::new(3, 2).unwrap();
        let hit: std::collections::HashSet<usize> = (0..t.order()).map(|i| GroupRingElem::basis(&t, md, i).to_ab().omega()).collect();
        assert_eq!(hit.len(), t.ab_count());
    }
}

#[test]
fn characters_die_under_repeated_adams() {
    for desc in ["C(3,3)", "C(3,2)xC(3,1)", "C(5,2)"] {
        let t = table(desc);
        let chars = CharacterTable::new(&t).unwrap();
        let p = t.prime();
        for orbit in 0..chars.orbit_count() {
            let level = chars.level(orbit);
            let mut a = chars.representative(orbit).to_vec();
            for _ in 0..level {
                a.iter_mut().for_each(|c| *c *= p);
            }
            assert_eq!(chars.locate(&a).0, chars.trivial(), "{desc} orbit {orbit}");
        }
    }
}

#[test]
fn second_family_entries_commute() {
    for (d, n) in [(4, 1), (5, 1), (4, 2)] {
        let g = FiniteGroup::unitriangular(d, 3, n).unwrap();
        for m in 1..=d - 2 {
            for t in kernel_generators(d, 3, n, m) {
                let terms = t.terms();
                if terms.len() != 1 {
                    continue;
                }
                let ((i, k), _) = terms[0];
                let a = g.root_element(m + i, i, 1);
                let b = g.root_element(k + 1, k, 1);
                assert_eq!(g.commutator(a, b), g.identity(), "d={d} m={m} i={i} k={k}");
            }
        }
    }
}

#[test]
fn reports_are_reproducible() {
    let config = RunConfig { suites: vec![Suite::Gamma, Suite::Coleman, Suite::Hom], samples: 4, seed: 17, ..RunConfig::default() };
    let a = run_suite(&config).unwrap().to_json();
    let b = run_suite(&config).unwrap().to_json();
    assert_eq!(a, b);
    let echoed: iwasawa_k1::report::Report = serde_json::from_str(&a).unwrap();
    assert_eq!(run_suite(&echoed.config).unwrap().to_json(), a);
}
