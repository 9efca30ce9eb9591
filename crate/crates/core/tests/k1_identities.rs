use iwasawa_k1::group_ring::GroupRingElem;
use iwasawa_k1::groups::{FiniteGroup, GroupTable};
use iwasawa_k1::k1::*;
use iwasawa_k1::padic::Modulus;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::sync::Arc;

fn ctx(desc: &str, m: u32) -> (Arc<GroupTable>, Modulus) {
    let g = FiniteGroup::parse(desc).unwrap();
    (GroupTable::of_group(&g), Modulus::new(g.prime(), m).unwrap())
}

const CARRIERS: [&str; 4] = ["C(3,2)", "C(3,1)xC(3,1)", "U(3,3,1)", "C(3,2)xC(3,1)"];

#[test]
fn gamma_of_exp_is_p_minus_phi() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for desc in CARRIERS {
        let (t, md) = ctx(desc, 4);
        for _ in 0..10 {
            let a = GroupRingElem::random(&t, md, &mut rng);
            let lhs = exp_class(&a).gamma().clone();
            let rhs = a.to_ab().p_minus_phi().with_precision(3).unwrap();
            assert_eq!(lhs, rhs, "{desc}");
        }
    }
}

#[test]
fn gamma_is_additive_and_commutes_with_adams() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for desc in CARRIERS {
        let (t, md) = ctx(desc, 4);
        for _ in 0..5 {
            let x = K1Class::new(GroupRingElem::random_unit(&t, md, &mut rng)).unwrap();
            let y = K1Class::new(GroupRingElem::random_unit(&t, md, &mut rng)).unwrap();
            let xy = x.mul(&y).unwrap();
            assert_eq!(xy.gamma(), &x.gamma().add(y.gamma()).unwrap());
            let tx = adams_tilde(&x).unwrap();
            assert_eq!(tx.gamma(), &x.gamma().phi(), "{desc}");
            assert_eq!(tx.reduce_mod_p(), x.reduce_mod_p().pow(3));
        }
    }
}

#[test]
fn norm_matches_modified_trace() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for desc in CARRIERS {
        let (t, md) = ctx(desc, 4);
        let nc = NormContext::new(&t).unwrap();
        for _ in 0..5 {
            let x = K1Class::new(GroupRingElem::random_unit(&t, md, &mut rng)).unwrap();
            let n = nc.norm(&x).unwrap();
            assert_eq!(n.gamma(), &nc.tr_prime(x.gamma()), "{desc}");
            let a = GroupRingElem::random(&t, md, &mut rng);
            assert_eq!(nc.norm(&exp_class(&a)).unwrap(), exp_class(&nc.trace(&a)), "{desc}");
        }
    }
}

#[test]
fn projection_lands_in_eigenspace() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for desc in CARRIERS {
        let (t, md) = ctx(desc, 4);
        let nc = NormContext::new(&t).unwrap();
        for _ in 0..5 {
            let x = K1Class::new(GroupRingElem::random_unit(&t, md, &mut rng)).unwrap();
            let y = project_to_eigenspace(&x).unwrap();
            let cmp = eigenspace_compare(&y, &nc).unwrap();
            assert!(cmp.holds, "{desc} {cmp:?}");
            assert_eq!(y.reduce_mod_p(), x.reduce_mod_p());
            assert_eq!(project_to_eigenspace(&y).unwrap(), y);
        }
    }
}
