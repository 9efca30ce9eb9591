//! Units of Z_p[G], their logarithm Γ and classes in K_1.
use iwasawa_k1::group_ring::GroupRingElem;
use iwasawa_k1::groups::{FiniteGroup, GroupTable};
use iwasawa_k1::k1::{exp_class, K1Class};
use iwasawa_k1::padic::Modulus;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> iwasawa_k1::Result<()> {
    let g = FiniteGroup::parse("U(3,3,1)")?;
    let table = GroupTable::of_group(&g);
    let md = Modulus::new(3, 4)?;
    println!("{} has order {}, {} classes", g, table.order(), table.classes().count());

    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let u = GroupRingElem::random_unit(&table, md, &mut rng);
    let v = GroupRingElem::random_unit(&table, md, &mut rng);
    let (x, y) = (K1Class::new(u.clone())?, K1Class::new(v.clone())?);
    let xy = K1Class::new(u.mul(&v)?)?;
    let sum = x.gamma().add(y.gamma())?;
    println!("Γ(uv) = Γ(u) + Γ(v): {}", *xy.gamma() == sum);

    // exp_class(b) is the class of exp(p·b)
    let b = GroupRingElem::random(&table, md, &mut rng);
    let expected = b.to_ab().p_minus_phi().with_precision(3)?;
    println!("Γ(exp(pb)) = (p - Φ)b: {}", *exp_class(&b).gamma() == expected);

    let h = K1Class::group_element(&table, md, 1);
    println!("Γ of a group element is zero: {}", h.gamma().is_zero());
    Ok(())
}
