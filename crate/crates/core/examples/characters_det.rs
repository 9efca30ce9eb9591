//! Abelian carriers: DET into character space and the h-map.
use iwasawa_k1::characters::{adams_psi, det_map, h_map, hom1_test, lift_cyclic_unit, CharacterTable};
use iwasawa_k1::group_ring::GroupRingElem;
use iwasawa_k1::groups::{FiniteGroup, GroupTable};
use iwasawa_k1::padic::Modulus;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> iwasawa_k1::Result<()> {
    let g = FiniteGroup::parse("C(3,2)")?;
    let table = GroupTable::of_group(&g);
    let chars = CharacterTable::new(&table)?;
    let md = Modulus::new(3, 3)?;
    println!("{} has {} Galois orbits of characters", g, chars.orbit_count());

    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let u = GroupRingElem::random_unit(&table, md, &mut rng);
    let v = GroupRingElem::random_unit(&table, md, &mut rng);
    let du = det_map(&chars, &u)?;
    let dv = det_map(&chars, &v)?;
    println!("DET(uv) = DET(u)DET(v): {}", det_map(&chars, &u.mul(&v)?)? == du.mul(&dv)?);
    println!("DET(u) in the image: {}", hom1_test(&du)?);
    println!("ψ(DET(u)) at the trivial orbit: {:?}", adams_psi(&du).values()[chars.trivial()].coeffs());

    let big = GroupTable::of_group(&FiniteGroup::cyclic(3, 4)?);
    let lifted = lift_cyclic_unit(&u, 4, &big)?;
    let big_chars = CharacterTable::new(&big)?;
    println!("h of the lifted unit: {}", h_map(&det_map(&big_chars, &lifted)?)?);
    for rec in du.to_records() {
        println!("  orbit {:?}: {:?}", rec.character, rec.value);
    }
    Ok(())
}
