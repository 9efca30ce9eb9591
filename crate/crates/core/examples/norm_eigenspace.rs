//! The norm to Φ(G), the eigenspace test and the projection onto it.
use iwasawa_k1::group_ring::GroupRingElem;
use iwasawa_k1::groups::{FiniteGroup, GroupTable};
use iwasawa_k1::k1::{eigenspace_compare, project_to_eigenspace, K1Class, NormContext};
use iwasawa_k1::padic::Modulus;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> iwasawa_k1::Result<()> {
    let g = FiniteGroup::parse("C(3,2)")?;
    let table = GroupTable::of_group(&g);
    let md = Modulus::new(3, 4)?;
    let ctx = NormContext::new(&table)?;
    let mut rng = ChaCha8Rng::seed_from_u64(7);

    for _ in 0..3 {
        let x = K1Class::new(GroupRingElem::random_unit(&table, md, &mut rng))?;
        let before = eigenspace_compare(&x, &ctx)?;
        let y = project_to_eigenspace(&x)?;
        let after = eigenspace_compare(&y, &ctx)?;
        let same_mod_p = x.reduce_mod_p() == y.reduce_mod_p();
        println!(
            "random unit: eigen {} (Γ agrees to {}), projected: eigen {}, same reduction: {}",
            before.holds, before.gamma_agreement, after.holds, same_mod_p
        );
    }
    let w = K1Class::teichmuller(&table, md, 2)?;
    println!("teichmüller class is an eigenvector: {}", eigenspace_compare(&w, &ctx)?.holds);
    Ok(())
}
