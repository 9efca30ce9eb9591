//! Unitriangular groups: root relations, central series and the commutator pairing.
use iwasawa_k1::groups::FiniteGroup;
use iwasawa_k1::unipotent::{
    central_series_checks, expected_kernel_rank, family_rank, kernel_generators, relation_failures,
    wedge_identity_check,
};

fn main() -> iwasawa_k1::Result<()> {
    let (d, p, n) = (4, 3, 1);
    let g = FiniteGroup::unitriangular(d, p, n)?;
    println!("{g}: order {}", g.order());
    println!("root relation failures: {}", relation_failures(&g)?.len());
    for c in central_series_checks(&g)? {
        println!("  layer {}: {c:?}", c.layer);
    }
    for layer in 1..d - 1 {
        let family = kernel_generators(d, p, n, layer);
        println!(
            "layer {layer}: {} kernel generators, rank {} (expected {})",
            family.len(),
            family_rank(p, n, &family),
            expected_kernel_rank(d, layer)
        );
        println!("  wedge identities: {:?}", wedge_identity_check(&g, layer, 1)?.holds);
    }
    Ok(())
}
