//! exp/log on 1 + pZ_p and Teichmüller lifts.
use iwasawa_k1::padic::Modulus;

fn main() -> iwasawa_k1::Result<()> {
    for (p, m) in [(3, 4), (5, 3)] {
        let md = Modulus::new(p, m)?;
        println!("p = {p}, working mod {}", md.modulus());
        for a in [p, 2 * p, p * p] {
            let u = md.exp_p(a);
            println!("  exp({a}) = {u}, log back = {}", md.log_1p(u)?);
        }
        for a in 1..p {
            let w = md.teichmuller(a)?;
            println!("  teich({a}) = {w}, w^{} = {}", p - 1, md.pow(w, p - 1));
        }
    }
    Ok(())
}
