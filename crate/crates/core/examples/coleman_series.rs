//! Power series in Z_p[[T]]: Coleman norm, eigen test and values at ζ - 1.
use iwasawa_k1::coleman::{eigen_residual, norm_series, project_series, TruncSeries};
use iwasawa_k1::padic::Modulus;

fn main() -> iwasawa_k1::Result<()> {
    let md = Modulus::new(3, 5)?;
    let n = 30;
    let gen = TruncSeries::generator(md, n);
    let normed = norm_series(&gen)?;
    println!("N(1+T) = (1+T)^3: {}", normed == gen.phi());
    println!("1+T residual valuation: {}", eigen_residual(&gen)?.residual_valuation);

    let f = TruncSeries::from_coeffs(md, n, &[4, 3, 9, 1]);
    println!("4+3T+9T^2+T^3 residual valuation: {}", eigen_residual(&f)?.residual_valuation);
    let g = project_series(&f)?;
    println!("after projection: {}", eigen_residual(&g)?.residual_valuation);
    println!("same reduction mod p: {}", g.with_precision(1)? == f.with_precision(1)?);

    for level in 1..=2 {
        let v = g.evaluate_cyclotomic(level)?;
        let below = g.evaluate_cyclotomic(level - 1)?;
        println!("level {level}: {:?}, norm to level {}: {:?} vs {:?}",
            v.coeffs(), level - 1, v.norm_to(level - 1).coeffs(), below.coeffs());
    }
    Ok(())
}
