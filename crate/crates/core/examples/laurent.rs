//! The regular part of `ζ(s)/ζ(ks)` at `s = 1` by all three routes.

use kfree::laurent;
use kfree::zetacore::Round;

fn main() -> kfree::Result<()> {
    for k in [2, 3, 10] {
        let closed = laurent::closed_form_gamma0(k, 40)?;
        let series = laurent::series_product_coeffs(k, 0, 40)?;
        println!("k = {k:>2}  closed {}  series {}", closed.to_fixed_truncated(30), series.coeffs[0].to_fixed_truncated(30));
    }

    let e = laurent::extract_coeffs_default(3, 10)?;
    println!("\nk = 3, residue {}", e.residue.to_fixed(30));
    for (n, c) in e.coeffs.iter().enumerate() {
        println!("{n:>3}  {:>33}", c.to_width(32, Round::Zero));
    }
    Ok(())
}
