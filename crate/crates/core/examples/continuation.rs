//! `ζ(s)/ζ(ks)` from the truncated sum, inside and outside `ℜ(s) > 1`.

use num_complex::Complex64;

use kfree::continuation::{self, Order};
use kfree::counting::Census;
use kfree::zetacore;

fn main() -> kfree::Result<()> {
    let x = 1_000_000;
    let census = Census::new(2, x)?;
    for s in [3.0, 2.0, 1.5, 0.8, 0.6] {
        let sc = Complex64::new(s, 0.0);
        let v = continuation::continued_value(&census, sc, x, Order::Corrected)?.value.re;
        let w = continuation::integral_continuation(&census, sc, x)?.re;
        let exact = zetacore::zeta_real(s, 20)?.to_f64() / zetacore::zeta_real(2.0 * s, 20)?.to_f64();
        println!("s = {s}  sum {v:.8}  integral {w:.8}  exact {exact:.8}");
    }
    let s = Complex64::new(0.75, 10.0);
    println!("s = {s}  {}", continuation::continued_value(&census, s, x, Order::Corrected)?.value);
    println!("1/zeta(2) from s = 1/2: {:.5}", continuation::zeta_reciprocal_limit(&census, x)?);
    Ok(())
}
